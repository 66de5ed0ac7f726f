//! Shared fixtures and random generators for the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use mgcat::cmg::CFormula;
use mgcat::lexicon::Grammar;
use mgcat::mg::{Feature, FeatureKind};
use mgcat::semantics::{LmuTerm, SemType};
use rand::seq::SliceRandom;
use rand::Rng;

pub const BASE: &[&str] = &["a", "b", "c", "d", "n", "v"];
pub const MOVE: &[&str] = &["k", "wh", "q"];

pub fn lexicon_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../lexicons").join(name)
}

pub fn load(name: &str) -> Grammar {
    Grammar::load(lexicon_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

fn pick<R: Rng>(rng: &mut R, pool: &[&str]) -> String {
    pool.choose(rng).unwrap().to_string()
}

/// A random feature list matching the lexical entry grammar, with base
/// and movement names drawn from disjoint pools.
pub fn random_entry<R: Rng>(rng: &mut R) -> Vec<Feature> {
    let mut out = Vec::new();
    if rng.gen_bool(0.7) {
        out.push(if rng.gen_bool(0.7) { Feature::selector(pick(rng, BASE)) } else { Feature::head_selector(pick(rng, BASE)) });
        for _ in 0..rng.gen_range(0..4) {
            out.push(match rng.gen_range(0..3) {
                0 => Feature::selector(pick(rng, BASE)),
                1 => Feature::head_selector(pick(rng, BASE)),
                _ => Feature::licensor(pick(rng, MOVE)),
            });
        }
    }
    out.push(Feature::base(pick(rng, BASE)));
    for _ in 0..rng.gen_range(0..3) {
        out.push(Feature::licensee(pick(rng, MOVE)));
    }
    out
}

/// A random feature list of any shape.
pub fn random_features<R: Rng>(rng: &mut R) -> Vec<Feature> {
    let kinds = [FeatureKind::Base, FeatureKind::Selector, FeatureKind::HeadSelector, FeatureKind::Licensor, FeatureKind::Licensee];
    (0..rng.gen_range(1..6))
        .map(|_| {
            let kind = *kinds.choose(rng).unwrap();
            let pool = if rng.gen_bool(0.5) { BASE } else { MOVE };
            Feature::new(kind, pick(rng, pool))
        })
        .collect()
}

fn random_c<R: Rng>(rng: &mut R) -> CFormula {
    let mut f = CFormula::base(pick(rng, BASE));
    for _ in 0..rng.gen_range(0..3) {
        f = CFormula::tensor(pick(rng, MOVE), f);
    }
    f
}

/// A random formula of lexical shape over the same name pools.
pub fn random_formula<R: Rng>(rng: &mut R) -> CFormula {
    if rng.gen_bool(0.3) {
        return random_c(rng);
    }
    let mut x = random_c(rng);
    for _ in 0..rng.gen_range(0..4) {
        x = match rng.gen_range(0..3) {
            0 => CFormula::under(pick(rng, BASE), x),
            1 => CFormula::under(pick(rng, MOVE), x),
            _ => CFormula::under_hdr(pick(rng, BASE), x),
        };
    }
    if rng.gen_bool(0.7) {
        CFormula::over(x, pick(rng, BASE))
    } else {
        CFormula::over_hdr(x, pick(rng, BASE))
    }
}

/// Random well-typed λμ-DRS terms. Predicates are `P : e -> t`,
/// `R : e -> e -> t` and `E : ev -> t`.
pub struct TermGen {
    pub counter: usize,
}

#[derive(Clone)]
enum Bound {
    Lam(String, SemType),
    Mu(String, SemType),
    Ref(String, SemType),
}

impl TermGen {
    pub fn new() -> Self {
        TermGen { counter: 0 }
    }

    fn fresh(&mut self, base: &str) -> String {
        self.counter += 1;
        format!("{base}{}", self.counter)
    }

    pub fn term<R: Rng>(&mut self, rng: &mut R, ty: &SemType, depth: usize) -> LmuTerm {
        self.gen(rng, ty, depth, &mut vec![Bound::Ref("e0".into(), SemType::Ev), Bound::Ref("x0".into(), SemType::E)])
    }

    fn vars_of(env: &[Bound], ty: &SemType) -> Vec<LmuTerm> {
        env.iter()
            .filter_map(|b| match b {
                Bound::Lam(n, t) if t == ty => Some(LmuTerm::var(n, t.clone())),
                Bound::Ref(n, t) if t == ty => Some(LmuTerm::dref(n, t.clone())),
                _ => None,
            })
            .collect()
    }

    fn gen<R: Rng>(&mut self, rng: &mut R, ty: &SemType, depth: usize, env: &mut Vec<Bound>) -> LmuTerm {
        let e = SemType::E;
        let t = SemType::T;
        let et = SemType::arrow(SemType::E, SemType::T);
        let leaf = depth == 0;
        // a redex or a μ-abstraction of the requested type
        if !leaf && rng.gen_bool(0.25) {
            let choice = rng.gen_range(0..3);
            if choice == 0 {
                let a = [e.clone(), et.clone()].choose(rng).unwrap().clone();
                let f = self.gen(rng, &SemType::arrow(a.clone(), ty.clone()), depth - 1, env);
                let x = self.gen(rng, &a, depth - 1, env);
                return LmuTerm::app(f, x);
            }
            if choice == 1 || *ty != t {
                let alpha = self.fresh("a");
                env.push(Bound::Mu(alpha.clone(), ty.clone()));
                let body = self.gen(rng, &t, depth - 1, env);
                env.pop();
                return LmuTerm::mu(alpha, ty.clone(), body);
            }
        }
        match ty {
            SemType::T => {
                let mus: Vec<(String, SemType)> = env
                    .iter()
                    .filter_map(|b| if let Bound::Mu(n, t) = b { Some((n.clone(), t.clone())) } else { None })
                    .collect();
                let pick_n = if leaf { rng.gen_range(0..2) } else { rng.gen_range(0..6) };
                match pick_n {
                    0 | 1 if !mus.is_empty() && rng.gen_bool(0.6) => {
                        let (a, at) = mus.choose(rng).unwrap().clone();
                        let arg = self.gen(rng, &at, depth.saturating_sub(1), env);
                        LmuTerm::name(a, arg)
                    }
                    0 => {
                        let x = self.gen(rng, &e, 0, env);
                        LmuTerm::app(LmuTerm::constant("P", et.clone()), x)
                    }
                    1 => {
                        let x = self.gen(rng, &SemType::Ev, 0, env);
                        LmuTerm::app(LmuTerm::constant("E", SemType::arrow(SemType::Ev, t.clone())), x)
                    }
                    2 => {
                        let r = self.fresh("r");
                        env.push(Bound::Ref(r.clone(), e.clone()));
                        let body = self.gen(rng, &t, depth - 1, env);
                        env.pop();
                        LmuTerm::drs(vec![(r, e.clone())], body)
                    }
                    3 => LmuTerm::and(self.gen(rng, &t, depth - 1, env), self.gen(rng, &t, depth - 1, env)),
                    4 => {
                        let r = self.fresh("r");
                        env.push(Bound::Ref(r.clone(), e.clone()));
                        let ante = self.gen(rng, &t, depth - 1, env);
                        let cons = self.gen(rng, &t, depth - 1, env);
                        env.pop();
                        LmuTerm::implies(LmuTerm::drs(vec![(r, e.clone())], ante), cons)
                    }
                    _ => {
                        let x = self.gen(rng, &e, depth - 1, env);
                        let y = self.gen(rng, &e, depth - 1, env);
                        LmuTerm::apps(LmuTerm::constant("R", SemType::arrow(e.clone(), et.clone())), [x, y])
                    }
                }
            }
            SemType::Arrow(a, b) => {
                let x = self.fresh("x");
                env.push(Bound::Lam(x.clone(), (**a).clone()));
                let body = self.gen(rng, b, depth.saturating_sub(1), env);
                env.pop();
                LmuTerm::lam(x, (**a).clone(), body)
            }
            other => {
                let vs = Self::vars_of(env, other);
                vs.choose(rng).cloned().expect("every base type has a referent in scope")
            }
        }
    }
}

/// Every normal form reachable from `t`, found by exploring each reduction
/// sequence separately, without sharing work between them.
pub fn brute_force_normal_forms(t: &LmuTerm, out: &mut Vec<LmuTerm>) {
    let next = mgcat::semantics::reduce_step(t);
    if next.is_empty() {
        out.push(t.clone());
    }
    for (_, u) in next {
        brute_force_normal_forms(&u, out);
    }
}

/// Distinct terms up to α-equivalence.
pub fn distinct(ts: &[LmuTerm]) -> Vec<LmuTerm> {
    let mut out: Vec<LmuTerm> = Vec::new();
    for t in ts {
        if !out.iter().any(|u| u.alpha_eq(t)) {
            out.push(t.clone());
        }
    }
    out
}

/// Random complete CMG derivations, each paired with the string set of the
/// MG engine on the same vocabulary. Vocabularies are the bundled
/// grammars with random synonyms added.
pub fn random_derivations<R: Rng>(
    rng: &mut R,
    count: usize,
) -> Vec<(std::sync::Arc<mgcat::cmg::CmgDerivation>, std::sync::Arc<std::collections::BTreeSet<Vec<String>>>)> {
    use mgcat::cmg::cmg_generate;
    use mgcat::mg::{mg_generate, MgLexicon};
    use mgcat::translate::mg_to_cmg;
    use std::sync::Arc;

    let templates = ["pizza.lex", "wh.lex", "nested.lex", "headmove.lex"];
    let mut out = Vec::new();
    let mut round = 0;
    while out.len() < count {
        round += 1;
        let g = load(templates.choose(rng).unwrap());
        let base = g.mg().unwrap();
        let mut entries = base.entries.clone();
        for (key, seq) in &base.entries {
            if !key.starts_with('_') && rng.gen_bool(0.5) {
                let w = format!("{key}{round}");
                let mut s = seq.clone();
                s.phon = vec![w.clone()];
                entries.push((w, s));
            }
        }
        let mg = MgLexicon { entries, start: base.start.clone() };
        let cmg = mg_to_cmg(&mg, &g.features).unwrap();
        let yields: Arc<std::collections::BTreeSet<Vec<String>>> =
            Arc::new(mg_generate(&mg, 6, 10_000).iter().map(|d| d.sentence()).collect());
        let mut ds = cmg_generate(&cmg, 6, 10_000);
        ds.shuffle(rng);
        ds.truncate(100);
        out.extend(ds.into_iter().map(|d| (d, yields.clone())));
    }
    out.truncate(count);
    out
}
