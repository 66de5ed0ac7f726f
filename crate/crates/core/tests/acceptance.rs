//! Acceptance criteria: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::ptr;
use std::time::{Duration, Instant};

use common::*;
use mgcat::cmg::{cmg_derive, CmgDerivation, CmgRule};
use mgcat::mg::{mg_derive, mg_merge, mg_move, FeatureSeq, MgError, MgTree};
use mgcat::semantics::{
    analyze, internalize, normal_forms, parse_term, reduce_step, Fol, LmuTerm, SemError, SemType, Signature,
};
use mgcat::translate::{check_equivalence, to_categorial, to_stabler, LicensorPartition};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BOUND: usize = 10_000;
const GOLDEN: &str = "the children ate a pizza";

type Outcome = Result<String, String>;

fn golden_readings() -> Outcome {
    let start = Instant::now();
    let g = load("pizza.lex");
    let a = analyze(&g.cmg().unwrap(), g.sem.as_ref().unwrap(), &words(GOLDEN), BOUND).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let got: Vec<String> = a.iter().flat_map(|x| &x.readings).map(|r| Fol::parse(&r.fol).unwrap().canonical().to_string()).collect();
    let want: BTreeSet<String> = [
        "∃e past(e) ∧ ∃p(pizz(p) ∧ patient(e,p) ∧ ∀d(child(d) ⇒ eat(e,p,d) ∧ agent(e,d)))",
        "∃e past(e) ∧ ∀d(child(d) ⇒ agent(e,d) ∧ ∃p(pizz(p) ∧ eat(e,p,d) ∧ patient(e,p)))",
    ]
    .iter()
    .map(|s| Fol::parse(s).unwrap().canonical().to_string())
    .collect();
    if got.len() != 2 {
        return Err(format!("{} readings: {got:?}", got.len()));
    }
    if got.iter().cloned().collect::<BTreeSet<_>>() != want {
        return Err(format!("readings {got:?} differ from {want:?}"));
    }
    if elapsed > Duration::from_secs(5) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("2 readings, canonical match, {elapsed:.2?}"))
}

fn descends(anc: &CmgDerivation, d: &CmgDerivation) -> bool {
    !ptr::eq(anc, d) && anc.nodes().into_iter().any(|n| ptr::eq(n, d))
}

fn derivation_replay() -> Outcome {
    let g = load("pizza.lex");
    let lex = g.cmg().unwrap();
    let ds = cmg_derive(&lex, &words(GOLDEN), BOUND).map_err(|e| e.to_string())?;
    let [d] = ds.as_slice() else { return Err(format!("{} derivations", ds.len())) };
    d.replay(Some(&lex)).map_err(|e| e.to_string())?;
    let head = |n: &CmgDerivation| match n.lexical_head().map(|h| &h.rule) {
        Some(CmgRule::Lex { key }) => key.clone(),
        _ => String::new(),
    };
    // (description, rule, formula, lexical head or "", label or "")
    let steps: [(&str, &str, &str, &str, &str); 10] = [
        ("DP merge (the children)", "mg", "k * d", "the", "(ε | the | children)"),
        ("DP merge (a pizza)", "mg", "k * d", "a", "(ε | a | pizza)"),
        ("lexical merge", "mg", "V", "ate", ""),
        ("hdr", "hdr", "k \\ (d \\ v)", "_modif", ""),
        ("case-variable merge", "mg", "d \\ v", "_modif", ""),
        ("object move", "mv", "d \\ v", "_modif", "(a pizza | ate | ε)"),
        ("subject-variable merge", "mg", "v", "_modif", ""),
        ("hdr with infl", "hdr", "k \\ t", "_infl", ""),
        ("subject move", "mv", "t", "_infl", "(the children | ate | a pizza)"),
        ("comp merge", "mg", "c", "_comp", "(ε | ε | the children ate a pizza)"),
    ];
    let nodes = d.nodes();
    let mut found = Vec::new();
    for (desc, rule, formula, lexhead, label) in steps {
        let m: Vec<&CmgDerivation> = nodes
            .iter()
            .copied()
            .filter(|n| n.rule.name() == rule && n.formula().to_string() == formula && head(n) == lexhead)
            .collect();
        let [n] = m.as_slice() else { return Err(format!("{desc}: {} matching nodes", m.len())) };
        if !label.is_empty() && n.conclusion.label.to_string() != label {
            return Err(format!("{desc}: label {} instead of {label}", n.conclusion.label));
        }
        found.push(*n);
    }
    for i in 2..9 {
        if !descends(found[i + 1], found[i]) {
            return Err(format!("{} does not depend on {}", steps[i + 1].0, steps[i].0));
        }
    }
    if !descends(found[5], found[1]) || !descends(found[8], found[0]) {
        return Err("a DP is not the moved constituent of its move".into());
    }
    Ok(format!(
        "10 listed steps in dependency order; derivation has {} rule applications (the extra one is the subject case-variable merge)",
        d.rule_count()
    ))
}

fn pizza_signature() -> Signature {
    load("pizza.lex").signature.with_free_refs()
}

fn internalization_golden() -> Outcome {
    let g = load("pizza.lex");
    let a = analyze(&g.cmg().unwrap(), g.sem.as_ref().unwrap(), &words(GOLDEN), BOUND).map_err(|e| e.to_string())?;
    let sig = pizza_signature();
    let t = |s: &str| parse_term(s, &sig, Some(&SemType::T)).unwrap();
    // the displayed pre-internalization term, with the connective before
    // past(e) taken from the inflection's lexical term
    let pre = t("[e | eat(e, mu gamma. [p | pizz(p) & (gamma p)], mu delta. [| [d | child(d)] => [| (delta d)]]) && patient(e,p) & past(e) && agent(e,d)]");
    let post = t("[e | eat(e, mu gamma. [p | pizz(p) & (gamma p) & patient(e,p)], mu delta. [| [d | child(d)] => [| (delta d) & agent(e,d)]]) & past(e)]");
    if !a[0].raw.alpha_eq(&pre) {
        return Err(format!("pre-internalization term {}", a[0].raw));
    }
    if !a[0].internalized.alpha_eq(&post) {
        return Err(format!("post-internalization term {}", a[0].internalized));
    }
    // with a fusion before past(e), as literally displayed, no unique host exists
    let literal = t("[e | eat(e, mu gamma. [p | pizz(p) & (gamma p)], mu delta. [| [d | child(d)] => [| (delta d)]]) && patient(e,p) && past(e) && agent(e,d)]");
    let note = match internalize(&literal) {
        Err(SemError::AmbiguousHost(_)) => "; literal display with a fusion before past(e) has no unique host",
        _ => "",
    };
    Ok(format!("pre and post terms match{note}"))
}

fn translation_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = 0;
    for _ in 0..1000 {
        let e = random_entry(&mut rng);
        let part = LicensorPartition::read_off(&e);
        match to_categorial(&e).and_then(|f| to_stabler(&f, &part)) {
            Ok(seq) if seq.features == e => {}
            _ => failures += 1,
        }
    }
    let part = LicensorPartition::new(BASE.iter().copied(), MOVE.iter().copied());
    for _ in 0..1000 {
        let f = random_formula(&mut rng);
        match to_stabler(&f, &part).and_then(|s| to_categorial(&s.features)) {
            Ok(g) if g == f => {}
            _ => failures += 1,
        }
    }
    if failures > 0 {
        return Err(format!("{failures} failures"));
    }
    Ok("1000 entries and 1000 formulae, 0 failures".into())
}

fn generative_equivalence() -> Outcome {
    let mut parts = Vec::new();
    for name in ["pizza.lex", "wh.lex", "nested.lex", "headmove.lex"] {
        let g = load(name);
        let start = Instant::now();
        let r = check_equivalence(&g.mg().unwrap(), &g.cmg().unwrap(), 6, BOUND);
        let elapsed = start.elapsed();
        if !r.is_equivalent() {
            return Err(format!("{name}: {}", r.render()));
        }
        if r.common.is_empty() {
            return Err(format!("{name}: generates nothing"));
        }
        if elapsed > Duration::from_secs(60) {
            return Err(format!("{name}: took {elapsed:?}"));
        }
        parts.push(format!("{name} {} strings {elapsed:.1?}", r.common.len()));
    }
    Ok(parts.join(", "))
}

fn smc_crash() -> Outcome {
    let g = load("smc.lex");
    let mg = g.mg().unwrap();
    let entry = |w: &str| -> FeatureSeq { mg.entries.iter().find(|(k, _)| k == w).unwrap().1.clone() };
    let t = mg_merge(&MgTree::leaf(entry("saw")), &MgTree::leaf(entry("john"))).map_err(|e| e.to_string())?;
    let t = mg_merge(&t, &MgTree::leaf(entry("mary"))).map_err(|e| e.to_string())?;
    match mg_move(&t) {
        Err(MgError::SmcViolation(_)) => {}
        other => return Err(format!("mg_move gave {other:?}")),
    }
    let cmg = g.cmg().unwrap();
    for s in ["john saw mary", "mary saw john", "saw john mary", "saw mary john", "john mary saw", "mary john saw"] {
        let a = mg_derive(&mg, &words(s), BOUND).map_err(|e| e.to_string())?;
        let b = cmg_derive(&cmg, &words(s), BOUND).map_err(|e| e.to_string())?;
        if !a.is_empty() || !b.is_empty() {
            return Err(format!("`{s}` parsed"));
        }
    }
    Ok("mg_move reports the violation; no parse in either engine".into())
}

fn w_term() -> LmuTerm {
    let sig = pizza_signature();
    parse_term(
        "(((eat e) (mu gamma. [p | (pizz p) & (gamma p) & ((patient e) p)])) (mu delta. [| [d | (child d)] => [| (delta d) & ((agent e) d)]]))",
        &sig,
        Some(&SemType::T),
    )
    .unwrap()
}

fn reduction_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut gen = TermGen::new();
    let mut steps = 0;
    for i in 0..10_000 {
        let ty = [SemType::T, SemType::E, SemType::arrow(SemType::E, SemType::T)][i % 3].clone();
        let t = gen.term(&mut rng, &ty, 4);
        let before = t.typecheck().map_err(|e| format!("generator produced an ill-typed term {t}: {e}"))?;
        for (rule, u) in reduce_step(&t) {
            steps += 1;
            match u.typecheck() {
                Ok(after) if after == before => {}
                other => return Err(format!("{rule} step from {t} to {u}: {other:?}")),
            }
        }
    }
    let w = w_term();
    let nf = normal_forms(&w, BOUND).map_err(|e| e.to_string())?;
    let mut all = Vec::new();
    brute_force_normal_forms(&w, &mut all);
    let oracle = distinct(&all);
    if nf.len() != oracle.len() {
        return Err(format!("normal_forms found {}, oracle {}", nf.len(), oracle.len()));
    }
    Ok(format!(
        "10000 terms, {steps} steps type-preserving; W has {} normal forms ({} reduction paths)",
        nf.len(),
        all.len()
    ))
}

fn label_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ds = random_derivations(&mut rng, 1000);
    let mut violations = 0;
    for (d, yields) in &ds {
        let c = &d.conclusion;
        if !yields.contains(&c.label.words()) || !c.context.is_empty() {
            violations += 1;
        }
        violations += d.nodes().iter().filter(|n| !n.conclusion.label_discipline_holds()).count();
    }
    if violations > 0 {
        return Err(format!("{violations} violations over {} derivations", ds.len()));
    }
    Ok(format!("{} derivations, 0 violations", ds.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("golden readings", golden_readings),
        ("derivation replay", derivation_replay),
        ("internalization golden", internalization_golden),
        ("translation round-trip", translation_round_trip),
        ("generative equivalence", generative_equivalence),
        ("SMC crash", smc_crash),
        ("reduction-engine properties", reduction_properties),
        ("head/label invariants", label_invariants),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
