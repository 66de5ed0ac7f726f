//! Bottom-up proof search for categorial minimalist grammars.
//!
//! Only elimination rules are used. A selector demanding a base category
//! `b` may take a fresh hypothesis `y : b` standing for a phrase of some
//! lexical product type `m_n * ... * b`; that pending chain is tracked
//! until its licensees have all been checked by `m \ A` selectors, each
//! check being a merge with a fresh `x : m` followed by product
//! elimination. Intermediate licensees are eliminated against a further
//! hypothesis, the last one against the moving phrase itself.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use super::{rule_hdr, rule_mg, rule_mv, var_axiom, CFormula, CmgDerivation, CmgError, CmgLexicon, CmgRule};
use crate::mg::{bag_of, bag_union, WordBag, WordLimit};

/// Variable names in the order `u v w x y z u1 v1 ...`.
pub fn fresh_var_name(i: usize) -> String {
    const BASE: [&str; 6] = ["u", "v", "w", "x", "y", "z"];
    let round = i / BASE.len();
    if round == 0 {
        BASE[i].to_string()
    } else {
        format!("{}{}", BASE[i % BASE.len()], round)
    }
}

#[derive(Debug, Clone)]
struct Chain {
    /// Hypothesis currently standing for the moving phrase.
    slot: String,
    checked: Vec<String>,
    pending: Vec<String>,
    base: String,
}

impl Chain {
    fn slot_formula_after(&self, m: &str) -> CFormula {
        let mut ls = self.checked.clone();
        ls.push(m.to_string());
        CFormula::from_chain(&ls, &self.base)
    }
}

#[derive(Debug, Clone)]
struct Awaiting {
    x: String,
    slot: String,
    tensor: CFormula,
}

#[derive(Debug, Clone)]
struct Item {
    deriv: Arc<CmgDerivation>,
    chains: Vec<Chain>,
    awaiting: Option<Awaiting>,
    words: WordBag,
}

impl Item {
    fn steps(&self) -> usize {
        self.deriv.rule_count()
    }

    fn vars(&self) -> BTreeSet<String> {
        self.deriv.nodes().into_iter().flat_map(|n| n.conclusion.context_vars()).collect()
    }

    fn smc_ok(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.chains.iter().all(|c| c.pending.first().map_or(true, |m| seen.insert(m.clone())))
    }
}

/// Rebuilds a derivation with its hypothesis variables renamed.
pub(crate) fn rename(d: &Arc<CmgDerivation>, map: &HashMap<String, String>) -> Arc<CmgDerivation> {
    let r = |v: &String| map.get(v).cloned().unwrap_or_else(|| v.clone());
    match &d.rule {
        CmgRule::Lex { .. } => d.clone(),
        CmgRule::Axiom => {
            let h = &d.conclusion.context[0];
            var_axiom(&r(&h.var), &h.formula)
        }
        CmgRule::Mv { x, y } => {
            let t = rename(&d.premises[0], map);
            let b = rename(&d.premises[1], map);
            rule_mv(&t, &b, &r(x), &r(y)).expect("renaming preserves validity")
        }
        rule => {
            let major = rename(d.major().expect("binary rule"), map);
            let minor_idx = if Arc::ptr_eq(&d.premises[0], d.major().unwrap()) { 1 } else { 0 };
            let minor = rename(&d.premises[minor_idx], map);
            if *rule == CmgRule::Mg {
                rule_mg(&major, &minor).expect("renaming preserves validity")
            } else {
                rule_hdr(&major, &minor).expect("renaming preserves validity")
            }
        }
    }
}

/// Renames variables to `u v w ...` in order of first use.
fn canonical(d: &Arc<CmgDerivation>) -> Arc<CmgDerivation> {
    let mut map = HashMap::new();
    for n in d.nodes() {
        if n.rule == CmgRule::Axiom {
            let v = &n.conclusion.context[0].var;
            if !map.contains_key(v) {
                let next = fresh_var_name(map.len());
                map.insert(v.clone(), next);
            }
        }
    }
    rename(d, &map)
}

struct Search<'a> {
    lex: &'a CmgLexicon,
    limit: WordLimit,
    step_bound: usize,
    counter: usize,
    /// Lexical product types, by base category.
    products: Vec<(Vec<String>, String)>,
}

impl Search<'_> {
    fn fresh(&mut self) -> String {
        self.counter += 1;
        format!("h{}", self.counter)
    }

    fn admit(&self, item: Item, agenda: &mut VecDeque<Item>) {
        if item.steps() <= self.step_bound && item.smc_ok() && self.limit.admits(&item.words) {
            agenda.push_back(item);
        }
    }

    /// Renames `b` apart from `a` when they share variables.
    fn apart(&mut self, a: &Item, b: &Item) -> Item {
        let shared: Vec<String> = a.vars().intersection(&b.vars()).cloned().collect();
        if shared.is_empty() {
            return b.clone();
        }
        let map: HashMap<String, String> = b.vars().into_iter().map(|v| (v, self.fresh())).collect();
        let r = |v: &String| map[v].clone();
        Item {
            deriv: rename(&b.deriv, &map),
            chains: b.chains.iter().map(|c| Chain { slot: r(&c.slot), ..c.clone() }).collect(),
            awaiting: b.awaiting.as_ref().map(|w| Awaiting { x: r(&w.x), slot: r(&w.slot), tensor: w.tensor.clone() }),
            words: b.words.clone(),
        }
    }

    fn unary(&mut self, item: &Item, agenda: &mut VecDeque<Item>) {
        if item.awaiting.is_some() {
            return;
        }
        match item.deriv.formula().clone() {
            CFormula::Over(_, b) | CFormula::Under(b, _) if !self.lex.features.is_movement(&b) => {
                for (ls, base) in self.products.clone() {
                    if base != b {
                        continue;
                    }
                    let y = self.fresh();
                    let Ok(d) = rule_mg(&item.deriv, &var_axiom(&y, &CFormula::base(&b))) else { continue };
                    let mut chains = item.chains.clone();
                    chains.push(Chain { slot: y, checked: vec![], pending: ls.clone(), base: b.clone() });
                    self.admit(Item { deriv: d, chains, awaiting: None, words: item.words.clone() }, agenda);
                }
            }
            CFormula::Under(m, _) => {
                let Some(ci) = item.chains.iter().position(|c| c.pending.first() == Some(&m)) else { return };
                let chain = item.chains[ci].clone();
                let x = self.fresh();
                let Ok(body) = rule_mg(&item.deriv, &var_axiom(&x, &CFormula::base(&m))) else { return };
                let tensor = chain.slot_formula_after(&m);
                let mut chains = item.chains.clone();
                if chain.pending.len() > 1 {
                    let y2 = self.fresh();
                    let Ok(d) = rule_mv(&var_axiom(&y2, &tensor), &body, &x, &chain.slot) else { return };
                    let mut checked = chain.checked.clone();
                    checked.push(m.clone());
                    chains[ci] = Chain { slot: y2, checked, pending: chain.pending[1..].to_vec(), base: chain.base.clone() };
                    self.admit(Item { deriv: d, chains, awaiting: None, words: item.words.clone() }, agenda);
                } else {
                    chains.remove(ci);
                    let awaiting = Some(Awaiting { x, slot: chain.slot.clone(), tensor });
                    // the chain is gone from the list but its slot is still open
                    self.admit(Item { deriv: body, chains, awaiting, words: item.words.clone() }, agenda);
                }
            }
            _ => {}
        }
    }

    fn binary(&mut self, a: &Item, b: &Item, agenda: &mut VecDeque<Item>) {
        if b.awaiting.is_some() {
            return;
        }
        let fa = a.deriv.formula().clone();
        let fb = b.deriv.formula().clone();
        let applies = match (&a.awaiting, &fa) {
            (Some(w), _) => w.tensor == fb,
            (None, CFormula::Over(_, x) | CFormula::Under(x, _) | CFormula::OverHdr(_, x) | CFormula::UnderHdr(x, _)) => {
                fb == CFormula::Base(x.clone()) && !self.lex.features.is_movement(x)
            }
            _ => false,
        };
        if !applies {
            return;
        }
        let b = self.apart(a, b);
        let result = match (&a.awaiting, &fa) {
            (Some(w), _) => rule_mv(&b.deriv, &a.deriv, &w.x, &w.slot),
            (None, CFormula::OverHdr(..) | CFormula::UnderHdr(..)) => rule_hdr(&a.deriv, &b.deriv),
            _ => rule_mg(&a.deriv, &b.deriv),
        };
        let Ok(deriv) = result else { return };
        let chains = a.chains.iter().chain(&b.chains).cloned().collect();
        self.admit(Item { deriv, chains, awaiting: None, words: bag_union(&a.words, &b.words) }, agenda);
    }

    fn run(&mut self) -> Vec<Arc<CmgDerivation>> {
        let mut agenda = VecDeque::new();
        for (key, f) in &self.lex.entries {
            let Ok(deriv) = super::lex_axiom(self.lex, key, f) else { continue };
            let words = bag_of(&super::key_phon(key));
            self.admit(Item { deriv, chains: vec![], awaiting: None, words }, &mut agenda);
        }
        let start = CFormula::base(&self.lex.start);
        let mut chart: Vec<Item> = Vec::new();
        let mut done = Vec::new();
        while let Some(item) = agenda.pop_front() {
            if item.awaiting.is_none() && *item.deriv.formula() == start && item.deriv.conclusion.context.is_empty() {
                done.push(canonical(&item.deriv));
            }
            self.unary(&item, &mut agenda);
            for i in 0..chart.len() {
                let other = chart[i].clone();
                self.binary(&item, &other, &mut agenda);
                self.binary(&other, &item, &mut agenda);
            }
            chart.push(item);
        }
        done
    }
}

fn search(lex: &CmgLexicon, limit: WordLimit, step_bound: usize) -> Vec<Arc<CmgDerivation>> {
    let mut products: Vec<(Vec<String>, String)> = Vec::new();
    for (_, f) in &lex.entries {
        // licensees come innermost first, the order in which they are checked
        if let Some((ls, b)) = f.c_layer().tensor_chain() {
            if ls.is_empty() {
                continue;
            }
            if !products.contains(&(ls.clone(), b.clone())) {
                products.push((ls, b));
            }
        }
    }
    Search { lex, limit, step_bound, counter: 0, products }.run()
}

/// All complete derivations of `sentence` with at most `step_bound` rule
/// applications.
pub fn cmg_derive(
    lex: &CmgLexicon,
    sentence: &[String],
    step_bound: usize,
) -> Result<Vec<Arc<CmgDerivation>>, CmgError> {
    for w in sentence {
        if !lex.entries.iter().any(|(k, _)| k == w) {
            return Err(CmgError::UnknownWord(w.clone()));
        }
    }
    Ok(search(lex, WordLimit::Within(bag_of(sentence)), step_bound)
        .into_iter()
        .filter(|d| d.conclusion.label.words() == sentence)
        .collect())
}

/// All complete derivations using at most `max_words` phonological words.
pub fn cmg_generate(lex: &CmgLexicon, max_words: usize, step_bound: usize) -> Vec<Arc<CmgDerivation>> {
    search(lex, WordLimit::AtMost(max_words), step_bound)
}
