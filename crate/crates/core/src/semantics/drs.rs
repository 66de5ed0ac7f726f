//! Polarity of sub-DRSs, accessibility, and internalization of fusions.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{LmuTerm, SemError, SemType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Polarity {
    fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Positive => "+",
            Polarity::Negative => "-",
        })
    }
}

/// Polarity of every subterm of type `t`, by position (child indices from
/// the root). The antecedent of `=>` flips polarity; everything else
/// inherits it.
pub fn subdrs_polarity(d: &LmuTerm) -> Vec<(Vec<usize>, Polarity)> {
    fn go(t: &LmuTerm, pol: Polarity, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Polarity)>) {
        if t.ty() == SemType::T {
            out.push((path.clone(), pol));
        }
        for (i, c) in t.children().into_iter().enumerate() {
            let p = if matches!(t, LmuTerm::Implies { .. }) && i == 0 { pol.flip() } else { pol };
            path.push(i);
            go(c, p, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(d, Polarity::Positive, &mut Vec::new(), &mut out);
    out
}

/// Polarity of the subterm at `path`.
pub fn polarity_at(d: &LmuTerm, path: &[usize]) -> Polarity {
    let mut pol = Polarity::Positive;
    let mut cur = d;
    for &i in path {
        if matches!(cur, LmuTerm::Implies { .. }) && i == 0 {
            pol = pol.flip();
        }
        cur = cur.children()[i];
    }
    pol
}

/// Referents accessible from the subterm at `path`: those of every box on
/// the way down (including the subterm itself when it is a box) and those
/// of the antecedent box of every implication whose consequent is entered.
pub fn accessible_refs(d: &LmuTerm, path: &[usize]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut cur = d;
    for &i in path {
        match cur {
            LmuTerm::Drs { refs, .. } => out.extend(refs.iter().map(|r| r.0.clone())),
            LmuTerm::Implies { left, .. } if i == 1 => {
                if let LmuTerm::Drs { refs, .. } = left.as_ref() {
                    out.extend(refs.iter().map(|r| r.0.clone()));
                }
            }
            _ => {}
        }
        cur = cur.children()[i];
    }
    if let LmuTerm::Drs { refs, .. } = cur {
        out.extend(refs.iter().map(|r| r.0.clone()));
    }
    out
}

fn positions(t: &LmuTerm, path: &mut Vec<usize>, pred: &dyn Fn(&LmuTerm) -> bool, out: &mut Vec<Vec<usize>>) {
    if pred(t) {
        out.push(path.clone());
    }
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i);
        positions(c, path, pred, out);
        path.pop();
    }
}

/// Position of the leftmost fusion without fusions below it.
fn innermost_fusion(t: &LmuTerm) -> Option<Vec<usize>> {
    let mut all = Vec::new();
    positions(t, &mut Vec::new(), &|n| matches!(n, LmuTerm::Fusion { .. }), &mut all);
    all.into_iter().find(|p| !t.at(p).unwrap().children().iter().any(|c| c.has_fusion()))
}

fn is_prefix(a: &[usize], b: &[usize]) -> bool {
    a.len() <= b.len() && a == &b[..a.len()]
}

/// Resolves every fusion `D && F`, innermost first, by conjoining `F` to
/// the body of the largest positive box of `D` from which all referents
/// free in `F` are accessible.
pub fn internalize(d: &LmuTerm) -> Result<LmuTerm, SemError> {
    let mut t = d.clone();
    while let Some(fp) = innermost_fusion(&t) {
        let LmuTerm::Fusion { left, right } = t.at(&fp).unwrap().clone() else { unreachable!() };
        if right.any(&|n| matches!(n, LmuTerm::Lam { .. } | LmuTerm::Mu { .. })) {
            return Err(SemError::NoHost(format!("`{right}` is not a formula")));
        }
        let needed = right.free_refs();
        let mut boxes = Vec::new();
        positions(&left, &mut Vec::new(), &|n| matches!(n, LmuTerm::Drs { .. }), &mut boxes);
        let candidates: Vec<Vec<usize>> = boxes
            .into_iter()
            .filter(|rel| {
                let mut global = fp.clone();
                global.push(0);
                global.extend(rel);
                polarity_at(&t, &global) == Polarity::Positive && accessible_refs(&t, &global).is_superset(&needed)
            })
            .collect();
        let host = match candidates.iter().find(|c| candidates.iter().all(|o| is_prefix(c, o))) {
            Some(h) => h.clone(),
            None if candidates.is_empty() => {
                return Err(SemError::NoHost(format!("no positive box of `{left}` gives access to `{right}`")));
            }
            None => {
                return Err(SemError::AmbiguousHost(format!(
                    "{} boxes of `{left}` could host `{right}`",
                    candidates.len()
                )));
            }
        };
        let LmuTerm::Drs { refs, body } = left.at(&host).unwrap().clone() else { unreachable!() };
        let merged = LmuTerm::drs(refs, LmuTerm::and(*body, (*right).clone()));
        let new_left = left.replace_at(&host, merged);
        t = t.replace_at(&fp, new_left);
    }
    Ok(t)
}
