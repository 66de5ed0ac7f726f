//! β, μ, μ′ and ς reductions and the enumeration of normal forms.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::term::fresh_name;
use super::{LmuTerm, SemError, SemType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RedRule {
    Beta,
    Mu,
    MuPrime,
    Simpl,
}

impl fmt::Display for RedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RedRule::Beta => "beta",
            RedRule::Mu => "mu",
            RedRule::MuPrime => "mu'",
            RedRule::Simpl => "simpl",
        })
    }
}

/// Redexes rooted at `t` itself.
fn local(t: &LmuTerm) -> Vec<(RedRule, LmuTerm)> {
    let mut out = Vec::new();
    match t {
        LmuTerm::App { fun, arg } => {
            if let LmuTerm::Lam { var, body, .. } = fun.as_ref() {
                out.push((RedRule::Beta, body.subst(var, arg)));
            }
            // (μα.T) P → μα′.T[α Q := α′(Q P)]
            if let LmuTerm::Mu { var, ty: SemType::Arrow(_, res), body } = fun.as_ref() {
                let p = arg.as_ref();
                let mut avoid = p.free_lam_vars();
                avoid.extend(p.free_mu_vars());
                let mut used = body.names();
                used.extend(p.names());
                let a2 = fresh_name(var, &used);
                let new = body.rewrite_names(var, &avoid, &|q| LmuTerm::name(&a2, LmuTerm::app(q, p.clone())));
                out.push((RedRule::Mu, LmuTerm::mu(a2, (**res).clone(), new)));
            }
            // P (μα.T) → μα′.T[α Q := α′(P Q)]
            if let LmuTerm::Mu { var, body, .. } = arg.as_ref() {
                let p = fun.as_ref();
                if let SemType::Arrow(_, res) = p.ty() {
                    let mut avoid = p.free_lam_vars();
                    avoid.extend(p.free_mu_vars());
                    let mut used = body.names();
                    used.extend(p.names());
                    let a2 = fresh_name(var, &used);
                    let new = body.rewrite_names(var, &avoid, &|q| LmuTerm::name(&a2, LmuTerm::app(p.clone(), q)));
                    out.push((RedRule::MuPrime, LmuTerm::mu(a2, *res, new)));
                }
            }
        }
        // μα.T → T[α Q := Q] when α : t → t
        LmuTerm::Mu { var, ty: SemType::T, body } => {
            out.push((RedRule::Simpl, body.rewrite_names(var, &BTreeSet::new(), &|q| q)));
        }
        _ => {}
    }
    out
}

/// Every one-step reduct of `t`, tagged with its rule and the position of
/// the redex.
pub fn reduce_step_at(t: &LmuTerm) -> Vec<(RedRule, Vec<usize>, LmuTerm)> {
    let mut out: Vec<(RedRule, Vec<usize>, LmuTerm)> = local(t).into_iter().map(|(r, u)| (r, vec![], u)).collect();
    let kids = t.children();
    for (i, k) in kids.iter().enumerate() {
        for (r, mut path, reduct) in reduce_step_at(k) {
            let mut new: Vec<LmuTerm> = kids.iter().map(|c| (*c).clone()).collect();
            new[i] = reduct;
            path.insert(0, i);
            out.push((r, path, t.with_children(new)));
        }
    }
    out
}

/// Every one-step reduct of `t`.
pub fn reduce_step(t: &LmuTerm) -> Vec<(RedRule, LmuTerm)> {
    reduce_step_at(t).into_iter().map(|(r, _, u)| (r, u)).collect()
}

/// The explored part of the reduction graph, nodes up to α-equivalence.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ReductionGraph {
    pub nodes: Vec<LmuTerm>,
    pub edges: Vec<(usize, RedRule, usize)>,
    /// Indices of nodes without reducts.
    pub normal: Vec<usize>,
}

impl ReductionGraph {
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (i, n) in self.nodes.iter().enumerate() {
            let mark = if self.normal.contains(&i) { " (normal)" } else { "" };
            s.push_str(&format!("[{i}]{mark} {n}\n"));
        }
        for (a, r, b) in &self.edges {
            s.push_str(&format!("{a} --{r}--> {b}\n"));
        }
        s
    }
}

/// Breadth-first exploration of every reduction path. Fails if more than
/// `bound` distinct terms are reached.
pub fn reduction_graph(t: &LmuTerm, bound: usize) -> Result<ReductionGraph, SemError> {
    if t.has_fusion() {
        return Err(SemError::UnresolvedFusion(t.to_string()));
    }
    let mut g = ReductionGraph::default();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    index.insert(t.alpha_key(), 0);
    g.nodes.push(t.clone());
    queue.push_back(0);
    while let Some(i) = queue.pop_front() {
        let reducts = reduce_step(&g.nodes[i]);
        if reducts.is_empty() {
            g.normal.push(i);
        }
        for (rule, u) in reducts {
            let key = u.alpha_key();
            let j = match index.get(&key) {
                Some(j) => *j,
                None => {
                    if g.nodes.len() >= bound {
                        return Err(SemError::BoundExceeded(bound));
                    }
                    g.nodes.push(u);
                    index.insert(key, g.nodes.len() - 1);
                    queue.push_back(g.nodes.len() - 1);
                    g.nodes.len() - 1
                }
            };
            if !g.edges.contains(&(i, rule, j)) {
                g.edges.push((i, rule, j));
            }
        }
    }
    g.normal.sort_unstable();
    Ok(g)
}

/// All normal forms reachable from `t`, up to α-equivalence, in order of
/// discovery.
pub fn normal_forms(t: &LmuTerm, bound: usize) -> Result<Vec<LmuTerm>, SemError> {
    let g = reduction_graph(t, bound)?;
    Ok(g.normal.iter().map(|i| g.nodes[*i].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{parse_term, Signature};

    fn sig() -> Signature {
        let mut s = Signature::new();
        for (n, t) in [("child", "e -> t"), ("pizz", "e -> t"), ("eat", "ev -> e -> e -> t"), ("agent", "ev -> e -> t")] {
            s.declare(n, SemType::parse(t).unwrap());
        }
        s.with_free_refs()
    }

    fn term(s: &str) -> LmuTerm {
        parse_term(s, &sig(), None).unwrap()
    }

    #[test]
    fn beta_identity() {
        let t = term("((\\x. x) a)");
        let r = reduce_step(&t);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].0, RedRule::Beta);
        assert_eq!(r[0].1.to_string(), "a");
    }

    #[test]
    fn simplification_drops_the_naming() {
        let t = term("mu d2. [| [d | (child d)] => [| (d2 ((eat e) p d)) & agent(e,d)]]");
        let r = reduce_step(&t);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].0, RedRule::Simpl);
        assert_eq!(r[0].1.to_string(), "[| [d | child(d)] => [| eat(e,p,d) & agent(e,d)]]");
    }

    #[test]
    fn mu_prime_pushes_the_function_under_the_binder() {
        let t = term("((eat e) (mu gamma. [p | (pizz p) & (gamma p)]))");
        let r = reduce_step(&t);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].0, RedRule::MuPrime);
        assert_eq!(r[0].1.to_string(), "mu gamma'. [p | pizz(p) & (gamma' eat(e,p))]");
        assert_eq!(r[0].1.typecheck().unwrap(), SemType::parse("e -> t").unwrap());
    }

    #[test]
    fn mu_pushes_the_argument_under_the_binder() {
        let t = term("((mu g. [p | (pizz p) & (g ((eat e) p))]) d)");
        let r = reduce_step(&t);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].0, RedRule::Mu);
        assert_eq!(r[0].1.to_string(), "mu g'. [p | pizz(p) & (g' eat(e,p,d))]");
    }

    #[test]
    fn term_without_mu_has_one_normal_form() {
        let t = term("[x | ((\\y. (child y)) x) & ((\\z. (pizz z)) x)]");
        let nf = normal_forms(&t, 100).unwrap();
        assert_eq!(nf.len(), 1);
        assert_eq!(nf[0].to_string(), "[x | child(x) & pizz(x)]");
    }

    #[test]
    fn bound_is_enforced() {
        let t = term("[x | ((\\y. (child y)) x) & ((\\z. (pizz z)) x)]");
        assert_eq!(normal_forms(&t, 2), Err(SemError::BoundExceeded(2)));
    }
}
