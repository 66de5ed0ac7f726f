//! Minimalist grammars: feature sequences, derived trees, the generating
//! functions (merge, head movement with right adjunction, move) and an
//! exhaustive bounded derivation search.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MgError {
    #[error("malformed feature `{0}`")]
    MalformedFeature(String),
    #[error("feature sequence `{0}` does not match the lexical entry grammar")]
    RegexViolation(String),
    #[error("feature mismatch: selector wants `{expected}`, selectee offers `{found}`")]
    FeatureMismatch { expected: String, found: String },
    #[error("rule not applicable: {0}")]
    NotApplicable(String),
    #[error("no subtree carries licensee -{0}")]
    NoMover(String),
    #[error("shortest move constraint violated: several subtrees carry -{0}")]
    SmcViolation(String),
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("derivation replay failed: {0}")]
    Replay(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FeatureKind {
    /// `x`
    Base,
    /// `=x`
    Selector,
    /// `x^`, head movement with right adjunction
    HeadSelector,
    /// `-x`
    Licensee,
    /// `+x`
    Licensor,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Feature {
    pub kind: FeatureKind,
    pub name: String,
}

impl Feature {
    pub fn new(kind: FeatureKind, name: impl Into<String>) -> Self {
        Feature { kind, name: name.into() }
    }
    pub fn base(name: impl Into<String>) -> Self {
        Self::new(FeatureKind::Base, name)
    }
    pub fn selector(name: impl Into<String>) -> Self {
        Self::new(FeatureKind::Selector, name)
    }
    pub fn head_selector(name: impl Into<String>) -> Self {
        Self::new(FeatureKind::HeadSelector, name)
    }
    pub fn licensee(name: impl Into<String>) -> Self {
        Self::new(FeatureKind::Licensee, name)
    }
    pub fn licensor(name: impl Into<String>) -> Self {
        Self::new(FeatureKind::Licensor, name)
    }

    /// Parses one feature token (`=x`, `x^`, `x↑`, `+x`, `-x` or `x`).
    pub fn parse(token: &str) -> Result<Feature, MgError> {
        let bad = || MgError::MalformedFeature(token.to_string());
        let (kind, name) = if let Some(rest) = token.strip_prefix('=') {
            (FeatureKind::Selector, rest)
        } else if let Some(rest) = token.strip_prefix('+') {
            (FeatureKind::Licensor, rest)
        } else if let Some(rest) = token.strip_prefix('-') {
            (FeatureKind::Licensee, rest)
        } else if let Some(rest) = token.strip_suffix('^') {
            (FeatureKind::HeadSelector, rest)
        } else if let Some(rest) = token.strip_suffix('↑') {
            (FeatureKind::HeadSelector, rest)
        } else {
            (FeatureKind::Base, token)
        };
        if !is_feature_name(name) {
            return Err(bad());
        }
        Ok(Feature::new(kind, name))
    }
}

pub(crate) fn is_feature_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FeatureKind::Base => write!(f, "{}", self.name),
            FeatureKind::Selector => write!(f, "={}", self.name),
            FeatureKind::HeadSelector => write!(f, "{}^", self.name),
            FeatureKind::Licensee => write!(f, "-{}", self.name),
            FeatureKind::Licensor => write!(f, "+{}", self.name),
        }
    }
}

/// Whether a feature list has the shape of a lexical entry:
/// `((=x | x^) (=x | x^ | +x)*)? x (-y)*`.
pub fn matches_entry_grammar(features: &[Feature]) -> bool {
    use FeatureKind::*;
    let mut i = 0;
    if let Some(first) = features.first() {
        if matches!(first.kind, Selector | HeadSelector) {
            i = 1;
            while i < features.len() && matches!(features[i].kind, Selector | HeadSelector | Licensor) {
                i += 1;
            }
        }
    }
    if i >= features.len() || features[i].kind != Base {
        return false;
    }
    features[i + 1..].iter().all(|f| f.kind == Licensee)
}

/// A list of features followed by a phonological form (a possibly empty
/// word list).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FeatureSeq {
    pub features: Vec<Feature>,
    pub phon: Vec<String>,
}

impl FeatureSeq {
    pub fn new(features: Vec<Feature>, phon: Vec<String>) -> Self {
        FeatureSeq { features, phon }
    }

    /// Builds a lexical entry, checking the entry grammar.
    pub fn entry(features: Vec<Feature>, phon: Vec<String>) -> Result<Self, MgError> {
        let seq = FeatureSeq { features, phon };
        if !matches_entry_grammar(&seq.features) {
            return Err(MgError::RegexViolation(seq.features_string()));
        }
        Ok(seq)
    }

    pub fn first(&self) -> Option<&Feature> {
        self.features.first()
    }

    pub fn features_string(&self) -> String {
        self.features.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(" ")
    }

    fn without_first(&self) -> FeatureSeq {
        FeatureSeq { features: self.features[1..].to_vec(), phon: self.phon.clone() }
    }
}

impl fmt::Display for FeatureSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :: {}", self.features_string(), self.phon.join(" "))
    }
}

/// Parses a feature list only (no `::`), checking the entry grammar.
pub fn parse_features(text: &str) -> Result<Vec<Feature>, MgError> {
    let features = text.split_whitespace().map(Feature::parse).collect::<Result<Vec<_>, _>>()?;
    if !matches_entry_grammar(&features) {
        return Err(MgError::RegexViolation(text.trim().to_string()));
    }
    Ok(features)
}

/// Parses `features :: phon`, e.g. `=n d -k :: the`. An empty phonology or
/// `_` denotes ε.
pub fn parse_feature_seq(text: &str) -> Result<FeatureSeq, MgError> {
    let (feats, phon) = text
        .split_once("::")
        .ok_or_else(|| MgError::MalformedFeature(text.trim().to_string()))?;
    let features = parse_features(feats)?;
    let phon = phon
        .split_whitespace()
        .filter(|w| *w != "_")
        .map(str::to_string)
        .collect();
    Ok(FeatureSeq { features, phon })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dir {
    /// `<`: the head is in the left subtree.
    #[serde(rename = "<")]
    Left,
    /// `>`: the head is in the right subtree.
    #[serde(rename = ">")]
    Right,
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dir::Left => "<",
            Dir::Right => ">",
        })
    }
}

/// Which child to follow when walking down a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MgTree {
    Leaf(FeatureSeq),
    Node(Dir, Box<MgTree>, Box<MgTree>),
}

impl MgTree {
    pub fn leaf(seq: FeatureSeq) -> Self {
        MgTree::Leaf(seq)
    }

    pub fn node(dir: Dir, left: MgTree, right: MgTree) -> Self {
        MgTree::Node(dir, Box::new(left), Box::new(right))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, MgTree::Leaf(_))
    }

    pub fn head(&self) -> &FeatureSeq {
        match self {
            MgTree::Leaf(s) => s,
            MgTree::Node(Dir::Left, l, _) => l.head(),
            MgTree::Node(Dir::Right, _, r) => r.head(),
        }
    }

    fn head_mut(&mut self) -> &mut FeatureSeq {
        match self {
            MgTree::Leaf(s) => s,
            MgTree::Node(Dir::Left, l, _) => l.head_mut(),
            MgTree::Node(Dir::Right, _, r) => r.head_mut(),
        }
    }

    pub fn subtree(&self, path: &[Branch]) -> Option<&MgTree> {
        let mut t = self;
        for b in path {
            t = match (t, b) {
                (MgTree::Node(_, l, _), Branch::Left) => l,
                (MgTree::Node(_, _, r), Branch::Right) => r,
                (MgTree::Leaf(_), _) => return None,
            };
        }
        Some(t)
    }

    fn subtree_mut(&mut self, path: &[Branch]) -> Option<&mut MgTree> {
        let mut t = self;
        for b in path {
            t = match (t, b) {
                (MgTree::Node(_, l, _), Branch::Left) => l,
                (MgTree::Node(_, _, r), Branch::Right) => r,
                (MgTree::Leaf(_), _) => return None,
            };
        }
        Some(t)
    }

    /// Paths to every leaf, left to right.
    pub fn leaf_paths(&self) -> Vec<Vec<Branch>> {
        fn go(t: &MgTree, path: &mut Vec<Branch>, out: &mut Vec<Vec<Branch>>) {
            match t {
                MgTree::Leaf(_) => out.push(path.clone()),
                MgTree::Node(_, l, r) => {
                    path.push(Branch::Left);
                    go(l, path, out);
                    path.pop();
                    path.push(Branch::Right);
                    go(r, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn leaves(&self) -> Vec<&FeatureSeq> {
        match self {
            MgTree::Leaf(s) => vec![s],
            MgTree::Node(_, l, r) => {
                let mut v = l.leaves();
                v.extend(r.leaves());
                v
            }
        }
    }

    pub fn feature_count(&self) -> usize {
        self.leaves().iter().map(|s| s.features.len()).sum()
    }
}

impl fmt::Display for MgTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MgTree::Leaf(s) => write!(f, "[{s}]"),
            MgTree::Node(d, l, r) => write!(f, "({l} {d} {r})"),
        }
    }
}

/// Path from the root to the head leaf: left on `<`, right on `>`.
pub fn head_of(t: &MgTree) -> Vec<Branch> {
    let mut path = Vec::new();
    let mut cur = t;
    while let MgTree::Node(d, l, r) = cur {
        match d {
            Dir::Left => {
                path.push(Branch::Left);
                cur = l;
            }
            Dir::Right => {
                path.push(Branch::Right);
                cur = r;
            }
        }
    }
    path
}

/// Left-to-right concatenation of the leaf phonologies.
pub fn tree_yield(t: &MgTree) -> Vec<String> {
    t.leaves().into_iter().flat_map(|s| s.phon.iter().cloned()).collect()
}

fn check_selection(
    t1: &MgTree,
    t2: &MgTree,
    kind: FeatureKind,
) -> Result<(), MgError> {
    let sel = t1.head().first().ok_or_else(|| {
        MgError::NotApplicable("selector head has no features left".into())
    })?;
    if sel.kind != kind {
        return Err(MgError::NotApplicable(format!("selector head starts with `{sel}`")));
    }
    let base = t2.head().first().ok_or_else(|| {
        MgError::NotApplicable("selectee head has no features left".into())
    })?;
    if base.kind != FeatureKind::Base {
        return Err(MgError::NotApplicable(format!("selectee head starts with `{base}`")));
    }
    if base.name != sel.name {
        return Err(MgError::FeatureMismatch {
            expected: sel.name.clone(),
            found: base.name.clone(),
        });
    }
    Ok(())
}

fn attach(t1_lexical: bool, t1: MgTree, t2: MgTree) -> MgTree {
    if t1_lexical {
        MgTree::node(Dir::Left, t1, t2)
    } else {
        MgTree::node(Dir::Right, t2, t1)
    }
}

/// `=x` against `x`. A lexical selector takes its argument as complement
/// (`t1 < t2`), otherwise as specifier (`t2 > t1`).
pub fn mg_merge(t1: &MgTree, t2: &MgTree) -> Result<MgTree, MgError> {
    check_selection(t1, t2, FeatureKind::Selector)?;
    let mut a = t1.clone();
    let mut b = t2.clone();
    *a.head_mut() = a.head().without_first();
    *b.head_mut() = b.head().without_first();
    Ok(attach(t1.is_leaf(), a, b))
}

/// `x^` against `x`: a merge that also adjoins the selectee head's
/// phonology to the right of the selector head's phonology.
pub fn mg_head_move_right(t1: &MgTree, t2: &MgTree) -> Result<MgTree, MgError> {
    check_selection(t1, t2, FeatureKind::HeadSelector)?;
    let mut a = t1.clone();
    let mut b = t2.clone();
    let moved = std::mem::take(&mut b.head_mut().phon);
    *b.head_mut() = b.head().without_first();
    let h = a.head_mut();
    *h = h.without_first();
    h.phon.extend(moved);
    Ok(attach(t1.is_leaf(), a, b))
}

/// Replaces the node at `path` (which must not be the root) by its sibling.
fn excise(t: &mut MgTree, path: &[Branch]) {
    let (last, parent_path) = path.split_last().expect("non-root path");
    let parent = t.subtree_mut(parent_path).expect("valid path");
    let sibling = match std::mem::replace(parent, MgTree::Leaf(FeatureSeq::new(vec![], vec![]))) {
        MgTree::Node(_, l, r) => match last {
            Branch::Left => *r,
            Branch::Right => *l,
        },
        MgTree::Leaf(_) => unreachable!("parent of a subtree is a node"),
    };
    *parent = sibling;
}

/// The shortest prefix of `leaf_path` whose subtree is headed by that leaf.
pub fn maximal_projection(t: &MgTree, leaf_path: &[Branch]) -> Vec<Branch> {
    for k in 0..=leaf_path.len() {
        let sub = t.subtree(&leaf_path[..k]).expect("valid path");
        if head_of(sub) == leaf_path[k..] {
            return leaf_path[..k].to_vec();
        }
    }
    leaf_path.to_vec()
}

/// Leaves (other than the head) whose first feature is `-name`.
fn movers(t: &MgTree, name: &str) -> Vec<Vec<Branch>> {
    let head = head_of(t);
    t.leaf_paths()
        .into_iter()
        .filter(|p| *p != head)
        .filter(|p| {
            let leaf = t.subtree(p).unwrap().head();
            matches!(leaf.first(), Some(f) if f.kind == FeatureKind::Licensee && f.name == name)
        })
        .collect()
}

/// `+x` on the head attracts the unique maximal projection whose head starts
/// with `-x`; it is excised and re-attached as specifier.
pub fn mg_move(t: &MgTree) -> Result<MgTree, MgError> {
    let lic = t
        .head()
        .first()
        .ok_or_else(|| MgError::NotApplicable("head has no features left".into()))?;
    if lic.kind != FeatureKind::Licensor {
        return Err(MgError::NotApplicable(format!("head starts with `{lic}`")));
    }
    let name = lic.name.clone();
    let cands = movers(t, &name);
    let leaf_path = match cands.len() {
        0 => return Err(MgError::NoMover(name)),
        1 => &cands[0],
        _ => return Err(MgError::SmcViolation(name)),
    };
    let proj = maximal_projection(t, leaf_path);
    let mut moved = t.subtree(&proj).unwrap().clone();
    *moved.head_mut() = moved.head().without_first();
    let mut rest = t.clone();
    excise(&mut rest, &proj);
    *rest.head_mut() = rest.head().without_first();
    Ok(MgTree::node(Dir::Right, moved, rest))
}

/// True when two or more leaves wait for the same licensor: such a tree can
/// never converge.
pub fn smc_crashed(t: &MgTree) -> bool {
    let mut seen = BTreeMap::new();
    for leaf in t.leaves() {
        if let Some(f) = leaf.first() {
            if f.kind == FeatureKind::Licensee {
                let n = seen.entry(f.name.as_str()).or_insert(0);
                *n += 1;
                if *n > 1 {
                    return true;
                }
            }
        }
    }
    false
}

/// A lexicon for minimalist grammars.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MgLexicon {
    /// Row key (the word, or `_name` for an ε item) and entry.
    pub entries: Vec<(String, FeatureSeq)>,
    pub start: String,
}

impl MgLexicon {
    pub fn new(entries: Vec<(String, FeatureSeq)>) -> Self {
        MgLexicon { entries, start: "c".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MgRule {
    Lex(FeatureSeq),
    Merge,
    Hdr,
    Move,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MgStep {
    pub rule: MgRule,
    /// Indices of earlier steps.
    pub operands: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MgDerivation {
    pub root: MgTree,
    pub steps: Vec<MgStep>,
}

impl MgDerivation {
    /// Recomputes every step from the lexical leaves.
    pub fn replay(&self) -> Result<MgTree, MgError> {
        let mut trees: Vec<MgTree> = Vec::with_capacity(self.steps.len());
        for (i, step) in self.steps.iter().enumerate() {
            let arg = |k: usize| -> Result<&MgTree, MgError> {
                let idx = *step.operands.get(k).ok_or_else(|| {
                    MgError::Replay(format!("step {i} lacks operand {k}"))
                })?;
                if idx >= i {
                    return Err(MgError::Replay(format!("step {i} refers forward to {idx}")));
                }
                Ok(&trees[idx])
            };
            let t = match &step.rule {
                MgRule::Lex(seq) => MgTree::Leaf(seq.clone()),
                MgRule::Merge => mg_merge(arg(0)?, arg(1)?)?,
                MgRule::Hdr => mg_head_move_right(arg(0)?, arg(1)?)?,
                MgRule::Move => mg_move(arg(0)?)?,
            };
            trees.push(t);
        }
        trees.pop().ok_or_else(|| MgError::Replay("empty derivation".into()))
    }

    /// Number of rule applications (lexical steps excluded).
    pub fn rule_count(&self) -> usize {
        self.steps.iter().filter(|s| !matches!(s.rule, MgRule::Lex(_))).count()
    }

    pub fn sentence(&self) -> Vec<String> {
        tree_yield(&self.root)
    }
}

#[derive(Debug)]
struct DerivNode {
    rule: MgRule,
    children: Vec<Arc<DerivNode>>,
}

fn flatten(node: &Arc<DerivNode>, steps: &mut Vec<MgStep>) -> usize {
    let operands = node.children.iter().map(|c| flatten(c, steps)).collect();
    steps.push(MgStep { rule: node.rule.clone(), operands });
    steps.len() - 1
}

/// Bag of words consumed by an item, used to bound the search.
pub(crate) type WordBag = BTreeMap<String, usize>;

pub(crate) fn bag_union(a: &WordBag, b: &WordBag) -> WordBag {
    let mut out = a.clone();
    for (w, n) in b {
        *out.entry(w.clone()).or_insert(0) += n;
    }
    out
}

pub(crate) fn bag_of(words: &[String]) -> WordBag {
    let mut out = WordBag::new();
    for w in words {
        *out.entry(w.clone()).or_insert(0) += 1;
    }
    out
}

/// How the search limits lexical material.
#[derive(Debug, Clone)]
pub(crate) enum WordLimit {
    /// Parse: every item uses a sub-bag of the sentence.
    Within(WordBag),
    /// Generate: at most this many phonological words.
    AtMost(usize),
}

impl WordLimit {
    pub(crate) fn admits(&self, bag: &WordBag) -> bool {
        match self {
            WordLimit::Within(sent) => {
                bag.iter().all(|(w, n)| sent.get(w).copied().unwrap_or(0) >= *n)
            }
            WordLimit::AtMost(max) => bag.values().sum::<usize>() <= *max,
        }
    }
}

struct Item {
    tree: MgTree,
    node: Arc<DerivNode>,
    words: WordBag,
    steps: usize,
}

fn is_complete(t: &MgTree, start: &str) -> bool {
    let head = head_of(t);
    let hf = &t.head().features;
    hf.len() == 1
        && hf[0] == Feature::base(start)
        && t
            .leaf_paths()
            .iter()
            .filter(|p| **p != head)
            .all(|p| t.subtree(p).unwrap().head().features.is_empty())
}

fn search(lex: &MgLexicon, limit: &WordLimit, step_bound: usize) -> Vec<MgDerivation> {
    let mut agenda: VecDeque<Item> = VecDeque::new();
    for (_, seq) in &lex.entries {
        let words = bag_of(&seq.phon);
        if !limit.admits(&words) {
            continue;
        }
        agenda.push_back(Item {
            tree: MgTree::Leaf(seq.clone()),
            node: Arc::new(DerivNode { rule: MgRule::Lex(seq.clone()), children: vec![] }),
            words,
            steps: 0,
        });
    }
    let mut chart: Vec<Item> = Vec::new();
    let mut done = Vec::new();

    let admit = |tree: MgTree, rule: MgRule, kids: &[&Item], agenda: &mut VecDeque<Item>| {
        let steps = 1 + kids.iter().map(|k| k.steps).sum::<usize>();
        if steps > step_bound || smc_crashed(&tree) {
            return;
        }
        let words = kids.iter().fold(WordBag::new(), |acc, k| bag_union(&acc, &k.words));
        if !limit.admits(&words) {
            return;
        }
        let node = Arc::new(DerivNode {
            rule,
            children: kids.iter().map(|k| k.node.clone()).collect(),
        });
        agenda.push_back(Item { tree, node, words, steps });
    };

    while let Some(item) = agenda.pop_front() {
        if is_complete(&item.tree, &lex.start) {
            let mut steps = Vec::new();
            flatten(&item.node, &mut steps);
            done.push(MgDerivation { root: item.tree.clone(), steps });
        }
        if let Ok(t) = mg_move(&item.tree) {
            admit(t, MgRule::Move, &[&item], &mut agenda);
        }
        for other in &chart {
            for (a, b) in [(&item, other), (other, &item)] {
                match a.tree.head().first().map(|f| f.kind) {
                    Some(FeatureKind::Selector) => {
                        if let Ok(t) = mg_merge(&a.tree, &b.tree) {
                            admit(t, MgRule::Merge, &[a, b], &mut agenda);
                        }
                    }
                    Some(FeatureKind::HeadSelector) => {
                        if let Ok(t) = mg_head_move_right(&a.tree, &b.tree) {
                            admit(t, MgRule::Hdr, &[a, b], &mut agenda);
                        }
                    }
                    _ => {}
                }
            }
        }
        chart.push(item);
    }
    done
}

/// All convergent derivations of `sentence` using at most `step_bound` rule
/// applications.
pub fn mg_derive(
    lex: &MgLexicon,
    sentence: &[String],
    step_bound: usize,
) -> Result<Vec<MgDerivation>, MgError> {
    for w in sentence {
        if !lex.entries.iter().any(|(_, s)| s.phon.iter().any(|p| p == w)) {
            return Err(MgError::UnknownWord(w.clone()));
        }
    }
    let limit = WordLimit::Within(bag_of(sentence));
    Ok(search(lex, &limit, step_bound)
        .into_iter()
        .filter(|d| tree_yield(&d.root) == sentence)
        .collect())
}

/// All convergent derivations using at most `max_words` phonological words.
pub fn mg_generate(lex: &MgLexicon, max_words: usize, step_bound: usize) -> Vec<MgDerivation> {
    search(lex, &WordLimit::AtMost(max_words), step_bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(text: &str) -> FeatureSeq {
        parse_feature_seq(text).unwrap()
    }

    /// Any feature list, not only lexical entries.
    fn leaf(text: &str) -> MgTree {
        let (f, p) = text.split_once("::").unwrap();
        let features = f.split_whitespace().map(|t| Feature::parse(t).unwrap()).collect();
        let phon = p.split_whitespace().filter(|w| *w != "_").map(String::from).collect();
        MgTree::Leaf(FeatureSeq::new(features, phon))
    }

    #[test]
    fn parses_determiner_entry() {
        let s = seq("=n d -k :: the");
        assert_eq!(
            s.features,
            vec![Feature::selector("n"), Feature::base("d"), Feature::licensee("k")]
        );
        assert_eq!(s.phon, vec!["the".to_string()]);
    }

    #[test]
    fn minimal_entry_has_empty_phonology() {
        let s = seq("d :: ");
        assert_eq!(s.features, vec![Feature::base("d")]);
        assert!(s.phon.is_empty());
    }

    #[test]
    fn licensee_before_base_is_rejected() {
        assert!(matches!(parse_feature_seq("-k d :: x"), Err(MgError::RegexViolation(_))));
    }

    #[test]
    fn unknown_sigil_is_malformed() {
        assert!(matches!(parse_feature_seq("*d :: x"), Err(MgError::MalformedFeature(_))));
        assert!(matches!(parse_feature_seq("= :: x"), Err(MgError::MalformedFeature(_))));
        assert!(matches!(parse_feature_seq("d"), Err(MgError::MalformedFeature(_))));
    }

    #[test]
    fn licensor_cannot_open_an_entry() {
        assert!(matches!(parse_feature_seq("+k d :: x"), Err(MgError::RegexViolation(_))));
        assert!(parse_feature_seq("V^ +k =d v :: ").is_ok());
    }

    #[test]
    fn head_of_follows_arrows() {
        let a = leaf("a :: A");
        assert_eq!(head_of(&a), vec![]);
        let t = MgTree::node(Dir::Left, leaf("a :: A"), leaf("b :: B"));
        assert_eq!(t.head(), &seq("a :: A"));
        let t = MgTree::node(
            Dir::Right,
            leaf("a :: A"),
            MgTree::node(Dir::Left, leaf("b :: B"), leaf("c :: C")),
        );
        assert_eq!(head_of(&t), vec![Branch::Right, Branch::Left]);
        assert_eq!(t.head(), &seq("b :: B"));
    }

    #[test]
    fn lexical_merge_puts_complement_right() {
        let t = mg_merge(&leaf("=d V :: ate"), &leaf("d :: u")).unwrap();
        assert_eq!(t, MgTree::node(Dir::Left, leaf("V :: ate"), leaf(" :: u")));
    }

    #[test]
    fn non_lexical_merge_puts_specifier_left() {
        let t1 = MgTree::node(Dir::Left, leaf("=k t :: x"), leaf(" :: y"));
        let t = mg_merge(&t1, &leaf("k :: z")).unwrap();
        assert_eq!(
            t,
            MgTree::node(
                Dir::Right,
                leaf(" :: z"),
                MgTree::node(Dir::Left, leaf("t :: x"), leaf(" :: y"))
            )
        );
        assert_eq!(t.head(), &seq("t :: x"));
    }

    #[test]
    fn merge_category_clash() {
        assert!(matches!(
            mg_merge(&leaf("=d V :: ate"), &leaf("n :: pizza")),
            Err(MgError::FeatureMismatch { .. })
        ));
        assert!(matches!(
            mg_merge(&leaf("d :: x"), &leaf("d :: y")),
            Err(MgError::NotApplicable(_))
        ));
    }

    #[test]
    fn head_movement_adjoins_selectee_phonology_on_the_right() {
        let t = mg_head_move_right(&leaf("V^ z :: infl"), &leaf("V :: eat")).unwrap();
        assert_eq!(
            t,
            MgTree::node(
                Dir::Left,
                MgTree::Leaf(FeatureSeq::new(
                    vec![Feature::base("z")],
                    vec!["infl".into(), "eat".into()]
                )),
                leaf(" :: ")
            )
        );
        let t = mg_head_move_right(&leaf("V^ z :: "), &leaf("V :: eat")).unwrap();
        assert_eq!(t.head().phon, vec!["eat".to_string()]);
        assert_eq!(tree_yield(&t), vec!["eat".to_string()]);
        assert!(matches!(
            mg_head_move_right(&leaf("V^ z :: infl"), &leaf("d :: eat")),
            Err(MgError::FeatureMismatch { .. })
        ));
    }

    fn vp_with_object() -> MgTree {
        // ate < (a < pizza), then the little-v shell
        let dp = mg_merge(&leaf("=n d -k :: a"), &leaf("n :: pizza")).unwrap();
        let vp = mg_merge(&leaf("=d V :: ate"), &dp).unwrap();
        mg_head_move_right(&leaf("V^ +k =d v :: "), &vp).unwrap()
    }

    #[test]
    fn move_raises_the_maximal_projection() {
        let t = vp_with_object();
        assert_eq!(t.head().features_string(), "+k =d v");
        let moved = mg_move(&t).unwrap();
        assert_eq!(moved.head().features_string(), "=d v");
        assert_eq!(moved.head().phon, vec!["ate".to_string()]);
        match &moved {
            MgTree::Node(Dir::Right, spec, _) => {
                assert_eq!(tree_yield(spec), vec!["a".to_string(), "pizza".to_string()]);
            }
            other => panic!("unexpected shape {other}"),
        }
        assert_eq!(tree_yield(&moved), vec!["a", "pizza", "ate"]);
        assert_eq!(moved.feature_count() + 2, t.feature_count());
    }

    #[test]
    fn move_without_candidate() {
        let t = mg_merge(&leaf("=d +k t :: x"), &leaf("d :: y")).unwrap();
        assert!(matches!(mg_move(&t), Err(MgError::NoMover(k)) if k == "k"));
    }

    #[test]
    fn two_candidates_crash() {
        let t = mg_merge(&leaf("=d =d +k c :: saw"), &leaf("d -k :: john")).unwrap();
        let t = mg_merge(&t, &leaf("d -k :: mary")).unwrap();
        assert!(smc_crashed(&t));
        assert!(matches!(mg_move(&t), Err(MgError::SmcViolation(k)) if k == "k"));
    }

    #[test]
    fn yields() {
        assert_eq!(tree_yield(&leaf("c :: hello")), vec!["hello"]);
        let t = MgTree::node(Dir::Left, leaf(" :: a"), leaf(" :: b"));
        assert_eq!(tree_yield(&t), vec!["a", "b"]);
    }

    #[test]
    fn empty_sentence_without_empty_complementizer() {
        let lex = MgLexicon::new(vec![("w".into(), seq("c :: w"))]);
        assert!(mg_derive(&lex, &[], 10).unwrap().is_empty());
        assert_eq!(mg_derive(&lex, &["w".into()], 10).unwrap().len(), 1);
        assert!(matches!(
            mg_derive(&lex, &["v".into()], 10),
            Err(MgError::UnknownWord(_))
        ));
    }
}
