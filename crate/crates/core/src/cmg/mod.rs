//! Categorial minimalist grammars: labelled elimination rules over the
//! restricted formula grammar, grouped as merge, head movement and move.

mod formula;
mod search;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use formula::{parse_any_cformula, parse_cformula, CFormula, FeatureSets};
pub use search::{cmg_derive, cmg_generate, fresh_var_name};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CmgError {
    #[error("formula syntax error: {0}")]
    Parse(String),
    #[error("{0}")]
    GrammarViolation(String),
    #[error("`{word}` has no lexical formula `{formula}`")]
    NotInLexicon { word: String, formula: String },
    #[error("type clash: {0}")]
    TypeClash(String),
    #[error("variable collision: {0}")]
    VariableCollision(String),
    #[error("missing hypotheses: {0}")]
    MissingHypotheses(String),
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("malformed derivation: {0}")]
    Malformed(String),
}

/// A symbol in a label: a hypothesis variable or a phonological form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    Var(String),
    Word(String),
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Var(v) => write!(f, "${v}"),
            Sym::Word(w) => f.write_str(w),
        }
    }
}

impl Sym {
    fn parse(token: &str) -> Sym {
        match token.strip_prefix('$') {
            Some(v) => Sym::Var(v.to_string()),
            None => Sym::Word(token.to_string()),
        }
    }
}

/// `(spec | head | comp)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Label {
    pub spec: Vec<Sym>,
    pub head: Vec<Sym>,
    pub comp: Vec<Sym>,
}

fn syms_string(s: &[Sym]) -> String {
    s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse_syms(s: &str) -> Vec<Sym> {
    s.split_whitespace().filter(|t| *t != "ε").map(Sym::parse).collect()
}

impl Label {
    pub fn new(spec: Vec<Sym>, head: Vec<Sym>, comp: Vec<Sym>) -> Self {
        Label { spec, head, comp }
    }

    pub fn head_only(sym: Sym) -> Self {
        Label { spec: vec![], head: vec![sym], comp: vec![] }
    }

    /// Builds a label from three space separated strings; `$x` is a variable.
    pub fn from_parts(spec: &str, head: &str, comp: &str) -> Self {
        Label::new(parse_syms(spec), parse_syms(head), parse_syms(comp))
    }

    pub fn flatten(&self) -> Vec<Sym> {
        self.spec.iter().chain(&self.head).chain(&self.comp).cloned().collect()
    }

    pub fn words(&self) -> Vec<String> {
        self.flatten()
            .into_iter()
            .filter_map(|s| match s {
                Sym::Word(w) => Some(w),
                Sym::Var(_) => None,
            })
            .collect()
    }

    /// Variables in order of occurrence (with repetitions).
    pub fn vars(&self) -> Vec<String> {
        self.flatten()
            .into_iter()
            .filter_map(|s| match s {
                Sym::Var(v) => Some(v),
                Sym::Word(_) => None,
            })
            .collect()
    }

    /// Replaces every occurrence of the variable by a symbol string.
    pub fn substitute(&self, var: &str, by: &[Sym]) -> Label {
        let sub = |part: &[Sym]| -> Vec<Sym> {
            part.iter()
                .flat_map(|s| match s {
                    Sym::Var(v) if v == var => by.to_vec(),
                    other => vec![other.clone()],
                })
                .collect()
        };
        Label { spec: sub(&self.spec), head: sub(&self.head), comp: sub(&self.comp) }
    }

    pub fn parts(&self) -> [String; 3] {
        [syms_string(&self.spec), syms_string(&self.head), syms_string(&self.comp)]
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: &[Sym]| if s.is_empty() { "ε".to_string() } else { syms_string(s) };
        write!(f, "({} | {} | {})", show(&self.spec), show(&self.head), show(&self.comp))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypothesis {
    pub var: String,
    pub formula: CFormula,
}

/// `Γ ⊢ label : formula`, with Γ a multiset kept sorted by variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LSequent {
    pub context: Vec<Hypothesis>,
    pub label: Label,
    pub formula: CFormula,
}

impl LSequent {
    fn new(mut context: Vec<Hypothesis>, label: Label, formula: CFormula) -> Self {
        context.sort_by(|a, b| a.var.cmp(&b.var));
        LSequent { context, label, formula }
    }

    pub fn context_vars(&self) -> Vec<String> {
        self.context.iter().map(|h| h.var.clone()).collect()
    }

    /// Every label variable occurs once and is exactly a context variable.
    pub fn label_discipline_holds(&self) -> bool {
        let mut lv = self.label.vars();
        lv.sort();
        lv == self.context_vars()
    }
}

impl fmt::Display for LSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx: Vec<String> = self.context.iter().map(|h| format!("${}:{}", h.var, h.formula)).collect();
        write!(f, "{} ⊢ {} : {}", ctx.join(", "), self.label, self.formula)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CmgRule {
    /// Lexical axiom; `key` identifies the lexicon row.
    Lex { key: String },
    /// Hypothesis axiom.
    Axiom,
    Mg,
    MgHdr,
    /// Product elimination discharging `x` (movement side) and `y`.
    Mv { x: String, y: String },
}

impl CmgRule {
    pub fn name(&self) -> &'static str {
        match self {
            CmgRule::Lex { .. } => "lex",
            CmgRule::Axiom => "axiom",
            CmgRule::Mg => "mg",
            CmgRule::MgHdr => "hdr",
            CmgRule::Mv { .. } => "mv",
        }
    }
}

/// A proof tree. For `/` eliminations premises are `[major, minor]`, for
/// `\` eliminations `[minor, major]`, for `mv` `[tensor, body]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CmgDerivation {
    pub conclusion: LSequent,
    pub rule: CmgRule,
    pub premises: Vec<Arc<CmgDerivation>>,
}

/// A categorial minimalist lexicon.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CmgLexicon {
    pub entries: Vec<(String, CFormula)>,
    pub features: FeatureSets,
    pub start: String,
}

/// Phonology of a row key: `_` and `_name` are empty.
pub fn key_phon(key: &str) -> Vec<String> {
    if key.starts_with('_') {
        vec![]
    } else {
        vec![key.to_string()]
    }
}

impl CmgLexicon {
    pub fn new(entries: Vec<(String, CFormula)>, features: FeatureSets) -> Self {
        CmgLexicon { entries, features, start: "c".into() }
    }
}

/// `⊢ (ε | word | ε) : f` for a lexicon row.
pub fn lex_axiom(lex: &CmgLexicon, key: &str, f: &CFormula) -> Result<Arc<CmgDerivation>, CmgError> {
    if !lex.entries.iter().any(|(k, g)| k == key && g == f) {
        return Err(CmgError::NotInLexicon { word: key.to_string(), formula: f.to_string() });
    }
    let head = key_phon(key).into_iter().map(Sym::Word).collect();
    Ok(Arc::new(CmgDerivation {
        conclusion: LSequent::new(vec![], Label::new(vec![], head, vec![]), f.clone()),
        rule: CmgRule::Lex { key: key.to_string() },
        premises: vec![],
    }))
}

/// `x : f ⊢ (ε | x | ε) : f`.
pub fn var_axiom(x: &str, f: &CFormula) -> Arc<CmgDerivation> {
    Arc::new(CmgDerivation {
        conclusion: LSequent::new(
            vec![Hypothesis { var: x.to_string(), formula: f.clone() }],
            Label::head_only(Sym::Var(x.to_string())),
            f.clone(),
        ),
        rule: CmgRule::Axiom,
        premises: vec![],
    })
}

fn disjoint(a: &LSequent, b: &LSequent) -> Result<(), CmgError> {
    let av = a.context_vars();
    for v in b.context_vars() {
        if av.contains(&v) {
            return Err(CmgError::VariableCollision(format!("${v} occurs in both premises")));
        }
    }
    Ok(())
}

fn union_context(a: &LSequent, b: &LSequent) -> Vec<Hypothesis> {
    a.context.iter().chain(&b.context).cloned().collect()
}

fn cat(parts: &[&[Sym]]) -> Vec<Sym> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

/// Merge: `/`-elimination (argument to the complement) or
/// `\`-elimination (argument to the specifier).
pub fn rule_mg(major: &Arc<CmgDerivation>, minor: &Arc<CmgDerivation>) -> Result<Arc<CmgDerivation>, CmgError> {
    let (r1, r2) = (&major.conclusion, &minor.conclusion);
    let (label, formula, premises) = match &r1.formula {
        CFormula::Over(a, b) if r2.formula == CFormula::Base(b.clone()) => (
            Label::new(r1.label.spec.clone(), r1.label.head.clone(), cat(&[&r1.label.comp, &r2.label.flatten()])),
            (**a).clone(),
            vec![major.clone(), minor.clone()],
        ),
        CFormula::Under(b, a) if r2.formula == CFormula::Base(b.clone()) => (
            Label::new(cat(&[&r2.label.flatten(), &r1.label.spec]), r1.label.head.clone(), r1.label.comp.clone()),
            (**a).clone(),
            vec![minor.clone(), major.clone()],
        ),
        other => {
            return Err(CmgError::TypeClash(format!("cannot merge `{other}` with `{}`", r2.formula)));
        }
    };
    disjoint(r1, r2)?;
    Ok(Arc::new(CmgDerivation {
        conclusion: LSequent::new(union_context(r1, r2), label, formula),
        rule: CmgRule::Mg,
        premises,
    }))
}

/// Head movement with right adjunction: the minor's head joins the major's
/// head on its right.
pub fn rule_hdr(major: &Arc<CmgDerivation>, minor: &Arc<CmgDerivation>) -> Result<Arc<CmgDerivation>, CmgError> {
    let (r, s) = (&major.conclusion, &minor.conclusion);
    let (label, formula, premises) = match &r.formula {
        CFormula::OverHdr(a, b) if s.formula == CFormula::Base(b.clone()) => (
            Label::new(
                r.label.spec.clone(),
                cat(&[&r.label.head, &s.label.head]),
                cat(&[&r.label.comp, &s.label.spec, &s.label.comp]),
            ),
            (**a).clone(),
            vec![major.clone(), minor.clone()],
        ),
        CFormula::UnderHdr(b, a) if s.formula == CFormula::Base(b.clone()) => (
            Label::new(
                cat(&[&s.label.spec, &s.label.comp, &r.label.spec]),
                cat(&[&r.label.head, &s.label.head]),
                r.label.comp.clone(),
            ),
            (**a).clone(),
            vec![minor.clone(), major.clone()],
        ),
        other => {
            return Err(CmgError::TypeClash(format!(
                "head movement needs `/^` or `\\^`, got `{other}` with `{}`",
                s.formula
            )));
        }
    };
    disjoint(r, s)?;
    Ok(Arc::new(CmgDerivation {
        conclusion: LSequent::new(union_context(r, s), label, formula),
        rule: CmgRule::MgHdr,
        premises,
    }))
}

/// Product elimination: `x : A` receives the string of the `A * B`
/// premise, `y : B` receives ε.
pub fn rule_mv(
    tensor: &Arc<CmgDerivation>,
    body: &Arc<CmgDerivation>,
    x: &str,
    y: &str,
) -> Result<Arc<CmgDerivation>, CmgError> {
    let (t, b) = (&tensor.conclusion, &body.conclusion);
    let (a_f, b_f) = match &t.formula {
        CFormula::Tensor(m, rest) => (CFormula::Base(m.clone()), (**rest).clone()),
        other => return Err(CmgError::TypeClash(format!("`{other}` is not a product"))),
    };
    let find = |v: &str| b.context.iter().find(|h| h.var == v);
    match (find(x), find(y)) {
        (Some(hx), Some(hy)) => {
            if hx.formula != a_f || hy.formula != b_f {
                return Err(CmgError::TypeClash(format!(
                        "hypotheses ${x}:{} and ${y}:{} do not match `{}`",
                        hx.formula, hy.formula, t.formula
                )));
            }
        }
        _ => {
            return Err(CmgError::MissingHypotheses(format!(
                "${x}:{a_f} and ${y}:{b_f} must both be in the context"
            )))
        }
    }
    if x == y {
        return Err(CmgError::VariableCollision(format!("${x} used twice")));
    }
    let rest: Vec<Hypothesis> = b.context.iter().filter(|h| h.var != x && h.var != y).cloned().collect();
    for h in &t.context {
        if rest.iter().any(|r| r.var == h.var) {
            return Err(CmgError::VariableCollision(format!("${} occurs in both premises", h.var)));
        }
    }
    let label = b.label.substitute(x, &t.label.flatten()).substitute(y, &[]);
    let context = rest.into_iter().chain(t.context.iter().cloned()).collect();
    Ok(Arc::new(CmgDerivation {
        conclusion: LSequent::new(context, label, b.formula.clone()),
        rule: CmgRule::Mv { x: x.to_string(), y: y.to_string() },
        premises: vec![tensor.clone(), body.clone()],
    }))
}

impl CmgDerivation {
    pub fn formula(&self) -> &CFormula {
        &self.conclusion.formula
    }

    /// Re-applies every rule from the leaves and compares conclusions.
    pub fn replay(&self, lex: Option<&CmgLexicon>) -> Result<(), CmgError> {
        let redo = match &self.rule {
            CmgRule::Lex { key } => match lex {
                Some(l) => lex_axiom(l, key, &self.conclusion.formula)?,
                None => return Ok(()),
            },
            CmgRule::Axiom => {
                let h = self
                    .conclusion
                    .context
                    .first()
                    .ok_or_else(|| CmgError::Malformed("axiom without hypothesis".into()))?;
                var_axiom(&h.var, &h.formula)
            }
            rule => {
                for p in &self.premises {
                    p.replay(lex)?;
                }
                let p = &self.premises;
                if p.len() != 2 {
                    return Err(CmgError::Malformed(format!("{} needs two premises", rule.name())));
                }
                match rule {
                    CmgRule::Mv { x, y } => rule_mv(&p[0], &p[1], x, y)?,
                    _ => {
                        // the major premise carries the connective
                        let (major, minor) = if p[0].formula().is_atomic() { (&p[1], &p[0]) } else { (&p[0], &p[1]) };
                        if *rule == CmgRule::Mg {
                            rule_mg(major, minor)?
                        } else {
                            rule_hdr(major, minor)?
                        }
                    }
                }
            }
        };
        if redo.conclusion != self.conclusion {
            return Err(CmgError::Malformed(format!(
                "replay gives `{}` instead of `{}`",
                redo.conclusion, self.conclusion
            )));
        }
        Ok(())
    }

    /// Rule applications (axioms excluded).
    pub fn rule_count(&self) -> usize {
        let own = usize::from(!matches!(self.rule, CmgRule::Lex { .. } | CmgRule::Axiom));
        own + self.premises.iter().map(|p| p.rule_count()).sum::<usize>()
    }

    /// Nodes in post-order.
    pub fn nodes(&self) -> Vec<&CmgDerivation> {
        let mut out = Vec::new();
        for p in &self.premises {
            out.extend(p.nodes());
        }
        out.push(self);
        out
    }

    /// Lexical rows used, left to right in the proof tree.
    pub fn lexical_keys(&self) -> Vec<String> {
        self.nodes()
            .into_iter()
            .filter_map(|n| match &n.rule {
                CmgRule::Lex { key } => Some(key.clone()),
                _ => None,
            })
            .collect()
    }

    /// The premise carrying the functor (or the body, for `mv`).
    pub fn major(&self) -> Option<&Arc<CmgDerivation>> {
        match self.rule {
            CmgRule::Mv { .. } => self.premises.get(1),
            CmgRule::Mg | CmgRule::MgHdr => {
                let p = &self.premises;
                if p.len() != 2 {
                    return None;
                }
                Some(if p[0].formula().is_atomic() { &p[1] } else { &p[0] })
            }
            _ => None,
        }
    }

    /// The lexical head reached by following major premises.
    pub fn lexical_head(&self) -> Option<&CmgDerivation> {
        match &self.rule {
            CmgRule::Lex { .. } => Some(self),
            CmgRule::Axiom => None,
            _ => self.major()?.lexical_head(),
        }
    }

    /// Rule names in a bottom-up, left-to-right order.
    pub fn rule_sequence(&self) -> Vec<&'static str> {
        self.nodes()
            .into_iter()
            .filter(|n| !matches!(n.rule, CmgRule::Lex { .. } | CmgRule::Axiom))
            .map(|n| n.rule.name())
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DerivationJson::from(self)).expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Arc<CmgDerivation>, CmgError> {
        let j: DerivationJson =
            serde_json::from_value(value.clone()).map_err(|e| CmgError::Malformed(e.to_string()))?;
        j.into_derivation()
    }

    /// Indented text rendering, one sequent per line.
    pub fn pretty(&self) -> String {
        fn go(d: &CmgDerivation, depth: usize, out: &mut String) {
            let tag = match &d.rule {
                CmgRule::Lex { key } => format!("lex {key}"),
                CmgRule::Mv { x, y } => format!("mv ${x} ${y}"),
                r => r.name().to_string(),
            };
            out.push_str(&format!("{}[{}] {}\n", "  ".repeat(depth), tag, d.conclusion));
            for p in &d.premises {
                go(p, depth + 1, out);
            }
        }
        let mut s = String::new();
        go(self, 0, &mut s);
        s
    }
}

#[derive(Serialize, Deserialize)]
struct DerivationJson {
    rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    key: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vars: Option<[String; 2]>,
    formula: String,
    label: [String; 3],
    context: BTreeMap<String, String>,
    premises: Vec<DerivationJson>,
}

impl From<&CmgDerivation> for DerivationJson {
    fn from(d: &CmgDerivation) -> Self {
        let (key, vars) = match &d.rule {
            CmgRule::Lex { key } => (Some(key.clone()), None),
            CmgRule::Mv { x, y } => (None, Some([x.clone(), y.clone()])),
            _ => (None, None),
        };
        DerivationJson {
            rule: d.rule.name().to_string(),
            key,
            vars,
            formula: d.conclusion.formula.to_string(),
            label: d.conclusion.label.parts(),
            context: d
                .conclusion
                .context
                .iter()
                .map(|h| (h.var.clone(), h.formula.to_string()))
                .collect(),
            premises: d.premises.iter().map(|p| DerivationJson::from(p.as_ref())).collect(),
        }
    }
}

impl DerivationJson {
    fn into_derivation(self) -> Result<Arc<CmgDerivation>, CmgError> {
        let rule = match (self.rule.as_str(), self.key, self.vars) {
            ("lex", Some(key), _) => CmgRule::Lex { key },
            ("axiom", _, _) => CmgRule::Axiom,
            ("mg", _, _) => CmgRule::Mg,
            ("hdr", _, _) => CmgRule::MgHdr,
            ("mv", _, Some([x, y])) => CmgRule::Mv { x, y },
            (r, _, _) => return Err(CmgError::Malformed(format!("bad rule `{r}`"))),
        };
        let context = self
            .context
            .into_iter()
            .map(|(var, f)| Ok(Hypothesis { var, formula: parse_any_cformula(&f)? }))
            .collect::<Result<Vec<_>, CmgError>>()?;
        let [s, h, c] = &self.label;
        Ok(Arc::new(CmgDerivation {
            conclusion: LSequent::new(context, Label::from_parts(s, h, c), parse_any_cformula(&self.formula)?),
            rule,
            premises: self
                .premises
                .into_iter()
                .map(DerivationJson::into_derivation)
                .collect::<Result<_, _>>()?,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pizza() -> CmgLexicon {
        let rows = [
            ("the", "(k * d) / n"),
            ("a", "(k * d) / n"),
            ("children", "n"),
            ("pizza", "n"),
            ("ate", "V / d"),
            ("_modif", "(k \\ (d \\ v)) /^ V"),
            ("_infl", "(k \\ t) /^ v"),
            ("_comp", "c / t"),
        ];
        CmgLexicon::new(
            rows.iter().map(|(w, f)| (w.to_string(), parse_cformula(f).unwrap())).collect(),
            FeatureSets::new(["c", "t", "v", "V", "d", "n"], ["k"]),
        )
    }

    fn f(s: &str) -> CFormula {
        parse_any_cformula(s).unwrap()
    }

    #[test]
    fn lexical_axioms() {
        let lex = pizza();
        let d = lex_axiom(&lex, "ate", &f("V / d")).unwrap();
        assert_eq!(d.conclusion.to_string(), " ⊢ (ε | ate | ε) : V / d");
        let d = lex_axiom(&lex, "_comp", &f("c / t")).unwrap();
        assert_eq!(d.conclusion.label, Label::default());
        assert!(matches!(lex_axiom(&lex, "ate", &f("n")), Err(CmgError::NotInLexicon { .. })));
    }

    #[test]
    fn variable_axioms() {
        for (x, fm) in [("u", "d"), ("v", "k"), ("w", "k * d")] {
            let d = var_axiom(x, &f(fm));
            assert_eq!(d.conclusion.label, Label::head_only(Sym::Var(x.into())));
            assert_eq!(d.conclusion.context_vars(), vec![x.to_string()]);
            assert_eq!(d.conclusion.formula, f(fm));
        }
    }

    #[test]
    fn merge_with_a_variable() {
        let lex = pizza();
        let ate = lex_axiom(&lex, "ate", &f("V / d")).unwrap();
        let d = rule_mg(&ate, &var_axiom("u", &f("d"))).unwrap();
        assert_eq!(d.conclusion.label, Label::from_parts("", "ate", "$u"));
        assert_eq!(d.conclusion.formula, f("V"));
        assert!(d.conclusion.label_discipline_holds());
    }

    #[test]
    fn merge_builds_a_determiner_phrase() {
        let lex = pizza();
        let the = lex_axiom(&lex, "the", &f("(k * d) / n")).unwrap();
        let ch = lex_axiom(&lex, "children", &f("n")).unwrap();
        let d = rule_mg(&the, &ch).unwrap();
        assert_eq!(d.conclusion.label, Label::from_parts("", "the", "children"));
        assert_eq!(d.conclusion.formula, f("k * d"));
    }

    #[test]
    fn merge_type_clash() {
        let lex = pizza();
        let a = lex_axiom(&lex, "a", &f("(k * d) / n")).unwrap();
        let ate = lex_axiom(&lex, "ate", &f("V / d")).unwrap();
        assert!(matches!(rule_mg(&a, &ate), Err(CmgError::TypeClash(_))));
    }

    #[test]
    fn merge_rejects_shared_variables() {
        let lex = pizza();
        let ate = lex_axiom(&lex, "ate", &f("V / d")).unwrap();
        let vp = rule_mg(&ate, &var_axiom("u", &f("d"))).unwrap();
        let shell = rule_mg(&var_axiom("u", &f("V \\ v")), &vp);
        assert!(matches!(shell, Err(CmgError::VariableCollision(_))));
    }

    #[test]
    fn head_movement_glues_heads() {
        let lex = pizza();
        let infl = var_axiom("i", &f("(k \\ t) /^ v"));
        let vp = Arc::new(CmgDerivation {
            conclusion: LSequent::new(
                vec![Hypothesis { var: "w".into(), formula: f("d") }],
                Label::from_parts("$w", "v1", "x y"),
                f("v"),
            ),
            rule: CmgRule::Axiom,
            premises: vec![],
        });
        let d = rule_hdr(&infl, &vp).unwrap();
        assert_eq!(d.conclusion.label, Label::from_parts("", "$i v1", "$w x y"));
        assert_eq!(d.conclusion.formula, f("k \\ t"));

        let comp = var_axiom("c0", &f("c /^ t"));
        let shell = lex_axiom(&lex, "_modif", &f("(k \\ (d \\ v)) /^ V")).unwrap();
        let ate = lex_axiom(&lex, "ate", &f("V / d")).unwrap();
        let vp = rule_mg(&ate, &var_axiom("u", &f("d"))).unwrap();
        let d = rule_hdr(&shell, &vp).unwrap();
        assert_eq!(d.conclusion.label, Label::from_parts("", "ate", "$u"));
        assert!(rule_hdr(&comp, &d).is_err());
        assert!(matches!(rule_hdr(&ate, &var_axiom("z", &f("d"))), Err(CmgError::TypeClash(_))));
    }

    #[test]
    fn under_head_movement_places_the_minor_left() {
        let major = var_axiom("h", &f("V \\^ t"));
        let minor = Arc::new(CmgDerivation {
            conclusion: LSequent::new(vec![], Label::from_parts("s1", "s2", "s3"), f("V")),
            rule: CmgRule::Axiom,
            premises: vec![],
        });
        let d = rule_hdr(&major, &minor).unwrap();
        assert_eq!(d.conclusion.label, Label::from_parts("s1 s3", "$h s2", ""));
    }

    #[test]
    fn product_elimination() {
        let lex = pizza();
        let a = lex_axiom(&lex, "a", &f("(k * d) / n")).unwrap();
        let pizza = lex_axiom(&lex, "pizza", &f("n")).unwrap();
        let dp = rule_mg(&a, &pizza).unwrap();
        let body = Arc::new(CmgDerivation {
            conclusion: LSequent::new(
                vec![
                    Hypothesis { var: "u".into(), formula: f("k") },
                    Hypothesis { var: "v".into(), formula: f("d") },
                ],
                Label::from_parts("$u", "ate", "$v"),
                f("d \\ v"),
            ),
            rule: CmgRule::Axiom,
            premises: vec![],
        });
        let d = rule_mv(&dp, &body, "u", "v").unwrap();
        assert_eq!(d.conclusion.label, Label::from_parts("a pizza", "ate", ""));
        assert!(d.conclusion.context.is_empty());

        let empty = Arc::new(CmgDerivation {
            conclusion: LSequent::new(vec![], Label::default(), f("k * d")),
            rule: CmgRule::Axiom,
            premises: vec![],
        });
        let d = rule_mv(&empty, &body, "u", "v").unwrap();
        assert_eq!(d.conclusion.label, Label::from_parts("", "ate", ""));

        let no_v = Arc::new(CmgDerivation {
            conclusion: LSequent::new(
                vec![Hypothesis { var: "u".into(), formula: f("k") }],
                Label::from_parts("$u", "ate", ""),
                f("d \\ v"),
            ),
            rule: CmgRule::Axiom,
            premises: vec![],
        });
        assert!(matches!(rule_mv(&dp, &no_v, "u", "v"), Err(CmgError::MissingHypotheses(_))));
        assert!(matches!(rule_mv(&pizza, &body, "u", "v"), Err(CmgError::TypeClash(_))));
    }

    #[test]
    fn json_round_trip() {
        let lex = pizza();
        let the = lex_axiom(&lex, "the", &f("(k * d) / n")).unwrap();
        let ch = lex_axiom(&lex, "children", &f("n")).unwrap();
        let d = rule_mg(&the, &ch).unwrap();
        let back = CmgDerivation::from_json(&d.to_json()).unwrap();
        assert_eq!(*back, *d);
        back.replay(Some(&lex)).unwrap();
    }
}
