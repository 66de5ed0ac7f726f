//! Formulae of the restricted partially commutative calculus.
//!
//! Concrete syntax: `A / b`, `A /^ b`, `a \ A`, `a \^ A`, `m * A`, with
//! parentheses. `/` binds loosest and associates left; `\` and `*` associate
//! right, `*` binding tightest. `⊗`, `/↑` and `\↑` are accepted as aliases.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::CmgError;
use crate::mg::is_feature_name;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CFormula {
    Base(String),
    /// `A / b`
    Over(Box<CFormula>, String),
    /// `A /^ b`
    OverHdr(Box<CFormula>, String),
    /// `b \ A`
    Under(String, Box<CFormula>),
    /// `b \^ A`
    UnderHdr(String, Box<CFormula>),
    /// `m * A`
    Tensor(String, Box<CFormula>),
}

/// The declared base categories and movement features of a grammar.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSets {
    pub base: BTreeSet<String>,
    pub movement: BTreeSet<String>,
}

impl FeatureSets {
    pub fn new<I, J, S, T>(base: I, movement: J) -> Self
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        FeatureSets {
            base: base.into_iter().map(Into::into).collect(),
            movement: movement.into_iter().map(Into::into).collect(),
        }
    }

    pub fn is_base(&self, name: &str) -> bool {
        self.base.contains(name)
    }

    pub fn is_movement(&self, name: &str) -> bool {
        self.movement.contains(name)
    }
}

impl CFormula {
    pub fn base(name: impl Into<String>) -> Self {
        CFormula::Base(name.into())
    }
    pub fn over(a: CFormula, b: impl Into<String>) -> Self {
        CFormula::Over(Box::new(a), b.into())
    }
    pub fn over_hdr(a: CFormula, b: impl Into<String>) -> Self {
        CFormula::OverHdr(Box::new(a), b.into())
    }
    pub fn under(b: impl Into<String>, a: CFormula) -> Self {
        CFormula::Under(b.into(), Box::new(a))
    }
    pub fn under_hdr(b: impl Into<String>, a: CFormula) -> Self {
        CFormula::UnderHdr(b.into(), Box::new(a))
    }
    pub fn tensor(m: impl Into<String>, a: CFormula) -> Self {
        CFormula::Tensor(m.into(), Box::new(a))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, CFormula::Base(_))
    }

    /// The part left once every implication has been eliminated.
    pub fn c_layer(&self) -> &CFormula {
        match self {
            CFormula::Over(a, _) | CFormula::OverHdr(a, _) => a.c_layer(),
            CFormula::Under(_, a) | CFormula::UnderHdr(_, a) => a.c_layer(),
            other => other,
        }
    }

    /// For `m_n * (... * (m_1 * b))`: the licensees innermost first and `b`.
    pub fn tensor_chain(&self) -> Option<(Vec<String>, String)> {
        match self {
            CFormula::Base(b) => Some((vec![], b.clone())),
            CFormula::Tensor(m, rest) => {
                let (mut ls, b) = rest.tensor_chain()?;
                ls.push(m.clone());
                Some((ls, b))
            }
            _ => None,
        }
    }

    /// Builds `m_n * (... * (m_1 * b))` from licensees innermost first.
    pub fn from_chain(licensees: &[String], base: &str) -> CFormula {
        licensees
            .iter()
            .fold(CFormula::base(base), |acc, m| CFormula::tensor(m.clone(), acc))
    }

    /// Every feature name in the formula.
    pub fn names(&self) -> Vec<&str> {
        match self {
            CFormula::Base(b) => vec![b],
            CFormula::Over(a, b) | CFormula::OverHdr(a, b) => {
                let mut v = a.names();
                v.push(b);
                v
            }
            CFormula::Under(b, a) | CFormula::UnderHdr(b, a) | CFormula::Tensor(b, a) => {
                let mut v = vec![b.as_str()];
                v.extend(a.names());
                v
            }
        }
    }

    /// Whether the formula has the shape of a lexical formula
    /// (`x / b | x /^ b | c`).
    pub fn is_lexical_shape(&self) -> bool {
        match self {
            CFormula::Over(x, _) | CFormula::OverHdr(x, _) => x.is_x_shape(),
            other => other.is_c_shape(),
        }
    }

    fn is_x_shape(&self) -> bool {
        match self {
            CFormula::Under(_, x) | CFormula::UnderHdr(_, x) => x.is_x_shape(),
            other => other.is_c_shape(),
        }
    }

    fn is_c_shape(&self) -> bool {
        match self {
            CFormula::Base(_) => true,
            CFormula::Tensor(_, c) => c.is_c_shape(),
            _ => false,
        }
    }

    /// Checks feature classification: right of `/` and left of `\^` are
    /// base categories, left of `*` is a movement feature, left of `\` is
    /// either, and the innermost category is a base category.
    pub fn validate(&self, sets: &FeatureSets) -> Result<(), CmgError> {
        let base = |n: &str| {
            if sets.is_base(n) {
                Ok(())
            } else {
                Err(CmgError::GrammarViolation(format!("`{n}` is not a declared base category in `{self}`")))
            }
        };
        match self {
            CFormula::Base(b) => base(b),
            CFormula::Over(a, b) | CFormula::OverHdr(a, b) => {
                base(b)?;
                a.validate(sets)
            }
            CFormula::UnderHdr(b, a) => {
                base(b)?;
                a.validate(sets)
            }
            CFormula::Under(b, a) => {
                if !sets.is_base(b) && !sets.is_movement(b) {
                    return Err(CmgError::GrammarViolation(format!(
                        "`{b}` is neither a base category nor a movement feature in `{self}`"
                    )));
                }
                a.validate(sets)
            }
            CFormula::Tensor(m, a) => {
                if !sets.is_movement(m) {
                    return Err(CmgError::GrammarViolation(format!(
                        "`{m}` is not a declared movement feature in `{self}`"
                    )));
                }
                a.validate(sets)
            }
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_atomic() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

impl fmt::Display for CFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CFormula::Base(b) => f.write_str(b),
            CFormula::Over(a, b) => {
                a.fmt_operand(f)?;
                write!(f, " / {b}")
            }
            CFormula::OverHdr(a, b) => {
                a.fmt_operand(f)?;
                write!(f, " /^ {b}")
            }
            CFormula::Under(b, a) => {
                write!(f, "{b} \\ ")?;
                a.fmt_operand(f)
            }
            CFormula::UnderHdr(b, a) => {
                write!(f, "{b} \\^ ")?;
                a.fmt_operand(f)
            }
            CFormula::Tensor(m, a) => {
                write!(f, "{m} * ")?;
                a.fmt_operand(f)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    LParen,
    RParen,
    Over,
    OverHdr,
    Under,
    UnderHdr,
    Tensor,
}

fn tokenize(text: &str) -> Result<Vec<Tok>, CmgError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let hdr_next = matches!(chars.get(i + 1), Some('^') | Some('↑'));
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            '*' | '⊗' => {
                toks.push(Tok::Tensor);
                i += 1;
            }
            '/' => {
                toks.push(if hdr_next { Tok::OverHdr } else { Tok::Over });
                i += if hdr_next { 2 } else { 1 };
            }
            '\\' => {
                toks.push(if hdr_next { Tok::UnderHdr } else { Tok::Under });
                i += if hdr_next { 2 } else { 1 };
            }
            c if c.is_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                toks.push(Tok::Name(chars[start..i].iter().collect()));
            }
            other => {
                return Err(CmgError::Parse(format!("unexpected character `{other}` in `{text}`")));
            }
        }
    }
    Ok(toks)
}

/// Connective tree before layer checking.
#[derive(Debug, Clone)]
enum Raw {
    Atom(String),
    Bin(Tok, Box<Raw>, Box<Raw>),
}

struct RawParser<'a> {
    toks: &'a [Tok],
    pos: usize,
    text: &'a str,
}

impl RawParser<'_> {
    fn err(&self, msg: &str) -> CmgError {
        CmgError::Parse(format!("{msg} in `{}`", self.text))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    // over := under (('/' | '/^') under)*
    fn over(&mut self) -> Result<Raw, CmgError> {
        let mut lhs = self.under()?;
        while let Some(op @ (Tok::Over | Tok::OverHdr)) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.under()?;
            lhs = Raw::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    // under := tensor (('\' | '\^') under)?
    fn under(&mut self) -> Result<Raw, CmgError> {
        let lhs = self.tensor()?;
        if let Some(op @ (Tok::Under | Tok::UnderHdr)) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.under()?;
            return Ok(Raw::Bin(op, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    // tensor := atom ('*' tensor)?
    fn tensor(&mut self) -> Result<Raw, CmgError> {
        let lhs = self.atom()?;
        if let Some(Tok::Tensor) = self.peek() {
            self.pos += 1;
            let rhs = self.tensor()?;
            return Ok(Raw::Bin(Tok::Tensor, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<Raw, CmgError> {
        match self.peek().cloned() {
            Some(Tok::Name(n)) => {
                self.pos += 1;
                if !is_feature_name(&n) {
                    return Err(self.err(&format!("bad feature name `{n}`")));
                }
                Ok(Raw::Atom(n))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.over()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("missing `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => Err(self.err("expected a feature name or `(`")),
            None => Err(self.err("unexpected end of formula")),
        }
    }
}

fn parse_raw(text: &str) -> Result<Raw, CmgError> {
    let toks = tokenize(text)?;
    let mut p = RawParser { toks: &toks, pos: 0, text };
    let raw = p.over()?;
    if p.pos != toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(raw)
}

fn violation(text: &str) -> CmgError {
    CmgError::GrammarViolation(format!("`{}` is outside the categorial minimalist formula grammar", text.trim()))
}

fn name_of(raw: &Raw, text: &str) -> Result<String, CmgError> {
    match raw {
        Raw::Atom(n) => Ok(n.clone()),
        Raw::Bin(..) => Err(violation(text)),
    }
}

fn c_layer(raw: &Raw, text: &str) -> Result<CFormula, CmgError> {
    match raw {
        Raw::Atom(n) => Ok(CFormula::Base(n.clone())),
        Raw::Bin(Tok::Tensor, l, r) => Ok(CFormula::tensor(name_of(l, text)?, c_layer(r, text)?)),
        Raw::Bin(..) => Err(violation(text)),
    }
}

fn x_layer(raw: &Raw, text: &str) -> Result<CFormula, CmgError> {
    match raw {
        Raw::Bin(Tok::Under, l, r) => Ok(CFormula::under(name_of(l, text)?, x_layer(r, text)?)),
        Raw::Bin(Tok::UnderHdr, l, r) => Ok(CFormula::under_hdr(name_of(l, text)?, x_layer(r, text)?)),
        other => c_layer(other, text),
    }
}

fn top_layer(raw: &Raw, text: &str) -> Result<CFormula, CmgError> {
    match raw {
        Raw::Bin(Tok::Over, l, r) => Ok(CFormula::over(x_layer(l, text)?, name_of(r, text)?)),
        Raw::Bin(Tok::OverHdr, l, r) => Ok(CFormula::over_hdr(x_layer(l, text)?, name_of(r, text)?)),
        other => x_layer(other, text),
    }
}

/// Parses a lexical formula (`x / b`, `x /^ b` or `c`).
pub fn parse_cformula(text: &str) -> Result<CFormula, CmgError> {
    let f = parse_any_cformula(text)?;
    if !f.is_lexical_shape() {
        return Err(violation(text));
    }
    Ok(f)
}

/// Parses any formula occurring in a derivation, including the
/// intermediate `b \ x` layer.
pub fn parse_any_cformula(text: &str) -> Result<CFormula, CmgError> {
    let raw = parse_raw(text)?;
    top_layer(&raw, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determiner_formula() {
        let f = parse_cformula("(k * d) / n").unwrap();
        assert_eq!(f, CFormula::over(CFormula::tensor("k", CFormula::base("d")), "n"));
        assert_eq!(f.to_string(), "(k * d) / n");
        assert_eq!(parse_cformula("k ⊗ d / n").unwrap(), f);
    }

    #[test]
    fn shell_formula() {
        let f = parse_cformula("(k \\ (d \\ v)) /^ V").unwrap();
        assert_eq!(
            f,
            CFormula::over_hdr(
                CFormula::under("k", CFormula::under("d", CFormula::base("v"))),
                "V"
            )
        );
        assert_eq!(parse_cformula("k \\ d \\ v /↑ V").unwrap(), f);
        assert_eq!(f.to_string(), "(k \\ (d \\ v)) /^ V");
    }

    #[test]
    fn complex_argument_is_a_grammar_violation() {
        assert!(matches!(parse_cformula("d / (n / n)"), Err(CmgError::GrammarViolation(_))));
        assert!(matches!(parse_cformula("(a / b) / (c / d)"), Err(CmgError::GrammarViolation(_))));
        assert!(matches!(parse_cformula("(d / n) * k"), Err(CmgError::GrammarViolation(_))));
        assert!(matches!(parse_cformula("d \\ v"), Err(CmgError::GrammarViolation(_))));
        assert!(parse_any_cformula("d \\ v").is_ok());
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_cformula("(k * d"), Err(CmgError::Parse(_))));
        assert!(matches!(parse_cformula("k # d"), Err(CmgError::Parse(_))));
        assert!(matches!(parse_cformula(""), Err(CmgError::Parse(_))));
    }

    #[test]
    fn validation_uses_declared_sets() {
        let sets = FeatureSets::new(["c", "t", "v", "V", "d", "n"], ["k"]);
        parse_cformula("(k \\ (d \\ v)) /^ V").unwrap().validate(&sets).unwrap();
        assert!(parse_cformula("(d * d) / n").unwrap().validate(&sets).is_err());
        assert!(parse_cformula("x / n").unwrap().validate(&sets).is_err());
    }

    #[test]
    fn tensor_chain_is_innermost_first() {
        let f = parse_cformula("wh * k * d").unwrap();
        assert_eq!(f.tensor_chain(), Some((vec!["k".into(), "wh".into()], "d".into())));
        assert_eq!(CFormula::from_chain(&["k".into(), "wh".into()], "d"), f);
    }
}
