//! Semantic types and the map from syntactic categories to them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::SemError;
use crate::cmg::{CFormula, FeatureSets};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SemType {
    /// Entities.
    E,
    /// Truth values; also the type of ⊥ for μ-variables.
    T,
    /// Reified events.
    Ev,
    Arrow(Box<SemType>, Box<SemType>),
}

impl SemType {
    pub fn arrow(a: SemType, b: SemType) -> SemType {
        SemType::Arrow(Box::new(a), Box::new(b))
    }

    /// `a1 -> a2 -> ... -> r`.
    pub fn curried(args: &[SemType], result: SemType) -> SemType {
        args.iter().rev().fold(result, |acc, a| SemType::arrow(a.clone(), acc))
    }

    pub fn split(&self) -> Option<(&SemType, &SemType)> {
        match self {
            SemType::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Argument types and final result of a curried function type.
    pub fn uncurry(&self) -> (Vec<&SemType>, &SemType) {
        let mut args = Vec::new();
        let mut cur = self;
        while let SemType::Arrow(a, b) = cur {
            args.push(a.as_ref());
            cur = b;
        }
        (args, cur)
    }

    pub fn parse(text: &str) -> Result<SemType, SemError> {
        let toks = tokenize(text)?;
        let mut pos = 0;
        let t = parse_arrow(&toks, &mut pos)?;
        if pos != toks.len() {
            return Err(SemError::Parse(format!("trailing input in type `{text}`")));
        }
        Ok(t)
    }
}

fn tokenize(text: &str) -> Result<Vec<String>, SemError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' | ')' => {
                out.push(c.to_string());
                chars.next();
            }
            '→' => {
                out.push("->".into());
                chars.next();
            }
            '-' => {
                chars.next();
                if chars.next() != Some('>') {
                    return Err(SemError::Parse(format!("bad arrow in type `{text}`")));
                }
                out.push("->".into());
            }
            c if c.is_alphanumeric() => {
                let mut w = String::new();
                while let Some(&c) = chars.peek() {
                    if !c.is_alphanumeric() {
                        break;
                    }
                    w.push(c);
                    chars.next();
                }
                out.push(w);
            }
            other => return Err(SemError::Parse(format!("unexpected `{other}` in type `{text}`"))),
        }
    }
    Ok(out)
}

fn parse_arrow(toks: &[String], pos: &mut usize) -> Result<SemType, SemError> {
    let left = parse_atom(toks, pos)?;
    if toks.get(*pos).map(String::as_str) == Some("->") {
        *pos += 1;
        let right = parse_arrow(toks, pos)?;
        return Ok(SemType::arrow(left, right));
    }
    Ok(left)
}

fn parse_atom(toks: &[String], pos: &mut usize) -> Result<SemType, SemError> {
    let tok = toks.get(*pos).ok_or_else(|| SemError::Parse("unexpected end of type".into()))?;
    *pos += 1;
    match tok.as_str() {
        "e" => Ok(SemType::E),
        "t" => Ok(SemType::T),
        "ev" => Ok(SemType::Ev),
        "(" => {
            let t = parse_arrow(toks, pos)?;
            if toks.get(*pos).map(String::as_str) != Some(")") {
                return Err(SemError::Parse("missing `)` in type".into()));
            }
            *pos += 1;
            Ok(t)
        }
        other => Err(SemError::Parse(format!("unknown type `{other}`"))),
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemType::E => f.write_str("e"),
            SemType::T => f.write_str("t"),
            SemType::Ev => f.write_str("ev"),
            SemType::Arrow(a, b) => {
                if a.split().is_some() {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
        }
    }
}

/// Images of base categories; movement features map to `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HMap {
    pub images: BTreeMap<String, SemType>,
    pub movement: Vec<String>,
}

impl Default for HMap {
    fn default() -> Self {
        let ev_t = SemType::arrow(SemType::Ev, SemType::T);
        let images = [
            ("c", SemType::T),
            ("v", ev_t.clone()),
            ("t", ev_t.clone()),
            ("V", SemType::arrow(SemType::E, ev_t)),
            ("d", SemType::E),
            ("n", SemType::arrow(SemType::E, SemType::T)),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        HMap { images, movement: vec![] }
    }
}

impl HMap {
    pub fn for_features(sets: &FeatureSets) -> Self {
        HMap { movement: sets.movement.iter().cloned().collect(), ..HMap::default() }
    }

    pub fn set(&mut self, name: &str, ty: SemType) {
        self.images.insert(name.to_string(), ty);
    }

    fn atom(&self, name: &str) -> Result<SemType, SemError> {
        if let Some(t) = self.images.get(name) {
            return Ok(t.clone());
        }
        if self.movement.iter().any(|m| m == name) {
            return Ok(SemType::E);
        }
        Err(SemError::UnknownBase(name.to_string()))
    }
}

/// The semantic type of a syntactic category.
pub fn h_type(f: &CFormula, h: &HMap) -> Result<SemType, SemError> {
    Ok(match f {
        CFormula::Base(b) => h.atom(b)?,
        CFormula::Tensor(m, c) => {
            if h.movement.iter().any(|x| x == m) || !h.images.contains_key(m) {
                h_type(c, h)?
            } else {
                h.atom(m)?
            }
        }
        CFormula::Over(a, b) | CFormula::OverHdr(a, b) | CFormula::Under(b, a) | CFormula::UnderHdr(b, a) => {
            SemType::arrow(h.atom(b)?, h_type(a, h)?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmg::parse_any_cformula;

    fn h() -> HMap {
        HMap::for_features(&FeatureSets::new(["c", "t", "v", "V", "d", "n"], ["k"]))
    }

    fn ty(f: &str) -> String {
        h_type(&parse_any_cformula(f).unwrap(), &h()).unwrap().to_string()
    }

    #[test]
    fn table_values() {
        assert_eq!(ty("k * d"), "e");
        assert_eq!(ty("(k * d) / n"), "(e -> t) -> e");
        assert_eq!(ty("c / t"), "(ev -> t) -> t");
        assert_eq!(ty("V / d"), "e -> e -> ev -> t");
        assert_eq!(ty("(k \\ (d \\ v)) /^ V"), "(e -> ev -> t) -> e -> e -> ev -> t");
        assert_eq!(ty("(k \\ t) /^ v"), "(ev -> t) -> e -> ev -> t");
    }

    #[test]
    fn unknown_base() {
        let f = parse_any_cformula("q / d").unwrap();
        assert_eq!(h_type(&f, &h()), Err(SemError::UnknownBase("q".into())));
    }

    #[test]
    fn type_syntax_round_trips() {
        for s in ["e", "(e -> t) -> e", "e -> e -> ev -> t", "((ev -> t) -> t) -> e"] {
            assert_eq!(SemType::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(SemType::parse("e→t").unwrap(), SemType::arrow(SemType::E, SemType::T));
        assert!(SemType::parse("e -> ").is_err());
    }
}
