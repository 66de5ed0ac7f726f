//! First-order rendering of μ-free, λ-free DRSs, a parser for the rendered
//! formulas, and the way back.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{LmuTerm, SemError, SemType, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fol {
    Atom { pred: String, args: Vec<String> },
    Eq { left: String, right: String },
    And(Box<Fol>, Box<Fol>),
    Implies(Box<Fol>, Box<Fol>),
    Exists(String, Box<Fol>),
    Forall(String, Box<Fol>),
}

impl Fol {
    pub fn atom(pred: impl Into<String>, args: impl IntoIterator<Item = impl Into<String>>) -> Fol {
        Fol::Atom { pred: pred.into(), args: args.into_iter().map(Into::into).collect() }
    }
    pub fn and(l: Fol, r: Fol) -> Fol {
        Fol::And(Box::new(l), Box::new(r))
    }
    pub fn implies(l: Fol, r: Fol) -> Fol {
        Fol::Implies(Box::new(l), Box::new(r))
    }
    pub fn exists(xs: &[String], body: Fol) -> Fol {
        xs.iter().rev().fold(body, |b, x| Fol::Exists(x.clone(), Box::new(b)))
    }
    pub fn forall(xs: &[String], body: Fol) -> Fol {
        xs.iter().rev().fold(body, |b, x| Fol::Forall(x.clone(), Box::new(b)))
    }

    pub fn parse(text: &str) -> Result<Fol, SemError> {
        let toks = tokenize(text)?;
        let mut p = FolParser { toks, pos: 0 };
        let f = p.formula()?;
        if p.pos != p.toks.len() {
            return Err(SemError::Parse(format!("unexpected `{}` in formula", p.toks[p.pos])));
        }
        Ok(f)
    }

    fn conjuncts(&self) -> Vec<&Fol> {
        match self {
            Fol::And(l, r) => {
                let mut v = l.conjuncts();
                v.extend(r.conjuncts());
                v
            }
            other => vec![other],
        }
    }

    /// Bound variables renamed `v0, v1, ...` by quantifier depth and
    /// conjunctions flattened and sorted, so that formulas equal up to
    /// renaming and the order of conjuncts get the same canonical form.
    pub fn canonical(&self) -> Fol {
        fn go(f: &Fol, env: &mut Vec<(String, String)>) -> Fol {
            let look = |x: &String, env: &Vec<(String, String)>| {
                env.iter().rev().find(|(a, _)| a == x).map(|(_, b)| b.clone()).unwrap_or_else(|| x.clone())
            };
            match f {
                Fol::Atom { pred, args } => {
                    Fol::Atom { pred: pred.clone(), args: args.iter().map(|a| look(a, env)).collect() }
                }
                Fol::Eq { left, right } => Fol::Eq { left: look(left, env), right: look(right, env) },
                Fol::And(..) => {
                    let mut parts: Vec<Fol> = Vec::new();
                    for c in f.conjuncts() {
                        let c = go(c, env);
                        parts.extend(c.conjuncts().into_iter().cloned());
                    }
                    parts.sort_by_key(|p| p.to_string());
                    let mut it = parts.into_iter();
                    let first = it.next().expect("a conjunction has conjuncts");
                    it.fold(first, Fol::and)
                }
                Fol::Implies(l, r) => Fol::implies(go(l, env), go(r, env)),
                Fol::Exists(x, b) | Fol::Forall(x, b) => {
                    let v = format!("v{}", env.len());
                    env.push((x.clone(), v.clone()));
                    let b = go(b, env);
                    env.pop();
                    match f {
                        Fol::Exists(..) => Fol::Exists(v, Box::new(b)),
                        _ => Fol::Forall(v, Box::new(b)),
                    }
                }
            }
        }
        go(self, &mut Vec::new())
    }

    fn prec(&self) -> u8 {
        match self {
            Fol::Exists(..) | Fol::Forall(..) => 0,
            Fol::Implies(..) => 1,
            Fol::And(..) => 2,
            _ => 3,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let paren = self.prec() < ctx;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Fol::Atom { pred, args } if args.is_empty() => f.write_str(pred)?,
            Fol::Atom { pred, args } => write!(f, "{pred}({})", args.join(","))?,
            Fol::Eq { left, right } => write!(f, "{left} = {right}")?,
            Fol::And(l, r) => {
                l.fmt_at(f, 2)?;
                f.write_str(" & ")?;
                r.fmt_at(f, 3)?;
            }
            Fol::Implies(l, r) => {
                l.fmt_at(f, 2)?;
                f.write_str(" => ")?;
                r.fmt_at(f, 1)?;
            }
            Fol::Exists(x, b) => {
                write!(f, "exists {x}. ")?;
                b.fmt_at(f, 0)?;
            }
            Fol::Forall(x, b) => {
                write!(f, "forall {x}. ")?;
                b.fmt_at(f, 0)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Fol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

fn tokenize(text: &str) -> Result<Vec<String>, SemError> {
    let mut out = Vec::new();
    let cs: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' | ')' | ',' | '.' | '&' | '=' => {
                if c == '=' && cs.get(i + 1) == Some(&'>') {
                    out.push("=>".into());
                    i += 2;
                } else {
                    out.push(c.to_string());
                    i += 1;
                }
            }
            '∧' => {
                out.push("&".into());
                i += 1;
            }
            '⇒' | '→' => {
                out.push("=>".into());
                i += 1;
            }
            '-' if cs.get(i + 1) == Some(&'>') => {
                out.push("=>".into());
                i += 2;
            }
            '∃' => {
                out.push("exists".into());
                i += 1;
            }
            '∀' => {
                out.push("forall".into());
                i += 1;
            }
            c if is_ident_char(c) => {
                let start = i;
                while i < cs.len() && is_ident_char(cs[i]) {
                    i += 1;
                }
                out.push(cs[start..i].iter().collect());
            }
            other => return Err(SemError::Parse(format!("unexpected `{other}` in formula"))),
        }
    }
    Ok(out)
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn is_ident(t: &str) -> bool {
    t.chars().next().is_some_and(is_ident_char) && t != "exists" && t != "forall"
}

struct FolParser {
    toks: Vec<String>,
    pos: usize,
}

impl FolParser {
    fn peek(&self) -> Option<&str> {
        self.toks.get(self.pos).map(String::as_str)
    }

    fn ident(&mut self) -> Result<String, SemError> {
        match self.toks.get(self.pos) {
            Some(t) if is_ident(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            other => Err(SemError::Parse(format!("expected a name, found {other:?}"))),
        }
    }

    fn expect(&mut self, t: &str) -> Result<(), SemError> {
        if self.peek() == Some(t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(SemError::Parse(format!("expected `{t}`, found {:?}", self.peek())))
        }
    }

    fn formula(&mut self) -> Result<Fol, SemError> {
        if let Some(q @ ("exists" | "forall")) = self.peek() {
            let q = q.to_string();
            self.pos += 1;
            let mut xs = vec![self.ident()?];
            while self.peek().is_some_and(is_ident) && self.toks.get(self.pos + 1).map(String::as_str) != Some("(") {
                xs.push(self.ident()?);
            }
            if self.peek() == Some(".") {
                self.pos += 1;
            }
            let body = self.formula()?;
            return Ok(if q == "exists" { Fol::exists(&xs, body) } else { Fol::forall(&xs, body) });
        }
        let l = self.conjunction()?;
        if self.peek() == Some("=>") {
            self.pos += 1;
            let r = self.formula()?;
            return Ok(Fol::implies(l, r));
        }
        Ok(l)
    }

    fn conjunction(&mut self) -> Result<Fol, SemError> {
        let mut acc = self.unary()?;
        while self.peek() == Some("&") {
            self.pos += 1;
            let r = self.unary()?;
            acc = Fol::and(acc, r);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Fol, SemError> {
        match self.peek() {
            Some("(") => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(")")?;
                Ok(f)
            }
            Some("exists" | "forall") => self.formula(),
            _ => {
                let name = self.ident()?;
                if self.peek() == Some("=") {
                    self.pos += 1;
                    let right = self.ident()?;
                    return Ok(Fol::Eq { left: name, right });
                }
                let mut args = Vec::new();
                if self.peek() == Some("(") {
                    self.pos += 1;
                    args.push(self.ident()?);
                    while self.peek() == Some(",") {
                        self.pos += 1;
                        args.push(self.ident()?);
                    }
                    self.expect(")")?;
                }
                Ok(Fol::Atom { pred: name, args })
            }
        }
    }
}

fn atom_name(t: &LmuTerm) -> Result<String, SemError> {
    match t {
        LmuTerm::DiscRef { name, .. } | LmuTerm::Const { name, .. } => Ok(name.clone()),
        other => Err(SemError::NotFirstOrder(format!("argument `{other}` is not a referent"))),
    }
}

/// The standard first-order translation of a DRS: box referents become
/// existentials, and the referents of an antecedent box are universally
/// quantified over the implication.
pub fn drs_to_fol(d: &LmuTerm) -> Result<Fol, SemError> {
    match d {
        LmuTerm::Drs { refs, body } => {
            let names: Vec<String> = refs.iter().map(|r| r.0.clone()).collect();
            Ok(Fol::exists(&names, drs_to_fol(body)?))
        }
        LmuTerm::Implies { left, right } => {
            let r = drs_to_fol(right)?;
            match left.as_ref() {
                LmuTerm::Drs { refs, body } => {
                    let names: Vec<String> = refs.iter().map(|r| r.0.clone()).collect();
                    Ok(Fol::forall(&names, Fol::implies(drs_to_fol(body)?, r)))
                }
                other => Ok(Fol::implies(drs_to_fol(other)?, r)),
            }
        }
        LmuTerm::And { left, right } => Ok(Fol::and(drs_to_fol(left)?, drs_to_fol(right)?)),
        LmuTerm::Eq { left, right } => Ok(Fol::Eq { left: atom_name(left)?, right: atom_name(right)? }),
        LmuTerm::App { .. } | LmuTerm::Const { .. } => {
            let (head, args) = d.spine();
            let LmuTerm::Const { name, .. } = head else {
                return Err(SemError::NotFirstOrder(format!("`{d}` has no predicate head")));
            };
            Ok(Fol::Atom { pred: name.clone(), args: args.into_iter().map(atom_name).collect::<Result<_, _>>()? })
        }
        other => Err(SemError::NotFirstOrder(format!("`{other}`"))),
    }
}

/// Rebuilds a DRS from a formula of the shape produced by [`drs_to_fol`];
/// predicate types come from `sig`. The result is in [`normalize_drs`] form.
pub fn fol_to_drs(f: &Fol, sig: &Signature) -> Result<LmuTerm, SemError> {
    fn arg_types(f: &Fol, sig: &Signature, out: &mut BTreeMap<String, SemType>) {
        match f {
            Fol::Atom { pred, args } => {
                if let Some(t) = sig.consts.get(pred) {
                    for (a, ty) in args.iter().zip(t.uncurry().0) {
                        out.entry(a.clone()).or_insert_with(|| ty.clone());
                    }
                }
            }
            Fol::Eq { .. } => {}
            Fol::And(l, r) | Fol::Implies(l, r) => {
                arg_types(l, sig, out);
                arg_types(r, sig, out);
            }
            Fol::Exists(_, b) | Fol::Forall(_, b) => arg_types(b, sig, out),
        }
    }
    fn go(f: &Fol, sig: &Signature, tys: &BTreeMap<String, SemType>) -> Result<LmuTerm, SemError> {
        let ty_of = |x: &String| tys.get(x).cloned().unwrap_or(SemType::E);
        Ok(match f {
            Fol::Exists(..) => {
                let mut xs = Vec::new();
                let mut cur = f;
                while let Fol::Exists(x, b) = cur {
                    xs.push((x.clone(), ty_of(x)));
                    cur = b;
                }
                LmuTerm::drs(xs, go(cur, sig, tys)?)
            }
            Fol::Forall(..) => {
                let mut xs = Vec::new();
                let mut cur = f;
                while let Fol::Forall(x, b) = cur {
                    xs.push((x.clone(), ty_of(x)));
                    cur = b;
                }
                let Fol::Implies(l, r) = cur else {
                    return Err(SemError::NotFirstOrder(format!("universal over a non-implication `{cur}`")));
                };
                LmuTerm::implies(LmuTerm::drs(xs, go(l, sig, tys)?), go(r, sig, tys)?)
            }
            Fol::Implies(l, r) => LmuTerm::implies(go(l, sig, tys)?, go(r, sig, tys)?),
            Fol::And(l, r) => LmuTerm::and(go(l, sig, tys)?, go(r, sig, tys)?),
            Fol::Eq { left, right } => {
                LmuTerm::eq(LmuTerm::dref(left, SemType::E), LmuTerm::dref(right, SemType::E))
            }
            Fol::Atom { pred, args } => {
                let t = sig
                    .consts
                    .get(pred)
                    .ok_or_else(|| SemError::Parse(format!("unknown predicate `{pred}`")))?;
                let (params, res) = t.uncurry();
                if params.len() != args.len() || *res != SemType::T {
                    return Err(SemError::IllTyped {
                        path: pred.clone(),
                        message: format!("{} arguments for type {t}", args.len()),
                    });
                }
                LmuTerm::apps(
                    LmuTerm::constant(pred, t.clone()),
                    args.iter().zip(params).map(|(a, ty)| LmuTerm::dref(a, ty.clone())),
                )
            }
        })
    }
    let mut tys = BTreeMap::new();
    arg_types(f, sig, &mut tys);
    Ok(normalize_drs(&go(f, sig, &tys)?))
}

/// Structural normalization of a box for comparison: empty boxes around
/// formulas are dropped, directly nested boxes merged, and conjunctions
/// flattened to the left.
pub fn normalize_drs(d: &LmuTerm) -> LmuTerm {
    fn conjuncts(t: LmuTerm, out: &mut Vec<LmuTerm>) {
        match t {
            LmuTerm::And { left, right } => {
                conjuncts(*left, out);
                conjuncts(*right, out);
            }
            other => out.push(other),
        }
    }
    match d {
        LmuTerm::Drs { refs, body } => {
            let mut refs = refs.clone();
            let mut body = normalize_drs(body);
            while let LmuTerm::Drs { refs: inner, body: b } = body {
                refs.extend(inner);
                body = *b;
            }
            if refs.is_empty() {
                body
            } else {
                LmuTerm::drs(refs, body)
            }
        }
        LmuTerm::And { .. } => {
            let mut parts = Vec::new();
            conjuncts(d.with_children(d.children().into_iter().map(normalize_drs).collect()), &mut parts);
            let mut it = parts.into_iter();
            let first = it.next().expect("a conjunction has conjuncts");
            it.fold(first, LmuTerm::and)
        }
        LmuTerm::Implies { left, right } => LmuTerm::implies(normalize_drs(left), normalize_drs(right)),
        other => other.clone(),
    }
}

/// Box diagram of a DRS, one string per line.
pub fn render_boxes(d: &LmuTerm) -> String {
    box_lines(d).join("\n")
}

fn width(s: &str) -> usize {
    s.chars().count()
}

fn conditions(t: &LmuTerm, out: &mut Vec<Vec<String>>) {
    match t {
        LmuTerm::And { left, right } => {
            conditions(left, out);
            conditions(right, out);
        }
        other => out.push(box_lines(other)),
    }
}

fn box_lines(t: &LmuTerm) -> Vec<String> {
    match t {
        LmuTerm::Drs { refs, body } => {
            let header = refs.iter().map(|r| r.0.as_str()).collect::<Vec<_>>().join(" ");
            let mut conds = Vec::new();
            conditions(body, &mut conds);
            let rows: Vec<String> = conds.into_iter().flatten().collect();
            let w = rows.iter().map(|r| width(r)).chain([width(&header)]).max().unwrap_or(0);
            let rule = format!("+{}+", "-".repeat(w + 2));
            let pad = |s: &str| format!("| {s}{} |", " ".repeat(w - width(s)));
            let mut out = vec![rule.clone(), pad(&header), rule.clone()];
            out.extend(rows.iter().map(|r| pad(r)));
            out.push(rule);
            out
        }
        LmuTerm::Implies { left, right } => {
            let (l, r) = (box_lines(left), box_lines(right));
            let lw = l.iter().map(|s| width(s)).max().unwrap_or(0);
            let h = l.len().max(r.len());
            let mid = h / 2;
            (0..h)
                .map(|i| {
                    let a = l.get(i).map(String::as_str).unwrap_or("");
                    let b = r.get(i).map(String::as_str).unwrap_or("");
                    let arrow = if i == mid { " ==> " } else { "     " };
                    format!("{a}{}{arrow}{b}", " ".repeat(lw - width(a))).trim_end().to_string()
                })
                .collect()
        }
        other => vec![other.to_string()],
    }
}
