//! Concrete syntax for λμ-DRS terms.
//!
//! `\x. t` or `\x:e. t` (λ), `mu a. t` (μ), `[d1 d2 | t]` (box), `(f x)` or
//! `f x` (application), `f(x, y)` (curried application), `&` (∧), `&&`
//! (fusion), `=>` (implication), `==` (equality). `λ`, `μ`, `∧`, `∧̄`, `⇒`
//! and `≐` are accepted as aliases. `&` and `&&` share one precedence level
//! and associate to the left; `=>` is looser and associates to the right.
//! Binder types may be omitted: they are inferred by unification against
//! the constants' declared types and the expected type of the whole term.

use std::collections::BTreeMap;

use super::{LmuTerm, SemError, SemType};

/// Constant declarations for the parser.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub consts: BTreeMap<String, SemType>,
    /// Accept unbound identifiers as discourse referents.
    pub free_refs: bool,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn declare(&mut self, name: &str, ty: SemType) {
        self.consts.insert(name.to_string(), ty);
    }

    pub fn with_free_refs(mut self) -> Self {
        self.free_refs = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String, bool),
    Lambda,
    Mu,
    Dot,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Bar,
    Comma,
    Type(String),
    And,
    Fusion,
    Implies,
    Equals,
}

fn tokenize(src: &str) -> Result<Vec<Tok>, SemError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |m: String| SemError::Parse(m);
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        match c {
            c if c.is_whitespace() => i += 1,
            '\\' | 'λ' => {
                out.push(Tok::Lambda);
                i += 1;
            }
            'μ' => {
                out.push(Tok::Mu);
                i += 1;
            }
            '.' => {
                out.push(Tok::Dot);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '[' => {
                out.push(Tok::LBrack);
                i += 1;
            }
            ']' => {
                out.push(Tok::RBrack);
                i += 1;
            }
            '|' => {
                out.push(Tok::Bar);
                i += 1;
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            ':' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j] != '.' {
                    j += 1;
                }
                out.push(Tok::Type(chars[start..j].iter().collect()));
                i = j;
            }
            '&' if next == Some('&') => {
                out.push(Tok::Fusion);
                i += 2;
            }
            '&' => {
                out.push(Tok::And);
                i += 1;
            }
            '∧' if next == Some('\u{304}') => {
                out.push(Tok::Fusion);
                i += 2;
            }
            '∧' => {
                out.push(Tok::And);
                i += 1;
            }
            '=' if next == Some('>') => {
                out.push(Tok::Implies);
                i += 2;
            }
            '=' if next == Some('=') => {
                out.push(Tok::Equals);
                i += 2;
            }
            '⇒' => {
                out.push(Tok::Implies);
                i += 1;
            }
            '≐' => {
                out.push(Tok::Equals);
                i += 1;
            }
            c if c.is_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                if word == "mu" {
                    out.push(Tok::Mu);
                } else {
                    out.push(Tok::Ident(word, chars.get(i) == Some(&'(')));
                }
            }
            other => return Err(err(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

// Types with unification variables.
#[derive(Debug, Clone, PartialEq)]
enum Ty {
    E,
    T,
    Ev,
    Arr(Box<Ty>, Box<Ty>),
    Var(usize),
}

impl Ty {
    fn from_sem(t: &SemType) -> Ty {
        match t {
            SemType::E => Ty::E,
            SemType::T => Ty::T,
            SemType::Ev => Ty::Ev,
            SemType::Arrow(a, b) => Ty::Arr(Box::new(Ty::from_sem(a)), Box::new(Ty::from_sem(b))),
        }
    }
    fn arr(a: Ty, b: Ty) -> Ty {
        Ty::Arr(Box::new(a), Box::new(b))
    }
}

#[derive(Debug, Clone)]
enum Pre {
    Var(String, Ty),
    Ref(String, Ty),
    Const(String, SemType),
    Lam(String, Ty, Box<Pre>),
    Mu(String, Ty, Box<Pre>),
    Name(String, Box<Pre>),
    App(Box<Pre>, Box<Pre>),
    Drs(Vec<(String, Ty)>, Box<Pre>),
    And(Box<Pre>, Box<Pre>),
    Fusion(Box<Pre>, Box<Pre>),
    Implies(Box<Pre>, Box<Pre>),
    Eq(Box<Pre>, Box<Pre>),
}

#[derive(Debug, Clone)]
enum Binding {
    Lam(Ty),
    /// μ-variable with the type of its μ-term.
    Mu(Ty),
    Ref(Ty),
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    sig: &'a Signature,
    scope: Vec<(String, Binding)>,
    free: BTreeMap<String, Ty>,
    box_refs: Vec<Ty>,
    subst: Vec<Option<Ty>>,
}

impl Parser<'_> {
    fn fresh(&mut self) -> Ty {
        self.subst.push(None);
        Ty::Var(self.subst.len() - 1)
    }

    fn resolve(&self, t: &Ty) -> Ty {
        match t {
            Ty::Var(v) => match &self.subst[*v] {
                Some(b) => self.resolve(b),
                None => t.clone(),
            },
            Ty::Arr(a, b) => Ty::arr(self.resolve(a), self.resolve(b)),
            other => other.clone(),
        }
    }

    fn occurs(&self, v: usize, t: &Ty) -> bool {
        match self.resolve(t) {
            Ty::Var(w) => v == w,
            Ty::Arr(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
            _ => false,
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty, what: &str) -> Result<(), SemError> {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            _ if a == b => Ok(()),
            (Ty::Var(v), other) | (other, Ty::Var(v)) => {
                if self.occurs(*v, other) {
                    return Err(self.type_error(what, &a, &b));
                }
                self.subst[*v] = Some(other.clone());
                Ok(())
            }
            (Ty::Arr(a1, b1), Ty::Arr(a2, b2)) => {
                self.unify(a1, a2, what)?;
                self.unify(b1, b2, what)
            }
            _ => Err(self.type_error(what, &a, &b)),
        }
    }

    fn type_error(&self, what: &str, a: &Ty, b: &Ty) -> SemError {
        SemError::IllTyped { path: what.to_string(), message: format!("cannot unify {} with {}", show(a), show(b)) }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), SemError> {
        match self.bump() {
            Some(ref got) if *got == t => Ok(()),
            other => Err(SemError::Parse(format!("expected {t:?}, found {other:?}"))),
        }
    }

    fn ident(&mut self) -> Result<String, SemError> {
        match self.bump() {
            Some(Tok::Ident(n, _)) => Ok(n),
            other => Err(SemError::Parse(format!("expected an identifier, found {other:?}"))),
        }
    }

    // Returns the pre-term and its type.
    fn expr(&mut self) -> Result<(Pre, Ty), SemError> {
        match self.peek() {
            Some(Tok::Lambda) => {
                self.bump();
                let x = self.ident()?;
                let ty = match self.peek() {
                    Some(Tok::Type(s)) => {
                        let s = s.clone();
                        self.bump();
                        Ty::from_sem(&SemType::parse(&s)?)
                    }
                    _ => self.fresh(),
                };
                self.expect(Tok::Dot)?;
                self.scope.push((x.clone(), Binding::Lam(ty.clone())));
                let body = self.expr();
                self.scope.pop();
                let (b, bt) = body?;
                Ok((Pre::Lam(x, ty.clone(), Box::new(b)), Ty::arr(ty, bt)))
            }
            Some(Tok::Mu) => {
                self.bump();
                let a = self.ident()?;
                self.expect(Tok::Dot)?;
                let x = self.fresh();
                self.scope.push((a.clone(), Binding::Mu(x.clone())));
                let body = self.expr();
                self.scope.pop();
                let (b, bt) = body?;
                self.unify(&bt, &Ty::T, &format!("body of mu {a}"))?;
                Ok((Pre::Mu(a, x.clone(), Box::new(b)), x))
            }
            _ => self.implication(),
        }
    }

    fn implication(&mut self) -> Result<(Pre, Ty), SemError> {
        let (l, lt) = self.conjunction()?;
        if self.peek() == Some(&Tok::Implies) {
            self.bump();
            // referents of an antecedent box are visible in the consequent
            let n = self.scope.len();
            if let Pre::Drs(refs, _) = &l {
                for (r, ty) in refs {
                    self.scope.push((r.clone(), Binding::Ref(ty.clone())));
                }
            }
            let right = self.expr();
            self.scope.truncate(n);
            let (r, rt) = right?;
            self.unify(&lt, &Ty::T, "antecedent")?;
            self.unify(&rt, &Ty::T, "consequent")?;
            return Ok((Pre::Implies(Box::new(l), Box::new(r)), Ty::T));
        }
        Ok((l, lt))
    }

    fn conjunction(&mut self) -> Result<(Pre, Ty), SemError> {
        let (mut acc, mut at) = self.equality()?;
        while let Some(op @ (Tok::And | Tok::Fusion)) = self.peek().cloned() {
            self.bump();
            let (r, rt) = self.equality()?;
            self.unify(&at, &Ty::T, "conjunct")?;
            self.unify(&rt, &Ty::T, "conjunct")?;
            acc = if op == Tok::And { Pre::And(Box::new(acc), Box::new(r)) } else { Pre::Fusion(Box::new(acc), Box::new(r)) };
            at = Ty::T;
        }
        Ok((acc, at))
    }

    fn equality(&mut self) -> Result<(Pre, Ty), SemError> {
        let (l, lt) = self.application()?;
        if self.peek() == Some(&Tok::Equals) {
            self.bump();
            let (r, rt) = self.application()?;
            self.unify(&lt, &Ty::E, "equality")?;
            self.unify(&rt, &Ty::E, "equality")?;
            return Ok((Pre::Eq(Box::new(l), Box::new(r)), Ty::T));
        }
        Ok((l, lt))
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(..) | Tok::LParen | Tok::LBrack))
    }

    fn application(&mut self) -> Result<(Pre, Ty), SemError> {
        let (mut f, mut ft) = self.atom()?;
        while self.starts_atom() {
            let (a, at) = self.atom()?;
            (f, ft) = self.apply(f, ft, a, at)?;
        }
        Ok((f, ft))
    }

    fn apply(&mut self, f: Pre, ft: Ty, a: Pre, at: Ty) -> Result<(Pre, Ty), SemError> {
        if let Pre::Var(name, _) = &f {
            if let Some(Binding::Mu(x)) = self.lookup(name) {
                self.unify(&at, &x, &format!("argument of {name}"))?;
                return Ok((Pre::Name(name.clone(), Box::new(a)), Ty::T));
            }
        }
        if matches!(f, Pre::Name(..)) {
            return Err(SemError::Parse("a named term cannot be applied".into()));
        }
        let r = self.fresh();
        self.unify(&ft, &Ty::arr(at, r.clone()), "application")?;
        Ok((Pre::App(Box::new(f), Box::new(a)), r))
    }

    fn lookup(&self, name: &str) -> Option<Binding> {
        self.scope.iter().rev().find(|(n, _)| n == name).map(|(_, b)| b.clone())
    }

    fn atom(&mut self) -> Result<(Pre, Ty), SemError> {
        match self.bump() {
            Some(Tok::Ident(name, call)) => {
                let (mut f, mut ft) = self.identifier(&name)?;
                if call {
                    self.expect(Tok::LParen)?;
                    loop {
                        let (a, at) = self.expr()?;
                        (f, ft) = self.apply(f, ft, a, at)?;
                        match self.bump() {
                            Some(Tok::Comma) => continue,
                            Some(Tok::RParen) => break,
                            other => return Err(SemError::Parse(format!("expected `,` or `)`, found {other:?}"))),
                        }
                    }
                }
                Ok((f, ft))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(Tok::LBrack) => {
                let mut refs = Vec::new();
                while let Some(Tok::Ident(..)) = self.peek() {
                    let r = self.ident()?;
                    let ty = self.fresh();
                    self.box_refs.push(ty.clone());
                    refs.push((r, ty));
                }
                self.expect(Tok::Bar)?;
                let n = self.scope.len();
                for (r, ty) in &refs {
                    self.scope.push((r.clone(), Binding::Ref(ty.clone())));
                }
                let body = if self.peek() == Some(&Tok::RBrack) {
                    Err(SemError::Parse("empty box body".into()))
                } else {
                    self.expr()
                };
                self.scope.truncate(n);
                let (b, bt) = body?;
                self.expect(Tok::RBrack)?;
                self.unify(&bt, &Ty::T, "box body")?;
                Ok((Pre::Drs(refs, Box::new(b)), Ty::T))
            }
            other => Err(SemError::Parse(format!("unexpected {other:?}"))),
        }
    }

    fn identifier(&mut self, name: &str) -> Result<(Pre, Ty), SemError> {
        match self.lookup(name) {
            Some(Binding::Lam(t)) => Ok((Pre::Var(name.to_string(), t.clone()), t)),
            Some(Binding::Ref(t)) => Ok((Pre::Ref(name.to_string(), t.clone()), t)),
            // only valid in head position, handled by `apply`
            Some(Binding::Mu(x)) => Ok((Pre::Var(name.to_string(), x.clone()), x)),
            None => {
                if let Some(t) = self.sig.consts.get(name) {
                    return Ok((Pre::Const(name.to_string(), t.clone()), Ty::from_sem(t)));
                }
                if self.sig.free_refs {
                    let t = match self.free.get(name) {
                        Some(t) => t.clone(),
                        None => {
                            let t = self.fresh();
                            self.free.insert(name.to_string(), t.clone());
                            t
                        }
                    };
                    return Ok((Pre::Ref(name.to_string(), t.clone()), t));
                }
                Err(SemError::Parse(format!("unbound identifier `{name}`")))
            }
        }
    }

    fn finish_ty(&self, t: &Ty, what: &str, default_e: bool) -> Result<SemType, SemError> {
        Ok(match self.resolve(t) {
            Ty::E => SemType::E,
            Ty::T => SemType::T,
            Ty::Ev => SemType::Ev,
            Ty::Arr(a, b) => SemType::arrow(self.finish_ty(&a, what, default_e)?, self.finish_ty(&b, what, default_e)?),
            Ty::Var(_) if default_e => SemType::E,
            Ty::Var(_) => return Err(SemError::Parse(format!("cannot infer the type of `{what}`"))),
        })
    }

    fn finish(&self, p: &Pre) -> Result<LmuTerm, SemError> {
        Ok(match p {
            Pre::Var(n, t) => LmuTerm::var(n, self.finish_ty(t, n, false)?),
            Pre::Ref(n, t) => LmuTerm::dref(n, self.finish_ty(t, n, true)?),
            Pre::Const(n, t) => LmuTerm::constant(n, t.clone()),
            Pre::Lam(x, t, b) => LmuTerm::lam(x, self.finish_ty(t, x, false)?, self.finish(b)?),
            Pre::Mu(a, t, b) => LmuTerm::mu(a, self.finish_ty(t, a, false)?, self.finish(b)?),
            Pre::Name(a, b) => LmuTerm::name(a, self.finish(b)?),
            Pre::App(f, a) => LmuTerm::app(self.finish(f)?, self.finish(a)?),
            Pre::Drs(refs, b) => {
                let refs = refs
                    .iter()
                    .map(|(r, t)| Ok((r.clone(), self.finish_ty(t, r, true)?)))
                    .collect::<Result<_, SemError>>()?;
                LmuTerm::drs(refs, self.finish(b)?)
            }
            Pre::And(l, r) => LmuTerm::and(self.finish(l)?, self.finish(r)?),
            Pre::Fusion(l, r) => LmuTerm::fusion(self.finish(l)?, self.finish(r)?),
            Pre::Implies(l, r) => LmuTerm::implies(self.finish(l)?, self.finish(r)?),
            Pre::Eq(l, r) => LmuTerm::eq(self.finish(l)?, self.finish(r)?),
        })
    }
}

fn show(t: &Ty) -> String {
    match t {
        Ty::E => "e".into(),
        Ty::T => "t".into(),
        Ty::Ev => "ev".into(),
        Ty::Var(v) => format!("?{v}"),
        Ty::Arr(a, b) => match a.as_ref() {
            Ty::Arr(..) => format!("({}) -> {}", show(a), show(b)),
            _ => format!("{} -> {}", show(a), show(b)),
        },
    }
}

/// Parses a term, inferring binder types. With `expected`, the term's type
/// is unified with it first.
pub fn parse_term(text: &str, sig: &Signature, expected: Option<&SemType>) -> Result<LmuTerm, SemError> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0, sig, scope: vec![], free: BTreeMap::new(), box_refs: vec![], subst: vec![] };
    let (pre, ty) = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(SemError::Parse(format!("unexpected {:?} after the term", p.toks[p.pos])));
    }
    if let Some(e) = expected {
        p.unify(&ty, &Ty::from_sem(e), "term")?;
    }
    // referents whose type is not otherwise determined are entities
    let refs: Vec<Ty> = p.free.values().cloned().chain(p.box_refs.clone()).collect();
    for r in refs {
        if let Ty::Var(_) = p.resolve(&r) {
            p.unify(&r, &Ty::E, "referent")?;
        }
    }
    let t = p.finish(&pre)?;
    t.typecheck()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        let mut s = Signature::new();
        for (n, t) in [
            ("child", "e -> t"),
            ("pizz", "e -> t"),
            ("eat", "ev -> e -> e -> t"),
            ("patient", "ev -> e -> t"),
            ("agent", "ev -> e -> t"),
            ("past", "ev -> t"),
        ] {
            s.declare(n, SemType::parse(t).unwrap());
        }
        s
    }

    fn ty(s: &str) -> SemType {
        SemType::parse(s).unwrap()
    }

    #[test]
    fn lexical_terms_get_their_types() {
        let cases = [
            ("\\Q. mu delta. [ | [d | (Q d)] => [ | (delta d)]]", "(e -> t) -> e"),
            ("\\Q. mu gamma. [p | (Q p) & (gamma p)]", "(e -> t) -> e"),
            ("\\z. (child z)", "e -> t"),
            ("\\x. \\y. \\e. (((eat e) x) y)", "e -> e -> ev -> t"),
            ("\\R. \\x2. \\y. \\e. ((R y) e) && ((patient e) x2)", "(e -> ev -> t) -> e -> e -> ev -> t"),
            ("\\Q. \\y2. \\e. (Q e) & (past e) && ((agent e) y2)", "(ev -> t) -> e -> ev -> t"),
            ("\\Q. [e | (Q e)]", "(ev -> t) -> t"),
        ];
        for (src, expected) in cases {
            let t = parse_term(src, &sig(), Some(&ty(expected))).unwrap();
            assert_eq!(t.typecheck().unwrap(), ty(expected), "{src}");
        }
    }

    #[test]
    fn mixed_conjunctions_associate_left() {
        let t = parse_term("\\Q. \\y2. \\e. (Q e) & (past e) && ((agent e) y2)", &sig(), None).unwrap();
        let LmuTerm::Lam { body, .. } = t else { panic!() };
        let LmuTerm::Lam { body, .. } = *body else { panic!() };
        let LmuTerm::Lam { body, .. } = *body else { panic!() };
        assert!(matches!(*body, LmuTerm::Fusion { ref left, .. } if matches!(**left, LmuTerm::And { .. })));
    }

    #[test]
    fn call_syntax_is_curried() {
        let a = parse_term("[e p d | eat(e, p, d)]", &sig(), None).unwrap();
        let b = parse_term("[e p d | (((eat e) p) d)]", &sig(), None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "[e p d | eat(e,p,d)]");
    }

    #[test]
    fn printing_round_trips() {
        for src in [
            "\\Q. mu delta. [| [d | (Q d)] => [| (delta d)]]",
            "[e | eat(e,p,d) & past(e) && agent(e,d)]",
            "[x | x == x & (child x => pizz x)]",
        ] {
            let t = parse_term(src, &sig().with_free_refs(), None).unwrap();
            let again = parse_term(&t.to_string(), &sig().with_free_refs(), None).unwrap();
            assert_eq!(t, again, "{src}");
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_term("\\x. (child x", &sig(), None), Err(SemError::Parse(_))));
        assert!(matches!(parse_term("(child q)", &sig(), None), Err(SemError::Parse(_))));
        assert!(matches!(parse_term("(past x) & (child x)", &sig().with_free_refs(), None), Err(SemError::IllTyped { .. })));
        assert!(matches!(
            parse_term("\\z. (child z)", &sig(), Some(&SemType::T)),
            Err(SemError::IllTyped { .. })
        ));
        assert!(parse_term("(child q)", &sig().with_free_refs(), None).is_ok());
    }
}
