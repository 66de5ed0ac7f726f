//! λμ-DRS terms: typing, printing and substitution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{SemError, SemType};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LmuTerm {
    LamVar { name: String, ty: SemType },
    /// A discourse referent; bound by the enclosing box of the same name.
    DiscRef { name: String, ty: SemType },
    Const { name: String, ty: SemType },
    Lam { var: String, ty: SemType, body: Box<LmuTerm> },
    /// `μα.body`; `ty` is the type of the whole term, α has `ty -> t`.
    Mu { var: String, ty: SemType, body: Box<LmuTerm> },
    /// The named term `α(arg)`.
    Name { var: String, arg: Box<LmuTerm> },
    App { fun: Box<LmuTerm>, arg: Box<LmuTerm> },
    /// `[refs | body]`.
    Drs { refs: Vec<(String, SemType)>, body: Box<LmuTerm> },
    And { left: Box<LmuTerm>, right: Box<LmuTerm> },
    /// Dynamic conjunction, resolved by internalization.
    Fusion { left: Box<LmuTerm>, right: Box<LmuTerm> },
    Implies { left: Box<LmuTerm>, right: Box<LmuTerm> },
    Eq { left: Box<LmuTerm>, right: Box<LmuTerm> },
}

use LmuTerm::*;

impl LmuTerm {
    pub fn var(name: impl Into<String>, ty: SemType) -> Self {
        LamVar { name: name.into(), ty }
    }
    pub fn dref(name: impl Into<String>, ty: SemType) -> Self {
        DiscRef { name: name.into(), ty }
    }
    pub fn constant(name: impl Into<String>, ty: SemType) -> Self {
        Const { name: name.into(), ty }
    }
    pub fn lam(var: impl Into<String>, ty: SemType, body: LmuTerm) -> Self {
        Lam { var: var.into(), ty, body: Box::new(body) }
    }
    pub fn mu(var: impl Into<String>, ty: SemType, body: LmuTerm) -> Self {
        Mu { var: var.into(), ty, body: Box::new(body) }
    }
    pub fn name(var: impl Into<String>, arg: LmuTerm) -> Self {
        Name { var: var.into(), arg: Box::new(arg) }
    }
    pub fn app(fun: LmuTerm, arg: LmuTerm) -> Self {
        App { fun: Box::new(fun), arg: Box::new(arg) }
    }
    pub fn apps(fun: LmuTerm, args: impl IntoIterator<Item = LmuTerm>) -> Self {
        args.into_iter().fold(fun, LmuTerm::app)
    }
    pub fn drs(refs: Vec<(String, SemType)>, body: LmuTerm) -> Self {
        Drs { refs, body: Box::new(body) }
    }
    pub fn and(l: LmuTerm, r: LmuTerm) -> Self {
        And { left: Box::new(l), right: Box::new(r) }
    }
    pub fn fusion(l: LmuTerm, r: LmuTerm) -> Self {
        Fusion { left: Box::new(l), right: Box::new(r) }
    }
    pub fn implies(l: LmuTerm, r: LmuTerm) -> Self {
        Implies { left: Box::new(l), right: Box::new(r) }
    }
    pub fn eq(l: LmuTerm, r: LmuTerm) -> Self {
        Eq { left: Box::new(l), right: Box::new(r) }
    }

    /// Immediate subterms, left to right.
    pub fn children(&self) -> Vec<&LmuTerm> {
        match self {
            LamVar { .. } | DiscRef { .. } | Const { .. } => vec![],
            Lam { body, .. } | Mu { body, .. } | Drs { body, .. } => vec![body],
            Name { arg, .. } => vec![arg],
            App { fun, arg } => vec![fun, arg],
            And { left, right } | Fusion { left, right } | Implies { left, right } | Eq { left, right } => {
                vec![left, right]
            }
        }
    }

    /// Rebuilds this node with new immediate subterms.
    pub fn with_children(&self, mut kids: Vec<LmuTerm>) -> LmuTerm {
        let mut next = || Box::new(kids.remove(0));
        match self {
            LamVar { .. } | DiscRef { .. } | Const { .. } => self.clone(),
            Lam { var, ty, .. } => Lam { var: var.clone(), ty: ty.clone(), body: next() },
            Mu { var, ty, .. } => Mu { var: var.clone(), ty: ty.clone(), body: next() },
            Drs { refs, .. } => Drs { refs: refs.clone(), body: next() },
            Name { var, .. } => Name { var: var.clone(), arg: next() },
            App { .. } => App { fun: next(), arg: next() },
            And { .. } => And { left: next(), right: next() },
            Fusion { .. } => Fusion { left: next(), right: next() },
            Implies { .. } => Implies { left: next(), right: next() },
            Eq { .. } => Eq { left: next(), right: next() },
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&LmuTerm> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.children().get(*i)?.at(rest),
        }
    }

    /// Replaces the subterm at `path`.
    pub fn replace_at(&self, path: &[usize], by: LmuTerm) -> LmuTerm {
        match path.split_first() {
            None => by,
            Some((i, rest)) => {
                let kids = self
                    .children()
                    .into_iter()
                    .enumerate()
                    .map(|(j, k)| if j == *i { k.replace_at(rest, by.clone()) } else { k.clone() })
                    .collect();
                self.with_children(kids)
            }
        }
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&LmuTerm, Vec<&LmuTerm>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let App { fun, arg } = cur {
            args.push(arg.as_ref());
            cur = fun;
        }
        args.reverse();
        (cur, args)
    }

    /// Type of a well-typed term, without re-checking it.
    pub fn ty(&self) -> SemType {
        match self {
            LamVar { ty, .. } | DiscRef { ty, .. } | Const { ty, .. } | Mu { ty, .. } => ty.clone(),
            Lam { ty, body, .. } => SemType::arrow(ty.clone(), body.ty()),
            App { fun, .. } => match fun.ty() {
                SemType::Arrow(_, b) => *b,
                other => other,
            },
            Name { .. } | Drs { .. } | And { .. } | Fusion { .. } | Implies { .. } | Eq { .. } => SemType::T,
        }
    }

    /// Full type check of a term; free λ-variables are typed by their
    /// annotation, free μ-variables are rejected.
    pub fn typecheck(&self) -> Result<SemType, SemError> {
        check(self, &mut BTreeMap::new(), &mut BTreeMap::new(), &mut Vec::new())
    }

    pub fn free_lam_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        free_lam(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn free_mu_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        free_mu(self, &mut Vec::new(), &mut out);
        out
    }

    /// Discourse referents not bound by a box inside the term.
    pub fn free_refs(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        free_ref(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every identifier in the term.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |t| match t {
            LamVar { name, .. } | DiscRef { name, .. } | Const { name, .. } => {
                out.insert(name.clone());
            }
            Lam { var, .. } | Mu { var, .. } | Name { var, .. } => {
                out.insert(var.clone());
            }
            Drs { refs, .. } => out.extend(refs.iter().map(|r| r.0.clone())),
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn walk(&self, f: &mut dyn FnMut(&LmuTerm)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    pub fn any(&self, pred: &dyn Fn(&LmuTerm) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any(pred))
    }

    pub fn has_mu(&self) -> bool {
        self.any(&|t| matches!(t, Mu { .. } | Name { .. }))
    }

    pub fn has_lambda(&self) -> bool {
        self.any(&|t| matches!(t, Lam { .. } | LamVar { .. }))
    }

    pub fn has_fusion(&self) -> bool {
        self.any(&|t| matches!(t, Fusion { .. }))
    }

    /// Capture-avoiding substitution of `s` for the λ-variable `x`.
    /// Boxes are not renamed: referents are bound dynamically.
    pub fn subst(&self, x: &str, s: &LmuTerm) -> LmuTerm {
        let fl = s.free_lam_vars();
        let fm = s.free_mu_vars();
        subst(self, x, s, &fl, &fm)
    }

    /// Rewrites every free naming `α(Q)` into `rewrite(Q)`. Binders of the
    /// term that occur in `avoid` are renamed first.
    pub fn rewrite_names(&self, alpha: &str, avoid: &BTreeSet<String>, rewrite: &dyn Fn(LmuTerm) -> LmuTerm) -> LmuTerm {
        rewrite_names(&self.rename_bound(avoid), alpha, rewrite)
    }

    /// Renames λ and μ binders whose names occur in `avoid`.
    pub fn rename_bound(&self, avoid: &BTreeSet<String>) -> LmuTerm {
        match self {
            Lam { var, ty, body } if avoid.contains(var) => {
                let mut used = avoid.clone();
                used.extend(body.names());
                let v2 = fresh_name(var, &used);
                let body = body.subst(var, &LmuTerm::var(&v2, ty.clone()));
                Lam { var: v2, ty: ty.clone(), body: Box::new(body.rename_bound(avoid)) }
            }
            Mu { var, ty, body } if avoid.contains(var) => {
                let mut used = avoid.clone();
                used.extend(body.names());
                let v2 = fresh_name(var, &used);
                let renamed = rewrite_names(body, var, &|q| LmuTerm::name(&v2, q));
                Mu { var: v2, ty: ty.clone(), body: Box::new(renamed.rename_bound(avoid)) }
            }
            other => {
                let kids = other.children().into_iter().map(|c| c.rename_bound(avoid)).collect();
                other.with_children(kids)
            }
        }
    }

    /// α-equivalence representative: binders renamed `_0, _1, ...` in
    /// pre-order. Referents keep their names.
    pub fn canonical(&self) -> LmuTerm {
        let mut counter = 0;
        canon(self, &mut Vec::new(), &mut Vec::new(), &mut counter)
    }

    pub fn alpha_eq(&self, other: &LmuTerm) -> bool {
        self.canonical() == other.canonical()
    }

    /// The printed canonical form, used as a set key.
    pub fn alpha_key(&self) -> String {
        self.canonical().to_string()
    }

    /// β-normal form (leftmost-outermost).
    pub fn beta_normal(&self) -> LmuTerm {
        let mut t = self.clone();
        while let Some(next) = beta_once(&t) {
            t = next;
        }
        t
    }
}

/// `base'`, `base''`, ... avoiding `used`.
pub fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    let mut n = format!("{base}'");
    while used.contains(&n) {
        n.push('\'');
    }
    n
}

fn ill(path: &[&'static str], msg: String) -> SemError {
    SemError::IllTyped { path: if path.is_empty() { "root".into() } else { path.join(".") }, message: msg }
}

fn check(
    t: &LmuTerm,
    lam: &mut BTreeMap<String, Vec<SemType>>,
    mu: &mut BTreeMap<String, Vec<SemType>>,
    path: &mut Vec<&'static str>,
) -> Result<SemType, SemError> {
    let sub = |t: &LmuTerm,
                   step: &'static str,
                   lam: &mut BTreeMap<String, Vec<SemType>>,
                   mu: &mut BTreeMap<String, Vec<SemType>>,
                   path: &mut Vec<&'static str>| {
        path.push(step);
        let r = check(t, lam, mu, path);
        path.pop();
        r
    };
    let expect_t = |got: SemType, what: &str, path: &[&'static str]| {
        if got == SemType::T {
            Ok(())
        } else {
            Err(ill(path, format!("{what} has type {got}, expected t")))
        }
    };
    match t {
        LamVar { name, ty } => {
            if let Some(bound) = lam.get(name).and_then(|v| v.last()) {
                if bound != ty {
                    return Err(ill(path, format!("`{name}` is bound at {bound} but used at {ty}")));
                }
            }
            Ok(ty.clone())
        }
        DiscRef { name, ty } => {
            if !matches!(ty, SemType::E | SemType::Ev) {
                return Err(ill(path, format!("referent `{name}` has type {ty}")));
            }
            Ok(ty.clone())
        }
        Const { ty, .. } => Ok(ty.clone()),
        Lam { var, ty, body } => {
            lam.entry(var.clone()).or_default().push(ty.clone());
            let b = sub(body, "body", lam, mu, path);
            lam.get_mut(var).unwrap().pop();
            Ok(SemType::arrow(ty.clone(), b?))
        }
        Mu { var, ty, body } => {
            mu.entry(var.clone()).or_default().push(ty.clone());
            let b = sub(body, "body", lam, mu, path);
            mu.get_mut(var).unwrap().pop();
            let b = b?;
            if b != SemType::T {
                return Err(ill(path, format!("μ binds a term of type {b}, not a named term")));
            }
            Ok(ty.clone())
        }
        Name { var, arg } => {
            let expected = mu
                .get(var)
                .and_then(|v| v.last())
                .cloned()
                .ok_or_else(|| ill(path, format!("unbound μ-variable `{var}`")))?;
            let a = sub(arg, "arg", lam, mu, path)?;
            if a != expected {
                return Err(ill(path, format!("`{var}` names a term of type {a}, expected {expected}")));
            }
            Ok(SemType::T)
        }
        App { fun, arg } => {
            let f = sub(fun, "fun", lam, mu, path)?;
            let a = sub(arg, "arg", lam, mu, path)?;
            match f {
                SemType::Arrow(x, y) if *x == a => Ok(*y),
                other => Err(ill(path, format!("cannot apply {other} to {a}"))),
            }
        }
        Drs { refs, body } => {
            for (r, ty) in refs {
                if !matches!(ty, SemType::E | SemType::Ev) {
                    return Err(ill(path, format!("referent `{r}` has type {ty}")));
                }
            }
            let b = sub(body, "body", lam, mu, path)?;
            expect_t(b, "box body", path)?;
            Ok(SemType::T)
        }
        And { left, right } | Fusion { left, right } | Implies { left, right } => {
            let l = sub(left, "left", lam, mu, path)?;
            expect_t(l, "left operand", path)?;
            let r = sub(right, "right", lam, mu, path)?;
            expect_t(r, "right operand", path)?;
            Ok(SemType::T)
        }
        Eq { left, right } => {
            for (side, step) in [(left, "left"), (right, "right")] {
                let s = sub(side, step, lam, mu, path)?;
                if s != SemType::E {
                    return Err(ill(path, format!("equality operand has type {s}")));
                }
            }
            Ok(SemType::T)
        }
    }
}

fn free_lam(t: &LmuTerm, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        LamVar { name, .. } => {
            if !bound.contains(name) {
                out.insert(name.clone());
            }
        }
        Lam { var, body, .. } => {
            bound.push(var.clone());
            free_lam(body, bound, out);
            bound.pop();
        }
        other => {
            for c in other.children() {
                free_lam(c, bound, out);
            }
        }
    }
}

fn free_mu(t: &LmuTerm, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        Name { var, arg } => {
            if !bound.contains(var) {
                out.insert(var.clone());
            }
            free_mu(arg, bound, out);
        }
        Mu { var, body, .. } => {
            bound.push(var.clone());
            free_mu(body, bound, out);
            bound.pop();
        }
        other => {
            for c in other.children() {
                free_mu(c, bound, out);
            }
        }
    }
}

fn free_ref(t: &LmuTerm, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        DiscRef { name, .. } => {
            if !bound.contains(name) {
                out.insert(name.clone());
            }
        }
        Drs { refs, body } => {
            let n = bound.len();
            bound.extend(refs.iter().map(|r| r.0.clone()));
            free_ref(body, bound, out);
            bound.truncate(n);
        }
        Implies { left, right } => {
            // referents of the antecedent's box are visible in the consequent
            free_ref(left, bound, out);
            let n = bound.len();
            if let Drs { refs, .. } = left.as_ref() {
                bound.extend(refs.iter().map(|r| r.0.clone()));
            }
            free_ref(right, bound, out);
            bound.truncate(n);
        }
        other => {
            for c in other.children() {
                free_ref(c, bound, out);
            }
        }
    }
}

fn subst(t: &LmuTerm, x: &str, s: &LmuTerm, fl: &BTreeSet<String>, fm: &BTreeSet<String>) -> LmuTerm {
    match t {
        LamVar { name, .. } if name == x => s.clone(),
        Lam { var, .. } if var == x => t.clone(),
        Lam { var, ty, body } => {
            if fl.contains(var) && body.free_lam_vars().contains(x) {
                let mut used = fl.clone();
                used.extend(body.names());
                used.insert(x.to_string());
                let v2 = fresh_name(var, &used);
                let body = body.subst(var, &LmuTerm::var(&v2, ty.clone()));
                Lam { var: v2, ty: ty.clone(), body: Box::new(subst(&body, x, s, fl, fm)) }
            } else {
                Lam { var: var.clone(), ty: ty.clone(), body: Box::new(subst(body, x, s, fl, fm)) }
            }
        }
        Mu { var, ty, body } if fm.contains(var) && body.free_lam_vars().contains(x) => {
            let mut used = fm.clone();
            used.extend(body.names());
            let v2 = fresh_name(var, &used);
            let body = rewrite_names(body, var, &|q| LmuTerm::name(&v2, q));
            Mu { var: v2, ty: ty.clone(), body: Box::new(subst(&body, x, s, fl, fm)) }
        }
        other => {
            let kids = other.children().into_iter().map(|c| subst(c, x, s, fl, fm)).collect();
            other.with_children(kids)
        }
    }
}

fn rewrite_names(t: &LmuTerm, alpha: &str, rewrite: &dyn Fn(LmuTerm) -> LmuTerm) -> LmuTerm {
    match t {
        Name { var, arg } if var == alpha => rewrite(rewrite_names(arg, alpha, rewrite)),
        Mu { var, .. } if var == alpha => t.clone(),
        other => {
            let kids = other.children().into_iter().map(|c| rewrite_names(c, alpha, rewrite)).collect();
            other.with_children(kids)
        }
    }
}

fn canon(t: &LmuTerm, lam: &mut Vec<(String, String)>, mu: &mut Vec<(String, String)>, n: &mut usize) -> LmuTerm {
    let look = |env: &Vec<(String, String)>, v: &str| {
        env.iter().rev().find(|(a, _)| a == v).map(|(_, b)| b.clone()).unwrap_or_else(|| v.to_string())
    };
    match t {
        LamVar { name, ty } => LamVar { name: look(lam, name), ty: ty.clone() },
        Name { var, arg } => Name { var: look(mu, var), arg: Box::new(canon(arg, lam, mu, n)) },
        Lam { var, ty, body } => {
            let fresh = format!("_{n}");
            *n += 1;
            lam.push((var.clone(), fresh.clone()));
            let b = canon(body, lam, mu, n);
            lam.pop();
            Lam { var: fresh, ty: ty.clone(), body: Box::new(b) }
        }
        Mu { var, ty, body } => {
            let fresh = format!("_{n}");
            *n += 1;
            mu.push((var.clone(), fresh.clone()));
            let b = canon(body, lam, mu, n);
            mu.pop();
            Mu { var: fresh, ty: ty.clone(), body: Box::new(b) }
        }
        other => {
            let kids = other.children().into_iter().map(|c| canon(c, lam, mu, n)).collect();
            other.with_children(kids)
        }
    }
}

fn beta_once(t: &LmuTerm) -> Option<LmuTerm> {
    if let App { fun, arg } = t {
        if let Lam { var, body, .. } = fun.as_ref() {
            return Some(body.subst(var, arg));
        }
    }
    let kids = t.children();
    for (i, k) in kids.iter().enumerate() {
        if let Some(r) = beta_once(k) {
            let mut new: Vec<LmuTerm> = kids.iter().map(|c| (*c).clone()).collect();
            new[i] = r;
            return Some(t.with_children(new));
        }
    }
    None
}

// Printing. Precedence: 0 binders and `=>`, 1 `&`/`&&`, 2 `==`, 3 atoms.

fn is_atomic_arg(t: &LmuTerm) -> bool {
    matches!(t, LamVar { .. } | DiscRef { .. } | Const { .. })
}

fn write_prec(t: &LmuTerm, ctx: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let paren = |own: u8| ctx > own;
    match t {
        LamVar { name, .. } | DiscRef { name, .. } | Const { name, .. } => f.write_str(name),
        Lam { var, body, .. } => {
            if paren(0) {
                f.write_str("(")?;
            }
            write!(f, "\\{var}. ")?;
            write_prec(body, 0, f)?;
            if paren(0) {
                f.write_str(")")?;
            }
            Ok(())
        }
        Mu { var, body, .. } => {
            if paren(0) {
                f.write_str("(")?;
            }
            write!(f, "mu {var}. ")?;
            write_prec(body, 0, f)?;
            if paren(0) {
                f.write_str(")")?;
            }
            Ok(())
        }
        Name { var, arg } => {
            write!(f, "({var} ")?;
            write_prec(arg, 3, f)?;
            f.write_str(")")
        }
        App { fun, arg } => {
            let (head, args) = t.spine();
            if matches!(head, Const { .. }) {
                write_prec(head, 3, f)?;
                f.write_str("(")?;
                let sep = if args.iter().all(|a| is_atomic_arg(a)) { "," } else { ", " };
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    write_prec(a, 0, f)?;
                }
                return f.write_str(")");
            }
            f.write_str("(")?;
            write_prec(fun, 3, f)?;
            f.write_str(" ")?;
            write_prec(arg, 3, f)?;
            f.write_str(")")
        }
        Drs { refs, body } => {
            f.write_str("[")?;
            let names: Vec<&str> = refs.iter().map(|r| r.0.as_str()).collect();
            f.write_str(&names.join(" "))?;
            if !names.is_empty() {
                f.write_str(" ")?;
            }
            f.write_str("| ")?;
            write_prec(body, 0, f)?;
            f.write_str("]")
        }
        And { left, right } | Fusion { left, right } => {
            let op = if matches!(t, And { .. }) { "&" } else { "&&" };
            if paren(1) {
                f.write_str("(")?;
            }
            write_prec(left, 1, f)?;
            write!(f, " {op} ")?;
            write_prec(right, 2, f)?;
            if paren(1) {
                f.write_str(")")?;
            }
            Ok(())
        }
        Implies { left, right } => {
            if paren(0) {
                f.write_str("(")?;
            }
            write_prec(left, 1, f)?;
            f.write_str(" => ")?;
            write_prec(right, 0, f)?;
            if paren(0) {
                f.write_str(")")?;
            }
            Ok(())
        }
        Eq { left, right } => {
            if paren(2) {
                f.write_str("(")?;
            }
            write_prec(left, 3, f)?;
            f.write_str(" == ")?;
            write_prec(right, 3, f)?;
            if paren(2) {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for LmuTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(self, 0, f)
    }
}
