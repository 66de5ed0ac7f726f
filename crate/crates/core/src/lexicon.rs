//! The lexicon file format: headers, then `[mg]`, `[cmg]` and `[semantics]`
//! sections keyed by word.
//!
//! ```text
//! #base: c t v V d n
//! #move: k
//! #pred: child pizz : e -> t
//! [cmg]
//! the :: (k * d) / n
//! [semantics]
//! the :: \Q. mu delta. [| [d | (Q d)] => [| (delta d)]] :: dvar=d
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::cmg::{parse_cformula, CFormula, CmgLexicon, FeatureSets};
use crate::mg::{parse_features, FeatureKind, FeatureSeq, MgLexicon};
use crate::semantics::{h_type, parse_term, HMap, LmuTerm, SemEntry, SemLexicon, SemType, Signature};
use crate::translate::{cmg_to_mg, mg_to_cmg};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    At { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn at(line: usize, message: impl ToString) -> LexiconError {
    LexiconError::At { line, message: message.to_string() }
}

/// A loaded lexicon. Sections absent from the file are `None`; use
/// [`Grammar::mg`] and [`Grammar::cmg`] to get them derived by translation.
#[derive(Debug, Clone, Default)]
pub struct Grammar {
    pub features: FeatureSets,
    pub start: String,
    pub signature: Signature,
    pub h: HMap,
    pub mg_rows: Option<MgLexicon>,
    pub cmg_rows: Option<CmgLexicon>,
    pub sem: Option<SemLexicon>,
}

#[derive(PartialEq)]
enum Section {
    None,
    Mg,
    Cmg,
    Semantics,
}

fn split_row(line: &str) -> Option<(&str, &str)> {
    let (k, rest) = line.split_once("::")?;
    Some((k.trim(), rest.trim()))
}

fn is_key(k: &str) -> bool {
    !k.is_empty() && !k.chars().any(char::is_whitespace)
}

impl Grammar {
    pub fn load(path: impl AsRef<Path>) -> Result<Grammar, LexiconError> {
        let p = path.as_ref();
        let text = std::fs::read_to_string(p).map_err(|e| LexiconError::Io { path: p.display().to_string(), source: e })?;
        Grammar::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Grammar, LexiconError> {
        let mut base: Option<Vec<String>> = None;
        let mut movement: Option<Vec<String>> = None;
        let mut start = "c".to_string();
        let mut sig = Signature::new();
        let mut h_overrides: Vec<(String, SemType)> = Vec::new();
        let mut mg: Option<Vec<(String, FeatureSeq)>> = None;
        let mut cmg: Option<Vec<(String, CFormula)>> = None;
        let mut sem_rows: Vec<(usize, String, String, Option<String>)> = Vec::new();
        let mut mg_lines: Vec<usize> = Vec::new();
        let mut section = Section::None;

        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with("//") {
                continue;
            }
            if let Some(h) = line.strip_prefix('#') {
                let Some((name, value)) = h.split_once(':') else { continue };
                let value = value.trim();
                match name.trim() {
                    "base" => base = Some(value.split_whitespace().map(String::from).collect()),
                    "move" => movement = Some(value.split_whitespace().map(String::from).collect()),
                    "start" => start = value.to_string(),
                    "pred" => {
                        let (names, ty) = value.split_once(':').ok_or_else(|| at(n, "expected `#pred: names : type`"))?;
                        let ty = SemType::parse(ty).map_err(|e| at(n, e))?;
                        for p in names.split_whitespace() {
                            sig.declare(p, ty.clone());
                        }
                    }
                    "H" => {
                        let (name, ty) = value.split_once('=').ok_or_else(|| at(n, "expected `#H: name = type`"))?;
                        h_overrides.push((name.trim().to_string(), SemType::parse(ty).map_err(|e| at(n, e))?));
                    }
                    // any other `#` line is a comment
                    _ => {}
                }
                continue;
            }
            if line.starts_with('[') && line.ends_with(']') {
                section = match &line[1..line.len() - 1] {
                    "mg" => {
                        mg.get_or_insert_with(Vec::new);
                        Section::Mg
                    }
                    "cmg" => {
                        cmg.get_or_insert_with(Vec::new);
                        Section::Cmg
                    }
                    "semantics" => Section::Semantics,
                    other => return Err(at(n, format!("unknown section `[{other}]`"))),
                };
                continue;
            }
            let (key, rest) = split_row(line).ok_or_else(|| at(n, "expected `word :: ...`"))?;
            if !is_key(key) {
                return Err(at(n, format!("bad word `{key}`")));
            }
            match section {
                Section::None => return Err(at(n, "row outside of a section")),
                Section::Mg => {
                    let feats = parse_features(rest).map_err(|e| at(n, e))?;
                    let phon = crate::cmg::key_phon(key);
                    mg.as_mut().unwrap().push((key.to_string(), FeatureSeq::new(feats, phon)));
                    mg_lines.push(n);
                }
                Section::Cmg => {
                    let f = parse_cformula(rest).map_err(|e| at(n, e))?;
                    cmg.as_mut().unwrap().push((key.to_string(), f));
                }
                Section::Semantics => {
                    let (term, dvar) = match rest.rsplit_once("::") {
                        Some((t, d)) => {
                            let d = d.trim();
                            let v = d.strip_prefix("dvar=").ok_or_else(|| at(n, format!("expected `dvar=name`, found `{d}`")))?;
                            (t.trim().to_string(), Some(v.trim().to_string()))
                        }
                        None => (rest.to_string(), None),
                    };
                    sem_rows.push((n, key.to_string(), term, dvar));
                }
            }
        }

        let features = match (base, movement) {
            (Some(b), Some(m)) => FeatureSets::new(b, m),
            (b, m) => {
                let (ib, im) = infer_features(mg.as_deref(), cmg.as_deref());
                FeatureSets::new(b.unwrap_or(ib), m.unwrap_or(im))
            }
        };
        if let Some(both) = features.base.intersection(&features.movement).next() {
            return Err(LexiconError::Invalid(format!("feature `{both}` is both a base and a movement feature")));
        }
        for ((_, seq), n) in mg.iter().flatten().zip(&mg_lines) {
            for f in &seq.features {
                let ok = match f.kind {
                    FeatureKind::Licensor | FeatureKind::Licensee => features.is_movement(&f.name),
                    _ => features.is_base(&f.name),
                };
                if !ok {
                    return Err(at(*n, format!("feature `{f}` does not fit the declared base and movement features")));
                }
            }
        }
        let mut h = HMap::for_features(&features);
        for (name, ty) in h_overrides {
            h.set(&name, ty);
        }
        let mut g = Grammar {
            features: features.clone(),
            start: start.clone(),
            signature: sig.clone(),
            h: h.clone(),
            mg_rows: mg.map(|entries| MgLexicon { entries, start: start.clone() }),
            cmg_rows: cmg.map(|entries| CmgLexicon { entries, features: features.clone(), start: start.clone() }),
            sem: None,
        };
        if let Some(c) = &g.cmg_rows {
            for (k, f) in &c.entries {
                f.validate(&features).map_err(|e| LexiconError::Invalid(format!("`{k}`: {e}")))?;
            }
        }
        if !sem_rows.is_empty() {
            let cmg = g.cmg().map_err(LexiconError::Invalid)?;
            let mut entries = Vec::new();
            for (n, key, text, dvar) in sem_rows {
                let types: Vec<SemType> =
                    cmg.entries.iter().filter(|(k, _)| *k == key).filter_map(|(_, f)| h_type(f, &h).ok()).collect();
                if types.is_empty() {
                    return Err(at(n, format!("`{key}` has no categorial entry")));
                }
                let term = parse_typed(&text, &sig, &types).map_err(|e| at(n, e))?;
                let entry = SemEntry { term, dvar };
                let single = SemLexicon { entries: vec![(key.clone(), entry.clone())], signature: sig.clone(), h: h.clone() };
                single.check_coherence(&cmg).map_err(|e| at(n, e))?;
                entries.push((key, entry));
            }
            g.sem = Some(SemLexicon { entries, signature: sig, h });
        }
        Ok(g)
    }

    /// The categorial lexicon, translated with α when only `[mg]` is given.
    pub fn cmg(&self) -> Result<CmgLexicon, String> {
        match (&self.cmg_rows, &self.mg_rows) {
            (Some(c), _) => Ok(c.clone()),
            (None, Some(m)) => mg_to_cmg(m, &self.features).map_err(|e| e.to_string()),
            (None, None) => Ok(CmgLexicon { entries: vec![], features: self.features.clone(), start: self.start.clone() }),
        }
    }

    /// The minimalist lexicon, translated with α′ when only `[cmg]` is given.
    pub fn mg(&self) -> Result<MgLexicon, String> {
        match (&self.mg_rows, &self.cmg_rows) {
            (Some(m), _) => Ok(m.clone()),
            (None, Some(c)) => cmg_to_mg(c).map_err(|e| e.to_string()),
            (None, None) => Ok(MgLexicon { entries: vec![], start: self.start.clone() }),
        }
    }

    fn header(&self) -> String {
        let mut s = String::new();
        let join = |set: &BTreeSet<String>| set.iter().cloned().collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "#base: {}", join(&self.features.base));
        let _ = writeln!(s, "#move: {}", join(&self.features.movement));
        let _ = writeln!(s, "#start: {}", self.start);
        s
    }

    /// A lexicon file holding only the `[mg]` section.
    pub fn render_mg(&self) -> Result<String, String> {
        let m = self.mg()?;
        if m.entries.is_empty() {
            return Ok(String::new());
        }
        let mut s = self.header();
        s.push_str("[mg]\n");
        for (k, seq) in &m.entries {
            let _ = writeln!(s, "{k} :: {}", seq.features_string());
        }
        Ok(s)
    }

    /// A lexicon file holding only the `[cmg]` section.
    pub fn render_cmg(&self) -> Result<String, String> {
        let c = self.cmg()?;
        if c.entries.is_empty() {
            return Ok(String::new());
        }
        let mut s = self.header();
        s.push_str("[cmg]\n");
        for (k, f) in &c.entries {
            let _ = writeln!(s, "{k} :: {f}");
        }
        Ok(s)
    }
}

fn parse_typed(text: &str, sig: &Signature, types: &[SemType]) -> Result<LmuTerm, String> {
    let mut first_err = None;
    for ty in types {
        match parse_term(text, sig, Some(ty)) {
            Ok(t) => return Ok(t),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.map(|e| e.to_string()).unwrap_or_default())
}

/// Movement names are those used as licensees, licensors or tensor
/// left operands; every other name is a base category.
fn infer_features(mg: Option<&[(String, FeatureSeq)]>, cmg: Option<&[(String, CFormula)]>) -> (Vec<String>, Vec<String>) {
    let mut all = BTreeSet::new();
    let mut mv = BTreeSet::new();
    for (_, seq) in mg.unwrap_or_default() {
        for f in &seq.features {
            all.insert(f.name.clone());
            if matches!(f.kind, FeatureKind::Licensee | FeatureKind::Licensor) {
                mv.insert(f.name.clone());
            }
        }
    }
    for (_, f) in cmg.unwrap_or_default() {
        all.extend(f.names().into_iter().map(String::from));
        collect_tensor_names(f, &mut mv);
    }
    (all.difference(&mv).cloned().collect(), mv.into_iter().collect())
}

fn collect_tensor_names(f: &CFormula, out: &mut BTreeSet<String>) {
    match f {
        CFormula::Base(_) => {}
        CFormula::Tensor(m, c) => {
            out.insert(m.clone());
            collect_tensor_names(c, out);
        }
        CFormula::Over(a, _) | CFormula::OverHdr(a, _) | CFormula::Under(_, a) | CFormula::UnderHdr(_, a) => {
            collect_tensor_names(a, out)
        }
    }
}

/// A term file for the reducer: `#pred:` headers followed by one term,
/// possibly over several lines. Unbound identifiers are referents.
pub fn parse_term_file(text: &str) -> Result<LmuTerm, LexiconError> {
    let mut sig = Signature::new().with_free_refs();
    let mut body = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(h) = line.strip_prefix('#') {
            if let Some(("pred", value)) = h.split_once(':').map(|(a, b)| (a.trim(), b)) {
                let (names, ty) = value.split_once(':').ok_or_else(|| at(i + 1, "expected `#pred: names : type`"))?;
                let ty = SemType::parse(ty).map_err(|e| at(i + 1, e))?;
                for p in names.split_whitespace() {
                    sig.declare(p, ty.clone());
                }
            }
            continue;
        }
        if line.starts_with("//") {
            continue;
        }
        body.push_str(line);
        body.push(' ');
    }
    parse_term(&body, &sig, None).map_err(|e| LexiconError::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
#base: c d n
#move: k
#pred: dog : e -> t
#pred: bark : e -> t
[cmg]
the :: (k * d) / n
dog :: n
barks :: (k \\ c) / d
[semantics]
the :: \\Q. mu g. [x | (Q x) & (g x)] :: dvar=x
dog :: \\z. (dog z)
barks :: \\y. \\k. (bark y)
";

    #[test]
    fn loads_sections_and_derives_mg() {
        let g = Grammar::parse(SMALL).unwrap();
        assert_eq!(g.cmg().unwrap().entries.len(), 3);
        let mg = g.mg().unwrap();
        assert_eq!(mg.entries[0].1.features_string(), "=n d -k");
        assert_eq!(g.sem.as_ref().unwrap().entries.len(), 3);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = SMALL.replace("dog :: n", "dog :: n n");
        match Grammar::parse(&bad) {
            Err(LexiconError::At { line, .. }) => assert_eq!(line, 7),
            other => panic!("{other:?}"),
        }
        let bad = SMALL.replace("\\z. (dog z)", "\\z. \\w. (dog z)");
        assert!(matches!(Grammar::parse(&bad), Err(LexiconError::At { line: 11, .. })));
    }

    #[test]
    fn dvar_must_be_a_referent() {
        let bad = SMALL.replace("dvar=x", "dvar=q");
        assert!(matches!(Grammar::parse(&bad), Err(LexiconError::At { line: 10, .. })));
    }

    #[test]
    fn single_word_sentence_reads_as_its_term() {
        let g = Grammar::parse("#base: c\n#pred: rain : t\n[cmg]\nw :: c\n[semantics]\nw :: [x | rain]\n").unwrap();
        let a = crate::semantics::analyze(&g.cmg().unwrap(), g.sem.as_ref().unwrap(), &["w".to_string()], 100).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].readings.len(), 1);
        assert_eq!(a[0].readings[0].drs.to_string(), "[x | rain]");
    }

    #[test]
    fn unclassifiable_features_are_rejected() {
        let e = Grammar::parse("#base: c d\n#move: k\n[mg]\nfoo :: =d c\nbar :: d -x\n").unwrap_err();
        assert!(matches!(e, LexiconError::At { line: 5, .. }), "{e}");
        let e = Grammar::parse("#base: c k\n#move: k\n[mg]\nfoo :: c\n").unwrap_err();
        assert!(matches!(e, LexiconError::Invalid(_)), "{e}");
    }

    #[test]
    fn features_are_inferred() {
        let g = Grammar::parse("[mg]\nthe :: =n d -k\ndog :: n\n").unwrap();
        assert!(g.features.is_movement("k"));
        assert!(g.features.is_base("n"));
        assert_eq!(g.cmg().unwrap().entries[0].1.to_string(), "(k * d) / n");
    }

    #[test]
    fn rendering_round_trips() {
        let g = Grammar::parse(SMALL).unwrap();
        let again = Grammar::parse(&g.render_mg().unwrap()).unwrap();
        assert_eq!(again.cmg().unwrap().entries, g.cmg().unwrap().entries);
        assert_eq!(Grammar::parse("").unwrap().render_cmg().unwrap(), "");
    }
}
