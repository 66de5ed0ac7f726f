//! Translations between feature sequences and categorial formulae, and a
//! bounded check that both engines generate the same strings.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cmg::{cmg_generate, key_phon, CFormula, CmgLexicon, FeatureSets};
use crate::mg::{matches_entry_grammar, mg_generate, Feature, FeatureKind, FeatureSeq, MgLexicon};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("`{0}` does not match the lexical entry grammar")]
    RegexViolation(String),
    #[error("feature `{0}` is neither a base category nor a movement feature")]
    UnclassifiedFeature(String),
    #[error("`{0}` is outside the lexical formula grammar")]
    GrammarViolation(String),
}

/// Which names left of `\` are selected categories (`p1`) and which are
/// licensors (`p2`).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LicensorPartition {
    pub p1: BTreeSet<String>,
    pub p2: BTreeSet<String>,
}

impl LicensorPartition {
    pub fn new<I, J, S, T>(p1: I, p2: J) -> Self
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        LicensorPartition {
            p1: p1.into_iter().map(Into::into).collect(),
            p2: p2.into_iter().map(Into::into).collect(),
        }
    }

    pub fn from_features(sets: &FeatureSets) -> Self {
        LicensorPartition { p1: sets.base.clone(), p2: sets.movement.clone() }
    }

    /// Reads the partition off an entry's own usage.
    pub fn read_off(entry: &[Feature]) -> Self {
        let mut part = LicensorPartition::default();
        for f in entry {
            match f.kind {
                FeatureKind::Licensor | FeatureKind::Licensee => {
                    part.p2.insert(f.name.clone());
                }
                _ => {
                    part.p1.insert(f.name.clone());
                }
            }
        }
        part
    }
}

/// The α translation of a lexical feature sequence.
pub fn to_categorial(entry: &[Feature]) -> Result<CFormula, TranslateError> {
    let text = || entry.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(" ");
    if !matches_entry_grammar(entry) {
        return Err(TranslateError::RegexViolation(text()));
    }
    let bi = entry.iter().position(|f| f.kind == FeatureKind::Base).expect("grammar has a base");
    let licensees: Vec<String> = entry[bi + 1..].iter().map(|f| f.name.clone()).collect();
    let c = CFormula::from_chain(&licensees, &entry[bi].name);
    let beta = |prefix: &[Feature]| {
        prefix.iter().rev().fold(c.clone(), |acc, f| match f.kind {
            FeatureKind::HeadSelector => CFormula::under_hdr(f.name.clone(), acc),
            _ => CFormula::under(f.name.clone(), acc),
        })
    };
    Ok(match entry.first() {
        Some(f) if f.kind == FeatureKind::Selector => CFormula::over(beta(&entry[1..bi]), f.name.clone()),
        Some(f) if f.kind == FeatureKind::HeadSelector => CFormula::over_hdr(beta(&entry[1..bi]), f.name.clone()),
        _ => c,
    })
}

/// The α′ translation back to a feature sequence (with empty phonology).
pub fn to_stabler(f: &CFormula, part: &LicensorPartition) -> Result<FeatureSeq, TranslateError> {
    if !f.is_lexical_shape() {
        return Err(TranslateError::GrammarViolation(f.to_string()));
    }
    let mut out = Vec::new();
    let mut cur = match f {
        CFormula::Over(x, b) => {
            out.push(Feature::selector(b.clone()));
            x.as_ref()
        }
        CFormula::OverHdr(x, b) => {
            out.push(Feature::head_selector(b.clone()));
            x.as_ref()
        }
        other => other,
    };
    loop {
        match cur {
            CFormula::Under(n, x) => {
                if part.p1.contains(n) {
                    out.push(Feature::selector(n.clone()));
                } else if part.p2.contains(n) {
                    out.push(Feature::licensor(n.clone()));
                } else {
                    return Err(TranslateError::UnclassifiedFeature(n.clone()));
                }
                cur = x;
            }
            CFormula::UnderHdr(n, x) => {
                out.push(Feature::head_selector(n.clone()));
                cur = x;
            }
            c => {
                let (ls, b) = c.tensor_chain().ok_or_else(|| TranslateError::GrammarViolation(f.to_string()))?;
                out.push(Feature::base(b));
                out.extend(ls.into_iter().map(Feature::licensee));
                break;
            }
        }
    }
    if !matches_entry_grammar(&out) {
        return Err(TranslateError::GrammarViolation(f.to_string()));
    }
    Ok(FeatureSeq::new(out, vec![]))
}

/// Translates a whole lexicon with α.
pub fn mg_to_cmg(lex: &MgLexicon, features: &FeatureSets) -> Result<CmgLexicon, TranslateError> {
    let entries = lex
        .entries
        .iter()
        .map(|(k, s)| Ok((k.clone(), to_categorial(&s.features)?)))
        .collect::<Result<_, TranslateError>>()?;
    Ok(CmgLexicon { entries, features: features.clone(), start: lex.start.clone() })
}

/// Translates a whole lexicon with α′, classifying names by the declared
/// feature sets.
pub fn cmg_to_mg(lex: &CmgLexicon) -> Result<MgLexicon, TranslateError> {
    let part = LicensorPartition::from_features(&lex.features);
    let entries = lex
        .entries
        .iter()
        .map(|(k, f)| {
            let mut seq = to_stabler(f, &part)?;
            seq.phon = key_phon(k);
            Ok((k.clone(), seq))
        })
        .collect::<Result<_, TranslateError>>()?;
    Ok(MgLexicon { entries, start: lex.start.clone() })
}

/// Strings generated by the two engines up to a length bound.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub max_words: usize,
    pub common: BTreeSet<Vec<String>>,
    pub mg_only: BTreeSet<Vec<String>>,
    pub cmg_only: BTreeSet<Vec<String>>,
}

impl EquivalenceReport {
    pub fn is_equivalent(&self) -> bool {
        self.mg_only.is_empty() && self.cmg_only.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "strings of at most {} words: {} common, {} mg only, {} cmg only\n",
            self.max_words,
            self.common.len(),
            self.mg_only.len(),
            self.cmg_only.len()
        );
        for (tag, set) in [("- mg only:", &self.mg_only), ("+ cmg only:", &self.cmg_only)] {
            for w in set {
                s.push_str(&format!("{tag} {}\n", if w.is_empty() { "ε".to_string() } else { w.join(" ") }));
            }
        }
        s
    }
}

/// Compares the string sets of both engines on strings of at most
/// `max_words` words.
pub fn check_equivalence(mg: &MgLexicon, cmg: &CmgLexicon, max_words: usize, step_bound: usize) -> EquivalenceReport {
    let a: BTreeSet<Vec<String>> = mg_generate(mg, max_words, step_bound).iter().map(|d| d.sentence()).collect();
    let b: BTreeSet<Vec<String>> = cmg_generate(cmg, max_words, step_bound)
        .iter()
        .map(|d| d.conclusion.label.words())
        .collect();
    EquivalenceReport {
        max_words,
        common: a.intersection(&b).cloned().collect(),
        mg_only: a.difference(&b).cloned().collect(),
        cmg_only: b.difference(&a).cloned().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmg::parse_cformula;
    use crate::mg::{parse_feature_seq, parse_features};

    fn feats(s: &str) -> Vec<Feature> {
        parse_features(s).unwrap()
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(to_categorial(&feats("=n d -k")).unwrap().to_string(), "(k * d) / n");
        assert_eq!(to_categorial(&feats("d")).unwrap(), CFormula::base("d"));
        assert_eq!(to_categorial(&feats("V^ +k =d v")).unwrap().to_string(), "(k \\ (d \\ v)) /^ V");
        assert_eq!(to_categorial(&feats("d -k -wh")).unwrap().to_string(), "wh * (k * d)");
        assert_eq!(to_categorial(&feats("=d V^ t")).unwrap().to_string(), "(V \\^ t) / d");
    }

    #[test]
    fn alpha_rejects_non_entries() {
        let bad = vec![Feature::licensor("k"), Feature::base("c")];
        assert!(matches!(to_categorial(&bad), Err(TranslateError::RegexViolation(_))));
    }

    #[test]
    fn alpha_prime_examples() {
        let part = LicensorPartition::new(["d", "n", "v", "V"], ["k"]);
        let f = parse_cformula("(k * d) / n").unwrap();
        assert_eq!(to_stabler(&f, &part).unwrap().features_string(), "=n d -k");
        let f = parse_cformula("(k \\ (d \\ v)) /^ V").unwrap();
        assert_eq!(to_stabler(&f, &part).unwrap().features_string(), "V^ +k =d v");
        let f = parse_cformula("(x \\ y) / z").unwrap();
        assert_eq!(to_stabler(&f, &part), Err(TranslateError::UnclassifiedFeature("x".into())));
    }

    #[test]
    fn single_entry_lexicon() {
        let mg = MgLexicon::new(vec![("w".into(), parse_feature_seq("c :: w").unwrap())]);
        let cmg = mg_to_cmg(&mg, &FeatureSets::new(["c"], Vec::<String>::new())).unwrap();
        let r = check_equivalence(&mg, &cmg, 3, 100);
        assert!(r.is_equivalent());
        assert_eq!(r.common.into_iter().collect::<Vec<_>>(), vec![vec!["w".to_string()]]);
    }
}
