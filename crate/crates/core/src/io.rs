//! Serializable documents for word lists, bases, vertex sets, orbit
//! certificates and peak-reduction results.

use serde::{Deserialize, Serialize};

use crate::bases::{Automorphism, SignedPermutation, WhiteheadTransform};
use crate::error::{Error, Result};
use crate::gersten::VertexSet;
use crate::length::WordSet;
use crate::peak::ReductionResult;
use crate::search::OrbitCertificate;
use crate::words::{CyclicWord, Entry, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WordKind {
    Straight,
    Cyclic,
}

/// A list entry, either tagged or written with the `~` prefix for cyclic words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WordDoc {
    Tagged { kind: WordKind, w: String },
    Text(String),
}

impl WordDoc {
    pub fn to_entry(&self, rank: usize) -> Result<Entry> {
        match self {
            WordDoc::Text(t) => Entry::parse(t, rank),
            WordDoc::Tagged { kind: WordKind::Straight, w } => Ok(Entry::Straight(Word::parse(w, rank)?)),
            WordDoc::Tagged { kind: WordKind::Cyclic, w } => {
                Ok(Entry::Cyclic(CyclicWord::parse(w.strip_prefix('~').unwrap_or(w), rank)?))
            }
        }
    }

    pub fn from_entry(e: &Entry) -> Self {
        match e {
            Entry::Straight(w) => WordDoc::Tagged { kind: WordKind::Straight, w: w.to_string() },
            Entry::Cyclic(c) => WordDoc::Tagged { kind: WordKind::Cyclic, w: c.word().to_string() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordSetDoc {
    pub rank: usize,
    pub words: Vec<WordDoc>,
}

impl WordSetDoc {
    pub fn to_word_set(&self) -> Result<WordSet> {
        if self.rank == 0 {
            return Err(Error::UnsupportedRank(0));
        }
        let entries = self.words.iter().map(|d| d.to_entry(self.rank)).collect::<Result<_>>()?;
        WordSet::new(self.rank, entries)
    }

    pub fn from_word_set(s: &WordSet) -> Self {
        WordSetDoc { rank: s.rank, words: s.entries.iter().map(WordDoc::from_entry).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismDoc {
    pub rank: usize,
    pub images: Vec<String>,
}

impl AutomorphismDoc {
    /// Parses the images, recomputes the inverse and rejects non-bases.
    pub fn to_automorphism(&self) -> Result<Automorphism> {
        if self.rank == 0 {
            return Err(Error::UnsupportedRank(0));
        }
        if self.images.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: self.images.len() });
        }
        let images = self.images.iter().map(|t| Word::parse(t, self.rank)).collect::<Result<_>>()?;
        Automorphism::from_images(images)
    }

    pub fn from_automorphism(a: &Automorphism) -> Self {
        AutomorphismDoc { rank: a.rank(), images: words(a.images()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSetDoc {
    pub vertices: Vec<String>,
}

impl VertexSetDoc {
    pub fn from_vertex_set(v: &VertexSet) -> Self {
        VertexSetDoc { vertices: v.iter().map(Word::to_string).collect() }
    }

    pub fn to_vertex_set(&self, rank: usize) -> Result<VertexSet> {
        let tokens: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        VertexSet::parse(&tokens, rank)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformDoc {
    pub multiplier: String,
    pub images: Vec<String>,
}

impl TransformDoc {
    pub fn from_transform(t: &WhiteheadTransform) -> Self {
        TransformDoc { multiplier: t.multiplier.to_string(), images: words(&t.images()) }
    }

    pub fn to_transform(&self, rank: usize) -> Result<WhiteheadTransform> {
        let m = parse_letter(&self.multiplier, rank)?;
        let images: Vec<Word> = self.images.iter().map(|t| Word::parse(t, rank)).collect::<Result<_>>()?;
        if images.len() != rank {
            return Err(Error::RankMismatch { expected: rank, found: images.len() });
        }
        WhiteheadTransform::from_images(m, &images)
            .ok_or_else(|| Error::NotABasis(format!("not a Whitehead transform: {:?}", self.images)))
    }
}

/// An orbit certificate: transforms applied in order, then the permutation;
/// `images` is the composed automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub transforms: Vec<TransformDoc>,
    pub permutation: Vec<String>,
    pub images: Vec<String>,
}

impl CertificateDoc {
    pub fn from_certificate(c: &OrbitCertificate) -> Self {
        CertificateDoc {
            transforms: c.transforms.iter().map(TransformDoc::from_transform).collect(),
            permutation: permutation_doc(&c.final_permutation),
            images: words(c.composed.images()),
        }
    }

    pub fn to_certificate(&self, rank: usize) -> Result<OrbitCertificate> {
        let transforms = self.transforms.iter().map(|t| t.to_transform(rank)).collect::<Result<_>>()?;
        let mapping = self.permutation.iter().map(|t| parse_letter(t, rank)).collect::<Result<Vec<_>>>()?;
        let final_permutation = SignedPermutation { mapping };
        let images = self.images.iter().map(|t| Word::parse(t, rank)).collect::<Result<_>>()?;
        Ok(OrbitCertificate { transforms, final_permutation, composed: Automorphism::from_images(images)? })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ReductionDoc {
    Step {
        y_dag: String,
        #[serde(rename = "Yprime")]
        y_prime: Vec<String>,
        #[serde(rename = "Vprime")]
        v_prime: Vec<String>,
        case: u8,
    },
    Equal {
        perm: Vec<String>,
    },
}

impl ReductionDoc {
    pub fn from_result(r: &ReductionResult) -> Self {
        match r {
            ReductionResult::Equal(pi) => ReductionDoc::Equal { perm: permutation_doc(pi) },
            ReductionResult::Step(s) => ReductionDoc::Step {
                y_dag: s.y_dag.to_string(),
                y_prime: words(s.y_prime.images()),
                v_prime: VertexSetDoc::from_vertex_set(&s.v_prime).vertices,
                case: s.case,
            },
        }
    }
}

fn words(ws: &[Word]) -> Vec<String> {
    ws.iter().map(Word::to_string).collect()
}

fn permutation_doc(p: &SignedPermutation) -> Vec<String> {
    p.mapping.iter().map(Letter::to_string).collect()
}

fn parse_letter(text: &str, rank: usize) -> Result<Letter> {
    let w = Word::parse(text, rank)?;
    match w.letters() {
        [l] => Ok(*l),
        _ => Err(Error::MalformedWord(format!("expected one letter, got {text:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{orbit_equivalent, SearchLimits};

    #[test]
    fn word_set_documents() {
        let doc: WordSetDoc =
            serde_json::from_str(r#"{"rank":2,"words":[{"kind":"cyclic","w":"abAB"},"abb","~ba"]}"#).unwrap();
        let s = doc.to_word_set().unwrap();
        assert_eq!(s, WordSet::parse(2, &["~abAB", "abb", "~ab"]).unwrap());
        let back = serde_json::to_string(&WordSetDoc::from_word_set(&s)).unwrap();
        assert_eq!(
            back,
            r#"{"rank":2,"words":[{"kind":"cyclic","w":"abAB"},{"kind":"straight","w":"abb"},{"kind":"cyclic","w":"ab"}]}"#
        );
        let bad: WordSetDoc = serde_json::from_str(r#"{"rank":2,"words":["ab9"]}"#).unwrap();
        assert!(bad.to_word_set().is_err());
        let high: WordSetDoc = serde_json::from_str(r#"{"rank":2,"words":["abc"]}"#).unwrap();
        assert!(matches!(high.to_word_set(), Err(Error::InvalidLetter { .. })));
    }

    #[test]
    fn automorphism_documents() {
        let doc: AutomorphismDoc = serde_json::from_str(r#"{"rank":2,"images":["ab","b"]}"#).unwrap();
        let a = doc.to_automorphism().unwrap();
        assert_eq!(a.backward()[0], Word::parse("aB", 2).unwrap());
        let bad: AutomorphismDoc = serde_json::from_str(r#"{"rank":2,"images":["aa","b"]}"#).unwrap();
        assert!(matches!(bad.to_automorphism(), Err(Error::NotABasis(_))));
        let short: AutomorphismDoc = serde_json::from_str(r#"{"rank":2,"images":["a"]}"#).unwrap();
        assert!(matches!(short.to_automorphism(), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn vertex_and_reduction_documents() {
        let v = VertexSet::parse(&["b", "ab"], 2).unwrap();
        let doc = VertexSetDoc::from_vertex_set(&v);
        assert_eq!(serde_json::to_string(&doc).unwrap(), r#"{"vertices":["","b","ab"]}"#);
        assert_eq!(doc.to_vertex_set(2).unwrap(), v);

        let equal = ReductionDoc::from_result(&ReductionResult::Equal(SignedPermutation::identity(2)));
        assert_eq!(serde_json::to_string(&equal).unwrap(), r#"{"kind":"equal","perm":["a","b"]}"#);
    }

    #[test]
    fn certificate_round_trip() {
        let s1 = WordSet::parse(2, &["abb"]).unwrap();
        let s2 = WordSet::parse(2, &["a"]).unwrap();
        let cert = orbit_equivalent(&s1, &s2, &SearchLimits::default()).unwrap().unwrap();
        let doc = CertificateDoc::from_certificate(&cert);
        let text = serde_json::to_string(&doc).unwrap();
        let back: CertificateDoc = serde_json::from_str(&text).unwrap();
        let restored = back.to_certificate(2).unwrap();
        assert_eq!(restored, cert);
        assert!(restored.verify(&s1, &s2));
    }
}
