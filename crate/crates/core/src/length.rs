//! The length functional on bases: total length of a word list written in a
//! basis, its per-generator profile, local minima and greedy descent.

use std::fmt;

use crate::bases::{enumerate_whitehead_transforms, Automorphism, WhiteheadTransform};
use crate::error::{Error, Result};
use crate::words::{Entry, Letter};

/// An ordered list of straight and cyclic words over a fixed rank.
/// Repeated entries count with multiplicity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct WordSet {
    pub rank: usize,
    pub entries: Vec<Entry>,
}

impl WordSet {
    pub fn new(rank: usize, entries: Vec<Entry>) -> Result<Self> {
        for e in &entries {
            e.word().check_rank(rank)?;
        }
        Ok(WordSet { rank, entries })
    }

    pub fn empty(rank: usize) -> Self {
        WordSet { rank, entries: Vec::new() }
    }

    /// Parses text tokens such as `"abb"` and `"~abAB"`.
    pub fn parse(rank: usize, tokens: &[&str]) -> Result<Self> {
        let entries = tokens.iter().map(|t| Entry::parse(t, rank)).collect::<Result<_>>()?;
        Ok(WordSet { rank, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of entry lengths in the reference basis.
    pub fn total_length(&self) -> usize {
        self.entries.iter().map(Entry::len).sum()
    }

    /// Applies `s` to every entry.
    pub fn map(&self, s: &Automorphism) -> WordSet {
        WordSet { rank: self.rank, entries: self.entries.iter().map(|e| s.apply_entry(e)).collect() }
    }

    /// The list written in the coordinates of basis `y`.
    pub fn coordinates(&self, y: &Automorphism) -> WordSet {
        self.map(&y.inverse())
    }

    pub(crate) fn check_against(&self, s: &Automorphism) -> Result<()> {
        if s.rank() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: s.rank() });
        }
        Ok(())
    }
}

impl fmt::Debug for WordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.entries).finish()
    }
}

/// Total length together with the per-generator counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthReport {
    pub total: usize,
    /// Indexed by generator slot (generator `i` at position `i - 1`).
    pub per_letter: Vec<usize>,
}

impl LengthReport {
    pub fn of_letter(&self, l: Letter) -> usize {
        self.per_letter[l.slot()]
    }

    /// Profile of a list already written in the basis of interest.
    pub fn of_coordinates(coords: &WordSet) -> LengthReport {
        let mut per_letter = vec![0; coords.rank];
        for e in &coords.entries {
            for l in e.word().letters() {
                per_letter[l.slot()] += 1;
            }
        }
        LengthReport { total: per_letter.iter().sum(), per_letter }
    }
}

/// Length of `r` measured in basis `y`.
pub fn measure(r: &WordSet, y: &Automorphism) -> Result<LengthReport> {
    r.check_against(y)?;
    Ok(LengthReport::of_coordinates(&r.coordinates(y)))
}

/// `true` iff no Whitehead transform of `y` makes `r` strictly shorter.
pub fn is_local_minimum(r: &WordSet, y: &Automorphism) -> Result<bool> {
    r.check_against(y)?;
    let coords = r.coordinates(y);
    let h = coords.total_length();
    Ok(enumerate_whitehead_transforms(r.rank)
        .iter()
        .all(|t| transformed_length(&coords, t) >= h))
}

/// Total length of `coords` after passing to the transformed basis `Y∘t`.
fn transformed_length(coords: &WordSet, t: &WhiteheadTransform) -> usize {
    let inv = t.inverse().to_automorphism().expect("Whitehead transforms are bases");
    coords.entries.iter().map(|e| inv.apply_entry(e).len()).sum()
}

/// Greedy first-improvement descent; returns the reached basis and the steps.
pub fn descend(r: &WordSet, y: &Automorphism) -> Result<(Automorphism, Vec<WhiteheadTransform>)> {
    r.check_against(y)?;
    let transforms: Vec<(WhiteheadTransform, Automorphism, Automorphism)> =
        enumerate_whitehead_transforms(r.rank)
            .into_iter()
            .map(|t| {
                let fwd = t.to_automorphism().expect("Whitehead transforms are bases");
                let inv = fwd.inverse();
                (t, fwd, inv)
            })
            .collect();
    let mut basis = y.clone();
    let mut coords = r.coordinates(y);
    let mut h = coords.total_length();
    let mut path = Vec::new();
    loop {
        let step = transforms.iter().find_map(|(t, fwd, inv)| {
            let next = coords.map(inv);
            let nh = next.total_length();
            (nh < h).then(|| (t, fwd, next, nh))
        });
        let Some((t, fwd, next, nh)) = step else { break };
        basis = basis.compose(fwd);
        coords = next;
        h = nh;
        path.push(t.clone());
    }
    Ok((basis, path))
}
