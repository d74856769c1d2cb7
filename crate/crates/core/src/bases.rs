//! Bases of the free group, carried as automorphisms of the reference basis.
//!
//! The basis `Y` of an automorphism is its tuple of forward images. Writing a
//! word `r` in `Y`-coordinates is `apply(backward, r)`.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::fold::{express_generators, generates};
use crate::words::{CyclicWord, Entry, Letter, Word};

/// An automorphism given by the images of the reference generators together
/// with the images under its inverse.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    forward: Vec<Word>,
    backward: Vec<Word>,
}

impl Automorphism {
    pub fn identity(rank: usize) -> Self {
        let gens: Vec<Word> = (1..=rank as u32).map(|i| Word::letter(Letter::generator(i))).collect();
        Automorphism { forward: gens.clone(), backward: gens }
    }

    /// Builds the automorphism sending generator `i` to `images[i]`.
    pub fn from_images(images: Vec<Word>) -> Result<Self> {
        let rank = images.len();
        for w in &images {
            w.check_rank(rank)?;
        }
        let backward = express_generators(&images, rank).ok_or_else(|| {
            let shown: Vec<String> = images.iter().map(|w| w.to_string()).collect();
            Error::NotABasis(format!("{shown:?}"))
        })?;
        Ok(Automorphism { forward: images, backward })
    }

    /// Parses images in the text format.
    pub fn parse(images: &[&str]) -> Result<Self> {
        let rank = images.len();
        let words = images.iter().map(|s| Word::parse(s, rank)).collect::<Result<Vec<_>>>()?;
        Automorphism::from_images(words)
    }

    pub fn rank(&self) -> usize {
        self.forward.len()
    }

    /// The basis: images of the reference generators.
    pub fn images(&self) -> &[Word] {
        &self.forward
    }

    pub fn backward(&self) -> &[Word] {
        &self.backward
    }

    /// Image of a single letter.
    pub fn image_of(&self, l: Letter) -> Word {
        let w = &self.forward[l.slot()];
        if l.is_inverse() {
            w.inverse()
        } else {
            w.clone()
        }
    }

    pub fn apply(&self, w: &Word) -> Word {
        Word::reduce(w.letters().iter().flat_map(|&l| self.image_of(l).into_letters()))
    }

    pub fn apply_cyclic(&self, w: &CyclicWord) -> CyclicWord {
        CyclicWord::new(&self.apply(w.word()))
    }

    pub fn apply_entry(&self, e: &Entry) -> Entry {
        match e {
            Entry::Straight(w) => Entry::Straight(self.apply(w)),
            Entry::Cyclic(w) => Entry::Cyclic(self.apply_cyclic(w)),
        }
    }

    /// Checks that `w` only uses generators of this rank before applying.
    pub fn apply_checked(&self, w: &Word) -> Result<Word> {
        w.check_rank(self.rank())?;
        Ok(self.apply(w))
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        assert_eq!(self.rank(), other.rank(), "rank mismatch in compose");
        let inv = other.inverse();
        Automorphism {
            forward: other.forward.iter().map(|w| self.apply(w)).collect(),
            backward: self.backward.iter().map(|w| inv.apply(w)).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism { forward: self.backward.clone(), backward: self.forward.clone() }
    }

    pub fn is_identity(&self) -> bool {
        *self == Automorphism::identity(self.rank())
    }

    /// `Y`-coordinates of `w`, where `Y` is this basis.
    pub fn coordinates(&self, w: &Word) -> Word {
        self.inverse().apply(w)
    }

    /// Turns `Y`-coordinates back into a reference word.
    pub fn from_coordinates(&self, w: &Word) -> Word {
        self.apply(w)
    }
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs: Vec<String> = self.forward.iter().map(|w| w.to_string()).collect();
        write!(f, "({})", imgs.join(", "))
    }
}

/// `true` iff `words` has exactly `rank` entries and generates the group.
pub fn is_basis(words: &[Word], rank: usize) -> bool {
    words.len() == rank && words.iter().all(|w| w.check_rank(rank).is_ok()) && generates(words, rank)
}

/// Determinant of the exponent-sum matrix of a tuple (row `j` = word `j`).
pub fn abelianization_determinant(words: &[Word], rank: usize) -> i128 {
    if words.len() != rank {
        return 0;
    }
    let mut m: Vec<Vec<i128>> = words
        .iter()
        .map(|w| (1..=rank as u32).map(|i| w.exponent_sum(i) as i128).collect())
        .collect();
    bareiss(&mut m)
}

/// Fraction-free Gaussian elimination.
pub(crate) fn bareiss(m: &mut [Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// A Whitehead transform `e_i ↦ x^l · e_i · x^{-r}`, with the multiplier's own
/// generator fixed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WhiteheadTransform {
    pub multiplier: Letter,
    /// `(left, right)` per generator slot; ignored at the multiplier's slot.
    pub choices: Vec<(bool, bool)>,
}

impl WhiteheadTransform {
    pub fn rank(&self) -> usize {
        self.choices.len()
    }

    pub fn images(&self) -> Vec<Word> {
        let x = Word::letter(self.multiplier);
        let x_inv = x.inverse();
        (0..self.rank())
            .map(|i| {
                let e = Word::letter(Letter::generator(i as u32 + 1));
                if i == self.multiplier.slot() {
                    return e;
                }
                let (l, r) = self.choices[i];
                let mut out = e;
                if l {
                    out = &x * &out;
                }
                if r {
                    out = &out * &x_inv;
                }
                out
            })
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.choices
            .iter()
            .enumerate()
            .all(|(i, &(l, r))| i == self.multiplier.slot() || (!l && !r))
    }

    /// Same flags with the multiplier inverted.
    pub fn inverse(&self) -> WhiteheadTransform {
        WhiteheadTransform { multiplier: self.multiplier.inverse(), choices: self.choices.clone() }
    }

    pub fn to_automorphism(&self) -> Result<Automorphism> {
        let forward = self.images();
        if !is_basis(&forward, self.rank()) {
            return Err(Error::NotABasis(format!("{self:?}")));
        }
        Ok(Automorphism { forward, backward: self.inverse().images() })
    }

    /// Builds a transform from explicit images, if they have the required shape.
    pub fn from_images(multiplier: Letter, images: &[Word]) -> Option<WhiteheadTransform> {
        let rank = images.len();
        let mut choices = vec![(false, false); rank];
        for i in 0..rank {
            if i == multiplier.slot() {
                if images[i] != Word::letter(Letter::generator(i as u32 + 1)) {
                    return None;
                }
                continue;
            }
            let found = FLAG_ORDER.iter().find(|&&c| {
                let mut t = WhiteheadTransform { multiplier, choices: vec![(false, false); rank] };
                t.choices[i] = c;
                t.images()[i] == images[i]
            })?;
            choices[i] = *found;
        }
        Some(WhiteheadTransform { multiplier, choices })
    }
}

impl fmt::Debug for WhiteheadTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs: Vec<String> = self.images().iter().map(|w| w.to_string()).collect();
        write!(f, "[{}: {}]", self.multiplier, imgs.join(", "))
    }
}

const FLAG_ORDER: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];

/// All non-identity Whitehead transforms of the given rank, without repeated
/// image tuples, ordered by multiplier and then by flags.
pub fn enumerate_whitehead_transforms(rank: usize) -> Vec<WhiteheadTransform> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for x in Letter::all(rank) {
        let others: Vec<usize> = (0..rank).filter(|&i| i != x.slot()).collect();
        let total = 4usize.pow(others.len() as u32);
        for code in 0..total {
            let mut choices = vec![(false, false); rank];
            // most significant digit belongs to the first other slot
            let mut rest = code;
            for &i in others.iter().rev() {
                choices[i] = FLAG_ORDER[rest % 4];
                rest /= 4;
            }
            let t = WhiteheadTransform { multiplier: x, choices };
            if t.is_trivial() {
                continue;
            }
            let images = t.images();
            if !seen.insert(images.clone()) {
                continue;
            }
            assert!(is_basis(&images, rank), "Whitehead transform {t:?} is not a basis");
            out.push(t);
        }
    }
    out
}

/// A permutation of the generators with signs: generator `i` goes to
/// `mapping[i]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    pub mapping: Vec<Letter>,
}

impl SignedPermutation {
    pub fn identity(rank: usize) -> Self {
        SignedPermutation { mapping: (1..=rank as u32).map(Letter::generator).collect() }
    }

    pub fn rank(&self) -> usize {
        self.mapping.len()
    }

    pub fn apply_letter(&self, l: Letter) -> Letter {
        let m = self.mapping[l.slot()];
        if l.is_inverse() {
            m.inverse()
        } else {
            m
        }
    }

    pub fn apply(&self, w: &Word) -> Word {
        Word::from_reduced_unchecked(w.letters().iter().map(|&l| self.apply_letter(l)).collect())
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut mapping = vec![Letter::generator(1); self.rank()];
        for (i, m) in self.mapping.iter().enumerate() {
            mapping[m.slot()] = Letter::new(i as u32 + 1, m.is_inverse());
        }
        SignedPermutation { mapping }
    }

    pub fn to_automorphism(&self) -> Automorphism {
        Automorphism {
            forward: self.mapping.iter().map(|&l| Word::letter(l)).collect(),
            backward: self.inverse().mapping.iter().map(|&l| Word::letter(l)).collect(),
        }
    }

    /// All `2ⁿ·n!` signed permutations.
    pub fn all(rank: usize) -> Vec<SignedPermutation> {
        let mut perms = Vec::new();
        permutations(&mut (0..rank).collect(), 0, &mut perms);
        let mut out = Vec::with_capacity(perms.len() << rank);
        for p in perms {
            for signs in 0u32..(1 << rank) {
                let mapping = p
                    .iter()
                    .enumerate()
                    .map(|(k, &j)| Letter::new(j as u32 + 1, signs >> k & 1 == 1))
                    .collect();
                out.push(SignedPermutation { mapping });
            }
        }
        out
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.mapping)
    }
}

/// The signed permutation `π` with `Y = X ∘ π`, if `X^{±1} = Y^{±1}`.
pub fn signed_permutation_match(x: &Automorphism, y: &Automorphism) -> Option<SignedPermutation> {
    assert_eq!(x.rank(), y.rank(), "rank mismatch");
    let mut mapping = Vec::with_capacity(y.rank());
    for yi in y.images() {
        let l = x.images().iter().enumerate().find_map(|(j, xj)| {
            if xj == yi {
                Some(Letter::new(j as u32 + 1, false))
            } else if xj.inverse() == *yi {
                Some(Letter::new(j as u32 + 1, true))
            } else {
                None
            }
        })?;
        mapping.push(l);
    }
    Some(SignedPermutation { mapping })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::tests::w;
    use proptest::prelude::*;

    fn aut(images: &[&str]) -> Automorphism {
        Automorphism::parse(images).unwrap()
    }

    #[test]
    fn apply_examples() {
        let s = aut(&["ab", "b"]);
        assert_eq!(s.apply(&w("aB")), w("a"));
        let id = Automorphism::identity(2);
        assert_eq!(id.apply(&w("abAAB")), w("abAAB"));
        // ab·b·BA·B reduces to abAB, already canonical
        let c = CyclicWord::parse("~abAB", 2).unwrap();
        assert_eq!(s.apply_cyclic(&c).to_string(), "~abAB");
        assert!(matches!(s.apply_checked(&w("c")), Err(Error::InvalidLetter { .. })));
    }

    #[test]
    fn compose_examples() {
        let s = aut(&["ab", "b"]);
        assert_eq!(s.compose(&s).images()[0], w("abb"));
        assert_eq!(s.compose(&Automorphism::identity(2)), s);
        assert!(s.compose(&aut(&["aB", "b"])).is_identity());
    }

    #[test]
    fn invert_examples() {
        assert!(Automorphism::identity(2).inverse().is_identity());
        assert_eq!(aut(&["ab", "b"]).inverse(), aut(&["aB", "b"]));
        let s = aut(&["bAB", "bbaB"]);
        assert_eq!(s.inverse().inverse(), s);
    }

    #[test]
    fn enumerate_examples() {
        assert!(enumerate_whitehead_transforms(1).is_empty());
        let ts = enumerate_whitehead_transforms(2);
        assert_eq!(ts.len(), 12);
        let with_a: Vec<Vec<Word>> = ts
            .iter()
            .filter(|t| t.multiplier == Letter::generator(1))
            .map(|t| t.images())
            .collect();
        assert_eq!(
            with_a,
            vec![vec![w("a"), w("bA")], vec![w("a"), w("ab")], vec![w("a"), w("abA")]]
        );
        assert_eq!(enumerate_whitehead_transforms(3).len(), 90);
        // enumeration asserts every descriptor is a basis
        assert!(!enumerate_whitehead_transforms(4).is_empty());
    }

    #[test]
    fn transform_examples() {
        let a = Letter::generator(1);
        let t = WhiteheadTransform { multiplier: a, choices: vec![(false, false), (true, false)] };
        assert_eq!(t.to_automorphism().unwrap(), aut(&["a", "ab"]));
        let t2 = WhiteheadTransform { multiplier: a, choices: vec![(false, false), (true, true)] };
        assert_eq!(t2.to_automorphism().unwrap(), aut(&["a", "abA"]));
        assert_eq!(t.to_automorphism().unwrap().inverse(), aut(&["a", "Ab"]));
    }

    #[test]
    fn transforms_have_the_required_shape() {
        for rank in 1..=3 {
            for t in enumerate_whitehead_transforms(rank) {
                let s = t.to_automorphism().unwrap();
                assert!(s.compose(&s.inverse()).is_identity());
                assert_eq!(Automorphism::from_images(s.images().to_vec()).unwrap(), s);
                let x = Word::letter(t.multiplier);
                for (i, img) in s.images().iter().enumerate() {
                    let e = Word::letter(Letter::generator(i as u32 + 1));
                    let allowed = [e.clone(), &x * &e, &e * &x.inverse(), &(&x * &e) * &x.inverse()];
                    assert!(allowed.contains(img));
                }
                assert_eq!(WhiteheadTransform::from_images(t.multiplier, s.images()), Some(t));
            }
        }
    }

    #[test]
    fn is_basis_examples() {
        assert!(is_basis(&[w("ab"), w("b")], 2));
        assert!(!is_basis(&[w("aa"), w("b")], 2));
        assert_eq!(abelianization_determinant(&[w("aa"), w("b")], 2), 2);
        assert!(is_basis(&[w("b"), w("a")], 2));
        assert!(!is_basis(&[w("a")], 2));
        assert!(matches!(Automorphism::parse(&["aa", "b"]), Err(Error::NotABasis(_))));
    }

    #[test]
    fn signed_permutation_examples() {
        let x = Automorphism::identity(2);
        let y = aut(&["B", "a"]);
        let p = signed_permutation_match(&x, &y).unwrap();
        assert_eq!(format!("{p:?}"), "[B, a]");
        assert_eq!(x.compose(&p.to_automorphism()), y);
        assert!(signed_permutation_match(&x, &aut(&["ab", "b"])).is_none());
        assert_eq!(signed_permutation_match(&y, &y), Some(SignedPermutation::identity(2)));
        assert_eq!(SignedPermutation::all(3).len(), 48);
        for p in SignedPermutation::all(2) {
            assert!(p.to_automorphism().compose(&p.inverse().to_automorphism()).is_identity());
        }
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let mut m = vec![vec![2, -1, 3], vec![0, 4, 1], vec![5, 2, -2]];
        let expected = 2 * (4 * -2 - 1 * 2) - (-1) * (0 * -2 - 1 * 5) + 3 * (0 * 2 - 4 * 5);
        assert_eq!(bareiss(&mut m), expected);
        let mut z = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(bareiss(&mut z), -1);
    }

    fn random_aut(rank: usize, picks: Vec<usize>) -> Automorphism {
        let ts = enumerate_whitehead_transforms(rank);
        picks.into_iter().fold(Automorphism::identity(rank), |acc, k| {
            acc.compose(&ts[k % ts.len()].to_automorphism().unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn random_compositions_are_bases(rank in 2usize..=3, picks in prop::collection::vec(0usize..1000, 0..=8)) {
            let s = random_aut(rank, picks);
            prop_assert!(is_basis(s.images(), rank));
            prop_assert!(s.compose(&s.inverse()).is_identity());
            prop_assert_eq!(abelianization_determinant(s.images(), rank).abs(), 1);
            let rebuilt = Automorphism::from_images(s.images().to_vec()).unwrap();
            prop_assert!(rebuilt.compose(&s.inverse()).is_identity());
        }

        #[test]
        fn apply_is_multiplicative(picks in prop::collection::vec(0usize..1000, 0..=5), u in "[abAB]{0,8}", v in "[abAB]{0,8}") {
            let s = random_aut(2, picks);
            let (u, v) = (w(&u), w(&v));
            prop_assert_eq!(s.apply(&(&u * &v)), &s.apply(&u) * &s.apply(&v));
            prop_assert_eq!(s.inverse().apply(&s.apply(&u)), u);
        }
    }
}
