//! Words in a free group over a reference alphabet.
//!
//! Generator `i` (1-based) is written as the `i`-th lowercase letter and its
//! inverse as the matching uppercase letter. Letters are totally ordered as
//! `a < b < … < z < A < B < … < Z`; every tie-break in the crate uses this
//! order, and words are compared shortlex.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};

/// Largest rank that the text format can express.
pub const MAX_TEXT_RANK: usize = 26;

/// A generator of the reference basis or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i32);

impl Letter {
    /// Generator `index` (1-based), inverted if `inverse` is set.
    pub fn new(index: u32, inverse: bool) -> Self {
        assert!(index >= 1, "generator indices start at 1");
        let v = index as i32;
        Letter(if inverse { -v } else { v })
    }

    pub fn generator(index: u32) -> Self {
        Letter::new(index, false)
    }

    /// Generator index, starting at 1.
    pub fn index(self) -> u32 {
        self.0.unsigned_abs()
    }

    /// Zero-based slot of the generator, convenient for indexing tuples.
    pub fn slot(self) -> usize {
        self.index() as usize - 1
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// The letter with positive sign and the same index.
    pub fn positive(self) -> Self {
        Letter(self.0.abs())
    }

    /// +1 or -1.
    pub fn sign(self) -> i64 {
        self.0.signum() as i64
    }

    /// All `2·rank` letters in the fixed letter order.
    pub fn all(rank: usize) -> impl Iterator<Item = Letter> {
        (1..=rank as u32)
            .map(Letter::generator)
            .chain((1..=rank as u32).map(|i| Letter::new(i, true)))
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'a'..='z' => Some(Letter::new(c as u32 - 'a' as u32 + 1, false)),
            'A'..='Z' => Some(Letter::new(c as u32 - 'A' as u32 + 1, true)),
            _ => None,
        }
    }

    /// Text form; `None` for generators beyond the text alphabet.
    pub fn to_char(self) -> Option<char> {
        let i = self.index();
        if i as usize > MAX_TEXT_RANK {
            return None;
        }
        let base = if self.is_inverse() { b'A' } else { b'a' };
        Some((base + (i - 1) as u8) as char)
    }

    fn order_key(self) -> (bool, u32) {
        (self.is_inverse(), self.index())
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_char() {
            Some(c) => write!(f, "{c}"),
            None => write!(f, "x{}", self.0),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Free reduction by a single left-to-right pass with a stack.
fn push_reduced(buf: &mut Vec<Letter>, letter: Letter) {
    if buf.last() == Some(&letter.inverse()) {
        buf.pop();
    } else {
        buf.push(letter);
    }
}

/// A freely reduced word; the empty word is the identity.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut buf = Vec::new();
        for l in letters {
            push_reduced(&mut buf, l);
        }
        Word(buf)
    }

    /// Reduces a raw sequence after checking every letter against `rank`.
    pub fn reduce_checked<I: IntoIterator<Item = Letter>>(letters: I, rank: usize) -> Result<Self> {
        let mut buf = Vec::new();
        for l in letters {
            check_letter(l, rank)?;
            push_reduced(&mut buf, l);
        }
        Ok(Word(buf))
    }

    /// Parses the text form (`[A-Za-z]*` or `1`) and reduces it.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        if text == "1" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::with_capacity(text.len());
        for c in text.chars() {
            let l = Letter::from_char(c).ok_or_else(|| Error::MalformedWord(text.to_string()))?;
            letters.push(l);
        }
        Word::reduce_checked(letters, rank)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Largest generator index that occurs, or 0 for the identity.
    pub fn max_index(&self) -> u32 {
        self.0.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        self.0.iter().try_for_each(|&l| check_letter(l, rank))
    }

    /// Number of positions whose letter is `l` or its inverse.
    pub fn letter_count(&self, l: Letter) -> usize {
        count_index(&self.0, l.index())
    }

    /// Signed number of occurrences of generator `index`.
    pub fn exponent_sum(&self, index: u32) -> i64 {
        self.0.iter().filter(|l| l.index() == index).map(|l| l.sign()).sum()
    }

    pub fn power(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// `true` if `suffix` is a terminal segment of this word.
    pub fn ends_with(&self, suffix: &Word) -> bool {
        self.0.ends_with(&suffix.0)
    }

    /// Strips mutually inverse first and last letters until none remain.
    pub fn cyclically_reduced(&self) -> Word {
        let s = &self.0;
        let (mut i, mut j) = (0, s.len());
        while j - i >= 2 && s[i] == s[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        Word(s[i..j].to_vec())
    }

    /// All prefixes, from the identity up to the word itself.
    pub fn prefixes(&self) -> impl Iterator<Item = Word> + '_ {
        (0..=self.0.len()).map(move |k| Word(self.0[..k].to_vec()))
    }

    /// All suffixes, from the identity up to the word itself.
    pub fn suffixes(&self) -> impl Iterator<Item = Word> + '_ {
        let n = self.0.len();
        (0..=n).map(move |k| Word(self.0[n - k..].to_vec()))
    }

    pub(crate) fn from_reduced_unchecked(letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[1] != w[0].inverse()));
        Word(letters)
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }
}

fn check_letter(l: Letter, rank: usize) -> Result<()> {
    if l.index() as usize > rank {
        Err(Error::InvalidLetter { index: l.index(), rank })
    } else {
        Ok(())
    }
}

fn count_index(letters: &[Letter], index: u32) -> usize {
    letters.iter().filter(|l| l.index() == index).count()
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        let mut buf = Vec::with_capacity(self.len() + rhs.len());
        buf.extend_from_slice(&self.0);
        for &l in &rhs.0 {
            push_reduced(&mut buf, l);
        }
        Word(buf)
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

/// Shortlex: shorter words first, then letter order.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// Start index of the least rotation of `s` under the letter order.
pub fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        match a.cmp(&b) {
            Ordering::Equal => {
                k += 1;
                continue;
            }
            Ordering::Greater => i += k + 1,
            Ordering::Less => j += k + 1,
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// A conjugacy class, stored as its cyclically reduced least rotation.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord(Word);

impl CyclicWord {
    /// Canonical representative of the conjugacy class of `w`.
    pub fn new(w: &Word) -> Self {
        let core = w.cyclically_reduced();
        let start = least_rotation(&core.0);
        let n = core.len();
        let rotated = (0..n).map(|k| core.0[(start + k) % n]).collect();
        CyclicWord(Word(rotated))
    }

    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        let body = text.strip_prefix('~').unwrap_or(text);
        Ok(CyclicWord::new(&Word::parse(body, rank)?))
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0 .0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    pub fn letter_count(&self, l: Letter) -> usize {
        self.0.letter_count(l)
    }

    pub fn inverse(&self) -> Self {
        CyclicWord::new(&self.0.inverse())
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "~{}", self.0)
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// An element of a word list: a straight word or a conjugacy class.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Straight(Word),
    Cyclic(CyclicWord),
}

impl Entry {
    /// Parses the text form; a leading `~` marks a cyclic word.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        if text.starts_with('~') {
            Ok(Entry::Cyclic(CyclicWord::parse(text, rank)?))
        } else {
            Ok(Entry::Straight(Word::parse(text, rank)?))
        }
    }

    pub fn word(&self) -> &Word {
        match self {
            Entry::Straight(w) => w,
            Entry::Cyclic(c) => c.word(),
        }
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self, Entry::Cyclic(_))
    }

    pub fn len(&self) -> usize {
        self.word().len()
    }

    pub fn letter_count(&self, l: Letter) -> usize {
        self.word().letter_count(l)
    }

    /// Same kind, new content, canonicalized.
    pub fn with_word(&self, w: Word) -> Entry {
        match self {
            Entry::Straight(_) => Entry::Straight(w),
            Entry::Cyclic(_) => Entry::Cyclic(CyclicWord::new(&w)),
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Straight(w) => write!(f, "{w}"),
            Entry::Cyclic(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Debug for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub fn w(s: &str) -> Word {
        Word::parse(s, 26).unwrap()
    }

    fn raw(s: &str) -> Vec<Letter> {
        s.chars().map(|c| Letter::from_char(c).unwrap()).collect()
    }

    #[test]
    fn letter_order_puts_inverses_last() {
        let ls: Vec<Letter> = Letter::all(2).collect();
        assert_eq!(format!("{ls:?}"), "[a, b, A, B]");
        let mut shuffled = vec![ls[3], ls[0], ls[2], ls[1]];
        shuffled.sort();
        assert_eq!(shuffled, ls);
        assert_eq!(Letter::from_char('C').unwrap().inverse().inverse(), Letter::from_char('C').unwrap());
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(Word::reduce(raw("aA")), Word::identity());
        assert_eq!(Word::reduce(raw("abBc")).to_string(), "ac");
        let mut s = raw("aabAB");
        s.extend(raw("baBAA"));
        assert!(Word::reduce(s).is_identity());
    }

    #[test]
    fn reduce_rejects_out_of_range_letters() {
        assert_eq!(
            Word::parse("abc", 2),
            Err(Error::InvalidLetter { index: 3, rank: 2 })
        );
        assert!(matches!(Word::parse("ab9", 2), Err(Error::MalformedWord(_))));
        assert_eq!(Word::parse("1", 2).unwrap(), Word::identity());
    }

    #[test]
    fn multiply_examples() {
        assert!((&w("ab") * &w("BA")).is_identity());
        assert_eq!((&w("ab") * &w("b")).to_string(), "abb");
        assert_eq!((&w("aB") * &w("ba")).to_string(), "aa");
    }

    #[test]
    fn invert_examples() {
        assert_eq!(Word::identity().inverse(), Word::identity());
        assert_eq!(w("aabAB").inverse().to_string(), "baBAA");
        assert_eq!(w("abA").inverse().inverse(), w("abA"));
    }

    #[test]
    fn cyclic_canonical_examples() {
        assert_eq!(CyclicWord::new(&w("Aba")).to_string(), "~b");
        assert_eq!(CyclicWord::new(&w("baB")).to_string(), "~a");
        assert_eq!(CyclicWord::new(&w("ab")).to_string(), "~ab");
        assert_eq!(CyclicWord::new(&w("BabA")).to_string(), "~abAB");
        assert!(CyclicWord::new(&Word::identity()).is_identity());
    }

    #[test]
    fn letter_count_examples() {
        let a = Letter::generator(1);
        let b = Letter::generator(2);
        assert_eq!(w("abAB").letter_count(a), 2);
        assert_eq!(CyclicWord::parse("~abAAB", 2).unwrap().letter_count(a), 3);
        assert_eq!(Word::identity().letter_count(b), 0);
        assert_eq!(w("abAB").letter_count(a.inverse()), 2);
    }

    #[test]
    fn shortlex_order() {
        let mut ws = vec![w("B"), w("ab"), w(""), w("b"), w("a"), w("A")];
        ws.sort();
        assert_eq!(format!("{ws:?}"), r#"["", "a", "b", "A", "B", "ab"]"#);
    }

    /// Brute force over every rotation.
    fn least_rotation_oracle(s: &[Letter]) -> Vec<Letter> {
        (0..s.len().max(1))
            .map(|k| s.iter().cycle().skip(k).take(s.len()).copied().collect::<Vec<_>>())
            .min()
            .unwrap_or_default()
    }

    fn letters(rank: u32, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec((1..=rank, any::<bool>()), 0..max_len)
            .prop_map(|v| v.into_iter().map(|(i, inv)| Letter::new(i, inv)).collect())
    }

    proptest! {
        #[test]
        fn reduce_is_a_retraction(s in letters(3, 30)) {
            let once = Word::reduce(s.clone());
            prop_assert!(once.letters().windows(2).all(|p| p[1] != p[0].inverse()));
            prop_assert_eq!(Word::reduce(once.letters().iter().copied()), once.clone());
            let mut doubled = s.clone();
            doubled.extend(s.iter().rev().map(|l| l.inverse()));
            prop_assert!(Word::reduce(doubled).is_identity());
        }

        #[test]
        fn least_rotation_matches_brute_force(s in letters(3, 16)) {
            let start = least_rotation(&s);
            let got: Vec<Letter> = (0..s.len()).map(|k| s[(start + k) % s.len()]).collect();
            prop_assert_eq!(got, least_rotation_oracle(&s));
        }

        #[test]
        fn cyclic_canonical_is_rotation_invariant(s in letters(3, 20), k in 0usize..20) {
            let word = Word::reduce(s);
            let canon = CyclicWord::new(&word);
            prop_assert!(canon.len() <= word.len());
            let core = word.cyclically_reduced();
            if !core.is_identity() {
                let k = k % core.len();
                let rotated = Word::reduce(core.letters()[k..].iter().chain(&core.letters()[..k]).copied());
                prop_assert_eq!(CyclicWord::new(&rotated), canon.clone());
            }
            // conjugating never changes the class
            let conj = &(&w("b") * &word) * &w("B");
            prop_assert_eq!(CyclicWord::new(&conj), canon);
        }

        #[test]
        fn multiplication_is_associative(a in letters(3, 10), b in letters(3, 10), c in letters(3, 10)) {
            let (a, b, c) = (Word::reduce(a), Word::reduce(b), Word::reduce(c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert!((&a * &a.inverse()).is_identity());
        }
    }
}
