//! Orbit decision for word lists under the automorphism group: minimize both
//! lists, then explore the level set of minimal length by breadth-first search
//! over canonical tuples.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::bases::{enumerate_whitehead_transforms, Automorphism, SignedPermutation, WhiteheadTransform};
use crate::error::{Error, Result};
use crate::length::{descend, WordSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_states: usize,
    pub max_h: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_states: 1_000_000, max_h: usize::MAX }
    }
}

/// An automorphism carrying one list onto another, factored as Whitehead
/// transforms followed by a signed permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCertificate {
    /// Applied first to last.
    pub transforms: Vec<WhiteheadTransform>,
    pub final_permutation: SignedPermutation,
    pub composed: Automorphism,
}

impl OrbitCertificate {
    /// Checks the factorization and that `composed` maps `s1` onto `s2`.
    pub fn verify(&self, s1: &WordSet, s2: &WordSet) -> bool {
        let rank = self.composed.rank();
        let mut product = Automorphism::identity(rank);
        for t in &self.transforms {
            match t.to_automorphism() {
                Ok(a) => product = a.compose(&product),
                Err(_) => return false,
            }
        }
        product = self.final_permutation.to_automorphism().compose(&product);
        product == self.composed && s1.map(&self.composed) == *s2
    }
}

/// Accumulates an automorphism as `P ∘ t_k ∘ … ∘ t_1`, pushing permutations to
/// the end as they arrive.
struct Factored {
    transforms: Vec<WhiteheadTransform>,
    perm: SignedPermutation,
}

impl Factored {
    fn new(rank: usize) -> Self {
        Factored { transforms: Vec::new(), perm: SignedPermutation::identity(rank) }
    }

    fn then_transform(&mut self, t: &WhiteheadTransform) {
        // t ∘ P = P ∘ (P⁻¹ t P)
        let p = self.perm.to_automorphism();
        let conj = p.inverse().compose(&t.to_automorphism().expect("transform")).compose(&p);
        let x = self.perm.inverse().apply_letter(t.multiplier);
        let moved = WhiteheadTransform::from_images(x, conj.images())
            .expect("conjugating a Whitehead transform by a signed permutation");
        self.transforms.push(moved);
    }

    fn then_permutation(&mut self, q: &SignedPermutation) {
        let composed = q.to_automorphism().compose(&self.perm.to_automorphism());
        self.perm = SignedPermutation {
            mapping: composed.images().iter().map(|w| w.letters()[0]).collect(),
        };
    }

    fn finish(self, rank: usize) -> OrbitCertificate {
        let mut composed = Automorphism::identity(rank);
        for t in &self.transforms {
            composed = t.to_automorphism().expect("transform").compose(&composed);
        }
        composed = self.perm.to_automorphism().compose(&composed);
        OrbitCertificate { transforms: self.transforms, final_permutation: self.perm, composed }
    }
}

/// Descends from the reference basis. Returns the list written in the minimal
/// basis, that basis, and the minimal total length.
pub fn minimize_tuple(s: &WordSet) -> (WordSet, Automorphism, usize) {
    let (basis, _) = descend(s, &Automorphism::identity(s.rank)).expect("rank matches by construction");
    let coords = s.coordinates(&basis);
    let h = coords.total_length();
    (coords, basis, h)
}

/// Least image of `s` under all signed permutations, with the permutation used.
pub fn canonical_form(s: &WordSet, perms: &[SignedPermutation]) -> (WordSet, SignedPermutation) {
    let mut best: Option<(WordSet, &SignedPermutation)> = None;
    for p in perms {
        let img = permute(s, p);
        if best.as_ref().map_or(true, |(b, _)| img.entries < b.entries) {
            best = Some((img, p));
        }
    }
    let (set, p) = best.expect("at least the identity permutation");
    (set, p.clone())
}

fn permute(s: &WordSet, p: &SignedPermutation) -> WordSet {
    WordSet {
        rank: s.rank,
        entries: s.entries.iter().map(|e| e.with_word(p.apply(e.word()))).collect(),
    }
}

struct Explorer {
    perms: Vec<SignedPermutation>,
    steps: Vec<(WhiteheadTransform, Automorphism)>,
}

/// How a state was first reached: predecessor, transform, then permutation.
type Parent = Option<(WordSet, usize, SignedPermutation)>;

impl Explorer {
    fn new(rank: usize) -> Self {
        let steps = enumerate_whitehead_transforms(rank)
            .into_iter()
            .map(|t| {
                let a = t.to_automorphism().expect("transform");
                (t, a)
            })
            .collect();
        Explorer { perms: SignedPermutation::all(rank), steps }
    }

    /// Breadth-first search from `start` at constant length, stopping early
    /// when `target` is reached.
    fn explore(
        &self,
        start: &WordSet,
        target: Option<&WordSet>,
        lim: &SearchLimits,
    ) -> Result<HashMap<WordSet, Parent>> {
        let h = start.total_length();
        let mut seen: HashMap<WordSet, Parent> = HashMap::new();
        seen.insert(start.clone(), None);
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(state) = queue.pop_front() {
            debug_assert_eq!(state.total_length(), h);
            if Some(&state) == target {
                return Ok(seen);
            }
            for (k, (_, a)) in self.steps.iter().enumerate() {
                let next = state.map(a);
                if next.total_length() != h {
                    continue;
                }
                let (canon, p) = canonical_form(&next, &self.perms);
                if seen.contains_key(&canon) {
                    continue;
                }
                if seen.len() >= lim.max_states {
                    return Err(Error::LimitExceeded(format!("more than {} states", lim.max_states)));
                }
                seen.insert(canon.clone(), Some((state.clone(), k, p)));
                queue.push_back(canon);
            }
        }
        Ok(seen)
    }
}

fn check_shapes(s1: &WordSet, s2: &WordSet) -> Result<()> {
    if s1.rank != s2.rank {
        return Err(Error::RankMismatch { expected: s1.rank, found: s2.rank });
    }
    if s1.len() != s2.len() {
        return Err(Error::KindMismatch(format!("{} entries versus {}", s1.len(), s2.len())));
    }
    for (k, (a, b)) in s1.entries.iter().zip(&s2.entries).enumerate() {
        if a.is_cyclic() != b.is_cyclic() {
            return Err(Error::KindMismatch(format!("entry {k} differs in kind")));
        }
    }
    Ok(())
}

/// Decides whether some automorphism maps `s1` onto `s2` entrywise.
///
/// `Ok(None)` means no such automorphism exists; running out of budget is an
/// error, since the search is only conclusive after full exploration.
pub fn orbit_equivalent(s1: &WordSet, s2: &WordSet, lim: &SearchLimits) -> Result<Option<OrbitCertificate>> {
    check_shapes(s1, s2)?;
    let rank = s1.rank;
    let (m1, sigma1, h1) = minimize_tuple(s1);
    let (m2, _, h2) = minimize_tuple(s2);
    if h1 != h2 {
        return Ok(None);
    }
    if h1 > lim.max_h {
        return Err(Error::LimitExceeded(format!("minimal length {h1} above {}", lim.max_h)));
    }
    let explorer = Explorer::new(rank);
    let (c1, pi1) = canonical_form(&m1, &explorer.perms);
    let (c2, pi2) = canonical_form(&m2, &explorer.perms);
    let seen = explorer.explore(&c1, Some(&c2), lim)?;
    if !seen.contains_key(&c2) {
        return Ok(None);
    }

    // Walk back from the target to recover the path.
    let mut path = Vec::new();
    let mut at = c2.clone();
    while let Some(Some((prev, k, p))) = seen.get(&at) {
        path.push((*k, p.clone()));
        at = prev.clone();
    }
    path.reverse();

    let (_, down1) = descend(s1, &Automorphism::identity(rank))?;
    let (_, down2) = descend(s2, &Automorphism::identity(rank))?;
    debug_assert_eq!(
        down1.iter().fold(Automorphism::identity(rank), |a, t| a.compose(&t.to_automorphism().unwrap())),
        sigma1
    );
    let mut f = Factored::new(rank);
    // σ1 = t_1 ∘ … ∘ t_m, so its inverse applies t_1⁻¹ first
    for t in &down1 {
        f.then_transform(&t.inverse());
    }
    f.then_permutation(&pi1);
    for (k, p) in &path {
        f.then_transform(&explorer.steps[*k].0);
        f.then_permutation(p);
    }
    f.then_permutation(&pi2.inverse());
    for t in down2.iter().rev() {
        f.then_transform(t);
    }
    let cert = f.finish(rank);
    if !cert.verify(s1, s2) {
        return Err(Error::TheoremViolation("orbit certificate does not verify".into()));
    }
    Ok(Some(cert))
}

/// All canonical tuples reachable from `s` by length-preserving transforms.
pub fn level_set_component(s: &WordSet, lim: &SearchLimits) -> Result<BTreeSet<WordSet>> {
    let explorer = Explorer::new(s.rank);
    let (start, _) = canonical_form(s, &explorer.perms);
    let seen = explorer.explore(&start, None, lim)?;
    Ok(seen.into_keys().collect())
}
