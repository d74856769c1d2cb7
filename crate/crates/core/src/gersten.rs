//! Cayley trees of two bases, translators between them and the distance.
//!
//! For a basis `X` the left tree has an edge `v → x·v` for every `x ∈ X^{±1}`;
//! for a basis `Y` the right tree has an edge `v → v·y`. A vertex set `V`
//! containing 1 is a translator when it generates the group and spans a
//! subtree of both trees.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fmt::Write as _;

use crate::bases::Automorphism;
use crate::error::{Error, Result};
use crate::fold::generates;
use crate::words::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// The tree with edges `v → x·v`.
    Left,
    /// The tree with edges `v → v·y`.
    Right,
}

/// A finite set of group elements that always contains the identity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(BTreeSet<Word>);

impl VertexSet {
    pub fn new<I: IntoIterator<Item = Word>>(words: I) -> Self {
        let mut set: BTreeSet<Word> = words.into_iter().collect();
        set.insert(Word::identity());
        VertexSet(set)
    }

    pub fn identity() -> Self {
        VertexSet::new([])
    }

    pub fn parse(tokens: &[&str], rank: usize) -> Result<Self> {
        let words = tokens.iter().map(|t| Word::parse(t, rank)).collect::<Result<Vec<_>>>()?;
        Ok(VertexSet::new(words))
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.0.contains(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.0.iter()
    }

    pub fn as_set(&self) -> &BTreeSet<Word> {
        &self.0
    }

    /// Elements other than the identity.
    pub fn non_identity(&self) -> impl Iterator<Item = &Word> {
        self.0.iter().filter(|w| !w.is_identity())
    }

    /// Elements in shortlex order.
    pub fn to_vec(&self) -> Vec<Word> {
        self.0.iter().cloned().collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// `{v⁻¹ : v ∈ V}`.
    pub fn inverse(&self) -> VertexSet {
        VertexSet::new(self.0.iter().map(Word::inverse))
    }
}

impl FromIterator<Word> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Word>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// Multiplies by a basis letter on the given side.
pub fn step(basis: &Automorphism, v: &Word, l: Letter, side: Side) -> Word {
    let img = basis.image_of(l);
    match side {
        Side::Left => &img * v,
        Side::Right => v * &img,
    }
}

/// Neighbours of `v`, keyed by the basis letter of the connecting edge.
pub fn edge_sets(basis: &Automorphism, v: &Word, side: Side) -> BTreeMap<Letter, Word> {
    Letter::all(basis.rank()).map(|l| (l, step(basis, v, l, side))).collect()
}

/// Vertices on the geodesic from 1 to `w`, starting at 1.
pub fn geodesic(basis: &Automorphism, w: &Word, side: Side) -> Vec<Word> {
    let coords = basis.coordinates(w);
    match side {
        Side::Left => coords.suffixes().map(|s| basis.apply(&s)).collect(),
        Side::Right => coords.prefixes().map(|p| basis.apply(&p)).collect(),
    }
}

/// Smallest subtree containing `w` and 1.
pub fn tree_closure(basis: &Automorphism, w: &VertexSet, side: Side) -> VertexSet {
    VertexSet::new(w.iter().flat_map(|v| geodesic(basis, v, side)))
}

/// The component of 1 in the subgraph induced on `w`.
pub fn one_component(basis: &Automorphism, w: &VertexSet, side: Side) -> VertexSet {
    let mut reached = BTreeSet::from([Word::identity()]);
    let mut stack = vec![Word::identity()];
    while let Some(v) = stack.pop() {
        for l in Letter::all(basis.rank()) {
            let n = step(basis, &v, l, side);
            if w.contains(&n) && reached.insert(n.clone()) {
                stack.push(n);
            }
        }
    }
    VertexSet(reached)
}

/// Krstić's finite translator: the five-operator composite applied to
/// `{1} ∪ Y^{±1}`.
pub fn krstic_translator(x: &Automorphism, y: &Automorphism) -> VertexSet {
    let seed = VertexSet::new(Letter::all(y.rank()).map(|l| y.image_of(l)));
    let a = tree_closure(x, &seed, Side::Left);
    let b = tree_closure(y, &a, Side::Right);
    let c = tree_closure(x, &b, Side::Left);
    one_component(y, &c, Side::Right)
}

/// The full subgraph on `V` of both trees. Edges are stored with positive
/// letters: `(x, v)` is `v → x·v` and `(v, y)` is `v → v·y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GerstenGraph {
    pub rank: usize,
    pub vertices: VertexSet,
    pub x_edges: BTreeSet<(Letter, Word)>,
    pub y_edges: BTreeSet<(Word, Letter)>,
    pub x: Automorphism,
    pub y: Automorphism,
}

impl GerstenGraph {
    /// Number of edge ends at `v`.
    pub fn valence(&self, v: &Word) -> usize {
        Letter::all(self.rank)
            .map(|l| {
                usize::from(self.vertices.contains(&step(&self.x, v, l, Side::Left)))
                    + usize::from(self.vertices.contains(&step(&self.y, v, l, Side::Right)))
            })
            .sum()
    }

    /// Non-identity vertices meeting at least three edge ends.
    pub fn valence_ge3(&self) -> BTreeSet<Word> {
        self.vertices.non_identity().filter(|v| self.valence(v) >= 3).cloned().collect()
    }

    /// DOT rendering with edges labelled `xN` and `yN`.
    pub fn to_dot(&self) -> String {
        let (x, y) = (&self.x, &self.y);
        let name = |w: &Word| if w.is_identity() { "1".to_string() } else { w.to_string() };
        let mut out = String::from("digraph gersten {\n");
        for v in self.vertices.iter() {
            let _ = writeln!(out, "  \"{}\";", name(v));
        }
        for (l, t) in &self.x_edges {
            let head = step(x, t, *l, Side::Left);
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"x{}\"];", name(t), name(&head), l.index());
        }
        for (t, l) in &self.y_edges {
            let head = step(y, t, *l, Side::Right);
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"y{}\"];", name(t), name(&head), l.index());
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_gersten_graph(x: &Automorphism, y: &Automorphism, v: &VertexSet) -> GerstenGraph {
    let mut x_edges = BTreeSet::new();
    let mut y_edges = BTreeSet::new();
    for w in v.iter() {
        for i in 1..=x.rank() as u32 {
            let l = Letter::generator(i);
            if v.contains(&step(x, w, l, Side::Left)) {
                x_edges.insert((l, w.clone()));
            }
            if v.contains(&step(y, w, l, Side::Right)) {
                y_edges.insert((w.clone(), l));
            }
        }
    }
    GerstenGraph { rank: x.rank(), vertices: v.clone(), x_edges, y_edges, x: x.clone(), y: y.clone() }
}

/// `true` iff `v` contains 1, generates, and spans a subtree of both trees.
pub fn is_translator(x: &Automorphism, y: &Automorphism, v: &VertexSet) -> bool {
    if !v.contains(&Word::identity()) {
        return false;
    }
    let n = v.len();
    let x_count = count_edges(x, v, Side::Left);
    let y_count = count_edges(y, v, Side::Right);
    // an induced subgraph of a tree is a forest; it is a tree iff it has n - 1 edges
    x_count + 1 == n && y_count + 1 == n && generates(v.non_identity(), x.rank())
}

fn count_edges(basis: &Automorphism, v: &VertexSet, side: Side) -> usize {
    v.iter()
        .map(|w| {
            (1..=basis.rank() as u32)
                .filter(|&i| v.contains(&step(basis, w, Letter::generator(i), side)))
                .count()
        })
        .sum()
}

/// Non-identity vertices of the Gersten graph on `v` meeting at least three
/// edge ends.
pub fn valence_ge3(x: &Automorphism, y: &Automorphism, v: &VertexSet) -> BTreeSet<Word> {
    build_gersten_graph(x, y, v).valence_ge3()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceReport {
    pub d: usize,
    /// Least size of `V − {1}` over the translators examined.
    pub kappa: usize,
    pub witness: VertexSet,
    /// `false` when a user cap cut the search short.
    pub exact: bool,
}

/// Options for [`distance`].
#[derive(Clone, Copy, Debug)]
pub struct DistanceLimits {
    /// Largest `|V|` examined; defaults to the size of Krstić's translator.
    pub cap: Option<usize>,
    /// Number of candidate sets after which the search gives up.
    pub max_states: usize,
}

impl Default for DistanceLimits {
    fn default() -> Self {
        DistanceLimits { cap: None, max_states: 2_000_000 }
    }
}

/// Closure under both trees, with sizes bounded by `limit`.
struct Closer<'a> {
    x: &'a Automorphism,
    y: &'a Automorphism,
    limit: usize,
    cache: HashMap<Word, Option<BTreeSet<Word>>>,
}

impl<'a> Closer<'a> {
    /// Least set containing 1 and `u` that is a subtree of both trees, or
    /// `None` if it has more than `limit` elements.
    fn close(&mut self, u: &Word) -> Option<&BTreeSet<Word>> {
        if !self.cache.contains_key(u) {
            let c = self.compute(u);
            self.cache.insert(u.clone(), c);
        }
        self.cache[u].as_ref()
    }

    fn compute(&self, u: &Word) -> Option<BTreeSet<Word>> {
        let mut set = BTreeSet::from([Word::identity(), u.clone()]);
        let mut pending: Vec<Word> = vec![u.clone()];
        while let Some(w) = pending.pop() {
            for side in [Side::Left, Side::Right] {
                let basis = if side == Side::Left { self.x } else { self.y };
                for g in geodesic(basis, &w, side) {
                    if set.insert(g.clone()) {
                        if set.len() > self.limit {
                            return None;
                        }
                        pending.push(g);
                    }
                }
            }
        }
        Some(set)
    }
}

/// Translators of size exactly `size` among the sets that are subtrees of
/// both trees, found by growing such sets one left-tree neighbour at a time.
fn translators_of_size(
    x: &Automorphism,
    y: &Automorphism,
    size: usize,
    budget: &mut usize,
) -> Result<Vec<BTreeSet<Word>>> {
    let rank = x.rank();
    let mut closer = Closer { x, y, limit: size, cache: HashMap::new() };
    let mut seen: HashSet<BTreeSet<Word>> = HashSet::new();
    let mut found = Vec::new();
    let start = BTreeSet::from([Word::identity()]);
    seen.insert(start.clone());
    let mut stack = vec![start];
    while let Some(set) = stack.pop() {
        if set.len() == size {
            if generates(set.iter().filter(|w| !w.is_identity()), rank) {
                found.push(set);
            }
            continue;
        }
        let mut frontier = BTreeSet::new();
        for v in &set {
            for l in Letter::all(rank) {
                let n = step(x, v, l, Side::Left);
                if !set.contains(&n) {
                    frontier.insert(n);
                }
            }
        }
        for n in frontier {
            // every candidate examined counts against the budget
            if *budget == 0 {
                return Err(Error::LimitExceeded("distance enumeration budget exhausted".into()));
            }
            *budget -= 1;
            let Some(c) = closer.close(&n) else { continue };
            let mut grown = set.clone();
            grown.extend(c.iter().cloned());
            if grown.len() > size || seen.contains(&grown) {
                continue;
            }
            seen.insert(grown.clone());
            stack.push(grown);
        }
    }
    Ok(found)
}

/// The distance between two bases with a witnessing translator.
pub fn distance(x: &Automorphism, y: &Automorphism, limits: &DistanceLimits) -> Result<DistanceReport> {
    if x.rank() != y.rank() {
        return Err(Error::RankMismatch { expected: x.rank(), found: y.rank() });
    }
    let rank = x.rank();
    let krstic = krstic_translator(x, y);
    let cap = limits.cap.unwrap_or(krstic.len());
    let mut budget = limits.max_states;
    // Ties are broken on the sorted list of elements written in Y-coordinates.
    let witness_key = |s: &BTreeSet<Word>| {
        let mut v: Vec<Word> = s.iter().map(|w| y.coordinates(w)).collect();
        v.sort();
        v
    };

    for size in rank + 1..=cap.min(krstic.len()) {
        let found = translators_of_size(x, y, size, &mut budget)?;
        if found.is_empty() {
            continue;
        }
        let kappa = size - 1;
        let best = if kappa > rank {
            found.into_iter().min_by_key(witness_key).map(|s| (kappa, s))
        } else {
            found
                .into_iter()
                .map(|s| {
                    let vs = VertexSet(s);
                    (valence_ge3(x, y, &vs).len(), vs.0)
                })
                .min_by(|a, b| a.0.cmp(&b.0).then_with(|| witness_key(&a.1).cmp(&witness_key(&b.1))))
        };
        let (d, set) = best.expect("nonempty");
        return Ok(DistanceReport { d, kappa, witness: VertexSet(set), exact: true });
    }
    // Only reachable when a cap below Krstić's size found nothing.
    let kappa = krstic.len() - 1;
    let d = if kappa > rank { kappa } else { valence_ge3(x, y, &krstic).len() };
    let exact = cap >= krstic.len();
    Ok(DistanceReport { d, kappa, witness: krstic, exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::tests::w;

    fn aut(images: &[&str]) -> Automorphism {
        Automorphism::parse(images).unwrap()
    }

    fn vs(tokens: &[&str]) -> VertexSet {
        VertexSet::parse(tokens, 26).unwrap()
    }

    #[test]
    fn edge_set_examples() {
        let id = Automorphism::identity(2);
        let left: BTreeSet<Word> = edge_sets(&id, &Word::identity(), Side::Left).into_values().collect();
        assert_eq!(left, vs(&["a", "A", "b", "B"]).as_set() - &BTreeSet::from([Word::identity()]));
        let y = aut(&["ab", "b"]);
        let right: BTreeSet<Word> = edge_sets(&y, &Word::identity(), Side::Right).into_values().collect();
        assert_eq!(right, [w("ab"), w("BA"), w("b"), w("B")].into_iter().collect());
        let left: BTreeSet<Word> = edge_sets(&id, &w("a"), Side::Left).into_values().collect();
        assert_eq!(left, [w("aa"), w(""), w("ba"), w("Ba")].into_iter().collect());
    }

    #[test]
    fn closure_examples() {
        let id = Automorphism::identity(2);
        let star = vs(&["a", "A", "b", "B"]);
        assert_eq!(tree_closure(&id, &star, Side::Left), star);
        assert_eq!(tree_closure(&id, &vs(&["ab"]), Side::Left), vs(&["b", "ab"]));
        assert_eq!(tree_closure(&id, &vs(&["ab"]), Side::Right), vs(&["a", "ab"]));
        assert_eq!(tree_closure(&aut(&["ab", "b"]), &VertexSet::identity(), Side::Left), VertexSet::identity());
    }

    #[test]
    fn component_examples() {
        let id = Automorphism::identity(2);
        assert_eq!(one_component(&id, &vs(&["a", "bb"]), Side::Right), vs(&["a"]));
        let star = vs(&["a", "A", "b", "B"]);
        assert_eq!(one_component(&id, &star, Side::Right), star);
        assert_eq!(one_component(&id, &vs(&["ab", "b"]), Side::Left), vs(&["b", "ab"]));
        assert_eq!(one_component(&id, &vs(&["ab", "b"]), Side::Right), vs(&["b"]));
    }

    #[test]
    fn krstic_examples() {
        let id = Automorphism::identity(2);
        assert_eq!(krstic_translator(&id, &id), vs(&["a", "A", "b", "B"]));
        let y = aut(&["ab", "b"]);
        let k = krstic_translator(&id, &y);
        assert!(vs(&["ab", "BA", "b", "B"]).is_subset(&k));
        assert!(is_translator(&id, &y, &k));
        assert_eq!(k, vs(&["b", "A", "B", "ab", "BA"]));
        let one = Automorphism::identity(1);
        assert_eq!(krstic_translator(&one, &one), vs(&["a", "A"]));
    }

    #[test]
    fn graph_examples() {
        let id = Automorphism::identity(2);
        let g = build_gersten_graph(&id, &aut(&["ab", "b"]), &VertexSet::identity());
        assert!(g.x_edges.is_empty() && g.y_edges.is_empty());

        let g = build_gersten_graph(&id, &id, &vs(&["a", "b"]));
        let a = Letter::generator(1);
        let b = Letter::generator(2);
        assert_eq!(g.x_edges, BTreeSet::from([(a, w("")), (b, w(""))]));
        assert_eq!(g.y_edges, BTreeSet::from([(w(""), a), (w(""), b)]));

        let y = aut(&["ab", "b"]);
        let g = build_gersten_graph(&id, &y, &vs(&["b", "ab"]));
        assert_eq!(g.x_edges, BTreeSet::from([(b, w("")), (a, w("b"))]));
        assert_eq!(g.y_edges, BTreeSet::from([(w(""), a), (w(""), b)]));
        assert_eq!(g.valence(&w("b")), 3);
        let dot = g.to_dot();
        assert!(dot.contains("\"b\" -> \"ab\" [label=\"x1\"]"));
        assert!(dot.contains("\"1\" -> \"ab\" [label=\"y1\"]"));
    }

    #[test]
    fn translator_examples() {
        let id = Automorphism::identity(2);
        assert!(is_translator(&id, &id, &vs(&["a", "A", "b", "B"])));
        assert!(is_translator(&id, &aut(&["ab", "b"]), &vs(&["b", "ab"])));
        assert!(!is_translator(&id, &id, &vs(&["a"])));
    }

    #[test]
    fn valence_examples() {
        let id = Automorphism::identity(2);
        assert!(valence_ge3(&id, &id, &vs(&["a", "b"])).is_empty());
        assert_eq!(valence_ge3(&id, &aut(&["ab", "b"]), &vs(&["b", "ab"])), BTreeSet::from([w("b")]));
        assert!(valence_ge3(&id, &id, &VertexSet::identity()).is_empty());
    }

    #[test]
    fn distance_examples() {
        let lim = DistanceLimits::default();
        let id = Automorphism::identity(2);
        let r = distance(&id, &id, &lim).unwrap();
        assert_eq!((r.d, r.witness), (0, vs(&["a", "b"])));

        let r = distance(&id, &aut(&["ab", "b"]), &lim).unwrap();
        assert_eq!((r.d, r.witness.clone(), r.exact), (1, vs(&["b", "ab"]), true));

        let one = Automorphism::identity(1);
        let r = distance(&one, &one, &lim).unwrap();
        assert_eq!((r.d, r.kappa), (0, 1));
    }

    #[test]
    fn distance_budget_and_cap() {
        let id = Automorphism::identity(2);
        let y = aut(&["abbab", "abb"]);
        let tight = DistanceLimits { cap: None, max_states: 1 };
        assert!(matches!(distance(&id, &y, &tight), Err(Error::LimitExceeded(_))));
        let capped = DistanceLimits { cap: Some(1), max_states: 1000 };
        let r = distance(&id, &y, &capped).unwrap();
        assert!(!r.exact);
        assert!(is_translator(&id, &y, &r.witness));
    }

    #[test]
    fn distance_is_symmetric() {
        let lim = DistanceLimits::default();
        let ts = crate::bases::enumerate_whitehead_transforms(2);
        let id = Automorphism::identity(2);
        for (i, s) in ts.iter().enumerate() {
            let t = &ts[(5 * i + 3) % ts.len()];
            let x = id.compose(&s.to_automorphism().unwrap());
            let y = x.compose(&t.to_automorphism().unwrap()).compose(&ts[i % 4].to_automorphism().unwrap());
            assert_eq!(distance(&x, &y, &lim).unwrap().d, distance(&y, &x, &lim).unwrap().d);
        }
    }
}
