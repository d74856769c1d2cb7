//! Peak reduction between two local-minimum bases.
//!
//! Given local minima `X` and `Y` of the length functional that are not equal
//! up to signed permutation, a translator realizing their distance is cut
//! along one x-edge; the two sides decide a Whitehead transform `Y'` of `Y`
//! and a translator for `(X, Y')` that certifies a strictly smaller distance.
//! Two regimes exist: translators of minimal size (case 1) and larger ones
//! (case 2). Every conclusion the construction guarantees is checked, and a
//! failed check is reported as `TheoremViolation`.

use std::collections::{BTreeMap, BTreeSet};

use crate::bases::{signed_permutation_match, Automorphism, SignedPermutation, WhiteheadTransform};
use crate::error::{Error, Result};
use crate::gersten::{
    build_gersten_graph, distance, geodesic, is_translator, step, valence_ge3, DistanceLimits, Side, VertexSet,
};
use crate::length::{is_local_minimum, measure, WordSet};
use crate::matching::least_perfect_matching;
use crate::paths::{represent, EdgeKey, TraversalCounts};
use crate::words::{Letter, Word};

/// The two sides of a translator cut along one x-edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    /// Side containing 1.
    pub near: BTreeSet<Word>,
    pub far: BTreeSet<Word>,
    /// The cut edge `v → x·v` as `(x, v)`.
    pub edge: (Letter, Word),
}

impl Partition {
    /// 1 on the far side, 0 on the near side.
    pub fn chi(&self, v: &Word) -> u8 {
        u8::from(self.far.contains(v))
    }
}

/// Splits `v` by deleting the x-edge `v* → x*·v*` from its left-tree graph.
pub fn partition_chi(x: &Automorphism, v: &VertexSet, edge: (Letter, &Word)) -> Result<Partition> {
    let (xs, vs) = edge;
    let head = step(x, vs, xs, Side::Left);
    if !v.contains(vs) || !v.contains(&head) {
        return Err(Error::EdgeAbsent);
    }
    let near = component(x, Side::Left, v.as_set(), &Word::identity(), (vs, &head));
    let far = v.as_set().difference(&near).cloned().collect();
    Ok(Partition { near, far, edge: (xs, vs.clone()) })
}

/// 1 iff the left-tree geodesic from 1 to `w` crosses the edge `v* → x*·v*`.
pub fn chi_f(x: &Automorphism, edge: (Letter, &Word), w: &Word) -> u8 {
    let (xs, vs) = edge;
    let head = step(x, vs, xs, Side::Left);
    let path = geodesic(x, w, Side::Left);
    let crosses = path
        .windows(2)
        .any(|p| (&p[0] == vs && p[1] == head) || (p[0] == head && &p[1] == vs));
    u8::from(crosses)
}

/// Vertices reachable from `start` inside `set` without crossing `banned`.
fn component(
    basis: &Automorphism,
    side: Side,
    set: &BTreeSet<Word>,
    start: &Word,
    banned: (&Word, &Word),
) -> BTreeSet<Word> {
    let is_banned = |a: &Word, b: &Word| (a == banned.0 && b == banned.1) || (a == banned.1 && b == banned.0);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut stack = vec![start.clone()];
    while let Some(u) = stack.pop() {
        for l in Letter::all(basis.rank()) {
            let n = step(basis, &u, l, side);
            if set.contains(&n) && !is_banned(&u, &n) && seen.insert(n.clone()) {
                stack.push(n);
            }
        }
    }
    seen
}

/// `{v ∈ V : x·v ∈ V}`.
pub fn iota_x(x: &Automorphism, v: &VertexSet, l: Letter) -> BTreeSet<Word> {
    v.iter().filter(|w| v.contains(&step(x, w, l, Side::Left))).cloned().collect()
}

/// `{v ∈ V : v·y ∈ V}`.
pub fn iota_y(y: &Automorphism, v: &VertexSet, l: Letter) -> BTreeSet<Word> {
    v.iter().filter(|w| v.contains(&step(y, w, l, Side::Right))).cloned().collect()
}

/// A cut edge together with a `Y` letter, and everything derived from them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseContext {
    /// `(v*, x*, y*)` with `x*` an `X` letter and `y*` a `Y` letter.
    pub triple: (Word, Letter, Letter),
    pub partition: Partition,
    /// Letters other than `y*` on whose initial set `χ` is constant.
    pub one_part: BTreeSet<Letter>,
    /// Letters other than `y*` on whose initial set `χ` takes both values.
    pub two_part: BTreeSet<Letter>,
    /// `χ̂` on the initial set of every `Y` letter.
    pub chi_hat: BTreeMap<Letter, u8>,
    /// The letter of `{y*, y*⁻¹}` with `χ̂ = 0`.
    pub y_dag: Letter,
}

impl CaseContext {
    /// `ξ(v) = v·y†^(-χ(v))`.
    pub fn xi(&self, y: &Automorphism, v: &Word) -> Word {
        if self.partition.chi(v) == 1 {
            v * &y.image_of(self.y_dag).inverse()
        } else {
            v.clone()
        }
    }
}

pub fn build_case_context(
    x: &Automorphism,
    y: &Automorphism,
    v: &VertexSet,
    triple: (Word, Letter, Letter),
) -> Result<CaseContext> {
    let (vs, xs, ys) = triple.clone();
    if x.rank() != y.rank() {
        return Err(Error::RankMismatch { expected: x.rank(), found: y.rank() });
    }
    if !is_translator(x, y, v) {
        return Err(Error::PreconditionViolated("vertex set is not a translator".into()));
    }
    if !v.contains(&step(x, &vs, xs, Side::Left)) || !v.contains(&vs) {
        return Err(Error::PreconditionViolated("v* must lie in the initial set of x*".into()));
    }
    let partition = partition_chi(x, v, (xs, &vs))?;
    let mut one_part = BTreeSet::new();
    let mut two_part = BTreeSet::new();
    let mut chi_hat = BTreeMap::new();
    for l in Letter::all(y.rank()) {
        let initial = iota_y(y, v, l);
        // the initial set is nonempty and spans a subtree of the left tree
        let start = initial.iter().next().ok_or_else(|| theorem("empty initial set in a translator"))?;
        let none = Word::identity();
        if component(x, Side::Left, &initial, start, (&none, &none)).len() != initial.len() {
            return Err(theorem("initial set is not a subtree of the left tree"));
        }
        if l == ys {
            continue;
        }
        let values: BTreeSet<u8> = initial.iter().map(|w| partition.chi(w)).collect();
        if values.len() == 1 {
            one_part.insert(l);
            chi_hat.insert(l, *values.iter().next().expect("one value"));
        } else {
            two_part.insert(l);
            let probe = &vs * &y.image_of(l.inverse());
            chi_hat.insert(l, chi_f(x, (xs, &vs), &probe));
        }
    }
    let opposite = chi_hat[&ys.inverse()];
    chi_hat.insert(ys, 1 - opposite);
    let y_dag = if chi_hat[&ys] == 0 { ys } else { ys.inverse() };
    Ok(CaseContext { triple, partition, one_part, two_part, chi_hat, y_dag })
}

fn theorem(msg: &str) -> Error {
    Error::TheoremViolation(msg.into())
}

/// The Whitehead transform decided by `χ̂` with multiplier `y†`, and the
/// transformed basis `Y' = Y∘t`.
pub fn derive_transform(ctx: &CaseContext, y: &Automorphism) -> Result<(Letter, WhiteheadTransform, Automorphism)> {
    let rank = y.rank();
    if rank < 2 {
        return Err(Error::PreconditionViolated("rank one has no Whitehead transforms".into()));
    }
    let choices = (0..rank)
        .map(|i| {
            let g = Letter::generator(i as u32 + 1);
            if i == ctx.y_dag.slot() {
                (false, false)
            } else {
                (ctx.chi_hat[&g] == 1, ctx.chi_hat[&g.inverse()] == 1)
            }
        })
        .collect();
    let t = WhiteheadTransform { multiplier: ctx.y_dag, choices };
    let y_prime = y.compose(&t.to_automorphism()?);
    Ok((ctx.y_dag, t, y_prime))
}

/// Outcome of one peak-reduction step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionResult {
    /// `Y = X∘π` for this signed permutation.
    Equal(SignedPermutation),
    Step(PeakStep),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeakStep {
    /// Multiplier of the transform, as a `Y` letter.
    pub y_dag: Letter,
    pub transform: WhiteheadTransform,
    pub y_prime: Automorphism,
    pub v_prime: VertexSet,
    pub case: u8,
}

fn check_inputs(x: &Automorphism, y: &Automorphism, r: &WordSet, v: &VertexSet) -> Result<()> {
    r.check_against(x)?;
    r.check_against(y)?;
    if !is_translator(x, y, v) {
        return Err(Error::PreconditionViolated("vertex set is not a translator".into()));
    }
    if !is_local_minimum(r, x)? || !is_local_minimum(r, y)? {
        return Err(Error::PreconditionViolated("both bases must be local minima".into()));
    }
    Ok(())
}

/// Total length is unchanged and so is every letter count except at `y†`.
fn check_lengths(r: &WordSet, y: &Automorphism, y_prime: &Automorphism, y_dag: Letter) -> Result<()> {
    let before = measure(r, y)?;
    let after = measure(r, y_prime)?;
    for i in 0..y.rank() {
        if i != y_dag.slot() && before.per_letter[i] != after.per_letter[i] {
            return Err(theorem("a letter count changed away from the multiplier"));
        }
    }
    if before.total != after.total {
        return Err(theorem("length changed under the constructed transform"));
    }
    Ok(())
}

/// The unique `w ∈ V` with `x·w ∈ V`, when the translator is minimal.
fn unique_iota(x: &Automorphism, v: &VertexSet, l: Letter) -> Result<Word> {
    let set = iota_x(x, v, l);
    if set.len() != 1 {
        return Err(theorem("a minimal translator has one edge per letter"));
    }
    Ok(set.into_iter().next().expect("one element"))
}

/// The step for translators with exactly `rank` non-identity elements.
pub fn case1_step(x: &Automorphism, y: &Automorphism, r: &WordSet, v: &VertexSet) -> Result<ReductionResult> {
    check_inputs(x, y, r, v)?;
    let rank = x.rank();
    if v.len() != rank + 1 {
        return Err(Error::PreconditionViolated("translator is not of minimal size".into()));
    }
    let graph = build_gersten_graph(x, y, v);
    let at_one: Vec<Letter> = Letter::all(rank).filter(|l| v.contains(&y.image_of(*l))).collect();
    let Some(&y_dag) = at_one.iter().find(|l| graph.valence(&y.image_of(**l)) >= 3) else {
        return signed_permutation_match(x, y)
            .map(ReductionResult::Equal)
            .ok_or_else(|| theorem("valence-two star without a signed permutation"));
    };
    let y_star = y_dag.positive();

    // abelianized coordinates of Y in X and a transversal of nonzero entries
    let allowed: Vec<Vec<bool>> = (1..=rank as u32)
        .map(|i| {
            (1..=rank as u32)
                .map(|j| x.coordinates(&y.image_of(Letter::generator(j))).exponent_sum(i) != 0)
                .collect()
        })
        .collect();
    let psi = least_perfect_matching(&allowed).ok_or_else(|| theorem("no transversal of nonzero entries"))?;
    let row = psi.iter().position(|&c| c == y_star.slot()).expect("a perfect matching is a bijection");
    let x_star = Letter::generator(row as u32 + 1);
    let v_star = unique_iota(x, v, x_star)?;

    let ctx = build_case_context(x, y, v, (v_star.clone(), x_star, y_star))?;
    if ctx.y_dag != y_dag {
        return Err(theorem("context disagrees on the multiplier"));
    }
    let (y_dag, transform, y_prime) = derive_transform(&ctx, y)?;
    check_lengths(r, y, &y_prime, y_dag)?;

    let x_dag = if ctx.partition.chi(&v_star) == 0 { x_star } else { x_star.inverse() };
    let new_vertex = step(x, &unique_iota(x, v, x_dag)?, x_dag, Side::Left);
    let v_prime: VertexSet = v.iter().map(|w| ctx.xi(y, w)).chain([new_vertex]).collect();
    if v_prime.len() != v.len() || !is_translator(x, &y_prime, &v_prime) {
        return Err(theorem("the new vertex set is not a translator of the same size"));
    }
    if valence_ge3(x, &y_prime, &v_prime).len() >= graph.valence_ge3().len() {
        return Err(theorem("high-valence count did not drop"));
    }
    Ok(ReductionResult::Step(PeakStep { y_dag, transform, y_prime, v_prime, case: 1 }))
}

/// Vertex sets split by a second-stage triple and their traversal totals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frontier {
    pub proper: BTreeSet<Word>,
    pub west: BTreeSet<Word>,
    pub east: BTreeSet<Word>,
    pub south: BTreeSet<Word>,
    pub north: BTreeSet<Word>,
    pub h_proper: usize,
    pub h_west: usize,
    pub h_east: usize,
    pub h_south: usize,
    pub h_north: usize,
}

/// The least `(v*, x*, y*)` with `v*` and `x*·v*` both in the initial set of
/// `y*`, preferring `y*`, then `x*`, in letter order.
pub fn second_stage_triple(x: &Automorphism, y: &Automorphism, v: &VertexSet) -> Option<(Word, Letter, Letter)> {
    let rank = x.rank();
    Letter::all(rank).find_map(|ys| {
        let initial = iota_y(y, v, ys);
        if initial.len() < 2 {
            return None;
        }
        Letter::all(rank).find_map(|xs| {
            initial
                .iter()
                .find(|w| initial.contains(&step(x, w, xs, Side::Left)))
                .map(|w| (w.clone(), xs, ys))
        })
    })
}

pub fn frontier(
    x: &Automorphism,
    y: &Automorphism,
    v: &VertexSet,
    counts: &TraversalCounts,
    ctx: &CaseContext,
) -> Frontier {
    let (vs, xs, ys) = &ctx.triple;
    let (vs, xs, ys) = (vs, *xs, *ys);
    let x_head = step(x, vs, xs, Side::Left);
    let y_head = step(y, vs, ys, Side::Right);
    let by_y: BTreeSet<Word> = iota_y(y, v, ys);
    let by_x: BTreeSet<Word> = iota_x(x, v, xs);
    let west = component(x, Side::Left, &by_y, vs, (vs, &x_head));
    let east = component(x, Side::Left, &by_y, &x_head, (vs, &x_head));
    let south = component(y, Side::Right, &by_x, vs, (vs, &y_head));
    let north = component(y, Side::Right, &by_x, &y_head, (vs, &y_head));
    let side = ctx.chi_hat[&ys];
    let proper: BTreeSet<Word> = by_y.iter().filter(|w| ctx.partition.chi(w) == side).cloned().collect();
    let over_y = |s: &BTreeSet<Word>| s.iter().map(|w| counts.get(&EdgeKey::y_edge(y, w, ys))).sum();
    let over_x = |s: &BTreeSet<Word>| s.iter().map(|w| counts.get(&EdgeKey::x_edge(x, xs, w))).sum();
    Frontier {
        h_proper: over_y(&proper),
        h_west: over_y(&west),
        h_east: over_y(&east),
        h_south: over_x(&south),
        h_north: over_x(&north),
        proper,
        west,
        east,
        south,
        north,
    }
}

/// The step for translators larger than the minimal size.
pub fn case2_step(x: &Automorphism, y: &Automorphism, r: &WordSet, v: &VertexSet) -> Result<ReductionResult> {
    check_inputs(x, y, r, v)?;
    if v.len() <= x.rank() + 1 {
        return Err(Error::PreconditionViolated("translator is of minimal size".into()));
    }
    let (_, counts) = represent(r, x, y, v)?;
    let hx = measure(r, x)?;
    let (_, x_first, _) = second_stage_triple(x, y, v).ok_or_else(|| theorem("no initial set with an edge"))?;

    // a leaf of the right-tree graph on the initial set of x* carrying at
    // most half of the x*-traversals
    let initial = iota_x(x, v, x_first);
    let budget = hx.of_letter(x_first);
    let neighbours = |w: &Word, set: &BTreeSet<Word>| -> Vec<Letter> {
        Letter::all(y.rank()).filter(|&l| set.contains(&step(y, w, l, Side::Right))).collect()
    };
    let leaf = initial
        .iter()
        .find(|w| neighbours(w, &initial).len() == 1 && 2 * counts.get(&EdgeKey::x_edge(x, x_first, w)) <= budget)
        .ok_or_else(|| theorem("no light leaf"))?
        .clone();
    let cut = partition_chi(x, v, (x_first, &leaf))?;
    let (x_star, v_star) = if cut.chi(&leaf) == 1 {
        (x_first.inverse(), step(x, &leaf, x_first, Side::Left))
    } else {
        (x_first, leaf)
    };
    let y_star = neighbours(&v_star, &iota_x(x, v, x_star))[0];

    let ctx = build_case_context(x, y, v, (v_star.clone(), x_star, y_star))?;
    let x_head = step(x, &v_star, x_star, Side::Left);
    if !ctx.two_part.is_empty() || ctx.partition.chi(&v_star) != 0 || ctx.partition.chi(&x_head) != 1 {
        return Err(theorem("third-stage triple has the wrong shape"));
    }
    let (y_dag, transform, y_prime) = derive_transform(&ctx, y)?;
    check_lengths(r, y, &y_prime, y_dag)?;

    let v_prime: VertexSet = v.iter().map(|w| ctx.xi(y, w)).collect();
    let collision = if y_dag == y_star {
        let top = step(y, &v_star, y_star, Side::Right);
        ctx.xi(y, &top) == v_star
    } else {
        let top = step(y, &x_head, y_star, Side::Right);
        ctx.xi(y, &x_head) == top && ctx.xi(y, &top) == top
    };
    if !collision || v_prime.len() >= v.len() || !is_translator(x, &y_prime, &v_prime) {
        return Err(theorem("the image vertex set is not a smaller translator"));
    }
    Ok(ReductionResult::Step(PeakStep { y_dag, transform, y_prime, v_prime, case: 2 }))
}

/// One peak-reduction step from local minima `X` and `Y`.
pub fn peak_reduce(
    x: &Automorphism,
    y: &Automorphism,
    r: &WordSet,
    limits: &DistanceLimits,
) -> Result<ReductionResult> {
    r.check_against(x)?;
    r.check_against(y)?;
    if !is_local_minimum(r, x)? || !is_local_minimum(r, y)? {
        return Err(Error::NotLocalMinimum);
    }
    if let Some(pi) = signed_permutation_match(x, y) {
        return Ok(ReductionResult::Equal(pi));
    }
    let report = distance(x, y, limits)?;
    if report.kappa <= x.rank() {
        case1_step(x, y, r, &report.witness)
    } else {
        case2_step(x, y, r, &report.witness)
    }
}

/// Repeats peak reduction until the bases agree up to signed permutation.
/// Returns the steps taken and the final permutation.
pub fn peak_reduce_all(
    x: &Automorphism,
    y: &Automorphism,
    r: &WordSet,
    limits: &DistanceLimits,
) -> Result<(Vec<PeakStep>, SignedPermutation)> {
    let mut steps = Vec::new();
    let mut current = y.clone();
    loop {
        match peak_reduce(x, &current, r, limits)? {
            ReductionResult::Equal(pi) => return Ok((steps, pi)),
            ReductionResult::Step(s) => {
                current = s.y_prime.clone();
                steps.push(s);
            }
        }
    }
}
