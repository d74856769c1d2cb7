//! Closed paths in the Gersten graph that represent a word list, and the
//! number of times those paths traverse each edge.
//!
//! Every element `g` is first written as a concatenation of basic loops, one
//! per letter of its coordinates in `X`; each loop crosses exactly one x-edge.
//! A stack reducer then removes backtracks and detours: a y-step, a run of
//! x-steps and the inverse y-step are replaced by the same x-steps one level
//! lower in the right tree, and symmetrically with the roles of the two trees
//! swapped. Both labels end up reduced; cyclic entries are also rotated until
//! both labels are cyclically reduced.

use std::collections::BTreeMap;

use crate::bases::Automorphism;
use crate::error::{Error, Result};
use crate::gersten::{is_translator, step, Side, VertexSet};
use crate::length::WordSet;
use crate::words::{Entry, Letter, Word};

/// One edge traversal. `X` goes `from → x·from`, `Y` goes `from → from·y`;
/// the letters are basis letters of `X` and `Y` respectively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathStep {
    X { letter: Letter, from: Word, to: Word },
    Y { from: Word, letter: Letter, to: Word },
}

impl PathStep {
    fn x(x: &Automorphism, letter: Letter, from: Word) -> Self {
        let to = step(x, &from, letter, Side::Left);
        PathStep::X { letter, from, to }
    }

    fn y(y: &Automorphism, from: Word, letter: Letter) -> Self {
        let to = step(y, &from, letter, Side::Right);
        PathStep::Y { from, letter, to }
    }

    pub fn from(&self) -> &Word {
        match self {
            PathStep::X { from, .. } | PathStep::Y { from, .. } => from,
        }
    }

    pub fn to(&self) -> &Word {
        match self {
            PathStep::X { to, .. } | PathStep::Y { to, .. } => to,
        }
    }

    pub fn letter(&self) -> Letter {
        match self {
            PathStep::X { letter, .. } | PathStep::Y { letter, .. } => *letter,
        }
    }

    pub fn is_x(&self) -> bool {
        matches!(self, PathStep::X { .. })
    }

    /// The same edge walked the other way.
    pub fn reversed(&self) -> PathStep {
        match self {
            PathStep::X { letter, from, to } => {
                PathStep::X { letter: letter.inverse(), from: to.clone(), to: from.clone() }
            }
            PathStep::Y { from, letter, to } => {
                PathStep::Y { from: to.clone(), letter: letter.inverse(), to: from.clone() }
            }
        }
    }

    /// The unoriented edge this step traverses.
    pub fn edge(&self) -> EdgeKey {
        match self {
            PathStep::X { letter, from, to } => {
                let tail = if letter.is_inverse() { to } else { from };
                EdgeKey::X { index: letter.index(), tail: tail.clone() }
            }
            PathStep::Y { from, letter, to } => {
                let tail = if letter.is_inverse() { to } else { from };
                EdgeKey::Y { tail: tail.clone(), index: letter.index() }
            }
        }
    }

    /// Right-multiplies both endpoints by `g`.
    fn shifted_right(&self, g: &Word) -> PathStep {
        match self {
            PathStep::X { letter, from, to } => PathStep::X { letter: *letter, from: from * g, to: to * g },
            PathStep::Y { .. } => unreachable!("only x-runs move along the right tree"),
        }
    }

    /// Left-multiplies both endpoints by `g`.
    fn shifted_left(&self, g: &Word) -> PathStep {
        match self {
            PathStep::Y { from, letter, to } => PathStep::Y { from: g * from, letter: *letter, to: g * to },
            PathStep::X { .. } => unreachable!("only y-runs move along the left tree"),
        }
    }
}

/// An unoriented edge of the Gersten graph, written with a positive letter:
/// `X` is `tail → x·tail` and `Y` is `tail → tail·y`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKey {
    X { index: u32, tail: Word },
    Y { tail: Word, index: u32 },
}

impl EdgeKey {
    /// The x-edge crossed by `v → x·v`, whatever the sign of `x`.
    pub fn x_edge(x: &Automorphism, letter: Letter, v: &Word) -> EdgeKey {
        PathStep::x(x, letter, v.clone()).edge()
    }

    /// The y-edge crossed by `v → v·y`, whatever the sign of `y`.
    pub fn y_edge(y: &Automorphism, v: &Word, letter: Letter) -> EdgeKey {
        PathStep::y(y, v.clone(), letter).edge()
    }
}

/// A path in the Gersten graph starting at `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedPath {
    pub base: Word,
    pub steps: Vec<PathStep>,
}

impl DecoratedPath {
    pub fn end(&self) -> &Word {
        self.steps.last().map(PathStep::to).unwrap_or(&self.base)
    }

    pub fn is_closed(&self) -> bool {
        self.end() == &self.base
    }

    /// Letters of the x-steps, last step first.
    pub fn left_label(&self) -> Vec<Letter> {
        self.steps.iter().rev().filter(|s| s.is_x()).map(PathStep::letter).collect()
    }

    /// Letters of the y-steps in order.
    pub fn right_label(&self) -> Vec<Letter> {
        self.steps.iter().filter(|s| !s.is_x()).map(PathStep::letter).collect()
    }

    /// The left label evaluated in reference coordinates.
    pub fn left_element(&self, x: &Automorphism) -> Word {
        x.apply(&Word::reduce(self.left_label()))
    }

    /// The right label evaluated in reference coordinates.
    pub fn right_element(&self, y: &Automorphism) -> Word {
        y.apply(&Word::reduce(self.right_label()))
    }

    /// Every step is an edge of the trees and the steps are chained.
    pub fn is_consistent(&self, x: &Automorphism, y: &Automorphism) -> bool {
        let mut at = &self.base;
        for s in &self.steps {
            let ok = match s {
                PathStep::X { letter, from, to } => from == at && *to == step(x, from, *letter, Side::Left),
                PathStep::Y { from, letter, to } => from == at && *to == step(y, from, *letter, Side::Right),
            };
            if !ok {
                return false;
            }
            at = s.to();
        }
        true
    }
}

/// Traversal counts per unoriented edge.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraversalCounts {
    pub counts: BTreeMap<EdgeKey, usize>,
}

impl TraversalCounts {
    pub fn get(&self, e: &EdgeKey) -> usize {
        self.counts.get(e).copied().unwrap_or(0)
    }

    /// Total over x-edges of generator `index`.
    pub fn x_marginal(&self, index: u32) -> usize {
        self.counts
            .iter()
            .filter(|(k, _)| matches!(k, EdgeKey::X { index: i, .. } if *i == index))
            .map(|(_, c)| c)
            .sum()
    }

    /// Total over y-edges of generator `index`.
    pub fn y_marginal(&self, index: u32) -> usize {
        self.counts
            .iter()
            .filter(|(k, _)| matches!(k, EdgeKey::Y { index: i, .. } if *i == index))
            .map(|(_, c)| c)
            .sum()
    }

    fn tally(&mut self, p: &DecoratedPath) {
        for s in &p.steps {
            *self.counts.entry(s.edge()).or_insert(0) += 1;
        }
    }
}

struct Builder<'a> {
    x: &'a Automorphism,
    y: &'a Automorphism,
    /// Basic loop for each positive generator of `X`.
    loops: Vec<Vec<PathStep>>,
}

impl<'a> Builder<'a> {
    fn new(x: &'a Automorphism, y: &'a Automorphism, v: &VertexSet) -> Self {
        let loops = Letter::all(x.rank())
            .filter(|l| !l.is_inverse())
            .map(|l| {
                let vx = v
                    .iter()
                    .find(|w| v.contains(&step(x, w, l, Side::Left)))
                    .expect("translators meet every x-edge set")
                    .clone();
                let top = step(x, &vx, l, Side::Left);
                let mut steps = right_path(y, &Word::identity(), &top);
                steps.push(PathStep::x(x, l.inverse(), top));
                steps.extend(right_path(y, &vx, &Word::identity()));
                steps
            })
            .collect();
        Builder { x, y, loops }
    }

    /// Pushes a step, cancelling against the stack where a label allows it.
    fn push(&self, stack: &mut Vec<PathStep>, s: PathStep) {
        let same_kind = stack.iter().rposition(|t| t.is_x() == s.is_x());
        if let Some(j) = same_kind {
            if stack[j].letter() == s.letter().inverse() {
                let run: Vec<PathStep> = stack.drain(j + 1..).collect();
                let removed = stack.pop().expect("index is in range");
                if s.is_x() {
                    // x, y-run, x⁻¹: slide the y-run down the left tree
                    let g = self.x.image_of(removed.letter()).inverse();
                    for t in run {
                        self.push(stack, t.shifted_left(&g));
                    }
                } else {
                    // y, x-run, y⁻¹: slide the x-run down the right tree
                    let g = self.y.image_of(removed.letter()).inverse();
                    for t in run {
                        self.push(stack, t.shifted_right(&g));
                    }
                }
                return;
            }
        }
        stack.push(s);
    }

    fn reduce<I: IntoIterator<Item = PathStep>>(&self, steps: I) -> Vec<PathStep> {
        let mut stack = Vec::new();
        for s in steps {
            self.push(&mut stack, s);
        }
        stack
    }

    /// The reduced closed path at 1 whose right label spells `g`.
    fn straight(&self, g: &Word) -> Vec<PathStep> {
        let mut stack = Vec::new();
        for l in self.x.coordinates(g).letters() {
            let basic = &self.loops[l.slot()];
            if l.is_inverse() {
                for s in basic.iter().rev() {
                    self.push(&mut stack, s.reversed());
                }
            } else {
                for s in basic {
                    self.push(&mut stack, s.clone());
                }
            }
        }
        stack
    }

    /// Rotates and reduces until both labels are cyclically reduced.
    fn cyclic(&self, mut steps: Vec<PathStep>) -> Vec<PathStep> {
        loop {
            let (Some(first), Some(last)) = (steps.first(), steps.last()) else { return steps };
            let cut = if steps.len() >= 2 && *first == last.reversed() {
                Some(0)
            } else {
                [true, false].into_iter().find_map(|kind| {
                    let i = steps.iter().position(|s| s.is_x() == kind)?;
                    let j = steps.iter().rposition(|s| s.is_x() == kind)?;
                    (i != j && steps[i].letter() == steps[j].letter().inverse()).then_some(i)
                })
            };
            let Some(cut) = cut else { return steps };
            let tail = steps.split_off(cut + 1);
            steps = self.reduce(tail.into_iter().chain(steps));
        }
    }
}

/// The geodesic steps from `from` to `to` in the right tree.
fn right_path(y: &Automorphism, from: &Word, to: &Word) -> Vec<PathStep> {
    let coords = y.coordinates(&(&from.inverse() * to));
    let mut at = from.clone();
    coords
        .letters()
        .iter()
        .map(|&l| {
            let s = PathStep::y(y, at.clone(), l);
            at = s.to().clone();
            s
        })
        .collect()
}

/// Chosen representative paths of `r` in the Gersten graph on `v` and their
/// edge traversal counts.
pub fn represent(
    r: &WordSet,
    x: &Automorphism,
    y: &Automorphism,
    v: &VertexSet,
) -> Result<(Vec<DecoratedPath>, TraversalCounts)> {
    r.check_against(x)?;
    r.check_against(y)?;
    if !is_translator(x, y, v) {
        return Err(Error::NotATranslator);
    }
    let builder = Builder::new(x, y, v);
    let mut counts = TraversalCounts::default();
    let mut paths = Vec::with_capacity(r.len());
    for e in &r.entries {
        let straight = builder.straight(e.word());
        let steps = match e {
            Entry::Straight(_) => straight,
            Entry::Cyclic(_) => builder.cyclic(straight),
        };
        let base = steps.first().map(|s| s.from().clone()).unwrap_or_default();
        let p = DecoratedPath { base, steps };
        counts.tally(&p);
        paths.push(p);
    }
    Ok((paths, counts))
}
