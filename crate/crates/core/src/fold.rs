//! Stallings folding of labelled graphs.
//!
//! A finite set of words is turned into a wedge of loops at a base vertex and
//! folded until no vertex has two outgoing or two incoming edges with the same
//! label. The result is the core graph of the generated subgroup (possibly with
//! a hanging base vertex); the subgroup is the whole group iff the graph is a
//! single vertex carrying one loop per generator.
//!
//! Every edge can carry an auxiliary word ("tag") so that the tag of a closed
//! path at the base is the product of tags along it. Folding keeps closed-path
//! tags unchanged by shifting tags through a vertex potential before two
//! vertices are merged. Tagging each loop of the wedge with a fresh symbol
//! therefore expresses reference generators in terms of the input words.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::words::{Letter, Word};

/// A folded graph with edges labelled by positive generator indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreGraph {
    pub vertex_count: usize,
    pub base: usize,
    /// `(tail, generator index, head)`.
    pub edges: BTreeSet<(usize, u32, usize)>,
}

impl CoreGraph {
    /// One vertex carrying exactly one loop per generator `1..=rank`.
    pub fn is_rose(&self, rank: usize) -> bool {
        self.vertex_count == 1
            && self.edges.len() == rank
            && self.edges.iter().all(|&(_, l, _)| (l as usize) <= rank)
    }

    /// Folds this graph again; a folded graph is returned unchanged.
    pub fn refold(&self) -> CoreGraph {
        let mut f = Folder::new(self.vertex_count, self.base);
        for &(u, l, v) in &self.edges {
            f.add_edge(u, l, v, Word::identity());
        }
        f.run();
        f.finish().0
    }
}

#[derive(Clone, Debug)]
struct Edge {
    from: usize,
    to: usize,
    label: u32,
    tag: Word,
}

struct Folder {
    vertex_count: usize,
    base: usize,
    edges: Vec<Option<Edge>>,
}

impl Folder {
    fn new(vertex_count: usize, base: usize) -> Self {
        Folder { vertex_count, base, edges: Vec::new() }
    }

    fn fresh_vertex(&mut self) -> usize {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    fn add_edge(&mut self, from: usize, label: u32, to: usize, tag: Word) {
        self.edges.push(Some(Edge { from, to, label, tag }));
    }

    /// Adds a loop at the base reading `w`, tagged with `tag` on its first edge.
    fn add_loop(&mut self, w: &Word, tag: Word) {
        let n = w.len();
        let mut tag = Some(tag);
        let mut at = self.base;
        for (k, &l) in w.letters().iter().enumerate() {
            let next = if k + 1 == n { self.base } else { self.fresh_vertex() };
            let t = tag.take().unwrap_or_default();
            if l.is_inverse() {
                self.add_edge(next, l.index(), at, t.inverse());
            } else {
                self.add_edge(at, l.index(), next, t);
            }
            at = next;
        }
    }

    /// Multiplies the potential of `w` by `c`.
    fn shift(&mut self, w: usize, c: &Word) {
        let c_inv = c.inverse();
        for e in self.edges.iter_mut().flatten() {
            if e.to == w {
                e.tag = &e.tag * c;
            }
            if e.from == w {
                e.tag = &c_inv * &e.tag;
            }
        }
    }

    fn rename(&mut self, from: usize, to: usize) {
        for e in self.edges.iter_mut().flatten() {
            if e.from == from {
                e.from = to;
            }
            if e.to == from {
                e.to = to;
            }
        }
    }

    /// Finds two alive edges that must be identified.
    fn find_fold(&self) -> Option<(usize, usize, bool)> {
        let mut out: HashMap<(usize, u32), usize> = HashMap::new();
        let mut inc: HashMap<(usize, u32), usize> = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            let Some(e) = e else { continue };
            if let Some(&j) = out.get(&(e.from, e.label)) {
                return Some((j, i, true));
            }
            if let Some(&j) = inc.get(&(e.to, e.label)) {
                return Some((j, i, false));
            }
            out.insert((e.from, e.label), i);
            inc.insert((e.to, e.label), i);
        }
        None
    }

    fn run(&mut self) {
        while let Some((keep, drop, outgoing)) = self.find_fold() {
            let e1 = self.edges[keep].clone().unwrap();
            let e2 = self.edges[drop].clone().unwrap();
            let (v1, v2) = if outgoing { (e1.to, e2.to) } else { (e1.from, e2.from) };
            if v1 != v2 {
                // Never move the base: shift whichever endpoint is not the base.
                let (stay, moved, moved_tag, stay_tag) = if v2 == self.base {
                    (v2, v1, &e1.tag, &e2.tag)
                } else {
                    (v1, v2, &e2.tag, &e1.tag)
                };
                let c = if outgoing {
                    &moved_tag.inverse() * stay_tag
                } else {
                    moved_tag * &stay_tag.inverse()
                };
                self.shift(moved, &c);
                self.rename(moved, stay);
            }
            self.edges[drop] = None;
        }
    }

    /// Renumbers reachable vertices from the base in a canonical order.
    fn finish(self) -> (CoreGraph, Vec<Edge>) {
        let alive: Vec<Edge> = self.edges.into_iter().flatten().collect();
        let mut adj: HashMap<usize, Vec<(u32, bool, usize)>> = HashMap::new();
        for e in &alive {
            adj.entry(e.from).or_default().push((e.label, false, e.to));
            adj.entry(e.to).or_default().push((e.label, true, e.from));
        }
        for list in adj.values_mut() {
            list.sort();
        }
        let mut number: HashMap<usize, usize> = HashMap::new();
        number.insert(self.base, 0);
        let mut queue = VecDeque::from([self.base]);
        while let Some(v) = queue.pop_front() {
            for &(_, _, w) in adj.get(&v).map(|l| l.as_slice()).unwrap_or(&[]) {
                if !number.contains_key(&w) {
                    number.insert(w, number.len());
                    queue.push_back(w);
                }
            }
        }
        let edges = alive
            .iter()
            .map(|e| (number[&e.from], e.label, number[&e.to]))
            .collect();
        let graph = CoreGraph { vertex_count: number.len(), base: 0, edges };
        let renamed = alive
            .into_iter()
            .map(|e| Edge { from: number[&e.from], to: number[&e.to], ..e })
            .collect();
        (graph, renamed)
    }
}

/// Folded graph of the subgroup generated by `words`.
pub fn fold<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> CoreGraph {
    let mut f = Folder::new(1, 0);
    for w in words {
        f.add_loop(w, Word::identity());
    }
    f.run();
    f.finish().0
}

/// `true` iff `words` generate the free group of the given rank.
pub fn generates<'a, I: IntoIterator<Item = &'a Word>>(words: I, rank: usize) -> bool {
    fold(words).is_rose(rank)
}

/// Expresses every reference generator as a word in `words`, whose `j`-th entry
/// is written as generator `j + 1`. Returns `None` unless the words generate.
pub fn express_generators(words: &[Word], rank: usize) -> Option<Vec<Word>> {
    let mut f = Folder::new(1, 0);
    for (j, w) in words.iter().enumerate() {
        f.add_loop(w, Word::letter(Letter::generator(j as u32 + 1)));
    }
    f.run();
    let (graph, edges) = f.finish();
    if !graph.is_rose(rank) {
        return None;
    }
    let mut out = vec![Word::identity(); rank];
    for e in edges {
        out[e.label as usize - 1] = e.tag;
    }
    Some(out)
}
