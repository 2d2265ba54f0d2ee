//! Exact brute-force length spectrum and essential arcs.
//!
//! The search runs best-first over states `(start, vertex, class)` where
//! the class is the homotopy class relative to endpoints of a walk from
//! `start` to `vertex`: a freely reduced word when the group is free, or a
//! homology vector on the torus. States are settled in nondecreasing
//! length, so the first time a closed state reaches a new free homotopy
//! class its length is the minimum of that class.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use serde::Serialize;

use crate::curves::{Arc, ArcEnd, Walk};
use crate::error::{Error, Result};
use crate::homotopy::{arc_is_essential, cyclic_reduce, inverse, least_rotation, GroupPresentation, Word};
use crate::shortest_paths::shortest_path_tree;
use crate::surface::{HalfEdge, Len, Surface};
use crate::Rational;

/// Default limit on the number of settled search states.
pub const DEFAULT_STATE_CAP: usize = 3_000_000;

/// Identifier of an unoriented free homotopy class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ClassKey {
    Free(Word),
    Homology(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumEntry {
    pub key: ClassKey,
    #[serde(skip)]
    pub length: Rational,
    pub units: Len,
    pub walk: Walk,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Class {
    Word(Word),
    Homology(Vec<i64>),
}

struct Search<'a> {
    s: &'a Surface,
    gp: GroupPresentation,
    edge_words: Vec<Word>,
    torus: bool,
    cap: usize,
}

impl<'a> Search<'a> {
    fn new(s: &'a Surface, cap: usize) -> Result<Search<'a>> {
        let torus = !s.has_boundary() && s.genus() == 1;
        if !s.has_boundary() && s.genus() >= 2 {
            return Err(Error::Unsupported("spectra of closed surfaces of genus two or more are not supported".into()));
        }
        let gp = GroupPresentation::new(s);
        let edge_words = (0..s.n_half_edges()).map(|h| gp.half_edge_word(HalfEdge(h))).collect();
        Ok(Search { s, gp, edge_words, torus, cap })
    }

    fn extend(&self, c: &Class, h: HalfEdge) -> Class {
        let w = &self.edge_words[h.0];
        match c {
            Class::Word(cur) => {
                let mut out = cur.clone();
                for &x in w {
                    if out.last() == Some(&-x) {
                        out.pop();
                    } else {
                        out.push(x);
                    }
                }
                Class::Word(out)
            }
            Class::Homology(v) => {
                let mut out = v.clone();
                for &x in w {
                    out[x.unsigned_abs() as usize - 1] += x.signum() as i64;
                }
                Class::Homology(out)
            }
        }
    }

    fn trivial(&self) -> Class {
        if self.torus {
            Class::Homology(vec![0; self.gp.rank()])
        } else {
            Class::Word(Vec::new())
        }
    }

    fn key(&self, c: &Class) -> Option<ClassKey> {
        match c {
            Class::Word(w) => {
                let k = least_rotation(&cyclic_reduce(w));
                if k.is_empty() {
                    return None;
                }
                let inv = least_rotation(&inverse(&k));
                Some(ClassKey::Free(k.min(inv)))
            }
            Class::Homology(v) => {
                if v.iter().all(|&x| x == 0) {
                    return None;
                }
                let neg: Vec<i64> = v.iter().map(|x| -x).collect();
                Some(ClassKey::Homology(v.clone().max(neg)))
            }
        }
    }

    /// Best-first search from the given sources. `visit` is called on
    /// every settled state and returns `false` to stop.
    fn run(&self, sources: &[usize], bound: Len, mut visit: impl FnMut(usize, usize, &Class, Len, &dyn Fn() -> Vec<HalfEdge>) -> bool) -> Result<()> {
        struct Node {
            start: usize,
            v: usize,
            class: Class,
            parent: Option<(usize, HalfEdge)>,
        }
        let mut nodes: Vec<Node> = Vec::new();
        let mut index: HashMap<(usize, usize, Class), usize> = HashMap::new();
        let mut dist: Vec<Len> = Vec::new();
        let mut settled: Vec<bool> = Vec::new();
        let mut heap = BinaryHeap::new();
        for &src in sources {
            let c = self.trivial();
            index.insert((src, src, c.clone()), nodes.len());
            nodes.push(Node { start: src, v: src, class: c, parent: None });
            dist.push(0);
            settled.push(false);
            heap.push(Reverse((0, nodes.len() - 1)));
        }
        let mut n_settled = 0usize;
        while let Some(Reverse((d, id))) = heap.pop() {
            if settled[id] || d > dist[id] {
                continue;
            }
            settled[id] = true;
            n_settled += 1;
            if n_settled > self.cap {
                return Err(Error::ResourceCap(format!("search exceeded {} states", self.cap)));
            }
            let path = || {
                let mut hs = Vec::new();
                let mut x = id;
                while let Some((p, h)) = nodes[x].parent {
                    hs.push(h);
                    x = p;
                }
                hs.reverse();
                hs
            };
            if !visit(nodes[id].start, nodes[id].v, &nodes[id].class, d, &path) {
                return Ok(());
            }
            let (start, v) = (nodes[id].start, nodes[id].v);
            for &h in self.s.rotation(v) {
                let nd = d + self.s.len_of(h);
                if nd > bound {
                    continue;
                }
                let c = self.extend(&nodes[id].class, h);
                let w = self.s.head(h);
                let key = (start, w, c);
                match index.get(&key) {
                    Some(&j) => {
                        if !settled[j] && nd < dist[j] {
                            dist[j] = nd;
                            nodes[j].parent = Some((id, h));
                            heap.push(Reverse((nd, j)));
                        }
                    }
                    None => {
                        let j = nodes.len();
                        nodes.push(Node { start, v: w, class: key.2.clone(), parent: Some((id, h)) });
                        index.insert(key, j);
                        dist.push(nd);
                        settled.push(false);
                        heap.push(Reverse((nd, j)));
                    }
                }
            }
        }
        Ok(())
    }
}

fn spectrum_search(s: &Surface, bound: Len, limit: Option<usize>, cap: usize) -> Result<Vec<SpectrumEntry>> {
    if !s.has_boundary() && s.genus() == 0 {
        return Ok(Vec::new());
    }
    let search = Search::new(s, cap)?;
    let sources: Vec<usize> = (0..s.n_vertices()).collect();
    let mut seen: HashSet<ClassKey> = HashSet::new();
    let mut out = Vec::new();
    let mut stop_at: Option<Len> = None;
    search.run(&sources, bound, |start, v, class, d, path| {
        if stop_at.is_some_and(|l| d > l) {
            return false;
        }
        if start != v {
            return true;
        }
        let Some(key) = search.key(class) else { return true };
        if seen.insert(key.clone()) {
            out.push(SpectrumEntry { key, length: s.to_rational(d), units: d, walk: Walk::closed(path()) });
            if limit.is_some_and(|k| out.len() >= k) && stop_at.is_none() {
                stop_at = Some(d);
            }
        }
        true
    })?;
    out.sort_by(|a, b| (a.units, &a.key).cmp(&(b.units, &b.key)));
    if let Some(k) = limit {
        out.truncate(k);
    }
    Ok(out)
}

/// All unoriented classes whose minimal length is at most `bound`, sorted
/// by length and key.
pub fn enumerate_spectrum(s: &Surface, bound: &Rational) -> Result<Vec<SpectrumEntry>> {
    enumerate_spectrum_capped(s, bound, DEFAULT_STATE_CAP)
}

pub fn enumerate_spectrum_capped(s: &Surface, bound: &Rational, cap: usize) -> Result<Vec<SpectrumEntry>> {
    let b = bound_units(s, bound)?;
    spectrum_search(s, b, None, cap)
}

/// The `k` shortest classes (all classes tied with the `k`-th are settled
/// before truncation, so the values are exact).
pub fn leading_spectrum(s: &Surface, k: usize) -> Result<Vec<SpectrumEntry>> {
    spectrum_search(s, Len::MAX, Some(k), DEFAULT_STATE_CAP)
}

/// Default search bound: three times the first spectrum value.
pub fn default_bound(s: &Surface) -> Result<Option<Rational>> {
    Ok(leading_spectrum(s, 1)?.first().map(|e| s.to_rational(3 * e.units)))
}

fn bound_units(s: &Surface, bound: &Rational) -> Result<Len> {
    if *bound < Rational::from_integer(0.into()) {
        return Err(Error::InvalidArgument("bound must be non-negative".into()));
    }
    let scaled = bound / s.unit();
    let floor = scaled.floor().to_integer();
    let v: u128 = floor.try_into().map_err(|_| Error::InvalidArgument("bound too large".into()))?;
    Ok(v)
}

/// A shortest essential arc from `x` to `y` of length at most `bound`,
/// found by exhaustive search.
pub fn brute_shortest_essential_arc(s: &Surface, x: ArcEnd, y: ArcEnd, bound: &Rational) -> Result<Option<Arc>> {
    brute_shortest_essential_arc_capped(s, x, y, bound, DEFAULT_STATE_CAP)
}

pub fn brute_shortest_essential_arc_capped(s: &Surface, x: ArcEnd, y: ArcEnd, bound: &Rational, cap: usize) -> Result<Option<Arc>> {
    if !s.has_boundary() {
        return Err(Error::InvalidArgument("arcs need a surface with boundary".into()));
    }
    let b = bound_units(s, bound)?;
    if x.face != y.face {
        let t = shortest_path_tree(s, x.vertex);
        let d = t.dist[y.vertex];
        if d > b || t.path_to(s, y.vertex).is_empty() {
            return Ok(None);
        }
        return Ok(Some(Arc::new(t.path_to(s, y.vertex), x, y)));
    }
    let search = Search::new(s, cap)?;
    let mut found = None;
    search.run(&[x.vertex], b, |_, v, _, _, path| {
        if v != y.vertex {
            return true;
        }
        let hs = path();
        if hs.is_empty() {
            return true;
        }
        let arc = Arc::new(hs, x, y);
        if arc_is_essential(s, &search.gp, &arc) {
            found = Some(arc);
            return false;
        }
        true
    })?;
    Ok(found)
}

/// Length values of a spectrum as exact rationals.
pub fn spectrum_values(s: &Surface, entries: &[SpectrumEntry]) -> Vec<Rational> {
    entries.iter().map(|e| s.to_rational(e.units)).collect()
}
