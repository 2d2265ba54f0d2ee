//! Walks, arcs, combinatorial perturbations and crossings.
//!
//! A perturbation orders, for every edge, all occurrences of that edge in a
//! family of curves from left to right (relative to the forward half-edge).
//! Two passes of curves through a vertex cross when their endpoints
//! interleave in the cyclic order around the vertex. Strands running in
//! parallel are ordered by where they diverge, first ahead and then behind,
//! so that parallel strands never cross needlessly.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface::{HalfEdge, Len, Surface};
use crate::Rational;

/// A sequence of half-edges, closed or open.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Walk {
    pub half_edges: Vec<HalfEdge>,
    pub closed: bool,
}

impl Walk {
    pub fn closed(half_edges: Vec<HalfEdge>) -> Walk {
        Walk { half_edges, closed: true }
    }
    pub fn open(half_edges: Vec<HalfEdge>) -> Walk {
        Walk { half_edges, closed: false }
    }
    pub fn len(&self) -> usize {
        self.half_edges.len()
    }
    pub fn is_empty(&self) -> bool {
        self.half_edges.is_empty()
    }
    /// The same walk traversed backwards.
    pub fn reversed(&self) -> Walk {
        Walk { half_edges: reverse_path(&self.half_edges), closed: self.closed }
    }
    /// Checks that consecutive half-edges are adjacent.
    pub fn validate(&self, s: &Surface) -> Result<()> {
        if self.half_edges.is_empty() {
            return Err(Error::InvalidWalk("empty walk".into()));
        }
        for &h in &self.half_edges {
            if h.0 >= s.n_half_edges() {
                return Err(Error::InvalidWalk(format!("half-edge {} out of range", h.0)));
            }
        }
        for (i, w) in self.half_edges.windows(2).enumerate() {
            if s.head(w[0]) != s.origin(w[1]) {
                return Err(Error::InvalidWalk(format!("half-edges {} and {} at positions {i}, {} are not adjacent", w[0].0, w[1].0, i + 1)));
            }
        }
        if self.closed {
            let (f, l) = (self.half_edges[0], *self.half_edges.last().unwrap());
            if s.head(l) != s.origin(f) {
                return Err(Error::InvalidWalk("closed walk does not return to its start".into()));
            }
        }
        Ok(())
    }
    /// Exact length.
    pub fn length(&self, s: &Surface) -> Rational {
        s.to_rational(self.units(s))
    }
    /// Length in internal units.
    pub fn units(&self, s: &Surface) -> Len {
        s.path_len(&self.half_edges)
    }
    /// Start vertex.
    pub fn start(&self, s: &Surface) -> usize {
        s.origin(self.half_edges[0])
    }
    /// Closed walk traversed `k` times.
    pub fn power(&self, k: usize) -> Walk {
        let mut hs = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            hs.extend_from_slice(&self.half_edges);
        }
        Walk { half_edges: hs, closed: self.closed }
    }
    /// Cyclic rotation of a closed walk so that it starts at position `i`.
    pub fn rotated(&self, i: usize) -> Walk {
        let n = self.len();
        let hs = (0..n).map(|k| self.half_edges[(i + k) % n]).collect();
        Walk { half_edges: hs, closed: self.closed }
    }
}

/// `walk_length` on the public API: exact length of a walk.
pub fn walk_length(s: &Surface, w: &Walk) -> Result<Rational> {
    w.validate(s)?;
    Ok(w.length(s))
}

/// Reverses a path: the opposite half-edges in reverse order.
pub fn reverse_path(hs: &[HalfEdge]) -> Vec<HalfEdge> {
    hs.iter().rev().map(|h| h.opp()).collect()
}

/// Removes immediate backtracks `h·h⁻¹` from a path.
pub fn reduce_path(hs: &[HalfEdge]) -> Vec<HalfEdge> {
    let mut out: Vec<HalfEdge> = Vec::with_capacity(hs.len());
    for &h in hs {
        if out.last() == Some(&h.opp()) {
            out.pop();
        } else {
            out.push(h);
        }
    }
    out
}

/// Removes backtracks from a closed walk, including across its basepoint.
pub fn reduce_cycle(hs: &[HalfEdge]) -> Vec<HalfEdge> {
    let mut out = reduce_path(hs);
    let mut lo = 0;
    while out.len() - lo >= 2 && out[lo] == out[out.len() - 1].opp() {
        lo += 1;
        out.pop();
    }
    out.drain(..lo);
    out
}

/// Endpoint of an arc: a vertex, the perforated face it lands on, and the
/// corner of the rotation at the vertex (the gap following position
/// `corner`) where the face is attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ArcEnd {
    pub vertex: usize,
    pub face: usize,
    pub corner: usize,
}

impl ArcEnd {
    /// The first corner of `vertex` lying in `face`.
    pub fn at(s: &Surface, vertex: usize, face: usize) -> Result<ArcEnd> {
        if vertex >= s.n_vertices() || face >= s.n_faces() {
            return Err(Error::InvalidArgument(format!("vertex {vertex} or face {face} out of range")));
        }
        if !s.is_perforated(face) {
            return Err(Error::InvalidArgument(format!("face {face} is not perforated")));
        }
        (0..s.degree(vertex))
            .find(|&i| s.corner_face(vertex, i) == face)
            .map(|corner| ArcEnd { vertex, face, corner })
            .ok_or_else(|| Error::InvalidArgument(format!("vertex {vertex} is not on face {face}")))
    }

    /// The endpoint sitting in the corner just before `h` in the rotation,
    /// which lies in the face on the left of `h`.
    pub fn before(s: &Surface, h: HalfEdge) -> ArcEnd {
        let v = s.origin(h);
        let d = s.degree(v);
        ArcEnd { vertex: v, face: s.face_of(h), corner: (s.rot_pos(h) + d - 1) % d }
    }
}

/// An open walk whose endpoints are assigned to perforated faces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Arc {
    pub walk: Walk,
    pub start: ArcEnd,
    pub end: ArcEnd,
}

impl Arc {
    /// An arc from `start` to `end` along `half_edges`.
    pub fn new(half_edges: Vec<HalfEdge>, start: ArcEnd, end: ArcEnd) -> Arc {
        Arc { walk: Walk::open(half_edges), start, end }
    }
    pub fn validate(&self, s: &Surface) -> Result<()> {
        self.walk.validate(s)?;
        if self.walk.closed {
            return Err(Error::InvalidWalk("an arc must be open".into()));
        }
        let hs = &self.walk.half_edges;
        if s.origin(hs[0]) != self.start.vertex || s.head(*hs.last().unwrap()) != self.end.vertex {
            return Err(Error::InvalidWalk("arc endpoints do not match its walk".into()));
        }
        for e in [self.start, self.end] {
            if e.corner >= s.degree(e.vertex) || s.corner_face(e.vertex, e.corner) != e.face || !s.is_perforated(e.face) {
                return Err(Error::InvalidWalk(format!("arc end at vertex {} is not on perforated face {}", e.vertex, e.face)));
            }
        }
        Ok(())
    }
    pub fn length(&self, s: &Surface) -> Rational {
        self.walk.length(s)
    }
    pub fn units(&self, s: &Surface) -> Len {
        self.walk.units(s)
    }
    pub fn reversed(&self) -> Arc {
        Arc { walk: self.walk.reversed(), start: self.end, end: self.start }
    }
}

/// A closed walk or an arc.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Curve {
    Closed(Walk),
    Arc(Arc),
}

impl Curve {
    pub fn half_edges(&self) -> &[HalfEdge] {
        match self {
            Curve::Closed(w) => &w.half_edges,
            Curve::Arc(a) => &a.walk.half_edges,
        }
    }
    pub fn is_closed(&self) -> bool {
        matches!(self, Curve::Closed(_))
    }
    pub fn validate(&self, s: &Surface) -> Result<()> {
        match self {
            Curve::Closed(w) if w.closed => w.validate(s),
            Curve::Closed(_) => Err(Error::InvalidWalk("open walk given where a closed walk is required".into())),
            Curve::Arc(a) => a.validate(s),
        }
    }
    /// Number of passes through vertices: one per half-edge for closed
    /// curves, one more for arcs.
    pub fn n_passes(&self) -> usize {
        self.half_edges().len() + usize::from(!self.is_closed())
    }
}

impl From<Walk> for Curve {
    fn from(w: Walk) -> Curve {
        Curve::Closed(w)
    }
}

impl From<Arc> for Curve {
    fn from(a: Arc) -> Curve {
        Curve::Arc(a)
    }
}

/// One occurrence of an edge in a curve family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Occ {
    pub curve: usize,
    pub index: usize,
}

/// A point on the boundary of a small disk around a vertex: either a strand
/// crossing the side of an outgoing half-edge, or the corner after rotation
/// position `corner`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Strand { half_edge: HalfEdge, rank: usize },
    Corner(usize),
}

/// Passage of a curve through a vertex, from `incoming` to `outgoing`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pass {
    pub vertex: usize,
    pub curve: usize,
    /// Index of the outgoing half-edge in the curve (equal to the curve
    /// length for the last pass of an arc).
    pub index: usize,
    pub incoming: Slot,
    pub outgoing: Slot,
}

/// Left-to-right orders of the strands on every edge.
#[derive(Debug, Clone)]
pub struct Perturbation {
    curves: Vec<Curve>,
    order: Vec<Vec<Occ>>,
    rank: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Step {
    Edge(HalfEdge),
    End(usize),
}

impl Perturbation {
    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }
    /// Occurrences on edge `e`, left to right relative to its forward half-edge.
    pub fn order(&self, e: usize) -> &[Occ] {
        &self.order[e]
    }
    /// Number of strands on edge `e`.
    pub fn n_strands(&self, e: usize) -> usize {
        self.order[e].len()
    }
    /// Rank of occurrence `(c, i)` counted from the left of half-edge `h`,
    /// where `h` is either orientation of the occurrence's edge.
    pub fn rank_along(&self, c: usize, i: usize, h: HalfEdge) -> usize {
        let r = self.rank[c][i];
        if h.is_forward() {
            r
        } else {
            self.order[h.edge()].len() - 1 - r
        }
    }

    /// Slot key in the cyclic order around a vertex.
    pub fn slot_key(&self, s: &Surface, slot: Slot) -> (usize, usize) {
        match slot {
            Slot::Strand { half_edge, rank } => (2 * s.rot_pos(half_edge), rank),
            Slot::Corner(c) => (2 * c + 1, 0),
        }
    }

    /// All passes of all curves through vertices.
    pub fn passes(&self, s: &Surface) -> Vec<Pass> {
        let mut out = Vec::new();
        for (c, curve) in self.curves.iter().enumerate() {
            let hs = curve.half_edges();
            let n = hs.len();
            let strand_out = |i: usize| Slot::Strand { half_edge: hs[i], rank: self.rank_along(c, i, hs[i]) };
            let strand_in = |i: usize| Slot::Strand { half_edge: hs[i].opp(), rank: self.rank_along(c, i, hs[i].opp()) };
            match curve {
                Curve::Closed(_) => {
                    for i in 0..n {
                        out.push(Pass { vertex: s.origin(hs[i]), curve: c, index: i, incoming: strand_in((i + n - 1) % n), outgoing: strand_out(i) });
                    }
                }
                Curve::Arc(a) => {
                    out.push(Pass { vertex: a.start.vertex, curve: c, index: 0, incoming: Slot::Corner(a.start.corner), outgoing: strand_out(0) });
                    for i in 1..n {
                        out.push(Pass { vertex: s.origin(hs[i]), curve: c, index: i, incoming: strand_in(i - 1), outgoing: strand_out(i) });
                    }
                    out.push(Pass { vertex: a.end.vertex, curve: c, index: n, incoming: strand_in(n - 1), outgoing: Slot::Corner(a.end.corner) });
                }
            }
        }
        out
    }

    fn step(&self, c: usize, i: usize, forward: bool, k: usize) -> Option<Step> {
        let curve = &self.curves[c];
        let hs = curve.half_edges();
        let n = hs.len() as isize;
        let j = if forward { i as isize + k as isize } else { i as isize - k as isize };
        match curve {
            Curve::Closed(_) => {
                let j = j.rem_euclid(n) as usize;
                Some(Step::Edge(if forward { hs[j] } else { hs[j].opp() }))
            }
            Curve::Arc(a) => {
                if j >= n {
                    (j == n && forward).then_some(Step::End(a.end.corner))
                } else if j < 0 {
                    (j == -1 && !forward).then_some(Step::End(a.start.corner))
                } else {
                    let h = hs[j as usize];
                    Some(Step::Edge(if forward { h } else { h.opp() }))
                }
            }
        }
    }

    /// Compares two strands running along `g` by where they leave each other
    /// ahead of `g`. `Less` means the first strand is on the left.
    fn ahead_cmp(&self, s: &Surface, a: (usize, usize, bool), b: (usize, usize, bool), g: HalfEdge) -> Option<Ordering> {
        let limit = self.curves[a.0].n_passes() + self.curves[b.0].n_passes() + 1;
        let mut cur = g;
        for k in 1..=limit {
            let na = self.step(a.0, a.1, a.2, k)?;
            let nb = self.step(b.0, b.1, b.2, k)?;
            if na == nb {
                match na {
                    Step::Edge(h) => {
                        cur = h;
                        continue;
                    }
                    Step::End(_) => return None,
                }
            }
            let w = s.head(cur);
            let deg2 = 2 * s.degree(w);
            let base = 2 * s.rot_pos(cur.opp());
            let key = |st: Step| match st {
                Step::Edge(h) => 2 * s.rot_pos(h),
                Step::End(c) => 2 * c + 1,
            };
            let off = |st: Step| (key(st) + deg2 - base) % deg2;
            return Some(off(na).cmp(&off(nb)));
        }
        None
    }

    fn strand_cmp(&self, s: &Surface, x: Occ, y: Occ, g: HalfEdge) -> Ordering {
        let hx = self.curves[x.curve].half_edges()[x.index];
        let hy = self.curves[y.curve].half_edges()[y.index];
        let a = (x.curve, x.index, hx == g);
        let b = (y.curve, y.index, hy == g);
        if let Some(o) = self.ahead_cmp(s, a, b, g) {
            return o;
        }
        let ra = (x.curve, x.index, hx != g);
        let rb = (y.curve, y.index, hy != g);
        if let Some(o) = self.ahead_cmp(s, ra, rb, g.opp()) {
            return o.reverse();
        }
        x.cmp(&y)
    }
}

/// Orientation-free normal form of a curve: the smallest half-edge sequence
/// among all rotations and reversals (both orientations only, for arcs),
/// with the rotation and orientation realizing it.
struct NormalForm {
    seq: Vec<HalfEdge>,
    shift: usize,
    reversed: bool,
}

impl NormalForm {
    fn of(c: &Curve) -> NormalForm {
        let hs = c.half_edges();
        let rev = reverse_path(hs);
        let n = hs.len();
        let shifts = if c.is_closed() { n } else { 1 };
        let mut best: Option<NormalForm> = None;
        for shift in 0..shifts {
            for (reversed, src) in [(false, hs), (true, rev.as_slice())] {
                let seq: Vec<HalfEdge> = src[shift..].iter().chain(&src[..shift]).copied().collect();
                if best.as_ref().is_none_or(|b| seq < b.seq) {
                    best = Some(NormalForm { seq, shift, reversed });
                }
            }
        }
        best.unwrap_or(NormalForm { seq: Vec::new(), shift: 0, reversed: false })
    }

    /// Position of occurrence `i` in the normal form, with the half-edge it
    /// runs along in the normal orientation.
    fn locate(&self, hs: &[HalfEdge], i: usize) -> (usize, HalfEdge) {
        let n = hs.len();
        if self.reversed {
            ((2 * n - 1 - i - self.shift) % n, hs[i].opp())
        } else {
            ((i + n - self.shift) % n, hs[i])
        }
    }
}

/// Builds the deterministic perturbation of a family of curves.
pub fn canonical_perturbation(s: &Surface, curves: &[Curve]) -> Result<Perturbation> {
    for c in curves {
        c.validate(s)?;
    }
    let mut order: Vec<Vec<Occ>> = vec![Vec::new(); s.n_edges()];
    for (c, curve) in curves.iter().enumerate() {
        for (i, h) in curve.half_edges().iter().enumerate() {
            order[h.edge()].push(Occ { curve: c, index: i });
        }
    }
    let mut p = Perturbation { curves: curves.to_vec(), order: Vec::new(), rank: curves.iter().map(|c| vec![0; c.half_edges().len()]).collect() };
    let mut by_form: Vec<usize> = (0..curves.len()).collect();
    let forms: Vec<NormalForm> = curves.iter().map(NormalForm::of).collect();
    by_form.sort_by(|&a, &b| forms[a].seq.cmp(&forms[b].seq).then(a.cmp(&b)));
    let mut curve_rank = vec![0; curves.len()];
    for (r, &c) in by_form.iter().enumerate() {
        curve_rank[c] = r;
    }
    for (e, occ) in order.iter_mut().enumerate() {
        if occ.len() > 1 {
            // Look ahead along the travel direction of the lowest occurrence so
            // that consecutive edges of a shared run agree on where strands swap.
            let (_, _, g) = occ
                .iter()
                .map(|o| {
                    let (pos, h) = forms[o.curve].locate(p.curves[o.curve].half_edges(), o.index);
                    (curve_rank[o.curve], pos, h)
                })
                .min()
                .expect("non-empty");
            occ.sort_by(|&x, &y| p.strand_cmp(s, x, y, g));
            if g != HalfEdge::of_edge(e) {
                occ.reverse();
            }
        }
    }
    for occ in &order {
        for (r, o) in occ.iter().enumerate() {
            p.rank[o.curve][o.index] = r;
        }
    }
    p.order = order;
    Ok(p)
}

/// A crossing between two passes at a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub vertex: usize,
    /// `(curve, pass index)` of the two passes, with the smaller first.
    pub first: (usize, usize),
    pub second: (usize, usize),
    /// Orientation sign; meaningful for passes of closed curves.
    pub sign: i32,
}

/// All crossings of a curve family.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CrossingReport {
    pub crossings: Vec<Crossing>,
}

impl CrossingReport {
    pub fn total(&self) -> usize {
        self.crossings.len()
    }
    /// Crossings of curve `c` with itself.
    pub fn self_crossings(&self, c: usize) -> usize {
        self.crossings.iter().filter(|x| x.first.0 == c && x.second.0 == c).count()
    }
    /// Crossings between two distinct curves.
    pub fn pair_crossings(&self, a: usize, b: usize) -> usize {
        self.crossings
            .iter()
            .filter(|x| (x.first.0 == a && x.second.0 == b) || (x.first.0 == b && x.second.0 == a))
            .count()
    }
    /// Signed count of crossings between curves `a` and `b`, oriented from `a` to `b`.
    pub fn algebraic(&self, a: usize, b: usize) -> i64 {
        self.crossings
            .iter()
            .map(|x| {
                if x.first.0 == a && x.second.0 == b {
                    x.sign as i64
                } else if x.first.0 == b && x.second.0 == a {
                    -(x.sign as i64)
                } else {
                    0
                }
            })
            .sum()
    }
}

fn strictly_between(a: (usize, usize), x: (usize, usize), b: (usize, usize)) -> bool {
    if a < b {
        a < x && x < b
    } else {
        x > a || x < b
    }
}

/// Whether two chords with the given endpoint keys cross.
pub(crate) fn chords_cross(a: (usize, usize), b: (usize, usize), c: (usize, usize), d: (usize, usize)) -> bool {
    if c == a || c == b || d == a || d == b {
        return false;
    }
    strictly_between(a, c, b) != strictly_between(a, d, b)
}

/// Crossings of all curves of a perturbation, including self-crossings.
pub fn count_crossings(s: &Surface, p: &Perturbation) -> CrossingReport {
    let mut by_vertex: Vec<Vec<Pass>> = vec![Vec::new(); s.n_vertices()];
    for pass in p.passes(s) {
        by_vertex[pass.vertex].push(pass);
    }
    let mut crossings = Vec::new();
    for (v, passes) in by_vertex.iter().enumerate() {
        for (i, x) in passes.iter().enumerate() {
            let (xi, xo) = (p.slot_key(s, x.incoming), p.slot_key(s, x.outgoing));
            for y in &passes[i + 1..] {
                let (yi, yo) = (p.slot_key(s, y.incoming), p.slot_key(s, y.outgoing));
                if chords_cross(xi, xo, yi, yo) {
                    // +1 when, in rotation order, the incoming end of `y`
                    // lies between the outgoing and incoming ends of `x`
                    let sign = if strictly_between(xo, yi, xi) { 1 } else { -1 };
                    let (first, second, sign) = if (x.curve, x.index) <= (y.curve, y.index) {
                        ((x.curve, x.index), (y.curve, y.index), sign)
                    } else {
                        ((y.curve, y.index), (x.curve, x.index), -sign)
                    };
                    crossings.push(Crossing { vertex: v, first, second, sign });
                }
            }
        }
    }
    crossings.sort_by_key(|c| (c.first, c.second, c.vertex));
    CrossingReport { crossings }
}

/// Crossing report for a family of curves under the canonical perturbation.
pub fn crossings_of(s: &Surface, curves: &[Curve]) -> Result<CrossingReport> {
    Ok(count_crossings(s, &canonical_perturbation(s, curves)?))
}

/// Number of self-crossings of a single curve.
pub fn self_crossing_count(s: &Surface, c: &Curve) -> Result<usize> {
    Ok(crossings_of(s, std::slice::from_ref(c))?.self_crossings(0))
}

/// Whether a curve admits a perturbation without self-crossings.
pub fn is_weakly_simple(s: &Surface, c: &Curve) -> Result<bool> {
    Ok(self_crossing_count(s, c)? == 0)
}

/// Smooths the crossing between passes `p < q` of a curve, reversing the
/// portion of the curve between them. The length is unchanged.
pub fn smooth(s: &Surface, curve: &Curve, p: usize, q: usize) -> Result<Curve> {
    curve.validate(s)?;
    let (p, q) = if p <= q { (p, q) } else { (q, p) };
    let hs = curve.half_edges();
    let n = hs.len();
    let in_range = match curve {
        Curve::Closed(_) => q < n,
        Curve::Arc(_) => q <= n,
    };
    if p == q || !in_range {
        return Err(Error::InvalidArgument(format!("passes {p} and {q} cannot be smoothed")));
    }
    let vertex = |i: usize| if i < n { s.origin(hs[i]) } else { s.head(hs[n - 1]) };
    if vertex(p) != vertex(q) {
        return Err(Error::InvalidArgument(format!("passes {p} and {q} are at different vertices")));
    }
    let report = crossings_of(s, std::slice::from_ref(curve))?;
    if !report.crossings.iter().any(|c| c.first == (0, p) && c.second == (0, q)) {
        return Err(Error::InvalidArgument(format!("passes {p} and {q} do not cross")));
    }
    Ok(smooth_unchecked(curve, p, q))
}

pub(crate) fn smooth_unchecked(curve: &Curve, p: usize, q: usize) -> Curve {
    let hs = curve.half_edges();
    let mut out = hs[..p].to_vec();
    out.extend(reverse_path(&hs[p..q]));
    out.extend_from_slice(&hs[q..]);
    match curve {
        Curve::Closed(_) => Curve::Closed(Walk::closed(out)),
        Curve::Arc(a) => Curve::Arc(Arc::new(out, a.start, a.end)),
    }
}

/// Signed intersection number of two closed walks.
pub fn algebraic_intersection_number(s: &Surface, a: &Walk, b: &Walk) -> Result<i64> {
    if !a.closed || !b.closed {
        return Err(Error::InvalidWalk("algebraic intersection needs closed walks".into()));
    }
    let r = crossings_of(s, &[Curve::Closed(a.clone()), Curve::Closed(b.clone())])?;
    Ok(r.algebraic(0, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, grid_column, grid_row};

    fn w(ids: &[usize]) -> Walk {
        Walk::closed(ids.iter().map(|&i| HalfEdge(i)).collect())
    }

    #[test]
    fn lengths() {
        let q = fixtures::torus_schema();
        assert_eq!(walk_length(&q, &w(&[0])).unwrap(), Rational::from_integer(1.into()));
        let p = fixtures::pants();
        let c = Walk::open(vec![HalfEdge(4)]);
        assert_eq!(walk_length(&p, &c).unwrap(), Rational::from_integer(3.into()));
        let t = fixtures::grid_torus(3, 3);
        assert_eq!(walk_length(&t, &grid_row(3, 0)).unwrap(), Rational::from_integer(3.into()));
        assert!(walk_length(&t, &w(&[0, 0])).is_err());
    }

    #[test]
    fn torus_generators_cross_once() {
        let q = fixtures::torus_schema();
        let r = crossings_of(&q, &[w(&[0]).into(), w(&[2]).into()]).unwrap();
        assert_eq!(r.pair_crossings(0, 1), 1);
        assert_eq!(algebraic_intersection_number(&q, &w(&[0]), &w(&[2])).unwrap().abs(), 1);
    }

    #[test]
    fn parallel_copies_do_not_cross() {
        let q = fixtures::torus_schema();
        let r = crossings_of(&q, &[w(&[0]).into(), w(&[0]).into()]).unwrap();
        assert_eq!(r.total(), 0);
        assert_eq!(algebraic_intersection_number(&q, &w(&[0, 2]), &w(&[0, 2])).unwrap(), 0);
    }

    #[test]
    fn diagonal_on_schema_is_weakly_simple() {
        let q = fixtures::torus_schema();
        assert_eq!(self_crossing_count(&q, &w(&[0, 2]).into()).unwrap(), 0);
        assert_eq!(self_crossing_count(&q, &w(&[0, 3]).into()).unwrap(), 0);
        // a doubled loop crosses itself once
        assert_eq!(self_crossing_count(&q, &w(&[0, 0]).into()).unwrap(), 1);
    }

    #[test]
    fn grid_rows_and_columns() {
        let t = fixtures::grid_torus(3, 3);
        let r = crossings_of(&t, &[grid_row(3, 0).into(), grid_column(3, 3, 0).into()]).unwrap();
        assert_eq!(r.pair_crossings(0, 1), 1);
        let r = crossings_of(&t, &[grid_row(3, 0).into(), grid_row(3, 1).into()]).unwrap();
        assert_eq!(r.total(), 0);
        let row = grid_row(3, 0);
        let col = grid_column(3, 3, 0);
        // row followed by column, both based at vertex 0
        let rc = Walk::closed(row.half_edges.iter().chain(col.half_edges.iter()).copied().collect());
        assert_eq!(algebraic_intersection_number(&t, &row, &rc).unwrap().abs(), 1);
        assert_eq!(algebraic_intersection_number(&t, &row, &rc).unwrap(), algebraic_intersection_number(&t, &row, &col).unwrap());
    }

    #[test]
    fn reversing_negates_algebraic_number() {
        let t = fixtures::grid_torus(3, 4);
        let row = grid_row(4, 1);
        let col = grid_column(3, 4, 2);
        let a = algebraic_intersection_number(&t, &row, &col).unwrap();
        assert_eq!(algebraic_intersection_number(&t, &row.reversed(), &col).unwrap(), -a);
        assert_eq!(algebraic_intersection_number(&t, &col, &row).unwrap(), -a);
    }

    #[test]
    fn face_boundaries_have_zero_algebraic_number() {
        let t = fixtures::grid_torus(3, 3);
        let row = grid_row(3, 0);
        for f in t.faces() {
            let fw = Walk::closed(f.clone());
            assert_eq!(algebraic_intersection_number(&t, &fw, &row).unwrap(), 0);
        }
    }

    #[test]
    fn order_reverses_with_direction() {
        let t = fixtures::grid_torus(3, 3);
        let curves: Vec<Curve> = vec![grid_row(3, 0).into(), grid_row(3, 0).into(), grid_row(3, 0).reversed().into()];
        let p = canonical_perturbation(&t, &curves).unwrap();
        for e in 0..3 {
            let n = p.n_strands(e);
            for o in p.order(e) {
                let h = curves[o.curve].half_edges()[o.index];
                assert_eq!(p.rank_along(o.curve, o.index, h) + p.rank_along(o.curve, o.index, h.opp()), n - 1);
            }
        }
        assert_eq!(count_crossings(&t, &p).total(), 0);
    }

    #[test]
    fn smoothing_preserves_length() {
        let q = fixtures::torus_schema();
        let c: Curve = w(&[0, 0]).into();
        let r = crossings_of(&q, std::slice::from_ref(&c)).unwrap();
        let x = r.crossings[0];
        let sm = smooth(&q, &c, x.first.1, x.second.1).unwrap();
        assert_eq!(Walk::closed(sm.half_edges().to_vec()).units(&q), 2);
        let simple: Curve = w(&[0]).into();
        assert!(smooth(&q, &simple, 0, 0).is_err());
        assert!(smooth(&q, &w(&[0, 2]).into(), 0, 1).is_err());
    }

    #[test]
    fn smoothing_an_arc_in_pants() {
        // a·b⁻¹·a from x to y, passing x twice
        let p = fixtures::pants();
        let start = ArcEnd::at(&p, 0, fixtures::PANTS_AB_FACE).unwrap();
        let end = ArcEnd::at(&p, 1, fixtures::PANTS_AB_FACE).unwrap();
        let a = Curve::Arc(Arc::new(vec![HalfEdge(0), HalfEdge(3), HalfEdge(0)], start, end));
        a.validate(&p).unwrap();
        let r = crossings_of(&p, std::slice::from_ref(&a)).unwrap();
        for x in &r.crossings {
            let sm = smooth(&p, &a, x.first.1, x.second.1).unwrap();
            assert_eq!(p.path_len(sm.half_edges()), 4);
        }
    }

    #[test]
    fn reduction() {
        let hs = |v: &[usize]| v.iter().map(|&i| HalfEdge(i)).collect::<Vec<_>>();
        assert_eq!(reduce_path(&hs(&[0, 2, 3, 1])), hs(&[]));
        assert_eq!(reduce_cycle(&hs(&[1, 2, 4, 0])), hs(&[2, 4]));
    }
}
