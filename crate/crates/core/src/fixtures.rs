//! Small named surfaces and a random generator of surfaces with boundary.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::surface::{HalfEdge, Surface};
use crate::{Rational, Walk};

fn int(w: u64) -> Rational {
    Rational::from_integer(w.into())
}

fn hs(ids: &[usize]) -> Vec<HalfEdge> {
    ids.iter().map(|&i| HalfEdge(i)).collect()
}

/// One-vertex torus with loops `a` (edge 0) and `b` (edge 1) of weight 1 and
/// rotation `(a, b, a⁻¹, b⁻¹)`.
pub fn torus_schema() -> Surface {
    Surface::build(vec![hs(&[0, 2, 1, 3])], vec![int(1), int(1)], &[]).expect("valid fixture")
}

/// Theta graph on vertices `x = 0`, `y = 1` with edges `a`, `b`, `c` of
/// weights 1, 2, 3, all three faces perforated. Face 1 is bounded by `a` and `b`.
pub fn pants() -> Surface {
    Surface::build(vec![hs(&[0, 2, 4]), hs(&[1, 5, 3])], vec![int(1), int(2), int(3)], &[0, 1, 2])
        .expect("valid fixture")
}

/// The pants fixture with the face bounded by `b` and `c` capped.
pub fn annulus() -> Surface {
    pants().cap_boundaries(&[2]).expect("face 2 is perforated")
}

/// Face of [`pants`] bounded by edges `a` and `b`.
pub const PANTS_AB_FACE: usize = 1;

/// Edge id of the horizontal edge leaving grid vertex `(i, j)`.
pub fn grid_h(cols: usize, i: usize, j: usize) -> usize {
    i * cols + j
}

/// Edge id of the vertical edge leaving grid vertex `(i, j)`.
pub fn grid_v(rows: usize, cols: usize, i: usize, j: usize) -> usize {
    rows * cols + i * cols + j
}

/// Unit-weight `rows × cols` toroidal grid. Vertex `(i, j)` has id `i*cols + j`.
pub fn grid_torus(rows: usize, cols: usize) -> Surface {
    grid_torus_weighted(rows, cols, |_| 1)
}

/// Toroidal grid with weights given per edge id.
pub fn grid_torus_weighted(rows: usize, cols: usize, weight: impl Fn(usize) -> u64) -> Surface {
    assert!(rows >= 1 && cols >= 1);
    let mut rot = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            let east = HalfEdge::of_edge(grid_h(cols, i, j));
            let south = HalfEdge::of_edge(grid_v(rows, cols, i, j));
            let west = HalfEdge::of_edge(grid_h(cols, i, (j + cols - 1) % cols)).opp();
            let north = HalfEdge::of_edge(grid_v(rows, cols, (i + rows - 1) % rows, j)).opp();
            rot.push(vec![east, south, west, north]);
        }
    }
    let weights = (0..2 * rows * cols).map(|e| int(weight(e))).collect();
    Surface::build(rot, weights, &[]).expect("valid grid")
}

/// Toroidal grid with face 0 perforated.
pub fn grid_torus_perforated(rows: usize, cols: usize) -> Surface {
    grid_torus(rows, cols).with_perforations(&[0]).expect("face 0 exists")
}

/// Closed walk along row `i` of a toroidal grid, heading east.
pub fn grid_row(cols: usize, i: usize) -> Walk {
    Walk::closed((0..cols).map(|j| HalfEdge::of_edge(grid_h(cols, i, j))).collect())
}

/// Closed walk along column `j` of a toroidal grid, heading south.
pub fn grid_column(rows: usize, cols: usize, j: usize) -> Walk {
    Walk::closed((0..rows).map(|i| HalfEdge::of_edge(grid_v(rows, cols, i, j))).collect())
}

/// One-vertex genus-2 surface with loops `a1, b1, a2, b2` (edges 0..4) and
/// the given weights.
pub fn genus_two_schema(weights: [u64; 4]) -> Surface {
    Surface::build(vec![hs(&[0, 2, 1, 3, 4, 6, 5, 7])], weights.iter().map(|&w| int(w)).collect(), &[])
        .expect("valid fixture")
}

/// Random connected surface with at least one perforation and a
/// non-trivial fundamental group (so never a disk).
///
/// Graphs have at most `max_edges` edges (loops and multi-edges allowed),
/// integer weights in `1..=max_weight` and genus at most `max_genus`.
pub fn random_boundary_surface<R: Rng>(rng: &mut R, max_edges: usize, max_weight: u64, max_genus: usize) -> Surface {
    loop {
        let s = random_surface(rng, max_edges, max_weight);
        if s.genus() > max_genus {
            continue;
        }
        let mut faces: Vec<usize> = (0..s.n_faces()).collect();
        faces.shuffle(rng);
        let b = rng.gen_range(1..=s.n_faces().min(3));
        faces.truncate(b);
        faces.sort_unstable();
        let s = s.with_perforations(&faces).expect("faces exist");
        if 2 * s.genus() + s.n_boundaries() >= 2 {
            return s;
        }
    }
}

/// Random connected surface without perforations.
pub fn random_surface<R: Rng>(rng: &mut R, max_edges: usize, max_weight: u64) -> Surface {
    let n_e = rng.gen_range(2..=max_edges.max(2));
    let n_v = rng.gen_range(1..=n_e.min(6));
    // spanning tree first, then extra edges anywhere
    let mut ends: Vec<(usize, usize)> = (1..n_v).map(|v| (rng.gen_range(0..v), v)).collect();
    while ends.len() < n_e {
        ends.push((rng.gen_range(0..n_v), rng.gen_range(0..n_v)));
    }
    ends.shuffle(rng);
    let mut rot = vec![Vec::new(); n_v];
    for (e, &(u, v)) in ends.iter().enumerate() {
        rot[u].push(HalfEdge::of_edge(e));
        rot[v].push(HalfEdge::of_edge(e).opp());
    }
    for r in rot.iter_mut() {
        r.shuffle(rng);
    }
    let weights = (0..n_e).map(|_| int(rng.gen_range(1..=max_weight))).collect();
    Surface::build(rot, weights, &[]).expect("random graph is connected")
}
