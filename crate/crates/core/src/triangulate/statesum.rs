//! Backtracking enumeration of admissible edge colorings.
//!
//! Edges are colored in order of decreasing triangle degree. A triangle is
//! checked for admissibility as soon as its last edge is colored, and the
//! weight of every simplex is multiplied in at that moment, so each partial
//! coloring carries its exact partial product. The top level is split on the
//! color of the first edge; branch results are merged in color order, which
//! makes sums and visit counts independent of the thread count.

use std::ops::Mul;

use rayon::prelude::*;

use super::{Triangulation, TriangulationError};
use crate::recoupling::{Color, RecouplingTable, RootParams};
use crate::scalar::Real;

/// Work counters of one enumeration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    /// Color assignments tried, over all edges.
    pub visited: u64,
    /// Complete admissible colorings reached.
    pub leaves: u64,
}

impl EnumerationStats {
    fn merge(&mut self, other: Self) {
        self.visited += other.visited;
        self.leaves += other.leaves;
    }
}

/// Value of a closed state sum with its enumeration statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateSum<T> {
    pub value: T,
    pub stats: EnumerationStats,
}

/// Simplex weights for the enumerator.
pub(crate) trait Weights: Sync {
    type W: Copy + Send + Mul<Output = Self::W>;
    fn one(&self) -> Self::W;
    fn edge(&self, edge: usize, c: Color) -> Self::W;
    fn triangle(&self, triangle: usize, colors: [Color; 3]) -> Self::W;
    fn tet(&self, tet: usize, colors: [Color; 6]) -> Self::W;
}

/// Highest triangle degree first, then repeatedly the edge that closes the
/// most triangles, touches the most partly colored triangles, and has the
/// highest degree (ties to the lower index).
fn greedy_order(triangle_edges: &[[usize; 3]], degree: &[usize]) -> Vec<usize> {
    let n = degree.len();
    let mut incident = vec![Vec::new(); n];
    for (f, tri) in triangle_edges.iter().enumerate() {
        for &e in tri {
            if !incident[e].contains(&f) {
                incident[e].push(f);
            }
        }
    }
    let mut colored = vec![false; n];
    let mut missing: Vec<usize> = triangle_edges
        .iter()
        .map(|tri| {
            let mut distinct = tri.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            distinct.len()
        })
        .collect();
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let key = |e: usize| {
            let closes = incident[e].iter().filter(|&&f| missing[f] == 1).count();
            let touches = incident[e].iter().filter(|&&f| missing[f] < 3).count();
            (closes, touches, degree[e], std::cmp::Reverse(e))
        };
        let e = (0..n).filter(|&e| !colored[e]).max_by_key(|&e| key(e)).expect("uncolored edge");
        colored[e] = true;
        for &f in &incident[e] {
            missing[f] -= 1;
        }
        order.push(e);
    }
    order
}

/// Coloring order and the simplices completed at each step.
pub(crate) struct Plan {
    pub order: Vec<usize>,
    pub triangle_edges: Vec<[usize; 3]>,
    pub tet_edges: Vec<[usize; 6]>,
    triangles_at: Vec<Vec<usize>>,
    tets_at: Vec<Vec<usize>>,
    num_edges: usize,
}

impl Plan {
    pub fn new(t: &Triangulation) -> Self {
        let triangle_edges: Vec<[usize; 3]> =
            t.triangle_representatives().into_iter().map(|(tet, f)| t.face_edges(tet, f)).collect();
        let tet_edges: Vec<[usize; 6]> = (0..t.num_tets()).map(|i| t.tet_edges(i)).collect();
        let mut degree = vec![0usize; t.num_edges()];
        for tri in &triangle_edges {
            for &e in tri {
                degree[e] += 1;
            }
        }
        let order = greedy_order(&triangle_edges, &degree);
        let mut position = vec![0; t.num_edges()];
        for (i, &e) in order.iter().enumerate() {
            position[e] = i;
        }
        let mut triangles_at = vec![Vec::new(); order.len()];
        for (f, tri) in triangle_edges.iter().enumerate() {
            triangles_at[tri.iter().map(|&e| position[e]).max().unwrap()].push(f);
        }
        let mut tets_at = vec![Vec::new(); order.len()];
        for (i, es) in tet_edges.iter().enumerate() {
            tets_at[es.iter().map(|&e| position[e]).max().unwrap()].push(i);
        }
        Self { order, triangle_edges, tet_edges, triangles_at, tets_at, num_edges: t.num_edges() }
    }

    /// Runs the enumeration. `leaf` folds a complete coloring with its
    /// weight into a branch accumulator; branch accumulators are merged in
    /// the order of the first edge's color.
    pub fn run<T, Wt, A, I, L, M>(&self, table: &RecouplingTable<T>, weights: &Wt, init: I, leaf: L, merge: M) -> (A, EnumerationStats)
    where
        T: Real,
        Wt: Weights,
        A: Send,
        I: Fn() -> A + Sync,
        L: Fn(&mut A, &[Color], Wt::W) + Sync,
        M: Fn(&mut A, A),
    {
        let nc = table.num_colors() as Color;
        if self.order.is_empty() {
            let mut acc = init();
            leaf(&mut acc, &[], weights.one());
            return (acc, EnumerationStats { visited: 0, leaves: 1 });
        }
        let branches: Vec<(A, EnumerationStats)> = (0..nc)
            .into_par_iter()
            .map(|c| {
                let mut acc = init();
                let mut stats = EnumerationStats::default();
                let mut colors = vec![0; self.num_edges];
                let search = Search { plan: self, table, weights, leaf: &leaf };
                search.try_color(0, c, &mut colors, weights.one(), &mut acc, &mut stats);
                (acc, stats)
            })
            .collect();
        let mut total = init();
        let mut stats = EnumerationStats::default();
        for (acc, s) in branches {
            merge(&mut total, acc);
            stats.merge(s);
        }
        (total, stats)
    }
}

struct Search<'a, T, Wt, L> {
    plan: &'a Plan,
    table: &'a RecouplingTable<T>,
    weights: &'a Wt,
    leaf: &'a L,
}

impl<T, Wt, L> Search<'_, T, Wt, L>
where
    T: Real,
    Wt: Weights,
{
    fn try_color<A>(&self, step: usize, c: Color, colors: &mut [Color], w: Wt::W, acc: &mut A, stats: &mut EnumerationStats)
    where
        L: Fn(&mut A, &[Color], Wt::W),
    {
        stats.visited += 1;
        let plan = self.plan;
        colors[plan.order[step]] = c;
        let mut w = w * self.weights.edge(plan.order[step], c);
        for &f in &plan.triangles_at[step] {
            let tc = plan.triangle_edges[f].map(|e| colors[e]);
            if !self.table.admissible(tc[0], tc[1], tc[2]) {
                return;
            }
            w = w * self.weights.triangle(f, tc);
        }
        for &t in &plan.tets_at[step] {
            w = w * self.weights.tet(t, plan.tet_edges[t].map(|e| colors[e]));
        }
        if step + 1 == plan.order.len() {
            stats.leaves += 1;
            (self.leaf)(acc, colors, w);
            return;
        }
        for next in 0..self.table.num_colors() as Color {
            self.try_color(step + 1, next, colors, w, acc, stats);
        }
    }
}

#[derive(Clone, Copy)]
pub(crate) struct Unit;

impl Mul for Unit {
    type Output = Unit;
    fn mul(self, _: Unit) -> Unit {
        Unit
    }
}

struct CountOnly;

impl Weights for CountOnly {
    type W = Unit;
    fn one(&self) -> Unit {
        Unit
    }
    fn edge(&self, _: usize, _: Color) -> Unit {
        Unit
    }
    fn triangle(&self, _: usize, _: [Color; 3]) -> Unit {
        Unit
    }
    fn tet(&self, _: usize, _: [Color; 6]) -> Unit {
        Unit
    }
}

/// Closed-manifold weights: `Delta` per edge, `1/theta` per triangle, `Tet`
/// per tetrahedron. The tetrahedral network is dual to the simplex, so the
/// network edge between dual vertices `k, l` carries the color of the
/// simplicial edge `ij` with `{i, j, k, l} = {0, 1, 2, 3}`; with edges listed
/// as `01 02 03 12 13 23` that is the reversed list.
pub(crate) struct TvWeights<'a, T> {
    pub table: &'a RecouplingTable<T>,
}

impl<T: Real> Weights for TvWeights<'_, T> {
    type W = T;
    fn one(&self) -> T {
        T::one()
    }
    fn edge(&self, _: usize, c: Color) -> T {
        self.table.delta(c)
    }
    fn triangle(&self, _: usize, [a, b, c]: [Color; 3]) -> T {
        T::one() / self.table.theta(a, b, c)
    }
    fn tet(&self, _: usize, c: [Color; 6]) -> T {
        self.table.tet_k4(c[5], c[4], c[3], c[2], c[1], c[0])
    }
}

/// Number of edge colorings with every triangle admissible. Boundary edges
/// are colored freely.
pub fn count_admissible_colorings<T: Real>(t: &Triangulation, p: &RootParams<T>) -> u64 {
    let table = RecouplingTable::new(*p);
    let (count, _) = Plan::new(t).run(&table, &CountOnly, || 0u64, |n, _, _| *n += 1, |a, b| *a += b);
    count
}

/// Turaev–Viro invariant of a closed triangulation:
/// `eta^(2V) * sum over colorings of prod Delta * prod theta^-1 * prod Tet`.
pub fn tv_invariant<T: Real>(t: &Triangulation, p: &RootParams<T>) -> Result<StateSum<T>, TriangulationError> {
    t.require_closed()?;
    let table = RecouplingTable::new(*p);
    tv_with_table(t, &table)
}

pub(crate) fn tv_with_table<T: Real>(t: &Triangulation, table: &RecouplingTable<T>) -> Result<StateSum<T>, TriangulationError> {
    t.require_closed()?;
    let (sum, stats) =
        Plan::new(t).run(table, &TvWeights { table }, T::zero, |acc, _, w| *acc += w, |a, b| *a += b);
    let eta = table.params().eta();
    Ok(StateSum { value: eta.powi(2 * t.num_vertices() as i32) * sum, stats })
}

/// Dimension over GF(2) of the space of edge colorings in {0, 1} whose
/// triangle sums are even, by Gaussian elimination on the triangle-edge
/// incidence matrix.
pub fn binary_cocycle_dimension(t: &Triangulation) -> usize {
    let words = t.num_edges().div_ceil(64);
    let mut rows: Vec<Vec<u64>> = t
        .triangle_representatives()
        .into_iter()
        .map(|(tet, f)| {
            let mut row = vec![0u64; words];
            for e in t.face_edges(tet, f) {
                row[e / 64] ^= 1 << (e % 64);
            }
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..t.num_edges() {
        let bit = |r: &Vec<u64>| r[col / 64] >> (col % 64) & 1 == 1;
        let Some(pivot) = (rank..rows.len()).find(|&i| bit(&rows[i])) else { continue };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && bit(row) {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    t.num_edges() - rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(r: u32) -> RootParams<f64> {
        RootParams::new(r).unwrap()
    }

    #[test]
    fn counts_on_boundary_4_simplex() {
        let t = Triangulation::boundary_4_simplex();
        assert_eq!(count_admissible_colorings(&t, &p(3)), 16);
        assert_eq!(count_admissible_colorings(&t, &p(2)), 1);
        assert_eq!(binary_cocycle_dimension(&t), 4);
    }

    #[test]
    fn brute_force_count_agrees() {
        let t = Triangulation::boundary_4_simplex();
        let p = p(4);
        let reps = t.triangle_representatives();
        let mut brute = 0;
        for code in 0..3u32.pow(10) {
            let c: Vec<Color> = (0..10).map(|i| code / 3u32.pow(i) % 3).collect();
            if reps.iter().all(|&(tet, f)| {
                let [a, b, d] = t.face_edges(tet, f).map(|e| c[e]);
                p.is_admissible(a, b, d)
            }) {
                brute += 1;
            }
        }
        assert_eq!(count_admissible_colorings(&t, &p), brute);
    }

    #[test]
    fn sphere_values() {
        let t = Triangulation::boundary_4_simplex();
        for r in 3..=5 {
            let p = p(r);
            let z = tv_invariant(&t, &p).unwrap();
            let eta = p.eta();
            assert!((z.value - eta * eta).abs() < 1e-12, "r={r}: {}", z.value);
        }
        assert!((tv_invariant(&t, &p(3)).unwrap().value - 0.5).abs() < 1e-12);
        assert!((tv_invariant(&t, &p(4)).unwrap().value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn s2xs1_value_is_one() {
        let t = Triangulation::s2_x_s1();
        for r in 3..=6 {
            let z = tv_invariant(&t, &p(r)).unwrap();
            assert!((z.value - 1.0).abs() < 1e-12, "r={r}: {}", z.value);
        }
    }

    #[test]
    fn multiplicative_under_union() {
        let a = Triangulation::boundary_4_simplex();
        let b = Triangulation::s2_x_s1();
        let p = p(4);
        let ab = tv_invariant(&a.disjoint_union(&b), &p).unwrap().value;
        let prod = tv_invariant(&a, &p).unwrap().value * tv_invariant(&b, &p).unwrap().value;
        assert!((ab - prod).abs() < 1e-12);
    }

    #[test]
    fn open_triangulation_rejected() {
        let t = Triangulation::build(1, &[], false).unwrap();
        assert_eq!(tv_invariant(&t, &p(3)).unwrap_err(), TriangulationError::NotClosed(4));
        assert_eq!(count_admissible_colorings(&t, &p(3)), 2u64.pow(binary_cocycle_dimension(&t) as u32));
    }
}
