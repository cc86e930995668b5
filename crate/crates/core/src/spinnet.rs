//! Closed planar trivalent spin networks.
//!
//! A [`SpinGraph`] is a trivalent graph whose edges carry colors and whose
//! vertices carry a rotation (counter-clockwise order of incident edge ends).
//! The rotation system must describe a genus-0 embedding. Evaluation follows
//! the Kauffman–Lins bracket and proceeds by local reductions:
//!
//! * zero-colored edges are deleted;
//! * free loops contribute `Delta_c`;
//! * a non-zero bridge makes the whole value vanish;
//! * a bigon face merges into a single edge with factor `theta / Delta`;
//! * a triangular face collapses to a vertex with factor `Tet / theta`;
//! * otherwise an F-move is applied to an edge of the smallest face, which
//!   shrinks that face by one.
//!
//! Every planar trivalent graph has a face of degree at most five, so the
//! reducer needs at most two F-moves per removed pair of vertices.
//!
//! Edge ends are addressed as half-edges: half-edge `2e` is the first end of
//! edge `e`, `2e + 1` the second.

use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::recoupling::{Color, RecouplingError, RecouplingTable, RootParams};
use crate::scalar::Real;
use crate::text::{expect_arity, token_lines, ParseError};

/// Default bound on nested F-moves during evaluation.
pub const DEFAULT_MAX_DEPTH: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpinNetError {
    #[error("vertex {vertex} is not trivalent: {reason}")]
    NotTrivalent { vertex: usize, reason: String },
    #[error("vertex {vertex} carries inadmissible colors {colors:?}")]
    NotAdmissibleVertex { vertex: usize, colors: [Color; 3] },
    #[error("rotation system is not planar: V - E + F = {euler}, expected {expected}")]
    NotPlanar { euler: i64, expected: i64 },
    #[error("reduction did not finish within {depth} nested F-moves")]
    GraphIrreducible { depth: usize },
    #[error("edge {0} is a loop")]
    EdgeIsLoop(usize),
    #[error("edge {0} does not exist")]
    UnknownEdge(usize),
    #[error("edge {edge} has color {color}, expected 0")]
    NonZeroEdge { edge: usize, color: Color },
    #[error(transparent)]
    Recoupling(#[from] RecouplingError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Closed trivalent colored graph with a planar rotation system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinGraph {
    colors: Vec<Color>,
    rotation: Vec<[usize; 3]>,
    free_loops: Vec<Color>,
    edge_labels: Vec<usize>,
    vertex_labels: Vec<usize>,
}

impl SpinGraph {
    /// Builds a graph from `edges[e] = (v1, v2, color)` and
    /// `rotation[v] = [e_a, e_b, e_c]` (counter-clockwise; a loop is listed
    /// twice at its vertex).
    pub fn new(edges: &[(usize, usize, Color)], rotation: &[[usize; 3]]) -> Result<Self, SpinNetError> {
        let nv = rotation.len();
        for (e, &(a, b, _)) in edges.iter().enumerate() {
            if a >= nv || b >= nv {
                return Err(SpinNetError::NotTrivalent {
                    vertex: a.max(b),
                    reason: format!("edge {e} ends at a vertex without a rotation"),
                });
            }
        }
        let mut used = vec![false; 2 * edges.len()];
        let mut halves = Vec::with_capacity(nv);
        for (v, rot) in rotation.iter().enumerate() {
            let mut hs = [0usize; 3];
            for (slot, &e) in rot.iter().enumerate() {
                let &(a, b, _) = edges.get(e).ok_or(SpinNetError::UnknownEdge(e))?;
                let h = if a == v && !used[2 * e] {
                    2 * e
                } else if b == v && !used[2 * e + 1] {
                    2 * e + 1
                } else {
                    return Err(SpinNetError::NotTrivalent {
                        vertex: v,
                        reason: format!("edge {e} listed more often than it meets the vertex"),
                    });
                };
                used[h] = true;
                hs[slot] = h;
            }
            halves.push(hs);
        }
        if let Some(h) = used.iter().position(|u| !u) {
            let (a, b, _) = edges[h / 2];
            return Err(SpinNetError::NotTrivalent {
                vertex: if h % 2 == 0 { a } else { b },
                reason: format!("edge {} missing from the rotation", h / 2),
            });
        }
        let g = Self {
            colors: edges.iter().map(|e| e.2).collect(),
            rotation: halves,
            free_loops: Vec::new(),
            edge_labels: (0..edges.len()).collect(),
            vertex_labels: (0..nv).collect(),
        };
        g.check_planar()?;
        Ok(g)
    }

    /// Simple graph drawn with straight edges at the given points; the
    /// rotation at each vertex is read off from the edge angles.
    pub fn from_planar_drawing(points: &[(f64, f64)], edges: &[(usize, usize, Color)]) -> Result<Self, SpinNetError> {
        let mut incident: Vec<Vec<(f64, usize)>> = vec![Vec::new(); points.len()];
        for (e, &(a, b, _)) in edges.iter().enumerate() {
            let angle = |from: usize, to: usize| {
                let (x0, y0) = points[from];
                let (x1, y1) = points[to];
                (y1 - y0).atan2(x1 - x0)
            };
            incident[a].push((angle(a, b), e));
            incident[b].push((angle(b, a), e));
        }
        let mut rotation = Vec::with_capacity(points.len());
        for (v, mut inc) in incident.into_iter().enumerate() {
            if inc.len() != 3 {
                return Err(SpinNetError::NotTrivalent { vertex: v, reason: format!("degree {}", inc.len()) });
            }
            inc.sort_by(|x, y| x.0.total_cmp(&y.0));
            rotation.push([inc[0].1, inc[1].1, inc[2].1]);
        }
        Self::new(edges, &rotation)
    }

    /// Network consisting of free loops only.
    pub fn loops(colors: &[Color]) -> Self {
        Self {
            colors: Vec::new(),
            rotation: Vec::new(),
            free_loops: colors.to_vec(),
            edge_labels: Vec::new(),
            vertex_labels: Vec::new(),
        }
    }

    /// Theta graph: two vertices joined by edges colored `a`, `b`, `c`.
    pub fn theta(a: Color, b: Color, c: Color) -> Self {
        Self::new(&[(0, 1, a), (0, 1, b), (0, 1, c)], &[[0, 1, 2], [0, 2, 1]]).expect("theta graph is planar")
    }

    /// 1-skeleton of a tetrahedron evaluating to `Tet[a b e; c d f]`.
    pub fn tetrahedron(a: Color, b: Color, e: Color, c: Color, d: Color, f: Color) -> Self {
        // vertices (a,b,e), (c,d,e), (a,d,f), (b,c,f)
        let points = [(0.0, 0.0), (0.0, 1.0), (-1.0, -1.0), (1.0, -1.0)];
        let edges = [(0, 1, e), (2, 3, f), (0, 2, a), (0, 3, b), (1, 3, c), (1, 2, d)];
        Self::from_planar_drawing(&points, &edges).expect("tetrahedron is planar")
    }

    /// Triangular prism: triangle `inner` (edges 01, 12, 20), triangle
    /// `outer` (edges 34, 45, 53) and spokes `0-3`, `1-4`, `2-5`.
    pub fn prism(inner: [Color; 3], outer: [Color; 3], spokes: [Color; 3]) -> Result<Self, SpinNetError> {
        let points = [(0.0, 1.0), (-0.87, -0.5), (0.87, -0.5), (0.0, 3.0), (-2.6, -1.5), (2.6, -1.5)];
        let edges = [
            (0, 1, inner[0]),
            (1, 2, inner[1]),
            (2, 0, inner[2]),
            (3, 4, outer[0]),
            (4, 5, outer[1]),
            (5, 3, outer[2]),
            (0, 3, spokes[0]),
            (1, 4, spokes[1]),
            (2, 5, spokes[2]),
        ];
        Self::from_planar_drawing(&points, &edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.rotation.len()
    }

    pub fn num_edges(&self) -> usize {
        self.colors.len()
    }

    pub fn free_loops(&self) -> &[Color] {
        &self.free_loops
    }

    pub fn edge_color(&self, e: usize) -> Color {
        self.colors[e]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    /// Endpoints `(v1, v2)` of an edge.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        let owner = self.owners();
        (owner[2 * e], owner[2 * e + 1])
    }

    /// Edge ids around a vertex in counter-clockwise order.
    pub fn rotation(&self, v: usize) -> [usize; 3] {
        self.rotation[v].map(|h| h / 2)
    }

    /// Same graph with one edge recolored.
    pub fn recolored(&self, e: usize, color: Color) -> Self {
        let mut g = self.clone();
        g.colors[e] = color;
        g
    }

    pub fn with_free_loop(mut self, color: Color) -> Self {
        self.free_loops.push(color);
        self
    }

    pub fn disjoint_union(&self, other: &Self) -> Self {
        let ne = self.colors.len();
        let nv = self.rotation.len();
        let mut g = self.clone();
        g.colors.extend_from_slice(&other.colors);
        g.rotation.extend(other.rotation.iter().map(|r| r.map(|h| h + 2 * ne)));
        g.free_loops.extend_from_slice(&other.free_loops);
        g.edge_labels = (0..g.colors.len()).collect();
        g.vertex_labels = (0..nv + other.rotation.len()).collect();
        g
    }

    fn owners(&self) -> Vec<usize> {
        let mut owner = vec![usize::MAX; 2 * self.colors.len()];
        for (v, rot) in self.rotation.iter().enumerate() {
            for &h in rot {
                owner[h] = v;
            }
        }
        owner
    }

    /// Faces as cyclic lists of half-edges (each half-edge read as leaving
    /// its vertex).
    pub fn faces(&self) -> Vec<Vec<usize>> {
        Net::from_graph(self).faces().0
    }

    fn components(&self) -> usize {
        let owner = self.owners();
        let mut parent: Vec<usize> = (0..self.rotation.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for e in 0..self.colors.len() {
            let (a, b) = (find(&mut parent, owner[2 * e]), find(&mut parent, owner[2 * e + 1]));
            parent[a] = b;
        }
        (0..self.rotation.len()).filter(|&v| find(&mut parent, v) == v).count()
    }

    /// Euler characteristic `V - E + F` of the embedded graph (free loops
    /// excluded).
    pub fn euler_characteristic(&self) -> i64 {
        self.rotation.len() as i64 - self.colors.len() as i64 + self.faces().len() as i64
    }

    pub fn is_planar(&self) -> bool {
        self.euler_characteristic() == 2 * self.components() as i64
    }

    fn check_planar(&self) -> Result<(), SpinNetError> {
        let expected = 2 * self.components() as i64;
        let euler = self.euler_characteristic();
        if euler == expected {
            Ok(())
        } else {
            Err(SpinNetError::NotPlanar { euler, expected })
        }
    }

    /// Checks every color against the level and every vertex for
    /// admissibility.
    pub fn check_admissible<T: Real>(&self, p: &RootParams<T>) -> Result<(), SpinNetError> {
        for &c in self.colors.iter().chain(&self.free_loops) {
            p.check_color(c)?;
        }
        for (v, rot) in self.rotation.iter().enumerate() {
            let cs = rot.map(|h| self.colors[h / 2]);
            if !p.is_admissible(cs[0], cs[1], cs[2]) {
                return Err(SpinNetError::NotAdmissibleVertex { vertex: v, colors: cs });
            }
        }
        Ok(())
    }

    /// Deletes a zero-colored edge, merging the remaining edge ends at each
    /// endpoint.
    pub fn remove_zero_edge(&self, e: usize) -> Result<Self, SpinNetError> {
        let color = *self.colors.get(e).ok_or(SpinNetError::UnknownEdge(e))?;
        if color != 0 {
            return Err(SpinNetError::NonZeroEdge { edge: e, color });
        }
        let mut net = Net::from_graph(self);
        net.delete_edge(e);
        Ok(net.into_graph())
    }

    /// Parses the text format:
    ///
    /// ```text
    /// edge <id> <v1> <v2> <color>
    /// rot <v> <e_a> <e_b> <e_c>
    /// loop <id> <color>            # free loop
    /// ```
    pub fn parse(input: &str) -> Result<Self, SpinNetError> {
        let mut edges: Vec<(usize, usize, usize, Color)> = Vec::new();
        let mut rots: Vec<(usize, [usize; 3])> = Vec::new();
        let mut loops: Vec<Color> = Vec::new();
        for tokens in token_lines(input) {
            match tokens[0].text {
                "edge" => {
                    expect_arity(&tokens, 4)?;
                    let id = tokens[1].parse("an edge id")?;
                    if edges.iter().any(|e| e.0 == id) {
                        return Err(tokens[1].error(format!("duplicate edge {id}")).into());
                    }
                    edges.push((id, tokens[2].parse("a vertex id")?, tokens[3].parse("a vertex id")?, tokens[4].parse("a color")?));
                }
                "rot" => {
                    expect_arity(&tokens, 4)?;
                    let v = tokens[1].parse("a vertex id")?;
                    if rots.iter().any(|r| r.0 == v) {
                        return Err(tokens[1].error(format!("duplicate rotation for vertex {v}")).into());
                    }
                    let mut es = [0usize; 3];
                    for (slot, tok) in es.iter_mut().zip(&tokens[2..]) {
                        *slot = tok.parse("an edge id")?;
                        if !edges.iter().any(|e| e.0 == *slot) {
                            return Err(tok.error(format!("unknown edge {}", *slot)).into());
                        }
                    }
                    rots.push((v, es));
                }
                "loop" => {
                    expect_arity(&tokens, 2)?;
                    let _: usize = tokens[1].parse("a loop id")?;
                    loops.push(tokens[2].parse("a color")?);
                }
                other => return Err(tokens[0].error(format!("unknown directive `{other}`")).into()),
            }
        }
        let vertex_index = |v: usize| rots.iter().position(|r| r.0 == v);
        let mut dense_edges = Vec::with_capacity(edges.len());
        for &(id, a, b, c) in &edges {
            let (Some(ia), Some(ib)) = (vertex_index(a), vertex_index(b)) else {
                return Err(SpinNetError::NotTrivalent {
                    vertex: if vertex_index(a).is_none() { a } else { b },
                    reason: format!("edge {id} ends at a vertex without a rotation"),
                });
            };
            dense_edges.push((ia, ib, c));
        }
        let edge_index = |id: usize| edges.iter().position(|e| e.0 == id).unwrap();
        let dense_rot: Vec<[usize; 3]> = rots.iter().map(|r| r.1.map(edge_index)).collect();
        let mut g = Self::new(&dense_edges, &dense_rot)?;
        g.free_loops = loops;
        g.edge_labels = edges.iter().map(|e| e.0).collect();
        g.vertex_labels = rots.iter().map(|r| r.0).collect();
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let owner = self.owners();
        let mut out = String::new();
        for e in 0..self.colors.len() {
            let _ = writeln!(
                out,
                "edge {} {} {} {}",
                self.edge_labels[e],
                self.vertex_labels[owner[2 * e]],
                self.vertex_labels[owner[2 * e + 1]],
                self.colors[e]
            );
        }
        for (v, rot) in self.rotation.iter().enumerate() {
            let es = rot.map(|h| self.edge_labels[h / 2]);
            let _ = writeln!(out, "rot {} {} {} {}", self.vertex_labels[v], es[0], es[1], es[2]);
        }
        for (i, c) in self.free_loops.iter().enumerate() {
            let _ = writeln!(out, "loop {i} {c}");
        }
        out
    }
}

/// Kauffman–Lins evaluation of a spin network.
pub fn evaluate<T: Real>(g: &SpinGraph, p: &RootParams<T>) -> Result<T, SpinNetError> {
    g.check_admissible(p)?;
    Evaluator::new(RecouplingTable::new(*p)).evaluate(g)
}

/// One F-move on `edge`: the weighted graphs whose weighted evaluations sum
/// to the evaluation of `g`. Branches are returned in increasing order of
/// the new color and only for admissible new colors.
pub fn apply_fmove<T: Real>(g: &SpinGraph, edge: usize, p: &RootParams<T>) -> Result<Vec<(T, SpinGraph)>, SpinNetError> {
    g.check_admissible(p)?;
    let table = RecouplingTable::new(*p);
    fmove_branches(g, edge, &table)
}

fn fmove_branches<T: Real>(g: &SpinGraph, edge: usize, table: &RecouplingTable<T>) -> Result<Vec<(T, SpinGraph)>, SpinNetError> {
    if edge >= g.num_edges() {
        return Err(SpinNetError::UnknownEdge(edge));
    }
    let net = Net::from_graph(g);
    if net.owner[2 * edge] == net.owner[2 * edge + 1] {
        return Err(SpinNetError::EdgeIsLoop(edge));
    }
    Ok(net
        .fmove_branches(edge, table)
        .into_iter()
        .map(|(w, n)| (w, n.into_graph()))
        .collect())
}

/// Reusable evaluator holding the recoupling tables of one level.
pub struct Evaluator<T> {
    table: RecouplingTable<T>,
    max_depth: usize,
}

impl<T: Real> Evaluator<T> {
    pub fn new(table: RecouplingTable<T>) -> Self {
        Self { table, max_depth: DEFAULT_MAX_DEPTH }
    }

    pub fn with_max_depth(mut self, depth: usize) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn table(&self) -> &RecouplingTable<T> {
        &self.table
    }

    /// Evaluates `g`; the caller is responsible for admissibility (see
    /// [`SpinGraph::check_admissible`]).
    pub fn evaluate(&self, g: &SpinGraph) -> Result<T, SpinNetError> {
        self.reduce(Net::from_graph(g), 0)
    }

    /// Sum over the branches of one F-move, evaluated concurrently and
    /// accumulated in branch order.
    pub fn evaluate_fmove_expansion(&self, g: &SpinGraph, edge: usize) -> Result<T, SpinNetError> {
        let branches = fmove_branches(g, edge, &self.table)?;
        let values: Vec<Result<T, SpinNetError>> =
            branches.par_iter().map(|(w, b)| self.evaluate(b).map(|v| *w * v)).collect();
        values.into_iter().try_fold(T::zero(), |acc, v| Ok(acc + v?))
    }

    fn reduce(&self, mut net: Net, depth: usize) -> Result<T, SpinNetError> {
        let t = &self.table;
        let mut factor = T::one();
        loop {
            net.delete_zero_edges();
            for c in net.free_loops.drain(..) {
                factor *= t.delta(c);
            }
            if net.live_vertices() == 0 {
                return Ok(factor);
            }
            let (faces, face_of) = net.faces();
            let bridge = (0..net.color.len())
                .any(|e| net.alive[e] && face_of[2 * e] == face_of[2 * e + 1] && net.color[e] != 0);
            if bridge {
                return Ok(T::zero());
            }
            let smallest = faces.iter().min_by_key(|f| f.len()).expect("live graph has faces");
            match smallest.len() {
                2 => match net.merge_bubble(smallest[0], smallest[1], t) {
                    Some(w) => factor *= w,
                    None => return Ok(T::zero()),
                },
                3 => {
                    let w = net.collapse_triangle([smallest[0], smallest[1], smallest[2]], t);
                    if w == T::zero() {
                        return Ok(T::zero());
                    }
                    factor *= w;
                }
                _ => {
                    if depth >= self.max_depth {
                        return Err(SpinNetError::GraphIrreducible { depth });
                    }
                    let edge = smallest.iter().map(|h| h / 2).min().unwrap();
                    let mut sum = T::zero();
                    for (w, branch) in net.fmove_branches(edge, t) {
                        sum += w * self.reduce(branch, depth + 1)?;
                    }
                    return Ok(factor * sum);
                }
            }
        }
    }
}

/// Mutable working copy used by the reducer. Dead edges are flagged, dead
/// vertices have an empty rotation.
#[derive(Clone)]
struct Net {
    color: Vec<Color>,
    alive: Vec<bool>,
    owner: Vec<usize>,
    rot: Vec<Vec<usize>>,
    free_loops: Vec<Color>,
}

impl Net {
    fn from_graph(g: &SpinGraph) -> Self {
        Self {
            color: g.colors.clone(),
            alive: vec![true; g.colors.len()],
            owner: g.owners(),
            rot: g.rotation.iter().map(|r| r.to_vec()).collect(),
            free_loops: g.free_loops.clone(),
        }
    }

    fn into_graph(self) -> SpinGraph {
        let mut edge_map = vec![usize::MAX; self.color.len()];
        let mut colors = Vec::new();
        for (e, slot) in edge_map.iter_mut().enumerate() {
            if self.alive[e] {
                *slot = colors.len();
                colors.push(self.color[e]);
            }
        }
        let rotation: Vec<[usize; 3]> = self
            .rot
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| {
                debug_assert_eq!(r.len(), 3);
                [0, 1, 2].map(|i| 2 * edge_map[r[i] / 2] + r[i] % 2)
            })
            .collect();
        SpinGraph {
            edge_labels: (0..colors.len()).collect(),
            vertex_labels: (0..rotation.len()).collect(),
            colors,
            rotation,
            free_loops: self.free_loops,
        }
    }

    fn live_vertices(&self) -> usize {
        self.rot.iter().filter(|r| !r.is_empty()).count()
    }

    /// Successor of `h` in the rotation at its vertex.
    fn succ(&self, h: usize) -> usize {
        let r = &self.rot[self.owner[h]];
        let i = r.iter().position(|&x| x == h).expect("half-edge in rotation");
        r[(i + 1) % r.len()]
    }

    /// Face orbits of the darts; each face is traversed by following a
    /// dart to its twin and turning to the next edge in the rotation.
    fn faces(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let n = self.color.len() * 2;
        let mut face_of = vec![usize::MAX; n];
        let mut faces = Vec::new();
        for start in 0..n {
            if !self.alive[start / 2] || face_of[start] != usize::MAX {
                continue;
            }
            let mut face = Vec::new();
            let mut h = start;
            while face_of[h] == usize::MAX {
                face_of[h] = faces.len();
                face.push(h);
                h = self.succ(h ^ 1);
            }
            faces.push(face);
        }
        (faces, face_of)
    }

    fn kill_edge(&mut self, e: usize) {
        self.alive[e] = false;
    }

    /// Removes an edge and repairs the vertices it touched.
    fn delete_edge(&mut self, e: usize) {
        let ends = [self.owner[2 * e], self.owner[2 * e + 1]];
        for h in [2 * e, 2 * e + 1] {
            let v = self.owner[h];
            self.rot[v].retain(|&x| x != h);
        }
        self.kill_edge(e);
        for v in ends {
            self.repair_vertex(v);
        }
    }

    fn repair_vertex(&mut self, v: usize) {
        match self.rot[v].len() {
            2 => {
                let (h1, h2) = (self.rot[v][0], self.rot[v][1]);
                self.rot[v].clear();
                if h1 ^ 1 == h2 {
                    self.free_loops.push(self.color[h1 / 2]);
                    self.kill_edge(h1 / 2);
                } else {
                    debug_assert_eq!(self.color[h1 / 2], self.color[h2 / 2]);
                    let far = h2 ^ 1;
                    let w = self.owner[far];
                    let slot = self.rot[w].iter().position(|&x| x == far).unwrap();
                    self.rot[w][slot] = h1;
                    self.owner[h1] = w;
                    self.kill_edge(h2 / 2);
                }
            }
            1 => {
                let stem = self.rot[v][0];
                debug_assert_eq!(self.color[stem / 2], 0);
                self.delete_edge(stem / 2);
                self.rot[v].clear();
            }
            _ => {}
        }
    }

    fn delete_zero_edges(&mut self) {
        while let Some(e) = (0..self.color.len()).find(|&e| self.alive[e] && self.color[e] == 0) {
            self.delete_edge(e);
        }
    }

    /// The half-edge at `v` other than `x` and `y`.
    fn third(&self, v: usize, x: usize, y: usize) -> usize {
        *self.rot[v].iter().find(|&&h| h != x && h != y).expect("trivalent vertex")
    }

    /// Bigon face with darts `d1: u -> v`, `d2: v -> u`. Returns the scalar
    /// factor, or `None` when the two outer legs differ in color.
    fn merge_bubble<T: Real>(&mut self, d1: usize, d2: usize, t: &RecouplingTable<T>) -> Option<T> {
        let (u, v) = (self.owner[d1], self.owner[d2]);
        let (p, q) = (self.color[d1 / 2], self.color[d2 / 2]);
        let xu = self.third(u, d1, d2 ^ 1);
        let xv = self.third(v, d2, d1 ^ 1);
        self.kill_edge(d1 / 2);
        self.kill_edge(d2 / 2);
        self.rot[u].clear();
        self.rot[v].clear();
        if xu ^ 1 == xv {
            self.kill_edge(xu / 2);
            return Some(t.theta(p, q, self.color[xu / 2]));
        }
        let x = self.color[xu / 2];
        if x != self.color[xv / 2] {
            return None;
        }
        let far = xv ^ 1;
        let w = self.owner[far];
        let slot = self.rot[w].iter().position(|&h| h == far).unwrap();
        self.rot[w][slot] = xu;
        self.owner[xu] = w;
        self.kill_edge(xv / 2);
        Some(t.theta(x, p, q) / t.delta(x))
    }

    /// Triangular face traversed `P -> Q -> R`; replaced by one vertex.
    fn collapse_triangle<T: Real>(&mut self, darts: [usize; 3], t: &RecouplingTable<T>) -> T {
        let [d1, d2, d3] = darts;
        let (vp, vq, vr) = (self.owner[d1], self.owner[d2], self.owner[d3]);
        let leg_p = self.third(vp, d1, d3 ^ 1);
        let leg_q = self.third(vq, d2, d1 ^ 1);
        let leg_r = self.third(vr, d3, d2 ^ 1);
        let [a, b, c] = [leg_p, leg_q, leg_r].map(|h| self.color[h / 2]);
        let (pq, qr, rp) = (self.color[d1 / 2], self.color[d2 / 2], self.color[d3 / 2]);
        let theta = t.theta(a, b, c);
        let w = if theta == T::zero() { T::zero() } else { t.tet_k4(a, b, c, pq, rp, qr) / theta };
        for d in darts {
            self.kill_edge(d / 2);
        }
        self.rot[vq].clear();
        self.rot[vr].clear();
        self.rot[vp] = vec![leg_p, leg_r, leg_q];
        self.owner[leg_q] = vp;
        self.owner[leg_r] = vp;
        w
    }

    /// Re-channels edge `e` (ends at distinct vertices) for every admissible
    /// new color.
    fn fmove_branches<T: Real>(&self, e: usize, t: &RecouplingTable<T>) -> Vec<(T, Net)> {
        let (h0, h1) = (2 * e, 2 * e + 1);
        let (u, v) = (self.owner[h0], self.owner[h1]);
        let x1 = self.succ(h0);
        let x2 = self.succ(x1);
        let y1 = self.succ(h1);
        let y2 = self.succ(y1);
        let [a, b, c, d] = [x1, x2, y1, y2].map(|h| self.color[h / 2]);
        let old = self.color[e];
        let mut out = Vec::new();
        for f in 0..t.num_colors() as Color {
            let w = t.fmove(a, b, c, d, old, f);
            if w == T::zero() {
                continue;
            }
            let mut n = self.clone();
            n.color[e] = f;
            n.rot[u] = vec![h0, x2, y1];
            n.rot[v] = vec![h1, y2, x1];
            n.owner[y1] = u;
            n.owner[x1] = v;
            out.push((w, n));
        }
        out
    }
}
