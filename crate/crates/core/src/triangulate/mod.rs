//! Glued-tetrahedra triangulations and the Turaev–Viro state sum.
//!
//! Tetrahedra have corners `0..4`; face `i` is the face opposite corner `i`.
//! A gluing identifies face `f1` of tetrahedron `t1` with face `f2` of `t2`
//! through a corner bijection. Pseudo-triangulations (several faces of one
//! tetrahedron glued together, few tetrahedra) are accepted.
//!
//! Text format:
//!
//! ```text
//! tet 0
//! tet 1
//! glue 0 0 1 3 123   # face 0 of tet 0 onto face 3 of tet 1
//! oriented           # optional: require a consistent orientation
//! ```
//!
//! The permutation code lists, in order, the images in `t2` of the corners of
//! face `f1` taken in increasing order.

mod pachner;
mod statesum;
mod surface;
mod tvcode;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::recoupling::RecouplingError;
use crate::text::{expect_arity, token_lines, ParseError};

pub use pachner::{random_moves, Move};
pub use statesum::{binary_cocycle_dimension, count_admissible_colorings, tv_invariant, EnumerationStats, StateSum};
pub use surface::{prism, Prism, SurfaceTriangulation};
pub use tvcode::{tv_boundary_operator, BoundaryOperator, ComplexMatrix};

/// Local edges of a tetrahedron as corner pairs.
pub const TET_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Local edge index of the corner pair `{i, j}`.
pub fn local_edge(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    TET_EDGES.iter().position(|&e| e == (a, b)).expect("distinct corners")
}

/// The three corners of face `f` in increasing order.
pub fn face_corners(f: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut k = 0;
    for c in 0..4 {
        if c != f {
            out[k] = c;
            k += 1;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TriangulationError {
    #[error("malformed gluing: {0}")]
    MalformedGluing(String),
    #[error("gluing is not an involution: {0}")]
    NonInvolutiveGluing(String),
    #[error("declared orientation is inconsistent at the gluing of tet {tet} face {face}")]
    OrientationMismatch { tet: usize, face: usize },
    #[error("triangulation has {0} boundary faces")]
    NotClosed(usize),
    #[error("not a closed 3-manifold: V - E + F - T = {0}")]
    NotAManifold(i64),
    #[error("not a closed surface: {0}")]
    NotASurface(String),
    #[error("move not applicable: {0}")]
    MoveNotApplicable(String),
    #[error(transparent)]
    Recoupling(#[from] RecouplingError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Target of a glued face: `perm[i]` is the corner of `tet` matched with
/// corner `i` of the source; `perm[source face] = face`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceGluing {
    pub tet: usize,
    pub face: usize,
    pub perm: [usize; 4],
}

/// One requested gluing, as in the text format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gluing {
    pub t1: usize,
    pub f1: usize,
    pub t2: usize,
    pub f2: usize,
    /// Images of the corners of face `f1` (increasing order) in `t2`.
    pub images: [usize; 3],
}

/// Closed or bounded triangulation with derived simplex classes.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    glue: Vec<[Option<FaceGluing>; 4]>,
    oriented: bool,
    vertex_class: Vec<[usize; 4]>,
    edge_class: Vec<[usize; 6]>,
    triangle_class: Vec<[usize; 4]>,
    num_vertices: usize,
    num_edges: usize,
    num_triangles: usize,
    orientation: Option<Vec<bool>>,
}

fn parity(perm: &[usize; 4]) -> bool {
    let mut inversions = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Dense class ids numbered by first appearance.
    fn classes(&mut self) -> (Vec<usize>, usize) {
        let mut ids = HashMap::new();
        let out = (0..self.0.len())
            .map(|x| {
                let r = self.find(x);
                let n = ids.len();
                *ids.entry(r).or_insert(n)
            })
            .collect();
        (out, ids.len())
    }
}

impl Triangulation {
    /// Builds a triangulation of `num_tets` tetrahedra. A gluing may be
    /// listed from either side, or from both sides if the two listings agree.
    pub fn build(num_tets: usize, gluings: &[Gluing], oriented: bool) -> Result<Self, TriangulationError> {
        let mut glue: Vec<[Option<FaceGluing>; 4]> = vec![[None; 4]; num_tets];
        for g in gluings {
            if g.t1 >= num_tets || g.t2 >= num_tets {
                return Err(TriangulationError::MalformedGluing(format!(
                    "tetrahedron index out of range in gluing {} {} {} {}",
                    g.t1, g.f1, g.t2, g.f2
                )));
            }
            if g.f1 > 3 || g.f2 > 3 {
                return Err(TriangulationError::MalformedGluing(format!("face index out of range in gluing of tet {}", g.t1)));
            }
            let mut perm = [usize::MAX; 4];
            perm[g.f1] = g.f2;
            for (&c, &img) in face_corners(g.f1).iter().zip(&g.images) {
                perm[c] = img;
            }
            let mut seen = [false; 4];
            for &x in &perm {
                if x > 3 || seen[x] {
                    return Err(TriangulationError::MalformedGluing(format!(
                        "corner map of tet {} face {} is not a bijection onto face {}",
                        g.t1, g.f1, g.f2
                    )));
                }
                seen[x] = true;
            }
            if (g.t1, g.f1) == (g.t2, g.f2) {
                return Err(TriangulationError::NonInvolutiveGluing(format!("tet {} face {} glued to itself", g.t1, g.f1)));
            }
            let mut inv = [0; 4];
            for (i, &x) in perm.iter().enumerate() {
                inv[x] = i;
            }
            let forward = FaceGluing { tet: g.t2, face: g.f2, perm };
            let backward = FaceGluing { tet: g.t1, face: g.f1, perm: inv };
            for (slot, value) in [((g.t1, g.f1), forward), ((g.t2, g.f2), backward)] {
                match glue[slot.0][slot.1] {
                    None => glue[slot.0][slot.1] = Some(value),
                    Some(existing) if existing == value => {}
                    Some(_) => {
                        return Err(TriangulationError::NonInvolutiveGluing(format!(
                            "tet {} face {} glued more than once",
                            slot.0, slot.1
                        )))
                    }
                }
            }
        }
        Self::from_glue(glue, oriented)
    }

    /// Simplicial input: each tetrahedron is a list of four distinct vertex
    /// labels and faces with equal label sets are glued.
    pub fn from_simplices(tets: &[[usize; 4]], oriented: bool) -> Result<Self, TriangulationError> {
        let mut faces: BTreeMap<[usize; 3], Vec<(usize, usize)>> = BTreeMap::new();
        for (t, labels) in tets.iter().enumerate() {
            for f in 0..4 {
                let mut key = face_corners(f).map(|c| labels[c]);
                key.sort_unstable();
                if key[0] == key[1] || key[1] == key[2] {
                    return Err(TriangulationError::MalformedGluing(format!("tet {t} repeats a vertex label")));
                }
                faces.entry(key).or_default().push((t, f));
            }
        }
        let mut gluings = Vec::new();
        for (key, slots) in faces {
            match slots[..] {
                [_] => {}
                [(t1, f1), (t2, f2)] => {
                    let images = face_corners(f1).map(|c| {
                        let label = tets[t1][c];
                        tets[t2].iter().position(|&l| l == label).unwrap()
                    });
                    gluings.push(Gluing { t1, f1, t2, f2, images });
                }
                _ => {
                    return Err(TriangulationError::NonInvolutiveGluing(format!(
                        "triangle {key:?} lies on {} tetrahedra",
                        slots.len()
                    )))
                }
            }
        }
        Self::build(tets.len(), &gluings, oriented)
    }

    fn from_glue(glue: Vec<[Option<FaceGluing>; 4]>, oriented: bool) -> Result<Self, TriangulationError> {
        let n = glue.len();
        let mut vertices = UnionFind::new(4 * n);
        let mut edges = UnionFind::new(6 * n);
        for (t, faces) in glue.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                let Some(g) = g else { continue };
                for c in face_corners(f) {
                    vertices.union(4 * t + c, 4 * g.tet + g.perm[c]);
                }
                let fc = face_corners(f);
                for (i, j) in [(fc[0], fc[1]), (fc[0], fc[2]), (fc[1], fc[2])] {
                    edges.union(6 * t + local_edge(i, j), 6 * g.tet + local_edge(g.perm[i], g.perm[j]));
                }
            }
        }
        let (vc, num_vertices) = vertices.classes();
        let (ec, num_edges) = edges.classes();
        let mut triangle_class = vec![[usize::MAX; 4]; n];
        let mut num_triangles = 0;
        for t in 0..n {
            for f in 0..4 {
                if triangle_class[t][f] != usize::MAX {
                    continue;
                }
                triangle_class[t][f] = num_triangles;
                if let Some(g) = glue[t][f] {
                    triangle_class[g.tet][g.face] = num_triangles;
                }
                num_triangles += 1;
            }
        }
        let mut tri = Self {
            vertex_class: (0..n).map(|t| [0, 1, 2, 3].map(|c| vc[4 * t + c])).collect(),
            edge_class: (0..n).map(|t| [0, 1, 2, 3, 4, 5].map(|e| ec[6 * t + e])).collect(),
            triangle_class,
            num_vertices,
            num_edges,
            num_triangles,
            glue,
            oriented,
            orientation: None,
        };
        tri.orientation = tri.find_orientation();
        if oriented && tri.orientation.is_none() {
            let (tet, face) = tri.orientation_conflict();
            return Err(TriangulationError::OrientationMismatch { tet, face });
        }
        if tri.is_closed() && tri.euler_characteristic() != 0 {
            return Err(TriangulationError::NotAManifold(tri.euler_characteristic()));
        }
        Ok(tri)
    }

    // Orientation signs with o(t1) o(t2) sgn(perm) = -1 across every gluing.
    fn propagate_orientation(&self) -> Result<Vec<bool>, (usize, usize)> {
        let n = self.glue.len();
        let mut sign: Vec<Option<bool>> = vec![None; n];
        for root in 0..n {
            if sign[root].is_some() {
                continue;
            }
            sign[root] = Some(true);
            let mut stack = vec![root];
            while let Some(t) = stack.pop() {
                for (f, g) in self.glue[t].iter().enumerate() {
                    let Some(g) = g else { continue };
                    let want = sign[t].unwrap() == parity(&g.perm);
                    match sign[g.tet] {
                        None => {
                            sign[g.tet] = Some(want);
                            stack.push(g.tet);
                        }
                        Some(s) if s == want => {}
                        Some(_) => return Err((t, f)),
                    }
                }
            }
        }
        Ok(sign.into_iter().map(Option::unwrap).collect())
    }

    fn find_orientation(&self) -> Option<Vec<bool>> {
        self.propagate_orientation().ok()
    }

    fn orientation_conflict(&self) -> (usize, usize) {
        self.propagate_orientation().err().unwrap_or((0, 0))
    }

    pub fn num_tets(&self) -> usize {
        self.glue.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn num_triangles(&self) -> usize {
        self.num_triangles
    }

    pub fn is_oriented(&self) -> bool {
        self.oriented
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation.is_some()
    }

    /// `(tet, face)` slots that are not glued.
    pub fn boundary_faces(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (t, faces) in self.glue.iter().enumerate() {
            for (f, g) in faces.iter().enumerate() {
                if g.is_none() {
                    out.push((t, f));
                }
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.glue.iter().all(|faces| faces.iter().all(Option::is_some))
    }

    pub fn require_closed(&self) -> Result<(), TriangulationError> {
        match self.boundary_faces().len() {
            0 => Ok(()),
            k => Err(TriangulationError::NotClosed(k)),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.num_edges as i64 + self.num_triangles as i64 - self.glue.len() as i64
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Option<FaceGluing> {
        self.glue[tet][face]
    }

    pub fn vertex_class(&self, tet: usize, corner: usize) -> usize {
        self.vertex_class[tet][corner]
    }

    /// Edge classes of a tetrahedron, indexed like [`TET_EDGES`].
    pub fn tet_edges(&self, tet: usize) -> [usize; 6] {
        self.edge_class[tet]
    }

    pub fn triangle_class(&self, tet: usize, face: usize) -> usize {
        self.triangle_class[tet][face]
    }

    /// Edge classes of a face, in the order (c0c1, c0c2, c1c2) of its
    /// increasing corners.
    pub fn face_edges(&self, tet: usize, face: usize) -> [usize; 3] {
        let [a, b, c] = face_corners(face);
        let e = &self.edge_class[tet];
        [e[local_edge(a, b)], e[local_edge(a, c)], e[local_edge(b, c)]]
    }

    /// One `(tet, face)` representative per triangle class.
    pub fn triangle_representatives(&self) -> Vec<(usize, usize)> {
        let mut reps = vec![(usize::MAX, 0); self.num_triangles];
        for t in (0..self.glue.len()).rev() {
            for f in (0..4).rev() {
                reps[self.triangle_class[t][f]] = (t, f);
            }
        }
        reps
    }

    /// Boundary edge classes, i.e. edges of unglued faces.
    pub fn boundary_edges(&self) -> Vec<usize> {
        let mut on = vec![false; self.num_edges];
        for (t, f) in self.boundary_faces() {
            for e in self.face_edges(t, f) {
                on[e] = true;
            }
        }
        (0..self.num_edges).filter(|&e| on[e]).collect()
    }

    pub fn boundary_vertices(&self) -> Vec<usize> {
        let mut on = vec![false; self.num_vertices];
        for (t, f) in self.boundary_faces() {
            for c in face_corners(f) {
                on[self.vertex_class[t][c]] = true;
            }
        }
        (0..self.num_vertices).filter(|&v| on[v]).collect()
    }

    /// Disjoint union, tetrahedra of `other` renumbered after ours.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let shift = self.glue.len();
        let mut glue = self.glue.clone();
        glue.extend(other.glue.iter().map(|faces| faces.map(|g| g.map(|g| FaceGluing { tet: g.tet + shift, ..g }))));
        Self::from_glue(glue, self.oriented && other.oriented).expect("union of valid triangulations")
    }

    /// Gluings listed once each, from the lexicographically smaller slot.
    pub fn gluings(&self) -> Vec<Gluing> {
        let mut out = Vec::new();
        for (t1, faces) in self.glue.iter().enumerate() {
            for (f1, g) in faces.iter().enumerate() {
                let Some(g) = g else { continue };
                if (t1, f1) < (g.tet, g.face) {
                    out.push(Gluing { t1, f1, t2: g.tet, f2: g.face, images: face_corners(f1).map(|c| g.perm[c]) });
                }
            }
        }
        out
    }

    pub fn parse(input: &str) -> Result<Self, TriangulationError> {
        let mut tets: Vec<usize> = Vec::new();
        let mut gluings = Vec::new();
        let mut oriented = false;
        for tokens in token_lines(input) {
            match tokens[0].text {
                "tet" => {
                    expect_arity(&tokens, 1)?;
                    let id: usize = tokens[1].parse("a tetrahedron id")?;
                    if id != tets.len() {
                        return Err(tokens[1].error(format!("expected tetrahedron id {}", tets.len())).into());
                    }
                    tets.push(id);
                }
                "glue" => {
                    expect_arity(&tokens, 5)?;
                    let mut nums = [0usize; 4];
                    for (slot, tok) in nums.iter_mut().zip(&tokens[1..5]) {
                        *slot = tok.parse("a non-negative integer")?;
                    }
                    let code = tokens[5];
                    let digits: Vec<usize> = code.text.chars().filter_map(|c| c.to_digit(10).map(|d| d as usize)).collect();
                    if digits.len() != 3 || code.text.len() != 3 {
                        return Err(code.error("permutation code must be three corner digits").into());
                    }
                    for (tok, idx) in [(tokens[1], nums[0]), (tokens[3], nums[2])] {
                        if idx >= tets.len() {
                            return Err(tok.error(format!("unknown tetrahedron {idx}")).into());
                        }
                    }
                    gluings.push(Gluing { t1: nums[0], f1: nums[1], t2: nums[2], f2: nums[3], images: [digits[0], digits[1], digits[2]] });
                }
                "oriented" => {
                    expect_arity(&tokens, 0)?;
                    oriented = true;
                }
                other => return Err(tokens[0].error(format!("unknown directive `{other}`")).into()),
            }
        }
        Self::build(tets.len(), &gluings, oriented)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in 0..self.glue.len() {
            let _ = writeln!(out, "tet {t}");
        }
        for g in self.gluings() {
            let _ = writeln!(
                out,
                "glue {} {} {} {} {}{}{}",
                g.t1, g.f1, g.t2, g.f2, g.images[0], g.images[1], g.images[2]
            );
        }
        if self.oriented {
            out.push_str("oriented\n");
        }
        out
    }

    /// Boundary of the 4-simplex: five tetrahedra, one per omitted vertex.
    pub fn boundary_4_simplex() -> Self {
        let tets: Vec<[usize; 4]> = (0..5)
            .map(|skip| {
                let v: Vec<usize> = (0..5).filter(|&x| x != skip).collect();
                [v[0], v[1], v[2], v[3]]
            })
            .collect();
        Self::from_simplices(&tets, false).expect("boundary of the 4-simplex")
    }

    /// Two-tetrahedron triangulation of S^2 x S^1.
    pub fn s2_x_s1() -> Self {
        let gluings = [
            Gluing { t1: 0, f1: 0, t2: 0, f2: 1, images: [2, 3, 0] },
            Gluing { t1: 0, f1: 2, t2: 1, f2: 0, images: [2, 3, 1] },
            Gluing { t1: 0, f1: 3, t2: 1, f2: 1, images: [2, 3, 0] },
            Gluing { t1: 1, f1: 2, t2: 1, f2: 3, images: [1, 2, 0] },
        ];
        Self::build(2, &gluings, true).expect("S^2 x S^1")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_4_simplex_counts() {
        let t = Triangulation::boundary_4_simplex();
        assert!(t.is_closed());
        assert_eq!((t.num_vertices(), t.num_edges(), t.num_triangles(), t.num_tets()), (5, 10, 10, 5));
        assert!(t.is_orientable());
    }

    #[test]
    fn s2xs1_is_an_orientable_pseudo_triangulation() {
        let t = Triangulation::s2_x_s1();
        assert_eq!(t.num_tets(), 2);
        assert!(t.is_closed());
        assert_eq!(t.euler_characteristic(), 0);
        assert_eq!(t.num_vertices(), 1);
    }

    #[test]
    fn one_unglued_face() {
        let full = Triangulation::boundary_4_simplex();
        let mut gl = full.gluings();
        gl.pop();
        let t = Triangulation::build(5, &gl, false).unwrap();
        assert_eq!(t.boundary_faces().len(), 2);
        let single = Triangulation::build(2, &[Gluing { t1: 0, f1: 0, t2: 1, f2: 0, images: [1, 2, 3] }], false).unwrap();
        assert_eq!(single.boundary_faces().len(), 6);
        assert_eq!(single.require_closed(), Err(TriangulationError::NotClosed(6)));
    }

    #[test]
    fn bad_gluings() {
        let fixed = Triangulation::build(1, &[Gluing { t1: 0, f1: 2, t2: 0, f2: 2, images: [0, 1, 3] }], false);
        assert!(matches!(fixed, Err(TriangulationError::NonInvolutiveGluing(_))));
        let twice = Triangulation::build(
            3,
            &[Gluing { t1: 0, f1: 0, t2: 1, f2: 0, images: [1, 2, 3] }, Gluing { t1: 0, f1: 0, t2: 2, f2: 0, images: [1, 2, 3] }],
            false,
        );
        assert!(matches!(twice, Err(TriangulationError::NonInvolutiveGluing(_))));
        let not_bijective = Triangulation::build(2, &[Gluing { t1: 0, f1: 0, t2: 1, f2: 0, images: [1, 1, 3] }], false);
        assert!(matches!(not_bijective, Err(TriangulationError::MalformedGluing(_))));
        let onto_apex = Triangulation::build(2, &[Gluing { t1: 0, f1: 0, t2: 1, f2: 0, images: [0, 1, 2] }], false);
        assert!(matches!(onto_apex, Err(TriangulationError::MalformedGluing(_))));
    }

    #[test]
    fn orientation_mismatch_detected() {
        // same corner map twice: orientation-reversing for one gluing only
        let gl = [
            Gluing { t1: 0, f1: 0, t2: 1, f2: 0, images: [1, 2, 3] },
            Gluing { t1: 0, f1: 1, t2: 1, f2: 1, images: [0, 3, 2] },
        ];
        assert!(Triangulation::build(2, &gl, false).is_ok());
        let err = Triangulation::build(2, &gl, true).unwrap_err();
        assert!(matches!(err, TriangulationError::OrientationMismatch { .. }));
    }

    #[test]
    fn text_round_trip() {
        for t in [Triangulation::boundary_4_simplex(), Triangulation::s2_x_s1()] {
            let back = Triangulation::parse(&t.to_text()).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn parse_errors() {
        let err = Triangulation::parse("tet 0\ntet 1\nglue 0 0 1 0 12x\n").unwrap_err();
        assert!(matches!(err, TriangulationError::Parse(ParseError { line: 3, column: 14, .. })));
        let err = Triangulation::parse("tet 0\nglue 0 0 4 0 123\n").unwrap_err();
        assert!(matches!(err, TriangulationError::Parse(ParseError { line: 2, column: 10, .. })));
    }
}
