//! Closed triangulated surfaces and their thickenings `S x [-1, 1]`.
//!
//! Surface file format: one `tri <v0> <v1> <v2>` line per triangle, with an
//! optional `genus <g>` line that is checked against the Euler
//! characteristic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{face_corners, Triangulation, TriangulationError};
use crate::text::{expect_arity, token_lines};

/// Closed simplicial surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceTriangulation {
    labels: Vec<usize>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<(usize, usize)>,
    declared_genus: Option<u32>,
}

impl SurfaceTriangulation {
    /// Triangles given by vertex labels; labels are numbered densely in
    /// increasing order.
    pub fn new(triangles: &[[usize; 3]], declared_genus: Option<u32>) -> Result<Self, TriangulationError> {
        let labels: Vec<usize> = triangles.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let dense = |l: usize| labels.binary_search(&l).unwrap();
        let tris: Vec<[usize; 3]> = triangles.iter().map(|t| t.map(dense)).collect();
        let mut edge_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (i, t) in tris.iter().enumerate() {
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(TriangulationError::NotASurface(format!("triangle {i} repeats a vertex")));
            }
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                *edge_count.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        if let Some((&(a, b), &n)) = edge_count.iter().find(|(_, &n)| n != 2) {
            return Err(TriangulationError::NotASurface(format!(
                "edge {}-{} lies on {n} triangles",
                labels[a], labels[b]
            )));
        }
        let s = Self { labels, triangles: tris, edges: edge_count.into_keys().collect(), declared_genus };
        s.check_vertex_links()?;
        if let Some(g) = declared_genus {
            if s.euler_characteristic() != 2 - 2 * g as i64 {
                return Err(TriangulationError::NotASurface(format!(
                    "Euler characteristic {} does not match genus {g}",
                    s.euler_characteristic()
                )));
            }
        }
        Ok(s)
    }

    // The link of every vertex must be a single cycle.
    fn check_vertex_links(&self) -> Result<(), TriangulationError> {
        for v in 0..self.labels.len() {
            let mut link: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for t in self.triangles.iter().filter(|t| t.contains(&v)) {
                let others: Vec<usize> = t.iter().copied().filter(|&x| x != v).collect();
                link.entry(others[0]).or_default().push(others[1]);
                link.entry(others[1]).or_default().push(others[0]);
            }
            if link.values().any(|nbrs| nbrs.len() != 2) {
                return Err(TriangulationError::NotASurface(format!("link of vertex {} is not a circle", self.labels[v])));
            }
            let start = *link.keys().next().expect("vertex lies on a triangle");
            let (mut prev, mut cur, mut steps) = (usize::MAX, start, 0);
            loop {
                let next = *link[&cur].iter().find(|&&x| x != prev).unwrap_or(&link[&cur][0]);
                prev = cur;
                cur = next;
                steps += 1;
                if cur == start || steps > link.len() {
                    break;
                }
            }
            if steps != link.len() {
                return Err(TriangulationError::NotASurface(format!("link of vertex {} is not a circle", self.labels[v])));
            }
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Triangles as dense vertex indices.
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Edges as sorted pairs of dense vertex indices, in increasing order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.labels.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    pub fn genus(&self) -> u32 {
        ((2 - self.euler_characteristic()) / 2) as u32
    }

    pub fn edge_index(&self, a: usize, b: usize) -> usize {
        self.edges.binary_search(&(a.min(b), a.max(b))).expect("surface edge")
    }

    /// Boundary of the tetrahedron.
    pub fn tetrahedron_boundary() -> Self {
        Self::new(&[[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]], Some(0)).expect("sphere")
    }

    /// Seven-vertex torus.
    pub fn seven_vertex_torus() -> Self {
        let tris: Vec<[usize; 3]> =
            (0..7).flat_map(|i| [[i, (i + 1) % 7, (i + 3) % 7], [i, (i + 2) % 7, (i + 3) % 7]]).collect();
        Self::new(&tris, Some(1)).expect("torus")
    }

    pub fn parse(input: &str) -> Result<Self, TriangulationError> {
        let mut tris = Vec::new();
        let mut genus = None;
        for tokens in token_lines(input) {
            match tokens[0].text {
                "tri" => {
                    expect_arity(&tokens, 3)?;
                    let mut t = [0usize; 3];
                    for (slot, tok) in t.iter_mut().zip(&tokens[1..]) {
                        *slot = tok.parse("a vertex label")?;
                    }
                    tris.push(t);
                }
                "genus" => {
                    expect_arity(&tokens, 1)?;
                    genus = Some(tokens[1].parse("a genus")?);
                }
                other => return Err(tokens[0].error(format!("unknown directive `{other}`")).into()),
            }
        }
        Self::new(&tris, genus)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(g) = self.declared_genus {
            let _ = writeln!(out, "genus {g}");
        }
        for t in &self.triangles {
            let l = t.map(|v| self.labels[v]);
            let _ = writeln!(out, "tri {} {} {}", l[0], l[1], l[2]);
        }
        out
    }

    /// Same surface up to vertex relabeling by `map` (dense index -> label).
    pub fn triangle_sets(&self, map: impl Fn(usize) -> usize) -> BTreeSet<[usize; 3]> {
        self.triangles
            .iter()
            .map(|t| {
                let mut x = t.map(&map);
                x.sort_unstable();
                x
            })
            .collect()
    }
}

/// `S x [-1, 1]` with the identification of its two boundary copies.
#[derive(Debug, Clone)]
pub struct Prism {
    pub triangulation: Triangulation,
    /// Vertex class of each surface vertex on the bottom copy.
    pub bottom_vertices: Vec<usize>,
    pub top_vertices: Vec<usize>,
    /// Edge class of each surface edge on the bottom copy.
    pub bottom_edges: Vec<usize>,
    pub top_edges: Vec<usize>,
}

/// Thickened surface, three tetrahedra per triangle. With vertices
/// `a < b < c` below and `a' b' c'` above, the prism over a triangle is cut
/// into `[a b c c']`, `[a b b' c']`, `[a a' b' c']`; the global vertex order
/// makes the diagonals of neighboring prisms agree.
pub fn prism(s: &SurfaceTriangulation) -> Prism {
    let n = s.num_vertices();
    let mut tets = Vec::with_capacity(3 * s.num_triangles());
    for t in s.triangles() {
        let mut v = *t;
        v.sort_unstable();
        let [a, b, c] = v;
        tets.push([a, b, c, c + n]);
        tets.push([a, b, b + n, c + n]);
        tets.push([a, a + n, b + n, c + n]);
    }
    let tri = Triangulation::from_simplices(&tets, false).expect("prism over a surface");
    // vertex class of a label: find a tetrahedron corner carrying it
    let mut class_of = vec![usize::MAX; 2 * n];
    let mut edge_of = BTreeMap::new();
    for (i, labels) in tets.iter().enumerate() {
        for c in 0..4 {
            class_of[labels[c]] = tri.vertex_class(i, c);
        }
        for f in 0..4 {
            let [x, y, z] = face_corners(f);
            let es = tri.face_edges(i, f);
            for ((p, q), e) in [(x, y), (x, z), (y, z)].into_iter().zip(es) {
                let (u, w) = (labels[p], labels[q]);
                edge_of.insert((u.min(w), u.max(w)), e);
            }
        }
    }
    let bottom_edges = s.edges().iter().map(|&(a, b)| edge_of[&(a, b)]).collect();
    let top_edges = s.edges().iter().map(|&(a, b)| edge_of[&(a + n, b + n)]).collect();
    Prism {
        bottom_vertices: class_of[..n].to_vec(),
        top_vertices: class_of[n..].to_vec(),
        bottom_edges,
        top_edges,
        triangulation: tri,
    }
}

impl Triangulation {
    /// Boundary components as surfaces whose vertex labels are vertex
    /// classes. Requires a simplicial boundary.
    pub fn boundary_surfaces(&self) -> Result<Vec<SurfaceTriangulation>, TriangulationError> {
        let faces: Vec<[usize; 3]> =
            self.boundary_faces().into_iter().map(|(t, f)| face_corners(f).map(|c| self.vertex_class(t, c))).collect();
        let mut component = vec![usize::MAX; faces.len()];
        let mut count = 0;
        for start in 0..faces.len() {
            if component[start] != usize::MAX {
                continue;
            }
            component[start] = count;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for j in 0..faces.len() {
                    if component[j] == usize::MAX && faces[i].iter().filter(|v| faces[j].contains(v)).count() >= 2 {
                        component[j] = count;
                        stack.push(j);
                    }
                }
            }
            count += 1;
        }
        (0..count)
            .map(|k| {
                let tris: Vec<[usize; 3]> = (0..faces.len()).filter(|&i| component[i] == k).map(|i| faces[i]).collect();
                SurfaceTriangulation::new(&tris, None)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_surfaces() {
        let s = SurfaceTriangulation::tetrahedron_boundary();
        assert_eq!((s.num_vertices(), s.num_edges(), s.num_triangles(), s.genus()), (4, 6, 4, 0));
        let t = SurfaceTriangulation::seven_vertex_torus();
        assert_eq!((t.num_vertices(), t.num_edges(), t.num_triangles(), t.genus()), (7, 21, 14, 1));
    }

    #[test]
    fn rejects_non_surfaces() {
        let open = SurfaceTriangulation::new(&[[0, 1, 2]], None);
        assert!(matches!(open, Err(TriangulationError::NotASurface(_))));
        let wrong_genus = SurfaceTriangulation::new(&[[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]], Some(1));
        assert!(matches!(wrong_genus, Err(TriangulationError::NotASurface(_))));
        // two tetrahedron boundaries sharing a vertex: pinched link
        let pinched = SurfaceTriangulation::new(
            &[[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2], [4, 5, 6], [0, 5, 6], [0, 4, 6], [0, 4, 5]],
            None,
        );
        assert!(matches!(pinched, Err(TriangulationError::NotASurface(_))));
    }

    #[test]
    fn prism_counts_and_boundary() {
        for (s, tets) in [(SurfaceTriangulation::tetrahedron_boundary(), 12), (SurfaceTriangulation::seven_vertex_torus(), 42)] {
            let pr = prism(&s);
            let t = &pr.triangulation;
            assert_eq!(t.num_tets(), tets);
            assert_eq!(t.num_vertices(), 2 * s.num_vertices());
            assert_eq!(t.boundary_faces().len(), 2 * s.num_triangles());
            let comps = t.boundary_surfaces().unwrap();
            assert_eq!(comps.len(), 2);
            let bottom = s.triangle_sets(|v| pr.bottom_vertices[v]);
            let top = s.triangle_sets(|v| pr.top_vertices[v]);
            let found: Vec<_> = comps.iter().map(|c| c.triangle_sets(|v| c.vertex_label(v))).collect();
            assert!(found.contains(&bottom) && found.contains(&top));
            assert!(t.is_orientable());
        }
    }

    #[test]
    fn text_round_trip() {
        let t = SurfaceTriangulation::seven_vertex_torus();
        assert_eq!(SurfaceTriangulation::parse(&t.to_text()).unwrap(), t);
    }
}
