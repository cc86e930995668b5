//! Pachner 2-3 and 1-4 moves.
//!
//! Both moves remove a few tetrahedra and insert new ones described by
//! abstract corner labels. Faces of the new tetrahedra whose label set
//! occurs once are matched with the outer faces of the removed region and
//! inherit their gluings; label sets occurring twice are glued to each other.

use std::collections::HashMap;

use rand::Rng;

use super::{face_corners, FaceGluing, Triangulation, TriangulationError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// Replace the two tetrahedra around a triangle class by three.
    TwoThree { triangle: usize },
    /// Cone a tetrahedron from a new interior vertex.
    OneFour { tet: usize },
}

impl std::fmt::Display for Move {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Move::TwoThree { triangle } => write!(f, "2-3@{triangle}"),
            Move::OneFour { tet } => write!(f, "1-4@{tet}"),
        }
    }
}

type Labels = [u8; 4];

fn face_key(labels: &Labels, face: usize) -> [u8; 3] {
    let mut key = face_corners(face).map(|c| labels[c]);
    key.sort_unstable();
    key
}

fn corner_of(labels: &Labels, label: u8) -> usize {
    labels.iter().position(|&l| l == label).expect("label present")
}

impl Triangulation {
    pub fn apply(&self, m: Move) -> Result<Self, TriangulationError> {
        match m {
            Move::TwoThree { triangle } => self.pachner_23(triangle),
            Move::OneFour { tet } => self.pachner_14(tet),
        }
    }

    pub fn pachner_23(&self, triangle: usize) -> Result<Self, TriangulationError> {
        if triangle >= self.num_triangles() {
            return Err(TriangulationError::MoveNotApplicable(format!("no triangle {triangle}")));
        }
        let (ta, fa) = self.triangle_representatives()[triangle];
        let Some(g) = self.gluing(ta, fa) else {
            return Err(TriangulationError::MoveNotApplicable(format!("triangle {triangle} is on the boundary")));
        };
        if g.tet == ta {
            return Err(TriangulationError::MoveNotApplicable(format!(
                "triangle {triangle} joins tetrahedron {ta} to itself"
            )));
        }
        // labels: 0 apex of A, 1 apex of B, 2 + i for corner i of A's face
        let mut la = [0u8; 4];
        let mut lb = [0u8; 4];
        la[fa] = 0;
        lb[g.face] = 1;
        for c in face_corners(fa) {
            la[c] = 2 + c as u8;
            lb[g.perm[c]] = 2 + c as u8;
        }
        let [x, y, z] = face_corners(fa).map(|c| 2 + c as u8);
        let new_tets = vec![[0, 1, x, y], [0, 1, y, z], [0, 1, z, x]];
        Ok(self.replace(&[(ta, la), (g.tet, lb)], &new_tets))
    }

    pub fn pachner_14(&self, tet: usize) -> Result<Self, TriangulationError> {
        if tet >= self.num_tets() {
            return Err(TriangulationError::MoveNotApplicable(format!("no tetrahedron {tet}")));
        }
        let new_tets = (0..4)
            .map(|f| {
                let [a, b, c] = face_corners(f).map(|c| c as u8);
                [a, b, c, 4]
            })
            .collect::<Vec<_>>();
        Ok(self.replace(&[(tet, [0, 1, 2, 3])], &new_tets))
    }

    /// Every 2-3 and 1-4 move that applies.
    pub fn applicable_moves(&self) -> Vec<Move> {
        let mut out = Vec::new();
        for (tri, (t, f)) in self.triangle_representatives().into_iter().enumerate() {
            if matches!(self.gluing(t, f), Some(g) if g.tet != t) {
                out.push(Move::TwoThree { triangle: tri });
            }
        }
        out.extend((0..self.num_tets()).map(|tet| Move::OneFour { tet }));
        out
    }

    fn replace(&self, removed: &[(usize, Labels)], new_tets: &[Labels]) -> Self {
        let removed_labels: HashMap<usize, Labels> = removed.iter().copied().collect();
        let kept: Vec<usize> = (0..self.num_tets()).filter(|t| !removed_labels.contains_key(t)).collect();
        let mut index = vec![usize::MAX; self.num_tets()];
        for (i, &t) in kept.iter().enumerate() {
            index[t] = i;
        }
        let base = kept.len();

        let mut by_key: HashMap<[u8; 3], Vec<(usize, usize)>> = HashMap::new();
        for (n, labels) in new_tets.iter().enumerate() {
            for f in 0..4 {
                by_key.entry(face_key(labels, f)).or_default().push((n, f));
            }
        }
        // outer slot of a removed tetrahedron -> (new tet, face, corner map)
        let replacement = |t: usize, f: usize| -> Option<(usize, usize, [usize; 4])> {
            let labels = removed_labels[&t];
            let slots = by_key.get(&face_key(&labels, f))?;
            let &[(n, g)] = &slots[..] else { return None };
            let mut sigma = [usize::MAX; 4];
            for c in face_corners(f) {
                sigma[c] = corner_of(&new_tets[n], labels[c]);
            }
            sigma[f] = g;
            Some((n, g, sigma))
        };
        let target = |g: FaceGluing| -> FaceGluing {
            if removed_labels.contains_key(&g.tet) {
                let (n, face, sigma) = replacement(g.tet, g.face).expect("outer face of the move region");
                FaceGluing { tet: base + n, face, perm: g.perm.map(|c| sigma[c]) }
            } else {
                FaceGluing { tet: index[g.tet], ..g }
            }
        };

        let mut glue: Vec<[Option<FaceGluing>; 4]> = kept.iter().map(|&t| self.glue[t].map(|g| g.map(target))).collect();
        glue.extend(std::iter::repeat_n([None; 4], new_tets.len()));
        for &(t, _) in removed {
            for f in 0..4 {
                let Some((n, g, sigma)) = replacement(t, f) else { continue };
                let Some(old) = self.glue[t][f] else { continue };
                let mapped = target(old);
                let mut perm = [usize::MAX; 4];
                for c in 0..4 {
                    perm[sigma[c]] = mapped.perm[c];
                }
                glue[base + n][g] = Some(FaceGluing { perm, ..mapped });
            }
        }
        for slots in by_key.values() {
            if let &[(n1, f1), (n2, f2)] = &slots[..] {
                let mut perm = [f2; 4];
                for c in face_corners(f1) {
                    perm[c] = corner_of(&new_tets[n2], new_tets[n1][c]);
                }
                let mut inv = [0; 4];
                for (i, &x) in perm.iter().enumerate() {
                    inv[x] = i;
                }
                glue[base + n1][f1] = Some(FaceGluing { tet: base + n2, face: f2, perm });
                glue[base + n2][f2] = Some(FaceGluing { tet: base + n1, face: f1, perm: inv });
            }
        }
        Self::from_glue(glue, self.oriented).expect("Pachner moves preserve validity")
    }
}

/// Applies `len` uniformly random moves (move type first, then location).
pub fn random_moves<R: Rng>(t: &Triangulation, len: usize, rng: &mut R) -> (Triangulation, Vec<Move>) {
    let mut current = t.clone();
    let mut moves = Vec::with_capacity(len);
    for _ in 0..len {
        let all = current.applicable_moves();
        let (twos, ones): (Vec<Move>, Vec<Move>) = all.into_iter().partition(|m| matches!(m, Move::TwoThree { .. }));
        let pool = if !twos.is_empty() && rng.gen_bool(0.5) { twos } else { ones };
        let m = pool[rng.gen_range(0..pool.len())];
        current = current.apply(m).expect("applicable move");
        moves.push(m);
    }
    (current, moves)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::recoupling::RootParams;
    use crate::triangulate::tv_invariant;

    #[test]
    fn counts_after_moves() {
        let t = Triangulation::boundary_4_simplex();
        let a = t.pachner_23(0).unwrap();
        assert_eq!((a.num_tets(), a.num_vertices(), a.num_edges()), (6, 5, 11));
        assert!(a.is_closed());
        let b = t.pachner_14(0).unwrap();
        assert_eq!((b.num_tets(), b.num_vertices(), b.num_edges()), (8, 6, 14));
        assert!(b.is_orientable());
    }

    #[test]
    fn inapplicable_moves() {
        let t = Triangulation::boundary_4_simplex();
        assert!(matches!(t.pachner_23(99), Err(TriangulationError::MoveNotApplicable(_))));
        assert!(matches!(t.pachner_14(5), Err(TriangulationError::MoveNotApplicable(_))));
        let open = Triangulation::build(1, &[], false).unwrap();
        assert!(matches!(open.pachner_23(0), Err(TriangulationError::MoveNotApplicable(_))));
    }

    #[test]
    fn tv_is_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = RootParams::<f64>::new(4).unwrap();
        for start in [Triangulation::boundary_4_simplex(), Triangulation::s2_x_s1()] {
            let before = tv_invariant(&start, &p).unwrap().value;
            for _ in 0..5 {
                let (t, moves) = random_moves(&start, 3, &mut rng);
                let after = tv_invariant(&t, &p).unwrap().value;
                assert!((after - before).abs() < 1e-9, "{moves:?}: {after} vs {before}");
            }
        }
    }
}
