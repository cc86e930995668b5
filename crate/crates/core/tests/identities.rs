//! Identities that cut across modules.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tvamp_core::surgery::{check_tv_rt, rt_invariant};
use tvamp_core::triangulate::{random_moves, tv_boundary_operator, tv_invariant};
use tvamp_core::{DoubleDouble, FramedSurgery, RootParams, SurfaceTriangulation, Triangulation};

#[test]
fn tv_is_rt_squared() {
    for r in 3..=6 {
        let p = RootParams::<f64>::new(r).unwrap();
        for (t, s) in [
            (Triangulation::boundary_4_simplex(), FramedSurgery::Empty),
            (Triangulation::boundary_4_simplex(), FramedSurgery::Unknot(1)),
            (Triangulation::s2_x_s1(), FramedSurgery::Unknot(0)),
            (Triangulation::boundary_4_simplex(), FramedSurgery::HopfPair(0, 0)),
        ] {
            let rep = check_tv_rt(&t, &s, &p).unwrap();
            assert!(rep.pass, "r={r} {s}: {rep:?}");
        }
    }
}

#[test]
fn hopf_pair_zero_framing_is_the_sphere() {
    for r in 3..=6 {
        let p = RootParams::<f64>::new(r).unwrap();
        let tau = rt_invariant(&FramedSurgery::HopfPair(0, 0), &p);
        assert!((tau.re - p.eta()).abs() < 1e-10 && tau.im.abs() < 1e-10);
        let tv = tv_invariant(&Triangulation::boundary_4_simplex(), &p).unwrap().value;
        assert!((tv - tau.norm_sqr()).abs() < 1e-10);
    }
}

#[test]
fn extended_precision_state_sum() {
    let p = RootParams::<DoubleDouble>::new(5).unwrap();
    let tv = tv_invariant(&Triangulation::boundary_4_simplex(), &p).unwrap().value;
    let eta = p.eta();
    let residual = tv - eta * eta;
    assert!(residual.hi().abs() < 1e-28, "{tv:?}");
}

#[test]
fn moves_preserve_the_operator_trace() {
    // trace of the sphere operator is TV(S^2 x S^1), which survives moves
    let p = RootParams::<f64>::new(4).unwrap();
    let trace = tv_boundary_operator(&SurfaceTriangulation::tetrahedron_boundary(), &p).trace().re;
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (t, _) = random_moves(&Triangulation::s2_x_s1(), 4, &mut rng);
    let tv = tv_invariant(&t, &p).unwrap().value;
    assert!((trace - tv).abs() < 1e-9);
}
