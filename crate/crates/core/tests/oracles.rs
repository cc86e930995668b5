//! Closed-form recoupling values and spin-network evaluations against a
//! frozen table computed independently at 40 digits.

use tvamp_core::spinnet::Evaluator;
use tvamp_core::{DoubleDouble, RecouplingTable, RootParams, SpinGraph};

struct Entry {
    r: u32,
    colors: Vec<u32>,
    value: f64,
    /// `exact - value`, so `value + lo` is the double-double oracle.
    lo: f64,
}

fn oracle(kind: &str) -> Vec<Entry> {
    include_str!("fixtures/kl_oracle.txt")
        .lines()
        .filter(|l| l.starts_with(kind))
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            Entry {
                r: f[1].parse().unwrap(),
                colors: f[2..f.len() - 2].iter().map(|x| x.parse().unwrap()).collect(),
                value: f[f.len() - 2].parse().unwrap(),
                lo: f[f.len() - 1].parse().unwrap(),
            }
        })
        .collect()
}

fn table(r: u32) -> RecouplingTable<f64> {
    RecouplingTable::new(RootParams::new(r).unwrap())
}

#[test]
fn theta_matches_oracle() {
    let entries = oracle("theta");
    assert!(entries.len() > 20);
    for e in entries {
        let [a, b, c] = e.colors[..] else { panic!() };
        let t = table(e.r);
        assert!((t.theta(a, b, c) - e.value).abs() < 1e-12, "r={} {:?}", e.r, e.colors);
        let g = SpinGraph::theta(a, b, c);
        let v = Evaluator::new(t).evaluate(&g).unwrap();
        assert!((v - e.value).abs() < 1e-9);
    }
}

#[test]
fn tet_matches_oracle() {
    let entries = oracle("tet");
    assert!(entries.len() > 100);
    for e in entries {
        let [a, b, ee, c, d, f] = e.colors[..] else { panic!() };
        let t = table(e.r);
        assert!((t.tet(a, b, ee, c, d, f) - e.value).abs() < 1e-12, "r={} {:?}", e.r, e.colors);
        let g = SpinGraph::tetrahedron(a, b, ee, c, d, f);
        let ev = Evaluator::new(t);
        assert!((ev.evaluate(&g).unwrap() - e.value).abs() < 1e-9);
        // an independent route: expand one edge by an F-move first
        assert!((ev.evaluate_fmove_expansion(&g, 0).unwrap() - e.value).abs() < 1e-9, "r={} {:?}", e.r, e.colors);
    }
}

#[test]
fn double_double_tet_matches_oracle() {
    for e in oracle("tet").into_iter().filter(|e| e.r == 5) {
        let [a, b, ee, c, d, f] = e.colors[..] else { panic!() };
        let t = RecouplingTable::new(RootParams::<DoubleDouble>::new(5).unwrap());
        let got = t.tet(a, b, ee, c, d, f);
        let residual = got - DoubleDouble::from(e.value) - DoubleDouble::from(e.lo);
        assert!(residual.hi().abs() < 1e-24, "{:?}: {got:?}", e.colors);
    }
}

#[test]
fn loops_are_quantum_dimensions() {
    for r in 3..=5 {
        let t = table(r);
        let ev = Evaluator::new(t.clone());
        for c in 0..t.num_colors() as u32 {
            let v = ev.evaluate(&SpinGraph::loops(&[c])).unwrap();
            assert!((v - t.delta(c)).abs() < 1e-12);
            // theta(c, c, 0) collapses to the loop
            assert!((t.theta(c, c, 0) - t.delta(c)).abs() < 1e-12);
        }
    }
}
