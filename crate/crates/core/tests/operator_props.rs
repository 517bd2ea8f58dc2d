mod common;

use curvlab::random::{gaussian_symmetric, random_orthogonal, stream_rng};
use curvlab::workbench::io::{operator_from_json, operator_to_json};
use curvlab::{wedge, CurvatureOperator, LieStructure};
use nalgebra::DMatrix;
use proptest::prelude::*;

#[test]
fn ricci_matches_tensor_contraction() {
    for n in 3..=6 {
        for k in 0..5 {
            let r = common::random_bianchi(n, 21, k);
            let oracle = common::dense_ricci(n, r.coeffs());
            assert!(common::max_diff(&r.ricci(), &oracle) < 1e-12);
            assert!((r.scalar() - oracle.trace()).abs() < 1e-12);
        }
    }
}

#[test]
fn tensor_norm_counts_every_index_order() {
    let r = common::random_bianchi(5, 2, 0);
    let t = common::tensor(5, r.coeffs());
    let sq: f64 = t.iter().flatten().flatten().flatten().map(|v| v * v).sum();
    assert!((r.tensor_norm() - sq.sqrt()).abs() < 1e-12);
    assert!((r.tensor_norm() - 2.0 * r.norm()).abs() < 1e-12);
}

#[test]
fn bianchi_projection_satisfies_the_cyclic_identity() {
    for n in 4..=6 {
        let mut rng = stream_rng(5, n as u64);
        let len = n * (n - 1) / 2;
        let raw = CurvatureOperator::new(n, gaussian_symmetric(&mut rng, len)).unwrap();
        assert!(common::dense_bianchi_defect(n, raw.coeffs()) > 1e-3);
        assert!(raw.bianchi_defect() > 1e-3);
        let p = raw.project_bianchi();
        assert!(common::dense_bianchi_defect(n, p.coeffs()) < 1e-12);
        assert!(p.bianchi_defect() < 1e-12);
        // the removed part is orthogonal to the Bianchi subspace
        let removed = &raw - &p;
        let other = common::random_bianchi(n, 6, 0);
        assert!(removed.dot(&other).abs() < 1e-10);
    }
    // n = 3: every symmetric operator is Bianchi
    let mut rng = stream_rng(5, 3);
    let r3 = CurvatureOperator::new(3, gaussian_symmetric(&mut rng, 3)).unwrap();
    assert!(r3.bianchi_defect() < 1e-15);
}

fn two_form(u: &[f64], v: &[f64]) -> DMatrix<f64> {
    let n = u.len();
    DMatrix::from_fn(n, n, |k, l| u[k] * v[l] - v[k] * u[l])
}

#[test]
fn wedge_matches_two_form_construction() {
    let n = 4;
    let mut rng = stream_rng(8, 0);
    let a = gaussian_symmetric(&mut rng, n);
    let b = gaussian_symmetric(&mut rng, n);
    let w = wedge(&a, &b).unwrap();
    let ps = common::pairs(n);
    for (col, &(i, j)) in ps.iter().enumerate() {
        let ai: Vec<f64> = a.column(i).iter().copied().collect();
        let aj: Vec<f64> = a.column(j).iter().copied().collect();
        let bi: Vec<f64> = b.column(i).iter().copied().collect();
        let bj: Vec<f64> = b.column(j).iter().copied().collect();
        let image = 0.5 * (two_form(&ai, &bj) + two_form(&bi, &aj));
        for (row, &(k, l)) in ps.iter().enumerate() {
            assert!((w.coeffs()[(row, col)] - image[(k, l)]).abs() < 1e-13);
        }
    }
}

#[test]
fn splitting_is_an_orthogonal_projection() {
    for n in 3..=7 {
        for k in 0..4 {
            let r = common::random_bianchi(n, 31, k);
            let parts = r.decompose().unwrap();
            assert!((&parts.reconstruct() - &r).norm() < 1e-10);
            let (i, c, w) = (&parts.scalar_part, &parts.ricci_part, &parts.weyl_part);
            assert!(i.dot(c).abs() < 1e-10 && i.dot(w).abs() < 1e-10 && c.dot(w).abs() < 1e-10);
            // each part is a fixed point of its own projection
            assert!(w.ricci().amax() < 1e-10);
            assert!(c.scalar().abs() < 1e-10);
            let again = c.decompose().unwrap();
            assert!((&again.ricci_part - c).norm() < 1e-10);
            assert!(again.norm_weyl < 1e-10 && again.norm_scalar < 1e-10);
            assert!((parts.norm_weyl - w.norm()).abs() < 1e-12);
            if n == 3 {
                assert!(parts.norm_weyl < 1e-10);
            }
        }
    }
}

#[test]
fn ricci_is_rotation_equivariant() {
    let n = 5;
    let s = LieStructure::new(n).unwrap();
    let r = common::random_bianchi(n, 3, 3);
    let g = random_orthogonal(&mut stream_rng(3, 4), n);
    let rotated = r.conjugate(&s.induced_action(&g).unwrap());
    let expected = &g * r.ricci() * g.transpose();
    assert!(common::max_diff(&rotated.ricci(), &expected) < 1e-12);
    assert!(rotated.bianchi_defect() < 1e-12);
    let (a, b) = (r.spectrum().values, rotated.spectrum().values);
    for k in 0..a.len() {
        assert!((a[k] - b[k]).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_reconstructs(seed in any::<u64>(), n in 3usize..=6) {
        let r = common::random_bianchi(n, seed, 0);
        let parts = r.decompose().unwrap();
        prop_assert!((&parts.reconstruct() - &r).norm() <= 1e-10 * (1.0 + r.norm()));
        let total = parts.norm_scalar.powi(2) + parts.norm_ricci.powi(2) + parts.norm_weyl.powi(2);
        prop_assert!((total - r.norm().powi(2)).abs() <= 1e-10 * (1.0 + r.norm().powi(2)));
    }

    #[test]
    fn json_round_trip_is_bit_exact(seed in any::<u64>(), n in 3usize..=6, scale in -1e6f64..1e6) {
        let r = common::random_bianchi(n, seed, 1).scale(scale);
        let back = operator_from_json(&operator_to_json(&r)).unwrap();
        for (x, y) in back.coeffs().iter().zip(r.coeffs().iter()) {
            prop_assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}
