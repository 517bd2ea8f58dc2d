//! Algebraic curvature operators as symmetric `N x N` coefficient matrices in
//! the lexicographic basis of 2-forms.
//!
//! Coefficients are `M_ab = <R(phi_b), phi_a>`; the associated (0,4)-tensor is
//! `R(x, y, z, w) = <R(x ^ y), z ^ w>`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::lie::{basis_len, oriented_index, BasisIndex};

const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureOperator {
    n: usize,
    coeffs: DMatrix<f64>,
}

impl CurvatureOperator {
    /// Wraps a coefficient matrix, checking its size and symmetry.
    pub fn new(n: usize, coeffs: DMatrix<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionOutOfRange { found: n, min: 2, max: usize::MAX });
        }
        let len = basis_len(n);
        if coeffs.nrows() != len || coeffs.ncols() != len {
            return Err(Error::SizeMismatch { expected: len, rows: coeffs.nrows(), cols: coeffs.ncols() });
        }
        let scale = 1.0 + coeffs.amax();
        for r in 0..len {
            for c in r + 1..len {
                let (v, m) = (coeffs[(r, c)], coeffs[(c, r)]);
                if !((v - m).abs() <= SYMMETRY_TOL * scale) {
                    return Err(Error::NotSymmetric { row: r, col: c, value: v, mirror: m });
                }
            }
        }
        Ok(Self { n, coeffs })
    }

    /// Builds from a matrix that is symmetric up to rounding; the result is
    /// the exact symmetric part.
    pub(crate) fn symmetrized(n: usize, m: DMatrix<f64>) -> Self {
        let coeffs = (&m + m.transpose()) * 0.5;
        Self { n, coeffs }
    }

    pub fn identity(n: usize) -> Self {
        let len = basis_len(n);
        Self { n, coeffs: DMatrix::identity(len, len) }
    }

    pub fn zero(n: usize) -> Self {
        let len = basis_len(n);
        Self { n, coeffs: DMatrix::zeros(len, len) }
    }

    pub fn from_diagonal(n: usize, diag: &[f64]) -> Result<Self> {
        let len = basis_len(n);
        if diag.len() != len {
            return Err(Error::SizeMismatch { expected: len, rows: diag.len(), cols: 1 });
        }
        Ok(Self { n, coeffs: DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(diag)) })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &DMatrix<f64> {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> DMatrix<f64> {
        self.coeffs
    }

    /// Frobenius norm of the coefficient matrix.
    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    /// Frobenius pairing of coefficient matrices.
    pub fn dot(&self, other: &Self) -> f64 {
        self.coeffs.dot(&other.coeffs)
    }

    pub fn trace(&self) -> f64 {
        self.coeffs.trace()
    }

    pub fn scale(&self, t: f64) -> Self {
        Self { n: self.n, coeffs: &self.coeffs * t }
    }

    /// Operator square `M * M`.
    pub fn square(&self) -> Self {
        Self::symmetrized(self.n, &self.coeffs * &self.coeffs)
    }

    /// `G M G^T` for an orthogonal change of basis on 2-forms.
    pub fn conjugate(&self, g: &DMatrix<f64>) -> Self {
        Self::symmetrized(self.n, g * &self.coeffs * g.transpose())
    }

    /// `R(a, b, c, d) = <R(e_a ^ e_b), e_c ^ e_d>`.
    pub fn tensor(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        match (oriented_index(self.n, a, b), oriented_index(self.n, c, d)) {
            (Some((ab, s1)), Some((cd, s2))) => s1 * s2 * self.coeffs[(cd, ab)],
            _ => 0.0,
        }
    }

    /// Frobenius norm of the associated (0,4)-tensor; twice [`Self::norm`].
    pub fn tensor_norm(&self) -> f64 {
        let n = self.n;
        let mut sum = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        sum += self.tensor(a, b, c, d).powi(2);
                    }
                }
            }
        }
        sum.sqrt()
    }

    /// `Ric_ij = sum_k R(e_i ^ e_k, e_j ^ e_k)`.
    pub fn ricci(&self) -> DMatrix<f64> {
        let n = self.n;
        let mut ric = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v: f64 = (0..n).map(|k| self.tensor(i, k, j, k)).sum();
                ric[(i, j)] = v;
                ric[(j, i)] = v;
            }
        }
        ric
    }

    pub fn scalar(&self) -> f64 {
        self.ricci().trace()
    }

    /// Norm of the Bianchi sum `(R(x,y,z,w) + R(x,z,w,y) + R(x,w,y,z)) / 3`.
    pub fn bianchi_defect(&self) -> f64 {
        let n = self.n;
        let mut sum = 0.0;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        let b = (self.tensor(x, y, z, w) + self.tensor(x, z, w, y) + self.tensor(x, w, y, z)) / 3.0;
                        sum += b * b;
                    }
                }
            }
        }
        sum.sqrt()
    }

    /// Orthogonal projection onto operators satisfying the first Bianchi
    /// identity: removes the totally antisymmetric part of the (0,4)-tensor.
    pub fn project_bianchi(&self) -> Self {
        let n = self.n;
        let mut m = self.coeffs.clone();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        let b = (self.tensor(i, j, k, l) + self.tensor(i, k, l, j) + self.tensor(i, l, j, k)) / 3.0;
                        if b == 0.0 {
                            continue;
                        }
                        // b is totally antisymmetric; its coefficients on
                        // (ij,kl), (ik,jl), (il,jk) are b, -b, b.
                        for (p, q, sign) in [((i, j), (k, l), 1.0), ((i, k), (j, l), -1.0), ((i, l), (j, k), 1.0)] {
                            let r = BasisIndex::new(p.0, p.1).flat(n);
                            let c = BasisIndex::new(q.0, q.1).flat(n);
                            m[(r, c)] -= sign * b;
                            m[(c, r)] -= sign * b;
                        }
                    }
                }
            }
        }
        Self { n, coeffs: m }
    }

    /// Ascending eigenvalues with orthonormal eigenvectors as columns.
    pub fn spectrum(&self) -> Spectrum {
        Spectrum::of(&self.coeffs)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.spectrum().values[0]
    }

    pub fn decompose(&self) -> Result<IrreducibleParts> {
        IrreducibleParts::of(self)
    }

    /// Decomposes after checking that the Bianchi defect is at most `tol`.
    pub fn decompose_strict(&self, tol: f64) -> Result<IrreducibleParts> {
        let defect = self.bianchi_defect();
        if defect > tol {
            return Err(Error::BianchiDefect { defect, tol });
        }
        IrreducibleParts::of(self)
    }
}

impl Add for &CurvatureOperator {
    type Output = CurvatureOperator;
    fn add(self, rhs: Self) -> CurvatureOperator {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CurvatureOperator { n: self.n, coeffs: &self.coeffs + &rhs.coeffs }
    }
}

impl Sub for &CurvatureOperator {
    type Output = CurvatureOperator;
    fn sub(self, rhs: Self) -> CurvatureOperator {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CurvatureOperator { n: self.n, coeffs: &self.coeffs - &rhs.coeffs }
    }
}

impl Mul<&CurvatureOperator> for f64 {
    type Output = CurvatureOperator;
    fn mul(self, rhs: &CurvatureOperator) -> CurvatureOperator {
        rhs.scale(self)
    }
}

impl Neg for &CurvatureOperator {
    type Output = CurvatureOperator;
    fn neg(self) -> CurvatureOperator {
        self.scale(-1.0)
    }
}

/// Eigendecomposition with eigenvalues sorted ascending.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl Spectrum {
    pub fn of(m: &DMatrix<f64>) -> Self {
        let eig = SymmetricEigen::new(m.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
        Self { values, vectors }
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.values));
        &self.vectors * d * self.vectors.transpose()
    }
}

pub fn symmetric_min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}

/// `(A ^ B)(x ^ y) = (Ax ^ By + Bx ^ Ay) / 2` for symmetric endomorphisms.
pub fn wedge(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<CurvatureOperator> {
    let n = a.nrows();
    for m in [a, b] {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::SizeMismatch { expected: n, rows: m.nrows(), cols: m.ncols() });
        }
        check_symmetric(m)?;
    }
    let len = basis_len(n);
    let pairs: Vec<BasisIndex> = (0..len).map(|k| BasisIndex::from_flat(n, k)).collect();
    let mut m = DMatrix::zeros(len, len);
    for (r, p) in pairs.iter().enumerate() {
        for (c, q) in pairs.iter().enumerate().skip(r) {
            let (i, j, k, l) = (p.i, p.j, q.i, q.j);
            let v = 0.5
                * (a[(i, k)] * b[(j, l)] - a[(j, k)] * b[(i, l)] + b[(i, k)] * a[(j, l)]
                    - b[(j, k)] * a[(i, l)]);
            m[(r, c)] = v;
            m[(c, r)] = v;
        }
    }
    Ok(CurvatureOperator { n, coeffs: m })
}

pub(crate) fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    let scale = 1.0 + m.amax();
    for r in 0..m.nrows() {
        for c in r + 1..m.ncols() {
            if !((m[(r, c)] - m[(c, r)]).abs() <= SYMMETRY_TOL * scale) {
                return Err(Error::NotSymmetric { row: r, col: c, value: m[(r, c)], mirror: m[(c, r)] });
            }
        }
    }
    Ok(())
}

/// The O(n)-irreducible splitting `R = R_I + R_Ric0 + R_W`.
#[derive(Clone, Debug)]
pub struct IrreducibleParts {
    pub ric: DMatrix<f64>,
    pub scal: f64,
    pub ric0: DMatrix<f64>,
    pub lambda_bar: f64,
    pub scalar_part: CurvatureOperator,
    pub ricci_part: CurvatureOperator,
    pub weyl_part: CurvatureOperator,
    pub norm_scalar: f64,
    pub norm_ricci: f64,
    pub norm_weyl: f64,
}

impl IrreducibleParts {
    fn of(r: &CurvatureOperator) -> Result<Self> {
        let n = r.n;
        if n < 3 {
            return Err(Error::DimensionOutOfRange { found: n, min: 3, max: usize::MAX });
        }
        let nf = n as f64;
        let ric = r.ricci();
        let scal = ric.trace();
        let lambda_bar = scal / nf;
        let id = DMatrix::<f64>::identity(n, n);
        let ric0 = &ric - &id * lambda_bar;
        let scalar_part = CurvatureOperator::identity(n).scale(scal / (nf * (nf - 1.0)));
        let ricci_part = wedge(&ric0, &id)?.scale(2.0 / (nf - 2.0));
        let weyl_part = &(r - &scalar_part) - &ricci_part;
        Ok(Self {
            norm_scalar: scalar_part.norm(),
            norm_ricci: ricci_part.norm(),
            norm_weyl: weyl_part.norm(),
            ric,
            scal,
            ric0,
            lambda_bar,
            scalar_part,
            ricci_part,
            weyl_part,
        })
    }

    /// `(|R_W|^2 + |R_Ric0|^2) / |R_I|^2`; infinite when the scalar part vanishes.
    pub fn anisotropy(&self) -> f64 {
        let num = self.norm_weyl.powi(2) + self.norm_ricci.powi(2);
        let den = self.norm_scalar.powi(2);
        if den == 0.0 {
            if num == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            num / den
        }
    }

    pub fn reconstruct(&self) -> CurvatureOperator {
        &(&self.scalar_part + &self.ricci_part) + &self.weyl_part
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn diag(v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(v))
    }

    #[test]
    fn rejects_asymmetric_and_misshapen() {
        let mut m = DMatrix::identity(3, 3);
        m[(0, 2)] = 0.5;
        assert!(matches!(
            CurvatureOperator::new(3, m),
            Err(Error::NotSymmetric { row: 0, col: 2, .. })
        ));
        assert!(matches!(
            CurvatureOperator::new(4, DMatrix::identity(5, 5)),
            Err(Error::SizeMismatch { expected: 6, rows: 5, cols: 5 })
        ));
    }

    #[test]
    fn wedge_identity_is_identity() {
        for n in 3..=6 {
            let id = DMatrix::identity(n, n);
            assert_eq!(wedge(&id, &id).unwrap(), CurvatureOperator::identity(n));
        }
    }

    #[test]
    fn gauss_operator_of_diagonal_form() {
        let h = diag(&[2.0, 3.0, 5.0]);
        let r = wedge(&h, &h).unwrap();
        assert_eq!(r, CurvatureOperator::from_diagonal(3, &[6.0, 10.0, 15.0]).unwrap());
    }

    #[test]
    fn wedge_is_symmetric_in_arguments() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.5, 2.0, -1.0, 0.3, 0.5, 0.3, 4.0]);
        let b = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 1.0, 1.0, 2.0, -3.0, 1.0, -3.0, 1.0]);
        assert_eq!(wedge(&a, &b).unwrap(), wedge(&b, &a).unwrap());
        assert!(wedge(&DMatrix::from_element(3, 3, 1.0).upper_triangle(), &b).is_err());
    }

    #[test]
    fn ricci_examples() {
        for n in 3..=6 {
            let ric = CurvatureOperator::identity(n).ricci();
            assert_eq!(ric, DMatrix::identity(n, n) * (n as f64 - 1.0));
            assert_eq!(CurvatureOperator::zero(n).ricci(), DMatrix::zeros(n, n));
        }
        let r = CurvatureOperator::from_diagonal(3, &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(r.ricci(), diag(&[1.0, 1.0, 0.0]));
    }

    #[test]
    fn decompose_sphere() {
        for n in 3..=6 {
            let p = CurvatureOperator::identity(n).decompose().unwrap();
            let nf = n as f64;
            assert!(close(p.scal, nf * (nf - 1.0), 1e-12));
            assert!((p.scalar_part.coeffs() - DMatrix::<f64>::identity(p.scalar_part.len(), p.scalar_part.len())).amax() < 1e-12);
            assert!(p.norm_ricci < 1e-12);
            assert!(p.norm_weyl < 1e-12);
        }
    }

    #[test]
    fn decompose_cylinder_in_dimension_three() {
        let r = CurvatureOperator::from_diagonal(3, &[1.0, 0.0, 0.0]).unwrap();
        let p = r.decompose().unwrap();
        assert!(close(p.scal, 2.0, 1e-14));
        assert!(close(p.lambda_bar, 2.0 / 3.0, 1e-14));
        let expected = diag(&[1.0 / 3.0, 1.0 / 3.0, -2.0 / 3.0]);
        assert!((&p.ric0 - expected).amax() < 1e-14);
        assert!(p.norm_weyl < 1e-14);
    }

    #[test]
    fn decompose_rejects_dimension_two() {
        let r = CurvatureOperator::identity(2);
        assert!(matches!(r.decompose(), Err(Error::DimensionOutOfRange { found: 2, .. })));
    }

    #[test]
    fn bianchi_defect_examples() {
        let r = CurvatureOperator::from_diagonal(3, &[1.0, -2.0, 7.0]).unwrap();
        let mut m = DMatrix::from_element(3, 3, 0.25);
        m[(0, 0)] = 3.0;
        assert_eq!(r.bianchi_defect(), 0.0);
        assert_eq!(CurvatureOperator::new(3, m).unwrap().bianchi_defect(), 0.0);

        // sym(phi_01 (x) phi_23) violates Bianchi
        let mut m = DMatrix::zeros(6, 6);
        let (a, b) = (BasisIndex::new(0, 1).flat(4), BasisIndex::new(2, 3).flat(4));
        m[(a, b)] = 0.5;
        m[(b, a)] = 0.5;
        let r = CurvatureOperator::new(4, m).unwrap();
        assert!(r.bianchi_defect() > 0.1);
        let p = r.project_bianchi();
        assert!(p.bianchi_defect() < 1e-15);
        assert!((&p.project_bianchi() - &p).norm() < 1e-15);
    }

    #[test]
    fn projection_fixes_identity() {
        for n in 3..=6 {
            let id = CurvatureOperator::identity(n);
            assert_eq!(id.project_bianchi(), id);
        }
    }

    #[test]
    fn spectrum_is_sorted() {
        let r = CurvatureOperator::from_diagonal(3, &[1.0, -1.0, 1.0]).unwrap();
        assert_eq!(r.spectrum().values, vec![-1.0, 1.0, 1.0]);
        assert!(CurvatureOperator::identity(5).spectrum().values.iter().all(|&v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn tensor_norm_is_twice_coefficient_norm() {
        let a = DMatrix::from_row_slice(4, 4, &[
            1.0, 0.2, 0.0, 0.3, 0.2, -1.0, 0.5, 0.0, 0.0, 0.5, 2.0, 0.1, 0.3, 0.0, 0.1, 0.4,
        ]);
        let r = wedge(&a, &DMatrix::identity(4, 4)).unwrap();
        assert!(close(r.tensor_norm(), 2.0 * r.norm(), 1e-12));
    }
}
