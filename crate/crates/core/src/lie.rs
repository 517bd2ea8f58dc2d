//! The Lie algebra so(n) viewed as the space of 2-forms on R^n.
//!
//! The basis is `phi_(i,j) = E_ij - E_ji` for `i < j`, ordered
//! lexicographically. With the pairing `<A, B> = -tr(AB) / 2` it is
//! orthonormal, and `phi_(i,j)` corresponds to `e_i ^ e_j`.
//!
//! Structure constants `c_abg = <[phi_a, phi_b], phi_g>` are computed by
//! projection and stored sparsely.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub const MIN_DIM: usize = 3;
pub const MAX_DIM: usize = 12;

const SKEW_TOL: f64 = 1e-12;
const SNAP_TOL: f64 = 1e-9;

/// Number of basis 2-forms in dimension `n`.
pub fn basis_len(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// An ordered pair `(i, j)` with `i < j` naming the basis 2-form `e_i ^ e_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    pub i: usize,
    pub j: usize,
}

impl BasisIndex {
    pub fn new(i: usize, j: usize) -> Self {
        debug_assert!(i < j);
        Self { i, j }
    }

    /// Lexicographic flat index of `(i, j)` among all pairs in dimension `n`.
    pub fn flat(self, n: usize) -> usize {
        self.i * n - self.i * (self.i + 1) / 2 + (self.j - self.i - 1)
    }

    pub fn from_flat(n: usize, alpha: usize) -> Self {
        let mut rest = alpha;
        for i in 0..n {
            let row = n - i - 1;
            if rest < row {
                return Self { i, j: i + 1 + rest };
            }
            rest -= row;
        }
        panic!("flat index {alpha} out of range for n = {n}");
    }
}

/// Flat index and orientation sign of `e_i ^ e_j` for arbitrary `i != j`.
///
/// `e_j ^ e_i = -e_i ^ e_j`, so swapped pairs come back with sign `-1`.
pub fn oriented_index(n: usize, i: usize, j: usize) -> Option<(usize, f64)> {
    match i.cmp(&j) {
        std::cmp::Ordering::Less => Some((BasisIndex::new(i, j).flat(n), 1.0)),
        std::cmp::Ordering::Greater => Some((BasisIndex::new(j, i).flat(n), -1.0)),
        std::cmp::Ordering::Equal => None,
    }
}

/// One entry `c_abg` with `a < b < g`. The full tensor is recovered by
/// signed permutation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StructureTriple {
    pub a: usize,
    pub b: usize,
    pub g: usize,
    pub value: f64,
}

#[derive(Clone, Debug)]
pub struct LieStructure {
    n: usize,
    pairs: Vec<BasisIndex>,
    basis: Vec<DMatrix<f64>>,
    triples: Vec<StructureTriple>,
    /// For each `a`, the nonzero `(b, g, c_abg)` over all ordered `(b, g)`.
    slices: Vec<Vec<(usize, usize, f64)>>,
}

impl LieStructure {
    pub fn new(n: usize) -> Result<Self> {
        if !(MIN_DIM..=MAX_DIM).contains(&n) {
            return Err(Error::DimensionOutOfRange { found: n, min: MIN_DIM, max: MAX_DIM });
        }
        let len = basis_len(n);
        let pairs: Vec<BasisIndex> = (0..len).map(|a| BasisIndex::from_flat(n, a)).collect();
        let basis: Vec<DMatrix<f64>> = pairs
            .iter()
            .map(|p| {
                let mut m = DMatrix::zeros(n, n);
                m[(p.i, p.j)] = 1.0;
                m[(p.j, p.i)] = -1.0;
                m
            })
            .collect();

        let mut triples = Vec::new();
        for a in 0..len {
            for b in a + 1..len {
                let br = commutator(&basis[a], &basis[b]);
                for g in b + 1..len {
                    let mut v = pairing(&br, &basis[g]);
                    if (v.abs() - 1.0).abs() < SNAP_TOL {
                        v = v.signum();
                    } else if v.abs() < SNAP_TOL {
                        continue;
                    }
                    triples.push(StructureTriple { a, b, g, value: v });
                }
            }
        }

        let mut slices = vec![Vec::new(); len];
        for t in &triples {
            for (x, y, z, sign) in permutations(t) {
                slices[x].push((y, z, sign * t.value));
            }
        }
        for s in &mut slices {
            s.sort_by_key(|&(y, z, _)| (y, z));
        }

        Ok(Self { n, pairs, basis, triples, slices })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `N = n(n-1)/2`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[BasisIndex] {
        &self.pairs
    }

    pub fn basis(&self, alpha: usize) -> &DMatrix<f64> {
        &self.basis[alpha]
    }

    pub fn triples(&self) -> &[StructureTriple] {
        &self.triples
    }

    /// Nonzero `(b, g, c_ab g)` for fixed first index `a`.
    pub fn slice(&self, a: usize) -> &[(usize, usize, f64)] {
        &self.slices[a]
    }

    /// Number of nonzero entries of the full (unsymmetrized) tensor.
    pub fn nnz(&self) -> usize {
        self.slices.iter().map(Vec::len).sum()
    }

    /// `c_abg` for arbitrary indices.
    pub fn constant(&self, a: usize, b: usize, g: usize) -> f64 {
        self.slices[a]
            .binary_search_by_key(&(b, g), |&(y, z, _)| (y, z))
            .map(|k| self.slices[a][k].2)
            .unwrap_or(0.0)
    }

    /// Dense `N x N x N` tensor, indexed `[a][b][g]`.
    pub fn dense_constants(&self) -> Vec<Vec<Vec<f64>>> {
        let len = self.len();
        let mut c = vec![vec![vec![0.0; len]; len]; len];
        for (a, slice) in self.slices.iter().enumerate() {
            for &(b, g, v) in slice {
                c[a][b][g] = v;
            }
        }
        c
    }

    fn check_skew(&self, m: &DMatrix<f64>) -> Result<()> {
        if m.nrows() != self.n || m.ncols() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, rows: m.nrows(), cols: m.ncols() });
        }
        let scale = 1.0 + m.amax();
        for i in 0..self.n {
            for j in i..self.n {
                if (m[(i, j)] + m[(j, i)]).abs() > SKEW_TOL * scale {
                    return Err(Error::NotSkew { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    /// `[A, B] = AB - BA` for skew matrices.
    pub fn bracket(&self, a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.check_skew(a)?;
        self.check_skew(b)?;
        Ok(commutator(a, b))
    }

    /// `<A, B> = -tr(AB) / 2`.
    pub fn inner(&self, a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
        self.check_skew(a)?;
        self.check_skew(b)?;
        Ok(pairing(a, b))
    }

    /// Coordinates `x_a = <X, phi_a>` of a skew matrix.
    pub fn coords(&self, x: &DMatrix<f64>) -> Result<Vec<f64>> {
        self.check_skew(x)?;
        Ok(self.pairs.iter().map(|p| x[(p.i, p.j)]).collect())
    }

    pub fn from_coords(&self, x: &[f64]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (p, &v) in self.pairs.iter().zip(x) {
            m[(p.i, p.j)] += v;
            m[(p.j, p.i)] -= v;
        }
        m
    }

    /// The `N x N` orthogonal matrix by which `g` in O(n) acts on 2-forms,
    /// `G_ab = <g phi_b g^T, phi_a>`.
    pub fn induced_action(&self, g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        if g.nrows() != self.n || g.ncols() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, rows: g.nrows(), cols: g.ncols() });
        }
        let residual = (g.transpose() * g - DMatrix::<f64>::identity(self.n, self.n)).amax();
        if residual > 1e-10 {
            return Err(Error::NotOrthogonal { residual });
        }
        let len = self.len();
        let mut out = DMatrix::zeros(len, len);
        for b in 0..len {
            let image = g * &self.basis[b] * g.transpose();
            for (a, p) in self.pairs.iter().enumerate() {
                out[(a, b)] = image[(p.i, p.j)];
            }
        }
        Ok(out)
    }
}

fn commutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

fn pairing(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    // -tr(AB)/2 without forming the product
    -0.5 * a.component_mul(&b.transpose()).sum()
}

fn permutations(t: &StructureTriple) -> [(usize, usize, usize, f64); 6] {
    let (a, b, g) = (t.a, t.b, t.g);
    [
        (a, b, g, 1.0),
        (b, g, a, 1.0),
        (g, a, b, 1.0),
        (b, a, g, -1.0),
        (a, g, b, -1.0),
        (g, b, a, -1.0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_index_round_trip() {
        for n in 2..=MAX_DIM {
            for a in 0..basis_len(n) {
                assert_eq!(BasisIndex::from_flat(n, a).flat(n), a);
            }
        }
        assert_eq!(BasisIndex::from_flat(3, 0), BasisIndex::new(0, 1));
        assert_eq!(BasisIndex::from_flat(3, 1), BasisIndex::new(0, 2));
        assert_eq!(BasisIndex::from_flat(3, 2), BasisIndex::new(1, 2));
    }

    #[test]
    fn rejects_out_of_range_dimensions() {
        assert!(matches!(LieStructure::new(2), Err(Error::DimensionOutOfRange { .. })));
        assert!(matches!(LieStructure::new(13), Err(Error::DimensionOutOfRange { .. })));
        assert!(LieStructure::new(12).is_ok());
    }

    #[test]
    fn so3_bracket_sign() {
        let s = LieStructure::new(3).unwrap();
        assert_eq!(s.len(), 3);
        let br = s.bracket(s.basis(0), s.basis(1)).unwrap();
        assert_eq!(br, -s.basis(2));
        assert_eq!(s.constant(0, 1, 2), -1.0);
    }

    #[test]
    fn basis_acts_as_wedge() {
        // phi_(i,j) sends e_j to e_i and e_i to -e_j
        let s = LieStructure::new(4).unwrap();
        let phi = s.basis(BasisIndex::new(1, 3).flat(4));
        assert_eq!(phi[(1, 3)], 1.0);
        assert_eq!(phi[(3, 1)], -1.0);
    }

    #[test]
    fn bracket_edge_cases() {
        let s = LieStructure::new(4).unwrap();
        let a = s.basis(0).clone() * 0.7 - s.basis(4) * 1.3;
        assert_eq!(s.bracket(&a, &a).unwrap().amax(), 0.0);
        let p01 = s.basis(BasisIndex::new(0, 1).flat(4));
        let p23 = s.basis(BasisIndex::new(2, 3).flat(4));
        assert_eq!(s.bracket(p01, p23).unwrap().amax(), 0.0);
        let not_skew = DMatrix::from_element(4, 4, 1.0);
        assert!(matches!(s.bracket(&not_skew, p01), Err(Error::NotSkew { .. })));
    }

    #[test]
    fn inner_product_examples() {
        let s = LieStructure::new(3).unwrap();
        assert_eq!(s.inner(s.basis(0), s.basis(0)).unwrap(), 1.0);
        assert_eq!(s.inner(s.basis(0), s.basis(1)).unwrap(), 0.0);
        let two = s.basis(0) * 2.0;
        let three = s.basis(0) * 3.0;
        assert_eq!(s.inner(&two, &three).unwrap(), 6.0);
    }

    #[test]
    fn coords_round_trip() {
        let s = LieStructure::new(5).unwrap();
        let x: Vec<f64> = (0..s.len()).map(|k| k as f64 - 3.5).collect();
        assert_eq!(s.coords(&s.from_coords(&x)).unwrap(), x);
    }
}
