//! Brute-force reference computations shared by the integration tests.
//!
//! Everything here is written from scratch against plain nested `Vec`s so
//! that it shares no code path with the library.

#![allow(dead_code)]

use curvlab::random::{gaussian_bianchi, stream_rng};
use curvlab::CurvatureOperator;
use nalgebra::DMatrix;

/// Lexicographic list of pairs `i < j`.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

/// `E_ij - E_ji` as a dense row-major matrix.
pub fn elementary(n: usize, i: usize, j: usize) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; n]; n];
    m[i][j] = 1.0;
    m[j][i] = -1.0;
    m
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

/// `c_abg = -1/2 tr([phi_a, phi_b] phi_g)`, computed densely.
pub fn dense_constants(n: usize) -> Vec<Vec<Vec<f64>>> {
    let ps = pairs(n);
    let basis: Vec<_> = ps.iter().map(|&(i, j)| elementary(n, i, j)).collect();
    let len = ps.len();
    let mut c = vec![vec![vec![0.0; len]; len]; len];
    for a in 0..len {
        for b in 0..len {
            let ab = matmul(&basis[a], &basis[b]);
            let ba = matmul(&basis[b], &basis[a]);
            for g in 0..len {
                let mut tr = 0.0;
                for i in 0..n {
                    for k in 0..n {
                        tr += (ab[i][k] - ba[i][k]) * basis[g][k][i];
                    }
                }
                c[a][b][g] = -0.5 * tr;
            }
        }
    }
    c
}

/// `(A # B)_ab = 1/2 sum c_agh c_bdt A_gd B_ht` with dense loops.
pub fn dense_sharp(n: usize, a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let c = dense_constants(n);
    let len = c.len();
    DMatrix::from_fn(len, len, |al, be| {
        let mut acc = 0.0;
        for g in 0..len {
            for h in 0..len {
                for d in 0..len {
                    for t in 0..len {
                        acc += c[al][g][h] * c[be][d][t] * a[(g, d)] * b[(h, t)];
                    }
                }
            }
        }
        0.5 * acc
    })
}

/// Full 4-tensor `Rm[i][j][k][l] = <R(e_i ^ e_j), e_k ^ e_l>` from coefficients.
pub fn tensor(n: usize, m: &DMatrix<f64>) -> Vec<Vec<Vec<Vec<f64>>>> {
    let ps = pairs(n);
    let idx = |i: usize, j: usize| -> Option<(usize, f64)> {
        if i == j {
            None
        } else if i < j {
            Some((ps.iter().position(|&p| p == (i, j)).unwrap(), 1.0))
        } else {
            Some((ps.iter().position(|&p| p == (j, i)).unwrap(), -1.0))
        }
    };
    let mut t = vec![vec![vec![vec![0.0; n]; n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    if let (Some((ab, s1)), Some((cd, s2))) = (idx(i, j), idx(k, l)) {
                        t[i][j][k][l] = s1 * s2 * m[(cd, ab)];
                    }
                }
            }
        }
    }
    t
}

/// `Ric_ik = sum_j Rm(i, j, k, j)`.
pub fn dense_ricci(n: usize, m: &DMatrix<f64>) -> DMatrix<f64> {
    let t = tensor(n, m);
    DMatrix::from_fn(n, n, |i, k| (0..n).map(|j| t[i][j][k][j]).sum())
}

/// Largest cyclic sum `Rm(i,j,k,l) + Rm(j,k,i,l) + Rm(k,i,j,l)`.
pub fn dense_bianchi_defect(n: usize, m: &DMatrix<f64>) -> f64 {
    let t = tensor(n, m);
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    worst = worst.max((t[i][j][k][l] + t[j][k][i][l] + t[k][i][j][l]).abs());
                }
            }
        }
    }
    worst
}

/// Levi-Civita symbol on three indices.
pub fn epsilon(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

pub fn random_bianchi(n: usize, seed: u64, stream: u64) -> CurvatureOperator {
    gaussian_bianchi(&mut stream_rng(seed, stream), n)
}

/// Entrywise maximum difference of two equally sized matrices.
pub fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}
