//! Integer quadratic forms: the Neron-Severi and transcendental lattices,
//! unimodular congruence, and the orthogonal group of the transcendental
//! form.

pub mod qsqrt5;

use std::collections::BTreeSet;
use std::path::Path;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::algebra::rat::is_square_free;
use crate::algebra::Rat;

pub use qsqrt5::{iota, Q5};

pub type IntMatrix = DMatrix<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("checksum mismatch for {file}: expected {expected}, found {found}")]
    Checksum { file: String, expected: String, found: String },
    #[error("cannot read {file}: {msg}")]
    Io { file: String, msg: String },
    #[error("malformed matrix in {file}: {msg}")]
    Malformed { file: String, msg: String },
    #[error("group ball exceeds {0} elements")]
    CapExceeded(usize),
}

pub const M1_FILE: &str = "m1.txt";
pub const U_FILE: &str = "u.txt";
pub const M1_SHA256: &str = "9b616defa929cd70c3e3f6826f0cc3236a146591ceb77fcc18a81c773a396009";
pub const U_SHA256: &str = "5152b5124238d37df7fa01ebbae214565831602441c1c67c3d52380fb988859d";

const M1_TEXT: &str = include_str!("../../data/m1.txt");
const U_TEXT: &str = include_str!("../../data/u.txt");

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Parse a whitespace-separated integer grid; `#` starts a comment.
pub fn parse_matrix(file: &str, text: &str) -> Result<IntMatrix, LatticeError> {
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for line in text.lines() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let row = body
            .split_whitespace()
            .map(|t| t.parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| LatticeError::Malformed { file: file.into(), msg: e.to_string() })?;
        rows.push(row);
    }
    let n = rows.first().map(Vec::len).unwrap_or(0);
    if rows.is_empty() || rows.iter().any(|r| r.len() != n) {
        return Err(LatticeError::Malformed { file: file.into(), msg: "ragged or empty grid".into() });
    }
    Ok(DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]))
}

fn checked(file: &str, text: &str, expected: &str) -> Result<IntMatrix, LatticeError> {
    let found = sha256_hex(text.as_bytes());
    if found != expected {
        return Err(LatticeError::Checksum { file: file.into(), expected: expected.into(), found });
    }
    parse_matrix(file, text)
}

/// The two transcribed 18x18 matrices with their checksums.
#[derive(Debug, Clone)]
pub struct LatticeData {
    pub m1: IntMatrix,
    pub u: IntMatrix,
    pub checksums: Vec<(String, String)>,
}

impl LatticeData {
    pub fn embedded() -> Self {
        LatticeData {
            m1: checked(M1_FILE, M1_TEXT, M1_SHA256).expect("embedded data verified"),
            u: checked(U_FILE, U_TEXT, U_SHA256).expect("embedded data verified"),
            checksums: vec![(M1_FILE.into(), M1_SHA256.into()), (U_FILE.into(), U_SHA256.into())],
        }
    }

    pub fn load(dir: &Path) -> Result<Self, LatticeError> {
        let read = |f: &str| {
            std::fs::read_to_string(dir.join(f))
                .map_err(|e| LatticeError::Io { file: dir.join(f).display().to_string(), msg: e.to_string() })
        };
        Ok(LatticeData {
            m1: checked(M1_FILE, &read(M1_FILE)?, M1_SHA256)?,
            u: checked(U_FILE, &read(U_FILE)?, U_SHA256)?,
            checksums: vec![(M1_FILE.into(), M1_SHA256.into()), (U_FILE.into(), U_SHA256.into())],
        })
    }
}

pub fn from_rows(rows: &[&[i64]]) -> IntMatrix {
    DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j])
}

pub fn block_diagonal(blocks: &[IntMatrix]) -> IntMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = DMatrix::zeros(n, n);
    let mut k = 0;
    for b in blocks {
        out.view_mut((k, k), (b.nrows(), b.ncols())).copy_from(b);
        k += b.nrows();
    }
    out
}

pub fn e8_negative() -> IntMatrix {
    let mut m = DMatrix::from_diagonal_element(8, 8, -2);
    for (i, j) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (4, 6), (6, 7)] {
        m[(i, j)] = 1;
        m[(j, i)] = 1;
    }
    m
}

pub fn hyperbolic() -> IntMatrix {
    from_rows(&[&[0, 1], &[1, 0]])
}

fn twisted_block() -> IntMatrix {
    from_rows(&[&[2, 1], &[1, -2]])
}

/// `E8(-1) + E8(-1) + [[2,1],[1,-2]]`.
pub fn m0() -> IntMatrix {
    block_diagonal(&[e8_negative(), e8_negative(), twisted_block()])
}

/// Transcendental form `U + [[2,1],[1,-2]]`.
pub fn transcendental_form() -> IntMatrix {
    block_diagonal(&[hyperbolic(), twisted_block()])
}

/// Fraction-free (Bareiss) determinant.
pub fn gram_det(g: &IntMatrix) -> BigInt {
    let n = g.nrows();
    assert_eq!(n, g.ncols(), "square matrix");
    let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from(g[(i, j)])).collect()).collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::from(1);
    }
    m[n - 1][n - 1].clone() * sign
}

/// Inertia `(positive, negative, zero)` by rational congruence diagonalization.
pub fn gram_inertia(g: &IntMatrix) -> (usize, usize, usize) {
    let n = g.nrows();
    let mut m: Vec<Vec<Rat>> = (0..n).map(|i| (0..n).map(|j| Rat::from_integer(g[(i, j)].into())).collect()).collect();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    for k in 0..n {
        if m[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !m[j][j].is_zero()) {
                m.swap(j, k);
                for row in m.iter_mut() {
                    row.swap(j, k);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !m[k][j].is_zero()) {
                // row/col k += row/col j makes the diagonal 2 m[k][j]
                for c in 0..n {
                    let v = m[j][c].clone();
                    m[k][c] += v;
                }
                for r in 0..n {
                    let v = m[r][j].clone();
                    m[r][k] += v;
                }
            } else {
                zero += 1;
                continue;
            }
        }
        let p = m[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            let f = &m[i][k] / &p;
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                let v = &f * &m[k][c];
                m[i][c] -= v;
            }
            for r in k..n {
                let v = &f * &m[r][k];
                m[r][i] -= v;
            }
        }
    }
    (pos, neg, zero)
}

pub fn gram_signature(g: &IntMatrix) -> (usize, usize) {
    let (p, n, _) = gram_inertia(g);
    (p, n)
}

/// `tU G1 U = G2` and `|det U| = 1`.
pub fn congruence_check(g1: &IntMatrix, g2: &IntMatrix, u: &IntMatrix) -> Result<bool, LatticeError> {
    let n = g1.nrows();
    for (name, m) in [("G1", g1), ("G2", g2), ("U", u)] {
        if m.nrows() != n || m.ncols() != n {
            return Err(LatticeError::Dimension(format!("{name} is {}x{}, expected {n}x{n}", m.nrows(), m.ncols())));
        }
    }
    Ok(&(u.transpose() * g1) * u == *g2 && gram_det(u).abs() == BigInt::from(1))
}

/// Sufficient primitivity test: `|det G|` square-free.
pub fn primitivity_by_det(g: &IntMatrix) -> bool {
    is_square_free(&gram_det(g).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Membership {
    pub member: bool,
    pub plus: bool,
}

/// Oriented positive 2-plane `(Re xi, Im xi)` of a point of the period domain.
fn real_plane(xi: &[Complex64; 4]) -> ([f64; 4], [f64; 4]) {
    (xi.map(|z| z.re), xi.map(|z| z.im))
}

fn pairing(a: &IntMatrix, x: &[f64; 4], y: &[f64; 4]) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            s += x[i] * a[(i, j)] as f64 * y[j];
        }
    }
    s
}

/// Reference point of the component `D+`.
pub fn reference_point() -> [Complex64; 4] {
    let i = Complex64::new(0.0, 1.0);
    iota(i, i)
}

/// Sign of the orientation of `P xi0` against `xi0`. The positive planes of
/// a signature (2,2) form project isomorphically onto each other, so the
/// determinant of the cross pairing never vanishes.
pub fn component_sign(p: &IntMatrix) -> f64 {
    let a = transcendental_form();
    let xi0 = reference_point();
    let mut img = [Complex64::new(0.0, 0.0); 4];
    for (i, v) in img.iter_mut().enumerate() {
        for (j, x) in xi0.iter().enumerate() {
            *v += x * p[(i, j)] as f64;
        }
    }
    let (x0, y0) = real_plane(&xi0);
    let (x1, y1) = real_plane(&img);
    let d = pairing(&a, &x0, &x1) * pairing(&a, &y0, &y1) - pairing(&a, &x0, &y1) * pairing(&a, &y0, &x1);
    d.signum()
}

pub fn orthogonal_membership(p: &IntMatrix) -> Result<Membership, LatticeError> {
    if p.nrows() != 4 || p.ncols() != 4 {
        return Err(LatticeError::Dimension(format!("expected 4x4, got {}x{}", p.nrows(), p.ncols())));
    }
    let a = transcendental_form();
    let member = &(p.transpose() * &a) * p == a;
    Ok(Membership { member, plus: member && component_sign(p) > 0.0 })
}

pub fn generators() -> Vec<(&'static str, IntMatrix)> {
    vec![
        ("G1", from_rows(&[&[1, 1, -1, 2], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 1]])),
        ("G2", from_rows(&[&[1, -1, -2, -1], &[0, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 0, 1]])),
        ("G3", from_rows(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 1, -1]])),
        ("H1", from_rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, -1, 1]])),
        ("H2", from_rows(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]])),
    ]
}

/// Generators listed for the subgroup preserving the components.
pub const PLUS_GENERATORS: [&str; 4] = ["G1", "G2", "G3", "H2"];

/// Inverse of an element of the orthogonal group: `A^-1 tP A`.
pub fn orthogonal_inverse(p: &IntMatrix) -> IntMatrix {
    // A^-1 = A / 5 on the second block and U on the first; compute exactly
    let a = transcendental_form();
    let t = p.transpose() * &a;
    let mut out = DMatrix::zeros(4, 4);
    // A^-1 = diag(U, (1/5)[[2,1],[1,-2]])
    for j in 0..4 {
        out[(0, j)] = t[(1, j)];
        out[(1, j)] = t[(0, j)];
        let (r2, r3) = (2 * t[(2, j)] + t[(3, j)], t[(2, j)] - 2 * t[(3, j)]);
        debug_assert!(r2 % 5 == 0 && r3 % 5 == 0);
        out[(2, j)] = r2 / 5;
        out[(3, j)] = r3 / 5;
    }
    out
}

/// Representative modulo sign: first nonzero entry positive.
pub fn projective_key(p: &IntMatrix) -> Vec<i64> {
    let v: Vec<i64> = p.transpose().iter().copied().collect();
    let s = v.iter().find(|x| **x != 0).map(|x| x.signum()).unwrap_or(1);
    v.into_iter().map(|x| x * s).collect()
}

pub fn from_key(k: &[i64]) -> IntMatrix {
    DMatrix::from_row_slice(4, 4, k)
}

/// All products of at most `radius` generators and inverses, modulo sign.
pub fn group_ball(gens: &[IntMatrix], radius: usize, cap: usize) -> Result<Vec<IntMatrix>, LatticeError> {
    let mut steps: Vec<IntMatrix> = Vec::new();
    for g in gens {
        steps.push(g.clone());
        steps.push(orthogonal_inverse(g));
    }
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let id = DMatrix::<i64>::identity(4, 4);
    seen.insert(projective_key(&id));
    let mut frontier = vec![id];
    for _ in 0..radius {
        let next: Vec<Vec<i64>> = frontier
            .par_iter()
            .flat_map_iter(|m| steps.iter().map(move |s| projective_key(&(m * s))))
            .collect();
        let mut fresh = BTreeSet::new();
        for k in next {
            if !seen.contains(&k) {
                fresh.insert(k);
            }
        }
        seen.extend(fresh.iter().cloned());
        if seen.len() > cap {
            return Err(LatticeError::CapExceeded(cap));
        }
        frontier = fresh.iter().map(|k| from_key(k)).collect();
        if frontier.is_empty() {
            break;
        }
    }
    Ok(seen.iter().map(|k| from_key(k)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        assert_eq!(gram_det(&hyperbolic()), BigInt::from(-1));
        assert_eq!(gram_det(&transcendental_form()), BigInt::from(5));
        assert_eq!(gram_det(&e8_negative()), BigInt::from(1));
        assert_eq!(gram_det(&from_rows(&[&[0, 0], &[0, 1]])), BigInt::zero());
    }

    #[test]
    fn signatures() {
        assert_eq!(gram_signature(&e8_negative()), (0, 8));
        assert_eq!(gram_signature(&transcendental_form()), (2, 2));
        assert_eq!(gram_signature(&hyperbolic()), (1, 1));
        assert_eq!(gram_inertia(&from_rows(&[&[0, 0], &[0, 0]])), (0, 0, 2));
    }

    #[test]
    fn square_free_det() {
        assert!(!primitivity_by_det(&from_rows(&[&[4]])));
        assert!(primitivity_by_det(&from_rows(&[&[-6, 0], &[0, 1]])));
    }

    #[test]
    fn parse_comments_and_errors() {
        let m = parse_matrix("t", "# c\n1 2 # x\n3 4\n").unwrap();
        assert_eq!(m, from_rows(&[&[1, 2], &[3, 4]]));
        assert!(parse_matrix("t", "1 2\n3\n").is_err());
        assert!(parse_matrix("t", "1 a\n").is_err());
    }

    #[test]
    fn inverse_of_generators() {
        for (_, g) in generators() {
            assert_eq!(&g * orthogonal_inverse(&g), DMatrix::identity(4, 4));
        }
    }
}
