//! Conjugation-invariant data of monodromy matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::{CMatrix, FundamentalMatrix};
use crate::lattice::{group_ball, IntMatrix};

pub(crate) fn ser_matrix<S: serde::Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<[f64; 2]>> = (0..4).map(|i| (0..4).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
    rows.serialize(s)
}

/// Coefficients of `det(t - M)`, constant term first (Faddeev-LeVerrier).
pub fn char_poly(m: &CMatrix) -> [Complex64; 5] {
    let mut c = [Complex64::new(0.0, 0.0); 5];
    c[4] = Complex64::new(1.0, 0.0);
    let mut mk = CMatrix::zeros();
    for k in 1..=4 {
        mk = m * mk + CMatrix::identity() * c[5 - k];
        c[4 - k] = -(m * mk).trace() / k as f64;
    }
    c
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonodromyInvariants {
    /// Rounded real parts, constant term first.
    pub char_poly: Vec<i64>,
    pub char_poly_residual: f64,
    pub det: [f64; 2],
    pub det_abs_error: f64,
}

pub fn monodromy_invariants(m: &FundamentalMatrix) -> MonodromyInvariants {
    let c = char_poly(&m.value);
    let rounded: Vec<i64> = c.iter().map(|z| z.re.round() as i64).collect();
    let residual = c.iter().zip(&rounded).map(|(z, r)| (z - Complex64::new(*r as f64, 0.0)).norm()).fold(0.0, f64::max);
    let det = m.value.determinant();
    MonodromyInvariants { char_poly: rounded, char_poly_residual: residual, det: [det.re, det.im], det_abs_error: (det.norm() - 1.0).abs() }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormSolution {
    /// Number of singular values below the threshold.
    pub dimension: usize,
    /// Residual of the unit-norm minimizer.
    pub residual: f64,
    pub singular_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantForm {
    /// Complex symmetric `G` with `tM G M = G`.
    pub symmetric: FormSolution,
    /// Hermitian `H` with `M* H M = H`; its signature is basis independent.
    pub hermitian: FormSolution,
    pub hermitian_signature: (usize, usize),
    /// Signature of `G` in a basis where every input matrix is real.
    pub symmetric_signature: Option<(usize, usize)>,
    /// Largest imaginary part left in the matrices and in `G` after moving
    /// to that basis, relative to their size.
    pub reality_residual: Option<f64>,
    #[serde(skip)]
    pub g: CMatrix,
    #[serde(skip)]
    pub h: CMatrix,
}

fn sym_basis() -> Vec<(usize, usize)> {
    (0..4).flat_map(|i| (i..4).map(move |j| (i, j))).collect()
}

fn null_direction<T: nalgebra::ComplexField<RealField = f64>>(k: DMatrix<T>, threshold: f64) -> (FormSolution, DVector<T>) {
    let n = k.ncols();
    let svd = k.svd(false, true);
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let vt = svd.v_t.expect("requested");
    let (imin, smin) = sv.iter().enumerate().fold((0, f64::INFINITY), |acc, (i, s)| if *s < acc.1 { (i, *s) } else { acc });
    // The equations have entries of size |M|^2, so scale by at least 1.
    let smax = sv.iter().copied().fold(1.0, f64::max);
    let dim = sv.iter().filter(|s| **s <= threshold * smax).count() + n.saturating_sub(sv.len());
    let v = vt.row(imin).adjoint();
    let mut sorted = sv.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    (FormSolution { dimension: dim, residual: smin, singular_values: sorted }, v)
}

/// Least-squares invariant forms of a set of matrices.
pub fn invariant_form(ms: &[CMatrix], threshold: f64) -> InvariantForm {
    let basis = sym_basis();
    // symmetric: complex unknowns g_ij, i <= j
    let mut rows = Vec::new();
    for m in ms {
        let cols: Vec<CMatrix> = basis
            .iter()
            .map(|&(i, j)| {
                let mut e = CMatrix::zeros();
                e[(i, j)] = Complex64::new(1.0, 0.0);
                e[(j, i)] = Complex64::new(1.0, 0.0);
                m.transpose() * e * m - e
            })
            .collect();
        for r in 0..16 {
            rows.push(cols.iter().map(|c| c[(r % 4, r / 4)]).collect::<Vec<_>>());
        }
    }
    let k = DMatrix::from_fn(rows.len(), basis.len(), |i, j| rows[i][j]);
    let (symmetric, v) = null_direction(k, threshold);
    let mut g = CMatrix::zeros();
    for (idx, &(i, j)) in basis.iter().enumerate() {
        g[(i, j)] = v[idx];
        g[(j, i)] = v[idx];
    }

    // hermitian: real unknowns (diagonal, re and im of the upper triangle)
    let mut herm_basis: Vec<CMatrix> = Vec::new();
    for &(i, j) in &basis {
        let mut e = CMatrix::zeros();
        e[(i, j)] = Complex64::new(1.0, 0.0);
        e[(j, i)] = Complex64::new(1.0, 0.0);
        herm_basis.push(e);
        if i != j {
            let mut e = CMatrix::zeros();
            e[(i, j)] = Complex64::new(0.0, 1.0);
            e[(j, i)] = Complex64::new(0.0, -1.0);
            herm_basis.push(e);
        }
    }
    let mut hrows: Vec<Vec<f64>> = Vec::new();
    for m in ms {
        let cols: Vec<CMatrix> = herm_basis.iter().map(|e| m.adjoint() * e * m - e).collect();
        for r in 0..16 {
            hrows.push(cols.iter().map(|c| c[(r % 4, r / 4)].re).collect());
            hrows.push(cols.iter().map(|c| c[(r % 4, r / 4)].im).collect());
        }
    }
    let hk = DMatrix::from_fn(hrows.len(), herm_basis.len(), |i, j| hrows[i][j]);
    let (hermitian, hv) = null_direction(hk, threshold);
    let h = herm_basis.iter().zip(hv.iter()).fold(CMatrix::zeros(), |acc, (e, x)| acc + e * Complex64::new(*x, 0.0));
    let eig: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    let sig = signature_of(&eig);
    let real = real_basis(&g, &h).map(|c| realified(ms, &g, &c));
    InvariantForm {
        symmetric,
        hermitian,
        hermitian_signature: sig,
        symmetric_signature: real.map(|r| r.0),
        reality_residual: real.map(|r| r.1),
        g,
        h,
    }
}

fn signature_of(eig: &[f64]) -> (usize, usize) {
    let emax = eig.iter().map(|x| x.abs()).fold(0.0, f64::max);
    (eig.iter().filter(|x| **x > 1e-6 * emax).count(), eig.iter().filter(|x| **x < -1e-6 * emax).count())
}

/// A basis `C` with `C^-1 M C` real for every `M` preserving both `G` and
/// `H`. With `G = g C^-T S C^-1` and `H = h C^-* S C^-1` for one real `S`,
/// `T = G^-1 conj(H)` is a multiple of `C conj(C)^-1`; after scaling so that
/// `T conj(T) = I`, any `X + T conj(X)` is such a basis.
pub fn real_basis(g: &CMatrix, h: &CMatrix) -> Option<CMatrix> {
    let t = g.try_inverse()? * h.map(|z| z.conj());
    let tt = t * t.map(|z| z.conj());
    let s = tt.trace() / 4.0;
    if s.re <= 0.0 {
        return None;
    }
    let t = t / Complex64::new(s.re.sqrt(), 0.0);
    // a fixed, generic seed matrix
    let x = CMatrix::from_fn(|i, j| Complex64::new(1.0 + (3 * i + j) as f64 * 0.37, ((i * 5 + 2 * j) % 7) as f64 * 0.29 - 0.8));
    let c = x + t * x.map(|z| z.conj());
    c.try_inverse().map(|_| c)
}

fn realified(ms: &[CMatrix], g: &CMatrix, c: &CMatrix) -> ((usize, usize), f64) {
    let ci = c.try_inverse().expect("checked invertible");
    let mut res: f64 = 0.0;
    for m in ms {
        let r = ci * m * c;
        let im = r.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let re = r.iter().map(|z| z.re.abs()).fold(0.0, f64::max).max(1e-300);
        res = res.max(im / re);
    }
    let s = c.transpose() * g * c;
    // fix the overall phase on the largest entry
    let big = s.iter().copied().fold(Complex64::new(0.0, 0.0), |a, z| if z.norm() > a.norm() { z } else { a });
    let s = s * (big.conj() / big.norm());
    let im = s.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    res = res.max(im / big.norm());
    let re = s.map(|z| z.re);
    let eig: Vec<f64> = re.symmetric_eigenvalues().iter().copied().collect();
    (signature_of(&eig), res)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Identification {
    pub ball_radius: usize,
    pub ball_size: usize,
    /// Elements of the ball whose characteristic polynomial equals that of
    /// the monodromy up to the sign ambiguity of projective classes.
    pub char_poly_matches: usize,
}

fn int_char_poly(p: &IntMatrix) -> Vec<i64> {
    let m = CMatrix::from_fn(|i, j| Complex64::new(p[(i, j)] as f64, 0.0));
    char_poly(&m).iter().map(|z| z.re.round() as i64).collect()
}

/// Conjugacy-class evidence against a ball of the orthogonal group.
pub fn identify(invs: &[MonodromyInvariants], gens: &[IntMatrix], radius: usize) -> Vec<Identification> {
    let ball = group_ball(gens, radius, 5_000_000).unwrap_or_default();
    let polys: Vec<Vec<i64>> = ball.iter().map(int_char_poly).collect();
    invs.iter()
        .map(|inv| {
            let flipped: Vec<i64> = inv.char_poly.iter().enumerate().map(|(k, c)| if k % 2 == 0 { *c } else { -c }).collect();
            let n = polys.iter().filter(|p| **p == inv.char_poly || **p == flipped).count();
            Identification { ball_radius: radius, ball_size: ball.len(), char_poly_matches: n }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_char_poly() {
        let c = char_poly(&CMatrix::identity());
        let want = [1.0, -4.0, 6.0, -4.0, 1.0];
        for (z, w) in c.iter().zip(want) {
            assert!((z - Complex64::new(w, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn identity_leaves_all_forms() {
        let f = invariant_form(&[CMatrix::identity()], 1e-8);
        assert_eq!(f.symmetric.dimension, 10);
        assert_eq!(f.hermitian.dimension, 16);
    }
}
