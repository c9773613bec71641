//! Exact arithmetic in Q(sqrt 5) and the map from pairs of half-planes to
//! the period domain.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::algebra::rat::rat_to_f64;
use crate::algebra::{rat, rat_int, Rat};

/// `a + b sqrt(5)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Q5 {
    pub a: Rat,
    pub b: Rat,
}

impl Q5 {
    pub fn new(a: Rat, b: Rat) -> Self {
        Q5 { a, b }
    }

    pub fn from_int(n: i64) -> Self {
        Q5::new(rat_int(n), Rat::zero())
    }

    pub fn sqrt5() -> Self {
        Q5::new(Rat::zero(), Rat::one())
    }

    pub fn zero() -> Self {
        Q5::from_int(0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        Q5::new(self.a.clone(), -self.b.clone())
    }

    pub fn norm(&self) -> Rat {
        &self.a * &self.a - rat_int(5) * &self.b * &self.b
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(Q5::new(c.a / &n, c.b / n))
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.a) + rat_to_f64(&self.b) * 5f64.sqrt()
    }
}

impl Add for &Q5 {
    type Output = Q5;
    fn add(self, o: &Q5) -> Q5 {
        Q5::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &Q5 {
    type Output = Q5;
    fn sub(self, o: &Q5) -> Q5 {
        Q5::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Mul for &Q5 {
    type Output = Q5;
    fn mul(self, o: &Q5) -> Q5 {
        Q5::new(&self.a * &o.a + rat_int(5) * &self.b * &o.b, &self.a * &o.b + &self.b * &o.a)
    }
}

impl Neg for &Q5 {
    type Output = Q5;
    fn neg(self) -> Q5 {
        Q5::new(-self.a.clone(), -self.b.clone())
    }
}

pub type Q5Matrix = Vec<Vec<Q5>>;

pub fn q5_from_ints(m: &[&[i64]]) -> Q5Matrix {
    m.iter().map(|r| r.iter().map(|&x| Q5::from_int(x)).collect()).collect()
}

pub fn q5_mul(a: &Q5Matrix, b: &Q5Matrix) -> Q5Matrix {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).fold(Q5::zero(), |acc, t| &acc + &(&a[i][t] * &b[t][j]))).collect())
        .collect()
}

pub fn q5_transpose(a: &Q5Matrix) -> Q5Matrix {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn q5_inverse_2x2(m: &Q5Matrix) -> Option<Q5Matrix> {
    let det = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    let d = det.inv()?;
    Some(vec![
        vec![&m[1][1] * &d, &(-&m[0][1]) * &d],
        vec![&(-&m[1][0]) * &d, &m[0][0] * &d],
    ])
}

pub fn block_diag(a: &Q5Matrix, b: &Q5Matrix) -> Q5Matrix {
    let n = a.len() + b.len();
    let mut out = vec![vec![Q5::zero(); n]; n];
    for (i, r) in a.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            out[i][j] = x.clone();
        }
    }
    for (i, r) in b.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            out[a.len() + i][a.len() + j] = x.clone();
        }
    }
    out
}

/// `W = [[1, 1], [(1 - sqrt5)/2, (1 + sqrt5)/2]]`.
pub fn w_matrix() -> Q5Matrix {
    vec![
        vec![Q5::from_int(1), Q5::from_int(1)],
        vec![Q5::new(rat(1, 2), rat(-1, 2)), Q5::new(rat(1, 2), rat(1, 2))],
    ]
}

pub fn hyperbolic_plane() -> Q5Matrix {
    q5_from_ints(&[&[0, 1], &[1, 0]])
}

/// `I2 + tW^-1`, the linear part of the map.
pub fn iota_matrix() -> Q5Matrix {
    let wt_inv = q5_transpose(&q5_inverse_2x2(&w_matrix()).expect("det W = sqrt 5"));
    block_diag(&q5_from_ints(&[&[1, 0], &[0, 1]]), &wt_inv)
}

/// `W U tW` over Q(sqrt 5).
pub fn w_block() -> Q5Matrix {
    let w = w_matrix();
    q5_mul(&q5_mul(&w, &hyperbolic_plane()), &q5_transpose(&w))
}

/// `(z1, z2) -> (I2 + tW^-1)(z1 z2, -1, z1, z2)`.
pub fn iota(z1: Complex64, z2: Complex64) -> [Complex64; 4] {
    let m = iota_matrix();
    let v = [z1 * z2, Complex64::new(-1.0, 0.0), z1, z2];
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (i, o) in out.iter_mut().enumerate() {
        for (j, x) in v.iter().enumerate() {
            *o += x * m[i][j].to_f64();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let s = Q5::sqrt5();
        assert_eq!(&s * &s, Q5::from_int(5));
        let x = Q5::new(rat(3, 2), rat(1, 2));
        assert_eq!(&x * &x.inv().unwrap(), Q5::from_int(1));
        assert!(Q5::zero().inv().is_none());
    }

    #[test]
    fn golden_ratio_value() {
        let phi = Q5::new(rat(1, 2), rat(1, 2));
        assert!((phi.to_f64() - 1.618033988749895).abs() < 1e-15);
    }
}
