//! Exact Gaussian elimination over a field.

use num_traits::Zero;

use super::rat::Rat;
use super::mpoly::MPoly;
use super::ratfun::RatFun;

pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    /// Pivot preference; smaller is better.
    fn weight(&self) -> usize {
        0
    }
}

impl Field for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as num_traits::One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

impl Field for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn one() -> Self {
        RatFun::one()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn weight(&self) -> usize {
        RatFun::weight(self)
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: Field>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].weight())
        else {
            continue;
        };
        m.swap(r, p);
        let inv = F::one().div(&m[r][c]);
        for j in c..cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..cols {
                if m[r][j].is_zero() {
                    continue;
                }
                let v = m[i][j].sub(&f.mul(&m[r][j]));
                m[i][j] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &[Vec<F>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace<F: Field>(m: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = F::zero().sub(&a[r][f]);
            }
            v
        })
        .collect()
}

/// Solve `a x = b` for a square nonsingular `a`.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = a.len();
    let k = b.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(r, s)| r.iter().chain(s.iter()).cloned().collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..n + k].to_vec()).collect())
}

/// Solve `a x = b` for a square nonsingular polynomial `a` by fraction-free
/// (Bareiss) elimination, so each entry needs a single gcd at the end.
pub fn solve_polynomial(a: &[Vec<MPoly>], b: &[Vec<MPoly>]) -> Option<Vec<Vec<RatFun>>> {
    let n = a.len();
    let k = b.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<MPoly>> = a
        .iter()
        .zip(b)
        .map(|(r, s)| r.iter().chain(s.iter()).cloned().collect())
        .collect();
    let mut prev = MPoly::one();
    for c in 0..n {
        let p = (c..n).filter(|&r| !m[r][c].is_zero()).min_by_key(|&r| m[r][c].terms().count())?;
        m.swap(c, p);
        let (top, rest) = m.split_at_mut(c + 1);
        let piv = &top[c];
        for row in rest.iter_mut() {
            for j in c + 1..n + k {
                let v = &(&piv[c] * &row[j]) - &(&row[c] * &piv[j]);
                row[j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            row[c] = MPoly::zero();
        }
        prev = m[c][c].clone();
    }
    let det = prev;
    let mut y = vec![vec![MPoly::zero(); k]; n];
    for col in 0..k {
        for i in (0..n).rev() {
            let mut acc = &det * &m[i][n + col];
            for j in i + 1..n {
                acc = &acc - &(&m[i][j] * &y[j][col]);
            }
            y[i][col] = acc.div_exact(&m[i][i]).expect("adjugate entries are polynomial");
        }
    }
    y.into_iter()
        .map(|r| r.into_iter().map(|v| RatFun::new(v, det.clone())).collect::<Result<Vec<_>, _>>().ok())
        .collect()
}

/// Solve a possibly rectangular consistent system; `None` if inconsistent.
pub fn solve_particular<F: Field>(a: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(r, s)| r.iter().cloned().chain(std::iter::once(s.clone())).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][cols].clone();
    }
    Some(x)
}

pub fn mat_mul<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![F::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if b[l][j].is_zero() {
                    continue;
                }
                out[i][j] = out[i][j].add(&a[i][l].mul(&b[l][j]));
            }
        }
    }
    out
}

/// Nullspace of an integer matrix given row by row. Rows are reduced
/// fraction-free against an incremental echelon basis, so the big-integer
/// sizes stay bounded by row content removal.
pub fn integer_nullspace(rows: &[Vec<num_bigint::BigInt>], cols: usize) -> Vec<Vec<Rat>> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::Signed;

    fn primitive(mut r: Vec<BigInt>) -> Vec<BigInt> {
        let g = r.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_zero() && g != BigInt::from(1) {
            for x in r.iter_mut() {
                *x /= &g;
            }
        }
        r
    }

    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for row in rows {
        let mut r = primitive(row.clone());
        for (p, b) in &basis {
            if r[*p].is_zero() {
                continue;
            }
            let g = r[*p].gcd(&b[*p]);
            let fr = &b[*p] / &g;
            let fb = &r[*p] / &g;
            r = r.iter().zip(b).map(|(x, y)| x * &fr - y * &fb).collect();
            r = primitive(r);
        }
        if let Some(p) = r.iter().position(|x| !x.is_zero()) {
            if r[p].is_negative() {
                r = r.into_iter().map(|x| -x).collect();
            }
            basis.push((p, r));
        }
        if basis.len() == cols {
            break;
        }
    }
    let mat: Vec<Vec<Rat>> = basis
        .into_iter()
        .map(|(_, r)| r.into_iter().map(Rat::from_integer).collect())
        .collect();
    nullspace(&mat, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat_int;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect()
    }

    #[test]
    fn fraction_free_solve_matches_field_solve() {
        let p = |s: &str| crate::algebra::parse_poly(s).unwrap();
        let a = vec![
            vec![p("x"), p("y + 1"), p("0")],
            vec![p("x^2 - y"), p("0"), p("2*x*y")],
            vec![p("0"), p("x + y"), p("3")],
        ];
        let b = vec![vec![p("1"), p("x")], vec![p("y^2"), p("0")], vec![p("x*y - 1"), p("5")]];
        let lift = |m: &Vec<Vec<MPoly>>| -> Vec<Vec<RatFun>> {
            m.iter().map(|r| r.iter().map(|x| RatFun::from_poly(x.clone())).collect()).collect()
        };
        assert_eq!(solve_polynomial(&a, &b), solve(&lift(&a), &lift(&b)));
        let singular = vec![vec![p("x"), p("y")], vec![p("x^2"), p("x*y")]];
        assert!(solve_polynomial(&singular, &[vec![p("1")], vec![p("1")]]).is_none());
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 1]]);
        let ns = nullspace(&a, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &a {
                let s = row.iter().zip(v).fold(rat_int(0), |acc, (x, y)| acc + x * y);
                assert!(Zero::is_zero(&s));
            }
        }
    }

    #[test]
    fn solve_square() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let b = m(&[&[3], &[5]]);
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![vec![Rat::new(4.into(), 5.into())], vec![Rat::new(7.into(), 5.into())]]);
        assert!(solve(&m(&[&[1, 2], &[2, 4]]), &b).is_none());
    }
}
