//! Numerical roots of univariate polynomials (Aberth iteration).

use num_complex::Complex64;

use super::mpoly::MPoly;
use super::rat::rat_to_f64;

/// Coefficients (constant term first) of a univariate polynomial.
pub fn dense_coefficients(p: &MPoly, var: &str) -> Vec<f64> {
    p.coeffs_in(var)
        .iter()
        .map(|c| c.constant_value().map_or(f64::NAN, |r| rat_to_f64(&r)))
        .collect()
}

fn eval_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All complex roots with multiplicity. Returns `None` if the iteration does
/// not converge.
pub fn poly_roots(coeffs: &[f64]) -> Option<Vec<Complex64>> {
    poly_roots_complex(&coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>())
}

/// Complex-coefficient version of [`poly_roots`].
pub fn poly_roots_complex(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|z| z.norm() == 0.0) {
        c.pop();
    }
    let deg = c.len().checked_sub(1)?;
    if deg == 0 {
        return Some(Vec::new());
    }
    let lead = c[deg];
    for z in c.iter_mut() {
        *z /= lead;
    }
    // Cauchy bound for the initial circle
    let radius = 1.0 + c[..deg].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64) / (deg as f64) + 0.4;
            Complex64::from_polar(radius, ang)
        })
        .collect();
    for _ in 0..2000 {
        let mut max_step: f64 = 0.0;
        for i in 0..deg {
            let (p, dp) = eval_with_derivative(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            return Some(z);
        }
    }
    // accept if residuals are small relative to coefficient scale
    let scale: f64 = c.iter().map(|x| x.norm()).sum();
    let ok = z.iter().all(|&r| {
        let (p, _) = eval_with_derivative(&c, r);
        p.norm() <= 1e-8 * scale * (1.0 + r.norm()).powi(deg as i32)
    });
    ok.then_some(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots() {
        // (x-1)(x+2)(x-3) = x^3 - 2x^2 - 5x + 6
        let mut r = poly_roots(&[6.0, -5.0, -2.0, 1.0]).unwrap();
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (z, e) in r.iter().zip([-2.0, 1.0, 3.0]) {
            assert!((z - Complex64::new(e, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn complex_pair() {
        let r = poly_roots(&[1.0, 0.0, 1.0]).unwrap();
        assert!(r.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12 && z.re.abs() < 1e-12));
    }
}
