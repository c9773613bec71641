//! Integrability of a second-order system, computed over two fixed
//! denominators so that no polynomial gcd is ever taken.

use crate::algebra::{MPoly, RatFun};

use super::{ConformalError, SecondOrderSystem};

/// `num / (D^a E^b)` for the fixed `D` (common denominator of the
/// coefficients) and `E = D^2 (1 - LM)`.
#[derive(Clone)]
struct Frac {
    num: MPoly,
    a: u32,
    b: u32,
}

struct Ring<'a> {
    d: &'a MPoly,
    e: &'a MPoly,
    x: &'a str,
    y: &'a str,
}

impl Ring<'_> {
    fn poly(&self, p: MPoly) -> Frac {
        Frac { num: p, a: 0, b: 0 }
    }

    fn zero(&self) -> Frac {
        self.poly(MPoly::zero())
    }

    fn one(&self) -> Frac {
        self.poly(MPoly::one())
    }

    fn lift(&self, f: &Frac, a: u32, b: u32) -> MPoly {
        &(&f.num * &self.d.pow(a - f.a)) * &self.e.pow(b - f.b)
    }

    fn add(&self, f: &Frac, g: &Frac) -> Frac {
        if f.num.is_zero() {
            return g.clone();
        }
        if g.num.is_zero() {
            return f.clone();
        }
        let (a, b) = (f.a.max(g.a), f.b.max(g.b));
        Frac { num: &self.lift(f, a, b) + &self.lift(g, a, b), a, b }
    }

    fn sub(&self, f: &Frac, g: &Frac) -> Frac {
        self.add(f, &Frac { num: -&g.num, ..g.clone() })
    }

    fn mul(&self, f: &Frac, g: &Frac) -> Frac {
        if f.num.is_zero() || g.num.is_zero() {
            return self.zero();
        }
        Frac { num: &f.num * &g.num, a: f.a + g.a, b: f.b + g.b }
    }

    fn diff(&self, f: &Frac, var: &str) -> Frac {
        if f.num.is_zero() {
            return self.zero();
        }
        let dp = if f.a > 0 { self.d.clone() } else { MPoly::one() };
        let ep = if f.b > 0 { self.e.clone() } else { MPoly::one() };
        let mut num = &(&f.num.diff(var) * &dp) * &ep;
        if f.a > 0 {
            let t = &(&self.d.diff(var) * &ep) * &MPoly::from_int(f.a as i64);
            num = &num - &(&f.num * &t);
        }
        if f.b > 0 {
            let t = &(&self.e.diff(var) * &dp) * &MPoly::from_int(f.b as i64);
            num = &num - &(&f.num * &t);
        }
        Frac { num, a: f.a + (f.a > 0) as u32, b: f.b + (f.b > 0) as u32 }
    }

    fn dx(&self, f: &Frac) -> Frac {
        self.diff(f, self.x)
    }

    fn dy(&self, f: &Frac) -> Frac {
        self.diff(f, self.y)
    }

    fn combo(&self, terms: &[(&Frac, &[Frac; 4])]) -> [Frac; 4] {
        std::array::from_fn(|i| terms.iter().fold(self.zero(), |acc, (k, v)| self.add(&acc, &self.mul(k, &v[i]))))
    }
}

/// Numerators of the 16 entries of `d_Y Ox - d_X Oy + Ox Oy - Oy Ox` in the
/// frame `(z, z_X, z_Y, z_XY)`; each entry is this numerator over a power of
/// the common denominator and of `1 - LM`.
pub fn integrability_numerators(sys: &SecondOrderSystem) -> Result<Vec<MPoly>, ConformalError> {
    let coeffs = sys.coefficients();
    let d = coeffs.iter().fold(MPoly::one(), |acc, c| {
        let g = acc.gcd(c.den());
        &acc * &c.den().div_exact(&g).expect("gcd divides")
    });
    let over_d = |c: &RatFun| -> MPoly { c.num() * &d.div_exact(c.den()).expect("common denominator") };
    let nl = over_d(&sys.l);
    let nm = over_d(&sys.m);
    // D^2 (1 - LM)
    let e = &d.pow(2) - &(&nl * &nm);
    if e.is_zero() {
        return Err(ConformalError::DegenerateStructure);
    }
    let ring = Ring { d: &d, e: &e, x: &sys.vars[0], y: &sys.vars[1] };
    let f = |c: &RatFun| Frac { num: over_d(c), a: 1, b: 0 };
    let [l, m, a, b, c, dd, p, q] = coeffs.map(f);

    let basis = |i: usize| -> [Frac; 4] { std::array::from_fn(|j| if i == j { ring.one() } else { ring.zero() }) };
    let (e0, e1, e2, e3) = (basis(0), basis(1), basis(2), basis(3));
    let xx = [p.clone(), a.clone(), b.clone(), l.clone()];
    let yy = [q.clone(), c.clone(), dd.clone(), m.clone()];

    // z_XXY = L w + av, z_XYY = M u + bv
    let (ly, ay, by, py) = (ring.dy(&l), ring.dy(&a), ring.dy(&b), ring.dy(&p));
    let av = ring.combo(&[(&ly, &e3), (&ay, &e1), (&a, &e3), (&by, &e2), (&b, &yy), (&py, &e0), (&p, &e2)]);
    let (mx, cx, dx, qx) = (ring.dx(&m), ring.dx(&c), ring.dx(&dd), ring.dx(&q));
    let bv = ring.combo(&[(&mx, &e3), (&cx, &e1), (&c, &xx), (&dx, &e2), (&dd, &e3), (&qx, &e0), (&q, &e1)]);
    // u (1 - LM) = av + L bv, and 1/(1 - LM) = D^2 / E
    let inv = Frac { num: d.pow(2), a: 0, b: 1 };
    let one = ring.one();
    let u_raw = ring.combo(&[(&one, &av), (&l, &bv)]);
    let u: [Frac; 4] = std::array::from_fn(|i| ring.mul(&inv, &u_raw[i]));
    let w = ring.combo(&[(&m, &u), (&one, &bv)]);

    let ox = [e1.clone(), xx, e3.clone(), u];
    let oy = [e2, e3, yy, w];
    let mut out = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            let mut r = ring.sub(&ring.dy(&ox[i][j]), &ring.dx(&oy[i][j]));
            for k in 0..4 {
                r = ring.add(&r, &ring.sub(&ring.mul(&ox[i][k], &oy[k][j]), &ring.mul(&oy[i][k], &ox[k][j])));
            }
            out.push(r.num);
        }
    }
    Ok(out)
}

pub fn is_integrable(sys: &SecondOrderSystem) -> Result<bool, ConformalError> {
    Ok(integrability_numerators(sys)?.iter().all(MPoly::is_zero))
}
