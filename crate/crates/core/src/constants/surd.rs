//! Exact comparisons involving square roots.
//!
//! Three tools, from most to least specialised: `QuadSurd` is exact
//! arithmetic in Q(√d); `sign_two_roots` decides the sign of `e ± √x ± √y`
//! by repeated squaring; `Bounds` evaluates an arbitrary expression as a
//! fixed-point interval and refines until the sign is certain.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// `a + b√d` with rational `a`, `b` and a fixed radicand `d ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSurd {
    pub a: BigRational,
    pub b: BigRational,
    pub d: BigInt,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn sign(x: &BigRational) -> Ordering {
    x.cmp(&BigRational::zero())
}

impl QuadSurd {
    pub fn new(a: (i64, i64), b: (i64, i64), d: i64) -> Self {
        QuadSurd { a: rat(a.0, a.1), b: rat(b.0, b.1), d: d.into() }
    }

    pub fn int(a: i64, d: i64) -> Self {
        Self::new((a, 1), (0, 1), d)
    }

    pub fn sign(&self) -> Ordering {
        let (sa, sb) = (sign(&self.a), sign(&self.b));
        if sb == Ordering::Equal || self.d.is_zero() {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from(self.d.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        QuadSurd { a: &self.a * k, b: &self.b * k, d: self.d.clone() }
    }
}

impl Add for QuadSurd {
    type Output = QuadSurd;
    fn add(self, o: QuadSurd) -> QuadSurd {
        assert_eq!(self.d, o.d, "radicands differ");
        QuadSurd { a: self.a + o.a, b: self.b + o.b, d: self.d }
    }
}

impl Sub for QuadSurd {
    type Output = QuadSurd;
    fn sub(self, o: QuadSurd) -> QuadSurd {
        self + (-o)
    }
}

impl Neg for QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Mul for QuadSurd {
    type Output = QuadSurd;
    fn mul(self, o: QuadSurd) -> QuadSurd {
        assert_eq!(self.d, o.d, "radicands differ");
        let d = BigRational::from(self.d.clone());
        QuadSurd {
            a: &self.a * &o.a + &self.b * &o.b * d,
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d,
        }
    }
}

fn sgn<T: Signed>(x: &T) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn to_ord(s: i8) -> Ordering {
    s.cmp(&0)
}

// sign of f + g·√z with g ∈ {-1, 0, 1}
fn sign_one_root<T: Signed + Ord + Clone>(f: T, g: i8, z: T) -> i8 {
    let sf = sgn(&f);
    if g == 0 || z.is_zero() {
        return sf;
    }
    if sf == 0 || sf == g {
        return g;
    }
    match (f.clone() * f).cmp(&z) {
        Ordering::Greater => sf,
        Ordering::Less => g,
        Ordering::Equal => 0,
    }
}

fn sign_two_generic<T: Signed + Ord + Clone>(e: T, a: i8, x: T, b: i8, y: T) -> i8 {
    let (a, x) = if a == 0 || x.is_zero() { (0, T::zero()) } else { (a, x) };
    let (b, y) = if b == 0 || y.is_zero() { (0, T::zero()) } else { (b, y) };
    // t = a√x + b√y
    let st = match (a, b) {
        (0, _) => b,
        (_, 0) => a,
        _ if a == b => a,
        _ => a * sgn(&(x.clone() - y.clone())),
    };
    let se = sgn(&e);
    if st == 0 || se == 0 || st == se {
        return if se == 0 { st } else { se };
    }
    // |e| vs |t|: e² - (x + y) - 2ab√(xy)
    let two = T::one() + T::one();
    let f = e.clone() * e - x.clone() - y.clone();
    let z = two.clone() * two * x * y;
    match sign_one_root(f, -(a * b), z) {
        1 => se,
        -1 => st,
        _ => 0,
    }
}

/// Exact sign of `e + a·√x + b·√y` for integers `x, y ≥ 0`, `a, b ∈ {-1, 0, 1}`.
/// Uses `i128` when the inputs are small enough, big integers otherwise.
pub fn sign_two_roots(e: i128, a: i8, x: i128, b: i8, y: i128) -> Ordering {
    assert!(x >= 0 && y >= 0, "negative radicand");
    assert!(a.abs() <= 1 && b.abs() <= 1, "root coefficients must be -1, 0 or 1");
    const SMALL: i128 = 1 << 28;
    let s = if e.abs() < SMALL && x < SMALL && y < SMALL {
        sign_two_generic(e, a, x, b, y)
    } else {
        sign_two_generic(BigInt::from(e), a, BigInt::from(x), b, BigInt::from(y))
    };
    to_ord(s)
}

/// Interval `[lo, hi] / 2^prec` known to contain a real number.
#[derive(Clone, Debug)]
pub struct Bounds {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

impl Bounds {
    pub fn int(v: i64, prec: u32) -> Self {
        let x = BigInt::from(v) << prec;
        Bounds { lo: x.clone(), hi: x, prec }
    }

    pub fn ratio(n: i64, d: i64, prec: u32) -> Self {
        assert!(d > 0);
        let x = BigInt::from(n) << prec;
        let d = BigInt::from(d);
        let lo = num_integer::Integer::div_floor(&x, &d);
        let hi = num_integer::Integer::div_ceil(&x, &d);
        Bounds { lo, hi, prec }
    }

    /// Square root; the interval is clamped at zero from below.
    pub fn sqrt(&self) -> Self {
        let lo = if self.lo.is_positive() { (&self.lo << self.prec).sqrt() } else { BigInt::zero() };
        let h = &self.hi << self.prec;
        let mut hi = if h.is_positive() { h.sqrt() } else { BigInt::zero() };
        if &hi * &hi < h {
            hi += 1;
        }
        Bounds { lo, hi, prec: self.prec }
    }

    pub fn lower(&self) -> f64 {
        self.lo.to_string().parse::<f64>().unwrap() / 2f64.powi(self.prec as i32)
    }

    /// Sign if the interval excludes zero or is exactly zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

impl Add for Bounds {
    type Output = Bounds;
    fn add(self, o: Bounds) -> Bounds {
        debug_assert_eq!(self.prec, o.prec);
        Bounds { lo: self.lo + o.lo, hi: self.hi + o.hi, prec: self.prec }
    }
}

impl Neg for Bounds {
    type Output = Bounds;
    fn neg(self) -> Bounds {
        Bounds { lo: -self.hi, hi: -self.lo, prec: self.prec }
    }
}

impl Sub for Bounds {
    type Output = Bounds;
    fn sub(self, o: Bounds) -> Bounds {
        self + (-o)
    }
}

impl Mul for Bounds {
    type Output = Bounds;
    fn mul(self, o: Bounds) -> Bounds {
        let p = self.prec;
        let prods = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = prods.iter().min().unwrap() >> p;
        let hi_raw = prods.iter().max().unwrap().clone();
        let mut hi = &hi_raw >> p;
        if (&hi << p) < hi_raw {
            hi += 1;
        }
        Bounds { lo, hi, prec: p }
    }
}

/// Sign of the expression, refining precision from 64 up to 4096 bits.
/// `None` means the value is too close to zero to separate (typically an
/// identity that holds with equality).
pub fn decide_sign(expr: impl Fn(u32) -> Bounds) -> Option<Ordering> {
    let mut prec = 64;
    while prec <= 4096 {
        if let Some(s) = expr(prec).sign() {
            return Some(s);
        }
        prec *= 2;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quad_surd_squares() {
        let s = QuadSurd::new((2, 1), (1, 1), 10);
        assert_eq!(s.square(), QuadSurd::new((14, 1), (4, 1), 10));
        let t = QuadSurd::new((-7, 1), (2, 1), 12);
        assert_eq!(t.sign(), Ordering::Less);
        assert_eq!(QuadSurd::new((-4, 1), (1, 1), 16).sign(), Ordering::Equal);
    }

    #[test]
    fn two_roots_against_floats() {
        for e in -30..30i128 {
            for x in 0..40i128 {
                for y in [0i128, 1, 2, 7, 9, 30] {
                    for a in -1..=1i8 {
                        for b in -1..=1i8 {
                            let v = e as f64 + a as f64 * (x as f64).sqrt() + b as f64 * (y as f64).sqrt();
                            let s = sign_two_roots(e, a, x, b, y);
                            if v.abs() > 1e-9 {
                                assert_eq!(s, v.partial_cmp(&0.0).unwrap(), "{e} {a}√{x} {b}√{y}");
                            } else {
                                assert_eq!(s, Ordering::Equal, "{e} {a}√{x} {b}√{y}");
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(sign_two_roots(1 << 40, -1, 1 << 80, 0, 0), Ordering::Equal);
    }

    #[test]
    fn interval_refinement() {
        // √2 · √8 - 4 = 0 cannot be separated; √10 - 3.16 > 0 can.
        let zero = |p| Bounds::int(2, p).sqrt() * Bounds::int(8, p).sqrt() - Bounds::int(4, p);
        assert_eq!(decide_sign(zero), None);
        let pos = |p| Bounds::int(10, p).sqrt() - Bounds::ratio(316, 100, p);
        assert_eq!(decide_sign(pos), Some(Ordering::Greater));
        assert!((Bounds::int(2, 64).sqrt().lower() - 2f64.sqrt()).abs() < 1e-15);
    }
}
