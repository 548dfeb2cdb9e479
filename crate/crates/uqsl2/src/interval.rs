//! Rational interval arithmetic, just enough for certified complex
//! enclosures of cyclotomic numbers: pi by Machin's formula, sin/cos by
//! Taylor with an explicit tail bound, square roots by integer sqrt.
//!
//! Endpoints are exact rationals, so every enclosure here is rigorous.
//! This module is only used for numeric cross-checks (the exact path of
//! the crate never touches it).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn pow2(bits: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << bits)
}

/// Closed interval [lo, hi] with rational endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Iv {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Iv {
    pub fn point(x: BigRational) -> Self {
        Iv { lo: x.clone(), hi: x }
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "inverted interval");
        Iv { lo, hi }
    }

    pub fn zero() -> Self {
        Iv::point(BigRational::zero())
    }

    pub fn add(&self, o: &Iv) -> Iv {
        Iv { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Iv) -> Iv {
        Iv { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Iv {
        Iv { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn mul(&self, o: &Iv) -> Iv {
        let cands = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        Iv { lo, hi }
    }

    pub fn scale(&self, c: &BigRational) -> Iv {
        if c.is_negative() {
            Iv { lo: &self.hi * c, hi: &self.lo * c }
        } else {
            Iv { lo: &self.lo * c, hi: &self.hi * c }
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / big(2)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    /// Largest absolute value attained on the interval.
    pub fn abs_hi(&self) -> BigRational {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b { a } else { b }
    }

    /// Smallest absolute value attained on the interval.
    pub fn abs_lo(&self) -> BigRational {
        if self.lo.is_negative() && !self.hi.is_negative() {
            BigRational::zero()
        } else {
            let a = self.lo.abs();
            let b = self.hi.abs();
            if a < b { a } else { b }
        }
    }

    /// Round endpoints outward onto the grid with denominator 2^bits,
    /// keeping the enclosure valid while capping coefficient size.
    pub fn round_out(&self, bits: u32) -> Iv {
        let scale = pow2(bits);
        let lo = BigRational::from_integer((&self.lo * &scale).floor().to_integer()) / &scale;
        let hi = BigRational::from_integer((&self.hi * &scale).ceil().to_integer()) / &scale;
        Iv { lo, hi }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64().unwrap_or(f64::NAN)
    }
}

/// atan(1/x) enclosed by consecutive partial sums of the alternating
/// Gregory series.
fn atan_inv(x: i64, bits: u32) -> Iv {
    let eps = pow2(bits + 4).recip();
    let xr = big(x);
    let x2 = &xr * &xr;
    let mut power = xr.recip();
    let mut sum = BigRational::zero();
    let mut k: i64 = 0;
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    loop {
        let term = &power / big(2 * k + 1);
        if k % 2 == 0 {
            sum += &term;
            hi = sum.clone();
        } else {
            sum -= &term;
            lo = sum.clone();
        }
        if term < eps && k > 0 {
            if lo > hi {
                std::mem::swap(&mut lo, &mut hi);
            }
            return Iv::new(lo, hi);
        }
        power /= &x2;
        k += 1;
    }
}

/// Enclosure of pi: 16 atan(1/5) - 4 atan(1/239).
pub fn pi(bits: u32) -> Iv {
    let a = atan_inv(5, bits + 6).scale(&big(16));
    let b = atan_inv(239, bits + 6).scale(&big(4));
    a.sub(&b).round_out(bits + 2)
}

/// cos at an exact rational point, |t| <= 8.
fn cos_point(t: &BigRational, bits: u32) -> Iv {
    assert!(t.abs() <= big(8));
    let eps = pow2(bits + 4).recip();
    let t2 = t * t;
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    let mut m: i64 = 0;
    loop {
        m += 1;
        term = &term * &t2 / big((2 * m - 1) * (2 * m));
        if m % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        // once (2m+1)(2m+2) >= 2 t^2 the terms at least halve, so the
        // tail is bounded by twice the next term
        if m >= 5 && term < eps {
            let tail = &term + &term;
            return Iv::new(&sum - &tail, &sum + &tail);
        }
    }
}

fn sin_point(t: &BigRational, bits: u32) -> Iv {
    assert!(t.abs() <= big(8));
    let eps = pow2(bits + 4).recip();
    let t2 = t * t;
    let mut term = t.clone();
    let mut sum = t.clone();
    let mut m: i64 = 0;
    loop {
        m += 1;
        term = &term * &t2 / big((2 * m) * (2 * m + 1));
        if m % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        if m >= 5 && term < eps {
            let tail = term.abs() + term.abs();
            return Iv::new(&sum - &tail, &sum + &tail);
        }
    }
}

/// cos over an interval: evaluate at the (rounded) midpoint and widen by
/// the radius, since |cos'| <= 1.
pub fn cos_iv(x: &Iv, bits: u32) -> Iv {
    let m = x.mid();
    let rad = x.width() / big(2);
    let base = cos_point(&m, bits);
    Iv::new(base.lo - &rad, base.hi + rad).round_out(bits + 2)
}

pub fn sin_iv(x: &Iv, bits: u32) -> Iv {
    let m = x.mid();
    let rad = x.width() / big(2);
    let base = sin_point(&m, bits);
    Iv::new(base.lo - &rad, base.hi + rad).round_out(bits + 2)
}

/// Certified bracket of sqrt(x) for x >= 0.
pub fn sqrt_rational(x: &BigRational, bits: u32) -> Iv {
    assert!(!x.is_negative());
    let scale = BigInt::one() << (2 * bits);
    let n = (x * BigRational::from_integer(scale)).floor().to_integer();
    let k = n.sqrt();
    let denom = pow2(bits);
    Iv::new(
        BigRational::from_integer(k.clone()) / &denom,
        BigRational::from_integer(k + BigInt::from(2)) / &denom,
    )
}

pub fn sqrt_iv(x: &Iv, bits: u32) -> Iv {
    let lo = if x.lo.is_negative() { BigRational::zero() } else { x.lo.clone() };
    Iv::new(
        sqrt_rational(&lo, bits).lo,
        sqrt_rational(&x.hi, bits).hi,
    )
}

/// Rectangular complex interval.
#[derive(Clone, Debug)]
pub struct CIv {
    pub re: Iv,
    pub im: Iv,
}

impl CIv {
    pub fn zero() -> Self {
        CIv { re: Iv::zero(), im: Iv::zero() }
    }

    pub fn one() -> Self {
        CIv { re: Iv::point(BigRational::one()), im: Iv::zero() }
    }

    pub fn add(&self, o: &CIv) -> CIv {
        CIv { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &CIv) -> CIv {
        CIv { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &CIv) -> CIv {
        CIv {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, c: &BigRational) -> CIv {
        CIv { re: self.re.scale(c), im: self.im.scale(c) }
    }

    pub fn norm_sq(&self) -> Iv {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    /// Enclosure of |z|.
    pub fn abs(&self, bits: u32) -> Iv {
        sqrt_iv(&self.norm_sq(), bits)
    }

    pub fn round_out(&self, bits: u32) -> CIv {
        CIv { re: self.re.round_out(bits), im: self.im.round_out(bits) }
    }

    /// Upper bound on the distance to another complex interval, i.e. on
    /// sup |z - w| over the two boxes.
    pub fn dist_hi(&self, o: &CIv) -> BigRational {
        let dr = self.re.sub(&o.re).abs_hi();
        let di = self.im.sub(&o.im).abs_hi();
        // |z| <= |re| + |im|
        dr + di
    }
}
