//! Exact arithmetic in the cyclotomic field Q(zeta_{4p}).
//!
//! The order parameter p >= 2 fixes n = 4p.  The field contains exactly
//! the scalars needed downstream: q = zeta^2 (a primitive 2p-th root of
//! unity), the fixed square root q^{1/2} = zeta, and i = zeta^p.
//! Elements are coefficient vectors of length phi(n) against the power
//! basis {zeta^k}, reduced modulo the n-th cyclotomic polynomial; the
//! representation is canonical, so equality is coefficient equality.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::interval::{self, CIv, Iv};

pub type Rat = BigRational;

pub fn rat_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn euler_phi(n: usize) -> usize {
    let mut m = n;
    let mut result = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Coefficients (ascending) of the n-th cyclotomic polynomial.
fn cyclotomic_poly(n: usize) -> Vec<BigInt> {
    fn divide(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
        // exact division of integer polynomials, both with unit leading coeff
        let mut rem: Vec<BigInt> = num.to_vec();
        let dn = den.len() - 1;
        let mut quot = vec![BigInt::zero(); rem.len() - dn];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dn].clone();
            if !c.is_zero() {
                for (i, d) in den.iter().enumerate() {
                    rem[k + i] -= &c * d;
                }
            }
            quot[k] = c;
        }
        assert!(rem.iter().all(|c| c.is_zero()), "inexact cyclotomic division");
        quot
    }
    fn build(n: usize, memo: &mut Vec<Option<Vec<BigInt>>>) -> Vec<BigInt> {
        if let Some(p) = &memo[n] {
            return p.clone();
        }
        // x^n - 1 divided by all lower cyclotomic factors
        let mut f = vec![BigInt::zero(); n + 1];
        f[0] = -BigInt::one();
        f[n] = BigInt::one();
        for d in 1..n {
            if n % d == 0 {
                let phi_d = build(d, memo);
                f = divide(&f, &phi_d);
            }
        }
        memo[n] = Some(f.clone());
        f
    }
    let mut memo = vec![None; n + 1];
    build(n, &mut memo)
}

struct FieldInner {
    p: usize,
    n: usize,
    phi: usize,
    /// zeta^k reduced, for k in 0..n
    zeta_pow_table: Vec<Vec<Rat>>,
    /// sparse view of zeta_pow_table: nonzero (index, coeff) pairs,
    /// used for the fast multiply-by-zeta^k path; the entries are
    /// integers because the cyclotomic polynomial is monic over Z
    zeta_rows: Vec<Vec<(usize, BigInt)>>,
    /// zeta^k reduced for k in 0..(2*phi - 1), used to fold products
    red: Vec<Vec<BigInt>>,
    /// monic cyclotomic polynomial, ascending, length phi + 1
    cyclo: Vec<Rat>,
}

/// Shared handle on the field data; cheap to clone.
#[derive(Clone)]
pub struct Ctx(Arc<FieldInner>);

impl fmt::Debug for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ctx(p={})", self.0.p)
    }
}

impl PartialEq for Ctx {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p
    }
}

impl Ctx {
    pub fn new(p: usize) -> Result<Ctx, String> {
        if p < 2 {
            return Err(format!("order parameter p must be >= 2, got {p}"));
        }
        let n = 4 * p;
        let phi = euler_phi(n);
        let cyclo_int = cyclotomic_poly(n);
        assert_eq!(cyclo_int.len(), phi + 1);
        let cyclo: Vec<Rat> = cyclo_int.iter().cloned().map(Rat::from_integer).collect();

        // zeta^k for k up to 2*phi - 2 via the recursion
        // zeta^phi = -(c_0 + c_1 zeta + ... + c_{phi-1} zeta^{phi-1});
        // the polynomial is monic over Z, so the tables stay integral
        let mut red: Vec<Vec<BigInt>> = Vec::with_capacity(2 * phi - 1);
        for k in 0..phi {
            let mut e = vec![BigInt::zero(); phi];
            e[k] = BigInt::one();
            red.push(e);
        }
        for k in phi..(2 * phi - 1) {
            let prev = red[k - 1].clone();
            let mut next = vec![BigInt::zero(); phi];
            // multiply by zeta: shift, then reduce the overflow term
            let top = prev[phi - 1].clone();
            for j in 1..phi {
                next[j] = prev[j - 1].clone();
            }
            if !top.is_zero() {
                for j in 0..phi {
                    next[j] -= &top * &cyclo_int[j];
                }
            }
            red.push(next);
        }

        // zeta^k for k in 0..n by the same shift
        let mut zeta_int: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        let mut cur = vec![BigInt::zero(); phi];
        cur[0] = BigInt::one();
        for _ in 0..n {
            zeta_int.push(cur.clone());
            let top = cur[phi - 1].clone();
            let mut next = vec![BigInt::zero(); phi];
            for j in 1..phi {
                next[j] = cur[j - 1].clone();
            }
            if !top.is_zero() {
                for j in 0..phi {
                    next[j] -= &top * &cyclo_int[j];
                }
            }
            cur = next;
        }
        // after n shifts we must be back at 1
        let mut one = vec![BigInt::zero(); phi];
        one[0] = BigInt::one();
        assert_eq!(cur, one, "zeta^n != 1, reduction table broken");

        let zeta_pow_table: Vec<Vec<Rat>> = zeta_int
            .iter()
            .map(|row| row.iter().cloned().map(Rat::from_integer).collect())
            .collect();
        let zeta_rows = zeta_int
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, r)| !r.is_zero())
                    .map(|(j, r)| (j, r.clone()))
                    .collect()
            })
            .collect();

        let ctx = Ctx(Arc::new(FieldInner {
            p,
            n,
            phi,
            zeta_pow_table,
            zeta_rows,
            red,
            cyclo,
        }));

        // q must be a primitive 2p-th root: q^{2p} = 1 and q^d != 1 for
        // proper divisors d of 2p
        let q = ctx.q();
        assert!(q.pow(2 * p as i64) == ctx.one());
        for d in 1..(2 * p) {
            if (2 * p) % d == 0 {
                assert!(q.pow(d as i64) != ctx.one(), "q not primitive");
            }
        }
        Ok(ctx)
    }

    pub fn p(&self) -> usize {
        self.0.p
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn phi(&self) -> usize {
        self.0.phi
    }

    pub fn zero(&self) -> Cyc {
        Cyc {
            ctx: self.clone(),
            c: vec![Rat::zero(); self.0.phi],
        }
    }

    pub fn one(&self) -> Cyc {
        self.from_rat(Rat::one())
    }

    pub fn from_rat(&self, r: Rat) -> Cyc {
        let mut c = vec![Rat::zero(); self.0.phi];
        c[0] = r;
        Cyc { ctx: self.clone(), c }
    }

    pub fn from_i64(&self, n: i64) -> Cyc {
        self.from_rat(rat_i64(n))
    }

    pub fn from_coeffs(&self, c: Vec<Rat>) -> Cyc {
        assert_eq!(c.len(), self.0.phi);
        Cyc { ctx: self.clone(), c }
    }

    /// zeta_{4p}^k for any integer k.
    pub fn zeta_pow(&self, k: i64) -> Cyc {
        let n = self.0.n as i64;
        let k = k.rem_euclid(n) as usize;
        Cyc {
            ctx: self.clone(),
            c: self.0.zeta_pow_table[k].clone(),
        }
    }

    /// q^{k/2} = zeta^k.
    pub fn qhalf_pow(&self, k: i64) -> Cyc {
        self.zeta_pow(k)
    }

    /// c * zeta^k without a full convolution; zeta^{i+k} rows are
    /// sparse for n = 4p, so this is much cheaper than mul.  Works on
    /// cleared denominators so the inner loop is pure integer.
    pub fn mul_zeta(&self, c: &Cyc, k: i64) -> Cyc {
        let n = self.0.n;
        let k = k.rem_euclid(n as i64) as usize;
        if k == 0 {
            return c.clone();
        }
        let (num, den) = int_form(&c.c);
        let mut out = vec![BigInt::zero(); self.0.phi];
        for (i, a) in num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, r) in &self.0.zeta_rows[(i + k) % n] {
                out[*j] += a * r;
            }
        }
        Cyc {
            ctx: self.clone(),
            c: out.into_iter().map(|x| Rat::new(x, den.clone())).collect(),
        }
    }

    pub fn q(&self) -> Cyc {
        self.zeta_pow(2)
    }

    pub fn q_pow(&self, k: i64) -> Cyc {
        self.zeta_pow(2 * k)
    }

    pub fn i_unit(&self) -> Cyc {
        self.zeta_pow(self.0.p as i64)
    }

    /// qhat = q - q^{-1}.
    pub fn qhat(&self) -> Cyc {
        &self.q_pow(1) - &self.q_pow(-1)
    }

    /// q-integer [k] = (q^k - q^{-k})/(q - q^{-1}), as the Laurent sum
    /// q^{k-1} + q^{k-3} + ... + q^{1-k}.
    pub fn qint(&self, k: i64) -> Cyc {
        if k == 0 {
            return self.zero();
        }
        if k < 0 {
            return -&self.qint(-k);
        }
        let mut acc = self.zero();
        let mut e = k - 1;
        for _ in 0..k {
            acc += &self.q_pow(e);
            e -= 2;
        }
        acc
    }

    /// [k]! for 0 <= k <= p-1 ([p] = 0 makes larger factorials useless
    /// wherever this is consumed, so they are rejected).
    pub fn qfact(&self, k: i64) -> Result<Cyc, String> {
        if k < 0 || k as usize >= self.0.p {
            return Err(format!(
                "q-factorial defined here only for 0 <= k <= p-1, got {k}"
            ));
        }
        let mut acc = self.one();
        for m in 1..=k {
            acc = &acc * &self.qint(m);
        }
        Ok(acc)
    }

    /// q-binomial via factorials; requires 0 <= k <= m <= p-1.
    pub fn qbinom(&self, m: i64, k: i64) -> Result<Cyc, String> {
        if k < 0 || k > m {
            return Ok(self.zero());
        }
        let num = self.qfact(m)?;
        let den = (&self.qfact(k)? * &self.qfact(m - k)?)
            .inv()
            .map_err(|e| format!("degenerate q-binomial denominator: {e}"))?;
        Ok(&num * &den)
    }
}

/// Element of Q(zeta_{4p}) in canonical reduced form.
#[derive(Clone)]
pub struct Cyc {
    ctx: Ctx,
    c: Vec<Rat>,
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}

impl Eq for Cyc {}

impl Cyc {
    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero())
    }

    /// The rational part if the element is rational, else None.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn scale(&self, r: &Rat) -> Cyc {
        Cyc {
            ctx: self.ctx.clone(),
            c: self.c.iter().map(|x| x * r).collect(),
        }
    }

    /// Product via integer convolution on cleared denominators; per-op
    /// rational reduction is the bottleneck otherwise.
    pub fn mul(&self, other: &Cyc) -> Cyc {
        let phi = self.ctx.0.phi;
        let (na, da) = int_form(&self.c);
        let (nb, db) = int_form(&other.c);
        let mut conv = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in na.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in nb.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                conv[i + j] += a * b;
            }
        }
        let mut out: Vec<BigInt> = conv[..phi].to_vec();
        for k in phi..(2 * phi - 1) {
            if conv[k].is_zero() {
                continue;
            }
            let row = &self.ctx.0.red[k];
            for j in 0..phi {
                if !row[j].is_zero() {
                    out[j] += &conv[k] * &row[j];
                }
            }
        }
        let den = da * db;
        Cyc {
            ctx: self.ctx.clone(),
            c: out.into_iter().map(|x| Rat::new(x, den.clone())).collect(),
        }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm in
    /// Q[x] against the cyclotomic polynomial.
    pub fn inv(&self) -> Result<Cyc, String> {
        if self.is_zero() {
            return Err("division by zero in Q(zeta)".to_string());
        }
        // invariants: a = s * self mod cyclo (up to the b-side we drop)
        let mut a: Vec<Rat> = self.ctx.0.cyclo.clone();
        let mut b: Vec<Rat> = trim(self.c.clone());
        let mut s_a: Vec<Rat> = vec![];
        let mut s_b: Vec<Rat> = vec![Rat::one()];
        while !b.is_empty() {
            let (q, r) = poly_divmod(&a, &b);
            let s_r = poly_sub(&s_a, &poly_mul(&q, &s_b));
            a = b;
            s_a = s_b;
            b = r;
            s_b = s_r;
        }
        // a is now the gcd; must be a nonzero constant
        if a.len() != 1 {
            return Err("element not invertible (gcd not constant)".to_string());
        }
        let lead = a[0].clone();
        let mut c = vec![Rat::zero(); self.ctx.0.phi];
        for (k, v) in s_a.iter().enumerate() {
            c[k] = v / &lead;
        }
        let out = Cyc { ctx: self.ctx.clone(), c };
        debug_assert!(out.mul(self).is_one());
        Ok(out)
    }

    pub fn pow(&self, k: i64) -> Cyc {
        if k < 0 {
            return self.inv().expect("pow of zero to negative").pow(-k);
        }
        let mut base = self.clone();
        let mut acc = self.ctx.one();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Interval enclosure of the image under zeta -> exp(2 pi i / n).
    pub fn embed(&self, bits: u32) -> CIv {
        let n = self.ctx.0.n as i64;
        let pi = interval::pi(bits + 8);
        let mut acc = CIv::zero();
        for (k, coeff) in self.c.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let theta = pi.scale(&(rat_i64(2 * k as i64) / rat_i64(n)));
            let z = CIv {
                re: interval::cos_iv(&theta, bits + 8),
                im: interval::sin_iv(&theta, bits + 8),
            };
            acc = acc.add(&z.scale(coeff));
        }
        acc.round_out(bits + 4)
    }

    /// Enclosure of |x| at the given precision.
    pub fn embed_abs(&self, bits: u32) -> Iv {
        self.embed(bits).abs(bits)
    }
}

/// Clear denominators: coefficients as integers over a common positive
/// denominator (the lcm of the individual ones).
fn int_form(c: &[Rat]) -> (Vec<BigInt>, BigInt) {
    use num_integer::Integer;
    let mut den = BigInt::one();
    for x in c {
        if !x.is_zero() {
            den = den.lcm(x.denom());
        }
    }
    let num = c
        .iter()
        .map(|x| {
            if x.is_zero() {
                BigInt::zero()
            } else {
                x.numer() * (&den / x.denom())
            }
        })
        .collect();
    (num, den)
}

fn trim(mut v: Vec<Rat>) -> Vec<Rat> {
    while let Some(last) = v.last() {
        if last.is_zero() {
            v.pop();
        } else {
            break;
        }
    }
    v
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    assert!(!b.is_empty());
    let mut rem = a.to_vec();
    if a.len() < b.len() {
        return (vec![], trim(rem));
    }
    let mut quot = vec![Rat::zero(); a.len() - b.len() + 1];
    let lead = b.last().unwrap();
    for k in (0..quot.len()).rev() {
        let c = &rem[k + b.len() - 1] / lead;
        if !c.is_zero() {
            for (i, y) in b.iter().enumerate() {
                rem[k + i] -= &c * y;
            }
        }
        quot[k] = c;
    }
    (trim(quot), trim(rem))
}

// operator sugar on references

impl std::ops::Add for &Cyc {
    type Output = Cyc;
    fn add(self, rhs: &Cyc) -> Cyc {
        let mut c = self.c.clone();
        for (i, x) in rhs.c.iter().enumerate() {
            c[i] += x;
        }
        Cyc { ctx: self.ctx.clone(), c }
    }
}

impl std::ops::Sub for &Cyc {
    type Output = Cyc;
    fn sub(self, rhs: &Cyc) -> Cyc {
        let mut c = self.c.clone();
        for (i, x) in rhs.c.iter().enumerate() {
            c[i] -= x;
        }
        Cyc { ctx: self.ctx.clone(), c }
    }
}

impl std::ops::Mul for &Cyc {
    type Output = Cyc;
    fn mul(self, rhs: &Cyc) -> Cyc {
        self.mul(rhs)
    }
}

impl std::ops::Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc {
            ctx: self.ctx.clone(),
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

impl std::ops::AddAssign<&Cyc> for Cyc {
    fn add_assign(&mut self, rhs: &Cyc) {
        for (i, x) in rhs.c.iter().enumerate() {
            self.c[i] += x;
        }
    }
}

impl std::ops::SubAssign<&Cyc> for Cyc {
    fn sub_assign(&mut self, rhs: &Cyc) {
        for (i, x) in rhs.c.iter().enumerate() {
            self.c[i] -= x;
        }
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            if k == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "z^{k}")?;
            } else {
                write!(f, "{a}*z^{k}")?;
            }
            first = false;
        }
        Ok(())
    }
}
