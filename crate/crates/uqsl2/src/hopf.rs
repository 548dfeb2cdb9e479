//! The restricted quantum group Uq(sl2) of dimension 2p^3 and its
//! extension by a square root of K (dimension 4p^3).
//!
//! PBW monomials are E^i F^j K^{l/2} with 0 <= i,j <= p-1 and
//! 0 <= l <= 4p-1; the subalgebra Uq(sl2) is spanned by the monomials
//! with even l.  Conventions (fixed once and for all, and cross-checked
//! downstream against the displayed matrix of the loop-algebra
//! isomorphism on the 2-dimensional module):
//!
//!   K^{1/2} E = q E K^{1/2},   K^{1/2} F = q^{-1} F K^{1/2},
//!   E F - F E = (K - K^{-1}) / (q - q^{-1}),
//!   E^p = F^p = 0,  K^{2p} = 1  (so K^{1/2} has order 4p),
//!   coproduct:  D(E) = E ox K + 1 ox E,  D(F) = K^{-1} ox F + F ox 1,
//!               D(K^{+-1/2}) = K^{+-1/2} ox K^{+-1/2},
//!   antipode:   S(E) = -E K^{-1},  S(F) = -K F,  S(K^{1/2}) = K^{-1/2},
//!   counit:     eps(E) = eps(F) = 0,  eps(K^{1/2}) = 1.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::cyclo::{Ctx, Cyc, Rat};
use num_traits::{One, Zero};

pub type Terms = BTreeMap<u32, Cyc>;
pub type TTerms = BTreeMap<u64, Cyc>;

struct HopfInner {
    ctx: Ctx,
    p: usize,
    /// F^j E^i in PBW form, indexed by j * p + i
    fe: Vec<Terms>,
    /// coproducts of extension monomials, filled lazily
    delta: Vec<OnceLock<TTerms>>,
    /// antipode images of extension monomials, filled lazily
    anti: Vec<OnceLock<Terms>>,
    /// inverse antipode images
    anti_inv: Vec<OnceLock<Terms>>,
    /// coproducts of pi-basis monomials, filled lazily
    delta_pi: Vec<OnceLock<TTerms>>,
    /// D(E), D(F) in pi coordinates
    de_pi: OnceLock<TTerms>,
    df_pi: OnceLock<TTerms>,
}

/// Shared handle on the Hopf algebra tables; cheap to clone.
#[derive(Clone)]
pub struct HAlg(Arc<HopfInner>);

impl PartialEq for HAlg {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p
    }
}

impl fmt::Debug for HAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HAlg(p={})", self.0.p)
    }
}

impl HAlg {
    pub fn new(ctx: &Ctx) -> HAlg {
        let p = ctx.p();
        let qhat_inv = ctx.qhat().inv().expect("qhat nonzero");

        // F^j E^i by repeated right multiplication by E, using only the
        // termwise commutator rule (no table lookups yet)
        let mut fe: Vec<Terms> = Vec::with_capacity(p * p);
        for j in 0..p {
            let mut cur: Terms = BTreeMap::new();
            cur.insert(pack(p, 0, j as u32, 0), ctx.one());
            for i in 0..p {
                if i == 0 {
                    fe.push(cur.clone());
                } else {
                    cur = right_mul_e_raw(ctx, &qhat_inv, &cur);
                    fe.push(cur.clone());
                }
            }
        }

        let dim_ext = 4 * p * p * p;
        HAlg(Arc::new(HopfInner {
            ctx: ctx.clone(),
            p,
            fe,
            delta: (0..dim_ext).map(|_| OnceLock::new()).collect(),
            anti: (0..dim_ext).map(|_| OnceLock::new()).collect(),
            anti_inv: (0..dim_ext).map(|_| OnceLock::new()).collect(),
            delta_pi: (0..dim_ext).map(|_| OnceLock::new()).collect(),
            de_pi: OnceLock::new(),
            df_pi: OnceLock::new(),
        }))
    }

    pub fn ctx(&self) -> &Ctx {
        &self.0.ctx
    }

    pub fn p(&self) -> usize {
        self.0.p
    }

    /// dim Uq = 2 p^3
    pub fn dim_uq(&self) -> usize {
        2 * self.0.p.pow(3)
    }

    /// dim of the K^{1/2} extension = 4 p^3
    pub fn dim_ext(&self) -> usize {
        4 * self.0.p.pow(3)
    }

    pub fn zero(&self) -> AlgElem {
        AlgElem { h: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> AlgElem {
        self.scalar(self.0.ctx.one())
    }

    pub fn scalar(&self, c: Cyc) -> AlgElem {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0u32, c);
        }
        AlgElem { h: self.clone(), terms }
    }

    pub fn mono(&self, i: u32, j: u32, l: i64) -> AlgElem {
        let p = self.0.p as u32;
        assert!(i < p && j < p);
        let l = l.rem_euclid(4 * p as i64) as u32;
        let mut terms = BTreeMap::new();
        terms.insert(pack(self.0.p, i, j, l), self.0.ctx.one());
        AlgElem { h: self.clone(), terms }
    }

    pub fn e(&self) -> AlgElem {
        self.mono(1, 0, 0)
    }

    pub fn f(&self) -> AlgElem {
        self.mono(0, 1, 0)
    }

    /// K^k (integer power)
    pub fn k(&self, k: i64) -> AlgElem {
        self.mono(0, 0, 2 * k)
    }

    /// K^{k/2} (half-integer powers allowed)
    pub fn khalf(&self, k: i64) -> AlgElem {
        self.mono(0, 0, k)
    }

    /// All extension monomial indices.
    pub fn ext_indices(&self) -> Vec<u32> {
        let p = self.0.p;
        (0..(4 * p * p * p) as u32).collect()
    }

    /// Indices (into extension packing) of the Uq monomials, ordered by
    /// the Uq basis index i + p j + p^2 k with K-power k in 0..2p.
    pub fn uq_indices(&self) -> Vec<u32> {
        let p = self.0.p;
        let mut out = Vec::with_capacity(2 * p * p * p);
        for k in 0..(2 * p) as u32 {
            for j in 0..p as u32 {
                for i in 0..p as u32 {
                    out.push(pack(p, i, j, 2 * k));
                }
            }
        }
        // sort by uq index ordering: index = i + p j + p^2 k grows in
        // the same lexicographic order we generated, but re-sort to be
        // explicit about the contract
        out.sort_by_key(|&m| self.uq_index_of(m).unwrap());
        out
    }

    /// Uq basis index of an even extension monomial.
    pub fn uq_index_of(&self, m: u32) -> Option<usize> {
        let p = self.0.p;
        let (i, j, l) = unpack(p, m);
        if l % 2 != 0 {
            return None;
        }
        Some(i as usize + p * j as usize + p * p * (l / 2) as usize)
    }

    /// Extension monomial index for a Uq basis index.
    pub fn ext_index_of_uq(&self, idx: usize) -> u32 {
        let p = self.0.p;
        let i = idx % p;
        let j = (idx / p) % p;
        let k = idx / (p * p);
        assert!(k < 2 * p);
        pack(p, i as u32, j as u32, 2 * k as u32)
    }

    pub fn mono_elem(&self, m: u32) -> AlgElem {
        let mut terms = BTreeMap::new();
        terms.insert(m, self.0.ctx.one());
        AlgElem { h: self.clone(), terms }
    }

    pub fn unpack(&self, m: u32) -> (u32, u32, u32) {
        unpack(self.0.p, m)
    }

    /// Product of two PBW monomials, in PBW form.
    fn mono_mul(&self, m1: u32, m2: u32) -> Terms {
        let p = self.0.p;
        let ctx = &self.0.ctx;
        let (i1, j1, l1) = unpack(p, m1);
        let (i2, j2, l2) = unpack(p, m2);
        let mut out: Terms = BTreeMap::new();
        // commute K^{l1/2} through E^{i2} F^{j2}:
        // K^{1/2} E = q E K^{1/2}  =>  K^{l1/2} E^{i2} = q^{l1 i2} E^{i2} K^{l1/2}
        // K^{1/2} F = q^{-1} F K^{1/2}  =>  factor q^{-l1 j2}
        let global = ctx.q_pow(l1 as i64 * (i2 as i64 - j2 as i64));
        let fe = &self.0.fe[j1 as usize * p + i2 as usize];
        for (&m, c) in fe {
            let (a, b, mm) = unpack(p, m);
            debug_assert_eq!(mm % 2, 0);
            let ni = i1 + a;
            let nj = b + j2;
            if ni >= p as u32 || nj >= p as u32 {
                continue;
            }
            // E^{i1} (E^a F^b K^{mm/2}) F^{j2} K^{(l1+l2)/2}, where
            // K^{mm/2} F^{j2} = q^{-mm j2} F^{j2} K^{mm/2}
            let coeff = c * &global;
            let coeff = &coeff * &ctx.q_pow(-(mm as i64) * j2 as i64);
            let nl = (mm + l1 + l2) % (4 * p as u32);
            add_term(&mut out, pack(p, ni, nj, nl), coeff);
        }
        out
    }

    fn delta_mono(&self, m: u32) -> &TTerms {
        self.0.delta[m as usize].get_or_init(|| {
            let p = self.0.p;
            let (i, j, l) = unpack(p, m);
            // D(K^{l/2}) = K^{l/2} ox K^{l/2}
            let mut acc = TensorElem {
                h: self.clone(),
                terms: {
                    let mut t = BTreeMap::new();
                    let key = tkey(pack(p, 0, 0, l), pack(p, 0, 0, l));
                    t.insert(key, self.0.ctx.one());
                    t
                },
            };
            let de = self.delta_e();
            let df = self.delta_f();
            for _ in 0..j {
                acc = df.mul(&acc);
            }
            for _ in 0..i {
                acc = de.mul(&acc);
            }
            acc.terms
        })
    }

    fn delta_e(&self) -> TensorElem {
        // E ox K + 1 ox E
        let mut t = self.tensor(&self.e(), &self.k(1));
        t = t.add(&self.tensor(&self.one(), &self.e()));
        t
    }

    fn delta_f(&self) -> TensorElem {
        // K^{-1} ox F + F ox 1
        let mut t = self.tensor(&self.k(-1), &self.f());
        t = t.add(&self.tensor(&self.f(), &self.one()));
        t
    }

    fn anti_mono(&self, m: u32) -> &Terms {
        self.0.anti[m as usize].get_or_init(|| {
            let p = self.0.p;
            let (i, j, l) = unpack(p, m);
            // S(E^i F^j K^{l/2}) = K^{-l/2} (-K F)^j (-E K^{-1})^i
            let se = self.k(1).mul(&self.f()).neg(); // -KF = S(F)
            let sf_pow = se.pow_usize(j as usize);
            let se2 = self.e().mul(&self.k(-1)).neg(); // -E K^{-1} = S(E)
            let se_pow = se2.pow_usize(i as usize);
            let out = self
                .khalf(-(l as i64))
                .mul(&sf_pow)
                .mul(&se_pow);
            out.terms
        })
    }

    fn anti_inv_mono(&self, m: u32) -> &Terms {
        self.0.anti_inv[m as usize].get_or_init(|| {
            let p = self.0.p;
            let (i, j, l) = unpack(p, m);
            // S^{-1}(E) = -K^{-1} E,  S^{-1}(F) = -q^2 K F... verified by
            // S(S^{-1}(x)) = x below; S^{-1}(K^{1/2}) = K^{-1/2}
            // S^{-1}(E^i F^j K^{l/2}) = K^{-l/2} S^{-1}(F)^j S^{-1}(E)^i
            let sie = self.k(-1).mul(&self.e()).neg();
            let sif = self
                .k(1)
                .mul(&self.f())
                .neg()
                .scale(&self.0.ctx.q_pow(2));
            let out = self
                .khalf(-(l as i64))
                .mul(&sif.pow_usize(j as usize))
                .mul(&sie.pow_usize(i as usize));
            out.terms
        })
    }

    pub fn tensor(&self, a: &AlgElem, b: &AlgElem) -> TensorElem {
        let mut terms = BTreeMap::new();
        for (&ma, ca) in &a.terms {
            for (&mb, cb) in &b.terms {
                add_term64(&mut terms, tkey(ma, mb), ca * cb);
            }
        }
        TensorElem { h: self.clone(), terms }
    }

    pub fn tensor_zero(&self) -> TensorElem {
        TensorElem { h: self.clone(), terms: BTreeMap::new() }
    }

    pub fn tensor_one(&self) -> TensorElem {
        self.tensor(&self.one(), &self.one())
    }

    pub fn t3_zero(&self) -> Tensor3 {
        Tensor3 { h: self.clone(), terms: BTreeMap::new() }
    }

    /// Dual basis delta form at the given Uq basis index.
    pub fn dual_basis(&self, idx: usize) -> LinForm {
        let mut values = vec![self.0.ctx.zero(); self.dim_uq()];
        values[idx] = self.0.ctx.one();
        LinForm { h: self.clone(), values }
    }

    pub fn lin_zero(&self) -> LinForm {
        LinForm { h: self.clone(), values: vec![self.0.ctx.zero(); self.dim_uq()] }
    }

    /// The counit as a linear form on Uq.
    pub fn counit_form(&self) -> LinForm {
        let mut values = vec![self.0.ctx.zero(); self.dim_uq()];
        for idx in 0..self.dim_uq() {
            let m = self.ext_index_of_uq(idx);
            let (i, j, _) = unpack(self.0.p, m);
            if i == 0 && j == 0 {
                values[idx] = self.0.ctx.one();
            }
        }
        LinForm { h: self.clone(), values }
    }
}

fn pack(p: usize, i: u32, j: u32, l: u32) -> u32 {
    i + p as u32 * j + (p * p) as u32 * l
}

fn unpack(p: usize, m: u32) -> (u32, u32, u32) {
    let p = p as u32;
    (m % p, (m / p) % p, m / (p * p))
}

fn tkey(a: u32, b: u32) -> u64 {
    ((a as u64) << 20) | b as u64
}

fn tsplit(k: u64) -> (u32, u32) {
    ((k >> 20) as u32, (k & 0xfffff) as u32)
}

fn t3key(a: u32, b: u32, c: u32) -> u64 {
    ((a as u64) << 40) | ((b as u64) << 20) | c as u64
}

fn t3split(k: u64) -> (u32, u32, u32) {
    ((k >> 40) as u32, ((k >> 20) & 0xfffff) as u32, (k & 0xfffff) as u32)
}

fn add_term(map: &mut Terms, key: u32, c: Cyc) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn add_term64(map: &mut TTerms, key: u64, c: Cyc) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Right multiplication of a PBW sum by E, using
/// F^j E = E F^j - [j] F^{j-1}(q^{-(j-1)} K - q^{j-1} K^{-1}) / qhat.
fn right_mul_e_raw(ctx: &Ctx, qhat_inv: &Cyc, terms: &Terms) -> Terms {
    // p recovered from context
    let p = ctx.p();
    let mut out: Terms = BTreeMap::new();
    for (&m, c) in terms {
        let (i, j, l) = unpack(p, m);
        let ql = ctx.q_pow(l as i64); // K^{l/2} E = q^l E K^{l/2}
        if (i + 1) < p as u32 {
            add_term(&mut out, pack(p, i + 1, j, l), c * &ql);
        }
        if j >= 1 {
            let jj = ctx.qint(j as i64);
            let base = &(c * &ql) * &(&jj * qhat_inv);
            // - q^{-(j-1)} E^i F^{j-1} K^{(l+2)/2}
            let c1 = &base * &ctx.q_pow(-(j as i64 - 1));
            add_term(&mut out, pack(p, i, j - 1, (l + 2) % (4 * p as u32)), -&c1);
            // + q^{j-1} E^i F^{j-1} K^{(l-2)/2}
            let c2 = &base * &ctx.q_pow(j as i64 - 1);
            let lm = (l + 4 * p as u32 - 2) % (4 * p as u32);
            add_term(&mut out, pack(p, i, j - 1, lm), c2);
        }
    }
    out
}

/// Sparse element of the extended algebra in PBW coordinates.
#[derive(Clone, PartialEq)]
pub struct AlgElem {
    pub h: HAlg,
    pub terms: Terms,
}

impl AlgElem {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &AlgElem) -> AlgElem {
        let mut terms = self.terms.clone();
        for (&m, c) in &o.terms {
            add_term(&mut terms, m, c.clone());
        }
        AlgElem { h: self.h.clone(), terms }
    }

    pub fn sub(&self, o: &AlgElem) -> AlgElem {
        let mut terms = self.terms.clone();
        for (&m, c) in &o.terms {
            add_term(&mut terms, m, -c);
        }
        AlgElem { h: self.h.clone(), terms }
    }

    pub fn neg(&self) -> AlgElem {
        AlgElem {
            h: self.h.clone(),
            terms: self.terms.iter().map(|(&m, c)| (m, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Cyc) -> AlgElem {
        if c.is_zero() {
            return self.h.zero();
        }
        AlgElem {
            h: self.h.clone(),
            terms: self.terms.iter().map(|(&m, x)| (m, x * c)).collect(),
        }
    }

    pub fn mul(&self, o: &AlgElem) -> AlgElem {
        let mut terms: Terms = BTreeMap::new();
        for (&m1, c1) in &self.terms {
            for (&m2, c2) in &o.terms {
                let prod = self.h.mono_mul(m1, m2);
                let c = c1 * c2;
                for (&m, pc) in &prod {
                    add_term(&mut terms, m, pc * &c);
                }
            }
        }
        AlgElem { h: self.h.clone(), terms }
    }

    pub fn pow_usize(&self, k: usize) -> AlgElem {
        let mut acc = self.h.one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse within the finite-dimensional algebra, via the minimal
    /// polynomial of the element in the subalgebra it generates.
    pub fn inv(&self) -> Result<AlgElem, String> {
        alg_inverse(self)
    }

    pub fn counit(&self) -> Cyc {
        let ctx = self.h.ctx();
        let mut acc = ctx.zero();
        for (&m, c) in &self.terms {
            let (i, j, _) = self.h.unpack(m);
            if i == 0 && j == 0 {
                acc += c;
            }
        }
        acc
    }

    pub fn antipode(&self) -> AlgElem {
        let mut terms: Terms = BTreeMap::new();
        for (&m, c) in &self.terms {
            for (&mm, cc) in self.h.anti_mono(m) {
                add_term(&mut terms, mm, cc * c);
            }
        }
        AlgElem { h: self.h.clone(), terms }
    }

    pub fn antipode_inv(&self) -> AlgElem {
        let mut terms: Terms = BTreeMap::new();
        for (&m, c) in &self.terms {
            for (&mm, cc) in self.h.anti_inv_mono(m) {
                add_term(&mut terms, mm, cc * c);
            }
        }
        AlgElem { h: self.h.clone(), terms }
    }

    pub fn coproduct(&self) -> TensorElem {
        let mut terms: TTerms = BTreeMap::new();
        for (&m, c) in &self.terms {
            for (&k, cc) in self.h.delta_mono(m) {
                add_term64(&mut terms, k, cc * c);
            }
        }
        TensorElem { h: self.h.clone(), terms }
    }

    /// Does the element lie in Uq (no odd half-powers of K)?
    pub fn in_uq(&self) -> bool {
        self.terms
            .keys()
            .all(|&m| self.h.unpack(m).2 % 2 == 0)
    }

    /// Dense coefficient vector against the Uq basis; None if the
    /// element leaves the subalgebra.
    pub fn uq_vector(&self) -> Option<Vec<Cyc>> {
        let mut v = vec![self.h.ctx().zero(); self.h.dim_uq()];
        for (&m, c) in &self.terms {
            let idx = self.h.uq_index_of(m)?;
            v[idx] = c.clone();
        }
        Some(v)
    }

    pub fn from_uq_vector(h: &HAlg, v: &[Cyc]) -> AlgElem {
        assert_eq!(v.len(), h.dim_uq());
        let mut terms: Terms = BTreeMap::new();
        for (idx, c) in v.iter().enumerate() {
            if !c.is_zero() {
                terms.insert(h.ext_index_of_uq(idx), c.clone());
            }
        }
        AlgElem { h: h.clone(), terms }
    }

    /// Commutator x y - y x.
    pub fn commutator(&self, o: &AlgElem) -> AlgElem {
        self.mul(o).sub(&o.mul(self))
    }
}

fn alg_inverse(x: &AlgElem) -> Result<AlgElem, String> {
    // powers of x until linear dependence; from
    // c_0 + c_1 x + ... + c_d x^d = 0 with c_0 != 0 read off
    // x^{-1} = -(c_1 + c_2 x + ... ) / c_0
    let h = &x.h;
    let ctx = h.ctx();
    // coordinates over the extension basis
    let dim = h.dim_ext();
    let coord = |a: &AlgElem| {
        let mut v = vec![ctx.zero(); dim];
        for (&m, c) in &a.terms {
            v[m as usize] = c.clone();
        }
        v
    };
    let mut rr = crate::linalg::RowReducer::new(ctx, dim);
    let mut pows: Vec<AlgElem> = vec![h.one()];
    rr.push(coord(&pows[0]));
    loop {
        let next = pows.last().unwrap().mul(x);
        if !rr.push(coord(&next)) {
            // next is dependent on earlier powers: solve
            let d = pows.len();
            let mut rows = Vec::with_capacity(dim);
            // matrix with columns = pows, rhs = next
            for b in 0..dim {
                let mut row = Vec::with_capacity(d);
                for pw in &pows {
                    row.push(
                        pw.terms
                            .get(&(b as u32))
                            .cloned()
                            .unwrap_or_else(|| ctx.zero()),
                    );
                }
                rows.push(row);
            }
            let mat = crate::linalg::Mat::from_rows(ctx, rows);
            let rhs = coord(&next);
            let sol = mat.solve(&rhs).ok_or("inverse solve failed")?;
            // x^d = sum sol_k x^k, so x (x^{d-1} - sum_{k>=1} sol_k x^{k-1}) = sol_0
            if sol[0].is_zero() {
                return Err("element is not invertible".to_string());
            }
            let mut acc = pows[d - 1].clone();
            for k in 1..d {
                acc = acc.sub(&pows[k - 1].scale(&sol[k]));
            }
            let inv0 = sol[0].inv().map_err(|e| e.to_string())?;
            let out = acc.scale(&inv0);
            debug_assert!(out.mul(x) == h.one());
            return Ok(out);
        }
        pows.push(next);
        if pows.len() > dim + 1 {
            return Err("inverse search did not terminate".to_string());
        }
    }
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let (i, j, l) = self.h.unpack(m);
            let mut factors: Vec<String> = vec![];
            if i > 0 {
                factors.push(if i == 1 { "E".into() } else { format!("E^{i}") });
            }
            if j > 0 {
                factors.push(if j == 1 { "F".into() } else { format!("F^{j}") });
            }
            if l > 0 {
                if l % 2 == 0 {
                    let k = l / 2;
                    factors.push(if k == 1 { "K".into() } else { format!("K^{k}") });
                } else {
                    factors.push(format!("K^{{{l}/2}}"));
                }
            }
            if factors.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TensorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let (a, b) = tsplit(k);
            write!(f, "({c})*[{:?} ox {:?}]", self.h.mono_elem(a), self.h.mono_elem(b))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Tensor3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor3({} terms)", self.terms.len())
    }
}

impl fmt::Debug for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| format!("{v}")).collect();
        write!(f, "LinForm[{}]", vals.join(", "))
    }
}

/// Sparse element of the two-fold tensor square.
#[derive(Clone, PartialEq)]
pub struct TensorElem {
    pub h: HAlg,
    pub terms: TTerms,
}

impl TensorElem {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, o: &TensorElem) -> TensorElem {
        let mut terms = self.terms.clone();
        for (&k, c) in &o.terms {
            add_term64(&mut terms, k, c.clone());
        }
        TensorElem { h: self.h.clone(), terms }
    }

    pub fn sub(&self, o: &TensorElem) -> TensorElem {
        let mut terms = self.terms.clone();
        for (&k, c) in &o.terms {
            add_term64(&mut terms, k, -c);
        }
        TensorElem { h: self.h.clone(), terms }
    }

    pub fn neg(&self) -> TensorElem {
        TensorElem {
            h: self.h.clone(),
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Cyc) -> TensorElem {
        if c.is_zero() {
            return self.h.tensor_zero();
        }
        TensorElem {
            h: self.h.clone(),
            terms: self.terms.iter().map(|(&k, x)| (k, x * c)).collect(),
        }
    }

    pub fn mul(&self, o: &TensorElem) -> TensorElem {
        use rayon::prelude::*;
        let h = &self.h;
        let mine: Vec<(&u64, &Cyc)> = self.terms.iter().collect();
        let partial: Vec<TTerms> = mine
            .par_iter()
            .map(|&(&k1, c1)| {
                let (a1, b1) = tsplit(k1);
                let mut local: TTerms = BTreeMap::new();
                for (&k2, c2) in &o.terms {
                    let (a2, b2) = tsplit(k2);
                    let pa = h.mono_mul(a1, a2);
                    if pa.is_empty() {
                        continue;
                    }
                    let pb = h.mono_mul(b1, b2);
                    if pb.is_empty() {
                        continue;
                    }
                    let c = c1 * c2;
                    for (&ma, ca) in &pa {
                        let cca = ca * &c;
                        for (&mb, cb) in &pb {
                            add_term64(&mut local, tkey(ma, mb), cb * &cca);
                        }
                    }
                }
                local
            })
            .collect();
        let mut terms: TTerms = BTreeMap::new();
        for part in partial {
            for (k, c) in part {
                add_term64(&mut terms, k, c);
            }
        }
        TensorElem { h: h.clone(), terms }
    }

    pub fn flip(&self) -> TensorElem {
        TensorElem {
            h: self.h.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| {
                    let (a, b) = tsplit(k);
                    (tkey(b, a), c.clone())
                })
                .collect(),
        }
    }

    /// Apply monomial-wise maps to the two legs and multiply out.
    pub fn map_legs<F1, F2>(&self, f1: F1, f2: F2) -> TensorElem
    where
        F1: Fn(u32) -> AlgElem,
        F2: Fn(u32) -> AlgElem,
    {
        let mut out = self.h.tensor_zero();
        for (&k, c) in &self.terms {
            let (a, b) = tsplit(k);
            let t = self.h.tensor(&f1(a), &f2(b)).scale(c);
            out = out.add(&t);
        }
        out
    }

    /// (S ox id)
    pub fn antipode_leg1(&self) -> TensorElem {
        self.map_legs(|a| self.h.mono_elem(a).antipode(), |b| self.h.mono_elem(b))
    }

    /// (id ox S)
    pub fn antipode_leg2(&self) -> TensorElem {
        self.map_legs(|a| self.h.mono_elem(a), |b| self.h.mono_elem(b).antipode())
    }

    /// (S ox S)
    pub fn antipode_both(&self) -> TensorElem {
        self.map_legs(
            |a| self.h.mono_elem(a).antipode(),
            |b| self.h.mono_elem(b).antipode(),
        )
    }

    /// (id ox S^{-1})
    pub fn antipode_inv_leg2(&self) -> TensorElem {
        self.map_legs(|a| self.h.mono_elem(a), |b| self.h.mono_elem(b).antipode_inv())
    }

    /// (eps ox id)
    pub fn counit_leg1(&self) -> AlgElem {
        let mut out = self.h.zero();
        for (&k, c) in &self.terms {
            let (a, b) = tsplit(k);
            let e = self.h.mono_elem(a).counit();
            if !e.is_zero() {
                out = out.add(&self.h.mono_elem(b).scale(&(&e * c)));
            }
        }
        out
    }

    /// (id ox eps)
    pub fn counit_leg2(&self) -> AlgElem {
        let mut out = self.h.zero();
        for (&k, c) in &self.terms {
            let (a, b) = tsplit(k);
            let e = self.h.mono_elem(b).counit();
            if !e.is_zero() {
                out = out.add(&self.h.mono_elem(a).scale(&(&e * c)));
            }
        }
        out
    }

    /// Multiply the two legs together: sum c * a * b in the algebra.
    pub fn fold_multiply(&self) -> AlgElem {
        let mut out = self.h.zero();
        for (&k, c) in &self.terms {
            let (a, b) = tsplit(k);
            out = out.add(
                &self
                    .h
                    .mono_elem(a)
                    .mul(&self.h.mono_elem(b))
                    .scale(c),
            );
        }
        out
    }

    /// Pair a linear form against leg 1: (psi ox id)(T).
    pub fn contract_leg1(&self, psi: &LinForm) -> AlgElem {
        let mut out = self.h.zero();
        for (&k, c) in &self.terms {
            let (a, b) = tsplit(k);
            let val = psi.eval_mono(a);
            if !val.is_zero() {
                out = out.add(&self.h.mono_elem(b).scale(&(&val * c)));
            }
        }
        out
    }

    /// Pair a linear form against leg 2: (id ox psi)(T).
    pub fn contract_leg2(&self, psi: &LinForm) -> AlgElem {
        let mut out = self.h.zero();
        for (&k, c) in &self.terms {
            let (a, b) = tsplit(k);
            let val = psi.eval_mono(b);
            if !val.is_zero() {
                out = out.add(&self.h.mono_elem(a).scale(&(&val * c)));
            }
        }
        out
    }

    /// Both legs inside Uq?
    pub fn in_uq(&self) -> bool {
        self.terms.keys().all(|&k| {
            let (a, b) = tsplit(k);
            self.h.unpack(a).2 % 2 == 0 && self.h.unpack(b).2 % 2 == 0
        })
    }

    /// Generic inverse via the minimal polynomial in the commutative...
    /// no: in the (noncommutative) subalgebra generated by the element.
    pub fn inverse(&self) -> Result<TensorElem, String> {
        // powers until dependence, as for AlgElem
        let h = &self.h;
        let ctx = h.ctx();
        let coord = |t: &TensorElem, keys: &Vec<u64>| -> Vec<Cyc> {
            keys.iter()
                .map(|k| t.terms.get(k).cloned().unwrap_or_else(|| ctx.zero()))
                .collect()
        };
        let mut pows: Vec<TensorElem> = vec![h.tensor_one()];
        loop {
            let next = pows.last().unwrap().mul(self);
            pows.push(next);
            // collect all keys seen so far
            let mut rr_keys: Vec<u64> = vec![];
            for t in &pows {
                rr_keys.extend(t.terms.keys().copied());
            }
            rr_keys.sort_unstable();
            rr_keys.dedup();
            let mut rr = crate::linalg::RowReducer::new(ctx, rr_keys.len());
            let mut dependent_at = None;
            for (idx, t) in pows.iter().enumerate() {
                if !rr.push(coord(t, &rr_keys)) {
                    dependent_at = Some(idx);
                    break;
                }
            }
            if let Some(d) = dependent_at {
                // pows[d] = sum_{k<d} sol_k pows[k]
                let rows: Vec<Vec<Cyc>> = (0..rr_keys.len())
                    .map(|b| {
                        (0..d)
                            .map(|k| {
                                pows[k]
                                    .terms
                                    .get(&rr_keys[b])
                                    .cloned()
                                    .unwrap_or_else(|| ctx.zero())
                            })
                            .collect()
                    })
                    .collect();
                let mat = crate::linalg::Mat::from_rows(ctx, rows);
                let rhs = coord(&pows[d], &rr_keys);
                let sol = mat.solve(&rhs).ok_or("tensor inverse solve failed")?;
                if sol[0].is_zero() {
                    return Err("tensor element is not invertible".to_string());
                }
                let mut acc = pows[d - 1].clone();
                for k in 1..d {
                    acc = acc.sub(&pows[k - 1].scale(&sol[k]));
                }
                let inv0 = sol[0].inv().map_err(|e| e.to_string())?;
                return Ok(acc.scale(&inv0));
            }
            if pows.len() > 4 * h.dim_ext() {
                return Err("tensor inverse search did not terminate".to_string());
            }
        }
    }

    /// Embed as leg pair (1,2), (1,3) or (2,3) of the triple tensor.
    pub fn embed12(&self) -> Tensor3 {
        Tensor3 {
            h: self.h.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| {
                    let (a, b) = tsplit(k);
                    (t3key(a, b, 0), c.clone())
                })
                .collect(),
        }
    }

    pub fn embed13(&self) -> Tensor3 {
        Tensor3 {
            h: self.h.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| {
                    let (a, b) = tsplit(k);
                    (t3key(a, 0, b), c.clone())
                })
                .collect(),
        }
    }

    pub fn embed23(&self) -> Tensor3 {
        Tensor3 {
            h: self.h.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| {
                    let (a, b) = tsplit(k);
                    (t3key(0, a, b), c.clone())
                })
                .collect(),
        }
    }

    /// (Delta ox id)
    pub fn delta_leg1(&self) -> Tensor3 {
        let mut out = self.h.t3_zero();
        for (&k, c) in &self.terms {
            let (a, b) = tsplit(k);
            for (&dk, dc) in self.h.delta_mono(a) {
                let (x, y) = tsplit(dk);
                add_term64(&mut out.terms, t3key(x, y, b), dc * c);
            }
        }
        out
    }

    /// (id ox Delta)
    pub fn delta_leg2(&self) -> Tensor3 {
        let mut out = self.h.t3_zero();
        for (&k, c) in &self.terms {
            let (a, b) = tsplit(k);
            for (&dk, dc) in self.h.delta_mono(b) {
                let (x, y) = tsplit(dk);
                add_term64(&mut out.terms, t3key(a, x, y), dc * c);
            }
        }
        out
    }
}

/// Sparse element of the three-fold tensor power.
#[derive(Clone, PartialEq)]
pub struct Tensor3 {
    pub h: HAlg,
    pub terms: TTerms,
}

impl Tensor3 {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sub(&self, o: &Tensor3) -> Tensor3 {
        let mut terms = self.terms.clone();
        for (&k, c) in &o.terms {
            add_term64(&mut terms, k, -c);
        }
        Tensor3 { h: self.h.clone(), terms }
    }

    pub fn mul(&self, o: &Tensor3) -> Tensor3 {
        use rayon::prelude::*;
        let h = &self.h;
        let mine: Vec<(&u64, &Cyc)> = self.terms.iter().collect();
        let partial: Vec<TTerms> = mine
            .par_iter()
            .map(|&(&k1, c1)| {
                let (a1, b1, c1m) = t3split(k1);
                let mut local: TTerms = BTreeMap::new();
                for (&k2, c2) in &o.terms {
                    let (a2, b2, c2m) = t3split(k2);
                    let pa = h.mono_mul(a1, a2);
                    if pa.is_empty() {
                        continue;
                    }
                    let pb = h.mono_mul(b1, b2);
                    if pb.is_empty() {
                        continue;
                    }
                    let pc = h.mono_mul(c1m, c2m);
                    if pc.is_empty() {
                        continue;
                    }
                    let cc = c1 * c2;
                    for (&ma, ca) in &pa {
                        let ca = ca * &cc;
                        for (&mb, cb) in &pb {
                            let cab = cb * &ca;
                            for (&mc, ccc) in &pc {
                                add_term64(&mut local, t3key(ma, mb, mc), ccc * &cab);
                            }
                        }
                    }
                }
                local
            })
            .collect();
        let mut terms: TTerms = BTreeMap::new();
        for part in partial {
            for (k, c) in part {
                add_term64(&mut terms, k, c);
            }
        }
        Tensor3 { h: h.clone(), terms }
    }
}

// --- weight idempotent basis ---
//
// pi_t = (1/4p) sum_n zeta^{-tn} K^{n/2} are the primitive idempotents
// of the group algebra of <K^{1/2}> (zeta the primitive 4p-th root with
// zeta^2 = q), and K^{l/2} = sum_t zeta^{tl} pi_t.  In the alternative
// basis E^i F^j pi_t the Cartan part of a product is a delta constraint
// instead of a convolution:
//
//   pi_t E = E pi_{t-2},   pi_t F = F pi_{t+2},
//
// so (E^{i1} F^{j1} pi_{t1})(E^{i2} F^{j2} pi_{t2}) vanishes unless
// t1 = t2 + 2 i2 - 2 j2 mod 4p.  Tensor products bucket on that key and
// only surviving pairs are touched, which brings the big quasitriangular
// identities (Yang-Baxter and friends) down to desk scale.  The packing
// pack(i, j, t) with t in 0..4p reuses the extension monomial layout.

impl HAlg {
    /// pi coordinates of an algebra element.
    pub fn to_pi(&self, x: &AlgElem) -> Terms {
        let p = self.0.p;
        let n = 4 * p as i64;
        let ctx = &self.0.ctx;
        let mut out: Terms = BTreeMap::new();
        for (&m, c) in &x.terms {
            let (i, j, l) = unpack(p, m);
            for t in 0..4 * p as u32 {
                let k = (t as i64 * l as i64) % n;
                add_term(&mut out, pack(p, i, j, t), ctx.mul_zeta(c, k));
            }
        }
        out
    }

    /// Back from pi coordinates to PBW coordinates.
    pub fn from_pi(&self, t: &Terms) -> AlgElem {
        let p = self.0.p;
        let n = 4 * p as i64;
        let ctx = &self.0.ctx;
        let inv4p = Rat::new(1.into(), (4 * p).into());
        let mut out: Terms = BTreeMap::new();
        for (&m, c) in t {
            let (i, j, tt) = unpack(p, m);
            let c = c.scale(&inv4p);
            for nn in 0..4 * p as u32 {
                let k = (-(tt as i64) * nn as i64).rem_euclid(n);
                add_term(&mut out, pack(p, i, j, nn), ctx.mul_zeta(&c, k));
            }
        }
        AlgElem { h: self.clone(), terms: out }
    }

    /// The unit in pi coordinates: sum of all idempotents.
    pub fn one_pi(&self) -> Terms {
        (0..4 * self.0.p as u32)
            .map(|t| (pack(self.0.p, 0, 0, t), self.0.ctx.one()))
            .collect()
    }

    /// The pi index forced on a left cofactor of this pi monomial.
    fn pi_bucket(&self, m: u32) -> u32 {
        let p = self.0.p;
        let (i, j, t) = unpack(p, m);
        (t + 2 * i + (4 * p as u32 - 2 * j)) % (4 * p as u32)
    }

    /// Product of pi-basis monomials; None when the idempotents clash.
    /// The caller still multiplies by both input coefficients.
    fn pi_mono_mul(&self, m1: u32, m2: u32) -> Option<Vec<(u32, Cyc)>> {
        let p = self.0.p;
        let (i1, j1, t1) = unpack(p, m1);
        let (i2, j2, t2) = unpack(p, m2);
        if self.pi_bucket(m2) != t1 {
            return None;
        }
        let fe = &self.0.fe[j1 as usize * p + i2 as usize];
        let mut out = Vec::with_capacity(fe.len());
        for (&m, c) in fe {
            let (a, b, mm) = unpack(p, m);
            let ni = i1 + a;
            let nj = b + j2;
            if ni >= p as u32 || nj >= p as u32 {
                continue;
            }
            // K^{mm/2} F^{j2} pi_{t2} = q^{-mm j2} F^{j2} K^{mm/2} pi_{t2}
            // and K^{mm/2} pi_{t2} = zeta^{mm t2} pi_{t2}
            let k = (mm as i64) * (t2 as i64 - 2 * j2 as i64);
            out.push((pack(p, ni, nj, t2), self.0.ctx.mul_zeta(c, k)));
        }
        Some(out)
    }

    fn de_pi(&self) -> &TTerms {
        self.0.de_pi.get_or_init(|| self.tensor_to_pi(&self.delta_e()).terms)
    }

    fn df_pi(&self) -> &TTerms {
        self.0.df_pi.get_or_init(|| self.tensor_to_pi(&self.delta_f()).terms)
    }

    fn delta_pi_mono(&self, m: u32) -> &TTerms {
        self.0.delta_pi[m as usize].get_or_init(|| {
            let p = self.0.p;
            let (i, j, t) = unpack(p, m);
            // D(pi_t) = sum_{a+b = t mod 4p} pi_a ox pi_b
            let mut acc = PiTensor {
                h: self.clone(),
                terms: (0..4 * p as u32)
                    .map(|a| {
                        let b = (t + 4 * p as u32 - a) % (4 * p as u32);
                        (tkey(pack(p, 0, 0, a), pack(p, 0, 0, b)), self.0.ctx.one())
                    })
                    .collect(),
            };
            let df = PiTensor { h: self.clone(), terms: self.df_pi().clone() };
            let de = PiTensor { h: self.clone(), terms: self.de_pi().clone() };
            for _ in 0..j {
                acc = df.mul(&acc);
            }
            for _ in 0..i {
                acc = de.mul(&acc);
            }
            acc.terms
        })
    }

    /// Coproduct of an element given in pi coordinates.
    pub fn coproduct_pi(&self, x: &Terms) -> PiTensor {
        let mut terms: TTerms = BTreeMap::new();
        for (&m, c) in x {
            for (&k, cc) in self.delta_pi_mono(m) {
                add_term64(&mut terms, k, cc * c);
            }
        }
        PiTensor { h: self.clone(), terms }
    }

    /// Tensor of two elements given in pi coordinates.
    pub fn pi_tensor(&self, a: &Terms, b: &Terms) -> PiTensor {
        let mut terms: TTerms = BTreeMap::new();
        for (&ma, ca) in a {
            for (&mb, cb) in b {
                add_term64(&mut terms, tkey(ma, mb), ca * cb);
            }
        }
        PiTensor { h: self.clone(), terms }
    }

    pub fn pi_tensor_zero(&self) -> PiTensor {
        PiTensor { h: self.clone(), terms: BTreeMap::new() }
    }

    pub fn pi_tensor_one(&self) -> PiTensor {
        let one = self.one_pi();
        self.pi_tensor(&one, &one)
    }

    /// Convert a PBW tensor to pi coordinates.
    pub fn tensor_to_pi(&self, x: &TensorElem) -> PiTensor {
        let p = self.0.p;
        let n = 4 * p as i64;
        let ctx = &self.0.ctx;
        let mut terms: TTerms = BTreeMap::new();
        for (&k, c) in &x.terms {
            let (ma, mb) = tsplit(k);
            let (ia, ja, la) = unpack(p, ma);
            let (ib, jb, lb) = unpack(p, mb);
            for ta in 0..4 * p as u32 {
                let ca = ctx.mul_zeta(c, (ta as i64 * la as i64) % n);
                let ka = pack(p, ia, ja, ta);
                for tb in 0..4 * p as u32 {
                    let cb = ctx.mul_zeta(&ca, (tb as i64 * lb as i64) % n);
                    add_term64(&mut terms, tkey(ka, pack(p, ib, jb, tb)), cb);
                }
            }
        }
        PiTensor { h: self.clone(), terms }
    }
}

/// Sparse tensor-square element in pi coordinates.
#[derive(Clone, PartialEq)]
pub struct PiTensor {
    pub h: HAlg,
    pub terms: TTerms,
}

impl fmt::Debug for PiTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PiTensor({} terms)", self.terms.len())
    }
}

impl PiTensor {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, o: &PiTensor) -> PiTensor {
        let mut terms = self.terms.clone();
        for (&k, c) in &o.terms {
            add_term64(&mut terms, k, c.clone());
        }
        PiTensor { h: self.h.clone(), terms }
    }

    pub fn sub(&self, o: &PiTensor) -> PiTensor {
        let mut terms = self.terms.clone();
        for (&k, c) in &o.terms {
            add_term64(&mut terms, k, -c);
        }
        PiTensor { h: self.h.clone(), terms }
    }

    pub fn scale(&self, c: &Cyc) -> PiTensor {
        if c.is_zero() {
            return self.h.pi_tensor_zero();
        }
        PiTensor {
            h: self.h.clone(),
            terms: self.terms.iter().map(|(&k, x)| (k, x * c)).collect(),
        }
    }

    pub fn flip(&self) -> PiTensor {
        PiTensor {
            h: self.h.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| {
                    let (a, b) = tsplit(k);
                    (tkey(b, a), c.clone())
                })
                .collect(),
        }
    }

    /// Bucketed product: only pairs whose idempotents match in both legs
    /// are enumerated.
    pub fn mul(&self, o: &PiTensor) -> PiTensor {
        use std::collections::HashMap;
        let h = &self.h;
        let p = h.0.p;
        let t_of = |m: u32| unpack(p, m).2;
        let mut terms: TTerms = BTreeMap::new();
        if self.terms.len() <= o.terms.len() {
            // index left terms by their idempotent pair
            let mut idx: HashMap<u64, Vec<u64>> = HashMap::new();
            for &k in self.terms.keys() {
                let (a, b) = tsplit(k);
                idx.entry(tkey(t_of(a), t_of(b))).or_default().push(k);
            }
            for (&k2, c2) in &o.terms {
                let (a2, b2) = tsplit(k2);
                let key = tkey(h.pi_bucket(a2), h.pi_bucket(b2));
                let Some(lefts) = idx.get(&key) else { continue };
                for &k1 in lefts {
                    let c1 = &self.terms[&k1];
                    let (a1, b1) = tsplit(k1);
                    mul_pair_into(h, &mut terms, a1, b1, a2, b2, &(c1 * c2));
                }
            }
        } else {
            // index right terms by their forced left idempotent pair
            let mut idx: HashMap<u64, Vec<u64>> = HashMap::new();
            for &k in o.terms.keys() {
                let (a, b) = tsplit(k);
                idx.entry(tkey(h.pi_bucket(a), h.pi_bucket(b))).or_default().push(k);
            }
            for (&k1, c1) in &self.terms {
                let (a1, b1) = tsplit(k1);
                let key = tkey(t_of(a1), t_of(b1));
                let Some(rights) = idx.get(&key) else { continue };
                for &k2 in rights {
                    let c2 = &o.terms[&k2];
                    let (a2, b2) = tsplit(k2);
                    mul_pair_into(h, &mut terms, a1, b1, a2, b2, &(c1 * c2));
                }
            }
        }
        PiTensor { h: h.clone(), terms }
    }

    /// Both legs inside Uq?  Equivalent to invariance under the sign
    /// automorphism K^{1/2} -> -K^{1/2}, which in pi coordinates shifts
    /// t by 2p, separately in each leg.
    pub fn in_uq(&self) -> bool {
        let h = &self.h;
        let p = h.0.p;
        let shift = |m: u32| {
            let (i, j, t) = unpack(p, m);
            pack(p, i, j, (t + 2 * p as u32) % (4 * p as u32))
        };
        self.terms.iter().all(|(&k, c)| {
            let (a, b) = tsplit(k);
            self.terms.get(&tkey(shift(a), b)).is_some_and(|d| d == c)
                && self.terms.get(&tkey(a, shift(b))).is_some_and(|d| d == c)
        })
    }

    /// Back to PBW coordinates (quadratic in 4p per term; use on
    /// moderate-size tensors only).
    pub fn to_tensor(&self) -> TensorElem {
        let h = &self.h;
        let p = h.0.p;
        let n = 4 * p as i64;
        let ctx = h.ctx();
        let inv = Rat::new(1.into(), (4 * p * 4 * p).into());
        let mut terms: TTerms = BTreeMap::new();
        for (&k, c) in &self.terms {
            let (ma, mb) = tsplit(k);
            let (ia, ja, ta) = unpack(p, ma);
            let (ib, jb, tb) = unpack(p, mb);
            let c = c.scale(&inv);
            for na in 0..4 * p as u32 {
                let ca = ctx.mul_zeta(&c, (-(ta as i64) * na as i64).rem_euclid(n));
                let ka = pack(p, ia, ja, na);
                for nb in 0..4 * p as u32 {
                    let cb =
                        ctx.mul_zeta(&ca, (-(tb as i64) * nb as i64).rem_euclid(n));
                    add_term64(&mut terms, tkey(ka, pack(p, ib, jb, nb)), cb);
                }
            }
        }
        TensorElem { h: h.clone(), terms }
    }

    /// (psi ox id): pair a functional value against leg 1 and return the
    /// pi coordinates of the remaining leg.  The closure sees pi-basis
    /// monomial indices.
    pub fn contract_leg1_with<F: FnMut(u32) -> Cyc>(&self, mut val: F) -> Terms {
        let mut out: Terms = BTreeMap::new();
        for (&k, c) in &self.terms {
            let (a, b) = tsplit(k);
            let v = val(a);
            if !v.is_zero() {
                add_term(&mut out, b, &v * c);
            }
        }
        out
    }

    /// Embeddings into the triple tensor power; trivial legs become the
    /// unit sum of idempotents.
    pub fn embed12(&self) -> PiTensor3 {
        self.embed_with(|a, b, t| t3key(a, b, t))
    }

    pub fn embed13(&self) -> PiTensor3 {
        self.embed_with(|a, b, t| t3key(a, t, b))
    }

    pub fn embed23(&self) -> PiTensor3 {
        self.embed_with(|a, b, t| t3key(t, a, b))
    }

    fn embed_with<F: Fn(u32, u32, u32) -> u64>(&self, place: F) -> PiTensor3 {
        let p = self.h.0.p;
        let mut terms: TTerms = BTreeMap::new();
        for (&k, c) in &self.terms {
            let (a, b) = tsplit(k);
            for t in 0..4 * p as u32 {
                terms.insert(place(a, b, pack(p, 0, 0, t)), c.clone());
            }
        }
        PiTensor3 { h: self.h.clone(), terms }
    }

    /// (Delta ox id)
    pub fn delta_leg1(&self) -> PiTensor3 {
        let mut out = PiTensor3 { h: self.h.clone(), terms: BTreeMap::new() };
        for (&k, c) in &self.terms {
            let (a, b) = tsplit(k);
            for (&dk, dc) in self.h.delta_pi_mono(a) {
                let (x, y) = tsplit(dk);
                add_term64(&mut out.terms, t3key(x, y, b), dc * c);
            }
        }
        out
    }

    /// (id ox Delta)
    pub fn delta_leg2(&self) -> PiTensor3 {
        let mut out = PiTensor3 { h: self.h.clone(), terms: BTreeMap::new() };
        for (&k, c) in &self.terms {
            let (a, b) = tsplit(k);
            for (&dk, dc) in self.h.delta_pi_mono(b) {
                let (x, y) = tsplit(dk);
                add_term64(&mut out.terms, t3key(a, x, y), dc * c);
            }
        }
        out
    }
}

fn mul_pair_into(
    h: &HAlg,
    terms: &mut TTerms,
    a1: u32,
    b1: u32,
    a2: u32,
    b2: u32,
    c: &Cyc,
) {
    let Some(pa) = h.pi_mono_mul(a1, a2) else { return };
    if pa.is_empty() {
        return;
    }
    let Some(pb) = h.pi_mono_mul(b1, b2) else { return };
    for (ma, ca) in &pa {
        let cca = ca * c;
        for (mb, cb) in &pb {
            add_term64(terms, tkey(*ma, *mb), cb * &cca);
        }
    }
}

/// Sparse triple-tensor element in pi coordinates.
#[derive(Clone, PartialEq)]
pub struct PiTensor3 {
    pub h: HAlg,
    pub terms: TTerms,
}

impl fmt::Debug for PiTensor3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PiTensor3({} terms)", self.terms.len())
    }
}

impl PiTensor3 {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn sub(&self, o: &PiTensor3) -> PiTensor3 {
        let mut terms = self.terms.clone();
        for (&k, c) in &o.terms {
            add_term64(&mut terms, k, -c);
        }
        PiTensor3 { h: self.h.clone(), terms }
    }

    pub fn mul(&self, o: &PiTensor3) -> PiTensor3 {
        use std::collections::HashMap;
        let h = &self.h;
        let p = h.0.p;
        let t_of = |m: u32| unpack(p, m).2;
        let mut terms: TTerms = BTreeMap::new();
        let tri = |f: &dyn Fn(u32) -> u32, k: u64| {
            let (a, b, c) = t3split(k);
            t3key(f(a), f(b), f(c))
        };
        if self.terms.len() <= o.terms.len() {
            let mut idx: HashMap<u64, Vec<u64>> = HashMap::new();
            for &k in self.terms.keys() {
                idx.entry(tri(&t_of, k)).or_default().push(k);
            }
            let bucket = |m: u32| h.pi_bucket(m);
            for (&k2, c2) in &o.terms {
                let Some(lefts) = idx.get(&tri(&bucket, k2)) else { continue };
                for &k1 in lefts {
                    mul3_pair_into(h, &mut terms, k1, k2, &(&self.terms[&k1] * c2));
                }
            }
        } else {
            let bucket = |m: u32| h.pi_bucket(m);
            let mut idx: HashMap<u64, Vec<u64>> = HashMap::new();
            for &k in o.terms.keys() {
                idx.entry(tri(&bucket, k)).or_default().push(k);
            }
            for (&k1, c1) in &self.terms {
                let Some(rights) = idx.get(&tri(&t_of, k1)) else { continue };
                for &k2 in rights {
                    mul3_pair_into(h, &mut terms, k1, k2, &(c1 * &o.terms[&k2]));
                }
            }
        }
        PiTensor3 { h: h.clone(), terms }
    }
}

fn mul3_pair_into(h: &HAlg, terms: &mut TTerms, k1: u64, k2: u64, c: &Cyc) {
    let (a1, b1, c1) = t3split(k1);
    let (a2, b2, c2) = t3split(k2);
    let Some(pa) = h.pi_mono_mul(a1, a2) else { return };
    if pa.is_empty() {
        return;
    }
    let Some(pb) = h.pi_mono_mul(b1, b2) else { return };
    if pb.is_empty() {
        return;
    }
    let Some(pc) = h.pi_mono_mul(c1, c2) else { return };
    for (ma, ca) in &pa {
        let cca = ca * c;
        for (mb, cb) in &pb {
            let ccb = cb * &cca;
            for (mc, cc) in &pc {
                add_term64(terms, t3key(*ma, *mb, *mc), cc * &ccb);
            }
        }
    }
}

/// Dense linear form on Uq (the 2p^3-dimensional subalgebra).
#[derive(Clone, PartialEq)]
pub struct LinForm {
    pub h: HAlg,
    pub values: Vec<Cyc>,
}

impl LinForm {
    /// Value on an extension monomial; odd half-powers of K are outside
    /// the domain and evaluate to an error.
    pub fn eval_mono(&self, m: u32) -> Cyc {
        match self.h.uq_index_of(m) {
            Some(idx) => self.values[idx].clone(),
            None => panic!("linear form evaluated outside Uq"),
        }
    }

    /// Value on a pi-basis monomial, extending by zero on the odd part
    /// of the extension.  Pairing this leg-wise against an even tensor
    /// agrees with the PBW contraction.
    pub fn eval_pi_mono(&self, m: u32) -> Cyc {
        let h = &self.h;
        let p = h.0.p;
        let ctx = h.ctx();
        let (i, j, t) = unpack(p, m);
        let n = 4 * p as i64;
        let inv4p = Rat::new(1.into(), (4 * p).into());
        let mut acc = ctx.zero();
        for nn in (0..4 * p as u32).step_by(2) {
            let v = self.eval_mono(pack(p, i, j, nn));
            if !v.is_zero() {
                acc += &ctx.mul_zeta(&v, (-(t as i64) * nn as i64).rem_euclid(n));
            }
        }
        acc.scale(&inv4p)
    }

    pub fn eval(&self, x: &AlgElem) -> Cyc {
        let mut acc = self.h.ctx().zero();
        for (&m, c) in &x.terms {
            let v = self.eval_mono(m);
            if !v.is_zero() {
                acc += &(&v * c);
            }
        }
        acc
    }

    pub fn add(&self, o: &LinForm) -> LinForm {
        LinForm {
            h: self.h.clone(),
            values: self.values.iter().zip(&o.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &LinForm) -> LinForm {
        LinForm {
            h: self.h.clone(),
            values: self.values.iter().zip(&o.values).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Cyc) -> LinForm {
        LinForm {
            h: self.h.clone(),
            values: self.values.iter().map(|x| x * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|x| x.is_zero())
    }

    /// Convolution product (psi phi)(x) = psi(x') phi(x'').
    pub fn convolve(&self, o: &LinForm) -> LinForm {
        let h = &self.h;
        let ctx = h.ctx();
        let mut values = vec![ctx.zero(); h.dim_uq()];
        for idx in 0..h.dim_uq() {
            let m = h.ext_index_of_uq(idx);
            let mut acc = ctx.zero();
            for (&k, c) in h.delta_mono(m) {
                let (a, b) = tsplit(k);
                let va = self.eval_mono(a);
                if va.is_zero() {
                    continue;
                }
                let vb = o.eval_mono(b);
                if vb.is_zero() {
                    continue;
                }
                acc += &(&(&va * &vb) * c);
            }
            values[idx] = acc;
        }
        LinForm { h: h.clone(), values }
    }

    /// psi o S.
    pub fn dual_antipode(&self) -> LinForm {
        let h = &self.h;
        let mut values = vec![h.ctx().zero(); h.dim_uq()];
        for (idx, slot) in values.iter_mut().enumerate() {
            let m = h.ext_index_of_uq(idx);
            let s = h.mono_elem(m).antipode();
            *slot = self.eval(&s);
        }
        LinForm { h: h.clone(), values }
    }

    /// The sandwich shift psi(a ? b).
    pub fn shift(&self, a: &AlgElem, b: &AlgElem) -> LinForm {
        let h = &self.h;
        let mut values = vec![h.ctx().zero(); h.dim_uq()];
        for (idx, slot) in values.iter_mut().enumerate() {
            let m = h.ext_index_of_uq(idx);
            let x = a.mul(&h.mono_elem(m)).mul(b);
            *slot = self.eval(&x);
        }
        LinForm { h: h.clone(), values }
    }

    /// psi^a = psi(a ?).
    pub fn shift_left(&self, a: &AlgElem) -> LinForm {
        self.shift(a, &self.h.one())
    }

    /// psi(? a) (right translation, used by the Heisenberg action).
    pub fn shift_right(&self, a: &AlgElem) -> LinForm {
        self.shift(&self.h.one(), a)
    }

    /// Is the form symmetric?  psi([g, m]) = 0 for the generators g and
    /// all basis monomials m is equivalent to full symmetry.
    pub fn is_symmetric(&self) -> bool {
        let h = &self.h;
        let gens = [h.e(), h.f(), h.k(1)];
        for g in &gens {
            for idx in 0..h.dim_uq() {
                let m = h.mono_elem(h.ext_index_of_uq(idx));
                if !self.eval(&g.commutator(&m)).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

// --- expression parser for the CLI ---

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    E,
    F,
    K,
    Khalf,
    Num(Rat),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, String> {
    let mut out = vec![];
    let bytes: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            'E' => {
                out.push((i, Tok::E));
                i += 1;
            }
            'F' => {
                out.push((i, Tok::F));
                i += 1;
            }
            'K' => {
                if s[i..].starts_with("Khalf") {
                    out.push((i, Tok::Khalf));
                    i += 5;
                } else {
                    out.push((i, Tok::K));
                    i += 1;
                }
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let num: num_bigint::BigInt = s[start..i].parse().unwrap();
                let mut den = num_bigint::BigInt::one();
                if i < bytes.len() && bytes[i] == '/' {
                    let dstart = i + 1;
                    let mut j = dstart;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == dstart {
                        return Err(format!("position {i}: expected digits after '/'"));
                    }
                    den = s[dstart..j].parse().unwrap();
                    if den.is_zero() {
                        return Err(format!("position {i}: zero denominator"));
                    }
                    i = j;
                }
                out.push((start, Tok::Num(Rat::new(num, den))));
            }
            _ => return Err(format!("position {i}: unexpected character '{c}'")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    h: &'a HAlg,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<AlgElem, String> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<AlgElem, String> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.next();
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<AlgElem, String> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.next();
            let mut negate = false;
            if let Some(Tok::Minus) = self.peek() {
                self.next();
                negate = true;
            }
            let Some((pos, Tok::Num(n))) = self.next() else {
                return Err("expected integer exponent after '^'".to_string());
            };
            if !n.is_integer() {
                return Err(format!("position {pos}: exponent must be an integer"));
            }
            let mut k: i64 = n
                .to_integer()
                .try_into()
                .map_err(|_| format!("position {pos}: exponent too large"))?;
            if negate {
                k = -k;
            }
            if k < 0 {
                let inv = base.inv().map_err(|e| format!("position {pos}: {e}"))?;
                return Ok(inv.pow_usize((-k) as usize));
            }
            return Ok(base.pow_usize(k as usize));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<AlgElem, String> {
        match self.next() {
            Some((_, Tok::E)) => Ok(self.h.e()),
            Some((_, Tok::F)) => Ok(self.h.f()),
            Some((_, Tok::K)) => Ok(self.h.k(1)),
            Some((_, Tok::Khalf)) => Ok(self.h.khalf(1)),
            Some((_, Tok::Num(r))) => Ok(self.h.scalar(self.h.ctx().from_rat(r))),
            Some((_, Tok::Minus)) => Ok(self.factor()?.neg()),
            Some((pos, Tok::LParen)) => {
                let inner = self.expr()?;
                match self.next() {
                    Some((_, Tok::RParen)) => Ok(inner),
                    _ => Err(format!("position {pos}: unclosed parenthesis")),
                }
            }
            Some((pos, t)) => Err(format!("position {pos}: unexpected token {t:?}")),
            None => Err("unexpected end of expression".to_string()),
        }
    }
}

/// Parse an algebra expression over tokens E, F, K, Khalf, rationals,
/// + - * ^ and parentheses.
pub fn parse_expr(h: &HAlg, s: &str) -> Result<AlgElem, String> {
    let toks = lex(s)?;
    let mut p = Parser { h, toks, pos: 0 };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        let (pos, t) = &p.toks[p.pos];
        return Err(format!("position {pos}: trailing token {t:?}"));
    }
    Ok(out)
}
