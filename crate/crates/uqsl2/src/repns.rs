//! Finite-dimensional modules: the simples X^eps(s), the projective
//! indecomposables P^eps(s), half-integer liftings, matrix coefficient
//! forms, tensor products and hom spaces.
//!
//! Simple module conventions (1 <= s <= p):
//!   K v_j = eps q^{s-1-2j} v_j,
//!   E v_j = eps [j][s-j] v_{j-1},
//!   F v_j = v_{j+1}  (v_s := 0),
//! and the two liftings act by K^{1/2} v_j = eps^{1/2} q^{(s-1-2j)/2} v_j
//! with the two choices of eps^{1/2}.
//!
//! PIMs are carved out of Steinberg tensor products X^eps(p) ox X^+(r)
//! as generalized eigenspaces of the Casimir element; this certifies
//! projectivity (summand of a projective) for free, and the flagged
//! basis (b0, x0, y0, a0) is recovered from K and K^{1/2} eigenvalues.

use crate::cyclo::{Ctx, Cyc};
use crate::hopf::{AlgElem, HAlg, LinForm, TensorElem};
use crate::linalg::{Mat, RowReducer};

#[derive(Clone, Debug, PartialEq)]
pub enum ModKind {
    Simple,
    Pim,
    Tensor,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModTag {
    pub kind: ModKind,
    pub eps: i8,
    pub s: usize,
}

/// Flagged highest-weight lines of a PIM, as coordinate vectors.
#[derive(Clone, Debug)]
pub struct Flagged {
    pub b0: Vec<Cyc>,
    pub x0: Vec<Cyc>,
    pub y0: Vec<Cyc>,
    pub a0: Vec<Cyc>,
}

#[derive(Clone)]
pub struct ModuleData {
    pub h: HAlg,
    pub dim: usize,
    pub mat_e: Mat,
    pub mat_f: Mat,
    pub mat_k: Mat,
    pub lift: Option<Mat>,
    pub tag: ModTag,
    pub flagged: Option<Flagged>,
    // cached powers: E^0..E^{p-1}, F^0..F^{p-1}, K^{1/2 * 0..4p-1}
    epow: Vec<Mat>,
    fpow: Vec<Mat>,
    khpow: Vec<Mat>,
}

impl std::fmt::Debug for ModuleData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Module({:?}, dim={})", self.tag, self.dim)
    }
}

impl ModuleData {
    pub fn new(
        h: &HAlg,
        mat_e: Mat,
        mat_f: Mat,
        mat_k: Mat,
        lift: Option<Mat>,
        tag: ModTag,
    ) -> ModuleData {
        let p = h.p();
        let dim = mat_e.rows;
        let id = Mat::identity(h.ctx(), dim);
        let mut epow = vec![id.clone()];
        for _ in 1..p {
            epow.push(epow.last().unwrap().mul(&mat_e));
        }
        let mut fpow = vec![id.clone()];
        for _ in 1..p {
            fpow.push(fpow.last().unwrap().mul(&mat_f));
        }
        let mut khpow = vec![id.clone()];
        if let Some(l) = &lift {
            for _ in 1..(4 * p) {
                khpow.push(khpow.last().unwrap().mul(l));
            }
        } else {
            for _ in 1..(2 * p) {
                khpow.push(khpow.last().unwrap().mul(&mat_k));
            }
        }
        let mut m = ModuleData {
            h: h.clone(),
            dim,
            mat_e,
            mat_f,
            mat_k,
            lift,
            tag,
            flagged: None,
            epow,
            fpow,
            khpow,
        };
        m.validate();
        m
    }

    fn validate(&mut self) {
        let h = &self.h;
        let p = h.p();
        let ctx = h.ctx();
        let q2 = ctx.q_pow(2);
        // K E K^{-1} = q^2 E and friends, E^p = F^p = 0, K^{2p} = 1
        let kinv = self
            .mat_k
            .inverse()
            .expect("K must act invertibly");
        assert_eq!(
            self.mat_k.mul(&self.mat_e).mul(&kinv),
            self.mat_e.scale(&q2),
            "module relation KEK^-1 = q^2 E fails"
        );
        assert_eq!(
            self.mat_k.mul(&self.mat_f).mul(&kinv),
            self.mat_f.scale(&ctx.q_pow(-2)),
            "module relation KFK^-1 = q^-2 F fails"
        );
        assert!(self.epow[p - 1].mul(&self.mat_e).is_zero(), "E^p != 0");
        assert!(self.fpow[p - 1].mul(&self.mat_f).is_zero(), "F^p != 0");
        let comm = self
            .mat_e
            .mul(&self.mat_f)
            .sub(&self.mat_f.mul(&self.mat_e));
        let rhs = self
            .mat_k
            .sub(&kinv)
            .scale(&ctx.qhat().inv().unwrap());
        assert_eq!(comm, rhs, "module relation [E,F] fails");
        let mut kp = Mat::identity(ctx, self.dim);
        for _ in 0..(2 * p) {
            kp = kp.mul(&self.mat_k);
        }
        assert_eq!(kp, Mat::identity(ctx, self.dim), "K^2p != 1");
        if let Some(l) = &self.lift {
            assert_eq!(l.mul(l), self.mat_k, "lift^2 != K");
            assert_eq!(
                l.mul(&self.mat_e),
                self.mat_e.mul(l).scale(&ctx.q_pow(1)),
                "lift relation with E fails"
            );
        }
    }

    /// Action matrix of a PBW monomial.
    pub fn act_mono(&self, m: u32) -> Mat {
        let (i, j, l) = self.h.unpack(m);
        let l = l as usize;
        let kh = if self.lift.is_some() {
            self.khpow[l].clone()
        } else {
            assert!(l % 2 == 0, "module without lift hit a half power of K");
            self.khpow[l / 2].clone()
        };
        self.epow[i as usize].mul(&self.fpow[j as usize]).mul(&kh)
    }

    /// Action matrix of an algebra element.
    pub fn act(&self, x: &AlgElem) -> Mat {
        let mut acc = Mat::zero(self.h.ctx(), self.dim, self.dim);
        for (&m, c) in &x.terms {
            acc = acc.add(&self.act_mono(m).scale(c));
        }
        acc
    }

    /// Action of a tensor element on self ox other, with basis index
    /// a * dim(other) + b.
    pub fn act_tensor(&self, other: &ModuleData, t: &TensorElem) -> Mat {
        let n = self.dim * other.dim;
        let mut acc = Mat::zero(self.h.ctx(), n, n);
        for (&key, c) in &t.terms {
            let a = (key >> 20) as u32;
            let b = (key & 0xfffff) as u32;
            let ma = self.act_mono(a);
            let mb = other.act_mono(b);
            acc = acc.add(&kron(&ma, &mb).scale(c));
        }
        acc
    }

    /// The matrix coefficient T^i_j as a linear form on Uq.
    pub fn matrix_coeff(&self, i: usize, j: usize) -> LinForm {
        let h = &self.h;
        let mut values = vec![h.ctx().zero(); h.dim_uq()];
        for (idx, slot) in values.iter_mut().enumerate() {
            let m = h.ext_index_of_uq(idx);
            *slot = self.act_mono(m).a[i][j].clone();
        }
        LinForm { h: h.clone(), values }
    }

    /// Character: trace form x -> tr(x on module).
    pub fn character(&self) -> LinForm {
        let h = &self.h;
        let mut values = vec![h.ctx().zero(); h.dim_uq()];
        for (idx, slot) in values.iter_mut().enumerate() {
            let m = h.ext_index_of_uq(idx);
            *slot = self.act_mono(m).trace();
        }
        LinForm { h: h.clone(), values }
    }

    /// Flip the lifting (tensor with the odd one-dimensional module):
    /// K^{1/2} gets a sign, E and F are unchanged.
    pub fn other_lift(&self) -> ModuleData {
        let lift = self
            .lift
            .as_ref()
            .expect("no lift to flip")
            .scale(&(-&self.h.ctx().one()));
        ModuleData::new(
            &self.h,
            self.mat_e.clone(),
            self.mat_f.clone(),
            self.mat_k.clone(),
            Some(lift),
            self.tag.clone(),
        )
    }
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let ctx = a.ctx.clone();
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut m = Mat::zero(&ctx, rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            if a.a[i][j].is_zero() {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    if !b.a[k][l].is_zero() {
                        m.a[i * b.rows + k][j * b.cols + l] = &a.a[i][j] * &b.a[k][l];
                    }
                }
            }
        }
    }
    m
}

/// The simple module X^eps(s), 1 <= s <= p, with the lifting selected
/// by lift_sign in {+1, -1}.
pub fn simple(h: &HAlg, eps: i8, s: usize, lift_sign: i8) -> ModuleData {
    assert!(s >= 1 && s <= h.p(), "simple module label out of range");
    assert!(eps == 1 || eps == -1);
    assert!(lift_sign == 1 || lift_sign == -1);
    let ctx = h.ctx();
    let e = ctx.from_i64(eps as i64);
    let mut mat_e = Mat::zero(ctx, s, s);
    let mut mat_f = Mat::zero(ctx, s, s);
    let mut mat_k = Mat::zero(ctx, s, s);
    let mut lift = Mat::zero(ctx, s, s);
    // eps^{1/2}: 1 or i, times the choice sign
    let eps_half = if eps == 1 { ctx.one() } else { ctx.i_unit() };
    let eps_half = eps_half.scale(&crate::cyclo::rat_i64(lift_sign as i64));
    for j in 0..s {
        let w = s as i64 - 1 - 2 * j as i64;
        mat_k.a[j][j] = &e * &ctx.q_pow(w);
        lift.a[j][j] = &eps_half * &ctx.qhalf_pow(w);
        if j + 1 < s {
            mat_f.a[j + 1][j] = ctx.one();
        }
        if j >= 1 {
            let c = &e * &(&ctx.qint(j as i64) * &ctx.qint(s as i64 - j as i64));
            mat_e.a[j - 1][j] = c;
        }
    }
    ModuleData::new(
        h,
        mat_e,
        mat_f,
        mat_k,
        Some(lift),
        ModTag { kind: ModKind::Simple, eps, s },
    )
}

/// Tensor product module via the coproduct (lift present iff both
/// factors are lifted).
pub fn tensor_module(a: &ModuleData, b: &ModuleData) -> ModuleData {
    let h = &a.h;
    let ida = Mat::identity(h.ctx(), a.dim);
    let idb = Mat::identity(h.ctx(), b.dim);
    let ka_inv = a.mat_k.inverse().unwrap();
    // D(E) = E ox K + 1 ox E, D(F) = K^{-1} ox F + F ox 1
    let mat_e = kron(&a.mat_e, &b.mat_k).add(&kron(&ida, &b.mat_e));
    let mat_f = kron(&ka_inv, &b.mat_f).add(&kron(&a.mat_f, &idb));
    let mat_k = kron(&a.mat_k, &b.mat_k);
    let lift = match (&a.lift, &b.lift) {
        (Some(la), Some(lb)) => Some(kron(la, lb)),
        _ => None,
    };
    ModuleData::new(
        h,
        mat_e,
        mat_f,
        mat_k,
        lift,
        ModTag { kind: ModKind::Tensor, eps: 0, s: 0 },
    )
}

/// Basis of Hom_{Uq}(I, J) as matrices (dim J x dim I).
pub fn hom_space(i: &ModuleData, j: &ModuleData) -> Vec<Mat> {
    let h = &i.h;
    let ctx = h.ctx();
    let unknowns = j.dim * i.dim;
    let mut rr = RowReducer::new(ctx, unknowns);
    for (gi, gj) in [
        (&i.mat_e, &j.mat_e),
        (&i.mat_f, &j.mat_f),
        (&i.mat_k, &j.mat_k),
    ] {
        // constraint: J_g Phi - Phi I_g = 0, entrywise in Phi
        for r in 0..j.dim {
            for c in 0..i.dim {
                let mut row = vec![ctx.zero(); unknowns];
                // (J_g Phi)[r][c] = sum_k J_g[r][k] Phi[k][c]
                for k in 0..j.dim {
                    if !gj.a[r][k].is_zero() {
                        row[k * i.dim + c] = &row[k * i.dim + c] + &gj.a[r][k];
                    }
                }
                // (Phi I_g)[r][c] = sum_k Phi[r][k] I_g[k][c]
                for k in 0..i.dim {
                    if !gi.a[k][c].is_zero() {
                        row[r * i.dim + k] = &row[r * i.dim + k] - &gi.a[k][c];
                    }
                }
                rr.push(row);
            }
        }
    }
    rr.nullspace()
        .into_iter()
        .map(|v| {
            let mut m = Mat::zero(ctx, j.dim, i.dim);
            for r in 0..j.dim {
                for c in 0..i.dim {
                    m.a[r][c] = v[r * i.dim + c].clone();
                }
            }
            m
        })
        .collect()
}

/// The Casimir element C = FE + (qK + q^{-1}K^{-1}) / qhat^2.
pub fn casimir(h: &HAlg) -> AlgElem {
    let ctx = h.ctx();
    let qh2_inv = ctx.qhat().mul(&ctx.qhat()).inv().unwrap();
    let kpart = h
        .k(1)
        .scale(&ctx.q_pow(1))
        .add(&h.k(-1).scale(&ctx.q_pow(-1)))
        .scale(&qh2_inv);
    h.f().mul(&h.e()).add(&kpart)
}

/// Casimir scalar on X^eps(s).
pub fn casimir_scalar(ctx: &Ctx, eps: i8, s: usize) -> Cyc {
    let qh2_inv = ctx.qhat().mul(&ctx.qhat()).inv().unwrap();
    (&ctx.q_pow(s as i64) + &ctx.q_pow(-(s as i64)))
        .scale(&crate::cyclo::rat_i64(eps as i64))
        .mul(&qh2_inv)
}

/// Submodule generated by a vector (span closure under E, F, K and the
/// lift when present).
pub fn generated_submodule(m: &ModuleData, v: &[Cyc]) -> Vec<Vec<Cyc>> {
    let ctx = m.h.ctx();
    let mut rr = RowReducer::new(ctx, m.dim);
    let mut queue = vec![v.to_vec()];
    rr.push(v.to_vec());
    let mut gens: Vec<&Mat> = vec![&m.mat_e, &m.mat_f, &m.mat_k];
    if let Some(l) = &m.lift {
        gens.push(l);
    }
    while let Some(w) = queue.pop() {
        for g in &gens {
            let img = g.apply(&w);
            if rr.push(img.clone()) {
                queue.push(img);
            }
        }
    }
    rr.rows_basis()
}

/// Build the PIM P^eps(s) (1 <= s <= p-1) with the standard lifting, as
/// the Casimir block of X^eps(p) ox X^+(p-s+1).
pub fn build_pim(h: &HAlg, eps: i8, s: usize) -> ModuleData {
    let p = h.p();
    assert!(s >= 1 && s < p);
    let ctx = h.ctx();
    let st = simple(h, eps, p, 1);
    let aux = simple(h, 1, p - s + 1, 1);
    let t = tensor_module(&st, &aux);
    // generalized eigenspace of the Casimir at the (eps, s) block value
    let cas = t.act(&casimir(h));
    let lambda = casimir_scalar(ctx, eps, s);
    let shifted = cas.sub(&Mat::identity(ctx, t.dim).scale(&lambda));
    let block_basis = shifted.pow(2 * p).nullspace();
    assert_eq!(
        block_basis.len(),
        2 * p,
        "Casimir block of the Steinberg tensor has wrong dimension"
    );
    // restrict the action to the block
    let restrict = |mat: &Mat| -> Mat {
        // solve basis * X = mat * basis (coordinates of images)
        let ctx = ctx.clone();
        let n = block_basis.len();
        let mut cols = Mat::zero(&ctx, t.dim, n);
        for (c, v) in block_basis.iter().enumerate() {
            for r in 0..t.dim {
                cols.a[r][c] = v[r].clone();
            }
        }
        let mut out = Mat::zero(&ctx, n, n);
        for (c, v) in block_basis.iter().enumerate() {
            let img = mat.apply(v);
            let coords = cols.solve(&img).expect("block not invariant");
            for r in 0..n {
                out.a[r][c] = coords[r].clone();
            }
        }
        out
    };
    let mat_e = restrict(&t.mat_e);
    let mat_f = restrict(&t.mat_f);
    let mat_k = restrict(&t.mat_k);
    let lift = restrict(t.lift.as_ref().unwrap());
    let mut pim = ModuleData::new(
        h,
        mat_e,
        mat_f,
        mat_k,
        Some(lift),
        ModTag { kind: ModKind::Pim, eps, s },
    );
    attach_flagged_basis(&mut pim);
    pim
}

/// Eigenvectors of a matrix for a given exact eigenvalue.
pub fn eigenspace(m: &Mat, lambda: &Cyc) -> Vec<Vec<Cyc>> {
    let id = Mat::identity(&m.ctx, m.rows);
    m.sub(&id.scale(lambda)).nullspace()
}

fn attach_flagged_basis(pim: &mut ModuleData) {
    let h = pim.h.clone();
    let ctx = h.ctx();
    let p = h.p() as i64;
    let (eps, s) = (pim.tag.eps, pim.tag.s as i64);
    let e_rat = crate::cyclo::rat_i64(eps as i64);
    let eps_half = if eps == 1 { ctx.one() } else { ctx.i_unit() };

    // top/socle K-eigenvalue eps q^{s-1}, middle -eps q^{p-s-1}
    let top_w = ctx.q_pow(s - 1).scale(&e_rat);
    let top_space = eigenspace(&pim.mat_k, &top_w);
    assert_eq!(top_space.len(), 2, "top/socle weight space not 2-dim");

    // a0: the unique line in the weight space killed by E.  Intersect
    // span(top_space) with ker E by solving for the coefficients.
    let img0 = pim.mat_e.apply(&top_space[0]);
    let img1 = pim.mat_e.apply(&top_space[1]);
    let mut rows = vec![];
    for r in 0..pim.dim {
        rows.push(vec![img0[r].clone(), img1[r].clone()]);
    }
    let ker = Mat::from_rows(ctx, rows).nullspace();
    assert_eq!(ker.len(), 1, "socle highest-weight line not unique");
    let comb = &ker[0];
    let mut a0 = vec![ctx.zero(); pim.dim];
    for r in 0..pim.dim {
        a0[r] = &(&comb[0] * &top_space[0][r]) + &(&comb[1] * &top_space[1][r]);
    }
    // normalize the lift: it must act on the socle line a0 by
    // eps^{1/2} q^{(s-1)/2}; the Casimir block inherits one of the two
    // liftings from the tensor product, flip if it is the other one
    let expected = &eps_half * &ctx.qhalf_pow(s - 1);
    let lift_a0 = pim.lift.as_ref().unwrap().apply(&a0);
    let nz = a0.iter().position(|x| !x.is_zero()).unwrap();
    let mu = &lift_a0[nz] * &a0[nz].inv().unwrap();
    if mu == -&expected {
        *pim = pim.other_lift();
    } else {
        assert_eq!(mu, expected, "unexpected lift eigenvalue on the socle");
    }
    let lift_a0 = pim.lift.as_ref().unwrap().apply(&a0);
    for (x, y) in lift_a0.iter().zip(&a0) {
        assert_eq!(*x, y * &expected, "lift is not scalar on the socle line");
    }

    // b0: any complement of a0 in the weight space; the lift acts on the
    // whole top weight space by the same scalar
    let mut rr = RowReducer::new(ctx, pim.dim);
    rr.push(a0.clone());
    let b0 = top_space
        .iter()
        .find(|cand| rr.push((*cand).clone()))
        .expect("no complement vector for b0")
        .clone();
    let lift_b0 = pim.lift.as_ref().unwrap().apply(&b0);
    for (x, y) in lift_b0.iter().zip(&b0) {
        assert_eq!(*x, y * &expected, "lift is not scalar on the top line");
    }

    // x0 / y0 from the lift eigenvalues +- eps^{1/2} q^{p/2} q^{(p-s-1)/2}
    let lift = pim.lift.as_ref().unwrap();
    let base = (&eps_half * &ctx.qhalf_pow(p)).mul(&ctx.qhalf_pow(p - s - 1));
    let x_space = eigenspace(lift, &base);
    let y_space = eigenspace(lift, &(-&base));
    assert_eq!(x_space.len(), 1, "x0 line not unique");
    assert_eq!(y_space.len(), 1, "y0 line not unique");

    // sanity: b0 is cyclic, so the module is generated in its top
    let gen = generated_submodule(pim, &b0);
    assert_eq!(gen.len(), pim.dim, "b0 does not generate the PIM");

    pim.flagged = Some(Flagged {
        b0,
        x0: x_space[0].clone(),
        y0: y_space[0].clone(),
        a0,
    });
}

/// L^{(+)} and L^{(-)} matrices of a lifted module: (T ox id)(R^{(+-)})
/// with R^{(+)} = R and R^{(-)} = (R')^{-1}.
/// (T ox id) of a tensor: the dim x dim matrix with algebra entries
/// sum_terms c T(a)_{ij} b.
pub fn t_leg1_matrix(m: &ModuleData, t: &TensorElem) -> Vec<Vec<AlgElem>> {
    let h = &m.h;
    let mut out = vec![vec![h.zero(); m.dim]; m.dim];
    for (&key, c) in &t.terms {
        let a = (key >> 20) as u32;
        let b = (key & 0xfffff) as u32;
        let ma = m.act_mono(a);
        for i in 0..m.dim {
            for j in 0..m.dim {
                if !ma.a[i][j].is_zero() {
                    let coeff = &ma.a[i][j] * c;
                    out[i][j] = out[i][j].add(&h.mono_elem(b).scale(&coeff));
                }
            }
        }
    }
    out
}

pub fn l_matrices(
    m: &ModuleData,
    r_plus: &TensorElem,
    r_minus: &TensorElem,
) -> (Vec<Vec<AlgElem>>, Vec<Vec<AlgElem>>) {
    assert!(m.lift.is_some());
    (t_leg1_matrix(m, r_plus), t_leg1_matrix(m, r_minus))
}
