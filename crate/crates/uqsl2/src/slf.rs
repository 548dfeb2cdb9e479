//! Symmetric linear forms on Uq, the center, the canonical central
//! elements (idempotents e_s and nilpotents w^+-_s), and the GTA basis
//! (characters chi^+-_s and pseudo-characters G_s) with a reproducible
//! normalization pipeline.
//!
//! Symmetry against K forces support on the monomials E^i F^i K^l, so
//! both SLF(Uq) and Z(Uq) are solved on that reduced coordinate set;
//! each has dimension 3p - 1.  The pseudo-characters are pinned by
//! (1) the exact form phi = mu^l(v)^{-1} mu^r(K^{p+1} ?), (2) the
//! closed-form scalar xi (with sqrt(p) realized exactly by a quadratic
//! Gauss sum), (3) the ladder G_1 chi^+_s = [s] G_s, and (4) a linear
//! solve for the single remaining unknown G_1 from the expansion of phi.

use std::collections::BTreeMap;

use crate::cyclo::{Ctx, Cyc};
use crate::hopf::{AlgElem, HAlg, LinForm};
use crate::integrals::IntegralData;
use crate::linalg::{Mat, RowReducer};
use crate::quasi::{ribbon_scalar, RibbonData};
use crate::repns::{build_pim, casimir, casimir_scalar, simple};

/// The GTA ordering: [chi^+_1 .. chi^+_p, chi^-_1 .. chi^-_p, G_1 .. G_{p-1}].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gta {
    /// chi^+_s, 1 <= s <= p
    ChiP(usize),
    /// chi^-_s, 1 <= s <= p
    ChiM(usize),
    /// G_s, 1 <= s <= p-1
    G(usize),
}

impl Gta {
    pub fn position(&self, p: usize) -> usize {
        match *self {
            Gta::ChiP(s) => s - 1,
            Gta::ChiM(s) => p + s - 1,
            Gta::G(s) => 2 * p + s - 1,
        }
    }

    pub fn all(p: usize) -> Vec<Gta> {
        let mut out: Vec<Gta> = (1..=p).map(Gta::ChiP).collect();
        out.extend((1..=p).map(Gta::ChiM));
        out.extend((1..p).map(Gta::G));
        out
    }
}

pub struct SlfSpace {
    pub h: HAlg,
    /// solved basis of SLF(Uq), dimension 3p - 1
    pub basis_raw: Vec<LinForm>,
    /// chi^+_s at index s - 1
    pub chi_plus: Vec<LinForm>,
    /// chi^-_s at index s - 1
    pub chi_minus: Vec<LinForm>,
    /// G_s at index s - 1
    pub g_forms: Vec<LinForm>,
    /// the positive square root of p, exact in Q(zeta_{4p})
    pub sqrt_p: Cyc,
    /// the normalization scalar of the b-twist action columns
    pub xi: Cyc,
    /// GTA elements expressed in the raw basis (columns), invertible
    pub change_of_basis: Mat,
}

pub struct CenterData {
    pub h: HAlg,
    /// solved basis of Z(Uq), dimension 3p - 1
    pub basis: Vec<AlgElem>,
    /// e_0 .. e_p (index = block label; e_s is the identity on the
    /// block of X^+(s) for 1 <= s <= p, e_0 on the block of X^-(p))
    pub idempotents: Vec<AlgElem>,
    /// w^+_s at index s - 1, 1 <= s <= p-1
    pub w_plus: Vec<AlgElem>,
    /// w^-_s at index s - 1
    pub w_minus: Vec<AlgElem>,
    pub casimir: AlgElem,
}

/// Packed key of the PBW monomial E^i F^j K^{l/2}.
fn mono_key(h: &HAlg, i: u32, j: u32, l: i64) -> u32 {
    *h.mono(i, j, l).terms.keys().next().unwrap()
}

/// The reduced coordinate set E^i F^i K^l (commutant of K).
fn diagonal_support(h: &HAlg) -> (Vec<u32>, BTreeMap<u32, usize>) {
    let p = h.p();
    let mut cand = vec![];
    let mut cpos = BTreeMap::new();
    for i in 0..p as u32 {
        for l in 0..2 * p as i64 {
            let key = mono_key(h, i, i, 2 * l);
            cpos.insert(key, cand.len());
            cand.push(key);
        }
    }
    (cand, cpos)
}

/// Basis of SLF(Uq) = {psi : psi(xy) = psi(yx)}, solved exactly.
pub fn solve_slf(h: &HAlg) -> Result<Vec<LinForm>, String> {
    let ctx = h.ctx();
    let p = h.p();
    let nn = h.dim_uq();
    let (cand, cpos) = diagonal_support(h);
    // psi([g, m]) = 0 for the generators g and all PBW m spans the
    // commutator constraints; the K constraint is the support reduction
    let mut rr = RowReducer::new(ctx, cand.len());
    for idx in 0..nn {
        let m = h.mono_elem(h.ext_index_of_uq(idx));
        for g in [h.e(), h.f()] {
            let comm = g.commutator(&m);
            let mut row = vec![ctx.zero(); cand.len()];
            let mut nonzero = false;
            for (&k, c) in &comm.terms {
                if let Some(&j) = cpos.get(&k) {
                    row[j] = &row[j] + c;
                    nonzero = true;
                }
            }
            if nonzero {
                rr.push(row);
            }
        }
    }
    let ns = rr.nullspace();
    if ns.len() != 3 * p - 1 {
        return Err(format!("SLF dimension {} != 3p - 1", ns.len()));
    }
    Ok(ns
        .into_iter()
        .map(|v| {
            let mut values = vec![ctx.zero(); nn];
            for (j, c) in v.into_iter().enumerate() {
                values[h.uq_index_of(cand[j]).unwrap()] = c;
            }
            LinForm { h: h.clone(), values }
        })
        .collect())
}

/// Basis of the center Z(Uq), solved exactly.
pub fn solve_center(h: &HAlg) -> Result<Vec<AlgElem>, String> {
    let ctx = h.ctx();
    let p = h.p();
    let nn = h.dim_uq();
    let (cand, _) = diagonal_support(h);
    // [K, z] = 0 is the support reduction; impose [E, z] = [F, z] = 0
    let mut rows: BTreeMap<(u8, u32), Vec<Cyc>> = BTreeMap::new();
    for (j, &mk) in cand.iter().enumerate() {
        let m = h.mono_elem(mk);
        for (gi, g) in [h.e(), h.f()].iter().enumerate() {
            let comm = g.commutator(&m);
            for (&k, c) in &comm.terms {
                let row = rows
                    .entry((gi as u8, k))
                    .or_insert_with(|| vec![ctx.zero(); cand.len()]);
                row[j] = &row[j] + c;
            }
        }
    }
    let mut rr = RowReducer::new(ctx, cand.len());
    for (_, row) in rows {
        rr.push(row);
    }
    let ns = rr.nullspace();
    if ns.len() != 3 * p - 1 {
        return Err(format!("center dimension {} != 3p - 1", ns.len()));
    }
    Ok(ns
        .into_iter()
        .map(|v| {
            let mut values = vec![ctx.zero(); nn];
            for (j, c) in v.into_iter().enumerate() {
                values[h.uq_index_of(cand[j]).unwrap()] = c;
            }
            AlgElem::from_uq_vector(h, &values)
        })
        .collect())
}

/// Express vectors in the span of a fixed independent family: picks a
/// pivot square once, inverts it, and verifies each candidate fully.
pub(crate) struct CoordSolver {
    ctx: Ctx,
    vecs: Vec<Vec<Cyc>>,
    pivots: Vec<usize>,
    inv: Mat,
}

impl CoordSolver {
    pub(crate) fn new(ctx: &Ctx, vecs: Vec<Vec<Cyc>>) -> Result<CoordSolver, String> {
        let d = vecs.len();
        let n = vecs[0].len();
        let mut rr = RowReducer::new(ctx, d);
        let mut pivots = vec![];
        for r in 0..n {
            let row: Vec<Cyc> = vecs.iter().map(|v| v[r].clone()).collect();
            if rr.push(row) {
                pivots.push(r);
                if pivots.len() == d {
                    break;
                }
            }
        }
        if pivots.len() < d {
            return Err("family is linearly dependent".to_string());
        }
        let sub = Mat::from_rows(
            ctx,
            pivots
                .iter()
                .map(|&r| vecs.iter().map(|v| v[r].clone()).collect())
                .collect(),
        );
        let inv = sub.inverse().ok_or("pivot square is singular".to_string())?;
        Ok(CoordSolver { ctx: ctx.clone(), vecs, pivots, inv })
    }

    pub(crate) fn express(&self, v: &[Cyc]) -> Option<Vec<Cyc>> {
        let rhs: Vec<Cyc> = self.pivots.iter().map(|&r| v[r].clone()).collect();
        let c = self.inv.apply(&rhs);
        for r in 0..v.len() {
            let mut acc = self.ctx.zero();
            for (k, ck) in c.iter().enumerate() {
                if !ck.is_zero() && !self.vecs[k][r].is_zero() {
                    acc += &(ck * &self.vecs[k][r]);
                }
            }
            if acc != v[r] {
                return None;
            }
        }
        Some(c)
    }
}

fn uqv(x: &AlgElem) -> Result<Vec<Cyc>, String> {
    x.uq_vector().ok_or_else(|| "element leaves Uq".to_string())
}

/// Canonical central elements: primitive idempotents by Lagrange
/// interpolation in the Casimir followed by exact Newton lifting
/// (e <- 3e^2 - 2e^3), labeled by module action; nilpotents separated
/// by which projective family they kill and scaled through the ribbon
/// element.
pub fn build_center(rib: &RibbonData) -> Result<CenterData, String> {
    let h = &rib.h;
    let ctx = h.ctx();
    let p = h.p();
    let basis = solve_center(h)?;
    let d = basis.len();
    let vecs: Result<Vec<_>, _> = basis.iter().map(uqv).collect();
    let solver = CoordSolver::new(ctx, vecs?)?;

    // multiplication matrices of the basis on itself; closure is a
    // certificate that the solved space really is the center
    let mut lmats = Vec::with_capacity(d);
    for zi in &basis {
        let mut cols = Vec::with_capacity(d);
        for zj in &basis {
            let prod = uqv(&zi.mul(zj))?;
            cols.push(
                solver
                    .express(&prod)
                    .ok_or("center is not closed under multiplication")?,
            );
        }
        // cols[j][k]: coefficient of z_k in z_i z_j; matrix rows k, cols j
        let mut a = vec![vec![ctx.zero(); d]; d];
        for (j, col) in cols.iter().enumerate() {
            for (k, c) in col.iter().enumerate() {
                a[k][j] = c.clone();
            }
        }
        lmats.push(Mat::from_rows(ctx, a));
    }

    // radical of the (commutative) center via the trace form
    let mut gram = vec![vec![ctx.zero(); d]; d];
    for i in 0..d {
        for j in i..d {
            let mut tr = ctx.zero();
            for a in 0..d {
                for b in 0..d {
                    let x = &lmats[i].a[a][b];
                    if !x.is_zero() {
                        tr += &(x * &lmats[j].a[b][a]);
                    }
                }
            }
            gram[i][j] = tr.clone();
            gram[j][i] = tr;
        }
    }
    let rad_coords = Mat::from_rows(ctx, gram).nullspace();
    if rad_coords.len() != 2 * (p - 1) {
        return Err(format!(
            "center radical has dimension {} != 2(p-1)",
            rad_coords.len()
        ));
    }
    let radical: Vec<AlgElem> = rad_coords
        .iter()
        .map(|c| {
            let mut acc = h.zero();
            for (k, ck) in c.iter().enumerate() {
                acc = acc.add(&basis[k].scale(ck));
            }
            acc
        })
        .collect();

    // block eigenvalues of the Casimir: one per block, pairwise distinct
    let cas = casimir(h);
    let mut betas: Vec<Cyc> = (1..=p).map(|s| casimir_scalar(ctx, 1, s)).collect();
    betas.push(casimir_scalar(ctx, -1, p));
    for i in 0..betas.len() {
        for j in 0..i {
            if betas[i] == betas[j] {
                return Err("Casimir block eigenvalues are not distinct".to_string());
            }
        }
    }

    let mut lifted = Vec::with_capacity(p + 1);
    for t in 0..=p {
        let mut e = h.one();
        for (u, bu) in betas.iter().enumerate() {
            if u == t {
                continue;
            }
            let denom = (&betas[t] - bu).inv()?;
            e = e.mul(&cas.sub(&h.scalar(bu.clone()))).scale(&denom);
        }
        let mut steps = 0;
        loop {
            let e2 = e.mul(&e);
            if e2.sub(&e).is_zero() {
                break;
            }
            e = e2.scale(&ctx.from_i64(3)).sub(&e2.mul(&e).scale(&ctx.from_i64(2)));
            steps += 1;
            if steps > 10 {
                return Err("idempotent lifting did not converge".to_string());
            }
        }
        lifted.push(e);
    }
    // orthogonality and completeness
    let mut total = h.zero();
    for (i, ei) in lifted.iter().enumerate() {
        total = total.add(ei);
        for ej in lifted.iter().take(i) {
            if !ei.mul(ej).is_zero() {
                return Err("idempotents are not orthogonal".to_string());
            }
        }
    }
    if !total.sub(&h.one()).is_zero() {
        return Err("idempotents do not sum to 1".to_string());
    }
    // label by module action: e_s is the identity on X^+(s), e_0 on X^-(p)
    let mut idempotents: Vec<Option<AlgElem>> = vec![None; p + 1];
    for e in lifted {
        let mut label = None;
        for s in 1..=p {
            let m = simple(h, 1, s, 1);
            if m.act(&e) == Mat::identity(ctx, m.dim) {
                label = Some(s);
                break;
            }
        }
        if label.is_none() {
            let m = simple(h, -1, p, 1);
            if m.act(&e) == Mat::identity(ctx, m.dim) {
                label = Some(0);
            }
        }
        let l = label.ok_or("idempotent fixes no simple block".to_string())?;
        if idempotents[l].is_some() {
            return Err("two idempotents claim the same block".to_string());
        }
        idempotents[l] = Some(e);
    }
    let idempotents: Vec<AlgElem> = idempotents.into_iter().map(|e| e.unwrap()).collect();

    // nilpotent directions per block, separated by the projective
    // family they annihilate, then scaled through e_s v
    let qhat = ctx.qhat();
    let mut w_plus = Vec::with_capacity(p - 1);
    let mut w_minus = Vec::with_capacity(p - 1);
    for s in 1..p {
        let es = &idempotents[s];
        // 2-dim block radical
        let mut rr = RowReducer::new(ctx, h.dim_uq());
        let mut block: Vec<AlgElem> = vec![];
        for r in &radical {
            let n = es.mul(r);
            if rr.push(uqv(&n)?) {
                block.push(n);
            }
        }
        if block.len() != 2 {
            return Err(format!("block {s} radical has dimension {}", block.len()));
        }
        let pim_p = build_pim(h, 1, s);
        let pim_m = build_pim(h, -1, p - s);
        let combo_killing = |pim: &crate::repns::ModuleData| -> Result<AlgElem, String> {
            let mut rows = vec![];
            let mats: Vec<Mat> = block.iter().map(|n| pim.act(n)).collect();
            for r in 0..pim.dim {
                for c in 0..pim.dim {
                    rows.push(vec![mats[0].a[r][c].clone(), mats[1].a[r][c].clone()]);
                }
            }
            let ns = Mat::from_rows(ctx, rows).nullspace();
            if ns.len() != 1 {
                return Err("nilpotent direction is not unique".to_string());
            }
            Ok(block[0].scale(&ns[0][0]).add(&block[1].scale(&ns[0][1])))
        };
        let wp_dir = combo_killing(&pim_m)?; // vanishes on the minus family
        let wm_dir = combo_killing(&pim_p)?;
        if pim_p.act(&wp_dir).is_zero() || pim_m.act(&wm_dir).is_zero() {
            return Err("nilpotent directions collapsed".to_string());
        }
        // e_s v - v_s e_s = qhat v_s ((p-s)/[s] w^+_s - s/[s] w^-_s)
        let vs = ribbon_scalar(ctx, s);
        let nil = es.mul(&rib.v).sub(&es.scale(&vs));
        let a = Mat::from_rows(
            ctx,
            {
                let vp = uqv(&wp_dir)?;
                let vm = uqv(&wm_dir)?;
                vp.into_iter().zip(vm).map(|(x, y)| vec![x, y]).collect()
            },
        );
        let sol = a
            .solve(&uqv(&nil)?)
            .ok_or("ribbon nilpotent part leaves the block radical")?;
        let sint = ctx.qint(s as i64);
        let lam_p = &sol[0].mul(&sint) * &(&qhat.mul(&vs) * &ctx.from_i64(p as i64 - s as i64)).inv()?;
        let lam_m = -&(&sol[1].mul(&sint) * &(&qhat.mul(&vs) * &ctx.from_i64(s as i64)).inv()?);
        let wp = wp_dir.scale(&lam_p);
        let wm = wm_dir.scale(&lam_m);
        if !wp.mul(&wp).is_zero() || !wm.mul(&wm).is_zero() || !wp.mul(&wm).is_zero() {
            return Err("nilpotents do not square to zero".to_string());
        }
        w_plus.push(wp);
        w_minus.push(wm);
    }

    Ok(CenterData {
        h: h.clone(),
        basis,
        idempotents,
        w_plus,
        w_minus,
        casimir: cas,
    })
}

/// The positive square root of p inside Q(zeta_{4p}), realized by the
/// quadratic Gauss sum sum_n zeta^{n^2} = 2(1+i) sqrt(p).
pub fn sqrt_p(ctx: &Ctx) -> Result<Cyc, String> {
    let p = ctx.p();
    let mut gauss = ctx.zero();
    for n in 0..4 * p as i64 {
        gauss += &ctx.zeta_pow(n * n);
    }
    let two_one_plus_i = (&ctx.one() + &ctx.i_unit()).scale(&crate::cyclo::rat_i64(2));
    let root = gauss.mul(&two_one_plus_i.inv()?);
    if root.mul(&root) != ctx.from_i64(p as i64) {
        return Err("Gauss sum did not produce sqrt(p)".to_string());
    }
    // positivity of the chosen branch, checked numerically
    let emb = root.embed(64);
    if emb.re.lo <= num_rational::BigRational::from_integer(0.into()) {
        return Err("Gauss sum branch is not the positive root".to_string());
    }
    Ok(root)
}

/// The closed-form normalization scalar:
/// xi^{-1} = -(1-i) sqrt(p) qhat^{p-1} [p-1]! q^{-(p-3)/2},
/// equivalently (-1)^p (1-i) p sqrt(p) zeta^{-(p^2-3)} by the product
/// formula [p-1]! qhat^{p-1} = (-1)^{p-1} p zeta^{-p(p-1)}.
pub fn xi_scalar(ctx: &Ctx) -> Result<Cyc, String> {
    let p = ctx.p() as i64;
    let root = sqrt_p(ctx)?;
    let one_minus_i = &ctx.one() - &ctx.i_unit();
    let mut inv = one_minus_i.mul(&root);
    inv = inv.mul(&ctx.qhat().pow(p - 1));
    inv = inv.mul(&ctx.qfact(p - 1)?);
    inv = inv.mul(&ctx.qhalf_pow(-(p - 3)));
    inv = -&inv;
    inv.inv()
}

pub fn sign_pow(base: i64, e: i64) -> i64 {
    if base == 1 || e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// v acts on the simple with label (eps, s) by this scalar.
pub fn ribbon_scalar_eps(ctx: &Ctx, eps: i64, s: usize) -> Cyc {
    let p = ctx.p();
    if eps == 1 {
        ribbon_scalar(ctx, s)
    } else {
        ribbon_scalar(ctx, p - s)
    }
}

/// Closed-form column of the a-twist action on the GTA basis.
pub fn va_inv_column(ctx: &Ctx, which: Gta) -> Vec<Cyc> {
    let p = ctx.p();
    let mut col = vec![ctx.zero(); 3 * p - 1];
    match which {
        Gta::ChiP(s) => {
            col[Gta::ChiP(s).position(p)] = ribbon_scalar_eps(ctx, 1, s).inv().unwrap();
        }
        Gta::ChiM(s) => {
            col[Gta::ChiM(s).position(p)] = ribbon_scalar_eps(ctx, -1, s).inv().unwrap();
        }
        Gta::G(s) => {
            let vi = ribbon_scalar(ctx, s).inv().unwrap();
            let qhat = ctx.qhat();
            let si = ctx.qint(s as i64).inv().unwrap();
            col[Gta::G(s).position(p)] = vi.clone();
            col[Gta::ChiP(s).position(p)] =
                -&vi.mul(&qhat).mul(&si).mul(&ctx.from_i64(p as i64 - s as i64));
            col[Gta::ChiM(p - s).position(p)] =
                vi.mul(&qhat).mul(&si).mul(&ctx.from_i64(s as i64));
        }
    }
    col
}

/// Closed-form column of the b-twist action on the GTA basis, up to
/// the overall scalar xi.
pub fn vb_inv_column(ctx: &Ctx, which: Gta, xi: &Cyc) -> Vec<Cyc> {
    let p = ctx.p();
    let mut col = vec![ctx.zero(); 3 * p - 1];
    match which {
        Gta::ChiP(s) | Gta::ChiM(s) => {
            let eps: i64 = if matches!(which, Gta::ChiP(_)) { 1 } else { -1 };
            let si = s as i64;
            let qexp = ctx.q_pow(-(si * si - 1));
            // chi part: scalar a, G part: scalar b
            let a = xi
                .scale(&crate::cyclo::rat_i64(eps * sign_pow(-eps, p as i64 - 1) * si))
                .mul(&qexp);
            let b = xi
                .scale(&crate::cyclo::rat_i64(eps * sign_pow(-1, si)))
                .mul(&qexp);
            for l in 1..p {
                let c = a
                    .scale(&crate::cyclo::rat_i64(sign_pow(-1, si) * sign_pow(-eps, (p - l) as i64)))
                    .mul(&(&ctx.q_pow((l * s) as i64) + &ctx.q_pow(-((l * s) as i64))));
                col[Gta::ChiP(l).position(p)] = &col[Gta::ChiP(l).position(p)] + &c;
                col[Gta::ChiM(p - l).position(p)] = &col[Gta::ChiM(p - l).position(p)] + &c;
            }
            col[Gta::ChiP(p).position(p)] = &col[Gta::ChiP(p).position(p)] + &a;
            let cm = a.scale(&crate::cyclo::rat_i64(sign_pow(-eps, p as i64) * sign_pow(-1, si)));
            col[Gta::ChiM(p).position(p)] = &col[Gta::ChiM(p).position(p)] + &cm;
            for j in 1..p {
                let c = b
                    .scale(&crate::cyclo::rat_i64(sign_pow(-eps, j as i64 + 1)))
                    .mul(&ctx.qint(j as i64))
                    .mul(&ctx.qint((j * s) as i64));
                col[Gta::G(j).position(p)] = &col[Gta::G(j).position(p)] + &c;
            }
        }
        Gta::G(s) => {
            let si = s as i64;
            let qhat = ctx.qhat();
            let c0 = xi
                .scale(&crate::cyclo::rat_i64(sign_pow(-1, si) * p as i64))
                .mul(&ctx.q_pow(-(si * si - 1)))
                .mul(&qhat)
                .mul(&ctx.qint(si).inv().unwrap());
            for j in 1..p {
                let base = c0
                    .scale(&crate::cyclo::rat_i64(sign_pow(-1, j as i64 + 1)))
                    .mul(&ctx.qint((j * s) as i64));
                col[Gta::G(j).position(p)] =
                    &col[Gta::G(j).position(p)] + &base.mul(&ctx.qint(j as i64)).scale(&crate::cyclo::rat_i64(2));
                col[Gta::ChiP(j).position(p)] = &col[Gta::ChiP(j).position(p)]
                    - &base.mul(&qhat).mul(&ctx.from_i64(p as i64 - j as i64));
                col[Gta::ChiM(p - j).position(p)] = &col[Gta::ChiM(p - j).position(p)]
                    + &base.mul(&qhat).mul(&ctx.from_i64(j as i64));
            }
        }
    }
    col
}

impl SlfSpace {
    pub fn dim(&self) -> usize {
        3 * self.h.p() - 1
    }

    /// GTA elements in order.
    pub fn gta(&self) -> Vec<&LinForm> {
        self.chi_plus
            .iter()
            .chain(&self.chi_minus)
            .chain(&self.g_forms)
            .collect()
    }

    /// Expand a symmetric form in the GTA basis.
    pub fn expand_gta(&self, psi: &LinForm) -> Option<Vec<Cyc>> {
        let ctx = self.h.ctx();
        let gta = self.gta();
        let rows: Vec<Vec<Cyc>> = (0..self.h.dim_uq())
            .map(|r| gta.iter().map(|f| f.values[r].clone()).collect())
            .collect();
        Mat::from_rows(ctx, rows).solve(&psi.values)
    }

    /// Build the LinForm with the given GTA coordinates.
    pub fn from_gta(&self, coords: &[Cyc]) -> LinForm {
        let mut acc = self.h.lin_zero();
        for (f, c) in self.gta().iter().zip(coords) {
            acc = acc.add(&f.scale(c));
        }
        acc
    }

    pub fn build(rib: &RibbonData, ints: &IntegralData) -> Result<SlfSpace, String> {
        let h = &rib.h;
        let ctx = h.ctx();
        let p = h.p();
        let basis_raw = solve_slf(h)?;
        let d = basis_raw.len();

        let chi_plus: Vec<LinForm> =
            (1..=p).map(|s| simple(h, 1, s, 1).character()).collect();
        let chi_minus: Vec<LinForm> =
            (1..=p).map(|s| simple(h, -1, s, 1).character()).collect();
        if chi_plus[0].sub(&h.counit_form()).is_zero() == false {
            return Err("chi^+_1 is not the counit".to_string());
        }

        let root = sqrt_p(ctx)?;
        let xi = xi_scalar(ctx)?;

        // Pin G_1 from the b-twist action on the characters.  For a
        // character chi the form (phi_{v^{-1}} chi^v)^{v^{-1}} is exact
        // data from the integrals, and its closed-form expansion has a
        // known chi part plus sum_j c_j G_j; with the ladder
        // G_j = G_1 chi^+_j / [j] each character column yields linear
        // equations "G_1 * X = rest".  A single column is rank
        // deficient for p > 2, so all 2p character columns are stacked.
        let nn = h.dim_uq();
        let conv: Vec<Vec<LinForm>> = basis_raw
            .iter()
            .map(|b| (1..p).map(|j| b.convolve(&chi_plus[j - 1])).collect())
            .collect();
        let mut rows: Vec<Vec<Cyc>> = vec![];
        let mut rhs: Vec<Cyc> = vec![];
        for eps in [1i8, -1] {
            for s in 1..=p {
                let which = if eps == 1 { Gta::ChiP(s) } else { Gta::ChiM(s) };
                let col = vb_inv_column(ctx, which, &xi);
                let src = if eps == 1 { &chi_plus[s - 1] } else { &chi_minus[s - 1] };
                let lhs = ints
                    .phi_v_inv
                    .convolve(&src.shift_left(&rib.v))
                    .shift_left(&rib.v_inv);
                let mut chi_part = h.lin_zero();
                for t in 1..=p {
                    chi_part =
                        chi_part.add(&chi_plus[t - 1].scale(&col[Gta::ChiP(t).position(p)]));
                    chi_part =
                        chi_part.add(&chi_minus[t - 1].scale(&col[Gta::ChiM(t).position(p)]));
                }
                let rest = lhs.sub(&chi_part);
                let cj: Vec<Cyc> = (1..p)
                    .map(|j| col[Gta::G(j).position(p)].mul(&ctx.qint(j as i64).inv().unwrap()))
                    .collect();
                for r in 0..nn {
                    let row: Vec<Cyc> = (0..d)
                        .map(|k| {
                            let mut acc = ctx.zero();
                            for (j, c) in cj.iter().enumerate() {
                                if !c.is_zero() && !conv[k][j].values[r].is_zero() {
                                    acc += &c.mul(&conv[k][j].values[r]);
                                }
                            }
                            acc
                        })
                        .collect();
                    rows.push(row);
                    rhs.push(rest.values[r].clone());
                }
            }
        }
        let amat = Mat::from_rows(ctx, rows);
        if amat.rank() != d {
            return Err("pseudo-character pinning system is underdetermined".to_string());
        }
        let sol = amat
            .solve(&rhs)
            .ok_or("pseudo-character pinning system is inconsistent")?;
        let mut g1 = h.lin_zero();
        for (b, c) in basis_raw.iter().zip(&sol) {
            g1 = g1.add(&b.scale(c));
        }
        if !g1.is_symmetric() {
            return Err("pinned G_1 is not symmetric".to_string());
        }
        // the ladder G_s = G_1 chi^+_s / [s]
        let g_forms: Vec<LinForm> = (1..p)
            .map(|s| g1.convolve(&chi_plus[s - 1]).scale(&ctx.qint(s as i64).inv().unwrap()))
            .collect();
        if !g_forms[0].sub(&g1).is_zero() {
            return Err("ladder fails at s = 1".to_string());
        }

        // change of basis: GTA coordinates of the raw basis and back
        let vecs: Vec<Vec<Cyc>> = basis_raw.iter().map(|b| b.values.clone()).collect();
        let solver = CoordSolver::new(ctx, vecs)?;
        let mut cols = vec![];
        for f in chi_plus.iter().chain(&chi_minus).chain(&g_forms) {
            cols.push(
                solver
                    .express(&f.values)
                    .ok_or("GTA element leaves the solved SLF space")?,
            );
        }
        let mut a = vec![vec![ctx.zero(); d]; d];
        for (j, colv) in cols.iter().enumerate() {
            for (k, c) in colv.iter().enumerate() {
                a[k][j] = c.clone();
            }
        }
        let change_of_basis = Mat::from_rows(ctx, a);
        if change_of_basis.inverse().is_none() {
            return Err("GTA family is not a basis".to_string());
        }

        Ok(SlfSpace {
            h: h.clone(),
            basis_raw,
            chi_plus,
            chi_minus,
            g_forms,
            sqrt_p: root,
            xi,
            change_of_basis,
        })
    }
}
