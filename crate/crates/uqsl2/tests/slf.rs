use num_bigint::BigInt;
use num_rational::BigRational;
use uqsl2::cyclo::{Ctx, Cyc};
use uqsl2::hopf::{HAlg, LinForm};
use uqsl2::integrals::IntegralData;
use uqsl2::interval::sqrt_rational;
use uqsl2::quasi::{ribbon_scalar, RibbonData};
use uqsl2::slf::{
    build_center, ribbon_scalar_eps, solve_center, solve_slf, sqrt_p, va_inv_column,
    vb_inv_column, xi_scalar, CenterData, Gta, SlfSpace,
};

fn setup(p: usize) -> (HAlg, RibbonData, IntegralData, SlfSpace) {
    let ctx = Ctx::new(p).unwrap();
    let h = HAlg::new(&ctx);
    let rib = RibbonData::build(&h).unwrap();
    let ints = IntegralData::build(&rib).unwrap();
    let slf = SlfSpace::build(&rib, &ints).unwrap();
    (h, rib, ints, slf)
}

/// the modular coefficient a acting on forms: psi -> psi^{v^{-1}}
fn act_a(rib: &RibbonData, psi: &LinForm) -> LinForm {
    psi.shift_left(&rib.v_inv)
}

/// the modular coefficient b acting on forms: psi -> (phi_{v^{-1}} psi^v)^{v^{-1}}
fn act_b(rib: &RibbonData, ints: &IntegralData, psi: &LinForm) -> LinForm {
    ints.phi_v_inv
        .convolve(&psi.shift_left(&rib.v))
        .shift_left(&rib.v_inv)
}

#[test]
fn slf_and_center_dimensions() {
    for p in [2usize, 3, 4] {
        let ctx = Ctx::new(p).unwrap();
        let h = HAlg::new(&ctx);
        let basis = solve_slf(&h).unwrap();
        assert_eq!(basis.len(), 3 * p - 1);
        for b in &basis {
            assert!(b.is_symmetric());
        }
        let z = solve_center(&h).unwrap();
        assert_eq!(z.len(), 3 * p - 1);
        for zi in &z {
            for g in [h.e(), h.f(), h.k(1)] {
                assert!(g.commutator(zi).is_zero());
            }
        }
    }
}

#[test]
fn gta_basis_shape() {
    for p in [2usize, 3] {
        let (h, _rib, _ints, slf) = setup(p);
        assert_eq!(slf.chi_plus.len(), p);
        assert_eq!(slf.chi_minus.len(), p);
        assert_eq!(slf.g_forms.len(), p - 1);
        // chi^+_1 is the convolution unit
        assert!(slf.chi_plus[0].sub(&h.counit_form()).is_zero());
        for f in slf.gta() {
            assert!(f.is_symmetric());
            // S-invariance of every GTA element
            assert!(f.dual_antipode().sub(f).is_zero());
        }
        // round trip through the GTA coordinates
        for (k, f) in slf.gta().iter().enumerate() {
            let c = slf.expand_gta(f).unwrap();
            for (j, cj) in c.iter().enumerate() {
                assert_eq!(cj.is_zero(), j != k);
            }
            assert!(slf.from_gta(&c).sub(f).is_zero());
        }
    }
}

#[test]
fn sqrt_p_and_xi_numeric() {
    for p in [2usize, 3, 5] {
        let ctx = Ctx::new(p).unwrap();
        let root = sqrt_p(&ctx).unwrap();
        assert_eq!(root.mul(&root), ctx.from_i64(p as i64));
        // the chosen branch is the positive real root, to >= 60 bits
        let emb = root.embed(128);
        let num = sqrt_rational(&BigRational::from_integer(BigInt::from(p as i64)), 128);
        let eps = BigRational::new(BigInt::from(1), BigInt::from(1u128 << 80));
        assert!((emb.re.sub(&num)).abs_hi() < eps);
        assert!(emb.im.abs_hi() < eps);
        // xi against its closed form, with sqrt(p) fed in numerically:
        // an independent check of the branch used in the exact value.
        // rest = -(1-i) qhat^{p-1} [p-1]! q^{-(p-3)/2} is the cyclotomic
        // part of xi^{-1}, so xi * rest * sqrt(p) = 1
        let xi = xi_scalar(&ctx).unwrap();
        let rest = -&(&ctx.one() - &ctx.i_unit())
            .mul(&ctx.qhat().pow(p as i64 - 1))
            .mul(&ctx.qfact(p as i64 - 1).unwrap())
            .mul(&ctx.qhalf_pow(-(p as i64 - 3)));
        let prod = xi.mul(&rest).embed(128);
        let sqrt_civ = uqsl2::interval::CIv { re: num.clone(), im: uqsl2::interval::Iv::zero() };
        let unit = prod.mul(&sqrt_civ);
        assert!((unit.re.sub(&uqsl2::interval::Iv::point(BigRational::from_integer(BigInt::from(1))))).abs_hi() < eps);
        assert!(unit.im.abs_hi() < eps);
    }
}

#[test]
fn pinning_form_expands_as_closed_form_column() {
    for p in [2usize, 3] {
        let (h, rib, ints, slf) = setup(p);
        let ctx = h.ctx();
        // phi = mu^l(v)^{-1} mu^r(K^{p+1} ?) expands exactly as the
        // closed-form b-action column of chi^+_1
        let phi = ints
            .mu_r
            .shift_left(&h.k(p as i64 + 1))
            .scale(&ints.mu_l.eval(&rib.v).inv().unwrap());
        let col = vb_inv_column(ctx, Gta::ChiP(1), &slf.xi);
        let got = slf.expand_gta(&phi).unwrap();
        assert_eq!(got, col);
    }
}

#[test]
fn character_product_rules() {
    let (h, _rib, _ints, slf) = setup(3);
    let p = 3;
    let ctx = h.ctx();
    let chi = |eps: i64, s: usize| -> &LinForm {
        if eps == 1 {
            &slf.chi_plus[s - 1]
        } else {
            &slf.chi_minus[s - 1]
        }
    };
    for eps in [1i64, -1] {
        // chi^+_2 chi^eps_l = chi^eps_{l-1} + chi^eps_{l+1} for l < p
        for l in 1..p {
            let lhs = slf.chi_plus[1].convolve(chi(eps, l));
            let mut rhs = chi(eps, l + 1).clone();
            if l >= 2 {
                rhs = rhs.add(chi(eps, l - 1));
            }
            assert!(lhs.sub(&rhs).is_zero());
        }
        // chi^+_2 chi^eps_p = 2 chi^eps_{p-1} + 2 chi^{-eps}_1
        let lhs = slf.chi_plus[1].convolve(chi(eps, p));
        let two = ctx.from_i64(2);
        let rhs = chi(eps, p - 1).scale(&two).add(&chi(-eps, 1).scale(&two));
        assert!(lhs.sub(&rhs).is_zero());
    }
    // G part of chi^+_2 G_j: [j-1]/[j] G_{j-1} + [j+1]/[j] G_{j+1}
    for j in 1..p {
        let prod = slf.chi_plus[1].convolve(&slf.g_forms[j - 1]);
        let c = slf.expand_gta(&prod).unwrap();
        for t in 1..p {
            let want = if t + 1 == j || t == j + 1 {
                ctx.qint(t as i64)
                    .mul(&ctx.qint(j as i64).inv().unwrap())
            } else {
                ctx.zero()
            };
            assert_eq!(c[Gta::G(t).position(p)], want);
        }
    }
}

#[test]
fn ladder_is_scale_free() {
    // G_1 chi^+_s = [s] G_s holds for the solved family; combined with
    // chi^+_1 = eps this pins everything to the single unknown G_1
    for p in [2usize, 3] {
        let (h, _rib, _ints, slf) = setup(p);
        let ctx = h.ctx();
        for s in 1..p {
            let lhs = slf.g_forms[0].convolve(&slf.chi_plus[s - 1]);
            let rhs = slf.g_forms[s - 1].scale(&ctx.qint(s as i64));
            assert!(lhs.sub(&rhs).is_zero());
        }
    }
}

#[test]
fn a_action_columns() {
    for p in [2usize, 3] {
        let (h, rib, _ints, slf) = setup(p);
        let ctx = h.ctx();
        for w in Gta::all(p) {
            let src = slf.gta()[w.position(p)].clone();
            let got = slf.expand_gta(&act_a(&rib, &src)).unwrap();
            let want = va_inv_column(ctx, w);
            assert_eq!(got, want);
        }
    }
}

#[test]
fn b_action_columns() {
    for p in [2usize, 3] {
        let (h, rib, ints, slf) = setup(p);
        let ctx = h.ctx();
        for w in Gta::all(p) {
            let src = slf.gta()[w.position(p)].clone();
            let got = slf.expand_gta(&act_b(&rib, &ints, &src)).unwrap();
            let want = vb_inv_column(ctx, w, &slf.xi);
            assert_eq!(got, want, "column {w:?} at p = {p}");
        }
    }
}

fn center_setup(p: usize) -> (HAlg, RibbonData, CenterData, SlfSpace) {
    let ctx = Ctx::new(p).unwrap();
    let h = HAlg::new(&ctx);
    let rib = RibbonData::build(&h).unwrap();
    let ints = IntegralData::build(&rib).unwrap();
    let slf = SlfSpace::build(&rib, &ints).unwrap();
    let z = build_center(&rib).unwrap();
    (h, rib, z, slf)
}

#[test]
fn center_canonical_elements() {
    for p in [2usize, 3] {
        let (h, rib, z, _slf) = center_setup(p);
        let ctx = h.ctx();
        // completeness and orthogonality are certified in the builder;
        // here: the ribbon element in canonical coordinates,
        // v = sum_s v_s e_s + qhat sum_s v_s ((p-s)/[s] w^+_s - s/[s] w^-_s)
        let mut want = h.zero();
        for s in 0..=p {
            want = want.add(&z.idempotents[s].scale(&ribbon_scalar(ctx, s)));
        }
        let qhat = ctx.qhat();
        for s in 1..p {
            let vs = ribbon_scalar(ctx, s);
            let si = ctx.qint(s as i64).inv().unwrap();
            let cp = qhat.mul(&vs).mul(&si).mul(&ctx.from_i64(p as i64 - s as i64));
            let cm = qhat.mul(&vs).mul(&si).mul(&ctx.from_i64(s as i64));
            want = want.add(&z.w_plus[s - 1].scale(&cp));
            want = want.sub(&z.w_minus[s - 1].scale(&cm));
        }
        assert!(rib.v.sub(&want).is_zero());
        // nilpotency and block containment
        for s in 1..p {
            let wp = &z.w_plus[s - 1];
            let wm = &z.w_minus[s - 1];
            assert!(wp.mul(wp).is_zero());
            assert!(wm.mul(wm).is_zero());
            assert!(wp.mul(wm).is_zero());
            for t in 0..=p {
                let et = &z.idempotents[t];
                let dp = et.mul(wp);
                let dm = et.mul(wm);
                if t == s {
                    assert!(dp.sub(wp).is_zero());
                    assert!(dm.sub(wm).is_zero());
                } else {
                    assert!(dp.is_zero());
                    assert!(dm.is_zero());
                }
            }
        }
    }
}

#[test]
fn center_action_on_gta() {
    // shifting a GTA form by a canonical central element
    for p in [2usize, 3] {
        let (_h, _rib, z, slf) = center_setup(p);
        let zero = slf.h.lin_zero();
        for t in 0..=p {
            let et = &z.idempotents[t];
            for s in 1..=p {
                let want_p = if s == t { slf.chi_plus[s - 1].clone() } else { zero.clone() };
                assert!(slf.chi_plus[s - 1].shift_left(et).sub(&want_p).is_zero());
                let want_m = if p - s == t { slf.chi_minus[s - 1].clone() } else { zero.clone() };
                assert!(slf.chi_minus[s - 1].shift_left(et).sub(&want_m).is_zero());
            }
            for s in 1..p {
                let want_g = if s == t { slf.g_forms[s - 1].clone() } else { zero.clone() };
                assert!(slf.g_forms[s - 1].shift_left(et).sub(&want_g).is_zero());
            }
        }
        for t in 1..p {
            let wp = &z.w_plus[t - 1];
            let wm = &z.w_minus[t - 1];
            for s in 1..=p {
                assert!(slf.chi_plus[s - 1].shift_left(wp).is_zero());
                assert!(slf.chi_plus[s - 1].shift_left(wm).is_zero());
                assert!(slf.chi_minus[s - 1].shift_left(wp).is_zero());
                assert!(slf.chi_minus[s - 1].shift_left(wm).is_zero());
            }
            for s in 1..p {
                let gp = slf.g_forms[s - 1].shift_left(wp);
                let gm = slf.g_forms[s - 1].shift_left(wm);
                if s == t {
                    assert!(gp.sub(&slf.chi_plus[s - 1]).is_zero());
                    assert!(gm.sub(&slf.chi_minus[p - s - 1]).is_zero());
                } else {
                    assert!(gp.is_zero());
                    assert!(gm.is_zero());
                }
            }
        }
    }
}

#[test]
fn drinfeld_map_carries_slf_onto_center() {
    for p in [2usize, 3] {
        let (h, rib, z, slf) = center_setup(p);
        let ctx = h.ctx();
        // D(chi^+_1) = 1 and images of the GTA basis are central and
        // span the center
        let mut vecs: Vec<Vec<Cyc>> = vec![];
        for f in slf.gta() {
            let img = rib.drinfeld_map(f);
            for g in [h.e(), h.f(), h.k(1)] {
                assert!(g.commutator(&img).is_zero());
            }
            vecs.push(img.uq_vector().unwrap());
        }
        assert_eq!(uqsl2::linalg::span_dim(ctx, &vecs), 3 * p - 1);
        assert!(rib
            .drinfeld_map(&slf.chi_plus[0])
            .sub(&h.one())
            .is_zero());
        // the image of chi^+_2 is an affine function of the Casimir:
        // -qhat^2 C (Casimir normalization cross-check)
        if p >= 2 {
            let img = rib.drinfeld_map(&slf.chi_plus[1]);
            let want = z.casimir.scale(&-&ctx.qhat().mul(&ctx.qhat()));
            assert!(img.sub(&want).is_zero());
        }
    }
}

#[test]
fn ribbon_scalar_labels() {
    let ctx = Ctx::new(3).unwrap();
    // v acts on the simple (eps, s) by ribbon_scalar_eps; matches the
    // plus-family scalar through s <-> p - s
    for s in 1..=3usize {
        assert_eq!(ribbon_scalar_eps(&ctx, 1, s), ribbon_scalar(&ctx, s));
        assert_eq!(ribbon_scalar_eps(&ctx, -1, s), ribbon_scalar(&ctx, 3 - s));
    }
}

#[test]
fn build_at_p4() {
    let (_h, rib, ints, slf) = setup(4);
    assert_eq!(slf.gta().len(), 11);
    // spot-check one closed-form column at p = 4
    let ctx = slf.h.ctx();
    let src = slf.gta()[Gta::G(2).position(4)].clone();
    let got = slf.expand_gta(&act_b(&rib, &ints, &src)).unwrap();
    assert_eq!(got, vb_inv_column(ctx, Gta::G(2), &slf.xi));
    let got_a = slf.expand_gta(&act_a(&rib, &src)).unwrap();
    assert_eq!(got_a, va_inv_column(ctx, Gta::G(2)));
}
