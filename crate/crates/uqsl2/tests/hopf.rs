use uqsl2::cyclo::{rat_i64, Ctx};
use uqsl2::hopf::{parse_expr, AlgElem, HAlg};

fn halg(p: usize) -> HAlg {
    HAlg::new(&Ctx::new(p).unwrap())
}

/// Deterministic pseudo-random element with small integer coefficients.
fn pseudo_random(h: &HAlg, seed: u64, nterms: usize) -> AlgElem {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as i64
    };
    let mut acc = h.zero();
    let p = h.p() as i64;
    for _ in 0..nterms {
        let i = (next() % p).unsigned_abs() as u32;
        let j = (next() % p).unsigned_abs() as u32;
        let l = next() % (4 * p);
        let c = next() % 9 - 4;
        acc = acc.add(&h.mono(i, j, l).scale(&h.ctx().from_i64(c)));
    }
    acc
}

#[test]
fn dimensions() {
    for p in [2usize, 3, 5] {
        let h = halg(p);
        assert_eq!(h.dim_uq(), 2 * p * p * p);
        assert_eq!(h.dim_ext(), 4 * p * p * p);
        assert_eq!(h.uq_indices().len(), 2 * p * p * p);
        assert_eq!(h.ext_indices().len(), 4 * p * p * p);
    }
}

#[test]
fn defining_relations() {
    for p in [2usize, 3, 4, 5] {
        let h = halg(p);
        let ctx = h.ctx();
        let (e, f, k) = (h.e(), h.f(), h.k(1));
        // unit
        let x = pseudo_random(&h, 7, 6);
        assert_eq!(h.one().mul(&x), x);
        assert_eq!(x.mul(&h.one()), x);
        // nilpotency and K order
        assert!(h.mono(p as u32 - 1, 0, 0).mul(&e).is_zero());
        assert!(h.mono(0, p as u32 - 1, 0).mul(&f).is_zero());
        assert_eq!(h.k(2 * p as i64), h.one());
        assert_eq!(h.khalf(4 * p as i64), h.one());
        // K E K^{-1} = q^2 E
        assert_eq!(k.mul(&e).mul(&h.k(-1)), e.scale(&ctx.q_pow(2)));
        assert_eq!(k.mul(&f).mul(&h.k(-1)), f.scale(&ctx.q_pow(-2)));
        // K^{1/2} E = q E K^{1/2}
        assert_eq!(h.khalf(1).mul(&e), e.mul(&h.khalf(1)).scale(&ctx.q_pow(1)));
        assert_eq!(h.khalf(1).mul(&f), f.mul(&h.khalf(1)).scale(&ctx.q_pow(-1)));
        // EF - FE = (K - K^{-1}) / qhat
        let comm = e.mul(&f).sub(&f.mul(&e));
        let rhs = h.k(1).sub(&h.k(-1)).scale(&ctx.qhat().inv().unwrap());
        assert_eq!(comm, rhs);
        // associativity on random elements
        let (a, b, c) = (
            pseudo_random(&h, 1, 5),
            pseudo_random(&h, 2, 5),
            pseudo_random(&h, 3, 5),
        );
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        // even K-powers are closed under multiplication
        let u = AlgElem::from_uq_vector(&h, &pseudo_random(&h, 4, 6).mul(&h.k(1)).uq_vector().unwrap_or_else(|| vec![ctx.zero(); h.dim_uq()]));
        let _ = u;
    }
}

#[test]
fn subalgebra_closed() {
    let h = halg(3);
    let a = pseudo_random(&h, 11, 6);
    let b = pseudo_random(&h, 12, 6);
    // project both onto even part, then multiply
    let even = |x: &AlgElem| {
        let mut acc = h.zero();
        for (&m, c) in &x.terms {
            if h.unpack(m).2 % 2 == 0 {
                acc = acc.add(&h.mono_elem(m).scale(c));
            }
        }
        acc
    };
    let (ea, eb) = (even(&a), even(&b));
    assert!(ea.in_uq() && eb.in_uq());
    assert!(ea.mul(&eb).in_uq());
}

#[test]
fn hopf_axioms() {
    for p in [2usize, 3] {
        let h = halg(p);
        let gens = [h.e(), h.f(), h.khalf(1), h.k(1)];
        let mut samples: Vec<AlgElem> = gens.to_vec();
        for s in 0..20 {
            samples.push(pseudo_random(&h, 100 + s, 4));
        }
        for x in &samples {
            // coassociativity
            let d = x.coproduct();
            assert_eq!(d.delta_leg1(), d.delta_leg2());
            // counit axioms
            assert_eq!(d.counit_leg1(), *x);
            assert_eq!(d.counit_leg2(), *x);
            // antipode axiom m(S ox id)Delta = eta eps
            let lhs = d.antipode_leg1().fold_multiply();
            assert_eq!(lhs, h.scalar(x.counit()));
            let rhs = d.antipode_leg2().fold_multiply();
            assert_eq!(rhs, h.scalar(x.counit()));
            // S^{-1} really inverts S
            assert_eq!(x.antipode().antipode_inv(), *x);
        }
        // Delta, eps are algebra maps; S is an anti-map
        for s in 0..6 {
            let a = pseudo_random(&h, 200 + s, 4);
            let b = pseudo_random(&h, 300 + s, 4);
            let ab = a.mul(&b);
            assert_eq!(ab.coproduct(), a.coproduct().mul(&b.coproduct()));
            assert_eq!(ab.counit(), &a.counit() * &b.counit());
            assert_eq!(ab.antipode(), b.antipode().mul(&a.antipode()));
        }
    }
}

#[test]
fn grouplike_k() {
    let h = halg(3);
    assert_eq!(h.k(1).coproduct(), h.tensor(&h.k(1), &h.k(1)));
    assert_eq!(h.k(1).antipode(), h.k(-1));
    assert_eq!(h.khalf(1).antipode(), h.khalf(-1));
    assert_eq!(h.k(1).counit(), h.ctx().one());
    assert_eq!(h.e().counit(), h.ctx().zero());
    assert_eq!(h.f().counit(), h.ctx().zero());
    // pinned coproducts
    assert_eq!(
        h.e().coproduct(),
        h.tensor(&h.e(), &h.k(1)).add(&h.tensor(&h.one(), &h.e()))
    );
    assert_eq!(
        h.f().coproduct(),
        h.tensor(&h.k(-1), &h.f()).add(&h.tensor(&h.f(), &h.one()))
    );
    assert_eq!(h.e().antipode(), h.e().mul(&h.k(-1)).neg());
    assert_eq!(h.f().antipode(), h.k(1).mul(&h.f()).neg());
}

#[test]
fn antipode_square_is_pivot_conjugation() {
    for p in [2usize, 3, 4] {
        let h = halg(p);
        let g = h.k(p as i64 + 1);
        let ginv = h.k(-(p as i64 + 1));
        for x in [h.e(), h.f(), h.khalf(1), pseudo_random(&h, 5, 6)] {
            let s2 = x.antipode().antipode();
            assert_eq!(s2, g.mul(&x).mul(&ginv));
        }
        // S^2(E) = q^2 E
        assert_eq!(h.e().antipode().antipode(), h.e().scale(&h.ctx().q_pow(2)));
    }
}

#[test]
fn tensor_ops() {
    let h = halg(2);
    let t = h.tensor(&h.e(), &h.f());
    assert_eq!(t.flip(), h.tensor(&h.f(), &h.e()));
    let one = h.tensor_one();
    assert_eq!(one.inverse().unwrap(), one);
    let kk = h.tensor(&h.k(1), &h.khalf(1));
    assert_eq!(kk.inverse().unwrap(), h.tensor(&h.k(-1), &h.khalf(-1)));
    assert_eq!(kk.mul(&kk.inverse().unwrap()), one);
}

#[test]
fn dual_ops() {
    let h = halg(2);
    let eps = h.counit_form();
    let psi = {
        // arbitrary dense form
        let mut f = h.lin_zero();
        for (i, v) in f.values.iter_mut().enumerate() {
            *v = h.ctx().from_i64((i as i64 * 7) % 5 - 2);
        }
        f
    };
    assert_eq!(eps.convolve(&psi), psi);
    assert_eq!(psi.convolve(&eps), psi);
    assert_eq!(psi.shift(&h.one(), &h.one()), psi);
    // shift by invertible then its inverse
    let a = h.k(1).mul(&h.one().add(&h.e())); // K(1+E), invertible
    let ainv = a.inv().unwrap();
    assert_eq!(a.mul(&ainv), h.one());
    assert_eq!(psi.shift_left(&a).shift_left(&ainv), psi);
    // counit is symmetric
    assert!(eps.is_symmetric());
}

#[test]
fn pi_basis_roundtrip_and_products() {
    for p in [2usize, 3] {
        let h = halg(p);
        let a = pseudo_random(&h, 21, 7);
        let b = pseudo_random(&h, 22, 7);
        // conversion round trip
        assert_eq!(h.from_pi(&h.to_pi(&a)), a);
        assert_eq!(h.from_pi(&h.one_pi()), h.one());
        // tensor products agree with the PBW route
        let tab = h.tensor(&a, &b);
        let pab = h.pi_tensor(&h.to_pi(&a), &h.to_pi(&b));
        assert_eq!(pab.to_tensor(), tab);
        assert_eq!(h.tensor_to_pi(&tab), pab);
        // bucketed multiplication agrees with PBW multiplication
        let c = pseudo_random(&h, 23, 7);
        let d = pseudo_random(&h, 24, 7);
        let tcd = h.tensor(&c, &d);
        let lhs = pab.mul(&h.tensor_to_pi(&tcd));
        assert_eq!(lhs.to_tensor(), tab.mul(&tcd));
        // identity behaves
        assert_eq!(h.pi_tensor_one().mul(&pab), pab);
        assert_eq!(pab.mul(&h.pi_tensor_one()), pab);
        // coproduct in pi coordinates
        assert_eq!(h.coproduct_pi(&h.to_pi(&a)).to_tensor(), a.coproduct());
        // triple products agree
        let l3 = pab.embed12().mul(&h.tensor_to_pi(&tcd).embed23());
        let r3 = tab.embed12().mul(&tcd.embed23());
        // compare via a further product against a pi-side element to stay
        // in one representation: subtract after converting the pi side
        let back = uqsl2::hopf::PiTensor {
            h: h.clone(),
            terms: l3.terms.clone(),
        };
        let _ = back; // direct key comparison below
        // convert the PBW triple to pi and compare keys exactly
        let mut want = h.pi_tensor_zero().embed12();
        want.terms.clear();
        for (&k, cc) in &r3.terms {
            // expand each leg
            let (ma, mb, mc) = {
                let a = (k >> 40) as u32;
                let b = ((k >> 20) & 0xfffff) as u32;
                let c = (k & 0xfffff) as u32;
                (a, b, c)
            };
            let ea = h.to_pi(&h.mono_elem(ma));
            let eb = h.to_pi(&h.mono_elem(mb));
            let ec = h.to_pi(&h.mono_elem(mc));
            for (&ka, ca) in &ea {
                for (&kb, cb) in &eb {
                    for (&kc, ccc) in &ec {
                        let key = ((ka as u64) << 40) | ((kb as u64) << 20) | kc as u64;
                        let add = &(&(ca * cb) * ccc) * cc;
                        want.terms
                            .entry(key)
                            .and_modify(|x| *x = &*x + &add)
                            .or_insert(add);
                    }
                }
            }
        }
        want.terms.retain(|_, v| !v.is_zero());
        assert_eq!(l3.terms, want.terms);
    }
}

#[test]
fn pi_basis_even_detection() {
    let h = halg(2);
    let a = pseudo_random(&h, 31, 5).mul(&h.k(1));
    let even = {
        let mut acc = h.zero();
        for (&m, c) in &a.terms {
            if h.unpack(m).2 % 2 == 0 {
                acc = acc.add(&h.mono_elem(m).scale(c));
            }
        }
        acc
    };
    let t = h.tensor(&even, &even);
    assert!(h.tensor_to_pi(&t).in_uq());
    let odd = h.tensor(&h.khalf(1), &even);
    assert!(!h.tensor_to_pi(&odd).in_uq());
    // contraction against a form matches the PBW contraction on even tensors
    let psi = {
        let mut f = h.lin_zero();
        for (i, v) in f.values.iter_mut().enumerate() {
            *v = h.ctx().from_i64((i as i64 * 3) % 7 - 3);
        }
        f
    };
    let via_pi = h.from_pi(&h.tensor_to_pi(&t).contract_leg1_with(|m| psi.eval_pi_mono(m)));
    assert_eq!(via_pi, t.contract_leg1(&psi));
}

#[test]
fn parser() {
    let h = halg(3);
    let x = parse_expr(&h, "E*F - F*E").unwrap();
    let rhs = h.k(1).sub(&h.k(-1)).scale(&h.ctx().qhat().inv().unwrap());
    assert_eq!(x, rhs);
    let y = parse_expr(&h, "Khalf^2").unwrap();
    assert_eq!(y, h.k(1));
    let z = parse_expr(&h, "(1/2)*K^-1 + 3*E^2*F").unwrap();
    let want = h
        .k(-1)
        .scale(&h.ctx().from_rat(num_rational::BigRational::new(1.into(), 2.into())))
        .add(&h.mono(2, 1, 0).scale(&h.ctx().from_i64(3)));
    assert_eq!(z, want);
    assert!(parse_expr(&h, "E +* F").is_err());
    assert!(parse_expr(&h, "Q").is_err());
    let _ = rat_i64(1);
}
