use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use uqsl2::cyclo::{rat_i64, euler_phi, Ctx};
use uqsl2::interval;

#[test]
fn context_basics() {
    assert!(Ctx::new(0).is_err());
    assert!(Ctx::new(1).is_err());
    let c2 = Ctx::new(2).unwrap();
    assert_eq!(c2.phi(), 4); // phi(8)
    assert_eq!(c2.q(), c2.i_unit()); // at p=2, q is a primitive 4th root
    let c3 = Ctx::new(3).unwrap();
    assert_eq!(c3.q().pow(6), c3.one());
    assert_eq!(c3.q().pow(3), -&c3.one());
    let c5 = Ctx::new(5).unwrap();
    assert_eq!(c5.phi(), 8); // phi(20)
    assert_eq!(euler_phi(20), 8);
}

#[test]
fn field_ops() {
    for p in [2usize, 3, 5] {
        let ctx = Ctx::new(p).unwrap();
        assert_eq!(ctx.one().inv().unwrap(), ctx.one());
        // q * q^{2p-1} = 1
        assert_eq!(&ctx.q() * &ctx.q_pow(2 * p as i64 - 1), ctx.one());
        // i^2 = -1
        assert_eq!(&ctx.i_unit() * &ctx.i_unit(), -&ctx.one());
    }
    // p=3: q + q^{-1} = 2 cos(pi/3) = 1
    let c3 = Ctx::new(3).unwrap();
    assert_eq!(&c3.q() + &c3.q_pow(-1), c3.one());
}

#[test]
fn qint_values() {
    for p in [2usize, 3, 4, 5] {
        let ctx = Ctx::new(p).unwrap();
        assert_eq!(ctx.qint(1), ctx.one());
        assert!(ctx.qint(p as i64).is_zero());
        for n in 1..p as i64 {
            assert_eq!(ctx.qint(p as i64 - n), ctx.qint(n));
        }
        // recurrence [n+1] = q [n] + q^{-n}
        for n in 0..=(2 * p as i64) {
            let lhs = ctx.qint(n + 1);
            let rhs = &(&ctx.q() * &ctx.qint(n)) + &ctx.q_pow(-n);
            assert_eq!(lhs, rhs);
        }
        // defining quotient: [n] * (q - q^{-1}) = q^n - q^{-n}
        for n in -7i64..=7 {
            assert_eq!(
                &ctx.qint(n) * &ctx.qhat(),
                &ctx.q_pow(n) - &ctx.q_pow(-n)
            );
        }
        assert!(ctx.qfact(p as i64).is_err());
        assert_eq!(ctx.qfact(0).unwrap(), ctx.one());
    }
    let c5 = Ctx::new(5).unwrap();
    assert_eq!(
        c5.qfact(3).unwrap(),
        &(&c5.qint(1) * &c5.qint(2)) * &c5.qint(3)
    );
    assert_eq!(c5.qbinom(3, 1).unwrap(), &c5.qint(3) * &c5.qint(1).inv().unwrap());
}

#[test]
fn embedding() {
    let ctx = Ctx::new(2).unwrap();
    let one = ctx.one().embed(64);
    assert!(one.re.contains(&BigRational::one()));
    assert!(one.im.contains(&BigRational::zero()));
    let i = ctx.i_unit().embed(64);
    assert!(i.re.contains(&BigRational::zero()));
    assert!(i.im.contains(&BigRational::one()));
    // qhat at p=2 is i - i^{-1} = 2i
    let qh = ctx.qhat().embed(64);
    assert!(qh.re.contains(&BigRational::zero()));
    assert!(qh.im.contains(&rat_i64(2)));
    // enclosure is tight
    assert!(qh.im.width() < BigRational::new(1.into(), (1u64 << 60).into()));
}

#[test]
fn embedding_is_multiplicative() {
    let ctx = Ctx::new(3).unwrap();
    let x = &ctx.q() + &ctx.zeta_pow(5).scale(&rat_i64(3));
    let y = &ctx.i_unit() - &ctx.from_i64(7);
    let lhs = (&x * &y).embed(100);
    let rhs = x.embed(100).mul(&y.embed(100));
    assert!(lhs.dist_hi(&rhs) < BigRational::new(1.into(), (1u128 << 90).into()));
}

#[test]
fn sqrt_enclosure() {
    for n in [2i64, 3, 5, 7] {
        let iv = interval::sqrt_rational(&rat_i64(n), 128);
        let mid = iv.mid();
        assert!((&mid * &mid - rat_i64(n)).abs() < BigRational::new(1.into(), (1u128 << 120).into()));
    }
}

fn arb_elem(p: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(-20i32..20, euler_phi(4 * p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ring_axioms(xa in arb_elem(3), ya in arb_elem(3), za in arb_elem(3)) {
        let ctx = Ctx::new(3).unwrap();
        let mk = |v: &Vec<i32>| ctx.from_coeffs(v.iter().map(|&n| rat_i64(n as i64)).collect());
        let (x, y, z) = (mk(&xa), mk(&ya), mk(&za));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv().unwrap(), ctx.one());
        }
    }
}
