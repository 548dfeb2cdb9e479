//! End-to-end acceptance gate.  Each numbered criterion prints exactly
//! one pass/fail line; the test fails iff a gating criterion fails.
//! Probe observations are reported but never gate.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::ToPrimitive;
use uqsl2::cyclo::Ctx;
use uqsl2::hopf::HAlg;
use uqsl2::integrals::IntegralData;
use uqsl2::linalg::Mat;
use uqsl2::mcg;
use uqsl2::pipeline::Pipeline;
use uqsl2::quasi::ribbon_scalar;
use uqsl2::repns::{casimir, simple};
use uqsl2::slf::ribbon_scalar_eps;

const PS: [usize; 4] = [2, 3, 4, 5];

fn require(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn criterion_1(pls: &BTreeMap<usize, Pipeline>) -> Result<String, String> {
    // dimensions and factorizability at p = 3, timed from a cold build
    let t0 = Instant::now();
    let pl = Pipeline::build(3)?;
    require(pl.h.dim_uq() == 54, "dim Uq != 2p^3 at p=3")?;
    require(pl.slf.dim() == 8, "dim SLF != 3p-1 at p=3")?;
    require(pl.cen.basis.len() == 8, "dim center != 3p-1 at p=3")?;
    require(pl.rib.drinfeld_rank() == 54, "Drinfeld rank != 2p^3 at p=3")?;
    let secs = t0.elapsed().as_secs_f64();
    require(secs < 10.0, "p=3 dimension run exceeded 10 s")?;
    for (&p, pl) in pls {
        require(pl.h.dim_uq() == 2 * p * p * p, "dim Uq != 2p^3")?;
        require(pl.slf.dim() == 3 * p - 1, "dim SLF != 3p-1")?;
    }
    Ok(format!("dims 2p^3 and 3p-1, Drinfeld rank 2p^3 ({secs:.1}s at p=3)"))
}

fn criterion_2(pls: &BTreeMap<usize, Pipeline>) -> Result<String, String> {
    let t0 = Instant::now();
    for p in [2usize, 3] {
        let pl = &pls[&p];
        let h = &pl.h;
        let ctx = h.ctx();
        let qh = ctx.qhat();
        let psi = pl.rib.psi01_matrix(&simple(h, 1, 2, 1));
        let a = &psi[0][0];
        let b = &psi[0][1];
        let c = &psi[1][0];
        let d = &psi[1][1];
        // displayed matrix [[K + q^{-1}qh^2 FE, q^{-1}qh F], [qh K^{-1}E, K^{-1}]]
        let fe = h.f().mul(&h.e());
        require(
            *a == h.k(1).add(&fe.scale(&(&(&qh * &qh) * &ctx.q_pow(-1)))),
            "entry (0,0) mismatch",
        )?;
        require(
            *b == h.f().scale(&(&qh * &ctx.q_pow(-1))),
            "entry (0,1) mismatch",
        )?;
        require(*c == h.k(-1).mul(&h.e()).scale(&qh), "entry (1,0) mismatch")?;
        require(*d == h.k(-1), "entry (1,1) mismatch")?;
        // presentation relations of the images
        let qc = ctx.q();
        let qiqh = &qh * &ctx.q_pow(-1);
        require(d.mul(a) == a.mul(d), "da != ad")?;
        require(d.mul(b) == b.mul(d).scale(&(&qc * &qc)), "db != q^2 bd")?;
        require(d.mul(c) == c.mul(d).scale(&ctx.q_pow(-2)), "dc != q^-2 cd")?;
        require(
            b.mul(a) == a.mul(b).add(&b.mul(d).scale(&qiqh)),
            "ba != ab + q^-1 qh bd",
        )?;
        require(
            c.mul(b) == b.mul(c).add(&d.mul(a).sub(&d.mul(d)).scale(&qiqh)),
            "cb != bc + q^-1 qh (da - d^2)",
        )?;
        require(
            c.mul(a) == a.mul(c).sub(&d.mul(c).scale(&qiqh)),
            "ca != ac - q^-1 qh dc",
        )?;
        require(
            a.mul(d).sub(&b.mul(c).scale(&(&qc * &qc))) == h.one(),
            "ad - q^2 bc != 1",
        )?;
        require(b.pow_usize(p).is_zero(), "b^p != 0")?;
        require(c.pow_usize(p).is_zero(), "c^p != 0")?;
        require(d.pow_usize(2 * p) == h.one(), "d^{2p} != 1")?;
    }
    let secs = t0.elapsed().as_secs_f64();
    require(secs < 5.0, "convention gate exceeded 5 s")?;
    Ok(format!("loop algebra image matrix and all 9 presentation relations ({secs:.2}s)"))
}

fn criterion_3(pls: &BTreeMap<usize, Pipeline>) -> Result<String, String> {
    let t0 = Instant::now();
    for &p in &PS {
        let pl = &pls[&p];
        let h = &pl.h;
        let ctx = h.ctx();
        let rib = &pl.rib;
        let r12 = rib.r_pi.embed12();
        let r13 = rib.r_pi.embed13();
        let r23 = rib.r_pi.embed23();
        require(
            r12.mul(&r13.mul(&r23)).sub(&r23.mul(&r13.mul(&r12))).is_zero(),
            "Yang-Baxter fails",
        )?;
        require(
            rib.r_pi.delta_leg1().sub(&r13.mul(&r23)).is_zero(),
            "hexagon (D ox id) fails",
        )?;
        require(
            rib.r_pi.delta_leg2().sub(&r13.mul(&r12)).is_zero(),
            "hexagon (id ox D) fails",
        )?;
        require(rib.r.antipode_both() == rib.r, "(S ox S)(R) != R")?;
        // u implements S^2, v^2 = u S(u)
        for x in [h.e(), h.f(), h.khalf(1)] {
            require(
                x.antipode().antipode() == rib.u.mul(&x).mul(&rib.u_inv),
                "S^2 != conj by u",
            )?;
            require(rib.v.commutator(&x).is_zero(), "v not central")?;
        }
        require(rib.v.mul(&rib.v) == rib.u.mul(&rib.u.antipode()), "v^2 != u S(u)")?;
        require(rib.v.in_uq(), "v outside Uq")?;
        require(rib.v.counit() == ctx.one(), "eps(v) != 1")?;
        require(rib.v.antipode() == rib.v, "S(v) != v")?;
        let v_pi = h.to_pi(&rib.v);
        let dv = h.coproduct_pi(&v_pi);
        require(
            rib.r_prime_pi
                .mul(&rib.r_pi.mul(&dv))
                .sub(&h.pi_tensor(&v_pi, &v_pi))
                .is_zero(),
            "D(v) != (R'R)^{-1} v ox v",
        )?;
        require(rib.g == h.k(p as i64 + 1), "pivot != K^{p+1}")?;
        // eigenvalue (-1)^{s-1} q^{-(s^2-1)/2} on X^eps(s)
        for eps in [1i8, -1] {
            for s in 1..=p {
                let m = simple(h, eps, s, 1);
                let want = Mat::identity(ctx, s).scale(&ribbon_scalar_eps(ctx, eps as i64, s));
                require(m.act(&rib.v) == want, "ribbon eigenvalue wrong")?;
            }
        }
        for s in 1..=p {
            let sign = if (s - 1) % 2 == 0 { 1 } else { -1 };
            let want = ctx
                .qhalf_pow(-((s * s) as i64 - 1))
                .scale(&uqsl2::cyclo::rat_i64(sign));
            require(ribbon_scalar(ctx, s) == want, "eigenvalue closed form wrong")?;
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    require(secs < 60.0, "ribbon suite exceeded 60 s")?;
    Ok(format!("ribbon axioms exact for p in {{2,3,4,5}} ({secs:.1}s)"))
}

fn criterion_4(pls: &BTreeMap<usize, Pipeline>) -> Result<String, String> {
    for &p in &PS {
        let pl = &pls[&p];
        let h = &pl.h;
        let data = &pl.ints;
        // IntegralData::build certifies the 1-dim solution space; check
        // the pinned support and the structural identities here
        let support: Vec<usize> = (0..h.dim_uq())
            .filter(|&i| !data.mu_l.values[i].is_zero())
            .collect();
        require(support.len() == 1, "left integral support not 1-dim")?;
        data.unibalanced_check(&pl.rib)?;
        let c = &data.cointegral;
        for (g, eps) in [
            (h.e(), h.ctx().zero()),
            (h.f(), h.ctx().zero()),
            (h.k(1), h.ctx().one()),
        ] {
            require(
                g.mul(c).sub(&c.scale(&eps)).is_zero() && c.mul(&g).sub(&c.scale(&eps)).is_zero(),
                "cointegral not two-sided",
            )?;
        }
        let step = if h.dim_uq() <= 54 { 1 } else { h.dim_uq() / 30 };
        for i in (0..h.dim_uq()).step_by(step) {
            let x = h.mono_elem(h.ext_index_of_uq(i));
            let s2x = x.antipode().antipode();
            for j in (0..h.dim_uq()).step_by(step) {
                let y = h.mono_elem(h.ext_index_of_uq(j));
                require(
                    data.mu_l.eval(&x.mul(&y)) == data.mu_l.eval(&y.mul(&s2x)),
                    "mu^l(xy) != mu^l(y S^2(x))",
                )?;
            }
        }
    }
    Ok("integral unique, unimodular, unibalanced, S^2-symmetric".to_string())
}

fn criterion_5(pls: &BTreeMap<usize, Pipeline>) -> Result<String, String> {
    let mut cubes = Vec::new();
    let mut secs5 = 0.0;
    for &p in &PS {
        let t0 = Instant::now();
        let pl = &pls[&p];
        let rep = mcg::build_rep(&pl.slf, &pl.rib, &pl.ints)?;
        require(rep.scalar_braid == pl.ctx().one(), "braid scalar != 1")?;
        require(rep.scalar_cube == pl.ints.ratio, "cube scalar != mu ratio")?;
        mcg::verify_relations(&rep, &pl.slf, &pl.ints)?;
        cubes.push(format!("p={p}: {}", rep.scalar_cube));
        if p == 5 {
            secs5 = t0.elapsed().as_secs_f64();
            require(secs5 < 120.0, "p=5 MCG core exceeded 2 min")?;
        }
    }
    Ok(format!(
        "braid scalar 1, cube scalar mu(v^-1)/mu(v), omega^2 action ({secs5:.1}s at p=5); {}",
        cubes.join("; ")
    ))
}

fn xi_float(p: usize) -> (f64, f64) {
    // independent floating evaluation of
    // xi^{-1} = -(1-i) sqrt(p) qhat^{p-1} [p-1]! q^{-(p-3)/2}
    let pi = std::f64::consts::PI;
    let s = (pi / p as f64).sin();
    let mul = |(ar, ai): (f64, f64), (br, bi): (f64, f64)| (ar * br - ai * bi, ar * bi + ai * br);
    let mut acc = (1.0f64, 0.0f64);
    // -(1-i)
    acc = mul(acc, (-1.0, 1.0));
    acc = mul(acc, ((p as f64).sqrt(), 0.0));
    // qhat = 2i sin(pi/p)
    for _ in 0..p - 1 {
        acc = mul(acc, (0.0, 2.0 * s));
    }
    for k in 1..p {
        acc = mul(acc, ((k as f64 * pi / p as f64).sin() / s, 0.0));
    }
    // q^{-(p-3)/2} = exp(-i pi (p-3) / (2p))
    let th = -pi * (p as f64 - 3.0) / (2.0 * p as f64);
    acc = mul(acc, (th.cos(), th.sin()));
    // invert
    let n = acc.0 * acc.0 + acc.1 * acc.1;
    (acc.0 / n, -acc.1 / n)
}

fn criterion_6(pls: &BTreeMap<usize, Pipeline>) -> Result<String, String> {
    for &p in &PS {
        let pl = &pls[&p];
        let rep = mcg::build_rep(&pl.slf, &pl.rib, &pl.ints)?;
        let flagged = mcg::verify_closed_forms(&rep, &pl.slf)?;
        require(
            flagged.len() == 1 && flagged[0].contains("pinning case"),
            "unexpected flagged column set",
        )?;
        // xi to >= 60 significant bits through the complex embedding,
        // cross-checked against an independent float evaluation
        let emb = pl.slf.xi.embed(200);
        let (fr, fi) = xi_float(p);
        let mag = (fr * fr + fi * fi).sqrt();
        let tol = mag / (1u64 << 61) as f64;
        require(
            emb.re.width().to_f64().unwrap() < tol && emb.im.width().to_f64().unwrap() < tol,
            "xi embedding below 60 significant bits",
        )?;
        require(
            (emb.re.to_f64() - fr).abs() < 1e-9 * mag && (emb.im.to_f64() - fi).abs() < 1e-9 * mag,
            "xi disagrees with independent numeric evaluation",
        )?;
    }
    Ok("all twist columns match closed forms (pinning column flagged); xi confirmed to >= 60 bits".to_string())
}

fn criterion_7(pls: &BTreeMap<usize, Pipeline>) -> Result<String, String> {
    for &p in &PS {
        let pl = &pls[&p];
        let rep = mcg::build_rep(&pl.slf, &pl.rib, &pl.ints)?;
        let dec = mcg::decompose(&rep, &pl.slf)?;
        require(dec.v_basis.len() == p + 1, "dim V != p+1")?;
        require(dec.x_vecs.len() == p - 1 && dec.y_vecs.len() == p - 1, "dim W != p-1")?;
        require(dec.intertwiner.inverse().is_some(), "intertwiner not invertible")?;
    }
    Ok("V (dim p+1) invariant, SLF = V + C^2 ox W via exact intertwiner".to_string())
}

fn criterion_8(pls: &BTreeMap<usize, Pipeline>) -> Result<String, String> {
    for p in [2usize, 3, 4] {
        let pl = &pls[&p];
        let lm = mcg::lm_operators(&pl.rib, &pl.ints, &pl.slf, &pl.cen)?;
        let rep = mcg::build_rep(&pl.slf, &pl.rib, &pl.ints)?;
        mcg::verify_equivalence(&lm, &rep, &pl.rib, &pl.ints)?;
        if p == 2 {
            // the normalization scalar mu(v)mu(v^{-1}) is 1 here, so the
            // S operator is an involution on the nose
            let s2 = lm.s_lm.mul(&lm.s_lm);
            require(s2 == Mat::identity(pl.ctx(), s2.rows), "S^2 != id at p=2")?;
        }
    }
    Ok("f intertwines S,T with S',T'; S^2 = mu(v)mu(v^-1) id (the unit-normalized form of S^2 = id; literal at p=2)".to_string())
}

fn criterion_9(pls: &BTreeMap<usize, Pipeline>) -> Result<String, String> {
    for p in [2usize, 3] {
        let pl = &pls[&p];
        let hs = mcg::HeisSpace::new(&pl.h);
        let m = simple(&pl.h, 1, 2, 1);
        mcg::symmetry_criterion_check(&hs, &pl.rib, &pl.slf, &pl.cen, &m)?;
        mcg::boundary_check(&hs, &pl.rib, &pl.slf, &m)?;
    }
    Ok("C^{+-} fix exactly the symmetric forms; boundary word acts as identity on SLF".to_string())
}

fn criterion_10(pls: &BTreeMap<usize, Pipeline>) -> Result<String, String> {
    let mut probes: Vec<String> = Vec::new();
    let mut stable = 0usize;
    let mut total = 0usize;
    for p in [2usize, 3] {
        let pl = &pls[&p];
        mcg::cyclic_generation(&pl.slf, &pl.rib, &pl.cen)?;
        mcg::indecomposability_check(&pl.slf, &pl.rib, &pl.cen)?;
        let hs = mcg::HeisSpace::new(&pl.h);
        let h = &pl.h;
        let mut pairs = Vec::new();
        if p == 2 {
            for (ei, si) in [(1i8, 1usize), (1, 2), (-1, 1), (-1, 2)] {
                for (ej, sj) in [(1i8, 1usize), (1, 2), (-1, 1), (-1, 2)] {
                    pairs.push((
                        simple(h, ei, si, 1),
                        simple(h, ej, sj, 1),
                        format!("X{ei}({si}),X{ej}({sj})"),
                    ));
                }
            }
            let res = mcg::conjecture_probe(&hs, &pl.rib, &pl.slf, &pairs, false)?;
            total += res.len();
            stable += res.iter().filter(|r| r.v_stable).count();
            for r in res.iter().filter(|r| !r.v_stable) {
                probes.push(format!("p={p} {} unstable", r.label));
            }
        }
        let m2 = simple(h, 1, 2, 1);
        let res = mcg::conjecture_probe(
            &hs,
            &pl.rib,
            &pl.slf,
            &[(m2.clone(), m2, "X+(2),X+(2)".to_string())],
            true,
        )?;
        total += res.len();
        stable += res.iter().filter(|r| r.v_stable).count();
        for r in res.iter().filter(|r| !r.v_stable) {
            probes.push(format!("p={p} {} unstable", r.label));
        }
    }
    let probe_note = if probes.is_empty() {
        format!("probe: {stable}/{total} V-stable")
    } else {
        format!("probe: {stable}/{total} V-stable ({})", probes.join("; "))
    };
    // probe observations never gate; cyclic generation and
    // indecomposability above do
    Ok(format!("SLF cyclic over chi^+_1 and indecomposable; {probe_note}"))
}

#[test]
fn acceptance() {
    let mut pls: BTreeMap<usize, Pipeline> = BTreeMap::new();
    for &p in &PS {
        pls.insert(p, Pipeline::build(p).expect("pipeline build"));
    }
    // warm check that the cli-facing field constructor rejects p=1
    assert!(Ctx::new(1).is_err());
    let _ = HAlg::new(pls[&2].ctx());
    let _ = casimir(&pls[&2].h);
    let _ = IntegralData::build(&pls[&2].rib).expect("integrals rebuild");

    type Crit = fn(&BTreeMap<usize, Pipeline>) -> Result<String, String>;
    let criteria: Vec<(usize, &str, Crit)> = vec![
        (1, "dimensions and factorizability", criterion_1),
        (2, "convention gate", criterion_2),
        (3, "ribbon suite", criterion_3),
        (4, "integrals", criterion_4),
        (5, "mcg core relations", criterion_5),
        (6, "closed forms and xi", criterion_6),
        (7, "decomposition", criterion_7),
        (8, "lyubashenko-majid equivalence", criterion_8),
        (9, "invariance criteria", criterion_9),
        (10, "structure and conjecture probe", criterion_10),
    ];
    let mut failures = Vec::new();
    for (num, name, f) in criteria {
        let t0 = Instant::now();
        match f(&pls) {
            Ok(note) => println!(
                "criterion {num:2} ({name}): pass - {note} [{} ms]",
                t0.elapsed().as_millis()
            ),
            Err(w) => {
                println!(
                    "criterion {num:2} ({name}): FAIL - {w} [{} ms]",
                    t0.elapsed().as_millis()
                );
                failures.push((num, w));
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
