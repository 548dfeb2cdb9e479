//! Exact JSON export of the computed data, plus import and re-check of
//! previously exported S/T matrices.
//!
//! Rendering is deterministic: objects are emitted through serde_json's
//! sorted map representation and field elements are coefficient vectors
//! of canonical rational strings in the zeta power basis.

use serde_json::{json, Map, Value};

use crate::cyclo::{Ctx, Cyc, Rat};
use crate::hopf::{AlgElem, HAlg, LinForm};
use crate::linalg::Mat;
use crate::mcg;
use crate::pipeline::Pipeline;

pub const EXPORT_KINDS: &[&str] = &["st-matrices", "gta-basis", "ribbon", "integrals", "modules"];

pub fn cyc_to_json(c: &Cyc) -> Value {
    Value::Array(
        c.coeffs()
            .iter()
            .map(|r| Value::String(r.to_string()))
            .collect(),
    )
}

pub fn cyc_from_json(ctx: &Ctx, v: &Value) -> Result<Cyc, String> {
    let arr = v.as_array().ok_or("expected coefficient array")?;
    let mut coeffs = Vec::with_capacity(arr.len());
    for x in arr {
        let s = x.as_str().ok_or("expected rational string")?;
        let r: Rat = s.parse().map_err(|e| format!("bad rational '{s}': {e}"))?;
        coeffs.push(r);
    }
    if coeffs.len() != ctx.phi() {
        return Err(format!(
            "coefficient vector has length {}, field degree is {}",
            coeffs.len(),
            ctx.phi()
        ));
    }
    Ok(ctx.from_coeffs(coeffs))
}

pub fn mat_to_json(m: &Mat) -> Value {
    let rows: Vec<Value> = m
        .a
        .iter()
        .map(|row| Value::Array(row.iter().map(cyc_to_json).collect()))
        .collect();
    json!({ "rows": m.rows, "cols": m.cols, "entries": rows })
}

pub fn mat_from_json(ctx: &Ctx, v: &Value) -> Result<Mat, String> {
    let rows = v["rows"].as_u64().ok_or("missing rows")? as usize;
    let cols = v["cols"].as_u64().ok_or("missing cols")? as usize;
    let entries = v["entries"].as_array().ok_or("missing entries")?;
    if entries.len() != rows {
        return Err("row count mismatch".to_string());
    }
    let mut a = Vec::with_capacity(rows);
    for row in entries {
        let row = row.as_array().ok_or("expected row array")?;
        if row.len() != cols {
            return Err("column count mismatch".to_string());
        }
        let mut out = Vec::with_capacity(cols);
        for e in row {
            out.push(cyc_from_json(ctx, e)?);
        }
        a.push(out);
    }
    Ok(Mat::from_rows(ctx, a))
}

/// Interval midpoints of the complex embedding, for human consumption;
/// the exact entries stay authoritative.
pub fn mat_to_float_json(m: &Mat, bits: u32) -> Value {
    let rows: Vec<Value> = m
        .a
        .iter()
        .map(|row| {
            Value::Array(
                row.iter()
                    .map(|c| {
                        let e = c.embed(bits);
                        json!([e.re.to_f64(), e.im.to_f64()])
                    })
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

pub fn alg_to_json(x: &AlgElem) -> Value {
    let h = &x.h;
    let terms: Vec<Value> = x
        .terms
        .iter()
        .map(|(&m, c)| {
            let (i, j, l) = h.unpack(m);
            json!({ "e": i, "f": j, "khalf": l, "coeff": cyc_to_json(c) })
        })
        .collect();
    Value::Array(terms)
}

/// A linear form as its value vector on the PBW basis of Uq.
pub fn linform_to_json(f: &LinForm) -> Value {
    Value::Array(f.values.iter().map(cyc_to_json).collect())
}

pub fn export(pl: &Pipeline, what: &str) -> Result<Value, String> {
    match what {
        "st-matrices" => export_st(pl),
        "gta-basis" => export_gta(pl),
        "ribbon" => export_ribbon(pl),
        "integrals" => export_integrals(pl),
        "modules" => export_modules(pl),
        other => Err(format!("unknown export kind '{other}'")),
    }
}

fn export_st(pl: &Pipeline) -> Result<Value, String> {
    let rep = mcg::build_rep(&pl.slf, &pl.rib, &pl.ints)?;
    let dec = mcg::decompose(&rep, &pl.slf)?;
    let mut o = Map::new();
    o.insert("p".to_string(), json!(pl.p()));
    o.insert("rho_a".to_string(), mat_to_json(&rep.rho_a));
    o.insert("rho_b".to_string(), mat_to_json(&rep.rho_b));
    o.insert("rho_a_float".to_string(), mat_to_float_json(&rep.rho_a, 80));
    o.insert("rho_b_float".to_string(), mat_to_float_json(&rep.rho_b, 80));
    o.insert("scalar_cube".to_string(), cyc_to_json(&rep.scalar_cube));
    o.insert("w_block_a".to_string(), mat_to_json(&dec.tau_a_w));
    o.insert("w_block_b".to_string(), mat_to_json(&dec.tau_b_w));
    Ok(Value::Object(o))
}

fn export_gta(pl: &Pipeline) -> Result<Value, String> {
    let mut o = Map::new();
    o.insert("p".to_string(), json!(pl.p()));
    o.insert(
        "order".to_string(),
        json!("chi^+_1..chi^+_p, chi^-_1..chi^-_p, G_1..G_{p-1}"),
    );
    let forms: Vec<Value> = pl.slf.gta().iter().map(|f| linform_to_json(f)).collect();
    o.insert("forms".to_string(), Value::Array(forms));
    o.insert(
        "change_of_basis".to_string(),
        mat_to_json(&pl.slf.change_of_basis),
    );
    Ok(Value::Object(o))
}

fn export_ribbon(pl: &Pipeline) -> Result<Value, String> {
    let rib = &pl.rib;
    let mut o = Map::new();
    o.insert("p".to_string(), json!(pl.p()));
    let r_terms: Vec<Value> = rib
        .r
        .terms
        .iter()
        .map(|(&k, c)| {
            let a = (k >> 20) as u32;
            let b = (k & 0xfffff) as u32;
            let (ai, aj, al) = pl.h.unpack(a);
            let (bi, bj, bl) = pl.h.unpack(b);
            json!({
                "leg1": { "e": ai, "f": aj, "khalf": al },
                "leg2": { "e": bi, "f": bj, "khalf": bl },
                "coeff": cyc_to_json(c),
            })
        })
        .collect();
    o.insert("r".to_string(), Value::Array(r_terms));
    o.insert("u".to_string(), alg_to_json(&rib.u));
    o.insert("g".to_string(), alg_to_json(&rib.g));
    o.insert("v".to_string(), alg_to_json(&rib.v));
    o.insert("v_inv".to_string(), alg_to_json(&rib.v_inv));
    Ok(Value::Object(o))
}

fn export_integrals(pl: &Pipeline) -> Result<Value, String> {
    let d = &pl.ints;
    let mut o = Map::new();
    o.insert("p".to_string(), json!(pl.p()));
    o.insert("normalization_pin".to_string(), json!(d.normalization_pin));
    o.insert("mu_l".to_string(), linform_to_json(&d.mu_l));
    o.insert("mu_r".to_string(), linform_to_json(&d.mu_r));
    o.insert("cointegral".to_string(), alg_to_json(&d.cointegral));
    o.insert("comodulus".to_string(), alg_to_json(&d.comodulus));
    o.insert("ratio".to_string(), cyc_to_json(&d.ratio));
    Ok(Value::Object(o))
}

fn export_modules(pl: &Pipeline) -> Result<Value, String> {
    let h = &pl.h;
    let p = pl.p();
    let mut mods = Vec::new();
    for eps in [1i8, -1] {
        for s in 1..=p {
            let m = crate::repns::simple(h, eps, s, 1);
            mods.push(json!({
                "kind": "simple",
                "eps": eps,
                "s": s,
                "dim": m.dim,
                "mat_e": mat_to_json(&m.mat_e),
                "mat_f": mat_to_json(&m.mat_f),
                "mat_k": mat_to_json(&m.mat_k),
            }));
        }
    }
    for eps in [1i8, -1] {
        for s in 1..p {
            let m = crate::repns::build_pim(h, eps, s);
            mods.push(json!({
                "kind": "pim",
                "eps": eps,
                "s": s,
                "dim": m.dim,
                "mat_e": mat_to_json(&m.mat_e),
                "mat_f": mat_to_json(&m.mat_f),
                "mat_k": mat_to_json(&m.mat_k),
            }));
        }
    }
    Ok(json!({ "p": p, "modules": mods }))
}

/// Human-readable rendering of an export kind.
pub fn render_text(pl: &Pipeline, what: &str) -> Result<String, String> {
    match what {
        "ribbon" => {
            let rib = &pl.rib;
            Ok(format!(
                "p = {}\nv = {}\nv^-1 = {}\ng = {}\nu = {}\n",
                pl.p(),
                rib.v,
                rib.v_inv,
                rib.g,
                rib.u
            ))
        }
        "st-matrices" => {
            let rep = mcg::build_rep(&pl.slf, &pl.rib, &pl.ints)?;
            let mut s = format!("p = {}\nGTA order: chi^+_1..chi^+_p, chi^-_1..chi^-_p, G_1..G_{{p-1}}\n", pl.p());
            s.push_str(&format!("scalar_cube = {}\n", rep.scalar_cube));
            for (name, m) in [("rho_a", &rep.rho_a), ("rho_b", &rep.rho_b)] {
                s.push_str(&format!("{name}:\n"));
                for row in &m.a {
                    let cells: Vec<String> = row.iter().map(|c| format!("{c}")).collect();
                    s.push_str(&format!("  [{}]\n", cells.join(", ")));
                }
            }
            Ok(s)
        }
        "integrals" => {
            let d = &pl.ints;
            Ok(format!(
                "p = {}\npin: {}\ncointegral = {}\ncomodulus = {}\nratio = {}\n",
                pl.p(),
                d.normalization_pin,
                d.cointegral,
                d.comodulus,
                d.ratio
            ))
        }
        other => {
            // fall back to pretty JSON for the structured kinds
            let v = export(pl, other)?;
            serde_json::to_string_pretty(&v).map_err(|e| e.to_string())
        }
    }
}

/// Reads back an st-matrices export.
pub fn import_st_matrices(ctx: &Ctx, v: &Value) -> Result<(Mat, Mat, Cyc), String> {
    let rho_a = mat_from_json(ctx, &v["rho_a"])?;
    let rho_b = mat_from_json(ctx, &v["rho_b"])?;
    let cube = cyc_from_json(ctx, &v["scalar_cube"])?;
    Ok((rho_a, rho_b, cube))
}

/// Re-verifies the defining relations on imported matrices without
/// rebuilding the pipeline.
pub fn reverify_st(ctx: &Ctx, rho_a: &Mat, rho_b: &Mat, cube: &Cyc) -> Result<(), String> {
    let aba = rho_a.mul(rho_b).mul(rho_a);
    let bab = rho_b.mul(rho_a).mul(rho_b);
    if aba != bab {
        return Err("imported matrices fail the braid relation".to_string());
    }
    let c = rho_a.mul(rho_b).pow(3);
    if c != Mat::identity(ctx, rho_a.rows).scale(cube) {
        return Err("imported matrices fail the cube relation".to_string());
    }
    Ok(())
}

/// Serializes a JSON value in the deterministic (sorted key) rendering.
pub fn to_json_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json rendering")
}

pub fn halg_for_import(p: usize) -> Result<(Ctx, HAlg), String> {
    let ctx = Ctx::new(p)?;
    let h = HAlg::new(&ctx);
    Ok((ctx, h))
}
