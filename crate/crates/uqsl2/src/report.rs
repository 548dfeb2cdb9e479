//! Verification report plumbing: check records, provenance pins and
//! deterministic JSON rendering.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    /// Experimental observation; never gates the run.
    Probe,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CheckReport {
    pub check_id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar_values: Option<BTreeMap<String, String>>,
    pub wall_time_ms: u128,
}

/// The normalization choices every exported number depends on.  Embedded
/// verbatim in each report so runs are reproducible.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct Provenance {
    pub integral_normalization: String,
    pub gta_pinning: String,
    pub lift_choice: String,
}

impl Provenance {
    pub fn standard() -> Provenance {
        Provenance {
            integral_normalization: "left integral pinned by mu_l(F^{p-1} E^{p-1} K^{p-1}) = 1; \
                 mu_r = mu_l o S^{-1}"
                .to_string(),
            gta_pinning: "G_1 pinned against the projective character columns; \
                 G_s = G_1 * chi^+_s / [s]; basis order chi^+_1..chi^+_p, \
                 chi^-_1..chi^-_p, G_1..G_{p-1}"
                .to_string(),
            lift_choice: "simple modules carry the +1 lift of K^{1/2} by default; \
                 every identity checked is lift-independent"
                .to_string(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct RunReport {
    pub p: usize,
    pub suites: Vec<String>,
    pub provenance: Provenance,
    pub checks: Vec<CheckReport>,
}

impl RunReport {
    pub fn has_fail(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        // struct field order is fixed and scalar_values is a BTreeMap, so
        // this rendering is byte-stable modulo the timing fields
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn summary_lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                let tag = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Skipped => "skipped",
                    Status::Probe => "probe",
                };
                match &c.witness {
                    Some(w) => format!("{:<40} {:>7}  {}", c.check_id, tag, w),
                    None => format!("{:<40} {:>7}", c.check_id, tag),
                }
            })
            .collect()
    }
}

/// Runs one named check, timing it and converting an `Err` into a fail
/// entry carrying the witness.
pub fn run_check<F>(out: &mut Vec<CheckReport>, id: &str, f: F)
where
    F: FnOnce() -> Result<Option<BTreeMap<String, String>>, String>,
{
    let t0 = Instant::now();
    let res = f();
    let wall_time_ms = t0.elapsed().as_millis();
    let rep = match res {
        Ok(scalars) => CheckReport {
            check_id: id.to_string(),
            status: Status::Pass,
            witness: None,
            scalar_values: scalars,
            wall_time_ms,
        },
        Err(w) => CheckReport {
            check_id: id.to_string(),
            status: Status::Fail,
            witness: Some(w),
            scalar_values: None,
            wall_time_ms,
        },
    };
    out.push(rep);
}

pub fn skip(out: &mut Vec<CheckReport>, id: &str, reason: &str) {
    out.push(CheckReport {
        check_id: id.to_string(),
        status: Status::Skipped,
        witness: Some(reason.to_string()),
        scalar_values: None,
        wall_time_ms: 0,
    });
}

pub fn probe(out: &mut Vec<CheckReport>, id: &str, observation: &str, ms: u128) {
    out.push(CheckReport {
        check_id: id.to_string(),
        status: Status::Probe,
        witness: Some(observation.to_string()),
        scalar_values: None,
        wall_time_ms: ms,
    });
}
