//! Machine-readable verification reports.

use serde::Serialize;

use crate::ar_model::{check_subquiver_iso, decompose};
use crate::cluster_tilting::{check_fractional_cy, check_serre_duality, OrbitCategory};
use crate::equivalence::{verify_commutative_diagram, verify_phi_iso};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
}

/// `{"check": ..., "status": "ok" | "fail", "witness": ...}`.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub status: Status,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub witness: serde_json::Value,
}

impl CheckResult {
    pub fn ok(check: impl Into<String>) -> Self {
        CheckResult {
            check: check.into(),
            status: Status::Ok,
            witness: serde_json::Value::Null,
        }
    }

    pub fn fail(check: impl Into<String>, witness: impl Serialize) -> Self {
        CheckResult {
            check: check.into(),
            status: Status::Fail,
            witness: serde_json::to_value(witness).unwrap_or(serde_json::Value::Null),
        }
    }

    /// `ok` when `failures` is empty, otherwise `fail` with the failures as
    /// witness.
    pub fn from_failures<T: Serialize>(check: impl Into<String>, failures: &[T]) -> Self {
        if failures.is_empty() {
            CheckResult::ok(check)
        } else {
            CheckResult::fail(check, failures)
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Ok
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub n: u32,
    pub p: u32,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Iso,
    Diagram,
    Decomposition,
    Serre,
    Cy,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "iso" => Suite::Iso,
            "diagram" => Suite::Diagram,
            "decomposition" => Suite::Decomposition,
            "serre" => Suite::Serre,
            "cy" => Suite::Cy,
            "all" => Suite::All,
            _ => return Err(Error::Parse(format!("unknown suite {s:?}"))),
        })
    }
}

/// Turns a verification error into a failed check; other errors propagate.
fn checked<T>(name: &str, r: Result<T>) -> Result<CheckResult> {
    match r {
        Ok(_) => Ok(CheckResult::ok(name)),
        Err(Error::Verification(msg)) => Ok(CheckResult::fail(name, msg)),
        Err(e) => Err(e),
    }
}

pub fn run_suite(suite: Suite, n: u32, p: u32) -> Result<Report> {
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Iso {
        checks.push(checked("iso", verify_phi_iso(n, p))?);
    }
    if all || suite == Suite::Diagram {
        let d = verify_commutative_diagram(n, p)?;
        checks.push(CheckResult::from_failures("diagram", &d.mismatches));
    }
    if all || suite == Suite::Decomposition {
        let d = decompose(n, p)?;
        checks.push(match d.verify() {
            Ok(()) => CheckResult::ok("decomposition.components"),
            Err(Error::Verification(_)) => CheckResult::fail(
                "decomposition.components",
                serde_json::json!({
                    "component_sizes": d.component_sizes(),
                    "linking_arrows": d.linking_arrows,
                }),
            ),
            Err(e) => return Err(e),
        });
        checks.push(checked(
            "decomposition.bottom_strip",
            check_subquiver_iso(n, p),
        )?);
        let np = (n * p) as usize;
        let rows_ok =
            d.top_rows == (n * (p - 1)) as usize && d.top_row_length.iter().all(|&l| l == np);
        checks.push(if rows_ok {
            CheckResult::ok("decomposition.cylinder")
        } else {
            CheckResult::fail(
                "decomposition.cylinder",
                serde_json::json!({"rows": d.top_rows, "row_lengths": d.top_row_length}),
            )
        });
    }
    if all || suite == Suite::Serre {
        let cat = OrbitCategory::new(n, p)?;
        checks.push(CheckResult::from_failures(
            "serre",
            &check_serre_duality(&cat),
        ));
    }
    if all || suite == Suite::Cy {
        checks.push(CheckResult::from_failures(
            "cy",
            &check_fractional_cy(n, p)?,
        ));
    }
    Ok(Report { n, p, checks })
}
