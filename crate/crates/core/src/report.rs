//! Self-describing result envelopes for the command-line tool.
//!
//! Every command wraps its result in one [`ReportEnvelope`] carrying the
//! tool version, the normalized command line, the group, and the active
//! policy, with the analysis itself as a kind-tagged body.  Re-running the
//! recorded command must reproduce the body bit-for-bit; wall-clock timing
//! therefore lives on the envelope, outside the body.

use serde::{Deserialize, Serialize};

use crate::chartab::CharacterTable;
use crate::constraints::{JumpAnalysis, RelativeAnalysis};
use crate::error::Result;
use crate::lattice::{LatticeAnalysis, TwistDivisibility};
use crate::oracle::{Decomposition, ORACLE_ORDER_BOUND};
use crate::qcurve::QCurveCertificate;
use crate::rational::{RationalStructure, SchurIndexValue, SchurPolicy};

/// Version stamp recorded in every envelope.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// The inputs that determine a report body: Schur-index policy, the order
/// ceiling for the decomposition oracle, and the seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyStamp {
    pub schur: SchurPolicy,
    pub oracle_bound: usize,
    pub seed: u64,
}

impl PolicyStamp {
    pub fn new(schur: SchurPolicy, seed: u64) -> PolicyStamp {
        PolicyStamp {
            schur,
            oracle_bound: ORACLE_ORDER_BOUND,
            seed,
        }
    }
}

/// One row of the complex character table, with values rendered in the
/// canonical root-of-unity basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexRow {
    pub degree: u64,
    pub indicator: i8,
    pub values: Vec<String>,
}

/// One rational character: a Schur-annotated Galois orbit sum with integer
/// values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRow {
    pub q_degree: u64,
    pub orbit_size: usize,
    pub indicator: i8,
    pub schur: SchurIndexValue,
    pub values: Vec<i64>,
}

/// Character-table report: class data, complex rows, rational rows, and an
/// optional decomposition cross-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharTableReport {
    pub group: String,
    pub order: usize,
    pub class_count: usize,
    pub class_sizes: Vec<usize>,
    pub class_rep_orders: Vec<u64>,
    /// Values live in the field of `root_order`-th roots of unity.
    pub root_order: u64,
    pub complex_rows: Vec<ComplexRow>,
    pub rational_rows: Vec<RationalRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Decomposition>,
}

/// Report for the standalone decomposition verification command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerifyReport {
    pub group: String,
    pub order: usize,
    /// Row and column orthogonality were re-checked exactly.
    pub orthogonality_checked: bool,
    pub decomposition: Decomposition,
    pub isotypic_sum: usize,
    /// Isotypic dimensions must add up to the group order.
    pub sum_matches_order: bool,
    /// Width annotations implied by the decomposition.
    pub annotations: Vec<SchurIndexValue>,
    pub all_widths_certified: bool,
}

/// Kind-tagged body: exactly one analysis per report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReportBody {
    CharTable(CharTableReport),
    Galois(JumpAnalysis),
    Relative(RelativeAnalysis),
    Lattice(LatticeAnalysis),
    Twist(TwistDivisibility),
    QCurve(Box<QCurveCertificate>),
    OracleVerify(OracleVerifyReport),
}

/// Uniform wrapper around every command result.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub version: String,
    /// Normalized command line that reproduces the body.
    pub command: String,
    /// Group specification, for commands that take one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub policy: PolicyStamp,
    pub body: ReportBody,
    /// Wall-clock milliseconds; informational only, excluded from
    /// reproducibility comparisons.
    pub elapsed_ms: u64,
}

impl ReportEnvelope {
    pub fn new(
        command: impl Into<String>,
        group: Option<String>,
        policy: PolicyStamp,
        body: ReportBody,
        elapsed_ms: u64,
    ) -> ReportEnvelope {
        ReportEnvelope {
            version: TOOL_VERSION.to_string(),
            command: command.into(),
            group,
            policy,
            body,
            elapsed_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports are always serializable")
    }
}

/// Render a canonical root-of-unity coefficient vector as a readable sum of
/// powers of ζ_e.
pub fn render_cyclo(coeffs: &[i128], e: u64) -> String {
    let mut out = String::new();
    for (j, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else if c < 0 {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let a = c.unsigned_abs();
        if j == 0 {
            out.push_str(&a.to_string());
        } else {
            if a != 1 {
                out.push_str(&a.to_string());
            }
            if j == 1 {
                out.push_str(&format!("ζ{}", e));
            } else {
                out.push_str(&format!("ζ{}^{}", e, j));
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Assemble the character-table report from a computed table, its rational
/// structure, and per-orbit Schur annotations.
pub fn char_table_report(
    table: &CharacterTable,
    rs: &RationalStructure,
    annotations: &[SchurIndexValue],
    oracle: Option<Decomposition>,
) -> Result<CharTableReport> {
    let classes = table.classes();
    let e = table.cyclo_ctx().order();
    let complex_rows = (0..table.count())
        .map(|i| {
            let ch = table.character(i);
            let orbit = rs.orbit_of_char(i);
            ComplexRow {
                degree: ch.degree(),
                indicator: rs.orbits()[orbit].fs_indicator(),
                values: (0..classes.count())
                    .map(|k| render_cyclo(ch.canonical_value(k), e))
                    .collect(),
            }
        })
        .collect();
    let rational_rows = rs
        .orbits()
        .iter()
        .zip(annotations)
        .map(|(ob, ann)| RationalRow {
            q_degree: ob.q_degree(),
            orbit_size: ob.orbit_size(),
            indicator: ob.fs_indicator(),
            schur: *ann,
            values: ob
                .values()
                .iter()
                .map(|&v| i64::try_from(v).expect("character values are group-order bounded"))
                .collect(),
        })
        .collect();
    Ok(CharTableReport {
        group: table.group().name().to_string(),
        order: table.group().order(),
        class_count: classes.count(),
        class_sizes: classes.sizes().to_vec(),
        class_rep_orders: (0..classes.count()).map(|k| classes.rep_order(k)).collect(),
        root_order: e,
        complex_rows,
        rational_rows,
        oracle,
    })
}
