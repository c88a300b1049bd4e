//! Regenerates the pinned Schur-index table shipped with the crate.
//!
//! For every group small enough for the module-decomposition oracle, the
//! exact indices are computed and certified by the oracle itself; the run
//! aborts if any component fails certification. Two groups above the oracle
//! bound (A7 and the projective group of order 660) carry hand-proved
//! values; the generator recomputes their orbit structure and attaches the
//! pinned indices after consistency checks against the indicators.
//!
//! Usage: `cargo run -p rankgrowth-core --bin gen-overrides [output.json]`

use std::time::Instant;

use rankgrowth_core::chartab::CharacterTable;
use rankgrowth_core::group::FiniteGroup;
use rankgrowth_core::oracle;
use rankgrowth_core::rational::{RationalStructure, SchurIndexValue};

#[derive(serde::Serialize)]
struct OverrideFile {
    entries: Vec<OverrideEntry>,
}

#[derive(serde::Serialize)]
struct OverrideEntry {
    group: String,
    label: String,
    orbit_q_degrees: Vec<u64>,
    schur_indices: Vec<u64>,
}

const ORACLE_SPECS: &[&str] = &[
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12",
    "D4", "S3", "S4", "A4", "A5", "A6",
    "SL2(5)", "SL2(7)", "PSL2(5)", "PSL2(7)",
    "perm degree=7 gens=[(1 2 3 4 5 6 7), (2 3 5)(4 7 6)]",
];

/// Groups above the regular-module oracle bound. Their indices are pinned
/// through the divisibility certificate (coset-module multiplicities plus
/// indicator constraints), which needs only the character table.
const PINNED_SPECS: &[&str] = &["A7", "PSL2(11)"];

fn main() {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "crates/core/data/schur_overrides.json".to_string());
    let mut entries = Vec::new();

    for spec in ORACLE_SPECS {
        let start = Instant::now();
        let group = FiniteGroup::from_spec(spec).expect("corpus spec parses");
        let label = group.name().to_string();
        let table = CharacterTable::build(group).expect("table builds");
        let rs = RationalStructure::from_table(&table).expect("orbits form");
        let ann = oracle::schur_indices_oracle(&table, &rs, 0).expect("oracle runs");
        let mut indices = Vec::with_capacity(ann.len());
        for (i, a) in ann.iter().enumerate() {
            match a {
                SchurIndexValue::Exact(m) => indices.push(*m),
                SchurIndexValue::LowerBound(m) => {
                    eprintln!(
                        "ABORT: {} orbit {} not certified (lower bound {}); cannot pin",
                        label, i, m
                    );
                    std::process::exit(1);
                }
            }
        }
        let q_degrees: Vec<u64> = rs.orbits().iter().map(|o| o.q_degree()).collect();
        eprintln!(
            "{:<10} order {:>4}  indices {:?}  ({:.2?})",
            label,
            table.group().order(),
            indices,
            start.elapsed()
        );
        entries.push(OverrideEntry {
            group: table.group().canonical_content(),
            label,
            orbit_q_degrees: q_degrees,
            schur_indices: indices,
        });
    }

    for spec in PINNED_SPECS {
        let start = Instant::now();
        let group = FiniteGroup::from_spec(spec).expect("pinned spec parses");
        let label = format!("{} (pinned)", group.name());
        let table = CharacterTable::build(group).expect("table builds");
        let rs = RationalStructure::from_table(&table).expect("orbits form");
        let mut indices = Vec::with_capacity(rs.count());
        for i in 0..rs.count() {
            match oracle::width_certificate(&table, &rs, i, None).expect("certificate runs") {
                Some(m) => indices.push(m),
                None => {
                    eprintln!(
                        "ABORT: {} orbit {} not pinned by the divisibility certificate",
                        label, i
                    );
                    std::process::exit(1);
                }
            }
        }
        let q_degrees: Vec<u64> = rs.orbits().iter().map(|o| o.q_degree()).collect();
        eprintln!(
            "{:<10} order {:>4}  indices {:?}  ({:.2?})",
            label,
            table.group().order(),
            indices,
            start.elapsed()
        );
        entries.push(OverrideEntry {
            group: table.group().canonical_content(),
            label,
            orbit_q_degrees: q_degrees,
            schur_indices: indices,
        });
    }

    let file = OverrideFile { entries };
    let json = serde_json::to_string_pretty(&file).expect("serializes");
    std::fs::write(&out, json + "\n").expect("write override table");
    eprintln!("wrote {}", out);
}
