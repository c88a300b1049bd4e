//! Command-line front end: every subcommand computes one analysis, wraps it
//! in a self-describing envelope, and prints it as text or JSON.
//!
//! Exit codes: 0 success; 1 usage or domain errors; 2 resource ceilings and
//! I/O failures; 3 internal consistency failures.

mod render;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use rankgrowth_core::cache;
use rankgrowth_core::chartab::CharacterTable;
use rankgrowth_core::constraints::{index_two_gate, jump_analysis, relative_analysis, schur_annotations};
use rankgrowth_core::error::{Error, Result};
use rankgrowth_core::group::FiniteGroup;
use rankgrowth_core::lattice::{
    lattice_analysis, preset_d4, preset_v4, LatticeKind, LatticePreset, twist_divisibility,
};
use rankgrowth_core::oracle::{annotations_from_decomposition, decompose_regular};
use rankgrowth_core::qcurve::{divisibility_certificate, find_primes};
use rankgrowth_core::rational::{RationalStructure, SchurPolicy};
use rankgrowth_core::report::{
    char_table_report, OracleVerifyReport, PolicyStamp, ReportBody, ReportEnvelope,
};

#[derive(Parser)]
#[command(
    name = "rankgrowth",
    version,
    about = "Rank-growth constraints from rational character tables",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonFlags {
    /// Print the full report envelope as JSON.
    #[arg(long)]
    json: bool,
    /// Ceiling for enumerating the achievable jump set.
    #[arg(long, default_value_t = 50)]
    bound: u64,
    /// Schur-index policy: lower-bound, oracle, or override.
    #[arg(long, value_parser = parse_policy)]
    schur: Option<SchurPolicy>,
    /// Seed for the decomposition search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for verified character-table snapshots.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Disable the snapshot cache even if the environment configures one.
    #[arg(long)]
    no_cache: bool,
}

impl CommonFlags {
    fn policy(&self, default: SchurPolicy) -> SchurPolicy {
        self.schur.unwrap_or(default)
    }

    fn cache(&self) -> Option<PathBuf> {
        cache::resolve_dir(self.cache_dir.clone(), self.no_cache)
    }
}

fn parse_policy(text: &str) -> std::result::Result<SchurPolicy, String> {
    match text {
        "lower-bound" => Ok(SchurPolicy::LowerBound),
        "oracle" => Ok(SchurPolicy::Oracle),
        "override" => Ok(SchurPolicy::Override),
        other => Err(format!(
            "unknown policy '{}'; expected lower-bound, oracle, or override",
            other
        )),
    }
}

fn policy_name(policy: SchurPolicy) -> &'static str {
    match policy {
        SchurPolicy::LowerBound => "lower-bound",
        SchurPolicy::Oracle => "oracle",
        SchurPolicy::Override => "override",
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute a group's complex and rational character tables.
    CharTable {
        /// Group specification, e.g. S4, A5, C12, D4, SL2(5), PSL2(7).
        group: String,
        /// Decompose the regular module and attach the verification report.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Bound and enumerate rank jumps across the full extension.
    AnalyzeGalois {
        group: String,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Compare jumps over the full field with jumps over a fixed field.
    AnalyzeRelative {
        group: String,
        /// Subgroup generators as comma-separated cycles, e.g. "(2 3),(2 3 4)".
        #[arg(long)]
        subgroup: String,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Parametrize ranks over a lattice of fixed fields by symbolic letters.
    Lattice {
        /// Group specification; optional when --preset is given.
        group: Option<String>,
        /// Built-in lattice: v4 or d4.
        #[arg(long)]
        preset: Option<String>,
        /// One subgroup column per flag, as comma-separated generator cycles.
        #[arg(long = "subgroup")]
        subgroups: Vec<String>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Replay the twist-rank divisibility for a V4- or D4-shaped lattice.
    Twist {
        /// Lattice shape: V4 or D4.
        kind: String,
        /// The endomorphism-field degree n.
        n: u64,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Certify 2-power rank divisibility for the quadratic-twist curve family.
    Qcurve {
        /// The exponent n ≥ 2; the certificate forces divisibility by 2^n.
        n: u32,
        /// How many qualifying primes to list.
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Decompose the regular module and re-verify every exactness check.
    OracleVerify {
        group: String,
        #[command(flatten)]
        common: CommonFlags,
    },
}

fn build_tables(
    spec: &str,
    cache_dir: Option<&Path>,
) -> Result<(CharacterTable, RationalStructure)> {
    let group = FiniteGroup::from_spec(spec)?;
    let table = CharacterTable::build(group)?;
    if let Some(dir) = cache_dir {
        cache::record(dir, &table)?;
    }
    let rs = RationalStructure::from_table(&table)?;
    Ok((table, rs))
}

fn quote_if_spaced(text: &str) -> String {
    if text.contains(' ') {
        format!("\"{}\"", text)
    } else {
        text.to_string()
    }
}

fn run(command: &Command) -> Result<(ReportEnvelope, bool)> {
    let started = Instant::now();
    let (envelope, json) = match command {
        Command::CharTable {
            group,
            oracle,
            common,
        } => {
            let policy = common.policy(SchurPolicy::LowerBound);
            let (table, rs) = build_tables(group, common.cache().as_deref())?;
            let annotations = schur_annotations(&table, &rs, policy, common.seed)?;
            let decomposition = if *oracle {
                Some(decompose_regular(&table, &rs, common.seed)?)
            } else {
                None
            };
            let body = char_table_report(&table, &rs, &annotations, decomposition)?;
            let cmd = format!(
                "char-table {}{} --schur {} --seed {}",
                quote_if_spaced(group),
                if *oracle { " --oracle" } else { "" },
                policy_name(policy),
                common.seed
            );
            (
                ReportEnvelope::new(
                    cmd,
                    Some(group.clone()),
                    PolicyStamp::new(policy, common.seed),
                    ReportBody::CharTable(body),
                    started.elapsed().as_millis() as u64,
                ),
                common.json,
            )
        }
        Command::AnalyzeGalois { group, common } => {
            let policy = common.policy(SchurPolicy::LowerBound);
            let (table, rs) = build_tables(group, common.cache().as_deref())?;
            let annotations = schur_annotations(&table, &rs, policy, common.seed)?;
            let mut analysis = jump_analysis(&table, &rs, &annotations, common.bound)?;
            let gate = index_two_gate(&table, &rs)?;
            analysis.notes.push(gate.statement);
            let cmd = format!(
                "analyze-galois {} --bound {} --schur {} --seed {}",
                quote_if_spaced(group),
                common.bound,
                policy_name(policy),
                common.seed
            );
            (
                ReportEnvelope::new(
                    cmd,
                    Some(group.clone()),
                    PolicyStamp::new(policy, common.seed),
                    ReportBody::Galois(analysis),
                    started.elapsed().as_millis() as u64,
                ),
                common.json,
            )
        }
        Command::AnalyzeRelative {
            group,
            subgroup,
            common,
        } => {
            let policy = common.policy(SchurPolicy::LowerBound);
            let (table, rs) = build_tables(group, common.cache().as_deref())?;
            let gens: Vec<&str> = subgroup.split(',').map(str::trim).collect();
            let sub = table.group().subgroup_from_cycles(&gens)?;
            let analysis = relative_analysis(&table, &rs, &sub)?;
            let cmd = format!(
                "analyze-relative {} --subgroup \"{}\" --schur {} --seed {}",
                quote_if_spaced(group),
                subgroup,
                policy_name(policy),
                common.seed
            );
            (
                ReportEnvelope::new(
                    cmd,
                    Some(group.clone()),
                    PolicyStamp::new(policy, common.seed),
                    ReportBody::Relative(analysis),
                    started.elapsed().as_millis() as u64,
                ),
                common.json,
            )
        }
        Command::Lattice {
            group,
            preset,
            subgroups,
            common,
        } => {
            // Exact Schur data is required to evaluate rank expressions, so
            // the pinned table is the default here.
            let policy = common.policy(SchurPolicy::Override);
            let (body, group_label, cmd) = match preset.as_deref() {
                Some(name) => {
                    let preset_data: LatticePreset = match name {
                        "v4" => preset_v4()?,
                        "d4" => preset_d4()?,
                        other => {
                            return Err(Error::Domain(format!(
                                "unknown preset '{}'; expected v4 or d4",
                                other
                            )))
                        }
                    };
                    if !subgroups.is_empty() {
                        return Err(Error::Domain(
                            "--preset and --subgroup are mutually exclusive".into(),
                        ));
                    }
                    let preset_name = preset_data.table.group().name().to_string();
                    if let Some(g) = group {
                        if !group_matches(g, &preset_data)? {
                            return Err(Error::Domain(format!(
                                "group '{}' does not match the {} preset",
                                g, preset_name
                            )));
                        }
                    }
                    if let Some(dir) = common.cache().as_deref() {
                        cache::record(dir, &preset_data.table)?;
                    }
                    let body = preset_data.analysis()?;
                    let cmd = format!("lattice {} --preset {}", preset_name, name);
                    (body, preset_name, cmd)
                }
                None => {
                    let spec = group.as_deref().ok_or_else(|| {
                        Error::Domain("lattice needs a group, or --preset".into())
                    })?;
                    if subgroups.is_empty() {
                        return Err(Error::Domain(
                            "lattice needs at least one --subgroup column, or --preset".into(),
                        ));
                    }
                    let (table, rs) = build_tables(spec, common.cache().as_deref())?;
                    let annotations = schur_annotations(&table, &rs, policy, common.seed)?;
                    let subs: Vec<FiniteGroup> = subgroups
                        .iter()
                        .map(|text| {
                            let gens: Vec<&str> = text.split(',').map(str::trim).collect();
                            table.group().subgroup_from_cycles(&gens)
                        })
                        .collect::<Result<_>>()?;
                    let labels: Vec<String> =
                        (1..=subs.len()).map(|i| format!("H{}", i)).collect();
                    let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
                    let body = lattice_analysis(&table, &rs, &annotations, &subs, &label_refs)?;
                    let cmd = format!(
                        "lattice {}{} --schur {} --seed {}",
                        quote_if_spaced(spec),
                        subgroups
                            .iter()
                            .map(|s| format!(" --subgroup \"{}\"", s))
                            .collect::<String>(),
                        policy_name(policy),
                        common.seed
                    );
                    (body, spec.to_string(), cmd)
                }
            };
            (
                ReportEnvelope::new(
                    cmd,
                    Some(group_label),
                    PolicyStamp::new(policy, common.seed),
                    ReportBody::Lattice(body),
                    started.elapsed().as_millis() as u64,
                ),
                common.json,
            )
        }
        Command::Twist { kind, n, common } => {
            let lattice_kind = match kind.to_ascii_uppercase().as_str() {
                "V4" => LatticeKind::V4,
                "D4" => LatticeKind::D4,
                other => {
                    return Err(Error::Domain(format!(
                        "unknown lattice shape '{}'; expected V4 or D4",
                        other
                    )))
                }
            };
            let body = twist_divisibility(lattice_kind, *n)?;
            let cmd = format!("twist {:?} {}", lattice_kind, n);
            (
                ReportEnvelope::new(
                    cmd,
                    None,
                    PolicyStamp::new(common.policy(SchurPolicy::Override), common.seed),
                    ReportBody::Twist(body),
                    started.elapsed().as_millis() as u64,
                ),
                common.json,
            )
        }
        Command::Qcurve { n, count, common } => {
            let mut certificate = divisibility_certificate(*n)?;
            if *count > 1 {
                certificate.extra_primes = find_primes(*n, *count)?[1..].to_vec();
            }
            let cmd = format!("qcurve {} --count {}", n, count);
            (
                ReportEnvelope::new(
                    cmd,
                    None,
                    PolicyStamp::new(common.policy(SchurPolicy::LowerBound), common.seed),
                    ReportBody::QCurve(Box::new(certificate)),
                    started.elapsed().as_millis() as u64,
                ),
                common.json,
            )
        }
        Command::OracleVerify { group, common } => {
            let (table, rs) = build_tables(group, common.cache().as_deref())?;
            table.verify_orthogonality()?;
            let decomposition = decompose_regular(&table, &rs, common.seed)?;
            let annotations = annotations_from_decomposition(&decomposition, &rs);
            let isotypic_sum = decomposition.isotypic_sum();
            let order = table.group().order();
            if isotypic_sum != order {
                return Err(Error::Internal(format!(
                    "isotypic dimensions sum to {} but the group order is {}",
                    isotypic_sum, order
                )));
            }
            let body = OracleVerifyReport {
                group: table.group().name().to_string(),
                order,
                orthogonality_checked: true,
                isotypic_sum,
                sum_matches_order: isotypic_sum == order,
                all_widths_certified: annotations.iter().all(|a| a.is_exact()),
                annotations,
                decomposition,
            };
            let cmd = format!("oracle-verify {} --seed {}", quote_if_spaced(group), common.seed);
            (
                ReportEnvelope::new(
                    cmd,
                    Some(group.clone()),
                    PolicyStamp::new(SchurPolicy::Oracle, common.seed),
                    ReportBody::OracleVerify(body),
                    started.elapsed().as_millis() as u64,
                ),
                common.json,
            )
        }
    };
    Ok((envelope, json))
}

fn group_matches(text: &str, preset: &LatticePreset) -> Result<bool> {
    if text.eq_ignore_ascii_case(preset.table.group().name()) {
        return Ok(true);
    }
    match FiniteGroup::from_spec(text) {
        Ok(g) => Ok(g.canonical_content() == preset.table.group().canonical_content()),
        Err(_) => Ok(false),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(&cli.command) {
        Ok((envelope, json)) => {
            if json {
                println!("{}", envelope.to_json());
            } else {
                print!("{}", render::render(&envelope));
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            std::process::exit(e.exit_code());
        }
    }
}
