//! Plain-text rendering of report envelopes.

use rankgrowth_core::qcurve::{QCurveCertificate, QuadInt};
use rankgrowth_core::rational::SchurPolicy;
use rankgrowth_core::report::{
    CharTableReport, OracleVerifyReport, ReportBody, ReportEnvelope,
};

fn policy_name(policy: SchurPolicy) -> &'static str {
    match policy {
        SchurPolicy::LowerBound => "lower-bound",
        SchurPolicy::Oracle => "oracle",
        SchurPolicy::Override => "override",
    }
}

/// Render a whole envelope as human-readable text.
pub fn render(envelope: &ReportEnvelope) -> String {
    let mut out = String::new();
    out.push_str(&format!("# {}\n", envelope.command));
    out.push_str(&format!(
        "tool {}  policy {} (oracle bound {}, seed {})  {} ms\n\n",
        envelope.version,
        policy_name(envelope.policy.schur),
        envelope.policy.oracle_bound,
        envelope.policy.seed,
        envelope.elapsed_ms
    ));
    match &envelope.body {
        ReportBody::CharTable(r) => render_char_table(&mut out, r),
        ReportBody::Galois(a) => {
            out.push_str(&format!("group {} (order {})\n", a.group, a.group_order));
            out.push_str(&format!(
                "nontrivial module dimensions: {:?}{}\n",
                a.module_dims,
                if a.dims_exact { "" } else { "  (lower bounds)" }
            ));
            out.push_str(&format!(
                "minimal nonzero rank jump: {} ({})\n",
                a.min_nonzero_jump, a.min_mode
            ));
            out.push_str(&format!("every jump is divisible by: {}\n", a.jump_gcd));
            if let Some(set) = &a.achievable {
                let values: Vec<String> = set.values.iter().map(u64::to_string).collect();
                out.push_str(&format!(
                    "achievable jumps up to {}: {}\n",
                    set.bound,
                    values.join(", ")
                ));
            }
            if !a.notes.is_empty() {
                out.push_str("notes:\n");
                for note in &a.notes {
                    out.push_str(&format!("  - {}\n", note));
                }
            }
        }
        ReportBody::Relative(a) => {
            out.push_str(&format!(
                "group {}  subgroup order {}  index {}\n\n",
                a.group, a.subgroup_order, a.subgroup_index
            ));
            let mut rows = vec![vec![
                "orbit".to_string(),
                "q-dim".to_string(),
                "fixed dim".to_string(),
                "".to_string(),
            ]];
            for r in &a.rows {
                rows.push(vec![
                    r.orbit.to_string(),
                    r.q_dimension.to_string(),
                    r.fixed_dimension.to_string(),
                    if r.trivial {
                        "(trivial)".to_string()
                    } else {
                        String::new()
                    },
                ]);
            }
            out.push_str(&grid(&rows));
            match &a.multiplier {
                Some(c) => out.push_str(&format!("\nmultiplier c = {}\n", c)),
                None => out.push_str("\nno nontrivial orbit has fixed vectors\n"),
            }
            out.push_str(&format!("parity gcd: {}\n", a.parity_gcd));
            out.push_str(&format!("\n{}\n", a.statement));
        }
        ReportBody::Lattice(a) => {
            out.push_str(&format!("group {}\n\n", a.group));
            let mut header = vec![
                "orbit".to_string(),
                "letter".to_string(),
                "q-deg".to_string(),
                "schur".to_string(),
            ];
            for (label, order) in a.subgroup_labels.iter().zip(&a.subgroup_orders) {
                header.push(format!("{} (|H|={})", label, order));
            }
            let mut rows = vec![header];
            for j in 0..a.letters.len() {
                let mut row = vec![
                    format!(
                        "{}{}",
                        j,
                        if j == a.trivial_orbit { "*" } else { "" }
                    ),
                    a.letters[j].clone(),
                    a.q_degrees[j].to_string(),
                    a.schur_indices[j].to_string(),
                ];
                for i in 0..a.subgroup_labels.len() {
                    row.push(a.matrix[j][i].to_string());
                }
                rows.push(row);
            }
            out.push_str(&grid(&rows));
            out.push_str("(* marks the trivial orbit; matrix entries are fixed dimensions)\n\n");
            for (label, expr) in a.subgroup_labels.iter().zip(&a.rank_expressions) {
                out.push_str(&format!("rk A({}) = {}\n", label, expr));
            }
        }
        ReportBody::Twist(t) => {
            out.push_str(&format!("lattice shape {:?}, n = {}\n\n", t.lattice, t.n));
            for line in &t.derivation {
                out.push_str(&format!("  {}\n", line));
            }
            out.push_str(&format!("\nconclusion: {}\n", t.conclusion));
            out.push_str(&format!(
                "guaranteed divisor of rk A^δ(L): {}\n",
                t.twist_rank_divisor
            ));
        }
        ReportBody::QCurve(c) => render_qcurve(&mut out, c),
        ReportBody::OracleVerify(r) => render_oracle(&mut out, r),
    }
    out
}

fn render_char_table(out: &mut String, r: &CharTableReport) {
    out.push_str(&format!(
        "group {}  order {}  classes {}\n",
        r.group, r.order, r.class_count
    ));
    out.push_str(&format!("class sizes:    {:?}\n", r.class_sizes));
    out.push_str(&format!("element orders: {:?}\n", r.class_rep_orders));
    out.push_str(&format!("values in Q(ζ{})\n\n", r.root_order));

    out.push_str("complex irreducible characters:\n");
    let mut rows = vec![{
        let mut h = vec!["".to_string(), "deg".to_string(), "ind".to_string()];
        h.extend((0..r.class_count).map(|k| format!("C{}", k)));
        h
    }];
    for (i, row) in r.complex_rows.iter().enumerate() {
        let mut line = vec![
            format!("χ{}", i),
            row.degree.to_string(),
            format!("{:+}", row.indicator),
        ];
        line.extend(row.values.iter().cloned());
        rows.push(line);
    }
    out.push_str(&grid(&rows));

    out.push_str("\nrational irreducible characters:\n");
    let mut rows = vec![{
        let mut h = vec![
            "".to_string(),
            "q-deg".to_string(),
            "orbit".to_string(),
            "schur".to_string(),
            "ind".to_string(),
        ];
        h.extend((0..r.class_count).map(|k| format!("C{}", k)));
        h
    }];
    for (j, row) in r.rational_rows.iter().enumerate() {
        let schur = format!(
            "{}{}",
            row.schur.value(),
            if row.schur.is_exact() { "" } else { "+" }
        );
        let mut line = vec![
            format!("Φ{}", j),
            row.q_degree.to_string(),
            row.orbit_size.to_string(),
            schur,
            format!("{:+}", row.indicator),
        ];
        line.extend(row.values.iter().map(|v| v.to_string()));
        rows.push(line);
    }
    out.push_str(&grid(&rows));
    out.push_str("(schur \"m+\" marks a lower bound; q-deg already includes the schur factor)\n");

    if let Some(dec) = &r.oracle {
        out.push_str(&format!(
            "\noracle: isotypic dimensions sum to {} (group order {})\n",
            dec.isotypic_sum(),
            dec.group_order
        ));
    }
}

fn quad(q: &QuadInt) -> String {
    match (q.c0, q.c1) {
        (c0, 0) => c0.to_string(),
        (0, c1) => format!("{}√a", c1),
        (c0, c1) if c1 < 0 => format!("{} - {}√a", c0, -c1),
        (c0, c1) => format!("{} + {}√a", c0, c1),
    }
}

fn render_qcurve(out: &mut String, c: &QCurveCertificate) {
    out.push_str(&format!(
        "n = {}: prime p = {} (p ≡ 5 mod 12, ν = ord₂(p−1) = {})\n",
        c.n, c.p, c.nu
    ));
    if !c.extra_primes.is_empty() {
        let more: Vec<String> = c.extra_primes.iter().map(u64::to_string).collect();
        out.push_str(&format!("further qualifying primes: {}\n", more.join(", ")));
    }
    out.push_str(&format!(
        "unit group (Z/{})^× ≅ Z/{} × Z/{}, generators ({}, {})\n",
        c.unit_group.modulus,
        c.unit_group.invariant_factors[0],
        c.unit_group.invariant_factors[1],
        c.unit_group.generators[0],
        c.unit_group.generators[1]
    ));
    out.push_str(&format!(
        "character: exponents ({}, {}), order {}, conductor {}\n",
        c.character.exponents[0], c.character.exponents[1], c.character.order, c.character.conductor
    ));
    out.push_str(&format!(
        "curve over Z[√a], a = {}: y² = x³ + ({})·x + ({})\n",
        c.curve.a,
        quad(&c.curve.coeff_x),
        quad(&c.curve.coeff_const)
    ));
    out.push_str(&format!(
        "degree chain: φ(2^{}) · 2 = {} ≥ {} = 2^{}\n",
        c.nu + 1,
        c.degree_chain.total_degree,
        c.degree_chain.required_degree,
        c.n + 1
    ));
    out.push_str(&format!("\n{}\n", c.conclusion));
    out.push_str(&format!("note: {}\n", c.conditional_note));
}

fn render_oracle(out: &mut String, r: &OracleVerifyReport) {
    out.push_str(&format!("group {}  order {}\n", r.group, r.order));
    out.push_str(&format!(
        "orthogonality re-checked: {}\n",
        if r.orthogonality_checked { "yes" } else { "no" }
    ));
    out.push_str(&format!(
        "isotypic dimension sum: {} (matches order: {})\n\n",
        r.isotypic_sum, r.sum_matches_order
    ));
    let mut rows = vec![vec![
        "orbit".to_string(),
        "isotypic".to_string(),
        "minimal".to_string(),
        "mult".to_string(),
        "width".to_string(),
        "certified".to_string(),
    ]];
    for comp in &r.decomposition.components {
        rows.push(vec![
            comp.orbit.to_string(),
            comp.isotypic_dimension.to_string(),
            comp.minimal_dimension.to_string(),
            comp.multiplicity.map_or("-".into(), |m| m.to_string()),
            comp.width_candidate.to_string(),
            comp.width_certified.map_or("no".into(), |w| w.to_string()),
        ]);
    }
    out.push_str(&grid(&rows));
    out.push_str(&format!(
        "\nall widths certified exact: {}\n",
        r.all_widths_certified
    ));
}

/// Fixed-width column layout; the first row is the header.
fn grid(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            let pad = widths[i] - cell.chars().count();
            if i == 0 {
                line.push_str(cell);
                line.push_str(&" ".repeat(pad));
            } else {
                line.push_str(&" ".repeat(pad));
                line.push_str(cell);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
