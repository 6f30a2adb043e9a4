use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use knn_symmetry::bipartite::{BipartiteAutomorphism, VertexId};
use knn_symmetry::classify::{enumerate_groups, ClassificationVerdict, Condition, GroupSpec};
use knn_symmetry::edgecheck::{check_conditions, subgroup_witness, EdgeError, SearchMode, DEFAULT_MAX_VERTICES};
use knn_symmetry::families::{build_group, build_placement, induced_action, induced_report, Family, FamilyParams};
use knn_symmetry::matrixcheck::{analyze_angles, expected_fixed_dim, fixed_space_dim, motion_to_matrix, so4_report};
use knn_symmetry::oracle::{crosscheck_table, MAX_N};
use knn_symmetry::realizable::match_cases;

#[derive(Parser)]
#[command(name = "knn-tsg", version, about = "Topological symmetry groups of K_{n,n}")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    G1,
    G2,
    G3,
    J1,
    J2,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Restricted,
    Exhaustive,
}

#[derive(Args)]
struct GroupArgs {
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    s: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a group is a topological symmetry group of K_{n,n}.
    Classify {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        group: GroupArgs,
        /// Ask about (Zr x Zs) x Z2 instead of Zr x Zs.
        #[arg(long)]
        semidirect: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Tabulate every candidate group up to an order bound.
    Enumerate {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        max_order: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Match one automorphism, given in cycle notation, against the templates.
    CheckPerm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        perm: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Build a placement for a family and verify it.
    Construct {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value = "restricted")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare the congruence conditions with exhaustive enumeration.
    Oracle {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 12)]
        max_m: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check a family's motions against explicit 4x4 matrices.
    VerifySo4 {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// What a command produced: text or JSON, and the exit status.
struct Outcome {
    text: String,
    json: Value,
    code: u8,
}

fn usage(msg: &str) -> Result<Outcome, String> {
    Err(msg.to_string())
}

fn envelope(query: Value, verdict: Value, matched: Vec<String>, witnesses: Vec<Value>) -> Value {
    json!({ "query": query, "verdict": verdict, "matched_conditions": matched, "witnesses": witnesses })
}

fn failure(query: Value, text: String, error: String) -> Outcome {
    let mut json = envelope(query, Value::Null, vec![], vec![]);
    json["error"] = Value::String(error);
    Outcome { text, json, code: 1 }
}

fn condition_json(c: Condition) -> Value {
    json!({ "id": c.to_string(), "label": c.label(), "statement": c.statement() })
}

fn group_spec(group: &GroupArgs, semidirect: bool) -> Result<GroupSpec, String> {
    match (group.m, group.r, group.s) {
        (Some(m), None, None) => Ok(if semidirect { GroupSpec::Dihedral { m } } else { GroupSpec::Cyclic { m } }),
        (None, Some(r), Some(s)) => {
            Ok(if semidirect { GroupSpec::SemidirectProduct { r, s } } else { GroupSpec::Product { r, s } })
        }
        _ => Err("give either --m, or both --r and --s".to_string()),
    }
}

fn family(arg: FamilyArg, group: &GroupArgs) -> Result<Family, String> {
    let need_m = || group.m.filter(|_| group.r.is_none() && group.s.is_none()).ok_or("this family takes --m only");
    Ok(match arg {
        FamilyArg::G1 => Family::G1 { m: need_m()? },
        FamilyArg::G2 => Family::G2 { m: need_m()? },
        FamilyArg::G3 => Family::G3 { m: need_m()? },
        FamilyArg::J1 => match (group.m, group.r, group.s) {
            (None, Some(r), Some(s)) => Family::J1 { r, s },
            _ => return Err("j1 takes --r and --s".to_string()),
        },
        FamilyArg::J2 => match (group.m, group.r, group.s) {
            (None, None, Some(s)) | (None, Some(2), Some(s)) => Family::J2 { s },
            _ => return Err("j2 takes --s".to_string()),
        },
    })
}

fn describe_verdict(v: &ClassificationVerdict) -> String {
    let mut out = String::new();
    writeln!(out, "containment: {:?}", v.containment).unwrap();
    writeln!(out, "equality: {:?}", v.equality).unwrap();
    if v.matched_conditions.is_empty() {
        writeln!(out, "matched: none").unwrap();
    }
    for c in &v.matched_conditions {
        writeln!(out, "matched: {} [{}]: {}", c.label(), c, c.statement()).unwrap();
    }
    if let Some(note) = &v.normalization_note {
        writeln!(out, "note: {note}").unwrap();
    }
    if let Some(d) = &v.delegated_to {
        writeln!(out, "answered by: {d}").unwrap();
    }
    out
}

fn classify(n: u64, group: &GroupArgs, semidirect: bool) -> Result<Outcome, String> {
    let spec = group_spec(group, semidirect)?;
    let query = json!({ "n": n, "group": spec, "name": spec.to_string() });
    let verdict = match spec.classify(n) {
        Ok(v) => v,
        Err(e) => return Ok(failure(query, format!("error: {e}\n"), e.to_string())),
    };
    let text = format!("K_{{{n},{n}}} with {spec}\n{}", describe_verdict(&verdict));
    let matched = verdict.matched_conditions.iter().map(|c| c.to_string()).collect();
    let witnesses = verdict.matched_conditions.iter().map(|&c| condition_json(c)).collect();
    let json = envelope(query, serde_json::to_value(&verdict).unwrap(), matched, witnesses);
    Ok(Outcome { text, json, code: 0 })
}

fn enumerate(n: u64, max_order: u64, format: Format) -> Result<Outcome, String> {
    let query = json!({ "n": n, "max_order": max_order });
    let rows = match enumerate_groups(n, max_order) {
        Ok(rows) => rows,
        Err(e) => return Ok(failure(query, format!("error: {e}\n"), e.to_string())),
    };
    let joined = |v: &ClassificationVerdict, sep: &str| v.matched_conditions.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(sep);
    let mut text = String::new();
    if format == Format::Csv {
        text.push_str("group,order,containment,equality,conditions\n");
        for (g, v) in &rows {
            writeln!(text, "{g},{},{:?},{:?},{}", g.order(), v.containment, v.equality, joined(v, ";")).unwrap();
        }
    } else {
        writeln!(text, "{:<14} {:>5}  {:<11} {:<13} conditions", "group", "order", "containment", "equality").unwrap();
        for (g, v) in &rows {
            let row = format!("{g}");
            let eq = format!("{:?}", v.equality);
            let cont = format!("{:?}", v.containment);
            writeln!(text, "{row:<14} {:>5}  {cont:<11} {eq:<13} {}", g.order(), joined(v, " ")).unwrap();
        }
    }
    let mut matched: Vec<String> = rows.iter().flat_map(|(_, v)| v.matched_conditions.iter().map(|c| c.to_string())).collect();
    matched.sort();
    matched.dedup();
    let table: Vec<Value> = rows
        .iter()
        .map(|(g, v)| json!({ "group": g, "name": g.to_string(), "order": g.order(), "verdict": v }))
        .collect();
    Ok(Outcome { text, json: envelope(query, Value::Array(table), matched, vec![]), code: 0 })
}

fn check_perm(n: usize, perm: &str) -> Result<Outcome, String> {
    let query = json!({ "n": n, "perm": perm });
    let phi = match BipartiteAutomorphism::parse_cycles(n, perm) {
        Ok(p) => p,
        Err(e) => return Ok(failure(query, format!("error: {e}\n"), e.to_string())),
    };
    let verdict = match match_cases(&phi) {
        Ok(v) => v,
        Err(e) => return Ok(failure(query, format!("error: {e}\n"), e.to_string())),
    };
    let cs = phi.cycle_structure();
    let mut text = String::new();
    writeln!(text, "automorphism: {phi}").unwrap();
    writeln!(text, "order: {}", verdict.order).unwrap();
    writeln!(text, "swaps parts: {}", phi.swaps_parts()).unwrap();
    writeln!(
        text,
        "cycles: V {:?}, W {:?}, alternating {:?}, fixed {} + {}",
        cs.v_cycles, cs.w_cycles, cs.mixed_cycles, cs.fixed_v, cs.fixed_w
    )
    .unwrap();
    writeln!(text, "realizable: {}{}", verdict.realizable, if verdict.trivial { " (identity)" } else { "" }).unwrap();
    for m in &verdict.matches {
        let params: Vec<String> = m.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let swapped = if m.parts_swapped_for_match { ", parts swapped" } else { "" };
        writeln!(text, "case ({}){}{}", m.case_id, swapped, if params.is_empty() { String::new() } else { format!(": {}", params.join(", ")) })
            .unwrap();
    }
    for d in &verdict.diagnostics {
        writeln!(text, "diagnostic: {d}").unwrap();
    }
    let matched = verdict.matches.iter().map(|m| format!("case ({})", m.case_id)).collect();
    let witnesses = verdict.matches.iter().map(|m| serde_json::to_value(m).unwrap()).collect();
    let body = json!({
        "order": verdict.order,
        "swaps_parts": phi.swaps_parts(),
        "cycle_structure": cs,
        "realizability": verdict,
    });
    Ok(Outcome { text, json: envelope(query, body, matched, witnesses), code: 0 })
}

fn targets(f: Family) -> [GroupSpec; 2] {
    match f {
        Family::G1 { m } | Family::G2 { m } | Family::G3 { m } => [GroupSpec::Dihedral { m }, GroupSpec::Cyclic { m }],
        Family::J1 { r, s } => [GroupSpec::SemidirectProduct { r, s }, GroupSpec::Product { r, s }],
        Family::J2 { s } => [GroupSpec::SemidirectProduct { r: 2, s }, GroupSpec::Product { r: 2, s }],
    }
}

fn construct(arg: FamilyArg, n: u64, group: &GroupArgs, mode: ModeArg) -> Result<Outcome, String> {
    let fam = family(arg, group)?;
    let params = FamilyParams::new(fam, n);
    let query = json!({ "family": fam, "n": n });
    let placement = match build_placement(params) {
        Ok(p) => p,
        Err(e) => return Ok(failure(query, format!("error: {e}\n"), e.to_string())),
    };
    let mut text = String::new();
    let mut code = 0;
    writeln!(text, "{params}").unwrap();
    writeln!(text, "group order: {}", placement.group.order()).unwrap();
    for pv in placement.vertices() {
        writeln!(text, "  {:<4} {} (stabilizer {})", pv.vertex.to_string(), pv.point, placement.group.stabilizer(&pv.point).len()).unwrap();
    }
    let induced = match induced_action(&placement) {
        Ok(a) => induced_report(&placement, &a),
        Err(e) => return Ok(failure(query, format!("{text}error: {e}\n"), e.to_string())),
    };
    let induced_ok = induced.faithful && induced.homomorphism && induced.relations && induced.orbits_lemma;
    writeln!(
        text,
        "induced action: image order {}, faithful {}, homomorphism {}, relations {}, orbits of commuting elements {}",
        induced.image_order, induced.faithful, induced.homomorphism, induced.relations, induced.orbits_lemma
    )
    .unwrap();
    if !induced_ok {
        code = 1;
    }
    let conditions = check_conditions(&placement);
    for (i, c) in conditions.conditions.iter().enumerate() {
        let status = match c {
            knn_symmetry::edgecheck::ConditionResult::Pass => "pass".to_string(),
            knn_symmetry::edgecheck::ConditionResult::Fail { witness } => format!("FAIL: {witness}"),
        };
        writeln!(text, "edge embedding condition ({}): {status}", i + 1).unwrap();
    }
    if let Some(arcs) = &conditions.arcs {
        for c in &arcs.circles {
            let list: Vec<String> = c.arcs.iter().map(|a| format!("{}{} [{}, {}]", a.v, a.w, a.start, a.end)).collect();
            writeln!(text, "  arcs on {}: {}", c.circle, list.join(", ")).unwrap();
        }
    }
    if !conditions.passed() {
        code = 1;
    }
    let mode = match mode {
        ModeArg::Restricted => SearchMode::Restricted,
        ModeArg::Exhaustive => SearchMode::Exhaustive,
    };
    let mut witnesses = Vec::new();
    if 2 * placement.n() <= DEFAULT_MAX_VERTICES {
        for target in targets(fam) {
            let value = match subgroup_witness(&placement, target, mode) {
                Ok(r) => {
                    writeln!(
                        text,
                        "witness for {target}: pass ({}: {}; {} admissible maps, forced K_{{{},{}}})",
                        r.plan,
                        edge_list(&r.designated),
                        r.admissible,
                        r.forced.0,
                        r.forced.1
                    )
                    .unwrap();
                    json!({ "status": "pass", "report": r })
                }
                Err(EdgeError::WitnessFailed(r)) => {
                    code = 1;
                    let cx = r.counterexample.as_ref().map(|c| c.psi.to_string()).unwrap_or_else(|| "-".into());
                    writeln!(text, "witness for {target}: FAIL ({}: {}; counterexample {cx})", r.plan, edge_list(&r.designated))
                        .unwrap();
                    json!({ "status": "fail", "report": r })
                }
                Err(e) => {
                    writeln!(text, "witness for {target}: not checked: {e}").unwrap();
                    json!({ "status": "skipped", "target": target, "reason": e.to_string() })
                }
            };
            witnesses.push(value);
        }
    } else {
        writeln!(text, "witnesses: not checked, 2n > {DEFAULT_MAX_VERTICES}").unwrap();
    }
    let matched = targets(fam)
        .iter()
        .filter_map(|t| t.classify(n).ok())
        .flat_map(|v| v.matched_conditions)
        .map(|c| c.to_string())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let body = json!({
        "placement": placement.report(),
        "induced_action": induced,
        "conditions": conditions,
        "passed": code == 0,
    });
    Ok(Outcome { text, json: envelope(query, body, matched, witnesses), code })
}

fn oracle(max_n: usize, max_m: u64) -> Result<Outcome, String> {
    if !(3..=MAX_N).contains(&max_n) {
        return usage(&format!("--max-n must be between 3 and {MAX_N}"));
    }
    if max_m < 2 {
        return usage("--max-m must be at least 2");
    }
    let query = json!({ "max_n": max_n, "max_m": max_m });
    let report = match crosscheck_table(3..=max_n, 2..=max_m) {
        Ok(r) => r,
        Err(e) => return Ok(failure(query, format!("error: {e}\n"), e.to_string())),
    };
    let mut text = String::new();
    writeln!(text, "{:>3} {:>3}  {:<6} {:<8} sample", "n", "m", "oracle", "classify").unwrap();
    for row in &report.rows {
        let sample = row.witness.as_ref().map(|w| w.to_string()).unwrap_or_else(|| "-".to_string());
        writeln!(text, "{:>3} {:>3}  {:<6} {:<8} {sample}", row.n, row.m, row.oracle, row.classify).unwrap();
    }
    writeln!(text, "discrepancies: {}", report.discrepancies.len()).unwrap();
    for (n, gaps) in &report.divisor_gaps {
        if !gaps.is_empty() {
            writeln!(text, "n = {n}: realizable orders with unrealizable divisors {gaps:?}").unwrap();
        }
    }
    let code = if report.discrepancies.is_empty() { 0 } else { 1 };
    let witnesses = report
        .rows
        .iter()
        .filter_map(|r| r.witness.as_ref().map(|w| json!({ "n": r.n, "m": r.m, "automorphism": w })))
        .collect();
    let body = json!({ "rows": report.rows, "discrepancies": report.discrepancies, "divisor_gaps": report.divisor_gaps });
    Ok(Outcome { text, json: envelope(query, body, vec![], witnesses), code })
}

fn verify_so4(arg: FamilyArg, group: &GroupArgs) -> Result<Outcome, String> {
    let fam = family(arg, group)?;
    let query = json!({ "family": fam });
    let g = match build_group(fam) {
        Ok(g) => g,
        Err(e) => return Ok(failure(query, format!("error: {e}\n"), e.to_string())),
    };
    let report = so4_report(&g);
    let mut text = String::new();
    writeln!(text, "{fam}: {} elements", report.group_order).unwrap();
    writeln!(text, "homomorphism error: {:.3e}", report.homomorphism_error).unwrap();
    writeln!(text, "orthogonality error: {:.3e}", report.max_orthogonality_error).unwrap();
    writeln!(text, "fixed space mismatches: {}", report.fixed_dim_mismatches.len()).unwrap();
    for m in &report.fixed_dim_mismatches {
        writeln!(text, "  {m}").unwrap();
    }
    writeln!(text, "commuting rotation pairs: {}, off-block norm {:.3e}", report.commuting_pairs, report.max_off_block).unwrap();
    let mut elements = Vec::new();
    for &x in g.elements() {
        let m = motion_to_matrix(x);
        let angles = analyze_angles(&m);
        let dim = fixed_space_dim(&m).ok();
        writeln!(
            text,
            "  {x}: fixes {} (dim {}), angles {:+.4} {:+.4}, isoclinic {:?}",
            x.fixed_set(),
            dim.map_or("?".to_string(), |d| d.to_string()),
            angles.alpha,
            angles.beta,
            angles.isoclinic
        )
        .unwrap();
        elements.push(json!({
            "motion": x,
            "fixed_set": x.fixed_set().to_string(),
            "fixed_dim": dim,
            "expected_fixed_dim": expected_fixed_dim(x.fixed_set()),
            "angles": angles,
        }));
    }
    let passed = report.passed();
    writeln!(text, "{}", if passed { "pass" } else { "FAIL" }).unwrap();
    let body = json!({ "report": report, "elements": elements, "passed": passed });
    Ok(Outcome { text, json: envelope(query, body, vec![], vec![]), code: if passed { 0 } else { 1 } })
}

fn run(cli: Cli) -> Result<(Outcome, Format), String> {
    Ok(match cli.command {
        Command::Classify { n, group, semidirect, format } => (classify(n, &group, semidirect)?, format),
        Command::Enumerate { n, max_order, format } => (enumerate(n, max_order, format)?, format),
        Command::CheckPerm { n, perm, format } => (check_perm(n, &perm)?, format),
        Command::Construct { family, n, group, mode, format } => (construct(family, n, &group, mode)?, format),
        Command::Oracle { max_n, max_m, format } => (oracle(max_n, max_m)?, format),
        Command::VerifySo4 { family, group, format } => (verify_so4(family, &group)?, format),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let csv_ok = matches!(cli.command, Command::Enumerate { .. });
    let format = match &cli.command {
        Command::Classify { format, .. }
        | Command::Enumerate { format, .. }
        | Command::CheckPerm { format, .. }
        | Command::Construct { format, .. }
        | Command::Oracle { format, .. }
        | Command::VerifySo4 { format, .. } => *format,
    };
    if format == Format::Csv && !csv_ok {
        eprintln!("error: --format csv is only available for enumerate");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok((outcome, format)) => {
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&outcome.json).unwrap()),
                _ => print!("{}", outcome.text),
            }
            ExitCode::from(outcome.code)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn edge_list(edges: &[(VertexId, VertexId)]) -> String {
    edges.iter().map(|(v, w)| format!("{v}{w}")).collect::<Vec<_>>().join(", ")
}
