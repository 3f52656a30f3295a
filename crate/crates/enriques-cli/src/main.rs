//! Command-line frontend: every verification the library performs, exposed
//! as a reproducible command with machine-readable output.
//!
//! Exit codes: 0 on success, 1 for a verified negative finding (a NOT_FREE
//! verdict, or a witness that fails re-verification), 2 for usage errors.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use enriques_core::cycles::{
    build_action, freeness_bruteforce, freeness_criterion, recommended_levels, scan_z,
    ActionSpec, BdfRow, FreenessStatus, TorsionModel, VerdictRecord,
};
use enriques_core::lattice::{
    antiinvariant_k3, discriminant_group, e8, eigenlattice, hyperbolic_plane,
    k3_lattice_with_involution, roots_in_box, twist, IntegralLattice,
};
use enriques_core::mukai::{moduli_admissibility, mukai_square, ns_model, MukaiVector};
use enriques_core::numerics::{
    admissible_indices, chi_structure_sheaf, family_index_candidates, family_invariants,
    hodge_row, index_table_diff, phi_bound_indices, EnriquesShape, Family,
};
use enriques_core::torsion::{Levels, TorusPoint};
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeSet;
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "enriques",
    version,
    about = "Exact verification of Enriques-manifold constructions: torsion actions on \
             symmetric products, index tables, lattices and Mukai vectors"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Possible indices from the divisor and phi-bound constraints
    Indices(IndicesArgs),
    /// Hodge numbers h^{p,0} and chi of an Enriques shape
    Hodge(HodgeArgs),
    /// Invariant table of the known hyperkaehler families
    Families(FamiliesArgs),
    /// Freeness verdicts for symmetric-product actions
    Action(ActionArgs),
    /// Integral lattice calculators
    Lattice(LatticeArgs),
    /// Mukai vector admissibility over the scaled Neron-Severi model
    Mukai(MukaiArgs),
    /// Re-verify a recorded verdict (JSON from --file or stdin)
    VerifyWitness(VerifyArgs),
}

#[derive(Args)]
struct IndicesArgs {
    /// Half-dimension n (dim = 2n): restricts to divisors of n + 1
    #[arg(long)]
    n: Option<u64>,
    /// Second Betti number of the cover: restricts by phi(d) < b2
    #[arg(long)]
    b2: Option<u64>,
    /// Named family (uses its n and b2)
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    HilbK3,
    Kummer,
    Ogrady6,
    Ogrady10,
}

#[derive(Args)]
struct HodgeArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    d: u64,
}

#[derive(Args)]
struct FamiliesArgs {
    /// Half-dimension for the two infinite series
    #[arg(long, default_value_t = 2)]
    n: u64,
}

#[derive(Args)]
struct ActionArgs {
    /// Classification-table row (1-7)
    #[arg(long, conflicts_with = "lieberman")]
    row: Option<u8>,
    /// Use the product-of-elliptic-curves involution instead of a table row
    #[arg(long)]
    lieberman: bool,
    /// Half-dimension n: the action lives on cycles of length n + 1
    #[arg(long)]
    n: u64,
    /// Translation parameter z on the F factor, e.g. "1/6" or "1/6+1/6*tau"
    #[arg(long, default_value = "0")]
    z: String,
    /// Involution parameter a on E
    #[arg(long, default_value = "0")]
    a: String,
    /// Involution parameter a' on E' (must have exact order 2)
    #[arg(long = "a-prime", default_value = "1/2")]
    a_prime: String,
    /// Explicit model levels "E,F" (default: recommended levels)
    #[arg(long)]
    levels: Option<String>,
    #[arg(long, value_enum, default_value_t = Mode::Criterion)]
    mode: Mode,
    /// Exit 0 even when the verdict is NOT_FREE
    #[arg(long)]
    tolerate_not_free: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Criterion,
    Bruteforce,
    Scan,
}

#[derive(Args)]
struct LatticeArgs {
    #[command(subcommand)]
    which: LatticeCommand,
}

#[derive(Subcommand)]
enum LatticeCommand {
    /// The K3 lattice with its involution: Gram, signature, involution matrix
    K3,
    /// The antiinvariant sublattice: explicit basis, block Gram, discriminant
    AntiinvariantK3,
    /// Invariant or antiinvariant eigenlattice of the K3 involution
    Eigenlattice {
        #[arg(long, allow_hyphen_values = true, default_value_t = -1)]
        sign: i64,
    },
    /// E8 Gram matrix
    E8 {
        #[arg(long, allow_hyphen_values = true, default_value_t = -1)]
        sign: i64,
    },
    /// Hyperbolic plane Gram matrix, optionally twisted
    H {
        #[arg(long, default_value_t = 1)]
        twist: i64,
    },
    /// Signature of a Gram matrix
    Signature {
        #[arg(long)]
        gram: String,
    },
    /// Discriminant group (elementary divisors != 1) of a Gram matrix
    Disc {
        #[arg(long)]
        gram: String,
    },
    /// Vectors of a given norm with coordinates in a box
    Roots {
        /// Named lattice: e8, e8-neg, h, antiinvariant-k3; or use --gram
        #[arg(long, conflicts_with = "gram")]
        name: Option<String>,
        #[arg(long)]
        gram: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        norm: i64,
        #[arg(long)]
        bound: u64,
    },
}

#[derive(Args)]
struct MukaiArgs {
    #[arg(long, allow_hyphen_values = true)]
    r: i64,
    /// First Chern class: 10 comma-separated coordinates, or "0"
    #[arg(long, default_value = "0")]
    l: String,
    /// Euler characteristic chi (s = chi - r)
    #[arg(long, allow_hyphen_values = true)]
    chi: i64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Read the record from this file instead of stdin
    #[arg(long)]
    file: Option<String>,
}

/// Reproducible run envelope for machine-readable output. Identical inputs
/// yield byte-identical records, and serialization round-trips losslessly.
#[derive(Serialize, serde::Deserialize)]
struct RunRecord {
    command: String,
    parameters: serde_json::Value,
    result: serde_json::Value,
    verdicts: Vec<String>,
    version: String,
    /// Reserved for sampled runs; every current command is deterministic.
    seed: Option<u64>,
}

impl RunRecord {
    fn new(command: &str, parameters: serde_json::Value, result: serde_json::Value) -> Self {
        RunRecord {
            command: command.to_string(),
            parameters,
            result,
            verdicts: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Indices(args) => cmd_indices(cli.format, args),
        Command::Hodge(args) => cmd_hodge(cli.format, args),
        Command::Families(args) => cmd_families(cli.format, args),
        Command::Action(args) => cmd_action(cli.format, args),
        Command::Lattice(args) => cmd_lattice(cli.format, &args.which),
        Command::Mukai(args) => cmd_mukai(cli.format, args),
        Command::VerifyWitness(args) => cmd_verify(cli.format, args),
    }
}

fn print_record(format: Format, record: &RunRecord, text: impl FnOnce()) -> Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(record)?),
        Format::Text => text(),
        Format::Csv => bail!("csv output is only available for `action --mode scan`"),
    }
    Ok(())
}

fn set_string(set: &BTreeSet<u64>) -> String {
    let items: Vec<String> = set.iter().map(|d| d.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

/// The raw command line, recorded so runs are reproducible from their output.
fn raw_args() -> serde_json::Value {
    json!(std::env::args().skip(1).collect::<Vec<String>>())
}

fn cmd_indices(format: Format, args: &IndicesArgs) -> Result<ExitCode> {
    if args.n.is_none() && args.b2.is_none() && args.family.is_none() {
        bail!("choose at least one of --n, --b2, --family");
    }
    let mut result = serde_json::Map::new();
    let mut lines = Vec::new();

    if let Some(family) = args.family {
        let family = match family {
            FamilyArg::HilbK3 => Family::HilbK3 {
                n: args.n.ok_or_else(|| anyhow!("--family hilb-k3 needs --n"))?,
            },
            FamilyArg::Kummer => Family::Kummer {
                n: args.n.ok_or_else(|| anyhow!("--family kummer needs --n"))?,
            },
            FamilyArg::Ogrady6 => Family::OGrady6,
            FamilyArg::Ogrady10 => Family::OGrady10,
        };
        let candidates = family_index_candidates(family);
        let inv = family_invariants(family);
        lines.push(format!(
            "family candidates (dim {}, chi {}, b2 {}): {}",
            inv.dim,
            inv.chi,
            inv.b2,
            set_string(&candidates)
        ));
        result.insert("family_candidates".into(), json!(candidates));
        result.insert("family_invariants".into(), json!(inv));
    } else {
        if let Some(n) = args.n {
            let divisors = admissible_indices(n);
            lines.push(format!(
                "divisors of n + 1 = {}: {}",
                n + 1,
                set_string(&divisors)
            ));
            result.insert("divisor_indices".into(), json!(divisors));
        }
        if let Some(b2) = args.b2 {
            if b2 < 2 {
                bail!("--b2 must be at least 2");
            }
            let computed = phi_bound_indices(b2, None);
            lines.push(format!("phi(d) < {}: {}", b2, set_string(&computed)));
            result.insert("phi_bound_indices".into(), json!(computed));
            if let Some(diff) = index_table_diff(b2) {
                lines.push(format!("published table: {}", set_string(&diff.published)));
                lines.push(format!(
                    "diff: published-only {} / computed-only {}",
                    set_string(&diff.published_only),
                    set_string(&diff.computed_only)
                ));
                result.insert("table_diff".into(), json!(diff));
            }
        }
    }

    let record = RunRecord::new("indices", raw_args(), json!(result));
    print_record(format, &record, || {
        for line in &lines {
            println!("{line}");
        }
    })?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_hodge(format: Format, args: &HodgeArgs) -> Result<ExitCode> {
    let shape = EnriquesShape::new(args.n, args.d)?;
    let row = hodge_row(shape);
    let chi = chi_structure_sheaf(shape);
    let record = RunRecord::new(
        "hodge",
        raw_args(),
        json!({ "h_p0": row, "chi": chi, "n": args.n, "d": args.d }),
    );
    print_record(format, &record, || {
        let cells: Vec<String> = row.iter().map(|h| h.to_string()).collect();
        println!("h^(p,0) for p = 0..{}: {}", 2 * args.n, cells.join(","));
        println!("chi(O_Y) = {chi}");
    })?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_families(format: Format, args: &FamiliesArgs) -> Result<ExitCode> {
    let families = [
        ("hilb-k3", Family::HilbK3 { n: args.n }),
        ("kummer", Family::Kummer { n: args.n }),
        ("ogrady6", Family::OGrady6),
        ("ogrady10", Family::OGrady10),
    ];
    let mut rows = Vec::new();
    for (name, family) in families {
        let inv = family_invariants(family);
        let candidates = family_index_candidates(family);
        rows.push(json!({
            "family": name,
            "dim": inv.dim,
            "chi": inv.chi,
            "b2": inv.b2,
            "index_candidates": candidates,
        }));
    }
    let record = RunRecord::new("families", raw_args(), json!(rows));
    print_record(format, &record, || {
        println!(
            "{:<10} {:>4} {:>4} {:>3}  candidates",
            "family", "dim", "chi", "b2"
        );
        for row in &rows {
            println!(
                "{:<10} {:>4} {:>4} {:>3}  {}",
                row["family"].as_str().unwrap(),
                row["dim"],
                row["chi"],
                row["b2"],
                row["index_candidates"]
            );
        }
    })?;
    Ok(ExitCode::SUCCESS)
}

fn parse_point(s: &str) -> Result<TorusPoint> {
    TorusPoint::parse(s).with_context(|| format!("cannot parse point {s:?}"))
}

fn level_multiplier() -> Result<u64> {
    match std::env::var("ENRIQUES_LEVEL_MULTIPLIER") {
        Ok(v) => {
            let m: u64 = v
                .parse()
                .context("ENRIQUES_LEVEL_MULTIPLIER must be a positive integer")?;
            if m == 0 {
                bail!("ENRIQUES_LEVEL_MULTIPLIER must be positive");
            }
            Ok(m)
        }
        Err(_) => Ok(1),
    }
}

fn cmd_action(format: Format, args: &ActionArgs) -> Result<ExitCode> {
    let spec = if args.lieberman {
        ActionSpec::lieberman(parse_point(&args.a)?, parse_point(&args.a_prime)?)?
    } else {
        let row = args
            .row
            .ok_or_else(|| anyhow!("choose either --row <1-7> or --lieberman"))?;
        ActionSpec::bdf(row, parse_point(&args.z)?)?
    };

    if args.mode == Mode::Scan {
        let ActionSpec::Bdf { row, .. } = &spec else {
            bail!("--mode scan only applies to table rows");
        };
        return cmd_scan(format, *row, args.n);
    }

    let verdict = match args.mode {
        Mode::Criterion => freeness_criterion(&spec, args.n)?,
        Mode::Bruteforce => {
            let levels = match &args.levels {
                Some(s) => parse_levels(s)?,
                None => {
                    let base = recommended_levels(&spec, args.n)?;
                    let m = level_multiplier()?;
                    let scaled = base
                        .e
                        .checked_mul(m)
                        .zip(base.f.checked_mul(m))
                        .ok_or_else(|| anyhow!("level multiplier overflows"))?;
                    Levels::new(scaled.0, scaled.1)?
                }
            };
            let built = build_action(&spec, levels)?;
            let model = TorsionModel::build(
                levels,
                spec.basis_e(),
                spec.basis_f(),
                built.t_subgroup.clone(),
            )?;
            freeness_bruteforce(&built, &model, args.n)?
        }
        Mode::Scan => unreachable!(),
    };

    let not_free = verdict.status == FreenessStatus::NotFree;
    let verdict_record = VerdictRecord::new(&spec, args.n, &verdict);
    let mut record = RunRecord::new("action", raw_args(), serde_json::to_value(&verdict_record)?);
    record.verdicts.push(verdict_record.status.clone());
    print_record(format, &record, || {
        println!("status: {}", verdict_record.status);
        println!("condition: {}", verdict_record.condition_fired);
        if let Some((e, f)) = verdict_record.levels {
            println!("levels: E {e}, F {f}");
        }
        if let Some(witness) = &verdict_record.witness {
            println!("witness: {}", serde_json::to_string(witness).unwrap());
        }
    })?;
    if not_free && !args.tolerate_not_free {
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn cmd_scan(format: Format, row: BdfRow, n: u64) -> Result<ExitCode> {
    let scan = scan_z(row, n)?;
    let rows: Vec<(String, VerdictRecord)> = scan
        .iter()
        .map(|(z, v)| {
            let spec = ActionSpec::Bdf { row, z: *z };
            (z.format(), VerdictRecord::new(&spec, n, v))
        })
        .collect();
    match format {
        Format::Csv => {
            println!("z,status,condition_fired");
            for (z, r) in &rows {
                println!("{z},{},{:?}", r.status, r.condition_fired);
            }
        }
        Format::Json => {
            let mut record = RunRecord::new(
                "action-scan",
                raw_args(),
                serde_json::to_value(
                    rows.iter()
                        .map(|(z, r)| json!({ "z": z, "verdict": r }))
                        .collect::<Vec<_>>(),
                )?,
            );
            record.verdicts = rows.iter().map(|(_, r)| r.status.clone()).collect();
            println!("{}", serde_json::to_string_pretty(&record)?);
        }
        Format::Text => {
            let free = rows
                .iter()
                .filter(|(_, r)| r.status == "FREE_BY_CRITERION")
                .count();
            for (z, r) in &rows {
                println!("{z:<24} {}", r.status);
            }
            println!("-- {} of {} values of z are free", free, rows.len());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_levels(s: &str) -> Result<Levels> {
    let (e, f) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("--levels expects \"E,F\""))?;
    Ok(Levels::new(e.trim().parse()?, f.trim().parse()?)?)
}

fn parse_gram(s: &str) -> Result<IntegralLattice> {
    let text = if let Some(path) = s.strip_prefix('@') {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?
    } else {
        s.to_string()
    };
    let gram: Vec<Vec<i64>> = serde_json::from_str(&text)
        .context("Gram matrix must be a JSON array of integer rows")?;
    Ok(IntegralLattice::new(gram)?)
}

fn print_gram(l: &IntegralLattice) {
    for row in l.gram() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        println!("[{}]", cells.join(", "));
    }
}

fn named_lattice(name: &str) -> Result<IntegralLattice> {
    match name {
        "e8" => Ok(e8(1)),
        "e8-neg" => Ok(e8(-1)),
        "h" => Ok(hyperbolic_plane()),
        "antiinvariant-k3" => Ok(antiinvariant_k3().lattice),
        other => bail!("unknown lattice name {other:?} (try e8, e8-neg, h, antiinvariant-k3)"),
    }
}

fn cmd_lattice(format: Format, which: &LatticeCommand) -> Result<ExitCode> {
    match which {
        LatticeCommand::K3 => {
            let (l, p) = k3_lattice_with_involution();
            let sig = l.signature();
            let record = RunRecord::new(
                "lattice-k3",
                raw_args(),
                json!({
                    "gram": l.gram(),
                    "involution": p.matrix(),
                    "signature": { "positive": sig.positive, "negative": sig.negative },
                }),
            );
            print_record(format, &record, || {
                println!("K3 lattice, rank {}:", l.rank());
                print_gram(&l);
                println!("signature: ({}, {})", sig.positive, sig.negative);
            })?;
        }
        LatticeCommand::AntiinvariantK3 => {
            let sub = antiinvariant_k3();
            let disc = discriminant_group(&sub.lattice)?;
            let record = RunRecord::new(
                "lattice-antiinvariant-k3",
                raw_args(),
                json!({
                    "basis": sub.basis,
                    "gram": sub.lattice.gram(),
                    "discriminant_group": disc,
                }),
            );
            print_record(format, &record, || {
                println!("antiinvariant sublattice, rank {}:", sub.lattice.rank());
                print_gram(&sub.lattice);
                println!("discriminant group: {disc:?}");
            })?;
        }
        LatticeCommand::Eigenlattice { sign } => {
            if *sign != 1 && *sign != -1 {
                bail!("--sign must be 1 or -1");
            }
            let (l, p) = k3_lattice_with_involution();
            let sub = eigenlattice(&l, &p, *sign)?;
            let record = RunRecord::new(
                "lattice-eigenlattice",
                raw_args(),
                json!({ "basis": sub.basis, "gram": sub.lattice.gram() }),
            );
            print_record(format, &record, || {
                println!("eigenlattice for sign {sign}, rank {}:", sub.lattice.rank());
                print_gram(&sub.lattice);
            })?;
        }
        LatticeCommand::E8 { sign } => {
            if *sign != 1 && *sign != -1 {
                bail!("--sign must be 1 or -1");
            }
            let l = e8(*sign);
            let record = RunRecord::new("lattice-e8", raw_args(), json!(l.gram()));
            print_record(format, &record, || print_gram(&l))?;
        }
        LatticeCommand::H { twist: k } => {
            let l = twist(&hyperbolic_plane(), *k)?;
            let record = RunRecord::new("lattice-h", raw_args(), json!(l.gram()));
            print_record(format, &record, || print_gram(&l))?;
        }
        LatticeCommand::Signature { gram } => {
            let l = parse_gram(gram)?;
            let sig = l.signature();
            let record = RunRecord::new(
                "lattice-signature",
                raw_args(),
                json!({ "positive": sig.positive, "negative": sig.negative, "zero": sig.zero }),
            );
            print_record(format, &record, || {
                println!(
                    "signature: ({}, {}), degenerate rank {}",
                    sig.positive, sig.negative, sig.zero
                );
            })?;
        }
        LatticeCommand::Disc { gram } => {
            let l = parse_gram(gram)?;
            let disc = discriminant_group(&l)?;
            let record = RunRecord::new("lattice-disc", raw_args(), json!(disc));
            print_record(format, &record, || {
                println!("discriminant group: {disc:?}");
            })?;
        }
        LatticeCommand::Roots {
            name,
            gram,
            norm,
            bound,
        } => {
            let l = match (name, gram) {
                (Some(name), None) => named_lattice(name)?,
                (None, Some(gram)) => parse_gram(gram)?,
                _ => bail!("choose exactly one of --name or --gram"),
            };
            let roots = roots_in_box(&l, *norm, *bound)?;
            let record = RunRecord::new(
                "lattice-roots",
                raw_args(),
                json!({ "count": roots.len(), "bound": bound, "vectors": roots }),
            );
            print_record(format, &record, || {
                println!(
                    "{} vectors of norm {} within coordinate bound {}",
                    roots.len(),
                    norm,
                    bound
                );
                for r in &roots {
                    println!("{r:?}");
                }
            })?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_mukai(format: Format, args: &MukaiArgs) -> Result<ExitCode> {
    let ns = ns_model();
    let l: Vec<i64> = if args.l == "0" {
        vec![0; ns.rank()]
    } else {
        args.l
            .split(',')
            .map(|c| c.trim().parse::<i64>().context("bad coordinate in --l"))
            .collect::<Result<_>>()?
    };
    if l.len() != ns.rank() {
        bail!(
            "--l needs {} comma-separated coordinates (or \"0\"), got {}",
            ns.rank(),
            l.len()
        );
    }
    let v = MukaiVector::from_chi(args.r, l, args.chi);
    let square = mukai_square(&v, &ns)?;
    let report = moduli_admissibility(&v, &ns)?;
    let record = RunRecord::new("mukai", raw_args(), serde_json::to_value(&report)?);
    print_record(format, &record, || {
        println!("v = ({}, l, {}), chi = {}", v.r, v.s, v.chi());
        println!("v^2 = {square}");
        for check in &report.checks {
            println!(
                "  [{}] {}: {}",
                if check.holds { "ok" } else { "FAIL" },
                check.name,
                check.detail
            );
        }
        if report.admissible {
            println!(
                "admissible: moduli dimension {} = 2n with n = {}; the quotient has \
                 dimension {} and index {}",
                report.dim.unwrap(),
                report.n.unwrap(),
                report.quotient_dim.unwrap(),
                report.quotient_index.unwrap()
            );
        } else {
            println!("not admissible");
        }
    })?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(format: Format, args: &VerifyArgs) -> Result<ExitCode> {
    let text = match &args.file {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    // accept either a bare verdict record or a full run record
    let record: VerdictRecord = match serde_json::from_str::<VerdictRecord>(&text) {
        Ok(r) => r,
        Err(_) => {
            let outer: serde_json::Value =
                serde_json::from_str(&text).context("input is not JSON")?;
            serde_json::from_value(
                outer
                    .get("result")
                    .cloned()
                    .ok_or_else(|| anyhow!("no verdict record found in input"))?,
            )
            .context("the \"result\" field is not a verdict record")?
        }
    };
    let outcome = record.reverify();
    let ok = outcome.is_ok();
    let run = RunRecord::new(
        "verify-witness",
        raw_args(),
        json!({
            "spec": record.spec,
            "status": record.status,
            "verified": ok,
            "detail": outcome.as_ref().err(),
        }),
    );
    print_record(format, &run, || match &outcome {
        Ok(()) => println!("verified: the recorded verdict reproduces"),
        Err(reason) => println!("verification FAILED: {reason}"),
    })?;
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
