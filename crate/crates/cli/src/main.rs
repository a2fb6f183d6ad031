use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use spinform_core::action::{
    invariant_counts, invariant_structures_with, is_extendable_with, transvection,
};
use spinform_core::families::FamilyId;
use spinform_core::harness::{self, CheckId, VerificationReport};
use spinform_core::matrix_file;
use spinform_core::number_theory::{divides_bg, prime_verdict, primes_8k7};
use spinform_core::{
    conjugate, ArfClass, Cutoff, Error, FamilyKind, Gf2Vector, HomologyMap, SpinStructure,
};

const MATRIX_HELP: &str = "\
Matrix files: lines starting with '#' and blank lines are ignored; the first
data line is \"genus <g>\", followed by 2g rows of 2g space-separated 0/1
digits. Row i lists the coordinates of the image of x_i in x_1..x_{2g}, where
x_i.x_j = 1 for i != j.";

const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser)]
#[command(
    name = "spinform",
    version,
    about = "Invariant spin structures of periodic surface maps"
)]
#[command(after_help = MATRIX_HELP)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Largest genus handled by exhaustive scanning; above it the invariant
    /// structures are found by solving a linear system.
    #[arg(long, global = true)]
    cutoff: Option<usize>,

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
    /// Decide whether a map fixes a spin structure of Arf invariant 0.
    #[command(after_help = MATRIX_HELP)]
    Extendable {
        #[command(flatten)]
        map: MapArgs,
        /// Also check the verdict on this many random conjugates.
        #[arg(long, default_value_t = 0)]
        stress: usize,
        /// Seed for the conjugates.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Tabulate verdicts and fixed-set sizes for a family over a genus range.
    Survey {
        #[arg(long)]
        family: FamilyKind,
        #[arg(long, default_value_t = 1)]
        genus_from: usize,
        #[arg(long)]
        genus_to: usize,
    },
    /// List the spin structures fixed by a map.
    #[command(after_help = MATRIX_HELP)]
    Invariants {
        #[command(flatten)]
        map: MapArgs,
        /// Keep only structures with this Arf invariant.
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        arf: Option<u8>,
    },
    /// Recompute the finite statements and report each check.
    Verify {
        /// "all" or one check id.
        #[arg(long, default_value = "all")]
        check: String,
        /// Largest genus per check; each check is clamped to its own cap.
        #[arg(long)]
        genus_to: Option<usize>,
        /// Also write the JSON report here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List primes p = 7 mod 8 or scan divisibility of |B_g| by a prime.
    Primes {
        /// Exclusive upper bound for the prime table.
        #[arg(long, default_value_t = 50)]
        limit: u64,
        /// Odd prime to test against |B_g| for g = 1..=genus-to.
        #[arg(long, requires = "genus_to")]
        check_divisor: Option<u64>,
        #[arg(long, requires = "check_divisor")]
        genus_to: Option<u64>,
    },
}

#[derive(Args)]
struct MapArgs {
    /// Built-in family: tau, v, eta or wiman.
    #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
    family: Option<FamilyKind>,
    /// Matrix file giving the action on H_1(F_g; Z_2).
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Genus; required with --family, checked against the file with --matrix.
    #[arg(long)]
    genus: Option<usize>,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CmdResult = Result<(String, bool), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match configure_threads().and_then(|()| run(&cli)) {
        Ok((out, ok)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            let _ = stdout.flush();
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("SPINFORM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "SPINFORM_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: &Cli) -> CmdResult {
    let cutoff = match cli.cutoff {
        Some(c) => Cutoff::new(c)?,
        None => Cutoff::default(),
    };
    match &cli.command {
        Command::Extendable { map, stress, seed } => {
            cmd_extendable(map, cli.format, cutoff, *stress, *seed)
        }
        Command::Survey {
            family,
            genus_from,
            genus_to,
        } => cmd_survey(*family, *genus_from, *genus_to, cli.format, cutoff),
        Command::Invariants { map, arf } => cmd_invariants(map, *arf, cli.format, cutoff),
        Command::Verify {
            check,
            genus_to,
            output,
        } => cmd_verify(check, *genus_to, output.as_deref(), cli.format),
        Command::Primes {
            limit,
            check_divisor,
            genus_to,
        } => match (check_divisor, genus_to) {
            (Some(p), Some(b)) => cmd_divisor_scan(*p, *b, cli.format),
            _ => cmd_primes(*limit, cli.format),
        },
    }
}

fn load_map(args: &MapArgs) -> Result<HomologyMap, Failure> {
    if let Some(kind) = args.family {
        let genus = args
            .genus
            .ok_or_else(|| Failure::Usage("--genus is required with --family".into()))?;
        return Ok(FamilyId::new(kind, genus)?.build()?);
    }
    let path = args
        .matrix
        .as_ref()
        .ok_or_else(|| Failure::Usage("one of --family or --matrix is required".into()))?;
    let file = matrix_file::read(path)?;
    if let Some(g) = args.genus {
        if g != file.genus {
            return Err(Failure::Usage(format!(
                "--genus {g} does not match genus {} in {}",
                file.genus,
                path.display()
            )));
        }
    }
    Ok(file.to_map()?)
}

fn json_line(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

fn labels(list: &[SpinStructure]) -> String {
    list.iter().map(|q| q.label()).collect::<Vec<_>>().join(" ")
}

fn random_conjugator(map: &HomologyMap, rng: &mut ChaCha8Rng) -> Result<HomologyMap, Error> {
    let form = Arc::clone(map.form());
    let g = map.genus();
    let mut h = HomologyMap::identity(Arc::clone(&form));
    for _ in 0..(3 * g + 3) {
        let mut bits = vec![false; 2 * g];
        while bits.iter().all(|b| !b) {
            bits.iter_mut().for_each(|b| *b = rng.gen());
        }
        let u = Gf2Vector::from_bits(g, bits)?;
        h = h.compose(&transvection(&form, &u)?)?;
    }
    Ok(h)
}

fn cmd_extendable(
    args: &MapArgs,
    format: Format,
    cutoff: Cutoff,
    stress: usize,
    seed: u64,
) -> CmdResult {
    let map = load_map(args)?;
    let report = invariant_structures_with(&map, cutoff)?;

    let mut disagreements = 0usize;
    if stress > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..stress {
            let h = random_conjugator(&map, &mut rng)?;
            let verdict = is_extendable_with(&conjugate(&map, &h)?, cutoff)?;
            if verdict.extendable != report.extendable() {
                disagreements += 1;
            }
        }
    }
    let ok = disagreements == 0;

    let out = match format {
        Format::Json => {
            let mut value = report.to_json();
            if stress > 0 {
                value["stress"] =
                    json!({ "conjugates": stress, "seed": seed, "disagreements": disagreements });
            }
            json_line(&value)
        }
        Format::Csv => {
            let mut s =
                String::from("genus,map_order,extendable,witness,fixed_bounded,fixed_unbounded\n");
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                report.genus,
                report.map_order,
                report.extendable(),
                report.witness().map(|q| q.label()).unwrap_or_default(),
                report.fixed_bounded.len(),
                report.fixed_unbounded.len()
            );
            s
        }
        Format::Text => {
            let mut s = match report.witness() {
                Some(q) => format!("extendable: true, witness {}\n", q.label()),
                None => "extendable: false\n".to_string(),
            };
            let _ = writeln!(s, "genus: {}", report.genus);
            let _ = writeln!(s, "map_order: {}", report.map_order);
            let _ = writeln!(s, "fixed_bounded: {}", labels(&report.fixed_bounded));
            let _ = writeln!(s, "fixed_unbounded: {}", labels(&report.fixed_unbounded));
            if stress > 0 {
                let _ = writeln!(
                    s,
                    "stress: {stress} conjugates, seed {seed}, {disagreements} disagreements"
                );
            }
            s
        }
    };
    Ok((out, ok))
}

struct SurveyRow {
    genus: usize,
    homology_order: Option<u64>,
    surface_order: u64,
    fixed_bounded: u64,
    fixed_unbounded: u64,
}

fn cmd_survey(
    kind: FamilyKind,
    from: usize,
    to: usize,
    format: Format,
    cutoff: Cutoff,
) -> CmdResult {
    if from == 0 || from > to {
        return Err(Failure::Usage(format!("invalid genus range {from}..={to}")));
    }
    let mut rows = Vec::with_capacity(to - from + 1);
    for genus in from..=to {
        let id = FamilyId::new(kind, genus)?;
        let map = id.build()?;
        let (fixed_bounded, fixed_unbounded) = invariant_counts(&map, cutoff)?;
        rows.push(SurveyRow {
            genus,
            homology_order: spinform_core::map_order(&map).finite(),
            surface_order: id.surface_order(),
            fixed_bounded,
            fixed_unbounded,
        });
    }

    let order = |o: Option<u64>| o.map_or_else(|| "over-cap".to_string(), |n| n.to_string());
    let out = match format {
        Format::Json => {
            let list: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "genus": r.genus,
                        "family": kind.name(),
                        "homology_order": r.homology_order,
                        "surface_order": r.surface_order,
                        "extendable": r.fixed_bounded > 0,
                        "fixed_bounded": r.fixed_bounded,
                        "fixed_unbounded": r.fixed_unbounded,
                    })
                })
                .collect();
            json_line(&serde_json::Value::Array(list))
        }
        Format::Csv => {
            let mut s =
                String::from("genus,family,homology_order,surface_order,extendable,fixed_bounded,fixed_unbounded\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.genus,
                    kind.name(),
                    order(r.homology_order),
                    r.surface_order,
                    r.fixed_bounded > 0,
                    r.fixed_bounded,
                    r.fixed_unbounded
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{} g={} homology_order={} surface_order={} extendable={} fixed_bounded={} fixed_unbounded={}",
                    kind.name(),
                    r.genus,
                    order(r.homology_order),
                    r.surface_order,
                    r.fixed_bounded > 0,
                    r.fixed_bounded,
                    r.fixed_unbounded
                );
            }
            s
        }
    };
    Ok((out, true))
}

fn cmd_invariants(args: &MapArgs, arf: Option<u8>, format: Format, cutoff: Cutoff) -> CmdResult {
    let map = load_map(args)?;
    let report = invariant_structures_with(&map, cutoff)?;
    let mut listed: Vec<(&SpinStructure, ArfClass)> = Vec::new();
    for class in [ArfClass::Bounded, ArfClass::Unbounded] {
        if arf.is_some_and(|a| a != class.bit()) {
            continue;
        }
        listed.extend(report.fixed(class).iter().map(|q| (q, class)));
    }
    listed.sort();
    let listed: Vec<(String, ArfClass)> = listed.into_iter().map(|(q, c)| (q.label(), c)).collect();

    let out = match format {
        Format::Json => {
            let list: Vec<_> = listed
                .iter()
                .map(|(label, class)| json!({ "label": label, "arf": class.bit() }))
                .collect();
            json_line(&json!({
                "genus": report.genus,
                "map_order": report.map_order.finite(),
                "structures": list,
            }))
        }
        Format::Csv => {
            let mut s = String::from("label,arf\n");
            for (label, class) in &listed {
                let _ = writeln!(s, "{label},{}", class.bit());
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (label, class) in &listed {
                let _ = writeln!(s, "{label} arf={}", class.bit());
            }
            s
        }
    };
    Ok((out, true))
}

fn cmd_verify(
    check: &str,
    genus_to: Option<usize>,
    output: Option<&std::path::Path>,
    format: Format,
) -> CmdResult {
    let selected = if check.eq_ignore_ascii_case("all") {
        Vec::new()
    } else {
        vec![check.parse::<CheckId>().map_err(Failure::Usage)?]
    };
    if genus_to == Some(0) {
        return Err(Failure::Core(Error::ZeroGenus));
    }
    let reports = harness::run_checks(&selected, genus_to);
    if let Some(path) = output {
        harness::write_reports(&reports, path)?;
    }
    let ok = reports.iter().all(VerificationReport::passed);

    let status = |r: &VerificationReport| if r.passed() { "pass" } else { "fail" };
    let out = match format {
        Format::Json => harness::reports_to_json(&reports),
        Format::Csv => {
            let mut s =
                String::from("check_id,status,genus_from,genus_to,mismatches,elapsed_ms,note\n");
            for r in &reports {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.check_id,
                    status(r),
                    r.genus_range[0],
                    r.genus_range[1],
                    r.mismatches.len(),
                    r.elapsed.as_millis(),
                    r.note.as_deref().unwrap_or("").replace(',', ";")
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                let _ = writeln!(
                    s,
                    "{} {} g={}..{} ({} ms)",
                    status(r).to_uppercase(),
                    r.check_id,
                    r.genus_range[0],
                    r.genus_range[1],
                    r.elapsed.as_millis()
                );
                if let Some(note) = &r.note {
                    let _ = writeln!(s, "  note: {note}");
                }
                for m in &r.mismatches {
                    let _ = writeln!(
                        s,
                        "  g={}: expected {}, observed {}",
                        m.genus, m.expected, m.observed
                    );
                }
            }
            let passed = reports.iter().filter(|r| r.passed()).count();
            let _ = writeln!(s, "{passed}/{} checks passed", reports.len());
            s
        }
    };
    Ok((out, ok))
}

fn cmd_primes(limit: u64, format: Format) -> CmdResult {
    const MAX_LIMIT: u64 = 1 << 32;
    if limit > MAX_LIMIT {
        return Err(Failure::Usage(format!(
            "--limit must be at most {MAX_LIMIT}"
        )));
    }
    let verdicts = primes_8k7(limit)
        .into_iter()
        .map(prime_verdict)
        .collect::<Result<Vec<_>, _>>()?;
    let out = match format {
        Format::Json => json_line(&serde_json::to_value(&verdicts).expect("plain data serializes")),
        Format::Csv => {
            let mut s = String::from("p,8k7,ord2,never_divides_bg\n");
            for v in &verdicts {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    v.p, v.is_8k7, v.order_of_two, v.never_divides_bg
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for v in &verdicts {
                let _ = writeln!(s, "{v}");
            }
            s
        }
    };
    Ok((out, true))
}

fn cmd_divisor_scan(p: u64, genus_to: u64, format: Format) -> CmdResult {
    if genus_to == 0 {
        return Err(Failure::Core(Error::ZeroGenus));
    }
    let rows = (1..=genus_to)
        .map(|g| divides_bg(p, g).map(|d| (g, d)))
        .collect::<Result<Vec<_>, _>>()?;
    let dividing: Vec<u64> = rows.iter().filter(|r| r.1).map(|r| r.0).collect();
    let out = match format {
        Format::Json => {
            json_line(&json!({ "p": p, "genus_to": genus_to, "divides_bg_at": dividing }))
        }
        Format::Csv => {
            let mut s = String::from("p,genus,divides_bg\n");
            for (g, d) in &rows {
                let _ = writeln!(s, "{p},{g},{d}");
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (g, d) in &rows {
                let _ = writeln!(s, "p={p} g={g} divides_bg={d}");
            }
            if dividing.is_empty() {
                let _ = writeln!(s, "p={p} divides no |B_g| for g=1..{genus_to}");
            }
            s
        }
    };
    Ok((out, true))
}
