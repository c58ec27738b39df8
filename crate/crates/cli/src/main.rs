//! `ekd`: command-line front end for the polytope, verifier and scan
//! modules.
//!
//! Exit codes: 0 pass, 1 check failure, 2 input error, 3 precision cap
//! reached on a required comparison.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use ekd_core::bounds::{bounds_table, BoundsProfile, Branch};
use ekd_core::irreducible::{test_irreducible, IrreducibilityStatus};
use ekd_core::polytope::{vertices_brute_force, vertices_by_elimination, vertices_closed_form};
use ekd_core::scan::{self, parse_epsilons, parse_range, Check, Format, JRule, ScanConfig, ScanSummary};
use ekd_core::verifier::{check_membership_witness, modulus_separation, tightness_family, Verdict};
use ekd_core::{
    sorted_moduli, Error, HalfSpaceSystem, IntPolynomial, RationalPoint, RootSet, DEFAULT_PRECISION_CAP,
    DEFAULT_START_BITS,
};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "ekd", version, about = "Conjugate-product polytopes E_{k,d}: vertices, certified checks and scans")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct Global {
    /// Ceiling for automatic precision escalation, in bits (53..=4096).
    #[arg(long, global = true)]
    precision_cap: Option<u32>,
    /// Worker threads for scans.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output format: json or csv.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// `key = value` file with defaults for any flag; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form vertex set of E_{k,d}.
    Vertices {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        d: usize,
        /// Also enumerate by elimination and brute force and require equality.
        #[arg(long)]
        cross_check: bool,
    },
    /// Exact membership of a rational point in E_{k,d}.
    Member {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        d: usize,
        /// Comma-separated coordinates, e.g. `1,3/2`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Certified check of |a_0| prod |a_i|^(c_i) >= 1 for one polynomial.
    Verify {
        #[arg(long)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Scan trinomials x^d - h x^j + 1.
    Scan(ScanArgs),
    /// x^(3k) - x^k - 1 at the vertex (0, …, 0, 2).
    Tightness {
        #[arg(long, default_value_t = 3)]
        k_max: u32,
        /// Precision of the reported value interval.
        #[arg(long, default_value_t = 256)]
        bits: u32,
    },
    /// mu, E and the branch attaining E, for one (d, k) or a table.
    Bounds {
        #[arg(short)]
        d: Option<u32>,
        #[arg(short)]
        k: Option<u32>,
        /// All (d, k) with d > 3k and d <= this value.
        #[arg(long)]
        table: Option<u32>,
    },
    /// Smallest certified gap between distinct root moduli.
    Separation {
        #[arg(long)]
        poly: String,
    },
    /// Certified irreducibility over the integers.
    Irreducible {
        #[arg(long)]
        poly: String,
    },
}

#[derive(Args, Debug, Default)]
struct ScanArgs {
    /// Degree range, e.g. `3..9`.
    #[arg(long)]
    d: Option<String>,
    /// `all`, `last` (j = d - 1) or a list such as `1,2`.
    #[arg(long)]
    j: Option<String>,
    /// Range of |h|, e.g. `3..40`.
    #[arg(long)]
    h: Option<String>,
    /// Scan negative h as well.
    #[arg(long)]
    both_signs: bool,
    /// Range of k for membership checks (default every k < d).
    #[arg(long)]
    k: Option<String>,
    /// Comma-separated checks: annuli, membership, sz-remark, unit-gap,
    /// separation, margin-identity.
    #[arg(long)]
    checks: Option<String>,
    /// Extra eps values for the annulus check, e.g. `0.2,0.8`.
    #[arg(long)]
    eps: Option<String>,
    /// Record per-trinomial wall time (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
}

/// Values read from `--config`, keyed with dashes.
#[derive(Default)]
struct FileConfig(toml::Table);

impl FileConfig {
    fn load(path: Option<&Path>) -> Result<Self, Error> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)?;
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(format!("{}: {e}", path.display())))?;
        Ok(FileConfig(
            table.into_iter().map(|(k, v)| (k.replace('_', "-"), v)).collect(),
        ))
    }

    /// A value as a string, whatever its TOML type.
    fn string(&self, key: &str) -> Option<String> {
        self.0.get(key).map(|v| match v {
            toml::Value::String(s) => s.clone(),
            toml::Value::Array(a) => a
                .iter()
                .map(|x| match x {
                    toml::Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect::<Vec<_>>()
                .join(","),
            other => other.to_string(),
        })
    }

    fn flag(&self, key: &str) -> Result<bool, Error> {
        match self.0.get(key) {
            None => Ok(false),
            Some(toml::Value::Boolean(b)) => Ok(*b),
            Some(v) => Err(Error::Config(format!("`{key}` must be a boolean, got {v}"))),
        }
    }

    fn number<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, Error> {
        self.string(key)
            .map(|s| s.parse().map_err(|_| Error::Config(format!("`{key}` must be a number, got {s}"))))
            .transpose()
    }
}

struct Settings {
    cap: u32,
    jobs: usize,
    format: Format,
    output: Option<PathBuf>,
}

impl Settings {
    fn resolve(g: &Global, file: &FileConfig) -> Result<Self, Error> {
        let cap = match g.precision_cap {
            Some(c) => c,
            None => file.number("precision-cap")?.unwrap_or(DEFAULT_PRECISION_CAP),
        };
        if !(53..=4096).contains(&cap) {
            return Err(Error::Config(format!("precision cap {cap} outside 53..=4096")));
        }
        let jobs = match g.jobs {
            Some(j) => j,
            None => file
                .number("jobs")?
                .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
        };
        let format = match g.format.clone().or_else(|| file.string("format")) {
            Some(f) => f.parse()?,
            None => Format::Json,
        };
        let output = g.output.clone().or_else(|| file.string("output").map(PathBuf::from));
        Ok(Settings {
            cap,
            jobs: jobs.max(1),
            format,
            output,
        })
    }

    fn emit(&self, text: &str) -> Result<(), Error> {
        let mut text = text.to_string();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        match &self.output {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }

    fn emit_json(&self, value: &Value) -> Result<(), Error> {
        self.emit(&serde_json::to_string_pretty(value).expect("serializable"))
    }
}

fn parse_poly(s: &str) -> Result<IntPolynomial, Error> {
    s.parse()
}

fn run(cli: Cli) -> Result<u8, Error> {
    let file = FileConfig::load(cli.global.config.as_deref())?;
    let settings = Settings::resolve(&cli.global, &file)?;
    let cap = settings.cap;
    match cli.command {
        Command::Vertices { k, d, cross_check } => {
            let set = vertices_closed_form(k, d)?;
            if cross_check {
                let sys = HalfSpaceSystem::ekd(k, d)?;
                for (name, other) in [
                    ("elimination", vertices_by_elimination(&sys)?),
                    ("brute force", vertices_brute_force(&sys)?),
                ] {
                    if let Some(diff) = set.first_difference(&other) {
                        return Err(Error::Consistency(format!("closed form vs {name}: {diff}")));
                    }
                }
            }
            match settings.format {
                Format::Csv => settings.emit(&set.to_csv())?,
                Format::Json => settings.emit_json(&set.to_json())?,
            }
            Ok(0)
        }
        Command::Member { k, d, point } => {
            let x = RationalPoint::parse(&point)?;
            let m = HalfSpaceSystem::ekd(k, d)?.contains(&x)?;
            settings.emit_json(&json!({"k": k, "d": d, "point": x.to_strings(), "membership": m.to_json()}))?;
            Ok(if m.is_member() { 0 } else { EXIT_FAIL })
        }
        Command::Verify { poly, point } => {
            let p = parse_poly(&poly)?;
            let c = RationalPoint::parse(&point)?;
            let r = check_membership_witness(&p, &c, cap)?;
            settings.emit_json(&r.to_json())?;
            Ok(match r.verdict {
                Verdict::Positive => 0,
                Verdict::Negative => EXIT_FAIL,
                Verdict::Indeterminate => EXIT_CAP,
            })
        }
        Command::Scan(args) => run_scan(args, &file, &settings),
        Command::Tightness { k_max, bits } => {
            let reports = tightness_family(k_max, bits, cap)?;
            let out: Vec<Value> = reports.iter().map(|r| r.to_json()).collect();
            settings.emit_json(&Value::Array(out))?;
            let all_certified = reports.iter().all(|r| r.irreducibility == IrreducibilityStatus::Irreducible);
            Ok(if all_certified { 0 } else { EXIT_CAP })
        }
        Command::Bounds { d, k, table } => run_bounds(d, k, table, &settings),
        Command::Separation { poly } => {
            let p = parse_poly(&poly)?;
            let profile = sorted_moduli(&RootSet::solve(&p, DEFAULT_START_BITS)?, cap)?;
            let r = modulus_separation(&profile)?;
            settings.emit_json(&r.to_json())?;
            Ok(0)
        }
        Command::Irreducible { poly } => {
            let p = parse_poly(&poly)?;
            let v = test_irreducible(&p, cap)?;
            settings.emit_json(&v.to_json())?;
            Ok(match v.status {
                IrreducibilityStatus::Unknown => EXIT_CAP,
                _ => 0,
            })
        }
    }
}

fn run_scan(args: ScanArgs, file: &FileConfig, settings: &Settings) -> Result<u8, Error> {
    let pick = |flag: Option<String>, key: &str| flag.or_else(|| file.string(key));
    let mut config = ScanConfig {
        precision_cap: settings.cap,
        ..ScanConfig::default()
    };
    if let Some(d) = pick(args.d, "d") {
        config.d_range = parse_range(&d)?;
    }
    if let Some(j) = pick(args.j, "j") {
        config.j_rule = j.parse::<JRule>()?;
    }
    if let Some(h) = pick(args.h, "h") {
        config.h_range = parse_range(&h)?;
    }
    if let Some(k) = pick(args.k, "k") {
        config.k_range = Some(parse_range(&k)?);
    }
    if let Some(c) = pick(args.checks, "checks") {
        config.checks = c
            .split(',')
            .filter(|x| !x.trim().is_empty())
            .map(str::parse)
            .collect::<Result<BTreeSet<Check>, _>>()?;
    }
    if let Some(e) = pick(args.eps, "eps") {
        config.epsilons = parse_epsilons(&e)?;
    }
    config.both_signs = args.both_signs || file.flag("both-signs")?;
    config.timing = args.timing || file.flag("timing")?;
    let records = scan::run_scan(&config, settings.jobs)?;
    match settings.format {
        Format::Json => settings.emit_json(&scan::to_json(&records))?,
        Format::Csv => {
            let mut buf = Vec::new();
            scan::write_csv(&records, &config.checks, config.timing, &mut buf)?;
            settings.emit(&String::from_utf8(buf).expect("csv is utf-8"))?;
        }
    }
    let summary = ScanSummary::of(&records);
    eprintln!(
        "{} records: {} pass, {} fail, {} skip, {} errors",
        summary.records, summary.pass, summary.fail, summary.skip, summary.errors
    );
    Ok(if summary.fail > 0 { EXIT_FAIL } else { 0 })
}

fn run_bounds(d: Option<u32>, k: Option<u32>, table: Option<u32>, settings: &Settings) -> Result<u8, Error> {
    let rows = match (d, k, table) {
        (Some(d), Some(k), None) => {
            let p = BoundsProfile::new(d, k)?;
            if settings.format == Format::Json {
                settings.emit_json(&p.to_json())?;
                return Ok(0);
            }
            vec![p]
        }
        (None, None, Some(max)) => bounds_table(max),
        _ => return Err(Error::Config("give either -d and -k, or --table".into())),
    };
    match settings.format {
        Format::Json => {
            let out: Vec<Value> = rows
                .iter()
                .map(|p| {
                    let mut j = p.to_json();
                    j["exceptional"] = json!(p.branch == Branch::TwoFactor);
                    j
                })
                .collect();
            settings.emit_json(&Value::Array(out))?;
        }
        Format::Csv => {
            let mut text = String::from("d,k,mu,calE,branch,predictedExponent,exceptional\n");
            for p in &rows {
                let branch = serde_json::to_value(p.branch).expect("serializable");
                text.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    p.d,
                    p.k,
                    p.mu,
                    p.cal_e,
                    branch.as_str().unwrap_or(""),
                    p.predicted_exponent,
                    p.branch == Branch::TwoFactor
                ));
            }
            settings.emit(&text)?;
        }
    }
    Ok(0)
}

fn exit_code(e: &Error) -> u8 {
    if e.is_precision_cap() {
        EXIT_CAP
    } else if matches!(e, Error::Consistency(_) | Error::VertexCount { .. }) {
        EXIT_FAIL
    } else {
        EXIT_INPUT
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn exit_classes() {
        assert_eq!(exit_code(&Error::ModulusContainsZero), EXIT_CAP);
        assert_eq!(exit_code(&Error::Consistency("x".into())), EXIT_FAIL);
        assert_eq!(exit_code(&Error::BoundsHypothesis { d: 9, k: 3 }), EXIT_INPUT);
    }

    #[test]
    fn config_file_values() {
        let file = FileConfig(
            "precision_cap = 512\nformat = \"csv\"\nchecks = [\"annuli\", \"unit-gap\"]\nboth-signs = true"
                .parse()
                .map(|t: toml::Table| t.into_iter().map(|(k, v)| (k.replace('_', "-"), v)).collect())
                .unwrap(),
        );
        let s = Settings::resolve(&Global::default(), &file).unwrap();
        assert_eq!((s.cap, s.format), (512, Format::Csv));
        let flags = Global {
            precision_cap: Some(256),
            ..Global::default()
        };
        assert_eq!(Settings::resolve(&flags, &file).unwrap().cap, 256);
        assert_eq!(file.string("checks").unwrap(), "annuli,unit-gap");
        assert!(file.flag("both-signs").unwrap());
    }

}
