//! Command-line front end. Exit codes: 0 for a definite positive answer,
//! 1 for a definite negative answer or an input error, 2 for an
//! inconclusive (bounded-search) outcome.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::census::{run_census_full, self_check, CensusConfig};
use crate::equivalence::{
    decide, deformation_class, enumerate_representatives, ChainLink, DeformationVerdict,
    Obstruction, UnknownReason, Verdict,
};
use crate::surfaces::{ParseError, SurfaceDescriptor};
use crate::{Kind, SearchBounds};

#[derive(Parser)]
#[command(
    name = "inoue",
    about = "Exact classification toolkit for Inoue surfaces (S0, S+, S-)",
    version
)]
struct Cli {
    /// Seed for any randomized sampling (census self-check).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    S0,
    #[value(name = "s+", alias = "splus")]
    SPlus,
    #[value(name = "s-", alias = "sminus")]
    SMinus,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::S0 => Kind::S0,
            KindArg::SPlus => Kind::SPlus,
            KindArg::SMinus => Kind::SMinus,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate a surface file against the schema and the defining
    /// spectral conditions.
    Validate { file: PathBuf },
    /// Decide homotopy equivalence of two surfaces.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Conjugator / centralizer search bound.
        #[arg(long)]
        bound: Option<u32>,
        /// Translation-offset search bound for map construction.
        #[arg(long)]
        eta_bound: Option<i64>,
    },
    /// Construct and verify a biholomorphism chain between two surfaces.
    Bihol {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long)]
        eta_bound: Option<i64>,
    },
    /// Enumerate the deformation-class representatives of a surface.
    Reps { file: PathBuf },
    /// Print the fundamental-group fingerprint (center class, whether the
    /// translation subgroup is abelian).
    Fingerprint { file: PathBuf },
    /// Enumerate all surfaces within bounds and partition them into
    /// homotopy classes.
    Census {
        #[arg(long)]
        nmax: i64,
        #[arg(long)]
        pmax: i64,
        #[arg(long)]
        rmax: i64,
        /// Kinds to include (default: all three).
        #[arg(long, value_delimiter = ',')]
        kinds: Vec<KindArg>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long)]
        eta_bound: Option<i64>,
        /// Re-verify this many sampled same-class / cross-class pairs.
        #[arg(long)]
        self_check: Option<u32>,
    },
}

fn load(path: &PathBuf) -> Result<SurfaceDescriptor, i32> {
    match SurfaceDescriptor::from_file(path) {
        Ok(d) => Ok(d),
        Err(ParseError::Invalid(v)) => {
            let payload = json!({
                "valid": false,
                "file": path.display().to_string(),
                "violations": v.0,
            });
            println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            Err(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Err(1)
        }
    }
}

fn bounds_with(bound: Option<u32>, eta: Option<i64>) -> SearchBounds {
    let mut b = SearchBounds::from_env();
    if let Some(c) = bound {
        b.conjugator = c;
        b.s0 = c;
    }
    if let Some(e) = eta {
        b.eta = e;
    }
    b
}

fn witness_json(w: &crate::equivalence::EquivWitness) -> serde_json::Value {
    let k: Vec<Vec<i64>> = (0..w.k.rows())
        .map(|i| (0..w.k.cols()).map(|j| w.k.at_i64(i, j)).collect())
        .collect();
    let mut v = json!({
        "K": k,
        "delta": w.delta,
        "epsilon": w.epsilon,
    });
    if let Some(c) = &w.coeffs {
        v["membership_coefficients"] = json!({
            "u": c[0].to_string(),
            "v": c[1].to_string(),
            "k13": c[2].to_string(),
            "k23": c[3].to_string(),
        });
    }
    if w.kind == Kind::S0 {
        v["note"] = json!(
            "criterion: bounded GL(3,Z) conjugacy of M^(+-1), derived from the \
             fundamental group Z^3 x| Z"
        );
    }
    v
}

fn unknown_json(u: &UnknownReason) -> serde_json::Value {
    match u {
        UnknownReason::ConjugatorBound { bound } => {
            json!({"reason": "conjugator-search bound exhausted", "bound": bound})
        }
        UnknownReason::S0Bound { bound } => {
            json!({"reason": "GL(3,Z) conjugator bound exhausted", "bound": bound})
        }
        UnknownReason::EtaBound { bound } => {
            json!({"reason": "translation-offset bound exhausted", "bound": bound})
        }
    }
}

fn obstruction_json(o: &Obstruction) -> serde_json::Value {
    match o {
        Obstruction::KindMismatch => json!({"obstruction": "kind"}),
        Obstruction::RMagnitude { r, r_prime } => {
            json!({"obstruction": "r-magnitude", "r": r, "r_prime": r_prime})
        }
        Obstruction::CharPoly => json!({"obstruction": "characteristic-polynomial"}),
        Obstruction::OrbitExhausted => {
            json!({"obstruction": "membership fails on the full centralizer orbit"})
        }
    }
}

/// Run the CLI; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Validate { file } => {
            let desc = match load(&file) {
                Ok(d) => d,
                Err(code) => return code,
            };
            let payload = json!({
                "valid": true,
                "kind": desc.kind,
                "surface": desc.to_json(),
            });
            println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            0
        }
        Command::Equiv { a, b, bound, eta_bound } => {
            let (sa, sb) = match (load(&a), load(&b)) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(c), _) | (_, Err(c)) => return c,
            };
            let bounds = bounds_with(bound, eta_bound);
            match decide(&sa, &sb, &bounds) {
                Verdict::Equivalent(w) => {
                    let payload = json!({
                        "verdict": "equivalent",
                        "witness": witness_json(&w),
                    });
                    println!("{}", serde_json::to_string_pretty(&payload).unwrap());
                    0
                }
                Verdict::NotEquivalent(o) => {
                    let payload = json!({
                        "verdict": "not-equivalent",
                        "details": obstruction_json(&o),
                    });
                    println!("{}", serde_json::to_string_pretty(&payload).unwrap());
                    1
                }
                Verdict::Unknown(u) => {
                    let payload = json!({
                        "verdict": "unknown",
                        "details": unknown_json(&u),
                    });
                    println!("{}", serde_json::to_string_pretty(&payload).unwrap());
                    2
                }
            }
        }
        Command::Bihol { a, b, bound, eta_bound } => {
            let (sa, sb) = match (load(&a), load(&b)) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(c), _) | (_, Err(c)) => return c,
            };
            let bounds = bounds_with(bound, eta_bound);
            match deformation_class(&sa, &sb, &bounds) {
                DeformationVerdict::SameClass(chain) => {
                    let links: Vec<serde_json::Value> = chain
                        .links
                        .iter()
                        .map(|l| match l {
                            ChainLink::TNormalize { from, to } => json!({
                                "step": "normalize-t",
                                "from": [from.re, from.im],
                                "to": [to.re, to.im],
                            }),
                            ChainLink::Bihol { summary, max_deviation } => json!({
                                "step": "biholomorphism",
                                "map": summary,
                                "max_deviation": max_deviation,
                            }),
                        })
                        .collect();
                    let payload = json!({"verdict": "same-class", "chain": links});
                    println!("{}", serde_json::to_string_pretty(&payload).unwrap());
                    0
                }
                DeformationVerdict::CandidatePair { reason } => {
                    let payload = json!({"verdict": "candidate-pair", "reason": reason});
                    println!("{}", serde_json::to_string_pretty(&payload).unwrap());
                    2
                }
                DeformationVerdict::Unknown(u) => {
                    let payload = json!({"verdict": "unknown", "details": unknown_json(&u)});
                    println!("{}", serde_json::to_string_pretty(&payload).unwrap());
                    2
                }
                DeformationVerdict::Distinct(o) => {
                    let payload = json!({"verdict": "distinct", "details": obstruction_json(&o)});
                    println!("{}", serde_json::to_string_pretty(&payload).unwrap());
                    1
                }
            }
        }
        Command::Reps { file } => {
            let desc = match load(&file) {
                Ok(d) => d,
                Err(code) => return code,
            };
            let reps = enumerate_representatives(&desc);
            let payload = json!({
                "count": reps.len(),
                "representatives": reps.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            0
        }
        Command::Fingerprint { file } => {
            let desc = match load(&file) {
                Ok(d) => d,
                Err(code) => return code,
            };
            let fp = desc.group().fingerprint();
            let payload = json!({
                "kind": desc.kind,
                "fingerprint": fp,
            });
            println!("{}", serde_json::to_string_pretty(&payload).unwrap());
            0
        }
        Command::Census {
            nmax,
            pmax,
            rmax,
            kinds,
            out,
            format,
            jobs,
            bound,
            eta_bound,
            self_check: sc,
        } => {
            let mut cfg = CensusConfig::new(nmax, pmax, rmax);
            if !kinds.is_empty() {
                cfg.kinds = kinds.into_iter().map(Kind::from).collect();
            }
            cfg.bounds = bounds_with(bound, eta_bound);
            cfg.jobs = jobs;
            let (report, partitions) = run_census_full(&cfg);
            let text = match format {
                Format::Json => report.to_json_string(),
                Format::Csv => report.to_csv_string(),
            };
            match &out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 1;
                    }
                }
                None => println!("{text}"),
            }
            if let Some(samples) = sc {
                let check = self_check(&partitions, &cfg.bounds, samples, cli.seed);
                eprintln!(
                    "self-check: {} same-class and {} cross-class pairs re-verified, {} failures",
                    check.same_class_checked, check.cross_class_checked, check.failures
                );
                if check.failures > 0 {
                    return 1;
                }
            }
            0
        }
    }
}
