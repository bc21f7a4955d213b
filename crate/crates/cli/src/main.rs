use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use torelli::catalog::coordinate_catalog_with_ceiling;
use torelli::classify::{
    collision_case, collision_witness_with_height, enumerate_maps_with_ceiling, extensions,
};
use torelli::{
    lc_map, lift_permutation, theta, validate_tuple, CrossRatioSpec, Error, FactoredMap, LiftRoute,
    OmegaPoint, Permutation, Verdict, Witness, DEFAULT_MAX_K,
};

#[derive(Parser, Debug)]
#[command(
    name = "torelli",
    version,
    about = "Exact computations on configuration spaces of marked spheres"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for every randomized step.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Height of sampled rational points.
    #[arg(long, default_value_t = 60, global = true)]
    height: u64,
    /// Largest k for exhaustive enumeration over S_{k+1}.
    #[arg(long, env = "TORELLI_CEILING", default_value_t = DEFAULT_MAX_K, global = true)]
    ceiling: usize,
    /// Write results to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coordinates of Theta_k(sigma).
    Theta {
        #[arg(short)]
        k: usize,
        #[arg(long)]
        sigma: String,
    },
    /// Evaluate a factored map at a point of Omega_k.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Check whether cross-ratio maps form a map into a larger Omega_n.
    Classify {
        #[arg(short)]
        k: usize,
        #[arg(long)]
        specs: String,
    },
    /// All non-constant holomorphic maps Omega_m -> Omega_n.
    Enumerate {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        n: usize,
    },
    /// Coordinate functions of Aut(Omega_k).
    Catalog {
        #[arg(short)]
        k: usize,
        /// Compare against the bundled lists of forms.
        #[arg(long = "diff-paper")]
        diff_lists: bool,
    },
    /// Lift sigma in S_{n+1} along the forgetful map pi_J : Omega_m -> Omega_n.
    Lift {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        m: usize,
        #[arg(short = 'J')]
        j: String,
        #[arg(long)]
        sigma: String,
    },
    /// Decide whether two cross-ratio maps can take equal values.
    Collide {
        #[arg(short)]
        k: usize,
        #[arg(long)]
        c1: String,
        #[arg(long)]
        c2: String,
        /// Specializations tried by the witness search.
        #[arg(long, default_value_t = 50)]
        budget: usize,
    },
}

/// Lets long options be spelled with one dash (`-sigma`).
fn normalize(args: impl Iterator<Item = String>) -> Vec<String> {
    args.enumerate()
        .map(|(i, a)| {
            let bytes = a.as_bytes();
            let wordy = bytes.len() > 2
                && bytes[0] == b'-'
                && bytes[1].is_ascii_alphabetic()
                && bytes[2..]
                    .iter()
                    .all(|b| b.is_ascii_alphanumeric() || *b == b'_' || *b == b'-');
            if i > 0 && wordy {
                format!("-{a}")
            } else {
                a
            }
        })
        .collect()
}

struct Output {
    stdout: String,
    stderr: String,
}

impl Output {
    fn new() -> Output {
        Output {
            stdout: String::new(),
            stderr: String::new(),
        }
    }

    fn line(&mut self, text: impl AsRef<str>) {
        self.stdout.push_str(text.as_ref());
        self.stdout.push('\n');
    }

    fn json(&mut self, value: &Value) {
        self.line(value.to_string());
    }
}

fn parse_perm(text: &str, degree: usize) -> Result<Permutation, Error> {
    Permutation::parse(text, degree)
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

fn route_name(route: LiftRoute) -> &'static str {
    match route {
        LiftRoute::Printed => "printed",
        LiftRoute::Embedded => "embedded",
        LiftRoute::Search => "search",
    }
}

fn run(cli: &Cli, out: &mut Output) -> Result<(), Error> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Theta { k, sigma } => {
            let sigma = parse_perm(sigma, k + 1)?;
            let t = theta(*k, &sigma)?;
            if json {
                out.json(
                    &json!({"k": k, "sigma": sigma.format_cycles(), "coords": strings(t.coords())}),
                );
            } else {
                out.line(t.format_coords());
            }
        }
        Command::Eval { map, at } => {
            let z: OmegaPoint = at.parse()?;
            let f = FactoredMap::parse(map, z.ambient_k())?;
            let value = f.evaluate(&z)?;
            if json {
                out.json(
                    &json!({"map": f.to_string(), "at": z.to_string(), "value": value.to_string()}),
                );
            } else {
                out.line(value.to_string());
            }
        }
        Command::Classify { k, specs } => {
            let specs = CrossRatioSpec::parse_list(specs, *k)?;
            let verdict = validate_tuple(&specs, *k)?;
            let extension = match verdict {
                Verdict::ValidMap { .. } if *k <= cli.ceiling => {
                    Some(extensions(&specs, *k)?.remove(0))
                }
                _ => None,
            };
            let coords: Vec<String> = specs
                .iter()
                .map(|c| lc_map(c).map(|f| f.to_string()))
                .collect::<Result<_, _>>()?;
            if json {
                let mut record = json!({"k": k, "specs": strings(&specs), "coords": coords});
                match verdict {
                    Verdict::ValidMap { n } => {
                        record["verdict"] = json!("ValidMap");
                        record["n"] = json!(n);
                    }
                    Verdict::CollisionAt(i, j) => {
                        record["verdict"] = json!("CollisionAt");
                        record["pair"] = json!([i, j]);
                    }
                    Verdict::TooManyCoordinates => record["verdict"] = json!("TooManyCoordinates"),
                }
                if let Some(t) = &extension {
                    record["extension"] = json!(strings(t.coords()));
                }
                out.json(&record);
            } else {
                match verdict {
                    Verdict::ValidMap { n } => {
                        out.line(format!("valid map into Omega_{n}: {}", coords.join(" , ")))
                    }
                    Verdict::CollisionAt(i, j) => {
                        out.line(format!("collision between coordinates {i} and {j}"))
                    }
                    Verdict::TooManyCoordinates => out.line(format!(
                        "too many coordinates: at most {} on Omega_{k}",
                        k - 2
                    )),
                }
                if let Some(t) = &extension {
                    out.line(format!("extends to {}", t.format_coords()));
                }
            }
        }
        Command::Enumerate { m, n } => {
            let maps = enumerate_maps_with_ceiling(*m, *n, cli.ceiling)?;
            for d in &maps {
                if json {
                    out.line(serde_json::to_string(&d.record()).expect("records serialize"));
                } else {
                    out.line(d.to_string());
                }
            }
            if json {
                out.stderr.push_str(&format!("count: {}\n", maps.len()));
            } else {
                out.line(format!("count: {}", maps.len()));
            }
        }
        Command::Catalog { k, diff_lists } => {
            let catalog = coordinate_catalog_with_ceiling(*k, cli.ceiling)?;
            let diff = if *diff_lists {
                Some(catalog.diff_lists()?)
            } else {
                None
            };
            if json {
                let functions: Vec<Value> = catalog
                    .entries()
                    .map(|(f, q)| json!({"map": f.to_string(), "quadruple": q}))
                    .collect();
                let mut record = json!({"k": k, "count": catalog.len(), "functions": functions});
                if let Some(d) = &diff {
                    record["diff"] = serde_json::to_value(d).expect("diffs serialize");
                }
                out.json(&record);
            } else {
                for (f, q) in catalog.entries() {
                    out.line(format!("{f}\t({},{},{},{})", q[0], q[1], q[2], q[3]));
                }
                out.line(format!("count: {}", catalog.len()));
                if let Some(d) = &diff {
                    out.line(format!(
                        "list for k = {k}: {} forms; with the lists for smaller k: {} forms",
                        d.list_size, d.cumulative_size
                    ));
                    for f in &d.missing_from_catalog {
                        out.line(format!("listed but not a coordinate: {f}"));
                    }
                    for f in &d.absent_from_list {
                        let note = if d.absent_from_cumulative.contains(f) {
                            "in no list"
                        } else {
                            "only in a smaller-k list"
                        };
                        out.line(format!("coordinate not in this list ({note}): {f}"));
                    }
                    out.line(if d.is_exact() {
                        "exact match"
                    } else if d.missing_from_catalog.is_empty()
                        && d.absent_from_cumulative.is_empty()
                    {
                        "matches together with the lists for smaller k"
                    } else {
                        "differences found"
                    });
                }
            }
        }
        Command::Lift { n, m, j, sigma } => {
            let sigma = parse_perm(sigma, n + 1)?;
            let j: Vec<usize> = j
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::MalformedInput(format!("not an index list: {j:?}")))
                })
                .collect::<Result<_, _>>()?;
            let lift = lift_permutation(&sigma, *m, &j)?;
            let u = theta(*m, &lift.sigma_hat)?;
            let printed = lift
                .printed_candidate
                .as_ref()
                .map(Permutation::format_cycles);
            if json {
                out.json(&json!({
                    "m": m, "n": n, "J": j, "sigma": sigma.format_cycles(),
                    "sigma_hat": lift.sigma_hat.format_cycles(), "route": route_name(lift.route),
                    "printed_candidate": printed, "coords": strings(u.coords()), "verified": true,
                }));
            } else {
                out.line(format!("sigma_hat: {}", lift.sigma_hat.format_cycles()));
                out.line(format!("U: {}", u.format_coords()));
                out.line(format!("route: {}", route_name(lift.route)));
                if lift.route != LiftRoute::Printed {
                    out.line(format!(
                        "printed rule: {}",
                        printed.map_or("not a permutation".to_string(), |p| format!(
                            "{p} (fails verification)"
                        ))
                    ));
                }
                out.line("verified: pi_J o U = T o pi_J");
            }
        }
        Command::Collide { k, c1, c2, budget } => {
            let c1 = CrossRatioSpec::parse(c1, *k)?;
            let c2 = CrossRatioSpec::parse(c2, *k)?;
            let case = collision_case(&c1, &c2)?;
            let witness = match case {
                Some(_) => None,
                None => {
                    match collision_witness_with_height(&c1, &c2, *budget, cli.seed, cli.height) {
                        Ok(w) => Some(w),
                        Err(Error::BudgetExhausted(_)) => None,
                        Err(e) => return Err(e),
                    }
                }
            };
            if json {
                out.json(&json!({
                    "k": k, "c1": c1.to_string(), "c2": c2.to_string(),
                    "collision_free": case.is_some(),
                    "case": case.map(|c| c.letter().to_string()),
                    "witness": witness.as_ref().map(Witness::to_string),
                }));
            } else {
                match (case, &witness) {
                    (Some(c), _) => out.line(format!("collision-free (case {})", c.letter())),
                    (None, Some(w)) => out.line(format!("collision at z = ({w})")),
                    (None, None) => out.line(format!(
                        "collision (no witness within {budget} specializations)"
                    )),
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(normalize(std::env::args()));
    let mut out = Output::new();
    let result = run(&cli, &mut out);
    eprint!("{}", out.stderr);
    if let Err(e) = result {
        eprintln!("error: {}: {e}", e.name());
        return ExitCode::from(1);
    }
    let written = match &cli.output {
        Some(path) => fs::write(path, &out.stdout),
        None => io::stdout().write_all(out.stdout.as_bytes()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: Io: {e}");
            ExitCode::from(1)
        }
    }
}
