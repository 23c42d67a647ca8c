//! `ech` — command-line front end for the convex-generator engine.
//!
//! Every numeric input is an exact rational (`p/q` or an integer; floats
//! are rejected), generators are written as formal products like
//! `e_{1,0}^3 e_{2,1} e_{1,3}`, and domains as `P(a,b)`, `E(a,b)`, `B(c)`,
//! or `poly[(x1,y1),...]`. Output is deterministic for fixed inputs.
//!
//! Exit codes: 0 success or witness found, 10 obstruction established,
//! 2 usage or parameter error.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ech_core::capacity::{capacity, capacity_with_minimizers, construct_y_sequence};
use ech_core::criterion::{leq, run_criterion, CriterionConfig, Outcome};
use ech_core::domain::ToricDomain;
use ech_core::enumerate::{enumerate, EnumBounds};
use ech_core::pipeline::{
    construct_fvm, sharpness_witness, theorem14_pipeline, PipelineParams, PipelineVerdict,
};
use ech_core::rational::{parse_rational, rat_int};
use ech_core::{ConvexGenerator, EchError};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(
    name = "ech",
    about = "Exact combinatorics of convex generators: ECH indices, actions, capacities, and symplectic embedding obstructions for four-dimensional convex toric domains",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Combinatorial quantities of a generator: x, y, m, h, L, b, 2A, I.
    Stats { generator: String },
    /// ECH index of a generator.
    Index { generator: String },
    /// Formal product of two generators (fails if both carry the same h factor).
    Product { g1: String, g2: String },
    /// Symplectic action of a generator with respect to a domain.
    Action { domain: String, generator: String },
    /// Capacity table c_0..c_k of a domain.
    Capacities {
        domain: String,
        #[arg(long, value_name = "K")]
        k_max: i64,
    },
    /// Action minimizers among all-e generators of index 2k; the generator
    /// is minimal when the list is a singleton.
    Minimal {
        domain: String,
        #[arg(short, long)]
        k: i64,
    },
    /// All generators in a box, optionally filtered by index and action.
    Enumerate(EnumerateArgs),
    /// Evaluate the relation lhs <= rhs between two domains.
    Leq {
        from: String,
        to: String,
        lhs: String,
        rhs: String,
    },
    /// Run the embedding criterion search for a minimal all-e target.
    Obstruct(ObstructArgs),
    /// Decide the embedding P(a,1) into B(c) for c below the folding bound.
    Pipeline(PipelineArgs),
    /// Sharpness constructions: the lattice-point-removal pair (with
    /// --delta) or the three-edge generator for level d (without).
    Construct {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        delta: Option<i64>,
    },
    /// Explicit witness showing the obstruction cannot reach past the
    /// threshold: a generator related to e_{1,1}^d at radius 2 + a/2 - eps.
    Witness {
        #[arg(long)]
        a: String,
        #[arg(long)]
        d: i64,
    },
    /// Run the built-in oracle suites (lattice census vs area formula,
    /// product-index formula vs direct products, pairwise vs subset
    /// conditions) and report pass/fail counts.
    Verify,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    max_x: i64,
    #[arg(long)]
    max_y: i64,
    /// Keep only generators of exactly this index.
    #[arg(long)]
    index: Option<i64>,
    /// Domain for the action cap (requires --action-max).
    #[arg(long, requires = "action_max")]
    action_domain: Option<String>,
    /// Keep only generators of action at most this value.
    #[arg(long, requires = "action_domain")]
    action_max: Option<String>,
    /// Include h-labelled edges.
    #[arg(long)]
    allow_h: bool,
}

#[derive(Args)]
struct ObstructArgs {
    #[arg(long)]
    from: String,
    #[arg(long)]
    to: String,
    #[arg(long)]
    target: String,
    #[arg(long)]
    max_parts: Option<usize>,
    /// Skip repeated identical factor pairs (only sound where the
    /// no-repeats statement holds; the pipeline enables it after checking).
    #[arg(long)]
    no_repeats_pruning: bool,
    /// Accept non-minimal all-e targets (recognized but rejected).
    #[arg(long)]
    improved_criterion: bool,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    c: String,
    /// Ceiling on the index level the search may require.
    #[arg(long, default_value_t = 1_000_000)]
    d_max: i64,
    /// Emit the step-by-step markdown trace.
    #[arg(long)]
    trace: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode, EchError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Stats { generator } => {
            let g: ConvexGenerator = generator.parse()?;
            let s = g.stats();
            match fmt {
                Format::Json => print_json(&StatsOut {
                    schema: SCHEMA,
                    generator: g.to_string(),
                    x: s.x,
                    y: s.y,
                    m: s.m,
                    h: s.h,
                    lattice_points: s.lattice_points,
                    b: s.b,
                    doubled_area: s.doubled_area,
                    index: s.index,
                }),
                Format::Text => {
                    println!("generator: {g}");
                    println!("x = {}, y = {}, m = {}, h = {}", s.x, s.y, s.m, s.h);
                    println!(
                        "L = {}, b = {}, 2A = {}",
                        s.lattice_points, s.b, s.doubled_area
                    );
                    println!("index I = {}", s.index);
                }
                Format::Csv => {
                    println!("generator,x,y,m,h,L,b,doubled_area,index");
                    println!(
                        "\"{g}\",{},{},{},{},{},{},{},{}",
                        s.x, s.y, s.m, s.h, s.lattice_points, s.b, s.doubled_area, s.index
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Index { generator } => {
            let g: ConvexGenerator = generator.parse()?;
            match fmt {
                Format::Json => print_json(&IndexOut {
                    schema: SCHEMA,
                    generator: g.to_string(),
                    index: g.index(),
                }),
                _ => println!("{}", g.index()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Product { g1, g2 } => {
            let g1: ConvexGenerator = g1.parse()?;
            let g2: ConvexGenerator = g2.parse()?;
            let product = g1.product(&g2)?;
            match fmt {
                Format::Json => print_json(&ProductOut {
                    schema: SCHEMA,
                    factors: vec![g1.to_string(), g2.to_string()],
                    product: product.to_string(),
                    index: product.index(),
                }),
                _ => println!("{product}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Action { domain, generator } => {
            let dom: ToricDomain = domain.parse()?;
            let g: ConvexGenerator = generator.parse()?;
            let action = dom.action(&g);
            match fmt {
                Format::Json => print_json(&ActionOut {
                    schema: SCHEMA,
                    domain: dom.to_string(),
                    generator: g.to_string(),
                    action: action.to_string(),
                }),
                _ => println!("{action}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Capacities { domain, k_max } => {
            let dom: ToricDomain = domain.parse()?;
            if *k_max < 0 {
                return Err(EchError::ParamOutOfRange(
                    "--k-max must be nonnegative".into(),
                ));
            }
            let rows: Vec<CapacityRow> = (0..=*k_max)
                .map(|k| {
                    let value = capacity(&dom, k);
                    CapacityRow {
                        k,
                        capacity: value.to_string(),
                        capacity_num: value.numer().to_string(),
                        capacity_den: value.denom().to_string(),
                    }
                })
                .collect();
            match fmt {
                Format::Json => print_json(&CapacitiesOut {
                    schema: SCHEMA,
                    domain: dom.to_string(),
                    capacities: rows,
                }),
                Format::Csv => {
                    println!("k,capacity_num,capacity_den");
                    for row in rows {
                        println!("{},{},{}", row.k, row.capacity_num, row.capacity_den);
                    }
                }
                Format::Text => {
                    for row in rows {
                        println!("c_{} = {}", row.k, row.capacity);
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Minimal { domain, k } => {
            let dom: ToricDomain = domain.parse()?;
            if *k < 0 {
                return Err(EchError::ParamOutOfRange("-k must be nonnegative".into()));
            }
            let (value, minimizers) = capacity_with_minimizers(&dom, *k);
            let names: Vec<String> = minimizers.iter().map(|g| g.to_string()).collect();
            match fmt {
                Format::Json => print_json(&MinimalOut {
                    schema: SCHEMA,
                    domain: dom.to_string(),
                    k: *k,
                    index: 2 * *k,
                    capacity: value.to_string(),
                    minimal: names.len() == 1,
                    generators: names,
                }),
                Format::Csv => {
                    println!("generator,action");
                    for g in &names {
                        println!("\"{g}\",{value}");
                    }
                }
                Format::Text => {
                    println!("c_{k} = {value}, attained by {} generator(s):", names.len());
                    for g in &names {
                        println!("  {g}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Enumerate(args) => {
            let mut bounds = EnumBounds::new(args.max_x, args.max_y);
            if let Some(i) = args.index {
                bounds = bounds.with_target_index(i);
            }
            if let (Some(dom), Some(cap)) = (&args.action_domain, &args.action_max) {
                bounds = bounds.with_max_action(dom.parse()?, parse_rational(cap)?);
            }
            if args.allow_h {
                bounds = bounds.with_h();
            }
            let gens = enumerate(&bounds);
            match fmt {
                Format::Json => print_json(&EnumerateOut {
                    schema: SCHEMA,
                    max_x: args.max_x,
                    max_y: args.max_y,
                    count: gens.len(),
                    generators: gens
                        .iter()
                        .map(|g| GeneratorRow {
                            generator: g.to_string(),
                            index: g.index(),
                        })
                        .collect(),
                }),
                Format::Csv => {
                    println!("generator,index,x,y,m,h");
                    for g in &gens {
                        let s = g.stats();
                        println!("\"{g}\",{},{},{},{},{}", s.index, s.x, s.y, s.m, s.h);
                    }
                }
                Format::Text => {
                    for g in &gens {
                        println!("{g}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Leq { from, to, lhs, rhs } => {
            let from: ToricDomain = from.parse()?;
            let to: ToricDomain = to.parse()?;
            let lhs: ConvexGenerator = lhs.parse()?;
            let rhs: ConvexGenerator = rhs.parse()?;
            let w = leq(&from, &to, &lhs, &rhs);
            match fmt {
                Format::Json => print_json(&LeqOut {
                    schema: SCHEMA,
                    from: from.to_string(),
                    to: to.to_string(),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                    index_ok: w.index_ok,
                    action_ok: w.action_ok,
                    genus_ok: w.genus_ok,
                    holds: w.holds(),
                }),
                _ => {
                    println!(
                        "index_ok = {}, action_ok = {}, genus_ok = {}",
                        w.index_ok, w.action_ok, w.genus_ok
                    );
                    println!("{}", if w.holds() { "holds" } else { "does not hold" });
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Obstruct(args) => {
            let cfg = CriterionConfig {
                domain_from: args.from.parse()?,
                domain_to: args.to.parse()?,
                target: args.target.parse()?,
                max_parts: args.max_parts,
                no_repeats_pruning: args.no_repeats_pruning,
                improved_criterion: args.improved_criterion,
                part_index_cap: None,
            };
            let report = run_criterion(&cfg)?;
            match fmt {
                Format::Json => print_json(&ObstructOut {
                    schema: SCHEMA,
                    from: cfg.domain_from.to_string(),
                    to: cfg.domain_to.to_string(),
                    target: cfg.target.to_string(),
                    outcome: outcome_name(report.outcome),
                    witness: report.witness.as_ref().map(|w| {
                        w.iter()
                            .map(|(p, c)| [p.to_string(), c.to_string()])
                            .collect()
                    }),
                    nodes_explored: report.nodes_explored,
                    candidates_per_part: report.candidates_per_part.clone(),
                }),
                _ => {
                    println!("outcome: {}", outcome_name(report.outcome));
                    if let Some(witness) = &report.witness {
                        if witness.is_empty() {
                            println!("witness: empty factorization (n = 0)");
                        }
                        for (p, c) in witness {
                            println!("  part {p}  <-  {c}");
                        }
                    }
                    println!("nodes explored: {}", report.nodes_explored);
                }
            }
            Ok(match report.outcome {
                Outcome::Obstructed => ExitCode::from(10),
                Outcome::WitnessFound => ExitCode::SUCCESS,
            })
        }
        Command::Pipeline(args) => {
            let params = PipelineParams {
                a: parse_rational(&args.a)?,
                c: parse_rational(&args.c)?,
                d_max: args.d_max,
            };
            let report = theorem14_pipeline(&params)?;
            match fmt {
                Format::Json => print_json(&PipelineOut {
                    schema: SCHEMA,
                    a: params.a.to_string(),
                    c: params.c.to_string(),
                    d_a: report.d_a,
                    n_d: report
                        .n_d
                        .iter()
                        .map(|(d, n)| (d.to_string(), *n))
                        .collect(),
                    n: report.n,
                    d: report.target_level,
                    verdict: verdict_name(report.verdict),
                    nodes_explored: report.criterion.nodes_explored,
                    trace: args.trace.then(|| report.trace.clone()),
                }),
                _ => {
                    println!("verdict: {}", verdict_name(report.verdict));
                    println!(
                        "d_a = {}, N = {}, D = {}",
                        report.d_a, report.n, report.target_level
                    );
                    if args.trace {
                        println!();
                        print!("{}", report.trace);
                    }
                }
            }
            Ok(match report.verdict {
                PipelineVerdict::EmbeddingObstructed => ExitCode::from(10),
                PipelineVerdict::Inconclusive => ExitCode::SUCCESS,
            })
        }
        Command::Construct { d, delta } => {
            match delta {
                Some(delta) => {
                    let (y, x) = construct_y_sequence(*d, *delta)?;
                    match fmt {
                        Format::Json => print_json(&YSequenceOut {
                            schema: SCHEMA,
                            d: *d,
                            delta: *delta,
                            y: y.to_string(),
                            x: x.to_string(),
                            index: y.index(),
                        }),
                        _ => {
                            println!("Y_{delta} = {y}");
                            println!("X_{delta} = {x}");
                            println!("index = {}", y.index());
                        }
                    }
                }
                None => {
                    let g = construct_fvm(*d)?;
                    match fmt {
                        Format::Json => print_json(&FvmOut {
                            schema: SCHEMA,
                            d: *d,
                            generator: g.to_string(),
                            endpoint_sum: g.x() + g.y(),
                            index: g.index(),
                        }),
                        _ => {
                            println!("{g}");
                            println!("x + y = {}, index = {}", g.x() + g.y(), g.index());
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Witness { a, d } => {
            let a = parse_rational(a)?;
            let (epsilon, witness) = sharpness_witness(&a, *d)?;
            let c = rat_int(2) + a.clone() / rat_int(2) - epsilon.clone();
            match fmt {
                Format::Json => print_json(&WitnessOut {
                    schema: SCHEMA,
                    a: a.to_string(),
                    d: *d,
                    epsilon: epsilon.to_string(),
                    c: c.to_string(),
                    witness: witness.to_string(),
                }),
                _ => {
                    println!("witness: {witness}");
                    println!("epsilon = {epsilon}, c = 2 + a/2 - epsilon = {c}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify => {
            let suites = run_verify_suites();
            let passed = suites.iter().all(|s| s.failures == 0);
            match fmt {
                Format::Json => {
                    print_json(&VerifyOut {
                        schema: SCHEMA,
                        suites,
                        passed,
                    });
                }
                _ => {
                    for s in &suites {
                        println!("{}: {} checked, {} failures", s.name, s.checked, s.failures);
                    }
                    println!("{}", if passed { "PASS" } else { "FAIL" });
                }
            }
            Ok(if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
    }
}

fn outcome_name(outcome: Outcome) -> &'static str {
    match outcome {
        Outcome::Obstructed => "Obstructed",
        Outcome::WitnessFound => "WitnessFound",
    }
}

fn verdict_name(verdict: PipelineVerdict) -> &'static str {
    match verdict {
        PipelineVerdict::EmbeddingObstructed => "EmbeddingObstructed",
        PipelineVerdict::Inconclusive => "Inconclusive",
    }
}

fn run_verify_suites() -> Vec<SuiteOut> {
    let (pick_checked, pick_failures) = ech_core::sweeps::pick_sweep(5, 5);
    let (exh_checked, exh_failures) = ech_core::sweeps::product_formula_sweep(3, 3);
    let (rand_checked, rand_failures) =
        ech_core::sweeps::product_formula_random_sweep(8, 8, 500, 0x5eed);
    let families = ech_core::sweeps::subset_family_sweep(3, 3, 3);
    vec![
        SuiteOut {
            name: "lattice census vs area formula (box 5x5, all labelings)".into(),
            checked: pick_checked,
            failures: pick_failures,
        },
        SuiteOut {
            name: "product-index formula vs direct product (box 3x3, exhaustive pairs)".into(),
            checked: exh_checked,
            failures: exh_failures,
        },
        SuiteOut {
            name: "product-index formula vs direct product (box 8x8, 500 seeded pairs)".into(),
            checked: rand_checked,
            failures: rand_failures,
        },
        SuiteOut {
            name: "pairwise conditions imply subset conditions (box 3x3, families of 3)".into(),
            checked: families.families_checked,
            failures: families.failures,
        },
    ]
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable output")
    );
}

#[derive(Serialize)]
struct StatsOut {
    schema: u32,
    generator: String,
    x: i64,
    y: i64,
    m: i64,
    h: i64,
    #[serde(rename = "L")]
    lattice_points: i64,
    b: i64,
    doubled_area: i64,
    index: i64,
}

#[derive(Serialize)]
struct IndexOut {
    schema: u32,
    generator: String,
    index: i64,
}

#[derive(Serialize)]
struct ProductOut {
    schema: u32,
    factors: Vec<String>,
    product: String,
    index: i64,
}

#[derive(Serialize)]
struct ActionOut {
    schema: u32,
    domain: String,
    generator: String,
    action: String,
}

#[derive(Serialize)]
struct CapacityRow {
    k: i64,
    capacity: String,
    capacity_num: String,
    capacity_den: String,
}

#[derive(Serialize)]
struct CapacitiesOut {
    schema: u32,
    domain: String,
    capacities: Vec<CapacityRow>,
}

#[derive(Serialize)]
struct MinimalOut {
    schema: u32,
    domain: String,
    k: i64,
    index: i64,
    capacity: String,
    minimal: bool,
    generators: Vec<String>,
}

#[derive(Serialize)]
struct GeneratorRow {
    generator: String,
    index: i64,
}

#[derive(Serialize)]
struct EnumerateOut {
    schema: u32,
    max_x: i64,
    max_y: i64,
    count: usize,
    generators: Vec<GeneratorRow>,
}

#[derive(Serialize)]
struct LeqOut {
    schema: u32,
    from: String,
    to: String,
    lhs: String,
    rhs: String,
    index_ok: bool,
    action_ok: bool,
    genus_ok: bool,
    holds: bool,
}

#[derive(Serialize)]
struct ObstructOut {
    schema: u32,
    from: String,
    to: String,
    target: String,
    outcome: &'static str,
    witness: Option<Vec<[String; 2]>>,
    nodes_explored: u64,
    candidates_per_part: BTreeMap<String, usize>,
}

#[derive(Serialize)]
struct PipelineOut {
    schema: u32,
    a: String,
    c: String,
    d_a: i64,
    #[serde(rename = "N_d")]
    n_d: BTreeMap<String, u64>,
    #[serde(rename = "N")]
    n: i64,
    #[serde(rename = "D")]
    d: i64,
    verdict: &'static str,
    nodes_explored: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<String>,
}

#[derive(Serialize)]
struct YSequenceOut {
    schema: u32,
    d: i64,
    delta: i64,
    y: String,
    x: String,
    index: i64,
}

#[derive(Serialize)]
struct FvmOut {
    schema: u32,
    d: i64,
    generator: String,
    endpoint_sum: i64,
    index: i64,
}

#[derive(Serialize)]
struct WitnessOut {
    schema: u32,
    a: String,
    d: i64,
    epsilon: String,
    c: String,
    witness: String,
}

#[derive(Serialize)]
struct VerifyOut {
    schema: u32,
    suites: Vec<SuiteOut>,
    passed: bool,
}

#[derive(Serialize, Clone)]
struct SuiteOut {
    name: String,
    checked: u64,
    failures: u64,
}
