//! `tropdissim`: compute and check m-dissimilarity maps from the shell.
//!
//! Exit codes: 0 success or "pass", 1 a mathematical "no" (witness on
//! stdout), 2 usage, input or format errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tropdissim::dissim::{
    in_l, membership3, p_project, phi_3, phi_m_with, pi4, verify_m4_characterization, Evaluator,
    Membership3,
};
use tropdissim::formats::{
    matrix_from_json, matrix_to_json, pi_point_to_json, read_matrix, read_tensor, tensor_from_json,
    tensor_to_json, write_certificate, write_matrix, write_tensor,
};
use tropdissim::puiseux::{build_certificate, verify_certificate};
use tropdissim::subsets::subsets;
use tropdissim::trees::{
    parse_newick, random_tree, reconstruct_tree, serialize_newick, topology_count, Shape,
    WeightSampler,
};
use tropdissim::tropical::{four_point_check, in_tmn, is_ultrametric, Verdict};
use tropdissim::{format_exact, Error, Matrix, Rational, Tensor, Tree};

#[derive(Parser)]
#[command(
    name = "tropdissim",
    version,
    about = "Exact m-dissimilarity maps of weighted trees"
)]
struct Cli {
    /// Worker threads for parallel evaluation (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the m-dissimilarity map of a Newick tree.
    Dissim {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Recompute every entry as a spanning-subtree weight and compare.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t = EvaluatorArg::Auto)]
        evaluator: EvaluatorArg,
    },
    /// Test a matrix or tensor file against one of the tree-space conditions.
    Check(CheckArgs),
    /// Decide whether a 3-dissimilarity tensor comes from a tree.
    Membership3 {
        tensor: PathBuf,
        /// Also write the recovered matrix here on "yes".
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and verify the minor certificate for a tree's 3-dissimilarity map.
    Certify3 {
        #[arg(long)]
        tree: PathBuf,
        /// Write the certificate JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a seeded random binary tree in Newick form.
    RandomTree {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ShapeArg::Uniform)]
        shape: ShapeArg,
        /// Integer weights in MIN..=MAX instead of small positive fractions.
        #[arg(long, num_args = 2, value_names = ["MIN", "MAX"])]
        int_weights: Option<Vec<i64>>,
    },
    /// Print (2n-5)!!, the number of binary topologies on n leaves.
    CountTopologies {
        #[arg(long)]
        n: usize,
    },
    /// Rebuild the tree realizing a tree metric.
    Reconstruct { matrix: PathBuf },
    /// Print the leaf distance matrix of a Newick tree.
    Distance {
        #[arg(long)]
        tree: PathBuf,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "condition")]
struct Condition {
    /// Four-point condition (tree metric).
    #[arg(long)]
    metric: bool,
    /// Ultrametric condition.
    #[arg(long)]
    ultra: bool,
    /// Three-term Plücker relations for an m-tensor.
    #[arg(long, value_name = "M")]
    tmn: Option<usize>,
    /// Pairing-coordinate characterization for 4-dissimilarity maps.
    #[arg(long)]
    m4: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    condition: Condition,
    /// With --metric, only check distinct quadruples.
    #[arg(long)]
    strict: bool,
    file: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvaluatorArg {
    Auto,
    Brute,
    Dp,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Uniform,
    Caterpillar,
}

/// Outcome of a subcommand: success, or a "no" verdict, each with a report.
enum Outcome {
    Pass(String),
    Fail(String),
}

/// Usage and input problems; always exit code 2.
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

type CmdResult = Result<Outcome, Usage>;

fn read_file(path: &Path) -> Result<String, Usage> {
    fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Usage> {
    fs::write(path, text).map_err(|e| Usage(format!("cannot write {}: {e}", path.display())))
}

fn load_tree(path: &Path) -> Result<Tree, Usage> {
    let text = read_file(path)?;
    parse_newick(text.trim()).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn verdict_json(kind: &str, v: &Verdict<Rational>) -> Value {
    let mut out = json!({ "check": kind, "pass": v.passed(), "checked": v.checked });
    if let Some(w) = &v.witness {
        out["witness"] = json!({
            "context": w.context,
            "indices": w.indices,
            "values": w.values.iter().map(format_exact).collect::<Vec<_>>(),
        });
    }
    out
}

fn report_verdict(kind: &str, v: &Verdict<Rational>) -> Outcome {
    let text = pretty(&verdict_json(kind, v));
    match &v.witness {
        None => {
            eprintln!("{kind}: pass ({} tuples checked)", v.checked);
            Outcome::Pass(text)
        }
        Some(w) => {
            eprintln!("{kind}: fail at {w}");
            Outcome::Fail(text)
        }
    }
}

fn cmd_dissim(
    tree: &Path,
    m: usize,
    out: Option<&Path>,
    oracle: bool,
    evaluator: EvaluatorArg,
) -> CmdResult {
    let t = load_tree(tree)?;
    let evaluator = match evaluator {
        EvaluatorArg::Auto => Evaluator::Auto,
        EvaluatorArg::Brute => Evaluator::BruteForce,
        EvaluatorArg::Dp => Evaluator::HeldKarp,
    };
    let w = phi_m_with(&t.distance_matrix(), m, evaluator)?;
    if oracle {
        for (s, v) in w.iter() {
            let expect = t.steiner_weight(&s)?;
            if *v != expect {
                return Ok(Outcome::Fail(pretty(&json!({
                    "oracle": "mismatch",
                    "subset": s,
                    "tour": format_exact(v),
                    "subtree": format_exact(&expect),
                }))));
            }
        }
        eprintln!(
            "oracle: all {} entries match spanning-subtree weights",
            w.iter().count()
        );
    }
    let text = write_tensor(&w);
    match out {
        Some(p) => {
            write_file(p, &text)?;
            Ok(Outcome::Pass(String::new()))
        }
        None => Ok(Outcome::Pass(text.trim_end().to_owned())),
    }
}

fn load_json(path: &Path) -> Result<Value, Usage> {
    serde_json::from_str(&read_file(path)?)
        .map_err(|e| Usage(format!("{}: invalid JSON: {e}", path.display())))
}

fn cmd_check(args: &CheckArgs) -> CmdResult {
    let raw = load_json(&args.file)?;
    let c = &args.condition;
    if let Some(m) = c.tmn {
        let t: Tensor = tensor_from_json(&raw)?;
        if t.m() != m {
            return Err(Usage(format!(
                "--tmn {m} given but the tensor has m = {}",
                t.m()
            )));
        }
        return Ok(report_verdict("tmn", &in_tmn(&t)));
    }
    let d: Matrix = matrix_from_json(&raw)?;
    if c.metric {
        let kind = if args.strict {
            "four-point (distinct)"
        } else {
            "four-point"
        };
        return Ok(report_verdict(kind, &four_point_check(&d, args.strict)));
    }
    if c.ultra {
        return Ok(report_verdict("ultrametric", &is_ultrametric(&d)));
    }
    let report = verify_m4_characterization(&d)?;
    let p = pi4(&d)?;
    let verdict = in_l(&p);
    let rows: Vec<Value> = report
        .rows
        .iter()
        .filter(|r| !r.in_l || !r.max_twice)
        .map(|r| {
            json!({
                "quadruple": r.quadruple,
                "sums": r.sums.iter().map(format_exact).collect::<Vec<_>>(),
                "max_twice": r.max_twice,
                "eqn_min": r.eqn_min,
                "in_l": r.in_l,
            })
        })
        .collect();
    let mut out = verdict_json("m4", &verdict);
    out["equivalence_holds"] = json!(report.equivalence_holds());
    out["failing"] = Value::Array(rows);
    if verdict.passed() {
        let proj = p_project(&p)?;
        out["projection"] = tensor_to_json(&proj);
        eprintln!("m4: pass, pi4(D) lies in L");
        Ok(Outcome::Pass(pretty(&out)))
    } else {
        eprintln!("m4: fail at {}", verdict.witness.as_ref().expect("failed"));
        out["pi4"] = pi_point_to_json(&p);
        Ok(Outcome::Fail(pretty(&out)))
    }
}

fn cmd_membership3(path: &Path, out: Option<&Path>) -> CmdResult {
    let w: Tensor = read_tensor(&read_file(path)?)?;
    if w.m() != 3 {
        return Err(Usage(format!(
            "expected a 3-dissimilarity tensor, got m = {}",
            w.m()
        )));
    }
    match membership3(&w)? {
        Membership3::Yes { matrix, tree } => {
            if let Some(p) = out {
                write_file(p, &write_matrix(&matrix))?;
            }
            let newick = tree.as_ref().map(serialize_newick);
            eprintln!("membership3: yes");
            Ok(Outcome::Pass(pretty(&json!({
                "member": true,
                "newick": newick,
                "matrix": matrix_to_json(&matrix),
            }))))
        }
        Membership3::NotInLinearImage { witness, .. } => {
            eprintln!("membership3: no, not the image of any matrix (triple {witness})");
            Ok(Outcome::Fail(pretty(&json!({
                "member": false,
                "reason": "not in the image of the 3-dissimilarity map",
                "triple": witness.indices,
                "values": witness.values.iter().map(format_exact).collect::<Vec<_>>(),
            }))))
        }
        Membership3::NotTreeMetric {
            matrix,
            quadruple,
            tmn_witness,
        } => {
            eprintln!("membership3: no, preimage fails the four-point condition at {tmn_witness}");
            Ok(Outcome::Fail(pretty(&json!({
                "member": false,
                "reason": "preimage is not a tree metric",
                "quadruple": quadruple,
                "context": tmn_witness.context,
                "values": tmn_witness.values.iter().map(format_exact).collect::<Vec<_>>(),
                "matrix": matrix_to_json(&matrix),
            }))))
        }
    }
}

fn cmd_certify3(tree: &Path, out: Option<&Path>) -> CmdResult {
    let t = load_tree(tree)?;
    let cert = build_certificate(&t)?;
    if let Some(p) = out {
        write_file(p, &write_certificate(&cert))?;
    }
    let w = phi_3(&t.distance_matrix())?;
    let verdict = verify_certificate(&cert, &w)?;
    let mut lines = Vec::new();
    for s in subsets(t.n(), 3) {
        let got = cert
            .minor(s[0], s[1], s[2])
            .val()
            .map_or_else(|| "inf".to_owned(), |v| format_exact(&-v.clone()));
        lines.push(format!(
            "{},{},{}: {} = {}",
            s[0],
            s[1],
            s[2],
            format_exact(w.get(&s)),
            got
        ));
    }
    let table = lines.join("\n");
    if verdict.passed() {
        Ok(Outcome::Pass(table))
    } else {
        Ok(Outcome::Fail(format!(
            "{table}\nmismatch at {}",
            verdict.witness.expect("failed")
        )))
    }
}

fn cmd_random_tree(n: usize, seed: u64, shape: ShapeArg, ints: Option<&[i64]>) -> CmdResult {
    let shape = match shape {
        ShapeArg::Uniform => Shape::UniformTopology,
        ShapeArg::Caterpillar => Shape::Caterpillar,
    };
    let weights = match ints {
        Some(&[min, max]) => WeightSampler::Integers { min, max },
        _ => WeightSampler::default(),
    };
    let t: Tree = random_tree(n, seed, shape, weights)?;
    Ok(Outcome::Pass(serialize_newick(&t)))
}

fn cmd_reconstruct(path: &Path) -> CmdResult {
    let d: Matrix = read_matrix(&read_file(path)?)?;
    match reconstruct_tree(&d) {
        Ok(t) => Ok(Outcome::Pass(serialize_newick(&t))),
        Err(Error::Violation { .. }) => Ok(Outcome::Fail(
            report_verdict("four-point", &four_point_check(&d, false)).into_text(),
        )),
        Err(e) => Err(e.into()),
    }
}

impl Outcome {
    fn into_text(self) -> String {
        match self {
            Outcome::Pass(s) | Outcome::Fail(s) => s,
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Dissim {
            tree,
            m,
            out,
            oracle,
            evaluator,
        } => cmd_dissim(&tree, m, out.as_deref(), oracle, evaluator),
        Command::Check(args) => cmd_check(&args),
        Command::Membership3 { tensor, out } => cmd_membership3(&tensor, out.as_deref()),
        Command::Certify3 { tree, out } => cmd_certify3(&tree, out.as_deref()),
        Command::RandomTree {
            n,
            seed,
            shape,
            int_weights,
        } => cmd_random_tree(n, seed, shape, int_weights.as_deref()),
        Command::CountTopologies { n } => match topology_count(n) {
            Some(c) => Ok(Outcome::Pass(c.to_string())),
            None if n < 3 => Err(Usage(format!("need n >= 3, got {n}"))),
            None => Err(Usage(format!("(2n-5)!! overflows 128 bits at n = {n}"))),
        },
        Command::Reconstruct { matrix } => cmd_reconstruct(&matrix),
        Command::Distance { tree } => {
            let t = load_tree(&tree)?;
            Ok(Outcome::Pass(
                write_matrix(&t.distance_matrix()).trim_end().to_owned(),
            ))
        }
    }
}

/// Prints to stdout, treating a closed pipe as success.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass(text)) => {
            if !text.is_empty() {
                emit(&text);
            }
            ExitCode::SUCCESS
        }
        Ok(Outcome::Fail(text)) => {
            emit(&text);
            ExitCode::from(1)
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
