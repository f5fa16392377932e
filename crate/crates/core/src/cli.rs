//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or input
//! error, 3 a resource guard was hit.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::exactmath::rational::parse_rational_list;
use crate::exactmath::{fmt_rational, parse_rational, Rational};
use crate::lattice::{count_points, count_points_nm, ehrhart_ab};
use crate::parking::{count_x_parking, weighted_parking_sum};
use crate::posets::{section_count, section_count_poly, FinitePoset, MarkedChain};
use crate::probability::{band_prob, daniels_poly, mc_band, pyke_formula, pyke_vector, BandSpec};
use crate::treefan::{
    chamber_geometry, delta_volume, enumerate_trees, fan_inequalities, k_of_tree, locate_in_fan, subdivision_obj,
    subdivision_svg, tree_of_k, tree_triangulation, FanLocation, PlaneBinaryTree,
};
use crate::verify;
use crate::volume::{scaled_volume_at, volume_at, volume_poly, PolytopeSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pspoly", version, about = "Exact computations on the polytope Pi_n(x)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Volume polynomial V_n, or its value at x.
    Volume {
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated rationals x_1,...,x_n.
        #[arg(long, allow_hyphen_values = true)]
        eval: Option<String>,
        /// Multiply the value by n!.
        #[arg(long)]
        scaled: bool,
        #[arg(long)]
        json: bool,
    },
    /// Number of integer points of Pi_n(x), or of Pi_n^m(x) with --m.
    Lattice {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Ehrhart polynomial in r of Pi_n(a, b, ..., b).
    Ehrhart {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
    /// x-parking count next to n! V_n(x) and the weighted parking sum.
    Parking {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Lattice points of an order-cone section.
    PosetSection {
        /// JSON file {"size": p, "covers": [[i, j], ...]}, 1-based.
        #[arg(long)]
        poset: PathBuf,
        /// 1-based chain elements, bottom to top.
        #[arg(long)]
        chain: String,
        /// Integer x; omit for the polynomial.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
    },
    /// Plane binary trees and the fan.
    #[command(subcommand)]
    Tree(TreeCommand),
    /// Cells of the subdivision of Pi_n(x).
    Subdivide(SubdivideArgs),
    /// Probability identities.
    #[command(subcommand)]
    Prob(ProbCommand),
    /// Run acceptance checks.
    Verify {
        /// all, a module name, or a criterion number.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        /// TOML config; defaults to $PSPOLY_CONFIG.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum TreeCommand {
    /// All plane binary trees with n internal vertices.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Ballot composition k(T) of a tree written as "(L)R".
    KOf {
        #[arg(long)]
        tree: String,
    },
    /// Tree with the given ballot composition.
    OfK {
        #[arg(long)]
        k: String,
    },
    /// Chamber of the fan containing (y_2, ..., y_n).
    Locate {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Triangulation of the (n+2)-gon for a tree.
    Triangulate {
        #[arg(long)]
        tree: String,
    },
}

#[derive(Debug, Args)]
pub struct SubdivideArgs {
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// SVG drawing (n = 2).
    #[arg(long, conflicts_with_all = ["obj", "json"])]
    svg: bool,
    /// Wavefront OBJ (n = 3).
    #[arg(long, conflicts_with = "json")]
    obj: bool,
    #[arg(long)]
    json: bool,
    /// Write to a file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ProbCommand {
    /// P(r_j <= U_(j) <= s_j for all j).
    Band {
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        s: Option<String>,
    },
    /// n! V_n(1-p, p/n, ..., p/n) as a polynomial in p.
    Daniels {
        #[arg(long)]
        n: usize,
    },
    /// Closed form for n! V_n at the vector determined by (n, b, x).
    Pyke {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Monte Carlo estimate of a band probability.
    Mc {
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        s: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

/// Output of a successful command: text for stdout and the exit code.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

fn ok(text: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { text: text.into(), code: EXIT_OK })
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn int_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("not an integer: {t:?}"))))
        .collect()
}

fn u32_list(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("not a nonnegative integer: {t:?}"))))
        .collect()
}

fn rationals(s: &str) -> Result<Vec<Rational>> {
    parse_rational_list(s)
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

fn band(r: Option<String>, s: Option<String>) -> Result<BandSpec> {
    match (r, s) {
        (Some(r), Some(s)) => BandSpec::new(rationals(&r)?, rationals(&s)?),
        (Some(r), None) => BandSpec::lower(rationals(&r)?),
        (None, Some(s)) => BandSpec::upper(rationals(&s)?),
        (None, None) => Err(Error::Domain("give --r, --s or both".into())),
    }
}

fn tree_json(t: &PlaneBinaryTree) -> Result<serde_json::Value> {
    Ok(json!({
        "tree": t.to_parens(),
        "k": k_of_tree(t)?.parts(),
        "inequalities": fan_inequalities(t).iter().map(|q| q.to_string()).collect::<Vec<_>>(),
    }))
}

pub fn execute(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Volume { n, eval, scaled, json } => match (n, eval) {
            (_, Some(e)) => {
                let x = rationals(&e)?;
                if let Some(n) = n {
                    if n != x.len() {
                        return Err(Error::Dimension(format!("--n {n} but {} values", x.len())));
                    }
                }
                let v = if scaled { scaled_volume_at(&x)? } else { volume_at(&x)? };
                ok(fmt_rational(&v))
            }
            (Some(n), None) => {
                let p = volume_poly(n)?;
                ok(if json { pretty(&p.to_json()) } else { p.to_text() })
            }
            (None, None) => Err(Error::Domain("give --n or --eval".into())),
        },
        Command::Lattice { x, m } => {
            let spec = PolytopeSpec::from_integers(&int_list(&x)?)?;
            match m {
                None => ok(count_points(&spec)?.to_string()),
                Some(m) => ok(count_points_nm(&spec, m)?.to_string()),
            }
        }
        Command::Ehrhart { n, a, b } => ok(ehrhart_ab(n, a, b)?.to_text().replace("x1", "r")),
        Command::Parking { x } => {
            let xs = int_list(&x)?;
            let spec = PolytopeSpec::from_integers(&xs)?;
            let xr = spec.x().to_vec();
            ok(pretty(&json!({
                "x": xs,
                "parking_count": count_x_parking(&spec)?,
                "scaled_volume": fmt_rational(&scaled_volume_at(&xr)?),
                "weighted_sum": fmt_rational(&weighted_parking_sum(&xr)?),
            })))
        }
        Command::PosetSection { poset, chain, x } => {
            let text = std::fs::read_to_string(&poset)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", poset.display())))?;
            let p = FinitePoset::from_json(&text)?;
            let members = u32_list(&chain)?
                .into_iter()
                .map(|i| i.checked_sub(1).map(|i| i as usize).ok_or_else(|| Error::Domain("chain is 1-based".into())))
                .collect::<Result<Vec<_>>>()?;
            let c = MarkedChain::new(&p, members)?;
            match x {
                Some(x) => ok(section_count(&p, &c, &int_list(&x)?)?.to_string()),
                None => ok(section_count_poly(&p, &c)?.to_text()),
            }
        }
        Command::Tree(t) => tree(t),
        Command::Subdivide(a) => subdivide(a),
        Command::Prob(p) => prob(p),
        Command::Verify { suite, seed, config, json } => {
            let mut cfg = Config::resolve(config.as_deref())?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let reports = verify::run_suite(&suite, &cfg)?;
            let all_passed = reports.iter().all(|r| r.passed);
            let text = if json {
                pretty(&json!({ "seed": cfg.seed, "passed": all_passed, "criteria": reports }))
            } else {
                let mut lines: Vec<String> = reports
                    .iter()
                    .map(|r| {
                        let mark = if r.passed { "PASS" } else { "FAIL" };
                        format!("{mark} {:>2} [{}] {}: {} ({} ms)", r.id, r.suite, r.name, r.detail, r.millis)
                    })
                    .collect();
                let passed = reports.iter().filter(|r| r.passed).count();
                lines.push(format!("{passed}/{} criteria passed (seed {})", reports.len(), cfg.seed));
                lines.join("\n")
            };
            Ok(Outcome { text, code: if all_passed { EXIT_OK } else { EXIT_CHECK_FAILED } })
        }
    }
}

fn tree(cmd: TreeCommand) -> Result<Outcome> {
    match cmd {
        TreeCommand::Enumerate { n } => {
            let trees = enumerate_trees(n)?;
            let rows = trees.iter().map(tree_json).collect::<Result<Vec<_>>>()?;
            ok(pretty(&rows))
        }
        TreeCommand::KOf { tree } => {
            let t = PlaneBinaryTree::from_parens(&tree)?;
            ok(u32s(k_of_tree(&t)?.parts()))
        }
        TreeCommand::OfK { k } => ok(tree_of_k(&u32_list(&k)?)?.to_parens()),
        TreeCommand::Locate { point } => {
            let p = rationals(&point)?;
            match locate_in_fan(&p, p.len() + 1)? {
                FanLocation::Chamber(t) => ok(pretty(&tree_json(&t)?)),
                FanLocation::Boundary => ok(pretty(&json!({ "boundary": true }))),
            }
        }
        TreeCommand::Triangulate { tree } => {
            let t = PlaneBinaryTree::from_parens(&tree)?;
            let d = tree_triangulation(&t);
            ok(pretty(&json!({ "polygon": t.n() + 2, "diagonals": d.diagonals })))
        }
    }
}

fn u32s(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn subdivide(a: SubdivideArgs) -> Result<Outcome> {
    let spec = PolytopeSpec::new(rationals(&a.x)?)?;
    let text = if a.svg {
        subdivision_svg(&spec)?
    } else if a.obj {
        subdivision_obj(&spec)?
    } else if spec.n() <= 3 {
        pretty(&chamber_geometry(&spec)?)
    } else {
        let rows = enumerate_trees(spec.n())?
            .iter()
            .map(|t| {
                Ok(json!({
                    "tree": t.to_parens(),
                    "k": k_of_tree(t)?.parts(),
                    "volume": fmt_rational(&delta_volume(t, &spec)?),
                    "inequalities": fan_inequalities(t).iter().map(|q| q.polytope_text(&spec)).collect::<Vec<_>>(),
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        pretty(&rows)
    };
    match a.output {
        Some(path) => {
            std::fs::write(&path, text).map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
            ok(format!("wrote {}", path.display()))
        }
        None => ok(text),
    }
}

fn prob(cmd: ProbCommand) -> Result<Outcome> {
    match cmd {
        ProbCommand::Band { r, s } => ok(fmt_rational(&band_prob(&band(r, s)?)?)),
        ProbCommand::Daniels { n } => ok(daniels_poly(n)?.to_text().replace("x1", "p")),
        ProbCommand::Pyke { n, b, x } => {
            let (b, x) = (parse_rational(&b)?, parse_rational(&x)?);
            ok(pretty(&json!({
                "vector": strs(&pyke_vector(n, &b, &x)?),
                "value": fmt_rational(&pyke_formula(n, &b, &x)?),
            })))
        }
        ProbCommand::Mc { r, s, trials, seed } => {
            let spec = band(r, s)?;
            let mc = mc_band(&spec, trials, seed)?;
            ok(pretty(&json!({
                "monte_carlo": mc,
                "exact": fmt_rational(&band_prob(&spec)?),
            })))
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` and runs the command, returning (stdout, stderr, exit code).
pub fn run<I, T>(args: I) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK { (text, String::new(), code) } else { (String::new(), text, code) };
        }
    };
    match execute(cli.command) {
        Ok(o) => (o.text, String::new(), o.code),
        Err(e) => (String::new(), format!("error: {e}"), exit_code(&e)),
    }
}
