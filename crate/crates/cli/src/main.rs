//! `plcircle`: batch front end for the PL circle experiments.
//!
//! Exit status: 0 on success, 1 when a mathematical outcome is reported
//! instead of a result (obstruction, truncated orbit graph, ...), 2 on
//! input errors.

mod input;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use input::InputError;
use plcircle::cantor::derivative_chain;
use plcircle::cocycle::iterates;
use plcircle::format::element_to_json;
use plcircle::rational::{self, Q};
use plcircle::smoothing::{smooth_group_with, SmoothOptions};
use plcircle::{
    cb_rank, commensuration_defect, jump_cocycle, orbit_norm_seq, rotation_number,
    semiconjugacy_table, CirclePoint, ExoticParams, GrowthExperiment, PlHomeo, SmoothingOutcome,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "plcircle",
    version,
    about = "Exact experiments with PL circle homeomorphisms"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate an element at circle points.
    Eval {
        element: String,
        #[arg(required = true, value_parser = input::point_arg)]
        points: Vec<CirclePoint>,
    },
    /// Compose two elements: the result applies `h` first, then `g`.
    Compose { g: String, h: String },
    /// Breakpoints, one-sided slopes, jumps and inverse of an element.
    Show { element: String },
    /// Squared norms of the orbit of the zero vector under the affine action.
    OrbitNorms {
        element: String,
        #[arg(short = 'N', long = "iterations", default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Breakpoint counts of the iterates against the growth lower bound.
    BreakpointGrowth {
        element: String,
        #[arg(short = 'N', long = "iterations", default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Iterates of an exotic-circle element.
    Exotic {
        #[arg(short = 'A', long = "modulus", value_parser = input::rational_arg)]
        a: Q,
        #[arg(short = 'l', long, value_parser = input::rational_arg)]
        lambda: Q,
        #[arg(short = 'N', long = "iterations", default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        max_q: u64,
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
    },
    /// Rotation number, optionally with a sampled semi-conjugacy.
    Rotnum {
        element: String,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        max_q: u64,
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
        /// Grid size of the semi-conjugacy table.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        samples: Option<u64>,
        /// Orbit length for the semi-conjugacy table.
        #[arg(short = 'N', long = "iterations", default_value_t = 10000, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Conjugate a group into the rotations, or report why not.
    Smooth {
        group: String,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        max_vertices: u64,
        /// Search for a finite orbit of period up to this bound on failure.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        finite_orbit_period: Option<u64>,
    },
    /// Cantor-Bendixson rank and derivative chain of a symbolic set.
    CbRank {
        set: String,
        /// Realization depth for the point counts.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
    },
    /// `|BP(g)| + |BP(g^-1)|` for each generator of an element or group file.
    Commensuration { input: String },
    /// A seeded random element.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        breakpoints: usize,
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
        denom: u64,
    },
}

enum Status {
    Done,
    Reported,
}

struct Run {
    format: Format,
    out: String,
}

fn fmt_q(x: &Q) -> String {
    rational::format(x)
}

fn json_line(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

impl Run {
    fn element(&mut self, h: &PlHomeo) {
        match self.format {
            Format::Table => writeln!(self.out, "{h}").unwrap(),
            Format::Json => self.out.push_str(&json_line(&element_to_json(h))),
            Format::Csv => {
                self.out.push_str("x,y\n");
                for (x, y) in h.lift_vertices() {
                    writeln!(self.out, "{},{}", fmt_q(&x), fmt_q(&y)).unwrap();
                }
            }
        }
    }

    fn eval(&mut self, h: &PlHomeo, points: &[CirclePoint]) {
        let rows: Vec<(CirclePoint, CirclePoint)> =
            points.iter().map(|p| (p.clone(), h.eval(p))).collect();
        match self.format {
            Format::Json => {
                let v: Vec<Value> = rows
                    .iter()
                    .map(|(x, y)| json!({"x": x, "value": y}))
                    .collect();
                self.out.push_str(&json_line(&Value::Array(v)));
            }
            Format::Csv | Format::Table => {
                let sep = if self.format == Format::Csv {
                    ","
                } else {
                    "\t"
                };
                writeln!(self.out, "x{sep}value").unwrap();
                for (x, y) in rows {
                    writeln!(self.out, "{x}{sep}{y}").unwrap();
                }
            }
        }
    }

    fn show(&mut self, h: &PlHomeo) {
        let rows: Vec<[String; 4]> = h
            .breakpoints()
            .iter()
            .map(|b| {
                let (l, r) = h.left_right_slopes(b);
                [b.to_string(), fmt_q(&l), fmt_q(&r), fmt_q(&h.jump_at(b))]
            })
            .collect();
        let inv = h.inverse();
        match self.format {
            Format::Json => {
                let bps: Vec<Value> = rows
                    .iter()
                    .map(|r| json!({"x": r[0], "left_slope": r[1], "right_slope": r[2], "jump": r[3]}))
                    .collect();
                let v = json!({
                    "element": element_to_json(h),
                    "breakpoints": bps,
                    "inverse": element_to_json(&inv),
                    "commensuration_defect": commensuration_defect(h),
                });
                self.out.push_str(&json_line(&v));
            }
            Format::Csv => {
                self.out.push_str("x,left_slope,right_slope,jump\n");
                for r in rows {
                    writeln!(self.out, "{}", r.join(",")).unwrap();
                }
            }
            Format::Table => {
                writeln!(self.out, "element      {h}").unwrap();
                writeln!(self.out, "inverse      {inv}").unwrap();
                writeln!(self.out, "breakpoints  {}", rows.len()).unwrap();
                if !rows.is_empty() {
                    writeln!(
                        self.out,
                        "{:<12} {:<12} {:<12} {:<12}",
                        "x", "D-", "D+", "jump"
                    )
                    .unwrap();
                    for r in rows {
                        writeln!(
                            self.out,
                            "{:<12} {:<12} {:<12} {:<12}",
                            r[0], r[1], r[2], r[3]
                        )
                        .unwrap();
                    }
                }
            }
        }
    }

    fn orbit_norms(&mut self, h: &PlHomeo, n: usize) {
        let norms = orbit_norm_seq(h, n);
        match self.format {
            Format::Json => {
                let v: Vec<Value> = norms
                    .iter()
                    .enumerate()
                    .map(|(i, x)| json!({"n": i + 1, "norm_sq": x}))
                    .collect();
                self.out.push_str(&json_line(&Value::Array(v)));
            }
            Format::Csv => {
                self.out.push_str("n,norm_sq\n");
                for (i, x) in norms.iter().enumerate() {
                    writeln!(self.out, "{},{x:.12e}", i + 1).unwrap();
                }
            }
            Format::Table => {
                writeln!(self.out, "{:>6}  {:>20}", "n", "norm_sq").unwrap();
                for (i, x) in norms.iter().enumerate() {
                    writeln!(self.out, "{:>6}  {x:>20.9}", i + 1).unwrap();
                }
            }
        }
    }

    fn growth(&mut self, exp: &GrowthExperiment) {
        match self.format {
            Format::Csv => self.out.push_str(&exp.to_csv()),
            Format::Json => self.out.push_str(&json_line(
                &serde_json::to_value(exp).expect("serializable"),
            )),
            Format::Table => {
                match &exp.params {
                    Some(p) => {
                        writeln!(
                            self.out,
                            "component    ({}, {})",
                            p.component.start, p.component.end
                        )
                        .unwrap();
                        writeln!(self.out, "inverse used {}", p.used_inverse).unwrap();
                        writeln!(
                            self.out,
                            "c0 = {:.9}  c1 = {:.9}  mu = {:.9}  beta = {:.9}",
                            p.c0, p.c1, p.mu, p.beta
                        )
                        .unwrap();
                    }
                    None => {
                        writeln!(self.out, "no growth bound (no fixed point or identity)").unwrap()
                    }
                }
                writeln!(
                    self.out,
                    "{:>6}  {:>6}  {:>20}  {:>14}",
                    "n", "M_n", "norm_sq", "bound"
                )
                .unwrap();
                for r in &exp.rows {
                    let bound = r
                        .bound
                        .map(|b| format!("{b:.6}"))
                        .unwrap_or_else(|| "-".into());
                    writeln!(
                        self.out,
                        "{:>6}  {:>6}  {:>20.9}  {:>14}",
                        r.n, r.breakpoints, r.norm_sq, bound
                    )
                    .unwrap();
                }
            }
        }
    }

    fn exotic(&mut self, g: &PlHomeo, n: usize, max_q: u64, depth: usize) {
        let rot = rotation_number(g, max_q, depth);
        let mut jumps: BTreeSet<Q> = BTreeSet::new();
        for gn in iterates(g, n) {
            jumps.extend(jump_cocycle(&gn).iter().map(|(_, j)| j.clone()));
        }
        let exp = GrowthExperiment::run(g, n);
        let jump_strs: Vec<String> = jumps.iter().map(fmt_q).collect();
        match self.format {
            Format::Json => {
                let rows: Vec<Value> = exp
                    .rows
                    .iter()
                    .map(|r| json!({"n": r.n, "breakpoints": r.breakpoints, "norm_sq": r.norm_sq}))
                    .collect();
                let v = json!({
                    "element": element_to_json(g),
                    "rotation_number": rot,
                    "jump_values": jump_strs,
                    "rows": rows,
                });
                self.out.push_str(&json_line(&v));
            }
            Format::Csv => {
                self.out.push_str("n,M_n,norm_sq\n");
                for r in &exp.rows {
                    writeln!(self.out, "{},{},{:.12e}", r.n, r.breakpoints, r.norm_sq).unwrap();
                }
            }
            Format::Table => {
                writeln!(self.out, "element          {g}").unwrap();
                writeln!(self.out, "rotation number  {rot}").unwrap();
                writeln!(self.out, "jump values      {}", jump_strs.join(" ")).unwrap();
                let max_bp = exp.rows.iter().map(|r| r.breakpoints).max().unwrap_or(0);
                let max_norm = exp.rows.iter().map(|r| r.norm_sq).fold(0.0, f64::max);
                writeln!(self.out, "max breakpoints  {max_bp} over n <= {n}").unwrap();
                writeln!(self.out, "max norm_sq      {max_norm:.9}").unwrap();
            }
        }
    }

    fn rotnum(
        &mut self,
        h: &PlHomeo,
        max_q: u64,
        depth: usize,
        semi: Option<(usize, usize)>,
    ) -> Result<(), InputError> {
        let rot = rotation_number(h, max_q, depth);
        let table = match semi {
            Some((s, n)) => {
                Some(semiconjugacy_table(h, s, n).map_err(|e| InputError(e.to_string()))?)
            }
            None => None,
        };
        match self.format {
            Format::Json => {
                let mut v = json!({"rotation_number": rot});
                if let Some(t) = &table {
                    v["semiconjugacy"] = serde_json::to_value(t).expect("serializable");
                    v["equivariance_residual"] = json!(t.equivariance_residual());
                }
                self.out.push_str(&json_line(&v));
            }
            Format::Csv => match &table {
                Some(t) => self.out.push_str(&t.to_csv()),
                None => {
                    self.out.push_str("kind,value,lo,hi,depth\n");
                    match &rot {
                        plcircle::RotNumResult::Exact { value } => {
                            writeln!(self.out, "exact,{},,,", fmt_q(value)).unwrap()
                        }
                        plcircle::RotNumResult::Bracket { lo, hi, depth } => {
                            writeln!(self.out, "bracket,,{},{},{depth}", fmt_q(lo), fmt_q(hi))
                                .unwrap()
                        }
                    }
                }
            },
            Format::Table => {
                writeln!(self.out, "rotation number  {rot}").unwrap();
                if let Some(t) = &table {
                    writeln!(self.out, "estimate         {:.9}", t.rotation_estimate).unwrap();
                    writeln!(
                        self.out,
                        "residual         {:.3e}",
                        t.equivariance_residual()
                    )
                    .unwrap();
                    writeln!(self.out, "{:<12} {:>14}", "x", "phi").unwrap();
                    for (x, phi) in &t.samples {
                        writeln!(self.out, "{:<12} {phi:>14.9}", x.to_string()).unwrap();
                    }
                }
            }
        }
        Ok(())
    }

    fn smooth(&mut self, outcome: &SmoothingOutcome) -> Status {
        match self.format {
            Format::Json => self.out.push_str(&json_line(
                &serde_json::to_value(outcome).expect("serializable"),
            )),
            Format::Csv => match outcome {
                SmoothingOutcome::Success { conjugated, .. } => {
                    self.out.push_str("generator,rotation\n");
                    for (name, c) in conjugated {
                        let a = c.rotation_amount().expect("conjugate is a rotation");
                        writeln!(self.out, "{name},{}", fmt_q(&a)).unwrap();
                    }
                }
                SmoothingOutcome::Obstruction(o) => {
                    self.out.push_str("source,letter,target,weight\n");
                    for e in &o.cycle {
                        writeln!(
                            self.out,
                            "{},{},{},{}",
                            e.source,
                            e.letter,
                            e.target,
                            fmt_q(&e.weight)
                        )
                        .unwrap();
                    }
                }
                SmoothingOutcome::FiniteOrbit { orbit } => {
                    self.out.push_str("orbit_point\n");
                    for p in orbit {
                        writeln!(self.out, "{p}").unwrap();
                    }
                }
                SmoothingOutcome::Truncated { escaping } => {
                    self.out.push_str("escaping_point\n");
                    for p in escaping {
                        writeln!(self.out, "{p}").unwrap();
                    }
                }
                SmoothingOutcome::Infeasible {
                    component_sizes,
                    product,
                } => {
                    self.out.push_str("component_size,product\n");
                    for s in component_sizes {
                        writeln!(self.out, "{s},{}", fmt_q(product)).unwrap();
                    }
                }
            },
            Format::Table => match outcome {
                SmoothingOutcome::Success { phi, conjugated } => {
                    writeln!(self.out, "success").unwrap();
                    writeln!(self.out, "conjugator  {phi}").unwrap();
                    for (name, c) in conjugated {
                        writeln!(self.out, "{name:<11} {c}").unwrap();
                    }
                }
                SmoothingOutcome::Obstruction(o) => {
                    writeln!(
                        self.out,
                        "obstruction: cycle product {} (expected {})",
                        fmt_q(&o.found),
                        fmt_q(&o.expected)
                    )
                    .unwrap();
                    for e in &o.cycle {
                        writeln!(
                            self.out,
                            "  {} --{}--> {}  weight {}",
                            e.source,
                            e.letter,
                            e.target,
                            fmt_q(&e.weight)
                        )
                        .unwrap();
                    }
                }
                SmoothingOutcome::FiniteOrbit { orbit } => {
                    let pts: Vec<String> = orbit.iter().map(|p| p.to_string()).collect();
                    writeln!(self.out, "finite orbit: {}", pts.join(" ")).unwrap();
                }
                SmoothingOutcome::Truncated { escaping } => {
                    writeln!(self.out, "truncated: {} escaping points", escaping.len()).unwrap();
                    for p in escaping.iter().take(10) {
                        writeln!(self.out, "  {p}").unwrap();
                    }
                }
                SmoothingOutcome::Infeasible {
                    component_sizes,
                    product,
                } => {
                    writeln!(
                        self.out,
                        "infeasible: component sizes {component_sizes:?}, product {} has no rational root",
                        fmt_q(product)
                    )
                    .unwrap();
                }
            },
        }
        if outcome.is_success() {
            Status::Done
        } else {
            Status::Reported
        }
    }

    fn cb_rank(&mut self, s: &plcircle::SymbolicSet, depth: usize) {
        let r = cb_rank(s);
        let chain: Vec<(usize, bool, usize)> = derivative_chain(s)
            .iter()
            .map(|c| (c.clusters.len(), c.is_finite(), c.realize(depth).len()))
            .collect();
        match self.format {
            Format::Json => {
                let c: Vec<Value> = chain
                    .iter()
                    .map(|(k, fin, pts)| json!({"clusters": k, "finite": fin, "realized_points": pts}))
                    .collect();
                let v = json!({"rank": r.rank, "top_finite_set_size": r.top_finite_set_size, "depth": depth, "chain": c});
                self.out.push_str(&json_line(&v));
            }
            Format::Csv => {
                self.out
                    .push_str("derivative,clusters,finite,realized_points\n");
                for (i, (k, fin, pts)) in chain.iter().enumerate() {
                    writeln!(self.out, "{i},{k},{fin},{pts}").unwrap();
                }
            }
            Format::Table => {
                writeln!(self.out, "rank {}", r.rank).unwrap();
                writeln!(self.out, "top finite set size {}", r.top_finite_set_size).unwrap();
                let sizes: Vec<String> = chain
                    .iter()
                    .map(|(_, fin, pts)| {
                        if *fin {
                            pts.to_string()
                        } else {
                            format!("{pts}+")
                        }
                    })
                    .collect();
                writeln!(self.out, "chain sizes (depth {depth}): {}", sizes.join(" ")).unwrap();
            }
        }
    }

    fn commensuration(&mut self, g: &plcircle::GroupPresentation) {
        let rows: Vec<(String, usize, usize)> = g
            .generators()
            .iter()
            .map(|(name, h)| {
                (
                    name.clone(),
                    h.num_breakpoints(),
                    h.inverse().num_breakpoints(),
                )
            })
            .collect();
        match self.format {
            Format::Json => {
                let v: Vec<Value> = rows
                    .iter()
                    .map(|(n, a, b)| json!({"generator": n, "breakpoints": a, "inverse_breakpoints": b, "defect": a + b}))
                    .collect();
                self.out.push_str(&json_line(&Value::Array(v)));
            }
            Format::Csv | Format::Table => {
                let sep = if self.format == Format::Csv {
                    ","
                } else {
                    "\t"
                };
                writeln!(
                    self.out,
                    "generator{sep}breakpoints{sep}inverse_breakpoints{sep}defect"
                )
                .unwrap();
                for (n, a, b) in rows {
                    writeln!(self.out, "{n}{sep}{a}{sep}{b}{sep}{}", a + b).unwrap();
                }
            }
        }
    }
}

fn run(cli: Cli, r: &mut Run) -> Result<Status, InputError> {
    match cli.command {
        Command::Eval { element, points } => r.eval(&input::element(&element)?, &points),
        Command::Compose { g, h } => r.element(&input::element(&g)?.compose(&input::element(&h)?)),
        Command::Show { element } => r.show(&input::element(&element)?),
        Command::OrbitNorms { element, n } => r.orbit_norms(&input::element(&element)?, n as usize),
        Command::BreakpointGrowth { element, n } => r.growth(&GrowthExperiment::run(
            &input::element(&element)?,
            n as usize,
        )),
        Command::Exotic {
            a,
            lambda,
            n,
            max_q,
            depth,
        } => {
            let params = ExoticParams::new(a, lambda).map_err(|e| InputError(e.to_string()))?;
            r.exotic(
                &PlHomeo::exotic_element(&params),
                n as usize,
                max_q,
                depth as usize,
            )
        }
        Command::Rotnum {
            element,
            max_q,
            depth,
            samples,
            n,
        } => {
            let h = input::element(&element)?;
            r.rotnum(
                &h,
                max_q,
                depth as usize,
                samples.map(|s| (s as usize, n as usize)),
            )?
        }
        Command::Smooth {
            group,
            max_vertices,
            finite_orbit_period,
        } => {
            let g = input::presentation(&group)?;
            let opts = SmoothOptions {
                max_vertices: max_vertices as usize,
                finite_orbit_period: finite_orbit_period.map(|p| p as usize),
            };
            let outcome = smooth_group_with(&g, opts).map_err(|e| input::describe(&group, e))?;
            return Ok(r.smooth(&outcome));
        }
        Command::CbRank { set, depth } => r.cb_rank(&input::symbolic_set(&set)?, depth as usize),
        Command::Commensuration { input: path } => {
            r.commensuration(&input::element_or_presentation(&path)?)
        }
        Command::Random {
            seed,
            breakpoints,
            denom,
        } => r.element(&PlHomeo::random(seed, breakpoints, denom)),
    }
    Ok(Status::Done)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut r = Run {
        format: cli.format,
        out: String::new(),
    };
    match run(cli, &mut r) {
        Ok(status) => {
            print!("{}", r.out);
            match status {
                Status::Done => ExitCode::SUCCESS,
                Status::Reported => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
