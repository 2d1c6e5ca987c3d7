//! Command-line interface: state assignment, reference-table
//! reproduction, the convexity-conjecture report, marginal-density and
//! section exports, and an invariant-suite runner.
//!
//! All outputs carry the seed and sample budget, so re-running a
//! command with the same flags yields byte-identical files.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::assignment::{assign_state, convexity_residuals, AssignmentResult};
use crate::bloch_geometry::{bounding_box, chi_b, chi_eigen_oracle, cubic_condition_value,
    planar_section};
use crate::error::Error;
use crate::posterior::{compute_moments, FrequencyTriple, QmcConfig};
use crate::priors::{default_gaussian_prior, marginal_density_grid, Prior};
use crate::qmc::{replicate_seeds, ScrambledSobol};
use crate::su_basis::{bloch_from_rho, gellmann_basis, rho_from_bloch, BlochVector};
use crate::symmetry::{canonical_triple, reconstruct_moments};
use crate::table_data::reference_rows;

const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "qsa",
    version,
    about = "Bayesian quantum-state assignment for a three-level system \
             from absolute-frequency data"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PriorArg {
    Constant,
    Gaussian,
}

impl PriorArg {
    fn prior(self, breadth: Option<f64>) -> Result<Prior, Error> {
        match self {
            Self::Constant => {
                if breadth.is_some() {
                    return Err(Error::InvalidParams(
                        "--breadth only applies to the gaussian prior".into(),
                    ));
                }
                Ok(Prior::Constant)
            }
            Self::Gaussian => match breadth {
                None => Ok(default_gaussian_prior()),
                Some(s) => {
                    let Prior::GaussianLike { center, .. } = default_gaussian_prior() else {
                        unreachable!()
                    };
                    Prior::gaussian_like(center, s)
                }
            },
        }
    }

    fn label(self) -> &'static str {
        match self {
            Self::Constant => "constant",
            Self::Gaussian => "gaussian",
        }
    }
}

#[derive(Debug, Args)]
struct BudgetArgs {
    /// Quasi-Monte Carlo points per replicate.
    #[arg(long, default_value_t = 2_000_000, value_parser = clap::value_parser!(u64).range(10_000..))]
    samples: u64,
    /// Independently scrambled replicates for the error estimate.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(2..))]
    replicates: u32,
    /// Master seed for the scrambling.
    #[arg(long, default_value_t = 20_070_429)]
    seed: u64,
}

impl BudgetArgs {
    fn config(&self) -> QmcConfig {
        QmcConfig {
            n_samples: self.samples,
            replicates: self.replicates,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Assign the posterior-mean state for a triple of counts.
    Assign {
        /// Absolute frequencies as N1,N2,N3.
        #[arg(long, value_parser = parse_counts)]
        counts: (u32, u32, u32),
        #[arg(long, value_enum, default_value_t = PriorArg::Constant)]
        prior: PriorArg,
        /// Breadth of the gaussian prior (default 1/(2*sqrt(2))).
        #[arg(long)]
        breadth: Option<f64>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Recompute every reference-table row and compare.
    Table {
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Residuals of the convex-combination conjecture at total count N.
    Conjecture {
        #[arg(long = "N", value_parser = clap::value_parser!(u32).range(2..=5))]
        n: u32,
        /// Run the (contract-free) experiment with the gaussian prior
        /// instead of the constant one.
        #[arg(long)]
        experimental_gaussian: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Marginal prior density on a coordinate plane, plus the section
    /// boundary polyline.
    Marginal {
        /// Two distinct 1-based coordinate axes, e.g. 3,8.
        #[arg(long, value_parser = parse_axes, default_value = "3,8")]
        axes: (usize, usize),
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u16).range(16..=512))]
        grid: u16,
        #[arg(long, default_value_t = 4096)]
        samples_per_cell: u64,
        #[arg(long, default_value_t = 20_070_429)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = PriorArg::Constant)]
        prior: PriorArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Boundary polyline of a planar section of the state-space body.
    Section {
        #[arg(long, value_parser = parse_axes)]
        axes: (usize, usize),
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u16).range(8..))]
        resolution: u16,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the library's invariant suites.
    Validate {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Points for the membership-oracle sweep.
        #[arg(long, default_value_t = 100_000)]
        points: u64,
        /// Total count for the normalization identity.
        #[arg(long = "N", default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=6))]
        n: u32,
        #[arg(long, default_value_t = 20_070_429)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Basis,
    Oracle,
    Normalization,
    Symmetry,
}

fn parse_counts(s: &str) -> Result<(u32, u32, u32), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("expected three comma-separated nonnegative integers".into());
    }
    let mut v = [0u32; 3];
    for (i, p) in parts.iter().enumerate() {
        v[i] = p
            .trim()
            .parse()
            .map_err(|e| format!("count {}: {e}", i + 1))?;
    }
    Ok((v[0], v[1], v[2]))
}

fn parse_axes(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected two comma-separated axis indices".into());
    }
    let a: usize = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let b: usize = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    if a == b || !(1..=8).contains(&a) || !(1..=8).contains(&b) {
        return Err("axes must be two distinct indices in 1..=8".into());
    }
    Ok((a, b))
}

/// Parses the process arguments and runs the selected command,
/// returning the process exit code.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Assign { counts, prior, breadth, budget, out } => {
            let p = prior.prior(breadth)?;
            let f = FrequencyTriple::new(counts.0, counts.1, counts.2);
            let cfg = budget.config();
            let result = assign_state(&f, &p, &cfg)?;
            emit(&out, &render_assignment(&result, prior.label(), &cfg, &out.format))?;
            Ok(0)
        }
        Command::Table { budget, out } => cmd_table(&budget, &out),
        Command::Conjecture { n, experimental_gaussian, budget, out } => {
            cmd_conjecture(n, experimental_gaussian, &budget, &out)
        }
        Command::Marginal { axes, grid, samples_per_cell, seed, prior, out } => {
            cmd_marginal(axes, grid as usize, samples_per_cell, seed, prior, &out)
        }
        Command::Section { axes, resolution, out } => cmd_section(axes, resolution as usize, &out),
        Command::Validate { suite, points, n, seed } => cmd_validate(suite, points, n, seed),
    }
}

fn emit(out: &OutputArgs, content: &str) -> Result<(), Error> {
    match &out.output {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| Error::Internal(format!("write failed: {e}")))
        }
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::Internal(format!("cannot write {}: {e}", path.display()))),
    }
}

fn json_pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn assignment_json(
    r: &AssignmentResult,
    prior_label: &str,
    cfg: &QmcConfig,
) -> serde_json::Value {
    let m = r.rho.matrix();
    let re: Vec<Vec<f64>> = (0..3).map(|i| (0..3).map(|j| m[(i, j)].re).collect()).collect();
    let im: Vec<Vec<f64>> = (0..3).map(|i| (0..3).map(|j| m[(i, j)].im).collect()).collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "counts": [r.counts.counts.0, r.counts.counts.1, r.counts.counts.2],
        "prior": prior_label,
        "seed": cfg.seed,
        "samples": cfg.n_samples,
        "replicates": cfg.replicates,
        "rho": {"re": re, "im": im},
        "bloch": r.bloch.0,
        "bloch_stderr": r.uncertainty,
        "diagonal": r.diagonal(),
        "diagonal_stderr": r.diagonal_stderr(),
        "exact_by_symmetry": r.diagnostics.is_none(),
        "accepted": r.diagnostics.as_ref().map(|d| d.accepted),
        "evaluated": r.diagnostics.as_ref().map(|d| d.total),
    })
}

fn render_assignment(
    r: &AssignmentResult,
    prior_label: &str,
    cfg: &QmcConfig,
    format: &OutputFormat,
) -> String {
    match format {
        OutputFormat::Json => json_pretty(&assignment_json(r, prior_label, cfg)),
        OutputFormat::Csv => {
            let mut s = String::from("field,value,stderr\n");
            s += &format!(
                "counts,({} {} {}),\n",
                r.counts.counts.0, r.counts.counts.1, r.counts.counts.2
            );
            s += &format!("prior,{prior_label},\n");
            s += &format!("seed,{},\n", cfg.seed);
            s += &format!("samples,{},\n", cfg.n_samples);
            s += &format!("replicates,{},\n", cfg.replicates);
            for j in 0..8 {
                s += &format!("x{},{},{}\n", j + 1, r.bloch.0[j], r.uncertainty[j]);
            }
            let d = r.diagonal();
            let ds = r.diagonal_stderr();
            for i in 0..3 {
                s += &format!("rho{}{},{},{}\n", i + 1, i + 1, d[i], ds[i]);
            }
            s
        }
        OutputFormat::Text => {
            let d = r.diagonal();
            let ds = r.diagonal_stderr();
            let mut s = format!(
                "counts ({}, {}, {}), {} prior, seed {}, {} x {} samples\n",
                r.counts.counts.0,
                r.counts.counts.1,
                r.counts.counts.2,
                prior_label,
                cfg.seed,
                cfg.replicates,
                cfg.n_samples,
            );
            s += &format!(
                "assigned diagonal: {:.4} +- {:.4}, {:.4} +- {:.4}, {:.4} +- {:.4}\n",
                d[0], ds[0], d[1], ds[1], d[2], ds[2]
            );
            s += &format!(
                "bloch x3 = {:.5} +- {:.5}, x8 = {:.5} +- {:.5}\n",
                r.bloch.0[2], r.uncertainty[2], r.bloch.0[7], r.uncertainty[7]
            );
            if r.diagnostics.is_none() {
                s += "exact by symmetry (no integration)\n";
            }
            s
        }
    }
}

struct TableRowOutcome {
    counts: (u32, u32, u32),
    prior: &'static str,
    computed: [f64; 3],
    stderr: [f64; 3],
    reference: [f64; 3],
    ref_unc: [f64; 3],
    pass: bool,
}

fn compare_row(
    row: &crate::table_data::ReferenceRow,
    base: &QmcConfig,
) -> Result<TableRowOutcome, Error> {
    let prior = row.prior.prior();
    let cfg = QmcConfig { n_samples: base.n_samples * row.samples_factor, ..*base };
    let (computed, stderr) = if row.exact {
        ([1.0 / 3.0; 3], [0.0; 3])
    } else if row.average_with_mirror {
        // Average the row with an independent run of its mirror image,
        // as the reference itself was produced.
        let a = assign_state(&row.triple(), &prior, &cfg)?;
        let mirror = FrequencyTriple::new(row.counts.2, row.counts.1, row.counts.0);
        let b = assign_state(&mirror, &prior, &QmcConfig { seed: cfg.seed + 1, ..cfg })?;
        let da = a.diagonal();
        let sa = a.diagonal_stderr();
        let db = b.diagonal();
        let sb = b.diagonal_stderr();
        (
            std::array::from_fn(|i| 0.5 * (da[i] + db[2 - i])),
            std::array::from_fn(|i| 0.5 * (sa[i].powi(2) + sb[2 - i].powi(2)).sqrt()),
        )
    } else {
        let a = assign_state(&row.triple(), &prior, &cfg)?;
        (a.diagonal(), a.diagonal_stderr())
    };
    let pass = (0..3).all(|i| {
        (computed[i] - row.diagonal[i]).abs() <= row.uncertainty[i] + 3.0 * stderr[i]
    });
    Ok(TableRowOutcome {
        counts: row.counts,
        prior: row.prior.label(),
        computed,
        stderr,
        reference: row.diagonal,
        ref_unc: row.uncertainty,
        pass,
    })
}

fn cmd_table(budget: &BudgetArgs, out: &OutputArgs) -> Result<i32, Error> {
    let base = budget.config();
    let mut outcomes = Vec::new();
    for row in reference_rows() {
        outcomes.push(compare_row(&row, &base)?);
    }
    let all_pass = outcomes.iter().all(|o| o.pass);
    let content = match out.format {
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "counts": [o.counts.0, o.counts.1, o.counts.2],
                        "prior": o.prior,
                        "computed": o.computed,
                        "stderr": o.stderr,
                        "reference": o.reference,
                        "reference_uncertainty": o.ref_unc,
                        "pass": o.pass,
                    })
                })
                .collect();
            json_pretty(&json!({
                "schema_version": SCHEMA_VERSION,
                "seed": base.seed,
                "samples": base.n_samples,
                "replicates": base.replicates,
                "rows": rows,
                "all_pass": all_pass,
            }))
        }
        OutputFormat::Csv => {
            let mut s = String::from(
                "n1,n2,n3,prior,rho11,rho11_stderr,rho22,rho22_stderr,rho33,rho33_stderr,\
                 ref11,ref22,ref33,pass\n",
            );
            for o in &outcomes {
                s += &format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    o.counts.0,
                    o.counts.1,
                    o.counts.2,
                    o.prior,
                    o.computed[0],
                    o.stderr[0],
                    o.computed[1],
                    o.stderr[1],
                    o.computed[2],
                    o.stderr[2],
                    o.reference[0],
                    o.reference[1],
                    o.reference[2],
                    o.pass
                );
            }
            s
        }
        OutputFormat::Text => {
            let mut s = format!(
                "reference table, seed {}, base budget {} x {}\n",
                base.seed, base.replicates, base.n_samples
            );
            for o in &outcomes {
                s += &format!(
                    "({},{},{}) {:<9} computed ({:.4} {:.4} {:.4}) +- ({:.4} {:.4} {:.4}) \
                     reference ({:.4} {:.4} {:.4}) ... {}\n",
                    o.counts.0,
                    o.counts.1,
                    o.counts.2,
                    o.prior,
                    o.computed[0],
                    o.computed[1],
                    o.computed[2],
                    o.stderr[0],
                    o.stderr[1],
                    o.stderr[2],
                    o.reference[0],
                    o.reference[1],
                    o.reference[2],
                    if o.pass { "pass" } else { "FAIL" }
                );
            }
            s += if all_pass { "all rows pass\n" } else { "FAILURES present\n" };
            s
        }
    };
    emit(out, &content)?;
    Ok(if all_pass { 0 } else { 1 })
}

fn cmd_conjecture(
    n: u32,
    experimental_gaussian: bool,
    budget: &BudgetArgs,
    out: &OutputArgs,
) -> Result<i32, Error> {
    let prior = if experimental_gaussian {
        default_gaussian_prior()
    } else {
        Prior::Constant
    };
    let rows = convexity_residuals(n, &prior, &budget.config())?;
    let contractual = !experimental_gaussian;
    let all_pass = rows.iter().all(|r| r.within(3.0));
    let content = match out.format {
        OutputFormat::Json => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "counts": r.counts.as_array(),
                        "residual_x3": r.residual[0],
                        "residual_x8": r.residual[1],
                        "stderr_x3": r.stderr[0],
                        "stderr_x8": r.stderr[1],
                        "within_3_sigma": r.within(3.0),
                    })
                })
                .collect();
            json_pretty(&json!({
                "schema_version": SCHEMA_VERSION,
                "N": n,
                "prior": if experimental_gaussian { "gaussian" } else { "constant" },
                "contractual": contractual,
                "seed": budget.seed,
                "samples": budget.samples,
                "replicates": budget.replicates,
                "rows": items,
                "all_within_3_sigma": all_pass,
            }))
        }
        OutputFormat::Csv => {
            let mut s =
                String::from("n1,n2,n3,residual_x3,stderr_x3,residual_x8,stderr_x8,within3sigma\n");
            for r in &rows {
                let c = r.counts.as_array();
                s += &format!(
                    "{},{},{},{},{},{},{},{}\n",
                    c[0], c[1], c[2], r.residual[0], r.stderr[0], r.residual[1], r.stderr[1],
                    r.within(3.0)
                );
            }
            s
        }
        OutputFormat::Text => {
            let mut s = format!(
                "convexity residuals, N = {n}, {} prior, seed {}\n",
                if experimental_gaussian { "gaussian (experimental)" } else { "constant" },
                budget.seed
            );
            for r in &rows {
                let c = r.counts.as_array();
                s += &format!(
                    "({},{},{}) residual x3 = {:+.5} +- {:.5}, x8 = {:+.5} +- {:.5} ... {}\n",
                    c[0],
                    c[1],
                    c[2],
                    r.residual[0],
                    r.stderr[0],
                    r.residual[1],
                    r.stderr[1],
                    if r.within(3.0) { "ok" } else { "exceeds 3 sigma" }
                );
            }
            s
        }
    };
    emit(out, &content)?;
    Ok(if !contractual || all_pass { 0 } else { 1 })
}

fn cmd_marginal(
    axes: (usize, usize),
    grid: usize,
    samples_per_cell: u64,
    seed: u64,
    prior: PriorArg,
    out: &OutputArgs,
) -> Result<i32, Error> {
    let p = prior.prior(None)?;
    let g = marginal_density_grid(&p, axes, grid, samples_per_cell, seed)?;
    let boundary = planar_section(axes, 256)?;
    let boxx = bounding_box();
    let (ai, aj) = (axes.0 - 1, axes.1 - 1);
    let step_i = (boxx.upper[ai] - boxx.lower[ai]) / grid as f64;
    let step_j = (boxx.upper[aj] - boxx.lower[aj]) / grid as f64;
    let content = match out.format {
        OutputFormat::Json => {
            let centers_i: Vec<f64> =
                (0..grid).map(|k| boxx.lower[ai] + (k as f64 + 0.5) * step_i).collect();
            let centers_j: Vec<f64> =
                (0..grid).map(|k| boxx.lower[aj] + (k as f64 + 0.5) * step_j).collect();
            json_pretty(&json!({
                "schema_version": SCHEMA_VERSION,
                "axes": [axes.0, axes.1],
                "prior": prior.label(),
                "grid": grid,
                "samples_per_cell": samples_per_cell,
                "seed": seed,
                "centers_x": centers_i,
                "centers_y": centers_j,
                "density": g,
                "boundary": boundary,
            }))
        }
        OutputFormat::Csv | OutputFormat::Text => {
            let mut s = String::from("record,x,y,value\n");
            for (gi, row) in g.iter().enumerate() {
                let x = boxx.lower[ai] + (gi as f64 + 0.5) * step_i;
                for (gj, v) in row.iter().enumerate() {
                    let y = boxx.lower[aj] + (gj as f64 + 0.5) * step_j;
                    s += &format!("grid,{x},{y},{v}\n");
                }
            }
            for [x, y] in &boundary {
                s += &format!("boundary,{x},{y},\n");
            }
            s
        }
    };
    emit(out, &content)?;
    Ok(0)
}

fn cmd_section(axes: (usize, usize), resolution: usize, out: &OutputArgs) -> Result<i32, Error> {
    let pts = planar_section(axes, resolution)?;
    let content = match out.format {
        OutputFormat::Json => json_pretty(&json!({
            "schema_version": SCHEMA_VERSION,
            "axes": [axes.0, axes.1],
            "resolution": resolution,
            "boundary": pts,
        })),
        OutputFormat::Csv | OutputFormat::Text => {
            let mut s = String::from("x,y\n");
            for [x, y] in &pts {
                s += &format!("{x},{y}\n");
            }
            s
        }
    };
    emit(out, &content)?;
    Ok(0)
}

fn suite_basis() -> Result<(), String> {
    let basis = gellmann_basis(3).map_err(|e| format!("basis construction: {e}"))?;
    for i in 0..8 {
        for j in 0..8 {
            let p = basis[i].frobenius_product(&basis[j]);
            let want = if i == j { 2.0 } else { 0.0 };
            if (p - want).abs() > 1e-12 {
                return Err(format!("orthogonality: tr(l{}l{}) = {p}", i + 1, j + 1));
            }
        }
    }
    // Round trip on a few interior points.
    for v in [
        [0.0; 8],
        [0.1, -0.2, 0.15, 0.05, 0.12, -0.07, 0.03, -0.11],
        [0.3, 0.1, -0.2, 0.0, -0.1, 0.2, 0.05, 0.18],
    ] {
        let x = BlochVector(v);
        let back = bloch_from_rho(rho_from_bloch(&x).matrix())
            .map_err(|e| format!("round trip: {e}"))?;
        for j in 0..8 {
            if (back.0[j] - v[j]).abs() > 1e-12 {
                return Err(format!("round trip: component {} drifted", j + 1));
            }
        }
    }
    Ok(())
}

fn suite_oracle(points: u64, seed: u64) -> Result<(), String> {
    let boxx = bounding_box();
    let mut stream = ScrambledSobol::new(8, replicate_seeds(seed, 0));
    let mut u = [0.0; 8];
    let mut checked = 0u64;
    for _ in 0..points {
        stream.next_point(&mut u);
        let x = boxx.map_unit(&u);
        let near_boundary = cubic_condition_value(&x).abs() < 1e-9
            || (x.norm_sq() - 4.0 / 3.0).abs() < 1e-9;
        if !near_boundary && chi_b(&x) != chi_eigen_oracle(&x, 1e-9) {
            return Err(format!("oracle disagreement at {:?}", x.0));
        }
        checked += 1;
    }
    if checked != points {
        return Err("oracle sweep incomplete".into());
    }
    Ok(())
}

fn suite_normalization(n: u32, seed: u64) -> Result<(), String> {
    let cfg = QmcConfig { n_samples: 200_000, replicates: 2, seed };
    for (label, prior) in [("constant", Prior::Constant), ("gaussian", default_gaussian_prior())] {
        let z0 = compute_moments(&FrequencyTriple::new(0, 0, 0), &prior, &cfg)
            .map_err(|e| format!("normalization ({label}): {e}"))?
            .z;
        let mut sum = 0.0;
        for n1 in 0..=n {
            for n2 in 0..=(n - n1) {
                let f = FrequencyTriple::new(n1, n2, n - n1 - n2);
                let z = compute_moments(&f, &prior, &cfg)
                    .map_err(|e| format!("normalization ({label}): {e}"))?
                    .z;
                sum += f.multinomial_weight() * z / z0;
            }
        }
        if (sum - 1.0).abs() > 1e-3 {
            return Err(format!("normalization ({label}): sum = {sum}"));
        }
    }
    Ok(())
}

fn suite_symmetry(seed: u64) -> Result<(), String> {
    let cfg = QmcConfig { n_samples: 400_000, replicates: 8, seed };
    // Constant prior: reconstruct every N <= 2 triple from its
    // canonical representative and compare with direct integration.
    for n in 1..=2u32 {
        for n1 in 0..=n {
            for n2 in 0..=(n - n1) {
                let f = FrequencyTriple::new(n1, n2, n - n1 - n2);
                let (c, word) = canonical_triple(&f, &Prior::Constant);
                let mc = compute_moments(&c, &Prior::Constant, &cfg)
                    .map_err(|e| format!("symmetry: {e}"))?;
                let rec = reconstruct_moments(&mc, &word, &Prior::Constant)
                    .map_err(|e| format!("symmetry: {e}"))?;
                let direct =
                    compute_moments(&f, &Prior::Constant, &QmcConfig { seed: seed + 77, ..cfg })
                        .map_err(|e| format!("symmetry: {e}"))?;
                for j in [2usize, 7] {
                    let d = rec.ratios()[j] - direct.ratios()[j];
                    let s = (rec.ratio_stderr()[j].powi(2) + direct.ratio_stderr()[j].powi(2))
                        .sqrt()
                        .max(1e-4);
                    if d.abs() > 3.0 * s {
                        return Err(format!(
                            "symmetry: triple {f} component {} off by {d} (sigma {s})",
                            j + 1
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

fn cmd_validate(suite: Suite, points: u64, n: u32, seed: u64) -> Result<i32, Error> {
    let mut failures = Vec::new();
    let run_suite = |name: &str, result: Result<(), String>, failures: &mut Vec<String>| {
        match result {
            Ok(()) => println!("{name}: pass"),
            Err(msg) => {
                println!("{name}: FAIL ({msg})");
                failures.push(name.to_string());
            }
        }
    };
    if matches!(suite, Suite::All | Suite::Basis) {
        run_suite("basis", suite_basis(), &mut failures);
    }
    if matches!(suite, Suite::All | Suite::Oracle) {
        run_suite("oracle", suite_oracle(points, seed), &mut failures);
    }
    if matches!(suite, Suite::All | Suite::Normalization) {
        run_suite("normalization", suite_normalization(n, seed), &mut failures);
    }
    if matches!(suite, Suite::All | Suite::Symmetry) {
        run_suite("symmetry", suite_symmetry(seed), &mut failures);
    }
    Ok(if failures.is_empty() { 0 } else { 1 })
}
