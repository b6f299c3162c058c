//! `polyqei`: command-line front end.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polyqei::exact_bounds::ExactBounds;
use polyqei::rational::{to_f64, BigRational};
use polyqei::spectral::nystrom::{nystrom_at_order, nystrom_eigs_with, NystromConfig};
use polyqei::{cylinder, lp_norms, qei, special, Error};

use report::{Cell, PlotData, Report};

const TABLE_ORDERS: [u64; 5] = [5, 10, 15, 19, 20];
const EIGEN_COLUMNS: [&str; 7] = [
    "n",
    "lambda_1",
    "lambda_2",
    "sqrt2_(2n)!_lambda_1",
    "n_lambda_2/lambda_1",
    "quad_order",
    "residual_estimate",
];

#[derive(Parser, Debug)]
#[command(name = "polyqei", version, about = "Polyharmonic eigenvalue bounds and massive-field energy inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Fractional bits for kernel evaluation (at least 64).
    #[arg(
        long,
        global = true,
        env = "POLYQEI_PRECISION_BITS",
        default_value_t = 256,
        value_parser = clap::value_parser!(u32).range(64..)
    )]
    precision_bits: u32,

    /// Also write gnuplot-ready two-column data next to the output.
    #[arg(long, global = true)]
    emit_plot_data: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact coefficients alpha_j of T_n (1 - t^2)^n.
    Alpha(NArg),
    /// Exact bracket on the spectral radius and the minimal eigenvalue.
    Bounds(NArg),
    /// Leading eigenvalues of T_n by the Nystrom method.
    Eigen(EigenArgs),
    /// Eigenvalue table for n = 5, 10, 15, 19, 20.
    Table6(QuadArg),
    /// Energy-density bound for given d, m, tau0.
    Qei(QeiArgs),
    /// Bound at every n near the optimum.
    Optimize(OptimizeArgs),
    /// Casimir energy density on the cylinder against the bound.
    Cylinder(CylinderArgs),
    /// L^p operator-norm bounds.
    Lpnorms(LpArgs),
    /// The function Q_d(x).
    Qd(QdArgs),
}

#[derive(Args, Debug)]
struct NArg {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
}

#[derive(Args, Debug)]
struct QuadArg {
    /// Starting Gauss-Legendre order (default max(64, 8n)).
    #[arg(long)]
    quad_order: Option<usize>,
}

#[derive(Args, Debug)]
struct EigenArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[command(flatten)]
    quad: QuadArg,
}

#[derive(Args, Debug)]
struct QeiArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    d: u32,
    #[arg(long)]
    m: f64,
    #[arg(long)]
    tau0: f64,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    d: u32,
    /// x = m tau0 / 2
    #[arg(long)]
    x: f64,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
}

#[derive(Args, Debug)]
struct CylinderArgs {
    /// Product of mass and periodicity length.
    #[arg(long = "mL")]
    ml: f64,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    /// Averaging time, at most L (default L).
    #[arg(long)]
    tau0: Option<f64>,
}

#[derive(Args, Debug)]
struct LpArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Exponent in [1, inf]; omitted gives p = 1, 4/3, 2, 4, inf.
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args, Debug)]
struct QdArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    d: u32,
    #[arg(long)]
    x: f64,
}

enum Failure {
    Usage(String),
    Convergence(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Convergence { .. } => Failure::Convergence(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Convergence(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let (report, plot) = match &cli.command {
        Command::Alpha(a) => (alpha(a.n)?, None),
        Command::Bounds(a) => (bounds(a.n)?, None),
        Command::Eigen(a) => eigen(a, cli)?,
        Command::Table6(a) => table6(a, cli)?,
        Command::Qei(a) => qei_cmd(a, cli.emit_plot_data)?,
        Command::Optimize(a) => optimize(a)?,
        Command::Cylinder(a) => cylinder_cmd(a, cli.emit_plot_data)?,
        Command::Lpnorms(a) => lpnorms(a, cli.emit_plot_data)?,
        Command::Qd(a) => qd(a, cli.emit_plot_data)?,
    };

    let rendered = match cli.format {
        Format::Text => report.to_text(),
        Format::Csv => report.to_csv().map_err(|e| Failure::Io(e.to_string()))?,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.to_json()).map_err(|e| Failure::Io(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    match &cli.out {
        Some(path) => write_file(path, &rendered)?,
        None => print!("{rendered}"),
    }

    if cli.emit_plot_data {
        if let Some(plot) = plot {
            let path = plot_path(cli.out.as_deref(), &report.command);
            write_file(&path, &plot.render())?;
            eprintln!("plot data written to {}", path.display());
        }
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn plot_path(out: Option<&Path>, command: &str) -> PathBuf {
    match out {
        Some(p) if p.extension().is_some_and(|e| e == "dat") => p.with_extension("plot.dat"),
        Some(p) => p.with_extension("dat"),
        None => PathBuf::from(format!("polyqei-{command}.dat")),
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn fmt_rat(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn alpha(n: u64) -> Result<Report, Failure> {
    let sol = ExactBounds::default().alpha_via_linear_system(n)?;
    let mut report = Report::new("alpha", &["n", "j", "alpha", "alpha_float"]);
    let mut parts = Vec::new();
    for (j, a) in sol.alphas.iter().enumerate() {
        parts.push(format!("alpha_{j} = {}", fmt_rat(a)));
        report.push(vec![Cell::Int(n as i64), Cell::Int(j as i64), Cell::text(fmt_rat(a)), Cell::Float(to_f64(a))]);
    }
    report.text = Some(parts.join(", "));
    Ok(report)
}

fn bounds(n: u64) -> Result<Report, Failure> {
    let b = ExactBounds::default().spectral_bounds(n)?;
    let mut report = Report::new(
        "bounds",
        &["n", "alpha_0", "sum_alpha", "R_n", "lambda_lower", "lambda_upper", "lambda_lower_float", "lambda_upper_float"],
    );
    report.push(vec![
        Cell::Int(n as i64),
        Cell::text(fmt_rat(&b.lower)),
        Cell::text(fmt_rat(&b.upper)),
        Cell::text(fmt_rat(&b.ratio_rn)),
        Cell::text(fmt_rat(&b.lambda_lower)),
        Cell::text(fmt_rat(&b.lambda_upper)),
        Cell::Float(to_f64(&b.lambda_lower)),
        Cell::Float(to_f64(&b.lambda_upper)),
    ]);
    Ok(report)
}

fn nystrom_config(quad: &QuadArg, cli: &Cli) -> NystromConfig {
    NystromConfig {
        quad_order: quad.quad_order,
        precision_bits: cli.precision_bits,
        ..NystromConfig::default()
    }
}

fn eigen_row(n: u64, config: &NystromConfig) -> Result<(Vec<Cell>, usize), Failure> {
    let e = nystrom_eigs_with(n, config)?;
    Ok((
        vec![
            Cell::Int(n as i64),
            Cell::Float(e.lambda1),
            Cell::Float(e.lambda2),
            Cell::Float(e.stirling_ratio()),
            Cell::Float(e.rank1_ratio()),
            Cell::Int(e.quad_order as i64),
            Cell::Float(e.residual_estimate),
        ],
        e.quad_order,
    ))
}

fn eigen(args: &EigenArgs, cli: &Cli) -> Result<(Report, Option<PlotData>), Failure> {
    let config = nystrom_config(&args.quad, cli);
    let (row, order) = eigen_row(args.n, &config)?;
    let mut report = Report::new("eigen", &EIGEN_COLUMNS);
    report.push(row);
    let plot = if cli.emit_plot_data {
        let sol = nystrom_at_order(args.n, order, &config)?;
        Some(PlotData {
            x_label: "t".into(),
            y_label: "u_1(t)".into(),
            points: sol.nodes.iter().copied().zip(sol.leading_eigenfunction.iter().copied()).collect(),
        })
    } else {
        None
    };
    Ok((report, plot))
}

fn table6(args: &QuadArg, cli: &Cli) -> Result<(Report, Option<PlotData>), Failure> {
    let config = nystrom_config(args, cli);
    let mut report = Report::new("table6", &EIGEN_COLUMNS);
    let mut points = Vec::new();
    for n in TABLE_ORDERS {
        let (row, _) = eigen_row(n, &config)?;
        if let Cell::Float(r) = row[3] {
            points.push((n as f64, r));
        }
        report.push(row);
    }
    let plot = PlotData {
        x_label: "n".into(),
        y_label: "sqrt2_(2n)!_lambda_1".into(),
        points,
    };
    Ok((report, Some(plot)))
}

fn qei_cmd(args: &QeiArgs, emit: bool) -> Result<(Report, Option<PlotData>), Failure> {
    let b = qei::optimize_n(args.d, args.m, args.tau0)?;
    let asym = qei::asymptotic_bound(args.d, args.m, args.tau0)?;
    let v = qei::asymptotic_variants(args.d, args.m, args.tau0)?;
    let mut report = Report::new(
        "qei",
        &[
            "d",
            "m",
            "tau0",
            "x",
            "n_star",
            "n_critical",
            "bound",
            "ln_bound",
            "asymptotic",
            "bound/asymptotic",
            "asymptotic_introduction_form",
            "asymptotic_cylinder_form",
        ],
    );
    report.push(vec![
        Cell::Int(args.d as i64),
        Cell::Float(args.m),
        Cell::Float(args.tau0),
        Cell::Float(b.x),
        Cell::Int(b.n_star as i64),
        Cell::opt_float(b.n_critical),
        Cell::Float(b.bound),
        Cell::Float(b.ln_bound),
        Cell::Float(b.asymptotic),
        Cell::Float((b.ln_bound - asym.ln_value).exp()),
        Cell::Float(v.introduction),
        Cell::Float(v.cylinder),
    ]);
    report.note("asymptotic = sqrt(2 pi) K'_d m^d (m tau0)^(1/2) exp(-m tau0/2), composed from the fixed-n bound; this is the form checked against the optimised bound");
    report.note("asymptotic_introduction_form uses the constant K'_d 2^(d+1) sqrt(pi) and is reported unverified");
    report.note("asymptotic_cylinder_form uses the constant K'_d alone and is reported unverified");
    if let Some(w) = asym.warning {
        report.note(w);
    }
    let plot = if emit {
        let mut points = Vec::new();
        for i in 0..=60 {
            let tau = args.tau0 * 10f64.powf(-1.0 + 1.5 * i as f64 / 60.0);
            points.push((tau, qei::optimize_n(args.d, args.m, tau)?.ln_bound));
        }
        Some(PlotData {
            x_label: "tau0".into(),
            y_label: "ln_Q".into(),
            points,
        })
    } else {
        None
    };
    Ok((report, plot))
}

fn optimize(args: &OptimizeArgs) -> Result<(Report, Option<PlotData>), Failure> {
    if !(args.x > 0.0 && args.x.is_finite()) {
        return Err(usage(format!("x = {} must be positive", args.x)));
    }
    let tau0 = 2.0 * args.x / args.m;
    let best = qei::optimize_n(args.d, args.m, tau0)?;
    let n_min = (args.d as u64).div_ceil(2);
    let n_max = ((4.0 * args.x).ceil() as u64).max(n_min + 4);
    let mut report = Report::new("optimize", &["d", "x", "n", "ln_bound", "bound", "optimal"]);
    let mut points = Vec::new();
    for n in n_min..=n_max {
        let ln = qei::ln_bound_at_n(args.d, args.m, tau0, n)?;
        points.push((n as f64, ln));
        report.push(vec![
            Cell::Int(args.d as i64),
            Cell::Float(args.x),
            Cell::Int(n as i64),
            Cell::Float(ln),
            Cell::Float(ln.exp()),
            Cell::Bool(n == best.n_star),
        ]);
    }
    match best.n_critical {
        Some(n0) => report.note(format!("critical point n0 = {}, n_star = {}", report::format_float(n0), best.n_star)),
        None => report.note(format!("x <= d/2: boundary choice n_star = {}", best.n_star)),
    }
    let plot = PlotData {
        x_label: "n".into(),
        y_label: "ln_bound".into(),
        points,
    };
    Ok((report, Some(plot)))
}

fn cylinder_row(m: f64, l: f64, tau0: f64) -> Result<Vec<Cell>, Failure> {
    let r = cylinder::compare_to_qei_with_tau0(m, l, tau0)?;
    Ok(vec![
        Cell::Float(r.m),
        Cell::Float(r.l),
        Cell::Float(r.tau0),
        Cell::Float(r.m * r.l),
        Cell::Float(r.energy_density),
        Cell::Float(r.ln_magnitude),
        Cell::Int(r.terms_used as i64),
        Cell::Float(r.asymptotic),
        Cell::Bool(r.asymptotic_only),
        Cell::opt_float(r.qei_bound),
        r.n_star.map_or(Cell::Null, |n| Cell::Int(n as i64)),
        Cell::opt_float(r.ratio),
        Cell::opt_float(r.ln_ratio),
    ])
}

fn cylinder_cmd(args: &CylinderArgs, emit: bool) -> Result<(Report, Option<PlotData>), Failure> {
    if !(args.m > 0.0 && args.m.is_finite()) {
        return Err(usage(format!("m = {} must be positive", args.m)));
    }
    let l = args.ml / args.m;
    let tau0 = args.tau0.unwrap_or(l);
    let mut report = Report::new(
        "cylinder",
        &[
            "m",
            "L",
            "tau0",
            "mL",
            "energy_density",
            "ln_abs_energy_density",
            "terms_used",
            "asymptotic",
            "asymptotic_only",
            "qei_bound",
            "n_star",
            "ratio",
            "ln_ratio",
        ],
    );
    report.push(cylinder_row(args.m, l, tau0)?);
    let plot = if emit {
        let mut points = Vec::new();
        for i in 1..=120 {
            let ml = 0.5 * i as f64;
            let r = cylinder::compare_to_qei(1.0, ml)?;
            points.push((ml, r.ln_ratio.unwrap_or(f64::NAN)));
        }
        Some(PlotData {
            x_label: "mL".into(),
            y_label: "ln_ratio".into(),
            points,
        })
    } else {
        None
    };
    Ok((report, plot))
}

fn lpnorms(args: &LpArgs, emit: bool) -> Result<(Report, Option<PlotData>), Failure> {
    let ps = match args.p {
        Some(p) => vec![p],
        None => vec![1.0, 4.0 / 3.0, 2.0, 4.0, f64::INFINITY],
    };
    let inf = lp_norms::norm_inf(args.n)?;
    let ddfl = lp_norms::ddfl_comparison(args.n)?;
    let mut report = Report::new(
        "lpnorms",
        &["n", "p", "inv_r", "lower", "upper", "a_n", "b_n", "norm_inf", "ddfl_our_bound", "ddfl_value", "ddfl_ratio"],
    );
    for p in ps {
        let b = lp_norms::norm_p_bounds(args.n, p)?;
        report.push(vec![
            Cell::Int(args.n as i64),
            Cell::Float(b.p),
            Cell::Float(b.inv_r),
            Cell::Float(b.lower),
            Cell::Float(b.upper),
            Cell::Float(b.a_n),
            Cell::Float(b.b_n),
            Cell::text(fmt_rat(&inf)),
            Cell::text(ddfl.our_bound.to_string()),
            Cell::text(ddfl.ddfl_value.to_string()),
            Cell::text(ddfl.ratio.to_string()),
        ]);
    }
    let plot = if emit {
        let scale = 1.0 / to_f64(&inf);
        let mut points = Vec::new();
        for i in 0..=50 {
            let inv_p = i as f64 / 50.0;
            let b = lp_norms::norm_p_bounds(args.n, 1.0 / inv_p)?;
            points.push((inv_p, b.upper * scale));
        }
        Some(PlotData {
            x_label: "1/p".into(),
            y_label: "(2n)!_upper".into(),
            points,
        })
    } else {
        None
    };
    Ok((report, plot))
}

fn qd(args: &QdArgs, emit: bool) -> Result<(Report, Option<PlotData>), Failure> {
    let v = special::q_d(args.d, args.x)?;
    let mut report = Report::new("qd", &["d", "x", "Q_d"]);
    report.push(vec![Cell::Int(v.d as i64), Cell::Float(v.x), Cell::Float(v.value)]);
    let plot = if emit {
        let mut points = Vec::new();
        for i in 0..=100 {
            let x = 1000f64.powf(i as f64 / 100.0);
            points.push((x, special::q_d(args.d, x)?.value));
        }
        Some(PlotData {
            x_label: "x".into(),
            y_label: "Q_d".into(),
            points,
        })
    } else {
        None
    };
    Ok((report, plot))
}
