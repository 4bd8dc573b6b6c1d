use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use shearflow::bench::rates::{p_grid, rates_curves, write_rates_csv};
use shearflow::bench::table::fmt_f64;
use shearflow::bench::{infsup_probe, run_cell_with, run_study, Case, EocTable, StudyConfig};
use shearflow::fem::ElementPair;
use shearflow::solver::DiscreteState;
use shearflow::Error;

/// Environment variable with the number of worker threads for studies.
const THREADS_ENV: &str = "SHEARFLOW_THREADS";

#[derive(Parser)]
#[command(name = "shearflow", version, about = "Mixed finite element solver for generalized Navier-Stokes flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the manufactured problem up to one level and report errors.
    Solve {
        #[arg(long)]
        element: ElementPair,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        case: Case,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        quad_deg: Option<usize>,
        /// CSV with the errors of every level up to `level`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Legacy VTK file with the finest solution at the vertices.
        #[arg(long)]
        vtk: Option<PathBuf>,
    },
    /// Convergence study over several exponents, one CSV per exponent.
    Study {
        #[arg(long)]
        element: ElementPair,
        #[arg(long)]
        case: Case,
        #[arg(long, value_delimiter = ',', required = true)]
        p_list: Vec<f64>,
        #[arg(long)]
        max_level: usize,
        #[arg(long)]
        quad_deg: Option<usize>,
        /// Solve serially in a fixed order.
        #[arg(long)]
        deterministic: bool,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Exponents and predicted rates on a grid of p values.
    Rates {
        #[arg(long)]
        p_min: f64,
        #[arg(long)]
        p_max: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Discrete inf-sup constants on levels 1..=max_level.
    Infsup {
        #[arg(long)]
        element: ElementPair,
        #[arg(long)]
        max_level: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>().map(Error::root) {
        Some(Error::NonConvergence { .. }) => 2,
        Some(Error::Config(_) | Error::Domain(_)) => 3,
        _ => 1,
    }
}

fn threads(deterministic: bool) -> anyhow::Result<usize> {
    if deterministic {
        return Ok(1);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::Config(format!("{THREADS_ENV} must be a positive integer, got '{v}'")).into()),
        },
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Solve { element, p, case, level, quad_deg, out, vtk } => {
            let mut cfg = StudyConfig::new(element, case, vec![p], level);
            if let Some(d) = quad_deg {
                cfg.quad_degree = d;
            }
            cfg.newton.validate()?;
            let mut finest: Option<DiscreteState> = None;
            let table = run_cell_with(&cfg, p, |sol| {
                if sol.row.level == level {
                    finest = Some(sol.state.clone());
                }
                Ok(())
            })?;
            print_table(&table);
            if let Some(path) = out {
                table.emit_csv(&path)?;
            }
            if let (Some(path), Some(state)) = (vtk, finest) {
                write_vtk(&path, &state)?;
            }
        }
        Command::Study { element, case, p_list, max_level, quad_deg, deterministic, out_dir } => {
            let mut cfg = StudyConfig::new(element, case, p_list, max_level);
            if let Some(d) = quad_deg {
                cfg.quad_degree = d;
            }
            cfg.threads = threads(deterministic)?;
            cfg.validate()?;
            fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            for table in run_study(&cfg)? {
                print_table(&table);
                table.emit_csv(&out_dir.join(table.file_name()))?;
            }
        }
        Command::Rates { p_min, p_max, n, out } => {
            let rows = rates_curves(&p_grid(p_min, p_max, n)?)?;
            let mut w = create(&out)?;
            write_rates_csv(&rows, &mut w)
                .and_then(|_| w.flush())
                .with_context(|| format!("writing {}", out.display()))?;
        }
        Command::Infsup { element, max_level, out } => {
            let rows = infsup_probe(element, 1..=max_level)?;
            let mut w = create(&out)?;
            let mut write = || -> std::io::Result<()> {
                writeln!(w, "level,h,ndof_v,ndof_q,beta")?;
                for r in &rows {
                    writeln!(w, "{},{},{},{},{}", r.level, fmt_f64(r.h), r.ndof_v, r.ndof_q, fmt_f64(r.beta))?;
                    println!("{element} level {}: beta_h = {:.6}", r.level, r.beta);
                }
                w.flush()
            };
            write().with_context(|| format!("writing {}", out.display()))?;
        }
    }
    Ok(())
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn print_table(table: &EocTable) {
    println!("{} case {} p = {}", table.pair, table.case, table.p);
    println!(
        "{:>5} {:>11} {:>7} {:>11} {:>7} {:>11} {:>7} {:>5}",
        "level", "e_v", "eoc", "e_q_s", "eoc", "e_q_ell", "eoc", "iters"
    );
    let (ev, eqs, eql) = (table.eoc_v(), table.eoc_q_s(), table.eoc_q_ell());
    let f = |x: Option<f64>| x.map(|v| format!("{v:.3}")).unwrap_or_default();
    for (i, r) in table.rows.iter().enumerate() {
        println!(
            "{:>5} {:>11.4e} {:>7} {:>11.4e} {:>7} {:>11.4e} {:>7} {:>5}",
            r.level,
            r.e_v,
            f(ev[i]),
            r.e_q_s,
            f(eqs[i]),
            r.e_q_ell,
            f(eql[i]),
            r.newton_iters
        );
    }
}

fn write_vtk(path: &Path, state: &DiscreteState) -> anyhow::Result<()> {
    let space = state.space();
    let mesh = space.mesh();
    let nv = mesh.n_vertices();
    let v = state.velocity.coeffs();
    let velocity: Vec<[f64; 2]> = (0..nv).map(|i| [v[2 * i], v[2 * i + 1]]).collect();
    let w = create(path)?;
    mesh.write_vtk(w, &[("pressure", state.pressure.coeffs())], &[("velocity", &velocity)])
        .with_context(|| format!("writing {}", path.display()))
}
