use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qsd_core::eigensolver::{InitialVector, Preconditioner, SolveOptions};
use qsd_core::io::{self, Report};
use qsd_core::matrix::{build_csr_with_diagonal, BuildMode, BuildOptions, IndexWidth};
use qsd_core::models::{neel_subspace, FlipCorrection};
use qsd_core::ramps::{default_target_energy, ramps, RampsConfig};
use qsd_core::{
    compute_diagonal, group_terms, jordan_wigner, pauli_decompose, solve_lowest, Error,
    GroupedHamiltonian, MatrixFreeOperator, QubitOperator, Subspace,
};

const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_NOT_CONVERGED: u8 = 4;

#[derive(Parser)]
#[command(name = "qsd", version, about = "Subspace Hamiltonian construction and diagonalization")]
struct Cli {
    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, global = true, env = "QSD_THREADS")]
    threads: Option<usize>,

    /// Seed for all randomness.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Map an FCIDUMP file to an extended-alphabet qubit term list.
    Jw(JwArgs),
    /// Build the subspace matrix and write it in Matrix Market format.
    Build(BuildArgs),
    /// Find the lowest eigenvalue of the subspace Hamiltonian.
    Solve(SolveArgs),
    /// Select a perturbative subspace around seed bit-strings.
    Ramps(RampsArgs),
    /// Emit the Neel state and its corrected single-flip neighbours.
    NeelSubspace(NeelArgs),
}

#[derive(Args)]
struct JwArgs {
    fcidump: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Emit the plain Pauli decomposition instead of the extended alphabet.
    #[arg(long)]
    pauli_oracle: bool,
}

#[derive(Args)]
struct OperatorArgs {
    /// Qubit term-list file.
    #[arg(long)]
    operator: PathBuf,
    /// Treat the operator as Jordan-Wigner mapped fermions (Z, P0, P1,
    /// raise and lower only).
    #[arg(long)]
    fermionic: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    TwoPass,
    Fast,
}

#[derive(Clone, Copy, ValueEnum)]
enum Toggle {
    Auto,
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum WidthArg {
    Auto,
    #[value(name = "32")]
    W32,
    #[value(name = "64")]
    W64,
}

#[derive(Args)]
struct MatrixArgs {
    #[arg(long, value_enum, default_value = "fast")]
    mode: ModeArg,
    /// Evaluate only the lower triangle and mirror it.
    #[arg(long, value_enum, default_value = "auto")]
    lower_only: Toggle,
    /// Drop groups whose largest coefficient over the smallest diagonal
    /// splitting is below this ratio.
    #[arg(long, default_value_t = 0.0)]
    trim_tol: f64,
    /// Evaluate every term of a fermionic group instead of one ladder bucket.
    #[arg(long)]
    no_bucket_skip: bool,
    #[arg(long, value_enum, default_value = "auto")]
    index_width: WidthArg,
}

impl MatrixArgs {
    fn options(&self) -> BuildOptions {
        BuildOptions {
            mode: match self.mode {
                ModeArg::TwoPass => BuildMode::TwoPass,
                ModeArg::Fast => BuildMode::Fast,
            },
            lower_only: match self.lower_only {
                Toggle::Auto => None,
                Toggle::On => Some(true),
                Toggle::Off => Some(false),
            },
            bucket_skip: !self.no_bucket_skip,
            index_width: match self.index_width {
                WidthArg::Auto => IndexWidth::Auto,
                WidthArg::W32 => IndexWidth::W32,
                WidthArg::W64 => IndexWidth::W64,
            },
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    op: OperatorArgs,
    #[arg(long)]
    bitstrings: PathBuf,
    #[command(flatten)]
    matrix: MatrixArgs,
    /// Matrix Market output path.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitialArg {
    Uniform,
    Spike,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecondArg {
    None,
    Jacobi,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    op: OperatorArgs,
    #[arg(long)]
    bitstrings: PathBuf,
    #[command(flatten)]
    matrix: MatrixArgs,
    /// Recompute matrix elements on every product instead of storing them.
    #[arg(long)]
    matrix_free: bool,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    #[arg(long, value_enum, default_value = "uniform")]
    initial: InitialArg,
    #[arg(long, value_enum, default_value = "jacobi")]
    preconditioner: PrecondArg,
    /// Prune the subspace first, seeding from its lowest-diagonal string.
    #[arg(long)]
    ramps_tol: Option<f64>,
    #[arg(long, default_value_t = 4)]
    ramps_max_depth: usize,
}

#[derive(Args)]
struct RampsArgs {
    #[command(flatten)]
    op: OperatorArgs,
    /// Seed bit-strings.
    #[arg(long)]
    seeds: PathBuf,
    /// Only admit strings found in this file.
    #[arg(long)]
    full_subspace: Option<PathBuf>,
    #[arg(long)]
    tol: f64,
    #[arg(long, default_value_t = 4)]
    max_depth: usize,
    /// Target energy; defaults to the lowest seed diagonal element.
    #[arg(long, allow_hyphen_values = true)]
    energy: Option<f64>,
    #[arg(long)]
    degeneracy_floor: Option<f64>,
    /// Pruned bit-string output path.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorrectionArg {
    PairFlip,
    Discard,
}

#[derive(Args)]
struct NeelArgs {
    sites: usize,
    #[arg(long, default_value_t = 1)]
    hamming: usize,
    /// How flipped samples are brought back to the Neel magnetization.
    #[arg(long, value_enum, default_value = "pair-flip")]
    correction: CorrectionArg,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum Failure {
    Core(Error),
    NotConverged,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Io(_) => EXIT_PARSE,
        _ => EXIT_VALIDATION,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn load_operator(args: &OperatorArgs) -> Result<QubitOperator, Error> {
    let op = io::parse_term_list(&read(&args.operator)?)?;
    Ok(op.combine_like_terms(0.0))
}

fn load_subspace(path: &Path, num_qubits: usize) -> Result<Subspace, Error> {
    let s = io::parse_bitstrings(&read(path)?)?;
    if s.num_qubits() != num_qubits {
        return Err(Error::WidthMismatch {
            expected: num_qubits,
            found: s.num_qubits(),
        });
    }
    Ok(s)
}

fn group(op: &QubitOperator, fermionic: bool, report: &mut Report) -> Result<GroupedHamiltonian, Error> {
    let t = Instant::now();
    let gh = group_terms(op, fermionic)?;
    report.timings_ms.insert("group".into(), ms(t));
    report.num_groups = gh.num_groups();
    report.num_groups_after_trim = gh.num_groups();
    Ok(gh)
}

fn print_report(report: &Report) {
    println!("{}", report.to_json());
}

fn cmd_jw(args: &JwArgs) -> Outcome {
    let f = io::parse_fcidump(&read(&args.fcidump)?)?;
    let mut op = jordan_wigner(&f.to_fermion_operator())?;
    if args.pauli_oracle {
        op = pauli_decompose(&op);
    }
    let op = op.combine_like_terms(0.0);
    let text = io::write_term_list(&op);
    match &args.output {
        Some(p) => {
            write(p, &text)?;
            let mut r = Report::new("jw");
            r.dim = 1usize.checked_shl(op.num_qubits() as u32).unwrap_or(0);
            print_report(&r);
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_build(args: &BuildArgs) -> Outcome {
    let op = load_operator(&args.op)?;
    let s = load_subspace(&args.bitstrings, op.num_qubits())?;
    let mut report = Report::new("build");
    let gh = group(&op, args.op.fermionic, &mut report)?;
    let (gh, diag) = diagonal_and_trim(gh, &s, args.matrix.trim_tol, &mut report);
    let t = Instant::now();
    let m = build_csr_with_diagonal(&gh, &s, &diag, &args.matrix.options())?;
    report.timings_ms.insert("build".into(), ms(t));
    write(&args.output, &io::write_matrix_market(&m))?;
    report.dim = m.dim();
    report.nnz = Some(m.nnz());
    print_report(&report);
    Ok(())
}

fn diagonal_and_trim(
    gh: GroupedHamiltonian,
    s: &Subspace,
    trim_tol: f64,
    report: &mut Report,
) -> (GroupedHamiltonian, qsd_core::DiagonalCache) {
    let t = Instant::now();
    let diag = compute_diagonal(&gh, s);
    report.timings_ms.insert("diagonal".into(), ms(t));
    if trim_tol > 0.0 {
        let out = gh.trim_groups(&diag, trim_tol);
        report.num_groups_after_trim = out.hamiltonian.num_groups();
        (out.hamiltonian, diag)
    } else {
        (gh, diag)
    }
}

fn cmd_solve(args: &SolveArgs, seed: u64) -> Outcome {
    let op = load_operator(&args.op)?;
    let mut s = load_subspace(&args.bitstrings, op.num_qubits())?;
    let mut report = Report::new(if args.matrix_free { "matrix-free" } else { "csr" });
    let gh = group(&op, args.op.fermionic, &mut report)?;

    if let Some(tol) = args.ramps_tol {
        let t = Instant::now();
        let diag = compute_diagonal(&gh, &s);
        let (k, e) = diag
            .argmin()
            .ok_or_else(|| Error::Dimension("empty subspace".into()))?;
        let seeds = Subspace::from_bitstrings([s.get(k)], s.num_qubits())?;
        let mut cfg = RampsConfig::new(e, tol);
        cfg.max_depth = args.ramps_max_depth;
        let out = ramps(&gh, &seeds, Some(&s), &cfg)?;
        s = out.subspace.sort_by_integer_value();
        report.timings_ms.insert("ramps".into(), ms(t));
        report.ramps_subspace_dim = Some(s.dim());
        report.ramps_degenerate_skips = Some(out.degenerate_skips);
    }

    let (gh, diag) = diagonal_and_trim(gh, &s, args.matrix.trim_tol, &mut report);
    report.dim = s.dim();
    let opts = SolveOptions {
        tol: args.tol,
        max_iter: args.max_iter,
        initial_vector: match args.initial {
            InitialArg::Uniform => InitialVector::Uniform,
            InitialArg::Spike => InitialVector::SpikeAtMinDiagonal,
        },
        preconditioner: match args.preconditioner {
            PrecondArg::None => Preconditioner::None,
            PrecondArg::Jacobi => Preconditioner::ShiftedJacobi,
        },
        seed,
        ..Default::default()
    };

    let t = Instant::now();
    let sol = if args.matrix_free {
        let mut a = MatrixFreeOperator::with_diagonal(&gh, &s, diag.clone())?;
        a.set_bucket_skip(!args.matrix.no_bucket_skip);
        solve_lowest(&a, &diag, &opts)?
    } else {
        let tb = Instant::now();
        let m = build_csr_with_diagonal(&gh, &s, &diag, &args.matrix.options())?;
        report.timings_ms.insert("build".into(), ms(tb));
        report.nnz = Some(m.nnz());
        solve_lowest(&m, &diag, &opts)?
    };
    report.timings_ms.insert("solve".into(), ms(t));
    report.eigenvalue = Some(sol.eigenvalue);
    report.residual = Some(sol.residual);
    report.iterations = Some(sol.iterations);
    report.converged = Some(sol.converged);
    print_report(&report);
    if sol.converged {
        Ok(())
    } else {
        Err(Failure::NotConverged)
    }
}

fn cmd_ramps(args: &RampsArgs) -> Outcome {
    let op = load_operator(&args.op)?;
    let seeds = load_subspace(&args.seeds, op.num_qubits())?;
    let full = match &args.full_subspace {
        Some(p) => Some(load_subspace(p, op.num_qubits())?),
        None => None,
    };
    let mut report = Report::new("ramps");
    let gh = group(&op, args.op.fermionic, &mut report)?;
    let energy = match args.energy {
        Some(e) => e,
        None => default_target_energy(&gh, &seeds)
            .ok_or_else(|| Error::Dimension("no seed bit-strings".into()))?,
    };
    let mut cfg = RampsConfig::new(energy, args.tol);
    cfg.max_depth = args.max_depth;
    cfg.degeneracy_floor = args.degeneracy_floor;
    let t = Instant::now();
    let out = ramps(&gh, &seeds, full.as_ref(), &cfg)?;
    report.timings_ms.insert("ramps".into(), ms(t));
    write(&args.output, &io::write_bitstrings(&out.subspace))?;
    report.dim = out.subspace.dim();
    report.ramps_subspace_dim = Some(out.subspace.dim());
    report.ramps_degenerate_skips = Some(out.degenerate_skips);
    print_report(&report);
    Ok(())
}

fn cmd_neel(args: &NeelArgs) -> Outcome {
    let correction = match args.correction {
        CorrectionArg::PairFlip => FlipCorrection::PairFlip,
        CorrectionArg::Discard => FlipCorrection::Discard,
    };
    let s = neel_subspace(args.sites, args.hamming, correction)?;
    let text = io::write_bitstrings(&s);
    match &args.output {
        Some(p) => {
            write(p, &text)?;
            let mut r = Report::new("neel-subspace");
            r.dim = s.dim();
            print_report(&r);
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not configure thread pool: {e}");
        }
    }
    let result = match &cli.command {
        Command::Jw(a) => cmd_jw(a),
        Command::Build(a) => cmd_build(a),
        Command::Solve(a) => cmd_solve(a, cli.seed),
        Command::Ramps(a) => cmd_ramps(a),
        Command::NeelSubspace(a) => cmd_neel(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::NotConverged) => {
            log::error!("eigensolver did not converge");
            ExitCode::from(EXIT_NOT_CONVERGED)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
