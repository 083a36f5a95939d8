//! Command-line front end: solving, verification, oracles, instance
//! generation, SVG rendering and benchmarking.
//!
//! Exit codes: 0 success, 1 verification failure or internal error,
//! 2 input error, 3 parameter error, 4 budget exhausted.

mod cache;
mod io;
mod render;

use circlepack::assembler::{
    short_description, solve_binpack, solve_container, solve_knapsack, solve_multiknapsack,
    solve_strip, verify_packing_tree, Packing,
};
use circlepack::gen::{generate, GenConfig, SizeMix};
use circlepack::instance::Instance;
use circlepack::oracle;
use circlepack::partition::{Mode, ScaleProfile, SchemeParams};
use circlepack::rat::{self, Rat};
use circlepack::Error as CoreError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser)]
#[command(name = "circlepack", version, about = "Circle packing approximation schemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ras,
    Ras1d,
    Ptas,
}

impl ModeArg {
    fn to_mode(self) -> Mode {
        match self {
            ModeArg::Ras => Mode::Ras,
            ModeArg::Ras1d => Mode::RasOneDim,
            ModeArg::Ptas => Mode::Ptas,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Knapsack,
    Multiknapsack,
    Binpack,
    Strip,
    Container,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(value_enum)]
    problem: Problem,
    /// Instance file (JSON).
    instance: PathBuf,
    /// Precision parameter as a rational 1/r with integer r >= 4.
    #[arg(long, default_value = "1/4")]
    eps: String,
    #[arg(long, value_enum, default_value = "ras")]
    mode: ModeArg,
    /// Knapsack / bin budget (overrides the instance's m).
    #[arg(long)]
    m: Option<u64>,
    /// Height allowance granted to the configuration packer.
    #[arg(long, default_value = "1/8")]
    gamma: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `paper` or `custom:FILE` with JSON
    /// {"group_scale": a, "bin_offset": o, "bin_stride": s}.
    #[arg(long, default_value = "paper")]
    scale_profile: String,
    /// Enumeration budget (count vectors per level, block assignments).
    #[arg(long, default_value_t = 200_000)]
    budget: u64,
    /// Pad the bin height up to the next multiple of w/r instead of
    /// rejecting a non-conforming instance; the pad is reported as part
    /// of the achieved augmentation.
    #[arg(long)]
    pad: bool,
    /// Directory for the realization cache.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Strip width (strip problem only; defaults to the instance width).
    #[arg(long)]
    width: Option<String>,
    /// Output solution file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    Knapsack,
    Binpack,
    Container,
    Strip,
}

#[derive(Args)]
struct OracleArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "knapsack")]
    kind: OracleKind,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long, default_value_t = 12)]
    resolution_bits: u32,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// `large`, `mixed`, or `tiny:EXP` for deep-level items.
    #[arg(long, default_value = "large")]
    mix: String,
    #[arg(long, default_value_t = 1)]
    max_mult: u64,
    #[arg(long, default_value_t = 0)]
    constraints: usize,
    #[arg(long, default_value_t = 1)]
    m: u64,
    #[arg(long, default_value = "1")]
    w: String,
    #[arg(long, default_value = "1")]
    h: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of instance JSON files.
    dir: PathBuf,
    #[arg(long, default_value = "1/4")]
    eps_list: String,
    #[arg(long, default_value = "ras")]
    modes: String,
    /// Compare against the oracle when the instance has at most this
    /// many copies.
    #[arg(long, default_value_t = 6)]
    oracle_max: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance.
    Solve(SolveArgs),
    /// Verify a solution file against its instance.
    Verify { instance: PathBuf, solution: PathBuf },
    /// Brute-force optimum for a tiny instance.
    Oracle(OracleArgs),
    /// Generate a random instance (seed-deterministic).
    Gen(GenArgs),
    /// Render a solution to SVG (one file per bin).
    Render {
        solution: PathBuf,
        instance: PathBuf,
        #[arg(long, default_value = "bin")]
        out_prefix: String,
    },
    /// Run a corpus and emit a CSV of profit ratios and runtimes.
    Bench(BenchArgs),
}

fn exit_code(e: &CoreError) -> i32 {
    match e {
        CoreError::Input(_) => 2,
        CoreError::Param(_) => 3,
        CoreError::Budget(_) => 4,
        CoreError::Internal(_) => 1,
    }
}

fn fail(code: i32, msg: &str) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(code);
}

fn read_instance(path: &Path) -> Instance {
    let data = std::fs::read_to_string(path)
        .unwrap_or_else(|e| fail(2, &format!("cannot read {}: {e}", path.display())));
    let dto: io::InstanceDto = serde_json::from_str(&data)
        .unwrap_or_else(|e| fail(2, &format!("bad instance JSON: {e}")));
    dto.to_instance().unwrap_or_else(|e| fail(2, &e))
}

fn parse_rat_arg(s: &str, what: &str) -> Rat {
    rat::parse(s).unwrap_or_else(|e| fail(3, &format!("{what}: {e}")))
}

fn build_params(args: &SolveArgs) -> SchemeParams {
    let eps = parse_rat_arg(&args.eps, "--eps");
    let mut params = SchemeParams::new(eps, args.mode.to_mode())
        .unwrap_or_else(|e| fail(exit_code(&e), &e.to_string()));
    params.gamma = parse_rat_arg(&args.gamma, "--gamma");
    if !params.gamma.is_positive() {
        fail(3, "--gamma must be positive");
    }
    params.seed = args.seed;
    params.config_budget = args.budget;
    params.scale_profile = match args.scale_profile.as_str() {
        "paper" => ScaleProfile::Paper,
        other => match other.strip_prefix("custom:") {
            Some(file) => {
                let data = std::fs::read_to_string(file)
                    .unwrap_or_else(|e| fail(3, &format!("cannot read profile {file}: {e}")));
                let v: serde_json::Value = serde_json::from_str(&data)
                    .unwrap_or_else(|e| fail(3, &format!("bad profile JSON: {e}")));
                let get = |k: &str| {
                    v.get(k)
                        .and_then(|x| x.as_u64())
                        .unwrap_or_else(|| fail(3, &format!("profile misses {k}")))
                        as u32
                };
                ScaleProfile::Custom {
                    group_scale: get("group_scale"),
                    bin_offset: get("bin_offset"),
                    bin_stride: get("bin_stride"),
                }
            }
            None => fail(3, "scale profile must be `paper` or `custom:FILE`"),
        },
    };
    if let Some(dir) = &args.cache {
        let store = cache::FileCache::new(dir.clone())
            .unwrap_or_else(|e| fail(2, &format!("cannot open cache dir: {e}")));
        params.cache = Some(std::sync::Arc::new(store));
    }
    params
}

/// The scheme assumes `h r / w` integral; `--pad` rounds the height up to
/// the next multiple of `w / r`, otherwise non-conforming instances are
/// rejected (exit 3).
fn conform_bin(instance: &Instance, params: &SchemeParams, pad: bool) -> Instance {
    let ratio = &instance.bin.height * rat::int(params.r as i64) / &instance.bin.width;
    if ratio.is_integer() {
        return instance.clone();
    }
    if !pad {
        fail(
            3,
            &format!(
                "h r / w = {} is not an integer; re-run with --pad to round the \
                 height up (the pad is reported as augmentation)",
                rat::format(&ratio)
            ),
        );
    }
    let unit = &instance.bin.width / rat::int(params.r as i64);
    let padded = ratio.ceil() * unit;
    let mut out = instance.clone();
    out.bin.height = padded;
    out
}

fn echo_params(args: &SolveArgs, params: &SchemeParams) -> io::ParamsEcho {
    io::ParamsEcho {
        eps: rat::format(&params.eps),
        mode: io::mode_name(params.mode).to_string(),
        gamma: rat::format(&params.gamma),
        seed: params.seed,
        scale_profile: args.scale_profile.clone(),
        budget: params.config_budget,
    }
}

fn run_solve(args: SolveArgs) {
    let original = read_instance(&args.instance);
    let params = build_params(&args);
    let padded = conform_bin(&original, &params, args.pad);
    let m = args.m.unwrap_or(padded.m);
    let started = Instant::now();

    let (packing, bins_used, length): (Packing, Option<u64>, Option<Rat>) =
        match args.problem {
            Problem::Knapsack => {
                let p = solve_knapsack(&padded, &params)
                    .unwrap_or_else(|e| fail(exit_code(&e), &e.to_string()));
                (p, None, None)
            }
            Problem::Multiknapsack => {
                let p = solve_multiknapsack(&padded, m, &params)
                    .unwrap_or_else(|e| fail(exit_code(&e), &e.to_string()));
                (p, None, None)
            }
            Problem::Binpack => {
                let (p, count) = solve_binpack(&padded, &params)
                    .unwrap_or_else(|e| fail(exit_code(&e), &e.to_string()));
                (p, Some(count), None)
            }
            Problem::Strip => {
                let width = args
                    .width
                    .as_ref()
                    .map(|w| parse_rat_arg(w, "--width"))
                    .unwrap_or_else(|| padded.bin.width.clone());
                let s = solve_strip(&padded, m, &width, &params)
                    .unwrap_or_else(|e| fail(exit_code(&e), &e.to_string()));
                (s.packing, None, Some(s.length))
            }
            Problem::Container => {
                let s = solve_container(&padded, m, &params)
                    .unwrap_or_else(|e| fail(exit_code(&e), &e.to_string()));
                (s.packing, None, Some(s.length))
            }
        };
    let solve_ms = started.elapsed().as_millis();

    // the pad counts as augmentation against the original bin
    let mut packing = packing;
    if padded.bin.height != original.bin.height {
        let mut aug_h = Rat::zero();
        for b in &packing.bins {
            let f = &b.bin.height / &original.bin.height;
            if f > aug_h {
                aug_h = f;
            }
        }
        packing.aug_height = aug_h.clone();
        packing.height_constant = (&aug_h - rat::int(1)) / &params.eps;
    }

    let verify_started = Instant::now();
    verify_packing_tree(&packing, &padded)
        .unwrap_or_else(|e| fail(1, &format!("self-verification failed: {e}")));
    let verify_ms = verify_started.elapsed().as_millis();

    let short = short_description(&packing);
    let dto = io::solution_to_dto(
        &packing,
        echo_params(&args, &params),
        bins_used,
        length.as_ref(),
        Some(&short),
    );
    let json = serde_json::to_string_pretty(&dto).expect("serializable");
    if let Some(out) = &args.out {
        std::fs::write(out, &json)
            .unwrap_or_else(|e| fail(2, &format!("cannot write {}: {e}", out.display())));
    } else {
        println!("{json}");
    }

    eprintln!(
        "profit {} | bins {} | aug ({}, {}) | height constant {} | solve {} ms | verify {} ms",
        rat::format(&packing.total_profit),
        packing.bins.len(),
        rat::format(&packing.aug_width),
        rat::format(&packing.aug_height),
        rat::format(&packing.height_constant),
        solve_ms,
        verify_ms,
    );
    if let Some(c) = bins_used {
        eprintln!("bins used: {c}");
    }
    if let Some(l) = &length {
        eprintln!("length: {}", rat::format(l));
    }
}

fn run_verify(instance: PathBuf, solution: PathBuf) {
    let instance = read_instance(&instance);
    let data = std::fs::read_to_string(&solution)
        .unwrap_or_else(|e| fail(2, &format!("cannot read solution: {e}")));
    let dto: io::SolutionDto = serde_json::from_str(&data)
        .unwrap_or_else(|e| fail(2, &format!("bad solution JSON: {e}")));
    let packing = io::dto_to_packing(&dto).unwrap_or_else(|e| fail(2, &e));

    // exact geometric verification is the single source of truth
    if let Err(e) = verify_packing_tree(&packing, &instance) {
        eprintln!("INVALID: {e}");
        std::process::exit(1);
    }
    // declared augmentation factors must hold and stay in the mode's bound
    let eps = rat::parse(&dto.params.eps).unwrap_or_else(|e| fail(2, &format!("params.eps: {e}")));
    let mut aug_w = Rat::one();
    let mut aug_h = Rat::one();
    for b in &packing.bins {
        aug_w = aug_w.max(&b.bin.width / &instance.bin.width);
        aug_h = aug_h.max(&b.bin.height / &instance.bin.height);
    }
    if aug_w > packing.aug_width || aug_h > packing.aug_height {
        eprintln!("INVALID: declared augmentation factors are too small");
        std::process::exit(1);
    }
    let ok_mode = match packing.mode {
        Mode::Ras => {
            aug_w <= rat::int(1) + &eps
                && aug_h <= rat::int(1) + rat::int(1920) * &eps
        }
        Mode::RasOneDim => aug_w <= Rat::one(),
        Mode::Ptas => aug_w <= Rat::one() && aug_h <= Rat::one(),
    };
    if !ok_mode {
        eprintln!("INVALID: augmentation outside the advertised bound for the mode");
        std::process::exit(1);
    }
    println!("VALID");
}

fn run_oracle(args: OracleArgs) {
    let instance = read_instance(&args.instance);
    let m = args.m.unwrap_or(instance.m);
    match args.kind {
        OracleKind::Knapsack => {
            let got = oracle::exact_knapsack(&instance, m, args.resolution_bits)
                .unwrap_or_else(|e| fail(exit_code(&e), &e.to_string()));
            println!("profit: {}", rat::format(&got.profit));
        }
        OracleKind::Binpack => {
            let (bins, _) = oracle::exact_binpack(&instance, args.resolution_bits)
                .unwrap_or_else(|e| fail(exit_code(&e), &e.to_string()));
            println!("bins: {bins}");
        }
        OracleKind::Container => {
            let side = oracle::exact_container(&instance, m, args.resolution_bits)
                .unwrap_or_else(|e| fail(exit_code(&e), &e.to_string()));
            println!("side: {}", rat::format(&side));
        }
        OracleKind::Strip => {
            let h = oracle::exact_strip(
                &instance,
                m,
                &instance.bin.width,
                args.resolution_bits,
            )
            .unwrap_or_else(|e| fail(exit_code(&e), &e.to_string()));
            println!("height: {}", rat::format(&h));
        }
    }
}

fn run_gen(args: GenArgs) {
    let mix = match args.mix.as_str() {
        "large" => SizeMix::Large,
        "mixed" => SizeMix::Mixed,
        other => match other.strip_prefix("tiny:") {
            Some(e) => SizeMix::WithTiny {
                exponent: e.parse().unwrap_or_else(|_| fail(3, "bad tiny exponent")),
            },
            None => fail(3, "mix must be large, mixed or tiny:EXP"),
        },
    };
    let cfg = GenConfig {
        seed: args.seed,
        n: args.n,
        bin_w: parse_rat_arg(&args.w, "--w"),
        bin_h: parse_rat_arg(&args.h, "--h"),
        mix,
        max_multiplicity: args.max_mult,
        max_profit: 100,
        constraints: args.constraints,
        m: args.m,
    };
    let instance = generate(&cfg).unwrap_or_else(|e| fail(exit_code(&e), &e.to_string()));
    let dto = io::InstanceDto::from_instance(&instance);
    let json = serde_json::to_string_pretty(&dto).expect("serializable");
    match &args.out {
        Some(out) => std::fs::write(out, &json)
            .unwrap_or_else(|e| fail(2, &format!("cannot write: {e}"))),
        None => println!("{json}"),
    }
}

fn run_render(solution: PathBuf, instance: PathBuf, out_prefix: String) {
    let instance = read_instance(&instance);
    let data = std::fs::read_to_string(&solution)
        .unwrap_or_else(|e| fail(2, &format!("cannot read solution: {e}")));
    let dto: io::SolutionDto =
        serde_json::from_str(&data).unwrap_or_else(|e| fail(2, &format!("bad solution: {e}")));
    let radii = |id: &str| -> f64 {
        instance
            .circles
            .iter()
            .find(|c| c.id == id)
            .map(|c| rat::to_f64(&c.radius()))
            .unwrap_or(0.0)
    };
    for (i, bin) in dto.bins.iter().enumerate() {
        let svg = render::render_bin(bin, &radii);
        let path = format!("{out_prefix}{i}.svg");
        std::fs::write(&path, svg)
            .unwrap_or_else(|e| fail(2, &format!("cannot write {path}: {e}")));
        eprintln!("wrote {path}");
    }
}

fn run_bench(args: BenchArgs) {
    let eps_list: Vec<Rat> =
        args.eps_list.split(',').map(|s| parse_rat_arg(s.trim(), "--eps-list")).collect();
    let modes: Vec<Mode> = args
        .modes
        .split(',')
        .map(|s| match s.trim() {
            "ras" => Mode::Ras,
            "ras1d" => Mode::RasOneDim,
            "ptas" => Mode::Ptas,
            other => fail(3, &format!("unknown mode {other}")),
        })
        .collect();
    let mut files: Vec<PathBuf> = std::fs::read_dir(&args.dir)
        .unwrap_or_else(|e| fail(2, &format!("cannot read dir: {e}")))
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();

    let mut jobs = Vec::new();
    for f in &files {
        for eps in &eps_list {
            for mode in &modes {
                jobs.push((f.clone(), eps.clone(), *mode));
            }
        }
    }
    let rows: Vec<String> = jobs
        .par_iter()
        .map(|(file, eps, mode)| {
            let instance = read_instance(file);
            let mut params = match SchemeParams::new(eps.clone(), *mode) {
                Ok(p) => p,
                Err(e) => return format!("{},{},{},error:{e},,,", file.display(), rat::format(eps), io::mode_name(*mode)),
            };
            params.scale_profile = ScaleProfile::Paper;
            let started = Instant::now();
            let solved = solve_multiknapsack(&instance, instance.m, &params);
            let ms = started.elapsed().as_millis();
            let copies: u64 = instance.circles.iter().map(|c| c.multiplicity).sum();
            let oracle_profit = if copies <= args.oracle_max && instance.m <= 2 {
                oracle::exact_knapsack(&instance, instance.m, 10)
                    .ok()
                    .map(|o| o.profit)
            } else {
                None
            };
            match solved {
                Ok(p) => {
                    let ratio = match &oracle_profit {
                        Some(o) if o.is_positive() => {
                            rat::to_f64(&(&p.total_profit / o)).to_string()
                        }
                        _ => String::new(),
                    };
                    format!(
                        "{},{},{},{},{},{},{}",
                        file.display(),
                        rat::format(eps),
                        io::mode_name(*mode),
                        rat::format(&p.total_profit),
                        ratio,
                        rat::format(&p.aug_height),
                        ms
                    )
                }
                Err(e) => format!(
                    "{},{},{},error:{e},,,{ms}",
                    file.display(),
                    rat::format(eps),
                    io::mode_name(*mode)
                ),
            }
        })
        .collect();

    let mut csv = String::from("instance,eps,mode,profit,ratio_vs_oracle,aug_height,ms\n");
    for r in rows {
        csv.push_str(&r);
        csv.push('\n');
    }
    match &args.out {
        Some(out) => std::fs::write(out, &csv)
            .unwrap_or_else(|e| fail(2, &format!("cannot write: {e}"))),
        None => print!("{csv}"),
    }
}

fn main() {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Verify { instance, solution } => run_verify(instance, solution),
        Command::Oracle(args) => run_oracle(args),
        Command::Gen(args) => run_gen(args),
        Command::Render { solution, instance, out_prefix } => {
            run_render(solution, instance, out_prefix)
        }
        Command::Bench(args) => run_bench(args),
    }
}
