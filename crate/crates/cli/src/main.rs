use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use toporing::algebra::radical::{radical, radical_oracle};
use toporing::algebra::wedderburn::{verify_reassembly, wedderburn};
use toporing::algebra::Algebra;
use toporing::endo::bass::{bass_flat, random_bass_sequence};
use toporing::endo::coperfect::{perfectness_bridge, sigma_coperfect_check};
use toporing::endo::endo_tower;
use toporing::endo::split::split_omega_limit_check;
use toporing::field::Elem;
use toporing::format::{self, WindowedSpec};
use toporing::lifting::LiftSide;
use toporing::matrix::contratensor::contratensor_free;
use toporing::matrix::transport::{compare_homs, corner_recovery, transport_contra, transport_discrete};
use toporing::matrix::{mat_mul, BaseRing};
use toporing::module::decompose::decompose_indecomposable;
use toporing::module::perfect::{perfect_decomposition_verdict_module, ModuleFamily};
use toporing::module::{FiniteModule, Side};
use toporing::tower::analysis::{
    classify_perfect, classify_semisimple, quotient_tower, strongly_closed_check, topological_jacobson_radical,
};
use toporing::tower::lifting::lift_from_quotient;
use toporing::tower::{builtin_tower, RingTower};
use toporing::verify::{run_suite, verify_all};
use toporing::{Error, Result};

/// Exact computations with finite algebras, towers of finite rings, and
/// modules over them. Reports are JSON, deterministic in (inputs, seed, depth).
#[derive(Parser, Debug)]
#[command(name = "toporing", version)]
struct Cli {
    #[command(flatten)]
    job: JobFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct JobFlags {
    /// Truncation depth: levels of a tower, members of a family, search depth.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,
    /// Window size for row-zero-convergent matrices.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    window: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Jacobson radical of an algebra, checked against the definition when small.
    Radical { algebra: String },
    /// Wedderburn decomposition of a semisimple algebra.
    Wedderburn { algebra: String },
    /// Krull-Schmidt decomposition of a module.
    DecomposeModule { module: String },
    /// Radical tower, tp formula and semisimplicity of a tower.
    ClassifyTower { tower: String },
    /// Perfectness verdict for a tower.
    ClassifyPerfect { tower: String },
    /// Lift the primitive idempotents of the top quotient through the tower.
    LiftIdempotents {
        tower: String,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
        /// Use a non-multiplicative section of the quotient map.
        #[arg(long)]
        perturb: bool,
    },
    /// Product of two windowed matrices over the same base.
    Matmul { left: String, right: String },
    /// Transport a module to the matrix ring over a finite index set.
    Transport {
        module: String,
        #[arg(long, default_value_t = 2)]
        size: usize,
    },
    /// Contratensor product with a free contramodule on a finite set.
    Contratensor {
        module: String,
        #[arg(long, default_value_t = 2)]
        size: usize,
    },
    /// Bass flats over a finite algebra, for a given period or random ones.
    BassFlat {
        algebra: String,
        /// Period as `;`-separated elements with `,`-separated coordinates.
        #[arg(long)]
        sequence: Option<String>,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Splitting of an ω-indexed direct limit.
    SplitLimit { system: String },
    /// Σ-coperfectness of the direct sum of a family.
    Coperfect {
        family: String,
        /// The next truncation of the family, for witness refinement.
        #[arg(long)]
        refined: Option<String>,
    },
    /// Perfect-decomposition and Σ-coperfect pipelines, cross-checked.
    Bridge {
        family: String,
        #[arg(long)]
        refined: Option<String>,
    },
    /// The acceptance suites.
    Verify {
        #[arg(long)]
        suite: Option<u32>,
    },
}

fn read(path: &str) -> Result<(String, PathBuf)> {
    let p = Path::new(path);
    let dir = p.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((format::read_file(p)?, dir))
}

/// `builtin:<name>` or a file.
fn load_algebra(src: &str) -> Result<Algebra> {
    match src.strip_prefix("builtin:") {
        Some(name) => format::builtin_algebra(name),
        None => format::read_algebra(&read(src)?.0),
    }
}

fn load_tower(src: &str, depth: usize) -> Result<RingTower> {
    let t = match src.strip_prefix("builtin:") {
        Some(name) => return builtin_tower(name, depth),
        None => {
            let (text, dir) = read(src)?;
            format::read_tower(&text, &dir)?
        }
    };
    if t.depth() > depth {
        t.truncate(depth)
    } else {
        Ok(t)
    }
}

fn load_module(src: &str) -> Result<FiniteModule> {
    let (text, dir) = read(src)?;
    format::read_module(&text, &dir)
}

fn load_family(src: &str) -> Result<ModuleFamily> {
    let (text, dir) = read(src)?;
    format::read_family(&text, &dir)
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn parse_sequence(s: &str, a: &Algebra) -> Result<Vec<Vec<Elem>>> {
    s.split(';')
        .map(|elem| {
            let v = elem
                .split(',')
                .map(|c| c.trim().parse::<Elem>().map_err(|_| Error::Parse(format!("bad coordinate '{c}'"))))
                .collect::<Result<Vec<_>>>()?;
            if v.len() != a.dim() || v.iter().any(|&c| c >= a.field().q()) {
                return Err(Error::Parse(format!("'{elem}' is not an element of a {}-dimensional algebra", a.dim())));
            }
            Ok(v)
        })
        .collect()
}

fn run(cmd: &Command, job: &JobFlags) -> Result<Value> {
    let depth = job.depth as usize;
    let seed = job.seed;
    Ok(match cmd {
        Command::Radical { algebra } => {
            let a = load_algebra(algebra)?;
            let h = radical(&a)?;
            let oracle = radical_oracle(&a, 1 << 12).map(|o| o == h.space);
            if oracle == Some(false) {
                return Err(Error::Inconsistent("radical differs from the brute-force oracle".into()));
            }
            json!({
                "dim": a.dim(),
                "radical_dim": h.dim(),
                "radical_basis": h.space.vectors(),
                "nilpotency_index": a.nilpotency_index(&h.space),
                "oracle_agrees": oracle,
            })
        }
        Command::Wedderburn { algebra } => {
            let a = load_algebra(algebra)?;
            let d = wedderburn(&a, seed)?;
            verify_reassembly(&a, &d)?;
            json!({ "dim": a.dim(), "factors": d.factors(), "reassembly_verified": true, "datum": to_json(&d) })
        }
        Command::DecomposeModule { module } => {
            let m = load_module(module)?;
            let d = decompose_indecomposable(&m, seed)?;
            let v = perfect_decomposition_verdict_module(&m, depth, seed)?;
            json!({ "dim": m.dim, "class_profile": d.class_profile(), "certificate": to_json(&d), "verdict": v.name() })
        }
        Command::ClassifyTower { tower } => {
            let t = load_tower(tower, depth)?;
            let r = topological_jacobson_radical(&t, seed)?;
            let s = classify_semisimple(&t, seed)?;
            json!({
                "tower": t.name,
                "depth": t.depth(),
                "level_dims": t.levels.iter().map(|a| a.dim()).collect::<Vec<_>>(),
                "radical_dims": r.dims(),
                "radical_surjective": r.surjective,
                "tp_checks": to_json(&r.tp_checks),
                "consistent": r.consistent(),
                "semisimple": to_json(&s),
            })
        }
        Command::ClassifyPerfect { tower } => to_json(&classify_perfect(&load_tower(tower, depth)?, seed)?),
        Command::LiftIdempotents { tower, side, perturb } => {
            let t = load_tower(tower, depth)?;
            let h = topological_jacobson_radical(&t, seed)?.levels;
            let cert = strongly_closed_check(&t, &h, 3, seed, *perturb)?;
            let qt = quotient_tower(&t, &h)?;
            let top = t.top();
            let family: Vec<Vec<Elem>> =
                wedderburn(&qt.tower.levels[top], seed)?.primitive_idempotents().into_iter().map(|(_, e)| e).collect();
            let side = match side {
                SideArg::Left => LiftSide::Left,
                SideArg::Right => LiftSide::Right,
            };
            let out = lift_from_quotient(&t, &h, Some(&cert), &family, side, seed, *perturb)?;
            json!({ "tower": t.name, "depth": t.depth(), "quotient_family": family, "lift": to_json(&out), "strongly_closed": to_json(&cert) })
        }
        Command::Matmul { left, right } => {
            let (ta, da) = read(left)?;
            let tb = read(right)?.0;
            let sa: WindowedSpec = format::from_toml(&ta)?;
            let sb: WindowedSpec = format::from_toml(&tb)?;
            if sa.base != sb.base {
                return Err(Error::Window("the two matrices have different base towers".into()));
            }
            let base = BaseRing::new(format::load_tower(&sa.base, &da)?);
            let w = job.window as usize;
            let a = format::windowed_from_spec(&sa, &base)?;
            let b = format::windowed_from_spec(&sb, &base)?;
            let a = if a.window() > w { a.restrict(w) } else { a };
            let p = mat_mul(&a, &b)?;
            let spec = format::windowed_spec(&p, sa.base.clone());
            json!({ "window": p.window(), "certified_rows": p.certified_rows(), "product": to_json(&spec) })
        }
        Command::Transport { module, size } => {
            let n = load_module(module)?;
            let v = match n.side {
                Side::Right => transport_discrete(&n, *size)?,
                Side::Left => transport_contra(&n, *size)?,
            };
            let back = corner_recovery(&v, &n.algebra, *size)?;
            let homs = compare_homs(&n, &n, *size)?;
            if back.action != n.action || !homs.equal {
                return Err(Error::Inconsistent("transport is not fully faithful on this module".into()));
            }
            json!({ "module_dim": n.dim, "size": size, "transported_dim": v.dim, "corner_recovered": true, "endomorphisms": to_json(&homs) })
        }
        Command::Contratensor { module, size } => {
            let n = load_module(module)?;
            let r = contratensor_free(&n, *size)?;
            if !r.isomorphic() {
                return Err(Error::Inconsistent("the comparison map is not an isomorphism".into()));
            }
            json!({ "isomorphic": true, "report": to_json(&r) })
        }
        Command::BassFlat { algebra, sequence, count } => {
            let a = load_algebra(algebra)?;
            let seqs = match sequence {
                Some(s) => vec![parse_sequence(s, &a)?],
                None => {
                    use rand::SeedableRng;
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    (0..*count).map(|_| random_bass_sequence(&a, &mut rng)).collect()
                }
            };
            let data = seqs.iter().map(|s| bass_flat(&a, s)).collect::<Result<Vec<_>>>()?;
            json!({ "ring_dim": a.dim(), "all_projective": data.iter().all(|d| d.projective()), "flats": to_json(&data) })
        }
        Command::SplitLimit { system } => {
            let (text, dir) = read(system)?;
            let s = format::read_system(&text, &dir)?;
            let v = split_omega_limit_check(&s)?;
            json!({ "verdict": v.name(), "depth": s.depth(), "detail": to_json(&v) })
        }
        Command::Coperfect { family, refined } => {
            let fam = load_family(family)?;
            let refined = refined.as_deref().map(load_family).transpose()?;
            let t = endo_tower(&fam, depth.min(fam.members.len()))?;
            let v = sigma_coperfect_check(&t, refined.as_ref(), depth, seed)?;
            json!({ "verdict": v.name(), "endo_tower": to_json(&t.summary()), "detail": to_json(&v) })
        }
        Command::Bridge { family, refined } => {
            let fam = load_family(family)?;
            let refined = refined.as_deref().map(load_family).transpose()?;
            let t = endo_tower(&fam, depth.min(fam.members.len()))?;
            let r = perfectness_bridge(&t, refined.as_ref(), depth, seed)?;
            if !r.consistent {
                return Err(Error::Inconsistent(format!("bridge checks violated: {}", to_json(&r.checks))));
            }
            to_json(&r)
        }
        Command::Verify { suite } => {
            let report = match suite {
                Some(id) => {
                    let r = run_suite(*id, seed)?;
                    json!({ "seed": seed, "passed": r.passed, "suites": [to_json(&r)] })
                }
                None => to_json(&verify_all(seed)),
            };
            if report["passed"] != json!(true) {
                return Err(Error::Inconsistent(format!("acceptance suites failed: {report}")));
            }
            report
        }
    })
}

fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Radical { .. } => "radical",
        Command::Wedderburn { .. } => "wedderburn",
        Command::DecomposeModule { .. } => "decompose-module",
        Command::ClassifyTower { .. } => "classify-tower",
        Command::ClassifyPerfect { .. } => "classify-perfect",
        Command::LiftIdempotents { .. } => "lift-idempotents",
        Command::Matmul { .. } => "matmul",
        Command::Transport { .. } => "transport",
        Command::Contratensor { .. } => "contratensor",
        Command::BassFlat { .. } => "bass-flat",
        Command::SplitLimit { .. } => "split-limit",
        Command::Coperfect { .. } => "coperfect",
        Command::Bridge { .. } => "bridge",
        Command::Verify { .. } => "verify",
    }
}

fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r,
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let job = &cli.job;
    let envelope = |key: &str, body: Value| {
        let mut v = json!({ "command": name(&cli.command), "seed": job.seed, "depth": job.depth, "window": job.window });
        v[key] = body;
        v
    };
    match run(&cli.command, job) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&envelope("report", report)).expect("json");
            if let Err(e) = emit(&text, job.out.as_deref()) {
                eprintln!("cannot write report: {e}");
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let transcript = envelope("error", json!({ "code": e.exit_code(), "message": e.to_string() }));
            eprintln!("{}", serde_json::to_string_pretty(&transcript).expect("json"));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
