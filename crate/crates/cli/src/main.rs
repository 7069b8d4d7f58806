use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use curv4::families::{random_family, random_frame};
use curv4::linalg::sym_eigen;
use curv4::tensor_file::{read_frame, read_tensor, write_frame, write_tensor, Layout};
use curv4::{
    classify_with, is_weakly_einstein, kn_square, w_pm_blocks, ClassifyOptions, Classification, CurvTensor, Family,
    Frame, Sym2, Verdict,
};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_MALFORMED: u8 = 3;

#[derive(Parser)]
#[command(name = "curv4", version, about = "Weakly Einstein curvature tensors in dimension four")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family member and write it as a tensor file.
    Construct {
        #[command(subcommand)]
        family: FamilyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Decide whether a tensor is weakly Einstein.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Recover family, parameters and an adapted frame.
    Classify {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Also print the adapted frame.
        #[arg(long)]
        emit_frame: bool,
    },
    /// Random construct, rotate and classify round trips.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Print the reference examples and their classification.
    Examples,
}

#[derive(Args)]
struct OutputArgs {
    /// Frame file; the family is built in this frame.
    #[arg(long, global = true)]
    frame: Option<PathBuf>,
    /// Output path (default stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write a component list instead of the 6×6 matrix.
    #[arg(long, global = true)]
    components: bool,
}

#[derive(Subcommand)]
enum FamilyArgs {
    /// s = 0, e-eigenvalues μ, W± eigenvalues ±c.
    Thm1 {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        mu: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        c: Vec<f64>,
    },
    /// μ = (−λ, −μ, μ, λ) with λ > μ ≥ 0.
    Thm2 {
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        c: Vec<f64>,
    },
    /// μ = (−λ, −λ, λ, λ) with λ > 0.
    Thm3 {
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, allow_hyphen_values = true)]
        xi: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        c: Vec<f64>,
    },
    /// Kähler-type member of the two-double-eigenvalue family.
    Kahler {
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, allow_hyphen_values = true)]
        xi: f64,
    },
    /// The EPS tensor scaled by λ
    Eps {
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
    },
    /// Arbitrary diagonal prescription of e and W±.
    SingerThorpe {
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        mu: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        wplus: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        wminus: Vec<f64>,
    },
    /// R_ijkl = b_ik b_jl − b_il b_jk for a diagonal (4 values) or full (16 values) b.
    KnSquare {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        b: Vec<f64>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn malformed(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_MALFORMED, message: message.into() }
}

fn array<const N: usize>(name: &str, v: &[f64]) -> Result<[f64; N], Failure> {
    v.try_into().map_err(|_| usage(format!("--{name} takes {N} comma-separated values, got {}", v.len())))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| malformed(format!("cannot read {}: {e}", path.display())))
}

fn load_tensor(path: &Path) -> Result<CurvTensor, Failure> {
    read_tensor(&read_file(path)?).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

/// Rounds away representation noise and prints the shortest form.
fn num(x: f64) -> String {
    if x.abs() < 1e-12 {
        return "0".into();
    }
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|x| num(*x)).collect::<Vec<_>>().join(",")
}

fn spectrum_report(r: &CurvTensor) -> String {
    let b = w_pm_blocks(r, &Frame::identity());
    let wp = sym_eigen(&b.plus).map(|e| e.values).unwrap_or([f64::NAN; 3]);
    let wm = sym_eigen(&b.minus).map(|e| e.values).unwrap_or([f64::NAN; 3]);
    format!(
        "s={}\ne-spectrum={}\nW+ spectrum={}\nW- spectrum={}\n",
        num(r.scalar()),
        list(&r.einstein().eigen().values),
        list(&wp),
        list(&wm)
    )
}

fn build(family: &FamilyArgs, frame: &Frame) -> Result<CurvTensor, Failure> {
    let invalid = |e: curv4::FamilyError| usage(format!("invalid parameters: {e}"));
    let f = match family {
        FamilyArgs::Thm1 { mu, c } => Family::Thm1 { mu: array("mu", mu)?, c: array("c", c)? },
        FamilyArgs::Thm2 { s, lambda, mu, c } => Family::Thm2 { s: *s, lambda: *lambda, mu: *mu, c: array("c", c)? },
        FamilyArgs::Thm3 { s, lambda, xi, c } => Family::Thm3 { s: *s, lambda: *lambda, xi: *xi, c: array("c", c)? },
        FamilyArgs::Kahler { s, lambda, xi } => Family::KahlerType { s: *s, lambda: *lambda, xi: *xi },
        FamilyArgs::Eps { lambda } => Family::Eps { lambda: *lambda },
        FamilyArgs::SingerThorpe { s, mu, wplus, wminus } => Family::SingerThorpe {
            s: *s,
            mu: array("mu", mu)?,
            w_plus: array("wplus", wplus)?,
            w_minus: array("wminus", wminus)?,
        },
        FamilyArgs::KnSquare { b } => {
            let m = match b.len() {
                4 => Sym2::diagonal(array("b", b)?),
                16 => {
                    let m: [[f64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| b[4 * i + j]));
                    if (0..4).any(|i| (0..4).any(|j| m[i][j] != m[j][i])) {
                        return Err(usage("--b must be a symmetric 4×4 matrix"));
                    }
                    Sym2::from_matrix(&m)
                }
                n => return Err(usage(format!("--b takes 4 or 16 comma-separated values, got {n}"))),
            };
            return Ok(kn_square(&m).rotate(&frame.inverse()));
        }
    };
    f.build(frame).map_err(invalid)
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn construct(family: &FamilyArgs, output: &OutputArgs) -> Result<u8, Failure> {
    let frame = match &output.frame {
        Some(p) => read_frame(&read_file(p)?).map_err(|e| malformed(format!("{}: {e}", p.display())))?,
        None => Frame::identity(),
    };
    let r = build(family, &frame)?;
    let layout = if output.components { Layout::Components } else { Layout::Matrix6 };
    emit(output.out.as_deref(), &write_tensor(&r, layout))?;
    let report = spectrum_report(&r);
    if output.out.is_some() {
        print!("{report}");
    } else {
        eprint!("{report}");
    }
    Ok(0)
}

fn check(file: &Path, tol: f64) -> Result<u8, Failure> {
    let r = load_tensor(file)?;
    let rep = is_weakly_einstein(&r, tol);
    println!("weakly_einstein={}", rep.weakly_einstein);
    println!("trc_residual={:e}", rep.trc_residual);
    println!("iff_residual={:e}", rep.iff_residual);
    print!("{}", spectrum_report(&r));
    Ok(if rep.weakly_einstein { 0 } else { EXIT_NEGATIVE })
}

fn headline(c: &Classification) -> String {
    match (&c.verdict, &c.family) {
        (Verdict::Thm1, Some(Family::Thm1 { mu, c })) => format!("Thm1 mu={} c={}", list(mu), list(c)),
        (Verdict::Thm2, Some(Family::Thm2 { s, lambda, mu, c })) => {
            format!("Thm2 s={} lambda={} mu={} c={}", num(*s), num(*lambda), num(*mu), list(c))
        }
        (Verdict::Thm3, Some(Family::Thm3 { s, lambda, xi, c })) => {
            format!("Thm3 s={} lambda={} xi={} c={}", num(*s), num(*lambda), num(*xi), list(c))
        }
        (Verdict::Einstein, Some(Family::SingerThorpe { s, w_plus, w_minus, .. })) => {
            format!("Einstein s={} w+={} w-={}", num(*s), list(w_plus), list(w_minus))
        }
        (Verdict::NotWeaklyEinstein, _) => format!("NotWeaklyEinstein residual={:e}", c.report.residual),
        (v, _) => format!("{v} {}", c.note.as_deref().unwrap_or("")).trim_end().to_string(),
    }
}

fn classify_cmd(file: &Path, tol: f64, emit_frame: bool) -> Result<u8, Failure> {
    let r = load_tensor(file)?;
    let c = classify_with(&r, &ClassifyOptions::with_tol(tol));
    println!("{}", headline(&c));
    println!("multiplicity={}", c.multiplicity);
    println!("residual={:e}", c.residual());
    if let Some(err) = c.reconstruction_error {
        println!("reconstruction_error={err:e}");
    }
    if emit_frame {
        if let Some(f) = &c.frame {
            print!("{}", write_frame(f));
        }
    }
    Ok(if c.verdict.is_weakly_einstein() { 0 } else { EXIT_NEGATIVE })
}

fn expected(f: &Family) -> Verdict {
    match f {
        Family::Thm1 { .. } => Verdict::Thm1,
        Family::Thm2 { .. } | Family::Eps { .. } => Verdict::Thm2,
        _ => Verdict::Thm3,
    }
}

fn fuzz(n: u64, seed: u64, tol: f64) -> Result<u8, Failure> {
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let opts = ClassifyOptions::with_tol(tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut passed, mut worst) = (0u64, 0.0f64);
    let mut first_failure = None;
    for i in 0..n {
        let p = random_family(&mut rng);
        let r = p.build().expect("random parameters are admissible").rotate(&random_frame(&mut rng));
        let c = classify_with(&r, &opts);
        worst = worst.max(c.residual());
        let ok = c.verdict == expected(&p.family)
            && c.family.zip(c.frame).and_then(|(f, fr)| f.build(&fr).ok()).is_some_and(|b| b.max_abs_diff(&r) <= tol * r.scale());
        if ok {
            passed += 1;
        } else if first_failure.is_none() {
            first_failure = Some(format!("case {i}: {} expected {}, got {}", p.family.name(), expected(&p.family), c.verdict));
        }
    }
    println!("fuzz n={n} seed={seed} tol={tol:e}");
    println!("passed={passed} failed={}", n - passed);
    println!("worst_residual={worst:e}");
    if let Some(f) = first_failure {
        println!("first_failure: {f}");
    }
    Ok(if passed == n { 0 } else { EXIT_NEGATIVE })
}

fn examples() -> Result<u8, Failure> {
    let opts = ClassifyOptions::default();
    let cases: Vec<(&str, CurvTensor)> = vec![
        ("eps --lambda 1", curv4::eps(1.0).expect("λ = 1")),
        ("kn-square --b 1,1,1,-1", kn_square(&Sym2::diagonal([1.0, 1.0, 1.0, -1.0]))),
        ("kn-square --b 1,1,-1,-1", kn_square(&Sym2::diagonal([1.0, 1.0, -1.0, -1.0]))),
        ("kahler --s 8 --lambda 1 --xi 1", curv4::kahler_type(8.0, 1.0, 1.0, &Frame::identity()).expect("λ > 0")),
    ];
    for (name, r) in cases {
        println!("construct {name}");
        for line in spectrum_report(&r).lines() {
            println!("  {line}");
        }
        println!("  classify: {}", headline(&classify_with(&r, &opts)));
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Construct { family, output } => construct(family, output),
        Command::Check { file, tol } => check(file, *tol),
        Command::Classify { file, tol, emit_frame } => classify_cmd(file, *tol, *emit_frame),
        Command::Fuzz { n, seed, tol } => fuzz(*n, *seed, *tol),
        Command::Examples => examples(),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
