use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use knotcurve::blocks::{validate_stick, StickKind};
use knotcurve::braid::{assemble_link, parse_braid};
use knotcurve::export::{
    to_csv, to_obj_polyline, to_obj_tube, CurveDocument, DEFAULT_SAMPLES_PER_UNIT,
    DEFAULT_TUBE_RADIUS, MESH_SAMPLES_PER_UNIT,
};
use knotcurve::lattice::{simplicity_gate, LatticeWord};
use knotcurve::verify::{verify_curves, VerificationReport, VerifyConfig};
use knotcurve::{Error, PiecewiseCurve};

const EXIT_PARSE: u8 = 2;
const EXIT_GATE: u8 = 3;
const EXIT_VERIFY: u8 = 4;
const EXIT_IO: u8 = 5;

#[derive(Parser)]
#[command(name = "knotcurve", version, about = "Closed C² curves of constant curvature from braid words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a braid word into a curve document and optional exports.
    Build {
        /// Braid word, e.g. "1 1 1" or "n=3; 1 -2".
        #[arg(long, allow_hyphen_values = true)]
        braid: String,
        #[arg(long)]
        out: PathBuf,
        /// OBJ polyline output.
        #[arg(long)]
        obj: Option<PathBuf>,
        /// OBJ tube mesh output.
        #[arg(long)]
        tube: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TUBE_RADIUS)]
        tube_radius: f64,
        /// CSV samples output.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// CSV samples per unit arclength.
        #[arg(long, default_value_t = DEFAULT_SAMPLES_PER_UNIT)]
        samples_per_unit: f64,
        /// Skip the verifier.
        #[arg(long)]
        no_verify: bool,
    },
    /// Verify the curves in a curve document.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Show the six sticks, optionally validating them.
    Sticks {
        /// One stick, e.g. "k-".
        #[arg(long, allow_hyphen_values = true)]
        name: Option<String>,
        #[arg(long)]
        validate: bool,
    },
    /// Run the simplicity gate on a lattice word.
    Lattice {
        /// Letters such as "I+ J+ I- J-".
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        closed: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn io(path: &Path, err: std::io::Error) -> Self {
        Self::new(EXIT_IO, format!("{}: {err}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::GateFailure { .. } | Error::ComponentsNotDisjoint => EXIT_GATE,
            Error::SeamMismatch { .. } => EXIT_VERIFY,
            _ => EXIT_PARSE,
        };
        Self::new(code, err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build {
            braid,
            out,
            obj,
            tube,
            tube_radius,
            csv,
            samples_per_unit,
            no_verify,
        } => build(BuildArgs {
            braid,
            out,
            obj,
            tube,
            tube_radius,
            csv,
            samples_per_unit,
            no_verify,
        }),
        Command::Verify { input, json } => verify(&input, json),
        Command::Sticks { name, validate } => sticks(name.as_deref(), validate),
        Command::Lattice { word, closed } => lattice(&word, closed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

struct BuildArgs {
    braid: String,
    out: PathBuf,
    obj: Option<PathBuf>,
    tube: Option<PathBuf>,
    tube_radius: f64,
    csv: Option<PathBuf>,
    samples_per_unit: f64,
    no_verify: bool,
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::io(path, e))
}

fn build(args: BuildArgs) -> Result<(), Failure> {
    if args.samples_per_unit.is_nan() || args.samples_per_unit <= 0.0 {
        return Err(Failure::new(EXIT_PARSE, "--samples-per-unit must be positive"));
    }
    if args.tube_radius.is_nan() || args.tube_radius <= 0.0 {
        return Err(Failure::new(EXIT_PARSE, "--tube-radius must be positive"));
    }
    let braid = parse_braid(&args.braid)?;
    let link = assemble_link(&braid)?;
    let curves = &link.curves;
    println!(
        "{braid}: {} component(s), {} segment(s), lattice height {}",
        curves.len(),
        curves.iter().map(PiecewiseCurve::len).sum::<usize>(),
        link.plan.height
    );

    let mut doc = CurveDocument::from_curves(curves, Some(braid.to_string()));
    let report = (!args.no_verify).then(|| {
        let refs: Vec<&PiecewiseCurve> = curves.iter().collect();
        verify_curves(&refs, &VerifyConfig::default())
    });
    if let Some(r) = &report {
        doc = doc.with_verification(r.clone());
    }
    write(&args.out, &doc.to_json())?;
    if let Some(path) = &args.obj {
        write(path, &to_obj_polyline(curves, MESH_SAMPLES_PER_UNIT))?;
    }
    if let Some(path) = &args.tube {
        write(path, &to_obj_tube(curves, args.tube_radius, MESH_SAMPLES_PER_UNIT))?;
    }
    if let Some(path) = &args.csv {
        write(path, &to_csv(curves, args.samples_per_unit))?;
    }

    match report {
        Some(r) => {
            print_report(&r);
            if r.passed {
                Ok(())
            } else {
                Err(Failure::new(EXIT_VERIFY, "verification failed"))
            }
        }
        None => Ok(()),
    }
}

fn print_report(r: &VerificationReport) {
    for (i, c) in r.components.iter().enumerate() {
        println!(
            "component {i}: {} length {:.6}, {} segments, closure residual {:.3e}",
            if c.closed { "closed" } else { "open" },
            c.length,
            c.segments,
            c.closure_residual
        );
        println!(
            "  C2 joints {}: position {:.3e} tangent {:.3e} acceleration {:.3e} [{}]",
            c.c2.joints,
            c.c2.max_position,
            c.c2.max_tangent,
            c.c2.max_acceleration,
            pass(c.c2.passed)
        );
        println!(
            "  curvature analytic [{}, {}] fd [{:.9}, {:.9}] over {} samples ({} at joints) [{}]",
            c.curvature.analytic_min,
            c.curvature.analytic_max,
            c.curvature.fd_min,
            c.curvature.fd_max,
            c.curvature.samples,
            c.curvature.joint_samples,
            pass(c.curvature.passed)
        );
    }
    let d = &r.distance;
    println!(
        "self-distance: {:?}, lower bound {:.6} (sampled {:.6} at step {}) [{}]",
        d.status,
        d.bound,
        d.sampled_min,
        d.step,
        pass(d.is_certified())
    );
    println!("verification: {}", pass(r.passed));
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn verify(input: &Path, json: bool) -> Result<(), Failure> {
    let text = fs::read_to_string(input).map_err(|e| Failure::io(input, e))?;
    let doc = CurveDocument::from_json(&text)?;
    let curves = doc.to_curves()?;
    let refs: Vec<&PiecewiseCurve> = curves.iter().collect();
    let report = verify_curves(&refs, &VerifyConfig::default());
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("reports are serializable")
        );
    } else {
        print_report(&report);
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::new(EXIT_VERIFY, "verification failed"))
    }
}

fn sticks(name: Option<&str>, validate: bool) -> Result<(), Failure> {
    let kinds = match name {
        Some(n) => vec![n.parse::<StickKind>()?],
        None => StickKind::ALL.to_vec(),
    };
    let mut all_passed = true;
    for kind in kinds {
        let d = kind.displacement() / std::f64::consts::PI;
        println!(
            "{kind}: {} ({} pieces), displacement ({}π, {}π, {}π)",
            kind.word_str(),
            kind.word().len(),
            d.x.round(),
            d.y.round(),
            d.z.round()
        );
        if validate {
            let r = validate_stick(kind);
            println!(
                "  frames: initial {:.3e} terminal {:.3e}; displacement error {:.3e}",
                r.initial_frame_error, r.terminal_frame_error, r.displacement_error
            );
            println!(
                "  curvature fd [{:.9}, {:.9}] over {} samples [{}]",
                r.curvature.fd_min,
                r.curvature.fd_max,
                r.curvature.samples,
                pass(r.curvature.passed)
            );
            println!(
                "  self-distance {:?} bound {:.6} [{}]",
                r.distance.status,
                r.distance.bound,
                pass(r.distance.is_certified())
            );
            if let Some(t) = &r.tube {
                println!(
                    "  tube max {:.6} <= {:.6} [{}]",
                    t.max_distance,
                    t.radius,
                    pass(t.passed)
                );
            }
            for f in &r.failures {
                println!("  failure: {f}");
            }
            println!("  {}", pass(r.passed()));
            all_passed &= r.passed();
        }
    }
    if all_passed {
        Ok(())
    } else {
        Err(Failure::new(EXIT_VERIFY, "stick validation failed"))
    }
}

fn lattice(word: &str, closed: bool) -> Result<(), Failure> {
    let word = LatticeWord::parse(word, closed)?;
    let report = simplicity_gate(&word);
    let d = word.displacement();
    println!(
        "{word} ({} letters, {}, net step ({}, {}, {}))",
        word.len(),
        if closed { "closed" } else { "open" },
        d[0],
        d[1],
        d[2]
    );
    println!("gate: {report}");
    if report.passed {
        Ok(())
    } else {
        Err(Failure::new(EXIT_GATE, "lattice gate failed"))
    }
}
