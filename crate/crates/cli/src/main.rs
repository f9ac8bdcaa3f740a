//! `conecollar` command-line tool.
//!
//! Exit codes: 0 success, 2 unreadable or malformed input, 3 input that parses
//! but is geometrically or topologically invalid, 4 a failed certificate or
//! verification run.

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use conecollar::bers::{bers_bound, random_events, run_ledger, Ledger, LedgerEvent};
use conecollar::collars::CollarAtlas;
use conecollar::document::{CertificateDocument, DocumentError, SurfaceDocument, WidthsTable};
use conecollar::oracle::equivalence::{self, EquivalenceConfig};
use conecollar::surface::{ConeSurface, Signature};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use render::PieceKind;

#[derive(Parser)]
#[command(name = "conecollar", version, about = "Collars and pants decompositions of hyperbolic cone-surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the collar width of every partition curve and cone point.
    Widths { surface: PathBuf },
    /// Certify that all collars are pairwise disjoint.
    Certify {
        surface: PathBuf,
        /// Write the certificate document here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Print the partition bound for signature (g, n), optionally replaying a ledger.
    Bers {
        genus: u32,
        cones: u32,
        /// JSON array of ledger events to replay.
        #[arg(long)]
        ledger: Option<PathBuf>,
        /// Replay a random legal event sequence drawn with this seed.
        #[arg(long, conflicts_with = "ledger")]
        seed: Option<u64>,
        /// Write the full ledger here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Draw a piece in the Poincaré disk as SVG.
    ///
    /// Parameters (half-angles phi in radians):
    ///   trirectangle LEG PHI;
    ///   ypiece L1 L2 L3;
    ///   vpiece PHI L1 L2;
    ///   jokershat PHI1 PHI2 L;
    ///   collar PIECE PARAMS... (a ypiece, vpiece or jokershat with collars shaded).
    #[command(verbatim_doc_comment, allow_negative_numbers = true)]
    Render {
        kind: String,
        #[arg(num_args = 1..)]
        params: Vec<String>,
        #[arg(long)]
        svg: PathBuf,
    },
    /// Check the closed forms against coordinate constructions.
    Verify {
        #[arg(long, default_value_t = EquivalenceConfig::default().seed)]
        seed: u64,
        /// Number of trirectangles and of hexagons; V-pieces and hats get a fifth of it.
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// An error together with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }

    fn failed(message: impl Into<String>) -> Self {
        Self { code: 4, message: message.into() }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self { code: 1, message: format!("{}: {e}", path.display()) }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure { code: 2, ..Failure::io(path, e) })
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::io(path, e))
}

fn load_surface(path: &Path) -> Result<(SurfaceDocument, ConeSurface), Failure> {
    let text = read(path)?;
    let doc = SurfaceDocument::from_json(&text).map_err(|e| Failure::parse(e.to_string()))?;
    match doc.to_surface() {
        Ok(s) => Ok((doc, s)),
        Err(DocumentError::Invalid(report)) => {
            let mut message = String::from("validation failed:");
            for e in report.failures() {
                let at = e.location.as_deref().map(|l| format!(" [{l}]")).unwrap_or_default();
                message.push_str(&format!("\n  {}{at}: {}", e.constraint, e.detail));
            }
            Err(Failure::invalid(message))
        }
        Err(e) => Err(Failure::parse(e.to_string())),
    }
}

fn atlas(s: &ConeSurface) -> Result<CollarAtlas, Failure> {
    CollarAtlas::build(s).map_err(|e| Failure::invalid(e.to_string()))
}

fn print_widths(t: &WidthsTable) {
    match t.phi_max {
        Some(phi) => println!("phi_max\t{phi}"),
        None => println!("phi_max\tnone (no cone points)"),
    }
    println!("curve\tlength\twidth");
    for g in &t.geodesics {
        println!("{}\t{}\t{}", g.id, g.length, g.width);
    }
    println!("cone\tangle\twidth");
    for c in &t.cones {
        println!("{}\t{}\t{}", c.index, c.angle, c.width);
    }
}

fn cmd_widths(path: &Path) -> Outcome {
    let (doc, s) = load_surface(path)?;
    print_widths(&WidthsTable::new(&doc, &atlas(&s)?));
    Ok(())
}

fn cmd_certify(path: &Path, json: Option<&Path>) -> Outcome {
    let (doc, s) = load_surface(path)?;
    let cert = CertificateDocument::new(&doc, &atlas(&s)?);
    println!("pants\tpair\tinequality\tseparation\trequired\tmargin\tok");
    for r in &cert.certificate.records {
        println!(
            "{}\t{} / {}\t{}\t{}\t{}\t{}\t{}",
            r.pants, r.first, r.second, r.inequality, r.separation, r.required, r.margin, r.passed
        );
    }
    for r in cert.certificate.warnings() {
        println!(
            "warning: near-degenerate margin {} between {} and {} in pants {}",
            r.margin, r.first, r.second, r.pants
        );
    }
    if let Some(out) = json {
        write(out, &cert.to_json())?;
    }
    match cert.min_margin {
        Some(m) if !cert.passed => Err(Failure::failed(format!("certificate failed: minimum margin {m}"))),
        Some(m) => {
            println!("certified: {} pair records, minimum margin {m}", cert.certificate.records.len());
            Ok(())
        }
        None => Err(Failure::failed("certificate has no records")),
    }
}

fn print_ledger(l: &Ledger) {
    println!("step\tevent\tboundary bound\tallowance 4 pi j (2g-2+n)\tnew geodesics (k: bound / allowance 4 pi k (2g-2+n))");
    for st in &l.steps {
        let new: Vec<String> = st
            .new_geodesics
            .iter()
            .map(|&k| {
                let g = &l.geodesics[k - 1];
                format!("{k}: {} / {}", g.bound, g.allowance)
            })
            .collect();
        let merged = if st.merged_with.is_empty() {
            String::new()
        } else {
            format!(" (coincides with {:?})", st.merged_with)
        };
        println!(
            "{}\t{}\t{}\t{}\t{}{merged}",
            st.step,
            st.event,
            st.boundary_bound,
            st.boundary_allowance,
            new.join(", ")
        );
    }
    println!("largest geodesic bound\t{}", l.max_geodesic_bound());
    println!("all bounds within allowance\t{}", l.bounds_hold());
}

fn cmd_bers(genus: u32, cones: u32, ledger: Option<&Path>, seed: Option<u64>, json: Option<&Path>) -> Outcome {
    let sig = Signature::new(genus, cones).map_err(|e| Failure::invalid(e.to_string()))?;
    let bound = bers_bound(sig).map_err(|e| Failure::invalid(e.to_string()))?;
    println!(
        "L({genus},{cones}) < 4 pi ({}) ({}) = {bound}",
        sig.curve_count(),
        sig.complexity()
    );
    let events: Option<Vec<LedgerEvent>> = match (ledger, seed) {
        (Some(path), _) => Some(serde_json::from_str(&read(path)?).map_err(|e| Failure::parse(e.to_string()))?),
        (None, Some(seed)) => Some(
            random_events(sig, &mut ChaCha8Rng::seed_from_u64(seed)).map_err(|e| Failure::invalid(e.to_string()))?,
        ),
        (None, None) => None,
    };
    if let Some(events) = events {
        let l = run_ledger(sig, &events).map_err(|e| Failure::invalid(e.to_string()))?;
        print_ledger(&l);
        if let Some(out) = json {
            write(out, &serde_json::to_string_pretty(&l).expect("ledgers serialize"))?;
        }
    } else if json.is_some() {
        return Err(Failure::parse("--json needs a ledger (--ledger or --seed)"));
    }
    Ok(())
}

fn parse_numbers(params: &[String]) -> Result<Vec<f64>, Failure> {
    params
        .iter()
        .map(|p| p.parse::<f64>().map_err(|_| Failure::parse(format!("not a number: {p:?}"))))
        .collect()
}

fn cmd_render(kind: &str, params: &[String], svg: &Path) -> Outcome {
    let (piece, params, shade) = if kind == "collar" {
        let (first, rest) = params
            .split_first()
            .ok_or_else(|| Failure::parse("collar needs a piece kind and its parameters"))?;
        let piece = PieceKind::parse(first)
            .filter(|k| *k != PieceKind::Trirectangle)
            .ok_or_else(|| Failure::parse(format!("collar piece must be ypiece, vpiece or jokershat, got {first:?}")))?;
        (piece, rest, true)
    } else {
        let piece = PieceKind::parse(kind).ok_or_else(|| Failure::parse(format!("unknown kind {kind:?}")))?;
        (piece, params, false)
    };
    let numbers = parse_numbers(params)?;
    if numbers.len() != piece.arity() {
        return Err(Failure::parse(format!(
            "{kind} takes {} parameters, got {}",
            piece.arity(),
            numbers.len()
        )));
    }
    let text = render::render(piece, &numbers, shade).map_err(|e| Failure::invalid(e.to_string()))?;
    write(svg, &text)?;
    println!("wrote {}", svg.display());
    Ok(())
}

fn cmd_verify(seed: u64, count: usize, json: Option<&Path>) -> Outcome {
    let config = EquivalenceConfig {
        seed,
        trirectangles: count,
        hexagons: count,
        pentagons: count / 5,
        hats: count / 5,
    };
    let report = equivalence::run(&config);
    println!(
        "check\tinstances\tfailures\tmax error (tol {:e})\tmax right-angle error (tol {:e})\trejected draws",
        equivalence::LENGTH_TOLERANCE,
        equivalence::RIGHT_ANGLE_TOLERANCE
    );
    for c in &report.checks {
        println!(
            "{}\t{}\t{}\t{:e}\t{:e}\t{}",
            c.name, c.instances, c.failures, c.max_error, c.max_right_angle_error, c.rejected
        );
    }
    if let Some(out) = json {
        write(out, &serde_json::to_string_pretty(&report).expect("reports serialize"))?;
    }
    if report.passed() {
        Ok(())
    } else {
        let worst: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| format!("{}: {}", c.name, c.worst.as_deref().unwrap_or("?")))
            .collect();
        Err(Failure::failed(format!("verification failed; worst cases: {}", worst.join("; "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Widths { surface } => cmd_widths(surface),
        Command::Certify { surface, json } => cmd_certify(surface, json.as_deref()),
        Command::Bers { genus, cones, ledger, seed, json } => {
            cmd_bers(*genus, *cones, ledger.as_deref(), *seed, json.as_deref())
        }
        Command::Render { kind, params, svg } => cmd_render(kind, params, svg),
        Command::Verify { seed, count, json } => cmd_verify(*seed, *count, json.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
