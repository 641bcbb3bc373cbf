//! Command-line front end for the carpet engine.
//!
//! Subcommands cover generation, symmetry classification, zero sets, box
//! dimension, field scans, tile systems, the verification suite, and image
//! rendering.  Reports are JSON on standard output unless an output path is
//! given; images always go to files.
//!
//! Exit codes: 0 success, 1 verification failure or internal inconsistency,
//! 2 usage or domain error, 3 capacity guard.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use carpets::analysis::{
    classify_symmetry, fractal_dimension, scan_field, zero_report, SymmetryClass, ZeroReport,
};
use carpets::carpet::{
    format_matrix_text, format_matrix_text_streaming, generate_recurrence, tensor_construction,
    CarpetParams,
};
use carpets::checks::{run_all, CheckOutcome, VerifyBounds};
use carpets::render::{default_palette, to_pbm, to_ppm};
use carpets::tiling::{aperiodicity_witness, assemble, build_tile_set, TileSet};
use carpets::{Error, FieldElement, FieldSpec, Result};

#[derive(Parser)]
#[command(
    name = "carpets",
    version,
    about = "Generate, analyze, tile, verify, and render self-similar carpets over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a carpet and write it in the matrix text format.
    Generate {
        /// Field descriptor: "p", "p^k", or "p^k/c0,...,ck".
        #[arg(long)]
        field: String,
        /// Multiplier, as an integer encoding of a field element.
        #[arg(long)]
        m: u64,
        /// Number of doubling steps; the side is p^depth.
        #[arg(long)]
        depth: u32,
        /// Construction backend; all backends produce identical bytes.
        #[arg(long, value_enum, default_value_t = Method::Recurrence)]
        method: Method,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify the symmetry group of the fundamental block's support.
    Classify {
        #[arg(long)]
        field: String,
        #[arg(long)]
        m: u64,
    },
    /// Report the zero set of the fundamental block, split into the regular
    /// family and sporadic remainder.
    Zeros {
        #[arg(long)]
        field: String,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Box-counting dimension of a carpet's support.
    Dimension {
        #[arg(long)]
        field: String,
        #[arg(long)]
        m: u64,
        /// Depth of the carpet to measure (side p^depth).
        #[arg(long, default_value_t = 1)]
        depth: u32,
    },
    /// List every multiplier whose block has zeros, one representative per
    /// inverse-and-Frobenius orbit.
    Scan {
        #[arg(long)]
        field: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the tile catalog of a carpet family; optionally reassemble a
    /// carpet from tiles or compute the empty-square witness sequence.
    Tiles {
        #[arg(long)]
        field: String,
        #[arg(long)]
        m: u64,
        /// Assemble the depth-d carpet from tiles, check it against the
        /// recurrence, and write it in the matrix text format.
        #[arg(long, value_name = "DEPTH", conflicts_with = "witness")]
        assemble: Option<u32>,
        /// Report the largest-empty-square side for depths 1..=DMAX.
        #[arg(long, value_name = "DMAX")]
        witness: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the named verification checks and report pass/fail per check.
    Verify {
        /// Only run checks whose name contains this substring.
        #[arg(long)]
        check: Option<String>,
        /// Largest prime swept (per-check defaults when omitted).
        #[arg(long)]
        p: Option<u64>,
        /// Largest depth swept (per-check defaults when omitted).
        #[arg(long)]
        dmax: Option<u32>,
        /// Largest prime for the sporadic-zero sweep (default 599).
        #[arg(long)]
        sporadic_max: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a carpet as a PBM support image or a palette-colored PPM.
    Render {
        #[arg(long)]
        field: String,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        depth: u32,
        #[arg(long, value_enum)]
        format: ImageFormat,
        /// Fold the palette so that the colors of e and -e coincide
        /// (PPM over a prime field only).
        #[arg(long)]
        symmetric: bool,
        /// Output file; images are never written to standard output.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Recurrence,
    Tensor,
    Stream,
}

#[derive(Clone, Copy, ValueEnum)]
enum ImageFormat {
    Pbm,
    Ppm,
}

/// Parameter header common to the JSON reports.
#[derive(Serialize)]
struct ParamsOut {
    field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    depth: Option<u32>,
}

impl ParamsOut {
    fn new(field: &FieldSpec, m: Option<u64>, depth: Option<u32>) -> Self {
        ParamsOut { field: field.descriptor(), m, depth }
    }
}

#[derive(Serialize)]
struct ClassifyOut {
    params: ParamsOut,
    symmetry: SymmetryClass,
}

#[derive(Serialize)]
struct ZerosOut {
    params: ParamsOut,
    #[serde(flatten)]
    report: ZeroReport,
}

#[derive(Serialize)]
struct DimensionOut {
    params: ParamsOut,
    dimension: carpets::analysis::DimensionReport,
}

#[derive(Serialize)]
struct ScanOut {
    params: ParamsOut,
    scan: Vec<u64>,
}

#[derive(Serialize)]
struct TilesOut<'a> {
    params: ParamsOut,
    #[serde(flatten)]
    catalog: &'a TileSet,
}

#[derive(Serialize)]
struct WitnessOut {
    params: ParamsOut,
    witness: Vec<usize>,
}

#[derive(Serialize)]
struct VerifyOut {
    bounds: VerifyBounds,
    pass: bool,
    checks: Vec<CheckOutcome>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{err}");
            match err {
                Error::Usage(_) | Error::Domain(_) => ExitCode::from(2),
                Error::Capacity(_) => ExitCode::from(3),
                Error::Internal(_) => ExitCode::from(1),
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Generate { field, m, depth, method, out } => {
            let (field, m) = parse_pair(&field, m)?;
            let params = CarpetParams::new(field, m, depth)?;
            let text = match method {
                Method::Recurrence => format_matrix_text(&generate_recurrence(&params)?),
                Method::Tensor => format_matrix_text(&tensor_construction(&params)?),
                Method::Stream => format_matrix_text_streaming(&params)?,
            };
            emit_text(&text, out.as_deref())?;
        }
        Command::Classify { field, m } => {
            let (field, element) = parse_pair(&field, m)?;
            let symmetry = classify_symmetry(&field, &element)?;
            let report = ClassifyOut {
                params: ParamsOut::new(&field, Some(m), None),
                symmetry,
            };
            emit_json(&report, None)?;
        }
        Command::Zeros { field, m, out } => {
            let (field, element) = parse_pair(&field, m)?;
            let report = zero_report(&field, &element)?;
            let report = ZerosOut {
                params: ParamsOut::new(&field, Some(m), None),
                report,
            };
            emit_json(&report, out.as_deref())?;
        }
        Command::Dimension { field, m, depth } => {
            let (field, element) = parse_pair(&field, m)?;
            let params = CarpetParams::new(field.clone(), element, depth)?;
            let carpet = generate_recurrence(&params)?;
            let dimension = fractal_dimension(&carpet.support()?)?;
            let report = DimensionOut {
                params: ParamsOut::new(&field, Some(m), Some(depth)),
                dimension,
            };
            emit_json(&report, None)?;
        }
        Command::Scan { field, out } => {
            let field: FieldSpec = field.parse()?;
            let scan = scan_field(&field)?;
            let report = ScanOut {
                params: ParamsOut::new(&field, None, None),
                scan,
            };
            emit_json(&report, out.as_deref())?;
        }
        Command::Tiles { field, m, assemble: assemble_depth, witness, out } => {
            let (field, element) = parse_pair(&field, m)?;
            if let Some(dmax) = witness {
                let witness = aperiodicity_witness(&field, &element, dmax)?;
                let report = WitnessOut {
                    params: ParamsOut::new(&field, Some(m), None),
                    witness,
                };
                emit_json(&report, out.as_deref())?;
            } else if let Some(depth) = assemble_depth {
                let tileset = build_tile_set(&field, &element)?;
                let assembled = assemble(&tileset, depth)?;
                let params = CarpetParams::new(field.clone(), element, depth)?;
                let reference = generate_recurrence(&params)?;
                if assembled.encodings() != reference.encodings() {
                    return Err(Error::internal(format!(
                        "assembled carpet differs from the recurrence for {} m={m} depth {depth}",
                        field.descriptor()
                    )));
                }
                emit_text(&format_matrix_text(&assembled), out.as_deref())?;
            } else {
                let tileset = build_tile_set(&field, &element)?;
                let report = TilesOut {
                    params: ParamsOut::new(&field, Some(m), None),
                    catalog: &tileset,
                };
                emit_json(&report, out.as_deref())?;
            }
        }
        Command::Verify { check, p, dmax, sporadic_max, out } => {
            let bounds = VerifyBounds {
                max_prime: p,
                depth_max: dmax,
                sporadic_max_prime: sporadic_max,
            };
            let checks = run_all(&bounds, check.as_deref())?;
            let pass = checks.iter().all(|c| c.pass);
            let report = VerifyOut { bounds, pass, checks };
            emit_json(&report, out.as_deref())?;
            if !pass {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Render { field, m, depth, format, symmetric, out } => {
            let (field, element) = parse_pair(&field, m)?;
            let params = CarpetParams::new(field.clone(), element, depth)?;
            let carpet = generate_recurrence(&params)?;
            let bytes = match format {
                ImageFormat::Pbm => {
                    if symmetric {
                        return Err(Error::usage(
                            "--symmetric folds a color palette; it applies to --format ppm",
                        ));
                    }
                    to_pbm(&carpet.support()?).into_bytes()
                }
                ImageFormat::Ppm => {
                    let palette = default_palette(&field, symmetric)?;
                    to_ppm(&carpet, &palette)?
                }
            };
            write_file(&out, &bytes)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_pair(descriptor: &str, m: u64) -> Result<(FieldSpec, FieldElement)> {
    let field: FieldSpec = descriptor.parse()?;
    let element = field.decode(m)?;
    Ok((field, element))
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::internal(format!("report serialization failed: {e}")))?;
    text.push('\n');
    emit_text(&text, out)
}

fn emit_text(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_file(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes)
        .map_err(|e| Error::usage(format!("cannot write {}: {e}", path.display())))
}
