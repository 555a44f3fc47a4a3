//! `qrmw` — batch front end for the multi-wavelength quantum image library.
//!
//! Every command reads ordinary files, writes to stdout or `-o`, and is
//! byte-deterministic given identical inputs (and seeds, where sampling is
//! involved). Exit codes: 0 success, 1 verification mismatch, 2 bad
//! arguments, 3 I/O failure, 4 validation failure.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qrmw::circuit::{build_preparation_circuit, count_image_ops, Circuit, PrepMode};
use qrmw::colorops::{apply_operator, parse_operator_spec};
use qrmw::compress::{build_compressed_circuit, compression_report, minimize_image, CompressMode};
use qrmw::costs::{prep_cost, qubit_counts, Model};
use qrmw::sim::{run_statevector, sample_measurements, statevector_from_symbolic};
use qrmw::{ClassicalImage, QrmwState64, StateVector64};

#[derive(Parser)]
#[command(
    name = "qrmw",
    version,
    about = "Encode, compress, transform, and verify multi-wavelength quantum images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodeModeArg {
    /// Count one color-setting operator per cell, including zero-color cells.
    Strict,
    /// Count color-setting operators for nonzero cells only.
    SkipZero,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompressModeArg {
    /// Minimum disjoint cube cover per color.
    Exact,
    /// Full-column grouping only.
    Paper,
}

impl From<EncodeModeArg> for PrepMode {
    fn from(mode: EncodeModeArg) -> Self {
        match mode {
            EncodeModeArg::Strict => PrepMode::Strict,
            EncodeModeArg::SkipZero => PrepMode::SkipZero,
        }
    }
}

impl From<CompressModeArg> for CompressMode {
    fn from(mode: CompressModeArg) -> Self {
        match mode {
            CompressModeArg::Exact => CompressMode::Exact,
            CompressModeArg::Paper => CompressMode::Paper,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize the state-preparation circuit for an image
    Encode {
        /// Image text file
        img: PathBuf,
        /// Write the circuit here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Operator-counting convention (the gate list is the same)
        #[arg(long, value_enum, default_value_t = EncodeModeArg::Strict)]
        mode: EncodeModeArg,
    },
    /// Round-trip an image through the symbolic state and print it back
    Decode {
        /// Image text file
        img: PathBuf,
        /// Write the round-tripped image here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Merge equal-color cells and report the operator savings
    Compress {
        /// Image text file
        img: PathBuf,
        /// Which minimizer to use
        #[arg(long, value_enum, default_value_t = CompressModeArg::Exact)]
        mode: CompressModeArg,
        /// Also write the compressed preparation circuit to this path
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Apply color/channel/position operators to an image
    Apply {
        /// Image text file
        img: PathBuf,
        /// Operators, applied left to right: cc[:mask], pc:<channel>[:mask],
        /// ch[:mask[:selector]], po[:mask[:selector]] (masks in binary)
        #[arg(required = true)]
        opspec: Vec<String>,
        /// Write the transformed image here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a circuit on the all-zero state and report outcomes
    Simulate {
        /// Circuit text file
        circuit: PathBuf,
        /// Draw this many measurement outcomes instead of listing probabilities
        #[arg(long, requires = "seed")]
        sample: Option<usize>,
        /// RNG seed for --sample (required with it; sampling is never ambient)
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check that all four synthesized circuits prepare the encoded state
    Verify {
        /// Image text file
        img: PathBuf,
        /// Largest acceptable amplitude deviation
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Compare register and operand costs across image models
    Compare {
        /// Color depth in bits
        #[arg(long)]
        q: u64,
        /// Grid exponent (images are 2^n x 2^n with four channels)
        #[arg(long)]
        n: u64,
    },
    /// Print geometry and operator-count statistics for an image
    Stats {
        /// Image text file
        img: PathBuf,
    },
    /// Convert a binary or ASCII PPM file to image text
    ImportPpm {
        /// PPM file (P3 or P6, power-of-two dimensions)
        ppm: PathBuf,
        /// Destination image text file
        #[arg(short, long)]
        output: PathBuf,
    },
}

/// Failure classes, each with a process exit code and a one-line message.
enum Failure {
    /// Exit 1: a verification found states that should match but do not.
    Mismatch(String),
    /// Exit 3: a file could not be read or written.
    Io(String),
    /// Exit 4: input content failed validation.
    Validation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Io(_) => 3,
            Failure::Validation(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Mismatch(m) | Failure::Io(m) | Failure::Validation(m) => m,
        }
    }
}

fn validation(err: qrmw::Error) -> Failure {
    Failure::Validation(err.to_string())
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|err| Failure::Io(format!("{}: {err}", path.display())))
}

fn load_image(path: &Path) -> Result<ClassicalImage, Failure> {
    ClassicalImage::from_text(&read_bytes(path)?)
        .map_err(|err| Failure::Validation(format!("{}: {err}", path.display())))
}

fn load_circuit(path: &Path) -> Result<Circuit, Failure> {
    let bytes = read_bytes(path)?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| Failure::Validation(format!("{}: not valid UTF-8", path.display())))?;
    Circuit::from_text(text)
        .map_err(|err| Failure::Validation(format!("{}: {err}", path.display())))
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(path) => {
            fs::write(path, bytes).map_err(|err| Failure::Io(format!("{}: {err}", path.display())))
        }
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|err| Failure::Io(format!("stdout: {err}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("qrmw: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Encode { img, output, mode } => {
            let image = load_image(&img)?;
            let circuit = build_preparation_circuit(&image, mode.into());
            write_output(output.as_deref(), circuit.to_text().as_bytes())
        }
        Command::Decode { img, output } => {
            let image = load_image(&img)?;
            let decoded = QrmwState64::encode(&image).decode();
            if decoded != image {
                return Err(Failure::Mismatch(
                    "decoded image differs from its source".into(),
                ));
            }
            write_output(output.as_deref(), &decoded.to_text())
        }
        Command::Compress { img, mode, emit } => {
            let image = load_image(&img)?;
            let report = compression_report(&image, mode.into()).map_err(validation)?;
            if let Some(path) = emit {
                let circuit = build_compressed_circuit(&image, mode.into()).map_err(validation)?;
                write_output(Some(&path), circuit.to_text().as_bytes())?;
            }
            let line = format!(
                "{{\"ops_before\":{},\"ops_after\":{},\"ratio_percent\":{:.2}}}\n",
                report.ops_before, report.ops_after, report.ratio_percent
            );
            write_output(None, line.as_bytes())
        }
        Command::Apply {
            img,
            opspec,
            output,
        } => {
            let image = load_image(&img)?;
            let geometry = *image.geometry();
            let mut state = QrmwState64::encode(&image);
            for text in &opspec {
                let spec = parse_operator_spec(text, &geometry).map_err(validation)?;
                state = apply_operator(&state, &spec).map_err(validation)?;
            }
            write_output(output.as_deref(), &state.decode().to_text())
        }
        Command::Simulate {
            circuit,
            sample,
            seed,
        } => {
            let circuit = load_circuit(&circuit)?;
            let sv: StateVector64 = run_statevector(&circuit).map_err(validation)?;
            let width = circuit.total_qubits();
            let mut out = String::new();
            match sample {
                Some(count) => {
                    let seed = seed.expect("clap enforces --seed with --sample");
                    let outcomes =
                        sample_measurements(&sv, 0..width, seed, count).map_err(validation)?;
                    for outcome in outcomes {
                        let _ = writeln!(out, "{outcome:0width$b}");
                    }
                }
                None => {
                    for (index, amp) in sv.amplitudes().iter().enumerate() {
                        let p = amp.norm_sqr();
                        if p > 1e-12 {
                            let _ = writeln!(out, "{index:0width$b} {p:.6}");
                        }
                    }
                }
            }
            write_output(None, out.as_bytes())
        }
        Command::Verify { img, tol } => {
            let image = load_image(&img)?;
            let state = QrmwState64::encode(&image);
            if state.decode() != image {
                return Err(Failure::Mismatch(
                    "decoded image differs from its source".into(),
                ));
            }
            let symbolic = statevector_from_symbolic(&state).map_err(validation)?;
            let circuits: [(&str, Circuit); 4] = [
                (
                    "strict",
                    build_preparation_circuit(&image, PrepMode::Strict),
                ),
                (
                    "skip-zero",
                    build_preparation_circuit(&image, PrepMode::SkipZero),
                ),
                (
                    "exact",
                    build_compressed_circuit(&image, CompressMode::Exact).map_err(validation)?,
                ),
                (
                    "paper",
                    build_compressed_circuit(&image, CompressMode::Paper).map_err(validation)?,
                ),
            ];
            let mut out = String::new();
            for (name, circuit) in &circuits {
                let run: StateVector64 = run_statevector(circuit).map_err(validation)?;
                let deviation = run.max_deviation(&symbolic).map_err(validation)?;
                if deviation > tol {
                    return Err(Failure::Mismatch(format!(
                        "{name} circuit deviates from the encoded state by {deviation:.3e} (tolerance {tol:.3e})"
                    )));
                }
                let _ = writeln!(out, "{name}: max deviation {deviation:.3e}");
            }
            let _ = writeln!(out, "verify: OK");
            write_output(None, out.as_bytes())
        }
        Command::Compare { q, n } => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{:<6} {:>7} {:>10} {:>7} {:>9} {:>13}",
                "model", "qubits", "arbitrary", "total", "step1", "step2"
            );
            for model in Model::ALL {
                let report = qubit_counts(model, q, n).map_err(validation)?;
                let (step1, step2) = prep_cost(model, q, n).map_err(validation)?;
                let _ = writeln!(
                    out,
                    "{:<6} {:>7} {:>10} {:>7} {:>9} {:>13}",
                    model.name(),
                    report.qubits,
                    report.arbitrary_qubits,
                    report.total_qubits(),
                    step1,
                    step2
                );
            }
            write_output(None, out.as_bytes())
        }
        Command::Stats { img } => {
            let image = load_image(&img)?;
            let g = *image.geometry();
            let strict = count_image_ops(&image, PrepMode::Strict);
            let skip = count_image_ops(&image, PrepMode::SkipZero);
            let nonzero = image.values().iter().filter(|&&v| v != 0).count();
            let mut out = String::new();
            let _ = writeln!(out, "color bits:        {}", g.color_bits());
            let _ = writeln!(out, "channels:          {}", g.channel_count());
            let _ = writeln!(out, "channel bits:      {}", g.channel_bits());
            let _ = writeln!(out, "rows:              {}", g.rows());
            let _ = writeln!(out, "cols:              {}", g.cols());
            let _ = writeln!(out, "total qubits:      {}", g.total_qubits());
            let _ = writeln!(out, "cells:             {}", g.value_count());
            let _ = writeln!(out, "nonzero cells:     {nonzero}");
            let _ = writeln!(out, "h gates:           {}", strict.h_gates);
            let _ = writeln!(out, "ops (strict):      {}", strict.omega_ops);
            let _ = writeln!(out, "ops (skip-zero):   {}", skip.omega_ops);
            let _ = writeln!(out, "mcx gates:         {}", strict.mcx_gates);
            for (label, mode) in [
                ("exact", CompressMode::Exact),
                ("paper", CompressMode::Paper),
            ] {
                if nonzero == 0 {
                    let _ = writeln!(out, "compress ({label}):  n/a (no nonzero cells)");
                } else {
                    let groups = minimize_image(&image, mode).map_err(validation)?;
                    let report = compression_report(&image, mode).map_err(validation)?;
                    let _ = writeln!(
                        out,
                        "compress ({label}):  {} groups, ratio {:.2}%",
                        groups.len(),
                        report.ratio_percent
                    );
                }
            }
            write_output(None, out.as_bytes())
        }
        Command::ImportPpm { ppm, output } => {
            let image = ClassicalImage::from_ppm(&read_bytes(&ppm)?)
                .map_err(|err| Failure::Validation(format!("{}: {err}", ppm.display())))?;
            write_output(Some(&output), &image.to_text())
        }
    }
}
