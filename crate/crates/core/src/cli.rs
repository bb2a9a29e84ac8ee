//! Command-line front end. Every subcommand resolves its inputs into the same
//! request types the HTTP service accepts and calls the same handlers, so the
//! JSON printed here is byte-identical to the service response.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::decoy::{
    click_histogram, invert_statistics, read_click_records, select_passive_decoys, DecoyWeights,
    TmdConfig,
};
use crate::error::{Error, Result};
use crate::hardware::ProtocolKind;
use crate::numerics::DistributionVec;
use crate::scenarios::{
    apply_override, preset, presets, Scenario, CSV_HEADER, SweepSpec, SweepVariable,
    DEFAULT_RATE_FLOOR,
};
use crate::service::{
    self, CurveDocument, MaxDistanceRequest, OptimizeRequest, RateRequest, ServiceConfig,
    SimulateRequest,
};
use crate::sim::{simulate_bb84, simulate_sarg04, write_transcript_csv, AttackKind, AttackSpec, StageProtocol};

#[derive(Debug, Parser)]
#[command(name = "qkdrate", version, about = "QKD secret-key-rate toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rate at a single configuration
    Rate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rate curve over a grid of one variable
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// length, e_det, eta_det, p_dark, alpha or mean_photons
        #[arg(long, default_value = "length")]
        variable: String,
        /// lo:hi:n
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Mean photon number maximizing the rate at one length
    OptimizeMu {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        length: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Largest length with rate above the floor
    MaxDistance {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        floor: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte-Carlo of the quantum stage
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_enum)]
        stage: Option<Stage>,
        #[arg(long, default_value_t = 100_000)]
        pulses: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "none")]
        attack: Attack,
        /// Fraction of attacked pulses
        #[arg(long, default_value_t = 1.0)]
        fraction: f64,
        /// Write the per-pulse transcript as CSV
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Recover the sent photon-number distribution from TMD click records
    TmdInvert {
        /// One click count per line; `-` reads stdin
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 8)]
        bins: usize,
        #[arg(long, default_value_t = 0.7)]
        tmd_efficiency: f64,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        /// Passive decoy weights such as `0:0.1,1:0.9,*:0.5`
        #[arg(long)]
        weights: Option<String>,
        #[arg(long, default_value_t = crate::decoy::DEFAULT_MIN_SUBSET)]
        min_subset: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List the built-in presets
    Presets {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Start the HTTP service
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Origin allowed to call the API from a browser, `*` for any
        #[arg(long)]
        allow_origin: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    #[arg(long, default_value = "standard")]
    pub preset: String,
    /// JSON request body; replaces the preset
    #[arg(long)]
    pub request: Option<PathBuf>,
    #[arg(long)]
    pub protocol: Option<String>,
    /// Override a field, e.g. `p_dark=1e-7` or `hardware.detector.efficiency=0.1`
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Stage {
    Bb84,
    Sarg04,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Attack {
    None,
    InterceptResend,
    Pns,
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Validation(_) | Error::UnknownPreset { .. } => 2,
                _ => 1,
            }
        }
    }
}

fn io_err(e: io::Error) -> Error {
    if e.kind() == io::ErrorKind::BrokenPipe {
        // downstream reader (e.g. `head`) went away
        std::process::exit(0);
    }
    Error::Domain(format!("i/o: {e}"))
}

fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(File::create(p).map_err(io_err)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_json<T: Serialize>(doc: &T, out: &Option<PathBuf>) -> Result<()> {
    let mut w = open_output(out)?;
    w.write_all(&service::to_json_bytes(doc)).map_err(io_err)?;
    writeln!(w).map_err(io_err)?;
    w.flush().map_err(io_err)
}

/// Read a request file, or build the request from the preset.
fn load_request<T: DeserializeOwned>(args: &ScenarioArgs, extra: impl FnOnce(&mut Value)) -> Result<T> {
    let mut value = match &args.request {
        Some(path) => {
            let f = File::open(path).map_err(io_err)?;
            serde_json::from_reader(BufReader::new(f))
                .map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?
        }
        None => serde_json::to_value(preset(&args.preset)?.scenario).expect("scenario serializes"),
    };
    let mut scenario: Scenario = serde_json::from_value(value.clone())
        .map_err(|e| Error::Domain(format!("request: {e}")))?;
    if let Some(p) = &args.protocol {
        scenario = scenario.with_protocol(p.parse::<ProtocolKind>()?);
    }
    for o in &args.overrides {
        let (k, v) = o
            .split_once('=')
            .ok_or_else(|| Error::Domain(format!("--set expects KEY=VALUE, got '{o}'")))?;
        scenario = apply_override(&scenario, k.trim(), v.trim())?;
    }
    let obj = value.as_object_mut().expect("request is an object");
    if let Value::Object(fields) = serde_json::to_value(&scenario).expect("scenario serializes") {
        obj.extend(fields);
    }
    extra(&mut value);
    serde_json::from_value(value).map_err(|e| Error::Domain(format!("request: {e}")))
}

fn write_curve(doc: &CurveDocument, output: &OutputArgs) -> Result<()> {
    match output.format {
        Format::Json => emit_json(doc, &output.out),
        Format::Csv => {
            let mut w = open_output(&output.out)?;
            writeln!(w, "{CSV_HEADER}").map_err(io_err)?;
            for p in &doc.points {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    p.length_km,
                    p.secret_rate_bits_per_pulse,
                    p.bits_per_second,
                    p.gain,
                    p.qber,
                    p.omega,
                    p.e1
                )
                .map_err(io_err)?;
            }
            w.flush().map_err(io_err)
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Rate { scenario, output } => {
            let req: RateRequest = load_request(&scenario, |v| {
                v.as_object_mut().unwrap().remove("sweep");
            })?;
            write_curve(&service::rate_curve(&req)?, &output)
        }
        Command::Sweep {
            scenario,
            variable,
            grid,
            output,
        } => {
            let variable: SweepVariable = variable.parse()?;
            let grid = grid.as_deref().map(SweepSpec::parse_grid).transpose()?;
            let mut req: RateRequest = load_request(&scenario, |_| {})?;
            match (grid, &req.sweep) {
                (Some(g), _) => req.sweep = Some(SweepSpec::new(variable, g)),
                (None, Some(_)) => {}
                (None, None) => {
                    req.sweep = Some(SweepSpec::new(variable, SweepSpec::parse_grid("0:200:201")?))
                }
            }
            write_curve(&service::rate_curve(&req)?, &output)
        }
        Command::OptimizeMu {
            scenario,
            length,
            output,
        } => {
            let mut req: OptimizeRequest = load_request(&scenario, |_| {})?;
            if length.is_some() {
                req.length_km = length;
            }
            let doc = service::optimize(&req)?;
            match output.format {
                Format::Json => emit_json(&doc, &output.out),
                Format::Csv => {
                    let mut w = open_output(&output.out)?;
                    writeln!(w, "mean_photons,{CSV_HEADER}").map_err(io_err)?;
                    let p = &doc.point;
                    writeln!(
                        w,
                        "{},{},{},{},{},{},{},{}",
                        doc.mean_photons,
                        p.length_km,
                        p.secret_rate_bits_per_pulse,
                        p.bits_per_second,
                        p.gain,
                        p.qber,
                        p.omega,
                        p.e1
                    )
                    .map_err(io_err)?;
                    w.flush().map_err(io_err)
                }
            }
        }
        Command::MaxDistance {
            scenario,
            floor,
            output,
        } => {
            let mut req: MaxDistanceRequest = load_request(&scenario, |_| {})?;
            if floor.is_some() {
                req.floor = floor;
            }
            let doc = service::max_distance(&req)?;
            match output.format {
                Format::Json => emit_json(&doc, &output.out),
                Format::Csv => {
                    let mut w = open_output(&output.out)?;
                    writeln!(w, "max_distance_km,tolerable_loss_db,floor").map_err(io_err)?;
                    writeln!(
                        w,
                        "{},{},{}",
                        doc.max_distance_km,
                        doc.tolerable_loss_db,
                        doc.meta.floor.unwrap_or(DEFAULT_RATE_FLOOR)
                    )
                    .map_err(io_err)?;
                    w.flush().map_err(io_err)
                }
            }
        }
        Command::Simulate {
            scenario,
            stage,
            pulses,
            seed,
            attack,
            fraction,
            transcript,
            output,
        } => {
            let resolved: RateRequest = load_request(&scenario, |_| {})?;
            let s = resolved.scenario;
            let stage = match stage {
                Some(Stage::Sarg04) => StageProtocol::Sarg04,
                Some(Stage::Bb84) => StageProtocol::Bb84,
                None if s.protocol.kind == ProtocolKind::Sarg04 => StageProtocol::Sarg04,
                None => StageProtocol::Bb84,
            };
            let attack = match attack {
                Attack::None => AttackSpec::NONE,
                Attack::InterceptResend => AttackSpec::intercept_resend(fraction),
                Attack::Pns => AttackSpec {
                    kind: AttackKind::PhotonNumberSplitting,
                    fraction,
                },
            };
            let req = SimulateRequest {
                hardware: s.hardware.clone(),
                source: s.source.clone(),
                stage,
                attack,
                decoys: s.protocol.decoy_means.clone(),
                n_pulses: Some(pulses),
                seed,
            };
            let doc = service::simulate(&req)?;
            if let Some(path) = transcript {
                if attack.kind == AttackKind::PhotonNumberSplitting {
                    return Err(Error::Domain("no per-pulse transcript for the PNS demonstration".into()));
                }
                let t = match stage {
                    StageProtocol::Bb84 => simulate_bb84(pulses as usize, &s.hardware, &s.source, &attack, seed)?,
                    StageProtocol::Sarg04 => simulate_sarg04(pulses as usize, &s.hardware, &s.source, &attack, seed)?,
                };
                let f = File::create(&path).map_err(io_err)?;
                write_transcript_csv(&t, io::BufWriter::new(f)).map_err(io_err)?;
            }
            match output.format {
                Format::Json => emit_json(&doc, &output.out),
                Format::Csv => {
                    let mut w = open_output(&output.out)?;
                    if let Some(r) = &doc.pns {
                        writeln!(w, "intensity,pulses,clicks,measured_gain,expected_gain,z_score")
                            .map_err(io_err)?;
                        for g in std::iter::once(&r.signal).chain(&r.decoys) {
                            writeln!(
                                w,
                                "{},{},{},{},{},{}",
                                g.intensity, g.pulses, g.clicks, g.measured_gain, g.expected_gain, g.z_score
                            )
                            .map_err(io_err)?;
                        }
                    } else if let Some(c) = &doc.counts {
                        writeln!(w, "pulses,clicks,conclusive,errors,gain,qber,sift_fraction")
                            .map_err(io_err)?;
                        writeln!(
                            w,
                            "{},{},{},{},{},{},{}",
                            c.pulses,
                            c.clicks,
                            c.conclusive,
                            c.errors,
                            c.gain(),
                            c.qber(),
                            c.sift_fraction()
                        )
                        .map_err(io_err)?;
                    }
                    w.flush().map_err(io_err)
                }
            }
        }
        Command::TmdInvert {
            input,
            bins,
            tmd_efficiency,
            n_max,
            weights,
            min_subset,
            seed,
            output,
        } => {
            let records = if input.as_os_str() == "-" {
                read_click_records(io::stdin().lock())?
            } else {
                read_click_records(BufReader::new(File::open(&input).map_err(io_err)?))?
            };
            let cfg = TmdConfig {
                bins,
                tmd_efficiency,
                n_max,
            };
            let mut sets: Vec<(&str, DistributionVec)> = vec![("all", click_histogram(&records, n_max))];
            if let Some(spec) = weights {
                let w = DecoyWeights::parse(&spec)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let sel = select_passive_decoys(&records, &w, min_subset, &mut rng)?;
                sets.push(("signal", sel.signal_stats));
                sets.push(("decoy", sel.decoy_stats));
            }
            let mut results = Vec::new();
            for (name, hist) in sets {
                let inv = invert_statistics(&hist, &cfg)?;
                results.push((name, hist, inv));
            }
            match output.format {
                Format::Json => {
                    let doc: Vec<Value> = results
                        .iter()
                        .map(|(name, hist, inv)| {
                            serde_json::json!({
                                "subset": name,
                                "measured": hist.entries(),
                                "recovered": inv.distribution.entries(),
                                "unclipped": inv.unclipped.entries(),
                                "residual_l1": inv.residual_l1,
                            })
                        })
                        .collect();
                    emit_json(&serde_json::json!({ "config": cfg, "subsets": doc }), &output.out)
                }
                Format::Csv => {
                    let mut w = open_output(&output.out)?;
                    writeln!(w, "subset,n,measured,recovered").map_err(io_err)?;
                    for (name, hist, inv) in &results {
                        for n in 0..=n_max {
                            writeln!(w, "{name},{n},{},{}", hist.get(n), inv.distribution.get(n))
                                .map_err(io_err)?;
                        }
                    }
                    w.flush().map_err(io_err)
                }
            }
        }
        Command::Presets { output } => match output.format {
            Format::Json => emit_json(&presets(), &output.out),
            Format::Csv => {
                let mut w = open_output(&output.out)?;
                writeln!(w, "name,protocol,provenance").map_err(io_err)?;
                for p in presets() {
                    writeln!(
                        w,
                        "{},{},\"{}\"",
                        p.name,
                        p.scenario.protocol.kind.name(),
                        p.provenance.replace('"', "'")
                    )
                    .map_err(io_err)?;
                }
                w.flush().map_err(io_err)
            }
        },
        Command::Serve {
            port,
            host,
            allow_origin,
        } => {
            let addr: SocketAddr = format!("{host}:{port}")
                .parse()
                .map_err(|e| Error::Domain(format!("bad address: {e}")))?;
            let rt = tokio::runtime::Runtime::new().map_err(io_err)?;
            rt.block_on(service::serve(addr, ServiceConfig { allow_origin }))
                .map_err(io_err)
        }
    }
}
