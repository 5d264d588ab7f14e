use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use biphoton::config::{AutoOr, BandwidthConfig, BandwidthConvention, BandwidthUnit, Keyword, RunConfig, ScanConfig};
use biphoton::dispersion::{dispersion_params, find_symmetric_pump_wavelength, CrystalSpec};
use biphoton::grid::MismatchMode;
use biphoton::io::{freq_grid_csv, pattern_csv, time_grid_csv, to_json, Bundle};
use biphoton::scenarios::{list_scenarios, run_scenario, scenario};
use biphoton::spectral::{
    bridge_axes, joint_spectral_amplitude, spectral_diagnostics, time_domain_wavefunction, BridgeOptions,
};
use biphoton::temporal::{
    amplitude, coincidence_rate, interference_scan, interference_scan_from_wavefunction, peak_dip_visibility,
    wavefunction_grid, Setup,
};
use biphoton::units::{nm_to_um, um_to_nm};
use biphoton::{Error, Result};

/// Two-photon states from pulsed type-II down-conversion.
#[derive(Parser)]
#[command(name = "biphoton", version, about)]
struct Cli {
    /// Worker threads for data-parallel kernels (results do not depend on it).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the walk-off coefficients for the configured crystal and pump as JSON.
    Dispersion(Common),
    /// Find the pump wavelength where D+ vanishes.
    ScanSymmetric {
        /// Built-in crystal name.
        #[arg(long, default_value = "BBO")]
        crystal: String,
        /// Search window, e.g. 600:900nm.
        #[arg(long, default_value = "600:900nm")]
        window: String,
    },
    /// Write a time-domain amplitude bundle.
    Wavefunction {
        #[arg(long, value_enum, default_value = "analytic-pi")]
        kind: WaveKind,
        #[command(flatten)]
        common: Common,
    },
    /// Write a coincidence-rate scan over the analyzer delay. For the synthesizer the
    /// reported visibility contrasts parallel and crossed analyzers at --tau-fs.
    Interference {
        /// Interferometer; defaults to the configured setup.
        #[arg(long, value_enum)]
        mode: Option<SetupArg>,
        #[command(flatten)]
        common: Common,
    },
    /// Write the joint spectral amplitude and its correlation diagnostics.
    Spectrum(Common),
    /// Run a named scenario; exits 4 if any of its expectations fail.
    Scenario {
        id: String,
        /// Parent directory of the scenario bundle.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// List scenario ids with descriptions.
    ListScenarios,
}

#[derive(Clone, Copy, ValueEnum)]
enum WaveKind {
    Standard,
    Synthesizer,
    AnalyticPi,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetupArg {
    Standard,
    Synthesizer,
}

#[derive(Clone, Copy, ValueEnum)]
enum MismatchArg {
    Exact,
    Linear,
}

/// Run parameters. Precedence: scenario preset, then config file, then flags.
#[derive(Args, Default)]
struct Common {
    /// JSON run configuration.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Start from a scenario's configuration.
    #[arg(long, value_name = "ID")]
    scenario_like: Option<String>,
    /// Built-in crystal name.
    #[arg(long)]
    crystal: Option<String>,
    /// Crystal length in um.
    #[arg(long, value_name = "UM")]
    length_um: Option<f64>,
    /// Fixed cut angle in degrees instead of the phase-matching angle.
    #[arg(long, value_name = "DEG")]
    cut_angle_deg: Option<f64>,
    /// Pump center wavelength in nm.
    #[arg(long, value_name = "NM")]
    pump_nm: Option<f64>,
    /// Pump at the wavelength where D+ vanishes.
    #[arg(long, conflicts_with = "pump_nm")]
    symmetric_pump: bool,
    /// Pump intensity-FWHM bandwidth in nm.
    #[arg(long, value_name = "NM")]
    bandwidth_nm: Option<f64>,
    /// Pump intensity-FWHM duration in fs.
    #[arg(long, value_name = "FS", conflicts_with = "bandwidth_nm")]
    duration_fs: Option<f64>,
    /// Continuous-wave pump.
    #[arg(long)]
    cw: bool,
    /// First analyzer angle in degrees.
    #[arg(long, value_name = "DEG", allow_hyphen_values = true)]
    theta1_deg: Option<f64>,
    /// Second analyzer angle in degrees.
    #[arg(long, value_name = "DEG", allow_hyphen_values = true)]
    theta2_deg: Option<f64>,
    /// Single analyzer delay in fs.
    #[arg(long, value_name = "FS", allow_hyphen_values = true)]
    tau_fs: Option<f64>,
    /// Delay scan start in fs.
    #[arg(long, value_name = "FS", allow_hyphen_values = true, requires = "to_fs")]
    from_fs: Option<f64>,
    /// Delay scan end in fs.
    #[arg(long, value_name = "FS", allow_hyphen_values = true, requires = "from_fs")]
    to_fs: Option<f64>,
    /// Number of delay samples.
    #[arg(long)]
    samples: Option<usize>,
    /// Nodes per time axis.
    #[arg(long)]
    time_nodes: Option<usize>,
    /// Nodes per frequency axis.
    #[arg(long)]
    freq_nodes: Option<usize>,
    /// Phase-mismatch model for spectra.
    #[arg(long, value_enum)]
    mismatch: Option<MismatchArg>,
    /// Output directory for the bundle.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

const DEFAULT_SCAN_SAMPLES: usize = 61;

impl Common {
    fn run_config(&self) -> Result<RunConfig> {
        let base = match &self.scenario_like {
            Some(id) => scenario(id)?.config,
            None => RunConfig::default(),
        };
        let mut value = serde_json::to_value(&base)?;
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidParameter(format!("cannot read config {}: {e}", path.display())))?;
            merge(&mut value, serde_json::from_str(&text)?);
        }
        let mut c: RunConfig = serde_json::from_value(value)?;
        if let Some(v) = &self.crystal {
            c.crystal.name = v.clone();
            c.crystal.sellmeier = None;
        }
        if let Some(v) = self.length_um {
            c.crystal.length_um = v;
        }
        if let Some(v) = self.cut_angle_deg {
            c.crystal.cut_angle_deg = AutoOr::Value(v);
        }
        if let Some(v) = self.pump_nm {
            c.pump.center_nm = AutoOr::Value(v);
        }
        if self.symmetric_pump {
            c.pump.center_nm = AutoOr::Keyword(Keyword::Symmetric);
        }
        let bandwidth = |value, unit| BandwidthConfig {
            value,
            unit,
            convention: BandwidthConvention::IntensityFwhm,
        };
        if let Some(v) = self.bandwidth_nm {
            c.pump.bandwidth = Some(bandwidth(v, BandwidthUnit::Nm));
            c.pump.cw = false;
        }
        if let Some(v) = self.duration_fs {
            c.pump.bandwidth = Some(bandwidth(v, BandwidthUnit::Fs));
            c.pump.cw = false;
        }
        if self.cw {
            c.pump.cw = true;
        }
        if let Some(v) = self.theta1_deg {
            c.analyzers.theta1_deg = v;
        }
        if let Some(v) = self.theta2_deg {
            c.analyzers.theta2_deg = v;
        }
        if let Some(v) = self.tau_fs {
            c.analyzers.tau_fs = v;
        }
        if let (Some(from_fs), Some(to_fs)) = (self.from_fs, self.to_fs) {
            let samples = self
                .samples
                .or(c.analyzers.scan.map(|s| s.samples))
                .unwrap_or(DEFAULT_SCAN_SAMPLES);
            c.analyzers.scan = Some(ScanConfig {
                from_fs,
                to_fs,
                samples,
            });
        } else if let (Some(n), Some(s)) = (self.samples, c.analyzers.scan.as_mut()) {
            s.samples = n;
        }
        if let Some(v) = self.time_nodes {
            c.grid.time_nodes = v;
        }
        if let Some(v) = self.freq_nodes {
            c.grid.freq_nodes = v;
        }
        if let Some(m) = self.mismatch {
            c.mismatch = match m {
                MismatchArg::Exact => MismatchMode::Exact,
                MismatchArg::Linear => MismatchMode::Linear,
            };
        }
        if let Some(o) = &self.out {
            c.output = Some(o.clone());
        }
        c.validate()?;
        Ok(c)
    }
}

fn out_dir(c: &RunConfig, fallback: &str) -> PathBuf {
    c.output.clone().unwrap_or_else(|| Path::new("out").join(fallback))
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    emit(&to_json(v)?);
    Ok(())
}

fn meta(command: &str, c: &RunConfig, extra: Value) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "config": c,
        "run": extra,
    })
}

fn parse_window(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::InvalidParameter(format!("window {s:?} must look like 600:900nm"));
    let body = s.trim().strip_suffix("nm").unwrap_or(s.trim());
    let (lo, hi) = body.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi > lo) {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn dispersion_cmd(common: &Common) -> Result<u8> {
    let r = common.run_config()?.resolve()?;
    print_json(&r.dispersion()?)?;
    Ok(0)
}

fn scan_symmetric(crystal: &str, window: &str) -> Result<u8> {
    let (lo, hi) = parse_window(window)?;
    let spec = CrystalSpec::builtin(crystal, 1000.0)
        .map_err(|_| Error::InvalidParameter(format!("unknown crystal {crystal:?}")))?;
    let star = find_symmetric_pump_wavelength(&spec, (nm_to_um(lo), nm_to_um(hi)))?;
    print_json(&json!({
        "crystal": crystal,
        "window_nm": [lo, hi],
        "symmetric_wavelength_nm": um_to_nm(star),
    }))?;
    Ok(0)
}

fn wavefunction_cmd(kind: WaveKind, common: &Common) -> Result<u8> {
    let c = common.run_config()?;
    let r = c.resolve()?;
    let disp = r.dispersion()?;
    let axes = r.time_axes(&disp, r.analyzers.tau)?;
    let (grid, setup) = match kind {
        WaveKind::AnalyticPi => (wavefunction_grid(&axes, &disp, &r.pump)?, None),
        WaveKind::Standard => (
            amplitude(Setup::Standard, &axes, &disp, &r.pump, &r.analyzers)?,
            Some(Setup::Standard),
        ),
        WaveKind::Synthesizer => (
            amplitude(Setup::Synthesizer, &axes, &disp, &r.pump, &r.analyzers)?,
            Some(Setup::Synthesizer),
        ),
    };
    let report = json!({
        "kind": grid.meta.kind,
        "setup": setup,
        "energy": grid.energy(),
        "coincidence_rate": coincidence_rate(&grid)?,
        "t_plus_invariant": grid.meta.t_plus_invariant,
        "warnings": grid.meta.warnings,
    });
    let mut b = Bundle::new();
    b.add("grid.csv", time_grid_csv(&grid));
    b.add_json(
        "meta.json",
        &meta("wavefunction", &c, json!({ "dispersion": disp, "pump": r.pump })),
    )?;
    b.add_json("report.json", &report)?;
    b.write_atomic(&out_dir(&c, "wavefunction"))?;
    print_json(&report)?;
    Ok(0)
}

fn interference_cmd(mode: Option<SetupArg>, common: &Common) -> Result<u8> {
    let mut c = common.run_config()?;
    if let Some(m) = mode {
        c.setup = match m {
            SetupArg::Standard => Setup::Standard,
            SetupArg::Synthesizer => Setup::Synthesizer,
        };
    }
    let r = c.resolve()?;
    let disp = r.dispersion()?;
    let taus = r.scan_taus(&disp, DEFAULT_SCAN_SAMPLES);
    let (t1, t2) = (r.analyzers.theta1, r.analyzers.theta2);
    let n = r.grid.time_nodes;
    // filters act on the spectrum, so filtered runs scan the Fourier-bridged wavefunction
    let bridged = if r.filters.is_empty() {
        None
    } else {
        let axes = bridge_axes(&disp, &r.pump, &r.filters, r.grid.freq_nodes)?;
        let jsa = joint_spectral_amplitude(&axes, &r.crystal, &r.pump, &disp, MismatchMode::Linear, &r.filters)?;
        Some(time_domain_wavefunction(
            &jsa,
            &BridgeOptions {
                edge_limit: r.grid.edge_limit,
            },
        )?)
    };
    let scan = |taus: &[f64], t2: f64| match &bridged {
        Some(psi) => interference_scan_from_wavefunction(psi, taus, t1, t2, r.setup),
        None => interference_scan(taus, &disp, &r.pump, t1, t2, r.setup, n),
    };
    let pattern = scan(&taus, t2)?;
    // synthesizer visibility compares parallel and crossed analyzers at the configured delay
    let visibility = match r.setup {
        Setup::Standard => pattern.visibility,
        Setup::Synthesizer => {
            let tau = [r.analyzers.tau];
            let a = scan(&tau, t2)?.rates[0];
            let b = scan(&tau, -t2)?.rates[0];
            peak_dip_visibility(a.max(b), a.min(b))
        }
    };
    let report = json!({
        "setup": pattern.setup,
        "visibility": visibility,
        "scan_visibility": pattern.visibility,
        "tau_fs": r.analyzers.tau,
        "filtered": bridged.is_some(),
        "min_rate": pattern.rates.iter().cloned().fold(f64::INFINITY, f64::min),
        "max_rate": pattern.rates.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        "warnings": pattern.warnings,
    });
    let mut b = Bundle::new();
    b.add("grid.csv", pattern_csv(&pattern));
    b.add_json(
        "meta.json",
        &meta("interference", &c, json!({ "dispersion": disp, "pump": r.pump })),
    )?;
    b.add_json("report.json", &report)?;
    b.write_atomic(&out_dir(&c, "interference"))?;
    print_json(&report)?;
    Ok(0)
}

fn spectrum_cmd(common: &Common) -> Result<u8> {
    let c = common.run_config()?;
    let r = c.resolve()?;
    let disp = dispersion_params(&r.crystal, &r.pump)?;
    let axes = r.freq_axes(&disp)?;
    let jsa = joint_spectral_amplitude(&axes, &r.crystal, &r.pump, &disp, r.mismatch, &r.filters)?;
    let d = spectral_diagnostics(&jsa, &r.grid.thresholds)?;
    let summary = json!({
        "pearson_rho": d.pearson_rho,
        "schmidt_number": d.schmidt_number,
        "classification": d.classification,
        "signal_rms_width": d.signal_rms_width,
        "idler_rms_width": d.idler_rms_width,
        "warnings": jsa.meta.warnings,
    });
    let mut b = Bundle::new();
    b.add("grid.csv", freq_grid_csv(&jsa));
    b.add_json(
        "meta.json",
        &meta(
            "spectrum",
            &c,
            json!({ "dispersion": disp, "pump": r.pump, "axes": axes }),
        ),
    )?;
    b.add_json("report.json", &d)?;
    b.write_atomic(&out_dir(&c, "spectrum"))?;
    print_json(&summary)?;
    Ok(0)
}

fn scenario_cmd(id: &str, out: &Path) -> Result<u8> {
    let report = run_scenario(id, out)?;
    let rows: Vec<Value> = report
        .assertions
        .iter()
        .map(|a| json!({ "name": a.name, "value": a.value, "passed": a.passed }))
        .collect();
    print_json(&json!({ "id": report.id, "passed": report.passed, "assertions": rows }))?;
    Ok(if report.passed { 0 } else { 4 })
}

fn exit_code(e: &Error) -> u8 {
    if e.is_domain() {
        3
    } else if matches!(e, Error::Io(_)) {
        1
    } else {
        2
    }
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidParameter(format!("--threads: {e}")))?;
    }
    match cli.command {
        Command::Dispersion(c) => dispersion_cmd(&c),
        Command::ScanSymmetric { crystal, window } => scan_symmetric(&crystal, &window),
        Command::Wavefunction { kind, common } => wavefunction_cmd(kind, &common),
        Command::Interference { mode, common } => interference_cmd(mode, &common),
        Command::Spectrum(c) => spectrum_cmd(&c),
        Command::Scenario { id, out } => scenario_cmd(&id, &out),
        Command::ListScenarios => {
            let table: String = list_scenarios().iter().map(|(id, d)| format!("{id}\t{d}\n")).collect();
            emit(&table);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
