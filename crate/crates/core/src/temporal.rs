//! Time-domain two-photon amplitudes, coincidence rates and interference scans.
//!
//! Rates are normalized by the incoherent reference `(E1 + E2) / 2`, where `E1`, `E2`
//! are the grid energies of the two bare wavefunction terms. With 45 degree analyzers
//! this puts the interference-free baseline at 1/2.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::{DispersionSummary, PumpSpec};
use crate::error::{Error, Result};
use crate::grid::{AmplitudeKind, Axis, TimeGrid, TimeGridMeta};

/// Node count per axis of the default time grid.
pub const DEFAULT_NODES: usize = 1024;
/// Half-width of the t+ window used when the pump is cw.
pub const CW_T_PLUS_HALF_SPAN: f64 = 2000.0;
/// Gaussian widths (of 2/sigma) kept on each side of the tilted ridge.
const RIDGE_WIDTHS: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyzerSettings {
    pub theta1: f64,
    pub theta2: f64,
    /// e-o delay in fs.
    pub tau: f64,
}

impl AnalyzerSettings {
    pub fn new(theta1: f64, theta2: f64, tau: f64) -> Self {
        Self { theta1, theta2, tau }
    }

    pub fn from_degrees(theta1_deg: f64, theta2_deg: f64, tau: f64) -> Self {
        Self::new(theta1_deg.to_radians(), theta2_deg.to_radians(), tau)
    }

    pub fn with_tau(self, tau: f64) -> Self {
        Self { tau, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setup {
    /// Collinear beamsplitter: A = c1 s2 Pi(t+, t- + tau) - s1 c2 Pi(t+, -t- + tau).
    Standard,
    /// Bell-state synthesizer: A = c1 c2 Pi(t+ + tau/2, t- + tau) + s1 s2 Pi(t+ + tau/2, t- - tau).
    Synthesizer,
}

impl Setup {
    fn kind(self) -> AmplitudeKind {
        match self {
            Setup::Standard => AmplitudeKind::Standard,
            Setup::Synthesizer => AmplitudeKind::Synthesizer,
        }
    }
}

/// Precomputed Pi(t+, t-) for one dispersion/pump pair.
#[derive(Debug, Clone, Copy)]
pub struct PiKernel {
    omega: f64,
    quarter_sigma_sq: f64,
    slope: f64,
    lo: f64,
    hi: f64,
    cw: bool,
}

impl PiKernel {
    pub fn new(disp: &DispersionSummary, pump: &PumpSpec) -> Result<Self> {
        let slope = disp.ridge_slope()?;
        let (lo, hi) = if disp.dl > 0.0 { (0.0, disp.dl) } else { (disp.dl, 0.0) };
        Ok(Self {
            omega: pump.omega(),
            quarter_sigma_sq: 0.25 * pump.sigma() * pump.sigma(),
            slope,
            lo,
            hi,
            cw: pump.is_cw(),
        })
    }

    /// Open t- interval where Pi is nonzero.
    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// D+/D, the slope of the ridge in the (t-, t+) plane.
    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn is_cw(&self) -> bool {
        self.cw
    }

    /// Distance from the ridge beyond which the Gaussian factor is negligible; infinite for cw.
    pub fn ridge_halfwidth(&self) -> f64 {
        if self.cw {
            f64::INFINITY
        } else {
            RIDGE_WIDTHS / self.quarter_sigma_sq.sqrt()
        }
    }

    #[inline]
    pub fn carrier(&self, t_plus: f64) -> Complex64 {
        Complex64::from_polar(1.0, -self.omega * t_plus)
    }

    #[inline]
    pub fn envelope(&self, t_plus: f64, t_minus: f64) -> f64 {
        if !(t_minus > self.lo && t_minus < self.hi) {
            return 0.0;
        }
        if self.cw {
            return 1.0;
        }
        let x = t_plus - self.slope * t_minus;
        (-self.quarter_sigma_sq * x * x).exp()
    }

    /// Pi without the support indicator.
    #[inline]
    pub fn smooth(&self, t_plus: f64, t_minus: f64) -> Complex64 {
        if self.cw {
            return self.carrier(t_plus);
        }
        let x = t_plus - self.slope * t_minus;
        self.carrier(t_plus) * (-self.quarter_sigma_sq * x * x).exp()
    }

    #[inline]
    pub fn eval(&self, t_plus: f64, t_minus: f64) -> Complex64 {
        let env = self.envelope(t_plus, t_minus);
        if env == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            self.carrier(t_plus) * env
        }
    }
}

/// Two-photon wavefunction Pi(t+, t-).
///
/// The envelope is exp{-sigma^2 (t+ - (D+/D) t-)^2 / 4}, the transform of the pump
/// amplitude exp{-(w - W_p)^2 / sigma^2}; it is replaced by 1 for a cw pump.
pub fn pi_wavefunction(t_plus: f64, t_minus: f64, disp: &DispersionSummary, pump: &PumpSpec) -> Result<Complex64> {
    Ok(PiKernel::new(disp, pump)?.eval(t_plus, t_minus))
}

/// Pi(t+ + plus_shift, minus_sign * t- + minus_shift) scaled by `weight`.
#[derive(Debug, Clone, Copy)]
struct Term {
    weight: f64,
    plus_shift: f64,
    minus_sign: f64,
    minus_shift: f64,
}

impl Term {
    /// t- interval where the term is nonzero.
    fn t_minus_support(&self, k: &PiKernel) -> (f64, f64) {
        let (lo, hi) = k.support();
        if self.minus_sign > 0.0 {
            (lo - self.minus_shift, hi - self.minus_shift)
        } else {
            (self.minus_shift - hi, self.minus_shift - lo)
        }
    }

    #[inline]
    fn smooth(&self, k: &PiKernel, t_plus: f64, t_minus: f64) -> Complex64 {
        k.smooth(t_plus + self.plus_shift, self.minus_sign * t_minus + self.minus_shift)
    }

    /// t+ interval holding the ridge, padded by the Gaussian tail.
    fn t_plus_extent(&self, k: &PiKernel) -> (f64, f64) {
        let (lo, hi) = k.support();
        let (a, b) = (k.slope() * lo, k.slope() * hi);
        let pad = k.ridge_halfwidth();
        (a.min(b) - pad - self.plus_shift, a.max(b) + pad - self.plus_shift)
    }
}

fn terms(setup: Setup, a: &AnalyzerSettings) -> [Term; 2] {
    let (s1, c1) = a.theta1.sin_cos();
    let (s2, c2) = a.theta2.sin_cos();
    match setup {
        Setup::Standard => [
            Term {
                weight: c1 * s2,
                plus_shift: 0.0,
                minus_sign: 1.0,
                minus_shift: a.tau,
            },
            Term {
                weight: -s1 * c2,
                plus_shift: 0.0,
                minus_sign: -1.0,
                minus_shift: a.tau,
            },
        ],
        Setup::Synthesizer => [
            Term {
                weight: c1 * c2,
                plus_shift: 0.5 * a.tau,
                minus_sign: 1.0,
                minus_shift: a.tau,
            },
            Term {
                weight: s1 * s2,
                plus_shift: 0.5 * a.tau,
                minus_sign: 1.0,
                minus_shift: -a.tau,
            },
        ],
    }
}

/// (t+, t-) sampling for time-domain amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeAxes {
    pub t_plus: Axis,
    pub t_minus: Axis,
}

impl TimeAxes {
    pub fn new(t_plus: Axis, t_minus: Axis) -> Self {
        Self { t_plus, t_minus }
    }

    /// Default axes: t- over +-(1.5|DL| + 2|tau|max), t+ over the tilted ridge plus
    /// five Gaussian widths (+-2000 fs for a cw pump).
    pub fn auto(disp: &DispersionSummary, pump: &PumpSpec, tau_max: f64, nodes: usize) -> Result<Self> {
        let k = PiKernel::new(disp, pump)?;
        let tau_max = tau_max.abs();
        let dl = disp.dl.abs();
        let minus = 1.5 * dl + 2.0 * tau_max;
        let plus = if k.is_cw() {
            CW_T_PLUS_HALF_SPAN
        } else {
            k.slope().abs() * dl + 0.5 * tau_max + k.ridge_halfwidth()
        };
        Ok(Self {
            t_plus: Axis::spanning(-plus, plus, nodes)?,
            t_minus: Axis::spanning(-minus, minus, nodes)?,
        })
    }
}

fn coverage_warnings(axes: &TimeAxes, k: &PiKernel, terms: &[Term]) -> Vec<String> {
    let mut out = Vec::new();
    for (n, t) in terms.iter().enumerate() {
        let (lo, hi) = t.t_minus_support(k);
        if !axes.t_minus.covers(lo, hi) {
            out.push(format!(
                "term {}: t- support [{lo:.3}, {hi:.3}] fs exceeds grid [{:.3}, {:.3}] fs",
                n + 1,
                axes.t_minus.start,
                axes.t_minus.end()
            ));
        }
        if !k.is_cw() {
            let (lo, hi) = t.t_plus_extent(k);
            if !axes.t_plus.covers(lo, hi) {
                out.push(format!(
                    "term {}: t+ ridge [{lo:.3}, {hi:.3}] fs exceeds grid [{:.3}, {:.3}] fs",
                    n + 1,
                    axes.t_plus.start,
                    axes.t_plus.end()
                ));
            }
        }
    }
    out
}

/// Per-row weighted sums of |A|^2, |term1|^2, |term2|^2; optionally stores A.
fn row_pass(
    k: &PiKernel,
    terms: &[Term; 2],
    t_plus: f64,
    t_minus: &Axis,
    wm: &[f64],
    mut out: Option<&mut [Complex64]>,
) -> [f64; 3] {
    let carriers = [
        k.carrier(t_plus + terms[0].plus_shift),
        k.carrier(t_plus + terms[1].plus_shift),
    ];
    let mut sums = [0.0; 3];
    for (j, w) in wm.iter().enumerate() {
        let tm = t_minus.value(j);
        let e0 = k.envelope(
            t_plus + terms[0].plus_shift,
            terms[0].minus_sign * tm + terms[0].minus_shift,
        );
        let e1 = k.envelope(
            t_plus + terms[1].plus_shift,
            terms[1].minus_sign * tm + terms[1].minus_shift,
        );
        let p0 = carriers[0] * e0;
        let p1 = carriers[1] * e1;
        let a = p0 * terms[0].weight + p1 * terms[1].weight;
        sums[0] += a.norm_sqr() * w;
        sums[1] += p0.norm_sqr() * w;
        sums[2] += p1.norm_sqr() * w;
        if let Some(row) = out.as_deref_mut() {
            row[j] = a;
        }
    }
    sums
}

/// Combines row sums with t+ weights; a cw grid integrates its first row per unit t+.
fn combine_rows(rows: &[[f64; 3]], wp: &[f64], cw: bool) -> [f64; 3] {
    if cw {
        return rows[0];
    }
    let mut total = [0.0; 3];
    for (r, w) in rows.iter().zip(wp) {
        for c in 0..3 {
            total[c] += r[c] * w;
        }
    }
    total
}

fn build_amplitude(
    axes: &TimeAxes,
    disp: &DispersionSummary,
    pump: &PumpSpec,
    analyzers: &AnalyzerSettings,
    setup: Setup,
) -> Result<TimeGrid> {
    let k = PiKernel::new(disp, pump)?;
    let ts = terms(setup, analyzers);
    let (np, nm) = (axes.t_plus.len, axes.t_minus.len);
    let wm = axes.t_minus.weights();
    let wp = axes.t_plus.weights();
    let mut values = Array2::<Complex64>::zeros((np, nm));
    let rows: Vec<[f64; 3]> = values
        .as_slice_mut()
        .expect("fresh array is contiguous")
        .par_chunks_mut(nm)
        .enumerate()
        .map(|(i, row)| row_pass(&k, &ts, axes.t_plus.value(i), &axes.t_minus, &wm, Some(row)))
        .collect();
    let [_, e1, e2] = combine_rows(&rows, &wp, k.is_cw());

    let mut meta = TimeGridMeta::new(setup.kind());
    meta.reference_energy = Some(0.5 * (e1 + e2));
    meta.t_plus_invariant = k.is_cw();
    meta.dispersion = Some(*disp);
    meta.pump = Some(*pump);
    meta.theta1 = Some(analyzers.theta1);
    meta.theta2 = Some(analyzers.theta2);
    meta.tau = Some(analyzers.tau);
    meta.warnings = coverage_warnings(axes, &k, &ts);
    TimeGrid::new(axes.t_plus, axes.t_minus, values, meta)
}

/// Standard-setup amplitude sampled on `axes`. Coverage problems are recorded as warnings.
pub fn amplitude_standard(
    axes: &TimeAxes,
    disp: &DispersionSummary,
    pump: &PumpSpec,
    analyzers: &AnalyzerSettings,
) -> Result<TimeGrid> {
    build_amplitude(axes, disp, pump, analyzers, Setup::Standard)
}

/// Bell-state synthesizer amplitude sampled on `axes`.
pub fn amplitude_synthesizer(
    axes: &TimeAxes,
    disp: &DispersionSummary,
    pump: &PumpSpec,
    analyzers: &AnalyzerSettings,
) -> Result<TimeGrid> {
    build_amplitude(axes, disp, pump, analyzers, Setup::Synthesizer)
}

pub fn amplitude(
    setup: Setup,
    axes: &TimeAxes,
    disp: &DispersionSummary,
    pump: &PumpSpec,
    analyzers: &AnalyzerSettings,
) -> Result<TimeGrid> {
    build_amplitude(axes, disp, pump, analyzers, setup)
}

/// Bare Pi(t+, t-) on `axes`, normalized so its own energy is the reference.
pub fn wavefunction_grid(axes: &TimeAxes, disp: &DispersionSummary, pump: &PumpSpec) -> Result<TimeGrid> {
    let k = PiKernel::new(disp, pump)?;
    let nm = axes.t_minus.len;
    let mut values = Array2::<Complex64>::zeros((axes.t_plus.len, nm));
    values
        .as_slice_mut()
        .expect("fresh array is contiguous")
        .par_chunks_mut(nm)
        .enumerate()
        .for_each(|(i, row)| {
            let tp = axes.t_plus.value(i);
            for (j, v) in row.iter_mut().enumerate() {
                *v = k.eval(tp, axes.t_minus.value(j));
            }
        });
    let mut meta = TimeGridMeta::new(AmplitudeKind::Wavefunction);
    meta.t_plus_invariant = k.is_cw();
    meta.dispersion = Some(*disp);
    meta.pump = Some(*pump);
    let t = Term {
        weight: 1.0,
        plus_shift: 0.0,
        minus_sign: 1.0,
        minus_shift: 0.0,
    };
    meta.warnings = coverage_warnings(axes, &k, &[t]);
    let mut grid = TimeGrid::new(axes.t_plus, axes.t_minus, values, meta)?;
    grid.meta.reference_energy = Some(grid.energy());
    Ok(grid)
}

/// Normalized coincidence rate: integral of |A|^2 over the reference energy.
/// Grids without a reference energy return the bare integral.
pub fn coincidence_rate(amp: &TimeGrid) -> Result<f64> {
    let energy = amp.energy();
    match amp.meta.reference_energy {
        None => Ok(energy),
        Some(r) if r > 0.0 && r.is_finite() => Ok(energy / r),
        Some(r) => Err(Error::InvalidGrid(format!(
            "reference energy {r} is not positive; the grid misses the wavefunction support"
        ))),
    }
}

/// Integral of a smooth `g` over (a, b) sampled on `axis`: trapezoid over the nodes
/// inside plus exact-endpoint partial cells, so support edges cost O(h^2) rather than O(h).
fn cut_cell_integral<G: Fn(f64) -> Complex64>(axis: &Axis, a: f64, b: f64, g: G) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    let (a, b) = (a.max(axis.start), b.min(axis.end()));
    if !(b > a) {
        return zero;
    }
    let h = axis.step;
    let j0 = ((a - axis.start) / h).ceil().max(0.0) as usize;
    let j1 = (((b - axis.start) / h).floor() as usize).min(axis.len - 1);
    if j0 > j1 {
        return (g(a) + g(b)) * (0.5 * (b - a));
    }
    let (t0, t1) = (axis.value(j0), axis.value(j1));
    let (g0, g1) = (g(t0), g(t1));
    let mut acc = (g(a) + g0) * (0.5 * (t0 - a)) + (g1 + g(b)) * (0.5 * (b - t1));
    if j1 > j0 {
        let mut inner = (g0 + g1) * 0.5;
        for j in j0 + 1..j1 {
            inner += g(axis.value(j));
        }
        acc += inner * h;
    }
    acc
}

/// Gram matrix G[k][l] = integral of term_k conj(term_l) over the intersection of the
/// supports; t- edges are integrated exactly, t+ by the trapezoid rule.
fn term_gram(axes: &TimeAxes, k: &PiKernel, ts: &[Term; 2]) -> [[Complex64; 2]; 2] {
    let supports = [ts[0].t_minus_support(k), ts[1].t_minus_support(k)];
    let row = |tp: f64| {
        let mut g = [[Complex64::new(0.0, 0.0); 2]; 2];
        for a in 0..2 {
            for b in a..2 {
                let lo = supports[a].0.max(supports[b].0);
                let hi = supports[a].1.min(supports[b].1);
                g[a][b] = cut_cell_integral(&axes.t_minus, lo, hi, |t| {
                    ts[a].smooth(k, tp, t) * ts[b].smooth(k, tp, t).conj()
                });
            }
        }
        g[1][0] = g[0][1].conj();
        g
    };
    if k.is_cw() {
        return row(axes.t_plus.value(0));
    }
    let wp = axes.t_plus.weights();
    let rows: Vec<[[Complex64; 2]; 2]> = (0..axes.t_plus.len)
        .into_par_iter()
        .map(|i| row(axes.t_plus.value(i)))
        .collect();
    let mut total = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (r, w) in rows.iter().zip(&wp) {
        for a in 0..2 {
            for b in 0..2 {
                total[a][b] += r[a][b] * *w;
            }
        }
    }
    total
}

/// Separate energies of the two bare terms of an amplitude, by edge-exact quadrature.
/// For a cw pump they are per unit t+.
pub fn term_energies(
    setup: Setup,
    axes: &TimeAxes,
    disp: &DispersionSummary,
    pump: &PumpSpec,
    analyzers: &AnalyzerSettings,
) -> Result<[f64; 2]> {
    let k = PiKernel::new(disp, pump)?;
    let g = term_gram(axes, &k, &terms(setup, analyzers));
    Ok([g[0][0].re, g[1][1].re])
}

/// Normalized rate from the Gram matrix of the two terms.
fn gram_rate(axes: &TimeAxes, k: &PiKernel, ts: &[Term; 2]) -> Result<f64> {
    let g = term_gram(axes, k, ts);
    let reference = 0.5 * (g[0][0].re + g[1][1].re);
    if !(reference > 0.0) {
        return Err(Error::InvalidGrid(
            "reference energy is zero; the grid misses the wavefunction support".into(),
        ));
    }
    let (w0, w1) = (ts[0].weight, ts[1].weight);
    let a = w0 * w0 * g[0][0].re + w1 * w1 * g[1][1].re + 2.0 * w0 * w1 * g[0][1].re;
    Ok(a / reference)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferencePattern {
    pub taus: Vec<f64>,
    pub rates: Vec<f64>,
    pub visibility: f64,
    pub setup: Setup,
    pub theta1: f64,
    pub theta2: f64,
    pub dispersion: Option<DispersionSummary>,
    pub pump: Option<PumpSpec>,
    pub nodes: Option<usize>,
    pub warnings: Vec<String>,
}

impl InterferencePattern {
    fn new(taus: Vec<f64>, rates: Vec<f64>, setup: Setup, theta1: f64, theta2: f64) -> Self {
        let visibility = visibility_of(&rates);
        Self {
            taus,
            rates,
            visibility,
            setup,
            theta1,
            theta2,
            dispersion: None,
            pump: None,
            nodes: None,
            warnings: Vec::new(),
        }
    }
}

/// `n` evenly spaced delays from `lo` to `hi` inclusive.
pub fn tau_samples(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Delays used when no scan is configured: the standard setup is centered on its dip at
/// D L / 2, the synthesizer on zero delay; both extend 1.5 |D L| each way.
pub fn default_tau_scan(setup: Setup, disp: &DispersionSummary, samples: usize) -> Vec<f64> {
    let half = 1.5 * disp.dl.abs();
    let center = match setup {
        Setup::Standard => 0.5 * disp.dl,
        Setup::Synthesizer => 0.0,
    };
    tau_samples(center - half, center + half, samples)
}

/// Coincidence rate versus delay on one grid sized for the largest |tau|.
pub fn interference_scan(
    taus: &[f64],
    disp: &DispersionSummary,
    pump: &PumpSpec,
    theta1: f64,
    theta2: f64,
    setup: Setup,
    nodes: usize,
) -> Result<InterferencePattern> {
    if taus.is_empty() {
        return Err(Error::InvalidParameter("tau range is empty".into()));
    }
    let tau_max = taus.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    let axes = TimeAxes::auto(disp, pump, tau_max, nodes)?;
    let k = PiKernel::new(disp, pump)?;
    let rates = taus
        .par_iter()
        .map(|&tau| {
            let ts = terms(setup, &AnalyzerSettings::new(theta1, theta2, tau));
            gram_rate(&axes, &k, &ts).map(|r| r.max(0.0))
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut pattern = InterferencePattern::new(taus.to_vec(), rates, setup, theta1, theta2);
    pattern.dispersion = Some(*disp);
    pattern.pump = Some(*pump);
    pattern.nodes = Some(nodes);
    for &tau in taus {
        let ts = terms(setup, &AnalyzerSettings::new(theta1, theta2, tau));
        for w in coverage_warnings(&axes, &k, &ts) {
            pattern.warnings.push(format!("tau {tau} fs: {w}"));
        }
    }
    Ok(pattern)
}

/// Interference scan built from a sampled wavefunction, e.g. a filtered one from the
/// spectral bridge. Delays snap to the nearest value the t- lattice can represent.
pub fn interference_scan_from_wavefunction(
    pi: &TimeGrid,
    taus: &[f64],
    theta1: f64,
    theta2: f64,
    setup: Setup,
) -> Result<InterferencePattern> {
    if taus.is_empty() {
        return Err(Error::InvalidParameter("tau range is empty".into()));
    }
    let energy = pi.energy();
    if !(energy > 0.0) {
        return Err(Error::InvalidGrid("wavefunction grid has zero energy".into()));
    }
    let h = pi.t_minus.step;
    let start = pi.t_minus.start;
    let (s1, c1) = theta1.sin_cos();
    let (s2, c2) = theta2.sin_cos();
    let mut snapped = Vec::with_capacity(taus.len());
    let mut rates = Vec::with_capacity(taus.len());
    let mut warnings = Vec::new();
    for &tau in taus {
        let (actual, overlap, wa, wb, sign) = match setup {
            Setup::Standard => {
                let k = ((2.0 * tau - 2.0 * start) / h).round();
                let actual = 0.5 * (k * h + 2.0 * start);
                (actual, mirror_overlap(pi, k as i64), c1 * s2, s1 * c2, -1.0)
            }
            Setup::Synthesizer => {
                let lag = (2.0 * tau / h).round();
                (0.5 * lag * h, shift_overlap(pi, lag as i64), c1 * c2, s1 * s2, 1.0)
            }
        };
        if (actual - tau).abs() > 1e-9 * h {
            warnings.push(format!("tau {tau} fs snapped to {actual} fs"));
        }
        let rate = wa * wa + wb * wb + sign * 2.0 * wa * wb * overlap.re / energy;
        snapped.push(actual);
        rates.push(rate.max(0.0));
    }
    let mut pattern = InterferencePattern::new(snapped, rates, setup, theta1, theta2);
    pattern.dispersion = pi.meta.dispersion;
    pattern.pump = pi.meta.pump;
    pattern.nodes = Some(pi.t_minus.len);
    pattern.warnings = warnings;
    Ok(pattern)
}

fn row_weights(pi: &TimeGrid) -> Vec<(usize, f64)> {
    if pi.meta.t_plus_invariant {
        vec![(0, 1.0)]
    } else {
        pi.t_plus.weights().into_iter().enumerate().collect()
    }
}

/// sum over nodes of Pi(t+, u_q) Pi*(t+, u_{k-q}) with t- weights, i.e. the
/// overlap of Pi(t+, u) with Pi(t+, 2 tau - u) where 2 tau = k h + 2 u_0.
fn mirror_overlap(pi: &TimeGrid, k: i64) -> Complex64 {
    let n = pi.t_minus.len as i64;
    let wm = pi.t_minus.weights();
    row_weights(pi)
        .into_iter()
        .map(|(i, wp)| {
            let row = pi.values.row(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for q in 0..n {
                let m = k - q;
                if (0..n).contains(&m) {
                    acc += row[q as usize] * row[m as usize].conj() * wm[q as usize];
                }
            }
            acc * wp
        })
        .sum()
}

/// Overlap of Pi(t+, u) with Pi(t+, u - lag h).
fn shift_overlap(pi: &TimeGrid, lag: i64) -> Complex64 {
    let n = pi.t_minus.len as i64;
    let wm = pi.t_minus.weights();
    row_weights(pi)
        .into_iter()
        .map(|(i, wp)| {
            let row = pi.values.row(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for q in 0..n {
                let m = q - lag;
                if (0..n).contains(&m) {
                    acc += row[q as usize] * row[m as usize].conj() * wm[q as usize];
                }
            }
            acc * wp
        })
        .sum()
}

/// (max - min) / (max + min); 0 for a constant or empty scan.
pub fn visibility_of(rates: &[f64]) -> f64 {
    if rates.is_empty() {
        return 0.0;
    }
    let max = rates.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = rates.iter().cloned().fold(f64::INFINITY, f64::min);
    if max + min <= 0.0 || max == min {
        return 0.0;
    }
    ((max - min) / (max + min)).clamp(0.0, 1.0)
}

pub fn visibility(pattern: &InterferencePattern) -> f64 {
    visibility_of(&pattern.rates)
}

/// Visibility from the two branches of a peak-dip measurement.
pub fn peak_dip_visibility(peak: f64, dip: f64) -> f64 {
    visibility_of(&[peak, dip])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WernerDiagnostic {
    pub epsilon: f64,
    pub tau: f64,
}

/// Werner mixing parameter: normalized overlap of the two synthesizer terms.
pub fn werner_epsilon(disp: &DispersionSummary, pump: &PumpSpec, tau: f64, nodes: usize) -> Result<WernerDiagnostic> {
    let axes = TimeAxes::auto(disp, pump, tau, nodes)?;
    werner_epsilon_on(&axes, disp, pump, tau)
}

pub fn werner_epsilon_on(
    axes: &TimeAxes,
    disp: &DispersionSummary,
    pump: &PumpSpec,
    tau: f64,
) -> Result<WernerDiagnostic> {
    let k = PiKernel::new(disp, pump)?;
    let ts = terms(Setup::Synthesizer, &AnalyzerSettings::new(0.0, 0.0, tau));
    let g = term_gram(axes, &k, &ts);
    let norm = (g[0][0].re * g[1][1].re).sqrt();
    if !(norm > 0.0) {
        return Err(Error::InvalidGrid("grid misses the wavefunction support".into()));
    }
    Ok(WernerDiagnostic {
        epsilon: (g[0][1].norm() / norm).min(1.0),
        tau,
    })
}
