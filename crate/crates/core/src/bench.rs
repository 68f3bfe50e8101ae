//! Monte-Carlo benchmark harness: signal and noise generation, distortion
//! metrics against the genie baseline, sweep plans and CSV reporting.
//!
//! Everything is a pure function of the plan's master seed. Each trial pulls
//! from independent labeled streams (support, values, noise, schedule), so
//! e.g. switching the decoder never changes the instances it sees — sweeps
//! with the same master seed are paired across configurations.

use std::io::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::distributions::Distribution;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoder::{
    reweighted_decode, suprem1_decode, suprem2_decode, Algo, DecoderConfig,
};
use crate::error::{Error, Result};
use crate::frame::{build_peg_frame, FrameParams, LowDensityFrame};
use crate::refine::{genie_decode, refine_estimate, threshold_top_l, Support};
use crate::rng::{self, StreamLabel};
use crate::schedule::{ScheduleKind, SerialOrder};

/// Relative squared errors at or below this count as exact recoveries when
/// forming the distortion ratio, keeping aggregates finite in noiseless
/// cells.
pub const EXACT_TOL: f64 = 1e-20;

/// Recovery threshold of the alternate distortion-based criterion.
pub const D2_REC_TOL: f64 = 1e-6;

/// Signal-to-noise ratio of a measurement. Under the `||Fx|| = sqrt(N)`
/// normalization, `sigma^2 = 10^(-SNR/10)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Snr {
    Db(f64),
    Noiseless,
}

impl Snr {
    pub fn sigma2(&self) -> f64 {
        match self {
            Snr::Db(db) => 10f64.powf(-db / 10.0),
            Snr::Noiseless => 0.0,
        }
    }

    pub fn db(&self) -> f64 {
        match self {
            Snr::Db(db) => *db,
            Snr::Noiseless => f64::INFINITY,
        }
    }
}

/// What signals to draw: `l` nonzeros at a uniform support, values standard
/// normal, then rescaled so the image under the frame has norm `sqrt(N)`.
#[derive(Debug, Clone, Copy)]
pub struct SignalSpec {
    pub m: usize,
    pub l: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct MeasurementInstance {
    pub x: Vec<f64>,
    pub r: Vec<f64>,
    pub sigma2: f64,
    /// `+inf` for noiseless instances.
    pub snr_db: f64,
}

/// Draw one measurement instance.
///
/// The support is uniform without replacement, nonzeros are i.i.d. standard
/// normal, and the signal is scaled so that `||F x||_2 = sqrt(N)` (making
/// `SNR = 10 log10(1 / sigma^2)`). Gaussian noise is then added to `r = Fx`.
/// A draw whose image vanishes is resampled once before giving up.
pub fn gen_instance(
    frame: &LowDensityFrame,
    spec: &SignalSpec,
    snr: Snr,
) -> Result<MeasurementInstance> {
    if spec.m != frame.n_vars() {
        return Err(Error::DimensionMismatch {
            expected: frame.n_vars(),
            got: spec.m,
        });
    }
    if spec.l > spec.m {
        return Err(Error::LExceedsM {
            l: spec.l,
            m: spec.m,
        });
    }
    let n = frame.n_checks();
    let mut support_rng = rng::stream(spec.seed, StreamLabel::Support, 0, 0);
    let mut values_rng = rng::stream(spec.seed, StreamLabel::Values, 0, 0);
    let mut noise_rng = rng::stream(spec.seed, StreamLabel::Noise, 0, 0);

    let mut x = vec![0.0; spec.m];
    let mut image = vec![0.0; n];
    for attempt in 0..2 {
        x.fill(0.0);
        // partial Fisher-Yates for a uniform l-subset
        let mut idx: Vec<u32> = (0..spec.m as u32).collect();
        for i in 0..spec.l {
            let j = support_rng.gen_range(i..spec.m);
            idx.swap(i, j);
        }
        for &j in &idx[..spec.l] {
            x[j as usize] = StandardNormal.sample(&mut values_rng);
        }
        frame.matvec_into(&x, &mut image);
        let norm = image.iter().map(|v| v * v).sum::<f64>().sqrt();
        if spec.l == 0 {
            break;
        }
        if norm > 0.0 {
            let scale = (n as f64).sqrt() / norm;
            for v in &mut x {
                *v *= scale;
            }
            frame.matvec_into(&x, &mut image);
            break;
        }
        if attempt == 1 {
            return Err(Error::DegenerateSignal);
        }
    }

    let sigma2 = snr.sigma2();
    let sigma = sigma2.sqrt();
    let mut r = image;
    if sigma > 0.0 {
        for v in &mut r {
            let n: f64 = StandardNormal.sample(&mut noise_rng);
            *v += sigma * n;
        }
    }
    Ok(MeasurementInstance {
        x,
        r,
        sigma2,
        snr_db: snr.db(),
    })
}

/// Distortion of an estimate and the genie, and their ratio.
#[derive(Debug, Clone, Copy)]
pub struct Metrics {
    /// `||x - xhat_e||^2 / ||x||^2`
    pub d_e: f64,
    /// `||x - xhat_genie||^2 / ||x||^2`
    pub d_g: f64,
    /// Linear distortion ratio `d_e / d_g`; 1 when both are exact.
    pub ratio: f64,
    /// `10 log10(ratio)`
    pub ratio_db: f64,
    /// Both distortions at or below [`EXACT_TOL`]; the 0 dB ratio is a
    /// convention then.
    pub exact: bool,
}

pub fn compute_metrics(x: &[f64], xhat_e: &[f64], xhat_genie: &[f64]) -> Result<Metrics> {
    let norm2: f64 = x.iter().map(|v| v * v).sum();
    if norm2 == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let err2 = |a: &[f64]| -> f64 {
        a.iter()
            .zip(x)
            .map(|(ai, xi)| (ai - xi) * (ai - xi))
            .sum::<f64>()
    };
    let d_e = err2(xhat_e) / norm2;
    let d_g = err2(xhat_genie) / norm2;
    let (ratio, exact) = if d_g > EXACT_TOL {
        (d_e / d_g, false)
    } else if d_e <= EXACT_TOL {
        (1.0, true)
    } else {
        (f64::INFINITY, false)
    };
    Ok(Metrics {
        d_e,
        d_g,
        ratio,
        ratio_db: 10.0 * ratio.log10(),
        exact,
    })
}

/// How a trial counts as a successful recovery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecMetric {
    /// Exact support equality.
    #[default]
    Support,
    /// `d_e < 1e-6`, the looser criterion used for methods that miss tiny
    /// coefficients.
    D2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgoChoice {
    Suprem1,
    Suprem2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleChoice {
    Flood,
    Serial,
    Prob,
}

/// One sweep plan: a frame, grids over sparsity and SNR, and a decoder
/// configuration, all reproducible from `master_seed`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Plan {
    pub n: usize,
    pub m: usize,
    pub dv: usize,
    pub dc: usize,
    pub l_list: Vec<usize>,
    /// Entries are dB values or the string `"inf"` for noiseless.
    pub snr_list: Vec<SnrEntry>,
    /// Trials per grid cell.
    pub k: usize,
    pub algo: AlgoChoice,
    pub schedule: ScheduleChoice,
    #[serde(default = "default_p_on")]
    pub p_on: f64,
    #[serde(default = "default_t")]
    pub t: usize,
    #[serde(default = "default_td")]
    pub td: usize,
    /// Number of reweighings; 0 disables reweighting.
    #[serde(default)]
    pub r: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub rec_metric: RecMetric,
    /// With timing off, the CSV is byte-reproducible across runs.
    #[serde(default = "default_true")]
    pub report_timing: bool,
}

fn default_p_on() -> f64 {
    0.5
}
fn default_t() -> usize {
    500
}
fn default_td() -> usize {
    30
}
fn default_true() -> bool {
    true
}

/// A `snr_list` entry: a number in dB, or `"inf"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SnrEntry {
    Db(f64),
    Label(String),
}

impl SnrEntry {
    pub fn to_snr(&self) -> Result<Snr> {
        match self {
            SnrEntry::Db(db) => Ok(Snr::Db(*db)),
            SnrEntry::Label(s) if s.eq_ignore_ascii_case("inf") => Ok(Snr::Noiseless),
            SnrEntry::Label(s) => Err(Error::InvalidConfig(format!(
                "snr entry must be a number or \"inf\", got {s:?}"
            ))),
        }
    }
}

impl Plan {
    pub fn from_toml_str(text: &str) -> Result<Plan> {
        let plan: Plan =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(format!("plan: {e}")))?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        FrameParams::new(self.n, self.m, self.dv, self.dc, 0)?;
        if self.k == 0 {
            return Err(Error::InvalidConfig("k must be positive".into()));
        }
        if self.l_list.is_empty() || self.snr_list.is_empty() {
            return Err(Error::InvalidConfig("empty l_list or snr_list".into()));
        }
        for &l in &self.l_list {
            if l > self.m {
                return Err(Error::LExceedsM { l, m: self.m });
            }
        }
        for s in &self.snr_list {
            s.to_snr()?;
        }
        if !(self.p_on > 0.0 && self.p_on <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "p_on must lie in (0, 1], got {}",
                self.p_on
            )));
        }
        if self.t == 0 || (self.td >= self.t) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < td < t, got t = {}, td = {}",
                self.t, self.td
            )));
        }
        if self.r > self.t {
            return Err(Error::InvalidConfig(format!(
                "more reweighings ({}) than iterations ({})",
                self.r, self.t
            )));
        }
        Ok(())
    }

    pub fn algo_label(&self) -> String {
        let base = match self.algo {
            AlgoChoice::Suprem1 => "suprem1",
            AlgoChoice::Suprem2 => "suprem2",
        };
        if self.r > 0 {
            format!("{base}+rw{}", self.r)
        } else {
            base.to_string()
        }
    }

    fn schedule_for_trial(&self, cell: u64, trial: u64) -> ScheduleKind {
        match self.schedule {
            ScheduleChoice::Flood => ScheduleKind::Flooding,
            ScheduleChoice::Serial => ScheduleKind::Serial(SerialOrder::Lexicographic),
            ScheduleChoice::Prob => ScheduleKind::Probabilistic {
                p_on: self.p_on,
                seed: rng::derive_seed(self.master_seed, StreamLabel::Schedule, cell, trial),
            },
        }
    }
}

/// One trial's outcome.
#[derive(Debug, Clone, Copy)]
pub struct TrialResult {
    pub d_e: f64,
    pub d_g: f64,
    pub ratio: f64,
    pub ratio_db: f64,
    pub exact: bool,
    pub recovered: bool,
    pub iterations: usize,
    pub wall_ms: f64,
}

/// Aggregates of one grid cell.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub l: usize,
    pub l_density: f64,
    pub snr: Snr,
    pub algo: String,
    pub mean_ratio_db: f64,
    pub p_rec: f64,
    pub mean_iters: f64,
    pub mean_ms: f64,
    /// Trials aggregated (excludes failed trials).
    pub k: usize,
    pub failures: usize,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub cells: Vec<CellResult>,
}

/// Run every grid cell of the plan. Trials within a cell run in parallel;
/// aggregation order is fixed, so the outcome is a pure function of the
/// plan.
pub fn run_sweep(plan: &Plan) -> Result<SweepOutcome> {
    plan.validate()?;
    let frame_seed = rng::derive_seed(plan.master_seed, StreamLabel::Frame, 0, 0);
    let params = FrameParams::new(plan.n, plan.m, plan.dv, plan.dc, frame_seed)?;
    let frame = build_peg_frame(params)?;

    let mut cells = Vec::new();
    let mut cell_index = 0u64;
    for &l in &plan.l_list {
        for snr_entry in &plan.snr_list {
            let snr = snr_entry.to_snr()?;
            let outcomes: Vec<Result<TrialResult>> = (0..plan.k as u64)
                .into_par_iter()
                .map(|trial| run_trial(&frame, plan, l, snr, cell_index, trial))
                .collect();
            let mut agg = CellResult {
                l,
                l_density: l as f64 / plan.m as f64,
                snr,
                algo: plan.algo_label(),
                mean_ratio_db: 0.0,
                p_rec: 0.0,
                mean_iters: 0.0,
                mean_ms: 0.0,
                k: 0,
                failures: 0,
            };
            let mut ratio_sum = 0.0;
            let mut rec_sum = 0usize;
            let mut iter_sum = 0usize;
            let mut ms_sum = 0.0;
            for out in outcomes {
                match out {
                    Ok(t) => {
                        agg.k += 1;
                        ratio_sum += t.ratio;
                        rec_sum += usize::from(t.recovered);
                        iter_sum += t.iterations;
                        ms_sum += t.wall_ms;
                    }
                    Err(_) => agg.failures += 1,
                }
            }
            if agg.k > 0 {
                agg.mean_ratio_db = 10.0 * (ratio_sum / agg.k as f64).log10();
                agg.p_rec = rec_sum as f64 / agg.k as f64;
                agg.mean_iters = iter_sum as f64 / agg.k as f64;
                agg.mean_ms = if plan.report_timing {
                    ms_sum / agg.k as f64
                } else {
                    0.0
                };
            }
            cells.push(agg);
            cell_index += 1;
        }
    }
    Ok(SweepOutcome { cells })
}

fn run_trial(
    frame: &LowDensityFrame,
    plan: &Plan,
    l: usize,
    snr: Snr,
    cell: u64,
    trial: u64,
) -> Result<TrialResult> {
    let inst_seed = rng::mix(plan.master_seed ^ rng::mix(cell ^ rng::mix(trial)));
    let spec = SignalSpec {
        m: plan.m,
        l,
        seed: inst_seed,
    };
    let inst = gen_instance(frame, &spec, snr)?;
    let true_support = Support::of_signal(&inst.x);

    // The degenerate all-zero cell: nothing to decode, recovery means
    // reporting an empty support.
    if l == 0 {
        return Ok(TrialResult {
            d_e: 0.0,
            d_g: 0.0,
            ratio: 1.0,
            ratio_db: 0.0,
            exact: true,
            recovered: true_support.is_empty(),
            iterations: 0,
            wall_ms: 0.0,
        });
    }

    let mut config = DecoderConfig::new(plan.schedule_for_trial(cell, trial));
    config.max_iters = plan.t;
    config.stall_window = plan.td;
    config.noise_var = Some(inst.sigma2);
    let started = Instant::now();
    let output = match (plan.algo, plan.r) {
        (AlgoChoice::Suprem1, 0) => suprem1_decode(frame, &inst.r, &config)?,
        (AlgoChoice::Suprem2, 0) => {
            config.sparsity = Some(l);
            suprem2_decode(frame, &inst.r, &config)?
        }
        (algo, r) => {
            config = config.with_reweighings(r);
            let algo = match algo {
                AlgoChoice::Suprem1 => Algo::SupremOne,
                AlgoChoice::Suprem2 => {
                    config.sparsity = Some(l);
                    Algo::SupremTwo
                }
            };
            reweighted_decode(frame, &inst.r, &config, algo)?
        }
    };
    let selected = match output.support {
        Some(indices) => Support::new(indices, plan.m)?,
        None => threshold_top_l(&output.xhat, l)?,
    };
    let refined = refine_estimate(frame, &inst.r, &selected)?;
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;

    let genie = genie_decode(frame, &inst.r, &true_support)?;
    let metrics = compute_metrics(&inst.x, &refined, &genie)?;
    let recovered = match plan.rec_metric {
        RecMetric::Support => selected == true_support,
        RecMetric::D2 => metrics.d_e < D2_REC_TOL,
    };
    Ok(TrialResult {
        d_e: metrics.d_e,
        d_g: metrics.d_g,
        ratio: metrics.ratio,
        ratio_db: metrics.ratio_db,
        exact: metrics.exact,
        recovered,
        iterations: output.trace.iterations,
        wall_ms,
    })
}

pub const CSV_HEADER: &str = "Ldensity,snr_db,algo,mean_ratio_db,p_rec,mean_iters,mean_ms,K";

/// Render the result table. Full-precision decimal; noiseless cells print
/// `inf` in the SNR column.
pub fn render_csv(cells: &[CellResult]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            c.l_density,
            c.snr.db(),
            c.algo,
            c.mean_ratio_db,
            c.p_rec,
            c.mean_iters,
            c.mean_ms,
            c.k
        ));
    }
    out
}

/// Key-value machine summary of a sweep.
pub fn render_summary(plan: &Plan, cells: &[CellResult]) -> String {
    let mut out = String::new();
    out.push_str(&format!("algo={}\n", plan.algo_label()));
    out.push_str(&format!("n={}\nm={}\ndv={}\ndc={}\n", plan.n, plan.m, plan.dv, plan.dc));
    out.push_str(&format!("k={}\nt={}\ntd={}\nreweighings={}\n", plan.k, plan.t, plan.td, plan.r));
    out.push_str(&format!("master_seed={}\n", plan.master_seed));
    out.push_str(&format!("cells={}\n", cells.len()));
    let failures: usize = cells.iter().map(|c| c.failures).sum();
    out.push_str(&format!("failed_trials={failures}\n"));
    for (i, c) in cells.iter().enumerate() {
        out.push_str(&format!(
            "cell{}.l={} cell{}.snr_db={} cell{}.p_rec={} cell{}.mean_ratio_db={}\n",
            i, c.l, i, c.snr.db(), i, c.p_rec, i, c.mean_ratio_db
        ));
    }
    out
}

/// Write a file atomically: temp file in the same directory, then rename.
pub fn atomic_write(path: &Path, content: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().map(|s| s.to_string_lossy()).unwrap_or_default()
    ));
    if tmp == *path {
        tmp = dir.join(".sweep-output.tmp");
    }
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(content.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}
