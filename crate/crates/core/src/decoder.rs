//! The SuPrEM decoders: sum-product message passing with Gaussian messages,
//! per-coordinate EM updates of the Gaussian-scale-mixture hyperpriors, and
//! (for the second variant) per-iteration support sparsification.
//!
//! Both decoders run the same engine. One iteration is a check pass under
//! the configured schedule, a variable pass (hyperprior update restricted to
//! active edges, then leave-one-out outgoing messages, then point
//! decisions), and for the sparse variant a support maintenance step that
//! zeroes the means of messages leaving unlikely variables. A reweighted
//! wrapper restarts the hyperpriors from the current estimate plus the
//! back-projected residual energy after a fixed iteration budget.

use crate::error::{Error, Result};
use crate::frame::LowDensityFrame;
use crate::gaussian::{check_to_var, posterior_decision, var_to_check, CheckObservation, Gaussian};
use crate::rng;
use crate::schedule::{active_beta_update, draw_mask, ScheduleKind, SerialOrder};
use crate::select::{top_l_indices, top_l_within, Selection};

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Hyperpriors are floored here instead of letting the improper prior's
/// singularity at zero produce division blowups.
pub const BETA_MIN: f64 = 1e-12;

/// Which decoder variant drives the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    SupremOne,
    SupremTwo,
}

/// Stopping criterion selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stopping {
    /// Stop once the estimate stops moving in relative terms.
    EstimateConverged,
    /// Stop once the running minimum residual has not improved for the
    /// stall window.
    ResidualStall,
    /// Run the full iteration budget.
    MaxIters,
}

/// Why a decode ended. `MaxIters` doubles as the nonconvergence status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    Stalled,
    MaxIters,
}

#[derive(Debug, Clone)]
pub struct DecoderConfig {
    /// Total iteration budget `T`.
    pub max_iters: usize,
    /// Stall window `T_d` for the residual criterion.
    pub stall_window: usize,
    pub stopping: Stopping,
    pub schedule: ScheduleKind,
    /// Measurement noise variance. Required by SuPrEM I; optional for
    /// SuPrEM II (absent means the check nodes add nothing).
    pub noise_var: Option<f64>,
    /// Sparsity level `L`; required by SuPrEM II.
    pub sparsity: Option<usize>,
    /// Reweighing stage budgets. Empty disables reweighing; otherwise the
    /// budgets must sum to `max_iters`.
    pub stage_iters: Vec<usize>,
    pub selection: Selection,
    /// Record one hyperprior snapshot per iteration in the trace.
    pub record_beta_snapshots: bool,
}

impl DecoderConfig {
    pub fn new(schedule: ScheduleKind) -> Self {
        DecoderConfig {
            max_iters: 500,
            stall_window: 30,
            stopping: Stopping::ResidualStall,
            schedule,
            noise_var: None,
            sparsity: None,
            stage_iters: Vec::new(),
            selection: Selection::Quickselect,
            record_beta_snapshots: false,
        }
    }

    /// Split the iteration budget into `r` reweighing stages of near-equal
    /// length summing exactly to `max_iters`.
    pub fn with_reweighings(mut self, r: usize) -> Self {
        let base = self.max_iters / r;
        let extra = self.max_iters % r;
        self.stage_iters = (0..r).map(|k| base + usize::from(k < extra)).collect();
        self
    }

    fn validate(&self, algo: Algo, frame: &LowDensityFrame) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be positive".into()));
        }
        if self.stopping == Stopping::ResidualStall {
            if self.stall_window == 0 {
                return Err(Error::InvalidConfig("stall window must be positive".into()));
            }
            if self.stall_window >= self.max_iters {
                return Err(Error::InvalidConfig(format!(
                    "stall window {} must be below max_iters {}",
                    self.stall_window, self.max_iters
                )));
            }
        }
        self.schedule.validate()?;
        if let Some(s2) = self.noise_var {
            if !(s2 >= 0.0) {
                return Err(Error::NonpositiveVariance(s2));
            }
        }
        if !self.stage_iters.is_empty() {
            if self.stage_iters.iter().any(|&t| t == 0) {
                return Err(Error::InvalidConfig("empty reweighing stage".into()));
            }
            let total: usize = self.stage_iters.iter().sum();
            if total != self.max_iters {
                return Err(Error::InvalidConfig(format!(
                    "stage budgets sum to {total}, expected max_iters = {}",
                    self.max_iters
                )));
            }
        }
        match algo {
            Algo::SupremOne => {
                if self.noise_var.is_none() {
                    return Err(Error::InvalidConfig(
                        "SuPrEM I requires the noise variance".into(),
                    ));
                }
            }
            Algo::SupremTwo => match self.sparsity {
                None => {
                    return Err(Error::InvalidConfig(
                        "SuPrEM II requires the sparsity level L".into(),
                    ))
                }
                Some(l) => {
                    if l == 0 {
                        return Err(Error::InvalidConfig("L must be positive".into()));
                    }
                    if l > frame.n_vars() {
                        return Err(Error::LExceedsM {
                            l,
                            m: frame.n_vars(),
                        });
                    }
                }
            },
        }
        Ok(())
    }
}

/// Per-decode diagnostics.
#[derive(Debug, Clone)]
pub struct DecodeTrace {
    /// `||r - F xhat||_2` after every iteration, across all stages.
    pub residuals: Vec<f64>,
    /// Total iterations executed.
    pub iterations: usize,
    pub stop: StopReason,
    /// Cumulative iteration count at the end of each reweighing stage.
    pub stage_boundaries: Vec<usize>,
    pub beta_snapshots: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone)]
pub struct DecodeOutput {
    pub xhat: Vec<f64>,
    pub beta: Vec<f64>,
    /// Final candidate support (SuPrEM II only), ascending.
    pub support: Option<Vec<usize>>,
    pub trace: DecodeTrace,
}

/// Scalar M-step of the hyperprior EM: the maximizer of
/// `Q(beta) = C - (3/2) ln beta - (mu^2 + v) / (2 beta)` over `beta > 0`,
/// which is `(mu^2 + v) / 3`.
pub fn em_update_beta(mu: f64, v: f64) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::NonpositiveVariance(v));
    }
    Ok((mu * mu + v) / 3.0)
}

/// Initial hyperpriors `beta_k = ((F^T r)_k)^2 / d_v^2`, floored at
/// [`BETA_MIN`].
pub fn init_betas(frame: &LowDensityFrame, r: &[f64]) -> Result<Vec<f64>> {
    if r.len() != frame.n_checks() {
        return Err(Error::DimensionMismatch {
            expected: frame.n_checks(),
            got: r.len(),
        });
    }
    let mut out = vec![0.0; frame.n_vars()];
    backprojected_energy(frame, r, &mut out);
    for b in &mut out {
        *b = b.max(BETA_MIN);
    }
    Ok(out)
}

/// `out_k = ((F^T v)_k)^2 / d_v^2`.
fn backprojected_energy(frame: &LowDensityFrame, v: &[f64], out: &mut [f64]) {
    frame.transpose_matvec_into(v, out);
    let dv2 = (frame.d_v() * frame.d_v()) as f64;
    for t in out.iter_mut() {
        *t = (*t * *t) / dv2;
    }
}

/// One sparsification step of SuPrEM II.
///
/// `O2` is the set of the `l` largest hyperpriors, `O = O1_prev U O2` the
/// candidate set, and the returned `keep` (the new `O1`) holds the `l`
/// indices of `O` with the largest decision magnitudes. Everything outside
/// `keep` has its outgoing message means zeroed by the caller while the
/// variances stay.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sparsification {
    /// `O`, ascending; `l <= |O| <= 2 l`.
    pub candidates: Vec<usize>,
    /// `O1`, ascending; exactly `min(l, |O|)` entries.
    pub keep: Vec<usize>,
}

pub fn sparsify(
    beta: &[f64],
    decisions: &[f64],
    l: usize,
    o1_prev: &[usize],
    selection: Selection,
) -> Result<Sparsification> {
    if l > beta.len() {
        return Err(Error::LExceedsM {
            l,
            m: beta.len(),
        });
    }
    debug_assert!(o1_prev.len() <= l);
    let o2 = top_l_indices(beta, l, selection);
    let candidates = union_sorted(o1_prev, &o2);
    let keep = top_l_within(decisions, &candidates, l, selection);
    Ok(Sparsification { candidates, keep })
}

fn union_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// SuPrEM I: dense Gaussian posterior decisions at every variable.
pub fn suprem1_decode(
    frame: &LowDensityFrame,
    r: &[f64],
    config: &DecoderConfig,
) -> Result<DecodeOutput> {
    decode(frame, r, config, Algo::SupremOne)
}

/// SuPrEM II: as SuPrEM I plus per-iteration sparsification; the output is
/// exactly `L`-sparse (ties broken by lower index).
pub fn suprem2_decode(
    frame: &LowDensityFrame,
    r: &[f64],
    config: &DecoderConfig,
) -> Result<DecodeOutput> {
    decode(frame, r, config, Algo::SupremTwo)
}

/// Reweighted wrapper: runs the chosen decoder in stages, restarting the
/// hyperpriors between stages from
/// `beta_k' = xhat_k^2 + ((F^T (r - F xhat))_k)^2 / d_v^2`
/// and resetting the messages to `(0, beta')`. Requires a non-empty stage
/// split (see [`DecoderConfig::with_reweighings`]).
pub fn reweighted_decode(
    frame: &LowDensityFrame,
    r: &[f64],
    config: &DecoderConfig,
    algo: Algo,
) -> Result<DecodeOutput> {
    if config.stage_iters.is_empty() {
        return Err(Error::InvalidConfig(
            "reweighted decode needs at least one stage".into(),
        ));
    }
    decode(frame, r, config, algo)
}

/// Shared entry point: a plain decode is a single stage covering the whole
/// budget.
fn decode(
    frame: &LowDensityFrame,
    r: &[f64],
    config: &DecoderConfig,
    algo: Algo,
) -> Result<DecodeOutput> {
    config.validate(algo, frame)?;
    if r.len() != frame.n_checks() {
        return Err(Error::DimensionMismatch {
            expected: frame.n_checks(),
            got: r.len(),
        });
    }
    let stages: Vec<usize> = if config.stage_iters.is_empty() {
        vec![config.max_iters]
    } else {
        config.stage_iters.clone()
    };

    let mut engine = Engine::new(frame, r, config, algo)?;
    let mut trace = DecodeTrace {
        residuals: Vec::new(),
        iterations: 0,
        stop: StopReason::MaxIters,
        stage_boundaries: Vec::new(),
        beta_snapshots: config.record_beta_snapshots.then(Vec::new),
    };

    let beta0 = init_betas(frame, r)?;
    engine.reset(&beta0, 0);
    for (stage, &budget) in stages.iter().enumerate() {
        if stage > 0 {
            let beta = engine.reweighted_betas();
            engine.reset(&beta, stage);
        }
        let reason = engine.run_stage(budget, &mut trace)?;
        trace.stage_boundaries.push(trace.iterations);
        trace.stop = reason;
        if reason == StopReason::Converged {
            break;
        }
    }

    Ok(DecodeOutput {
        xhat: engine.xhat.clone(),
        beta: engine.beta.clone(),
        support: (algo == Algo::SupremTwo).then(|| engine.o1.clone()),
        trace,
    })
}

/// Message-passing state over one frame. Edge messages live in two flat
/// arrays: variable-to-check messages indexed by check-slot position (so a
/// check reads its inbox contiguously) and check-to-variable messages
/// indexed by var-slot position.
struct Engine<'a> {
    frame: &'a LowDensityFrame,
    observation: &'a [f64],
    sigma2: f64,
    algo: Algo,
    config: &'a DecoderConfig,
    /// Schedule with the mask seed re-derived for the current stage.
    stage_schedule: ScheduleKind,

    v2c: Vec<Gaussian>,
    c2v: Vec<Gaussian>,
    active: Vec<bool>,
    beta: Vec<f64>,
    decisions: Vec<f64>,
    xhat: Vec<f64>,
    prev_xhat: Vec<f64>,
    o1: Vec<usize>,
    suppressed: Vec<bool>,

    residual_scratch: Vec<f64>,
    msg_scratch: Vec<Gaussian>,
    pair_scratch: Vec<(Gaussian, bool)>,
    order_scratch: Vec<u32>,

    best_residual: f64,
    iters_since_improve: usize,
}

impl<'a> Engine<'a> {
    fn new(
        frame: &'a LowDensityFrame,
        observation: &'a [f64],
        config: &'a DecoderConfig,
        algo: Algo,
    ) -> Result<Self> {
        // `validate` guarantees a noise variance for SuPrEM I; SuPrEM II
        // treats an absent one as zero.
        let sigma2 = config.noise_var.unwrap_or(0.0);
        let m = frame.n_vars();
        Ok(Engine {
            frame,
            observation,
            sigma2,
            algo,
            config,
            stage_schedule: config.schedule,
            v2c: vec![Gaussian::VACUOUS; frame.n_edges()],
            c2v: vec![Gaussian::VACUOUS; frame.n_edges()],
            active: vec![false; frame.n_edges()],
            beta: vec![BETA_MIN; m],
            decisions: vec![0.0; m],
            xhat: vec![0.0; m],
            prev_xhat: vec![0.0; m],
            o1: Vec::new(),
            suppressed: vec![false; m],
            residual_scratch: vec![0.0; frame.n_checks()],
            msg_scratch: Vec::with_capacity(frame.d_c().max(frame.d_v())),
            pair_scratch: Vec::with_capacity(frame.d_v()),
            order_scratch: (0..m as u32).collect(),
            best_residual: f64::INFINITY,
            iters_since_improve: 0,
        })
    }

    /// Restart message passing from the given hyperpriors (stage boundary or
    /// initial setup).
    fn reset(&mut self, beta: &[f64], stage: usize) {
        self.beta.copy_from_slice(beta);
        let dv = self.frame.d_v();
        for (j, &b) in beta.iter().enumerate() {
            for t in 0..dv {
                let pos = self.frame.var_slot_to_check_slot(j * dv + t);
                self.v2c[pos] = Gaussian { mean: 0.0, var: b };
            }
        }
        self.c2v.fill(Gaussian::VACUOUS);
        self.active.fill(false);
        self.o1.clear();
        self.suppressed.fill(false);
        self.prev_xhat.copy_from_slice(&self.xhat);
        self.best_residual = f64::INFINITY;
        self.iters_since_improve = 0;
        self.stage_schedule = match self.config.schedule {
            ScheduleKind::Probabilistic { p_on, seed } if stage > 0 => {
                ScheduleKind::Probabilistic {
                    p_on,
                    seed: rng::mix(seed ^ rng::mix(stage as u64)),
                }
            }
            other => other,
        };
    }

    /// Hyperpriors for the next reweighing stage, from the current estimate.
    fn reweighted_betas(&mut self) -> Vec<f64> {
        let frame = self.frame;
        frame.matvec_into(&self.xhat, &mut self.residual_scratch);
        for (s, &r) in self.residual_scratch.iter_mut().zip(self.observation) {
            *s = r - *s;
        }
        let mut beta = vec![0.0; frame.n_vars()];
        backprojected_energy(frame, &self.residual_scratch, &mut beta);
        for (b, &x) in beta.iter_mut().zip(&self.xhat) {
            *b = (x * x + *b).max(BETA_MIN);
        }
        beta
    }

    fn run_stage(&mut self, budget: usize, trace: &mut DecodeTrace) -> Result<StopReason> {
        for local_t in 1..=budget {
            match self.config.schedule {
                ScheduleKind::Serial(order) => self.serial_iteration(order, local_t)?,
                _ => self.parallel_iteration(local_t)?,
            }
            match self.algo {
                Algo::SupremOne => self.xhat.copy_from_slice(&self.decisions),
                Algo::SupremTwo => self.sparsify_pass()?,
            }
            let res = self.residual();
            trace.residuals.push(res);
            trace.iterations += 1;
            if let Some(snaps) = trace.beta_snapshots.as_mut() {
                snaps.push(self.beta.clone());
            }

            match self.config.stopping {
                Stopping::EstimateConverged => {
                    let mut diff2 = 0.0;
                    let mut norm2 = 0.0;
                    for (a, b) in self.xhat.iter().zip(&self.prev_xhat) {
                        diff2 += (a - b) * (a - b);
                        norm2 += a * a;
                    }
                    if diff2.sqrt() <= 1e-9 * norm2.sqrt() {
                        self.prev_xhat.copy_from_slice(&self.xhat);
                        return Ok(StopReason::Converged);
                    }
                }
                Stopping::ResidualStall => {
                    if res < self.best_residual * (1.0 - 1e-12) {
                        self.best_residual = res;
                        self.iters_since_improve = 0;
                    } else {
                        self.iters_since_improve += 1;
                        if self.iters_since_improve >= self.config.stall_window {
                            self.prev_xhat.copy_from_slice(&self.xhat);
                            return Ok(StopReason::Stalled);
                        }
                    }
                }
                Stopping::MaxIters => {}
            }
            self.prev_xhat.copy_from_slice(&self.xhat);
        }
        Ok(StopReason::MaxIters)
    }

    /// Flooding or probabilistic iteration: full check pass under the mask,
    /// then a full variable pass.
    fn parallel_iteration(&mut self, local_t: usize) -> Result<()> {
        let frame = self.frame;
        let mask = draw_mask(&self.stage_schedule, local_t, frame.n_checks());
        let dc = frame.d_c();
        for i in 0..frame.n_checks() {
            let base = i * dc;
            if mask.is_on(i) {
                let obs = CheckObservation {
                    value: self.observation[i],
                    noise_var: self.sigma2,
                };
                for s in 0..dc {
                    self.msg_scratch.clear();
                    for k in 0..dc {
                        if k != s {
                            self.msg_scratch.push(self.v2c[base + k]);
                        }
                    }
                    let out = check_to_var(obs, &self.msg_scratch)?;
                    let dst = frame.check_slot_to_var_slot(base + s);
                    self.c2v[dst] = out;
                    self.active[dst] = true;
                }
            } else {
                for s in 0..dc {
                    let dst = frame.check_slot_to_var_slot(base + s);
                    self.c2v[dst] = self.v2c[base + s];
                    self.active[dst] = false;
                }
            }
        }
        for k in 0..frame.n_vars() {
            self.variable_update(k)?;
        }
        Ok(())
    }

    /// Serial iteration: visit variables in order; refresh each variable's
    /// inbox from the current check states, then send its outgoing messages
    /// with the hyperprior from the previous sweep. Hyperpriors and
    /// decisions update once per sweep at the end.
    fn serial_iteration(&mut self, order: SerialOrder, local_t: usize) -> Result<()> {
        let frame = self.frame;
        let (dv, dc) = (frame.d_v(), frame.d_c());
        match order {
            SerialOrder::Lexicographic => {
                for (j, slot) in self.order_scratch.iter_mut().enumerate() {
                    *slot = j as u32;
                }
            }
            SerialOrder::Random { seed } => {
                for (j, slot) in self.order_scratch.iter_mut().enumerate() {
                    *slot = j as u32;
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(local_t as u64);
                self.order_scratch.shuffle(&mut rng);
            }
            SerialOrder::Reliability => {
                for (j, slot) in self.order_scratch.iter_mut().enumerate() {
                    *slot = j as u32;
                }
                let beta = &self.beta;
                self.order_scratch.sort_by(|&a, &b| {
                    beta[b as usize]
                        .total_cmp(&beta[a as usize])
                        .then(a.cmp(&b))
                });
            }
        }
        for idx in 0..self.order_scratch.len() {
            let k = self.order_scratch[idx] as usize;
            let vbase = k * dv;
            // fresh inbox for k from the current check states
            for t in 0..dv {
                let cpos = frame.var_slot_to_check_slot(vbase + t);
                let i = cpos / dc;
                let s = cpos % dc;
                let base = i * dc;
                let obs = CheckObservation {
                    value: self.observation[i],
                    noise_var: self.sigma2,
                };
                self.msg_scratch.clear();
                for kk in 0..dc {
                    if kk != s {
                        self.msg_scratch.push(self.v2c[base + kk]);
                    }
                }
                let dst = frame.check_slot_to_var_slot(base + s);
                debug_assert_eq!(dst, vbase + t);
                self.c2v[dst] = check_to_var(obs, &self.msg_scratch)?;
                self.active[dst] = true;
            }
            // outgoing messages with the previous sweep's hyperprior
            for t in 0..dv {
                self.msg_scratch.clear();
                for u in 0..dv {
                    if u != t {
                        self.msg_scratch.push(self.c2v[vbase + u]);
                    }
                }
                let out = var_to_check(&self.msg_scratch, self.beta[k])?;
                self.v2c[frame.var_slot_to_check_slot(vbase + t)] = out;
            }
        }
        // per-sweep hyperprior updates and decisions
        for k in 0..frame.n_vars() {
            let vbase = k * dv;
            self.pair_scratch.clear();
            for t in 0..dv {
                self.pair_scratch.push((self.c2v[vbase + t], true));
            }
            let up = active_beta_update(&self.pair_scratch, self.beta[k])?;
            self.beta[k] = up.beta.max(BETA_MIN);
            let (x, _) = posterior_decision(&self.c2v[vbase..vbase + dv], self.beta[k])?;
            self.decisions[k] = x;
        }
        Ok(())
    }

    /// Hyperprior update, outgoing messages and decision at variable `k`
    /// (flooding/probabilistic path).
    fn variable_update(&mut self, k: usize) -> Result<()> {
        let frame = self.frame;
        let dv = frame.d_v();
        let vbase = k * dv;
        self.pair_scratch.clear();
        for t in 0..dv {
            self.pair_scratch.push((self.c2v[vbase + t], self.active[vbase + t]));
        }
        let up = active_beta_update(&self.pair_scratch, self.beta[k])?;
        self.beta[k] = up.beta.max(BETA_MIN);

        for t in 0..dv {
            self.msg_scratch.clear();
            for u in 0..dv {
                if u != t {
                    self.msg_scratch.push(self.c2v[vbase + u]);
                }
            }
            let out = var_to_check(&self.msg_scratch, self.beta[k])?;
            self.v2c[frame.var_slot_to_check_slot(vbase + t)] = out;
        }

        let (x, _) = posterior_decision(&self.c2v[vbase..vbase + dv], self.beta[k])?;
        self.decisions[k] = x;
        Ok(())
    }

    /// Support maintenance of SuPrEM II. The per-iteration estimate keeps
    /// only the `L` selected coefficients; message means outside the
    /// selection are zeroed retroactively for the messages just sent.
    fn sparsify_pass(&mut self) -> Result<()> {
        let l = self.config.sparsity.expect("validated");
        let sp = sparsify(
            &self.beta,
            &self.decisions,
            l,
            &self.o1,
            self.config.selection,
        )?;
        self.xhat.fill(0.0);
        for &k in &sp.keep {
            self.xhat[k] = self.decisions[k];
        }
        self.suppressed.fill(true);
        for &k in &sp.keep {
            self.suppressed[k] = false;
        }
        let dv = self.frame.d_v();
        for k in 0..self.frame.n_vars() {
            if self.suppressed[k] {
                for t in 0..dv {
                    self.v2c[self.frame.var_slot_to_check_slot(k * dv + t)].mean = 0.0;
                }
            }
        }
        self.o1 = sp.keep;
        Ok(())
    }

    fn residual(&mut self) -> f64 {
        self.frame.matvec_into(&self.xhat, &mut self.residual_scratch);
        let mut acc = 0.0;
        for (y, &r) in self.residual_scratch.iter().zip(self.observation) {
            let d = r - *y;
            acc += d * d;
        }
        acc.sqrt()
    }
}
