//! Message-passing schedules.
//!
//! Besides the classic flooding schedule, the decoders support serial sweeps
//! and a probabilistic on/off schedule: after an initial flooding iteration,
//! each check node is independently "on" with probability `p_on` (default
//! 1/2). An off check reflects the messages it received back over its edges
//! and marks them inactive; hyperprior updates at the variables then use
//! active edges only, while point estimates always use every edge.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decoder::em_update_beta;
use crate::error::{Error, Result};
use crate::gaussian::{clamp_var, Gaussian};

/// Visit order of the serial schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SerialOrder {
    Lexicographic,
    /// Freshly drawn permutation each sweep.
    Random { seed: u64 },
    /// Descending hyperprior scale (most reliable variables first).
    Reliability,
}

/// Which schedule drives an iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScheduleKind {
    Flooding,
    Serial(SerialOrder),
    Probabilistic { p_on: f64, seed: u64 },
}

impl ScheduleKind {
    /// The probabilistic schedule with the default `p_on = 1/2`.
    pub fn probabilistic(seed: u64) -> Self {
        ScheduleKind::Probabilistic { p_on: 0.5, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if let ScheduleKind::Probabilistic { p_on, .. } = self {
            if !(*p_on > 0.0 && *p_on <= 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "p_on must lie in (0, 1], got {p_on}"
                )));
            }
        }
        Ok(())
    }
}

/// Per-check on/off flags for one iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivationMask {
    on: Vec<bool>,
}

impl ActivationMask {
    pub fn all_on(n_checks: usize) -> Self {
        ActivationMask {
            on: vec![true; n_checks],
        }
    }

    #[inline]
    pub fn is_on(&self, check: usize) -> bool {
        self.on[check]
    }

    pub fn n_on(&self) -> usize {
        self.on.iter().filter(|&&b| b).count()
    }

    pub fn len(&self) -> usize {
        self.on.len()
    }

    pub fn is_empty(&self) -> bool {
        self.on.is_empty()
    }
}

/// Draw the activation mask for `iteration` (1-based).
///
/// Iteration 1 is always a full flooding pass. Afterwards the probabilistic
/// schedule switches each check on independently with probability `p_on`,
/// reproducibly from `(seed, iteration)`. Flooding and serial schedules keep
/// every check on.
pub fn draw_mask(kind: &ScheduleKind, iteration: usize, n_checks: usize) -> ActivationMask {
    debug_assert!(iteration >= 1);
    match kind {
        ScheduleKind::Flooding | ScheduleKind::Serial(_) => ActivationMask::all_on(n_checks),
        ScheduleKind::Probabilistic { p_on, seed } => {
            if iteration == 1 {
                return ActivationMask::all_on(n_checks);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            rng.set_stream(iteration as u64);
            let on = (0..n_checks).map(|_| rng.gen::<f64>() < *p_on).collect();
            ActivationMask { on }
        }
    }
}

/// An off check sends back exactly the messages it received, edge by edge.
pub fn off_check_behavior(received: &[Gaussian]) -> Vec<Gaussian> {
    received.to_vec()
}

/// Result of a hyperprior update at one variable node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaUpdate {
    /// Posterior mean over the active edges (after the single-edge override).
    pub mu: f64,
    /// Posterior variance over the active edges.
    pub lambda: f64,
    /// The updated hyperprior scale.
    pub beta: f64,
}

/// Hyperprior update restricted to active edges:
/// `lambda = (sum_active 1/nu + 1/beta_prev)^-1`,
/// `mu = lambda * sum_active mu/nu`,
/// `beta = (mu^2 + lambda) / 3`.
///
/// With no active edge the update is skipped and `beta_prev` is returned
/// unchanged. With exactly one active edge, `mu` is overridden by that
/// edge's incoming mean before the update: the intrinsic information is
/// worth more than the stale prior there.
pub fn active_beta_update(incoming: &[(Gaussian, bool)], beta_prev: f64) -> Result<BetaUpdate> {
    if !(beta_prev > 0.0) {
        return Err(Error::NonpositiveBeta(beta_prev));
    }
    let mut weight = 0.0;
    let mut scaled = 0.0;
    let mut n_active = 0usize;
    let mut last_active_mean = 0.0;
    for &(m, active) in incoming {
        if active {
            let w = 1.0 / m.var;
            weight += w;
            scaled += w * m.mean;
            n_active += 1;
            last_active_mean = m.mean;
        }
    }
    if n_active == 0 {
        return Ok(BetaUpdate {
            mu: 0.0,
            lambda: beta_prev,
            beta: beta_prev,
        });
    }
    let precision = weight + 1.0 / beta_prev;
    let lambda = clamp_var(1.0 / precision);
    let mu = if n_active == 1 {
        last_active_mean
    } else {
        scaled / precision
    };
    Ok(BetaUpdate {
        mu,
        lambda,
        beta: em_update_beta(mu, lambda)?,
    })
}
