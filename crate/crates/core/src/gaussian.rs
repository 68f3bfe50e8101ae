//! Gaussian message algebra and the node update kernels for sum-product
//! passes on a frame graph.
//!
//! Messages are one-dimensional Gaussian densities carried as a
//! `(mean, variance)` pair. Products of Gaussians (variable nodes) and
//! convolutions of Gaussians (check nodes) are again Gaussian, so message
//! passing closes over this representation.

use crate::error::{Error, Result};

/// Result variances are clamped into `[VAR_FLOOR, VAR_CAP]` so reciprocals
/// never overflow. No other damping is applied.
pub const VAR_FLOOR: f64 = 1e-300;
pub const VAR_CAP: f64 = 1e300;

/// A 1-D Gaussian pdf `N(mean, var)`, the message unit of the decoder.
///
/// `var = +inf` encodes the vacuous (uninformative) message: it is the
/// identity of [`Gaussian::product`] and contributes nothing to precision
/// sums. The mean must always be finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian {
    pub mean: f64,
    pub var: f64,
}

impl Gaussian {
    /// The uninformative message.
    pub const VACUOUS: Gaussian = Gaussian {
        mean: 0.0,
        var: f64::INFINITY,
    };

    pub fn new(mean: f64, var: f64) -> Result<Self> {
        if !(var > 0.0) {
            return Err(Error::NonpositiveVariance(var));
        }
        if !mean.is_finite() {
            return Err(Error::InvalidConfig(format!("non-finite mean {mean}")));
        }
        Ok(Gaussian { mean, var })
    }

    pub fn is_vacuous(&self) -> bool {
        self.var.is_infinite()
    }

    /// Pointwise product of two Gaussian pdfs, renormalized:
    /// `B = (A1^-1 + A2^-1)^-1`, `b = B (A1^-1 a1 + A2^-1 a2)`.
    ///
    /// Commutative; the vacuous message is the identity; the result variance
    /// is strictly below both input variances (clamping aside). The mean is
    /// the precision-weighted average computed before any variance clamping,
    /// so clamping never shifts it.
    pub fn product(self, other: Gaussian) -> Gaussian {
        let w1 = 1.0 / self.var;
        let w2 = 1.0 / other.var;
        let precision = w1 + w2;
        if precision == 0.0 {
            return Gaussian::VACUOUS;
        }
        Gaussian {
            mean: (w1 * self.mean + w2 * other.mean) / precision,
            var: clamp_var(1.0 / precision),
        }
    }

    /// Convolution of two Gaussian pdfs: `(a1 + a2, A1 + A2)`.
    pub fn convolve(self, other: Gaussian) -> Gaussian {
        Gaussian {
            mean: self.mean + other.mean,
            var: clamp_var(self.var + other.var),
        }
    }
}

pub(crate) fn clamp_var(v: f64) -> f64 {
    v.clamp(VAR_FLOOR, VAR_CAP)
}

/// One component of the observation attached to a check node: the syndrome
/// value `r_i` and the measurement noise variance.
#[derive(Debug, Clone, Copy)]
pub struct CheckObservation {
    pub value: f64,
    pub noise_var: f64,
}

impl CheckObservation {
    pub fn new(value: f64, noise_var: f64) -> Result<Self> {
        if !(noise_var >= 0.0) {
            return Err(Error::NonpositiveVariance(noise_var));
        }
        Ok(CheckObservation { value, noise_var })
    }
}

/// Outgoing message from a check node, given the messages arriving on its
/// other `d_c - 1` edges:
/// `(r_i - sum mu_k, sum nu_k + sigma^2)`.
///
/// With an empty neighborhood (degree-one check) the message is `(r_i,
/// sigma^2)`, which is only valid for nonzero noise.
pub fn check_to_var(obs: CheckObservation, incoming: &[Gaussian]) -> Result<Gaussian> {
    if incoming.is_empty() && obs.noise_var == 0.0 {
        return Err(Error::EmptyNeighborhood);
    }
    let mut mean = obs.value;
    let mut var = obs.noise_var;
    for m in incoming {
        mean -= m.mean;
        var += m.var;
    }
    Ok(Gaussian {
        mean,
        var: clamp_var(var),
    })
}

/// Outgoing message from a variable node with zero-mean prior variance
/// `beta`, given the messages arriving on its other `d_v - 1` edges:
/// `nu = (sum 1/nu_j + 1/beta)^-1`, `mu = nu * sum mu_j/nu_j`.
///
/// Equivalent to folding [`Gaussian::product`] over `incoming` and the
/// prior message `(0, beta)`. With no incoming messages this is the prior
/// itself.
pub fn var_to_check(incoming: &[Gaussian], beta: f64) -> Result<Gaussian> {
    if !(beta > 0.0) {
        return Err(Error::NonpositiveBeta(beta));
    }
    let (weight, scaled) = precision_sums(incoming);
    let precision = weight + 1.0 / beta;
    Ok(Gaussian {
        mean: scaled / precision,
        var: clamp_var(1.0 / precision),
    })
}

/// Posterior point estimate at a variable node from all `d_v` incoming
/// messages and the prior scale `beta`:
/// `V = (sum 1/nu_j + 1/beta)^-1`, `x = V * sum mu_j/nu_j`.
///
/// Returns `(mean, variance)` of the approximate posterior marginal.
pub fn posterior_decision(incoming: &[Gaussian], beta: f64) -> Result<(f64, f64)> {
    let g = var_to_check(incoming, beta)?;
    Ok((g.mean, g.var))
}

/// Shared precision-weighted sums: `(sum 1/nu_j, sum mu_j/nu_j)`.
pub(crate) fn precision_sums(incoming: &[Gaussian]) -> (f64, f64) {
    let mut weight = 0.0;
    let mut scaled = 0.0;
    for m in incoming {
        let w = 1.0 / m.var;
        weight += w;
        scaled += w * m.mean;
    }
    (weight, scaled)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(mean: f64, var: f64) -> Gaussian {
        Gaussian::new(mean, var).unwrap()
    }

    #[test]
    fn product_symmetric_units() {
        let p = g(0.0, 1.0).product(g(0.0, 1.0));
        assert_eq!(p.mean, 0.0);
        assert_eq!(p.var, 0.5);

        let p = g(1.0, 1.0).product(g(3.0, 1.0));
        assert_eq!(p.mean, 2.0);
        assert_eq!(p.var, 0.5);
    }

    #[test]
    fn product_worked_example() {
        // (1,2) x (5,8): B = (1/2 + 1/8)^-1 = 1.6, b = 1.6 (0.5 + 0.625) = 1.8
        let p = g(1.0, 2.0).product(g(5.0, 8.0));
        assert!((p.var - 1.6).abs() < 1e-15);
        assert!((p.mean - 1.8).abs() < 1e-15);
    }

    #[test]
    fn product_matches_grid_moment_fit() {
        // Multiply two sampled pdfs on a fine grid and re-fit moments.
        let (a, b) = (g(1.0, 2.0), g(5.0, 8.0));
        let lo = -20.0;
        let hi = 25.0;
        let n = 400_000;
        let dx = (hi - lo) / n as f64;
        let pdf = |m: Gaussian, x: f64| {
            (-(x - m.mean) * (x - m.mean) / (2.0 * m.var)).exp() / (2.0 * m.var * std::f64::consts::PI).sqrt()
        };
        let mut mass = 0.0;
        let mut mean = 0.0;
        for i in 0..n {
            let x = lo + (i as f64 + 0.5) * dx;
            let w = pdf(a, x) * pdf(b, x);
            mass += w;
            mean += w * x;
        }
        mean /= mass;
        let mut var = 0.0;
        for i in 0..n {
            let x = lo + (i as f64 + 0.5) * dx;
            let w = pdf(a, x) * pdf(b, x);
            var += w * (x - mean) * (x - mean);
        }
        var /= mass;
        let p = a.product(b);
        assert!((p.mean - mean).abs() < 1e-6, "mean {mean} vs {}", p.mean);
        assert!((p.var - var).abs() < 1e-6, "var {var} vs {}", p.var);
    }

    #[test]
    fn convolve_adds_moments() {
        let c = g(0.0, 1.0).convolve(g(0.0, 1.0));
        assert_eq!((c.mean, c.var), (0.0, 2.0));
        let c = g(1.0, 2.0).convolve(g(-1.0, 3.0));
        assert_eq!((c.mean, c.var), (0.0, 5.0));
    }

    #[test]
    fn convolve_matches_grid_convolution() {
        // Convolve two sampled pdfs numerically and re-fit moments.
        let (a, b) = (g(0.7, 1.3), g(-0.4, 2.1));
        let lo = -25.0;
        let hi = 25.0;
        let n = 8192;
        let dx = (hi - lo) / n as f64;
        let pdf = |m: Gaussian, x: f64| {
            (-(x - m.mean) * (x - m.mean) / (2.0 * m.var)).exp() / (2.0 * m.var * std::f64::consts::PI).sqrt()
        };
        // moments of the convolution via double integral
        let mut mass = 0.0;
        let mut mean = 0.0;
        let mut second = 0.0;
        for i in 0..n {
            let x = lo + (i as f64 + 0.5) * dx;
            let wa = pdf(a, x);
            if wa < 1e-14 {
                continue;
            }
            for j in 0..n {
                let y = lo + (j as f64 + 0.5) * dx;
                let w = wa * pdf(b, y);
                let s = x + y;
                mass += w;
                mean += w * s;
                second += w * s * s;
            }
        }
        mean /= mass;
        let var = second / mass - mean * mean;
        let c = a.convolve(b);
        assert!((c.mean - mean).abs() < 1e-6);
        assert!((c.var - var).abs() < 1e-6);
    }

    #[test]
    fn vacuous_is_product_identity() {
        for m in [g(1.25, 0.75), g(-3.0, 2.0), g(0.0, 1e-6)] {
            for p in [m.product(Gaussian::VACUOUS), Gaussian::VACUOUS.product(m)] {
                assert!((p.mean - m.mean).abs() <= 1e-15 * m.mean.abs());
                assert!((p.var - m.var).abs() <= 1e-15 * m.var);
            }
        }
        assert!(Gaussian::VACUOUS.product(Gaussian::VACUOUS).is_vacuous());
    }

    #[test]
    fn product_commutative_associative() {
        let ms = [g(0.3, 0.2), g(-4.0, 7.5), g(2.0, 0.01), g(100.0, 1e6)];
        for a in ms {
            for b in ms {
                let ab = a.product(b);
                let ba = b.product(a);
                assert!((ab.mean - ba.mean).abs() <= 1e-12 * ab.mean.abs().max(1.0));
                assert!((ab.var - ba.var).abs() <= 1e-12 * ab.var);
                for c in ms {
                    let l = a.product(b).product(c);
                    let r = a.product(b.product(c));
                    assert!((l.mean - r.mean).abs() <= 1e-12 * l.mean.abs().max(1.0));
                    assert!((l.var - r.var).abs() <= 1e-12 * l.var);
                }
            }
        }
    }

    #[test]
    fn product_shrinks_variance() {
        let ms = [g(0.0, 1.0), g(5.0, 3.0), g(-2.0, 0.25)];
        for a in ms {
            for b in ms {
                let p = a.product(b);
                assert!(p.var < a.var && p.var < b.var);
            }
        }
    }

    #[test]
    fn check_update_formula() {
        let obs = CheckObservation::new(5.0, 0.1).unwrap();
        let out = check_to_var(obs, &[g(1.0, 0.5), g(2.0, 0.5)]).unwrap();
        assert!((out.mean - 2.0).abs() < 1e-15);
        assert!((out.var - 1.1).abs() < 1e-15);

        let obs = CheckObservation::new(0.0, 0.0).unwrap();
        let out = check_to_var(obs, &[g(0.0, 1.0); 5]).unwrap();
        assert_eq!((out.mean, out.var), (0.0, 5.0));
    }

    #[test]
    fn degree_one_check_needs_noise() {
        let noiseless = CheckObservation::new(1.0, 0.0).unwrap();
        assert!(matches!(
            check_to_var(noiseless, &[]),
            Err(Error::EmptyNeighborhood)
        ));
        let noisy = CheckObservation::new(1.0, 0.3).unwrap();
        let out = check_to_var(noisy, &[]).unwrap();
        assert_eq!((out.mean, out.var), (1.0, 0.3));
    }

    #[test]
    fn var_update_formula() {
        // no incoming: prior only
        let out = var_to_check(&[], 0.7).unwrap();
        assert_eq!((out.mean, out.var), (0.0, 0.7));

        // single incoming (2,1) with beta = 1
        let out = var_to_check(&[g(2.0, 1.0)], 1.0).unwrap();
        assert_eq!((out.mean, out.var), (1.0, 0.5));

        // {(1,2),(3,4)}, beta=4: nu = (0.5+0.25+0.25)^-1 = 1, mu = 0.5+0.75
        let out = var_to_check(&[g(1.0, 2.0), g(3.0, 4.0)], 4.0).unwrap();
        assert!((out.var - 1.0).abs() < 1e-15);
        assert!((out.mean - 1.25).abs() < 1e-15);
    }

    #[test]
    fn var_update_equals_product_fold() {
        let sets: [&[Gaussian]; 3] = [
            &[g(1.0, 2.0), g(3.0, 4.0)],
            &[g(-0.5, 0.1), g(2.5, 9.0), g(0.0, 1.0)],
            &[],
        ];
        for set in sets {
            for beta in [0.01, 1.0, 42.0] {
                let folded = set
                    .iter()
                    .fold(Gaussian::new(0.0, beta).unwrap(), |acc, m| acc.product(*m));
                let direct = var_to_check(set, beta).unwrap();
                assert!((direct.mean - folded.mean).abs() <= 1e-12 * folded.mean.abs().max(1.0));
                assert!((direct.var - folded.var).abs() <= 1e-12 * folded.var);
            }
        }
    }

    #[test]
    fn decision_formula() {
        // all vacuous: prior only
        let (x, v) = posterior_decision(&[Gaussian::VACUOUS; 3], 0.9).unwrap();
        assert_eq!((x, v), (0.0, 0.9));

        // agreeing messages, huge beta: average with variance 1/3
        let (x, v) = posterior_decision(&[g(2.0, 1.0); 3], 1e290).unwrap();
        assert!((x - 2.0).abs() < 1e-9);
        assert!((v - 1.0 / 3.0).abs() < 1e-9);

        // {(1,1),(3,2),(0,4)}, beta=2: V = (1+0.5+0.25+0.5)^-1 = 4/9
        let (x, v) = posterior_decision(&[g(1.0, 1.0), g(3.0, 2.0), g(0.0, 4.0)], 2.0).unwrap();
        assert!((v - 4.0 / 9.0).abs() < 1e-15);
        assert!((x - 10.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Gaussian::new(0.0, 0.0).is_err());
        assert!(Gaussian::new(0.0, -1.0).is_err());
        assert!(Gaussian::new(f64::NAN, 1.0).is_err());
        assert!(matches!(
            var_to_check(&[], 0.0),
            Err(Error::NonpositiveBeta(_))
        ));
        assert!(matches!(
            posterior_decision(&[], -2.0),
            Err(Error::NonpositiveBeta(_))
        ));
    }

    #[test]
    fn variance_clamping_keeps_means_exact() {
        // Precisions of 1e300 each force the clamp; the mean must still be
        // the weighted average, not a clamped-variance artifact.
        let tiny = g(1.0, VAR_FLOOR);
        let p = tiny.product(tiny);
        assert_eq!(p.var, VAR_FLOOR);
        assert_eq!(p.mean, 1.0);

        let out = var_to_check(&[tiny, tiny], 1.0).unwrap();
        assert_eq!(out.var, VAR_FLOOR);
        assert_eq!(out.mean, 1.0);
    }
}
