use rand::Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use super::VolPath;
use crate::error::{Error, Result};
use crate::rng::stream;
use crate::series::{floor_index, Series};

/// Bubble episode `[tau_e, tau_c]` of the reinitialising model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BubbleWindow {
    pub tau_e: f64,
    pub tau_c: f64,
}

/// Data generating process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Dgp {
    /// `y_t = mu_tilde T^{-eta} + y_{t-1} + e_t`.
    RwDrift { mu_tilde: f64, eta: f64 },
    /// Random walk with explosive episodes `y_t = rho_T y_{t-1} + e_t` on
    /// `[T_e, T_c]`, `rho_T = 1 + c T^{-alpha}`; after `T_c` the walk restarts
    /// from `y_{T_e} + y_star`.
    PwyBubble {
        bubbles: Vec<BubbleWindow>,
        c: f64,
        alpha: f64,
        #[serde(default)]
        y_star: f64,
    },
    /// `y_t = level + u_t` with `u_t = (1 + d1) u_{t-1} + e_t` for
    /// `T_e < t <= T_c`, `u_t = (1 - d2) u_{t-1} + e_t` for `T_c < t <= T_r`
    /// and a random walk with drift `mu_tilde T^{-eta}` otherwise;
    /// `d1 = c1 T^{-alpha}`, `d2 = c2 T^{-beta}` (exponent 0 gives fixed deltas).
    CollapseBubble {
        tau_e: f64,
        tau_c: f64,
        tau_r: f64,
        c1: f64,
        alpha: f64,
        c2: f64,
        beta: f64,
        #[serde(default)]
        level: f64,
        #[serde(default)]
        mu_tilde: f64,
        #[serde(default)]
        eta: f64,
    },
    /// `y_t = mu + rho_T y_{t-1} + e_t`, `rho_T = 1 + c / T^alpha`.
    MildlyExplosive {
        c: f64,
        alpha: f64,
        #[serde(default)]
        mu: f64,
    },
}

/// Innovation law of `z_t` (scaled to unit variance).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Innovations {
    #[default]
    Normal,
    StudentT { df: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DgpSpec {
    #[serde(flatten)]
    pub dgp: Dgp,
    #[serde(rename = "T")]
    pub t: usize,
    #[serde(default)]
    pub y0: f64,
    #[serde(default)]
    pub innovations: Innovations,
    /// Multiplies every innovation; 0 gives the noiseless path.
    #[serde(default = "one")]
    pub noise_scale: f64,
}

fn one() -> f64 {
    1.0
}

impl DgpSpec {
    pub fn new(dgp: Dgp, t: usize) -> Self {
        DgpSpec {
            dgp,
            t,
            y0: 0.0,
            innovations: Innovations::Normal,
            noise_scale: 1.0,
        }
    }

    /// Driftless random walk.
    pub fn random_walk(t: usize) -> Self {
        DgpSpec::new(Dgp::RwDrift { mu_tilde: 0.0, eta: 0.0 }, t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t < 20 {
            return Err(Error::invalid(format!("T = {} but simulations need T >= 20", self.t)));
        }
        if !(self.noise_scale >= 0.0 && self.noise_scale.is_finite()) {
            return Err(Error::invalid("noise_scale must be finite and non-negative"));
        }
        if let Innovations::StudentT { df } = self.innovations {
            if !(df > 2.0) {
                return Err(Error::invalid("Student-t innovations need df > 2"));
            }
        }
        let exponent = |x: f64, name: &str| {
            if (0.0..1.0).contains(&x) {
                Ok(())
            } else {
                Err(Error::invalid(format!("exponent {name} = {x} outside [0, 1)")))
            }
        };
        let order = |a: f64, b: f64| {
            if (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b) && a <= b {
                Ok(())
            } else {
                Err(Error::invalid("regime fractions must satisfy 0 <= tau_e < tau_c <= tau_r <= 1"))
            }
        };
        match &self.dgp {
            Dgp::RwDrift { eta, .. } => exponent(*eta, "eta"),
            Dgp::PwyBubble { bubbles, alpha, .. } => {
                exponent(*alpha, "alpha")?;
                let mut prev = 0.0;
                for b in bubbles {
                    order(prev, b.tau_e)?;
                    if !(b.tau_e < b.tau_c) {
                        return Err(Error::invalid("each bubble needs tau_e < tau_c"));
                    }
                    order(b.tau_e, b.tau_c)?;
                    prev = b.tau_c;
                }
                Ok(())
            }
            Dgp::CollapseBubble { tau_e, tau_c, tau_r, alpha, beta, eta, .. } => {
                exponent(*alpha, "alpha")?;
                exponent(*beta, "beta")?;
                exponent(*eta, "eta")?;
                if !(tau_e < tau_c) {
                    return Err(Error::invalid("regime fractions must satisfy 0 <= tau_e < tau_c <= tau_r <= 1"));
                }
                order(*tau_e, *tau_c)?;
                order(*tau_c, *tau_r)
            }
            Dgp::MildlyExplosive { alpha, .. } => exponent(*alpha, "alpha"),
        }
    }
}

/// Draws `T` innovations `e_t = sigma_t z_t` scaled by `noise_scale`.
pub fn innovations<R: Rng + ?Sized>(spec: &DgpSpec, vol: &VolPath, rng: &mut R) -> Result<Vec<f64>> {
    let sig = vol.sigmas(spec.t)?;
    let scale = spec.noise_scale;
    Ok(match spec.innovations {
        Innovations::Normal => sig
            .iter()
            .map(|s| {
                let z: f64 = rng.sample(StandardNormal);
                scale * s * z
            })
            .collect(),
        Innovations::StudentT { df } => {
            let d = StudentT::new(df).map_err(|e| Error::invalid(e.to_string()))?;
            let norm = ((df - 2.0) / df).sqrt();
            sig.iter().map(|s| scale * s * norm * d.sample(rng)).collect()
        }
    })
}

/// Simulates `spec` with volatility `vol` from stream 0 of `seed`.
pub fn simulate(spec: &DgpSpec, vol: &VolPath, seed: u64) -> Result<Series> {
    simulate_with(spec, vol, &mut stream(seed, 0))
}

/// Simulates from a caller-supplied generator.
pub fn simulate_with<R: Rng + ?Sized>(spec: &DgpSpec, vol: &VolPath, rng: &mut R) -> Result<Series> {
    spec.validate()?;
    let eps = innovations(spec, vol, rng)?;
    Series::new(path(spec, &eps))
}

/// Deterministic recursion on given innovations `e_1..e_T`.
pub fn path(spec: &DgpSpec, eps: &[f64]) -> Vec<f64> {
    let n = spec.t;
    let tf = n as f64;
    let idx = |tau: f64| floor_index(tau * tf);
    let mut y = Vec::with_capacity(n);
    let mut prev = spec.y0;
    match &spec.dgp {
        Dgp::RwDrift { mu_tilde, eta } => {
            let mu = mu_tilde * tf.powf(-eta);
            for e in eps {
                prev += mu + e;
                y.push(prev);
            }
        }
        Dgp::PwyBubble { bubbles, c, alpha, y_star } => {
            let rho = 1.0 + c * tf.powf(-alpha);
            let spans: Vec<(usize, usize)> = bubbles.iter().map(|b| (idx(b.tau_e), idx(b.tau_c))).collect();
            let mut anchor = spec.y0;
            for t in 1..=n {
                let e = eps[t - 1];
                let mut next = prev + e;
                for &(te, tc) in &spans {
                    if t >= te.max(1) && t <= tc {
                        next = rho * prev + e;
                        if t == te {
                            anchor = next;
                        }
                    } else if t == tc + 1 {
                        next = anchor + y_star + e;
                    }
                }
                prev = next;
                y.push(prev);
            }
        }
        Dgp::CollapseBubble { tau_e, tau_c, tau_r, c1, alpha, c2, beta, level, mu_tilde, eta } => {
            let d1 = c1 * tf.powf(-alpha);
            let d2 = c2 * tf.powf(-beta);
            let mu = mu_tilde * tf.powf(-eta);
            let (t1, t2, t3) = (idx(*tau_e), idx(*tau_c), idx(*tau_r));
            let mut u = spec.y0;
            for t in 1..=n {
                let e = eps[t - 1];
                u = if t > t1 && t <= t2 {
                    (1.0 + d1) * u + e
                } else if t > t2 && t <= t3 {
                    (1.0 - d2) * u + e
                } else {
                    u + mu + e
                };
                y.push(level + u);
            }
        }
        Dgp::MildlyExplosive { c, alpha, mu } => {
            let rho = 1.0 + c * tf.powf(-alpha);
            for e in eps {
                prev = mu + rho * prev + e;
                y.push(prev);
            }
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let spec = DgpSpec::random_walk(50);
        let a = simulate(&spec, &VolPath::Constant, 3).unwrap();
        let b = simulate(&spec, &VolPath::Constant, 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, simulate(&spec, &VolPath::Constant, 4).unwrap());
    }

    #[test]
    fn collapse_grows_geometrically() {
        let mut spec = DgpSpec::new(
            Dgp::CollapseBubble {
                tau_e: 0.4,
                tau_c: 0.6,
                tau_r: 0.7,
                c1: 0.05,
                alpha: 0.0,
                c2: 0.1,
                beta: 0.0,
                level: 2.0,
                mu_tilde: 0.0,
                eta: 0.0,
            },
            100,
        );
        spec.y0 = 1.0;
        spec.noise_scale = 0.0;
        let y = simulate(&spec, &VolPath::Constant, 0).unwrap();
        let u: Vec<f64> = y.values().iter().map(|v| v - 2.0).collect();
        // u_t at u[t-1]
        assert!(u[..40].iter().all(|x| *x == 1.0));
        for t in 41..=60 {
            assert!((u[t - 1] / u[t - 2] - 1.05).abs() < 1e-12);
        }
        for t in 61..=70 {
            assert!((u[t - 1] / u[t - 2] - 0.9).abs() < 1e-12);
        }
        assert!(u[70..].iter().all(|x| *x == u[69]));
    }

    #[test]
    fn pwy_degenerate_bubble_and_reinit() {
        let bubbles = vec![BubbleWindow { tau_e: 0.4, tau_c: 0.6 }];
        let spec = DgpSpec::new(Dgp::PwyBubble { bubbles: bubbles.clone(), c: 0.0, alpha: 0.6, y_star: 0.0 }, 100);
        let eps: Vec<f64> = (0..100).map(|i| ((i * 13) % 7) as f64 - 3.0).collect();
        let y = path(&spec, &eps);
        for t in 41..=60 {
            assert_eq!(y[t - 1] - y[t - 2], eps[t - 1]);
        }
        // restart from y_{T_e} + y*
        assert_eq!(y[60], y[39] + eps[60]);
        let spec = DgpSpec::new(Dgp::PwyBubble { bubbles, c: 1.0, alpha: 0.6, y_star: 2.0 }, 100);
        let y = path(&spec, &eps);
        let rho = 1.0 + 100f64.powf(-0.6);
        assert!((y[44] - (rho * y[43] + eps[44])).abs() < 1e-12);
        assert!((y[60] - (y[39] + 2.0 + eps[60])).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        let bad = DgpSpec::new(
            Dgp::PwyBubble { bubbles: vec![BubbleWindow { tau_e: 0.6, tau_c: 0.4 }], c: 1.0, alpha: 0.5, y_star: 0.0 },
            100,
        );
        assert!(bad.validate().is_err());
        assert!(DgpSpec::random_walk(10).validate().is_err());
        let heavy = DgpSpec { innovations: Innovations::StudentT { df: 5.0 }, ..DgpSpec::random_walk(40) };
        assert_eq!(simulate(&heavy, &VolPath::Constant, 1).unwrap().len(), 40);
    }
}
