//! Radial sampling grids. Radii are stored as `log r`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridSpec {
    /// `r = R0 · g^k`, `k = 0..points`.
    Geometric { log_r0: f64, ratio: f64, points: usize },
    /// `log r` uniformly spaced on `[log_r_min, log_r_max]`.
    LogUniform { log_r_min: f64, log_r_max: f64, points: usize },
    /// `log log r` uniformly spaced; needs `log_r_min > 0`.
    LogLogUniform { log_r_min: f64, log_r_max: f64, points: usize },
    Explicit { log_r: Vec<f64> },
}

impl GridSpec {
    /// The documented default: `g = 1.25`, 200 points from `R0`.
    pub fn default_geometric(log_r0: f64) -> Self {
        GridSpec::Geometric { log_r0, ratio: 1.25, points: 200 }
    }

    /// Doubly exponential grid used for the growth parameters.
    pub fn params_default() -> Self {
        GridSpec::LogLogUniform { log_r_min: 2f64.exp(), log_r_max: 705f64.exp(), points: 200 }
    }

    pub fn build(&self) -> Result<RadiusGrid> {
        let pts = match self {
            GridSpec::Geometric { log_r0, ratio, points } => {
                if !(*ratio > 1.0) {
                    return Err(Error::InvalidParameter(format!("grid ratio {ratio} must exceed 1")));
                }
                let step = ratio.ln();
                (0..*points).map(|k| log_r0 + step * k as f64).collect()
            }
            GridSpec::LogUniform { log_r_min, log_r_max, points } => linspace(*log_r_min, *log_r_max, *points)?,
            GridSpec::LogLogUniform { log_r_min, log_r_max, points } => {
                if !(*log_r_min > 0.0) {
                    return Err(Error::InvalidParameter("log-log grid needs log_r_min > 0".into()));
                }
                let mut v: Vec<f64> =
                    linspace(log_r_min.ln(), log_r_max.ln(), *points)?.into_iter().map(f64::exp).collect();
                v[0] = *log_r_min;
                let last = v.len() - 1;
                v[last] = *log_r_max;
                v
            }
            GridSpec::Explicit { log_r } => log_r.clone(),
        };
        RadiusGrid::new(pts)
    }

    /// Same family with twice the span (in the grid's own coordinate) and twice the points.
    pub fn doubled(&self) -> Self {
        match self {
            GridSpec::Geometric { log_r0, ratio, points } => {
                GridSpec::Geometric { log_r0: *log_r0, ratio: *ratio, points: points * 2 }
            }
            GridSpec::LogUniform { log_r_min, log_r_max, points } => GridSpec::LogUniform {
                log_r_min: *log_r_min,
                log_r_max: log_r_max + (log_r_max - log_r_min),
                points: points * 2,
            },
            GridSpec::LogLogUniform { log_r_min, log_r_max, points } => {
                let hi = (2.0 * log_r_max.ln() - log_r_min.ln()).min(707.0);
                GridSpec::LogLogUniform { log_r_min: *log_r_min, log_r_max: hi.exp(), points: points * 2 }
            }
            GridSpec::Explicit { log_r } => {
                let mut v = log_r.clone();
                if let (Some(&a), Some(&b)) = (log_r.first(), log_r.last()) {
                    let n = log_r.len().max(2);
                    let step = (b - a) / (n - 1) as f64;
                    v.extend((1..=n).map(|k| b + step * k as f64));
                }
                GridSpec::Explicit { log_r: v }
            }
        }
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(b > a) {
        return Err(Error::InvalidParameter(format!("bad grid range [{a}, {b}] with {n} points")));
    }
    let h = (b - a) / (n - 1) as f64;
    Ok((0..n).map(|k| if k + 1 == n { b } else { a + h * k as f64 }).collect())
}

/// Strictly increasing list of `log r` values.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusGrid {
    log_r: Vec<f64>,
}

impl RadiusGrid {
    pub fn new(log_r: Vec<f64>) -> Result<Self> {
        if log_r.is_empty() {
            return Err(Error::InsufficientGrid("empty grid".into()));
        }
        if log_r.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("grid contains non-finite radii".into()));
        }
        if log_r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("grid radii must be strictly increasing".into()));
        }
        Ok(Self { log_r })
    }

    pub fn log_r(&self) -> &[f64] {
        &self.log_r
    }

    pub fn len(&self) -> usize {
        self.log_r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_r.is_empty()
    }

    /// Index where the tail half begins.
    pub fn tail_start(&self) -> usize {
        self.log_r.len() / 2
    }

    pub fn tail(&self) -> &[f64] {
        &self.log_r[self.tail_start()..]
    }

    /// Number of decades of `r` covered.
    pub fn decades(&self) -> f64 {
        (self.log_r[self.log_r.len() - 1] - self.log_r[0]) / std::f64::consts::LN_10
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_default_spacing() {
        let g = GridSpec::default_geometric(1.0).build().unwrap();
        assert_eq!(g.len(), 200);
        assert!((g.log_r()[1] - g.log_r()[0] - 1.25f64.ln()).abs() < 1e-15);
        assert!(g.decades() > 18.0);
    }

    #[test]
    fn loglog_endpoints() {
        let g = GridSpec::LogLogUniform { log_r_min: 10.0, log_r_max: 2000.0, points: 50 }.build().unwrap();
        assert!((g.log_r()[0] - 10.0).abs() < 1e-12);
        assert_eq!(*g.log_r().last().unwrap(), 2000.0);
        assert_eq!(g.tail().len(), 25);
    }

    #[test]
    fn rejects_unsorted() {
        assert!(RadiusGrid::new(vec![1.0, 1.0]).is_err());
        assert!(GridSpec::LogUniform { log_r_min: 2.0, log_r_max: 1.0, points: 5 }.build().is_err());
    }

    #[test]
    fn doubling_extends_span() {
        let spec = GridSpec::LogUniform { log_r_min: 0.0, log_r_max: 10.0, points: 11 };
        let g = spec.doubled().build().unwrap();
        assert_eq!(g.len(), 22);
        assert!((g.log_r().last().unwrap() - 20.0).abs() < 1e-12);
    }
}
