//! The comparison radius function s(r), stored through `log h` with `h = s/r`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SKind {
    /// `s(r) = c·r`
    Linear { c: f64 },
    /// `s(r) = r^η`
    Power { eta: f64 },
    /// `s(r) = r log r`
    RLogR,
    /// `s(r) = e^r`; violates `s ≤ r²`, kept as a counterexample.
    Exp,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SFlags {
    pub claims_convex: bool,
    pub claims_differentiable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SScale {
    kind: SKind,
    log_r0: f64,
    flags: SFlags,
}

impl SScale {
    pub fn new(kind: SKind) -> Result<Self> {
        match kind {
            SKind::Linear { c } if !(c > 1.0) => {
                return Err(Error::InvalidParameter(format!("s = c r needs c > 1, got {c}")))
            }
            SKind::Power { eta } if !(eta > 1.0) => {
                return Err(Error::InvalidParameter(format!("s = r^η needs η > 1, got {eta}")))
            }
            _ => {}
        }
        Ok(Self { kind, log_r0: 2.0, flags: SFlags { claims_convex: true, claims_differentiable: true } })
    }

    pub fn linear(c: f64) -> Result<Self> {
        Self::new(SKind::Linear { c })
    }

    pub fn power(eta: f64) -> Result<Self> {
        Self::new(SKind::Power { eta })
    }

    pub fn r_log_r() -> Self {
        Self::new(SKind::RLogR).expect("valid")
    }

    pub fn exp() -> Self {
        Self::new(SKind::Exp).expect("valid")
    }

    pub fn with_domain_start(mut self, log_r0: f64) -> Self {
        self.log_r0 = log_r0;
        self
    }

    pub fn kind(&self) -> SKind {
        self.kind
    }

    pub fn flags(&self) -> SFlags {
        self.flags
    }

    pub fn log_r0(&self) -> f64 {
        self.log_r0
    }

    /// `log(s(r)/r)` at `x = log r`.
    pub fn log_h(&self, x: f64) -> f64 {
        match self.kind {
            SKind::Linear { c } => c.ln(),
            SKind::Power { eta } => (eta - 1.0) * x,
            SKind::RLogR => x.ln(),
            SKind::Exp => x.exp() - x,
        }
    }

    /// `log s(r)`.
    pub fn log_s(&self, x: f64) -> f64 {
        match self.kind {
            SKind::Power { eta } => eta * x,
            SKind::Exp => x.exp(),
            _ => x + self.log_h(x),
        }
    }

    /// Elasticity `r s′(r) / s(r)`.
    pub fn elasticity(&self, x: f64) -> f64 {
        match self.kind {
            SKind::Linear { .. } => 1.0,
            SKind::Power { eta } => eta,
            SKind::RLogR => 1.0 + 1.0 / x,
            SKind::Exp => x.exp(),
        }
    }

    /// `s(r)` for moderate `r`.
    pub fn eval(&self, r: f64) -> f64 {
        self.log_s(r.ln()).exp()
    }

    /// `s′(r)` for moderate `r`.
    pub fn deriv(&self, r: f64) -> f64 {
        let x = r.ln();
        self.elasticity(x) * self.eval(r) / r
    }
}
