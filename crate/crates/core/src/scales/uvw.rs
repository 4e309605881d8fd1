//! Step functions u, v, w used to split the log q-difference estimate.
//!
//! With `h = s/r`: `w(r) = s(n)` and `u(r) = n log h(n)` on `[n, n+1)`, and
//! `v(r) = (h(n)/log h(n))·r` on `[n log h(n), (n+1) log h(n+1))`, so that `v(u(n)) = n h(n) = s(n)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::SScale;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepTriple {
    /// `(n, u on [n, n+1))`
    pub u: Vec<(f64, f64)>,
    /// `(n log h(n), slope h(n)/log h(n))`
    pub v: Vec<(f64, f64)>,
    /// `(n, s(n))`
    pub w: Vec<(f64, f64)>,
}

fn find(breaks: &[(f64, f64)], r: f64) -> Option<usize> {
    if breaks.is_empty() || r < breaks[0].0 {
        return None;
    }
    let i = breaks.partition_point(|b| b.0 <= r);
    (i < breaks.len()).then(|| i - 1)
}

impl StepTriple {
    pub fn u_at(&self, r: f64) -> Option<f64> {
        find(&self.u, r).map(|i| self.u[i].1)
    }

    pub fn v_at(&self, r: f64) -> Option<f64> {
        find(&self.v, r).map(|i| self.v[i].1 * r)
    }

    pub fn w_at(&self, r: f64) -> Option<f64> {
        find(&self.w, r).map(|i| self.w[i].1)
    }

    /// Smallest radius where all three functions and `v ∘ u` are defined.
    pub fn domain_start(&self) -> f64 {
        self.u[0].0.max(self.v[0].0)
    }

    /// Largest radius covered by the breakpoint lists.
    pub fn domain_end(&self) -> f64 {
        self.u[self.u.len() - 1].0
    }
}

/// Builds the triple on integer breakpoints from `max(R0, n0)` to `r_max`, where `n0`
/// is the first integer with `n0 log h(n0) > n0 + 1`, so that `u(r) > r` on every step.
pub fn auxiliary_uvw(s: &SScale, r0: f64, r_max: f64) -> Result<StepTriple> {
    let log_h = |n: f64| s.log_h(n.ln());
    let start = r0.max(s.log_r0().exp()).ceil().max(2.0);
    if !(r_max > start + 2.0) {
        return Err(Error::InvalidParameter(format!("r_max = {r_max} leaves no room after {start}")));
    }
    // h must keep growing: compare the tail against its head.
    let head = log_h(start);
    let tail = log_h(r_max);
    if !(tail > head) {
        return Err(Error::ConstructionInapplicable(
            "s(r)/r is not increasing on the range; use the bounded-s/r branch".into(),
        ));
    }
    let mut n0 = start;
    while !(n0 * log_h(n0) > n0 + 1.0) {
        n0 += 1.0;
        if n0 > r_max {
            return Err(Error::ConstructionInapplicable("n log h(n) never exceeds n + 1 below r_max".into()));
        }
    }
    let last = r_max.ceil() + 1.0;
    let mut u = Vec::new();
    let mut v = Vec::new();
    let mut w = Vec::new();
    let mut n = n0;
    while n <= last {
        let logh = log_h(n);
        u.push((n, n * logh));
        v.push((n * logh, logh.exp() / logh));
        w.push((n, s.eval(n)));
        n += 1.0;
    }
    if v.windows(2).any(|p| p[1].0 <= p[0].0) {
        return Err(Error::ConstructionInapplicable("n log h(n) is not increasing".into()));
    }
    Ok(StepTriple { u, v, w })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UvwCheck {
    pub samples: usize,
    /// Pass counts for properties (1)–(4).
    pub passed: [usize; 4],
    /// `u/r` and `v/r` grow from the first to the last decile of samples.
    pub divergence_trend: bool,
    /// `v(u(n)) = w(n)` at every integer breakpoint, relative error.
    pub composition_error: f64,
    pub first_failure: Option<(usize, f64)>,
}

impl UvwCheck {
    pub fn all_hold(&self) -> bool {
        self.passed.iter().all(|&p| p == self.samples) && self.divergence_trend && self.composition_error < 1e-12
    }
}

/// Checks properties (1)–(4) at `samples` seeded radii drawn log-uniformly.
pub fn check_uvw(t: &StepTriple, s: &SScale, samples: usize, seed: u64) -> UvwCheck {
    let lo = t.domain_start();
    let hi = t.domain_end() - 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut radii: Vec<f64> = (0..samples).map(|_| rng.gen_range(lo.ln()..hi.ln()).exp()).collect();
    radii.sort_by(f64::total_cmp);
    let mut passed = [0usize; 4];
    let mut first_failure = None;
    let mut ur = Vec::with_capacity(samples);
    let mut vr = Vec::with_capacity(samples);
    for &r in &radii {
        let sr = s.eval(r);
        let (Some(u), Some(v)) = (t.u_at(r), t.v_at(r)) else {
            first_failure.get_or_insert((0, r));
            continue;
        };
        let vu = t.v_at(u).unwrap_or(f64::NAN);
        let props = [
            r < u && u < sr && r < v && v < sr,
            u / r > 1.0 && v / r > 1.0,
            0.5 * sr <= vu && vu <= sr * (1.0 + 1e-12),
            2.0 * (u / r).ln() <= (sr / r).ln() && (sr / r).ln() <= 2.0 * u / r,
        ];
        for (k, ok) in props.iter().enumerate() {
            if *ok {
                passed[k] += 1;
            } else if first_failure.is_none() {
                first_failure = Some((k + 1, r));
            }
        }
        ur.push(u / r);
        vr.push(v / r);
    }
    let dec = (ur.len() / 10).max(1);
    let min = |xs: &[f64]| xs.iter().copied().fold(f64::INFINITY, f64::min);
    let divergence_trend =
        !ur.is_empty() && min(&ur[ur.len() - dec..]) > min(&ur[..dec]) && min(&vr[vr.len() - dec..]) > min(&vr[..dec]);
    let composition_error = t
        .u
        .iter()
        .zip(&t.w)
        .filter_map(|(&(n, un), &(_, wn))| t.v_at(un).map(|vu| ((vu - wn) / wn).abs()).filter(|_| n + 1.0 < t.domain_end()))
        .fold(0.0, f64::max);
    UvwCheck { samples, passed, divergence_trend, composition_error, first_failure }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_composition_at_integers() {
        let s = SScale::power(2.0).unwrap();
        let t = auxiliary_uvw(&s, 8.0, 500.0).unwrap();
        for n in [8.0, 9.0, 50.0, 400.0] {
            let u = t.u_at(n).unwrap();
            assert!((t.v_at(u).unwrap() - n * n).abs() < 1e-9 * n * n);
            assert_eq!(t.w_at(n).unwrap().round(), n * n);
        }
    }

    #[test]
    fn properties_hold_for_square_and_rlogr() {
        for (s, r0) in [(SScale::power(2.0).unwrap(), 8.0), (SScale::r_log_r(), 20.0)] {
            let t = auxiliary_uvw(&s, r0, 1e5).unwrap();
            let c = check_uvw(&t, &s, 1000, 7);
            assert!(c.all_hold(), "{:?} {:?}", s.kind(), c);
        }
    }

    #[test]
    fn start_clears_the_first_step() {
        // log h(16) = log log 16 ≈ 1.02 is above 1 but 16 log h(16) < 17
        let t = auxiliary_uvw(&SScale::r_log_r(), 2.0, 1e4).unwrap();
        let n0 = t.u[0].0;
        assert!(n0 > 16.0 && t.u[0].1 > n0 + 1.0, "{:?}", t.u[0]);
        assert!(check_uvw(&t, &SScale::r_log_r(), 1000, 7).all_hold());
    }

    #[test]
    fn linear_s_is_inapplicable() {
        let err = auxiliary_uvw(&SScale::linear(2.0).unwrap(), 8.0, 1e4).unwrap_err();
        assert!(matches!(err, Error::ConstructionInapplicable(_)));
    }
}
