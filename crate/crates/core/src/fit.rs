//! Least-squares line fits and the binned upper envelope.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub rms: f64,
    pub n: usize,
}

pub fn least_squares(points: impl IntoIterator<Item = (f64, f64)>) -> Option<LineFit> {
    let pts: Vec<(f64, f64)> = points.into_iter().filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
    let n = pts.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / nf).sqrt();
    Some(LineFit { slope, intercept, rms, n })
}

/// Per-bin maxima of `y` over `bins` equal-width bins in `x`. Empty bins are dropped.
pub fn bin_maxima(points: &[(f64, f64)], bins: usize) -> Vec<(f64, f64)> {
    let finite: Vec<&(f64, f64)> = points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
    if finite.is_empty() || bins == 0 {
        return Vec::new();
    }
    let lo = finite.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = finite.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / bins as f64;
    let mut best: Vec<Option<(f64, f64)>> = vec![None; bins];
    for p in finite {
        let k = if width > 0.0 { (((p.0 - lo) / width) as usize).min(bins - 1) } else { 0 };
        match best[k] {
            Some(b) if b.1 >= p.1 => {}
            _ => best[k] = Some(*p),
        }
    }
    best.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let f = least_squares((0..10).map(|k| (k as f64, 3.0 * k as f64 - 1.0))).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-12 && (f.intercept + 1.0).abs() < 1e-12 && f.rms < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(least_squares([(1.0, 2.0)]).is_none());
        assert!(least_squares([(1.0, 2.0), (1.0, 3.0)]).is_none());
    }

    #[test]
    fn maxima_pick_top_of_each_bin() {
        let pts = [(0.0, 1.0), (0.1, 5.0), (1.0, 2.0), (1.9, 0.0)];
        let m = bin_maxima(&pts, 2);
        assert_eq!(m, vec![(0.1, 5.0), (1.0, 2.0)]);
    }
}
