//! Small helpers for quantities carried as logarithms.

use std::f64::consts::{LN_2, PI, TAU};

/// `log(e^a + e^b)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `log(1 - e^x)` for `x < 0`.
pub fn log1m_exp(x: f64) -> f64 {
    debug_assert!(x <= 0.0);
    if x > -LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// `log(e^a - e^b)` for `a >= b`.
pub fn log_sub_exp(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    a + log1m_exp(b - a)
}

/// Wrap an angle into `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % TAU;
    if t <= -PI {
        t += TAU;
    } else if t > PI {
        t -= TAU;
    }
    t
}

/// `(log|1 - w|, arg(1 - w))` for `w = e^{a + ib}`, accurate for small and large `|w|`.
pub fn log_one_minus(a: f64, b: f64) -> (f64, f64) {
    if a == f64::NEG_INFINITY {
        return (0.0, 0.0);
    }
    if a <= 0.0 {
        // 1 - w = (1 - e^a) + e^a (1 - cos b) - i e^a sin b
        let ea = a.exp();
        let half = (0.5 * b).sin();
        let re = -a.exp_m1() + 2.0 * ea * half * half;
        let im = -ea * b.sin();
        if re == 0.0 && im == 0.0 {
            return (f64::NEG_INFINITY, 0.0);
        }
        let log_abs = if a < -1.0 {
            // |1-w|^2 = 1 - 2 e^a cos b + e^{2a}
            let t = -2.0 * ea * b.cos() + ea * ea;
            0.5 * t.ln_1p()
        } else {
            re.hypot(im).ln()
        };
        (log_abs, im.atan2(re))
    } else {
        // 1 - w = -w (1 - 1/w)
        let (l, t) = log_one_minus(-a, -b);
        (a + l, wrap_angle(t + b + PI))
    }
}

/// Unit roundoff of `f64`.
pub fn unit_roundoff() -> f64 {
    f64::EPSILON * 0.5
}
