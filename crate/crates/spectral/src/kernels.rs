//! Entire functions with removable singularities at the origin.
//!
//! `1 - cos x` is evaluated as `2 sin^2(x/2)` to avoid cancellation.

/// Below this magnitude the kernels switch to their Taylor polynomials.
pub const TAYLOR_THRESHOLD: f64 = 1e-4;

fn sinc_series(x: f64) -> f64 {
    let x2 = x * x;
    1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
}

fn verc2_series(x: f64) -> f64 {
    let x2 = x * x;
    0.5 * (1.0 - x2 / 12.0 * (1.0 - x2 / 30.0 * (1.0 - x2 / 56.0)))
}

fn verc2_closed(x: f64) -> f64 {
    let s = (0.5 * x).sin() / x;
    2.0 * s * s
}

/// `sin(x) / x`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < TAYLOR_THRESHOLD {
        sinc_series(x)
    } else {
        x.sin() / x
    }
}

/// `(1 - cos x) / x`.
pub fn verc(x: f64) -> f64 {
    if x.abs() < TAYLOR_THRESHOLD {
        x * verc2_series(x)
    } else {
        let s = (0.5 * x).sin();
        2.0 * s * s / x
    }
}

/// `(1 - cos x) / x^2`.
pub fn verc2(x: f64) -> f64 {
    if x.abs() < TAYLOR_THRESHOLD {
        verc2_series(x)
    } else {
        verc2_closed(x)
    }
}
