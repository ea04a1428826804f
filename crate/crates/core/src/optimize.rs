//! One-dimensional maximization of unimodal functions.

use crate::math::{abs, sqrt};

/// Maximizer and maximum of a scalar function on an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub arg: f64,
    pub value: f64,
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
///
/// Brackets shrink until narrower than `tol`; both endpoints are compared
/// against the interior optimum so boundary maxima are returned exactly.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Maximum {
    let inv_phi = (sqrt(5.0) - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while abs(b - a) > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    let mut best = Maximum {
        arg: mid,
        value: f(mid),
    };
    for x in [lo, hi] {
        let v = f(x);
        if v > best.value {
            best = Maximum { arg: x, value: v };
        }
    }
    best
}
