//! Numerical integration: globally adaptive 10/21-point Gauss–Kronrod on
//! finite and infinite ranges, plus Gauss–Legendre rules for tensor grids.

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::math::{abs, cos, PI};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_478_220,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// 10-point Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Stopping rule for adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_subintervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-12,
            rel: 1e-10,
            max_subintervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    piece: usize,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F: FnMut(usize, f64) -> f64>(f: &mut F, piece: usize, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(piece, center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    for (j, (&x, &w)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = half * x;
        let pair = f(piece, center - dx) + f(piece, center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        piece,
        a,
        b,
        value: kronrod * half,
        error: abs((kronrod - gauss) * half),
    }
}

/// Global adaptive driver over several pieces sharing one error budget.
/// `f(piece, t)` evaluates the (possibly transformed) integrand of a piece.
fn adaptive<F: FnMut(usize, f64) -> f64>(
    mut f: F,
    pieces: &[(f64, f64)],
    tol: Tolerance,
) -> Result<Estimate> {
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut evaluations = 0;
    for (i, &(a, b)) in pieces.iter().enumerate() {
        if a == b {
            continue;
        }
        let seg = kronrod21(&mut f, i, a, b);
        evaluations += 21;
        total += seg.value;
        total_err += seg.error;
        heap.push(seg);
    }
    let (lo, hi) = match (pieces.first(), pieces.last()) {
        (Some(p), Some(q)) => (p.0, q.1),
        _ => (0.0, 0.0),
    };
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::Numeric(format!(
                "non-finite integrand on [{lo}, {hi}] after {evaluations} evaluations"
            )));
        }
        if total_err <= tol.abs.max(tol.rel * abs(total)) {
            break;
        }
        if heap.len() >= tol.max_subintervals {
            return Err(Error::Numeric(format!(
                "adaptive quadrature on [{lo}, {hi}] did not converge: estimate {total:e}, \
                 error {total_err:e}, {} subintervals",
                heap.len()
            )));
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval cannot be split further in floating point.
            heap.push(Segment {
                error: 0.0,
                ..worst
            });
            total_err -= worst.error;
            continue;
        }
        let left = kronrod21(&mut f, worst.piece, worst.a, mid);
        let right = kronrod21(&mut f, worst.piece, mid, worst.b);
        evaluations += 42;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Resum to shed the drift of the running updates.
    let (value, abs_error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    Ok(Estimate {
        value,
        abs_error,
        evaluations,
    })
}

/// `f(a + scale t/(1-t)) scale/(1-t)^2`, the integrand of `[a, inf)` on `[0, 1)`.
fn tail_map<F: FnMut(f64) -> f64>(f: &mut F, a: f64, sign: f64, scale: f64, t: f64) -> f64 {
    let s = 1.0 - t;
    let jac = scale / (s * s);
    if !jac.is_finite() {
        return 0.0;
    }
    let v = f(a + sign * scale * t / s);
    if v == 0.0 {
        0.0
    } else {
        v * jac
    }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<Estimate> {
    adaptive(|_, x| f(x), &[(a, b)], tol)
}

/// Integrates `f` over `[a, inf)` using `x = a + scale * t / (1 - t)`.
pub fn integrate_upper_tail<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    scale: f64,
    tol: Tolerance,
) -> Result<Estimate> {
    adaptive(
        |_, t| tail_map(&mut f, a, 1.0, scale, t),
        &[(0.0, 1.0)],
        tol,
    )
}

/// Integrates `f` over `(-inf, b]`.
pub fn integrate_lower_tail<F: FnMut(f64) -> f64>(
    mut f: F,
    b: f64,
    scale: f64,
    tol: Tolerance,
) -> Result<Estimate> {
    adaptive(
        |_, t| tail_map(&mut f, b, -1.0, scale, t),
        &[(0.0, 1.0)],
        tol,
    )
}

/// Integrates `f` over the real line, splitting at the sorted `breakpoints`.
///
/// Features of the integrand (peaks, kinks) should sit at breakpoints; the
/// two tails are mapped onto finite intervals with the given length `scale`.
/// All pieces share one error budget, so negligible pieces cost little.
pub fn integrate_real_line<F: FnMut(f64) -> f64>(
    mut f: F,
    breakpoints: &[f64],
    scale: f64,
    tol: Tolerance,
) -> Result<Estimate> {
    let (first, last) = match (breakpoints.first(), breakpoints.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0.0, 0.0),
    };
    let m = breakpoints.len().max(1);
    let mut pieces = Vec::with_capacity(m + 1);
    pieces.push((0.0, 1.0));
    pieces.extend(breakpoints.windows(2).map(|w| (w[0], w[1])));
    pieces.push((0.0, 1.0));
    let upper = pieces.len() - 1;
    adaptive(
        |piece, t| match piece {
            0 => tail_map(&mut f, first, -1.0, scale, t),
            p if p == upper => tail_map(&mut f, last, 1.0, scale, t),
            _ => f(t),
        },
        &pieces,
        tol,
    )
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = cos(PI * (i as f64 + 0.75) / (nf + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if abs(step) < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}
