//! Closed-form exponents and the degree normalizer `phi`.

use serde::Serialize;

/// `c_p = 1 - p/2`, the growth exponent of early degrees.
pub fn c_p(p: f64) -> f64 {
    1.0 - p / 2.0
}

/// `alpha = (1 - p) / (2 - p)`, the clique-number exponent.
pub fn alpha(p: f64) -> f64 {
    (1.0 - p) / (2.0 - p)
}

/// Decay exponent of the global clustering coefficient,
/// `gamma(p) = 2 - p - 3(1 - p)/(2 - p)`.
pub fn gamma(p: f64) -> f64 {
    2.0 - p - 3.0 * (1.0 - p) / (2.0 - p)
}

/// The same exponent written as `(2 - p) + 3/(2 - p) - 3`.
pub fn gamma_alt(p: f64) -> f64 {
    let q = 2.0 - p;
    q + 3.0 / q - 3.0
}

pub fn cherry_exponent(p: f64) -> f64 {
    2.0 - p
}

pub fn triangle_exponent(p: f64) -> f64 {
    3.0 * alpha(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoryExponents {
    pub p: f64,
    pub c_p: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub cherry_exponent: f64,
    pub triangle_exponent: f64,
}

impl TheoryExponents {
    pub fn new(p: f64) -> Self {
        TheoryExponents {
            p,
            c_p: c_p(p),
            alpha: alpha(p),
            gamma: gamma(p),
            cherry_exponent: cherry_exponent(p),
            triangle_exponent: triangle_exponent(p),
        }
    }
}

/// `phi(t) = prod_{s=1}^{t-1} (1 + c_p/s)`, evaluated in log space.
pub fn phi(t: u64, p: f64) -> f64 {
    assert!(t >= 1, "phi is defined for t >= 1");
    let c = c_p(p);
    (1..t).map(|s| (c / s as f64).ln_1p()).sum::<f64>().exp()
}

/// `phi(1..=t_max)`; entry `s - 1` holds `phi(s)`.
pub fn phi_table(t_max: u64, p: f64) -> Vec<f64> {
    let c = c_p(p);
    let mut log_phi = 0.0f64;
    let mut table = Vec::with_capacity(t_max as usize);
    for s in 1..=t_max {
        table.push(log_phi.exp());
        log_phi += (c / s as f64).ln_1p();
    }
    table
}

/// Range of `phi(t) / t^{c_p}` over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiRatioRange {
    pub min: f64,
    pub max: f64,
}

pub fn phi_asymptotic_check(p: f64, t_grid: &[u64]) -> PhiRatioRange {
    assert!(!t_grid.is_empty(), "t_grid must be nonempty");
    let c = c_p(p);
    let t_max = *t_grid.iter().max().unwrap();
    let table = phi_table(t_max, p);
    t_grid.iter().fold(
        PhiRatioRange {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        },
        |acc, &t| {
            let ratio = table[t as usize - 1] / (t as f64).powf(c);
            PhiRatioRange {
                min: acc.min.min(ratio),
                max: acc.max.max(ratio),
            }
        },
    )
}

/// `E[d_t(1)] = 2 phi(t)`, from the martingale `d_t(1)/phi(t)` started at 2.
pub fn expected_degree_vertex1(t: u64, p: f64) -> f64 {
    2.0 * phi(t, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaOptimum {
    /// `2 - sqrt(3)`.
    pub p_star: f64,
    /// `2 sqrt(3) - 3`.
    pub gamma_star: f64,
    /// Minimizer found numerically (grid, then golden-section refinement).
    pub numeric_argmin: f64,
    pub numeric_min: f64,
}

pub fn gamma_minimizer() -> GammaOptimum {
    const GRID: usize = 1_000_000;
    let step = 1.0 / GRID as f64;
    let best = (0..=GRID)
        .map(|k| k as f64 * step)
        .min_by(|a, b| gamma_alt(*a).total_cmp(&gamma_alt(*b)))
        .unwrap();

    let (mut lo, mut hi) = ((best - step).max(0.0), (best + step).min(1.0));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (gamma_alt(x1), gamma_alt(x2));
    for _ in 0..200 {
        if hi - lo < 1e-15 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = gamma_alt(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = gamma_alt(x2);
        }
    }
    let argmin = (lo + hi) / 2.0;
    let sqrt3 = 3f64.sqrt();
    GammaOptimum {
        p_star: 2.0 - sqrt3,
        gamma_star: 2.0 * sqrt3 - 3.0,
        numeric_argmin: argmin,
        numeric_min: gamma(argmin),
    }
}
