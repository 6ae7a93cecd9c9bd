//! The Dickman function `ρ`, tabulated on a grid of step `1/1000`.
//!
//! `ρ = 1` on `[0,1]` and `ρ(u) = 1 - log u` on `[1,2]`. Beyond 2 the table
//! integrates `ρ'(u) = -ρ(u-1)/u` one grid step at a time with Simpson's rule;
//! the off-grid midpoint value `ρ(v-1)` comes from a cubic through four nodes
//! of the same unit interval. Evaluation between nodes uses the same cubic.

use std::sync::OnceLock;

use crate::error::{domain, Result};

/// Grid points per unit of `u`.
pub const STEPS_PER_UNIT: usize = 1000;

const CACHED_UPTO: usize = 40;

#[derive(Debug, Clone)]
pub struct DickmanTable {
    values: Vec<f64>,
    units: usize,
}

impl DickmanTable {
    /// Tabulate `ρ` on `[0, units]`.
    pub fn new(units: usize) -> Self {
        let n = STEPS_PER_UNIT;
        let h = 1.0 / n as f64;
        let units = units.max(2);
        let mut values = vec![0.0; units * n + 1];
        for (i, v) in values.iter_mut().enumerate().take(2 * n + 1) {
            let u = i as f64 * h;
            *v = if i <= n { 1.0 } else { 1.0 - u.ln() };
        }
        for i in (2 * n + 1)..values.len() {
            let j = i - 1 - n;
            let left = values[j];
            let right = values[j + 1];
            let mid = midpoint(&values, j);
            let (a, b) = ((i - 1) as f64 * h, i as f64 * h);
            let m = 0.5 * (a + b);
            let integral = h / 6.0 * (left / a + 4.0 * mid / m + right / b);
            values[i] = values[i - 1] - integral;
        }
        Self { values, units }
    }

    pub fn units(&self) -> usize {
        self.units
    }

    /// `ρ(u)` for `0 ≤ u ≤ units`.
    pub fn eval(&self, u: f64) -> f64 {
        if u <= 1.0 {
            return 1.0;
        }
        if u <= 2.0 {
            return 1.0 - u.ln();
        }
        let n = STEPS_PER_UNIT;
        let pos = u * n as f64;
        let j = (pos.floor() as usize).min(self.values.len() - 2);
        let frac = pos - j as f64;
        if frac == 0.0 {
            return self.values[j];
        }
        let start = stencil_start(j, n);
        let xs = [0.0, 1.0, 2.0, 3.0];
        let x = (j - start) as f64 + frac;
        let mut acc = 0.0;
        for (a, &xa) in xs.iter().enumerate() {
            let mut w = 1.0;
            for (b, &xb) in xs.iter().enumerate() {
                if a != b {
                    w *= (x - xb) / (xa - xb);
                }
            }
            acc += w * self.values[start + a];
        }
        acc
    }
}

/// First node of a 4-point stencil around `[j, j+1]` kept inside one unit interval.
fn stencil_start(j: usize, n: usize) -> usize {
    let lo = (j / n) * n;
    j.saturating_sub(1).clamp(lo, lo + n - 3)
}

/// Cubic estimate of `ρ` halfway between nodes `j` and `j+1`.
fn midpoint(values: &[f64], j: usize) -> f64 {
    let start = stencil_start(j, STEPS_PER_UNIT);
    let w: [f64; 4] = match j - start {
        0 => [5.0, 15.0, -5.0, 1.0],
        1 => [-1.0, 9.0, 9.0, -1.0],
        _ => [1.0, -5.0, 15.0, 5.0],
    };
    (0..4).map(|a| w[a] * values[start + a]).sum::<f64>() / 16.0
}

fn shared_table() -> &'static DickmanTable {
    static TABLE: OnceLock<DickmanTable> = OnceLock::new();
    TABLE.get_or_init(|| DickmanTable::new(CACHED_UPTO))
}

/// `ρ(u)`. Underflows to 0 somewhere past `u ≈ 150`.
pub fn dickman_rho(u: f64) -> Result<f64> {
    if u.is_nan() || u < 0.0 {
        return domain(format!("rho needs u >= 0, got {u}"));
    }
    if u.is_infinite() {
        return Ok(0.0);
    }
    if u <= CACHED_UPTO as f64 {
        return Ok(shared_table().eval(u));
    }
    Ok(DickmanTable::new(u.ceil() as usize + 1).eval(u))
}
