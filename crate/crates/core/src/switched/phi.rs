//! The tangent-angle function `φ` of the quarter caustic.
//!
//! `φ` is the integral of a positive C^∞ rate. On `[0, ε]` the rate is the
//! derivative of the germ polynomial `φ₁s + φ₂s²`; over `[ε, 2ε]` a smooth
//! step takes it down to a small constant floor. Two candidates add one
//! smooth bump each, sized so that `ψ(ŝ/2) = α`: `ψ₊` early (it climbs to
//! about `α` right after the germ), `ψ₋` just before `ŝ/2` (it stays low
//! until then). The rate is constant near `ŝ/2`, so even derivatives of the
//! symmetric extension `φ(ŝ − s) = 2α − φ(s)` vanish there. The mix
//! `φ = lψ₋ + (1 − l)ψ₊` is chosen so the half curve advances by exactly 1
//! horizontally.

use crate::error::{Error, Result};
use crate::numeric::{bisect, GaussLegendre};

use super::config::SwitchedConfig;

/// Default number of quadrature panels on `[0, ŝ/2]`.
pub const DEFAULT_PANELS: usize = 1024;

/// C^∞ step: 0 for `x ≤ 0`, 1 for `x ≥ 1`.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        a / (a + b)
    }
}

/// C^∞ bump supported on `[0, 1]`.
pub fn bump(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        (-1.0 / (x * (1.0 - x))).exp()
    }
}

#[derive(Debug, Clone, Copy)]
struct Rate {
    phi1: f64,
    phi2: f64,
    eps: f64,
    floor: f64,
    plus_lo: f64,
    plus_width: f64,
    minus_lo: f64,
    minus_width: f64,
    amp_plus: f64,
    amp_minus: f64,
}

impl Rate {
    fn base(&self, s: f64) -> f64 {
        let h = smooth_step((s - self.eps) / self.eps);
        (1.0 - h) * (self.phi1 + 2.0 * self.phi2 * s) + h * self.floor
    }

    fn bump_plus(&self, s: f64) -> f64 {
        bump((s - self.plus_lo) / self.plus_width)
    }

    fn bump_minus(&self, s: f64) -> f64 {
        bump((s - self.minus_lo) / self.minus_width)
    }

    /// Rate of `lψ₋ + (1 − l)ψ₊` on `[0, ŝ/2]`.
    fn eval(&self, s: f64, mix: f64) -> f64 {
        self.base(s) + (1.0 - mix) * self.amp_plus * self.bump_plus(s) + mix * self.amp_minus * self.bump_minus(s)
    }
}

/// Tangent angle `φ` on `[0, ŝ]`.
#[derive(Debug, Clone)]
pub struct PhiFunction {
    alpha: f64,
    s_hat: f64,
    germ: (f64, f64),
    eps: f64,
    delta: f64,
    rate: Rate,
    mix: f64,
    panel: f64,
    /// `φ` at the panel ends of `[0, ŝ/2]`.
    cumulative: Vec<f64>,
    displacement_residual: f64,
    bracket: (f64, f64),
}

/// Integral over each panel of `[0, half]` and the values at the panel nodes.
fn panel_integrals<F: Fn(f64) -> f64>(f: F, half: f64, panels: usize) -> (Vec<f64>, Vec<[f64; 16]>) {
    let g = GaussLegendre::g16();
    let h = half / panels as f64;
    let mut cum = vec![0.0; panels + 1];
    let mut at_nodes = vec![[0.0; 16]; panels];
    for j in 0..panels {
        let a = j as f64 * h;
        for (m, &x) in g.nodes.iter().enumerate() {
            at_nodes[j][m] = cum[j] + g.integrate(a, a + h * x, &f);
        }
        cum[j + 1] = cum[j] + g.integrate(a, a + h, &f);
    }
    (cum, at_nodes)
}

/// Builds `φ` for `config` with the default panel count.
pub fn build_phi(config: &SwitchedConfig) -> Result<PhiFunction> {
    build_phi_with(config, DEFAULT_PANELS)
}

pub fn build_phi_with(config: &SwitchedConfig, panels: usize) -> Result<PhiFunction> {
    let alpha = config.alpha;
    let half = 0.5 * config.s_hat;
    let (eps, delta) = (config.eps, config.delta);
    if !(eps > 0.0 && delta > 0.0 && 2.0 * eps + delta < half - delta) {
        return Err(Error::InvalidArgument(format!("mollifier widths eps = {eps}, delta = {delta} do not fit")));
    }
    let mut rate = Rate {
        phi1: config.phi1,
        phi2: config.phi2,
        eps,
        floor: alpha / 40.0,
        plus_lo: 2.0 * eps,
        plus_width: delta,
        minus_lo: half - delta,
        minus_width: 0.75 * delta,
        amp_plus: 0.0,
        amp_minus: 0.0,
    };
    if (0..=100).any(|k| rate.base(2.0 * eps * k as f64 / 100.0) <= 0.0) {
        return Err(Error::InvalidArgument("germ rate is not positive on the germ stretch".into()));
    }
    let g = GaussLegendre::g16();
    let h = half / panels as f64;
    let total = |f: &dyn Fn(f64) -> f64| -> f64 {
        (0..panels).map(|j| g.integrate(j as f64 * h, (j + 1) as f64 * h, f)).sum()
    };
    let base = total(&|s| rate.base(s));
    if base >= alpha {
        return Err(Error::InvalidArgument("germ stretch already turns by alpha".into()));
    }
    rate.amp_plus = (alpha - base) / total(&|s| rate.bump_plus(s));
    rate.amp_minus = (alpha - base) / total(&|s| rate.bump_minus(s));

    let (_, plus_nodes) = panel_integrals(|s| rate.eval(s, 0.0), half, panels);
    let (_, minus_nodes) = panel_integrals(|s| rate.eval(s, 1.0), half, panels);
    let displacement = |mix: f64| -> f64 {
        let mut sum = 0.0;
        for j in 0..panels {
            let mut panel = 0.0;
            for m in 0..16 {
                let psi = mix * minus_nodes[j][m] + (1.0 - mix) * plus_nodes[j][m];
                panel += g.weights[m] * (psi - alpha).cos();
            }
            sum += panel * h;
        }
        sum
    };
    let bracket = (displacement(0.0), displacement(1.0));
    if (bracket.0 - 1.0) * (bracket.1 - 1.0) >= 0.0 {
        return Err(Error::MixingFailure { lo: bracket.1.min(bracket.0), hi: bracket.0.max(bracket.1) });
    }
    let mix = bisect(|l| displacement(l) - 1.0, 0.0, 1.0, 1e-16)?;
    let displacement_residual = displacement(mix) - 1.0;
    let (cumulative, _) = panel_integrals(|s| rate.eval(s, mix), half, panels);
    Ok(PhiFunction {
        alpha,
        s_hat: config.s_hat,
        germ: (config.phi1, config.phi2),
        eps,
        delta,
        rate,
        mix,
        panel: h,
        cumulative,
        displacement_residual,
        bracket,
    })
}

impl PhiFunction {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn s_hat(&self) -> f64 {
        self.s_hat
    }

    pub fn germ(&self) -> (f64, f64) {
        self.germ
    }

    /// `(ε, δ)`.
    pub fn mollifier(&self) -> (f64, f64) {
        (self.eps, self.delta)
    }

    /// Mixing weight `l` of `ψ₋`.
    pub fn mixing_weight(&self) -> f64 {
        self.mix
    }

    /// Horizontal advance of the half curve for `ψ₊` alone and `ψ₋` alone.
    pub fn displacement_bracket(&self) -> (f64, f64) {
        self.bracket
    }

    /// Horizontal advance of the half curve minus 1.
    pub fn displacement_residual(&self) -> f64 {
        self.displacement_residual
    }

    /// `φ′(s)` on `[0, ŝ]`.
    pub fn rate(&self, s: f64) -> f64 {
        let half = 0.5 * self.s_hat;
        let t = if s <= half { s } else { self.s_hat - s };
        self.rate.eval(t.max(0.0), self.mix)
    }

    fn half_phi(&self, s: f64) -> f64 {
        let n = self.cumulative.len() - 1;
        let j = ((s / self.panel) as usize).min(n - 1);
        let a = j as f64 * self.panel;
        if s == a {
            return self.cumulative[j];
        }
        self.cumulative[j] + GaussLegendre::g16().integrate(a, s, |t| self.rate.eval(t, self.mix))
    }

    /// `φ(ŝ/2)`, equal to `α` up to quadrature rounding.
    pub fn midpoint(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// `φ(s)` on `[0, ŝ]`, extended by `φ(ŝ − s) = 2α − φ(s)`.
    pub fn phi(&self, s: f64) -> f64 {
        let half = 0.5 * self.s_hat;
        if s <= half {
            self.half_phi(s.max(0.0))
        } else {
            // reflect about the computed midpoint value (α up to rounding) so
            // the extension is smooth at ŝ/2
            2.0 * self.midpoint() - self.half_phi((self.s_hat - s).max(0.0))
        }
    }

    /// `(s, φ(s))` on a uniform grid of `n + 1` points over `[0, ŝ]`.
    pub fn grid(&self, n: usize) -> Vec<(f64, f64)> {
        (0..=n)
            .map(|k| {
                let s = self.s_hat * k as f64 / n as f64;
                (s, self.phi(s))
            })
            .collect()
    }
}
