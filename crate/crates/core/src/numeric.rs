//! Small numerical kernels: Gauss–Legendre rules, bracketing root finders and
//! one-sided finite-difference stencils.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Newton on P_n from the Chebyshev-like initial guess.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = 0.5 * (1.0 - x);
            nodes[n - 1 - i] = 0.5 * (1.0 + x);
            weights[i] = 0.5 * w;
            weights[n - 1 - i] = 0.5 * w;
        }
        Self { nodes, weights }
    }

    /// Shared 16-point rule.
    pub fn g16() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(16))
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let h = b - a;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(a + h * x))
            .sum::<f64>()
            * h
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Interpolation on one panel `[0, 1]` through the two end points and the
/// nodes of the 16-point Gauss–Legendre rule (degree 17, barycentric form).
#[derive(Debug, Clone)]
pub struct PanelInterpolant {
    nodes: [f64; 18],
    weights: [f64; 18],
}

impl PanelInterpolant {
    pub fn shared() -> &'static PanelInterpolant {
        static RULE: OnceLock<PanelInterpolant> = OnceLock::new();
        RULE.get_or_init(|| {
            let g = GaussLegendre::g16();
            let mut nodes = [0.0; 18];
            nodes[17] = 1.0;
            nodes[1..17].copy_from_slice(&g.nodes);
            let mut weights = [0.0; 18];
            for i in 0..18 {
                let mut w = 1.0;
                for j in 0..18 {
                    if i != j {
                        w *= nodes[i] - nodes[j];
                    }
                }
                weights[i] = 1.0 / w;
            }
            PanelInterpolant { nodes, weights }
        })
    }

    /// Value at `u ∈ [0, 1]` of the interpolant through `values` (end point
    /// at 0, the 16 Gauss nodes, end point at 1). Generic over any vector
    /// type supporting the linear operations.
    pub fn eval<T>(&self, values: &[T; 18], u: f64) -> T
    where
        T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T> + std::ops::Div<f64, Output = T>,
    {
        let mut num: Option<T> = None;
        let mut den = 0.0;
        for ((&x, &w), &v) in self.nodes.iter().zip(&self.weights).zip(values) {
            let d = u - x;
            if d == 0.0 {
                return v;
            }
            let c = w / d;
            den += c;
            num = Some(match num {
                None => v * c,
                Some(acc) => acc + v * c,
            });
        }
        num.expect("18 nodes") / den
    }
}

/// Bisection with a deterministic stopping rule: stops once the bracket is
/// narrower than `tol` or after 200 halvings. Requires a sign change.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::RootBracketFailure(format!(
            "f({lo}) = {flo:e}, f({hi}) = {fhi:e}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Brent's method on a sign-changing bracket; falls back to bisection steps
/// whenever interpolation misbehaves.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::RootBracketFailure(format!(
            "f({a}) = {fa:e}, f({b}) = {fb:e}"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Ok(b)
}

/// Weights of the 5-point one-sided stencil for the `order`-th derivative at
/// `x₀` from samples `f(x₀ + k·h)`, `k = 0..5` (scaled by `h^order`).
/// Truncation error is `O(h^{5 - order})`.
pub fn one_sided_weights(order: usize) -> [f64; 5] {
    match order {
        1 => [-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -1.0 / 4.0],
        2 => [35.0 / 12.0, -26.0 / 3.0, 19.0 / 2.0, -14.0 / 3.0, 11.0 / 12.0],
        3 => [-5.0 / 2.0, 9.0, -12.0, 7.0, -3.0 / 2.0],
        4 => [1.0, -4.0, 6.0, -4.0, 1.0],
        _ => panic!("unsupported derivative order {order}"),
    }
}
