//! The second-order smoothness conditions at the switching points, coded
//! with truncated Taylor series in the caustic parameter `s`, independently
//! of the table code.

use caustica::switched::germ_coeffs;
use caustica::PlanePoint;

const N: usize = 6;

/// Complex Taylor coefficients in `s`, truncated after `s^(N-1)`.
#[derive(Clone, Copy, Debug)]
struct Jet([PlanePoint; N]);

impl Jet {
    fn constant(c: PlanePoint) -> Self {
        let mut a = [PlanePoint::ZERO; N];
        a[0] = c;
        Jet(a)
    }

    fn real(coeffs: &[f64]) -> Self {
        let mut a = [PlanePoint::ZERO; N];
        for (k, &c) in coeffs.iter().enumerate() {
            a[k] = PlanePoint::new(c, 0.0);
        }
        Jet(a)
    }

    fn add(self, o: Jet) -> Jet {
        Jet(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }

    fn scale(self, c: PlanePoint) -> Jet {
        Jet(self.0.map(|x| x * c))
    }

    fn mul(self, o: Jet) -> Jet {
        Jet(std::array::from_fn(|k| (0..=k).map(|j| self.0[j] * o.0[k - j]).sum()))
    }

    fn conj(self) -> Jet {
        Jet(self.0.map(|x| x.conj()))
    }

    fn derivative(self) -> Jet {
        Jet(std::array::from_fn(|k| if k + 1 < N { self.0[k + 1] * (k + 1) as f64 } else { PlanePoint::ZERO }))
    }

    fn integral(self) -> Jet {
        Jet(std::array::from_fn(|k| if k == 0 { PlanePoint::ZERO } else { self.0[k - 1] / k as f64 }))
    }

    /// `exp` of a jet with zero constant term.
    fn exp0(self) -> Jet {
        let mut out = Jet::constant(PlanePoint::new(1.0, 0.0));
        let mut term = out;
        for k in 1..N {
            term = term.mul(self).scale(PlanePoint::new(1.0 / k as f64, 0.0));
            out = out.add(term);
        }
        out
    }

    fn div(self, o: Jet) -> Jet {
        let mut q = [PlanePoint::ZERO; N];
        for k in 0..N {
            let acc: PlanePoint = (1..=k).map(|j| o.0[j] * q[k - j]).sum();
            q[k] = (self.0[k] - acc) / o.0[0];
        }
        Jet(q)
    }

    /// `n`-th derivative at 0.
    fn at(self, n: usize) -> PlanePoint {
        self.0[n] * (1..=n).product::<usize>() as f64
    }
}

/// Table branch `γ − (p/p′)γ′` with `p = ½((s + c)² − |γ + q|²)` for the
/// caustic germ `φ(s) = φ₁s + (φ″(0)/2)s²`.
fn branch(alpha: f64, phi1: f64, phi_dd: f64, c: f64, q: PlanePoint) -> Jet {
    let i = PlanePoint::new(0.0, 1.0);
    let a = PlanePoint::new(-1.0, -1.0);
    let phase = Jet::real(&[0.0, phi1, 0.5 * phi_dd]).scale(i).exp0().scale(PlanePoint::from_angle(-alpha));
    let gamma = Jet::constant(a).add(phase.integral());
    let w = gamma.add(Jet::constant(q));
    let u = Jet::real(&[c, 1.0]);
    let p = u.mul(u).add(w.mul(w.conj()).scale(PlanePoint::new(-1.0, 0.0))).scale(PlanePoint::new(0.5, 0.0));
    let t = p.div(p.derivative());
    gamma.add(t.mul(gamma.derivative()).scale(PlanePoint::new(-1.0, 0.0)))
}

/// Residuals of the first- and second-order conditions on both branches.
fn residuals(alpha: f64, phi1: f64, phi_dd: f64) -> ([f64; 2], [f64; 2]) {
    let i = PlanePoint::new(0.0, 1.0);
    let ell = 1.0 / alpha.sin();
    let ell_hat = 2f64.sqrt() / (std::f64::consts::FRAC_PI_4 - alpha).sin();
    let plain = branch(alpha, phi1, phi_dd, 2.0 * ell, PlanePoint::new(1.0, -1.0));
    let hat = branch(alpha, phi1, phi_dd, -2.0 * ell_hat, PlanePoint::new(-1.0, -1.0));
    // plain branch starts on the horizontal axis, the hatted one on the diagonal
    let axis = |z: PlanePoint| z.re;
    let diagonal = |z: PlanePoint| z.re - z.im;
    let first = [axis(plain.at(1)), diagonal(hat.at(1))];
    let second = [axis(i * plain.at(2)), diagonal(i * hat.at(2))];
    (first, second)
}

fn alphas() -> impl Iterator<Item = f64> {
    (0..20).map(|k| 0.05 + 0.035 * k as f64)
}

#[test]
fn first_order_conditions_hold_for_any_germ() {
    for alpha in alphas() {
        for (p1, pdd) in [(0.3, 0.0), (1.1, -0.4), (0.7, 0.2)] {
            let (first, _) = residuals(alpha, p1, pdd);
            assert!(first.iter().all(|r| r.abs() < 1e-12), "alpha {alpha}: {first:?}");
        }
    }
}

#[test]
fn germ_solves_second_order_conditions_with_phi2_as_second_derivative() {
    for alpha in alphas() {
        let (phi1, phi2) = germ_coeffs(alpha).unwrap();
        let (_, second) = residuals(alpha, phi1, phi2);
        assert!(second.iter().all(|r| r.abs() < 1e-12), "alpha {alpha}: {second:?}");
    }
}

#[test]
fn taylor_coefficient_reading_of_phi2_misses_second_order_conditions() {
    let mut worst: f64 = 0.0;
    for alpha in alphas() {
        let (phi1, phi2) = germ_coeffs(alpha).unwrap();
        let (_, second) = residuals(alpha, phi1, 2.0 * phi2);
        worst = worst.max(second[0].abs());
    }
    assert!(worst > 1e-3, "{worst}");
}

#[test]
fn perturbed_germ_violates_second_order_conditions() {
    let alpha = 0.39;
    let (phi1, phi2) = germ_coeffs(alpha).unwrap();
    let (_, second) = residuals(alpha, phi1 + 0.05, phi2);
    assert!(second[0].abs() > 1e-3 && second[1].abs() > 1e-3, "{second:?}");
}
