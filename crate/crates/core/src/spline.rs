//! Closed-form frequency responses of the fractional B-spline family.
//!
//! Every function here is a pure function of its arguments. Fractional powers
//! use the principal branch with `Arg z ∈ (-π, π]`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{cis, half_sincos, wrap_angle};

/// Default absolute accuracy of [`autocorr_ft`].
pub const AUTOCORR_TOL: f64 = 1e-13;

/// Degree `α ≥ 0` and shift `τ` of a fractional B-spline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineParams {
    alpha: f64,
    tau: f64,
}

impl SplineParams {
    pub fn new(alpha: f64, tau: f64) -> Result<Self> {
        if !alpha.is_finite() || !tau.is_finite() {
            return Err(Error::InvalidParams(format!(
                "alpha and tau must be finite (got alpha={alpha}, tau={tau})"
            )));
        }
        if alpha < 0.0 {
            return Err(Error::InvalidParams(format!("alpha must be >= 0 (got {alpha})")));
        }
        Ok(Self { alpha, tau })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Parameters of the Hilbert-pair partner, `(α, τ + ½)`.
    pub fn shifted(&self) -> Self {
        Self {
            alpha: self.alpha,
            tau: self.tau + 0.5,
        }
    }

    /// Exponents `((α+1)/2 + τ, (α+1)/2 - τ)`.
    fn exponents(&self) -> (f64, f64) {
        let half = (self.alpha + 1.0) / 2.0;
        (half + self.tau, half - self.tau)
    }
}

/// Principal argument mapped to `(-π, π]`.
fn principal_arg(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// `z^γ = |z|^γ e^{jγ Arg z}` on the principal branch.
pub fn frac_power(z: Complex64, gamma: f64) -> Result<Complex64> {
    if z.re == 0.0 && z.im == 0.0 {
        return if gamma > 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Err(Error::ZeroPower(gamma))
        };
    }
    if gamma == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(cis(gamma * principal_arg(z)) * z.norm().powf(gamma))
}

/// `sin(x)/x` with the removable singularity filled in.
fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Fourier transform of the fractional B-spline `β^α_τ`.
///
/// Writing `r = (1 - e^{-jω})/(jω) = sinc(ω/2) e^{-jω/2}`, the transform is
/// `r^{γ₁} conj(r)^{γ₂}`. The modulus and principal argument of `r` are
/// formed directly, which keeps the value exact at `ω = 0` and at `ω = 2πk`.
pub fn bspline_ft(p: SplineParams, omega: f64) -> Complex64 {
    if omega == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let s = sinc(omega / 2.0);
    if s == 0.0 || (omega / (2.0 * PI)).fract() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let (g1, g2) = p.exponents();
    let arg_r = if s > 0.0 {
        wrap_angle(-omega / 2.0)
    } else {
        wrap_angle(PI - omega / 2.0)
    };
    let arg_conj = if arg_r == PI { PI } else { -arg_r };
    cis(g1 * arg_r + g2 * arg_conj) * s.abs().powf(p.alpha + 1.0)
}

/// Refinement filter `H^α_τ(e^{jω})`.
///
/// On `(-π, π)` this equals `cos(ω/2)^{α+1} e^{-jωτ}`; at the Nyquist bin
/// both factors vanish and the limit `0` is returned for every `τ`.
pub fn refinement_ft(p: SplineParams, omega: f64) -> Complex64 {
    let w = wrap_angle(omega);
    if w == PI {
        return Complex64::new(0.0, 0.0);
    }
    let (g1, g2) = p.exponents();
    let (_, c) = half_sincos(w);
    // 1 + e^{±jω} = 2cos(ω/2) e^{±jω/2}, with cos(ω/2) > 0 here
    let plus = Complex64::new(1.0 + w.cos(), w.sin());
    let minus = plus.conj();
    let phase = principal_arg(plus) * g2 + principal_arg(minus) * g1;
    cis(phase) * c.powf(p.alpha + 1.0)
}

/// Fractional finite-difference symbol
/// `D^α_τ(e^{jω}) = (1 - e^{-jω})^{α/2+τ} (1 - e^{jω})^{α/2-τ}`.
///
/// At `ω = 0` the value is `1` for `α = τ = 0` and `0` otherwise.
pub fn fd_ft(alpha: f64, tau: f64, omega: f64) -> Complex64 {
    let w = wrap_angle(omega);
    let e1 = alpha / 2.0 + tau;
    let e2 = alpha / 2.0 - tau;
    if w == 0.0 {
        return if e1 == 0.0 && e2 == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let (s, c) = half_sincos(w);
    // 1 - e^{-jω} = 2 sin(ω/2) (sin(ω/2) + j cos(ω/2))
    let minus = Complex64::new(2.0 * s * s, 2.0 * s * c);
    let plus = minus.conj();
    let a = frac_power(minus, e1).expect("non-zero base");
    let b = frac_power(plus, e2).expect("non-zero base");
    a * b
}

/// Discrete Hilbert filter `d[k] = 1/(π(k + ½))`.
pub fn ht_filter(k: i64) -> f64 {
    1.0 / (PI * (k as f64 + 0.5))
}

/// Response of the discrete Hilbert filter, `D⁰_{-½}(e^{jω})`.
pub fn ht_response(omega: f64) -> Complex64 {
    fd_ft(0.0, -0.5, omega)
}

/// Autocorrelation (Gram) filter `A^α(e^{jω}) = Σ_k |β̂(ω + 2πk)|²`.
///
/// With `x = |ω|/2π` reduced to `[0, ½]` and `p = 2α + 2`,
/// `A = sinc(πx)^p + (sin πx / π)^p [ζ(p, 1+x) + ζ(p, 1-x)]`,
/// where the Hurwitz zeta values are summed to absolute accuracy `tol`.
pub fn autocorr_ft(alpha: f64, omega: f64, tol: f64) -> f64 {
    let x = wrap_angle(omega).abs() / (2.0 * PI);
    if x == 0.0 {
        return 1.0;
    }
    let p = 2.0 * alpha + 2.0;
    let s = if x == 0.5 { 1.0 } else { (PI * x).sin() };
    let head = (s / (PI * x)).powf(p);
    let scale = (s / PI).powf(p);
    if scale == 0.0 {
        return head;
    }
    // absolute accuracy needed inside the bracket
    let inner_tol = (tol / scale).max(f64::EPSILON);
    head + scale * (hurwitz_zeta(p, 1.0 + x, inner_tol) + hurwitz_zeta(p, 1.0 - x, inner_tol))
}

/// `B_{2k}/(2k)!` for `k = 1..=12`.
const BERNOULLI_OVER_FACTORIAL: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
    77683.0 / 14101100039391805440000.0,
    -236364091.0 / 1693824136731743669452800000.0,
];

/// Hurwitz zeta `ζ(s, a) = Σ_{n≥0} (n + a)^{-s}` for `s > 1`, `a > 0`.
///
/// Direct summation of the first terms followed by the Euler-Maclaurin tail.
/// The correction series is stopped once a term drops below `tol`; the
/// remainder is bounded by the first omitted term.
pub(crate) fn hurwitz_zeta(s: f64, a: f64, tol: f64) -> f64 {
    let n = 8 + 2 * s.ceil() as usize;
    let mut sum = 0.0;
    for k in (0..n).rev() {
        sum += (k as f64 + a).powf(-s);
    }
    let b = n as f64 + a;
    let mut tail = b.powf(1.0 - s) / (s - 1.0) + 0.5 * b.powf(-s);
    // rising factorial s(s+1)...(s+2k-2) times b^{-s-2k+1}
    let mut factor = s * b.powf(-s - 1.0);
    for (k, coef) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = coef * factor;
        tail += term;
        if term.abs() < tol {
            break;
        }
        let m = 2.0 * k as f64 + s;
        factor *= (m + 1.0) * (m + 2.0) / (b * b);
    }
    sum + tail
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(alpha: f64, tau: f64) -> SplineParams {
        SplineParams::new(alpha, tau).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(SplineParams::new(-1.0, 0.0).is_err());
        assert!(SplineParams::new(f64::NAN, 0.0).is_err());
        assert!(SplineParams::new(1.0, f64::INFINITY).is_err());
        assert_eq!(params(3.0, 0.25).shifted().tau(), 0.75);
    }

    #[test]
    fn frac_power_examples() {
        assert_eq!(frac_power(c(1.0, 0.0), 0.5).unwrap(), c(1.0, 0.0));
        assert!((frac_power(c(0.0, 1.0), 2.0).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((frac_power(c(-4.0, 0.0), 0.5).unwrap() - c(0.0, 2.0)).norm() < 1e-15);
        // negative zero imaginary part stays on the +π side
        assert!((frac_power(c(-4.0, -0.0), 0.5).unwrap() - c(0.0, 2.0)).norm() < 1e-15);
        assert_eq!(frac_power(c(0.0, 0.0), 1.5).unwrap(), c(0.0, 0.0));
        assert!(matches!(frac_power(c(0.0, 0.0), 0.0), Err(Error::ZeroPower(_))));
        assert!(matches!(frac_power(c(0.0, 0.0), -0.5), Err(Error::ZeroPower(_))));
    }

    /// Fourier transform of a real function on `[a, b]` by composite Simpson.
    fn quad_ft(f: impl Fn(f64) -> f64, a: f64, b: f64, omega: f64, n: usize) -> Complex64 {
        let h = (b - a) / n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..=n {
            let x = a + i as f64 * h;
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += Complex64::from_polar(w * f(x), -omega * x);
        }
        acc * (h / 3.0)
    }

    #[test]
    fn bspline_ft_examples() {
        for &(a, t) in &[(0.0, 0.0), (1.5, 0.3), (3.0, -2.0)] {
            assert_eq!(bspline_ft(params(a, t), 0.0), c(1.0, 0.0));
        }
        let hat = |x: f64| {
            if (0.0..=2.0).contains(&x) {
                1.0 - (x - 1.0).abs()
            } else {
                0.0
            }
        };
        let oracle = quad_ft(hat, 0.0, 2.0, PI, 20000);
        let got = bspline_ft(params(1.0, 1.0), PI);
        assert!((got - oracle).norm() < 1e-10, "{got} vs {oracle}");
        assert!((got - c(-4.0 / (PI * PI), 0.0)).norm() < 1e-12);

        let a = bspline_ft(params(3.0, 0.7), PI / 2.0).norm();
        let b = bspline_ft(params(3.0, 0.0), PI / 2.0).norm();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn bspline_ft_centered_box_and_zeros() {
        // causal degree 0 is the unit box on [0, 1]
        for &w in &[0.3, 1.0, 3.0, 5.0, 7.5, -9.0] {
            let v = bspline_ft(params(0.0, 0.5), w);
            let boxed = (c(1.0, 0.0) - cis(-w)) / c(0.0, w);
            assert!((v - boxed).norm() < 1e-15, "{w}: {v}");
        }
        // the symmetric member has a non-negative transform |sinc(ω/2)|^{α+1}
        for &w in &[0.3, 5.0, 7.5, -9.0] {
            let v = bspline_ft(params(0.0, 0.0), w);
            assert!((v - c(sinc(w / 2.0).abs(), 0.0)).norm() < 1e-15, "{w}: {v}");
        }
        for k in [-3.0, -1.0, 1.0, 2.0] {
            assert_eq!(bspline_ft(params(2.0, 5.0), 2.0 * PI * k), c(0.0, 0.0));
        }
    }

    #[test]
    fn refinement_examples() {
        assert_eq!(refinement_ft(params(2.3, -0.4), 0.0), c(1.0, 0.0));
        assert_eq!(refinement_ft(params(1.0, 1.0), PI), c(0.0, 0.0));
        // linear causal B-spline: h = [1, 2, 1]/4 at k = 0, 1, 2
        for &w in &[0.4, 1.3, -2.9] {
            let expect = (c(1.0, 0.0) + cis(-w) * 2.0 + cis(-2.0 * w)) / 4.0;
            assert!((refinement_ft(params(1.0, 1.0), w) - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn fd_examples() {
        let v = fd_ft(0.0, -0.5, PI / 2.0);
        assert!((v - cis(-PI / 4.0)).norm() < 1e-15, "{v}");
        assert_eq!(fd_ft(0.0, -0.5, 0.0), c(0.0, 0.0));
        assert_eq!(fd_ft(0.0, 0.0, 0.0), c(1.0, 0.0));
        assert!((fd_ft(0.0, -0.5, PI) - c(1.0, 0.0)).norm() < 1e-15);
        for &w in &[0.2, 1.0, -2.0, 3.1] {
            let v = fd_ft(1.0, 0.5, w);
            assert!((v - (c(1.0, 0.0) - cis(-w))).norm() < 1e-15);
        }
        // second difference, centred: 2 - 2cos ω
        for &w in &[0.2, 1.0, -2.0, 3.1] {
            let v = fd_ft(2.0, 0.0, w);
            assert!((v - c(2.0 - 2.0 * w.cos(), 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn ht_filter_examples() {
        assert!((ht_filter(0) - 2.0 / PI).abs() < 1e-16);
        assert_eq!(ht_filter(-1), -ht_filter(0));
        let energy: f64 = (-1000..=1000).map(|k| ht_filter(k).powi(2)).sum();
        assert!((energy - 0.99980).abs() < 5e-6, "{energy}");
    }

    #[test]
    fn ht_filter_matches_response() {
        // Σ d[k] e^{-jωk} converges (slowly) to D(e^{jω})
        let w = 1.1;
        let k_max = 200_000;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in -k_max..k_max {
            acc += cis(-w * k as f64) * ht_filter(k);
        }
        assert!((acc - ht_response(w)).norm() < 1e-4, "{acc}");
    }

    fn autocorr_brute(alpha: f64, omega: f64) -> f64 {
        let p = params(alpha, 0.0);
        let k_max = 4000;
        let mut sum = 0.0;
        for k in (-k_max..=k_max).rev() {
            sum += bspline_ft(p, omega + 2.0 * PI * k as f64).norm_sqr();
        }
        // integral tail bound for both sides
        let q = 2.0 * alpha + 2.0;
        let s = (omega / 2.0).sin().abs();
        sum + 2.0 * s.powf(q) / (PI.powf(q) * (q - 1.0) * (k_max as f64).powf(q - 1.0))
    }

    #[test]
    fn autocorr_oracles() {
        for &a in &[0.0, 1.0, 2.5, 7.0] {
            assert_eq!(autocorr_ft(a, 0.0, AUTOCORR_TOL), 1.0);
        }
        for &w in &[0.1, 1.0, 2.0, PI, -2.5] {
            assert!((autocorr_ft(0.0, w, AUTOCORR_TOL) - 1.0).abs() < 1e-13);
            let lin = 2.0 / 3.0 + w.cos() / 3.0;
            assert!((autocorr_ft(1.0, w, AUTOCORR_TOL) - lin).abs() < 1e-14);
            // sampled degree-7 B-spline
            let a7 = 151.0 / 315.0
                + 2.0 * (397.0 / 1680.0 * w.cos() + 1.0 / 42.0 * (2.0 * w).cos() + 1.0 / 5040.0 * (3.0 * w).cos());
            assert!((autocorr_ft(3.0, w, AUTOCORR_TOL) - a7).abs() < 1e-14);
        }
        assert!((autocorr_ft(1.0, PI, AUTOCORR_TOL) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn autocorr_fractional_degrees_match_brute_force() {
        for &a in &[0.5, 1.3, 2.7, 6.0] {
            for &w in &[0.05, 0.7, 2.2, 3.0, PI] {
                let got = autocorr_ft(a, w, AUTOCORR_TOL);
                let brute = autocorr_brute(a, w);
                assert!((got - brute).abs() < 1e-11, "a={a} w={w}: {got} vs {brute}");
            }
        }
    }

    #[test]
    fn hurwitz_zeta_known_values() {
        // ζ(2, 1) = π²/6, ζ(4, 1) = π⁴/90, ζ(2, ½) = π²/2
        assert!((hurwitz_zeta(2.0, 1.0, 1e-16) - PI * PI / 6.0).abs() < 1e-14);
        assert!((hurwitz_zeta(4.0, 1.0, 1e-16) - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((hurwitz_zeta(2.0, 0.5, 1e-16) - PI * PI / 2.0).abs() < 1e-13);
    }

    proptest! {
        #[test]
        fn tau_only_affects_phase(alpha in 0.0f64..8.0, t1 in -3.0f64..3.0, t2 in -3.0f64..3.0, w in -20.0f64..20.0) {
            let a = bspline_ft(params(alpha, t1), w).norm();
            let b = bspline_ft(params(alpha, t2), w).norm();
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn ht_factorization(alpha in 0.0f64..8.0, tau in -2.0f64..2.0, w in -3.1f64..3.1) {
            prop_assume!(w.abs() > 1e-9);
            let p = params(alpha, tau);
            let lhs = bspline_ft(p, w);
            let rhs = c(0.0, w.signum()) * ht_response(w) * bspline_ft(p.shifted(), w);
            prop_assert!((lhs - rhs).norm() < 1e-12, "{} vs {}", lhs, rhs);
        }

        #[test]
        fn ht_factorization_beyond_principal_period(alpha in 0.0f64..6.0, tau in -1.0f64..1.0, w in 3.2f64..30.0, neg in any::<bool>()) {
            let w = if neg { -w } else { w };
            let p = params(alpha, tau);
            let lhs = bspline_ft(p, w);
            let rhs = c(0.0, w.signum()) * ht_response(w) * bspline_ft(p.shifted(), w);
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn half_sample_shift(alpha in 0.0f64..8.0, tau in -2.0f64..2.0, w in -3.1f64..3.1) {
            let p = params(alpha, tau);
            let lhs = refinement_ft(p.shifted(), w);
            let rhs = cis(-w / 2.0) * refinement_ft(p, w);
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn conjugate_mirror(alpha in 0.0f64..8.0, tau in -2.0f64..2.0, w in -3.1f64..3.1) {
            let p = params(alpha, tau);
            let lhs = refinement_ft(p.shifted(), w);
            let rhs = ht_response(PI - w) * refinement_ft(p, w);
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn ht_response_is_unitary(w in -10.0f64..10.0) {
            prop_assume!(wrap_angle(w) != 0.0);
            prop_assert!((ht_response(w).norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn two_scale_relation(alpha in 0.0f64..6.0, tau in -1.0f64..1.0, w in -12.0f64..12.0) {
            let p = params(alpha, tau);
            let lhs = bspline_ft(p, 2.0 * w);
            let rhs = refinement_ft(p, w) * bspline_ft(p, w);
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn autocorr_riesz_bounds(alpha in 0.0f64..10.0, w in -3.15f64..3.15) {
            let a = autocorr_ft(alpha, w, AUTOCORR_TOL);
            prop_assert!(a > 0.0 && a <= 1.0 + 1e-14);
            prop_assert!(a >= autocorr_ft(alpha, PI, AUTOCORR_TOL) - 1e-14);
        }
    }
}
