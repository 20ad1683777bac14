//! Error-function family in forms that stay finite where the model's closed
//! forms multiply very large exponentials by very small Gaussian tails.
//!
//! `erf`/`erfc` come from `libm` (a port of the FreeBSD msun routines). The
//! scaled complementary error function `erfcx(x) = exp(x²)·erfc(x)` is built
//! on top: a product form on `[0, 10)` with the square split exactly, and a
//! continued fraction beyond.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// `1/√π`
pub const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Switch point between the product form and the continued fraction.
const CF_THRESHOLD: f64 = 10.0;
/// Continued-fraction depth; enough for full double precision at the threshold.
const CF_TERMS: usize = 80;

#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Standard normal cumulative distribution `Φ(z) = ½·erfc(−z/√2)`.
///
/// Accurate in relative terms in both tails; saturates to exactly 0 or 1
/// without producing NaN.
#[inline]
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z * FRAC_1_SQRT_2)
}

/// Standard normal density.
#[inline]
pub fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Evaluates the continued fraction
/// `K(x) = x + (1/2)/(x + (2/2)/(x + (3/2)/(x + ...)))` for large `x`,
/// returning `(K, K − x)` with the tail computed without cancellation.
fn erfc_continued_fraction(x: f64) -> (f64, f64) {
    let mut t = x;
    for k in (2..=CF_TERMS).rev() {
        t = x + 0.5 * k as f64 / t;
    }
    let tail = 0.5 / t;
    (x + tail, tail)
}

/// Scaled complementary error function `erfcx(x) = exp(x²)·erfc(x)`.
///
/// Finite for all `x > −26.6`; for larger negative arguments the true value
/// exceeds the double range and `+∞` is returned.
pub fn erfc_scaled(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        // erfcx(−y) = 2·exp(y²) − erfcx(y)
        return 2.0 * exp_square(x) - erfc_scaled(-x);
    }
    if x < CF_THRESHOLD {
        exp_square(x) * erfc(x)
    } else {
        let (k, _) = erfc_continued_fraction(x);
        FRAC_1_SQRT_PI / k
    }
}

/// `1/√π − x·erfcx(x)`.
///
/// This is the remainder left when the leading asymptotic term of `erfcx` is
/// removed; it is positive for every real `x` and decays like `1/(2√π x²)`.
/// It appears when the radiation-boundary default rate is written in a
/// manifestly non-negative form.
pub fn erfcx_deficit(x: f64) -> f64 {
    if x < CF_THRESHOLD {
        FRAC_1_SQRT_PI - x * erfc_scaled(x)
    } else {
        let (k, tail) = erfc_continued_fraction(x);
        FRAC_1_SQRT_PI * tail / k
    }
}

/// `exp(x²)` with the square split into an exact head and tail so that the
/// rounding of `x²` does not leak into the exponential for large `x`.
#[inline]
fn exp_square(x: f64) -> f64 {
    let hi = x * x;
    let lo = x.mul_add(x, -hi);
    hi.exp() * (1.0 + lo)
}

/// `exp(u²/2)·Φ(−u)`, i.e. the Gaussian upper tail with its leading decay
/// removed. Equals `½·erfcx(u/√2)`.
#[inline]
pub fn scaled_normal_tail(u: f64) -> f64 {
    0.5 * erfc_scaled(u * FRAC_1_SQRT_2)
}

/// `exp(β)·Φ(−u)` evaluated without forming either factor on its own.
///
/// For `u ≥ 0` the product is rewritten as `exp(β − u²/2)·½·erfcx(u/√2)`,
/// which is finite whenever the true product is, even when `exp(β)` alone
/// would overflow. For `u < 0`, `Φ(−u) ∈ (½, 1]` and the naive product is
/// already safe.
pub fn exp_times_normal_cdf(beta: f64, u: f64) -> f64 {
    if u >= 0.0 {
        (beta - 0.5 * u * u).exp() * scaled_normal_tail(u)
    } else {
        beta.exp() * std_normal_cdf(-u)
    }
}

/// `exp(β)·½·erfc(w)` when the caller already knows `β − w²` in closed form.
///
/// The model formulas pair each growing exponential with a Gaussian tail
/// whose combined exponent simplifies algebraically; passing the simplified
/// `reduced = β − w²` avoids the cancellation of two large numbers.
#[inline]
pub(crate) fn exp_times_half_erfc(beta: f64, reduced: f64, w: f64) -> f64 {
    if w >= 0.0 {
        0.5 * reduced.exp() * erfc_scaled(w)
    } else {
        0.5 * beta.exp() * erfc(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Maclaurin series of erf, summed in f64. Converges for moderate |z|
    /// and shares nothing with the libm rational approximations.
    fn erf_series(z: f64) -> f64 {
        let mut term = z;
        let mut sum = z;
        let z2 = z * z;
        let mut n = 0.0;
        while term.abs() > 1e-20 * sum.abs() {
            n += 1.0;
            term *= -z2 / n;
            sum += term / (2.0 * n + 1.0);
        }
        2.0 * FRAC_1_SQRT_PI * sum
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn normal_cdf_reference_values() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        // mpmath, 50 digits: ncdf(-1.23) = 0.109348552425691941358...
        assert!((std_normal_cdf(-1.23) - 0.109_348_552_425_691_94).abs() < 1e-15);
        let series = 0.5 * (1.0 + erf_series(-1.23 / 2f64.sqrt()));
        assert!((std_normal_cdf(-1.23) - series).abs() < 1e-14);
        assert!((std_normal_cdf(-1.23) - 0.10935).abs() < 1e-5);
        assert_eq!(std_normal_cdf(40.0), 1.0);
        assert!(std_normal_cdf(-37.0) > 0.0);
        assert_eq!(std_normal_cdf(-40.0), 0.0);
    }

    #[test]
    fn normal_cdf_symmetry() {
        let mut z = -8.0;
        while z <= 8.0 {
            let s = std_normal_cdf(z) + std_normal_cdf(-z);
            assert!((s - 1.0).abs() <= 1e-15, "z={z} sum={s}");
            z += 0.01;
        }
    }

    #[test]
    fn erfcx_small_args_match_series() {
        for &x in &[0.0f64, 0.05, 0.3, 0.7, 1.2, 2.0] {
            let want = (x * x).exp() * (1.0 - erf_series(x));
            assert!(rel(erfc_scaled(x), want) < 1e-12, "x={x}");
        }
        assert_eq!(erfc_scaled(0.0), 1.0);
    }

    #[test]
    fn erfcx_reference_values() {
        // mpmath, 50 digits.
        let cases = [
            (0.5, 0.615_690_344_192_925_9),
            (5.0, 0.110_704_637_733_068_6),
            (9.999, 0.056_146_552_603_965_94),
            (10.0, 0.056_140_992_743_822_59),
            (26.0, 0.021_683_584_850_562_91),
            (100.0, 0.005_641_613_782_989_433),
            (1e4, 5.641_895_807_268_084e-5),
        ];
        for (x, want) in cases {
            assert!(rel(erfc_scaled(x), want) < 1e-12, "x={x}: {} vs {want}", erfc_scaled(x));
        }
    }

    #[test]
    fn erfcx_asymptotic_large_argument() {
        // erfcx(x) ~ 1/(x√π) · (1 − 1/(2x²) + 3/(4x⁴))
        let x: f64 = 100.0;
        let asym = FRAC_1_SQRT_PI / x * (1.0 - 0.5 / (x * x) + 0.75 / x.powi(4));
        assert!(rel(erfc_scaled(x), asym) < 1e-9);
        assert!(rel(erfc_scaled(x), FRAC_1_SQRT_PI / x) < 1e-4);
    }

    #[test]
    fn erfcx_reflection_identity() {
        for &z in &[0.1f64, 0.5, 1.0] {
            let lhs = erfc_scaled(-z) - (2.0 * (z * z).exp() - erfc_scaled(z));
            assert!(lhs.abs() < 1e-14, "z={z}");
        }
    }

    #[test]
    fn erfcx_continuous_across_threshold() {
        let below = erfc_scaled(CF_THRESHOLD - 1e-12);
        let above = erfc_scaled(CF_THRESHOLD);
        assert!(rel(below, above) < 1e-12);
        let below = erfcx_deficit(CF_THRESHOLD - 1e-12);
        let above = erfcx_deficit(CF_THRESHOLD);
        assert!(rel(below, above) < 1e-11);
    }

    #[test]
    fn erfcx_strictly_decreasing() {
        let mut prev = erfc_scaled(0.0);
        let mut x = 0.0;
        while x < 1e4 {
            x = if x < 50.0 { x + 0.01 } else { x * 1.01 };
            let v = erfc_scaled(x);
            assert!(v < prev, "x={x}");
            prev = v;
        }
    }

    #[test]
    fn deficit_positive_and_asymptotic() {
        let mut x = -5.0;
        while x < 1e3 {
            assert!(erfcx_deficit(x) > 0.0, "x={x}");
            x += if x < 20.0 { 0.05 } else { 7.3 };
        }
        let x: f64 = 300.0;
        let asym = FRAC_1_SQRT_PI * (0.5 / (x * x) - 0.75 / x.powi(4));
        assert!(rel(erfcx_deficit(x), asym) < 1e-8);
    }

    #[test]
    fn exp_times_cdf_special_cases() {
        assert!(rel(exp_times_normal_cdf(0.0, 1.5), std_normal_cdf(-1.5)) < 1e-14);
        for &b in &[-30.0, -1.0, 0.0, 2.5, 300.0] {
            let got = exp_times_normal_cdf(b, 0.0);
            assert!(rel(got, 0.5 * f64::exp(b)) < 1e-14, "beta={b}");
        }
    }

    #[test]
    fn exp_times_cdf_overflow_regime() {
        // exp(800)·Φ(−40), 256-bit reference: 0.00996733518830130998...
        let got = exp_times_normal_cdf(800.0, 40.0);
        assert!(got.is_finite());
        assert!(rel(got, 0.009_967_335_188_301_31) < 1e-9, "{got}");
    }

    #[test]
    fn exp_times_cdf_matches_naive_where_representable() {
        for &beta in &[-50.0, -3.0, 0.0, 1.0, 40.0] {
            for &u in &[-6.0, -1.0, 0.0, 0.3, 2.0, 7.5, 20.0] {
                let naive = f64::exp(beta) * std_normal_cdf(-u);
                if naive == 0.0 || !naive.is_finite() {
                    continue;
                }
                assert!(rel(exp_times_normal_cdf(beta, u), naive) < 1e-10, "beta={beta} u={u}");
            }
        }
    }
}
