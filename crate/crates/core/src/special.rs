//! Gamma function for real arguments (Lanczos approximation, g = 7, n = 9).

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (z - 1)
    let mut a = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    a
}

/// Γ(x) for real x, using the reflection formula below 1/2.
///
/// Poles (non-positive integers) return NaN.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split the power so that t^{z+1/2} does not overflow before e^{-t} applies
    let half_pow = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half_pow * (-t).exp() * half_pow * lanczos_sum(z)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // Γ(x) > 0 on (0, 1/2)
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_and_half_integer_values() {
        let mut fact = 1.0;
        for n in 1..20 {
            let g = gamma(n as f64);
            assert!((g - fact).abs() <= 1e-14 * fact, "n={n} {g} {fact}");
            fact *= n as f64;
        }
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma(1.5) - 0.5 * PI.sqrt()).abs() < 1e-15);
        assert!((gamma(-0.5) + 2.0 * PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn log_gamma_agrees_with_gamma() {
        for &x in &[0.1, 0.3, 0.75, 1.0, 2.5, 7.3, 40.0, 150.0] {
            let lg = ln_gamma(x);
            assert!(
                (lg - gamma(x).ln()).abs() < 1e-12 * lg.abs().max(1.0),
                "x={x}"
            );
        }
        // Stirling check far beyond the direct range
        let x = 1000.0_f64;
        let stirling = (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * x);
        assert!((ln_gamma(x) - stirling).abs() < 1e-9);
    }

    #[test]
    fn poles_are_nan() {
        assert!(gamma(0.0).is_nan());
        assert!(gamma(-3.0).is_nan());
    }
}
