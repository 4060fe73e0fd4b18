//! Invariant suites behind `alpha-bridge verify`.
//!
//! Every check reports a measured quantity against a tolerance and passes iff
//! measured ≤ tolerance. Boolean properties are reported as a violation count
//! against tolerance 0.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bessel::{
    bessel_j, bessel_j_small_x_limit_checks, bessel_zeros, euler_product_partial, lommel_integral,
    mcmahon_leading, BesselOrder, DEFAULT_ZERO_TOL,
};
use crate::bridge::BridgeParams;
use crate::error::Result;
use crate::kl::{
    eigen_residual, eigen_unweighted, eigen_weighted, eigenvalue_tail_mass, gram_matrix,
    scaling_law_check,
};
use crate::normsq::{
    fredholm_derivative_bessel, fredholm_derivative_product, fredholm_determinant,
    fredholm_product, laplace_transform, laplace_weighted_half, laplace_weighted_half_product,
    large_deviation_constant, rayleigh_from_zeros, rayleigh_tail_estimate, small_deviation,
    small_deviation_constant, survival, NormSqDistribution, SeriesStatus, SurvivalSeriesConfig,
    TailConstantForm,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Bessel,
    Kl,
    Normsq,
    All,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Bessel => "bessel",
            Suite::Kl => "kl",
            Suite::Normsq => "normsq",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            suite,
            name: name.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
        }
    }

    fn count(suite: &'static str, name: impl Into<String>, violations: usize) -> Self {
        Self::new(suite, name, violations as f64, 0.0)
    }
}

/// Runs `suite` for the bridge `params`; `horizon_s` is used by the weighted checks.
pub fn run_suite(suite: Suite, params: &BridgeParams, horizon_s: f64) -> Result<Vec<Check>> {
    match suite {
        Suite::Bessel => bessel_suite(params),
        Suite::Kl => kl_suite(params, horizon_s),
        Suite::Normsq => normsq_suite(params, horizon_s),
        Suite::All => {
            let mut all = bessel_suite(params)?;
            all.extend(kl_suite(params, horizon_s)?);
            all.extend(normsq_suite(params, horizon_s)?);
            Ok(all)
        }
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
}

fn bessel_suite(params: &BridgeParams) -> Result<Vec<Check>> {
    const S: &str = "bessel";
    let mut out = Vec::new();
    let half = BesselOrder::new(0.5)?;
    let minus_half = BesselOrder::new(-0.5)?;
    let mut worst_sin = 0.0_f64;
    let mut worst_cos = 0.0_f64;
    for x in log_grid(1e-3, 50.0, 400) {
        let pre = (2.0 / (PI * x)).sqrt();
        let j = bessel_j(half, x)?;
        worst_sin = worst_sin.max((j - pre * x.sin()).abs() / j.abs().max(1.0));
        let j = bessel_j(minus_half, x)?;
        worst_cos = worst_cos.max((j - pre * x.cos()).abs() / j.abs().max(1.0));
    }
    out.push(Check::new(S, "closed-form J_{1/2}", worst_sin, 1e-12));
    out.push(Check::new(S, "closed-form J_{-1/2}", worst_cos, 1e-12));

    let nus = [-0.9, -0.5, -0.25, 0.0, 0.5, 1.0, 2.5, params.nu()];
    let mut tables = Vec::new();
    for &nu in &nus {
        tables.push(bessel_zeros(BesselOrder::new(nu)?, 20, DEFAULT_ZERO_TOL)?);
    }
    tables.sort_by(|a, b| a.order().nu().total_cmp(&b.order().nu()));
    let mut violations = 0;
    for pair in tables.windows(2) {
        if pair[1].order().nu() == pair[0].order().nu() {
            continue;
        }
        violations += (0..20)
            .filter(|&k| pair[1].zeros()[k] <= pair[0].zeros()[k])
            .count();
    }
    out.push(Check::count(S, "zero monotonicity in order", violations));

    let nu = params.nu();
    let order = BesselOrder::new(nu)?;
    let zeros = bessel_zeros(order, 10_000, DEFAULT_ZERO_TOL)?;
    let mut violations = 0;
    for &z in &zeros.zeros()[..1000] {
        let h = 1e-7 * z;
        let left = bessel_j(order, z - h)?;
        let right = bessel_j(order, z + h)?;
        if left.signum() == right.signum() {
            violations += 1;
        }
    }
    out.push(Check::count(S, "zero simplicity (sign change)", violations));

    // z_k − (k + (ν−1/2)/2)π ≈ −(4ν²−1)/(8β_k), so k |residual| stays below |4ν²−1|/(8π)
    let mu = 4.0 * nu * nu;
    let fitted = (500..=1000)
        .map(|k| k as f64 * (zeros.zero(k) - mcmahon_leading(nu, k)).abs())
        .fold(0.0_f64, f64::max);
    out.push(Check::new(
        S,
        "McMahon residual",
        fitted,
        // plus k times the zero finder's resolution floor at z_1000
        1.01 * (mu - 1.0).abs() / (8.0 * PI) + 1000.0 * 8.0 * f64::EPSILON * zeros.zero(1000),
    ));

    let mut worst = 0.0_f64;
    for k in [1, 5, 20] {
        let pair = lommel_integral(order, k)?;
        worst = worst.max((pair.quadrature - pair.closed_form).abs() / pair.closed_form);
    }
    out.push(Check::new(S, "Lommel integral", worst, 1e-9));

    let z1 = zeros.zero(1);
    let mut worst = 0.0_f64;
    for i in 1..40 {
        let x = z1 * i as f64 / 40.0;
        worst = worst.max((euler_product_partial(&zeros, x, 10_000) - bessel_j(order, x)?).abs());
    }
    out.push(Check::new(S, "Euler product partial (N=10^4)", worst, 1e-4));

    let report = bessel_j_small_x_limit_checks(order);
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    out.push(Check::count(S, "small-argument limits", failed));
    Ok(out)
}

fn kl_suite(params: &BridgeParams, horizon_s: f64) -> Result<Vec<Check>> {
    const S: &str = "kl";
    let mut out = Vec::new();
    let n = 50;
    let sys = eigen_unweighted(params, n)?;
    let gram = gram_matrix(&sys, n)?;
    out.push(Check::new(
        S,
        "orthonormality (unweighted, k,l <= 50)",
        identity_distance(&gram),
        1e-8,
    ));

    let wsys = eigen_weighted(params, horizon_s, n)?;
    let gram = gram_matrix(&wsys, n)?;
    out.push(Check::new(
        S,
        "orthonormality (weighted, k,l <= 50)",
        identity_distance(&gram),
        1e-8,
    ));

    let resid = eigen_residual(&sys, 20, 41)?;
    out.push(Check::new(
        S,
        "eigen residual / lambda_1 (k <= 20)",
        resid / sys.eigenvalue(1),
        1e-6,
    ));

    let order = BesselOrder::new(params.nu())?;
    let zeros = bessel_zeros(order, 4000, DEFAULT_ZERO_TOL)?;
    let mut worst = 0.0_f64;
    for &z in &zeros.zeros()[..50] {
        let plus = bessel_j(BesselOrder::new(params.nu() + 1.0)?, z)?;
        let minus = crate::bessel::j_nu(params.nu() - 1.0, z);
        worst = worst.max((plus.abs() - minus.abs()).abs() / plus.abs());
    }
    out.push(Check::new(
        S,
        "|J_{nu+1}(z_k)| = |J_{nu-1}(z_k)|",
        worst,
        1e-10,
    ));

    // tail mass positive, decreasing, and N·tail roughly constant
    let mut violations = 0;
    let mut prev = f64::INFINITY;
    let mut scaled = Vec::new();
    for n in [250, 500, 1000, 2000, 4000] {
        let tail = eigenvalue_tail_mass(params, &zeros, n);
        if !(tail > 0.0 && tail < prev) {
            violations += 1;
        }
        prev = tail;
        scaled.push(tail * n as f64);
    }
    let spread = scaled.iter().cloned().fold(0.0, f64::max)
        / scaled.iter().cloned().fold(f64::INFINITY, f64::min);
    if spread > 1.5 {
        violations += 1;
    }
    out.push(Check::count(
        S,
        "Mercer tail positive with O(1/N) decay",
        violations,
    ));

    out.push(Check::new(
        S,
        "scaling law",
        scaling_law_check(params, 10)?.max(),
        1e-12,
    ));
    Ok(out)
}

fn identity_distance(gram: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0_f64;
    for (k, row) in gram.iter().enumerate() {
        for (l, &g) in row.iter().enumerate() {
            let target = if k == l { 1.0 } else { 0.0 };
            worst = worst.max((g - target).abs());
        }
    }
    worst
}

fn normsq_suite(params: &BridgeParams, horizon_s: f64) -> Result<Vec<Check>> {
    const S: &str = "normsq";
    let mut out = Vec::new();
    let big_t = params.horizon();
    let dist = NormSqDistribution::with_zero_count(params, 10_000)?;

    let n = 10_000;
    let r = rayleigh_from_zeros(dist.zeros(), n);
    let est = r.partial + rayleigh_tail_estimate(params.nu(), n);
    out.push(Check::new(
        S,
        "Rayleigh identity (N=10^4 + tail)",
        ((est - r.exact) / r.exact).abs(),
        1e-6,
    ));

    let wiener = NormSqDistribution::with_zero_count(&BridgeParams::new(1.0, big_t)?, 1000)?;
    let mut worst = 0.0_f64;
    for c in [0.1f64, 1.0, 10.0] {
        let a = (2.0 * c).sqrt() * big_t;
        let closed = (a / a.sinh()).sqrt();
        worst = worst.max((laplace_transform(&wiener, c, 1000)?.value - closed).abs());
    }
    out.push(Check::new(S, "Laplace closed form (alpha=1)", worst, 1e-8));

    let half = BridgeParams::new(0.5, big_t)?;
    let mut worst = 0.0_f64;
    for c in [0.3, 1.0] {
        let closed = laplace_weighted_half(&half, horizon_s, c)?;
        let prod = laplace_weighted_half_product(&half, horizon_s, c, 1000, true)?;
        worst = worst.max((closed - prod).abs());
    }
    out.push(Check::new(
        S,
        "Laplace closed form (weighted alpha=1/2)",
        worst,
        1e-8,
    ));

    let umax = (dist.zeros().zero(3) / big_t).powi(2);
    let mut worst = 0.0_f64;
    for i in 0..=100 {
        let u = umax * i as f64 / 100.0;
        worst =
            worst.max((fredholm_determinant(&dist, u)? - fredholm_product(&dist, u, 1000)?).abs());
    }
    out.push(Check::new(
        S,
        "Fredholm closed form vs product",
        worst,
        1e-6,
    ));

    let b = fredholm_derivative_bessel(&dist);
    let p = fredholm_derivative_product(&dist, n)?;
    out.push(Check::new(
        S,
        "Fredholm derivative identity",
        ((b - p) / b).abs(),
        1e-6,
    ));

    let b = large_deviation_constant(&dist, TailConstantForm::BesselConstant)?;
    let p = large_deviation_constant(&dist, TailConstantForm::ProductConstant)?;
    out.push(Check::new(
        S,
        "large-deviation constant forms",
        ((b - p) / b).abs(),
        1e-6,
    ));

    let cfg = SurvivalSeriesConfig::default();
    let mut violations = 0;
    let mut prev = 1.0;
    for x in [0.05, 0.1, 0.3, 1.0, 2.0].map(|x| x * big_t * big_t) {
        let s = survival(&dist, x, &cfg)?;
        if s.status != SeriesStatus::Converged || !(s.value < prev && s.value > 0.0) {
            violations += 1;
        }
        prev = s.value;
    }
    out.push(Check::count(
        S,
        "survival series converged and decreasing",
        violations,
    ));

    let c = small_deviation_constant(0.0, 1.0);
    out.push(Check::new(
        S,
        "small-deviation constant (alpha=1/2, T=1)",
        (c - 2f64.powf(1.5) * PI.powf(-0.25)).abs(),
        1e-12,
    ));

    let unit = NormSqDistribution::from_zeros(&params.with_horizon(1.0)?, dist.zeros().clone());
    let mut worst = 0.0_f64;
    for eps in [0.02, 0.05, 0.1] {
        let lhs = small_deviation(&dist, eps * big_t * big_t)?.asymptote;
        let rhs = small_deviation(&unit, eps)?.asymptote;
        worst = worst.max(((lhs - rhs) / rhs).abs());
    }
    out.push(Check::new(S, "small-deviation scaling in T", worst, 1e-12));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_on_defaults() {
        for &(a, t, s) in &[(1.0, 1.0, 0.5), (0.3, 2.0, 1.0)] {
            let params = BridgeParams::new(a, t).unwrap();
            let checks = run_suite(Suite::All, &params, s).unwrap();
            for c in &checks {
                assert!(c.passed, "alpha={a}: {c:?}");
            }
            let names: Vec<&str> = checks.iter().map(|c| c.name.as_str()).collect();
            assert!(names.contains(&"closed-form J_{1/2}"));
            assert!(names.contains(&"McMahon residual"));
            assert!(names.contains(&"Fredholm derivative identity"));
        }
    }
}
