//! Distribution of the squared L²-norm ∫_0^T X_t² dt = Σ_k λ_k ξ_k².
//!
//! Everything here is driven by the zeros z_k of J_ν through λ_k = T²/z_k²
//! and the exact total mass Σ_k λ_k = T²/(4(ν+1)), which lets truncated
//! products carry an analytic first-order tail correction.

use std::f64::consts::PI;

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::bessel::{
    bessel_zeros, j_nu, j_nu_normalized, BesselOrder, ZeroTable, DEFAULT_ZERO_TOL,
};
use crate::bridge::{path_rng, BridgeParams};
use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use crate::special::gamma;

/// Number of zeros kept by [`NormSqDistribution::new`] unless asked otherwise.
pub const DEFAULT_ZERO_COUNT: usize = 1000;

/// The law of Σ λ_k ξ_k² for one parameter pair (α, T).
#[derive(Debug, Clone)]
pub struct NormSqDistribution {
    params: BridgeParams,
    zeros: ZeroTable,
    exact_total_mass: f64,
}

impl NormSqDistribution {
    pub fn new(params: &BridgeParams) -> Result<Self> {
        Self::with_zero_count(params, DEFAULT_ZERO_COUNT)
    }

    pub fn with_zero_count(params: &BridgeParams, count: usize) -> Result<Self> {
        let order = BesselOrder::new(params.nu())?;
        let zeros = bessel_zeros(order, count.max(2), DEFAULT_ZERO_TOL)?;
        Ok(Self::from_zeros(params, zeros))
    }

    pub fn from_zeros(params: &BridgeParams, zeros: ZeroTable) -> Self {
        let exact_total_mass = params.horizon().powi(2) * 0.25 / (params.nu() + 1.0);
        Self {
            params: *params,
            zeros,
            exact_total_mass,
        }
    }

    pub fn params(&self) -> &BridgeParams {
        &self.params
    }

    pub fn zeros(&self) -> &ZeroTable {
        &self.zeros
    }

    /// Σ_k λ_k = E ∫_0^T X_t² dt.
    pub fn exact_total_mass(&self) -> f64 {
        self.exact_total_mass
    }

    /// λ_k, 1-based; k must not exceed the number of stored zeros.
    pub fn lambda(&self, k: usize) -> f64 {
        let z = self.zeros.zero(k);
        self.params.horizon().powi(2) / (z * z)
    }

    pub fn lambdas(&self, n: usize) -> Vec<f64> {
        (1..=n.min(self.zeros.len()))
            .map(|k| self.lambda(k))
            .collect()
    }

    /// Σ_{k>n} λ_k from the exact total mass.
    pub fn tail_mass(&self, n: usize) -> f64 {
        let partial: f64 = (1..=n.min(self.zeros.len())).map(|k| self.lambda(k)).sum();
        (self.exact_total_mass - partial).max(0.0)
    }

    /// Upper bound on Σ_{k>n} λ_k² using z_k ≥ z_n + (k − n) d, where d is a
    /// lower bound on the gap between consecutive zeros beyond z_n.
    fn tail_square_bound(&self, n: usize) -> f64 {
        let nu = self.params.nu();
        let zn = self.zeros.zero(n);
        let excess = (0.25 - nu * nu).max(0.0);
        let gap = PI / (1.0 + excess / (zn * zn)).sqrt();
        self.params.horizon().powi(4) / (3.0 * gap * zn.powi(3))
    }

    fn check_count(&self, n: usize, op: &'static str) -> Result<usize> {
        if n == 0 || n > self.zeros.len() {
            return Err(Error::domain(
                op,
                format!("factor count {n} outside 1..={}", self.zeros.len()),
            ));
        }
        Ok(n)
    }
}

/// A value together with an error bound or estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// E exp(−c ∫X²) = Π_k (1 + 2cλ_k)^{−1/2}.
///
/// Uses n factors and the correction exp(−c Σ_{k>n} λ_k). The neglected factor
/// lies in [1, exp(c² Σ_{k>n} λ_k²)], which gives the reported bound.
pub fn laplace_transform(dist: &NormSqDistribution, c: f64, n: usize) -> Result<Estimate> {
    if !(c >= 0.0) {
        return Err(Error::domain(
            "laplace_transform",
            format!("c = {c} must be >= 0"),
        ));
    }
    let n = dist.check_count(n, "laplace_transform")?;
    if c == 0.0 {
        return Ok(Estimate {
            value: 1.0,
            error: 0.0,
        });
    }
    let log_prod: f64 = (1..=n)
        .map(|k| -0.5 * (2.0 * c * dist.lambda(k)).ln_1p())
        .sum();
    let value = (log_prod - c * dist.tail_mass(n)).exp();
    let error = value * (c * c * dist.tail_square_bound(n)).exp_m1();
    Ok(Estimate { value, error })
}

/// Closed form 1/sqrt(cosh(sqrt(2c) ln(T/(T−S)))) for the weighted α = 1/2 functional
/// ∫_0^S X_u²/(T−u)² du.
pub fn laplace_weighted_half(params: &BridgeParams, horizon_s: f64, c: f64) -> Result<f64> {
    let log_ratio = weighted_half_log_ratio(params, horizon_s, c)?;
    Ok(1.0 / ((2.0 * c).sqrt() * log_ratio).cosh().sqrt())
}

/// Product form Π_{k≤n} (1 + 2c L²/((k−1/2)²π²))^{−1/2}, L = ln(T/(T−S)),
/// optionally with the exact first-order tail factor (Σ_k ((k−1/2)π)^{−2} = 1/2).
pub fn laplace_weighted_half_product(
    params: &BridgeParams,
    horizon_s: f64,
    c: f64,
    n: usize,
    tail_correction: bool,
) -> Result<f64> {
    let log_ratio = weighted_half_log_ratio(params, horizon_s, c)?;
    let l2 = log_ratio * log_ratio;
    let mut log_prod = 0.0;
    let mut partial = 0.0;
    for k in 1..=n {
        let w = 1.0 / ((k as f64 - 0.5) * PI).powi(2);
        partial += w;
        log_prod -= 0.5 * (2.0 * c * l2 * w).ln_1p();
    }
    if tail_correction {
        log_prod -= c * l2 * (0.5 - partial).max(0.0);
    }
    Ok(log_prod.exp())
}

fn weighted_half_log_ratio(params: &BridgeParams, horizon_s: f64, c: f64) -> Result<f64> {
    if !params.is_half() {
        return Err(Error::domain(
            "laplace_weighted_half",
            format!("requires alpha = 1/2, got {}", params.alpha()),
        ));
    }
    let big_t = params.horizon();
    if !(horizon_s > 0.0 && horizon_s < big_t) {
        return Err(Error::domain(
            "laplace_weighted_half",
            format!("S = {horizon_s} must lie in (0, {big_t})"),
        ));
    }
    if !(c >= 0.0) {
        return Err(Error::domain(
            "laplace_weighted_half",
            format!("c = {c} must be >= 0"),
        ));
    }
    Ok((big_t / (big_t - horizon_s)).ln())
}

/// F(u) = Π_k (1 − λ_k u) = Γ(ν+1) (sqrt(u)T/2)^{−ν} J_ν(sqrt(u)T).
pub fn fredholm_determinant(dist: &NormSqDistribution, u: f64) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(Error::domain(
            "fredholm_determinant",
            format!("u = {u} must be >= 0"),
        ));
    }
    Ok(j_nu_normalized(
        dist.params.nu(),
        u.sqrt() * dist.params.horizon(),
    ))
}

/// Π_{k≤n} (1 − λ_k u) · exp(−u Σ_{k>n} λ_k).
pub fn fredholm_product(dist: &NormSqDistribution, u: f64, n: usize) -> Result<f64> {
    let n = dist.check_count(n, "fredholm_product")?;
    let prod: f64 = (1..=n).map(|k| 1.0 - dist.lambda(k) * u).product();
    Ok(prod * (-u * dist.tail_mass(n)).exp())
}

/// F'(z_1²/T²) = −Γ(ν+1) 2^{ν−1} T² z_1^{−ν−1} J_{ν+1}(z_1).
pub fn fredholm_derivative_bessel(dist: &NormSqDistribution) -> f64 {
    let nu = dist.params.nu();
    let z1 = dist.zeros.zero(1);
    -gamma(nu + 1.0)
        * 2f64.powf(nu - 1.0)
        * dist.params.horizon().powi(2)
        * z1.powf(-nu - 1.0)
        * j_nu(nu + 1.0, z1)
}

/// F'(z_1²/T²) = −(T²/z_1²) Π_{k≥2} (1 − z_1²/z_k²), with n factors and the
/// tail factor exp(−z_1² Σ_{k>n} z_k^{−2}).
pub fn fredholm_derivative_product(dist: &NormSqDistribution, n: usize) -> Result<f64> {
    let n = dist.check_count(n, "fredholm_derivative_product")?;
    let z1 = dist.zeros.zero(1);
    let z1sq = z1 * z1;
    let log_prod: f64 = (2..=n)
        .map(|k| (-z1sq / dist.zeros.zero(k).powi(2)).ln_1p())
        .sum();
    let tail = dist.tail_mass(n) / dist.params.horizon().powi(2);
    Ok(-dist.params.horizon().powi(2) / z1sq * (log_prod - z1sq * tail).exp())
}

/// Discretisation of the alternating survival series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurvivalSeriesConfig {
    /// Number of arcs [z_{2k−1}, z_{2k}] summed.
    pub num_terms: usize,
    /// Gauss–Legendre points used on each of the three pieces of an arc.
    pub quad_points_per_arc: usize,
    /// Half-width treated with u = z ± s², as a fraction of the arc length (< 1/2).
    pub singularity_split: f64,
}

impl Default for SurvivalSeriesConfig {
    fn default() -> Self {
        Self {
            num_terms: 50,
            quad_points_per_arc: 48,
            singularity_split: 0.25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesStatus {
    Converged,
    /// The last terms were not yet decreasing in magnitude.
    NotDecreasing,
    /// Terms decrease but the first omitted one exceeds [`SURVIVAL_ERROR_WARN`].
    LargeTruncationError,
}

/// First-omitted-term size above which a survival value is flagged.
pub const SURVIVAL_ERROR_WARN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivalValue {
    pub value: f64,
    /// Magnitude of the first omitted term.
    pub error_estimate: f64,
    pub status: SeriesStatus,
    /// Signed terms (−1)^{k+1} a_k including the prefactor.
    pub terms: Vec<f64>,
}

impl SurvivalValue {
    pub fn warning(&self) -> Option<String> {
        match self.status {
            SeriesStatus::Converged => None,
            SeriesStatus::NotDecreasing => Some(format!(
                "alternating terms not decreasing after {} terms; increase num_terms or x",
                self.terms.len()
            )),
            SeriesStatus::LargeTruncationError => Some(format!(
                "first omitted term {:.3e} after {} terms; increase num_terms",
                self.error_estimate,
                self.terms.len()
            )),
        }
    }
}

/// P(∫_0^T X² dt > x) by the alternating arc series
/// 2^{1−ν/2}/(π sqrt(Γ(ν+1))) Σ_k (−1)^{k+1} ∫_{z_{2k−1}}^{z_{2k}} u^{ν/2−1} e^{−xu²/(2T²)} / sqrt(|J_ν(u)|) du.
pub fn survival(
    dist: &NormSqDistribution,
    x: f64,
    cfg: &SurvivalSeriesConfig,
) -> Result<SurvivalValue> {
    if !(x > 0.0) {
        return Err(Error::domain("survival", format!("x = {x} must be > 0")));
    }
    if cfg.num_terms == 0 || cfg.quad_points_per_arc == 0 {
        return Err(Error::domain(
            "survival",
            "num_terms and quad_points_per_arc must be >= 1",
        ));
    }
    if !(cfg.singularity_split > 0.0 && cfg.singularity_split < 0.5) {
        return Err(Error::domain(
            "survival",
            "singularity_split must lie in (0, 1/2)",
        ));
    }
    let needed = 2 * cfg.num_terms + 2;
    let extended;
    let zeros = if dist.zeros.len() < needed {
        extended = dist.zeros.extended(needed)?;
        &extended
    } else {
        &dist.zeros
    };
    let nu = dist.params.nu();
    let big_t = dist.params.horizon();
    let rule = GaussLegendre::new(cfg.quad_points_per_arc);
    let prefactor = 2f64.powf(1.0 - 0.5 * nu) / (PI * gamma(nu + 1.0).sqrt());

    let arc = |k: usize| -> f64 {
        let a = zeros.zero(2 * k - 1);
        let b = zeros.zero(2 * k);
        arc_integral(nu, big_t, x, a, b, &rule, cfg.singularity_split)
    };

    let mut terms = Vec::with_capacity(cfg.num_terms);
    let mut value = 0.0;
    for k in 1..=cfg.num_terms {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * prefactor * arc(k);
        value += term;
        terms.push(term);
    }
    let next = prefactor * arc(cfg.num_terms + 1);
    let mags: Vec<f64> = terms.iter().map(|t| t.abs()).collect();
    let tail_decreasing = match mags.len() {
        1 => next <= mags[0],
        n => mags[n - 1] <= mags[n - 2] && next <= mags[n - 1],
    };
    let status = if !tail_decreasing {
        SeriesStatus::NotDecreasing
    } else if next > SURVIVAL_ERROR_WARN {
        SeriesStatus::LargeTruncationError
    } else {
        SeriesStatus::Converged
    };
    Ok(SurvivalValue {
        value,
        error_estimate: next,
        status,
        terms,
    })
}

/// ∫_a^b u^{ν/2−1} e^{−xu²/(2T²)} |J_ν(u)|^{−1/2} du between consecutive zeros.
fn arc_integral(
    nu: f64,
    big_t: f64,
    x: f64,
    a: f64,
    b: f64,
    rule: &GaussLegendre,
    split: f64,
) -> f64 {
    let smooth = |u: f64| u.powf(0.5 * nu - 1.0) * (-x * u * u / (2.0 * big_t * big_t)).exp();
    // slopes at the endpoint zeros, for the Taylor form of J_ν very close to them
    let slope_a = -j_nu(nu + 1.0, a);
    let slope_b = -j_nu(nu + 1.0, b);
    let j_near = |zero: f64, slope: f64, h: f64| -> f64 {
        if h.abs() < 1e-6 {
            // J(z+h) = J'(z) h (1 − h/(2z)) + O(h³), using J'' = −J'/z at a zero
            slope * h * (1.0 - 0.5 * h / zero)
        } else {
            j_nu(nu, zero + h)
        }
    };
    let delta = split * (b - a);
    let root = delta.sqrt();
    let mut total = 0.0;
    // u = a + s²
    for (s, w) in rule.mapped(0.0, root) {
        let h = s * s;
        total += w * 2.0 * s * smooth(a + h) / j_near(a, slope_a, h).abs().sqrt();
    }
    // u = b − s²
    for (s, w) in rule.mapped(0.0, root) {
        let h = s * s;
        total += w * 2.0 * s * smooth(b - h) / j_near(b, slope_b, -h).abs().sqrt();
    }
    for (u, w) in rule.mapped(a + delta, b - delta) {
        total += w * smooth(u) / j_nu(nu, u).abs().sqrt();
    }
    total
}

/// Partial and exact Rayleigh sums Σ z_k^{−2} = 1/(4(ν+1)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayleighSum {
    pub partial: f64,
    pub exact: f64,
}

pub fn rayleigh_sum(order: BesselOrder, n: usize) -> Result<RayleighSum> {
    if n == 0 {
        return Err(Error::domain("rayleigh_sum", "N must be at least 1"));
    }
    let zeros = bessel_zeros(order, n, DEFAULT_ZERO_TOL)?;
    Ok(rayleigh_from_zeros(&zeros, n))
}

pub fn rayleigh_from_zeros(zeros: &ZeroTable, n: usize) -> RayleighSum {
    let partial = zeros.zeros()[..n.min(zeros.len())]
        .iter()
        .map(|z| 1.0 / (z * z))
        .sum();
    RayleighSum {
        partial,
        exact: 0.25 / (zeros.order().nu() + 1.0),
    }
}

/// Σ_{k>N} z_k^{−2} from the leading McMahon term and a midpoint integral:
/// 1/(π² (N + ν/2 + 1/4)).
pub fn rayleigh_tail_estimate(nu: f64, n: usize) -> f64 {
    1.0 / (PI * PI * (n as f64 + 0.5 * nu + 0.25))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailConstantForm {
    /// Constant written with J_{ν+1}(z_1).
    BesselConstant,
    /// Constant written with Π_{k≥2} (1 − z_1²/z_k²)^{−1/2}.
    ProductConstant,
}

/// Factors used by the product form of the large-deviation constant.
pub const LARGE_DEVIATION_PRODUCT_FACTORS: usize = 10_000;

/// Leading large-x asymptote of P(∫X² > x) ~ C x^{−1/2} e^{−z_1² x/(2T²)}.
pub fn large_deviation_tail(
    dist: &NormSqDistribution,
    x: f64,
    form: TailConstantForm,
) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(
            "large_deviation_tail",
            format!("x = {x} must be > 0"),
        ));
    }
    let constant = large_deviation_constant(dist, form)?;
    let z1 = dist.zeros.zero(1);
    let big_t = dist.params.horizon();
    Ok(constant * x.powf(-0.5) * (-z1 * z1 * x / (2.0 * big_t * big_t)).exp())
}

/// The constant C of [`large_deviation_tail`].
pub fn large_deviation_constant(dist: &NormSqDistribution, form: TailConstantForm) -> Result<f64> {
    let nu = dist.params.nu();
    let big_t = dist.params.horizon();
    let z1 = dist.zeros.zero(1);
    match form {
        TailConstantForm::BesselConstant => {
            let j = j_nu(nu + 1.0, z1);
            Ok(
                2f64.powf(1.0 - 0.5 * nu) * big_t * z1.powf(0.5 * (nu - 3.0))
                    / (PI * gamma(nu + 1.0) * j).sqrt(),
            )
        }
        TailConstantForm::ProductConstant => {
            let n = dist.zeros.len().min(LARGE_DEVIATION_PRODUCT_FACTORS);
            let minus_f_prime = -fredholm_derivative_product(dist, n)?;
            // −F' = (T²/z_1²) Π_{k≥2}(1 − z_1²/z_k²)
            let prod = minus_f_prime * z1 * z1 / (big_t * big_t);
            Ok((2.0 / PI).sqrt() * big_t / z1 / prod.sqrt())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallDeviation {
    pub asymptote: f64,
    pub constant_known: bool,
}

/// c · ε^{1/4−ν/2} e^{−T²/(8ε)} for P(∫X² < ε) as ε → 0.
///
/// For α ≥ 1/2 the constant is c = 2^{3/2−ν} π^{−1/4} / (sqrt(Γ(1+ν)) T^{1/2−ν}).
/// For α < 1/2 it is unknown; the shape is returned with c = T^{ν−1/2}, i.e. an
/// unspecified constant normalised to 1 at T = 1 so that the T-scaling of the
/// distribution is preserved.
pub fn small_deviation(dist: &NormSqDistribution, eps: f64) -> Result<SmallDeviation> {
    if !(eps > 0.0) {
        return Err(Error::domain(
            "small_deviation",
            format!("eps = {eps} must be > 0"),
        ));
    }
    let nu = dist.params.nu();
    let big_t = dist.params.horizon();
    let constant_known = nu >= -crate::bridge::HALF_BRANCH_TOL;
    let c = if constant_known {
        small_deviation_constant(nu.max(0.0), big_t)
    } else {
        big_t.powf(nu - 0.5)
    };
    let asymptote = c * eps.powf(0.25 - 0.5 * nu) * (-big_t * big_t / (8.0 * eps)).exp();
    Ok(SmallDeviation {
        asymptote,
        constant_known,
    })
}

/// 2^{3/2−ν} π^{−1/4} / (sqrt(Γ(1+ν)) T^{1/2−ν}), valid for ν ≥ 0.
pub fn small_deviation_constant(nu: f64, big_t: f64) -> f64 {
    2f64.powf(1.5 - nu) * PI.powf(-0.25) / (gamma(1.0 + nu).sqrt() * big_t.powf(0.5 - nu))
}

/// Draws of Σ_{k≤n} λ_k ξ_k² + `shift`, chunked so that chunk i uses stream i of `seed`.
///
/// Passing the exact omitted mass as `shift` replaces the tail Σ_{k>n} λ_k ξ_k²
/// by its mean; the omitted variance is 2 Σ_{k>n} λ_k².
pub fn quadratic_form_samples(lambdas: &[f64], shift: f64, draws: usize, seed: u64) -> Vec<f64> {
    const CHUNK: usize = 4096;
    let chunks = draws.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = path_rng(seed, c as u64);
            let len = CHUNK.min(draws - c * CHUNK);
            (0..len)
                .map(|_| {
                    let mut s = shift;
                    for &l in lambdas {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        s += l * z * z;
                    }
                    s
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Monte Carlo proportion with its standard error.
pub fn proportion<F: Fn(f64) -> bool>(samples: &[f64], pred: F) -> Estimate {
    let n = samples.len() as f64;
    let hits = samples.iter().filter(|&&s| pred(s)).count() as f64;
    let p = hits / n;
    Estimate {
        value: p,
        error: (p * (1.0 - p) / n).sqrt(),
    }
}
