//! Karhunen–Loève eigensystems of the α-Wiener bridge.
//!
//! Unweighted expansion on [0, T] (Lebesgue measure):
//! λ_k = T²/z_k², e_k(t) = sqrt((2/T)(1 − t/T)) J_ν(z_k(1 − t/T)) / |J_{ν+1}(z_k)|,
//! with z_k the positive zeros of J_ν, ν = α − 1/2.
//!
//! Weighted expansion on [0, S], S < T, with dμ(s) = (T − s)^{−4α} ds:
//! κ_k = (τ(S)/((k − 1/2)π))², f_k(t) = sqrt(2/τ(S)) (T − t)^α sin((k − 1/2)π τ(t)/τ(S)).
//!
//! Eigenfunction signs follow the displayed formulas above. Other sources
//! may differ by a factor (−1)^k, so comparisons are made up to sign.

use std::f64::consts::PI;

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::bessel::{bessel_zeros, j_nu, BesselOrder, ZeroTable, DEFAULT_ZERO_TOL};
use crate::bridge::{
    covariance, inverse_time_change, path_rng, time_change, BridgeParams, PathSample,
    SimulationMethod, TimeGrid,
};
use crate::error::{Error, Result};
use crate::quad::{panel_nodes, GaussLegendre};

/// Relative variance left out by the default truncation.
pub const DEFAULT_VARIANCE_FRACTION: f64 = 1e-3;

const ENDPOINT_CUTOFF: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenKind {
    Unweighted,
    Weighted,
}

#[derive(Debug, Clone)]
enum Basis {
    Unweighted {
        zeros: ZeroTable,
        // |J_{ν+1}(z_k)|
        norms: Vec<f64>,
    },
    Weighted {
        horizon_s: f64,
        tau_s: f64,
    },
}

/// The first `count` eigenpairs of one of the two expansions.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    params: BridgeParams,
    count: usize,
    eigenvalues: Vec<f64>,
    basis: Basis,
}

/// Unweighted eigensystem with N eigenpairs.
pub fn eigen_unweighted(params: &BridgeParams, count: usize) -> Result<EigenSystem> {
    if count == 0 {
        return Err(Error::domain(
            "eigen_unweighted",
            "count must be at least 1",
        ));
    }
    let order = BesselOrder::new(params.nu())?;
    let zeros = bessel_zeros(order, count, DEFAULT_ZERO_TOL)?;
    Ok(EigenSystem::from_zeros(params, zeros, count))
}

/// Weighted eigensystem on [0, S] with N eigenpairs.
pub fn eigen_weighted(params: &BridgeParams, horizon_s: f64, count: usize) -> Result<EigenSystem> {
    if count == 0 {
        return Err(Error::domain("eigen_weighted", "count must be at least 1"));
    }
    if !(horizon_s > 0.0 && horizon_s < params.horizon()) {
        return Err(Error::domain(
            "eigen_weighted",
            format!("S = {horizon_s} must lie in (0, {})", params.horizon()),
        ));
    }
    let tau_s = time_change(params, horizon_s)?;
    let eigenvalues = (1..=count)
        .map(|k| (tau_s / ((k as f64 - 0.5) * PI)).powi(2))
        .collect();
    Ok(EigenSystem {
        params: *params,
        count,
        eigenvalues,
        basis: Basis::Weighted { horizon_s, tau_s },
    })
}

impl EigenSystem {
    /// Builds the unweighted system from an existing zero table (first `count` zeros).
    pub fn from_zeros(params: &BridgeParams, zeros: ZeroTable, count: usize) -> Self {
        let count = count.min(zeros.len());
        let nu = params.nu();
        let t2 = params.horizon().powi(2);
        let eigenvalues = zeros.zeros()[..count]
            .iter()
            .map(|z| t2 / (z * z))
            .collect();
        let norms = zeros.zeros()[..count]
            .iter()
            .map(|&z| j_nu(nu + 1.0, z).abs())
            .collect();
        EigenSystem {
            params: *params,
            count,
            eigenvalues,
            basis: Basis::Unweighted { zeros, norms },
        }
    }

    pub fn params(&self) -> &BridgeParams {
        &self.params
    }

    pub fn kind(&self) -> EigenKind {
        match self.basis {
            Basis::Unweighted { .. } => EigenKind::Unweighted,
            Basis::Weighted { .. } => EigenKind::Weighted,
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn horizon_s(&self) -> Option<f64> {
        match self.basis {
            Basis::Weighted { horizon_s, .. } => Some(horizon_s),
            Basis::Unweighted { .. } => None,
        }
    }

    pub fn zeros(&self) -> Option<&ZeroTable> {
        match &self.basis {
            Basis::Unweighted { zeros, .. } => Some(zeros),
            Basis::Weighted { .. } => None,
        }
    }

    /// Right end of the interval the eigenfunctions live on (T or S).
    pub fn domain_end(&self) -> f64 {
        self.horizon_s().unwrap_or(self.params.horizon())
    }

    /// λ_k (or κ_k), 1-based.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        self.eigenvalues[k - 1]
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenfunction(&self, k: usize) -> EigenfunctionHandle<'_> {
        assert!(
            k >= 1 && k <= self.count,
            "eigenfunction index {k} out of range"
        );
        EigenfunctionHandle { system: self, k }
    }

    fn eval(&self, k: usize, t: f64) -> f64 {
        let big_t = self.params.horizon();
        match &self.basis {
            Basis::Unweighted { zeros, norms } => {
                let r = 1.0 - t / big_t;
                // e_k(0) ∝ J_ν(z_k) = 0
                if r < ENDPOINT_CUTOFF || t == 0.0 {
                    return 0.0;
                }
                let z = zeros.zero(k);
                (2.0 / big_t * r).sqrt() * j_nu(self.params.nu(), z * r) / norms[k - 1]
            }
            Basis::Weighted { tau_s, .. } => {
                let tau = time_change(&self.params, t).unwrap_or(f64::NAN);
                let freq = (k as f64 - 0.5) * PI / tau_s;
                (2.0 / tau_s).sqrt() * (big_t - t).powf(self.params.alpha()) * (freq * tau).sin()
            }
        }
    }

    /// Σ_{k≤N} λ_k e_k(s) e_k(t).
    pub fn truncated_covariance(&self, s: f64, t: f64) -> f64 {
        (1..=self.count)
            .map(|k| self.eigenvalues[k - 1] * self.eval(k, s) * self.eval(k, t))
            .sum()
    }

    /// Rows sqrt(λ_k) e_k(t_j), k = 1..N.
    fn scaled_basis(&self, grid: &TimeGrid) -> Vec<Vec<f64>> {
        (1..=self.count)
            .map(|k| {
                let c = self.eigenvalues[k - 1].sqrt();
                grid.points().iter().map(|&t| c * self.eval(k, t)).collect()
            })
            .collect()
    }

    fn method(&self) -> SimulationMethod {
        match self.kind() {
            EigenKind::Unweighted => SimulationMethod::KlTruncated,
            EigenKind::Weighted => SimulationMethod::WeightedKlTruncated,
        }
    }
}

/// A single eigenfunction, evaluable on the system's interval.
#[derive(Debug, Clone, Copy)]
pub struct EigenfunctionHandle<'a> {
    system: &'a EigenSystem,
    k: usize,
}

impl EigenfunctionHandle<'_> {
    pub fn index(&self) -> usize {
        self.k
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.system.eval(self.k, t)
    }
}

/// Σ_{k>N} λ_k = T² (1/(4(ν+1)) − Σ_{k≤N} z_k^{−2}).
pub fn eigenvalue_tail_mass(params: &BridgeParams, zeros: &ZeroTable, n: usize) -> f64 {
    let partial: f64 = zeros.zeros()[..n.min(zeros.len())]
        .iter()
        .map(|z| 1.0 / (z * z))
        .sum();
    params.horizon().powi(2) * (0.25 / (params.nu() + 1.0) - partial).max(0.0)
}

/// Smallest N whose omitted eigenvalue mass is at most `fraction` of the total.
pub fn default_truncation(params: &BridgeParams, fraction: f64) -> Result<usize> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::domain(
            "default_truncation",
            "fraction must lie in (0, 1)",
        ));
    }
    let order = BesselOrder::new(params.nu())?;
    let total = 0.25 / (params.nu() + 1.0);
    let mut table = bessel_zeros(order, 64, DEFAULT_ZERO_TOL)?;
    let mut partial = 0.0;
    let mut k = 0;
    loop {
        if k == table.len() {
            table = table.extended(2 * table.len())?;
        }
        let z = table.zeros()[k];
        partial += 1.0 / (z * z);
        k += 1;
        if total - partial <= fraction * total {
            return Ok(k);
        }
    }
}

fn check_grid(system: &EigenSystem, grid: &TimeGrid) -> Result<()> {
    let end = system.domain_end();
    if grid.last() > end {
        return Err(Error::domain(
            "kl_sample",
            format!("grid ends at {} beyond {end}", grid.last()),
        ));
    }
    Ok(())
}

fn sample_with_basis(
    system: &EigenSystem,
    grid: &TimeGrid,
    basis: &[Vec<f64>],
    seed: u64,
    path_index: u64,
) -> PathSample {
    let mut rng = path_rng(seed, path_index);
    let mut values = vec![0.0; grid.len()];
    for row in basis {
        let xi: f64 = StandardNormal.sample(&mut rng);
        for (v, b) in values.iter_mut().zip(row) {
            *v += xi * b;
        }
    }
    PathSample {
        grid: grid.clone(),
        values,
        method: system.method(),
        seed,
        path_index,
        truncation: Some(system.count),
        extended_to_horizon: false,
    }
}

/// Truncated KL series Σ_{k≤N} sqrt(λ_k) ξ_k e_k(t) on `grid`.
pub fn kl_sample(system: &EigenSystem, grid: &TimeGrid, seed: u64) -> Result<PathSample> {
    check_grid(system, grid)?;
    let basis = system.scaled_basis(grid);
    Ok(sample_with_basis(system, grid, &basis, seed, 0))
}

/// `paths` KL samples; path i uses stream i of `seed`.
pub fn kl_sample_batch(
    system: &EigenSystem,
    grid: &TimeGrid,
    seed: u64,
    paths: usize,
) -> Result<Vec<PathSample>> {
    check_grid(system, grid)?;
    let basis = system.scaled_basis(grid);
    Ok((0..paths as u64)
        .into_par_iter()
        .map(|i| sample_with_basis(system, grid, &basis, seed, i))
        .collect())
}

/// Applies `f` to the sampled values of each path without keeping the paths.
pub fn kl_sample_map<T, F>(
    system: &EigenSystem,
    grid: &TimeGrid,
    seed: u64,
    paths: usize,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[f64]) -> T + Sync,
{
    check_grid(system, grid)?;
    let basis = system.scaled_basis(grid);
    Ok((0..paths as u64)
        .into_par_iter()
        .map(|i| f(&sample_with_basis(system, grid, &basis, seed, i).values))
        .collect())
}

/// Maximum deviations found by [`scaling_law_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingReport {
    pub covariance: f64,
    pub eigenvalue: f64,
    pub eigenfunction: f64,
}

impl ScalingReport {
    pub fn max(&self) -> f64 {
        self.covariance.max(self.eigenvalue).max(self.eigenfunction)
    }
}

/// Checks R^{(T)}(s,t) = T R^{(1)}(s/T,t/T), λ^{(T)} = T² λ^{(1)} and
/// e^{(T)}(t) = e^{(1)}(t/T)/sqrt(T) on a 21-point grid.
pub fn scaling_law_check(params: &BridgeParams, count: usize) -> Result<ScalingReport> {
    let big_t = params.horizon();
    let unit = params.with_horizon(1.0)?;
    let sys_t = eigen_unweighted(params, count)?;
    let sys_1 = eigen_unweighted(&unit, count)?;
    let ts: Vec<f64> = (0..=20).map(|i| big_t * i as f64 / 20.0).collect();
    let mut report = ScalingReport {
        covariance: 0.0,
        eigenvalue: 0.0,
        eigenfunction: 0.0,
    };
    for &s in &ts {
        for &t in &ts {
            let lhs = covariance(params, s, t)?;
            let rhs = big_t * covariance(&unit, s / big_t, t / big_t)?;
            report.covariance = report.covariance.max((lhs - rhs).abs());
        }
    }
    for k in 1..=count {
        let rel =
            (sys_t.eigenvalue(k) - big_t * big_t * sys_1.eigenvalue(k)).abs() / sys_t.eigenvalue(k);
        report.eigenvalue = report.eigenvalue.max(rel);
        for &t in &ts {
            let lhs = sys_t.eval(k, t);
            let rhs = sys_1.eval(k, t / big_t) / big_t.sqrt();
            report.eigenfunction = report.eigenfunction.max((lhs - rhs).abs());
        }
    }
    Ok(report)
}

/// Sup-norm distances to the Wiener-process KL terms for decreasing α.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WienerLimitReport {
    pub alphas: Vec<f64>,
    pub unweighted: Vec<f64>,
    pub weighted: Vec<f64>,
    pub monotone: bool,
}

/// Compares sqrt(λ_k) e_k with the Wiener term sqrt(2T) sin((k−1/2)πt/T)/((k−1/2)π)
/// and sqrt(κ_k) f_k with sqrt(2S) sin((k−1/2)πt/S)/((k−1/2)π), over t ∈ [0, S].
pub fn wiener_limit_check(horizon: f64, k: usize, horizon_s: f64) -> Result<WienerLimitReport> {
    if k == 0 || k > 20 {
        return Err(Error::domain("wiener_limit_check", "k must be in 1..=20"));
    }
    let alphas = vec![0.1, 0.01, 0.001];
    let ts: Vec<f64> = (0..=400).map(|i| horizon_s * i as f64 / 400.0).collect();
    let freq = (k as f64 - 0.5) * PI;
    let mut unweighted = Vec::new();
    let mut weighted = Vec::new();
    for &alpha in &alphas {
        let params = BridgeParams::new(alpha, horizon)?;
        let sys = eigen_unweighted(&params, k)?;
        let wsys = eigen_weighted(&params, horizon_s, k)?;
        let c = sys.eigenvalue(k).sqrt();
        let wc = wsys.eigenvalue(k).sqrt();
        let mut same = 0.0_f64;
        let mut flipped = 0.0_f64;
        let mut wsame = 0.0_f64;
        let mut wflipped = 0.0_f64;
        for &t in &ts {
            let target = (2.0 * horizon).sqrt() * (freq * t / horizon).sin() / freq;
            let v = c * sys.eval(k, t);
            same = same.max((v - target).abs());
            flipped = flipped.max((v + target).abs());
            let wtarget = (2.0 * horizon_s).sqrt() * (freq * t / horizon_s).sin() / freq;
            let w = wc * wsys.eval(k, t);
            wsame = wsame.max((w - wtarget).abs());
            wflipped = wflipped.max((w + wtarget).abs());
        }
        unweighted.push(same.min(flipped));
        weighted.push(wsame.min(wflipped));
    }
    let monotone =
        unweighted.windows(2).all(|w| w[1] < w[0]) && weighted.windows(2).all(|w| w[1] < w[0]);
    Ok(WienerLimitReport {
        alphas,
        unweighted,
        weighted,
        monotone,
    })
}

/// Default composite rule: 8 panels of 256 Gauss–Legendre points.
pub fn default_rule() -> (GaussLegendre, usize) {
    (GaussLegendre::new(256), 8)
}

/// Gram matrix of the first `n` eigenfunctions in the system's own inner product.
///
/// Unweighted: ∫_0^T e_k e_l dt with 1 − t/T = w⁴. Weighted: ∫_0^S f_k f_l dμ
/// after the change of variable u = τ(s), dμ = (T − s)^{−2α} du.
pub fn gram_matrix(system: &EigenSystem, n: usize) -> Result<Vec<Vec<f64>>> {
    let n = n.min(system.count);
    let (rule, panels) = default_rule();
    let big_t = system.params.horizon();
    let alpha = system.params.alpha();
    let mut nodes: Vec<(f64, f64)> = Vec::new(); // (t, weight in dt or dμ)
    match system.basis {
        Basis::Unweighted { .. } => {
            for (w, wt) in panel_nodes(&rule, 0.0, 1.0, panels) {
                let w3 = w * w * w;
                nodes.push((big_t * (1.0 - w3 * w), wt * 4.0 * big_t * w3));
            }
        }
        Basis::Weighted { tau_s, .. } => {
            for (u, wt) in panel_nodes(&rule, 0.0, tau_s, panels) {
                let s = inverse_time_change(&system.params, u)?;
                nodes.push((s, wt * (big_t - s).powf(-2.0 * alpha)));
            }
        }
    }
    let values: Vec<Vec<f64>> = (1..=n)
        .map(|k| nodes.iter().map(|&(t, _)| system.eval(k, t)).collect())
        .collect();
    let mut gram = vec![vec![0.0; n]; n];
    for k in 0..n {
        for l in k..n {
            let g: f64 = nodes
                .iter()
                .enumerate()
                .map(|(i, &(_, w))| w * values[k][i] * values[l][i])
                .sum();
            gram[k][l] = g;
            gram[l][k] = g;
        }
    }
    Ok(gram)
}

/// sup_t |∫_0^T R(t,s) e_k(s) ds − λ_k e_k(t)| over `t_points` equally spaced t
/// and k ≤ `k_max` (unweighted systems only).
pub fn eigen_residual(system: &EigenSystem, k_max: usize, t_points: usize) -> Result<f64> {
    if system.kind() != EigenKind::Unweighted {
        return Err(Error::domain("eigen_residual", "unweighted systems only"));
    }
    let k_max = k_max.min(system.count);
    let params = system.params;
    let big_t = params.horizon();
    let alpha = params.alpha();
    let (rule, panels) = default_rule();
    let t_points = t_points.max(2);
    let mut worst = 0.0_f64;
    for i in 0..t_points {
        // stay off t = T where both sides vanish identically
        let t = big_t * i as f64 / t_points as f64;
        let w_t = (1.0 - t / big_t).powf(0.25);
        let tau_t = time_change(&params, t)?;
        let lead = (big_t - t).powf(alpha);
        let mut nodes: Vec<(f64, f64)> = Vec::new(); // (s, R(t,s) ds)
                                                     // s ∈ [t, T] ↔ w ∈ [0, w_t];  s ∈ [0, t] ↔ w ∈ [w_t, 1]
        for (lo, hi) in [(0.0, w_t), (w_t, 1.0)] {
            if hi <= lo {
                continue;
            }
            for (w, wt) in panel_nodes(&rule, lo, hi, panels) {
                let w3 = w * w * w;
                let s = big_t * (1.0 - w3 * w);
                let ds = wt * 4.0 * big_t * w3;
                let tau_min = if s < t {
                    time_change(&params, s)?
                } else {
                    tau_t
                };
                let r = lead * (big_t - s).powf(alpha) * tau_min;
                nodes.push((s, r * ds));
            }
        }
        for k in 1..=k_max {
            let integral: f64 = nodes.iter().map(|&(s, rw)| rw * system.eval(k, s)).sum();
            let resid = (integral - system.eigenvalue(k) * system.eval(k, t)).abs();
            worst = worst.max(resid);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, t: f64) -> BridgeParams {
        BridgeParams::new(a, t).unwrap()
    }

    #[test]
    fn wiener_bridge_eigenpairs() {
        let sys = eigen_unweighted(&p(1.0, 1.0), 3).unwrap();
        for k in 1..=3 {
            let kpi = k as f64 * PI;
            assert!((sys.eigenvalue(k) - 1.0 / (kpi * kpi)).abs() < 1e-15);
            let e = sys.eigenfunction(k);
            for &t in &[0.1, 0.25, 0.5, 0.77] {
                let expected = 2f64.sqrt() * (kpi * t).sin();
                assert!(
                    (e.eval(t).abs() - expected.abs()).abs() < 1e-12,
                    "k={k} t={t}"
                );
            }
            assert!(e.eval(0.0).abs() < 1e-13);
            assert_eq!(e.eval(1.0), 0.0);
        }
    }

    #[test]
    fn half_alpha_first_eigenvalue() {
        let sys = eigen_unweighted(&p(0.5, 1.0), 1).unwrap();
        let z = 2.404_825_557_695_773_f64;
        assert!((sys.eigenvalue(1) - 1.0 / (z * z)).abs() < 1e-14);
        assert!((sys.eigenvalue(1) - 0.172_915_07).abs() < 1e-8);
    }

    #[test]
    fn weighted_values() {
        let sys = eigen_weighted(&p(0.5, 1.0), 0.5, 3).unwrap();
        let expected = (2f64.ln() / (0.5 * PI)).powi(2);
        assert!((sys.eigenvalue(1) - expected).abs() < 1e-15);
        assert!((sys.eigenvalue(1) - 0.194_720_27).abs() < 1e-8);
        for k in 1..=3 {
            assert_eq!(sys.eigenfunction(k).eval(0.0), 0.0);
        }
        assert!(eigen_weighted(&p(0.5, 1.0), 1.0, 3).is_err());
        assert!(eigen_weighted(&p(0.5, 1.0), 0.0, 3).is_err());
    }

    #[test]
    fn weighted_alpha_one_matches_closed_form() {
        // f_k(t) = sqrt(2T(T−S)/S) (T−t) sin((k−1/2)π t(T−S)/(S(T−t)))
        let (big_t, s) = (1.0, 0.5);
        let sys = eigen_weighted(&p(1.0, big_t), s, 4).unwrap();
        for k in 1..=4 {
            for &t in &[0.05, 0.2, 0.37, 0.5] {
                let arg = (k as f64 - 0.5) * PI * t * (big_t - s) / (s * (big_t - t));
                let expected = (2.0 * big_t * (big_t - s) / s).sqrt() * (big_t - t) * arg.sin();
                assert!((sys.eigenfunction(k).eval(t) - expected).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn orthonormality_small() {
        for &a in &[0.3, 1.0] {
            let sys = eigen_unweighted(&p(a, 1.5), 8).unwrap();
            let g = gram_matrix(&sys, 8).unwrap();
            for (i, row) in g.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let target = if i == j { 1.0 } else { 0.0 };
                    assert!((v - target).abs() < 1e-8, "a={a} ({i},{j}) {v}");
                }
            }
            let w = eigen_weighted(&p(a, 1.5), 1.0, 8).unwrap();
            let g = gram_matrix(&w, 8).unwrap();
            for (i, row) in g.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let target = if i == j { 1.0 } else { 0.0 };
                    assert!((v - target).abs() < 1e-8, "weighted a={a} ({i},{j}) {v}");
                }
            }
        }
    }

    #[test]
    fn residual_small() {
        let sys = eigen_unweighted(&p(0.7, 1.0), 5).unwrap();
        let r = eigen_residual(&sys, 5, 11).unwrap();
        assert!(r <= 1e-6 * sys.eigenvalue(1), "residual {r}");
    }

    #[test]
    fn tail_mass_positive_and_decaying() {
        let pr = p(1.3, 2.0);
        let order = BesselOrder::new(pr.nu()).unwrap();
        let zeros = bessel_zeros(order, 800, 1e-13).unwrap();
        let mut prev = f64::INFINITY;
        for n in [25, 50, 100, 200, 400, 800] {
            let tail = eigenvalue_tail_mass(&pr, &zeros, n);
            assert!(tail > 0.0 && tail < prev);
            // ~ T²/(π² n)
            let scaled = tail * n as f64;
            assert!(scaled > 0.2 && scaled < 1.0, "n={n} n·tail={scaled}");
            prev = tail;
        }
    }

    #[test]
    fn truncation_rule() {
        let n = default_truncation(&p(1.0, 1.0), 1e-3).unwrap();
        // tail ≈ 1/(π² N) against total 1/6
        assert!((500..700).contains(&n), "n={n}");
        let order = BesselOrder::new(0.5).unwrap();
        let zeros = bessel_zeros(order, n, 1e-13).unwrap();
        let pr = p(1.0, 1.0);
        assert!(eigenvalue_tail_mass(&pr, &zeros, n) <= 1e-3 / 6.0);
        assert!(eigenvalue_tail_mass(&pr, &zeros, n - 1) > 1e-3 / 6.0);
    }

    #[test]
    fn kl_path_vanishes_at_t() {
        let sys = eigen_unweighted(&p(1.0, 1.0), 200).unwrap();
        let grid = TimeGrid::uniform(1.0, 11).unwrap();
        let s = kl_sample(&sys, &grid, 3).unwrap();
        assert_eq!(*s.values.last().unwrap(), 0.0);
        assert!(s.values[0].abs() < 1e-12);
        assert_eq!(s.truncation, Some(200));
        let bad = TimeGrid::uniform(1.2, 11).unwrap();
        assert!(kl_sample(&sys, &bad, 3).is_err());
    }

    #[test]
    fn batch_matches_single_path() {
        let sys = eigen_unweighted(&p(0.8, 1.0), 30).unwrap();
        let grid = TimeGrid::uniform(1.0, 9).unwrap();
        let batch = kl_sample_batch(&sys, &grid, 5, 3).unwrap();
        let single = kl_sample(&sys, &grid, 5).unwrap();
        assert_eq!(batch[0].values, single.values);
        assert_ne!(batch[1].values, single.values);
    }

    #[test]
    fn scaling_law() {
        for &(a, t, n) in &[(1.0, 2.0, 5), (0.7, 3.5, 10), (0.5, 2.0, 10)] {
            let r = scaling_law_check(&p(a, t), n).unwrap();
            assert!(r.max() <= 1e-10, "{r:?}");
        }
    }

    #[test]
    fn wiener_limit() {
        let r = wiener_limit_check(1.0, 1, 0.9).unwrap();
        assert!(r.monotone, "{r:?}");
        assert!(r.unweighted[2] < 0.05 && r.weighted[2] < 0.05, "{r:?}");
        // at t = 0 both sides vanish
        for &a in &[0.1, 0.01, 0.001] {
            let sys = eigen_unweighted(&p(a, 1.0), 1).unwrap();
            assert!(sys.eigenfunction(1).eval(0.0).abs() < 1e-12);
        }
    }
}
