//! The α-Wiener bridge: covariance, deterministic time change and two
//! simulators that do not depend on the Karhunen–Loève machinery.
//!
//! Randomness comes from ChaCha12 seeded with a 64-bit seed. Path `i` of a
//! batch uses stream `i` of that generator (see [`path_rng`]), so every path is
//! reproducible on its own and batches give identical output regardless of
//! how they are split across threads. Gaussian variates use the ziggurat
//! sampler of `rand_distr::StandardNormal`.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// |α − 1/2| below this selects the logarithmic branch of the covariance.
pub const HALF_BRANCH_TOL: f64 = 1e-9;

/// Default last grid point T(1 − 2^{-12}) for the SDE-based simulators.
pub const DEFAULT_END_FRACTION: f64 = 1.0 - 1.0 / 4096.0;

/// (α, T) with the derived Bessel order ν = α − 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BridgeParams {
    alpha: f64,
    #[serde(rename = "T")]
    horizon: f64,
}

impl BridgeParams {
    pub fn new(alpha: f64, horizon: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain(
                "BridgeParams::new",
                format!("alpha {alpha} must be > 0"),
            ));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::domain(
                "BridgeParams::new",
                format!("T {horizon} must be > 0"),
            ));
        }
        Ok(Self { alpha, horizon })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Terminal time T.
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn nu(&self) -> f64 {
        self.alpha - 0.5
    }

    pub fn is_half(&self) -> bool {
        (self.alpha - 0.5).abs() < HALF_BRANCH_TOL
    }

    /// Same α on a different horizon.
    pub fn with_horizon(&self, horizon: f64) -> Result<Self> {
        Self::new(self.alpha, horizon)
    }
}

/// expm1(εL)/ε with the ε → 0 limit L.
fn expm1_over(eps: f64, l: f64) -> f64 {
    if eps == 0.0 {
        l
    } else {
        (eps * l).exp_m1() / eps
    }
}

/// Covariance R(s, t) of the bridge on [0, T]², zero on the edges s = T, t = T.
pub fn covariance(params: &BridgeParams, s: f64, t: f64) -> Result<f64> {
    let big_t = params.horizon;
    for v in [s, t] {
        if !(0.0..=big_t).contains(&v) {
            return Err(Error::domain(
                "covariance",
                format!("time {v} outside [0, {big_t}]"),
            ));
        }
    }
    if s == big_t || t == big_t {
        return Ok(0.0);
    }
    let m = s.min(t);
    let a = params.alpha;
    let log_ratio = (big_t / (big_t - m)).ln();
    let prefactor = ((big_t - s) * (big_t - t)).powf(a);
    if params.is_half() {
        return Ok(prefactor * log_ratio);
    }
    // (T^{1-2α} − (T−m)^{1-2α}) / (1−2α) = (T−m)^{1-2α} expm1((1−2α)L)/(1−2α)
    let eps = 1.0 - 2.0 * a;
    Ok(prefactor * (big_t - m).powf(eps) * expm1_over(eps, log_ratio))
}

/// τ(t) = ∫_0^t (T−s)^{−2α} ds.
pub fn time_change(params: &BridgeParams, t: f64) -> Result<f64> {
    let big_t = params.horizon;
    if !(0.0..big_t).contains(&t) {
        return Err(Error::domain(
            "time_change",
            format!("time {t} outside [0, {big_t})"),
        ));
    }
    let log_ratio = (big_t / (big_t - t)).ln();
    if params.is_half() {
        return Ok(log_ratio);
    }
    // ((T−t)^{1−2α} − T^{1−2α})/(2α−1) = T^{1−2α} expm1((2α−1)L)/(2α−1)
    let eps = 2.0 * params.alpha - 1.0;
    Ok(big_t.powf(-eps) * expm1_over(eps, log_ratio))
}

/// Inverse of [`time_change`] on [0, ∞) → [0, T).
pub fn inverse_time_change(params: &BridgeParams, u: f64) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(Error::domain(
            "inverse_time_change",
            format!("u {u} must be >= 0"),
        ));
    }
    let big_t = params.horizon;
    // T/(T−t) = exp(L) with L solving T^{1−2α} expm1(εL)/ε = u
    let log_ratio = if params.is_half() {
        u
    } else {
        let eps = 2.0 * params.alpha - 1.0;
        let y = eps * u * big_t.powf(eps);
        if y <= -1.0 {
            return Err(Error::domain(
                "inverse_time_change",
                format!("u {u} beyond the range of the time change"),
            ));
        }
        y.ln_1p() / eps
    };
    Ok(big_t * -(-log_ratio).exp_m1())
}

/// Ascending time points starting at 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid {
    points: Vec<f64>,
}

impl TimeGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.first() != Some(&0.0) {
            return Err(Error::domain("TimeGrid::new", "grid must start at 0"));
        }
        if !points.windows(2).all(|w| w[1] > w[0]) || points.iter().any(|p| !p.is_finite()) {
            return Err(Error::domain(
                "TimeGrid::new",
                "grid must be strictly increasing",
            ));
        }
        Ok(Self { points })
    }

    /// `n` equally spaced points on [0, end] (just {0} when n = 1).
    pub fn uniform(end: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain(
                "TimeGrid::uniform",
                "need at least one point",
            ));
        }
        if n == 1 {
            return Self::new(vec![0.0]);
        }
        let h = end / (n - 1) as f64;
        let mut pts: Vec<f64> = (0..n).map(|i| h * i as f64).collect();
        pts[n - 1] = end;
        Self::new(pts)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> f64 {
        *self.points.last().unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimulationMethod {
    EulerSde,
    SpacetimeWiener,
    KlTruncated,
    WeightedKlTruncated,
}

impl SimulationMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SimulationMethod::EulerSde => "euler_sde",
            SimulationMethod::SpacetimeWiener => "spacetime_wiener",
            SimulationMethod::KlTruncated => "kl_truncated",
            SimulationMethod::WeightedKlTruncated => "weighted_kl_truncated",
        }
    }
}

/// A discretised trajectory together with how it was produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSample {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
    pub method: SimulationMethod,
    pub seed: u64,
    pub path_index: u64,
    pub truncation: Option<usize>,
    /// Set when the value 0 at t = T was appended by [`PathSample::extend_to_horizon`].
    pub extended_to_horizon: bool,
}

impl PathSample {
    /// Appends X_T = 0 when the grid stops short of T.
    pub fn extend_to_horizon(&mut self, horizon: f64) -> Result<()> {
        if self.grid.last() >= horizon {
            return Ok(());
        }
        let mut pts = self.grid.points.clone();
        pts.push(horizon);
        self.grid = TimeGrid::new(pts)?;
        self.values.push(0.0);
        self.extended_to_horizon = true;
        Ok(())
    }
}

/// Generator for path `path_index` of the batch identified by `seed`.
///
/// The split function is (seed, path_index) ↦ ChaCha12(seed) on stream
/// `path_index`.
pub fn path_rng(seed: u64, path_index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(path_index);
    rng
}

fn check_open_grid(params: &BridgeParams, grid: &TimeGrid, op: &'static str) -> Result<()> {
    if grid.last() >= params.horizon {
        return Err(Error::domain(
            op,
            format!(
                "grid must end before T = {} (got {})",
                params.horizon,
                grid.last()
            ),
        ));
    }
    Ok(())
}

/// Euler–Maruyama path of dX = −α X/(T−t) dt + dB, X_0 = 0.
pub fn simulate_euler(params: &BridgeParams, grid: &TimeGrid, seed: u64) -> Result<PathSample> {
    simulate_euler_path(params, grid, seed, 0)
}

pub fn simulate_euler_path(
    params: &BridgeParams,
    grid: &TimeGrid,
    seed: u64,
    path_index: u64,
) -> Result<PathSample> {
    check_open_grid(params, grid, "simulate_euler")?;
    let mut rng = path_rng(seed, path_index);
    let pts = grid.points();
    let mut values = Vec::with_capacity(pts.len());
    let mut x = 0.0;
    values.push(x);
    for w in pts.windows(2) {
        let dt = w[1] - w[0];
        let z: f64 = StandardNormal.sample(&mut rng);
        x += -params.alpha * x / (params.horizon - w[0]) * dt + dt.sqrt() * z;
        values.push(x);
    }
    Ok(PathSample {
        grid: grid.clone(),
        values,
        method: SimulationMethod::EulerSde,
        seed,
        path_index,
        truncation: None,
        extended_to_horizon: false,
    })
}

/// Exact-in-distribution path X_t = (T−t)^α W_{τ(t)}.
pub fn simulate_spacetime(params: &BridgeParams, grid: &TimeGrid, seed: u64) -> Result<PathSample> {
    simulate_spacetime_path(params, grid, seed, 0)
}

pub fn simulate_spacetime_path(
    params: &BridgeParams,
    grid: &TimeGrid,
    seed: u64,
    path_index: u64,
) -> Result<PathSample> {
    check_open_grid(params, grid, "simulate_spacetime")?;
    let mut rng = path_rng(seed, path_index);
    let taus = grid
        .points()
        .iter()
        .map(|&t| time_change(params, t))
        .collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(taus.len());
    let mut w = 0.0;
    values.push(0.0);
    for (i, pair) in taus.windows(2).enumerate() {
        let z: f64 = StandardNormal.sample(&mut rng);
        w += (pair[1] - pair[0]).sqrt() * z;
        let t = grid.points()[i + 1];
        values.push((params.horizon - t).powf(params.alpha) * w);
    }
    Ok(PathSample {
        grid: grid.clone(),
        values,
        method: SimulationMethod::SpacetimeWiener,
        seed,
        path_index,
        truncation: None,
        extended_to_horizon: false,
    })
}

/// `paths` independent samples, path i on stream i of `seed`.
pub fn simulate_batch<F>(paths: usize, seed: u64, simulate_one: F) -> Result<Vec<PathSample>>
where
    F: Fn(u64, u64) -> Result<PathSample> + Sync,
{
    (0..paths as u64)
        .into_par_iter()
        .map(|i| simulate_one(seed, i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(a: f64, t: f64) -> BridgeParams {
        BridgeParams::new(a, t).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(BridgeParams::new(0.0, 1.0).is_err());
        assert!(BridgeParams::new(1.0, -1.0).is_err());
        assert!(covariance(&p(1.0, 1.0), 1.5, 0.2).is_err());
        assert!(time_change(&p(1.0, 1.0), 1.0).is_err());
    }

    #[test]
    fn wiener_bridge_variance() {
        let r = covariance(&p(1.0, 1.0), 0.5, 0.5).unwrap();
        assert!((r - 0.25).abs() < 1e-15);
        for &(s, t) in &[(0.2, 0.7), (0.6, 0.3), (0.9, 0.95)] {
            let r = covariance(&p(1.0, 1.0), s, t).unwrap();
            let classical = f64::min(s, t) - s * t;
            assert!((r - classical).abs() < 1e-15);
        }
    }

    #[test]
    fn log_branch_value() {
        let r = covariance(&p(0.5, 1.0), 0.5, 0.5).unwrap();
        assert!((r - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert!((r - 0.34657).abs() < 1e-5);
    }

    #[test]
    fn vanishes_at_edges() {
        for &a in &[0.2, 0.5, 1.0, 3.0] {
            assert_eq!(covariance(&p(a, 2.0), 0.0, 1.3).unwrap(), 0.0);
            assert_eq!(covariance(&p(a, 2.0), 1.3, 2.0).unwrap(), 0.0);
            assert_eq!(covariance(&p(a, 2.0), 2.0, 2.0).unwrap(), 0.0);
            assert_eq!(time_change(&p(a, 2.0), 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn time_change_values() {
        assert!((time_change(&p(0.5, 1.0), 0.5).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!((time_change(&p(1.0, 1.0), 0.5).unwrap() - 1.0).abs() < 1e-15);
        // τ(t) = t/(T(T−t)) for α = 1
        let tau = time_change(&p(1.0, 3.0), 2.0).unwrap();
        assert!((tau - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn inverse_time_change_round_trip() {
        for &a in &[0.1, 0.5, 0.75, 2.0] {
            let pr = p(a, 1.7);
            for &t in &[0.0, 0.3, 1.0, 1.69] {
                let u = time_change(&pr, t).unwrap();
                let back = inverse_time_change(&pr, u).unwrap();
                assert!((back - t).abs() < 1e-12, "a={a} t={t} back={back}");
            }
        }
    }

    #[test]
    fn covariance_matches_time_change_form() {
        for &a in &[0.1, 0.3, 0.5, 0.5 + 1e-7, 1.0, 2.5] {
            let pr = p(a, 1.3);
            for i in 0..20 {
                for j in 0..20 {
                    let s = 1.3 * i as f64 / 20.0;
                    let t = 1.3 * j as f64 / 20.0;
                    let r = covariance(&pr, s, t).unwrap();
                    let via_tau =
                        ((1.3 - s) * (1.3 - t)).powf(a) * time_change(&pr, s.min(t)).unwrap();
                    assert!((r - via_tau).abs() <= 1e-12, "a={a} s={s} t={t}");
                }
            }
        }
    }

    #[test]
    fn continuity_at_half() {
        for &(s, t) in &[(0.1, 0.5), (0.5, 0.5), (0.8, 0.9), (0.99, 0.3)] {
            let r0 = covariance(&p(0.5, 1.0), s, t).unwrap();
            for &d in &[-1e-6, 1e-6] {
                let r = covariance(&p(0.5 + d, 1.0), s, t).unwrap();
                assert!((r - r0).abs() <= 1e-4);
            }
        }
    }

    #[test]
    fn single_point_grid_gives_zero() {
        let g = TimeGrid::uniform(0.0, 1).unwrap();
        let s = simulate_spacetime(&p(0.7, 2.0), &g, 9).unwrap();
        assert_eq!(s.values, vec![0.0]);
    }

    #[test]
    fn simulators_reject_grids_reaching_t() {
        let g = TimeGrid::uniform(1.0, 5).unwrap();
        assert!(simulate_euler(&p(1.0, 1.0), &g, 1).is_err());
        assert!(simulate_spacetime(&p(1.0, 1.0), &g, 1).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let g = TimeGrid::uniform(0.9, 33).unwrap();
        let a = simulate_euler(&p(1.0, 1.0), &g, 42).unwrap();
        let b = simulate_euler(&p(1.0, 1.0), &g, 42).unwrap();
        assert_eq!(a.values, b.values);
        let c = simulate_euler(&p(1.0, 1.0), &g, 43).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn extension_appends_zero() {
        let g = TimeGrid::uniform(0.5, 3).unwrap();
        let mut s = simulate_spacetime(&p(1.0, 1.0), &g, 1).unwrap();
        s.extend_to_horizon(1.0).unwrap();
        assert_eq!(s.grid.last(), 1.0);
        assert_eq!(*s.values.last().unwrap(), 0.0);
        assert!(s.extended_to_horizon);
    }

    #[test]
    fn spacetime_variance_unbiased() {
        let pr = p(0.5, 1.0);
        let g = TimeGrid::new(vec![0.0, 0.5]).unwrap();
        let n = 40_000;
        let paths = simulate_batch(n, 11, |s, i| simulate_spacetime_path(&pr, &g, s, i)).unwrap();
        let xs: Vec<f64> = paths.iter().map(|p| p.values[1]).collect();
        let m2 = xs.iter().map(|x| x * x).sum::<f64>() / n as f64;
        let se = (xs.iter().map(|x| (x * x - m2).powi(2)).sum::<f64>() / n as f64).sqrt()
            / (n as f64).sqrt();
        let exact = covariance(&pr, 0.5, 0.5).unwrap();
        assert!(
            (m2 - exact).abs() < 3.0 * se,
            "m2={m2} exact={exact} se={se}"
        );
    }

    proptest! {
        #[test]
        fn covariance_symmetric_and_psd_diagonal(a in 0.05f64..4.0, s in 0.0f64..1.0, t in 0.0f64..1.0, big_t in 0.2f64..5.0) {
            let pr = p(a, big_t);
            let (s, t) = (s * big_t, t * big_t);
            let r1 = covariance(&pr, s, t).unwrap();
            let r2 = covariance(&pr, t, s).unwrap();
            prop_assert!((r1 - r2).abs() <= 1e-14 * r1.abs().max(1.0));
            prop_assert!(covariance(&pr, t, t).unwrap() >= 0.0);
        }

        #[test]
        fn time_change_increasing(a in 0.05f64..4.0, u in 0.0f64..0.99, v in 0.0f64..0.99) {
            let pr = p(a, 1.0);
            let (lo, hi) = if u < v { (u, v) } else { (v, u) };
            prop_assume!(hi - lo > 1e-9);
            prop_assert!(time_change(&pr, hi).unwrap() > time_change(&pr, lo).unwrap());
        }
    }
}
