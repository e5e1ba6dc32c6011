//! Rigidity of the bi-invariant metric among invariant metrics with `g ≥ g₀`.
//!
//! For a diagonal metric `λ` the gap `R_{g₀} − R_g` splits as
//!
//! ```text
//! gap = Σ_i c_i d_i (λ_i − 1)/λ_i  +  (1/12) Σ_{i,j,k} A^k_ij Q(λ_i, λ_j, λ_k)/(λ_i λ_j λ_k)
//! Q(a, b, c) = a² + b² + c² − 2ab − 2ac − 2bc + 3abc
//! ```
//!
//! The identity holds for every `λ > 0` once `A` is totally symmetric and
//! `Σ_{j,k} A^k_ij = b_i d_i − 2 c_i d_i`. On `λ ≥ 1` both parts are
//! nonnegative; for `1 ≤ a ≤ b ≤ c` the five-term rewrite of `Q` in
//! [`q_ordered_decomposition`] makes each piece visibly nonnegative.
//!
//! [`verify_rigidity`] is a numerical certificate, not a proof: dense
//! sampling of the box `[1, Λ_max]^s` plus multi-start projected gradient
//! ascent of `R_g`, looking for any point with `R_g > R_{g₀}` or any
//! near-equality point away from `λ ≡ 1`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::binorm::{binormalize, BiInvariantMetric, DiagonalMetric};
use crate::curvature::{scalar_curvature_closed, scalar_curvature_koszul};
use crate::error::{input, Error, Result};
use crate::homogeneous::HomogeneousSpec;
use crate::lie_core::su2_pauli;
use crate::tolerance;

/// `a² + b² + c² − 2ab − 2ac − 2bc + 3abc`
///
/// Arguments are sorted first so the value is bitwise symmetric.
pub fn q_poly(a: f64, b: f64, c: f64) -> f64 {
    let mut s = [a, b, c];
    s.sort_by(f64::total_cmp);
    let [a, b, c] = s;
    a * a + b * b + c * c - 2.0 * a * b - 2.0 * a * c - 2.0 * b * c + 3.0 * a * b * c
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QDecomposition {
    /// `(a−b)², (c−b)², bc(a−1), b(c−b), 2ac(b−1)`
    pub terms: [f64; 5],
    pub sum: f64,
}

/// The ordered rewrite of `Q(a, b, c)`; requires `1 ≤ a ≤ b ≤ c`.
pub fn q_ordered_decomposition(a: f64, b: f64, c: f64) -> Result<QDecomposition> {
    if !(1.0 <= a && a <= b && b <= c) {
        return Err(input(format!(
            "ordered decomposition needs 1 <= a <= b <= c, got ({a}, {b}, {c})"
        )));
    }
    let terms = [
        (a - b).powi(2),
        (c - b).powi(2),
        b * c * (a - 1.0),
        b * (c - b),
        2.0 * a * c * (b - 1.0),
    ];
    Ok(QDecomposition {
        terms,
        sum: terms.iter().sum(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapBreakdown {
    /// `R_{g₀} − R_g`
    pub gap: f64,
    pub casimir_part: f64,
    pub q_part: f64,
    pub residual: f64,
}

pub fn gap_breakdown(spec: &HomogeneousSpec, lambda: &DiagonalMetric) -> Result<GapBreakdown> {
    let defect = spec.a_symmetry_defect();
    if defect > tolerance::DEFECT * spec.a.max_abs().max(1.0) {
        return Err(Error::AsymmetricA { defect });
    }
    let r = spec.scalar_curvature(lambda)?;
    let gap = spec.reference_curvature() - r;
    let l = lambda.as_slice();
    let casimir_part: f64 = (0..spec.blocks())
        .map(|i| spec.c[i] * spec.d[i] as f64 * (l[i] - 1.0) / l[i])
        .sum();
    let q_part: f64 = spec
        .a
        .nonzeros()
        .map(|(i, j, k, v)| v * q_poly(l[i], l[j], l[k]) / (l[i] * l[j] * l[k]))
        .sum::<f64>()
        / 12.0;
    Ok(GapBreakdown {
        gap,
        casimir_part,
        q_part,
        residual: (gap - casimir_part - q_part).abs(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RigidityConfig {
    pub max_lambda: f64,
    pub n_starts: usize,
    pub n_samples: usize,
    pub seed: u64,
    /// Curvature tolerance for violations and near-equality.
    pub tol: f64,
    /// Allowed distance of near-equality points from `λ ≡ 1`.
    pub tol_lambda: f64,
    pub max_iterations: usize,
    pub grad_tol: f64,
    pub armijo: f64,
    pub shrink: f64,
    pub keep_trajectories: bool,
}

impl Default for RigidityConfig {
    fn default() -> Self {
        Self {
            max_lambda: 10.0,
            n_starts: 64,
            n_samples: 10_000,
            seed: DEFAULT_SEED,
            tol: 1e-8,
            tol_lambda: 1e-6,
            max_iterations: 500,
            grad_tol: 1e-10,
            armijo: 1e-4,
            shrink: 0.5,
            keep_trajectories: false,
        }
    }
}

pub const DEFAULT_SEED: u64 = 20_200_725;

#[derive(Debug, Clone, Serialize)]
pub struct StartSummary {
    pub start: Vec<f64>,
    pub end: Vec<f64>,
    pub r: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RigidityReport {
    pub spec: String,
    pub blocks: usize,
    #[serde(rename = "box")]
    pub search_box: [f64; 2],
    pub n_starts: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub tol_lambda: f64,
    pub best_lambda: Vec<f64>,
    pub best_r: f64,
    pub r_reference: f64,
    /// `max (R_g − R_{g₀})` over every evaluated point.
    pub max_violation: f64,
    /// Smallest gap among the uniform samples.
    pub min_sample_gap: f64,
    /// Largest `max_i |λ_i − 1|` among points with `|gap| ≤ tol`.
    pub worst_near_equality_distance: f64,
    pub evaluated_points: usize,
    pub starts_converged: usize,
    pub certified: bool,
    pub note: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectories: Option<Vec<StartSummary>>,
    #[serde(skip)]
    pub wall_time: std::time::Duration,
}

/// Running statistics over evaluated points.
#[derive(Debug, Clone, Copy)]
struct Tally {
    max_violation: f64,
    worst_near_eq: f64,
    count: usize,
}

impl Tally {
    fn new() -> Self {
        Self {
            max_violation: f64::NEG_INFINITY,
            worst_near_eq: 0.0,
            count: 0,
        }
    }

    fn record(&mut self, lambda: &[f64], r: f64, r0: f64, tol: f64) {
        let gap = r0 - r;
        self.max_violation = self.max_violation.max(0.0 - gap);
        if gap.abs() <= tol {
            let dist = lambda.iter().fold(0.0_f64, |m, v| m.max((v - 1.0).abs()));
            self.worst_near_eq = self.worst_near_eq.max(dist);
        }
        self.count += 1;
    }

    fn merge(self, other: Self) -> Self {
        Self {
            max_violation: self.max_violation.max(other.max_violation),
            worst_near_eq: self.worst_near_eq.max(other.worst_near_eq),
            count: self.count + other.count,
        }
    }
}

struct Ascent {
    summary: StartSummary,
    tally: Tally,
}

fn project(x: &mut [f64], hi: f64) {
    for v in x.iter_mut() {
        *v = v.clamp(1.0, hi);
    }
}

fn eval(spec: &HomogeneousSpec, x: &[f64]) -> f64 {
    spec.scalar_curvature(&DiagonalMetric::new(x.to_vec()).expect("box points are positive"))
        .expect("length checked by caller")
}

/// Projected gradient ascent of `R_g` on `[1, hi]^s` with Armijo backtracking.
fn ascend(spec: &HomogeneousSpec, start: Vec<f64>, r0: f64, cfg: &RigidityConfig) -> Ascent {
    let hi = cfg.max_lambda;
    let mut x = start.clone();
    project(&mut x, hi);
    let mut fx = eval(spec, &x);
    let mut tally = Tally::new();
    tally.record(&x, fx, r0, cfg.tol);
    let mut converged = false;
    let mut iterations = 0;
    let mut step = 1.0_f64;

    while iterations < cfg.max_iterations {
        let g = spec
            .gradient(&DiagonalMetric::new(x.clone()).expect("box points are positive"))
            .expect("length checked by caller");
        let pg = x.iter().zip(&g).fold(0.0_f64, |m, (xi, gi)| {
            m.max(((xi + gi).clamp(1.0, hi) - xi).abs())
        });
        if pg <= cfg.grad_tol {
            converged = true;
            break;
        }
        iterations += 1;

        // the accepted step carries over and may grow; far from g₀ the gradient is tiny
        let mut t = (step * 4.0).min(1e12);
        let mut accepted = None;
        for _ in 0..60 {
            let mut trial: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi + t * gi).collect();
            project(&mut trial, hi);
            let ft = eval(spec, &trial);
            tally.record(&trial, ft, r0, cfg.tol);
            let ascent: f64 = trial
                .iter()
                .zip(&x)
                .zip(&g)
                .map(|((ti, xi), gi)| gi * (ti - xi))
                .sum();
            if ft >= fx + cfg.armijo * ascent {
                step = t;
                accepted = Some((trial, ft));
                break;
            }
            t *= cfg.shrink;
        }
        match accepted {
            Some((trial, ft)) => {
                let moved = trial.iter().zip(&x).any(|(a, b)| a != b);
                x = trial;
                fx = ft;
                if !moved {
                    converged = true;
                    break;
                }
            }
            None => break,
        }
    }

    Ascent {
        summary: StartSummary {
            start,
            end: x,
            r: fx,
            iterations,
            converged,
        },
        tally,
    }
}

/// Searches `[1, Λ_max]^s` for a metric `g ≥ g₀` with `R_g ≥ R_{g₀}` other
/// than `g₀` itself.
pub fn verify_rigidity(spec: &HomogeneousSpec, cfg: &RigidityConfig) -> Result<RigidityReport> {
    let central = spec.central_blocks();
    if !central.is_empty() {
        return Err(Error::CenterPresent { blocks: central });
    }
    if !(cfg.max_lambda.is_finite() && cfg.max_lambda > 1.0) {
        return Err(input(format!(
            "max lambda must exceed 1, got {}",
            cfg.max_lambda
        )));
    }
    if !(cfg.tol >= 0.0 && cfg.tol_lambda >= 0.0) {
        return Err(input("tolerances must be nonnegative"));
    }
    let clock = Instant::now();
    let s = spec.blocks();
    let r0 = spec.reference_curvature();
    let hi = cfg.max_lambda;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(cfg.n_starts);
    if cfg.n_starts > 0 {
        starts.push(vec![1.0; s]);
    }
    if cfg.n_starts > 1 {
        starts.push(vec![hi; s]);
    }
    while starts.len() < cfg.n_starts {
        starts.push((0..s).map(|_| rng.random_range(1.0..=hi)).collect());
    }
    let samples: Vec<Vec<f64>> = (0..cfg.n_samples)
        .map(|_| (0..s).map(|_| rng.random_range(1.0..=hi)).collect())
        .collect();

    let ascents: Vec<Ascent> = starts
        .into_par_iter()
        .map(|x0| ascend(spec, x0, r0, cfg))
        .collect();
    let sample_r: Vec<f64> = samples.par_iter().map(|x| eval(spec, x)).collect();

    let mut tally = Tally::new();
    let mut min_sample_gap = f64::INFINITY;
    let mut best: Option<(Vec<f64>, f64)> = None;
    let consider = |x: &[f64], r: f64, best: &mut Option<(Vec<f64>, f64)>| {
        if best.as_ref().is_none_or(|(_, br)| r > *br) {
            *best = Some((x.to_vec(), r));
        }
    };
    for (x, &r) in samples.iter().zip(&sample_r) {
        tally.record(x, r, r0, cfg.tol);
        min_sample_gap = min_sample_gap.min(r0 - r);
        consider(x, r, &mut best);
    }
    for a in &ascents {
        tally = tally.merge(a.tally);
        consider(&a.summary.end, a.summary.r, &mut best);
    }
    let (best_lambda, best_r) = best.unwrap_or_else(|| (vec![1.0; s], r0));
    if tally.count == 0 {
        tally.max_violation = 0.0;
    }

    let certified = tally.max_violation <= cfg.tol && tally.worst_near_eq <= cfg.tol_lambda;
    Ok(RigidityReport {
        spec: spec.name.clone(),
        blocks: s,
        search_box: [1.0, hi],
        n_starts: cfg.n_starts,
        n_samples: cfg.n_samples,
        seed: cfg.seed,
        tol: cfg.tol,
        tol_lambda: cfg.tol_lambda,
        best_lambda,
        best_r,
        r_reference: r0,
        max_violation: tally.max_violation,
        min_sample_gap,
        worst_near_equality_distance: tally.worst_near_eq,
        evaluated_points: tally.count,
        starts_converged: ascents.iter().filter(|a| a.summary.converged).count(),
        certified,
        note: "numerical certificate from sampling and local ascent, not a proof",
        trajectories: cfg
            .keep_trajectories
            .then(|| ascents.into_iter().map(|a| a.summary).collect()),
        wall_time: clock.elapsed(),
    })
}

/// Shrinking su(2) below `g₀`: `λ = (x, x, 1/2)` with `g₀ = B/8`.
#[derive(Debug, Clone, Serialize)]
pub struct Su2ShrinkRecord {
    pub lambda: f64,
    pub metric: [f64; 3],
    pub r_closed: f64,
    pub r_koszul: f64,
    pub r_reference: f64,
    pub g_is_smaller: bool,
    pub scalar_is_smaller: bool,
    /// Below this `x`, `R_g < R_{g₀}`: the smaller root of `6x² − 8x + 1`.
    pub crossover: f64,
    /// `x² (R_g − R_{g₀})`, which tends to −1 as `x → 0⁺`.
    pub scaled_difference: f64,
}

pub fn su2_crossover() -> f64 {
    (4.0 - 10f64.sqrt()) / 6.0
}

pub fn su2_shrink_example(x: f64) -> Result<Su2ShrinkRecord> {
    if !(x > 0.0 && x < 1.0) {
        return Err(input(format!("lambda must lie in (0, 1), got {x}")));
    }
    let alg = su2_pauli();
    let model = binormalize(&alg, &BiInvariantMetric::killing_scaled(&alg, 0.125)?)?;
    let metric = [x, x, 0.5];
    let lambda = DiagonalMetric::new(metric.to_vec())?;
    let r_closed = scalar_curvature_closed(&model, &lambda)?.r;
    let r_koszul = scalar_curvature_koszul(&model, &lambda)?.r;
    let r_reference = scalar_curvature_closed(&model, &DiagonalMetric::ones(3))?.r;
    Ok(Su2ShrinkRecord {
        lambda: x,
        metric,
        r_closed,
        r_koszul,
        r_reference,
        g_is_smaller: metric.iter().all(|&v| v < 1.0),
        scalar_is_smaller: r_closed < r_reference,
        crossover: su2_crossover(),
        scaled_difference: x * x * (r_closed - r_reference),
    })
}
