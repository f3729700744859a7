//! Multistart damped Newton for the gauge-fixed Einstein system.
//!
//! Starts are drawn log-uniformly from `10^[lo, hi]` with ChaCha8, one
//! stream per start (`seed_from_u64(seed)`, then `set_stream(start)`), so the
//! result does not depend on how starts are scheduled across threads.
//! Converged points are sorted and merged sequentially.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::einstein::{component_at, EinsteinSystem, ExplicitSystem, MetricVector};
use crate::error::{Error, Result};
use crate::flagspace::{FlagManifold, FlagSpec, TRoot};
use crate::sampling::{log_uniform, stream_rng, DEFAULT_BOX};
use crate::scalar::Scalar;

/// Smallest metric entry a Newton iterate may take.
pub const POSITIVITY_FLOOR: f64 = 1e-9;
/// Relative tolerance of the additivity test in [`classify`].
pub const KAEHLER_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    pub starts: usize,
    pub seed: u64,
    pub newton_tol: f64,
    pub max_iters: usize,
    pub dedup_tol: f64,
    pub sample_box: (f64, f64),
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            starts: 500,
            seed: 0,
            newton_tol: 1e-12,
            max_iters: 100,
            dedup_tol: 1e-6,
            sample_box: DEFAULT_BOX,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Domain(format!("solver config: {what}")));
        if self.starts == 0 {
            return bad("starts must be at least 1");
        }
        if [self.newton_tol, self.dedup_tol]
            .iter()
            .any(|t| t.is_nan() || *t <= 0.0)
        {
            return bad("tolerances must be positive");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        if self.sample_box.0.partial_cmp(&self.sample_box.1) != Some(Ordering::Less) {
            return bad("sample box must be a nonempty interval");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NewtonError {
    #[error("starting point is not strictly positive: {0}")]
    Precondition(String),
    #[error("diverged after {iterations} iterations (residual {residual:e})")]
    Divergence { iterations: usize, residual: f64 },
    #[error("no convergence in {iterations} iterations (residual {residual:e})")]
    MaxIters { iterations: usize, residual: f64 },
    #[error("singular Jacobian at iteration {iterations}")]
    SingularJacobian { iterations: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonResult {
    /// Full metric vector, gauge entry equal to one.
    pub x: Vec<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
    /// Largest sup-norm distance of an iterate from the (gauge-normalized) start.
    pub max_excursion: f64,
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(
        0.0,
        |m, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) },
    )
}

fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Damped Newton with step halving from the full metric vector `x0`.
pub fn newton_solve(
    system: &EinsteinSystem<f64>,
    x0: &[f64],
    cfg: &SolverConfig,
) -> std::result::Result<NewtonResult, NewtonError> {
    if x0.len() != system.dim() {
        return Err(NewtonError::Precondition(format!(
            "expected {} entries, got {}",
            system.dim(),
            x0.len()
        )));
    }
    if let Some(v) = x0
        .iter()
        .find(|v| !v.is_finite() || **v <= 0.0 || v.is_nan())
    {
        return Err(NewtonError::Precondition(format!("entry {v}")));
    }
    let g = system.gauge();
    let start: Vec<f64> = x0.iter().map(|v| v / x0[g]).collect();
    let mut u = system.project(&start);
    let mut r = system.residual(&system.embed(&u));
    let mut norm = sup(&r);
    let mut excursion = 0.0f64;
    for it in 0..=cfg.max_iters {
        if norm.is_nan() {
            return Err(NewtonError::Divergence {
                iterations: it,
                residual: norm,
            });
        }
        if norm <= cfg.newton_tol {
            return Ok(NewtonResult {
                x: system.embed(&u),
                residual_norm: norm,
                iterations: it,
                max_excursion: excursion,
            });
        }
        if it == cfg.max_iters || u.is_empty() {
            break;
        }
        let j = system.jacobian(&system.embed(&u));
        let rhs = nalgebra::DVector::from_iterator(r.len(), r.iter().map(|v| -v));
        let step = match j.lu().solve(&rhs) {
            Some(s) if s.iter().all(|v| v.is_finite()) => s,
            _ => return Err(NewtonError::SingularJacobian { iterations: it }),
        };
        let mut t = 1.0;
        let accepted = loop {
            let trial: Vec<f64> = u.iter().zip(step.iter()).map(|(a, d)| a + t * d).collect();
            if trial.iter().all(|&v| v > POSITIVITY_FLOOR && v.is_finite()) {
                let rt = system.residual(&system.embed(&trial));
                let nt = sup(&rt);
                if nt < norm {
                    break Some((trial, rt, nt));
                }
            }
            t *= 0.5;
            if t < 1e-10 {
                break None;
            }
        };
        match accepted {
            Some((trial, rt, nt)) => {
                u = trial;
                r = rt;
                norm = nt;
                excursion = excursion.max(sup_dist(&system.embed(&u), &start));
            }
            None => {
                return Err(NewtonError::Divergence {
                    iterations: it + 1,
                    residual: norm,
                })
            }
        }
    }
    Err(NewtonError::MaxIters {
        iterations: cfg.max_iters,
        residual: norm,
    })
}

/// Newton from a metric vector.
pub fn newton_from_metric(
    system: &EinsteinSystem<f64>,
    x0: &MetricVector<f64>,
    cfg: &SolverConfig,
) -> std::result::Result<NewtonResult, NewtonError> {
    newton_solve(system, x0.values(), cfg)
}

#[derive(Debug, Clone, Serialize)]
pub struct Solution {
    pub troots: Vec<String>,
    /// Gauge-normalized metric.
    pub lambda: Vec<f64>,
    pub einstein_constant: f64,
    pub residual_norm: f64,
    pub kaehler: bool,
    pub multiplicity: usize,
    /// Lexicographically smallest gauge-normalized image under permutations
    /// of equal-size blocks.
    pub orbit: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StartStats {
    pub converged: usize,
    pub divergence: usize,
    pub max_iters: usize,
    pub singular: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultistartReport {
    pub solutions: Vec<Solution>,
    pub stats: StartStats,
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Canonical image of `x` under block permutations of equal sizes.
pub fn orbit_representative(m: &FlagManifold, x: &[f64], gauge: usize) -> Vec<f64> {
    m.block_permutations()
        .iter()
        .map(|perm| {
            let map = m.permute_summands(perm);
            let mut y = vec![0.0; x.len()];
            for (i, &j) in map.iter().enumerate() {
                y[j] = x[i];
            }
            let k = y[gauge];
            y.iter().map(|v| v / k).collect::<Vec<f64>>()
        })
        .min_by(|a, b| lex(a, b))
        .expect("identity permutation")
}

fn build_solution(
    m: &FlagManifold,
    sys: &EinsteinSystem<f64>,
    x: Vec<f64>,
    multiplicity: usize,
) -> Solution {
    let residual_norm = sup(&sys.residual(&x));
    Solution {
        troots: sys.troots().iter().map(TRoot::id).collect(),
        einstein_constant: sys.einstein_constant(&x),
        residual_norm,
        kaehler: classify(m, &x),
        multiplicity,
        orbit: orbit_representative(m, &x, sys.gauge()),
        lambda: x,
    }
}

/// Runs `cfg.starts` seeded Newton starts and merges converged points.
pub fn multistart(spec: &FlagSpec, cfg: &SolverConfig) -> Result<MultistartReport> {
    cfg.validate()?;
    let m = FlagManifold::new(spec.clone())?;
    let sys = EinsteinSystem::<f64>::generate(&m);
    let dim = sys.dim();
    let outcomes: Vec<std::result::Result<NewtonResult, NewtonError>> = (0..cfg.starts)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(cfg.seed, i as u64);
            let x0 = log_uniform(&mut rng, dim, cfg.sample_box);
            newton_solve(&sys, &x0, cfg)
        })
        .collect();

    let mut stats = StartStats::default();
    let mut points = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => {
                stats.converged += 1;
                points.push(r.x);
            }
            Err(NewtonError::Divergence { .. }) | Err(NewtonError::Precondition(_)) => {
                stats.divergence += 1
            }
            Err(NewtonError::MaxIters { .. }) => stats.max_iters += 1,
            Err(NewtonError::SingularJacobian { .. }) => stats.singular += 1,
        }
    }
    points.sort_by(|a, b| lex(a, b));
    let mut clusters: Vec<(Vec<f64>, usize)> = Vec::new();
    for p in points {
        match clusters
            .iter_mut()
            .find(|(rep, _)| sup_dist(rep, &p) <= cfg.dedup_tol)
        {
            Some((_, count)) => *count += 1,
            None => clusters.push((p, 1)),
        }
    }
    let solutions = clusters
        .into_iter()
        .map(|(x, k)| build_solution(&m, &sys, x, k))
        .collect();
    Ok(MultistartReport { solutions, stats })
}

/// Largest relative residual of the hand-derived equations at a solution of
/// the generated system, after rescaling λ to their normalization.
pub fn explicit_residual(m: &FlagManifold, sys: &ExplicitSystem, lambda: &[f64]) -> Result<f64> {
    let first = sys
        .equations()
        .first()
        .ok_or_else(|| Error::Domain(format!("{}: empty system", m.spec())))?;
    let generated = component_at(m, m.summands()[first.target].representative())?;
    let k = (first.lhs.constant.clone() / generated.constant).as_f64();
    let gen = EinsteinSystem::<f64>::generate(m);
    let e = gen.einstein_constant(lambda);
    let (mu, c): (Vec<f64>, f64) = if sys.has_symbolic_constant() {
        (lambda.to_vec(), k * e)
    } else {
        (lambda.iter().map(|v| k * e * v).collect(), 1.0)
    };
    let values = sys.evaluate(&mu, Some(&c))?;
    Ok(sys
        .equations()
        .iter()
        .zip(values)
        .map(|(eq, v)| {
            let rhs = if eq.symbolic_c {
                c * mu[eq.target]
            } else {
                mu[eq.target]
            };
            (v / rhs).abs()
        })
        .fold(0.0, f64::max))
}

/// `λ_ξ = ⟨2δ_M, α_ξ⟩` with `2δ_M` the sum of the positive complementary
/// roots and `α_ξ` any root of the fiber of ξ; gauge-normalized.
pub fn kahler_einstein_candidate(spec: &FlagSpec) -> Result<MetricVector<f64>> {
    let m = FlagManifold::new(spec.clone())?;
    let n = spec.n();
    let mut two_delta = vec![0i64; n];
    for a in m.pi_m().iter().filter(|a| a.is_positive()) {
        for (s, &c) in two_delta.iter_mut().zip(a.coeffs()) {
            *s += i64::from(c);
        }
    }
    let values: Vec<f64> = m
        .summands()
        .iter()
        .map(|s| {
            s.representative()
                .coeffs()
                .iter()
                .zip(&two_delta)
                .map(|(&a, &d)| i64::from(a) * d)
                .sum::<i64>() as f64
        })
        .collect();
    Ok(MetricVector::new(&m, values)?.gauge_normalized(0))
}

/// Kähler test: some Weyl chamber of t-roots on which λ is additive.
///
/// Chambers are cut out by `φ_w = w·(r, r−1, …, 1)` for `w` a signed
/// permutation (a permutation for type A); λ extends to negative t-roots by
/// `λ_{−ξ} = λ_ξ`.
pub fn classify(m: &FlagManifold, lambda: &[f64]) -> bool {
    let troots: Vec<&TRoot> = m.decomposition().troots().collect();
    let r = m.spec().blocks.len();
    let signed = m.spec().lie_type != crate::rootsys::LieType::A;
    let mut seen: BTreeSet<Vec<bool>> = BTreeSet::new();
    let mut perm: Vec<usize> = (0..r).collect();
    let weights: Vec<i64> = (1..=r as i64).rev().collect();
    loop {
        let sign_patterns = if signed { 1u32 << r } else { 1 };
        for mask in 0..sign_patterns {
            let phi: Vec<i64> = (0..r)
                .map(|i| {
                    let w = weights[perm[i]];
                    if mask >> i & 1 == 1 {
                        -w
                    } else {
                        w
                    }
                })
                .collect();
            let signs: Vec<bool> = troots
                .iter()
                .map(|t| {
                    t.coeffs()
                        .iter()
                        .zip(&phi)
                        .map(|(&c, &p)| i64::from(c) * p)
                        .sum::<i64>()
                        > 0
                })
                .collect();
            if !seen.insert(signs.clone()) {
                continue;
            }
            if additive_on(m, &troots, &signs, lambda) {
                return true;
            }
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn additive_on(m: &FlagManifold, troots: &[&TRoot], signs: &[bool], lambda: &[f64]) -> bool {
    let oriented: Vec<TRoot> = troots
        .iter()
        .zip(signs)
        .map(|(t, &s)| if s { (*t).clone() } else { t.neg() })
        .collect();
    for (i, a) in oriented.iter().enumerate() {
        for (j, b) in oriented.iter().enumerate().skip(i) {
            let sum = a.add(b);
            if let Some(k) = m.troot_index(&sum.abs()) {
                if oriented[k] != sum {
                    continue;
                }
                let lhs = lambda[i] + lambda[j];
                if (lhs - lambda[k]).abs() > KAEHLER_TOL * lhs.abs().max(lambda[k].abs()) {
                    return false;
                }
            }
        }
    }
    true
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
