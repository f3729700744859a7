//! Matching hand-derived equations against the generated Ricci components.
//!
//! Each equation `LHS − [c]λ_ξ` should equal `K·(Ric_ξ − c*·λ_ξ)`. `K` comes
//! from the exact constants; `c* = 1/K` unless the system keeps `c` free.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::explicit::{Edition, ExplicitSystem, Shape};
use super::export::Laurent;
use super::{component_at, Component};
use crate::error::{Error, Result};
use crate::flagspace::{FlagManifold, FlagSpec, TRoot};
use crate::sampling::{log_uniform, stream_rng, DEFAULT_BOX};
use crate::scalar::{rational_string, Scalar};

/// Relative tolerance of the sampled comparison.
pub const EQUIVALENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquationFactor {
    pub label: String,
    pub family: u8,
    pub troot: TRoot,
    #[serde(serialize_with = "as_rational_string")]
    pub k: BigRational,
    /// `None` when the equation keeps the Einstein constant symbolic.
    #[serde(serialize_with = "as_opt_rational_string")]
    pub c_star: Option<BigRational>,
    /// Exact identity of the Laurent expansions.
    pub exact: bool,
    pub max_rel_error: f64,
}

fn as_rational_string<S: serde::Serializer>(
    q: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(q))
}

fn as_opt_rational_string<S: serde::Serializer>(
    q: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&rational_string(q)),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub spec: String,
    pub shape: Shape,
    pub edition: Edition,
    pub samples: usize,
    pub factors: Vec<EquationFactor>,
    pub max_rel_error: f64,
    /// Labels of the equations that do not match.
    pub failures: Vec<String>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self) -> Result<Self> {
        if self.passed() {
            Ok(self)
        } else {
            Err(Error::EquivalenceFailure {
                failures: self.failures,
            })
        }
    }
}

/// Compares every equation of `sys` with the generated component of its
/// t-root, exactly and at `samples` seeded random metrics.
pub fn check_equivalence(
    m: &FlagManifold,
    sys: &ExplicitSystem,
    samples: usize,
    seed: u64,
) -> EquivalenceReport {
    let dim = m.count_summands();
    let generated: Vec<Component<BigRational>> = m
        .summands()
        .iter()
        .map(|s| component_at(m, s.representative()).expect("representatives are complementary"))
        .collect();
    let gen_f: Vec<Component<f64>> = generated.iter().map(Component::to_scalar).collect();

    let mut factors = Vec::new();
    for eq in sys.equations() {
        let k = eq.lhs.constant.clone() / generated[eq.target].constant.clone();
        let c_star = (!eq.symbolic_c).then(|| BigRational::one() / k.clone());

        let mut lhs = Laurent::from_component(&eq.lhs, dim);
        lhs.add(&Laurent::from_component(&generated[eq.target], dim).scaled(&(-k.clone())));
        let exact = lhs.terms.is_empty() && !k.is_zero();

        let kf = k.as_f64();
        let cf = c_star.as_ref().map(Scalar::as_f64);
        let expl = eq.lhs.to_scalar::<f64>();
        let mut worst = 0.0f64;
        for sample in 0..samples {
            let mut rng = stream_rng(seed, sample as u64);
            let x = log_uniform(&mut rng, dim, DEFAULT_BOX);
            let c = match cf {
                Some(c) => c,
                None => log_uniform(&mut rng, 1, DEFAULT_BOX)[0],
            };
            let lt = x[eq.target];
            let rhs_coeff = if eq.symbolic_c { c } else { 1.0 };
            let e = expl.eval(&x) - rhs_coeff * lt;
            let comp = gen_f[eq.target].eval(&x);
            let g = kf * (comp - c * lt);
            let scale = (kf * comp).abs().max((kf * c * lt).abs());
            let rel = (e - g).abs() / scale;
            worst = worst.max(if rel.is_nan() { f64::INFINITY } else { rel });
        }
        factors.push(EquationFactor {
            label: eq.label.clone(),
            family: eq.family,
            troot: m.summands()[eq.target].troot.clone(),
            k,
            c_star,
            exact,
            max_rel_error: worst,
        });
    }
    let failures = factors
        .iter()
        .filter(|f| !f.exact || f.max_rel_error > EQUIVALENCE_TOL || f.k <= BigRational::zero())
        .map(|f| f.label.clone())
        .collect();
    EquivalenceReport {
        spec: m.spec().to_string(),
        shape: sys.shape(),
        edition: sys.edition(),
        samples,
        max_rel_error: factors.iter().map(|f| f.max_rel_error).fold(0.0, f64::max),
        factors,
        failures,
    }
}

/// Largest relative spread, over `samples` random metrics, between equations
/// of the given families that share a target.
pub fn family_spread(sys: &ExplicitSystem, families: &[u8], samples: usize, seed: u64) -> f64 {
    let eqs: Vec<_> = sys
        .equations()
        .iter()
        .filter(|e| families.contains(&e.family))
        .map(|e| (e.target, e.lhs.to_scalar::<f64>()))
        .collect();
    let dim = sys.troots().len();
    let mut worst = 0.0f64;
    for sample in 0..samples {
        let mut rng = stream_rng(seed, sample as u64);
        let x = log_uniform(&mut rng, dim, DEFAULT_BOX);
        for (i, (ti, a)) in eqs.iter().enumerate() {
            for (tj, b) in &eqs[i + 1..] {
                if ti != tj {
                    continue;
                }
                let (va, vb) = (a.eval(&x), b.eval(&x));
                let rel = (va - vb).abs() / va.abs().max(vb.abs());
                worst = worst.max(if rel.is_nan() { f64::INFINITY } else { rel });
            }
        }
    }
    worst
}

/// Per-equation factors of the corrected system of `spec`, validated at 100
/// random metrics.
pub fn equivalence_factor(spec: &FlagSpec) -> Result<Vec<EquationFactor>> {
    let m = FlagManifold::new(spec.clone())?;
    let sys = ExplicitSystem::new(&m, Edition::Corrected)?;
    Ok(check_equivalence(&m, &sys, 100, 0).into_result()?.factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn factors_per_type() {
        let cases = [
            ("A:1,1,1", ratio(6, 1)),
            ("A:2,1", ratio(6, 1)),
            ("B:2,2", ratio(4 * 7, 1)),
            ("B:2,1;tail=2", ratio(4 * 9, 1)),
            ("C:1,1", ratio(24, 1)),
            ("C:2,1", ratio(32, 1)),
            ("D:2,2", ratio(12, 1)),
            ("D:2,1;tail=4", ratio(24, 1)),
        ];
        for (s, k) in cases {
            let f = equivalence_factor(&s.parse().unwrap()).unwrap();
            assert!(f.iter().all(|e| e.k == k && e.exact), "{s}");
            assert!(f
                .iter()
                .all(|e| e.c_star == Some(BigRational::one() / k.clone())));
        }
        let f = equivalence_factor(&"C:2;tail=3".parse().unwrap()).unwrap();
        assert!(f
            .iter()
            .all(|e| e.k == BigRational::one() && e.c_star.is_none()));
    }

    #[test]
    fn b_tail_duplicate_families() {
        let m = FlagManifold::new("B:2,1;tail=2".parse().unwrap()).unwrap();
        let sys = ExplicitSystem::new(&m, Edition::Corrected).unwrap();
        assert_eq!(
            sys.equations()
                .iter()
                .filter(|e| [2, 4, 6].contains(&e.family))
                .count(),
            6
        );
        assert!(family_spread(&sys, &[2, 4, 6], 50, 0) <= 1e-12);
    }

    #[test]
    fn printed_edition_surfaces_errata() {
        let spec: FlagSpec = "B:2,1;tail=2".parse().unwrap();
        let m = FlagManifold::new(spec).unwrap();
        let sys = ExplicitSystem::new(&m, Edition::AsPrinted).unwrap();
        let report = check_equivalence(&m, &sys, 10, 1);
        assert_eq!(report.failures, vec!["B-tail.1 g_{1,2}".to_string()]);
        match report.into_result() {
            Err(Error::EquivalenceFailure { failures }) => assert_eq!(failures.len(), 1),
            other => panic!("{other:?}"),
        }
    }
}
