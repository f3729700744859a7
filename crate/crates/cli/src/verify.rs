//! Self-checks run by `flagric verify`.

use flagric_core::einstein::equivalence::family_spread;
use flagric_core::einstein::{
    check_equivalence, component_at, Component, Edition, ExplicitSystem, Shape,
};
use flagric_core::flagspace::table1;
use flagric_core::sampling::{log_uniform, stream_rng, DEFAULT_BOX};
use flagric_core::scalar::ratio;
use flagric_core::solver::{classify, kahler_einstein_candidate, newton_solve};
use flagric_core::{
    all_specs, EinsteinSystem, FlagManifold, FlagSpec, LieType, Root, RootSystem, SolverConfig,
    TRootClass,
};
use serde::Serialize;

use crate::CliResult;

pub const SUITE: [&str; 9] = [
    "A:1,1,1",
    "A:2,1",
    "B:2,2",
    "B:2,1;tail=2",
    "C:1,1",
    "C:2,1",
    "C:2;tail=3",
    "D:2,2",
    "D:2,1;tail=4",
];

pub const REPRESENTATIVE_TOL: f64 = 1e-12;
pub const FAMILY_TOL: f64 = 1e-12;
pub const KE_RESIDUAL_TOL: f64 = 1e-9;
pub const KE_MAX_ITERS: usize = 10;
pub const KE_BALL: f64 = 0.1;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn new(
        name: &'static str,
        spec: Option<&FlagSpec>,
        value: f64,
        tolerance: f64,
        passed: bool,
        detail: String,
    ) -> Self {
        Check {
            name,
            spec: spec.map(ToString::to_string),
            passed,
            value,
            tolerance,
            detail,
        }
    }
}

/// Largest relative spread of the Ricci component across the roots of each
/// fiber, over `samples` random metrics.
pub fn representative_spread(m: &FlagManifold, samples: usize, seed: u64) -> f64 {
    let per_summand: Vec<Vec<Component<f64>>> = (0..m.count_summands())
        .map(|i| {
            m.pi_m()
                .iter()
                .filter(|a| m.summand_of(a) == Some(i))
                .map(|a| component_at(m, a).expect("complementary root").to_scalar())
                .collect()
        })
        .collect();
    let mut worst = 0.0f64;
    for sample in 0..samples {
        let mut rng = stream_rng(seed, sample as u64);
        let x = log_uniform(&mut rng, m.count_summands(), DEFAULT_BOX);
        for comps in &per_summand {
            let v: Vec<f64> = comps.iter().map(|c| c.eval(&x)).collect();
            let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
            let scale = hi.abs().max(lo.abs());
            if scale > 0.0 {
                worst = worst.max((hi - lo) / scale);
            }
        }
    }
    worst
}

pub fn table1_check(spec: &FlagSpec) -> CliResult<Check> {
    let m = FlagManifold::new(spec.clone())?;
    let (expected, formula) = table1(spec);
    let count = m.count_summands();
    Ok(Check::new(
        "table1",
        Some(spec),
        count as f64,
        0.0,
        count == expected,
        format!("count {count}, {formula} = {expected}"),
    ))
}

pub fn representative_check(spec: &FlagSpec) -> CliResult<Check> {
    let m = FlagManifold::new(spec.clone())?;
    let spread = representative_spread(&m, 50, 0);
    Ok(Check::new(
        "representative_independence",
        Some(spec),
        spread,
        REPRESENTATIVE_TOL,
        spread <= REPRESENTATIVE_TOL,
        "50 random metrics".into(),
    ))
}

/// Equivalence of the hand-derived system (and, for the B tail shape, the
/// agreement of its three `h_k` families).
pub fn equivalence_checks(spec: &FlagSpec) -> CliResult<Vec<Check>> {
    let m = FlagManifold::new(spec.clone())?;
    let sys = ExplicitSystem::new(&m, Edition::Corrected)?;
    let report = check_equivalence(&m, &sys, 100, 0);
    let mut ks: Vec<String> = report
        .factors
        .iter()
        .map(|f| flagric_core::scalar::rational_string(&f.k))
        .collect();
    ks.dedup();
    let detail = if report.passed() {
        format!("{} equations, K = {}", report.factors.len(), ks.join(", "))
    } else {
        format!("mismatch: {}", report.failures.join(", "))
    };
    let mut out = vec![Check::new(
        "equivalence",
        Some(spec),
        report.max_rel_error,
        flagric_core::einstein::equivalence::EQUIVALENCE_TOL,
        report.passed(),
        detail,
    )];
    if sys.shape() == Shape::BTail {
        let spread = family_spread(&sys, &[2, 4, 6], 100, 0);
        out.push(Check::new(
            "family_agreement",
            Some(spec),
            spread,
            FAMILY_TOL,
            spread <= FAMILY_TOL,
            "families 2, 4, 6".into(),
        ));
    }
    Ok(out)
}

pub fn kahler_einstein_check(spec: &FlagSpec) -> CliResult<Check> {
    let m = FlagManifold::new(spec.clone())?;
    let sys = EinsteinSystem::<f64>::generate(&m);
    let x0 = kahler_einstein_candidate(spec)?;
    let cfg = SolverConfig {
        max_iters: KE_MAX_ITERS,
        newton_tol: KE_RESIDUAL_TOL,
        ..SolverConfig::default()
    };
    Ok(match newton_solve(&sys, x0.values(), &cfg) {
        Ok(r) => {
            let kaehler = classify(&m, &r.x);
            let passed =
                kaehler && r.max_excursion <= KE_BALL && r.residual_norm <= KE_RESIDUAL_TOL;
            Check::new(
                "kaehler_einstein",
                Some(spec),
                r.residual_norm,
                KE_RESIDUAL_TOL,
                passed,
                format!(
                    "{} iterations, excursion {:.3e}, {}",
                    r.iterations,
                    r.max_excursion,
                    if kaehler { "kaehler" } else { "non_kaehler" }
                ),
            )
        }
        Err(e) => Check::new(
            "kaehler_einstein",
            Some(spec),
            f64::INFINITY,
            KE_RESIDUAL_TOL,
            false,
            e.to_string(),
        ),
    })
}

pub fn spec_checks(spec: &FlagSpec) -> CliResult<Vec<Check>> {
    let mut out = vec![table1_check(spec)?, representative_check(spec)?];
    out.extend(equivalence_checks(spec)?);
    out.push(kahler_einstein_check(spec)?);
    Ok(out)
}

/// Summand counts against the closed forms for every spec of rank up to `max_n`.
pub fn table1_sweep(max_n: usize) -> Check {
    let mut total = 0;
    let mut bad = Vec::new();
    for ty in LieType::ALL {
        for n in 1..=max_n {
            for spec in all_specs(ty, n) {
                total += 1;
                let m = FlagManifold::new(spec.clone()).expect("enumerated specs are valid");
                if m.count_summands() != table1(&spec).0 {
                    bad.push(spec.to_string());
                }
            }
        }
    }
    Check::new(
        "table1_sweep",
        None,
        bad.len() as f64,
        0.0,
        bad.is_empty(),
        if bad.is_empty() {
            format!("{total} specs, rank <= {max_n}")
        } else {
            format!("mismatch: {}", bad.join(" "))
        },
    )
}

/// Tail-free C and D specs: the projected set is of type C on the number of
/// blocks whenever every block of a D spec has size at least two.
pub fn classification_sweep(max_n: usize) -> Check {
    let mut total = 0;
    let mut bad = Vec::new();
    for ty in [LieType::C, LieType::D] {
        for n in 1..=max_n {
            for spec in all_specs(ty, n).into_iter().filter(|s| s.tail.is_none()) {
                if ty == LieType::D && spec.blocks.contains(&1) {
                    continue;
                }
                total += 1;
                let m = FlagManifold::new(spec.clone()).expect("enumerated specs are valid");
                if m.classify_t_root_set() != TRootClass::RootSystem(LieType::C, spec.blocks.len())
                {
                    bad.push(spec.to_string());
                }
            }
        }
    }
    Check::new(
        "troot_classification",
        None,
        bad.len() as f64,
        0.0,
        bad.is_empty(),
        if bad.is_empty() {
            format!("{total} specs")
        } else {
            format!("mismatch: {}", bad.join(" "))
        },
    )
}

/// Squared structure constants against the closed-form values per type.
pub fn structure_constant_sweep() -> CliResult<Check> {
    let mut bad = Vec::new();
    let mut pairs = 0usize;
    for n in 2..=8usize {
        let ni = n as i64;
        for (ty, value) in [
            (LieType::B, ratio(1, 2 * (2 * ni - 1))),
            (LieType::D, ratio(1, 4 * (ni - 1))),
        ] {
            if n < 3 && ty == LieType::D {
                continue;
            }
            let sys = RootSystem::new(ty, n)?;
            for a in sys.roots() {
                for b in sys.roots() {
                    if !sys.contains(&a.add(b)) {
                        continue;
                    }
                    pairs += 1;
                    if sys.structure_constant_sq(a, b) != value {
                        bad.push(format!("{ty}{n} {a},{b}"));
                    }
                }
            }
        }
        let sys = RootSystem::new(LieType::C, n)?;
        let e = |i: usize| Root::unit(n, i);
        let long = ratio(1, 2 * (ni + 1));
        let short = ratio(1, 4 * (ni + 1));
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let plus = e(i).add(&e(j));
                let minus = e(i).sub(&e(j));
                for (a, b, want) in [(&plus, minus.clone(), &long), (&plus, minus.neg(), &long)] {
                    pairs += 1;
                    if &sys.structure_constant_sq(a, &b) != want {
                        bad.push(format!("C{n} {a},{b}"));
                    }
                }
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    pairs += 1;
                    let b = e(j).sub(&e(k));
                    if sys.structure_constant_sq(&minus, &b) != short {
                        bad.push(format!("C{n} {minus},{b}"));
                    }
                }
            }
        }
    }
    Ok(Check::new(
        "structure_constants",
        None,
        bad.len() as f64,
        0.0,
        bad.is_empty(),
        if bad.is_empty() {
            format!("{pairs} pairs, rank 2..8")
        } else {
            format!("mismatch: {}", bad.join(" "))
        },
    ))
}

pub fn default_suite() -> CliResult<Vec<Check>> {
    let mut out = vec![
        table1_sweep(7),
        classification_sweep(7),
        structure_constant_sweep()?,
    ];
    for s in SUITE {
        out.extend(spec_checks(&s.parse()?)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_checks_pass() {
        for s in ["A:1,1,1", "B:2,1;tail=2", "C:2;tail=3", "D:2,2"] {
            let checks = spec_checks(&s.parse().unwrap()).unwrap();
            for c in &checks {
                assert!(c.passed, "{s}: {c:?}");
            }
        }
    }

    #[test]
    fn sweeps_pass() {
        assert!(table1_sweep(5).passed);
        assert!(classification_sweep(5).passed);
        let c = structure_constant_sweep().unwrap();
        assert!(c.passed, "{}", c.detail);
    }
}
