use std::collections::BTreeSet;

use flagric_core::einstein::explicit::errata_for;
use flagric_core::einstein::{check_equivalence, Edition, ExplicitSystem};
use flagric_core::{all_specs, FlagManifold, LieType};

#[test]
fn corrected_matches_and_printed_differs_only_on_errata() {
    let mut checked = 0;
    for ty in LieType::ALL {
        for n in 2..=6 {
            for spec in all_specs(ty, n) {
                let m = FlagManifold::new(spec.clone()).unwrap();
                let corrected = ExplicitSystem::new(&m, Edition::Corrected).unwrap();
                let report = check_equivalence(&m, &corrected, 5, 3);
                assert!(report.passed(), "{spec}: {:?}", report.failures);

                let printed = ExplicitSystem::new(&m, Edition::AsPrinted).unwrap();
                let report = check_equivalence(&m, &printed, 5, 3);
                let failing: BTreeSet<String> = report.failures.into_iter().collect();
                let differing: BTreeSet<String> = printed
                    .equations()
                    .iter()
                    .zip(corrected.equations())
                    .filter(|(p, c)| p != c)
                    .map(|(p, _)| p.label.clone())
                    .collect();
                assert_eq!(failing, differing, "{spec}");
                let registered: BTreeSet<u8> = errata_for(printed.shape())
                    .flat_map(|e| e.families.iter().copied())
                    .collect();
                for e in printed
                    .equations()
                    .iter()
                    .filter(|e| failing.contains(&e.label))
                {
                    assert!(registered.contains(&e.family), "{spec}: {}", e.label);
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}
