use std::collections::BTreeSet;

use omega_core::descriptor::descriptor_to_lattice;
use omega_core::expansion::{closed_form_expansion, schubert_expansion_oracle};
use omega_core::oracle::distinct_rank3_expansions;
use omega_core::rank2::build_o2;
use omega_core::rank3::build_o3;

#[test]
fn rank2_columns_equal_the_oracle() {
    for n in 2..=9 {
        for c in build_o2(n).unwrap().columns() {
            let z = descriptor_to_lattice(&c.descriptor).unwrap();
            assert_eq!(schubert_expansion_oracle(&z).unwrap(), c.expansion, "n={n} {}", c.descriptor);
        }
    }
}

#[test]
fn rank3_columns_equal_the_oracle() {
    for n in 3..=7 {
        for c in build_o3(n).unwrap().columns() {
            let z = descriptor_to_lattice(&c.descriptor).unwrap();
            assert_eq!(z.rank(), 3);
            assert_eq!(z.n(), n);
            assert_eq!(schubert_expansion_oracle(&z).unwrap(), c.expansion, "n={n} {}", c.descriptor);
        }
    }
}

#[test]
fn brute_force_enumeration_gives_the_same_expansions() {
    for n in 3..=6 {
        let brute: BTreeSet<String> = distinct_rank3_expansions(n).unwrap().iter().map(|e| e.to_string()).collect();
        let built: BTreeSet<String> = build_o3(n).unwrap().columns().iter().map(|c| c.expansion.to_string()).collect();
        assert_eq!(brute, built, "n={n}");
    }
}

#[test]
fn closed_form_agrees_with_moebius_on_every_column() {
    for n in 4..=7 {
        for m in [build_o2(n).unwrap(), build_o3(n).unwrap()] {
            for c in m.columns() {
                let z = descriptor_to_lattice(&c.descriptor).unwrap();
                assert_eq!(closed_form_expansion(&z).unwrap(), c.expansion, "{}", c.descriptor);
            }
        }
    }
}

#[test]
fn columns_are_pairwise_distinct() {
    for n in 4..=8 {
        for m in [build_o2(n).unwrap(), build_o3(n).unwrap()] {
            let set: BTreeSet<String> = m.columns().iter().map(|c| c.expansion.to_string()).collect();
            assert_eq!(set.len(), m.ncols());
        }
    }
}
