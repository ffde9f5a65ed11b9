//! The published coefficient update rules for parallel insertion, with the corrections
//! that the chain accounting requires noted inline.
//!
//! These are a cross-check only. Production coefficients come from the closed form on
//! the updated lattice; divergences from these rules are reported, never trusted.

use std::collections::BTreeMap;

use crate::set::ElementSet;
use crate::types::{ExpansionVector, SchubertLabel};

use super::state::{InsertionCase, Rank3State};

pub(crate) enum Prediction {
    Applies(ExpansionVector),
    NotApplicable,
}

/// Accumulates updates on `[n]`. A nonzero update at an invalid label voids the prediction.
struct Updates {
    ev: ExpansionVector,
    n: usize,
    valid: bool,
}

impl Updates {
    fn bump(&mut self, xs: [usize; 3], delta: i64) {
        if delta == 0 {
            return;
        }
        match SchubertLabel::new(xs.to_vec(), self.n) {
            Ok(l) => self.ev.add(l, delta),
            Err(_) => self.valid = false,
        }
    }
}

fn get(h: &BTreeMap<usize, usize>, k: usize) -> i64 {
    h.get(&k).copied().unwrap_or(0) as i64
}

pub(crate) fn predict(state: &Rank3State, e: usize, case: InsertionCase, exceptional: bool) -> Prediction {
    let s = state.stats();
    let n = state.n();
    let nn = n + 1;
    let ev = state.coeffs().map_labels(3, nn, |l| SchubertLabel::new(l.xs().to_vec(), nn).expect("same xs fit"));
    let mut u = Updates { ev, n: nn, valid: true };

    if exceptional {
        match case {
            InsertionCase::FreePoint => {
                u.bump([1, 3, 4], 1);
                u.bump([1, 2, 3], -1);
                return finish(u);
            }
            // the stated shortcuts for these two do not match any insertion; the corrected
            // general formulas below hold with coloops present
            InsertionCase::InseparableOnly | InsertionCase::UncontainedClass => {}
            InsertionCase::ContainedClass => return Prediction::NotApplicable,
        }
    } else if case == InsertionCase::FreePoint && s.coloops > 0 {
        // the free point rule assumes no coloops
        return Prediction::NotApplicable;
    }
    let p = s.p() as i64;
    let p_k = s.p_k();
    match case {
        InsertionCase::FreePoint => {
            let p2 = get(&p_k, 2);
            u.bump([1, 3, 4], 1 - p - p2);
            // stated as +(1 - p); the chain count gives p - 1, which also matches exceptional rule 1 at p = 0
            u.bump([1, 2, 3], p - 1);
            u.bump([1, 3, 5], 2 * p2);
            for k in 2..=n {
                let pk = get(&p_k, k);
                if (3..n).contains(&k) {
                    u.bump([1, k + 1, k + 2], -pk);
                    u.bump([1, 3, k + 3], pk);
                }
                // stated for k > 3; the chain through P with |P| = 3 has type S(1,4,6)
                if k > 2 && k < n {
                    u.bump([1, k + 1, k + 3], pk);
                }
                if k + 2 < n {
                    u.bump([1, 2, k + 3], -pk);
                }
            }
        }
        InsertionCase::InseparableOnly => {
            let f = s.f(e) as i64;
            let pe_k = s.pe_k(e);
            let pe: i64 = pe_k.values().map(|&v| v as i64).sum();
            let pe2 = get(&pe_k, 2);
            // stated as +(1 - f - p^e); same sign slip as in case 1
            u.bump([1, 2, 3], f + pe - 1);
            u.bump([1, 3, 4], 1 - f - pe - pe2);
            u.bump([1, 3, 5], 2 * pe2);
            for k in 2..=n {
                let v = get(&pe_k, k);
                if k >= 3 && k < n {
                    u.bump([1, k + 1, k + 2], -v);
                }
                u.bump([1, 2, k + 3], -v);
                if k > 2 {
                    u.bump([1, 3, k + 3], v);
                    u.bump([1, k + 1, k + 3], v);
                }
            }
            for &flat in s.inseparable.iter().filter(|f| f.contains(e)) {
                let size = flat.len();
                let pf_k = s.pf_k(flat);
                let pf: i64 = pf_k.values().map(|&v| v as i64).sum();
                // stated at S(1, 2, |F|+2); the new chain through {e, new} and F has type S(1, 3, |F|+2)
                u.bump([1, 3, size + 2], 1);
                u.bump([1, 2, size + 1], pf - 1);
                u.bump([1, 2, size + 2], -pf);
                for (&k, &v) in &pf_k {
                    u.bump([1, k + 1, size + 1], -(v as i64));
                    u.bump([1, k + 1, size + 2], v as i64);
                }
            }
        }
        InsertionCase::ContainedClass | InsertionCase::UncontainedClass => grow_class(&mut u, state, e),
    }
    finish(u)
}

/// Cases 3 and 4: the class `P_e` of `e` grows by one, and so does every flat containing it.
///
/// Written from the chain changes: the stated coefficient lists for these cases do not sum
/// to them, so the chain accounting is used directly.
fn grow_class(u: &mut Updates, state: &Rank3State, e: usize) {
    let s = state.stats();
    let (class, _) = s.class_of(e).expect("case requires a class");
    let m = class.len();
    let through: Vec<ElementSet> = s.inseparable.iter().copied().filter(|f| class.is_subset(*f)).collect();
    let f = through.len() as i64;
    let pe_k = s.pe_k(e);
    let pe: i64 = pe_k.values().map(|&v| v as i64).sum();

    // the chain through P_e alone
    u.bump([1, m + 1, m + 2], f + pe - 1);
    u.bump([1, m + 2, m + 3], 1 - f - pe);
    // chains through the separable flats P u P_e
    for (&k, &q) in &pe_k {
        let q = q as i64;
        u.bump([1, m + 1, m + k + 1], -q);
        u.bump([1, m + 2, m + k + 2], q);
        u.bump([1, k + 1, m + k + 1], -q);
        u.bump([1, k + 1, m + k + 2], q);
        u.bump([1, 2, m + k + 1], q);
        u.bump([1, 2, m + k + 2], -q);
    }
    // chains through the inseparable flats containing P_e
    for flat in through {
        let size = flat.len();
        let pf_k = s.pf_k(flat);
        let pf: i64 = pf_k.values().map(|&v| v as i64).sum();
        u.bump([1, 2, size + 1], pf - 1);
        u.bump([1, 2, size + 2], 1 - pf);
        u.bump([1, m + 1, size + 1], -1);
        u.bump([1, m + 2, size + 2], 1);
        for (&k, &v) in &pf_k {
            let v = v as i64 - i64::from(k == m);
            u.bump([1, k + 1, size + 1], -v);
            u.bump([1, k + 1, size + 2], v);
        }
    }
}

fn finish(u: Updates) -> Prediction {
    if u.valid {
        Prediction::Applies(u.ev)
    } else {
        Prediction::NotApplicable
    }
}
