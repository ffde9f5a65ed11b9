//! Schubert expansions from the chain lattice, and their check through
//! symmetrized indicator functions.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{build_chain_lattice, rank_table};
use crate::schubert::{chain_to_schubert_label, schubert_lattice};
use crate::types::{CyclicFlatLattice, ExpansionVector};

/// Largest ground set for which the indicator check enumerates all of `S_n`.
pub const MAX_INDICATOR_N: usize = 7;

/// Expansion by the Möbius function of the chain lattice.
///
/// Each chain contributes `-mu(chain, top)` to the label read off its `(size, rank)` signature.
pub fn schubert_expansion_oracle(z: &CyclicFlatLattice) -> Result<ExpansionVector> {
    if !(2..=3).contains(&z.rank()) {
        return Err(Error::UnsupportedRank(z.rank()));
    }
    let cl = build_chain_lattice(z)?;
    let mut out = ExpansionVector::new(z.rank(), z.n());
    for c in 0..cl.chains().len() {
        let lambda = -cl.poset().moebius(c, cl.top())?;
        out.add(chain_to_schubert_label(&cl.signature(c), z.n())?, lambda);
    }
    Ok(out)
}

/// Closed form for lattices without three nested intermediate flats (all lattices of rank at most 3).
///
/// With `P` the intermediate flats: the bare chain gets `1 - |P| + #(comparable pairs)`,
/// a chain through one flat `v` gets `1 - #(flats comparable to v)`, and a chain through
/// two flats gets `1`.
pub fn closed_form_expansion(z: &CyclicFlatLattice) -> Result<ExpansionVector> {
    let flats = z.flats();
    let n = z.n();
    let mut out = ExpansionVector::new(z.rank(), n);
    let m = flats.len();
    if m == 1 {
        out.add(chain_to_schubert_label(&[(flats[0].len(), 0)], n)?, 1);
        return Ok(out);
    }
    let (bottom, top) = (&flats[0], &flats[m - 1]);
    let sig = |f: &crate::types::CyclicFlat| (f.len(), f.rank);
    let mid = &flats[1..m - 1];
    let mut comparable = vec![0i64; mid.len()];
    let mut pairs = 0i64;
    for (a, x) in mid.iter().enumerate() {
        for (b, y) in mid.iter().enumerate().skip(a + 1) {
            // flats are sorted by size, so only x below y is possible
            if x.elements.is_proper_subset(y.elements) {
                if mid.iter().any(|w| y.elements.is_proper_subset(w.elements)) {
                    return Err(Error::Unsupported("lattice has a chain of three intermediate flats".into()));
                }
                pairs += 1;
                comparable[a] += 1;
                comparable[b] += 1;
                out.add(chain_to_schubert_label(&[sig(bottom), sig(x), sig(y), sig(top)], n)?, 1);
            }
        }
    }
    out.add(chain_to_schubert_label(&[sig(bottom), sig(top)], n)?, 1 - mid.len() as i64 + pairs);
    for (a, v) in mid.iter().enumerate() {
        out.add(chain_to_schubert_label(&[sig(bottom), sig(v), sig(top)], n)?, 1 - comparable[a]);
    }
    Ok(out)
}

/// A point `numerators / denominator` of the hypersimplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndicatorSample {
    pub numerators: Vec<u64>,
    pub denominator: u64,
}

/// Result of an indicator check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IndicatorOutcome {
    Ok {
        points: usize,
    },
    /// `matroid` and `expansion` count the permutations placing the sample in each side.
    Counterexample {
        sample: IndicatorSample,
        matroid: i64,
        expansion: i64,
    },
}

impl IndicatorOutcome {
    pub fn is_ok(&self) -> bool {
        matches!(self, IndicatorOutcome::Ok { .. })
    }
}

/// All 0/1 points with `r` ones, then `samples` random rational points with coordinate sum `r`.
pub fn indicator_samples(n: usize, r: usize, samples: usize, seed: u64) -> Vec<IndicatorSample> {
    let mut out = Vec::new();
    for bits in 0u32..1 << n {
        if bits.count_ones() as usize == r {
            out.push(IndicatorSample {
                numerators: (0..n).map(|i| u64::from(bits >> i & 1)).collect(),
                denominator: 1,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let d: u64 = rng.random_range(1..=100);
        let mut a = vec![0u64; n];
        let mut left = r as u64 * d;
        while left > 0 {
            let i = rng.random_range(0..n);
            if a[i] < d {
                a[i] += 1;
                left -= 1;
            }
        }
        out.push(IndicatorSample { numerators: a, denominator: d });
    }
    out
}

/// Lexicographic successor; false after the last permutation.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Checks `sum over sigma of [1(M) - sum_S lambda_S 1(S)](sigma x) = 0` on every sample.
///
/// Base polytope membership is `x(A) <= rk(A)` for every `A`, tested on integer-scaled points.
pub fn verify_expansion_indicator(
    z: &CyclicFlatLattice,
    ev: &ExpansionVector,
    samples: usize,
    seed: u64,
) -> Result<IndicatorOutcome> {
    let n = z.n();
    if n > MAX_INDICATOR_N {
        return Err(Error::UnsupportedSize { n, max: MAX_INDICATOR_N });
    }
    if ev.n() != n || ev.rank() != z.rank() {
        return Err(Error::InvalidArguments("expansion and matroid disagree on rank or size".into()));
    }
    let points = indicator_samples(n, z.rank(), samples, seed);
    let own = rank_table(z)?;
    let terms: Vec<(Vec<u8>, i64)> =
        ev.iter().map(|(l, c)| Ok((rank_table(&schubert_lattice(l))?, c))).collect::<Result<_>>()?;

    let full = 1usize << n;
    let mut sums = vec![0u64; full];
    let mut counts = vec![0i64; terms.len()];
    for sample in &points {
        let d = sample.denominator;
        let mut own_count = 0i64;
        counts.iter_mut().for_each(|c| *c = 0);
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            for mask in 1..full {
                let low = mask.trailing_zeros() as usize;
                sums[mask] = sums[mask & (mask - 1)] + sample.numerators[perm[low]];
            }
            let inside = |table: &[u8]| (1..full).all(|m| sums[m] <= d * u64::from(table[m]));
            if inside(&own) {
                own_count += 1;
            }
            for (k, (table, _)) in terms.iter().enumerate() {
                if inside(table) {
                    counts[k] += 1;
                }
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        let expansion: i64 = terms.iter().zip(&counts).map(|((_, c), k)| c * k).sum();
        if expansion != own_count {
            return Ok(IndicatorOutcome::Counterexample { sample: sample.clone(), matroid: own_count, expansion });
        }
    }
    Ok(IndicatorOutcome::Ok { points: points.len() })
}

/// Number of bases, read off the rank table. Small `n` only.
pub fn basis_count(z: &CyclicFlatLattice) -> Result<u64> {
    let table = rank_table(z)?;
    let r = z.rank() as u32;
    Ok(table.iter().enumerate().filter(|(mask, &rk)| mask.count_ones() == r && u32::from(rk) == r).count() as u64)
}
