//! Exact polytope post-processing: dedup, affine dimension and vertex tests with certificates.
//!
//! Vertex tests solve a phase-1 simplex over exact rationals with Bland's rule. Every
//! decision carries a certificate that is re-verified by plain arithmetic.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::descriptor::MatroidDescriptor;
use crate::error::{Error, Result};
use crate::matrix::SparseIntMatrix;

/// Integer points with the matroids they came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    pub ambient_dim: usize,
    pub points: Vec<Vec<i64>>,
    pub labels: Vec<MatroidDescriptor>,
    /// Further matroids sharing each point, filled by [`dedup_points`].
    pub merged: Vec<Vec<MatroidDescriptor>>,
}

impl PointSet {
    pub fn new(ambient_dim: usize, points: Vec<Vec<i64>>, labels: Vec<MatroidDescriptor>) -> Result<Self> {
        if points.len() != labels.len() {
            return Err(Error::InvalidArguments("one label per point is required".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != ambient_dim) {
            return Err(Error::InvalidArguments(format!("point of length {} in dimension {ambient_dim}", p.len())));
        }
        let merged = vec![Vec::new(); points.len()];
        Ok(PointSet { ambient_dim, points, labels, merged })
    }

    /// The columns of a generating matrix.
    pub fn from_matrix(m: &SparseIntMatrix) -> Self {
        let labels = m.columns().iter().map(|c| c.descriptor.clone()).collect();
        PointSet::new(m.nrows(), m.dense_columns(), labels).expect("matrix columns are consistent")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Removes repeated points, keeping the first label and recording the others as merged.
pub fn dedup_points(ps: &PointSet) -> PointSet {
    let mut index: HashMap<&Vec<i64>, usize> = HashMap::new();
    let mut out = PointSet { ambient_dim: ps.ambient_dim, points: vec![], labels: vec![], merged: vec![] };
    for (i, p) in ps.points.iter().enumerate() {
        match index.get(p) {
            Some(&j) => {
                out.merged[j].push(ps.labels[i].clone());
                out.merged[j].extend(ps.merged[i].iter().cloned());
            }
            None => {
                index.insert(p, out.points.len());
                out.points.push(p.clone());
                out.labels.push(ps.labels[i].clone());
                out.merged.push(ps.merged[i].clone());
            }
        }
    }
    out
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        for r in rank + 1..a.len() {
            for k in c + 1..cols {
                let v = (&a[rank][c] * &a[r][k] - &a[r][c] * &a[rank][k]) / &prev;
                a[r][k] = v;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

/// Dimension of the affine hull.
pub fn affine_dimension(ps: &PointSet) -> Result<usize> {
    let Some(p0) = ps.points.first() else {
        return Err(Error::InvalidArguments("affine dimension of an empty set".into()));
    };
    let diffs: Vec<Vec<i64>> = ps.points[1..].iter().map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
    Ok(integer_rank(&diffs))
}

/// Dimension of the linear span.
pub fn linear_dimension(ps: &PointSet) -> usize {
    integer_rank(&ps.points)
}

/// Exact evidence for a vertex decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    /// `w . q + w0 <= 0` for every other point `q`, and `w . p + w0 > 0`. Entries are rationals as strings.
    Separating { w: Vec<String>, w0: String },
    /// `p = sum c_j q_j` with `c_j >= 0` summing to 1, as `(point index, coefficient)`.
    Combination { terms: Vec<(usize, String)> },
}

/// A vertex decision for one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDecision {
    pub index: usize,
    pub is_vertex: bool,
    pub certificate: Certificate,
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn parse_q(s: &str) -> Result<BigRational> {
    s.parse::<BigRational>().map_err(|_| Error::Parse(format!("bad rational {s:?}")))
}

/// Phase-1 simplex for `A x = b`, `x >= 0`. Returns `Ok(x)` if feasible, else `Err(y)`
/// with `y^T A <= 0` and `y^T b > 0`.
fn phase_one(a: &[Vec<BigRational>], b: &[BigRational]) -> std::result::Result<Vec<BigRational>, Vec<BigRational>> {
    let m = a.len();
    let k = a.first().map_or(0, Vec::len);
    let width = k + m;
    // rows scaled so that b >= 0
    let signs: Vec<BigRational> =
        b.iter().map(|v| if v.is_negative() { -BigRational::one() } else { BigRational::one() }).collect();
    let mut t: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigRational> = a[i].iter().map(|v| v * &signs[i]).collect();
            row.extend((0..m).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row.push(&b[i] * &signs[i]);
            row
        })
        .collect();
    let mut basis: Vec<usize> = (k..k + m).collect();
    // reduced costs of minimizing the sum of artificials; the last entry is minus the objective
    let mut rc: Vec<BigRational> = vec![BigRational::zero(); width + 1];
    for j in (0..k).chain(std::iter::once(width)) {
        rc[j] = -t.iter().map(|row| row[j].clone()).fold(BigRational::zero(), |s, v| s + v);
    }
    while let Some(enter) = (0..width).find(|&j| rc[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else { unreachable!("phase-1 objective is bounded below") };
        let piv = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v = &*v / &piv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *v -= &f * p;
                    }
                }
            }
        }
        let f = rc[enter].clone();
        for (v, p) in rc.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &f * p;
            }
        }
        basis[r] = enter;
    }
    if rc[width].is_zero() {
        let mut x = vec![BigRational::zero(); k];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < k {
                x[bv] = t[i][width].clone();
            }
        }
        Ok(x)
    } else {
        // artificial reduced cost is 1 - y_i in the scaled system
        Err((0..m).map(|i| (BigRational::one() - &rc[k + i]) * &signs[i]).collect())
    }
}

/// Groups coordinates and points into independent blocks by shared support.
///
/// Valid for point sets whose coordinates all sum to 1: a convex combination of a point
/// can then only use points of its own block.
fn blocks(ps: &PointSet) -> Vec<(Vec<usize>, Vec<usize>)> {
    let d = ps.ambient_dim;
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for p in &ps.points {
        let support: Vec<usize> = (0..d).filter(|&i| p[i] != 0).collect();
        for w in support.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut groups: HashMap<usize, (Vec<usize>, Vec<usize>)> = HashMap::new();
    for i in 0..d {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().0.push(i);
    }
    for (j, p) in ps.points.iter().enumerate() {
        let first = (0..d).find(|&i| p[i] != 0).expect("points summing to 1 are nonzero");
        let r = find(&mut parent, first);
        groups.get_mut(&r).expect("root exists").1.push(j);
    }
    let mut out: Vec<_> = groups.into_values().collect();
    out.sort();
    out
}

fn decide_in_block(ps: &PointSet, coords: &[usize], members: &[usize], idx: usize) -> VertexDecision {
    let others: Vec<usize> = members.iter().copied().filter(|&j| j != idx).collect();
    let mut a: Vec<Vec<BigRational>> =
        coords.iter().map(|&i| others.iter().map(|&j| q(ps.points[j][i])).collect()).collect();
    a.push(vec![BigRational::one(); others.len()]);
    let mut b: Vec<BigRational> = coords.iter().map(|&i| q(ps.points[idx][i])).collect();
    b.push(BigRational::one());
    match phase_one(&a, &b) {
        Ok(x) => {
            let terms = others.iter().zip(x).filter(|(_, c)| !c.is_zero()).map(|(&j, c)| (j, c.to_string())).collect();
            VertexDecision { index: idx, is_vertex: false, certificate: Certificate::Combination { terms } }
        }
        Err(y) => {
            let w0 = y[coords.len()].clone();
            // outside the block every point sums to 1 there, so a constant weight of -max(w0, 0) keeps them separated
            let outside = -(if w0.is_positive() { w0.clone() } else { BigRational::zero() });
            let mut w = vec![outside; ps.ambient_dim];
            for (c, &i) in coords.iter().enumerate() {
                w[i] = y[c].clone();
            }
            VertexDecision {
                index: idx,
                is_vertex: true,
                certificate: Certificate::Separating {
                    w: w.iter().map(|v| v.to_string()).collect(),
                    w0: w0.to_string(),
                },
            }
        }
    }
}

fn check_sums_to_one(ps: &PointSet) -> Result<()> {
    if ps.points.iter().any(|p| p.iter().sum::<i64>() != 1) {
        return Err(Error::InvalidArguments("vertex tests expect coordinates summing to 1".into()));
    }
    Ok(())
}

/// Decides whether point `idx` is a vertex of the convex hull, with a certificate.
pub fn vertex_decision(ps: &PointSet, idx: usize) -> Result<VertexDecision> {
    if idx >= ps.len() {
        return Err(Error::InvalidArguments(format!("point {idx} out of range")));
    }
    check_sums_to_one(ps)?;
    let (coords, members) = blocks(ps).into_iter().find(|(_, m)| m.contains(&idx)).expect("every point has a block");
    let d = decide_in_block(ps, &coords, &members, idx);
    verify_certificate(ps, &d)?;
    Ok(d)
}

pub fn is_vertex(ps: &PointSet, idx: usize) -> Result<bool> {
    vertex_decision(ps, idx).map(|d| d.is_vertex)
}

/// Decisions for every point, each verified. `parallel` spreads blocks over the rayon pool.
pub fn vertex_decisions(ps: &PointSet, parallel: bool) -> Result<Vec<VertexDecision>> {
    use rayon::prelude::*;
    check_sums_to_one(ps)?;
    let jobs: Vec<(Vec<usize>, Vec<usize>, usize)> = blocks(ps)
        .into_iter()
        .flat_map(|(c, m)| m.clone().into_iter().map(move |i| (c.clone(), m.clone(), i)))
        .collect();
    let run = |(c, m, i): &(Vec<usize>, Vec<usize>, usize)| {
        let d = decide_in_block(ps, c, m, *i);
        verify_certificate(ps, &d).map(|_| d)
    };
    let mut out: Vec<VertexDecision> = if parallel {
        jobs.par_iter().map(run).collect::<Result<_>>()?
    } else {
        jobs.iter().map(run).collect::<Result<_>>()?
    };
    out.sort_by_key(|d| d.index);
    Ok(out)
}

/// Re-checks a certificate against every point by direct arithmetic.
pub fn verify_certificate(ps: &PointSet, d: &VertexDecision) -> Result<()> {
    let fail = |why: &str| Err(Error::Unsupported(format!("certificate for point {} rejected: {why}", d.index)));
    let p = &ps.points[d.index];
    match (&d.certificate, d.is_vertex) {
        (Certificate::Separating { w, w0 }, true) => {
            let w: Vec<BigRational> = w.iter().map(|s| parse_q(s)).collect::<Result<_>>()?;
            let w0 = parse_q(w0)?;
            if w.len() != ps.ambient_dim {
                return fail("wrong length");
            }
            let value = |x: &[i64]| x.iter().zip(&w).fold(w0.clone(), |s, (&xi, wi)| s + q(xi) * wi);
            if !value(p).is_positive() {
                return fail("point not strictly separated");
            }
            for (j, other) in ps.points.iter().enumerate() {
                if j != d.index && value(other).is_positive() {
                    return fail("another point lies on the positive side");
                }
            }
            Ok(())
        }
        (Certificate::Combination { terms }, false) => {
            let mut sum = vec![BigRational::zero(); ps.ambient_dim];
            let mut total = BigRational::zero();
            for (j, c) in terms {
                let c = parse_q(c)?;
                if *j == d.index || *j >= ps.len() || c.is_negative() {
                    return fail("bad term");
                }
                for (s, &x) in sum.iter_mut().zip(&ps.points[*j]) {
                    *s += &c * q(x);
                }
                total += c;
            }
            if !total.is_one() || sum.iter().zip(p).any(|(s, &x)| *s != q(x)) {
                return fail("combination does not reproduce the point");
            }
            Ok(())
        }
        _ => fail("certificate kind does not match the decision"),
    }
}

/// Indices of the vertices of the convex hull.
pub fn vertices(ps: &PointSet, parallel: bool) -> Result<Vec<usize>> {
    Ok(vertex_decisions(ps, parallel)?.into_iter().filter(|d| d.is_vertex).map(|d| d.index).collect())
}

/// Descriptors of the extremal rank 2 matroids on `[n]`, i.e. those at vertices.
pub fn extremal_rank2(n: usize) -> Result<Vec<MatroidDescriptor>> {
    if n < 4 {
        return Err(Error::InvalidArguments(format!("n below supported range: {n} < 4")));
    }
    let ps = PointSet::from_matrix(&crate::rank2::build_o2(n)?);
    Ok(vertices(&ps, false)?.into_iter().map(|i| ps.labels[i].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::SchubertLabel;

    fn label(i: usize) -> MatroidDescriptor {
        MatroidDescriptor::Schubert { label: SchubertLabel::new(vec![1, 2 + i], 12).unwrap() }
    }

    fn points(pts: &[&[i64]]) -> PointSet {
        let d = pts[0].len();
        PointSet::new(d, pts.iter().map(|p| p.to_vec()).collect(), (0..pts.len()).map(label).collect()).unwrap()
    }

    #[test]
    fn bareiss_rank() {
        assert_eq!(integer_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(integer_rank(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]), 3);
        assert_eq!(integer_rank(&[]), 0);
    }

    #[test]
    fn affine_dimension_examples() {
        assert_eq!(affine_dimension(&points(&[&[1, 0]])).unwrap(), 0);
        assert_eq!(affine_dimension(&points(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap(), 2);
        let empty = PointSet::new(2, vec![], vec![]).unwrap();
        assert!(affine_dimension(&empty).is_err());
    }

    #[test]
    fn midpoint_is_not_a_vertex() {
        // (0, 2, -1) = 2 e_2 - e_3 sits outside the segment; (1/2, 1/2, 0) is not integral, so use a 2:1 split
        let ps = points(&[&[1, 0, 0], &[0, 0, 1], &[2, -1, 0], &[0, 1, 0]]);
        let ds = vertex_decisions(&ps, false).unwrap();
        let flags: Vec<bool> = ds.iter().map(|d| d.is_vertex).collect();
        // e_1 = (1/2)(2, -1, 0) + (1/2)(0, 1, 0)
        assert_eq!(flags, vec![false, true, true, true]);
        for d in &ds {
            verify_certificate(&ps, d).unwrap();
        }
    }

    #[test]
    fn forged_certificates_fail() {
        let ps = points(&[&[1, 0], &[0, 1]]);
        let mut d = vertex_decision(&ps, 0).unwrap();
        d.is_vertex = false;
        assert!(verify_certificate(&ps, &d).is_err());
        let bad = VertexDecision {
            index: 0,
            is_vertex: false,
            certificate: Certificate::Combination { terms: vec![(1, "1".into())] },
        };
        assert!(verify_certificate(&ps, &bad).is_err());
    }

    #[test]
    fn dedup_records_merges() {
        let ps = points(&[&[1, 0], &[0, 1], &[1, 0]]);
        let d = dedup_points(&ps);
        assert_eq!(d.len(), 2);
        assert_eq!(d.merged[0], vec![label(2)]);
        assert_eq!(dedup_points(&d), d);
    }

    #[test]
    fn blocks_split_by_support() {
        let ps = points(&[&[1, 0, 0], &[0, 2, -1], &[0, 0, 1]]);
        let b = blocks(&ps);
        assert_eq!(b.len(), 2);
        assert!(vertex_decisions(&ps, false).unwrap().iter().all(|d| d.is_vertex));
    }

    #[test]
    fn rejects_points_not_summing_to_one() {
        let ps = points(&[&[1, 1], &[0, 1]]);
        assert!(is_vertex(&ps, 0).is_err());
        assert!(is_vertex(&points(&[&[1, 0]]), 3).is_err());
    }
}
