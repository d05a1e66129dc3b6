//! Exact facet enumeration for lattice polytopes by double description.
//!
//! The polytope is projected onto the pivot coordinates of its affine frame,
//! where it is full-dimensional. Facets are the extreme rays of the polar
//! cone `{z : z . (1, y_i) >= 0}`, enumerated with integer rays and a
//! combinatorial adjacency test.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::PolytopeError;
use crate::lattice::{dot, invert, make_primitive, AffineFrame};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
    fn subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    z: Vec<BigInt>,
    tight: Bits,
}

/// A facet `normal . x <= offset` in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullFacet {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
}

/// Facets of the convex hull of `points`, together with its affine frame.
/// Fails on a single point, where there are no facets to speak of.
pub fn hull_facets(points: &[Vec<BigInt>]) -> Result<(AffineFrame, Vec<HullFacet>), PolytopeError> {
    let frame = AffineFrame::new(points)?;
    let d = frame.dim();
    if d == 0 {
        return Err(PolytopeError::Degenerate("the hull is a single point".into()));
    }
    let rows: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let mut r = vec![BigInt::from(1)];
            r.extend(frame.project(p));
            r
        })
        .collect();
    let n = rows.len();

    let seed: Vec<Vec<BigRational>> = frame
        .simplex
        .iter()
        .map(|&i| rows[i].iter().cloned().map(BigRational::from_integer).collect())
        .collect();
    let inv = invert(&seed).ok_or_else(|| PolytopeError::Degenerate("seed simplex is singular".into()))?;
    let mut rays: Vec<Ray> = (0..=d)
        .map(|j| {
            let col: Vec<BigRational> = inv.iter().map(|row| row[j].clone()).collect();
            let lcm = col.iter().fold(BigInt::from(1), |l, c| num_integer::Integer::lcm(&l, c.denom()));
            let mut z: Vec<BigInt> = col.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
            make_primitive(&mut z);
            let mut tight = Bits::new(n);
            for (k, &i) in frame.simplex.iter().enumerate() {
                if k != j {
                    tight.set(i);
                }
            }
            Ray { z, tight }
        })
        .collect();

    let mut seen = vec![false; n];
    for &i in &frame.simplex {
        seen[i] = true;
    }
    for i in 0..n {
        if seen[i] {
            continue;
        }
        seen[i] = true;
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(&r.z, &rows[i])).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        if neg.is_empty() {
            for (k, r) in rays.iter_mut().enumerate() {
                if vals[k].is_zero() {
                    r.tight.set(i);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let mut created = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].tight.and(&rays[q].tight);
                if (common.count() as usize) + 2 < d + 1 {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !common.subset_of(&r.tight));
                if !adjacent {
                    continue;
                }
                let mut z: Vec<BigInt> =
                    rays[q].z.iter().zip(&rays[p].z).map(|(a, b)| &vals[p] * a - &vals[q] * b).collect();
                make_primitive(&mut z);
                let mut tight = common;
                tight.set(i);
                created.push(Ray { z, tight });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            if vals[k].is_negative() {
                continue;
            }
            if vals[k].is_zero() {
                r.tight.set(i);
            }
            next.push(r);
        }
        next.extend(created);
        rays = next;
    }

    let mut facets: Vec<HullFacet> = rays
        .into_iter()
        .map(|r| {
            let mut normal = vec![BigInt::zero(); frame.ambient_dim()];
            for (j, &c) in frame.lattice.pivots.iter().enumerate() {
                normal[c] = -r.z[j + 1].clone();
            }
            HullFacet { normal, offset: r.z[0].clone() }
        })
        .collect();
    facets.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));
    facets.dedup();
    Ok((frame, facets))
}
