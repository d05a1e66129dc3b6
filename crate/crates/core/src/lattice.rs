//! Integer lattice utilities: Hermite normal form, affine frames and lattice
//! reduction of facet functionals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::PolytopeError;

/// Row-style Hermite normal form: rows in echelon form, positive pivots, and
/// entries above each pivot reduced into `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteBasis {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

impl HermiteBasis {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Index of the lattice, projected onto its pivot columns, inside `Z^rank`.
    pub fn projected_index(&self) -> BigInt {
        self.rows.iter().zip(&self.pivots).map(|(r, &p)| r[p].clone()).product()
    }
}

pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> HermiteBasis {
    let mut a: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == a.len() {
            break;
        }
        loop {
            // move the smallest nonzero entry of this column into row r
            let best = (r..a.len()).filter(|&i| !a[i][col].is_zero()).min_by_key(|&i| a[i][col].abs());
            let Some(best) = best else { break };
            a.swap(r, best);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[r][col]);
                let pivot_row = a[r].clone();
                sub_scaled(&mut a[i], &pivot_row, &q);
                if !a[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][col].is_zero() {
            continue;
        }
        if a[r][col].is_negative() {
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
        }
        let pivot_row = a[r].clone();
        for row in a.iter_mut().take(r) {
            let q = row[col].div_floor(&pivot_row[col]);
            sub_scaled(row, &pivot_row, &q);
        }
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    HermiteBasis { rows: a, pivots }
}

fn sub_scaled(row: &mut [BigInt], other: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (x, y) in row.iter_mut().zip(other) {
        *x -= q * y;
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |g, v| g.gcd(v))
}

/// Divides a vector by the gcd of its entries.
pub fn make_primitive(v: &mut [BigInt]) {
    let g = gcd_all(v.iter());
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn to_i64(x: &BigInt) -> Result<i64, PolytopeError> {
    x.to_i64().ok_or(PolytopeError::Overflow)
}

/// Lattice distance to a facet: at dilation `delta`, a point `x` of the
/// affine lattice sits at distance `delta * constant - coefficients . x`.
/// The functional is zero on the facet, positive inside, and takes every
/// integer value on the lattice of the cone over the polytope.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ReducedEquation {
    pub coefficients: Vec<i64>,
    pub constant: i64,
}

impl ReducedEquation {
    pub fn distance(&self, x: &[i64], delta: i64) -> i64 {
        delta * self.constant - self.coefficients.iter().zip(x).map(|(a, b)| a * b).sum::<i64>()
    }
}

/// Coordinates on the affine hull of a lattice point set.
///
/// The difference lattice `L` (integer span of `p - p0`) is kept in Hermite
/// normal form. Its pivot columns are coordinates on the affine hull:
/// projecting onto them is injective there.
#[derive(Clone, Debug)]
pub struct AffineFrame {
    pub origin: Vec<BigInt>,
    pub lattice: HermiteBasis,
    /// Indices (into the input) of `dim + 1` affinely independent points; the
    /// first is the origin.
    pub simplex: Vec<usize>,
    points: Vec<Vec<BigInt>>,
}

impl AffineFrame {
    pub fn new(points: &[Vec<BigInt>]) -> Result<Self, PolytopeError> {
        let origin = points.first().ok_or_else(|| PolytopeError::Degenerate("no points".into()))?.clone();
        if points.iter().any(|p| p.len() != origin.len()) {
            return Err(PolytopeError::DimensionMismatch);
        }
        let diffs: Vec<Vec<BigInt>> =
            points.iter().map(|p| p.iter().zip(&origin).map(|(a, b)| a - b).collect()).collect();
        let lattice = hermite_normal_form(&diffs);

        let mut simplex = vec![0];
        let mut chosen: Vec<Vec<BigInt>> = Vec::new();
        for (i, d) in diffs.iter().enumerate().skip(1) {
            if simplex.len() == lattice.rank() + 1 {
                break;
            }
            chosen.push(d.clone());
            if hermite_normal_form(&chosen).rank() == chosen.len() {
                simplex.push(i);
            } else {
                chosen.pop();
            }
        }
        Ok(AffineFrame { origin, lattice, simplex, points: points.to_vec() })
    }

    pub fn dim(&self) -> usize {
        self.lattice.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.origin.len()
    }

    /// Whether `x` lies in the affine lattice `delta * origin + L`.
    pub fn contains(&self, x: &[i64], delta: i64) -> bool {
        let mut rest: Vec<BigInt> = x.iter().zip(&self.origin).map(|(a, b)| BigInt::from(*a) - b * delta).collect();
        for (row, &p) in self.lattice.rows.iter().zip(&self.lattice.pivots) {
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return false;
            }
            sub_scaled(&mut rest, row, &q);
        }
        rest.iter().all(Zero::is_zero)
    }

    pub fn project(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.lattice.pivots.iter().map(|&c| x[c].clone()).collect()
    }

    /// Lattice-reduced form of the inequality `normal . x <= delta * offset`
    /// on the cone over the point set.
    ///
    /// The cone functional `(delta, x) -> delta * offset - normal . x` is
    /// rewritten in the coordinates `(delta, pivot coordinates)` by
    /// interpolation on the simplex points, then divided by the gcd of its
    /// values on a basis of the cone lattice.
    pub fn reduce(&self, normal: &[BigInt], offset: &BigInt) -> Result<ReducedEquation, PolytopeError> {
        let d = self.dim();
        let n = d + 1;
        // rows [1, -y_k | f_k] for the unknowns (c0, a)
        let mut m: Vec<Vec<BigRational>> = self
            .simplex
            .iter()
            .map(|&k| {
                let p = &self.points[k];
                let y = self.project(p);
                let f = offset - dot(normal, p);
                let mut row = Vec::with_capacity(n + 1);
                row.push(BigRational::one());
                row.extend(y.into_iter().map(|v| BigRational::from_integer(-v)));
                row.push(BigRational::from_integer(f));
                row
            })
            .collect();
        let solution = solve(&mut m, n).ok_or_else(|| PolytopeError::Degenerate("simplex is singular".into()))?;

        let mut values = vec![offset - dot(normal, &self.origin)];
        values.extend(self.lattice.rows.iter().map(|b| -dot(normal, b)));
        let g = gcd_all(values.iter());
        if g.is_zero() {
            return Err(PolytopeError::Degenerate("functional vanishes on the affine hull".into()));
        }
        let g = BigRational::from_integer(g);
        let mut scaled = Vec::with_capacity(n);
        for s in &solution {
            let v = s / &g;
            if !v.is_integer() {
                return Err(PolytopeError::UnsaturatedLattice(self.lattice.projected_index().to_string()));
            }
            scaled.push(v.to_integer());
        }
        let constant = to_i64(&scaled[0])?;
        let mut coefficients = vec![0i64; self.ambient_dim()];
        for (j, &col) in self.lattice.pivots.iter().enumerate() {
            coefficients[col] = to_i64(&scaled[j + 1])?;
        }
        Ok(ReducedEquation { coefficients, constant })
    }
}

/// Gauss-Jordan on an augmented `n x (n+1)` system.
fn solve(m: &mut [Vec<BigRational>], n: usize) -> Option<Vec<BigRational>> {
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.iter().map(|row| row[n].clone()).collect())
}

/// Inverse of a square rational matrix.
pub(crate) fn invert(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}
