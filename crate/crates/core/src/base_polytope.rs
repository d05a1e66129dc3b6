//! Base polytopes of graphic matroids: vertices, facets with lattice-reduced
//! equations, lattice points of dilations, and a Gorenstein oracle that works
//! from the vertex description alone.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{GraphError, PolytopeError};
use crate::graphic_matroid::{deletable_edges, good_flats};
use crate::hull::hull_facets;
use crate::lattice::{to_big, to_i64, AffineFrame, ReducedEquation};
use crate::multigraph::{EdgeId, Multigraph, VertexSubset};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FacetKind {
    NonNegativity { edge: EdgeId },
    GoodFlatBound { subset: VertexSubset },
    Hull,
}

/// A facet `normal . x <= delta * offset` of the dilation `delta * P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetInequality {
    pub kind: FacetKind,
    pub normal: Vec<i64>,
    pub offset: i64,
    pub reduced: ReducedEquation,
}

impl FacetInequality {
    pub fn holds(&self, x: &[i64], delta: i64) -> bool {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() <= delta * self.offset
    }

    /// Lattice distance of `x` from this facet of `delta * P`.
    pub fn distance(&self, x: &[i64], delta: i64) -> i64 {
        self.reduced.distance(x, delta)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GorensteinPoint {
    pub delta: i64,
    pub coordinates: Vec<i64>,
}

/// Coordinates are indexed by the edge order of the source graph.
#[derive(Clone, Debug, Serialize)]
pub struct BasePolytope {
    pub ambient_dim: usize,
    pub rank: usize,
    pub edges: Vec<EdgeId>,
    pub vertices: Vec<Vec<i64>>,
    pub facets: Vec<FacetInequality>,
    #[serde(skip)]
    frame: AffineFrame,
}

fn tree_vectors(g: &Multigraph) -> Result<Vec<Vec<i64>>, PolytopeError> {
    let trees = g.spanning_trees()?;
    let mut out = Vec::with_capacity(trees.len());
    for t in trees {
        let mut x = vec![0i64; g.edge_count()];
        for id in t {
            x[g.edge_index(id)?] = 1;
        }
        out.push(x);
    }
    Ok(out)
}

fn reduce(frame: &AffineFrame, normal: &[i64], offset: i64) -> Result<ReducedEquation, PolytopeError> {
    frame.reduce(&to_big(normal), &BigInt::from(offset))
}

/// Facets of the convex hull of `vertices`, each with its reduced equation.
pub fn hull_facets_oracle(vertices: &[Vec<i64>]) -> Result<Vec<FacetInequality>, PolytopeError> {
    let points: Vec<Vec<BigInt>> = vertices.iter().map(|v| to_big(v)).collect();
    let (frame, facets) = hull_facets(&points)?;
    facets_from_hull(&frame, facets)
}

fn facets_from_hull(
    frame: &AffineFrame,
    facets: Vec<crate::hull::HullFacet>,
) -> Result<Vec<FacetInequality>, PolytopeError> {
    facets
        .into_iter()
        .map(|f| {
            let normal = f.normal.iter().map(to_i64).collect::<Result<Vec<_>, _>>()?;
            let offset = to_i64(&f.offset)?;
            let reduced = frame.reduce(&f.normal, &f.offset)?;
            Ok(FacetInequality { kind: FacetKind::Hull, normal, offset, reduced })
        })
        .collect()
}

impl BasePolytope {
    fn vertices_only(g: &Multigraph) -> Result<(Vec<Vec<i64>>, AffineFrame), PolytopeError> {
        if !g.is_two_connected() {
            return Err(GraphError::NotTwoConnected.into());
        }
        let vertices = tree_vectors(g)?;
        let frame = AffineFrame::new(&vertices.iter().map(|v| to_big(v)).collect::<Vec<_>>())?;
        Ok((vertices, frame))
    }

    fn assemble(g: &Multigraph, vertices: Vec<Vec<i64>>, frame: AffineFrame, facets: Vec<FacetInequality>) -> Self {
        BasePolytope {
            ambient_dim: g.edge_count(),
            rank: g.vertex_count() - 1,
            edges: g.edge_ids(),
            vertices,
            facets,
            frame,
        }
    }

    /// Facets read off the graph: non-negativity for deletable edges and one
    /// bound per good flat.
    pub fn build(g: &Multigraph) -> Result<Self, PolytopeError> {
        let (vertices, frame) = Self::vertices_only(g)?;
        let mut facets = Vec::new();
        for id in deletable_edges(g)? {
            let mut normal = vec![0i64; g.edge_count()];
            normal[g.edge_index(id)?] = -1;
            let reduced = reduce(&frame, &normal, 0)?;
            facets.push(FacetInequality { kind: FacetKind::NonNegativity { edge: id }, normal, offset: 0, reduced });
        }
        for flat in good_flats(g)? {
            let mut normal = vec![0i64; g.edge_count()];
            for &id in &flat.induced_edge_ids {
                normal[g.edge_index(id)?] = 1;
            }
            let offset = flat.subset.len() as i64 - 1;
            let reduced = reduce(&frame, &normal, offset)?;
            facets.push(FacetInequality { kind: FacetKind::GoodFlatBound { subset: flat.subset }, normal, offset, reduced });
        }
        Ok(Self::assemble(g, vertices, frame, facets))
    }

    /// Facets computed by convex hull of the spanning-tree vectors, without
    /// consulting the graph structure. A point polytope has no facets.
    pub fn from_hull(g: &Multigraph) -> Result<Self, PolytopeError> {
        let (vertices, frame) = Self::vertices_only(g)?;
        if frame.dim() == 0 {
            return Ok(Self::assemble(g, vertices, frame, Vec::new()));
        }
        let points: Vec<Vec<BigInt>> = vertices.iter().map(|v| to_big(v)).collect();
        let (_, raw) = hull_facets(&points)?;
        let facets = facets_from_hull(&frame, raw)?;
        Ok(Self::assemble(g, vertices, frame, facets))
    }

    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// Reduced equations of all facets; two descriptions of the same polytope
    /// give equal sets.
    pub fn reduced_facet_set(&self) -> BTreeSet<ReducedEquation> {
        self.facets.iter().map(|f| f.reduced.clone()).collect()
    }

    pub fn tight_vertices(&self, facet: &FacetInequality) -> Vec<&[i64]> {
        self.vertices.iter().filter(|v| facet.distance(v, 1) == 0).map(Vec::as_slice).collect()
    }

    /// All lattice points of `delta * P`.
    pub fn lattice_points(&self, delta: i64) -> Vec<Vec<i64>> {
        let bounds: Vec<(Vec<i64>, i64)> = self.facets.iter().map(|f| (f.normal.clone(), delta * f.offset)).collect();
        let mut out = Vec::new();
        self.enumerate(delta, &bounds, &[], &mut |x| out.push(x.to_vec()));
        out
    }

    /// Lattice points of `delta * P` at distance exactly one from every facet.
    pub fn gorenstein_points(&self, delta: i64) -> Vec<Vec<i64>> {
        if self.facets.is_empty() {
            return Vec::new();
        }
        let bounds: Vec<(Vec<i64>, i64)> = self.facets.iter().map(|f| (f.normal.clone(), delta * f.offset)).collect();
        let exact: Vec<(Vec<i64>, i64)> =
            self.facets.iter().map(|f| (f.reduced.coefficients.clone(), delta * f.reduced.constant - 1)).collect();
        let mut out = Vec::new();
        self.enumerate(delta, &bounds, &exact, &mut |x| out.push(x.to_vec()));
        out
    }

    /// Coordinate recursion over `x >= 0` with `sum x = delta * rank`.
    /// `upper` holds constraints `a . x <= b`, `equal` holds `a . x = b`; both
    /// are pruned using the range of the remaining contribution.
    fn enumerate(&self, delta: i64, upper: &[(Vec<i64>, i64)], equal: &[(Vec<i64>, i64)], emit: &mut dyn FnMut(&[i64])) {
        let m = self.ambient_dim;
        let total = delta * self.rank as i64;
        if m == 0 {
            if total == 0 {
                emit(&[]);
            }
            return;
        }
        let suffix = |rows: &[(Vec<i64>, i64)]| -> Vec<Vec<(i64, i64)>> {
            rows.iter()
                .map(|(a, _)| {
                    let mut s = vec![(i64::MAX, i64::MIN); m + 1];
                    for i in (0..m).rev() {
                        s[i] = (s[i + 1].0.min(a[i]), s[i + 1].1.max(a[i]));
                    }
                    s
                })
                .collect()
        };
        let search = Search {
            m,
            upper,
            equal,
            upper_suffix: suffix(upper),
            equal_suffix: suffix(equal),
            frame: &self.frame,
            delta,
        };
        let mut x = vec![0i64; m];
        let mut pu = vec![0i64; upper.len()];
        let mut pe = vec![0i64; equal.len()];
        search.recurse(0, total, &mut x, &mut pu, &mut pe, emit);
    }
}

struct Search<'a> {
    m: usize,
    upper: &'a [(Vec<i64>, i64)],
    equal: &'a [(Vec<i64>, i64)],
    upper_suffix: Vec<Vec<(i64, i64)>>,
    equal_suffix: Vec<Vec<(i64, i64)>>,
    frame: &'a AffineFrame,
    delta: i64,
}

impl Search<'_> {
    fn feasible(&self, i: usize, rest: i64, pu: &[i64], pe: &[i64]) -> bool {
        if i == self.m {
            return rest == 0
                && self.upper.iter().zip(pu).all(|((_, b), p)| p <= b)
                && self.equal.iter().zip(pe).all(|((_, b), p)| p == b);
        }
        let upper_ok = self
            .upper
            .iter()
            .zip(pu)
            .zip(&self.upper_suffix)
            .all(|(((_, b), p), s)| p + rest * s[i].0 <= *b);
        upper_ok
            && self.equal.iter().zip(pe).zip(&self.equal_suffix).all(|(((_, b), p), s)| {
                p + rest * s[i].0 <= *b && p + rest * s[i].1 >= *b
            })
    }

    fn recurse(&self, i: usize, rest: i64, x: &mut [i64], pu: &mut [i64], pe: &mut [i64], emit: &mut dyn FnMut(&[i64])) {
        if !self.feasible(i, rest, pu, pe) {
            return;
        }
        if i == self.m {
            if self.frame.contains(x, self.delta) {
                emit(x);
            }
            return;
        }
        let range = if i + 1 == self.m { rest..=rest } else { 0..=rest };
        for v in range {
            x[i] = v;
            for (p, (a, _)) in pu.iter_mut().zip(self.upper) {
                *p += a[i] * v;
            }
            for (p, (a, _)) in pe.iter_mut().zip(self.equal) {
                *p += a[i] * v;
            }
            self.recurse(i + 1, rest - v, x, pu, pe, emit);
            for (p, (a, _)) in pu.iter_mut().zip(self.upper) {
                *p -= a[i] * v;
            }
            for (p, (a, _)) in pe.iter_mut().zip(self.equal) {
                *p -= a[i] * v;
            }
        }
        x[i] = 0;
    }
}

pub fn build_polytope(g: &Multigraph) -> Result<BasePolytope, PolytopeError> {
    BasePolytope::build(g)
}

/// Default upper end of the dilation scan.
pub fn default_delta_bound(g: &Multigraph) -> i64 {
    g.edge_count().max(3) as i64 + 1
}

/// Every dilation in `2..=delta_max` at which the hull-derived polytope has
/// a lattice point at distance one from all facets.
pub fn gorenstein_scan(g: &Multigraph, delta_max: i64) -> Result<Vec<GorensteinPoint>, PolytopeError> {
    let p = BasePolytope::from_hull(g)?;
    let mut hits = Vec::new();
    if p.dim() == 0 {
        return Ok(hits);
    }
    for delta in 2..=delta_max {
        for coordinates in p.gorenstein_points(delta) {
            hits.push(GorensteinPoint { delta, coordinates });
        }
    }
    Ok(hits)
}

/// The first Gorenstein point found scanning `delta = 2..=delta_max`.
///
/// Facets come from the convex hull of the spanning-tree vectors, so this
/// decides the Gorenstein property independently of the graph criteria.
/// A point polytope (a single edge) is reported as not Gorenstein.
pub fn gorenstein_oracle(g: &Multigraph, delta_max: i64) -> Result<Option<GorensteinPoint>, PolytopeError> {
    let p = BasePolytope::from_hull(g)?;
    if p.dim() == 0 {
        return Ok(None);
    }
    for delta in 2..=delta_max {
        if let Some(coordinates) = p.gorenstein_points(delta).into_iter().next() {
            return Ok(Some(GorensteinPoint { delta, coordinates }));
        }
    }
    Ok(None)
}

/// Whether `P` itself has no lattice point at positive distance from every
/// facet, i.e. the Gorenstein index cannot be one.
pub fn never_delta_one(g: &Multigraph) -> Result<bool, PolytopeError> {
    let p = BasePolytope::from_hull(g)?;
    if p.dim() == 0 {
        return Ok(true);
    }
    Ok(p.lattice_points(1).iter().all(|x| p.facets.iter().any(|f| f.distance(x, 1) < 1)))
}
