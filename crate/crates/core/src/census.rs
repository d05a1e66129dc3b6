//! Isomorphism-free enumeration of small 2-connected multigraphs and the
//! harnesses that compare the Gorenstein criteria and the decomposition
//! search over them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::base_polytope::{gorenstein_scan, BasePolytope};
use crate::canonical::{canonical_form, CanonicalForm};
use crate::constructions::{decompose, ConstructionTrace};
use crate::gorenstein_check::{check_heart, check_spade, is_gorenstein, weight_function};
use crate::multigraph::Multigraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CensusBounds {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_multiplicity: usize,
}

impl Default for CensusBounds {
    fn default() -> Self {
        CensusBounds { max_vertices: 6, max_edges: 10, max_multiplicity: 5 }
    }
}

impl CensusBounds {
    pub fn new(max_vertices: usize, max_edges: usize, max_multiplicity: usize) -> Self {
        CensusBounds { max_vertices, max_edges, max_multiplicity }
    }
}

/// Every 2-connected multigraph within `bounds`, once per isomorphism class,
/// ordered by canonical form.
///
/// Graphs on each vertex count are grown one edge at a time from the empty
/// graph, deduplicating every generation by canonical form.
pub fn enumerate(bounds: CensusBounds) -> Vec<Multigraph> {
    let mut found: BTreeSet<CanonicalForm> = BTreeSet::new();
    for n in 2..=bounds.max_vertices.min(bounds.max_edges + 1) {
        let mut level: BTreeSet<CanonicalForm> = BTreeSet::new();
        level.insert(canonical_form(&Multigraph::empty(n)));
        for _ in 0..bounds.max_edges {
            let mut next = BTreeSet::new();
            for form in &level {
                for a in 0..n {
                    for b in a + 1..n {
                        if (form.multiplicity(a, b) as usize) < bounds.max_multiplicity {
                            let mut g = form.to_graph();
                            g.add_edge(a, b).expect("distinct vertices in range");
                            next.insert(canonical_form(&g));
                        }
                    }
                }
            }
            found.extend(next.iter().filter(|f| f.to_graph().is_two_connected()).cloned());
            level = next;
        }
    }
    found.into_iter().map(|f| f.to_graph()).collect()
}

/// Slow reference enumeration: every multiplicity matrix within bounds,
/// filtered and deduplicated.
pub fn enumerate_naive(bounds: CensusBounds) -> Vec<Multigraph> {
    let mut found = BTreeSet::new();
    for n in 2..=bounds.max_vertices {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let mut counts = vec![0usize; pairs.len()];
        loop {
            let total: usize = counts.iter().sum();
            if total > 0 && total <= bounds.max_edges {
                let mut g = Multigraph::empty(n);
                for (&(a, b), &k) in pairs.iter().zip(&counts) {
                    for _ in 0..k {
                        g.add_edge(a, b).expect("distinct vertices in range");
                    }
                }
                if g.is_two_connected() {
                    found.insert(canonical_form(&g));
                }
            }
            // odometer over multiplicities
            let mut i = 0;
            while i < counts.len() {
                counts[i] += 1;
                if counts[i] <= bounds.max_multiplicity {
                    break;
                }
                counts[i] = 0;
                i += 1;
            }
            if i == counts.len() {
                break;
            }
        }
    }
    found.into_iter().map(|f| f.to_graph()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    pub canonical: String,
    pub delta: i64,
    pub trace: Option<ConstructionTrace>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub bounds: CensusBounds,
    pub total: usize,
    pub gorenstein: Vec<CensusEntry>,
    pub mismatches: Vec<String>,
}

/// Census with the Gorenstein index of each graph and a construction trace
/// for it.
pub fn census_report(bounds: CensusBounds) -> CensusReport {
    let graphs = enumerate(bounds);
    let rows: Vec<(Option<CensusEntry>, Option<String>)> = graphs
        .par_iter()
        .map(|g| {
            let key = canonical_form(g).key();
            let Some(w) = is_gorenstein(g) else { return (None, None) };
            let trace = decompose(g, w.delta);
            let problem = match &trace {
                None => Some(format!("{key}: Gorenstein at delta {} but no construction found", w.delta)),
                Some(t) => match t.replay() {
                    Ok(h) if canonical_form(&h) == canonical_form(g) => None,
                    _ => Some(format!("{key}: trace does not replay to the graph")),
                },
            };
            (Some(CensusEntry { canonical: key, delta: w.delta, trace }), problem)
        })
        .collect();
    let mut report = CensusReport { bounds, total: graphs.len(), gorenstein: Vec::new(), mismatches: Vec::new() };
    for (entry, problem) in rows {
        report.gorenstein.extend(entry);
        report.mismatches.extend(problem);
    }
    report
}

impl CensusReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let b = self.bounds;
        let _ = writeln!(
            out,
            "census n<={} m<={} mult<={}: {} graphs, {} Gorenstein",
            b.max_vertices,
            b.max_edges,
            b.max_multiplicity,
            self.total,
            self.gorenstein.len()
        );
        let _ = writeln!(out, "{:>5}  {:>5}  canonical", "delta", "steps");
        for e in &self.gorenstein {
            let steps = e.trace.as_ref().map_or("-".to_string(), |t| t.total_steps().to_string());
            let _ = writeln!(out, "{:>5}  {:>5}  {}", e.delta, steps, e.canonical);
        }
        write_mismatches(&mut out, &self.mismatches);
        out
    }
}

fn write_mismatches(out: &mut String, mismatches: &[String]) {
    let _ = writeln!(out, "mismatches: {}", mismatches.len());
    for m in mismatches {
        let _ = writeln!(out, "  {m}");
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub bounds: CensusBounds,
    pub graphs: usize,
    pub checks: usize,
    /// Graphs that are Gorenstein, by Gorenstein index.
    pub gorenstein_by_delta: BTreeMap<i64, usize>,
    /// Graphs with an edge that is neither deletable nor contractible.
    pub neither_cases: usize,
    pub mismatches: Vec<String>,
}

/// Compares, for every census graph and every `delta` in `2..=|E|+1`, the
/// good-flat equations, the 2-connected-subset equations and the polyhedral
/// oracle. Where the oracle finds a Gorenstein point it must equal the weight
/// function.
pub fn verify_equivalence(bounds: CensusBounds) -> EquivalenceReport {
    verify_equivalence_on(bounds, &enumerate(bounds))
}

pub fn verify_equivalence_on(bounds: CensusBounds, graphs: &[Multigraph]) -> EquivalenceReport {
    struct Row {
        checks: usize,
        delta: Option<i64>,
        neither: bool,
        mismatches: Vec<String>,
    }
    let rows: Vec<Row> = graphs
        .par_iter()
        .map(|g| {
            let key = canonical_form(g).key();
            let top = g.edge_count() as i64 + 1;
            let mut row = Row { checks: 0, delta: None, neither: false, mismatches: Vec::new() };
            let hits = match gorenstein_scan(g, top) {
                Ok(h) => h,
                Err(e) => {
                    row.mismatches.push(format!("{key}: oracle failed: {e}"));
                    return row;
                }
            };
            if hits.len() > 1 {
                row.mismatches.push(format!("{key}: oracle found {} Gorenstein points", hits.len()));
            }
            for delta in 2..=top {
                row.checks += 1;
                let w = weight_function(g, delta);
                row.neither |= w.is_none() && g.edge_count() >= 2;
                let spade = w.as_ref().is_some_and(|w| check_spade(g, w));
                let heart = w.as_ref().is_some_and(|w| check_heart(g, w));
                let point = hits.iter().find(|h| h.delta == delta);
                if spade != heart || spade != point.is_some() {
                    row.mismatches.push(format!(
                        "{key} at delta {delta}: spade {spade}, heart {heart}, oracle {}",
                        point.is_some()
                    ));
                }
                if let (Some(w), Some(p)) = (&w, point) {
                    let weights: Vec<i64> = g.edges().iter().map(|e| w.get(e.id).unwrap_or(0)).collect();
                    if weights != p.coordinates {
                        row.mismatches.push(format!(
                            "{key} at delta {delta}: Gorenstein point {:?} differs from weights {weights:?}",
                            p.coordinates
                        ));
                    }
                }
            }
            let decided = is_gorenstein(g).map(|w| w.delta);
            let expected = hits.first().map(|h| h.delta);
            if decided != expected {
                row.mismatches.push(format!("{key}: decision procedure gives {decided:?}, oracle {expected:?}"));
            }
            row.delta = expected;
            row
        })
        .collect();
    let mut report = EquivalenceReport {
        bounds,
        graphs: graphs.len(),
        checks: 0,
        gorenstein_by_delta: BTreeMap::new(),
        neither_cases: 0,
        mismatches: Vec::new(),
    };
    for row in rows {
        report.checks += row.checks;
        if let Some(d) = row.delta {
            *report.gorenstein_by_delta.entry(d).or_default() += 1;
        }
        report.neither_cases += row.neither as usize;
        report.mismatches.extend(row.mismatches);
    }
    if report.neither_cases > 0 {
        log::info!("{} census graphs have an edge that is neither deletable nor contractible", report.neither_cases);
    }
    report
}

impl EquivalenceReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "equivalence: {} graphs, {} (graph, delta) checks", self.graphs, self.checks);
        for (d, k) in &self.gorenstein_by_delta {
            let _ = writeln!(out, "  delta {d:>2}: {k} Gorenstein graphs");
        }
        let _ = writeln!(out, "  graphs with a neither-case edge: {}", self.neither_cases);
        write_mismatches(&mut out, &self.mismatches);
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub delta: i64,
    pub bounds: CensusBounds,
    pub graphs: usize,
    pub satisfying: usize,
    pub traces: usize,
    pub mismatches: Vec<String>,
}

/// For every census graph: the good-flat equations hold at `delta` exactly
/// when the decomposition search finds a construction, and every
/// construction found replays to the graph.
pub fn verify_classification(delta: i64, bounds: CensusBounds) -> ClassificationReport {
    verify_classification_on(delta, bounds, &enumerate(bounds))
}

pub fn verify_classification_on(delta: i64, bounds: CensusBounds, graphs: &[Multigraph]) -> ClassificationReport {
    let rows: Vec<(bool, bool, Vec<String>)> = graphs
        .par_iter()
        .map(|g| {
            let form = canonical_form(g);
            let key = form.key();
            let mut problems = Vec::new();
            let spade = weight_function(g, delta).is_some_and(|w| check_spade(g, &w));
            let trace = decompose(g, delta);
            if let Some(t) = &trace {
                match t.replay() {
                    Ok(h) if canonical_form(&h) == form => {}
                    Ok(_) => problems.push(format!("{key}: trace replays to a different graph")),
                    Err(e) => problems.push(format!("{key}: trace does not replay: {e}")),
                }
            }
            if spade != trace.is_some() {
                problems.push(format!("{key} at delta {delta}: equations {spade}, construction {}", trace.is_some()));
            }
            if delta == 2 && spade && g.has_parallel_edges() && !(g.vertex_count() == 2 && g.edge_count() == 2) {
                problems.push(format!("{key}: Gorenstein at delta 2 with parallel edges but not C_2"));
            }
            (spade, trace.is_some(), problems)
        })
        .collect();
    let mut report =
        ClassificationReport { delta, bounds, graphs: graphs.len(), satisfying: 0, traces: 0, mismatches: Vec::new() };
    for (s, t, p) in rows {
        report.satisfying += s as usize;
        report.traces += t as usize;
        report.mismatches.extend(p);
    }
    report
}

impl ClassificationReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "classification at delta {}: {} graphs, {} satisfy the equations, {} constructed",
            self.delta, self.graphs, self.satisfying, self.traces
        );
        write_mismatches(&mut out, &self.mismatches);
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FacetReport {
    pub bounds: CensusBounds,
    pub graphs: usize,
    pub facets: usize,
    pub mismatches: Vec<String>,
}

/// Compares the facets read off the graph with the convex-hull facets for
/// every census graph.
pub fn verify_facets(bounds: CensusBounds) -> FacetReport {
    verify_facets_on(bounds, &enumerate(bounds))
}

pub fn verify_facets_on(bounds: CensusBounds, graphs: &[Multigraph]) -> FacetReport {
    let rows: Vec<(usize, Option<String>)> = graphs
        .par_iter()
        .map(|g| {
            let key = canonical_form(g).key();
            match (BasePolytope::build(g), BasePolytope::from_hull(g)) {
                (Ok(a), Ok(b)) if a.reduced_facet_set() == b.reduced_facet_set() && a.facets.len() == b.facets.len() => {
                    (a.facets.len(), None)
                }
                (Ok(a), Ok(b)) => (
                    0,
                    Some(format!("{key}: {} facets from the graph, {} from the hull", a.facets.len(), b.facets.len())),
                ),
                (Err(e), _) | (_, Err(e)) => (0, Some(format!("{key}: {e}"))),
            }
        })
        .collect();
    let mut report = FacetReport { bounds, graphs: graphs.len(), facets: 0, mismatches: Vec::new() };
    for (k, p) in rows {
        report.facets += k;
        report.mismatches.extend(p);
    }
    report
}

impl FacetReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "facets: {} graphs, {} facets compared", self.graphs, self.facets);
        write_mismatches(&mut out, &self.mismatches);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forms(gs: &[Multigraph]) -> BTreeSet<CanonicalForm> {
        gs.iter().map(canonical_form).collect()
    }

    #[test]
    fn two_vertex_census() {
        let gs = enumerate(CensusBounds::new(2, 5, 5));
        assert_eq!(gs.len(), 5);
        assert_eq!(forms(&gs), forms(&(1..=5).map(Multigraph::bond).collect::<Vec<_>>()));
    }

    #[test]
    fn small_simple_censuses() {
        // K_2 counts as 2-connected, so it appears whenever the bounds allow it
        let three = enumerate(CensusBounds::new(3, 3, 1));
        assert_eq!(forms(&three), forms(&[Multigraph::cycle(3), Multigraph::bond(1)]));
        let on_three: Vec<Multigraph> = three.into_iter().filter(|g| g.vertex_count() == 3).collect();
        assert_eq!(forms(&on_three), forms(&[Multigraph::cycle(3)]));
        let k4 = Multigraph::complete(4);
        let diamond = k4.delete_edge(crate::EdgeId(0)).unwrap();
        let want = forms(&[Multigraph::cycle(4), diamond, k4, Multigraph::cycle(3), Multigraph::bond(1)]);
        assert_eq!(forms(&enumerate(CensusBounds::new(4, 6, 1))), want);
    }

    #[test]
    fn augmentation_matches_naive_enumeration() {
        let b = CensusBounds::new(4, 6, 3);
        let fast = enumerate(b);
        assert_eq!(forms(&fast).len(), fast.len());
        assert_eq!(forms(&fast), forms(&enumerate_naive(b)));
    }

    #[test]
    fn harnesses_agree_on_a_small_census() {
        let b = CensusBounds::new(4, 6, 3);
        let eq = verify_equivalence(b);
        assert!(eq.mismatches.is_empty(), "{:?}", eq.mismatches);
        for delta in 2..=4 {
            let cl = verify_classification(delta, b);
            assert!(cl.mismatches.is_empty(), "{:?}", cl.mismatches);
        }
        let f = verify_facets(b);
        assert!(f.mismatches.is_empty(), "{:?}", f.mismatches);
        let c = census_report(b);
        assert!(c.mismatches.is_empty());
        assert!(c.gorenstein.iter().any(|e| e.delta == 3));
    }
}
