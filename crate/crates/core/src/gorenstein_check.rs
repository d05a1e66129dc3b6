//! Combinatorial Gorenstein criteria: the weight function, the good-flat
//! equations (spade), the 2-connected-subset equations (heart), and the
//! resulting decision procedure.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::GraphError;
use crate::graphic_matroid::{deletable_edges, good_flats, two_connected_subsets};
use crate::multigraph::{EdgeId, Multigraph, VertexSubset};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightAssignment {
    pub delta: i64,
    pub weights: BTreeMap<EdgeId, i64>,
}

impl WeightAssignment {
    pub fn get(&self, id: EdgeId) -> Option<i64> {
        self.weights.get(&id).copied()
    }

    pub fn sum(&self, ids: &[EdgeId]) -> i64 {
        ids.iter().map(|id| self.weights.get(id).copied().unwrap_or(0)).sum()
    }

    pub fn total(&self) -> i64 {
        self.weights.values().sum()
    }
}

/// Weight of a single edge at `delta`: 1 if deleting it keeps the graph
/// 2-connected, otherwise `delta - 1` if contracting it does, otherwise none.
pub fn edge_weight(g: &Multigraph, id: EdgeId, delta: i64) -> Result<Option<i64>, GraphError> {
    if g.delete_edge(id)?.is_two_connected() {
        return Ok(Some(1));
    }
    if g.contract_edge(id)?.graph.is_two_connected() {
        return Ok(Some(delta - 1));
    }
    Ok(None)
}

/// The weight function at `delta`, absent when `g` is not 2-connected or some
/// edge admits neither deletion nor contraction.
pub fn weight_function(g: &Multigraph, delta: i64) -> Option<WeightAssignment> {
    if delta < 2 || !g.is_two_connected() {
        return None;
    }
    let mut weights = BTreeMap::new();
    for e in g.edges() {
        match edge_weight(g, e.id, delta).ok()? {
            Some(w) => {
                weights.insert(e.id, w);
            }
            None => {
                log::debug!("edge {} of {} edges is neither deletable nor contractible", e.id, g.edge_count());
                return None;
            }
        }
    }
    Some(WeightAssignment { delta, weights })
}

fn spade_general(g: &Multigraph, w: &WeightAssignment) -> bool {
    let delta = w.delta;
    if w.total() != delta * (g.vertex_count() as i64 - 1) {
        return false;
    }
    let Ok(flats) = good_flats(g) else { return false };
    flats
        .iter()
        .all(|f| w.sum(&f.induced_edge_ids) + 1 == delta * (f.subset.len() as i64 - 1))
}

/// At `delta = 2` every weight is 1 and the equations only count edges.
pub fn check_spade_delta_two(g: &Multigraph) -> bool {
    if g.edge_count() != 2 * (g.vertex_count().saturating_sub(1)) {
        return false;
    }
    let Ok(flats) = good_flats(g) else { return false };
    flats.iter().all(|f| f.induced_edge_ids.len() + 1 == 2 * (f.subset.len() - 1))
}

pub fn check_spade(g: &Multigraph, w: &WeightAssignment) -> bool {
    let general = spade_general(g, w);
    if w.delta == 2 {
        assert_eq!(general, check_spade_delta_two(g), "edge-counting path disagrees at delta 2");
    }
    general
}

/// Number of blocks of `g` with `subset` contracted.
pub fn block_count_after_contracting(g: &Multigraph, subset: VertexSubset) -> Result<usize, GraphError> {
    Ok(g.contract_subset(subset)?.graph.blocks().len())
}

pub fn check_heart(g: &Multigraph, w: &WeightAssignment) -> bool {
    two_connected_subsets(g).into_iter().all(|s| {
        let Ok(k) = block_count_after_contracting(g, s) else { return false };
        w.sum(&g.induced_edges(s)) + k as i64 == w.delta * (s.len() as i64 - 1)
    })
}

/// Values of `delta` allowed by the total-weight equation, given which edges
/// are deletable.
pub fn delta_candidates(g: &Multigraph) -> Vec<i64> {
    let Ok(deletable) = deletable_edges(g) else { return Vec::new() };
    let a = deletable.len() as i64;
    let b = g.edge_count() as i64 - a;
    let r = g.vertex_count() as i64 - 1;
    if b != r {
        let (num, den) = (a - b, r - b);
        if num % den == 0 && num / den >= 2 {
            return vec![num / den];
        }
        return Vec::new();
    }
    if a == b {
        log::info!("total-weight equation is degenerate; scanning all delta");
        return (2..=g.edge_count().max(3) as i64).collect();
    }
    Vec::new()
}

/// Every candidate `delta` whose weight function satisfies spade.
pub fn passing_deltas(g: &Multigraph) -> Vec<WeightAssignment> {
    if !g.is_two_connected() {
        return Vec::new();
    }
    delta_candidates(g)
        .into_iter()
        .filter_map(|d| weight_function(g, d))
        .filter(|w| check_spade(g, w))
        .collect()
}

/// The Gorenstein index and weight function, if `g` is Gorenstein.
///
/// Panics if spade and heart disagree on the returned weight function.
pub fn is_gorenstein(g: &Multigraph) -> Option<WeightAssignment> {
    let w = passing_deltas(g).into_iter().next()?;
    assert!(check_heart(g, &w), "spade holds but heart fails at delta {}", w.delta);
    Some(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4_chord() -> Multigraph {
        let mut g = Multigraph::cycle(4);
        g.add_edge(0, 2).unwrap();
        g
    }

    #[test]
    fn weight_examples() {
        for n in 2..6 {
            let w = weight_function(&Multigraph::bond(n), n as i64).unwrap();
            assert!(w.weights.values().all(|&x| x == 1));
        }
        for d in 2..7 {
            let w = weight_function(&Multigraph::cycle(d), d as i64).unwrap();
            assert!(w.weights.values().all(|&x| x == d as i64 - 1));
        }
        let w = weight_function(&Multigraph::complete(4), 2).unwrap();
        assert!(w.weights.values().all(|&x| x == 1));
        assert_eq!(weight_function(&Multigraph::bond(1), 2), None);
        assert_eq!(weight_function(&Multigraph::path(3), 2), None);
    }

    #[test]
    fn spade_examples() {
        let c2 = Multigraph::cycle(2);
        assert!(check_spade(&c2, &weight_function(&c2, 2).unwrap()));
        let g = c4_chord();
        assert!(check_spade(&g, &weight_function(&g, 3).unwrap()));
        let k4 = Multigraph::complete(4);
        assert!(!check_spade(&k4, &weight_function(&k4, 3).unwrap()));
    }

    #[test]
    fn heart_examples() {
        let k4 = Multigraph::complete(4);
        assert!(check_heart(&k4, &weight_function(&k4, 2).unwrap()));
        let c2 = Multigraph::cycle(2);
        assert!(check_heart(&c2, &weight_function(&c2, 2).unwrap()));
        assert!(!check_heart(&k4, &weight_function(&k4, 3).unwrap()));
        // the whole vertex set alone is the total-weight equation
        assert_eq!(block_count_after_contracting(&k4, VertexSubset::full(4)).unwrap(), 0);
    }

    #[test]
    fn candidate_examples() {
        for n in 2..7 {
            assert_eq!(delta_candidates(&Multigraph::bond(n)), vec![n as i64]);
        }
        assert_eq!(delta_candidates(&Multigraph::complete(4)), vec![2]);
        for d in 3..7 {
            assert_eq!(delta_candidates(&Multigraph::cycle(d)), vec![d as i64]);
        }
        assert_eq!(delta_candidates(&Multigraph::bond(1)), Vec::<i64>::new());
    }

    #[test]
    fn decision_examples() {
        let w = is_gorenstein(&Multigraph::cycle(2)).unwrap();
        assert_eq!(w.delta, 2);
        assert_eq!(w.weights.values().copied().collect::<Vec<_>>(), vec![1, 1]);
        assert_eq!(is_gorenstein(&c4_chord()).unwrap().delta, 3);
        assert_eq!(is_gorenstein(&Multigraph::path(3)), None);
        assert_eq!(is_gorenstein(&Multigraph::bond(1)), None);
        assert_eq!(is_gorenstein(&Multigraph::complete(4)).unwrap().delta, 2);
    }

    #[test]
    fn delta_two_counting_agrees() {
        let mut graphs = vec![Multigraph::complete(4), Multigraph::cycle(2), Multigraph::cycle(4), c4_chord()];
        let mut doubled = Multigraph::cycle(3);
        doubled.add_edge(0, 1).unwrap();
        doubled.add_edge(1, 2).unwrap();
        graphs.push(doubled);
        for g in &graphs {
            if let Some(w) = weight_function(g, 2) {
                assert_eq!(check_spade(g, &w), check_spade_delta_two(g));
            }
        }
    }
}
