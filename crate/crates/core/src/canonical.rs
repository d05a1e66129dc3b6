//! Canonical forms of small multigraphs.
//!
//! Vertices are first split into classes by iterated colour refinement (a
//! vertex's colour is its previous colour plus the multiset of
//! `(neighbour colour, multiplicity)` pairs). The canonical form is the
//! lexicographically smallest multiplicity matrix over all vertex orders that
//! list the colour classes in increasing colour order. Refined colours are
//! isomorphism invariants, so isomorphic graphs get equal forms; the matrix
//! determines the graph, so non-isomorphic graphs get different ones.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::multigraph::Multigraph;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    n: usize,
    /// Row-major symmetric `n*n` multiplicity matrix.
    matrix: Vec<u32>,
}

impl CanonicalForm {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &[u32] {
        &self.matrix
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> u32 {
        self.matrix[a * self.n + b]
    }

    pub fn edge_count(&self) -> usize {
        self.matrix.iter().map(|&k| k as usize).sum::<usize>() / 2
    }

    /// The graph whose multiplicity matrix is this form.
    pub fn to_graph(&self) -> Multigraph {
        Multigraph::from_multiplicities(self.n, &self.matrix)
    }

    /// Compact text key: `n:` followed by the upper triangle, comma separated.
    pub fn key(&self) -> String {
        let entries: Vec<String> = (0..self.n)
            .flat_map(|a| (a + 1..self.n).map(move |b| (a, b)))
            .map(|(a, b)| self.multiplicity(a, b).to_string())
            .collect();
        format!("{}:{}", self.n, entries.join(","))
    }
}

pub fn canonical_form(g: &Multigraph) -> CanonicalForm {
    canonical_labeling(g).0
}

/// Canonical form together with a labelling: `position[v]` is the row of
/// vertex `v` in the canonical matrix.
pub fn canonical_labeling(g: &Multigraph) -> (CanonicalForm, Vec<usize>) {
    let n = g.vertex_count();
    let m = g.multiplicity_matrix();
    let colours = refine_colours(n, &m);

    let mut slots: Vec<usize> = colours.clone();
    slots.sort_unstable();

    let mut search = Search {
        n,
        m: &m,
        colours: &colours,
        slots: &slots,
        order: Vec::with_capacity(n),
        used: vec![false; n],
        best: None,
        best_order: Vec::new(),
        current: vec![0; n * n],
    };
    search.descend(Ordering::Equal);

    let order = search.best_order;
    let mut position = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }
    let mut matrix = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            matrix[position[a] * n + position[b]] = m[a * n + b];
        }
    }
    (CanonicalForm { n, matrix }, position)
}

/// A vertex map `g -> h` (as `map[v_g] = v_h`) when the graphs are isomorphic.
pub fn isomorphism(g: &Multigraph, h: &Multigraph) -> Option<Vec<usize>> {
    let (fg, pg) = canonical_labeling(g);
    let (fh, ph) = canonical_labeling(h);
    if fg != fh {
        return None;
    }
    let mut inv_h = vec![0; ph.len()];
    for (v, &p) in ph.iter().enumerate() {
        inv_h[p] = v;
    }
    Some(pg.iter().map(|&p| inv_h[p]).collect())
}

fn refine_colours(n: usize, m: &[u32]) -> Vec<usize> {
    let mut colours = vec![0usize; n];
    let mut classes = usize::from(n > 0);
    loop {
        let signatures: Vec<(usize, Vec<(usize, u32)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(usize, u32)> =
                    (0..n).filter(|&w| m[v * n + w] > 0).map(|w| (colours[w], m[v * n + w])).collect();
                nb.sort_unstable();
                (colours[v], nb)
            })
            .collect();
        let mut ids: BTreeMap<&(usize, Vec<(usize, u32)>), usize> = BTreeMap::new();
        for s in &signatures {
            ids.entry(s).or_insert(0);
        }
        for (i, slot) in ids.values_mut().enumerate() {
            *slot = i;
        }
        let next: Vec<usize> = signatures.iter().map(|s| ids[s]).collect();
        let count = ids.len();
        colours = next;
        if count == classes {
            return colours;
        }
        classes = count;
    }
}

struct Search<'a> {
    n: usize,
    m: &'a [u32],
    colours: &'a [usize],
    slots: &'a [usize],
    order: Vec<usize>,
    used: Vec<bool>,
    best: Option<Vec<u32>>,
    best_order: Vec<usize>,
    current: Vec<u32>,
}

impl Search<'_> {
    /// Lower-triangle rows are compared in position order; `state` is how the
    /// rows fixed so far compare against the best complete matrix.
    fn descend(&mut self, state: Ordering) {
        let k = self.order.len();
        if k == self.n {
            if self.best.is_none() || state == Ordering::Less {
                self.best = Some(self.current.clone());
                self.best_order = self.order.clone();
            }
            return;
        }
        for v in 0..self.n {
            if self.used[v] || self.colours[v] != self.slots[k] {
                continue;
            }
            let mut row_state = state;
            for j in 0..k {
                let value = self.m[v * self.n + self.order[j]];
                self.current[k * self.n + j] = value;
                if row_state == Ordering::Equal {
                    if let Some(best) = &self.best {
                        row_state = value.cmp(&best[k * self.n + j]);
                    }
                }
            }
            if row_state == Ordering::Greater {
                continue;
            }
            self.used[v] = true;
            self.order.push(v);
            self.descend(row_state);
            self.order.pop();
            self.used[v] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn relabel(g: &Multigraph, perm: &[usize]) -> Multigraph {
        let pairs: Vec<_> = g.edges().iter().map(|e| (perm[e.u], perm[e.v])).collect();
        Multigraph::from_pairs(g.vertex_count(), &pairs).unwrap()
    }

    #[test]
    fn triangle_labelings_agree() {
        let c3 = Multigraph::cycle(3);
        let base = canonical_form(&c3);
        for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            assert_eq!(canonical_form(&relabel(&c3, &perm)), base);
        }
    }

    #[test]
    fn distinct_graphs_have_distinct_forms() {
        let c4 = Multigraph::cycle(4);
        let two_bonds = Multigraph::from_pairs(4, &[(0, 1), (0, 1), (2, 3), (2, 3)]).unwrap();
        let path_with_double = Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (2, 3)]).unwrap();
        assert_ne!(canonical_form(&c4), canonical_form(&two_bonds));
        assert_ne!(canonical_form(&c4), canonical_form(&path_with_double));
        assert_ne!(canonical_form(&two_bonds), canonical_form(&path_with_double));
    }

    #[test]
    fn contracted_k4_is_triangle_with_two_doubled_edges() {
        let k4 = Multigraph::complete(4);
        let contracted = k4.contract_edge(k4.edge_ids()[0]).unwrap().graph;
        let expected = Multigraph::from_pairs(3, &[(0, 1), (0, 1), (1, 2), (1, 2), (0, 2)]).unwrap();
        assert_eq!(canonical_form(&contracted), canonical_form(&expected));
    }

    #[test]
    fn canonical_form_round_trips_to_an_isomorphic_graph() {
        let g = Multigraph::from_pairs(5, &[(0, 1), (0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)]).unwrap();
        let f = canonical_form(&g);
        assert_eq!(canonical_form(&f.to_graph()), f);
        assert_eq!(f.edge_count(), 7);
    }

    #[test]
    fn isomorphism_maps_edges_onto_edges() {
        let g = Multigraph::from_pairs(5, &[(0, 1), (0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)]).unwrap();
        let perm = [3, 0, 4, 1, 2];
        let h = relabel(&g, &perm);
        let map = isomorphism(&g, &h).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(g.multiplicity(a, b), h.multiplicity(map[a], map[b]));
            }
        }
        assert!(isomorphism(&g, &Multigraph::cycle(5)).is_none());
    }

    #[test]
    fn invariant_under_random_relabelings() {
        let graphs = [
            Multigraph::complete(4),
            Multigraph::cycle(6),
            Multigraph::from_pairs(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (0, 3)]).unwrap(),
            Multigraph::from_pairs(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0), (0, 3), (2, 5), (2, 5)])
                .unwrap(),
        ];
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for g in &graphs {
            let base = canonical_form(g);
            let mut perm: Vec<usize> = (0..g.vertex_count()).collect();
            for _ in 0..100 {
                perm.shuffle(&mut rng);
                assert_eq!(canonical_form(&relabel(g, &perm)), base);
            }
        }
    }
}
