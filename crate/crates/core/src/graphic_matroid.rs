//! Matroid-level queries on a multigraph.
//!
//! Good flats are enumerated over vertex subsets: `S` is a good flat when
//! `2 <= |S| < |V|` and both the induced subgraph on `S` and the graph with
//! `E(S)` contracted are 2-connected. Deletable edges are those whose removal
//! keeps the graph 2-connected.

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::multigraph::{EdgeId, Multigraph, VertexSubset};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodFlat {
    pub subset: VertexSubset,
    pub induced_edge_ids: Vec<EdgeId>,
}

/// Size of a maximal forest inside `edges`.
pub fn rank(g: &Multigraph, edges: &[EdgeId]) -> Result<usize, GraphError> {
    let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut r = 0;
    for &id in edges {
        let e = g.edge(id)?;
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a != b {
            parent[a] = b;
            r += 1;
        }
    }
    Ok(r)
}

/// Whether every pair of edges lies on a common circuit. Ground sets with at
/// most one element count as connected.
///
/// Circuits of a graphic matroid are the cycles of the graph (a pair of
/// parallel edges included); this enumerates cycles directly and merges the
/// edges of each into one class, independently of any vertex-connectivity
/// machinery.
pub fn is_matroid_connected(g: &Multigraph) -> bool {
    let m = g.edge_count();
    if m <= 1 {
        return true;
    }
    let adj = g.incidence();
    let mut classes: Vec<usize> = (0..m).collect();
    fn find(c: &mut [usize], mut x: usize) -> usize {
        while c[x] != x {
            c[x] = c[c[x]];
            x = c[x];
        }
        x
    }
    let mut merged = 1;
    // Each cycle is found once from its lowest-index edge `first`, as a
    // simple path from `first.v` back to `first.u` over higher-index edges.
    for first in 0..m {
        let e = g.edges()[first];
        let mut on_path = vec![false; g.vertex_count()];
        on_path[e.v] = true;
        let mut path_edges = vec![first];
        let mut stack: Vec<(usize, usize)> = vec![(e.v, 0)];
        while let Some(top) = stack.last_mut() {
            let x = top.0;
            if top.1 >= adj[x].len() {
                stack.pop();
                on_path[x] = false;
                if !stack.is_empty() {
                    path_edges.pop();
                }
                continue;
            }
            let (y, ei) = adj[x][top.1];
            top.1 += 1;
            if ei <= first {
                continue;
            }
            if y == e.u {
                for &pe in path_edges.iter().chain(std::iter::once(&ei)) {
                    let (a, b) = (find(&mut classes, first), find(&mut classes, pe));
                    if a != b {
                        classes[a] = b;
                        merged += 1;
                    }
                }
                if merged == m {
                    return true;
                }
            } else if !on_path[y] {
                on_path[y] = true;
                path_edges.push(ei);
                stack.push((y, 0));
            }
        }
    }
    merged == m
}

/// Edges whose deletion leaves the graph 2-connected.
pub fn deletable_edges(g: &Multigraph) -> Result<Vec<EdgeId>, GraphError> {
    if !g.is_two_connected() {
        return Err(GraphError::NotTwoConnected);
    }
    Ok(g.edge_ids()
        .into_iter()
        .filter(|&id| g.delete_edge(id).map(|h| h.is_two_connected()).unwrap_or(false))
        .collect())
}

/// Induced 2-connectivity for every vertex subset, indexed by bitmask.
/// Computed once per query and shared by the flat and subset enumerations.
struct SubsetTable {
    induced_two_connected: Vec<bool>,
}

impl SubsetTable {
    fn new(g: &Multigraph) -> Self {
        let n = g.vertex_count();
        assert!(n <= 24, "subset enumeration is limited to 24 vertices");
        let induced_two_connected = (0..1u64 << n)
            .map(|bits| {
                let s = VertexSubset::from_bits(bits);
                s.len() >= 2 && g.induced_subgraph(s).map(|h| h.is_two_connected()).unwrap_or(false)
            })
            .collect();
        SubsetTable { induced_two_connected }
    }

    fn subsets(&self) -> impl Iterator<Item = VertexSubset> + '_ {
        self.induced_two_connected
            .iter()
            .enumerate()
            .filter(|(_, &ok)| ok)
            .map(|(bits, _)| VertexSubset::from_bits(bits as u64))
    }
}

/// All good flats, ordered by bitmask.
pub fn good_flats(g: &Multigraph) -> Result<Vec<GoodFlat>, GraphError> {
    if !g.is_two_connected() {
        return Err(GraphError::NotTwoConnected);
    }
    let n = g.vertex_count();
    let table = SubsetTable::new(g);
    let mut out = Vec::new();
    for s in table.subsets() {
        if s.len() >= n {
            continue;
        }
        if g.contract_subset(s)?.graph.is_two_connected() {
            out.push(GoodFlat { subset: s, induced_edge_ids: g.induced_edges(s) });
        }
    }
    Ok(out)
}

/// All vertex subsets (including `V`) inducing a 2-connected subgraph.
pub fn two_connected_subsets(g: &Multigraph) -> Vec<VertexSubset> {
    SubsetTable::new(g).subsets().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4_with_chord() -> Multigraph {
        Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap()
    }

    #[test]
    fn rank_examples() {
        for n in 2..7 {
            let c = Multigraph::cycle(n);
            assert_eq!(rank(&c, &c.edge_ids()).unwrap(), n - 1);
        }
        let b = Multigraph::bond(5);
        assert_eq!(rank(&b, &b.edge_ids()).unwrap(), 1);
        let k4 = Multigraph::complete(4);
        let triangle = k4.induced_edges([0, 1, 2].into_iter().collect());
        assert_eq!(rank(&k4, &triangle).unwrap(), 2);
        assert!(rank(&k4, &[EdgeId(40)]).is_err());
    }

    #[test]
    fn matroid_connectivity_examples() {
        let bowtie = Multigraph::from_pairs(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert!(!is_matroid_connected(&bowtie));
        assert!(is_matroid_connected(&Multigraph::cycle(2)));
        assert!(is_matroid_connected(&Multigraph::bond(1)));
        assert!(is_matroid_connected(&Multigraph::complete(4)));
        assert!(!is_matroid_connected(&Multigraph::path(3)));
    }

    #[test]
    fn deletable_examples() {
        let k4 = Multigraph::complete(4);
        assert_eq!(deletable_edges(&k4).unwrap(), k4.edge_ids());
        for n in 3..7 {
            assert!(deletable_edges(&Multigraph::cycle(n)).unwrap().is_empty());
        }
        for n in 2..6 {
            let b = Multigraph::bond(n);
            assert_eq!(deletable_edges(&b).unwrap(), b.edge_ids());
        }
        assert_eq!(deletable_edges(&Multigraph::path(3)), Err(GraphError::NotTwoConnected));
    }

    #[test]
    fn good_flat_examples() {
        for n in 3..7 {
            let c = Multigraph::cycle(n);
            let flats = good_flats(&c).unwrap();
            assert_eq!(flats.len(), n);
            for f in &flats {
                assert_eq!(f.subset.len(), 2);
                assert_eq!(f.induced_edge_ids.len(), 1);
            }
        }
        assert!(good_flats(&Multigraph::bond(4)).unwrap().is_empty());
        let k4 = Multigraph::complete(4);
        // six single-edge pairs (K_4/e is 2-connected) and four triangles
        let flats = good_flats(&k4).unwrap();
        assert_eq!(flats.len(), 10);
        assert_eq!(flats.iter().filter(|f| f.subset.len() == 2).count(), 6);
        assert!(flats.iter().filter(|f| f.subset.len() == 3).all(|f| f.induced_edge_ids.len() == 3));
    }

    #[test]
    fn good_flats_of_c4_with_chord() {
        let flats: Vec<Vec<usize>> = good_flats(&c4_with_chord()).unwrap().iter().map(|f| f.subset.to_vec()).collect();
        // adjacent rim pairs and the two triangles; the chord pair is not a flat
        assert_eq!(flats, vec![vec![0, 1], vec![1, 2], vec![0, 1, 2], vec![0, 3], vec![2, 3], vec![0, 2, 3]]);
    }

    #[test]
    fn two_connected_subset_examples() {
        let c4 = Multigraph::cycle(4);
        let subsets = two_connected_subsets(&c4);
        assert_eq!(subsets.len(), 5);
        assert!(subsets.contains(&VertexSubset::full(4)));
        assert_eq!(two_connected_subsets(&Multigraph::complete(4)).len(), 11);
        assert_eq!(two_connected_subsets(&Multigraph::bond(3)), vec![VertexSubset::full(2)]);
    }

    #[test]
    fn good_flats_have_rank_one_less_than_size() {
        for g in [Multigraph::complete(4), c4_with_chord(), Multigraph::cycle(5)] {
            for f in good_flats(&g).unwrap() {
                assert_eq!(rank(&g, &f.induced_edge_ids).unwrap(), f.subset.len() - 1);
            }
        }
    }
}
