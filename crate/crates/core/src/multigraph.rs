//! Loop-free undirected multigraphs with stable edge identities.
//!
//! Every operation is a pure function returning a new graph. Edge ids survive
//! deletion and contraction of other edges, which keeps construction traces
//! replayable. Contraction renumbers vertices densely and reports the renaming.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Opaque, stable edge identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// An edge with endpoints stored as `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }

    /// The endpoint opposite to `x`, if `x` is an endpoint.
    pub fn other(&self, x: usize) -> Option<usize> {
        if x == self.u {
            Some(self.v)
        } else if x == self.v {
            Some(self.u)
        } else {
            None
        }
    }

    pub fn joins(&self, a: usize, b: usize) -> bool {
        (self.u == a && self.v == b) || (self.u == b && self.v == a)
    }
}

/// A set of vertices, stored as a bitmask. Graphs handled here stay far below
/// 64 vertices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSubset(u64);

impl VertexSubset {
    pub const MAX_VERTICES: usize = 64;

    pub fn empty() -> Self {
        VertexSubset(0)
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= Self::MAX_VERTICES);
        if n == 64 {
            VertexSubset(u64::MAX)
        } else {
            VertexSubset((1u64 << n) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> Self {
        VertexSubset(bits)
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    pub fn singleton(v: usize) -> Self {
        VertexSubset(1 << v)
    }

    pub fn contains(&self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.0;
        (0..64).filter(move |&i| bits >> i & 1 == 1)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSubset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSubset::empty();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl Serialize for VertexSubset {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VertexSubset {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let members = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&bad) = members.iter().find(|&&v| v >= Self::MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex {bad} out of range")));
        }
        Ok(members.into_iter().collect())
    }
}

/// Result of a contraction: the new graph plus the old-to-new vertex renaming.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: Multigraph,
    pub vertex_map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl Multigraph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Multigraph { vertex_count: n, edges: Vec::new() }
    }

    /// Builds a graph from endpoint pairs; edge ids are assigned `0..m` in order.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Multigraph::empty(n);
        for &(a, b) in pairs {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Builds a graph from explicit edges, validating ids and endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (EdgeId, usize, usize)>) -> Result<Self, GraphError> {
        let mut g = Multigraph::empty(n);
        let mut seen = BTreeSet::new();
        for (id, a, b) in edges {
            if !seen.insert(id) {
                return Err(GraphError::DuplicateEdgeId(id));
            }
            g.push_edge(id, a, b)?;
        }
        Ok(g)
    }

    /// The cycle `C_n` on vertices `0..n`, edge `i` joining `i` and `i+1 mod n`.
    /// `C_2` is two parallel edges.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 2, "cycles need at least two vertices");
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Multigraph::from_pairs(n, &pairs).expect("cycle is loop-free")
    }

    /// Two vertices joined by `k` parallel edges.
    pub fn bond(k: usize) -> Self {
        Multigraph::from_pairs(2, &vec![(0, 1); k]).expect("bond is loop-free")
    }

    pub fn complete(n: usize) -> Self {
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                pairs.push((a, b));
            }
        }
        Multigraph::from_pairs(n, &pairs).expect("complete graph is loop-free")
    }

    /// Path on `n` vertices.
    pub fn path(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Multigraph::from_pairs(n, &pairs).expect("path is loop-free")
    }

    /// Builds a graph from a symmetric multiplicity matrix (row-major, `n*n`).
    pub fn from_multiplicities(n: usize, matrix: &[u32]) -> Self {
        let mut g = Multigraph::empty(n);
        for a in 0..n {
            for b in a + 1..n {
                for _ in 0..matrix[a * n + b] {
                    g.add_edge(a, b).expect("matrix entries are off-diagonal");
                }
            }
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> Vec<EdgeId> {
        self.edges.iter().map(|e| e.id).collect()
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge, GraphError> {
        self.edges.iter().find(|e| e.id == id).ok_or(GraphError::UnknownEdge(id))
    }

    pub fn has_edge(&self, id: EdgeId) -> bool {
        self.edges.iter().any(|e| e.id == id)
    }

    /// Position of `id` in the edge list.
    pub fn edge_index(&self, id: EdgeId) -> Result<usize, GraphError> {
        self.edges.iter().position(|e| e.id == id).ok_or(GraphError::UnknownEdge(id))
    }

    /// Smallest id larger than every id in use.
    pub fn fresh_edge_id(&self) -> EdgeId {
        EdgeId(self.edges.iter().map(|e| e.id.0 + 1).max().unwrap_or(0))
    }

    /// Appends an isolated vertex and returns its index.
    pub fn add_vertex(&mut self) -> usize {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    /// Adds an edge with a fresh id and returns that id.
    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<EdgeId, GraphError> {
        let id = self.fresh_edge_id();
        self.push_edge(id, a, b)?;
        Ok(id)
    }

    fn push_edge(&mut self, id: EdgeId, a: usize, b: usize) -> Result<(), GraphError> {
        let n = self.vertex_count;
        if a >= n || b >= n {
            return Err(GraphError::VertexOutOfRange { vertex: a.max(b), n });
        }
        if a == b {
            return Err(GraphError::Loop(a));
        }
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        self.edges.push(Edge { id, u, v });
        Ok(())
    }

    pub fn degree(&self, x: usize) -> usize {
        self.edges.iter().filter(|e| e.u == x || e.v == x).count()
    }

    /// Number of edges joining `a` and `b`.
    pub fn multiplicity(&self, a: usize, b: usize) -> usize {
        self.edges.iter().filter(|e| e.joins(a, b)).count()
    }

    /// Edges joining `a` and `b`, in edge-list order.
    pub fn edges_between(&self, a: usize, b: usize) -> Vec<EdgeId> {
        self.edges.iter().filter(|e| e.joins(a, b)).map(|e| e.id).collect()
    }

    /// Edges sharing both endpoints with `id` (including `id` itself).
    pub fn parallel_class(&self, id: EdgeId) -> Result<Vec<EdgeId>, GraphError> {
        let e = self.edge(id)?;
        Ok(self.edges_between(e.u, e.v))
    }

    pub fn has_parallel_edges(&self) -> bool {
        let m = self.multiplicity_matrix();
        m.iter().any(|&k| k > 1)
    }

    /// Symmetric `n*n` multiplicity matrix, row-major.
    pub fn multiplicity_matrix(&self) -> Vec<u32> {
        let n = self.vertex_count;
        let mut m = vec![0u32; n * n];
        for e in &self.edges {
            m[e.u * n + e.v] += 1;
            m[e.v * n + e.u] += 1;
        }
        m
    }

    /// Adjacency lists of `(neighbour, edge index)`.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        adj
    }

    /// Returns the graph with edge `id` removed.
    pub fn delete_edge(&self, id: EdgeId) -> Result<Multigraph, GraphError> {
        let idx = self.edge_index(id)?;
        let mut g = self.clone();
        g.edges.remove(idx);
        Ok(g)
    }

    /// Removes a vertex set, renumbering the remaining vertices densely.
    /// Returns the graph and the old-to-new map (`None` for removed vertices).
    pub fn remove_vertices(&self, removed: VertexSubset) -> (Multigraph, Vec<Option<usize>>) {
        let flags: Vec<bool> = (0..self.vertex_count).map(|v| removed.contains(v)).collect();
        self.without_vertices(&flags)
    }

    /// As [`Multigraph::remove_vertices`], with the removed set given as flags
    /// so that graphs of any size can be handled.
    pub fn without_vertices(&self, removed: &[bool]) -> (Multigraph, Vec<Option<usize>>) {
        let mut map = vec![None; self.vertex_count];
        let mut next = 0;
        for (v, slot) in map.iter_mut().enumerate() {
            if !removed.get(v).copied().unwrap_or(false) {
                *slot = Some(next);
                next += 1;
            }
        }
        let mut g = Multigraph::empty(next);
        for e in &self.edges {
            if let (Some(a), Some(b)) = (map[e.u], map[e.v]) {
                g.edges.push(Edge { id: e.id, u: a.min(b), v: a.max(b) });
            }
        }
        (g, map)
    }

    /// Contracts edge `id`: its endpoints merge, edges parallel to it become
    /// loops and are dropped.
    pub fn contract_edge(&self, id: EdgeId) -> Result<Contraction, GraphError> {
        let e = *self.edge(id)?;
        Ok(self.merge_classes(|v| if v == e.v { e.u } else { v }))
    }

    /// Contracts every edge with both endpoints in `subset`.
    pub fn contract_subset(&self, subset: VertexSubset) -> Result<Contraction, GraphError> {
        if subset.is_empty() {
            return Err(GraphError::EmptySubset);
        }
        self.check_subset(subset)?;
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for e in &self.edges {
            if subset.contains(e.u) && subset.contains(e.v) {
                let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let roots: Vec<usize> = (0..self.vertex_count).map(|v| find(&mut parent, v)).collect();
        Ok(self.merge_classes(|v| roots[v]))
    }

    /// Identifies vertices with equal representative, numbering classes by
    /// their smallest member. Loops are discarded.
    fn merge_classes(&self, representative: impl Fn(usize) -> usize) -> Contraction {
        let n = self.vertex_count;
        let reps: Vec<usize> = (0..n).map(&representative).collect();
        let mut class_index = vec![usize::MAX; n];
        let mut next = 0;
        for v in 0..n {
            let r = reps[v];
            if class_index[r] == usize::MAX {
                class_index[r] = next;
                next += 1;
            }
        }
        let vertex_map: Vec<usize> = reps.iter().map(|&r| class_index[r]).collect();
        let mut g = Multigraph::empty(next);
        for e in &self.edges {
            let (a, b) = (vertex_map[e.u], vertex_map[e.v]);
            if a != b {
                g.edges.push(Edge { id: e.id, u: a.min(b), v: a.max(b) });
            }
        }
        Contraction { graph: g, vertex_map }
    }

    /// Subgraph induced by `subset`, vertices renumbered in increasing order.
    pub fn induced_subgraph(&self, subset: VertexSubset) -> Result<Multigraph, GraphError> {
        if subset.is_empty() {
            return Err(GraphError::EmptySubset);
        }
        self.check_subset(subset)?;
        let complement = VertexSubset::from_bits(VertexSubset::full(self.vertex_count).bits() & !subset.bits());
        Ok(self.remove_vertices(complement).0)
    }

    /// Edge ids with both endpoints in `subset`.
    pub fn induced_edges(&self, subset: VertexSubset) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|e| subset.contains(e.u) && subset.contains(e.v))
            .map(|e| e.id)
            .collect()
    }

    fn check_subset(&self, subset: VertexSubset) -> Result<(), GraphError> {
        match subset.iter().find(|&v| v >= self.vertex_count) {
            Some(v) => Err(GraphError::VertexOutOfRange { vertex: v, n: self.vertex_count }),
            None => Ok(()),
        }
    }

    /// Connected components as vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.incidence();
        let mut seen = vec![false; self.vertex_count];
        let mut out = Vec::new();
        for s in 0..self.vertex_count {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(x) = stack.pop() {
                comp.push(x);
                for &(y, _) in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count > 0 && self.components().len() == 1
    }

    /// Connected, at least two vertices, no cut vertex. `K_2` and any bundle of
    /// parallel edges between two vertices qualify; a single vertex does not.
    pub fn is_two_connected(&self) -> bool {
        if self.vertex_count < 2 || !self.is_connected() {
            return false;
        }
        self.lowlink().articulation.iter().all(|&a| !a)
    }

    /// Cut vertices in increasing order.
    pub fn cut_vertices(&self) -> Vec<usize> {
        let ll = self.lowlink();
        (0..self.vertex_count).filter(|&v| ll.articulation[v]).collect()
    }

    /// The blocks (maximal 2-connected subgraphs) as vertex sets. Isolated
    /// vertices belong to no block, so a single vertex has zero blocks.
    pub fn blocks(&self) -> Vec<VertexSubset> {
        let mut blocks = self.lowlink().blocks;
        blocks.sort();
        blocks
    }

    /// Tarjan's edge-stack biconnected components. Parallel edges are told
    /// apart by edge index, so a doubled edge is a block of its own.
    fn lowlink(&self) -> Lowlink {
        let n = self.vertex_count;
        let adj = self.incidence();
        let mut order = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut articulation = vec![false; n];
        let mut blocks = Vec::new();
        let mut edge_stack: Vec<usize> = Vec::new();
        let mut counter = 0;

        for root in 0..n {
            if order[root] != usize::MAX {
                continue;
            }
            order[root] = counter;
            low[root] = counter;
            counter += 1;
            let mut root_children = 0;
            // (vertex, parent edge index, next adjacency position)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            while let Some(top) = stack.last_mut() {
                let (x, parent_edge) = (top.0, top.1);
                if top.2 < adj[x].len() {
                    let (y, ei) = adj[x][top.2];
                    top.2 += 1;
                    if ei == parent_edge {
                        continue;
                    }
                    if order[y] == usize::MAX {
                        edge_stack.push(ei);
                        order[y] = counter;
                        low[y] = counter;
                        counter += 1;
                        if x == root {
                            root_children += 1;
                        }
                        stack.push((y, ei, 0));
                    } else if order[y] < order[x] {
                        edge_stack.push(ei);
                        low[x] = low[x].min(order[y]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[x]);
                        if low[x] >= order[p] {
                            if p != root {
                                articulation[p] = true;
                            }
                            let mut block = VertexSubset::empty();
                            while let Some(ei) = edge_stack.pop() {
                                let e = &self.edges[ei];
                                block.insert(e.u);
                                block.insert(e.v);
                                if ei == parent_edge {
                                    break;
                                }
                            }
                            blocks.push(block);
                        }
                    }
                }
            }
            if root_children > 1 {
                articulation[root] = true;
            }
        }
        Lowlink { articulation, blocks }
    }

    /// All spanning trees as sorted edge-id lists. Parallel edges yield
    /// distinct trees.
    pub fn spanning_trees(&self) -> Result<Vec<Vec<EdgeId>>, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let n = self.vertex_count;
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(n.saturating_sub(1));
        let mut uf = RollbackUnionFind::new(n);
        self.trees_rec(0, &mut uf, &mut chosen, &mut out);
        for t in &mut out {
            t.sort_unstable();
        }
        Ok(out)
    }

    fn trees_rec(&self, i: usize, uf: &mut RollbackUnionFind, chosen: &mut Vec<EdgeId>, out: &mut Vec<Vec<EdgeId>>) {
        let need = self.vertex_count - 1 - chosen.len();
        if need == 0 {
            out.push(chosen.clone());
            return;
        }
        if self.edges.len() - i < need || !self.completable(i, uf) {
            return;
        }
        let e = self.edges[i];
        if uf.union(e.u, e.v) {
            chosen.push(e.id);
            self.trees_rec(i + 1, uf, chosen, out);
            chosen.pop();
            uf.rollback();
        }
        self.trees_rec(i + 1, uf, chosen, out);
    }

    /// Whether the chosen forest plus edges `i..` still connects every vertex.
    fn completable(&self, i: usize, uf: &RollbackUnionFind) -> bool {
        let mut probe = uf.snapshot();
        let mut comps = probe.components;
        for e in &self.edges[i..] {
            if probe.union(e.u, e.v) {
                comps -= 1;
            }
        }
        comps == 1
    }

    /// Canonical multiplicity matrix; see [`crate::canonical`].
    pub fn canonical_form(&self) -> crate::canonical::CanonicalForm {
        crate::canonical::canonical_form(self)
    }

    /// Text edge-list serialization: `n m` then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.vertex_count, self.edges.len());
        for e in &self.edges {
            s.push_str(&format!("{} {}\n", e.u, e.v));
        }
        s
    }

    /// Graphviz text.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.vertex_count {
            s.push_str(&format!("  {v};\n"));
        }
        for e in &self.edges {
            s.push_str(&format!("  {} -- {} [label=\"{}\"];\n", e.u, e.v, e.id.0));
        }
        s.push_str("}\n");
        s
    }

    /// Parses the edge-list format. Edge ids are assigned `0..m` in line order.
    pub fn parse_edge_list(text: &str) -> Result<Multigraph, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (hline, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            column: 1,
            message: "missing header line \"n m\"".into(),
        })?;
        let nums = parse_numbers(hline, header, 2)?;
        let (n, m) = (nums[0], nums[1]);
        if n > VertexSubset::MAX_VERTICES {
            return Err(GraphError::Parse {
                line: hline,
                column: 1,
                message: format!("at most {} vertices supported", VertexSubset::MAX_VERTICES),
            });
        }
        let mut g = Multigraph::empty(n);
        let mut last_line = hline;
        for k in 0..m {
            let (lno, line) = lines.next().ok_or(GraphError::Parse {
                line: last_line + 1,
                column: 1,
                message: format!("expected {m} edge lines, found {k}"),
            })?;
            last_line = lno;
            let uv = parse_numbers(lno, line, 2)?;
            let (u, v) = (uv[0], uv[1]);
            if u >= v || v >= n {
                return Err(GraphError::Parse {
                    line: lno,
                    column: 1,
                    message: format!("edge \"{u} {v}\" must satisfy 0 <= u < v < {n}"),
                });
            }
            g.add_edge(u, v)?;
        }
        if let Some((lno, _)) = lines.next() {
            return Err(GraphError::Parse { line: lno, column: 1, message: format!("more than {m} edge lines") });
        }
        Ok(g)
    }
}

fn parse_numbers(line_no: usize, line: &str, count: usize) -> Result<Vec<usize>, GraphError> {
    let mut out = Vec::with_capacity(count);
    let mut rest = line;
    let mut offset = 0;
    loop {
        let trimmed = rest.trim_start();
        offset += rest.len() - trimmed.len();
        if trimmed.is_empty() {
            break;
        }
        let end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let token = &trimmed[..end];
        if out.len() == count {
            return Err(GraphError::Parse {
                line: line_no,
                column: offset + 1,
                message: format!("unexpected token \"{token}\""),
            });
        }
        let value = token.parse::<usize>().map_err(|_| GraphError::Parse {
            line: line_no,
            column: offset + 1,
            message: format!("expected a non-negative integer, found \"{token}\""),
        })?;
        out.push(value);
        offset += end;
        rest = &trimmed[end..];
    }
    if out.len() < count {
        return Err(GraphError::Parse {
            line: line_no,
            column: line.len() + 1,
            message: format!("expected {count} integers, found {}", out.len()),
        });
    }
    Ok(out)
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

struct Lowlink {
    articulation: Vec<bool>,
    blocks: Vec<VertexSubset>,
}

struct RollbackUnionFind {
    parent: Vec<usize>,
    history: Vec<usize>,
    components: usize,
}

impl RollbackUnionFind {
    fn new(n: usize) -> Self {
        RollbackUnionFind { parent: (0..n).collect(), history: Vec::new(), components: n }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[rb] = ra;
        self.history.push(rb);
        self.components -= 1;
        true
    }

    fn rollback(&mut self) {
        let x = self.history.pop().expect("nothing to roll back");
        self.parent[x] = x;
        self.components += 1;
    }

    fn snapshot(&self) -> RollbackUnionFind {
        RollbackUnionFind { parent: self.parent.clone(), history: Vec::new(), components: self.components }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles_sharing_vertex() -> Multigraph {
        Multigraph::from_pairs(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap()
    }

    /// Brute-force 2-connectivity: remove each vertex and test connectivity.
    fn two_connected_by_removal(g: &Multigraph) -> bool {
        if g.vertex_count() < 2 || !g.is_connected() {
            return false;
        }
        if g.vertex_count() == 2 {
            return true;
        }
        (0..g.vertex_count()).all(|v| g.remove_vertices(VertexSubset::singleton(v)).0.is_connected())
    }

    #[test]
    fn delete_examples() {
        let c2 = Multigraph::cycle(2);
        let k2 = c2.delete_edge(EdgeId(0)).unwrap();
        assert_eq!(k2.edge_count(), 1);
        assert_eq!(k2.edges()[0].id, EdgeId(1));
        assert_eq!(c2.edge_count(), 2);

        let c4 = Multigraph::cycle(4);
        for id in c4.edge_ids() {
            let p = c4.delete_edge(id).unwrap();
            assert_eq!(p.canonical_form(), Multigraph::path(4).canonical_form());
        }

        let k4 = Multigraph::complete(4);
        let diamond = Multigraph::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        for id in k4.edge_ids() {
            let d = k4.delete_edge(id).unwrap();
            assert_eq!(d.edge_count(), 5);
            let mut degrees: Vec<_> = (0..4).map(|v| d.degree(v)).collect();
            degrees.sort();
            assert_eq!(degrees, vec![2, 2, 3, 3]);
            assert_eq!(d.canonical_form(), diamond.canonical_form());
        }
        assert_eq!(k4.delete_edge(EdgeId(99)), Err(GraphError::UnknownEdge(EdgeId(99))));
    }

    #[test]
    fn contract_examples() {
        let c3 = Multigraph::cycle(3);
        let c = c3.contract_edge(EdgeId(0)).unwrap();
        assert_eq!(c.graph.vertex_count(), 2);
        assert_eq!(c.graph.edge_count(), 2);
        assert_eq!(c.vertex_map, vec![0, 0, 1]);

        let c2 = Multigraph::cycle(2);
        let c = c2.contract_edge(EdgeId(1)).unwrap();
        assert_eq!(c.graph.vertex_count(), 1);
        assert_eq!(c.graph.edge_count(), 0);

        let k4 = Multigraph::complete(4);
        let c = k4.contract_edge(EdgeId(0)).unwrap();
        assert_eq!(c.graph.vertex_count(), 3);
        let m = c.graph.multiplicity_matrix();
        let mut entries = vec![m[1], m[2], m[5]];
        entries.sort();
        assert_eq!(entries, vec![1, 2, 2]);
        assert!(k4.contract_edge(EdgeId(17)).is_err());
    }

    #[test]
    fn contract_subset_examples() {
        let k4 = Multigraph::complete(4);
        assert_eq!(k4.contract_subset(VertexSubset::singleton(2)).unwrap().graph, k4);
        let c4 = Multigraph::cycle(4);
        let c = c4.contract_subset([0, 1].into_iter().collect()).unwrap();
        assert_eq!(c.graph.canonical_form(), Multigraph::cycle(3).canonical_form());
        let all = k4.contract_subset(VertexSubset::full(4)).unwrap();
        assert_eq!((all.graph.vertex_count(), all.graph.edge_count()), (1, 0));
        assert_eq!(k4.contract_subset(VertexSubset::empty()).unwrap_err(), GraphError::EmptySubset);
    }

    #[test]
    fn contract_subset_without_induced_edges_keeps_vertices_apart() {
        let c4 = Multigraph::cycle(4);
        let c = c4.contract_subset([0, 2].into_iter().collect()).unwrap();
        assert_eq!(c.graph, c4);
    }

    #[test]
    fn induced_examples() {
        let k4 = Multigraph::complete(4);
        let t = k4.induced_subgraph([0, 2, 3].into_iter().collect()).unwrap();
        assert_eq!(t.canonical_form(), Multigraph::cycle(3).canonical_form());
        let c4 = Multigraph::cycle(4);
        let opp = c4.induced_subgraph([1, 3].into_iter().collect()).unwrap();
        assert_eq!((opp.vertex_count(), opp.edge_count()), (2, 0));
        let b = Multigraph::bond(4);
        assert_eq!(b.induced_subgraph(VertexSubset::full(2)).unwrap(), b);
        assert!(b.induced_subgraph(VertexSubset::empty()).is_err());
    }

    #[test]
    fn two_connectivity_conventions() {
        assert!(Multigraph::cycle(2).is_two_connected());
        assert!(Multigraph::bond(1).is_two_connected());
        assert!(!Multigraph::path(3).is_two_connected());
        assert!(!Multigraph::empty(1).is_two_connected());
        assert!(!Multigraph::empty(2).is_two_connected());
        assert!(!two_triangles_sharing_vertex().is_two_connected());
        assert!(Multigraph::complete(4).is_two_connected());
    }

    #[test]
    fn blocks_examples() {
        assert!(Multigraph::empty(1).blocks().is_empty());
        assert_eq!(two_triangles_sharing_vertex().blocks().len(), 2);
        assert_eq!(Multigraph::cycle(4).blocks(), vec![VertexSubset::full(4)]);
        let p3 = Multigraph::path(3);
        assert_eq!(p3.blocks().len(), 2);
        assert_eq!(p3.cut_vertices(), vec![1]);
    }

    #[test]
    fn two_connectivity_matches_removal_oracle_on_small_graphs() {
        // every multigraph on 4 vertices with multiplicities in {0,1,2}
        for code in 0..3u32.pow(6) {
            let mut m = vec![0u32; 16];
            let mut c = code;
            for a in 0..4 {
                for b in a + 1..4 {
                    m[a * 4 + b] = c % 3;
                    m[b * 4 + a] = c % 3;
                    c /= 3;
                }
            }
            let g = Multigraph::from_multiplicities(4, &m);
            assert_eq!(g.is_two_connected(), two_connected_by_removal(&g), "{g}");
            if g.is_two_connected() {
                assert_eq!(g.blocks(), vec![VertexSubset::full(4)]);
            } else if g.is_connected() {
                assert!(g.blocks().len() > 1);
            }
        }
    }

    #[test]
    fn spanning_tree_examples() {
        for n in 1..6 {
            let trees = Multigraph::bond(n).spanning_trees().unwrap();
            assert_eq!(trees.len(), n);
            assert!(trees.iter().all(|t| t.len() == 1));
        }
        for n in 3..7 {
            assert_eq!(Multigraph::cycle(n).spanning_trees().unwrap().len(), n);
        }
        assert_eq!(Multigraph::complete(4).spanning_trees().unwrap().len(), 16);
        assert_eq!(Multigraph::empty(2).spanning_trees(), Err(GraphError::Disconnected));
    }

    #[test]
    fn edge_list_parsing() {
        let g = Multigraph::parse_edge_list("3 4\n0 1\n1 2\n0 2\n0 2\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.multiplicity(0, 2), 2);
        assert_eq!(Multigraph::parse_edge_list(&g.to_edge_list()).unwrap(), g);

        let err = Multigraph::parse_edge_list("3 2\n0 1\n2 x\n").unwrap_err();
        assert_eq!(err, GraphError::Parse { line: 3, column: 3, message: "expected a non-negative integer, found \"x\"".into() });
        assert!(matches!(Multigraph::parse_edge_list("3 2\n0 1\n"), Err(GraphError::Parse { line: 3, .. })));
        assert!(matches!(Multigraph::parse_edge_list("3 1\n1 1\n"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(Multigraph::parse_edge_list("3 1\n2 1\n"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(Multigraph::parse_edge_list(""), Err(GraphError::Parse { line: 1, .. })));
    }
}
