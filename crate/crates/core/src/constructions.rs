//! Gluing constructions on 2-connected multigraphs, replayable construction
//! traces, and a search that decomposes a graph back into them.
//!
//! All gluings go through [`delta_gluing`]: two graphs are joined at a vertex
//! pair and the two chosen parallel classes are replaced by
//! `w(F1) + w(F2) - delta` parallel edges.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::canonical::{canonical_form, isomorphism, CanonicalForm};
use crate::error::ConstructionError;
use crate::gorenstein_check::{check_spade, edge_weight, weight_function};
use crate::multigraph::{EdgeId, Multigraph};

fn precondition<T>(msg: impl Into<String>) -> Result<T, ConstructionError> {
    Err(ConstructionError::Precondition(msg.into()))
}

#[derive(Clone, Debug)]
pub struct GluingSpec<'a> {
    pub left: &'a Multigraph,
    pub left_class: Vec<EdgeId>,
    pub right: &'a Multigraph,
    pub right_class: Vec<EdgeId>,
    pub delta: i64,
    /// Without flip the smaller endpoints of the two classes are identified,
    /// and likewise the larger ones. With flip the pairing is crossed.
    pub flip: bool,
}

#[derive(Clone, Debug)]
pub struct Glued {
    pub graph: Multigraph,
    /// Vertex of the right graph to vertex of the result. Left vertices keep
    /// their indices.
    pub right_vertices: Vec<usize>,
    /// Edge of the right graph to edge of the result, for edges outside the
    /// glued class. Left edges keep their ids.
    pub right_edges: BTreeMap<EdgeId, EdgeId>,
    /// The parallel edges substituted for the glued classes.
    pub new_edges: Vec<EdgeId>,
}

fn class_endpoints(g: &Multigraph, class: &[EdgeId]) -> Result<(usize, usize), ConstructionError> {
    let Some(&first) = class.first() else { return precondition("parallel class is empty") };
    let e = *g.edge(first)?;
    for &id in class {
        let f = g.edge(id)?;
        if (f.u, f.v) != (e.u, e.v) {
            return precondition(format!("edges {first} and {id} are not parallel"));
        }
    }
    if class.iter().collect::<HashSet<_>>().len() != class.len() {
        return precondition("parallel class lists an edge twice");
    }
    Ok((e.u, e.v))
}

fn class_weight(g: &Multigraph, class: &[EdgeId], delta: i64) -> Result<i64, ConstructionError> {
    let mut total = 0;
    for &id in class {
        match edge_weight(g, id, delta)? {
            Some(w) => total += w,
            None => return precondition(format!("edge {id} has no weight at delta {delta}")),
        }
    }
    Ok(total)
}

pub fn delta_gluing(spec: &GluingSpec) -> Result<Glued, ConstructionError> {
    let delta = spec.delta;
    if delta < 2 {
        return precondition("delta must be at least 2");
    }
    if !spec.left.is_two_connected() || !spec.right.is_two_connected() {
        return precondition("both graphs must be 2-connected");
    }
    let (u1, v1) = class_endpoints(spec.left, &spec.left_class)?;
    let (u2, v2) = class_endpoints(spec.right, &spec.right_class)?;
    let count = class_weight(spec.left, &spec.left_class, delta)? + class_weight(spec.right, &spec.right_class, delta)?
        - delta;
    if count < 0 {
        return precondition(format!("class weights sum to less than delta {delta}"));
    }

    let left_class: HashSet<EdgeId> = spec.left_class.iter().copied().collect();
    let right_class: HashSet<EdgeId> = spec.right_class.iter().copied().collect();
    let mut graph = Multigraph::from_edges(
        spec.left.vertex_count(),
        spec.left.edges().iter().filter(|e| !left_class.contains(&e.id)).map(|e| (e.id, e.u, e.v)),
    )?;
    let mut right_vertices = vec![0; spec.right.vertex_count()];
    let (a, b) = if spec.flip { (v1, u1) } else { (u1, v1) };
    right_vertices[u2] = a;
    right_vertices[v2] = b;
    for (x, slot) in right_vertices.iter_mut().enumerate() {
        if x != u2 && x != v2 {
            *slot = graph.add_vertex();
        }
    }
    let mut right_edges = BTreeMap::new();
    for e in spec.right.edges() {
        if !right_class.contains(&e.id) {
            let id = graph.add_edge(right_vertices[e.u], right_vertices[e.v])?;
            right_edges.insert(e.id, id);
        }
    }
    let mut new_edges = Vec::new();
    for _ in 0..count {
        new_edges.push(graph.add_edge(u1, v1)?);
    }
    Ok(Glued { graph, right_vertices, right_edges, new_edges })
}

fn single_edge_gluing(
    g1: &Multigraph,
    e1: EdgeId,
    g2: &Multigraph,
    e2: EdgeId,
    delta: i64,
    flip: bool,
    weights: (i64, i64),
) -> Result<Glued, ConstructionError> {
    for (g, e, want) in [(g1, e1, weights.0), (g2, e2, weights.1)] {
        let w = edge_weight(g, e, delta)?;
        if w != Some(want) {
            return precondition(format!("edge {e} must have weight {want} at delta {delta}, found {w:?}"));
        }
    }
    delta_gluing(&GluingSpec { left: g1, left_class: vec![e1], right: g2, right_class: vec![e2], delta, flip })
}

/// Glue along `e1` (weight 1) and `e2` (weight `delta - 1`) and drop the
/// glued edge.
pub fn path_gluing(
    g1: &Multigraph,
    e1: EdgeId,
    g2: &Multigraph,
    e2: EdgeId,
    delta: i64,
    flip: bool,
) -> Result<Glued, ConstructionError> {
    single_edge_gluing(g1, e1, g2, e2, delta, flip, (1, delta - 1))
}

/// Glue along two edges of weight `delta - 1`, leaving `delta - 2` parallel
/// edges in their place.
pub fn delta_edge_gluing(
    g1: &Multigraph,
    e1: EdgeId,
    g2: &Multigraph,
    e2: EdgeId,
    delta: i64,
    flip: bool,
) -> Result<Glued, ConstructionError> {
    single_edge_gluing(g1, e1, g2, e2, delta, flip, (delta - 1, delta - 1))
}

/// Replaces `e` by a path of `delta - 1` edges, by gluing with `C_delta`.
pub fn subdivide(g: &Multigraph, e: EdgeId, delta: i64) -> Result<Glued, ConstructionError> {
    path_gluing(g, e, &Multigraph::cycle(delta as usize), EdgeId(0), delta, false)
}

#[derive(Clone, Debug)]
pub struct PathContraction {
    pub graph: Multigraph,
    /// Old vertex to new vertex; interior path vertices map to `None`.
    pub vertex_map: Vec<Option<usize>>,
    pub new_edge: EdgeId,
}

/// Replaces a path of `delta - 1` edges whose interior vertices have degree 2
/// by a single edge between its ends.
pub fn contract_path(g: &Multigraph, path: &[usize], delta: i64) -> Result<PathContraction, ConstructionError> {
    if delta < 2 || path.len() != delta as usize {
        return precondition(format!("path must have {} edges", delta - 1));
    }
    let n = g.vertex_count();
    if let Some(&v) = path.iter().find(|&&v| v >= n) {
        return precondition(format!("vertex {v} out of range"));
    }
    if path.iter().collect::<HashSet<_>>().len() != path.len() {
        return precondition("path repeats a vertex");
    }
    for &v in &path[1..path.len() - 1] {
        if g.degree(v) != 2 {
            return precondition(format!("interior vertex {v} has degree {}", g.degree(v)));
        }
    }
    let mut graph = g.clone();
    for w in path.windows(2) {
        let Some(&id) = g.edges_between(w[0], w[1]).first() else {
            return precondition(format!("vertices {} and {} are not adjacent", w[0], w[1]));
        };
        graph = graph.delete_edge(id)?;
    }
    let mut removed = vec![false; n];
    for &v in &path[1..path.len() - 1] {
        removed[v] = true;
    }
    let (mut graph, vertex_map) = graph.without_vertices(&removed);
    let (a, b) = (path[0], path[path.len() - 1]);
    let new_edge = graph.add_edge(vertex_map[a].unwrap_or(a), vertex_map[b].unwrap_or(b))?;
    Ok(PathContraction { graph, vertex_map, new_edge })
}

/// Subdivides every edge that has a parallel partner, gluing a `C_delta`
/// onto each. For `delta > 2` the result is simple; at `delta = 2` the
/// subdivision is trivial and the graph is returned up to relabelling.
pub fn simplify(g: &Multigraph, delta: i64) -> Result<Multigraph, ConstructionError> {
    let Some(w) = weight_function(g, delta) else { return precondition("graph has no weight function") };
    if !check_spade(g, &w) {
        return precondition(format!("graph does not satisfy the equations at delta {delta}"));
    }
    let targets: Vec<EdgeId> =
        g.edges().iter().filter(|e| g.multiplicity(e.u, e.v) > 1).map(|e| e.id).collect();
    let mut h = g.clone();
    for id in targets {
        h = subdivide(&h, id, delta)?.graph;
    }
    Ok(h)
}

/// Takes `delta - 1` graphs, each with an edge of weight `delta - 1`, and
/// unifies those edges into a single edge. Returns the graph and that edge.
pub fn multi_gluing(parts: &[(&Multigraph, EdgeId)], delta: i64) -> Result<(Multigraph, EdgeId), ConstructionError> {
    if delta < 2 || parts.len() != (delta - 1) as usize {
        return precondition(format!("multi-gluing at delta {delta} takes {} graphs", delta - 1));
    }
    if delta == 2 {
        return Ok((parts[0].0.clone(), parts[0].1));
    }
    for &(g, e) in parts {
        if !g.is_two_connected() || edge_weight(g, e, delta)? != Some(delta - 1) {
            return precondition(format!("edge {e} must have weight {} in a 2-connected graph", delta - 1));
        }
    }
    let (first, e1) = parts[0];
    let (x, y) = first.edge(e1)?.endpoints();
    let mut graph = first.delete_edge(e1)?;
    for &(g, e) in &parts[1..] {
        let (u, v) = g.edge(e)?.endpoints();
        let mut map = vec![0; g.vertex_count()];
        for (z, slot) in map.iter_mut().enumerate() {
            *slot = if z == u {
                x
            } else if z == v {
                y
            } else {
                graph.add_vertex()
            };
        }
        for f in g.edges() {
            if f.id != e {
                graph.add_edge(map[f.u], map[f.v])?;
            }
        }
    }
    let unified = graph.add_edge(x, y)?;
    Ok((graph, unified))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Seed {
    Cycle(usize),
    CliqueK4,
}

impl Seed {
    pub fn graph(&self) -> Multigraph {
        match *self {
            Seed::Cycle(n) => Multigraph::cycle(n),
            Seed::CliqueK4 => Multigraph::complete(4),
        }
    }
}

/// One construction step applied to the current graph. Gluing steps carry
/// the partner graph as its own trace; `own_edge` is an edge of the current
/// graph and `partner_edge` an edge of the partner's replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    PathGlue { partner: ConstructionTrace, own_edge: EdgeId, partner_edge: EdgeId, flip: bool },
    DeltaGlue { partner: ConstructionTrace, own_edge: EdgeId, partner_edge: EdgeId, flip: bool },
    PathContract { path: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub delta: i64,
    pub seed: Seed,
    pub steps: Vec<Step>,
}

impl ConstructionTrace {
    pub fn seed_only(delta: i64, seed: Seed) -> Self {
        ConstructionTrace { delta, seed, steps: Vec::new() }
    }

    pub fn replay(&self) -> Result<Multigraph, ConstructionError> {
        let mut g = self.seed.graph();
        for step in &self.steps {
            g = match step {
                Step::PathGlue { partner, own_edge, partner_edge, flip }
                | Step::DeltaGlue { partner, own_edge, partner_edge, flip } => {
                    if partner.delta != self.delta {
                        return precondition("partner trace uses a different delta");
                    }
                    let p = partner.replay()?;
                    let glue = if matches!(step, Step::PathGlue { .. }) { path_gluing } else { delta_edge_gluing };
                    glue(&g, *own_edge, &p, *partner_edge, self.delta, *flip)?.graph
                }
                Step::PathContract { path } => contract_path(&g, path, self.delta)?.graph,
            };
        }
        Ok(g)
    }

    /// Number of steps, counting those inside partner traces.
    pub fn total_steps(&self) -> usize {
        self.steps
            .iter()
            .map(|s| match s {
                Step::PathGlue { partner, .. } | Step::DeltaGlue { partner, .. } => 1 + partner.total_steps(),
                Step::PathContract { .. } => 1,
            })
            .sum()
    }
}

/// A trace together with its replayed graph and a map from the vertices of
/// the graph being decomposed to the vertices of the replay.
struct Built {
    trace: ConstructionTrace,
    graph: Multigraph,
    map: Vec<usize>,
}

const MEMO_MAX_VERTICES: usize = 12;

struct Decomposer {
    delta: i64,
    failed: HashSet<CanonicalForm>,
}

/// Whether gluing `own` (at `left_x`) to `partner` (at `right_x`) needs the
/// crossed pairing so that the two marked vertices are identified.
fn flip_for(left: &Multigraph, own: EdgeId, left_x: usize, right: &Multigraph, partner: EdgeId, right_x: usize) -> Option<bool> {
    let a = left.edge(own).ok()?.u;
    let b = right.edge(partner).ok()?.u;
    Some((left_x == a) != (right_x == b))
}

/// A piece of `g`: the subgraph induced by `verts` (with `x`, `y` first)
/// plus an extra edge between `x` and `y`, dropping any `x`-`y` edge of `g`.
struct Piece {
    verts: Vec<usize>,
    graph: Multigraph,
    edge: EdgeId,
}

fn piece(g: &Multigraph, x: usize, y: usize, group: &[usize]) -> Piece {
    let mut verts = vec![x, y];
    verts.extend(group.iter().copied().filter(|&v| v != x && v != y));
    let mut local = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let mut graph = Multigraph::empty(verts.len());
    for e in g.edges() {
        let (a, b) = (local[e.u], local[e.v]);
        if a != usize::MAX && b != usize::MAX && !e.joins(x, y) {
            graph.add_edge(a, b).expect("endpoints are in range and distinct");
        }
    }
    let edge = graph.add_edge(0, 1).expect("x and y are distinct");
    Piece { verts, graph, edge }
}

/// Components of `g` minus `x` and `y`, as vertex lists of `g`.
fn components_without(g: &Multigraph, x: usize, y: usize) -> Vec<Vec<usize>> {
    let mut removed = vec![false; g.vertex_count()];
    removed[x] = true;
    removed[y] = true;
    let (h, map) = g.without_vertices(&removed);
    let mut back = vec![0; h.vertex_count()];
    for (v, m) in map.iter().enumerate() {
        if let Some(m) = m {
            back[*m] = v;
        }
    }
    h.components().into_iter().map(|c| c.into_iter().map(|v| back[v]).collect()).collect()
}

/// Total-weight equation, a cheap necessary condition used for pruning.
fn total_weight_holds(g: &Multigraph, delta: i64) -> bool {
    weight_function(g, delta).is_some_and(|w| w.total() == delta * (g.vertex_count() as i64 - 1))
}

/// All ways to split `k` items into exactly `parts` nonempty groups, as
/// restricted growth strings.
fn set_partitions(k: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, k: usize, parts: usize, used: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == k {
            if used == parts {
                out.push(cur.clone());
            }
            return;
        }
        if parts - used > k - i {
            return;
        }
        for b in 0..=used.min(parts - 1) {
            cur.push(b);
            go(i + 1, k, parts, used.max(b + 1), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts >= 1 && parts <= k {
        go(0, k, parts, 0, &mut Vec::new(), &mut out);
    }
    out
}

impl Decomposer {
    fn seed(&self, g: &Multigraph, seed: Seed) -> Option<Built> {
        let s = seed.graph();
        if s.vertex_count() != g.vertex_count() || s.edge_count() != g.edge_count() {
            return None;
        }
        let map = isomorphism(g, &s)?;
        Some(Built { trace: ConstructionTrace::seed_only(self.delta, seed), graph: s, map })
    }

    fn memo_key(&self, g: &Multigraph) -> Option<CanonicalForm> {
        (g.vertex_count() <= MEMO_MAX_VERTICES).then(|| canonical_form(g))
    }

    fn remember_failure(&mut self, key: Option<CanonicalForm>) -> Option<Built> {
        if let Some(k) = key {
            self.failed.insert(k);
        }
        None
    }

    /// Glues decomposed pieces back together at `x` and the second marked
    /// vertex. With `first_is_delta` the second piece is attached by a delta
    /// gluing and the rest by path gluings onto its new parallel edges;
    /// otherwise every piece is path-glued along the virtual edge.
    fn glue_pieces(
        &self,
        n: usize,
        x: usize,
        pieces: &[Piece],
        built: Vec<Built>,
        first_is_delta: bool,
    ) -> Option<Built> {
        let mut it = pieces.iter().zip(built);
        let (p0, b0) = it.next()?;
        let mut map = vec![usize::MAX; n];
        for (i, &v) in p0.verts.iter().enumerate() {
            map[v] = b0.map[i];
        }
        let mut trace = b0.trace;
        let mut graph = b0.graph;
        let mut spare: Vec<EdgeId> = Vec::new();
        let y = p0.verts[1];
        for (k, (p, b)) in it.enumerate() {
            let own = if k == 0 || !first_is_delta {
                *graph.edges_between(map[x], map[y]).first()?
            } else {
                spare.remove(0)
            };
            let partner_edge = *b.graph.edges_between(b.map[0], b.map[1]).first()?;
            let flip = flip_for(&graph, own, map[x], &b.graph, partner_edge, b.map[0])?;
            let delta_step = k == 0 && first_is_delta;
            let glued = if delta_step {
                delta_edge_gluing(&graph, own, &b.graph, partner_edge, self.delta, flip)
            } else {
                path_gluing(&graph, own, &b.graph, partner_edge, self.delta, flip)
            }
            .ok()?;
            for (i, &v) in p.verts.iter().enumerate().skip(2) {
                map[v] = glued.right_vertices[b.map[i]];
            }
            if delta_step {
                spare = glued.new_edges.clone();
                trace.steps.push(Step::DeltaGlue { partner: b.trace, own_edge: own, partner_edge, flip });
            } else {
                trace.steps.push(Step::PathGlue { partner: b.trace, own_edge: own, partner_edge, flip });
            }
            graph = glued.graph;
        }
        Some(Built { trace, graph, map })
    }

    /// Search at `delta = 2`: `C_2`, `K_4`, or a split at a 2-cut into two
    /// pieces glued along a virtual edge.
    fn two(&mut self, g: &Multigraph) -> Option<Built> {
        if let Some(b) = self.seed(g, Seed::Cycle(2)) {
            return Some(b);
        }
        if g.has_parallel_edges() {
            return None;
        }
        if let Some(b) = self.seed(g, Seed::CliqueK4) {
            return Some(b);
        }
        let key = self.memo_key(g);
        if key.as_ref().is_some_and(|k| self.failed.contains(k)) {
            return None;
        }
        let n = g.vertex_count();
        for x in 0..n {
            for y in x + 1..n {
                if g.multiplicity(x, y) > 0 {
                    continue;
                }
                let comps = components_without(g, x, y);
                if comps.len() < 2 {
                    continue;
                }
                // the first component always goes to the left piece
                for mask in 1..(1u64 << (comps.len() - 1)) {
                    let (mut left, mut right) = (comps[0].clone(), Vec::new());
                    for (i, c) in comps.iter().enumerate().skip(1) {
                        if mask >> (i - 1) & 1 == 1 {
                            right.extend(c);
                        } else {
                            left.extend(c);
                        }
                    }
                    let pieces = [piece(g, x, y, &left), piece(g, x, y, &right)];
                    if !pieces.iter().all(|p| total_weight_holds(&p.graph, 2)) {
                        continue;
                    }
                    let Some(a) = self.two(&pieces[0].graph) else { continue };
                    let Some(b) = self.two(&pieces[1].graph) else { continue };
                    if let Some(done) = self.glue_pieces(n, x, &pieces, vec![a, b], false) {
                        return Some(done);
                    }
                }
            }
        }
        self.remember_failure(key)
    }

    fn general(&mut self, g: &Multigraph) -> Option<Built> {
        if let Some(b) = self.seed(g, Seed::Cycle(self.delta as usize)) {
            return Some(b);
        }
        if g.has_parallel_edges() {
            return self.via_simplification(g);
        }
        self.simple(g)
    }

    /// Subdivide every parallel edge, decompose the simple result, then
    /// contract the subdivision paths again.
    fn via_simplification(&mut self, g: &Multigraph) -> Option<Built> {
        let delta = self.delta as usize;
        let mut h = g.clone();
        let mut paths = Vec::new();
        for e in g.edges() {
            if g.multiplicity(e.u, e.v) < 2 {
                continue;
            }
            h = h.delete_edge(e.id).ok()?;
            let mut path = vec![e.u];
            for _ in 0..delta - 2 {
                path.push(h.add_vertex());
            }
            path.push(e.v);
            for w in path.windows(2) {
                h.add_edge(w[0], w[1]).ok()?;
            }
            paths.push(path);
        }
        let built = self.simple(&h)?;
        let mut map: Vec<Option<usize>> = built.map.iter().map(|&v| Some(v)).collect();
        let mut trace = built.trace;
        let mut graph = built.graph;
        for path in paths {
            let mapped: Vec<usize> = path.iter().map(|&v| map[v]).collect::<Option<_>>()?;
            let pc = contract_path(&graph, &mapped, self.delta).ok()?;
            for m in map.iter_mut() {
                *m = m.and_then(|v| pc.vertex_map[v]);
            }
            trace.steps.push(Step::PathContract { path: mapped });
            graph = pc.graph;
        }
        let map = map[..g.vertex_count()].iter().copied().collect::<Option<Vec<_>>>()?;
        Some(Built { trace, graph, map })
    }

    /// Paths of `delta - 1` edges with interior degree 2 between two distinct
    /// non-adjacent vertices, each listed once.
    fn subdivision_paths(&self, g: &Multigraph) -> Vec<Vec<usize>> {
        let len = self.delta as usize - 1;
        let adj = g.incidence();
        let mut out = Vec::new();
        for x in 0..g.vertex_count() {
            for &(first, edge) in &adj[x] {
                let mut path = vec![x, first];
                let mut came = edge;
                while path.len() <= len {
                    let cur = *path.last().unwrap();
                    if adj[cur].len() != 2 {
                        break;
                    }
                    let &(next, e) = adj[cur].iter().find(|&&(_, e)| e != came).unwrap();
                    path.push(next);
                    came = e;
                }
                if path.len() != len + 1 {
                    continue;
                }
                let y = path[len];
                if x >= y {
                    continue;
                }
                if path.iter().collect::<HashSet<_>>().len() != path.len() || g.multiplicity(x, y) > 0 {
                    continue;
                }
                out.push(path);
            }
        }
        out
    }

    /// Search for `delta > 2` on a simple graph: undo a subdivision if one is
    /// available, otherwise undo a gluing of `delta - 1` graphs along edges
    /// of weight `delta - 1`.
    fn simple(&mut self, g: &Multigraph) -> Option<Built> {
        if let Some(b) = self.seed(g, Seed::Cycle(self.delta as usize)) {
            return Some(b);
        }
        let key = self.memo_key(g);
        if key.as_ref().is_some_and(|k| self.failed.contains(k)) {
            return None;
        }
        let delta = self.delta;
        // Undoing a subdivision keeps the equations in both directions, so
        // the first valid path is as good as any other.
        for path in self.subdivision_paths(g) {
            let Ok(pc) = contract_path(g, &path, delta) else { continue };
            if edge_weight(&pc.graph, pc.new_edge, delta).ok().flatten() != Some(1) {
                continue;
            }
            return match self.simple(&pc.graph) {
                Some(b) => self.undo_subdivision(g, &path, &pc, b),
                None => self.remember_failure(key),
            };
        }
        let n = g.vertex_count();
        let parts = (delta - 1) as usize;
        for e in g.edges() {
            if edge_weight(g, e.id, delta).ok().flatten() != Some(1) {
                continue;
            }
            let (x, y) = e.endpoints();
            let comps = components_without(g, x, y);
            for labels in set_partitions(comps.len(), parts) {
                let mut groups = vec![Vec::new(); parts];
                for (c, &l) in comps.iter().zip(&labels) {
                    groups[l].extend(c);
                }
                let pieces: Vec<Piece> = groups.iter().map(|grp| piece(g, x, y, grp)).collect();
                let plausible = pieces.iter().all(|p| {
                    p.graph.is_two_connected()
                        && edge_weight(&p.graph, p.edge, delta).ok().flatten() == Some(delta - 1)
                        && total_weight_holds(&p.graph, delta)
                });
                if !plausible {
                    continue;
                }
                let mut built = Vec::new();
                for p in &pieces {
                    match self.simple(&p.graph) {
                        Some(b) => built.push(b),
                        None => break,
                    }
                }
                if built.len() == pieces.len() {
                    if let Some(done) = self.glue_pieces(n, x, &pieces, built, true) {
                        return Some(done);
                    }
                }
            }
        }
        self.remember_failure(key)
    }

    fn undo_subdivision(&self, g: &Multigraph, path: &[usize], pc: &PathContraction, b: Built) -> Option<Built> {
        let delta = self.delta as usize;
        let (x, y) = (path[0], path[delta - 1]);
        let hx = b.map[pc.vertex_map[x]?];
        let hy = b.map[pc.vertex_map[y]?];
        let own = *b.graph.edges_between(hx, hy).first()?;
        let cycle = Multigraph::cycle(delta);
        let flip = flip_for(&b.graph, own, hx, &cycle, EdgeId(0), 0)?;
        let glued = path_gluing(&b.graph, own, &cycle, EdgeId(0), self.delta, flip).ok()?;
        let mut map = vec![0; g.vertex_count()];
        for v in 0..g.vertex_count() {
            if let Some(h) = pc.vertex_map[v] {
                map[v] = b.map[h];
            }
        }
        // x sits on cycle vertex 0; the cycle runs back to 1 through delta-1, ..., 2
        for (k, &v) in path.iter().enumerate().take(delta - 1).skip(1) {
            map[v] = glued.right_vertices[delta - k];
        }
        let mut trace = b.trace;
        trace.steps.push(Step::PathGlue {
            partner: ConstructionTrace::seed_only(self.delta, Seed::Cycle(delta)),
            own_edge: own,
            partner_edge: EdgeId(0),
            flip,
        });
        Some(Built { trace, graph: glued.graph, map })
    }
}

/// A construction trace producing `g` (up to isomorphism) from `C_delta`, or
/// at `delta = 2` from `K_4` or `C_2`.
///
/// At `delta = 2` the search splits at 2-cuts. For larger `delta`, parallel
/// edges are first subdivided; the simple graph is then reduced by undoing
/// subdivisions and gluings of `delta - 1` graphs, and the subdivisions are
/// contracted again at the end.
pub fn decompose(g: &Multigraph, delta: i64) -> Option<ConstructionTrace> {
    if delta < 2 || !g.is_two_connected() {
        return None;
    }
    let mut d = Decomposer { delta, failed: HashSet::new() };
    let built = if delta == 2 { d.two(g) } else { d.general(g) }?;
    debug_assert!(isomorphism(g, &built.graph).is_some());
    Some(built.trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iso(a: &Multigraph, b: &Multigraph) -> bool {
        canonical_form(a) == canonical_form(b)
    }

    fn c4_chord() -> Multigraph {
        let mut g = Multigraph::cycle(4);
        g.add_edge(0, 2).unwrap();
        g
    }

    fn spade(g: &Multigraph, delta: i64) -> bool {
        weight_function(g, delta).is_some_and(|w| check_spade(g, &w))
    }

    #[test]
    fn triangles_glue_to_c4_with_chord() {
        let c3 = Multigraph::cycle(3);
        let spec = |delta| GluingSpec {
            left: &c3,
            left_class: vec![EdgeId(0)],
            right: &c3,
            right_class: vec![EdgeId(0)],
            delta,
            flip: false,
        };
        let g = delta_gluing(&spec(3)).unwrap();
        assert_eq!(g.new_edges.len(), 1);
        assert!(iso(&g.graph, &c4_chord()));
        let g = delta_gluing(&spec(2)).unwrap();
        assert!(g.new_edges.is_empty());
        assert!(iso(&g.graph, &Multigraph::cycle(4)));
    }

    #[test]
    fn path_gluing_adds_no_edges() {
        let g = path_gluing(&c4_chord(), EdgeId(4), &Multigraph::cycle(3), EdgeId(1), 3, false).unwrap();
        assert!(g.new_edges.is_empty());
        assert_eq!(g.graph.vertex_count(), 5);
        assert_eq!(g.graph.edge_count(), 6);
        assert!(path_gluing(&c4_chord(), EdgeId(0), &Multigraph::cycle(3), EdgeId(1), 3, false).is_err());
    }

    #[test]
    fn c2_is_neutral_at_two() {
        let c2 = Multigraph::cycle(2);
        let g = path_gluing(&c2, EdgeId(0), &c2, EdgeId(1), 2, false).unwrap();
        assert!(iso(&g.graph, &c2));
        let k4 = Multigraph::complete(4);
        for e in k4.edge_ids() {
            let g = path_gluing(&k4, e, &c2, EdgeId(0), 2, true).unwrap();
            assert!(iso(&g.graph, &k4));
            assert!(spade(&g.graph, 2));
        }
    }

    #[test]
    fn cycles_build_the_bond() {
        for n in 3..7 {
            let c = Multigraph::cycle(n);
            let g = delta_edge_gluing(&c, EdgeId(0), &c, EdgeId(0), n as i64, false).unwrap();
            assert_eq!(g.new_edges.len(), n - 2);
            let mut h = g.graph;
            // the two remaining paths of n - 1 edges run between vertices 0 and 1
            for _ in 0..2 {
                let path = path_between(&h, 0, 1, n - 1).unwrap();
                h = contract_path(&h, &path, n as i64).unwrap().graph;
            }
            assert!(iso(&h, &Multigraph::bond(n)));
        }
    }

    /// A path of `len` edges from `a` to `b` through degree-2 vertices.
    fn path_between(g: &Multigraph, a: usize, b: usize, len: usize) -> Option<Vec<usize>> {
        let adj = g.incidence();
        for &(first, e0) in &adj[a] {
            let mut path = vec![a, first];
            let mut came = e0;
            while path.len() < len + 1 && adj[*path.last().unwrap()].len() == 2 {
                let &(next, e) = adj[*path.last().unwrap()].iter().find(|&&(_, e)| e != came).unwrap();
                path.push(next);
                came = e;
            }
            if path.len() == len + 1 && path[len] == b {
                return Some(path);
            }
        }
        None
    }

    #[test]
    fn contract_path_examples() {
        for d in 3..7 {
            let c = Multigraph::cycle(d);
            let path: Vec<usize> = (0..d).collect();
            let r = contract_path(&c, &path, d as i64).unwrap();
            assert!(iso(&r.graph, &Multigraph::cycle(2)));
        }
        let k4 = Multigraph::complete(4);
        assert!(contract_path(&k4, &[0, 1, 2], 3).is_err());
        assert!(contract_path(&Multigraph::cycle(5), &[0, 1, 2], 4).is_err());
    }

    #[test]
    fn subdivision_round_trip() {
        for (g, delta) in [(Multigraph::complete(4), 3), (c4_chord(), 3), (Multigraph::bond(4), 4)] {
            for e in g.edge_ids() {
                if edge_weight(&g, e, delta).unwrap() != Some(1) {
                    continue;
                }
                let s = subdivide(&g, e, delta).unwrap();
                let (u, v) = g.edge(e).unwrap().endpoints();
                let path = path_between(&s.graph, u, v, delta as usize - 1).unwrap();
                let back = contract_path(&s.graph, &path, delta).unwrap();
                assert!(iso(&back.graph, &g));
            }
        }
    }

    #[test]
    fn simplify_examples() {
        let s = simplify(&Multigraph::bond(3), 3).unwrap();
        assert_eq!((s.vertex_count(), s.edge_count()), (5, 6));
        assert!(!s.has_parallel_edges());
        assert!(spade(&s, 3));
        let g = c4_chord();
        assert_eq!(simplify(&g, 3).unwrap(), g);
        let c2 = simplify(&Multigraph::cycle(2), 2).unwrap();
        assert!(iso(&c2, &Multigraph::cycle(2)));
        assert!(spade(&c2, 2));
        assert!(simplify(&Multigraph::cycle(4), 3).is_err());
    }

    #[test]
    fn multi_gluing_matches_composition() {
        let c3 = Multigraph::cycle(3);
        let (g, e) = multi_gluing(&[(&c3, EdgeId(0)), (&c3, EdgeId(0))], 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 5));
        assert_eq!(edge_weight(&g, e, 3).unwrap(), Some(1));
        let composed = delta_edge_gluing(&c3, EdgeId(0), &c3, EdgeId(0), 3, false).unwrap();
        assert!(iso(&g, &composed.graph));

        let (same, _) = multi_gluing(&[(&c3, EdgeId(1))], 2).unwrap();
        assert_eq!(same, c3);

        let c4 = Multigraph::cycle(4);
        let (g, _) = multi_gluing(&[(&c4, EdgeId(0)), (&c4, EdgeId(0)), (&c4, EdgeId(0))], 4).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (8, 10));
        assert!(spade(&g, 4));
        let step = delta_edge_gluing(&c4, EdgeId(0), &c4, EdgeId(0), 4, false).unwrap();
        let composed = path_gluing(&step.graph, step.new_edges[0], &c4, EdgeId(0), 4, false).unwrap();
        assert!(iso(&g, &composed.graph));
    }

    #[test]
    fn gluing_is_not_reversible_in_general() {
        // four parallel edges in place of one edge of a 4-cycle
        let g1 = Multigraph::from_pairs(4, &[(0, 1), (0, 1), (0, 1), (0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        // two 4-cycles sharing the edge 0-1
        let g2 = Multigraph::from_pairs(6, &[(0, 1), (1, 2), (2, 3), (0, 3), (1, 4), (4, 5), (0, 5)]).unwrap();
        assert!(!spade(&g1, 4));
        assert!(!spade(&g2, 4));
        let glued = delta_gluing(&GluingSpec {
            left: &g1,
            left_class: vec![EdgeId(0), EdgeId(1), EdgeId(2), EdgeId(3)],
            right: &g2,
            right_class: vec![EdgeId(0)],
            delta: 4,
            flip: false,
        })
        .unwrap();
        assert!(spade(&glued.graph, 4));
    }

    #[test]
    fn decompose_seeds() {
        for d in 2..7 {
            let t = decompose(&Multigraph::cycle(d), d as i64).unwrap();
            assert_eq!(t, ConstructionTrace::seed_only(d as i64, Seed::Cycle(d)));
        }
        let t = decompose(&Multigraph::complete(4), 2).unwrap();
        assert_eq!(t, ConstructionTrace::seed_only(2, Seed::CliqueK4));
    }

    #[test]
    fn decompose_bond() {
        for n in 3..6 {
            let g = Multigraph::bond(n);
            let t = decompose(&g, n as i64).unwrap();
            assert!(iso(&t.replay().unwrap(), &g));
            assert!(t.steps.iter().any(|s| matches!(s, Step::DeltaGlue { .. })));
            assert!(t.steps.iter().any(|s| matches!(s, Step::PathContract { .. })));
        }
    }

    #[test]
    fn decompose_replays() {
        let mut k4_double = Multigraph::complete(4);
        let k4 = Multigraph::complete(4);
        k4_double = path_gluing(&k4_double, EdgeId(0), &k4, EdgeId(5), 2, false).unwrap().graph;
        let cases = [(c4_chord(), 3), (k4_double, 2), (Multigraph::complete(4).delete_edge(EdgeId(0)).unwrap(), 3)];
        for (g, delta) in cases {
            let t = decompose(&g, delta).unwrap_or_else(|| panic!("no trace for {g:?}"));
            assert!(iso(&t.replay().unwrap(), &g));
        }
        assert_eq!(decompose(&Multigraph::cycle(4), 3), None);
        assert_eq!(decompose(&Multigraph::complete(4).delete_edge(EdgeId(0)).unwrap(), 2), None);
        assert_eq!(decompose(&Multigraph::path(3), 2), None);
    }

    #[test]
    fn trace_json_round_trip() {
        let t = decompose(&Multigraph::bond(4), 4).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        let back: ConstructionTrace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        assert!(json.starts_with(r#"{"delta":4,"seed":{"cycle":4},"steps":["#));
    }
}
