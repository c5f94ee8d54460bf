//! Graphs with group actions, quotient gain graphs and gain-sparsity.
//!
//! The sparsity oracle is an exact subset enumeration; the intended scale
//! is quotient graphs with at most ~20 edges, where exactness matters more
//! than speed. The spanning-tight search is a lexicographic backtracking
//! over the oracle, so it stays correct even for parameter choices where
//! the sparse sets do not form a matroid.

use crate::groups::{GroupElement, SymmetryGroup};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SymGraphError {
    #[error("permutation for element {0} is not an automorphism of the graph")]
    NotAutomorphism(usize),
    #[error("action is not a homomorphism: {0}")]
    ActionNotHomomorphism(String),
    #[error("the group action is not free on the vertices")]
    ActionNotFree,
    #[error("edge references vertex {0} outside the graph")]
    BadVertex(usize),
}

/// A finite simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, SymGraphError> {
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a >= n {
                return Err(SymGraphError::BadVertex(a));
            }
            if b >= n {
                return Err(SymGraphError::BadVertex(b));
            }
            assert_ne!(a, b, "simple graphs have no loops");
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Graph {
            n,
            edges: set.into_iter().collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }
}

/// A graph together with a group acting on it by automorphisms.
#[derive(Debug, Clone)]
pub struct SymmetricGraph {
    pub graph: Graph,
    pub group: SymmetryGroup,
    /// One vertex permutation per group element, indexed by element id.
    pub action: Vec<Vec<usize>>,
    pub free_on_vertices: bool,
}

/// Fixed-vertex and fixed-edge counts per non-identity element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedCounts {
    /// (element, |V_gamma|, |E_gamma|) for each non-identity element.
    pub per_element: Vec<(GroupElement, usize, usize)>,
}

impl FixedCounts {
    pub fn max_fixed_vertices(&self) -> usize {
        self.per_element.iter().map(|&(_, v, _)| v).max().unwrap_or(0)
    }

    pub fn max_fixed_edges(&self) -> usize {
        self.per_element.iter().map(|&(_, _, e)| e).max().unwrap_or(0)
    }
}

fn compose_perm(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&v| outer[v]).collect()
}

fn is_automorphism(graph: &Graph, perm: &[usize]) -> bool {
    graph
        .edges()
        .iter()
        .all(|&(a, b)| graph.has_edge(perm[a], perm[b]))
}

/// Closes generator permutations into a full action and validates that
/// every element acts as a graph automorphism.
pub fn make_symmetric_graph(
    graph: Graph,
    group: SymmetryGroup,
    generator_perms: &[(GroupElement, Vec<usize>)],
) -> Result<SymmetricGraph, SymGraphError> {
    let n = graph.vertex_count();
    let order = group.order();
    let mut action: Vec<Option<Vec<usize>>> = vec![None; order];
    action[0] = Some((0..n).collect());
    for (g, perm) in generator_perms {
        if perm.len() != n {
            return Err(SymGraphError::ActionNotHomomorphism(format!(
                "permutation for element {} has wrong length",
                g.0
            )));
        }
        let mut seen = vec![false; n];
        for &v in perm {
            if v >= n || seen[v] {
                return Err(SymGraphError::ActionNotHomomorphism(format!(
                    "map for element {} is not a permutation",
                    g.0
                )));
            }
            seen[v] = true;
        }
        if let Some(existing) = &action[g.0] {
            if existing != perm {
                return Err(SymGraphError::ActionNotHomomorphism(format!(
                    "conflicting permutations for element {}",
                    g.0
                )));
            }
        }
        action[g.0] = Some(perm.clone());
    }
    // Close under composition: gen * known elements.
    let mut changed = true;
    while changed {
        changed = false;
        let known: Vec<usize> = (0..order).filter(|&e| action[e].is_some()).collect();
        for (g, _) in generator_perms {
            for &e in &known {
                let prod = group.compose(*g, GroupElement(e)).0;
                let composed = compose_perm(
                    action[g.0].as_ref().unwrap(),
                    action[e].as_ref().unwrap(),
                );
                match &action[prod] {
                    None => {
                        action[prod] = Some(composed);
                        changed = true;
                    }
                    Some(existing) => {
                        if *existing != composed {
                            return Err(SymGraphError::ActionNotHomomorphism(format!(
                                "generators force two different permutations on element {prod}"
                            )));
                        }
                    }
                }
            }
        }
    }
    let action: Vec<Vec<usize>> = action
        .into_iter()
        .enumerate()
        .map(|(e, p)| {
            p.ok_or_else(|| {
                SymGraphError::ActionNotHomomorphism(format!(
                    "generators do not reach element {e}"
                ))
            })
        })
        .collect::<Result<_, _>>()?;
    // Full homomorphism check over all pairs.
    for g in 0..order {
        for h in 0..order {
            let prod = group.compose(GroupElement(g), GroupElement(h)).0;
            if action[prod] != compose_perm(&action[g], &action[h]) {
                return Err(SymGraphError::ActionNotHomomorphism(format!(
                    "action({g})∘action({h}) differs from action({prod})"
                )));
            }
        }
    }
    for (e, perm) in action.iter().enumerate() {
        if !is_automorphism(&graph, perm) {
            return Err(SymGraphError::NotAutomorphism(e));
        }
    }
    let free_on_vertices = action
        .iter()
        .skip(1)
        .all(|perm| perm.iter().enumerate().all(|(v, &img)| img != v));
    Ok(SymmetricGraph {
        graph,
        group,
        action,
        free_on_vertices,
    })
}

impl SymmetricGraph {
    /// Trivially symmetric graph under the order-1 group.
    pub fn with_trivial_group(graph: Graph, group: SymmetryGroup) -> Self {
        assert_eq!(group.order(), 1);
        let n = graph.vertex_count();
        SymmetricGraph {
            graph,
            group,
            action: vec![(0..n).collect()],
            free_on_vertices: true,
        }
    }

    pub fn apply(&self, g: GroupElement, v: usize) -> usize {
        self.action[g.0][v]
    }

    /// Vertex orbits, each sorted, ordered by smallest member.
    pub fn vertex_orbits(&self) -> Vec<Vec<usize>> {
        let n = self.graph.vertex_count();
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for v in 0..n {
            if seen[v] {
                continue;
            }
            let mut orbit: BTreeSet<usize> = BTreeSet::new();
            for perm in &self.action {
                orbit.insert(perm[v]);
            }
            for &u in &orbit {
                seen[u] = true;
            }
            orbits.push(orbit.into_iter().collect());
        }
        orbits
    }

    /// Stabilizer of a vertex.
    pub fn stabilizer(&self, v: usize) -> Vec<GroupElement> {
        (0..self.group.order())
            .filter(|&g| self.action[g][v] == v)
            .map(GroupElement)
            .collect()
    }

    pub fn fixed_counts(&self) -> FixedCounts {
        let mut per_element = Vec::new();
        for g in 1..self.group.order() {
            let perm = &self.action[g];
            let fixed_v = perm.iter().enumerate().filter(|&(v, &img)| img == v).count();
            let fixed_e = self
                .graph
                .edges()
                .iter()
                .filter(|&&(a, b)| {
                    (perm[a] == a && perm[b] == b) || (perm[a] == b && perm[b] == a)
                })
                .count();
            per_element.push((GroupElement(g), fixed_v, fixed_e));
        }
        FixedCounts { per_element }
    }
}

/// An oriented multigraph with group-element edge labels; the quotient of a
/// symmetric graph under a free action.
#[derive(Debug, Clone)]
pub struct GainGraph {
    pub vertex_count: usize,
    /// (tail, head, gain); loops have tail == head and non-identity gain.
    pub edges: Vec<(usize, usize, GroupElement)>,
    pub group: SymmetryGroup,
}

impl GainGraph {
    pub fn new(
        vertex_count: usize,
        edges: Vec<(usize, usize, GroupElement)>,
        group: SymmetryGroup,
    ) -> Self {
        for &(t, h, gain) in &edges {
            assert!(t < vertex_count && h < vertex_count);
            assert!(
                t != h || gain != group.identity(),
                "loop gains must be non-identity"
            );
        }
        GainGraph {
            vertex_count,
            edges,
            group,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Quotient gain graph of a symmetric graph with a free action.
///
/// Orbit representatives are the smallest vertex index per orbit; edges are
/// oriented from the smaller orbit id to the larger, and loop gains are
/// normalized to `min(gain, gain^{-1})` by element id.
pub fn quotient_gain_graph(sg: &SymmetricGraph) -> Result<GainGraph, SymGraphError> {
    if !sg.free_on_vertices {
        return Err(SymGraphError::ActionNotFree);
    }
    let orbits = sg.vertex_orbits();
    let n = sg.graph.vertex_count();
    let mut orbit_of = vec![0usize; n];
    let mut rep_of_orbit = Vec::with_capacity(orbits.len());
    for (idx, orbit) in orbits.iter().enumerate() {
        rep_of_orbit.push(orbit[0]);
        for &v in orbit {
            orbit_of[v] = idx;
        }
    }
    // element mapping representative -> vertex; unique because the action
    // is free.
    let elem_to = |rep: usize, v: usize| -> GroupElement {
        for g in 0..sg.group.order() {
            if sg.action[g][rep] == v {
                return GroupElement(g);
            }
        }
        unreachable!("vertex not in the orbit of its representative")
    };
    let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut quotient_edges = Vec::new();
    for &(u, v) in sg.graph.edges() {
        if covered.contains(&(u, v)) {
            continue;
        }
        // mark the whole edge orbit
        for perm in &sg.action {
            let (a, b) = (perm[u], perm[v]);
            covered.insert((a.min(b), a.max(b)));
        }
        let (mut tail_v, mut head_v) = (u, v);
        if orbit_of[tail_v] > orbit_of[head_v] {
            std::mem::swap(&mut tail_v, &mut head_v);
        }
        let oi = orbit_of[tail_v];
        let oj = orbit_of[head_v];
        let i = rep_of_orbit[oi];
        let j = rep_of_orbit[oj];
        // Edge {tail_v, head_v} = {gamma i, gamma alpha j}: solve for gamma
        // then alpha.
        let gamma = elem_to(i, tail_v);
        let gamma_inv_head = sg.action[sg.group.inverse(gamma).0][head_v];
        let mut alpha = elem_to(j, gamma_inv_head);
        if oi == oj {
            // loop: direction is arbitrary, normalize the gain
            let alpha_inv = sg.group.inverse(alpha);
            if alpha_inv.0 < alpha.0 {
                alpha = alpha_inv;
            }
        }
        quotient_edges.push((oi, oj, alpha));
    }
    quotient_edges.sort_by_key(|&(t, h, g)| (t, h, g.0));
    Ok(GainGraph::new(
        orbits.len(),
        quotient_edges,
        sg.group.clone(),
    ))
}

/// Covering graph of a gain graph: vertex set `V0 x Γ`, with the group
/// acting by left multiplication on the second coordinate. A gain edge
/// `(i,j;α)` lifts to the edges `{(i,g), (j,g·α)}` for every `g`.
pub fn lift(gg: &GainGraph) -> SymmetricGraph {
    let order = gg.group.order();
    let n = gg.vertex_count * order;
    let vid = |v: usize, g: usize| v * order + g;
    let mut edges = Vec::new();
    for &(t, h, alpha) in &gg.edges {
        for g in 0..order {
            let ga = gg.group.compose(GroupElement(g), alpha).0;
            edges.push((vid(t, g), vid(h, ga)));
        }
    }
    let graph = Graph::new(n, &edges).expect("lift produces valid edges");
    let action: Vec<Vec<usize>> = (0..order)
        .map(|g| {
            (0..n)
                .map(|v| {
                    let (base, elem) = (v / order, v % order);
                    vid(base, gg.group.compose(GroupElement(g), GroupElement(elem)).0)
                })
                .collect()
        })
        .collect();
    SymmetricGraph {
        graph,
        group: gg.group.clone(),
        action,
        free_on_vertices: true,
    }
}

/// True iff every closed walk inside the edge subset has identity gain.
///
/// Computed per connected component via spanning-tree potentials: assign
/// the identity at the root, propagate `phi(head) = phi(tail)·gain` along
/// tree edges, then check that every non-tree edge satisfies
/// `phi(tail)·gain·phi(head)^{-1} = 1`.
pub fn is_balanced(gg: &GainGraph, subset: &[usize]) -> bool {
    assert!(!subset.is_empty(), "balance is defined on nonempty subsets");
    let group = &gg.group;
    let mut phi: BTreeMap<usize, GroupElement> = BTreeMap::new();
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &e in subset {
        let (t, h, _) = gg.edges[e];
        adj.entry(t).or_default().push(e);
        adj.entry(h).or_default().push(e);
    }
    let vertices: Vec<usize> = adj.keys().cloned().collect();
    for &root in &vertices {
        if phi.contains_key(&root) {
            continue;
        }
        phi.insert(root, group.identity());
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            let pv = phi[&v];
            for &e in &adj[&v] {
                let (t, h, gain) = gg.edges[e];
                if t == v && !phi.contains_key(&h) {
                    phi.insert(h, group.compose(pv, gain));
                    stack.push(h);
                } else if h == v && !phi.contains_key(&t) {
                    phi.insert(t, group.compose(pv, group.inverse(gain)));
                    stack.push(t);
                }
            }
        }
    }
    subset.iter().all(|&e| {
        let (t, h, gain) = gg.edges[e];
        let walk = group.compose(group.compose(phi[&t], gain), group.inverse(phi[&h]));
        walk == group.identity()
    })
}

/// Sparsity parameters `(k, l, m)` with `k >= 1` and `0 <= m <= l <= 2k-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SparsityParams {
    pub k: usize,
    pub l: usize,
    pub m: usize,
}

impl SparsityParams {
    pub fn new(k: usize, l: usize, m: usize) -> Self {
        assert!(k >= 1, "k must be at least 1");
        assert!(m <= l && l <= 2 * k - 1, "need 0 <= m <= l <= 2k-1");
        SparsityParams { k, l, m }
    }
}

/// Verdict of the sparsity oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SparsityVerdict {
    Sparse,
    /// A violating edge subset that is minimal (no proper subset violates).
    Violation(Vec<usize>),
}

impl SparsityVerdict {
    pub fn is_sparse(&self) -> bool {
        matches!(self, SparsityVerdict::Sparse)
    }
}

fn incident_vertex_count(gg: &GainGraph, subset: &[usize]) -> usize {
    let mut vs = BTreeSet::new();
    for &e in subset {
        let (t, h, _) = gg.edges[e];
        vs.insert(t);
        vs.insert(h);
    }
    vs.len()
}

fn subset_violates(gg: &GainGraph, params: SparsityParams, subset: &[usize]) -> bool {
    let nv = incident_vertex_count(gg, subset);
    let count = subset.len() as i64;
    let bound_all = params.k as i64 * nv as i64 - params.m as i64;
    if count > bound_all {
        return true;
    }
    let bound_balanced = params.k as i64 * nv as i64 - params.l as i64;
    count > bound_balanced && is_balanced(gg, subset)
}

/// Advances to the next k-combination of `0..n` in lexicographic order.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exact `(k,l,m)`-gain-sparsity decision by exhaustive enumeration in
/// order of subset size, so a reported violation is minimal.
pub fn is_gain_sparse(gg: &GainGraph, params: SparsityParams) -> SparsityVerdict {
    let ne = gg.edge_count();
    assert!(ne <= 26, "sparsity oracle is exponential; too many edges");
    for size in 1..=ne {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            if subset_violates(gg, params, &subset) {
                return SparsityVerdict::Violation(subset);
            }
            if !next_combination(&mut subset, ne) {
                break;
            }
        }
    }
    SparsityVerdict::Sparse
}

/// Incremental variant: assuming `current` is sparse, decides whether
/// `current + new_edge` stays sparse. Any violating subset must contain the
/// new edge, so only those subsets are enumerated.
fn stays_sparse(gg: &GainGraph, params: SparsityParams, current: &[usize], new_edge: usize) -> bool {
    let n = current.len();
    for mask in 0..(1u64 << n) {
        let mut subset: Vec<usize> = Vec::with_capacity(n + 1);
        for (i, &e) in current.iter().enumerate() {
            if mask & (1 << i) != 0 {
                subset.push(e);
            }
        }
        subset.push(new_edge);
        subset.sort_unstable();
        if subset_violates(gg, params, &subset) {
            return false;
        }
    }
    true
}

/// Searches for a spanning `(k,l,m)`-gain-tight subgraph: exactly
/// `k|V0| - m` edges forming a sparse set. Lexicographic backtracking over
/// the oracle returns the lexicographically least witness, or `None`.
pub fn has_spanning_gain_tight(gg: &GainGraph, params: SparsityParams) -> Option<Vec<usize>> {
    let target = params.k as i64 * gg.vertex_count as i64 - params.m as i64;
    if target < 0 {
        return None;
    }
    let target = target as usize;
    let ne = gg.edge_count();
    if target > ne {
        return None;
    }
    fn dfs(
        gg: &GainGraph,
        params: SparsityParams,
        chosen: &mut Vec<usize>,
        next: usize,
        target: usize,
    ) -> Option<Vec<usize>> {
        if chosen.len() == target {
            return Some(chosen.clone());
        }
        let remaining = gg.edge_count() - next;
        if chosen.len() + remaining < target {
            return None;
        }
        for e in next..gg.edge_count() {
            if gg.edge_count() - e + chosen.len() < target {
                break;
            }
            if stays_sparse(gg, params, chosen, e) {
                chosen.push(e);
                if let Some(result) = dfs(gg, params, chosen, e + 1, target) {
                    return Some(result);
                }
                chosen.pop();
            }
        }
        None
    }
    let mut chosen = Vec::new();
    dfs(gg, params, &mut chosen, 0, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_schoenflies, SchoenfliesLabel};

    fn z2() -> SymmetryGroup {
        make_schoenflies(2, SchoenfliesLabel::Cn, 2).unwrap()
    }

    fn trivial_group() -> SymmetryGroup {
        make_schoenflies(2, SchoenfliesLabel::Cn, 1).unwrap()
    }

    /// K4 minus an edge on vertices a=0, a'=1, b=2, b'=3 (missing {b,b'}),
    /// with the half-turn action (a a')(b b').
    fn k4_minus_e() -> SymmetricGraph {
        let graph = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        make_symmetric_graph(graph, z2(), &[(GroupElement(1), vec![1, 0, 3, 2])]).unwrap()
    }

    #[test]
    fn k4_minus_e_is_free() {
        let sg = k4_minus_e();
        assert!(sg.free_on_vertices);
        assert_eq!(sg.graph.edge_count(), 5);
    }

    #[test]
    fn triangle_with_identity_group() {
        let graph = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let sg = make_symmetric_graph(graph, trivial_group(), &[]).unwrap();
        assert!(sg.free_on_vertices);
    }

    #[test]
    fn path_with_fixed_midpoint() {
        let graph = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let sg = make_symmetric_graph(graph, z2(), &[(GroupElement(1), vec![2, 1, 0])]).unwrap();
        assert!(!sg.free_on_vertices);
        let counts = sg.fixed_counts();
        assert_eq!(counts.per_element, vec![(GroupElement(1), 1, 0)]);
    }

    #[test]
    fn rejects_non_automorphism() {
        let graph = Graph::new(3, &[(0, 1)]).unwrap();
        let err = make_symmetric_graph(graph, z2(), &[(GroupElement(1), vec![0, 2, 1])]);
        assert!(matches!(err, Err(SymGraphError::NotAutomorphism(_))));
    }

    #[test]
    fn rejects_non_homomorphism() {
        // A 3-cycle permutation cannot represent an order-2 element.
        let graph = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let err = make_symmetric_graph(graph, z2(), &[(GroupElement(1), vec![1, 2, 0])]);
        assert!(matches!(err, Err(SymGraphError::ActionNotHomomorphism(_))));
    }

    #[test]
    fn fixed_counts_k4_minus_e() {
        let counts = k4_minus_e().fixed_counts();
        assert_eq!(counts.per_element, vec![(GroupElement(1), 0, 1)]);
    }

    #[test]
    fn fixed_counts_identity_group_empty() {
        let graph = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let sg = make_symmetric_graph(graph, trivial_group(), &[]).unwrap();
        assert!(sg.fixed_counts().per_element.is_empty());
    }

    #[test]
    fn quotient_of_k4_minus_e() {
        let gg = quotient_gain_graph(&k4_minus_e()).unwrap();
        assert_eq!(gg.vertex_count, 2);
        let gains: Vec<(usize, usize, usize)> =
            gg.edges.iter().map(|&(t, h, g)| (t, h, g.0)).collect();
        // loop at orbit 0 with the non-trivial gain, plus parallel edges
        // (0,1) with gains 1 and gamma
        assert_eq!(gains, vec![(0, 0, 1), (0, 1, 0), (0, 1, 1)]);
    }

    #[test]
    fn quotient_requires_free_action() {
        let graph = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let sg = make_symmetric_graph(graph, z2(), &[(GroupElement(1), vec![2, 1, 0])]).unwrap();
        assert!(matches!(
            quotient_gain_graph(&sg),
            Err(SymGraphError::ActionNotFree)
        ));
    }

    #[test]
    fn quotient_of_six_cycle_under_c3() {
        let graph =
            Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]).unwrap();
        let c3 = make_schoenflies(2, SchoenfliesLabel::Cn, 3).unwrap();
        let sg = make_symmetric_graph(
            graph,
            c3,
            &[(GroupElement(1), vec![2, 3, 4, 5, 0, 1])],
        )
        .unwrap();
        let gg = quotient_gain_graph(&sg).unwrap();
        assert_eq!(gg.vertex_count, 2);
        assert_eq!(gg.edge_count(), 2);
    }

    #[test]
    fn quotient_identity_group_is_graph_itself() {
        let graph = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let sg = make_symmetric_graph(graph.clone(), trivial_group(), &[]).unwrap();
        let gg = quotient_gain_graph(&sg).unwrap();
        assert_eq!(gg.vertex_count, 3);
        assert_eq!(gg.edge_count(), 3);
        assert!(gg.edges.iter().all(|&(_, _, g)| g.0 == 0));
    }

    #[test]
    fn lift_single_loop() {
        let gg = GainGraph::new(1, vec![(0, 0, GroupElement(1))], z2());
        let sg = lift(&gg);
        assert_eq!(sg.graph.vertex_count(), 2);
        assert_eq!(sg.graph.edge_count(), 1);
    }

    #[test]
    fn lift_identity_edge_under_c3() {
        let c3 = make_schoenflies(2, SchoenfliesLabel::Cn, 3).unwrap();
        let gg = GainGraph::new(2, vec![(0, 1, GroupElement(0))], c3);
        let sg = lift(&gg);
        assert_eq!(sg.graph.vertex_count(), 6);
        assert_eq!(sg.graph.edge_count(), 3);
        assert!(!sg.graph.is_connected());
    }

    /// Canonical form of a symmetric graph for isomorphism-by-relabeling
    /// checks: sorted degree-refined orbit structure is overkill here; the
    /// round trip produces a vertex bijection directly.
    #[test]
    fn quotient_lift_round_trip() {
        let sg = k4_minus_e();
        let gg = quotient_gain_graph(&sg).unwrap();
        let lifted = lift(&gg);
        assert_eq!(lifted.graph.vertex_count(), sg.graph.vertex_count());
        assert_eq!(lifted.graph.edge_count(), sg.graph.edge_count());
        // explicit relabeling: lifted vertex (orbit i, group g) corresponds
        // to the original vertex action[g][rep_i]
        let orbits = sg.vertex_orbits();
        let order = sg.group.order();
        let relabel: Vec<usize> = (0..lifted.graph.vertex_count())
            .map(|v| sg.action[v % order][orbits[v / order][0]])
            .collect();
        let mut mapped: Vec<(usize, usize)> = lifted
            .graph
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (relabel[a], relabel[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        mapped.sort_unstable();
        assert_eq!(mapped, sg.graph.edges());
    }

    #[test]
    fn balance_basics() {
        let g = z2();
        // two parallel edges with gains 1 and gamma: unbalanced
        let gg = GainGraph::new(
            2,
            vec![(0, 1, GroupElement(0)), (0, 1, GroupElement(1))],
            g.clone(),
        );
        assert!(!is_balanced(&gg, &[0, 1]));
        assert!(is_balanced(&gg, &[0]));
        assert!(is_balanced(&gg, &[1]));

        // a forest is balanced
        let forest = GainGraph::new(
            4,
            vec![
                (0, 1, GroupElement(1)),
                (1, 2, GroupElement(1)),
                (0, 3, GroupElement(1)),
            ],
            g.clone(),
        );
        assert!(is_balanced(&forest, &[0, 1, 2]));

        // triangle with gains gamma, gamma, 1: cycle product is identity
        let tri = GainGraph::new(
            3,
            vec![
                (0, 1, GroupElement(1)),
                (1, 2, GroupElement(1)),
                (0, 2, GroupElement(0)),
            ],
            g,
        );
        assert!(is_balanced(&tri, &[0, 1, 2]));
    }

    #[test]
    fn sparsity_loops() {
        let g = z2();
        let params = SparsityParams::new(2, 3, 1);
        let one_loop = GainGraph::new(1, vec![(0, 0, GroupElement(1))], g.clone());
        assert!(is_gain_sparse(&one_loop, params).is_sparse());

        // a second loop with the same gain is impossible in Z2 quotients of
        // simple graphs, but the oracle handles the abstract instance
        let two_loops = GainGraph::new(
            1,
            vec![(0, 0, GroupElement(1)), (0, 0, GroupElement(1))],
            g,
        );
        match is_gain_sparse(&two_loops, params) {
            SparsityVerdict::Violation(v) => assert_eq!(v, vec![0, 1]),
            SparsityVerdict::Sparse => panic!("two loops on one vertex are not (2,3,1)-sparse"),
        }
    }

    #[test]
    fn k4_minus_e_quotient_is_tight() {
        let gg = quotient_gain_graph(&k4_minus_e()).unwrap();
        let params = SparsityParams::new(2, 3, 1);
        assert!(is_gain_sparse(&gg, params).is_sparse());
        assert_eq!(gg.edge_count(), 2 * gg.vertex_count - 1);
        let witness = has_spanning_gain_tight(&gg, params).unwrap();
        assert_eq!(witness, vec![0, 1, 2]);
    }

    #[test]
    fn k4_minus_e_quotient_232_witness() {
        let gg = quotient_gain_graph(&k4_minus_e()).unwrap();
        let witness = has_spanning_gain_tight(&gg, SparsityParams::new(2, 3, 2)).unwrap();
        assert_eq!(witness.len(), 2);
        // the two parallel (0,1) edges with different gains
        assert_eq!(witness, vec![1, 2]);
    }

    #[test]
    fn tight_search_fails_on_single_edge() {
        let gg = GainGraph::new(2, vec![(0, 1, GroupElement(0))], z2());
        assert!(has_spanning_gain_tight(&gg, SparsityParams::new(2, 3, 1)).is_none());
    }

    /// Direct all-subsets oracle used to cross-check the sized enumeration.
    fn sparse_by_direct_enumeration(gg: &GainGraph, params: SparsityParams) -> bool {
        let ne = gg.edge_count();
        for mask in 1..(1u64 << ne) {
            let subset: Vec<usize> = (0..ne).filter(|&e| mask & (1 << e) != 0).collect();
            if subset_violates(gg, params, &subset) {
                return false;
            }
        }
        true
    }

    #[test]
    fn oracle_matches_direct_enumeration() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let g = z2();
        for _ in 0..60 {
            let nv = rng.random_range(1..5usize);
            let ne = rng.random_range(1..9usize);
            let mut edges = Vec::new();
            for _ in 0..ne {
                let t = rng.random_range(0..nv);
                let h = rng.random_range(0..nv);
                let gain = if t == h {
                    GroupElement(1)
                } else {
                    GroupElement(rng.random_range(0..2usize))
                };
                edges.push((t.min(h), t.max(h), gain));
            }
            let gg = GainGraph::new(nv, edges, g.clone());
            for (k, l, m) in [(2, 3, 1), (2, 3, 2), (1, 1, 0), (2, 2, 2)] {
                let params = SparsityParams::new(k, l, m);
                assert_eq!(
                    is_gain_sparse(&gg, params).is_sparse(),
                    sparse_by_direct_enumeration(&gg, params),
                    "mismatch on {:?} with {:?}",
                    gg.edges,
                    params
                );
            }
        }
    }

    #[test]
    fn balance_root_invariance() {
        // re-rooting / reordering the subset never changes the verdict
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let c4 = make_schoenflies(2, SchoenfliesLabel::Cn, 4).unwrap();
        for _ in 0..40 {
            let nv = rng.random_range(2..5usize);
            let ne = rng.random_range(1..7usize);
            let edges: Vec<(usize, usize, GroupElement)> = (0..ne)
                .map(|_| {
                    let t = rng.random_range(0..nv);
                    let mut h = rng.random_range(0..nv);
                    let mut gain = GroupElement(rng.random_range(0..4usize));
                    if t == h {
                        if gain.0 == 0 {
                            gain = GroupElement(1);
                        }
                        h = t;
                    }
                    (t, h, gain)
                })
                .collect();
            let gg = GainGraph::new(nv, edges, c4.clone());
            let subset: Vec<usize> = (0..ne).collect();
            let verdict = is_balanced(&gg, &subset);
            for _ in 0..5 {
                let mut shuffled = subset.clone();
                shuffled.shuffle(&mut rng);
                let permuted = GainGraph::new(
                    nv,
                    shuffled.iter().map(|&e| gg.edges[e]).collect(),
                    c4.clone(),
                );
                assert_eq!(is_balanced(&permuted, &subset), verdict);
            }
        }
    }

    #[test]
    fn tight_witness_is_sparse_with_right_count() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let g = z2();
        for _ in 0..40 {
            let nv = rng.random_range(1..4usize);
            let ne = rng.random_range(1..9usize);
            let edges: Vec<(usize, usize, GroupElement)> = (0..ne)
                .map(|_| {
                    let t = rng.random_range(0..nv);
                    let h = rng.random_range(0..nv);
                    let gain = if t == h {
                        GroupElement(1)
                    } else {
                        GroupElement(rng.random_range(0..2usize))
                    };
                    (t.min(h), t.max(h), gain)
                })
                .collect();
            let gg = GainGraph::new(nv, edges, g.clone());
            let params = SparsityParams::new(2, 3, 1);
            if let Some(w) = has_spanning_gain_tight(&gg, params) {
                assert_eq!(w.len(), 2 * nv - 1);
                let sub = GainGraph::new(
                    nv,
                    w.iter().map(|&e| gg.edges[e]).collect(),
                    g.clone(),
                );
                assert!(is_gain_sparse(&sub, params).is_sparse());
            }
        }
    }
}
