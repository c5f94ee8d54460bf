//! The three framework spaces and their rigidity matrices.
//!
//! A bar-joint framework realizes a graph by points in `R^d` with rows
//! `<p_i - p_j, u_i - u_j> = 0`. A spherical framework realizes it by unit
//! vectors in `R^{d+1}` with rows `<p_i, u_j> + <p_j, u_i> = 0` plus one
//! tangency row `<p_i, u_i> = 0` per vertex. A point-hyperplane framework
//! mixes points with hyperplanes `(a, r)` (unit normal and offset) under
//! distance, incidence-derivative and angle rows plus one normal-tangency
//! row per hyperplane.
//!
//! Columns are vertex-major with coordinates minor; point-hyperplane
//! frameworks order all point blocks before all hyperplane blocks, each
//! hyperplane block being the normal velocity followed by the offset
//! velocity.

use crate::groups::{GroupElement, SymmetryGroup};
use crate::numerics::{self, NumericsError, TolerancePolicy};
use crate::symgraph::{Graph, SymmetricGraph};
use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use thiserror::Error;

/// Coordinates this close to the equator plane are classified as lying on
/// it (and then snapped to exactly zero).
pub const EQUATOR_TOL: f64 = 1e-9;

/// Orbit conditions are checked entrywise at this tolerance.
pub const SYMMETRY_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum FrameworkError {
    #[error("configuration does not span; trivial motions have dimension {}", fallback.ncols())]
    SpanDeficient { fallback: DMatrix<f64> },
    #[error("vertex {0} is fixed by a symmetry whose fixed subspace does not meet the sphere")]
    UnrealizableFixedVertex(usize),
    #[error("vertex subset is not closed under the group action")]
    NotOrbitClosed,
    #[error("point {0} has near-zero norm and cannot be normalized")]
    ZeroVector(usize),
    #[error("equator classification does not match the designated set X")]
    EquatorMismatch,
    #[error("sampled framework failed symmetry validation: {0}")]
    SymmetryUnrealizable(String),
    #[error("{0}")]
    BadInput(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Bar-joint framework in `R^d`.
#[derive(Debug, Clone)]
pub struct EuclideanFramework {
    pub graph: Graph,
    pub d: usize,
    pub points: Vec<DVector<f64>>,
}

impl EuclideanFramework {
    pub fn new(graph: Graph, d: usize, points: Vec<DVector<f64>>) -> Result<Self, FrameworkError> {
        if points.len() != graph.vertex_count() {
            return Err(FrameworkError::BadInput(
                "one point required per vertex".into(),
            ));
        }
        for p in &points {
            if p.len() != d || p.iter().any(|x| !x.is_finite()) {
                return Err(FrameworkError::BadInput("bad point coordinates".into()));
            }
        }
        Ok(EuclideanFramework { graph, d, points })
    }
}

/// Bar-joint framework on the unit sphere `S^d` in `R^{d+1}`, with a
/// designated set of vertices on the equator (last coordinate zero).
#[derive(Debug, Clone)]
pub struct SphericalFramework {
    pub graph: Graph,
    pub d: usize,
    pub points: Vec<DVector<f64>>,
    pub equator: BTreeSet<usize>,
}

impl SphericalFramework {
    /// Normalizes the points, classifies equator membership at
    /// [`EQUATOR_TOL`] and snaps equator coordinates to exactly zero.
    pub fn new(graph: Graph, d: usize, points: Vec<DVector<f64>>) -> Result<Self, FrameworkError> {
        if points.len() != graph.vertex_count() {
            return Err(FrameworkError::BadInput(
                "one point required per vertex".into(),
            ));
        }
        let ambient = d + 1;
        let mut normed = Vec::with_capacity(points.len());
        let mut equator = BTreeSet::new();
        for (i, p) in points.into_iter().enumerate() {
            if p.len() != ambient || p.iter().any(|x| !x.is_finite()) {
                return Err(FrameworkError::BadInput("bad point coordinates".into()));
            }
            let norm = p.norm();
            if norm < 1e-12 {
                return Err(FrameworkError::ZeroVector(i));
            }
            let mut q = p / norm;
            if q[ambient - 1].abs() <= EQUATOR_TOL {
                q[ambient - 1] = 0.0;
                let renorm = q.norm();
                q /= renorm;
                equator.insert(i);
            }
            normed.push(q);
        }
        Ok(SphericalFramework {
            graph,
            d,
            points: normed,
            equator,
        })
    }

    pub fn ambient(&self) -> usize {
        self.d + 1
    }
}

/// Vertex payload of a point-hyperplane framework.
#[derive(Debug, Clone)]
pub enum PhVertex {
    Point(DVector<f64>),
    /// Hyperplane `{x : <normal, x> + offset = 0}` with a unit normal.
    Hyperplane { normal: DVector<f64>, offset: f64 },
}

impl PhVertex {
    pub fn is_hyperplane(&self) -> bool {
        matches!(self, PhVertex::Hyperplane { .. })
    }
}

/// Point-hyperplane framework in `R^d`.
#[derive(Debug, Clone)]
pub struct PointHyperplaneFramework {
    pub graph: Graph,
    pub d: usize,
    pub vertices: Vec<PhVertex>,
}

/// Kind of a point-hyperplane edge, induced by its endpoint kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhEdgeKind {
    PointPoint,
    PointHyperplane,
    HyperplaneHyperplane,
}

impl PointHyperplaneFramework {
    pub fn new(graph: Graph, d: usize, vertices: Vec<PhVertex>) -> Result<Self, FrameworkError> {
        if vertices.len() != graph.vertex_count() {
            return Err(FrameworkError::BadInput(
                "one payload required per vertex".into(),
            ));
        }
        let mut normed = Vec::with_capacity(vertices.len());
        for (i, v) in vertices.into_iter().enumerate() {
            match v {
                PhVertex::Point(p) => {
                    if p.len() != d || p.iter().any(|x| !x.is_finite()) {
                        return Err(FrameworkError::BadInput("bad point coordinates".into()));
                    }
                    normed.push(PhVertex::Point(p));
                }
                PhVertex::Hyperplane { normal, offset } => {
                    if normal.len() != d || !offset.is_finite() {
                        return Err(FrameworkError::BadInput("bad hyperplane data".into()));
                    }
                    let norm = normal.norm();
                    if norm < 1e-12 {
                        return Err(FrameworkError::ZeroVector(i));
                    }
                    normed.push(PhVertex::Hyperplane {
                        normal: normal / norm,
                        offset: offset / norm,
                    });
                }
            }
        }
        Ok(PointHyperplaneFramework {
            graph,
            d,
            vertices: normed,
        })
    }

    pub fn hyperplane_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.vertices[v].is_hyperplane())
            .collect()
    }

    pub fn point_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| !self.vertices[v].is_hyperplane())
            .collect()
    }

    pub fn edge_kind(&self, a: usize, b: usize) -> PhEdgeKind {
        match (
            self.vertices[a].is_hyperplane(),
            self.vertices[b].is_hyperplane(),
        ) {
            (false, false) => PhEdgeKind::PointPoint,
            (true, true) => PhEdgeKind::HyperplaneHyperplane,
            _ => PhEdgeKind::PointHyperplane,
        }
    }

    /// Column offset of each vertex: point blocks (width d) first, then
    /// hyperplane blocks (width d+1, normal then offset).
    pub fn column_offsets(&self) -> (Vec<usize>, usize) {
        let n = self.vertices.len();
        let mut offsets = vec![0usize; n];
        let mut off = 0;
        for v in 0..n {
            if !self.vertices[v].is_hyperplane() {
                offsets[v] = off;
                off += self.d;
            }
        }
        for v in 0..n {
            if self.vertices[v].is_hyperplane() {
                offsets[v] = off;
                off += self.d + 1;
            }
        }
        (offsets, off)
    }

    /// Shifts all hyperplane offsets to zero; translation of a hyperplane
    /// does not affect first-order rigidity.
    pub fn with_zero_offsets(&self) -> Self {
        let mut fw = self.clone();
        for v in &mut fw.vertices {
            if let PhVertex::Hyperplane { offset, .. } = v {
                *offset = 0.0;
            }
        }
        fw
    }
}

/// Any of the three framework spaces.
#[derive(Debug, Clone)]
pub enum Framework {
    Euclidean(EuclideanFramework),
    Spherical(SphericalFramework),
    PointHyperplane(PointHyperplaneFramework),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Euclidean,
    Spherical,
    Ph,
}

impl Framework {
    pub fn space(&self) -> SpaceKind {
        match self {
            Framework::Euclidean(_) => SpaceKind::Euclidean,
            Framework::Spherical(_) => SpaceKind::Spherical,
            Framework::PointHyperplane(_) => SpaceKind::Ph,
        }
    }

    pub fn graph(&self) -> &Graph {
        match self {
            Framework::Euclidean(f) => &f.graph,
            Framework::Spherical(f) => &f.graph,
            Framework::PointHyperplane(f) => &f.graph,
        }
    }

    pub fn rigidity_matrix(&self) -> DMatrix<f64> {
        match self {
            Framework::Euclidean(f) => rigidity_matrix_euclidean(f),
            Framework::Spherical(f) => rigidity_matrix_spherical(f),
            Framework::PointHyperplane(f) => rigidity_matrix_ph(f),
        }
    }
}

/// `|E| x d|V|` matrix with `p_i - p_j` in block `i` and the negative in
/// block `j`.
pub fn rigidity_matrix_euclidean(fw: &EuclideanFramework) -> DMatrix<f64> {
    let d = fw.d;
    let mut m = DMatrix::zeros(fw.graph.edge_count(), d * fw.graph.vertex_count());
    for (row, &(i, j)) in fw.graph.edges().iter().enumerate() {
        let diff = &fw.points[i] - &fw.points[j];
        for c in 0..d {
            m[(row, i * d + c)] = diff[c];
            m[(row, j * d + c)] = -diff[c];
        }
    }
    m
}

/// `(|E| + |V|) x (d+1)|V|` matrix: edge row `{i,j}` carries `p_j` in block
/// `i` and `p_i` in block `j`; the tangency row of vertex `i` carries `p_i`
/// in block `i`.
pub fn rigidity_matrix_spherical(fw: &SphericalFramework) -> DMatrix<f64> {
    let a = fw.ambient();
    let n = fw.graph.vertex_count();
    let ne = fw.graph.edge_count();
    let mut m = DMatrix::zeros(ne + n, a * n);
    for (row, &(i, j)) in fw.graph.edges().iter().enumerate() {
        for c in 0..a {
            m[(row, i * a + c)] += fw.points[j][c];
            m[(row, j * a + c)] += fw.points[i][c];
        }
    }
    for v in 0..n {
        for c in 0..a {
            m[(ne + v, v * a + c)] = fw.points[v][c];
        }
    }
    m
}

/// `(|E| + |V_H|) x (d|V_P| + (d+1)|V_H|)` point-hyperplane matrix.
pub fn rigidity_matrix_ph(fw: &PointHyperplaneFramework) -> DMatrix<f64> {
    let d = fw.d;
    let (offsets, cols) = fw.column_offsets();
    let hypers = fw.hyperplane_vertices();
    let ne = fw.graph.edge_count();
    let mut m = DMatrix::zeros(ne + hypers.len(), cols);
    for (row, &(i, j)) in fw.graph.edges().iter().enumerate() {
        match fw.edge_kind(i, j) {
            PhEdgeKind::PointPoint => {
                let (PhVertex::Point(pi), PhVertex::Point(pj)) =
                    (&fw.vertices[i], &fw.vertices[j])
                else {
                    unreachable!()
                };
                let diff = pi - pj;
                for c in 0..d {
                    m[(row, offsets[i] + c)] = diff[c];
                    m[(row, offsets[j] + c)] = -diff[c];
                }
            }
            PhEdgeKind::PointHyperplane => {
                let (pv, hv) = if fw.vertices[i].is_hyperplane() {
                    (j, i)
                } else {
                    (i, j)
                };
                let PhVertex::Point(p) = &fw.vertices[pv] else {
                    unreachable!()
                };
                let PhVertex::Hyperplane { normal, .. } = &fw.vertices[hv] else {
                    unreachable!()
                };
                for c in 0..d {
                    m[(row, offsets[pv] + c)] = normal[c];
                    m[(row, offsets[hv] + c)] = p[c];
                }
                m[(row, offsets[hv] + d)] = 1.0;
            }
            PhEdgeKind::HyperplaneHyperplane => {
                let (PhVertex::Hyperplane { normal: ai, .. }, PhVertex::Hyperplane { normal: aj, .. }) =
                    (&fw.vertices[i], &fw.vertices[j])
                else {
                    unreachable!()
                };
                for c in 0..d {
                    m[(row, offsets[i] + c)] = aj[c];
                    m[(row, offsets[j] + c)] = ai[c];
                }
            }
        }
    }
    for (k, &h) in hypers.iter().enumerate() {
        let PhVertex::Hyperplane { normal, .. } = &fw.vertices[h] else {
            unreachable!()
        };
        for c in 0..d {
            m[(ne + k, offsets[h] + c)] = normal[c];
        }
    }
    m
}

fn skew_basis(n: usize) -> Vec<DMatrix<f64>> {
    let mut basis = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let mut s = DMatrix::zeros(n, n);
            s[(a, b)] = -1.0;
            s[(b, a)] = 1.0;
            basis.push(s);
        }
    }
    basis
}

/// Candidate generators of the trivial motions, one column per isometry
/// generator.
fn trivial_generators(fw: &Framework) -> DMatrix<f64> {
    match fw {
        Framework::Euclidean(f) => {
            let d = f.d;
            let n = f.graph.vertex_count();
            let mut cols: Vec<DVector<f64>> = Vec::new();
            for k in 0..d {
                let mut u = DVector::zeros(d * n);
                for v in 0..n {
                    u[v * d + k] = 1.0;
                }
                cols.push(u);
            }
            for s in skew_basis(d) {
                let mut u = DVector::zeros(d * n);
                for v in 0..n {
                    let sv = &s * &f.points[v];
                    for c in 0..d {
                        u[v * d + c] = sv[c];
                    }
                }
                cols.push(u);
            }
            DMatrix::from_columns(&cols)
        }
        Framework::Spherical(f) => {
            let a = f.ambient();
            let n = f.graph.vertex_count();
            let cols: Vec<DVector<f64>> = skew_basis(a)
                .into_iter()
                .map(|s| {
                    let mut u = DVector::zeros(a * n);
                    for v in 0..n {
                        let sv = &s * &f.points[v];
                        for c in 0..a {
                            u[v * a + c] = sv[c];
                        }
                    }
                    u
                })
                .collect();
            DMatrix::from_columns(&cols)
        }
        Framework::PointHyperplane(f) => {
            let d = f.d;
            let (offsets, cols_total) = f.column_offsets();
            let mut cols: Vec<DVector<f64>> = Vec::new();
            // translations: points move by e_k, hyperplanes keep their
            // normal and change offset by -<a, e_k>
            for k in 0..d {
                let mut u = DVector::zeros(cols_total);
                for (v, payload) in f.vertices.iter().enumerate() {
                    match payload {
                        PhVertex::Point(_) => u[offsets[v] + k] = 1.0,
                        PhVertex::Hyperplane { normal, .. } => {
                            u[offsets[v] + d] = -normal[k];
                        }
                    }
                }
                cols.push(u);
            }
            // rotations: points move by S p, normals by S a, offsets fixed
            for s in skew_basis(d) {
                let mut u = DVector::zeros(cols_total);
                for (v, payload) in f.vertices.iter().enumerate() {
                    match payload {
                        PhVertex::Point(p) => {
                            let sv = &s * p;
                            for c in 0..d {
                                u[offsets[v] + c] = sv[c];
                            }
                        }
                        PhVertex::Hyperplane { normal, .. } => {
                            let sv = &s * normal;
                            for c in 0..d {
                                u[offsets[v] + c] = sv[c];
                            }
                        }
                    }
                }
                cols.push(u);
            }
            DMatrix::from_columns(&cols)
        }
    }
}

/// Expected dimension of the trivial motions for a spanning configuration.
pub fn expected_trivial_dim(fw: &Framework) -> usize {
    let d1 = match fw {
        Framework::Euclidean(f) => f.d + 1,
        Framework::Spherical(f) => f.d + 1,
        Framework::PointHyperplane(f) => f.d + 1,
    };
    d1 * (d1 - 1) / 2
}

/// The same framework space over the complete graph, used as the trivial
/// -motion fallback for configurations that do not span.
fn complete_variant(fw: &Framework) -> Framework {
    let n = fw.graph().vertex_count();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    let graph = Graph::new(n, &edges).expect("complete graph");
    match fw {
        Framework::Euclidean(f) => Framework::Euclidean(EuclideanFramework {
            graph,
            d: f.d,
            points: f.points.clone(),
        }),
        Framework::Spherical(f) => Framework::Spherical(SphericalFramework {
            graph,
            d: f.d,
            points: f.points.clone(),
            equator: f.equator.clone(),
        }),
        Framework::PointHyperplane(f) => Framework::PointHyperplane(PointHyperplaneFramework {
            graph,
            d: f.d,
            vertices: f.vertices.clone(),
        }),
    }
}

/// Orthonormal basis of the trivial motions together with a flag telling
/// whether the configuration spans (the basis then has the full dimension
/// `C(d+1,2)`). Deficient configurations fall back to the kernel of the
/// complete-graph rigidity matrix.
pub fn trivial_motion_basis_lenient(
    fw: &Framework,
    tol: &TolerancePolicy,
) -> Result<(DMatrix<f64>, bool), FrameworkError> {
    let gens = trivial_generators(fw);
    let basis = numerics::column_space_basis(&gens, tol)?;
    if basis.ncols() == expected_trivial_dim(fw) {
        Ok((basis, true))
    } else {
        let complete = complete_variant(fw);
        let fallback = numerics::kernel_basis(&complete.rigidity_matrix(), tol)?;
        Ok((fallback, false))
    }
}

/// Orthonormal basis of the trivial motions; errors with the complete-graph
/// fallback when the configuration does not span.
pub fn trivial_motion_basis(fw: &Framework) -> Result<DMatrix<f64>, FrameworkError> {
    let tol = TolerancePolicy::default();
    let (basis, spanning) = trivial_motion_basis_lenient(fw, &tol)?;
    if spanning {
        Ok(basis)
    } else {
        Err(FrameworkError::SpanDeficient { fallback: basis })
    }
}

/// Ranks, verdicts and edge diagnostics for one framework.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RigidityReport {
    pub rank: usize,
    pub nullity: usize,
    pub trivial_dim: usize,
    /// False when the configuration does not span and the trivial dimension
    /// was taken from the complete-graph kernel.
    pub spanning: bool,
    pub is_inf_rigid: bool,
    pub is_isostatic: bool,
    /// Edges whose deletion does not drop the rank.
    pub redundant_edges: Vec<(usize, usize)>,
    /// Edges with coincident endpoints (zero rows).
    pub degenerate_edges: Vec<(usize, usize)>,
}

fn degenerate_edges(fw: &Framework) -> Vec<(usize, usize)> {
    match fw {
        Framework::Euclidean(f) => f
            .graph
            .edges()
            .iter()
            .filter(|&&(i, j)| (&f.points[i] - &f.points[j]).norm() < 1e-12)
            .cloned()
            .collect(),
        Framework::Spherical(_) => Vec::new(),
        Framework::PointHyperplane(f) => f
            .graph
            .edges()
            .iter()
            .filter(|&&(i, j)| {
                matches!(fw, Framework::PointHyperplane(_))
                    && f.edge_kind(i, j) == PhEdgeKind::PointPoint
                    && match (&f.vertices[i], &f.vertices[j]) {
                        (PhVertex::Point(a), PhVertex::Point(b)) => (a - b).norm() < 1e-12,
                        _ => false,
                    }
            })
            .cloned()
            .collect(),
    }
}

/// Full rigidity analysis: rank and nullity of the constraint matrix,
/// trivial dimension, rigidity, and isostaticity via an edge-deletion loop.
pub fn analyze(fw: &Framework, tol: &TolerancePolicy) -> Result<RigidityReport, FrameworkError> {
    let m = fw.rigidity_matrix();
    let rank = numerics::rank(&m, tol)?;
    let nullity = m.ncols() - rank;
    let (_, spanning) = trivial_motion_basis_lenient(fw, tol)?;
    let trivial_dim = if spanning {
        expected_trivial_dim(fw)
    } else {
        let complete = complete_variant(fw);
        complete.rigidity_matrix().ncols() - numerics::rank(&complete.rigidity_matrix(), tol)?
    };
    let is_inf_rigid = nullity == trivial_dim;
    // Edge-deletion loop: an edge is redundant when removing its row keeps
    // the rank.
    let num_edges = fw.graph().edge_count();
    let mut redundant = Vec::new();
    for e in 0..num_edges {
        let rows: Vec<usize> = (0..m.nrows()).filter(|&r| r != e).collect();
        let sub = m.select_rows(rows.iter());
        if numerics::rank(&sub, tol)? == rank {
            redundant.push(fw.graph().edges()[e]);
        }
    }
    let is_isostatic = is_inf_rigid && redundant.is_empty();
    Ok(RigidityReport {
        rank,
        nullity,
        trivial_dim,
        spanning,
        is_inf_rigid,
        is_isostatic,
        redundant_edges: redundant,
        degenerate_edges: degenerate_edges(fw),
    })
}

/// The basic spherical rigidity matrix: edge rows carry the partner point
/// directly, tangency rows the point itself. Rank-equivalent to
/// [`rigidity_matrix_spherical`].
pub fn basic_spherical_matrix(fw: &SphericalFramework) -> DMatrix<f64> {
    let a = fw.ambient();
    let n = fw.graph.vertex_count();
    let ne = fw.graph.edge_count();
    let mut m = DMatrix::zeros(ne + n, a * n);
    for (row, &(i, j)) in fw.graph.edges().iter().enumerate() {
        m.view_mut((row, i * a), (1, a))
            .copy_from(&fw.points[j].transpose());
        m.view_mut((row, j * a), (1, a))
            .copy_from(&fw.points[i].transpose());
    }
    for v in 0..n {
        m.view_mut((ne + v, v * a), (1, a))
            .copy_from(&fw.points[v].transpose());
    }
    m
}

/// Row/column sign transform of the basic spherical matrix induced by the
/// vertex inversion `p_i -> eps_i p_i`: edge rows are scaled by
/// `eps_i eps_j`, tangency rows are untouched, and the column block of
/// vertex `i` is scaled by `eps_i`. The result is the basic matrix of the
/// inverted framework.
pub fn epsilon_transform(
    fw: &SphericalFramework,
    m: &DMatrix<f64>,
    eps: &[i8],
) -> DMatrix<f64> {
    let a = fw.ambient();
    let ne = fw.graph.edge_count();
    assert_eq!(eps.len(), fw.graph.vertex_count());
    assert_eq!(m.nrows(), ne + fw.graph.vertex_count());
    let mut out = m.clone();
    for (row, &(i, j)) in fw.graph.edges().iter().enumerate() {
        let s = (eps[i] * eps[j]) as f64;
        for c in 0..m.ncols() {
            out[(row, c)] *= s;
        }
    }
    for (v, &e) in eps.iter().enumerate() {
        let s = e as f64;
        for c in 0..a {
            for r in 0..m.nrows() {
                out[(r, v * a + c)] *= s;
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Symmetry validation
// ---------------------------------------------------------------------------

/// Per-element, per-hyperplane-vertex signs realizing the orbit condition
/// `tau(gamma) a_j = sign * a_{gamma j}`.
pub type PhSigns = Vec<Vec<i8>>;

fn points_symmetric(
    points: &[DVector<f64>],
    group: &SymmetryGroup,
    action: &[Vec<usize>],
) -> bool {
    for g in 0..group.order() {
        let rep = group.rep(GroupElement(g));
        for (i, p) in points.iter().enumerate() {
            let image = rep * p;
            if (&image - &points[action[g][i]]).amax() >= SYMMETRY_TOL {
                return false;
            }
        }
    }
    true
}

/// Orbit-condition signs of a point-hyperplane framework, or `None` when
/// the framework is not symmetric.
pub fn ph_symmetry_signs(
    fw: &PointHyperplaneFramework,
    group: &SymmetryGroup,
    action: &[Vec<usize>],
) -> Option<PhSigns> {
    let mut signs = vec![vec![1i8; fw.vertices.len()]; group.order()];
    for g in 0..group.order() {
        let rep = group.rep(GroupElement(g));
        for (v, payload) in fw.vertices.iter().enumerate() {
            let w = action[g][v];
            match (payload, &fw.vertices[w]) {
                (PhVertex::Point(p), PhVertex::Point(q)) => {
                    if (rep * p - q).amax() >= SYMMETRY_TOL {
                        return None;
                    }
                }
                (
                    PhVertex::Hyperplane { normal: a, offset: r },
                    PhVertex::Hyperplane {
                        normal: b,
                        offset: s,
                    },
                ) => {
                    if (r - s).abs() >= SYMMETRY_TOL {
                        return None;
                    }
                    let image = rep * a;
                    if (&image - b).amax() < SYMMETRY_TOL {
                        signs[g][v] = 1;
                    } else if (&image + b).amax() < SYMMETRY_TOL {
                        signs[g][v] = -1;
                    } else {
                        return None;
                    }
                }
                _ => return None, // action does not stabilize the partition
            }
        }
    }
    Some(signs)
}

/// Orbit-condition check for any framework space. The group dimension must
/// match the framework's ambient dimension (the augmented group for
/// spherical frameworks).
pub fn validate_symmetric(fw: &Framework, group: &SymmetryGroup, action: &[Vec<usize>]) -> bool {
    match fw {
        Framework::Euclidean(f) => group.dim() == f.d && points_symmetric(&f.points, group, action),
        Framework::Spherical(f) => {
            group.dim() == f.ambient() && points_symmetric(&f.points, group, action)
        }
        Framework::PointHyperplane(f) => {
            group.dim() == f.d && ph_symmetry_signs(f, group, action).is_some()
        }
    }
}

/// Flips hyperplane representations `(a, r) -> (-a, -r)` so that the orbit
/// condition holds with a plus sign wherever possible. Flips are free on
/// hyperplanes with zero offset; a flip on a nonzero offset would break the
/// offset orbit condition, so those are only flipped when the whole orbit
/// flips together (which changes no signs) and the minus sign is reported
/// as unresolved.
pub fn normalize_ph_signs(
    fw: &PointHyperplaneFramework,
    group: &SymmetryGroup,
    action: &[Vec<usize>],
) -> Result<(PointHyperplaneFramework, PhSigns), FrameworkError> {
    let mut fw = fw.clone();
    let signs = ph_symmetry_signs(&fw, group, action).ok_or_else(|| {
        FrameworkError::SymmetryUnrealizable("framework is not symmetric".into())
    })?;
    // Greedy per-orbit normalization: pick the orbit representative, define
    // every member's normal as the image of the representative's.
    let n = fw.vertices.len();
    let mut visited = vec![false; n];
    for v in 0..n {
        if visited[v] || !fw.vertices[v].is_hyperplane() {
            continue;
        }
        let PhVertex::Hyperplane { normal: av, offset: rv } = fw.vertices[v].clone() else {
            unreachable!()
        };
        let mut flips: Vec<usize> = Vec::new();
        let mut consistent = true;
        for g in 0..group.order() {
            let w = action[g][v];
            if visited[w] {
                continue;
            }
            let image = group.rep(GroupElement(g)) * &av;
            let PhVertex::Hyperplane { normal: aw, .. } = &fw.vertices[w] else {
                unreachable!()
            };
            if (&image - aw).amax() < SYMMETRY_TOL {
                visited[w] = true;
            } else if (&image + aw).amax() < SYMMETRY_TOL {
                if rv.abs() < SYMMETRY_TOL {
                    flips.push(w);
                    visited[w] = true;
                } else {
                    consistent = false;
                    visited[w] = true;
                }
            }
        }
        if consistent {
            for w in flips {
                if let PhVertex::Hyperplane { normal, offset } = &mut fw.vertices[w] {
                    *normal = -normal.clone();
                    *offset = -*offset;
                }
            }
        }
    }
    let signs = ph_symmetry_signs(&fw, group, action).unwrap_or(signs);
    Ok((fw, signs))
}

// ---------------------------------------------------------------------------
// Symmetric samplers
// ---------------------------------------------------------------------------

fn orbit_closed(sg: &SymmetricGraph, set: &BTreeSet<usize>) -> bool {
    set.iter()
        .all(|&v| sg.action.iter().all(|perm| set.contains(&perm[v])))
}

/// Basis of the subspace fixed by all stabilizer elements of `v`, under the
/// per-sign-twisted representation `sign(g) * rep(g)`.
fn fixed_subspace(
    group: &SymmetryGroup,
    stab: &[GroupElement],
    signs: &[f64],
    extra_rows: &[DVector<f64>],
    tol: &TolerancePolicy,
) -> Result<DMatrix<f64>, NumericsError> {
    let dim = group.dim();
    let mut rows: Vec<DVector<f64>> = Vec::new();
    for (idx, &g) in stab.iter().enumerate() {
        if g.0 == 0 && signs[idx] > 0.0 {
            continue;
        }
        let m = group.rep(g) * signs[idx] - DMatrix::identity(dim, dim);
        for r in 0..dim {
            rows.push(m.row(r).transpose());
        }
    }
    for r in extra_rows {
        rows.push(r.clone());
    }
    if rows.is_empty() {
        return Ok(DMatrix::identity(dim, dim));
    }
    let mut stacked = DMatrix::zeros(rows.len(), dim);
    for (i, r) in rows.iter().enumerate() {
        stacked.set_row(i, &r.transpose());
    }
    numerics::kernel_basis(&stacked, tol)
}

fn random_in_subspace(basis: &DMatrix<f64>, rng: &mut ChaCha8Rng) -> DVector<f64> {
    let mut v = DVector::zeros(basis.nrows());
    for col in basis.column_iter() {
        let c: f64 = rng.random_range(-1.0..1.0);
        v += col * c;
    }
    v
}

/// Draws a symmetric realization: representatives are sampled from a seeded
/// continuous distribution inside the fixed subspace of their stabilizer,
/// equator representatives get a zero last coordinate, and the orbit is
/// completed through the group action.
pub fn sample_symmetric(
    sg: &SymmetricGraph,
    space: SpaceKind,
    d: usize,
    x_set: &BTreeSet<usize>,
    seed: u64,
) -> Result<Framework, FrameworkError> {
    let tol = TolerancePolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if !orbit_closed(sg, x_set) {
        return Err(FrameworkError::NotOrbitClosed);
    }
    let group = &sg.group;
    let expected_dim = match space {
        SpaceKind::Euclidean | SpaceKind::Ph => d,
        SpaceKind::Spherical => d + 1,
    };
    if group.dim() != expected_dim {
        return Err(FrameworkError::BadInput(format!(
            "group dimension {} does not match the space (need {})",
            group.dim(),
            expected_dim
        )));
    }
    if space == SpaceKind::Euclidean && !x_set.is_empty() {
        return Err(FrameworkError::BadInput(
            "bar-joint frameworks take no X set".into(),
        ));
    }
    let n = sg.graph.vertex_count();
    let orbits = sg.vertex_orbits();
    // Map vertex -> (representative, first group element carrying rep to it)
    let mut carrier: Vec<(usize, GroupElement)> = vec![(0, GroupElement(0)); n];
    for orbit in &orbits {
        let rep = orbit[0];
        for &v in orbit {
            let g = (0..group.order())
                .find(|&g| sg.action[g][rep] == v)
                .expect("orbit member reachable");
            carrier[v] = (rep, GroupElement(g));
        }
    }

    match space {
        SpaceKind::Euclidean | SpaceKind::Spherical => {
            let ambient = expected_dim;
            let mut points: Vec<Option<DVector<f64>>> = vec![None; n];
            for orbit in &orbits {
                let rep = orbit[0];
                let stab = sg.stabilizer(rep);
                let signs = vec![1.0; stab.len()];
                let mut extra = Vec::new();
                if space == SpaceKind::Spherical && x_set.contains(&rep) {
                    let mut e_last = DVector::zeros(ambient);
                    e_last[ambient - 1] = 1.0;
                    extra.push(e_last);
                }
                let basis = fixed_subspace(group, &stab, &signs, &extra, &tol)?;
                let mut p = random_in_subspace(&basis, &mut rng);
                if space == SpaceKind::Spherical {
                    let mut attempts = 0;
                    while p.norm() < 1e-3 {
                        if basis.ncols() == 0 || attempts > 16 {
                            return Err(FrameworkError::UnrealizableFixedVertex(rep));
                        }
                        p = random_in_subspace(&basis, &mut rng);
                        attempts += 1;
                    }
                    p /= p.norm();
                }
                points[rep] = Some(p);
            }
            for v in 0..n {
                let (rep, g) = carrier[v].clone();
                let p = points[rep].clone().expect("representative sampled");
                points[v] = Some(group.rep(g) * p);
            }
            let points: Vec<DVector<f64>> = points.into_iter().map(|p| p.unwrap()).collect();
            let fw = match space {
                SpaceKind::Euclidean => {
                    Framework::Euclidean(EuclideanFramework::new(sg.graph.clone(), d, points)?)
                }
                SpaceKind::Spherical => {
                    let f = SphericalFramework::new(sg.graph.clone(), d, points)?;
                    if &f.equator != x_set {
                        return Err(FrameworkError::EquatorMismatch);
                    }
                    Framework::Spherical(f)
                }
                SpaceKind::Ph => unreachable!(),
            };
            if !validate_symmetric(&fw, group, &sg.action) {
                return Err(FrameworkError::SymmetryUnrealizable(
                    "sampled realization violates the orbit condition".into(),
                ));
            }
            Ok(fw)
        }
        SpaceKind::Ph => {
            let mut vertices: Vec<Option<PhVertex>> = vec![None; n];
            for orbit in &orbits {
                let rep = orbit[0];
                let stab = sg.stabilizer(rep);
                if x_set.contains(&rep) {
                    // hyperplane: find a sign character of the stabilizer
                    // admitting a nonzero normal
                    let mut found = None;
                    'masks: for mask in 0..(1u32 << stab.len().saturating_sub(1)) {
                        let signs: Vec<f64> = stab
                            .iter()
                            .enumerate()
                            .map(|(i, _)| {
                                if i == 0 {
                                    1.0
                                } else if mask & (1 << (i - 1)) != 0 {
                                    -1.0
                                } else {
                                    1.0
                                }
                            })
                            .collect();
                        // multiplicativity of the candidate character
                        for (i, &a) in stab.iter().enumerate() {
                            for (j, &b) in stab.iter().enumerate() {
                                let ab = group.compose(a, b);
                                let k = stab.iter().position(|&s| s == ab).unwrap();
                                if (signs[i] * signs[j] - signs[k]).abs() > 0.5 {
                                    continue 'masks;
                                }
                            }
                        }
                        let basis = fixed_subspace(group, &stab, &signs, &[], &tol)?;
                        if basis.ncols() > 0 {
                            found = Some((signs, basis));
                            break;
                        }
                    }
                    let (signs, basis) =
                        found.ok_or(FrameworkError::UnrealizableFixedVertex(rep))?;
                    let mut a = random_in_subspace(&basis, &mut rng);
                    let mut attempts = 0;
                    while a.norm() < 1e-3 && attempts < 16 {
                        a = random_in_subspace(&basis, &mut rng);
                        attempts += 1;
                    }
                    if a.norm() < 1e-3 {
                        return Err(FrameworkError::UnrealizableFixedVertex(rep));
                    }
                    a /= a.norm();
                    // a minus sign in the character forces the hyperplane
                    // through the origin
                    let offset = if signs.iter().any(|&s| s < 0.0) {
                        0.0
                    } else {
                        rng.random_range(-1.0..1.0)
                    };
                    vertices[rep] = Some(PhVertex::Hyperplane { normal: a, offset });
                } else {
                    let signs = vec![1.0; stab.len()];
                    let basis = fixed_subspace(group, &stab, &signs, &[], &tol)?;
                    vertices[rep] = Some(PhVertex::Point(random_in_subspace(&basis, &mut rng)));
                }
            }
            for v in 0..n {
                let (rep, g) = carrier[v].clone();
                match vertices[rep].clone().expect("representative sampled") {
                    PhVertex::Point(p) => {
                        vertices[v] = Some(PhVertex::Point(group.rep(g) * p));
                    }
                    PhVertex::Hyperplane { normal, offset } => {
                        vertices[v] = Some(PhVertex::Hyperplane {
                            normal: group.rep(g) * normal,
                            offset,
                        });
                    }
                }
            }
            let vertices: Vec<PhVertex> = vertices.into_iter().map(|v| v.unwrap()).collect();
            let fw = Framework::PointHyperplane(PointHyperplaneFramework::new(
                sg.graph.clone(),
                d,
                vertices,
            )?);
            if !validate_symmetric(&fw, group, &sg.action) {
                return Err(FrameworkError::SymmetryUnrealizable(
                    "sampled realization violates the orbit condition".into(),
                ));
            }
            Ok(fw)
        }
    }
}

/// Samples `tries` seeded realizations and keeps one of maximum rank: a
/// regular witness (continuous sampling attains the maximum rank with
/// probability 1; repetition guards numerical bad luck).
pub fn sample_regular(
    sg: &SymmetricGraph,
    space: SpaceKind,
    d: usize,
    x_set: &BTreeSet<usize>,
    base_seed: u64,
    tries: usize,
) -> Result<Framework, FrameworkError> {
    let tol = TolerancePolicy::default();
    let mut best: Option<(usize, Framework)> = None;
    for t in 0..tries.max(1) {
        let fw = sample_symmetric(sg, space, d, x_set, base_seed.wrapping_add(t as u64))?;
        let rank = numerics::rank(&fw.rigidity_matrix(), &tol)?;
        if best.as_ref().map(|(r, _)| rank > *r).unwrap_or(true) {
            best = Some((rank, fw));
        }
    }
    Ok(best.expect("at least one try").1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_schoenflies, SchoenfliesLabel};
    use crate::symgraph::make_symmetric_graph;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn vec2(x: f64, y: f64) -> DVector<f64> {
        DVector::from_vec(vec![x, y])
    }

    fn vec3(x: f64, y: f64, z: f64) -> DVector<f64> {
        DVector::from_vec(vec![x, y, z])
    }

    fn triangle_fw() -> EuclideanFramework {
        let graph = Graph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        EuclideanFramework::new(
            graph,
            2,
            vec![vec2(0.0, 0.0), vec2(1.0, 0.0), vec2(0.0, 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn euclidean_single_edge_row() {
        let graph = Graph::new(2, &[(0, 1)]).unwrap();
        let fw =
            EuclideanFramework::new(graph, 2, vec![vec2(0.0, 0.0), vec2(1.0, 0.0)]).unwrap();
        let m = rigidity_matrix_euclidean(&fw);
        assert_eq!(m.nrows(), 1);
        assert_eq!(
            m.row(0).iter().cloned().collect::<Vec<_>>(),
            vec![-1.0, 0.0, 1.0, 0.0]
        );
    }

    #[test]
    fn euclidean_k3_rank() {
        let m = rigidity_matrix_euclidean(&triangle_fw());
        assert_eq!(numerics::rank(&m, &tol()).unwrap(), 3);
    }

    #[test]
    fn euclidean_degenerate_edge_is_zero_row() {
        let graph = Graph::new(2, &[(0, 1)]).unwrap();
        let fw =
            EuclideanFramework::new(graph, 2, vec![vec2(1.0, 2.0), vec2(1.0, 2.0)]).unwrap();
        let m = rigidity_matrix_euclidean(&fw);
        assert_eq!(m.row(0).amax(), 0.0);
        let report = analyze(&Framework::Euclidean(fw), &tol()).unwrap();
        assert_eq!(report.degenerate_edges, vec![(0, 1)]);
    }

    #[test]
    fn spherical_single_vertex() {
        let graph = Graph::new(1, &[]).unwrap();
        let fw = SphericalFramework::new(graph, 2, vec![vec3(0.0, 0.0, 1.0)]).unwrap();
        let m = rigidity_matrix_spherical(&fw);
        assert_eq!(m.nrows(), 1);
        assert_eq!(
            m.row(0).iter().cloned().collect::<Vec<_>>(),
            vec![0.0, 0.0, 1.0]
        );
        let kernel = numerics::kernel_basis(&m, &tol()).unwrap();
        assert_eq!(kernel.ncols(), 2);
    }

    #[test]
    fn spherical_edge_rank() {
        let graph = Graph::new(2, &[(0, 1)]).unwrap();
        let fw = SphericalFramework::new(
            graph,
            2,
            vec![vec3(0.0, 0.0, 1.0), vec3(1.0, 0.0, 0.0)],
        )
        .unwrap();
        let m = rigidity_matrix_spherical(&fw);
        assert_eq!(m.nrows(), 3);
        assert_eq!(numerics::rank(&m, &tol()).unwrap(), 3);
        assert_eq!(fw.equator, BTreeSet::from([1]));
    }

    #[test]
    fn spherical_triangle_rigid() {
        let graph = Graph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let fw = SphericalFramework::new(
            graph,
            2,
            vec![
                vec3(0.3, 0.2, 0.93),
                vec3(-0.5, 0.4, 0.77),
                vec3(0.1, -0.6, 0.79),
            ],
        )
        .unwrap();
        let report = analyze(&Framework::Spherical(fw), &tol()).unwrap();
        assert_eq!(report.rank, 6);
        assert_eq!(report.nullity, 3);
        assert_eq!(report.trivial_dim, 3);
        assert!(report.is_inf_rigid);
    }

    #[test]
    fn ph_point_line_rows() {
        // one point at the origin, one line with normal (0,1) and r=0,
        // a single point-line edge
        let graph = Graph::new(2, &[(0, 1)]).unwrap();
        let fw = PointHyperplaneFramework::new(
            graph,
            2,
            vec![
                PhVertex::Point(vec2(0.0, 0.0)),
                PhVertex::Hyperplane {
                    normal: vec2(0.0, 1.0),
                    offset: 0.0,
                },
            ],
        )
        .unwrap();
        let m = rigidity_matrix_ph(&fw);
        assert_eq!(m.nrows(), 2);
        assert_eq!(m.ncols(), 5);
        assert_eq!(
            m.row(0).iter().cloned().collect::<Vec<_>>(),
            vec![0.0, 1.0, 0.0, 0.0, 1.0]
        );
        // normalization row for the line
        assert_eq!(
            m.row(1).iter().cloned().collect::<Vec<_>>(),
            vec![0.0, 0.0, 0.0, 1.0, 0.0]
        );
    }

    #[test]
    fn ph_single_line_nullity() {
        let graph = Graph::new(1, &[]).unwrap();
        let fw = PointHyperplaneFramework::new(
            graph,
            2,
            vec![PhVertex::Hyperplane {
                normal: vec2(0.0, 1.0),
                offset: 0.3,
            }],
        )
        .unwrap();
        let m = rigidity_matrix_ph(&fw);
        assert_eq!(m.nrows(), 1);
        assert_eq!(m.ncols(), 3);
        assert_eq!(numerics::nullity(&m, &tol()).unwrap(), 2);
    }

    #[test]
    fn ph_parallel_lines_hh_edge() {
        let graph = Graph::new(2, &[(0, 1)]).unwrap();
        let fw = PointHyperplaneFramework::new(
            graph,
            2,
            vec![
                PhVertex::Hyperplane {
                    normal: vec2(0.0, 1.0),
                    offset: 0.0,
                },
                PhVertex::Hyperplane {
                    normal: vec2(0.0, 1.0),
                    offset: 1.0,
                },
            ],
        )
        .unwrap();
        let m = rigidity_matrix_ph(&fw);
        // angle row between parallel lines is dependent on the two
        // normalization rows at first order
        assert_eq!(m.nrows(), 3);
        assert_eq!(numerics::rank(&m, &tol()).unwrap(), 2);
    }

    #[test]
    fn trivial_basis_k1_is_deficient() {
        let graph = Graph::new(1, &[]).unwrap();
        let fw = Framework::Euclidean(
            EuclideanFramework::new(graph, 2, vec![vec2(0.4, -0.2)]).unwrap(),
        );
        match trivial_motion_basis(&fw) {
            Err(FrameworkError::SpanDeficient { fallback }) => {
                assert_eq!(fallback.ncols(), 2);
            }
            other => panic!("expected SpanDeficient, got {other:?}"),
        }
    }

    #[test]
    fn trivial_basis_triangle() {
        let fw = Framework::Euclidean(triangle_fw());
        let basis = trivial_motion_basis(&fw).unwrap();
        assert_eq!(basis.ncols(), 3);
        let m = fw.rigidity_matrix();
        assert!((m * basis).amax() < 1e-9);
    }

    #[test]
    fn trivial_basis_point_and_line() {
        let graph = Graph::new(2, &[(0, 1)]).unwrap();
        let fw = Framework::PointHyperplane(
            PointHyperplaneFramework::new(
                graph,
                2,
                vec![
                    PhVertex::Point(vec2(0.7, 0.3)),
                    PhVertex::Hyperplane {
                        normal: vec2(0.6, 0.8),
                        offset: 0.2,
                    },
                ],
            )
            .unwrap(),
        );
        let basis = trivial_motion_basis(&fw).unwrap();
        assert_eq!(basis.ncols(), 3);
        let m = fw.rigidity_matrix();
        assert!((m * basis).amax() < 1e-9);
    }

    #[test]
    fn analyze_k3_isostatic() {
        let report = analyze(&Framework::Euclidean(triangle_fw()), &tol()).unwrap();
        assert!(report.is_inf_rigid);
        assert!(report.is_isostatic);
        assert!(report.redundant_edges.is_empty());
    }

    #[test]
    fn analyze_k4_minus_e_isostatic() {
        let graph = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let fw = EuclideanFramework::new(
            graph,
            2,
            vec![
                vec2(0.9, 0.1),
                vec2(-0.9, -0.1),
                vec2(0.2, 0.8),
                vec2(-0.2, -0.8),
            ],
        )
        .unwrap();
        let report = analyze(&Framework::Euclidean(fw), &tol()).unwrap();
        assert_eq!(report.rank, 5);
        assert_eq!(report.nullity, 3);
        assert!(report.is_inf_rigid);
        assert!(report.is_isostatic);
    }

    #[test]
    fn analyze_square_flexible() {
        let graph = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let fw = EuclideanFramework::new(
            graph,
            2,
            vec![
                vec2(0.0, 0.0),
                vec2(1.0, 0.0),
                vec2(1.0, 1.0),
                vec2(0.0, 1.0),
            ],
        )
        .unwrap();
        let report = analyze(&Framework::Euclidean(fw), &tol()).unwrap();
        assert_eq!(report.nullity, 4);
        assert!(!report.is_inf_rigid);
    }

    #[test]
    fn validate_mirror_pair() {
        let graph = Graph::new(2, &[(0, 1)]).unwrap();
        let cs = make_schoenflies(2, SchoenfliesLabel::Cs, 1).unwrap();
        let action = vec![vec![0, 1], vec![1, 0]];
        let good = Framework::Euclidean(
            EuclideanFramework::new(graph.clone(), 2, vec![vec2(1.0, 2.0), vec2(-1.0, 2.0)])
                .unwrap(),
        );
        assert!(validate_symmetric(&good, &cs, &action));
        let bad = Framework::Euclidean(
            EuclideanFramework::new(graph, 2, vec![vec2(1.0, 2.0), vec2(-1.0, 2.1)]).unwrap(),
        );
        assert!(!validate_symmetric(&bad, &cs, &action));
    }

    #[test]
    fn validate_swapped_lines_with_opposite_normals() {
        let graph = Graph::new(2, &[]).unwrap();
        let cs = make_schoenflies(2, SchoenfliesLabel::Cs, 1).unwrap();
        let action = vec![vec![0, 1], vec![1, 0]];
        // normals (1,1)/sqrt2 and its mirror image negated; offsets zero
        let s = 1.0 / 2f64.sqrt();
        let fw = PointHyperplaneFramework::new(
            graph,
            2,
            vec![
                PhVertex::Hyperplane {
                    normal: vec2(s, s),
                    offset: 0.0,
                },
                PhVertex::Hyperplane {
                    normal: vec2(s, -s),
                    offset: 0.0,
                },
            ],
        )
        .unwrap();
        let signs = ph_symmetry_signs(&fw, &cs, &action).unwrap();
        assert_eq!(signs[1], vec![-1, -1]);
        assert!(validate_symmetric(
            &Framework::PointHyperplane(fw.clone()),
            &cs,
            &action
        ));
        let (normalized, signs) = normalize_ph_signs(&fw, &cs, &action).unwrap();
        assert_eq!(signs[1], vec![1, 1]);
        assert!(validate_symmetric(
            &Framework::PointHyperplane(normalized),
            &cs,
            &action
        ));
    }

    #[test]
    fn sampler_c2_k4_minus_e() {
        let graph = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let c2 = make_schoenflies(2, SchoenfliesLabel::Cn, 2).unwrap();
        let sg = make_symmetric_graph(graph, c2, &[(GroupElement(1), vec![1, 0, 3, 2])]).unwrap();
        let fw = sample_symmetric(&sg, SpaceKind::Euclidean, 2, &BTreeSet::new(), 7).unwrap();
        let Framework::Euclidean(f) = &fw else {
            panic!()
        };
        assert!((&f.points[1] + &f.points[0]).amax() < 1e-12);
        assert!(validate_symmetric(&fw, &sg.group, &sg.action));
    }

    #[test]
    fn sampler_spherical_augmented() {
        let graph = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let c2 = make_schoenflies(2, SchoenfliesLabel::Cn, 2).unwrap();
        let sg =
            make_symmetric_graph(graph, c2, &[(GroupElement(1), vec![1, 0, 3, 2])]).unwrap();
        let mut sg_aug = sg.clone();
        sg_aug.group = sg.group.augment();
        let fw = sample_symmetric(&sg_aug, SpaceKind::Spherical, 2, &BTreeSet::new(), 3).unwrap();
        let Framework::Spherical(f) = &fw else { panic!() };
        for p in &f.points {
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }
        assert!(validate_symmetric(&fw, &sg_aug.group, &sg_aug.action));
    }

    #[test]
    fn sampler_places_fixed_vertex_on_mirror() {
        let graph = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let cs = make_schoenflies(2, SchoenfliesLabel::Cs, 1).unwrap();
        let sg = make_symmetric_graph(graph, cs, &[(GroupElement(1), vec![2, 1, 0])]).unwrap();
        let fw = sample_symmetric(&sg, SpaceKind::Euclidean, 2, &BTreeSet::new(), 11).unwrap();
        let Framework::Euclidean(f) = &fw else { panic!() };
        assert!(f.points[1][0].abs() < 1e-12, "fixed vertex sits on x=0");
        assert!(validate_symmetric(&fw, &sg.group, &sg.action));
    }

    #[test]
    fn basic_matrix_matches_standard_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..20 {
            let n = rng.random_range(2..6usize);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random_bool(0.6) {
                        edges.push((i, j));
                    }
                }
            }
            let graph = Graph::new(n, &edges).unwrap();
            let points: Vec<DVector<f64>> = (0..n)
                .map(|_| {
                    DVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0))
                })
                .collect();
            let fw = SphericalFramework::new(graph, 2, points).unwrap();
            let standard = rigidity_matrix_spherical(&fw);
            let basic = basic_spherical_matrix(&fw);
            assert_eq!(
                numerics::rank(&standard, &tol()).unwrap(),
                numerics::rank(&basic, &tol()).unwrap()
            );
        }
    }

    #[test]
    fn epsilon_transform_identity_and_flip() {
        let graph = Graph::new(2, &[(0, 1)]).unwrap();
        let fw = SphericalFramework::new(
            graph,
            2,
            vec![vec3(0.6, 0.0, 0.8), vec3(0.0, 1.0, 0.0)],
        )
        .unwrap();
        let basic = basic_spherical_matrix(&fw);
        let same = epsilon_transform(&fw, &basic, &[1, 1]);
        assert_eq!(basic, same);

        let flipped = epsilon_transform(&fw, &basic, &[-1, 1]);
        // equals the basic matrix of the framework with p_0 inverted
        let mut inv = fw.clone();
        inv.points[0] = -&inv.points[0];
        let expected = basic_spherical_matrix(&inv);
        assert!((flipped - expected).amax() < 1e-12);
    }
}
