//! Forced-symmetric rigidity.
//!
//! A symmetric framework is forced-symmetric rigid when every symmetric
//! infinitesimal motion is trivial. The source of truth here is the
//! restriction of the full rigidity matrix to the symmetric velocity
//! subspace, which is well-defined for free and non-free actions alike.
//! Orbit matrices over the quotient gain graph are a second, independent
//! implementation for free actions; the two must agree exactly on nullity,
//! and the test suites enforce that.

use crate::frameworks::{
    self, Framework, FrameworkError, PhVertex, PointHyperplaneFramework, SphericalFramework,
};
use crate::groups::{GroupElement, SymmetryGroup};
use crate::numerics::{self, TolerancePolicy};
use crate::symgraph::{
    self, GainGraph, SparsityParams, SymGraphError, SymmetricGraph,
};
use nalgebra::{DMatrix, DVector};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ForcedError {
    #[error("framework is not symmetric under the given action")]
    NotSymmetric,
    #[error("hyperplane orbit signs cannot be normalized to plus")]
    SignsNotNormalizable,
    #[error(transparent)]
    Graph(#[from] SymGraphError),
    #[error(transparent)]
    Framework(#[from] FrameworkError),
    #[error(transparent)]
    Numerics(#[from] numerics::NumericsError),
}

/// Forced-symmetric rigidity verdict.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ForcedReport {
    /// Dimension of the symmetric velocity subspace.
    pub symmetric_dim: usize,
    /// Dimension of the symmetric infinitesimal motions.
    pub forced_nullity: usize,
    /// Dimension of the trivial motions that are symmetric.
    pub trivial_symmetric_dim: usize,
    pub forced_rigid: bool,
}

/// Equivariance operators `M_gamma` on the velocity space of `fw`, one per
/// group element; their common fixed space is the symmetric velocity
/// subspace.
fn equivariance_operators(
    fw: &Framework,
    group: &SymmetryGroup,
    action: &[Vec<usize>],
) -> Result<Vec<DMatrix<f64>>, ForcedError> {
    match fw {
        Framework::Euclidean(f) => {
            let d = f.d;
            Ok(build_uniform(group, action, d))
        }
        Framework::Spherical(f) => {
            let a = f.ambient();
            Ok(build_uniform(group, action, a))
        }
        Framework::PointHyperplane(f) => {
            let signs = frameworks::ph_symmetry_signs(f, group, action)
                .ok_or(ForcedError::NotSymmetric)?;
            let d = f.d;
            let (offsets, cols) = f.column_offsets();
            let mats = (0..group.order())
                .map(|g| {
                    let rep = group.rep(GroupElement(g));
                    let mut m = DMatrix::zeros(cols, cols);
                    for (v, payload) in f.vertices.iter().enumerate() {
                        let w = action[g][v];
                        match payload {
                            PhVertex::Point(_) => {
                                m.view_mut((offsets[w], offsets[v]), (d, d)).copy_from(rep);
                            }
                            PhVertex::Hyperplane { .. } => {
                                let signed = rep * signs[g][v] as f64;
                                m.view_mut((offsets[w], offsets[v]), (d, d))
                                    .copy_from(&signed);
                                m[(offsets[w] + d, offsets[v] + d)] = 1.0;
                            }
                        }
                    }
                    m
                })
                .collect();
            Ok(mats)
        }
    }
}

fn build_uniform(group: &SymmetryGroup, action: &[Vec<usize>], d: usize) -> Vec<DMatrix<f64>> {
    let n = action[0].len();
    (0..group.order())
        .map(|g| {
            let rep = group.rep(GroupElement(g));
            let mut m = DMatrix::zeros(n * d, n * d);
            for v in 0..n {
                let w = action[g][v];
                m.view_mut((w * d, v * d), (d, d)).copy_from(rep);
            }
            m
        })
        .collect()
}

/// Orthonormal basis of the symmetric velocity subspace (image of the
/// group-averaging projector). Works for free and non-free actions.
pub fn symmetric_velocity_basis(
    fw: &Framework,
    group: &SymmetryGroup,
    action: &[Vec<usize>],
) -> Result<DMatrix<f64>, ForcedError> {
    if !frameworks::validate_symmetric(fw, group, action) {
        return Err(ForcedError::NotSymmetric);
    }
    let tol = TolerancePolicy::default();
    let mats = equivariance_operators(fw, group, action)?;
    let projector = numerics::average_projector(&mats);
    Ok(numerics::column_space_basis(&projector, &tol)?)
}

/// Forced-symmetric rigidity by restriction: the rigidity matrix applied to
/// the symmetric velocity basis, with the symmetric trivial dimension taken
/// from the intersection of the trivial motions with the symmetric
/// subspace.
pub fn forced_rigidity(
    fw: &Framework,
    group: &SymmetryGroup,
    action: &[Vec<usize>],
    tol: &TolerancePolicy,
) -> Result<ForcedReport, ForcedError> {
    let basis = symmetric_velocity_basis(fw, group, action)?;
    let r = fw.rigidity_matrix();
    let restricted = &r * &basis;
    let forced_nullity = basis.ncols() - numerics::rank(&restricted, tol)?;
    let (trivial, _) = frameworks::trivial_motion_basis_lenient(fw, tol)?;
    let trivial_symmetric_dim = numerics::intersect(&trivial, &basis, tol)?.ncols();
    Ok(ForcedReport {
        symmetric_dim: basis.ncols(),
        forced_nullity,
        trivial_symmetric_dim,
        forced_rigid: forced_nullity == trivial_symmetric_dim,
    })
}

/// Quotient constraint matrix with labeled rows and columns; its kernel is
/// the space of symmetric motions expressed on orbit representatives.
#[derive(Debug, Clone)]
pub struct OrbitMatrix {
    pub matrix: DMatrix<f64>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    /// Representative vertex (in the full graph) per quotient vertex.
    pub representatives: Vec<usize>,
}

impl OrbitMatrix {
    pub fn nullity(&self, tol: &TolerancePolicy) -> Result<usize, numerics::NumericsError> {
        Ok(self.matrix.ncols() - numerics::rank(&self.matrix, tol)?)
    }
}

fn quotient_of(
    graph: &crate::symgraph::Graph,
    group: &SymmetryGroup,
    action: &[Vec<usize>],
) -> Result<(SymmetricGraph, GainGraph), ForcedError> {
    let free = action
        .iter()
        .skip(1)
        .all(|perm| perm.iter().enumerate().all(|(v, &img)| img != v));
    let sg = SymmetricGraph {
        graph: graph.clone(),
        group: group.clone(),
        action: action.to_vec(),
        free_on_vertices: free,
    };
    let gg = symgraph::quotient_gain_graph(&sg)?;
    Ok((sg, gg))
}

/// Spherical orbit matrix: one row per quotient edge plus one tangency row
/// per representative. A quotient edge `(i,j;psi)` contributes
/// `tau(psi) p_j` to block `i` and `tau(psi)^{-1} p_i` to block `j`; a loop
/// accumulates both into its single block.
pub fn orbit_matrix_spherical(
    fw: &SphericalFramework,
    group: &SymmetryGroup,
    action: &[Vec<usize>],
) -> Result<OrbitMatrix, ForcedError> {
    let framework = Framework::Spherical(fw.clone());
    if !frameworks::validate_symmetric(&framework, group, action) {
        return Err(ForcedError::NotSymmetric);
    }
    let (sg, gg) = quotient_of(&fw.graph, group, action)?;
    let reps: Vec<usize> = sg.vertex_orbits().iter().map(|o| o[0]).collect();
    let a = fw.ambient();
    let cols = a * reps.len();
    let mut rows = Vec::new();
    let mut row_labels = Vec::new();
    for &(t, h, psi) in &gg.edges {
        let mut row = DVector::zeros(cols);
        let tau = group.rep(psi);
        let tau_inv = group.rep(group.inverse(psi));
        let p_t = &fw.points[reps[t]];
        let p_h = &fw.points[reps[h]];
        let coeff_t = tau * p_h;
        let coeff_h = tau_inv * p_t;
        for c in 0..a {
            row[t * a + c] += coeff_t[c];
            row[h * a + c] += coeff_h[c];
        }
        rows.push(row);
        row_labels.push(format!("edge ({t},{h};{})", psi.0));
    }
    for (q, &rep) in reps.iter().enumerate() {
        let mut row = DVector::zeros(cols);
        for c in 0..a {
            row[q * a + c] = fw.points[rep][c];
        }
        rows.push(row);
        row_labels.push(format!("tangency {q}"));
    }
    let mut matrix = DMatrix::zeros(rows.len(), cols);
    for (i, r) in rows.iter().enumerate() {
        matrix.set_row(i, &r.transpose());
    }
    let col_labels = (0..reps.len())
        .flat_map(|q| (0..a).map(move |c| format!("v{q}.{c}")))
        .collect();
    Ok(OrbitMatrix {
        matrix,
        row_labels,
        col_labels,
        representatives: reps,
    })
}

/// Point-hyperplane orbit matrix over the quotient gain graph. Hyperplane
/// signs must normalize to plus (free actions always admit this after
/// flipping representations; offsets are shifted to zero when a flip needs
/// it).
pub fn orbit_matrix_ph(
    fw: &PointHyperplaneFramework,
    group: &SymmetryGroup,
    action: &[Vec<usize>],
) -> Result<OrbitMatrix, ForcedError> {
    let (normalized, signs) = frameworks::normalize_ph_signs(fw, group, action)
        .map_err(|_| ForcedError::NotSymmetric)?;
    if signs.iter().any(|per_v| per_v.iter().any(|&s| s < 0)) {
        return Err(ForcedError::SignsNotNormalizable);
    }
    let fw = &normalized;
    let (sg, gg) = quotient_of(&fw.graph, group, action)?;
    let reps: Vec<usize> = sg.vertex_orbits().iter().map(|o| o[0]).collect();
    let d = fw.d;
    // column layout on representatives: point blocks first, then
    // hyperplane blocks (normal then offset)
    let is_hyper: Vec<bool> = reps
        .iter()
        .map(|&r| fw.vertices[r].is_hyperplane())
        .collect();
    let mut offsets = vec![0usize; reps.len()];
    let mut off = 0;
    for q in 0..reps.len() {
        if !is_hyper[q] {
            offsets[q] = off;
            off += d;
        }
    }
    for q in 0..reps.len() {
        if is_hyper[q] {
            offsets[q] = off;
            off += d + 1;
        }
    }
    let cols = off;
    let payload = |q: usize| -> &PhVertex { &fw.vertices[reps[q]] };
    let mut rows = Vec::new();
    let mut row_labels = Vec::new();
    for &(t0, h0, psi0) in &gg.edges {
        // orient point->hyperplane edges with the point at the tail
        let (t, h, psi) = if is_hyper[t0] && !is_hyper[h0] {
            (h0, t0, group.inverse(psi0))
        } else {
            (t0, h0, psi0)
        };
        let tau = group.rep(psi);
        let tau_inv = group.rep(group.inverse(psi));
        let mut row = DVector::zeros(cols);
        match (payload(t), payload(h)) {
            (PhVertex::Point(pt), PhVertex::Point(ph)) => {
                if t == h {
                    let coeff =
                        pt * 2.0 - tau * pt - tau_inv * pt;
                    for c in 0..d {
                        row[offsets[t] + c] = coeff[c];
                    }
                } else {
                    let diff = pt - tau * ph;
                    let coeff_h = ph - tau_inv * pt;
                    for c in 0..d {
                        row[offsets[t] + c] = diff[c];
                        row[offsets[h] + c] = coeff_h[c];
                    }
                }
            }
            (PhVertex::Point(pt), PhVertex::Hyperplane { normal, .. }) => {
                let coeff_t = tau * normal;
                let coeff_h = tau_inv * pt;
                for c in 0..d {
                    row[offsets[t] + c] = coeff_t[c];
                    row[offsets[h] + c] = coeff_h[c];
                }
                row[offsets[h] + d] = 1.0;
            }
            (PhVertex::Hyperplane { normal: at, .. }, PhVertex::Hyperplane { normal: ah, .. }) => {
                if t == h {
                    let coeff = tau * at + tau_inv * at;
                    for c in 0..d {
                        row[offsets[t] + c] = coeff[c];
                    }
                } else {
                    let coeff_t = tau * ah;
                    let coeff_h = tau_inv * at;
                    for c in 0..d {
                        row[offsets[t] + c] = coeff_t[c];
                        row[offsets[h] + c] = coeff_h[c];
                    }
                }
            }
            (PhVertex::Hyperplane { .. }, PhVertex::Point(_)) => unreachable!("reoriented above"),
        }
        rows.push(row);
        row_labels.push(format!("edge ({t},{h};{})", psi.0));
    }
    for q in 0..reps.len() {
        if let PhVertex::Hyperplane { normal, .. } = payload(q) {
            let mut row = DVector::zeros(cols);
            for c in 0..d {
                row[offsets[q] + c] = normal[c];
            }
            rows.push(row);
            row_labels.push(format!("tangency {q}"));
        }
    }
    let mut matrix = DMatrix::zeros(rows.len(), cols);
    for (i, r) in rows.iter().enumerate() {
        matrix.set_row(i, &r.transpose());
    }
    let col_labels = (0..reps.len())
        .flat_map(|q| {
            let width = if is_hyper[q] { d + 1 } else { d };
            (0..width).map(move |c| format!("v{q}.{c}"))
        })
        .collect();
    Ok(OrbitMatrix {
        matrix,
        row_labels,
        col_labels,
        representatives: reps,
    })
}

// ---------------------------------------------------------------------------
// Combinatorial predictions
// ---------------------------------------------------------------------------

/// Predictions licensed by the combinatorial characterisations, together
/// with the criterion tag and witnesses. A prediction is present only when
/// the corresponding hypotheses verifiably hold.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CombinatorialVerdict {
    pub predicted_forced_rigid: Option<bool>,
    pub predicted_inf_rigid: Option<bool>,
    pub predicted_isostatic: Option<bool>,
    /// Name of the criterion that licensed the predictions.
    pub criterion: Option<String>,
    pub details: Vec<String>,
}

impl CombinatorialVerdict {
    pub fn no_applicable_theorem() -> Self {
        CombinatorialVerdict {
            predicted_forced_rigid: None,
            predicted_inf_rigid: None,
            predicted_isostatic: None,
            criterion: None,
            details: vec!["no applicable theorem".into()],
        }
    }
}

/// Input contexts for [`combinatorial_verdict`]; each names the hypothesis
/// set it asserts.
pub enum VerdictContext<'a> {
    /// Plane bar-joint framework under a free cyclic action (reflection or
    /// rotation representation): forced rigidity via a spanning
    /// (2,3,1)-gain-tight subgraph; incidental rigidity additionally via a
    /// (2,3,2) witness when the group has order two.
    PlaneCyclicFree { gain_graph: &'a GainGraph },
    /// Point-line framework with reflection symmetry, exactly two lines
    /// forming one free orbit: same gain counts as the plane criterion.
    PointLineTwoLinesCs {
        gain_graph: &'a GainGraph,
        line_orbit: usize,
    },
    /// Plane bar-joint isostaticity under reflection, half-turn or 3-fold
    /// rotation (fixed vertices allowed): (2,3)-tightness plus fixed-count
    /// conditions.
    PlaneIsostatic { sg: &'a SymmetricGraph },
    /// Point-line framework under the half-turn with every line fixed and a
    /// free action on the points: isostatic iff (2,3)-tight with exactly
    /// one fixed edge.
    PointLineFixedLinesC2 {
        sg: &'a SymmetricGraph,
        line_vertices: &'a BTreeSet<usize>,
    },
}

fn is_cyclic(group: &SymmetryGroup) -> bool {
    group.elements().any(|g| {
        let mut x = g;
        let mut count = 1;
        while x != group.identity() {
            x = group.compose(x, g);
            count += 1;
            if count > group.order() {
                return false;
            }
        }
        count == group.order()
    })
}

/// Plain (2,3)-tightness of a simple graph: `|E| = 2|V| - 3` and every
/// nonempty subgraph satisfies `|E'| <= 2|V'| - 3`.
pub fn is_23_tight(graph: &crate::symgraph::Graph) -> bool {
    let v = graph.vertex_count();
    let e = graph.edge_count();
    if e + 3 != 2 * v {
        return false;
    }
    let trivial = crate::groups::make_schoenflies(2, crate::groups::SchoenfliesLabel::Cn, 1)
        .expect("trivial group");
    let gg = GainGraph::new(
        v,
        graph
            .edges()
            .iter()
            .map(|&(a, b)| (a, b, GroupElement(0)))
            .collect(),
        trivial,
    );
    symgraph::is_gain_sparse(&gg, SparsityParams::new(2, 3, 3)).is_sparse()
}

/// 2D representation classes relevant to the isostatic criteria.
#[derive(Debug, PartialEq, Eq, Clone, Copy)]
enum PlaneRepKind {
    Reflection,
    HalfTurn,
    ThreeFold,
    Other,
}

fn plane_rep_kind(group: &SymmetryGroup) -> PlaneRepKind {
    if group.dim() != 2 || !is_cyclic(group) {
        return PlaneRepKind::Other;
    }
    match group.order() {
        2 => {
            let m = group.rep(GroupElement(1));
            if m.determinant() < 0.0 {
                PlaneRepKind::Reflection
            } else {
                PlaneRepKind::HalfTurn
            }
        }
        3 => PlaneRepKind::ThreeFold,
        _ => PlaneRepKind::Other,
    }
}

pub fn combinatorial_verdict(ctx: &VerdictContext) -> CombinatorialVerdict {
    match ctx {
        VerdictContext::PlaneCyclicFree { gain_graph } => {
            let group = &gain_graph.group;
            if group.dim() != 2 || group.order() < 2 || !is_cyclic(group) {
                return CombinatorialVerdict::no_applicable_theorem();
            }
            gain_tight_predictions(gain_graph, "cyclic-plane-gain-tight")
        }
        VerdictContext::PointLineTwoLinesCs {
            gain_graph,
            line_orbit,
        } => {
            let group = &gain_graph.group;
            let is_cs = group.dim() == 2
                && group.order() == 2
                && group.rep(GroupElement(1)).determinant() < 0.0;
            if !is_cs || *line_orbit >= gain_graph.vertex_count {
                return CombinatorialVerdict::no_applicable_theorem();
            }
            gain_tight_predictions(gain_graph, "cs-two-line-point-line-gain-tight")
        }
        VerdictContext::PlaneIsostatic { sg } => {
            let kind = plane_rep_kind(&sg.group);
            if kind == PlaneRepKind::Other {
                return CombinatorialVerdict::no_applicable_theorem();
            }
            let tight = is_23_tight(&sg.graph);
            let counts = sg.fixed_counts();
            let conditions = match kind {
                PlaneRepKind::Reflection => counts
                    .per_element
                    .iter()
                    .all(|&(_, _, fixed_e)| fixed_e == 1),
                PlaneRepKind::HalfTurn => counts
                    .per_element
                    .iter()
                    .all(|&(_, fixed_v, fixed_e)| fixed_v == 0 && fixed_e == 1),
                PlaneRepKind::ThreeFold => counts
                    .per_element
                    .iter()
                    .all(|&(_, fixed_v, _)| fixed_v == 0),
                PlaneRepKind::Other => unreachable!(),
            };
            CombinatorialVerdict {
                predicted_forced_rigid: None,
                predicted_inf_rigid: None,
                predicted_isostatic: Some(tight && conditions),
                criterion: Some("plane-isostatic-fixed-counts".into()),
                details: vec![
                    format!("(2,3)-tight: {tight}"),
                    format!("fixed-count conditions: {conditions}"),
                ],
            }
        }
        VerdictContext::PointLineFixedLinesC2 { sg, line_vertices } => {
            if plane_rep_kind(&sg.group) != PlaneRepKind::HalfTurn {
                return CombinatorialVerdict::no_applicable_theorem();
            }
            let lines_fixed = line_vertices
                .iter()
                .all(|&v| sg.action.iter().all(|perm| perm[v] == v));
            let points_free = (0..sg.graph.vertex_count())
                .filter(|v| !line_vertices.contains(v))
                .all(|v| sg.action.iter().skip(1).all(|perm| perm[v] != v));
            if !lines_fixed || !points_free {
                return CombinatorialVerdict::no_applicable_theorem();
            }
            let tight = is_23_tight(&sg.graph);
            let counts = sg.fixed_counts();
            let one_fixed_edge = counts.per_element.iter().all(|&(_, _, e)| e == 1);
            CombinatorialVerdict {
                predicted_forced_rigid: None,
                predicted_inf_rigid: None,
                predicted_isostatic: Some(tight && one_fixed_edge),
                criterion: Some("c2-fixed-lines-isostatic".into()),
                details: vec![
                    format!("(2,3)-tight: {tight}"),
                    format!("single fixed edge: {one_fixed_edge}"),
                ],
            }
        }
    }
}

fn gain_tight_predictions(gg: &GainGraph, criterion: &str) -> CombinatorialVerdict {
    let witness_231 = symgraph::has_spanning_gain_tight(gg, SparsityParams::new(2, 3, 1));
    let forced = witness_231.is_some();
    let mut details = vec![match &witness_231 {
        Some(w) => format!("(2,3,1) witness edges: {w:?}"),
        None => "no spanning (2,3,1)-gain-tight subgraph".into(),
    }];
    let inf_rigid = if gg.group.order() == 2 {
        let witness_232 = symgraph::has_spanning_gain_tight(gg, SparsityParams::new(2, 3, 2));
        details.push(match &witness_232 {
            Some(w) => format!("(2,3,2) witness edges: {w:?}"),
            None => "no spanning (2,3,2)-gain-tight subgraph".into(),
        });
        Some(forced && witness_232.is_some())
    } else {
        None
    };
    CombinatorialVerdict {
        predicted_forced_rigid: Some(forced),
        predicted_inf_rigid: inf_rigid,
        predicted_isostatic: None,
        criterion: Some(criterion.into()),
        details,
    }
}
