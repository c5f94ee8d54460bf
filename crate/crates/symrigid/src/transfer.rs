//! Geometric transfer operators between the framework spaces.
//!
//! Partial inversion negates chosen vertices on the sphere and preserves
//! the rank of the spherical rigidity matrix; central projection moves
//! between point-hyperplane frameworks and spherical frameworks with the
//! hyperplanes on the equator; the pairing transform inverts the vertices
//! outside an index-2 subgroup's sublattice and exchanges the symmetry
//! group for its sign twist; the double cover glues a framework to its
//! antipodal image and extends the group by the inversion.

use crate::frameworks::{
    EuclideanFramework, Framework, FrameworkError, PhVertex, PointHyperplaneFramework,
    SphericalFramework, EQUATOR_TOL, SYMMETRY_TOL,
};
use crate::groups::{GroupElement, GroupError, Subgroup, SymmetryGroup};
use crate::symgraph::{Graph, SymmetricGraph};
use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TransferError {
    #[error("inversion set is not closed under the group action")]
    NotOrbitClosed,
    #[error("the group action is not free on the vertices")]
    ActionNotFree,
    #[error("framework is not symmetric under the given action")]
    NotSymmetric,
    #[error("hyperplane orbit signs cannot be normalized to plus")]
    SignsNotNormalizable,
    #[error("matrix is not orthogonal")]
    NotOrthogonal,
    #[error("vertex {0} is fixed by the reflection but does not lie on the mirror")]
    FixedVertexOffMirror(usize),
    #[error("a vertex outside X lands on the equator; the input is degenerate")]
    EquatorCollision,
    #[error("expected a reflection group in the plane")]
    NotPlanarReflection,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Framework(#[from] FrameworkError),
}

/// Group and action accompanying a framework through an operator.
#[derive(Clone, Copy)]
pub struct SymmetricContext<'a> {
    pub group: &'a SymmetryGroup,
    pub action: &'a [Vec<usize>],
}

impl<'a> SymmetricContext<'a> {
    pub fn new(group: &'a SymmetryGroup, action: &'a [Vec<usize>]) -> Self {
        SymmetricContext { group, action }
    }

    fn orbit_closed(&self, set: &BTreeSet<usize>) -> bool {
        set.iter()
            .all(|&v| self.action.iter().all(|perm| set.contains(&perm[v])))
    }

    fn is_free(&self) -> bool {
        self.action
            .iter()
            .skip(1)
            .all(|perm| perm.iter().enumerate().all(|(v, &img)| img != v))
    }
}

/// Negates the coordinates of the chosen vertices. Equator membership is
/// untouched, and the spherical rigidity-matrix rank is preserved (the
/// property tests assert this). In symmetric mode the set must be a union
/// of vertex orbits.
pub fn partial_inversion(
    fw: &SphericalFramework,
    invert: &BTreeSet<usize>,
    ctx: Option<&SymmetricContext>,
) -> Result<SphericalFramework, TransferError> {
    if let Some(ctx) = ctx {
        if !ctx.orbit_closed(invert) {
            return Err(TransferError::NotOrbitClosed);
        }
    }
    let points = fw
        .points
        .iter()
        .enumerate()
        .map(|(v, p)| if invert.contains(&v) { -p } else { p.clone() })
        .collect();
    Ok(SphericalFramework::new(fw.graph.clone(), fw.d, points)?)
}

/// Central projection of a point-hyperplane framework onto the sphere:
/// points lift into the open upper hemisphere via `(p,1)/|(p,1)|`,
/// hyperplanes map to their normals on the equator (the offset is
/// discarded; translating a hyperplane does not affect first-order
/// rigidity). With a context, hyperplane signs are normalized first and the
/// result is validated against the augmented group.
pub fn project_ph_to_sphere(
    fw: &PointHyperplaneFramework,
    ctx: Option<&SymmetricContext>,
) -> Result<SphericalFramework, TransferError> {
    let source = if let Some(ctx) = ctx {
        let (normalized, signs) =
            crate::frameworks::normalize_ph_signs(fw, ctx.group, ctx.action)
                .map_err(|_| TransferError::NotSymmetric)?;
        if signs.iter().any(|per_v| per_v.iter().any(|&s| s < 0)) {
            return Err(TransferError::SignsNotNormalizable);
        }
        normalized
    } else {
        fw.clone()
    };
    let d = source.d;
    let points = source
        .vertices
        .iter()
        .map(|payload| match payload {
            PhVertex::Point(p) => {
                let mut q = DVector::zeros(d + 1);
                for c in 0..d {
                    q[c] = p[c];
                }
                q[d] = 1.0;
                q.normalize()
            }
            PhVertex::Hyperplane { normal, .. } => {
                let mut q = DVector::zeros(d + 1);
                for c in 0..d {
                    q[c] = normal[c];
                }
                q
            }
        })
        .collect();
    let sphere = SphericalFramework::new(source.graph.clone(), d, points)?;
    if let Some(ctx) = ctx {
        let augmented = ctx.group.augment();
        if !crate::frameworks::validate_symmetric(
            &Framework::Spherical(sphere.clone()),
            &augmented,
            ctx.action,
        ) {
            return Err(TransferError::NotSymmetric);
        }
    }
    Ok(sphere)
}

/// Lift of a bar-joint framework onto the sphere through `(p,1)/|(p,1)|`;
/// the special case of the point-hyperplane projection with no hyperplanes.
pub fn lift_euclidean_to_sphere(
    fw: &EuclideanFramework,
) -> Result<SphericalFramework, TransferError> {
    let d = fw.d;
    let points = fw
        .points
        .iter()
        .map(|p| {
            let mut q = DVector::zeros(d + 1);
            for c in 0..d {
                q[c] = p[c];
            }
            q[d] = 1.0;
            q.normalize()
        })
        .collect();
    Ok(SphericalFramework::new(fw.graph.clone(), d, points)?)
}

/// Central projection from the sphere back to a point-hyperplane framework:
/// strictly-lower-hemisphere vertices are first inverted up (orbit-wise in
/// symmetric mode), equator vertices become hyperplanes through the origin,
/// all others become points.
pub fn project_sphere_to_ph(
    fw: &SphericalFramework,
    ctx: Option<&SymmetricContext>,
) -> Result<PointHyperplaneFramework, TransferError> {
    let ambient = fw.ambient();
    let lower: BTreeSet<usize> = (0..fw.points.len())
        .filter(|&v| fw.points[v][ambient - 1] < -EQUATOR_TOL)
        .collect();
    let upper = partial_inversion(fw, &lower, ctx)?;
    // sanity: off-equator vertices must be bounded away from the equator
    for (v, p) in upper.points.iter().enumerate() {
        if !upper.equator.contains(&v) && p[ambient - 1].abs() <= EQUATOR_TOL {
            return Err(TransferError::EquatorCollision);
        }
    }
    let d = fw.d;
    let vertices = upper
        .points
        .iter()
        .enumerate()
        .map(|(v, p)| {
            if upper.equator.contains(&v) {
                let normal = DVector::from_fn(d, |c, _| p[c]);
                PhVertex::Hyperplane {
                    normal,
                    offset: 0.0,
                }
            } else {
                let w = p[ambient - 1];
                PhVertex::Point(DVector::from_fn(d, |c, _| p[c] / w))
            }
        })
        .collect();
    Ok(PointHyperplaneFramework::new(
        upper.graph.clone(),
        d,
        vertices,
    )?)
}

/// Inverts every vertex outside the sublattice of an index-2 subgroup,
/// exchanging the symmetry group for its sign twist. Orbit representatives
/// (the lowest index per orbit) keep their position; the vertex reached by
/// `gamma` keeps it iff `gamma` lies in the subgroup. Applying the
/// transform twice with the same subgroup returns the original framework.
pub fn pairing_transform(
    fw: &SphericalFramework,
    ctx: &SymmetricContext,
    h: &Subgroup,
) -> Result<(SphericalFramework, SymmetryGroup), TransferError> {
    if !ctx.is_free() {
        return Err(TransferError::ActionNotFree);
    }
    if !crate::frameworks::validate_symmetric(
        &Framework::Spherical(fw.clone()),
        ctx.group,
        ctx.action,
    ) {
        return Err(TransferError::NotSymmetric);
    }
    let twisted = ctx.group.pair_representation(h)?;
    let n = fw.points.len();
    let mut invert = BTreeSet::new();
    let mut seen = vec![false; n];
    for v in 0..n {
        if seen[v] {
            continue;
        }
        // v is the representative of its orbit (lowest index first)
        for g in 0..ctx.group.order() {
            let w = ctx.action[g][v];
            if !seen[w] {
                seen[w] = true;
                if !h.members.contains(&g) {
                    invert.insert(w);
                }
            }
        }
    }
    let points = fw
        .points
        .iter()
        .enumerate()
        .map(|(v, p)| if invert.contains(&v) { -p } else { p.clone() })
        .collect();
    let paired = SphericalFramework::new(fw.graph.clone(), fw.d, points)?;
    if !crate::frameworks::validate_symmetric(
        &Framework::Spherical(paired.clone()),
        &twisted,
        ctx.action,
    ) {
        return Err(TransferError::NotSymmetric);
    }
    Ok((paired, twisted))
}

/// Union of the framework with its antipodal image, symmetric under the
/// group extended by the inversion `-I`. The cover preserves the forced
/// verdict but never full rigidity for connected inputs (it is
/// disconnected). Returns the doubled framework with its extended group and
/// action.
pub fn double_cover(
    fw: &SphericalFramework,
    ctx: &SymmetricContext,
) -> Result<(SphericalFramework, SymmetryGroup, Vec<Vec<usize>>), TransferError> {
    if ctx.group.contains_minus_identity() {
        return Err(TransferError::Group(GroupError::ContainsInversion));
    }
    if !crate::frameworks::validate_symmetric(
        &Framework::Spherical(fw.clone()),
        ctx.group,
        ctx.action,
    ) {
        return Err(TransferError::NotSymmetric);
    }
    let n = fw.graph.vertex_count();
    let mut edges: Vec<(usize, usize)> = fw.graph.edges().to_vec();
    edges.extend(fw.graph.edges().iter().map(|&(a, b)| (a + n, b + n)));
    let graph = Graph::new(2 * n, &edges).expect("double cover edges");
    let mut points = fw.points.clone();
    points.extend(fw.points.iter().map(|p| -p));

    let k = ctx.group.order();
    let ambient = fw.ambient();
    let minus = -DMatrix::<f64>::identity(ambient, ambient);
    let mut rep: Vec<DMatrix<f64>> = ctx.group.reps().to_vec();
    rep.extend(ctx.group.reps().iter().map(|m| &minus * m));
    let extended = SymmetryGroup::from_elements(ambient, rep, None)?;
    let mut action: Vec<Vec<usize>> = Vec::with_capacity(2 * k);
    for g in 0..k {
        let perm: Vec<usize> = (0..2 * n)
            .map(|v| {
                if v < n {
                    ctx.action[g][v]
                } else {
                    ctx.action[g][v - n] + n
                }
            })
            .collect();
        action.push(perm);
    }
    for g in 0..k {
        let perm: Vec<usize> = (0..2 * n)
            .map(|v| {
                if v < n {
                    ctx.action[g][v] + n
                } else {
                    ctx.action[g][v - n]
                }
            })
            .collect();
        action.push(perm);
    }
    let cover = SphericalFramework::new(graph, fw.d, points)?;
    if !crate::frameworks::validate_symmetric(
        &Framework::Spherical(cover.clone()),
        &extended,
        &action,
    ) {
        return Err(TransferError::NotSymmetric);
    }
    Ok((cover, extended, action))
}

/// Applies an orthogonal matrix to every vertex; in symmetric mode the
/// representation is conjugated alongside. Equator membership is
/// reclassified from the rotated coordinates.
pub fn rotate(
    fw: &SphericalFramework,
    q: &DMatrix<f64>,
    ctx: Option<&SymmetricContext>,
) -> Result<(SphericalFramework, Option<SymmetryGroup>), TransferError> {
    let ambient = fw.ambient();
    if q.nrows() != ambient
        || q.ncols() != ambient
        || (q.transpose() * q - DMatrix::identity(ambient, ambient)).amax() >= 1e-12
    {
        return Err(TransferError::NotOrthogonal);
    }
    let points = fw.points.iter().map(|p| q * p).collect();
    let rotated = SphericalFramework::new(fw.graph.clone(), fw.d, points)?;
    let conjugated = match ctx {
        None => None,
        Some(ctx) => {
            let group = ctx.group.conjugated(q);
            if !crate::frameworks::validate_symmetric(
                &Framework::Spherical(rotated.clone()),
                &group,
                ctx.action,
            ) {
                return Err(TransferError::NotSymmetric);
            }
            Some(group)
        }
    };
    Ok((rotated, conjugated))
}

/// Rotation by `theta` in the coordinate plane `(a, b)` of `R^{ambient}`.
pub fn plane_rotation(ambient: usize, a: usize, b: usize, theta: f64) -> DMatrix<f64> {
    let mut q = DMatrix::identity(ambient, ambient);
    let (s, c) = theta.sin_cos();
    q[(a, a)] = c;
    q[(a, b)] = -s;
    q[(b, a)] = s;
    q[(b, b)] = c;
    q
}

/// Seeded search for the smallest plane-rotation angle that moves every
/// vertex at least `1e-6` away from the equator. Returns the rotation and
/// the angle, or `None` if no sampled angle works.
pub fn equator_avoiding_rotation(
    fw: &SphericalFramework,
    plane: (usize, usize),
    seed: u64,
) -> Option<(DMatrix<f64>, f64)> {
    let ambient = fw.ambient();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut angles: Vec<f64> = (0..64)
        .map(|_| rng.random_range(1e-3..std::f64::consts::TAU))
        .collect();
    angles.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for theta in angles {
        let q = plane_rotation(ambient, plane.0, plane.1, theta);
        let clear = fw
            .points
            .iter()
            .map(|p| &q * p)
            .all(|p| p[ambient - 1].abs() > 1e-6);
        if clear {
            return Some((q, theta));
        }
    }
    None
}

/// Quarter turn taking the x-axis to the z-axis: `(x,y,z) -> (z,y,-x)`.
fn quarter_turn_x_to_z() -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 0.0])
}

/// Transforms a mirror-symmetric plane framework (bar-joint or point-line,
/// fixed vertices allowed) into a half-turn-symmetric point-line framework.
///
/// Pipeline: lift to the sphere, invert the non-representative of every
/// size-2 orbit (the free pairing step, which turns the mirror into the
/// half-turn about the x-axis except at fixed vertices), invert orbits into
/// the closed left hemisphere, quarter-turn x into z, and project back.
/// Mirror-fixed vertices travel along the plane x = 0, land on the equator
/// and come back as lines through the origin.
pub fn pair_with_fixed(
    fw: &Framework,
    ctx: &SymmetricContext,
) -> Result<(PointHyperplaneFramework, SymmetryGroup), TransferError> {
    let group = ctx.group;
    let is_planar_reflection = group.dim() == 2
        && group.order() == 2
        && group.rep(GroupElement(1)).determinant() < 0.0;
    if !is_planar_reflection {
        return Err(TransferError::NotPlanarReflection);
    }
    // fixed vertices must sit in the mirror (checked before general
    // validation so the error names the offending vertex)
    let n = ctx.action[0].len();
    let mirror = group.rep(GroupElement(1));
    for v in 0..n {
        if ctx.action[1][v] == v {
            let on_mirror = match fw {
                Framework::Euclidean(f) => (mirror * &f.points[v] - &f.points[v]).amax()
                    < SYMMETRY_TOL,
                Framework::PointHyperplane(f) => match &f.vertices[v] {
                    PhVertex::Point(p) => (mirror * p - p).amax() < SYMMETRY_TOL,
                    // a fixed line is admissible whenever the orbit
                    // condition holds; checked by the validation below
                    PhVertex::Hyperplane { .. } => true,
                },
                Framework::Spherical(_) => {
                    return Err(TransferError::NotPlanarReflection);
                }
            };
            if !on_mirror {
                return Err(TransferError::FixedVertexOffMirror(v));
            }
        }
    }
    if !crate::frameworks::validate_symmetric(fw, group, ctx.action) {
        return Err(TransferError::NotSymmetric);
    }
    let sphere = match fw {
        Framework::Euclidean(f) => lift_euclidean_to_sphere(f)?,
        Framework::PointHyperplane(f) => project_ph_to_sphere(f, Some(ctx))?,
        Framework::Spherical(_) => unreachable!("rejected above"),
    };
    // invert the non-representative of every size-2 orbit
    let mut invert = BTreeSet::new();
    for v in 0..n {
        let w = ctx.action[1][v];
        if w != v && w < ctx.action[1][w] {
            // v = action(w) with w the representative? orientation: keep
            // the smaller index, invert the larger
        }
        if w != v && v > w {
            invert.insert(v);
        }
    }
    let mixed = partial_inversion(&sphere, &invert, None)?;
    // move every orbit into the closed left hemisphere (x <= 0); the
    // half-turn about x preserves the x coordinate, so orbits move as a
    // whole
    let mut to_left = BTreeSet::new();
    let mut seen = vec![false; n];
    for v in 0..n {
        if seen[v] {
            continue;
        }
        let orbit: Vec<usize> = if ctx.action[1][v] == v {
            vec![v]
        } else {
            vec![v, ctx.action[1][v]]
        };
        for &w in &orbit {
            seen[w] = true;
        }
        if mixed.points[v][0] > 0.0 {
            to_left.extend(orbit);
        }
    }
    let left = partial_inversion(&mixed, &to_left, None)?;
    let (upper, _) = rotate(&left, &quarter_turn_x_to_z(), None)?;
    // the new equator must consist of exactly the vertices that travelled
    // on the plane x = 0 (fixed points and fixed lines); anything else is a
    // degenerate input
    for v in 0..n {
        if upper.equator.contains(&v) && ctx.action[1][v] != v {
            return Err(TransferError::EquatorCollision);
        }
    }
    let result = project_sphere_to_ph(&upper, None)?;
    let c2 = crate::groups::make_schoenflies(2, crate::groups::SchoenfliesLabel::Cn, 2)?;
    if !crate::frameworks::validate_symmetric(
        &Framework::PointHyperplane(result.clone()),
        &c2,
        ctx.action,
    ) {
        return Err(TransferError::NotSymmetric);
    }
    Ok((result, c2))
}

/// Convenience: the symmetric graph carried through a transfer (same graph
/// and action, new group).
pub fn with_group(sg: &SymmetricGraph, group: SymmetryGroup) -> SymmetricGraph {
    SymmetricGraph {
        graph: sg.graph.clone(),
        group,
        action: sg.action.clone(),
        free_on_vertices: sg.free_on_vertices,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frameworks::{analyze, sample_symmetric, SpaceKind};
    use crate::groups::{make_schoenflies, SchoenfliesLabel};
    use crate::numerics::{self, TolerancePolicy};
    use crate::symgraph::make_symmetric_graph;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn random_spherical(seed: u64, n: usize, d: usize) -> SphericalFramework {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(0.6) {
                    edges.push((i, j));
                }
            }
        }
        let graph = Graph::new(n, &edges).unwrap();
        let points = (0..n)
            .map(|_| DVector::from_fn(d + 1, |_, _| rng.random_range(-1.0..1.0)))
            .collect();
        SphericalFramework::new(graph, d, points).unwrap()
    }

    #[test]
    fn inversion_identity_and_global() {
        let fw = random_spherical(1, 5, 2);
        let same = partial_inversion(&fw, &BTreeSet::new(), None).unwrap();
        for v in 0..5 {
            assert!((&fw.points[v] - &same.points[v]).amax() < 1e-15);
        }
        let all: BTreeSet<usize> = (0..5).collect();
        let anti = partial_inversion(&fw, &all, None).unwrap();
        let m1 = crate::frameworks::rigidity_matrix_spherical(&fw);
        let m2 = crate::frameworks::rigidity_matrix_spherical(&anti);
        assert_eq!(
            numerics::rank(&m1, &tol()).unwrap(),
            numerics::rank(&m2, &tol()).unwrap()
        );
    }

    #[test]
    fn inversion_preserves_rank_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for seed in 0..30 {
            let fw = random_spherical(seed, 6, 2);
            let invert: BTreeSet<usize> = (0..6).filter(|_| rng.random_bool(0.5)).collect();
            let inv = partial_inversion(&fw, &invert, None).unwrap();
            let m1 = crate::frameworks::rigidity_matrix_spherical(&fw);
            let m2 = crate::frameworks::rigidity_matrix_spherical(&inv);
            assert_eq!(
                numerics::rank(&m1, &tol()).unwrap(),
                numerics::rank(&m2, &tol()).unwrap()
            );
        }
    }

    #[test]
    fn inversion_requires_orbit_closure() {
        let graph = Graph::new(2, &[(0, 1)]).unwrap();
        let cs = make_schoenflies(2, SchoenfliesLabel::Cs, 1).unwrap();
        let sg = make_symmetric_graph(graph, cs, &[(GroupElement(1), vec![1, 0])]).unwrap();
        let aug = sg.group.augment();
        let fw = sample_symmetric(&sg_with(&sg, &aug), SpaceKind::Spherical, 2, &BTreeSet::new(), 5)
            .unwrap();
        let Framework::Spherical(f) = fw else { panic!() };
        let ctx_group = aug;
        let ctx = SymmetricContext::new(&ctx_group, &sg.action);
        assert!(matches!(
            partial_inversion(&f, &BTreeSet::from([0]), Some(&ctx)),
            Err(TransferError::NotOrbitClosed)
        ));
    }

    fn sg_with(sg: &SymmetricGraph, group: &SymmetryGroup) -> SymmetricGraph {
        with_group(sg, group.clone())
    }

    #[test]
    fn projection_examples() {
        // point (0,0) -> north pole; point (1,0) -> (1,0,1)/sqrt(2); line
        // with normal (0,1) -> (0,1,0) regardless of offset
        let graph = Graph::new(3, &[(0, 1), (0, 2)]).unwrap();
        let fw = PointHyperplaneFramework::new(
            graph,
            2,
            vec![
                PhVertex::Point(DVector::from_vec(vec![0.0, 0.0])),
                PhVertex::Point(DVector::from_vec(vec![1.0, 0.0])),
                PhVertex::Hyperplane {
                    normal: DVector::from_vec(vec![0.0, 1.0]),
                    offset: 0.7,
                },
            ],
        )
        .unwrap();
        let sphere = project_ph_to_sphere(&fw, None).unwrap();
        assert!((&sphere.points[0] - DVector::from_vec(vec![0.0, 0.0, 1.0])).amax() < 1e-12);
        let s = 1.0 / 2.0_f64.sqrt();
        assert!((&sphere.points[1] - DVector::from_vec(vec![s, 0.0, s])).amax() < 1e-12);
        assert!((&sphere.points[2] - DVector::from_vec(vec![0.0, 1.0, 0.0])).amax() < 1e-12);
        assert_eq!(sphere.equator, BTreeSet::from([2]));
    }

    #[test]
    fn sphere_to_ph_examples() {
        let graph = Graph::new(2, &[(0, 1)]).unwrap();
        let fw = SphericalFramework::new(
            graph,
            2,
            vec![
                DVector::from_vec(vec![0.0, 0.0, 1.0]),
                DVector::from_vec(vec![1.0, 0.0, 0.0]),
            ],
        )
        .unwrap();
        let ph = project_sphere_to_ph(&fw, None).unwrap();
        match &ph.vertices[0] {
            PhVertex::Point(p) => assert!(p.amax() < 1e-12),
            _ => panic!("expected a point"),
        }
        match &ph.vertices[1] {
            PhVertex::Hyperplane { normal, offset } => {
                assert!((normal - DVector::from_vec(vec![1.0, 0.0])).amax() < 1e-12);
                assert_eq!(*offset, 0.0);
            }
            _ => panic!("expected a line"),
        }
    }

    #[test]
    fn ph_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for seed in 0..20 {
            let n_p = rng.random_range(1..5usize);
            let n_h = rng.random_range(1..3usize);
            let n = n_p + n_h;
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random_bool(0.5) {
                        edges.push((i, j));
                    }
                }
            }
            let graph = Graph::new(n, &edges).unwrap();
            let vertices: Vec<PhVertex> = (0..n)
                .map(|v| {
                    if v < n_p {
                        PhVertex::Point(DVector::from_fn(2, |_, _| rng.random_range(-1.0..1.0)))
                    } else {
                        PhVertex::Hyperplane {
                            normal: DVector::from_fn(2, |_, _| {
                                rng.random_range(-1.0..1.0) + 0.1
                            }),
                            offset: 0.0,
                        }
                    }
                })
                .collect();
            let fw = PointHyperplaneFramework::new(graph, 2, vertices).unwrap();
            let sphere = project_ph_to_sphere(&fw, None).unwrap();
            let back = project_sphere_to_ph(&sphere, None).unwrap();
            for v in 0..n {
                match (&fw.vertices[v], &back.vertices[v]) {
                    (PhVertex::Point(a), PhVertex::Point(b)) => {
                        assert!((a - b).amax() < 1e-9, "seed {seed} vertex {v}");
                    }
                    (
                        PhVertex::Hyperplane { normal: a, .. },
                        PhVertex::Hyperplane { normal: b, .. },
                    ) => {
                        let diff = (a - b).amax().min((a + b).amax());
                        assert!(diff < 1e-9, "seed {seed} vertex {v}");
                    }
                    _ => panic!("kind changed in round trip"),
                }
            }
        }
    }

    #[test]
    fn pairing_transform_cs_to_c2() {
        let graph = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let cs = make_schoenflies(2, SchoenfliesLabel::Cs, 1).unwrap();
        let sg = make_symmetric_graph(graph, cs, &[(GroupElement(1), vec![1, 0, 3, 2])]).unwrap();
        let aug = sg.group.augment();
        let sga = sg_with(&sg, &aug);
        let fw = sample_symmetric(&sga, SpaceKind::Spherical, 2, &BTreeSet::new(), 21).unwrap();
        let Framework::Spherical(f) = fw else { panic!() };
        let ctx = SymmetricContext::new(&aug, &sg.action);
        let (paired, twisted) = pairing_transform(&f, &ctx, &Subgroup::trivial()).unwrap();
        // representative of each orbit (even indices here) is untouched,
        // the partner is inverted
        assert_eq!(paired.points[0], f.points[0]);
        assert!((&paired.points[1] + &f.points[1]).amax() < 1e-12);
        // the twisted group is the half-turn about the x-axis
        let expected = DMatrix::from_row_slice(
            3,
            3,
            &[1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0],
        );
        assert!((twisted.rep(GroupElement(1)) - expected).amax() < 1e-12);
        // rank preserved
        let m1 = crate::frameworks::rigidity_matrix_spherical(&f);
        let m2 = crate::frameworks::rigidity_matrix_spherical(&paired);
        assert_eq!(
            numerics::rank(&m1, &tol()).unwrap(),
            numerics::rank(&m2, &tol()).unwrap()
        );
        // involutive
        let ctx2 = SymmetricContext::new(&twisted, &sg.action);
        let (back, _) = pairing_transform(&paired, &ctx2, &Subgroup::trivial()).unwrap();
        for v in 0..4 {
            assert!((&back.points[v] - &f.points[v]).amax() < 1e-12);
        }
    }

    #[test]
    fn pairing_rejects_index_one_and_nonfree() {
        let graph = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let cs = make_schoenflies(2, SchoenfliesLabel::Cs, 1).unwrap();
        let sg = make_symmetric_graph(graph, cs, &[(GroupElement(1), vec![1, 0, 3, 2])]).unwrap();
        let aug = sg.group.augment();
        let sga = sg_with(&sg, &aug);
        let fw = sample_symmetric(&sga, SpaceKind::Spherical, 2, &BTreeSet::new(), 23).unwrap();
        let Framework::Spherical(f) = fw else { panic!() };
        let ctx = SymmetricContext::new(&aug, &sg.action);
        let whole = Subgroup {
            members: BTreeSet::from([0, 1]),
        };
        assert!(matches!(
            pairing_transform(&f, &ctx, &whole),
            Err(TransferError::Group(GroupError::NotIndex2))
        ));
    }

    #[test]
    fn double_cover_trivial_group_gives_inversion_group() {
        let graph = Graph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let triv = make_schoenflies(2, SchoenfliesLabel::Cn, 1).unwrap().augment();
        let sg = SymmetricGraph::with_trivial_group(graph, triv.clone());
        let fw = sample_symmetric(&sg, SpaceKind::Spherical, 2, &BTreeSet::new(), 3).unwrap();
        let Framework::Spherical(f) = fw else { panic!() };
        let ctx = SymmetricContext::new(&triv, &sg.action);
        let (cover, extended, action) = double_cover(&f, &ctx).unwrap();
        assert_eq!(extended.order(), 2);
        assert!(extended.contains_minus_identity());
        assert_eq!(cover.graph.vertex_count(), 6);
        assert_eq!(action.len(), 2);
        // connected input: the cover is disconnected and not rigid
        assert!(!cover.graph.is_connected());
        let report = analyze(&Framework::Spherical(cover), &tol()).unwrap();
        assert!(!report.is_inf_rigid);
    }

    #[test]
    fn double_cover_rejects_inversion_groups() {
        let graph = Graph::new(2, &[(0, 1)]).unwrap();
        let ci = make_schoenflies(3, SchoenfliesLabel::Ci, 1).unwrap();
        let sg0 = make_symmetric_graph(graph, ci, &[(GroupElement(1), vec![1, 0])]).unwrap();
        let fw = sample_symmetric(&sg0, SpaceKind::Spherical, 2, &BTreeSet::new(), 2).unwrap();
        let Framework::Spherical(f) = fw else { panic!() };
        let ctx = SymmetricContext::new(&sg0.group, &sg0.action);
        assert!(matches!(
            double_cover(&f, &ctx),
            Err(TransferError::Group(GroupError::ContainsInversion))
        ));
    }

    #[test]
    fn rotate_quarter_turn_and_rank() {
        let fw = random_spherical(14, 5, 2);
        let q = quarter_turn_x_to_z();
        let (rotated, _) = rotate(&fw, &q, None).unwrap();
        // (1,0,0) -> (0,0,-1) under this convention
        let e1 = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        assert!((&q * e1 - DVector::from_vec(vec![0.0, 0.0, -1.0])).amax() < 1e-12);
        let m1 = crate::frameworks::rigidity_matrix_spherical(&fw);
        let m2 = crate::frameworks::rigidity_matrix_spherical(&rotated);
        assert_eq!(
            numerics::rank(&m1, &tol()).unwrap(),
            numerics::rank(&m2, &tol()).unwrap()
        );
        let bad = DMatrix::from_row_slice(3, 3, &[1.0, 0.1, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(matches!(
            rotate(&fw, &bad, None),
            Err(TransferError::NotOrthogonal)
        ));
    }

    #[test]
    fn equator_avoidance_finds_angle() {
        let graph = Graph::new(2, &[(0, 1)]).unwrap();
        let fw = SphericalFramework::new(
            graph,
            2,
            vec![
                DVector::from_vec(vec![0.6, 0.8, 0.0]),
                DVector::from_vec(vec![0.8, -0.6, 0.0]),
            ],
        )
        .unwrap();
        let (q, theta) = equator_avoiding_rotation(&fw, (0, 2), 5).unwrap();
        assert!(theta > 0.0);
        for p in &fw.points {
            assert!((&q * p)[2].abs() > 1e-6);
        }
    }

    #[test]
    fn equator_avoidance_impossible_on_fixed_axis() {
        // a vertex on the axis fixed by the rotation plane can never leave
        // the equator
        let graph = Graph::new(1, &[]).unwrap();
        let fw = SphericalFramework::new(graph, 2, vec![DVector::from_vec(vec![1.0, 0.0, 0.0])])
            .unwrap();
        assert!(equator_avoiding_rotation(&fw, (1, 2), 5).is_none());
    }

    #[test]
    fn pair_with_fixed_path() {
        // path a-b-c with b fixed on the mirror
        let graph = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let cs = make_schoenflies(2, SchoenfliesLabel::Cs, 1).unwrap();
        let sg = make_symmetric_graph(graph, cs, &[(GroupElement(1), vec![2, 1, 0])]).unwrap();
        let fw = sample_symmetric(&sg, SpaceKind::Euclidean, 2, &BTreeSet::new(), 19).unwrap();
        let ctx = SymmetricContext::new(&sg.group, &sg.action);
        let (ph, c2) = pair_with_fixed(&fw, &ctx).unwrap();
        assert_eq!(c2.order(), 2);
        let kinds: Vec<bool> = ph.vertices.iter().map(|v| v.is_hyperplane()).collect();
        assert_eq!(kinds, vec![false, true, false]);
        match &ph.vertices[1] {
            PhVertex::Hyperplane { offset, .. } => assert_eq!(*offset, 0.0),
            _ => unreachable!(),
        }
        assert!(crate::frameworks::validate_symmetric(
            &Framework::PointHyperplane(ph),
            &c2,
            &sg.action
        ));
    }

    #[test]
    fn pair_with_fixed_rejects_off_mirror() {
        let graph = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let cs = make_schoenflies(2, SchoenfliesLabel::Cs, 1).unwrap();
        let sg = make_symmetric_graph(graph, cs, &[(GroupElement(1), vec![2, 1, 0])]).unwrap();
        let fw = Framework::Euclidean(
            EuclideanFramework::new(
                sg.graph.clone(),
                2,
                vec![
                    DVector::from_vec(vec![1.0, 0.5]),
                    DVector::from_vec(vec![0.3, 1.0]), // off the mirror
                    DVector::from_vec(vec![-1.0, 0.5]),
                ],
            )
            .unwrap(),
        );
        let ctx = SymmetricContext::new(&sg.group, &sg.action);
        assert!(matches!(
            pair_with_fixed(&fw, &ctx),
            Err(TransferError::FixedVertexOffMirror(1))
        ));
    }

    #[test]
    fn pair_with_fixed_no_fixed_matches_free_pairing() {
        // with a free action, the pipeline is the free pairing followed by
        // projection: the result has points only
        let graph = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let cs = make_schoenflies(2, SchoenfliesLabel::Cs, 1).unwrap();
        let sg = make_symmetric_graph(graph, cs, &[(GroupElement(1), vec![1, 0, 3, 2])]).unwrap();
        let fw = sample_symmetric(&sg, SpaceKind::Euclidean, 2, &BTreeSet::new(), 29).unwrap();
        let ctx = SymmetricContext::new(&sg.group, &sg.action);
        let (ph, c2) = pair_with_fixed(&fw, &ctx).unwrap();
        assert!(ph.vertices.iter().all(|v| !v.is_hyperplane()));
        assert!(crate::frameworks::validate_symmetric(
            &Framework::PointHyperplane(ph),
            &c2,
            &sg.action
        ));
    }
}
