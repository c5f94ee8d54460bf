//! Seeded verification suites.
//!
//! Each suite draws deterministic random instances and checks one of the
//! preservation or characterisation properties end to end. The acceptance
//! test target runs these same functions at the pinned trial counts.

use crate::forced::{self, VerdictContext};
use crate::frameworks::{
    self, analyze, basic_spherical_matrix, epsilon_transform, rigidity_matrix_spherical,
    sample_symmetric, Framework, PhVertex, PointHyperplaneFramework, SpaceKind,
    SphericalFramework,
};
use crate::groups::{
    involution_group, make_schoenflies, GroupElement, SchoenfliesLabel, Subgroup, SymmetryGroup,
};
use crate::numerics::{self, TolerancePolicy};
use crate::symgraph::{self, GainGraph, Graph, SymmetricGraph};
use crate::transfer::{self, SymmetricContext};
use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Pass/fail summary of one suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub trials: usize,
    pub passes: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            trials: 0,
            passes: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, outcome: Result<(), String>) {
        self.trials += 1;
        match outcome {
            Ok(()) => self.passes += 1,
            Err(msg) => {
                if self.failures.len() < 16 {
                    self.failures.push(format!("trial {}: {msg}", self.trials - 1));
                }
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.trials > 0 && self.passes == self.trials
    }
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, &edges).expect("random graph")
}

/// Random gain graph over `group` with non-identity loop gains.
fn random_gain_graph(
    rng: &mut ChaCha8Rng,
    group: &SymmetryGroup,
    v0: usize,
    max_edges: usize,
) -> GainGraph {
    let ne = rng.random_range(1..=max_edges.max(1));
    let mut edges = Vec::new();
    for _ in 0..ne {
        let t = rng.random_range(0..v0);
        let h = rng.random_range(0..v0);
        let (t, h) = (t.min(h), t.max(h));
        if t == h {
            if group.order() == 1 {
                continue;
            }
            let gain = GroupElement(rng.random_range(1..group.order()));
            edges.push((t, h, gain));
        } else {
            let gain = GroupElement(rng.random_range(0..group.order()));
            edges.push((t, h, gain));
        }
    }
    if edges.is_empty() {
        // fall back to one guaranteed edge
        if v0 > 1 {
            edges.push((0, 1, GroupElement(0)));
        } else if group.order() > 1 {
            edges.push((0, 0, GroupElement(1)));
        }
    }
    GainGraph::new(v0, edges, group.clone())
}

// ---------------------------------------------------------------------------
// inversion suite
// ---------------------------------------------------------------------------

/// Rank preservation under partial inversion on `S^2` and `S^3`, with
/// orbit-closed inversion sets and forced-nullity preservation in the
/// symmetric trials.
pub fn suite_inversion(trials: usize, seed: u64, tol: &TolerancePolicy) -> Vec<SuiteReport> {
    let mut report = SuiteReport::new("inversion");
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64).wrapping_mul(97));
        let d = if t % 2 == 0 { 2 } else { 3 };
        let outcome = if t % 4 < 2 {
            plain_inversion_trial(&mut rng, d, tol)
        } else {
            symmetric_inversion_trial(&mut rng, d, tol)
        };
        report.record(outcome);
    }
    vec![report]
}

fn plain_inversion_trial(
    rng: &mut ChaCha8Rng,
    d: usize,
    tol: &TolerancePolicy,
) -> Result<(), String> {
    let n = rng.random_range(3..=8usize);
    let graph = random_graph(rng, n, 0.55);
    let points: Vec<DVector<f64>> = (0..n)
        .map(|_| DVector::from_fn(d + 1, |_, _| rng.random_range(-1.0..1.0)))
        .collect();
    let fw = SphericalFramework::new(graph, d, points).map_err(|e| e.to_string())?;
    let invert: BTreeSet<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
    let inv = transfer::partial_inversion(&fw, &invert, None).map_err(|e| e.to_string())?;
    let r1 = numerics::rank(&rigidity_matrix_spherical(&fw), tol).map_err(|e| e.to_string())?;
    let r2 = numerics::rank(&rigidity_matrix_spherical(&inv), tol).map_err(|e| e.to_string())?;
    if r1 != r2 {
        return Err(format!("rank changed {r1} -> {r2}"));
    }
    Ok(())
}

fn symmetric_inversion_trial(
    rng: &mut ChaCha8Rng,
    d: usize,
    tol: &TolerancePolicy,
) -> Result<(), String> {
    let base = if rng.random_bool(0.5) {
        make_schoenflies(d, SchoenfliesLabel::Cs, 1)
    } else {
        make_schoenflies(d, SchoenfliesLabel::Cn, 2)
    }
    .map_err(|e| e.to_string())?;
    let v0 = rng.random_range(1..=4usize);
    let gg = random_gain_graph(rng, &base, v0, 2 * v0);
    let sg = symgraph::lift(&gg);
    let aug = transfer::with_group(&sg, sg.group.augment());
    let fw = sample_symmetric(&aug, SpaceKind::Spherical, d, &BTreeSet::new(), rng.random())
        .map_err(|e| e.to_string())?;
    let Framework::Spherical(f) = &fw else {
        unreachable!()
    };
    // orbit-closed inversion set: a random subset of orbits
    let mut invert = BTreeSet::new();
    for orbit in aug.vertex_orbits() {
        if rng.random_bool(0.5) {
            invert.extend(orbit);
        }
    }
    let ctx_group = aug.group.clone();
    let ctx = SymmetricContext::new(&ctx_group, &aug.action);
    let inv = transfer::partial_inversion(f, &invert, Some(&ctx)).map_err(|e| e.to_string())?;
    if !frameworks::validate_symmetric(
        &Framework::Spherical(inv.clone()),
        &ctx_group,
        &aug.action,
    ) {
        return Err("inverted framework lost its symmetry".into());
    }
    let r1 = numerics::rank(&rigidity_matrix_spherical(f), tol).map_err(|e| e.to_string())?;
    let r2 = numerics::rank(&rigidity_matrix_spherical(&inv), tol).map_err(|e| e.to_string())?;
    if r1 != r2 {
        return Err(format!("rank changed {r1} -> {r2}"));
    }
    let fb = forced::forced_rigidity(&fw, &ctx_group, &aug.action, tol).map_err(|e| e.to_string())?;
    let fa = forced::forced_rigidity(
        &Framework::Spherical(inv),
        &ctx_group,
        &aug.action,
        tol,
    )
    .map_err(|e| e.to_string())?;
    if fb.forced_nullity != fa.forced_nullity {
        return Err(format!(
            "forced nullity changed {} -> {}",
            fb.forced_nullity, fa.forced_nullity
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// transfer suite
// ---------------------------------------------------------------------------

/// Motion-defect preservation through the sphere for plain and
/// forced-symmetric point-hyperplane frameworks.
pub fn suite_transfer(trials: usize, seed: u64, tol: &TolerancePolicy) -> Vec<SuiteReport> {
    let mut incidental = SuiteReport::new("transfer-incidental");
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64).wrapping_mul(131));
        let d = if t % 2 == 0 { 2 } else { 3 };
        incidental.record(incidental_transfer_trial(&mut rng, d, tol));
    }
    let mut forced_suite = SuiteReport::new("transfer-forced");
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64).wrapping_mul(173));
        let d = if t % 2 == 0 { 2 } else { 3 };
        forced_suite.record(forced_transfer_trial(&mut rng, t, d, tol));
    }
    vec![incidental, forced_suite]
}

fn random_ph(rng: &mut ChaCha8Rng, d: usize) -> PointHyperplaneFramework {
    let n_p = rng.random_range(1..=6usize);
    let n_h = rng.random_range(1..=3usize);
    let n = n_p + n_h;
    let graph = random_graph(rng, n, 0.55);
    let vertices: Vec<PhVertex> = (0..n)
        .map(|v| {
            if v < n_p {
                PhVertex::Point(DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0)))
            } else {
                let mut a = DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
                while a.norm() < 1e-3 {
                    a = DVector::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
                }
                PhVertex::Hyperplane {
                    normal: a,
                    offset: rng.random_range(-1.0..1.0),
                }
            }
        })
        .collect();
    PointHyperplaneFramework::new(graph, d, vertices).expect("random ph framework")
}

fn incidental_transfer_trial(
    rng: &mut ChaCha8Rng,
    d: usize,
    tol: &TolerancePolicy,
) -> Result<(), String> {
    let ph = random_ph(rng, d);
    let sphere = transfer::project_ph_to_sphere(&ph, None).map_err(|e| e.to_string())?;
    let back = transfer::project_sphere_to_ph(&sphere, None).map_err(|e| e.to_string())?;
    let defect = |fw: &Framework| -> Result<(i64, bool), String> {
        let rep = analyze(fw, tol).map_err(|e| e.to_string())?;
        Ok((rep.nullity as i64 - rep.trivial_dim as i64, rep.spanning))
    };
    let (d0, spanning0) = defect(&Framework::PointHyperplane(ph.clone()))?;
    let (d1, _) = defect(&Framework::Spherical(sphere))?;
    let (d2, _) = defect(&Framework::PointHyperplane(back))?;
    if d0 != d1 || d0 != d2 {
        return Err(format!("defect changed: {d0} / sphere {d1} / round trip {d2}"));
    }
    if spanning0 {
        let rep = analyze(&Framework::PointHyperplane(ph), tol).map_err(|e| e.to_string())?;
        let expected = (d + 1) * d / 2;
        if rep.trivial_dim != expected {
            return Err(format!(
                "spanning instance has trivial dim {} != {expected}",
                rep.trivial_dim
            ));
        }
    }
    Ok(())
}

fn forced_transfer_trial(
    rng: &mut ChaCha8Rng,
    t: usize,
    d: usize,
    tol: &TolerancePolicy,
) -> Result<(), String> {
    let group = match t % 4 {
        0 => make_schoenflies(d, SchoenfliesLabel::Cs, 1),
        1 => make_schoenflies(d, SchoenfliesLabel::Cn, 2),
        2 => make_schoenflies(d, SchoenfliesLabel::Cn, 3),
        _ => make_schoenflies(d, SchoenfliesLabel::Cn, 4),
    }
    .map_err(|e| e.to_string())?;
    let v0 = rng.random_range(2..=3usize);
    let n_hyper_orbits = rng.random_range(1..=v0 - 1);
    let gg = random_gain_graph(rng, &group, v0, 2 * v0);
    let sg = symgraph::lift(&gg);
    // hyperplane orbits are the trailing quotient vertices
    let order = group.order();
    let x_set: BTreeSet<usize> = ((v0 - n_hyper_orbits) * order..v0 * order).collect();
    let fw = sample_symmetric(&sg, SpaceKind::Ph, d, &x_set, rng.random())
        .map_err(|e| e.to_string())?;
    let Framework::PointHyperplane(ph) = &fw else {
        unreachable!()
    };
    let ctx = SymmetricContext::new(&sg.group, &sg.action);
    let sphere = transfer::project_ph_to_sphere(ph, Some(&ctx)).map_err(|e| e.to_string())?;
    let aug = sg.group.augment();
    let fb = forced::forced_rigidity(&fw, &sg.group, &sg.action, tol).map_err(|e| e.to_string())?;
    let fa = forced::forced_rigidity(
        &Framework::Spherical(sphere),
        &aug,
        &sg.action,
        tol,
    )
    .map_err(|e| e.to_string())?;
    let db = fb.forced_nullity as i64 - fb.trivial_symmetric_dim as i64;
    let da = fa.forced_nullity as i64 - fa.trivial_symmetric_dim as i64;
    if db != da {
        return Err(format!("forced defect changed {db} -> {da}"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// pairing suite
// ---------------------------------------------------------------------------

struct PairingRow {
    name: String,
    left: SymmetryGroup,
    subgroup: Subgroup,
    /// sphere dimension of the trials
    d: usize,
}

fn rot_z(theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0])
}

fn swap_xz() -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0])
}

/// Finds the index-2 subgroup whose sign twist produces `right` up to the
/// documented conjugation.
fn select_subgroup(
    left: &SymmetryGroup,
    right: &SymmetryGroup,
    conj: &DMatrix<f64>,
) -> Option<Subgroup> {
    let target = right.conjugated(conj);
    left.index2_subgroups().into_iter().find(|h| {
        left.pair_representation(h)
            .map(|tw| tw.same_matrix_set(&target, 1e-9))
            .unwrap_or(false)
    })
}

fn pairing_rows() -> Vec<PairingRow> {
    use SchoenfliesLabel::*;
    let id3 = DMatrix::<f64>::identity(3, 3);
    let mut rows = Vec::new();
    let mut push = |name: String, left: SymmetryGroup, right: SymmetryGroup, conj: &DMatrix<f64>| {
        let subgroup = select_subgroup(&left, &right, conj)
            .expect("catalog pairing admits a twisting subgroup");
        rows.push(PairingRow {
            name,
            left,
            subgroup,
            d: 2,
        });
    };
    push(
        "C2 <-> Cs".into(),
        make_schoenflies(3, Cn, 2).unwrap(),
        make_schoenflies(3, Cs, 1).unwrap(),
        &swap_xz(),
    );
    for n in [1usize, 3, 5] {
        let right = if n == 1 {
            make_schoenflies(3, Cs, 1).unwrap()
        } else {
            make_schoenflies(3, Cnh, n).unwrap()
        };
        let conj = if n == 1 { swap_xz() } else { id3.clone() };
        push(
            format!("C{} <-> C{n}h", 2 * n),
            make_schoenflies(3, Cn, 2 * n).unwrap(),
            right,
            &conj,
        );
    }
    for n in [2usize, 4] {
        push(
            format!("C{} <-> S{}", 2 * n, 2 * n),
            make_schoenflies(3, Cn, 2 * n).unwrap(),
            make_schoenflies(3, S2n, n).unwrap(),
            &id3,
        );
    }
    for n in 2..=6usize {
        push(
            format!("C{n}v <-> D{n}"),
            make_schoenflies(3, Cnv, n).unwrap(),
            make_schoenflies(3, Dn, n).unwrap(),
            &id3,
        );
    }
    for n in [2usize, 4] {
        push(
            format!("C{}v <-> D{n}d", 2 * n),
            make_schoenflies(3, Cnv, 2 * n).unwrap(),
            make_schoenflies(3, Dnd, n).unwrap(),
            &rot_z(std::f64::consts::PI / (2 * n) as f64),
        );
    }
    for n in [1usize, 3] {
        push(
            format!("C{}v <-> D{n}h", 2 * n),
            make_schoenflies(3, Cnv, 2 * n).unwrap(),
            make_schoenflies(3, Dnh, n).unwrap(),
            &rot_z(std::f64::consts::PI / (2 * n) as f64),
        );
    }
    push(
        "Td <-> O".into(),
        make_schoenflies(3, Td, 1).unwrap(),
        make_schoenflies(3, O, 1).unwrap(),
        &id3,
    );
    // involution pairings on S^3: inversion in S pairs with inversion in
    // the complementary subspace
    for axes in [vec![0usize], vec![0, 1], vec![0, 1, 2]] {
        let plus: BTreeSet<usize> = axes.iter().cloned().collect();
        let left = involution_group(4, &plus).unwrap();
        rows.push(PairingRow {
            name: format!("involution {plus:?} on S3"),
            left,
            subgroup: Subgroup::trivial(),
            d: 3,
        });
    }
    rows
}

/// Full-rank and orbit-rank preservation under the pairing transform for
/// every implemented pairing.
pub fn suite_pairing(trials: usize, seed: u64, tol: &TolerancePolicy) -> Vec<SuiteReport> {
    let mut report = SuiteReport::new("pairing");
    for (row_idx, row) in pairing_rows().iter().enumerate() {
        for t in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(
                seed.wrapping_add((row_idx * 1000 + t) as u64).wrapping_mul(61),
            );
            let outcome = pairing_trial(row, &mut rng, tol)
                .map_err(|e| format!("{}: {e}", row.name));
            report.record(outcome);
        }
    }
    vec![report]
}

fn pairing_trial(
    row: &PairingRow,
    rng: &mut ChaCha8Rng,
    tol: &TolerancePolicy,
) -> Result<(), String> {
    let v0 = rng.random_range(1..=2usize);
    let gg = random_gain_graph(rng, &row.left, v0, 2 * v0 + 1);
    let sg = symgraph::lift(&gg);
    let fw = sample_symmetric(&sg, SpaceKind::Spherical, row.d, &BTreeSet::new(), rng.random())
        .map_err(|e| e.to_string())?;
    let Framework::Spherical(f) = &fw else {
        unreachable!()
    };
    let ctx = SymmetricContext::new(&sg.group, &sg.action);
    let (paired, twisted) =
        transfer::pairing_transform(f, &ctx, &row.subgroup).map_err(|e| e.to_string())?;
    let r_full_before =
        numerics::rank(&rigidity_matrix_spherical(f), tol).map_err(|e| e.to_string())?;
    let r_full_after =
        numerics::rank(&rigidity_matrix_spherical(&paired), tol).map_err(|e| e.to_string())?;
    if r_full_before != r_full_after {
        return Err(format!("full rank changed {r_full_before} -> {r_full_after}"));
    }
    let orbit_before =
        forced::orbit_matrix_spherical(f, &sg.group, &sg.action).map_err(|e| e.to_string())?;
    let orbit_after =
        forced::orbit_matrix_spherical(&paired, &twisted, &sg.action).map_err(|e| e.to_string())?;
    let ro_before = numerics::rank(&orbit_before.matrix, tol).map_err(|e| e.to_string())?;
    let ro_after = numerics::rank(&orbit_after.matrix, tol).map_err(|e| e.to_string())?;
    if ro_before != ro_after {
        return Err(format!("orbit rank changed {ro_before} -> {ro_after}"));
    }
    // involutive
    let ctx2 = SymmetricContext::new(&twisted, &sg.action);
    let (back, _) =
        transfer::pairing_transform(&paired, &ctx2, &row.subgroup).map_err(|e| e.to_string())?;
    for (a, b) in back.points.iter().zip(f.points.iter()) {
        if (a - b).amax() > 1e-9 {
            return Err("pairing transform is not involutive".into());
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// orbit-matrix oracle (used by the acceptance suite)
// ---------------------------------------------------------------------------

/// Exact agreement between the orbit-matrix nullity and the
/// symmetric-subspace nullity, for spherical and point-hyperplane free
/// actions.
pub fn oracle_equivalence(trials: usize, seed: u64, tol: &TolerancePolicy) -> Vec<SuiteReport> {
    let mut spherical = SuiteReport::new("oracle-spherical");
    let mut ph = SuiteReport::new("oracle-ph");
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64).wrapping_mul(211));
        let group = match t % 4 {
            0 => make_schoenflies(2, SchoenfliesLabel::Cs, 1),
            1 => make_schoenflies(2, SchoenfliesLabel::Cn, 2),
            2 => make_schoenflies(2, SchoenfliesLabel::Cn, 3),
            _ => make_schoenflies(2, SchoenfliesLabel::Cn, 4),
        }
        .expect("catalog group");
        let v0 = rng.random_range(1..=3usize);
        let gg = random_gain_graph(&mut rng, &group, v0, 2 * v0);
        let sg = symgraph::lift(&gg);
        // spherical variant
        let aug = transfer::with_group(&sg, sg.group.augment());
        spherical.record(oracle_spherical_trial(&aug, &mut rng, tol));
        // ph variant needs at least one hyperplane orbit
        if v0 >= 2 {
            ph.record(oracle_ph_trial(&sg, &mut rng, tol));
        } else {
            let gg2 = random_gain_graph(&mut rng, &group, 2, 4);
            let sg2 = symgraph::lift(&gg2);
            ph.record(oracle_ph_trial(&sg2, &mut rng, tol));
        }
    }
    vec![spherical, ph]
}

fn oracle_spherical_trial(
    aug: &SymmetricGraph,
    rng: &mut ChaCha8Rng,
    tol: &TolerancePolicy,
) -> Result<(), String> {
    let fw = sample_symmetric(aug, SpaceKind::Spherical, 2, &BTreeSet::new(), rng.random())
        .map_err(|e| e.to_string())?;
    let Framework::Spherical(f) = &fw else {
        unreachable!()
    };
    let orbit =
        forced::orbit_matrix_spherical(f, &aug.group, &aug.action).map_err(|e| e.to_string())?;
    let report =
        forced::forced_rigidity(&fw, &aug.group, &aug.action, tol).map_err(|e| e.to_string())?;
    let orbit_nullity = orbit.nullity(tol).map_err(|e| e.to_string())?;
    if orbit_nullity != report.forced_nullity {
        return Err(format!(
            "orbit nullity {orbit_nullity} != restriction nullity {}",
            report.forced_nullity
        ));
    }
    Ok(())
}

fn oracle_ph_trial(
    sg: &SymmetricGraph,
    rng: &mut ChaCha8Rng,
    tol: &TolerancePolicy,
) -> Result<(), String> {
    let order = sg.group.order();
    let v0 = sg.graph.vertex_count() / order;
    let n_hyper = rng.random_range(1..v0);
    let x_set: BTreeSet<usize> = ((v0 - n_hyper) * order..v0 * order).collect();
    let fw = sample_symmetric(sg, SpaceKind::Ph, 2, &x_set, rng.random())
        .map_err(|e| e.to_string())?;
    let Framework::PointHyperplane(ph) = &fw else {
        unreachable!()
    };
    let orbit = forced::orbit_matrix_ph(ph, &sg.group, &sg.action).map_err(|e| e.to_string())?;
    let report =
        forced::forced_rigidity(&fw, &sg.group, &sg.action, tol).map_err(|e| e.to_string())?;
    let orbit_nullity = orbit.nullity(tol).map_err(|e| e.to_string())?;
    if orbit_nullity != report.forced_nullity {
        return Err(format!(
            "orbit nullity {orbit_nullity} != restriction nullity {}",
            report.forced_nullity
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// combinatorial suite
// ---------------------------------------------------------------------------

pub fn suite_combinatorial(seed: u64, tol: &TolerancePolicy) -> Vec<SuiteReport> {
    vec![
        z2_enumeration(seed, tol),
        isostatic_catalog(seed, tol),
        point_line_two_lines(seed, tol),
        point_line_fixed_lines(seed, tol),
    ]
}

/// All connected Z2-gain graphs with `|V0| <= 4`, `|E0| <= 2|V0|`, up to
/// gain switching: the forced and incidental verdicts of sampled half-turn
/// frameworks must match the gain-tight witnesses.
fn z2_enumeration(seed: u64, tol: &TolerancePolicy) -> SuiteReport {
    let mut report = SuiteReport::new("z2-enumeration");
    let c2 = make_schoenflies(2, SchoenfliesLabel::Cn, 2).expect("C2");
    for v0 in 1..=4usize {
        let pairs: Vec<(usize, usize)> = (0..v0)
            .flat_map(|i| (i + 1..v0).map(move |j| (i, j)))
            .collect();
        let num_pair_states = 4u64.pow(pairs.len() as u32);
        let num_loop_states = 1u64 << v0;
        for pair_code in 0..num_pair_states {
            let pair_states = decode_pair_states(pair_code, pairs.len());
            if !quotient_connected(v0, &pairs, &pair_states) {
                continue;
            }
            for loop_mask in 0..num_loop_states {
                let edge_count: usize = pair_states
                    .iter()
                    .map(|s| s.count_ones() as usize)
                    .sum::<usize>()
                    + loop_mask.count_ones() as usize;
                if edge_count > 2 * v0 {
                    continue;
                }
                if !is_switching_canonical(v0, &pairs, &pair_states, loop_mask) {
                    continue;
                }
                let gg = build_z2_gain_graph(&c2, v0, &pairs, &pair_states, loop_mask);
                report.record(z2_instance_check(&gg, seed, tol));
            }
        }
    }
    report
}

fn decode_pair_states(code: u64, len: usize) -> Vec<u8> {
    let mut states = Vec::with_capacity(len);
    let mut c = code;
    for _ in 0..len {
        states.push((c % 4) as u8);
        c /= 4;
    }
    states
}

fn quotient_connected(v0: usize, pairs: &[(usize, usize)], states: &[u8]) -> bool {
    if v0 == 1 {
        return true;
    }
    let mut parent: Vec<usize> = (0..v0).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for (idx, &(i, j)) in pairs.iter().enumerate() {
        if states[idx] != 0 {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
    }
    let root = find(&mut parent, 0);
    (1..v0).all(|v| find(&mut parent, v) == root)
}

/// Gain switching flips the labels of the pair edges with exactly one
/// endpoint in the switched set; a configuration is kept only if it is the
/// lexicographic minimum of its switching class (vertex 0 stays unswitched
/// because a set and its complement act identically).
fn is_switching_canonical(
    v0: usize,
    pairs: &[(usize, usize)],
    states: &[u8],
    loop_mask: u64,
) -> bool {
    let key = |st: &[u8]| -> Vec<u8> { st.to_vec() };
    let original = key(states);
    for switch_mask in 0u64..(1 << (v0.saturating_sub(1))) {
        let in_set = |v: usize| v > 0 && (switch_mask >> (v - 1)) & 1 == 1;
        let mut switched: Vec<u8> = Vec::with_capacity(states.len());
        for (idx, &(i, j)) in pairs.iter().enumerate() {
            let s = states[idx];
            let flip = in_set(i) != in_set(j);
            switched.push(if flip {
                match s {
                    1 => 2,
                    2 => 1,
                    other => other,
                }
            } else {
                s
            });
        }
        if (key(&switched), loop_mask) < (original.clone(), loop_mask) {
            return false;
        }
    }
    true
}

fn build_z2_gain_graph(
    c2: &SymmetryGroup,
    v0: usize,
    pairs: &[(usize, usize)],
    states: &[u8],
    loop_mask: u64,
) -> GainGraph {
    let mut edges = Vec::new();
    for v in 0..v0 {
        if (loop_mask >> v) & 1 == 1 {
            edges.push((v, v, GroupElement(1)));
        }
    }
    for (idx, &(i, j)) in pairs.iter().enumerate() {
        if states[idx] & 1 != 0 {
            edges.push((i, j, GroupElement(0)));
        }
        if states[idx] & 2 != 0 {
            edges.push((i, j, GroupElement(1)));
        }
    }
    GainGraph::new(v0, edges, c2.clone())
}

fn z2_instance_check(gg: &GainGraph, seed: u64, tol: &TolerancePolicy) -> Result<(), String> {
    let verdict = forced::combinatorial_verdict(&VerdictContext::PlaneCyclicFree {
        gain_graph: gg,
    });
    let predicted_forced = verdict.predicted_forced_rigid.ok_or("prediction missing")?;
    let predicted_rigid = verdict.predicted_inf_rigid.ok_or("prediction missing")?;
    let sg = symgraph::lift(gg);
    let mut any_rigid = false;
    let mut any_forced = false;
    for s in 0..3u64 {
        let fw = sample_symmetric(
            &sg,
            SpaceKind::Euclidean,
            2,
            &BTreeSet::new(),
            seed.wrapping_add(s).wrapping_mul(7919),
        )
        .map_err(|e| e.to_string())?;
        let rep = analyze(&fw, tol).map_err(|e| e.to_string())?;
        any_rigid |= rep.is_inf_rigid;
        let forced_rep = forced::forced_rigidity(&fw, &sg.group, &sg.action, tol)
            .map_err(|e| e.to_string())?;
        any_forced |= forced_rep.forced_rigid;
    }
    if any_forced != predicted_forced {
        return Err(format!(
            "forced verdict {any_forced} != predicted {predicted_forced} on {:?}",
            gg.edges
        ));
    }
    if any_rigid != predicted_rigid {
        return Err(format!(
            "rigidity verdict {any_rigid} != predicted {predicted_rigid} on {:?}",
            gg.edges
        ));
    }
    Ok(())
}

/// A curated catalog of plane frameworks with reflection, half-turn and
/// 3-fold actions covering the satisfied and violated fixed-count
/// combinations of the isostatic characterisation.
fn isostatic_catalog(seed: u64, tol: &TolerancePolicy) -> SuiteReport {
    let mut report = SuiteReport::new("isostatic-catalog");
    for (name, sg) in isostatic_cases() {
        report.record(
            isostatic_case_check(&sg, seed, tol).map_err(|e| format!("{name}: {e}")),
        );
    }
    report
}

fn isostatic_cases() -> Vec<(String, SymmetricGraph)> {
    let cs = make_schoenflies(2, SchoenfliesLabel::Cs, 1).unwrap();
    let c2 = make_schoenflies(2, SchoenfliesLabel::Cn, 2).unwrap();
    let c3 = make_schoenflies(2, SchoenfliesLabel::Cn, 3).unwrap();
    let sg = |graph: Graph, group: &SymmetryGroup, perm: Vec<usize>| {
        symgraph::make_symmetric_graph(graph, group.clone(), &[(GroupElement(1), perm)])
            .expect("catalog case")
    };
    let k4e = || Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
    let k3 = || Graph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
    let prism = || {
        Graph::new(
            6,
            &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)],
        )
        .unwrap()
    };
    // K4-e with two ears: still (2,3)-tight, free half-turn action with one
    // fixed edge
    let eared = || {
        Graph::new(
            6,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (4, 0), (4, 2), (5, 1), (5, 3)],
        )
        .unwrap()
    };
    let hexagon = || Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]).unwrap();
    let k4 = || Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    vec![
        ("K4-e C2 free".into(), sg(k4e(), &c2, vec![1, 0, 3, 2])),
        ("K4-e Cs free".into(), sg(k4e(), &cs, vec![1, 0, 3, 2])),
        (
            "K4-e Cs fixed pair".into(),
            sg(k4e(), &cs, vec![0, 1, 3, 2]),
        ),
        ("K3 C3 free".into(), sg(k3(), &c3, vec![1, 2, 0])),
        ("K3 Cs fixed vertex".into(), sg(k3(), &cs, vec![0, 2, 1])),
        ("K3 C2 fixed vertex".into(), sg(k3(), &c2, vec![0, 2, 1])),
        (
            "prism Cs three fixed edges".into(),
            sg(prism(), &cs, vec![3, 4, 5, 0, 1, 2]),
        ),
        (
            "prism C2 three fixed edges".into(),
            sg(prism(), &c2, vec![3, 4, 5, 0, 1, 2]),
        ),
        (
            "prism C3 free".into(),
            sg(prism(), &c3, vec![1, 2, 0, 4, 5, 3]),
        ),
        ("eared C2 free".into(), sg(eared(), &c2, vec![1, 0, 3, 2, 5, 4])),
        ("eared Cs free".into(), sg(eared(), &cs, vec![1, 0, 3, 2, 5, 4])),
        (
            "hexagon C3 flexible".into(),
            sg(hexagon(), &c3, vec![2, 3, 4, 5, 0, 1]),
        ),
        ("K4 C2 redundant".into(), sg(k4(), &c2, vec![1, 0, 3, 2])),
    ]
}

fn isostatic_case_check(
    sg: &SymmetricGraph,
    seed: u64,
    tol: &TolerancePolicy,
) -> Result<(), String> {
    let verdict = forced::combinatorial_verdict(&VerdictContext::PlaneIsostatic { sg });
    let predicted = verdict.predicted_isostatic.ok_or("prediction missing")?;
    let mut any_isostatic = false;
    for s in 0..3u64 {
        let fw = sample_symmetric(
            sg,
            SpaceKind::Euclidean,
            2,
            &BTreeSet::new(),
            seed.wrapping_add(s).wrapping_mul(6007),
        )
        .map_err(|e| e.to_string())?;
        let rep = analyze(&fw, tol).map_err(|e| e.to_string())?;
        any_isostatic |= rep.is_isostatic;
    }
    if any_isostatic != predicted {
        return Err(format!(
            "numeric isostatic {any_isostatic} != predicted {predicted}"
        ));
    }
    Ok(())
}

/// Reflection-symmetric point-line frameworks with exactly two lines in one
/// free orbit: rigidity and forced rigidity match the gain-tight counts.
fn point_line_two_lines(seed: u64, tol: &TolerancePolicy) -> SuiteReport {
    let mut report = SuiteReport::new("point-line-two-lines");
    let cs = make_schoenflies(2, SchoenfliesLabel::Cs, 1).expect("Cs");
    let mut produced = 0usize;
    let mut attempt = 0u64;
    while produced < 28 && attempt < 400 {
        attempt += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt).wrapping_mul(331));
        let v0 = rng.random_range(2..=4usize);
        let gg = random_gain_graph(&mut rng, &cs, v0, 2 * v0);
        // the trailing quotient vertex is the line orbit
        let connected = {
            let pairs: Vec<(usize, usize)> = gg
                .edges
                .iter()
                .filter(|&&(t, h, _)| t != h)
                .map(|&(t, h, _)| (t, h))
                .collect();
            let states: Vec<u8> = vec![1; pairs.len()];
            quotient_connected(v0, &pairs, &states)
        };
        if !connected {
            continue;
        }
        produced += 1;
        report.record(two_line_instance_check(&gg, v0 - 1, seed ^ attempt, tol));
    }
    report
}

fn two_line_instance_check(
    gg: &GainGraph,
    line_orbit: usize,
    seed: u64,
    tol: &TolerancePolicy,
) -> Result<(), String> {
    let verdict = forced::combinatorial_verdict(&VerdictContext::PointLineTwoLinesCs {
        gain_graph: gg,
        line_orbit,
    });
    let predicted_rigid = verdict.predicted_inf_rigid.ok_or("prediction missing")?;
    let predicted_forced = verdict.predicted_forced_rigid.ok_or("prediction missing")?;
    let sg = symgraph::lift(gg);
    let order = sg.group.order();
    let x_set: BTreeSet<usize> = (line_orbit * order..(line_orbit + 1) * order).collect();
    let mut any_rigid = false;
    let mut any_forced = false;
    for s in 0..3u64 {
        let fw = sample_symmetric(
            &sg,
            SpaceKind::Ph,
            2,
            &x_set,
            seed.wrapping_add(s).wrapping_mul(947),
        )
        .map_err(|e| e.to_string())?;
        let rep = analyze(&fw, tol).map_err(|e| e.to_string())?;
        any_rigid |= rep.is_inf_rigid;
        let forced_rep = forced::forced_rigidity(&fw, &sg.group, &sg.action, tol)
            .map_err(|e| e.to_string())?;
        any_forced |= forced_rep.forced_rigid;
    }
    if any_rigid != predicted_rigid {
        return Err(format!(
            "rigidity {any_rigid} != predicted {predicted_rigid} on {:?}",
            gg.edges
        ));
    }
    if any_forced != predicted_forced {
        return Err(format!(
            "forced {any_forced} != predicted {predicted_forced} on {:?}",
            gg.edges
        ));
    }
    Ok(())
}

/// Half-turn point-line frameworks with every line fixed by the action:
/// isostatic iff (2,3)-tight with exactly one fixed edge.
fn point_line_fixed_lines(seed: u64, tol: &TolerancePolicy) -> SuiteReport {
    let mut report = SuiteReport::new("point-line-fixed-lines");
    let c2 = make_schoenflies(2, SchoenfliesLabel::Cn, 2).expect("C2");
    let mut produced = 0usize;
    let mut attempt = 0u64;
    while produced < 28 && attempt < 400 {
        attempt += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt).wrapping_mul(389));
        let n_pairs = rng.random_range(1..=3usize);
        let n_lines = rng.random_range(1..=2usize);
        let n_points = 2 * n_pairs;
        let n = n_points + n_lines;
        // orbit-closed edge candidates
        let mut candidates: Vec<Vec<(usize, usize)>> = Vec::new();
        for i in 0..n_pairs {
            candidates.push(vec![(2 * i, 2 * i + 1)]); // fixed pair edge
            for j in i + 1..n_pairs {
                candidates.push(vec![(2 * i, 2 * j), (2 * i + 1, 2 * j + 1)]);
                candidates.push(vec![(2 * i, 2 * j + 1), (2 * i + 1, 2 * j)]);
            }
            for l in 0..n_lines {
                candidates.push(vec![(2 * i, n_points + l), (2 * i + 1, n_points + l)]);
            }
        }
        for l1 in 0..n_lines {
            for l2 in l1 + 1..n_lines {
                candidates.push(vec![(n_points + l1, n_points + l2)]);
            }
        }
        let mut edges = Vec::new();
        for orbit in &candidates {
            if rng.random_bool(0.6) {
                edges.extend(orbit.iter().cloned());
            }
        }
        if edges.is_empty() {
            continue;
        }
        let graph = match Graph::new(n, &edges) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let mut perm: Vec<usize> = (0..n).collect();
        for i in 0..n_pairs {
            perm.swap(2 * i, 2 * i + 1);
        }
        let sg = match symgraph::make_symmetric_graph(
            graph,
            c2.clone(),
            &[(GroupElement(1), perm)],
        ) {
            Ok(sg) => sg,
            Err(_) => continue,
        };
        let lines: BTreeSet<usize> = (n_points..n).collect();
        produced += 1;
        report.record(fixed_line_instance_check(&sg, &lines, seed ^ attempt, tol));
    }
    report
}

fn fixed_line_instance_check(
    sg: &SymmetricGraph,
    lines: &BTreeSet<usize>,
    seed: u64,
    tol: &TolerancePolicy,
) -> Result<(), String> {
    let verdict = forced::combinatorial_verdict(&VerdictContext::PointLineFixedLinesC2 {
        sg,
        line_vertices: lines,
    });
    let predicted = verdict.predicted_isostatic.ok_or("prediction missing")?;
    let mut any_isostatic = false;
    for s in 0..3u64 {
        let fw = sample_symmetric(
            sg,
            SpaceKind::Ph,
            2,
            lines,
            seed.wrapping_add(s).wrapping_mul(1511),
        )
        .map_err(|e| e.to_string())?;
        let rep = analyze(&fw, tol).map_err(|e| e.to_string())?;
        any_isostatic |= rep.is_isostatic;
    }
    if any_isostatic != predicted {
        return Err(format!(
            "numeric isostatic {any_isostatic} != predicted {predicted}"
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// double cover suite
// ---------------------------------------------------------------------------

fn doublecover_rows() -> Vec<(String, SymmetryGroup)> {
    use SchoenfliesLabel::*;
    let mut rows: Vec<(String, SymmetryGroup)> = Vec::new();
    rows.push(("C1".into(), make_schoenflies(3, Cn, 1).unwrap()));
    rows.push(("Cs".into(), make_schoenflies(3, Cs, 1).unwrap()));
    for n in 2..=6usize {
        rows.push((format!("C{n}"), make_schoenflies(3, Cn, n).unwrap()));
    }
    rows.push(("C2v".into(), make_schoenflies(3, Cnv, 2).unwrap()));
    rows.push(("C3v".into(), make_schoenflies(3, Cnv, 3).unwrap()));
    rows.push(("C3h".into(), make_schoenflies(3, Cnh, 3).unwrap()));
    rows.push(("S4".into(), make_schoenflies(3, S2n, 2).unwrap()));
    for n in 1..=3usize {
        rows.push((format!("D{n}"), make_schoenflies(3, Dn, n).unwrap()));
    }
    rows.push(("D1h".into(), make_schoenflies(3, Dnh, 1).unwrap()));
    rows
}

/// Forced-verdict preservation under the double cover, and loss of full
/// rigidity for connected inputs, across all catalog groups of order at
/// most 6 without the inversion.
pub fn suite_doublecover(trials: usize, seed: u64, tol: &TolerancePolicy) -> Vec<SuiteReport> {
    let mut report = SuiteReport::new("doublecover");
    for (row_idx, (name, group)) in doublecover_rows().iter().enumerate() {
        assert!(
            !group.contains_minus_identity(),
            "double cover rows must not contain the inversion"
        );
        for t in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(
                seed.wrapping_add((row_idx * 1000 + t) as u64).wrapping_mul(419),
            );
            report.record(
                doublecover_trial(group, &mut rng, tol).map_err(|e| format!("{name}: {e}")),
            );
        }
    }
    vec![report]
}

fn doublecover_trial(
    group: &SymmetryGroup,
    rng: &mut ChaCha8Rng,
    tol: &TolerancePolicy,
) -> Result<(), String> {
    let v0 = rng.random_range(1..=2usize);
    let gg = random_gain_graph(rng, group, v0, 2 * v0 + 1);
    let sg = symgraph::lift(&gg);
    let fw = sample_symmetric(&sg, SpaceKind::Spherical, 2, &BTreeSet::new(), rng.random())
        .map_err(|e| e.to_string())?;
    let Framework::Spherical(f) = &fw else {
        unreachable!()
    };
    let ctx = SymmetricContext::new(&sg.group, &sg.action);
    let (cover, extended, action) = transfer::double_cover(f, &ctx).map_err(|e| e.to_string())?;
    if extended.order() != 2 * sg.group.order() || !extended.contains_minus_identity() {
        return Err("extended group has the wrong shape".into());
    }
    let fb = forced::forced_rigidity(&fw, &sg.group, &sg.action, tol).map_err(|e| e.to_string())?;
    let fa = forced::forced_rigidity(
        &Framework::Spherical(cover.clone()),
        &extended,
        &action,
        tol,
    )
    .map_err(|e| e.to_string())?;
    if fb.forced_rigid != fa.forced_rigid {
        return Err(format!(
            "forced verdict changed {} -> {}",
            fb.forced_rigid, fa.forced_rigid
        ));
    }
    if f.graph.is_connected() {
        let rep = analyze(&Framework::Spherical(cover), tol).map_err(|e| e.to_string())?;
        if rep.is_inf_rigid {
            return Err("double cover of a connected framework is rigid".into());
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// epsilon suite
// ---------------------------------------------------------------------------

/// Sign-transform invariance of the basic spherical matrix: exhaustive over
/// all graphs on at most 4 vertices and all sign vectors, plus rank
/// equivalence with the standard spherical matrix on random instances.
pub fn suite_epsilon(trials: usize, seed: u64, tol: &TolerancePolicy) -> Vec<SuiteReport> {
    let mut exhaustive = SuiteReport::new("epsilon-exhaustive");
    for n in 1..=4usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        for mask in 0..(1u64 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(idx, _)| (mask >> idx) & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let graph = Graph::new(n, &edges).expect("subgraph");
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed.wrapping_add(mask).wrapping_mul(n as u64 + 17));
            let points: Vec<DVector<f64>> = (0..n)
                .map(|_| DVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0)))
                .collect();
            let fw = SphericalFramework::new(graph, 2, points).expect("random sphere");
            exhaustive.record(epsilon_exhaustive_check(&fw, tol));
        }
    }
    let mut random = SuiteReport::new("epsilon-rank-equivalence");
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(t as u64).wrapping_mul(541));
        let n = rng.random_range(2..=7usize);
        let graph = random_graph(&mut rng, n, 0.6);
        let points: Vec<DVector<f64>> = (0..n)
            .map(|_| DVector::from_fn(3, |_, _| rng.random_range(-1.0..1.0)))
            .collect();
        let fw = SphericalFramework::new(graph, 2, points).expect("random sphere");
        let outcome = (|| -> Result<(), String> {
            let basic = basic_spherical_matrix(&fw);
            let standard = rigidity_matrix_spherical(&fw);
            let rb = numerics::rank(&basic, tol).map_err(|e| e.to_string())?;
            let rs = numerics::rank(&standard, tol).map_err(|e| e.to_string())?;
            if rb != rs {
                return Err(format!("basic rank {rb} != standard rank {rs}"));
            }
            Ok(())
        })();
        random.record(outcome);
    }
    vec![exhaustive, random]
}

fn epsilon_exhaustive_check(fw: &SphericalFramework, tol: &TolerancePolicy) -> Result<(), String> {
    let n = fw.graph.vertex_count();
    let basic = basic_spherical_matrix(fw);
    let base_rank = numerics::rank(&basic, tol).map_err(|e| e.to_string())?;
    for mask in 0..(1u64 << n) {
        let eps: Vec<i8> = (0..n)
            .map(|v| if (mask >> v) & 1 == 1 { -1 } else { 1 })
            .collect();
        let transformed = epsilon_transform(fw, &basic, &eps);
        let r = numerics::rank(&transformed, tol).map_err(|e| e.to_string())?;
        if r != base_rank {
            return Err(format!("rank changed to {r} under signs {eps:?}"));
        }
        // the transform is the basic matrix of the inverted framework
        let mut inverted = fw.clone();
        for (v, &e) in eps.iter().enumerate() {
            if e < 0 {
                inverted.points[v] = -&inverted.points[v];
            }
        }
        let direct = basic_spherical_matrix(&inverted);
        if (&transformed - &direct).amax() > 1e-12 {
            return Err(format!("transform mismatch under signs {eps:?}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn inversion_suite_small() {
        let reports = suite_inversion(12, 1, &tol());
        for r in &reports {
            assert!(r.ok(), "{}: {:?}", r.name, r.failures);
        }
    }

    #[test]
    fn transfer_suite_small() {
        let reports = suite_transfer(10, 2, &tol());
        for r in &reports {
            assert!(r.ok(), "{}: {:?}", r.name, r.failures);
        }
    }

    #[test]
    fn pairing_suite_smoke() {
        let reports = suite_pairing(1, 3, &tol());
        for r in &reports {
            assert!(r.ok(), "{}: {:?}", r.name, r.failures);
        }
    }

    #[test]
    fn oracle_suite_small() {
        let reports = oracle_equivalence(10, 4, &tol());
        for r in &reports {
            assert!(r.ok(), "{}: {:?}", r.name, r.failures);
        }
    }

    #[test]
    fn doublecover_suite_smoke() {
        let reports = suite_doublecover(1, 5, &tol());
        for r in &reports {
            assert!(r.ok(), "{}: {:?}", r.name, r.failures);
        }
    }

    #[test]
    fn epsilon_suite_small() {
        let reports = suite_epsilon(10, 6, &tol());
        for r in &reports {
            assert!(r.ok(), "{}: {:?}", r.name, r.failures);
        }
    }

    #[test]
    fn switching_canonicalization_reduces() {
        // the two parallel-edge configurations with swapped gains are in
        // one switching class
        let pairs = vec![(0usize, 1usize)];
        assert!(is_switching_canonical(2, &pairs, &[1], 0));
        assert!(!is_switching_canonical(2, &pairs, &[2], 0));
        // loops never switch
        assert!(is_switching_canonical(1, &[], &[], 1));
    }
}
