//! Subcommand implementations, exposed as library functions so both the
//! binary and the test suites drive the same code.

use super::docs::{
    DocError, Document, FrameworkDoc, ResolvedFramework,
};
use super::{EXIT_BAD_INPUT, EXIT_CHECK_FAILED, EXIT_OK};
use crate::forced::{self, ForcedReport};
use crate::frameworks::{self, Framework, RigidityReport, SpaceKind};
use crate::groups::Subgroup;
use crate::numerics::TolerancePolicy;
use crate::symgraph::{self, SparsityParams};
use crate::transfer::{self, SymmetricContext};
use serde::Serialize;
use std::collections::BTreeSet;

/// Outcome of a subcommand: a document to print and an exit code.
pub struct CommandOutput {
    pub document: serde_json::Value,
    pub exit_code: i32,
}

fn ok(document: serde_json::Value) -> CommandOutput {
    CommandOutput {
        document,
        exit_code: EXIT_OK,
    }
}

fn bad_input(err: impl std::fmt::Display) -> CommandOutput {
    CommandOutput {
        document: serde_json::json!({
            "kind": "report",
            "version": 1,
            "error": err.to_string(),
        }),
        exit_code: EXIT_BAD_INPUT,
    }
}

#[derive(Serialize)]
struct AnalysisReport {
    kind: &'static str,
    version: u32,
    space: SpaceKind,
    #[serde(flatten)]
    report: RigidityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    forced: Option<ForcedReport>,
}

/// `analyze`: full rigidity report, plus the forced-symmetric report when a
/// group is attached.
pub fn cmd_analyze(input: &str, tol: &TolerancePolicy) -> CommandOutput {
    let resolved = match parse_framework(input) {
        Ok(r) => r,
        Err(e) => return bad_input(e),
    };
    let report = match frameworks::analyze(&resolved.framework, tol) {
        Ok(r) => r,
        Err(e) => return bad_input(e),
    };
    let forced = match &resolved.symmetric {
        None => None,
        Some(sg) => {
            match forced::forced_rigidity(&resolved.framework, &sg.group, &sg.action, tol) {
                Ok(f) => Some(f),
                Err(e) => return bad_input(e),
            }
        }
    };
    let doc = AnalysisReport {
        kind: "report",
        version: 1,
        space: resolved.framework.space(),
        report,
        forced,
    };
    ok(serde_json::to_value(doc).expect("report serializes"))
}

fn parse_framework(input: &str) -> Result<ResolvedFramework, DocError> {
    match Document::parse(input)? {
        Document::Framework(doc) => doc.resolve(),
        _ => Err(DocError::invalid("kind", "expected a framework document")),
    }
}

/// Transfer operator selection for `cmd_transfer`.
#[derive(Debug, Clone)]
pub enum TransferOp {
    /// Negate the listed vertices on the sphere.
    Invert { set: BTreeSet<usize> },
    /// Point-hyperplane (or bar-joint) framework to the sphere.
    ToSphere,
    /// Sphere to point-hyperplane framework.
    ToPh,
    /// Sign-twist pairing over an index-2 subgroup: `trivial`, `rotations`
    /// or an index into the enumerated subgroups.
    Pair { subgroup: String },
    /// Union with the antipodal image under the extended group.
    DoubleCover,
    /// Orthogonal rotation in a coordinate plane.
    Rotate { plane: (usize, usize), angle: f64 },
    /// Mirror-symmetric plane framework to a half-turn point-line
    /// framework, fixed vertices becoming lines.
    PairFixed,
}

fn pick_subgroup(
    group: &crate::groups::SymmetryGroup,
    selector: &str,
) -> Result<Subgroup, String> {
    let subs = group.index2_subgroups();
    if subs.is_empty() {
        return Err("no index-2 subgroup".into());
    }
    match selector {
        "trivial" => {
            if group.order() == 2 {
                Ok(Subgroup::trivial())
            } else {
                Err("trivial subgroup has index 2 only in groups of order 2".into())
            }
        }
        "rotations" => {
            let members: BTreeSet<usize> = group
                .elements()
                .filter(|&e| group.rep(e).determinant() > 0.0)
                .map(|e| e.0)
                .collect();
            let candidate = Subgroup { members };
            if candidate.order() * 2 == group.order() && candidate.is_subgroup_of(group) {
                Ok(candidate)
            } else {
                Err("rotation elements do not form an index-2 subgroup".into())
            }
        }
        idx => {
            let i: usize = idx.parse().map_err(|_| {
                format!(
                    "subgroup selector must be `trivial`, `rotations` or an index 0..{}",
                    subs.len()
                )
            })?;
            subs.get(i)
                .cloned()
                .ok_or_else(|| format!("subgroup index out of range (have {})", subs.len()))
        }
    }
}

/// `transfer`: applies one operator and emits the resulting framework
/// document. With `check`, both sides are re-analyzed and the operator's
/// preservation contract is asserted (exit 3 on violation).
pub fn cmd_transfer(
    input: &str,
    op: &TransferOp,
    check: bool,
    tol: &TolerancePolicy,
) -> CommandOutput {
    let resolved = match parse_framework(input) {
        Ok(r) => r,
        Err(e) => return bad_input(e),
    };
    let sg = resolved.symmetric.as_ref();
    let ctx = sg.map(|sg| SymmetricContext::new(&sg.group, &sg.action));
    let fw = &resolved.framework;
    // (output framework, group+action to embed, contract description)
    let result: Result<(Framework, Option<(crate::groups::SymmetryGroup, Vec<Vec<usize>>)>), String> =
        match (op, fw) {
            (TransferOp::Invert { set }, Framework::Spherical(f)) => {
                transfer::partial_inversion(f, set, ctx.as_ref())
                    .map(|out| {
                        let sym = sg.map(|sg| (sg.group.clone(), sg.action.clone()));
                        (Framework::Spherical(out), sym)
                    })
                    .map_err(|e| e.to_string())
            }
            (TransferOp::ToSphere, Framework::PointHyperplane(f)) => {
                transfer::project_ph_to_sphere(f, ctx.as_ref())
                    .map(|out| {
                        let sym = sg.map(|sg| (sg.group.augment(), sg.action.clone()));
                        (Framework::Spherical(out), sym)
                    })
                    .map_err(|e| e.to_string())
            }
            (TransferOp::ToSphere, Framework::Euclidean(f)) => {
                transfer::lift_euclidean_to_sphere(f)
                    .map(|out| {
                        let sym = sg.map(|sg| (sg.group.augment(), sg.action.clone()));
                        (Framework::Spherical(out), sym)
                    })
                    .map_err(|e| e.to_string())
            }
            (TransferOp::ToPh, Framework::Spherical(f)) => {
                transfer::project_sphere_to_ph(f, ctx.as_ref())
                    .map(|out| {
                        // the spherical group is the augmented one; the PH
                        // framework keeps the base-dimension block
                        let sym = sg.map(|sg| {
                            (restrict_augmented(&sg.group), sg.action.clone())
                        });
                        (Framework::PointHyperplane(out), sym)
                    })
                    .map_err(|e| e.to_string())
            }
            (TransferOp::Pair { subgroup }, Framework::Spherical(f)) => match (sg, ctx.as_ref()) {
                (Some(sg), Some(ctx)) => pick_subgroup(&sg.group, subgroup).and_then(|h| {
                    transfer::pairing_transform(f, ctx, &h)
                        .map(|(out, twisted)| {
                            (Framework::Spherical(out), Some((twisted, sg.action.clone())))
                        })
                        .map_err(|e| e.to_string())
                }),
                _ => Err("pairing requires an attached group and action".into()),
            },
            (TransferOp::DoubleCover, Framework::Spherical(f)) => match ctx.as_ref() {
                Some(ctx) => transfer::double_cover(f, ctx)
                    .map(|(out, extended, action)| {
                        (Framework::Spherical(out), Some((extended, action)))
                    })
                    .map_err(|e| e.to_string()),
                None => Err("double cover requires an attached group and action".into()),
            },
            (TransferOp::Rotate { plane, angle }, Framework::Spherical(f)) => {
                let q = transfer::plane_rotation(f.ambient(), plane.0, plane.1, *angle);
                transfer::rotate(f, &q, ctx.as_ref())
                    .map(|(out, conj)| {
                        let sym = match (conj, sg) {
                            (Some(g), Some(sg)) => Some((g, sg.action.clone())),
                            _ => None,
                        };
                        (Framework::Spherical(out), sym)
                    })
                    .map_err(|e| e.to_string())
            }
            (TransferOp::PairFixed, _) => match ctx.as_ref() {
                Some(ctx) => transfer::pair_with_fixed(fw, ctx)
                    .map(|(out, c2)| {
                        (
                            Framework::PointHyperplane(out),
                            sg.map(|sg| (c2, sg.action.clone())),
                        )
                    })
                    .map_err(|e| e.to_string()),
                None => Err("the fixed-vertex pairing requires a group and action".into()),
            },
            (op, _) => Err(format!(
                "operator {op:?} does not apply to a {:?} framework",
                fw.space()
            )),
        };
    let (out_fw, out_sym) = match result {
        Ok(pair) => pair,
        Err(e) => return bad_input(e),
    };
    if check {
        if let Err(msg) = check_contract(op, fw, sg, &out_fw, &out_sym, tol) {
            return CommandOutput {
                document: serde_json::json!({
                    "kind": "report",
                    "version": 1,
                    "check": "failed",
                    "detail": msg,
                }),
                exit_code: EXIT_CHECK_FAILED,
            };
        }
    }
    let doc = FrameworkDoc::from_framework(
        &out_fw,
        out_sym.as_ref().map(|(g, _)| g),
        out_sym.as_ref().map(|(_, a)| a.as_slice()),
    );
    ok(serde_json::to_value(Document::Framework(doc)).expect("framework serializes"))
}

/// For spherical documents the stored group acts on `R^{d+1}`; the emitted
/// point-hyperplane document wants the base `d`-dimensional block.
fn restrict_augmented(group: &crate::groups::SymmetryGroup) -> crate::groups::SymmetryGroup {
    let d = group.dim() - 1;
    let reps: Vec<nalgebra::DMatrix<f64>> = group
        .reps()
        .iter()
        .map(|m| m.view((0, 0), (d, d)).into_owned())
        .collect();
    crate::groups::SymmetryGroup::from_elements(d, reps, group.name)
        .expect("augmented groups restrict to their base block")
}

fn check_contract(
    op: &TransferOp,
    before: &Framework,
    sg_before: Option<&crate::symgraph::SymmetricGraph>,
    after: &Framework,
    sym_after: &Option<(crate::groups::SymmetryGroup, Vec<Vec<usize>>)>,
    tol: &TolerancePolicy,
) -> Result<(), String> {
    let report_before = frameworks::analyze(before, tol).map_err(|e| e.to_string())?;
    let report_after = frameworks::analyze(after, tol).map_err(|e| e.to_string())?;
    let forced_before = match sg_before {
        Some(sg) => Some(
            forced::forced_rigidity(before, &sg.group, &sg.action, tol)
                .map_err(|e| e.to_string())?,
        ),
        None => None,
    };
    let forced_after = match sym_after {
        Some((g, a)) => {
            Some(forced::forced_rigidity(after, g, a, tol).map_err(|e| e.to_string())?)
        }
        None => None,
    };
    let full_defect_before = report_before.nullity - report_before.trivial_dim;
    let full_defect_after = report_after.nullity - report_after.trivial_dim;
    let forced_defects = forced_before.as_ref().zip(forced_after.as_ref()).map(
        |(fb, fa)| {
            (
                fb.forced_nullity - fb.trivial_symmetric_dim,
                fa.forced_nullity - fa.trivial_symmetric_dim,
            )
        },
    );
    match op {
        TransferOp::Invert { .. } | TransferOp::Rotate { .. } => {
            if report_before.rank != report_after.rank {
                return Err(format!(
                    "rank changed: {} -> {}",
                    report_before.rank, report_after.rank
                ));
            }
            if let Some((db, da)) = forced_defects {
                if db != da {
                    return Err(format!("forced defect changed: {db} -> {da}"));
                }
            }
        }
        TransferOp::ToSphere | TransferOp::ToPh => {
            if full_defect_before != full_defect_after {
                return Err(format!(
                    "motion defect changed: {full_defect_before} -> {full_defect_after}"
                ));
            }
            if let Some((db, da)) = forced_defects {
                if db != da {
                    return Err(format!("forced defect changed: {db} -> {da}"));
                }
            }
        }
        TransferOp::Pair { .. } => {
            if report_before.rank != report_after.rank {
                return Err(format!(
                    "rank changed: {} -> {}",
                    report_before.rank, report_after.rank
                ));
            }
            if let Some((db, da)) = forced_defects {
                if db != da {
                    return Err(format!("forced defect changed: {db} -> {da}"));
                }
            }
        }
        TransferOp::DoubleCover => {
            let (fb, fa) = forced_before
                .as_ref()
                .zip(forced_after.as_ref())
                .ok_or("double cover check needs symmetry on both sides")?;
            if fb.forced_rigid != fa.forced_rigid {
                return Err(format!(
                    "forced verdict changed: {} -> {}",
                    fb.forced_rigid, fa.forced_rigid
                ));
            }
            if before.graph().is_connected() && report_after.is_inf_rigid {
                return Err("double cover of a connected framework must not be rigid".into());
            }
        }
        TransferOp::PairFixed => {
            if report_before.is_isostatic != report_after.is_isostatic {
                return Err(format!(
                    "isostatic verdict changed: {} -> {}",
                    report_before.is_isostatic, report_after.is_isostatic
                ));
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct GainReport {
    kind: &'static str,
    version: u32,
    k: usize,
    l: usize,
    m: usize,
    sparse: bool,
    tight: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tight_witness: Option<Vec<usize>>,
}

/// `gain`: sparsity/tightness verdict for a gain-graph document, with a
/// violating subset or a spanning tight witness.
pub fn cmd_gain(input: &str, k: usize, l: usize, m: usize, find_tight: bool) -> CommandOutput {
    if k < 1 || m > l || l > 2 * k - 1 {
        return bad_input("need k >= 1 and 0 <= m <= l <= 2k-1");
    }
    let gg = match Document::parse(input) {
        Ok(Document::GainGraph(doc)) => match doc.resolve() {
            Ok(gg) => gg,
            Err(e) => return bad_input(e),
        },
        Ok(_) => return bad_input("expected a gaingraph document"),
        Err(e) => return bad_input(e),
    };
    let params = SparsityParams::new(k, l, m);
    let verdict = symgraph::is_gain_sparse(&gg, params);
    let sparse = verdict.is_sparse();
    let tight = sparse && gg.edge_count() == k * gg.vertex_count - m;
    let violation = match verdict {
        symgraph::SparsityVerdict::Sparse => None,
        symgraph::SparsityVerdict::Violation(v) => Some(v),
    };
    let tight_witness = if find_tight {
        symgraph::has_spanning_gain_tight(&gg, params)
    } else {
        None
    };
    ok(serde_json::to_value(GainReport {
        kind: "report",
        version: 1,
        k,
        l,
        m,
        sparse,
        tight,
        violation,
        tight_witness,
    })
    .expect("gain report serializes"))
}

/// `sample`: draws a symmetric realization of a graph document.
pub fn cmd_sample(
    input: &str,
    space: SpaceKind,
    d: usize,
    x_set: &BTreeSet<usize>,
    seed: u64,
    regular_tries: usize,
) -> CommandOutput {
    let graph_doc = match Document::parse(input) {
        Ok(Document::Graph(doc)) => doc,
        Ok(_) => return bad_input("expected a graph document"),
        Err(e) => return bad_input(e),
    };
    let graph = match crate::symgraph::Graph::new(graph_doc.vertices, &graph_doc.edges) {
        Ok(g) => g,
        Err(e) => return bad_input(e),
    };
    let sg = match (&graph_doc.group, &graph_doc.action) {
        (Some(gspec), Some(aspec)) => {
            let mut group = match gspec.resolve() {
                Ok(g) => g,
                Err(e) => return bad_input(e),
            };
            if space == SpaceKind::Spherical && group.dim() == d {
                group = group.augment();
            }
            match aspec.resolve(&graph, &group) {
                Ok(sg) => sg,
                Err(e) => return bad_input(e),
            }
        }
        (None, None) => {
            let triv = match space {
                SpaceKind::Spherical => {
                    crate::groups::make_schoenflies(d, crate::groups::SchoenfliesLabel::Cn, 1)
                        .expect("trivial group")
                        .augment()
                }
                _ => crate::groups::make_schoenflies(d, crate::groups::SchoenfliesLabel::Cn, 1)
                    .expect("trivial group"),
            };
            crate::symgraph::SymmetricGraph::with_trivial_group(graph.clone(), triv)
        }
        _ => return bad_input("group and action must be given together"),
    };
    let fw = match frameworks::sample_regular(&sg, space, d, x_set, seed, regular_tries) {
        Ok(fw) => fw,
        Err(e) => return bad_input(e),
    };
    let doc = if graph_doc.group.is_some() {
        FrameworkDoc::from_framework(&fw, Some(&sg.group), Some(&sg.action))
    } else {
        FrameworkDoc::from_framework(&fw, None, None)
    };
    ok(serde_json::to_value(Document::Framework(doc)).expect("framework serializes"))
}

/// `verify`: runs one of the named suites and reports pass/fail counts.
pub fn cmd_verify(suite: &str, trials: usize, seed: u64, tol: &TolerancePolicy) -> CommandOutput {
    let report = match suite {
        "inversion" => super::verify::suite_inversion(trials, seed, tol),
        "transfer" => super::verify::suite_transfer(trials, seed, tol),
        "pairing" => super::verify::suite_pairing(trials, seed, tol),
        "combinatorial" => super::verify::suite_combinatorial(seed, tol),
        "doublecover" => super::verify::suite_doublecover(trials, seed, tol),
        "epsilon" => super::verify::suite_epsilon(trials, seed, tol),
        other => return bad_input(format!("unknown suite `{other}`")),
    };
    let exit_code = if report.iter().all(|r| r.ok()) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    CommandOutput {
        document: serde_json::json!({
            "kind": "report",
            "version": 1,
            "suites": report.iter().map(|r| serde_json::json!({
                "name": r.name,
                "trials": r.trials,
                "passes": r.passes,
                "failures": r.failures,
            })).collect::<Vec<_>>(),
        }),
        exit_code,
    }
}
