//! JSON document schemas and their resolution into library objects.

use crate::frameworks::{
    EuclideanFramework, Framework, PhVertex, PointHyperplaneFramework, SpaceKind,
    SphericalFramework,
};
use crate::groups::{GroupElement, SchoenfliesLabel, SymmetryGroup};
use crate::symgraph::{make_symmetric_graph, GainGraph, Graph, SymmetricGraph};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl DocError {
    pub fn invalid(path: &str, message: impl Into<String>) -> Self {
        DocError::Invalid {
            path: path.to_string(),
            message: message.into(),
        }
    }
}

/// A real number that deserializes from a JSON number or a decimal string.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct FloatLike(pub f64);

impl<'de> Deserialize<'de> for FloatLike {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = FloatLike;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a decimal string")
            }
            fn visit_f64<E>(self, v: f64) -> Result<FloatLike, E> {
                Ok(FloatLike(v))
            }
            fn visit_i64<E>(self, v: i64) -> Result<FloatLike, E> {
                Ok(FloatLike(v as f64))
            }
            fn visit_u64<E>(self, v: u64) -> Result<FloatLike, E> {
                Ok(FloatLike(v as f64))
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<FloatLike, E> {
                if let Some((num, den)) = v.split_once('/') {
                    let n: f64 = num.trim().parse().map_err(E::custom)?;
                    let d: f64 = den.trim().parse().map_err(E::custom)?;
                    return Ok(FloatLike(n / d));
                }
                v.trim().parse().map(FloatLike).map_err(E::custom)
            }
        }
        deserializer.deserialize_any(V)
    }
}

fn floats(v: &[FloatLike]) -> Vec<f64> {
    v.iter().map(|x| x.0).collect()
}

/// Vertex index used as a JSON object key (always a string on the wire).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Key(pub usize);

impl Serialize for Key {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Key {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = Key;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a vertex index")
            }
            fn visit_u64<E>(self, v: u64) -> Result<Key, E> {
                Ok(Key(v as usize))
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Key, E> {
                v.parse().map(Key).map_err(E::custom)
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// Group reference: a catalog name or explicit matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Catalog {
        label: String,
        #[serde(default = "one")]
        n: usize,
        dim: usize,
    },
    Matrices {
        dim: usize,
        matrices: Vec<Vec<Vec<FloatLike>>>,
    },
}

fn one() -> usize {
    1
}

impl GroupSpec {
    pub fn resolve(&self) -> Result<SymmetryGroup, DocError> {
        match self {
            GroupSpec::Catalog { label, n, dim } => {
                let label = SchoenfliesLabel::parse(label)
                    .map_err(|e| DocError::invalid("group.label", e.to_string()))?;
                crate::groups::make_schoenflies(*dim, label, *n)
                    .map_err(|e| DocError::invalid("group", e.to_string()))
            }
            GroupSpec::Matrices { dim, matrices } => {
                let mut reps: Vec<DMatrix<f64>> = Vec::with_capacity(matrices.len());
                for (i, rows) in matrices.iter().enumerate() {
                    if rows.len() != *dim || rows.iter().any(|r| r.len() != *dim) {
                        return Err(DocError::invalid(
                            &format!("group.matrices[{i}]"),
                            format!("expected a {dim}x{dim} matrix"),
                        ));
                    }
                    let flat: Vec<f64> = rows.iter().flat_map(|r| floats(r)).collect();
                    reps.push(DMatrix::from_row_slice(*dim, *dim, &flat));
                }
                // put the identity first if it is not already
                let id = DMatrix::<f64>::identity(*dim, *dim);
                if let Some(pos) = reps.iter().position(|m| (m - &id).amax() < 1e-9) {
                    reps.swap(0, pos);
                } else {
                    return Err(DocError::invalid(
                        "group.matrices",
                        "the identity matrix is missing",
                    ));
                }
                SymmetryGroup::from_elements(*dim, reps, None)
                    .map_err(|e| DocError::invalid("group.matrices", e.to_string()))
            }
        }
    }

    pub fn from_group(group: &SymmetryGroup) -> GroupSpec {
        match group.name {
            Some(name) => GroupSpec::Catalog {
                label: name.label.to_string(),
                n: name.n,
                dim: group.dim(),
            },
            None => GroupSpec::Matrices {
                dim: group.dim(),
                matrices: group
                    .reps()
                    .iter()
                    .map(|m| {
                        (0..m.nrows())
                            .map(|r| (0..m.ncols()).map(|c| FloatLike(m[(r, c)])).collect())
                            .collect()
                    })
                    .collect(),
            },
        }
    }
}

/// Group action given by generator permutations, keyed by element id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionSpec {
    pub generators: BTreeMap<Key, Vec<usize>>,
}

impl ActionSpec {
    pub fn resolve(
        &self,
        graph: &Graph,
        group: &SymmetryGroup,
    ) -> Result<SymmetricGraph, DocError> {
        let gens: Vec<(GroupElement, Vec<usize>)> = self
            .generators
            .iter()
            .map(|(&id, perm)| (GroupElement(id.0), perm.clone()))
            .collect();
        make_symmetric_graph(graph.clone(), group.clone(), &gens)
            .map_err(|e| DocError::invalid("action", e.to_string()))
    }

    pub fn from_symmetric_graph(sg: &SymmetricGraph) -> ActionSpec {
        ActionSpec {
            generators: (0..sg.group.order())
                .map(|g| (Key(g), sg.action[g].clone()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineSpec {
    pub a: Vec<FloatLike>,
    #[serde(default)]
    pub r: Option<FloatLike>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameworkDoc {
    pub version: u32,
    pub space: SpaceKind,
    pub d: usize,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, rename = "X", skip_serializing_if = "Vec::is_empty")]
    pub x: Vec<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub coords: BTreeMap<Key, Vec<FloatLike>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lines: BTreeMap<Key, LineSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub version: u32,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainGraphDoc {
    pub version: u32,
    pub vertices: usize,
    /// (tail, head, gain element id)
    pub edges: Vec<(usize, usize, usize)>,
    pub group: GroupSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub version: u32,
    #[serde(flatten)]
    pub spec: GroupSpec,
}

/// Any input/output document, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Group(GroupDoc),
    Graph(GraphDoc),
    #[serde(rename = "gaingraph")]
    GainGraph(GainGraphDoc),
    Framework(FrameworkDoc),
    Report(serde_json::Value),
}

impl Document {
    pub fn parse(text: &str) -> Result<Document, DocError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn print(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

/// A framework together with its optional symmetry data.
pub struct ResolvedFramework {
    pub framework: Framework,
    pub symmetric: Option<SymmetricGraph>,
}

impl GainGraphDoc {
    pub fn resolve(&self) -> Result<GainGraph, DocError> {
        let group = self.group.resolve()?;
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, &(t, h, gid)) in self.edges.iter().enumerate() {
            if t >= self.vertices || h >= self.vertices {
                return Err(DocError::invalid(
                    &format!("edges[{i}]"),
                    "vertex out of range",
                ));
            }
            if gid >= group.order() {
                return Err(DocError::invalid(
                    &format!("edges[{i}]"),
                    "gain element out of range",
                ));
            }
            if t == h && gid == 0 {
                return Err(DocError::invalid(
                    &format!("edges[{i}]"),
                    "loop gains must be non-identity",
                ));
            }
            edges.push((t, h, GroupElement(gid)));
        }
        Ok(GainGraph::new(self.vertices, edges, group))
    }

    pub fn from_gain_graph(gg: &GainGraph) -> GainGraphDoc {
        GainGraphDoc {
            version: 1,
            vertices: gg.vertex_count,
            edges: gg.edges.iter().map(|&(t, h, g)| (t, h, g.0)).collect(),
            group: GroupSpec::from_group(&gg.group),
        }
    }
}

impl FrameworkDoc {
    /// Builds the framework and, when a group is present, the validated
    /// symmetric graph. Spherical documents may carry the base group of
    /// dimension `d`; it is augmented automatically.
    pub fn resolve(&self) -> Result<ResolvedFramework, DocError> {
        let graph = Graph::new(self.vertices, &self.edges)
            .map_err(|e| DocError::invalid("edges", e.to_string()))?;
        let get_coords = |v: usize, len: usize| -> Result<DVector<f64>, DocError> {
            let c = self
                .coords
                .get(&Key(v))
                .ok_or_else(|| DocError::invalid(&format!("coords.{v}"), "missing"))?;
            if c.len() != len {
                return Err(DocError::invalid(
                    &format!("coords.{v}"),
                    format!("expected {len} coordinates"),
                ));
            }
            Ok(DVector::from_vec(floats(c)))
        };
        let framework = match self.space {
            SpaceKind::Euclidean => {
                let points = (0..self.vertices)
                    .map(|v| get_coords(v, self.d))
                    .collect::<Result<Vec<_>, _>>()?;
                Framework::Euclidean(
                    EuclideanFramework::new(graph.clone(), self.d, points)
                        .map_err(|e| DocError::invalid("coords", e.to_string()))?,
                )
            }
            SpaceKind::Spherical => {
                let points = (0..self.vertices)
                    .map(|v| get_coords(v, self.d + 1))
                    .collect::<Result<Vec<_>, _>>()?;
                let fw = SphericalFramework::new(graph.clone(), self.d, points)
                    .map_err(|e| DocError::invalid("coords", e.to_string()))?;
                let declared: std::collections::BTreeSet<usize> =
                    self.x.iter().cloned().collect();
                if fw.equator != declared {
                    return Err(DocError::invalid(
                        "X",
                        format!(
                            "equator classification {:?} does not match X {:?}",
                            fw.equator, declared
                        ),
                    ));
                }
                Framework::Spherical(fw)
            }
            SpaceKind::Ph => {
                let mut vertices = Vec::with_capacity(self.vertices);
                for v in 0..self.vertices {
                    if let Some(line) = self.lines.get(&Key(v)) {
                        if line.a.len() != self.d {
                            return Err(DocError::invalid(
                                &format!("lines.{v}"),
                                format!("expected {} normal coordinates", self.d),
                            ));
                        }
                        vertices.push(PhVertex::Hyperplane {
                            normal: DVector::from_vec(floats(&line.a)),
                            offset: line.r.map(|r| r.0).unwrap_or(0.0),
                        });
                    } else {
                        vertices.push(PhVertex::Point(get_coords(v, self.d)?));
                    }
                }
                if !self.x.is_empty() {
                    let declared: std::collections::BTreeSet<usize> =
                        self.x.iter().cloned().collect();
                    let actual: std::collections::BTreeSet<usize> =
                        self.lines.keys().map(|k| k.0).collect();
                    if declared != actual {
                        return Err(DocError::invalid("X", "X must equal the line vertex set"));
                    }
                }
                Framework::PointHyperplane(
                    PointHyperplaneFramework::new(graph.clone(), self.d, vertices)
                        .map_err(|e| DocError::invalid("lines", e.to_string()))?,
                )
            }
        };
        let symmetric = match (&self.group, &self.action) {
            (Some(gspec), Some(aspec)) => {
                let mut group = gspec.resolve()?;
                if self.space == SpaceKind::Spherical && group.dim() == self.d {
                    group = group.augment();
                }
                let expected_dim = match self.space {
                    SpaceKind::Spherical => self.d + 1,
                    _ => self.d,
                };
                if group.dim() != expected_dim {
                    return Err(DocError::invalid(
                        "group.dim",
                        format!("expected dimension {expected_dim}"),
                    ));
                }
                let sg = aspec.resolve(&graph, &group)?;
                if !crate::frameworks::validate_symmetric(&framework, &sg.group, &sg.action) {
                    return Err(DocError::invalid(
                        "coords",
                        "framework is not symmetric under the declared action",
                    ));
                }
                Some(sg)
            }
            (None, None) => None,
            _ => {
                return Err(DocError::invalid(
                    "group/action",
                    "group and action must be given together",
                ))
            }
        };
        Ok(ResolvedFramework {
            framework,
            symmetric,
        })
    }

    /// Document for a framework, carrying the symmetry data through.
    pub fn from_framework(
        fw: &Framework,
        group: Option<&SymmetryGroup>,
        action: Option<&[Vec<usize>]>,
    ) -> FrameworkDoc {
        let graph = fw.graph();
        let mut doc = FrameworkDoc {
            version: 1,
            space: fw.space(),
            d: 0,
            vertices: graph.vertex_count(),
            edges: graph.edges().to_vec(),
            x: Vec::new(),
            coords: BTreeMap::new(),
            lines: BTreeMap::new(),
            group: group.map(GroupSpec::from_group),
            action: action.map(|a| ActionSpec {
                generators: a.iter().enumerate().map(|(g, p)| (Key(g), p.clone())).collect(),
            }),
        };
        match fw {
            Framework::Euclidean(f) => {
                doc.d = f.d;
                for (v, p) in f.points.iter().enumerate() {
                    doc.coords.insert(Key(v), p.iter().map(|&x| FloatLike(x)).collect());
                }
            }
            Framework::Spherical(f) => {
                doc.d = f.d;
                doc.x = f.equator.iter().cloned().collect();
                for (v, p) in f.points.iter().enumerate() {
                    doc.coords.insert(Key(v), p.iter().map(|&x| FloatLike(x)).collect());
                }
            }
            Framework::PointHyperplane(f) => {
                doc.d = f.d;
                for (v, payload) in f.vertices.iter().enumerate() {
                    match payload {
                        PhVertex::Point(p) => {
                            doc.coords
                                .insert(Key(v), p.iter().map(|&x| FloatLike(x)).collect());
                        }
                        PhVertex::Hyperplane { normal, offset } => {
                            doc.x.push(v);
                            doc.lines.insert(
                                Key(v),
                                LineSpec {
                                    a: normal.iter().map(|&x| FloatLike(x)).collect(),
                                    r: Some(FloatLike(*offset)),
                                },
                            );
                        }
                    }
                }
            }
        }
        doc
    }
}
