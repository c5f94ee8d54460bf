//! Finite orthogonal symmetry groups.
//!
//! Groups are stored by explicit element tables (orders here never exceed
//! 48) together with one orthogonal matrix per element, so validation,
//! subgroup enumeration and sign twists stay exhaustive and cheap.
//!
//! Matrix conventions, fixed once so that paired groups can be compared
//! deterministically:
//! - 2D: the mirror of `Cs` is the y-axis (matrix `diag(-1,1)`), rotations
//!   are counterclockwise about the origin.
//! - 3D: the principal rotation axis is z; the `Cs` mirror is the plane
//!   x=0; the secondary 2-fold axis of `Dn` is the x-axis; the `Cnh` and
//!   `S2n` mirror is z=0; the `Dnd` mirror plane contains z and the
//!   in-plane line at angle pi/(2n) from the x-axis, so that reflecting the
//!   secondary axis across it sweeps an angle of pi/n.
//! - `Td` is generated by the improper rotation `S4` about z and the 3-fold
//!   rotation about (1,1,1); `O` by the 4-fold rotation about z and the same
//!   3-fold rotation.

use nalgebra::DMatrix;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Matrix-comparison tolerance used when closing generator sets and looking
/// up elements. Products of a handful of orthogonal matrices stay far below
/// this.
const MATCH_TOL: f64 = 1e-9;

/// Validation tolerance for orthogonality and the homomorphism property.
const VALIDATE_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("unknown Schoenflies label `{0}`")]
    UnknownLabel(String),
    #[error("label {label} is not a symmetry group in dimension {dim}")]
    LabelDimMismatch { label: SchoenfliesLabel, dim: usize },
    #[error("parameter n must be positive")]
    ZeroOrder,
    #[error("generator closure produced {got} elements, expected {expected}")]
    BadClosure { got: usize, expected: usize },
    #[error("subgroup does not have index 2")]
    NotIndex2,
    #[error("representation contains the inversion -I; no pairing exists")]
    ContainsInversion,
    #[error("axis set must be a proper subset of the coordinate axes")]
    InvolutionAxes,
    #[error("group table validation failed: {0}")]
    InvalidTable(String),
}

/// Index into a group's element table; index 0 is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub usize);

/// Schoenflies family names supported by the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SchoenfliesLabel {
    Cs,
    Cn,
    Ci,
    Cnv,
    Cnh,
    S2n,
    Dn,
    Dnh,
    Dnd,
    Td,
    O,
}

impl SchoenfliesLabel {
    pub fn parse(s: &str) -> Result<Self, GroupError> {
        match s {
            "Cs" => Ok(Self::Cs),
            "Cn" => Ok(Self::Cn),
            "Ci" => Ok(Self::Ci),
            "Cnv" => Ok(Self::Cnv),
            "Cnh" => Ok(Self::Cnh),
            "S2n" => Ok(Self::S2n),
            "Dn" => Ok(Self::Dn),
            "Dnh" => Ok(Self::Dnh),
            "Dnd" => Ok(Self::Dnd),
            "Td" => Ok(Self::Td),
            "O" => Ok(Self::O),
            other => Err(GroupError::UnknownLabel(other.to_string())),
        }
    }

    fn uses_n(self) -> bool {
        matches!(
            self,
            Self::Cn | Self::Cnv | Self::Cnh | Self::S2n | Self::Dn | Self::Dnh | Self::Dnd
        )
    }
}

impl fmt::Display for SchoenfliesLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Cs => "Cs",
            Self::Cn => "Cn",
            Self::Ci => "Ci",
            Self::Cnv => "Cnv",
            Self::Cnh => "Cnh",
            Self::S2n => "S2n",
            Self::Dn => "Dn",
            Self::Dnh => "Dnh",
            Self::Dnd => "Dnd",
            Self::Td => "Td",
            Self::O => "O",
        };
        f.write_str(s)
    }
}

/// Catalog name of a group, kept for reporting and serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupName {
    pub label: SchoenfliesLabel,
    pub n: usize,
}

/// A finite subgroup of `O(R^dim)` given by its full element table.
#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    order: usize,
    dim: usize,
    /// mult[g][h] = index of the product g*h.
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
    rep: Vec<DMatrix<f64>>,
    pub name: Option<GroupName>,
}

/// A subset of element ids closed under the parent group's operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub members: BTreeSet<usize>,
}

impl Subgroup {
    pub fn trivial() -> Self {
        Subgroup {
            members: BTreeSet::from([0]),
        }
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        self.members.contains(&g.0)
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// Checks closure under multiplication and inversion in `parent`.
    pub fn is_subgroup_of(&self, parent: &SymmetryGroup) -> bool {
        if !self.members.contains(&0) {
            return false;
        }
        for &g in &self.members {
            if g >= parent.order || !self.members.contains(&parent.inv[g]) {
                return false;
            }
            for &h in &self.members {
                if !self.members.contains(&parent.mult[g][h]) {
                    return false;
                }
            }
        }
        true
    }
}

fn mats_close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
    a.nrows() == b.nrows() && a.ncols() == b.ncols() && (a - b).amax() < tol
}

impl SymmetryGroup {
    /// Builds a group from generator matrices by closure under products.
    /// `expected_order`, when given, guards against transcription errors in
    /// the generator matrices.
    pub fn from_generators(
        dim: usize,
        generators: &[DMatrix<f64>],
        expected_order: Option<usize>,
        name: Option<GroupName>,
    ) -> Result<Self, GroupError> {
        let mut elems: Vec<DMatrix<f64>> = vec![DMatrix::identity(dim, dim)];
        let mut frontier: Vec<DMatrix<f64>> = vec![DMatrix::identity(dim, dim)];
        while let Some(m) = frontier.pop() {
            for g in generators {
                let prod = g * &m;
                if !elems.iter().any(|e| mats_close(e, &prod, MATCH_TOL)) {
                    elems.push(prod.clone());
                    frontier.push(prod);
                }
                if elems.len() > 200 {
                    return Err(GroupError::BadClosure {
                        got: elems.len(),
                        expected: expected_order.unwrap_or(0),
                    });
                }
            }
        }
        if let Some(expected) = expected_order {
            if elems.len() != expected {
                return Err(GroupError::BadClosure {
                    got: elems.len(),
                    expected,
                });
            }
        }
        Self::from_elements(dim, elems, name)
    }

    /// Builds the table from a complete list of element matrices. The
    /// identity must be at index 0.
    pub fn from_elements(
        dim: usize,
        rep: Vec<DMatrix<f64>>,
        name: Option<GroupName>,
    ) -> Result<Self, GroupError> {
        let order = rep.len();
        if order == 0 || !mats_close(&rep[0], &DMatrix::identity(dim, dim), MATCH_TOL) {
            return Err(GroupError::InvalidTable(
                "element 0 must be the identity".into(),
            ));
        }
        let lookup = |m: &DMatrix<f64>| -> Result<usize, GroupError> {
            rep.iter()
                .position(|e| mats_close(e, m, MATCH_TOL))
                .ok_or_else(|| GroupError::InvalidTable("product escaped the element set".into()))
        };
        let mut mult = vec![vec![0usize; order]; order];
        for g in 0..order {
            for h in 0..order {
                mult[g][h] = lookup(&(&rep[g] * &rep[h]))?;
            }
        }
        let mut inv = vec![0usize; order];
        for g in 0..order {
            inv[g] = lookup(&rep[g].transpose())?;
        }
        let group = SymmetryGroup {
            order,
            dim,
            mult,
            inv,
            rep,
            name,
        };
        group.validate()?;
        Ok(group)
    }

    /// Exhaustive table and representation checks: associativity, identity,
    /// two-sided inverses, orthogonality of every matrix, and the
    /// homomorphism property entrywise.
    pub fn validate(&self) -> Result<(), GroupError> {
        let n = self.order;
        for g in 0..n {
            if self.mult[0][g] != g || self.mult[g][0] != g {
                return Err(GroupError::InvalidTable("identity law fails".into()));
            }
            if self.mult[g][self.inv[g]] != 0 || self.mult[self.inv[g]][g] != 0 {
                return Err(GroupError::InvalidTable("inverse law fails".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mult[self.mult[a][b]][c] != self.mult[a][self.mult[b][c]] {
                        return Err(GroupError::InvalidTable("associativity fails".into()));
                    }
                }
            }
        }
        let id = DMatrix::identity(self.dim, self.dim);
        for m in &self.rep {
            if (m.transpose() * m - &id).amax() >= VALIDATE_TOL {
                return Err(GroupError::InvalidTable("matrix not orthogonal".into()));
            }
        }
        for g in 0..n {
            for h in 0..n {
                let prod = &self.rep[g] * &self.rep[h];
                if (&prod - &self.rep[self.mult[g][h]]).amax() >= VALIDATE_TOL {
                    return Err(GroupError::InvalidTable(
                        "representation is not a homomorphism".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(0)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> {
        (0..self.order).map(GroupElement)
    }

    pub fn compose(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        GroupElement(self.mult[g.0][h.0])
    }

    pub fn inverse(&self, g: GroupElement) -> GroupElement {
        GroupElement(self.inv[g.0])
    }

    pub fn rep(&self, g: GroupElement) -> &DMatrix<f64> {
        &self.rep[g.0]
    }

    pub fn reps(&self) -> &[DMatrix<f64>] {
        &self.rep
    }

    /// Element whose matrix matches `m`, if any.
    pub fn find_matrix(&self, m: &DMatrix<f64>) -> Option<GroupElement> {
        self.rep
            .iter()
            .position(|e| mats_close(e, m, MATCH_TOL))
            .map(GroupElement)
    }

    /// True if the matrix set contains `-I`.
    pub fn contains_minus_identity(&self) -> bool {
        let minus = -DMatrix::<f64>::identity(self.dim, self.dim);
        self.rep.iter().any(|m| mats_close(m, &minus, MATCH_TOL))
    }

    /// Block-diagonal extension by one dimension: each matrix gains a
    /// trailing row and column of (0,..,0,1). The abstract group is
    /// unchanged.
    pub fn augment(&self) -> SymmetryGroup {
        let d = self.dim + 1;
        let rep = self
            .rep
            .iter()
            .map(|m| {
                let mut a = DMatrix::identity(d, d);
                a.view_mut((0, 0), (self.dim, self.dim)).copy_from(m);
                a
            })
            .collect();
        SymmetryGroup {
            order: self.order,
            dim: d,
            mult: self.mult.clone(),
            inv: self.inv.clone(),
            rep,
            name: self.name,
        }
    }

    /// Exhaustive list of subgroups of index exactly 2, found by closing
    /// candidate generator sets; an index-2 subgroup is normal and is the
    /// kernel of a sign character, so it is determined by which elements it
    /// contains.
    pub fn index2_subgroups(&self) -> Vec<Subgroup> {
        if self.order % 2 != 0 {
            return Vec::new();
        }
        let half = self.order / 2;
        let mut found: Vec<Subgroup> = Vec::new();
        // Enumerate sign characters chi: G -> {+1,-1} instead of subsets:
        // chi is determined by its values on a generating set, and the
        // kernel must have exactly half the elements. Try all assignments
        // over a small generating set.
        let gens = self.generating_set();
        let k = gens.len();
        for mask in 1..(1u32 << k) {
            let mut sign = vec![0i8; self.order]; // 0 = unknown
            sign[0] = 1;
            let mut stack = vec![0usize];
            let mut assigned: Vec<(usize, i8)> = vec![(0, 1)];
            let mut ok = true;
            while let Some(g) = stack.pop() {
                for (gi, &gen) in gens.iter().enumerate() {
                    let s_gen: i8 = if mask & (1 << gi) != 0 { -1 } else { 1 };
                    let prod = self.mult[gen.0][g];
                    let s = s_gen * sign[g];
                    if sign[prod] == 0 {
                        sign[prod] = s;
                        assigned.push((prod, s));
                        stack.push(prod);
                    } else if sign[prod] != s {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    break;
                }
            }
            if !ok || assigned.len() != self.order {
                continue;
            }
            let members: BTreeSet<usize> = (0..self.order).filter(|&g| sign[g] == 1).collect();
            if members.len() != half {
                continue;
            }
            let sub = Subgroup { members };
            if sub.is_subgroup_of(self) && !found.contains(&sub) {
                found.push(sub);
            }
        }
        found.sort_by(|a, b| a.members.cmp(&b.members));
        found
    }

    /// A small generating set found greedily.
    fn generating_set(&self) -> Vec<GroupElement> {
        let mut gens: Vec<GroupElement> = Vec::new();
        let mut generated: BTreeSet<usize> = BTreeSet::from([0]);
        for g in 1..self.order {
            if generated.contains(&g) {
                continue;
            }
            gens.push(GroupElement(g));
            // close
            let mut frontier: Vec<usize> = generated.iter().cloned().collect();
            while let Some(x) = frontier.pop() {
                for gen in &gens {
                    let y = self.mult[gen.0][x];
                    if generated.insert(y) {
                        frontier.push(y);
                    }
                }
            }
            if generated.len() == self.order {
                break;
            }
        }
        gens
    }

    /// Sign-twisted representation over an index-2 subgroup: elements of the
    /// subgroup keep their matrix, all others are negated. The twist is a
    /// homomorphism because the sign is the subgroup's quotient character.
    /// Rejected when the matrix set contains `-I`, since the twist would
    /// then collapse distinct elements onto the same matrix and the
    /// underlying abstract group would not be preserved.
    pub fn pair_representation(&self, h: &Subgroup) -> Result<SymmetryGroup, GroupError> {
        if h.order() * 2 != self.order || !h.is_subgroup_of(self) {
            return Err(GroupError::NotIndex2);
        }
        if self.contains_minus_identity() {
            return Err(GroupError::ContainsInversion);
        }
        let rep = self
            .rep
            .iter()
            .enumerate()
            .map(|(g, m)| if h.members.contains(&g) { m.clone() } else { -m })
            .collect();
        let twisted = SymmetryGroup {
            order: self.order,
            dim: self.dim,
            mult: self.mult.clone(),
            inv: self.inv.clone(),
            rep,
            name: None,
        };
        twisted.validate()?;
        Ok(twisted)
    }

    /// True when both groups consist of the same matrices (as sets).
    pub fn same_matrix_set(&self, other: &SymmetryGroup, tol: f64) -> bool {
        self.dim == other.dim
            && self.order == other.order
            && self
                .rep
                .iter()
                .all(|m| other.rep.iter().any(|o| mats_close(m, o, tol)))
    }

    /// Conjugate every matrix by the orthogonal matrix `q`.
    pub fn conjugated(&self, q: &DMatrix<f64>) -> SymmetryGroup {
        let qt = q.transpose();
        let rep = self.rep.iter().map(|m| q * m * &qt).collect();
        SymmetryGroup {
            order: self.order,
            dim: self.dim,
            mult: self.mult.clone(),
            inv: self.inv.clone(),
            rep,
            name: self.name,
        }
    }
}

fn rot2(theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

fn mirror2() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0])
}

fn rot_z(theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0])
}

fn mirror_x0() -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[-1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0])
}

fn sigma_h() -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0])
}

fn c2_x() -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0])
}

/// Reflection in the vertical plane containing the z-axis and the in-plane
/// line at angle `alpha` from the x-axis.
fn sigma_v(alpha: f64) -> DMatrix<f64> {
    let (s, c) = (2.0 * alpha).sin_cos();
    DMatrix::from_row_slice(3, 3, &[c, s, 0.0, s, -c, 0.0, 0.0, 0.0, 1.0])
}

fn c3_111() -> DMatrix<f64> {
    // x -> y -> z -> x: rotation by 2*pi/3 about (1,1,1).
    DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0])
}

/// Constructs a catalog group with the conventions documented at module
/// level. `n` is ignored by labels without a parameter.
pub fn make_schoenflies(
    dim: usize,
    label: SchoenfliesLabel,
    n: usize,
) -> Result<SymmetryGroup, GroupError> {
    use SchoenfliesLabel::*;
    if label.uses_n() && n == 0 {
        return Err(GroupError::ZeroOrder);
    }
    let name = Some(GroupName { label, n });
    match (dim, label) {
        (2, Cs) => SymmetryGroup::from_generators(2, &[mirror2()], Some(2), name),
        (2, Cn) => {
            let theta = 2.0 * std::f64::consts::PI / n as f64;
            SymmetryGroup::from_generators(2, &[rot2(theta)], Some(n), name)
        }
        (2, Cnv) => {
            let theta = 2.0 * std::f64::consts::PI / n as f64;
            SymmetryGroup::from_generators(2, &[rot2(theta), mirror2()], Some(2 * n), name)
        }
        (3, Cs) => SymmetryGroup::from_generators(3, &[mirror_x0()], Some(2), name),
        (3, Ci) => {
            SymmetryGroup::from_generators(3, &[-DMatrix::<f64>::identity(3, 3)], Some(2), name)
        }
        (3, Cn) => {
            let theta = 2.0 * std::f64::consts::PI / n as f64;
            SymmetryGroup::from_generators(3, &[rot_z(theta)], Some(n), name)
        }
        (3, Cnv) => {
            let theta = 2.0 * std::f64::consts::PI / n as f64;
            SymmetryGroup::from_generators(3, &[rot_z(theta), mirror_x0()], Some(2 * n), name)
        }
        (3, Cnh) => {
            let theta = 2.0 * std::f64::consts::PI / n as f64;
            SymmetryGroup::from_generators(3, &[rot_z(theta), sigma_h()], Some(2 * n), name)
        }
        (3, S2n) => {
            let s = rot_z(std::f64::consts::PI / n as f64) * sigma_h();
            SymmetryGroup::from_generators(3, &[s], Some(2 * n), name)
        }
        (3, Dn) => {
            let theta = 2.0 * std::f64::consts::PI / n as f64;
            SymmetryGroup::from_generators(3, &[rot_z(theta), c2_x()], Some(2 * n), name)
        }
        (3, Dnh) => {
            let theta = 2.0 * std::f64::consts::PI / n as f64;
            SymmetryGroup::from_generators(
                3,
                &[rot_z(theta), c2_x(), sigma_h()],
                Some(4 * n),
                name,
            )
        }
        (3, Dnd) => {
            let theta = 2.0 * std::f64::consts::PI / n as f64;
            let sd = sigma_v(std::f64::consts::PI / (2 * n) as f64);
            SymmetryGroup::from_generators(3, &[rot_z(theta), c2_x(), sd], Some(4 * n), name)
        }
        (3, Td) => {
            let s4 = rot_z(std::f64::consts::FRAC_PI_2) * sigma_h();
            SymmetryGroup::from_generators(3, &[s4, c3_111()], Some(24), name)
        }
        (3, O) => {
            let c4 = rot_z(std::f64::consts::FRAC_PI_2);
            SymmetryGroup::from_generators(3, &[c4, c3_111()], Some(24), name)
        }
        _ => Err(GroupError::LabelDimMismatch { label, dim }),
    }
}

/// Order-2 group generated by the inversion in the coordinate subspace
/// spanned by `plus_axes` (0-based): the matrix is diagonal with `+1`
/// exactly on those axes. `plus_axes` must be a proper subset of the axes.
pub fn involution_group(d: usize, plus_axes: &BTreeSet<usize>) -> Result<SymmetryGroup, GroupError> {
    if plus_axes.len() >= d || plus_axes.iter().any(|&a| a >= d) {
        return Err(GroupError::InvolutionAxes);
    }
    let mut m = DMatrix::identity(d, d);
    for i in 0..d {
        if !plus_axes.contains(&i) {
            m[(i, i)] = -1.0;
        }
    }
    SymmetryGroup::from_generators(d, &[m], Some(2), None)
}
