//! Unions of hypercube faces and the facial formulas describing them.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::Rational;

/// `X_var = value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarConstraint {
    pub var: usize,
    pub value: bool,
}

impl fmt::Display for VarConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}={}", self.var + 1, u8::from(self.value))
    }
}

/// A face of `[0,1]^n`: the constrained coordinates, sorted by variable.
pub type Face = Vec<VarConstraint>;

/// Union of faces of the `n`-cube.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypercubeFaceUnion {
    pub dimension: usize,
    pub faces: Vec<Face>,
}

impl HypercubeFaceUnion {
    /// Validates and sorts each face's constraints.
    pub fn new(dimension: usize, faces: Vec<Face>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if faces.is_empty() {
            return Err(Error::EmptyFaceUnion);
        }
        let mut out = Vec::with_capacity(faces.len());
        for mut face in faces {
            face.sort();
            for w in face.windows(2) {
                if w[0].var == w[1].var {
                    return Err(Error::InvalidParameter(format!("face constrains X{} twice", w[0].var + 1)));
                }
            }
            if let Some(c) = face.iter().find(|c| c.var >= dimension) {
                return Err(Error::InvalidParameter(format!("X{} exceeds dimension {dimension}", c.var + 1)));
            }
            out.push(face);
        }
        Ok(HypercubeFaceUnion { dimension, faces: out })
    }

    /// Convenience constructor from `(var, value)` lists, variables 0-based.
    pub fn from_lists(dimension: usize, faces: &[&[(usize, u8)]]) -> Result<Self> {
        let faces = faces
            .iter()
            .map(|f| f.iter().map(|&(var, v)| VarConstraint { var, value: v != 0 }).collect())
            .collect();
        Self::new(dimension, faces)
    }

    /// The maximal faces: drop duplicates and every face whose constraint
    /// set contains another face's.
    pub fn normalized(&self) -> Vec<Face> {
        let mut faces = self.faces.clone();
        faces.sort();
        faces.dedup();
        let subset = |a: &Face, b: &Face| a.iter().all(|c| b.contains(c));
        let keep: Vec<Face> = faces
            .iter()
            .enumerate()
            .filter(|(i, f)| !faces.iter().enumerate().any(|(j, g)| j != *i && g.len() < f.len() && subset(g, f)))
            .map(|(_, f)| f.clone())
            .collect();
        keep
    }

    /// Whether `p` lies on some face. Coordinates outside `[0,1]` never do.
    pub fn contains(&self, p: &[Rational]) -> bool {
        p.len() == self.dimension
            && p.iter().all(|x| *x >= Rational::zero() && *x <= Rational::one())
            && self.faces.iter().any(|f| face_contains(f, p))
    }

    /// A face closest to `p` in the max norm, with that distance.
    pub fn nearest_face(&self, p: &[Rational]) -> (Face, Rational) {
        let mut best: Option<(Face, Rational)> = None;
        for f in &self.faces {
            let d = f
                .iter()
                .map(|c| {
                    let target = if c.value { Rational::one() } else { Rational::zero() };
                    let x = p.get(c.var).cloned().unwrap_or_else(Rational::zero);
                    if x > target {
                        x - target
                    } else {
                        target - x
                    }
                })
                .max()
                .unwrap_or_else(Rational::zero);
            if best.as_ref().is_none_or(|(_, b)| d < *b) {
                best = Some((f.clone(), d));
            }
        }
        best.expect("unions are non-empty")
    }
}

pub(crate) fn face_contains(face: &Face, p: &[Rational]) -> bool {
    face.iter().all(|c| {
        let x = &p[c.var];
        if c.value {
            x.is_one()
        } else {
            x.is_zero()
        }
    })
}

pub fn face_to_string(face: &Face) -> String {
    if face.is_empty() {
        return "true".into();
    }
    let parts: Vec<String> = face.iter().map(|c| format!("{c}")).collect();
    parts.join(" & ")
}

/// `C_1 or ... or C_m`, each `C_i` a conjunction of constraints on
/// distinct variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacialFormula {
    pub n: usize,
    pub conjunctions: Vec<Face>,
}

impl FacialFormula {
    /// True when some conjunction is empty, so every point satisfies it.
    pub fn is_tautology(&self) -> bool {
        self.conjunctions.iter().any(|c| c.is_empty())
    }

    pub fn eval(&self, p: &[Rational]) -> bool {
        self.conjunctions.iter().any(|c| face_contains(c, p))
    }
}

impl fmt::Display for FacialFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.conjunctions.iter().map(|c| format!("({})", face_to_string(c))).collect();
        write!(f, "{}", parts.join(" | "))
    }
}

/// One conjunction per maximal face, ordered by number of constraints and
/// then lexicographically by `(variable, value)`.
pub fn formula_from_faces(u: &HypercubeFaceUnion) -> Result<FacialFormula> {
    if u.faces.is_empty() {
        return Err(Error::EmptyFaceUnion);
    }
    let mut conjunctions = u.normalized();
    conjunctions.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(FacialFormula { n: u.dimension, conjunctions })
}

/// `(X_var = value) or S_satisfier`, satisfiers 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoClause {
    pub constraint: VarConstraint,
    pub satisfier: usize,
}

/// `E_1 and ... and E_m and (not S_1 or ... or not S_m)`; the last clause is
/// implicit in `satisfier_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewrittenFormula {
    pub n: usize,
    pub two_clauses: Vec<TwoClause>,
    pub satisfier_count: usize,
}

impl RewrittenFormula {
    pub fn g(&self) -> usize {
        self.two_clauses.len()
    }

    /// Clauses of `E_j`.
    pub fn group(&self, j: usize) -> impl Iterator<Item = &TwoClause> + '_ {
        self.two_clauses.iter().filter(move |c| c.satisfier == j)
    }

    /// Evaluate with real coordinates `x` and satisfier values `s`.
    pub fn eval(&self, x: &[Rational], s: &[bool]) -> bool {
        let clauses = self.two_clauses.iter().all(|c| {
            let target = if c.constraint.value { Rational::one() } else { Rational::zero() };
            x[c.constraint.var] == target || s[c.satisfier]
        });
        clauses && s.iter().any(|v| !v)
    }
}

impl fmt::Display for RewrittenFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .two_clauses
            .iter()
            .map(|c| format!("({} | S{})", c.constraint, c.satisfier + 1))
            .collect();
        let last: Vec<String> = (0..self.satisfier_count).map(|j| format!("!S{}", j + 1)).collect();
        parts.push(format!("({})", last.join(" | ")));
        write!(f, "{}", parts.join(" & "))
    }
}

pub fn rewrite_with_satisfiers(phi: &FacialFormula) -> RewrittenFormula {
    let mut two_clauses = Vec::new();
    for (j, c) in phi.conjunctions.iter().enumerate() {
        for &constraint in c {
            two_clauses.push(TwoClause { constraint, satisfier: j });
        }
    }
    RewrittenFormula { n: phi.n, two_clauses, satisfier_count: phi.conjunctions.len() }
}

/// Parse faces written like `X1=0; X2=1 & X3=0` (1-based variables,
/// `*` or an empty face for the whole cube).
pub fn parse_faces(dimension: usize, text: &str) -> Result<HypercubeFaceUnion> {
    let mut faces = Vec::new();
    for part in text.split([';', '|', '\n']) {
        let part = part.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if part.is_empty() {
            continue;
        }
        let mut face = Vec::new();
        if part != "*" && part != "true" {
            for atom in part.split(['&', ',']) {
                let atom = atom.trim();
                let bad = || Error::InvalidParameter(format!("cannot parse constraint {atom:?}"));
                let (lhs, rhs) = atom.split_once('=').ok_or_else(bad)?;
                let var: usize = lhs.trim().trim_start_matches(['X', 'x']).parse().map_err(|_| bad())?;
                let value = match rhs.trim() {
                    "0" => false,
                    "1" => true,
                    _ => return Err(bad()),
                };
                if var == 0 {
                    return Err(bad());
                }
                face.push(VarConstraint { var: var - 1, value });
            }
        }
        faces.push(face);
    }
    HypercubeFaceUnion::new(dimension, faces)
}
