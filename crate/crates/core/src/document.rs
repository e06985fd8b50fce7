//! JSON documents for models. Rational entries are written as integers when
//! integral and as `"p/q"` strings otherwise.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::corpus;
use crate::error::{Error, Result};
use crate::linalg::{self, Q, QVec};
use crate::localization::{Edge, FixedPoint, FixedPointModel};
use crate::root_lattice::WeightLattice;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    pub fn from_q(x: &Q) -> Self {
        match (x.is_integer(), x.to_integer().to_i64()) {
            (true, Some(n)) => Num::Int(n),
            _ => Num::Str(linalg::fmt_q(x)),
        }
    }

    pub fn to_q(&self) -> Result<Q> {
        match self {
            Num::Int(n) => Ok(linalg::q(*n)),
            Num::Str(s) => linalg::parse_q(s),
        }
    }

    pub fn to_int(&self) -> Result<i64> {
        let x = self.to_q()?;
        if !x.is_integer() {
            return Err(Error::Parse(format!("expected an integer, found {}", linalg::fmt_q(&x))));
        }
        x.to_integer().to_i64().ok_or_else(|| Error::Parse("integer out of range".into()))
    }
}

fn ints(v: &[Num]) -> Result<Vec<i64>> {
    v.iter().map(Num::to_int).collect()
}

fn nums(v: &[i64]) -> Vec<Num> {
    v.iter().map(|&x| Num::Int(x)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDocument {
    pub rank: usize,
    pub gram: Vec<Vec<Num>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootsDocument {
    pub simple: Vec<Vec<Num>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDocument {
    pub mu: Vec<Num>,
    pub tangent_weights: Vec<Vec<Num>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub lattice: LatticeDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<RootsDocument>,
    pub fixed_points: Vec<PointDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<(usize, usize, Vec<Num>)>>,
    /// Vertices of the moment polytope, when known independently.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kirwan_vertices: Option<Vec<Vec<Num>>>,
    #[serde(default)]
    pub metadata: Map<String, Value>,
}

impl ModelDocument {
    pub fn from_model(model: &FixedPointModel) -> Self {
        let r = model.rank();
        let mut metadata = Map::new();
        metadata.insert("name".into(), Value::String(model.name.clone()));
        let desc = corpus::describe(&model.name);
        if !desc.is_empty() {
            metadata.insert("description".into(), Value::String(desc.into()));
        }
        Self {
            lattice: LatticeDocument {
                rank: r,
                gram: model.lattice.gram().iter().map(|row| row.iter().map(Num::from_q).collect()).collect(),
            },
            roots: (!model.simple_roots.is_empty())
                .then(|| RootsDocument { simple: model.simple_roots.iter().map(|a| nums(a)).collect() }),
            fixed_points: model
                .points
                .iter()
                .map(|p| PointDocument { mu: nums(&p.mu), tangent_weights: p.tangent_weights.iter().map(|w| nums(w)).collect() })
                .collect(),
            edges: model.edges.as_ref().map(|es| es.iter().map(|e| (e.from, e.to, nums(&e.weight))).collect()),
            kirwan_vertices: model
                .declared_polytope
                .as_ref()
                .map(|vs| vs.iter().map(|v| v.iter().map(Num::from_q).collect()).collect()),
            metadata,
        }
    }

    pub fn to_model(&self) -> Result<FixedPointModel> {
        let r = self.lattice.rank;
        if self.lattice.gram.len() != r || self.lattice.gram.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidLattice(format!("gram matrix must be {r} x {r}")));
        }
        let gram: Vec<QVec> =
            self.lattice.gram.iter().map(|row| row.iter().map(Num::to_q).collect::<Result<_>>()).collect::<Result<_>>()?;
        let lattice = WeightLattice::new(gram)?;
        let simple_roots = match &self.roots {
            Some(rd) => rd.simple.iter().map(|a| ints(a)).collect::<Result<_>>()?,
            None => Vec::new(),
        };
        let points = self
            .fixed_points
            .iter()
            .map(|p| {
                Ok(FixedPoint { mu: ints(&p.mu)?, tangent_weights: p.tangent_weights.iter().map(|w| ints(w)).collect::<Result<_>>()? })
            })
            .collect::<Result<Vec<_>>>()?;
        let edges = match &self.edges {
            Some(es) => Some(
                es.iter().map(|(i, j, w)| Ok(Edge { from: *i, to: *j, weight: ints(w)? })).collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        let name = self.metadata.get("name").and_then(Value::as_str).unwrap_or("model").to_string();
        let mut model = FixedPointModel::new(name, lattice, simple_roots, points, edges)?;
        if let Some(vs) = &self.kirwan_vertices {
            let vs: Vec<QVec> = vs.iter().map(|v| v.iter().map(Num::to_q).collect::<Result<_>>()).collect::<Result<_>>()?;
            if vs.is_empty() || vs.iter().any(|v| v.len() != r) {
                return Err(Error::InvalidModel("kirwan_vertices must be nonempty points of the right rank".into()));
            }
            model = model.with_declared_polytope(vs);
        }
        Ok(model)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Compact serialisation; keys are emitted in a fixed order, so equal
    /// documents give equal strings.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }

    pub fn sha256_hex(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Parses a vector written as `"1/2,0"` or `"(1/2,0)"`.
pub fn parse_rational_vector(s: &str, rank: usize) -> Result<QVec> {
    let v = linalg::parse_qvec(s)?;
    if v.len() != rank {
        return Err(Error::DimensionMismatch { expected: rank, found: v.len() });
    }
    Ok(v)
}
