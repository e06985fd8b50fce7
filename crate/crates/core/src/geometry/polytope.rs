use num_traits::Signed;
use serde_json::{json, Value};

use super::AffineSubspace;
use crate::error::{Error, Result};
use crate::linalg::{self, fmt_q, fmt_qvec, QVec, Q};

/// `<normal, x> <= offset`, with the plain coordinate pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub normal: QVec,
    pub offset: Q,
}

impl HalfSpace {
    pub fn new(normal: QVec, offset: Q) -> Self {
        Self { normal, offset }
    }

    pub fn value(&self, x: &[Q]) -> Q {
        linalg::dot(&self.normal, x)
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.value(x) <= self.offset
    }

    pub fn is_tight(&self, x: &[Q]) -> bool {
        self.value(x) == self.offset
    }

    /// Scaled so the normal is a primitive integer vector.
    pub fn normalized(&self) -> Self {
        let p = linalg::primitive(&self.normal);
        let i = p.iter().position(|&x| x != 0).expect("nonzero normal");
        let factor = linalg::q(p[i]) / &self.normal[i];
        Self { normal: linalg::to_q(&p), offset: &self.offset * factor }
    }

    pub fn to_json(&self) -> Value {
        json!({ "normal": self.normal.iter().map(fmt_q).collect::<Vec<_>>(), "offset": fmt_q(&self.offset) })
    }
}

/// A bounded rational polyhedron with both representations. Half-spaces are
/// facet inequalities relative to the affine hull.
#[derive(Clone, Debug)]
pub struct RationalPolytope {
    vertices: Vec<QVec>,
    halfspaces: Vec<HalfSpace>,
    hull: AffineSubspace,
}

impl RationalPolytope {
    /// Convex hull of a nonempty finite point set.
    pub fn from_points(points: &[QVec]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        let hull = AffineSubspace::from_points(&pts);
        let d = hull.dim();
        if d == 0 {
            return Ok(Self { vertices: pts, halfspaces: Vec::new(), hull });
        }
        let local: Vec<QVec> = pts.iter().map(|p| hull.coordinates(p)).collect();
        let mut facets: Vec<(Vec<usize>, QVec, Q)> = Vec::new();
        for subset in subsets(local.len(), d) {
            let diffs: Vec<QVec> = subset[1..].iter().map(|&i| linalg::sub(&local[i], &local[subset[0]])).collect();
            let ns = linalg::nullspace(&diffs, d);
            if ns.len() != 1 {
                continue;
            }
            let mut n = ns[0].clone();
            let mut c = linalg::dot(&n, &local[subset[0]]);
            let values: Vec<Q> = local.iter().map(|y| linalg::dot(&n, y)).collect();
            let above = values.iter().any(|v| v > &c);
            let below = values.iter().any(|v| v < &c);
            if above && below {
                continue;
            }
            let tight: Vec<usize> = (0..local.len()).filter(|&i| values[i] == c).collect();
            if above {
                n = n.iter().map(|x| -x).collect();
                c = -c;
            }
            if facets.iter().any(|(t, _, _)| *t == tight) {
                continue;
            }
            facets.push((tight, n, c));
        }
        let vertices: Vec<QVec> = (0..pts.len())
            .filter(|&i| {
                let normals: Vec<QVec> = facets.iter().filter(|(t, _, _)| t.contains(&i)).map(|(_, n, _)| n.clone()).collect();
                linalg::rank(&normals) == d
            })
            .map(|i| pts[i].clone())
            .collect();
        let halfspaces = facets.into_iter().map(|(_, n, c)| hull.lift_halfspace(&n, &c).normalized()).collect();
        let mut poly = Self { vertices, halfspaces, hull };
        poly.halfspaces.sort_by(|a, b| a.normal.cmp(&b.normal).then(a.offset.cmp(&b.offset)));
        Ok(poly)
    }

    /// `hull ∩ {x : <n_i, x> <= c_i}`; errors if the result is empty or
    /// unbounded.
    pub fn from_halfspaces(hull: &AffineSubspace, constraints: &[HalfSpace]) -> Result<Self> {
        let d = hull.dim();
        // Restrict every constraint to the local coordinates of the hull.
        let rows: Vec<(QVec, Q)> = constraints
            .iter()
            .map(|h| {
                let a: QVec = hull.directions().iter().map(|dir| linalg::dot(&h.normal, dir)).collect();
                (a, &h.offset - linalg::dot(&h.normal, hull.base()))
            })
            .collect();
        if d == 0 {
            return if rows.iter().all(|(_, c)| !c.is_negative()) {
                Self::from_points(&[hull.base().to_vec()])
            } else {
                Err(Error::EmptyPolytope)
            };
        }
        let normals: Vec<QVec> = rows.iter().map(|(a, _)| a.clone()).collect();
        if linalg::rank(&normals) < d {
            return Err(Error::Unbounded);
        }
        for subset in subsets(rows.len(), d - 1) {
            let sub: Vec<QVec> = subset.iter().map(|&i| rows[i].0.clone()).collect();
            let ns = linalg::nullspace(&sub, d);
            if ns.len() != 1 {
                continue;
            }
            let r = &ns[0];
            let signs: Vec<Q> = rows.iter().map(|(a, _)| linalg::dot(a, r)).collect();
            if signs.iter().all(|s| !s.is_positive()) || signs.iter().all(|s| !s.is_negative()) {
                return Err(Error::Unbounded);
            }
        }
        let mut vertices = Vec::new();
        for subset in subsets(rows.len(), d) {
            let a: Vec<QVec> = subset.iter().map(|&i| rows[i].0.clone()).collect();
            if linalg::rank(&a) < d {
                continue;
            }
            let b: QVec = subset.iter().map(|&i| rows[i].1.clone()).collect();
            let y = linalg::solve(&a, &b, d).expect("full rank square system");
            if rows.iter().all(|(n, c)| linalg::dot(n, &y) <= *c) {
                vertices.push(hull.point_at(&y));
            }
        }
        if vertices.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        Self::from_points(&vertices)
    }

    pub fn vertices(&self) -> &[QVec] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn affine_hull(&self) -> &AffineSubspace {
        &self.hull
    }

    pub fn dim(&self) -> usize {
        self.hull.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.hull.ambient_dim()
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.hull.contains(x) && self.halfspaces.iter().all(|h| h.contains(x))
    }

    /// Interior relative to the affine hull.
    pub fn relint_contains(&self, x: &[Q]) -> bool {
        self.hull.contains(x) && self.halfspaces.iter().all(|h| h.value(x) < h.offset)
    }

    /// Same point set (compared through the canonical vertex lists).
    pub fn same_set(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }

    /// Smallest integer box containing `k` times the polytope.
    pub fn dilated_bounding_box(&self, k: i64) -> (Vec<i64>, Vec<i64>) {
        let n = self.ambient_dim();
        let kq = linalg::q(k);
        let lo = (0..n).map(|i| self.vertices.iter().map(|v| linalg::ceil_q(&(&v[i] * &kq))).min().unwrap()).collect();
        let hi = (0..n).map(|i| self.vertices.iter().map(|v| linalg::floor_q(&(&v[i] * &kq))).max().unwrap()).collect();
        (lo, hi)
    }

    pub fn centroid(&self) -> QVec {
        let n = linalg::q(self.vertices.len() as i64);
        let mut c = linalg::zeros(self.ambient_dim());
        for v in &self.vertices {
            c = linalg::add(&c, v);
        }
        c.iter().map(|x| x / &n).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim(),
            "vertices": self.vertices.iter().map(|v| fmt_qvec(v)).collect::<Vec<_>>(),
            "halfspaces": self.halfspaces.iter().map(HalfSpace::to_json).collect::<Vec<_>>(),
            "affine_hull": self.hull.to_json(),
        })
    }
}

impl std::fmt::Display for RationalPolytope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|v| fmt_qvec(v)).collect();
        write!(f, "conv{{{}}}", vs.join(", "))
    }
}

/// All `k`-element index subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}
