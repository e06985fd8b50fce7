//! Exact polyhedral geometry of the moment image.
//!
//! Inner products (projections, lengths) always use the Gram matrix of the
//! weight lattice; half-space normals are stored for the plain coordinate
//! pairing so that membership tests never need the Gram matrix.

mod components;
mod cone;
mod polytope;

use num_traits::Zero;
use serde_json::{json, Value};

pub use components::{enumerate_components, ComponentDatum};
pub use cone::{
    choose_gamma, component_halfspaces, construct_cone, polytope_p, segment_avoids_walls, validate_gamma,
    weakly_regular, ConeConstruction, GammaChoice, HalfSpaceDatum,
};
pub use polytope::{HalfSpace, RationalPolytope};

use crate::error::Result;
use crate::linalg::{self, fmt_qvec, QVec, Q};
use crate::localization::FixedPointModel;
use crate::root_lattice::{RootSystem, WeightLattice};

/// `base + span(directions)`. Directions are kept in reduced row echelon form
/// and the base point is reduced against them, so equal subspaces compare
/// equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    base: QVec,
    directions: Vec<QVec>,
    pivots: Vec<usize>,
}

impl AffineSubspace {
    pub fn new(base: QVec, spanning: &[QVec]) -> Self {
        let mut directions = spanning.to_vec();
        let pivots = linalg::rref(&mut directions);
        let mut base = base;
        for (d, &p) in directions.iter().zip(&pivots) {
            let f = base[p].clone();
            base = linalg::sub(&base, &linalg::scale(&f, d));
        }
        Self { base, directions, pivots }
    }

    /// Affine hull of a nonempty point set.
    pub fn from_points(points: &[QVec]) -> Self {
        let diffs: Vec<QVec> = points[1..].iter().map(|p| linalg::sub(p, &points[0])).collect();
        Self::new(points[0].clone(), &diffs)
    }

    pub fn whole(n: usize) -> Self {
        let basis: Vec<QVec> = (0..n).map(|i| (0..n).map(|j| linalg::q((i == j) as i64)).collect()).collect();
        Self::new(linalg::zeros(n), &basis)
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    pub fn base(&self) -> &[Q] {
        &self.base
    }

    pub fn directions(&self) -> &[QVec] {
        &self.directions
    }

    /// Local coordinates of a point of the subspace.
    pub fn coordinates(&self, x: &[Q]) -> QVec {
        let diff = linalg::sub(x, &self.base);
        self.pivots.iter().map(|&p| diff[p].clone()).collect()
    }

    pub fn point_at(&self, y: &[Q]) -> QVec {
        let mut x = self.base.clone();
        for (c, d) in y.iter().zip(&self.directions) {
            x = linalg::add(&x, &linalg::scale(c, d));
        }
        x
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.point_at(&self.coordinates(x)) == x
    }

    pub fn contains_direction(&self, v: &[Q]) -> bool {
        linalg::in_span(&self.directions, v)
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        self.contains(&other.base) && other.directions.iter().all(|d| self.contains_direction(d))
    }

    pub fn contains_origin(&self) -> bool {
        self.contains(&linalg::zeros(self.ambient_dim()))
    }

    /// Ambient half-space agreeing on the subspace with `<n, y> <= c` in local
    /// coordinates.
    pub(crate) fn lift_halfspace(&self, n: &[Q], c: &Q) -> HalfSpace {
        let mut normal = linalg::zeros(self.ambient_dim());
        for (ni, &p) in n.iter().zip(&self.pivots) {
            normal[p] = ni.clone();
        }
        let offset = c + linalg::dot(&normal, &self.base);
        HalfSpace::new(normal, offset)
    }

    /// Orthogonal projection for the inner product of `lattice`.
    pub fn project(&self, x: &[Q], lattice: &WeightLattice) -> QVec {
        if self.directions.is_empty() {
            return self.base.clone();
        }
        let diff = linalg::sub(x, &self.base);
        let gram: Vec<QVec> = self
            .directions
            .iter()
            .map(|a| self.directions.iter().map(|b| lattice.inner(a, b)).collect())
            .collect();
        let rhs: QVec = self.directions.iter().map(|a| lattice.inner(a, &diff)).collect();
        let c = linalg::solve(&gram, &rhs, self.dim()).expect("gram of a basis is invertible");
        self.point_at(&c)
    }

    /// The point of the subspace closest to the origin.
    pub fn nearest_to_origin(&self, lattice: &WeightLattice) -> QVec {
        self.project(&linalg::zeros(self.ambient_dim()), lattice)
    }

    /// Parameter `t` with `t * v` in the subspace: `None` if the line misses
    /// it, `Some(None)` if the whole line lies in it.
    pub(crate) fn line_intersection(&self, v: &[Q]) -> Option<Option<Q>> {
        // Solve t v - sum c_i d_i = base.
        let n = self.ambient_dim();
        let cols = 1 + self.dim();
        let rows: Vec<QVec> = (0..n)
            .map(|i| std::iter::once(v[i].clone()).chain(self.directions.iter().map(|d| -d[i].clone())).collect())
            .collect();
        let sol = linalg::solve(&rows, &self.base, cols)?;
        let null = linalg::nullspace(&rows, cols);
        if null.iter().any(|z| !z[0].is_zero()) {
            Some(None)
        } else {
            Some(Some(sol[0].clone()))
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": fmt_qvec(&self.base),
            "directions": self.directions.iter().map(|d| fmt_qvec(d)).collect::<Vec<_>>(),
        })
    }
}

/// Integer basis of the annihilator of the direction space of `a`.
pub fn annihilator_basis(a: &AffineSubspace) -> Vec<Vec<i64>> {
    let rows: Vec<Vec<i64>> = a.directions().iter().map(|d| linalg::primitive(d)).collect();
    linalg::int_kernel(&rows, a.ambient_dim())
}

/// Convex hull of the fixed-point moment values, cut down to the closed
/// dominant chamber when there are roots. A declared polytope on the model
/// takes precedence.
pub fn moment_polytope(model: &FixedPointModel, rs: &RootSystem) -> Result<RationalPolytope> {
    if let Some(v) = &model.declared_polytope {
        return RationalPolytope::from_points(v);
    }
    let pts: Vec<QVec> = model.points.iter().map(|p| linalg::to_q(&p.mu)).collect();
    let hull = RationalPolytope::from_points(&pts)?;
    if rs.is_torus() {
        return Ok(hull);
    }
    let mut constraints = hull.halfspaces().to_vec();
    for a in rs.simple_roots() {
        // <x, a>_G >= 0
        let normal: QVec = linalg::mat_vec(rs.lattice().gram(), &linalg::to_q(a)).iter().map(|x| -x).collect();
        constraints.push(HalfSpace::new(normal, Q::zero()));
    }
    RationalPolytope::from_halfspaces(hull.affine_hull(), &constraints)
}

/// The affine hull `I` of the moment polytope and an integer basis of the
/// annihilator of its direction space.
pub fn principal_hull(delta: &RationalPolytope) -> (AffineSubspace, Vec<Vec<i64>>) {
    let hull = delta.affine_hull().clone();
    let basis = annihilator_basis(&hull);
    (hull, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::linalg::{q, qf, to_q};

    #[test]
    fn affine_canonical_form() {
        let a = AffineSubspace::from_points(&[to_q(&[1, 1]), to_q(&[2, 2])]);
        let b = AffineSubspace::from_points(&[to_q(&[5, 5]), to_q(&[-1, -1])]);
        assert_eq!(a, b);
        assert!(a.contains_origin());
        let c = AffineSubspace::from_points(&[to_q(&[1, 0]), to_q(&[0, 1])]);
        assert_eq!(c.nearest_to_origin(&WeightLattice::standard(2)), vec![qf(1, 2), qf(1, 2)]);
        assert_eq!(c.line_intersection(&to_q(&[1, 1])), Some(Some(qf(1, 2))));
        assert_eq!(c.line_intersection(&to_q(&[1, -1])), None);
        assert_eq!(a.line_intersection(&to_q(&[3, 3])), Some(None));
    }

    #[test]
    fn projection_uses_gram() {
        let lat = WeightLattice::new(vec![vec![q(2), q(1)], vec![q(1), q(2)]]).unwrap();
        let line = AffineSubspace::new(to_q(&[0, 0]), &[to_q(&[1, 0])]);
        let p = line.project(&to_q(&[0, 1]), &lat);
        // <(0,1) - (t,0), (1,0)>_G = 1 - 2t = 0
        assert_eq!(p, vec![qf(1, 2), q(0)]);
    }

    #[test]
    fn corpus_polytopes() {
        let m = corpus::cp1();
        let rs = m.root_system().unwrap();
        let d = moment_polytope(&m, &rs).unwrap();
        assert_eq!(d.vertices(), &[to_q(&[0]), to_q(&[1])]);
        let m = corpus::cp2();
        let d = moment_polytope(&m, &m.root_system().unwrap()).unwrap();
        assert_eq!(d.vertices().len(), 3);
        assert_eq!(d.halfspaces().len(), 3);

        let m = corpus::by_name("p1xp1-su2-diagonal").unwrap();
        let d = moment_polytope(&m, &m.root_system().unwrap()).unwrap();
        assert_eq!(d.vertices(), &[to_q(&[0]), to_q(&[2])]);
        let (i, t_i) = principal_hull(&d);
        assert_eq!(i.dim(), 1);
        assert!(t_i.is_empty());

        let m = corpus::su2_orbit();
        let d = moment_polytope(&m, &m.root_system().unwrap()).unwrap();
        assert_eq!(d.dim(), 0);
        let (_, t_i) = principal_hull(&d);
        assert_eq!(t_i.len(), 1);
    }

    #[test]
    fn single_point_hull() {
        let d = RationalPolytope::from_points(&[to_q(&[0])]).unwrap();
        assert_eq!(d.dim(), 0);
        assert!(d.contains(&[q(0)]));
    }
}
