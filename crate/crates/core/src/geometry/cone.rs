//! The small dominant vector `gamma`, the component half-spaces and the
//! polytope `p` over which the multiplicities become quasi-polynomial.

use num_traits::Signed;
use serde_json::{json, Value};

use super::{enumerate_components, moment_polytope, principal_hull, AffineSubspace, ComponentDatum, HalfSpace, RationalPolytope};
use crate::error::{Error, Result};
use crate::linalg::{self, fmt_q, fmt_qvec, to_q, QVec, Q};
use crate::localization::FixedPointModel;
use crate::quasipoly::ConeRegion;
use crate::root_lattice::RootSystem;

pub const GAMMA_DIRECTION_RADIUS: i64 = 3;
pub const GAMMA_MAX_HALVINGS: u32 = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaChoice {
    pub gamma: QVec,
    /// Number of candidates examined, 0 for a user-supplied vector.
    pub candidates_tried: usize,
    pub user_supplied: bool,
}

#[derive(Clone, Debug)]
pub struct HalfSpaceDatum {
    pub component: usize,
    pub gamma_c: QVec,
    pub tau_c: QVec,
    pub sigma_c: QVec,
    /// `<tau_C, sigma_C>`.
    pub tau_sigma: Q,
    /// Positive roots with `<tau_C, alpha> > 0` that do not occur among the
    /// normal weights with `<tau_C, delta> > 0`.
    pub unmatched_roots: Vec<Vec<i64>>,
    /// `A_C = I`.
    pub principal: bool,
    /// `gamma_C` lies in the convex hull of the moment images of `C`.
    pub contributes: bool,
    pub halfspace: Option<HalfSpace>,
    /// The boundary of the half-space meets `p` in a facet.
    pub tight: bool,
}

impl HalfSpaceDatum {
    pub fn to_json(&self) -> Value {
        json!({
            "component": self.component,
            "gamma_C": fmt_qvec(&self.gamma_c),
            "tau_C": fmt_qvec(&self.tau_c),
            "sigma_C": fmt_qvec(&self.sigma_c),
            "tau_sigma": fmt_q(&self.tau_sigma),
            "unmatched_roots": self.unmatched_roots,
            "principal": self.principal,
            "contributes": self.contributes,
            "halfspace": self.halfspace.as_ref().map(HalfSpace::to_json),
            "tight": self.tight,
        })
    }
}

/// Everything computed on the way from a model to the cone `C_p`.
#[derive(Clone, Debug)]
pub struct ConeConstruction {
    pub delta: RationalPolytope,
    pub hull: AffineSubspace,
    pub t_i_basis: Vec<Vec<i64>>,
    pub components: Vec<ComponentDatum>,
    pub gamma: GammaChoice,
    pub halfspaces: Vec<HalfSpaceDatum>,
    pub p: RationalPolytope,
    pub region: ConeRegion,
}

impl ConeConstruction {
    /// The half-spaces actually used to cut out `p`.
    pub fn certificates(&self) -> impl Iterator<Item = &HalfSpaceDatum> {
        self.halfspaces.iter().filter(|h| h.contributes)
    }

    pub fn gamma_i(&self, rs: &RootSystem) -> QVec {
        self.hull.project(&self.gamma.gamma, rs.lattice())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "delta": self.delta.to_json(),
            "affine_hull_I": self.hull.to_json(),
            "t_I_basis": self.t_i_basis,
            "components": self.components.iter().map(ComponentDatum::to_json).collect::<Vec<_>>(),
            "gamma": fmt_qvec(&self.gamma.gamma),
            "gamma_candidates_tried": self.gamma.candidates_tried,
            "gamma_user_supplied": self.gamma.user_supplied,
            "halfspaces": self.halfspaces.iter().map(HalfSpaceDatum::to_json).collect::<Vec<_>>(),
            "p": self.p.to_json(),
        })
    }
}

/// Components whose affine hull does not contain `I`; their traces on the
/// moment polytope are the walls.
fn walls<'a>(hull: &'a AffineSubspace, components: &'a [ComponentDatum]) -> impl Iterator<Item = &'a ComponentDatum> {
    components.iter().filter(move |c| !c.affine_hull.contains_subspace(hull))
}

/// `xi` lies in the relative interior of `delta` and on no wall.
pub fn weakly_regular(xi: &[Q], delta: &RationalPolytope, components: &[ComponentDatum]) -> bool {
    delta.relint_contains(xi) && walls(delta.affine_hull(), components).all(|c| !c.affine_hull.contains(xi))
}

/// The half-open segment `(from, to]` meets no wall inside `delta`.
pub fn segment_avoids_walls(from: &[Q], to: &[Q], delta: &RationalPolytope, components: &[ComponentDatum]) -> bool {
    let v = linalg::sub(to, from);
    for c in walls(delta.affine_hull(), components) {
        let shifted = AffineSubspace::new(linalg::sub(c.affine_hull.base(), from), c.affine_hull.directions());
        match shifted.line_intersection(&v) {
            Some(None) => return false,
            Some(Some(t))
                if t.is_positive()
                    && t <= Q::from_integer(1.into())
                    && delta.contains(&linalg::add(from, &linalg::scale(&t, &v))) =>
            {
                return false
            }
            _ => {}
        }
    }
    true
}

/// The checks every admissible `gamma` has to pass. Returns the reason for the
/// first failure.
pub fn validate_gamma(
    gamma: &[Q],
    delta: &RationalPolytope,
    components: &[ComponentDatum],
    rs: &RootSystem,
) -> std::result::Result<(), String> {
    let lattice = rs.lattice();
    let hull = delta.affine_hull();
    if gamma.len() != hull.ambient_dim() {
        return Err(format!("expected {} coordinates", hull.ambient_dim()));
    }
    if !rs.is_dominant(gamma) {
        return Err("not in the closed dominant chamber".into());
    }
    let norm = lattice.norm2(gamma);
    for c in components.iter().filter(|c| !c.affine_hull.contains_origin()) {
        let a = c.affine_hull.nearest_to_origin(lattice);
        if norm >= lattice.norm2(&a) {
            return Err(format!("|gamma| is not smaller than the distance to A_C for component {:?}", c.vertex_set));
        }
    }
    let gamma_i = hull.project(gamma, lattice);
    if !weakly_regular(&gamma_i, delta, components) {
        return Err(format!("projection {} is not weakly regular", fmt_qvec(&gamma_i)));
    }
    let origin = linalg::zeros(gamma.len());
    if hull.dim() > 0 && !segment_avoids_walls(&origin, &gamma_i, delta, components) {
        return Err("the segment from 0 to the projection crosses a wall".into());
    }
    for c in components.iter().filter(|c| c.affine_hull != *hull) {
        if c.affine_hull.project(gamma, lattice) == gamma_i {
            return Err(format!("gamma_C equals gamma_I for component {:?}", c.vertex_set));
        }
    }
    Ok(())
}

fn candidate_directions(delta: &RationalPolytope, lattice_rank: usize) -> Vec<QVec> {
    let mut raw: Vec<Vec<i64>> = Vec::new();
    let centroid = delta.centroid();
    if !linalg::is_zero_vec(&centroid) {
        raw.push(linalg::primitive(&centroid));
    }
    let r = GAMMA_DIRECTION_RADIUS;
    let mut grid: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..lattice_rank {
        grid = grid.into_iter().flat_map(|p| (-r..=r).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    grid.retain(|v| v.iter().any(|&x| x != 0));
    grid.sort_by(|a, b| {
        let la: i64 = a.iter().map(|x| x.abs()).sum();
        let lb: i64 = b.iter().map(|x| x.abs()).sum();
        la.cmp(&lb).then(b.cmp(a))
    });
    raw.extend(grid);

    let hull = delta.affine_hull();
    let span = AffineSubspace::new(linalg::zeros(lattice_rank), hull.directions());
    let mut out: Vec<QVec> = Vec::new();
    for u in raw {
        let uq = to_q(&u);
        // Orthogonality is irrelevant here: any projection onto the span keeps
        // the candidate inside I.
        let p = if hull.dim() > 0 { span.point_at(&span.coordinates(&uq)) } else { uq };
        if linalg::is_zero_vec(&p) {
            continue;
        }
        let p = to_q(&linalg::primitive(&p));
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Deterministic search for `gamma`: the centroid direction of `delta`
/// first, then small integer directions, each scaled by `2^-1, ..., 2^-20`.
pub fn choose_gamma(delta: &RationalPolytope, components: &[ComponentDatum], rs: &RootSystem) -> Result<GammaChoice> {
    if !delta.contains(&linalg::zeros(delta.ambient_dim())) {
        return Err(Error::ZeroNotInDelta);
    }
    let mut tried = 0;
    for u in candidate_directions(delta, rs.rank()) {
        let mut eps = linalg::qf(1, 2);
        for _ in 0..GAMMA_MAX_HALVINGS {
            tried += 1;
            let gamma = linalg::scale(&eps, &u);
            if validate_gamma(&gamma, delta, components, rs).is_ok() {
                return Ok(GammaChoice { gamma, candidates_tried: tried, user_supplied: false });
            }
            eps /= linalg::q(2);
        }
    }
    Err(Error::GammaSearchExhausted(tried))
}

/// `gamma_C`, `tau_C`, `sigma_C` and `H_C` for every component.
pub fn component_halfspaces(
    model: &FixedPointModel,
    components: &[ComponentDatum],
    gamma: &[Q],
    hull: &AffineSubspace,
    rs: &RootSystem,
) -> Result<Vec<HalfSpaceDatum>> {
    let lattice = rs.lattice();
    let mut out = Vec::with_capacity(components.len());
    for (idx, c) in components.iter().enumerate() {
        let gamma_c = c.affine_hull.project(gamma, lattice);
        let tau_c = linalg::sub(&gamma_c, gamma);
        let pair = |w: &[i64]| lattice.inner(&tau_c, &to_q(w));

        let positive_normals: Vec<&Vec<i64>> = c.raw_normal_weights.iter().filter(|d| pair(d).is_positive()).collect();
        let positive_roots: Vec<&Vec<i64>> = rs.positive_roots().iter().filter(|a| pair(a).is_positive()).collect();
        let mut sigma = linalg::zeros(gamma.len());
        for d in &positive_normals {
            sigma = linalg::add(&sigma, &to_q(d));
        }
        for a in &positive_roots {
            sigma = linalg::sub(&sigma, &to_q(a));
        }
        let mut pool: Vec<&Vec<i64>> = positive_normals.clone();
        let mut unmatched = Vec::new();
        for a in &positive_roots {
            match pool.iter().position(|d| d == a) {
                Some(i) => {
                    pool.swap_remove(i);
                }
                None => unmatched.push((*a).clone()),
            }
        }
        let tau_sigma = lattice.inner(&tau_c, &sigma);

        let principal = c.affine_hull == *hull;
        let halfspace = if principal || linalg::is_zero_vec(&tau_c) {
            None
        } else {
            let normal = linalg::mat_vec(lattice.gram(), &tau_c);
            let offset = linalg::dot(&normal, &gamma_c);
            Some(HalfSpace::new(normal, offset))
        };
        let contributes = halfspace.is_some() && {
            let mus: Vec<QVec> = c.vertex_set.iter().map(|&v| to_q(&model.points[v].mu)).collect();
            RationalPolytope::from_points(&mus)?.contains(&gamma_c)
        };
        out.push(HalfSpaceDatum {
            component: idx,
            gamma_c,
            tau_c,
            sigma_c: sigma,
            tau_sigma,
            unmatched_roots: unmatched,
            principal,
            contributes,
            halfspace,
            tight: false,
        });
    }
    Ok(out)
}

/// `p = I ∩ delta ∩ H_C` over the contributing components. Marks the
/// half-spaces that cut out a facet of `p`.
pub fn polytope_p(delta: &RationalPolytope, halfspaces: &mut [HalfSpaceDatum]) -> Result<(RationalPolytope, ConeRegion)> {
    let mut constraints: Vec<HalfSpace> = delta.halfspaces().to_vec();
    constraints.extend(halfspaces.iter().filter(|h| h.contributes).filter_map(|h| h.halfspace.clone()));
    let p = RationalPolytope::from_halfspaces(delta.affine_hull(), &constraints).map_err(|e| match e {
        Error::EmptyPolytope => Error::EmptyP("the half-spaces have empty intersection".into()),
        other => other,
    })?;
    if !p.contains(&linalg::zeros(p.ambient_dim())) {
        return Err(Error::EmptyP(format!("0 is not in p = {p}")));
    }
    if p.dim() != delta.dim() {
        return Err(Error::EmptyP(format!("dim p = {} but dim delta = {}", p.dim(), delta.dim())));
    }
    for h in halfspaces.iter_mut() {
        if let (true, Some(hs)) = (h.contributes, &h.halfspace) {
            let on: Vec<QVec> = p.vertices().iter().filter(|v| hs.is_tight(v)).cloned().collect();
            h.tight = !on.is_empty() && p.dim() > 0 && AffineSubspace::from_points(&on).dim() + 1 == p.dim();
        }
    }
    let region = ConeRegion::new(p.clone());
    Ok((p, region))
}

/// Runs the whole construction. `gamma` overrides the search.
pub fn construct_cone(model: &FixedPointModel, rs: &RootSystem, gamma: Option<QVec>) -> Result<ConeConstruction> {
    let delta = moment_polytope(model, rs)?;
    if !delta.contains(&linalg::zeros(model.rank())) {
        return Err(Error::ZeroNotInDelta);
    }
    let (hull, t_i_basis) = principal_hull(&delta);
    let components = enumerate_components(model)?;
    let gamma = match gamma {
        Some(g) => {
            validate_gamma(&g, &delta, &components, rs).map_err(Error::InvalidGamma)?;
            GammaChoice { gamma: g, candidates_tried: 0, user_supplied: true }
        }
        None => choose_gamma(&delta, &components, rs)?,
    };
    let mut halfspaces = component_halfspaces(model, &components, &gamma.gamma, &hull, rs)?;
    let (p, region) = polytope_p(&delta, &mut halfspaces)?;
    Ok(ConeConstruction { delta, hull, t_i_basis, components, gamma, halfspaces, p, region })
}
