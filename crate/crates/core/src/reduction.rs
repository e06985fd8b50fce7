//! The reduced side in the dimension-zero case and the comparison
//! certificates.
//!
//! When the reduced space at a weakly regular level is a finite set of
//! orbifold points with stabiliser `Gamma`, the orbifold index at `(k, lambda)`
//! is `sum_points (1/d) sum_{g in Gamma} exp(2 pi i (k gL(g) - <q_g, lambda>))`.
//! By character orthogonality each point contributes 1 if the character
//! `g -> k gL(g) - <q_g, lambda> mod 1` is trivial and 0 otherwise, so the sum
//! is evaluated with rational arithmetic only.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::document::Num;
use crate::error::{Error, Result};
use crate::geometry::{construct_cone, moment_polytope, segment_avoids_walls, weakly_regular, ComponentDatum, RationalPolytope};
use crate::linalg::{self, fmt_q, fmt_qvec, frac, to_q, QVec, Q};
use crate::localization::{FixedPointModel, Multiplicities};
use crate::quasipoly::{self, FitDomain, FitOptions};
use crate::root_lattice::RootSystem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbifoldPoint {
    /// Rotation number of each group element on the fibre of `L`, in `[0, 1)`.
    pub gl_phase: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedLevelData {
    pub xi: QVec,
    /// Elements `q_g` of the stabiliser, reduced to `[0, 1)^r`; the identity
    /// comes first.
    pub group: Vec<QVec>,
    pub points: Vec<OrbifoldPoint>,
}

fn reduce_mod_one(v: &[Q]) -> QVec {
    v.iter().map(frac).collect()
}

impl ReducedLevelData {
    /// Checks that the group is closed and that every phase map is a
    /// homomorphism.
    pub fn new(xi: QVec, group: Vec<QVec>, points: Vec<OrbifoldPoint>) -> Result<Self> {
        let group: Vec<QVec> = group.iter().map(|g| reduce_mod_one(g)).collect();
        let r = xi.len();
        let zero = linalg::zeros(r);
        if group.iter().any(|g| g.len() != r) {
            return Err(Error::InvalidModel("group elements must have the rank of the lattice".into()));
        }
        let Some(id) = group.iter().position(|g| *g == zero) else {
            return Err(Error::InvalidModel("the group must contain 0".into()));
        };
        let set: BTreeSet<&QVec> = group.iter().collect();
        if set.len() != group.len() {
            return Err(Error::InvalidModel("repeated group element".into()));
        }
        let index_of = |v: &QVec| group.iter().position(|g| g == v);
        let mut table = vec![vec![0usize; group.len()]; group.len()];
        for (i, a) in group.iter().enumerate() {
            for (j, b) in group.iter().enumerate() {
                let s = reduce_mod_one(&linalg::add(a, b));
                table[i][j] = index_of(&s).ok_or_else(|| Error::InvalidModel("group is not closed".into()))?;
            }
        }
        if points.is_empty() {
            return Err(Error::InvalidModel("no reduced points".into()));
        }
        let mut pts = Vec::with_capacity(points.len());
        for p in points {
            if p.gl_phase.len() != group.len() {
                return Err(Error::InvalidModel("one phase per group element is required".into()));
            }
            let phase: Vec<Q> = p.gl_phase.iter().map(frac).collect();
            if !phase[id].is_zero() {
                return Err(Error::InvalidModel("the identity must act trivially on L".into()));
            }
            for i in 0..group.len() {
                for j in 0..group.len() {
                    if frac(&(&phase[i] + &phase[j])) != phase[table[i][j]] {
                        return Err(Error::InvalidModel("gL is not a homomorphism".into()));
                    }
                }
            }
            pts.push(OrbifoldPoint { gl_phase: phase });
        }
        Ok(Self { xi, group, points: pts })
    }

    /// Size of the generic stabiliser.
    pub fn d(&self) -> usize {
        self.group.len()
    }

    /// Exponent of the group: least `e` with `e q_g` integral for all `g`.
    pub fn exponent(&self) -> i64 {
        self.group
            .iter()
            .map(|g| linalg::common_denominator(g).to_i64().expect("small"))
            .fold(1, |a, b| a.lcm(&b))
    }

    pub fn to_document(&self) -> LevelDocument {
        LevelDocument {
            xi: self.xi.iter().map(Num::from_q).collect(),
            group: self.group.iter().map(|g| g.iter().map(Num::from_q).collect()).collect(),
            points: self.points.iter().map(|p| PointDocument { gl: p.gl_phase.iter().map(Num::from_q).collect() }).collect(),
        }
    }

    pub fn from_document(doc: &LevelDocument) -> Result<Self> {
        let conv = |v: &[Num]| -> Result<QVec> { v.iter().map(Num::to_q).collect() };
        Self::new(
            conv(&doc.xi)?,
            doc.group.iter().map(|g| conv(g)).collect::<Result<_>>()?,
            doc.points.iter().map(|p| Ok(OrbifoldPoint { gl_phase: conv(&p.gl)? })).collect::<Result<_>>()?,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDocument {
    #[serde(rename = "gL")]
    pub gl: Vec<Num>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDocument {
    pub xi: Vec<Num>,
    pub group: Vec<Vec<Num>>,
    pub points: Vec<PointDocument>,
}

/// Closure of `gens` under addition modulo `Z^r`.
fn generate_group(gens: &[QVec], r: usize) -> Vec<QVec> {
    let zero = linalg::zeros(r);
    let mut seen: BTreeSet<QVec> = BTreeSet::from([zero.clone()]);
    let mut order = vec![zero.clone()];
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = reduce_mod_one(&linalg::add(&x, g));
            if seen.insert(y.clone()) {
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    order
}

/// Level data of a toric model (`dim M = 2 rank`, no roots) at a weakly
/// regular `xi`: the level set is a single torus orbit whose stabiliser is the
/// kernel of the torus on any tangent space `T_p M`, and the fibre of `L` at a
/// fixed point `p` is rotated by `<q_g, mu_p>`.
pub fn derive_level_data(
    model: &FixedPointModel,
    xi: &[Q],
    delta: &RationalPolytope,
    components: &[ComponentDatum],
) -> Result<ReducedLevelData> {
    let r = model.rank();
    if !model.simple_roots.is_empty() || model.dim() != 2 * r {
        return Err(Error::NotToricModel(format!(
            "need dim M = 2 rank and no roots, got dim M = {} and rank {r}",
            model.dim()
        )));
    }
    if !weakly_regular(xi, delta, components) {
        return Err(Error::NotWeaklyRegular(fmt_qvec(xi)));
    }
    let mut group: Option<BTreeSet<QVec>> = None;
    let mut first: Option<Vec<QVec>> = None;
    for (i, p) in model.points.iter().enumerate() {
        let a: Vec<QVec> = p.tangent_weights.iter().map(|w| to_q(w)).collect();
        let inv = linalg::inverse(&a)
            .ok_or_else(|| Error::NotToricModel(format!("tangent weights at point {i} are not independent")))?;
        // mu_q - mu_p must lie in the cone spanned by the negated weights.
        let at: Vec<QVec> = (0..r).map(|row| a.iter().map(|w| w[row].clone()).collect()).collect();
        for (j, other) in model.points.iter().enumerate() {
            let d: QVec = other.mu.iter().zip(&p.mu).map(|(x, y)| linalg::q(y - x)).collect();
            let c = linalg::solve(&at, &d, r).expect("invertible");
            if c.iter().any(|x| x < &Q::zero()) {
                return Err(Error::NotToricModel(format!("point {j} is not in the weight cone at point {i}")));
            }
        }
        let gens: Vec<QVec> = (0..r).map(|col| inv.iter().map(|row| row[col].clone()).collect()).collect();
        let g = generate_group(&gens, r);
        let set: BTreeSet<QVec> = g.iter().cloned().collect();
        match &group {
            None => {
                group = Some(set);
                first = Some(g);
            }
            Some(s) if *s != set => {
                return Err(Error::NotToricModel(format!("isotropy of the tangent space differs at point {i}")));
            }
            _ => {}
        }
    }
    let elements = first.expect("nonempty model");
    let phase = |mu: &[i64]| -> Vec<Q> { elements.iter().map(|q| frac(&linalg::dot(q, &to_q(mu)))).collect() };
    let gl = phase(&model.points[0].mu);
    for (i, p) in model.points.iter().enumerate() {
        if phase(&p.mu) != gl {
            return Err(Error::NotToricModel(format!("the stabiliser acts differently on L at point {i}")));
        }
    }
    ReducedLevelData::new(xi.to_vec(), elements, vec![OrbifoldPoint { gl_phase: gl }])
}

/// Dimension-zero orbifold index at `(k, lambda)`.
pub fn kawasaki_point_sum(data: &ReducedLevelData, k: i64, lambda: &[i64]) -> u64 {
    let lam = to_q(lambda);
    let kq = linalg::q(k);
    data.points
        .iter()
        .filter(|p| {
            data.group
                .iter()
                .zip(&p.gl_phase)
                .all(|(q, phase)| frac(&(&kq * phase - linalg::dot(q, &lam))).is_zero())
        })
        .count() as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QrMode {
    Vanishing,
    PointCase,
    FitCase,
}

impl std::str::FromStr for QrMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vanishing" => Ok(Self::Vanishing),
            "point-case" | "point" => Ok(Self::PointCase),
            "fit-case" | "fit" => Ok(Self::FitCase),
            _ => Err(Error::Parse(format!("unknown mode '{s}' (vanishing, point-case, fit-case)"))),
        }
    }
}

impl std::fmt::Display for QrMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Vanishing => "vanishing",
            Self::PointCase => "point-case",
            Self::FitCase => "fit-case",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub label: &'static str,
    pub k: i64,
    pub lambda: Vec<i64>,
    pub left: BigInt,
    pub right: BigInt,
}

impl Comparison {
    pub fn agrees(&self) -> bool {
        self.left == self.right
    }

    fn to_json(&self) -> Value {
        json!({
            "check": self.label,
            "k": self.k,
            "lambda": self.lambda,
            "left": self.left.to_string(),
            "right": self.right.to_string(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct QrCertificate {
    pub model: String,
    pub mode: QrMode,
    pub xi: Option<QVec>,
    pub kmax: i64,
    pub seed: u64,
    pub polarization: QVec,
    pub gamma: Option<QVec>,
    /// `xi` and the projection of `gamma` are joined by a segment that meets
    /// no wall, so `xi` lies in the chamber adjacent to 0 that the
    /// construction uses. `false` means the comparison is unverified, not
    /// wrong.
    pub chamber_verified: Option<bool>,
    pub comparisons: Vec<Comparison>,
    pub structural: Vec<(String, bool)>,
    pub mismatches: Vec<Comparison>,
    pub level: Option<ReducedLevelData>,
    pub geometry: Option<Value>,
    pub quasi_polynomial: Option<Value>,
}

impl QrCertificate {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.structural.iter().all(|(_, ok)| *ok)
    }

    pub fn verdict(&self) -> &'static str {
        if self.passed() {
            "PASS"
        } else {
            "FAIL"
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "model": self.model,
            "mode": self.mode.to_string(),
            "verdict": self.verdict(),
            "xi": self.xi.as_ref().map(|x| fmt_qvec(x)),
            "kmax": self.kmax,
            "seed": self.seed,
            "polarization": fmt_qvec(&self.polarization),
            "gamma": self.gamma.as_ref().map(|g| fmt_qvec(g)),
            "chamber_verified": self.chamber_verified,
            "structural_checks": self.structural.iter().map(|(n, ok)| json!({"check": n, "ok": ok})).collect::<Vec<_>>(),
            "mismatches": self.mismatches.iter().map(Comparison::to_json).collect::<Vec<_>>(),
            "comparisons": self.comparisons.iter().map(Comparison::to_json).collect::<Vec<_>>(),
            "level": self.level.as_ref().map(|l| serde_json::to_value(l.to_document()).expect("serialisable")),
            "geometry": self.geometry,
            "quasi_polynomial": self.quasi_polynomial,
        })
    }
}

#[derive(Clone, Debug)]
pub struct QrCheckOptions {
    pub mode: QrMode,
    pub kmax: i64,
    pub xi: Option<QVec>,
    pub level: Option<ReducedLevelData>,
    pub gamma: Option<QVec>,
    pub seed: u64,
    pub fit: Option<FitOptions>,
}

impl QrCheckOptions {
    pub fn new(mode: QrMode) -> Self {
        Self { mode, kmax: 20, xi: None, level: None, gamma: None, seed: 1, fit: None }
    }
}

/// Runs one of the three comparisons and returns the certificate, or
/// `CheckFailed` carrying it when some compared value disagrees.
pub fn qr_check(model: &FixedPointModel, rs: &RootSystem, opts: &QrCheckOptions) -> Result<QrCertificate> {
    let mut eval = Multiplicities::with_seed(model, rs, opts.seed)?;
    let mut cert = QrCertificate {
        model: model.name.clone(),
        mode: opts.mode,
        xi: None,
        kmax: opts.kmax,
        seed: opts.seed,
        polarization: eval.polarization().v.clone(),
        gamma: None,
        chamber_verified: None,
        comparisons: Vec::new(),
        structural: Vec::new(),
        mismatches: Vec::new(),
        level: None,
        geometry: None,
        quasi_polynomial: None,
    };
    let origin = vec![0i64; model.rank()];

    if opts.mode == QrMode::Vanishing {
        let delta = moment_polytope(model, rs)?;
        if delta.contains(&linalg::zeros(model.rank())) {
            return Err(Error::InvalidModel("vanishing mode needs 0 outside the moment polytope".into()));
        }
        cert.geometry = Some(json!({ "delta": delta.to_json() }));
        for k in 1..=opts.kmax {
            let left = eval.dominant(k, &origin)?;
            cert.comparisons.push(Comparison { label: "m(k,0) = 0", k, lambda: origin.clone(), left, right: BigInt::zero() });
        }
        return finish(cert);
    }

    let cone = construct_cone(model, rs, opts.gamma.clone())?;
    let gamma_i = cone.gamma_i(rs);
    cert.gamma = Some(cone.gamma.gamma.clone());
    cert.geometry = Some(cone.to_json());
    let xi = opts
        .xi
        .clone()
        .or_else(|| opts.level.as_ref().map(|l| l.xi.clone()))
        .unwrap_or_else(|| gamma_i.clone());
    if !weakly_regular(&xi, &cone.delta, &cone.components) {
        return Err(Error::NotWeaklyRegular(fmt_qvec(&xi)));
    }
    cert.chamber_verified = Some(xi == gamma_i || segment_avoids_walls(&xi, &gamma_i, &cone.delta, &cone.components));
    let level = match &opts.level {
        Some(l) => l.clone(),
        None => derive_level_data(model, &xi, &cone.delta, &cone.components)?,
    };
    cert.xi = Some(xi);

    match opts.mode {
        QrMode::PointCase => {
            for k in 1..=opts.kmax {
                for x in cone.region.points_at_depth(k) {
                    let lambda = x[1..].to_vec();
                    let left = eval.dominant(k, &lambda)?;
                    let right = BigInt::from(kawasaki_point_sum(&level, k, &lambda));
                    cert.comparisons.push(Comparison { label: "m_G = Kawasaki", k, lambda, left, right });
                }
            }
        }
        QrMode::FitCase => {
            let mut fit_opts = opts.fit.clone().unwrap_or_else(|| FitOptions::for_dimension(model.dim()));
            fit_opts.horizon = fit_opts.horizon.max(opts.kmax);
            let qp = quasipoly::fit(&mut |x: &[i64]| eval.m(x[0], &x[1..]), &cone.region, &fit_opts)?;
            let at_one: Vec<i64> = std::iter::once(1).chain(origin.iter().copied()).collect();
            cert.comparisons.push(Comparison {
                label: "fit(1,0) = Kawasaki(1,0)",
                k: 1,
                lambda: origin.clone(),
                left: quasipoly::eval_int(&qp, &at_one),
                right: BigInt::from(kawasaki_point_sum(&level, 1, &origin)),
            });
            for k in 1..=opts.kmax {
                let x: Vec<i64> = std::iter::once(k).chain(origin.iter().copied()).collect();
                cert.comparisons.push(Comparison {
                    label: "m(k,0) = fit(k,0)",
                    k,
                    lambda: origin.clone(),
                    left: eval.dominant(k, &origin)?,
                    right: quasipoly::eval_int(&qp, &x),
                });
            }
            let e = level.exponent();
            let n = qp.ambient_rank();
            let periodic = (0..n).all(|i| {
                let v: Vec<i64> = (0..n).map(|j| if i == j { e } else { 0 }).collect();
                qp.is_period(&v)
            });
            cert.structural.push((format!("{e} Z^{n} is contained in the period lattice"), periodic));
            cert.structural.push((
                format!("degree {} <= dim M / 2 = {}", qp.degree(), model.dim() / 2),
                qp.degree() as usize <= model.dim() / 2,
            ));
            cert.quasi_polynomial = Some(serde_json::to_value(qp.to_document()).expect("serialisable"));
        }
        QrMode::Vanishing => unreachable!(),
    }
    cert.level = Some(level);
    finish(cert)
}

fn finish(mut cert: QrCertificate) -> Result<QrCertificate> {
    cert.mismatches = cert.comparisons.iter().filter(|c| !c.agrees()).cloned().collect();
    if cert.passed() {
        Ok(cert)
    } else {
        Err(Error::CheckFailed(Box::new(cert)))
    }
}

/// Pretty one-line summary of a level for tables.
pub fn describe_level(l: &ReducedLevelData) -> String {
    let g: Vec<String> = l.group.iter().map(|q| fmt_qvec(q)).collect();
    let phases: Vec<String> = l.points.iter().map(|p| p.gl_phase.iter().map(fmt_q).collect::<Vec<_>>().join(",")).collect();
    format!("xi={} |Gamma|={} Gamma={{{}}} gL=[{}]", fmt_qvec(&l.xi), l.d(), g.join(" "), phases.join("; "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::geometry::enumerate_components;
    use crate::linalg::{q, qf};

    fn level(name: &str, xi: QVec) -> ReducedLevelData {
        let m = corpus::by_name(name).unwrap();
        let rs = m.root_system().unwrap();
        let delta = moment_polytope(&m, &rs).unwrap();
        let comps = enumerate_components(&m).unwrap();
        derive_level_data(&m, &xi, &delta, &comps).unwrap()
    }

    #[test]
    fn cp1_has_trivial_stabiliser() {
        let l = level("cp1", vec![qf(1, 2)]);
        assert_eq!(l.d(), 1);
        for k in 1..5 {
            for lam in -3..5 {
                assert_eq!(kawasaki_point_sum(&l, k, &[lam]), 1);
            }
        }
    }

    #[test]
    fn weight_two_gives_z2() {
        let l = level("p1xp1-weight2", vec![qf(1, 2), q(0)]);
        assert_eq!(l.d(), 2);
        assert_eq!(l.group[1], vec![q(0), qf(1, 2)]);
        assert_eq!(l.points[0].gl_phase, vec![q(0), qf(1, 2)]);
        for k in 1i64..6 {
            for a in -2..3 {
                for b in -3..4 {
                    let expected = ((k - b).rem_euclid(2) == 0) as u64;
                    assert_eq!(kawasaki_point_sum(&l, k, &[a, b]), expected);
                }
            }
        }
    }

    #[test]
    fn explicit_z3_passes_through() {
        let l = ReducedLevelData::new(
            vec![qf(1, 2)],
            vec![vec![q(0)], vec![qf(1, 3)], vec![qf(2, 3)]],
            vec![OrbifoldPoint { gl_phase: vec![q(0); 3] }],
        )
        .unwrap();
        assert_eq!(l.d(), 3);
        assert_eq!(l.exponent(), 3);
        for k in 1..4 {
            for lam in -6..7 {
                assert_eq!(kawasaki_point_sum(&l, k, &[lam]), (lam.rem_euclid(3) == 0) as u64);
            }
        }
        let doc = l.to_document();
        assert_eq!(ReducedLevelData::from_document(&doc).unwrap(), l);
    }

    #[test]
    fn invalid_level_data() {
        let not_closed = ReducedLevelData::new(vec![q(0)], vec![vec![q(0)], vec![qf(1, 3)]], vec![OrbifoldPoint { gl_phase: vec![q(0), q(0)] }]);
        assert!(not_closed.is_err());
        let not_hom = ReducedLevelData::new(
            vec![q(0)],
            vec![vec![q(0)], vec![qf(1, 2)]],
            vec![OrbifoldPoint { gl_phase: vec![q(0), qf(1, 3)] }],
        );
        assert!(not_hom.is_err());
    }

    #[test]
    fn non_toric_and_irregular_levels() {
        let m = corpus::cp1();
        let rs = m.root_system().unwrap();
        let delta = moment_polytope(&m, &rs).unwrap();
        let comps = enumerate_components(&m).unwrap();
        assert!(matches!(derive_level_data(&m, &[q(1)], &delta, &comps), Err(Error::NotWeaklyRegular(_))));
        let m = corpus::by_name("p1xp1-su2-diagonal").unwrap();
        let rs = m.root_system().unwrap();
        let delta = moment_polytope(&m, &rs).unwrap();
        let comps = enumerate_components(&m).unwrap();
        assert!(matches!(derive_level_data(&m, &[q(1)], &delta, &comps), Err(Error::NotToricModel(_))));
    }

    #[test]
    fn vanishing_on_shifted_cp1() {
        let m = corpus::cp1_shifted();
        let rs = m.root_system().unwrap();
        let cert = qr_check(&m, &rs, &QrCheckOptions::new(QrMode::Vanishing)).unwrap();
        assert_eq!(cert.comparisons.len(), 20);
        assert!(cert.passed());
        let m = corpus::cp1();
        assert!(qr_check(&m, &rs, &QrCheckOptions::new(QrMode::Vanishing)).is_err());
    }

    #[test]
    fn point_case_on_cp1() {
        let m = corpus::cp1();
        let rs = m.root_system().unwrap();
        let mut opts = QrCheckOptions::new(QrMode::PointCase);
        opts.kmax = 6;
        let cert = qr_check(&m, &rs, &opts).unwrap();
        assert_eq!(cert.chamber_verified, Some(true));
        // (k + 1) lattice points at each depth.
        assert_eq!(cert.comparisons.len(), (2..=7).sum::<usize>());
    }

    #[test]
    fn wrong_level_is_caught() {
        let m = corpus::cp1();
        let rs = m.root_system().unwrap();
        let mut opts = QrCheckOptions::new(QrMode::PointCase);
        opts.kmax = 4;
        opts.level = Some(
            ReducedLevelData::new(vec![qf(1, 2)], vec![vec![q(0)], vec![qf(1, 2)]], vec![OrbifoldPoint { gl_phase: vec![q(0), q(0)] }])
                .unwrap(),
        );
        match qr_check(&m, &rs, &opts) {
            Err(Error::CheckFailed(cert)) => assert!(!cert.mismatches.is_empty()),
            other => panic!("expected a failed check, got {other:?}"),
        }
    }
}
