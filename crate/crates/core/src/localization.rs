//! Index characters from isolated fixed-point data.
//!
//! A fixed point `p` contributes `t^{k mu_p} / prod_{alpha in wt(p)} (1 - t^{-alpha})`.
//! Each factor is expanded as a geometric series in the half-space where a
//! polarization vector `v` is nonnegative, which turns the coefficient of
//! `t^lambda` into a signed sum of vector partition counts.
//!
//! Tangent weights point away from the moment image: along the invariant
//! sphere with weight `alpha` at `p` the moment map moves in direction `-alpha`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::character::{FormalCharacter, LatticeBox};
use crate::error::{Error, Result};
use crate::linalg::{self, to_q, QVec, Q};
use crate::root_lattice::{RootSystem, WeightLattice};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    /// Weight of the torus on the fibre of `L`, equal to the moment image.
    pub mu: Vec<i64>,
    pub tangent_weights: Vec<Vec<i64>>,
}

/// An invariant sphere joining two fixed points. `weight` is the tangent
/// weight of the sphere at `from`; at `to` it is `-weight`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct FixedPointModel {
    pub name: String,
    pub lattice: WeightLattice,
    pub simple_roots: Vec<Vec<i64>>,
    pub points: Vec<FixedPoint>,
    pub edges: Option<Vec<Edge>>,
    /// Vertices of the moment polytope when it is known independently of the
    /// fixed-point data (coadjoint orbits and their relatives).
    pub declared_polytope: Option<Vec<QVec>>,
}

impl FixedPointModel {
    /// Validates the point data and, when present, the GKM edges. Edge
    /// weights given with the opposite sign are reoriented.
    pub fn new(
        name: impl Into<String>,
        lattice: WeightLattice,
        simple_roots: Vec<Vec<i64>>,
        points: Vec<FixedPoint>,
        edges: Option<Vec<Edge>>,
    ) -> Result<Self> {
        let r = lattice.rank();
        if points.is_empty() {
            return Err(Error::InvalidModel("no fixed points".into()));
        }
        let dim = points[0].tangent_weights.len();
        for (i, p) in points.iter().enumerate() {
            if p.mu.len() != r {
                return Err(Error::DimensionMismatch { expected: r, found: p.mu.len() });
            }
            if p.tangent_weights.len() != dim {
                return Err(Error::InvalidModel(format!(
                    "fixed point {i} has {} tangent weights, expected {dim}",
                    p.tangent_weights.len()
                )));
            }
            for w in &p.tangent_weights {
                if w.len() != r {
                    return Err(Error::DimensionMismatch { expected: r, found: w.len() });
                }
                if w.iter().all(|&x| x == 0) {
                    return Err(Error::InvalidModel(format!("fixed point {i} has a zero tangent weight")));
                }
            }
        }
        for a in &simple_roots {
            if a.len() != r {
                return Err(Error::DimensionMismatch { expected: r, found: a.len() });
            }
        }
        let edges = match edges {
            Some(e) => Some(orient_edges(&points, e)?),
            None => None,
        };
        Ok(Self { name: name.into(), lattice, simple_roots, points, edges, declared_polytope: None })
    }

    pub fn with_declared_polytope(mut self, vertices: Vec<QVec>) -> Self {
        self.declared_polytope = Some(vertices);
        self
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Real dimension of `M`.
    pub fn dim(&self) -> usize {
        2 * self.points[0].tangent_weights.len()
    }

    pub fn root_system(&self) -> Result<RootSystem> {
        if self.simple_roots.is_empty() {
            Ok(RootSystem::torus(&self.lattice))
        } else {
            RootSystem::build(&self.simple_roots, &self.lattice)
        }
    }

    pub fn all_tangent_weights(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.points.iter().flat_map(|p| p.tangent_weights.iter())
    }
}

fn orient_edges(points: &[FixedPoint], edges: Vec<Edge>) -> Result<Vec<Edge>> {
    let n = points.len();
    let mut out = Vec::with_capacity(edges.len());
    let mut used: Vec<Vec<bool>> = points.iter().map(|p| vec![false; p.tangent_weights.len()]).collect();
    for e in edges {
        if e.from >= n || e.to >= n || e.from == e.to {
            return Err(Error::InconsistentGkm(format!("edge ({}, {}) has invalid endpoints", e.from, e.to)));
        }
        let d: Vec<i64> = points[e.to].mu.iter().zip(&points[e.from].mu).map(|(a, b)| a - b).collect();
        let c = proportionality(&d, &e.weight).ok_or_else(|| {
            Error::InconsistentGkm(format!(
                "edge ({}, {}): mu difference {:?} is not a nonzero multiple of {:?}",
                e.from, e.to, d, e.weight
            ))
        })?;
        // mu_to - mu_from = -c * w_from with c > 0.
        let w_from: Vec<i64> = if c.is_negative() { e.weight.clone() } else { e.weight.iter().map(|x| -x).collect() };
        let w_to: Vec<i64> = w_from.iter().map(|x| -x).collect();
        for (p, w) in [(e.from, &w_from), (e.to, &w_to)] {
            let slot = points[p].tangent_weights.iter().enumerate().position(|(i, t)| t == w && !used[p][i]);
            match slot {
                Some(i) => used[p][i] = true,
                None => {
                    let neg: Vec<i64> = w.iter().map(|x| -x).collect();
                    let msg = if points[p].tangent_weights.contains(&neg) {
                        format!(
                            "edge ({}, {}): tangent weight at point {p} points into the moment image; \
                             weights must be those along which the moment map decreases",
                            e.from, e.to
                        )
                    } else {
                        format!("edge ({}, {}): weight {:?} is not an unmatched tangent weight of point {p}", e.from, e.to, w)
                    };
                    return Err(Error::InconsistentGkm(msg));
                }
            }
        }
        out.push(Edge { from: e.from, to: e.to, weight: w_from });
    }
    for (p, u) in used.iter().enumerate() {
        if let Some(i) = u.iter().position(|x| !x) {
            return Err(Error::InconsistentGkm(format!(
                "tangent weight {:?} of point {p} has no incident edge",
                points[p].tangent_weights[i]
            )));
        }
    }
    Ok(out)
}

/// `c` with `d = c * w`, if it exists and is nonzero.
fn proportionality(d: &[i64], w: &[i64]) -> Option<Q> {
    let i = w.iter().position(|&x| x != 0)?;
    let c = Q::new(BigInt::from(d[i]), BigInt::from(w[i]));
    if c.is_zero() {
        return None;
    }
    let ok = d.iter().zip(w).all(|(&a, &b)| Q::from_integer(BigInt::from(a)) == &c * Q::from_integer(BigInt::from(b)));
    ok.then_some(c)
}

/// A vector `v` used to choose the expansion half-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarization {
    pub v: QVec,
    /// `v` scaled to a primitive integer vector; pairing signs are unchanged.
    int_v: Vec<i64>,
    pub seed: Option<u64>,
}

impl Polarization {
    pub fn new(v: QVec) -> Self {
        let int_v = linalg::primitive(&v);
        Self { v, int_v, seed: None }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Self::new(to_q(v))
    }

    pub fn pair(&self, w: &[i64]) -> i64 {
        linalg::dot_int(&self.int_v, w)
    }

    pub fn int_vector(&self) -> &[i64] {
        &self.int_v
    }

    /// Nonzero on every tangent weight and every positive root.
    pub fn check(&self, model: &FixedPointModel, rs: &RootSystem) -> Result<()> {
        if self.v.len() != model.rank() {
            return Err(Error::DimensionMismatch { expected: model.rank(), found: self.v.len() });
        }
        for w in model.all_tangent_weights().chain(rs.positive_roots()) {
            if self.pair(w) == 0 {
                return Err(Error::DegeneratePolarization(format!(
                    "v = {} is orthogonal to {:?}",
                    linalg::fmt_qvec(&self.v),
                    w
                )));
            }
        }
        Ok(())
    }

    /// Small random rational vector from a seeded generator, redrawn until it
    /// is valid for the model.
    pub fn random(model: &FixedPointModel, rs: &RootSystem, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10_000 {
            let v: QVec = (0..model.rank())
                .map(|_| Q::new(BigInt::from(rng.gen_range(-1000i64..=1000)), BigInt::from(rng.gen_range(1i64..=97))))
                .collect();
            let mut p = Self::new(v);
            if p.check(model, rs).is_ok() {
                p.seed = Some(seed);
                return Ok(p);
            }
        }
        Err(Error::DegeneratePolarization(format!("no valid random vector for seed {seed}")))
    }
}

/// Expansion data of one fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarized {
    pub sign: i64,
    pub shift: Vec<i64>,
    pub generators: Vec<Vec<i64>>,
}

/// `1/prod(1 - t^{-alpha}) = sign * t^shift * prod_beta sum_{m>=0} t^{m beta}`
/// as series supported where `v >= 0`.
pub fn polarize(p: &FixedPoint, v: &Polarization) -> Result<Polarized> {
    let r = p.mu.len();
    let mut sign = 1;
    let mut shift = vec![0; r];
    let mut generators = Vec::with_capacity(p.tangent_weights.len());
    for a in &p.tangent_weights {
        let s = v.pair(a);
        if s == 0 {
            return Err(Error::DegeneratePolarization(format!("v is orthogonal to {a:?}")));
        }
        if s > 0 {
            // 1/(1 - t^{-a}) = -t^a / (1 - t^a)
            sign = -sign;
            for (x, y) in shift.iter_mut().zip(a) {
                *x += y;
            }
            generators.push(a.clone());
        } else {
            generators.push(a.iter().map(|x| -x).collect());
        }
    }
    Ok(Polarized { sign, shift, generators })
}

/// Memoised counter of representations `x = sum m_i beta_i`, `m_i >= 0`, for
/// a fixed generator list positive on `v`.
#[derive(Clone, Debug)]
pub struct PartitionCounter {
    generators: Vec<Vec<i64>>,
    v: Vec<i64>,
    heights: Vec<i64>,
    memo: HashMap<(usize, Vec<i64>), BigInt>,
}

impl PartitionCounter {
    pub fn new(generators: Vec<Vec<i64>>, v: &[i64]) -> Self {
        let heights: Vec<i64> = generators.iter().map(|g| linalg::dot_int(v, g)).collect();
        assert!(heights.iter().all(|&h| h > 0), "generators must be strictly positive on v");
        Self { generators, v: v.to_vec(), heights, memo: HashMap::new() }
    }

    pub fn count(&mut self, target: &[i64]) -> BigInt {
        self.count_prefix(self.generators.len(), target)
    }

    fn count_prefix(&mut self, i: usize, x: &[i64]) -> BigInt {
        let h = linalg::dot_int(&self.v, x);
        if h < 0 {
            return BigInt::zero();
        }
        if i == 0 {
            return if x.iter().all(|&c| c == 0) { BigInt::one() } else { BigInt::zero() };
        }
        if i == 1 {
            let b = &self.generators[0];
            let m = h / self.heights[0];
            let hit = h % self.heights[0] == 0 && x.iter().zip(b).all(|(xc, bc)| *xc == m * bc);
            return if hit { BigInt::one() } else { BigInt::zero() };
        }
        let key = (i, x.to_vec());
        if let Some(c) = self.memo.get(&key) {
            return c.clone();
        }
        let beta = self.generators[i - 1].clone();
        let mut total = BigInt::zero();
        let mut y = x.to_vec();
        loop {
            total += self.count_prefix(i - 1, &y);
            for (a, b) in y.iter_mut().zip(&beta) {
                *a -= b;
            }
            if linalg::dot_int(&self.v, &y) < 0 {
                break;
            }
        }
        self.memo.insert(key, total.clone());
        total
    }
}

/// Number of ways to write `target` as a nonnegative integer combination of
/// `generators`, all of which must be strictly positive on `v`.
pub fn kostant_partition(generators: &[Vec<i64>], target: &[i64], v: &[i64]) -> BigInt {
    PartitionCounter::new(generators.to_vec(), v).count(target)
}

/// Evaluator for the index multiplicities and their antisymmetrisation.
#[derive(Clone, Debug)]
pub struct Multiplicities {
    model: FixedPointModel,
    rs: RootSystem,
    polarization: Polarization,
    terms: Vec<(i64, Vec<i64>, PartitionCounter)>,
    /// `(-1)^{|S|}` and `sum S` over subsets `S` of the positive roots.
    root_subsets: Vec<(i64, Vec<i64>)>,
}

impl Multiplicities {
    pub fn new(model: &FixedPointModel, rs: &RootSystem, polarization: Polarization) -> Result<Self> {
        polarization.check(model, rs)?;
        let mut terms = Vec::with_capacity(model.points.len());
        for p in &model.points {
            let pol = polarize(p, &polarization)?;
            terms.push((pol.sign, pol.shift, PartitionCounter::new(pol.generators, polarization.int_vector())));
        }
        let r = model.rank();
        let mut root_subsets = vec![(1i64, vec![0i64; r])];
        for a in rs.positive_roots() {
            let extra: Vec<(i64, Vec<i64>)> = root_subsets
                .iter()
                .map(|(s, sum)| (-s, sum.iter().zip(a).map(|(x, y)| x + y).collect()))
                .collect();
            root_subsets.extend(extra);
        }
        Ok(Self { model: model.clone(), rs: rs.clone(), polarization, terms, root_subsets })
    }

    /// Uses a seeded random polarization.
    pub fn with_seed(model: &FixedPointModel, rs: &RootSystem, seed: u64) -> Result<Self> {
        Self::new(model, rs, Polarization::random(model, rs, seed)?)
    }

    pub fn polarization(&self) -> &Polarization {
        &self.polarization
    }

    pub fn model(&self) -> &FixedPointModel {
        &self.model
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    /// Coefficient of `t^lambda` in the equivariant index of `L^k`.
    pub fn index(&mut self, k: i64, lambda: &[i64]) -> BigInt {
        let mut total = BigInt::zero();
        for ((sign, shift, counter), p) in self.terms.iter_mut().zip(&self.model.points) {
            let target: Vec<i64> =
                lambda.iter().zip(&p.mu).zip(shift.iter()).map(|((l, m), s)| l - k * m - s).collect();
            let c = counter.count(&target);
            if !c.is_zero() {
                total += c * BigInt::from(*sign);
            }
        }
        total
    }

    /// `m(k, lambda)`: the index multiplied by `prod_{alpha > 0} (1 - t^{-alpha})`.
    pub fn m(&mut self, k: i64, lambda: &[i64]) -> BigInt {
        let subsets = std::mem::take(&mut self.root_subsets);
        let mut total = BigInt::zero();
        for (s, sum) in &subsets {
            let x: Vec<i64> = lambda.iter().zip(sum).map(|(a, b)| a + b).collect();
            let c = self.index(k, &x);
            if !c.is_zero() {
                total += c * BigInt::from(*s);
            }
        }
        self.root_subsets = subsets;
        total
    }

    pub fn dominant(&mut self, k: i64, lambda: &[i64]) -> Result<BigInt> {
        if !self.rs.is_dominant_int(lambda) {
            return Err(Error::NotDominant(lambda.to_vec()));
        }
        Ok(self.m(k, lambda))
    }

    pub fn index_character(&mut self, k: i64, b: &LatticeBox) -> FormalCharacter {
        b.points().into_iter().map(|x| (x.clone(), self.index(k, &x))).collect()
    }

    pub fn m_character(&mut self, k: i64, b: &LatticeBox) -> FormalCharacter {
        b.points().into_iter().map(|x| (x.clone(), self.m(k, &x))).collect()
    }
}

pub fn index_multiplicity(model: &FixedPointModel, k: i64, lambda: &[i64], v: &Polarization) -> Result<BigInt> {
    let rs = RootSystem::torus(&model.lattice);
    Ok(Multiplicities::new(model, &rs, v.clone())?.index(k, lambda))
}

pub fn index_character(model: &FixedPointModel, k: i64, b: &LatticeBox, v: &Polarization) -> Result<FormalCharacter> {
    let rs = RootSystem::torus(&model.lattice);
    Ok(Multiplicities::new(model, &rs, v.clone())?.index_character(k, b))
}

/// Output box of [`q_multiplicities`] for a given index box: the points
/// `lambda` with `lambda + sum S` inside `index_box` for every set `S` of
/// positive roots.
pub fn padded_box(rs: &RootSystem, index_box: &LatticeBox) -> LatticeBox {
    let mut lo = index_box.lo.clone();
    let mut hi = index_box.hi.clone();
    for a in rs.positive_roots() {
        for i in 0..a.len() {
            lo[i] -= a[i].min(0);
            hi[i] -= a[i].max(0);
        }
    }
    LatticeBox { lo, hi }
}

/// `m(k, .)` on the largest box determined by the index values on
/// `index_box`, computed as the convolution of the index character with the
/// signed character of `prod_{alpha > 0} (1 - t^{-alpha})`.
pub fn q_multiplicities(
    model: &FixedPointModel,
    rs: &RootSystem,
    k: i64,
    index_box: &LatticeBox,
    v: &Polarization,
) -> Result<FormalCharacter> {
    let out = padded_box(rs, index_box);
    if out.is_empty() {
        return Err(Error::BoxTooSmall);
    }
    let mut eval = Multiplicities::new(model, rs, v.clone())?;
    let index = eval.index_character(k, index_box);
    Ok(index.mul(&rs.denominator()).restrict(&out))
}

pub fn dominant_multiplicity(model: &FixedPointModel, rs: &RootSystem, k: i64, lambda: &[i64], v: &Polarization) -> Result<BigInt> {
    Multiplicities::new(model, rs, v.clone())?.dominant(k, lambda)
}

/// Brute-force index character: every factor `1/(1 - t^{-alpha})` is expanded
/// as a geometric series in the lexicographic regime `v = (1, N, N^2, ...)`,
/// the products are truncated once they leave the half-space that can still
/// reach the box, and the sum is restricted to the box.
pub fn truncated_series_oracle(model: &FixedPointModel, k: i64, b: &LatticeBox) -> FormalCharacter {
    if b.is_empty() {
        return FormalCharacter::new();
    }
    let bound = model.all_tangent_weights().flat_map(|w| w.iter().map(|x| x.abs())).max().unwrap_or(0);
    let n = 2 * bound as i128 + 1;
    let r = model.rank();
    let vo: Vec<i128> = (0..r).map(|i| n.pow(i as u32)).collect();
    let func = |x: &[i64]| -> i128 { x.iter().zip(&vo).map(|(a, b)| *a as i128 * b).sum() };
    let corner: Vec<i64> = (0..r).map(|i| if vo[i] > 0 { b.hi[i] } else { b.lo[i] }).collect();
    let box_max = func(&corner);

    let mut total: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
    for p in &model.points {
        let start: Vec<i64> = p.mu.iter().map(|m| k * m).collect();
        let limit = box_max - func(&start);
        if limit < 0 {
            continue;
        }
        // Sparse series in the exponent offset from t^{k mu}.
        let mut series: BTreeMap<Vec<i64>, BigInt> = BTreeMap::from([(vec![0; r], BigInt::one())]);
        for a in &p.tangent_weights {
            let fa = func(a);
            let (step, first, sign): (Vec<i64>, i64, i64) = if fa < 0 {
                (a.iter().map(|x| -x).collect(), 0, 1)
            } else {
                (a.clone(), 1, -1)
            };
            let h = func(&step);
            let mut next: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
            for (x, c) in &series {
                let mut m = first;
                loop {
                    let y: Vec<i64> = x.iter().zip(&step).map(|(xi, si)| xi + m * si).collect();
                    if func(&y) > limit {
                        break;
                    }
                    *next.entry(y).or_insert_with(BigInt::zero) += c * BigInt::from(sign);
                    m += 1;
                    debug_assert!(h > 0);
                }
            }
            series = next;
        }
        for (x, c) in series {
            let w: Vec<i64> = x.iter().zip(&start).map(|(a, b)| a + b).collect();
            if b.contains(&w) {
                *total.entry(w).or_insert_with(BigInt::zero) += c;
            }
        }
    }
    total.into_iter().collect()
}

/// `true` if `m(k, w(mu + rho) - rho) = (-1)^{l(w)} m(k, mu)` whenever both
/// points lie in the support box of `c`.
pub fn is_shifted_antisymmetric(c: &FormalCharacter, rs: &RootSystem, b: &LatticeBox) -> bool {
    for mu in b.points() {
        let value = c.coefficient(&mu);
        for w in rs.weyl_group() {
            let img = rs.shifted_action(w, &mu);
            if b.contains(&img) && c.coefficient(&img) != &value * BigInt::from(w.sign()) {
                return false;
            }
        }
    }
    true
}

/// Value of `m` as an `i64`, for tables and fitting.
pub fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("multiplicity exceeds i64")
}
