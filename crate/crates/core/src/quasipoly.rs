//! Quasi-polynomials on `Z x Lambda` and on rays, with exact fitting.
//!
//! A quasi-polynomial is stored as a period lattice `Gamma'` (Hermite basis,
//! always containing `N Z^n` for a scalar modulus `N`) and one polynomial in
//! the global coordinates `(k, lambda_1, ..., lambda_r)` per coset.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::RationalPolytope;
use crate::linalg::{self, fmt_q, q, QVec, Q};

pub const DEFAULT_HORIZON: i64 = 30;
pub const DEFAULT_PERIOD_BOUND: i64 = 12;

/// Exponent vector -> coefficient, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(n: usize, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![0; n], c);
        p
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(exponents.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&exponents);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn eval(&self, x: &[i64]) -> Q {
        let mut total = Q::zero();
        for (e, c) in &self.terms {
            let mut m = BigInt::one();
            for (xi, &ei) in x.iter().zip(e) {
                m *= num_traits::pow(BigInt::from(*xi), ei as usize);
            }
            total += c * Q::from_integer(m);
        }
        total
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

/// All exponent vectors of total degree `<= d` in `n` variables, graded
/// lexicographic.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    for total in 0..=d {
        let mut level = vec![Vec::new()];
        for i in 0..n {
            level = level
                .into_iter()
                .flat_map(|p: Vec<u32>| {
                    let used: u32 = p.iter().sum();
                    let range: Vec<u32> = if i + 1 == n { vec![total - used] } else { (0..=total - used).collect() };
                    range.into_iter().rev().map(move |x| [p.clone(), vec![x]].concat())
                })
                .collect();
        }
        if n == 0 && total > 0 {
            continue;
        }
        out.extend(level);
    }
    out
}

fn monomial_row(x: &[i64], monos: &[Vec<u32>]) -> QVec {
    monos
        .iter()
        .map(|e| {
            let mut m = BigInt::one();
            for (xi, &ei) in x.iter().zip(e) {
                m *= num_traits::pow(BigInt::from(*xi), ei as usize);
            }
            Q::from_integer(m)
        })
        .collect()
}

/// Incrementally maintained reduced row echelon form of an augmented system.
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: Vec<(usize, QVec, Q)>,
    ncols: usize,
}

impl Echelon {
    fn new(ncols: usize) -> Self {
        Self { rows: Vec::new(), ncols }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `a . x = b`. Returns `false` if the system became inconsistent.
    fn push(&mut self, mut a: QVec, mut b: Q) -> bool {
        for (p, row, rb) in &self.rows {
            if !a[*p].is_zero() {
                let f = a[*p].clone();
                for j in 0..self.ncols {
                    let t = &f * &row[j];
                    a[j] -= t;
                }
                b -= &f * rb;
            }
        }
        let Some(p) = a.iter().position(|x| !x.is_zero()) else {
            return b.is_zero();
        };
        let inv = a[p].recip();
        a.iter_mut().for_each(|x| *x *= &inv);
        b *= &inv;
        for (_, row, rb) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for j in 0..self.ncols {
                    let t = &f * &a[j];
                    row[j] -= t;
                }
                *rb -= &f * &b;
            }
        }
        self.rows.push((p, a, b));
        true
    }

    /// Would adding `a` raise the rank?
    fn is_independent(&self, a: &[Q]) -> bool {
        let mut a = a.to_vec();
        for (p, row, _) in &self.rows {
            if !a[*p].is_zero() {
                let f = a[*p].clone();
                for j in 0..self.ncols {
                    let t = &f * &row[j];
                    a[j] -= t;
                }
            }
        }
        a.iter().any(|x| !x.is_zero())
    }

    /// The solution with all free variables set to zero.
    fn solution(&self) -> QVec {
        let mut x = linalg::zeros(self.ncols);
        for (p, _, b) in &self.rows {
            x[*p] = b.clone();
        }
        x
    }
}

/// Sets on which quasi-polynomials are fitted and compared.
pub trait FitDomain {
    fn ambient_rank(&self) -> usize;
    /// All lattice points of the domain with first coordinate `k`.
    fn points_at_depth(&self, k: i64) -> Vec<Vec<i64>>;
    fn contains(&self, x: &[i64]) -> bool;
    /// Basis of the lattice generated by the domain points.
    fn lattice_basis(&self) -> Vec<Vec<i64>>;
}

/// `C_p = {(t, t tau) : t > 0, tau in p}`.
#[derive(Clone, Debug)]
pub struct ConeRegion {
    pub base: RationalPolytope,
}

impl ConeRegion {
    pub fn new(base: RationalPolytope) -> Self {
        Self { base }
    }

    pub fn lattice_rank(&self) -> usize {
        self.base.ambient_dim()
    }
}

impl FitDomain for ConeRegion {
    fn ambient_rank(&self) -> usize {
        1 + self.lattice_rank()
    }

    fn points_at_depth(&self, k: i64) -> Vec<Vec<i64>> {
        if k <= 0 {
            return Vec::new();
        }
        let (lo, hi) = self.base.dilated_bounding_box(k);
        let b = crate::character::LatticeBox { lo, hi };
        b.points()
            .into_iter()
            .filter(|l| {
                let x: QVec = l.iter().map(|&c| linalg::qf(c, k)).collect();
                self.base.contains(&x)
            })
            .map(|l| std::iter::once(k).chain(l).collect())
            .collect()
    }

    fn contains(&self, x: &[i64]) -> bool {
        x[0] > 0 && self.base.contains(&x[1..].iter().map(|&c| linalg::qf(c, x[0])).collect::<Vec<_>>())
    }

    fn lattice_basis(&self) -> Vec<Vec<i64>> {
        // Integer points of the linear span of {(1, v) : v in p}.
        let spans: Vec<QVec> = self
            .base
            .vertices()
            .iter()
            .map(|v| std::iter::once(Q::one()).chain(v.iter().cloned()).collect())
            .collect();
        let basis = linalg::span_basis(&spans);
        let perp = linalg::nullspace(&basis, self.ambient_rank());
        let rows: Vec<Vec<i64>> = perp.iter().map(|v| linalg::primitive(v)).collect();
        linalg::int_kernel(&rows, self.ambient_rank())
    }
}

/// The ray `k -> (k, k xi)` restricted to `k in n_xi Z_{>0}`, in the single
/// coordinate `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayDomain {
    pub step: i64,
}

impl FitDomain for RayDomain {
    fn ambient_rank(&self) -> usize {
        1
    }

    fn points_at_depth(&self, k: i64) -> Vec<Vec<i64>> {
        if k > 0 && k % self.step == 0 {
            vec![vec![k]]
        } else {
            Vec::new()
        }
    }

    fn contains(&self, x: &[i64]) -> bool {
        x[0] > 0 && x[0] % self.step == 0
    }

    fn lattice_basis(&self) -> Vec<Vec<i64>> {
        vec![vec![self.step]]
    }
}

#[derive(Clone, Debug)]
pub struct FitOptions {
    pub degree_bound: u32,
    pub period_bound: i64,
    pub horizon: i64,
}

impl FitOptions {
    /// Defaults calibrated on the example models: period at most 12, degree at
    /// most `dim M / 2 + 1`.
    pub fn for_dimension(dim_m: usize) -> Self {
        Self { degree_bound: (dim_m / 2 + 1) as u32, period_bound: DEFAULT_PERIOD_BOUND, horizon: DEFAULT_HORIZON }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPolynomial {
    ambient_rank: usize,
    modulus: i64,
    /// Hermite basis of the period lattice, one vector per row.
    period_basis: Vec<Vec<i64>>,
    cosets: BTreeMap<Vec<i64>, Polynomial>,
}

impl QuasiPolynomial {
    /// A quasi-polynomial with period lattice `modulus * Z^n`; missing
    /// residues are zero.
    pub fn from_residues(ambient_rank: usize, modulus: i64, polys: BTreeMap<Vec<i64>, Polynomial>) -> Self {
        let basis: Vec<Vec<i64>> =
            (0..ambient_rank).map(|i| (0..ambient_rank).map(|j| if i == j { modulus } else { 0 }).collect()).collect();
        Self { ambient_rank, modulus, period_basis: basis, cosets: polys }
    }

    pub fn constant(ambient_rank: usize, c: Q) -> Self {
        Self::from_residues(ambient_rank, 1, BTreeMap::from([(vec![0; ambient_rank], Polynomial::constant(ambient_rank, c))]))
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// Scalar `N` with `N Z^n` inside the period lattice.
    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn period_basis(&self) -> &[Vec<i64>] {
        &self.period_basis
    }

    /// `|Z^n / Gamma'|`.
    pub fn period_index(&self) -> i64 {
        self.period_basis.iter().enumerate().map(|(i, b)| b[i]).product()
    }

    pub fn degree(&self) -> u32 {
        self.cosets.values().map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn cosets(&self) -> &BTreeMap<Vec<i64>, Polynomial> {
        &self.cosets
    }

    pub fn coset_of(&self, x: &[i64]) -> Vec<i64> {
        linalg::reduce_mod_hermite(x, &self.period_basis)
    }

    pub fn polynomial_at(&self, x: &[i64]) -> Polynomial {
        self.cosets.get(&self.coset_of(x)).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &[i64]) -> Q {
        self.cosets.get(&self.coset_of(x)).map_or_else(Q::zero, |p| p.eval(x))
    }

    /// Does `v` lie in the period lattice?
    pub fn is_period(&self, v: &[i64]) -> bool {
        self.coset_of(v).iter().all(|&c| c == 0)
    }

    /// Merge residue classes mod `N` that carry the same polynomial along a
    /// subgroup, giving the coarsest period lattice compatible with the
    /// data.
    fn refine(mut self) -> Self {
        let n = self.ambient_rank;
        let m = self.modulus;
        if m == 1 {
            return self;
        }
        let residues = crate::character::LatticeBox { lo: vec![0; n], hi: vec![m - 1; n] }.points();
        let class = |r: &[i64]| -> Vec<i64> { r.iter().map(|x| x.rem_euclid(m)).collect() };
        let mut gens: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| if i == j { m } else { 0 }).collect()).collect();
        for h in &residues {
            if h.iter().all(|&x| x == 0) {
                continue;
            }
            let invariant = residues.iter().all(|r| {
                let s: Vec<i64> = r.iter().zip(h).map(|(a, b)| a + b).collect();
                self.cosets.get(&class(r)) == self.cosets.get(&class(&s))
            });
            if invariant {
                gens.push(h.clone());
            }
        }
        let basis = linalg::hermite_basis(&gens, n).expect("contains m Z^n");
        let mut cosets = BTreeMap::new();
        for (r, p) in std::mem::take(&mut self.cosets) {
            cosets.entry(linalg::reduce_mod_hermite(&r, &basis)).or_insert(p);
        }
        self.period_basis = basis;
        self.cosets = cosets;
        self
    }

    pub fn to_document(&self) -> QuasiPolynomialDocument {
        QuasiPolynomialDocument {
            ambient_rank: self.ambient_rank,
            modulus: self.modulus,
            period_matrix: self.period_basis.clone(),
            degree: self.degree(),
            cosets: self
                .cosets
                .iter()
                .map(|(rep, p)| CosetDocument {
                    rep: rep.clone(),
                    monomial_coefficients: p
                        .terms()
                        .map(|(e, c)| MonomialDocument { exponents: e.clone(), coefficient: fmt_q(c) })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &QuasiPolynomialDocument) -> Result<Self> {
        let n = doc.ambient_rank;
        let basis = linalg::hermite_basis(&doc.period_matrix, n)?;
        let mut cosets = BTreeMap::new();
        for c in &doc.cosets {
            let mut p = Polynomial::zero();
            for t in &c.monomial_coefficients {
                if t.exponents.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: t.exponents.len() });
                }
                p.add_term(t.exponents.clone(), linalg::parse_q(&t.coefficient)?);
            }
            cosets.insert(linalg::reduce_mod_hermite(&c.rep, &basis), p);
        }
        Ok(Self { ambient_rank: n, modulus: doc.modulus, period_basis: basis, cosets })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialDocument {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetDocument {
    pub rep: Vec<i64>,
    pub monomial_coefficients: Vec<MonomialDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiPolynomialDocument {
    pub ambient_rank: usize,
    pub modulus: i64,
    /// Rows generate the period lattice.
    pub period_matrix: Vec<Vec<i64>>,
    pub degree: u32,
    pub cosets: Vec<CosetDocument>,
}

/// Values of a sampler on the domain up to depth `horizon`.
pub fn sample<D: FitDomain + ?Sized>(
    sampler: &mut dyn FnMut(&[i64]) -> BigInt,
    domain: &D,
    horizon: i64,
) -> Vec<(Vec<i64>, BigInt)> {
    (1..=horizon).flat_map(|k| domain.points_at_depth(k)).map(|x| {
        let v = sampler(&x);
        (x, v)
    }).collect()
}

/// Smallest modulus, then smallest degree, whose per-class interpolants fitted
/// on `k <= horizon/2` reproduce every sample with `horizon/2 < k <= horizon`.
pub fn fit<D: FitDomain + ?Sized>(
    sampler: &mut dyn FnMut(&[i64]) -> BigInt,
    domain: &D,
    opts: &FitOptions,
) -> Result<QuasiPolynomial> {
    let samples = sample(sampler, domain, opts.horizon);
    fit_samples(&samples, domain.ambient_rank(), opts)
}

pub fn fit_samples(samples: &[(Vec<i64>, BigInt)], n: usize, opts: &FitOptions) -> Result<QuasiPolynomial> {
    let split = opts.horizon / 2;
    for m in 1..=opts.period_bound {
        let mut classes: BTreeMap<Vec<i64>, Vec<&(Vec<i64>, BigInt)>> = BTreeMap::new();
        for s in samples {
            classes.entry(s.0.iter().map(|x| x.rem_euclid(m)).collect()).or_default().push(s);
        }
        'degree: for d in 0..=opts.degree_bound {
            let monos = monomials(n, d);
            let mut polys = BTreeMap::new();
            for (r, pts) in &classes {
                let mut sys = Echelon::new(monos.len());
                let mut held = Vec::new();
                for (x, v) in pts {
                    if x[0] <= split {
                        if !sys.push(monomial_row(x, &monos), Q::from_integer(v.clone())) {
                            continue 'degree;
                        }
                    } else {
                        held.push((x, v));
                    }
                }
                if held.len() < sys.rank().max(1) {
                    continue 'degree;
                }
                let sol = sys.solution();
                let mut poly = Polynomial::zero();
                for (e, c) in monos.iter().zip(&sol) {
                    poly.add_term(e.clone(), c.clone());
                }
                for (x, v) in held {
                    let row = monomial_row(x, &monos);
                    if sys.is_independent(&row) || poly.eval(x) != Q::from_integer(v.clone()) {
                        continue 'degree;
                    }
                }
                polys.insert(r.clone(), poly);
            }
            return Ok(QuasiPolynomial::from_residues(n, m, polys).refine());
        }
    }
    Err(Error::NotQuasiPolynomial { period: opts.period_bound, degree: opts.degree_bound })
}

/// `f_xi(k) = qp(k, k xi)` on `n_xi Z_{>0}`, as a one-variable
/// quasi-polynomial with modulus `n_xi N`.
pub fn restrict_to_ray(qp: &QuasiPolynomial, region: &ConeRegion, xi: &[Q]) -> Result<(QuasiPolynomial, RayDomain)> {
    if xi.len() + 1 != qp.ambient_rank() {
        return Err(Error::DimensionMismatch { expected: qp.ambient_rank() - 1, found: xi.len() });
    }
    if !region.base.contains(xi) {
        return Err(Error::NotInRegion(linalg::fmt_qvec(xi)));
    }
    let n_xi = ray_step(xi);
    let modulus = n_xi * qp.modulus();
    let mut polys = BTreeMap::new();
    for c in (0..modulus).step_by(n_xi as usize) {
        let point: Vec<i64> = std::iter::once(c)
            .chain(xi.iter().map(|x| linalg::to_int(&[x * q(c)]).expect("multiple of n_xi")[0]))
            .collect();
        let p = qp.polynomial_at(&point);
        let mut f = Polynomial::zero();
        for (e, coeff) in p.terms() {
            let mut factor = coeff.clone();
            for (x, &ei) in xi.iter().zip(&e[1..]) {
                factor *= num_traits::pow(x.clone(), ei as usize);
            }
            f.add_term(vec![e.iter().sum()], factor);
        }
        polys.insert(vec![c], f);
    }
    Ok((QuasiPolynomial::from_residues(1, modulus, polys).refine(), RayDomain { step: n_xi }))
}

/// Least `n > 0` with `n xi` integral.
pub fn ray_step(xi: &[Q]) -> i64 {
    let d = linalg::common_denominator(xi);
    i64::try_from(d).expect("denominator overflow")
}

/// Exact comparison on the domain: on every residue class modulo the common
/// modulus that meets the lattice of the domain, the difference polynomial
/// must vanish on that class, which is checked on a unisolvent grid.
pub fn equals<D: FitDomain + ?Sized>(a: &QuasiPolynomial, b: &QuasiPolynomial, domain: &D) -> bool {
    if a.ambient_rank() != b.ambient_rank() || a.ambient_rank() != domain.ambient_rank() {
        return false;
    }
    let l = a.modulus().lcm(&b.modulus());
    let basis = domain.lattice_basis();
    let m = basis.len();
    let deg = a.degree().max(b.degree()) as i64;
    let phi = |y: &[i64]| -> Vec<i64> {
        (0..a.ambient_rank()).map(|i| basis.iter().zip(y).map(|(bv, yi)| bv[i] * yi).sum()).collect()
    };
    let reps = crate::character::LatticeBox { lo: vec![0; m], hi: vec![l - 1; m] }.points();
    let grid = crate::character::LatticeBox { lo: vec![0; m], hi: vec![deg; m] }.points();
    for y0 in &reps {
        let x0 = phi(y0);
        let diff = a.polynomial_at(&x0).sub(&b.polynomial_at(&x0));
        if diff.is_zero() {
            continue;
        }
        for g in &grid {
            let y: Vec<i64> = y0.iter().zip(g).map(|(a, b)| a + l * b).collect();
            if !diff.eval(&phi(&y)).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Fitted values are integers on every sampled point.
pub fn integral_on(qp: &QuasiPolynomial, samples: &[(Vec<i64>, BigInt)]) -> bool {
    samples.iter().all(|(x, _)| qp.eval(x).is_integer())
}

/// Values of `qp` as integers, failing loudly if not integral.
pub fn eval_int(qp: &QuasiPolynomial, x: &[i64]) -> BigInt {
    let v = qp.eval(x);
    assert!(v.is_integer(), "quasi-polynomial value at {x:?} is not integral");
    v.to_integer()
}

pub fn is_nonnegative_on(qp: &QuasiPolynomial, samples: &[(Vec<i64>, BigInt)]) -> bool {
    samples.iter().all(|(x, _)| !qp.eval(x).is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qf, to_q};

    fn interval(a: i64, b: i64) -> ConeRegion {
        ConeRegion::new(RationalPolytope::from_points(&[to_q(&[a]), to_q(&[b])]).unwrap())
    }

    fn opts(d: u32) -> FitOptions {
        FitOptions { degree_bound: d, period_bound: 12, horizon: 30 }
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 0), vec![vec![0, 0]]);
        assert_eq!(monomials(2, 1).len(), 3);
        assert_eq!(monomials(3, 2).len(), 10);
        assert_eq!(monomials(1, 3), vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn constant_on_symmetric_cone() {
        let r = interval(-1, 1);
        let qp = fit(&mut |_| BigInt::one(), &r, &opts(2)).unwrap();
        assert_eq!(qp.modulus(), 1);
        assert_eq!(qp.degree(), 0);
        assert_eq!(qp.eval(&[7, -3]), q(1));
    }

    #[test]
    fn half_count_on_a_ray() {
        // #(Z ∩ [0, k/2])
        let ray = RayDomain { step: 1 };
        let qp = fit(&mut |x| BigInt::from(x[0].div_euclid(2) + 1), &ray, &opts(2)).unwrap();
        assert_eq!(qp.modulus(), 2);
        assert_eq!(qp.polynomial_at(&[4]).eval(&[4]), q(3));
        let even = qp.polynomial_at(&[0]);
        let odd = qp.polynomial_at(&[1]);
        assert_eq!(even.eval(&[10]), q(6));
        assert_eq!(odd.eval(&[11]), q(6));
        assert_eq!(even.degree(), 1);
    }

    #[test]
    fn parity_lattice_is_refined() {
        let r = ConeRegion::new(
            RationalPolytope::from_points(&[to_q(&[0, -1]), to_q(&[1, -1]), to_q(&[0, 1]), to_q(&[1, 1])]).unwrap(),
        );
        let qp = fit(&mut |x| BigInt::from(((x[0] - x[2]).rem_euclid(2) == 0) as i64), &r, &opts(2)).unwrap();
        assert_eq!(qp.modulus(), 2);
        assert_eq!(qp.period_index(), 2);
        assert!(qp.is_period(&[1, 0, 1]));
        assert!(qp.is_period(&[0, 1, 0]));
        assert!(!qp.is_period(&[1, 0, 0]));
    }

    #[test]
    fn unbounded_period_is_reported() {
        let ray = RayDomain { step: 1 };
        let err = fit(&mut |x| BigInt::from((x[0] % 13 == 0) as i64), &ray, &FitOptions { degree_bound: 1, period_bound: 6, horizon: 30 });
        assert!(matches!(err, Err(Error::NotQuasiPolynomial { period: 6, degree: 1 })));
    }

    #[test]
    fn ray_restriction() {
        let r = interval(0, 1);
        let qp = fit(&mut |_| BigInt::one(), &r, &opts(2)).unwrap();
        let (f, dom) = restrict_to_ray(&qp, &r, &[qf(1, 2)]).unwrap();
        assert_eq!(dom.step, 2);
        assert_eq!(f.eval(&[8]), q(1));
        assert!(equals(&f, &QuasiPolynomial::constant(1, q(1)), &dom));
        assert!(matches!(restrict_to_ray(&qp, &r, &[q(2)]), Err(Error::NotInRegion(_))));
        let (f0, d0) = restrict_to_ray(&qp, &r, &[q(0)]).unwrap();
        assert_eq!(d0.step, 1);
        assert_eq!(f0.eval(&[5]), q(1));
    }

    #[test]
    fn ray_step_of_cp2_barycentre() {
        assert_eq!(ray_step(&[qf(1, 3), qf(1, 3)]), 3);
        assert_eq!(ray_step(&[qf(1, 2), qf(2, 3)]), 6);
    }

    #[test]
    fn equality_examples() {
        let r = interval(0, 1);
        let one = QuasiPolynomial::constant(2, q(1));
        assert!(equals(&one, &one, &r));
        let mut polys = BTreeMap::new();
        for c in [vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]] {
            polys.insert(c, Polynomial::constant(2, q(1)));
        }
        let periodic = QuasiPolynomial::from_residues(2, 2, polys);
        assert!(equals(&one, &periodic, &r));
        let ray = RayDomain { step: 1 };
        let floor = fit(&mut |x| BigInt::from(x[0].div_euclid(2) + 1), &ray, &opts(2)).unwrap();
        assert!(!equals(&QuasiPolynomial::constant(1, q(1)), &floor, &ray));
    }

    #[test]
    fn document_round_trip() {
        let ray = RayDomain { step: 1 };
        let qp = fit(&mut |x| BigInt::from(x[0].div_euclid(2) + 1), &ray, &opts(2)).unwrap();
        let doc = qp.to_document();
        let json = serde_json::to_string(&doc).unwrap();
        let back: QuasiPolynomialDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(QuasiPolynomial::from_document(&back).unwrap(), qp);
    }
}
