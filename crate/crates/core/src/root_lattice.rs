//! Weight lattices, root systems and explicitly enumerated Weyl groups.
//!
//! Weights are integer coordinate vectors with respect to a fixed basis of the
//! weight lattice; the inner product on `t*` is given by a rational Gram
//! matrix in that basis. Root data is supplied as explicit simple roots, which
//! keeps the torus case (no roots) free of special cases.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::character::FormalCharacter;
use crate::error::{Error, Result};
use crate::linalg::{self, q, to_int, to_q, QVec, Q};

pub const DEFAULT_WEYL_BOUND: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightLattice {
    gram: Vec<QVec>,
}

impl WeightLattice {
    /// Checks symmetry and positive definiteness (leading principal minors).
    pub fn new(gram: Vec<QVec>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidLattice("gram matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidLattice("gram matrix is not symmetric".into()));
                }
            }
        }
        for k in 1..=n {
            let minor: Vec<QVec> = gram[..k].iter().map(|r| r[..k].to_vec()).collect();
            if !linalg::determinant(&minor).is_positive() {
                return Err(Error::InvalidLattice("gram matrix is not positive definite".into()));
            }
        }
        Ok(Self { gram })
    }

    pub fn standard(rank: usize) -> Self {
        let gram = (0..rank).map(|i| (0..rank).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
        Self { gram }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[QVec] {
        &self.gram
    }

    pub fn inner(&self, a: &[Q], b: &[Q]) -> Q {
        linalg::dot(a, &linalg::mat_vec(&self.gram, b))
    }

    pub fn inner_int(&self, a: &[i64], b: &[i64]) -> Q {
        self.inner(&to_q(a), &to_q(b))
    }

    pub fn norm2(&self, a: &[Q]) -> Q {
        self.inner(a, a)
    }

    /// Orthogonal sum of two lattices.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n, m) = (self.rank(), other.rank());
        let mut gram = vec![linalg::zeros(n + m); n + m];
        for i in 0..n {
            for j in 0..n {
                gram[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                gram[n + i][n + j] = other.gram[i][j].clone();
            }
        }
        Self { gram }
    }
}

/// An element of the Weyl group as an integer matrix acting on weight
/// coordinates, together with its length in the simple reflections.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub matrix: Vec<Vec<i64>>,
    pub length: usize,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        Self { matrix: identity(rank), length: 0 }
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| linalg::dot_int(row, x)).collect()
    }

    pub fn apply_q(&self, x: &[Q]) -> QVec {
        self.matrix.iter().map(|row| linalg::dot(&to_q(row), x)).collect()
    }

    /// `(-1)^{l(w)}`
    pub fn sign(&self) -> i64 {
        if self.length.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    lattice: WeightLattice,
    simple_roots: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    weyl: Vec<WeylElement>,
    rho: QVec,
}

impl RootSystem {
    /// The empty root system: `W = {1}`, `rho = 0`.
    pub fn torus(lattice: &WeightLattice) -> Self {
        Self {
            lattice: lattice.clone(),
            simple_roots: Vec::new(),
            positive_roots: Vec::new(),
            weyl: vec![WeylElement::identity(lattice.rank())],
            rho: linalg::zeros(lattice.rank()),
        }
    }

    pub fn build(simple: &[Vec<i64>], lattice: &WeightLattice) -> Result<Self> {
        Self::build_with_bound(simple, lattice, DEFAULT_WEYL_BOUND)
    }

    /// Reflection closure of the simple reflections. Lengths are breadth
    /// first word lengths.
    pub fn build_with_bound(simple: &[Vec<i64>], lattice: &WeightLattice, bound: usize) -> Result<Self> {
        let r = lattice.rank();
        for a in simple {
            if a.len() != r {
                return Err(Error::DimensionMismatch { expected: r, found: a.len() });
            }
        }
        let simple_q: Vec<QVec> = simple.iter().map(|a| to_q(a)).collect();
        if linalg::rank(&simple_q) != simple.len() {
            return Err(Error::InvalidLattice("simple roots are linearly dependent".into()));
        }
        let reflections: Vec<Vec<Vec<i64>>> =
            simple.iter().map(|a| reflection_matrix(a, lattice)).collect::<Result<_>>()?;

        let mut seen: HashMap<Vec<Vec<i64>>, usize> = HashMap::new();
        let mut weyl = vec![WeylElement::identity(r)];
        seen.insert(identity(r), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for s in &reflections {
                let m = mat_mul(&weyl[i].matrix, s);
                if !seen.contains_key(&m) {
                    if weyl.len() >= bound {
                        return Err(Error::NonFiniteSystem(bound));
                    }
                    seen.insert(m.clone(), weyl.len());
                    weyl.push(WeylElement { matrix: m, length: weyl[i].length + 1 });
                    queue.push_back(weyl.len() - 1);
                }
            }
        }

        let mut positive: Vec<Vec<i64>> = Vec::new();
        for w in &weyl {
            for a in simple {
                let root = w.apply(a);
                let coeffs = linalg::solve(&transpose_q(&simple_q), &to_q(&root), simple.len())
                    .expect("roots lie in the span of the simple roots");
                if coeffs.iter().all(|c| !c.is_negative()) && !positive.contains(&root) {
                    positive.push(root);
                }
            }
        }
        positive.sort();
        let mut rho = linalg::zeros(r);
        for a in &positive {
            rho = linalg::add(&rho, &to_q(a));
        }
        let rho = linalg::scale(&linalg::qf(1, 2), &rho);
        Ok(Self { lattice: lattice.clone(), simple_roots: simple.to_vec(), positive_roots: positive, weyl, rho })
    }

    pub fn lattice(&self) -> &WeightLattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn weyl_group(&self) -> &[WeylElement] {
        &self.weyl
    }

    pub fn rho(&self) -> &[Q] {
        &self.rho
    }

    pub fn is_torus(&self) -> bool {
        self.simple_roots.is_empty()
    }

    /// `<lambda, alpha_i> >= 0` for every simple root.
    pub fn is_dominant(&self, lambda: &[Q]) -> bool {
        self.simple_roots.iter().all(|a| !self.lattice.inner(lambda, &to_q(a)).is_negative())
    }

    pub fn is_dominant_int(&self, lambda: &[i64]) -> bool {
        self.is_dominant(&to_q(lambda))
    }

    /// `w(mu + rho) - rho`.
    pub fn shifted_action(&self, w: &WeylElement, mu: &[i64]) -> Vec<i64> {
        shifted_action(w, mu, &self.rho)
    }

    /// The multiplicity function of `chi_lambda * prod_{alpha > 0} (1 - t^{-alpha})`,
    /// i.e. `sum_w (-1)^{l(w)} t^{w(lambda + rho) - rho}`.
    pub fn weyl_numerator(&self, lambda: &[i64]) -> Result<FormalCharacter> {
        if !self.is_dominant_int(lambda) {
            return Err(Error::NotDominant(lambda.to_vec()));
        }
        let mut c = FormalCharacter::new();
        for w in &self.weyl {
            c.add_term(self.shifted_action(w, lambda), BigInt::from(w.sign()));
        }
        Ok(c)
    }

    /// The signed character of `prod_{alpha > 0} (1 - t^{-alpha})`.
    pub fn denominator(&self) -> FormalCharacter {
        let mut c = FormalCharacter::spike(vec![0; self.rank()]);
        for a in &self.positive_roots {
            let mut f = FormalCharacter::spike(vec![0; self.rank()]);
            f.add_term(a.iter().map(|x| -x).collect(), -BigInt::one());
            c = c.mul(&f);
        }
        c
    }
}

/// `w(mu + rho) - rho`; always integral because `w rho - rho` is a sum of
/// roots.
pub fn shifted_action(w: &WeylElement, mu: &[i64], rho: &[Q]) -> Vec<i64> {
    let shifted = linalg::add(&to_q(mu), rho);
    let image = linalg::sub(&w.apply_q(&shifted), rho);
    to_int(&image).expect("shifted Weyl action leaves the weight lattice")
}

fn transpose_q(cols: &[QVec]) -> Vec<QVec> {
    if cols.is_empty() {
        return Vec::new();
    }
    (0..cols[0].len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// Matrix of `x -> x - 2<x,a>/<a,a> a` on weight coordinates.
fn reflection_matrix(a: &[i64], lattice: &WeightLattice) -> Result<Vec<Vec<i64>>> {
    let aq = to_q(a);
    let norm = lattice.norm2(&aq);
    if norm.is_zero() {
        return Err(Error::InvalidLattice("zero simple root".into()));
    }
    let r = a.len();
    let mut m = identity(r);
    for j in 0..r {
        let mut e = vec![0; r];
        e[j] = 1;
        let c = q(2) * lattice.inner(&to_q(&e), &aq) / &norm;
        if !c.is_integer() {
            return Err(Error::NotCrystallographic(format!("{a:?}")));
        }
        let c: i64 = num_traits::ToPrimitive::to_i64(&c.to_integer()).expect("overflow");
        for i in 0..r {
            m[i][j] -= c * a[i];
        }
    }
    Ok(m)
}
