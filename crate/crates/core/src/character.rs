//! Finitely supported integer-valued functions on the weight lattice, i.e.
//! virtual characters of the torus.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `sum_lambda c_lambda t^lambda` with finite support and no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalCharacter {
    coeffs: BTreeMap<Vec<i64>, BigInt>,
}

impl FormalCharacter {
    pub fn new() -> Self {
        Self::default()
    }

    /// A single `+1` at `weight`.
    pub fn spike(weight: Vec<i64>) -> Self {
        let mut c = Self::new();
        c.add_term(weight, BigInt::one());
        c
    }

    pub fn add_term(&mut self, weight: Vec<i64>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(weight);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn coefficient(&self, weight: &[i64]) -> BigInt {
        self.coeffs.get(weight).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    /// Product of characters (convolution of multiplicity functions).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let w = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(w, ca * cb);
            }
        }
        out
    }

    pub fn restrict(&self, b: &LatticeBox) -> Self {
        Self {
            coeffs: self.coeffs.iter().filter(|(w, _)| b.contains(w)).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    /// Sum of all coefficients (the virtual dimension).
    pub fn total(&self) -> BigInt {
        self.coeffs.values().sum()
    }
}

impl FromIterator<(Vec<i64>, BigInt)> for FormalCharacter {
    fn from_iter<I: IntoIterator<Item = (Vec<i64>, BigInt)>>(iter: I) -> Self {
        let mut c = Self::new();
        for (w, v) in iter {
            c.add_term(w, v);
        }
        c
    }
}

/// Inclusive coordinate box `lo <= x <= hi` in the weight lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl LatticeBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        Ok(Self { lo, hi })
    }

    pub fn rank(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.lo.len() && x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (l, h))| l <= v && v <= h)
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        self.lo.iter().zip(&self.hi).map(|(l, h)| (h - l + 1) as usize).product()
    }

    /// Lattice points in lexicographic order. The rank-0 box has one point.
    pub fn points(&self) -> Vec<Vec<i64>> {
        if self.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Vec::with_capacity(self.rank())];
        for (l, h) in self.lo.iter().zip(&self.hi) {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (*l..=*h).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// Parse `"lo:hi"` (applied to every coordinate) or `"lo:hi,lo:hi,..."`.
    pub fn parse(s: &str, rank: usize) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::Parse(format!("bad box '{s}', expected lo:hi per coordinate"));
        let mut ranges = Vec::new();
        for p in &parts {
            let (l, h) = p.split_once(':').ok_or_else(bad)?;
            let l: i64 = l.trim().parse().map_err(|_| bad())?;
            let h: i64 = h.trim().parse().map_err(|_| bad())?;
            ranges.push((l, h));
        }
        if ranges.len() == 1 && rank != 1 {
            ranges = vec![ranges[0]; rank];
        }
        if ranges.len() != rank {
            return Err(Error::DimensionMismatch { expected: rank, found: ranges.len() });
        }
        Ok(Self { lo: ranges.iter().map(|r| r.0).collect(), hi: ranges.iter().map(|r| r.1).collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut c = FormalCharacter::spike(vec![1]);
        c.add_term(vec![1], BigInt::from(-1));
        assert!(c.is_zero());
    }

    #[test]
    fn product_of_binomials() {
        // (1 + t)(1 - t) = 1 - t^2
        let a: FormalCharacter = [(vec![0], BigInt::one()), (vec![1], BigInt::one())].into_iter().collect();
        let b: FormalCharacter = [(vec![0], BigInt::one()), (vec![1], BigInt::from(-1))].into_iter().collect();
        let p = a.mul(&b);
        assert_eq!(p.support_len(), 2);
        assert_eq!(p.coefficient(&[2]), BigInt::from(-1));
        assert_eq!(p.coefficient(&[1]), BigInt::zero());
    }

    #[test]
    fn box_points() {
        let b = LatticeBox::parse("-1:1,0:1", 2).unwrap();
        assert_eq!(b.points().len(), 6);
        assert_eq!(b.len(), 6);
        let e = LatticeBox::parse("2:1", 1).unwrap();
        assert!(e.is_empty());
        assert!(e.points().is_empty());
        assert_eq!(LatticeBox::new(vec![], vec![]).unwrap().points(), vec![Vec::<i64>::new()]);
    }
}
