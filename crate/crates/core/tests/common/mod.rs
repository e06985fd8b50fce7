//! Oracles that do not go through the localization code.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use qr_core::LatticeBox;

/// Sections of the toric corpus models: the lattice points of `k` times the
/// moment polytope, with the parity constraint coming from the weight-2
/// circle in `p1xp1-weight2`.
pub fn toric_index(name: &str, k: i64, l: &[i64]) -> Option<i64> {
    let inside = match name {
        "cp1" => (0..=k).contains(&l[0]),
        "cp1-shifted" => (k..=2 * k).contains(&l[0]),
        "s2-symmetric" => (-k..=k).contains(&l[0]),
        "cp2" => l[0] >= 0 && l[1] >= 0 && l[0] + l[1] <= k,
        "p1xp1" => (0..=k).contains(&l[0]) && (0..=k).contains(&l[1]),
        "p1xp1-weight2" => (0..=k).contains(&l[0]) && (-k..=k).contains(&l[1]) && (l[1] - k).rem_euclid(2) == 0,
        _ => return None,
    };
    Some(inside as i64)
}

/// Weights of the SU(2) irreducible with highest weight `n`, in the
/// coordinate where the root is 2.
pub fn su2_irrep(n: i64) -> BTreeMap<i64, i64> {
    (0..=n).map(|j| (n - 2 * j, 1)).collect()
}

pub fn su2_tensor(a: &BTreeMap<i64, i64>, b: &BTreeMap<i64, i64>) -> BTreeMap<i64, i64> {
    let mut out = BTreeMap::new();
    for (x, c) in a {
        for (y, d) in b {
            *out.entry(x + y).or_insert(0) += c * d;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Highest-weight multiplicities of an SU(2) character, by repeatedly
/// removing the irreducible of the top weight.
pub fn su2_decompose(ch: &BTreeMap<i64, i64>) -> BTreeMap<i64, i64> {
    let mut rest = ch.clone();
    let mut out = BTreeMap::new();
    while let Some((&top, &c)) = rest.iter().next_back() {
        assert!(top >= 0 && c > 0, "not a character");
        *out.entry(top).or_insert(0) += c;
        for (w, _) in su2_irrep(top) {
            let e = rest.entry(w).or_insert(0);
            *e -= c;
            if *e == 0 {
                rest.remove(&w);
            }
        }
    }
    out
}

/// `m(k, lambda)` of the diagonal SU(2) action on two copies of the regular
/// orbit: the multiplicity of `V_lambda` in `V_k (x) V_k`.
pub fn clebsch_gordan(k: i64, lambda: i64) -> i64 {
    let v = su2_irrep(k);
    su2_decompose(&su2_tensor(&v, &v)).get(&lambda).copied().unwrap_or(0)
}

/// Weyl dimension formula for the SU(3) irreducible with highest weight
/// `a w1 + b w2`.
pub fn su3_dimension(a: i64, b: i64) -> i64 {
    (a + 1) * (b + 1) * (a + b + 2) / 2
}

/// Plain enumeration of vector partitions. Every generator must pair
/// positively with `v`; the last multiplicity is solved for directly.
pub fn naive_partitions(gens: &[Vec<i64>], target: &[i64], v: &[i64]) -> BigInt {
    fn dot(a: &[i64], b: &[i64]) -> i64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }
    fn go(gens: &[Vec<i64>], rest: Vec<i64>, v: &[i64]) -> u64 {
        match gens {
            [] => rest.iter().all(|&x| x == 0) as u64,
            [g] => {
                let (vg, vr) = (dot(v, g), dot(v, &rest));
                if vr < 0 || vr % vg != 0 {
                    return 0;
                }
                let m = vr / vg;
                rest.iter().zip(g).all(|(r, gi)| *r == m * gi) as u64
            }
            [g, tail @ ..] => {
                let (vg, vr) = (dot(v, g), dot(v, &rest));
                (0..=vr.max(-1) / vg).map(|m| go(tail, rest.iter().zip(g).map(|(r, gi)| r - m * gi).collect(), v)).sum()
            }
        }
    }
    assert!(gens.iter().all(|g| dot(v, g) > 0));
    BigInt::from(go(gens, target.to_vec(), v))
}

/// Bounding box of `k` times the fixed-point moment values, widened by `pad`.
pub fn moment_box(model: &qr_core::FixedPointModel, k: i64, pad: i64) -> LatticeBox {
    let r = model.rank();
    let lo = (0..r).map(|i| model.points.iter().map(|p| k * p.mu[i]).min().unwrap() - pad).collect();
    let hi = (0..r).map(|i| model.points.iter().map(|p| k * p.mu[i]).max().unwrap() + pad).collect();
    LatticeBox { lo, hi }
}
