//! Built-in example models.
//!
//! All weights follow the convention of [`crate::localization`]: at a fixed
//! point, the tangent weight of an invariant sphere is minus the direction in
//! which the moment map moves along it.

use crate::error::{Error, Result};
use crate::linalg::{q, qf, to_q};
use crate::localization::{Edge, FixedPoint, FixedPointModel};
use crate::root_lattice::{RootSystem, WeightLattice};

pub const NAMES: &[&str] = &[
    "cp1",
    "cp1-shifted",
    "cp2",
    "s2-symmetric",
    "p1xp1",
    "p1xp1-weight2",
    "su2-orbit",
    "p1xp1-su2-diagonal",
    "su3-flag",
];

pub fn describe(name: &str) -> &'static str {
    match name {
        "cp1" => "CP^1 with O(1), circle acting with weight 1; moment polytope [0,1]",
        "cp1-shifted" => "CP^1 with the prequantum weights shifted by one; moment polytope [1,2]",
        "cp2" => "CP^2 with O(1) and the standard 2-torus; moment polytope the standard simplex",
        "s2-symmetric" => "the unit sphere with height function moment map; moment polytope [-1,1]",
        "p1xp1" => "product of two copies of cp1",
        "p1xp1-weight2" => "CP^1 x CP^1 with the second circle acting with weight 2; generic stabiliser Z/2",
        "su2-orbit" => "the regular SU(2) coadjoint orbit through rho, in root coordinates",
        "p1xp1-su2-diagonal" => "diagonal SU(2) action on two copies of su2-orbit",
        "su3-flag" => "the full flag manifold of SU(3) as the coadjoint orbit through rho, in fundamental weight coordinates",
        _ => "",
    }
}

pub fn by_name(name: &str) -> Result<FixedPointModel> {
    match name {
        "cp1" => Ok(cp1()),
        "cp1-shifted" => Ok(cp1_shifted()),
        "cp2" => Ok(cp2()),
        "s2-symmetric" => Ok(s2_symmetric()),
        "p1xp1" => product("p1xp1", &cp1(), &cp1()),
        "p1xp1-weight2" => Ok(p1xp1_weight2()),
        "su2-orbit" => Ok(su2_orbit()),
        "p1xp1-su2-diagonal" => diagonal_product("p1xp1-su2-diagonal", &su2_orbit(), &su2_orbit()),
        "su3-flag" => Ok(su3_flag()),
        _ => Err(Error::UnknownExample(name.to_string())),
    }
}

/// Two fixed points joined by one sphere, moment values `lo < hi`, weight
/// `w > 0` at the top.
fn segment(name: &str, lo: i64, hi: i64, w: i64) -> FixedPointModel {
    let points = vec![
        FixedPoint { mu: vec![lo], tangent_weights: vec![vec![-w]] },
        FixedPoint { mu: vec![hi], tangent_weights: vec![vec![w]] },
    ];
    let edges = vec![Edge { from: 0, to: 1, weight: vec![-w] }];
    FixedPointModel::new(name, WeightLattice::standard(1), vec![], points, Some(edges)).expect("valid corpus model")
}

pub fn cp1() -> FixedPointModel {
    segment("cp1", 0, 1, 1)
}

pub fn cp1_shifted() -> FixedPointModel {
    segment("cp1-shifted", 1, 2, 1)
}

pub fn s2_symmetric() -> FixedPointModel {
    segment("s2-symmetric", -1, 1, 1)
}

pub fn cp2() -> FixedPointModel {
    let points = vec![
        FixedPoint { mu: vec![0, 0], tangent_weights: vec![vec![-1, 0], vec![0, -1]] },
        FixedPoint { mu: vec![1, 0], tangent_weights: vec![vec![1, 0], vec![1, -1]] },
        FixedPoint { mu: vec![0, 1], tangent_weights: vec![vec![0, 1], vec![-1, 1]] },
    ];
    let edges = vec![
        Edge { from: 0, to: 1, weight: vec![1, 0] },
        Edge { from: 0, to: 2, weight: vec![0, 1] },
        Edge { from: 1, to: 2, weight: vec![1, -1] },
    ];
    FixedPointModel::new("cp2", WeightLattice::standard(2), vec![], points, Some(edges)).expect("valid corpus model")
}

pub fn p1xp1_weight2() -> FixedPointModel {
    let mut points = Vec::new();
    for a in [0, 1] {
        for b in [-1, 1] {
            let w1 = if a == 0 { vec![-1, 0] } else { vec![1, 0] };
            let w2 = vec![0, 2 * b];
            points.push(FixedPoint { mu: vec![a, b], tangent_weights: vec![w1, w2] });
        }
    }
    // Index = 2a + (b+1)/2.
    let edges = vec![
        Edge { from: 0, to: 2, weight: vec![-1, 0] },
        Edge { from: 1, to: 3, weight: vec![-1, 0] },
        Edge { from: 0, to: 1, weight: vec![0, -2] },
        Edge { from: 2, to: 3, weight: vec![0, -2] },
    ];
    FixedPointModel::new("p1xp1-weight2", WeightLattice::standard(2), vec![], points, Some(edges))
        .expect("valid corpus model")
}

fn a1_lattice() -> WeightLattice {
    WeightLattice::new(vec![vec![qf(1, 2)]]).expect("positive")
}

pub fn su2_orbit() -> FixedPointModel {
    let points = vec![
        FixedPoint { mu: vec![1], tangent_weights: vec![vec![2]] },
        FixedPoint { mu: vec![-1], tangent_weights: vec![vec![-2]] },
    ];
    let edges = vec![Edge { from: 0, to: 1, weight: vec![2] }];
    FixedPointModel::new("su2-orbit", a1_lattice(), vec![vec![2]], points, Some(edges))
        .expect("valid corpus model")
        .with_declared_polytope(vec![vec![q(1)]])
}

pub fn su3_flag() -> FixedPointModel {
    let lattice = WeightLattice::new(vec![vec![qf(2, 3), qf(1, 3)], vec![qf(1, 3), qf(2, 3)]]).expect("positive");
    let simple = vec![vec![2, -1], vec![-1, 2]];
    let rs = RootSystem::build(&simple, &lattice).expect("A2");
    let rho = vec![1, 1];
    let weyl = rs.weyl_group();
    let images: Vec<Vec<i64>> = weyl.iter().map(|w| w.apply(&rho)).collect();
    let points: Vec<FixedPoint> = weyl
        .iter()
        .zip(&images)
        .map(|(w, mu)| FixedPoint {
            mu: mu.clone(),
            tangent_weights: rs.positive_roots().iter().map(|a| w.apply(a)).collect(),
        })
        .collect();
    let mut edges = Vec::new();
    for (i, w) in weyl.iter().enumerate() {
        for a in rs.positive_roots() {
            let wa = w.apply(a);
            // w s_a rho = w rho - <rho, a^vee> w a
            let c = (q(2) * lattice.inner_int(&rho, a) / lattice.inner_int(a, a)).to_integer();
            let c: i64 = c.try_into().expect("small");
            let target: Vec<i64> = images[i].iter().zip(&wa).map(|(x, y)| x - c * y).collect();
            let j = images.iter().position(|m| *m == target).expect("orbit is closed");
            if i < j {
                edges.push(Edge { from: i, to: j, weight: wa });
            }
        }
    }
    FixedPointModel::new("su3-flag", lattice, simple, points, Some(edges))
        .expect("valid corpus model")
        .with_declared_polytope(vec![to_q(&rho)])
}

/// Direct product: the lattices and root systems add up.
pub fn product(name: &str, a: &FixedPointModel, b: &FixedPointModel) -> Result<FixedPointModel> {
    let (ra, rb) = (a.rank(), b.rank());
    let lattice = a.lattice.direct_sum(&b.lattice);
    let pad_a = |x: &Vec<i64>| -> Vec<i64> { x.iter().copied().chain(std::iter::repeat_n(0, rb)).collect() };
    let pad_b = |x: &Vec<i64>| -> Vec<i64> { std::iter::repeat_n(0, ra).chain(x.iter().copied()).collect() };
    let roots = a.simple_roots.iter().map(pad_a).chain(b.simple_roots.iter().map(pad_b)).collect();
    let nb = b.points.len();
    let mut points = Vec::new();
    for p in &a.points {
        for r in &b.points {
            points.push(FixedPoint {
                mu: p.mu.iter().chain(&r.mu).copied().collect(),
                tangent_weights: p.tangent_weights.iter().map(pad_a).chain(r.tangent_weights.iter().map(pad_b)).collect(),
            });
        }
    }
    let edges = product_edges(a, b, nb, pad_a, pad_b);
    let declared = match (&a.declared_polytope, &b.declared_polytope) {
        (None, None) => None,
        _ => {
            let va = a.declared_polytope.clone().unwrap_or_else(|| a.points.iter().map(|p| to_q(&p.mu)).collect());
            let vb = b.declared_polytope.clone().unwrap_or_else(|| b.points.iter().map(|p| to_q(&p.mu)).collect());
            Some(va.iter().flat_map(|x| vb.iter().map(move |y| x.iter().chain(y).cloned().collect())).collect())
        }
    };
    let mut m = FixedPointModel::new(name, lattice, roots, points, edges)?;
    m.declared_polytope = declared;
    Ok(m)
}

/// The diagonal action on a product of two models over the same group.
pub fn diagonal_product(name: &str, a: &FixedPointModel, b: &FixedPointModel) -> Result<FixedPointModel> {
    if a.lattice != b.lattice || a.simple_roots != b.simple_roots {
        return Err(Error::InvalidModel("diagonal product needs identical lattices and roots".into()));
    }
    let nb = b.points.len();
    let mut points = Vec::new();
    for p in &a.points {
        for r in &b.points {
            points.push(FixedPoint {
                mu: p.mu.iter().zip(&r.mu).map(|(x, y)| x + y).collect(),
                tangent_weights: p.tangent_weights.iter().chain(&r.tangent_weights).cloned().collect(),
            });
        }
    }
    let id = |x: &Vec<i64>| x.clone();
    let edges = product_edges(a, b, nb, id, id);
    FixedPointModel::new(name, a.lattice.clone(), a.simple_roots.clone(), points, edges)
}

fn product_edges(
    a: &FixedPointModel,
    b: &FixedPointModel,
    nb: usize,
    map_a: impl Fn(&Vec<i64>) -> Vec<i64>,
    map_b: impl Fn(&Vec<i64>) -> Vec<i64>,
) -> Option<Vec<Edge>> {
    let (ea, eb) = (a.edges.as_ref()?, b.edges.as_ref()?);
    let mut edges = Vec::new();
    for e in ea {
        for j in 0..nb {
            edges.push(Edge { from: e.from * nb + j, to: e.to * nb + j, weight: map_a(&e.weight) });
        }
    }
    for i in 0..a.points.len() {
        for e in eb {
            edges.push(Edge { from: i * nb + e.from, to: i * nb + e.to, weight: map_b(&e.weight) });
        }
    }
    Some(edges)
}

/// Models whose fixed points each carry exactly `rank` tangent weights and
/// no roots.
pub fn is_toric(model: &FixedPointModel) -> bool {
    model.simple_roots.is_empty() && model.dim() == 2 * model.rank()
}
