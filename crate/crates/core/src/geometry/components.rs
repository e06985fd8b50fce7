use std::collections::BTreeSet;

use serde_json::{json, Value};

use super::{annihilator_basis, AffineSubspace};
use crate::error::{Error, Result};
use crate::linalg::{self, fmt_qvec, to_q, QVec};
use crate::localization::FixedPointModel;

/// A connected component of the fixed locus of a subtorus, read off the GKM
/// graph.
#[derive(Clone, Debug)]
pub struct ComponentDatum {
    pub vertex_set: Vec<usize>,
    /// Basis (RREF) of the span of the tangent weights of the component.
    pub weight_span: Vec<QVec>,
    /// Integer basis of the Lie algebra of the subtorus fixing the component.
    pub subtorus_basis: Vec<Vec<i64>>,
    pub affine_hull: AffineSubspace,
    /// Normal weights at the first vertex, projected orthogonally to the
    /// weight span. As a multiset this does not depend on the vertex.
    pub normal_weights: Vec<QVec>,
    /// The same normal weights before projection.
    pub raw_normal_weights: Vec<Vec<i64>>,
}

impl ComponentDatum {
    pub fn is_point(&self) -> bool {
        self.vertex_set.len() == 1
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertex_set,
            "subtorus_basis": self.subtorus_basis,
            "affine_hull": self.affine_hull.to_json(),
            "normal_weights": self.normal_weights.iter().map(|w| fmt_qvec(w)).collect::<Vec<_>>(),
        })
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Fixed components of all subtori visible in the GKM graph.
///
/// For every span `S` of edge-weight directions, the component of `M^H`
/// (with `H` the subtorus whose Lie algebra annihilates `S`) through a vertex
/// is the connected piece of the subgraph of edges with weight in `S`.
pub fn enumerate_components(model: &FixedPointModel) -> Result<Vec<ComponentDatum>> {
    let edges = model
        .edges
        .as_ref()
        .ok_or_else(|| Error::InvalidModel("component enumeration needs GKM edges".into()))?;
    let r = model.rank();
    let n = model.points.len();
    let lattice = &model.lattice;

    let mut directions: Vec<Vec<i64>> = edges.iter().map(|e| linalg::line_direction(&e.weight)).collect();
    directions.sort();
    directions.dedup();
    if directions.len() > 20 {
        return Err(Error::InvalidModel("too many edge directions for subset enumeration".into()));
    }

    let mut spans: Vec<Vec<QVec>> = Vec::new();
    for mask in 0u64..(1 << directions.len()) {
        let vs: Vec<QVec> = (0..directions.len()).filter(|i| mask >> i & 1 == 1).map(|i| to_q(&directions[i])).collect();
        let basis = linalg::span_basis(&vs);
        if !spans.contains(&basis) {
            spans.push(basis);
        }
    }

    let mut seen: BTreeSet<(Vec<usize>, Vec<Vec<String>>)> = BTreeSet::new();
    let mut out = Vec::new();
    for span in &spans {
        let inside: Vec<usize> = (0..edges.len()).filter(|&i| linalg::in_span(span, &to_q(&edges[i].weight))).collect();
        let mut parent: Vec<usize> = (0..n).collect();
        for &i in &inside {
            let (a, b) = (find(&mut parent, edges[i].from), find(&mut parent, edges[i].to));
            parent[a] = b;
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut root_of: Vec<usize> = Vec::new();
        for v in 0..n {
            let rt = find(&mut parent, v);
            match root_of.iter().position(|&x| x == rt) {
                Some(j) => classes[j].push(v),
                None => {
                    root_of.push(rt);
                    classes.push(vec![v]);
                }
            }
        }
        for class in classes {
            let own: Vec<QVec> = inside
                .iter()
                .filter(|&&i| class.contains(&edges[i].from))
                .map(|&i| to_q(&edges[i].weight))
                .collect();
            let weight_span = linalg::span_basis(&own);
            let key_span: Vec<Vec<String>> =
                weight_span.iter().map(|v| v.iter().map(linalg::fmt_q).collect()).collect();
            if !seen.insert((class.clone(), key_span)) {
                continue;
            }
            out.push(component_datum(model, class, weight_span, r, lattice)?);
        }
    }
    Ok(out)
}

fn component_datum(
    model: &FixedPointModel,
    vertex_set: Vec<usize>,
    weight_span: Vec<QVec>,
    r: usize,
    lattice: &crate::root_lattice::WeightLattice,
) -> Result<ComponentDatum> {
    let mus: Vec<QVec> = vertex_set.iter().map(|&v| to_q(&model.points[v].mu)).collect();
    let affine_hull = AffineSubspace::from_points(&mus);
    let span_space = AffineSubspace::new(linalg::zeros(r), &weight_span);
    if affine_hull.directions() != span_space.directions() {
        return Err(Error::InconsistentGkm(format!(
            "moment images of component {vertex_set:?} do not span the directions of its weights"
        )));
    }
    let subtorus_basis = annihilator_basis(&span_space);

    // Orthogonal complement of the weight span, as a linear subspace.
    let perp = orthogonal_complement(&weight_span, r, lattice);
    let normal_at = |v: usize| -> (Vec<Vec<i64>>, Vec<QVec>) {
        let raw: Vec<Vec<i64>> = model.points[v]
            .tangent_weights
            .iter()
            .filter(|w| !linalg::in_span(&weight_span, &to_q(w)))
            .cloned()
            .collect();
        let mut proj: Vec<QVec> = raw.iter().map(|w| perp.project(&to_q(w), lattice)).collect();
        proj.sort();
        (raw, proj)
    };
    let (raw_normal_weights, normal_weights) = normal_at(vertex_set[0]);
    for &v in &vertex_set[1..] {
        if normal_at(v).1 != normal_weights {
            return Err(Error::InconsistentGkm(format!(
                "normal weights of component {vertex_set:?} differ between vertices {} and {v}",
                vertex_set[0]
            )));
        }
    }
    Ok(ComponentDatum { vertex_set, weight_span, subtorus_basis, affine_hull, normal_weights, raw_normal_weights })
}

fn orthogonal_complement(span: &[QVec], r: usize, lattice: &crate::root_lattice::WeightLattice) -> AffineSubspace {
    // x with <x, s>_G = 0, i.e. (G s) . x = 0
    let rows: Vec<QVec> = span.iter().map(|s| linalg::mat_vec(lattice.gram(), s)).collect();
    let basis = linalg::nullspace(&rows, r);
    AffineSubspace::new(linalg::zeros(r), &basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn cp1_has_three_components() {
        let c = enumerate_components(&corpus::cp1()).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.iter().filter(|d| d.is_point()).count(), 2);
    }

    #[test]
    fn cp2_has_seven_components() {
        let c = enumerate_components(&corpus::cp2()).unwrap();
        assert_eq!(c.len(), 7);
        let dims: Vec<usize> = c.iter().map(|d| d.affine_hull.dim()).collect();
        assert_eq!(dims.iter().filter(|&&d| d == 0).count(), 3);
        assert_eq!(dims.iter().filter(|&&d| d == 1).count(), 3);
        assert_eq!(dims.iter().filter(|&&d| d == 2).count(), 1);
        for d in &c {
            assert_eq!(d.subtorus_basis.len(), 2 - d.affine_hull.dim());
            assert_eq!(d.normal_weights.len(), 2 - d.affine_hull.dim());
        }
    }

    #[test]
    fn disjoint_union_is_additive() {
        // Two copies of cp1 side by side: 3 + 3 components, plus nothing else.
        let a = corpus::cp1();
        let mut points = a.points.clone();
        points.extend(corpus::cp1_shifted().points.iter().map(|p| crate::localization::FixedPoint {
            mu: vec![p.mu[0] + 5],
            tangent_weights: p.tangent_weights.clone(),
        }));
        let edges = vec![
            crate::localization::Edge { from: 0, to: 1, weight: vec![-1] },
            crate::localization::Edge { from: 2, to: 3, weight: vec![-1] },
        ];
        let m = FixedPointModel::new("two", a.lattice.clone(), vec![], points, Some(edges)).unwrap();
        assert_eq!(enumerate_components(&m).unwrap().len(), 6);
    }

    #[test]
    fn su3_flag_components() {
        let c = enumerate_components(&corpus::su3_flag()).unwrap();
        // 6 points, 9 spheres, the whole flag manifold.
        assert_eq!(c.len(), 16);
    }
}
