//! Named example instances and seeded random instance generators, shared by
//! the test suites and the `verify` subcommand.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::complex::{SimplicialComplex, VertexId};
use crate::covers::{Codomain, Cover, CoverElement, FiniteMetricSpace, Value};

fn cycle_graph(prefix: &str, n: usize) -> SimplicialComplex {
    let vertices: Vec<VertexId> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let edges = (0..n)
        .map(|i| vec![format!("{prefix}{i}"), format!("{prefix}{}", (i + 1) % n)])
        .collect();
    SimplicialComplex::build(vertices, edges, 2).unwrap()
}

/// An 8-cycle v0..v7 carrying the tent function 0,1,2,3,4,3,2,1.
pub fn tent_complex() -> SimplicialComplex {
    cycle_graph("v", 8)
}

pub fn tent_codomain() -> Codomain {
    Codomain::real(0.0, 4.0).unwrap()
}

pub fn tent_values() -> BTreeMap<VertexId, Value> {
    let heights = [0.0, 1.0, 2.0, 3.0, 4.0, 3.0, 2.0, 1.0];
    heights
        .iter()
        .enumerate()
        .map(|(i, &h)| (format!("v{i}"), Value::Real(h)))
        .collect()
}

/// Four unit-overlap intervals of length two covering [0, 4].
pub fn cover4() -> Cover {
    let elements = (0..4)
        .map(|k| CoverElement::Interval {
            lo: k as f64 - 0.5,
            hi: k as f64 + 1.5,
        })
        .collect();
    Cover::new(tent_codomain(), elements).unwrap()
}

/// A 12-cycle graph on the points of the 12-point cycle metric, mapped by the
/// identity.
pub fn pinch_complex() -> SimplicialComplex {
    cycle_graph("p", 12)
}

pub fn pinch_metric() -> FiniteMetricSpace {
    FiniteMetricSpace::cycle(12)
}

pub fn pinch_codomain() -> Codomain {
    Codomain::FiniteMetric(pinch_metric())
}

pub fn pinch_values() -> BTreeMap<VertexId, Value> {
    (0..12)
        .map(|i| (format!("p{i}"), Value::Point(format!("p{i}"))))
        .collect()
}

/// Four arcs of nine consecutive points each; arc i omits the gap
/// {3i, 3i+1, 3i+2}. Their nerve is the boundary of the 3-simplex.
pub fn pinch_cover() -> Cover {
    let elements = (0..4)
        .map(|i| {
            let gap = [3 * i, 3 * i + 1, 3 * i + 2];
            CoverElement::Points(
                (0..12)
                    .filter(|j| !gap.contains(j))
                    .map(|j| format!("p{j}"))
                    .collect(),
            )
        })
        .collect();
    Cover::new(pinch_codomain(), elements).unwrap()
}

/// A figure eight: a flat triangle a-b-c at height 0 and a loop a-d-e-g-a
/// rising to height 2.
pub fn eight_complex() -> SimplicialComplex {
    let vertices: Vec<VertexId> = ["a", "b", "c", "d", "e", "g"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let edges: Vec<Vec<VertexId>> = [
        ["a", "b"],
        ["b", "c"],
        ["a", "c"],
        ["a", "d"],
        ["d", "e"],
        ["e", "g"],
        ["a", "g"],
    ]
    .iter()
    .map(|[u, v]| vec![u.to_string(), v.to_string()])
    .collect();
    SimplicialComplex::build(vertices, edges, 2).unwrap()
}

pub fn eight_codomain() -> Codomain {
    Codomain::real(0.0, 2.0).unwrap()
}

pub fn eight_values() -> BTreeMap<VertexId, Value> {
    [
        ("a", 0.0),
        ("b", 0.0),
        ("c", 0.0),
        ("d", 1.0),
        ("e", 2.0),
        ("g", 1.0),
    ]
    .iter()
    .map(|&(v, h)| (v.to_string(), Value::Real(h)))
    .collect()
}

/// A triangulated cylinder: three levels of four vertices, quads split into
/// triangles, height equal to the level. Its Reeb graph is a path.
pub fn cylinder_complex() -> SimplicialComplex {
    let levels = 3;
    let ring = 4;
    let name = |l: usize, i: usize| format!("w{l}x{i}");
    let vertices: Vec<VertexId> = (0..levels)
        .flat_map(|l| (0..ring).map(move |i| name(l, i)))
        .collect();
    let mut triangles = Vec::new();
    for l in 0..levels - 1 {
        for i in 0..ring {
            let j = (i + 1) % ring;
            triangles.push(vec![name(l, i), name(l, j), name(l + 1, i)]);
            triangles.push(vec![name(l, j), name(l + 1, i), name(l + 1, j)]);
        }
    }
    SimplicialComplex::build(vertices, triangles, 2).unwrap()
}

pub fn cylinder_codomain() -> Codomain {
    Codomain::real(0.0, 2.0).unwrap()
}

pub fn cylinder_values() -> BTreeMap<VertexId, Value> {
    (0..3)
        .flat_map(|l| (0..4).map(move |i| (format!("w{l}x{i}"), Value::Real(l as f64))))
        .collect()
}

/// A random connected instance over a real codomain: graph, vertex heights,
/// and an overlapping interval cover of [0, 4].
pub struct RandomInstance {
    pub complex: SimplicialComplex,
    pub codomain: Codomain,
    pub values: BTreeMap<VertexId, Value>,
    pub cover: Cover,
}

pub fn random_real_instance(seed: u64) -> RandomInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(6..=14);
    let vertices: Vec<VertexId> = (0..n).map(|i| format!("v{i:02}")).collect();
    // spanning tree first, then extra edges for cycles
    let mut edges: Vec<Vec<VertexId>> = Vec::new();
    for i in 1..n {
        let parent = rng.gen_range(0..i);
        edges.push(vec![vertices[parent].clone(), vertices[i].clone()]);
    }
    let extra = rng.gen_range(1..=n / 2 + 1);
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            edges.push(vec![vertices[a].clone(), vertices[b].clone()]);
        }
    }
    let complex = SimplicialComplex::build(vertices.clone(), edges, 2).unwrap();
    let codomain = Codomain::real(0.0, 4.0).unwrap();
    let values: BTreeMap<VertexId, Value> = vertices
        .iter()
        .map(|v| (v.clone(), Value::Real(rng.gen_range(0..=40) as f64 / 10.0)))
        .collect();
    // the cover overlap must exceed the largest edge image diameter, so that
    // every domain edge fits inside some element
    let max_edge_diam = complex
        .simplices(1)
        .iter()
        .map(|e| {
            let a = match &values[&e[0]] {
                Value::Real(x) => *x,
                Value::Point(_) => unreachable!(),
            };
            let b = match &values[&e[1]] {
                Value::Real(x) => *x,
                Value::Point(_) => unreachable!(),
            };
            (a - b).abs()
        })
        .fold(0.0, f64::max);
    let cover = random_interval_cover(&mut rng, 0.0, 4.0, max_edge_diam);
    RandomInstance {
        complex,
        codomain,
        values,
        cover,
    }
}

fn random_interval_cover(rng: &mut ChaCha8Rng, lo: f64, hi: f64, min_overlap: f64) -> Cover {
    let m = rng.gen_range(2..=5);
    let step = (hi - lo) / m as f64;
    let overlap = min_overlap + 0.05 + step * rng.gen_range(1..=6) as f64 / 10.0;
    let elements = (0..m)
        .map(|k| CoverElement::Interval {
            lo: lo + k as f64 * step - overlap,
            hi: lo + (k + 1) as f64 * step + overlap,
        })
        .collect();
    Cover::new(Codomain::real(lo, hi).unwrap(), elements).unwrap()
}

/// A random instance over a finite-metric codomain: a connected unit-weight
/// graph, its own shortest-path metric as codomain, and the identity map.
pub struct MetricInstance {
    pub complex: SimplicialComplex,
    pub metric: FiniteMetricSpace,
    pub values: BTreeMap<VertexId, Value>,
}

pub fn random_unit_metric_instance(seed: u64) -> MetricInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x5eed));
    let n = rng.gen_range(5..=9);
    let names: Vec<VertexId> = (0..n).map(|i| format!("u{i}")).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 1..n {
        let parent = rng.gen_range(0..i);
        pairs.push((parent.min(i), parent.max(i)));
    }
    for _ in 0..rng.gen_range(1..=n / 2 + 1) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            pairs.push((a.min(b), a.max(b)));
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    let inf = f64::INFINITY;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(a, b) in &pairs {
        d[a][b] = 1.0;
        d[b][a] = 1.0;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let metric = FiniteMetricSpace::new(names.clone(), d).unwrap();
    let edges: Vec<Vec<VertexId>> = pairs
        .iter()
        .map(|&(a, b)| vec![names[a].clone(), names[b].clone()])
        .collect();
    let complex = SimplicialComplex::build(names.clone(), edges, 2).unwrap();
    let values = names
        .iter()
        .map(|v| (v.clone(), Value::Point(v.clone())))
        .collect();
    MetricInstance {
        complex,
        metric,
        values,
    }
}

/// A random finite metric space: the shortest-path metric of a random
/// connected weighted graph.
pub fn random_metric(seed: u64) -> FiniteMetricSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(5..=10);
    let inf = f64::INFINITY;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    let set_edge = |d: &mut Vec<Vec<f64>>, a: usize, b: usize, w: f64| {
        if w < d[a][b] {
            d[a][b] = w;
            d[b][a] = w;
        }
    };
    for i in 1..n {
        let parent = rng.gen_range(0..i);
        let w = rng.gen_range(1..=4) as f64;
        set_edge(&mut d, parent, i, w);
    }
    for _ in 0..rng.gen_range(1..=n) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            let w = rng.gen_range(1..=4) as f64;
            set_edge(&mut d, a, b, w);
        }
    }
    // Floyd-Warshall closure
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let points = (0..n).map(|i| format!("m{i:02}")).collect();
    FiniteMetricSpace::new(points, d).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_well_formed() {
        assert_eq!(tent_complex().simplices(1).len(), 8);
        assert_eq!(cover4().len(), 4);
        assert_eq!(pinch_cover().len(), 4);
        assert_eq!(eight_complex().homology_basis(1).unwrap().betti, 2);
        let cyl = cylinder_complex();
        assert_eq!(cyl.simplices(0).len(), 12);
        assert_eq!(cyl.simplices(2).len(), 16);
        // cylinder has H1 of rank 1
        assert_eq!(cyl.homology_basis(1).unwrap().betti, 1);
    }

    #[test]
    fn random_instances_are_deterministic_and_valid() {
        for seed in 0..20 {
            let a = random_real_instance(seed);
            let b = random_real_instance(seed);
            assert_eq!(a.complex.simplices(1), b.complex.simplices(1));
            assert_eq!(a.values, b.values);
            for v in a.complex.vertices() {
                assert!(a.values.contains_key(v));
            }
            let m = random_metric(seed);
            assert_eq!(m, random_metric(seed));
        }
    }
}
