//! The map-induced pseudometric d_f, the nerve-vertex metric d_delta,
//! representative labelings, and correspondence distortion.
//!
//! Both d_f and d_delta are the same construction: a graph whose vertices
//! carry codomain labels, with distance = the minimum over connecting paths
//! of the codomain diameter of the visited labels.

use std::collections::BTreeMap;

use crate::complex::{Chain, SimplicialComplex, VertexId};
use crate::covers::{guard_limit, Codomain, CoverElement, FiniteMetricSpace, Value};
use crate::error::{Error, Result};
use crate::pullback::Mapper;

const TOL: f64 = 1e-9;

/// Computation mode for finite-metric codomains. Real codomains are always
/// exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricMode {
    Exact,
    /// Ball-anchored 2-approximation: exact <= approx <= 2 * exact.
    Approx,
}

/// A validated pseudometric on named points; entries may be infinite when
/// the underlying graph is disconnected.
#[derive(Clone, Debug)]
pub struct PseudoMetric {
    points: Vec<String>,
    dist: Vec<Vec<f64>>,
    mode: MetricMode,
    has_infinite: bool,
}

impl PseudoMetric {
    pub fn new(points: Vec<String>, dist: Vec<Vec<f64>>, mode: MetricMode) -> Result<Self> {
        let n = points.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput("metric matrix shape mismatch".into()));
        }
        let mut has_infinite = false;
        for i in 0..n {
            if dist[i][i].abs() > TOL {
                return Err(Error::InvalidInput(format!(
                    "nonzero self-distance at {:?}",
                    points[i]
                )));
            }
            for j in 0..n {
                let d = dist[i][j];
                if d.is_nan() || d < 0.0 {
                    return Err(Error::InvalidInput("negative or NaN distance".into()));
                }
                if d.is_infinite() {
                    has_infinite = true;
                }
                if (d - dist[j][i]).abs() > TOL && !(d.is_infinite() && dist[j][i].is_infinite())
                {
                    return Err(Error::InvalidInput("asymmetric metric matrix".into()));
                }
                for k in 0..n {
                    if d > dist[i][k] + dist[k][j] + TOL {
                        return Err(Error::InvalidInput(format!(
                            "triangle inequality fails on ({:?},{:?},{:?})",
                            points[i], points[j], points[k]
                        )));
                    }
                }
            }
        }
        Ok(PseudoMetric {
            points,
            dist,
            mode,
            has_infinite,
        })
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn mode(&self) -> MetricMode {
        self.mode
    }

    pub fn has_infinite(&self) -> bool {
        self.has_infinite
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.points.iter().position(|p| p == id)
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    pub fn distance_by_id(&self, a: &str, b: &str) -> Result<f64> {
        let i = self
            .index_of(a)
            .ok_or_else(|| Error::UnknownVertex(a.into()))?;
        let j = self
            .index_of(b)
            .ok_or_else(|| Error::UnknownVertex(b.into()))?;
        Ok(self.dist[i][j])
    }

    /// Reinterpret as a codomain metric space; fails on infinite entries.
    pub fn as_finite_metric(&self) -> Result<FiniteMetricSpace> {
        if self.has_infinite {
            return Err(Error::Disconnected);
        }
        FiniteMetricSpace::new(self.points.clone(), self.dist.clone())
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Minimum over connecting paths of the codomain diameter of visited labels,
/// over the 1-skeleton of `graph`.
pub fn label_diameter_metric(
    graph: &SimplicialComplex,
    labels: &BTreeMap<VertexId, Value>,
    codomain: &Codomain,
    mode: MetricMode,
) -> Result<PseudoMetric> {
    let vertices = graph.vertices();
    for v in vertices {
        if !labels.contains_key(v) {
            return Err(Error::MissingValue(v.clone()));
        }
    }
    let edges = graph.edges();
    let dist = match codomain {
        Codomain::Real { .. } => {
            let heights: Vec<f64> = vertices
                .iter()
                .map(|v| labels[v].as_real())
                .collect::<Result<_>>()?;
            real_sweep(vertices.len(), &edges, &heights)
        }
        Codomain::FiniteMetric(m) => {
            let pts: Vec<usize> = vertices
                .iter()
                .map(|v| {
                    let id = labels[v].as_point()?;
                    m.index_of(id)
                        .ok_or_else(|| Error::UnknownVertex(id.into()))
                })
                .collect::<Result<_>>()?;
            match mode {
                MetricMode::Exact => finite_exact(vertices.len(), &edges, &pts, m)?,
                MetricMode::Approx => finite_approx(vertices.len(), &edges, &pts, m),
            }
        }
    };
    PseudoMetric::new(vertices.to_vec(), dist, mode)
}

/// Exact sweep for real labels: for every low threshold `a`, grow the
/// subgraph of vertices with label in [a, b] upward in b, recording b - a
/// when pairs connect. Exact for PL functions, where an edge's image is the
/// interval between its endpoint labels.
fn real_sweep(n: usize, edges: &[(usize, usize)], heights: &[f64]) -> Vec<Vec<f64>> {
    let mut result = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in result.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    let mut levels: Vec<f64> = heights.to_vec();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup();
    for (ai, &a) in levels.iter().enumerate() {
        let mut dsu = Dsu::new(n);
        let mut present = vec![false; n];
        for &b in &levels[ai..] {
            for v in 0..n {
                if heights[v] >= a && heights[v] <= b {
                    present[v] = true;
                }
            }
            for &(u, w) in edges {
                if present[u] && present[w] {
                    dsu.union(u, w);
                }
            }
            let span = b - a;
            for x in 0..n {
                if !present[x] {
                    continue;
                }
                for y in x + 1..n {
                    if present[y] && result[x][y] > span && dsu.find(x) == dsu.find(y) {
                        result[x][y] = span;
                        result[y][x] = span;
                    }
                }
            }
        }
    }
    result
}

/// Exact finite-metric mode: for each realized diameter threshold d, the
/// admissible label sets are the cliques of the d-diameter graph; every
/// clique extends to a maximal one, so maximal cliques suffice.
fn finite_exact(
    n: usize,
    edges: &[(usize, usize)],
    pt_of_vertex: &[usize],
    m: &FiniteMetricSpace,
) -> Result<Vec<Vec<f64>>> {
    let mut used: Vec<usize> = pt_of_vertex.to_vec();
    used.sort_unstable();
    used.dedup();
    let limit = guard_limit(15);
    if used.len() > limit {
        return Err(Error::GuardExceeded {
            size: used.len(),
            limit,
        });
    }
    let mut result = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in result.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    let mut thresholds: Vec<f64> = used
        .iter()
        .flat_map(|&p| used.iter().map(move |&q| m.distance(p, q)))
        .collect();
    thresholds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    thresholds.dedup();
    // remaining pairs that can connect at all
    let mut whole = Dsu::new(n);
    for &(u, w) in edges {
        whole.union(u, w);
    }
    let mut remaining = 0usize;
    for x in 0..n {
        for y in x + 1..n {
            if whole.find(x) == whole.find(y) {
                remaining += 1;
            }
        }
    }
    for &d in &thresholds {
        if remaining == 0 {
            break;
        }
        let k = used.len();
        let mut adj = vec![0u32; k];
        for a in 0..k {
            for b in 0..k {
                if a != b && m.distance(used[a], used[b]) <= d + TOL {
                    adj[a] |= 1 << b;
                }
            }
        }
        for clique in maximal_cliques(k, &adj) {
            let mut dsu = Dsu::new(n);
            let inside = |v: usize| {
                let p = pt_of_vertex[v];
                let a = used.iter().position(|&q| q == p).unwrap();
                clique >> a & 1 == 1
            };
            for &(u, w) in edges {
                if inside(u) && inside(w) {
                    dsu.union(u, w);
                }
            }
            for x in 0..n {
                if !inside(x) {
                    continue;
                }
                for y in x + 1..n {
                    if inside(y) && result[x][y].is_infinite() && dsu.find(x) == dsu.find(y) {
                        result[x][y] = d;
                        result[y][x] = d;
                        remaining -= 1;
                    }
                }
            }
        }
    }
    Ok(result)
}

/// Bron-Kerbosch without pivoting; label counts are guarded small.
fn maximal_cliques(k: usize, adj: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let all = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    let mut stack = vec![(0u32, all, 0u32)];
    while let Some((r, mut p, mut x)) = stack.pop() {
        if p == 0 && x == 0 {
            out.push(r);
            continue;
        }
        while p != 0 {
            let v = p.trailing_zeros() as usize;
            let bit = 1u32 << v;
            stack.push((r | bit, p & adj[v], x & adj[v]));
            p &= !bit;
            x |= bit;
        }
    }
    out
}

/// Ball-anchored 2-approximation: connect inside preimages of closed balls
/// around every codomain point, report twice the radius.
fn finite_approx(
    n: usize,
    edges: &[(usize, usize)],
    pt_of_vertex: &[usize],
    m: &FiniteMetricSpace,
) -> Vec<Vec<f64>> {
    let mut result = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in result.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for z in 0..m.len() {
        let mut radii: Vec<f64> = pt_of_vertex.iter().map(|&p| m.distance(z, p)).collect();
        radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        radii.dedup();
        for &r in &radii {
            let inside = |v: usize| m.distance(z, pt_of_vertex[v]) <= r + TOL;
            let mut dsu = Dsu::new(n);
            for &(u, w) in edges {
                if inside(u) && inside(w) {
                    dsu.union(u, w);
                }
            }
            for x in 0..n {
                if !inside(x) {
                    continue;
                }
                for y in x + 1..n {
                    if inside(y) && result[x][y] > 2.0 * r && dsu.find(x) == dsu.find(y) {
                        result[x][y] = 2.0 * r;
                        result[y][x] = 2.0 * r;
                    }
                }
            }
        }
    }
    result
}

/// The pseudometric d_f on domain vertices.
pub fn df_metric(
    domain: &SimplicialComplex,
    values: &BTreeMap<VertexId, Value>,
    codomain: &Codomain,
    mode: MetricMode,
) -> Result<PseudoMetric> {
    label_diameter_metric(domain, values, codomain, mode)
}

/// Max pairwise distance over the support vertices of a chain.
pub fn cycle_support_metric_size(z: &Chain, d: &PseudoMetric) -> Result<f64> {
    let vertices: Vec<VertexId> = z.vertex_set().into_iter().collect();
    let mut size: f64 = 0.0;
    for (i, a) in vertices.iter().enumerate() {
        for b in &vertices[i + 1..] {
            size = size.max(d.distance_by_id(a, b)?);
        }
    }
    Ok(size)
}

/// Representatives attached to nerve vertices: a codomain label z_alpha per
/// cover element and a domain vertex x_{alpha,i} per pullback element.
#[derive(Clone, Debug)]
pub struct VertexLabeling {
    /// nerve vertex -> z_alpha
    pub labels: BTreeMap<VertexId, Value>,
    /// nerve vertex -> x_{alpha,i}
    pub representatives: BTreeMap<VertexId, VertexId>,
}

/// Deterministic label choice: interval midpoint, or the minimum-eccentricity
/// member of a point set (the center of a metric ball).
fn element_label(element: &CoverElement, codomain: &Codomain) -> Result<Value> {
    match (element, codomain) {
        (CoverElement::Interval { lo, hi }, _) => Ok(Value::Real((lo + hi) / 2.0)),
        (CoverElement::Points(set), Codomain::FiniteMetric(m)) => {
            let members: Vec<&String> = set.iter().collect();
            let ecc = |p: &str| -> f64 {
                let i = m.index_of(p).unwrap();
                members
                    .iter()
                    .map(|q| m.distance(i, m.index_of(q).unwrap()))
                    .fold(0.0, f64::max)
            };
            members
                .iter()
                .min_by(|a, b| {
                    ecc(a)
                        .partial_cmp(&ecc(b))
                        .unwrap()
                        .then_with(|| a.cmp(b))
                })
                .map(|p| Value::Point((*p).clone()))
                .ok_or_else(|| Error::InvalidCover("empty element".into()))
        }
        _ => Err(Error::InvalidCover(
            "element kind does not match codomain".into(),
        )),
    }
}

pub fn label_mapper(mapper: &Mapper) -> Result<VertexLabeling> {
    let cover = mapper.pullback.cover();
    let codomain = cover.codomain();
    let mut labels = BTreeMap::new();
    let mut representatives = BTreeMap::new();
    for e in mapper.pullback.elements() {
        labels.insert(
            e.name.clone(),
            element_label(&cover.elements()[e.alpha], codomain)?,
        );
        let rep = e.vertices.iter().next().expect("nonempty element");
        representatives.insert(e.name.clone(), rep.clone());
    }
    Ok(VertexLabeling {
        labels,
        representatives,
    })
}

/// The metric d_delta on nerve vertices: the label-diameter path metric of
/// the nerve 1-skeleton under f_delta.
pub fn d_delta_metric(
    mapper: &Mapper,
    labeling: &VertexLabeling,
    mode: MetricMode,
) -> Result<PseudoMetric> {
    label_diameter_metric(
        &mapper.nerve,
        &labeling.labels,
        mapper.pullback.cover().codomain(),
        mode,
    )
}

/// A correspondence between domain vertices and nerve vertices.
#[derive(Clone, Debug)]
pub struct Correspondence {
    pub pairs: Vec<(VertexId, VertexId)>,
}

impl Correspondence {
    /// Left-total on the domain vertices and right-total on nerve vertices.
    pub fn is_total(&self, domain: &SimplicialComplex, nerve: &SimplicialComplex) -> bool {
        domain
            .vertices()
            .iter()
            .all(|x| self.pairs.iter().any(|(a, _)| a == x))
            && nerve
                .vertices()
                .iter()
                .all(|v| self.pairs.iter().any(|(_, b)| b == v))
    }
}

/// Pairs (x, p(x)) for every domain vertex plus (x_{alpha,i}, v_{alpha,i})
/// for every nerve vertex, duplicates merged.
pub fn build_correspondence(mapper: &Mapper, labeling: &VertexLabeling) -> Correspondence {
    let proj = mapper.pullback.vertex_projection();
    let mut pairs: Vec<(VertexId, VertexId)> = proj.into_iter().collect();
    for (v, x) in &labeling.representatives {
        pairs.push((x.clone(), v.clone()));
    }
    pairs.sort();
    pairs.dedup();
    Correspondence { pairs }
}

/// Metric distortion of a correspondence: the worst additive disagreement
/// over pairs of matched pairs.
pub fn correspondence_distortion(
    s: &Correspondence,
    dx: &PseudoMetric,
    dy: &PseudoMetric,
) -> Result<f64> {
    let mut dis: f64 = 0.0;
    for (i, (x1, y1)) in s.pairs.iter().enumerate() {
        for (x2, y2) in &s.pairs[i..] {
            let a = dx.distance_by_id(x1, x2)?;
            let b = dy.distance_by_id(y1, y2)?;
            if a.is_infinite() || b.is_infinite() {
                return Err(Error::InfiniteDistortion);
            }
            dis = dis.max((a - b).abs());
        }
    }
    Ok(dis)
}
