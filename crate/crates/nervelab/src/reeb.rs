//! Reeb graphs of PL real-valued functions on complexes of dimension at most
//! two: a sweep over vertex values with level-set components, the quotient
//! map, the descended metric, and the H1 basis check.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{Chain, SimplicialComplex, VertexId};
use crate::covers::Value;
use crate::error::{Error, Result};
use crate::generators::SizedBasis;
use crate::metrics::PseudoMetric;
use crate::z2::Eliminator;

const TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct ReebNode {
    pub value: f64,
    /// Domain vertices absorbed into this equivalence class.
    pub vertices: BTreeSet<VertexId>,
}

#[derive(Clone, Debug)]
pub struct ReebGraph {
    pub nodes: Vec<ReebNode>,
    /// Multi-edges (lower node, upper node), one per regular strip component.
    pub edges: Vec<(usize, usize)>,
    /// Quotient map on domain vertices.
    pub quotient: BTreeMap<VertexId, usize>,
    /// For each domain edge (canonical order), the Reeb edges its image
    /// traverses; flat edges traverse none.
    edge_paths: BTreeMap<(VertexId, VertexId), Vec<usize>>,
}

impl ReebGraph {
    pub fn betti1(&self) -> usize {
        let n = self.nodes.len();
        let mut dsu: Vec<usize> = (0..n).collect();
        fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
            if dsu[x] != x {
                let r = find(dsu, dsu[x]);
                dsu[x] = r;
            }
            dsu[x]
        }
        let mut components = n;
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut dsu, a), find(&mut dsu, b));
            if ra != rb {
                dsu[ra] = rb;
                components -= 1;
            }
        }
        self.edges.len() + components - n
    }

    /// The graph as a simplicial complex; every Reeb edge is subdivided at a
    /// midpoint vertex so that multi-edges survive the simplicial encoding.
    pub fn to_complex(&self) -> SimplicialComplex {
        let mut vertices: Vec<VertexId> =
            (0..self.nodes.len()).map(|i| format!("n{i}")).collect();
        let mut edges = Vec::new();
        for (j, &(a, b)) in self.edges.iter().enumerate() {
            let mid = format!("e{j}");
            vertices.push(mid.clone());
            edges.push(vec![format!("n{a}"), mid.clone()]);
            edges.push(vec![mid, format!("n{b}")]);
        }
        SimplicialComplex::build(vertices, edges, 1).unwrap()
    }

    /// Image of a 1-cycle under the quotient, as a chain in `to_complex()`.
    pub fn push_cycle(&self, z: &Chain) -> Result<Chain> {
        let mut reeb_edges: BTreeSet<usize> = BTreeSet::new();
        for e in &z.support {
            let key = (e[0].clone(), e[1].clone());
            let path = self
                .edge_paths
                .get(&key)
                .ok_or_else(|| Error::UnknownSimplex(e.clone(), 1))?;
            for &j in path {
                if !reeb_edges.remove(&j) {
                    reeb_edges.insert(j);
                }
            }
        }
        let mut chain = Chain::empty(1);
        for j in reeb_edges {
            let (a, b) = self.edges[j];
            chain.toggle(vec![format!("n{a}"), format!("e{j}")]);
            chain.toggle(vec![format!("e{j}"), format!("n{b}")]);
        }
        Ok(chain)
    }

    pub fn node_of(&self, v: &str) -> Option<usize> {
        self.quotient.get(v).copied()
    }
}

fn real_values(
    complex: &SimplicialComplex,
    values: &BTreeMap<VertexId, Value>,
) -> Result<BTreeMap<VertexId, f64>> {
    let mut f = BTreeMap::new();
    for v in complex.vertices() {
        match values.get(v) {
            Some(Value::Real(x)) => {
                f.insert(v.clone(), *x);
            }
            Some(Value::Point(_)) => {
                return Err(Error::InvalidInput(
                    "reeb graphs require real-valued functions".into(),
                ))
            }
            None => return Err(Error::MissingValue(v.clone())),
        }
    }
    Ok(f)
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Reeb graph by a sweep over the sorted distinct vertex values. At each
/// value the level-set components are vertices at that value plus crossing
/// edges, glued through flat edges and triangles; between consecutive values
/// the strip components of spanning edges become Reeb edges. Vertex-free
/// degree-two nodes are smoothed away afterwards.
pub fn reeb_graph(
    complex: &SimplicialComplex,
    values: &BTreeMap<VertexId, Value>,
) -> Result<ReebGraph> {
    for k in 3..=complex.dim_cap() {
        if !complex.simplices(k).is_empty() {
            return Err(Error::ReebDimension(k));
        }
    }
    let f = real_values(complex, values)?;
    let vertices = complex.vertices();
    let vidx: BTreeMap<&VertexId, usize> =
        vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let edges: Vec<(usize, usize, f64, f64)> = complex
        .simplices(1)
        .iter()
        .map(|e| {
            let (a, b) = (vidx[&e[0]], vidx[&e[1]]);
            let (fa, fb) = (f[&e[0]], f[&e[1]]);
            if fa <= fb {
                (a, b, fa, fb)
            } else {
                (b, a, fb, fa)
            }
        })
        .collect();
    let triangles: Vec<[usize; 3]> = if complex.dim_cap() >= 2 {
        complex
            .simplices(2)
            .iter()
            .map(|t| [vidx[&t[0]], vidx[&t[1]], vidx[&t[2]]])
            .collect()
    } else {
        Vec::new()
    };
    let fv: Vec<f64> = vertices.iter().map(|v| f[v]).collect();

    let mut levels: Vec<f64> = fv.clone();
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup();

    // --- level nodes ---
    // items at a level: vertex i -> item i, crossing edge e -> item n + e
    let n = vertices.len();
    let mut nodes: Vec<ReebNode> = Vec::new();
    // node id of each item, per level
    let mut item_node: Vec<BTreeMap<usize, usize>> = Vec::new();
    for &t in &levels {
        let mut items: Vec<usize> = Vec::new();
        for i in 0..n {
            if fv[i] == t {
                items.push(i);
            }
        }
        for (e, &(_, _, lo, hi)) in edges.iter().enumerate() {
            if lo < t && t < hi {
                items.push(n + e);
            }
        }
        let pos: BTreeMap<usize, usize> =
            items.iter().enumerate().map(|(p, &it)| (it, p)).collect();
        let mut dsu = Dsu::new(items.len());
        for &(a, b, lo, hi) in &edges {
            if lo == t && hi == t {
                dsu.union(pos[&a], pos[&b]);
            }
        }
        for tri in &triangles {
            let tri_items: Vec<usize> = {
                let mut list = Vec::new();
                for &v in tri {
                    if fv[v] == t {
                        list.push(pos[&v]);
                    }
                }
                for (e, &(a, b, lo, hi)) in edges.iter().enumerate() {
                    if lo < t && t < hi && tri.contains(&a) && tri.contains(&b) {
                        list.push(pos[&(n + e)]);
                    }
                }
                list
            };
            for w in tri_items.windows(2) {
                dsu.union(w[0], w[1]);
            }
        }
        // component roots in item order keep node numbering deterministic
        let mut node_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut level_map = BTreeMap::new();
        for (p, &it) in items.iter().enumerate() {
            let root = dsu.find(p);
            let id = *node_of_root.entry(root).or_insert_with(|| {
                nodes.push(ReebNode {
                    value: t,
                    vertices: BTreeSet::new(),
                });
                nodes.len() - 1
            });
            if it < n {
                nodes[id].vertices.insert(vertices[it].clone());
            }
            level_map.insert(it, id);
        }
        item_node.push(level_map);
    }

    // --- strip edges ---
    let mut reeb_edges: Vec<(usize, usize)> = Vec::new();
    // per domain edge, the strip edges it traverses (in sweep order)
    let mut edge_strips: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
    for j in 0..levels.len().saturating_sub(1) {
        let (t_lo, t_hi) = (levels[j], levels[j + 1]);
        let spanning: Vec<usize> = edges
            .iter()
            .enumerate()
            .filter(|(_, &(_, _, lo, hi))| lo <= t_lo && hi >= t_hi)
            .map(|(e, _)| e)
            .collect();
        let pos: BTreeMap<usize, usize> =
            spanning.iter().enumerate().map(|(p, &e)| (e, p)).collect();
        let mut dsu = Dsu::new(spanning.len());
        for tri in &triangles {
            let tri_edges: Vec<usize> = spanning
                .iter()
                .filter(|&&e| {
                    let (a, b, _, _) = edges[e];
                    tri.contains(&a) && tri.contains(&b)
                })
                .map(|&e| pos[&e])
                .collect();
            for w in tri_edges.windows(2) {
                dsu.union(w[0], w[1]);
            }
        }
        let mut edge_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        for (p, &e) in spanning.iter().enumerate() {
            let (a, b, lo, hi) = edges[e];
            // attach at the lower level: the edge's item is its low endpoint
            // vertex when it starts here, otherwise the crossing edge itself
            let low_item = if lo == t_lo { a } else { n + e };
            let high_item = if hi == t_hi { b } else { n + e };
            let low_node = item_node[j][&low_item];
            let high_node = item_node[j + 1][&high_item];
            let root = dsu.find(p);
            let id = *edge_of_root.entry(root).or_insert_with(|| {
                reeb_edges.push((low_node, high_node));
                reeb_edges.len() - 1
            });
            // all members of one strip component see the same pair of nodes
            debug_assert_eq!(reeb_edges[id], (low_node, high_node));
            edge_strips[e].push(id);
        }
    }

    // --- smoothing: drop vertex-free degree-two nodes ---
    let mut alive_edge: Vec<bool> = vec![true; reeb_edges.len()];
    let mut alias: Vec<usize> = (0..reeb_edges.len()).collect();
    fn resolve(alias: &mut Vec<usize>, e: usize) -> usize {
        if alias[e] != e {
            let r = resolve(alias, alias[e]);
            alias[e] = r;
        }
        alias[e]
    }
    let mut node_alive: Vec<bool> = vec![true; nodes.len()];
    loop {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
        for (e, &(a, b)) in reeb_edges.iter().enumerate() {
            if alive_edge[e] {
                incident[a].push(e);
                incident[b].push(e);
            }
        }
        let target = (0..nodes.len()).find(|&i| {
            node_alive[i] && nodes[i].vertices.is_empty() && incident[i].len() == 2
        });
        let Some(i) = target else { break };
        let (e1, e2) = (incident[i][0], incident[i][1]);
        let other = |e: usize| {
            let (a, b) = reeb_edges[e];
            if a == i {
                b
            } else {
                a
            }
        };
        let (u, w) = (other(e1), other(e2));
        debug_assert_ne!(u, w, "smoothing would close a vertex-free loop");
        reeb_edges[e1] = (u.min(w), u.max(w));
        alive_edge[e2] = false;
        alias[e2] = e1;
        node_alive[i] = false;
    }
    for (i, node) in nodes.iter().enumerate() {
        if node_alive[i] && node.vertices.is_empty() {
            return Err(Error::InvalidInput(format!(
                "vertex-free reeb node of degree != 2 at value {}",
                node.value
            )));
        }
    }

    // --- compact ids ---
    let mut node_map: Vec<usize> = vec![usize::MAX; nodes.len()];
    let mut final_nodes = Vec::new();
    for (i, node) in nodes.into_iter().enumerate() {
        if node_alive[i] {
            node_map[i] = final_nodes.len();
            final_nodes.push(node);
        }
    }
    let mut edge_map: Vec<usize> = vec![usize::MAX; reeb_edges.len()];
    let mut final_edges = Vec::new();
    for (e, &(a, b)) in reeb_edges.iter().enumerate() {
        if alive_edge[e] {
            edge_map[e] = final_edges.len();
            final_edges.push((node_map[a], node_map[b]));
        }
    }
    let mut quotient = BTreeMap::new();
    for (i, node) in final_nodes.iter().enumerate() {
        for v in &node.vertices {
            quotient.insert(v.clone(), i);
        }
    }
    let mut edge_paths = BTreeMap::new();
    for (e, strips) in edge_strips.iter().enumerate() {
        let key_edge = &complex.simplices(1)[e];
        // an edge image is a monotone arc, so every strip piece of a merged
        // edge is traversed together: record the surviving edge once
        let mut path: BTreeSet<usize> = BTreeSet::new();
        for &s in strips {
            path.insert(edge_map[resolve(&mut alias, s)]);
        }
        edge_paths.insert(
            (key_edge[0].clone(), key_edge[1].clone()),
            path.into_iter().collect(),
        );
    }
    Ok(ReebGraph {
        nodes: final_nodes,
        edges: final_edges,
        quotient,
        edge_paths,
    })
}

/// The descended pseudometric on Reeb nodes: the domain metric evaluated on
/// any representatives. Representative independence is asserted to 1e-9.
pub fn reeb_metric(reeb: &ReebGraph, df: &PseudoMetric) -> Result<PseudoMetric> {
    let n = reeb.nodes.len();
    let mut dist = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let mut lo = f64::INFINITY;
            let mut hi: f64 = 0.0;
            for a in &reeb.nodes[i].vertices {
                for b in &reeb.nodes[j].vertices {
                    let d = df.distance_by_id(a, b)?;
                    lo = lo.min(d);
                    hi = hi.max(d);
                }
            }
            if (hi - lo).abs() > TOL {
                return Err(Error::InvalidInput(format!(
                    "metric does not descend: representatives of nodes {i},{j} \
                     disagree by {}",
                    hi - lo
                )));
            }
            dist[i][j] = lo;
            dist[j][i] = lo;
        }
    }
    let points = (0..n).map(|i| format!("n{i}")).collect();
    PseudoMetric::new(points, dist, df.mode())
}

/// Outcome of the basis check: β1 of the Reeb graph against positive-size
/// generator counts, with the image behavior of each generator.
#[derive(Clone, Debug)]
pub struct ReebCheck {
    pub beta1_reeb: usize,
    pub positive_sizes: usize,
    pub zero_size_images_null: bool,
    pub positive_images_independent: bool,
}

impl ReebCheck {
    pub fn ok(&self) -> bool {
        self.beta1_reeb == self.positive_sizes
            && self.zero_size_images_null
            && self.positive_images_independent
    }
}

/// Verifies that β1 of the Reeb graph equals the number of positive-size
/// minimal generators, that zero-size generators push to null cycles, and
/// that positive-size ones push to an independent spanning set.
pub fn reeb_h1_check(reeb: &ReebGraph, basis: &SizedBasis) -> Result<ReebCheck> {
    let complex = reeb.to_complex();
    let beta1_reeb = complex.homology_basis(1)?.betti;
    let mut zero_null = true;
    let mut independent = true;
    let mut positive = 0usize;
    let n1 = complex.simplices(1).len();
    let mut elim = Eliminator::new(n1);
    for (z, &size) in basis.cycles.iter().zip(&basis.sizes) {
        let image = reeb.push_cycle(z)?;
        if size == 0.0 {
            if !image.is_empty() {
                zero_null = false;
            }
        } else {
            positive += 1;
            if !elim.insert(&image.to_vector(&complex)?) {
                independent = false;
            }
        }
    }
    Ok(ReebCheck {
        beta1_reeb,
        positive_sizes: positive,
        zero_size_images_null: zero_null,
        positive_images_independent: independent,
    })
}
