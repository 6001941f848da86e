//! Sizes of H1 classes under a pseudometric, minimal generator bases, and
//! the survival/death classification of generators under a mapper.

use std::collections::BTreeSet;

use crate::complex::{Chain, SimplicialComplex, VertexId};
use crate::covers::guard_limit;
use crate::error::{Error, Result};
use crate::metrics::PseudoMetric;
use crate::pullback::{push_cycle, Mapper};
use crate::z2::{Eliminator, Z2Vector};

/// Exhaustive coset search vs local-improvement upper bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisMode {
    Exact,
    Greedy,
}

/// An H1 basis with nondecreasing sizes.
#[derive(Clone, Debug)]
pub struct SizedBasis {
    pub cycles: Vec<Chain>,
    pub sizes: Vec<f64>,
    pub mode: BasisMode,
}

/// Diameter of a chain's vertex support under d; empty chains have size 0.
fn support_diameter(d: &PseudoMetric, vertices: &BTreeSet<VertexId>) -> Result<f64> {
    let mut diam = 0.0f64;
    for a in vertices {
        for b in vertices {
            if a < b {
                diam = diam.max(d.distance_by_id(a, b)?);
            }
        }
    }
    Ok(diam)
}

/// Size of the class of z: the minimum support diameter over representatives.
/// Exact mode searches the whole coset z + B_1 (guarded); greedy mode only
/// tries single-triangle swaps until no swap improves the diameter.
pub fn class_size(
    complex: &SimplicialComplex,
    d: &PseudoMetric,
    z: &Chain,
    mode: BasisMode,
) -> Result<f64> {
    if z.dim != 1 {
        return Err(Error::DimOutOfRange {
            k: z.dim,
            dim_cap: 1,
        });
    }
    if !complex.is_cycle(z)? {
        return Err(Error::NotACycle);
    }
    let triangles: Vec<Chain> = if complex.dim_cap() >= 2 {
        complex
            .simplices(2)
            .iter()
            .map(|t| {
                let mut b = Chain::empty(1);
                for omit in 0..3 {
                    let mut e = t.clone();
                    e.remove(omit);
                    b.toggle(e);
                }
                b
            })
            .collect()
    } else {
        Vec::new()
    };
    match mode {
        BasisMode::Exact => {
            // independent boundary columns span the coset directions
            let n1 = complex.simplices(1).len();
            let mut elim = Eliminator::new(n1);
            let mut basis: Vec<Z2Vector> = Vec::new();
            for t in &triangles {
                let v = t.to_vector(complex)?;
                if elim.insert(&v) {
                    basis.push(v);
                }
            }
            let limit = guard_limit(1 << 20);
            if basis.len() >= usize::BITS as usize
                || (1usize << basis.len()) > limit
            {
                return Err(Error::GuardExceeded {
                    size: basis.len(),
                    limit,
                });
            }
            let z0 = z.to_vector(complex)?;
            let mut best = f64::INFINITY;
            for mask in 0u64..(1u64 << basis.len()) {
                let mut v = z0.clone();
                for (i, b) in basis.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        v.add_assign(b);
                    }
                }
                let rep = Chain::from_vector(complex, 1, &v);
                let diam = support_diameter(d, &rep.vertex_set())?;
                best = best.min(diam);
                if best == 0.0 {
                    break;
                }
            }
            Ok(best)
        }
        BasisMode::Greedy => {
            let mut current = z.clone();
            let mut diam = support_diameter(d, &current.vertex_set())?;
            loop {
                let mut improved = false;
                for t in &triangles {
                    let swapped = current.add(t);
                    let sd = support_diameter(d, &swapped.vertex_set())?;
                    if sd < diam {
                        current = swapped;
                        diam = sd;
                        improved = true;
                    }
                }
                if !improved {
                    return Ok(diam);
                }
            }
        }
    }
}

/// All simple cycles of the 1-skeleton as edge chains, each reported once.
fn simple_cycles(complex: &SimplicialComplex) -> Vec<Chain> {
    let vertices = complex.vertices();
    let n = vertices.len();
    let index: std::collections::HashMap<&VertexId, usize> =
        vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in complex.simplices(1) {
        let a = index[&e[0]];
        let b = index[&e[1]];
        adj[a].push(b);
        adj[b].push(a);
    }
    for row in &mut adj {
        row.sort_unstable();
    }
    let mut cycles = Vec::new();
    // cycles are rooted at their smallest vertex; the orientation with the
    // smaller second vertex is kept, so each cycle appears exactly once
    let mut path: Vec<usize> = Vec::new();
    let mut on_path = vec![false; n];
    fn dfs(
        u: usize,
        start: usize,
        adj: &[Vec<usize>],
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        cycles: &mut Vec<Vec<usize>>,
    ) {
        for &w in &adj[u] {
            if w == start && path.len() >= 3 {
                if path[1] < *path.last().unwrap() {
                    cycles.push(path.clone());
                }
            } else if w > start && !on_path[w] {
                path.push(w);
                on_path[w] = true;
                dfs(w, start, adj, path, on_path, cycles);
                on_path[w] = false;
                path.pop();
            }
        }
    }
    let mut raw = Vec::new();
    for start in 0..n {
        path.push(start);
        on_path[start] = true;
        dfs(start, start, &adj, &mut path, &mut on_path, &mut raw);
        on_path[start] = false;
        path.pop();
    }
    for cycle in raw {
        let edges = (0..cycle.len()).map(|i| {
            vec![
                vertices[cycle[i]].clone(),
                vertices[cycle[(i + 1) % cycle.len()]].clone(),
            ]
        });
        cycles.push(Chain::new(1, edges));
    }
    cycles
}

/// Horton-style candidates: for each root's shortest-path tree under the
/// d-induced edge weights, close each non-tree edge through the tree.
fn horton_cycles(complex: &SimplicialComplex, d: &PseudoMetric) -> Result<Vec<Chain>> {
    let vertices = complex.vertices();
    let n = vertices.len();
    let index: std::collections::HashMap<&VertexId, usize> =
        vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in complex.simplices(1) {
        let a = index[&e[0]];
        let b = index[&e[1]];
        let w = d.distance_by_id(&e[0], &e[1])?;
        adj[a].push((b, w));
        adj[b].push((a, w));
    }
    let mut candidates = Vec::new();
    for root in 0..n {
        // Dijkstra with parent pointers; ties broken by vertex order for
        // determinism
        let mut dist = vec![f64::INFINITY; n];
        let mut parent = vec![usize::MAX; n];
        let mut done = vec![false; n];
        dist[root] = 0.0;
        for _ in 0..n {
            let mut u = usize::MAX;
            for i in 0..n {
                if !done[i] && (u == usize::MAX || dist[i] < dist[u]) {
                    u = i;
                }
            }
            if u == usize::MAX || dist[u].is_infinite() {
                break;
            }
            done[u] = true;
            for &(w, len) in &adj[u] {
                if dist[u] + len < dist[w] {
                    dist[w] = dist[u] + len;
                    parent[w] = u;
                }
            }
        }
        let tree_path = |mut v: usize| -> Vec<(usize, usize)> {
            let mut edges = Vec::new();
            while parent[v] != usize::MAX {
                edges.push((v, parent[v]));
                v = parent[v];
            }
            edges
        };
        for e in complex.simplices(1) {
            let x = index[&e[0]];
            let y = index[&e[1]];
            if !done[x] || !done[y] {
                continue;
            }
            let mut chain = Chain::empty(1);
            chain.toggle(vec![vertices[x].clone(), vertices[y].clone()]);
            for (a, b) in tree_path(x).into_iter().chain(tree_path(y)) {
                chain.toggle(vec![vertices[a].clone(), vertices[b].clone()]);
            }
            if !chain.is_empty() {
                candidates.push(chain);
            }
        }
    }
    Ok(candidates)
}

/// A minimal (exact) or near-minimal (greedy) generator basis of H1, sorted
/// by nondecreasing size, selected greedily under homology independence.
pub fn minimal_generator_basis(
    complex: &SimplicialComplex,
    d: &PseudoMetric,
    mode: BasisMode,
) -> Result<SizedBasis> {
    let betti = complex.homology_basis(1)?.betti;
    if betti == 0 {
        return Ok(SizedBasis {
            cycles: Vec::new(),
            sizes: Vec::new(),
            mode,
        });
    }
    let candidates = match mode {
        BasisMode::Exact => {
            let n_edges = complex.simplices(1).len();
            let limit = guard_limit(30);
            if n_edges > limit {
                return Err(Error::GuardExceeded {
                    size: n_edges,
                    limit,
                });
            }
            simple_cycles(complex)
        }
        BasisMode::Greedy => horton_cycles(complex, d)?,
    };
    let mut sized: Vec<(f64, Chain)> = candidates
        .into_iter()
        .map(|z| Ok((support_diameter(d, &z.vertex_set())?, z)))
        .collect::<Result<_>>()?;
    sized.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.support.cmp(&b.1.support)));
    // greedy matroid selection: keep candidates independent in H1
    let n1 = complex.simplices(1).len();
    let mut elim = Eliminator::new(n1);
    if complex.dim_cap() >= 2 {
        let bdry = complex.boundary_matrix(2)?;
        for j in 0..bdry.ncols() {
            elim.insert(bdry.column(j));
        }
    }
    let mut cycles = Vec::new();
    let mut sizes = Vec::new();
    for (size, z) in sized {
        if cycles.len() == betti {
            break;
        }
        if elim.insert(&z.to_vector(complex)?) {
            cycles.push(z);
            sizes.push(size);
        }
    }
    if cycles.len() < betti {
        // Horton candidates span the cycle space, and simple cycles certainly
        // do; falling short indicates a disconnected root ordering issue
        return Err(Error::InvalidInput(format!(
            "selected {} of {} independent classes",
            cycles.len(),
            betti
        )));
    }
    Ok(SizedBasis {
        cycles,
        sizes,
        mode,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Dead,
    SurvivesIndependent,
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct SurvivalEntry {
    pub size: f64,
    pub verdict: Verdict,
    /// Whether the pushed cycle is null-homologous in the nerve.
    pub image_null: bool,
}

#[derive(Clone, Debug)]
pub struct SurvivalReport {
    pub lebesgue: f64,
    pub s_max: f64,
    pub entries: Vec<SurvivalEntry>,
    /// Joint independence of the images of all generators with
    /// size > 4 * s_max.
    pub survivors_independent: bool,
}

/// Classifies each generator against the size windows: below the Lebesgue
/// number the image must die; above four times the maximum element size the
/// images must stay jointly independent; in between only the empirical
/// outcome is reported.
pub fn classify_survival(
    basis: &SizedBasis,
    mapper: &Mapper,
    lebesgue: f64,
) -> Result<SurvivalReport> {
    let s_max = mapper.pullback.cover().s_max();
    let nerve = &mapper.nerve;
    let n1 = nerve.simplices(1).len();
    let mut elim = Eliminator::new(n1);
    if nerve.dim_cap() >= 2 {
        let bdry = nerve.boundary_matrix(2)?;
        for j in 0..bdry.ncols() {
            elim.insert(bdry.column(j));
        }
    }
    let mut entries = Vec::new();
    let mut survivors_independent = true;
    for (z, &size) in basis.cycles.iter().zip(&basis.sizes) {
        let image = push_cycle(&mapper.pullback, z)?;
        let v = image.to_vector(nerve)?;
        let image_null = elim.in_span(&v);
        let independent = if image_null { false } else { elim.insert(&v) };
        let verdict = if size < lebesgue {
            debug_assert!(image_null);
            Verdict::Dead
        } else if size > 4.0 * s_max {
            if !independent {
                survivors_independent = false;
            }
            Verdict::SurvivesIndependent
        } else {
            Verdict::Undetermined
        };
        entries.push(SurvivalEntry {
            size,
            verdict,
            image_null,
        });
    }
    Ok(SurvivalReport {
        lebesgue,
        s_max,
        entries,
        survivors_independent,
    })
}
