//! Pullback covers, nerves, mapper and multiscale mapper, the vertex
//! projection, and the two chain maps carrying 1-cycles between a domain and
//! its nerve.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::complex::{Chain, SimplicialComplex, VertexId, VertexMap};
use crate::covers::{Cover, TowerOfCovers, Value};
use crate::error::{Error, Result};

/// Nerve vertex id for pullback element (alpha, i).
pub fn element_name(alpha: usize, comp: usize) -> VertexId {
    format!("({alpha},{comp})")
}

/// One connected component of a vertex preimage.
#[derive(Clone, Debug)]
pub struct PullbackElement {
    pub alpha: usize,
    pub comp: usize,
    pub name: VertexId,
    pub vertices: BTreeSet<VertexId>,
}

/// The pullback of a codomain cover: per cover element, the connected
/// components of its vertex preimage in the domain 1-skeleton. Elements are
/// ordered by (alpha, component), components by smallest member vertex.
#[derive(Clone, Debug)]
pub struct PullbackCover {
    cover: Cover,
    elements: Vec<PullbackElement>,
}

impl PullbackCover {
    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn elements(&self) -> &[PullbackElement] {
        &self.elements
    }

    pub fn element_by_name(&self, name: &str) -> Option<&PullbackElement> {
        self.elements.iter().find(|e| e.name == name)
    }

    /// Indices of elements containing `v`, in (alpha, i) order.
    pub fn containing(&self, v: &VertexId) -> Vec<usize> {
        self.elements
            .iter()
            .enumerate()
            .filter(|(_, e)| e.vertices.contains(v))
            .map(|(i, _)| i)
            .collect()
    }

    /// The discrete projection: each domain vertex to the minimal (alpha, i)
    /// element containing it.
    pub fn vertex_projection(&self) -> BTreeMap<VertexId, VertexId> {
        let mut proj = BTreeMap::new();
        for e in &self.elements {
            for v in &e.vertices {
                proj.entry(v.clone()).or_insert_with(|| e.name.clone());
            }
        }
        proj
    }
}

fn adjacency(complex: &SimplicialComplex) -> HashMap<VertexId, Vec<VertexId>> {
    let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for v in complex.vertices() {
        adj.insert(v.clone(), Vec::new());
    }
    for e in complex.simplices(1) {
        adj.get_mut(&e[0]).unwrap().push(e[1].clone());
        adj.get_mut(&e[1]).unwrap().push(e[0].clone());
    }
    for neighbors in adj.values_mut() {
        neighbors.sort();
    }
    adj
}

/// Components of `subset` in the induced subgraph, each returned as a sorted
/// vertex set, ordered by smallest member.
fn induced_components(
    adj: &HashMap<VertexId, Vec<VertexId>>,
    subset: &BTreeSet<VertexId>,
) -> Vec<BTreeSet<VertexId>> {
    let mut seen: BTreeSet<&VertexId> = BTreeSet::new();
    let mut components = Vec::new();
    for start in subset {
        if seen.contains(start) {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(v) = queue.pop_front() {
            comp.insert(v.clone());
            for w in &adj[v] {
                if subset.contains(w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        components.push(comp);
    }
    // BTreeSet iteration over `subset` is sorted, so components already come
    // out ordered by smallest member.
    components
}

pub fn pullback_cover(
    domain: &SimplicialComplex,
    values: &BTreeMap<VertexId, Value>,
    cover: &Cover,
) -> Result<PullbackCover> {
    let adj = adjacency(domain);
    for v in domain.vertices() {
        let value = values.get(v).ok_or_else(|| Error::MissingValue(v.clone()))?;
        if !cover.elements().iter().any(|e| e.contains(value)) {
            return Err(Error::VertexNotCovered(v.clone()));
        }
    }
    let mut elements = Vec::new();
    for (alpha, e) in cover.elements().iter().enumerate() {
        let preimage: BTreeSet<VertexId> = domain
            .vertices()
            .iter()
            .filter(|v| e.contains(&values[*v]))
            .cloned()
            .collect();
        for (comp, vertices) in induced_components(&adj, &preimage).into_iter().enumerate() {
            elements.push(PullbackElement {
                alpha,
                comp,
                name: element_name(alpha, comp),
                vertices,
            });
        }
    }
    Ok(PullbackCover {
        cover: cover.clone(),
        elements,
    })
}

/// Nerve of an indexed family of vertex subsets: named elements span a
/// simplex iff they share a ground vertex. Capped at `dim_cap`.
pub fn nerve_of_sets(
    names: &[VertexId],
    sets: &[BTreeSet<VertexId>],
    dim_cap: usize,
) -> Result<SimplicialComplex> {
    debug_assert_eq!(names.len(), sets.len());
    let mut ground: BTreeSet<&VertexId> = BTreeSet::new();
    for s in sets {
        ground.extend(s.iter());
    }
    // A family has common intersection iff some ground vertex lies in all of
    // it, so the maximal simplices are the per-vertex containment sets.
    let mut maximal: BTreeSet<Vec<usize>> = BTreeSet::new();
    for g in ground {
        let holders: Vec<usize> = (0..sets.len()).filter(|&i| sets[i].contains(g)).collect();
        maximal.insert(holders);
    }
    let mut simplices = Vec::new();
    for holders in maximal {
        if holders.len() <= dim_cap + 1 {
            simplices.push(holders.iter().map(|&i| names[i].clone()).collect());
        } else {
            // only faces up to the cap survive
            combinations(&holders, dim_cap + 1, &mut simplices, names);
        }
    }
    SimplicialComplex::build(names.to_vec(), simplices, dim_cap)
}

fn combinations(
    holders: &[usize],
    size: usize,
    out: &mut Vec<Vec<VertexId>>,
    names: &[VertexId],
) {
    let mut stack = vec![(0usize, Vec::new())];
    while let Some((start, chosen)) = stack.pop() {
        if chosen.len() == size {
            out.push(chosen.iter().map(|&i: &usize| names[i].clone()).collect());
            continue;
        }
        for (offset, &h) in holders[start..].iter().enumerate() {
            let mut next = chosen.clone();
            next.push(h);
            stack.push((start + offset + 1, next));
        }
    }
}

/// Nerve of a codomain cover (for intrinsic ball covers, this is the
/// intrinsic Cech complex). Elements are named (alpha, 0).
pub fn cover_nerve(cover: &Cover, dim_cap: usize) -> Result<SimplicialComplex> {
    let sets: Vec<BTreeSet<VertexId>> = cover
        .elements()
        .iter()
        .map(|e| match e {
            crate::covers::CoverElement::Points(set) => Ok(set.clone()),
            crate::covers::CoverElement::Interval { .. } => Err(Error::InvalidCover(
                "nerve of interval covers goes through a pullback".into(),
            )),
        })
        .collect::<Result<_>>()?;
    let names: Vec<VertexId> = (0..sets.len()).map(|a| element_name(a, 0)).collect();
    nerve_of_sets(&names, &sets, dim_cap)
}

/// A mapper: the nerve of a pullback cover.
#[derive(Clone, Debug)]
pub struct Mapper {
    pub pullback: PullbackCover,
    pub nerve: SimplicialComplex,
}

pub fn mapper(
    domain: &SimplicialComplex,
    values: &BTreeMap<VertexId, Value>,
    cover: &Cover,
    dim_cap: usize,
) -> Result<Mapper> {
    let pullback = pullback_cover(domain, values, cover)?;
    let names: Vec<VertexId> = pullback.elements().iter().map(|e| e.name.clone()).collect();
    let sets: Vec<BTreeSet<VertexId>> = pullback
        .elements()
        .iter()
        .map(|e| e.vertices.clone())
        .collect();
    let nerve = nerve_of_sets(&names, &sets, dim_cap)?;
    Ok(Mapper { pullback, nerve })
}

/// Mappers over every scale of a tower, with simplicial connecting maps.
#[derive(Clone, Debug)]
pub struct SimplicialTower {
    pub scales: Vec<f64>,
    pub mappers: Vec<Mapper>,
    /// maps[i]: nerve at scale i -> nerve at scale i+1
    pub maps: Vec<VertexMap>,
}

pub fn multiscale_mapper(
    domain: &SimplicialComplex,
    values: &BTreeMap<VertexId, Value>,
    tower: &TowerOfCovers,
    dim_cap: usize,
) -> Result<SimplicialTower> {
    let mappers: Vec<Mapper> = tower
        .covers()
        .iter()
        .map(|c| mapper(domain, values, c, dim_cap))
        .collect::<Result<_>>()?;
    let mut maps = Vec::new();
    for i in 0..mappers.len().saturating_sub(1) {
        let (fine, coarse) = (&mappers[i], &mappers[i + 1]);
        let xi = tower.maps()[i].assignment();
        let mut assignment = BTreeMap::new();
        for e in fine.pullback.elements() {
            let beta = xi[e.alpha];
            // V_{alpha,i} sits inside the preimage of the coarser element, so
            // any member vertex identifies the containing component.
            let witness = e.vertices.iter().next().expect("elements are nonempty");
            let target = coarse
                .pullback
                .elements()
                .iter()
                .find(|t| t.alpha == beta && t.vertices.contains(witness))
                .ok_or_else(|| Error::InvalidCover("tower map breaks inclusion".into()))?;
            assignment.insert(e.name.clone(), target.name.clone());
        }
        maps.push(VertexMap::new(&fine.nerve, &coarse.nerve, assignment)?);
    }
    Ok(SimplicialTower {
        scales: tower.scales().to_vec(),
        mappers,
        maps,
    })
}

/// Push a domain 1-cycle into the nerve: each edge {x, y} contributes the
/// two-step path p(x) - w - p(y) through the minimal element w containing the
/// whole edge; degenerate steps vanish mod 2.
pub fn push_cycle(pullback: &PullbackCover, z: &Chain) -> Result<Chain> {
    debug_assert_eq!(z.dim, 1);
    let proj = pullback.vertex_projection();
    let mut out = Chain::empty(1);
    for edge in &z.support {
        let (x, y) = (&edge[0], &edge[1]);
        let w = pullback
            .elements
            .iter()
            .find(|e| e.vertices.contains(x) && e.vertices.contains(y))
            .ok_or_else(|| Error::EdgeNotCovered(x.clone(), y.clone()))?;
        let px = proj
            .get(x)
            .ok_or_else(|| Error::MissingAssignment(x.clone()))?;
        let py = proj
            .get(y)
            .ok_or_else(|| Error::MissingAssignment(y.clone()))?;
        for (a, b) in [(px, &w.name), (&w.name, py)] {
            if a != b {
                out.toggle(vec![a.clone(), b.clone()]);
            }
        }
    }
    Ok(out)
}

/// Pull a nerve 1-cycle back to the domain: fixed representatives (smallest
/// vertex id per element) joined by BFS paths inside the union of the two
/// incident elements.
pub fn pull_cycle(
    pullback: &PullbackCover,
    domain: &SimplicialComplex,
    gamma: &Chain,
) -> Result<Chain> {
    debug_assert_eq!(gamma.dim, 1);
    let adj = adjacency(domain);
    let mut out = Chain::empty(1);
    for edge in &gamma.support {
        let u = pullback
            .element_by_name(&edge[0])
            .ok_or_else(|| Error::UnknownVertex(edge[0].clone()))?;
        let v = pullback
            .element_by_name(&edge[1])
            .ok_or_else(|| Error::UnknownVertex(edge[1].clone()))?;
        let au = u.vertices.iter().next().expect("nonempty").clone();
        let av = v.vertices.iter().next().expect("nonempty").clone();
        let region: BTreeSet<VertexId> = u.vertices.union(&v.vertices).cloned().collect();
        let path = bfs_path(&adj, &region, &au, &av)
            .ok_or_else(|| Error::EdgeNotCovered(edge[0].clone(), edge[1].clone()))?;
        for pair in path.windows(2) {
            out.toggle(vec![pair[0].clone(), pair[1].clone()]);
        }
    }
    Ok(out)
}

fn bfs_path(
    adj: &HashMap<VertexId, Vec<VertexId>>,
    region: &BTreeSet<VertexId>,
    from: &VertexId,
    to: &VertexId,
) -> Option<Vec<VertexId>> {
    if from == to {
        return Some(vec![from.clone()]);
    }
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut queue = VecDeque::from([from.clone()]);
    parent.insert(from.clone(), from.clone());
    while let Some(v) = queue.pop_front() {
        for w in &adj[&v] {
            if region.contains(w) && !parent.contains_key(w) {
                parent.insert(w.clone(), v.clone());
                if w == to {
                    let mut path = vec![w.clone()];
                    let mut cur = w.clone();
                    while cur != *from {
                        cur = parent[&cur].clone();
                        path.push(cur.clone());
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(w.clone());
            }
        }
    }
    None
}

/// Rank of the map induced on H1 by a simplicial vertex map: the dimension of
/// the span of pushed basis classes inside H1 of the target.
pub fn h1_image_rank(
    source: &SimplicialComplex,
    target: &SimplicialComplex,
    map: &VertexMap,
) -> Result<usize> {
    let basis = source.homology_basis(1)?;
    let n1 = target.simplices(1).len();
    let mut elim = crate::z2::Eliminator::new(n1);
    if target.dim_cap() >= 2 && !target.simplices(2).is_empty() {
        let bdry = target.boundary_matrix(2)?;
        for j in 0..bdry.ncols() {
            elim.insert(bdry.column(j));
        }
    }
    let mut rank = 0;
    for z in &basis.cycles {
        let image = map.push_chain(source, target, z)?;
        if elim.insert(&image.to_vector(target)?) {
            rank += 1;
        }
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::{Codomain, CoverElement};
    use crate::fixtures;

    fn tent_pullback() -> PullbackCover {
        pullback_cover(
            &fixtures::tent_complex(),
            &fixtures::tent_values(),
            &fixtures::cover4(),
        )
        .unwrap()
    }

    #[test]
    fn tent_pullback_elements() {
        let pb = tent_pullback();
        let got: Vec<(usize, usize, Vec<&str>)> = pb
            .elements()
            .iter()
            .map(|e| {
                (
                    e.alpha,
                    e.comp,
                    e.vertices.iter().map(|s| s.as_str()).collect(),
                )
            })
            .collect();
        assert_eq!(
            got,
            vec![
                (0, 0, vec!["v0", "v1", "v7"]),
                (1, 0, vec!["v1", "v2"]),
                (1, 1, vec!["v6", "v7"]),
                (2, 0, vec!["v2", "v3"]),
                (2, 1, vec!["v5", "v6"]),
                (3, 0, vec!["v3", "v4", "v5"]),
            ]
        );
    }

    #[test]
    fn single_element_cover_gives_one_component() {
        let cover = Cover::new(
            fixtures::tent_codomain(),
            vec![CoverElement::Interval { lo: -1.0, hi: 5.0 }],
        )
        .unwrap();
        let pb = pullback_cover(
            &fixtures::tent_complex(),
            &fixtures::tent_values(),
            &cover,
        )
        .unwrap();
        assert_eq!(pb.elements().len(), 1);
        assert_eq!(pb.elements()[0].vertices.len(), 8);
    }

    #[test]
    fn pinch_pullback_one_component_per_arc() {
        let pb = pullback_cover(
            &fixtures::pinch_complex(),
            &fixtures::pinch_values(),
            &fixtures::pinch_cover(),
        )
        .unwrap();
        assert_eq!(pb.elements().len(), 4);
        for e in pb.elements() {
            assert_eq!(e.vertices.len(), 9);
            assert_eq!(e.comp, 0);
        }
    }

    #[test]
    fn uncovered_vertex_is_rejected() {
        let cover = Cover::new(
            Codomain::real(0.0, 2.0).unwrap(),
            vec![CoverElement::Interval { lo: -0.5, hi: 2.5 }],
        )
        .unwrap();
        let err = pullback_cover(
            &fixtures::tent_complex(),
            &fixtures::tent_values(),
            &cover,
        );
        assert!(matches!(err, Err(Error::VertexNotCovered(_))));
    }

    #[test]
    fn tent_nerve_is_a_hexagon() {
        let m = mapper(
            &fixtures::tent_complex(),
            &fixtures::tent_values(),
            &fixtures::cover4(),
            3,
        )
        .unwrap();
        assert_eq!(m.nerve.simplices(0).len(), 6);
        assert_eq!(m.nerve.simplices(1).len(), 6);
        assert_eq!(m.nerve.simplices(2).len(), 0);
        assert_eq!(m.nerve.homology_basis(1).unwrap().betti, 1);
    }

    #[test]
    fn single_element_nerve_is_a_point() {
        let cover = Cover::new(
            fixtures::tent_codomain(),
            vec![CoverElement::Interval { lo: -1.0, hi: 5.0 }],
        )
        .unwrap();
        let m = mapper(
            &fixtures::tent_complex(),
            &fixtures::tent_values(),
            &cover,
            3,
        )
        .unwrap();
        assert_eq!(m.nerve.simplices(0).len(), 1);
        assert_eq!(m.nerve.homology_basis(1).unwrap().betti, 0);
    }

    #[test]
    fn pinch_nerve_is_boundary_of_tetrahedron() {
        let m = mapper(
            &fixtures::pinch_complex(),
            &fixtures::pinch_values(),
            &fixtures::pinch_cover(),
            3,
        )
        .unwrap();
        assert_eq!(m.nerve.simplices(0).len(), 4);
        assert_eq!(m.nerve.simplices(1).len(), 6);
        assert_eq!(m.nerve.simplices(2).len(), 4);
        assert_eq!(m.nerve.simplices(3).len(), 0);
        assert_eq!(m.nerve.homology_basis(1).unwrap().betti, 0);
        assert_eq!(m.nerve.homology_basis(2).unwrap().betti, 1);
        // the domain graph has no 2-cycles at all
        assert_eq!(
            fixtures::pinch_complex().homology_basis(2).unwrap().betti,
            0
        );
    }

    #[test]
    fn cover_nerve_of_balls_matches_cycle() {
        let m = crate::covers::FiniteMetricSpace::cycle(6);
        let cover = crate::covers::all_balls_cover(&m, 1.0).unwrap();
        let nerve = cover_nerve(&cover, 3).unwrap();
        // radius-1 balls on C6: consecutive triples intersect pairwise and
        // in triples, so the nerve carries 6 triangles and beta1 = 1
        assert_eq!(nerve.simplices(0).len(), 6);
        assert_eq!(nerve.homology_basis(1).unwrap().betti, 1);
    }

    #[test]
    fn vertex_projection_prefers_minimal_element() {
        let pb = tent_pullback();
        let proj = pb.vertex_projection();
        assert_eq!(proj["v1"], "(0,0)");
        assert_eq!(proj["v7"], "(0,0)");
        assert_eq!(proj["v2"], "(1,0)");
        assert_eq!(proj["v4"], "(3,0)");
    }

    #[test]
    fn push_full_tent_cycle_generates_the_hexagon() {
        let m = mapper(
            &fixtures::tent_complex(),
            &fixtures::tent_values(),
            &fixtures::cover4(),
            3,
        )
        .unwrap();
        let domain = fixtures::tent_complex();
        let z = domain.homology_basis(1).unwrap().cycles[0].clone();
        let image = push_cycle(&m.pullback, &z).unwrap();
        assert!(m.nerve.is_cycle(&image).unwrap());
        let hexagon = m.nerve.homology_basis(1).unwrap().cycles[0].clone();
        assert!(m.nerve.homologous(&image, &hexagon).unwrap());
    }

    #[test]
    fn cycle_inside_one_element_pushes_to_zero_class() {
        // FIX-EIGHT flat loop: all three vertices share the value 0, so any
        // cover element containing 0 swallows the whole loop.
        let m = mapper(
            &fixtures::eight_complex(),
            &fixtures::eight_values(),
            &Cover::new(
                fixtures::eight_codomain(),
                vec![
                    CoverElement::Interval { lo: -0.5, hi: 1.5 },
                    CoverElement::Interval { lo: 0.5, hi: 2.5 },
                ],
            )
            .unwrap(),
            3,
        )
        .unwrap();
        let flat = Chain::new(
            1,
            vec![
                vec!["a".into(), "b".into()],
                vec!["b".into(), "c".into()],
                vec!["a".into(), "c".into()],
            ],
        );
        let image = push_cycle(&m.pullback, &flat).unwrap();
        assert!(m.nerve.is_cycle(&image).unwrap());
        assert!(m.nerve.homologous(&image, &Chain::empty(1)).unwrap());
    }

    #[test]
    fn pull_then_push_preserves_class() {
        let domain = fixtures::tent_complex();
        let m = mapper(
            &domain,
            &fixtures::tent_values(),
            &fixtures::cover4(),
            3,
        )
        .unwrap();
        let gamma = m.nerve.homology_basis(1).unwrap().cycles[0].clone();
        let pulled = pull_cycle(&m.pullback, &domain, &gamma).unwrap();
        assert!(domain.is_cycle(&pulled).unwrap());
        // pulled cycle is homologous to the C8 generator
        let c8 = domain.homology_basis(1).unwrap().cycles[0].clone();
        assert!(domain.homologous(&pulled, &c8).unwrap());
        let back = push_cycle(&m.pullback, &pulled).unwrap();
        assert!(m.nerve.homologous(&back, &gamma).unwrap());
    }

    #[test]
    fn pull_empty_is_empty() {
        let domain = fixtures::tent_complex();
        let pb = tent_pullback();
        let pulled = pull_cycle(&pb, &domain, &Chain::empty(1)).unwrap();
        assert!(pulled.is_empty());
    }

    #[test]
    fn multiscale_tent_tower() {
        let domain = fixtures::tent_complex();
        let tower =
            crate::covers::good_tower(&fixtures::tent_codomain(), 2.0, 2.0, 3).unwrap();
        let mm = multiscale_mapper(&domain, &fixtures::tent_values(), &tower, 3).unwrap();
        assert_eq!(mm.scales, vec![2.0, 4.0, 8.0]);
        let bettis: Vec<usize> = mm
            .mappers
            .iter()
            .map(|m| m.nerve.homology_basis(1).unwrap().betti)
            .collect();
        assert_eq!(bettis[0], 1);
        assert_eq!(*bettis.last().unwrap(), 0);
        assert!(bettis.windows(2).all(|w| w[0] >= w[1]));
        // connecting maps are simplicial (validated at construction) and
        // surjective on H1
        for i in 0..mm.maps.len() {
            let rank = h1_image_rank(
                &mm.mappers[i].nerve,
                &mm.mappers[i + 1].nerve,
                &mm.maps[i],
            )
            .unwrap();
            assert_eq!(rank, bettis[i + 1]);
        }
    }

    #[test]
    fn identity_tower_gives_identity_map() {
        let cover = fixtures::cover4();
        let tower = TowerOfCovers::new(
            vec![2.0, 3.0],
            vec![cover.clone(), cover.clone()],
            vec![crate::covers::cover_map(&cover, &cover).unwrap()],
        )
        .unwrap();
        let mm = multiscale_mapper(
            &fixtures::tent_complex(),
            &fixtures::tent_values(),
            &tower,
            3,
        )
        .unwrap();
        for (v, w) in mm.maps[0].assignment() {
            assert_eq!(v, w);
        }
    }

    #[test]
    fn random_mappers_have_surjective_h1() {
        for seed in 0..15 {
            let inst = fixtures::random_real_instance(seed);
            let m = mapper(&inst.complex, &inst.values, &inst.cover, 3).unwrap();
            let basis = inst.complex.homology_basis(1).unwrap();
            let n1 = m.nerve.simplices(1).len();
            let mut elim = crate::z2::Eliminator::new(n1);
            if !m.nerve.simplices(2).is_empty() {
                let bdry = m.nerve.boundary_matrix(2).unwrap();
                for j in 0..bdry.ncols() {
                    elim.insert(bdry.column(j));
                }
            }
            let mut rank = 0;
            for z in &basis.cycles {
                let image = push_cycle(&m.pullback, z).unwrap();
                assert!(m.nerve.is_cycle(&image).unwrap());
                if elim.insert(&image.to_vector(&m.nerve).unwrap()) {
                    rank += 1;
                }
            }
            assert_eq!(
                rank,
                m.nerve.homology_basis(1).unwrap().betti,
                "seed {seed}"
            );
        }
    }
}
