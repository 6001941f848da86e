//! Finite abstract simplicial complexes with Z/2 chain algebra.
//!
//! Simplices are sorted vertex-id vectors; the canonical order of the
//! k-simplices is lexicographic, which makes every matrix and every homology
//! basis deterministic.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::z2::{Eliminator, Z2Matrix, Z2Vector};

pub type VertexId = String;

/// A simplex as a sorted, duplicate-free vertex list.
pub type Simplex = Vec<VertexId>;

fn canonical(mut vertices: Vec<VertexId>) -> Simplex {
    vertices.sort();
    vertices.dedup();
    vertices
}

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertices: Vec<VertexId>,
    /// grades[k] = the k-simplices in canonical (lexicographic) order.
    grades: Vec<Vec<Simplex>>,
    /// simplex -> (dimension, index within its grade)
    index: HashMap<Simplex, (usize, usize)>,
    dim_cap: usize,
}

impl SimplicialComplex {
    /// Builds the face closure of the given maximal simplices, truncated at
    /// `dim_cap`.
    pub fn build(
        vertices: Vec<VertexId>,
        maximal_simplices: Vec<Vec<VertexId>>,
        dim_cap: usize,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let mut simplices: BTreeSet<Simplex> = BTreeSet::new();
        for v in &vertices {
            simplices.insert(vec![v.clone()]);
        }
        for raw in maximal_simplices {
            let sigma = canonical(raw);
            for v in &sigma {
                if !seen.contains(v) {
                    return Err(Error::UnknownVertex(v.clone()));
                }
            }
            if sigma.is_empty() {
                continue;
            }
            insert_with_faces(&mut simplices, &sigma, dim_cap);
        }
        let mut grades: Vec<Vec<Simplex>> = vec![Vec::new(); dim_cap + 1];
        for s in simplices {
            grades[s.len() - 1].push(s);
        }
        // BTreeSet iteration is sorted, but group per grade and re-sort for clarity.
        for g in &mut grades {
            g.sort();
        }
        let mut index = HashMap::new();
        for (k, g) in grades.iter().enumerate() {
            for (i, s) in g.iter().enumerate() {
                index.insert(s.clone(), (k, i));
            }
        }
        let mut vertices = vertices;
        vertices.sort();
        Ok(SimplicialComplex {
            vertices,
            grades,
            index,
            dim_cap,
        })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    /// Highest dimension in which a simplex is actually stored.
    pub fn dimension(&self) -> usize {
        (0..=self.dim_cap)
            .rev()
            .find(|&k| !self.grades[k].is_empty())
            .unwrap_or(0)
    }

    /// The k-simplices in canonical order.
    pub fn simplices(&self, k: usize) -> &[Simplex] {
        if k > self.dim_cap {
            &[]
        } else {
            &self.grades[k]
        }
    }

    pub fn contains(&self, simplex: &[VertexId]) -> bool {
        self.index.contains_key(&canonical(simplex.to_vec()))
    }

    pub fn simplex_index(&self, simplex: &[VertexId]) -> Option<(usize, usize)> {
        self.index.get(&canonical(simplex.to_vec())).copied()
    }

    /// Maximal simplices: those that are a face of no stored coface.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut maximal = Vec::new();
        for k in 0..=self.dim_cap {
            'outer: for s in &self.grades[k] {
                if k + 1 <= self.dim_cap {
                    for t in &self.grades[k + 1] {
                        if s.iter().all(|v| t.contains(v)) {
                            continue 'outer;
                        }
                    }
                }
                maximal.push(s.clone());
            }
        }
        maximal
    }

    /// Edges of the 1-skeleton as index pairs into `vertices()`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let pos: HashMap<&VertexId, usize> =
            self.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        self.simplices(1)
            .iter()
            .map(|e| (pos[&e[0]], pos[&e[1]]))
            .collect()
    }

    /// Boundary matrix from k-chains to (k-1)-chains.
    pub fn boundary_matrix(&self, k: usize) -> Result<Z2Matrix> {
        if k == 0 || k > self.dim_cap {
            return Err(Error::DimOutOfRange {
                k,
                dim_cap: self.dim_cap,
            });
        }
        let rows = self.grades[k - 1].len();
        let mut m = Z2Matrix::zeros(rows, self.grades[k].len());
        for (j, sigma) in self.grades[k].iter().enumerate() {
            for omit in 0..sigma.len() {
                let mut face = sigma.clone();
                face.remove(omit);
                let (_, i) = self.index[&face];
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    /// Representatives and rank of H_k. When dim_cap < k+1 this is the
    /// homology of the stored k-skeleton (no (k+1)-boundaries are quotiented).
    pub fn homology_basis(&self, k: usize) -> Result<HomologyBasis> {
        if k > self.dim_cap {
            return Err(Error::DimOutOfRange {
                k,
                dim_cap: self.dim_cap,
            });
        }
        let nk = self.grades[k].len();
        let cycle_vectors: Vec<Z2Vector> = if k == 0 {
            (0..nk).map(|i| Z2Vector::from_indices(nk, &[i])).collect()
        } else {
            self.boundary_matrix(k)?.kernel_basis()
        };
        let mut elim = Eliminator::new(nk);
        if k + 1 <= self.dim_cap {
            let bdry = self.boundary_matrix(k + 1)?;
            for j in 0..bdry.ncols() {
                elim.insert(bdry.column(j));
            }
        }
        let mut cycles = Vec::new();
        for z in cycle_vectors {
            if elim.insert(&z) {
                cycles.push(Chain::from_vector(self, k, &z));
            }
        }
        let betti = cycles.len();
        Ok(HomologyBasis { k, cycles, betti })
    }

    /// Decides whether z1 and z2 represent the same class in H_k.
    pub fn homologous(&self, z1: &Chain, z2: &Chain) -> Result<bool> {
        if z1.dim != z2.dim {
            return Err(Error::MapMismatch);
        }
        let k = z1.dim;
        if !self.is_cycle(z1)? || !self.is_cycle(z2)? {
            return Err(Error::NotACycle);
        }
        let mut diff = z1.to_vector(self)?;
        diff.add_assign(&z2.to_vector(self)?);
        if diff.is_zero() {
            return Ok(true);
        }
        if k + 1 > self.dim_cap {
            return Ok(false);
        }
        let bdry = self.boundary_matrix(k + 1)?;
        Ok(bdry.solve(&diff).is_some())
    }

    pub fn is_cycle(&self, z: &Chain) -> Result<bool> {
        if z.dim == 0 {
            return Ok(true);
        }
        let v = z.to_vector(self)?;
        Ok(self.boundary_matrix(z.dim)?.apply(&v).is_zero())
    }
}

fn insert_with_faces(set: &mut BTreeSet<Simplex>, sigma: &Simplex, dim_cap: usize) {
    // All nonempty subsets of sigma with dimension <= dim_cap.
    let n = sigma.len();
    for mask in 1u64..(1 << n) {
        let count = mask.count_ones() as usize;
        if count > dim_cap + 1 {
            continue;
        }
        let face: Simplex = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| sigma[i].clone())
            .collect();
        set.insert(face);
    }
}

/// A k-chain with implicit Z/2 coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub dim: usize,
    pub support: BTreeSet<Simplex>,
}

impl Chain {
    pub fn new(dim: usize, support: impl IntoIterator<Item = Vec<VertexId>>) -> Self {
        Chain {
            dim,
            support: support.into_iter().map(canonical).collect(),
        }
    }

    pub fn empty(dim: usize) -> Self {
        Chain {
            dim,
            support: BTreeSet::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Vertices appearing in the support.
    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.support.iter().flatten().cloned().collect()
    }

    /// Symmetric difference: mod-2 addition of chains.
    pub fn add(&self, other: &Chain) -> Chain {
        debug_assert_eq!(self.dim, other.dim);
        let support = self
            .support
            .symmetric_difference(&other.support)
            .cloned()
            .collect();
        Chain {
            dim: self.dim,
            support,
        }
    }

    /// Toggle a single simplex in or out of the support.
    pub fn toggle(&mut self, simplex: Simplex) {
        let simplex = canonical(simplex);
        if !self.support.remove(&simplex) {
            self.support.insert(simplex);
        }
    }

    pub fn to_vector(&self, complex: &SimplicialComplex) -> Result<Z2Vector> {
        let mut v = Z2Vector::zeros(complex.simplices(self.dim).len());
        for s in &self.support {
            let (k, i) = complex
                .simplex_index(s)
                .ok_or_else(|| Error::UnknownSimplex(s.clone(), self.dim))?;
            if k != self.dim {
                return Err(Error::UnknownSimplex(s.clone(), self.dim));
            }
            v.set(i, true);
        }
        Ok(v)
    }

    pub fn from_vector(complex: &SimplicialComplex, dim: usize, v: &Z2Vector) -> Chain {
        let support = v
            .iter_ones()
            .map(|i| complex.simplices(dim)[i].clone())
            .collect();
        Chain { dim, support }
    }
}

/// A basis of H_k with explicit cycle representatives.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub k: usize,
    pub cycles: Vec<Chain>,
    pub betti: usize,
}

/// A simplicial vertex map between two complexes; simpliciality is checked at
/// construction.
#[derive(Clone, Debug)]
pub struct VertexMap {
    assignment: BTreeMap<VertexId, VertexId>,
}

impl VertexMap {
    pub fn new(
        source: &SimplicialComplex,
        target: &SimplicialComplex,
        assignment: BTreeMap<VertexId, VertexId>,
    ) -> Result<Self> {
        let map = VertexMap { assignment };
        match map.simpliciality_witness(source, target)? {
            None => Ok(map),
            Some(witness) => Err(Error::NotSimplicial(witness)),
        }
    }

    pub fn identity(complex: &SimplicialComplex) -> Self {
        VertexMap {
            assignment: complex
                .vertices()
                .iter()
                .map(|v| (v.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn assignment(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.assignment
    }

    pub fn apply_vertex(&self, v: &VertexId) -> Result<&VertexId> {
        self.assignment
            .get(v)
            .ok_or_else(|| Error::MissingAssignment(v.clone()))
    }

    /// Image of a simplex with duplicate vertices collapsed.
    pub fn apply_simplex(&self, sigma: &[VertexId]) -> Result<Simplex> {
        let mut image = Vec::with_capacity(sigma.len());
        for v in sigma {
            image.push(self.apply_vertex(v)?.clone());
        }
        Ok(canonical(image))
    }

    /// None when the map is simplicial, otherwise a source simplex whose image
    /// is not a target simplex.
    pub fn simpliciality_witness(
        &self,
        source: &SimplicialComplex,
        target: &SimplicialComplex,
    ) -> Result<Option<Simplex>> {
        for k in 0..=source.dim_cap() {
            for sigma in source.simplices(k) {
                let image = self.apply_simplex(sigma)?;
                if !target.contains(&image) {
                    return Ok(Some(sigma.clone()));
                }
            }
        }
        Ok(None)
    }

    /// Composition `other . self` (self first).
    pub fn compose(&self, other: &VertexMap) -> Result<VertexMap> {
        let mut assignment = BTreeMap::new();
        for (v, w) in &self.assignment {
            assignment.insert(v.clone(), other.apply_vertex(w)?.clone());
        }
        Ok(VertexMap { assignment })
    }

    /// Matrix of the induced chain map on k-chains; simplices with degenerate
    /// image contribute the zero column.
    pub fn induced_chain_map(
        &self,
        source: &SimplicialComplex,
        target: &SimplicialComplex,
        k: usize,
    ) -> Result<Z2Matrix> {
        if k > source.dim_cap() || k > target.dim_cap() {
            return Err(Error::DimOutOfRange {
                k,
                dim_cap: source.dim_cap().min(target.dim_cap()),
            });
        }
        let rows = target.simplices(k).len();
        let mut m = Z2Matrix::zeros(rows, source.simplices(k).len());
        for (j, sigma) in source.simplices(k).iter().enumerate() {
            let image = self.apply_simplex(sigma)?;
            if image.len() == k + 1 {
                let (_, i) = target
                    .simplex_index(&image)
                    .ok_or(Error::NotSimplicial(sigma.clone()))?;
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    /// Push a chain forward along the map (degenerate images vanish).
    pub fn push_chain(
        &self,
        source: &SimplicialComplex,
        target: &SimplicialComplex,
        chain: &Chain,
    ) -> Result<Chain> {
        let m = self.induced_chain_map(source, target, chain.dim)?;
        let v = chain.to_vector(source)?;
        Ok(Chain::from_vector(target, chain.dim, &m.apply(&v)))
    }
}

/// True when, for every source simplex, the union of the two images spans a
/// target simplex.
pub fn are_contiguous(
    source: &SimplicialComplex,
    target: &SimplicialComplex,
    m1: &VertexMap,
    m2: &VertexMap,
) -> Result<bool> {
    for k in 0..=source.dim_cap() {
        for sigma in source.simplices(k) {
            let mut union = m1.apply_simplex(sigma)?;
            union.extend(m2.apply_simplex(sigma)?);
            let union = canonical(union);
            if !target.contains(&union) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn cycle_graph(n: usize) -> SimplicialComplex {
        let vertices: Vec<VertexId> = (0..n).map(|i| format!("v{i}")).collect();
        let edges = (0..n)
            .map(|i| vec![format!("v{i}"), format!("v{}", (i + 1) % n)])
            .collect();
        SimplicialComplex::build(vertices, edges, 2).unwrap()
    }

    fn path_graph(n: usize) -> SimplicialComplex {
        let vertices: Vec<VertexId> = (0..n).map(|i| format!("v{i}")).collect();
        let edges = (0..n - 1)
            .map(|i| vec![format!("v{i}"), format!("v{}", i + 1)])
            .collect();
        SimplicialComplex::build(vertices, edges, 2).unwrap()
    }

    #[test]
    fn point_complex() {
        let k = SimplicialComplex::build(vec!["a".into()], vec![vec!["a".into()]], 2).unwrap();
        assert_eq!(k.simplices(0).len(), 1);
        assert_eq!(k.simplices(1).len(), 0);
    }

    #[test]
    fn cycle_graph_counts() {
        let k = cycle_graph(8);
        assert_eq!(k.simplices(0).len(), 8);
        assert_eq!(k.simplices(1).len(), 8);
        assert_eq!(k.simplices(2).len(), 0);
    }

    #[test]
    fn tetrahedron_capped_at_two() {
        // Face-count oracle: C(4, k+1) faces in each dimension k <= 2.
        let vertices: Vec<VertexId> = (0..4).map(|i| format!("v{i}")).collect();
        let k = SimplicialComplex::build(vertices.clone(), vec![vertices], 2).unwrap();
        assert_eq!(k.simplices(0).len(), 4);
        assert_eq!(k.simplices(1).len(), 6);
        assert_eq!(k.simplices(2).len(), 4);
        assert_eq!(k.dim_cap(), 2);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(matches!(
            SimplicialComplex::build(vec!["a".into(), "a".into()], vec![], 1),
            Err(Error::DuplicateVertex(_))
        ));
        assert!(matches!(
            SimplicialComplex::build(vec!["a".into()], vec![vec!["b".into()]], 1),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn cycle_boundary_columns() {
        let k = cycle_graph(8);
        let d1 = k.boundary_matrix(1).unwrap();
        assert_eq!(d1.nrows(), 8);
        assert_eq!(d1.ncols(), 8);
        for j in 0..8 {
            assert_eq!(d1.column(j).iter_ones().count(), 2);
        }
    }

    #[test]
    fn triangle_boundary() {
        let vs: Vec<VertexId> = vec!["a".into(), "b".into(), "c".into()];
        let k = SimplicialComplex::build(vs.clone(), vec![vs], 2).unwrap();
        let d2 = k.boundary_matrix(2).unwrap();
        assert_eq!(d2.nrows(), 3);
        assert_eq!(d2.ncols(), 1);
        assert_eq!(d2.column(0).iter_ones().count(), 3);
    }

    #[test]
    fn boundary_squares_to_zero() {
        let vertices: Vec<VertexId> = (0..4).map(|i| format!("v{i}")).collect();
        let k = SimplicialComplex::build(vertices.clone(), vec![vertices], 3).unwrap();
        for dim in 2..=3 {
            let hi = k.boundary_matrix(dim).unwrap();
            let lo = k.boundary_matrix(dim - 1).unwrap();
            let prod = lo.multiply(&hi);
            for j in 0..prod.ncols() {
                assert!(prod.column(j).is_zero());
            }
        }
    }

    #[test]
    fn sphere_boundary_rank() {
        // Boundary of the 3-simplex: 6x4 matrix of rank 3.
        let vertices: Vec<VertexId> = (0..4).map(|i| format!("v{i}")).collect();
        let triangles = vec![
            vec!["v0".into(), "v1".into(), "v2".into()],
            vec!["v0".into(), "v1".into(), "v3".into()],
            vec!["v0".into(), "v2".into(), "v3".into()],
            vec!["v1".into(), "v2".into(), "v3".into()],
        ];
        let k = SimplicialComplex::build(vertices, triangles, 3).unwrap();
        let d2 = k.boundary_matrix(2).unwrap();
        assert_eq!((d2.nrows(), d2.ncols()), (6, 4));
        assert_eq!(d2.rank(), 3);
        // And H2 of the sphere has rank 1.
        assert_eq!(k.homology_basis(2).unwrap().betti, 1);
    }

    #[test]
    fn cycle_h1() {
        let k = cycle_graph(8);
        let basis = k.homology_basis(1).unwrap();
        assert_eq!(basis.betti, 1);
        assert_eq!(basis.cycles[0].support.len(), 8);
        assert!(k.is_cycle(&basis.cycles[0]).unwrap());
    }

    #[test]
    fn figure_eight_h1() {
        // E - V + components = 8 - 7 + 1 = 2.
        let k = crate::fixtures::eight_complex();
        assert_eq!(k.homology_basis(1).unwrap().betti, 2);
    }

    #[test]
    fn simpliciality_checks() {
        let c8 = cycle_graph(8);
        let id = VertexMap::identity(&c8);
        assert!(id.simpliciality_witness(&c8, &c8).unwrap().is_none());

        let point =
            SimplicialComplex::build(vec!["p".into()], vec![vec!["p".into()]], 2).unwrap();
        let constant = VertexMap::new(
            &c8,
            &point,
            c8.vertices()
                .iter()
                .map(|v| (v.clone(), "p".to_string()))
                .collect(),
        );
        assert!(constant.is_ok());

        let path = path_graph(8);
        let to_path: BTreeMap<VertexId, VertexId> = c8
            .vertices()
            .iter()
            .map(|v| (v.clone(), v.clone()))
            .collect();
        let bad = VertexMap {
            assignment: to_path,
        };
        let witness = bad.simpliciality_witness(&c8, &path).unwrap().unwrap();
        assert_eq!(witness, vec!["v0".to_string(), "v7".to_string()]);
    }

    #[test]
    fn contiguity_with_self() {
        let c8 = cycle_graph(8);
        let id = VertexMap::identity(&c8);
        assert!(are_contiguous(&c8, &c8, &id, &id).unwrap());
    }

    #[test]
    fn antipodal_hexagon_maps_not_contiguous() {
        let hex = cycle_graph(6);
        let id = VertexMap::identity(&hex);
        let antipodal = VertexMap::new(
            &hex,
            &hex,
            (0..6)
                .map(|i| (format!("v{i}"), format!("v{}", (i + 3) % 6)))
                .collect(),
        )
        .unwrap();
        assert!(!are_contiguous(&hex, &hex, &id, &antipodal).unwrap());
    }

    #[test]
    fn induced_chain_map_identity_and_constant() {
        let c8 = cycle_graph(8);
        let id = VertexMap::identity(&c8);
        let m = id.induced_chain_map(&c8, &c8, 1).unwrap();
        assert_eq!(m, Z2Matrix::identity(8));

        let point =
            SimplicialComplex::build(vec!["p".into()], vec![vec!["p".into()]], 2).unwrap();
        let constant = VertexMap::new(
            &c8,
            &point,
            c8.vertices()
                .iter()
                .map(|v| (v.clone(), "p".to_string()))
                .collect(),
        )
        .unwrap();
        let m = constant.induced_chain_map(&c8, &point, 1).unwrap();
        for j in 0..m.ncols() {
            assert!(m.column(j).is_zero());
        }
    }

    #[test]
    fn homologous_around_filled_square() {
        // Square a-b-c-d filled by triangles abc, acd: the two edge paths
        // from a to c bound the two triangles.
        let vs: Vec<VertexId> = vec!["a".into(), "b".into(), "c".into(), "d".into()];
        let k = SimplicialComplex::build(
            vs,
            vec![
                vec!["a".into(), "b".into(), "c".into()],
                vec!["a".into(), "c".into(), "d".into()],
            ],
            2,
        )
        .unwrap();
        let square = Chain::new(
            1,
            vec![
                vec!["a".into(), "b".into()],
                vec!["b".into(), "c".into()],
                vec!["c".into(), "d".into()],
                vec!["d".into(), "a".into()],
            ],
        );
        let zero = Chain::empty(1);
        assert!(k.homologous(&square, &square).unwrap());
        assert!(k.homologous(&square, &zero).unwrap());
    }

    #[test]
    fn figure_eight_loops_not_homologous() {
        let k = crate::fixtures::eight_complex();
        let basis = k.homology_basis(1).unwrap();
        assert_eq!(basis.betti, 2);
        assert!(!k
            .homologous(&basis.cycles[0], &basis.cycles[1])
            .unwrap());
    }
}
