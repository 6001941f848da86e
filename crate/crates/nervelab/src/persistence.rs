//! Persistence of intrinsic Cech filtrations and of simplicial-map towers:
//! diagrams, exact bottleneck distance, log scaling, and the size-based
//! approximate diagram.

use crate::complex::{Chain, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::metrics::PseudoMetric;
use crate::pullback::SimplicialTower;
use crate::z2::{Z2Matrix, Z2Vector};

const TOL: f64 = 1e-9;

/// Coordinate semantics of a diagram: filtration scales, or tower indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagramMode {
    Scale,
    Index,
}

/// A persistence diagram in one homology dimension; deaths may be infinite.
#[derive(Clone, Debug, PartialEq)]
pub struct PersistenceDiagram {
    pub k: usize,
    pub mode: DiagramMode,
    pub points: Vec<(f64, f64)>,
}

impl PersistenceDiagram {
    pub fn new(k: usize, mode: DiagramMode, mut points: Vec<(f64, f64)>) -> Self {
        points.sort_by(|a, b| a.partial_cmp(b).unwrap());
        PersistenceDiagram { k, mode, points }
    }

    pub fn finite_points(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .copied()
            .filter(|p| p.1.is_finite())
            .collect()
    }

    pub fn essential_births(&self) -> Vec<f64> {
        self.points
            .iter()
            .filter(|p| p.1.is_infinite())
            .map(|p| p.0)
            .collect()
    }
}

/// An ordered filtration: cells with nondecreasing appearance scales, faces
/// before cofaces.
#[derive(Clone, Debug)]
pub struct Filtration {
    cells: Vec<(Simplex, f64)>,
    resolution: f64,
}

impl Filtration {
    pub fn new(mut cells: Vec<(Simplex, f64)>) -> Result<Self> {
        cells.sort_by(|a, b| {
            a.1.partial_cmp(&b.1)
                .unwrap()
                .then(a.0.len().cmp(&b.0.len()))
                .then(a.0.cmp(&b.0))
        });
        let mut position: std::collections::HashMap<Simplex, usize> =
            std::collections::HashMap::new();
        for (i, (s, scale)) in cells.iter().enumerate() {
            if s.len() > 1 {
                for omit in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(omit);
                    match position.get(&face) {
                        Some(&fi) => {
                            if cells[fi].1 > *scale + TOL {
                                return Err(Error::InvalidInput(format!(
                                    "face {face:?} appears after coface {s:?}"
                                )));
                            }
                        }
                        None => {
                            return Err(Error::InvalidInput(format!(
                                "missing face {face:?} of {s:?}"
                            )))
                        }
                    }
                }
            }
            if position.insert(s.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!("duplicate cell {s:?}")));
            }
        }
        let resolution = cells.first().map(|c| c.1).unwrap_or(0.0);
        Ok(Filtration { cells, resolution })
    }

    pub fn cells(&self) -> &[(Simplex, f64)] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Minimum appearance scale.
    pub fn resolution(&self) -> f64 {
        self.resolution
    }
}

/// Witnessed Cech filtration of a finite pseudometric: a simplex appears at
/// the smallest radius at which some point's closed ball contains it. When
/// `scales` is given, appearances snap up to the next listed scale and
/// simplices beyond the last scale are dropped.
pub fn cech_filtration(
    metric: &PseudoMetric,
    dim_cap: usize,
    scales: Option<&[f64]>,
) -> Result<Filtration> {
    if dim_cap < 1 {
        return Err(Error::DimOutOfRange { k: dim_cap, dim_cap });
    }
    let n = metric.len();
    let mut cells: Vec<(Simplex, f64)> = Vec::new();
    let mut subsets: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut frontier = subsets.clone();
    for _ in 0..dim_cap {
        let mut next = Vec::new();
        for s in &frontier {
            let last = *s.last().unwrap();
            for j in last + 1..n {
                let mut t = s.clone();
                t.push(j);
                next.push(t);
            }
        }
        subsets.extend(next.iter().cloned());
        frontier = next;
    }
    for subset in subsets {
        let appearance = (0..n)
            .map(|w| {
                subset
                    .iter()
                    .map(|&y| metric.distance(w, y))
                    .fold(0.0f64, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        if appearance.is_infinite() {
            continue;
        }
        let snapped = match scales {
            None => Some(appearance),
            Some(list) => list
                .iter()
                .copied()
                .find(|&s| s >= appearance - TOL),
        };
        if let Some(scale) = snapped {
            let simplex: Simplex = subset
                .iter()
                .map(|&i| metric.points()[i].clone())
                .collect();
            cells.push((simplex, scale));
        }
    }
    Filtration::new(cells)
}

/// Standard persistence by left-to-right column reduction over the whole
/// filtration; returns the dimension-k diagram, zero-length bars dropped.
pub fn persistence_diagram(filtration: &Filtration, k: usize) -> PersistenceDiagram {
    let n = filtration.len();
    let mut position = std::collections::HashMap::new();
    for (i, (s, _)) in filtration.cells().iter().enumerate() {
        position.insert(s.clone(), i);
    }
    // low row -> column index holding that pivot
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; n];
    let mut columns: Vec<Z2Vector> = Vec::with_capacity(n);
    // pairs[i] = Some(j) when cell j kills cell i
    let mut killer: Vec<Option<usize>> = vec![None; n];
    let mut is_negative = vec![false; n];
    for (j, (s, _)) in filtration.cells().iter().enumerate() {
        let mut col = Z2Vector::zeros(n);
        if s.len() > 1 {
            for omit in 0..s.len() {
                let mut face = s.clone();
                face.remove(omit);
                col.set(position[&face], true);
            }
        }
        loop {
            match col.max_index() {
                None => break,
                Some(r) => match pivot_of_row[r] {
                    Some(p) => {
                        let pc = columns[p].clone();
                        col.add_assign(&pc);
                    }
                    None => {
                        pivot_of_row[r] = Some(j);
                        killer[r] = Some(j);
                        is_negative[j] = true;
                        break;
                    }
                },
            }
        }
        columns.push(col);
    }
    let mut points = Vec::new();
    for (i, (s, birth)) in filtration.cells().iter().enumerate() {
        if s.len() != k + 1 || is_negative[i] {
            continue;
        }
        match killer[i] {
            Some(j) => {
                let death = filtration.cells()[j].1;
                if death > birth + TOL {
                    points.push((*birth, death));
                }
            }
            None => points.push((*birth, f64::INFINITY)),
        }
    }
    PersistenceDiagram::new(k, DiagramMode::Scale, points)
}

/// A persistence module presented by per-scale Betti numbers and the
/// matrices of the connecting maps in fixed homology bases.
#[derive(Clone, Debug)]
pub struct TowerModule {
    pub k: usize,
    pub scales: Vec<f64>,
    pub bettis: Vec<usize>,
    /// steps[i]: bettis[i+1] x bettis[i] matrix of the i -> i+1 map
    pub steps: Vec<Z2Matrix>,
    /// ranks[i][j - i] = rank of the composite map from scale i to scale j
    pub ranks: Vec<Vec<usize>>,
}

impl TowerModule {
    pub fn from_matrices(
        k: usize,
        scales: Vec<f64>,
        bettis: Vec<usize>,
        steps: Vec<Z2Matrix>,
    ) -> Result<Self> {
        if bettis.len() != scales.len()
            || (!bettis.is_empty() && steps.len() != bettis.len() - 1)
        {
            return Err(Error::InvalidInput("module shape mismatch".into()));
        }
        for (i, m) in steps.iter().enumerate() {
            if m.nrows() != bettis[i + 1] || m.ncols() != bettis[i] {
                return Err(Error::InvalidInput(format!(
                    "step {i} has shape {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    bettis[i + 1],
                    bettis[i]
                )));
            }
        }
        let n = bettis.len();
        let mut ranks = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = vec![bettis[i]];
            let mut product = Z2Matrix::identity(bettis[i]);
            for (j, step) in steps.iter().enumerate().skip(i) {
                let _ = j;
                product = step.multiply(&product);
                row.push(product.rank());
            }
            ranks.push(row);
        }
        Ok(TowerModule {
            k,
            scales,
            bettis,
            steps,
            ranks,
        })
    }

    pub fn rank(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= j);
        self.ranks[i][j - i]
    }
}

/// Coordinates of a cycle's class in a fixed homology basis of `complex`,
/// modulo (k+1)-boundaries.
pub fn class_coordinates(
    complex: &SimplicialComplex,
    basis: &crate::complex::HomologyBasis,
    chain: &Chain,
) -> Result<Z2Vector> {
    let k = basis.k;
    let nk = complex.simplices(k).len();
    let mut cols: Vec<Z2Vector> = Vec::new();
    let mut n_boundary = 0;
    if k + 1 <= complex.dim_cap() && !complex.simplices(k + 1).is_empty() {
        let bdry = complex.boundary_matrix(k + 1)?;
        n_boundary = bdry.ncols();
        for j in 0..n_boundary {
            cols.push(bdry.column(j).clone());
        }
    }
    for z in &basis.cycles {
        cols.push(z.to_vector(complex)?);
    }
    let a = Z2Matrix::from_columns(nk, cols);
    let x = a.solve(&chain.to_vector(complex)?).ok_or(Error::NotACycle)?;
    let mut coords = Z2Vector::zeros(basis.betti);
    for i in 0..basis.betti {
        coords.set(i, x.get(n_boundary + i));
    }
    Ok(coords)
}

/// The H_k persistence module of a multiscale mapper tower.
pub fn tower_module(tower: &SimplicialTower, k: usize) -> Result<TowerModule> {
    let bases: Vec<_> = tower
        .mappers
        .iter()
        .map(|m| m.nerve.homology_basis(k))
        .collect::<Result<_>>()?;
    let bettis: Vec<usize> = bases.iter().map(|b| b.betti).collect();
    let mut steps = Vec::new();
    for (i, map) in tower.maps.iter().enumerate() {
        let source = &tower.mappers[i].nerve;
        let target = &tower.mappers[i + 1].nerve;
        let mut m = Z2Matrix::zeros(bettis[i + 1], bettis[i]);
        for (col, z) in bases[i].cycles.iter().enumerate() {
            let image = map.push_chain(source, target, z)?;
            let coords = class_coordinates(target, &bases[i + 1], &image)?;
            for row in coords.iter_ones() {
                m.set(row, col, true);
            }
        }
        steps.push(m);
    }
    TowerModule::from_matrices(k, tower.scales.clone(), bettis, steps)
}

/// Diagram of a module by inclusion-exclusion over the rank table; births
/// and deaths are scale indices.
pub fn tower_diagram(module: &TowerModule) -> Result<PersistenceDiagram> {
    let n = module.bettis.len();
    let r = |i: isize, j: isize| -> isize {
        if i < 0 {
            0
        } else {
            module.rank(i as usize, j as usize) as isize
        }
    };
    let mut points = Vec::new();
    for i in 0..n as isize {
        for j in i + 1..n as isize {
            let mult = r(i, j - 1) - r(i, j) - (r(i - 1, j - 1) - r(i - 1, j));
            if mult < 0 {
                return Err(Error::NegativeMultiplicity {
                    birth: i as usize,
                    death: j as usize,
                });
            }
            for _ in 0..mult {
                points.push((i as f64, j as f64));
            }
        }
        let essential = r(i, n as isize - 1) - r(i - 1, n as isize - 1);
        if essential < 0 {
            return Err(Error::NegativeMultiplicity {
                birth: i as usize,
                death: n,
            });
        }
        for _ in 0..essential {
            points.push((i as f64, f64::INFINITY));
        }
    }
    Ok(PersistenceDiagram::new(
        module.k,
        DiagramMode::Index,
        points,
    ))
}

/// Reinterpret an index-mode diagram on the tower's scale axis.
pub fn index_diagram_to_scale(
    diagram: &PersistenceDiagram,
    scales: &[f64],
) -> PersistenceDiagram {
    let points = diagram
        .points
        .iter()
        .map(|&(b, d)| {
            let birth = scales[b as usize];
            let death = if d.is_infinite() {
                f64::INFINITY
            } else {
                scales[d as usize]
            };
            (birth, death)
        })
        .collect();
    PersistenceDiagram::new(diagram.k, DiagramMode::Scale, points)
}

/// Exact bottleneck distance under the sup-norm with diagonal projections.
/// Essential points match among themselves (infinite if counts differ).
pub fn bottleneck_distance(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> f64 {
    let mut e1 = d1.essential_births();
    let mut e2 = d2.essential_births();
    if e1.len() != e2.len() {
        return f64::INFINITY;
    }
    e1.sort_by(|a, b| a.partial_cmp(b).unwrap());
    e2.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let essential_cost = e1
        .iter()
        .zip(&e2)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);

    let p1 = d1.finite_points();
    let p2 = d2.finite_points();
    let cost = |a: (f64, f64), b: (f64, f64)| -> f64 {
        (a.0 - b.0).abs().max((a.1 - b.1).abs())
    };
    let diag = |a: (f64, f64)| -> f64 { (a.1 - a.0) / 2.0 };
    let mut candidates: Vec<f64> = vec![0.0];
    for &a in &p1 {
        candidates.push(diag(a));
        for &b in &p2 {
            candidates.push(cost(a, b));
        }
    }
    for &b in &p2 {
        candidates.push(diag(b));
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    candidates.dedup();
    let feasible = |t: f64| matching_feasible(&p1, &p2, t, &cost, &diag);
    let mut finite_cost = *candidates.last().unwrap();
    // first feasible candidate (feasibility is monotone in t)
    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    if feasible(candidates[lo]) {
        finite_cost = candidates[lo];
    } else {
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if feasible(candidates[mid]) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        finite_cost = finite_cost.min(candidates[hi]);
    }
    essential_cost.max(finite_cost)
}

/// Perfect-matching feasibility at threshold t: every point is matched
/// across or absorbed by the diagonal at cost <= t.
fn matching_feasible(
    p1: &[(f64, f64)],
    p2: &[(f64, f64)],
    t: f64,
    cost: &dyn Fn((f64, f64), (f64, f64)) -> f64,
    diag: &dyn Fn((f64, f64)) -> f64,
) -> bool {
    // Points with half-persistence <= t can retire to the diagonal; the rest
    // must be matched across. A matching saturating both required sides
    // exists iff each side can be saturated on its own (Mendelsohn-Dulmage),
    // so run two independent augmenting-path passes.
    let n1 = p1.len();
    let n2 = p2.len();
    let fwd: Vec<Vec<usize>> = p1
        .iter()
        .map(|&a| (0..n2).filter(|&j| cost(a, p2[j]) <= t + TOL).collect())
        .collect();
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n2];
    for (u, vs) in fwd.iter().enumerate() {
        for &v in vs {
            rev[v].push(u);
        }
    }
    fn try_kuhn(
        u: usize,
        edges: &[Vec<usize>],
        seen: &mut [bool],
        match_of_other: &mut [Option<usize>],
        match_of_own: &mut [Option<usize>],
    ) -> bool {
        for &v in &edges[u] {
            if !seen[v] {
                seen[v] = true;
                let occupant = match_of_other[v];
                let free = match occupant {
                    None => true,
                    Some(next) => try_kuhn(next, edges, seen, match_of_other, match_of_own),
                };
                if free {
                    match_of_other[v] = Some(u);
                    match_of_own[u] = Some(v);
                    return true;
                }
            }
        }
        false
    }
    let mut match_of_right: Vec<Option<usize>> = vec![None; n2];
    let mut match_of_left: Vec<Option<usize>> = vec![None; n1];
    for u in 0..n1 {
        if diag(p1[u]) > t + TOL {
            let mut seen = vec![false; n2];
            if !try_kuhn(u, &fwd, &mut seen, &mut match_of_right, &mut match_of_left) {
                return false;
            }
        }
    }
    let mut match_of_right: Vec<Option<usize>> = vec![None; n2];
    let mut match_of_left: Vec<Option<usize>> = vec![None; n1];
    for v in 0..n2 {
        if diag(p2[v]) > t + TOL {
            let mut seen = vec![false; n1];
            if !try_kuhn(v, &rev, &mut seen, &mut match_of_left, &mut match_of_right) {
                return false;
            }
        }
    }
    true
}

/// Coordinate-wise natural log; zero births are clamped to the filtration
/// resolution first (no true birth exists below it).
pub fn log_scale(diagram: &PersistenceDiagram, resolution: f64) -> Result<PersistenceDiagram> {
    if resolution <= 0.0 {
        return Err(Error::NonPositiveScale(resolution));
    }
    let mut points = Vec::with_capacity(diagram.points.len());
    for &(b, d) in &diagram.points {
        let b = if b == 0.0 { resolution } else { b };
        if b <= 0.0 || (!d.is_infinite() && d <= 0.0) {
            return Err(Error::BadLogCoordinate(if b <= 0.0 { b } else { d }));
        }
        let death = if d.is_infinite() { f64::INFINITY } else { d.ln() };
        points.push((b.ln(), death));
    }
    Ok(PersistenceDiagram::new(diagram.k, diagram.mode, points))
}

/// One bar (0, s_i) per positive generator size: the size-based approximation
/// of the H1 diagram.
pub fn approx_diagram_from_basis(sizes: &[f64], _resolution: f64) -> PersistenceDiagram {
    let points = sizes
        .iter()
        .copied()
        .filter(|&s| s > 0.0)
        .map(|s| (0.0, s))
        .collect();
    PersistenceDiagram::new(1, DiagramMode::Scale, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::FiniteMetricSpace;
    use crate::fixtures;
    use crate::metrics::{df_metric, MetricMode};

    fn metric_of(m: &FiniteMetricSpace) -> PseudoMetric {
        let n = m.len();
        let dist = (0..n)
            .map(|i| (0..n).map(|j| m.distance(i, j)).collect())
            .collect();
        PseudoMetric::new(m.points().to_vec(), dist, MetricMode::Exact).unwrap()
    }

    #[test]
    fn cech_appearances_on_cycle() {
        let metric = metric_of(&FiniteMetricSpace::cycle(12));
        let filt = cech_filtration(&metric, 2, None).unwrap();
        let scale_of = |ids: &[&str]| -> f64 {
            filt.cells()
                .iter()
                .find(|(s, _)| s.iter().map(|x| x.as_str()).collect::<Vec<_>>() == ids)
                .map(|(_, sc)| *sc)
                .unwrap()
        };
        assert_eq!(scale_of(&["p0"]), 0.0);
        assert_eq!(scale_of(&["p0", "p1"]), 1.0);
        // witness p1 sees both p0 and p2 at distance 1
        assert_eq!(scale_of(&["p0", "p1", "p2"]), 1.0);
        assert_eq!(filt.resolution(), 0.0);
    }

    #[test]
    fn cech_two_points_and_single_point() {
        let m = FiniteMetricSpace::new(
            vec!["a".into(), "b".into()],
            vec![vec![0.0, 3.0], vec![3.0, 0.0]],
        )
        .unwrap();
        let filt = cech_filtration(&metric_of(&m), 1, None).unwrap();
        let edge = filt.cells().iter().find(|(s, _)| s.len() == 2).unwrap();
        assert_eq!(edge.1, 3.0);

        let single = FiniteMetricSpace::new(vec!["a".into()], vec![vec![0.0]]).unwrap();
        let filt = cech_filtration(&metric_of(&single), 2, None).unwrap();
        let d0 = persistence_diagram(&filt, 0);
        assert_eq!(d0.points, vec![(0.0, f64::INFINITY)]);
        assert!(persistence_diagram(&filt, 1).points.is_empty());
    }

    #[test]
    fn cycle_cech_h1_bar() {
        let metric = metric_of(&FiniteMetricSpace::cycle(12));
        let filt = cech_filtration(&metric, 2, None).unwrap();
        let d1 = persistence_diagram(&filt, 1);
        let essential: Vec<_> = d1.essential_births();
        assert!(essential.is_empty());
        // one prominent bar born at scale 1
        let longest = d1
            .finite_points()
            .into_iter()
            .max_by(|a, b| (a.1 - a.0).partial_cmp(&(b.1 - b.0)).unwrap())
            .unwrap();
        assert_eq!(longest.0, 1.0);
        assert!(longest.1 > 1.0);
        // H0: one essential class, eleven merge deaths at scale 1
        let d0 = persistence_diagram(&filt, 0);
        assert_eq!(d0.essential_births(), vec![0.0]);
        assert_eq!(d0.finite_points().len(), 11);
    }

    #[test]
    fn tent_df_cech_has_one_h1_class() {
        let df = df_metric(
            &fixtures::tent_complex(),
            &fixtures::tent_values(),
            &fixtures::tent_codomain(),
            MetricMode::Exact,
        )
        .unwrap();
        let filt = cech_filtration(&df, 2, None).unwrap();
        let d1 = persistence_diagram(&filt, 1);
        assert!(!d1.points.is_empty());
    }

    #[test]
    fn filtration_rejects_missing_or_late_faces() {
        let missing = Filtration::new(vec![(vec!["a".into(), "b".into()], 1.0)]);
        assert!(missing.is_err());
        let late = Filtration::new(vec![
            (vec!["a".into()], 0.0),
            (vec!["b".into()], 2.0),
            (vec!["a".into(), "b".into()], 1.0),
        ]);
        assert!(late.is_err());
    }

    #[test]
    fn constant_module_gives_essential_bars() {
        let module = TowerModule::from_matrices(
            1,
            vec![1.0, 2.0, 4.0],
            vec![2, 2, 2],
            vec![Z2Matrix::identity(2), Z2Matrix::identity(2)],
        )
        .unwrap();
        let d = tower_diagram(&module).unwrap();
        assert_eq!(
            d.points,
            vec![(0.0, f64::INFINITY), (0.0, f64::INFINITY)]
        );
    }

    #[test]
    fn surjective_then_iso_module() {
        // dims 2 -> 1 -> 1: one bar [0,1), one bar [0,inf)
        let mut m0 = Z2Matrix::zeros(1, 2);
        m0.set(0, 0, true);
        let m1 = Z2Matrix::identity(1);
        let module =
            TowerModule::from_matrices(1, vec![1.0, 2.0, 4.0], vec![2, 1, 1], vec![m0, m1])
                .unwrap();
        let d = tower_diagram(&module).unwrap();
        assert_eq!(d.points, vec![(0.0, 1.0), (0.0, f64::INFINITY)]);
    }

    #[test]
    fn non_functorial_ranks_rejected() {
        // rank growing along the module is impossible; forge it by hand
        let module = TowerModule {
            k: 1,
            scales: vec![1.0, 2.0],
            bettis: vec![1, 1],
            steps: vec![Z2Matrix::identity(1)],
            ranks: vec![vec![0, 1], vec![1]],
        };
        assert!(matches!(
            tower_diagram(&module),
            Err(Error::NegativeMultiplicity { .. })
        ));
    }

    #[test]
    fn tent_tower_module_ranks() {
        let tower = crate::covers::good_tower(&fixtures::tent_codomain(), 2.0, 2.0, 3).unwrap();
        let mm = crate::pullback::multiscale_mapper(
            &fixtures::tent_complex(),
            &fixtures::tent_values(),
            &tower,
            3,
        )
        .unwrap();
        let module = tower_module(&mm, 1).unwrap();
        assert_eq!(module.bettis[0], 1);
        assert_eq!(*module.bettis.last().unwrap(), 0);
        let d = tower_diagram(&module).unwrap();
        for &(b, _) in &d.points {
            assert_eq!(b, 0.0);
        }
    }

    #[test]
    fn bottleneck_examples() {
        let d = |pts: Vec<(f64, f64)>| PersistenceDiagram::new(1, DiagramMode::Scale, pts);
        let a = d(vec![(0.0, 4.0), (1.0, 2.0)]);
        assert_eq!(bottleneck_distance(&a, &a), 0.0);
        let b = d(vec![(0.0, 4.0)]);
        let c = d(vec![(0.0, 3.0)]);
        assert!((bottleneck_distance(&b, &c) - 1.0).abs() < TOL);
        let empty = d(vec![]);
        assert!((bottleneck_distance(&b, &empty) - 2.0).abs() < TOL);
        // essential mismatch
        let e1 = d(vec![(0.0, f64::INFINITY)]);
        assert!(bottleneck_distance(&e1, &empty).is_infinite());
        let e2 = d(vec![(1.0, f64::INFINITY)]);
        assert!((bottleneck_distance(&e1, &e2) - 1.0).abs() < TOL);
    }

    #[test]
    fn bottleneck_diagonal_tradeoff() {
        // matching across costs 3, both to diagonal costs max(2, 0.5) = 2
        let d = |pts: Vec<(f64, f64)>| PersistenceDiagram::new(1, DiagramMode::Scale, pts);
        let a = d(vec![(0.0, 4.0)]);
        let b = d(vec![(6.0, 7.0)]);
        assert!((bottleneck_distance(&a, &b) - 2.0).abs() < TOL);
    }

    #[test]
    fn log_scale_rules() {
        let d = PersistenceDiagram::new(
            1,
            DiagramMode::Scale,
            vec![(1.0, std::f64::consts::E), (0.0, 4.0)],
        );
        let logged = log_scale(&d, 1.0).unwrap();
        assert!(logged
            .points
            .iter()
            .any(|&(b, dd)| b.abs() < TOL && (dd - 1.0).abs() < TOL));
        // clamped zero birth at resolution 1 -> log 0 = 0
        assert!(logged
            .points
            .iter()
            .any(|&(b, dd)| b.abs() < TOL && (dd - 4.0f64.ln()).abs() < TOL));
        let bad = PersistenceDiagram::new(1, DiagramMode::Scale, vec![(-1.0, 2.0)]);
        assert!(log_scale(&bad, 1.0).is_err());
        // ratio semantics: (s, 4s) has log-length log 4
        let ratio = PersistenceDiagram::new(1, DiagramMode::Scale, vec![(0.5, 2.0)]);
        let logged = log_scale(&ratio, 0.5).unwrap();
        let (b, dd) = logged.points[0];
        assert!((dd - b - 4.0f64.ln()).abs() < TOL);
    }

    #[test]
    fn approx_diagram_drops_zero_sizes() {
        let d = approx_diagram_from_basis(&[0.0, 2.0], 1.0);
        assert_eq!(d.points, vec![(0.0, 2.0)]);
        assert!(approx_diagram_from_basis(&[], 1.0).points.is_empty());
        assert_eq!(
            approx_diagram_from_basis(&[4.0], 1.0).points,
            vec![(0.0, 4.0)]
        );
    }

    #[test]
    fn random_tower_births_at_zero() {
        for seed in 0..10 {
            let inst = fixtures::random_real_instance(seed);
            let tower = crate::covers::good_tower(&inst.codomain, 2.0, 1.0, 4).unwrap();
            let mm = match crate::pullback::multiscale_mapper(
                &inst.complex,
                &inst.values,
                &tower,
                3,
            ) {
                Ok(mm) => mm,
                Err(Error::EdgeNotCovered(..)) => continue,
                Err(e) => panic!("seed {seed}: {e}"),
            };
            let module = tower_module(&mm, 1).unwrap();
            let d = tower_diagram(&module).unwrap();
            for &(b, _) in &d.points {
                assert_eq!(b, 0.0, "seed {seed}");
            }
        }
    }
}
