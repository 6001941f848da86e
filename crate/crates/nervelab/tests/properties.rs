//! Property tests over randomized instances: structural invariants that must
//! hold for every input, not just the fixtures.

use std::collections::BTreeSet;

use nervelab::complex::Chain;
use nervelab::fixtures;
use nervelab::metrics::{df_metric, MetricMode};
use nervelab::persistence::{
    bottleneck_distance, cech_filtration, persistence_diagram, tower_diagram, tower_module,
    DiagramMode, PersistenceDiagram,
};
use nervelab::pullback::{mapper, multiscale_mapper, push_cycle};

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// The boundary of a boundary vanishes.
    #[test]
    fn boundary_squares_to_zero(seed in 0u64..500) {
        let inst = fixtures::random_real_instance(seed);
        let c = &inst.complex;
        for k in 1..=c.dim_cap() {
            if c.simplices(k).is_empty() || k < 2 {
                continue;
            }
            let d_k = c.boundary_matrix(k).unwrap();
            let d_km1 = c.boundary_matrix(k - 1).unwrap();
            let prod = d_km1.multiply(&d_k);
            for r in 0..prod.nrows() {
                for col in 0..prod.ncols() {
                    prop_assert!(!prod.get(r, col));
                }
            }
        }
    }

    /// Every face of every simplex is itself a simplex of the complex.
    #[test]
    fn complexes_are_face_closed(seed in 0u64..500) {
        let inst = fixtures::random_real_instance(seed);
        let c = &inst.complex;
        for k in 1..=c.dim_cap() {
            for s in c.simplices(k) {
                for omit in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(omit);
                    prop_assert!(c.contains(&face), "missing face {face:?} of {s:?}");
                }
            }
        }
    }

    /// The path-based domain metric is a pseudometric: zero on the diagonal,
    /// symmetric, and triangular.
    #[test]
    fn df_is_a_pseudometric(seed in 0u64..200) {
        let inst = fixtures::random_real_instance(seed);
        let df = df_metric(&inst.complex, &inst.values, &inst.codomain, MetricMode::Exact)
            .unwrap();
        let n = df.len();
        for i in 0..n {
            prop_assert_eq!(df.distance(i, i), 0.0);
            for j in 0..n {
                prop_assert_eq!(df.distance(i, j), df.distance(j, i));
                for k in 0..n {
                    prop_assert!(
                        df.distance(i, k) <= df.distance(i, j) + df.distance(j, k) + 1e-9
                    );
                }
            }
        }
    }

    /// Pullback elements cover the domain vertices, and each nerve vertex is
    /// a nonempty pullback element.
    #[test]
    fn pullback_covers_domain(seed in 0u64..200) {
        let inst = fixtures::random_real_instance(seed);
        let m = mapper(&inst.complex, &inst.values, &inst.cover, 3).unwrap();
        let mut covered: BTreeSet<&String> = BTreeSet::new();
        for elt in m.pullback.elements() {
            prop_assert!(!elt.vertices.is_empty());
            covered.extend(elt.vertices.iter());
        }
        let all: BTreeSet<&String> = inst.complex.vertices().iter().collect();
        prop_assert_eq!(covered, all);
        prop_assert_eq!(m.nerve.vertices().len(), m.pullback.elements().len());
    }

    /// Pushing a domain cycle forward along the mapper yields a nerve cycle.
    #[test]
    fn pushforward_of_cycles_are_cycles(seed in 0u64..200) {
        let inst = fixtures::random_real_instance(seed);
        let m = mapper(&inst.complex, &inst.values, &inst.cover, 3).unwrap();
        for z in &inst.complex.homology_basis(1).unwrap().cycles {
            let image: Chain = push_cycle(&m.pullback, z).unwrap();
            if image.is_empty() {
                continue;
            }
            let v = image.to_vector(&m.nerve).unwrap();
            let bdry = m.nerve.boundary_matrix(1).unwrap();
            prop_assert!(bdry.apply(&v).is_zero());
        }
    }

    /// Persistence diagram sanity: births never exceed deaths, and the
    /// number of essential zero-dimensional classes counts components.
    #[test]
    fn diagram_shape(seed in 0u64..200) {
        let inst = fixtures::random_real_instance(seed);
        let df = df_metric(&inst.complex, &inst.values, &inst.codomain, MetricMode::Exact)
            .unwrap();
        let filt = cech_filtration(&df, 2, None).unwrap();
        for k in [0usize, 1] {
            let d = persistence_diagram(&filt, k);
            for &(b, death) in &d.points {
                prop_assert!(b < death);
            }
        }
        let d0 = persistence_diagram(&filt, 0);
        prop_assert_eq!(
            d0.essential_births().len(),
            inst.complex.homology_basis(0).unwrap().betti
        );
    }

    /// Tower module ranks are monotone under widening the interval.
    #[test]
    fn tower_ranks_monotone(seed in 0u64..60) {
        let inst = fixtures::random_unit_metric_instance(seed);
        let s = 2.0;
        let codomain = nervelab::covers::Codomain::FiniteMetric(inst.metric.clone());
        let tower = nervelab::covers::good_tower(&codomain, 2.0, s, 4).unwrap();
        let mm = multiscale_mapper(&inst.complex, &inst.values, &tower, 3).unwrap();
        let module = tower_module(&mm, 1).unwrap();
        let n = module.scales.len();
        for i in 0..n {
            for j in i..n {
                if j + 1 < n {
                    prop_assert!(module.rank(i, j + 1) <= module.rank(i, j));
                }
                if i > 0 {
                    prop_assert!(module.rank(i - 1, j) <= module.rank(i, j));
                }
            }
        }
        // the diagram must account for every rank
        let d = tower_diagram(&module).unwrap();
        let total: usize = d.points.len() + d.essential_births().len();
        let max_rank = (0..n).map(|i| module.rank(i, i)).max().unwrap_or(0);
        prop_assert!(total >= max_rank);
    }

    /// Bottleneck distance is a metric on diagrams: zero on equal diagrams,
    /// symmetric, triangular.
    #[test]
    fn bottleneck_is_a_metric(
        pts_a in proptest::collection::vec((0.0f64..5.0, 0.1f64..5.0), 0..6),
        pts_b in proptest::collection::vec((0.0f64..5.0, 0.1f64..5.0), 0..6),
        pts_c in proptest::collection::vec((0.0f64..5.0, 0.1f64..5.0), 0..6),
    ) {
        let mk = |pts: &[(f64, f64)]| PersistenceDiagram {
            k: 1,
            mode: DiagramMode::Scale,
            points: pts
                .iter()
                .map(|&(b, len)| (b, b + len))
                .collect(),
        };
        let (a, b, c) = (mk(&pts_a), mk(&pts_b), mk(&pts_c));
        prop_assert_eq!(bottleneck_distance(&a, &a), 0.0);
        let ab = bottleneck_distance(&a, &b);
        let ba = bottleneck_distance(&b, &a);
        prop_assert!((ab - ba).abs() <= 1e-12);
        let bc = bottleneck_distance(&b, &c);
        let ac = bottleneck_distance(&a, &c);
        prop_assert!(ac <= ab + bc + 1e-9);
    }
}
