use proptest::prelude::*;
use qcolor_core::coloring::{
    backtrack_kcolor, brute_force_colorings, chromatic_number, chromatic_upper_bound, greedy_color_natural,
    is_proper_coloring,
};
use qcolor_core::graph::intervals_to_conflict_graph;
use qcolor_core::{qubo_to_ising, BitVector, ColoringQubo, Gate, Graph, IntervalSet, Statevector};

const LABELS: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

/// Graph on `n` nodes; bit `e` of `mask` switches on the `e`-th pair in
/// lexicographic order.
fn graph_from(n: usize, mask: u32) -> Graph {
    let mut edges = Vec::new();
    let mut e = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> e & 1 == 1 {
                edges.push((LABELS[u], LABELS[v]));
            }
            e += 1;
        }
    }
    Graph::new(LABELS[..n].iter().copied(), edges).unwrap()
}

fn graphs() -> impl Strategy<Value = Graph> {
    (1usize..=6, any::<u32>()).prop_map(|(n, mask)| graph_from(n, mask))
}

fn max_degree(g: &Graph) -> usize {
    (0..g.node_count()).map(|i| g.neighbors(i).len()).max().unwrap_or(0)
}

proptest! {
    #[test]
    fn greedy_is_proper_and_within_degree_bound(g in graphs()) {
        let a = greedy_color_natural(&g);
        prop_assert!(is_proper_coloring(&g, &a).unwrap());
        prop_assert!(a.colors_used() <= max_degree(&g) + 1);
    }

    #[test]
    fn chromatic_number_respects_edge_bound(g in graphs()) {
        let chi = chromatic_number(&g).unwrap();
        prop_assert!(chi as f64 <= chromatic_upper_bound(&g) + 1e-12);
        prop_assert!(chi <= greedy_color_natural(&g).colors_used());
    }

    #[test]
    fn backtracking_agrees_with_enumeration(g in graphs(), k in 1usize..=3) {
        let count = brute_force_colorings(&g, k, false).unwrap().count;
        match backtrack_kcolor(&g, k).unwrap() {
            Some(a) => {
                prop_assert!(count > 0);
                prop_assert!(is_proper_coloring(&g, &a).unwrap());
            }
            None => prop_assert_eq!(count, 0),
        }
    }

    #[test]
    fn matrix_objective_and_penalty_sum_to_constant(
        n in 1usize..=4,
        mask in any::<u32>(),
        k in 1usize..=3,
        penalty in 0.5f64..10.0,
        seed in any::<u64>(),
    ) {
        let g = graph_from(n, mask);
        let q = ColoringQubo::new(&g, k, penalty).unwrap();
        let bits = BitVector::from_index(seed as usize % (1 << q.num_vars()), q.num_vars());
        let total = q.matrix_objective(&bits).unwrap() + q.penalty_energy(&bits).unwrap();
        prop_assert!((total - n as f64 * penalty).abs() < 1e-9 * (1.0 + total.abs()));
        prop_assert!(q.penalty_energy(&bits).unwrap() >= -1e-9);
    }

    #[test]
    fn ising_energy_matches_penalty(n in 1usize..=4, mask in any::<u32>(), k in 1usize..=3, seed in any::<u64>()) {
        let g = graph_from(n, mask);
        let q = ColoringQubo::new(&g, k, 4.0).unwrap();
        let bits = BitVector::from_index(seed as usize % (1 << q.num_vars()), q.num_vars());
        let ising = qubo_to_ising(&q).energy(&bits).unwrap();
        prop_assert!((ising - q.penalty_energy(&bits).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn conflict_graph_ignores_interval_order(spans in prop::collection::vec((0u8..20, 1u8..6), 1..=6)) {
        let mut forward = IntervalSet::new();
        let mut backward = IntervalSet::new();
        for (i, &(s, len)) in spans.iter().enumerate() {
            forward.push(LABELS[i], s as f64, (s + len) as f64);
        }
        for (i, &(s, len)) in spans.iter().enumerate().rev() {
            backward.push(LABELS[i], s as f64, (s + len) as f64);
        }
        let a = intervals_to_conflict_graph(&forward).unwrap();
        let b = intervals_to_conflict_graph(&backward).unwrap();
        prop_assert_eq!(a.label_edge_set(), b.label_edge_set());
    }

    #[test]
    fn gates_preserve_norm(ops in prop::collection::vec((0u8..4, 0usize..4, 0usize..4, -7.0f64..7.0), 0..40)) {
        let mut psi = Statevector::uniform(4).unwrap();
        for (kind, a, b, angle) in ops {
            let gate = match kind {
                0 => Gate::Ry(a, angle),
                1 => Gate::Rx(a, angle),
                2 => Gate::Rz(a, angle),
                _ if a != b => Gate::Cz(a, b),
                _ => Gate::H(a),
            };
            psi.apply(&gate).unwrap();
        }
        prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
    }
}
