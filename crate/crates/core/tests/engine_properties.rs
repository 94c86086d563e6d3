use pcf::engine::{ClockSet, EventKind, Simulation, Variant};
use pcf::{run_pcf, run_percolation, run_warm_pcf, Graph, PriorityOrder, Subgraph};
use proptest::prelude::*;

fn single_edge() -> Graph {
    Graph::generic(2, &[(0, 1)], &[]).unwrap()
}

fn run_single_edge(vertex: [f64; 2], edge: f64) -> pcf::RunResult {
    let g = single_edge();
    let clocks = ClockSet::from_values(1.0, vertex.to_vec(), vec![edge]).unwrap();
    let prio = PriorityOrder::identity(2);
    Simulation::new(&g, &prio, &clocks).record_trace(true).run().unwrap()
}

#[test]
fn edge_first_then_label_freezes_both() {
    let r = run_single_edge([3.0, 1.5], 1.0);
    assert!(r.final_config.is_open(0));
    assert!(r.final_config.is_frozen(0) && r.final_config.is_frozen(1));
    assert_eq!(r.cluster_sizes, vec![2]);
    // vertex 1 stopped being a label when the edge opened, so its clock is ignored
    assert_eq!(r.event_count, 2);
    let trace = r.trace.unwrap();
    assert_eq!(trace[0].kind, EventKind::Edge);
    assert_eq!((trace[1].kind, trace[1].index, trace[1].time), (EventKind::Vertex, 0, 3.0));
}

#[test]
fn frozen_endpoint_blocks_edge() {
    for vertex in [[0.5, 3.0], [3.0, 0.5]] {
        let r = run_single_edge(vertex, 1.0);
        assert!(!r.final_config.is_open(0), "{vertex:?}");
        assert!(r.final_config.is_frozen(0) && r.final_config.is_frozen(1));
        assert_eq!(r.cluster_sizes, vec![1, 1]);
        assert_eq!(r.event_count, 2);
    }
}

#[test]
fn edge_wins_exact_tie() {
    let r = run_single_edge([1.0, 2.0], 1.0);
    assert!(r.final_config.is_open(0));
}

#[test]
fn priority_picks_the_freezing_clock() {
    let g = single_edge();
    let clocks = ClockSet::from_values(1.0, vec![3.0, 1.5], vec![1.0]).unwrap();
    let prio = PriorityOrder::from_ranks(vec![1, 0]).unwrap();
    let mut run = Simulation::new(&g, &prio, &clocks).start().unwrap();
    run.advance_to(2.0);
    let c = run.configuration();
    assert!(c.is_open(0) && c.is_frozen(0) && c.is_frozen(1));
}

#[test]
fn no_vertex_clocks_is_percolation() {
    let g = Graph::grid(12, 9).unwrap();
    let prio = PriorityOrder::for_graph(&g);
    let sampled = ClockSet::sample(&g, 1.0, 3, 0).unwrap();
    let clocks = ClockSet::from_values(
        1.0,
        vec![f64::INFINITY; g.vertex_count()],
        sampled.edge_clocks().to_vec(),
    )
    .unwrap();
    for t in [0.1, 0.5, 2f64.ln(), 1.5] {
        let pcf = run_pcf(&g, &prio, &clocks, t).unwrap().final_config;
        let perc = run_percolation(&g, &clocks, t).unwrap();
        assert_eq!(pcf.edge_states(), perc.edge_states(), "t={t}");
        let via_engine = Simulation::new(&g, &prio, &sampled)
            .variant(Variant::Percolation)
            .t_max(t)
            .run()
            .unwrap();
        assert_eq!(via_engine.final_config.edge_states(), perc.edge_states());
        assert_eq!(via_engine.final_config.frozen_count(), 0);
    }
}

#[test]
fn pcf_is_below_percolation_at_same_time() {
    let g = Graph::grid(20, 20).unwrap();
    let prio = PriorityOrder::for_graph(&g);
    for stream in 0..10 {
        let clocks = ClockSet::sample(&g, 0.6, 8, stream).unwrap();
        for t in [0.3, 0.8, 3.0] {
            let pcf = run_pcf(&g, &prio, &clocks, t).unwrap().final_config;
            let perc = run_percolation(&g, &clocks, t).unwrap();
            assert!(perc.edge_states().iter().zip(pcf.edge_states()).all(|(&p, &q)| p || !q));
        }
    }
}

#[test]
fn runs_are_reproducible() {
    let g = Graph::grid(30, 30).unwrap();
    let prio = PriorityOrder::for_graph(&g);
    let a = run_pcf(&g, &prio, &ClockSet::sample(&g, 0.55, 77, 4).unwrap(), f64::INFINITY).unwrap();
    let b = run_pcf(&g, &prio, &ClockSet::sample(&g, 0.55, 77, 4).unwrap(), f64::INFINITY).unwrap();
    let c = run_pcf(&g, &prio, &ClockSet::sample(&g, 0.55, 77, 5).unwrap(), f64::INFINITY).unwrap();
    assert_eq!(a.final_config, b.final_config);
    assert_eq!(a.cluster_sizes, b.cluster_sizes);
    assert_ne!(a.final_config, c.final_config);
}

#[test]
fn stepping_matches_a_single_run() {
    let g = Graph::grid(15, 11).unwrap();
    let prio = PriorityOrder::for_graph(&g);
    let clocks = ClockSet::sample(&g, 0.8, 1, 2).unwrap();
    for variant in [Variant::Pcf, Variant::Warm] {
        let whole = Simulation::new(&g, &prio, &clocks).variant(variant).run().unwrap();
        let mut run = Simulation::new(&g, &prio, &clocks).variant(variant).start().unwrap();
        let mut t = 0.0;
        while run.next_event_time().is_some() {
            t += 0.05;
            run.advance_to(t);
            let capped = Simulation::new(&g, &prio, &clocks)
                .variant(variant)
                .t_max(t)
                .run()
                .unwrap();
            assert_eq!(run.configuration().edge_states(), capped.final_config.edge_states());
            assert_eq!(run.configuration().vertex_states(), capped.final_config.vertex_states());
        }
        let stepped = run.finish();
        assert_eq!(stepped.final_config.edge_states(), whole.final_config.edge_states());
        assert_eq!(stepped.event_count, whole.event_count);
    }
}

#[test]
fn full_subgraph_is_the_plain_run() {
    let g = Graph::generic(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)], &[]).unwrap();
    let prio = PriorityOrder::for_graph(&g);
    let full = Subgraph::full(&g);
    for stream in 0..50 {
        let clocks = ClockSet::sample(&g, 0.9, 12, stream).unwrap();
        for variant in [Variant::Pcf, Variant::Warm] {
            let plain = Simulation::new(&g, &prio, &clocks).variant(variant).run().unwrap();
            let sub = Simulation::new(&g, &prio, &clocks)
                .variant(variant)
                .subgraph(&full)
                .run()
                .unwrap();
            assert_eq!(plain.final_config, sub.final_config);
        }
    }
}

#[test]
fn outside_vertices_follow_the_variant() {
    let g = Graph::grid(5, 5).unwrap();
    let prio = PriorityOrder::for_graph(&g);
    let clocks = ClockSet::sample(&g, 1.0, 2, 0).unwrap();
    let inner: Vec<u32> = vec![6, 7, 8, 11, 12, 13, 16, 17, 18];
    let sub = Subgraph::induced(&g, &inner).unwrap();
    let pcf = Simulation::new(&g, &prio, &clocks).subgraph(&sub).run().unwrap().final_config;
    let warm = Simulation::new(&g, &prio, &clocks)
        .variant(Variant::Warm)
        .subgraph(&sub)
        .run()
        .unwrap()
        .final_config;
    for v in (0..25).filter(|v| !inner.contains(&(*v as u32))) {
        assert!(pcf.is_frozen(v));
        assert!(warm.is_warm(v));
    }
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if !sub.edges().contains(&(e as u32)) {
            assert!(!pcf.is_open(e) && warm.is_open(e), "edge ({a}, {b})");
        }
    }
    // every inner vertex but the centre has an edge leaving the subgraph
    for v in inner.iter().filter(|&&v| v != 12) {
        assert!(warm.is_warm(*v as usize));
    }
    assert!(pcf.vertex_states().iter().all(|&f| f));
}

#[test]
fn trace_covers_every_state_change() {
    let g = Graph::grid(10, 10).unwrap();
    let prio = PriorityOrder::for_graph(&g);
    let clocks = ClockSet::sample(&g, 0.5, 6, 0).unwrap();
    let r = Simulation::new(&g, &prio, &clocks).record_trace(true).run().unwrap();
    let trace = r.trace.unwrap();
    assert_eq!(trace.len() as u64, r.event_count);
    assert!(trace.windows(2).all(|w| w[0].time <= w[1].time));
    let edges = trace.iter().filter(|e| e.kind == EventKind::Edge).count();
    assert_eq!(edges, r.final_config.open_count());
    let mut out = Vec::new();
    pcf::engine::write_trace(&mut out, &trace).unwrap();
    assert_eq!(String::from_utf8(out).unwrap().lines().count(), trace.len());
}

fn random_graph() -> impl Strategy<Value = (u32, Vec<(u32, u32)>, Vec<u32>)> {
    (2u32..14).prop_flat_map(|n| {
        let pairs: Vec<(u32, u32)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let m = pairs.len();
        (
            Just(n),
            proptest::sample::subsequence(pairs, 0..=m.min(20)),
            proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 0..=n as usize),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn absorbed_state_is_consistent(
        (n, edges, boundary) in random_graph(),
        alpha in 0.05f64..8.0,
        stream in 0u64..1000,
    ) {
        let g = Graph::generic(n, &edges, &boundary).unwrap();
        let prio = PriorityOrder::for_graph(&g);
        let clocks = ClockSet::sample(&g, alpha, 99, stream).unwrap();
        let r = run_pcf(&g, &prio, &clocks, f64::INFINITY).unwrap();
        let c = &r.final_config;
        prop_assert!(r.event_count as usize <= g.vertex_count() + g.edge_count());
        prop_assert_eq!(r.cluster_sizes.iter().map(|&s| s as usize).sum::<usize>(), g.vertex_count());
        // every clock has fired: all clusters frozen, and no edge left between warm vertices
        prop_assert_eq!(c.frozen_count(), g.vertex_count());
        let comp = c.components(&g);
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            if c.is_open(e) {
                prop_assert_eq!(comp[a as usize], comp[b as usize]);
            }
        }

        let warm = run_warm_pcf(&g, &prio, &clocks, f64::INFINITY).unwrap();
        prop_assert!(warm.final_config.dominates(c));
        for v in 0..g.vertex_count() {
            if g.is_boundary(v) {
                prop_assert!(warm.final_config.is_warm(v));
            }
        }
    }
}
