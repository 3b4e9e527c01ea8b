use super::*;
use crate::escape::{classify_orientation, OrientationClass};
use crate::graph::max_codegree;
use crate::tree;

fn cycle(n: usize) -> Graph {
    let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &e).unwrap()
}

fn petersen() -> Graph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::new(10, &e).unwrap()
}

#[test]
fn single_vertex_is_trivial() {
    let g = Graph::empty(1);
    let s = EmbedState::init(&g, &g, EmbedConfig::practical(3, 8, 0)).unwrap();
    assert_eq!(s.critical().sorted_members(), vec![0]);
    assert_eq!(s.node_count(), 1);
    assert!(s.escape_way().is_empty());
}

#[test]
fn star_root_reserves_every_leaf() {
    let g = tree::star(6).unwrap().as_graph().clone();
    let s = EmbedState::init(&g, &g, EmbedConfig::practical(5, 8, 0)).unwrap();
    assert_eq!(s.root(), 0);
    assert_eq!(s.escape_way().len(), 5);
    assert_eq!(s.critical().len(), 1);
}

#[test]
fn root_deletion_costs_at_most_the_codegree() {
    let g = petersen();
    // j drops two of the root's three edges
    let j = g.filter_edges(|u, v| !((u == 0 && v == 1) || (u == 0 && v == 4)));
    let cfg = EmbedConfig {
        root: RootPolicy::Fixed(0),
        ..EmbedConfig::practical(2, 8, 0)
    };
    let s = EmbedState::init(&g, &j, cfg).unwrap();
    assert_eq!(s.removed(), &[1, 4]);
    let cod = max_codegree(&g);
    for v in g.vertices().filter(|&v| v != 0 && !s.removed().contains(&v)) {
        assert!(j.degree(v) - s.working_j().degree(v) <= cod);
    }
}

#[test]
fn init_errors() {
    assert_eq!(
        EmbedState::init(&Graph::empty(0), &Graph::empty(0), EmbedConfig::practical(2, 8, 0)).unwrap_err(),
        EmbedError::EmptyGraph
    );
    let g = Graph::new(3, &[(1, 2)]).unwrap();
    let cfg = EmbedConfig {
        root: RootPolicy::Fixed(0),
        ..EmbedConfig::practical(2, 8, 0)
    };
    assert_eq!(EmbedState::init(&g, &g, cfg).unwrap_err(), EmbedError::RootIsolated(0));
    let j = Graph::new(3, &[(0, 1)]).unwrap();
    assert_eq!(
        EmbedState::init(&g, &j, EmbedConfig::practical(2, 8, 0)).unwrap_err(),
        EmbedError::NotSpanning
    );
}

#[test]
fn first_extension_uses_a_root_arc() {
    let g = petersen();
    let mut s = EmbedState::init(&g, &g, EmbedConfig::practical(3, 8, 0)).unwrap();
    let c = s.extend(0).unwrap();
    assert_eq!(s.vertex_of(c), Some(1));
    assert!(matches!(s.log().last(), Some(Event::Case1 { .. })));
    assert_eq!(s.stats().case2, 0);
}

#[test]
fn path_along_a_cycle() {
    let g = cycle(40);
    let cfg = EmbedConfig {
        root: RootPolicy::Fixed(0),
        ..EmbedConfig::practical(2, 2, 1)
    };
    let mut s = EmbedState::init(&g, &g, cfg).unwrap();
    let mut adv = TreeAdversary::new(&tree::path(20).unwrap(), TreeOrder::Dfs);
    let e = run_game(&mut s, &mut adv, 20).unwrap();
    assert!(e.certified_induced());
    assert_eq!(e.len(), 20);
    assert!(s.stats().case2 > 0);
    assert_eq!(s.stats().case1 + s.stats().case2, 19);
}

#[test]
fn saturated_request_is_rejected() {
    let g = cycle(12);
    let cfg = EmbedConfig {
        root: RootPolicy::Fixed(0),
        ..EmbedConfig::practical(2, 2, 0)
    };
    let mut s = EmbedState::init(&g, &g, cfg).unwrap();
    s.extend(0).unwrap();
    s.extend(0).unwrap();
    assert_eq!(s.extend(0), Err(EmbedError::NodeSaturated { node: 0, degree: 2 }));
    assert_eq!(s.extend(99), Err(EmbedError::UnknownNode(99)));
    let mut adv = Scripted::new(vec![Request::Extend(0)]);
    let err = run_game(&mut s, &mut adv, 10).unwrap_err();
    assert_eq!(err.kind, FailureKind::InvalidRequest);
}

#[test]
fn target_one_succeeds_immediately() {
    let g = petersen();
    let mut s = EmbedState::init(&g, &g, EmbedConfig::practical(3, 8, 0)).unwrap();
    let mut adv = FreeRandom::new(0, 0.0);
    let e = run_game(&mut s, &mut adv, 1).unwrap();
    assert_eq!(e.len(), 1);
    assert!(e.certified_induced());
}

#[test]
fn rollback_basics() {
    let g = cycle(30);
    let cfg = EmbedConfig {
        root: RootPolicy::Fixed(0),
        ..EmbedConfig::practical(2, 2, 0)
    };
    let mut s = EmbedState::init(&g, &g, cfg).unwrap();
    let a = s.extend(0).unwrap();
    let b = s.extend(a).unwrap();
    let snapshot = (s.embedding(), s.escape_way().clone());
    s.rollback(&[]).unwrap();
    assert_eq!((s.embedding(), s.escape_way().clone()), snapshot);
    s.rollback(&[b]).unwrap();
    assert_eq!(s.node_count(), 2);
    s.check_invariants().unwrap();
    assert_eq!(s.rollback(&[0]), Err(EmbedError::RootDeletion));
    let c = s.extend(a).unwrap();
    assert_eq!(s.rollback(&[a]), Err(EmbedError::NotClosed(c)));
}

#[test]
fn delete_then_replay() {
    let g = cycle(50);
    let cfg = EmbedConfig {
        root: RootPolicy::Fixed(0),
        ..EmbedConfig::practical(2, 2, 5)
    };
    let mut s = EmbedState::init(&g, &g, cfg).unwrap();
    let mut last = 0;
    let mut ids = vec![0];
    for _ in 0..8 {
        last = s.extend(last).unwrap();
        ids.push(last);
    }
    s.rollback(&ids[5..]).unwrap();
    let mut last = ids[4];
    for _ in 0..4 {
        last = s.extend(last).unwrap();
    }
    let mut e = s.embedding();
    e.certificate = Some(verify_induced(s.host(), s.working_j(), &e));
    assert!(e.certified_induced());
    assert_eq!(e.len(), 9);
}

#[test]
fn verify_examples() {
    let tri = Graph::complete(3);
    let e = Embedding {
        nodes: vec![(0, 0), (1, 1)],
        edges: vec![(0, 1)],
        certificate: None,
    };
    assert!(verify_induced(&tri, &tri, &e).passed());
    let e = Embedding {
        nodes: vec![(0, 0), (1, 1), (2, 2)],
        edges: vec![(0, 1), (1, 2)],
        certificate: None,
    };
    let c = verify_induced(&tri, &tri, &e);
    assert_eq!(c.violation.unwrap().kind, ViolationKind::Chord);
    let e = Embedding {
        nodes: vec![(0, 0), (1, 0)],
        edges: vec![(0, 1)],
        certificate: None,
    };
    assert_eq!(
        verify_induced(&tri, &tri, &e).violation.unwrap().kind,
        ViolationKind::NotInjective
    );
}

#[test]
fn paper_mode_refuses_small_hosts() {
    let g = petersen();
    match EmbedState::init(&g, &g, EmbedConfig::paper(3, 8, 0)) {
        Err(EmbedError::HypothesisRefused(h)) => {
            assert!(matches!(h[0], Hypothesis::MinimumDegree { required: 30_000_000, actual: 3 }));
            // cubic, so the whole graph is a dense spot
            assert!(matches!(&h[1], Hypothesis::Density { witness, .. } if witness.vertices.len() == 10));
        }
        other => panic!("unexpected {other:?}"),
    }
    let k5 = Graph::complete(5);
    let h = paper_hypotheses(&k5, 2);
    assert!(h.iter().any(|x| matches!(x, Hypothesis::Density { .. })));
}

#[test]
fn tree_adversaries_finish_on_a_cycle() {
    let g = cycle(60);
    let t = tree::path(10).unwrap();
    for order in [TreeOrder::Dfs, TreeOrder::Bfs, TreeOrder::Random(3), TreeOrder::Hostile] {
        let cfg = EmbedConfig {
            root: RootPolicy::Fixed(0),
            ..EmbedConfig::practical(2, 2, 0)
        };
        let mut adv = TreeAdversary::new(&t, order);
        let r = play(&g, &g, cfg, &mut adv, t.node_count());
        let e = r.outcome.unwrap();
        assert!(e.certified_induced());
        let s = r.state.unwrap();
        let rooted = s.escape_way().filtered(|u, v| {
            s.node_of(u).is_some() && s.node_of(v).is_some()
        });
        let vs: Vec<_> = e.nodes.iter().map(|p| p.1).collect();
        let sub = g.induced(&vs);
        let mut local = ArcSet::new(vs.len());
        for (u, v) in rooted.arcs() {
            let a = vs.iter().position(|&x| x == u).unwrap();
            let b = vs.iter().position(|&x| x == v).unwrap();
            local.insert(&sub, a, b).unwrap();
        }
        assert_eq!(classify_orientation(&sub, &local), OrientationClass::RootedTree);
    }
}

#[test]
fn free_random_with_rollbacks_keeps_invariants() {
    let g = cycle(60);
    for seed in 0..20 {
        let cfg = EmbedConfig {
            root: RootPolicy::Fixed(0),
            ..EmbedConfig::practical(2, 2, seed)
        };
        let mut s = EmbedState::init(&g, &g, cfg).unwrap();
        let mut adv = FreeRandom::new(seed, 0.2);
        if let Ok(e) = run_game(&mut s, &mut adv, 12) {
            assert!(e.certified_induced());
        }
        s.check_invariants().unwrap();
    }
}

#[test]
fn event_log_is_deterministic() {
    let g = petersen();
    let run = || {
        let mut adv = TreeAdversary::new(&tree::complete_ary(3, 4).unwrap(), TreeOrder::Random(9));
        let r = play(&g, &g, EmbedConfig::practical(3, 4, 4), &mut adv, 4);
        format_log(r.state.unwrap().log())
    };
    assert_eq!(run(), run());
}

#[test]
fn dot_marks_tree_arcs() {
    let g = petersen();
    let mut s = EmbedState::init(&g, &g, EmbedConfig::practical(3, 8, 0)).unwrap();
    s.extend(0).unwrap();
    let dot = s.to_dot();
    assert!(dot.starts_with("digraph B {"));
    assert!(dot.contains("0 -> 1 [style=bold]"));
    assert!(dot.contains("0 -> 4 [style=dashed"));
}

#[test]
fn threshold_rules() {
    let g = petersen();
    assert_eq!(ThresholdRule::MinDegreeQuarter.resolve(&g), 8);
    assert_eq!(ThresholdRule::Fixed(5).resolve(&g), 5);
    assert_eq!(ThresholdRule::DegreeQuantile(0.5).resolve(&g), 8);
    let star = tree::star(30).unwrap().as_graph().clone();
    assert_eq!(ThresholdRule::HubCount(0).resolve(&star), 30);
    assert_eq!(ThresholdRule::HubCount(1).resolve(&star), 8);
    assert_eq!(ThresholdRule::default(), ThresholdRule::HubCount(8));
}

#[test]
fn failed_steps_leave_a_consistent_state() {
    use crate::experiments::{gnp, preprocess_random, GnpParams, PipelineConfig};
    let raw = gnp(&GnpParams::with_average_degree(2_000, 32, 100));
    let g = preprocess_random(&raw, 32, &PipelineConfig::default()).unwrap().0.graph;
    let d = ThresholdRule::HubCount(8).resolve(&g);
    let mut reservation_failures = 0;
    for seed in 0..10 {
        let mut s = EmbedState::init(&g, &g, EmbedConfig::practical(3, d, seed)).unwrap();
        let mut adv = FreeRandom::new(seed, 0.2);
        if let Err(f) = run_game(&mut s, &mut adv, 40) {
            reservation_failures += (f.kind == FailureKind::ReservationFailed) as usize;
        }
        s.check_invariants().unwrap();
    }
    assert!(reservation_failures > 0);
}
