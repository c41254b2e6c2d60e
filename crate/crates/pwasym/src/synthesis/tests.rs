use super::*;
use crate::abstraction::{build_a1, refinement_sequence};
use crate::fixtures;
use crate::scalar::{int, ratio, zero};

fn interval(a: Scalar, b: Scalar) -> Polytope {
    Polytope::from_box(&[a], &[b])
}

#[test]
fn spec_automaton_validation() {
    assert!(SpecAutomaton::new(vec![0, 1], vec![(0, 1), (1, 1)], 2).is_ok());
    assert_eq!(
        SpecAutomaton::new(vec![0, 5], vec![(0, 1), (1, 1)], 2).unwrap_err(),
        Error::SpecStateNotAMode(5)
    );
    assert_eq!(
        SpecAutomaton::new(vec![0, 1], vec![(0, 1)], 2).unwrap_err(),
        Error::SpecBlockingState(1)
    );
    assert!(SpecAutomaton::new(vec![0, 0], vec![(0, 0), (1, 0)], 2).is_err());
}

#[test]
fn input_graph_edges_are_exact_intersections() {
    let (_, a, _) = fixtures::component_fan();
    let graph = build_input_graph(&a, 0);
    assert_eq!(graph.nodes.len(), 4);
    assert_eq!(graph.edges, vec![(0, 2), (1, 3)]);

    // disjoint input sets give an edgeless graph
    let states = vec![
        crate::abstraction::SymbolicState {
            id: 0,
            cell: interval(zero(), int(1)),
            mode: 0,
            spurious: false,
        },
        crate::abstraction::SymbolicState {
            id: 1,
            cell: interval(int(1), int(2)),
            mode: 0,
            spurious: false,
        },
    ];
    let transitions = vec![
        crate::abstraction::SymbolicTransition {
            src: 0,
            dst: 0,
            input_set: interval(zero(), int(1)),
        },
        crate::abstraction::SymbolicTransition {
            src: 0,
            dst: 1,
            input_set: interval(int(2), int(3)),
        },
    ];
    let small = SymbolicSystem::from_parts(1, states, transitions);
    let graph = build_input_graph(&small, 0);
    assert_eq!(graph.nodes.len(), 2);
    assert!(graph.edges.is_empty());
    let single = build_input_graph(&small, 1);
    assert!(single.nodes.is_empty());
}

#[test]
fn connected_components_examples() {
    let (_, a, _) = fixtures::component_fan();
    let graph = build_input_graph(&a, 0);
    assert_eq!(connected_components(&graph), vec![vec![0, 2], vec![1, 3]]);

    let edgeless = InputGraph {
        nodes: vec![interval(zero(), int(1)); 3],
        edges: vec![],
        dsts: vec![0, 1, 2],
    };
    assert_eq!(
        connected_components(&edgeless),
        vec![vec![0], vec![1], vec![2]]
    );

    let complete = InputGraph {
        nodes: vec![interval(zero(), int(1)); 3],
        edges: vec![(0, 1), (0, 2), (1, 2)],
        dsts: vec![0, 1, 2],
    };
    assert_eq!(connected_components(&complete), vec![vec![0, 1, 2]]);
}

#[test]
fn post_q_examples() {
    let (sys, a, spec) = fixtures::component_fan();
    // the fan state sits in the first spec region with two successors
    let post = post_q(&sys, &a, &spec, 0);
    let expected = PolytopeSet::new(
        1,
        vec![
            sys.restricted_guard(1).clone(),
            sys.restricted_guard(2).clone(),
        ],
    );
    assert!(post.same_set_up_to_null(&expected));
    // a cell whose mode is outside the spec has no successors
    assert!(post_q(&sys, &a, &spec, 4).is_empty());
    // self-loop-only spec state keeps its own region
    let post2 = post_q(&sys, &a, &spec, 2);
    assert!(post2.same_set_up_to_null(&PolytopeSet::from_polytope(
        sys.restricted_guard(2).clone()
    )));
}

#[test]
fn synthesize_selects_the_conforming_component() {
    let (sys, a, spec) = fixtures::component_fan();
    let strategy = synthesize(&sys, &a, &spec);
    let assignment = strategy.assignment(0).expect("fan state is controlled");
    // exactly V1 and V3 survive
    assert_eq!(assignment.parts().len(), 2);
    let v1 = interval(zero(), ratio(8, 20));
    let v3 = interval(ratio(6, 20), ratio(10, 20));
    assert!(assignment.parts()[0].same_set(&v1));
    assert!(assignment.parts()[1].same_set(&v3));
    // input sets in different components never intersect
    let graph = build_input_graph(&a, 0);
    let comps = connected_components(&graph);
    for (i, c1) in comps.iter().enumerate() {
        for c2 in &comps[i + 1..] {
            for &n1 in c1 {
                for &n2 in c2 {
                    assert!(!graph.nodes[n1].intersects(&graph.nodes[n2]));
                }
            }
        }
    }

    // restricting the spec to the unreachable region empties the strategy
    let narrow = SpecAutomaton::new(
        vec![0, 1, 2],
        vec![(0, 2), (1, 1), (2, 2)],
        sys.modes().len(),
    )
    .unwrap();
    let strategy = synthesize(&sys, &a, &narrow);
    assert!(strategy.assignment(0).is_none());
}

#[test]
fn synthesize_keeps_full_input_set_under_self_loop_specs() {
    let sys = fixtures::identity1d();
    let a = build_a1(&sys, ratio(1, 2)).unwrap();
    let spec = SpecAutomaton::new(vec![0], vec![(0, 0)], 1).unwrap();
    let strategy = synthesize(&sys, &a, &spec);
    for s in a.states() {
        let assignment = strategy.assignment(s.id).expect("all states controlled");
        assert_eq!(assignment.parts().len(), 1);
        assert!(assignment.parts()[0].same_set(sys.input()));
    }
}

#[test]
fn controller_system_restricts_transitions() {
    let (sys, a, spec) = fixtures::component_fan();
    let strategy = synthesize(&sys, &a, &spec);
    let controlled = controller_system(&a, &strategy);
    assert_eq!(controlled.states.len(), a.states().len());
    assert_eq!(controlled.transitions.len(), 2);
    for tr in &controlled.transitions {
        assert!(tr.dst == 1 || tr.dst == 3);
        // restriction monotonicity: every kept transition exists upstream
        assert!(a
            .transitions()
            .iter()
            .any(|t| t.src == tr.src && t.dst == tr.dst));
    }

    // the empty strategy removes every transition
    let none = ControlStrategy::from_assignments(1, BTreeMap::new());
    assert!(controller_system(&a, &none).transitions.is_empty());

    // a full assignment keeps everything
    let sys = fixtures::identity1d();
    let a = build_a1(&sys, ratio(1, 2)).unwrap();
    let spec = SpecAutomaton::new(vec![0], vec![(0, 0)], 1).unwrap();
    let strategy = synthesize(&sys, &a, &spec);
    assert_eq!(
        controller_system(&a, &strategy).transitions.len(),
        a.transitions().len()
    );
}

#[test]
fn controller_bound_equals_granularity() {
    let sys = fixtures::slide1d();
    let a = build_a1(&sys, ratio(1, 2)).unwrap();
    assert_eq!(controller_bound(&a), crate::abstraction::gran(&a));
    assert_eq!(controller_bound(&a), ratio(1, 2));

    let fixed = fixtures::identity1d();
    let a = build_a1(&fixed, ratio(1, 2)).unwrap();
    assert_eq!(controller_bound(&a), zero());
}

#[test]
fn closed_loop_identity_is_constant() {
    let sys = fixtures::identity1d();
    let a = build_a1(&sys, ratio(1, 2)).unwrap();
    let spec = SpecAutomaton::new(vec![0], vec![(0, 0)], 1).unwrap();
    let strategy = synthesize(&sys, &a, &spec);
    let run = simulate_closed_loop(&sys, &a, &strategy, &spec, &[ratio(1, 4)], 10, 3).unwrap();
    assert_eq!(run.truncation, Truncation::None);
    assert_eq!(run.trajectory.states.len(), 11);
    assert!(run.trajectory.states.iter().all(|x| x == &vec![ratio(1, 4)]));
    assert!(run.witness.iter().all(|w| w == &vec![0]));
}

#[test]
fn closed_loop_rejects_uncontrolled_starts() {
    let sys = fixtures::shift1d();
    let a = build_a1(&sys, ratio(1, 2)).unwrap();
    let spec = fixtures::shift1d_spec(&sys);
    let strategy = synthesize(&sys, &a, &spec);
    // mode-1 cells are uncontrolled under the mode-2-only spec
    let err = simulate_closed_loop(&sys, &a, &strategy, &spec, &[ratio(1, 4)], 5, 1).unwrap_err();
    assert_eq!(err, Error::NoAdmissibleInput);
    let err = simulate_closed_loop(&sys, &a, &strategy, &spec, &[int(9)], 5, 1).unwrap_err();
    assert_eq!(err, Error::OutsideRegion);
    // mode-2 starts hold forever
    let run = simulate_closed_loop(&sys, &a, &strategy, &spec, &[ratio(5, 4)], 8, 1).unwrap();
    assert_eq!(run.truncation, Truncation::None);
    assert!(run.witness_never_empty());
}

#[test]
fn jump_benchmark_enforces_mode_switch_spec() {
    let sys = fixtures::jump2d();
    let spec = fixtures::jump2d_spec(&sys);
    let levels = refinement_sequence(&sys, ratio(1, 2), 2, None).unwrap();
    let a = &levels.last().unwrap().0;
    let strategy = synthesize(&sys, a, &spec);
    // the rightmost mode-1 column can be forced into mode 2; mode 2 holds
    assert_eq!(strategy.controlled_count(), 3);
    let verdict = check_enforcement(&sys, a, &strategy, &spec, 100, 20, 11);
    assert!(!verdict.vacuous);
    assert_eq!(verdict.violations, 0);
    assert_eq!(verdict.truncated, 0);

    // corrupting an uncontrolled cell to the full input set breaks
    // enforcement within the same harness
    let uncontrolled = a
        .states()
        .iter()
        .find(|s| s.mode == 0 && strategy.assignment(s.id).is_none())
        .expect("some mode-1 cell is uncontrolled");
    let mut corrupted = strategy.clone();
    corrupted.set_assignment(
        uncontrolled.id,
        PolytopeSet::from_polytope(sys.input().clone()),
    );
    let verdict = check_enforcement(&sys, a, &corrupted, &spec, 100, 20, 11);
    assert!(verdict.violations > 0);
    let violation = verdict.first_violation.expect("violation recorded");
    assert!(!violation.run.witness_never_empty());
}

#[test]
fn zero_trials_pass_vacuously() {
    let sys = fixtures::identity1d();
    let a = build_a1(&sys, ratio(1, 2)).unwrap();
    let spec = SpecAutomaton::new(vec![0], vec![(0, 0)], 1).unwrap();
    let strategy = synthesize(&sys, &a, &spec);
    let verdict = check_enforcement(&sys, &a, &strategy, &spec, 0, 10, 1);
    assert!(verdict.passed());
    assert!(verdict.vacuous);
}
