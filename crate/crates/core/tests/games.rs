//! Worked examples on the shipped constructions.

mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use percop::constructions::{self, by_name};
use percop::corners::{find_k_temporal_corners, find_temporal_corners};
use percop::graph::is_retraction;
use percop::search::common_retractions;
use percop::solver::policy::{assign_moves, verify_policy, FnPolicy, OptimalPolicy};
use percop::solver::trace::{extract_trace, RobberPlay};
use percop::solver::{ctmax_bounded, is_k_copwin, static_cop_number, triple, SolverConfig};
use percop::table::{default_witness_dir, load_witness};
use percop::treewidth::{bag_strategy, exact_treewidth, smooth};
use percop::{Graph, PeriodicGraph};

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn q3_index(label: &str) -> usize {
    usize::from_str_radix(label, 2).unwrap()
}

#[test]
fn q3_needs_three_cops() {
    let pg = by_name("q3_rotation").unwrap().instance;
    assert_eq!(pg.footprint(), Graph::hypercube(3));
    assert!(!is_k_copwin(&pg, 2, &cfg()).unwrap().copwin);
    assert!(is_k_copwin(&pg, 3, &cfg()).unwrap().copwin);
    assert_eq!(static_cop_number(&pg.footprint(), &cfg()).unwrap(), 2);
}

#[test]
fn q3_cops_from_000_010_111_capture_by_round_three() {
    let pg = by_name("q3_rotation").unwrap().instance;
    let result = is_k_copwin(&pg, 3, &cfg()).unwrap();
    let start: Vec<usize> = ["000", "010", "111"].iter().map(|l| q3_index(l)).collect();
    let value = result.placement_value(&start).expect("placement wins");
    assert!(value <= 3, "worst case {value}");

    // Replaying the solver's moves from this placement never takes longer.
    let policy = FnPolicy {
        placement: start.clone(),
        rule: |t: usize, cops: &[usize], r: usize| {
            let target = result.best_move(t, cops, r).unwrap();
            assign_moves(&pg, t, cops, &target).unwrap()
        },
    };
    let verdict = verify_policy(&pg, &policy).unwrap();
    assert!(verdict.wins);
    assert!(verdict.max_capture_time.unwrap() <= 3);

    let tr = extract_trace(&result, Some(&start), &RobberPlay::Optimal).unwrap();
    assert!(tr.capture_round <= 3);
    assert!(tr.steps.len() <= result.state_count());
}

#[test]
fn q3_foremost_journey() {
    let pg = by_name("q3_rotation").unwrap().instance;
    let j = pg.foremost_journey(0, q3_index("000"), q3_index("111")).unwrap();
    assert_eq!(j.arrival_time(), 3);
    assert!(pg.is_temporally_connected());
}

#[test]
fn circulant_needs_three_cops() {
    let s = by_name("circulant_123").unwrap();
    let pg = &s.instance;
    assert_eq!(pg.footprint(), Graph::complete(11));
    for g in pg.snapshots() {
        assert_eq!(g.edge_count(), 11);
        assert_eq!(static_cop_number(g, &cfg()).unwrap(), 2);
    }
    assert!(find_k_temporal_corners(pg, 2).unwrap().is_empty());
    assert!(!is_k_copwin(pg, 2, &cfg()).unwrap().copwin);

    let three = find_k_temporal_corners(pg, 3).unwrap();
    assert!(three.iter().any(|w| w.t == 3 && w.covers == vec![0, 2, 9]));
}

#[test]
fn circulant_cops_from_0_3_8_capture_in_first_period() {
    let pg = by_name("circulant_123").unwrap().instance;
    let result = is_k_copwin(&pg, 3, &cfg()).unwrap();
    assert!(result.copwin);
    let value = result.placement_value(&[0, 3, 8]).expect("placement wins");
    assert!(value as usize <= pg.period(), "worst case {value}");
}

#[test]
fn circulant_witness_matches_generator() {
    let w = load_witness(&default_witness_dir(), "circulant_123").unwrap();
    let generated = constructions::circulant_123(&constructions::DEFAULT_CIRCULANT_STEPS)
        .unwrap()
        .instance;
    assert_eq!(triple(&w.instance, &cfg()).unwrap(), triple(&generated, &cfg()).unwrap());
}

#[test]
fn thm112_witness_has_no_corner() {
    let w = load_witness(&default_witness_dir(), "thm112").unwrap();
    let pg = &w.instance;
    assert!(find_temporal_corners(pg).is_empty());
    assert!(!is_k_copwin(pg, 1, &cfg()).unwrap().copwin);
    let fp = pg.footprint();
    assert_eq!(fp.degree(8), 8);
    for g in pg.snapshots() {
        assert!(g.is_tree());
        assert!((0..9).all(|v| g.degree(v) <= 2));
    }
    let two = is_k_copwin(pg, 2, &cfg()).unwrap();
    assert!(two.placement_value(&[2, 4]).unwrap() <= 2);
}

#[test]
fn lem122_witness_snapshots_have_girth_four() {
    let w = load_witness(&default_witness_dir(), "lem122").unwrap();
    for g in w.instance.snapshots() {
        assert_eq!(g.girth(), Some(4));
        assert!(g.is_connected());
    }
    assert!(find_temporal_corners(&w.instance).is_empty());
    assert!(w.instance.footprint().dismantle());
}

#[test]
fn search_321_witness_lives_on_petersen() {
    let w = load_witness(&default_witness_dir(), "search_321").unwrap();
    assert_eq!(w.instance.footprint(), Graph::petersen());
    assert_eq!(triple(&w.instance, &cfg()).unwrap().as_tuple(), (3, 2, 1));
}

#[test]
fn prop3_footprint_retracts_but_snapshots_do_not() {
    let w = load_witness(&default_witness_dir(), "prop3_retract").unwrap();
    let keep = [0, 1, 2, 3];
    // Folding u onto b or c retracts the footprint, yet each fold breaks in
    // some snapshot.
    let fp = w.instance.footprint();
    for target in [1, 2] {
        let map = [0, 1, 2, 3, target];
        assert!(is_retraction(&fp, &keep, &map).unwrap());
        assert!(w
            .instance
            .snapshots()
            .iter()
            .any(|g| !is_retraction(g, &keep, &map).unwrap()));
    }
    assert!(common_retractions(&w.instance, &keep).unwrap().is_empty());
}

#[test]
fn padded_bowtie_keeps_its_triple() {
    let pg = by_name("bowtie_221").unwrap().instance;
    let padded = pg.pad(10, 3).unwrap();
    assert_eq!(padded.n(), 10);
    assert_eq!(triple(&padded, &cfg()).unwrap().as_tuple(), (2, 2, 1));
    let mut fp = pg.footprint();
    fp = Graph::from_edges(10, &fp.edges()).unwrap();
    for (u, v) in [(3, 7), (7, 8), (8, 9)] {
        fp.add_edge(u, v).unwrap();
    }
    assert_eq!(padded.footprint(), fp);
}

#[test]
fn petersen_231_keeps_its_tree_for_nine_steps() {
    let s = by_name("petersen_231").unwrap();
    let pg = &s.instance;
    let p = pg.period();
    let longest = (0..p)
        .filter(|&t| pg.snapshot(t).is_tree())
        .map(|t| (0..p).take_while(|&d| pg.snapshot(t + d) == pg.snapshot(t)).count())
        .max()
        .unwrap();
    assert!(longest >= 9, "{longest}");
    assert_eq!(pg.footprint().domination_number().unwrap(), 2);
}

#[test]
fn bag_strategy_with_petersen_footprint() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pg = common::random_schedule(&mut rng, &Graph::petersen(), 3, 0.6);
    assert!(pg.is_temporally_connected());
    let (tw, td) = exact_treewidth(&pg.footprint()).unwrap();
    assert_eq!(tw, 4);
    let strategy = bag_strategy(&pg, &smooth(&td, &pg.footprint()).unwrap()).unwrap();
    assert!(verify_policy(&pg, &strategy).unwrap().wins);
    assert!(is_k_copwin(&pg, 5, &cfg()).unwrap().copwin);
}

#[test]
fn optimal_policy_verifies_on_every_construction() {
    for name in constructions::NAMES {
        let pg = by_name(name).unwrap().instance;
        let c = percop::solver::cop_number(&pg, &cfg()).unwrap();
        let result = is_k_copwin(&pg, c, &cfg()).unwrap();
        let verdict = verify_policy(&pg, &OptimalPolicy::new(&result).unwrap()).unwrap();
        assert!(verdict.wins, "{name}");
        let bound = result.placement_value(result.initial_placement.as_ref().unwrap()).unwrap();
        assert!(verdict.max_capture_time.unwrap() <= bound, "{name}");
    }
}

#[test]
fn ctmax_examples() {
    assert_eq!(ctmax_bounded(&Graph::complete(2), 3, &cfg()).unwrap().value, 1);
    let c4 = ctmax_bounded(&Graph::cycle(4), 2, &cfg()).unwrap();
    assert!(c4.value >= 2);
    assert!(c4.value <= exact_treewidth(&Graph::cycle(4)).unwrap().0 + 1);
}

#[test]
fn constant_sequences_collapse() {
    let pg = PeriodicGraph::constant(&Graph::petersen(), 2).unwrap();
    assert_eq!(triple(&pg, &cfg()).unwrap().as_tuple(), (3, 3, 3));
}
