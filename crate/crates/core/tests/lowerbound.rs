mod common;

use common::{arb_connected_graph, arb_graph, brute_force};
use powergraph::exact::{exact_mds, exact_mds_square, exact_mvc, exact_mvc_square, ExactConfig};
use powergraph::generators::{complete, path, star};
use powergraph::lowerbound::*;
use powergraph::rational::Rational;
use powergraph::{is_feasible, Graph, ProblemKind};
use proptest::prelude::*;

fn bits(v: u32, len: usize) -> Vec<bool> {
    (0..len).map(|i| (v >> i) & 1 == 1).collect()
}

fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

fn big() -> ExactConfig {
    ExactConfig::with_cap(400)
}

type Gen = fn(&[bool], &[bool]) -> powergraph::Result<LowerBoundInstance>;

fn sweep_all_pairs(generate: Gen) -> usize {
    let mut checked = 0;
    for xv in 0..16 {
        for yv in 0..16 {
            let inst = generate(&bits(xv, 4), &bits(yv, 4)).unwrap();
            let report = verify_family(&inst, &big()).unwrap();
            assert!(report.agreement, "x={xv:x} y={yv:x}: {report:?}");
            assert!(report.partition_sane && report.cut_within_cap, "x={xv:x} y={yv:x}: {report:?}");
            checked += 1;
        }
    }
    checked
}

#[test]
fn bad_parameters_are_domain_errors() {
    let x = vec![false; 9];
    assert_eq!(gen_mvc_base(3, &x, &x).unwrap_err().kind(), "domain");
    assert_eq!(gen_mds_base(0, &[], &[]).unwrap_err().kind(), "domain");
    assert_eq!(gen_mvc_square(2, &x, &x).unwrap_err().kind(), "domain");
    assert_eq!(gen_mwds_square_approx(2, 8, 2, &x, &x, 0).unwrap_err().kind(), "domain");
    assert_eq!(gen_mds_square_approx_unweighted(3, 2, 2, &x, &x, 0).unwrap_err().kind(), "generation");
}

#[test]
fn sizes_at_k2() {
    let z = vec![false; 4];
    let base = gen_mvc_base(2, &z, &z).unwrap();
    assert_eq!(base.graph.n(), 16);
    assert_eq!(base.graph.m(), 4 * 1 + 2 * 4 + 4 * 2 + 8);

    // 4k·log k row-to-gadget edges plus 4 cycle edges per gadget.
    let bit_edges = 4 * 2 + 8;
    let mw = gen_mwvc_square(2, &z, &z).unwrap();
    assert_eq!(mw.graph.n(), 16 + bit_edges + 2 * 2);
    assert!(mw.graph.weights().unwrap().iter().all(|w| *w == int(0) || *w == int(1)));

    let sq = gen_mvc_square(2, &z, &z).unwrap();
    assert_eq!(sq.gadgets.len(), 2 * 2 + 4 * 2 + 8);
    assert_eq!(sq.graph.n(), 16 + 3 * 20);
    assert_eq!(sq.thresholds.yes_at_most, int(8 + 40));
    assert!(!sq.graph.is_weighted());

    let mds = gen_mds_base(2, &z, &z).unwrap();
    assert_eq!(mds.graph.n(), 20);
    assert_eq!(mds.thresholds.yes_at_most, int(6));

    // Shared gadgets on all four rows: 4k + 4k·log k + 12·log k.
    let mdsx = gen_mds_square_exact(2, &z, &z).unwrap();
    assert_eq!(mdsx.gadgets.len(), 8 + 8 + 12);
    assert_eq!(mdsx.graph.n(), 20 + 5 * 28);
}

#[test]
fn k1_instances_are_tiny() {
    let (one, zero) = (vec![true], vec![false]);
    let inst = gen_mds_base(1, &one, &one).unwrap();
    assert_eq!((inst.graph.n(), inst.graph.m()), (4, 2));
    assert!(verify_family(&inst, &ExactConfig::default()).unwrap().agreement);
    let inst = gen_mvc_base(1, &zero, &one).unwrap();
    let report = verify_family(&inst, &ExactConfig::default()).unwrap();
    assert_eq!(report.value, int(1));
    assert!(report.disj && report.agreement);
}

#[test]
fn mvc_base_examples_match_brute_force() {
    let z = vec![false; 4];
    let inst = gen_mvc_base(2, &z, &z).unwrap();
    let value = brute_force(&inst.graph, ProblemKind::Vc1);
    assert!(value > int(8));
    assert_eq!(exact_mvc(&inst.graph).unwrap().value, value);

    let mut x = vec![false; 4];
    x[0] = true;
    let inst = gen_mvc_base(2, &x, &x).unwrap();
    let value = brute_force(&inst.graph, ProblemKind::Vc1);
    assert!(value <= int(8));
    assert_eq!(exact_mvc(&inst.graph).unwrap().value, value);
}

#[test]
fn mvc_base_sweep() {
    assert_eq!(sweep_all_pairs(|x, y| gen_mvc_base(2, x, y)), 256);
}

#[test]
fn mds_base_sweep() {
    assert_eq!(sweep_all_pairs(|x, y| gen_mds_base(2, x, y)), 256);
}

#[test]
fn mvc_square_sweep_and_offset() {
    assert_eq!(sweep_all_pairs(|x, y| gen_mvc_square(2, x, y)), 256);
    for (xv, yv) in [(0, 0), (1, 1), (0b0110, 0b1001), (15, 15)] {
        let (x, y) = (bits(xv, 4), bits(yv, 4));
        let base = exact_mvc(&gen_mvc_base(2, &x, &y).unwrap().graph).unwrap().value;
        let sq = gen_mvc_square(2, &x, &y).unwrap();
        let value = exact_mvc_square(&sq.graph, &big()).unwrap().value;
        assert_eq!(value - base, int(2 * sq.gadgets.len() as i64));
    }
}

#[test]
fn mwvc_square_equals_base() {
    assert_eq!(sweep_all_pairs(|x, y| gen_mwvc_square(2, x, y)), 256);
    for (xv, yv) in [(0, 0), (1, 1), (0b1010, 0b0101), (15, 15)] {
        let (x, y) = (bits(xv, 4), bits(yv, 4));
        let base = exact_mvc(&gen_mvc_base(2, &x, &y).unwrap().graph).unwrap().value;
        let h = gen_mwvc_square(2, &x, &y).unwrap();
        assert_eq!(exact_mvc_square(&h.graph, &big()).unwrap().value, base);
        // Dropping the zero-weight vertices from any cover never helps.
        let unweighted = exact_mvc_square(&h.graph.clone().without_weights(), &big()).unwrap().value;
        assert!(unweighted >= base);
    }
}

#[test]
fn mds_square_exact_offset_is_gadget_count() {
    for (xv, yv) in [(0, 0), (1, 1), (0b0110, 0b1001), (0b1000, 0b1000), (15, 15)] {
        let (x, y) = (bits(xv, 4), bits(yv, 4));
        let base = exact_mds(&gen_mds_base(2, &x, &y).unwrap().graph).unwrap().value;
        let sq = gen_mds_square_exact(2, &x, &y).unwrap();
        let report = verify_family(&sq, &big()).unwrap();
        assert_eq!(report.value - base, int(sq.gadgets.len() as i64));
        assert!(report.agreement);
    }
}

#[test]
fn mds_square_exact_sweep() {
    assert_eq!(sweep_all_pairs(|x, y| gen_mds_square_exact(2, x, y)), 256);
}

#[test]
fn approx_family_sweeps() {
    assert_eq!(sweep_all_pairs(|x, y| gen_mwds_square_approx(2, 8, 2, x, y, 1)), 256);
    assert_eq!(sweep_all_pairs(|x, y| gen_mds_square_approx_unweighted(2, 8, 2, x, y, 1)), 256);
}

#[test]
fn approx_family_examples() {
    let mut x = vec![false; 4];
    x[0] = true;
    let w = gen_mwds_square_approx(2, 8, 2, &x, &x, 7).unwrap();
    assert_eq!(exact_mds_square(&w.graph, &big()).unwrap().value, int(6));
    assert_eq!(w.set_system.as_ref().unwrap().ell, 8);
    let u = gen_mds_square_approx_unweighted(2, 8, 2, &x, &x, 7).unwrap();
    assert!(!u.graph.is_weighted());
    assert!(exact_mds_square(&u.graph, &big()).unwrap().value <= int(8));

    let (x, y) = (bits(0b0011, 4), bits(0b1100, 4));
    let w = gen_mwds_square_approx(2, 8, 2, &x, &y, 7).unwrap();
    assert!(exact_mds_square(&w.graph, &big()).unwrap().value >= int(7));
    let u = gen_mds_square_approx_unweighted(2, 8, 2, &x, &y, 7).unwrap();
    assert!(exact_mds_square(&u.graph, &big()).unwrap().value >= int(9));
}

#[test]
fn sampled_k4_sweeps() {
    let mut rng = powergraph::generators::rng_from_seed(11);
    use rand::Rng;
    for trial in 0..12 {
        let x: Vec<bool> = (0..16).map(|_| rng.random_bool(0.3)).collect();
        let mut y: Vec<bool> = (0..16).map(|_| rng.random_bool(0.3)).collect();
        if trial % 2 == 0 {
            // Force disjointness on even trials.
            y.iter_mut().zip(&x).for_each(|(b, &a)| *b &= !a);
        }
        for inst in [gen_mvc_base(4, &x, &y).unwrap(), gen_mds_base(4, &x, &y).unwrap(), gen_mwvc_square(4, &x, &y).unwrap()] {
            let report = verify_family(&inst, &big()).unwrap();
            assert!(report.agreement && report.partition_sane && report.cut_within_cap, "{report:?}");
            assert_eq!(report.cut_cap, 8);
        }
    }
}

#[test]
fn set_system_examples() {
    let sys = gen_set_system(8, 4, 2, 42).unwrap();
    assert!(sys.is_r_covering());
    assert_eq!(sys.sets.len(), 4);
    assert!(sys.sets.iter().all(|&s| s != 0 && s != sys.universe()));
    let r1 = gen_set_system(5, 6, 1, 9).unwrap();
    assert!(r1.sets.iter().all(|&s| s != 0 && s != r1.universe()));
}

#[test]
fn set_gadget_alone_has_weight_two_pair() {
    let sys = gen_set_system(8, 2, 2, 1).unwrap();
    let gadget = set_gadget(&sys, int(2));
    assert_eq!(exact_mds_square(&gadget.graph, &ExactConfig::default()).unwrap().value, int(2));
    for i in 0..2 {
        let pair = [gadget.sets[i], gadget.complements[i]];
        assert!(is_feasible(&gadget.graph, ProblemKind::Ds2, &pair).unwrap());
    }
}

#[test]
fn tampered_instance_fails_partition_sanity() {
    let inst = gen_mvc_base(2, &[false; 4], &[true; 4]).unwrap();
    assert!(inst.partition_sane());
    let (u, v) = inst.x_edges[0];
    let bob = inst.partition.bob[0];
    let edges = inst.graph.edges().map(|e| if e == (u, v) { (u, bob) } else { e });
    let mut tampered = inst.clone();
    tampered.graph = Graph::from_edges(inst.graph.n(), edges).unwrap();
    tampered.x_edges[0] = (u, bob);
    assert!(!tampered.partition_sane());

    let mut wrong_cut = inst.clone();
    wrong_cut.cut.pop();
    assert!(!wrong_cut.partition_sane());
}

#[test]
fn normalized_optimum_of_mvc_square() {
    let (x, y) = (bits(0b0101, 4), bits(0b0100, 4));
    let inst = gen_mvc_square(2, &x, &y).unwrap();
    let opt = exact_mvc_square(&inst.graph, &big()).unwrap();
    let normal = inst.normalize(&opt.members).unwrap();
    assert_eq!(normal.len(), opt.len());
    assert!(off_normal_gadgets(&inst.gadgets, ProblemKind::Vc2, &normal).is_empty());
    assert!(is_feasible(&inst.graph, ProblemKind::Vc2, &normal).unwrap());

    // Padding every gadget with its index-3 vertex is undone.
    let mut skewed = normal.clone();
    skewed.extend(inst.gadgets.iter().map(|g| g.path[2]));
    assert_eq!(off_normal_gadgets(&inst.gadgets, ProblemKind::Vc2, &skewed).len(), inst.gadgets.len());
    assert_eq!(inst.normalize(&skewed).unwrap(), normal);
}

#[test]
fn normalized_optimum_of_mds_square_exact() {
    let (x, y) = (bits(0b0001, 4), bits(0b0001, 4));
    let inst = gen_mds_square_exact(2, &x, &y).unwrap();
    let opt = exact_mds_square(&inst.graph, &big()).unwrap();
    let normal = inst.normalize(&opt.members).unwrap();
    assert_eq!(normal.len(), opt.len());
    assert!(off_normal_gadgets(&inst.gadgets, ProblemKind::Ds2, &normal).is_empty());
    assert!(inst.gadgets.iter().all(|g| normal.contains(&g.path[2])));
}

#[test]
fn dangling_transform_examples() {
    let h = dangling_transform(&path(2), 3, true);
    assert_eq!(h.n(), 5);
    assert_eq!(brute_force(&h, ProblemKind::Vc2), int(3));
    let h = dangling_transform(&complete(3), 3, true);
    assert_eq!(brute_force(&h, ProblemKind::Vc2), int(8));
    assert_eq!(exact_mvc_square(&h, &ExactConfig::default()).unwrap().value, int(8));
}

#[test]
fn merged_transform_examples() {
    for g in [path(2), star(3), path(3)] {
        let h = merged_dangling_transform(&g).unwrap();
        assert_eq!(brute_force(&h, ProblemKind::Ds2), int(2));
    }
}

/// Random superset of `members` grown until feasible.
fn random_feasible(h: &Graph, kind: ProblemKind, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut rng = powergraph::generators::rng_from_seed(seed);
    let mut order: Vec<usize> = (0..h.n()).collect();
    order.shuffle(&mut rng);
    let mut set = Vec::new();
    for v in order {
        if is_feasible(h, kind, &set).unwrap() {
            break;
        }
        set.push(v);
    }
    set
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dangling_offset_is_twice_edges(g in arb_graph(8)) {
        let h = dangling_transform(&g, 3, true);
        let lhs = exact_mvc_square(&h, &ExactConfig::with_cap(128)).unwrap().value;
        let rhs = exact_mvc(&g).unwrap().value + int(2 * g.m() as i64);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn merged_offset_is_one(g in arb_connected_graph(8)) {
        prop_assume!(g.m() > 0);
        let h = merged_dangling_transform(&g).unwrap();
        let lhs = exact_mds_square(&h, &ExactConfig::with_cap(128)).unwrap().value;
        prop_assert_eq!(lhs, exact_mds(&g).unwrap().value + int(1));
    }

    #[test]
    fn normalize_keeps_feasibility(g in arb_graph(6), seed in any::<u64>(), which in 0usize..3) {
        prop_assume!(g.m() > 0);
        let (h, gadgets, kind) = match which {
            0 => {
                let (h, gs) = dangling_transform_with_gadgets(&g, 3, true);
                (h, gs, ProblemKind::Vc2)
            }
            1 => {
                let (h, gs) = dangling_transform_with_gadgets(&g, 5, true);
                (h, gs, ProblemKind::Ds2)
            }
            _ => {
                let (h, gs) = merged_dangling_transform_with_gadgets(&g).unwrap();
                (h, gs, ProblemKind::Ds2)
            }
        };
        let set = random_feasible(&h, kind, seed);
        let out = normalize_cover(&h, &gadgets, kind, &set).unwrap();
        prop_assert!(is_feasible(&h, kind, &out).unwrap());
        prop_assert!(h.set_value(&out) <= h.set_value(&set));
        prop_assert_eq!(normalize_cover(&h, &gadgets, kind, &out).unwrap(), out);
    }

    #[test]
    fn infeasible_input_is_rejected(g in arb_graph(6)) {
        prop_assume!(g.m() > 0);
        let (h, gadgets) = dangling_transform_with_gadgets(&g, 3, true);
        let err = normalize_cover(&h, &gadgets, ProblemKind::Vc2, &[]).unwrap_err();
        prop_assert_eq!(err.kind(), "contract");
    }

    #[test]
    fn generated_set_systems_verify(ell in 3usize..12, t in 1usize..6, r in 1usize..3, seed in any::<u64>()) {
        if let Ok(sys) = gen_set_system(ell, t, r, seed) {
            prop_assert!(sys.is_r_covering());
            prop_assert_eq!(sys, gen_set_system(ell, t, r, seed).unwrap());
        }
    }
}
