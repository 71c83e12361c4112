mod common;

use proptest::prelude::*;
use subadj_core::families::{blow_up_log, cbf_report, dbar, delta_at, nonnegativity_witness, LogFibration};
use subadj_core::omega::{self, Collision, MarkedLine, Mobius};
use subadj_core::rational::{int, ratio};
use subadj_core::surfaces::{fiber_name, SurfaceModel};
use subadj_core::trees::{StableTree, TreeViolation};
use subadj_core::weights::{distinguished_component, f_charge, f_vertex_coefficients, ChargedSide};
use subadj_core::{LabelSet, Rational};

use common::{nonzero_small, small_rational, stable_tree, weights};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn grown_trees_are_stable(n in 3u32..=9, picks in prop::collection::vec(any::<u32>(), 40), splits in 0usize..8) {
        let t = stable_tree(n, &picks, splits);
        prop_assert!(t.validate().is_empty(), "{:?}", t.validate());
        let cuts = t.edge_cuts().unwrap();
        prop_assert_eq!(cuts.len(), t.vertex_count() - 1);
        let mut firsts: Vec<u64> = cuts.iter().map(|c| c.first().bits()).collect();
        firsts.sort();
        firsts.dedup();
        prop_assert_eq!(firsts.len(), cuts.len());
    }

    #[test]
    fn charge_is_distance_from_one(d in weights(4..=8, 12), side_bits in any::<u64>()) {
        let n = d.len() as u32;
        let full = LabelSet::full(n).unwrap();
        let side = LabelSet::from_bits(side_bits & full.bits() | 1);
        prop_assume!(side.len() >= 2 && n - side.len() >= 2);
        let s = subadj_core::trees::Decomposition::new(n, side).unwrap();
        let charge = f_charge(&d, &s).unwrap();
        let alpha = d.alpha(s.first()).unwrap();
        prop_assert_eq!(&charge.coefficient, &num_traits::Signed::abs(&(&alpha - int(1))));
        if alpha > int(1) {
            prop_assert_eq!(charge.charged_side(), ChargedSide::Second);
        } else if alpha < int(1) {
            prop_assert_eq!(charge.charged_side(), ChargedSide::First);
        }
        prop_assert_eq!(d.alpha(s.first()).unwrap() + d.alpha(s.second()).unwrap(), int(2));
    }

    #[test]
    fn distinguished_vertex_avoids_correction_support(
        d in weights(3..=8, 10),
        picks in prop::collection::vec(any::<u32>(), 40),
        splits in 0usize..8,
    ) {
        let t = stable_tree(d.len() as u32, &picks, splits);
        let c0 = distinguished_component(&t, &d).unwrap();
        let coeffs = f_vertex_coefficients(&t, &d).unwrap();
        prop_assert!(coeffs.get(&c0).is_none_or(|c| *c == int(0)));
        let seq = t.contraction_sequence(&d).unwrap();
        prop_assert_eq!(seq.steps.len(), t.vertex_count());
        prop_assert_eq!(&seq.steps.last().unwrap().alpha, &int(2));
        prop_assert!(seq.steps[..seq.k0].iter().all(|s| s.alpha < int(1)));
    }

    #[test]
    fn collision_order_ignores_base_and_directions(
        base in small_rational(),
        dirs in prop::collection::btree_set(-9i64..=9, 3),
        which in 0usize..3,
    ) {
        let cases: [(Vec<Rational>, u64, Vec<u32>); 3] = [
            (vec![ratio(1, 2); 4], 2, vec![1, 2]),
            (vec![ratio(3, 4), ratio(3, 4), ratio(1, 4), ratio(1, 4)], 4, vec![2, 3, 4]),
            (vec![int(1), ratio(1, 2), ratio(1, 2)], 2, vec![2, 3]),
        ];
        let (d, m, side) = &cases[which];
        let d = subadj_core::weights::WeightVector::new(d.clone()).unwrap();
        let side = LabelSet::from_labels(side.iter().copied()).unwrap();
        // Keep the fixed points away from the collision.
        let line = MarkedLine::new((0..d.len()).map(|i| int(100 + i as i64)).collect()).unwrap();
        let reference = omega::collision_order(&d, *m, &line, &Collision::transversal(side, int(-1))).unwrap();
        let mut c = Collision::transversal(side, base);
        for (l, v) in side.iter().zip(dirs.iter()) {
            c.directions.insert(l, int(*v));
        }
        prop_assert_eq!(omega::collision_order(&d, *m, &line, &c).unwrap(), reference);
    }

    #[test]
    fn remark_seven_node_blow_up_keeps_delta(
        fiber in prop::collection::vec((1u64..=6, -30i64..=11, 1i64..=12), 2..6),
        chain in prop::collection::vec((any::<usize>(), any::<usize>()), 0..=5),
    ) {
        let mut fiber: Vec<(u64, Rational)> = fiber.into_iter().map(|(w, a, b)| (w, ratio(a, b))).collect();
        prop_assume!(fiber.iter().all(|(_, d)| *d < int(1)));
        let start = delta_at(&fiber).unwrap();
        prop_assert!(start < int(1));
        if nonnegativity_witness(&fiber).is_some() {
            prop_assert!(start >= int(0));
        }
        for (i, j) in chain {
            let i = i % fiber.len();
            let j = j % fiber.len();
            prop_assume!(i != j);
            let (w1, d1) = fiber[i].clone();
            let (w2, d2) = fiber[j].clone();
            fiber.push((w1 + w2, d1 + d2 - int(1)));
            prop_assert_eq!(delta_at(&fiber).unwrap(), start.clone());
        }
    }

    #[test]
    fn blow_ups_keep_lattice_identities(steps in prop::collection::vec((any::<usize>(), any::<usize>(), any::<bool>()), 1..=10)) {
        let mut m = SurfaceModel::new_ruled(0, 1, &["Q1", "Q2"]).unwrap();
        for (name, a) in [("A", 0), ("B", 1), ("C", 1), ("D", 2)] {
            m = m.add_section(name, int(a), ratio(1, 2)).unwrap();
        }
        for (pick_point, pick, node) in steps {
            let q = m.points()[pick_point % 2].clone();
            let comps: Vec<String> = m.fiber_decomposition(&q).unwrap().iter().map(|(t, _)| t.name.clone()).collect();
            let first = comps[pick % comps.len()].clone();
            let mut through = vec![(first.clone(), 1u64)];
            if node {
                let ft = m.divisor(&first).unwrap().class.clone();
                if let Some(second) = comps.iter().find(|c| **c != first && m.intersect(&ft, &m.divisor(c).unwrap().class).unwrap() >= int(1)) {
                    through.push((second.clone(), 1));
                }
            } else {
                let ft = m.divisor(&first).unwrap().class.clone();
                if let Some(s) = m.sections().find(|s| m.intersect(&ft, &s.class).unwrap() >= int(1)) {
                    through.push((s.name.clone(), 1));
                }
            }
            let before: Vec<(String, Rational)> = through
                .iter()
                .flat_map(|(a, _)| through.iter().map(move |(b, _)| (a.clone(), b.clone())))
                .filter(|(a, b)| a < b)
                .map(|(a, b)| (format!("{a}|{b}"), m.intersect(&m.divisor(&a).unwrap().class, &m.divisor(&b).unwrap().class).unwrap()))
                .collect();
            let w_expected: u64 = through
                .iter()
                .filter_map(|(n, mult)| m.divisor(n).unwrap().vertical_over(&q).map(|w| w * mult))
                .sum();
            let next = m.blow_up(&q, &through, int(0), None).unwrap();
            for (key, old) in before {
                let (a, b) = key.split_once('|').unwrap();
                let new = next.intersect(&next.divisor(a).unwrap().class, &next.divisor(b).unwrap().class).unwrap();
                prop_assert_eq!(new, old - int(1));
            }
            let e_name = next.blowups().last().unwrap().exceptional.clone();
            prop_assert_eq!(next.divisor(&e_name).unwrap().vertical_over(&q), Some(w_expected));
            for p in next.points() {
                prop_assert!(next.fiber_identity_holds(p).unwrap());
            }
            prop_assert_eq!(next.intersect(next.canonical(), &next.fiber_class()).unwrap(), int(-2));
            let k = next.blowups().len() as i32;
            prop_assert_eq!(next.gram_determinant(), int(if (k + 1) % 2 == 0 { 1 } else { -1 }));
            m = next;
        }
    }

    #[test]
    fn crepant_blow_ups_keep_the_report(node_steps in prop::collection::vec(any::<usize>(), 1..=5)) {
        let mut s = SurfaceModel::new_ruled(0, 0, &["Q"]).unwrap();
        for (name, a) in [("A", 0), ("B", 0), ("C", 0), ("D", 1)] {
            s = s.add_section(name, int(a), ratio(1, 2)).unwrap();
        }
        let s = s.blow_up("Q", &[("C".into(), 1), ("D".into(), 1), (fiber_name("Q"), 1)], int(0), None).unwrap();
        let base = cbf_report(&LogFibration::new(s.clone()).unwrap()).unwrap();
        let mut t = s;
        for pick in node_steps {
            let comps: Vec<String> = t.fiber_decomposition("Q").unwrap().iter().map(|(c, _)| c.name.clone()).collect();
            let pairs: Vec<(String, String)> = comps
                .iter()
                .flat_map(|a| comps.iter().map(move |b| (a.clone(), b.clone())))
                .filter(|(a, b)| a < b && t.intersect(&t.divisor(a).unwrap().class, &t.divisor(b).unwrap().class).unwrap() == int(1))
                .collect();
            let (a, b) = pairs[pick % pairs.len()].clone();
            t = blow_up_log(&t, "Q", &[(a, 1), (b, 1)], None).unwrap();
            let r = cbf_report(&LogFibration::new(t.clone()).unwrap()).unwrap();
            prop_assert_eq!(&r.deg_l, &base.deg_l);
            prop_assert_eq!(&r.deg_m, &base.deg_m);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mobius_naturality(
        d in weights(3..=5, 3),
        pts in prop::collection::btree_set(-12i64..=12, 5),
        (a, b, c, e) in (nonzero_small(), small_rational(), small_rational(), nonzero_small()),
    ) {
        let m = d.least_multiplier();
        prop_assume!(omega::enumerate_pairings(&d, m).unwrap().len() <= 48);
        let line = MarkedLine::new(pts.iter().take(d.len()).map(|&x| int(x)).collect()).unwrap();
        let phi = Mobius::new(a, b, c, e);
        prop_assume!(phi.is_ok());
        let phi = phi.unwrap();
        let image = phi.map_line(&line);
        prop_assume!(image.is_ok());
        let w = omega::canonical_section(&line, &d, m).unwrap();
        let w_img = omega::canonical_section(&image.unwrap(), &d, m).unwrap();
        prop_assert_eq!(w_img.pullback(&phi), w.as_differential().coefficient);
    }
}

#[test]
fn dbar_of_multiple_fibers() {
    for m in 2..=12u64 {
        assert_eq!(dbar(&int(0), m).unwrap(), ratio(m as i64 - 1, m as i64));
    }
}

#[test]
fn unstable_trees_are_reported() {
    let t = StableTree::from_parts(4, &[(0, &[1, 2]), (1, &[3]), (2, &[4])], &[(0, 1), (1, 2)]);
    assert!(t.validate().iter().any(|v| matches!(v, TreeViolation::Unstable { .. })));
}
