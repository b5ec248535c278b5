use std::sync::Arc;

use proptest::prelude::*;
use roughmat::induced::{
    block_complements, hyperplanes_by_predicate, induced_rank, intersection_inclusion_check,
    support_family,
};
use roughmat::setfam::{is_antichain, low, max_elems, min_elems, opp, upp};
use roughmat::{
    check_approx_properties, CheckMode, InducedMatroid, Partition, SetFamily, Subset, Universe,
};

/// Partition of `{1..n}` from a block label per element.
fn partition_from_labels(n: usize, labels: &[usize]) -> Partition {
    let u = Universe::numbered(n).unwrap();
    partition_on(&u, labels)
}

fn partition_on(u: &Arc<Universe>, labels: &[usize]) -> Partition {
    let mut blocks = vec![0u64; u.len()];
    for (i, &b) in labels.iter().enumerate().take(u.len()) {
        blocks[b % u.len()] |= 1 << i;
    }
    blocks.retain(|&b| b != 0);
    Partition::from_masks(u, blocks).unwrap()
}

fn partition(max_n: usize) -> impl Strategy<Value = Partition> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0..n, n).prop_map(move |labels| partition_from_labels(n, &labels))
    })
}

fn partition_with_set(max_n: usize) -> impl Strategy<Value = (Partition, u64)> {
    (partition(max_n), any::<u64>()).prop_map(|(p, x)| {
        let full = p.universe().full_mask();
        (p, x & full)
    })
}

fn family(max_n: usize) -> impl Strategy<Value = SetFamily> {
    (1..=max_n, prop::collection::vec(any::<u64>(), 0..10)).prop_map(|(n, masks)| {
        let u = Universe::numbered(n).unwrap();
        let full = u.full_mask();
        SetFamily::from_masks(&u, masks.into_iter().map(|m| m & full)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn approximation_laws_hold_exhaustively(p in partition(6)) {
        let report = check_approx_properties(&p, CheckMode::Exhaustive).unwrap();
        prop_assert!(report.all_passed(), "{}", report);
    }

    #[test]
    fn approximations_sandwich_and_dualize((p, x) in partition_with_set(12)) {
        let full = p.universe().full_mask();
        let lower = p.lower_mask(x);
        let upper = p.upper_mask(x);
        prop_assert_eq!(lower & !x, 0);
        prop_assert_eq!(x & !upper, 0);
        prop_assert_eq!(lower, !p.upper_mask(!x & full) & full);
        prop_assert_eq!(p.lower_mask(upper), upper);
        prop_assert_eq!(p.upper_mask(lower), lower);
    }

    #[test]
    fn sampled_properties_pass_beyond_the_cap(p in partition(16), seed in any::<u64>()) {
        let report = check_approx_properties(&p, CheckMode::Sampled { samples: 200, seed }).unwrap();
        prop_assert!(report.all_passed(), "{}", report);
    }

    #[test]
    fn rank_axioms((p, x) in partition_with_set(10), e in 0usize..10) {
        let m = InducedMatroid::new(&p).unwrap();
        let mat = m.matroid();
        let n = p.universe().len();
        let e = e % n;
        prop_assert_eq!(mat.rank_mask(0), 0);
        let r = mat.rank_mask(x);
        prop_assert!(r <= x.count_ones() as usize);
        let grown = mat.rank_mask(x | 1 << e);
        prop_assert!(r <= grown && grown <= r + 1);
        let sub = Subset::from_mask(p.universe(), x).unwrap();
        prop_assert_eq!(induced_rank(&p, &sub).unwrap(), r);
        prop_assert_eq!(r, p.blocks_meeting(x));
    }

    #[test]
    fn rank_is_submodular((p, x) in partition_with_set(8), y in any::<u64>()) {
        let m = InducedMatroid::new(&p).unwrap();
        let mat = m.matroid();
        let y = y & p.universe().full_mask();
        prop_assert!(
            mat.rank_mask(x | y) + mat.rank_mask(x & y) <= mat.rank_mask(x) + mat.rank_mask(y)
        );
    }

    #[test]
    fn closure_is_a_closure_operator((p, x) in partition_with_set(10), y in any::<u64>()) {
        let m = InducedMatroid::new(&p).unwrap();
        let mat = m.matroid();
        let y = (y | x) & p.universe().full_mask();
        let cx = mat.closure_mask(x);
        prop_assert_eq!(x & !cx, 0);
        prop_assert_eq!(mat.closure_mask(cx), cx);
        prop_assert_eq!(cx & !mat.closure_mask(y), 0);
        prop_assert_eq!(cx, p.upper_mask(x));
    }

    #[test]
    fn hyperplane_descriptions_agree(p in partition(10)) {
        let by_predicate = hyperplanes_by_predicate(&p).unwrap();
        let complements = block_complements(&p);
        let from_supports = max_elems(&opp(&support_family(&p).unwrap()).unwrap());
        let m = InducedMatroid::new(&p).unwrap();
        let by_rank = m.matroid().hyperplanes_by_rank();
        prop_assert_eq!(&by_predicate, &complements);
        prop_assert_eq!(&by_predicate, &from_supports);
        prop_assert_eq!(&by_predicate, &by_rank);
        prop_assert_eq!(&by_predicate, m.hyperplanes());
    }

    #[test]
    fn closed_sets_are_exactly_precise_sets((p, x) in partition_with_set(10)) {
        let m = InducedMatroid::new(&p).unwrap();
        let sub = Subset::from_mask(p.universe(), x).unwrap();
        let report = m.closed_iff_checks(&sub).unwrap();
        prop_assert!(report.agree());
        prop_assert_eq!(m.closed_sets().contains_mask(x), p.is_precise(&sub).unwrap());
    }

    #[test]
    fn opp_is_an_involution(a in family(8)) {
        prop_assert_eq!(opp(&opp(&a).unwrap()).unwrap(), a);
    }

    #[test]
    fn closures_depend_only_on_extremes(a in family(8)) {
        prop_assert_eq!(upp(&a).unwrap(), upp(&min_elems(&a)).unwrap());
        prop_assert_eq!(low(&a).unwrap(), low(&max_elems(&a)).unwrap());
        prop_assert_eq!(min_elems(&upp(&a).unwrap()), min_elems(&a));
        prop_assert_eq!(max_elems(&low(&a).unwrap()), max_elems(&a));
    }

    #[test]
    fn extremes_are_antichains_inside_the_family(a in family(8)) {
        let mx = max_elems(&a);
        let mn = min_elems(&a);
        prop_assert!(is_antichain(&mx));
        prop_assert!(is_antichain(&mn));
        prop_assert!(mx.is_subfamily(&a).unwrap());
        prop_assert!(mn.is_subfamily(&a).unwrap());
        prop_assert_eq!(mx.is_empty(), a.is_empty());
    }

    #[test]
    fn upp_and_low_are_closures(a in family(8)) {
        let up = upp(&a).unwrap();
        let down = low(&a).unwrap();
        prop_assert!(a.is_subfamily(&up).unwrap());
        prop_assert!(a.is_subfamily(&down).unwrap());
        prop_assert_eq!(upp(&up).unwrap(), up);
        prop_assert_eq!(low(&down).unwrap(), down);
    }

    #[test]
    fn refinement_is_the_coarsest_common_refinement(
        n in 1usize..=9,
        l1 in prop::collection::vec(0usize..9, 9),
        l2 in prop::collection::vec(0usize..9, 9),
    ) {
        let u = Universe::numbered(n).unwrap();
        let p1 = partition_on(&u, &l1);
        let p2 = partition_on(&u, &l2);
        let r = p1.refine(&p2).unwrap();
        prop_assert!(r.refines(&p1));
        prop_assert!(r.refines(&p2));
        for i in 0..n {
            for j in 0..n {
                let together = |p: &Partition| p.block_of_index(i).contains(j);
                prop_assert_eq!(together(&r), together(&p1) && together(&p2));
            }
        }
    }

    #[test]
    fn refinement_shrinks_the_support_family(
        n in 1usize..=7,
        l1 in prop::collection::vec(0usize..7, 7),
        l2 in prop::collection::vec(0usize..7, 7),
    ) {
        let u = Universe::numbered(n).unwrap();
        let p1 = partition_on(&u, &l1);
        let p2 = partition_on(&u, &l2);
        let report = intersection_inclusion_check(&p1, &p2).unwrap();
        prop_assert!(report.refined_supports <= report.common_supports);
        prop_assert_eq!(report.is_strict(), report.refined_supports < report.common_supports);
    }
}

#[test]
fn mixing_universes_is_rejected() {
    let a = Universe::numbered(3).unwrap();
    let b = Universe::new(["x", "y", "z"]).unwrap();
    let p = Partition::discrete(&a);
    let x = Subset::full(&b);
    assert!(p.lower_approx(&x).is_err());
    assert!(p.upper_approx(&x).is_err());
    let fa = SetFamily::from_masks(&a, [1]).unwrap();
    let fb = SetFamily::from_masks(&b, [1]).unwrap();
    assert!(fa.union(&fb).is_err());
}
