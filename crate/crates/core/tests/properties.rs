use std::collections::BTreeSet;
use std::sync::OnceLock;

use permdeg_core::group_ops::{
    centralizer_in_sym, centralizer_order_formula, normalizer_backtrack, normalizer_scan, transporter_in_sym,
};
use permdeg_core::iso::{find_isomorphism, invariant_profile};
use permdeg_core::mindeg::mu;
use permdeg_core::subgroups::{sym_subgroup_classes, EnumOptions};
use permdeg_core::{direct_product_disjoint, format_perm, make_named, parse_perm, NamedKind, PermGroup, Permutation};
use proptest::prelude::*;

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u32).collect::<Vec<u32>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn group(max_n: usize, max_gens: usize) -> impl Strategy<Value = PermGroup> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(perm(n), 0..=max_gens).prop_map(move |gens| PermGroup::new(n, gens).unwrap())
    })
}

fn closure(g: &PermGroup) -> BTreeSet<Vec<u32>> {
    let n = g.degree();
    let id: Vec<u32> = (0..n as u32).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for s in g.generators() {
            let y: Vec<u32> = x.iter().map(|&p| s.images()[p as usize]).collect();
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen
}

fn all_perms(n: usize) -> Vec<Permutation> {
    make_named(NamedKind::Symmetric, n).unwrap().chain().elements().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cycle_notation_round_trips(p in (1usize..=12).prop_flat_map(perm)) {
        let text = format_perm(&p);
        prop_assert_eq!(parse_perm(&text, p.degree()).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn group_axioms(
        (a, b, c) in (1usize..=9).prop_flat_map(|n| (perm(n), perm(n), perm(n)))
    ) {
        prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        prop_assert!(a.then(&a.inverse()).is_identity());
        prop_assert_eq!(a.compose(&b).unwrap().image(0), b.image(a.image(0)));
        prop_assert_eq!(a.pow(a.order()), Permutation::identity(a.degree()));
    }

    #[test]
    fn chain_matches_closure(g in group(6, 3)) {
        let elems = closure(&g);
        let chain = g.chain();
        prop_assert!(chain.verify());
        prop_assert_eq!(chain.order(), elems.len() as u128);
        for p in all_perms(g.degree()) {
            prop_assert_eq!(chain.contains(&p).unwrap(), elems.contains(p.images()));
        }
    }

    #[test]
    fn element_iteration_is_exact(g in group(6, 3)) {
        let listed: BTreeSet<Vec<u32>> = g.chain().elements().map(|p| p.images().to_vec()).collect();
        prop_assert_eq!(listed, closure(&g));
    }

    #[test]
    fn normalizer_methods_agree(g in group(6, 2)) {
        prop_assert_eq!(normalizer_scan(&g).order(), normalizer_backtrack(&g).order());
    }

    #[test]
    fn transporter_finds_conjugates(g in group(7, 2), x in (7usize..=7).prop_flat_map(perm)) {
        let g = PermGroup::new(7, g.generators().iter().map(|p| p.extend(7)).collect()).unwrap();
        let h = g.conjugate_by(&x);
        let t = transporter_in_sym(&g, &h).expect("conjugate groups");
        let moved = g.conjugate_by(&t);
        let hc = h.chain();
        prop_assert!(moved.generators().iter().all(|p| hc.contains(p).unwrap()));
    }

    #[test]
    fn isomorphism_is_reflexive_and_symmetric(g in group(6, 2), x in (6usize..=6).prop_flat_map(perm)) {
        let g = PermGroup::new(6, g.generators().iter().map(|p| p.extend(6)).collect()).unwrap();
        let h = g.conjugate_by(&x);
        let cert = find_isomorphism(&g, &g).unwrap().expect("reflexive");
        prop_assert!(cert.verify(&g, &g));
        prop_assert!(find_isomorphism(&g, &h).unwrap().is_some());
        prop_assert!(find_isomorphism(&h, &g).unwrap().is_some());
    }

    #[test]
    fn isomorphic_groups_share_profiles(a in group(5, 2), b in group(5, 2)) {
        if let Some(cert) = find_isomorphism(&a, &b).unwrap() {
            prop_assert!(cert.verify(&a, &b));
            prop_assert!(invariant_profile(&a).unwrap().same_invariants(&invariant_profile(&b).unwrap()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn centralizer_matches_brute_force(g in group(6, 3)) {
        let c = centralizer_in_sym(&g);
        let brute: Vec<Permutation> = all_perms(g.degree())
            .into_iter()
            .filter(|x| g.generators().iter().all(|s| s.then(x) == x.then(s)))
            .collect();
        let cc = c.chain();
        prop_assert_eq!(cc.order(), brute.len() as u128);
        prop_assert_eq!(centralizer_order_formula(&g), brute.len() as u128);
        prop_assert!(brute.iter().all(|x| cc.contains(x).unwrap()));
    }
}

fn sym5_classes() -> &'static [PermGroup] {
    static CLASSES: OnceLock<Vec<PermGroup>> = OnceLock::new();
    CLASSES.get_or_init(|| {
        sym_subgroup_classes(5, &EnumOptions::default())
            .unwrap()
            .into_iter()
            .map(|c| c.representative)
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn mu_is_subadditive(i in 0usize..19, j in 0usize..19, x in perm(5), y in perm(5)) {
        let g = sym5_classes()[i].conjugate_by(&x);
        let h = sym5_classes()[j].conjugate_by(&y);
        let (mg, mh) = (mu(&g).unwrap().value, mu(&h).unwrap().value);
        prop_assert!(mg <= 5 && mh <= 5);
        let p = direct_product_disjoint(&g, &h);
        prop_assert!(mu(&p).unwrap().value <= mg + mh);
    }
}
