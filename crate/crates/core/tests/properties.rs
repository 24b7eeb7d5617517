use ffchain::{
    build_permutation, enumerate_irreducibles, find_cycle, inv, k_chain, mul_mod, BasisSchedule,
    ElementIndex, Guard, IrreduciblePoly, Orientation, Poly, Prime,
};
use proptest::prelude::*;

fn bases(p: u64, n: usize) -> Vec<IrreduciblePoly> {
    enumerate_irreducibles(Prime::new(p).unwrap(), n, Guard::DEFAULT).unwrap()
}

/// (prime, degree) combinations with at least two irreducibles.
fn field() -> impl Strategy<Value = (u64, usize)> {
    prop_oneof![
        (Just(2u64), 3usize..=9),
        (Just(3u64), 2usize..=5),
        (Just(5u64), 2usize..=3),
        (Just(7u64), 2usize..=3),
    ]
}

fn setup() -> impl Strategy<Value = (u64, usize, usize, usize, u64)> {
    field().prop_flat_map(|(p, n)| {
        let m = bases(p, n).len();
        let q = p.pow(n as u32);
        (Just(p), Just(n), 0..m, 0..m, p..q)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inverse_is_an_involution((p, n, i, _j, e) in setup()) {
        let f = &bases(p, n)[i];
        let a = Poly::from_index(Prime::new(p).unwrap(), ElementIndex(e));
        let b = inv(&a, f).unwrap();
        prop_assert!(mul_mod(&a, &b, f).unwrap().is_one());
        prop_assert_eq!(inv(&b, f).unwrap(), a);
    }

    #[test]
    fn index_round_trip(p in prop_oneof![Just(2u64), Just(3), Just(5), Just(13)], e in 0u64..100_000) {
        let prime = Prime::new(p).unwrap();
        let a = Poly::from_index(prime, ElementIndex(e));
        prop_assert_eq!(a.index().0, e);
        prop_assert_eq!(Poly::parse(prime, &format!("#{e}")).unwrap(), a.clone());
        prop_assert_eq!(Poly::parse(prime, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn two_basis_chain_closes_on_its_cycle((p, n, i, j, e) in setup()) {
        prop_assume!(i != j);
        let fs = bases(p, n);
        let a = Poly::from_index(Prime::new(p).unwrap(), ElementIndex(e));
        let cycle = find_cycle(&a, &fs[i], &fs[j]).unwrap();
        let k = cycle.len();
        prop_assert!(k >= 4 && k.is_multiple_of(2));
        let chain = k_chain(&a, &BasisSchedule::pair(&fs[i], &fs[j]).unwrap(), k).unwrap();
        prop_assert_eq!(&chain.elements[k], &a);
        prop_assert!(chain.elements[1..k].iter().all(|x| x != &a));
    }

    #[test]
    fn canonical_permutation_follows_cycles((p, n, i, j, _e) in setup()) {
        prop_assume!(i != j && p.pow(n as u32) <= 1 << 12);
        let fs = bases(p, n);
        let perm = build_permutation(&fs[i], &fs[j], &Orientation::Canonical, Guard::DEFAULT).unwrap();
        let mut image = perm.mapping().to_vec();
        image.sort_unstable();
        prop_assert!(image.iter().enumerate().all(|(k, &v)| k as u64 == v));
        for c in perm.cycles().iter().filter(|c| c.iter().all(|&v| v >= p)) {
            // each step alternates between the two bases
            let first = Poly::from_index(Prime::new(p).unwrap(), ElementIndex(c[0]));
            prop_assert_eq!(inv(&first, &fs[i]).unwrap().index().0, c[1 % c.len()]);
        }
    }
}
