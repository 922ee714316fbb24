use proptest::prelude::*;

use propp::fingroup::{self, frattini, maximal_subgroups, Elem};
use propp::goodbasis::{construct_good_basis, enumerate_open, sigma, verify_good_basis};
use propp::invsys::InverseSystem;
use propp::padic::{Exponent, PAdicInt, Supernatural, Valuation};
use propp::uniform::{CoordinateVector, GElement, UniformGroup};
use propp::vc::{
    baldwin_saxl_reduce, dual, hyperplane_family, is_shattered, sauer_shelah_bound, shatter_function, vc_dim,
    BipartiteRelation, Combinations, SetFamily,
};
use propp::{FiniteGroup, GroupPreset};

fn padic(p: u64, k: u32) -> impl Strategy<Value = PAdicInt> {
    (0..p.pow(k)).prop_map(move |r| PAdicInt::new(p, k, r as i128).unwrap())
}

fn nu(x: &PAdicInt) -> u32 {
    x.nu().bound()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn valuation_is_additive_on_products(x in padic(3, 6), y in padic(3, 6)) {
        let xy = x.try_mul(&y).unwrap();
        if nu(&x) + nu(&y) < 6 && x.nu().is_exact() && y.nu().is_exact() {
            prop_assert_eq!(xy.nu(), Valuation::Exact(nu(&x) + nu(&y)));
        }
    }

    #[test]
    fn valuation_of_sums(x in padic(5, 4), y in padic(5, 4)) {
        let s = x.try_add(&y).unwrap();
        prop_assert!(nu(&s) >= nu(&x).min(nu(&y)));
        if nu(&x) != nu(&y) {
            prop_assert_eq!(nu(&s), nu(&x).min(nu(&y)));
        }
    }
}

proptest! {
    #[test]
    fn division_recovers_dividend(x in padic(3, 5), y in padic(3, 5)) {
        if let (Valuation::Exact(vy), Valuation::Exact(vx)) = (y.nu(), x.nu()) {
            if vx >= vy {
                let q = x.div_d(&y).unwrap();
                prop_assert_eq!(q.precision(), 5 - vy);
                let m = 3u64.pow(5 - vy);
                prop_assert_eq!((q.residue() as u128 * y.residue() as u128) % m as u128, x.residue() as u128 % m as u128);
            }
        }
    }

    #[test]
    fn supernatural_laws(a in 1u64..5000, b in 1u64..5000, c in 1u64..5000, inf in proptest::bool::ANY) {
        let (mut a, b, c) = (Supernatural::from_u64(a), Supernatural::from_u64(b), Supernatural::from_u64(c));
        if inf {
            a.set(3, Exponent::Infinite).unwrap();
        }
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(Supernatural::lcm([&a, &a]).unwrap(), a.clone());
        let l = Supernatural::lcm([&a, &b]).unwrap();
        prop_assert!(a.divides(&l) && b.divides(&l));
        prop_assert!(a.divides(&a));
        if a.divides(&b) && b.divides(&a) {
            prop_assert_eq!(&a, &b);
        }
        if a.divides(&b) && b.divides(&c) {
            prop_assert!(a.divides(&c));
        }
    }
}

const P_GROUPS: [&str; 6] =
    ["abelian:9,3", "unitriangular:3,1", "heisenberg:3,1", "semidirect:9,3,4", "cyclic:3*cyclic:9", "abelian:5,5"];

fn group(name: &str) -> FiniteGroup {
    name.parse::<GroupPreset>().unwrap().build().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn frattini_elements_are_nongenerators(which in 0..P_GROUPS.len(), picks in proptest::collection::vec(0usize..1000, 0..4)) {
        let g = group(P_GROUPS[which]);
        let phi = frattini(&g).unwrap();
        let x: Vec<Elem> = picks.iter().map(|&i| (i % g.order()) as Elem).collect();
        let mut with = x.clone();
        with.extend(phi.elements());
        prop_assert_eq!(g.generated(&x).is_whole(), g.generated(&with).is_whole());
    }
}

#[test]
fn maximal_subgroups_of_p_groups_have_index_p_and_are_normal() {
    for name in P_GROUPS {
        let g = group(name);
        let p = fingroup::p_group_prime(&g).unwrap();
        for m in maximal_subgroups(&g).unwrap() {
            assert_eq!(m.index() as u64, p, "{name}");
            assert!(m.is_normal_in(&g.whole()), "{name}");
        }
    }
}

#[test]
fn index_times_order_is_group_order() {
    for name in ["symmetric:4", "alternating:5", "dihedral:6", "unitriangular:3,1"] {
        let g = group(name);
        for h in fingroup::all_subgroups(&g).unwrap() {
            assert_eq!(h.index() * h.order(), g.order());
            assert_eq!(g.order() % h.order(), 0);
        }
    }
}

#[test]
fn sylow_towers_are_sylow_and_unique_when_pronilpotent() {
    let nilpotent = [
        InverseSystem::cyclic_tower(&[6, 12, 24, 48]).unwrap(),
        InverseSystem::abelian_tower(3, 2, 3).unwrap(),
        InverseSystem::unitriangular_tower(3, 2).unwrap(),
    ];
    for sys in &nilpotent {
        for p in sys.order_sn().primes().collect::<Vec<_>>() {
            assert_eq!(sys.sylow_towers(p, 2).len(), 1);
        }
    }
    let s3 = FiniteGroup::symmetric(3).unwrap();
    let sys = InverseSystem::product_with_cyclic(&s3, &[2, 4, 8]).unwrap();
    let towers = sys.sylow_towers(2, 10);
    assert!(towers.len() > 1);
    for t in &towers {
        sys.check_tower(t).unwrap();
        for (i, h) in t.iter().enumerate() {
            let n = sys.level(i).order();
            assert_eq!(h.order(), 1 << n.trailing_zeros());
        }
        assert!(sys.index_sn(t).unwrap().divides(&sys.order_sn()));
    }
}

#[test]
fn lifted_tuples_generate_every_level() {
    let s3 = FiniteGroup::symmetric(3).unwrap();
    let systems = [
        InverseSystem::cyclic_tower(&[3, 9, 27]).unwrap(),
        InverseSystem::abelian_tower(3, 2, 2).unwrap(),
        InverseSystem::product_with_cyclic(&s3, &[5, 25]).unwrap(),
    ];
    for sys in &systems {
        let mut d = 0;
        let tuple = loop {
            if let Some(t) = sys.lift_tuple(d).unwrap() {
                break t;
            }
            d += 1;
        };
        for (i, g) in sys.levels().iter().enumerate() {
            let comps: Vec<Elem> = tuple.iter().map(|t| t.components[i]).collect();
            assert!(g.generated(&comps).is_whole());
        }
    }
}

fn congruence() -> UniformGroup {
    UniformGroup::congruence(3, 2, 2).unwrap()
}

fn lambda(d: usize, modulus: u64) -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::vec(0..modulus, d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn coordinates_round_trip_on_the_congruence_quotient(l in lambda(4, 9)) {
        let g = congruence();
        let x = g.x_of_lambda(&CoordinateVector::from_residues(3, 2, &l).unwrap()).unwrap();
        prop_assert_eq!(g.lambda_of_x(&x).unwrap().residues(), l);
    }

    #[test]
    fn zp_powers(l in lambda(4, 9), a in 0u64..9, b in 0u64..9) {
        let g = congruence();
        let x = g.x_of_lambda(&CoordinateVector::from_residues(3, 2, &l).unwrap()).unwrap();
        let pa = PAdicInt::new(3, 2, a as i128).unwrap();
        let pb = PAdicInt::new(3, 2, b as i128).unwrap();
        let xa = g.zp_pow(&x, &pa).unwrap();
        let xb = g.zp_pow(&x, &pb).unwrap();
        prop_assert_eq!(g.zp_pow(&x, &pa.try_add(&pb).unwrap()).unwrap(), g.mul(&xa, &xb));
        prop_assert_eq!(g.zp_pow(&xa, &pb).unwrap(), g.zp_pow(&x, &pa.try_mul(&pb).unwrap()).unwrap());
        let expected = (g.omega(&x).level() + nu(&pa)).min(3);
        prop_assert_eq!(g.omega(&xa).level(), expected);
    }

    #[test]
    fn commuting_powers(l in lambda(2, 27), a in 0u64..27) {
        let g = UniformGroup::abelian(3, 2, 3).unwrap();
        let x = GElement(vec![l[0], 0]);
        let y = GElement(vec![0, l[1]]);
        let pa = PAdicInt::new(3, 3, a as i128).unwrap();
        let lhs = g.zp_pow(&g.mul(&x, &y), &pa).unwrap();
        prop_assert_eq!(lhs, g.mul(&g.zp_pow(&x, &pa).unwrap(), &g.zp_pow(&y, &pa).unwrap()));
    }

    #[test]
    fn pi_n_is_a_homomorphism_with_kernel_the_next_level(a in lambda(4, 9), b in lambda(4, 9), n in 1u32..=2) {
        let g = congruence();
        let w = 3u64.pow(n - 1);
        let scale = |l: &[u64]| CoordinateVector::from_residues(3, 2, &l.iter().map(|c| c * w % 9).collect::<Vec<_>>()).unwrap();
        let x = g.x_of_lambda(&scale(&a)).unwrap();
        let y = g.x_of_lambda(&scale(&b)).unwrap();
        let px = g.pi_n(&x, n).unwrap();
        let py = g.pi_n(&y, n).unwrap();
        let sum: Vec<u64> = px.iter().zip(&py).map(|(u, v)| (u + v) % 3).collect();
        prop_assert_eq!(g.pi_n(&g.mul(&x, &y), n).unwrap(), sum);
        let in_kernel = px.iter().all(|&c| c == 0);
        prop_assert_eq!(in_kernel, g.omega(&x).level() > n);
    }

    #[test]
    fn p_power_maps_between_levels(l in lambda(4, 9), i in 1u32..=2) {
        // x(λ)^p ≡ x(pλ) modulo G_{i+2} for x(λ) ∈ G_i
        let g = UniformGroup::congruence(3, 2, 3).unwrap();
        let w = 3u64.pow(i - 1);
        let li: Vec<u64> = l.iter().map(|c| c * w % 27).collect();
        let lp: Vec<u64> = li.iter().map(|c| c * 3 % 27).collect();
        let x = g.x_of_lambda(&CoordinateVector::from_residues(3, 3, &li).unwrap()).unwrap();
        let xp = g.x_of_lambda(&CoordinateVector::from_residues(3, 3, &lp).unwrap()).unwrap();
        let diff = g.mul(&g.pow(&x, 3), &g.inv(&xp));
        prop_assert!(g.omega(&diff).level() >= (i + 2).min(4));
    }

    #[test]
    fn constructed_bases_verify(extra in proptest::collection::vec(lambda(2, 27), 0..3)) {
        let g = UniformGroup::abelian(3, 2, 3).unwrap();
        let mut gens: Vec<GElement> = extra.into_iter().map(GElement).collect();
        gens.extend([GElement(vec![9, 0]), GElement(vec![0, 9])]);
        let b = construct_good_basis(&g, &gens).unwrap();
        let v = verify_good_basis(&g, b.elements(), 0).unwrap();
        prop_assert!(v.passed, "{:?}", v);
        let h = g.finite_quotient().generated(&gens.iter().map(|x| g.index_in_quotient(x).unwrap()).collect::<Vec<_>>());
        prop_assert_eq!(b.index() as usize, h.index());
    }
}

#[test]
fn sigma_is_monotone_and_matches_the_lattice() {
    let g = UniformGroup::abelian(3, 2, 3).unwrap();
    let q = g.finite_quotient();
    let mut last = 0;
    for n in [1u64, 3, 9, 27] {
        let s = sigma(&g, n).unwrap();
        assert!(s >= last);
        last = s;
    }
    // indices up to p^{k-1}
    for n in [1usize, 3, 9] {
        assert_eq!(sigma(&g, n as u64).unwrap(), fingroup::subgroups_up_to_index(q, n).unwrap().len());
    }
}

#[test]
fn index_p_subgroups_of_the_congruence_group_are_hyperplanes() {
    // every index-p subgroup contains the Frattini subgroup G_2, so they are
    // the 40 hyperplanes of G/G_2 = F_3^4
    let g = congruence();
    let subs = enumerate_open(&g, 3).unwrap();
    assert_eq!(subs.len(), 41);
    for h in &subs {
        let b = h.basis();
        assert!(verify_good_basis(b.group(), b.elements(), 0).unwrap().passed);
        assert_eq!(h.index() as usize, h.as_subgroup().index());
    }
}

fn family() -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    (1usize..=12).prop_flat_map(|n| {
        (Just(n), proptest::collection::vec(proptest::collection::vec(0..n, 0..=n), 0..20))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn shatter_function_and_sauer_shelah((n, sets) in family()) {
        let f = SetFamily::from_sets(n, &sets).unwrap();
        let vc = vc_dim(&f).value;
        for m in 0..=n {
            let pi = shatter_function(&f, m, 0).value;
            let shattered = Combinations::new(n, m).any(|a| is_shattered(&f, &a).unwrap());
            prop_assert_eq!(pi == 1 << m, shattered);
            if m as u64 >= vc {
                prop_assert!(pi as u128 <= sauer_shelah_bound(vc, m as u64).unwrap());
            }
        }
    }

    #[test]
    fn dual_is_an_involution(rows in proptest::collection::vec(proptest::collection::vec(proptest::bool::ANY, 5), 1..8)) {
        let r = BipartiteRelation::new(rows).unwrap();
        prop_assert_eq!(dual(&dual(&r)), r);
    }

    #[test]
    fn reductions_preserve_intersections(mask in 1u32..(1 << 13)) {
        let f = hyperplane_family(3, 3).unwrap();
        let j: Vec<usize> = (0..13).filter(|i| mask >> i & 1 == 1).collect();
        let r = baldwin_saxl_reduce(&f, &j, 3).unwrap();
        prop_assert!(r.len() <= 3);
        for x in f.parent().elements() {
            let all = j.iter().all(|&i| f.members()[i].contains(x));
            let few = r.iter().all(|&i| f.members()[i].contains(x));
            prop_assert_eq!(all, few);
        }
    }
}
