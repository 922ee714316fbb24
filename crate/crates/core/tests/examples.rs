use propp::fingroup::{
    self, frattini, frattini_p, hall, is_powerful, lower_p_series, min_generators, rank, schur_zassenhaus, sylow,
    theta_map, v_subgroup, GroupError,
};
use propp::goodbasis::{construct_good_basis, membership, verify_good_basis, Condition, OpenSubgroup};
use propp::invsys::InverseSystem;
use propp::oracle;
use propp::padic::{Exponent, PAdicInt, PadicError, Supernatural, Valuation};
use propp::uniform::{CoordinateVector, GElement, Omega, UniformError, UniformGroup};
use propp::FiniteGroup;

fn z(p: u64, k: u32, v: i128) -> PAdicInt {
    PAdicInt::new(p, k, v).unwrap()
}

#[test]
fn padic_examples() {
    assert_eq!(z(3, 4, 18).nu(), Valuation::Exact(2));
    assert_eq!(z(3, 4, 0).nu(), Valuation::AtLeast(4));
    assert_eq!(z(5, 3, 7).nu(), Valuation::Exact(0));
    let q = z(2, 5, 12).div_d(&z(2, 5, 4)).unwrap();
    assert_eq!((q.residue(), q.precision()), (3, 3));
    assert!(z(3, 4, 1).div_d(&z(3, 4, 0)).unwrap().is_zero());
    assert!(z(3, 4, 3).div_d(&z(3, 4, 9)).unwrap().is_zero());
    assert_eq!(z(3, 2, 4).try_add(&z(3, 2, 7)).unwrap().residue(), 2);
    assert_eq!(z(3, 2, 2).inverse().unwrap().residue(), 5);
    assert!(matches!(z(3, 2, 3).inverse(), Err(PadicError::NonUnit(_))));
}

#[test]
fn supernatural_examples() {
    let two_inf = Supernatural::prime_power(2, Exponent::Infinite).unwrap();
    assert_eq!(Supernatural::from_u64(40).mul(&Supernatural::from_u64(6)), Supernatural::from_u64(240));
    assert_eq!(two_inf.mul(&Supernatural::from_u64(128)), two_inf);
    let mut a = two_inf.clone();
    a.set(3, Exponent::Finite(1)).unwrap();
    let mut expected = two_inf.clone();
    expected.set(3, Exponent::Finite(2)).unwrap();
    expected.set(5, Exponent::Finite(1)).unwrap();
    assert_eq!(Supernatural::lcm([&a, &Supernatural::from_u64(45)]).unwrap(), expected);
    let small: Vec<Supernatural> = [2, 3, 4].map(Supernatural::from_u64).to_vec();
    assert_eq!(Supernatural::lcm(&small).unwrap(), Supernatural::from_u64(12));
    assert_eq!(Supernatural::lcm(std::iter::empty()).unwrap_err(), PadicError::EmptyFamily);
    assert!(Supernatural::from_u64(8).divides(&two_inf));
    assert!(!Supernatural::from_u64(6).divides(&two_inf));
    assert!(a.is_pi_number(&[2, 3]));
}

#[test]
fn fingroup_examples() {
    let c9 = FiniteGroup::cyclic(9).unwrap();
    assert_eq!(c9.generated(&[3]).element_vec(), vec![0, 3, 6]);
    let ut = FiniteGroup::unitriangular(3, 1).unwrap();
    let w = ut.whole();
    let center = w.commutator(&w);
    assert_eq!(center.order(), 3);
    assert!(w.power_subgroup(3).is_trivial());
    assert_eq!(frattini(&c9).unwrap().element_vec(), vec![0, 3, 6]);
    let c33 = FiniteGroup::elementary_abelian(3, 2).unwrap();
    assert!(frattini(&c33).unwrap().is_trivial());
    assert_eq!(frattini(&ut).unwrap(), center);
    assert_eq!(frattini_p(&c9, 3).unwrap().order(), 3);
    let ut9 = FiniteGroup::unitriangular(3, 2).unwrap();
    assert_eq!(frattini_p(&ut9, 3).unwrap().order(), 81);
    assert_eq!(lower_p_series(&c9, 3).unwrap().orders(), vec![9, 3, 1]);
    assert_eq!(lower_p_series(&c33, 3).unwrap().orders(), vec![9, 1]);
    assert_eq!(lower_p_series(&ut9, 3).unwrap().orders()[..2], [729, 81]);
    assert!(is_powerful(&c9, 3).unwrap());
    assert!(!is_powerful(&ut, 3).unwrap());
    assert_eq!(is_powerful(&FiniteGroup::cyclic(4).unwrap(), 2).unwrap_err(), GroupError::EvenPrime);
    assert!(theta_map(&c9, 3, 1).unwrap().is_bijective());
    let t = theta_map(&c33, 3, 1).unwrap();
    assert!(t.surjective && t.codomain_size == 1);
    assert_eq!(min_generators(&c9.whole()).unwrap(), 1);
    assert_eq!(min_generators(&ut9.whole()).unwrap(), 2);
    assert_eq!(rank(&c33).unwrap(), 2);
    assert_eq!(sylow(&FiniteGroup::cyclic(6).unwrap(), 2).order(), 2);
    let s3 = FiniteGroup::symmetric(3).unwrap();
    assert_eq!(hall(&s3, &[3]).unwrap().unwrap().order(), 3);
    let c6 = FiniteGroup::cyclic(6).unwrap();
    assert_eq!(schur_zassenhaus(&c6.generated(&[2])).unwrap().order(), 2);
    let z9 = FiniteGroup::abelian(&[9, 9]).unwrap();
    assert_eq!(fingroup::subgroups_up_to_index(&c9, 3).unwrap().len(), 2);
    assert_eq!(fingroup::subgroups_up_to_index(&z9, 3).unwrap().len(), 5);
    assert_eq!(fingroup::subgroups_up_to_index(&z9, 9).unwrap().len(), 18);
}

#[test]
fn the_heisenberg_group_mod_nine_is_not_powerful() {
    // [G,G] is the order-9 group of central matrices, but every cube has
    // off-diagonal entries divisible by 3 in the corner only
    let g = FiniteGroup::unitriangular(3, 2).unwrap();
    let w = g.whole();
    assert_eq!(w.commutator(&w).order(), 9);
    assert!(!w.commutator(&w).is_subset(&w.power_subgroup(3)));
    assert!(!is_powerful(&g, 3).unwrap());
    assert_eq!(theta_map(&g, 3, 1).unwrap_err(), GroupError::NotPowerful);
    assert!(is_powerful(&FiniteGroup::heisenberg_congruence(3, 2).unwrap(), 3).unwrap());
}

#[test]
fn power_sets_need_not_be_the_series_without_powerfulness() {
    // search a small corpus for a group where P_2 differs from {x^p}
    let witness = ["unitriangular:3,1", "abelian:9,3", "heisenberg:3,1"]
        .into_iter()
        .find(|name| {
            let g = name.parse::<propp::GroupPreset>().unwrap().build().unwrap();
            let series = lower_p_series(&g, 3).unwrap();
            *series.level(2).bits() != oracle::power_image(&g, 3)
        });
    assert_eq!(witness, Some("unitriangular:3,1"));
}

#[test]
fn v_subgroup_examples() {
    let c33 = FiniteGroup::elementary_abelian(3, 2).unwrap();
    assert!(v_subgroup(&c33, 3, 1).unwrap().subgroup.is_whole());
    let c9 = FiniteGroup::cyclic(9).unwrap();
    let v = v_subgroup(&c9, 3, 2).unwrap();
    assert!(c9.generated(&[3]).is_subset(&v.subgroup));
    let ut = FiniteGroup::unitriangular(3, 1).unwrap();
    let v = v_subgroup(&ut, 3, 2).unwrap();
    assert!(is_powerful(&FiniteGroup::from_table("V", restrict(&ut, &v.subgroup)).unwrap(), 3).unwrap());
}

fn restrict(g: &FiniteGroup, h: &propp::Subgroup) -> Vec<Vec<u32>> {
    let elems = h.element_vec();
    let pos = |x: u32| elems.iter().position(|&e| e == x).unwrap() as u32;
    elems.iter().map(|&a| elems.iter().map(|&b| pos(g.mul(a, b))).collect()).collect()
}

#[test]
fn invsys_examples() {
    let sys = InverseSystem::cyclic_tower(&[3, 9, 27]).unwrap();
    assert_eq!(sys.order_sn(), Supernatural::from_u64(27));
    assert_eq!(InverseSystem::cyclic_tower(&[2, 6, 30]).unwrap().order_sn(), Supernatural::from_u64(30));
    assert_eq!(sys.lift_tuple(1).unwrap().unwrap().len(), 1);
    let c33 = FiniteGroup::elementary_abelian(3, 2).unwrap();
    assert!(InverseSystem::constant(&c33, 3).lift_tuple(1).unwrap().is_none());
    let ut = InverseSystem::unitriangular_tower(3, 2).unwrap();
    assert!(ut.lift_tuple(2).unwrap().is_some());

    let s3 = FiniteGroup::symmetric(3).unwrap();
    let tower = InverseSystem::constant(&s3, 3).sylow_tower(2);
    assert!(tower.iter().all(|h| h.order() == 2 && h == &tower[0]));
    let tower = InverseSystem::cyclic_tower(&[6, 12]).unwrap().sylow_tower(2);
    assert_eq!(tower[0].element_vec(), vec![0, 3]);
    assert_eq!(tower[1].element_vec(), vec![0, 3, 6, 9]);

    let z = InverseSystem::abelian_tower(3, 2, 2).unwrap();
    // first factor: index 3 then 9
    let first: Vec<_> = z.levels().iter().map(|g| g.generated(&[g.index_of(&[1, 0]).unwrap()])).collect();
    assert_eq!(z.index_sn(&first).unwrap(), Supernatural::from_u64(9));

    let c = InverseSystem::cyclic_tower(&[3, 9]).unwrap();
    let cl = c.closure(&[0]);
    assert_eq!(cl.hull, vec![0, 3, 6]);
    let sub = c.finest().generated(&[3]).element_vec();
    assert_eq!(c.closure(&sub).hull, sub);
}

fn el(v: &[u64]) -> GElement {
    GElement(v.to_vec())
}

#[test]
fn uniform_examples() {
    let g = UniformGroup::abelian(3, 2, 3).unwrap();
    let l = CoordinateVector::from_residues(3, 3, &[4, 7]).unwrap();
    assert_eq!(g.x_of_lambda(&l).unwrap(), el(&[4, 7]));
    assert_eq!(g.lambda_of_x(&el(&[4, 7])).unwrap().residues(), vec![4, 7]);
    assert_eq!(g.lambda_of_x(&g.identity()).unwrap().residues(), vec![0, 0]);
    assert_eq!(g.zp_pow(&el(&[1, 0]), &z(3, 3, 5)).unwrap(), el(&[5, 0]));
    assert_eq!(g.omega(&el(&[9, 3])), Omega::Exact(2));
    assert_eq!(g.omega(&g.identity()), Omega::AtLeast(4));
    assert_eq!(g.pi_n(&el(&[3, 6]), 2).unwrap(), vec![1, 2]);
    assert!(matches!(g.pi_n(&el(&[1, 0]), 2), Err(UniformError::NotInLevel { .. })));
    assert_eq!(g.uniformity_report().dims, vec![2, 2, 2]);
    assert!(g.uniformity_report().uniform);

    let m = UniformGroup::congruence(3, 2, 2).unwrap();
    let e1 = CoordinateVector::from_residues(3, 2, &[1, 0, 0, 0]).unwrap();
    assert_eq!(m.x_of_lambda(&e1).unwrap(), el(&[4, 0, 0, 1]));
    let gens = m.generators();
    let prod = m.mul(&gens[0], &gens[3]);
    assert_eq!(m.x_of_lambda(&m.lambda_of_x(&prod).unwrap()).unwrap(), prod);
    let naive = (0..3).fold(m.identity(), |acc, _| m.mul(&acc, &gens[1]));
    assert_eq!(m.zp_pow(&gens[1], &z(3, 2, 3)).unwrap(), naive);
    let r = m.uniformity_report();
    assert!(r.uniform && r.dims.iter().all(|&d| d == 4));
}

#[test]
fn goodbasis_examples() {
    let g = UniformGroup::abelian(3, 2, 3).unwrap();
    let b = construct_good_basis(&g, &[el(&[0, 1]), el(&[3, 0])]).unwrap();
    assert_eq!((b.omegas(), b.index()), (&[1, 2][..], 3));
    assert!(verify_good_basis(&g, b.elements(), 0).unwrap().passed);
    let v = verify_good_basis(&g, &[el(&[3, 0]), el(&[0, 1])], 0).unwrap();
    assert_eq!(v.failed, Some(Condition::A));
    let h = OpenSubgroup::from_generators(&g, &[el(&[0, 1]), el(&[3, 0])]).unwrap();
    assert_eq!(membership(&h, &el(&[3, 2])).unwrap().residues(), vec![2, 1]);
    assert!(membership(&h, &el(&[1, 0])).is_none());
    let whole = OpenSubgroup::from_generators(&g, &g.generators()).unwrap();
    assert_eq!(whole.index(), 1);
    assert_eq!(construct_good_basis(&g, &[el(&[3, 0]), el(&[0, 3])]).unwrap().index(), 9);
}
