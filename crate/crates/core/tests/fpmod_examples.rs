use std::collections::BTreeMap;

use stmod::fpmod::*;
use stmod::steenrod::syntax::parse_element;
use stmod::steenrod::{SteenrodElt, SubAlgebra};

fn a1() -> std::sync::Arc<SubAlgebra> {
    SubAlgebra::a(1).unwrap()
}

fn elt(s: &str) -> SteenrodElt {
    parse_element(s, Some(1)).unwrap()
}

fn cyclic(gens: &[&str]) -> GradedModule {
    let g: Vec<SteenrodElt> = gens.iter().map(|s| elt(s)).collect();
    quotient_by_left_ideal(&a1(), &g).unwrap()
}

fn dims(pairs: &[(i32, usize)]) -> BTreeMap<i32, usize> {
    pairs.iter().copied().collect()
}

fn joker() -> GradedModule {
    cyclic(&["Sq^1 Sq^2"]).suspend(-2)
}

fn hz() -> GradedModule {
    hopf_quotient(&a1(), &SubAlgebra::a_in(0, 1).unwrap()).unwrap()
}

fn iso(a: &GradedModule, b: &GradedModule) -> bool {
    iso_test(a, b).unwrap().is_iso()
}

#[test]
fn cyclic_quotients() {
    assert_eq!(hz().dims(), dims(&[(0, 1), (2, 1), (3, 1), (5, 1)]));
    let ku = cyclic(&["Sq^1", "Sq^1 Sq^2"]);
    assert_eq!(ku.dims(), dims(&[(0, 1), (2, 1)]));
    let ku2 = hopf_quotient(&a1(), &SubAlgebra::e_in(1, 1).unwrap()).unwrap();
    assert!(iso(&ku, &ku2));
    let j = joker();
    assert_eq!(j.dims(), dims(&[(-2, 1), (-1, 1), (0, 1), (1, 1), (2, 1)]));
    assert!(j.validate().unwrap().is_empty());
    let p = hopf_quotient(&a1(), &SubAlgebra::closure(&[elt("P(1,1)")], 1).unwrap()).unwrap();
    assert_eq!(p.dims(), dims(&[(0, 1), (1, 1), (2, 1), (3, 1)]));
}

#[test]
fn regular_and_validation() {
    let reg = GradedModule::regular(&a1());
    assert_eq!(reg.total_dim(), 8);
    assert!(reg.validate().unwrap().is_empty());
    // Break the Joker: Sq^2 from the bottom class set to zero.
    let j = joker();
    let broken = GradedModule::from_parts("bad", a1(), j.basis_map(), |g, d| {
        let m = j.gen_action(g, d);
        if g == 1 && d == -2 {
            stmod::f2linalg::F2Matrix::zeros(m.rows(), m.cols())
        } else {
            m
        }
    })
    .unwrap();
    let v = broken.validate().unwrap();
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].relation, "Sq^2Sq^2 + Sq^1Sq^2Sq^1");
}

#[test]
fn duals() {
    let reg = GradedModule::regular(&a1()).as_ref().clone();
    assert!(iso(&dual(&reg).unwrap(), &reg.suspend(-6)));
    let f2 = GradedModule::trivial(a1());
    assert!(iso(&dual(&f2).unwrap(), &f2));
    assert!(iso(&dual(&hz()).unwrap(), &hz().suspend(-5)));
    let i1 = augmentation_ideal(&a1()).unwrap();
    let di = dual(&i1).unwrap();
    assert_eq!(di.degrees(), vec![-6, -5, -4, -3, -2, -1]);
    assert!(iso(&dual(&di).unwrap(), &i1));
}

#[test]
fn selfdual_shifts() {
    let reg = GradedModule::regular(&a1()).as_ref().clone();
    assert_eq!(selfdual_shift(&reg, false).unwrap(), Some(6));
    assert_eq!(selfdual_shift(&hz(), false).unwrap(), Some(5));
    assert_eq!(
        selfdual_shift(&cyclic(&["Sq^1", "Sq^1 Sq^2"]), false).unwrap(),
        Some(2)
    );
    assert_eq!(selfdual_shift(&joker(), false).unwrap(), Some(0));
    assert_eq!(
        selfdual_shift(&cyclic(&["Sq^2", "P(1,1)"]), false).unwrap(),
        Some(1)
    );
    let q = cyclic(&["Sq^2"]);
    assert_eq!(selfdual_shift(&q, false).unwrap(), None);
}

#[test]
fn joker_squared() {
    let jj = tensor(&joker(), &joker()).unwrap();
    let r = reduce(&jj).unwrap();
    let mut free = r.free_part.clone();
    free.sort();
    assert_eq!(free, vec![-4, -3, -2]);
    assert!(iso(&r.reduced, &GradedModule::trivial(a1())));
    assert!(r.witness.is_bijective());
}

#[test]
fn hz_squared() {
    let hzhz = tensor(&hz(), &hz()).unwrap();
    let reg = GradedModule::regular(&a1()).as_ref().clone();
    let rhs = GradedModule::direct_sum("rhs", &a1(), &[&hz(), &reg.suspend(2), &hz().suspend(5)])
        .unwrap();
    assert!(iso(&hzhz, &rhs));
}

#[test]
fn loops_of_joker() {
    let j = joker();
    let l = loop_module(&j).unwrap();
    assert_eq!(l.degrees(), vec![1, 3, 4]);
    let o = oloop_module(&j).unwrap();
    assert_eq!(o.degrees(), vec![-4, -3, -1]);
    assert_eq!(loop_module(&l).unwrap().degrees(), vec![2, 4, 5, 6, 7]);
    assert_eq!(
        oloop_module(&o).unwrap().degrees(),
        vec![-7, -6, -5, -4, -2]
    );
    assert!(iso(&oloop_module(&l).unwrap(), &j));
    assert!(iso(&o, &cyclic(&["Sq^2"]).suspend(-4)));
    assert!(iso(&l, &cyclic(&["Sq^1", "Sq^2 Sq^1 Sq^2"]).suspend(1)));
}

#[test]
fn doubling() {
    let a0 = GradedModule::regular(&SubAlgebra::a(0).unwrap())
        .as_ref()
        .clone();
    let d = double(&a0).unwrap();
    assert!(iso(
        &d,
        &hopf_quotient(&a1(), &SubAlgebra::e_in(1, 1).unwrap()).unwrap()
    ));
    let reg = GradedModule::regular(&a1()).as_ref().clone();
    let d = double(&reg).unwrap();
    let a2 = SubAlgebra::a(2).unwrap();
    let target = hopf_quotient(&a2, &SubAlgebra::e_in(2, 2).unwrap()).unwrap();
    assert_eq!(d.degrees(), vec![0, 2, 4, 6, 8, 10, 12]);
    assert!(d.validate().unwrap().is_empty());
    assert!(iso(&d, &target));
}

#[test]
fn restriction_and_induction() {
    // P(1,1) is central, so it acts trivially on A(1)/A(1){P(1,1)}.
    let f = SubAlgebra::closure(&[elt("P(1,1)")], 1).unwrap();
    let m = hopf_quotient(&a1(), &f).unwrap();
    let r = restrict(&m, &f).unwrap();
    let t = GradedModule::trivial(f.clone());
    let triv = GradedModule::direct_sum(
        "rhs",
        &f,
        &[&t, &t.suspend(1), &t.suspend(2), &t.suspend(3)],
    )
    .unwrap();
    assert!(iso(&r, &triv));
    let ind = induce(&a1(), &r).unwrap();
    let four = GradedModule::direct_sum(
        "rhs",
        &a1(),
        &[&m, &m.suspend(1), &m.suspend(2), &m.suspend(3)],
    )
    .unwrap();
    assert!(iso(&ind, &four));
    assert!(iso(&ind, &tensor(&m, &m).unwrap()));

    let a0 = SubAlgebra::a_in(0, 1).unwrap();
    assert!(iso(
        &induce(&a1(), &GradedModule::trivial(a0)).unwrap(),
        &hz()
    ));
    assert!(iso(&induce(&a1(), &joker()).unwrap(), &joker()));
    assert!(restrict(&joker(), &a1())
        .unwrap()
        .same_presentation(&joker()));
}

#[test]
fn margolis() {
    let reg = GradedModule::regular(&a1()).as_ref().clone();
    assert!(margolis_homology(&reg, 0).unwrap().is_empty());
    assert!(margolis_homology(&reg, 1).unwrap().is_empty());
    let f2 = GradedModule::trivial(a1());
    assert_eq!(margolis_homology(&f2, 1).unwrap(), dims(&[(0, 1)]));
    assert_eq!(margolis_homology(&joker(), 0).unwrap(), dims(&[(0, 1)]));
    assert_eq!(margolis_homology(&joker(), 1).unwrap(), dims(&[(0, 1)]));
}

#[test]
fn exact_sequences() {
    let seq = bott_sequence().unwrap();
    assert_eq!(check_exact(&seq), Ok(()));
    let seq = p11_resolution(4).unwrap();
    assert_eq!(check_exact(&seq), Ok(()));
}
