use super::*;
use crate::chain::homology;

/// One vertex and one edge attached by two lifts.
fn circle() -> AcyclicCategory {
    AcyclicCategory::new(vec![Some(0), Some(1)], vec![(0, 1), (0, 1)], vec![])
}

fn torus() -> AcyclicCategory {
    circle().product(&circle()).unwrap()
}

fn punctured_torus() -> AcyclicCategory {
    torus().full_subcategory(&[false, true, true, true]).0
}

#[test]
fn poset_as_category_is_valid() {
    let c = AcyclicCategory::from_poset(&Poset::chain(2)).unwrap();
    assert!(c.validate().is_empty());
    assert_eq!(c.num_morphisms(), 3);
    assert_eq!(c.underlying_poset().unwrap(), Poset::chain(2));
}

#[test]
fn parallel_morphisms_are_allowed() {
    assert!(circle().validate().is_empty());
}

#[test]
fn detects_cycles_and_bad_tables() {
    let c = AcyclicCategory::new(vec![None, None], vec![(0, 1), (1, 0)], vec![(1, 0, 0), (0, 1, 1)]);
    assert!(c.validate().iter().any(|d| matches!(d, CategoryDiagnostic::Cycle { .. })));

    let chain = AcyclicCategory::new(vec![None; 3], vec![(0, 1), (1, 2), (0, 2)], vec![]);
    assert_eq!(chain.validate(), vec![CategoryDiagnostic::MissingComposite { g: 1, f: 0 }]);

    let wrong = AcyclicCategory::new(vec![None; 3], vec![(0, 1), (1, 2), (0, 2)], vec![(1, 0, 1)]);
    assert_eq!(wrong.validate(), vec![CategoryDiagnostic::WrongComposite { g: 1, f: 0, gf: 1 }]);

    let endo = AcyclicCategory::new(vec![None], vec![(0, 0)], vec![]);
    assert_eq!(endo.validate(), vec![CategoryDiagnostic::Endomorphism { morphism: 0 }]);
}

#[test]
fn detects_non_associativity() {
    // 0 → 1 → 2 → 3 with two parallel morphisms 0 → 3 chosen inconsistently
    let morphisms = vec![(0, 1), (1, 2), (2, 3), (0, 2), (1, 3), (0, 3), (0, 3)];
    let compose = vec![(1, 0, 3), (2, 1, 4), (2, 3, 5), (4, 0, 6)];
    let c = AcyclicCategory::new(vec![None; 4], morphisms, compose);
    assert!(matches!(c.validate()[..], [CategoryDiagnostic::NonAssociative { .. }]));
}

#[test]
fn underlying_posets() {
    let p = circle().underlying_poset().unwrap();
    assert_eq!(p.covers(), &[(0, 1)]);
    let pt = punctured_torus().underlying_poset().unwrap();
    assert_eq!(pt.minimal_elements().len(), 2);
    assert_eq!(pt.maximal_elements().len(), 1);
}

#[test]
fn nerves() {
    let n = circle().nerve().unwrap();
    assert_eq!(n.f_vector(), vec![2, 2]);
    let pt = punctured_torus().nerve().unwrap();
    assert_eq!(pt.f_vector(), vec![3, 4]);
    assert_eq!(homology(&pt).unwrap().betti, vec![1, 2]);
    let one = AcyclicCategory::new(vec![Some(0)], vec![], vec![]);
    assert_eq!(one.nerve().unwrap().f_vector(), vec![1]);
    let t = torus().nerve().unwrap();
    assert_eq!(t.f_vector(), vec![4, 12, 8]);
    assert_eq!(homology(&t).unwrap().betti, vec![1, 2, 1]);
}

#[test]
fn sd_category_examples() {
    let edge = AcyclicCategory::from_poset(&Poset::chain(1)).unwrap();
    let sd = edge.sd_category().unwrap();
    assert_eq!(sd.len(), 3);
    assert_eq!(sd.covers(), &[(0, 2), (1, 2)]);

    let sd = circle().sd_category().unwrap();
    assert_eq!(sd.len(), 4);
    assert_eq!(sd.covers(), &[(0, 2), (0, 3), (1, 2), (1, 3)]);

    // the order complex of Sd(C) is the barycentric subdivision of the nerve
    let c = punctured_torus();
    let sd = c.sd_category().unwrap();
    assert_eq!(sd.order_complex().unwrap().f_vector(), vec![7, 8]);
    let bary = c.nerve().unwrap().face_poset().order_complex().unwrap();
    assert_eq!(sd.order_complex().unwrap().f_vector(), bary.f_vector());
}

#[test]
fn sd_category_matches_face_poset_of_nerve() {
    for c in [circle(), torus(), punctured_torus()] {
        let sd = c.sd_category().unwrap();
        let fp = c.nerve().unwrap().face_poset();
        assert!(poset_isomorphism(&sd, &fp).is_some());
    }
}

#[test]
fn stars_and_links() {
    let c = AcyclicCategory::from_poset(&Poset::chain(2)).unwrap();
    assert_eq!(c.upper_link(1).unwrap().f_vector(), vec![1]);
    assert_eq!(circle().upper_link(0).unwrap().f_vector(), vec![2]);
    assert_eq!(circle().upper_star(1).unwrap().f_vector(), vec![1]);
    assert_eq!(circle().lower_link(1).unwrap().f_vector(), vec![2]);
    assert_eq!(circle().lower_star(1).unwrap().f_vector(), vec![3, 2]);
}

fn cone_identity(star: &[usize], link: &[usize]) -> bool {
    (0..star.len().max(link.len() + 1)).all(|k| {
        let s = star.get(k).copied().unwrap_or(0);
        let l = link.get(k).copied().unwrap_or(0);
        let below = if k == 0 { 1 } else { link.get(k - 1).copied().unwrap_or(0) };
        s == l + below
    })
}

#[test]
fn stars_are_cones_on_links() {
    for c in [circle(), torus(), punctured_torus()] {
        for x in 0..c.num_objects() {
            let (s, l) = (c.upper_star(x).unwrap(), c.upper_link(x).unwrap());
            assert!(cone_identity(&s.f_vector(), &l.f_vector()));
            let (s, l) = (c.lower_star(x).unwrap(), c.lower_link(x).unwrap());
            assert!(cone_identity(&s.f_vector(), &l.f_vector()));
        }
    }
}

#[test]
fn product_hom_sets() {
    let t = torus();
    assert_eq!(t.num_objects(), 4);
    assert_eq!(t.hom(0, 3).len(), 4);
    let point = AcyclicCategory::new(vec![Some(0)], vec![], vec![]);
    let c = circle().product(&point).unwrap();
    assert!(category_isomorphism(&c, &circle()).is_some());
    assert_eq!(
        t.underlying_poset().unwrap(),
        circle().underlying_poset().unwrap().product(&circle().underlying_poset().unwrap()).unwrap()
    );
}

#[test]
fn grothendieck_units() {
    let c = torus();
    let (g, _) = c.grothendieck(&PosetFunctor::constant_point(&c)).unwrap();
    let g = g.with_grades(c.grades().to_vec());
    assert!(category_isomorphism(&g, &c).is_some());

    let p = Poset::chain(2);
    let point = AcyclicCategory::new(vec![Some(0)], vec![], vec![]);
    let f = PosetFunctor { posets: vec![p.clone()], maps: vec![], interior: None };
    let (g, _) = point.grothendieck(&f).unwrap();
    assert_eq!(g.underlying_poset().unwrap().covers(), p.covers());
}

#[test]
fn grothendieck_bisects_the_circle() {
    // domain of the edge: −1 < L > 0 < R > 1, interior {0, L, R}
    let edge_domain = Poset::new(
        vec![Some(0), Some(0), Some(0), Some(1), Some(1)],
        vec![(0, 3), (1, 3), (1, 4), (2, 4)],
    );
    let f = PosetFunctor {
        posets: vec![Poset::new(vec![Some(0)], vec![]), edge_domain],
        maps: vec![vec![0], vec![2]],
        interior: Some(vec![vec![true], vec![false, true, false, true, true]]),
    };
    let (g, _) = circle().grothendieck(&f).unwrap();
    assert_eq!(g.num_objects(), 4);
    assert_eq!(g.num_morphisms(), 4);
    assert_eq!(g.nerve().unwrap().f_vector(), vec![4, 4]);
    assert_eq!(homology(&g.nerve().unwrap()).unwrap().betti, vec![1, 1]);
}

#[test]
fn grothendieck_rejects_non_functorial_data() {
    let c = AcyclicCategory::from_poset(&Poset::chain(2)).unwrap();
    let two = Poset::antichain(2);
    // F(0<2) must equal F(1<2)∘F(0<1)
    let f = PosetFunctor {
        posets: vec![two.clone(), two.clone(), two],
        maps: vec![vec![0, 1], vec![1, 0], vec![0, 1]],
        interior: None,
    };
    assert!(matches!(c.grothendieck(&f), Err(Error::NonFunctorial(_))));
}

#[test]
fn quotients() {
    let c = torus();
    let q = c.quotient_by_free_action(&GroupAction::trivial()).unwrap();
    assert!(category_isomorphism(&q, &c).is_some());

    let two = AcyclicCategory::new(vec![Some(0), Some(0)], vec![], vec![]);
    let swap = GroupAction { generators: vec![(vec![1, 0], vec![])] };
    assert_eq!(two.quotient_by_free_action(&swap).unwrap().num_objects(), 1);

    let fixed = GroupAction { generators: vec![(vec![0, 1], vec![1, 0])] };
    assert!(matches!(circle().quotient_by_free_action(&fixed), Err(Error::NonFreeAction { object: 0 })));
}

#[test]
fn isomorphism_distinguishes_hom_multiplicities() {
    let thin = AcyclicCategory::new(vec![Some(0), Some(1)], vec![(0, 1)], vec![]);
    assert!(category_isomorphism(&thin, &circle()).is_none());
    let doubled = AcyclicCategory::new(vec![Some(0), Some(1)], vec![(0, 1), (0, 1)], vec![]);
    assert!(category_isomorphism(&doubled, &circle()).is_some());
}

#[test]
fn opposite_twice_is_identity() {
    let c = punctured_torus();
    assert_eq!(c.opposite().opposite(), c);
    assert!(c.opposite().validate().is_empty());
}
