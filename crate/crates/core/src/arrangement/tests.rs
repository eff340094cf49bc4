use super::*;
use crate::chain::homology;

fn q(v: i64) -> Q {
    Q::from_integer(v.into())
}

fn sv(v: &[i8]) -> SignVector {
    SignVector(v.to_vec())
}

#[test]
fn rejects_bad_arrangements() {
    let zero = Hyperplane::new(vec![q(0), q(0)], q(1));
    assert!(Arrangement::new(2, vec![zero]).is_err());
    let h = Hyperplane::new(vec![q(1), q(2)], q(3));
    let scaled = Hyperplane::new(vec![q(2), q(4)], q(6));
    assert!(Arrangement::new(2, vec![h.clone(), scaled]).is_err());
    let flipped = Hyperplane::new(vec![q(-1), q(-2)], q(-3));
    assert!(Arrangement::new(2, vec![h.clone(), flipped]).is_ok());
    assert!(Arrangement::new(3, vec![h]).is_err());
}

#[test]
fn rationals_round_trip() {
    assert_eq!(parse_rational("-3/6").unwrap(), Q::new((-1).into(), 2.into()));
    assert_eq!(parse_rational(" 7 ").unwrap(), q(7));
    assert!(parse_rational("1/0").is_err());
    assert!(parse_rational("x").is_err());
    assert_eq!(format_rational(&Q::new(4.into(), (-6).into())), "-2/3");
    let a = Arrangement::generic_lines();
    let text = serde_json::to_string(&a.to_json()).unwrap();
    let back: ArrangementJson = serde_json::from_str(&text).unwrap();
    assert_eq!(Arrangement::from_json(&back).unwrap(), a);
    let mixed: ArrangementJson =
        serde_json::from_str(r#"{"n":1,"hyperplanes":[{"a":[2],"b":"-1/2"}]}"#).unwrap();
    assert_eq!(Arrangement::from_json(&mixed).unwrap().hyperplanes()[0].b, Q::new((-1).into(), 2.into()));
    let bad: ArrangementJson = serde_json::from_str(r#"{"n":1,"hyperplanes":[{"a":["1/0"],"b":0}]}"#).unwrap();
    match Arrangement::from_json(&bad) {
        Err(Error::Schema { path, .. }) => assert_eq!(path, "/hyperplanes/0/a/0"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn point_in_line() {
    let f = Arrangement::point_line().faces_level1();
    assert_eq!(f.signs, vec![vec![-1], vec![0], vec![1]]);
    assert_eq!(f.dims, vec![1, 0, 1]);
}

#[test]
fn three_generic_lines() {
    let a = Arrangement::generic_lines();
    let f = a.faces_level1();
    assert_eq!(f.f_vector(), vec![3, 9, 7]);
    let s = a.faces_higher(1).unwrap();
    assert_eq!(s.euler_sum(), 1);
    assert!(f.poset().validate().is_empty());
    for (signs, p) in f.signs.iter().zip(&f.witnesses) {
        let realized: Vec<i8> = a.hyperplanes().iter().map(|h| sign_of(&h.eval(p))).collect();
        assert_eq!(&realized, signs);
    }
}

#[test]
fn empty_arrangement() {
    let a = Arrangement::empty(3);
    let f = a.faces_level1();
    assert_eq!(f.len(), 1);
    assert_eq!(f.dims, vec![3]);
    let s = a.faces_higher(2).unwrap();
    assert_eq!(s.dims, vec![6]);
    assert_eq!(a.complement_poset(2).unwrap().len(), 1);
    assert_eq!(a.salvetti_cellular(2).unwrap().num_cells(), 1);
}

#[test]
fn certificates_for_missing_faces() {
    let a = Arrangement::generic_lines();
    let faces = a.faces_level1();
    let mut missing = 0;
    for code in 0..27 {
        let signs: Vec<i8> = (0..3).map(|i| ((code / 3i32.pow(i)) % 3) as i8 - 1).collect();
        match a.realize(&signs).unwrap() {
            Realization::Point(_) => assert!(faces.signs.contains(&signs)),
            Realization::Empty(c) => {
                missing += 1;
                assert!(!faces.signs.contains(&signs));
                assert!(c.verify(2, a.hyperplanes(), &signs), "{signs:?}");
            }
        }
    }
    assert_eq!(missing, 27 - 19);
    // parallel lines: both equal to zero is inconsistent
    let par = Arrangement::new(
        1,
        vec![Hyperplane::new(vec![q(1)], q(0)), Hyperplane::new(vec![q(1)], q(-1))],
    )
    .unwrap();
    match par.realize(&[0, 0]).unwrap() {
        Realization::Empty(c) => assert!(c.verify(1, par.hyperplanes(), &[0, 0])),
        r => panic!("{r:?}"),
    }
    match par.realize(&[-1, 1]).unwrap() {
        Realization::Empty(c) => assert!(c.verify(1, par.hyperplanes(), &[-1, 1])),
        r => panic!("{r:?}"),
    }
    let bogus = Certificate { multipliers: vec![q(1), q(1)] };
    assert!(!bogus.verify(1, par.hyperplanes(), &[-1, 1]));
}

#[test]
fn complexified_point() {
    let a = Arrangement::point_line();
    let s = a.faces_higher(2).unwrap();
    assert_eq!(s.signs, vec![sv(&[-2]), sv(&[-1]), sv(&[0]), sv(&[1]), sv(&[2])]);
    assert_eq!(s.dims, vec![2, 1, 0, 1, 2]);
    let c = a.complement_poset(2).unwrap();
    assert_eq!(c.len(), 4);
    assert_eq!(c.poset.covers().len(), 4);
    let k = a.higher_salvetti(2).unwrap();
    assert_eq!(k.f_vector(), vec![4, 4]);
    assert_eq!(homology(&k).unwrap().betti, vec![1, 1]);
    let sal = a.salvetti_cellular(2).unwrap();
    assert_eq!(sal.cell_counts(), vec![2, 2]);
    assert_eq!(homology(&sal.sd().unwrap()).unwrap().betti, vec![1, 1]);
}

#[test]
fn order_one_matches_faces() {
    for a in [Arrangement::point_line(), Arrangement::generic_lines(), Arrangement::braid(3)] {
        let f = a.faces_level1();
        let s = a.faces_higher(1).unwrap();
        assert_eq!(s.signs.iter().map(|v| v.0.clone()).collect::<Vec<_>>(), f.signs);
        assert_eq!(s.dims, f.dims);
    }
    assert!(matches!(Arrangement::point_line().faces_higher(0), Err(Error::InvalidOrder)));
}

#[test]
fn braid_a1() {
    let a = Arrangement::braid(2);
    let s = a.faces_higher(3).unwrap();
    assert_eq!(s.len(), 7);
    let k = a.higher_salvetti(3).unwrap();
    assert_eq!(k.f_vector(), vec![6, 12, 8]);
    assert_eq!(homology(&k).unwrap().betti, vec![1, 0, 1]);
    let c = a.complement_poset(2).unwrap();
    let mut dims = c.dims.clone();
    dims.sort();
    assert_eq!(dims, vec![3, 3, 4, 4]);
    let sal = a.salvetti_cellular(2).unwrap();
    assert_eq!(sal.cell_counts(), vec![2, 2]);
}

#[test]
fn braid_a2_is_three_points_in_the_plane() {
    let k = Arrangement::braid(3).higher_salvetti(2).unwrap();
    assert_eq!(homology(&k).unwrap().betti, vec![1, 3, 2]);
}

#[test]
fn strictly_smaller_strata_have_smaller_dimension() {
    for a in [Arrangement::generic_lines(), Arrangement::braid(3)] {
        let s = a.faces_higher(2).unwrap();
        assert!(s.poset.validate().is_empty());
        for x in 0..s.len() {
            for y in 0..s.len() {
                if x != y && s.signs[x].leq(&s.signs[y]) {
                    assert!(s.dims[x] < s.dims[y]);
                }
            }
        }
    }
}

#[test]
fn pointwise_order_is_the_closure_order() {
    for (a, order) in [
        (Arrangement::point_line(), 3),
        (Arrangement::generic_lines(), 2),
        (Arrangement::braid(3), 2),
    ] {
        let s = a.faces_higher(order).unwrap();
        assert!(s.closure_order_violations(&a).is_empty());
    }
}

#[test]
fn witness_points_realize_strata() {
    let a = Arrangement::generic_lines();
    let s = a.faces_higher(2).unwrap();
    for i in 0..s.len() {
        let p = s.witness_point(i);
        let levels: Vec<Vec<i8>> = p
            .iter()
            .enumerate()
            .map(|(l, x)| {
                a.hyperplanes()
                    .iter()
                    .map(|h| sign_of(&if l == 0 { h.eval(x) } else { h.linear_part().eval(x) }))
                    .collect()
            })
            .collect();
        let refs: Vec<&[i8]> = levels.iter().map(Vec::as_slice).collect();
        assert_eq!(SignVector::collapse(&refs), s.signs[i]);
    }
}

#[test]
fn euler_identity() {
    for a in [Arrangement::point_line(), Arrangement::generic_lines(), Arrangement::braid(3), Arrangement::empty(2)] {
        for order in 1..=3 {
            let s = a.faces_higher(order).unwrap();
            let expected = if (a.dim() * order) % 2 == 0 { 1 } else { -1 };
            assert_eq!(s.euler_sum(), expected);
        }
    }
}

#[test]
fn symmetric_subdivision_of_point() {
    let a = Arrangement::point_line();
    let s = a.symmetric_subdivision(2).unwrap();
    assert_eq!(s.len(), 9);
    assert_eq!(s.euler_sum(), 1);
    assert!(s.poset.validate().is_empty());
    // the collapse map is surjective and order preserving
    let mut hit = vec![false; s.target.len()];
    for x in 0..s.len() {
        hit[s.collapse[x]] = true;
        for y in 0..s.len() {
            if s.poset.leq(x, y) {
                assert!(s.target.poset.leq(s.collapse[x], s.collapse[y]));
            }
        }
    }
    assert!(hit.iter().all(|&h| h));
}

#[test]
fn level_permutations_are_automorphisms() {
    let a = Arrangement::point_line();
    let s = a.symmetric_subdivision(3).unwrap();
    let swap = s.permute_levels(&[1, 0]).unwrap();
    for x in 0..s.len() {
        assert_eq!(swap[swap[x]], x);
        assert_eq!(s.dims[swap[x]], s.dims[x]);
        for y in 0..s.len() {
            assert_eq!(s.poset.leq(x, y), s.poset.leq(swap[x], swap[y]));
        }
    }
    assert!(s.permute_levels(&[0, 0]).is_err());
    assert_eq!(s.permute_levels(&[0, 1]).unwrap(), (0..s.len()).collect::<Vec<_>>());
}

#[test]
fn braid_a2_is_three_points_in_space() {
    let k = Arrangement::braid(3).higher_salvetti(3).unwrap();
    assert_eq!(homology(&k).unwrap().betti, vec![1, 0, 3, 0, 2]);
}
