//! Acceptance suite: every criterion is checked exactly and reported on its
//! own line. The process exits with status 1 if any criterion fails.

use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stratakit::arrangement::{Arrangement, Hyperplane, Q};
use stratakit::category::{category_isomorphism, poset_isomorphism};
use stratakit::strata::fixtures;
use stratakit::{abrams_complex, homology, ChainComplex, CombinatorialCss, ConfSpace, DeltaComplex, Graph, Poset};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn sd_homology(x: &CombinatorialCss) -> Result<(Vec<usize>, Vec<usize>, bool), String> {
    let sd = x.sd().map_err(err)?;
    let h = homology(&sd).map_err(err)?;
    let free = h.is_torsion_free();
    Ok((sd.f_vector(), h.betti_trimmed(), free))
}

fn criterion_1() -> Outcome {
    let (f, b, free) = sd_homology(&fixtures::circle_minimal())?;
    ensure!(f == [2, 2] && b == [1, 1] && free, "f={f:?} betti={b:?}");
    Ok(())
}

fn criterion_2() -> Outcome {
    let (f, b, free) = sd_homology(&fixtures::punctured_torus().map_err(err)?)?;
    ensure!(f == [3, 4] && b == [1, 2] && free, "f={f:?} betti={b:?}");
    Ok(())
}

fn criterion_3() -> Outcome {
    for n in 1..=3 {
        let x = fixtures::simplex(n).map_err(err)?;
        let s = x.salvetti_complex().map_err(err)?;
        let iso = category_isomorphism(s.category(), x.category()).ok_or(format!("n={n}: not isomorphic"))?;
        ensure!((0..x.num_cells()).all(|c| s.dim(c) == x.dim(iso.objects[c])), "n={n}: dimensions differ");
        ensure!(s.all_closed(), "n={n}: double dual has non-closed cells");
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let conf = ConfSpace::new(&Graph::loop_graph(), 2).map_err(err)?.css;
    let suite = [
        ("circle", fixtures::circle_minimal()),
        ("simplex-2", fixtures::simplex(2).map_err(err)?),
        ("boundary-simplex-3", fixtures::boundary_simplex(3).map_err(err)?),
        ("punctured-torus", fixtures::punctured_torus().map_err(err)?),
        ("y-space", fixtures::y_space()),
        ("conf2-loop", conf),
    ];
    for (name, x) in suite {
        let a = x.category().sd_category().map_err(err)?;
        let b = x.sd().map_err(err)?.face_poset();
        ensure!(poset_isomorphism(&a, &b).is_some(), "{name}: not isomorphic");
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let d = fixtures::simplex(2).map_err(err)?.dual().map_err(err)?;
    ensure!(d.cell_counts() == [1, 3, 3], "cells {:?}", d.cell_counts());
    Ok(())
}

fn criterion_6() -> Outcome {
    let a = Arrangement::point_line();
    let c = a.complement_poset(2).map_err(err)?;
    ensure!(c.len() == 4, "complement has {} strata", c.len());
    let k = a.higher_salvetti(2).map_err(err)?;
    let h = homology(&k).map_err(err)?;
    ensure!(k.f_vector() == [4, 4] && h.betti_trimmed() == [1, 1] && h.is_torsion_free(), "f={:?} H={h}", k.f_vector());
    let sal = a.salvetti_cellular(2).map_err(err)?;
    ensure!(sal.cell_counts() == [2, 2], "Salvetti cells {:?}", sal.cell_counts());
    let (_, b, _) = sd_homology(&sal)?;
    ensure!(b == [1, 1], "Salvetti homology {b:?}");
    Ok(())
}

/// `±e_1 < ±e_2 < … < ±e_ℓ`, each level below both elements of the next.
fn iterated_suspension(levels: usize) -> Poset {
    let grades = (0..2 * levels).map(|i| Some((i / 2) as i64)).collect();
    let covers = (0..2 * levels.saturating_sub(1)).flat_map(|i| {
        let next = 2 * (i / 2 + 1);
        [(i, next), (i, next + 1)]
    });
    Poset::new(grades, covers.collect())
}

fn criterion_7() -> Outcome {
    let a = Arrangement::braid(2);
    for order in 2..=4 {
        let c = a.complement_poset(order).map_err(err)?;
        let oracle = iterated_suspension(order);
        let plain = Poset::new(vec![Some(0); c.len()], c.poset.covers().to_vec());
        let plain_oracle = Poset::new(vec![Some(0); oracle.len()], oracle.covers().to_vec());
        ensure!(poset_isomorphism(&plain, &plain_oracle).is_some(), "ℓ={order}: complement poset differs from the suspension");
        let k = a.higher_salvetti(order).map_err(err)?;
        let h = homology(&k).map_err(err)?;
        ensure!(h.is_sphere(order as i64 - 1), "ℓ={order}: H={h}");
        if order == 3 {
            ensure!(k.f_vector() == [6, 12, 8] && k.euler_characteristic() == 2, "octahedron f={:?}", k.f_vector());
        }
    }
    Ok(())
}

/// Coefficients of `∏_{i=1}^{points-1} (1 + i·t^{d-1})`.
fn poincare_oracle(points: usize, d: usize) -> Vec<usize> {
    let step = d - 1;
    let mut poly = vec![1usize];
    for i in 1..points {
        let mut next = vec![0; poly.len() + step];
        for (j, &c) in poly.iter().enumerate() {
            next[j] += c;
            next[j + step] += i * c;
        }
        poly = next;
    }
    poly
}

fn criterion_8() -> Outcome {
    let a = Arrangement::braid(3);
    for order in [2, 3] {
        let k = a.higher_salvetti(order).map_err(err)?;
        let h = homology(&k).map_err(err)?;
        let oracle = poincare_oracle(3, order);
        ensure!(h.betti_trimmed() == oracle && h.is_torsion_free(), "ℓ={order}: H={h}, oracle {oracle:?}");
    }
    ensure!(poincare_oracle(3, 2) == [1, 3, 2] && poincare_oracle(3, 3) == [1, 0, 3, 0, 2], "oracle polynomial");
    Ok(())
}

fn criterion_9() -> Outcome {
    for (name, g) in [("edge", Graph::edge()), ("loop", Graph::loop_graph()), ("Y", Graph::y_graph())] {
        let c = ConfSpace::new(&g, 2).map_err(err)?;
        let a = abrams_complex(&g, 2, 3).map_err(err)?;
        let (_, bc, fc) = sd_homology(&c.css)?;
        let (_, ba, fa) = sd_homology(&a)?;
        ensure!(bc == ba && fc && fa, "{name}: model {bc:?} vs oracle {ba:?}");
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let g = Graph::complete(5);
    let c = ConfSpace::new(&g, 2).map_err(err)?;
    let ordered = homology(&c.css.sd().map_err(err)?).map_err(err)?;
    let unordered = homology(&c.unordered().map_err(err)?.sd().map_err(err)?).map_err(err)?;
    let oracle = homology(&abrams_complex(&g, 2, 3).map_err(err)?.sd().map_err(err)?).map_err(err)?;
    let mut problems = Vec::new();
    if ordered.euler_characteristic() != -20 {
        problems.push(format!("ordered χ is {}, expected -20", ordered.euler_characteristic()));
    }
    if unordered.betti_trimmed() != [1, 12, 1] || !unordered.is_torsion_free() {
        problems.push(format!("unordered H is {unordered}, expected (Z, Z^12, Z)"));
    }
    if ordered != oracle {
        problems.push(format!("ordered H {ordered} differs from the Abrams oracle {oracle}"));
    }
    if ordered.euler_characteristic() != 2 * unordered.euler_characteristic() {
        problems.push("χ does not halve".into());
    }
    ensure!(problems.is_empty(), "{} (ordered H {ordered})", problems.join("; "));
    Ok(())
}

fn random_arrangement(rng: &mut ChaCha8Rng) -> Arrangement {
    loop {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=4);
        let mut hs = Vec::new();
        for _ in 0..k {
            let mut rational = |lo: i64, hi: i64| Q::new(rng.gen_range(lo..=hi).into(), rng.gen_range(1i64..=3).into());
            let a: Vec<Q> = (0..n).map(|_| rational(-3, 3)).collect();
            let b = rational(-4, 4);
            if a.iter().all(Zero::is_zero) {
                continue;
            }
            hs.push(Hyperplane::new(a, b));
        }
        if let Ok(a) = Arrangement::new(n, hs) {
            return a;
        }
    }
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..20 {
        let a = random_arrangement(&mut rng);
        let order = rng.gen_range(1..=3);
        let s = a.faces_higher(order).map_err(err)?;
        let expected = if (a.dim() * order) % 2 == 0 { 1 } else { -1 };
        ensure!(
            s.euler_sum() == expected,
            "trial {trial}: n={} k={} ℓ={order}: Σ(−1)^dim = {}",
            a.dim(),
            a.len(),
            s.euler_sum()
        );
    }
    Ok(())
}

fn check_complex(name: &str, k: &DeltaComplex) -> Outcome {
    let chain = ChainComplex::from_delta(k).map_err(|e| format!("{name}: {e}"))?;
    let h = chain.homology();
    ensure!(k.euler_characteristic() == h.euler_characteristic(), "{name}: χ(f) != Σ(−1)^n b_n");
    Ok(())
}

fn criterion_12() -> Outcome {
    let mut spaces: Vec<(String, CombinatorialCss)> = Vec::new();
    for name in ["point", "interval", "simplex-2", "simplex-3", "boundary-simplex-2", "boundary-simplex-3", "circle-minimal", "circle-2", "torus", "punctured-torus", "y-space"] {
        spaces.push((name.into(), fixtures::by_name(name).map_err(err)?));
    }
    for (name, g) in [("edge", Graph::edge()), ("loop", Graph::loop_graph()), ("Y", Graph::y_graph())] {
        spaces.push((format!("graph {name}"), g.to_css().map_err(err)?));
        let c = ConfSpace::new(&g, 2).map_err(err)?;
        spaces.push((format!("unordered conf2 {name}"), c.unordered().map_err(err)?));
        spaces.push((format!("conf2 {name}"), c.css));
        spaces.push((format!("abrams {name}"), abrams_complex(&g, 2, 3).map_err(err)?));
    }
    let sal = Arrangement::point_line().salvetti_cellular(2).map_err(err)?;
    spaces.push(("salvetti point-line".into(), sal));
    let dual = fixtures::simplex(2).map_err(err)?.dual().map_err(err)?;
    spaces.push(("dual simplex-2".into(), dual));
    for (name, x) in &spaces {
        let sd = x.sd().map_err(err)?;
        check_complex(name, &sd)?;
        if x.all_closed() {
            ensure!(sd.euler_characteristic() == x.cell_euler_characteristic(), "{name}: χ(Sd) != Σ(−1)^dim");
        }
    }
    for (name, a) in [("point-line", Arrangement::point_line()), ("braid-2", Arrangement::braid(2)), ("braid-3", Arrangement::braid(3))] {
        for order in 1..=3 {
            check_complex(&format!("higher salvetti {name} ℓ={order}"), &a.higher_salvetti(order).map_err(err)?)?;
        }
    }
    Ok(())
}

fn criterion_13() -> Outcome {
    for (name, g) in [("edge", Graph::edge()), ("loop", Graph::loop_graph()), ("Y", Graph::y_graph()), ("K5", Graph::complete(5))] {
        let c = ConfSpace::new(&g, 2).map_err(err)?;
        let cat = c.css.category();
        c.sigma_action().check_free(cat).map_err(|e| format!("{name}: {e}"))?;
        let ordered = c.css.sd().map_err(err)?.euler_characteristic();
        let unordered = c.unordered().map_err(err)?.sd().map_err(err)?.euler_characteristic();
        ensure!(ordered == 2 * unordered, "{name}: χ ordered {ordered}, unordered {unordered}");
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("Sd of the minimal circle: f=(2,2), H=(Z,Z)", criterion_1),
        ("punctured torus: Sd f=(3,4), H=(Z,Z^2)", criterion_2),
        ("double dual of the n-simplex is the n-simplex, n=1,2,3", criterion_3),
        ("Sd(C(X)) is the face poset of Sd(X) on the fixture suite", criterion_4),
        ("dual of the 2-simplex has cells (1,3,3)", criterion_5),
        ("complexified point: 4 strata, f=(4,4), H=(Z,Z), 2+2 Salvetti cells", criterion_6),
        ("braid A1 at order 2,3,4 gives spheres; octahedron at order 3", criterion_7),
        ("braid A2 at order 2,3 matches the Poincare polynomial", criterion_8),
        ("graph configuration model agrees with the Abrams complex", criterion_9),
        ("Conf2(K5): ordered chi=-20, unordered genus-6 surface", criterion_10),
        ("Euler identity on 20 random arrangements", criterion_11),
        ("universal invariants on every constructed complex", criterion_12),
        ("free symmetric action and chi halving on Conf2 fixtures", criterion_13),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
