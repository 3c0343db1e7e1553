mod common;

use std::sync::Arc;

use bicatfib::classical::{equivalence_1cat, find_limit_1cat, is_limit_1cat};
use bicatfib::fixtures;
use bicatfib::limits::*;
use bicatfib::*;
use common::*;

fn shapes() -> Vec<(&'static str, Category)> {
    vec![
        ("terminal", fixtures::terminal_category()),
        ("product", fixtures::discrete(2)),
        ("pullback", fixtures::cospan()),
    ]
}

fn strict(a: &Arc<Bicategory>, e: &Arc<Bicategory>) -> Vec<Arc<LaxFunctor>> {
    enumerate_strict_functors(a, e, &ub()).unwrap().into_iter().map(Arc::new).collect()
}

fn cleavage(p: &Arc<LaxFunctor>) -> bicatfib::fibration::Cleavage {
    FibrationContext::new(p).unwrap().synthesize(SeedOrder::Asc).unwrap()
}

#[test]
fn fiber_of_identity_is_a_point() {
    let b = fixtures::two_cell();
    let p = Arc::new(LaxFunctor::identity(b.clone()));
    for x in b.obs() {
        let f = fiber(&p, x, &ub()).unwrap();
        assert!(f.report.ok());
        assert_eq!(f.obs, vec![x]);
        assert_eq!(f.bicat.one_count(), 1);
        assert!(validate_bicategory(&f.bicat).unwrap().ok());
    }
}

#[test]
fn fiber_of_cod_is_the_slice() {
    let p = Arc::new(fixtures::cod());
    let sq = fixtures::square_poset();
    let ac = sq.arrow_category().unwrap();
    for c in sq.objects() {
        let f = fiber(&p, Ob::from_index(c.index()), &ub()).unwrap();
        assert!(validate_bicategory(&f.bicat).unwrap().ok());
        assert!(validate_functor(&f.inclusion).unwrap().ok());
        // objects: arrows x → c; 1-cells: x ≤ y ≤ c
        let below: Vec<Obj> = sq.objects().filter(|&x| leq(&sq, x, c)).collect();
        assert_eq!(f.obs.len(), below.len());
        for &o in &f.obs {
            assert_eq!(sq.tgt(ac.arrows[o.index()]), c);
        }
        let triangles = below
            .iter()
            .map(|&x| below.iter().filter(|&&y| leq(&sq, x, y)).count())
            .sum::<usize>();
        assert_eq!(f.bicat.one_count(), triangles);
        assert!(f.bicat.twos().all(|t| f.bicat.is_identity(t)));
    }
}

#[test]
fn fiber_of_proj_is_the_e_factor() {
    let p = Arc::new(fixtures::proj());
    let iso = Arc::new(fixtures::walking_iso());
    let r = fixtures::ld(&fixtures::walking_arrow());
    for b in p.target.obs() {
        let f = fiber(&p, b, &ub()).unwrap();
        let cat = Arc::new(ld_category(&f.bicat));
        let fun = CatFunctor {
            source: cat.clone(),
            target: iso.clone(),
            ob: f.obs.iter().map(|o| Obj::from_index(o.index() / r.ob_count())).collect(),
            mor: f.ones.iter().map(|(u, _)| Mor::from_index(u.index() / r.one_count())).collect(),
        };
        assert!(validate_cat_functor(&fun).ok());
        assert!(equivalence_1cat(&fun).is_ok());
    }
}

#[test]
fn cone_category_counts() {
    // terminal shape: the hom category
    let e = fixtures::two_cell();
    let t = fixtures::terminal();
    for y in e.obs() {
        let j = Arc::new(constant_functor(t.clone(), e.clone(), y).unwrap());
        for x in e.obs() {
            let cc = cone_category(&j, x, Mode::Oplax, &ub()).unwrap();
            let hom = e.hom_category(x, y).unwrap();
            assert_eq!(cc.category.object_count(), hom.category.object_count());
            assert_eq!(cc.category.morphism_count(), hom.category.morphism_count());
        }
    }
    // two-object discrete shape into the projection's total bicategory
    let p = fixtures::proj2();
    let e = p.source.clone();
    let a = fixtures::ld(&fixtures::discrete(2));
    for j in strict(&a, &e).into_iter().step_by(5) {
        let (j0, j1) = (j.ob(Ob::from_index(0)), j.ob(Ob::from_index(1)));
        for x in e.obs() {
            let cc = cone_category(&j, x, Mode::Pseudo, &ub()).unwrap();
            let (h0, h1) = (e.hom(x, j0), e.hom(x, j1));
            assert_eq!(cc.category.object_count(), h0.len() * h1.len());
            let twos = |h: &[One]| h.iter().map(|&u| h.iter().map(|&v| e.between(u, v).len()).sum::<usize>()).sum::<usize>();
            assert_eq!(cc.category.morphism_count(), twos(h0) * twos(h1));
        }
    }
    // empty shape: one cone, one morphism
    let empty = fixtures::ld(&fixtures::empty_category());
    let j = Arc::new(strict(&empty, &e).remove(0).as_ref().clone());
    let cc = cone_category(&j, Ob::from_index(0), Mode::Pseudo, &ub()).unwrap();
    assert_eq!((cc.category.object_count(), cc.category.morphism_count()), (1, 1));
}

#[test]
fn is_limit_agrees_with_classical_on_square() {
    let sq = Arc::new(fixtures::square_poset());
    let e = fixtures::ld(&sq);
    let mut counts = [0usize; 2];
    for (name, shape) in shapes() {
        let shape = Arc::new(shape);
        let a = fixtures::ld(&shape);
        for obs in assignments(shape.object_count(), sq.object_count()) {
            let Some(d) = thin_diagram(&shape, &sq, &obs) else { continue };
            let j = Arc::new(functor::locally_discrete_functor(&d, a.clone(), e.clone()).unwrap());
            for mode in [Mode::Pseudo, Mode::Oplax] {
                let prob = LimitProblem::new(&j, mode, &ub()).unwrap();
                for cc in &prob.cones {
                    for legs in &cc.cones {
                        let cert = prob.certify(cc.apex, legs).unwrap();
                        let legs1: Vec<Mor> = legs.comp1.iter().map(|u| Mor::from_index(u.index())).collect();
                        let oracle = is_limit_1cat(&d, Obj::from_index(cc.apex.index()), &legs1);
                        assert_eq!(cert.holds(), oracle, "{name} {obs:?}");
                        if !cert.holds() {
                            assert!(cert.counterexample().is_some());
                        }
                        counts[oracle as usize] += 1;
                    }
                }
                let found = prob.find().unwrap().map(|(c, _)| Obj::from_index(c.apex.index()));
                assert_eq!(found, find_limit_1cat(&d).map(|(x, _)| x), "{name}");
                if name == "product" {
                    assert_eq!(found, naive_meet(&sq, &obs));
                }
            }
        }
    }
    assert!(counts[0] > 0 && counts[1] > 0);
}

#[test]
fn terminal_identity_cone_is_a_limit() {
    let e = fixtures::two_cell();
    let t = fixtures::terminal();
    for y in e.obs() {
        let j = Arc::new(constant_functor(t.clone(), e.clone(), y).unwrap());
        let legs = Arc::new(identity_transformation(j.clone()).unwrap());
        let cone = Cone::new(y, legs, Mode::Pseudo).unwrap();
        assert!(is_limit(&j, &cone, &ub()).unwrap().0);
        let (found, _) = find_limit(&j, Mode::Pseudo, &ub()).unwrap().unwrap();
        assert!(limit_equivalence(&cone, &found, &ub()).unwrap().is_some());
    }
}

#[test]
fn no_limit_without_a_meet() {
    // the parallel pair has no product of x with y in the pseudo sense
    let e = parallel_pair();
    let a = fixtures::ld(&fixtures::discrete(2));
    let j = strict(&a, &e)
        .into_iter()
        .find(|j| j.ob(Ob::from_index(0)) != j.ob(Ob::from_index(1)))
        .unwrap();
    assert!(find_limit(&j, Mode::Pseudo, &ub()).unwrap().is_none());
}

#[test]
fn reindexing_along_identities() {
    for p in [Arc::new(fixtures::cod()), Arc::new(fixtures::proj()), Arc::new(fixtures::proj2())] {
        let lifter = LimitLifter::new(&p, &cleavage(&p), &ub()).unwrap();
        let (e, base) = (&*p.source, &*p.target);
        let a = fixtures::ld(&fixtures::walking_arrow());
        for b in base.obs() {
            let fib = lifter.fiber(b).unwrap();
            for d in strict(&a, &fib.bicat).into_iter().step_by(2) {
                let r = lifter.reindex_diagram(&fib, &d, base.id1(b)).unwrap();
                assert!(r.report.ok(), "{}", r.report);
                // F̄ lands over the constant at b, with Cartesian vertical equivalences to F
                assert!(r.f_bar.ob.iter().all(|&x| p.ob(x) == b));
                for &c in &r.tau_bar.comp1 {
                    assert!(groth::equivalence_1cell(e, c).is_some());
                    assert_eq!(p.one(c), base.id1(b));
                }
            }
        }
    }
}

#[test]
fn reindexing_in_cod_is_pullback() {
    let p = Arc::new(fixtures::cod());
    let sq = fixtures::square_poset();
    let ac = sq.arrow_category().unwrap();
    let lifter = LimitLifter::new(&p, &cleavage(&p), &ub()).unwrap();
    let base = &*p.target;
    let a = fixtures::ld(&fixtures::discrete(2));
    let mut n = 0;
    for f in base.ones() {
        let (b, b1) = (base.src1(f), base.tgt1(f));
        let fib = lifter.fiber(b1).unwrap();
        for d in strict(&a, &fib.bicat) {
            let r = lifter.reindex_diagram(&fib, &d, f).unwrap();
            assert!(r.report.ok());
            for x in a.obs() {
                let before = ac.arrows[r.f0.ob(x).index()];
                let after = ac.arrows[r.f_bar.ob(x).index()];
                assert_eq!(sq.tgt(after).index(), b.index());
                let m = naive_meet(&sq, &[sq.src(before), Obj::from_index(b.index())]);
                assert_eq!(Some(sq.src(after)), m);
                n += 1;
            }
        }
    }
    assert!(n > 0);
}

#[test]
fn reindexing_in_proj_keeps_the_e_factor() {
    let p = Arc::new(fixtures::proj());
    let r_ = fixtures::ld(&fixtures::walking_arrow());
    let lifter = LimitLifter::new(&p, &cleavage(&p), &ub()).unwrap();
    let base = &*p.target;
    let a = fixtures::ld(&fixtures::walking_arrow());
    for f in base.ones() {
        let fib = lifter.fiber(base.tgt1(f)).unwrap();
        for d in strict(&a, &fib.bicat) {
            let r = lifter.reindex_diagram(&fib, &d, f).unwrap();
            let left = |x: Ob| x.index() / r_.ob_count();
            let left1 = |u: One| u.index() / r_.one_count();
            for x in a.obs() {
                assert_eq!(left(r.f_bar.ob(x)), left(r.f0.ob(x)));
            }
            for h in a.ones() {
                assert_eq!(left1(r.f_bar.one(h)), left1(r.f0.one(h)));
            }
        }
    }
}

#[test]
fn preservation() {
    let shape = fixtures::ld(&fixtures::discrete(2));
    // identities and pullback in cod preserve fiber meets
    let p = Arc::new(fixtures::cod());
    let lifter = LimitLifter::new(&p, &cleavage(&p), &ub()).unwrap();
    let base = &*p.target;
    let mut n = 0;
    for f in base.ones() {
        let fib = lifter.fiber(base.tgt1(f)).unwrap();
        for d in strict(&shape, &fib.bicat) {
            let Some((cone, _)) = find_limit(&d, Mode::Pseudo, &ub()).unwrap() else { continue };
            let (ok, cert) = lifter.preserves_limit(f, &fib, &d, &cone).unwrap();
            assert!(ok && cert.holds());
            n += 1;
        }
    }
    assert!(n > 0);
    // the non-preserving fixture fails on (a, b) along 0<1
    let p = Arc::new(fixtures::nonpreserving());
    let lifter = LimitLifter::new(&p, &cleavage(&p), &ub()).unwrap();
    let (e, base) = (&*p.source, &*p.target);
    let f = base.find_one("0<1").unwrap();
    let fib = lifter.fiber(base.tgt1(f)).unwrap();
    let (xa, xb) = (e.find_ob("a").unwrap(), e.find_ob("b").unwrap());
    let d = strict(&shape, &fib.bicat)
        .into_iter()
        .find(|d| {
            (fib.obs[d.ob(Ob::from_index(0)).index()], fib.obs[d.ob(Ob::from_index(1)).index()]) == (xa, xb)
        })
        .unwrap();
    let (cone, _) = find_limit(&d, Mode::Pseudo, &ub()).unwrap().unwrap();
    let (ok, cert) = lifter.preserves_limit(f, &fib, &d, &cone).unwrap();
    assert!(!ok);
    assert!(cert.counterexample().is_some());
    let (ok, _) = lifter.preserves_limit(base.id1(base.tgt1(f)), &fib, &d, &cone).unwrap();
    assert!(ok);
}

/// Runs lift_limit on every diagram of the shape and compares with the
/// independent search in `E`. Returns (lifted, hypothesis failures).
fn lift_sweep(p: &Arc<LaxFunctor>, shape: &Arc<Bicategory>, mode: Mode) -> (usize, usize) {
    let lifter = LimitLifter::new(p, &cleavage(p), &ub()).unwrap();
    let (mut ok, mut skipped) = (0, 0);
    for j in strict(shape, &p.source) {
        let direct = find_limit(&j, mode, &ub()).unwrap();
        match lifter.lift_limit(&j, mode, None, None) {
            Ok(out) => {
                assert!(out.certificate.holds());
                assert!(is_limit(&j, &out.cone, &ub()).unwrap().0);
                let (found, _) = direct.expect("lifted a limit the search missed");
                assert!(limit_equivalence(&out.cone, &found, &ub()).unwrap().is_some());
                assert!(limit_equivalence(&found, &out.cone, &ub()).unwrap().is_some());
                if mode == Mode::Pseudo {
                    let e = &*p.source;
                    assert!(out.cone.legs.comp2.iter().all(|&c| e.is_invertible(c)));
                    assert!(out.lifted.tau_bar.comp2.iter().all(|&c| e.is_invertible(c)));
                }
                ok += 1;
            }
            Err(Error::Hypothesis(_)) => skipped += 1,
            Err(e) => panic!("{e}"),
        }
    }
    (ok, skipped)
}

#[test]
fn lifted_limits_match_search() {
    let disc = fixtures::ld(&fixtures::discrete(2));
    let cospan = fixtures::ld(&fixtures::cospan());
    for mode in [Mode::Pseudo, Mode::Oplax] {
        let (n, _) = lift_sweep(&Arc::new(fixtures::proj()), &disc, mode);
        assert!(n > 0);
        let (n, skipped) = lift_sweep(&Arc::new(fixtures::cod()), &disc, mode);
        assert!(n > 0 && skipped == 0);
    }
    let (n, skipped) = lift_sweep(&Arc::new(fixtures::cod()), &cospan, Mode::Pseudo);
    assert!(n > 0 && skipped == 0);
}

#[test]
fn lift_of_constant_terminal_diagram() {
    let p = Arc::new(fixtures::proj2());
    let t = fixtures::terminal();
    let lifter = LimitLifter::new(&p, &cleavage(&p), &ub()).unwrap();
    for y in p.source.obs() {
        let j = Arc::new(constant_functor(t.clone(), p.source.clone(), y).unwrap());
        let out = lifter.lift_limit(&j, Mode::Pseudo, None, None).unwrap();
        assert!(groth::equivalence_1cell(&p.source, out.cone.legs.at(Ob::from_index(0))).is_some());
    }
}

#[test]
fn hypothesis_failures_are_named() {
    // no product of a and b exists along 0<1
    let p = Arc::new(fixtures::nonpreserving());
    let e = &*p.source;
    let shape = fixtures::ld(&fixtures::discrete(2));
    let (xa, xb) = (e.find_ob("a").unwrap(), e.find_ob("b").unwrap());
    let j = strict(&shape, &p.source)
        .into_iter()
        .find(|j| (j.ob(Ob::from_index(0)), j.ob(Ob::from_index(1))) == (xa, xb))
        .unwrap();
    let r = lift_limit(&p, &cleavage(&p), &j, Mode::Pseudo, None, None, &ub());
    assert!(matches!(r, Err(Error::Hypothesis(LimitHypothesis::Preservation(ref s))) if s == "0<1"));
    assert!(find_limit(&j, Mode::Pseudo, &ub()).unwrap().is_none());

    // a supplied base cone that is not a limit
    let p = Arc::new(fixtures::cod());
    let cl = cleavage(&p);
    let j = strict(&shape, &p.source).remove(0);
    let jp = Arc::new(compose_functors(&j, &p).unwrap());
    let prob = LimitProblem::new(&jp, Mode::Pseudo, &ub()).unwrap();
    let bad = prob
        .cones
        .iter()
        .flat_map(|cc| cc.cones.iter().map(move |l| (cc.apex, l.clone())))
        .find(|(x, l)| !prob.certify(*x, l).unwrap().holds());
    if let Some((x, l)) = bad {
        let cone = Cone::new(x, l, Mode::Pseudo).unwrap();
        let r = lift_limit(&p, &cl, &j, Mode::Pseudo, Some(cone), None, &ub());
        assert!(matches!(r, Err(Error::Hypothesis(LimitHypothesis::BaseLimit))));
    }

    // a non-fibration
    let q = Arc::new(fixtures::codomain_fibration(&fixtures::cospan()).unwrap());
    assert!(matches!(
        LimitLifter::new(&q, &cl, &ub()),
        Err(Error::Hypothesis(LimitHypothesis::Fibration(_)))
    ));
}
