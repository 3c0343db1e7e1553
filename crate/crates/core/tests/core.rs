mod common;

use std::sync::Arc;

use bicatfib::classical::*;
use bicatfib::fixtures::{self, poset};
use bicatfib::*;
use common::*;
use itertools::Itertools;

#[test]
fn one_object_category_is_valid() {
    assert!(validate_category(&fixtures::terminal_category()).ok());
}

#[test]
fn square_poset_is_valid() {
    let sq = fixtures::square_poset();
    assert!(validate_category(&sq).ok());
    // [DERIVED] every composable triple, re-checked from the raw tables
    for (f, g, fg) in sq.comp_table() {
        for &h in sq.hom_from(sq.tgt(g)) {
            let lhs = sq.comp(fg, h);
            let rhs = sq.comp(g, h).and_then(|gh| sq.comp(f, gh));
            assert_eq!(lhs, rhs);
        }
    }
}

/// One object, morphisms `1, a, b`, with the given products of non-identities.
fn three_element(table: [usize; 4]) -> Category {
    let mut b = CategoryBuilder::new();
    let x = b.object("*");
    let m = [b.morphism("1", x, x), b.morphism("a", x, x), b.morphism("b", x, x)];
    b.set_identity(x, m[0]);
    for i in 0..3 {
        b.set_comp(m[0], m[i], m[i]);
        b.set_comp(m[i], m[0], m[i]);
    }
    for (k, (i, j)) in [(1, 1), (1, 2), (2, 1), (2, 2)].into_iter().enumerate() {
        b.set_comp(m[i], m[j], m[table[k]]);
    }
    b.build().unwrap()
}

#[test]
fn category_axioms_match_naive_monoid_check() {
    // [DERIVED] all 81 multiplication tables on {1, a, b}
    let mut monoids = 0;
    for t in (0..4).map(|_| 0..3usize).multi_cartesian_product() {
        let table = [t[0], t[1], t[2], t[3]];
        let c = three_element(table);
        let mul = |i: usize, j: usize| match (i, j) {
            (0, j) => j,
            (i, 0) => i,
            (i, j) => table[(i - 1) * 2 + (j - 1)],
        };
        let assoc = (0..27).all(|n| {
            let (i, j, k) = (n / 9, n / 3 % 3, n % 3);
            mul(mul(i, j), k) == mul(i, mul(j, k))
        });
        let r = validate_category(&c);
        assert_eq!(r.ok(), assoc, "{table:?}");
        assert!(r.ok() || r.has(Axiom::CategoryAssociativity));
        monoids += usize::from(assoc);
    }
    assert!(monoids > 0 && monoids < 81);
}

#[test]
fn redirected_comp_entry_is_reported() {
    let sq = fixtures::square_poset();
    let f = sq.find_morphism("bot<a").unwrap();
    let g = sq.find_morphism("a<top").unwrap();
    let mut b = sq.to_builder();
    b.set_comp(f, g, sq.find_morphism("bot<b").unwrap());
    let r = validate_category(&b.build().unwrap());
    assert!(r.has(Axiom::CategoryTyping));
    assert!(r.violations.iter().any(|v| v.axiom == Axiom::CategoryAssociativity
        && v.cells[..2] == ["bot<a".to_string(), "a<top".to_string()]));
}

#[test]
fn fixture_bicategories_validate() {
    for (name, b) in fixtures::validated_bicategories() {
        let r = validate_bicategory_with(&b, &ub()).unwrap();
        assert!(r.ok(), "{name}: {r}");
    }
}

#[test]
fn every_hom_category_is_a_category() {
    for (name, b) in fixtures::validated_bicategories() {
        for x in b.obs() {
            for y in b.obs() {
                let h = b.hom_category(x, y).unwrap();
                assert!(validate_category(&h.category).ok(), "{name}");
                assert_eq!(h.category.object_count(), b.hom(x, y).len());
            }
        }
    }
}

#[test]
fn two_cell_assoc_replaced_by_non_inverse_is_rejected() {
    let b = fixtures::two_cell();
    let theta = b.find_two("theta").unwrap();
    let mut bb = b.to_builder();
    let (f, g, h, _) = bb.assoc_entries()[0];
    bb.set_assoc(f, g, h, theta);
    let r = validate_bicategory(&bb.build().unwrap()).unwrap();
    assert!(!r.ok());
    assert!(
        r.has(Axiom::Typing) || r.has(Axiom::Pentagon) || r.has(Axiom::Invertibility),
        "{r}"
    );
}

#[test]
fn two_cell_mutations_all_rejected() {
    // every single-entry corruption of every table, exhaustively
    let b = fixtures::two_cell();
    let muts = mutations("two-cell", &b, usize::MAX);
    assert!(muts.len() > 20);
    for m in &muts {
        let r = validate_bicategory(&m.bicat).unwrap();
        assert!(!r.violations.is_empty(), "undetected: {}", m.label);
    }
}

#[test]
fn dangling_table_entry_is_structural() {
    let mut b = BicategoryBuilder::new();
    let x = b.object("x");
    let f = b.one("1_x", x, x);
    let a = b.two("1", f, f);
    b.set_id1(x, f);
    b.set_id2(f, a);
    b.set_vcomp(a, Two::from_index(7), a);
    assert!(matches!(b.build(), Err(Error::Structural(_))));
}

#[test]
fn size_guardrail_is_a_distinct_error() {
    let b = fixtures::cod().source;
    let tight = SizeBounds {
        max_obs: 2,
        ..SizeBounds::default()
    };
    assert!(matches!(
        validate_bicategory_with(&b, &tight),
        Err(Error::SizeLimit { .. })
    ));
}

#[test]
fn identities_are_cartesian() {
    let p = cod_1cat();
    for x in p.source.objects() {
        assert!(is_cartesian_morphism_1cat(&p, p.source.identity(x)));
    }
}

#[test]
fn cod_cartesian_morphisms_are_pullback_squares() {
    // [DERIVED] thin-category oracle on every square
    let p = cod_1cat();
    let mut yes = 0;
    for m in p.source.morphisms() {
        let expected = naive_cartesian_thin(&p, m);
        assert_eq!(is_cartesian_morphism_1cat(&p, m), expected, "{}", p.source.mor_name(m));
        yes += usize::from(expected);
    }
    assert!(yes > 0 && yes < p.source.morphism_count());
}

#[test]
fn cod_is_a_fibration() {
    assert!(is_grothendieck_fibration_1cat(&cod_1cat()));
    let id = CatFunctor::identity(Arc::new(fixtures::square_poset()));
    assert!(is_grothendieck_fibration_1cat(&id));
}

#[test]
fn arrow_into_iso_is_not_a_fibration() {
    let arrow = Arc::new(fixtures::walking_arrow());
    let iso = Arc::new(fixtures::walking_iso());
    let m = |n: &str| iso.find_morphism(n).unwrap();
    let mor = arrow
        .morphisms()
        .map(|a| match arrow.mor_name(a) {
            "1_0" => m("1_0"),
            "1_1" => m("1_1"),
            _ => m("u"),
        })
        .collect();
    let f = CatFunctor {
        source: arrow.clone(),
        target: iso.clone(),
        ob: vec![Obj::from_index(0), Obj::from_index(1)],
        mor,
    };
    assert!(validate_cat_functor(&f).ok());
    // [DERIVED] v : 1 → 0 = F(0) has no morphism of the source over it
    assert!(f.source.morphisms().all(|a| f.on_mor(a) != m("v")));
    assert!(!is_grothendieck_fibration_1cat(&f));
}

#[test]
fn rari_universal_lifts_of_cod() {
    let p = cod_1cat();
    let (e, b) = (&*p.source, &*p.target);
    let mut non_universal = 0;
    for c in e.objects() {
        // [DERIVED] hom sizes match over every c′; the maps are injective
        // because the arrow category of a poset is thin
        let expected = e
            .objects()
            .all(|c2| e.hom(c2, c).len() == b.hom(p.on_ob(c2), p.on_ob(c)).len());
        assert_eq!(is_rari_universal_1cat(&p, c), expected);
        non_universal += usize::from(!expected);
    }
    assert!(non_universal > 0);
    // identity arrows are rari-universal
    let sq = &*p.target;
    for x in sq.objects() {
        let c = e.find_object(sq.mor_name(sq.identity(x))).unwrap();
        assert!(is_rari_universal_1cat(&p, c));
    }
}

#[test]
fn rari_of_identity_is_identity() {
    let c = Arc::new(fixtures::square_poset());
    let id = CatFunctor::identity(c.clone());
    let g = rari_of_1cat(&id, &c.objects().collect::<Vec<_>>()).unwrap();
    assert_eq!(g, id);
}

#[test]
fn rari_of_cod_picks_identity_arrows() {
    let p = cod_1cat();
    let sq = p.target.clone();
    let choice: Vec<Obj> = sq
        .objects()
        .map(|x| p.source.find_object(sq.mor_name(sq.identity(x))).unwrap())
        .collect();
    let g = rari_of_1cat(&p, &choice).unwrap();
    assert_eq!(g.then(&p).unwrap(), CatFunctor::identity(sq));
    assert!(validate_cat_functor(&g).ok());
}

#[test]
fn rari_of_projection_pairs_with_the_top() {
    // walking arrow × walking arrow as a poset, projected to the second factor
    let names = ["00", "01", "10", "11"];
    let prod = Arc::new(poset(&names, |i, j| (i & 2) <= (j & 2) && (i & 1) <= (j & 1)));
    let arrow = Arc::new(fixtures::walking_arrow());
    let ob: Vec<Obj> = (0..4).map(|i| Obj::from_index(i & 1)).collect();
    let pr = thin_functor(&prod, &arrow, &ob);
    let choice = vec![Obj::from_index(2), Obj::from_index(3)];
    let g = rari_of_1cat(&pr, &choice).unwrap();
    assert_eq!(g.then(&pr).unwrap(), CatFunctor::identity(arrow.clone()));
    // a non-terminal first component is not rari-universal
    let bad = vec![Obj::from_index(0), Obj::from_index(1)];
    assert!(matches!(rari_of_1cat(&pr, &bad), Err(Error::Precondition(_))));
}

fn thin_functor(src: &Arc<Category>, tgt: &Arc<Category>, ob: &[Obj]) -> CatFunctor {
    thin_diagram(src, tgt, ob).expect("monotone")
}

#[test]
fn equivalences_of_categories() {
    let iso = Arc::new(fixtures::walking_iso());
    assert!(is_equivalence_1cat(&CatFunctor::identity(iso.clone())));
    // skeleton inclusion: the terminal category onto one of two isomorphic objects
    let one = Arc::new(fixtures::terminal_category());
    let incl = CatFunctor {
        source: one.clone(),
        target: iso.clone(),
        ob: vec![Obj::from_index(0)],
        mor: vec![iso.find_morphism("1_0").unwrap()],
    };
    assert!(is_equivalence_1cat(&incl));
    let two = Arc::new(fixtures::discrete(2));
    let constant = CatFunctor {
        source: one,
        target: two.clone(),
        ob: vec![Obj::from_index(0)],
        mor: vec![two.identity(Obj::from_index(0))],
    };
    assert_eq!(
        equivalence_1cat(&constant),
        Err(EquivalenceFailure::NotEssentiallySurjective(Obj::from_index(1)))
    );
}

#[test]
fn free_fibrations() {
    let one = Arc::new(fixtures::terminal_category());
    let ff = free_fibration_1cat(&CatFunctor::identity(one)).unwrap();
    assert_eq!(ff.category.object_count(), 1);

    let sq = Arc::new(fixtures::square_poset());
    let ff = free_fibration_1cat(&CatFunctor::identity(sq.clone())).unwrap();
    assert_eq!(ff.category.object_count(), sq.morphism_count());
    assert!(is_grothendieck_fibration_1cat(&ff.projection));

    // 1 → FIX-SQ at the top: arrows into the top
    let one = Arc::new(fixtures::terminal_category());
    let top = sq.find_object("top").unwrap();
    let pick = CatFunctor {
        source: one,
        target: sq.clone(),
        ob: vec![top],
        mor: vec![sq.identity(top)],
    };
    let ff = free_fibration_1cat(&pick).unwrap();
    assert_eq!(ff.category.object_count(), Category::into(&sq, top).len());
    assert!(is_grothendieck_fibration_1cat(&ff.projection));

    let ff = free_fibration_1cat(&cod_1cat()).unwrap();
    assert!(validate_category(&ff.category).ok());
    assert!(is_grothendieck_fibration_1cat(&ff.projection));
}

#[test]
fn classical_limits_in_square_are_meets() {
    // [DERIVED] independent meet computation on every pair
    let sq = Arc::new(fixtures::square_poset());
    let two = Arc::new(fixtures::discrete(2));
    for obs in assignments(2, sq.object_count()) {
        let d = thin_diagram(&two, &sq, &obs).unwrap();
        let found = find_limit_1cat(&d).map(|(x, _)| x);
        assert_eq!(found, naive_meet(&sq, &obs));
    }
}
