//! The fixture corpus: small categories, bicategories and fibrations used by
//! the tests, benches and the command line.

use std::sync::Arc;

use crate::bicategory::{Bicategory, BicategoryBuilder};
use crate::category::{CatFunctor, Category, CategoryBuilder};
use crate::error::Result;
use crate::functor::{locally_discrete_functor, product_projection, LaxFunctor};
use crate::ids::{Mor, Obj};

/// A finite poset as a category; `leq` must already be reflexive and
/// transitive. Identities are named `1_x`, other morphisms `x<y`.
pub fn poset(names: &[&str], leq: impl Fn(usize, usize) -> bool) -> Category {
    let mut b = CategoryBuilder::new();
    for n in names {
        b.object(*n);
    }
    let n = names.len();
    let mut mor = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j || leq(i, j) {
                let name = if i == j {
                    format!("1_{}", names[i])
                } else {
                    format!("{}<{}", names[i], names[j])
                };
                mor[i][j] = Some(b.morphism(name, Obj::from_index(i), Obj::from_index(j)));
            }
        }
    }
    for (i, row) in mor.iter().enumerate() {
        b.set_identity(Obj::from_index(i), row[i].expect("reflexive"));
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if let (Some(f), Some(g)) = (mor[i][j], mor[j][k]) {
                    let fg = mor[i][k].expect("poset relation must be transitive");
                    b.set_comp(f, g, fg);
                }
            }
        }
    }
    b.build().expect("poset fixture")
}

pub fn terminal_category() -> Category {
    poset(&["*"], |_, _| true)
}

pub fn empty_category() -> Category {
    CategoryBuilder::new().build().expect("empty category")
}

/// `0 → 1`.
pub fn walking_arrow() -> Category {
    poset(&["0", "1"], |i, j| i <= j)
}

/// Discrete category on `n` objects named `0..n`.
pub fn discrete(n: usize) -> Category {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    poset(&refs, |i, j| i == j)
}

/// `l → m ← r`.
pub fn cospan() -> Category {
    poset(&["l", "r", "m"], |i, j| i == j || j == 2)
}

/// The commutative square `⊥ ≤ a, b ≤ ⊤`, a lattice with all meets.
pub fn square_poset() -> Category {
    poset(&["bot", "a", "b", "top"], |i, j| {
        i == j || i == 0 || j == 3
    })
}

/// Two objects with mutually inverse morphisms `u : 0 → 1`, `v : 1 → 0`.
pub fn walking_iso() -> Category {
    let mut b = CategoryBuilder::new();
    let (x, y) = (b.object("0"), b.object("1"));
    let ix = b.morphism("1_0", x, x);
    let iy = b.morphism("1_1", y, y);
    let u = b.morphism("u", x, y);
    let v = b.morphism("v", y, x);
    b.set_identity(x, ix);
    b.set_identity(y, iy);
    let table = [
        (ix, ix, ix),
        (iy, iy, iy),
        (ix, u, u),
        (u, iy, u),
        (iy, v, v),
        (v, ix, v),
        (u, v, ix),
        (v, u, iy),
    ];
    for (f, g, h) in table {
        b.set_comp(f, g, h);
    }
    b.build().expect("walking iso")
}

/// Locally discrete bicategory on a category.
pub fn ld(c: &Category) -> Arc<Bicategory> {
    Arc::new(Bicategory::locally_discrete(c).expect("locally discrete fixture"))
}

/// The terminal bicategory.
pub fn terminal() -> Arc<Bicategory> {
    ld(&terminal_category())
}

/// Two 0-cells `x, y`, parallel 1-cells `f, g : x → y` and one non-identity
/// 2-cell `θ : f ⇒ g`; a strict 2-category. Also the walking 2-cell shape.
pub fn two_cell() -> Arc<Bicategory> {
    let mut b = BicategoryBuilder::new();
    let (x, y) = (b.object("x"), b.object("y"));
    let ix = b.one("1_x", x, x);
    let iy = b.one("1_y", y, y);
    let f = b.one("f", x, y);
    let g = b.one("g", x, y);
    let iix = b.two("1_1_x", ix, ix);
    let iiy = b.two("1_1_y", iy, iy);
    let i_f = b.two("1_f", f, f);
    let i_g = b.two("1_g", g, g);
    let th = b.two("theta", f, g);
    b.set_id1(x, ix);
    b.set_id1(y, iy);
    for (c, i) in [(ix, iix), (iy, iiy), (f, i_f), (g, i_g)] {
        b.set_id2(c, i);
        b.set_lunit(c, i);
        b.set_runit(c, i);
    }
    for (s, t, st) in [
        (iix, iix, iix),
        (iiy, iiy, iiy),
        (i_f, i_f, i_f),
        (i_g, i_g, i_g),
        (i_f, th, th),
        (th, i_g, th),
    ] {
        b.set_vcomp(s, t, st);
    }
    // 1-cell composition: identities are strict units
    for (s, t, st) in [(ix, ix, ix), (iy, iy, iy), (ix, f, f), (ix, g, g), (f, iy, f), (g, iy, g)] {
        b.set_hcomp1(s, t, st);
    }
    let twos_x = [iix];
    let twos_y = [iiy];
    let twos_xy = [i_f, i_g, th];
    for &s in &twos_x {
        for &t in &twos_x {
            b.set_hcomp2(s, t, iix);
        }
        for &t in &twos_xy {
            b.set_hcomp2(s, t, t);
        }
    }
    for &s in &twos_xy {
        for &t in &twos_y {
            b.set_hcomp2(s, t, s);
        }
    }
    for &s in &twos_y {
        for &t in &twos_y {
            b.set_hcomp2(s, t, iiy);
        }
    }
    let ids = [(ix, iix), (iy, iiy), (f, i_f), (g, i_g)];
    let id_of = |c| ids.iter().find(|(o, _)| *o == c).map(|(_, i)| *i).unwrap();
    // strict: the associator is the identity on the composite, which is the
    // one non-identity factor if there is one
    let composable = b.hcomp1_entries();
    for &(p, q, _) in &composable {
        for &(q2, r, _) in &composable {
            if q2 == q {
                let whole = [p, q, r].into_iter().find(|&c| c == f || c == g).unwrap_or(p);
                b.set_assoc(p, q, r, id_of(whole));
            }
        }
    }
    Arc::new(b.build().expect("two-cell fixture"))
}

/// The identity on a bicategory, as a fibration fixture.
pub fn identity_fibration(b: Arc<Bicategory>) -> LaxFunctor {
    LaxFunctor::identity(b)
}

/// `cod : LD(C→) → LD(C)`.
pub fn codomain_fibration(c: &Category) -> Result<LaxFunctor> {
    let arrow = c.arrow_category()?;
    let total = Arc::new(arrow.category);
    let mut ob = Vec::new();
    for &a in &arrow.arrows {
        ob.push(c.tgt(a));
    }
    let mor: Vec<Mor> = arrow.squares.iter().map(|&(_, t)| t).collect();
    let cod = CatFunctor {
        source: total.clone(),
        target: Arc::new(c.clone()),
        ob,
        mor,
    };
    locally_discrete_functor(&cod, ld(&total), ld(c))
}

/// FIX-COD: the codomain fibration over the commutative square.
pub fn cod() -> LaxFunctor {
    codomain_fibration(&square_poset()).expect("codomain fixture")
}

/// Projection `e × b → b` onto the second factor.
pub fn projection(e: Arc<Bicategory>, b: Arc<Bicategory>) -> LaxFunctor {
    let product = Arc::new(Bicategory::product(&e, &b).expect("product fixture"));
    product_projection(&e, &b, product, b.clone(), true).expect("projection fixture")
}

/// FIX-PROJ: `LD(walking iso) × LD(walking arrow) → LD(walking arrow)`.
pub fn proj() -> LaxFunctor {
    projection(ld(&walking_iso()), ld(&walking_arrow()))
}

/// `two_cell() × LD(walking arrow) → LD(walking arrow)`: a projection whose
/// fibres carry a genuine 2-cell.
pub fn proj2() -> LaxFunctor {
    projection(two_cell(), ld(&walking_arrow()))
}

/// `two_cell() × two_cell() → two_cell()`, where `(θ, 1)` is not Cartesian.
pub fn proj_two_cell() -> LaxFunctor {
    projection(two_cell(), two_cell())
}

/// A fibration of posets over `0 → 1` whose reindexing does not preserve
/// products: the fiber over `1` is the span `m ≤ a, b` (so `a × b = m`), the
/// fiber over `0` is `x ≤ y`, and reindexing sends `a, b ↦ y`, `m ↦ x`.
pub fn nonpreserving() -> LaxFunctor {
    // 0..3 over 1, 3..5 over 0; `q ≤ p` across fibers iff `q ≤ f*(p)`.
    let names = ["m", "a", "b", "x", "y"];
    let reindex = [3, 4, 4];
    let leq = |i: usize, j: usize| match (i < 3, j < 3) {
        (true, true) => i == j || i == 0,
        (false, false) => i <= j,
        (false, true) => i <= reindex[j],
        (true, false) => false,
    };
    let total = Arc::new(poset(&names, leq));
    let base = Arc::new(walking_arrow());
    let ob: Vec<Obj> = (0..5).map(|i| Obj::from_index(usize::from(i < 3))).collect();
    let mor = total
        .morphisms()
        .map(|m| {
            let (s, t) = (ob[total.src(m).index()], ob[total.tgt(m).index()]);
            base.hom(s, t)[0]
        })
        .collect();
    let f = CatFunctor {
        source: total.clone(),
        target: base.clone(),
        ob,
        mor,
    };
    locally_discrete_functor(&f, ld(&total), ld(&base)).expect("non-preserving fixture")
}

/// The six bicategories every validator run starts from.
pub fn validated_bicategories() -> Vec<(&'static str, Arc<Bicategory>)> {
    vec![
        ("terminal", terminal()),
        ("ld-square", ld(&square_poset())),
        ("two-cell", two_cell()),
        ("cod-total", cod().source),
        ("proj-total", proj().source),
        ("proj2-total", proj2().source),
    ]
}
