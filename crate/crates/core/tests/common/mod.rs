//! Shared helpers and independent oracles for the integration tests. The
//! oracles here work directly on posets and raw tables, without going
//! through the library's own checkers.

#![allow(dead_code)]

use std::sync::Arc;

use bicatfib::fixtures;
use bicatfib::{
    Bicategory, BicategoryBuilder, CatFunctor, Category, LaxFunctor, Mor, Obj, One, SizeBounds,
    Two,
};

pub fn ub() -> SizeBounds {
    SizeBounds::unbounded()
}

/// The functor of categories underlying a strict functor between locally
/// discrete bicategories; 1-cell ids and morphism ids coincide there.
pub fn underlying(p: &LaxFunctor, src: Arc<Category>, tgt: Arc<Category>) -> CatFunctor {
    CatFunctor {
        ob: p.ob.iter().map(|x| Obj::from_index(x.index())).collect(),
        mor: p.map1.iter().map(|f| Mor::from_index(f.index())).collect(),
        source: src,
        target: tgt,
    }
}

/// `cod : FIX-SQ^→ → FIX-SQ` as a functor of categories.
pub fn cod_1cat() -> CatFunctor {
    let sq = fixtures::square_poset();
    let arrow = sq.arrow_category().unwrap();
    CatFunctor {
        ob: arrow.arrows.iter().map(|&a| sq.tgt(a)).collect(),
        mor: arrow.squares.iter().map(|&(_, t)| t).collect(),
        source: Arc::new(arrow.category),
        target: Arc::new(sq),
    }
}

pub fn leq(c: &Category, x: Obj, y: Obj) -> bool {
    !c.hom(x, y).is_empty()
}

/// Greatest lower bound in a preorder, first in id order.
pub fn naive_meet(c: &Category, xs: &[Obj]) -> Option<Obj> {
    let lower: Vec<Obj> = c
        .objects()
        .filter(|&z| xs.iter().all(|&x| leq(c, z, x)))
        .collect();
    lower
        .iter()
        .copied()
        .find(|&g| lower.iter().all(|&z| leq(c, z, g)))
}

/// Cartesian morphisms of a functor between thin categories: `x → y` is
/// Cartesian iff every `z ≤ y` with `pz ≤ px` already has `z ≤ x`.
pub fn naive_cartesian_thin(p: &CatFunctor, m: Mor) -> bool {
    let (e, b) = (&*p.source, &*p.target);
    let (x, y) = (e.src(m), e.tgt(m));
    e.objects()
        .filter(|&z| leq(e, z, y) && leq(b, p.on_ob(z), p.on_ob(x)))
        .all(|z| leq(e, z, x))
}

/// The unique morphism `x → y` of a thin category.
pub fn thin_mor(c: &Category, x: Obj, y: Obj) -> Option<Mor> {
    c.hom(x, y).first().copied()
}

/// A diagram in a thin category given by its object assignment, or `None`
/// when the assignment is not monotone.
pub fn thin_diagram(shape: &Arc<Category>, c: &Arc<Category>, obs: &[Obj]) -> Option<CatFunctor> {
    let mut mor = Vec::new();
    for m in shape.morphisms() {
        let (a, b) = (obs[shape.src(m).index()], obs[shape.tgt(m).index()]);
        mor.push(thin_mor(c, a, b)?);
    }
    Some(CatFunctor {
        source: shape.clone(),
        target: c.clone(),
        ob: obs.to_vec(),
        mor,
    })
}

/// All object assignments `shape → c`, in lexicographic order.
pub fn assignments(n_shape: usize, n: usize) -> Vec<Vec<Obj>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n_shape {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..n).map(move |i| {
                    let mut w = v.clone();
                    w.push(Obj::from_index(i));
                    w
                })
            })
            .collect();
    }
    out
}

/// A single-entry corruption of a bicategory's tables.
pub struct Mutation {
    pub label: String,
    pub bicat: Bicategory,
}

/// Another 2-cell to write into a table: a different parallel one when
/// there is one, else the next id.
/// `None` when the bicategory has no other cell to swap in.
fn other_two(b: &Bicategory, a: Two) -> Option<Two> {
    let parallel = b.between(b.src2(a), b.tgt2(a)).iter().copied().find(|&c| c != a);
    let next = Two::from_index((a.index() + 1) % b.two_count());
    parallel.or((next != a).then_some(next))
}

fn other_one(b: &Bicategory, f: One) -> Option<One> {
    let parallel = b.hom(b.src1(f), b.tgt1(f)).iter().copied().find(|&g| g != f);
    let next = One::from_index((f.index() + 1) % b.one_count());
    parallel.or((next != f).then_some(next))
}

/// Up to `per_table` evenly spread corruptions of each of the id2, vcomp,
/// hcomp1, hcomp2, assoc, lunit and runit tables. Corruptions the builder
/// rejects structurally are dropped.
pub fn mutations(name: &str, b: &Bicategory, per_table: usize) -> Vec<Mutation> {
    fn spread<T: Copy>(v: &[T], k: usize) -> Vec<T> {
        if v.is_empty() {
            return Vec::new();
        }
        let step = (v.len() / k).max(1);
        v.iter().copied().step_by(step).take(k).collect()
    }
    let base = b.to_builder();
    let mut edits: Vec<(String, Box<dyn Fn(&mut BicategoryBuilder)>)> = Vec::new();
    let id2: Vec<(One, Two)> = b.ones().map(|f| (f, b.id2(f))).collect();
    for (f, a) in spread(&id2, per_table) {
        let Some(c) = other_two(b, a) else { continue };
        edits.push((format!("{name}: id2[{}]", b.one_name(f)), Box::new(move |bb| bb.set_id2(f, c))));
    }
    for (x, y, r) in spread(&base.vcomp_entries(), per_table) {
        let Some(c) = other_two(b, r) else { continue };
        edits.push((format!("{name}: vcomp[{},{}]", b.two_name(x), b.two_name(y)), Box::new(move |bb| bb.set_vcomp(x, y, c))));
    }
    for (f, g, r) in spread(&base.hcomp1_entries(), per_table) {
        let Some(h) = other_one(b, r) else { continue };
        edits.push((format!("{name}: hcomp1[{},{}]", b.one_name(f), b.one_name(g)), Box::new(move |bb| bb.set_hcomp1(f, g, h))));
    }
    for (x, y, r) in spread(&base.hcomp2_entries(), per_table) {
        let Some(c) = other_two(b, r) else { continue };
        edits.push((format!("{name}: hcomp2[{},{}]", b.two_name(x), b.two_name(y)), Box::new(move |bb| bb.set_hcomp2(x, y, c))));
    }
    for (f, g, h, r) in spread(&base.assoc_entries(), per_table) {
        let Some(c) = other_two(b, r) else { continue };
        edits.push((format!("{name}: assoc[{},{},{}]", b.one_name(f), b.one_name(g), b.one_name(h)), Box::new(move |bb| bb.set_assoc(f, g, h, c))));
    }
    for (f, r) in spread(&base.lunit_entries(), per_table) {
        let Some(c) = other_two(b, r) else { continue };
        edits.push((format!("{name}: lunit[{}]", b.one_name(f)), Box::new(move |bb| bb.set_lunit(f, c))));
    }
    for (f, r) in spread(&base.runit_entries(), per_table) {
        let Some(c) = other_two(b, r) else { continue };
        edits.push((format!("{name}: runit[{}]", b.one_name(f)), Box::new(move |bb| bb.set_runit(f, c))));
    }
    edits
        .into_iter()
        .filter_map(|(label, edit)| {
            let mut bb = base.clone();
            edit(&mut bb);
            bb.build().ok().map(|bicat| Mutation { label, bicat })
        })
        .collect()
}

/// Every fixture bicategory with its mutations.
pub fn mutation_suite(per_table: usize) -> Vec<Mutation> {
    fixtures::validated_bicategories()
        .iter()
        .flat_map(|(name, b)| mutations(name, b, per_table))
        .collect()
}

/// The category whose objects and morphisms are the 0- and 1-cells of a
/// locally discrete bicategory, composed with its 1-cell table.
pub fn ld_category(b: &Bicategory) -> Category {
    let mut c = bicatfib::CategoryBuilder::new();
    for x in b.obs() {
        c.object(b.ob_name(x));
    }
    for f in b.ones() {
        c.morphism(
            b.one_name(f),
            Obj::from_index(b.src1(f).index()),
            Obj::from_index(b.tgt1(f).index()),
        );
    }
    for x in b.obs() {
        c.set_identity(Obj::from_index(x.index()), Mor::from_index(b.id1(x).index()));
    }
    for (f, g, fg) in b.hcomp1_entries() {
        c.set_comp(
            Mor::from_index(f.index()),
            Mor::from_index(g.index()),
            Mor::from_index(fg.index()),
        );
    }
    c.build().expect("locally discrete bicategory")
}

/// The functor of categories underlying a strict functor between locally
/// discrete bicategories, with both categories rebuilt from the tables.
pub fn underlying_ld(p: &LaxFunctor) -> CatFunctor {
    underlying(
        p,
        Arc::new(ld_category(&p.source)),
        Arc::new(ld_category(&p.target)),
    )
}

/// A 2-cell `(a, c)` of a product `L × R` is Cartesian for the projection
/// onto `R` exactly when `a` is invertible.
pub fn projection_cartesian(l: &Bicategory, r: &Bicategory, s: Two) -> bool {
    l.is_invertible(Two::from_index(s.index() / r.two_count()))
}

/// `x ⇉ y` with parallel `f, g`, as a locally discrete bicategory.
pub fn parallel_pair() -> Arc<Bicategory> {
    let mut c = bicatfib::CategoryBuilder::new();
    let (x, y) = (c.object("x"), c.object("y"));
    let ix = c.morphism("1_x", x, x);
    let iy = c.morphism("1_y", y, y);
    let f = c.morphism("f", x, y);
    let g = c.morphism("g", x, y);
    c.set_identity(x, ix);
    c.set_identity(y, iy);
    for (a, b, ab) in [(ix, ix, ix), (iy, iy, iy), (ix, f, f), (ix, g, g), (f, iy, f), (g, iy, g)] {
        c.set_comp(a, b, ab);
    }
    fixtures::ld(&c.build().unwrap())
}
