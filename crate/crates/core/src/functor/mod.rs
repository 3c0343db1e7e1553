//! Lax, oplax and pseudo functors between tabulated bicategories.
//!
//! Constraints are stored with a direction fixed by the variance:
//! lax and pseudo functors carry `η_x : 1_{Fx} ⇒ F(1_x)` and
//! `μ_{f,g} : Ff · Fg ⇒ F(f · g)`; oplax functors carry `ε_x : F(1_x) ⇒ 1_{Fx}`
//! and `δ_{f,g} : F(f · g) ⇒ Ff · Fg`.

mod enumerate;
mod modification;
mod transformation;

pub use enumerate::{
    enumerate_modifications, enumerate_strict_functors, enumerate_transformations, tables_equal,
};
pub use modification::{identity_modification, validate_icon, validate_modification, Icon, Modification};
pub use transformation::{
    identity_transformation, postwhisker, postwhisker_onto, postwhisker_modification, validate_transformation,
    vcomp_transformations, Mode, OplaxTransformation,
};

use std::collections::HashMap;
use std::sync::Arc;

use crate::bicategory::{Bicategory, HomCategory};
use crate::category::CatFunctor;
use crate::error::{Error, Result};
use crate::ids::{Ob, One, Two};
use crate::report::{Axiom, CoherenceReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variance {
    Lax,
    Oplax,
    Pseudo,
}

impl Variance {
    pub fn name(self) -> &'static str {
        match self {
            Variance::Lax => "lax",
            Variance::Oplax => "oplax",
            Variance::Pseudo => "pseudo",
        }
    }

    pub fn parse(s: &str) -> Option<Variance> {
        match s {
            "lax" => Some(Variance::Lax),
            "oplax" => Some(Variance::Oplax),
            "pseudo" => Some(Variance::Pseudo),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaxFunctor {
    pub source: Arc<Bicategory>,
    pub target: Arc<Bicategory>,
    pub variance: Variance,
    pub strict: bool,
    pub ob: Vec<Ob>,
    pub map1: Vec<One>,
    pub map2: Vec<Two>,
    /// Per 0-cell of the source.
    pub unit: Vec<Two>,
    /// Per composable pair of source 1-cells.
    pub comp: HashMap<(One, One), Two>,
}

pub(crate) fn same_bicategory(a: &Arc<Bicategory>, b: &Arc<Bicategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn same_functor(a: &Arc<LaxFunctor>, b: &Arc<LaxFunctor>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl LaxFunctor {
    /// The strict identity functor.
    pub fn identity(b: Arc<Bicategory>) -> LaxFunctor {
        let mut comp = HashMap::new();
        for f in b.ones() {
            for &g in b.out_of(b.tgt1(f)) {
                comp.insert((f, g), b.id2(b.hcomp1(f, g).expect("built bicategory")));
            }
        }
        LaxFunctor {
            ob: b.obs().collect(),
            map1: b.ones().collect(),
            map2: b.twos().collect(),
            unit: b.obs().map(|x| b.id2(b.id1(x))).collect(),
            comp,
            variance: Variance::Pseudo,
            strict: true,
            source: b.clone(),
            target: b,
        }
    }

    #[inline]
    pub fn ob(&self, x: Ob) -> Ob {
        self.ob[x.index()]
    }
    #[inline]
    pub fn one(&self, f: One) -> One {
        self.map1[f.index()]
    }
    #[inline]
    pub fn two(&self, a: Two) -> Two {
        self.map2[a.index()]
    }

    /// Stored comp constraint; errors on a non-composable pair.
    pub fn comp_at(&self, f: One, g: One) -> Result<Two> {
        self.comp.get(&(f, g)).copied().ok_or_else(|| {
            Error::incons(format!(
                "no composition constraint at ({}, {})",
                self.source.one_name(f),
                self.source.one_name(g)
            ))
        })
    }

    fn flip(&self, a: Two) -> Result<Two> {
        self.target.inverse(a).ok_or_else(|| {
            Error::Variance(format!(
                "{} constraint {} is not invertible",
                self.variance.name(),
                self.target.two_name(a)
            ))
        })
    }

    /// `1_{Fx} ⇒ F(1_x)`, inverting an oplax constraint if needed.
    pub fn lax_unit(&self, x: Ob) -> Result<Two> {
        match self.variance {
            Variance::Oplax => self.flip(self.unit[x.index()]),
            _ => Ok(self.unit[x.index()]),
        }
    }
    /// `Ff · Fg ⇒ F(f · g)`, inverting an oplax constraint if needed.
    pub fn lax_comp(&self, f: One, g: One) -> Result<Two> {
        let c = self.comp_at(f, g)?;
        match self.variance {
            Variance::Oplax => self.flip(c),
            _ => Ok(c),
        }
    }
    /// `F(1_x) ⇒ 1_{Fx}`, inverting a lax constraint if needed.
    pub fn oplax_unit(&self, x: Ob) -> Result<Two> {
        match self.variance {
            Variance::Oplax => Ok(self.unit[x.index()]),
            _ => self.flip(self.unit[x.index()]),
        }
    }
    /// `F(f · g) ⇒ Ff · Fg`, inverting a lax constraint if needed.
    pub fn oplax_comp(&self, f: One, g: One) -> Result<Two> {
        let c = self.comp_at(f, g)?;
        match self.variance {
            Variance::Oplax => Ok(c),
            _ => self.flip(c),
        }
    }

    /// Whether the constraints point in the lax direction.
    pub fn is_lax_direction(&self) -> bool {
        self.variance != Variance::Oplax
    }

    /// Table sizes and ids; everything else is left to [`validate_functor`].
    pub fn check_structure(&self) -> Result<()> {
        let (a, b) = (&*self.source, &*self.target);
        let bad = |what: &str| Err(Error::Structural(format!("functor {what}")));
        if self.ob.len() != a.ob_count()
            || self.map1.len() != a.one_count()
            || self.map2.len() != a.two_count()
            || self.unit.len() != a.ob_count()
        {
            return bad("tables do not cover the source");
        }
        if self.ob.iter().any(|x| x.index() >= b.ob_count())
            || self.map1.iter().any(|f| f.index() >= b.one_count())
            || self.map2.iter().any(|t| t.index() >= b.two_count())
            || self.unit.iter().any(|t| t.index() >= b.two_count())
            || self.comp.values().any(|t| t.index() >= b.two_count())
        {
            return bad("references an undeclared target cell");
        }
        let mut pairs = 0;
        for f in a.ones() {
            for &g in a.out_of(a.tgt1(f)) {
                pairs += 1;
                if !self.comp.contains_key(&(f, g)) {
                    return Err(Error::Structural(format!(
                        "functor has no composition constraint at ({}, {})",
                        a.one_name(f),
                        a.one_name(g)
                    )));
                }
            }
        }
        if pairs != self.comp.len() {
            return bad("has composition constraints at non-composable pairs");
        }
        Ok(())
    }

    /// The hom functor `F_{x,y} : A(x, y) → B(Fx, Fy)`.
    pub fn hom_functor(&self, x: Ob, y: Ob) -> Result<HomFunctor> {
        let src = self.source.hom_category(x, y)?;
        let tgt = self.target.hom_category(self.ob(x), self.ob(y))?;
        let mut ob = Vec::with_capacity(src.ones.len());
        for &f in &src.ones {
            ob.push(
                tgt.obj(self.one(f))
                    .ok_or_else(|| Error::incons("1-cell image outside its hom"))?,
            );
        }
        let mut mor = Vec::with_capacity(src.twos.len());
        for &t in &src.twos {
            mor.push(
                tgt.mor(self.two(t))
                    .ok_or_else(|| Error::incons("2-cell image outside its hom"))?,
            );
        }
        let functor = CatFunctor {
            source: src.category.clone(),
            target: tgt.category.clone(),
            ob,
            mor,
        };
        Ok(HomFunctor { src, tgt, functor })
    }
}

/// A hom functor with the bookkeeping to move between local and global ids.
#[derive(Debug, Clone)]
pub struct HomFunctor {
    pub src: HomCategory,
    pub tgt: HomCategory,
    pub functor: CatFunctor,
}

/// All hom functors of `p`, keyed by source 0-cell pair.
#[derive(Debug, Clone)]
pub struct HomFunctors {
    pub homs: HashMap<(Ob, Ob), HomFunctor>,
}

impl HomFunctors {
    pub fn new(p: &LaxFunctor) -> Result<HomFunctors> {
        let mut homs = HashMap::new();
        for x in p.source.obs() {
            for y in p.source.obs() {
                homs.insert((x, y), p.hom_functor(x, y)?);
            }
        }
        Ok(HomFunctors { homs })
    }

    pub fn get(&self, x: Ob, y: Ob) -> &HomFunctor {
        &self.homs[&(x, y)]
    }
}

pub fn validate_functor(p: &LaxFunctor) -> Result<CoherenceReport> {
    p.check_structure()?;
    let (a, b) = (&*p.source, &*p.target);
    let mut r = CoherenceReport::new();
    let n1 = |f: One| a.one_name(f).to_string();
    let n2 = |t: Two| a.two_name(t).to_string();

    // typing
    for f in a.ones() {
        let pf = p.one(f);
        if b.src1(pf) != p.ob(a.src1(f)) || b.tgt1(pf) != p.ob(a.tgt1(f)) {
            r.push(Axiom::FunctorTyping, vec![n1(f)]);
        }
    }
    for t in a.twos() {
        let pt = p.two(t);
        if b.src2(pt) != p.one(a.src2(t)) || b.tgt2(pt) != p.one(a.tgt2(t)) {
            r.push(Axiom::FunctorTyping, vec![n2(t)]);
        }
    }
    let lax = p.is_lax_direction();
    for x in a.obs() {
        let u = p.unit[x.index()];
        let (one_fx, f_one) = (b.id1(p.ob(x)), p.one(a.id1(x)));
        let ok = if lax {
            b.src2(u) == one_fx && b.tgt2(u) == f_one
        } else {
            b.src2(u) == f_one && b.tgt2(u) == one_fx
        };
        if !ok {
            r.push(Axiom::FunctorTyping, vec![a.ob_name(x).into(), "unit".into()]);
        }
    }
    for (&(f, g), &c) in &p.comp {
        let pfg = a.hcomp1(f, g).map(|fg| p.one(fg));
        let fpg = b.hcomp1(p.one(f), p.one(g));
        let ok = if lax {
            Some(b.src2(c)) == fpg && Some(b.tgt2(c)) == pfg
        } else {
            Some(b.src2(c)) == pfg && Some(b.tgt2(c)) == fpg
        };
        if !ok {
            r.push(Axiom::FunctorTyping, vec![n1(f), n1(g), "comp".into()]);
        }
    }
    if !r.ok() {
        return Ok(r);
    }

    // hom functoriality
    for f in a.ones() {
        if p.two(a.id2(f)) != b.id2(p.one(f)) {
            r.push(Axiom::HomFunctoriality, vec![n1(f)]);
        }
    }
    for (s, t, st) in a.vcomp_entries() {
        if b.vcomp(p.two(s), p.two(t)) != Some(p.two(st)) {
            r.push(Axiom::HomFunctoriality, vec![n2(s), n2(t)]);
        }
    }

    let c = |f: One, g: One| p.comp[&(f, g)];
    // naturality of the composition constraint
    for (s, t, st) in a.hcomp2_entries() {
        let (f, g) = (a.src2(s), a.src2(t));
        let (f1, g1) = (a.tgt2(s), a.tgt2(t));
        let ps_pt = b.hcomp2(p.two(s), p.two(t));
        let ok = if lax {
            let lhs = ps_pt.and_then(|x| b.vcomp(x, c(f1, g1)));
            lhs.is_some() && lhs == b.vcomp(c(f, g), p.two(st))
        } else {
            let lhs = ps_pt.and_then(|x| b.vcomp(c(f, g), x));
            lhs.is_some() && lhs == b.vcomp(p.two(st), c(f1, g1))
        };
        if !ok {
            r.push(Axiom::ConstraintNaturality, vec![n2(s), n2(t)]);
        }
    }

    // associativity
    for (f, g, h) in a.composable_triples() {
        let (pf, pg, ph) = (p.one(f), p.one(g), p.one(h));
        let ok = (|| {
            let fg = a.hcomp1(f, g)?;
            let gh = a.hcomp1(g, h)?;
            let lhs;
            let rhs;
            if lax {
                lhs = b.vseq_opt(&[
                    b.hcomp2(c(f, g), b.id2(ph))?,
                    c(fg, h),
                    p.two(a.assoc(f, g, h)?),
                ])?;
                rhs = b.vseq_opt(&[
                    b.assoc(pf, pg, ph)?,
                    b.hcomp2(b.id2(pf), c(g, h))?,
                    c(f, gh),
                ])?;
            } else {
                lhs = b.vseq_opt(&[
                    p.two(a.assoc(f, g, h)?),
                    c(f, gh),
                    b.hcomp2(b.id2(pf), c(g, h))?,
                ])?;
                rhs = b.vseq_opt(&[
                    c(fg, h),
                    b.hcomp2(c(f, g), b.id2(ph))?,
                    b.assoc(pf, pg, ph)?,
                ])?;
            }
            Some(lhs == rhs)
        })();
        if ok != Some(true) {
            r.push(Axiom::FunctorAssociativity, vec![n1(f), n1(g), n1(h)]);
        }
    }

    // unity
    for f in a.ones() {
        let (x, y) = (a.src1(f), a.tgt1(f));
        let pf = p.one(f);
        let u = |z: Ob| p.unit[z.index()];
        let left = (|| {
            let lhs = b.lunit(pf);
            let chain = if lax {
                b.vseq_opt(&[
                    b.hcomp2(u(x), b.id2(pf))?,
                    c(a.id1(x), f),
                    p.two(a.lunit(f)),
                ])?
            } else {
                // F(ℓ_f) = δ_{1,f} | (ε · id) | ℓ_{Ff}
                let rhs = b.vseq_opt(&[c(a.id1(x), f), b.hcomp2(u(x), b.id2(pf))?, lhs])?;
                return Some(rhs == p.two(a.lunit(f)));
            };
            Some(chain == lhs)
        })();
        if left != Some(true) {
            r.push(Axiom::FunctorLeftUnity, vec![n1(f)]);
        }
        let right = (|| {
            let lhs = b.runit(pf);
            if lax {
                let chain = b.vseq_opt(&[
                    b.hcomp2(b.id2(pf), u(y))?,
                    c(f, a.id1(y)),
                    p.two(a.runit(f)),
                ])?;
                Some(chain == lhs)
            } else {
                let rhs = b.vseq_opt(&[c(f, a.id1(y)), b.hcomp2(b.id2(pf), u(y))?, lhs])?;
                Some(rhs == p.two(a.runit(f)))
            }
        })();
        if right != Some(true) {
            r.push(Axiom::FunctorRightUnity, vec![n1(f)]);
        }
    }

    if p.variance == Variance::Pseudo {
        for x in a.obs() {
            if !b.is_invertible(p.unit[x.index()]) {
                r.push(Axiom::ConstraintInvertibility, vec![a.ob_name(x).into()]);
            }
        }
        for (f, g) in sorted_pairs(&p.comp) {
            if !b.is_invertible(c(f, g)) {
                r.push(Axiom::ConstraintInvertibility, vec![n1(f), n1(g)]);
            }
        }
    }
    if p.strict {
        for x in a.obs() {
            if !b.is_identity(p.unit[x.index()]) {
                r.push(Axiom::Strictness, vec![a.ob_name(x).into()]);
            }
        }
        for (f, g) in sorted_pairs(&p.comp) {
            if !b.is_identity(c(f, g)) {
                r.push(Axiom::Strictness, vec![n1(f), n1(g)]);
            }
        }
    }
    Ok(r)
}

fn sorted_pairs(m: &HashMap<(One, One), Two>) -> Vec<(One, One)> {
    let mut v: Vec<_> = m.keys().copied().collect();
    v.sort();
    v
}

/// `F` then `G`. Lax-direction variances compose to lax (pseudo if both
/// are), oplax with oplax or pseudo gives oplax.
pub fn compose_functors(f: &LaxFunctor, g: &LaxFunctor) -> Result<LaxFunctor> {
    if !same_bicategory(&f.target, &g.source) {
        return Err(Error::ShapeMismatch(
            "composite functor: target of the first is not the source of the second".into(),
        ));
    }
    use Variance::*;
    let variance = match (f.variance, g.variance) {
        (Pseudo, Pseudo) => Pseudo,
        (Lax | Pseudo, Lax | Pseudo) => Lax,
        (Oplax | Pseudo, Oplax | Pseudo) => Oplax,
        (x, y) => {
            return Err(Error::Variance(format!(
                "cannot compose a {} functor with a {} functor",
                x.name(),
                y.name()
            )))
        }
    };
    let (a, c) = (&*f.source, &*g.target);
    let mut unit = Vec::with_capacity(a.ob_count());
    for x in a.obs() {
        let u = if variance == Oplax {
            c.v(g.two(f.oplax_unit(x)?), g.oplax_unit(f.ob(x))?)?
        } else {
            c.v(g.lax_unit(f.ob(x))?, g.two(f.lax_unit(x)?))?
        };
        unit.push(u);
    }
    let mut comp = HashMap::new();
    for (&(h, k), _) in &f.comp {
        let (fh, fk) = (f.one(h), f.one(k));
        let m = if variance == Oplax {
            c.v(g.two(f.oplax_comp(h, k)?), g.oplax_comp(fh, fk)?)?
        } else {
            c.v(g.lax_comp(fh, fk)?, g.two(f.lax_comp(h, k)?))?
        };
        comp.insert((h, k), m);
    }
    Ok(LaxFunctor {
        source: f.source.clone(),
        target: g.target.clone(),
        variance,
        strict: f.strict && g.strict,
        ob: f.ob.iter().map(|&x| g.ob(x)).collect(),
        map1: f.map1.iter().map(|&h| g.one(h)).collect(),
        map2: f.map2.iter().map(|&t| g.two(t)).collect(),
        unit,
        comp,
    })
}

/// The pseudofunctor `A → E` constant at `x`: every 1-cell goes to `1_x`,
/// every 2-cell to its identity, with `μ = ℓ_{1_x}` and `η` the identity.
pub fn constant_functor(a: Arc<Bicategory>, e: Arc<Bicategory>, x: Ob) -> Result<LaxFunctor> {
    if x.index() >= e.ob_count() {
        return Err(Error::pre("constant functor at an undeclared 0-cell"));
    }
    let one = e.id1(x);
    let id = e.id2(one);
    let lu = e.lunit(one);
    let mut comp = HashMap::new();
    for f in a.ones() {
        for &g in a.out_of(a.tgt1(f)) {
            comp.insert((f, g), lu);
        }
    }
    Ok(LaxFunctor {
        ob: vec![x; a.ob_count()],
        map1: vec![one; a.one_count()],
        map2: vec![id; a.two_count()],
        unit: vec![id; a.ob_count()],
        comp,
        variance: Variance::Pseudo,
        strict: e.is_identity(lu),
        source: a,
        target: e,
    })
}

/// A strict functor between locally discrete bicategories induced by a
/// functor of categories; cell ids follow [`Bicategory::locally_discrete`].
pub fn locally_discrete_functor(
    f: &CatFunctor,
    source: Arc<Bicategory>,
    target: Arc<Bicategory>,
) -> Result<LaxFunctor> {
    if source.one_count() != f.source.morphism_count()
        || target.one_count() != f.target.morphism_count()
    {
        return Err(Error::ShapeMismatch(
            "bicategories are not the locally discrete ones on the functor's categories".into(),
        ));
    }
    let ob: Vec<Ob> = f.ob.iter().map(|x| Ob::from_index(x.index())).collect();
    let map1: Vec<One> = f.mor.iter().map(|m| One::from_index(m.index())).collect();
    let map2 = f.mor.iter().map(|m| Two::from_index(m.index())).collect();
    let unit = ob.iter().map(|&y| target.id2(target.id1(y))).collect();
    let mut comp = HashMap::new();
    for g in source.ones() {
        for &h in source.out_of(source.tgt1(g)) {
            let gh = source.c(g, h)?;
            comp.insert((g, h), target.id2(map1[gh.index()]));
        }
    }
    Ok(LaxFunctor {
        source,
        target,
        variance: Variance::Pseudo,
        strict: true,
        ob,
        map1,
        map2,
        unit,
        comp,
    })
}

/// Product of two functors, using the cell numbering of [`Bicategory::product`].
pub fn product_functor(
    f: &LaxFunctor,
    g: &LaxFunctor,
    source: Arc<Bicategory>,
    target: Arc<Bicategory>,
) -> Result<LaxFunctor> {
    let (fs, gs, ft, gt) = (&*f.source, &*g.source, &*f.target, &*g.target);
    if source.ob_count() != fs.ob_count() * gs.ob_count()
        || target.ob_count() != ft.ob_count() * gt.ob_count()
        || f.variance != g.variance
    {
        return Err(Error::ShapeMismatch("product functor".into()));
    }
    let po = |x: Ob, y: Ob| Bicategory::product_ob(gt, x, y);
    let p1 = |x: One, y: One| Bicategory::product_one(gt, x, y);
    let p2 = |x: Two, y: Two| Bicategory::product_two(gt, x, y);
    let mut ob = Vec::new();
    for x in fs.obs() {
        for y in gs.obs() {
            ob.push(po(f.ob(x), g.ob(y)));
        }
    }
    let mut map1 = Vec::new();
    for x in fs.ones() {
        for y in gs.ones() {
            map1.push(p1(f.one(x), g.one(y)));
        }
    }
    let mut map2 = Vec::new();
    for x in fs.twos() {
        for y in gs.twos() {
            map2.push(p2(f.two(x), g.two(y)));
        }
    }
    let mut unit = Vec::new();
    for x in fs.obs() {
        for y in gs.obs() {
            unit.push(p2(f.unit[x.index()], g.unit[y.index()]));
        }
    }
    let mut comp = HashMap::new();
    for (&(h, k), &c) in &f.comp {
        for (&(h2, k2), &c2) in &g.comp {
            comp.insert(
                (Bicategory::product_one(gs, h, h2), Bicategory::product_one(gs, k, k2)),
                p2(c, c2),
            );
        }
    }
    Ok(LaxFunctor {
        source,
        target,
        variance: f.variance,
        strict: f.strict && g.strict,
        ob,
        map1,
        map2,
        unit,
        comp,
    })
}

/// The strict projection `L × R → R` (or onto `L` when `onto_right` is false).
pub fn product_projection(
    l: &Bicategory,
    r: &Bicategory,
    product: Arc<Bicategory>,
    factor: Arc<Bicategory>,
    onto_right: bool,
) -> Result<LaxFunctor> {
    let pick = |i: usize, n: usize| if onto_right { i % n } else { i / n };
    let (n0, n1, n2) = (r.ob_count(), r.one_count(), r.two_count());
    if product.ob_count() != l.ob_count() * n0 {
        return Err(Error::ShapeMismatch("projection from a non-product".into()));
    }
    let ob = product.obs().map(|x| Ob::from_index(pick(x.index(), n0))).collect();
    let map1: Vec<One> = product.ones().map(|f| One::from_index(pick(f.index(), n1))).collect();
    let map2 = product.twos().map(|t| Two::from_index(pick(t.index(), n2))).collect();
    let unit = product.obs().map(|x| factor.id2(factor.id1(Ob::from_index(pick(x.index(), n0))))).collect();
    let mut comp = HashMap::new();
    for f in product.ones() {
        for &g in product.out_of(product.tgt1(f)) {
            let fg = product.c(f, g)?;
            comp.insert((f, g), factor.id2(map1[fg.index()]));
        }
    }
    Ok(LaxFunctor {
        source: product,
        target: factor,
        variance: Variance::Pseudo,
        strict: true,
        ob,
        map1,
        map2,
        unit,
        comp,
    })
}
