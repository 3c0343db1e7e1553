//! Rari-universal lifts along a strict functor, and the sections they
//! assemble into.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bicategory::Bicategory;
use crate::classical::{is_rari_universal_1cat, rari_of_1cat};
use crate::error::{Error, Result};
use crate::fibration::{SeedOrder, Verdict};
use crate::functor::{
    compose_functors, identity_transformation, postwhisker, validate_transformation,
    HomFunctor, HomFunctors, LaxFunctor, Mode, OplaxTransformation, Variance,
};
use crate::ids::{Ob, Obj, One, Two};
use crate::report::{Axiom, CoherenceReport};

/// Equivalence data `f : x → y`, `g : y → x`, `η : 1_x ≅ f·g`,
/// `ε : g·f ≅ 1_y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivalenceData {
    pub f: One,
    pub g: One,
    pub eta: Two,
    pub eps: Two,
}

impl EquivalenceData {
    /// Whether the data types correctly and both 2-cells are invertible.
    pub fn check(&self, e: &Bicategory) -> bool {
        let (x, y) = (e.src1(self.f), e.tgt1(self.f));
        if e.src1(self.g) != y || e.tgt1(self.g) != x {
            return false;
        }
        let (Some(fg), Some(gf)) = (e.hcomp1(self.f, self.g), e.hcomp1(self.g, self.f)) else {
            return false;
        };
        e.src2(self.eta) == e.id1(x)
            && e.tgt2(self.eta) == fg
            && e.src2(self.eps) == gf
            && e.tgt2(self.eps) == e.id1(y)
            && e.is_invertible(self.eta)
            && e.is_invertible(self.eps)
    }
}

/// Least (in the given order) pseudo-inverse data making `f` an equivalence.
pub fn equivalence_1cell(e: &Bicategory, f: One) -> Option<EquivalenceData> {
    let (x, y) = (e.src1(f), e.tgt1(f));
    e.hom(y, x).iter().find_map(|&g| {
        let fg = e.hcomp1(f, g)?;
        let gf = e.hcomp1(g, f)?;
        let eta = e.isos_between(e.id1(x), fg).next()?;
        let eps = e.isos_between(gf, e.id1(y)).next()?;
        Some(EquivalenceData { f, g, eta, eps })
    })
}

fn require_strict(q: &LaxFunctor) -> Result<()> {
    if q.strict {
        Ok(())
    } else {
        Err(Error::pre("the functor must be strict"))
    }
}

/// The rari-universal lifts of local object `d` in a hom functor, in order.
fn rari_lifts(hf: &HomFunctor, d: Obj, order: SeedOrder) -> Option<Obj> {
    let f = &hf.functor;
    let mut cands: Vec<Obj> = f.source.objects().filter(|&c| f.on_ob(c) == d).collect();
    if order == SeedOrder::Desc {
        cands.reverse();
    }
    cands.into_iter().find(|&c| is_rari_universal_1cat(f, c))
}

/// A rari-universal lift of `base` in `E(x, y)`, if one exists.
pub fn rari_universal_lift(
    homs: &HomFunctors,
    x: Ob,
    y: Ob,
    base: One,
    order: SeedOrder,
) -> Option<One> {
    let hf = homs.get(x, y);
    let d = hf.tgt.obj(base)?;
    rari_lifts(hf, d, order).map(|c| hf.src.one_of(c))
}

/// Whether `f` is a rari-universal lift of its image along `q_{x,y}`.
pub fn is_rari_universal_1cell(homs: &HomFunctors, f: One, e: &Bicategory) -> bool {
    let hf = homs.get(e.src1(f), e.tgt1(f));
    hf.src
        .obj(f)
        .is_some_and(|c| is_rari_universal_1cat(&hf.functor, c))
}

fn has_rari(hf: &HomFunctor) -> bool {
    hf.tgt
        .category
        .objects()
        .all(|d| rari_lifts(hf, d, SeedOrder::Asc).is_some())
}

/// Every hom functor `q_{e′,e}` has a rari.
pub fn is_2rari_universal(q: &LaxFunctor, e: Ob) -> Result<bool> {
    require_strict(q)?;
    for e1 in q.source.obs() {
        if !has_rari(&q.hom_functor(e1, e)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn is_2rari_in(homs: &HomFunctors, q: &LaxFunctor, e: Ob) -> bool {
    q.source.obs().all(|e1| has_rari(homs.get(e1, e)))
}

/// Objects and 1-cells chosen over each 0-cell and 1-cell of the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionChoices {
    pub ob: Vec<Ob>,
    pub one: Vec<One>,
}

/// Least 2-rari-universal lifts of each base 0-cell, then least
/// rari-universal lifts of each base 1-cell between them.
pub fn synthesize_choices(q: &LaxFunctor, order: SeedOrder) -> Result<SectionChoices> {
    require_strict(q)?;
    let homs = HomFunctors::new(q)?;
    let (e, b) = (&*q.source, &*q.target);
    let mut ob = Vec::with_capacity(b.ob_count());
    for x in b.obs() {
        let mut cands: Vec<Ob> = e.obs().filter(|&c| q.ob(c) == x).collect();
        if order == SeedOrder::Desc {
            cands.reverse();
        }
        let c = cands
            .into_iter()
            .find(|&c| is_2rari_in(&homs, q, c))
            .ok_or_else(|| {
                Error::pre(format!("no 2-rari-universal lift of {}", b.ob_name(x)))
            })?;
        ob.push(c);
    }
    let one = one_choices(&homs, q, &ob, order)?;
    Ok(SectionChoices { ob, one })
}

pub(crate) fn one_choices(
    homs: &HomFunctors,
    q: &LaxFunctor,
    ob: &[Ob],
    order: SeedOrder,
) -> Result<Vec<One>> {
    let b = &*q.target;
    b.ones()
        .map(|f| {
            let (x, y) = (ob[b.src1(f).index()], ob[b.tgt1(f).index()]);
            rari_universal_lift(homs, x, y, f, order).ok_or_else(|| {
                Error::pre(format!("no rari-universal lift of {}", b.one_name(f)))
            })
        })
        .collect()
}

/// The unique `θ : u ⇒ v` with `qθ = target`, given `v` rari-universal.
fn unique_preimage(homs: &HomFunctors, e: &Bicategory, u: One, v: One, target: Two) -> Result<Two> {
    let hf = homs.get(e.src1(u), e.tgt1(u));
    let mut found = e.between(u, v).iter().filter(|&&t| {
        hf.src
            .mor(t)
            .is_some_and(|m| hf.tgt.two_of(hf.functor.on_mor(m)) == target)
    });
    match (found.next(), found.next()) {
        (Some(&t), None) => Ok(t),
        (None, _) => Err(Error::incons("no preimage under a hom bijection")),
        _ => Err(Error::incons("several preimages under a hom bijection")),
    }
}

/// A lax section `s` of `q`: chosen cells, hom raris on 2-cells, and
/// constraints the unique preimages of identities.
pub fn build_lax_section(q: &Arc<LaxFunctor>, choices: &SectionChoices) -> Result<LaxFunctor> {
    require_strict(q)?;
    let (e, b) = (&q.source, &q.target);
    if choices.ob.len() != b.ob_count() || choices.one.len() != b.one_count() {
        return Err(Error::pre("choices must cover every 0-cell and 1-cell of the base"));
    }
    let homs = HomFunctors::new(q)?;
    for x in b.obs() {
        let c = choices.ob[x.index()];
        if c.index() >= e.ob_count() || q.ob(c) != x {
            return Err(Error::pre(format!("chosen lift of {} is not over it", b.ob_name(x))));
        }
        if !is_2rari_in(&homs, q, c) {
            return Err(Error::pre(format!(
                "chosen lift {} of {} is not 2-rari-universal",
                e.ob_name(c),
                b.ob_name(x)
            )));
        }
    }
    for f in b.ones() {
        let u = choices.one[f.index()];
        let (x, y) = (choices.ob[b.src1(f).index()], choices.ob[b.tgt1(f).index()]);
        if u.index() >= e.one_count() || e.src1(u) != x || e.tgt1(u) != y || q.one(u) != f {
            return Err(Error::pre(format!("chosen lift of {} is not over it", b.one_name(f))));
        }
        if !is_rari_universal_1cell(&homs, u, e) {
            return Err(Error::pre(format!(
                "chosen lift {} of {} is not rari-universal",
                e.one_name(u),
                b.one_name(f)
            )));
        }
    }

    // 2-cells through the hom raris
    let mut map2 = vec![Two(0); b.two_count()];
    for x in b.obs() {
        for y in b.obs() {
            let (sx, sy) = (choices.ob[x.index()], choices.ob[y.index()]);
            let hf = homs.get(sx, sy);
            let choice: Vec<Obj> = hf
                .tgt
                .ones
                .iter()
                .map(|&f| hf.src.obj(choices.one[f.index()]).expect("checked above"))
                .collect();
            let rari = rari_of_1cat(&hf.functor, &choice)?;
            for &t in &hf.tgt.twos {
                let m = hf.tgt.mor(t).expect("local 2-cell");
                map2[t.index()] = hf.src.two_of(rari.on_mor(m));
            }
        }
    }

    let unit: Vec<Two> = b
        .obs()
        .map(|x| {
            let sx = choices.ob[x.index()];
            unique_preimage(&homs, e, e.id1(sx), choices.one[b.id1(x).index()], b.id2(b.id1(x)))
        })
        .collect::<Result<_>>()?;
    let mut comp = HashMap::new();
    for f in b.ones() {
        for &g in b.out_of(b.tgt1(f)) {
            let sfg = e.c(choices.one[f.index()], choices.one[g.index()])?;
            let target = choices.one[b.c(f, g)?.index()];
            comp.insert((f, g), unique_preimage(&homs, e, sfg, target, b.id2(b.c(f, g)?))?);
        }
    }
    let strict = unit.iter().chain(comp.values()).all(|&t| e.is_identity(t));
    Ok(LaxFunctor {
        source: b.clone(),
        target: e.clone(),
        variance: Variance::Lax,
        strict,
        ob: choices.ob.clone(),
        map1: choices.one.clone(),
        map2,
        unit,
        comp,
    })
}

/// For each 2-rari-universal `e`, `1_e` is rari-universal over `1_{qe}`.
pub fn check_identity_condition(q: &LaxFunctor) -> Result<Verdict> {
    require_strict(q)?;
    let homs = HomFunctors::new(q)?;
    let e = &*q.source;
    for x in e.obs() {
        if is_2rari_in(&homs, q, x) && !is_rari_universal_1cell(&homs, e.id1(x), e) {
            return Ok(Verdict::no(format!(
                "identity of 2-rari-universal {} is not rari-universal",
                e.ob_name(x)
            )));
        }
    }
    Ok(Verdict::yes())
}

/// Composites of rari-universal 1-cells are rari-universal.
pub fn check_composition_condition(q: &LaxFunctor) -> Result<Verdict> {
    composition_condition(q, false)
}

/// The composition condition restricted to 1-cells between 2-rari-universal
/// 0-cells, which is all the lifting of equivalences uses.
pub fn check_composition_condition_2rari(q: &LaxFunctor) -> Result<Verdict> {
    composition_condition(q, true)
}

fn composition_condition(q: &LaxFunctor, only_2rari: bool) -> Result<Verdict> {
    require_strict(q)?;
    let homs = HomFunctors::new(q)?;
    let e = &*q.source;
    let keep: Vec<bool> = e.obs().map(|x| !only_2rari || is_2rari_in(&homs, q, x)).collect();
    let rari: Vec<bool> = e
        .ones()
        .map(|f| {
            keep[e.src1(f).index()]
                && keep[e.tgt1(f).index()]
                && is_rari_universal_1cell(&homs, f, e)
        })
        .collect();
    for f in e.ones().filter(|f| rari[f.index()]) {
        for &g in e.out_of(e.tgt1(f)) {
            if rari[g.index()] && !is_rari_universal_1cell(&homs, e.c(f, g)?, e) {
                return Ok(Verdict::no(format!(
                    "{} and {} are rari-universal but their composite is not",
                    e.one_name(f),
                    e.one_name(g)
                )));
            }
        }
    }
    Ok(Verdict::yes())
}

/// Checks that `s` is a section of `q` with invertible constraints; when it
/// is, also returns `s` relabelled as a pseudofunctor.
pub fn upgrade_section_to_pseudo(
    q: &LaxFunctor,
    s: &LaxFunctor,
) -> Result<(CoherenceReport, Option<LaxFunctor>)> {
    let mut r = section_report(q, s)?;
    let e = &*s.target;
    for x in s.source.obs() {
        if !e.is_invertible(s.unit[x.index()]) {
            r.push(Axiom::ConstraintInvertibility, vec![s.source.ob_name(x).into()]);
        }
    }
    let mut pairs: Vec<_> = s.comp.iter().collect();
    pairs.sort();
    for (&(f, g), &c) in pairs {
        if !e.is_invertible(c) {
            r.push(
                Axiom::ConstraintInvertibility,
                vec![s.source.one_name(f).into(), s.source.one_name(g).into()],
            );
        }
    }
    let pseudo = r.ok().then(|| LaxFunctor {
        variance: Variance::Pseudo,
        ..s.clone()
    });
    Ok((r, pseudo))
}

/// `s · q` is the identity on all tables.
fn section_report(q: &LaxFunctor, s: &LaxFunctor) -> Result<CoherenceReport> {
    let mut r = CoherenceReport::new();
    let sq = compose_functors(s, q)?;
    let id = LaxFunctor::identity(q.target.clone());
    let b = &*q.target;
    for x in b.obs() {
        if sq.ob(x) != x || sq.unit[x.index()] != id.unit[x.index()] {
            r.push(Axiom::Section, vec![b.ob_name(x).into()]);
        }
    }
    for f in b.ones() {
        if sq.one(f) != f {
            r.push(Axiom::Section, vec![b.one_name(f).into()]);
        }
    }
    for t in b.twos() {
        if sq.two(t) != t {
            r.push(Axiom::Section, vec![b.two_name(t).into()]);
        }
    }
    let mut pairs: Vec<_> = id.comp.iter().collect();
    pairs.sort();
    for (k, &c) in pairs {
        if sq.comp.get(k) != Some(&c) {
            r.push(Axiom::Section, vec![b.one_name(k.0).into(), b.one_name(k.1).into()]);
        }
    }
    Ok(r)
}

/// Lifts an equivalence `b ≃ b′` of the base to one between 2-rari-universal
/// `e`, `e′` over them.
pub fn lift_equivalence(
    q: &LaxFunctor,
    e0: Ob,
    e1: Ob,
    data: &EquivalenceData,
) -> Result<EquivalenceData> {
    require_strict(q)?;
    let (e, b) = (&*q.source, &*q.target);
    if !data.check(b) {
        return Err(Error::pre("not equivalence data in the base"));
    }
    if q.ob(e0) != b.src1(data.f) || q.ob(e1) != b.tgt1(data.f) {
        return Err(Error::pre("the 0-cells do not lie over the equivalence"));
    }
    let homs = HomFunctors::new(q)?;
    if !is_2rari_in(&homs, q, e0) || !is_2rari_in(&homs, q, e1) {
        return Err(Error::pre("the 0-cells must be 2-rari-universal"));
    }
    let lift = |x, y, f| {
        rari_universal_lift(&homs, x, y, f, SeedOrder::Asc)
            .ok_or_else(|| Error::incons("a 2-rari-universal 0-cell has no rari-universal lift"))
    };
    let f = lift(e0, e1, data.f)?;
    let g = lift(e1, e0, data.g)?;
    let fg = e.c(f, g)?;
    let gf = e.c(g, f)?;
    let eta = unique_preimage(&homs, e, e.id1(e0), fg, data.eta)?;
    let eps = unique_preimage(&homs, e, gf, e.id1(e1), data.eps)?;
    let out = EquivalenceData { f, g, eta, eps };
    if !out.check(e) {
        return Err(Error::incons("lifted 2-cells are not invertible"));
    }
    Ok(out)
}

/// The comparison `τ : s ⇒ s′` between two sections: `τ_b` a rari-universal
/// lift of `1_b`, `τ(f)` the unique lift of `r_f | ℓ_f⁻¹`. The report covers
/// pseudonaturality, that every component is an equivalence, and that
/// `τ · q` is the identity transformation.
pub fn section_equivalence(
    q: &LaxFunctor,
    s: &Arc<LaxFunctor>,
    s1: &Arc<LaxFunctor>,
) -> Result<(OplaxTransformation, CoherenceReport)> {
    require_strict(q)?;
    let (e, b) = (&*q.source, &*q.target);
    if !section_report(q, s)?.ok() || !section_report(q, s1)?.ok() {
        return Err(Error::pre("both functors must be sections of q"));
    }
    let homs = HomFunctors::new(q)?;
    let mut comp1 = Vec::with_capacity(b.ob_count());
    for x in b.obs() {
        let (sx, s1x) = (s.ob(x), s1.ob(x));
        comp1.push(
            rari_universal_lift(&homs, sx, s1x, b.id1(x), SeedOrder::Asc).ok_or_else(|| {
                Error::pre(format!("no rari-universal lift of the identity at {}", b.ob_name(x)))
            })?,
        );
    }
    let mut comp2 = Vec::with_capacity(b.one_count());
    for f in b.ones() {
        let (x, y) = (b.src1(f), b.tgt1(f));
        let src = e.c(s.one(f), comp1[y.index()])?;
        let tgt = e.c(comp1[x.index()], s1.one(f))?;
        let canon = b.v(b.runit(f), b.inv(b.lunit(f))?)?;
        comp2.push(unique_preimage(&homs, e, src, tgt, canon)?);
    }
    let tau = OplaxTransformation {
        source: s.clone(),
        target: s1.clone(),
        comp1,
        comp2,
    };
    let mut r = validate_transformation(&tau, Mode::Pseudo)?;
    for x in b.obs() {
        if equivalence_1cell(e, tau.at(x)).is_none() {
            r.push(Axiom::Equivalence, vec![e.one_name(tau.at(x)).into()]);
        }
    }
    let tq = postwhisker(&tau, q)?;
    let id = identity_transformation(tq.source.clone())?;
    if tq.comp1 != id.comp1 || tq.comp2 != id.comp2 {
        r.push(Axiom::WhiskerTriviality, vec![]);
    }
    Ok((tau, r))
}
