//! Functors into a comma bicategory as triples, and the section `s^L`.

use std::collections::HashMap;
use std::sync::Arc;

use super::comma::{arrow_bicategory, oplax_comma, p_l_between, Comma};
use super::section::{build_lax_section, upgrade_section_to_pseudo, SectionChoices};
use crate::bounds::SizeBounds;
use crate::error::{Error, Result};
use crate::fibration::{Cleavage, FibrationContext, LiftProblem};
use crate::functor::{compose_functors, LaxFunctor, OplaxTransformation};
use crate::ids::One;

/// A functor into `B/p` seen as `(F, G, τ : F ⇒ G·p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub f: Arc<LaxFunctor>,
    pub g: Arc<LaxFunctor>,
    pub tau: OplaxTransformation,
}

/// `X ↦ (X·d₀, X·d₁, τ)` where `τ(a)` and `τ(h)` are the third components
/// of `X(a)` and `X(h)`.
pub fn unpack(comma: &Comma, x: &Arc<LaxFunctor>) -> Result<Triple> {
    if !Arc::ptr_eq(&x.target, &comma.bicat) && *x.target != *comma.bicat {
        return Err(Error::ShapeMismatch("functor does not land in the comma bicategory".into()));
    }
    let f = Arc::new(compose_functors(x, &comma.d0)?);
    let g = Arc::new(compose_functors(x, &comma.d1)?);
    let gp = Arc::new(compose_functors(&g, &comma.p)?);
    let a = &*x.source;
    let tau = OplaxTransformation {
        source: f.clone(),
        target: gp,
        comp1: a.obs().map(|o| comma.ob(x.ob(o)).2).collect(),
        comp2: a.ones().map(|h| comma.one(x.one(h)).2).collect(),
    };
    Ok(Triple { f, g, tau })
}

/// Inverse of [`unpack`]. `F` and `G` must have the same variance.
pub fn pack(comma: &Comma, t: &Triple) -> Result<LaxFunctor> {
    let (f, g) = (&*t.f, &*t.g);
    if f.variance != g.variance {
        return Err(Error::Variance(format!(
            "cannot pair a {} functor with a {} functor",
            f.variance.name(),
            g.variance.name()
        )));
    }
    if *f.source != *g.source
        || *f.target != *comma.p.target
        || *g.target != *comma.p.source
        || *t.tau.source.source != *f.source
    {
        return Err(Error::ShapeMismatch("triple does not match the comma bicategory".into()));
    }
    let gp = compose_functors(g, &comma.p)?;
    let (ts, tt) = (&*t.tau.source, &*t.tau.target);
    if ts.ob != f.ob || ts.map1 != f.map1 || tt.ob != gp.ob || tt.map1 != gp.map1 {
        return Err(Error::ShapeMismatch("τ does not run from F to G·p".into()));
    }
    let a = &*f.source;
    let c = &*comma.bicat;
    let miss = |what: &str| Error::ShapeMismatch(format!("{what} is not a cell of the comma bicategory"));
    let ob: Vec<_> = a
        .obs()
        .map(|o| comma.ob_of(f.ob(o), g.ob(o), t.tau.at(o)).ok_or_else(|| miss("an object")))
        .collect::<Result<_>>()?;
    let map1: Vec<_> = a
        .ones()
        .map(|h| {
            let (x, y) = (ob[a.src1(h).index()], ob[a.tgt1(h).index()]);
            comma
                .one_of(x, y, f.one(h), g.one(h), t.tau.at1(h))
                .ok_or_else(|| miss("a 1-cell"))
        })
        .collect::<Result<_>>()?;
    let map2: Vec<_> = a
        .twos()
        .map(|k| {
            let (u, v) = (map1[a.src2(k).index()], map1[a.tgt2(k).index()]);
            comma.two_of(u, v, f.two(k), g.two(k)).ok_or_else(|| miss("a 2-cell"))
        })
        .collect::<Result<_>>()?;
    let lax = f.is_lax_direction();
    let orient = |u: One, v: One| if lax { (u, v) } else { (v, u) };
    let mut unit = Vec::with_capacity(a.ob_count());
    for o in a.obs() {
        let (u, v) = orient(c.id1(ob[o.index()]), map1[a.id1(o).index()]);
        unit.push(
            comma
                .two_of(u, v, f.unit[o.index()], g.unit[o.index()])
                .ok_or_else(|| miss("a unit constraint"))?,
        );
    }
    let mut comp = HashMap::new();
    for (&(h, k), &mf) in &f.comp {
        let (u, v) = orient(c.c(map1[h.index()], map1[k.index()])?, map1[a.c(h, k)?.index()]);
        let cell = comma
            .two_of(u, v, mf, g.comp_at(h, k)?)
            .ok_or_else(|| miss("a composition constraint"))?;
        comp.insert((h, k), cell);
    }
    Ok(LaxFunctor {
        source: f.source.clone(),
        target: comma.bicat.clone(),
        variance: f.variance,
        strict: f.strict && g.strict,
        ob,
        map1,
        map2,
        unit,
        comp,
    })
}

/// A strict lift `X̄` of `X` along `p^L` as the pair `(F̄, τ̄ : F̄ ⇒ G)`.
pub fn lift_to_pair(arrows: &Comma, xbar: &Arc<LaxFunctor>) -> Result<(Arc<LaxFunctor>, OplaxTransformation)> {
    let t = unpack(arrows, xbar)?;
    Ok((t.f, t.tau))
}

/// Inverse of [`lift_to_pair`]; `G` is read off the target of `τ̄`.
pub fn pair_to_lift(arrows: &Comma, fbar: &Arc<LaxFunctor>, tau: &OplaxTransformation) -> Result<LaxFunctor> {
    pack(
        arrows,
        &Triple {
            f: fbar.clone(),
            g: tau.target.clone(),
            tau: tau.clone(),
        },
    )
}

/// `E^I`, `B/p` and `p^L` between them.
#[derive(Debug, Clone)]
pub struct InducedArrow {
    pub arrows: Comma,
    pub comma: Comma,
    pub functor: Arc<LaxFunctor>,
}

/// Builds `E^I`, `B/p` and `p^L` for a strict `p`.
pub fn p_l(p: &Arc<LaxFunctor>, bounds: &SizeBounds) -> Result<InducedArrow> {
    if !p.strict {
        return Err(Error::pre("the induced functor on arrows needs a strict functor"));
    }
    let arrows = arrow_bicategory(p.source.clone(), bounds)?;
    let comma = oplax_comma(p.clone(), bounds)?;
    let functor = Arc::new(p_l_between(p, &arrows, &comma)?);
    Ok(InducedArrow {
        arrows,
        comma,
        functor,
    })
}

/// The pseudofunctor section `s^L` of `p^L`: over `(b, e, f)` the chosen
/// Cartesian lift `f̂`, over `(s, t, α)` the square `(ŝ, t, α̂)` obtained by
/// lifting `α` along `f̂′`.
#[derive(Debug, Clone)]
pub struct ArrowSection {
    pub induced: InducedArrow,
    pub choices: SectionChoices,
    pub section: Arc<LaxFunctor>,
}

pub fn s_l(p: &Arc<LaxFunctor>, cl: &Cleavage, bounds: &SizeBounds) -> Result<ArrowSection> {
    let ctx = FibrationContext::new(p)?;
    let report = ctx.fibration()?;
    if !report.holds() {
        return Err(Error::pre("the functor is not a strict fibration"));
    }
    let induced = p_l(p, bounds)?;
    let (arrows, comma) = (&induced.arrows, &induced.comma);
    let e = &*p.source;
    let mut ob = Vec::with_capacity(comma.obs.len());
    let mut hat = Vec::with_capacity(comma.obs.len());
    for &(_, y, f) in &comma.obs {
        let fh = *cl.lift1.get(&(y, f)).ok_or_else(|| {
            Error::MissingCleavage(format!("no chosen lift of {} at {}", p.target.one_name(f), e.ob_name(y)))
        })?;
        hat.push(fh);
        ob.push(
            arrows
                .ob_of(e.src1(fh), y, fh)
                .ok_or_else(|| Error::incons("chosen lift is not an arrow"))?,
        );
    }
    let c = &*comma.bicat;
    let mut one = Vec::with_capacity(comma.ones.len());
    for (i, &(s, t, alpha)) in comma.ones.iter().enumerate() {
        let u = One::from_index(i);
        let (x, y) = (c.src1(u), c.tgt1(u));
        let (fh, fh1) = (hat[x.index()], hat[y.index()]);
        let prob = LiftProblem {
            g: e.c(fh, t)?,
            h: s,
            alpha,
        };
        let l = ctx.lift_noninvertible(cl, fh1, &prob)?;
        one.push(
            arrows
                .one_of(ob[x.index()], ob[y.index()], l.h_hat, t, l.alpha_hat)
                .ok_or_else(|| Error::incons("lifted square is not a 1-cell of the arrow bicategory"))?,
        );
    }
    let choices = SectionChoices { ob, one };
    let lax = build_lax_section(&induced.functor, &choices)?;
    let (r, pseudo) = upgrade_section_to_pseudo(&induced.functor, &lax)?;
    let section = pseudo.ok_or_else(|| Error::incons(format!("section is not a pseudofunctor: {r}")))?;
    Ok(ArrowSection {
        induced,
        choices,
        section: Arc::new(section),
    })
}
