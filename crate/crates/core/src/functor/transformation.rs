//! Oplax natural transformations `τ : F ⇒ G` with 2-cells
//! `τ(f) : Ff · τ(a′) ⇒ τ(a) · Gf`.

use std::sync::Arc;

use super::{compose_functors, same_bicategory, same_functor, LaxFunctor, Modification};
use crate::bicategory::Bicategory;
use crate::error::{Error, Result};
use crate::ids::{Ob, One, Two};
use crate::report::{Axiom, CoherenceReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Oplax,
    Pseudo,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Oplax => "oplax",
            Mode::Pseudo => "pseudo",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "oplax" => Some(Mode::Oplax),
            "pseudo" => Some(Mode::Pseudo),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OplaxTransformation {
    pub source: Arc<LaxFunctor>,
    pub target: Arc<LaxFunctor>,
    /// `τ(a) : Fa → Ga`, per 0-cell of the shape.
    pub comp1: Vec<One>,
    /// `τ(f)`, per 1-cell of the shape.
    pub comp2: Vec<Two>,
}

impl OplaxTransformation {
    pub fn shape(&self) -> &Arc<Bicategory> {
        &self.source.source
    }
    pub fn codomain(&self) -> &Arc<Bicategory> {
        &self.source.target
    }
    #[inline]
    pub fn at(&self, a: Ob) -> One {
        self.comp1[a.index()]
    }
    #[inline]
    pub fn at1(&self, f: One) -> Two {
        self.comp2[f.index()]
    }

    pub fn check_structure(&self) -> Result<()> {
        let (f, g) = (&self.source, &self.target);
        if !same_bicategory(&f.source, &g.source) || !same_bicategory(&f.target, &g.target) {
            return Err(Error::ShapeMismatch(
                "transformation between functors of different shape or codomain".into(),
            ));
        }
        let (a, e) = (&*f.source, &*f.target);
        if self.comp1.len() != a.ob_count() || self.comp2.len() != a.one_count() {
            return Err(Error::Structural("transformation tables do not cover the shape".into()));
        }
        if self.comp1.iter().any(|c| c.index() >= e.one_count())
            || self.comp2.iter().any(|c| c.index() >= e.two_count())
        {
            return Err(Error::Structural(
                "transformation references an undeclared cell".into(),
            ));
        }
        Ok(())
    }
}

/// Which constraint direction to paste with; both functors must support it.
fn lax_side(f: &LaxFunctor, g: &LaxFunctor) -> bool {
    f.is_lax_direction() && g.is_lax_direction()
}

pub fn validate_transformation(t: &OplaxTransformation, mode: Mode) -> Result<CoherenceReport> {
    t.check_structure()?;
    let (f, g) = (&*t.source, &*t.target);
    let (a, e) = (&*f.source, &*f.target);
    let mut r = CoherenceReport::new();
    let n1 = |h: One| a.one_name(h).to_string();

    for x in a.obs() {
        let c = t.at(x);
        if e.src1(c) != f.ob(x) || e.tgt1(c) != g.ob(x) {
            r.push(Axiom::TransformationTyping, vec![a.ob_name(x).into()]);
        }
    }
    for h in a.ones() {
        let (x, y) = (a.src1(h), a.tgt1(h));
        let c = t.at1(h);
        let s = e.hcomp1(f.one(h), t.at(y));
        let u = e.hcomp1(t.at(x), g.one(h));
        if s != Some(e.src2(c)) || u != Some(e.tgt2(c)) {
            r.push(Axiom::TransformationTyping, vec![n1(h)]);
        }
    }
    if !r.ok() {
        return Ok(r);
    }

    // naturality in 2-cells of the shape
    for rho in a.twos() {
        let (h, k) = (a.src2(rho), a.tgt2(rho));
        let (x, y) = (a.src1(h), a.tgt1(h));
        let lhs = e
            .hcomp2(f.two(rho), e.id2(t.at(y)))
            .and_then(|w| e.vcomp(w, t.at1(k)));
        let rhs = e
            .hcomp2(e.id2(t.at(x)), g.two(rho))
            .and_then(|w| e.vcomp(t.at1(h), w));
        if lhs.is_none() || lhs != rhs {
            r.push(Axiom::TransformationNaturality, vec![a.two_name(rho).into()]);
        }
    }

    let lax = lax_side(f, g);
    // unity
    for x in a.obs() {
        let c = t.at(x);
        let ok = (|| -> Result<bool> {
            if lax {
                let lhs = e.v(e.h(f.lax_unit(x)?, e.id2(c))?, t.at1(a.id1(x)))?;
                let rhs = e.vseq(&[
                    e.lunit(c),
                    e.inv(e.runit(c))?,
                    e.h(e.id2(c), g.lax_unit(x)?)?,
                ])?;
                Ok(lhs == rhs)
            } else {
                let lhs = e.v(t.at1(a.id1(x)), e.h(e.id2(c), g.oplax_unit(x)?)?)?;
                let rhs = e.vseq(&[
                    e.h(f.oplax_unit(x)?, e.id2(c))?,
                    e.lunit(c),
                    e.inv(e.runit(c))?,
                ])?;
                Ok(lhs == rhs)
            }
        })();
        if !ok.unwrap_or(false) {
            r.push(Axiom::TransformationUnity, vec![a.ob_name(x).into()]);
        }
    }
    // composition
    for h in a.ones() {
        for &k in a.out_of(a.tgt1(h)) {
            let ok = (|| -> Result<bool> {
                let hk = a.c(h, k)?;
                let (x, y, z) = (a.src1(h), a.tgt1(h), a.tgt1(k));
                let (fh, fk, gh, gk) = (f.one(h), f.one(k), g.one(h), g.one(k));
                let (tx, ty, tz) = (t.at(x), t.at(y), t.at(z));
                let middle = [
                    e.a(fh, fk, tz)?,
                    e.h(e.id2(fh), t.at1(k))?,
                    e.inv(e.a(fh, ty, gk)?)?,
                    e.h(t.at1(h), e.id2(gk))?,
                    e.a(tx, gh, gk)?,
                ];
                if lax {
                    let lhs = e.v(e.h(f.lax_comp(h, k)?, e.id2(tz))?, t.at1(hk))?;
                    let mut cells = middle.to_vec();
                    cells.push(e.h(e.id2(tx), g.lax_comp(h, k)?)?);
                    Ok(lhs == e.vseq(&cells)?)
                } else {
                    let lhs = e.v(t.at1(hk), e.h(e.id2(tx), g.oplax_comp(h, k)?)?)?;
                    let mut cells = vec![e.h(f.oplax_comp(h, k)?, e.id2(tz))?];
                    cells.extend(middle);
                    Ok(lhs == e.vseq(&cells)?)
                }
            })();
            if !ok.unwrap_or(false) {
                r.push(Axiom::TransformationComposition, vec![n1(h), n1(k)]);
            }
        }
    }
    if mode == Mode::Pseudo {
        for h in a.ones() {
            if !e.is_invertible(t.at1(h)) {
                r.push(Axiom::PseudoInvertibility, vec![n1(h)]);
            }
        }
    }
    Ok(r)
}

/// Components `1_{Fa}`, 2-cells `r_{Ff} | ℓ_{Ff}⁻¹`.
pub fn identity_transformation(f: Arc<LaxFunctor>) -> Result<OplaxTransformation> {
    let (a, e) = (&*f.source, &*f.target);
    let comp1 = a.obs().map(|x| e.id1(f.ob(x))).collect();
    let mut comp2 = Vec::with_capacity(a.one_count());
    for h in a.ones() {
        let fh = f.one(h);
        comp2.push(e.v(e.runit(fh), e.inv(e.lunit(fh))?)?);
    }
    Ok(OplaxTransformation {
        source: f.clone(),
        target: f,
        comp1,
        comp2,
    })
}

/// `σ` then `τ`, with associators inserted:
/// `(σ|τ)(f) = a⁻¹ | (σ(f) · id) | a | (id · τ(f)) | a⁻¹`.
pub fn vcomp_transformations(
    s: &OplaxTransformation,
    t: &OplaxTransformation,
) -> Result<OplaxTransformation> {
    if !same_functor(&s.target, &t.source) {
        return Err(Error::ShapeMismatch(
            "vertical composite: the middle functors differ".into(),
        ));
    }
    let (f, g, h) = (&*s.source, &*s.target, &*t.target);
    let (a, e) = (&*f.source, &*f.target);
    let mut comp1 = Vec::with_capacity(a.ob_count());
    for x in a.obs() {
        comp1.push(e.c(s.at(x), t.at(x))?);
    }
    let mut comp2 = Vec::with_capacity(a.one_count());
    for k in a.ones() {
        let (x, y) = (a.src1(k), a.tgt1(k));
        let (fk, gk, hk) = (f.one(k), g.one(k), h.one(k));
        let cell = e.vseq(&[
            e.inv(e.a(fk, s.at(y), t.at(y))?)?,
            e.h(s.at1(k), e.id2(t.at(y)))?,
            e.a(s.at(x), gk, t.at(y))?,
            e.h(e.id2(s.at(x)), t.at1(k))?,
            e.inv(e.a(s.at(x), t.at(x), hk)?)?,
        ])?;
        comp2.push(cell);
    }
    Ok(OplaxTransformation {
        source: s.source.clone(),
        target: t.target.clone(),
        comp1,
        comp2,
    })
}

/// `τ · p : F·p ⇒ G·p`, with 2-cells `μ | p(τ(f)) | μ⁻¹`; `p` must have
/// invertible composition constraints.
pub fn postwhisker(t: &OplaxTransformation, p: &LaxFunctor) -> Result<OplaxTransformation> {
    postwhisker_onto(
        t,
        p,
        Arc::new(compose_functors(&t.source, p)?),
        Arc::new(compose_functors(&t.target, p)?),
    )
}

/// As [`postwhisker`], with the composite functors supplied (so that several
/// whiskered transformations can share them).
pub fn postwhisker_onto(
    t: &OplaxTransformation,
    p: &LaxFunctor,
    fp: Arc<LaxFunctor>,
    gp: Arc<LaxFunctor>,
) -> Result<OplaxTransformation> {
    let (f, g) = (&*t.source, &*t.target);
    if !same_bicategory(&f.target, &p.source) {
        return Err(Error::ShapeMismatch(
            "postwhisker: functor does not start at the codomain".into(),
        ));
    }
    let (a, b) = (&*f.source, &*p.target);
    let comp1 = t.comp1.iter().map(|&c| p.one(c)).collect();
    let mut comp2 = Vec::with_capacity(a.one_count());
    for k in a.ones() {
        let (x, y) = (a.src1(k), a.tgt1(k));
        let cell = b.vseq(&[
            p.lax_comp(f.one(k), t.at(y))?,
            p.two(t.at1(k)),
            p.oplax_comp(t.at(x), g.one(k))?,
        ])?;
        comp2.push(cell);
    }
    Ok(OplaxTransformation {
        source: fp,
        target: gp,
        comp1,
        comp2,
    })
}

/// `γ · p`, componentwise.
pub fn postwhisker_modification(
    m: &Modification,
    p: &LaxFunctor,
    sp: Arc<OplaxTransformation>,
    tp: Arc<OplaxTransformation>,
) -> Result<Modification> {
    if !same_bicategory(m.source.codomain(), &p.source) {
        return Err(Error::ShapeMismatch(
            "postwhisker: functor does not start at the codomain".into(),
        ));
    }
    Ok(Modification {
        source: sp,
        target: tp,
        comp: m.comp.iter().map(|&c| p.two(c)).collect(),
    })
}
