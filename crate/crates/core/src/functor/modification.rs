//! Modifications between oplax transformations, and icons.

use std::sync::Arc;

use super::{same_bicategory, LaxFunctor, OplaxTransformation};
use crate::error::{Error, Result};
use crate::ids::{Ob, One, Two};
use crate::report::{Axiom, CoherenceReport};

/// `γ : σ ⇛ τ` with components `γ(a) : σ(a) ⇒ τ(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modification {
    pub source: Arc<OplaxTransformation>,
    pub target: Arc<OplaxTransformation>,
    pub comp: Vec<Two>,
}

impl Modification {
    #[inline]
    pub fn at(&self, a: Ob) -> Two {
        self.comp[a.index()]
    }
}

pub fn identity_modification(t: Arc<OplaxTransformation>) -> Modification {
    let e = t.codomain().clone();
    Modification {
        comp: t.comp1.iter().map(|&c| e.id2(c)).collect(),
        source: t.clone(),
        target: t,
    }
}

/// Checks `σ(f) | (γ(a) · Gf) = (Ff · γ(a′)) | τ(f)` for every 1-cell `f`.
pub fn validate_modification(m: &Modification) -> Result<CoherenceReport> {
    let (s, t) = (&*m.source, &*m.target);
    s.check_structure()?;
    t.check_structure()?;
    if !(Arc::ptr_eq(&s.source, &t.source) || *s.source == *t.source)
        || !(Arc::ptr_eq(&s.target, &t.target) || *s.target == *t.target)
    {
        return Err(Error::ShapeMismatch(
            "modification between transformations with different endpoints".into(),
        ));
    }
    let (f, g) = (&*s.source, &*s.target);
    let (a, e) = (&*f.source, &*f.target);
    if m.comp.len() != a.ob_count() || m.comp.iter().any(|c| c.index() >= e.two_count()) {
        return Err(Error::Structural("modification table does not cover the shape".into()));
    }
    let mut r = CoherenceReport::new();
    for x in a.obs() {
        let c = m.at(x);
        if e.src2(c) != s.at(x) || e.tgt2(c) != t.at(x) {
            r.push(Axiom::ModificationTyping, vec![a.ob_name(x).into()]);
        }
    }
    if !r.ok() {
        return Ok(r);
    }
    for h in a.ones() {
        let (x, y) = (a.src1(h), a.tgt1(h));
        let lhs = e
            .hcomp2(m.at(x), e.id2(g.one(h)))
            .and_then(|w| e.vcomp(s.at1(h), w));
        let rhs = e
            .hcomp2(e.id2(f.one(h)), m.at(y))
            .and_then(|w| e.vcomp(w, t.at1(h)));
        if lhs.is_none() || lhs != rhs {
            r.push(Axiom::ModificationAxiom, vec![a.one_name(h).into()]);
        }
    }
    Ok(r)
}

/// An icon `κ : F ⇒ G` between functors agreeing on 0-cells, with a
/// 2-cell `κ_f : Ff ⇒ Gf` per 1-cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Icon {
    pub source: Arc<LaxFunctor>,
    pub target: Arc<LaxFunctor>,
    pub comp: Vec<Two>,
}

impl Icon {
    #[inline]
    pub fn at(&self, f: One) -> Two {
        self.comp[f.index()]
    }
}

pub fn validate_icon(k: &Icon) -> Result<CoherenceReport> {
    let (f, g) = (&*k.source, &*k.target);
    if !same_bicategory(&f.source, &g.source) || !same_bicategory(&f.target, &g.target) {
        return Err(Error::ShapeMismatch("icon between functors of different shape".into()));
    }
    let (a, e) = (&*f.source, &*f.target);
    if k.comp.len() != a.one_count() || k.comp.iter().any(|c| c.index() >= e.two_count()) {
        return Err(Error::Structural("icon table does not cover the 1-cells".into()));
    }
    let mut r = CoherenceReport::new();
    for x in a.obs() {
        if f.ob(x) != g.ob(x) {
            r.push(Axiom::IconTyping, vec![a.ob_name(x).into()]);
        }
    }
    for h in a.ones() {
        let c = k.at(h);
        if e.src2(c) != f.one(h) || e.tgt2(c) != g.one(h) {
            r.push(Axiom::IconTyping, vec![a.one_name(h).into()]);
        }
    }
    if !r.ok() {
        return Ok(r);
    }
    for rho in a.twos() {
        let (h, j) = (a.src2(rho), a.tgt2(rho));
        let lhs = e.vcomp(f.two(rho), k.at(j));
        if lhs.is_none() || lhs != e.vcomp(k.at(h), g.two(rho)) {
            r.push(Axiom::IconNaturality, vec![a.two_name(rho).into()]);
        }
    }
    let lax = f.is_lax_direction() && g.is_lax_direction();
    for x in a.obs() {
        let one = a.id1(x);
        let ok = (|| -> Result<bool> {
            if lax {
                Ok(e.v(f.lax_unit(x)?, k.at(one))? == g.lax_unit(x)?)
            } else {
                Ok(e.v(k.at(one), g.oplax_unit(x)?)? == f.oplax_unit(x)?)
            }
        })();
        if !ok.unwrap_or(false) {
            r.push(Axiom::IconUnit, vec![a.ob_name(x).into()]);
        }
    }
    for h in a.ones() {
        for &j in a.out_of(a.tgt1(h)) {
            let ok = (|| -> Result<bool> {
                let hj = a.c(h, j)?;
                let both = e.h(k.at(h), k.at(j))?;
                if lax {
                    Ok(e.v(f.lax_comp(h, j)?, k.at(hj))? == e.v(both, g.lax_comp(h, j)?)?)
                } else {
                    Ok(e.v(k.at(hj), g.oplax_comp(h, j)?)? == e.v(f.oplax_comp(h, j)?, both)?)
                }
            })();
            if !ok.unwrap_or(false) {
                r.push(
                    Axiom::IconComposition,
                    vec![a.one_name(h).into(), a.one_name(j).into()],
                );
            }
        }
    }
    Ok(r)
}
