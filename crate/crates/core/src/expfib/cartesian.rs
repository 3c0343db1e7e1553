//! Cartesian oplax natural transformations: the pointwise test and the
//! universal property over a finite pool of functors.

use std::sync::Arc;

use crate::bounds::SizeBounds;
use crate::error::{Error, Result};
use crate::fibration::{FibrationContext, Verdict};
use crate::functor::{
    compose_functors, enumerate_modifications, enumerate_transformations, postwhisker_onto,
    same_bicategory, vcomp_transformations, LaxFunctor, Mode, Modification, OplaxTransformation,
};
use crate::report::{Axiom, CoherenceReport};

/// Violations name every non-Cartesian component.
pub fn pointwise_cartesian(ctx: &FibrationContext, t: &OplaxTransformation) -> Result<CoherenceReport> {
    let e = &*ctx.p.source;
    let a = t.shape();
    let mut r = CoherenceReport::new();
    for x in a.obs() {
        if !ctx.cartesian_1cell(t.at(x))?.holds {
            r.push(Axiom::Cartesian, vec![e.one_name(t.at(x)).into()]);
        }
    }
    for h in a.ones() {
        if !ctx.is_cartesian_2cell(t.at1(h)) {
            r.push(Axiom::Cartesian, vec![e.two_name(t.at1(h)).into()]);
        }
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartesianVerdict {
    pub pointwise: Verdict,
    /// The universal property quantified over the pool; `None` without a pool.
    pub direct: Option<Verdict>,
}

impl CartesianVerdict {
    pub fn agree(&self) -> bool {
        self.direct
            .as_ref()
            .is_none_or(|d| d.holds == self.pointwise.holds)
    }
}

fn verdict(r: CoherenceReport) -> Verdict {
    match r.violations.first() {
        None => Verdict::yes(),
        Some(v) => Verdict::no(v.to_string()),
    }
}

/// Pointwise Cartesianity of `τ`, and with a non-empty pool also the
/// lifting and factorization properties of `τ` as a 1-cell of the functor
/// bicategory, quantified over transformations and modifications out of the
/// pool functors.
pub fn is_cartesian_transformation(
    p: &LaxFunctor,
    tau: &Arc<OplaxTransformation>,
    pool: &[Arc<LaxFunctor>],
    mode: Mode,
    bounds: &SizeBounds,
) -> Result<CartesianVerdict> {
    if !same_bicategory(tau.codomain(), &p.source) {
        return Err(Error::ShapeMismatch(
            "the transformation does not land in the total bicategory".into(),
        ));
    }
    let ctx = FibrationContext::new(p)?;
    let pointwise = verdict(pointwise_cartesian(&ctx, tau)?);
    if pool.is_empty() {
        return Ok(CartesianVerdict {
            pointwise,
            direct: None,
        });
    }
    SizeBounds::check("functor pool", pool.len(), bounds.max_pool)?;
    let mut direct = Verdict::yes();
    for h in pool {
        if !same_bicategory(&h.source, tau.shape()) || !same_bicategory(&h.target, &p.source) {
            return Err(Error::ShapeMismatch("pool functor of the wrong shape".into()));
        }
        if let Some(why) = direct_failure(p, tau, h, mode, bounds)? {
            direct = Verdict::no(why);
            break;
        }
    }
    Ok(CartesianVerdict {
        pointwise,
        direct: Some(direct),
    })
}

fn direct_failure(
    p: &LaxFunctor,
    tau: &Arc<OplaxTransformation>,
    h: &Arc<LaxFunctor>,
    mode: Mode,
    bounds: &SizeBounds,
) -> Result<Option<String>> {
    let (f, g) = (&tau.source, &tau.target);
    let b = &*p.target;
    let e = &*p.source;
    let fp = Arc::new(compose_functors(f, p)?);
    let gp = Arc::new(compose_functors(g, p)?);
    let hp = Arc::new(compose_functors(h, p)?);
    let tau_p = postwhisker_onto(tau, p, fp.clone(), gp.clone())?;

    let sigmas: Vec<Arc<OplaxTransformation>> = enumerate_transformations(h, g, mode, bounds)?
        .into_iter()
        .map(Arc::new)
        .collect();
    let sigma_p: Vec<Arc<OplaxTransformation>> = sigmas
        .iter()
        .map(|s| postwhisker_onto(s, p, hp.clone(), gp.clone()).map(Arc::new))
        .collect::<Result<_>>()?;
    // lifts κ̄ : H ⇒ F with their images and composites with τ
    let lifts: Vec<(Arc<OplaxTransformation>, OplaxTransformation, Arc<OplaxTransformation>)> =
        enumerate_transformations(h, f, mode, bounds)?
            .into_iter()
            .map(|k| {
                let k = Arc::new(k);
                let kp = postwhisker_onto(&k, p, hp.clone(), fp.clone())?;
                let kt = Arc::new(vcomp_transformations(&k, tau)?);
                Ok((k, kp, kt))
            })
            .collect::<Result<_>>()?;

    // lifting: every (σ, κ, α) has a strict lift (κ̄, ᾱ)
    let kappas = enumerate_transformations(&hp, &fp, mode, bounds)?;
    for kappa in kappas {
        let kappa = Arc::new(kappa);
        let kt = Arc::new(vcomp_transformations(&kappa, &tau_p)?);
        for (si, sp) in sigma_p.iter().enumerate() {
            for alpha in enumerate_modifications(&kt, sp, true, bounds)? {
                let mut lifted = false;
                for (_, kbp, kbt) in &lifts {
                    if kbp.comp1 != kappa.comp1 || kbp.comp2 != kappa.comp2 {
                        continue;
                    }
                    let over = enumerate_modifications(kbt, &sigmas[si], true, bounds)?
                        .into_iter()
                        .any(|m| m.comp.iter().zip(&alpha.comp).all(|(&c, &d)| p.two(c) == d));
                    if over {
                        lifted = true;
                        break;
                    }
                }
                if !lifted {
                    return Ok(Some(format!(
                        "no strict lift of a factorization problem with κ components [{}]",
                        names1(b, &kappa.comp1)
                    )));
                }
            }
        }
    }

    // factorization: unique δ̂ for every compatible (σ, α, α′, δ)
    let mut hp_cache: Vec<Arc<OplaxTransformation>> = Vec::with_capacity(lifts.len());
    for (k, _, _) in &lifts {
        hp_cache.push(Arc::new(postwhisker_onto(k, p, hp.clone(), fp.clone())?));
    }
    for (gi, g1) in sigmas.iter().enumerate() {
        for g2 in &sigmas {
            let sig_mods = enumerate_modifications(g1, g2, false, bounds)?;
            if sig_mods.is_empty() {
                continue;
            }
            for (hi, (h1, _, h1t)) in lifts.iter().enumerate() {
                let alphas = enumerate_modifications(h1t, g1, true, bounds)?;
                if alphas.is_empty() {
                    continue;
                }
                for (hj, (h2, _, h2t)) in lifts.iter().enumerate() {
                    let alphas2 = enumerate_modifications(h2t, g2, true, bounds)?;
                    if alphas2.is_empty() {
                        continue;
                    }
                    let deltas = enumerate_modifications(&hp_cache[hi], &hp_cache[hj], false, bounds)?;
                    let hats = enumerate_modifications(h1, h2, false, bounds)?;
                    for sg in &sig_mods {
                        for al in &alphas {
                            for al2 in &alphas2 {
                                for dl in &deltas {
                                    if !compatible(p, tau, al, al2, sg, dl)? {
                                        continue;
                                    }
                                    let n = hats
                                        .iter()
                                        .filter(|d| factorizes(p, tau, d, al, al2, sg, dl).unwrap_or(false))
                                        .count();
                                    if n != 1 {
                                        return Ok(Some(format!(
                                            "{n} factorizations of a modification between lifts [{}] and [{}] of σ {}",
                                            names1(e, &h1.comp1),
                                            names1(e, &h2.comp1),
                                            gi
                                        )));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

fn names1(b: &crate::bicategory::Bicategory, cells: &[crate::ids::One]) -> String {
    cells.iter().map(|&c| b.one_name(c)).collect::<Vec<_>>().join(", ")
}

/// `(δ · τ) | α′·p = α·p | σ·p`, pointwise.
fn compatible(
    p: &LaxFunctor,
    tau: &OplaxTransformation,
    al: &Modification,
    al2: &Modification,
    sg: &Modification,
    dl: &Modification,
) -> Result<bool> {
    let b = &*p.target;
    for x in tau.shape().obs() {
        let lhs = b.v(b.rw(dl.at(x), p.one(tau.at(x)))?, p.two(al2.at(x)))?;
        let rhs = b.v(p.two(al.at(x)), p.two(sg.at(x)))?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `p δ̂ = δ` and `(δ̂ · τ) | α′ = α | σ`, pointwise.
fn factorizes(
    p: &LaxFunctor,
    tau: &OplaxTransformation,
    d: &Modification,
    al: &Modification,
    al2: &Modification,
    sg: &Modification,
    dl: &Modification,
) -> Result<bool> {
    let e = &*p.source;
    for x in tau.shape().obs() {
        if p.two(d.at(x)) != dl.at(x) {
            return Ok(false);
        }
        if e.v(e.rw(d.at(x), tau.at(x))?, al2.at(x))? != e.v(al.at(x), sg.at(x))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the vertical composite `τ₁ | τ₂` is pointwise Cartesian.
pub fn check_cartesian_composition(
    p: &LaxFunctor,
    t1: &OplaxTransformation,
    t2: &OplaxTransformation,
) -> Result<Verdict> {
    let ctx = FibrationContext::new(p)?;
    let t = vcomp_transformations(t1, t2)?;
    Ok(verdict(pointwise_cartesian(&ctx, &t)?))
}
