//! Lifting along postwhiskering `- · p` on lax functors, oplax natural
//! transformations and modifications, computed pointwise.

mod cartesian;

pub use cartesian::{check_cartesian_composition, is_cartesian_transformation, pointwise_cartesian, CartesianVerdict};

use std::sync::Arc;

use crate::bounds::SizeBounds;
use crate::error::{Error, Result};
use crate::fibration::{Cleavage, FibrationContext, Lift, LiftProblem};
use crate::functor::{
    compose_functors, postwhisker, tables_equal, validate_functor, validate_modification,
    validate_transformation, vcomp_transformations, LaxFunctor, Mode, Modification,
    OplaxTransformation,
};
use crate::groth::{lift_to_pair, pack, s_l, ArrowSection, Triple};
use crate::ids::Two;
use crate::report::{Axiom, CoherenceReport};

/// The lift `σ̄ : F ⇒ G` of `σ` and the Cartesian lift `γ̄ : σ̄ ⇛ τ` of `γ`.
#[derive(Debug, Clone)]
pub struct ModificationLift {
    pub sigma_bar: Arc<OplaxTransformation>,
    pub gamma_bar: Modification,
    pub report: CoherenceReport,
}

/// The unique `φ` over `v` with `φ | χ = ψ`, for a Cartesian `χ`.
fn factor_through(ctx: &FibrationContext, chi: Two, psi: Two, v: Two) -> Result<Two> {
    let e = &*ctx.p.source;
    let mut found = Vec::new();
    for &phi in e.between(e.src2(psi), e.src2(chi)) {
        if ctx.p.two(phi) == v && e.v(phi, chi)? == psi {
            found.push(phi);
        }
    }
    match found.as_slice() {
        [phi] => Ok(*phi),
        [] => Err(Error::incons(format!(
            "no 2-cell over {} factors {} through {}",
            ctx.p.target.two_name(v),
            e.two_name(psi),
            e.two_name(chi)
        ))),
        _ => Err(Error::incons(format!(
            "{} 2-cells factor {} through {}",
            found.len(),
            e.two_name(psi),
            e.two_name(chi)
        ))),
    }
}

fn require_strict(p: &LaxFunctor) -> Result<()> {
    if p.strict {
        Ok(())
    } else {
        Err(Error::pre("the fibration must be a strict functor"))
    }
}

/// `γ̄(a)` is the chosen local Cartesian 2-cell over `γ(a)` into `τ(a)`;
/// `σ̄(f)` is the unique 2-cell over `σ(f)` with
/// `σ̄(f) | (γ̄(a) · Gf) = (Ff · γ̄(a′)) | τ(f)`.
pub fn lift_modification_pointwise(
    p: &LaxFunctor,
    cl: &Cleavage,
    tau: &Arc<OplaxTransformation>,
    sigma: &Arc<OplaxTransformation>,
    gamma: &Modification,
) -> Result<ModificationLift> {
    require_strict(p)?;
    let ctx = FibrationContext::new(p)?;
    if !ctx.locally_fibred().holds {
        return Err(Error::pre("the functor is not locally fibred"));
    }
    let (f, g) = (&tau.source, &tau.target);
    let tp = postwhisker(tau, p)?;
    if !tables_equal(&sigma.source, &tp.source) || !tables_equal(&sigma.target, &tp.target) {
        return Err(Error::ShapeMismatch("σ must run from F·p to G·p".into()));
    }
    if *gamma.source != **sigma || gamma.target.comp1 != tp.comp1 || gamma.target.comp2 != tp.comp2 {
        return Err(Error::ShapeMismatch("γ must run from σ to τ·p".into()));
    }
    let (a, e, b) = (&*f.source, &*p.source, &*p.target);
    let mut gamma_bar = Vec::with_capacity(a.ob_count());
    for x in a.obs() {
        let key = (tau.at(x), gamma.at(x));
        let c = *cl.local.get(&key).ok_or_else(|| {
            Error::MissingCleavage(format!(
                "no local lift of {} at {}",
                b.two_name(gamma.at(x)),
                e.one_name(tau.at(x))
            ))
        })?;
        gamma_bar.push(c);
    }
    let comp1: Vec<_> = gamma_bar.iter().map(|&c| e.src2(c)).collect();
    let mut comp2 = Vec::with_capacity(a.one_count());
    for h in a.ones() {
        let (x, y) = (a.src1(h), a.tgt1(h));
        let chi = e.rw(gamma_bar[x.index()], g.one(h))?;
        if !ctx.is_cartesian_2cell(chi) {
            return Err(Error::pre(format!(
                "whiskered Cartesian 2-cell {} is not Cartesian",
                e.two_name(chi)
            )));
        }
        let psi = e.v(e.lw(f.one(h), gamma_bar[y.index()])?, tau.at1(h))?;
        comp2.push(factor_through(&ctx, chi, psi, sigma.at1(h))?);
    }
    let sigma_bar = Arc::new(OplaxTransformation {
        source: f.clone(),
        target: g.clone(),
        comp1,
        comp2,
    });
    let gamma_bar = Modification {
        source: sigma_bar.clone(),
        target: tau.clone(),
        comp: gamma_bar,
    };
    let mut report = validate_transformation(&sigma_bar, Mode::Oplax)?;
    report.extend(validate_modification(&gamma_bar)?);
    for x in a.obs() {
        let c = gamma_bar.at(x);
        if p.two(c) != gamma.at(x) || p.one(sigma_bar.at(x)) != sigma.at(x) {
            report.push(Axiom::StrictLift, vec![a.ob_name(x).into()]);
        }
        if !ctx.is_cartesian_2cell(c) {
            report.push(Axiom::Cartesian, vec![e.two_name(c).into()]);
        }
    }
    for h in a.ones() {
        if p.two(sigma_bar.at1(h)) != sigma.at1(h) {
            report.push(Axiom::StrictLift, vec![a.one_name(h).into()]);
        }
    }
    Ok(ModificationLift {
        sigma_bar,
        gamma_bar,
        report,
    })
}

/// `F̄ : A → E` over `F` and `τ̄ : F̄ ⇒ G` over `τ` with Cartesian cells.
#[derive(Debug, Clone)]
pub struct CanonicalLift {
    pub f_bar: Arc<LaxFunctor>,
    pub tau_bar: Arc<OplaxTransformation>,
    pub report: CoherenceReport,
}

/// `(F, G, τ) · s^L`, read back as a pair. `mode` is the mode `τ̄` is
/// validated in.
pub fn canonical_lift(
    p: &Arc<LaxFunctor>,
    cl: &Cleavage,
    tau: &OplaxTransformation,
    g: &Arc<LaxFunctor>,
    mode: Mode,
    bounds: &SizeBounds,
) -> Result<CanonicalLift> {
    let sl = s_l(p, cl, bounds)?;
    canonical_lift_with(&sl, tau, g, mode)
}

/// As [`canonical_lift`], reusing a section built once.
pub fn canonical_lift_with(
    sl: &ArrowSection,
    tau: &OplaxTransformation,
    g: &Arc<LaxFunctor>,
    mode: Mode,
) -> Result<CanonicalLift> {
    let p = &sl.induced.comma.p;
    let x = pack(
        &sl.induced.comma,
        &Triple {
            f: tau.source.clone(),
            g: g.clone(),
            tau: tau.clone(),
        },
    )?;
    let xbar = Arc::new(compose_functors(&x, &sl.section)?);
    let (f_bar, tau_bar) = lift_to_pair(&sl.induced.arrows, &xbar)?;
    if !tables_equal(&tau_bar.target, g) {
        return Err(Error::incons("the lifted transformation does not end at G"));
    }
    let tau_bar = Arc::new(OplaxTransformation {
        target: g.clone(),
        ..tau_bar
    });

    let mut report = validate_functor(&f_bar)?;
    report.extend(validate_transformation(&tau_bar, mode)?);
    if !tables_equal(&compose_functors(&f_bar, p)?, &tau.source) {
        report.push(Axiom::StrictLift, vec!["F".into()]);
    }
    let tp = postwhisker(&tau_bar, p)?;
    if tp.comp1 != tau.comp1 || tp.comp2 != tau.comp2 {
        report.push(Axiom::StrictLift, vec!["τ".into()]);
    }
    report.extend(pointwise_cartesian(&FibrationContext::new(p)?, &tau_bar)?);
    Ok(CanonicalLift {
        f_bar,
        tau_bar,
        report,
    })
}

/// The factorization `(κ̄ : H ⇒ F̄, ᾱ : κ̄ · τ̄ ≅ σ)` of
/// `(κ : H·p ⇒ F, α : κ · τ ≅ σ · p)` through the Cartesian `τ̄`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub kappa_bar: Arc<OplaxTransformation>,
    pub alpha_bar: Modification,
    pub report: CoherenceReport,
}

/// `κ̄(a), ᾱ(a)` are strict lifts through `τ̄(a)`; `κ̄(f)` is the unique
/// 2-cell over `κ(f)` making `ᾱ` a modification.
pub fn factor_through_cartesian(
    p: &LaxFunctor,
    cl: &Cleavage,
    tau_bar: &Arc<OplaxTransformation>,
    sigma: &Arc<OplaxTransformation>,
    kappa: &OplaxTransformation,
    alpha: &Modification,
    mode: Mode,
) -> Result<Factorization> {
    require_strict(p)?;
    let ctx = FibrationContext::new(p)?;
    let (e, b) = (&*p.source, &*p.target);
    let h = &sigma.source;
    let f_bar = &tau_bar.source;
    let a = &*h.source;
    if !tables_equal(&sigma.target, &tau_bar.target) {
        return Err(Error::ShapeMismatch("σ and τ̄ must share their codomain G".into()));
    }
    if kappa.comp1.len() != a.ob_count() || alpha.comp.len() != a.ob_count() {
        return Err(Error::ShapeMismatch("κ and α must be indexed by the shape".into()));
    }
    for x in a.obs() {
        let ax = alpha.at(x);
        let ka = kappa.at(x);
        if b.src2(ax) != b.c(ka, p.one(tau_bar.at(x)))?
            || b.tgt2(ax) != p.one(sigma.at(x))
            || !b.is_invertible(ax)
        {
            return Err(Error::pre(format!(
                "α at {} is not an invertible 2-cell κ·τ ⇒ σ·p",
                a.ob_name(x)
            )));
        }
    }

    let mut k1 = Vec::with_capacity(a.ob_count());
    let mut al = Vec::with_capacity(a.ob_count());
    for x in a.obs() {
        let prob = LiftProblem {
            g: sigma.at(x),
            h: kappa.at(x),
            alpha: alpha.at(x),
        };
        let l = ctx.lift_strict(cl, tau_bar.at(x), &prob)?;
        k1.push(l.h_hat);
        al.push(l.alpha_hat);
    }
    let mut k2 = Vec::with_capacity(a.one_count());
    for f in a.ones() {
        let (x, y) = (a.src1(f), a.tgt1(f));
        let (hf, ff, gf) = (h.one(f), f_bar.one(f), sigma.target.one(f));
        let (kx, ky, tx, ty) = (k1[x.index()], k1[y.index()], tau_bar.at(x), tau_bar.at(y));
        // (κ̄a · F̄f) · τ̄a′ ⇒ σa · Gf
        let paste = e.vseq(&[
            e.a(kx, ff, ty)?,
            e.lw(kx, tau_bar.at1(f))?,
            e.inv(e.a(kx, tx, gf)?)?,
            e.rw(al[x.index()], gf)?,
        ])?;
        let target = e.vseq(&[e.a(hf, ky, ty)?, e.lw(hf, al[y.index()])?, sigma.at1(f)])?;
        let mut found = Vec::new();
        for &phi in e.between(e.c(hf, ky)?, e.c(kx, ff)?) {
            if p.two(phi) == kappa.at1(f) && e.v(e.rw(phi, ty)?, paste)? == target {
                found.push(phi);
            }
        }
        match found.as_slice() {
            [phi] => k2.push(*phi),
            _ => {
                return Err(Error::incons(format!(
                    "{} candidate 2-cells for the factorization at {}",
                    found.len(),
                    a.one_name(f)
                )))
            }
        }
    }
    let kappa_bar = Arc::new(OplaxTransformation {
        source: h.clone(),
        target: f_bar.clone(),
        comp1: k1,
        comp2: k2,
    });
    let alpha_bar = Modification {
        source: Arc::new(vcomp_transformations(&kappa_bar, tau_bar)?),
        target: sigma.clone(),
        comp: al,
    };
    let mut report = validate_transformation(&kappa_bar, mode)?;
    report.extend(validate_modification(&alpha_bar)?);
    let kp = postwhisker(&kappa_bar, p)?;
    if kp.comp1 != kappa.comp1 || kp.comp2 != kappa.comp2 {
        report.push(Axiom::StrictLift, vec!["κ".into()]);
    }
    for x in a.obs() {
        if p.two(alpha_bar.at(x)) != alpha.at(x) {
            report.push(Axiom::StrictLift, vec![a.ob_name(x).into()]);
        }
        if !e.is_invertible(alpha_bar.at(x)) {
            report.push(Axiom::Invertibility, vec![a.ob_name(x).into()]);
        }
    }
    Ok(Factorization {
        kappa_bar,
        alpha_bar,
        report,
    })
}

/// Data for factoring a modification through a Cartesian `τ̄ : F̄ ⇒ G`:
/// `h, h′ : H ⇒ F̄`, `σ : g ⇛ g′`, `α : h·τ̄ ≅ g`, `α′ : h′·τ̄ ≅ g′`,
/// `δ : h·p ⇛ h′·p`.
#[derive(Debug, Clone)]
pub struct ModificationProblem {
    pub h: Arc<OplaxTransformation>,
    pub h2: Arc<OplaxTransformation>,
    pub sigma: Modification,
    pub alpha: Modification,
    pub alpha2: Modification,
    pub delta: Modification,
}

/// The unique `δ̂ : h ⇛ h′` over `δ` with `(δ̂ · τ̄) | α′ = α | σ`, built
/// pointwise from the 2-dimensional factorization at each `τ̄(a)`.
pub fn factor_modification(
    p: &LaxFunctor,
    tau_bar: &OplaxTransformation,
    d: &ModificationProblem,
) -> Result<Modification> {
    require_strict(p)?;
    let ctx = FibrationContext::new(p)?;
    let (e, b) = (&*p.source, &*p.target);
    let a = tau_bar.shape().clone();
    let n = a.ob_count();
    if [&d.sigma, &d.alpha, &d.alpha2, &d.delta]
        .iter()
        .any(|m| m.comp.len() != n)
        || d.h.comp1.len() != n
        || d.h2.comp1.len() != n
    {
        return Err(Error::ShapeMismatch("modification data must be indexed by the shape".into()));
    }
    let mut comp = Vec::with_capacity(n);
    for x in a.obs() {
        let t = tau_bar.at(x);
        let (h, h2) = (d.h.at(x), d.h2.at(x));
        let (al, al2) = (d.alpha.at(x), d.alpha2.at(x));
        let (sg, dl) = (d.sigma.at(x), d.delta.at(x));
        let typed = e.src2(al) == e.c(h, t)?
            && e.src2(al2) == e.c(h2, t)?
            && e.tgt2(al) == e.src2(sg)
            && e.tgt2(al2) == e.tgt2(sg)
            && b.src2(dl) == p.one(h)
            && b.tgt2(dl) == p.one(h2);
        if !typed {
            return Err(Error::ShapeMismatch(format!(
                "modification data mistyped at {}",
                a.ob_name(x)
            )));
        }
        let p1 = LiftProblem {
            g: e.tgt2(al),
            h: p.one(h),
            alpha: p.two(al),
        };
        let p2 = LiftProblem {
            g: e.tgt2(al2),
            h: p.one(h2),
            alpha: p.two(al2),
        };
        let l1 = Lift {
            h_hat: h,
            alpha_hat: al,
            beta_hat: b.id2(p.one(h)),
        };
        let l2 = Lift {
            h_hat: h2,
            alpha_hat: al2,
            beta_hat: b.id2(p.one(h2)),
        };
        comp.push(ctx.factor(t, &p1, &l1, &p2, &l2, dl, sg)?);
    }
    let m = Modification {
        source: d.h.clone(),
        target: d.h2.clone(),
        comp,
    };
    let r = validate_modification(&m)?;
    if !r.ok() {
        return Err(Error::incons(format!("pointwise factorization is not a modification: {r}")));
    }
    Ok(m)
}
