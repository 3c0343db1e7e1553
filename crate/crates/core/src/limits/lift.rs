//! Reindexing fiber diagrams along base 1-cells, preservation of fiber
//! limits, and lifting limits along a cloven strict fibration.

use std::sync::Arc;

use super::{constant_transformation, fiber, is_limit, find_limit, Cone, FiberBicategory, LimitCertificate};
use crate::bounds::SizeBounds;
use crate::error::{Error, LimitHypothesis, Result};
use crate::expfib::{canonical_lift_with, factor_through_cartesian, CanonicalLift};
use crate::fibration::{Cleavage, FibrationContext};
use crate::functor::{
    compose_functors, constant_functor, identity_transformation, postwhisker, postwhisker_onto,
    tables_equal, validate_icon, validate_transformation, vcomp_transformations, LaxFunctor, Mode,
    Modification, OplaxTransformation,
};
use crate::groth::{s_l, ArrowSection};
use crate::ids::{Ob, One};
use crate::report::CoherenceReport;

/// The reindexing `F̄` of a fiber diagram `F` along `f : b → b′`, with the
/// Cartesian `τ̄ : F̄ ⇒ F₀` over the canonical `τ : Δ_b ⇒ F₀·p`.
#[derive(Debug, Clone)]
pub struct Reindexing {
    pub along: One,
    pub fiber: FiberBicategory,
    /// `F₀ = F · incl`, the diagram in `E`.
    pub f0: Arc<LaxFunctor>,
    pub tau: Arc<OplaxTransformation>,
    pub f_bar: Arc<LaxFunctor>,
    /// `F̄` as a diagram in the fiber over `b`.
    pub f_bar_fiber: Arc<LaxFunctor>,
    pub tau_bar: Arc<OplaxTransformation>,
    pub report: CoherenceReport,
}

/// The limit produced by lifting, with the intermediate data of each step.
#[derive(Debug, Clone)]
pub struct LiftedLimit {
    pub cone: Cone,
    pub certificate: LimitCertificate,
    /// Step 1: the limit of `J·p` in the base.
    pub base: Cone,
    /// Step 2: its canonical Cartesian lift `(s̄, τ̄)`.
    pub lifted: CanonicalLift,
    /// Step 3: the limit of `s̄` in the fiber over the base apex.
    pub fiber: FiberBicategory,
    pub fiber_cone: Cone,
    /// Base 1-cells into the apex along which preservation was verified.
    pub preserved_along: Vec<One>,
}

fn hypothesis(h: LimitHypothesis) -> Error {
    Error::Hypothesis(h)
}

/// A cloven strict fibration with its section on arrows, built once and
/// shared by every reindexing.
#[derive(Debug, Clone)]
pub struct LimitLifter {
    pub p: Arc<LaxFunctor>,
    pub cleavage: Cleavage,
    pub section: ArrowSection,
    pub bounds: SizeBounds,
}

impl LimitLifter {
    pub fn new(p: &Arc<LaxFunctor>, cl: &Cleavage, bounds: &SizeBounds) -> Result<LimitLifter> {
        if !p.strict {
            return Err(hypothesis(LimitHypothesis::Fibration("the functor is not strict".into())));
        }
        let ctx = FibrationContext::new(p)?;
        if let Some(f) = ctx.fibration()?.failure {
            return Err(hypothesis(LimitHypothesis::Fibration(f.to_string())));
        }
        let r = ctx.validate_cleavage(cl)?;
        if !r.ok() {
            return Err(hypothesis(LimitHypothesis::Fibration(format!("invalid cleavage: {r}"))));
        }
        Ok(LimitLifter {
            p: p.clone(),
            cleavage: cl.clone(),
            section: s_l(p, cl, bounds)?,
            bounds: *bounds,
        })
    }

    pub fn fiber(&self, b: Ob) -> Result<FiberBicategory> {
        fiber(&self.p, b, &self.bounds)
    }

    /// Reindexes `F : A → fiber(b′)` along `f : b → b′`: the canonical
    /// `τ` has components `f` and 2-cells `ℓ_f | r_f⁻¹ | (f · ρ_h⁻¹)`, and
    /// `(F̄, τ̄)` is its canonical Cartesian lift with codomain `F₀`.
    pub fn reindex_diagram(
        &self,
        fib: &FiberBicategory,
        diagram: &Arc<LaxFunctor>,
        f: One,
    ) -> Result<Reindexing> {
        let base = &*self.p.target;
        if base.tgt1(f) != fib.base {
            return Err(Error::pre("the base 1-cell does not end at the fiber's base"));
        }
        let b = base.src1(f);
        let (f0, rho) = fib.split(diagram)?;
        let mut report = validate_icon(&rho)?;
        let a = diagram.source.clone();
        let mut comp2 = Vec::with_capacity(a.one_count());
        for h in a.ones() {
            comp2.push(base.vseq(&[
                base.lunit(f),
                base.inv(base.runit(f))?,
                base.lw(f, base.inv(rho.at(h))?)?,
            ])?);
        }
        let tau = Arc::new(OplaxTransformation {
            source: Arc::new(constant_functor(a.clone(), self.p.target.clone(), b)?),
            target: rho.source.clone(),
            comp1: vec![f; a.ob_count()],
            comp2,
        });
        report.extend(validate_transformation(&tau, Mode::Pseudo)?);
        let lifted = canonical_lift_with(&self.section, &tau, &f0, Mode::Pseudo)?;
        report.extend(lifted.report);
        let fiber = self.fiber(b)?;
        let f_bar_fiber = Arc::new(fiber.restrict(&lifted.f_bar)?);
        Ok(Reindexing {
            along: f,
            fiber,
            f0,
            tau,
            f_bar: lifted.f_bar,
            f_bar_fiber,
            tau_bar: lifted.tau_bar,
            report,
        })
    }

    /// Reindexes a cone `(L, τ*)` over `F` in `fiber(b′)` to a cone over
    /// `F̄` in `fiber(b)`: the cone `Δ_{L̄} ⇒ Δ_L ⇒ F₀`, with `L̄ → L`
    /// the chosen Cartesian lift of `f`, factored through `τ̄`.
    pub fn reindex_cone(
        &self,
        source_fiber: &FiberBicategory,
        r: &Reindexing,
        cone: &Cone,
    ) -> Result<(Cone, CoherenceReport)> {
        let (e, base) = (&*self.p.source, &*self.p.target);
        let a = r.f0.source.clone();
        let l = source_fiber.obs[cone.apex.index()];
        let f = r.along;
        let f_hat = *self.cleavage.lift1.get(&(l, f)).ok_or_else(|| {
            Error::MissingCleavage(format!(
                "no lift of {} at {}",
                base.one_name(f),
                e.ob_name(l)
            ))
        })?;
        let l_bar = e.src1(f_hat);
        let delta_l = Arc::new(constant_functor(a.clone(), self.p.source.clone(), l)?);
        let delta_l_bar = Arc::new(constant_functor(a.clone(), self.p.source.clone(), l_bar)?);
        if !tables_equal(&compose_functors(&cone.legs.source, &source_fiber.inclusion)?, &delta_l) {
            return Err(Error::ShapeMismatch("the cone does not start at its apex".into()));
        }
        let legs_e = postwhisker_onto(&cone.legs, &source_fiber.inclusion, delta_l.clone(), r.f0.clone())?;
        let d_hat = constant_transformation(e, f_hat, delta_l_bar.clone(), delta_l)?;
        let sigma = Arc::new(vcomp_transformations(&d_hat, &legs_e)?);

        let kappa = identity_transformation(r.tau.source.clone())?;
        if !tables_equal(&compose_functors(&delta_l_bar, &self.p)?, &r.tau.source) {
            return Err(Error::incons("the lifted apex does not lie over the base"));
        }
        let mut comp = Vec::with_capacity(a.ob_count());
        for x in a.obs() {
            let phi = source_fiber.ones[cone.legs.at(x).index()].1;
            comp.push(base.vseq(&[
                base.lunit(f),
                base.inv(base.runit(f))?,
                base.lw(f, base.inv(phi)?)?,
            ])?);
        }
        let alpha = Modification {
            source: Arc::new(vcomp_transformations(&kappa, &r.tau)?),
            target: Arc::new(postwhisker(&sigma, &self.p)?),
            comp,
        };
        let fact = factor_through_cartesian(
            &self.p,
            &self.cleavage,
            &r.tau_bar,
            &sigma,
            &kappa,
            &alpha,
            cone.mode,
        )?;
        let apex = r
            .fiber
            .ob_of(l_bar)
            .ok_or_else(|| Error::incons("the lifted apex is not in the fiber"))?;
        let delta_fib = Arc::new(constant_functor(a, r.fiber.bicat.clone(), apex)?);
        let legs = r
            .fiber
            .restrict_transformation(&fact.kappa_bar, delta_fib, r.f_bar_fiber.clone())?;
        let mut report = fact.report;
        report.extend(validate_transformation(&legs, cone.mode)?);
        Ok((
            Cone {
                apex,
                legs: Arc::new(legs),
                mode: cone.mode,
            },
            report,
        ))
    }

    /// Whether reindexing along `f` carries the limit cone `(L, τ*)` over
    /// `F` in `fiber(b′)` to a limit in `fiber(b)`.
    pub fn preserves_limit(
        &self,
        f: One,
        fib: &FiberBicategory,
        diagram: &Arc<LaxFunctor>,
        cone: &Cone,
    ) -> Result<(bool, LimitCertificate)> {
        let r = self.reindex_diagram(fib, diagram, f)?;
        if !r.report.ok() {
            return Err(Error::incons(format!("reindexing is incoherent: {}", r.report)));
        }
        let (c, report) = self.reindex_cone(fib, &r, cone)?;
        if !report.ok() {
            return Err(Error::incons(format!("the reindexed cone is incoherent: {report}")));
        }
        is_limit(&r.f_bar_fiber, &c, &self.bounds)
    }

    /// Limit of `J` in `E` from the limit of `J·p` in the base and a limit
    /// of the lifted diagram in the fiber over its apex. Each hypothesis is
    /// checked on the instance, and the result is certified in `E`.
    pub fn lift_limit(
        &self,
        j: &Arc<LaxFunctor>,
        mode: Mode,
        base_limit: Option<Cone>,
        fiber_limit: Option<Cone>,
    ) -> Result<LiftedLimit> {
        let jp = Arc::new(compose_functors(j, &self.p)?);
        let base = match base_limit {
            Some(c) => {
                if !is_limit(&jp, &c, &self.bounds)?.0 {
                    return Err(hypothesis(LimitHypothesis::BaseLimit));
                }
                c
            }
            None => find_limit(&jp, mode, &self.bounds)?
                .ok_or(hypothesis(LimitHypothesis::BaseLimit))?
                .0,
        };
        let s = base.apex;

        let lifted = canonical_lift_with(&self.section, &base.legs, j, mode)?;
        if !lifted.report.ok() {
            return Err(Error::incons(format!("canonical lift is incoherent: {}", lifted.report)));
        }

        let fib = self.fiber(s)?;
        let s_bar = Arc::new(fib.restrict(&lifted.f_bar)?);
        let fiber_cone = match fiber_limit {
            Some(c) => {
                if !is_limit(&s_bar, &c, &self.bounds)?.0 {
                    return Err(hypothesis(LimitHypothesis::FiberLimit));
                }
                c
            }
            None => find_limit(&s_bar, mode, &self.bounds)?
                .ok_or(hypothesis(LimitHypothesis::FiberLimit))?
                .0,
        };
        let base_b = &*self.p.target;
        let into_s: Vec<One> = base_b.ones().filter(|&g| base_b.tgt1(g) == s).collect();
        for &g in &into_s {
            if !self.preserves_limit(g, &fib, &s_bar, &fiber_cone)?.0 {
                return Err(hypothesis(LimitHypothesis::Preservation(
                    base_b.one_name(g).to_string(),
                )));
            }
        }

        let apex = fib.obs[fiber_cone.apex.index()];
        let delta = Arc::new(constant_functor(j.source.clone(), self.p.source.clone(), apex)?);
        let legs_e = postwhisker_onto(&fiber_cone.legs, &fib.inclusion, delta, lifted.f_bar.clone())?;
        let legs = Arc::new(vcomp_transformations(&legs_e, &lifted.tau_bar)?);
        let cone = Cone::new(apex, legs, mode)?;
        let (holds, certificate) = is_limit(j, &cone, &self.bounds)?;
        if !holds {
            return Err(Error::incons(format!(
                "the lifted cone is not a limit: comparison fails at {}",
                certificate
                    .counterexample()
                    .map(|x| self.p.source.ob_name(x).to_string())
                    .unwrap_or_default()
            )));
        }
        Ok(LiftedLimit {
            cone,
            certificate,
            base,
            lifted,
            fiber: fib,
            fiber_cone,
            preserved_along: into_s,
        })
    }
}

/// Reindexes a diagram in the fiber `fib` along `f`; see
/// [`LimitLifter::reindex_diagram`].
pub fn reindex_diagram(
    p: &Arc<LaxFunctor>,
    cl: &Cleavage,
    fib: &FiberBicategory,
    diagram: &Arc<LaxFunctor>,
    f: One,
    bounds: &SizeBounds,
) -> Result<Reindexing> {
    LimitLifter::new(p, cl, bounds)?.reindex_diagram(fib, diagram, f)
}

pub fn preserves_limit(
    p: &Arc<LaxFunctor>,
    cl: &Cleavage,
    f: One,
    fib: &FiberBicategory,
    diagram: &Arc<LaxFunctor>,
    cone: &Cone,
    bounds: &SizeBounds,
) -> Result<(bool, LimitCertificate)> {
    LimitLifter::new(p, cl, bounds)?.preserves_limit(f, fib, diagram, cone)
}

pub fn lift_limit(
    p: &Arc<LaxFunctor>,
    cl: &Cleavage,
    j: &Arc<LaxFunctor>,
    mode: Mode,
    base_limit: Option<Cone>,
    fiber_limit: Option<Cone>,
    bounds: &SizeBounds,
) -> Result<LiftedLimit> {
    LimitLifter::new(p, cl, bounds)?.lift_limit(j, mode, base_limit, fiber_limit)
}
