//! Cartesian cells and fibrations of bicategories.
//!
//! A lifting problem for `f : x → y` is `(g : z → y, h : pz → px,
//! α : h · pf ⇒ pg)`; a lift is `(ĥ : z → x, α̂ : ĥ · f ⇒ g, β̂ : pĥ ⇒ h)`.
//! Both composites are taken in the order "`ĥ` then `f`".

mod cleavage;

pub use cleavage::{
    cartesian_lift_1cell, factor_2cell, lift_triple_noninvertible, lift_triple_strict,
    synthesize_cleavage, unique_2cell_test, validate_cleavage, Cleavage, SeedOrder,
};

use std::collections::BTreeMap;

use crate::classical::{cartesian_failure, grothendieck_fibration_1cat};
use crate::error::{Error, Result};
use crate::functor::{HomFunctors, LaxFunctor};
use crate::ids::{Ob, One, Two};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiftProblem {
    pub g: One,
    pub h: One,
    pub alpha: Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lift {
    pub h_hat: One,
    pub alpha_hat: Two,
    pub beta_hat: Two,
}

/// A yes/no answer with the first failing instance, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub counterexample: Option<String>,
}

impl Verdict {
    pub fn yes() -> Verdict {
        Verdict {
            holds: true,
            counterexample: None,
        }
    }
    pub fn no(why: impl Into<String>) -> Verdict {
        Verdict {
            holds: false,
            counterexample: Some(why.into()),
        }
    }
}

/// A functor together with all of its hom functors, so that repeated
/// Cartesianity questions do not rebuild hom categories.
#[derive(Debug, Clone)]
pub struct FibrationContext<'a> {
    pub p: &'a LaxFunctor,
    pub homs: HomFunctors,
}

impl<'a> FibrationContext<'a> {
    pub fn new(p: &'a LaxFunctor) -> Result<FibrationContext<'a>> {
        p.check_structure()?;
        Ok(FibrationContext {
            p,
            homs: HomFunctors::new(p)?,
        })
    }

    /// Cartesian in the 1-categorical sense for the hom functor.
    pub fn is_cartesian_2cell(&self, s: Two) -> bool {
        let e = &*self.p.source;
        let f = e.src2(s);
        let hf = self.homs.get(e.src1(f), e.tgt1(f));
        let local = hf.src.mor(s).expect("2-cell in its hom");
        cartesian_failure(&hf.functor, local).is_none()
    }

    pub fn locally_fibred(&self) -> Verdict {
        let e = &*self.p.source;
        for x in e.obs() {
            for y in e.obs() {
                let hf = self.homs.get(x, y);
                let v = grothendieck_fibration_1cat(&hf.functor, false);
                if let Some((k, m)) = v.missing {
                    return Verdict::no(format!(
                        "hom ({}, {}): no Cartesian lift of {} at {}",
                        e.ob_name(x),
                        e.ob_name(y),
                        self.p.target.two_name(hf.tgt.two_of(m)),
                        e.one_name(hf.src.one_of(k)),
                    ));
                }
            }
        }
        Verdict::yes()
    }

    fn require_strict_locally_fibred(&self) -> Result<()> {
        if !self.p.strict {
            return Err(Error::pre("functor is not strict"));
        }
        let v = self.locally_fibred();
        if !v.holds {
            return Err(Error::pre(format!(
                "functor is not locally fibred: {}",
                v.counterexample.unwrap_or_default()
            )));
        }
        Ok(())
    }

    /// Lifting problems for `f` at every `z`, grouped by `z`.
    pub fn problems(&self, f: One, invertible: bool) -> Vec<(Ob, Vec<LiftProblem>)> {
        let (e, b, p) = (&*self.p.source, &*self.p.target, self.p);
        let (x, y) = (e.src1(f), e.tgt1(f));
        let pf = p.one(f);
        let mut out = Vec::new();
        for z in e.obs() {
            let mut probs = Vec::new();
            for &g in e.hom(z, y) {
                for &h in b.hom(p.ob(z), p.ob(x)) {
                    let Some(hpf) = b.hcomp1(h, pf) else { continue };
                    for &alpha in b.between(hpf, p.one(g)) {
                        if !invertible || b.is_invertible(alpha) {
                            probs.push(LiftProblem { g, h, alpha });
                        }
                    }
                }
            }
            out.push((z, probs));
        }
        out
    }

    /// Whether `(ĥ, α̂, β̂)` satisfies `(β̂ · pf) | α = μ_{ĥ,f} | pα̂`.
    pub fn lift_equation(&self, f: One, prob: &LiftProblem, lift: &Lift) -> Result<bool> {
        let (e, b, p) = (&*self.p.source, &*self.p.target, self.p);
        if e.src2(lift.alpha_hat) != e.c(lift.h_hat, f)?
            || e.tgt2(lift.alpha_hat) != prob.g
            || b.src2(lift.beta_hat) != p.one(lift.h_hat)
            || b.tgt2(lift.beta_hat) != prob.h
        {
            return Ok(false);
        }
        let lhs = b.v(b.rw(lift.beta_hat, p.one(f))?, prob.alpha)?;
        let rhs = b.v(p.lax_comp(lift.h_hat, f)?, p.two(lift.alpha_hat))?;
        Ok(lhs == rhs)
    }

    /// All strict lifts: `pĥ = h`, `β̂` the identity, `α̂` invertible
    /// (or merely satisfying the equation when `invertible` is false).
    pub fn strict_lifts(&self, f: One, prob: &LiftProblem, invertible: bool) -> Result<Vec<Lift>> {
        let (e, b, p) = (&*self.p.source, &*self.p.target, self.p);
        let (z, x) = (e.src1(prob.g), e.src1(f));
        let mut out = Vec::new();
        for &hh in e.hom(z, x) {
            if p.one(hh) != prob.h {
                continue;
            }
            let hf = e.c(hh, f)?;
            for &ah in e.between(hf, prob.g) {
                if invertible && !e.is_invertible(ah) {
                    continue;
                }
                let lift = Lift {
                    h_hat: hh,
                    alpha_hat: ah,
                    beta_hat: b.id2(prob.h),
                };
                if self.lift_equation(f, prob, &lift)? {
                    out.push(lift);
                }
            }
        }
        Ok(out)
    }

    /// All lifts in the weak sense: `β̂` any 2-isomorphism.
    pub fn weak_lifts(&self, f: One, prob: &LiftProblem) -> Result<Vec<Lift>> {
        let (e, b, p) = (&*self.p.source, &*self.p.target, self.p);
        let (z, x) = (e.src1(prob.g), e.src1(f));
        let mut out = Vec::new();
        for &hh in e.hom(z, x) {
            let hf = e.c(hh, f)?;
            let betas: Vec<Two> = b.isos_between(p.one(hh), prob.h).collect();
            if betas.is_empty() {
                continue;
            }
            for &ah in e.between(hf, prob.g) {
                if !e.is_invertible(ah) {
                    continue;
                }
                for &bh in &betas {
                    let lift = Lift {
                        h_hat: hh,
                        alpha_hat: ah,
                        beta_hat: bh,
                    };
                    if self.lift_equation(f, prob, &lift)? {
                        out.push(lift);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Whether `(δ, σ)` is a morphism of lifting problems:
    /// `α | pσ = (δ · pf) | α′`.
    pub fn compatible(
        &self,
        f: One,
        p1: &LiftProblem,
        p2: &LiftProblem,
        delta: Two,
        sigma: Two,
    ) -> Result<bool> {
        let (b, p) = (&*self.p.target, self.p);
        let lhs = b.v(p1.alpha, p.two(sigma))?;
        let rhs = b.v(b.rw(delta, p.one(f))?, p2.alpha)?;
        Ok(lhs == rhs)
    }

    /// The 2-cells `δ̂ : ĥ ⇒ ĥ′` with `β̂ | δ = pδ̂ | β̂′` and
    /// `(δ̂ · f) | α̂′ = α̂ | σ`.
    pub fn factorizations(
        &self,
        f: One,
        l1: &Lift,
        l2: &Lift,
        delta: Two,
        sigma: Two,
    ) -> Result<Vec<Two>> {
        let (e, b, p) = (&*self.p.source, &*self.p.target, self.p);
        let over = b.v(l1.beta_hat, delta)?;
        let target = e.v(l1.alpha_hat, sigma)?;
        let mut out = Vec::new();
        for &d in e.between(l1.h_hat, l2.h_hat) {
            if b.v(p.two(d), l2.beta_hat)? == over && e.v(e.rw(d, f)?, l2.alpha_hat)? == target {
                out.push(d);
            }
        }
        Ok(out)
    }

    fn uniqueness_clause(
        &self,
        f: One,
        lifted: &[(LiftProblem, Vec<Lift>)],
    ) -> Result<Option<String>> {
        let (e, b) = (&*self.p.source, &*self.p.target);
        for (p1, lifts1) in lifted {
            for (p2, lifts2) in lifted {
                for &delta in b.between(p1.h, p2.h) {
                    for &sigma in e.between(p1.g, p2.g) {
                        if !self.compatible(f, p1, p2, delta, sigma)? {
                            continue;
                        }
                        for l1 in lifts1 {
                            for l2 in lifts2 {
                                let n = self.factorizations(f, l1, l2, delta, sigma)?.len();
                                if n != 1 {
                                    return Ok(Some(format!(
                                        "{} factorizations of ({}, {}) between lifts {} and {}",
                                        n,
                                        b.two_name(delta),
                                        e.two_name(sigma),
                                        e.one_name(l1.h_hat),
                                        e.one_name(l2.h_hat)
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// Cartesianity with strict lifts; requires `p` strict and locally fibred.
    pub fn cartesian_1cell_strict(&self, f: One) -> Result<Verdict> {
        self.require_strict_locally_fibred()?;
        self.cartesian_1cell_strict_unchecked(f)
    }

    pub(crate) fn cartesian_1cell_strict_unchecked(&self, f: One) -> Result<Verdict> {
        let (e, b) = (&*self.p.source, &*self.p.target);
        for (_, probs) in self.problems(f, true) {
            let mut lifted = Vec::with_capacity(probs.len());
            for prob in probs {
                let lifts = self.strict_lifts(f, &prob, true)?;
                if lifts.is_empty() {
                    return Ok(Verdict::no(format!(
                        "no strict lift of ({}, {}, {})",
                        e.one_name(prob.g),
                        b.one_name(prob.h),
                        b.two_name(prob.alpha)
                    )));
                }
                lifted.push((prob, lifts));
            }
            if let Some(why) = self.uniqueness_clause(f, &lifted)? {
                return Ok(Verdict::no(why));
            }
        }
        Ok(Verdict::yes())
    }

    /// Cartesianity as defined, with `β̂` ranging over all 2-isomorphisms.
    pub fn cartesian_1cell_def(&self, f: One) -> Result<Verdict> {
        let (e, b) = (&*self.p.source, &*self.p.target);
        for (_, probs) in self.problems(f, true) {
            let mut lifted = Vec::with_capacity(probs.len());
            for prob in probs {
                let lifts = self.weak_lifts(f, &prob)?;
                if lifts.is_empty() {
                    return Ok(Verdict::no(format!(
                        "no lift of ({}, {}, {})",
                        e.one_name(prob.g),
                        b.one_name(prob.h),
                        b.two_name(prob.alpha)
                    )));
                }
                lifted.push((prob, lifts));
            }
            if let Some(why) = self.uniqueness_clause(f, &lifted)? {
                return Ok(Verdict::no(why));
            }
        }
        Ok(Verdict::yes())
    }

    /// Cartesian 1-cells by the strict test when `p` is strict and locally
    /// fibred, by the definition otherwise.
    pub fn cartesian_1cell(&self, f: One) -> Result<Verdict> {
        if self.p.strict && self.locally_fibred().holds {
            self.cartesian_1cell_strict_unchecked(f)
        } else {
            self.cartesian_1cell_def(f)
        }
    }

    pub fn fibration(&self) -> Result<FibrationReport> {
        let (e, b, p) = (&*self.p.source, &*self.p.target, self.p);
        let mut report = FibrationReport::default();
        let local = self.locally_fibred();
        if !local.holds {
            report.failure = Some(FibrationFailure::NotLocallyFibred(
                local.counterexample.unwrap_or_default(),
            ));
            return Ok(report);
        }
        let use_strict = p.strict;
        let mut cart: BTreeMap<One, bool> = BTreeMap::new();
        for y in e.obs() {
            for x in b.obs() {
                for &f in b.hom(x, p.ob(y)) {
                    let mut found = None;
                    for w in e.obs() {
                        for &h in e.hom(w, y) {
                            if p.one(h) != f {
                                continue;
                            }
                            let ok = match cart.get(&h) {
                                Some(&ok) => ok,
                                None => {
                                    let v = if use_strict {
                                        self.cartesian_1cell_strict_unchecked(h)?
                                    } else {
                                        self.cartesian_1cell_def(h)?
                                    };
                                    cart.insert(h, v.holds);
                                    v.holds
                                }
                            };
                            if ok {
                                found = Some(h);
                                break;
                            }
                        }
                        if found.is_some() {
                            break;
                        }
                    }
                    match found {
                        Some(h) => {
                            report.lifts.insert((y, f), h);
                        }
                        None => {
                            report.failure = Some(FibrationFailure::NoCartesianLift {
                                object: e.ob_name(y).into(),
                                base: b.one_name(f).into(),
                            });
                            return Ok(report);
                        }
                    }
                }
            }
        }
        if let Some((s, t)) = self.composite_failure()? {
            report.failure = Some(FibrationFailure::CompositeNotCartesian(
                e.two_name(s).into(),
                e.two_name(t).into(),
            ));
        }
        Ok(report)
    }

    /// First pair of Cartesian 2-cells whose horizontal composite is not.
    pub fn composite_failure(&self) -> Result<Option<(Two, Two)>> {
        let e = &*self.p.source;
        let cart: Vec<bool> = e.twos().map(|s| self.is_cartesian_2cell(s)).collect();
        for s in e.twos() {
            if !cart[s.index()] {
                continue;
            }
            let y = e.tgt1(e.src2(s));
            for &g in e.out_of(y) {
                for &t in e.twos_from(g) {
                    if cart[t.index()] && !self.is_cartesian_2cell(e.h(s, t)?) {
                        return Ok(Some((s, t)));
                    }
                }
            }
        }
        Ok(None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FibrationFailure {
    NotLocallyFibred(String),
    NoCartesianLift { object: String, base: String },
    CompositeNotCartesian(String, String),
}

impl std::fmt::Display for FibrationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FibrationFailure::NotLocallyFibred(w) => write!(f, "not locally fibred: {w}"),
            FibrationFailure::NoCartesianLift { object, base } => {
                write!(f, "no Cartesian lift of {base} with codomain {object}")
            }
            FibrationFailure::CompositeNotCartesian(s, t) => {
                write!(f, "composite of Cartesian 2-cells {s} and {t} is not Cartesian")
            }
        }
    }
}

/// Result of the fibration check, with the Cartesian lifts found, keyed by
/// `(codomain, base 1-cell)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FibrationReport {
    pub lifts: BTreeMap<(Ob, One), One>,
    pub failure: Option<FibrationFailure>,
}

impl FibrationReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn is_cartesian_2cell(p: &LaxFunctor, s: Two) -> Result<bool> {
    let e = &*p.source;
    let f = e.src2(s);
    let hf = p.hom_functor(e.src1(f), e.tgt1(f))?;
    let local = hf.src.mor(s).ok_or_else(|| Error::incons("2-cell outside its hom"))?;
    Ok(cartesian_failure(&hf.functor, local).is_none())
}

pub fn is_locally_fibred(p: &LaxFunctor) -> Result<Verdict> {
    Ok(FibrationContext::new(p)?.locally_fibred())
}

pub fn is_cartesian_1cell_strict(p: &LaxFunctor, f: One) -> Result<bool> {
    Ok(FibrationContext::new(p)?.cartesian_1cell_strict(f)?.holds)
}

pub fn is_cartesian_1cell_def(p: &LaxFunctor, f: One) -> Result<bool> {
    Ok(FibrationContext::new(p)?.cartesian_1cell_def(f)?.holds)
}

pub fn is_fibration(p: &LaxFunctor) -> Result<bool> {
    Ok(FibrationContext::new(p)?.fibration()?.holds())
}

/// The full fibration check with witnesses.
pub fn fibration_report(p: &LaxFunctor) -> Result<FibrationReport> {
    FibrationContext::new(p)?.fibration()
}
