//! Cleavages of strict fibrations and the lifting operations built on them.

use std::collections::{BTreeMap, BTreeSet};

use super::{FibrationContext, Lift, LiftProblem};
use crate::classical::grothendieck_fibration_1cat;
use crate::error::{Error, Result};
use crate::functor::LaxFunctor;
use crate::ids::{Ob, One, Two};
use crate::report::{Axiom, CoherenceReport};

/// Which witness to choose when several exist: least or greatest cell id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SeedOrder {
    #[default]
    Asc,
    Desc,
}

impl SeedOrder {
    pub fn parse(s: &str) -> Option<SeedOrder> {
        match s {
            "asc" => Some(SeedOrder::Asc),
            "desc" => Some(SeedOrder::Desc),
            _ => None,
        }
    }

    fn pick<T: Ord + Copy>(self, items: impl IntoIterator<Item = T>) -> Option<T> {
        let it = items.into_iter();
        match self {
            SeedOrder::Asc => it.min(),
            SeedOrder::Desc => it.max(),
        }
    }
}

/// Chosen lifts for a strict fibration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cleavage {
    /// `(e, f : b → pe)` ↦ Cartesian 1-cell over `f` with codomain `e`.
    pub lift1: BTreeMap<(Ob, One), One>,
    /// `(Cartesian f, invertible problem)` ↦ strict lift `(ĥ, α̂)`.
    pub lift_triple: BTreeMap<(One, LiftProblem), (One, Two)>,
    /// `(k, θ : b ⇒ pk)` ↦ Cartesian 2-cell over `θ` with codomain `k`.
    pub local: BTreeMap<(One, Two), Two>,
}

impl<'a> FibrationContext<'a> {
    /// Strict Cartesianity of every 1-cell of the source.
    pub fn cartesian_flags(&self) -> Result<Vec<bool>> {
        self.p
            .source
            .ones()
            .map(|f| Ok(self.cartesian_1cell_strict_unchecked(f)?.holds))
            .collect()
    }

    pub fn synthesize(&self, order: SeedOrder) -> Result<Cleavage> {
        self.require_strict_locally_fibred()?;
        let (e, b, p) = (&*self.p.source, &*self.p.target, self.p);
        let cart = self.cartesian_flags()?;
        let mut cl = Cleavage::default();
        for y in e.obs() {
            for x in b.obs() {
                for &f in b.hom(x, p.ob(y)) {
                    let cands = e
                        .ones()
                        .filter(|&h| e.tgt1(h) == y && p.one(h) == f && cart[h.index()]);
                    let h = order.pick(cands).ok_or_else(|| {
                        Error::MissingCleavage(format!(
                            "no Cartesian lift of {} with codomain {}",
                            b.one_name(f),
                            e.ob_name(y)
                        ))
                    })?;
                    cl.lift1.insert((y, f), h);
                }
            }
        }
        for f in e.ones().filter(|f| cart[f.index()]) {
            for (_, probs) in self.problems(f, true) {
                for prob in probs {
                    let lifts = self.strict_lifts(f, &prob, true)?;
                    let l = order
                        .pick(lifts.iter().map(|l| (l.h_hat, l.alpha_hat)))
                        .ok_or_else(|| Error::incons("Cartesian 1-cell without a strict lift"))?;
                    cl.lift_triple.insert((f, prob), l);
                }
            }
        }
        for x in e.obs() {
            for y in e.obs() {
                let hf = self.homs.get(x, y);
                let v = grothendieck_fibration_1cat(&hf.functor, order == SeedOrder::Desc);
                for ((k, theta), rho) in v.lifts {
                    cl.local
                        .insert((hf.src.one_of(k), hf.tgt.two_of(theta)), hf.src.two_of(rho));
                }
            }
        }
        Ok(cl)
    }

    pub fn validate_cleavage(&self, cl: &Cleavage) -> Result<CoherenceReport> {
        self.require_strict_locally_fibred()?;
        let (e, b, p) = (&*self.p.source, &*self.p.target, self.p);
        let mut r = CoherenceReport::new();
        let cart = self.cartesian_flags()?;

        let mut keys1 = BTreeSet::new();
        for y in e.obs() {
            for x in b.obs() {
                for &f in b.hom(x, p.ob(y)) {
                    keys1.insert((y, f));
                    match cl.lift1.get(&(y, f)) {
                        None => r.push(
                            Axiom::CleavageCompleteness,
                            vec![e.ob_name(y).into(), b.one_name(f).into()],
                        ),
                        Some(&h) => {
                            if h.index() >= e.one_count()
                                || e.tgt1(h) != y
                                || p.one(h) != f
                                || !cart[h.index()]
                            {
                                r.push(
                                    Axiom::CleavageCartesian,
                                    vec![e.ob_name(y).into(), b.one_name(f).into()],
                                );
                            }
                        }
                    }
                }
            }
        }
        if cl.lift1.keys().any(|k| !keys1.contains(k)) {
            r.push(Axiom::CleavageCompleteness, vec!["lift1: unexpected key".into()]);
        }

        let mut keys3 = BTreeSet::new();
        for f in e.ones().filter(|f| cart[f.index()]) {
            for (_, probs) in self.problems(f, true) {
                for prob in probs {
                    keys3.insert((f, prob));
                    let cells = || {
                        vec![
                            e.one_name(f).into(),
                            e.one_name(prob.g).into(),
                            b.one_name(prob.h).into(),
                            b.two_name(prob.alpha).into(),
                        ]
                    };
                    match cl.lift_triple.get(&(f, prob)) {
                        None => r.push(Axiom::CleavageCompleteness, cells()),
                        Some(&(hh, ah)) => {
                            let ok = hh.index() < e.one_count()
                                && ah.index() < e.two_count()
                                && e.src1(hh) == e.src1(prob.g)
                                && e.tgt1(hh) == e.src1(f)
                                && p.one(hh) == prob.h
                                && e.is_invertible(ah)
                                && self.lift_equation(
                                    f,
                                    &prob,
                                    &Lift {
                                        h_hat: hh,
                                        alpha_hat: ah,
                                        beta_hat: b.id2(prob.h),
                                    },
                                )?;
                            if !ok {
                                r.push(Axiom::CleavageLift, cells());
                            }
                        }
                    }
                }
            }
        }
        if cl.lift_triple.keys().any(|k| !keys3.contains(k)) {
            r.push(Axiom::CleavageCompleteness, vec!["lift_triple: unexpected key".into()]);
        }

        let mut keys2 = BTreeSet::new();
        for k in e.ones() {
            let pk = p.one(k);
            for c in b.hom(b.src1(pk), b.tgt1(pk)) {
                for &theta in b.between(*c, pk) {
                    keys2.insert((k, theta));
                    match cl.local.get(&(k, theta)) {
                        None => r.push(
                            Axiom::CleavageCompleteness,
                            vec![e.one_name(k).into(), b.two_name(theta).into()],
                        ),
                        Some(&rho) => {
                            if rho.index() >= e.two_count()
                                || e.tgt2(rho) != k
                                || p.two(rho) != theta
                                || !self.is_cartesian_2cell(rho)
                            {
                                r.push(
                                    Axiom::CleavageCartesian,
                                    vec![e.one_name(k).into(), b.two_name(theta).into()],
                                );
                            }
                        }
                    }
                }
            }
        }
        if cl.local.keys().any(|k| !keys2.contains(k)) {
            r.push(Axiom::CleavageCompleteness, vec!["local: unexpected key".into()]);
        }
        Ok(r)
    }

    /// The chosen strict lift, or the least one found by search when the
    /// cleavage has no entry.
    pub fn lift_strict(&self, cl: &Cleavage, f: One, prob: &LiftProblem) -> Result<Lift> {
        let b = &*self.p.target;
        if !b.is_invertible(prob.alpha) {
            return Err(Error::pre("strict lifting needs an invertible 2-cell"));
        }
        let id = b.id2(prob.h);
        if let Some(&(h_hat, alpha_hat)) = cl.lift_triple.get(&(f, *prob)) {
            return Ok(Lift {
                h_hat,
                alpha_hat,
                beta_hat: id,
            });
        }
        self.strict_lifts(f, prob, true)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::incons("no strict lift found; the 1-cell is not Cartesian"))
    }

    /// Lift with a not necessarily invertible `α`: factor `α` through the
    /// chosen local Cartesian 2-cell `ρ : k ⇒ g`, lift `k` strictly along `f`
    /// as `γ : ĥ · f ≅ k`, and return `α̂ = γ | ρ`.
    pub fn lift_noninvertible(&self, cl: &Cleavage, f: One, prob: &LiftProblem) -> Result<Lift> {
        let (e, b) = (&*self.p.source, &*self.p.target);
        let rho = *cl.local.get(&(prob.g, prob.alpha)).ok_or_else(|| {
            Error::MissingCleavage(format!(
                "no local lift of {} at {}",
                b.two_name(prob.alpha),
                e.one_name(prob.g)
            ))
        })?;
        let k = e.src2(rho);
        let hpf = b.src2(prob.alpha);
        let inner = LiftProblem {
            g: k,
            h: prob.h,
            alpha: b.id2(hpf),
        };
        let l = self.lift_strict(cl, f, &inner)?;
        Ok(Lift {
            h_hat: l.h_hat,
            alpha_hat: e.v(l.alpha_hat, rho)?,
            beta_hat: b.id2(prob.h),
        })
    }

    /// The unique `δ̂` relating two lifts over a morphism `(δ, σ)` of
    /// lifting problems.
    #[allow(clippy::too_many_arguments)]
    pub fn factor(
        &self,
        f: One,
        p1: &LiftProblem,
        l1: &Lift,
        p2: &LiftProblem,
        l2: &Lift,
        delta: Two,
        sigma: Two,
    ) -> Result<Two> {
        if !self.compatible(f, p1, p2, delta, sigma)? {
            return Err(Error::pre(
                "(δ, σ) is not a morphism of lifting problems: α | pσ ≠ (δ · pf) | α′",
            ));
        }
        let found = self.factorizations(f, l1, l2, delta, sigma)?;
        match found.as_slice() {
            [d] => Ok(*d),
            [] => Err(Error::incons("no 2-cell factors the morphism of lifting problems")),
            _ => Err(Error::incons(format!(
                "{} 2-cells factor the morphism of lifting problems",
                found.len()
            ))),
        }
    }

    /// Premises of the uniqueness test; a counterexample to the conclusion
    /// is reported as an inconsistency.
    pub fn unique_2cell(&self, f: One, alpha: Two, d1: Two, d2: Two) -> Result<bool> {
        let (e, p) = (&*self.p.source, self.p);
        let premises = p.two(d1) == p.two(d2)
            && e.v(e.rw(d1, f)?, alpha)? == e.v(e.rw(d2, f)?, alpha)?;
        if premises && d1 != d2 {
            return Err(Error::Inconsistency(format!(
                "distinct 2-cells {} and {} agree over the base and after pasting with {}",
                e.two_name(d1),
                e.two_name(d2),
                e.two_name(alpha)
            )));
        }
        Ok(premises)
    }
}

pub fn synthesize_cleavage(p: &LaxFunctor, order: SeedOrder) -> Result<Cleavage> {
    FibrationContext::new(p)?.synthesize(order)
}

pub fn validate_cleavage(p: &LaxFunctor, cl: &Cleavage) -> Result<CoherenceReport> {
    FibrationContext::new(p)?.validate_cleavage(cl)
}

/// The chosen Cartesian lift of `f : b → pe` with codomain `e`.
pub fn cartesian_lift_1cell(p: &LaxFunctor, cl: &Cleavage, f: One, e: Ob) -> Result<One> {
    let h = *cl.lift1.get(&(e, f)).ok_or_else(|| {
        Error::MissingCleavage(format!(
            "no chosen lift of {} with codomain {}",
            p.target.one_name(f),
            p.source.ob_name(e)
        ))
    })?;
    if p.one(h) != f || p.source.tgt1(h) != e {
        return Err(Error::incons("chosen lift does not lie over its input"));
    }
    Ok(h)
}

pub fn lift_triple_strict(
    p: &LaxFunctor,
    cl: &Cleavage,
    f: One,
    prob: &LiftProblem,
) -> Result<Lift> {
    FibrationContext::new(p)?.lift_strict(cl, f, prob)
}

pub fn lift_triple_noninvertible(
    p: &LaxFunctor,
    cl: &Cleavage,
    f: One,
    prob: &LiftProblem,
) -> Result<Lift> {
    FibrationContext::new(p)?.lift_noninvertible(cl, f, prob)
}

#[allow(clippy::too_many_arguments)]
pub fn factor_2cell(
    p: &LaxFunctor,
    f: One,
    p1: &LiftProblem,
    l1: &Lift,
    p2: &LiftProblem,
    l2: &Lift,
    delta: Two,
    sigma: Two,
) -> Result<Two> {
    FibrationContext::new(p)?.factor(f, p1, l1, p2, l2, delta, sigma)
}

/// Checks the premises on `f` and `α` being Cartesian, then runs the test.
pub fn unique_2cell_test(p: &LaxFunctor, f: One, alpha: Two, d1: Two, d2: Two) -> Result<bool> {
    let ctx = FibrationContext::new(p)?;
    if !ctx.cartesian_1cell(f)?.holds {
        return Err(Error::pre("the 1-cell is not Cartesian"));
    }
    if !ctx.is_cartesian_2cell(alpha) {
        return Err(Error::pre("the 2-cell is not Cartesian"));
    }
    ctx.unique_2cell(f, alpha, d1, d2)
}
