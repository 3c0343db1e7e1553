//! Pseudo and oplax limits in finite bicategories, decided as
//! hom-equivalences onto cone categories; fibers, reindexing, and lifting
//! limits along a fibration.

mod fiber;
mod lift;

pub use fiber::{fiber, FiberBicategory};
pub use lift::{
    lift_limit, preserves_limit, reindex_diagram, LiftedLimit, LimitLifter, Reindexing,
};

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::bicategory::{Bicategory, FreshNames};
use crate::bounds::SizeBounds;
use crate::category::{CatFunctor, Category, CategoryBuilder};
use crate::classical::{equivalence_1cat, EquivalenceFailure, EquivalenceWitness};
use crate::error::{Error, Result};
use crate::functor::{
    constant_functor, enumerate_modifications, enumerate_transformations, tables_equal,
    validate_transformation, vcomp_transformations, LaxFunctor, Mode, Modification,
    OplaxTransformation,
};
use crate::groth::equivalence_1cell;
use crate::ids::{Mor, Ob, Obj, One, Two};

/// A cone `Δ_x ⇒ J` of the given mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub apex: Ob,
    pub legs: Arc<OplaxTransformation>,
    pub mode: Mode,
}

impl Cone {
    /// Checks the legs against the apex and validates them in the mode.
    pub fn new(apex: Ob, legs: Arc<OplaxTransformation>, mode: Mode) -> Result<Cone> {
        let delta = constant_functor(legs.shape().clone(), legs.codomain().clone(), apex)?;
        if !tables_equal(&legs.source, &delta) {
            return Err(Error::ShapeMismatch("the legs do not start at the constant functor".into()));
        }
        let r = validate_transformation(&legs, mode)?;
        if !r.ok() {
            return Err(Error::pre(format!("the legs are not a {} cone: {r}", mode.name())));
        }
        Ok(Cone { apex, legs, mode })
    }
}

/// Cones at `x` and modifications between them.
#[derive(Debug, Clone)]
pub struct ConeCategory {
    pub apex: Ob,
    pub delta: Arc<LaxFunctor>,
    pub category: Arc<Category>,
    pub cones: Vec<Arc<OplaxTransformation>>,
    pub morphisms: Vec<Modification>,
    cone_index: HashMap<(Vec<One>, Vec<Two>), Obj>,
    mor_index: HashMap<(Obj, Obj, Vec<Two>), Mor>,
}

impl ConeCategory {
    pub fn cone_of(&self, t: &OplaxTransformation) -> Option<Obj> {
        self.cone_index.get(&(t.comp1.clone(), t.comp2.clone())).copied()
    }

    pub fn morphism_of(&self, src: Obj, tgt: Obj, comp: &[Two]) -> Option<Mor> {
        self.mor_index.get(&(src, tgt, comp.to_vec())).copied()
    }
}

fn leg_name(e: &Bicategory, t: &OplaxTransformation) -> String {
    let legs: Vec<_> = t.comp1.iter().map(|&c| e.one_name(c)).collect();
    format!("<{}>", legs.join(","))
}

/// The category of `mode`-cones over `j` with apex `x`, by enumeration.
pub fn cone_category(
    j: &Arc<LaxFunctor>,
    x: Ob,
    mode: Mode,
    bounds: &SizeBounds,
) -> Result<ConeCategory> {
    let e = &*j.target;
    let delta = Arc::new(constant_functor(j.source.clone(), j.target.clone(), x)?);
    let cones: Vec<_> = enumerate_transformations(&delta, j, mode, bounds)?
        .into_iter()
        .map(Arc::new)
        .collect();
    let mut cb = CategoryBuilder::new();
    let mut names = FreshNames::default();
    let mut cone_index = HashMap::new();
    for c in &cones {
        let o = cb.object(names.fresh(leg_name(e, c)));
        cone_index.insert((c.comp1.clone(), c.comp2.clone()), o);
    }
    let mut morphisms = Vec::new();
    let mut mor_index = HashMap::new();
    let mut ends = Vec::new();
    let mut names = FreshNames::default();
    for (i, s) in cones.iter().enumerate() {
        for (k, t) in cones.iter().enumerate() {
            for m in enumerate_modifications(s, t, false, bounds)? {
                let (src, tgt) = (Obj::from_index(i), Obj::from_index(k));
                let cells: Vec<_> = m.comp.iter().map(|&c| e.two_name(c)).collect();
                let id = cb.morphism(names.fresh(format!("[{}]", cells.join(","))), src, tgt);
                mor_index.insert((src, tgt, m.comp.clone()), id);
                ends.push((src, tgt));
                morphisms.push(m);
            }
        }
    }
    bounds.check_category(cones.len(), morphisms.len())?;
    let find = |src, tgt, comp: Vec<Two>| {
        mor_index
            .get(&(src, tgt, comp))
            .copied()
            .ok_or_else(|| Error::incons("modifications between cones are not closed under composition"))
    };
    for (i, c) in cones.iter().enumerate() {
        let o = Obj::from_index(i);
        cb.set_identity(o, find(o, o, c.comp1.iter().map(|&l| e.id2(l)).collect())?);
    }
    for (i, m) in morphisms.iter().enumerate() {
        let (src, mid) = ends[i];
        for (k, n) in morphisms.iter().enumerate() {
            let (mid2, tgt) = ends[k];
            if mid2 != mid {
                continue;
            }
            let comp = m
                .comp
                .iter()
                .zip(&n.comp)
                .map(|(&a, &b)| e.v(a, b))
                .collect::<Result<Vec<_>>>()?;
            cb.set_comp(Mor::from_index(i), Mor::from_index(k), find(src, tgt, comp)?);
        }
    }
    Ok(ConeCategory {
        apex: x,
        delta,
        category: Arc::new(cb.build()?),
        cones,
        morphisms,
        cone_index,
        mor_index,
    })
}

/// The comparison functor `E(x, L) → Cone(x)` at one test 0-cell and the
/// outcome of the equivalence check on it.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub test: Ob,
    pub functor: CatFunctor,
    pub outcome: std::result::Result<EquivalenceWitness, EquivalenceFailure>,
}

#[derive(Debug, Clone)]
pub struct LimitCertificate {
    pub apex: Ob,
    pub comparisons: Vec<Comparison>,
}

impl LimitCertificate {
    pub fn holds(&self) -> bool {
        self.comparisons.iter().all(|c| c.outcome.is_ok())
    }

    /// The first test 0-cell whose comparison functor is not an equivalence.
    pub fn counterexample(&self) -> Option<Ob> {
        self.comparisons
            .iter()
            .find(|c| c.outcome.is_err())
            .map(|c| c.test)
    }
}

/// `Δ_g : Δ_x ⇒ Δ_L` for `g : x → L`, with 2-cells `ℓ_g | r_g⁻¹`.
fn constant_transformation(
    e: &Bicategory,
    g: One,
    source: Arc<LaxFunctor>,
    target: Arc<LaxFunctor>,
) -> Result<OplaxTransformation> {
    let a = source.source.clone();
    let cell = e.v(e.lunit(g), e.inv(e.runit(g))?)?;
    Ok(OplaxTransformation {
        source,
        target,
        comp1: vec![g; a.ob_count()],
        comp2: vec![cell; a.one_count()],
    })
}

/// A diagram with its cone categories at every 0-cell of the codomain,
/// computed once and shared by certification and search.
#[derive(Debug, Clone)]
pub struct LimitProblem {
    pub diagram: Arc<LaxFunctor>,
    pub mode: Mode,
    pub cones: Vec<ConeCategory>,
}

impl LimitProblem {
    pub fn new(j: &Arc<LaxFunctor>, mode: Mode, bounds: &SizeBounds) -> Result<LimitProblem> {
        j.check_structure()?;
        let e = &*j.target;
        bounds.check_bicategory(e.ob_count(), e.one_count(), e.two_count())?;
        let cones = e
            .obs()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|x| cone_category(j, x, mode, bounds))
            .collect::<Result<Vec<_>>>()?;
        Ok(LimitProblem {
            diagram: j.clone(),
            mode,
            cones,
        })
    }

    fn comparison(&self, apex: Ob, legs: &Arc<OplaxTransformation>, x: Ob) -> Result<Comparison> {
        let e = &*self.diagram.target;
        let cc = &self.cones[x.index()];
        let hom = e.hom_category(x, apex)?;
        let mut ob = Vec::with_capacity(hom.ones.len());
        for &g in &hom.ones {
            let dg = constant_transformation(e, g, cc.delta.clone(), legs.source.clone())?;
            let c = vcomp_transformations(&dg, legs)?;
            ob.push(cc.cone_of(&c).ok_or_else(|| {
                Error::incons(format!("whiskering {} onto the cone is not a cone", e.one_name(g)))
            })?);
        }
        let mut mor = Vec::with_capacity(hom.twos.len());
        for &theta in &hom.twos {
            let (g, g1) = (e.src2(theta), e.tgt2(theta));
            let comp = legs
                .comp1
                .iter()
                .map(|&l| e.rw(theta, l))
                .collect::<Result<Vec<_>>>()?;
            let (s, t) = (ob[hom.one_local[&g].index()], ob[hom.one_local[&g1].index()]);
            mor.push(cc.morphism_of(s, t, &comp).ok_or_else(|| {
                Error::incons(format!("whiskering {} is not a modification", e.two_name(theta)))
            })?);
        }
        let functor = CatFunctor {
            source: hom.category.clone(),
            target: cc.category.clone(),
            ob,
            mor,
        };
        let outcome = equivalence_1cat(&functor);
        Ok(Comparison {
            test: x,
            functor,
            outcome,
        })
    }

    /// Checks the comparison functor at every test 0-cell.
    pub fn certify(&self, apex: Ob, legs: &Arc<OplaxTransformation>) -> Result<LimitCertificate> {
        let e = &*self.diagram.target;
        if !tables_equal(&legs.target, &self.diagram) {
            return Err(Error::ShapeMismatch("the cone does not end at the diagram".into()));
        }
        if !tables_equal(&legs.source, &self.cones[apex.index()].delta) {
            return Err(Error::ShapeMismatch("the cone does not start at its apex".into()));
        }
        let comparisons = e
            .obs()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|x| self.comparison(apex, legs, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(LimitCertificate { apex, comparisons })
    }

    /// The first certified limit, apexes in id order and cones in
    /// enumeration order.
    pub fn find(&self) -> Result<Option<(Cone, LimitCertificate)>> {
        let found = self
            .cones
            .par_iter()
            .map(|cc| -> Result<Option<(Cone, LimitCertificate)>> {
                for legs in &cc.cones {
                    let cert = self.certify(cc.apex, legs)?;
                    if cert.holds() {
                        let cone = Cone {
                            apex: cc.apex,
                            legs: legs.clone(),
                            mode: self.mode,
                        };
                        return Ok(Some((cone, cert)));
                    }
                }
                Ok(None)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(found.into_iter().flatten().next())
    }
}

/// Whether `cone` is a limit of `j`, with the comparison functors as
/// certificate.
pub fn is_limit(
    j: &Arc<LaxFunctor>,
    cone: &Cone,
    bounds: &SizeBounds,
) -> Result<(bool, LimitCertificate)> {
    let cert = LimitProblem::new(j, cone.mode, bounds)?.certify(cone.apex, &cone.legs)?;
    Ok((cert.holds(), cert))
}

/// Exhaustive search for a limit of `j`.
pub fn find_limit(
    j: &Arc<LaxFunctor>,
    mode: Mode,
    bounds: &SizeBounds,
) -> Result<Option<(Cone, LimitCertificate)>> {
    LimitProblem::new(j, mode, bounds)?.find()
}

/// An equivalence `g : L₁ → L₂` and an invertible modification
/// `Δ_g | τ₂ ⇛ τ₁`, if the two cones are equivalent.
pub fn limit_equivalence(
    c1: &Cone,
    c2: &Cone,
    bounds: &SizeBounds,
) -> Result<Option<(One, Modification)>> {
    if !tables_equal(&c1.legs.target, &c2.legs.target) {
        return Err(Error::ShapeMismatch("cones over different diagrams".into()));
    }
    let e = c1.legs.codomain().clone();
    for &g in e.hom(c1.apex, c2.apex) {
        if equivalence_1cell(&e, g).is_none() {
            continue;
        }
        let dg = constant_transformation(&e, g, c1.legs.source.clone(), c2.legs.source.clone())?;
        let whiskered = Arc::new(vcomp_transformations(&dg, &c2.legs)?);
        if let Some(m) = enumerate_modifications(&whiskered, &c1.legs, true, bounds)?
            .into_iter()
            .next()
        {
            return Ok(Some((g, m)));
        }
    }
    Ok(None)
}
