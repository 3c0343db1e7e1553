//! The fiber of a strict functor over a 0-cell of its base.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bicategory::{Bicategory, BicategoryBuilder, FreshNames};
use crate::bounds::SizeBounds;
use crate::error::{Error, Result};
use crate::functor::{
    compose_functors, constant_functor, tables_equal, Icon, LaxFunctor, OplaxTransformation,
    Variance,
};
use crate::ids::{Ob, One, Two};
use crate::report::CoherenceReport;
use crate::validate::validate_bicategory_with;

/// 0-cells strictly over `b`; 1-cells `(f, φ : pf ≅ 1_b)`; 2-cells `θ`
/// with `pθ | φ′ = φ`. Composites and coherence cells are those of `E`.
#[derive(Debug, Clone)]
pub struct FiberBicategory {
    pub base: Ob,
    pub p: Arc<LaxFunctor>,
    pub bicat: Arc<Bicategory>,
    /// The strict functor forgetting the distinguished isomorphisms.
    pub inclusion: Arc<LaxFunctor>,
    pub obs: Vec<Ob>,
    pub ones: Vec<(One, Two)>,
    pub twos: Vec<Two>,
    pub report: CoherenceReport,
    ob_index: HashMap<Ob, Ob>,
    one_index: HashMap<(One, Two), One>,
    two_index: HashMap<(One, One, Two), Two>,
}

fn missing(what: &str) -> Error {
    Error::incons(format!("the fiber is not closed under {what}"))
}

/// Builds the fiber of the strict functor `p` over `b`.
pub fn fiber(p: &Arc<LaxFunctor>, b: Ob, bounds: &SizeBounds) -> Result<FiberBicategory> {
    p.check_structure()?;
    if !p.strict {
        return Err(Error::pre("fibers are taken for strict functors"));
    }
    let (e, base) = (&*p.source, &*p.target);
    if b.index() >= base.ob_count() {
        return Err(Error::pre("base 0-cell out of range"));
    }
    let one_b = base.id1(b);
    let mut bb = BicategoryBuilder::new();

    let obs: Vec<Ob> = e.obs().filter(|&x| p.ob(x) == b).collect();
    SizeBounds::check("0-cells", obs.len(), bounds.max_obs)?;
    let mut ob_index = HashMap::new();
    for &x in &obs {
        ob_index.insert(x, bb.object(e.ob_name(x)));
    }

    let mut names = FreshNames::default();
    let mut ones = Vec::new();
    let mut one_index = HashMap::new();
    for &x in &obs {
        for &y in &obs {
            for &f in e.hom(x, y) {
                for phi in base.isos_between(p.one(f), one_b) {
                    let name = if base.is_identity(phi) {
                        e.one_name(f).to_string()
                    } else {
                        format!("({},{})", e.one_name(f), base.two_name(phi))
                    };
                    let u = bb.one(names.fresh(name), ob_index[&x], ob_index[&y]);
                    one_index.insert((f, phi), u);
                    ones.push((f, phi));
                    SizeBounds::check("1-cells", ones.len(), bounds.max_ones)?;
                }
            }
        }
    }

    let mut names = FreshNames::default();
    let mut twos = Vec::new();
    let mut two_ends = Vec::new();
    let mut two_index = HashMap::new();
    for (i, &(f, phi)) in ones.iter().enumerate() {
        for (j, &(g, psi)) in ones.iter().enumerate() {
            if e.src1(f) != e.src1(g) || e.tgt1(f) != e.tgt1(g) {
                continue;
            }
            let (u, v) = (One::from_index(i), One::from_index(j));
            for &theta in e.between(f, g) {
                if base.v(p.two(theta), psi)? != phi {
                    continue;
                }
                let c = bb.two(names.fresh(e.two_name(theta).to_string()), u, v);
                two_index.insert((u, v, theta), c);
                twos.push(theta);
                two_ends.push((u, v));
                SizeBounds::check("2-cells", twos.len(), bounds.max_twos)?;
            }
        }
    }

    let find1 = |f, phi| one_index.get(&(f, phi)).copied().ok_or_else(|| missing("composition"));
    let find2 = |u, v, t| {
        two_index
            .get(&(u, v, t))
            .copied()
            .ok_or_else(|| missing("2-cell operations"))
    };

    let lu_b = base.lunit(one_b);
    let mut id1 = HashMap::new();
    for &x in &obs {
        let u = find1(e.id1(x), base.id2(one_b))?;
        bb.set_id1(ob_index[&x], u);
        id1.insert(x, u);
    }
    let mut hcomp1 = HashMap::new();
    for (i, &(f, phi)) in ones.iter().enumerate() {
        let u = One::from_index(i);
        bb.set_id2(u, find2(u, u, e.id2(f))?);
        for (j, &(g, psi)) in ones.iter().enumerate() {
            if e.tgt1(f) != e.src1(g) {
                continue;
            }
            let v = One::from_index(j);
            let w = find1(e.c(f, g)?, base.v(base.h(phi, psi)?, lu_b)?)?;
            bb.set_hcomp1(u, v, w);
            hcomp1.insert((u, v), w);
        }
    }
    for (i, &theta) in twos.iter().enumerate() {
        let c = Two::from_index(i);
        let (u, u1) = two_ends[i];
        for (j, &theta1) in twos.iter().enumerate() {
            let (v, v1) = two_ends[j];
            let d = Two::from_index(j);
            if v == u1 {
                bb.set_vcomp(c, d, find2(u, v1, e.v(theta, theta1)?)?);
            }
            if let (Some(&w), Some(&w1)) = (hcomp1.get(&(u, v)), hcomp1.get(&(u1, v1))) {
                bb.set_hcomp2(c, d, find2(w, w1, e.h(theta, theta1)?)?);
            }
        }
    }
    for (i, &(f, _)) in ones.iter().enumerate() {
        let u = One::from_index(i);
        let (x, y) = (e.src1(f), e.tgt1(f));
        bb.set_lunit(u, find2(hcomp1[&(id1[&x], u)], u, e.lunit(f))?);
        bb.set_runit(u, find2(hcomp1[&(u, id1[&y])], u, e.runit(f))?);
    }
    for (&(u, v), &uv) in &hcomp1 {
        for (&(v2, w), &vw) in &hcomp1 {
            if v2 != v {
                continue;
            }
            let (f, g, h) = (ones[u.index()].0, ones[v.index()].0, ones[w.index()].0);
            bb.set_assoc(u, v, w, find2(hcomp1[&(uv, w)], hcomp1[&(u, vw)], e.a(f, g, h)?)?);
        }
    }
    let bicat = Arc::new(bb.build()?);
    let report = validate_bicategory_with(&bicat, bounds)?;

    let mut comp = HashMap::new();
    for &(u, v) in hcomp1.keys() {
        comp.insert((u, v), e.id2(e.c(ones[u.index()].0, ones[v.index()].0)?));
    }
    let inclusion = Arc::new(LaxFunctor {
        source: bicat.clone(),
        target: p.source.clone(),
        variance: Variance::Pseudo,
        strict: true,
        ob: obs.clone(),
        map1: ones.iter().map(|&(f, _)| f).collect(),
        map2: twos.clone(),
        unit: obs.iter().map(|&x| e.id2(e.id1(x))).collect(),
        comp,
    });
    Ok(FiberBicategory {
        base: b,
        p: p.clone(),
        bicat,
        inclusion,
        obs,
        ones,
        twos,
        report,
        ob_index,
        one_index,
        two_index,
    })
}

impl FiberBicategory {
    /// The fiber 0-cell at a 0-cell of `E` over the base.
    pub fn ob_of(&self, x: Ob) -> Option<Ob> {
        self.ob_index.get(&x).copied()
    }

    pub fn one_of(&self, f: One, phi: Two) -> Option<One> {
        self.one_index.get(&(f, phi)).copied()
    }

    /// The fiber 2-cell `u ⇒ v` carried by the 2-cell `θ` of `E`.
    pub fn two_of(&self, u: One, v: One, theta: Two) -> Option<Two> {
        self.two_index.get(&(u, v, theta)).copied()
    }

    /// A diagram `F : A → fiber` as the pair `(F₀, ρ)`: `F₀ = F · incl`
    /// and the icon `ρ : F₀·p ⇒ Δ_b` collecting the distinguished isos.
    pub fn split(&self, f: &Arc<LaxFunctor>) -> Result<(Arc<LaxFunctor>, Icon)> {
        if !Arc::ptr_eq(&f.target, &self.bicat) && *f.target != *self.bicat {
            return Err(Error::ShapeMismatch("the diagram does not land in this fiber".into()));
        }
        let f0 = Arc::new(compose_functors(f, &self.inclusion)?);
        let f0p = Arc::new(compose_functors(&f0, &self.p)?);
        let delta = Arc::new(constant_functor(
            f.source.clone(),
            self.p.target.clone(),
            self.base,
        )?);
        let comp = f.map1.iter().map(|&u| self.ones[u.index()].1).collect();
        Ok((
            f0,
            Icon {
                source: f0p,
                target: delta,
                comp,
            },
        ))
    }

    /// Views a functor into `E` lying strictly over the constant at the base
    /// as a functor into the fiber, with identity distinguished isos.
    pub fn restrict(&self, g: &LaxFunctor) -> Result<LaxFunctor> {
        let (e, base) = (&*self.p.source, &*self.p.target);
        let delta = constant_functor(g.source.clone(), self.p.target.clone(), self.base)?;
        if !tables_equal(&compose_functors(g, &self.p)?, &delta) {
            return Err(Error::pre("the functor does not lie over the constant at the base"));
        }
        let id = base.id2(base.id1(self.base));
        let a = &*g.source;
        let vertical = |f: One| {
            self.one_of(f, id)
                .ok_or_else(|| Error::incons(format!("{} is not in the fiber", e.one_name(f))))
        };
        let map1 = g.map1.iter().map(|&f| vertical(f)).collect::<Result<Vec<_>>>()?;
        let mut map2 = Vec::with_capacity(a.two_count());
        for t in a.twos() {
            let (u, v) = (map1[a.src2(t).index()], map1[a.tgt2(t).index()]);
            map2.push(self.cell(u, v, g.two(t))?);
        }
        let mut unit = Vec::with_capacity(a.ob_count());
        for x in a.obs() {
            let fx = self.ob_index[&g.ob(x)];
            unit.push(self.oriented(g, self.bicat.id1(fx), map1[a.id1(x).index()], g.unit[x.index()])?);
        }
        let mut comp = HashMap::new();
        for (&(f, h), &c) in &g.comp {
            let fh = self.bicat.c(map1[f.index()], map1[h.index()])?;
            comp.insert((f, h), self.oriented(g, fh, map1[a.c(f, h)?.index()], c)?);
        }
        Ok(LaxFunctor {
            source: g.source.clone(),
            target: self.bicat.clone(),
            variance: g.variance,
            strict: g.strict,
            ob: g.ob.iter().map(|x| self.ob_index[x]).collect(),
            map1,
            map2,
            unit,
            comp,
        })
    }

    /// Lax-direction constraints run `lax ⇒ image`; oplax ones the other way.
    fn oriented(&self, g: &LaxFunctor, lax: One, image: One, c: Two) -> Result<Two> {
        if g.is_lax_direction() {
            self.cell(lax, image, c)
        } else {
            self.cell(image, lax, c)
        }
    }

    fn cell(&self, u: One, v: One, t: Two) -> Result<Two> {
        self.two_of(u, v, t).ok_or_else(|| {
            Error::incons(format!(
                "{} is not a 2-cell of the fiber",
                self.p.source.two_name(t)
            ))
        })
    }

    /// Views a transformation between functors into `E` whose components lie
    /// strictly over `1_b` as one between the given functors into the fiber.
    pub fn restrict_transformation(
        &self,
        t: &OplaxTransformation,
        source: Arc<LaxFunctor>,
        target: Arc<LaxFunctor>,
    ) -> Result<OplaxTransformation> {
        let base = &*self.p.target;
        let id = base.id2(base.id1(self.base));
        let a = &*source.source;
        let comp1 = t
            .comp1
            .iter()
            .map(|&c| {
                self.one_of(c, id).ok_or_else(|| {
                    Error::pre(format!(
                        "component {} does not lie over the identity",
                        self.p.source.one_name(c)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let fb = &*self.bicat;
        let mut comp2 = Vec::with_capacity(a.one_count());
        for h in a.ones() {
            let (x, y) = (a.src1(h), a.tgt1(h));
            let s = fb.c(source.one(h), comp1[y.index()])?;
            let g = fb.c(comp1[x.index()], target.one(h))?;
            comp2.push(self.cell(s, g, t.at1(h))?);
        }
        Ok(OplaxTransformation {
            source,
            target,
            comp1,
            comp2,
        })
    }
}
