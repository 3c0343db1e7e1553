//! Classical 1-categorical notions decided by brute-force enumeration.
//!
//! These serve both as building blocks (hom functors of a bicategory functor
//! are functors between finite categories) and as independent oracles for the
//! bicategorical constructions on locally discrete data.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::category::{validate_cat_functor, CatFunctor, Category, CategoryBuilder};
use crate::error::{Error, Result};
use crate::ids::{Mor, Obj};

/// Why a morphism fails to be Cartesian: a test arrow `psi` and a base
/// factorization `v` that lift to `lifts` (≠ 1) morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartesianFailure {
    pub psi: Mor,
    pub v: Mor,
    pub lifts: usize,
}

/// Returns the first failing instance of the Cartesian factorization
/// property for `phi` along `f`, in ascending id order.
pub fn cartesian_failure(f: &CatFunctor, phi: Mor) -> Option<CartesianFailure> {
    let (c, d) = (&*f.source, &*f.target);
    let dom = c.src(phi);
    let cod = c.tgt(phi);
    let f_phi = f.on_mor(phi);
    for &psi in c.into(cod) {
        let test = c.src(psi);
        let f_psi = f.on_mor(psi);
        for &v in d.hom(f.on_ob(test), f.on_ob(dom)) {
            if d.comp(v, f_phi) != Some(f_psi) {
                continue;
            }
            let lifts = c
                .hom(test, dom)
                .iter()
                .filter(|&&u| f.on_mor(u) == v && c.comp(u, phi) == Some(psi))
                .count();
            if lifts != 1 {
                return Some(CartesianFailure { psi, v, lifts });
            }
        }
    }
    None
}

pub fn is_cartesian_morphism_1cat(f: &CatFunctor, phi: Mor) -> bool {
    cartesian_failure(f, phi).is_none()
}

/// Verdict of a fibration check with the Cartesian lifts found, keyed by
/// `(codomain object, base morphism)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationVerdict {
    pub lifts: BTreeMap<(Obj, Mor), Mor>,
    /// The first `(object, base morphism)` pair with no Cartesian lift.
    pub missing: Option<(Obj, Mor)>,
}

impl FibrationVerdict {
    pub fn holds(&self) -> bool {
        self.missing.is_none()
    }
}

/// Decides whether `f` is a Grothendieck fibration. Lifts are chosen as the
/// least (or greatest, when `descending`) Cartesian morphism id.
pub fn grothendieck_fibration_1cat(f: &CatFunctor, descending: bool) -> FibrationVerdict {
    let (c, d) = (&*f.source, &*f.target);
    let mut lifts = BTreeMap::new();
    let mut missing = None;
    // group morphisms of C by (target, image)
    let mut over: HashMap<(Obj, Mor), Vec<Mor>> = HashMap::new();
    for phi in c.morphisms() {
        over.entry((c.tgt(phi), f.on_mor(phi))).or_default().push(phi);
    }
    'outer: for e in c.objects() {
        for &m in d.into(f.on_ob(e)) {
            let mut cands: Vec<Mor> = over.get(&(e, m)).cloned().unwrap_or_default();
            if descending {
                cands.reverse();
            }
            match cands.into_iter().find(|&phi| is_cartesian_morphism_1cat(f, phi)) {
                Some(phi) => {
                    lifts.insert((e, m), phi);
                }
                None => {
                    missing = Some((e, m));
                    break 'outer;
                }
            }
        }
    }
    FibrationVerdict { lifts, missing }
}

pub fn is_grothendieck_fibration_1cat(f: &CatFunctor) -> bool {
    grothendieck_fibration_1cat(f, false).holds()
}

/// `c` is rari-universal when every hom map `Hom(c', c) -> Hom(F c', F c)`
/// is a bijection.
pub fn is_rari_universal_1cat(f: &CatFunctor, c: Obj) -> bool {
    let (src, tgt) = (&*f.source, &*f.target);
    let fc = f.on_ob(c);
    src.objects().all(|c2| {
        let hom = src.hom(c2, c);
        let target = tgt.hom(f.on_ob(c2), fc);
        if hom.len() != target.len() {
            return false;
        }
        let mut seen = vec![false; tgt.morphism_count()];
        for &u in hom {
            let fu = f.on_mor(u);
            if seen[fu.index()] {
                return false;
            }
            seen[fu.index()] = true;
        }
        true
    })
}

/// Builds the right adjoint right inverse determined by a choice of
/// rari-universal lift for every object of the target.
pub fn rari_of_1cat(f: &CatFunctor, choice: &[Obj]) -> Result<CatFunctor> {
    let (c, d) = (&*f.source, &*f.target);
    if choice.len() != d.object_count() {
        return Err(Error::pre("rari choice must cover every object"));
    }
    for x in d.objects() {
        let cx = choice[x.index()];
        if f.on_ob(cx) != x {
            return Err(Error::pre(format!(
                "chosen lift {} does not lie over {}",
                c.ob_name(cx),
                d.ob_name(x)
            )));
        }
        if !is_rari_universal_1cat(f, cx) {
            return Err(Error::pre(format!(
                "chosen lift {} over {} is not rari-universal",
                c.ob_name(cx),
                d.ob_name(x)
            )));
        }
    }
    let mut mor = Vec::with_capacity(d.morphism_count());
    for m in d.morphisms() {
        let (a, b) = (choice[d.src(m).index()], choice[d.tgt(m).index()]);
        let u = c
            .hom(a, b)
            .iter()
            .copied()
            .find(|&u| f.on_mor(u) == m)
            .ok_or_else(|| Error::incons("hom bijection has no preimage"))?;
        mor.push(u);
    }
    let g = CatFunctor {
        source: f.target.clone(),
        target: f.source.clone(),
        ob: choice.to_vec(),
        mor,
    };
    if !validate_cat_functor(&g).ok() {
        return Err(Error::incons("rari is not functorial"));
    }
    Ok(g)
}

/// Witnesses for an equivalence of categories: for every target object a
/// source object and an isomorphism from its image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub preimages: Vec<(Obj, Mor)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivalenceFailure {
    NotFaithful(Obj, Obj),
    NotFull(Obj, Obj),
    NotEssentiallySurjective(Obj),
}

/// Fully faithful and essentially surjective, decided by enumeration.
pub fn equivalence_1cat(
    f: &CatFunctor,
) -> std::result::Result<EquivalenceWitness, EquivalenceFailure> {
    let (c, d) = (&*f.source, &*f.target);
    for a in c.objects() {
        for b in c.objects() {
            let mut images: Vec<Mor> = c.hom(a, b).iter().map(|&u| f.on_mor(u)).collect();
            let n = images.len();
            images.sort();
            images.dedup();
            if images.len() != n {
                return Err(EquivalenceFailure::NotFaithful(a, b));
            }
            if n != d.hom(f.on_ob(a), f.on_ob(b)).len() {
                return Err(EquivalenceFailure::NotFull(a, b));
            }
        }
    }
    let mut preimages = Vec::with_capacity(d.object_count());
    for y in d.objects() {
        let found = c.objects().find_map(|x| {
            d.hom(f.on_ob(x), y)
                .iter()
                .copied()
                .find(|&m| d.is_iso(m))
                .map(|m| (x, m))
        });
        match found {
            Some(w) => preimages.push(w),
            None => return Err(EquivalenceFailure::NotEssentiallySurjective(y)),
        }
    }
    Ok(EquivalenceWitness { preimages })
}

pub fn is_equivalence_1cat(f: &CatFunctor) -> bool {
    equivalence_1cat(f).is_ok()
}

/// The free fibration on `p : E -> B`: objects `(b, e, f : b -> p e)`,
/// morphisms `(s, t)` with `s · f' = f · p t`, projected to `b`.
#[derive(Debug, Clone)]
pub struct FreeFibration {
    pub category: Arc<Category>,
    pub projection: CatFunctor,
    pub objects: Vec<(Obj, Obj, Mor)>,
    pub morphisms: Vec<(Mor, Mor)>,
}

pub fn free_fibration_1cat(p: &CatFunctor) -> Result<FreeFibration> {
    let (e, b) = (&*p.source, &*p.target);
    let mut builder = CategoryBuilder::new();
    let mut objects = Vec::new();
    for x in b.objects() {
        for y in e.objects() {
            for &f in b.hom(x, p.on_ob(y)) {
                builder.object(format!("({},{},{})", b.ob_name(x), e.ob_name(y), b.mor_name(f)));
                objects.push((x, y, f));
            }
        }
    }
    let mut morphisms = Vec::new();
    let mut index = HashMap::new();
    for (i, &(x, y, f)) in objects.iter().enumerate() {
        for (j, &(x2, y2, f2)) in objects.iter().enumerate() {
            for &s in b.hom(x, x2) {
                for &t in e.hom(y, y2) {
                    if b.comp(s, f2) == b.comp(f, p.on_mor(t)) {
                        let m = builder.morphism(
                            format!("({},{}):{}->{}", b.mor_name(s), e.mor_name(t), i, j),
                            Obj::from_index(i),
                            Obj::from_index(j),
                        );
                        index.insert((i, j, s, t), m);
                        morphisms.push((i, j, s, t));
                    }
                }
            }
        }
    }
    for (i, &(x, y, _)) in objects.iter().enumerate() {
        builder.set_identity(Obj::from_index(i), index[&(i, i, b.identity(x), e.identity(y))]);
    }
    for (m1, &(i, j, s, t)) in morphisms.iter().enumerate() {
        for (m2, &(j2, k, s2, t2)) in morphisms.iter().enumerate() {
            if j == j2 {
                let key = (
                    i,
                    k,
                    b.comp(s, s2).ok_or_else(|| Error::incons("base comp"))?,
                    e.comp(t, t2).ok_or_else(|| Error::incons("total comp"))?,
                );
                let m = index.get(&key).ok_or_else(|| Error::incons("free fibration comp"))?;
                builder.set_comp(Mor::from_index(m1), Mor::from_index(m2), *m);
            }
        }
    }
    let category = Arc::new(builder.build()?);
    let projection = CatFunctor {
        source: category.clone(),
        target: p.target.clone(),
        ob: objects.iter().map(|o| o.0).collect(),
        mor: morphisms.iter().map(|m| m.2).collect(),
    };
    Ok(FreeFibration {
        category,
        projection,
        objects,
        morphisms: morphisms.into_iter().map(|(_, _, s, t)| (s, t)).collect(),
    })
}

/// A cone over a diagram `d : shape -> c` with the given apex and legs, one
/// per shape object. Checks commutativity for every shape morphism.
pub fn is_cone_1cat(d: &CatFunctor, apex: Obj, legs: &[Mor]) -> bool {
    let (shape, c) = (&*d.source, &*d.target);
    legs.len() == shape.object_count()
        && shape
            .objects()
            .all(|a| c.src(legs[a.index()]) == apex && c.tgt(legs[a.index()]) == d.on_ob(a))
        && shape
            .morphisms()
            .all(|m| c.comp(legs[shape.src(m).index()], d.on_mor(m)) == Some(legs[shape.tgt(m).index()]))
}

/// All cones over `d` with apex `x`.
pub fn cones_1cat(d: &CatFunctor, x: Obj) -> Vec<Vec<Mor>> {
    let (shape, c) = (&*d.source, &*d.target);
    let mut out = vec![Vec::new()];
    for a in shape.objects() {
        let mut next = Vec::new();
        for partial in &out {
            for &m in c.hom(x, d.on_ob(a)) {
                let mut v: Vec<Mor> = partial.clone();
                v.push(m);
                next.push(v);
            }
        }
        out = next;
    }
    out.retain(|legs| is_cone_1cat(d, x, legs));
    out
}

/// Classical limit: every cone factors through `(apex, legs)` by a unique
/// morphism.
pub fn is_limit_1cat(d: &CatFunctor, apex: Obj, legs: &[Mor]) -> bool {
    if !is_cone_1cat(d, apex, legs) {
        return false;
    }
    let c = &*d.target;
    c.objects().all(|x| {
        cones_1cat(d, x).iter().all(|cone| {
            c.hom(x, apex)
                .iter()
                .filter(|&&u| {
                    cone.iter()
                        .zip(legs)
                        .all(|(&k, &leg)| c.comp(u, leg) == Some(k))
                })
                .count()
                == 1
        })
    })
}

/// First limit cone in ascending (apex, legs) order.
pub fn find_limit_1cat(d: &CatFunctor) -> Option<(Obj, Vec<Mor>)> {
    let c = &*d.target;
    c.objects().find_map(|x| {
        cones_1cat(d, x)
            .into_iter()
            .find(|legs| is_limit_1cat(d, x, legs))
            .map(|legs| (x, legs))
    })
}
