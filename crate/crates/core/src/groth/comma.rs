//! The oplax comma bicategory `B/p`, the arrow bicategory `E^I`, and the
//! functor `p^L : E^I → B/p`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bicategory::{Bicategory, BicategoryBuilder, FreshNames};
use crate::bounds::SizeBounds;
use crate::error::{Error, Result};
use crate::functor::{same_bicategory, LaxFunctor, Variance};
use crate::ids::{Ob, One, Two};

/// `B/p` with the data identifying its cells.
///
/// Objects are `(b, e, f : b → pe)`; 1-cells `(s, t, α : s·f′ ⇒ f·pt)`;
/// 2-cells `(β, γ)` with `(β · f′) | α′ = α | (f · pγ)`.
#[derive(Debug, Clone)]
pub struct Comma {
    pub p: Arc<LaxFunctor>,
    pub bicat: Arc<Bicategory>,
    /// `(b, e, f) ↦ b`, strict.
    pub d0: Arc<LaxFunctor>,
    /// `(b, e, f) ↦ e`, strict.
    pub d1: Arc<LaxFunctor>,
    pub obs: Vec<(Ob, Ob, One)>,
    pub ones: Vec<(One, One, Two)>,
    pub twos: Vec<(Two, Two)>,
    ob_index: HashMap<(Ob, Ob, One), Ob>,
    one_index: HashMap<(Ob, Ob, One, One, Two), One>,
    two_index: HashMap<(One, One, Two, Two), Two>,
}

impl Comma {
    pub fn ob_of(&self, b: Ob, e: Ob, f: One) -> Option<Ob> {
        self.ob_index.get(&(b, e, f)).copied()
    }
    pub fn one_of(&self, src: Ob, tgt: Ob, s: One, t: One, alpha: Two) -> Option<One> {
        self.one_index.get(&(src, tgt, s, t, alpha)).copied()
    }
    pub fn two_of(&self, src: One, tgt: One, beta: Two, gamma: Two) -> Option<Two> {
        self.two_index.get(&(src, tgt, beta, gamma)).copied()
    }
    pub fn ob(&self, x: Ob) -> (Ob, Ob, One) {
        self.obs[x.index()]
    }
    pub fn one(&self, u: One) -> (One, One, Two) {
        self.ones[u.index()]
    }
    pub fn two(&self, c: Two) -> (Two, Two) {
        self.twos[c.index()]
    }
}

fn missing(what: &str) -> Error {
    Error::incons(format!(
        "{what} is not a cell of the comma bicategory; the functor violates its axioms"
    ))
}

/// `B/p` and its projections; `p` must be a pseudofunctor or lax functor.
pub fn oplax_comma(p: Arc<LaxFunctor>, bounds: &SizeBounds) -> Result<Comma> {
    build_comma(p, bounds, false)
}

fn build_comma(p: Arc<LaxFunctor>, bounds: &SizeBounds, arrow_names: bool) -> Result<Comma> {
    p.check_structure()?;
    let (e, b) = (p.source.clone(), p.target.clone());
    let mut bb = BicategoryBuilder::new();

    let mut obs = Vec::new();
    let mut ob_index = HashMap::new();
    for x in b.obs() {
        for y in e.obs() {
            for &f in b.hom(x, p.ob(y)) {
                let name = if arrow_names {
                    b.one_name(f).to_string()
                } else {
                    format!("({},{},{})", b.ob_name(x), e.ob_name(y), b.one_name(f))
                };
                let id = bb.object(name);
                ob_index.insert((x, y, f), id);
                obs.push((x, y, f));
            }
        }
    }
    SizeBounds::check("0-cells", obs.len(), bounds.max_obs)?;

    let mut names = FreshNames::default();
    let mut ones = Vec::new();
    let mut one_index = HashMap::new();
    let mut by_ends: HashMap<(Ob, Ob), Vec<One>> = HashMap::new();
    for (i, &(x, y, f)) in obs.iter().enumerate() {
        for (j, &(x1, y1, f1)) in obs.iter().enumerate() {
            let (src, tgt) = (Ob::from_index(i), Ob::from_index(j));
            for &s in b.hom(x, x1) {
                let sf1 = b.c(s, f1)?;
                for &t in e.hom(y, y1) {
                    let fpt = b.c(f, p.one(t))?;
                    for &alpha in b.between(sf1, fpt) {
                        let name = names.fresh(format!(
                            "({},{},{})",
                            b.one_name(s),
                            e.one_name(t),
                            b.two_name(alpha)
                        ));
                        let id = bb.one(name, src, tgt);
                        one_index.insert((src, tgt, s, t, alpha), id);
                        by_ends.entry((src, tgt)).or_default().push(id);
                        ones.push((s, t, alpha));
                        SizeBounds::check("1-cells", ones.len(), bounds.max_ones)?;
                    }
                }
            }
        }
    }
    let mut src_tgt = vec![(Ob(0), Ob(0)); ones.len()];
    for (&(src, tgt, ..), &u) in &one_index {
        src_tgt[u.index()] = (src, tgt);
    }

    let mut names = FreshNames::default();
    let mut twos = Vec::new();
    let mut two_index = HashMap::new();
    let mut ends: Vec<_> = by_ends.into_iter().collect();
    ends.sort();
    for ((src, _tgt), cells) in &ends {
        let (_, _, f) = obs[src.index()];
        for &u in cells {
            let (s, t, alpha) = ones[u.index()];
            let (_, _, f1) = obs[src_tgt[u.index()].1.index()];
            for &u1 in cells {
                let (s1, t1, alpha1) = ones[u1.index()];
                for &beta in b.between(s, s1) {
                    let lhs = b.v(b.rw(beta, f1)?, alpha1)?;
                    for &gamma in e.between(t, t1) {
                        let rhs = b.v(alpha, b.lw(f, p.two(gamma))?)?;
                        if lhs != rhs {
                            continue;
                        }
                        let name = names.fresh(format!(
                            "({},{})",
                            b.two_name(beta),
                            e.two_name(gamma)
                        ));
                        let id = bb.two(name, u, u1);
                        two_index.insert((u, u1, beta, gamma), id);
                        twos.push((beta, gamma));
                        SizeBounds::check("2-cells", twos.len(), bounds.max_twos)?;
                    }
                }
            }
        }
    }
    let two_ends: Vec<(One, One)> = {
        let mut v = vec![(One(0), One(0)); twos.len()];
        for (&(u, u1, ..), &c) in &two_index {
            v[c.index()] = (u, u1);
        }
        v
    };

    let find1 = |src: Ob, tgt: Ob, s, t, a| {
        one_index
            .get(&(src, tgt, s, t, a))
            .copied()
            .ok_or_else(|| missing("a composite or identity 1-cell"))
    };
    let find2 = |u: One, u1: One, beta, gamma| {
        two_index
            .get(&(u, u1, beta, gamma))
            .copied()
            .ok_or_else(|| missing("a composite, identity or coherence 2-cell"))
    };

    // identities
    let mut id1 = Vec::with_capacity(obs.len());
    for (i, &(x, y, f)) in obs.iter().enumerate() {
        let alpha = b.vseq(&[
            b.lunit(f),
            b.inv(b.runit(f))?,
            b.lw(f, p.lax_unit(y)?)?,
        ])?;
        let o = Ob::from_index(i);
        let u = find1(o, o, b.id1(x), e.id1(y), alpha)?;
        bb.set_id1(o, u);
        id1.push(u);
    }
    for (i, &(s, t, _)) in ones.iter().enumerate() {
        let u = One::from_index(i);
        bb.set_id2(u, find2(u, u, b.id2(s), e.id2(t))?);
    }

    // composition of 1-cells
    let mut out_of: Vec<Vec<One>> = vec![Vec::new(); obs.len()];
    for (i, &(src, _)) in src_tgt.iter().enumerate() {
        out_of[src.index()].push(One::from_index(i));
    }
    let mut hcomp1 = HashMap::new();
    for (i, &(s, t, alpha)) in ones.iter().enumerate() {
        let u = One::from_index(i);
        let (src, mid) = src_tgt[i];
        let (_, _, f) = obs[src.index()];
        let (_, _, f1) = obs[mid.index()];
        for &v in &out_of[mid.index()] {
            let (s1, t1, alpha1) = ones[v.index()];
            let tgt = src_tgt[v.index()].1;
            let (_, _, f2) = obs[tgt.index()];
            let (pt, pt1) = (p.one(t), p.one(t1));
            let a = b.vseq(&[
                b.a(s, s1, f2)?,
                b.lw(s, alpha1)?,
                b.inv(b.a(s, f1, pt1)?)?,
                b.rw(alpha, pt1)?,
                b.a(f, pt, pt1)?,
                b.lw(f, p.lax_comp(t, t1)?)?,
            ])?;
            let w = find1(src, tgt, b.c(s, s1)?, e.c(t, t1)?, a)?;
            bb.set_hcomp1(u, v, w);
            hcomp1.insert((u, v), w);
        }
    }

    // vertical composition
    let mut twos_from: Vec<Vec<Two>> = vec![Vec::new(); ones.len()];
    for (i, &(u, _)) in two_ends.iter().enumerate() {
        twos_from[u.index()].push(Two::from_index(i));
    }
    for (i, &(beta, gamma)) in twos.iter().enumerate() {
        let c = Two::from_index(i);
        let (u, u1) = two_ends[i];
        for &d in &twos_from[u1.index()] {
            let (beta1, gamma1) = twos[d.index()];
            let u2 = two_ends[d.index()].1;
            bb.set_vcomp(c, d, find2(u, u2, b.v(beta, beta1)?, e.v(gamma, gamma1)?)?);
        }
    }

    // horizontal composition of 2-cells
    for (i, &(beta, gamma)) in twos.iter().enumerate() {
        let c = Two::from_index(i);
        let (u, u1) = two_ends[i];
        let mid = src_tgt[u.index()].1;
        for &v in &out_of[mid.index()] {
            for &d in &twos_from[v.index()] {
                let (beta1, gamma1) = twos[d.index()];
                let v1 = two_ends[d.index()].1;
                let (w, w1) = (hcomp1[&(u, v)], hcomp1[&(u1, v1)]);
                bb.set_hcomp2(c, d, find2(w, w1, b.h(beta, beta1)?, e.h(gamma, gamma1)?)?);
            }
        }
    }

    // coherence cells, componentwise
    for (i, &(s, t, _)) in ones.iter().enumerate() {
        let u = One::from_index(i);
        let (src, tgt) = src_tgt[i];
        let lu = hcomp1[&(id1[src.index()], u)];
        bb.set_lunit(u, find2(lu, u, b.lunit(s), e.lunit(t))?);
        let ru = hcomp1[&(u, id1[tgt.index()])];
        bb.set_runit(u, find2(ru, u, b.runit(s), e.runit(t))?);
    }
    for (i, &(s, t, _)) in ones.iter().enumerate() {
        let u = One::from_index(i);
        let mid = src_tgt[i].1;
        for &v in &out_of[mid.index()] {
            let (s1, t1, _) = ones[v.index()];
            let mid2 = src_tgt[v.index()].1;
            for &w in &out_of[mid2.index()] {
                let (s2, t2, _) = ones[w.index()];
                let left = hcomp1[&(hcomp1[&(u, v)], w)];
                let right = hcomp1[&(u, hcomp1[&(v, w)])];
                let a = find2(left, right, b.a(s, s1, s2)?, e.a(t, t1, t2)?)?;
                bb.set_assoc(u, v, w, a);
            }
        }
    }

    let bicat = Arc::new(bb.build()?);
    let d0 = Arc::new(projection(&bicat, &b, |x| obs[x.index()].0, |u| ones[u.index()].0, |c| twos[c.index()].0)?);
    let d1 = Arc::new(projection(&bicat, &e, |x| obs[x.index()].1, |u| ones[u.index()].1, |c| twos[c.index()].1)?);
    Ok(Comma {
        p,
        bicat,
        d0,
        d1,
        obs,
        ones,
        twos,
        ob_index,
        one_index,
        two_index,
    })
}

/// A strict functor given by cell maps; constraints are identities.
fn projection(
    src: &Arc<Bicategory>,
    tgt: &Arc<Bicategory>,
    ob: impl Fn(Ob) -> Ob,
    one: impl Fn(One) -> One,
    two: impl Fn(Two) -> Two,
) -> Result<LaxFunctor> {
    let mut comp = HashMap::new();
    for u in src.ones() {
        for &v in src.out_of(src.tgt1(u)) {
            comp.insert((u, v), tgt.id2(one(src.c(u, v)?)));
        }
    }
    Ok(LaxFunctor {
        source: src.clone(),
        target: tgt.clone(),
        variance: Variance::Pseudo,
        strict: true,
        ob: src.obs().map(&ob).collect(),
        map1: src.ones().map(&one).collect(),
        map2: src.twos().map(two).collect(),
        unit: src.obs().map(|x| tgt.id2(tgt.id1(ob(x)))).collect(),
        comp,
    })
}

/// `E^I`: arrows of `E` and oplax squares, as the comma of the identity.
/// Objects are named after their arrows.
pub fn arrow_bicategory(e: Arc<Bicategory>, bounds: &SizeBounds) -> Result<Comma> {
    build_comma(Arc::new(LaxFunctor::identity(e)), bounds, true)
}

/// `p^L : E^I → B/p`, sending `w : e₀ → e₁` to `(pe₀, e₁, pw)` and a square
/// `(s, t, α)` to `(ps, t, pα)`. Requires `p` strict.
pub fn p_l_between(p: &LaxFunctor, arrows: &Comma, comma: &Comma) -> Result<LaxFunctor> {
    if !p.strict {
        return Err(Error::pre("the induced functor on arrows needs a strict functor"));
    }
    if !same_bicategory(&arrows.p.source, &p.source) {
        return Err(Error::ShapeMismatch("arrow bicategory of a different bicategory".into()));
    }
    if !same_bicategory(&comma.p.source, &p.source) || !same_bicategory(&comma.p.target, &p.target)
    {
        return Err(Error::ShapeMismatch("comma bicategory of a different functor".into()));
    }
    let (src, tgt) = (&arrows.bicat, &comma.bicat);
    let mut ob = Vec::with_capacity(src.ob_count());
    for &(e0, e1, w) in &arrows.obs {
        ob.push(
            comma
                .ob_of(p.ob(e0), e1, p.one(w))
                .ok_or_else(|| missing("the image of an arrow"))?,
        );
    }
    let mut map1 = Vec::with_capacity(src.one_count());
    for (i, &(s, t, alpha)) in arrows.ones.iter().enumerate() {
        let u = One::from_index(i);
        let (x, y) = (src.src1(u), src.tgt1(u));
        map1.push(
            comma
                .one_of(ob[x.index()], ob[y.index()], p.one(s), t, p.two(alpha))
                .ok_or_else(|| missing("the image of a square"))?,
        );
    }
    let mut map2 = Vec::with_capacity(src.two_count());
    for (i, &(beta, gamma)) in arrows.twos.iter().enumerate() {
        let c = Two::from_index(i);
        let (u, u1) = (src.src2(c), src.tgt2(c));
        map2.push(
            comma
                .two_of(map1[u.index()], map1[u1.index()], p.two(beta), gamma)
                .ok_or_else(|| missing("the image of a 2-cell"))?,
        );
    }
    let unit = src.obs().map(|x| tgt.id2(tgt.id1(ob[x.index()]))).collect();
    let mut comp = HashMap::new();
    for u in src.ones() {
        for &v in src.out_of(src.tgt1(u)) {
            comp.insert((u, v), tgt.id2(tgt.c(map1[u.index()], map1[v.index()])?));
        }
    }
    Ok(LaxFunctor {
        source: src.clone(),
        target: tgt.clone(),
        variance: Variance::Pseudo,
        strict: true,
        ob,
        map1,
        map2,
        unit,
        comp,
    })
}
