//! Exhaustive enumeration of strict functors, transformations and
//! modifications, for the universal-property checks that quantify over them.

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;

use super::{
    same_bicategory, validate_functor, validate_modification, validate_transformation,
    LaxFunctor, Mode, Modification, OplaxTransformation, Variance,
};
use crate::bicategory::Bicategory;
use crate::bounds::SizeBounds;
use crate::error::{Error, Result};
use crate::ids::{Ob, One, Two};

/// Same cell maps and constraints; variance and strictness flags are ignored.
pub fn tables_equal(f: &LaxFunctor, g: &LaxFunctor) -> bool {
    same_bicategory(&f.source, &g.source)
        && same_bicategory(&f.target, &g.target)
        && f.ob == g.ob
        && f.map1 == g.map1
        && f.map2 == g.map2
        && f.unit == g.unit
        && f.comp == g.comp
}

struct Budget<'a> {
    bounds: &'a SizeBounds,
    seen: usize,
    what: &'static str,
}

impl Budget<'_> {
    fn spend(&mut self, n: usize) -> Result<()> {
        self.seen = self.seen.saturating_add(n);
        self.bounds.check_candidates(self.what, self.seen)
    }
}

fn product_size<T>(choices: &[Vec<T>]) -> usize {
    choices
        .iter()
        .fold(1usize, |acc, c| acc.saturating_mul(c.len()))
}

/// All transformations `F ⇒ G` of the given mode, in lexicographic order of
/// their component ids.
pub fn enumerate_transformations(
    f: &Arc<LaxFunctor>,
    g: &Arc<LaxFunctor>,
    mode: Mode,
    bounds: &SizeBounds,
) -> Result<Vec<OplaxTransformation>> {
    if !same_bicategory(&f.source, &g.source) || !same_bicategory(&f.target, &g.target) {
        return Err(Error::ShapeMismatch(
            "transformations between functors of different shape or codomain".into(),
        ));
    }
    let (a, e) = (&*f.source, &*f.target);
    let mut budget = Budget {
        bounds,
        seen: 0,
        what: "transformation candidates",
    };
    let c1: Vec<Vec<One>> = a.obs().map(|x| e.hom(f.ob(x), g.ob(x)).to_vec()).collect();
    budget.spend(product_size(&c1))?;
    let mut out = Vec::new();
    for comp1 in c1.into_iter().multi_cartesian_product_or_unit() {
        let mut c2: Vec<Vec<Two>> = Vec::with_capacity(a.one_count());
        for h in a.ones() {
            let (x, y) = (a.src1(h), a.tgt1(h));
            let src = e.c(f.one(h), comp1[y.index()])?;
            let tgt = e.c(comp1[x.index()], g.one(h))?;
            let cands = e.between(src, tgt).iter().copied();
            c2.push(match mode {
                Mode::Oplax => cands.collect(),
                Mode::Pseudo => cands.filter(|&c| e.is_invertible(c)).collect(),
            });
        }
        budget.spend(product_size(&c2))?;
        for comp2 in c2.into_iter().multi_cartesian_product_or_unit() {
            let t = OplaxTransformation {
                source: f.clone(),
                target: g.clone(),
                comp1: comp1.clone(),
                comp2,
            };
            if validate_transformation(&t, mode)?.ok() {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// All modifications `s ⇛ t`; with `invertible`, only those with invertible
/// components.
pub fn enumerate_modifications(
    s: &Arc<OplaxTransformation>,
    t: &Arc<OplaxTransformation>,
    invertible: bool,
    bounds: &SizeBounds,
) -> Result<Vec<Modification>> {
    let a = s.shape();
    let e = s.codomain();
    let c: Vec<Vec<Two>> = a
        .obs()
        .map(|x| {
            e.between(s.at(x), t.at(x))
                .iter()
                .copied()
                .filter(|&c| !invertible || e.is_invertible(c))
                .collect()
        })
        .collect();
    bounds.check_candidates("modification candidates", product_size(&c))?;
    let mut out = Vec::new();
    for comp in c.into_iter().multi_cartesian_product_or_unit() {
        let m = Modification {
            source: s.clone(),
            target: t.clone(),
            comp,
        };
        if validate_modification(&m)?.ok() {
            out.push(m);
        }
    }
    Ok(out)
}

/// Cartesian product over a list of choice lists; the empty product has
/// exactly one element.
trait ProductOrUnit<T> {
    fn multi_cartesian_product_or_unit(self) -> Box<dyn Iterator<Item = Vec<T>>>;
}

impl<T: Clone + 'static> ProductOrUnit<T> for std::vec::IntoIter<Vec<T>> {
    fn multi_cartesian_product_or_unit(self) -> Box<dyn Iterator<Item = Vec<T>>> {
        if self.len() == 0 {
            Box::new(std::iter::once(Vec::new()))
        } else {
            Box::new(self.multi_cartesian_product())
        }
    }
}

/// All strict functors `A → E` (identity constraints, composites and
/// identities preserved on the nose) that pass validation.
pub fn enumerate_strict_functors(
    a: &Arc<Bicategory>,
    e: &Arc<Bicategory>,
    bounds: &SizeBounds,
) -> Result<Vec<LaxFunctor>> {
    let mut budget = Budget {
        bounds,
        seen: 0,
        what: "functor candidates",
    };
    let c0: Vec<Vec<Ob>> = a.obs().map(|_| e.obs().collect()).collect();
    budget.spend(product_size(&c0))?;
    let mut out = Vec::new();
    for ob in c0.into_iter().multi_cartesian_product_or_unit() {
        let c1: Vec<Vec<One>> = a
            .ones()
            .map(|f| {
                let (x, y) = (ob[a.src1(f).index()], ob[a.tgt1(f).index()]);
                if a.id1(a.src1(f)) == f {
                    vec![e.id1(x)]
                } else {
                    e.hom(x, y).to_vec()
                }
            })
            .collect();
        budget.spend(product_size(&c1))?;
        'ones: for map1 in c1.into_iter().multi_cartesian_product_or_unit() {
            for (f, g, fg) in a.hcomp1_entries() {
                if e.hcomp1(map1[f.index()], map1[g.index()]) != Some(map1[fg.index()]) {
                    continue 'ones;
                }
            }
            let c2: Vec<Vec<Two>> = a
                .twos()
                .map(|t| {
                    let (u, v) = (map1[a.src2(t).index()], map1[a.tgt2(t).index()]);
                    if a.id2(a.src2(t)) == t {
                        vec![e.id2(u)]
                    } else {
                        e.between(u, v).to_vec()
                    }
                })
                .collect();
            budget.spend(product_size(&c2))?;
            for map2 in c2.into_iter().multi_cartesian_product_or_unit() {
                let mut comp = HashMap::new();
                for (f, g, fg) in a.hcomp1_entries() {
                    comp.insert((f, g), e.id2(map1[fg.index()]));
                }
                let fun = LaxFunctor {
                    source: a.clone(),
                    target: e.clone(),
                    variance: Variance::Pseudo,
                    strict: true,
                    unit: ob.iter().map(|&x| e.id2(e.id1(x))).collect(),
                    ob: ob.clone(),
                    map1: map1.clone(),
                    map2,
                    comp,
                };
                if validate_functor(&fun)?.ok() {
                    out.push(fun);
                }
            }
        }
    }
    Ok(out)
}
