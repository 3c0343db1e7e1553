//! Fully tabulated finite bicategories.
//!
//! Horizontal and vertical composition are both diagrammatic: `f · g` is `f`
//! then `g`, and `α | β` is `α` then `β`. Identity 2-cells are explicit cells,
//! and whiskering is horizontal composition with an identity 2-cell.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::category::{check_unique, Category, CategoryBuilder};
use crate::error::{Error, Result};
use crate::ids::{Mor, Ob, Obj, One, Two};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneData {
    pub name: String,
    pub src: Ob,
    pub tgt: Ob,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoData {
    pub name: String,
    pub src: One,
    pub tgt: One,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bicategory {
    ob_names: Vec<String>,
    ones: Vec<OneData>,
    twos: Vec<TwoData>,
    id1: Vec<One>,
    id2: Vec<Two>,
    vcomp: HashMap<(Two, Two), Two>,
    hcomp1: HashMap<(One, One), One>,
    hcomp2: HashMap<(Two, Two), Two>,
    assoc: HashMap<(One, One, One), Two>,
    lunit: Vec<Two>,
    runit: Vec<Two>,
    // derived indexes
    hom: HashMap<(Ob, Ob), Vec<One>>,
    out_of: Vec<Vec<One>>,
    between: HashMap<(One, One), Vec<Two>>,
    out2: Vec<Vec<Two>>,
    inverse: Vec<Option<Two>>,
    ob_index: HashMap<String, Ob>,
    one_index: HashMap<String, One>,
    two_index: HashMap<String, Two>,
}

/// Raw tables for a bicategory, checked structurally by [`build`](Self::build).
#[derive(Debug, Clone, Default)]
pub struct BicategoryBuilder {
    ob_names: Vec<String>,
    ones: Vec<OneData>,
    twos: Vec<TwoData>,
    id1: HashMap<Ob, One>,
    id2: HashMap<One, Two>,
    vcomp: HashMap<(Two, Two), Two>,
    hcomp1: HashMap<(One, One), One>,
    hcomp2: HashMap<(Two, Two), Two>,
    assoc: HashMap<(One, One, One), Two>,
    lunit: HashMap<One, Two>,
    runit: HashMap<One, Two>,
}

impl BicategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, name: impl Into<String>) -> Ob {
        self.ob_names.push(name.into());
        Ob::from_index(self.ob_names.len() - 1)
    }

    pub fn one(&mut self, name: impl Into<String>, src: Ob, tgt: Ob) -> One {
        self.ones.push(OneData {
            name: name.into(),
            src,
            tgt,
        });
        One::from_index(self.ones.len() - 1)
    }

    pub fn two(&mut self, name: impl Into<String>, src: One, tgt: One) -> Two {
        self.twos.push(TwoData {
            name: name.into(),
            src,
            tgt,
        });
        Two::from_index(self.twos.len() - 1)
    }

    pub fn set_id1(&mut self, x: Ob, f: One) {
        self.id1.insert(x, f);
    }
    pub fn set_id2(&mut self, f: One, a: Two) {
        self.id2.insert(f, a);
    }
    pub fn set_vcomp(&mut self, a: Two, b: Two, ab: Two) {
        self.vcomp.insert((a, b), ab);
    }
    pub fn set_hcomp1(&mut self, f: One, g: One, fg: One) {
        self.hcomp1.insert((f, g), fg);
    }
    pub fn set_hcomp2(&mut self, a: Two, b: Two, ab: Two) {
        self.hcomp2.insert((a, b), ab);
    }
    pub fn set_assoc(&mut self, f: One, g: One, h: One, a: Two) {
        self.assoc.insert((f, g, h), a);
    }
    pub fn set_lunit(&mut self, f: One, a: Two) {
        self.lunit.insert(f, a);
    }
    pub fn set_runit(&mut self, f: One, a: Two) {
        self.runit.insert(f, a);
    }

    pub fn ob_count(&self) -> usize {
        self.ob_names.len()
    }
    pub fn one_count(&self) -> usize {
        self.ones.len()
    }
    pub fn two_count(&self) -> usize {
        self.twos.len()
    }

    pub fn vcomp_entries(&self) -> Vec<(Two, Two, Two)> {
        let mut v: Vec<_> = self.vcomp.iter().map(|(&(a, b), &c)| (a, b, c)).collect();
        v.sort();
        v
    }
    pub fn hcomp2_entries(&self) -> Vec<(Two, Two, Two)> {
        let mut v: Vec<_> = self.hcomp2.iter().map(|(&(a, b), &c)| (a, b, c)).collect();
        v.sort();
        v
    }
    pub fn hcomp1_entries(&self) -> Vec<(One, One, One)> {
        let mut v: Vec<_> = self.hcomp1.iter().map(|(&(a, b), &c)| (a, b, c)).collect();
        v.sort();
        v
    }
    pub fn assoc_entries(&self) -> Vec<(One, One, One, Two)> {
        let mut v: Vec<_> = self.assoc.iter().map(|(&(f, g, h), &a)| (f, g, h, a)).collect();
        v.sort();
        v
    }
    pub fn lunit_entries(&self) -> Vec<(One, Two)> {
        let mut v: Vec<_> = self.lunit.iter().map(|(&f, &a)| (f, a)).collect();
        v.sort();
        v
    }
    pub fn runit_entries(&self) -> Vec<(One, Two)> {
        let mut v: Vec<_> = self.runit.iter().map(|(&f, &a)| (f, a)).collect();
        v.sort();
        v
    }

    fn dangling(what: &str) -> Error {
        Error::Structural(format!("{what} references an undeclared cell"))
    }

    /// Structural checks: unique names, declared ids, parallel 2-cell
    /// endpoints, and tables total exactly on composable inputs.
    pub fn build(self) -> Result<Bicategory> {
        let (n0, n1, n2) = (self.ob_names.len(), self.ones.len(), self.twos.len());
        check_unique(&self.ob_names, "0-cell")?;
        check_unique(self.ones.iter().map(|o| &o.name), "1-cell")?;
        check_unique(self.twos.iter().map(|t| &t.name), "2-cell")?;
        let ob_ok = |x: Ob| x.index() < n0;
        let one_ok = |f: One| f.index() < n1;
        let two_ok = |a: Two| a.index() < n2;
        for o in &self.ones {
            if !ob_ok(o.src) || !ob_ok(o.tgt) {
                return Err(Error::Structural(format!("1-cell {} has a dangling endpoint", o.name)));
            }
        }
        for t in &self.twos {
            if !one_ok(t.src) || !one_ok(t.tgt) {
                return Err(Error::Structural(format!("2-cell {} has a dangling endpoint", t.name)));
            }
            let (s, u) = (&self.ones[t.src.index()], &self.ones[t.tgt.index()]);
            if s.src != u.src || s.tgt != u.tgt {
                return Err(Error::Structural(format!(
                    "2-cell {} joins non-parallel 1-cells",
                    t.name
                )));
            }
        }
        let src1 = |f: One| self.ones[f.index()].src;
        let tgt1 = |f: One| self.ones[f.index()].tgt;
        let src2 = |a: Two| self.twos[a.index()].src;
        let tgt2 = |a: Two| self.twos[a.index()].tgt;

        let mut id1 = Vec::with_capacity(n0);
        for i in 0..n0 {
            match self.id1.get(&Ob::from_index(i)) {
                Some(&f) if one_ok(f) => id1.push(f),
                Some(_) => return Err(Self::dangling("id1")),
                None => {
                    return Err(Error::Structural(format!(
                        "0-cell {} has no identity 1-cell",
                        self.ob_names[i]
                    )))
                }
            }
        }
        if self.id1.keys().any(|x| !ob_ok(*x)) {
            return Err(Self::dangling("id1"));
        }
        let per_one = |table: &HashMap<One, Two>, what: &str| -> Result<Vec<Two>> {
            if table.keys().any(|f| !one_ok(*f)) {
                return Err(Self::dangling(what));
            }
            (0..n1)
                .map(|i| match table.get(&One::from_index(i)) {
                    Some(&a) if two_ok(a) => Ok(a),
                    Some(_) => Err(Self::dangling(what)),
                    None => Err(Error::Structural(format!(
                        "{what} missing for 1-cell {}",
                        self.ones[i].name
                    ))),
                })
                .collect()
        };
        let id2 = per_one(&self.id2, "id2")?;
        let lunit = per_one(&self.lunit, "lunit")?;
        let runit = per_one(&self.runit, "runit")?;

        let mut hom: HashMap<(Ob, Ob), Vec<One>> = HashMap::new();
        let mut out_of = vec![Vec::new(); n0];
        for (i, o) in self.ones.iter().enumerate() {
            hom.entry((o.src, o.tgt)).or_default().push(One::from_index(i));
            out_of[o.src.index()].push(One::from_index(i));
        }
        let mut between: HashMap<(One, One), Vec<Two>> = HashMap::new();
        let mut out2 = vec![Vec::new(); n1];
        for (i, t) in self.twos.iter().enumerate() {
            between.entry((t.src, t.tgt)).or_default().push(Two::from_index(i));
            out2[t.src.index()].push(Two::from_index(i));
        }

        // vertical composition
        for (&(a, b), &c) in &self.vcomp {
            if !two_ok(a) || !two_ok(b) || !two_ok(c) {
                return Err(Self::dangling("vcomp"));
            }
            if tgt2(a) != src2(b) {
                return Err(Error::Structural(format!(
                    "vcomp entry for non-composable ({}, {})",
                    self.twos[a.index()].name,
                    self.twos[b.index()].name
                )));
            }
        }
        for a in 0..n2 {
            let a = Two::from_index(a);
            for &b in &out2[tgt2(a).index()] {
                if !self.vcomp.contains_key(&(a, b)) {
                    return Err(Error::Structural(format!(
                        "vcomp missing ({}, {})",
                        self.twos[a.index()].name,
                        self.twos[b.index()].name
                    )));
                }
            }
        }
        // horizontal composition of 1-cells
        for (&(f, g), &h) in &self.hcomp1 {
            if !one_ok(f) || !one_ok(g) || !one_ok(h) {
                return Err(Self::dangling("hcomp1"));
            }
            if tgt1(f) != src1(g) {
                return Err(Error::Structural(format!(
                    "hcomp1 entry for non-composable ({}, {})",
                    self.ones[f.index()].name,
                    self.ones[g.index()].name
                )));
            }
        }
        for f in 0..n1 {
            let f = One::from_index(f);
            for &g in &out_of[tgt1(f).index()] {
                if !self.hcomp1.contains_key(&(f, g)) {
                    return Err(Error::Structural(format!(
                        "hcomp1 missing ({}, {})",
                        self.ones[f.index()].name,
                        self.ones[g.index()].name
                    )));
                }
            }
        }
        // horizontal composition of 2-cells
        let mut twos_from: Vec<Vec<Two>> = vec![Vec::new(); n0];
        for (i, t) in self.twos.iter().enumerate() {
            twos_from[src1(t.src).index()].push(Two::from_index(i));
        }
        for (&(a, b), &c) in &self.hcomp2 {
            if !two_ok(a) || !two_ok(b) || !two_ok(c) {
                return Err(Self::dangling("hcomp2"));
            }
            if tgt1(src2(a)) != src1(src2(b)) {
                return Err(Error::Structural("hcomp2 entry for non-composable pair".into()));
            }
        }
        for a in 0..n2 {
            let a = Two::from_index(a);
            for &b in &twos_from[tgt1(src2(a)).index()] {
                if !self.hcomp2.contains_key(&(a, b)) {
                    return Err(Error::Structural(format!(
                        "hcomp2 missing ({}, {})",
                        self.twos[a.index()].name,
                        self.twos[b.index()].name
                    )));
                }
            }
        }
        // associators
        for (&(f, g, h), &a) in &self.assoc {
            if !one_ok(f) || !one_ok(g) || !one_ok(h) || !two_ok(a) {
                return Err(Self::dangling("assoc"));
            }
            if tgt1(f) != src1(g) || tgt1(g) != src1(h) {
                return Err(Error::Structural("assoc entry for non-composable triple".into()));
            }
        }
        let mut n_triples = 0usize;
        for f in 0..n1 {
            let f = One::from_index(f);
            for &g in &out_of[tgt1(f).index()] {
                for &h in &out_of[tgt1(g).index()] {
                    n_triples += 1;
                    if !self.assoc.contains_key(&(f, g, h)) {
                        return Err(Error::Structural(format!(
                            "assoc missing ({}, {}, {})",
                            self.ones[f.index()].name,
                            self.ones[g.index()].name,
                            self.ones[h.index()].name
                        )));
                    }
                }
            }
        }
        debug_assert_eq!(n_triples, self.assoc.len());

        let ob_index = self
            .ob_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), Ob::from_index(i)))
            .collect();
        let one_index = self
            .ones
            .iter()
            .enumerate()
            .map(|(i, o)| (o.name.clone(), One::from_index(i)))
            .collect();
        let two_index = self
            .twos
            .iter()
            .enumerate()
            .map(|(i, t)| (t.name.clone(), Two::from_index(i)))
            .collect();

        let mut b = Bicategory {
            ob_names: self.ob_names,
            ones: self.ones,
            twos: self.twos,
            id1,
            id2,
            vcomp: self.vcomp,
            hcomp1: self.hcomp1,
            hcomp2: self.hcomp2,
            assoc: self.assoc,
            lunit,
            runit,
            hom,
            out_of,
            between,
            out2,
            inverse: Vec::new(),
            ob_index,
            one_index,
            two_index,
        };
        b.inverse = (0..n2)
            .map(|i| b.find_inverse(Two::from_index(i)))
            .collect();
        Ok(b)
    }
}

impl Bicategory {
    fn find_inverse(&self, a: Two) -> Option<Two> {
        let (f, g) = (self.src2(a), self.tgt2(a));
        self.between(g, f).iter().copied().find(|&b| {
            self.vcomp(a, b) == Some(self.id2(f)) && self.vcomp(b, a) == Some(self.id2(g))
        })
    }

    pub fn ob_count(&self) -> usize {
        self.ob_names.len()
    }
    pub fn one_count(&self) -> usize {
        self.ones.len()
    }
    pub fn two_count(&self) -> usize {
        self.twos.len()
    }

    pub fn obs(&self) -> impl Iterator<Item = Ob> + Clone + '_ {
        (0..self.ob_names.len()).map(Ob::from_index)
    }
    pub fn ones(&self) -> impl Iterator<Item = One> + Clone + '_ {
        (0..self.ones.len()).map(One::from_index)
    }
    pub fn twos(&self) -> impl Iterator<Item = Two> + Clone + '_ {
        (0..self.twos.len()).map(Two::from_index)
    }

    pub fn ob_name(&self, x: Ob) -> &str {
        &self.ob_names[x.index()]
    }
    pub fn one_name(&self, f: One) -> &str {
        &self.ones[f.index()].name
    }
    pub fn two_name(&self, a: Two) -> &str {
        &self.twos[a.index()].name
    }
    pub fn find_ob(&self, name: &str) -> Option<Ob> {
        self.ob_index.get(name).copied()
    }
    pub fn find_one(&self, name: &str) -> Option<One> {
        self.one_index.get(name).copied()
    }
    pub fn find_two(&self, name: &str) -> Option<Two> {
        self.two_index.get(name).copied()
    }

    #[inline]
    pub fn src1(&self, f: One) -> Ob {
        self.ones[f.index()].src
    }
    #[inline]
    pub fn tgt1(&self, f: One) -> Ob {
        self.ones[f.index()].tgt
    }
    #[inline]
    pub fn src2(&self, a: Two) -> One {
        self.twos[a.index()].src
    }
    #[inline]
    pub fn tgt2(&self, a: Two) -> One {
        self.twos[a.index()].tgt
    }
    #[inline]
    pub fn id1(&self, x: Ob) -> One {
        self.id1[x.index()]
    }
    #[inline]
    pub fn id2(&self, f: One) -> Two {
        self.id2[f.index()]
    }
    #[inline]
    pub fn lunit(&self, f: One) -> Two {
        self.lunit[f.index()]
    }
    #[inline]
    pub fn runit(&self, f: One) -> Two {
        self.runit[f.index()]
    }
    #[inline]
    pub fn vcomp(&self, a: Two, b: Two) -> Option<Two> {
        self.vcomp.get(&(a, b)).copied()
    }
    #[inline]
    pub fn hcomp1(&self, f: One, g: One) -> Option<One> {
        self.hcomp1.get(&(f, g)).copied()
    }
    #[inline]
    pub fn hcomp2(&self, a: Two, b: Two) -> Option<Two> {
        self.hcomp2.get(&(a, b)).copied()
    }
    #[inline]
    pub fn assoc(&self, f: One, g: One, h: One) -> Option<Two> {
        self.assoc.get(&(f, g, h)).copied()
    }
    #[inline]
    pub fn inverse(&self, a: Two) -> Option<Two> {
        self.inverse[a.index()]
    }
    pub fn is_invertible(&self, a: Two) -> bool {
        self.inverse[a.index()].is_some()
    }
    pub fn is_identity(&self, a: Two) -> bool {
        self.id2(self.src2(a)) == a
    }

    pub fn hom(&self, x: Ob, y: Ob) -> &[One] {
        self.hom.get(&(x, y)).map(Vec::as_slice).unwrap_or(&[])
    }
    pub fn out_of(&self, x: Ob) -> &[One] {
        &self.out_of[x.index()]
    }
    /// 2-cells with source `f`.
    pub fn twos_from(&self, f: One) -> &[Two] {
        &self.out2[f.index()]
    }
    /// 2-cells `f ⇒ g`.
    pub fn between(&self, f: One, g: One) -> &[Two] {
        self.between.get(&(f, g)).map(Vec::as_slice).unwrap_or(&[])
    }
    /// Invertible 2-cells `f ⇒ g`.
    pub fn isos_between(&self, f: One, g: One) -> impl Iterator<Item = Two> + '_ {
        self.between(f, g).iter().copied().filter(|&a| self.is_invertible(a))
    }
    /// Composable triples `(f, g, h)`.
    pub fn composable_triples(&self) -> impl Iterator<Item = (One, One, One)> + '_ {
        self.ones().flat_map(move |f| {
            self.out_of(self.tgt1(f)).iter().flat_map(move |&g| {
                self.out_of(self.tgt1(g)).iter().map(move |&h| (f, g, h))
            })
        })
    }

    // Result-returning lookups for constructions, where a miss means the
    // input data was not a valid bicategory.

    pub fn v(&self, a: Two, b: Two) -> Result<Two> {
        self.vcomp(a, b).ok_or_else(|| {
            Error::incons(format!(
                "vertical composite ({} | {}) undefined",
                self.two_name(a),
                self.two_name(b)
            ))
        })
    }
    pub fn h(&self, a: Two, b: Two) -> Result<Two> {
        self.hcomp2(a, b).ok_or_else(|| {
            Error::incons(format!(
                "horizontal composite ({} · {}) undefined",
                self.two_name(a),
                self.two_name(b)
            ))
        })
    }
    pub fn c(&self, f: One, g: One) -> Result<One> {
        self.hcomp1(f, g).ok_or_else(|| {
            Error::incons(format!(
                "composite ({} · {}) undefined",
                self.one_name(f),
                self.one_name(g)
            ))
        })
    }
    pub fn a(&self, f: One, g: One, h: One) -> Result<Two> {
        self.assoc(f, g, h)
            .ok_or_else(|| Error::incons("associator undefined for a non-composable triple"))
    }
    pub fn inv(&self, a: Two) -> Result<Two> {
        self.inverse(a)
            .ok_or_else(|| Error::incons(format!("2-cell {} is not invertible", self.two_name(a))))
    }
    /// Left whiskering `f · β`.
    pub fn lw(&self, f: One, b: Two) -> Result<Two> {
        self.h(self.id2(f), b)
    }
    /// Right whiskering `α · g`.
    pub fn rw(&self, a: Two, g: One) -> Result<Two> {
        self.h(a, self.id2(g))
    }
    /// Vertical composite of a non-empty sequence.
    pub fn vseq(&self, cells: &[Two]) -> Result<Two> {
        let (&first, rest) = cells
            .split_first()
            .ok_or_else(|| Error::incons("empty vertical composite"))?;
        rest.iter().try_fold(first, |acc, &b| self.v(acc, b))
    }
    pub fn vseq_opt(&self, cells: &[Two]) -> Option<Two> {
        let (&first, rest) = cells.split_first()?;
        rest.iter().try_fold(first, |acc, &b| self.vcomp(acc, b))
    }

    /// The hom-category `B(x, y)` with vertical composition.
    pub fn hom_category(&self, x: Ob, y: Ob) -> Result<HomCategory> {
        let ones: Vec<One> = self.hom(x, y).to_vec();
        let mut b = CategoryBuilder::new();
        let mut one_local = HashMap::new();
        for &f in &ones {
            let o = b.object(self.one_name(f).to_string());
            one_local.insert(f, o);
        }
        let mut twos = Vec::new();
        let mut two_local = HashMap::new();
        for &f in &ones {
            for &g in &ones {
                for &a in self.between(f, g) {
                    let m = b.morphism(self.two_name(a).to_string(), one_local[&f], one_local[&g]);
                    twos.push(a);
                    two_local.insert(a, m);
                }
            }
        }
        for &f in &ones {
            let id = self.id2(f);
            let m = *two_local
                .get(&id)
                .ok_or_else(|| Error::incons("identity 2-cell outside its hom"))?;
            b.set_identity(one_local[&f], m);
        }
        for &a in &twos {
            for &g in &ones {
                if g != self.tgt2(a) {
                    continue;
                }
                for &c in &ones {
                    for &bb in self.between(g, c) {
                        let ab = self.v(a, bb)?;
                        let m = *two_local
                            .get(&ab)
                            .ok_or_else(|| Error::incons("vertical composite outside its hom"))?;
                        b.set_comp(two_local[&a], two_local[&bb], m);
                    }
                }
            }
        }
        Ok(HomCategory {
            category: Arc::new(b.build()?),
            ones,
            twos,
            one_local,
            two_local,
        })
    }

    /// Copy back into a builder, for mutation and re-serialization.
    pub fn to_builder(&self) -> BicategoryBuilder {
        let mut b = BicategoryBuilder::new();
        b.ob_names = self.ob_names.clone();
        b.ones = self.ones.clone();
        b.twos = self.twos.clone();
        b.id1 = self.obs().map(|x| (x, self.id1(x))).collect();
        b.id2 = self.ones().map(|f| (f, self.id2(f))).collect();
        b.lunit = self.ones().map(|f| (f, self.lunit(f))).collect();
        b.runit = self.ones().map(|f| (f, self.runit(f))).collect();
        b.vcomp = self.vcomp.clone();
        b.hcomp1 = self.hcomp1.clone();
        b.hcomp2 = self.hcomp2.clone();
        b.assoc = self.assoc.clone();
        b
    }

    /// The locally discrete bicategory on a category: only identity 2-cells,
    /// identity coherence cells.
    pub fn locally_discrete(c: &Category) -> Result<Bicategory> {
        let mut b = BicategoryBuilder::new();
        for x in c.objects() {
            b.object(c.ob_name(x).to_string());
        }
        for m in c.morphisms() {
            b.one(
                c.mor_name(m).to_string(),
                Ob::from_index(c.src(m).index()),
                Ob::from_index(c.tgt(m).index()),
            );
        }
        for m in c.morphisms() {
            let f = One::from_index(m.index());
            b.two(format!("1[{}]", c.mor_name(m)), f, f);
        }
        let one = |m: Mor| One::from_index(m.index());
        let two = |m: Mor| Two::from_index(m.index());
        for x in c.objects() {
            b.set_id1(Ob::from_index(x.index()), one(c.identity(x)));
        }
        for m in c.morphisms() {
            b.set_id2(one(m), two(m));
            b.set_lunit(one(m), two(m));
            b.set_runit(one(m), two(m));
            b.set_vcomp(two(m), two(m), two(m));
        }
        for (f, g, fg) in c.comp_table() {
            b.set_hcomp1(one(f), one(g), one(fg));
            b.set_hcomp2(two(f), two(g), two(fg));
        }
        for f in c.morphisms() {
            for &g in c.hom_from(c.tgt(f)) {
                for &h in c.hom_from(c.tgt(g)) {
                    let fgh = c
                        .comp(f, g)
                        .and_then(|fg| c.comp(fg, h))
                        .ok_or_else(|| Error::incons("category composition"))?;
                    b.set_assoc(one(f), one(g), one(h), two(fgh));
                }
            }
        }
        b.build()
    }

    /// Cartesian product of bicategories with componentwise tables.
    pub fn product(l: &Bicategory, r: &Bicategory) -> Result<Bicategory> {
        let mut b = BicategoryBuilder::new();
        let ob = |x: Ob, y: Ob| Ob::from_index(x.index() * r.ob_count() + y.index());
        let one = |f: One, g: One| One::from_index(f.index() * r.one_count() + g.index());
        let two = |a: Two, c: Two| Two::from_index(a.index() * r.two_count() + c.index());
        for x in l.obs() {
            for y in r.obs() {
                b.object(format!("({},{})", l.ob_name(x), r.ob_name(y)));
            }
        }
        for f in l.ones() {
            for g in r.ones() {
                b.one(
                    format!("({},{})", l.one_name(f), r.one_name(g)),
                    ob(l.src1(f), r.src1(g)),
                    ob(l.tgt1(f), r.tgt1(g)),
                );
            }
        }
        for a in l.twos() {
            for c in r.twos() {
                b.two(
                    format!("({},{})", l.two_name(a), r.two_name(c)),
                    one(l.src2(a), r.src2(c)),
                    one(l.tgt2(a), r.tgt2(c)),
                );
            }
        }
        for x in l.obs() {
            for y in r.obs() {
                b.set_id1(ob(x, y), one(l.id1(x), r.id1(y)));
            }
        }
        for f in l.ones() {
            for g in r.ones() {
                let fg = one(f, g);
                b.set_id2(fg, two(l.id2(f), r.id2(g)));
                b.set_lunit(fg, two(l.lunit(f), r.lunit(g)));
                b.set_runit(fg, two(l.runit(f), r.runit(g)));
            }
        }
        for (&(a1, a2), &a3) in &l.vcomp {
            for (&(c1, c2), &c3) in &r.vcomp {
                b.set_vcomp(two(a1, c1), two(a2, c2), two(a3, c3));
            }
        }
        for (&(f1, f2), &f3) in &l.hcomp1 {
            for (&(g1, g2), &g3) in &r.hcomp1 {
                b.set_hcomp1(one(f1, g1), one(f2, g2), one(f3, g3));
            }
        }
        for (&(a1, a2), &a3) in &l.hcomp2 {
            for (&(c1, c2), &c3) in &r.hcomp2 {
                b.set_hcomp2(two(a1, c1), two(a2, c2), two(a3, c3));
            }
        }
        for (&(f1, f2, f3), &a) in &l.assoc {
            for (&(g1, g2, g3), &c) in &r.assoc {
                b.set_assoc(one(f1, g1), one(f2, g2), one(f3, g3), two(a, c));
            }
        }
        b.build()
    }

    /// The id of the product cell `(x, y)` in [`Bicategory::product`].
    pub fn product_ob(r: &Bicategory, x: Ob, y: Ob) -> Ob {
        Ob::from_index(x.index() * r.ob_count() + y.index())
    }
    pub fn product_one(r: &Bicategory, f: One, g: One) -> One {
        One::from_index(f.index() * r.one_count() + g.index())
    }
    pub fn product_two(r: &Bicategory, a: Two, c: Two) -> Two {
        Two::from_index(a.index() * r.two_count() + c.index())
    }

    /// Sorted table views, used for deterministic serialization.
    pub fn vcomp_entries(&self) -> Vec<(Two, Two, Two)> {
        let mut v: Vec<_> = self.vcomp.iter().map(|(&(a, b), &c)| (a, b, c)).collect();
        v.sort();
        v
    }
    pub fn hcomp1_entries(&self) -> Vec<(One, One, One)> {
        let mut v: Vec<_> = self.hcomp1.iter().map(|(&(a, b), &c)| (a, b, c)).collect();
        v.sort();
        v
    }
    pub fn hcomp2_entries(&self) -> Vec<(Two, Two, Two)> {
        let mut v: Vec<_> = self.hcomp2.iter().map(|(&(a, b), &c)| (a, b, c)).collect();
        v.sort();
        v
    }
    pub fn assoc_entries(&self) -> Vec<(One, One, One, Two)> {
        let mut v: Vec<_> = self.assoc.iter().map(|(&(f, g, h), &a)| (f, g, h, a)).collect();
        v.sort();
        v
    }
}

/// A hom-category `B(x, y)` together with the maps between its local ids and
/// the cells of the bicategory.
#[derive(Debug, Clone)]
pub struct HomCategory {
    pub category: Arc<Category>,
    pub ones: Vec<One>,
    pub twos: Vec<Two>,
    pub one_local: HashMap<One, Obj>,
    pub two_local: HashMap<Two, Mor>,
}

impl HomCategory {
    pub fn one_of(&self, o: Obj) -> One {
        self.ones[o.index()]
    }
    pub fn two_of(&self, m: Mor) -> Two {
        self.twos[m.index()]
    }
    pub fn obj(&self, f: One) -> Option<Obj> {
        self.one_local.get(&f).copied()
    }
    pub fn mor(&self, a: Two) -> Option<Mor> {
        self.two_local.get(&a).copied()
    }
}

/// Hands out names, suffixing `#2`, `#3`, ... on collisions.
#[derive(Debug, Default)]
pub(crate) struct FreshNames(HashSet<String>);

impl FreshNames {
    pub(crate) fn fresh(&mut self, base: String) -> String {
        if self.0.insert(base.clone()) {
            return base;
        }
        (2..)
            .map(|k| format!("{base}#{k}"))
            .find(|n| self.0.insert(n.clone()))
            .expect("unbounded suffixes")
    }
}
