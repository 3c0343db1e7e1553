//! Finite 1-categories with total composition tables, and functors between them.
//!
//! Composition is written in diagrammatic order: `comp(f, g)` is `f` then `g`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ids::{Mor, Obj};
use crate::report::{Axiom, CoherenceReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorData {
    pub name: String,
    pub src: Obj,
    pub tgt: Obj,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Category {
    ob_names: Vec<String>,
    mors: Vec<MorData>,
    identity: Vec<Mor>,
    comp: HashMap<(Mor, Mor), Mor>,
    hom: HashMap<(Obj, Obj), Vec<Mor>>,
    into: Vec<Vec<Mor>>,
    out_of: Vec<Vec<Mor>>,
}

#[derive(Debug, Clone, Default)]
pub struct CategoryBuilder {
    ob_names: Vec<String>,
    mors: Vec<MorData>,
    identity: Vec<Option<Mor>>,
    comp: HashMap<(Mor, Mor), Mor>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, name: impl Into<String>) -> Obj {
        self.ob_names.push(name.into());
        self.identity.push(None);
        Obj::from_index(self.ob_names.len() - 1)
    }

    pub fn morphism(&mut self, name: impl Into<String>, src: Obj, tgt: Obj) -> Mor {
        self.mors.push(MorData {
            name: name.into(),
            src,
            tgt,
        });
        Mor::from_index(self.mors.len() - 1)
    }

    pub fn set_identity(&mut self, x: Obj, m: Mor) {
        if x.index() >= self.identity.len() {
            self.identity.resize(x.index() + 1, None);
        }
        self.identity[x.index()] = Some(m);
    }

    pub fn set_comp(&mut self, f: Mor, g: Mor, fg: Mor) {
        self.comp.insert((f, g), fg);
    }

    pub fn object_count(&self) -> usize {
        self.ob_names.len()
    }

    /// Checks that every id is declared and that the composition table is
    /// total on composable pairs and empty elsewhere.
    pub fn build(self) -> Result<Category> {
        let n_ob = self.ob_names.len();
        let n_mor = self.mors.len();
        check_unique(&self.ob_names, "object")?;
        check_unique(self.mors.iter().map(|m| &m.name), "morphism")?;
        for m in &self.mors {
            if m.src.index() >= n_ob || m.tgt.index() >= n_ob {
                return Err(Error::Structural(format!(
                    "morphism {} has a dangling endpoint",
                    m.name
                )));
            }
        }
        if self.identity.len() > n_ob {
            return Err(Error::Structural("identity for undeclared object".into()));
        }
        let mut identity = Vec::with_capacity(n_ob);
        for (i, id) in self.identity.iter().enumerate() {
            match id {
                Some(m) if m.index() < n_mor => identity.push(*m),
                Some(_) => {
                    return Err(Error::Structural(format!(
                        "identity of {} is a dangling morphism",
                        self.ob_names[i]
                    )))
                }
                None => {
                    return Err(Error::Structural(format!(
                        "object {} has no identity",
                        self.ob_names[i]
                    )))
                }
            }
        }
        if identity.len() < n_ob {
            return Err(Error::Structural("missing identities".into()));
        }
        for (&(f, g), &h) in &self.comp {
            if f.index() >= n_mor || g.index() >= n_mor || h.index() >= n_mor {
                return Err(Error::Structural("composition entry with dangling id".into()));
            }
            if self.mors[f.index()].tgt != self.mors[g.index()].src {
                return Err(Error::Structural(format!(
                    "composition entry for non-composable pair ({}, {})",
                    self.mors[f.index()].name,
                    self.mors[g.index()].name
                )));
            }
        }
        let mut hom: HashMap<(Obj, Obj), Vec<Mor>> = HashMap::new();
        let mut into = vec![Vec::new(); n_ob];
        let mut out_of = vec![Vec::new(); n_ob];
        for (i, m) in self.mors.iter().enumerate() {
            hom.entry((m.src, m.tgt)).or_default().push(Mor::from_index(i));
            into[m.tgt.index()].push(Mor::from_index(i));
            out_of[m.src.index()].push(Mor::from_index(i));
        }
        for (i, m) in self.mors.iter().enumerate() {
            for &g in &out_of[m.tgt.index()] {
                if !self.comp.contains_key(&(Mor::from_index(i), g)) {
                    return Err(Error::Structural(format!(
                        "composition table missing ({}, {})",
                        m.name,
                        self.mors[g.index()].name
                    )));
                }
            }
        }
        Ok(Category {
            ob_names: self.ob_names,
            mors: self.mors,
            identity,
            comp: self.comp,
            hom,
            into,
            out_of,
        })
    }
}

pub(crate) fn check_unique<'a>(
    names: impl IntoIterator<Item = &'a String>,
    kind: &str,
) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::Structural(format!("duplicate {kind} id {n}")));
        }
    }
    Ok(())
}

impl Category {
    pub fn object_count(&self) -> usize {
        self.ob_names.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.mors.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> + '_ {
        (0..self.ob_names.len()).map(Obj::from_index)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = Mor> + '_ {
        (0..self.mors.len()).map(Mor::from_index)
    }

    pub fn ob_name(&self, x: Obj) -> &str {
        &self.ob_names[x.index()]
    }

    pub fn mor_name(&self, m: Mor) -> &str {
        &self.mors[m.index()].name
    }

    pub fn find_object(&self, name: &str) -> Option<Obj> {
        self.ob_names.iter().position(|n| n == name).map(Obj::from_index)
    }

    pub fn find_morphism(&self, name: &str) -> Option<Mor> {
        self.mors.iter().position(|m| m.name == name).map(Mor::from_index)
    }

    pub fn src(&self, m: Mor) -> Obj {
        self.mors[m.index()].src
    }

    pub fn tgt(&self, m: Mor) -> Obj {
        self.mors[m.index()].tgt
    }

    pub fn identity(&self, x: Obj) -> Mor {
        self.identity[x.index()]
    }

    /// `f` then `g`; `None` when the pair is not composable.
    pub fn comp(&self, f: Mor, g: Mor) -> Option<Mor> {
        self.comp.get(&(f, g)).copied()
    }

    pub fn hom(&self, x: Obj, y: Obj) -> &[Mor] {
        self.hom.get(&(x, y)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn into(&self, y: Obj) -> &[Mor] {
        &self.into[y.index()]
    }

    pub fn comp_table(&self) -> impl Iterator<Item = (Mor, Mor, Mor)> + '_ {
        self.comp.iter().map(|(&(f, g), &h)| (f, g, h))
    }

    /// Two-sided inverse of `m`, if any.
    pub fn inverse(&self, m: Mor) -> Option<Mor> {
        let (x, y) = (self.src(m), self.tgt(m));
        self.hom(y, x).iter().copied().find(|&n| {
            self.comp(m, n) == Some(self.identity(x)) && self.comp(n, m) == Some(self.identity(y))
        })
    }

    pub fn is_iso(&self, m: Mor) -> bool {
        self.inverse(m).is_some()
    }

    /// Copy of this category back into a builder, for mutation.
    pub fn to_builder(&self) -> CategoryBuilder {
        CategoryBuilder {
            ob_names: self.ob_names.clone(),
            mors: self.mors.clone(),
            identity: self.identity.iter().map(|&m| Some(m)).collect(),
            comp: self.comp.clone(),
        }
    }

    /// The arrow category: objects are morphisms, morphisms `f -> g` are
    /// commuting squares `(s, t)` with `s · g = f · t`.
    ///
    /// Returns the category together with, per object, the underlying arrow,
    /// and per morphism, the pair `(s, t)`.
    pub fn arrow_category(&self) -> Result<ArrowCategory> {
        let mut b = CategoryBuilder::new();
        let arrows: Vec<Mor> = self.morphisms().collect();
        for &a in &arrows {
            b.object(self.mor_name(a).to_string());
        }
        let mut squares = Vec::new();
        let mut index = HashMap::new();
        for (i, &f) in arrows.iter().enumerate() {
            for (j, &g) in arrows.iter().enumerate() {
                for &s in self.hom(self.src(f), self.src(g)) {
                    for &t in self.hom(self.tgt(f), self.tgt(g)) {
                        if self.comp(s, g) == self.comp(f, t) {
                            let m = b.morphism(
                                format!(
                                    "[{},{}]:{}->{}",
                                    self.mor_name(s),
                                    self.mor_name(t),
                                    self.mor_name(f),
                                    self.mor_name(g)
                                ),
                                Obj::from_index(i),
                                Obj::from_index(j),
                            );
                            index.insert((i, j, s, t), m);
                            squares.push((i, j, s, t));
                        }
                    }
                }
            }
        }
        for (i, &f) in arrows.iter().enumerate() {
            let m = index[&(i, i, self.identity(self.src(f)), self.identity(self.tgt(f)))];
            b.set_identity(Obj::from_index(i), m);
        }
        for (m1, &(i, j, s, t)) in squares.iter().enumerate() {
            for (m2, &(j2, k, s2, t2)) in squares.iter().enumerate() {
                if j != j2 {
                    continue;
                }
                let ss = self.comp(s, s2).ok_or_else(|| Error::incons("square sides"))?;
                let tt = self.comp(t, t2).ok_or_else(|| Error::incons("square sides"))?;
                let composite = index
                    .get(&(i, k, ss, tt))
                    .ok_or_else(|| Error::incons("composite square does not commute"))?;
                b.set_comp(Mor::from_index(m1), Mor::from_index(m2), *composite);
            }
        }
        Ok(ArrowCategory {
            category: b.build()?,
            arrows,
            squares: squares.into_iter().map(|(_, _, s, t)| (s, t)).collect(),
        })
    }
}

/// An arrow category with the data identifying its cells in the base.
#[derive(Debug, Clone)]
pub struct ArrowCategory {
    pub category: Category,
    /// Underlying arrow of each object.
    pub arrows: Vec<Mor>,
    /// Domain and codomain sides `(s, t)` of each square.
    pub squares: Vec<(Mor, Mor)>,
}

/// Checks the category axioms by enumeration. Structural problems are caught
/// earlier, when the category is built.
pub fn validate_category(c: &Category) -> CoherenceReport {
    let mut r = CoherenceReport::new();
    for x in c.objects() {
        let i = c.identity(x);
        if c.src(i) != x || c.tgt(i) != x {
            r.push(
                Axiom::CategoryTyping,
                vec![c.ob_name(x).into(), c.mor_name(i).into()],
            );
        }
    }
    for (f, g, h) in c.comp_table() {
        if c.src(h) != c.src(f) || c.tgt(h) != c.tgt(g) {
            r.push(
                Axiom::CategoryTyping,
                vec![c.mor_name(f).into(), c.mor_name(g).into(), c.mor_name(h).into()],
            );
        }
    }
    for f in c.morphisms() {
        let (x, y) = (c.src(f), c.tgt(f));
        if c.comp(c.identity(x), f) != Some(f) || c.comp(f, c.identity(y)) != Some(f) {
            r.push(Axiom::CategoryIdentity, vec![c.mor_name(f).into()]);
        }
    }
    for f in c.morphisms() {
        for &g in c.hom_from(c.tgt(f)) {
            for &h in c.hom_from(c.tgt(g)) {
                let left = c.comp(f, g).and_then(|fg| c.comp(fg, h));
                let right = c.comp(g, h).and_then(|gh| c.comp(f, gh));
                if left.is_none() || left != right {
                    r.push(
                        Axiom::CategoryAssociativity,
                        vec![c.mor_name(f).into(), c.mor_name(g).into(), c.mor_name(h).into()],
                    );
                }
            }
        }
    }
    r
}

impl Category {
    /// Morphisms with the given source.
    pub fn hom_from(&self, x: Obj) -> &[Mor] {
        &self.out_of[x.index()]
    }
}

/// A functor between finite categories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatFunctor {
    pub source: Arc<Category>,
    pub target: Arc<Category>,
    pub ob: Vec<Obj>,
    pub mor: Vec<Mor>,
}

impl CatFunctor {
    pub fn identity(c: Arc<Category>) -> Self {
        CatFunctor {
            ob: c.objects().collect(),
            mor: c.morphisms().collect(),
            source: c.clone(),
            target: c,
        }
    }

    #[inline]
    pub fn on_ob(&self, x: Obj) -> Obj {
        self.ob[x.index()]
    }

    #[inline]
    pub fn on_mor(&self, m: Mor) -> Mor {
        self.mor[m.index()]
    }

    /// `self` then `other`.
    pub fn then(&self, other: &CatFunctor) -> Result<CatFunctor> {
        if *self.target != *other.source {
            return Err(Error::ShapeMismatch("functor composite: middle categories differ".into()));
        }
        Ok(CatFunctor {
            source: self.source.clone(),
            target: other.target.clone(),
            ob: self.ob.iter().map(|&x| other.on_ob(x)).collect(),
            mor: self.mor.iter().map(|&m| other.on_mor(m)).collect(),
        })
    }
}

pub fn validate_cat_functor(f: &CatFunctor) -> CoherenceReport {
    let (c, d) = (&*f.source, &*f.target);
    let mut r = CoherenceReport::new();
    if f.ob.len() != c.object_count() || f.mor.len() != c.morphism_count() {
        r.push(Axiom::FunctorTyping, vec!["table size".into()]);
        return r;
    }
    if f.ob.iter().any(|x| x.index() >= d.object_count())
        || f.mor.iter().any(|m| m.index() >= d.morphism_count())
    {
        r.push(Axiom::FunctorTyping, vec!["dangling image".into()]);
        return r;
    }
    for m in c.morphisms() {
        let fm = f.on_mor(m);
        if d.src(fm) != f.on_ob(c.src(m)) || d.tgt(fm) != f.on_ob(c.tgt(m)) {
            r.push(Axiom::FunctorTyping, vec![c.mor_name(m).into()]);
        }
    }
    for x in c.objects() {
        if f.on_mor(c.identity(x)) != d.identity(f.on_ob(x)) {
            r.push(Axiom::HomFunctoriality, vec![c.ob_name(x).into()]);
        }
    }
    for (g, h, gh) in c.comp_table() {
        if d.comp(f.on_mor(g), f.on_mor(h)) != Some(f.on_mor(gh)) {
            r.push(
                Axiom::HomFunctoriality,
                vec![c.mor_name(g).into(), c.mor_name(h).into()],
            );
        }
    }
    r
}
