//! The JSON document format and its conversion to and from library values.
//!
//! Cells are referenced by name. Tables are arrays of
//! `[operand ids..., result id]`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use bicatfib::limits::Cone;
use bicatfib::{
    Bicategory, BicategoryBuilder, Cleavage, LaxFunctor, LiftProblem, Mode, Modification, Ob,
    One, OplaxTransformation, Two, Variance,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default)]
    pub bicategories: Vec<BicategoryDoc>,
    #[serde(default)]
    pub functors: Vec<FunctorDoc>,
    #[serde(default)]
    pub transformations: Vec<TransformationDoc>,
    #[serde(default)]
    pub modifications: Vec<ModificationDoc>,
    #[serde(default)]
    pub cleavages: Vec<CleavageDoc>,
    #[serde(default)]
    pub diagrams: Vec<DiagramDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BicategoryDoc {
    pub id: String,
    pub objects: Vec<String>,
    pub one_cells: Vec<CellDoc>,
    pub two_cells: Vec<CellDoc>,
    pub id1: Vec<[String; 2]>,
    pub id2: Vec<[String; 2]>,
    pub vcomp: Vec<[String; 3]>,
    pub hcomp1: Vec<[String; 3]>,
    pub hcomp2: Vec<[String; 3]>,
    pub assoc: Vec<[String; 4]>,
    pub lunit: Vec<[String; 2]>,
    pub runit: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub id: String,
    pub source: String,
    pub target: String,
    pub variance: String,
    pub strict: bool,
    pub objects: Vec<[String; 2]>,
    pub one_cells: Vec<[String; 2]>,
    pub two_cells: Vec<[String; 2]>,
    pub unit: Vec<[String; 2]>,
    pub comp: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformationDoc {
    pub id: String,
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// `[shape 0-cell, component 1-cell]`
    pub comp1: Vec<[String; 2]>,
    /// `[shape 1-cell, component 2-cell]`
    pub comp2: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModificationDoc {
    pub id: String,
    pub source: String,
    pub target: String,
    pub comp: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CleavageDoc {
    pub id: String,
    pub functor: String,
    /// `[e, f, f̂]`
    pub lift1: Vec<[String; 3]>,
    /// `[f, g, h, α, ĥ, α̂]`
    pub lift_triple: Vec<[String; 6]>,
    /// `[k, θ, θ̂]`
    pub local: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    pub id: String,
    pub functor: String,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub apex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub legs: Option<String>,
}

/// A parse or resolution error with its position in the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocError {
    pub line: usize,
    pub column: usize,
    /// The offending key or reference, when there is one.
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)?;
        if let Some(k) = &self.key {
            write!(f, " (at \"{k}\")")?;
        }
        Ok(())
    }
}

impl std::error::Error for DocError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Named<T> {
    pub id: String,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformationEntry {
    pub id: String,
    pub value: Arc<OplaxTransformation>,
    pub mode: Option<Mode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleavageEntry {
    pub id: String,
    pub functor: Arc<LaxFunctor>,
    pub value: Cleavage,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub id: String,
    pub functor: Arc<LaxFunctor>,
    pub mode: Mode,
    pub cone: Option<Cone>,
}

/// Resolved entities, in document order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Workspace {
    pub bicategories: Vec<Named<Arc<Bicategory>>>,
    pub functors: Vec<Named<Arc<LaxFunctor>>>,
    pub transformations: Vec<TransformationEntry>,
    pub modifications: Vec<Named<Modification>>,
    pub cleavages: Vec<CleavageEntry>,
    pub diagrams: Vec<Diagram>,
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Locates a reference for error reporting: the first occurrence of the
/// quoted `needle` after the quoted `anchor` (the enclosing entity's id).
struct Locator<'a> {
    text: &'a str,
}

impl Locator<'_> {
    fn error(&self, anchor: &str, needle: &str, message: String) -> DocError {
        let quoted = |s: &str| format!("\"{s}\"");
        let start = self.text.find(&quoted(anchor)).unwrap_or(0);
        let at = self.text[start..]
            .find(&quoted(needle))
            .map_or(start, |i| start + i);
        let (line, column) = position(self.text, at);
        DocError {
            line,
            column,
            key: Some(needle.to_string()),
            message,
        }
    }
}

pub fn parse_document(text: &str) -> Result<Document, DocError> {
    serde_json::from_str(text).map_err(|e| {
        let message = e.to_string();
        let key = message
            .split('`')
            .nth(1)
            .filter(|_| message.contains("unknown field") || message.contains("missing field"))
            .map(str::to_string);
        DocError {
            line: e.line(),
            column: e.column(),
            key,
            message: message
                .rsplit_once(" at line")
                .map_or(message.clone(), |(m, _)| m.to_string()),
        }
    })
}

pub fn parse_workspace(text: &str) -> Result<Workspace, DocError> {
    let doc = parse_document(text)?;
    Workspace::resolve(&doc, text)
}

struct Names {
    ob: HashMap<String, Ob>,
    one: HashMap<String, One>,
    two: HashMap<String, Two>,
}

impl Names {
    fn of(b: &Bicategory) -> Names {
        Names {
            ob: b.obs().map(|x| (b.ob_name(x).to_string(), x)).collect(),
            one: b.ones().map(|f| (b.one_name(f).to_string(), f)).collect(),
            two: b.twos().map(|a| (b.two_name(a).to_string(), a)).collect(),
        }
    }
}

struct Resolver<'a> {
    loc: Locator<'a>,
    anchor: String,
}

impl Resolver<'_> {
    fn get<T: Copy>(&self, map: &HashMap<String, T>, name: &str, what: &str) -> Result<T, DocError> {
        map.get(name).copied().ok_or_else(|| {
            self.loc
                .error(&self.anchor, name, format!("{} refers to an undeclared {what} \"{name}\"", self.anchor))
        })
    }

    fn fail(&self, needle: &str, message: String) -> DocError {
        self.loc.error(&self.anchor, needle, message)
    }
}

fn check_ids<'a>(loc: &Locator, what: &str, ids: impl Iterator<Item = &'a String>) -> Result<(), DocError> {
    let mut seen = std::collections::HashSet::new();
    for id in ids {
        if !seen.insert(id.as_str()) {
            let quoted = format!("\"{id}\"");
            let first = loc.text.find(&quoted).unwrap_or(0);
            let at = loc.text[first + 1..]
                .find(&quoted)
                .map_or(first, |i| first + 1 + i);
            let (line, column) = position(loc.text, at);
            return Err(DocError {
                line,
                column,
                key: Some(id.clone()),
                message: format!("duplicate {what} id \"{id}\""),
            });
        }
    }
    Ok(())
}

fn find<'b, T>(items: &'b [Named<T>], id: &str) -> Option<&'b T> {
    items.iter().find(|n| n.id == id).map(|n| &n.value)
}

impl Workspace {
    pub fn resolve(doc: &Document, text: &str) -> Result<Workspace, DocError> {
        let loc = Locator { text };
        check_ids(&loc, "bicategory", doc.bicategories.iter().map(|d| &d.id))?;
        check_ids(&loc, "functor", doc.functors.iter().map(|d| &d.id))?;
        check_ids(&loc, "transformation", doc.transformations.iter().map(|d| &d.id))?;
        check_ids(&loc, "modification", doc.modifications.iter().map(|d| &d.id))?;
        check_ids(&loc, "cleavage", doc.cleavages.iter().map(|d| &d.id))?;
        check_ids(&loc, "diagram", doc.diagrams.iter().map(|d| &d.id))?;
        let mut ws = Workspace::default();
        let mut names: HashMap<String, Names> = HashMap::new();
        for d in &doc.bicategories {
            let r = Resolver {
                loc: Locator { text },
                anchor: d.id.clone(),
            };
            let b = Arc::new(resolve_bicategory(d, &r)?);
            names.insert(d.id.clone(), Names::of(&b));
            ws.bicategories.push(Named {
                id: d.id.clone(),
                value: b,
            });
        }
        for d in &doc.functors {
            let r = Resolver {
                loc: Locator { text },
                anchor: d.id.clone(),
            };
            let f = resolve_functor(d, &ws, &names, &r)?;
            ws.functors.push(Named {
                id: d.id.clone(),
                value: Arc::new(f),
            });
        }
        for d in &doc.transformations {
            let r = Resolver {
                loc: Locator { text },
                anchor: d.id.clone(),
            };
            let mode = match &d.mode {
                None => None,
                Some(m) => Some(Mode::parse(m).ok_or_else(|| r.fail(m, format!("unknown mode \"{m}\"")))?),
            };
            let t = resolve_transformation(d, &ws, &names, &r)?;
            ws.transformations.push(TransformationEntry {
                id: d.id.clone(),
                value: Arc::new(t),
                mode,
            });
        }
        for d in &doc.modifications {
            let r = Resolver {
                loc: Locator { text },
                anchor: d.id.clone(),
            };
            let m = resolve_modification(d, &ws, &names, &r)?;
            ws.modifications.push(Named {
                id: d.id.clone(),
                value: m,
            });
        }
        for d in &doc.cleavages {
            let r = Resolver {
                loc: Locator { text },
                anchor: d.id.clone(),
            };
            ws.cleavages.push(resolve_cleavage(d, &ws, &names, &r)?);
        }
        for d in &doc.diagrams {
            let r = Resolver {
                loc: Locator { text },
                anchor: d.id.clone(),
            };
            ws.diagrams.push(resolve_diagram(d, &ws, &names, &r)?);
        }
        Ok(ws)
    }

    pub fn bicategory(&self, id: &str) -> Option<&Arc<Bicategory>> {
        find(&self.bicategories, id)
    }

    pub fn functor(&self, id: &str) -> Option<&Arc<LaxFunctor>> {
        find(&self.functors, id)
    }

    pub fn transformation(&self, id: &str) -> Option<&TransformationEntry> {
        self.transformations.iter().find(|t| t.id == id)
    }

    pub fn cleavage(&self, id: &str) -> Option<&CleavageEntry> {
        self.cleavages.iter().find(|c| c.id == id)
    }

    pub fn diagram(&self, id: &str) -> Option<&Diagram> {
        self.diagrams.iter().find(|d| d.id == id)
    }
}

fn fresh(taken: impl Fn(&str) -> bool, hint: &str) -> String {
    if !taken(hint) {
        return hint.to_string();
    }
    (2..)
        .map(|i| format!("{hint}_{i}"))
        .find(|c| !taken(c))
        .expect("unbounded")
}

/// Collects output entities on top of an optional input workspace. Entities
/// already present keep their ids; new ones are named from the hint.
pub struct Emitter {
    pub ws: Workspace,
}

impl Emitter {
    pub fn new(seed: Option<&Workspace>) -> Emitter {
        Emitter {
            ws: seed.cloned().unwrap_or_default(),
        }
    }

    pub fn bicategory(&mut self, hint: &str, b: &Arc<Bicategory>) -> String {
        if let Some(n) = self.ws.bicategories.iter().find(|n| *n.value == **b) {
            return n.id.clone();
        }
        let id = fresh(|s| self.ws.bicategory(s).is_some(), hint);
        self.ws.bicategories.push(Named {
            id: id.clone(),
            value: b.clone(),
        });
        id
    }

    pub fn functor(&mut self, hint: &str, f: &Arc<LaxFunctor>) -> String {
        self.bicategory(&format!("{hint}.source"), &f.source);
        self.bicategory(&format!("{hint}.target"), &f.target);
        if let Some(n) = self.ws.functors.iter().find(|n| *n.value == **f) {
            return n.id.clone();
        }
        let id = fresh(|s| self.ws.functor(s).is_some(), hint);
        self.ws.functors.push(Named {
            id: id.clone(),
            value: f.clone(),
        });
        id
    }

    pub fn transformation(&mut self, hint: &str, t: &Arc<OplaxTransformation>, mode: Option<Mode>) -> String {
        self.functor(&format!("{hint}.source"), &t.source);
        self.functor(&format!("{hint}.target"), &t.target);
        if let Some(n) = self.ws.transformations.iter().find(|n| *n.value == **t) {
            return n.id.clone();
        }
        let id = fresh(|s| self.ws.transformation(s).is_some(), hint);
        self.ws.transformations.push(TransformationEntry {
            id: id.clone(),
            value: t.clone(),
            mode,
        });
        id
    }

    pub fn modification(&mut self, hint: &str, m: &Modification) -> String {
        self.transformation(&format!("{hint}.source"), &m.source, None);
        self.transformation(&format!("{hint}.target"), &m.target, None);
        let id = fresh(|s| self.ws.modifications.iter().any(|n| n.id == s), hint);
        self.ws.modifications.push(Named {
            id: id.clone(),
            value: m.clone(),
        });
        id
    }

    pub fn cleavage(&mut self, hint: &str, p: &Arc<LaxFunctor>, cl: &Cleavage) -> String {
        self.functor("p", p);
        if let Some(c) = self.ws.cleavages.iter().find(|c| c.value == *cl && *c.functor == **p) {
            return c.id.clone();
        }
        let id = fresh(|s| self.ws.cleavage(s).is_some(), hint);
        self.ws.cleavages.push(CleavageEntry {
            id: id.clone(),
            functor: p.clone(),
            value: cl.clone(),
        });
        id
    }

    pub fn diagram(&mut self, hint: &str, j: &Arc<LaxFunctor>, mode: Mode, cone: Option<Cone>) -> String {
        self.functor(hint, j);
        if let Some(c) = &cone {
            self.transformation(&format!("{hint}.legs"), &c.legs, Some(mode));
        }
        let id = fresh(|s| self.ws.diagram(s).is_some(), hint);
        self.ws.diagrams.push(Diagram {
            id: id.clone(),
            functor: j.clone(),
            mode,
            cone,
        });
        id
    }

    /// Attaches a cone to the diagram `id`.
    pub fn set_cone(&mut self, id: &str, cone: Cone) {
        self.transformation(&format!("{id}.legs"), &cone.legs, Some(cone.mode));
        let d = self
            .ws
            .diagrams
            .iter_mut()
            .find(|d| d.id == id)
            .expect("diagram in the workspace");
        d.mode = cone.mode;
        d.cone = Some(cone);
    }

    pub fn finish(self) -> Document {
        self.ws.to_document()
    }
}

impl Workspace {
    fn bicat_id(&self, b: &Arc<Bicategory>) -> String {
        self.bicategories
            .iter()
            .find(|n| Arc::ptr_eq(&n.value, b) || *n.value == **b)
            .map(|n| n.id.clone())
            .expect("registered bicategory")
    }

    fn functor_id(&self, f: &LaxFunctor) -> String {
        self.functors
            .iter()
            .find(|n| *n.value == *f)
            .map(|n| n.id.clone())
            .expect("registered functor")
    }

    fn transformation_id(&self, t: &OplaxTransformation) -> String {
        self.transformations
            .iter()
            .find(|n| *n.value == *t)
            .map(|n| n.id.clone())
            .expect("registered transformation")
    }

    /// Serializes every entity. Entities and table rows are sorted by id so
    /// output is byte-stable.
    pub fn to_document(&self) -> Document {
        let mut doc = Document::default();
        for n in &self.bicategories {
            doc.bicategories.push(bicategory_doc(&n.id, &n.value));
        }
        for n in &self.functors {
            let f = &n.value;
            let (s, t) = (&*f.source, &*f.target);
            let mut comp: Vec<[String; 3]> = f
                .comp
                .iter()
                .map(|(&(a, b), &c)| [s.one_name(a).into(), s.one_name(b).into(), t.two_name(c).into()])
                .collect();
            comp.sort();
            doc.functors.push(FunctorDoc {
                id: n.id.clone(),
                source: self.bicat_id(&f.source),
                target: self.bicat_id(&f.target),
                variance: f.variance.name().into(),
                strict: f.strict,
                objects: s.obs().map(|x| [s.ob_name(x).into(), t.ob_name(f.ob(x)).into()]).collect(),
                one_cells: s.ones().map(|u| [s.one_name(u).into(), t.one_name(f.one(u)).into()]).collect(),
                two_cells: s.twos().map(|a| [s.two_name(a).into(), t.two_name(f.two(a)).into()]).collect(),
                unit: s.obs().map(|x| [s.ob_name(x).into(), t.two_name(f.unit[x.index()]).into()]).collect(),
                comp,
            });
        }
        for n in &self.transformations {
            let t = &n.value;
            let (a, e) = (t.shape(), t.codomain());
            doc.transformations.push(TransformationDoc {
                id: n.id.clone(),
                source: self.functor_id(&t.source),
                target: self.functor_id(&t.target),
                mode: n.mode.map(|m| m.name().to_string()),
                comp1: a.obs().map(|x| [a.ob_name(x).into(), e.one_name(t.at(x)).into()]).collect(),
                comp2: a.ones().map(|h| [a.one_name(h).into(), e.two_name(t.at1(h)).into()]).collect(),
            });
        }
        for n in &self.modifications {
            let m = &n.value;
            let (a, e) = (m.source.shape(), m.source.codomain());
            doc.modifications.push(ModificationDoc {
                id: n.id.clone(),
                source: self.transformation_id(&m.source),
                target: self.transformation_id(&m.target),
                comp: a.obs().map(|x| [a.ob_name(x).into(), e.two_name(m.at(x)).into()]).collect(),
            });
        }
        for c in &self.cleavages {
            let (e, b) = (&*c.functor.source, &*c.functor.target);
            let cl = &c.value;
            let mut lift1: Vec<[String; 3]> = cl
                .lift1
                .iter()
                .map(|(&(x, f), &h)| [e.ob_name(x).into(), b.one_name(f).into(), e.one_name(h).into()])
                .collect();
            let mut lift_triple: Vec<[String; 6]> = cl
                .lift_triple
                .iter()
                .map(|(&(f, pr), &(h, a))| {
                    [
                        e.one_name(f).into(),
                        e.one_name(pr.g).into(),
                        b.one_name(pr.h).into(),
                        b.two_name(pr.alpha).into(),
                        e.one_name(h).into(),
                        e.two_name(a).into(),
                    ]
                })
                .collect();
            let mut local: Vec<[String; 3]> = cl
                .local
                .iter()
                .map(|(&(k, th), &c)| [e.one_name(k).into(), b.two_name(th).into(), e.two_name(c).into()])
                .collect();
            lift1.sort();
            lift_triple.sort();
            local.sort();
            doc.cleavages.push(CleavageDoc {
                id: c.id.clone(),
                functor: self.functor_id(&c.functor),
                lift1,
                lift_triple,
                local,
            });
        }
        for d in &self.diagrams {
            let e = &*d.functor.target;
            doc.diagrams.push(DiagramDoc {
                id: d.id.clone(),
                functor: self.functor_id(&d.functor),
                mode: d.mode.name().into(),
                apex: d.cone.as_ref().map(|c| e.ob_name(c.apex).to_string()),
                legs: d.cone.as_ref().map(|c| self.transformation_id(&c.legs)),
            });
        }
        doc.bicategories.sort_by(|a, b| a.id.cmp(&b.id));
        doc.functors.sort_by(|a, b| a.id.cmp(&b.id));
        doc.transformations.sort_by(|a, b| a.id.cmp(&b.id));
        doc.modifications.sort_by(|a, b| a.id.cmp(&b.id));
        doc.cleavages.sort_by(|a, b| a.id.cmp(&b.id));
        doc.diagrams.sort_by(|a, b| a.id.cmp(&b.id));
        doc
    }
}

pub fn to_json(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn bicategory_doc(id: &str, b: &Bicategory) -> BicategoryDoc {
    let o = |x: Ob| b.ob_name(x).to_string();
    let l = |f: One| b.one_name(f).to_string();
    let t = |a: Two| b.two_name(a).to_string();
    let sorted = |mut v: Vec<[String; 3]>| {
        v.sort();
        v
    };
    let mut assoc: Vec<[String; 4]> = b
        .assoc_entries()
        .into_iter()
        .map(|(f, g, h, a)| [l(f), l(g), l(h), t(a)])
        .collect();
    assoc.sort();
    BicategoryDoc {
        id: id.to_string(),
        objects: b.obs().map(o).collect(),
        one_cells: b
            .ones()
            .map(|f| CellDoc {
                id: l(f),
                src: o(b.src1(f)),
                tgt: o(b.tgt1(f)),
            })
            .collect(),
        two_cells: b
            .twos()
            .map(|a| CellDoc {
                id: t(a),
                src: l(b.src2(a)),
                tgt: l(b.tgt2(a)),
            })
            .collect(),
        id1: b.obs().map(|x| [o(x), l(b.id1(x))]).collect(),
        id2: b.ones().map(|f| [l(f), t(b.id2(f))]).collect(),
        vcomp: sorted(b.vcomp_entries().into_iter().map(|(x, y, z)| [t(x), t(y), t(z)]).collect()),
        hcomp1: sorted(b.hcomp1_entries().into_iter().map(|(x, y, z)| [l(x), l(y), l(z)]).collect()),
        hcomp2: sorted(b.hcomp2_entries().into_iter().map(|(x, y, z)| [t(x), t(y), t(z)]).collect()),
        assoc,
        lunit: b.ones().map(|f| [l(f), t(b.lunit(f))]).collect(),
        runit: b.ones().map(|f| [l(f), t(b.runit(f))]).collect(),
    }
}

fn resolve_bicategory(d: &BicategoryDoc, r: &Resolver) -> Result<Bicategory, DocError> {
    let mut bb = BicategoryBuilder::new();
    let mut ob = HashMap::new();
    for name in &d.objects {
        ob.insert(name.clone(), bb.object(name.clone()));
    }
    let mut one = HashMap::new();
    for c in &d.one_cells {
        let (s, t) = (r.get(&ob, &c.src, "0-cell")?, r.get(&ob, &c.tgt, "0-cell")?);
        one.insert(c.id.clone(), bb.one(c.id.clone(), s, t));
    }
    let mut two = HashMap::new();
    for c in &d.two_cells {
        let (s, t) = (r.get(&one, &c.src, "1-cell")?, r.get(&one, &c.tgt, "1-cell")?);
        two.insert(c.id.clone(), bb.two(c.id.clone(), s, t));
    }
    for [x, f] in &d.id1 {
        bb.set_id1(r.get(&ob, x, "0-cell")?, r.get(&one, f, "1-cell")?);
    }
    for [f, a] in &d.id2 {
        bb.set_id2(r.get(&one, f, "1-cell")?, r.get(&two, a, "2-cell")?);
    }
    for [a, b, c] in &d.vcomp {
        bb.set_vcomp(r.get(&two, a, "2-cell")?, r.get(&two, b, "2-cell")?, r.get(&two, c, "2-cell")?);
    }
    for [f, g, h] in &d.hcomp1 {
        bb.set_hcomp1(r.get(&one, f, "1-cell")?, r.get(&one, g, "1-cell")?, r.get(&one, h, "1-cell")?);
    }
    for [a, b, c] in &d.hcomp2 {
        bb.set_hcomp2(r.get(&two, a, "2-cell")?, r.get(&two, b, "2-cell")?, r.get(&two, c, "2-cell")?);
    }
    for [f, g, h, a] in &d.assoc {
        bb.set_assoc(
            r.get(&one, f, "1-cell")?,
            r.get(&one, g, "1-cell")?,
            r.get(&one, h, "1-cell")?,
            r.get(&two, a, "2-cell")?,
        );
    }
    for [f, a] in &d.lunit {
        bb.set_lunit(r.get(&one, f, "1-cell")?, r.get(&two, a, "2-cell")?);
    }
    for [f, a] in &d.runit {
        bb.set_runit(r.get(&one, f, "1-cell")?, r.get(&two, a, "2-cell")?);
    }
    bb.build().map_err(|e| r.fail(&d.id, e.to_string()))
}

fn bicat_ref<'a>(
    ws: &'a Workspace,
    names: &'a HashMap<String, Names>,
    id: &str,
    r: &Resolver,
) -> Result<(&'a Arc<Bicategory>, &'a Names), DocError> {
    match (ws.bicategory(id), names.get(id)) {
        (Some(b), Some(n)) => Ok((b, n)),
        _ => Err(r.fail(id, format!("{} refers to an undeclared bicategory \"{id}\"", r.anchor))),
    }
}

/// Fills a per-cell table from `[cell, image]` rows, requiring totality.
fn total<S: Copy, T: Copy>(
    rows: &[[String; 2]],
    src: &HashMap<String, S>,
    tgt: &HashMap<String, T>,
    n: usize,
    index: impl Fn(S) -> usize,
    what: &str,
    r: &Resolver,
) -> Result<Vec<T>, DocError> {
    let mut out: Vec<Option<T>> = vec![None; n];
    for [x, y] in rows {
        let i = index(r.get(src, x, what)?);
        out[i] = Some(r.get(tgt, y, what)?);
    }
    let mut names: Vec<(&String, &S)> = src.iter().collect();
    names.sort_by_key(|(_, &s)| index(s));
    out.into_iter()
        .zip(names)
        .map(|(v, (name, _))| v.ok_or_else(|| r.fail(&r.anchor, format!("{} has no entry for {what} \"{name}\"", r.anchor))))
        .collect()
}

fn resolve_functor(
    d: &FunctorDoc,
    ws: &Workspace,
    names: &HashMap<String, Names>,
    r: &Resolver,
) -> Result<LaxFunctor, DocError> {
    let (s, sn) = bicat_ref(ws, names, &d.source, r)?;
    let (t, tn) = bicat_ref(ws, names, &d.target, r)?;
    let variance = Variance::parse(&d.variance)
        .ok_or_else(|| r.fail(&d.variance, format!("unknown variance \"{}\"", d.variance)))?;
    let ob = total(&d.objects, &sn.ob, &tn.ob, s.ob_count(), |x| x.index(), "0-cell", r)?;
    let map1 = total(&d.one_cells, &sn.one, &tn.one, s.one_count(), |x| x.index(), "1-cell", r)?;
    let map2 = total(&d.two_cells, &sn.two, &tn.two, s.two_count(), |x| x.index(), "2-cell", r)?;
    let unit = total(&d.unit, &sn.ob, &tn.two, s.ob_count(), |x| x.index(), "0-cell", r)?;
    let mut comp = HashMap::new();
    for [f, g, c] in &d.comp {
        comp.insert(
            (r.get(&sn.one, f, "1-cell")?, r.get(&sn.one, g, "1-cell")?),
            r.get(&tn.two, c, "2-cell")?,
        );
    }
    let f = LaxFunctor {
        source: s.clone(),
        target: t.clone(),
        variance,
        strict: d.strict,
        ob,
        map1,
        map2,
        unit,
        comp,
    };
    f.check_structure().map_err(|e| r.fail(&d.id, e.to_string()))?;
    Ok(f)
}

fn functor_ref<'a>(ws: &'a Workspace, id: &str, r: &Resolver) -> Result<&'a Arc<LaxFunctor>, DocError> {
    ws.functor(id)
        .ok_or_else(|| r.fail(id, format!("{} refers to an undeclared functor \"{id}\"", r.anchor)))
}

fn transformation_ref<'a>(ws: &'a Workspace, id: &str, r: &Resolver) -> Result<&'a Arc<OplaxTransformation>, DocError> {
    ws.transformation(id)
        .map(|t| &t.value)
        .ok_or_else(|| r.fail(id, format!("{} refers to an undeclared transformation \"{id}\"", r.anchor)))
}

fn names_of<'a>(ws: &Workspace, names: &'a HashMap<String, Names>, b: &Arc<Bicategory>) -> &'a Names {
    &names[&ws.bicat_id(b)]
}

fn resolve_transformation(
    d: &TransformationDoc,
    ws: &Workspace,
    names: &HashMap<String, Names>,
    r: &Resolver,
) -> Result<OplaxTransformation, DocError> {
    let f = functor_ref(ws, &d.source, r)?;
    let g = functor_ref(ws, &d.target, r)?;
    let (an, en) = (names_of(ws, names, &f.source), names_of(ws, names, &f.target));
    let a = &f.source;
    let comp1 = total(&d.comp1, &an.ob, &en.one, a.ob_count(), |x| x.index(), "0-cell", r)?;
    let comp2 = total(&d.comp2, &an.one, &en.two, a.one_count(), |x| x.index(), "1-cell", r)?;
    let t = OplaxTransformation {
        source: f.clone(),
        target: g.clone(),
        comp1,
        comp2,
    };
    t.check_structure().map_err(|e| r.fail(&d.id, e.to_string()))?;
    Ok(t)
}

fn resolve_modification(
    d: &ModificationDoc,
    ws: &Workspace,
    names: &HashMap<String, Names>,
    r: &Resolver,
) -> Result<Modification, DocError> {
    let s = transformation_ref(ws, &d.source, r)?;
    let t = transformation_ref(ws, &d.target, r)?;
    let (an, en) = (names_of(ws, names, s.shape()), names_of(ws, names, s.codomain()));
    let comp = total(&d.comp, &an.ob, &en.two, s.shape().ob_count(), |x| x.index(), "0-cell", r)?;
    Ok(Modification {
        source: s.clone(),
        target: t.clone(),
        comp,
    })
}

fn resolve_cleavage(
    d: &CleavageDoc,
    ws: &Workspace,
    names: &HashMap<String, Names>,
    r: &Resolver,
) -> Result<CleavageEntry, DocError> {
    let p = functor_ref(ws, &d.functor, r)?;
    let (en, bn) = (names_of(ws, names, &p.source), names_of(ws, names, &p.target));
    let mut cl = Cleavage::default();
    for [x, f, h] in &d.lift1 {
        cl.lift1.insert(
            (r.get(&en.ob, x, "0-cell")?, r.get(&bn.one, f, "1-cell")?),
            r.get(&en.one, h, "1-cell")?,
        );
    }
    for [f, g, h, a, hh, ah] in &d.lift_triple {
        let prob = LiftProblem {
            g: r.get(&en.one, g, "1-cell")?,
            h: r.get(&bn.one, h, "1-cell")?,
            alpha: r.get(&bn.two, a, "2-cell")?,
        };
        cl.lift_triple.insert(
            (r.get(&en.one, f, "1-cell")?, prob),
            (r.get(&en.one, hh, "1-cell")?, r.get(&en.two, ah, "2-cell")?),
        );
    }
    for [k, th, c] in &d.local {
        cl.local.insert(
            (r.get(&en.one, k, "1-cell")?, r.get(&bn.two, th, "2-cell")?),
            r.get(&en.two, c, "2-cell")?,
        );
    }
    Ok(CleavageEntry {
        id: d.id.clone(),
        functor: p.clone(),
        value: cl,
    })
}

fn resolve_diagram(
    d: &DiagramDoc,
    ws: &Workspace,
    names: &HashMap<String, Names>,
    r: &Resolver,
) -> Result<Diagram, DocError> {
    let j = functor_ref(ws, &d.functor, r)?;
    let mode = Mode::parse(&d.mode).ok_or_else(|| r.fail(&d.mode, format!("unknown mode \"{}\"", d.mode)))?;
    let cone = match (&d.apex, &d.legs) {
        (None, None) => None,
        (Some(apex), Some(legs)) => {
            let en = names_of(ws, names, &j.target);
            let x = r.get(&en.ob, apex, "0-cell")?;
            let legs = transformation_ref(ws, legs, r)?;
            Some(Cone {
                apex: x,
                legs: legs.clone(),
                mode,
            })
        }
        _ => return Err(r.fail(&d.id, "a cone needs both an apex and legs".into())),
    };
    Ok(Diagram {
        id: d.id.clone(),
        functor: j.clone(),
        mode,
        cone,
    })
}
