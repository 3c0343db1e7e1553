use std::path::PathBuf;
use std::sync::Arc;

use bicatfib::expfib::{canonical_lift, is_cartesian_transformation};
use bicatfib::groth::{arrow_bicategory, is_2rari_universal, oplax_comma, s_l};
use bicatfib::limits::{find_limit, is_limit, Cone, LimitLifter};
use bicatfib::{
    compose_functors, constant_functor, enumerate_strict_functors, fixtures, tables_equal,
    validate_bicategory_with, validate_cleavage, validate_functor, validate_modification,
    validate_transformation, Bicategory, Cleavage, FibrationContext, LaxFunctor, LiftProblem,
    Mode, One, SeedOrder, SizeBounds, Variance,
};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::document::{parse_workspace, to_json, Emitter, Workspace};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "bicatfib", version, about = "Checks and constructions on finite bicategories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Args)]
pub struct Opts {
    /// Input document; standard input when absent.
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    /// Where to write the emitted document or report.
    #[arg(long, global = true)]
    pub emit: Option<PathBuf>,
    #[arg(long, global = true, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    #[arg(long = "seed-order", global = true, value_parser = parse_seed_order, default_value = "asc")]
    pub seed_order: SeedOrder,
    /// Functor ids quantified over by direct universal-property checks.
    #[arg(long, global = true, value_delimiter = ',')]
    pub pool: Vec<String>,
    #[arg(long, global = true)]
    pub functor: Option<String>,
    #[arg(long, global = true)]
    pub cleavage: Option<String>,
    #[arg(long, global = true)]
    pub cell: Option<String>,
    #[arg(long, global = true)]
    pub object: Option<String>,
    #[arg(long, global = true)]
    pub transformation: Option<String>,
    /// Target functor `G` of a lift.
    #[arg(long, global = true)]
    pub target: Option<String>,
    #[arg(long, global = true)]
    pub section: Option<String>,
    #[arg(long, global = true)]
    pub diagram: Option<String>,
    #[arg(long, global = true)]
    pub bicategory: Option<String>,
    /// A lifting problem `g h alpha`.
    #[arg(long, global = true, num_args = 3, value_names = ["G", "H", "ALPHA"])]
    pub problem: Vec<String>,
    #[arg(long, global = true)]
    pub along: Option<String>,
    /// Adds every strict diagram of this shape to a fixture: terminal,
    /// product or pullback.
    #[arg(long, global = true)]
    pub shape: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validates every entity of the document.
    Validate,
    #[command(subcommand)]
    Check(CheckCommand),
    /// The oplax comma bicategory of a functor with its projections.
    Comma,
    /// The arrow bicategory with its projections.
    Arrow,
    /// The induced functor on arrows and its section from a cleavage.
    Section,
    #[command(subcommand)]
    Lift(LiftCommand),
    #[command(subcommand)]
    Limit(LimitCommand),
    /// Reindexes a diagram lying over a base 0-cell along a base 1-cell.
    Reindex,
    /// Writes a built-in fixture document.
    Fixture { name: String },
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    #[command(name = "cartesian-1cell")]
    Cartesian1Cell,
    #[command(name = "cartesian-2cell")]
    Cartesian2Cell,
    LocallyFibred,
    Fibration,
    #[command(name = "2rari")]
    TwoRari,
    CartesianTransformation,
    /// Whether `--section` is a pseudofunctor splitting `--functor` exactly.
    Section,
}

#[derive(Debug, Subcommand)]
pub enum LiftCommand {
    Triple,
    Transformation,
    Cone,
}

#[derive(Debug, Subcommand)]
pub enum LimitCommand {
    Find,
    Check,
    Lift,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    Mode::parse(s).ok_or_else(|| format!("expected pseudo or oplax, got {s}"))
}

fn parse_seed_order(s: &str) -> Result<SeedOrder, String> {
    SeedOrder::parse(s).ok_or_else(|| format!("expected asc or desc, got {s}"))
}

/// What a command produced: whether the property holds, a summary, and an
/// optional document.
pub struct Outcome {
    pub holds: bool,
    pub summary: Value,
    pub document: Option<String>,
}

impl Outcome {
    fn report(property: &str, holds: bool, mut extra: Value) -> Outcome {
        extra["property"] = json!(property);
        extra["holds"] = json!(holds);
        Outcome {
            holds,
            summary: extra,
            document: None,
        }
    }

    fn fails(property: &str, counterexample: impl Into<String>) -> Outcome {
        Outcome::report(property, false, json!({ "counterexample": counterexample.into() }))
    }

    fn with(mut self, doc: Emitter) -> Outcome {
        self.document = Some(to_json(&doc.finish()));
        self
    }
}

type Res<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

struct Ctx {
    opts: Opts,
    ws: Workspace,
    bounds: SizeBounds,
}

impl Ctx {
    fn functor(&self) -> Res<Arc<LaxFunctor>> {
        self.functor_named(self.opts.functor.as_deref(), "--functor")
    }

    fn functor_named(&self, id: Option<&str>, flag: &str) -> Res<Arc<LaxFunctor>> {
        match id {
            Some(id) => self
                .ws
                .functor(id)
                .cloned()
                .ok_or_else(|| usage(format!("no functor \"{id}\""))),
            // the first functor that is not a diagram
            None => self
                .ws
                .functors
                .iter()
                .find(|n| !self.ws.diagrams.iter().any(|d| Arc::ptr_eq(&d.functor, &n.value) || *d.functor == *n.value))
                .or(self.ws.functors.first())
                .map(|n| n.value.clone())
                .ok_or_else(|| usage(format!("the document has no functor; pass {flag}"))),
        }
    }

    fn cleavage(&self, p: &Arc<LaxFunctor>) -> Res<Cleavage> {
        if let Some(id) = &self.opts.cleavage {
            let c = self
                .ws
                .cleavage(id)
                .ok_or_else(|| usage(format!("no cleavage \"{id}\"")))?;
            if *c.functor != **p {
                return Err(usage(format!("cleavage \"{id}\" belongs to another functor")));
            }
            return Ok(c.value.clone());
        }
        if let Some(c) = self.ws.cleavages.iter().find(|c| *c.functor == **p) {
            return Ok(c.value.clone());
        }
        Ok(FibrationContext::new(p)?.synthesize(self.opts.seed_order)?)
    }

    fn require<'a>(&self, v: &'a Option<String>, flag: &str) -> Res<&'a str> {
        v.as_deref().ok_or_else(|| usage(format!("{flag} is required")))
    }

    fn diagram(&self) -> Res<&crate::document::Diagram> {
        let id = self.require(&self.opts.diagram, "--diagram")?;
        self.ws.diagram(id).ok_or_else(|| usage(format!("no diagram \"{id}\"")))
    }

    fn emitter(&self) -> Emitter {
        Emitter::new(Some(&self.ws))
    }
}

fn one(b: &Bicategory, name: &str) -> Res<One> {
    b.find_one(name).ok_or_else(|| usage(format!("no 1-cell \"{name}\"")))
}

fn names(b: &Bicategory, cells: &[One]) -> Vec<String> {
    cells.iter().map(|&c| b.one_name(c).to_string()).collect()
}

pub fn run(cli: Cli) -> Res<Outcome> {
    if let Command::Fixture { name } = &cli.command {
        return fixture(name, &cli.opts);
    }
    let text = match &cli.opts.input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.clone(), source: e })?,
        None => std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Io { path: "-".into(), source: e })?,
    };
    let ws = parse_workspace(&text)?;
    let cx = Ctx {
        opts: cli.opts,
        ws,
        bounds: SizeBounds::default(),
    };
    match cli.command {
        Command::Validate => validate(&cx),
        Command::Check(c) => check(&cx, c),
        Command::Comma => comma(&cx),
        Command::Arrow => arrow(&cx),
        Command::Section => section(&cx),
        Command::Lift(c) => lift(&cx, c),
        Command::Limit(c) => limit(&cx, c),
        Command::Reindex => reindex(&cx),
        Command::Fixture { .. } => unreachable!(),
    }
}

fn validate(cx: &Ctx) -> Res<Outcome> {
    let ws = &cx.ws;
    let mut failures = Vec::new();
    let mut note = |kind: &str, id: &str, r: bicatfib::CoherenceReport| {
        if !r.ok() {
            failures.push(json!({ "kind": kind, "id": id, "violations": r.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>() }));
        }
    };
    for n in &ws.bicategories {
        note("bicategory", &n.id, validate_bicategory_with(&n.value, &cx.bounds)?);
    }
    for n in &ws.functors {
        note("functor", &n.id, validate_functor(&n.value)?);
    }
    for t in &ws.transformations {
        let mode = t.mode.or(cx.opts.mode).unwrap_or(Mode::Oplax);
        note("transformation", &t.id, validate_transformation(&t.value, mode)?);
    }
    for n in &ws.modifications {
        note("modification", &n.id, validate_modification(&n.value)?);
    }
    for c in &ws.cleavages {
        note("cleavage", &c.id, validate_cleavage(&c.functor, &c.value)?);
    }
    for d in &ws.diagrams {
        if let Some(c) = &d.cone {
            if let Err(e) = Cone::new(c.apex, c.legs.clone(), d.mode) {
                failures.push(json!({ "kind": "diagram", "id": d.id, "violations": [e.to_string()] }));
            }
        }
    }
    let count = ws.bicategories.len()
        + ws.functors.len()
        + ws.transformations.len()
        + ws.modifications.len()
        + ws.cleavages.len()
        + ws.diagrams.len();
    let holds = failures.is_empty();
    let mut extra = json!({ "entities": count });
    if !holds {
        extra["counterexample"] = failures[0].clone();
        extra["failures"] = json!(failures);
    }
    Ok(Outcome::report("valid", holds, extra))
}

fn check(cx: &Ctx, c: CheckCommand) -> Res<Outcome> {
    let p = cx.functor()?;
    let (e, b) = (&*p.source, &*p.target);
    match c {
        CheckCommand::Cartesian1Cell => {
            let name = cx.require(&cx.opts.cell, "--cell")?;
            let f = one(e, name)?;
            let v = FibrationContext::new(&p)?.cartesian_1cell(f)?;
            Ok(verdict("cartesian-1cell", v, json!({ "cell": name })))
        }
        CheckCommand::Cartesian2Cell => {
            let name = cx.require(&cx.opts.cell, "--cell")?;
            let a = e.find_two(name).ok_or_else(|| usage(format!("no 2-cell \"{name}\"")))?;
            let holds = FibrationContext::new(&p)?.is_cartesian_2cell(a);
            let extra = json!({ "cell": name });
            Ok(if holds {
                Outcome::report("cartesian-2cell", true, extra)
            } else {
                Outcome::fails("cartesian-2cell", format!("{name} is not Cartesian"))
            })
        }
        CheckCommand::LocallyFibred => {
            let v = FibrationContext::new(&p)?.locally_fibred();
            Ok(verdict("locally-fibred", v, json!({})))
        }
        CheckCommand::Fibration => {
            let ctx = FibrationContext::new(&p)?;
            let report = ctx.fibration()?;
            if let Some(f) = report.failure {
                return Ok(Outcome::fails("fibration", f.to_string()));
            }
            let cl = cx.cleavage(&p)?;
            let r = ctx.validate_cleavage(&cl)?;
            if !r.ok() {
                return Ok(Outcome::fails("fibration", format!("the cleavage is invalid: {r}")));
            }
            let mut out = cx.emitter();
            out.bicategory("E", &p.source);
            out.bicategory("B", &p.target);
            out.cleavage("cleavage", &p, &cl);
            let extra = json!({ "lifts": report.lifts.len() });
            Ok(Outcome::report("fibration", true, extra).with(out))
        }
        CheckCommand::TwoRari => {
            let obs: Vec<_> = match &cx.opts.object {
                Some(name) => vec![e.find_ob(name).ok_or_else(|| usage(format!("no 0-cell \"{name}\"")))?],
                None => e.obs().collect(),
            };
            let mut universal = Vec::new();
            let mut not = Vec::new();
            for x in obs {
                if is_2rari_universal(&p, x)? {
                    universal.push(e.ob_name(x).to_string());
                } else {
                    not.push(e.ob_name(x).to_string());
                }
            }
            let mut extra = json!({ "universal": universal });
            if let Some(x) = not.first() {
                extra["counterexample"] = json!(format!("{x} is not 2-rari-universal"));
            }
            Ok(Outcome::report("2rari", not.is_empty(), extra))
        }
        CheckCommand::CartesianTransformation => {
            let id = cx.require(&cx.opts.transformation, "--transformation")?;
            let t = cx.ws.transformation(id).ok_or_else(|| usage(format!("no transformation \"{id}\"")))?;
            let pool = cx
                .opts
                .pool
                .iter()
                .map(|id| cx.functor_named(Some(id), "--pool"))
                .collect::<Res<Vec<_>>>()?;
            let mode = t.mode.or(cx.opts.mode).unwrap_or(Mode::Oplax);
            let v = is_cartesian_transformation(&p, &t.value, &pool, mode, &cx.bounds)?;
            let mut extra = json!({
                "transformation": id,
                "pointwise": v.pointwise.holds,
                "direct": v.direct.as_ref().map(|d| d.holds),
                "agree": v.agree(),
            });
            let holds = v.pointwise.holds && v.direct.as_ref().is_none_or(|d| d.holds);
            let why = v.pointwise.counterexample.or(v.direct.and_then(|d| d.counterexample));
            if let Some(w) = why {
                extra["counterexample"] = json!(w);
            }
            Ok(Outcome::report("cartesian-transformation", holds, extra))
        }
        CheckCommand::Section => {
            let s = cx.functor_named(Some(cx.require(&cx.opts.section, "--section")?), "--section")?;
            let r = validate_functor(&s)?;
            if !r.ok() {
                return Ok(Outcome::fails("section", format!("not a valid functor: {r}")));
            }
            if s.variance != Variance::Pseudo {
                return Ok(Outcome::fails("section", "not a pseudofunctor"));
            }
            let back = compose_functors(&s, &p)?;
            if !tables_equal(&back, &LaxFunctor::identity(p.target.clone())) {
                return Ok(Outcome::fails("section", format!("the composite with the functor is not the identity on {}", b.ob_count())));
            }
            Ok(Outcome::report("section", true, json!({})))
        }
    }
}

fn verdict(property: &str, v: bicatfib::Verdict, mut extra: Value) -> Outcome {
    if let Some(w) = v.counterexample {
        extra["counterexample"] = json!(w);
    }
    Outcome::report(property, v.holds, extra)
}

fn comma(cx: &Ctx) -> Res<Outcome> {
    let p = cx.functor()?;
    let c = oplax_comma(p.clone(), &cx.bounds)?;
    let d0 = bicatfib::is_fibration(&c.d0)?;
    let mut out = cx.emitter();
    out.bicategory("comma", &c.bicat);
    out.functor("d0", &c.d0);
    out.functor("d1", &c.d1);
    let extra = json!({
        "objects": c.bicat.ob_count(),
        "one_cells": c.bicat.one_count(),
        "two_cells": c.bicat.two_count(),
        "d0_fibration": d0,
    });
    Ok(Outcome::report("comma", true, extra).with(out))
}

fn arrow(cx: &Ctx) -> Res<Outcome> {
    let e = match &cx.opts.bicategory {
        Some(id) => cx.ws.bicategory(id).cloned().ok_or_else(|| usage(format!("no bicategory \"{id}\"")))?,
        None => cx
            .ws
            .bicategories
            .first()
            .map(|n| n.value.clone())
            .ok_or_else(|| usage("the document has no bicategory"))?,
    };
    let c = arrow_bicategory(e, &cx.bounds)?;
    let mut out = cx.emitter();
    out.bicategory("arrows", &c.bicat);
    out.functor("d0", &c.d0);
    out.functor("d1", &c.d1);
    let extra = json!({ "objects": c.bicat.ob_count(), "one_cells": c.bicat.one_count() });
    Ok(Outcome::report("arrow", true, extra).with(out))
}

fn section(cx: &Ctx) -> Res<Outcome> {
    let p = cx.functor()?;
    let cl = cx.cleavage(&p)?;
    let sl = s_l(&p, &cl, &cx.bounds)?;
    let q = &sl.induced.functor;
    let r = validate_functor(&sl.section)?;
    let splits = tables_equal(
        &compose_functors(&sl.section, q)?,
        &LaxFunctor::identity(sl.induced.comma.bicat.clone()),
    );
    let mut out = cx.emitter();
    out.cleavage("cleavage", &p, &cl);
    out.bicategory("arrows", &sl.induced.arrows.bicat);
    out.bicategory("comma", &sl.induced.comma.bicat);
    out.functor("p_L", q);
    out.functor("s_L", &sl.section);
    let holds = r.ok() && splits;
    let mut extra = json!({ "splits": splits });
    if !r.ok() {
        extra["counterexample"] = json!(r.to_string());
    }
    Ok(Outcome::report("section", holds, extra).with(out))
}

fn lift(cx: &Ctx, c: LiftCommand) -> Res<Outcome> {
    let p = cx.functor()?;
    let cl = cx.cleavage(&p)?;
    let (e, b) = (&*p.source, &*p.target);
    match c {
        LiftCommand::Triple => {
            let f = one(e, cx.require(&cx.opts.cell, "--cell")?)?;
            let [g, h, alpha] = cx.opts.problem.as_slice() else {
                return Err(usage("--problem takes g h alpha"));
            };
            let prob = LiftProblem {
                g: one(e, g)?,
                h: one(b, h)?,
                alpha: b.find_two(alpha).ok_or_else(|| usage(format!("no 2-cell \"{alpha}\"")))?,
            };
            let ctx = FibrationContext::new(&p)?;
            let l = if b.is_invertible(prob.alpha) {
                ctx.lift_strict(&cl, f, &prob)?
            } else {
                ctx.lift_noninvertible(&cl, f, &prob)?
            };
            let holds = ctx.lift_equation(f, &prob, &l)?;
            let extra = json!({
                "h_hat": e.one_name(l.h_hat),
                "alpha_hat": e.two_name(l.alpha_hat),
                "beta_hat": b.two_name(l.beta_hat),
            });
            Ok(Outcome::report("lift", holds, extra))
        }
        LiftCommand::Transformation => {
            let id = cx.require(&cx.opts.transformation, "--transformation")?;
            let t = cx.ws.transformation(id).ok_or_else(|| usage(format!("no transformation \"{id}\"")))?;
            let g = cx.functor_named(Some(cx.require(&cx.opts.target, "--target")?), "--target")?;
            let mode = t.mode.or(cx.opts.mode).unwrap_or(Mode::Oplax);
            let l = canonical_lift(&p, &cl, &t.value, &g, mode, &cx.bounds)?;
            let mut out = cx.emitter();
            out.cleavage("cleavage", &p, &cl);
            out.functor("F_bar", &l.f_bar);
            out.transformation("tau_bar", &l.tau_bar, Some(mode));
            Ok(lift_outcome(l.report).with(out))
        }
        LiftCommand::Cone => {
            let d = cx.diagram()?;
            let jp = Arc::new(compose_functors(&d.functor, &p)?);
            let Some((base, _)) = find_limit(&jp, d.mode, &cx.bounds)? else {
                return Ok(Outcome::fails("lift", "the projected diagram has no limit in the base"));
            };
            let l = canonical_lift(&p, &cl, &base.legs, &d.functor, d.mode, &cx.bounds)?;
            let mut out = cx.emitter();
            out.cleavage("cleavage", &p, &cl);
            out.diagram("base", &jp, d.mode, Some(base));
            out.functor("F_bar", &l.f_bar);
            out.transformation("tau_bar", &l.tau_bar, Some(d.mode));
            Ok(lift_outcome(l.report).with(out))
        }
    }
}

fn lift_outcome(r: bicatfib::CoherenceReport) -> Outcome {
    if r.ok() {
        Outcome::report("lift", true, json!({}))
    } else {
        Outcome::fails("lift", r.to_string())
    }
}

fn limit(cx: &Ctx, c: LimitCommand) -> Res<Outcome> {
    let d = cx.diagram()?;
    let e = &*d.functor.target;
    match c {
        LimitCommand::Find => match find_limit(&d.functor, d.mode, &cx.bounds)? {
            None => Ok(Outcome::fails("limit", format!("{} has no {} limit", d.id, d.mode.name()))),
            Some((cone, _)) => {
                let mut out = cx.emitter();
                let extra = json!({ "apex": e.ob_name(cone.apex) });
                out.set_cone(&d.id, cone);
                Ok(Outcome::report("limit", true, extra).with(out))
            }
        },
        LimitCommand::Check => {
            let Some(c) = &d.cone else {
                return Err(usage(format!("diagram \"{}\" has no cone", d.id)));
            };
            let cone = Cone::new(c.apex, c.legs.clone(), d.mode)?;
            let (holds, cert) = is_limit(&d.functor, &cone, &cx.bounds)?;
            let mut extra = json!({ "apex": e.ob_name(cone.apex) });
            if let Some(x) = cert.counterexample() {
                extra["counterexample"] =
                    json!(format!("the comparison at {} is not an equivalence", e.ob_name(x)));
            }
            Ok(Outcome::report("limit", holds, extra))
        }
        LimitCommand::Lift => {
            let p = cx.functor()?;
            let cl = cx.cleavage(&p)?;
            let lifter = LimitLifter::new(&p, &cl, &cx.bounds)?;
            let l = lifter.lift_limit(&d.functor, d.mode, None, None)?;
            let b = &*p.target;
            let extra = json!({
                "apex": e.ob_name(l.cone.apex),
                "base_apex": b.ob_name(l.base.apex),
                "preserved_along": names(b, &l.preserved_along),
            });
            let mut out = cx.emitter();
            out.cleavage("cleavage", &p, &cl);
            out.set_cone(&d.id, l.cone.clone());
            Ok(Outcome::report("limit", l.certificate.holds(), extra).with(out))
        }
    }
}

fn reindex(cx: &Ctx) -> Res<Outcome> {
    let p = cx.functor()?;
    let cl = cx.cleavage(&p)?;
    let d = cx.diagram()?;
    let b = &*p.target;
    let f = one(b, cx.require(&cx.opts.along, "--along")?)?;
    let lifter = LimitLifter::new(&p, &cl, &cx.bounds)?;
    let target_fiber = lifter.fiber(b.tgt1(f))?;
    let j = Arc::new(target_fiber.restrict(&d.functor)?);
    let r = lifter.reindex_diagram(&target_fiber, &j, f)?;
    let mut out = cx.emitter();
    out.cleavage("cleavage", &p, &cl);
    out.bicategory("fiber", &r.fiber.bicat);
    out.transformation("tau_bar", &r.tau_bar, Some(Mode::Pseudo));
    let mut extra = json!({});
    let mut holds = r.report.ok();
    if !holds {
        extra["counterexample"] = json!(r.report.to_string());
    }
    match &d.cone {
        None => {
            out.diagram("reindexed", &r.f_bar_fiber, d.mode, None);
        }
        Some(c) => {
            let apex = target_fiber
                .ob_of(c.apex)
                .ok_or_else(|| usage("the cone's apex is not in the fiber"))?;
            let delta = Arc::new(constant_functor(j.source.clone(), target_fiber.bicat.clone(), apex)?);
            let legs = target_fiber.restrict_transformation(&c.legs, delta, j.clone())?;
            let cone = Cone::new(apex, Arc::new(legs), d.mode)?;
            let (preserved, _) = lifter.preserves_limit(f, &target_fiber, &j, &cone)?;
            let (moved, _) = lifter.reindex_cone(&target_fiber, &r, &cone)?;
            out.diagram("reindexed", &r.f_bar_fiber, d.mode, Some(moved));
            extra["preserved"] = json!(preserved);
            if !preserved {
                holds = false;
                extra["counterexample"] = json!(format!("reindexing along {} does not preserve the limit", b.one_name(f)));
            }
        }
    }
    Ok(Outcome::report("reindex", holds, extra).with(out))
}

/// The built-in fixtures by name, with a cleavage when the functor is a
/// fibration.
fn fixture(name: &str, opts: &Opts) -> Res<Outcome> {
    let mut out = Emitter::new(None);
    let functor = match name {
        "terminal" => None,
        "ld-square" => None,
        "two-cell" => None,
        "cod" => Some(fixtures::cod()),
        "proj" => Some(fixtures::proj()),
        "proj2" => Some(fixtures::proj2()),
        "proj-two-cell" => Some(fixtures::proj_two_cell()),
        "nonpres" => Some(fixtures::nonpreserving()),
        "cod-cospan" => Some(fixtures::codomain_fibration(&fixtures::cospan())?),
        "identity-square" => Some(fixtures::identity_fibration(fixtures::ld(&fixtures::square_poset()))),
        _ => return Err(usage(format!("unknown fixture \"{name}\""))),
    };
    let e = match functor {
        None => {
            let (_, b) = fixtures::validated_bicategories()
                .into_iter()
                .find(|(n, _)| *n == name)
                .expect("named fixture");
            out.bicategory(name, &b);
            b
        }
        Some(p) => {
            let p = Arc::new(p);
            out.bicategory("E", &p.source);
            out.bicategory("B", &p.target);
            out.functor("p", &p);
            let ctx = FibrationContext::new(&p)?;
            if ctx.fibration()?.holds() {
                out.cleavage("cleavage", &p, &ctx.synthesize(opts.seed_order)?);
            }
            p.source.clone()
        }
    };
    if let Some(shape) = &opts.shape {
        let a = match shape.as_str() {
            "terminal" => fixtures::terminal(),
            "product" => fixtures::ld(&fixtures::discrete(2)),
            "pullback" => fixtures::ld(&fixtures::cospan()),
            _ => return Err(usage(format!("unknown shape \"{shape}\""))),
        };
        out.bicategory(shape, &a);
        let mode = opts.mode.unwrap_or(Mode::Pseudo);
        for (i, j) in enumerate_strict_functors(&a, &e, &SizeBounds::default())?.into_iter().enumerate() {
            out.diagram(&format!("J{i}"), &Arc::new(j), mode, None);
        }
    }
    Ok(Outcome::report("fixture", true, json!({ "fixture": name })).with(out))
}
