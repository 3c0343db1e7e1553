use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use bicatfib::{compose_functors, enumerate_strict_functors, fixtures, identity_transformation, Mode, SizeBounds};
use bicatfib_cli::{parse_document, parse_workspace, to_json, Emitter};
use serde_json::Value;

const FIXTURES: [&str; 10] = [
    "terminal",
    "ld-square",
    "two-cell",
    "cod",
    "proj",
    "proj2",
    "proj-two-cell",
    "nonpres",
    "identity-square",
    "cod-cospan",
];

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bicatfib"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("the binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("json on stderr")
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

/// Writes a fixture document and returns its path.
fn fixture(dir: &Path, name: &str, extra: &[&str]) -> String {
    let path = p(dir, &format!("{name}{}.json", extra.join("")));
    let mut args = vec!["fixture", name, "--emit", &path];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let path = p(dir, name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path
}

fn read(path: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn fixtures_round_trip_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    for name in FIXTURES {
        for extra in [&[][..], &["--shape", "product"][..]] {
            if name == "terminal" || name == "ld-square" || name == "two-cell" {
                if !extra.is_empty() {
                    continue;
                }
            }
            let path = fixture(dir.path(), name, extra);
            let text = std::fs::read_to_string(&path).unwrap();
            let ws = parse_workspace(&text).unwrap();
            let again = to_json(&ws.to_document());
            assert_eq!(again, text, "{name} is not byte-stable");
            assert_eq!(parse_workspace(&again).unwrap(), ws);
            assert_eq!(parse_document(&again).unwrap(), ws.to_document());
        }
    }
}

#[test]
fn fixture_bundles_have_the_expected_entities() {
    let dir = tempfile::tempdir().unwrap();
    let doc = read(&fixture(dir.path(), "ld-square", &[]));
    assert_eq!(doc["bicategories"].as_array().unwrap().len(), 1);
    assert!(doc["functors"].as_array().unwrap().is_empty());
    let doc = read(&fixture(dir.path(), "cod", &[]));
    assert_eq!(doc["bicategories"].as_array().unwrap().len(), 2);
    assert_eq!(doc["functors"].as_array().unwrap().len(), 1);
    assert_eq!(doc["cleavages"].as_array().unwrap().len(), 1);
    // not a fibration, so no cleavage
    let doc = read(&fixture(dir.path(), "cod-cospan", &[]));
    assert!(doc["cleavages"].as_array().unwrap().is_empty());
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    for name in FIXTURES {
        let path = fixture(dir.path(), name, &[]);
        assert_eq!(code(&run(&["validate", "--in", &path])), 0, "{name}");
    }
    // a wrong vertical composite
    let mut doc = read(&fixture(dir.path(), "two-cell", &[]));
    let vcomp = doc["bicategories"][0]["vcomp"].as_array_mut().unwrap();
    let row = vcomp.iter_mut().find(|r| r[0] == "1_f" && r[1] == "theta").unwrap();
    row[2] = "1_g".into();
    let bad = write(dir.path(), "bad.json", &doc);
    let report = p(dir.path(), "report.json");
    let o = run(&["validate", "--in", &bad, "--emit", &report]);
    assert_eq!(code(&o), 1);
    let r = read(&report);
    assert_eq!(r["holds"], false);
    assert_eq!(r["property"], "valid");
    assert!(r["counterexample"]["violations"][0].as_str().unwrap().len() > 0);
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = p(dir.path(), "broken.json");
    std::fs::write(&path, "{\n  \"bicategories\": [\n    {\"id\": }\n  ]\n}\n").unwrap();
    let o = run(&["validate", "--in", &path]);
    assert_eq!(code(&o), 2);
    let e = stderr_json(&o);
    assert_eq!(e["line"], 3);
    assert!(e["column"].as_u64().unwrap() > 1);
}

#[test]
fn unknown_keys_are_named() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = read(&fixture(dir.path(), "terminal", &[]));
    doc["bicategories"][0]["colour"] = "blue".into();
    let path = write(dir.path(), "unknown.json", &doc);
    let o = run(&["validate", "--in", &path]);
    assert_eq!(code(&o), 2);
    let e = stderr_json(&o);
    assert_eq!(e["key"], "colour");
    assert!(e["line"].as_u64().unwrap() > 1);
}

#[test]
fn dangling_references_point_at_the_cell() {
    let text = r#"{
  "bicategories": [
    {
      "id": "X",
      "objects": ["x"],
      "one_cells": [{"id": "1_x", "src": "x", "tgt": "x"}],
      "two_cells": [
        {"id": "1_1_x", "src": "1_x", "tgt": "1_x"},
        {"id": "bad", "src": "1_x", "tgt": "missing"}
      ],
      "id1": [["x", "1_x"]], "id2": [["1_x", "1_1_x"]],
      "vcomp": [["1_1_x", "1_1_x", "1_1_x"]],
      "hcomp1": [["1_x", "1_x", "1_x"]],
      "hcomp2": [["1_1_x", "1_1_x", "1_1_x"]],
      "assoc": [["1_x", "1_x", "1_x", "1_1_x"]],
      "lunit": [["1_x", "1_1_x"]], "runit": [["1_x", "1_1_x"]]
    }
  ]
}"#;
    let e = parse_workspace(text).unwrap_err();
    assert_eq!(e.key.as_deref(), Some("missing"));
    assert_eq!(e.line, 9);
    assert_eq!(e.column, text.lines().nth(8).unwrap().find("\"missing\"").unwrap() + 1);
    // the same document without the bad cell is fine
    let fixed = text.replace(",\n        {\"id\": \"bad\", \"src\": \"1_x\", \"tgt\": \"missing\"}", "");
    let ws = parse_workspace(&fixed).unwrap();
    assert_eq!(ws.bicategories.len(), 1);
}

#[test]
fn duplicate_ids_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = read(&fixture(dir.path(), "terminal", &[]));
    let b = doc["bicategories"][0].clone();
    doc["bicategories"].as_array_mut().unwrap().push(b);
    let path = write(dir.path(), "dup.json", &doc);
    let o = run(&["validate", "--in", &path]);
    assert_eq!(code(&o), 2);
    let e = stderr_json(&o);
    assert_eq!(e["key"], "terminal");
    assert!(e["error"].as_str().unwrap().contains("duplicate"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["validate", "--mode", "lax"])), 2);
    assert_eq!(code(&run(&["fixture", "nothing"])), 2);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn check_fibration_emits_a_witness_that_rechecks() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["cod", "proj", "proj2", "identity-square", "nonpres"] {
        let input = fixture(dir.path(), name, &[]);
        let witness = p(dir.path(), &format!("{name}-witness.json"));
        let o = run(&["check", "fibration", "--in", &input, "--emit", &witness, "--seed-order", "desc"]);
        assert_eq!(code(&o), 0, "{name}");
        assert_eq!(stdout_json(&o)["holds"], true);
        let w = read(&witness);
        assert_eq!(w["cleavages"].as_array().unwrap().len(), 1);
        let cl = w["cleavages"][0]["id"].as_str().unwrap().to_string();
        assert_eq!(code(&run(&["check", "fibration", "--in", &witness, "--cleavage", &cl])), 0);
        assert_eq!(code(&run(&["validate", "--in", &witness])), 0);
    }
    let input = fixture(dir.path(), "cod-cospan", &[]);
    let report = p(dir.path(), "cospan-report.json");
    let o = run(&["check", "fibration", "--in", &input, "--emit", &report]);
    assert_eq!(code(&o), 1);
    let r = read(&report);
    assert_eq!(r["holds"], false);
    assert!(r["counterexample"].as_str().unwrap().contains("no Cartesian lift"));
}

#[test]
fn cell_checks() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture(dir.path(), "proj", &[]);
    let doc = parse_workspace(&std::fs::read_to_string(&input).unwrap()).unwrap();
    let p = doc.functor("p").unwrap().clone();
    let ctx = bicatfib::FibrationContext::new(&p).unwrap();
    for f in p.source.ones() {
        let name = p.source.one_name(f);
        let expect = ctx.cartesian_1cell_def(f).unwrap().holds;
        let o = run(&["check", "cartesian-1cell", "--in", &input, "--cell", name]);
        assert_eq!(code(&o), if expect { 0 } else { 1 }, "{name}");
    }
    for a in p.source.twos() {
        let name = p.source.two_name(a);
        let expect = ctx.is_cartesian_2cell(a);
        let o = run(&["check", "cartesian-2cell", "--in", &input, "--cell", name]);
        assert_eq!(code(&o), if expect { 0 } else { 1 }, "{name}");
    }
    assert_eq!(code(&run(&["check", "locally-fibred", "--in", &input])), 0);
    assert_eq!(code(&run(&["check", "cartesian-1cell", "--in", &input, "--cell", "nope"])), 2);
    assert_eq!(code(&run(&["check", "cartesian-1cell", "--in", &input])), 2);
}

#[test]
fn comma_and_arrow_documents_validate() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture(dir.path(), "proj", &[]);
    let out = p(dir.path(), "comma.json");
    let o = run(&["comma", "--in", &input, "--emit", &out]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["d0_fibration"], true);
    assert_eq!(code(&run(&["validate", "--in", &out])), 0);
    assert_eq!(code(&run(&["check", "fibration", "--in", &out, "--functor", "d0"])), 0);

    let input = fixture(dir.path(), "ld-square", &[]);
    let out = p(dir.path(), "arrow.json");
    assert_eq!(code(&run(&["arrow", "--in", &input, "--emit", &out])), 0);
    assert_eq!(code(&run(&["validate", "--in", &out])), 0);
    let doc = read(&out);
    // nine arrows in the square poset
    let arrows = doc["bicategories"].as_array().unwrap().iter().find(|b| b["id"] == "arrows").unwrap();
    assert_eq!(arrows["objects"].as_array().unwrap().len(), 9);
}

#[test]
fn section_certificate_rechecks() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture(dir.path(), "cod", &[]);
    let out = p(dir.path(), "section.json");
    let o = run(&["section", "--in", &input, "--emit", &out]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["splits"], true);
    assert_eq!(code(&run(&["validate", "--in", &out])), 0);
    let o = run(&["check", "section", "--in", &out, "--functor", "p_L", "--section", "s_L"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    // the induced functor is not a section of itself
    let o = run(&["check", "section", "--in", &out, "--functor", "p_L", "--section", "p_L"]);
    assert_ne!(code(&o), 0);
    // chosen lifts are 2-rari-universal for the induced functor
    let doc = read(&out);
    let s_l = doc["functors"].as_array().unwrap().iter().find(|f| f["id"] == "s_L").unwrap();
    for pair in s_l["objects"].as_array().unwrap() {
        let o = run(&["check", "2rari", "--in", &out, "--functor", "p_L", "--object", pair[1].as_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
}

#[test]
fn lift_triple_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture(dir.path(), "cod", &[]);
    let ws = parse_workspace(&std::fs::read_to_string(&input).unwrap()).unwrap();
    let p = ws.functor("p").unwrap().clone();
    let cl = &ws.cleavages[0].value;
    let ctx = bicatfib::FibrationContext::new(&p).unwrap();
    let (e, b) = (&*p.source, &*p.target);
    let mut checked = 0;
    for (&(f, prob), &(h_hat, alpha_hat)) in cl.lift_triple.iter().take(12) {
        let o = run(&[
            "lift", "triple", "--in", &input, "--cell", e.one_name(f), "--problem", e.one_name(prob.g),
            b.one_name(prob.h), b.two_name(prob.alpha),
        ]);
        assert_eq!(code(&o), 0);
        let v = stdout_json(&o);
        assert_eq!(v["h_hat"], e.one_name(h_hat));
        assert_eq!(v["alpha_hat"], e.two_name(alpha_hat));
        let lift = ctx.lift_strict(cl, f, &prob).unwrap();
        assert!(ctx.lift_equation(f, &prob, &lift).unwrap());
        checked += 1;
    }
    assert!(checked > 0);
    assert_eq!(code(&run(&["lift", "triple", "--in", &input, "--cell", "x", "--problem", "a", "b"])), 2);
}

/// A document with `p`, a diagram `G : A → E`, `F = G·p` and the identity
/// `F ⇒ G·p`.
fn transformation_document(dir: &Path, name: &str) -> PathBuf {
    let p = Arc::new(match name {
        "proj" => fixtures::proj(),
        _ => fixtures::cod(),
    });
    let a = fixtures::ld(&fixtures::walking_arrow());
    let gs = enumerate_strict_functors(&a, &p.source, &SizeBounds::default()).unwrap();
    let g = Arc::new(gs.into_iter().last().unwrap());
    let f = Arc::new(compose_functors(&g, &p).unwrap());
    let tau = Arc::new(identity_transformation(f.clone()).unwrap());
    let mut out = Emitter::new(None);
    out.bicategory("E", &p.source);
    out.bicategory("B", &p.target);
    out.bicategory("A", &a);
    out.functor("p", &p);
    out.functor("G", &g);
    out.functor("F", &f);
    out.transformation("tau", &tau, Some(Mode::Pseudo));
    let path = dir.join(format!("{name}-tau.json"));
    std::fs::write(&path, to_json(&out.finish())).unwrap();
    path
}

#[test]
fn lifted_transformations_are_cartesian() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["proj", "cod"] {
        let input = transformation_document(dir.path(), name);
        let input = input.to_str().unwrap();
        assert_eq!(code(&run(&["validate", "--in", input])), 0);
        let out = p(dir.path(), &format!("{name}-lift.json"));
        let o = run(&[
            "lift", "transformation", "--in", input, "--functor", "p", "--transformation", "tau", "--target", "G",
            "--emit", &out,
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(code(&run(&["validate", "--in", &out])), 0);
        let o = run(&["check", "cartesian-transformation", "--in", &out, "--functor", "p", "--transformation", "tau_bar"]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout_json(&o)["pointwise"], true);
    }
}

#[test]
fn pool_guardrail_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let input = transformation_document(dir.path(), "proj");
    let input = input.to_str().unwrap();
    let out = p(dir.path(), "pool-lift.json");
    let o = run(&[
        "lift", "transformation", "--in", input, "--functor", "p", "--transformation", "tau", "--target", "G",
        "--emit", &out,
    ]);
    assert_eq!(code(&o), 0);
    let check = |pool: &str| {
        run(&[
            "check", "cartesian-transformation", "--in", &out, "--functor", "p", "--transformation", "tau_bar",
            "--pool", pool,
        ])
    };
    assert_eq!(code(&check("G,G,G,G,G")), 3);
    let o = check("G");
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["agree"], true);
    assert_eq!(stdout_json(&o)["direct"], true);
    // a base transformation is not a 1-cell of the total side
    let o = run(&["check", "cartesian-transformation", "--in", input, "--functor", "p", "--transformation", "tau"]);
    assert_eq!(code(&o), 2);
}

/// Diagram ids of a fixture with every strict diagram of `shape`.
fn diagrams(path: &str) -> Vec<String> {
    read(path)["diagrams"].as_array().unwrap().iter().map(|d| d["id"].as_str().unwrap().to_string()).collect()
}

#[test]
fn limit_find_certificates_recheck() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture(dir.path(), "cod", &["--shape", "product"]);
    let mut found = 0;
    for d in diagrams(&input).iter().take(20) {
        let out = p(dir.path(), &format!("find-{d}.json"));
        let o = run(&["limit", "find", "--in", &input, "--diagram", d, "--emit", &out]);
        match code(&o) {
            0 => {
                found += 1;
                let o = run(&["limit", "check", "--in", &out, "--diagram", d]);
                assert_eq!(code(&o), 0);
                assert_eq!(code(&run(&["validate", "--in", &out])), 0);
            }
            1 => assert_eq!(stdout_json(&o)["holds"], false),
            c => panic!("exit {c}"),
        }
    }
    assert!(found > 0);
}

#[test]
fn limit_lift_on_proj_products_rechecks() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture(dir.path(), "proj", &["--shape", "product"]);
    let mut lifted = 0;
    for d in diagrams(&input) {
        let out = p(dir.path(), &format!("lift-{d}.json"));
        let o = run(&["limit", "lift", "--in", &input, "--functor", "p", "--diagram", &d, "--emit", &out]);
        match code(&o) {
            0 => {
                lifted += 1;
                assert_eq!(code(&run(&["limit", "check", "--in", &out, "--diagram", &d])), 0);
                assert_eq!(code(&run(&["validate", "--in", &out])), 0);
                // the search finds a limit too
                let found = run(&["limit", "find", "--in", &input, "--diagram", &d]);
                assert_eq!(code(&found), 0);
            }
            1 => {
                let e = stderr_json(&o);
                assert_eq!(e["holds"], false);
            }
            c => panic!("exit {c}: {}", String::from_utf8_lossy(&o.stderr)),
        }
    }
    assert!(lifted > 0);
}

#[test]
fn hypothesis_failures_exit_1_with_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture(dir.path(), "nonpres", &["--shape", "product"]);
    let ws = parse_workspace(&std::fs::read_to_string(&input).unwrap()).unwrap();
    let e = &*ws.functor("p").unwrap().source;
    let (a, b) = (e.find_ob("a").unwrap(), e.find_ob("b").unwrap());
    let d = ws
        .diagrams
        .iter()
        .find(|d| d.functor.ob == vec![a, b])
        .unwrap();
    let report = p(dir.path(), "hyp.json");
    let o = run(&["limit", "lift", "--in", &input, "--functor", "p", "--diagram", &d.id, "--emit", &report]);
    assert_eq!(code(&o), 1);
    let r = read(&report);
    assert!(r["counterexample"].as_str().unwrap().contains("0<1"));
}

#[test]
fn reindexing_reports_preservation() {
    let dir = tempfile::tempdir().unwrap();
    // in nonpres the product a × b = m lives over 1; find it, then reindex
    let input = fixture(dir.path(), "nonpres", &["--shape", "product"]);
    let ws = parse_workspace(&std::fs::read_to_string(&input).unwrap()).unwrap();
    let e = &*ws.functor("p").unwrap().source;
    let (a, b) = (e.find_ob("a").unwrap(), e.find_ob("b").unwrap());
    let d = ws.diagrams.iter().find(|d| d.functor.ob == vec![a, b]).unwrap().id.clone();
    let found = p(dir.path(), "ab.json");
    // no limit in E, but the reindexing check runs on the fiber limit
    assert_eq!(code(&run(&["limit", "find", "--in", &input, "--diagram", &d, "--emit", &found])), 1);

    // reindexing without a cone only checks coherence
    let out = p(dir.path(), "reindexed.json");
    let o = run(&["reindex", "--in", &input, "--functor", "p", "--diagram", &d, "--along", "0<1", "--emit", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&run(&["validate", "--in", &out])), 0);

    // in cod, reindexing preserves products; with the cone from limit find
    let input = fixture(dir.path(), "cod", &["--shape", "product"]);
    let ws = parse_workspace(&std::fs::read_to_string(&input).unwrap()).unwrap();
    let p_ = ws.functor("p").unwrap().clone();
    let base = &*p_.target;
    let top = base.find_ob("top").unwrap();
    let mut preserved = 0;
    for d in &ws.diagrams {
        let over_top = d.functor.ob.iter().all(|&x| p_.ob(x) == top)
            && d.functor.map1.iter().all(|&f| base.is_identity(base.id2(p_.one(f))) && p_.one(f) == base.id1(top));
        if !over_top {
            continue;
        }
        let with_cone = p(dir.path(), &format!("cone-{}.json", d.id));
        // the limit in the fiber over top is the limit in the slice; find it in E
        if code(&run(&["limit", "find", "--in", &input, "--diagram", &d.id, "--emit", &with_cone])) != 0 {
            continue;
        }
        let cone_doc = parse_workspace(&std::fs::read_to_string(&with_cone).unwrap()).unwrap();
        let c = cone_doc.diagram(&d.id).unwrap().cone.clone().unwrap();
        if c.legs.comp1.iter().any(|&l| p_.one(l) != base.id1(top)) || p_.ob(c.apex) != top {
            continue;
        }
        let out = p(dir.path(), &format!("re-{}.json", d.id));
        let o = run(&[
            "reindex", "--in", &with_cone, "--functor", "p", "--diagram", &d.id, "--along", "a<top", "--emit", &out,
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout_json(&o)["preserved"], true);
        assert_eq!(code(&run(&["limit", "check", "--in", &out, "--diagram", "reindexed"])), 0);
        preserved += 1;
    }
    assert!(preserved > 0);
}

#[test]
fn default_functor_skips_diagrams() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture(dir.path(), "proj", &["--shape", "product"]);
    let out = p(dir.path(), "lifted.json");
    let o = run(&["limit", "lift", "--in", &input, "--diagram", "J0", "--emit", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&run(&["limit", "check", "--in", &out, "--diagram", "J0"])), 0);
}
