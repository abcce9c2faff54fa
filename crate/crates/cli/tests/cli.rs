use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn survcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_survcomp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = survcomp(args);
    assert!(out.status.success(), "{args:?} failed: {}", stderr(&out));
    stdout(&out)
}

/// method -> p-value from the TSV output of `survcomp test`.
fn p_values(tsv: &str) -> BTreeMap<String, f64> {
    let mut lines = tsv.lines();
    let header: Vec<&str> = lines.next().unwrap().split('\t').collect();
    let col = header.iter().position(|h| *h == "p_value").unwrap();
    lines
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0].to_string(), f[col].parse().unwrap())
        })
        .collect()
}

fn tmp_path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn gastric_p_values() {
    let p = p_values(&ok(&["test", "--dataset", "gastric"]));
    let expected = [
        ("gehan", 0.0294),
        ("cox_mantel", 0.2998),
        ("logrank", 0.3018),
        ("peto_peto", 0.0334),
        ("proposed", 0.0014),
    ];
    for (m, e) in expected {
        assert!((p[m] - e).abs() < 0.003, "{m}: {} vs {e}", p[m]);
    }
}

#[test]
fn myeloma_nothing_significant() {
    let p = p_values(&ok(&["test", "--dataset", "myeloma"]));
    assert_eq!(p.len(), 5);
    for (m, v) in &p {
        assert!(*v >= 0.84, "{m}: {v}");
    }
}

#[test]
fn melanoma_proposed_only() {
    let p = p_values(&ok(&["test", "--dataset", "melanoma", "--methods", "proposed"]));
    assert_eq!(p.len(), 1);
    assert!((p["proposed"] - 0.0843).abs() < 5e-4, "{}", p["proposed"]);
}

#[test]
fn export_and_reparse_gives_identical_p_values() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["gastric", "dmba_rats", "myeloma", "melanoma"] {
        let csv = tmp_path(dir.path(), &format!("{name}.csv"));
        ok(&["datasets", "export", name, "--out", &csv]);
        let a = p_values(&ok(&["test", "--dataset", name]));
        let b = p_values(&ok(&["test", "--file", &csv]));
        for (m, pa) in &a {
            let pb = b[m];
            assert_eq!(format!("{pa:.14e}"), format!("{pb:.14e}"), "{name} {m}");
        }
    }
}

#[test]
fn datasets_list_names_all_four() {
    let out = ok(&["datasets", "list"]);
    for name in ["gastric", "dmba_rats", "myeloma", "melanoma"] {
        assert!(out.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
    let show = ok(&["datasets", "show", "melanoma"]);
    assert!(show.contains("n=11") && show.contains("n=19"));
}

/// Product-limit estimate computed directly from (time, event) pairs.
fn product_limit(obs: &[(f64, bool)]) -> f64 {
    let mut s = 1.0;
    let mut times: Vec<f64> = obs.iter().filter(|o| o.1).map(|o| o.0).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    for t in times {
        let at_risk = obs.iter().filter(|o| o.0 >= t).count() as f64;
        let deaths = obs.iter().filter(|o| o.1 && o.0 == t).count() as f64;
        s *= 1.0 - deaths / at_risk;
    }
    s
}

fn read_groups(csv: &str) -> [Vec<(f64, bool)>; 2] {
    let mut g = [Vec::new(), Vec::new()];
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let k: usize = f[2].trim().parse().unwrap();
        g[k - 1].push((f[0].trim().parse().unwrap(), f[1].trim() == "1"));
    }
    g
}

#[test]
fn km_export_matches_product_limit() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    for name in ["gastric", "dmba_rats", "myeloma", "melanoma"] {
        let listed = ok(&["km", "--dataset", name, "--out-dir", out_dir]);
        assert_eq!(listed.lines().count(), 2);
        let groups = read_groups(&ok(&["datasets", "export", name]));
        for (g, obs) in groups.iter().enumerate() {
            let text = fs::read_to_string(dir.path().join(format!("{name}_group{}.csv", g + 1))).unwrap();
            let mut lines = text.lines();
            assert_eq!(lines.next(), Some("time,at_risk,events,survival"));
            assert_eq!(lines.next().unwrap(), format!("0,{},0,1", obs.len()));
            let last: f64 = text
                .lines()
                .last()
                .unwrap()
                .rsplit(',')
                .next()
                .unwrap()
                .parse()
                .unwrap();
            let expect = product_limit(obs);
            assert!(
                (last - expect).abs() < 1e-12,
                "{name} group {}: {last} vs {expect}",
                g + 1
            );
        }
    }
}

#[test]
fn km_group_without_events_is_a_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let csv = tmp_path(dir.path(), "flat.csv");
    fs::write(&csv, "time,event,group\n1,1,1\n2,1,1\n3,0,2\n4,0,2\n").unwrap();
    ok(&["km", "--file", &csv, "--out-dir", dir.path().to_str().unwrap()]);
    let text = fs::read_to_string(dir.path().join("flat_group2.csv")).unwrap();
    assert_eq!(text, "time,at_risk,events,survival\n0,2,0,1\n");
}

#[test]
fn km_unwritable_directory_is_an_io_error() {
    let out = survcomp(&["km", "--dataset", "gastric", "--out-dir", "/nonexistent/dir"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(
        stderr(&out).contains("/nonexistent/dir/gastric_group1.csv"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(survcomp(&["test"]).status.code(), Some(2));
    assert_eq!(survcomp(&["test", "--dataset", "nope"]).status.code(), Some(2));
    assert_eq!(survcomp(&["simulate", "size", "--reps", "10"]).status.code(), Some(2));
    let vi = survcomp(&["simulate", "power", "--case", "VI", "--seed", "1", "--reps", "10"]);
    assert_eq!(vi.status.code(), Some(2));
    assert!(stderr(&vi).contains("VI"));
    let bad_n = survcomp(&[
        "simulate", "power", "--case", "I", "--n", "75", "--seed", "1", "--reps", "10",
    ]);
    assert_eq!(bad_n.status.code(), Some(2));
    // io
    let missing = survcomp(&["test", "--file", "/nonexistent/data.csv"]);
    assert_eq!(missing.status.code(), Some(4));
    assert!(stderr(&missing).contains("/nonexistent/data.csv"));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let csv = tmp_path(dir.path(), "bad.csv");
    fs::write(&csv, "time,event,group\n1,1,1\n2,1,2\n3,2,1\n").unwrap();
    let out = survcomp(&["test", "--file", &csv]);
    assert_eq!(out.status.code(), Some(3));
    let msg = stderr(&out);
    assert!(msg.contains("line 4") && msg.contains("event"), "{msg}");

    fs::write(&csv, "1,1,1\n2,1,1\n").unwrap();
    let out = survcomp(&["test", "--file", &csv]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));

    let toml = tmp_path(dir.path(), "bad.toml");
    fs::write(&toml, "[[scenario]]\nid = \"x\"\nn1 = 10\n").unwrap();
    let out = survcomp(&["simulate", "custom", "--config", &toml, "--seed", "1"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn size_study_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = tmp_path(dir.path(), "a.tsv");
    let b = tmp_path(dir.path(), "b.tsv");
    ok(&["simulate", "size", "--reps", "100", "--seed", "7", "--out", &a]);
    ok(&[
        "simulate",
        "size",
        "--reps",
        "100",
        "--seed",
        "7",
        "--workers",
        "2",
        "--out",
        &b,
    ]);
    let (a, b) = (fs::read(a).unwrap(), fs::read(b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    // header plus five methods for each of the twenty cells
    assert_eq!(text.lines().count(), 1 + 5 * 20);
    let other = ok(&["simulate", "size", "--reps", "100", "--seed", "8"]);
    assert_ne!(text, other);
}

fn rejections_by_method(tsv: &str) -> BTreeMap<String, u64> {
    tsv.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0].to_string(), f[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn power_single_cells() {
    let run = |n: &str, cens: &str| {
        ok(&[
            "simulate",
            "power",
            "--case",
            "V",
            "--n",
            n,
            "--censoring",
            cens,
            "--reps",
            "200",
            "--seed",
            "3",
        ])
    };
    let out = run("200", "50");
    assert_eq!(
        out.lines().nth(1).unwrap().split('\t').nth(1),
        Some("caseV/n=200/cens=50")
    );
    let r = rejections_by_method(&out);
    assert_eq!(r.len(), 5);
    assert!(r["proposed"] >= 198, "{r:?}");

    // without censoring the Gehan, Peto-Peto and composite statistics are all
    // the Mann-Whitney statistic, so they reject together
    let r = rejections_by_method(&run("50", "0"));
    assert_eq!(r["gehan"], r["proposed"]);
    assert_eq!(r["peto_peto"], r["proposed"]);
}

const EXAMPLE_CONFIG: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/example.toml");

#[test]
fn custom_config_example_runs() {
    let json: Value = serde_json::from_str(&ok(&[
        "simulate",
        "custom",
        "--config",
        EXAMPLE_CONFIG,
        "--reps",
        "200",
        "--seed",
        "11",
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(json["kind"], "custom");
    let scenarios = json["scenarios"].as_array().unwrap();
    assert!(!scenarios.is_empty());
    for s in scenarios {
        assert_eq!(s["replications"], 200);
    }
}

#[test]
fn calibrate_and_crossings() {
    let out = ok(&["calibrate", "--event", "exponential(1)", "--target", "0.25"]);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split('\t').collect();
    // P(C < T) = (1 - e^-theta) / theta for T ~ Exp(1), C ~ U(0, theta)
    let theta: f64 = row[1].parse().unwrap();
    assert!(((1.0 - (-theta).exp()) / theta - 0.25).abs() < 1e-6, "theta {theta}");

    let out = ok(&["crossings", "--case", "IV"]);
    assert_eq!(out.lines().count(), 2, "{out}");
    let out = ok(&["crossings", "--first", "exponential(1)", "--second", "exponential(2)"]);
    assert_eq!(out.lines().count(), 2, "{out}");

    let curves = ok(&["curves", "--case", "II", "--points", "5"]);
    assert_eq!(curves.lines().count(), 6);
    assert!(curves.lines().nth(1).unwrap().ends_with(",1,1"));
}

/// Checks a document against the subset of JSON Schema the report schemas use:
/// type, const, enum, required, properties, additionalProperties, items,
/// minItems, maxItems, minimum, maximum, exclusiveMinimum and oneOf.
mod schema {
    use super::*;

    fn type_matches(t: &str, v: &Value) -> bool {
        match t {
            "object" => v.is_object(),
            "array" => v.is_array(),
            "string" => v.is_string(),
            "boolean" => v.is_boolean(),
            "null" => v.is_null(),
            "integer" => v.is_i64() || v.is_u64(),
            "number" => v.is_number(),
            other => panic!("unsupported type {other}"),
        }
    }

    fn check(schema: &Value, v: &Value, at: &str, errors: &mut Vec<String>) {
        let s = schema.as_object().expect("schema is an object");
        for key in s.keys() {
            assert!(
                [
                    "$schema",
                    "$id",
                    "title",
                    "type",
                    "const",
                    "enum",
                    "required",
                    "properties",
                    "additionalProperties",
                    "items",
                    "minItems",
                    "maxItems",
                    "minimum",
                    "maximum",
                    "exclusiveMinimum",
                    "oneOf",
                ]
                .contains(&key.as_str()),
                "unsupported keyword {key}"
            );
        }
        let mut fail = |msg: String| errors.push(format!("{at}: {msg}"));
        if let Some(t) = s.get("type") {
            let ok = match t {
                Value::String(t) => type_matches(t, v),
                Value::Array(ts) => ts.iter().any(|t| type_matches(t.as_str().unwrap(), v)),
                _ => panic!("bad type keyword"),
            };
            if !ok {
                return fail(format!("{v} is not of type {t}"));
            }
        }
        if let Some(c) = s.get("const") {
            if c != v {
                fail(format!("{v} != {c}"));
            }
        }
        if let Some(Value::Array(options)) = s.get("enum") {
            if !options.contains(v) {
                fail(format!("{v} not in {options:?}"));
            }
        }
        if let Some(x) = v.as_f64() {
            if s.get("minimum").and_then(Value::as_f64).is_some_and(|m| x < m) {
                fail(format!("{x} below minimum"));
            }
            if s.get("maximum").and_then(Value::as_f64).is_some_and(|m| x > m) {
                fail(format!("{x} above maximum"));
            }
            if s.get("exclusiveMinimum")
                .and_then(Value::as_f64)
                .is_some_and(|m| x <= m)
            {
                fail(format!("{x} not above exclusive minimum"));
            }
        }
        if let Some(obj) = v.as_object() {
            if let Some(Value::Array(req)) = s.get("required") {
                for r in req {
                    if !obj.contains_key(r.as_str().unwrap()) {
                        fail(format!("missing {r}"));
                    }
                }
            }
            let props = s.get("properties").and_then(Value::as_object);
            for (k, child) in obj {
                match props.and_then(|p| p.get(k)) {
                    Some(sub) => check(sub, child, &format!("{at}/{k}"), errors),
                    None if s.get("additionalProperties") == Some(&Value::Bool(false)) => {
                        errors.push(format!("{at}: unexpected key {k}"))
                    }
                    None => {}
                }
            }
        }
        if let Some(items) = v.as_array() {
            let len = items.len() as u64;
            if s.get("minItems").and_then(Value::as_u64).is_some_and(|m| len < m) {
                errors.push(format!("{at}: fewer than minItems"));
            }
            if s.get("maxItems").and_then(Value::as_u64).is_some_and(|m| len > m) {
                errors.push(format!("{at}: more than maxItems"));
            }
            if let Some(sub) = s.get("items") {
                for (i, item) in items.iter().enumerate() {
                    check(sub, item, &format!("{at}/{i}"), errors);
                }
            }
        }
        if let Some(Value::Array(branches)) = s.get("oneOf") {
            let matching = branches.iter().filter(|b| validate(b, v).is_empty()).count();
            if matching != 1 {
                errors.push(format!("{at}: {matching} oneOf branches match"));
            }
        }
    }

    fn validate(schema: &Value, doc: &Value) -> Vec<String> {
        let mut errors = Vec::new();
        check(schema, doc, "", &mut errors);
        errors
    }

    fn load(name: &str) -> Value {
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema").join(name);
        serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
    }

    fn assert_valid(schema: &Value, doc: &Value) {
        let errors = validate(schema, doc);
        assert!(errors.is_empty(), "{errors:?}");
    }

    #[test]
    fn test_reports_validate() {
        let schema = load("test-report.schema.json");
        for name in ["gastric", "dmba_rats", "myeloma", "melanoma"] {
            let doc: Value = serde_json::from_str(&ok(&["test", "--dataset", name, "--format", "json"])).unwrap();
            assert_valid(&schema, &doc);
        }
        let dir = tempfile::tempdir().unwrap();
        let csv = tmp_path(dir.path(), "censored.csv");
        fs::write(&csv, "time,event,group\n1,0,1\n2,0,1\n3,0,2\n").unwrap();
        let doc: Value = serde_json::from_str(&ok(&["test", "--file", &csv, "--format", "json"])).unwrap();
        assert_valid(&schema, &doc);
        assert!(doc["results"]
            .as_array()
            .unwrap()
            .iter()
            .any(|r| r["error"].is_string()));
    }

    #[test]
    fn simulation_reports_validate() {
        let schema = load("simulation-report.schema.json");
        let size: Value = serde_json::from_str(&ok(&[
            "simulate", "size", "--reps", "50", "--seed", "5", "--format", "json",
        ]))
        .unwrap();
        assert_valid(&schema, &size);
        assert!(size["acceptance_interval"].is_object());
        let power: Value = serde_json::from_str(&ok(&[
            "simulate",
            "power",
            "--case",
            "III",
            "--n",
            "50",
            "--censoring",
            "30",
            "--reps",
            "50",
            "--seed",
            "5",
            "--format",
            "json",
        ]))
        .unwrap();
        assert_valid(&schema, &power);
        assert!(power.get("acceptance_interval").is_none());
    }

    #[test]
    fn schemas_reject_malformed_reports() {
        let schema = load("simulation-report.schema.json");
        let mut doc: Value = serde_json::from_str(&ok(&[
            "simulate", "size", "--reps", "20", "--seed", "5", "--format", "json",
        ]))
        .unwrap();
        doc["rows"][0]["rate"] = Value::from(1.5);
        assert!(!validate(&schema, &doc).is_empty());
        doc["rows"][0]["rate"] = Value::Null;
        assert!(validate(&schema, &doc).is_empty());
        doc["extra"] = Value::from(1);
        assert!(!validate(&schema, &doc).is_empty());
        doc.as_object_mut().unwrap().remove("extra");
        doc["rows"][0]["method"] = Value::from("wilcoxon");
        assert!(!validate(&schema, &doc).is_empty());

        let test_schema = load("test-report.schema.json");
        let mut t: Value = serde_json::from_str(&ok(&["test", "--dataset", "gastric", "--format", "json"])).unwrap();
        t["results"][0]["error"] = Value::from("boom");
        assert!(!validate(&test_schema, &t).is_empty());
    }
}
