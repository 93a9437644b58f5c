use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn cloudcost(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cloudcost"))
        .args(args)
        .env_remove("CLOUDCOST_CATALOG")
        .output()
        .unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_a_good_model_is_silent() {
    let out = cloudcost(&["validate", path(&fixture("digital_library.json"))]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty() && out.stderr.is_empty(), "{}", text(&out.stderr));
}

#[test]
fn validate_reports_broken_models() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"name": "bad", "nodes": [
            {"id": "a", "kind": "virtual_machine", "placement": {"provider": "aws", "region": "us-east"},
             "vm_spec": {"operating_system": "linux", "sku": "standard.small"},
             "requirements": [{"kind": "storage_gb", "baseline": 1}]},
            {"id": "a", "kind": "remote_node"}]}"#,
    )
    .unwrap();
    let out = cloudcost(&["validate", path(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let err = text(&out.stderr);
    assert!(err.contains("/nodes/1"), "{err}");
    assert!(err.contains("storage_gb"), "{err}");

    fs::write(&bad, "{\"name\": ").unwrap();
    assert_eq!(cloudcost(&["validate", path(&bad)]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cloudcost(&[]).status.code(), Some(2));
    assert_eq!(cloudcost(&["simulate", "--model", "x.json"]).status.code(), Some(2));
    let model = fixture("golden_model.json");
    let catalog = fixture("demo_catalog.json");
    let dir = tempfile::tempdir().unwrap();
    let base = ["simulate", "--model", path(&model), "--catalog", path(&catalog), "--out", path(dir.path())];
    let bad_month = [&base[..], &["--start", "2011-13", "--end", "2011-12"]].concat();
    assert_eq!(cloudcost(&bad_month).status.code(), Some(2));
    let backwards = [&base[..], &["--start", "2012-01", "--end", "2011-12"]].concat();
    let out = cloudcost(&backwards);
    assert_eq!(out.status.code(), Some(2), "{}", text(&out.stderr));

    let compare = cloudcost(&[
        "compare",
        "--models",
        &format!("{},{}", path(&model), path(&model)),
        "--labels",
        "only-one",
        "--catalog",
        path(&catalog),
        "--start",
        "2011-01",
        "--end",
        "2011-02",
    ]);
    assert_eq!(compare.status.code(), Some(2));
}

#[test]
fn missing_rate_exits_3_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    fs::write(
        &model,
        r#"{"name": "m", "nodes": [{"id": "vm", "kind": "virtual_machine", "placement": {"provider": "aws", "region": "us-east"},
            "vm_spec": {"operating_system": "linux", "sku": "no.such.size"},
            "requirements": [{"kind": "vm_hours", "baseline": 720}]}]}"#,
    )
    .unwrap();
    let out = cloudcost(&[
        "simulate",
        "--model",
        path(&model),
        "--catalog",
        path(&fixture("demo_catalog.json")),
        "--start",
        "2011-01",
        "--end",
        "2011-12",
        "--out",
        path(&dir.path().join("out")),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = text(&out.stderr);
    assert!(err.contains("aws") && err.contains("vm_hours"), "{err}");
    assert!(!dir.path().join("out/report.csv").exists());
}

#[test]
fn simulate_writes_three_consistent_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cloudcost"))
        .args(["simulate", "--model", path(&fixture("digital_library.json")), "--start", "2011-01", "--end", "2013-12"])
        .args(["--ratings", path(&fixture("ratings_technical.csv")), "--out", path(dir.path())])
        .env("CLOUDCOST_CATALOG", fixture("demo_catalog.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    assert!(text(&out.stdout).contains("over 36 months"));

    let csv = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let html = fs::read_to_string(dir.path().join("report.html")).unwrap();
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert!(csv.starts_with("month,group,node,provider,region,dimension,quantity,unit,cost\r\n"));
    assert!(html.contains("<section id=\"assessment\">"));
    assert!(html.contains("<section id=\"topology\">"));

    let micros = |key: &str| -> i128 {
        let s = summary[key].as_str().unwrap_or_else(|| panic!("{key} is not a decimal string: {}", summary[key]));
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        int.parse::<i128>().unwrap() * 1_000_000 + format!("{frac:0<6}").parse::<i128>().unwrap()
    };
    let n = summary["months"].as_u64().unwrap() as i128;
    assert_eq!(n, 36);
    let gap = micros("monthly_avg") * (n - 1) + micros("first_month") - micros("total");
    // the stored average is rounded to the micro, half a micro per month at most
    assert!(2 * gap.abs() < n, "identity off by {gap} micros");

    let csv_total: i128 = csv
        .lines()
        .skip(1)
        .map(|l| {
            let cost = l.rsplit(',').next().unwrap();
            let (int, frac) = cost.split_once('.').unwrap();
            int.parse::<i128>().unwrap() * 100 + frac.parse::<i128>().unwrap()
        })
        .sum();
    assert_eq!(csv_total * 10_000, micros("total"));
}

#[test]
fn compare_providers_prints_the_table_shape() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("cmp.json");
    let out = cloudcost(&[
        "compare-providers",
        "--model",
        path(&fixture("digital_library.json")),
        "--catalog",
        path(&fixture("demo_catalog.json")),
        "--map",
        path(&fixture("provider_map.json")),
        "--start",
        "2011-01",
        "--end",
        "2013-12",
        "--out",
        path(&json),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let table = text(&out.stdout);
    for needle in ["1st month", "Monthly avg.", "Total, 36 months", "Difference with AWS US-East", "+2x", "+3x"] {
        assert!(table.contains(needle), "missing {needle:?} in\n{table}");
    }
    let parsed: serde_json::Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(parsed["baseline_label"], "AWS US-East");
    assert_eq!(parsed["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn compare_models_with_plans() {
    let out = cloudcost(&[
        "compare",
        "--models",
        &[fixture("rnd_always_on.json"), fixture("rnd_elastic.json"), fixture("rnd_small_instances.json")]
            .iter()
            .map(|p| path(p).to_string())
            .collect::<Vec<_>>()
            .join(","),
        "--labels",
        "Non-elastic,Elastic,Small instances",
        "--plans",
        &[fixture("rnd_always_on_plan.json"), fixture("rnd_elastic_plan.json"), fixture("rnd_small_instances_plan.json")]
            .iter()
            .map(|p| path(p).to_string())
            .collect::<Vec<_>>()
            .join(","),
        "--catalog",
        path(&fixture("demo_catalog.json")),
        "--start",
        "2011-01",
        "--end",
        "2013-12",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let table = text(&out.stdout);
    assert!(table.contains("Difference with Elastic"), "{table}");
}

#[test]
fn assess_writes_radar_and_important_items() {
    let dir = tempfile::tempdir().unwrap();
    let out = cloudcost(&["assess", "--ratings", path(&fixture("ratings_technical.csv")), "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let radar: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("radar.json")).unwrap()).unwrap();
    let entries = radar.as_array().unwrap();
    assert_eq!(entries.len(), 8);
    for e in entries {
        let avg = e["average"].as_f64().unwrap();
        assert!((1.0..=5.0).contains(&avg));
    }
    let important: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("important.json")).unwrap()).unwrap();
    assert_eq!(important["threshold"], 4);
    assert_eq!(important["benefits"].as_array().unwrap().len(), 7);
    assert_eq!(important["risks"].as_array().unwrap().len(), 13);

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "item_id,rating\nB1,9\n").unwrap();
    let out = cloudcost(&["assess", "--ratings", path(&bad), "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
}
