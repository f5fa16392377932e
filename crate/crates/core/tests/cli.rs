use std::process::{Command, Output};

fn pspoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pspoly")).args(args).env_remove("PSPOLY_CONFIG").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn lattice_points_of_unit_staircase() {
    let o = pspoly(&["lattice", "--x", "1,1,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "14");
}

#[test]
fn volume_three_has_five_terms() {
    let o = pspoly(&["volume", "--n", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1/6 x1^3 + 1/2 x1^2 x2 + 1/2 x1^2 x3 + 1/2 x1 x2^2 + x1 x2 x3");
}

#[test]
fn volume_values_are_exact_fractions() {
    assert_eq!(stdout(&pspoly(&["volume", "--eval", "1/2,1/3"])), "7/24");
    assert_eq!(stdout(&pspoly(&["volume", "--eval", "1,1,1,1", "--scaled"])), "125");
}

#[test]
fn ehrhart_and_daniels_polynomials() {
    assert_eq!(stdout(&pspoly(&["ehrhart", "--n", "1", "--a", "2", "--b", "5"])), "2 r + 1");
    assert_eq!(stdout(&pspoly(&["prob", "daniels", "--n", "4"])), "-p + 1");
}

#[test]
fn tree_commands() {
    assert_eq!(stdout(&pspoly(&["tree", "of-k", "--k", "2,0,1"])), "(())()");
    assert_eq!(stdout(&pspoly(&["tree", "k-of", "--tree", "(()())()"])), "2,1,0,1");
    assert_eq!(stdout(&pspoly(&["tree", "of-k", "--k", "2,1,0,1"])), "(()())()");
    let located = stdout(&pspoly(&["tree", "locate", "--point", "-1,2,-1"]));
    assert!(located.contains("\"tree\": \"(()())()\""), "{located}");
    let boundary = stdout(&pspoly(&["tree", "locate", "--point", "0,1"]));
    assert!(boundary.contains("boundary"), "{boundary}");
    let listed: serde_json::Value = serde_json::from_str(&stdout(&pspoly(&["tree", "enumerate", "--n", "4"]))).unwrap();
    assert_eq!(listed.as_array().unwrap().len(), 14);
}

#[test]
fn subdivision_outputs() {
    let svg = stdout(&pspoly(&["subdivide", "--x", "1,2", "--svg"]));
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"), "{svg}");
    let obj = stdout(&pspoly(&["subdivide", "--x", "1,1,1", "--obj"]));
    assert!(obj.lines().any(|l| l.starts_with("v ")));
    let cells: serde_json::Value = serde_json::from_str(&stdout(&pspoly(&["subdivide", "--x", "1,1,1,1"]))).unwrap();
    assert_eq!(cells.as_array().unwrap().len(), 14);
}

#[test]
fn poset_section_from_file() {
    let dir = std::env::temp_dir().join(format!("pspoly-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("square.json");
    std::fs::write(&path, r#"{"size": 4, "covers": [[1, 2], [3, 4], [1, 3], [2, 4]]}"#).unwrap();
    let p = path.to_str().unwrap();
    // the 2 x 2 grid with its top chain marked counts the points of Pi_2(1, 1)
    assert_eq!(stdout(&pspoly(&["poset-section", "--poset", p, "--chain", "3,4", "--x", "1,1"])), "5");
    assert_eq!(stdout(&pspoly(&["poset-section", "--poset", p, "--chain", "3,4", "--x", "2,0"])), "6");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn probability_commands() {
    assert_eq!(stdout(&pspoly(&["prob", "band", "--s", "1/2,1"])), "3/4");
    let mc: serde_json::Value =
        serde_json::from_str(&stdout(&pspoly(&["prob", "mc", "--s", "1/2,1", "--trials", "2000", "--seed", "7"])))
            .unwrap();
    assert_eq!(mc["exact"], "3/4");
    assert_eq!(mc["monte_carlo"]["trials"], 2000);
    let again = stdout(&pspoly(&["prob", "mc", "--s", "1/2,1", "--trials", "2000", "--seed", "7"]));
    assert_eq!(again, serde_json::to_string_pretty(&mc).unwrap());
}

#[test]
fn error_exit_codes() {
    assert_eq!(pspoly(&["lattice"]).status.code(), Some(2));
    assert_eq!(pspoly(&["lattice", "--x", "1,x"]).status.code(), Some(2));
    assert_eq!(pspoly(&["tree", "enumerate", "--n", "30"]).status.code(), Some(3));
    assert_eq!(pspoly(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn verify_single_criterion() {
    let o = pspoly(&["verify", "--suite", "12", "--seed", "42"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("PASS 12"), "{text}");
    assert!(text.ends_with("1/1 criteria passed (seed 42)"));
}
