use std::process::{Command, Output};

use serde_json::Value;

fn fgva(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fgva")).args(args).env_remove("FGVA_DEFAULT_ORDER").output().expect("run fgva")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

#[test]
fn fg_log_mult() {
    let o = fgva(&["fg", "log", "--group", "mult", "--order", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "x - 1/2*x^2 + 1/3*x^3 - 1/4*x^4 + 1/5*x^5 - 1/6*x^6 + 1/7*x^7 + O(x^8)");
}

#[test]
fn text_and_json_agree() {
    let text = fgva(&["fg", "log", "--group", "mult", "--order", "6"]);
    let json = fgva(&["fg", "log", "--group", "mult", "--order", "6", "--json"]);
    assert_eq!(lines(&json)[0]["log"].as_str().unwrap(), stdout(&text).trim());
}

#[test]
fn default_order_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_fgva")).args(["fg", "log"]).env("FGVA_DEFAULT_ORDER", "4").output().unwrap();
    assert_eq!(stdout(&o).trim(), "x - 1/2*x^2 + 1/3*x^3 + O(x^4)");
}

#[test]
fn assoc_from_p_geometric() {
    let o = fgva(&["assoc", "from-p", "--group", "add", "--p", "x^2", "--z-order", "5", "--x-window", "0:6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("x + x^2*z + x^3*z^2 + x^4*z^3 + x^5*z^4"), "{}", stdout(&o));
}

#[test]
fn weak_comm_upper_triangular_fails() {
    let o = fgva(&["check", "weak-comm", "--example", "upper_triangular", "--k-max", "4", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let r = &lines(&o)[0];
    assert_eq!(r["verdict"], "fail");
    assert!(r["witness"]["exponents"].is_array());
}

#[test]
fn poly_t_checks_pass() {
    for kind in ["weak-assoc", "weak-comm", "f-assoc-alt", "d-def"] {
        let o = fgva(&["check", kind, "--example", "poly_t", "--window", "-4:4", "--json"]);
        assert_eq!(o.status.code(), Some(0), "{kind}: {}", stdout(&o));
        assert_eq!(lines(&o)[0]["verdict"], "pass");
    }
    let o = fgva(&["check", "jacobi", "--window", "-3:3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn associate_checks() {
    assert_eq!(fgva(&["assoc", "check", "--phi", "x*e^z", "--z-order", "6"]).status.code(), Some(0));
    assert_eq!(fgva(&["assoc", "check", "--phi", "x + z + x*z", "--z-order", "4"]).status.code(), Some(1));
    let o = fgva(&["assoc", "transform", "--phi", "x+z", "--kind", "retime", "--g", "x - 1/2*x^2 + 1/3*x^3", "--z-order", "4"]);
    assert_eq!(stdout(&o).lines().next(), Some("x + z - 1/2*z^2 + 1/3*z^3 + O(z^4)"));
    let o = fgva(&["assoc", "probe", "--q", "(x1-x2)^2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn va_and_zhu_tables() {
    let o = fgva(&["va", "build", "--example", "poly_t", "--cap", "2", "--order", "3", "--json"]);
    let rows = lines(&o);
    let tt = rows.iter().find(|r| r["u"] == "t^1" && r["v"] == "t^1").unwrap();
    assert_eq!(tt["series"][1]["exp"], 1);
    let o = fgva(&["zhu", "transform", "--example", "poly_t", "--deg", "neg", "--order", "3", "--cap", "2"]);
    assert!(stdout(&o).contains("Y(t^1, x)t^1 = (1*t^2)*x^0 + (1*t^1 + -1*t^2)*x^1"), "{}", stdout(&o));
    let o = fgva(&["zhu", "xw", "--order", "4", "--window", "-2:0", "--cap", "2"]);
    assert!(stdout(&o).contains("Y(t^1, x)1 = (1*t^1)*x^-1 + (1*1)*x^0"), "{}", stdout(&o));
    let o = fgva(&["va", "d-operator", "--cap", "3"]);
    assert!(stdout(&o).contains("D t^3 = 3*t^2"));
}

#[test]
fn zhu_module_checks() {
    assert_eq!(fgva(&["zhu", "check", "--variant", "phi", "--order", "6"]).status.code(), Some(0));
    assert_eq!(fgva(&["zhu", "check", "--variant", "phi", "--phi", "x+z", "--order", "6", "--z-order", "6"]).status.code(), Some(1));
    assert_eq!(fgva(&["zhu", "check", "--variant", "phi-quasi", "--q", "(x1-x2)^2", "--order", "6"]).status.code(), Some(0));
}

#[test]
fn heisenberg_closure() {
    let o = fgva(&[
        "fields", "closure", "--example", "heisenberg", "--phi", "x*e^z", "--depth", "2", "--weight-cap", "3", "--mode-window", "6", "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = &lines(&o)[0];
    assert!(v.to_string().contains("h(-1)h"));
}

#[test]
fn usage_and_domain_errors() {
    assert_eq!(fgva(&["fg", "log", "--bogus"]).status.code(), Some(64));
    assert_eq!(fgva(&["fg", "log", "--group", "x +"]).status.code(), Some(64));
    assert_eq!(fgva(&["check", "weak-assoc", "--window", "3:1"]).status.code(), Some(64));
    assert_eq!(fgva(&["fg", "from-log", "--f", "2*x"]).status.code(), Some(2));
}

#[test]
fn suites_pass() {
    assert_eq!(fgva(&["suite", "paper-tables"]).status.code(), Some(0));
    assert_eq!(fgva(&["suite", "golden"]).status.code(), Some(0));
    let o = fgva(&["suite", "axioms-all", "--order", "6", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(lines(&o).iter().all(|r| r["verdict"] == "pass"));
}
