use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

fn leaves(t: &Value, out: &mut Vec<String>) {
    let kids = t["children"].as_array().unwrap();
    if kids.is_empty() {
        out.push(t["rule"].as_str().unwrap().to_string());
    }
    for k in kids {
        leaves(k, out);
    }
}

#[test]
fn decide_returns_a_tree() {
    let v = parse(seqwork_web::decide("cpc", "((p->q)->p)->p"));
    assert_eq!(v["status"], "provable");
    assert_eq!(v["calculus"], "G3cp");
    assert_eq!(v["tree"]["sequent"], "=> ((p -> q) -> p) -> p");
    let mut ls = Vec::new();
    leaves(&v["tree"], &mut ls);
    assert!(!ls.is_empty() && ls.iter().all(|r| ["At", "Lfalse", "Rtrue"].contains(&r.as_str())), "{ls:?}");

    let v = parse(seqwork_web::decide("ipc", "((p->q)->p)->p"));
    assert_eq!(v["status"], "unprovable");
    assert!(v["tree"].is_null());

    let v = parse(seqwork_web::decide("ll", "p => O p"));
    assert_eq!(v["status"], "provable");
}

#[test]
fn interpolate_and_verify() {
    let v = parse(seqwork_web::interpolate("g4ip", "p & q ; q -> r => r"));
    assert_eq!(v["provable"], true);
    assert_eq!(v["verified"], true);
    let alpha = seqwork::syntax::parse_formula(v["interpolant"].as_str().unwrap()).unwrap();
    assert!(alpha.atoms().iter().all(|a| a == "q"));

    let v = parse(seqwork_web::interpolate("g3cp", "p & ~p -> q"));
    assert_eq!(v["verified"], true);
    let v = parse(seqwork_web::interpolate("g4ip", "p -> q"));
    assert_eq!(v["provable"], false);
}

#[test]
fn classify_builtins_and_source() {
    let v = parse(seqwork_web::classify("g4ip"));
    assert_eq!(v["all_classified"], false);
    let bad: Vec<&str> = v["rules"].as_array().unwrap().iter().filter(|r| r["ok"] == false).map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(bad, ["Lp->"]);

    let src = seqwork_web::calculus_source("g3ip");
    assert!(!src.is_empty());
    let v = parse(seqwork_web::classify(&src));
    assert_eq!(v["all_classified"], true);
}

#[test]
fn errors_are_reported_as_json() {
    for s in [seqwork_web::decide("s5", "p"), seqwork_web::decide("ipc", "p &"), seqwork_web::classify("nope"), seqwork_web::interpolate("g4ip", "p & q")] {
        assert!(parse(s)["error"].is_string());
    }
}
