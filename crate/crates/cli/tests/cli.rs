use std::fs;
use std::process::{Command, Output};

fn precax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_precax")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn line<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
}

#[test]
fn measure_on_corpus_entries() {
    let o = precax(&["measure", "--measure", "one-align-etc", "--model", "corpus:fig5a_flower", "--log", "corpus:fig5_log"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(line(&stdout(&o), "value"), Some("0.3333"));

    let o = precax(&["measure", "--measure", "pcc", "--k", "2", "--model", "corpus:fig7a_loop", "--log", "corpus:fig7_log"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(line(&stdout(&o), "value"), Some("0.6000"));
}

#[test]
fn measure_exit_codes() {
    let o = precax(&["measure", "--measure", "etc", "--model", "/nonexistent/model.net", "--log", "corpus:fig5_log"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot read model"));

    let o = precax(&["measure", "--measure", "bogus", "--model", "corpus:fig4_model", "--log", "corpus:fig4_log_l1"]);
    assert_eq!(o.status.code(), Some(1));

    // Greco on a looping model is 0; advanced BA on a sequence is undefined.
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("seq.net");
    fs::write(
        &net,
        "place i init=1\nplace p\nplace q\nplace o\ntrans ta label=a\ntrans tb label=b\ntrans tc label=c\n\
         arc i ta\narc ta p\narc p tb\narc tb q\narc q tc\narc tc o\nfinal o=1\n",
    )
    .unwrap();
    let log = dir.path().join("abc.log");
    fs::write(&log, "1x a,b,c\n").unwrap();
    let o = precax(&["measure", "--measure", "advanced-ba", "--model", net.to_str().unwrap(), "--log", log.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(line(&stdout(&o), "value"), Some("undefined"));
    let o = precax(&["measure", "--measure", "greco", "--model", net.to_str().unwrap(), "--log", log.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(line(&stdout(&o), "value"), Some("1.0000"));
}

#[test]
fn state_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_precax"))
        .args(["measure", "--measure", "etc", "--model", "corpus:fig6_m1", "--log", "corpus:fig6_log_template"])
        .env("PRECAX_STATE_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn axiom_verdicts_and_exit_codes() {
    let o = precax(&[
        "axiom", "A5", "--measure", "one-align-etc", "--log1", "corpus:fig4_log_l1", "--log2", "corpus:fig4_log_l2", "--model",
        "corpus:fig4_model",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert_eq!(line(&out, "verdict"), Some("violated"));
    assert!(line(&out, "witness.l1").unwrap().starts_with("0.7500"));
    assert!(line(&out, "witness.l2").unwrap().starts_with("0.7143"));

    let o = precax(&[
        "axiom", "A2", "--measure", "pcc", "--model1", "corpus:fig7b_unrolled", "--model2", "corpus:fig7a_loop", "--log",
        "corpus:fig7_log",
    ]);
    assert_eq!(o.status.code(), Some(3));

    let o = precax(&["axiom", "A3", "--measure", "pcc", "--model", "corpus:fig8_flower", "--log", "corpus:fig8_log_l1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(line(&stdout(&o), "verdict"), Some("hypothesis-not-met"));

    let o = precax(&["axiom", "A4", "--measure", "etc", "--model1", "corpus:fig4_model", "--model2", "corpus:fig4_model", "--log", "corpus:fig4_log_l1"]);
    assert_eq!(o.status.code(), Some(0));

    let o = precax(&["axiom", "A2", "--measure", "etc", "--log", "corpus:fig4_log_l1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn records_echo_the_configuration() {
    let o = precax(&[
        "measure", "--measure", "pcc", "--k", "3", "--model", "corpus:fig8_flower", "--log", "corpus:fig8_log_l1", "--format",
        "records",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["k"], 3);
    assert_eq!(v["config"]["model"], "corpus:fig8_flower");
    assert_eq!(v["report"]["value_4dp"], "0.3125");
    assert_eq!(v["report"]["exact"], "5/16");
}

#[test]
fn text_output_is_stable() {
    let args = ["measure", "--measure", "one-align-etc", "--model", "corpus:fig5b_flower_tau", "--log", "corpus:fig5_log"];
    let first = precax(&args).stdout;
    for _ in 0..3 {
        assert_eq!(precax(&args).stdout, first);
    }
}

#[test]
fn list_and_export() {
    let o = precax(&["list"]);
    assert_eq!(stdout(&o).lines().count(), 18);
    let dir = tempfile::tempdir().unwrap();
    let o = precax(&["export", "--out", dir.path().to_str().unwrap(), "corpus:fig6_m2", "fig4_log_l1"]);
    assert_eq!(o.status.code(), Some(0));
    let net = dir.path().join("fig6_m2.net");
    let o = precax(&["measure", "--measure", "etc", "--model", net.to_str().unwrap(), "--log", "corpus:fig6_log_template"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("fig4_log_l1.log").exists());
}

#[test]
fn reproduce_paper_reports_every_section() {
    let o = precax(&["reproduce-paper", "--seeds", "4"]);
    let out = stdout(&o);
    assert!(out.contains("# values"));
    assert!(out.contains("# negative-event ordering"));
    assert!(out.contains("# axiom overview"));
    let overall = out.lines().last().unwrap();
    assert_eq!(o.status.code(), Some(if overall.ends_with("PASS") { 0 } else { 1 }));
}
