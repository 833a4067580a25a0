use std::process::{Command, Output};

use goursat::cli::{CsvClassRow, OutputRecord, Payload};

fn goursat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_goursat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(goursat(&["derive", "GGSTSGS"]).status.code(), Some(0));
    assert_eq!(goursat(&["derive", "GGT"]).status.code(), Some(2));
    assert_eq!(goursat(&["trace", "G"]).status.code(), Some(2));
    assert_eq!(goursat(&["enumerate", "1"]).status.code(), Some(2));
    assert_eq!(goursat(&["spectrum", "0"]).status.code(), Some(2));
    assert_eq!(goursat(&["verify", "6"]).status.code(), Some(0));
    assert_eq!(goursat(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn parse_diagnostic_on_stderr() {
    let o = goursat(&["derive", "GGT"]);
    assert!(o.stdout.is_empty());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("forbidden factor GT ending at position 2"), "{err}");
}

#[test]
fn byte_deterministic() {
    let cases: &[&[&str]] = &[
        &["--format", "structured", "enumerate", "6", "--report"],
        &["--format", "csv", "enumerate", "7", "--report"],
        &["--format", "structured", "spectrum", "8"],
        &["--jobs", "3", "verify", "8"],
        &["trace", "GGSTSGS"],
    ];
    for args in cases {
        let a = goursat(args);
        let b = goursat(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    // worker count does not leak into the output
    assert_eq!(
        goursat(&["--jobs", "1", "--format", "structured", "spectrum", "9"]).stdout,
        goursat(&["--jobs", "4", "--format", "structured", "spectrum", "9"]).stdout
    );
}

#[test]
fn structured_round_trip() {
    let cases: &[&[&str]] = &[
        &["--format", "structured", "derive", "GGSTSGS"],
        &["--format", "structured", "trace", "GGSTSGS"],
        &["--format", "structured", "enumerate", "5", "--report"],
        &["--format", "structured", "enumerate", "9", "--count-only"],
        &["--format", "structured", "verify", "5"],
        &["--format", "structured", "spectrum", "6"],
        &["--format", "structured", "report", "GGGSSTTG"],
    ];
    for args in cases {
        let text = stdout(&goursat(args));
        let rec: OutputRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(rec.schema_version, "1");
        assert_eq!(format!("{}\n", rec.to_json()), text, "{args:?}");
    }
}

#[test]
fn structured_spectrum_payload() {
    let text = stdout(&goursat(&["--format", "structured", "spectrum", "6"]));
    let rec: OutputRecord = serde_json::from_str(&text).unwrap();
    let Payload::Spectrum(s) = rec.payload else {
        panic!("expected a spectrum payload");
    };
    assert_eq!((s.min.as_str(), s.max.as_str()), ("7", "21"));
    assert!(s.missing.iter().any(|m| m == "20"));
}

#[test]
fn csv_round_trip() {
    let text = stdout(&goursat(&["--format", "csv", "enumerate", "6", "--report"]));
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        vec!["word", "r", "s", "q", "codim", "derived", "degree"]
    );
    let rows: Vec<CsvClassRow> = rdr.deserialize().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 34);
    assert_eq!(rows[0].word, "GGGGGG");
    assert_eq!((rows[0].s.as_str(), rows[0].q.as_str()), ("", ""));

    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r).unwrap();
    }
    assert_eq!(String::from_utf8(w.into_inner().unwrap()).unwrap(), text);
}

#[test]
fn enumerate_count_line() {
    let text = stdout(&goursat(&["enumerate", "7", "--report"]));
    assert_eq!(text.lines().filter(|l| l.starts_with("GG")).count(), 89);
    assert_eq!(text.lines().last(), Some("count: 89"));
    assert_eq!(stdout(&goursat(&["enumerate", "12", "--count-only"])), "10946\n");
}

#[test]
fn report_plain_value_rows() {
    let text = stdout(&goursat(&["report", "GGSTSGS"]));
    assert!(text.contains("values:\n  1\n  2 (1 2 5)\nmultiplicities: 2 2 2 1\n"), "{text}");
    assert!(text.contains("params: s=2 k=(0,0,1) l=(0,1,0,2) n=(1) q=1\n"));
}
