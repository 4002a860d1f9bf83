use std::process::{Command, Output};

fn thue(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thue"))
        .args(args)
        .env_remove("THUE_SHARDS")
        .env_remove("THUE_FORMAT")
        .output()
        .expect("run thue")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn kv<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
}

#[test]
fn analyze_sum_of_cubes() {
    let o = thue(&["analyze", "3: 1 0 0 1", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(kv(&s, "discriminant"), Some("-27"));
    assert_eq!(kv(&s, "content"), Some("1"));
    assert_eq!(kv(&s, "c_F(7)"), Some("3"));
    assert_eq!(kv(&s, "m(F)"), Some("7"));
    assert_eq!(kv(&s, "theorem1_hypothesis"), Some("true"));

    let s = stdout(&thue(&["analyze", "3: 1 0 0 1", "21"]));
    assert_eq!(kv(&s, "theorem1_hypothesis"), Some("false"));
    assert_eq!(kv(&s, "m(F)"), Some("7"));
}

#[test]
fn analyze_reports_local_obstruction() {
    let s = stdout(&thue(&["analyze", "2: 1 0 1", "6"]));
    assert_eq!(kv(&s, "c_F(m)"), Some("0"));
    assert!(kv(&s, "notice").unwrap().contains("local obstruction"));
}

#[test]
fn solve_examples() {
    let o = thue(&["--format", "csv", "solve", "3: 1 0 0 1", "7", "eq"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().skip(1).collect();
    assert_eq!(s.lines().next(), Some("x,y,value,provenance,norm_sq"));
    assert_eq!(rows, ["-2,1,-7,brute,5", "-1,2,7,brute,5", "1,-2,-7,brute,5", "2,-1,7,brute,5"]);

    let o = thue(&["--format", "csv", "solve", "3: 1 0 0 -2", "6", "leq"]);
    assert!(stdout(&o).lines().skip(1).count() >= 12);
    assert!(String::from_utf8_lossy(&o.stderr).contains("complete=false"));

    let o = thue(&["--radius", "0", "solve", "3: 1 0 0 1", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
}

#[test]
fn verify_cover() {
    let o = thue(&["verify", "3: 1 0 0 1", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(kv(&s, "covered"), Some("true"));
    let mut counts: Vec<&str> = kv(&s, "solution_counts").unwrap().split(' ').collect();
    counts.sort_unstable();
    assert_eq!(counts, ["0", "2", "2"]);
}

#[test]
fn bounds_theorem2_spot_value() {
    let o = thue(&["bounds", "theorem2", "--d", "3", "--A", "625", "--m", "1000000"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = kv(&stdout(&o), "value").unwrap().parse().unwrap();
    assert!((v - 347.01).abs() <= 0.05);
}

#[test]
fn census_rows_within_bound() {
    let o = thue(&["--format", "csv", "census", "--from", "100", "--to", "200", "--delta", "0.25"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let rows: Vec<Vec<&str>> = s.lines().skip(1).filter(|l| !l.starts_with('#')).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 101);
    for r in &rows {
        let (prop, bound): (f64, f64) = (r[4].parse().unwrap(), r[5].parse().unwrap());
        assert!(prop <= bound, "{r:?}");
    }
    assert_eq!(&rows[1][..4], ["101", "1/4", "102", "12"]);
}

#[test]
fn exit_codes() {
    // side condition B >= 5^(2d) fails
    assert_eq!(thue(&["bounds", "proposition", "--d", "3", "--m", "100", "--B", "5"]).status.code(), Some(2));
    // hypothesis of the threshold: degree below 5
    assert_eq!(thue(&["bounds", "threshold", "3: 1 0 0 1", "--eps", "0.5"]).status.code(), Some(2));
    assert_eq!(thue(&["--point-budget", "10", "solve", "3: 1 0 0 1", "7"]).status.code(), Some(3));
    assert_eq!(thue(&["analyze", "3: 1 0 0", "7"]).status.code(), Some(1));
    assert_eq!(thue(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(thue(&["--help"]).status.code(), Some(0));
}

#[test]
fn exceptional_point_verdicts() {
    let s = stdout(&thue(&["exceptional", "3: 1 0 0 -2", "--eps", "1", "--point", "5,4"]));
    assert!(s.contains("exceptional=false"), "{s}");
    let s = stdout(&thue(&["exceptional", "3: 1 0 0 -2", "--eps", "0.9", "--point", "5,4"]));
    assert!(s.contains("exceptional=true"), "{s}");
}

#[test]
fn shard_count_does_not_change_output() {
    let runs: [&[&str]; 3] = [
        &["census", "--from", "300", "--to", "420", "--delta", "1/3"],
        &["solve", "3: 1 0 0 -2", "6", "leq"],
        &["--format", "csv", "solve", "4: 1 0 0 1 1", "5000", "leq"],
    ];
    for args in runs {
        let one = thue(&[&["--shards", "1"], args].concat());
        for k in ["2", "5"] {
            let many = thue(&[&["--shards", k], args].concat());
            assert_eq!(one.stdout, many.stdout, "{args:?} with {k} shards");
            assert_eq!(one.stderr, many.stderr);
            assert_eq!(one.status.code(), many.status.code());
        }
    }
}
