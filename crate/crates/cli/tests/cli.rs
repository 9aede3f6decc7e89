use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn myers(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_myers"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn sphere_thm22_holds() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "s.cfg",
        "manifold = sphere\nvariant = thm22\na = 0\nH = 1\n",
    );
    let o = myers(dir.path(), &["compare", "--config", "s.cfg", "--out", "grid.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("holds"));
    let (header, rows) = read_csv(&dir.path().join("grid.csv"));
    assert!(rows.len() > 100);
    let slack = column(&header, "slack");
    assert!(rows.iter().all(|r| r[slack].parse::<f64>().unwrap().abs() < 1e-8));
}

#[test]
fn hyperbolic_thm22_violates_the_hypothesis() {
    let dir = tempfile::tempdir().unwrap();
    let o = myers(
        dir.path(),
        &[
            "compare",
            "--set",
            "manifold=hyperbolic",
            "--set",
            "variant=thm22",
            "--set",
            "H=1",
        ],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("hypothesis_violated"));
}

#[test]
fn malformed_table_cites_its_line() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "phi.dat", "# r phi\n0.1 0.1\n0.2 0.2\n0.3 zero\n0.4 0.4\n");
    write(
        dir.path(),
        "t.cfg",
        "manifold = tabulated\nprofile_file = phi.dat\nvariant = thm21\n",
    );
    let o = myers(dir.path(), &["compare", "-c", "t.cfg", "--out", "x.csv"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("line 4"), "{err}");
    assert!(!dir.path().join("x.csv").exists());
}

#[test]
fn bad_config_value_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "b.cfg", "variant = thm21\ndelta = 0.1x\n");
    let o = myers(dir.path(), &["compare", "-c", "b.cfg"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("config line 2: `delta`"));
    write(dir.path(), "u.cfg", "variant = thm21\ndleta = 0.1\n");
    let o = myers(dir.path(), &["compare", "-c", "u.cfg"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown key `dleta`"));
}

#[test]
fn constants_closed_forms() {
    let dir = tempfile::tempdir().unwrap();
    let o = myers(
        dir.path(),
        &[
            "constants",
            "--set",
            "variant=C4",
            "--set",
            "n=3",
            "--set",
            "b=3",
            "--set",
            "r0=1",
            "--set",
            "a=0",
            "--out",
            "c.csv",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("16.0000000000"));
    let (header, rows) = read_csv(&dir.path().join("c.csv"));
    assert_eq!(rows[0][column(&header, "constant")].parse::<f64>().unwrap(), 16.0);
    assert!(rows[0][column(&header, "cross_check_delta")].parse::<f64>().unwrap() < 1e-6);

    let o = myers(
        dir.path(),
        &["constants", "--set", "variant=CGT", "--set", "r0=1", "--set", "nu=pi"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2.718281"));

    let o = myers(
        dir.path(),
        &[
            "constants",
            "--set",
            "variant=C1",
            "--set",
            "growth=constant",
            "--set",
            "eps1=0.25",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("0.2500000000"));
    assert!(out.contains("diverges"));
}

#[test]
fn constants_branch_violation_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = myers(dir.path(), &["constants", "--set", "variant=Wan", "--set", "b=1.5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn criterion_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    for variant in ["C1", "C2", "C3", "C4", "C5", "C6"] {
        let o = myers(
            dir.path(),
            &[
                "criterion",
                "--set",
                "manifold=euclidean",
                "--set",
                &format!("variant={variant}"),
                "--out",
                "e.csv",
            ],
        );
        assert_eq!(o.status.code(), Some(0), "{variant}: {}", stderr(&o));
        let (header, rows) = read_csv(&dir.path().join("e.csv"));
        assert_eq!(
            header,
            [
                "variant",
                "n",
                "delta",
                "a",
                "k",
                "b",
                "r0",
                "eps",
                "eps1",
                "C",
                "min_margin",
                "criterion_met",
                "known_compact",
                "conjugate_time",
                "notes"
            ]
        );
        assert_eq!(rows[0][11], "false");
    }

    write(
        dir.path(),
        "sphere.cfg",
        "manifold = sphere\nvariant = C1\ngrowth = power-law\nb = 2\nr0 = 4\neps = 4\ndelta = 0.1\neps1 = 0.01\n",
    );
    let o = myers(dir.path(), &["criterion", "-c", "sphere.cfg", "--out", "s.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("s.csv"));
    assert_eq!(rows[0][column(&header, "criterion_met")], "true");
    assert_eq!(rows[0][column(&header, "known_compact")], "true");
}

#[test]
fn ambrose_sphere_conjugate_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = myers(
        dir.path(),
        &[
            "ambrose",
            "--set",
            "manifold=sphere",
            "--set",
            "C=1",
            "--set",
            "alpha=2",
            "--set",
            "t_probe=3",
            "--out",
            "a.csv",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("a.csv"));
    let t: f64 = rows[0][column(&header, "conjugate_time")].parse().unwrap();
    assert!((t - std::f64::consts::PI).abs() < 1e-4);
    assert_eq!(rows[0][column(&header, "alarm")], "false");
}

const SWEEP: &str =
    "workflow = compare\nvariant = thm21\nmanifold = sphere\nn = 3\ndelta = 0.05, 0.1, 0.2\nH = 0.5, 1\n";

#[test]
fn sweep_rows_are_ordered_and_monotone_in_delta() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "sweep.cfg", SWEEP);
    let o = myers(
        dir.path(),
        &["sweep", "-c", "sweep.cfg", "--out", "sweep.csv", "--quiet"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let (header, rows) = read_csv(&dir.path().join("sweep.csv"));
    assert_eq!(rows.len(), 6);
    let (hc, dc, sc) = (
        column(&header, "H"),
        column(&header, "delta"),
        column(&header, "conclusion_slack"),
    );
    for chunk in rows.chunks(3) {
        assert!(chunk.iter().all(|r| r[hc] == chunk[0][hc]));
        let deltas: Vec<f64> = chunk.iter().map(|r| r[dc].parse().unwrap()).collect();
        assert_eq!(deltas, [0.05, 0.1, 0.2]);
        let slacks: Vec<f64> = chunk.iter().map(|r| r[sc].parse().unwrap()).collect();
        assert!(slacks.windows(2).all(|w| w[1] >= w[0]), "{slacks:?}");
    }
}

#[test]
fn sweep_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "sweep.cfg", SWEEP);
    let a = myers(dir.path(), &["sweep", "-c", "sweep.cfg", "--out", "a.csv"]);
    let b = myers(dir.path(), &["sweep", "-c", "sweep.cfg", "--out", "b.csv"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(
        std::fs::read(dir.path().join("a.csv")).unwrap(),
        std::fs::read(dir.path().join("b.csv")).unwrap()
    );
}

#[test]
fn empty_or_oversized_grids_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "e.cfg", "workflow = compare\nvariant = thm21\ndelta =\n");
    let o = myers(dir.path(), &["sweep", "-c", "e.cfg", "--out", "e.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!dir.path().join("e.csv").exists());

    let big: Vec<String> = (0..101).map(|i| format!("0.{i:03}")).collect();
    let list = big.join(", ");
    let text = format!("workflow = compare\nvariant = thm21\ndelta = {list}\nH = {list}\na = {list}\n");
    write(dir.path(), "big.cfg", &text);
    let o = myers(dir.path(), &["sweep", "-c", "big.cfg"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("exceeds"));
}

#[test]
fn sweep_requires_a_workflow() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "w.cfg", "variant = thm21\ndelta = 0.1, 0.2\n");
    let o = myers(dir.path(), &["sweep", "-c", "w.cfg"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn step_flag_overrides_the_config() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s.cfg", "variant = thm21\nH = 1\nstep = 0.1\n");
    let o = myers(
        dir.path(),
        &["compare", "-c", "s.cfg", "--step", "0.05", "--out", "g.csv"],
    );
    assert_eq!(o.status.code(), Some(0));
    let (header, rows) = read_csv(&dir.path().join("g.csv"));
    assert_eq!(rows[0][column(&header, "step")].parse::<f64>().unwrap(), 0.05);
}

#[test]
fn no_catalog_manifold_raises_the_alarm() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "alarm.cfg",
        "workflow = criterion\nmanifold = euclidean, hyperbolic\nvariant = C1, C2, C3, C4, C5, C6\nweight = zero\nb = 1.5, 3\n",
    );
    let o = myers(dir.path(), &["sweep", "-c", "alarm.cfg"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("0 alarms"));
}
