use std::path::Path;
use std::process::{Command, Output};

fn weylpath(args: &[&str], dir: &Path, config: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_weylpath"));
    cmd.args(args).arg("--out").arg(dir);
    if let Some(text) = config {
        let path = dir.join("run.cfg");
        std::fs::write(&path, text).unwrap();
        cmd.arg("--config").arg(path);
    }
    cmd.output().unwrap()
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn weyl_check_sixteen_with_qbits() {
    let dir = tempfile::tempdir().unwrap();
    let o = weylpath(
        &["weyl-check", "--dim", "16", "--qbits", "4"],
        dir.path(),
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    for r in rows(&dir.path().join("weyl_check.csv")) {
        if r[2] == "1" {
            assert!(r[1].parse::<f64>().unwrap() < 1e-12, "{r:?}");
        }
    }
    assert!(stdout(&o).contains("qbit U^n"));
}

#[test]
fn weyl_check_two_states_is_pauli() {
    let dir = tempfile::tempdir().unwrap();
    let o = weylpath(&["weyl-check", "--dim", "2"], dir.path(), None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("U - sigma_1") && text.contains("V - sigma_3"));
}

#[test]
fn weyl_check_rejects_one_state() {
    let dir = tempfile::tempdir().unwrap();
    let o = weylpath(&["weyl-check", "--dim", "1"], dir.path(), None);
    assert_eq!(o.status.code(), Some(2));
    let o = weylpath(
        &["weyl-check", "--dim", "12", "--qbits", "3"],
        dir.path(),
        None,
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scatter_without_potential_has_zero_t() {
    let dir = tempfile::tempdir().unwrap();
    let o = weylpath(
        &["scatter"],
        dir.path(),
        Some("k = 150\ntrotter_n = 50\ntau = 4\nlambda = 0\n"),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    for r in rows(&dir.path().join("scatter_half_shell.csv")) {
        assert!(r[1].parse::<f64>().unwrap().abs() < 1e-12);
        assert!(r[2].parse::<f64>().unwrap().abs() < 1e-12);
    }
    let stats = rows(&dir.path().join("scatter_stats.csv"));
    assert_eq!(stats[1][0], "free_zero");
    assert!((stats[1][2].parse::<f64>().unwrap() - 2.5).abs() < 1e-5);
}

#[test]
fn scatter_wrap_around_is_a_guard() {
    let dir = tempfile::tempdir().unwrap();
    let o = weylpath(&["scatter"], dir.path(), Some("k = 150\ntau = 12\n"));
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("wraps around"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for text in ["k = many\n", "tau 7\n", "lamda = 0.5\n", "k = 0\n"] {
        let o = weylpath(&["scatter"], dir.path(), Some(text));
        assert_eq!(o.status.code(), Some(2), "{text}");
    }
    let o = Command::new(env!("CARGO_BIN_EXE_weylpath"))
        .args(["wavelet", "--config", "/nonexistent/run.cfg"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn wavelet_default_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = weylpath(&["wavelet"], dir.path(), None);
    assert_eq!(o.status.code(), Some(0));
    let gamma = rows(&dir.path().join("wavelet_gamma.csv"));
    let row = gamma
        .iter()
        .find(|r| r[..4] == ["0", "0", "1", "1"])
        .unwrap();
    assert!((row[4].parse::<f64>().unwrap() - 0.0890895).abs() < 1e-5);
    let h = rows(&dir.path().join("wavelet_h.csv"));
    assert_eq!(h.len(), 6);
}

#[test]
fn fields_without_steps_echo_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let o = weylpath(&["fields"], dir.path(), Some("k = 10\ntrotter_n = 0\n"));
    assert_eq!(o.status.code(), Some(0));
    for r in rows(&dir.path().join("fields_grid.csv")) {
        assert_eq!(r[2], r[4]);
        assert_eq!(r[3], r[5]);
    }
}

#[test]
fn fields_demo_grows_an_imaginary_part() {
    let dir = tempfile::tempdir().unwrap();
    let o = weylpath(&["fields"], dir.path(), None);
    assert_eq!(o.status.code(), Some(0));
    let grid = rows(&dir.path().join("fields_grid.csv"));
    assert_eq!(grid.len(), 41 * 41);
    let im0 = grid
        .iter()
        .map(|r| r[3].parse::<f64>().unwrap().abs())
        .fold(0.0, f64::max);
    let im = grid
        .iter()
        .map(|r| r[5].parse::<f64>().unwrap().abs())
        .fold(0.0, f64::max);
    assert_eq!(im0, 0.0);
    assert!(im > 1e-3);
    let slice = rows(&dir.path().join("fields_slice.csv"));
    assert_eq!(slice.len(), 2 * 41);
}

#[test]
fn fields_size_guard() {
    let dir = tempfile::tempdir().unwrap();
    let o = weylpath(&["fields"], dir.path(), Some("modes = 0,1,2,3,4\n"));
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bruteforce_random_symbol() {
    let dir = tempfile::tempdir().unwrap();
    let o = weylpath(
        &["bruteforce", "--seed", "7"],
        dir.path(),
        Some("dim = 4\nhamiltonian = random\n"),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(rows(&dir.path().join("bruteforce.csv")).len(), 4);
    let o = weylpath(&["bruteforce"], dir.path(), Some("dim = 11\nsteps = 4\n"));
    assert_eq!(o.status.code(), Some(3));
}
