use std::fs;
use std::path::{Path, PathBuf};

use landau_paraxial::cli::{run, EXIT_ACCEPTANCE, EXIT_GUARD, EXIT_OK, EXIT_USAGE};
use landau_paraxial::config::RunConfig;
use landau_paraxial::grid::read_field_dump;
use landau_paraxial::modes::Carrier;
use landau_paraxial::validate::criterion_stationarity;
use tempfile::TempDir;

struct Run {
    dir: TempDir,
    code: i32,
}

impl Run {
    fn out(&self) -> PathBuf {
        self.dir.path().join("out")
    }

    fn read(&self, name: &str) -> String {
        fs::read_to_string(self.out().join(name)).unwrap()
    }
}

fn invoke(cmd: &str, config: &str) -> Run {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.kv");
    fs::write(&cfg, config).unwrap();
    let out = dir.path().join("out");
    let code = run([
        "landau-paraxial",
        cmd,
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    Run { dir, code }
}

/// Data rows of a CSV with `#` comment lines and one header line.
fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn spectrum_analytic_column_is_q_times_b() {
    let r = invoke("spectrum", "ell = 0\ngrid.n_points = 4096\n");
    assert_eq!(r.code, EXIT_OK);
    let csv = r.read("spectrum.csv");
    assert!(csv.starts_with("# generated-by landau-paraxial v"));
    let analytic: Vec<f64> = rows(&csv).iter().map(|row| row[2]).collect();
    assert_eq!(analytic, vec![0.0, 0.02, 0.04, 0.06, 0.08]);
}

#[test]
fn spectrum_flags_and_tolerance() {
    let r = invoke("spectrum", "b = 1.0\nell = 0\n");
    assert!(r
        .read("spectrum.csv")
        .ends_with("# spacing_strictly_decreasing=true\n"));
    // 5 levels at N = 2048 miss 1e-5 by about a factor of two
    assert_eq!(r.code, EXIT_ACCEPTANCE);
    let r = invoke("spectrum", "b = 0\nfree.w0 = 20\n");
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn config_errors_exit_64() {
    assert_eq!(invoke("spectrum", "bfield=\n").code, EXIT_USAGE);
    assert_eq!(invoke("validate", "b = -1\n").code, EXIT_USAGE);
    assert_eq!(invoke("mode", "b = 0\n").code, EXIT_USAGE);
    assert_eq!(invoke("propagate", "prop.n_steps = 0\n").code, EXIT_USAGE);
    assert_eq!(run(["landau-paraxial", "mode"]), EXIT_USAGE);
    assert_eq!(
        run(["landau-paraxial", "mode", "--config", "/nonexistent/run.kv"]),
        EXIT_USAGE
    );
    assert_eq!(
        run(["landau-paraxial", "validate", "--jobs", "0"]),
        EXIT_USAGE
    );
    assert_eq!(run(["landau-paraxial", "frobnicate"]), EXIT_USAGE);
}

#[test]
fn mode_dump_and_physicality() {
    let r = invoke("mode", "ell = -1\n");
    assert_eq!(r.code, EXIT_OK);
    let (field, z) =
        read_field_dump(fs::read(r.out().join("mode.dump")).unwrap().as_slice()).unwrap();
    assert_eq!(field.ell(), -1);
    assert_eq!(z, None);
    assert_eq!(field.grid().len(), 2048);

    let r = invoke("mode", "mode = fw\nb = 0\nfree.w0 = 5\nn = 1\nell = 2\n");
    assert_eq!(r.code, EXIT_OK);
    let (field, _) =
        read_field_dump(fs::read(r.out().join("mode.dump")).unwrap().as_slice()).unwrap();
    assert_eq!(field.carrier, Carrier::Fw);
    assert_eq!(field.grid().r_max(), 40.0);
}

#[test]
fn propagate_landau_eigenmode() {
    let r = invoke("propagate", "");
    assert_eq!(r.code, EXIT_OK);
    let rec = rows(&r.read("record.csv"));
    assert_eq!(rec.len(), 2001);
    let last = &rec[2000];
    assert_eq!(last[0], 100.0);
    assert!((last[2].hypot(last[3]) - 1.0).abs() < 1e-6);
    let snaps: Vec<_> = fs::read_dir(r.out())
        .unwrap()
        .filter_map(|e| {
            let name = e.unwrap().file_name().into_string().unwrap();
            name.starts_with("snapshot_").then_some(name)
        })
        .collect();
    assert_eq!(snaps.len(), 5);
}

fn free_config(r_max_w0: f64) -> String {
    format!("b = 0\nfree.w0 = 20\nell = 0\nprop.z_max = 400\nprop.n_steps = 800\ngrid.r_max_wm = {r_max_w0}\n")
}

#[test]
fn free_beam_wall_guard() {
    let r = invoke("propagate", &free_config(4.0));
    assert_eq!(r.code, EXIT_GUARD);
    let r = invoke("propagate", &free_config(24.0));
    assert_eq!(r.code, EXIT_OK);
    // a box of 8 w0 only crosses the warning level
    let r = invoke("propagate", &free_config(8.0));
    assert_eq!(r.code, EXIT_OK);
}

#[test]
fn gouy_examples() {
    for cfg in ["", "ell = 0\n", "particle = positron\nsz = 0.5\nell = -1\n"] {
        let r = invoke("gouy", cfg);
        assert_eq!(r.code, EXIT_OK, "{cfg:?}");
        let text = r.read("gouy.csv");
        let footer = text.lines().last().unwrap();
        assert!(footer.starts_with("# slope="), "{footer}");
    }
    let r = invoke("gouy", &free_config(24.0));
    assert_eq!(r.code, EXIT_OK);
}

#[test]
fn coarse_steps_break_the_phase_law() {
    let cfg = RunConfig {
        n_steps: 20,
        ..RunConfig::default()
    };
    let outcome = criterion_stationarity(&cfg);
    assert!(!outcome.passed());
    assert!(outcome
        .checks
        .iter()
        .filter(|c| c.label.ends_with("slope rel err"))
        .all(|c| !c.passed));
}

#[test]
fn identical_runs_identical_bytes() {
    let a = invoke("gouy", "");
    let b = invoke("gouy", "");
    let read = |r: &Run, n: &str| fs::read(Path::new(&r.out()).join(n)).unwrap();
    assert_eq!(read(&a, "gouy.csv"), read(&b, "gouy.csv"));
}

#[test]
fn shipped_configs_run() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    for (name, cmd) in [
        ("landau_vortex.kv", "gouy"),
        ("spectrum.kv", "spectrum"),
        ("free_gaussian.kv", "gouy"),
    ] {
        let text = fs::read_to_string(dir.join(name)).unwrap();
        RunConfig::parse(&text).unwrap();
        assert_eq!(invoke(cmd, &text).code, EXIT_OK, "{name}");
    }
}
