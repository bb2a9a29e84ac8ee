use std::process::Command;

fn qkdrate(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qkdrate")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn sweep_csv_header_is_exact() {
    let (code, out, _) = qkdrate(&["sweep", "--preset", "standard", "--grid", "0:100:5"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "length_km,secret_rate_bits_per_pulse,bits_per_second,Q,E,omega,e1"
    );
    assert_eq!(lines.count(), 5);
}

#[test]
fn set_overrides_change_the_result() {
    let (_, base, _) = qkdrate(&["rate", "--preset", "standard"]);
    let (_, dark, _) = qkdrate(&["rate", "--preset", "standard", "--set", "p_dark=1.7e-7"]);
    assert_ne!(base, dark);
    let (_, same, _) = qkdrate(&["rate", "--preset", "standard", "--set", "hardware.detector.dark_prob=1.7e-7"]);
    assert_eq!(dark, same);
}

#[test]
fn json_meta_echoes_configuration() {
    let (code, out, _) = qkdrate(&["rate", "--preset", "gys", "--protocol", "bb84", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["meta"]["protocol"]["kind"], "bb84");
    assert_eq!(v["meta"]["hardware"]["detector"]["dark_prob"], 8e-7);
    assert!(v["points"][0]["E"].is_number());
}

#[test]
fn bad_inputs_exit_with_code_two() {
    let (code, _, err) = qkdrate(&["rate", "--preset", "nope"]);
    assert_eq!(code, 2);
    assert!(err.contains("gys"));
    let (code, _, err) = qkdrate(&["rate", "--set", "eta_det=-0.5"]);
    assert_eq!(code, 2);
    assert!(err.contains("hardware.detector.efficiency"));
}

#[test]
fn never_secure_exits_nonzero() {
    let (code, _, err) = qkdrate(&["max-distance", "--set", "e_det=0.2"]);
    assert_eq!(code, 1);
    assert!(err.contains("never secure"));
}

#[test]
fn simulate_writes_transcript() {
    let dir = std::env::temp_dir().join(format!("qkdrate-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.csv");
    let (code, out, _) = qkdrate(&[
        "simulate", "--preset", "gys", "--set", "length=0", "--pulses", "2000", "--seed", "3",
        "--transcript", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("pulses,clicks,conclusive,errors,gain,qber,sift_fraction"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2001);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn tmd_invert_reads_click_records() {
    let dir = std::env::temp_dir().join(format!("qkdrate-tmd-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("clicks.txt");
    let records: String = (0..5000).map(|i| format!("{}\n", [0, 0, 0, 1, 1, 2][i % 6])).collect();
    std::fs::write(&path, records).unwrap();
    let (code, out, err) = qkdrate(&["tmd-invert", "--input", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rec: Vec<f64> = serde_json::from_value(v["subsets"][0]["recovered"].clone()).unwrap();
    assert!((rec.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn presets_json_round_trips() {
    let (code, out, _) = qkdrate(&["presets", "--format", "json"]);
    assert_eq!(code, 0);
    let list: Vec<qkdrate::ScenarioPreset> = serde_json::from_str(&out).unwrap();
    assert_eq!(list, qkdrate::presets());
}
