//! End-to-end tests for the external adapter subprocess protocol, using
//! small shell scripts as stand-in solvers.

use std::fs;
use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use descent_core::algebra::IntegerPolynomial;
use descent_core::descent::{solve, BackendChoice, CurveProblem, SolveOptions};
use descent_core::twists::adapter::request_line;
use descent_core::twists::{build_elliptic_twist, solve_twist_external, AdapterConfig, TwistCache};
use descent_core::Error;
use num_bigint::BigInt;
use tempfile::TempDir;

fn script(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, format!("#!/bin/sh\n{body}\n")).expect("write script");
    fs::set_permissions(&path, fs::Permissions::from_mode(0o755)).expect("chmod");
    path
}

fn cubic() -> IntegerPolynomial {
    IntegerPolynomial::from_i64(&[1, 1, 0, 1])
}

#[test]
fn adapter_answers_are_parsed_and_rescaled() {
    let dir = TempDir::new().unwrap();
    let path = script(
        dir.path(),
        "ok.sh",
        r#"cat > /dev/null
echo '{"points":[[62,5],[7,2]],"complete":true}'"#,
    );
    let eq = build_elliptic_twist(&cubic(), &BigInt::from(-31)).unwrap();
    let cfg = AdapterConfig::new(vec![path.display().to_string()]);
    let out = solve_twist_external(&eq, &cfg).unwrap();
    assert!(out.complete);
    assert_eq!(out.backend, "external");
    let xs: Vec<String> = out.x_candidates.iter().map(|x| x.to_string()).collect();
    assert_eq!(xs, ["-2", "7", "62"]);
}

#[test]
fn adapter_receives_the_documented_request_line() {
    let dir = TempDir::new().unwrap();
    let log = dir.path().join("requests.log");
    let path = script(
        dir.path(),
        "log.sh",
        r#"cat >> "$1"
echo '{"points":[],"complete":true}'"#,
    );
    let eq = build_elliptic_twist(&cubic(), &BigInt::from(-31)).unwrap();
    let cfg = AdapterConfig::new(vec![path.display().to_string(), log.display().to_string()]);
    solve_twist_external(&eq, &cfg).unwrap();
    let seen = fs::read_to_string(&log).unwrap();
    assert_eq!(seen.trim_end(), request_line(&eq).unwrap());
}

#[test]
fn slow_adapters_time_out() {
    let dir = TempDir::new().unwrap();
    let path = script(
        dir.path(),
        "slow.sh",
        r#"sleep 5
echo '{"points":[],"complete":true}'"#,
    );
    let eq = build_elliptic_twist(&cubic(), &BigInt::from(2)).unwrap();
    let cfg = AdapterConfig::with_timeout(
        vec![path.display().to_string()],
        Duration::from_millis(300),
    );
    let err = solve_twist_external(&eq, &cfg).unwrap_err();
    assert!(matches!(err, Error::AdapterTimeout(_)), "got {err:?}");
}

#[test]
fn garbage_output_is_a_protocol_error() {
    let dir = TempDir::new().unwrap();
    let path = script(dir.path(), "garbage.sh", "cat > /dev/null\necho hello world");
    let eq = build_elliptic_twist(&cubic(), &BigInt::from(2)).unwrap();
    let cfg = AdapterConfig::new(vec![path.display().to_string()]);
    let err = solve_twist_external(&eq, &cfg).unwrap_err();
    assert!(matches!(err, Error::AdapterProtocol(_)), "got {err:?}");
}

#[test]
fn adapter_that_exits_without_reading_is_a_protocol_error() {
    let dir = TempDir::new().unwrap();
    let path = script(dir.path(), "quit.sh", "exit 3");
    let eq = build_elliptic_twist(&cubic(), &BigInt::from(2)).unwrap();
    let cfg = AdapterConfig::new(vec![path.display().to_string()]);
    let err = solve_twist_external(&eq, &cfg).unwrap_err();
    assert!(matches!(err, Error::AdapterProtocol(_)), "got {err:?}");
}

#[test]
fn oversized_coordinates_round_trip_as_strings() {
    let dir = TempDir::new().unwrap();
    let big = "123456789012345678901234567890";
    let path = script(
        dir.path(),
        "big.sh",
        &format!(
            r#"cat > /dev/null
echo '{{"points":[["{big}","1"]],"complete":false}}'"#
        ),
    );
    let eq = build_elliptic_twist(&cubic(), &BigInt::from(1)).unwrap();
    let cfg = AdapterConfig::new(vec![path.display().to_string()]);
    let out = solve_twist_external(&eq, &cfg).unwrap();
    assert!(!out.complete);
    assert_eq!(out.x_candidates, [big.parse::<BigInt>().unwrap()]);
}

#[test]
fn missing_adapter_binary_is_unavailable() {
    let eq = build_elliptic_twist(&cubic(), &BigInt::from(2)).unwrap();
    let cfg = AdapterConfig::new(vec!["/nonexistent/adapter-xyz".to_string()]);
    let err = solve_twist_external(&eq, &cfg).unwrap_err();
    assert!(matches!(err, Error::AdapterUnavailable(_)), "got {err:?}");
}

#[test]
fn descent_with_external_backend_calls_the_adapter_once_per_twist() {
    let dir = TempDir::new().unwrap();
    let log = dir.path().join("calls.log");
    let path = script(
        dir.path(),
        "count.sh",
        r#"cat >> "$1"
echo '{"points":[],"complete":true}'"#,
    );
    let cache_path = dir.path().join("cache.json");
    let problem = CurveProblem::new(
        2,
        cubic(),
        IntegerPolynomial::from_i64(&[1, 0, 0, 0, 1]),
    );
    let adapter = Some(AdapterConfig::new(vec![
        path.display().to_string(),
        log.display().to_string(),
    ]));

    let run = |expect_calls: usize| {
        let cache = Arc::new(Mutex::new(TwistCache::open(&cache_path)));
        let opts = SolveOptions {
            backend: BackendChoice::External,
            adapter: adapter.clone(),
            cache: Some(cache.clone()),
            ..SolveOptions::default()
        };
        let report = solve(&problem, &opts).expect("solve");
        assert!(report.complete, "adapter certified every twist complete");
        cache.lock().unwrap().flush().expect("flush");
        let calls = fs::read_to_string(&log).unwrap_or_default().lines().count();
        assert_eq!(calls, expect_calls);
        report
    };

    let first = run(first_twist_count());
    assert_eq!(first.twists.len(), first_twist_count());
    let second = run(first_twist_count());
    assert_eq!(second.points, first.points);
    let hits = second
        .twists
        .iter()
        .filter(|t| t.diagnostics.iter().any(|d| d.contains("cache hit")))
        .count();
    assert_eq!(hits, first_twist_count());
}

fn first_twist_count() -> usize {
    4
}
