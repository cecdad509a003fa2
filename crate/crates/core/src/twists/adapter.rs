//! Subprocess adapter for twist kinds the library does not solve
//! exactly on its own.
//!
//! One request is one JSON object on one line, written to the
//! adapter's standard input; the adapter answers with one JSON object
//! on its standard output and exits.  Integers beyond 64 bits travel
//! as decimal strings.  Every request spawns a fresh subprocess.

use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::process::{Child, Command, Stdio};
use std::sync::mpsc;
use std::time::Duration;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::Value;

use crate::twists::{TwistEquation, TwistKind, TwistOutcome};
use crate::{Error, Result};

/// How to reach the external solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdapterConfig {
    /// Program and arguments; the request line goes to its stdin.
    pub command: Vec<String>,
    pub timeout: Duration,
}

impl AdapterConfig {
    pub fn new(command: Vec<String>) -> Self {
        AdapterConfig {
            command,
            timeout: Duration::from_secs(120),
        }
    }

    pub fn with_timeout(command: Vec<String>, timeout: Duration) -> Self {
        AdapterConfig { command, timeout }
    }
}

fn json_int(n: &BigInt) -> String {
    if i64::try_from(n).is_ok() {
        n.to_string()
    } else {
        format!("\"{n}\"")
    }
}

/// The canonical request line for a twist, also used as its cache
/// key.  Errors for kinds with no wire form.
pub fn request_line(eq: &TwistEquation) -> Result<String> {
    match &eq.kind {
        TwistKind::EllipticCubic { a2, a4, a6 } => Ok(format!(
            "{{\"kind\":\"elliptic\",\"a1\":0,\"a2\":{},\"a3\":0,\"a4\":{},\"a6\":{}}}",
            json_int(a2),
            json_int(a4),
            json_int(a6)
        )),
        TwistKind::BinomialThue { lead, constant } => Ok(format!(
            "{{\"kind\":\"thue\",\"p\":{},\"lhs_coeff\":{},\"rhs\":[{},{}]}}",
            eq.p,
            json_int(&eq.d),
            json_int(lead),
            json_int(constant)
        )),
        other => Err(Error::UnsupportedShape(format!(
            "no adapter request form for {} twists",
            other.name()
        ))),
    }
}

fn parse_int(value: &Value) -> Result<BigInt> {
    if let Some(n) = value.as_i64() {
        return Ok(BigInt::from(n));
    }
    if let Some(n) = value.as_u64() {
        return Ok(BigInt::from(n));
    }
    if let Some(s) = value.as_str() {
        return s
            .trim()
            .parse::<BigInt>()
            .map_err(|e| Error::AdapterProtocol(format!("bad integer string {s:?}: {e}")));
    }
    Err(Error::AdapterProtocol(format!(
        "coordinate {value} is not an integer or decimal string"
    )))
}

/// Turns the adapter's reply into a twist outcome.
///
/// Points on the associated elliptic model contribute both scalings
/// of their abscissa; the descent engine's final verification keeps
/// only the genuine ones.
pub fn parse_response(output: &str, eq: &TwistEquation, source: &str) -> Result<TwistOutcome> {
    let line = output
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .ok_or_else(|| Error::AdapterProtocol("empty response".into()))?;
    let value: Value = serde_json::from_str(line)
        .map_err(|e| Error::AdapterProtocol(format!("invalid JSON ({e}): {line}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::AdapterProtocol(format!("response is not an object: {line}")))?;
    let points = obj
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::AdapterProtocol(format!("missing points array: {line}")))?;
    let complete = obj
        .get("complete")
        .and_then(Value::as_bool)
        .ok_or_else(|| Error::AdapterProtocol(format!("missing complete flag: {line}")))?;

    let mut xs = BTreeSet::new();
    for point in points {
        let pair = point
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::AdapterProtocol(format!("point {point} is not a pair")))?;
        let a = parse_int(&pair[0])?;
        parse_int(&pair[1])?;
        match eq.kind {
            TwistKind::EllipticCubic { .. } => {
                if (&a % &eq.d).is_zero() {
                    xs.insert(&a / &eq.d);
                }
                xs.insert(a);
            }
            _ => {
                xs.insert(a);
            }
        }
    }

    let diag = format!(
        "adapter {source} returned {} points, complete = {complete}",
        points.len()
    );
    Ok(TwistOutcome {
        twist: eq.clone(),
        x_candidates: xs.into_iter().collect(),
        complete,
        backend: "external".into(),
        diagnostics: vec![diag],
    })
}

fn kill_and_reap(child: &mut Child) {
    let _ = child.kill();
    let _ = child.wait();
}

/// Sends one twist to the configured adapter and parses its reply.
pub fn solve_twist_external(eq: &TwistEquation, cfg: &AdapterConfig) -> Result<TwistOutcome> {
    let request = request_line(eq)?;
    let program = cfg
        .command
        .first()
        .ok_or_else(|| Error::AdapterUnavailable("empty adapter command".into()))?;

    let mut child = Command::new(program)
        .args(&cfg.command[1..])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| Error::AdapterUnavailable(format!("{program}: {e}")))?;

    if let Some(mut stdin) = child.stdin.take() {
        // A fast-exiting adapter may close its end first; the read
        // side decides whether the exchange succeeded.
        let _ = writeln!(stdin, "{request}");
    }

    let mut stdout = child.stdout.take().expect("stdout was piped");
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let mut buf = String::new();
        let result = stdout.read_to_string(&mut buf).map(|_| buf);
        let _ = tx.send(result);
    });

    match rx.recv_timeout(cfg.timeout) {
        Ok(Ok(output)) => {
            let _ = child.wait();
            parse_response(&output, eq, program)
        }
        Ok(Err(e)) => {
            kill_and_reap(&mut child);
            Err(Error::AdapterProtocol(format!(
                "failed reading adapter output: {e}"
            )))
        }
        Err(_) => {
            kill_and_reap(&mut child);
            Err(Error::AdapterTimeout(cfg.timeout.as_secs()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::IntegerPolynomial;
    use crate::twists::{build_binomial_twist, build_elliptic_twist, build_quartic_twist};
    use crate::pell::QuarticVariant;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn elliptic_request_format() {
        let f = IntegerPolynomial::from_i64(&[1, 1, 0, 1]);
        let eq = build_elliptic_twist(&f, &big(-31)).unwrap();
        assert_eq!(
            request_line(&eq).unwrap(),
            r#"{"kind":"elliptic","a1":0,"a2":0,"a3":0,"a4":961,"a6":-29791}"#
        );
    }

    #[test]
    fn thue_request_format() {
        let eq = build_binomial_twist(&big(1), &big(691), 3, &big(2)).unwrap();
        assert_eq!(
            request_line(&eq).unwrap(),
            r#"{"kind":"thue","p":3,"lhs_coeff":2,"rhs":[1,691]}"#
        );

        let eq = build_binomial_twist(&big(-4), &big(9), 5, &big(-6)).unwrap();
        assert_eq!(
            request_line(&eq).unwrap(),
            r#"{"kind":"thue","p":5,"lhs_coeff":-6,"rhs":[-4,9]}"#
        );
    }

    #[test]
    fn oversize_integers_become_strings() {
        let huge: BigInt = "1000000000000000000000000".parse().unwrap();
        let f = IntegerPolynomial::from_i64(&[1, 1, 0, 1]);
        let eq = build_elliptic_twist(&f, &huge).unwrap();
        let line = request_line(&eq).unwrap();
        let expected = format!("\"a4\":\"{}\"", huge.pow(2));
        assert!(line.contains(&expected), "missing {expected} in {line}");
        assert!(serde_json::from_str::<Value>(&line).is_ok());
    }

    #[test]
    fn kinds_without_wire_form_are_rejected() {
        let eq = build_quartic_twist(QuarticVariant::Minus, &big(3)).unwrap();
        assert!(matches!(
            request_line(&eq).unwrap_err(),
            Error::UnsupportedShape(_)
        ));
    }

    #[test]
    fn parse_elliptic_points_keeps_both_scalings() {
        let f = IntegerPolynomial::from_i64(&[1, 1, 0, 1]);
        let eq = build_elliptic_twist(&f, &big(3)).unwrap();
        let out = parse_response(
            "{\"points\":[[6,5],[7,2]],\"complete\":true}\n",
            &eq,
            "mock",
        )
        .unwrap();
        // 6 maps to both 6 and 2; 7 is not divisible by 3
        assert_eq!(out.x_candidates, vec![big(2), big(6), big(7)]);
        assert!(out.complete);
        assert_eq!(out.backend, "external");
    }

    #[test]
    fn parse_thue_points_are_curve_level() {
        let eq = build_binomial_twist(&big(1), &big(691), 3, &big(2)).unwrap();
        let out = parse_response(
            r#"{"points":[[3,7],[-1,1]],"complete":false}"#,
            &eq,
            "mock",
        )
        .unwrap();
        assert_eq!(out.x_candidates, vec![big(-1), big(3)]);
        assert!(!out.complete);
    }

    #[test]
    fn parse_handles_big_integer_strings() {
        let eq = build_binomial_twist(&big(1), &big(691), 3, &big(2)).unwrap();
        let out = parse_response(
            r#"{"points":[["123456789012345678901234567890","1"]],"complete":true}"#,
            &eq,
            "mock",
        )
        .unwrap();
        assert_eq!(
            out.x_candidates,
            vec!["123456789012345678901234567890".parse::<BigInt>().unwrap()]
        );
    }

    #[test]
    fn parse_empty_point_list() {
        let eq = build_binomial_twist(&big(1), &big(691), 3, &big(2)).unwrap();
        let out = parse_response(r#"{"points":[],"complete":true}"#, &eq, "mock").unwrap();
        assert!(out.x_candidates.is_empty());
        assert!(out.complete);
    }

    #[test]
    fn malformed_responses_are_protocol_errors() {
        let eq = build_binomial_twist(&big(1), &big(691), 3, &big(2)).unwrap();
        for bad in [
            "",
            "pts 1 2",
            "[]",
            r#"{"points":[[1,2]]}"#,
            r#"{"complete":true}"#,
            r#"{"points":[[1]],"complete":true}"#,
            r#"{"points":[[1.5,2]],"complete":true}"#,
            r#"{"points":[["12x","2"]],"complete":true}"#,
        ] {
            assert!(
                matches!(
                    parse_response(bad, &eq, "mock"),
                    Err(Error::AdapterProtocol(_))
                ),
                "accepted {bad:?}"
            );
        }
    }
}
