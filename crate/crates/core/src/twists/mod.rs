//! Twist equations `d y^p = f(x)` and their solvers.
//!
//! A descent step turns one curve into a batch of twists.  Each kind
//! of twist knows which backends can solve it:
//!
//! * `bounded`: direct scan of `|x| <= height`; sound, never complete
//! * `exact`: Pell-based, only for `d y^2 = x^4 ± 1`; complete
//! * `external`: a subprocess speaking the line protocol in
//!   [`adapter`]; completeness is whatever the adapter claims

pub mod adapter;
pub mod cache;

pub use adapter::{solve_twist_external, AdapterConfig};
pub use cache::TwistCache;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::algebra::{self, IntegerPolynomial};
use crate::pell::{self, QuarticVariant};
use crate::{Error, Result};

/// The shape of a twist equation's right-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwistKind {
    /// `d y^2 = f(x)` with `f` a monic separable cubic.  Carries the
    /// coefficients of the associated model
    /// `Y^2 = X^3 + A d X^2 + B d^2 X + C d^3`, whose integral points
    /// `(X, Y)` map back through `X = d x`.
    EllipticCubic {
        a2: BigInt,
        a4: BigInt,
        a6: BigInt,
    },
    /// `d y^2 = f(x)` for any other polynomial; bounded search only.
    GenericDSquare,
    /// `d y^p = A x^p + B` for odd prime `p`.
    BinomialThue { lead: BigInt, constant: BigInt },
    /// `d y^2 = x^4 - 1`, solved exactly through Pell.
    QuarticMinus,
    /// `d y^2 = x^4 + 1`, solved exactly through negative Pell.
    QuarticPlus,
}

impl TwistKind {
    pub fn name(&self) -> &'static str {
        match self {
            TwistKind::EllipticCubic { .. } => "elliptic_cubic",
            TwistKind::GenericDSquare => "generic_dsquare",
            TwistKind::BinomialThue { .. } => "binomial_thue",
            TwistKind::QuarticMinus => "quartic_minus",
            TwistKind::QuarticPlus => "quartic_plus",
        }
    }
}

/// One twist `d y^p = f(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistEquation {
    pub kind: TwistKind,
    pub d: BigInt,
    pub p: u32,
    /// The right-hand side `f`.
    pub f: IntegerPolynomial,
}

impl TwistEquation {
    /// `Some(y)` if `(x, y)` with minimal `y >= 0` (even `p`) or the
    /// unique `y` (odd `p`) solves the twist at this `x`.
    pub fn solve_at(&self, x: &BigInt) -> Option<BigInt> {
        let value = self.f.evaluate(x);
        if (&value % &self.d).is_zero() {
            let q = value / &self.d;
            if self.p == 2 {
                algebra::is_perfect_square(&q)
            } else {
                algebra::perfect_power_root(&q, self.p)
            }
        } else {
            None
        }
    }
}

/// Result of solving a single twist.
///
/// `x_candidates` may legitimately over-approximate: an external
/// adapter reports points on the associated model, and both scalings
/// of each abscissa are kept.  The descent engine re-verifies every
/// candidate on the original curve, so extra candidates are harmless.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistOutcome {
    pub twist: TwistEquation,
    pub x_candidates: Vec<BigInt>,
    pub complete: bool,
    pub backend: String,
    pub diagnostics: Vec<String>,
}

/// Builds the twist of a monic separable cubic by `d`, including the
/// integral model coefficients `(A d, B d^2, C d^3)`.
pub fn build_elliptic_twist(f: &IntegerPolynomial, d: &BigInt) -> Result<TwistEquation> {
    if d.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if f.degree() != Some(3) || !f.is_monic() {
        return Err(Error::NotMonicCubic);
    }
    if !f.is_separable()? {
        return Err(Error::SingularCurve);
    }
    let a = f.coeff(2);
    let b = f.coeff(1);
    let c = f.coeff(0);
    Ok(TwistEquation {
        kind: TwistKind::EllipticCubic {
            a2: &a * d,
            a4: &b * d * d,
            a6: &c * d * d * d,
        },
        d: d.clone(),
        p: 2,
        f: f.clone(),
    })
}

/// Twist `d y^2 = f(x)` with no special structure.
pub fn build_generic_twist(f: &IntegerPolynomial, d: &BigInt) -> Result<TwistEquation> {
    if d.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if f.degree().unwrap_or(0) < 1 {
        return Err(Error::UnsupportedShape(
            "generic twist needs a nonconstant f".into(),
        ));
    }
    Ok(TwistEquation {
        kind: TwistKind::GenericDSquare,
        d: d.clone(),
        p: 2,
        f: f.clone(),
    })
}

/// Twist `d y^p = A x^p + B` for odd prime `p`.
pub fn build_binomial_twist(lead: &BigInt, constant: &BigInt, p: u32, d: &BigInt) -> Result<TwistEquation> {
    if d.is_zero() || lead.is_zero() || constant.is_zero() {
        return Err(Error::NotBinomial);
    }
    let mut coeffs = vec![BigInt::zero(); p as usize + 1];
    coeffs[0] = constant.clone();
    coeffs[p as usize] = lead.clone();
    Ok(TwistEquation {
        kind: TwistKind::BinomialThue {
            lead: lead.clone(),
            constant: constant.clone(),
        },
        d: d.clone(),
        p,
        f: IntegerPolynomial::new(coeffs),
    })
}

/// Twist `d y^2 = x^4 ± 1`.
pub fn build_quartic_twist(variant: QuarticVariant, d: &BigInt) -> Result<TwistEquation> {
    if d.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let constant = match variant {
        QuarticVariant::Minus => BigInt::from(-1),
        QuarticVariant::Plus => BigInt::one(),
    };
    let kind = match variant {
        QuarticVariant::Minus => TwistKind::QuarticMinus,
        QuarticVariant::Plus => TwistKind::QuarticPlus,
    };
    Ok(TwistEquation {
        kind,
        d: d.clone(),
        p: 2,
        f: IntegerPolynomial::new(vec![
            constant,
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
            BigInt::one(),
        ]),
    })
}

fn assert_candidates_satisfy(eq: &TwistEquation, xs: &[BigInt]) {
    for x in xs {
        assert!(
            eq.solve_at(x).is_some(),
            "candidate x = {x} does not satisfy twist d = {} of kind {}",
            eq.d,
            eq.kind.name()
        );
    }
}

/// Scans `|x| <= height` for solutions of the twist.  Sound but
/// never complete.
pub fn solve_twist_bounded(eq: &TwistEquation, height: u64) -> TwistOutcome {
    let mut xs = Vec::new();
    let h = BigInt::from(height);
    let mut x = -h.clone();
    while x <= h {
        if eq.solve_at(&x).is_some() {
            xs.push(x.clone());
        }
        x += 1;
    }
    assert_candidates_satisfy(eq, &xs);
    TwistOutcome {
        twist: eq.clone(),
        x_candidates: xs,
        complete: false,
        backend: "bounded".into(),
        diagnostics: vec![format!("scanned |x| <= {height}")],
    }
}

/// Solves the twist completely when an exact method exists.
///
/// Returns `None` for kinds with no exact solver.  A digit budget
/// overrun surfaces as `Err(DigitBudgetExceeded)` inside the `Some`.
pub fn solve_twist_exact(
    eq: &TwistEquation,
    digit_budget: u64,
    factor_budget: u64,
) -> Option<Result<TwistOutcome>> {
    let variant = match eq.kind {
        TwistKind::QuarticMinus => QuarticVariant::Minus,
        TwistKind::QuarticPlus => QuarticVariant::Plus,
        _ => return None,
    };
    Some(solve_quartic_exact(eq, variant, digit_budget, factor_budget))
}

fn solve_quartic_exact(
    eq: &TwistEquation,
    variant: QuarticVariant,
    digit_budget: u64,
    factor_budget: u64,
) -> Result<TwistOutcome> {
    let two = BigInt::from(2);
    if eq.d < two {
        return Err(Error::UnsupportedShape(format!(
            "exact quartic solver needs d >= 2, got {}",
            eq.d
        )));
    }
    let d: BigUint = eq.d.magnitude().clone();
    let solved = match variant {
        QuarticVariant::Minus => pell::solve_quartic_minus(&d, digit_budget)?,
        QuarticVariant::Plus => pell::solve_quartic_plus(&d, digit_budget, factor_budget)?,
    };
    let mut xs = Vec::new();
    for (x, _) in solved.solutions.iter().rev() {
        xs.push(-BigInt::from(x.clone()));
    }
    for (x, _) in &solved.solutions {
        xs.push(BigInt::from(x.clone()));
    }
    assert_candidates_satisfy(eq, &xs);
    let listed = if solved.solutions.is_empty() {
        "none".to_string()
    } else {
        solved
            .solutions
            .iter()
            .map(|(x, y)| format!("({x}, {y})"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let diag = format!("pell {} solutions: {}", variant.name(), listed);
    Ok(TwistOutcome {
        twist: eq.clone(),
        x_candidates: xs,
        complete: true,
        backend: "exact".into(),
        diagnostics: vec![diag],
    })
}

/// A structured "this twist was not solved" outcome, used when a
/// budget error should degrade the report instead of aborting it.
pub fn skipped_outcome(eq: &TwistEquation, reason: &str) -> TwistOutcome {
    TwistOutcome {
        twist: eq.clone(),
        x_candidates: Vec::new(),
        complete: false,
        backend: "skipped".into(),
        diagnostics: vec![format!("skipped: {reason}")],
    }
}
