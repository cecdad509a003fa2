//! The descent engine.
//!
//! A problem `D y^p = f(x) g(x)` with `res(f, g) != 0` is reduced to
//! twist equations `d y^p = f(x)`, one per p-th-power-free `d`
//! supported on the primes of the resultant.  Candidate abscissas
//! come from the twist solvers plus the integer roots of `f` and `g`
//! (the `y = 0` points); every candidate is then lifted against the
//! original equation and only exact points are reported.

use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{self, IntegerPolynomial};
use crate::arith::{self, Factorization};
use crate::pell::QuarticVariant;
use crate::twists::{self, adapter, AdapterConfig, TwistCache, TwistEquation, TwistOutcome};
use crate::{Error, Result};

/// The equation `scale * y^p = f(x) * g(x)` to be solved in integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveProblem {
    pub p: u32,
    pub f: IntegerPolynomial,
    pub g: IntegerPolynomial,
    /// The multiplier `D` on `y^p`; `1` for the plain equation.
    pub scale: BigInt,
    /// Set when the caller knows `f` is `x^4 -/+ 1`; validated, and
    /// inferred from the shape of `f` when absent.
    pub family_hint: Option<QuarticVariant>,
}

impl CurveProblem {
    pub fn new(p: u32, f: IntegerPolynomial, g: IntegerPolynomial) -> Self {
        CurveProblem {
            p,
            f,
            g,
            scale: BigInt::one(),
            family_hint: None,
        }
    }

    pub fn with_scale(p: u32, f: IntegerPolynomial, g: IntegerPolynomial, scale: BigInt) -> Self {
        CurveProblem {
            p,
            f,
            g,
            scale,
            family_hint: None,
        }
    }

    /// Human-readable equation, e.g. `y^2 = (x^3 + x + 1)(x^4 + 2x^3 - 3x^2 + 4x + 4)`.
    pub fn describe(&self) -> String {
        let lhs = if self.scale.is_one() {
            format!("y^{}", self.p)
        } else {
            format!("{} y^{}", self.scale, self.p)
        };
        format!("{lhs} = ({})({})", self.f, self.g)
    }
}

/// A verified integer point.  For `p = 2` the representative with
/// `y >= 0` is reported; for odd `p` the `y` value is unique.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CurvePoint {
    pub x: BigInt,
    pub y: BigInt,
}

/// Everything the engine learned about one curve.
#[derive(Debug, Clone)]
pub struct DescentReport {
    pub problem: CurveProblem,
    /// `res(f, G)` for the normalized equation `y^p = f G`.
    pub resultant: BigInt,
    /// Twist coefficients, in the order their twists were solved.
    pub divisors: Vec<BigInt>,
    pub twists: Vec<TwistOutcome>,
    pub points: Vec<CurvePoint>,
    /// True when every contributing twist was solved completely, so
    /// the point list is provably the full set of integer points.
    pub complete: bool,
    /// Theoretical cap on the number of points with `y != 0`, when a
    /// published bound applies to this shape.
    pub bound: Option<u64>,
    pub height: u64,
    pub notes: Vec<String>,
}

/// Which twist solver the engine should prefer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BackendChoice {
    /// Exact where an exact method exists, bounded scan otherwise.
    #[default]
    Auto,
    Bounded,
    Exact,
    External,
}

impl BackendChoice {
    pub fn name(self) -> &'static str {
        match self {
            BackendChoice::Auto => "auto",
            BackendChoice::Bounded => "bounded",
            BackendChoice::Exact => "exact",
            BackendChoice::External => "external",
        }
    }
}

/// Knobs shared by all solve entry points.
#[derive(Clone)]
pub struct SolveOptions {
    /// Bounded-scan half-width: `|x| <= height`.
    pub height: u64,
    pub backend: BackendChoice,
    pub adapter: Option<AdapterConfig>,
    pub cache: Option<Arc<Mutex<TwistCache>>>,
    /// Ceiling on decimal digits of any number built by exact solvers.
    pub digit_budget: u64,
    /// Iteration budget for each factorization.
    pub factor_budget: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            height: 10_000,
            backend: BackendChoice::Auto,
            adapter: None,
            cache: None,
            digit_budget: crate::pell::DEFAULT_DIGIT_BUDGET,
            factor_budget: arith::DEFAULT_FACTOR_BUDGET,
        }
    }
}

/// Rewrites `D y^p = f g` as the plain equation `Y^p = f (D^(p-1) g)`
/// via `Y = D y`.  Solutions are lifted back against the original, so
/// the substitution never loses points.
pub fn normalize(problem: &CurveProblem) -> Result<CurveProblem> {
    if problem.scale.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if problem.scale.is_one() {
        return Ok(problem.clone());
    }
    let mult = problem.scale.pow(problem.p - 1);
    Ok(CurveProblem {
        p: problem.p,
        f: problem.f.clone(),
        g: problem.g.scale(&mult),
        scale: BigInt::one(),
        family_hint: problem.family_hint,
    })
}

fn is_prime_u32(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2u32;
    while q.saturating_mul(q) <= p {
        if p % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

fn quartic_shape(f: &IntegerPolynomial) -> Option<QuarticVariant> {
    let minus = IntegerPolynomial::from_i64(&[-1, 0, 0, 0, 1]);
    let plus = IntegerPolynomial::from_i64(&[1, 0, 0, 0, 1]);
    if *f == minus {
        Some(QuarticVariant::Minus)
    } else if *f == plus {
        Some(QuarticVariant::Plus)
    } else {
        None
    }
}

/// Solves a curve problem, dispatching on its shape.
pub fn solve(problem: &CurveProblem, opts: &SolveOptions) -> Result<DescentReport> {
    if !is_prime_u32(problem.p) {
        return Err(Error::UnsupportedShape(format!(
            "exponent {} is not prime",
            problem.p
        )));
    }
    let norm = normalize(problem)?;
    if problem.p == 2 {
        if let Some(variant) = quartic_shape(&norm.f) {
            if let Some(hinted) = problem.family_hint {
                if hinted != variant {
                    return Err(Error::UnsupportedShape(format!(
                        "family hint {} does not match f = {}",
                        hinted.name(),
                        norm.f
                    )));
                }
            }
            return run_quartic_family(problem, &norm, variant, opts);
        }
        if problem.family_hint.is_some() {
            return Err(Error::UnsupportedShape(format!(
                "family hint set but f = {} is not x^4 -/+ 1",
                norm.f
            )));
        }
        run_hyperelliptic(problem, &norm, opts)
    } else {
        run_superelliptic(problem, &norm, opts)
    }
}

/// `y^p = (A x^p + B) g(x)` for odd prime `p`.
pub fn solve_superelliptic(
    f: &IntegerPolynomial,
    g: &IntegerPolynomial,
    p: u32,
    opts: &SolveOptions,
) -> Result<DescentReport> {
    solve(&CurveProblem::new(p, f.clone(), g.clone()), opts)
}

/// `y^2 = f g` with `f` a monic cubic or a quartic.
pub fn solve_hyperelliptic(
    f: &IntegerPolynomial,
    g: &IntegerPolynomial,
    opts: &SolveOptions,
) -> Result<DescentReport> {
    solve(&CurveProblem::new(2, f.clone(), g.clone()), opts)
}

/// `y^2 = (x^4 -/+ 1) g(x)`, solved through the Pell machinery.
pub fn solve_quartic_family(
    g: &IntegerPolynomial,
    variant: QuarticVariant,
    opts: &SolveOptions,
) -> Result<DescentReport> {
    let constant = match variant {
        QuarticVariant::Minus => -1,
        QuarticVariant::Plus => 1,
    };
    let f = IntegerPolynomial::from_i64(&[constant, 0, 0, 0, 1]);
    let mut problem = CurveProblem::new(2, f, g.clone());
    problem.family_hint = Some(variant);
    solve(&problem, opts)
}

fn run_superelliptic(
    original: &CurveProblem,
    norm: &CurveProblem,
    opts: &SolveOptions,
) -> Result<DescentReport> {
    let p = norm.p;
    let (lead, constant) = norm.f.as_binomial().ok_or(Error::NotBinomial)?;
    if norm.f.degree() != Some(p as usize) {
        return Err(Error::NotBinomial);
    }

    let c = algebra::resultant(&norm.f, &norm.g)?;
    if c.is_zero() {
        return Err(Error::CommonRoots);
    }
    let fact = arith::factor_with_budget(&c, opts.factor_budget)?;
    let divisors = fact.pth_power_free_span(p);

    let mut notes = Vec::new();
    let mut outcomes = Vec::with_capacity(divisors.len());
    for d in &divisors {
        let eq = twists::build_binomial_twist(&lead, &constant, p, d)?;
        outcomes.push(dispatch_twist(&eq, opts, &mut notes)?);
    }

    let mut candidates = collect_candidates(&outcomes);
    candidates.extend(norm.f.integer_roots()?);
    candidates.extend(original.g.integer_roots()?);

    let points = lift_and_verify(&candidates, original);
    let complete = outcomes.iter().all(|o| o.complete);
    let bound = if original.scale.is_one() {
        superelliptic_bound(norm, &fact, &mut notes)
    } else {
        None
    };

    Ok(DescentReport {
        problem: original.clone(),
        resultant: c,
        divisors,
        twists: outcomes,
        points,
        complete,
        bound,
        height: opts.height,
        notes,
    })
}

fn run_hyperelliptic(
    original: &CurveProblem,
    norm: &CurveProblem,
    opts: &SolveOptions,
) -> Result<DescentReport> {
    let deg = norm.f.degree().unwrap_or(0);
    if deg != 3 && deg != 4 {
        return Err(Error::UnsupportedShape(format!(
            "f must have degree 3 or 4 in the y^2 path, got degree {deg}; \
             swap f and g if the other factor qualifies",
        )));
    }
    let cubic = deg == 3;
    if cubic {
        if !norm.f.is_monic() {
            return Err(Error::NotMonicCubic);
        }
        if !norm.f.is_separable()? {
            return Err(Error::SingularCurve);
        }
    }

    let c = algebra::resultant(&norm.f, &norm.g)?;
    if c.is_zero() {
        return Err(Error::CommonRoots);
    }
    let fact = arith::factor_with_budget(&c, opts.factor_budget)?;
    let divisors = fact.pth_power_free_span(2);

    let mut notes = Vec::new();
    let mut outcomes = Vec::with_capacity(divisors.len());
    for d in &divisors {
        let eq = if cubic {
            twists::build_elliptic_twist(&norm.f, d)?
        } else {
            twists::build_generic_twist(&norm.f, d)?
        };
        outcomes.push(dispatch_twist(&eq, opts, &mut notes)?);
    }

    let mut candidates = collect_candidates(&outcomes);
    candidates.extend(norm.f.integer_roots()?);
    candidates.extend(original.g.integer_roots()?);

    let points = lift_and_verify(&candidates, original);
    let complete = outcomes.iter().all(|o| o.complete);

    Ok(DescentReport {
        problem: original.clone(),
        resultant: c,
        divisors,
        twists: outcomes,
        points,
        complete,
        bound: None,
        height: opts.height,
        notes,
    })
}

fn run_quartic_family(
    original: &CurveProblem,
    norm: &CurveProblem,
    variant: QuarticVariant,
    opts: &SolveOptions,
) -> Result<DescentReport> {
    let c = algebra::resultant(&norm.f, &norm.g)?;
    if c.is_zero() {
        return Err(Error::CommonRoots);
    }
    let fact = arith::factor_with_budget(&c, opts.factor_budget)?;
    let divisors: Vec<BigInt> = fact
        .squarefree_divisors(false)
        .into_iter()
        .filter(|d| !d.is_one())
        .collect();

    let mut notes = vec![format!(
        "twists with d < 2 contribute only x in {{-1, 0, 1}}; those abscissas are always checked",
    )];
    let mut outcomes = Vec::with_capacity(divisors.len());
    for d in &divisors {
        let eq = twists::build_quartic_twist(variant, d)?;
        outcomes.push(dispatch_twist(&eq, opts, &mut notes)?);
    }

    let mut candidates = collect_candidates(&outcomes);
    candidates.insert(BigInt::zero());
    candidates.insert(BigInt::one());
    candidates.insert(BigInt::from(-1));
    candidates.extend(original.g.integer_roots()?);

    let points = lift_and_verify(&candidates, original);
    let complete = outcomes.iter().all(|o| o.complete);
    let bound = if original.scale.is_one() {
        quartic_bound(variant, &fact, &mut notes)
    } else {
        None
    };

    Ok(DescentReport {
        problem: original.clone(),
        resultant: c,
        divisors,
        twists: outcomes,
        points,
        complete,
        bound,
        height: opts.height,
        notes,
    })
}

fn collect_candidates(outcomes: &[TwistOutcome]) -> BTreeSet<BigInt> {
    let mut set = BTreeSet::new();
    for o in outcomes {
        set.extend(o.x_candidates.iter().cloned());
    }
    set
}

fn dispatch_twist(
    eq: &TwistEquation,
    opts: &SolveOptions,
    notes: &mut Vec<String>,
) -> Result<TwistOutcome> {
    match opts.backend {
        BackendChoice::Bounded => Ok(twists::solve_twist_bounded(eq, opts.height)),
        BackendChoice::Exact => match twists::solve_twist_exact(eq, opts.digit_budget, opts.factor_budget) {
            None => Err(Error::NoExactBackend(eq.kind.name().into())),
            Some(result) => absorb_budget_error(eq, result, notes),
        },
        BackendChoice::Auto => match twists::solve_twist_exact(eq, opts.digit_budget, opts.factor_budget) {
            None => Ok(twists::solve_twist_bounded(eq, opts.height)),
            Some(result) => absorb_budget_error(eq, result, notes),
        },
        BackendChoice::External => run_external(eq, opts, notes),
    }
}

/// Budget overruns degrade one twist to a skip; anything else is a
/// real error.
fn absorb_budget_error(
    eq: &TwistEquation,
    result: Result<TwistOutcome>,
    notes: &mut Vec<String>,
) -> Result<TwistOutcome> {
    match result {
        Ok(outcome) => Ok(outcome),
        Err(Error::DigitBudgetExceeded { needed, budget }) => {
            let reason =
                format!("digit budget: needs roughly {needed} digits, budget is {budget}");
            notes.push(format!("twist d = {} skipped ({reason})", eq.d));
            Ok(twists::skipped_outcome(eq, &reason))
        }
        Err(Error::FactorizationTimeout(n)) => {
            let reason = format!("factoring budget exhausted on {n}");
            notes.push(format!("twist d = {} skipped ({reason})", eq.d));
            Ok(twists::skipped_outcome(eq, &reason))
        }
        Err(e) => Err(e),
    }
}

fn run_external(
    eq: &TwistEquation,
    opts: &SolveOptions,
    notes: &mut Vec<String>,
) -> Result<TwistOutcome> {
    let key = match adapter::request_line(eq) {
        Ok(key) => key,
        Err(_) => {
            // No wire form for this kind.  Quartic twists still have a
            // complete native solver; everything else degrades to a scan.
            return match twists::solve_twist_exact(eq, opts.digit_budget, opts.factor_budget) {
                Some(result) => {
                    notes.push(format!(
                        "twist d = {}: adapter protocol has no {} form; used exact solver",
                        eq.d,
                        eq.kind.name()
                    ));
                    absorb_budget_error(eq, result, notes)
                }
                None => {
                    notes.push(format!(
                        "twist d = {}: adapter protocol has no {} form; used bounded scan",
                        eq.d,
                        eq.kind.name()
                    ));
                    Ok(twists::solve_twist_bounded(eq, opts.height))
                }
            };
        }
    };

    if let Some(cache) = &opts.cache {
        let guard = cache.lock().expect("cache lock");
        if let Some(hit) = guard.get(&key, eq) {
            return Ok(hit);
        }
    }

    let cfg = opts.adapter.as_ref().ok_or_else(|| {
        Error::AdapterUnavailable("backend is external but no adapter command is configured".into())
    })?;
    let outcome = twists::solve_twist_external(eq, cfg)?;
    if let Some(cache) = &opts.cache {
        cache.lock().expect("cache lock").put(&key, &outcome);
    }
    Ok(outcome)
}

/// Verifies each candidate abscissa on the original equation and
/// returns the exact points, sorted and deduplicated.
pub fn lift_and_verify(candidates: &BTreeSet<BigInt>, problem: &CurveProblem) -> Vec<CurvePoint> {
    let mut points = BTreeSet::new();
    for x in candidates {
        let value = problem.f.evaluate(x) * problem.g.evaluate(x);
        if !(&value % &problem.scale).is_zero() {
            continue;
        }
        let q = value.clone() / &problem.scale;
        let y = if problem.p == 2 {
            algebra::is_perfect_square(&q)
        } else {
            algebra::perfect_power_root(&q, problem.p)
        };
        if let Some(y) = y {
            assert_eq!(&problem.scale * y.pow(problem.p), value, "lift verification");
            points.insert(CurvePoint { x: x.clone(), y });
        }
    }
    points.into_iter().collect()
}

/// Published cap on the number of points with `y != 0`, for the
/// shapes that have one.  `None` when no bound applies.
pub fn theoretical_bound(problem: &CurveProblem, c: &BigInt) -> Result<Option<u64>> {
    if !problem.scale.is_one() {
        return Ok(None);
    }
    let fact = arith::factor(c)?;
    let mut notes = Vec::new();
    if problem.p == 2 {
        if let Some(variant) = quartic_shape(&problem.f) {
            return Ok(quartic_bound(variant, &fact, &mut notes));
        }
        return Ok(None);
    }
    let norm = normalize(problem)?;
    Ok(superelliptic_bound(&norm, &fact, &mut notes))
}

fn superelliptic_bound(
    norm: &CurveProblem,
    fact: &Factorization,
    notes: &mut Vec<String>,
) -> Option<u64> {
    let (lead, constant) = norm.f.as_binomial()?;
    if constant.abs() != BigInt::one() {
        return None;
    }
    let (g_lead, g_const) = norm.g.as_binomial()?;
    let m = norm.g.degree()? as u32;
    let p = norm.p;

    // cross-check the resultant against the closed form for
    // y^p = (alpha x^p + e)(gamma x^m + beta), |e| = 1
    let alpha_m = lead.pow(m);
    let beta_p = g_const.pow(p);
    let gamma_p = g_lead.pow(p);
    let sign = if m % 2 == 0 {
        BigInt::one()
    } else {
        -constant.clone()
    };
    let closed = &alpha_m * &beta_p + sign * gamma_p;
    if closed.abs() != fact.value().abs() {
        notes.push(format!(
            "closed-form resultant {closed} disagrees with computed {}; bound withheld",
            fact.value()
        ));
        return None;
    }

    let tau = fact.tau();
    notes.push(format!(
        "point-count bound 2 tau(|c|) = {} applies to this binomial shape",
        2 * tau
    ));
    Some(2 * tau)
}

fn quartic_bound(
    variant: QuarticVariant,
    fact: &Factorization,
    notes: &mut Vec<String>,
) -> Option<u64> {
    let omega = fact.omega();
    if omega > 56 {
        return None;
    }
    let bound = match variant {
        QuarticVariant::Minus => 1u64 << (omega + 2),
        QuarticVariant::Plus => 1u64 << (omega + 1),
    };
    notes.push(format!(
        "point-count bound 2^(omega(|c|) + {}) = {bound}",
        match variant {
            QuarticVariant::Minus => 2,
            QuarticVariant::Plus => 1,
        }
    ));
    Some(bound)
}
