//! Structured verification reports with a stable JSON schema:
//! {suite, params, mode, order, window, outcome, witness?, millis}.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::qalg::{Comparison, Ctx, QSeries};

/// How the identity was verified: fully symbolic coefficients, or exact
/// rational evaluation at the recorded sample points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Evaluation { points: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

/// First mismatching coefficient, or the reason a check was skipped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    Mismatch { degree: i64, lhs: String, rhs: String },
    Skipped { reason: String },
    Error { error: String },
}

/// Outcome of one identity check at one parameter point.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub mode: Mode,
    pub order: i64,
    pub window: (i64, i64),
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub millis: u128,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    /// Deterministic sort key: suite id, then the parameter map rendered as
    /// text (which is stable because the map is ordered).
    pub fn sort_key(&self) -> (String, String) {
        (self.suite.clone(), format!("{:?}", self.params))
    }

    pub fn text_line(&self) -> String {
        let status = match self.outcome {
            Outcome::Pass => "pass",
            Outcome::Fail => "FAIL",
            Outcome::Skipped => "skip",
        };
        let params = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        let mode = match &self.mode {
            Mode::Symbolic => "symbolic".to_string(),
            Mode::Evaluation { points } => {
                if points.is_empty() {
                    "evaluation".to_string()
                } else {
                    format!("evaluation@[{}]", points.join(","))
                }
            }
        };
        let mut line = format!(
            "[{status}] {} {params} mode={mode} order={} window=[{},{}] ({} ms)",
            self.suite, self.order, self.window.0, self.window.1, self.millis
        );
        match &self.witness {
            Some(Witness::Mismatch { degree, lhs, rhs }) => {
                line.push_str(&format!("  first mismatch at q^{degree}: lhs={lhs} rhs={rhs}"));
            }
            Some(Witness::Skipped { reason }) => {
                line.push_str(&format!("  reason: {reason}"));
            }
            Some(Witness::Error { error }) => {
                line.push_str(&format!("  error: {error}"));
            }
            None => {}
        }
        line
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text_line())
    }
}

/// Builder that times a check and renders series comparisons into reports.
pub struct ReportBuilder {
    suite: String,
    params: BTreeMap<String, serde_json::Value>,
    mode: Mode,
    order: i64,
    start: Instant,
}

impl ReportBuilder {
    pub fn new(suite: &str, order: i64) -> Self {
        ReportBuilder {
            suite: suite.to_string(),
            params: BTreeMap::new(),
            mode: Mode::Symbolic,
            order,
            start: Instant::now(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn evaluation(mut self, points: &[String]) -> Self {
        self.mode = Mode::Evaluation { points: points.to_vec() };
        self
    }

    fn finish(self, outcome: Outcome, window: (i64, i64), witness: Option<Witness>) -> VerificationReport {
        VerificationReport {
            suite: self.suite,
            params: self.params,
            mode: self.mode,
            order: self.order,
            window,
            outcome,
            witness,
            millis: self.start.elapsed().as_millis(),
        }
    }

    /// Report from a windowed comparison of two series.
    pub fn from_comparison(self, ctx: &Ctx, cmp: &Comparison) -> VerificationReport {
        let window = (cmp.window_lo.min(cmp.window_hi), cmp.window_hi);
        match &cmp.mismatch {
            None => self.finish(Outcome::Pass, window, None),
            Some((d, l, r)) => {
                let w = Witness::Mismatch {
                    degree: *d,
                    lhs: l.display(&ctx.domain),
                    rhs: r.display(&ctx.domain),
                };
                self.finish(Outcome::Fail, window, Some(w))
            }
        }
    }

    /// Report from two series, comparing over the shared window.
    pub fn from_sides(self, ctx: &Ctx, lhs: &QSeries, rhs: &QSeries) -> VerificationReport {
        match lhs.compare(rhs) {
            Ok(cmp) => self.from_comparison(ctx, &cmp),
            Err(e) => self.error(e),
        }
    }

    /// Report a boolean check (window taken as the full order).
    pub fn from_bool(self, ok: bool) -> VerificationReport {
        let window = (0, self.order);
        if ok {
            self.finish(Outcome::Pass, window, None)
        } else {
            self.finish(
                Outcome::Fail,
                window,
                Some(Witness::Skipped { reason: "check returned false".into() }),
            )
        }
    }

    pub fn skipped(self, reason: &str) -> VerificationReport {
        let window = (0, self.order);
        self.finish(Outcome::Skipped, window, Some(Witness::Skipped { reason: reason.into() }))
    }

    /// An engine error is reported as a failure with the error as witness.
    pub fn error(self, e: crate::QError) -> VerificationReport {
        let window = (0, self.order);
        self.finish(Outcome::Fail, window, Some(Witness::Error { error: e.to_string() }))
    }
}

/// Run a closure returning (lhs, rhs) and report the comparison, catching
/// engine errors into failure reports.
pub fn check_sides(
    rb: ReportBuilder,
    ctx: &Ctx,
    f: impl FnOnce() -> crate::Result<(QSeries, QSeries)>,
) -> VerificationReport {
    match f() {
        Ok((lhs, rhs)) => rb.from_sides(ctx, &lhs, &rhs),
        Err(e) => rb.error(e),
    }
}

/// Run a boolean check and report it, catching engine errors.
pub fn check_bool(rb: ReportBuilder, f: impl FnOnce() -> crate::Result<bool>) -> VerificationReport {
    match f() {
        Ok(ok) => rb.from_bool(ok),
        Err(e) => rb.error(e),
    }
}
