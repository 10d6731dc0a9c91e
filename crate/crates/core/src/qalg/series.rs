//! Truncated formal Laurent series in q over an exact coefficient domain.
//!
//! A series knows the window of degrees on which its coefficients are exact:
//! everything below `min_deg` is provably zero, everything in
//! `[min_deg, order]` is stored (absent means zero), and everything above
//! `order` is unknown. Window bookkeeping is pessimistic: windows shrink
//! under arithmetic, never grow, so no tail coefficient is ever silently
//! wrong. Exact polynomials carry the sentinel order [`ORDER_EXACT`].

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{QError, Result};
use crate::qalg::coeff::{Coef, Domain};

/// Sentinel order for exact Laurent polynomials (all degrees known).
/// Large enough to dominate every real truncation order, small enough that
/// saturating window arithmetic cannot overflow.
pub const ORDER_EXACT: i64 = i64::MAX / 4;

fn sat(x: i64) -> i64 {
    x.clamp(-ORDER_EXACT, ORDER_EXACT)
}

/// Truncated formal Laurent series in q.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    domain: Domain,
    min_deg: i64,
    order: i64,
    coeffs: BTreeMap<i64, Coef>,
}

impl QSeries {
    // -- construction --------------------------------------------------------

    pub fn from_coeffs(
        domain: Domain,
        min_deg: i64,
        order: i64,
        coeffs: BTreeMap<i64, Coef>,
    ) -> Self {
        let mut s = QSeries { domain, min_deg: sat(min_deg), order: sat(order), coeffs };
        s.normalize();
        s
    }

    /// The exact zero series.
    pub fn zero(domain: &Domain) -> Self {
        QSeries {
            domain: domain.clone(),
            min_deg: ORDER_EXACT,
            order: ORDER_EXACT,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(domain: &Domain) -> Self {
        QSeries::monomial(domain, Coef::one(domain), 0)
    }

    /// Exact single-term series c * q^deg.
    pub fn monomial(domain: &Domain, c: Coef, deg: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(deg, c);
        }
        QSeries::from_coeffs(domain.clone(), deg, ORDER_EXACT, coeffs)
    }

    fn normalize(&mut self) {
        // Degrees outside the window carry no information; absent in-window
        // degrees mean zero, so stored zeros are dropped.
        let order = self.order;
        self.coeffs.retain(|&d, c| d <= order && !c.is_zero());
        match self.coeffs.keys().next() {
            // The lowest surviving key is the true valuation within knowledge.
            Some(&lo) => self.min_deg = lo,
            // All known coefficients vanish.
            None => self.min_deg = if self.is_exact() { ORDER_EXACT } else { sat(self.order + 1) },
        }
    }

    // -- accessors ------------------------------------------------------------

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Lower bound for the support: coefficients below are provably zero.
    pub fn min_deg(&self) -> i64 {
        self.min_deg
    }

    /// Highest degree with an exactly known coefficient.
    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order >= ORDER_EXACT
    }

    /// True if every known coefficient is zero. For an exact series this
    /// means the series is identically zero.
    pub fn is_zero_to_order(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of q^deg; zero below `min_deg` or when absent in-window.
    /// Degrees above `order` are unknown and also report zero, so callers
    /// should stay inside the window.
    pub fn coeff(&self, deg: i64) -> Coef {
        self.coeffs.get(&deg).cloned().unwrap_or_else(|| Coef::zero(&self.domain))
    }

    /// Lowest degree carrying a nonzero coefficient, if any is known.
    pub fn low_deg(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Highest stored degree.
    pub fn high_deg(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &Coef)> {
        self.coeffs.iter()
    }

    // -- arithmetic -----------------------------------------------------------

    /// Coefficientwise sum; the window is the intersection of the inputs'.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.domain.check_same(&other.domain)?;
        let order = self.order.min(other.order);
        let min_deg = self.min_deg.min(other.min_deg);
        let mut coeffs = self.coeffs.clone();
        coeffs.retain(|&d, _| d <= order);
        for (&d, c) in &other.coeffs {
            if d > order {
                continue;
            }
            let entry = coeffs.entry(d).or_insert_with(|| Coef::zero(&self.domain));
            *entry = entry.add(c);
        }
        Ok(QSeries::from_coeffs(self.domain.clone(), min_deg, order, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QSeries {
            domain: self.domain.clone(),
            min_deg: self.min_deg,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(&d, c)| (d, c.neg())).collect(),
        }
    }

    /// Cauchy product. min_deg adds; the order is the best absolute degree to
    /// which the product is determined by the known windows.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.domain.check_same(&other.domain)?;
        let order = if self.is_exact() && other.is_exact() {
            ORDER_EXACT
        } else {
            sat(self.order.saturating_add(other.min_deg))
                .min(sat(other.order.saturating_add(self.min_deg)))
        };
        let min_deg = sat(self.min_deg.saturating_add(other.min_deg));
        let mut coeffs: BTreeMap<i64, Coef> = BTreeMap::new();
        for (&da, ca) in &self.coeffs {
            for (&db, cb) in &other.coeffs {
                let d = da + db;
                if d > order {
                    break; // other.coeffs is sorted ascending
                }
                let prod = ca.mul(cb);
                if prod.is_zero() {
                    continue;
                }
                let entry = coeffs.entry(d).or_insert_with(|| Coef::zero(&self.domain));
                *entry = entry.add(&prod);
            }
        }
        Ok(QSeries::from_coeffs(self.domain.clone(), min_deg, order, coeffs))
    }

    pub fn mul_coef(&self, c: &Coef) -> Self {
        if c.is_zero() {
            return QSeries::zero(&self.domain);
        }
        QSeries {
            domain: self.domain.clone(),
            min_deg: self.min_deg,
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .filter_map(|(&d, x)| {
                    let p = x.mul(c);
                    if p.is_zero() { None } else { Some((d, p)) }
                })
                .collect(),
        }
    }

    /// Multiply by q^d (shift every degree and the window).
    pub fn shift(&self, d: i64) -> Self {
        if d == 0 || self.coeffs.is_empty() && self.is_exact() {
            return self.clone();
        }
        QSeries {
            domain: self.domain.clone(),
            min_deg: sat(self.min_deg.saturating_add(d)),
            order: if self.is_exact() { ORDER_EXACT } else { sat(self.order.saturating_add(d)) },
            coeffs: self.coeffs.iter().map(|(&k, c)| (k + d, c.clone())).collect(),
        }
    }

    /// Drop knowledge above degree `n`.
    pub fn truncate(&self, n: i64) -> Self {
        let mut s = self.clone();
        s.order = s.order.min(n);
        s.normalize();
        s
    }

    /// Multiplicative inverse with result coefficients computed up to degree
    /// `target_order` (absolute). Requires an invertible lowest coefficient:
    /// a nonzero rational, or a unit Laurent monomial in symbolic mode.
    pub fn inv_to(&self, target_order: i64) -> Result<Self> {
        let d0 = match self.low_deg() {
            Some(d) => d,
            None => {
                return Err(QError::BadInversion(if self.is_exact() {
                    "series is identically zero".into()
                } else {
                    format!("series is zero up to its order {}", self.order)
                }))
            }
        };
        let c0 = self.coeff(d0);
        let inv_c0 = c0.inv()?;
        // The inverse of an exact monomial is again an exact monomial.
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(QSeries::monomial(&self.domain, inv_c0, -d0));
        }
        // Relative precision of the input bounds the output order.
        let order = if self.is_exact() {
            sat(target_order)
        } else {
            sat(target_order).min(sat(self.order - 2 * d0))
        };
        let mut coeffs: BTreeMap<i64, Coef> = BTreeMap::new();
        if -d0 > order {
            return Ok(QSeries::from_coeffs(self.domain.clone(), -d0, order, coeffs));
        }
        coeffs.insert(-d0, inv_c0.clone());
        // b_t = -c0^{-1} * sum_{i>d0} a_i b_{t+d0-i}
        for t in (-d0 + 1)..=order {
            let mut acc = Coef::zero(&self.domain);
            for (&i, ai) in self.coeffs.range((d0 + 1)..=(t + 2 * d0)) {
                if let Some(bj) = coeffs.get(&(t + d0 - i)) {
                    acc = acc.add(&ai.mul(bj));
                }
            }
            if !acc.is_zero() {
                coeffs.insert(t, acc.mul(&inv_c0).neg());
            }
        }
        Ok(QSeries::from_coeffs(self.domain.clone(), -d0, order, coeffs))
    }

    /// Inverse using the input's own order; exact non-monomial polynomials
    /// need [`QSeries::inv_to`] with an explicit target.
    pub fn inv(&self) -> Result<Self> {
        if self.is_exact() && self.coeffs.len() > 1 {
            return Err(QError::BadInversion(
                "inverse of an exact polynomial is an infinite series; use inv_to".into(),
            ));
        }
        self.inv_to(self.order)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = QSeries::one(&self.domain);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    // -- comparison -----------------------------------------------------------

    /// Compare two series over the intersection of their valid windows.
    pub fn compare(&self, other: &Self) -> Result<Comparison> {
        self.domain.check_same(&other.domain)?;
        let hi = self.order.min(other.order);
        let lo = self.min_deg.min(other.min_deg).min(hi);
        let mut mismatch = None;
        let mut keys: Vec<i64> = self
            .coeffs
            .range(..=hi)
            .map(|(&d, _)| d)
            .chain(other.coeffs.range(..=hi).map(|(&d, _)| d))
            .collect();
        keys.sort_unstable();
        keys.dedup();
        for d in keys {
            let a = self.coeff(d);
            let b = other.coeff(d);
            if a != b {
                mismatch = Some((d, a, b));
                break;
            }
        }
        Ok(Comparison { window_lo: lo, window_hi: hi, mismatch })
    }

    /// True when both series agree on the whole shared window.
    pub fn eq_to_order(&self, other: &Self) -> bool {
        matches!(self.compare(other), Ok(c) if c.mismatch.is_none())
    }

    pub fn display(&self) -> String {
        format!("{}", SeriesDisplay(self))
    }
}

/// Outcome of a windowed comparison.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub window_lo: i64,
    pub window_hi: i64,
    pub mismatch: Option<(i64, Coef, Coef)>,
}

impl Comparison {
    pub fn is_eq(&self) -> bool {
        self.mismatch.is_none()
    }
}

struct SeriesDisplay<'a>(&'a QSeries);

impl fmt::Display for SeriesDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.0;
        if s.coeffs.is_empty() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for (&d, c) in s.coeffs.iter().take(24) {
                let cs = c.display(&s.domain);
                let (sign, mag) = match cs.strip_prefix('-') {
                    Some(rest) if !rest.contains(" + ") && !rest.contains(" - ") => {
                        ("-", rest.to_string())
                    }
                    _ => ("+", cs),
                };
                let needs_parens = mag.contains(' ');
                if first {
                    if sign == "-" {
                        write!(f, "-")?;
                    }
                    first = false;
                } else {
                    write!(f, " {sign} ")?;
                }
                let body = if needs_parens { format!("({mag})") } else { mag };
                if d == 0 {
                    write!(f, "{body}")?;
                } else if body == "1" {
                    write!(f, "q^{d}")?;
                } else {
                    write!(f, "{body}*q^{d}")?;
                }
            }
            if s.coeffs.len() > 24 {
                write!(f, " + ...")?;
            }
        }
        if !s.is_exact() {
            write!(f, " + O(q^{})", s.order + 1)?;
        }
        Ok(())
    }
}
