//! Exact coefficient domains: arbitrary-precision rationals and sparse
//! multivariate Laurent polynomials with integer coefficients.
//!
//! A [`Domain`] fixes the coefficient ring once per computation:
//! an empty symbol list means plain rationals (evaluation mode), a nonempty
//! list means Laurent polynomials over Z in those symbols (symbolic mode).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{QError, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

// ---------------------------------------------------------------------------
// Domain
// ---------------------------------------------------------------------------

/// Coefficient domain descriptor: the ordered list of Laurent symbols.
///
/// No symbols: coefficients are exact rationals.
/// With symbols: coefficients are Laurent polynomials over Z.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Domain(Arc<Vec<String>>);

impl Domain {
    /// Evaluation-mode domain: coefficients in Q.
    pub fn rational() -> Self {
        Domain(Arc::new(Vec::new()))
    }

    /// Symbolic-mode domain over the given ordered symbols (at most 4).
    pub fn symbolic(symbols: &[&str]) -> Self {
        assert!(symbols.len() <= 4, "at most 4 Laurent symbols are supported");
        Domain(Arc::new(symbols.iter().map(|s| s.to_string()).collect()))
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn is_rational(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.0
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|s| s == name)
    }

    pub fn check_same(&self, other: &Domain) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(QError::DomainMismatch(format!("{self:?}"), format!("{other:?}")))
        }
    }
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "Q")
        } else {
            write!(f, "Z[{}^±1]", self.0.join("^±1, "))
        }
    }
}

// ---------------------------------------------------------------------------
// Laurent polynomials
// ---------------------------------------------------------------------------

/// Sparse Laurent polynomial over Z: exponent vector -> nonzero coefficient.
///
/// The exponent vector length equals the domain arity; the map never stores
/// zero coefficients, so the zero polynomial is the empty map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly {
    terms: BTreeMap<Vec<i32>, Int>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Int) -> Self {
        let mut p = LaurentPoly::zero();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    /// Single term c * x^exps. Exponent vectors are normalised by stripping
    /// trailing zeros so that constants compare equal across arities.
    pub fn monomial(c: Int, exps: &[i32]) -> Self {
        let mut p = LaurentPoly::zero();
        if !c.is_zero() {
            p.terms.insert(trim(exps), c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.get(&Vec::new() as &Vec<i32>).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// If the polynomial is a single term, return (coefficient, exponents).
    pub fn as_monomial(&self) -> Option<(&Int, &[i32])> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            Some((c, e))
        } else {
            None
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i32>, &Int)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            add_term(&mut out.terms, e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                add_term(&mut out, add_exps(ea, eb), ca * cb);
            }
        }
        LaurentPoly { terms: out }
    }

    pub fn mul_int(&self, c: &Int) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, t)| (e.clone(), t * c)).collect(),
        }
    }

    /// Inverse of a unit: a single term with coefficient ±1.
    pub fn inv_unit(&self) -> Result<Self> {
        match self.as_monomial() {
            Some((c, e)) if c.abs().is_one() => {
                let inv_e: Vec<i32> = e.iter().map(|x| -x).collect();
                Ok(LaurentPoly::monomial(c.clone(), &inv_e))
            }
            _ => Err(QError::NonInvertibleLeading(format!("{self}"))),
        }
    }

    /// Exact division by another Laurent polynomial; `None` if not divisible.
    ///
    /// Both operands are shifted to ordinary polynomials (per-variable minimum
    /// exponent zero) and divided by classical lex-ordered long division; the
    /// quotient is shifted back. Exactness of the shifted division is
    /// equivalent to divisibility in the Laurent ring.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let shift_self = self.min_exps();
        let shift_div = divisor.min_exps();
        let f = self.shifted(&neg_exps(&shift_self));
        let g = divisor.shifted(&neg_exps(&shift_div));
        // Lex leading term of the shifted divisor.
        let (lead_e, lead_c) = {
            let (e, c) = g.terms.iter().next_back().unwrap();
            (e.clone(), c.clone())
        };
        let mut rem = f;
        let mut quo = LaurentPoly::zero();
        while !rem.is_zero() {
            let (re, rc) = {
                let (e, c) = rem.terms.iter().next_back().unwrap();
                (e.clone(), c.clone())
            };
            // Componentwise divisibility of the leading monomials; without it
            // the remainder is irreducible here, so the division is inexact.
            let n = re.len().max(lead_e.len());
            let divisible = (0..n).all(|i| {
                re.get(i).copied().unwrap_or(0) >= lead_e.get(i).copied().unwrap_or(0)
            });
            if !divisible {
                return None;
            }
            let (q, r) = num_integer::Integer::div_rem(&rc, &lead_c);
            if !r.is_zero() {
                return None;
            }
            let qe = sub_exps(&re, &lead_e);
            let qterm = LaurentPoly::monomial(q, &qe);
            rem = rem.sub(&qterm.mul(&g));
            quo = quo.add(&qterm);
        }
        Some(quo.shifted(&sub_exps(&shift_self, &shift_div)))
    }

    /// Per-variable minimum exponent over all terms (empty for constants).
    fn min_exps(&self) -> Vec<i32> {
        let n = self.terms.keys().map(|e| e.len()).max().unwrap_or(0);
        let mut mins = vec![i32::MAX; n];
        for e in self.terms.keys() {
            for (i, m) in mins.iter_mut().enumerate() {
                *m = (*m).min(e.get(i).copied().unwrap_or(0));
            }
        }
        trim(&mins.iter().map(|&m| if m == i32::MAX { 0 } else { m }).collect::<Vec<_>>())
    }

    /// Multiply by the monomial x^shift.
    fn shifted(&self, shift: &[i32]) -> Self {
        if shift.iter().all(|&s| s == 0) {
            return self.clone();
        }
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (add_exps(e, shift), c.clone()))
                .collect(),
        }
    }

    /// Substitute rational values for the symbols, producing a rational.
    pub fn eval(&self, values: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = Rat::from(c.clone());
            for (i, &exp) in e.iter().enumerate() {
                t *= rat_pow(&values[i], exp as i64);
            }
            acc += t;
        }
        acc
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: Option<&[String]>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let has_sym = e.iter().any(|&x| x != 0);
            if !mag.is_one() || !has_sym {
                write!(f, "{mag}")?;
                if has_sym {
                    write!(f, "*")?;
                }
            }
            let mut first_sym = true;
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                if !first_sym {
                    write!(f, "*")?;
                }
                first_sym = false;
                match names {
                    Some(ns) => write!(f, "{}", ns[i])?,
                    None => write!(f, "x{i}")?,
                }
                if exp != 1 {
                    write!(f, "^{exp}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, None)
    }
}

fn trim(exps: &[i32]) -> Vec<i32> {
    let mut v = exps.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn add_exps(a: &[i32], b: &[i32]) -> Vec<i32> {
    let n = a.len().max(b.len());
    let mut out = vec![0i32; n];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0);
    }
    trim(&out)
}

fn sub_exps(a: &[i32], b: &[i32]) -> Vec<i32> {
    let n = a.len().max(b.len());
    let mut out = vec![0i32; n];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = a.get(i).copied().unwrap_or(0) - b.get(i).copied().unwrap_or(0);
    }
    trim(&out)
}

fn neg_exps(a: &[i32]) -> Vec<i32> {
    trim(&a.iter().map(|&x| -x).collect::<Vec<_>>())
}

fn add_term(map: &mut BTreeMap<Vec<i32>, Int>, e: Vec<i32>, c: Int) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(e) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let sum = o.get() + c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

pub fn rat_pow(r: &Rat, n: i64) -> Rat {
    if n == 0 {
        return Rat::one();
    }
    let base = if n > 0 { r.clone() } else { r.recip() };
    let mut acc = Rat::one();
    for _ in 0..n.unsigned_abs() {
        acc *= base.clone();
    }
    acc
}

// ---------------------------------------------------------------------------
// Coefficient values
// ---------------------------------------------------------------------------

/// One exact coefficient: a rational in evaluation mode, a Laurent polynomial
/// in symbolic mode. All arithmetic assumes both operands belong to the same
/// [`Domain`]; [`crate::qalg::QSeries`] enforces that at its boundaries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Coef {
    Rat(Rat),
    Poly(LaurentPoly),
}

impl Coef {
    pub fn zero(domain: &Domain) -> Self {
        if domain.is_rational() {
            Coef::Rat(Rat::zero())
        } else {
            Coef::Poly(LaurentPoly::zero())
        }
    }

    pub fn one(domain: &Domain) -> Self {
        if domain.is_rational() {
            Coef::Rat(Rat::one())
        } else {
            Coef::Poly(LaurentPoly::constant(Int::one()))
        }
    }

    pub fn from_int(domain: &Domain, n: i64) -> Self {
        if domain.is_rational() {
            Coef::Rat(Rat::from(Int::from(n)))
        } else {
            Coef::Poly(LaurentPoly::constant(Int::from(n)))
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coef::Rat(r) => r.is_zero(),
            Coef::Poly(p) => p.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coef::Rat(r) => r.is_one(),
            Coef::Poly(p) => p.is_one(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Coef::Rat(a), Coef::Rat(b)) => Coef::Rat(a + b),
            (Coef::Poly(a), Coef::Poly(b)) => Coef::Poly(a.add(b)),
            _ => panic!("mixed coefficient kinds"),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        match (self, other) {
            (Coef::Rat(a), Coef::Rat(b)) => Coef::Rat(a - b),
            (Coef::Poly(a), Coef::Poly(b)) => Coef::Poly(a.sub(b)),
            _ => panic!("mixed coefficient kinds"),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Coef::Rat(a), Coef::Rat(b)) => Coef::Rat(a * b),
            (Coef::Poly(a), Coef::Poly(b)) => Coef::Poly(a.mul(b)),
            _ => panic!("mixed coefficient kinds"),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Coef::Rat(a) => Coef::Rat(-a),
            Coef::Poly(a) => Coef::Poly(a.neg()),
        }
    }

    /// Multiplicative inverse where the domain allows one: any nonzero
    /// rational, or a single Laurent term with coefficient ±1.
    pub fn inv(&self) -> Result<Self> {
        match self {
            Coef::Rat(a) => {
                if a.is_zero() {
                    Err(QError::NonInvertibleLeading("0".into()))
                } else {
                    Ok(Coef::Rat(a.recip()))
                }
            }
            Coef::Poly(p) => Ok(Coef::Poly(p.inv_unit()?)),
        }
    }

    /// Exact division; in the rational domain this is plain division.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        match (self, other) {
            (Coef::Rat(a), Coef::Rat(b)) => {
                if b.is_zero() {
                    None
                } else {
                    Some(Coef::Rat(a / b))
                }
            }
            (Coef::Poly(a), Coef::Poly(b)) => a.div_exact(b).map(Coef::Poly),
            _ => panic!("mixed coefficient kinds"),
        }
    }

    pub fn display(&self, domain: &Domain) -> String {
        match self {
            Coef::Rat(r) => format!("{r}"),
            Coef::Poly(p) => {
                struct D<'a>(&'a LaurentPoly, &'a [String]);
                impl fmt::Display for D<'_> {
                    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                        self.0.fmt_with(f, Some(self.1))
                    }
                }
                format!("{}", D(p, domain.symbols()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(i64, &[i32])]) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (c, e) in terms {
            p = p.add(&LaurentPoly::monomial(Int::from(*c), e));
        }
        p
    }

    #[test]
    fn laurent_mul_and_cancel() {
        // (1 + z)(1 - z) = 1 - z^2
        let a = poly(&[(1, &[]), (1, &[1])]);
        let b = poly(&[(1, &[]), (-1, &[1])]);
        let prod = a.mul(&b);
        assert_eq!(prod, poly(&[(1, &[]), (-1, &[2])]));
    }

    #[test]
    fn laurent_negative_exponents() {
        // z^-1 * z = 1
        let a = poly(&[(1, &[-1])]);
        let b = poly(&[(1, &[1])]);
        assert!(a.mul(&b).is_one());
        assert!(a.inv_unit().unwrap().mul(&a).is_one());
    }

    #[test]
    fn exact_division() {
        // (1 - z^2) / (1 - z) = 1 + z
        let num = poly(&[(1, &[]), (-1, &[2])]);
        let den = poly(&[(1, &[]), (-1, &[1])]);
        assert_eq!(num.div_exact(&den), Some(poly(&[(1, &[]), (1, &[1])])));
        // (1 - 2z) / (1 - z) is not a polynomial
        let bad = poly(&[(1, &[]), (-2, &[1])]);
        assert_eq!(bad.div_exact(&den), None);
    }

    #[test]
    fn eval_substitutes() {
        // 1 - z*w^2 at z=2, w=3 -> 1 - 18
        let p = poly(&[(1, &[]), (-1, &[1, 2])]);
        let v = p.eval(&[Rat::from(Int::from(2)), Rat::from(Int::from(3))]);
        assert_eq!(v, Rat::from(Int::from(-17)));
    }
}
