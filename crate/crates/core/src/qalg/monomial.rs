//! Parameter monomials c * q^e0 * s1^e1 * ... * sk^ek.
//!
//! These are the admissible arguments of Pochhammer symbols and theta
//! functions, and they house every specialisable parameter (z, w, u, v, c, d,
//! x_i, ...). The zero monomial is allowed so that w = 0 and z = 0
//! specialisations work through the same code paths; (0;q)_n = 1.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{QError, Result};
use crate::qalg::coeff::{rat_pow, Coef, Domain, Int, LaurentPoly, Rat};
use crate::qalg::series::QSeries;

/// c * q^{q_exp} * prod_i sym_i^{sym_exps[i]} over a fixed [`Domain`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParamMonomial {
    domain: Domain,
    coef: Rat,
    q_exp: i64,
    sym_exps: Vec<i32>,
}

impl ParamMonomial {
    pub fn new(domain: &Domain, coef: Rat, q_exp: i64, sym_exps: Vec<i32>) -> Self {
        assert_eq!(sym_exps.len(), domain.arity(), "exponent vector must match domain arity");
        if coef.is_zero() {
            return Self::zero(domain);
        }
        ParamMonomial { domain: domain.clone(), coef, q_exp, sym_exps }
    }

    pub fn zero(domain: &Domain) -> Self {
        ParamMonomial {
            domain: domain.clone(),
            coef: Rat::zero(),
            q_exp: 0,
            sym_exps: vec![0; domain.arity()],
        }
    }

    pub fn one(domain: &Domain) -> Self {
        Self::q_pow(domain, 0)
    }

    pub fn q(domain: &Domain) -> Self {
        Self::q_pow(domain, 1)
    }

    pub fn q_pow(domain: &Domain, e: i64) -> Self {
        ParamMonomial {
            domain: domain.clone(),
            coef: Rat::one(),
            q_exp: e,
            sym_exps: vec![0; domain.arity()],
        }
    }

    pub fn rational(domain: &Domain, c: Rat) -> Self {
        Self::new(domain, c, 0, vec![0; domain.arity()])
    }

    pub fn int(domain: &Domain, c: i64) -> Self {
        Self::rational(domain, Rat::from(Int::from(c)))
    }

    /// The declared symbol with the given name, as a monomial.
    pub fn symbol(domain: &Domain, name: &str) -> Result<Self> {
        let idx = domain
            .symbol_index(name)
            .ok_or_else(|| QError::BadParameter(format!("unknown symbol {name}")))?;
        let mut exps = vec![0; domain.arity()];
        exps[idx] = 1;
        Ok(ParamMonomial { domain: domain.clone(), coef: Rat::one(), q_exp: 0, sym_exps: exps })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.coef.is_one() && self.q_exp == 0 && self.sym_exps.iter().all(|&e| e == 0)
    }

    pub fn coef(&self) -> &Rat {
        &self.coef
    }

    pub fn q_exp(&self) -> i64 {
        self.q_exp
    }

    pub fn has_symbols(&self) -> bool {
        self.sym_exps.iter().any(|&e| e != 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.domain, other.domain);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.domain);
        }
        ParamMonomial {
            domain: self.domain.clone(),
            coef: &self.coef * &other.coef,
            q_exp: self.q_exp + other.q_exp,
            sym_exps: self
                .sym_exps
                .iter()
                .zip(&other.sym_exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(QError::BadParameter("cannot invert the zero monomial".into()));
        }
        Ok(ParamMonomial {
            domain: self.domain.clone(),
            coef: self.coef.recip(),
            q_exp: -self.q_exp,
            sym_exps: self.sym_exps.iter().map(|&e| -e).collect(),
        })
    }

    /// m^n for any integer n; 0^0 = 1, 0^n = 0 for n > 0, 0^n errors for n < 0.
    pub fn pow(&self, n: i64) -> Result<Self> {
        if self.is_zero() {
            return match n {
                0 => Ok(Self::one(&self.domain)),
                _ if n > 0 => Ok(Self::zero(&self.domain)),
                _ => Err(QError::BadParameter("0 raised to a negative power".into())),
            };
        }
        let exps_fit = |e: i32| -> Result<i32> {
            let v = (e as i64) * n;
            i32::try_from(v).map_err(|_| QError::BadParameter("symbol exponent overflow".into()))
        };
        Ok(ParamMonomial {
            domain: self.domain.clone(),
            coef: rat_pow(&self.coef, n),
            q_exp: self.q_exp * n,
            sym_exps: self.sym_exps.iter().map(|&e| exps_fit(e)).collect::<Result<_>>()?,
        })
    }

    pub fn mul_q_pow(&self, e: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut m = self.clone();
        m.q_exp += e;
        m
    }

    pub fn neg(&self) -> Self {
        let mut m = self.clone();
        m.coef = -m.coef;
        m
    }

    /// The non-q part as a domain coefficient. Symbolic domains require the
    /// rational part to be an integer, matching the Laurent ring over Z.
    pub fn to_coef(&self) -> Result<Coef> {
        if self.domain.is_rational() {
            return Ok(Coef::Rat(self.coef.clone()));
        }
        if self.is_zero() {
            return Ok(Coef::Poly(LaurentPoly::zero()));
        }
        if !self.coef.denom().abs().is_one() {
            return Err(QError::NonIntegerSymbolic(format!("{self}")));
        }
        let c: BigInt = self.coef.numer() * self.coef.denom().signum();
        Ok(Coef::Poly(LaurentPoly::monomial(c, &self.sym_exps)))
    }

    /// The monomial as an exact one-term series.
    pub fn to_series(&self) -> Result<QSeries> {
        if self.is_zero() {
            return Ok(QSeries::zero(&self.domain));
        }
        Ok(QSeries::monomial(&self.domain, self.to_coef()?, self.q_exp))
    }

    /// The exact two-term series 1 - m.
    pub fn one_minus(&self) -> Result<QSeries> {
        QSeries::one(&self.domain).sub(&self.to_series()?)
    }

    /// Canonical key for ordering factors deterministically.
    pub fn sort_key(&self) -> (i64, Vec<i32>, Rat) {
        (self.q_exp, self.sym_exps.clone(), self.coef.clone())
    }
}

impl fmt::Display for ParamMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if !self.coef.is_one() || (self.q_exp == 0 && !self.has_symbols()) {
            parts.push(format!("{}", self.coef));
        }
        if self.q_exp == 1 {
            parts.push("q".into());
        } else if self.q_exp != 0 {
            parts.push(format!("q^{}", self.q_exp));
        }
        for (i, &e) in self.sym_exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = &self.domain.symbols()[i];
            if e == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{e}"));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}
