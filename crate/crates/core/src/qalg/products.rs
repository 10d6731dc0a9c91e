//! Pochhammer machinery: finite and infinite q-shifted factorials, Gaussian
//! binomial coefficients, modified theta functions, and a factored-product
//! accumulator that keeps rational-function content unexpanded until it is
//! realised as a series.
//!
//! Conventions follow the standard ones:
//!   (a;q)_0 = 1,
//!   (a;q)_n = (1-a)(1-aq)...(1-aq^{n-1})          for n > 0,
//!   (a;q)_n = 1/(aq^n;q)_{-n}                     for n < 0,
//! so 1/(q;q)_n = 0 for n < 0. The accumulator tracks vanishing factors on
//! both sides of the fraction bar, which is exactly what makes the shifted
//! Phi functions vanish at out-of-range indices instead of dividing by zero.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{QError, Result};
use crate::qalg::coeff::{Coef, Domain, Int, Rat};
use crate::qalg::monomial::ParamMonomial;
use crate::qalg::series::{QSeries, ORDER_EXACT};

// ---------------------------------------------------------------------------
// Computation context
// ---------------------------------------------------------------------------

/// Coefficient domain plus the default truncation order for realising
/// infinite objects. Values are immutable; contexts are cheap to clone.
#[derive(Clone, Debug)]
pub struct Ctx {
    pub domain: Domain,
    pub order: i64,
}

impl Ctx {
    pub fn rational(order: i64) -> Self {
        Ctx { domain: Domain::rational(), order }
    }

    pub fn symbolic(symbols: &[&str], order: i64) -> Self {
        Ctx { domain: Domain::symbolic(symbols), order }
    }

    pub fn with_order(&self, order: i64) -> Self {
        Ctx { domain: self.domain.clone(), order }
    }

    pub fn zero(&self) -> QSeries {
        QSeries::zero(&self.domain)
    }

    pub fn one(&self) -> QSeries {
        QSeries::one(&self.domain)
    }

    pub fn q_pow(&self, e: i64) -> QSeries {
        QSeries::monomial(&self.domain, Coef::one(&self.domain), e)
    }

    pub fn int(&self, n: i64) -> QSeries {
        QSeries::monomial(&self.domain, Coef::from_int(&self.domain, n), 0)
    }

    pub fn mono(&self) -> ParamMonomial {
        ParamMonomial::one(&self.domain)
    }

    pub fn q_mono(&self, e: i64) -> ParamMonomial {
        ParamMonomial::q_pow(&self.domain, e)
    }

    pub fn sym(&self, name: &str) -> ParamMonomial {
        ParamMonomial::symbol(&self.domain, name).expect("symbol not declared in domain")
    }

    pub fn rat(&self, num: i64, den: i64) -> ParamMonomial {
        ParamMonomial::rational(&self.domain, Rat::new(Int::from(num), Int::from(den)))
    }

    /// Inverse realised to this context's order.
    pub fn inv(&self, s: &QSeries) -> Result<QSeries> {
        s.inv_to(self.order)
    }

    /// Sum an iterator of series.
    pub fn sum<I: IntoIterator<Item = QSeries>>(&self, it: I) -> Result<QSeries> {
        let mut acc = self.zero();
        for t in it {
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Factored products
// ---------------------------------------------------------------------------

/// A product  prefactor * prod_X (1 - X)^{m_X}  kept in factored form.
///
/// Factors with X = 1 vanish; their net multiplicity decides whether the
/// whole product is zero (numerator side), a pole (denominator side), or an
/// indeterminate 0/0 that demands a dedicated limit formula.
#[derive(Clone, Debug)]
pub struct FactorProduct {
    domain: Domain,
    prefactor: ParamMonomial,
    factors: BTreeMap<(i64, Vec<i32>, Rat), (ParamMonomial, i64)>,
    vanishing_num: i64,
    vanishing_den: i64,
}

impl FactorProduct {
    pub fn new(domain: &Domain) -> Self {
        FactorProduct {
            domain: domain.clone(),
            prefactor: ParamMonomial::one(domain),
            factors: BTreeMap::new(),
            vanishing_num: 0,
            vanishing_den: 0,
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Multiply the running prefactor by a monomial (may be zero).
    pub fn mul_monomial(&mut self, m: &ParamMonomial) -> &mut Self {
        self.prefactor = self.prefactor.mul(m);
        self
    }

    /// Push (1 - x)^mult.
    pub fn push_factor(&mut self, x: &ParamMonomial, mult: i64) -> &mut Self {
        if mult == 0 || x.is_zero() {
            return self; // (1 - 0) = 1
        }
        if x.is_one() {
            if mult > 0 {
                self.vanishing_num += mult;
            } else {
                self.vanishing_den -= mult;
            }
            return self;
        }
        let e = self.factors.entry(x.sort_key()).or_insert_with(|| (x.clone(), 0));
        e.1 += mult;
        if e.1 == 0 {
            self.factors.remove(&x.sort_key());
        }
        self
    }

    /// Push (a; q^step)_n ^ mult with the negative-n convention.
    /// `step` may be negative, covering base q^{-1} evaluations.
    pub fn push_poch(&mut self, a: &ParamMonomial, n: i64, step: i64, mult: i64) -> &mut Self {
        debug_assert!(step != 0);
        if n >= 0 {
            for j in 0..n {
                self.push_factor(&a.mul_q_pow(step * j), mult);
            }
        } else {
            for j in 0..(-n) {
                self.push_factor(&a.mul_q_pow(step * (n + j)), -mult);
            }
        }
        self
    }

    /// Fold another factored product in.
    pub fn push_product(&mut self, other: &FactorProduct, mult: i64) -> &mut Self {
        self.prefactor = self.prefactor.mul(&match mult {
            1 => other.prefactor.clone(),
            -1 => other.prefactor.inv().expect("inverting zero prefactor"),
            _ => other.prefactor.pow(mult).expect("prefactor power"),
        });
        let (num, den) = if mult > 0 {
            (other.vanishing_num * mult, other.vanishing_den * mult)
        } else {
            (other.vanishing_den * -mult, other.vanishing_num * -mult)
        };
        self.vanishing_num += num;
        self.vanishing_den += den;
        for (x, m) in other.factors.values() {
            self.push_factor(x, m * mult);
        }
        self
    }

    /// True if the product is identically zero (vanishing numerator factor
    /// or zero prefactor, with no vanishing denominator factor).
    pub fn is_zero(&self) -> bool {
        self.vanishing_den == 0 && (self.prefactor.is_zero() || self.vanishing_num > 0)
    }

    /// Realise as a series exact to `ctx.order` (absolute degree).
    pub fn realize(&self, ctx: &Ctx) -> Result<QSeries> {
        // Vanishing factors on both sides of the fraction bar are a genuine
        // 0/0: the caller must use a dedicated limit form.
        if self.vanishing_num > 0 && self.vanishing_den > 0 {
            return Err(QError::Indeterminate);
        }
        if self.vanishing_den > 0 {
            return Err(QError::Pole("a (1 - 1) factor sits in the denominator".into()));
        }
        if self.prefactor.is_zero() || self.vanishing_num > 0 {
            return Ok(ctx.zero());
        }
        let mut num = ctx.one();
        let mut den = ctx.one();
        for (x, m) in self.factors.values() {
            let f = x.one_minus()?;
            let (target, count) = if *m > 0 { (&mut num, *m) } else { (&mut den, -*m) };
            for _ in 0..count {
                *target = target.mul(&f)?;
            }
        }
        // num and den are exact polynomials; the denominator's inverse must
        // reach far enough that after the numerator and prefactor shifts the
        // result is still exact to ctx.order.
        let num_min = num.low_deg().unwrap_or(0);
        let target = ctx
            .order
            .saturating_sub(self.prefactor.q_exp())
            .saturating_sub(num_min)
            .min(ORDER_EXACT);
        let inv_den = den.inv_to(target)?;
        let pre = self.prefactor.to_series()?;
        num.mul(&inv_den)?.mul(&pre)
    }
}

// ---------------------------------------------------------------------------
// q-Pochhammer symbols
// ---------------------------------------------------------------------------

/// (a; q^base_step)_n for any integer n. Finite n >= 0 gives an exact
/// polynomial; n < 0 realises the inverse product to ctx.order and reports a
/// pole when an inverse factor vanishes.
pub fn poch(ctx: &Ctx, a: &ParamMonomial, n: i64, base_step: u32) -> Result<QSeries> {
    let mut p = FactorProduct::new(&ctx.domain);
    p.push_poch(a, n, base_step as i64, 1);
    p.realize(ctx)
}

/// (a1, ..., ak; q^base_step)_n as a single exact product.
pub fn poch_multi(ctx: &Ctx, args: &[&ParamMonomial], n: i64, base_step: u32) -> Result<QSeries> {
    let mut p = FactorProduct::new(&ctx.domain);
    for a in args {
        p.push_poch(a, n, base_step as i64, 1);
    }
    p.realize(ctx)
}

/// (a; q^base_step)_inf truncated to ctx.order.
///
/// The product stabilises degree by degree whenever the finitely many factors
/// of nonpositive q-degree have no free-symbol content; a free symbol at
/// q-degree <= 0 would smear over the whole window and is rejected.
pub fn poch_inf(ctx: &Ctx, a: &ParamMonomial, base_step: u32) -> Result<QSeries> {
    let step = base_step as i64;
    if a.is_zero() {
        return Ok(ctx.one());
    }
    if a.has_symbols() && a.q_exp() <= 0 {
        return Err(QError::NonconvergentProduct(format!("{a}")));
    }
    // Negative-degree factors shift the window down; the cutoff extends so
    // the product is still exact to ctx.order after those shifts.
    let mut neg_shift = 0i64;
    let mut j = 0i64;
    while a.q_exp() + step * j < 0 {
        neg_shift += a.q_exp() + step * j;
        j += 1;
    }
    let cutoff = ctx.order - neg_shift;
    let mut acc = ctx.one();
    let mut j = 0i64;
    loop {
        let e = a.q_exp() + step * j;
        if e > cutoff {
            break;
        }
        acc = acc.mul(&a.mul_q_pow(step * j).one_minus()?)?.truncate(cutoff);
        j += 1;
    }
    // Dropped factors only touch degrees beyond ctx.order.
    Ok(acc.truncate(ctx.order))
}

// ---------------------------------------------------------------------------
// Gaussian binomial coefficients
// ---------------------------------------------------------------------------

static QBINOM_CACHE: OnceLock<Mutex<HashMap<(i64, i64), Arc<Vec<Int>>>>> = OnceLock::new();

/// Dense coefficient list of the Gaussian binomial [n choose m]_q,
/// via the Pascal recurrence [n,m] = [n-1,m-1] + q^m [n-1,m].
fn qbinom_poly(n: i64, m: i64) -> Arc<Vec<Int>> {
    debug_assert!((0..=n).contains(&m));
    let m = m.min(n - m); // symmetry: [n,m] = [n,n-m]
    let cache = QBINOM_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(n, m)) {
        return hit.clone();
    }
    let mut row: Vec<Arc<Vec<Int>>> = vec![Arc::new(vec![Int::one()])];
    for nn in 1..=n {
        let mut next: Vec<Arc<Vec<Int>>> = Vec::with_capacity((m + 1) as usize);
        for mm in 0..=m.min(nn) {
            if mm == 0 {
                next.push(Arc::new(vec![Int::one()]));
                continue;
            }
            if mm == nn {
                next.push(Arc::new(vec![Int::one()]));
                continue;
            }
            let a = &row[(mm - 1) as usize]; // [nn-1, mm-1]
            let b = &row[mm as usize]; // [nn-1, mm]
            let deg = (mm * (nn - mm)) as usize;
            let mut out = vec![Int::zero(); deg + 1];
            for (i, c) in a.iter().enumerate() {
                out[i] += c;
            }
            for (i, c) in b.iter().enumerate() {
                out[i + mm as usize] += c;
            }
            next.push(Arc::new(out));
        }
        row = next;
    }
    let result = row[m as usize].clone();
    cache.lock().unwrap().insert((n, m), result.clone());
    result
}

/// Gaussian binomial coefficient [n choose m] in base q^base_step, as an
/// exact polynomial; zero unless 0 <= m <= n.
pub fn qbinom(ctx: &Ctx, n: i64, m: i64, base_step: u32) -> QSeries {
    if m < 0 || m > n {
        return ctx.zero();
    }
    let poly = qbinom_poly(n, m);
    let step = base_step as i64;
    let to_coef = |c: &Int| {
        if ctx.domain.is_rational() {
            Coef::Rat(Rat::from(c.clone()))
        } else {
            Coef::Poly(crate::qalg::coeff::LaurentPoly::constant(c.clone()))
        }
    };
    let coeffs: BTreeMap<i64, Coef> = poly
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64 * step, to_coef(c)))
        .collect();
    QSeries::from_coeffs(ctx.domain.clone(), 0, ORDER_EXACT, coeffs)
}

// ---------------------------------------------------------------------------
// Theta functions
// ---------------------------------------------------------------------------

/// Modified theta function theta(a; q^modulus) = (a;q^m)_inf (q^m/a;q^m)_inf.
pub fn theta(ctx: &Ctx, a: &ParamMonomial, modulus: u32) -> Result<QSeries> {
    if a.is_zero() {
        return Err(QError::BadParameter("theta(0; q) is not defined".into()));
    }
    let qm_over_a = ctx.q_mono(modulus as i64).div(a)?;
    let f1 = poch_inf(ctx, a, modulus)?;
    let f2 = poch_inf(ctx, &qm_over_a, modulus)?;
    f1.mul(&f2)
}

/// theta(a1, ..., ak; q^modulus) = theta(a1) ... theta(ak).
pub fn theta_multi(ctx: &Ctx, args: &[&ParamMonomial], modulus: u32) -> Result<QSeries> {
    let mut acc = ctx.one();
    for a in args {
        acc = acc.mul(&theta(ctx, a, modulus)?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poch_q_2_expands() {
        // (q;q)_2 = (1-q)(1-q^2) = 1 - q - q^2 + q^3
        let ctx = Ctx::rational(20);
        let p = poch(&ctx, &ctx.q_mono(1), 2, 1).unwrap();
        let expect = ctx
            .one()
            .sub(&ctx.q_pow(1))
            .unwrap()
            .sub(&ctx.q_pow(2))
            .unwrap()
            .add(&ctx.q_pow(3))
            .unwrap();
        assert!(p.eq_to_order(&expect));
        assert!(p.is_exact());
    }

    #[test]
    fn poch_negative_index_convention() {
        // (zq;q)_{-1} = 1/(z;q)_1 = 1/(1-z); at z = 1/2 this is 2/(2-1)=2*(1+q*0...)
        let ctx = Ctx::rational(10);
        let z = ctx.rat(1, 2);
        let p = poch(&ctx, &z.mul(&ctx.q_mono(1)), -1, 1).unwrap();
        // 1/(1 - 1/2) = 2
        assert_eq!(p.coeff(0), Coef::Rat(Rat::new(Int::from(2), Int::from(1))));
        assert!(p.high_deg() == Some(0));
    }

    #[test]
    fn inverse_poch_of_vanishing_factor_is_pole() {
        // (q;q)_{-1} = 1/(1 - q^0) -> pole
        let ctx = Ctx::rational(10);
        let err = poch(&ctx, &ctx.q_mono(1), -1, 1).unwrap_err();
        assert!(matches!(err, QError::Pole(_)));
    }

    #[test]
    fn qbinom_4_2() {
        // [4,2] = 1 + q + 2q^2 + q^3 + q^4
        let ctx = Ctx::rational(20);
        let b = qbinom(&ctx, 4, 2, 1);
        let vals: Vec<i64> = (0..=4)
            .map(|d| match b.coeff(d) {
                Coef::Rat(r) => {
                    assert!(r.is_integer());
                    i64::try_from(r.numer().clone()).unwrap()
                }
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(vals, vec![1, 1, 2, 1, 1]);
    }

    #[test]
    fn qbinom_out_of_range_is_zero() {
        let ctx = Ctx::rational(20);
        assert!(qbinom(&ctx, 2, 3, 1).is_zero_to_order());
        assert!(qbinom(&ctx, 2, -1, 1).is_zero_to_order());
        assert!(qbinom(&ctx, 5, 0, 1).eq_to_order(&ctx.one()));
    }

    #[test]
    fn poch_inf_euler_pentagonal() {
        // (q;q)_inf = 1 - q - q^2 + q^5 + q^7 - q^12 - q^15 + ...
        let ctx = Ctx::rational(16);
        let e = poch_inf(&ctx, &ctx.q_mono(1), 1).unwrap();
        let expected = [
            (0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1),
        ];
        for d in 0..=15 {
            let want = expected.iter().find(|(k, _)| *k == d).map(|(_, v)| *v).unwrap_or(0);
            assert_eq!(e.coeff(d), Coef::Rat(Rat::from(Int::from(want))), "degree {d}");
        }
    }

    #[test]
    fn poch_inf_free_symbol_rejected_at_degree_zero() {
        let ctx = Ctx::symbolic(&["z"], 10);
        let z = ctx.sym("z");
        assert!(matches!(
            poch_inf(&ctx, &z, 1),
            Err(QError::NonconvergentProduct(_))
        ));
        // but (zq;q)_inf is fine
        assert!(poch_inf(&ctx, &z.mul(&ctx.q_mono(1)), 1).is_ok());
    }

    #[test]
    fn theta_symmetry_z_to_q_over_z() {
        // theta(q^{a+1}; q^K) = theta(q^{K-a-1}; q^K)
        let ctx = Ctx::rational(40);
        for (a, k) in [(0i64, 5u32), (1, 5), (2, 7), (3, 9)] {
            let t1 = theta(&ctx, &ctx.q_mono(a + 1), k).unwrap();
            let t2 = theta(&ctx, &ctx.q_mono(k as i64 - a - 1), k).unwrap();
            assert!(t1.eq_to_order(&t2), "a={a} K={k}");
        }
    }
}
