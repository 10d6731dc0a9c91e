//! Andrews-Gordon-type character identities for the W3(3,K) algebra,
//! 3 not dividing K: the normalised characters
//!
//!   chitilde_{a,b}^K = (q^K;q^K)_inf^2 / (q;q)_inf^2
//!                      * theta(q^{a+1}, q^{b+1}, q^{a+b+2}; q^K)
//!
//! equal binomial-form multisums, one family for K = 3k+4 and one for
//! K = 3k+2, each a difference of two multisums with delta-shifted Gaussian
//! binomials (plus a single-sum form at a = b = k).

use num_rational::BigRational;

use crate::error::{QError, Result};
use crate::qalg::{poch_inf, qbinom, theta_multi, Ctx, Int, QSeries, Rat};
use crate::suites::multisum::{inv_poch_table, row_cap};

/// Central charge and conformal weight data for W3(3,K).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct W3Data {
    pub modulus: i64,
    pub a: i64,
    pub b: i64,
    /// c = -2(K-4)(4K-9)/K
    pub central_charge: Rat,
    /// h_{a,b} = (a^2 + ab + b^2 - (K-3)(a+b))/K
    pub conformal_weight: Rat,
}

/// Exact central charge and conformal weight; requires 3 not divide K and
/// a + b <= K - 3.
pub fn w3_weights(modulus: i64, a: i64, b: i64) -> Result<W3Data> {
    if modulus % 3 == 0 {
        return Err(QError::BadParameter(format!("modulus {modulus} divisible by 3")));
    }
    if modulus < 5 || a < 0 || b < 0 || a + b > modulus - 3 {
        return Err(QError::BadParameter(format!(
            "need K >= 5 and 0 <= a,b with a+b <= K-3; got K={modulus} a={a} b={b}"
        )));
    }
    let k = Int::from(modulus);
    let c = BigRational::new(Int::from(-2 * (modulus - 4) * (4 * modulus - 9)), k.clone());
    let h = BigRational::new(
        Int::from(a * a + a * b + b * b - (modulus - 3) * (a + b)),
        k,
    );
    Ok(W3Data { modulus, a, b, central_charge: c, conformal_weight: h })
}

/// chitilde_{a,b}^K as an infinite product.
pub fn chitilde(ctx: &Ctx, modulus: i64, a: i64, b: i64) -> Result<QSeries> {
    let ku = modulus as u32;
    let t = theta_multi(
        ctx,
        &[&ctx.q_mono(a + 1), &ctx.q_mono(b + 1), &ctx.q_mono(a + b + 2)],
        ku,
    )?;
    poch_inf(ctx, &ctx.q_mono(modulus), ku)?
        .pow(2)?
        .mul(&poch_inf(ctx, &ctx.q_mono(1), 1)?.inv_to(ctx.order)?.pow(2)?)?
        .mul(&t)
}

/// Which identity family (by modulus) a multisum belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AgFamily {
    /// K = 3k + 4.
    I,
    /// K = 3k + 2.
    II,
}

impl AgFamily {
    pub fn modulus(&self, k: i64) -> i64 {
        match self {
            AgFamily::I => 3 * k + 4,
            AgFamily::II => 3 * k + 2,
        }
    }
}

/// One binomial multisum (family I):
///
///   sum over l, m in N_0^k of q^{extra + sum_{i >= la} l_i + sum_{i >= lb} m_i}
///     / (q;q)_{l_1} prod_{i=1}^k q^{l_i^2 - l_i m_i + m_i^2}
///       [l_i; l_{i+1}] [l_i - l_{i+1} + m_{i+1} + delta_{dlt,i}; m_i]
///
/// with l_{k+1} := 0 and m_{k+1} := l_k. Computed by a transfer recursion
/// over rows i = k .. 1 with memoised states (l_i, m_i).
fn family1_sum(ctx: &Ctx, k: i64, la: i64, lb: i64, dlt: i64, extra: i64) -> Result<QSeries> {
    let cap = row_cap(ctx.order, 0, 0);
    let states: Vec<(i64, i64)> =
        (0..=cap).flat_map(|t| (0..=t).map(move |x| (x, t - x))).collect();
    let lin = |i: i64, x: i64, y: i64| {
        let mut e = 0;
        if i >= la {
            e += x;
        }
        if i >= lb {
            e += y;
        }
        e
    };
    // innermost row i = k: [x;0] [2x + delta_{dlt,k}; y]
    let mut level: std::collections::HashMap<(i64, i64), QSeries> =
        std::collections::HashMap::new();
    for &(x, y) in &states {
        let e = x * x - x * y + y * y + lin(k, x, y);
        if e > ctx.order {
            continue;
        }
        let d = if dlt == k { 1 } else { 0 };
        let qb = qbinom(ctx, 2 * x + d, y, 1);
        if qb.is_zero_to_order() {
            continue;
        }
        level.insert((x, y), qb.shift(e));
    }
    for i in (1..k).rev() {
        let mut next = std::collections::HashMap::new();
        for &(x, y) in &states {
            let e = x * x - x * y + y * y + lin(i, x, y);
            if e > ctx.order {
                continue;
            }
            let d = if dlt == i { 1 } else { 0 };
            let mut acc = ctx.zero();
            let mut any = false;
            for (&(xp, yp), f) in &level {
                // [x; xp] [x - xp + yp + d; y]
                let b1 = qbinom(ctx, x, xp, 1);
                if b1.is_zero_to_order() {
                    continue;
                }
                let b2 = qbinom(ctx, x - xp + yp + d, y, 1);
                if b2.is_zero_to_order() {
                    continue;
                }
                acc = acc.add(&b1.mul(&b2)?.mul(f)?)?;
                any = true;
            }
            if !any {
                continue;
            }
            let t = acc.shift(e);
            if t.min_deg() <= ctx.order && !t.is_zero_to_order() {
                next.insert((x, y), t);
            }
        }
        level = next;
    }
    let inv_q = inv_poch_table(ctx, 1, 1, cap)?;
    let mut sum = ctx.zero();
    for (&(x, _y), f) in &level {
        sum = sum.add(&f.mul(&inv_q[x as usize])?)?;
    }
    Ok(sum.truncate(ctx.order).shift(extra))
}

/// One binomial multisum (family II): l in N_0^k, m in N_0^{k-1},
/// with m_k := 2 l_k, lambda_{k+1} := 0 and the extra q^{l_k^2}:
///
///   sum q^{extra + l_k^2 + sum_{i>=la} l_i + sum_{i>=lb, i<k} m_i} / (q;q)_{l_1}
///       prod_{i=1}^{k-1} q^{l_i^2-l_i m_i+m_i^2}
///       [l_i; l_{i+1}] [l_i - l_{i+1} + m_{i+1} + delta_{dlt,i}; m_i].
fn family2_sum(ctx: &Ctx, k: i64, la: i64, lb: i64, dlt: i64, extra: i64) -> Result<QSeries> {
    let cap = row_cap(ctx.order, 0, 0);
    let inv_q = inv_poch_table(ctx, 1, 1, cap)?;
    if k == 1 {
        // no m variables at all
        let mut sum = ctx.zero();
        for x in 0..=cap {
            let e = x * x + if 1 >= la { x } else { 0 };
            if e > ctx.order {
                continue;
            }
            sum = sum.add(&inv_q[x as usize].shift(e))?;
        }
        return Ok(sum.truncate(ctx.order).shift(extra));
    }
    let states: Vec<(i64, i64)> =
        (0..=cap).flat_map(|t| (0..=t).map(move |x| (x, t - x))).collect();
    // innermost: sum over l_k with m_k := 2 l_k, rows i = k-1 use
    // [l_{k-1}; l_k] [l_{k-1} - l_k + 2 l_k + delta; m_{k-1}]
    let mut level: std::collections::HashMap<(i64, i64), QSeries> =
        std::collections::HashMap::new();
    for &(x, y) in &states {
        // (x, y) = (l_{k-1}, m_{k-1})
        let i = k - 1;
        let e_row = x * x - x * y + y * y + if i >= la { x } else { 0 } + if i >= lb { y } else { 0 };
        if e_row > ctx.order {
            continue;
        }
        let d = if dlt == i { 1 } else { 0 };
        let mut acc = ctx.zero();
        let mut any = false;
        for lk in 0..=x {
            let e_k = lk * lk + if k >= la { lk } else { 0 };
            if e_row + e_k > ctx.order {
                continue;
            }
            let b1 = qbinom(ctx, x, lk, 1);
            let b2 = qbinom(ctx, x + lk + d, y, 1);
            if b1.is_zero_to_order() || b2.is_zero_to_order() {
                continue;
            }
            acc = acc.add(&b1.mul(&b2)?.shift(e_k))?;
            any = true;
        }
        if !any {
            continue;
        }
        level.insert((x, y), acc.shift(e_row));
    }
    for i in (1..k - 1).rev() {
        let mut next = std::collections::HashMap::new();
        for &(x, y) in &states {
            let e = x * x - x * y + y * y
                + if i >= la { x } else { 0 }
                + if i >= lb { y } else { 0 };
            if e > ctx.order {
                continue;
            }
            let d = if dlt == i { 1 } else { 0 };
            let mut acc = ctx.zero();
            let mut any = false;
            for (&(xp, yp), f) in &level {
                let b1 = qbinom(ctx, x, xp, 1);
                if b1.is_zero_to_order() {
                    continue;
                }
                let b2 = qbinom(ctx, x - xp + yp + d, y, 1);
                if b2.is_zero_to_order() {
                    continue;
                }
                acc = acc.add(&b1.mul(&b2)?.mul(f)?)?;
                any = true;
            }
            if !any {
                continue;
            }
            let t = acc.shift(e);
            if t.min_deg() <= ctx.order && !t.is_zero_to_order() {
                next.insert((x, y), t);
            }
        }
        level = next;
    }
    let mut sum = ctx.zero();
    for (&(x, _y), f) in &level {
        sum = sum.add(&f.mul(&inv_q[x as usize])?)?;
    }
    Ok(sum.truncate(ctx.order).shift(extra))
}

/// The two-multisum character expression of the given family:
/// S+ (with delta_{b,i}) minus S- (with delta_{b-1,i} and shifted linear
/// sums); for a = 0 or b = 0 the second sum vanishes identically by the
/// convention q^{l_0} = q^{m_0} := 0.
pub fn ag_char_multisum(ctx: &Ctx, family: AgFamily, k: i64, a: i64, b: i64) -> Result<QSeries> {
    if !(0..=k).contains(&a) || !(0..=k).contains(&b) {
        return Err(QError::BadParameter(format!("need 0 <= a,b <= k, got a={a} b={b} k={k}")));
    }
    if family == AgFamily::II && b >= k {
        return Err(QError::BadParameter(
            "the K = 3k+2 two-sum form needs b < k; use the (k,k) single form".into(),
        ));
    }
    let sum = |la: i64, lb: i64, dlt: i64, extra: i64| match family {
        AgFamily::I => family1_sum(ctx, k, la, lb, dlt, extra),
        AgFamily::II => family2_sum(ctx, k, la, lb, dlt, extra),
    };
    let plus = sum(a + 1, b + 1, b, 0)?;
    if a == 0 || b == 0 {
        return Ok(plus);
    }
    let minus = sum(a, b, b - 1, 1)?;
    plus.sub(&minus)
}

/// The simpler single-multisum expression at (a, b) = (k, k).
pub fn ag_char_kk_single(ctx: &Ctx, family: AgFamily, k: i64) -> Result<QSeries> {
    match family {
        AgFamily::I => family1_sum(ctx, k, k + 1, k + 1, -1, 0),
        AgFamily::II => family2_sum(ctx, k, k + 1, k + 1, -1, 0),
    }
}

/// Direct nested-loop evaluation of the b = 0 displays (independent of the
/// transfer recursion): family I is
///
///   sum_{l,m in N_0^k} q^{sum_{i>a} l_i} / (q;q)_{l_1}
///     prod_i q^{l_i^2 - l_i m_i + m_i^2 + m_i} [l_i;l_{i+1}]
///            [l_i - l_{i+1} + m_{i+1}; m_i]
///
/// (l_{k+1} = 0, m_{k+1} = l_k), and family II likewise with k-1 m's,
/// q^{l_k^2} and m_k := 2 l_k.
pub fn ag_char_b0_direct(ctx: &Ctx, family: AgFamily, k: i64, a: i64) -> Result<QSeries> {
    let cap = row_cap(ctx.order, 0, 0);
    let inv_q = inv_poch_table(ctx, 1, 1, cap)?;
    let m_len = match family {
        AgFamily::I => k,
        AgFamily::II => k - 1,
    } as usize;
    let mut sum = ctx.zero();
    let mut lam = vec![0i64; k as usize];
    let mut mu = vec![0i64; m_len];
    fn iterate(v: &mut [i64], cap: i64) -> bool {
        for slot in v.iter_mut() {
            if *slot < cap {
                *slot += 1;
                return true;
            }
            *slot = 0;
        }
        false
    }
    loop {
        'term: {
            let l = |i: i64| -> i64 {
                if i as usize <= lam.len() && i >= 1 {
                    lam[(i - 1) as usize]
                } else {
                    0
                }
            };
            let m = |i: i64| -> i64 {
                if i >= 1 && (i as usize) <= mu.len() {
                    mu[(i - 1) as usize]
                } else if i == k && family == AgFamily::II {
                    2 * l(k)
                } else if i == k + 1 && family == AgFamily::I {
                    l(k)
                } else {
                    0
                }
            };
            let rows = match family {
                AgFamily::I => k,
                AgFamily::II => k - 1,
            };
            let mut e = 0i64;
            for i in (a + 1)..=k {
                e += l(i);
            }
            if family == AgFamily::II {
                e += l(k) * l(k);
            }
            let mut term = ctx.one();
            for i in 1..=rows {
                e += l(i) * l(i) - l(i) * m(i) + m(i) * m(i) + m(i);
                if e > ctx.order {
                    break 'term;
                }
                let b1 = qbinom(ctx, l(i), l(i + 1), 1);
                let b2 = qbinom(ctx, l(i) - l(i + 1) + m(i + 1), m(i), 1);
                if b1.is_zero_to_order() || b2.is_zero_to_order() {
                    break 'term;
                }
                term = term.mul(&b1)?.mul(&b2)?;
            }
            if e > ctx.order {
                break 'term;
            }
            sum = sum.add(&term.shift(e).mul(&inv_q[l(1) as usize])?)?;
        }
        if !iterate(&mut lam, cap) {
            if !iterate(&mut mu, cap) {
                break;
            }
            // reset lam handled by iterate already (wrapped to zeros)
        }
    }
    Ok(sum.truncate(ctx.order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn w3_weight_values() {
        let d = w3_weights(7, 0, 0).unwrap();
        assert_eq!(d.central_charge, Rat::new(Int::from(-114), Int::from(7)));
        assert!(d.conformal_weight.is_zero());
        let d5 = w3_weights(5, 0, 0).unwrap();
        assert_eq!(d5.central_charge, Rat::new(Int::from(-22), Int::from(5)));
        assert!(w3_weights(6, 0, 0).is_err());
        assert!(w3_weights(8, 3, 3).is_err());
    }

    #[test]
    fn family2_k1_is_rogers_ramanujan() {
        // K = 5: chitilde_{1,0}^5 should match the first Rogers-Ramanujan sum
        let ctx = Ctx::rational(40);
        let s = ag_char_multisum(&ctx, AgFamily::II, 1, 1, 0).unwrap();
        let t = chitilde(&ctx, 5, 1, 0).unwrap();
        assert!(s.eq_to_order(&t), "s={} t={}", s.display(), t.display());
        let s0 = ag_char_multisum(&ctx, AgFamily::II, 1, 0, 0).unwrap();
        let t0 = chitilde(&ctx, 5, 0, 0).unwrap();
        assert!(s0.eq_to_order(&t0));
    }

    #[test]
    fn family1_k1_all_ab() {
        // K = 7
        let ctx = Ctx::rational(30);
        for a in 0..=1i64 {
            for b in 0..=1i64 {
                let s = ag_char_multisum(&ctx, AgFamily::I, 1, a, b).unwrap();
                let t = chitilde(&ctx, 7, a, b).unwrap();
                assert!(s.eq_to_order(&t), "a={a} b={b}: s={} t={}", s.display(), t.display());
            }
        }
        // the single (k,k) form
        let s = ag_char_kk_single(&ctx, AgFamily::I, 1).unwrap();
        let t = chitilde(&ctx, 7, 1, 1).unwrap();
        assert!(s.eq_to_order(&t));
    }

    #[test]
    fn family2_k2_sample() {
        // K = 8, (a,b) = (2,1) and the symmetric (1,2) give the same chitilde
        let ctx = Ctx::rational(25);
        let s21 = ag_char_multisum(&ctx, AgFamily::II, 2, 2, 1).unwrap();
        let t = chitilde(&ctx, 8, 2, 1).unwrap();
        assert!(s21.eq_to_order(&t), "s21={} t={}", s21.display(), t.display());
        // chitilde symmetry across distinct sum shapes (both need b < k)
        let s10 = ag_char_multisum(&ctx, AgFamily::II, 2, 1, 0).unwrap();
        let s01 = ag_char_multisum(&ctx, AgFamily::II, 2, 0, 1).unwrap();
        assert!(s10.eq_to_order(&chitilde(&ctx, 8, 1, 0).unwrap()));
        assert!(s01.eq_to_order(&s10), "s01 symmetric to s10");
        // b = k is outside the two-sum form
        assert!(ag_char_multisum(&ctx, AgFamily::II, 2, 1, 2).is_err());
        let skk = ag_char_kk_single(&ctx, AgFamily::II, 2).unwrap();
        assert!(skk.eq_to_order(&chitilde(&ctx, 8, 2, 2).unwrap()));
    }

    #[test]
    fn b0_direct_display_agrees() {
        let ctx = Ctx::rational(22);
        for k in 1..=2i64 {
            for a in 0..=k {
                let via_dp = ag_char_multisum(&ctx, AgFamily::I, k, a, 0).unwrap();
                let direct = ag_char_b0_direct(&ctx, AgFamily::I, k, a).unwrap();
                assert!(via_dp.eq_to_order(&direct), "I k={k} a={a}");
                let via_dp2 = ag_char_multisum(&ctx, AgFamily::II, k, a, 0).unwrap();
                let direct2 = ag_char_b0_direct(&ctx, AgFamily::II, k, a).unwrap();
                assert!(via_dp2.eq_to_order(&direct2), "II k={k} a={a}");
            }
        }
    }
}
