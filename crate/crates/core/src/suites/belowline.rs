//! Below-the-line identities for tau = 0 (modulus K = 3k+3): the cases
//! (a, b) with k < a <= floor(3k/2), 0 <= b <= 3k-2a arise as the signed
//! combination
//!
//!   F_{2k-a, a+b-k; k} - q^{b+1} F_{2k-a-b-1, a-k-1; k}
//!     = (q^K;q^K)_inf^2/(q;q)_inf^3 theta(q^{a+1},q^{b+1},q^{a+b+2};q^K),
//!
//! where F_{a,b;k} is the tau = 0 multisum, driven by the Weierstrass
//! three-term relation for the theta products.

use crate::error::{QError, Result};
use crate::qalg::{poch_inf, theta_multi, Ctx, FactorProduct, QSeries};
use crate::suites::kr::kr_lhs;
use crate::suites::multisum::row_cap;

/// F_{a,b;k}(q): the tau = 0 multisum with the (1-q^{l_a+m_b+1})/(1-q) head.
pub fn f_multisum(ctx: &Ctx, k: i64, a: i64, b: i64) -> Result<QSeries> {
    kr_lhs(ctx, k, a, b, 0)
}

/// Theta_{a,b;k} = theta(q^{a+1}, q^{b+1}, q^{a+b+2}; q^{3k+3}).
pub fn theta_abk(ctx: &Ctx, k: i64, a: i64, b: i64) -> Result<QSeries> {
    theta_multi(
        ctx,
        &[&ctx.q_mono(a + 1), &ctx.q_mono(b + 1), &ctx.q_mono(a + b + 2)],
        (3 * k + 3) as u32,
    )
}

/// Weierstrass three-term consequence:
/// Theta_{a,b;k} = Theta_{2k-a,a+b-k;k} - q^{b+1} Theta_{2k-a-b-1,a-k-1;k}.
pub fn weierstrass_theta_sides(
    ctx: &Ctx,
    k: i64,
    a: i64,
    b: i64,
) -> Result<(QSeries, QSeries)> {
    let lhs = theta_abk(ctx, k, a, b)?;
    let rhs = theta_abk(ctx, k, 2 * k - a, a + b - k)?
        .sub(&theta_abk(ctx, k, 2 * k - a - b - 1, a - k - 1)?.shift(b + 1))?;
    Ok((lhs, rhs))
}

/// Both sides of the below-the-line identity for
/// 2 <= k < a <= floor(3k/2), 0 <= b <= 3k - 2a.
pub fn below_line_sides(ctx: &Ctx, k: i64, a: i64, b: i64) -> Result<(QSeries, QSeries)> {
    if !(2 <= k && k < a && a <= 3 * k / 2 && 0 <= b && b <= 3 * k - 2 * a) {
        return Err(QError::BadParameter(format!(
            "below-the-line needs 2 <= k < a <= 3k/2, 0 <= b <= 3k-2a; got k={k} a={a} b={b}"
        )));
    }
    let kk = 3 * k + 3;
    let lhs = f_multisum(ctx, k, 2 * k - a, a + b - k)?
        .sub(&f_multisum(ctx, k, 2 * k - a - b - 1, a - k - 1)?.shift(b + 1))?;
    let rhs = poch_inf(ctx, &ctx.q_mono(kk), kk as u32)?
        .pow(2)?
        .mul(&poch_inf(ctx, &ctx.q_mono(1), 1)?.inv_to(ctx.order)?.pow(3)?)?
        .mul(&theta_abk(ctx, k, a, b)?)?;
    Ok((lhs, rhs))
}

/// The modulus-7 below-the-line display (the k = 1, tau = 1 analogue found
/// by solving the modulus-7 system):
///
///   sum_{l,m >= 0} (1 - q^{2l - m})/(1 - q)
///       q^{l^2 - lm + m^2 - l + m} / [(q;q)_l (q;q)_m (q^2;q)_{l+m}]
///     = (q^7;q^7)_inf^2/(q;q)_inf^3 theta(q, q^3, q^3; q^7).
pub fn modulus7_display_sides(ctx: &Ctx) -> Result<(QSeries, QSeries)> {
    let q = ctx.q_mono(1);
    let cap = row_cap(ctx.order, -1, 1) + 2;
    let mut numer = ctx.zero();
    for l in 0..=cap {
        for m in 0..=cap {
            let e = l * l - l * m + m * m - l + m;
            if e > ctx.order + 1 {
                continue;
            }
            let mut t = FactorProduct::new(&ctx.domain);
            t.push_poch(&q, l, 1, -1);
            t.push_poch(&q, m, 1, -1);
            t.push_poch(&ctx.q_mono(2), l + m, 1, -1);
            let head = ctx.q_mono(2 * l - m).one_minus()?;
            numer = numer.add(&t.realize(ctx)?.mul(&head)?.shift(e))?;
        }
    }
    let lhs = crate::a1::div_by_one_minus(ctx, &numer.truncate(ctx.order), &q)?;
    let rhs = poch_inf(ctx, &ctx.q_mono(7), 7)?
        .pow(2)?
        .mul(&poch_inf(ctx, &q, 1)?.inv_to(ctx.order)?.pow(3)?)?
        .mul(&theta_multi(ctx, &[&q, &ctx.q_mono(3), &ctx.q_mono(3)], 7)?)?;
    Ok((lhs, rhs))
}
