//! The root identity of the A2 tree derivation:
//!
//!   sum_{y in Q} Phi_{n,m;3y}(q,q;q) Delta_{3y}(q,q;q)
//!       prod_{i=1}^3 q^{3(3+tau) binom(y_i,2) - tau i y_i}  =  g_{n,m;tau}(q)
//!
//! verified as an exact polynomial identity: both sides are cleared of their
//! (q;q)-type denominators, leaving Gaussian-binomial polynomials that are
//! compared coefficient by coefficient over their whole degree range.

use crate::error::Result;
use crate::lattice::{lattice_points_sym_box, LatticeConstraint, RootVec};
use crate::qalg::{qbinom, Ctx, FactorProduct, QSeries, ORDER_EXACT};

/// Weight prod_i q^{3(3+tau) binom(y_i,2) - tau i y_i}.
pub fn seed_weight_exponent(y: &RootVec, tau: i64) -> i64 {
    let mut e = 0;
    for i in 1..=3i64 {
        let yi = y.y(i as usize);
        e += 3 * (3 + tau) * yi * (yi - 1) / 2 - tau * i * yi;
    }
    e
}

/// The cleared left side
///
///   P(n,m;tau) = sum_{y in Q} prod_{i<j} (1 - q^{3 y_{ij} + j - i})
///                q^{weight(y)} prod_i [n+m+2 choose n - 3 y_i + i - 1]
///
/// as an exact Laurent polynomial.
pub fn seed_lhs_cleared(ctx: &Ctx, n: i64, m: i64, tau: i64) -> Result<QSeries> {
    let b = (n.max(m) + 5) / 3 + 1;
    let mut sum = ctx.zero();
    for y in lattice_points_sym_box(3, LatticeConstraint::Q, b) {
        let mut binoms = ctx.one();
        let mut dead = false;
        for i in 1..=3i64 {
            let qb = qbinom(ctx, n + m + 2, n - 3 * y.y(i as usize) + i - 1, 1);
            if qb.is_zero_to_order() {
                dead = true;
                break;
            }
            binoms = binoms.mul(&qb)?;
        }
        if dead {
            continue;
        }
        let mut head = FactorProduct::new(&ctx.domain);
        head.mul_monomial(&ctx.q_mono(seed_weight_exponent(&y, tau)));
        for (i, j) in [(1, 2), (2, 3), (1, 3)] {
            head.push_factor(&ctx.q_mono(3 * y.diff(i, j) + (j - i) as i64), 1);
        }
        sum = sum.add(&head.realize(ctx)?.mul(&binoms)?)?;
    }
    Ok(sum)
}

/// Verify the seed identity exactly (full polynomial degree) by clearing
/// denominators on both sides:
///
///   (1-q) P(n,m;tau) (q;q)_{n+m} (q^2;q)_{n+m}
///     = q^{tau(tau-1)nm} [n+m choose n]_p (q;q)_{n+m+2}^2.
pub fn seed_check(ctx: &Ctx, n: i64, m: i64, tau: i64) -> Result<(QSeries, QSeries)> {
    let exact = ctx.with_order(ORDER_EXACT);
    let q = exact.q_mono(1);
    let p_lhs = seed_lhs_cleared(&exact, n, m, tau)?;
    let mut lhs_extra = FactorProduct::new(&exact.domain);
    lhs_extra.push_factor(&q, 1);
    lhs_extra.push_poch(&q, n + m, 1, 1);
    lhs_extra.push_poch(&exact.q_mono(2), n + m, 1, 1);
    let lhs = p_lhs.mul(&lhs_extra.realize(&exact)?)?;

    let p: u32 = if tau == 0 { 3 } else { 1 };
    let mut rhs_extra = FactorProduct::new(&exact.domain);
    rhs_extra.mul_monomial(&exact.q_mono(tau * (tau - 1) * n * m));
    rhs_extra.push_poch(&q, n + m + 2, 1, 2);
    let rhs = qbinom(&exact, n + m, n, p).mul(&rhs_extra.realize(&exact)?)?;
    Ok((lhs, rhs))
}

/// The tau = 1 normalisation in its classical display:
///
///   sum_{y in Q} prod_{i<j} (1-q^{3y_{ij}+j-i})
///       prod_i q^{12 binom(y_i,2) - i y_i} [n+m+2 choose n-3y_i+i-1]
///     = (1-q^{n+m+1})(1-q^{n+m+2})^2 [n+m choose n],
/// exact in q.
pub fn seed_pentagonal_display(ctx: &Ctx, n: i64, m: i64) -> Result<(QSeries, QSeries)> {
    let exact = ctx.with_order(ORDER_EXACT);
    let lhs = seed_lhs_cleared(&exact, n, m, 1)?;
    let mut head = FactorProduct::new(&exact.domain);
    head.push_factor(&exact.q_mono(n + m + 1), 1);
    head.push_factor(&exact.q_mono(n + m + 2), 2);
    let rhs = qbinom(&exact, n + m, n, 1).mul(&head.realize(&exact)?)?;
    Ok((lhs, rhs))
}

/// Consistency of the cleared form against the series form: the seed sum
/// evaluated with the limit formula and Delta weights equals g_{n,m;tau}
/// as truncated series.
pub fn seed_series_check(ctx: &Ctx, n: i64, m: i64, tau: i64) -> Result<(QSeries, QSeries)> {
    let q = ctx.q_mono(1);
    let b = (n.max(m) + 5) / 3 + 1;
    let mut lhs = ctx.zero();
    for y in lattice_points_sym_box(3, LatticeConstraint::Q, b) {
        let y3 = y.scale(3);
        let base = crate::a2::phi2_qq_y(ctx, n, m, &y3)?;
        if base.is_zero_to_order() {
            continue;
        }
        let t = base
            .mul(&crate::a2::delta(ctx, &y3, &q, &q)?)?
            .shift(seed_weight_exponent(&y, tau));
        lhs = lhs.add(&t)?;
    }
    let rhs = crate::a2::g_tau(ctx, n, m, tau)?;
    Ok((lhs.truncate(ctx.order), rhs))
}
