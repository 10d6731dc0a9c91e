//! Terminating basic hypergeometric sums.
//!
//! An r-phi-s series with numerator parameters a_1..a_r, denominator
//! parameters b_1..b_s and argument x has terms
//!
//!   (a_1,...,a_r;q)_k / (q,b_1,...,b_s;q)_k * [(-1)^k q^{binom(k,2)}]^{s-r+1} x^k.
//!
//! Only terminating instances are evaluated; the caller supplies the last
//! index. The very-well-poised 6W5 uses the standard reduction of the
//! (+-a^{1/2} q) parameter pairs to the factor (1-a q^{2k})/(1-a), so no
//! square roots are needed.

use crate::error::Result;
use crate::qalg::monomial::ParamMonomial;
use crate::qalg::products::{Ctx, FactorProduct};
use crate::qalg::series::QSeries;

/// Terminating r-phi-s sum with terms up to k = kmax inclusive.
pub fn phi_rs(
    ctx: &Ctx,
    num: &[ParamMonomial],
    den: &[ParamMonomial],
    x: &ParamMonomial,
    kmax: i64,
) -> Result<QSeries> {
    let q = ctx.q_mono(1);
    let excess = den.len() as i64 - num.len() as i64 + 1;
    let mut sum = ctx.zero();
    for k in 0..=kmax {
        let mut t = FactorProduct::new(&ctx.domain);
        for a in num {
            t.push_poch(a, k, 1, 1);
        }
        t.push_poch(&q, k, 1, -1);
        for b in den {
            t.push_poch(b, k, 1, -1);
        }
        let sign = if (k * excess) % 2 == 0 { 1 } else { -1 };
        t.mul_monomial(&ctx.rat(sign, 1).mul_q_pow(excess * k * (k - 1) / 2).mul(&x.pow(k)?));
        if t.is_zero() {
            continue;
        }
        sum = sum.add(&t.realize(ctx)?)?;
    }
    Ok(sum)
}

/// Terminating very-well-poised 6W5(a; b, c, d; q, x):
///
///   sum_k (1 - a q^{2k})/(1 - a) (a,b,c,d;q)_k / (q,aq/b,aq/c,aq/d;q)_k x^k.
pub fn w65(
    ctx: &Ctx,
    a: &ParamMonomial,
    b: &ParamMonomial,
    c: &ParamMonomial,
    d: &ParamMonomial,
    x: &ParamMonomial,
    kmax: i64,
) -> Result<QSeries> {
    let q = ctx.q_mono(1);
    let aq = a.mul(&q);
    let mut sum = ctx.zero();
    for k in 0..=kmax {
        let mut t = FactorProduct::new(&ctx.domain);
        t.push_factor(&a.mul_q_pow(2 * k), 1);
        t.push_factor(a, -1);
        for p in [a, b, c, d] {
            t.push_poch(p, k, 1, 1);
        }
        t.push_poch(&q, k, 1, -1);
        for p in [b, c, d] {
            t.push_poch(&aq.div(p)?, k, 1, -1);
        }
        t.mul_monomial(&x.pow(k)?);
        if t.is_zero() {
            continue;
        }
        sum = sum.add(&t.realize(ctx)?)?;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_phi_one_chain_kernel_sum() {
        // 1phi1(q^{-n}; zq; q, zq^{n+1}) = 1/(zq;q)_n at z = 2
        let ctx = Ctx::rational(20);
        let z = ctx.rat(2, 1);
        for n in 0..=5 {
            let lhs = phi_rs(
                &ctx,
                &[ctx.q_mono(-n)],
                &[z.mul_q_pow(1)],
                &z.mul_q_pow(n + 1),
                n,
            )
            .unwrap();
            let mut p = FactorProduct::new(&ctx.domain);
            p.push_poch(&z.mul_q_pow(1), n, 1, -1);
            assert!(lhs.eq_to_order(&p.realize(&ctx).unwrap()), "n={n}");
        }
    }
}
