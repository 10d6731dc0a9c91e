//! The Kanade-Russell family of A2 Rogers-Ramanujan-type identities,
//! K = 3k + tau + 3:
//!
//!   sum_{l1>=...>=lk>=0, m1>=...>=mk>=0}
//!     (1 - q^{l_a + m_b + 1})/(1 - q)
//!     q^{sum_i (l_i^2 - l_i m_i + m_i^2) + sum_{i>a} l_i + sum_{i>b} m_i}
//!     / prod_{i<k} [(q;q)_{l_i - l_{i+1}} (q;q)_{m_i - m_{i+1}}]
//!     * g_{lk,mk;tau}(q)
//!   = (q^K;q^K)_inf^2 / (q;q)_inf^3 * theta(q^{a+1}, q^{b+1}, q^{a+b+2}; q^K),
//!
//! with q^{l_0} = q^{m_0} := 0, together with the finite (rational-function)
//! derivation pipeline that proves it: the root identity is transported down
//! the tree by k-a chain steps, a-b deformed steps, one linear combination,
//! and b doubly-deformed steps.

use crate::error::Result;
use crate::lattice::{lattice_points_sym_box, LatticeConstraint};
use crate::qalg::{poch_inf, theta_multi, Ctx, FactorProduct, QSeries};
use crate::suites::multisum::{a2_ordered_multisum, row_cap, A2Multisum};
use crate::suites::seed::seed_weight_exponent;

/// The multisum side, with the (1 - q^{l_a+m_b+1})/(1-q) factor under the
/// convention q^{l_0} = q^{m_0} := 0.
pub fn kr_lhs(ctx: &Ctx, k: i64, a: i64, b: i64, tau: i64) -> Result<QSeries> {
    let run = |extra_a: bool| -> Result<QSeries> {
        let row_exp = move |i: i64, x: i64, y: i64| {
            let mut e = x * x - x * y + y * y;
            if i > a {
                e += x;
            }
            if i > b {
                e += y;
            }
            if extra_a {
                if i == a {
                    e += x;
                }
                if i == b {
                    e += y;
                }
            }
            e
        };
        let tail = |x: i64, y: i64| crate::a2::g_tau(ctx, x, y, tau);
        let spec = A2Multisum {
            k,
            row_exp: &row_exp,
            z: ctx.mono(),
            w: ctx.mono(),
            tail: &tail,
            cap: row_cap(ctx.order, 0, 0),
        };
        a2_ordered_multisum(ctx, &spec)
    };
    let s0 = run(false)?;
    let numer = if a >= 1 && b >= 1 {
        s0.sub(&run(true)?.shift(1))?
    } else {
        s0 // q^{l_0} = q^{m_0} := 0 kills the shifted sum
    };
    crate::a1::div_by_one_minus(ctx, &numer, &ctx.q_mono(1))
}

/// The product side (q^K;q^K)_inf^2/(q;q)_inf^3
/// * theta(q^{a+1}, q^{b+1}, q^{a+b+2}; q^K).
pub fn kr_rhs(ctx: &Ctx, k: i64, a: i64, b: i64, tau: i64) -> Result<QSeries> {
    let kk = 3 * k + tau + 3;
    let kku = kk as u32;
    let t = theta_multi(
        ctx,
        &[&ctx.q_mono(a + 1), &ctx.q_mono(b + 1), &ctx.q_mono(a + b + 2)],
        kku,
    )?;
    let qk = poch_inf(ctx, &ctx.q_mono(kk), kku)?;
    let euler_inv = poch_inf(ctx, &ctx.q_mono(1), 1)?.inv_to(ctx.order)?;
    qk.pow(2)?.mul(&euler_inv.pow(3)?)?.mul(&t)
}

/// Both sides at once.
pub fn kr_sides(ctx: &Ctx, k: i64, a: i64, b: i64, tau: i64) -> Result<(QSeries, QSeries)> {
    Ok((kr_lhs(ctx, k, a, b, tau)?, kr_rhs(ctx, k, a, b, tau)?))
}

/// The modulus-9 identity in its explicit display (k=2, tau=0, a=2, b=0):
///
///   sum_{l1,l2,m1,m2 >= 0}
///     q^{l1^2-l1m1+m1^2+l2^2-l2m2+m2^2+m1+m2} (q^3;q^3)_{l2+m2}
///     / [(q;q)_{l1-l2} (q;q)_{m1-m2} (q^3;q^3)_{l2} (q^3;q^3)_{m2}
///        (q;q)_{l2+m2} (q;q)_{l2+m2+1}]
///   = prod_{n>=1} (1-q^{9n}) / [(1-q^n)^2 (1-q^{9n-7})(1-q^{9n-2})].
pub fn modulus9_display_sides(ctx: &Ctx) -> Result<(QSeries, QSeries)> {
    let q = ctx.q_mono(1);
    let q3 = ctx.q_mono(3);
    let cap = row_cap(ctx.order, 0, 0);
    let mut lhs = ctx.zero();
    for l1 in 0..=cap {
        for l2 in 0..=l1 {
            for m1 in 0..=cap {
                for m2 in 0..=m1 {
                    let e = l1 * l1 - l1 * m1 + m1 * m1 + l2 * l2 - l2 * m2 + m2 * m2 + m1 + m2;
                    if e > ctx.order {
                        continue;
                    }
                    let mut t = FactorProduct::new(&ctx.domain);
                    t.mul_monomial(&ctx.q_mono(e));
                    t.push_poch(&q3, l2 + m2, 3, 1);
                    t.push_poch(&q, l1 - l2, 1, -1);
                    t.push_poch(&q, m1 - m2, 1, -1);
                    t.push_poch(&q3, l2, 3, -1);
                    t.push_poch(&q3, m2, 3, -1);
                    t.push_poch(&q, l2 + m2, 1, -1);
                    t.push_poch(&q, l2 + m2 + 1, 1, -1);
                    lhs = lhs.add(&t.realize(ctx)?)?;
                }
            }
        }
    }
    // (q^9;q^9)_inf / [(q;q)_inf^2 (q^2;q^9)_inf (q^7;q^9)_inf]
    let rhs = poch_inf(ctx, &ctx.q_mono(9), 9)?
        .mul(&poch_inf(ctx, &q, 1)?.inv_to(ctx.order)?.pow(2)?)?
        .mul(&poch_inf(ctx, &ctx.q_mono(2), 9)?.inv_to(ctx.order)?)?
        .mul(&poch_inf(ctx, &ctx.q_mono(7), 9)?.inv_to(ctx.order)?)?;
    Ok((lhs.truncate(ctx.order), rhs))
}

// ---------------------------------------------------------------------------
// Finite derivation pipeline
// ---------------------------------------------------------------------------

/// Finite multisum over lambda in (n^depth), mu in (m^depth) of
///
///   prod_{i=1}^depth q^{lamw_i l_i + muw_i m_i}
///       K_{l_{i-1},m_{i-1};l_i,m_i}(q,q;q) * g_{l_depth,m_depth;tau},
///
/// with l_0 := n, m_0 := m and K(q,q;q) = q^{r^2-rs+s^2+r+s}/[(q)_{n-r}(q)_{m-s}].
fn pipeline_multisum(
    ctx: &Ctx,
    n: i64,
    m: i64,
    depth: i64,
    tau: i64,
    lamw: &dyn Fn(i64) -> i64,
    muw: &dyn Fn(i64) -> i64,
) -> Result<QSeries> {
    let q = ctx.q_mono(1);
    fn rec(
        ctx: &Ctx,
        q: &crate::qalg::ParamMonomial,
        prev: (i64, i64),
        i: i64,
        depth: i64,
        tau: i64,
        lamw: &dyn Fn(i64) -> i64,
        muw: &dyn Fn(i64) -> i64,
    ) -> Result<QSeries> {
        if i > depth {
            return crate::a2::g_tau(ctx, prev.0, prev.1, tau);
        }
        let mut acc = ctx.zero();
        for r in 0..=prev.0 {
            for s in 0..=prev.1 {
                let e = r * r - r * s + s * s + r + s + lamw(i) * r + muw(i) * s;
                if e > ctx.order {
                    continue;
                }
                let mut link = FactorProduct::new(&ctx.domain);
                link.mul_monomial(&ctx.q_mono(e));
                link.push_poch(q, prev.0 - r, 1, -1);
                link.push_poch(q, prev.1 - s, 1, -1);
                let inner = rec(ctx, q, (r, s), i + 1, depth, tau, lamw, muw)?;
                acc = acc.add(&link.realize(ctx)?.mul(&inner)?)?;
            }
        }
        Ok(acc)
    }
    rec(ctx, &q, (n, m), 1, depth, tau, lamw, muw)
}

/// Which intermediate of the derivation to evaluate.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PipelineStage {
    /// After k-a chain steps from the root identity.
    NotCompact,
    /// The same identity with the vanishing-head rewrite.
    Compact,
    /// After a-b further deformed (tree I) steps.
    KaAb,
    /// The linear combination (I_a - q^{m+1} I_{a-1})/(1-q).
    IaIam1,
    /// The finite form of the full identity, after b tree II steps.
    KrFinite,
}

/// Evaluate one stage's multisum side.
pub fn pipeline_lhs(
    ctx: &Ctx,
    stage: PipelineStage,
    k: i64,
    a: i64,
    b: i64,
    tau: i64,
    n: i64,
    m: i64,
) -> Result<QSeries> {
    let zero = |_: i64| 0i64;
    match stage {
        PipelineStage::NotCompact => pipeline_multisum(ctx, n, m, k - a, tau, &zero, &zero),
        PipelineStage::Compact => {
            let s = pipeline_multisum(ctx, n, m, k - a, tau, &zero, &zero)?;
            let head = ctx.q_mono(n + m + 1).one_minus()?;
            crate::a1::div_by_one_minus(ctx, &s.mul(&head)?, &ctx.q_mono(1))
        }
        PipelineStage::KaAb => {
            let lamw = move |i: i64| if i <= a - b { -1 } else { 0 };
            pipeline_multisum(ctx, n, m, k - b, tau, &lamw, &zero)
        }
        PipelineStage::IaIam1 => {
            // (1 - q^{m + l_{a-b} + 1})/(1-q) under the pipeline convention
            // l_0 := n (not the vanishing convention of the infinite form).
            let lamw = move |i: i64| if i <= a - b { -1 } else { 0 };
            let s0 = pipeline_multisum(ctx, n, m, k - b, tau, &lamw, &zero)?;
            let shifted = if a == b {
                s0.shift(m + n + 1)
            } else {
                let lamw2 = move |i: i64| {
                    let mut w = if i <= a - b { -1 } else { 0 };
                    if i == a - b {
                        w += 1;
                    }
                    w
                };
                pipeline_multisum(ctx, n, m, k - b, tau, &lamw2, &zero)?.shift(m + 1)
            };
            crate::a1::div_by_one_minus(ctx, &s0.sub(&shifted)?, &ctx.q_mono(1))
        }
        PipelineStage::KrFinite => {
            let lamw = move |i: i64| if i <= a { -1 } else { 0 };
            let muw = move |i: i64| if i <= b { -1 } else { 0 };
            let s0 = pipeline_multisum(ctx, n, m, k, tau, &lamw, &muw)?;
            // (1 - q^{l_a + m_b + 1}) with l_0 := n, m_0 := m
            let sa = {
                let lamw2 = move |i: i64| {
                    let mut w = if i <= a { -1 } else { 0 };
                    if i == a {
                        w += 1;
                    }
                    w
                };
                let muw2 = move |i: i64| {
                    let mut w = if i <= b { -1 } else { 0 };
                    if i == b {
                        w += 1;
                    }
                    w
                };
                let base = if a == 0 { n } else { 0 } + if b == 0 { m } else { 0 };
                pipeline_multisum(ctx, n, m, k, tau, &lamw2, &muw2)?.shift(base + 1)
            };
            crate::a1::div_by_one_minus(ctx, &s0.sub(&sa)?, &ctx.q_mono(1))
        }
    }
}

/// Evaluate one stage's root-lattice side.
pub fn pipeline_rhs(
    ctx: &Ctx,
    stage: PipelineStage,
    k: i64,
    a: i64,
    b: i64,
    tau: i64,
    n: i64,
    m: i64,
) -> Result<QSeries> {
    let kk = 3 * k + tau + 3;
    let q = ctx.q_mono(1);
    let one = ctx.mono();
    let nu = [a + b + 2, b + 1, 0];
    let bbox = (n + m) / 3 + 3;
    let mut sum = ctx.zero();
    for y in lattice_points_sym_box(3, LatticeConstraint::Q, bbox) {
        let y3 = y.scale(3);
        let z3 = ctx.q_mono(y3.diff(1, 2) + 1);
        let w3 = ctx.q_mono(y3.diff(2, 3) + 1);
        let term = match stage {
            PipelineStage::NotCompact => {
                let base = crate::a2::phi2_qq_y(ctx, n, m, &y3)?;
                if base.is_zero_to_order() {
                    continue;
                }
                let mut e = 0;
                for i in 1..=3i64 {
                    let yi = y.y(i as usize);
                    e += 3 * (kk - 3 * a) * yi * (yi - 1) / 2 - (kk - 3 * a - 3) * i * yi;
                }
                base.mul(&crate::a2::delta(ctx, &y3, &q, &q)?)?.shift(e)
            }
            PipelineStage::Compact => {
                let base =
                    crate::a2::phi2_y_uvcd(ctx, n, m, &y3, &one, &one, &one, &one, &q, &q)?;
                if base.is_zero_to_order() {
                    continue;
                }
                let mut e = 0;
                for i in 1..=3i64 {
                    let yi = y.y(i as usize);
                    e += 3 * (kk - 3 * a) * yi * (yi - 1) / 2 - (kk - 3 * a - 3) * i * yi;
                }
                base.shift(e)
            }
            PipelineStage::KaAb => {
                let base = crate::a2::phi2_y_uv(
                    ctx,
                    n,
                    m,
                    &y3,
                    &z3.pow(a - b)?,
                    &w3.pow(a - b)?,
                    &q,
                    &q,
                )?;
                if base.is_zero_to_order() {
                    continue;
                }
                let mut e = 0;
                for i in 1..=3i64 {
                    let yi = y.y(i as usize);
                    e += 3 * (kk - 3 * b) * yi * (yi - 1) / 2
                        - kk * i * yi
                        - 3 * nu[(i - 1) as usize] * yi;
                }
                base.mul(&crate::a2::delta(ctx, &y3, &q, &q)?)?.shift(e)
            }
            PipelineStage::IaIam1 => {
                let base = crate::a2::phi2_y_uvcd(
                    ctx,
                    n,
                    m,
                    &y3,
                    &z3.pow(a - b)?,
                    &w3.pow(a - b)?,
                    &one,
                    &one,
                    &q,
                    &q,
                )?;
                if base.is_zero_to_order() {
                    continue;
                }
                let mut e = 0;
                for i in 1..=3i64 {
                    let yi = y.y(i as usize);
                    e += 3 * (kk - 3 * b) * yi * (yi - 1) / 2
                        - kk * i * yi
                        - 3 * nu[(i - 1) as usize] * yi;
                }
                base.shift(e)
            }
            PipelineStage::KrFinite => {
                let base = crate::a2::phi2_y_uvcd(
                    ctx,
                    n,
                    m,
                    &y3,
                    &z3.pow(a)?,
                    &w3.pow(a)?,
                    &z3.pow(b)?,
                    &w3.pow(b)?,
                    &q,
                    &q,
                )?;
                if base.is_zero_to_order() {
                    continue;
                }
                let mut e = 0;
                for i in 1..=3i64 {
                    let yi = y.y(i as usize);
                    e += 3 * kk * yi * (yi - 1) / 2 - kk * i * yi - 3 * nu[(i - 1) as usize] * yi;
                }
                base.shift(e)
            }
        };
        sum = sum.add(&term)?;
    }
    Ok(sum.truncate(ctx.order))
}

/// The seed identity transported zero steps: consistency anchor for the
/// pipeline (stage NotCompact at a = k is the root identity itself).
pub fn pipeline_root_is_seed(ctx: &Ctx, n: i64, m: i64, tau: i64) -> Result<bool> {
    let q = ctx.q_mono(1);
    let bbox = (n + m) / 3 + 3;
    let mut sum = ctx.zero();
    for y in lattice_points_sym_box(3, LatticeConstraint::Q, bbox) {
        let y3 = y.scale(3);
        let base = crate::a2::phi2_qq_y(ctx, n, m, &y3)?;
        if base.is_zero_to_order() {
            continue;
        }
        let t = base
            .mul(&crate::a2::delta(ctx, &y3, &q, &q)?)?
            .shift(seed_weight_exponent(&y, tau));
        sum = sum.add(&t)?;
    }
    Ok(sum.truncate(ctx.order).eq_to_order(&crate::a2::g_tau(ctx, n, m, tau)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kr_smallest_case() {
        // k=1, a=b=1, tau=1: modulus 7
        let ctx = Ctx::rational(25);
        let (l, r) = kr_sides(&ctx, 1, 1, 1, 1).unwrap();
        assert!(l.eq_to_order(&r));
        // k=1, a=1, b=0, tau=0: modulus 6 (first case beyond the classical list)
        let (l, r) = kr_sides(&ctx, 1, 1, 0, 0).unwrap();
        assert!(l.eq_to_order(&r));
        // a,b-symmetry of the multisum side
        let l2 = kr_lhs(&ctx, 1, 0, 1, 0).unwrap();
        assert!(l.eq_to_order(&l2));
    }

    #[test]
    fn kr_tau_minus_one_theta_coincidence() {
        // for tau = -1 the products for (a,b) = (k,k) and (k,k-1) coincide
        let ctx = Ctx::rational(25);
        let r1 = kr_rhs(&ctx, 2, 2, 2, -1).unwrap();
        let r2 = kr_rhs(&ctx, 2, 2, 1, -1).unwrap();
        assert!(r1.eq_to_order(&r2));
    }

    #[test]
    fn modulus9_display() {
        let ctx = Ctx::rational(25);
        let (l, r) = modulus9_display_sides(&ctx).unwrap();
        assert!(l.eq_to_order(&r));
        // and it agrees with the general form at (k,a,b,tau) = (2,2,0,0)
        let (l2, r2) = kr_sides(&ctx, 2, 2, 0, 0).unwrap();
        assert!(l.eq_to_order(&l2));
        assert!(r.eq_to_order(&r2));
    }

    #[test]
    fn pipeline_k1_all_stages() {
        let ctx = Ctx::rational(30);
        for tau in -1..=1 {
            for n in 0..=3 {
                for m in 0..=3 {
                    assert!(pipeline_root_is_seed(&ctx, n, m, tau).unwrap(), "seed n={n} m={m}");
                    for (a, b) in [(1i64, 0i64), (1, 1), (0, 0)] {
                        if b > a {
                            continue;
                        }
                        for stage in [
                            PipelineStage::NotCompact,
                            PipelineStage::Compact,
                            PipelineStage::KaAb,
                            PipelineStage::IaIam1,
                            PipelineStage::KrFinite,
                        ] {
                            let l = pipeline_lhs(&ctx, stage, 1, a, b, tau, n, m).unwrap();
                            let r = pipeline_rhs(&ctx, stage, 1, a, b, tau, n, m).unwrap();
                            assert!(
                                l.eq_to_order(&r),
                                "stage={stage:?} tau={tau} a={a} b={b} n={n} m={m}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pipeline_ab_symmetry_of_kr_finite() {
        // LHS(a,b;n,m) = LHS(b,a;m,n) and likewise for the lattice side
        let ctx = Ctx::rational(25);
        let (k, tau) = (2, 0);
        for (a, b) in [(2i64, 1i64), (1, 0), (2, 0)] {
            for (n, m) in [(2i64, 3i64), (3, 1)] {
                let l1 = pipeline_lhs(&ctx, PipelineStage::KrFinite, k, a, b, tau, n, m).unwrap();
                let l2 = pipeline_lhs(&ctx, PipelineStage::KrFinite, k, b, a, tau, m, n).unwrap();
                assert!(l1.eq_to_order(&l2), "lhs a={a} b={b}");
                let r1 = pipeline_rhs(&ctx, PipelineStage::KrFinite, k, a, b, tau, n, m).unwrap();
                let r2 = pipeline_rhs(&ctx, PipelineStage::KrFinite, k, b, a, tau, m, n).unwrap();
                assert!(r1.eq_to_order(&r2), "rhs a={a} b={b}");
            }
        }
    }
}
