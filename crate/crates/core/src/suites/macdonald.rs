//! Root-system theta identities: the affine Macdonald identity for
//! A_{r-1}^{(1)} at r = 2, 3 with q-power arguments, the Jacobi triple
//! product as its rank-2 face, and the theta-product evaluation of the
//! determinant lattice sum A_{nu;K} that normalises the product sides.

use crate::error::{QError, Result};
use crate::lattice::{GradedSumMeta, LatticeConstraint, RootVec};
use crate::qalg::{poch_inf, theta, Ctx, FactorProduct, ParamMonomial, QSeries};
use crate::suites::multisum::lattice_sum_rank3;

/// Jacobi triple product: theta(z;q) (q;q)_inf vs the bilateral sum
/// sum_{n in Z} (-1)^n z^n q^{binom(n,2)}, both to ctx.order.
pub fn jacobi_triple_sides(ctx: &Ctx, z: &ParamMonomial) -> Result<(QSeries, QSeries)> {
    let lhs = theta(ctx, z, 1)?.mul(&poch_inf(ctx, &ctx.q_mono(1), 1)?)?;
    // Bilateral sum; the term at index s sits exactly at degree
    // binom(s,2) + s q_exp(z), which grows quadratically on both tails.
    let degree = |s: i64| s * (s - 1) / 2 + s * z.q_exp();
    let mut rhs = ctx.zero();
    let mut n = 0i64;
    loop {
        let mut live = false;
        let sides: &[i64] = if n == 0 { &[0] } else { &[n, -n] };
        for &s in sides {
            if degree(s) > ctx.order {
                continue;
            }
            live = true;
            let sign = if s.rem_euclid(2) == 0 { 1 } else { -1 };
            let t = z.pow(s)?.mul(&ctx.rat(sign, 1)).mul_q_pow(s * (s - 1) / 2);
            rhs = rhs.add(&t.to_series()?)?;
        }
        if !live && n > 2 * (z.q_exp().abs() + 2) {
            break;
        }
        n += 1;
        if n > 10_000 {
            return Err(QError::BadParameter("triple product sum did not terminate".into()));
        }
    }
    Ok((lhs.truncate(ctx.order), rhs.truncate(ctx.order)))
}

/// Both sides of the Macdonald identity for A_{r-1}^{(1)} in base q^modulus
/// with x_i = q^{e_i}:
///
///   sum_{y in Q} prod_i x_i^{r y_i} Q^{r binom(y_i,2) + i y_i}
///       prod_{i<j} (1 - Q^{y_ij} x_i/x_j)
///     = (Q;Q)_inf^{r-1} prod_{i<j} theta(x_i/x_j; Q),          Q = q^modulus.
pub fn macdonald_sides(
    ctx: &Ctx,
    r: usize,
    exps: &[i64],
    modulus: u32,
) -> Result<(QSeries, QSeries, GradedSumMeta)> {
    if !(2..=3).contains(&r) || exps.len() != r {
        return Err(QError::BadParameter("rank must be 2 or 3 with matching exponents".into()));
    }
    let mm = modulus as i64;
    let rr = r as i64;
    let weight_exp = |y: &RootVec| -> i64 {
        let mut e = 0;
        for i in 1..=rr {
            let yi = y.y(i as usize);
            e += rr * exps[(i - 1) as usize] * yi + mm * (rr * yi * (yi - 1) / 2 + i * yi);
        }
        e
    };
    let valuation = |y: &RootVec| -> i64 {
        let mut v = weight_exp(y);
        for i in 1..=r {
            for j in (i + 1)..=r {
                v += (mm * y.diff(i, j) + exps[i - 1] - exps[j - 1]).min(0);
            }
        }
        v
    };
    let term = |y: &RootVec| -> Result<QSeries> {
        let mut p = FactorProduct::new(&ctx.domain);
        p.mul_monomial(&ctx.q_mono(weight_exp(y)));
        for i in 1..=r {
            for j in (i + 1)..=r {
                p.push_factor(&ctx.q_mono(mm * y.diff(i, j) + exps[i - 1] - exps[j - 1]), 1);
            }
        }
        p.realize(ctx)
    };
    let (lhs, meta) = if r == 3 {
        lattice_sum_rank3(ctx, LatticeConstraint::Q, &valuation, &term)?
    } else {
        // rank 2: y = (t, -t), a plain bilateral sum
        let mut sum = ctx.zero();
        let mut t = 0i64;
        let mut terms = 0;
        loop {
            let mut alive = false;
            for s in if t == 0 { vec![0] } else { vec![t, -t] } {
                let y = RootVec::new(&[s, -s]).unwrap();
                if valuation(&y) <= ctx.order {
                    alive = true;
                    terms += 1;
                    sum = sum.add(&term(&y)?)?;
                }
            }
            if !alive && t > 2 {
                break;
            }
            t += 1;
        }
        (sum.truncate(ctx.order), GradedSumMeta { stop_shell: t as u64, terms })
    };
    let mut rhs = poch_inf(ctx, &ctx.q_mono(mm), modulus)?.pow(r as u32 - 1)?;
    for i in 1..=r {
        for j in (i + 1)..=r {
            let d = exps[i - 1] - exps[j - 1];
            rhs = rhs.mul(&theta_qpow(ctx, d, modulus)?)?;
        }
    }
    Ok((lhs, rhs.truncate(ctx.order), meta))
}

/// theta(q^d; q^M), valid for any integer d (zero when M divides d).
pub fn theta_qpow(ctx: &Ctx, d: i64, modulus: u32) -> Result<QSeries> {
    if d.rem_euclid(modulus as i64) == 0 {
        return Ok(ctx.zero());
    }
    // shift d into (0, M) using theta(z;q) = theta(q/z;q) = -z theta(zq;q)...
    // literal products already handle any d here because the arguments stay
    // rational q-powers; only genuine zeros (d = 0 mod M) are special-cased.
    theta(ctx, &ctx.q_mono(d), modulus)
}

/// The determinant lattice sum
///
///   A_{nu;M} = sum_{y in Q} det_{1<=i,j<=3} q^{3M binom(y_i,2) - M i y_i
///                                             - (3 y_i + j - i) nu_j}
///
/// against its theta-product evaluation
/// (q^M;q^M)_inf^2 theta(q^{nu_1-nu_2}, q^{nu_2-nu_3}, q^{nu_1-nu_3}; q^M).
pub fn a_nu_sides(ctx: &Ctx, nu: &[i64; 3], modulus: u32) -> Result<(QSeries, QSeries, GradedSumMeta)> {
    let mm = modulus as i64;
    let entry_exp = |y: &RootVec, i: i64, j: i64| -> i64 {
        let yi = y.y(i as usize);
        3 * mm * yi * (yi - 1) / 2 - mm * i * yi - (3 * yi + j - i) * nu[(j - 1) as usize]
    };
    let det_term = |y: &RootVec| -> Result<QSeries> {
        let mut det = ctx.zero();
        for perm in crate::a2::Perm3::ALL {
            let mut e = 0;
            for i in 1..=3i64 {
                e += entry_exp(y, i, perm.sigma[(i - 1) as usize]);
            }
            let t = ctx.rat(perm.sign, 1).mul_q_pow(e);
            det = det.add(&t.to_series()?)?;
        }
        Ok(det)
    };
    let valuation = |y: &RootVec| -> i64 {
        crate::a2::Perm3::ALL
            .iter()
            .map(|perm| {
                (1..=3i64).map(|i| entry_exp(y, i, perm.sigma[(i - 1) as usize])).sum::<i64>()
            })
            .min()
            .unwrap()
    };
    let (lhs, meta) = lattice_sum_rank3(ctx, LatticeConstraint::Q, &valuation, &det_term)?;
    let mut rhs = poch_inf(ctx, &ctx.q_mono(mm), modulus)?.pow(2)?;
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        rhs = rhs.mul(&theta_qpow(ctx, nu[i] - nu[j], modulus)?)?;
    }
    Ok((lhs, rhs.truncate(ctx.order), meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_sides(l: &QSeries, r: &QSeries, what: &str) {
        assert!(l.eq_to_order(r), "{what}: lhs={} rhs={}", l.display(), r.display());
    }

    #[test]
    fn jacobi_triple_product_rational_points() {
        let ctx = Ctx::rational(40);
        for z in [ctx.rat(2, 1), ctx.rat(3, 2)] {
            let (l, r) = jacobi_triple_sides(&ctx, &z).unwrap();
            assert_sides(&l, &r, "JTP rational");
        }
        // q-power and Laurent arguments
        let ctx2 = Ctx::rational(45);
        for e in [2i64, -1] {
            let (l, r) = jacobi_triple_sides(&ctx2, &ctx2.q_mono(e)).unwrap();
            assert!(l.truncate(40).eq_to_order(&r.truncate(40)), "JTP q^{e}");
        }
    }

    #[test]
    fn macdonald_rank2_and_rank3() {
        let ctx = Ctx::rational(30);
        // rank 2, base q^5, exponents (3,0): a Jacobi-triple-product face
        let (l, r, _) = macdonald_sides(&ctx, 2, &[3, 0], 5).unwrap();
        assert_sides(&l, &r, "rank 2");
        // rank 3, base q^7 and q^5
        let (l, r, _) = macdonald_sides(&ctx, 3, &[2, 1, 0], 7).unwrap();
        assert_sides(&l, &r, "rank 3 base 7");
        let (l, r, _) = macdonald_sides(&ctx, 3, &[3, 1, 0], 5).unwrap();
        assert_sides(&l, &r, "rank 3 base 5");
        // the degenerate base-1 instance collapses to 0 = 0
        let (l, r, _) = macdonald_sides(&ctx, 3, &[2, 1, 0], 1).unwrap();
        assert!(l.is_zero_to_order() && r.is_zero_to_order());
    }

    #[test]
    fn a_nu_product_for_kr_normalisation() {
        // nu = (a+b+2, b+1, 0) against modulus K: the product normalisation
        let ctx = Ctx::rational(30);
        for (a, b, kk) in [(1i64, 0i64, 7u32), (1, 1, 7), (2, 0, 9), (2, 1, 8)] {
            let nu = [a + b + 2, b + 1, 0];
            let (l, r, _) = a_nu_sides(&ctx, &nu, kk).unwrap();
            assert_sides(&l, &r, "A_nu");
            // matches the Kanade-Russell product normalisation:
            // RHS(kr) = A_nu / (q;q)_inf^3
            let euler3 = poch_inf(&ctx, &ctx.q_mono(1), 1)
                .unwrap()
                .inv_to(ctx.order)
                .unwrap()
                .pow(3)
                .unwrap();
            let viaa = l.mul(&euler3).unwrap();
            // determine (k,tau) with 3k+tau+3 = kk
            let k = (kk as i64 - 2) / 3;
            let tau = kk as i64 - 3 * k - 3;
            let rhs = crate::suites::kr::kr_rhs(&ctx, k, a, b, tau).unwrap();
            assert_sides(&viaa, &rhs, "A_nu vs product side");
        }
    }
}
