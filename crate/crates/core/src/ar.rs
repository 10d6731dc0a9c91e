//! The rank-r Phi function at desk scale (2 <= r <= 5): its defining
//! multisum over r-1 nested partitions, the rank-r Bailey chain, and the
//! large-n limit given by Hua's identity.
//!
//! For n = (n_1,...,n_{r-1}), z = (z_1,...,z_{r-1}) and the A_{r-1} Cartan
//! matrix A,
//!
//!   Phi_n(z;q) = sum over partition tuples lambda^{(1)},...,lambda^{(r-1)}
//!       prod_{i,l} z_i^{lambda^{(i)}_l}
//!                  q^{(1/2) sum_j A_{ij} lambda^{(i)}_l lambda^{(j)}_l}
//!                  / (q;q)_{lambda^{(i)}_{l-1}-lambda^{(i)}_l},
//!
//! with lambda^{(i)}_0 := n_i. The sum is evaluated by a layer transfer with
//! memoised tail sums: a tail whose top row equals its bound resums as a
//! geometric series in the row weight.

use std::collections::HashMap;

use crate::error::{QError, Result};
use crate::qalg::{poch_inf, Ctx, FactorProduct, ParamMonomial, QSeries};

/// Rank, top row and kernel parameters for the rank-r machinery.
#[derive(Clone, Debug)]
pub struct RankProfile {
    pub r: usize,
    pub n: Vec<i64>,
    pub z: Vec<ParamMonomial>,
}

impl RankProfile {
    pub fn new(r: usize, n: &[i64], z: &[ParamMonomial]) -> Result<Self> {
        if !(2..=5).contains(&r) {
            return Err(QError::BadParameter(format!("rank r = {r} outside the supported 2..=5")));
        }
        if n.len() != r - 1 || z.len() != r - 1 {
            return Err(QError::BadParameter("need r-1 indices and r-1 arguments".into()));
        }
        Ok(RankProfile { r, n: n.to_vec(), z: z.to_vec() })
    }

    /// Cartan matrix entry of A_{r-1} (1-indexed).
    pub fn cartan(&self, i: usize, j: usize) -> i64 {
        if i == j {
            2
        } else if i.abs_diff(j) == 1 {
            -1
        } else {
            0
        }
    }

    /// (1/2) sum_{i,j} A_{ij} s_i s_j, the per-layer exponent.
    pub fn quad(&self, s: &[i64]) -> i64 {
        let mut acc = 0;
        for i in 0..self.r - 1 {
            for j in 0..self.r - 1 {
                acc += self.cartan(i + 1, j + 1) * s[i] * s[j];
            }
        }
        acc / 2
    }

    /// Reversed profile (n and z read backwards).
    pub fn reversed(&self) -> RankProfile {
        let mut n = self.n.clone();
        let mut z = self.z.clone();
        n.reverse();
        z.reverse();
        RankProfile { r: self.r, n, z }
    }
}

struct PhiEval<'a> {
    ctx: &'a Ctx,
    p: &'a RankProfile,
    memo: HashMap<Vec<i64>, QSeries>,
}

impl PhiEval<'_> {
    /// Least possible q-degree of the row weight w(s).
    fn weight_floor(&self, s: &[i64]) -> i64 {
        let mut d = self.p.quad(s);
        for (i, &si) in s.iter().enumerate() {
            d += si * self.p.z[i].q_exp().min(0);
        }
        d
    }

    fn row_weight(&self, s: &[i64]) -> Result<ParamMonomial> {
        let mut w = self.ctx.q_mono(self.p.quad(s));
        for (i, &si) in s.iter().enumerate() {
            w = w.mul(&self.p.z[i].pow(si)?);
        }
        Ok(w)
    }

    /// Tail sum over partition tuples whose first row is bounded by `prev`.
    fn tail(&mut self, prev: &[i64]) -> Result<QSeries> {
        if prev.iter().all(|&x| x == 0) {
            return Ok(self.ctx.one());
        }
        if let Some(hit) = self.memo.get(prev) {
            return Ok(hit.clone());
        }
        let q = self.ctx.q_mono(1);
        let mut strict = self.ctx.zero();
        let mut s = vec![0i64; prev.len()];
        loop {
            // Every s <= prev except s == prev; rows too deep to matter are skipped.
            if s != prev && self.weight_floor(&s) <= self.ctx.order {
                let zero_row = s.iter().all(|&x| x == 0);
                let inner = if zero_row { self.ctx.one() } else { self.tail(&s)? };
                let mut link = FactorProduct::new(&self.ctx.domain);
                for i in 0..s.len() {
                    link.push_poch(&q, prev[i] - s[i], 1, -1);
                }
                if !zero_row {
                    link.mul_monomial(&self.row_weight(&s)?);
                }
                strict = strict.add(&link.realize(self.ctx)?.mul(&inner)?)?;
            }
            // next vector <= prev in lexicographic order
            let mut i = 0;
            loop {
                if i == s.len() {
                    break;
                }
                if s[i] < prev[i] {
                    s[i] += 1;
                    break;
                }
                s[i] = 0;
                i += 1;
            }
            if i == s.len() {
                break;
            }
        }
        // Rows equal to the bound repeat geometrically:
        // T(prev) = strict + w(prev) T(prev).
        let w = self.row_weight(prev)?;
        let result = crate::a1::div_by_one_minus(self.ctx, &strict, &w)?;
        self.memo.insert(prev.to_vec(), result.clone());
        Ok(result)
    }
}

/// Phi_n(z;q) for the given rank profile, truncated to ctx.order.
pub fn ar_phi(ctx: &Ctx, p: &RankProfile) -> Result<QSeries> {
    if p.n.iter().any(|&ni| ni < 0) {
        return Ok(ctx.zero());
    }
    let mut eval = PhiEval { ctx, p, memo: HashMap::new() };
    Ok(eval.tail(&p.n.clone())?.truncate(ctx.order))
}

/// K_{n,m}(z;q) = prod_i z_i^{m_i} q^{(1/2) sum_j A_{ij} m_i m_j} / (q;q)_{n_i - m_i}.
pub fn ar_kernel(ctx: &Ctx, p: &RankProfile, m: &[i64]) -> Result<QSeries> {
    let q = ctx.q_mono(1);
    let mut k = FactorProduct::new(&ctx.domain);
    let mut w = ctx.q_mono(p.quad(m));
    for i in 0..p.r - 1 {
        w = w.mul(&p.z[i].pow(m[i])?);
        k.push_poch(&q, p.n[i] - m[i], 1, -1);
    }
    k.mul_monomial(&w);
    k.realize(ctx)
}

/// Verify the rank-r Bailey chain
/// sum_{m <= n} K_{n,m}(z;q) Phi_m(z;q) = Phi_n(z;q).
pub fn ar_chain_check(ctx: &Ctx, p: &RankProfile) -> Result<bool> {
    let mut sum = ctx.zero();
    let mut m = vec![0i64; p.r - 1];
    loop {
        let sub = RankProfile { r: p.r, n: m.clone(), z: p.z.clone() };
        sum = sum.add(&ar_kernel(ctx, p, &m)?.mul(&ar_phi(ctx, &sub)?)?)?;
        let mut i = 0;
        loop {
            if i == m.len() {
                break;
            }
            if m[i] < p.n[i] {
                m[i] += 1;
                break;
            }
            m[i] = 0;
            i += 1;
        }
        if i == m.len() {
            break;
        }
    }
    Ok(sum.eq_to_order(&ar_phi(ctx, p)?.truncate(sum.order())))
}

/// Verify Hua's limit
///
///   lim Phi_n(z;q) = (q;q)_inf^{-(r-1)} prod_{1<=i<j<=r} (z_i...z_{j-1} q;q)_inf^{-1}
///
/// by comparing Phi at n_i = n_big with the product, and asserting window
/// stability between n_big and n_big + 1.
pub fn hua_limit_check(ctx: &Ctx, r: usize, z: &[ParamMonomial], n_big: i64) -> Result<bool> {
    let phi_at = |nb: i64| -> Result<QSeries> {
        let p = RankProfile::new(r, &vec![nb; r - 1], z)?;
        ar_phi(ctx, &p)
    };
    let lo = phi_at(n_big)?;
    let hi = phi_at(n_big + 1)?;
    if !lo.eq_to_order(&hi) {
        return Ok(false);
    }
    let mut rhs = poch_inf(ctx, &ctx.q_mono(1), 1)?.inv_to(ctx.order)?.pow(r as u32 - 1)?;
    for i in 0..r - 1 {
        for j in (i + 1)..r {
            let mut a = ctx.q_mono(1);
            for zi in &z[i..j] {
                a = a.mul(zi);
            }
            rhs = rhs.mul(&poch_inf(ctx, &a, 1)?.inv_to(ctx.order)?)?;
        }
    }
    Ok(lo.eq_to_order(&rhs))
}

/// The rank-4 closed form as a balanced 4phi3 series:
///
///   Phi_{n1,n2,n3}(z1,z2,z3;q)
///     = (z1 z2 q;q)_{n1+n2} (z2 z3 q;q)_{n2+n3}
///       / [(q,z1 q,z1 z2 q;q)_{n1} (q,z2 q,z1 z2 q,z2 z3 q;q)_{n2}
///          (q,z3 q,z2 z3 q;q)_{n3}]
///       * 4phi3[q^{-n2}/z2, q^{-n1}, q^{-n2}, q^{-n3};
///               q^{-n1-n2}/(z1 z2), q^{-n2-n3}/(z2 z3), z1 z2 z3 q; q, q].
pub fn ar4_phi_closed(ctx: &Ctx, n: &[i64], z: &[ParamMonomial]) -> Result<QSeries> {
    if n.len() != 3 || z.len() != 3 {
        return Err(QError::BadParameter("rank-4 closed form needs 3 indices".into()));
    }
    let (n1, n2, n3) = (n[0], n[1], n[2]);
    if n1 < 0 || n2 < 0 || n3 < 0 {
        return Ok(ctx.zero());
    }
    let q = ctx.q_mono(1);
    let z12 = z[0].mul(&z[1]);
    let z23 = z[1].mul(&z[2]);
    let z123 = z12.mul(&z[2]);
    let mut pre = FactorProduct::new(&ctx.domain);
    pre.push_poch(&z12.mul(&q), n1 + n2, 1, 1);
    pre.push_poch(&z23.mul(&q), n2 + n3, 1, 1);
    for (a, nn) in [
        (q.clone(), n1),
        (z[0].mul(&q), n1),
        (z12.mul(&q), n1),
        (q.clone(), n2),
        (z[1].mul(&q), n2),
        (z12.mul(&q), n2),
        (z23.mul(&q), n2),
        (q.clone(), n3),
        (z[2].mul(&q), n3),
        (z23.mul(&q), n3),
    ] {
        pre.push_poch(&a, nn, 1, -1);
    }
    let num = [
        ctx.q_mono(-n2).div(&z[1])?,
        ctx.q_mono(-n1),
        ctx.q_mono(-n2),
        ctx.q_mono(-n3),
    ];
    let den = [
        ctx.q_mono(-n1 - n2).div(&z12)?,
        ctx.q_mono(-n2 - n3).div(&z23)?,
        z123.mul(&q),
    ];
    let series = crate::qalg::phi_rs(ctx, &num, &den, &q, n1.min(n2).min(n3))?;
    pre.realize(ctx)?.mul(&series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::a1::phi1;
    use crate::a2::phi2;

    #[test]
    fn rank2_reduces_to_phi1() {
        let ctx = Ctx::rational(20);
        let z = ctx.rat(2, 1);
        for n in 0..=5 {
            let p = RankProfile::new(2, &[n], &[z.clone()]).unwrap();
            let a = ar_phi(&ctx, &p).unwrap();
            let b = phi1(&ctx, n, &z).unwrap();
            assert!(a.eq_to_order(&b.truncate(ctx.order)), "n={n}");
        }
    }

    #[test]
    fn rank3_reduces_to_phi2_at_q() {
        let ctx = Ctx::rational(25);
        let q = ctx.q_mono(1);
        for n in 0..=4 {
            for m in 0..=4 {
                let p = RankProfile::new(3, &[n, m], &[q.clone(), q.clone()]).unwrap();
                let a = ar_phi(&ctx, &p).unwrap();
                let b = phi2(&ctx, n, m, &q, &q).unwrap();
                assert!(a.eq_to_order(&b.truncate(ctx.order)), "n={n} m={m}");
            }
        }
    }

    #[test]
    fn rank4_reversal_symmetry() {
        let ctx = Ctx::rational(15);
        let z = [ctx.rat(2, 1), ctx.rat(3, 1), ctx.rat(5, 1)];
        for n in [[1, 0, 2], [2, 1, 1], [0, 2, 1]] {
            let p = RankProfile::new(4, &n, &z).unwrap();
            let a = ar_phi(&ctx, &p).unwrap();
            let b = ar_phi(&ctx, &p.reversed()).unwrap();
            assert!(a.eq_to_order(&b), "n={n:?}");
        }
    }

    #[test]
    fn rank4_closed_form_agrees() {
        let ctx = Ctx::rational(15);
        let z = [ctx.rat(2, 1), ctx.rat(3, 1), ctx.rat(5, 1)];
        for n1 in 0..=2 {
            for n2 in 0..=2 {
                for n3 in 0..=2 {
                    let p = RankProfile::new(4, &[n1, n2, n3], &z).unwrap();
                    let a = ar_phi(&ctx, &p).unwrap();
                    let b = ar4_phi_closed(&ctx, &[n1, n2, n3], &z).unwrap();
                    assert!(a.eq_to_order(&b), "n=({n1},{n2},{n3})");
                }
            }
        }
    }

    #[test]
    fn chain_small_ranks() {
        let ctx = Ctx::rational(15);
        // r = 2 is the classical chain
        let p2 = RankProfile::new(2, &[4], &[ctx.rat(2, 1)]).unwrap();
        assert!(ar_chain_check(&ctx, &p2).unwrap());
        // r = 3 instance
        let p3 = RankProfile::new(3, &[2, 3], &[ctx.rat(2, 1), ctx.rat(3, 1)]).unwrap();
        assert!(ar_chain_check(&ctx, &p3).unwrap());
    }

    #[test]
    fn rank2_hua_limit() {
        // r = 2, z = q: limit is 1/((q;q)_inf (q^2;q)_inf)
        let ctx = Ctx::rational(20);
        assert!(hua_limit_check(&ctx, 2, &[ctx.q_mono(1)], 22).unwrap());
    }
}
