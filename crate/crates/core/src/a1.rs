//! Classical (rank one) Bailey machinery: the Phi functions, kernels, chain
//! and tree transforms, Slater seed identities, Rogers-Selberg functions and
//! the Andrews-Gordon-Bressoud pipeline.
//!
//! The basic rational functions, for integers n, r, y:
//!
//!   Phi_n(z;q)      = 1/[(q;q)_n (zq;q)_n]
//!   Phi_n(u;z;q)    = (1 - uz - (1-u) z q^n) / [(q;q)_n (z;q)_{n+1}]
//!   Phi_{n;y}(z;q)  = 1/[(q;q)_{n-y} (zq;q)_{n+y}]
//!   K_{n;r}(z;q)    = z^r q^{r^2} / (q;q)_{n-r}
//!
//! All vanishing conventions (1/(q;q)_n = 0 for n < 0) are enforced by the
//! factored-product accumulator, so the Phi functions are always computed as
//! explicit products, never by recursion.

use std::collections::BTreeMap;

use crate::error::{QError, Result};
use crate::qalg::{poch_inf, qbinom, Ctx, FactorProduct, ParamMonomial, QSeries};

// ---------------------------------------------------------------------------
// Phi functions
// ---------------------------------------------------------------------------

/// Phi_n(z;q) = 1/[(q;q)_n (zq;q)_n]; zero for n < 0.
pub fn phi1(ctx: &Ctx, n: i64, z: &ParamMonomial) -> Result<QSeries> {
    let q = ctx.q_mono(1);
    let mut p = FactorProduct::new(&ctx.domain);
    p.push_poch(&q, n, 1, -1);
    p.push_poch(&z.mul(&q), n, 1, -1);
    p.realize(ctx)
}

/// Divide a series by (1 - x). Inverts the factor when the domain allows it,
/// otherwise attempts exact coefficientwise polynomial division; failure
/// signals that evaluation mode is required.
pub fn div_by_one_minus(ctx: &Ctx, s: &QSeries, x: &ParamMonomial) -> Result<QSeries> {
    if x.is_one() {
        return Err(QError::Pole("division by (1 - 1)".into()));
    }
    if x.is_zero() {
        return Ok(s.clone());
    }
    let invertible = !x.has_symbols() || x.q_exp() != 0;
    if invertible {
        let f = x.one_minus()?;
        let inv = f.inv_to(ctx.order.saturating_sub(s.min_deg().min(0)))?;
        return s.mul(&inv);
    }
    // Symbolic with q-degree zero: (1 - x) is constant in q, divide each
    // coefficient exactly.
    let divisor = x.one_minus()?.coeff(0);
    let mut coeffs = BTreeMap::new();
    for (&d, c) in s.iter() {
        match c.div_exact(&divisor) {
            Some(quot) => {
                coeffs.insert(d, quot);
            }
            None => {
                return Err(QError::SymbolicDivision(
                    c.display(&ctx.domain),
                    divisor.display(&ctx.domain),
                ))
            }
        }
    }
    Ok(QSeries::from_coeffs(ctx.domain.clone(), s.min_deg(), s.order(), coeffs))
}

/// Phi_n(u;z;q) = (1 - uz - (1-u) z q^n) / [(q;q)_n (z;q)_{n+1}].
///
/// The denominator is kept as the unexpanded product (q;q)_n (1-z) (zq;q)_n;
/// the division by (1-z) happens exactly or not at all.
pub fn phi1_u(ctx: &Ctx, n: i64, u: &ParamMonomial, z: &ParamMonomial) -> Result<QSeries> {
    if n < 0 {
        return Ok(ctx.zero());
    }
    let uz = u.mul(z);
    // 1 - uz - z q^n + uz q^n
    let numer = ctx
        .one()
        .sub(&uz.to_series()?)?
        .sub(&z.mul_q_pow(n).to_series()?)?
        .add(&uz.mul_q_pow(n).to_series()?)?;
    let q = ctx.q_mono(1);
    let mut rest = FactorProduct::new(&ctx.domain);
    rest.push_poch(&q, n, 1, -1);
    rest.push_poch(&z.mul(&q), n, 1, -1);
    let reduced = div_by_one_minus(ctx, &numer, z)?;
    reduced.mul(&rest.realize(ctx)?)
}

/// Phi_{n;y}(z;q) = 1/[(q;q)_{n-y} (zq;q)_{n+y}]; vanishes unless n >= y.
pub fn phi1_y(ctx: &Ctx, n: i64, y: i64, z: &ParamMonomial) -> Result<QSeries> {
    let q = ctx.q_mono(1);
    let mut p = FactorProduct::new(&ctx.domain);
    p.push_poch(&q, n - y, 1, -1);
    p.push_poch(&z.mul(&q), n + y, 1, -1);
    p.realize(ctx)
}

/// Phi_{n;y}(u;z;q) = Phi_{n-y}(u; z q^{2y}; q) / (zq;q)_{2y}.
pub fn phi1_y_u(
    ctx: &Ctx,
    n: i64,
    y: i64,
    u: &ParamMonomial,
    z: &ParamMonomial,
) -> Result<QSeries> {
    let inner = phi1_u(ctx, n - y, u, &z.mul_q_pow(2 * y))?;
    let mut p = FactorProduct::new(&ctx.domain);
    p.push_poch(&z.mul(&ctx.q_mono(1)), 2 * y, 1, -1);
    inner.mul(&p.realize(ctx)?)
}

/// Phi_n(a; q^{-1}) = 1/[(q^{-1};q^{-1})_n (a q^{-1};q^{-1})_n], realised by
/// literal substitution into the finite product (a Laurent object).
pub fn phi1_qinv(ctx: &Ctx, n: i64, a: &ParamMonomial) -> Result<QSeries> {
    let qi = ctx.q_mono(-1);
    let mut p = FactorProduct::new(&ctx.domain);
    p.push_poch(&qi, n, -1, -1);
    p.push_poch(&a.mul(&qi), n, -1, -1);
    p.realize(ctx)
}

/// K_{n;r}(z;q) = z^r q^{r^2} / (q;q)_{n-r}; zero for r > n.
pub fn kernel1(ctx: &Ctx, n: i64, r: i64, z: &ParamMonomial) -> Result<QSeries> {
    let mut p = FactorProduct::new(&ctx.domain);
    p.mul_monomial(&z.pow(r)?.mul_q_pow(r * r));
    p.push_poch(&ctx.q_mono(1), n - r, 1, -1);
    p.realize(ctx)
}

// ---------------------------------------------------------------------------
// Tables and chain steps
// ---------------------------------------------------------------------------

/// Finitely supported sequence n -> series, the object a chain step acts on.
/// Missing entries are zero.
#[derive(Clone, Debug)]
pub struct A1Table {
    pub z: ParamMonomial,
    max_n: i64,
    entries: BTreeMap<i64, QSeries>,
}

impl A1Table {
    pub fn new(z: &ParamMonomial) -> Self {
        A1Table { z: z.clone(), max_n: -1, entries: BTreeMap::new() }
    }

    /// Build from a function on 0..=max_n.
    pub fn from_fn(
        z: &ParamMonomial,
        max_n: i64,
        mut f: impl FnMut(i64) -> Result<QSeries>,
    ) -> Result<Self> {
        let mut t = A1Table::new(z);
        for n in 0..=max_n {
            t.set(n, f(n)?);
        }
        Ok(t)
    }

    pub fn set(&mut self, n: i64, s: QSeries) {
        self.max_n = self.max_n.max(n);
        if !s.is_zero_to_order() {
            self.entries.insert(n, s);
        }
    }

    pub fn get(&self, n: i64, ctx: &Ctx) -> QSeries {
        self.entries.get(&n).cloned().unwrap_or_else(|| ctx.zero())
    }

    pub fn max_n(&self) -> i64 {
        self.max_n
    }
}

/// One Bailey chain / tree step: out[n] = sum_r K_{n;r}(z';q) t[r], where
/// z' = z for the chain and z' = z/q for the tree's deforming branch.
pub fn chain_step1(ctx: &Ctx, t: &A1Table, z: &ParamMonomial, shift: bool) -> Result<A1Table> {
    let zk = if shift { z.mul_q_pow(-1) } else { z.clone() };
    let mut out = A1Table::new(z);
    for n in 0..=t.max_n() {
        let mut acc = ctx.zero();
        for (&r, tr) in &t.entries {
            if r > n {
                break;
            }
            acc = acc.add(&kernel1(ctx, n, r, &zk)?.mul(tr)?)?;
        }
        out.set(n, acc);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Rogers-Selberg functions
// ---------------------------------------------------------------------------

/// Rogers-Selberg function Q_{k,i}(z;q) in its single-sum form
///
///   1/(zq;q)_inf * sum_{n>=0} (1 - z^i q^{(2n+1)i}) (-1)^n z^{kn}
///                  q^{(2k+1) binom(n+1,2) - in} (zq;q)_n / (q;q)_n,
///
/// for 1 <= i <= k, with Q_{k,0} := 0 and Q_{k,i}(0;q) = 1.
pub fn rs_bosonic(ctx: &Ctx, k: i64, i: i64, z: &ParamMonomial) -> Result<QSeries> {
    if i == 0 {
        return Ok(ctx.zero());
    }
    if !(1..=k).contains(&i) {
        return Err(QError::BadParameter(format!(
            "Rogers-Selberg needs 0 <= i <= k, got k={k} i={i}"
        )));
    }
    let q = ctx.q_mono(1);
    let zq = z.mul(&q);
    let mut sum = ctx.zero();
    let mut n = 0i64;
    loop {
        let quad = (2 * k + 1) * n * (n + 1) / 2 - i * n;
        // z^{kn} contributes kn*q_exp(z); (zq;q)_n at least n*min(0, 1+q_exp(z)).
        let lower = quad + k * n * z.q_exp().min(0) + n * (1 + z.q_exp()).min(0);
        if lower > ctx.order && n > 0 {
            break;
        }
        let zkn = z.pow(k * n)?;
        if zkn.is_zero() && n > 0 {
            break; // z = 0 kills every later term
        }
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let mut term = FactorProduct::new(&ctx.domain);
        term.mul_monomial(&zkn.mul_q_pow(quad).mul(&ctx.rat(sign, 1)));
        term.push_poch(&zq, n, 1, 1);
        term.push_poch(&q, n, 1, -1);
        let base = term.realize(ctx)?;
        // (1 - z^i q^{(2n+1)i})
        let head = z.pow(i)?.mul_q_pow((2 * n + 1) * i).one_minus()?;
        sum = sum.add(&base.mul(&head)?)?;
        n += 1;
        if n > 10_000 {
            return Err(QError::BadParameter("Rogers-Selberg sum did not terminate".into()));
        }
    }
    let prefix = poch_inf(ctx, &zq, 1)?.inv_to(ctx.order)?;
    prefix.mul(&sum)
}

/// Rogers-Selberg multisum
///
///   Q_{k,i}(z;q) = sum_{l1>=...>=l_{k-1}>=0} z^{|l|}
///                  q^{l1^2+...+l_{k-1}^2 + l_i+...+l_{k-1}}
///                  / [(q;q)_{l1-l2} ... (q;q)_{l_{k-2}-l_{k-1}} (q;q)_{l_{k-1}}].
pub fn rs_fermionic(ctx: &Ctx, k: i64, i: i64, z: &ParamMonomial) -> Result<QSeries> {
    if i == 0 {
        return Ok(ctx.zero());
    }
    if !(1..=k).contains(&i) {
        return Err(QError::BadParameter(format!(
            "Rogers-Selberg needs 0 <= i <= k, got k={k} i={i}"
        )));
    }
    let q = ctx.q_mono(1);
    let len = (k - 1) as usize;
    // l^2 + l*min(0, q_exp(z)) caps each part.
    let mut cap = 1i64;
    while cap * cap + cap * z.q_exp().min(0) <= ctx.order {
        cap += 1;
    }
    let mut sum = ctx.zero();
    let mut err = None;
    crate::lattice::partitions_box(len, cap, &mut |lam| {
        if err.is_some() {
            return;
        }
        let go = || -> Result<QSeries> {
            let mut term = FactorProduct::new(&ctx.domain);
            let mut exp = 0i64;
            for j in 1..=len {
                let lj = lam.part(j);
                exp += lj * lj;
                if j as i64 >= i {
                    exp += lj;
                }
                let next = if j == len { 0 } else { lam.part(j + 1) };
                term.push_poch(&q, lj - next, 1, -1);
            }
            let zw = z.pow(lam.weight())?;
            if zw.is_zero() && !lam.is_empty() {
                return Ok(ctx.zero());
            }
            term.mul_monomial(&zw.mul_q_pow(exp));
            term.realize(ctx)
        };
        match go() {
            Ok(t) => match sum.add(&t) {
                Ok(s) => sum = s,
                Err(e) => err = Some(e),
            },
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(sum.truncate(ctx.order))
}

// ---------------------------------------------------------------------------
// Andrews-Gordon-Bressoud identities
// ---------------------------------------------------------------------------

/// Both sides of the modulus-K Andrews-Gordon-Bressoud identity,
/// K = 2k + tau + 2, tau in {0,1}, 0 <= a <= k:
///
///   LHS = sum_{l1>=...>=lk>=0} q^{l1^2+...+lk^2 + l_{a+1}+...+lk}
///         / [(q;q)_{l1-l2} ... (q;q)_{l_{k-1}-lk} (q^{2-tau};q^{2-tau})_{lk}]
///   RHS = (q^{a+1}, q^{K-a-1}, q^K; q^K)_inf / (q;q)_inf.
pub fn agb_sides(ctx: &Ctx, k: i64, a: i64, tau: i64) -> Result<(QSeries, QSeries)> {
    if !(0..=k).contains(&a) || k < 1 || !(0..=1).contains(&tau) {
        return Err(QError::BadParameter(format!(
            "AGB needs 1<=k, 0<=a<=k, tau in {{0,1}}; got k={k} a={a} tau={tau}"
        )));
    }
    let kk = 2 * k + tau + 2;
    let q = ctx.q_mono(1);
    let step = (2 - tau) as u32;
    let mut cap = 1i64;
    while cap * cap <= ctx.order {
        cap += 1;
    }
    let mut lhs = ctx.zero();
    let mut err = None;
    crate::lattice::partitions_box(k as usize, cap, &mut |lam| {
        if err.is_some() {
            return;
        }
        let go = || -> Result<QSeries> {
            let mut exp = 0i64;
            let mut term = FactorProduct::new(&ctx.domain);
            for i in 1..=k {
                let li = lam.part(i as usize);
                exp += li * li;
                if i > a {
                    exp += li;
                }
                if i < k {
                    term.push_poch(&q, li - lam.part(i as usize + 1), 1, -1);
                }
            }
            term.mul_monomial(&ctx.q_mono(exp));
            term.push_poch(&ctx.q_mono(2 - tau), lam.part(k as usize), step as i64, -1);
            term.realize(ctx)
        };
        match go() {
            Ok(t) => match lhs.add(&t) {
                Ok(s) => lhs = s,
                Err(e) => err = Some(e),
            },
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let kk_u = kk as u32;
    let rhs = poch_inf(ctx, &ctx.q_mono(a + 1), kk_u)?
        .mul(&poch_inf(ctx, &ctx.q_mono(kk - a - 1), kk_u)?)?
        .mul(&poch_inf(ctx, &ctx.q_mono(kk), kk_u)?)?
        .mul(&poch_inf(ctx, &q, 1)?.inv_to(ctx.order)?)?;
    Ok((lhs.truncate(ctx.order), rhs))
}

// ---------------------------------------------------------------------------
// Slater seed identities
// ---------------------------------------------------------------------------

/// Verify the Slater-pair seed identities for one n and tau in {0,1}:
/// the polynomial form
///
///   sum_{y=-n-1}^{n} (-1)^y q^{(2+tau) binom(y+1,2) - y} [2n+1, n-y]
///     = (q;q)_{2n+1} / (q^{2-tau};q^{2-tau})_n,
///
/// its Phi form with right side (1-q)/(q^{2-tau};q^{2-tau})_n, and the folded
/// single-signed form over even offsets
///
///   sum_y q^{(2+tau) binom(2y+1,2) - 2y} (1-q^{4y+1})/(1-q) Phi_{n;2y}(q;q)
///     = 1/(q^{2-tau};q^{2-tau})_n.
///
/// Both sides vanish for negative n.
pub fn slater_seed_check(ctx: &Ctx, n: i64, tau: i64) -> Result<bool> {
    if !(0..=1).contains(&tau) {
        return Err(QError::BadParameter("tau must be 0 or 1".into()));
    }
    let q = ctx.q_mono(1);
    let two_tau = 2 + tau;
    let binom2 = |y: i64| y * (y - 1) / 2;
    let sign_coef =
        |y: i64| crate::qalg::Coef::from_int(&ctx.domain, if y.rem_euclid(2) == 0 { 1 } else { -1 });

    // Polynomial form (exact), meaningful for n >= 0.
    if n >= 0 {
        let mut lhs = ctx.zero();
        for y in (-n - 1)..=n {
            let e = two_tau * binom2(y + 1) - y;
            let t = qbinom(ctx, 2 * n + 1, n - y, 1).shift(e).mul_coef(&sign_coef(y));
            lhs = lhs.add(&t)?;
        }
        let mut rhs = FactorProduct::new(&ctx.domain);
        rhs.push_poch(&q, 2 * n + 1, 1, 1);
        rhs.push_poch(&ctx.q_mono(2 - tau), n, (2 - tau) as i64, -1);
        if !lhs.eq_to_order(&rhs.realize(ctx)?) {
            return Ok(false);
        }
    }

    // Phi form.
    let mut phi_sum = ctx.zero();
    for y in (-n.max(0) - 1)..=n.max(0) {
        let e = two_tau * binom2(y + 1) - y;
        let t = phi1_y(ctx, n, y, &q)?.shift(e).mul_coef(&sign_coef(y));
        phi_sum = phi_sum.add(&t)?;
    }
    let mut rhs_phi = FactorProduct::new(&ctx.domain);
    rhs_phi.push_poch(&ctx.q_mono(2 - tau), n, (2 - tau) as i64, -1);
    rhs_phi.push_factor(&q, 1);
    if !phi_sum.truncate(ctx.order).eq_to_order(&rhs_phi.realize(ctx)?) {
        return Ok(false);
    }

    // Folded form over even offsets.
    let mut folded = ctx.zero();
    let ymax = n.abs() / 2 + 2;
    for y in -ymax..=ymax {
        let e = two_tau * binom2(2 * y + 1) - 2 * y;
        let head = ctx.q_mono(4 * y + 1).one_minus()?;
        let t = phi1_y(ctx, n, 2 * y, &q)?.shift(e).mul(&head)?;
        folded = folded.add(&t)?;
    }
    folded = div_by_one_minus(ctx, &folded, &q)?;
    let mut rhs_folded = FactorProduct::new(&ctx.domain);
    rhs_folded.push_poch(&ctx.q_mono(2 - tau), n, (2 - tau) as i64, -1);
    Ok(folded.truncate(ctx.order).eq_to_order(&rhs_folded.realize(ctx)?))
}

// ---------------------------------------------------------------------------
// Matrix inversion
// ---------------------------------------------------------------------------

/// Verify sum_{r=N}^{n} q^{n-r} Phi_{n-r}(z q^{2r}; q) Phi_{r-N}(z q^{2r}; q^{-1})
/// = delta_{n,N}. The q^{-1}-argument Phi is a finite Laurent product.
pub fn inversion1_check(ctx: &Ctx, n: i64, nn: i64, z: &ParamMonomial) -> Result<bool> {
    if n < nn {
        return Err(QError::BadParameter("inversion check needs n >= N".into()));
    }
    let mut sum = ctx.zero();
    for r in nn..=n {
        let zq2r = z.mul_q_pow(2 * r);
        let t = phi1(ctx, n - r, &zq2r)?
            .mul(&phi1_qinv(ctx, r - nn, &zq2r)?)?
            .shift(n - r);
        sum = sum.add(&t)?;
    }
    let expect = if n == nn { ctx.one() } else { ctx.zero() };
    Ok(sum.eq_to_order(&expect))
}
