//! Exact coefficient domains and truncated formal Laurent series in q,
//! with q-Pochhammer symbols, Gaussian binomials and theta functions as the
//! shared vocabulary of every identity suite.
//!
//! Two verification modes are supported through one [`Domain`] type:
//! evaluation mode (no symbols, coefficients in Q, arbitrary Laurent-series
//! inversion) and symbolic mode (coefficients are Laurent polynomials over Z
//! in up to four declared symbols, division only by unit monomials).

pub mod coeff;
pub mod hyper;
pub mod monomial;
pub mod products;
pub mod series;

pub use coeff::{Coef, Domain, Int, LaurentPoly, Rat};
pub use hyper::{phi_rs, w65};
pub use monomial::ParamMonomial;
pub use products::{poch, poch_inf, poch_multi, qbinom, theta, theta_multi, Ctx, FactorProduct};
pub use series::{Comparison, QSeries, ORDER_EXACT};

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn geom(ctx: &Ctx) -> QSeries {
        // 1/(1-q) = sum q^k
        ctx.inv(&ctx.one().sub(&ctx.q_pow(1)).unwrap()).unwrap()
    }

    #[test]
    fn add_window_contract() {
        // windows [0,10] and [0,5] -> result window [0,5]
        let ctx = Ctx::rational(10);
        let a = geom(&ctx);
        let b = geom(&ctx.with_order(5));
        let s = a.add(&b).unwrap();
        assert_eq!(s.order(), 5);
        // (1+q) + (q+q^2) = 1+2q+q^2
        let p1 = ctx.one().add(&ctx.q_pow(1)).unwrap();
        let p2 = ctx.q_pow(1).add(&ctx.q_pow(2)).unwrap();
        let sum = p1.add(&p2).unwrap();
        assert_eq!(sum.coeff(1), Coef::from_int(&ctx.domain, 2));
        assert_eq!(sum.coeff(2), Coef::from_int(&ctx.domain, 1));
        // s + 0 = s
        let z = QSeries::zero(&ctx.domain);
        assert!(a.add(&z).unwrap().eq_to_order(&a));
    }

    #[test]
    fn mul_window_and_shift() {
        let ctx = Ctx::rational(12);
        // (1-q) * sum q^k = 1
        let g = geom(&ctx);
        let p = ctx.one().sub(&ctx.q_pow(1)).unwrap().mul(&g).unwrap();
        assert!(p.eq_to_order(&ctx.one()));
        // q^{-2} * q^3 = q, min_deg 1
        let m = ctx.q_pow(-2).mul(&ctx.q_pow(3)).unwrap();
        assert_eq!(m.low_deg(), Some(1));
        assert!(m.is_exact());
    }

    #[test]
    fn mul_symbolic_difference_of_squares() {
        // (1+zq)(1-zq) = 1 - z^2 q^2
        let ctx = Ctx::symbolic(&["z"], 10);
        let zq = ctx.sym("z").mul(&ctx.q_mono(1));
        let a = ctx.one().add(&zq.to_series().unwrap()).unwrap();
        let b = zq.one_minus().unwrap();
        let p = a.mul(&b).unwrap();
        let z2q2 = ctx.sym("z").pow(2).unwrap().mul(&ctx.q_mono(2));
        let expect = z2q2.one_minus().unwrap();
        assert!(p.eq_to_order(&expect));
    }

    #[test]
    fn inv_roundtrip_and_errors() {
        let ctx = Ctx::rational(15);
        // inv(1-q) = 1 + q + q^2 + ...
        let inv = geom(&ctx);
        for d in 0..=15 {
            assert_eq!(inv.coeff(d), Coef::Rat(Rat::one()));
        }
        // inv(-w q^{-1} (1 - q/w)) at w=5: -(1/5) q (1 + q/5 + q^2/25 + ...)
        let w = ctx.rat(5, 1);
        let f = w
            .neg()
            .mul(&ctx.q_mono(-1))
            .to_series()
            .unwrap()
            .mul(&ctx.q_mono(1).div(&w).unwrap().one_minus().unwrap())
            .unwrap();
        let g = ctx.inv(&f).unwrap();
        assert_eq!(g.low_deg(), Some(1));
        assert_eq!(g.coeff(1), Coef::Rat(Rat::new(Int::from(-1), Int::from(5))));
        assert_eq!(g.coeff(2), Coef::Rat(Rat::new(Int::from(-1), Int::from(25))));
        // s * inv(s) = 1 over the common window
        assert!(f.mul(&g).unwrap().eq_to_order(&ctx.one()));
        // inv(1-z) with free z fails: leading coefficient is not a monomial
        let ctxs = Ctx::symbolic(&["z"], 10);
        let one_minus_z = ctxs.sym("z").one_minus().unwrap();
        assert!(ctxs.inv(&one_minus_z).is_err());
    }

    #[test]
    fn poch_zero_argument_is_one() {
        let ctx = Ctx::rational(10);
        let zero = ParamMonomial::zero(&ctx.domain);
        assert!(poch(&ctx, &zero, 7, 1).unwrap().eq_to_order(&ctx.one()));
        assert!(poch_inf(&ctx, &zero, 1).unwrap().eq_to_order(&ctx.one()));
    }

    #[test]
    fn poch_inf_reciprocal_check() {
        // (q;q)_inf * 1/(q;q)_inf = 1
        let ctx = Ctx::rational(25);
        let e = poch_inf(&ctx, &ctx.q_mono(1), 1).unwrap();
        let inv = ctx.inv(&e).unwrap();
        assert!(e.mul(&inv).unwrap().eq_to_order(&ctx.one()));
    }

    #[test]
    fn theta_at_q_power_argument() {
        // theta(q; q^2) = (q;q^2)_inf^2 truncated
        let ctx = Ctx::rational(20);
        let t = theta(&ctx, &ctx.q_mono(1), 2).unwrap();
        let f = poch_inf(&ctx, &ctx.q_mono(1), 2).unwrap();
        assert!(t.eq_to_order(&f.mul(&f).unwrap()));
    }
}
