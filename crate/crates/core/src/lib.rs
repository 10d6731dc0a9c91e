//! qbailey: an exact q-series engine and verification harness for
//! Rogers-Ramanujan-type identities built from Bailey chains and Bailey
//! trees, in rank one (classical) and rank two (the A2 root system).
//!
//! Everything is computed over exact coefficient rings (arbitrary-precision
//! rationals or integer Laurent polynomials); identities are verified as
//! exact coefficient equalities of truncated q-series, with the compared
//! window recorded in every report.
//!
//! The main layers are:
//! - [`qalg`]: truncated Laurent series, Pochhammer symbols, q-binomials,
//!   theta functions;
//! - [`lattice`]: partition and root-lattice enumeration plus a graded
//!   summation combinator with degree-bound certificates;
//! - [`a1`]: the classical Bailey chain and tree (Phi functions, kernels,
//!   Rogers-Selberg functions, Andrews-Gordon-Bressoud machinery);
//! - [`a2`]: the A2 Bailey chain and tree (two-index Phi functions and their
//!   u,v / u,v,c,d deformations, kernels, Delta and Psi weights);
//! - [`ar`]: the rank-r Phi function and Bailey chain at desk scale;
//! - [`suites`]: end-to-end identity verification suites with structured
//!   reports.

pub mod a1;
pub mod a2;
pub mod ar;
pub mod error;
pub mod lattice;
pub mod qalg;
pub mod suites;

pub use error::{QError, Result};
pub use qalg::{Coef, Ctx, Domain, ParamMonomial, QSeries};
