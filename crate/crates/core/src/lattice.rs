//! Bounded enumeration of partitions and root-lattice points, and a graded
//! summation combinator with degree-lower-bound pruning.
//!
//! Enumeration order is lexicographic and deterministic throughout, so
//! verification reports are reproducible run to run.

use crate::error::{QError, Result};
use crate::qalg::{Ctx, QSeries};

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

/// An integer partition: weakly decreasing positive parts (trailing zeros
/// stripped). `part(i)` is 1-indexed and returns 0 beyond the length.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<i64>);

impl Partition {
    pub fn new(parts: &[i64]) -> Self {
        let mut v: Vec<i64> = parts.iter().copied().take_while(|&p| p != 0).collect();
        assert!(
            parts.iter().skip(v.len()).all(|&p| p == 0),
            "parts must be weakly decreasing with zeros only at the end"
        );
        assert!(v.windows(2).all(|w| w[0] >= w[1]) && v.iter().all(|&p| p > 0));
        v.shrink_to_fit();
        Partition(v)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    /// 1-indexed part, zero beyond the length.
    pub fn part(&self, i: usize) -> i64 {
        if i == 0 || i > self.0.len() {
            0
        } else {
            self.0[i - 1]
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Containment mu ⊆ lambda (componentwise).
    pub fn contains(&self, mu: &Partition) -> bool {
        mu.0.iter().enumerate().all(|(i, &p)| p <= self.part(i + 1))
    }
}

/// Visit every partition with at most `max_len` parts, each at most `cap`,
/// exactly once, in lexicographic order (empty partition first).
pub fn partitions_box(max_len: usize, cap: i64, visit: &mut dyn FnMut(&Partition)) {
    fn rec(buf: &mut Vec<i64>, max_len: usize, cap: i64, visit: &mut dyn FnMut(&Partition)) {
        visit(&Partition(buf.clone()));
        if buf.len() == max_len {
            return;
        }
        let hi = buf.last().copied().unwrap_or(cap);
        for p in 1..=hi {
            buf.push(p);
            rec(buf, max_len, cap, visit);
            buf.pop();
        }
    }
    if cap < 0 {
        return;
    }
    let mut buf = Vec::new();
    rec(&mut buf, max_len, cap, visit);
}

/// All partitions in the box, collected in enumeration order.
pub fn partitions_box_vec(max_len: usize, cap: i64) -> Vec<Partition> {
    let mut out = Vec::new();
    partitions_box(max_len, cap, &mut |p| out.push(p.clone()));
    out
}

// ---------------------------------------------------------------------------
// Root lattice of A_{r-1}
// ---------------------------------------------------------------------------

/// Integer r-tuple summing to zero, embedded in Z^r.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct RootVec(Vec<i64>);

impl RootVec {
    pub fn new(entries: &[i64]) -> Result<Self> {
        if entries.iter().sum::<i64>() != 0 {
            return Err(QError::BadParameter(format!(
                "root-lattice vector must sum to zero: {entries:?}"
            )));
        }
        Ok(RootVec(entries.to_vec()))
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// 1-indexed entry.
    pub fn y(&self, i: usize) -> i64 {
        self.0[i - 1]
    }

    /// y_{ij} = y_i - y_j (1-indexed).
    pub fn diff(&self, i: usize, j: usize) -> i64 {
        self.0[i - 1] - self.0[j - 1]
    }

    /// Q+ membership: all prefix sums nonnegative.
    pub fn in_q_plus(&self) -> bool {
        let mut acc = 0;
        self.0.iter().all(|&y| {
            acc += y;
            acc >= 0
        })
    }

    /// Q++ membership: weakly decreasing entries.
    pub fn in_q_plus_plus(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// Scalar multiple t*y (stays in Q).
    pub fn scale(&self, t: i64) -> RootVec {
        RootVec(self.0.iter().map(|&y| t * y).collect())
    }
}

/// Membership constraint for lattice enumeration.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LatticeConstraint {
    Q,
    QPlus,
    QPlusPlus,
}

/// Visit every y in Q (or the constrained subset) with lo_i <= y_i <= hi_i,
/// exactly once, in lexicographic order.
pub fn lattice_points(
    r: usize,
    constraint: LatticeConstraint,
    bounds: &[(i64, i64)],
    visit: &mut dyn FnMut(&RootVec),
) {
    assert_eq!(bounds.len(), r);
    fn rec(
        buf: &mut Vec<i64>,
        r: usize,
        bounds: &[(i64, i64)],
        constraint: LatticeConstraint,
        visit: &mut dyn FnMut(&RootVec),
    ) {
        let i = buf.len();
        if i == r - 1 {
            let last = -buf.iter().sum::<i64>();
            if last < bounds[i].0 || last > bounds[i].1 {
                return;
            }
            buf.push(last);
            let y = RootVec(buf.clone());
            let ok = match constraint {
                LatticeConstraint::Q => true,
                LatticeConstraint::QPlus => y.in_q_plus(),
                LatticeConstraint::QPlusPlus => y.in_q_plus_plus(),
            };
            if ok {
                visit(&y);
            }
            buf.pop();
            return;
        }
        for v in bounds[i].0..=bounds[i].1 {
            buf.push(v);
            rec(buf, r, bounds, constraint, visit);
            buf.pop();
        }
    }
    let mut buf = Vec::new();
    rec(&mut buf, r, bounds, constraint, visit);
}

/// Lattice points in a symmetric box |y_i| <= b, collected.
pub fn lattice_points_sym_box(r: usize, constraint: LatticeConstraint, b: i64) -> Vec<RootVec> {
    let mut out = Vec::new();
    lattice_points(r, constraint, &vec![(-b, b); r], &mut |y| out.push(y.clone()));
    out
}

// ---------------------------------------------------------------------------
// Suite parameters
// ---------------------------------------------------------------------------

/// Family selector: classical (rank 1) or A2 (rank 2) identities.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    A1,
    A2,
}

/// Identity parameters (k, a, b, tau) and the derived modulus
/// K = 2k+tau+2 (classical family) or K = 3k+tau+3 (A2 family).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SuiteParams {
    pub k: i64,
    pub a: i64,
    pub b: i64,
    pub tau: i64,
    pub family: Family,
}

impl SuiteParams {
    pub fn a1(k: i64, a: i64, tau: i64) -> Result<Self> {
        let p = SuiteParams { k, a, b: a, tau, family: Family::A1 };
        p.validate()?;
        Ok(p)
    }

    pub fn a2(k: i64, a: i64, b: i64, tau: i64) -> Result<Self> {
        let p = SuiteParams { k, a, b, tau, family: Family::A2 };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let tau_ok = match self.family {
            Family::A1 => self.tau == 0 || self.tau == 1,
            Family::A2 => (-1..=1).contains(&self.tau),
        };
        if !tau_ok {
            return Err(QError::BadParameter(format!("tau = {} out of range", self.tau)));
        }
        if self.k < 1 || !(0..=self.k).contains(&self.a) || !(0..=self.k).contains(&self.b) {
            return Err(QError::BadParameter(format!(
                "need 1 <= k and 0 <= a,b <= k, got k={} a={} b={}",
                self.k, self.a, self.b
            )));
        }
        Ok(())
    }

    /// The modulus of the product side.
    pub fn modulus(&self) -> i64 {
        match self.family {
            Family::A1 => 2 * self.k + self.tau + 2,
            Family::A2 => 3 * self.k + self.tau + 3,
        }
    }
}

// ---------------------------------------------------------------------------
// Graded summation
// ---------------------------------------------------------------------------

/// A source of terms organised in shells with a monotone lower bound on the
/// minimal q-degree of all terms in a shell and every later shell.
pub trait TermSource {
    /// Lower bound for the minimal q-degree of every term in shells >= shell.
    /// Must be nondecreasing and tend to infinity.
    fn shell_bound(&self, shell: u64) -> i64;

    /// Emit all terms of one shell.
    fn emit_shell(&mut self, shell: u64, out: &mut dyn FnMut(QSeries)) -> Result<()>;
}

/// Metadata recorded by [`graded_sum`].
#[derive(Clone, Copy, Debug)]
pub struct GradedSumMeta {
    /// First shell whose bound exceeded the order (not summed).
    pub stop_shell: u64,
    /// Number of terms actually summed.
    pub terms: u64,
}

/// Sum all terms whose degree can reach `ctx.order`, stopping at the first
/// shell whose declared bound exceeds it. Every emitted term is checked
/// against its shell's certificate; a violation is a hard failure because it
/// would invalidate the truncation.
pub fn graded_sum(ctx: &Ctx, src: &mut dyn TermSource) -> Result<(QSeries, GradedSumMeta)> {
    let mut acc = ctx.zero();
    let mut shell = 0u64;
    let mut terms = 0u64;
    loop {
        let bound = src.shell_bound(shell);
        if bound > ctx.order {
            break;
        }
        let mut violation: Option<i64> = None;
        let mut batch: Vec<QSeries> = Vec::new();
        src.emit_shell(shell, &mut |t| {
            if let Some(lo) = t.low_deg() {
                if lo < bound && violation.is_none() {
                    violation = Some(lo);
                }
            }
            batch.push(t);
        })?;
        if let Some(actual) = violation {
            return Err(QError::CertificateViolated { shell, declared: bound, actual });
        }
        for t in batch {
            terms += 1;
            acc = acc.add(&t)?;
        }
        shell += 1;
        if shell > 1_000_000 {
            return Err(QError::BadParameter("graded sum did not terminate".into()));
        }
    }
    // Terms beyond the stopping shell live above ctx.order, so the sum is
    // exact there even though the accumulated window may claim more.
    Ok((acc.truncate(ctx.order), GradedSumMeta { stop_shell: shell, terms }))
}
