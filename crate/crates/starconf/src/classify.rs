//! The complete containment classification over tuples (n, l, r, d).
//!
//! The question: can a generic degree-d form in n+1 variables be written as
//! sum L_sigma M_sigma over r-subsets of l general linear forms?
//! Equivalently, does the generic degree-d hypersurface in P^n contain a
//! star configuration of type (l, r)? The answer depends on the codimension
//! c = l - r + 1 of the configuration:
//!
//! - c > n: yes for every form, generic or not (the ideal is the whole
//!   degree-r slice) - "clause (3)";
//! - c = n (the point case): yes exactly on a finite list of families -
//!   cases (i)-(viii) below - and no otherwise, by a dimension count;
//! - c < n: no for all large d - "clause (1)" - while any fixed d stays
//!   open, so the verdict carries that caveat rather than a guessed cutoff.
//!
//! The positive families for c = n, with the degree floors implied by
//! r <= d:
//!
//! | case   | family          | constraint            |
//! |--------|-----------------|-----------------------|
//! | (i)    | (1, l, l, d)    | d >= l >= 1           |
//! | (ii)   | (2, 2, 1, d)    | d >= 1                |
//! | (iii)  | (2, 3, 2, d)    | d >= 2                |
//! | (iv)   | (2, 4, 3, d)    | d >= 3                |
//! | (v)    | (2, 5, 4, d)    | d >= 5 (d = 4 fails)  |
//! | (vi)   | (n, n, 1, d)    | n >= 3, d >= 1        |
//! | (vii)  | (n, n+1, 2, d)  | n >= 3, d >= 2        |
//! | (viii) | (n, n+2, 3, d)  | n >= 3, d >= 3        |
//!
//! Everything else with c = n fails the necessary dimension count
//! l*n - C(l, n) >= 0: five general lines in the plane sit exactly on the
//! boundary, and the count is negative for l > 5 when n = 2 and for
//! l > n + 2 when n > 2.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::poly::binomial;

/// A problem instance. Feasibility (r <= l and r <= d) is a computed
/// property, never an assumption.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TupleNLRD {
    pub n: usize,
    pub l: usize,
    pub r: usize,
    pub d: usize,
}

impl TupleNLRD {
    pub fn new(n: usize, l: usize, r: usize, d: usize) -> Self {
        TupleNLRD { n, l, r, d }
    }

    pub fn is_feasible(&self) -> bool {
        self.r <= self.l && self.r <= self.d
    }

    /// Codimension l - r + 1 of the configuration; `None` when r > l.
    pub fn codim(&self) -> Option<usize> {
        if self.r <= self.l {
            Some(self.l - self.r + 1)
        } else {
            None
        }
    }
}

impl fmt::Display for TupleNLRD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.n, self.l, self.r, self.d)
    }
}

/// The possible answers for a tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Every degree-d form decomposes, not just the generic one.
    AlwaysYes,
    /// The generic degree-d form decomposes.
    GenericYes,
    /// The generic degree-d form does not decompose.
    GenericNo,
    /// Negative for all sufficiently large d; at any one fixed d the answer
    /// is open (`Unknown` is the per-degree reading of this verdict).
    GenericNoLargeD,
    /// Reserved: no classified tuple maps here, but records produced by
    /// other tools may carry it for open cases.
    Unknown,
    /// r > l or r > d: the expression cannot even be formed.
    Infeasible,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::AlwaysYes => "AlwaysYes",
            Verdict::GenericYes => "GenericYes",
            Verdict::GenericNo => "GenericNo",
            Verdict::GenericNoLargeD => "GenericNoLargeD",
            Verdict::Unknown => "Unknown",
            Verdict::Infeasible => "Infeasible",
        };
        f.write_str(s)
    }
}

/// A classified tuple: the verdict, which case of the classification drove
/// it, and the dimension-count value l*n - C(l, n) in the point case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub tuple: TupleNLRD,
    pub verdict: Verdict,
    pub case: String,
    pub bound: Option<i64>,
}

/// The dimension count l*n - C(l, n): configurations of l forms move in an
/// l*n-dimensional family, and containment imposes C(l, n) conditions. A
/// negative value rules the point case out.
pub fn dimension_bound(n: usize, l: usize) -> i64 {
    assert!(n >= 1 && l >= n, "bound needs l >= n >= 1");
    (l * n) as i64 - binomial(l, n) as i64
}

/// Total, pure decision procedure for positive (n, l, r, d).
pub fn classify(n: usize, l: usize, r: usize, d: usize) -> Classification {
    assert!(n >= 1 && l >= 1 && r >= 1 && d >= 1, "inputs must be positive");
    let tuple = TupleNLRD::new(n, l, r, d);

    if !tuple.is_feasible() {
        return Classification { tuple, verdict: Verdict::Infeasible, case: "infeasible".into(), bound: None };
    }
    let codim = l - r + 1;
    if codim > n {
        return Classification { tuple, verdict: Verdict::AlwaysYes, case: "clause (3)".into(), bound: None };
    }
    if codim < n {
        return Classification {
            tuple,
            verdict: Verdict::GenericNoLargeD,
            case: "clause (1): open at fixed d".into(),
            bound: None,
        };
    }

    // Point case l - r + 1 = n. Feasibility already enforces the degree
    // floor d >= r in every family except (v), which needs d >= r + 1.
    let bound = Some(dimension_bound(n, l));
    let (verdict, case) = match n {
        1 => (Verdict::GenericYes, "case (i)"),
        2 => match l {
            2 => (Verdict::GenericYes, "case (ii)"),
            3 => (Verdict::GenericYes, "case (iii)"),
            4 => (Verdict::GenericYes, "case (iv)"),
            5 => {
                if d >= 5 {
                    (Verdict::GenericYes, "case (v)")
                } else {
                    (Verdict::GenericNo, "case (v): d = 4 excluded")
                }
            }
            _ => (Verdict::GenericNo, "negative dimension bound"),
        },
        _ => {
            if l == n {
                (Verdict::GenericYes, "case (vi)")
            } else if l == n + 1 {
                (Verdict::GenericYes, "case (vii)")
            } else if l == n + 2 {
                (Verdict::GenericYes, "case (viii)")
            } else {
                (Verdict::GenericNo, "negative dimension bound")
            }
        }
    };
    Classification { tuple, verdict, case: case.into(), bound }
}
