//! Dense two-phase primal simplex over the rationals with Bland's rule.
//!
//! Solves max cᵀx subject to Ax ≤ b, x ≥ 0. Each row gets a slack; rows
//! with b < 0 are negated and given an artificial variable for phase one.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{fmt_rat, BigRat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactLP {
    /// Constraint rows.
    pub a: Vec<Vec<BigRat>>,
    pub b: Vec<BigRat>,
    /// Objective (maximized).
    pub c: Vec<BigRat>,
    pub row_names: Vec<String>,
    pub col_names: Vec<String>,
}

impl ExactLP {
    pub fn new(a: Vec<Vec<BigRat>>, b: Vec<BigRat>, c: Vec<BigRat>) -> Result<Self> {
        let n = c.len();
        if a.len() != b.len() || a.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("LP dimensions disagree".into()));
        }
        let row_names = (0..a.len()).map(|i| format!("r{i}")).collect();
        let col_names = (0..n).map(|j| format!("x{j}")).collect();
        Ok(ExactLP { a, b, c, row_names, col_names })
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn cols(&self) -> usize {
        self.c.len()
    }

    /// Aᵀq.
    pub fn at_times(&self, q: &[BigRat]) -> Vec<BigRat> {
        (0..self.cols())
            .map(|j| self.a.iter().zip(q).map(|(row, qi)| &row[j] * qi).sum())
            .collect()
    }

    /// Ax.
    pub fn a_times(&self, x: &[BigRat]) -> Vec<BigRat> {
        self.a.iter().map(|row| row.iter().zip(x).map(|(a, x)| a * x).sum()).collect()
    }

    pub fn objective(&self, x: &[BigRat]) -> BigRat {
        self.c.iter().zip(x).map(|(c, x)| c * x).sum()
    }

    /// Indices of rows with Ax > b.
    pub fn violations(&self, x: &[BigRat]) -> Vec<usize> {
        self.a_times(x)
            .iter()
            .zip(&self.b)
            .enumerate()
            .filter(|(_, (ax, b))| ax > b)
            .map(|(i, _)| i)
            .collect()
    }

    /// Human-readable dump: one `max` line, then one line per constraint,
    /// entries as exact rationals.
    pub fn to_text(&self) -> String {
        let term = |coef: &BigRat, name: &str| format!("{} {}", fmt_rat(coef), name);
        let mut out = String::new();
        let obj: Vec<String> = self
            .c
            .iter()
            .zip(&self.col_names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, n)| term(c, n))
            .collect();
        out.push_str(&format!("max: {}\n", obj.join(" + ")));
        out.push_str("subject to:\n");
        for (i, row) in self.a.iter().enumerate() {
            let lhs: Vec<String> = row
                .iter()
                .zip(&self.col_names)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, n)| term(c, n))
                .collect();
            out.push_str(&format!("  {}: {} <= {}\n", self.row_names[i], lhs.join(" + "), fmt_rat(&self.b[i])));
        }
        out.push_str("bounds: all variables >= 0\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCertificate {
    /// One nonnegative multiplier per constraint row.
    pub q: Vec<BigRat>,
    /// bᵀq.
    pub objective: BigRat,
    /// (Aᵀq)_j − c_j ≥ 0 per column.
    pub slack: Vec<BigRat>,
}

#[derive(Serialize)]
pub struct DualCertificateJson {
    pub q: Vec<String>,
    pub objective: String,
    pub slack: Vec<String>,
}

impl DualCertificate {
    pub fn to_json(&self) -> DualCertificateJson {
        DualCertificateJson {
            q: self.q.iter().map(fmt_rat).collect(),
            objective: fmt_rat(&self.objective),
            slack: self.slack.iter().map(fmt_rat).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub optimum: BigRat,
    pub primal: Vec<BigRat>,
    pub dual: DualCertificate,
    /// Objective value at every primal-feasible iterate of phase two.
    pub trace: Vec<BigRat>,
}

struct Tableau {
    /// rows × (cols + 1); last column is the right-hand side.
    t: Vec<Vec<BigRat>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.t[r][col].clone();
        for x in self.t[r].iter_mut() {
            *x /= &p;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Reduced costs of `cost` (maximization) for the current basis.
    fn reduced(&self, cost: &[BigRat]) -> Vec<BigRat> {
        let w = cost.len();
        let mut d: Vec<BigRat> = cost.to_vec();
        for (i, &bi) in self.basis.iter().enumerate() {
            let cb = &cost[bi];
            if cb.is_zero() {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate().take(w) {
                *dj -= cb * &self.t[i][j];
            }
        }
        d
    }

    fn value(&self, cost: &[BigRat]) -> BigRat {
        let rhs = self.t[0].len() - 1;
        self.basis.iter().enumerate().map(|(i, &b)| &cost[b] * &self.t[i][rhs]).sum()
    }

    /// Bland's rule; columns in `allowed` only. Returns Err(Unbounded) if a
    /// column with positive reduced cost has no positive entry.
    fn optimize(&mut self, cost: &[BigRat], allowed: usize, mut on_step: impl FnMut(&Tableau)) -> Result<()> {
        let rhs = self.t[0].len() - 1;
        loop {
            let d = self.reduced(cost);
            let Some(col) = (0..allowed).find(|&j| d[j].is_positive()) else {
                return Ok(());
            };
            let mut best: Option<(BigRat, usize, usize)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if row[col].is_positive() {
                    let ratio = &row[rhs] / &row[col];
                    let better = match &best {
                        None => true,
                        Some((r, _, bi)) => ratio < *r || (ratio == *r && self.basis[i] < *bi),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            let Some((_, r, _)) = best else {
                return Err(Error::Unbounded);
            };
            self.pivot(r, col);
            on_step(self);
        }
    }
}

pub fn solve_lp(lp: &ExactLP) -> Result<LpSolution> {
    let m = lp.rows();
    let n = lp.cols();
    let neg: Vec<usize> = (0..m).filter(|&i| lp.b[i].is_negative()).collect();
    let k = neg.len();
    // columns: x (n) | slacks (m) | artificials (k) | rhs
    let width = n + m + k;
    let mut t = vec![vec![BigRat::zero(); width + 1]; m];
    let mut basis = vec![0; m];
    for i in 0..m {
        let sign = if lp.b[i].is_negative() { -BigRat::one() } else { BigRat::one() };
        for j in 0..n {
            t[i][j] = &lp.a[i][j] * &sign;
        }
        t[i][n + i] = sign.clone();
        t[i][width] = &lp.b[i] * &sign;
        basis[i] = n + i;
    }
    for (ai, &i) in neg.iter().enumerate() {
        t[i][n + m + ai] = BigRat::one();
        basis[i] = n + m + ai;
    }
    let mut tab = Tableau { t, basis };

    if k > 0 {
        // phase one: maximize −Σ artificials
        let mut cost = vec![BigRat::zero(); width];
        for c in cost.iter_mut().skip(n + m) {
            *c = -BigRat::one();
        }
        tab.optimize(&cost, width, |_| {})?;
        if tab.value(&cost).is_negative() {
            return Err(Error::Infeasible);
        }
        // drive zero-level artificials out of the basis
        for r in 0..m {
            if tab.basis[r] >= n + m {
                if let Some(col) = (0..n + m).find(|&j| !tab.t[r][j].is_zero()) {
                    tab.pivot(r, col);
                }
            }
        }
    }

    let mut cost = vec![BigRat::zero(); width];
    cost[..n].clone_from_slice(&lp.c);
    let extract = |tab: &Tableau| -> Vec<BigRat> {
        let mut x = vec![BigRat::zero(); n];
        for (i, &b) in tab.basis.iter().enumerate() {
            if b < n {
                x[b] = tab.t[i][width].clone();
            }
        }
        x
    };
    let mut trace = vec![lp.objective(&extract(&tab))];
    tab.optimize(&cost, n + m, |tab| trace.push(lp.objective(&extract(tab))))?;
    let primal = extract(&tab);
    let optimum = lp.objective(&primal);

    // duals: solve Bᵀy = c_B over the original columns [A | I]
    let column = |j: usize| -> Vec<BigRat> {
        if j < n {
            (0..m).map(|i| lp.a[i][j].clone()).collect()
        } else if j < n + m {
            (0..m).map(|i| if i == j - n { BigRat::one() } else { BigRat::zero() }).collect()
        } else {
            unreachable!("artificial left in basis at a nonzero row")
        }
    };
    let bt: Vec<Vec<BigRat>> = tab.basis.iter().map(|&j| column(j)).collect();
    let cb: Vec<BigRat> = tab.basis.iter().map(|&j| if j < n { lp.c[j].clone() } else { BigRat::zero() }).collect();
    let q = solve_square(bt, cb).ok_or_else(|| Error::Degenerate("singular basis".into()))?;
    let objective: BigRat = q.iter().zip(&lp.b).map(|(q, b)| q * b).sum();
    let slack: Vec<BigRat> = lp.at_times(&q).into_iter().zip(&lp.c).map(|(x, c)| x - c).collect();

    let dual = DualCertificate { q, objective, slack };
    certify(lp, &primal, &optimum, &dual)?;
    Ok(LpSolution { optimum, primal, dual, trace })
}

/// Exact checks of primal feasibility, dual feasibility and equal objectives.
fn certify(lp: &ExactLP, x: &[BigRat], opt: &BigRat, dual: &DualCertificate) -> Result<()> {
    let fail = |m: &str| Err(Error::Degenerate(format!("certificate check failed: {m}")));
    if x.iter().any(Signed::is_negative) || !lp.violations(x).is_empty() {
        return fail("primal infeasible");
    }
    if dual.q.iter().any(Signed::is_negative) || dual.slack.iter().any(Signed::is_negative) {
        return fail("dual infeasible");
    }
    if dual.objective != *opt {
        return fail("duality gap");
    }
    Ok(())
}

/// Solves M y = r where M is given as rows; None if singular.
fn solve_square(mut rows_t: Vec<Vec<BigRat>>, r: Vec<BigRat>) -> Option<Vec<BigRat>> {
    // rows_t[k] is column k of B, so Bᵀ has rows rows_t[k]: Bᵀ y = c_B
    let m = r.len();
    let mut aug: Vec<Vec<BigRat>> = rows_t
        .drain(..)
        .zip(r)
        .map(|(mut row, rhs)| {
            row.push(rhs);
            row
        })
        .collect();
    for col in 0..m {
        let piv = (col..m).find(|&i| !aug[i][col].is_zero())?;
        aug.swap(col, piv);
        let p = aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x /= &p;
        }
        let prow = aug[col].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(aug.into_iter().map(|mut row| row.pop().unwrap()).collect())
}
