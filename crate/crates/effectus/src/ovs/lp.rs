//! Exact rational linear programming and polyhedral cones.
//!
//! The solver is a dense two-phase simplex over `BigRational` with Bland's
//! rule, so it never cycles and every reported value is exact. Problems are
//! desk sized (the callers cap dimensions at 8 and constraint counts at 64),
//! so the tableau recomputes reduced costs on every pivot rather than
//! maintaining them incrementally.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type QVec = Vec<BigRational>;

pub fn qvec_from_i64(xs: &[i64]) -> QVec {
    xs.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn qvec_zero(dim: usize) -> QVec {
    vec![BigRational::zero(); dim]
}

pub fn qvec_add(a: &[BigRational], b: &[BigRational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn qvec_sub(a: &[BigRational], b: &[BigRational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn qvec_scale(r: &BigRational, a: &[BigRational]) -> QVec {
    a.iter().map(|x| r * x).collect()
}

pub fn qvec_dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).fold(BigRational::zero(), |s, t| s + t)
}

pub fn qvec_is_zero(a: &[BigRational]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Formats a rational as `p/q`, or plain `p` for integers.
pub fn show_rat(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn show_qvec(x: &[BigRational]) -> String {
    let parts: Vec<String> = x.iter().map(show_rat).collect();
    format!("({})", parts.join(", "))
}

/// Positive span presentation of a polyhedral cone in fixed dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cone {
    /// The nonnegative orthant.
    Coordinatewise,
    /// All nonnegative rational combinations of the listed generators.
    Generators(Vec<QVec>),
}

impl Cone {
    /// Generators as explicit vectors; the orthant yields the unit basis.
    pub fn generators(&self, dim: usize) -> Vec<QVec> {
        match self {
            Cone::Coordinatewise => (0..dim)
                .map(|i| {
                    let mut e = qvec_zero(dim);
                    e[i] = BigRational::one();
                    e
                })
                .collect(),
            Cone::Generators(gs) => gs.clone(),
        }
    }

    /// Exact membership, by feasibility of `G lambda = x, lambda >= 0`.
    pub fn contains(&self, x: &[BigRational], dim: usize) -> bool {
        match self {
            Cone::Coordinatewise => x.iter().all(|c| !c.is_negative()),
            Cone::Generators(gs) => {
                let mut lp = RationalLP::new(gs.len());
                for coord in 0..dim {
                    let row: QVec = gs.iter().map(|g| g[coord].clone()).collect();
                    lp.add_eq(row, x[coord].clone());
                }
                lp.minimize(qvec_zero(gs.len()));
                matches!(lp.solve(), Ok(LpOutcome::Optimal { .. }))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("linear program too large: {rows} rows, {cols} columns (caps 64 and 256)")]
    TooLarge { rows: usize, cols: usize },
    #[error("constraint length {got} does not match variable count {want}")]
    RowLength { got: usize, want: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: BigRational, solution: QVec },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Relation {
    Eq,
    Le,
    Ge,
}

/// Minimization over nonnegative variables with mixed eq/le/ge rows.
#[derive(Debug, Clone)]
pub struct RationalLP {
    n_vars: usize,
    objective: QVec,
    rows: Vec<(QVec, Relation, BigRational)>,
}

impl RationalLP {
    pub fn new(n_vars: usize) -> Self {
        RationalLP {
            n_vars,
            objective: qvec_zero(n_vars),
            rows: Vec::new(),
        }
    }

    pub fn minimize(&mut self, objective: QVec) {
        assert_eq!(objective.len(), self.n_vars, "objective length");
        self.objective = objective;
    }

    pub fn add_eq(&mut self, row: QVec, rhs: BigRational) {
        self.rows.push((row, Relation::Eq, rhs));
    }

    pub fn add_le(&mut self, row: QVec, rhs: BigRational) {
        self.rows.push((row, Relation::Le, rhs));
    }

    pub fn add_ge(&mut self, row: QVec, rhs: BigRational) {
        self.rows.push((row, Relation::Ge, rhs));
    }

    /// Standard form: equality rows with nonnegative right-hand sides over
    /// the original variables followed by slack variables.
    fn standardize(&self) -> Result<(Vec<QVec>, QVec, usize), LpError> {
        let n_slack = self
            .rows
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::Eq)
            .count();
        let total = self.n_vars + n_slack;
        if self.rows.len() > 64 || total > 256 {
            return Err(LpError::TooLarge {
                rows: self.rows.len(),
                cols: total,
            });
        }
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut slack_idx = self.n_vars;
        for (row, rel, rhs) in &self.rows {
            if row.len() != self.n_vars {
                return Err(LpError::RowLength {
                    got: row.len(),
                    want: self.n_vars,
                });
            }
            let mut full = qvec_zero(total);
            full[..self.n_vars].clone_from_slice(row);
            match rel {
                Relation::Eq => {}
                Relation::Le => {
                    full[slack_idx] = BigRational::one();
                    slack_idx += 1;
                }
                Relation::Ge => {
                    full[slack_idx] = -BigRational::one();
                    slack_idx += 1;
                }
            }
            let mut rhs = rhs.clone();
            if rhs.is_negative() {
                for c in full.iter_mut() {
                    *c = -c.clone();
                }
                rhs = -rhs;
            }
            a.push(full);
            b.push(rhs);
        }
        Ok((a, b, total))
    }

    pub fn solve(&self) -> Result<LpOutcome, LpError> {
        let (a, b, total) = self.standardize()?;
        let mut c = qvec_zero(total);
        c[..self.n_vars].clone_from_slice(&self.objective);
        Ok(simplex_two_phase(a, b, c, self.n_vars))
    }

    /// Reference solver: enumerate candidate bases, solve each square
    /// system exactly, and take the best feasible value. Exponential, for
    /// cross-checking the simplex on small fixtures.
    pub fn solve_by_basis_enumeration(&self) -> Result<LpOutcome, LpError> {
        let (a, b, total) = self.standardize()?;
        let mut c = qvec_zero(total);
        c[..self.n_vars].clone_from_slice(&self.objective);

        // Row-reduce the augmented system to drop redundant rows and catch
        // inconsistency.
        let m = a.len();
        let mut aug: Vec<QVec> = (0..m)
            .map(|r| {
                let mut row = a[r].clone();
                row.push(b[r].clone());
                row
            })
            .collect();
        let rank = row_reduce(&mut aug, total);
        for row in aug.iter().skip(rank) {
            debug_assert!(qvec_is_zero(&row[..total]));
        }
        if aug
            .iter()
            .skip(rank)
            .any(|row| !row[total].is_zero())
        {
            return Ok(LpOutcome::Infeasible);
        }
        aug.truncate(rank);
        let a: Vec<QVec> = aug.iter().map(|r| r[..total].to_vec()).collect();
        let b: QVec = aug.iter().map(|r| r[total].clone()).collect();

        let mut best: Option<(BigRational, QVec)> = None;
        let mut feasible = false;
        for cols in combinations(total, rank) {
            let square: Vec<QVec> = (0..rank)
                .map(|r| cols.iter().map(|&j| a[r][j].clone()).collect())
                .collect();
            let Some(xs) = solve_square(&square, &b) else {
                continue;
            };
            if xs.iter().any(|x| x.is_negative()) {
                continue;
            }
            feasible = true;
            let mut full = qvec_zero(total);
            for (slot, &j) in cols.iter().enumerate() {
                full[j] = xs[slot].clone();
            }
            let value = qvec_dot(&c, &full);
            if best.as_ref().map(|(v, _)| value < *v).unwrap_or(true) {
                best = Some((value, full));
            }
        }
        if !feasible {
            return Ok(LpOutcome::Infeasible);
        }
        let (value, solution) = best.expect("feasible basis recorded");
        Ok(LpOutcome::Optimal {
            value,
            solution: solution[..self.n_vars].to_vec(),
        })
    }
}

/// In-place Gauss-Jordan elimination; returns the rank. Pivots are chosen
/// only in the first `pivot_width` columns, so trailing columns (an
/// augmented right-hand side, say) are eliminated but never pivoted on.
pub fn row_reduce(rows: &mut [QVec], pivot_width: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let width = rows[0].len();
    let mut rank = 0;
    for col in 0..pivot_width {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank][col].clone();
        for c in 0..width {
            rows[rank][c] = &rows[rank][c] / &p;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..width {
                    let delta = &f * &rows[rank][c];
                    rows[r][c] = &rows[r][c] - &delta;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Solves a square system exactly; `None` when singular.
pub fn solve_square(a: &[QVec], b: &QVec) -> Option<QVec> {
    let n = a.len();
    let mut aug: Vec<QVec> = (0..n)
        .map(|r| {
            let mut row = a[r].clone();
            row.push(b[r].clone());
            row
        })
        .collect();
    let rank = row_reduce(&mut aug, n);
    if rank < n {
        return None;
    }
    // After full elimination the left block is the identity.
    Some((0..n).map(|r| aug[r][n].clone()).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // Advance the rightmost index that can move.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
        }
        if cur[i] == i + n - k {
            return out;
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

struct Tableau {
    a: Vec<QVec>,
    b: QVec,
    basis: Vec<usize>,
}

impl Tableau {
    fn n_cols(&self) -> usize {
        self.a.first().map(|r| r.len()).unwrap_or(0)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col].clone();
        for c in 0..self.n_cols() {
            self.a[row][c] = &self.a[row][c] / &p;
        }
        self.b[row] = &self.b[row] / &p;
        for r in 0..self.a.len() {
            if r != row && !self.a[r][col].is_zero() {
                let f = self.a[r][col].clone();
                for c in 0..self.n_cols() {
                    let delta = &f * &self.a[row][c];
                    self.a[r][c] = &self.a[r][c] - &delta;
                }
                let delta = &f * &self.b[row];
                self.b[r] = &self.b[r] - &delta;
            }
        }
        self.basis[row] = col;
    }

    /// Reduced costs for objective `c`, given the current basis.
    fn reduced_costs(&self, c: &[BigRational]) -> QVec {
        let mut reduced = c.to_vec();
        for (r, &bv) in self.basis.iter().enumerate() {
            if !c[bv].is_zero() {
                let f = c[bv].clone();
                for j in 0..self.n_cols() {
                    let delta = &f * &self.a[r][j];
                    reduced[j] = &reduced[j] - &delta;
                }
            }
        }
        reduced
    }

    /// Bland's rule iteration to optimality; `Err(())` signals unbounded.
    fn optimize(&mut self, c: &[BigRational]) -> Result<(), ()> {
        loop {
            let reduced = self.reduced_costs(c);
            let Some(entering) = (0..self.n_cols())
                .find(|&j| reduced[j].is_negative() && !self.basis.contains(&j))
            else {
                return Ok(());
            };
            let mut leaving: Option<(usize, BigRational)> = None;
            for r in 0..self.a.len() {
                if self.a[r][entering].is_positive() {
                    let ratio = &self.b[r] / &self.a[r][entering];
                    let better = match &leaving {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < *lratio
                                || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                        }
                    };
                    if better {
                        leaving = Some((r, ratio));
                    }
                }
            }
            let Some((row, _)) = leaving else {
                return Err(());
            };
            self.pivot(row, entering);
        }
    }

    fn objective_value(&self, c: &[BigRational]) -> BigRational {
        self.basis
            .iter()
            .enumerate()
            .map(|(r, &bv)| &c[bv] * &self.b[r])
            .fold(BigRational::zero(), |s, t| s + t)
    }

    fn solution(&self, n: usize) -> QVec {
        let mut x = qvec_zero(n);
        for (r, &bv) in self.basis.iter().enumerate() {
            if bv < n {
                x[bv] = self.b[r].clone();
            }
        }
        x
    }
}

fn simplex_two_phase(a: Vec<QVec>, b: QVec, c: QVec, n_report: usize) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    if m == 0 {
        return if c.iter().any(|cj| cj.is_negative()) {
            LpOutcome::Unbounded
        } else {
            LpOutcome::Optimal {
                value: BigRational::zero(),
                solution: qvec_zero(n_report),
            }
        };
    }

    // Phase 1: artificial variables form the starting basis.
    let mut tab = Tableau {
        a: (0..m)
            .map(|r| {
                let mut row = a[r].clone();
                row.extend(qvec_zero(m));
                row[n + r] = BigRational::one();
                row
            })
            .collect(),
        b,
        basis: (n..n + m).collect(),
    };
    let mut phase1 = qvec_zero(n + m);
    for j in n..n + m {
        phase1[j] = BigRational::one();
    }
    tab.optimize(&phase1)
        .expect("phase 1 objective is bounded below by zero");
    if tab.objective_value(&phase1).is_positive() {
        return LpOutcome::Infeasible;
    }

    // Drive leftover artificials out of the basis; a row that cannot pivot
    // on any original column is redundant and gets dropped.
    let mut drop_rows = Vec::new();
    for r in 0..tab.a.len() {
        if tab.basis[r] >= n {
            match (0..n).find(|&j| !tab.a[r][j].is_zero()) {
                Some(j) => tab.pivot(r, j),
                None => drop_rows.push(r),
            }
        }
    }
    for &r in drop_rows.iter().rev() {
        tab.a.remove(r);
        tab.b.remove(r);
        tab.basis.remove(r);
    }
    for row in tab.a.iter_mut() {
        row.truncate(n);
    }

    // Phase 2.
    match tab.optimize(&c) {
        Ok(()) => LpOutcome::Optimal {
            value: tab.objective_value(&c),
            solution: tab.solution(n_report),
        },
        Err(()) => LpOutcome::Unbounded,
    }
}
