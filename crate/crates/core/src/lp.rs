//! Exact linear programming over any [`Scalar`].
//!
//! A dense two-phase tableau simplex with Bland's pivoting rule. Bland's
//! rule never cycles, so on exact arithmetic the solver always terminates
//! with a provably correct status. Solutions are basic (vertex) solutions,
//! and dual values are read off the final tableau; the solver asserts
//! primal feasibility and the strong-duality identity on every optimal
//! solve before returning.
//!
//! Problems here are tiny (tens of variables), so there is no sparsity,
//! no factorization, no steepest edge — just the textbook dance, exactly.

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Maximize,
    Minimize,
}

#[derive(Clone, Debug)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

/// Inclusive variable bounds; `None` means unbounded on that side.
#[derive(Clone, Debug)]
pub struct VarBound<T> {
    pub lower: Option<T>,
    pub upper: Option<T>,
}

impl<T> Default for VarBound<T> {
    fn default() -> Self {
        VarBound {
            lower: None,
            upper: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LinearProgram<T> {
    pub direction: Direction,
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
    /// One entry per variable; an empty vector means all variables free.
    pub bounds: Vec<VarBound<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of [`solve_lp`]. `value`, `primal` and `duals` are meaningful
/// only when `status == Optimal`; `duals` has one entry per constraint and
/// satisfies `value == duals . rhs` whenever no variable has a nonzero
/// finite bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    pub value: T,
    pub primal: Vec<T>,
    pub duals: Vec<T>,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(direction: Direction, objective: Vec<T>) -> Self {
        LinearProgram {
            direction,
            objective,
            constraints: Vec::new(),
            bounds: Vec::new(),
        }
    }

    /// Give every variable a zero lower bound.
    pub fn nonnegative(mut self) -> Self {
        self.bounds = (0..self.objective.len())
            .map(|_| VarBound {
                lower: Some(T::zero()),
                upper: None,
            })
            .collect();
        self
    }

    pub fn le(&mut self, coeffs: Vec<T>, rhs: T) {
        self.constraints.push(Constraint {
            coeffs,
            relation: Relation::Le,
            rhs,
        });
    }

    pub fn eq(&mut self, coeffs: Vec<T>, rhs: T) {
        self.constraints.push(Constraint {
            coeffs,
            relation: Relation::Eq,
            rhs,
        });
    }
}

/// How each original variable maps into standard-form columns.
enum VarMap<T> {
    /// `x = lower + col`, one nonnegative column.
    Shifted { col: usize, lower: T },
    /// `x = plus - minus`, two nonnegative columns.
    Split { plus: usize, minus: usize },
}

struct Tableau<T> {
    /// `rows x (cols + 1)`; last entry of each row is the rhs.
    rows: Vec<Vec<T>>,
    /// Reduced-cost row, same width, rhs slot unused.
    obj: Vec<T>,
    basis: Vec<usize>,
    cols: usize,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        assert!(!piv.is_zero(), "pivot on zero entry");
        if !piv.is_one() {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = x.clone() / piv.clone();
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        // Tableaux here are sparse; touching only the pivot row's nonzero
        // columns is the difference between usable and glacial.
        let nonzero: Vec<usize> = (0..=self.cols)
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let factor = self.rows[i][c].clone();
            if factor.is_zero() {
                continue;
            }
            let row = &mut self.rows[i];
            for &j in &nonzero {
                row[j] = row[j].clone() - factor.clone() * pivot_row[j].clone();
            }
        }
        let factor = self.obj[c].clone();
        if !factor.is_zero() {
            for &j in &nonzero {
                self.obj[j] = self.obj[j].clone() - factor.clone() * pivot_row[j].clone();
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Rebuilds the reduced-cost row for the given column costs.
    fn reset_objective(&mut self, costs: &[T]) {
        self.obj = vec![T::zero(); self.cols + 1];
        self.obj[..self.cols].clone_from_slice(costs);
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = costs[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (x, p) in self.obj.iter_mut().zip(&self.rows[r]) {
                if !p.is_zero() {
                    *x = x.clone() - cb.clone() * p.clone();
                }
            }
        }
    }

    /// Bland's rule: entering column is the lowest-index eligible column
    /// with a negative reduced cost; the leaving row minimizes the ratio,
    /// ties broken by the smallest basis variable index. Returns false at
    /// optimality; panics with `Unbounded` via the caller's check.
    fn bland_step(&mut self, enterable: impl Fn(usize) -> bool) -> StepOutcome {
        let entering = (0..self.cols).find(|&j| enterable(j) && self.obj[j].is_negative());
        let Some(c) = entering else {
            return StepOutcome::Optimal;
        };
        let mut leave: Option<(usize, T)> = None;
        for r in 0..self.rows.len() {
            let a = &self.rows[r][c];
            if !a.is_positive() {
                continue;
            }
            let ratio = self.rows[r][self.cols].clone() / a.clone();
            let better = match &leave {
                None => true,
                Some((lr, lratio)) => {
                    ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                }
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        match leave {
            Some((r, _)) => {
                self.pivot(r, c);
                StepOutcome::Pivoted
            }
            None => StepOutcome::Unbounded,
        }
    }
}

#[derive(PartialEq, Eq)]
enum StepOutcome {
    Pivoted,
    Optimal,
    Unbounded,
}

/// Solves the program exactly. See [`LpSolution`] for the contract.
///
/// Panics on malformed input (row width mismatch) and on internal
/// consistency failures — a returned `Optimal` solution has been verified
/// against every constraint and against strong duality.
pub fn solve_lp<T: Scalar>(lp: &LinearProgram<T>) -> LpSolution<T> {
    let nv = lp.objective.len();
    for c in &lp.constraints {
        assert_eq!(
            c.coeffs.len(),
            nv,
            "constraint width differs from objective width"
        );
    }
    assert!(
        lp.bounds.is_empty() || lp.bounds.len() == nv,
        "bounds must be empty or one per variable"
    );
    let free = VarBound::default();
    let bound = |j: usize| -> &VarBound<T> { lp.bounds.get(j).unwrap_or(&free) };
    for j in 0..nv {
        if let (Some(lo), Some(hi)) = (&bound(j).lower, &bound(j).upper) {
            if lo > hi {
                return infeasible();
            }
        }
    }

    // Minimization objective over standard-form columns.
    let minimize = lp.direction == Direction::Minimize;
    let sign = |v: T| if minimize { v } else { -v };

    let mut var_map: Vec<VarMap<T>> = Vec::with_capacity(nv);
    let mut costs: Vec<T> = Vec::new();
    let mut col_of_next = 0usize;
    for j in 0..nv {
        let cost = sign(lp.objective[j].clone());
        match &bound(j).lower {
            Some(lo) => {
                var_map.push(VarMap::Shifted {
                    col: col_of_next,
                    lower: lo.clone(),
                });
                costs.push(cost);
                col_of_next += 1;
            }
            None => {
                var_map.push(VarMap::Split {
                    plus: col_of_next,
                    minus: col_of_next + 1,
                });
                costs.push(cost.clone());
                costs.push(-cost);
                col_of_next += 2;
            }
        }
    }

    // Row list: original constraints, then upper-bound rows.
    struct Row<T> {
        coeffs: Vec<(usize, T)>, // structural columns only
        relation: Relation,
        rhs: T,
    }
    let expand = |coeffs: &[T]| -> (Vec<(usize, T)>, T) {
        // Returns structural column coefficients and the rhs shift from
        // lower-bound substitutions.
        let mut out = Vec::new();
        let mut shift = T::zero();
        for (j, a) in coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match &var_map[j] {
                VarMap::Shifted { col, lower } => {
                    out.push((*col, a.clone()));
                    shift = shift + a.clone() * lower.clone();
                }
                VarMap::Split { plus, minus } => {
                    out.push((*plus, a.clone()));
                    out.push((*minus, -a.clone()));
                }
            }
        }
        (out, shift)
    };

    let mut rows: Vec<Row<T>> = Vec::new();
    let mut orig_rhs: Vec<T> = Vec::new();
    for c in &lp.constraints {
        let (coeffs, shift) = expand(&c.coeffs);
        rows.push(Row {
            coeffs,
            relation: c.relation,
            rhs: c.rhs.clone() - shift,
        });
        orig_rhs.push(c.rhs.clone());
    }
    for j in 0..nv {
        if let Some(hi) = &bound(j).upper {
            let mut unit = vec![T::zero(); nv];
            unit[j] = T::one();
            let (coeffs, shift) = expand(&unit);
            rows.push(Row {
                coeffs,
                relation: Relation::Le,
                rhs: hi.clone() - shift,
            });
            orig_rhs.push(hi.clone());
        }
    }

    let n_orig = lp.constraints.len();
    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.relation == Relation::Le).count();
    let n_struct = col_of_next;
    // A `<=` row with nonnegative rhs starts with its slack basic and needs
    // no artificial; everything else gets one. Keeping artificials rare
    // keeps phase 1 short (often empty).
    let needs_artificial: Vec<bool> = rows
        .iter()
        .map(|row| row.relation == Relation::Eq || row.rhs.is_negative())
        .collect();
    let n_art = needs_artificial.iter().filter(|&&b| b).count();
    let cols = n_struct + n_slack + n_art;
    costs.resize(cols, T::zero());

    let mut tab = Tableau {
        rows: vec![vec![T::zero(); cols + 1]; m],
        obj: vec![T::zero(); cols + 1],
        basis: vec![0; m],
        cols,
    };
    // `row_sign[i]` is -1 when the row was negated to make the rhs
    // nonnegative; duals must be flipped back. `witness[i]` is a column
    // whose initial content is the i-th unit vector, from which the dual
    // value of row i can be read in the final tableau.
    let mut row_sign: Vec<T> = vec![T::one(); m];
    let mut witness: Vec<usize> = vec![0; m];
    let mut slack_idx = n_struct;
    let mut art_idx = n_struct + n_slack;
    let art_base = n_struct + n_slack;
    for (i, row) in rows.iter().enumerate() {
        for (col, a) in &row.coeffs {
            tab.rows[i][*col] = a.clone();
        }
        if row.relation == Relation::Le {
            tab.rows[i][slack_idx] = T::one();
            slack_idx += 1;
        }
        tab.rows[i][cols] = row.rhs.clone();
        if tab.rows[i][cols].is_negative() {
            for x in tab.rows[i].iter_mut() {
                if !x.is_zero() {
                    *x = -x.clone();
                }
            }
            row_sign[i] = -T::one();
        }
        if needs_artificial[i] {
            tab.rows[i][art_idx] = T::one();
            tab.basis[i] = art_idx;
            witness[i] = art_idx;
            art_idx += 1;
        } else {
            // Non-negated <= row: its slack column is the unit vector.
            tab.basis[i] = slack_idx - 1;
            witness[i] = slack_idx - 1;
        }
    }
    let is_artificial = |j: usize| j >= art_base;

    // Phase 1: minimize the sum of artificials (skipped when none exist).
    if n_art > 0 {
        let mut phase1_costs = vec![T::zero(); cols];
        for j in art_base..cols {
            phase1_costs[j] = T::one();
        }
        tab.reset_objective(&phase1_costs);
        loop {
            match tab.bland_step(|_| true) {
                StepOutcome::Pivoted => {}
                StepOutcome::Optimal => break,
                StepOutcome::Unbounded => unreachable!("phase-1 objective is bounded below"),
            }
        }
        let infeasibility: T = tab
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| is_artificial(b))
            .map(|(r, _)| tab.rows[r][cols].clone())
            .fold(T::zero(), |acc, v| acc + v);
        if !infeasibility.is_zero() {
            return infeasible();
        }
    }

    // Drive remaining artificials out of the basis; rows that cannot be
    // pivoted are redundant and get dropped (their duals are zero).
    let mut dropped = vec![false; m];
    for r in 0..m {
        if !is_artificial(tab.basis[r]) {
            continue;
        }
        let col = (0..art_base).find(|&j| !tab.rows[r][j].is_zero());
        match col {
            Some(c) => tab.pivot(r, c),
            None => dropped[r] = true,
        }
    }

    // Phase 2 over the real costs; artificials may not re-enter.
    tab.reset_objective(&costs);
    loop {
        match tab.bland_step(|j| !is_artificial(j)) {
            StepOutcome::Pivoted => {}
            StepOutcome::Optimal => break,
            StepOutcome::Unbounded => {
                return LpSolution {
                    status: LpStatus::Unbounded,
                    value: T::zero(),
                    primal: Vec::new(),
                    duals: Vec::new(),
                }
            }
        }
    }

    // Standard-form solution.
    let mut x_std = vec![T::zero(); cols];
    for (r, &b) in tab.basis.iter().enumerate() {
        if !dropped[r] {
            x_std[b] = tab.rows[r][cols].clone();
        }
    }
    let mut primal = Vec::with_capacity(nv);
    for vm in &var_map {
        primal.push(match vm {
            VarMap::Shifted { col, lower } => lower.clone() + x_std[*col].clone(),
            VarMap::Split { plus, minus } => x_std[*plus].clone() - x_std[*minus].clone(),
        });
    }
    let value: T = lp
        .objective
        .iter()
        .zip(&primal)
        .map(|(c, x)| c.clone() * x.clone())
        .fold(T::zero(), |acc, v| acc + v);

    // Duals: the reduced cost of row i's witness column (initially the
    // i-th unit vector, costless in phase 2) is -y_i in the standard form;
    // undo row negation and the direction flip.
    let mut duals_internal = Vec::with_capacity(m);
    for i in 0..m {
        let y = -tab.obj[witness[i]].clone() * row_sign[i].clone();
        duals_internal.push(if minimize { y } else { -y });
    }

    // Verify the primal point against every constraint and bound.
    for c in &lp.constraints {
        let lhs: T = c
            .coeffs
            .iter()
            .zip(&primal)
            .map(|(a, x)| a.clone() * x.clone())
            .fold(T::zero(), |acc, v| acc + v);
        match c.relation {
            Relation::Le => assert!(lhs <= c.rhs, "optimal point violates a <= constraint"),
            Relation::Eq => assert!(lhs == c.rhs, "optimal point violates an = constraint"),
        }
    }
    for j in 0..nv {
        if let Some(lo) = &bound(j).lower {
            assert!(primal[j] >= *lo, "optimal point violates a lower bound");
        }
        if let Some(hi) = &bound(j).upper {
            assert!(primal[j] <= *hi, "optimal point violates an upper bound");
        }
    }

    // Strong duality: value == sum(y_i rhs_i) + sum over shifted columns of
    // reduced_cost * lower, all in the min orientation and against the
    // original (unshifted) right-hand sides.
    {
        let mut dual_obj = T::zero();
        for (i, rhs) in orig_rhs.iter().enumerate() {
            let y_min = if minimize {
                duals_internal[i].clone()
            } else {
                -duals_internal[i].clone()
            };
            dual_obj = dual_obj + y_min * rhs.clone();
        }
        for vm in &var_map {
            if let VarMap::Shifted { col, lower } = vm {
                if !lower.is_zero() {
                    dual_obj = dual_obj + tab.obj[*col].clone() * lower.clone();
                }
            }
        }
        let value_min = if minimize {
            value.clone()
        } else {
            -value.clone()
        };
        assert!(
            value_min == dual_obj,
            "strong duality violated: {value_min} != {dual_obj}"
        );
    }

    LpSolution {
        status: LpStatus::Optimal,
        value,
        primal,
        duals: duals_internal[..n_orig].to_vec(),
    }
}

fn infeasible<T: Scalar>() -> LpSolution<T> {
    LpSolution {
        status: LpStatus::Infeasible,
        value: T::zero(),
        primal: Vec::new(),
        duals: Vec::new(),
    }
}
