//! Dense two-phase primal simplex over `BigRational`.
//!
//! The problem is brought into standard form `A'x' = b', x' >= 0, b' >= 0`:
//! free variables split into a positive and a negative part, inequality rows
//! receive a slack column, and every row whose slack cannot serve as the
//! initial basic column receives an artificial one. Column order is
//! structural, slack, artificial; Bland's rule uses this order.
//!
//! Each row `i` has an initial basic column whose tableau column is `e_i` at
//! the start, so those columns always hold `B^-1`. Duals are read off their
//! reduced costs.

use num_traits::{One, Signed, Zero};

use super::{check_certificate, Domain, LpOutcome, LpProblem, PivotRule, Relation, SolverOptions};
use crate::error::{Error, Result};
use crate::Rational;

/// Rows × columns budget for a single tableau.
const MAX_TABLEAU_ENTRIES: usize = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ColumnKind {
    /// Positive or negative part of original variable `var`.
    Structural {
        var: usize,
        negated: bool,
    },
    Slack,
    Artificial,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    kinds: Vec<ColumnKind>,
    /// Column that was basic in row `i` initially.
    initial: Vec<usize>,
    /// Row sign applied while normalizing `rhs >= 0`.
    sign: Vec<Rational>,
    pivots: u64,
    max_pivots: u64,
    rule: PivotRule,
}

/// Reduced-cost row with its own cost vector.
struct CostRow {
    cost: Vec<Rational>,
    reduced: Vec<Rational>,
    /// `-z` for the current basis.
    neg_value: Rational,
}

enum PhaseEnd {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn build(problem: &LpProblem, rule: PivotRule, max_pivots: u64) -> Result<Self> {
        let mut kinds = Vec::new();
        let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(problem.num_vars());
        for (var, domain) in problem.domains.iter().enumerate() {
            let plus = kinds.len();
            kinds.push(ColumnKind::Structural {
                var,
                negated: false,
            });
            let minus = if *domain == Domain::Free {
                kinds.push(ColumnKind::Structural { var, negated: true });
                Some(kinds.len() - 1)
            } else {
                None
            };
            var_cols.push((plus, minus));
        }

        let m = problem.rows.len();
        let mut slack_of = vec![None; m];
        for (i, row) in problem.rows.iter().enumerate() {
            if row.relation != Relation::Eq {
                slack_of[i] = Some(kinds.len());
                kinds.push(ColumnKind::Slack);
            }
        }

        let mut sign = Vec::with_capacity(m);
        let mut initial = vec![usize::MAX; m];
        for (i, row) in problem.rows.iter().enumerate() {
            let slack_coeff = match row.relation {
                Relation::Ge => -1,
                Relation::Le => 1,
                Relation::Eq => 0,
            };
            let flip = row.rhs.is_negative() || (row.rhs.is_zero() && slack_coeff < 0);
            sign.push(if flip {
                -Rational::one()
            } else {
                Rational::one()
            });
            let effective = if flip { -slack_coeff } else { slack_coeff };
            if effective > 0 {
                initial[i] = slack_of[i].expect("inequality row has a slack");
            }
        }
        for slot in initial.iter_mut() {
            if *slot == usize::MAX {
                *slot = kinds.len();
                kinds.push(ColumnKind::Artificial);
            }
        }

        let ncols = kinds.len();
        if m.saturating_mul(ncols + 1) > MAX_TABLEAU_ENTRIES {
            return Err(Error::TooLarge {
                rows: m,
                cols: ncols,
            });
        }

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (i, row) in problem.rows.iter().enumerate() {
            let s = &sign[i];
            let mut t = vec![Rational::zero(); ncols];
            for (var, a) in row.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let v = a * s;
                let (plus, minus) = var_cols[var];
                if let Some(mc) = minus {
                    t[mc] = -v.clone();
                }
                t[plus] = v;
            }
            if let Some(sc) = slack_of[i] {
                let base = match row.relation {
                    Relation::Ge => -Rational::one(),
                    _ => Rational::one(),
                };
                t[sc] = base * s;
            }
            if kinds[initial[i]] == ColumnKind::Artificial {
                t[initial[i]] = Rational::one();
            }
            rows.push(t);
            rhs.push(&row.rhs * s);
        }

        Ok(Tableau {
            rows,
            rhs,
            basis: initial.clone(),
            kinds,
            initial,
            sign,
            pivots: 0,
            max_pivots,
            rule,
        })
    }

    fn ncols(&self) -> usize {
        self.kinds.len()
    }

    fn cost_row(&self, cost: Vec<Rational>) -> CostRow {
        let mut reduced = cost.clone();
        let mut neg_value = Rational::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (d, t) in reduced.iter_mut().zip(&self.rows[r]) {
                if !t.is_zero() {
                    *d -= cb * t;
                }
            }
            neg_value -= cb * &self.rhs[r];
        }
        CostRow {
            cost,
            reduced,
            neg_value,
        }
    }

    fn pivot(&mut self, row: usize, col: usize, costs: &mut [&mut CostRow]) -> Result<()> {
        if self.pivots >= self.max_pivots {
            return Err(Error::PivotLimit(self.max_pivots));
        }
        self.pivots += 1;

        let mut prow = std::mem::take(&mut self.rows[row]);
        let p = prow[col].clone();
        if !p.is_one() {
            let inv = p.recip();
            for v in prow.iter_mut().filter(|v| !v.is_zero()) {
                *v *= &inv;
            }
            self.rhs[row] *= &inv;
        }
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        let prhs = self.rhs[row].clone();

        for (r, other) in self.rows.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for &j in &nz {
                other[j] -= &f * &prow[j];
            }
            if !prhs.is_zero() {
                self.rhs[r] -= &f * &prhs;
            }
        }
        for c in costs.iter_mut() {
            let f = c.reduced[col].clone();
            if f.is_zero() {
                continue;
            }
            for &j in &nz {
                c.reduced[j] -= &f * &prow[j];
            }
            c.neg_value -= &f * &prhs;
        }
        self.rows[row] = prow;
        self.basis[row] = col;
        Ok(())
    }

    fn choose_entering(&self, cost: &CostRow, allowed: &dyn Fn(usize) -> bool) -> Option<usize> {
        let candidates = (0..self.ncols()).filter(|&j| allowed(j) && cost.reduced[j].is_negative());
        match self.rule {
            PivotRule::Bland => candidates.min(),
            PivotRule::Lexicographic => {
                let mut best: Option<usize> = None;
                for j in candidates {
                    match best {
                        Some(b) if cost.reduced[j] >= cost.reduced[b] => {}
                        _ => best = Some(j),
                    }
                }
                best
            }
        }
    }

    fn choose_leaving(&self, col: usize) -> Option<usize> {
        let mut best: Option<usize> = None;
        for r in 0..self.rows.len() {
            if !self.rows[r][col].is_positive() {
                continue;
            }
            best = match best {
                None => Some(r),
                Some(b) => {
                    if self.leaving_precedes(r, b, col) {
                        Some(r)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best
    }

    /// Whether row `r` beats row `b` in the ratio test on column `col`.
    fn leaving_precedes(&self, r: usize, b: usize, col: usize) -> bool {
        let ratio_r = &self.rhs[r] / &self.rows[r][col];
        let ratio_b = &self.rhs[b] / &self.rows[b][col];
        if ratio_r != ratio_b {
            return ratio_r < ratio_b;
        }
        match self.rule {
            PivotRule::Bland => self.basis[r] < self.basis[b],
            PivotRule::Lexicographic => {
                for &c in &self.initial {
                    let lr = &self.rows[r][c] / &self.rows[r][col];
                    let lb = &self.rows[b][c] / &self.rows[b][col];
                    if lr != lb {
                        return lr < lb;
                    }
                }
                self.basis[r] < self.basis[b]
            }
        }
    }

    /// Runs simplex iterations on `main`, keeping `other` rows updated.
    fn run(
        &mut self,
        main: &mut CostRow,
        others: &mut [&mut CostRow],
        allowed: &dyn Fn(usize) -> bool,
    ) -> Result<PhaseEnd> {
        loop {
            let Some(col) = self.choose_entering(main, allowed) else {
                return Ok(PhaseEnd::Optimal);
            };
            let Some(row) = self.choose_leaving(col) else {
                return Ok(PhaseEnd::Unbounded(col));
            };
            let mut all: Vec<&mut CostRow> = Vec::with_capacity(others.len() + 1);
            all.push(main);
            for o in others.iter_mut() {
                all.push(o);
            }
            self.pivot(row, col, &mut all)?;
        }
    }

    /// Pivots basic artificials out of the basis where possible. Rows whose
    /// artificial cannot leave are redundant and keep it at level zero.
    fn drive_out_artificials(&mut self, costs: &mut [&mut CostRow]) -> Result<()> {
        for r in 0..self.rows.len() {
            if self.kinds[self.basis[r]] != ColumnKind::Artificial {
                continue;
            }
            let col = (0..self.ncols())
                .find(|&j| self.kinds[j] != ColumnKind::Artificial && !self.rows[r][j].is_zero());
            if let Some(col) = col {
                self.pivot(r, col, costs)?;
            }
        }
        Ok(())
    }

    /// Current basic solution in standard-form coordinates.
    fn basic_solution(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.ncols()];
        for (r, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs[r].clone();
        }
        x
    }

    fn to_original(&self, xs: &[Rational], nvars: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); nvars];
        for (j, kind) in self.kinds.iter().enumerate() {
            if let ColumnKind::Structural { var, negated } = kind {
                if xs[j].is_zero() {
                    continue;
                }
                if *negated {
                    x[*var] -= &xs[j];
                } else {
                    x[*var] += &xs[j];
                }
            }
        }
        x
    }

    /// Row multipliers `y = c_B B^-1`, mapped back to the original rows.
    fn multipliers(&self, cost: &CostRow) -> Vec<Rational> {
        self.initial
            .iter()
            .zip(&self.sign)
            .map(|(&c, s)| (&cost.cost[c] - &cost.reduced[c]) * s)
            .collect()
    }
}

/// Solves `problem` with the given options and verifies the certificate
/// before returning it.
pub fn solve_with(problem: &LpProblem, options: &SolverOptions) -> Result<LpOutcome> {
    problem.validate()?;
    let nvars = problem.num_vars();
    let mut tab = Tableau::build(problem, options.pivot_rule, options.max_pivots)?;
    let ncols = tab.ncols();

    let mut phase2_cost = vec![Rational::zero(); ncols];
    for (j, kind) in tab.kinds.iter().enumerate() {
        if let ColumnKind::Structural { var, negated } = kind {
            let c = &problem.objective[*var];
            phase2_cost[j] = if *negated { -c.clone() } else { c.clone() };
        }
    }
    let mut phase2 = tab.cost_row(phase2_cost);

    let has_artificial = tab.kinds.contains(&ColumnKind::Artificial);
    if has_artificial {
        let phase1_cost = tab
            .kinds
            .iter()
            .map(|k| {
                if *k == ColumnKind::Artificial {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        let mut phase1 = tab.cost_row(phase1_cost);
        // Phase 1 is bounded below by zero, so it always ends optimal.
        tab.run(&mut phase1, &mut [&mut phase2], &|_| true)?;
        if (-&phase1.neg_value).is_positive() {
            let outcome = LpOutcome::Infeasible {
                farkas: tab.multipliers(&phase1),
            };
            return certified(problem, outcome);
        }
        tab.drive_out_artificials(&mut [&mut phase2])?;
    }

    let kinds = tab.kinds.clone();
    let allowed = move |j: usize| kinds[j] != ColumnKind::Artificial;
    match tab.run(&mut phase2, &mut [], &allowed)? {
        PhaseEnd::Optimal => {
            let xs = tab.basic_solution();
            let outcome = LpOutcome::Optimal {
                value: -phase2.neg_value.clone(),
                point: tab.to_original(&xs, nvars),
                duals: tab.multipliers(&phase2),
            };
            certified(problem, outcome)
        }
        PhaseEnd::Unbounded(col) => {
            let xs = tab.basic_solution();
            let mut dir = vec![Rational::zero(); ncols];
            dir[col] = Rational::one();
            for (r, &b) in tab.basis.iter().enumerate() {
                let t = &tab.rows[r][col];
                if !t.is_zero() {
                    dir[b] = -t.clone();
                }
            }
            let outcome = LpOutcome::Unbounded {
                point: tab.to_original(&xs, nvars),
                ray: tab.to_original(&dir, nvars),
            };
            certified(problem, outcome)
        }
    }
}

fn certified(problem: &LpProblem, outcome: LpOutcome) -> Result<LpOutcome> {
    if check_certificate(problem, &outcome) {
        Ok(outcome)
    } else {
        Err(Error::Certificate(format!(
            "{:?} outcome failed verification",
            outcome.status()
        )))
    }
}
