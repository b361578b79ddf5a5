//! Elemental and basic inequalities of the von-Neumann cone.
//!
//! The elemental set has two families over parties `0..n`:
//!
//! * SSA rows `I(i;j|K) >= 0` for `i < j` and `K ⊆ N \ {i, j}` (possibly
//!   empty), i.e. `S(iK) + S(jK) - S(ijK) - S(K)`.
//! * WM rows `S(I) + S(J) - S(I\J) - S(J\I) >= 0` with `I ∩ J = {k}`,
//!   `I ∪ J = N` and party `k + 1` (cyclically, so `0` when `k = n - 1`)
//!   in `I`. `J \ I` may be empty.
//!
//! This gives `C(n,2)·2^(n-2)` SSA rows and `n·2^(n-2)` WM rows.

use std::collections::HashSet;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::space::{LinearForm, SubsetId, SystemContext};
use crate::Rational;

/// Budget on `rows × coordinates` for generated systems.
const MAX_ENTRIES: usize = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowKind {
    /// `I(i;j|cond)`; `cond` is a mask disjoint from `{i, j}` and may be 0.
    Ssa { i: usize, j: usize, cond: u32 },
    /// Weak monotonicity with `first ∩ second = {k}`.
    Wm {
        k: usize,
        first: SubsetId,
        second: SubsetId,
    },
}

#[derive(Clone, PartialEq, Eq)]
pub struct ElementalRow {
    kind: RowKind,
    form: LinearForm,
}

impl ElementalRow {
    /// The SSA row `I(i;j|cond) >= 0`.
    pub fn ssa(ctx: &SystemContext, i: usize, j: usize, cond: u32) -> Result<Self> {
        let n = ctx.n();
        if i >= n || j >= n || i == j || cond & ((1 << i) | (1 << j)) != 0 || cond > ctx.full_mask()
        {
            return Err(Error::InvalidSubset(cond));
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let one = Rational::one();
        let mut form = LinearForm::zero(ctx);
        form.add_term(cond | (1 << i), &one);
        form.add_term(cond | (1 << j), &one);
        form.add_term(cond | (1 << i) | (1 << j), &-&one);
        form.add_term(cond, &-&one);
        Ok(ElementalRow {
            kind: RowKind::Ssa { i, j, cond },
            form,
        })
    }

    /// The WM row `S(I) + S(J) - S(I\J) - S(J\I) >= 0` for `I ∩ J = {k}`.
    pub fn wm(ctx: &SystemContext, k: usize, first: SubsetId, second: SubsetId) -> Result<Self> {
        if k >= ctx.n() || first.mask() & second.mask() != 1 << k {
            return Err(Error::InvalidSubset(first.mask() & second.mask()));
        }
        let one = Rational::one();
        let mut form = LinearForm::zero(ctx);
        form.add_term(first.mask(), &one);
        form.add_term(second.mask(), &one);
        form.add_term(first.mask() & !second.mask(), &-&one);
        form.add_term(second.mask() & !first.mask(), &-&one);
        Ok(ElementalRow {
            kind: RowKind::Wm { k, first, second },
            form,
        })
    }

    pub fn kind(&self) -> &RowKind {
        &self.kind
    }

    pub fn form(&self) -> &LinearForm {
        &self.form
    }

    /// Human-readable form, e.g. `I(A;C|B) >= 0`.
    pub fn describe(&self) -> String {
        let ctx = self.form.context();
        match self.kind {
            RowKind::Ssa { i, j, cond } => {
                let a = &ctx.parties()[i];
                let b = &ctx.parties()[j];
                if cond == 0 {
                    format!("I({a};{b}) >= 0")
                } else {
                    let k = ctx.subset_label(SubsetId::from_mask(cond));
                    format!("I({a};{b}|{k}) >= 0")
                }
            }
            RowKind::Wm { first, second, .. } => {
                let label = |mask: u32| ctx.subset_label(SubsetId::from_mask(mask));
                let mut text = format!("S({}) + S({})", label(first.mask()), label(second.mask()));
                for diff in [first.mask() & !second.mask(), second.mask() & !first.mask()] {
                    if diff != 0 {
                        text.push_str(&format!(" - S({})", label(diff)));
                    }
                }
                text.push_str(" >= 0");
                text
            }
        }
    }
}

/// Rendered description of a row.
pub fn describe_row(row: &ElementalRow) -> String {
    row.describe()
}

impl fmt::Debug for ElementalRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// The elemental inequalities `Gs >= 0` of a context.
#[derive(Clone, Debug)]
pub struct ElementalSystem {
    ctx: SystemContext,
    rows: Vec<ElementalRow>,
}

impl ElementalSystem {
    pub fn context(&self) -> &SystemContext {
        &self.ctx
    }

    pub fn rows(&self) -> &[ElementalRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows of `G` as forms.
    pub fn forms(&self) -> impl Iterator<Item = &LinearForm> {
        self.rows.iter().map(|r| &r.form)
    }

    pub fn position(&self, kind: &RowKind) -> Option<usize> {
        self.rows.iter().position(|r| r.kind == *kind)
    }

    /// The same system with row `index` removed.
    pub fn without(&self, index: usize) -> ElementalSystem {
        let mut rows = self.rows.clone();
        rows.remove(index);
        ElementalSystem {
            ctx: self.ctx.clone(),
            rows,
        }
    }

    /// A system made of arbitrary rows over the same context.
    pub fn from_rows(ctx: &SystemContext, rows: Vec<ElementalRow>) -> Result<Self> {
        for row in &rows {
            ctx.check_same(row.form.context())?;
        }
        Ok(ElementalSystem {
            ctx: ctx.clone(),
            rows,
        })
    }
}

/// Expected elemental row count `2^(n-2)·n(n+1)/2`.
pub fn elemental_count(n: usize) -> usize {
    (1usize << (n - 2)) * n * (n + 1) / 2
}

fn check_budget(rows: usize, ctx: &SystemContext) -> Result<()> {
    if rows.saturating_mul(ctx.k()) > MAX_ENTRIES {
        return Err(Error::TooLarge {
            rows,
            cols: ctx.k(),
        });
    }
    Ok(())
}

/// Generates the elemental system: SSA rows ordered by `(i, j, K)`, then WM
/// rows ordered by `(k, I)`.
pub fn generate_elemental(ctx: &SystemContext) -> Result<ElementalSystem> {
    let n = ctx.n();
    check_budget(elemental_count(n), ctx)?;
    let full = ctx.full_mask();
    let mut rows = Vec::with_capacity(elemental_count(n));

    for i in 0..n {
        for j in i + 1..n {
            let rest = full & !((1 << i) | (1 << j));
            for cond in submasks_ascending(rest) {
                rows.push(ElementalRow::ssa(ctx, i, j, cond)?);
            }
        }
    }

    for k in 0..n {
        let next = (k + 1) % n;
        let rest = full & !(1 << k);
        // ascending `part` is ascending `I = part ∪ {k}`
        for part in submasks_ascending(rest) {
            if part & (1 << next) == 0 {
                continue;
            }
            let first = SubsetId::new(part | (1 << k), ctx)?;
            let second = SubsetId::new((rest & !part) | (1 << k), ctx)?;
            rows.push(ElementalRow::wm(ctx, k, first, second)?);
        }
    }

    Ok(ElementalSystem {
        ctx: ctx.clone(),
        rows,
    })
}

/// All submasks of `mask` (including 0) in increasing order.
fn submasks_ascending(mask: u32) -> Vec<u32> {
    let mut subs = Vec::with_capacity(1 << mask.count_ones());
    let mut sub = 0u32;
    loop {
        subs.push(sub);
        if sub == mask {
            break;
        }
        // next submask in increasing order
        sub = ((sub | !mask).wrapping_add(1)) & mask;
    }
    subs
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasicKind {
    Ssa,
    Wm,
}

/// One instance of SSA or WM for a pair of nonempty subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicInequality {
    pub kind: BasicKind,
    pub first: SubsetId,
    pub second: SubsetId,
    pub form: LinearForm,
}

/// All distinct nonzero SSA and WM instances over nonempty subset pairs.
///
/// Instances that vanish identically (e.g. SSA with `I ⊆ J`) are dropped;
/// instances whose form repeats an earlier one are deduplicated, SSA first.
pub fn generate_basic(ctx: &SystemContext) -> Result<Vec<BasicInequality>> {
    let subsets = ctx.k();
    check_budget(subsets * (subsets + 1), ctx)?;
    let one = Rational::one();
    let mut seen: HashSet<Vec<Rational>> = HashSet::new();
    let mut out = Vec::new();
    for kind in [BasicKind::Ssa, BasicKind::Wm] {
        for a in ctx.subsets() {
            for b in ctx.subsets().filter(|b| *b >= a) {
                let (i, j) = (a.mask(), b.mask());
                let mut form = LinearForm::zero(ctx);
                form.add_term(i, &one);
                form.add_term(j, &one);
                match kind {
                    BasicKind::Ssa => {
                        form.add_term(i | j, &-&one);
                        form.add_term(i & j, &-&one);
                    }
                    BasicKind::Wm => {
                        form.add_term(i & !j, &-&one);
                        form.add_term(j & !i, &-&one);
                    }
                }
                if form.is_zero() || !seen.insert(form.coeffs().to_vec()) {
                    continue;
                }
                out.push(BasicInequality {
                    kind,
                    first: a,
                    second: b,
                    form,
                });
            }
        }
    }
    Ok(out)
}
