//! The entropic space of an `n`-party system.
//!
//! Every nonempty subset of the parties carries one marginal entropy, giving
//! `k = 2^n - 1` coordinates. Subsets are bit masks (bit `i` set iff party `i`
//! belongs to the subset) and the coordinate of a subset is `mask - 1`. The
//! empty subset is never a coordinate: `S(∅) = 0` is eliminated whenever a
//! formula would produce it.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// Default upper bound on the number of parties.
pub const DEFAULT_MAX_PARTIES: usize = 8;

/// Hard ceiling: masks are stored in a `u32`.
pub const ABSOLUTE_MAX_PARTIES: usize = 16;

/// Party roster of an `n`-party system.
///
/// Parties are kept in lexicographic order; party `i` owns bit `i` of every
/// [`SubsetId`]. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SystemContext {
    parties: Arc<[String]>,
}

impl SystemContext {
    /// Builds a context from party names using [`DEFAULT_MAX_PARTIES`].
    pub fn new<I, S>(parties: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::with_max_parties(parties, DEFAULT_MAX_PARTIES)
    }

    /// Builds a context, rejecting rosters outside `2..=max_parties`.
    ///
    /// Names are sorted; duplicates and names that are not identifiers are
    /// rejected.
    pub fn with_max_parties<I, S>(parties: I, max_parties: usize) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = parties.into_iter().map(Into::into).collect();
        for name in &names {
            if !is_party_name(name) {
                return Err(Error::InvalidParty(name.clone()));
            }
        }
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateParty(w[0].clone()));
        }
        let max = max_parties.min(ABSOLUTE_MAX_PARTIES);
        if names.len() < 2 || names.len() > max {
            return Err(Error::PartyCount {
                n: names.len(),
                max,
            });
        }
        Ok(SystemContext {
            parties: names.into(),
        })
    }

    /// Context with parties named `A`, `B`, `C`, ...
    pub fn lettered(n: usize) -> Result<Self> {
        Self::with_max_parties(
            (0..n).map(|i| ((b'A' + i as u8) as char).to_string()),
            ABSOLUTE_MAX_PARTIES.min(26),
        )
    }

    pub fn parties(&self) -> &[String] {
        &self.parties
    }

    /// Number of parties `n`.
    pub fn n(&self) -> usize {
        self.parties.len()
    }

    /// Number of entropy coordinates `k = 2^n - 1`.
    pub fn k(&self) -> usize {
        (1usize << self.n()) - 1
    }

    /// Mask of the full system `N_n`.
    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.n()) - 1) as u32
    }

    pub fn full(&self) -> SubsetId {
        SubsetId(self.full_mask())
    }

    pub fn party_index(&self, name: &str) -> Option<usize> {
        self.parties.binary_search_by(|p| p.as_str().cmp(name)).ok()
    }

    pub fn singleton(&self, party: usize) -> SubsetId {
        assert!(party < self.n(), "party index out of range");
        SubsetId(1 << party)
    }

    /// Subset from party names; duplicates collapse.
    pub fn subset<S: AsRef<str>>(&self, names: &[S]) -> Result<SubsetId> {
        let mut mask = 0u32;
        for name in names {
            let idx = self
                .party_index(name.as_ref())
                .ok_or_else(|| Error::UnknownParty(name.as_ref().to_string()))?;
            mask |= 1 << idx;
        }
        SubsetId::new(mask, self)
    }

    /// Iterates over all nonempty subsets in coordinate order.
    pub fn subsets(&self) -> impl Iterator<Item = SubsetId> {
        (1..=self.full_mask()).map(SubsetId)
    }

    /// Comma-separated party list of a subset, e.g. `A,B,C`.
    pub fn subset_label(&self, subset: SubsetId) -> String {
        self.members(subset)
            .map(|i| self.parties[i].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Party indices of a subset in increasing order.
    pub fn members(&self, subset: SubsetId) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |i| subset.0 & (1 << i) != 0)
    }

    pub(crate) fn check_same(&self, other: &SystemContext) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left: self.parties.join(","),
                right: other.parties.join(","),
            })
        }
    }
}

impl fmt::Debug for SystemContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SystemContext[{}]", self.parties.join(","))
    }
}

/// `[A-Za-z][A-Za-z0-9_]*`
pub fn is_party_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A nonempty subset of parties, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SubsetId(u32);

impl SubsetId {
    pub fn new(mask: u32, ctx: &SystemContext) -> Result<Self> {
        if mask == 0 || mask > ctx.full_mask() {
            return Err(Error::InvalidSubset(mask));
        }
        Ok(SubsetId(mask))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    /// Canonical coordinate index, `mask - 1`.
    pub fn coordinate(self) -> usize {
        self.0 as usize - 1
    }

    pub(crate) fn from_mask(mask: u32) -> Self {
        debug_assert!(mask != 0);
        SubsetId(mask)
    }

    pub fn from_coordinate(index: usize) -> Self {
        SubsetId(index as u32 + 1)
    }

    pub fn union(self, other: SubsetId) -> SubsetId {
        SubsetId(self.0 | other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, party: usize) -> bool {
        self.0 & (1 << party) != 0
    }
}

/// Union of two subsets.
pub fn subset_union(a: SubsetId, b: SubsetId) -> SubsetId {
    a.union(b)
}

/// Coordinate index of a subset.
pub fn coordinate_of(subset: SubsetId) -> usize {
    subset.coordinate()
}

/// An exact linear functional (or point) on the entropic space.
///
/// The same type holds inequality coefficient vectors `b`, rows of the
/// elemental matrix, constraint rows and entropic vectors `s`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearForm {
    ctx: SystemContext,
    coeffs: Vec<Rational>,
}

impl LinearForm {
    pub fn zero(ctx: &SystemContext) -> Self {
        LinearForm {
            ctx: ctx.clone(),
            coeffs: vec![Rational::zero(); ctx.k()],
        }
    }

    pub fn from_coeffs(ctx: &SystemContext, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != ctx.k() {
            return Err(Error::DimensionMismatch {
                expected: ctx.k(),
                found: coeffs.len(),
            });
        }
        Ok(LinearForm {
            ctx: ctx.clone(),
            coeffs,
        })
    }

    pub fn from_integers(ctx: &SystemContext, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(
            ctx,
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    /// The form `S(subset)`.
    pub fn entropy(ctx: &SystemContext, subset: SubsetId) -> Self {
        let mut f = Self::zero(ctx);
        f.coeffs[subset.coordinate()] = Rational::one();
        f
    }

    /// Adds `coeff · S(mask)`; a zero mask is `S(∅) = 0` and is dropped.
    pub fn add_term(&mut self, mask: u32, coeff: &Rational) {
        if mask == 0 {
            return;
        }
        let slot = &mut self.coeffs[mask as usize - 1];
        *slot += coeff;
    }

    pub fn context(&self) -> &SystemContext {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, subset: SubsetId) -> &Rational {
        &self.coeffs[subset.coordinate()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Number of nonzero coefficients.
    pub fn support(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Exact dot product `self⊤point`.
    pub fn eval(&self, point: &LinearForm) -> Result<Rational> {
        self.ctx.check_same(&point.ctx)?;
        Ok(dot(&self.coeffs, &point.coeffs))
    }

    pub fn scale(&self, factor: &Rational) -> LinearForm {
        LinearForm {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn try_add(&self, other: &LinearForm) -> Result<LinearForm> {
        self.ctx.check_same(&other.ctx)?;
        Ok(LinearForm {
            ctx: self.ctx.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &LinearForm) -> Result<LinearForm> {
        self.try_add(&-other)
    }

    /// Re-expresses the form over a context whose parties are a superset.
    pub fn embed(&self, target: &SystemContext) -> Result<LinearForm> {
        let mut map = Vec::with_capacity(self.ctx.n());
        for name in self.ctx.parties() {
            let idx = target
                .party_index(name)
                .ok_or_else(|| Error::UnknownParty(name.clone()))?;
            map.push(idx);
        }
        let mut out = LinearForm::zero(target);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mask = (i + 1) as u32;
            let mut target_mask = 0u32;
            for (bit, &t) in map.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    target_mask |= 1 << t;
                }
            }
            out.add_term(target_mask, c);
        }
        Ok(out)
    }

    /// Relabels parties: party `i` becomes party `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> LinearForm {
        assert_eq!(perm.len(), self.ctx.n(), "permutation length");
        let mut out = LinearForm::zero(&self.ctx);
        for (i, c) in self.coeffs.iter().enumerate() {
            let mask = (i + 1) as u32;
            let mut image = 0u32;
            for (bit, &t) in perm.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    image |= 1 << t;
                }
            }
            out.add_term(image, c);
        }
        out
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Exact dot product of two forms.
pub fn eval(form: &LinearForm, point: &LinearForm) -> Result<Rational> {
    form.eval(point)
}

impl Neg for &LinearForm {
    type Output = LinearForm;

    fn neg(self) -> LinearForm {
        LinearForm {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for LinearForm {
    type Output = LinearForm;

    fn neg(self) -> LinearForm {
        -&self
    }
}

// The operator impls panic on a context mismatch; use `try_add`/`try_sub` for
// forms of unknown provenance.
impl Add for &LinearForm {
    type Output = LinearForm;

    fn add(self, rhs: &LinearForm) -> LinearForm {
        self.try_add(rhs)
            .expect("linear forms over different contexts")
    }
}

impl Sub for &LinearForm {
    type Output = LinearForm;

    fn sub(self, rhs: &LinearForm) -> LinearForm {
        self.try_sub(rhs)
            .expect("linear forms over different contexts")
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.coeffs.iter().map(|c| c.to_string()))
            .finish()
    }
}
