//! Local rules and the no-boundary CA global map.
//!
//! A local rule of diameter `d` maps a window of `d` cells to one cell. The
//! CA of length `n >= d` slides the rule over every window of consecutive
//! cells, producing `n - d + 1` output cells.
//!
//! Three rule families are provided:
//!
//! - [`LinearRule`]: `x_1 + a_2 x_2 + ... + a_{d-1} x_{d-1} + x_d` with
//!   `d = b(k-1) + 1`. Only the interior coefficients are stored.
//! - [`GeneralBipermutiveRule`]: `x_1 + g(x_2, ..., x_{d-1}) + x_d` with `g`
//!   given as a value table.
//! - [`TableRule`]: an arbitrary table, used for negative tests of the
//!   bipermutivity properties.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::budget::{saturating_pow, Budget};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldParams, FieldSpec, Symbol};

/// A fixed-length configuration over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellVector {
    field: FieldSpec,
    cells: Vec<Symbol>,
}

impl CellVector {
    pub fn new(field: &FieldSpec, cells: Vec<Symbol>) -> Result<Self> {
        check_symbols(field, &cells)?;
        Ok(CellVector {
            field: field.clone(),
            cells,
        })
    }

    pub fn zeros(field: &FieldSpec, len: usize) -> Self {
        CellVector {
            field: field.clone(),
            cells: vec![0; len],
        }
    }

    pub fn from_elements(field: &FieldSpec, elems: &[FieldElement]) -> Result<Self> {
        if elems.iter().any(|&e| !field.contains(e)) {
            return Err(Error::FieldMismatch);
        }
        Ok(CellVector {
            field: field.clone(),
            cells: elems.iter().map(|e| e.value()).collect(),
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<Symbol> {
        self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<FieldElement> {
        self.cells
            .get(i)
            .map(|&v| self.field.element(u64::from(v)).expect("cells are valid"))
    }

    /// Concatenation `self || other`.
    pub fn concat(&self, other: &CellVector) -> Result<CellVector> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut cells = self.cells.clone();
        cells.extend_from_slice(&other.cells);
        Ok(CellVector {
            field: self.field.clone(),
            cells,
        })
    }

    /// Componentwise sum.
    pub fn add(&self, other: &CellVector) -> Result<CellVector> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                what: "cell vector",
                expected: self.len(),
                found: other.len(),
            });
        }
        let cells = self
            .cells
            .iter()
            .zip(&other.cells)
            .map(|(&a, &b)| self.field.add_sym(a, b))
            .collect();
        Ok(CellVector {
            field: self.field.clone(),
            cells,
        })
    }
}

pub(crate) fn check_symbols(field: &FieldSpec, cells: &[Symbol]) -> Result<()> {
    match cells.iter().find(|&&c| c >= field.q()) {
        Some(&c) => Err(Error::NotAnElement {
            value: u64::from(c),
            q: field.q(),
        }),
        None => Ok(()),
    }
}

/// A local rule `f: F_q^d -> F_q`.
pub trait LocalRule {
    fn field(&self) -> &FieldSpec;

    fn diameter(&self) -> usize;

    /// Evaluates the rule on `window`, which must hold exactly `diameter()`
    /// valid symbols.
    fn eval(&self, window: &[Symbol]) -> Symbol;

    fn apply_rule(&self, window: &CellVector) -> Result<FieldElement> {
        if window.field() != self.field() {
            return Err(Error::FieldMismatch);
        }
        if window.len() != self.diameter() {
            return Err(Error::LengthMismatch {
                what: "rule window",
                expected: self.diameter(),
                found: window.len(),
            });
        }
        let v = self.eval(window.cells());
        Ok(self
            .field()
            .element(u64::from(v))
            .expect("rule output is valid"))
    }

    /// Global map `F: F_q^n -> F_q^{n-d+1}`.
    fn apply_ca(&self, input: &CellVector) -> Result<CellVector> {
        if input.field() != self.field() {
            return Err(Error::FieldMismatch);
        }
        let d = self.diameter();
        if input.len() < d {
            return Err(Error::LengthMismatch {
                what: "CA input (at least the diameter)",
                expected: d,
                found: input.len(),
            });
        }
        let mut out = vec![0; input.len() - d + 1];
        self.apply_ca_into(input.cells(), &mut out);
        Ok(CellVector {
            field: self.field().clone(),
            cells: out,
        })
    }

    /// Unchecked global map: `out[i] = f(input[i..i + d])`.
    #[inline]
    fn apply_ca_into(&self, input: &[Symbol], out: &mut [Symbol]) {
        let d = self.diameter();
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.eval(&input[i..i + d]);
        }
    }
}

impl<R: LocalRule + ?Sized> LocalRule for &R {
    fn field(&self) -> &FieldSpec {
        (**self).field()
    }

    fn diameter(&self) -> usize {
        (**self).diameter()
    }

    fn eval(&self, window: &[Symbol]) -> Symbol {
        (**self).eval(window)
    }
}

/// Linear bipermutive rule `x_1 + a_2 x_2 + ... + a_{d-1} x_{d-1} + x_d`,
/// `d = b(k-1) + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRule {
    field: FieldSpec,
    b: usize,
    k: usize,
    /// `(a_1, ..., a_d)` with `a_1 = a_d = 1`.
    full: Vec<Symbol>,
}

impl LinearRule {
    /// `coeffs` are the interior coefficients `(a_2, ..., a_{d-1})`.
    pub fn new(field: &FieldSpec, b: usize, k: usize, coeffs: Vec<Symbol>) -> Result<Self> {
        if b == 0 {
            return Err(Error::InvalidParameter(
                "block size b must be at least 1".into(),
            ));
        }
        if k < 2 {
            return Err(Error::InvalidParameter(
                "dimension k must be at least 2".into(),
            ));
        }
        let interior = b * (k - 1) - 1;
        if coeffs.len() != interior {
            return Err(Error::LengthMismatch {
                what: "interior coefficients",
                expected: interior,
                found: coeffs.len(),
            });
        }
        check_symbols(field, &coeffs)?;
        let mut full = Vec::with_capacity(interior + 2);
        full.push(1);
        full.extend(coeffs);
        full.push(1);
        Ok(LinearRule {
            field: field.clone(),
            b,
            k,
            full,
        })
    }

    /// The rule at position `index` of [`enumerate_linear_rules`].
    pub fn from_index(field: &FieldSpec, b: usize, k: usize, index: u128) -> Result<Self> {
        let count = linear_rule_count(field, b, k)?;
        if index >= count {
            return Err(Error::IndexOutOfRange { index, count });
        }
        let len = b * (k - 1) - 1;
        let q = u128::from(field.q());
        let mut coeffs = vec![0; len];
        let mut rest = index;
        for c in coeffs.iter_mut().rev() {
            *c = (rest % q) as Symbol;
            rest /= q;
        }
        LinearRule::new(field, b, k, coeffs)
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Interior coefficients `(a_2, ..., a_{d-1})`.
    pub fn coeffs(&self) -> &[Symbol] {
        &self.full[1..self.full.len() - 1]
    }

    /// All coefficients `(a_1, ..., a_d)`.
    pub fn full_coeffs(&self) -> &[Symbol] {
        &self.full
    }

    /// Coefficient `a_i`, 1-based.
    pub fn coeff(&self, i: usize) -> Option<Symbol> {
        i.checked_sub(1).and_then(|j| self.full.get(j).copied())
    }

    /// Human-readable form such as `x1 + x3 + 2*x4 + x5`.
    pub fn formula(&self) -> String {
        self.full
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(i, &a)| {
                if a == 1 {
                    format!("x{}", i + 1)
                } else {
                    format!("{a}*x{}", i + 1)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl LocalRule for LinearRule {
    fn field(&self) -> &FieldSpec {
        &self.field
    }

    fn diameter(&self) -> usize {
        self.full.len()
    }

    #[inline]
    fn eval(&self, window: &[Symbol]) -> Symbol {
        self.field.dot(&self.full, window)
    }
}

/// Bipermutive rule `x_1 + g(x_2, ..., x_{d-1}) + x_d` with `g` tabulated.
///
/// `g_table[r]` is `g` at the interior window whose base-`q` rank is `r`,
/// `x_2` being the least significant digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralBipermutiveRule {
    field: FieldSpec,
    d: usize,
    g_table: Vec<Symbol>,
}

impl GeneralBipermutiveRule {
    pub fn new(field: &FieldSpec, d: usize, g_table: Vec<Symbol>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter(
                "diameter must be at least 2".into(),
            ));
        }
        let expected = saturating_pow(u64::from(field.q()), (d - 2) as u64);
        if expected != g_table.len() as u128 {
            return Err(Error::LengthMismatch {
                what: "g table",
                expected: usize::try_from(expected).unwrap_or(usize::MAX),
                found: g_table.len(),
            });
        }
        check_symbols(field, &g_table)?;
        Ok(GeneralBipermutiveRule {
            field: field.clone(),
            d,
            g_table,
        })
    }

    pub fn g_table(&self) -> &[Symbol] {
        &self.g_table
    }
}

impl LocalRule for GeneralBipermutiveRule {
    fn field(&self) -> &FieldSpec {
        &self.field
    }

    fn diameter(&self) -> usize {
        self.d
    }

    fn eval(&self, window: &[Symbol]) -> Symbol {
        let q = self.field.q() as usize;
        let idx = window[1..self.d - 1]
            .iter()
            .rev()
            .fold(0usize, |acc, &x| acc * q + x as usize);
        let f = &self.field;
        f.add_sym(f.add_sym(window[0], self.g_table[idx]), window[self.d - 1])
    }
}

/// Arbitrary local rule given by its full value table, indexed by the base-`q`
/// rank of the window with `x_1` least significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRule {
    field: FieldSpec,
    d: usize,
    table: Vec<Symbol>,
}

impl TableRule {
    pub fn new(field: &FieldSpec, d: usize, table: Vec<Symbol>) -> Result<Self> {
        let expected = saturating_pow(u64::from(field.q()), d as u64);
        if d == 0 || expected != table.len() as u128 {
            return Err(Error::LengthMismatch {
                what: "rule table",
                expected: usize::try_from(expected).unwrap_or(usize::MAX),
                found: table.len(),
            });
        }
        check_symbols(field, &table)?;
        Ok(TableRule {
            field: field.clone(),
            d,
            table,
        })
    }

    /// Tabulates `f` over all windows.
    pub fn from_fn(field: &FieldSpec, d: usize, f: impl Fn(&[Symbol]) -> Symbol) -> Result<Self> {
        let q = field.q();
        let size = usize::try_from(saturating_pow(u64::from(q), d as u64))
            .map_err(|_| Error::InvalidParameter("rule table too large".into()))?;
        let mut window = vec![0; d];
        let table = (0..size)
            .map(|mut r| {
                for w in window.iter_mut() {
                    *w = (r % q as usize) as Symbol;
                    r /= q as usize;
                }
                f(&window)
            })
            .collect();
        TableRule::new(field, d, table)
    }
}

impl LocalRule for TableRule {
    fn field(&self) -> &FieldSpec {
        &self.field
    }

    fn diameter(&self) -> usize {
        self.d
    }

    fn eval(&self, window: &[Symbol]) -> Symbol {
        let q = self.field.q() as usize;
        let idx = window
            .iter()
            .rev()
            .fold(0usize, |acc, &x| acc * q + x as usize);
        self.table[idx]
    }
}

/// A linear or general bipermutive rule, as read from a rule file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Linear(LinearRule),
    General(GeneralBipermutiveRule),
}

impl LocalRule for Rule {
    fn field(&self) -> &FieldSpec {
        match self {
            Rule::Linear(r) => r.field(),
            Rule::General(r) => r.field(),
        }
    }

    fn diameter(&self) -> usize {
        match self {
            Rule::Linear(r) => r.diameter(),
            Rule::General(r) => r.diameter(),
        }
    }

    fn eval(&self, window: &[Symbol]) -> Symbol {
        match self {
            Rule::Linear(r) => r.eval(window),
            Rule::General(r) => r.eval(window),
        }
    }
}

/// Which `b`-cell block of the CA input varies in
/// [`restriction_is_permutation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FreeBlock {
    Left,
    Right,
}

/// Whether the CA of length `bk` restricted to its leftmost (or rightmost)
/// `b` cells, the other `b(k-1)` cells held at `fixed`, is a bijection of
/// `F_q^b`. Checked by exhausting all `q^b` free blocks.
pub fn restriction_is_permutation<R: LocalRule + ?Sized>(
    rule: &R,
    b: usize,
    side: FreeBlock,
    fixed: &CellVector,
) -> Result<bool> {
    let field = rule.field();
    if fixed.field() != field {
        return Err(Error::FieldMismatch);
    }
    if b == 0 {
        return Err(Error::InvalidParameter(
            "block size b must be at least 1".into(),
        ));
    }
    let d = rule.diameter();
    if fixed.len() + 1 != d || !(d - 1).is_multiple_of(b) {
        return Err(Error::LengthMismatch {
            what: "fixed cells (diameter - 1, a multiple of b)",
            expected: d - 1,
            found: fixed.len(),
        });
    }
    let q = field.q() as usize;
    let n = usize::try_from(saturating_pow(q as u64, b as u64))
        .ok()
        .filter(|&n| n <= 1 << 26)
        .ok_or(Error::InvalidParameter("q^b too large to exhaust".into()))?;
    let offset = match side {
        FreeBlock::Left => 0,
        FreeBlock::Right => fixed.len(),
    };
    let mut input = vec![0; fixed.len() + b];
    let fixed_start = if side == FreeBlock::Left { b } else { 0 };
    input[fixed_start..fixed_start + fixed.len()].copy_from_slice(fixed.cells());
    let mut out = vec![0; b];
    let mut seen = vec![false; n];
    for r in 0..n {
        let mut rest = r;
        for c in &mut input[offset..offset + b] {
            *c = (rest % q) as Symbol;
            rest /= q;
        }
        rule.apply_ca_into(&input, &mut out);
        let rank = out
            .iter()
            .rev()
            .fold(0usize, |acc, &x| acc * q + x as usize);
        if std::mem::replace(&mut seen[rank], true) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of bipermutive rules of `b + 1` variables, `q^(q^(b-1))`; equal to
/// the number of Latin squares of order `q^b` they generate.
pub fn count_bipermutive_rules(field: &FieldSpec, b: usize, budget: &Budget) -> Result<BigUint> {
    if b == 0 {
        return Err(Error::InvalidParameter(
            "block size b must be at least 1".into(),
        ));
    }
    let q = u64::from(field.q());
    let exponent = saturating_pow(q, (b - 1) as u64);
    let bits = exponent.saturating_mul(u128::from(64 - q.leading_zeros()));
    budget.check_bits("bipermutive rule count", bits)?;
    Ok(BigUint::from(q).pow(exponent as u32))
}

/// Number of linear rules `q^(b(k-1)-1)`.
pub fn linear_rule_count(field: &FieldSpec, b: usize, k: usize) -> Result<u128> {
    if b == 0 || k < 2 {
        return Err(Error::InvalidParameter("need b >= 1 and k >= 2".into()));
    }
    Ok(saturating_pow(
        u64::from(field.q()),
        (b * (k - 1) - 1) as u64,
    ))
}

/// All linear rules for `(q, b, k)` in lexicographic order of
/// `(a_2, ..., a_{d-1})`, `a_2` most significant.
pub fn enumerate_linear_rules(field: &FieldSpec, b: usize, k: usize) -> Result<LinearRules> {
    let count = linear_rule_count(field, b, k)?;
    Ok(LinearRules {
        field: field.clone(),
        b,
        k,
        next: 0,
        count,
    })
}

#[derive(Debug, Clone)]
pub struct LinearRules {
    field: FieldSpec,
    b: usize,
    k: usize,
    next: u128,
    count: u128,
}

impl Iterator for LinearRules {
    type Item = LinearRule;

    fn next(&mut self) -> Option<LinearRule> {
        if self.next >= self.count {
            return None;
        }
        let rule = LinearRule::from_index(&self.field, self.b, self.k, self.next).ok();
        self.next += 1;
        rule
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = usize::try_from(self.count - self.next).unwrap_or(usize::MAX);
        (left, Some(left))
    }
}

/// All `q^(q^(d-2))` general bipermutive rules of diameter `d`, tables in
/// lexicographic order (first entry most significant).
pub fn enumerate_bipermutive_rules(
    field: &FieldSpec,
    d: usize,
    budget: &Budget,
) -> Result<Vec<GeneralBipermutiveRule>> {
    if d < 2 {
        return Err(Error::InvalidParameter(
            "diameter must be at least 2".into(),
        ));
    }
    let q = u64::from(field.q());
    let len = saturating_pow(q, (d - 2) as u64);
    let count = saturating_pow(q, len.min(128) as u64);
    budget.check_enumeration("general bipermutive rules", count)?;
    let len = len as usize;
    let mut out = Vec::with_capacity(count as usize);
    for index in 0..count {
        let mut rest = index;
        let mut table = vec![0; len];
        for t in table.iter_mut().rev() {
            *t = (rest % u128::from(q)) as Symbol;
            rest /= u128::from(q);
        }
        out.push(GeneralBipermutiveRule::new(field, d, table)?);
    }
    Ok(out)
}

/// File form of a linear rule: `{q, b, k, coeffs}`, plus `field` for
/// extension fields with a non-default polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearRuleRepr {
    pub q: u32,
    pub b: usize,
    pub k: usize,
    pub coeffs: Vec<Symbol>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldParams>,
}

/// File form of a general bipermutive rule: `{q, d, g_table}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralRuleRepr {
    pub q: u32,
    pub d: usize,
    pub g_table: Vec<Symbol>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldParams>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RuleRepr {
    Linear(LinearRuleRepr),
    General(GeneralRuleRepr),
}

fn resolve_field(q: u32, params: Option<FieldParams>) -> Result<FieldSpec> {
    match params {
        None => FieldSpec::new(q),
        Some(params) => {
            let f = FieldSpec::try_from(params)?;
            if f.q() != q {
                return Err(Error::InvalidParameter(format!(
                    "field has order {} but q = {q}",
                    f.q()
                )));
            }
            Ok(f)
        }
    }
}

fn field_params(f: &FieldSpec) -> Option<FieldParams> {
    (!f.is_default_poly()).then(|| f.params())
}

impl From<&LinearRule> for LinearRuleRepr {
    fn from(r: &LinearRule) -> Self {
        LinearRuleRepr {
            q: r.field.q(),
            b: r.b,
            k: r.k,
            coeffs: r.coeffs().to_vec(),
            field: field_params(&r.field),
        }
    }
}

impl TryFrom<LinearRuleRepr> for LinearRule {
    type Error = Error;

    fn try_from(r: LinearRuleRepr) -> Result<Self> {
        let field = resolve_field(r.q, r.field)?;
        LinearRule::new(&field, r.b, r.k, r.coeffs)
    }
}

impl From<&GeneralBipermutiveRule> for GeneralRuleRepr {
    fn from(r: &GeneralBipermutiveRule) -> Self {
        GeneralRuleRepr {
            q: r.field.q(),
            d: r.d,
            g_table: r.g_table.clone(),
            field: field_params(&r.field),
        }
    }
}

impl TryFrom<GeneralRuleRepr> for GeneralBipermutiveRule {
    type Error = Error;

    fn try_from(r: GeneralRuleRepr) -> Result<Self> {
        let field = resolve_field(r.q, r.field)?;
        GeneralBipermutiveRule::new(&field, r.d, r.g_table)
    }
}

impl From<&Rule> for RuleRepr {
    fn from(r: &Rule) -> Self {
        match r {
            Rule::Linear(l) => RuleRepr::Linear(l.into()),
            Rule::General(g) => RuleRepr::General(g.into()),
        }
    }
}

impl TryFrom<RuleRepr> for Rule {
    type Error = Error;

    fn try_from(r: RuleRepr) -> Result<Self> {
        Ok(match r {
            RuleRepr::Linear(l) => Rule::Linear(l.try_into()?),
            RuleRepr::General(g) => Rule::General(g.try_into()?),
        })
    }
}

macro_rules! serde_via_repr {
    ($ty:ty, $repr:ty) => {
        impl Serialize for $ty {
            fn serialize<S: serde::Serializer>(
                &self,
                s: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                <$repr>::from(self).serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: serde::Deserializer<'de>>(
                d: D,
            ) -> std::result::Result<Self, D::Error> {
                <$repr>::deserialize(d)?
                    .try_into()
                    .map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_via_repr!(LinearRule, LinearRuleRepr);
serde_via_repr!(GeneralBipermutiveRule, GeneralRuleRepr);
serde_via_repr!(Rule, RuleRepr);
