//! Toeplitz windows of linear rules, determinants over `F_q`, and counts of
//! nonsingular Toeplitz matrices.
//!
//! A window `(c_1, ..., c_{2b-1})` defines the `b x b` matrix with entry
//! `(r, s) = c_{b+s-r}` (1-based): the first row is `(c_b, ..., c_{2b-1})`
//! and the first column runs `c_b, c_{b-1}, ..., c_1`. Entries below the
//! diagonal use the prefix `c_1..c_{b-1}`, the diagonal `c_b`, and entries
//! above it the suffix `c_{b+1}..c_{2b-1}`.
//!
//! For a linear rule with interior coefficients `(a_2, ..., a_{b(k-1)})`,
//! window `i` (`1 <= i <= k-2`) is `(a_{b(i-1)+2}, ..., a_{b(i+1)})`: the
//! matrix that maps block `i + 1` of the CA input to the output when all
//! other blocks are held fixed. Consecutive windows share `b - 1`
//! coefficients.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::budget::{saturating_pow, Budget};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec, Symbol};
use crate::rule::{check_symbols, CellVector, LinearRule, LocalRule};

/// Dense matrix over `F_q`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFq {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Symbol>,
}

impl MatrixFq {
    pub fn new(field: &FieldSpec, rows: usize, cols: usize, data: Vec<Symbol>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                what: "matrix data",
                expected: rows * cols,
                found: data.len(),
            });
        }
        check_symbols(field, &data)?;
        Ok(MatrixFq {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: &FieldSpec, rows: &[Vec<Symbol>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                what: "matrix row",
                expected: cols,
                found: bad.len(),
            });
        }
        MatrixFq::new(field, rows.len(), cols, rows.concat())
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        MatrixFq {
            field: field.clone(),
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `(r, s)`, 0-based.
    pub fn get(&self, r: usize, s: usize) -> Symbol {
        self.data[r * self.cols + s]
    }

    pub fn row(&self, r: usize) -> &[Symbol] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Symbol>> {
        self.data
            .chunks(self.cols.max(1))
            .map(<[_]>::to_vec)
            .collect()
    }

    fn require_square(&self) -> Result<usize> {
        if self.rows == self.cols {
            Ok(self.rows)
        } else {
            Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

/// Determinant by Gaussian elimination in place on a row-major `n x n`
/// buffer. The pivot is the first nonzero entry in the column.
pub(crate) fn det_in_place(field: &FieldSpec, n: usize, a: &mut [Symbol]) -> Symbol {
    let mut det = 1;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
            return 0;
        };
        if piv != col {
            for j in col..n {
                a.swap(piv * n + j, col * n + j);
            }
            det = field.neg_sym(det);
        }
        let pivot = a[col * n + col];
        det = field.mul_sym(det, pivot);
        let pinv = field.inv_sym(pivot).expect("pivot is nonzero");
        for r in col + 1..n {
            let factor = field.mul_sym(a[r * n + col], pinv);
            if factor == 0 {
                continue;
            }
            for j in col..n {
                let t = field.mul_sym(factor, a[col * n + j]);
                a[r * n + j] = field.sub_sym(a[r * n + j], t);
            }
        }
    }
    det
}

pub fn determinant(m: &MatrixFq) -> Result<FieldElement> {
    let n = m.require_square()?;
    let mut a = m.data.clone();
    let d = det_in_place(&m.field, n, &mut a);
    m.field.element(u64::from(d))
}

/// Solves `m x = rhs` for square nonsingular `m`.
pub fn solve(m: &MatrixFq, rhs: &[Symbol]) -> Result<Vec<Symbol>> {
    let n = m.require_square()?;
    if rhs.len() != n {
        return Err(Error::LengthMismatch {
            what: "right-hand side",
            expected: n,
            found: rhs.len(),
        });
    }
    let f = &m.field;
    let w = n + 1;
    let mut a: Vec<Symbol> = Vec::with_capacity(n * w);
    for (r, &y) in rhs.iter().enumerate() {
        a.extend_from_slice(m.row(r));
        a.push(y);
    }
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| a[r * w + col] != 0)
            .ok_or(Error::Singular)?;
        if piv != col {
            for j in 0..w {
                a.swap(piv * w + j, col * w + j);
            }
        }
        let pinv = f.inv_sym(a[col * w + col]).expect("pivot is nonzero");
        for j in col..w {
            a[col * w + j] = f.mul_sym(a[col * w + j], pinv);
        }
        for r in 0..n {
            if r == col || a[r * w + col] == 0 {
                continue;
            }
            let factor = a[r * w + col];
            for j in col..w {
                let t = f.mul_sym(factor, a[col * w + j]);
                a[r * w + j] = f.sub_sym(a[r * w + j], t);
            }
        }
    }
    Ok((0..n).map(|r| a[r * w + n]).collect())
}

/// Coefficient vector `(c_1, ..., c_{2b-1})` of a `b x b` Toeplitz matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToeplitzWindow {
    field: FieldSpec,
    b: usize,
    coeffs: Vec<Symbol>,
}

impl ToeplitzWindow {
    pub fn new(field: &FieldSpec, coeffs: Vec<Symbol>) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "a window has 2b-1 coefficients, got {}",
                coeffs.len()
            )));
        }
        check_symbols(field, &coeffs)?;
        Ok(ToeplitzWindow {
            field: field.clone(),
            b: coeffs.len().div_ceil(2),
            coeffs,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn coeffs(&self) -> &[Symbol] {
        &self.coeffs
    }

    pub fn to_matrix(&self) -> MatrixFq {
        let b = self.b;
        let mut data = Vec::with_capacity(b * b);
        for r in 0..b {
            for s in 0..b {
                data.push(self.coeffs[b - 1 + s - r]);
            }
        }
        MatrixFq {
            field: self.field.clone(),
            rows: b,
            cols: b,
            data,
        }
    }

    /// Digits concatenated for `q <= 10`, comma separated otherwise.
    pub fn label(&self) -> String {
        label(self.field.q(), &self.coeffs)
    }
}

pub(crate) fn label(q: u32, coeffs: &[Symbol]) -> String {
    let parts: Vec<String> = coeffs.iter().map(ToString::to_string).collect();
    parts.join(if q <= 10 { "" } else { "," })
}

impl Serialize for ToeplitzWindow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            b: usize,
            coeffs: &'a [Symbol],
            matrix: Vec<Vec<Symbol>>,
        }
        Repr {
            b: self.b,
            coeffs: &self.coeffs,
            matrix: self.to_matrix().to_rows(),
        }
        .serialize(s)
    }
}

/// Toeplitz windows `M_{F,1}, ..., M_{F,k-2}` of a linear rule.
pub fn windows(rule: &LinearRule) -> Result<Vec<ToeplitzWindow>> {
    let (b, k) = (rule.b(), rule.k());
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "a rule of dimension {k} has no middle blocks"
        )));
    }
    let interior = rule.coeffs();
    Ok((1..=k - 2)
        .map(|i| {
            let start = b * (i - 1);
            ToeplitzWindow {
                field: rule.field().clone(),
                b,
                coeffs: interior[start..start + 2 * b - 1].to_vec(),
            }
        })
        .collect())
}

/// `det` of the matrix of a window.
pub fn det_of_window(w: &ToeplitzWindow) -> FieldElement {
    let mut data = w.to_matrix().data;
    let d = det_in_place(&w.field, w.b, &mut data);
    w.field
        .element(u64::from(d))
        .expect("determinant is a field element")
}

/// 1-based index of the first singular window, `None` when all windows are
/// invertible (always `None` for `k = 2`).
pub fn first_singular_window(rule: &LinearRule) -> Option<usize> {
    if rule.k() < 3 {
        return None;
    }
    windows(rule)
        .expect("k >= 3")
        .iter()
        .position(|w| det_of_window(w).is_zero())
        .map(|i| i + 1)
}

/// Latin criterion through the windows: every `M_{F,i}` is invertible.
pub fn windows_nonsingular(rule: &LinearRule) -> bool {
    first_singular_window(rule).is_none()
}

/// Calls `visit` on every vector of `F_q^len` in lexicographic order (first
/// coordinate most significant).
pub(crate) fn for_each_vector(q: u32, len: usize, mut visit: impl FnMut(&[Symbol])) {
    let mut v = vec![0; len];
    loop {
        visit(&v);
        let mut j = len;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            v[j] += 1;
            if v[j] < q {
                break;
            }
            v[j] = 0;
        }
    }
}

fn window_det_raw(field: &FieldSpec, b: usize, coeffs: &[Symbol], buf: &mut Vec<Symbol>) -> Symbol {
    buf.clear();
    for r in 0..b {
        for s in 0..b {
            buf.push(coeffs[b - 1 + s - r]);
        }
    }
    det_in_place(field, b, buf)
}

/// `supp(det)`: every window with nonzero determinant, in lexicographic
/// order of coefficients.
pub fn support_of_det(field: &FieldSpec, b: usize, budget: &Budget) -> Result<Vec<ToeplitzWindow>> {
    if b == 0 {
        return Err(Error::InvalidParameter(
            "block size b must be at least 1".into(),
        ));
    }
    budget.check_enumeration(
        "Toeplitz windows",
        saturating_pow(u64::from(field.q()), (2 * b - 1) as u64),
    )?;
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(b * b);
    for_each_vector(field.q(), 2 * b - 1, |c| {
        if window_det_raw(field, b, c, &mut buf) != 0 {
            out.push(ToeplitzWindow {
                field: field.clone(),
                b,
                coeffs: c.to_vec(),
            });
        }
    });
    Ok(out)
}

/// `q^(2(b-1)) (q-1)`.
pub fn nonsingular_toeplitz_formula(q: u32, b: usize) -> BigUint {
    BigUint::from(q).pow(2 * (b as u32 - 1)) * (q - 1)
}

/// Count of nonsingular `b x b` Toeplitz matrices: closed form, and when
/// requested an exhaustive recount.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToeplitzCount {
    pub q: u32,
    pub b: usize,
    #[serde(serialize_with = "crate::serde_decimal")]
    pub formula: BigUint,
    #[serde(serialize_with = "crate::serde_decimal_opt")]
    pub exhaustive: Option<BigUint>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
}

pub fn count_nonsingular_toeplitz(
    field: &FieldSpec,
    b: usize,
    verify: bool,
    budget: &Budget,
) -> Result<ToeplitzCount> {
    if b == 0 {
        return Err(Error::InvalidParameter(
            "block size b must be at least 1".into(),
        ));
    }
    let formula = nonsingular_toeplitz_formula(field.q(), b);
    budget.check_big("Toeplitz count", &formula)?;
    let exhaustive = if verify {
        Some(BigUint::from(support_of_det(field, b, budget)?.len()))
    } else {
        None
    };
    let matches = exhaustive.as_ref().map(|e| *e == formula);
    Ok(ToeplitzCount {
        q: field.q(),
        b,
        formula,
        exhaustive,
        matches,
    })
}

/// Which end of a window is held fixed when counting a restricted support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixedEnd {
    /// The first `len` coefficients.
    Prefix,
    /// The last `len` coefficients.
    Suffix,
}

/// Number of nonsingular `b x b` Toeplitz matrices whose window starts (or
/// ends) with `fixed`, by exhaustion over the free coefficients.
pub fn restricted_support_size(
    field: &FieldSpec,
    b: usize,
    end: FixedEnd,
    fixed: &[Symbol],
    budget: &Budget,
) -> Result<BigUint> {
    let len = 2 * b - 1;
    if b == 0 || fixed.len() > len {
        return Err(Error::InvalidParameter(format!(
            "cannot fix {} of {len} window coefficients",
            fixed.len()
        )));
    }
    check_symbols(field, fixed)?;
    let free = len - fixed.len();
    budget.check_enumeration(
        "window completions",
        saturating_pow(u64::from(field.q()), free as u64),
    )?;
    let mut coeffs = vec![0; len];
    let (fixed_at, free_at) = match end {
        FixedEnd::Prefix => (0, fixed.len()),
        FixedEnd::Suffix => (free, 0),
    };
    coeffs[fixed_at..fixed_at + fixed.len()].copy_from_slice(fixed);
    let mut count = 0u64;
    let mut buf = Vec::with_capacity(b * b);
    for_each_vector(field.q(), free, |tail| {
        coeffs[free_at..free_at + free].copy_from_slice(tail);
        if window_det_raw(field, b, &coeffs, &mut buf) != 0 {
            count += 1;
        }
    });
    Ok(BigUint::from(count))
}

/// Number of upper triangular Toeplitz `B` (diagonal and above free) such that
/// `A + B` is nonsingular, where `A` is the strictly lower triangular Toeplitz
/// matrix given by its `n - 1` below-diagonal coefficients in window order.
pub fn count_triangular_completions(
    field: &FieldSpec,
    n: usize,
    lower: &[Symbol],
    budget: &Budget,
) -> Result<BigUint> {
    if n == 0 || lower.len() != n - 1 {
        return Err(Error::LengthMismatch {
            what: "strictly lower triangular coefficients",
            expected: n.saturating_sub(1),
            found: lower.len(),
        });
    }
    restricted_support_size(field, n, FixedEnd::Prefix, lower, budget)
}

/// Recovers middle block `i + 1` (window `i`, 1-based) from the other `k - 1`
/// blocks and the CA output `y`.
///
/// With the other blocks fixed, `y = F(x with zero middle) + M_{F,i} x_mid`,
/// so the block is the solution of a `b x b` linear system. The result is
/// re-applied through the CA before it is returned.
pub fn solve_middle_block(
    rule: &LinearRule,
    i: usize,
    fixed_blocks: &[CellVector],
    y: &CellVector,
) -> Result<CellVector> {
    let (b, k) = (rule.b(), rule.k());
    let field = rule.field();
    if k < 3 || i == 0 || i > k - 2 {
        return Err(Error::InvalidParameter(format!(
            "window index {i} outside 1..={}",
            k.saturating_sub(2)
        )));
    }
    if fixed_blocks.len() != k - 1 {
        return Err(Error::LengthMismatch {
            what: "fixed blocks",
            expected: k - 1,
            found: fixed_blocks.len(),
        });
    }
    if y.len() != b {
        return Err(Error::LengthMismatch {
            what: "output block",
            expected: b,
            found: y.len(),
        });
    }
    for blk in fixed_blocks.iter().chain(std::iter::once(y)) {
        if blk.field() != field {
            return Err(Error::FieldMismatch);
        }
        if blk.len() != b {
            return Err(Error::LengthMismatch {
                what: "block",
                expected: b,
                found: blk.len(),
            });
        }
    }
    let assemble = |middle: &[Symbol]| -> Vec<Symbol> {
        let mut input = Vec::with_capacity(b * k);
        for (j, blk) in fixed_blocks.iter().enumerate() {
            if j == i {
                input.extend_from_slice(middle);
            }
            input.extend_from_slice(blk.cells());
        }
        input
    };
    let mut base = vec![0; b];
    rule.apply_ca_into(&assemble(&vec![0; b]), &mut base);
    let rhs: Vec<Symbol> = y
        .cells()
        .iter()
        .zip(&base)
        .map(|(&yy, &c)| field.sub_sym(yy, c))
        .collect();
    let window = &windows(rule)?[i - 1];
    let middle = solve(&window.to_matrix(), &rhs)?;
    let mut check = vec![0; b];
    rule.apply_ca_into(&assemble(&middle), &mut check);
    assert_eq!(
        check,
        y.cells(),
        "recovered block does not reproduce the output"
    );
    CellVector::new(field, middle)
}
