//! The hypercube associated to a CA and its Latin property.
//!
//! For a rule of diameter `d = b(k-1) + 1` the CA of length `bk` maps `k`
//! blocks of `b` cells to one block. Coordinates `1..=N`, `N = q^b`, are
//! turned into blocks by [`PsiEncoding`], so the hypercube entry at
//! `(i_1, ..., i_k)` is `psi^-1(F(psi(i_1) || ... || psi(i_k)))`.

use serde::{Deserialize, Serialize};

use crate::budget::{saturating_pow, Budget};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Symbol};
use crate::rule::{CellVector, LocalRule, Rule};

/// Bijection between coordinates `1..=q^b` and blocks of `F_q^b`.
///
/// Coordinate `i` maps to the base-`q` digits of `i - 1`, leftmost cell least
/// significant. For `q = 2, b = 2` this gives `1 -> 00, 2 -> 10, 3 -> 01,
/// 4 -> 11`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiEncoding {
    field: FieldSpec,
    b: usize,
    order: u64,
}

impl PsiEncoding {
    pub fn new(field: &FieldSpec, b: usize) -> Result<Self> {
        let order = saturating_pow(u64::from(field.q()), b as u64);
        if b == 0 || order > u128::from(u32::MAX) {
            return Err(Error::InvalidParameter(format!(
                "block size {b} gives an unsupported order q^b"
            )));
        }
        Ok(PsiEncoding {
            field: field.clone(),
            b,
            order: order as u64,
        })
    }

    /// `N = q^b`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn psi(&self, i: u64) -> Result<CellVector> {
        self.check(i)?;
        let mut cells = vec![0; self.b];
        self.write_block(i - 1, &mut cells);
        CellVector::new(&self.field, cells)
    }

    pub fn psi_inverse(&self, block: &CellVector) -> Result<u64> {
        if block.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        if block.len() != self.b {
            return Err(Error::LengthMismatch {
                what: "psi block",
                expected: self.b,
                found: block.len(),
            });
        }
        Ok(self.rank(block.cells()) + 1)
    }

    fn check(&self, i: u64) -> Result<()> {
        if i == 0 || i > self.order {
            Err(Error::CoordinateOutOfRange {
                value: i,
                order: self.order,
            })
        } else {
            Ok(())
        }
    }

    /// Writes the block of the zero-based coordinate `i0`.
    #[inline]
    pub(crate) fn write_block(&self, mut i0: u64, out: &mut [Symbol]) {
        let q = u64::from(self.field.q());
        for c in out.iter_mut() {
            *c = (i0 % q) as Symbol;
            i0 /= q;
        }
    }

    /// Zero-based coordinate of a block.
    #[inline]
    pub(crate) fn rank(&self, block: &[Symbol]) -> u64 {
        let q = u64::from(self.field.q());
        block.iter().rev().fold(0, |acc, &x| acc * q + u64::from(x))
    }
}

/// A repeated value on an axis-parallel line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// 1-based axis along which the line runs.
    pub axis: usize,
    /// All `k` coordinates of the second occurrence.
    pub coords: Vec<u64>,
    /// Axis coordinate of the first occurrence.
    pub first_at: u64,
    /// The repeated entry.
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatinVerdict {
    Latin,
    NotLatin(Violation),
}

impl LatinVerdict {
    pub fn is_latin(&self) -> bool {
        matches!(self, LatinVerdict::Latin)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            LatinVerdict::Latin => None,
            LatinVerdict::NotLatin(v) => Some(v),
        }
    }
}

/// Lazy view of the hypercube `H_F` of a rule.
#[derive(Debug, Clone)]
pub struct Hypercube<R> {
    rule: R,
    k: usize,
    psi: PsiEncoding,
}

impl<R: LocalRule> Hypercube<R> {
    /// Hypercube of block size `b`; the dimension follows from the diameter,
    /// `k = (d - 1) / b + 1`.
    pub fn new(rule: R, b: usize) -> Result<Self> {
        let d = rule.diameter();
        if b == 0 || d < 2 || !(d - 1).is_multiple_of(b) {
            return Err(Error::InvalidParameter(format!(
                "diameter {d} is not b(k-1)+1 for block size {b}"
            )));
        }
        let k = (d - 1) / b + 1;
        let psi = PsiEncoding::new(rule.field(), b)?;
        Ok(Hypercube { rule, k, psi })
    }

    pub fn rule(&self) -> &R {
        &self.rule
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn b(&self) -> usize {
        self.psi.b
    }

    /// `N = q^b`.
    pub fn order(&self) -> u64 {
        self.psi.order
    }

    pub fn psi(&self) -> &PsiEncoding {
        &self.psi
    }

    /// Number of entries `N^k`, saturating.
    pub fn entry_count(&self) -> u128 {
        saturating_pow(self.order(), self.k as u64)
    }

    /// `H_F(i_1, ..., i_k)` with 1-based coordinates.
    pub fn entry(&self, coords: &[u64]) -> Result<u64> {
        if coords.len() != self.k {
            return Err(Error::LengthMismatch {
                what: "hypercube coordinates",
                expected: self.k,
                found: coords.len(),
            });
        }
        for &c in coords {
            self.psi.check(c)?;
        }
        let b = self.b();
        let mut input = vec![0; b * self.k];
        for (block, &c) in input.chunks_mut(b).zip(coords) {
            self.psi.write_block(c - 1, block);
        }
        let mut out = vec![0; b];
        self.rule.apply_ca_into(&input, &mut out);
        Ok(self.psi.rank(&out) + 1)
    }

    /// Checks every axis-parallel line for repeated values.
    pub fn is_latin(&self, budget: &Budget) -> Result<LatinVerdict> {
        let axes: Vec<usize> = (1..=self.k).collect();
        self.is_latin_on(&axes, budget)
    }

    /// Checks lines along the given 1-based axes only.
    ///
    /// Lines are streamed, never materialized. Axes are visited in the order
    /// given; within an axis the fixed coordinates run lexicographically, so
    /// the reported violation is the first one in that order.
    pub fn is_latin_on(&self, axes: &[usize], budget: &Budget) -> Result<LatinVerdict> {
        budget.check_entries("hypercube entries", self.entry_count())?;
        if let Some(&bad) = axes.iter().find(|&&a| a == 0 || a > self.k) {
            return Err(Error::InvalidParameter(format!(
                "axis {bad} outside 1..={}",
                self.k
            )));
        }
        let n = self.order();
        let b = self.b();
        let k = self.k;
        let mut input = vec![0; b * k];
        let mut out = vec![0; b];
        // seen[v] == stamp marks value v as present on the current line.
        let mut seen = vec![0u32; n as usize];
        let mut first = vec![0u64; n as usize];
        let mut stamp = 0u32;
        let mut fixed = vec![0u64; k - 1];

        for &axis in axes {
            let a = axis - 1;
            fixed.iter_mut().for_each(|c| *c = 0);
            loop {
                for (j, &c) in fixed.iter().enumerate() {
                    let block = if j < a { j } else { j + 1 };
                    self.psi
                        .write_block(c, &mut input[block * b..(block + 1) * b]);
                }
                stamp = stamp.wrapping_add(1);
                if stamp == 0 {
                    seen.iter_mut().for_each(|s| *s = 0);
                    stamp = 1;
                }
                for t in 0..n {
                    self.psi.write_block(t, &mut input[a * b..(a + 1) * b]);
                    self.rule.apply_ca_into(&input, &mut out);
                    let v = self.psi.rank(&out) as usize;
                    if seen[v] == stamp {
                        let mut coords: Vec<u64> = fixed.iter().map(|c| c + 1).collect();
                        coords.insert(a, t + 1);
                        return Ok(LatinVerdict::NotLatin(Violation {
                            axis,
                            coords,
                            first_at: first[v] + 1,
                            value: v as u64 + 1,
                        }));
                    }
                    seen[v] = stamp;
                    first[v] = t;
                }
                if !advance(&mut fixed, n) {
                    break;
                }
            }
        }
        Ok(LatinVerdict::Latin)
    }

    /// All entries, sliced into 2-D layers (see [`HypercubeDump`]).
    pub fn layers(&self, budget: &Budget) -> Result<Vec<Vec<Vec<u64>>>> {
        budget.check_entries("materialized hypercube", self.entry_count())?;
        let n = self.order();
        let layer_count = saturating_pow(n, (self.k - 2) as u64) as u64;
        let mut outer = vec![0u64; self.k - 2];
        let mut coords = vec![1u64; self.k];
        let mut layers = Vec::with_capacity(layer_count as usize);
        loop {
            for (j, &c) in outer.iter().enumerate() {
                coords[j + 2] = c + 1;
            }
            let mut layer = Vec::with_capacity(n as usize);
            for x in 1..=n {
                coords[0] = x;
                let row = (1..=n)
                    .map(|y| {
                        coords[1] = y;
                        self.entry(&coords)
                    })
                    .collect::<Result<Vec<_>>>()?;
                layer.push(row);
            }
            layers.push(layer);
            if !advance(&mut outer, n) {
                break;
            }
        }
        Ok(layers)
    }
}

/// Odometer step over `0..n` per digit, last digit fastest. Returns false
/// after the final tuple.
fn advance(digits: &mut [u64], n: u64) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < n {
            return true;
        }
        *d = 0;
    }
    false
}

/// Materialized hypercube in its JSON form.
///
/// `layers[l][x - 1][y - 1]` is the entry at `(x, y, i_3, ..., i_k)`, where
/// `l` ranks `(i_3, ..., i_k)` lexicographically (`i_3` most significant).
/// For `k = 3` the layer index is simply `z - 1`; for `k = 2` there is a
/// single layer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypercubeDump {
    pub q: u32,
    pub b: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<Symbol>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_table: Option<Vec<Symbol>>,
    pub layers: Vec<Vec<Vec<u64>>>,
}

impl HypercubeDump {
    pub fn new(rule: &Rule, b: usize, budget: &Budget) -> Result<Self> {
        let cube = Hypercube::new(rule, b)?;
        let layers = cube.layers(budget)?;
        let (coeffs, g_table) = match rule {
            Rule::Linear(r) => (Some(r.coeffs().to_vec()), None),
            Rule::General(r) => (None, Some(r.g_table().to_vec())),
        };
        Ok(HypercubeDump {
            q: rule.field().q(),
            b,
            k: cube.k(),
            coeffs,
            g_table,
            layers,
        })
    }

    /// Text grid: one block per layer, headed by the outer coordinates, rows
    /// `x = 1..N`, columns `y = 1..N`.
    pub fn to_text(&self) -> String {
        let n = self.layers.first().map_or(0, Vec::len) as u64;
        let width = n.to_string().len();
        let mut outer = vec![0u64; self.k.saturating_sub(2)];
        let mut s = String::new();
        for layer in &self.layers {
            let head = match self.k {
                2 => "square".to_string(),
                3 => format!("z={}", outer[0] + 1),
                _ => outer
                    .iter()
                    .enumerate()
                    .map(|(j, c)| format!("i{}={}", j + 3, c + 1))
                    .collect::<Vec<_>>()
                    .join(" "),
            };
            s.push_str(&head);
            s.push('\n');
            for row in layer {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
                s.push_str(&cells.join(" "));
                s.push('\n');
            }
            s.push('\n');
            advance(&mut outer, n);
        }
        s
    }
}
