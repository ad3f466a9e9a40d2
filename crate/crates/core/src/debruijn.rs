//! The de Bruijn graph of the Toeplitz determinant and walk counting.
//!
//! Vertices are the windows `a in F_q^(2b-1)` with `det(a) != 0`. There is an
//! edge `u -> v` when the last `b - 1` coefficients of `u` equal the first
//! `b - 1` of `v`, i.e. when the `(b-1)`-fusion `u . v` exists. A walk of
//! `k - 3` edges (`k - 2` vertices, repetition allowed) fuses into the
//! interior coefficients of a linear rule whose `k`-dimensional hypercube is
//! Latin, and every such rule arises from exactly one walk.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::{saturating_pow, Budget};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Symbol};
use crate::hypercube::Hypercube;
use crate::rule::{enumerate_bipermutive_rules, linear_rule_count, LinearRule, LocalRule};
use crate::toeplitz::{support_of_det, windows, ToeplitzWindow};

/// `s`-fusion: `u` followed by `v` with `s` symbols overlapped, or `None`
/// when the last `s` symbols of `u` differ from the first `s` of `v`.
pub fn fuse<T: PartialEq + Clone>(u: &[T], v: &[T], s: usize) -> Option<Vec<T>> {
    if s > u.len() || s > v.len() || u[u.len() - s..] != v[..s] {
        return None;
    }
    let mut z = u.to_vec();
    z.extend_from_slice(&v[s..]);
    Some(z)
}

/// `G_det` for `b x b` Toeplitz matrices over `F_q`.
///
/// Vertices are stored in lexicographic order of their coefficients, which is
/// also the order of their base-`q` integer codes; adjacency lists are sorted.
#[derive(Debug, Clone)]
pub struct DetGraph {
    field: FieldSpec,
    b: usize,
    vertices: Vec<ToeplitzWindow>,
    out: Vec<Vec<usize>>,
    in_degree: Vec<usize>,
}

fn code(q: u32, v: &[Symbol]) -> u64 {
    v.iter()
        .fold(0, |acc, &x| acc * u64::from(q) + u64::from(x))
}

pub fn build_graph(field: &FieldSpec, b: usize, budget: &Budget) -> Result<DetGraph> {
    let vertices = support_of_det(field, b, budget)?;
    let s = b - 1;
    let q = field.q();
    // Vertices sharing a prefix are contiguous in lexicographic order.
    let mut by_prefix: HashMap<u64, (usize, usize)> = HashMap::new();
    for (i, v) in vertices.iter().enumerate() {
        let e = by_prefix.entry(code(q, &v.coeffs()[..s])).or_insert((i, i));
        e.1 = i + 1;
    }
    let mut in_degree = vec![0; vertices.len()];
    let out: Vec<Vec<usize>> = vertices
        .iter()
        .map(|u| {
            let c = u.coeffs();
            let targets: Vec<usize> = by_prefix
                .get(&code(q, &c[c.len() - s..]))
                .map_or(Vec::new(), |&(lo, hi)| (lo..hi).collect());
            for &t in &targets {
                in_degree[t] += 1;
            }
            targets
        })
        .collect();
    Ok(DetGraph {
        field: field.clone(),
        b,
        vertices,
        out,
        in_degree,
    })
}

impl DetGraph {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn vertices(&self) -> &[ToeplitzWindow] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &ToeplitzWindow {
        &self.vertices[i]
    }

    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out[i]
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out[i].len()
    }

    pub fn in_degree(&self, i: usize) -> usize {
        self.in_degree[i]
    }

    /// Index of the vertex with these coefficients.
    pub fn index_of(&self, coeffs: &[Symbol]) -> Option<usize> {
        let q = self.field.q();
        let target = code(q, coeffs);
        if coeffs.len() != 2 * self.b - 1 {
            return None;
        }
        self.vertices
            .binary_search_by_key(&target, |v| code(q, v.coeffs()))
            .ok()
    }

    /// All edges `(u, v)` as vertex indices, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, ts)| ts.iter().map(move |&v| (u, v)))
    }

    /// The common in- and out-degree when the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.out.first()?.len();
        let regular =
            self.out.iter().all(|o| o.len() == d) && self.in_degree.iter().all(|&i| i == d);
        regular.then_some(d)
    }

    /// Linear rule fused from a walk given by vertex indices.
    pub fn rule_from_walk(&self, walk: &[usize]) -> Result<LinearRule> {
        let path: Vec<ToeplitzWindow> = walk
            .iter()
            .map(|&i| {
                self.vertices.get(i).cloned().ok_or(Error::IndexOutOfRange {
                    index: i as u128,
                    count: self.vertices.len() as u128,
                })
            })
            .collect::<Result<_>>()?;
        rule_from_path(&path)
    }

    /// The walk whose fusion is `rule`, if every window of the rule is a
    /// vertex.
    pub fn walk_of_rule(&self, rule: &LinearRule) -> Option<Vec<usize>> {
        if rule.field() != &self.field || rule.b() != self.b {
            return None;
        }
        windows(rule)
            .ok()?
            .iter()
            .map(|w| self.index_of(w.coeffs()))
            .collect()
    }

    /// Graphviz rendering with vertices labelled by their coefficients.
    pub fn to_dot(&self) -> String {
        let mut s = format!("digraph det_q{}_b{} {{\n", self.field.q(), self.b);
        for v in &self.vertices {
            s.push_str(&format!("    \"{}\";\n", v.label()));
        }
        for (u, v) in self.edges() {
            s.push_str(&format!(
                "    \"{}\" -> \"{}\";\n",
                self.vertices[u].label(),
                self.vertices[v].label()
            ));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_export(&self) -> GraphExport {
        GraphExport {
            q: self.field.q(),
            b: self.b,
            vertices: self.vertices.iter().map(|v| v.coeffs().to_vec()).collect(),
            edges: self.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

/// JSON form of a graph: `{q, b, vertices, edges}` with edges as pairs of
/// vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphExport {
    pub q: u32,
    pub b: usize,
    pub vertices: Vec<Vec<Symbol>>,
    pub edges: Vec<[usize; 2]>,
}

/// Number of walks with `len` edges (`len = 0` counts vertices), by repeated
/// products of a count vector with the adjacency structure.
pub fn count_paths(g: &DetGraph, len: usize, budget: &Budget) -> Result<BigUint> {
    let n = g.vertex_count();
    let mut counts = vec![BigUint::one(); n];
    for _ in 0..len {
        let mut next = vec![BigUint::zero(); n];
        for (u, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &v in &g.out[u] {
                next[v] += c;
            }
        }
        counts = next;
        let total: BigUint = counts.iter().sum();
        budget.check_big("walk count", &total)?;
    }
    Ok(counts.iter().sum())
}

/// Iterator over walks with a fixed number of edges, in lexicographic order of
/// vertex index sequences.
#[derive(Debug, Clone)]
pub struct Walks<'g> {
    graph: &'g DetGraph,
    len: usize,
    next_start: usize,
    /// `(vertex, next child to try)`.
    stack: Vec<(usize, usize)>,
}

impl Iterator for Walks<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            if self.stack.is_empty() {
                if self.next_start >= self.graph.vertex_count() {
                    return None;
                }
                self.stack.push((self.next_start, 0));
                self.next_start += 1;
            }
            if self.stack.len() == self.len + 1 {
                let walk = self.stack.iter().map(|&(v, _)| v).collect();
                self.stack.pop();
                return Some(walk);
            }
            let top = self.stack.last_mut().expect("non-empty");
            let (v, child) = *top;
            match self.graph.out[v].get(child) {
                Some(&w) => {
                    top.1 += 1;
                    self.stack.push((w, 0));
                }
                None => {
                    self.stack.pop();
                }
            }
        }
    }
}

/// All walks with `len` edges, refusing when there are more than the
/// enumeration budget allows.
pub fn enumerate_paths<'g>(g: &'g DetGraph, len: usize, budget: &Budget) -> Result<Walks<'g>> {
    let total = count_paths(g, len, budget)?;
    let total = u128::try_from(&total).unwrap_or(u128::MAX);
    budget.check_enumeration("walks", total)?;
    Ok(Walks {
        graph: g,
        len,
        next_start: 0,
        stack: Vec::new(),
    })
}

/// The walk at position `n` (0-based) of [`enumerate_paths`], found by
/// unranking with per-vertex walk counts instead of enumerating.
pub fn nth_walk(g: &DetGraph, len: usize, n: &BigUint, budget: &Budget) -> Result<Vec<usize>> {
    let nv = g.vertex_count();
    // from[j][v]: walks with j edges starting at v.
    let mut from = vec![vec![BigUint::one(); nv]];
    for j in 1..=len {
        let prev = &from[j - 1];
        let cur: Vec<BigUint> = (0..nv)
            .map(|v| g.out[v].iter().map(|&w| &prev[w]).sum())
            .collect();
        budget.check_big("walk count", &cur.iter().sum())?;
        from.push(cur);
    }
    let total: BigUint = from[len].iter().sum();
    if *n >= total {
        return Err(Error::IndexOutOfRange {
            index: u128::try_from(n).unwrap_or(u128::MAX),
            count: u128::try_from(&total).unwrap_or(u128::MAX),
        });
    }
    let mut rest = n.clone();
    let mut pick = |candidates: &[usize], counts: &[BigUint]| -> usize {
        for &v in candidates {
            if rest < counts[v] {
                return v;
            }
            rest -= &counts[v];
        }
        unreachable!("rank is below the total")
    };
    let starts: Vec<usize> = (0..nv).collect();
    let mut walk = vec![pick(&starts, &from[len])];
    for j in (0..len).rev() {
        let last = *walk.last().expect("non-empty");
        walk.push(pick(&g.out[last], &from[j]));
    }
    Ok(walk)
}

/// Fuses a sequence of windows into the linear rule whose windows are exactly
/// that sequence (`k = path.len() + 2`).
pub fn rule_from_path(path: &[ToeplitzWindow]) -> Result<LinearRule> {
    let first = path.first().ok_or(Error::InvalidParameter(
        "a path needs at least one window".into(),
    ))?;
    let (field, b) = (first.field(), first.b());
    let s = b - 1;
    let mut coeffs = first.coeffs().to_vec();
    for (i, w) in path.iter().enumerate().skip(1) {
        if w.field() != field {
            return Err(Error::FieldMismatch);
        }
        if w.b() != b {
            return Err(Error::LengthMismatch {
                what: "window",
                expected: 2 * b - 1,
                found: w.coeffs().len(),
            });
        }
        let prev = &path[i - 1];
        if fuse(prev.coeffs(), w.coeffs(), s).is_none() {
            return Err(Error::NotFusable {
                index: i,
                overlap: s,
            });
        }
        coeffs.extend_from_slice(&w.coeffs()[s..]);
    }
    LinearRule::new(field, b, path.len() + 2, coeffs)
}

/// `(q-1)^(k-2) q^((k-1)(b-1))` for `k >= 3`; for `k = 2` every bipermutive
/// rule gives a Latin square and the count is `q^(q^(b-1))`.
pub fn latin_hypercube_formula(q: u32, b: usize, k: usize) -> Result<BigUint> {
    if b == 0 || k < 2 {
        return Err(Error::InvalidParameter("need b >= 1 and k >= 2".into()));
    }
    if k == 2 {
        let e = saturating_pow(u64::from(q), (b - 1) as u64);
        let e = u32::try_from(e)
            .map_err(|_| Error::InvalidParameter("exponent q^(b-1) too large".into()))?;
        return Ok(BigUint::from(q).pow(e));
    }
    Ok(BigUint::from(q - 1).pow((k - 2) as u32) * BigUint::from(q).pow(((k - 1) * (b - 1)) as u32))
}

/// Linear rules for `(q, b, k)` whose hypercube passes the brute-force Latin
/// check, in enumeration order. Rules are checked in parallel.
pub fn exhaustive_latin_rules(
    field: &FieldSpec,
    b: usize,
    k: usize,
    budget: &Budget,
) -> Result<Vec<LinearRule>> {
    let count = linear_rule_count(field, b, k)?;
    budget.check_enumeration("linear rules", count)?;
    let entries = saturating_pow(
        saturating_pow(u64::from(field.q()), b as u64) as u64,
        k as u64,
    );
    budget.check_entries("hypercube entries", entries)?;
    let found: Vec<Option<LinearRule>> = (0..count as u64)
        .into_par_iter()
        .map(|i| -> Result<Option<LinearRule>> {
            let rule = LinearRule::from_index(field, b, k, u128::from(i))?;
            let latin = Hypercube::new(&rule, b)?.is_latin(budget)?.is_latin();
            Ok(latin.then_some(rule))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Count of Latin squares among all general bipermutive rules of diameter
/// `b + 1`.
pub fn exhaustive_latin_squares(field: &FieldSpec, b: usize, budget: &Budget) -> Result<u64> {
    let rules = enumerate_bipermutive_rules(field, b + 1, budget)?;
    let mut n = 0;
    for rule in &rules {
        if Hypercube::new(rule, b)?.is_latin(budget)?.is_latin() {
            n += 1;
        }
    }
    Ok(n)
}

/// Closed-form Latin hypercube count with optional cross-checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatinCount {
    pub q: u32,
    pub b: usize,
    pub k: usize,
    #[serde(serialize_with = "crate::serde_decimal")]
    pub formula: BigUint,
    /// Walks of `k - 3` edges on `G_det` (`k >= 3`).
    #[serde(serialize_with = "crate::serde_decimal_opt")]
    pub paths: Option<BigUint>,
    /// Brute-force count over every rule.
    #[serde(serialize_with = "crate::serde_decimal_opt")]
    pub exhaustive: Option<BigUint>,
    /// Every computed route equals the formula.
    #[serde(rename = "match")]
    pub agree: bool,
}

/// `L_{b,k,q}`. With `verify`, also counts walks on `G_det` (`k >= 3`) and
/// runs the brute-force Latin check on every rule; either route failing the
/// budget is an error.
pub fn latin_hypercube_count(
    field: &FieldSpec,
    b: usize,
    k: usize,
    verify: bool,
    budget: &Budget,
) -> Result<LatinCount> {
    let formula = latin_hypercube_formula(field.q(), b, k)?;
    budget.check_big("Latin hypercube count", &formula)?;
    let mut paths = None;
    let mut exhaustive = None;
    if verify {
        if k >= 3 {
            let g = build_graph(field, b, budget)?;
            paths = Some(count_paths(&g, k - 3, budget)?);
            exhaustive = Some(BigUint::from(
                exhaustive_latin_rules(field, b, k, budget)?.len(),
            ));
        } else {
            exhaustive = Some(BigUint::from(exhaustive_latin_squares(field, b, budget)?));
        }
    }
    let agree = [&paths, &exhaustive]
        .iter()
        .all(|r| r.as_ref().is_none_or(|v| *v == formula));
    Ok(LatinCount {
        q: field.q(),
        b,
        k,
        formula,
        paths,
        exhaustive,
        agree,
    })
}
