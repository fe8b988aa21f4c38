//! Small multivariate polynomials over the ambient field and an exact
//! solver for zero-dimensional systems of low degree.
//!
//! The solver drives the group-like search: it branches on substitutions,
//! monomial contents, and univariate roots, and falls back to pairwise
//! resultants. It either returns the complete finite solution set or
//! reports that it cannot finish — it never samples or approximates.

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Rational, Scalar};
use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Exponent-vector keyed polynomial; keys all share `nvars` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = MultiPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut exps = vec![0u32; nvars];
        exps[v] = 1;
        let mut p = MultiPoly::zero(nvars);
        p.add_term(exps, Scalar::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(Scalar::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            let dead: Vec<Vec<u32>> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.neg());
        }
        out
    }

    pub fn mul(&self, rhs: &MultiPoly, field: FieldSpec) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.mul(c2, field));
            }
        }
        out
    }

    pub fn scale(&self, s: &Scalar, field: FieldSpec) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.mul(s, field));
        }
        out
    }

    pub fn vars_used(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for e in self.terms.keys() {
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    s.insert(v);
                }
            }
        }
        s
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.vars_used().is_empty() {
            Some(
                self.terms
                    .get(&vec![0; self.nvars])
                    .cloned()
                    .unwrap_or_else(Scalar::zero),
            )
        } else {
            None
        }
    }

    /// Substitute `v := value` (a constant).
    pub fn substitute_value(&self, v: usize, value: &Scalar, field: FieldSpec) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[v];
            let mut coeff = c.clone();
            for _ in 0..k {
                coeff = coeff.mul(value, field);
            }
            let mut ne = e.clone();
            ne[v] = 0;
            out.add_term(ne, coeff);
        }
        out
    }

    /// Substitute `v := poly` (the polynomial must not use `v`).
    pub fn substitute_poly(&self, v: usize, poly: &MultiPoly, field: FieldSpec) -> MultiPoly {
        debug_assert!(!poly.vars_used().contains(&v));
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[v];
            let mut ne = e.clone();
            ne[v] = 0;
            let mut term = MultiPoly::zero(self.nvars);
            term.add_term(ne, c.clone());
            for _ in 0..k {
                term = term.mul(poly, field);
            }
            out = out.add(&term);
        }
        out
    }

    pub fn eval(&self, assignment: &BTreeMap<usize, Scalar>, field: FieldSpec) -> Scalar {
        let mut total = Scalar::zero();
        for (e, c) in &self.terms {
            let mut val = c.clone();
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    let x = assignment.get(&v).expect("assignment covers all vars");
                    for _ in 0..k {
                        val = val.mul(x, field);
                    }
                }
            }
            total = total.add(&val);
        }
        total
    }

    /// Coefficients `[c0, c1, …]` when the polynomial uses only `v`.
    fn univariate_coeffs(&self, v: usize) -> Vec<Scalar> {
        let deg = self.degree_in(v) as usize;
        let mut coeffs = vec![Scalar::zero(); deg + 1];
        for (e, c) in &self.terms {
            coeffs[e[v] as usize] = coeffs[e[v] as usize].add(c);
        }
        coeffs
    }

    /// Coefficients in `v` whose entries are polynomials in the other vars.
    fn coeffs_in(&self, v: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![MultiPoly::zero(self.nvars); deg + 1];
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let k = ne[v] as usize;
            ne[v] = 0;
            out[k].add_term(ne, c.clone());
        }
        out
    }

    /// `v^k` dividing every term, with the largest such `k`.
    fn content_power(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).min().unwrap_or(0)
    }

    fn divide_content(&self, v: usize, k: u32) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[v] -= k;
            out.terms.insert(ne, c.clone());
        }
        out
    }
}

/// All roots of the univariate polynomial (coefficients low-to-high) that
/// lie in the field. Complete for degree ≤ 2, for higher degrees complete
/// whenever rational-root peeling reduces to degree ≤ 2 (plus the
/// even-powers-only case).
pub fn univariate_roots(coeffs: &[Scalar], field: FieldSpec) -> Result<Vec<Scalar>> {
    let mut c: Vec<Scalar> = coeffs.to_vec();
    while c.last().is_some_and(|v| v.is_zero()) {
        c.pop();
    }
    match c.len() {
        0 => Err(Error::SolverIncomplete(
            "zero polynomial has every root".into(),
        )),
        1 => Ok(vec![]),
        2 => {
            let r = c[0].neg().div(&c[1], field)?;
            Ok(vec![r])
        }
        3 => {
            // (-b ± sqrt(b^2 - 4ac)) / 2a
            let (a, b, k) = (&c[2], &c[1], &c[0]);
            let four_ac = a.mul(k, field).mul(&Scalar::from_int(4), field);
            let disc = b.mul(b, field).sub(&four_ac);
            let Some(s) = disc.sqrt_in(field) else {
                return Ok(vec![]);
            };
            let two_a_inv = a.mul(&Scalar::from_int(2), field).inv(field)?;
            let r1 = b.neg().add(&s).mul(&two_a_inv, field);
            let r2 = b.neg().sub(&s).mul(&two_a_inv, field);
            let mut out = vec![r1, r2];
            out.sort();
            out.dedup();
            Ok(out)
        }
        _ => higher_degree_roots(&c, field),
    }
}

fn higher_degree_roots(c: &[Scalar], field: FieldSpec) -> Result<Vec<Scalar>> {
    let mut roots = Vec::new();
    let mut cur = c.to_vec();
    // x = 0 factors
    while cur.first().is_some_and(|v| v.is_zero()) {
        roots.push(Scalar::zero());
        cur.remove(0);
    }
    // even-powers-only polynomials solve through y = x^2
    if cur.len() > 3 && cur.iter().skip(1).step_by(2).all(|v| v.is_zero()) {
        let half: Vec<Scalar> = cur.iter().step_by(2).cloned().collect();
        for y in univariate_roots(&half, field)? {
            if let Some(x) = y.sqrt_in(field) {
                roots.push(x.clone());
                roots.push(x.neg());
            }
        }
        roots.sort();
        roots.dedup();
        return Ok(roots);
    }
    // peel rational roots while the coefficients are rational
    while cur.len() > 3 {
        if !cur.iter().all(|v| v.is_rational()) {
            return Err(Error::SolverIncomplete(format!(
                "degree-{} polynomial over the extension",
                cur.len() - 1
            )));
        }
        match first_rational_root(&cur)? {
            Some(r) => {
                roots.push(r.clone());
                cur = deflate(&cur, &r, field);
            }
            None => {
                // no rational roots left: any remaining field root would sit
                // inside a rational quadratic factor
                return Err(Error::SolverIncomplete(format!(
                    "degree-{} remainder without rational roots",
                    cur.len() - 1
                )));
            }
        }
    }
    roots.extend(univariate_roots(&cur, field)?);
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// Rational-root search on a rational-coefficient polynomial.
fn first_rational_root(c: &[Scalar]) -> Result<Option<Scalar>> {
    // clear denominators
    let mut lcm = BigInt::one();
    for v in c {
        lcm = lcm.lcm(v.rational_part().denom());
    }
    let ints: Vec<BigInt> = c
        .iter()
        .map(|v| (v.rational_part() * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let a0 = ints.first().unwrap().clone();
    let an = ints.last().unwrap().clone();
    debug_assert!(!an.is_zero());
    if a0.is_zero() {
        return Ok(Some(Scalar::zero()));
    }
    let ps = small_divisors(&a0)?;
    let qs = small_divisors(&an)?;
    for p in &ps {
        for q in &qs {
            for sign in [1i64, -1] {
                let cand = Scalar::from_parts(
                    Rational::new(p * BigInt::from(sign), q.clone()),
                    Rational::zero(),
                );
                let val = eval_univariate(c, &cand, FieldSpec::RATIONAL);
                if val.is_zero() {
                    return Ok(Some(cand));
                }
            }
        }
    }
    Ok(None)
}

fn eval_univariate(c: &[Scalar], x: &Scalar, field: FieldSpec) -> Scalar {
    let mut acc = Scalar::zero();
    for v in c.iter().rev() {
        acc = acc.mul(x, field).add(v);
    }
    acc
}

fn deflate(c: &[Scalar], root: &Scalar, field: FieldSpec) -> Vec<Scalar> {
    // synthetic division by (x - root)
    let n = c.len();
    let mut out = vec![Scalar::zero(); n - 1];
    let mut carry = Scalar::zero();
    for i in (1..n).rev() {
        carry = c[i].add(&carry.mul(root, field));
        out[i - 1] = carry.clone();
    }
    out
}

fn small_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs();
    let limit: u64 = match u64::try_from(&n) {
        Ok(v) if v <= 1_000_000 => v,
        _ => {
            return Err(Error::SolverIncomplete(
                "coefficient too large for divisor enumeration".into(),
            ))
        }
    };
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= limit {
        if limit.is_multiple_of(d) {
            out.push(BigInt::from(d));
            out.push(BigInt::from(limit / d));
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Resultant of `p` and `q` with respect to `v` (Sylvester determinant with
/// polynomial entries).
fn resultant(p: &MultiPoly, q: &MultiPoly, v: usize, field: FieldSpec) -> MultiPoly {
    let a = p.coeffs_in(v);
    let b = q.coeffs_in(v);
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let nvars = p.nvars;
    let zero = MultiPoly::zero(nvars);
    let mut mat = vec![vec![zero.clone(); size]; size];
    for row in 0..n {
        for (k, c) in a.iter().enumerate() {
            mat[row][row + (m - k)] = c.clone();
        }
    }
    for row in 0..m {
        for (k, c) in b.iter().enumerate() {
            mat[n + row][row + (n - k)] = c.clone();
        }
    }
    poly_det(&mat, field)
}

fn poly_det(m: &[Vec<MultiPoly>], field: FieldSpec) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::constant(0, Scalar::one());
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let nvars = m[0][0].nvars;
    let mut det = MultiPoly::zero(nvars);
    for (j, top) in m[0].iter().enumerate() {
        if top.is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let mut term = top.mul(&poly_det(&minor, field), field);
        if j % 2 == 1 {
            term = term.scale(&Scalar::from_int(-1), field);
        }
        det = det.add(&term);
    }
    det
}

pub type Assignment = BTreeMap<usize, Scalar>;

/// Complete solution set of a zero-dimensional polynomial system.
pub fn solve_system(polys: &[MultiPoly], nvars: usize, field: FieldSpec) -> Result<Vec<Assignment>> {
    let active: BTreeSet<usize> = (0..nvars).collect();
    let mut sols = solve_rec(polys.to_vec(), active, field, 0)?;
    sols.sort_by(|a, b| {
        let av: Vec<&Scalar> = a.values().collect();
        let bv: Vec<&Scalar> = b.values().collect();
        av.cmp(&bv)
    });
    sols.dedup();
    Ok(sols)
}

const MAX_DEPTH: usize = 64;

fn solve_rec(
    polys: Vec<MultiPoly>,
    active: BTreeSet<usize>,
    field: FieldSpec,
    depth: usize,
) -> Result<Vec<Assignment>> {
    if depth > MAX_DEPTH {
        return Err(Error::SolverIncomplete("branch depth exceeded".into()));
    }
    let mut system: Vec<MultiPoly> = Vec::new();
    for p in polys {
        if let Some(c) = p.constant_value() {
            if !c.is_zero() {
                return Ok(vec![]);
            }
            continue;
        }
        system.push(p);
    }
    system.sort_by_key(|p| p.terms.len());
    system.dedup();
    if system.is_empty() {
        if active.is_empty() {
            return Ok(vec![BTreeMap::new()]);
        }
        return Err(Error::SolverIncomplete(format!(
            "{} free variables remain",
            active.len()
        )));
    }

    // linear substitution: some poly is degree 1 in v with constant
    // coefficient and v-free remainder
    for (pi, p) in system.iter().enumerate() {
        for &v in &p.vars_used() {
            if p.degree_in(v) != 1 {
                continue;
            }
            let cs = p.coeffs_in(v);
            let Some(c1) = cs[1].constant_value() else {
                continue;
            };
            if c1.is_zero() {
                continue;
            }
            // v = -cs[0] / c1
            let expr = cs[0].scale(&c1.inv(field)?.neg(), field);
            let rest: Vec<MultiPoly> = system
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != pi)
                .map(|(_, q)| q.substitute_poly(v, &expr, field))
                .collect();
            let mut sub_active = active.clone();
            sub_active.remove(&v);
            let sols = solve_rec(rest, sub_active, field, depth + 1)?;
            let mut out = Vec::new();
            for mut s in sols {
                let val = expr.eval(&s, field);
                s.insert(v, val);
                out.push(s);
            }
            return Ok(out);
        }
    }

    // univariate root branching
    for (pi, p) in system.iter().enumerate() {
        let used = p.vars_used();
        if used.len() != 1 {
            continue;
        }
        let v = *used.iter().next().unwrap();
        let coeffs = p.univariate_coeffs(v);
        let roots = univariate_roots(&coeffs, field)?;
        let mut out = Vec::new();
        for r in roots {
            let rest: Vec<MultiPoly> = system
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != pi)
                .map(|(_, q)| q.substitute_value(v, &r, field))
                .collect();
            let mut sub_active = active.clone();
            sub_active.remove(&v);
            for mut s in solve_rec(rest, sub_active, field, depth + 1)? {
                s.insert(v, r.clone());
                out.push(s);
            }
        }
        return Ok(out);
    }

    // content branching: p = v^k * p'
    for (pi, p) in system.iter().enumerate() {
        for &v in &p.vars_used() {
            let k = p.content_power(v);
            if k == 0 {
                continue;
            }
            let mut out = Vec::new();
            // branch v = 0
            {
                let rest: Vec<MultiPoly> = system
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != pi)
                    .map(|(_, q)| q.substitute_value(v, &Scalar::zero(), field))
                    .collect();
                let mut sub_active = active.clone();
                sub_active.remove(&v);
                for mut s in solve_rec(rest, sub_active, field, depth + 1)? {
                    s.insert(v, Scalar::zero());
                    out.push(s);
                }
            }
            // branch p' = 0
            {
                let mut rest = system.clone();
                rest[pi] = p.divide_content(v, k);
                for s in solve_rec(rest, active.clone(), field, depth + 1)? {
                    out.push(s);
                }
            }
            out.sort_by(|a, b| {
                let av: Vec<&Scalar> = a.values().collect();
                let bv: Vec<&Scalar> = b.values().collect();
                av.cmp(&bv)
            });
            out.dedup();
            return Ok(out);
        }
    }

    // resultant elimination as a last resort
    if system.len() >= 2 {
        for v in active.iter().copied() {
            let using: Vec<usize> = (0..system.len())
                .filter(|&i| system[i].vars_used().contains(&v))
                .collect();
            if using.len() < 2 {
                continue;
            }
            let (i, j) = (using[0], using[1]);
            let res = resultant(&system[i], &system[j], v, field);
            if res.is_zero() || res.vars_used().contains(&v) {
                continue;
            }
            if system.contains(&res) {
                continue;
            }
            let mut augmented = system.clone();
            augmented.push(res);
            return solve_rec(augmented, active, field, depth + 1);
        }
    }

    Err(Error::SolverIncomplete(format!(
        "stuck with {} equations in {} variables",
        system.len(),
        active.len()
    )))
}
