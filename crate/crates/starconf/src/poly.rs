//! Homogeneous multivariate polynomials over an exact field.
//!
//! Polynomials are sparse maps from monomials to nonzero coefficients and
//! carry a declared total degree, so the zero polynomial of any degree is
//! representable. The monomial order is graded lexicographic with x0 largest;
//! every matrix row/column layout in the crate inherits the order fixed here.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::field::{parse_coefficient, Field};

/// Exponent vector of length `nvars`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn constant(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars] }
    }

    /// The monomial x_i.
    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: degree first, then lexicographic on exponents,
    /// so within one degree x0^d is the largest monomial.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `d` in `nvars` variables, in descending
/// graded-lex order (x0^d first). The length is C(nvars-1+d, d).
pub fn monomial_basis(nvars: usize, d: usize) -> Vec<Monomial> {
    assert!(nvars >= 1, "need at least one variable");
    let mut out = Vec::with_capacity(binomial(nvars - 1 + d, d) as usize);
    let mut prefix = Vec::with_capacity(nvars);
    fill_basis(&mut prefix, nvars, d, &mut out);
    out
}

fn fill_basis(prefix: &mut Vec<u32>, nvars: usize, remaining: usize, out: &mut Vec<Monomial>) {
    if prefix.len() == nvars - 1 {
        let mut exps = prefix.clone();
        exps.push(remaining as u32);
        out.push(Monomial::new(exps));
        return;
    }
    for e in (0..=remaining).rev() {
        prefix.push(e as u32);
        fill_basis(prefix, nvars, remaining - e, out);
        prefix.pop();
    }
}

/// Binomial coefficient in u64; the grids in this crate stay far below
/// overflow but intermediate products are taken in u128 anyway.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Dimension of the degree-d slice of a polynomial ring in `nvars` variables.
pub fn dim_degree_slice(nvars: usize, d: usize) -> usize {
    binomial(nvars - 1 + d, d) as usize
}

/// A homogeneous polynomial of a declared degree.
#[derive(Clone, Debug)]
pub struct MultiPoly<F: Field> {
    field: F,
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(field: F, nvars: usize, degree: usize) -> Self {
        MultiPoly { field, nvars, degree, terms: BTreeMap::new() }
    }

    pub fn constant(field: F, nvars: usize, c: F::Elem) -> Self {
        let mut p = MultiPoly::zero(field, nvars, 0);
        if !p.field.is_zero(&c) {
            p.terms.insert(Monomial::constant(nvars), c);
        }
        p
    }

    pub fn from_terms<I>(field: F, nvars: usize, degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, F::Elem)>,
    {
        let mut p = MultiPoly::zero(field, nvars, degree);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// A linear form from its coefficient vector.
    pub fn linear(field: F, coeffs: &[F::Elem]) -> Self {
        let nvars = coeffs.len();
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (Monomial::variable(nvars, i), c.clone()));
        MultiPoly::from_terms(field, nvars, 1, terms)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Coefficients of the degree-1 part as a dense vector; the coefficient
    /// matrix of a set of linear forms is built from these.
    pub fn linear_coeffs(&self) -> Vec<F::Elem> {
        assert_eq!(self.degree, 1, "coefficient vector of a non-linear form");
        (0..self.nvars)
            .map(|i| self.coeff(&Monomial::variable(self.nvars, i)))
            .collect()
    }

    fn add_term(&mut self, m: Monomial, c: F::Elem) {
        debug_assert_eq!(m.nvars(), self.nvars);
        assert_eq!(
            m.degree(),
            self.degree,
            "term degree breaks the declared homogeneous degree"
        );
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let sum = self.field.add(&old, &c);
                if !self.field.is_zero(&sum) {
                    self.terms.insert(m, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding forms of different degrees");
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg(c);
        }
        out
    }

    pub fn scale(&self, k: &F::Elem) -> Self {
        let mut out = MultiPoly::zero(self.field.clone(), self.nvars, self.degree);
        if self.field.is_zero(k) {
            return out;
        }
        for (m, c) in self.terms.iter() {
            out.add_term(m.clone(), self.field.mul(c, k));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MultiPoly::zero(self.field.clone(), self.nvars, self.degree + other.degree);
        for (m1, c1) in self.terms.iter() {
            for (m2, c2) in other.terms.iter() {
                out.add_term(m1.mul(m2), self.field.mul(c1, c2));
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = MultiPoly::constant(self.field.clone(), self.nvars, self.field.one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Exact evaluation at an affine representative of a point.
    pub fn eval(&self, point: &[F::Elem]) -> Result<F::Elem> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "evaluating a {}-variable form at a {}-coordinate point",
                self.nvars,
                point.len()
            )));
        }
        let mut acc = self.field.zero();
        for (m, c) in self.terms.iter() {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    term = self.field.mul(&term, x);
                }
            }
            acc = self.field.add(&acc, &term);
        }
        Ok(acc)
    }
}

impl<F: Field> PartialEq for MultiPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<F: Field> fmt::Display for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Descending graded-lex, matching the basis order.
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let coeff = self.field.format(c);
            let (sign, coeff) = match coeff.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", coeff),
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            let factors: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { format!("x{v}") } else { format!("x{v}^{e}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{coeff}")?;
            } else if coeff == "1" {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", coeff, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// A dense random form of the given degree; deterministic per rng stream.
/// Zero draws are simply dropped from storage, so the result may be sparser
/// than the full basis.
pub fn random_form<F: Field>(
    field: &F,
    nvars: usize,
    degree: usize,
    rng: &mut dyn RngCore,
) -> MultiPoly<F> {
    let terms = monomial_basis(nvars, degree)
        .into_iter()
        .map(|m| (m, field.sample(rng)));
    MultiPoly::from_terms(field.clone(), nvars, degree, terms)
}

/// Parses the polynomial text grammar:
///
/// ```text
/// poly   = [sign] term (sign term)*        sign = "+" | "-"
/// term   = coeff | [coeff "*"] factor ("*" factor)*
/// factor = "x" index ["^" exp]
/// coeff  = integer | integer "/" integer
/// ```
///
/// Example: `3*x0^2*x1 - 1/2*x2^3`. All terms must have the same total
/// degree; `0` parses to the zero polynomial.
pub fn parse_poly<F: Field>(field: &F, nvars: usize, input: &str) -> Result<MultiPoly<F>> {
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }

    // Split into signed terms at top level.
    let bytes = compact.as_bytes();
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut start = 0usize;
    let mut neg = false;
    if bytes[0] == b'+' || bytes[0] == b'-' {
        neg = bytes[0] == b'-';
        start = 1;
    }
    let mut cur = String::new();
    let mut i = start;
    while i < bytes.len() {
        let b = bytes[i];
        if b == b'+' || b == b'-' {
            pieces.push((neg, std::mem::take(&mut cur)));
            neg = b == b'-';
        } else {
            cur.push(b as char);
        }
        i += 1;
    }
    pieces.push((neg, cur));

    let mut terms: Vec<(Monomial, F::Elem)> = Vec::new();
    let mut degree: Option<usize> = None;
    let mut all_zero = true;
    for (neg, piece) in pieces {
        if piece.is_empty() {
            return Err(Error::Parse("dangling sign".into()));
        }
        let (mono, coeff) = parse_term(field, nvars, &piece)?;
        if field.is_zero(&coeff) {
            continue;
        }
        all_zero = false;
        match degree {
            None => degree = Some(mono.degree()),
            Some(d) if d != mono.degree() => {
                return Err(Error::Parse(format!(
                    "mixed degrees {d} and {} in homogeneous input",
                    mono.degree()
                )))
            }
            _ => {}
        }
        let c = if neg { field.neg(&coeff) } else { coeff };
        terms.push((mono, c));
    }
    if all_zero {
        return Ok(MultiPoly::zero(field.clone(), nvars, 0));
    }
    Ok(MultiPoly::from_terms(field.clone(), nvars, degree.unwrap(), terms))
}

fn parse_term<F: Field>(field: &F, nvars: usize, term: &str) -> Result<(Monomial, F::Elem)> {
    let mut exps = vec![0u32; nvars];
    let mut coeff = field.one();
    for factor in term.split('*') {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in {term:?}")));
        }
        if let Some(rest) = factor.strip_prefix('x') {
            let (idx, exp) = match rest.split_once('^') {
                None => (rest, 1u32),
                Some((i, e)) => (
                    i,
                    e.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
                ),
            };
            let idx: usize = idx
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable index in {factor:?}")))?;
            if idx >= nvars {
                return Err(Error::Parse(format!(
                    "variable x{idx} out of range for {nvars} variables"
                )));
            }
            exps[idx] += exp;
        } else {
            coeff = field.mul(&coeff, &parse_coefficient(field, factor)?);
        }
    }
    Ok((Monomial::new(exps), coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rationals, DEFAULT_PRIME};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn fp() -> Fp {
        Fp::new(DEFAULT_PRIME).unwrap()
    }

    /// Independent count of degree-d monomials by brute-force enumeration
    /// over the full exponent box.
    fn count_by_enumeration(nvars: usize, d: usize) -> usize {
        let mut count = 0usize;
        let mut exps = vec![0usize; nvars];
        loop {
            if exps.iter().sum::<usize>() == d {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == nvars {
                    return count;
                }
                exps[i] += 1;
                if exps[i] > d {
                    exps[i] = 0;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }

    #[test]
    fn basis_two_vars_degree_three() {
        let basis = monomial_basis(2, 3);
        let exps: Vec<&[u32]> = basis.iter().map(|m| m.exponents()).collect();
        assert_eq!(exps, vec![&[3, 0][..], &[2, 1], &[1, 2], &[0, 3]]);
    }

    #[test]
    fn basis_degree_zero() {
        let basis = monomial_basis(3, 0);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], Monomial::constant(3));
    }

    #[test]
    fn basis_sizes_match_binomials_and_enumeration() {
        // dim S_3 in three variables is 10.
        assert_eq!(monomial_basis(3, 3).len(), 10);
        for nvars in 1..=6 {
            for d in 0..=12 {
                let n = monomial_basis(nvars, d).len();
                assert_eq!(n, binomial(nvars - 1 + d, d) as usize);
                if nvars <= 3 && d <= 6 {
                    assert_eq!(n, count_by_enumeration(nvars, d));
                }
            }
        }
    }

    #[test]
    fn basis_is_strictly_descending() {
        let basis = monomial_basis(4, 5);
        for w in basis.windows(2) {
            assert!(w[0] > w[1]);
        }
    }

    #[test]
    fn eval_simple_cases() {
        let f = fp();
        let p = parse_poly(&f, 2, "x0*x1").unwrap();
        assert_eq!(p.eval(&[1, 5]).unwrap(), 5);

        // Any positive-degree homogeneous form vanishes at the origin.
        let q = parse_poly(&f, 3, "7*x0^2*x1 + x2^3").unwrap();
        assert_eq!(q.eval(&[0, 0, 0]).unwrap(), 0);

        // x0 - x1 vanishes on its own zero locus representative.
        let l = parse_poly(&f, 3, "x0 - x1").unwrap();
        assert_eq!(l.eval(&[1, 1, 9]).unwrap(), 0);

        assert!(l.eval(&[1, 1]).is_err());
    }

    #[test]
    fn ring_axioms_on_random_samples() {
        let f = fp();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..100 {
            let p = random_form(&f, 3, 2, &mut rng);
            let q = random_form(&f, 3, 2, &mut rng);
            let r = random_form(&f, 3, 1, &mut rng);
            let lhs = p.add(&q).mul(&r);
            let rhs = p.mul(&r).add(&q.mul(&r));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn eval_is_a_ring_homomorphism() {
        let f = fp();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        for _ in 0..50 {
            let p = random_form(&f, 3, 2, &mut rng);
            let q = random_form(&f, 3, 3, &mut rng);
            let pt: Vec<u64> = (0..3).map(|_| f.sample(&mut rng)).collect();
            assert_eq!(
                p.mul(&q).eval(&pt).unwrap(),
                f.mul(&p.eval(&pt).unwrap(), &q.eval(&pt).unwrap())
            );
        }
    }

    #[test]
    fn random_form_is_deterministic_and_shaped() {
        let f = fp();
        let a = random_form(&f, 3, 1, &mut ChaCha20Rng::seed_from_u64(9));
        let b = random_form(&f, 3, 1, &mut ChaCha20Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert_eq!(a.degree(), 1);
        assert_eq!(a.nvars(), 3);
        assert!(a.num_terms() <= 3);
        assert!(!a.is_zero());
    }

    #[test]
    fn zero_coefficients_are_never_stored() {
        let f = fp();
        let p = parse_poly(&f, 2, "x0^2 - x0^2 + x0*x1").unwrap();
        assert_eq!(p.num_terms(), 1);
        let q = p.sub(&p);
        assert!(q.is_zero());
        assert!(q.terms().next().is_none());
    }

    #[test]
    fn parse_round_trip_matches_display() {
        let q = Rationals;
        let p = parse_poly(&q, 3, "3*x0^2*x1 - 1/2*x2^3").unwrap();
        let shown = p.to_string();
        let back = parse_poly(&q, 3, &shown).unwrap();
        assert_eq!(p, back);
        assert_eq!(shown, "3*x0^2*x1 - 1/2*x2^3");

        let f = fp();
        let w = random_form(&f, 4, 3, &mut ChaCha20Rng::seed_from_u64(2));
        let back = parse_poly(&f, 4, &w.to_string()).unwrap();
        assert_eq!(w, back);
    }

    #[test]
    fn parse_rejects_malformed_input() {
        let f = fp();
        assert!(parse_poly(&f, 2, "x5").is_err()); // variable out of range
        assert!(parse_poly(&f, 2, "x0 + x0*x1").is_err()); // mixed degrees
        assert!(parse_poly(&f, 2, "").is_err());
        assert!(parse_poly(&f, 2, "3*").is_err());
        assert!(parse_poly(&f, 2, "x0^").is_err());
    }

    #[test]
    fn parse_constants_and_zero() {
        let f = fp();
        let one = parse_poly(&f, 3, "1").unwrap();
        assert_eq!(one.degree(), 0);
        assert_eq!(one.num_terms(), 1);
        let zero = parse_poly(&f, 3, "0").unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.to_string(), "0");
    }
}
