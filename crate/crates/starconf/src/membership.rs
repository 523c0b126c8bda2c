//! Degree slices of ideals as coefficient matrices, membership tests, and
//! explicit decompositions F = sum L_sigma M_sigma.
//!
//! The degree-d slice of an ideal (g_1, ..., g_k) is spanned by the products
//! g_i * m over monomials m of degree d - deg g_i. Stacking the coefficient
//! vectors of those products as columns gives a matrix whose rank is
//! dim I_d and whose column space answers membership questions by a linear
//! solve; no normal forms are needed anywhere.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::DenseMatrix;
use crate::poly::{monomial_basis, Monomial, MultiPoly};
use crate::star::{star_generators, LinearFormSet};

/// Coefficient matrix of the degree-d slice of an ideal.
///
/// Rows are indexed by the degree-d monomial basis (descending graded-lex);
/// columns by (generator, multiplier monomial) pairs, generators in the given
/// order and multiplier monomials in basis order. Generators of degree > d
/// contribute nothing below their generation degree and are skipped.
#[derive(Clone, Debug)]
pub struct MacaulayMatrix<F: Field> {
    pub degree: usize,
    pub matrix: DenseMatrix<F>,
    /// Per column: index of the generator and the monomial it was shifted by.
    pub provenance: Vec<(usize, Monomial)>,
}

pub fn macaulay_matrix<F: Field>(
    field: &F,
    nvars: usize,
    gens: &[MultiPoly<F>],
    d: usize,
) -> MacaulayMatrix<F> {
    let basis = monomial_basis(nvars, d);
    let row_index: HashMap<&Monomial, usize> =
        basis.iter().enumerate().map(|(i, m)| (m, i)).collect();

    let mut provenance = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        assert_eq!(g.nvars(), nvars, "generator variable count mismatch");
        if g.degree() > d || g.is_zero() {
            continue;
        }
        for m in monomial_basis(nvars, d - g.degree()) {
            provenance.push((gi, m));
        }
    }

    let rows = basis.len();
    let cols = provenance.len();
    let mut matrix = DenseMatrix::zeros(field.clone(), rows, cols);
    for (col, (gi, mult)) in provenance.iter().enumerate() {
        for (mono, coeff) in gens[*gi].terms() {
            let row = row_index[&mono.mul(mult)];
            matrix.set(row, col, coeff.clone());
        }
    }
    MacaulayMatrix { degree: d, matrix, provenance }
}

/// dim I_d: the rank of the degree-d coefficient matrix.
pub fn ideal_dim<F: Field>(field: &F, nvars: usize, gens: &[MultiPoly<F>], d: usize) -> usize {
    macaulay_matrix(field, nvars, gens, d).matrix.rank()
}

/// A membership witness: one multiplier per generator with
/// `sum gens[i] * multipliers[i] = F` exactly.
#[derive(Clone, Debug)]
pub struct MembershipWitness<F: Field> {
    pub multipliers: Vec<MultiPoly<F>>,
}

impl<F: Field> MembershipWitness<F> {
    /// Reassembles the sum of gens times multipliers, index by index.
    pub fn reconstruct(&self, gens: &[MultiPoly<F>], nvars: usize, d: usize) -> MultiPoly<F> {
        let field = self.multipliers[0].field().clone();
        let mut acc = MultiPoly::zero(field, nvars, d);
        for (g, m) in gens.iter().zip(self.multipliers.iter()) {
            if !m.is_zero() {
                acc = acc.add(&g.mul(m));
            }
        }
        acc
    }
}

/// Tests F in I_d by solving against the degree-d slice; on success returns
/// per-generator multipliers assembling F. Free variables are zeroed in the
/// solve, so the witness is deterministic despite syzygies.
pub fn ideal_contains<F: Field>(
    field: &F,
    nvars: usize,
    gens: &[MultiPoly<F>],
    f: &MultiPoly<F>,
) -> Result<Option<MembershipWitness<F>>> {
    if f.nvars() != nvars {
        return Err(Error::DimensionMismatch(format!(
            "target has {} variables, generators have {}",
            f.nvars(),
            nvars
        )));
    }
    let d = f.degree();
    let mac = macaulay_matrix(field, nvars, gens, d);
    let basis = monomial_basis(nvars, d);
    let rhs: Vec<F::Elem> = basis.iter().map(|m| f.coeff(m)).collect();
    let Some(solution) = mac.matrix.solve(&rhs)? else {
        return Ok(None);
    };

    let mut multipliers: Vec<MultiPoly<F>> = gens
        .iter()
        .map(|g| MultiPoly::zero(field.clone(), nvars, d.saturating_sub(g.degree())))
        .collect();
    for ((gi, mono), x) in mac.provenance.iter().zip(solution.iter()) {
        if field.is_zero(x) {
            continue;
        }
        let term = MultiPoly::from_terms(
            field.clone(),
            nvars,
            mono.degree(),
            [(mono.clone(), x.clone())],
        );
        multipliers[*gi] = multipliers[*gi].add(&term);
    }
    Ok(Some(MembershipWitness { multipliers }))
}

/// A decomposition F = sum over r-subsets sigma of L_sigma M_sigma.
#[derive(Clone, Debug)]
pub struct Decomposition<F: Field> {
    pub r: usize,
    /// sigma (sorted indices into the form set) -> multiplier of degree d - r.
    pub multipliers: BTreeMap<Vec<usize>, MultiPoly<F>>,
}

impl<F: Field> Decomposition<F> {
    /// Reassembles sum L_sigma M_sigma from the stored multipliers.
    pub fn reconstruct(&self, forms: &LinearFormSet<F>, d: usize) -> Result<MultiPoly<F>> {
        let field = forms.field().clone();
        let mut acc = MultiPoly::zero(field.clone(), forms.n() + 1, d);
        for (sigma, m) in &self.multipliers {
            if m.is_zero() {
                continue;
            }
            let mut prod = m.clone();
            for &i in sigma {
                prod = prod.mul(&forms.forms()[i]);
            }
            acc = acc.add(&prod);
        }
        Ok(acc)
    }
}

/// Finds multipliers M_sigma of degree d - r with F = sum L_sigma M_sigma,
/// or reports that F is not in the ideal of the given forms.
///
/// Errors distinguish the degree obstruction r > deg F from genuine
/// non-membership.
pub fn decompose<F: Field>(
    f: &MultiPoly<F>,
    forms: &LinearFormSet<F>,
    r: usize,
) -> Result<Decomposition<F>> {
    let d = f.degree();
    if r > d {
        return Err(Error::DegreeObstruction { r, d });
    }
    let gens = star_generators(forms, r)?;
    let nvars = forms.n() + 1;
    let witness = ideal_contains(forms.field(), nvars, &gens, f)?.ok_or(Error::NotDecomposable)?;
    let subsets: Vec<Vec<usize>> = (0..forms.len()).combinations(r).collect();
    let multipliers = subsets.into_iter().zip(witness.multipliers).collect();
    Ok(Decomposition { r, multipliers })
}
