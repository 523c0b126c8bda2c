//! Star configurations: general linear forms, the subset-product generators
//! of their ideals, the point sets they cut out, and Hilbert functions.
//!
//! For l general linear forms in n+1 variables, the configuration of type
//! (l, r) is defined by all products of r of the forms. When l - r + 1 = n it
//! is a set of C(l, n) distinct points, one for each n-subset of the forms;
//! when l - r + 1 > n it is empty.

use itertools::Itertools;
use rand::RngCore;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::DenseMatrix;
use crate::membership;
use crate::poly::{binomial, dim_degree_slice, MultiPoly};

/// How many resamples [`random_general_forms`] tolerates before giving up;
/// failures essentially only happen over tiny or misconfigured fields.
const MAX_SAMPLING_ATTEMPTS: usize = 100;

/// A set of l linear forms in n+1 variables in general position: every
/// subset of size min(l, n+1) is linearly independent.
#[derive(Clone, Debug)]
pub struct LinearFormSet<F: Field> {
    field: F,
    n: usize,
    forms: Vec<MultiPoly<F>>,
}

impl<F: Field> LinearFormSet<F> {
    /// Validates degrees, variable counts, and general position.
    pub fn new(field: F, n: usize, forms: Vec<MultiPoly<F>>) -> Result<Self> {
        if forms.is_empty() {
            return Err(Error::Degenerate("no linear forms given".into()));
        }
        for form in &forms {
            if form.degree() != 1 || form.is_zero() {
                return Err(Error::Degenerate("forms must be nonzero of degree 1".into()));
            }
            if form.nvars() != n + 1 {
                return Err(Error::DimensionMismatch(format!(
                    "form has {} variables, expected {}",
                    form.nvars(),
                    n + 1
                )));
            }
        }
        if !is_general_position(&field, n, &forms) {
            return Err(Error::Degenerate("forms are not in general position".into()));
        }
        Ok(LinearFormSet { field, n, forms })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Projective dimension n (forms live in n+1 variables).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[MultiPoly<F>] {
        &self.forms
    }
}

/// True iff every subset of size min(l, n+1) of the coefficient vectors has
/// full rank.
pub fn is_general_position<F: Field>(field: &F, n: usize, forms: &[MultiPoly<F>]) -> bool {
    let l = forms.len();
    let k = l.min(n + 1);
    if forms.iter().any(|f| f.is_zero() || f.degree() != 1) {
        return false;
    }
    let coeffs: Vec<Vec<F::Elem>> = forms.iter().map(|f| f.linear_coeffs()).collect();
    (0..l).combinations(k).all(|subset| {
        let rows: Vec<Vec<F::Elem>> = subset.iter().map(|&i| coeffs[i].clone()).collect();
        let m = DenseMatrix::from_rows(field.clone(), rows).expect("equal-length rows");
        m.rank() == k
    })
}

/// Draws l random linear forms and resamples until they pass the general
/// position check. Deterministic for a fixed rng stream.
pub fn random_general_forms<F: Field>(
    field: &F,
    n: usize,
    l: usize,
    rng: &mut dyn RngCore,
) -> Result<LinearFormSet<F>> {
    assert!(n >= 1 && l >= 1);
    for _ in 0..MAX_SAMPLING_ATTEMPTS {
        let forms: Vec<MultiPoly<F>> = (0..l)
            .map(|_| crate::poly::random_form(field, n + 1, 1, rng))
            .collect();
        if is_general_position(field, n, &forms) {
            return Ok(LinearFormSet { field: field.clone(), n, forms });
        }
    }
    Err(Error::SamplingExhausted(MAX_SAMPLING_ATTEMPTS))
}

/// The C(l, r) products L_sigma over r-subsets of the forms, in
/// lexicographic subset order.
pub fn star_generators<F: Field>(forms: &LinearFormSet<F>, r: usize) -> Result<Vec<MultiPoly<F>>> {
    let l = forms.len();
    if r == 0 || r > l {
        return Err(Error::InvalidTuple(format!("need 0 < r <= l, got r = {r}, l = {l}")));
    }
    Ok((0..l)
        .combinations(r)
        .map(|sigma| {
            let mut prod = MultiPoly::constant(
                forms.field().clone(),
                forms.n() + 1,
                forms.field().one(),
            );
            for i in sigma {
                prod = prod.mul(&forms.forms()[i]);
            }
            prod
        })
        .collect())
}

/// One point of a star configuration: the common zero of n of the forms,
/// labeled by the complement of that n-subset (the indices NOT vanishing
/// there). Coordinates are normalized so the first nonzero one equals one.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectivePoint<F: Field> {
    pub coords: Vec<F::Elem>,
    pub label: Vec<usize>,
}

/// The C(l, n) points cut out by all n-subsets of the forms, in
/// lexicographic subset order. Requires l >= n; errors if any intersection
/// is degenerate (which general position rules out).
pub fn star_points<F: Field>(forms: &LinearFormSet<F>) -> Result<Vec<ProjectivePoint<F>>> {
    let field = forms.field().clone();
    let n = forms.n();
    let l = forms.len();
    if l < n {
        return Err(Error::InvalidTuple(format!("points need l >= n, got l = {l}, n = {n}")));
    }
    let coeffs: Vec<Vec<F::Elem>> = forms.forms().iter().map(|f| f.linear_coeffs()).collect();
    (0..l)
        .combinations(n)
        .map(|tau| {
            let rows: Vec<Vec<F::Elem>> = tau.iter().map(|&i| coeffs[i].clone()).collect();
            let m = DenseMatrix::from_rows(field.clone(), rows)?;
            let kernel = m
                .kernel_vector()
                .ok_or_else(|| Error::Degenerate("hyperplanes fail to meet in a point".into()))?;
            let first_nonzero = kernel
                .iter()
                .position(|x| !field.is_zero(x))
                .ok_or_else(|| Error::Degenerate("zero kernel vector".into()))?;
            let inv = field.inv(&kernel[first_nonzero]).expect("nonzero entry");
            let coords: Vec<F::Elem> = kernel.iter().map(|x| field.mul(x, &inv)).collect();
            let label: Vec<usize> = (0..l).filter(|i| !tau.contains(i)).collect();
            Ok(ProjectivePoint { coords, label })
        })
        .collect()
}

/// A star configuration of type (l, r) with its derived data. Points are
/// populated exactly in the finite case l - r + 1 = n.
#[derive(Clone, Debug)]
pub struct StarConfiguration<F: Field> {
    pub forms: LinearFormSet<F>,
    pub r: usize,
    pub generators: Vec<MultiPoly<F>>,
    pub points: Vec<ProjectivePoint<F>>,
}

impl<F: Field> StarConfiguration<F> {
    pub fn new(forms: LinearFormSet<F>, r: usize) -> Result<Self> {
        let generators = star_generators(&forms, r)?;
        let points = if forms.len() + 1 == forms.n() + r {
            star_points(&forms)?
        } else {
            Vec::new()
        };
        Ok(StarConfiguration { forms, r, generators, points })
    }
}

/// Projective dimension of the configuration of type (l, r) in P^n:
/// `None` when l - r + 1 > n (the configuration is empty), otherwise
/// n - (l - r + 1).
pub fn star_dimension(n: usize, l: usize, r: usize) -> Option<usize> {
    assert!(r >= 1 && r <= l, "need 0 < r <= l");
    let codim = l - r + 1;
    if codim > n {
        None
    } else {
        Some(n - codim)
    }
}

/// Hilbert function of C(l, n) generic points: min(C(n+t, n), C(l, n)).
/// Star-configuration points of type (l, l-n+1) attain it.
pub fn expected_hf(n: usize, l: usize, t: usize) -> u64 {
    binomial(n + t, n).min(binomial(l, n))
}

/// Hilbert function of S/I at degree t for the ideal generated by `gens`:
/// dim S_t minus the rank of the degree-t coefficient matrix.
pub fn hilbert_function<F: Field>(
    field: &F,
    nvars: usize,
    gens: &[MultiPoly<F>],
    t: usize,
) -> usize {
    dim_degree_slice(nvars, t) - membership::ideal_dim(field, nvars, gens, t)
}
