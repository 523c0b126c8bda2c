//! Full-rank certificates that the generic degree-d hypersurface in P^n
//! contains a star configuration of type (n+2, 3).
//!
//! The containment holds iff the ideal I generated by the C(n+2, 3) star
//! products together with l = n+2 auxiliary forms
//!
//! ```text
//! Q_i = sum over pairs {a, b} avoiding i of L_a * L_b * M_{{i,a,b}}
//! ```
//!
//! fills the whole degree-d slice: I_d = S_d. Exhibiting ONE choice of
//! linear forms and multipliers M_sigma with full rank certifies the generic
//! statement (rank can only drop under specialization), so a certificate is
//! a reproducible witness: the forms, the multipliers, and the achieved
//! rank. A rank shortfall certifies nothing and triggers a redraw.
//!
//! Two independent routes compute the rank:
//!
//! - `MacaulayRank`: dim I_d against dim S_d = C(n+d, n), directly from the
//!   degree-d coefficient matrix;
//! - `EvaluationMatrix`: the C(n+2, 2)-square matrix of values of selected
//!   products L_a Q_b at the configuration points, full rank iff those
//!   products are independent modulo the star products. Grouping points and
//!   columns by their top index makes it block lower-triangular, with every
//!   diagonal block a scaled complete-graph adjacency matrix for the
//!   explicit multiplier choice below.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::classify::TupleNLRD;
use crate::error::{Error, Result};
use crate::field::{Field, FieldConfig, FieldKind, Fp, Rationals};
use crate::linalg::DenseMatrix;
use crate::membership::ideal_dim;
use crate::poly::{binomial, dim_degree_slice, parse_poly, random_form, MultiPoly};
use crate::star::{
    hilbert_function, random_general_forms, star_generators, star_points, LinearFormSet,
};

/// The multiplier forms M_sigma of a decomposition, one per r-subset of the
/// l linear forms, each of degree d - r (or zero).
#[derive(Clone, Debug)]
pub struct MultiplierSet<F: Field> {
    l: usize,
    r: usize,
    d: usize,
    entries: BTreeMap<Vec<usize>, MultiPoly<F>>,
}

impl<F: Field> MultiplierSet<F> {
    pub fn new(
        l: usize,
        r: usize,
        d: usize,
        entries: BTreeMap<Vec<usize>, MultiPoly<F>>,
    ) -> Result<Self> {
        if r == 0 || r > l || r > d {
            return Err(Error::InvalidTuple(format!("multiplier set needs 0 < r <= min(l, d), got l = {l}, r = {r}, d = {d}")));
        }
        if entries.len() != binomial(l, r) as usize {
            return Err(Error::InvalidTuple(format!(
                "expected {} multipliers, got {}",
                binomial(l, r),
                entries.len()
            )));
        }
        for (sigma, m) in &entries {
            let valid = sigma.len() == r
                && sigma.windows(2).all(|w| w[0] < w[1])
                && sigma.iter().all(|&i| i < l);
            if !valid {
                return Err(Error::InvalidTuple(format!("bad subset key {sigma:?}")));
            }
            if !m.is_zero() && m.degree() != d - r {
                return Err(Error::DimensionMismatch(format!(
                    "multiplier for {sigma:?} has degree {}, expected {}",
                    m.degree(),
                    d - r
                )));
            }
        }
        Ok(MultiplierSet { l, r, d, entries })
    }

    /// Independent uniform multipliers for every subset.
    pub fn random(forms: &LinearFormSet<F>, r: usize, d: usize, rng: &mut dyn RngCore) -> Result<Self> {
        let l = forms.len();
        let entries = (0..l)
            .combinations(r)
            .map(|sigma| {
                let m = random_form(forms.field(), forms.n() + 1, d - r, rng);
                (sigma, m)
            })
            .collect();
        MultiplierSet::new(l, r, d, entries)
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Degree d of the certified forms; each multiplier has degree d - r.
    pub fn target_degree(&self) -> usize {
        self.d
    }

    pub fn get(&self, sigma: &[usize]) -> Result<&MultiPoly<F>> {
        self.entries
            .get(sigma)
            .ok_or_else(|| Error::InvalidTuple(format!("no multiplier for subset {sigma:?}")))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &MultiPoly<F>)> {
        self.entries.iter()
    }
}

/// The explicit multiplier selection that makes the evaluation matrix
/// visibly full-rank, for the point case l = n+2, r = 3 (0-based indices;
/// subsets {i, j, k} with i < j < k):
///
/// - d = 3: every M_sigma = 1;
/// - d > 3 and k >= 3: M_sigma = L_j^(d-3), except M_sigma = L_k^(d-3) when
///   (i, j) = (0, k-1) - the one slot per level where the middle form
///   vanishes at the evaluation point that needs it;
/// - d > 3 and sigma = {0, 1, 2}: lambda^(d-3) for a linear form lambda
///   that vanishes at none of the three base points (see
///   [`avoiding_linear_form`]). This slot cannot be a power of any single
///   L_i: each of L_0, L_1, L_2 vanishes at one base point and every other
///   form vanishes at all three.
///
/// The selection is fully determined by the forms, and by the block
/// structure of the evaluation matrix it achieves full rank for every
/// general-position draw.
pub fn witness_multipliers<F: Field>(
    forms: &LinearFormSet<F>,
    d: usize,
) -> Result<MultiplierSet<F>> {
    let n = forms.n();
    let l = forms.len();
    if l != n + 2 || n < 2 {
        return Err(Error::InvalidTuple(format!(
            "witness multipliers need l = n + 2 and n >= 2, got n = {n}, l = {l}"
        )));
    }
    if d < 3 {
        return Err(Error::InvalidTuple(format!("witness multipliers need d >= 3, got d = {d}")));
    }
    let field = forms.field();
    let one = MultiPoly::constant(field.clone(), n + 1, field.one());
    let base_slot = if d == 3 { one.clone() } else { base_slot_multiplier(forms, d)? };
    let entries = (0..l)
        .combinations(3)
        .map(|sigma| {
            let (i, j, k) = (sigma[0], sigma[1], sigma[2]);
            let m = if d == 3 {
                one.clone()
            } else if k == 2 {
                base_slot.clone()
            } else if (i, j) == (0, k - 1) {
                forms.forms()[k].pow(d - 3)
            } else {
                forms.forms()[j].pow(d - 3)
            };
            (sigma, m)
        })
        .collect();
    MultiplierSet::new(l, 3, d, entries)
}

/// The multiplier for the base subset {0, 1, 2} when d > 3: a (d-3)rd power
/// of a linear form nonvanishing at the three base points (the points whose
/// labels sit inside {0, 1, 2}).
fn base_slot_multiplier<F: Field>(forms: &LinearFormSet<F>, d: usize) -> Result<MultiPoly<F>> {
    let base_points: Vec<_> = star_points(forms)?
        .into_iter()
        .filter(|p| p.label.iter().all(|&i| i < 3))
        .map(|p| p.coords)
        .collect();
    debug_assert_eq!(base_points.len(), 3);
    let lambda = avoiding_linear_form(forms.field(), &base_points)?;
    Ok(lambda.pow(d - 3))
}

/// A linear form vanishing at none of the given points, found by scanning
/// the moment family lambda_t = sum_j t^j x_j. Each nonzero point kills at
/// most n values of t (the coordinates are the coefficients of a nonzero
/// degree-n polynomial in t), so some t <= n * points + 1 always works.
pub fn avoiding_linear_form<F: Field>(
    field: &F,
    points: &[Vec<F::Elem>],
) -> Result<MultiPoly<F>> {
    let nvars = points
        .first()
        .map(|p| p.len())
        .ok_or_else(|| Error::InvalidTuple("no points to avoid".into()))?;
    let budget = (nvars - 1) * points.len() + 1;
    for t in 1..=budget as i64 {
        let tval = field.from_int(t);
        let mut coeffs = Vec::with_capacity(nvars);
        let mut power = field.one();
        for _ in 0..nvars {
            coeffs.push(power.clone());
            power = field.mul(&power, &tval);
        }
        let lambda = MultiPoly::linear(field.clone(), &coeffs);
        let misses_all = points
            .iter()
            .map(|p| lambda.eval(p))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(|v| !field.is_zero(v));
        if misses_all {
            return Ok(lambda);
        }
    }
    // Unreachable over the supported fields: the modulus far exceeds the
    // bad-value budget.
    Err(Error::Degenerate("no avoiding linear form in the moment family".into()))
}

/// The l forms Q_i of degree d - 1: Q_i collects, over all r-subsets sigma
/// containing i, the product of the other r-1 forms of sigma with M_sigma.
/// Built purely from products; no division happens anywhere.
pub fn tangent_forms<F: Field>(
    forms: &LinearFormSet<F>,
    m: &MultiplierSet<F>,
) -> Result<Vec<MultiPoly<F>>> {
    let l = forms.len();
    let r = m.r();
    let d = m.target_degree();
    if m.l() != l {
        return Err(Error::DimensionMismatch(format!(
            "multiplier set indexes {} forms, got {l}",
            m.l()
        )));
    }
    (0..l)
        .map(|i| {
            let mut q = MultiPoly::zero(forms.field().clone(), forms.n() + 1, d - 1);
            for beta in (0..l).filter(|&b| b != i).combinations(r - 1) {
                let mut sigma = beta.clone();
                sigma.push(i);
                sigma.sort_unstable();
                let m_sigma = m.get(&sigma)?;
                if m_sigma.is_zero() {
                    continue;
                }
                let mut prod = m_sigma.clone();
                for &b in &beta {
                    prod = prod.mul(&forms.forms()[b]);
                }
                q = q.add(&prod);
            }
            Ok(q)
        })
        .collect()
}

/// Generators of the tangent-space ideal: the C(l, r) star products followed
/// by the l forms Q_i. I_d = S_d for this ideal certifies the containment.
pub fn tangent_ideal_gens<F: Field>(
    forms: &LinearFormSet<F>,
    m: &MultiplierSet<F>,
) -> Result<Vec<MultiPoly<F>>> {
    let mut gens = star_generators(forms, m.r())?;
    gens.extend(tangent_forms(forms, m)?);
    Ok(gens)
}

/// The C(n+2, 2)-square evaluation matrix for l = n+2, r = 3.
///
/// Rows are the configuration points labeled by the pair {a, b} of
/// non-vanishing forms, grouped by level max{a, b} and lexicographic within
/// a level. Columns are the products L_2 Q_0, L_0 Q_1, L_1 Q_2, then for
/// each level k = 3..l-1 the products L_k Q_0, ..., L_k Q_{k-1} (0-based).
/// Rows of a level are zero in all higher-level columns, since those points
/// lie on the corresponding hyperplanes; full rank therefore reduces to the
/// diagonal blocks.
pub fn evaluation_matrix<F: Field>(
    forms: &LinearFormSet<F>,
    m: &MultiplierSet<F>,
) -> Result<DenseMatrix<F>> {
    let n = forms.n();
    let l = forms.len();
    if l != n + 2 || m.r() != 3 {
        return Err(Error::InvalidTuple(format!(
            "evaluation matrix needs l = n + 2 and r = 3, got n = {n}, l = {l}, r = {}",
            m.r()
        )));
    }
    let field = forms.field().clone();
    let q = tangent_forms(forms, m)?;
    let points = star_points(forms)?;

    let mut by_label: BTreeMap<(usize, usize), &crate::star::ProjectivePoint<F>> = BTreeMap::new();
    for p in &points {
        if p.label.len() != 2 {
            return Err(Error::Degenerate("expected pair labels".into()));
        }
        by_label.insert((p.label[0], p.label[1]), p);
    }

    let mut row_labels: Vec<(usize, usize)> = by_label.keys().copied().collect();
    row_labels.sort_by_key(|&(a, b)| (b, a));

    let mut col_labels: Vec<(usize, usize)> = vec![(2, 0), (0, 1), (1, 2)];
    for k in 3..l {
        for j in 0..k {
            col_labels.push((k, j));
        }
    }
    debug_assert_eq!(row_labels.len(), col_labels.len());

    let size = row_labels.len();
    let mut matrix = DenseMatrix::zeros(field.clone(), size, size);
    for (i, label) in row_labels.iter().enumerate() {
        let point = &by_label[label].coords;
        // Evaluation is multiplicative, so the product L_c * Q_j is
        // evaluated factor-wise.
        let q_values: Vec<F::Elem> =
            q.iter().map(|qi| qi.eval(point)).collect::<Result<_>>()?;
        for (jcol, &(c, j)) in col_labels.iter().enumerate() {
            let lv = forms.forms()[c].eval(point)?;
            matrix.set(i, jcol, field.mul(&lv, &q_values[j]));
        }
    }
    Ok(matrix)
}

/// How a certificate established its rank claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    MacaulayRank,
    EvaluationMatrix,
}

/// Outcome of a certification attempt. `Certified` is a positive proof for
/// the generic statement; `Inconclusive` proves nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertVerdict {
    Certified,
    Inconclusive,
}

/// The stored witness: the linear forms and the multipliers, as text in the
/// polynomial grammar. Subset keys are 1-based comma-joined indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(rename = "L")]
    pub forms: Vec<String>,
    #[serde(rename = "M")]
    pub multipliers: BTreeMap<String, String>,
}

/// A machine-checkable certification record. A `Certified` record can be
/// re-verified from the witness alone via [`Certificate::recheck`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub tuple: TupleNLRD,
    pub field: FieldConfig,
    pub seed: u64,
    pub strategy: Strategy,
    pub achieved_rank: usize,
    pub target_rank: usize,
    pub verdict: CertVerdict,
    pub retries_used: u32,
    pub witness: Witness,
}

impl Certificate {
    pub fn certified(&self) -> bool {
        self.verdict == CertVerdict::Certified
    }

    /// Rebuilds the strategy matrix from the stored witness and checks that
    /// it reproduces `achieved_rank`. Nothing but the record is consulted.
    pub fn recheck(&self) -> Result<bool> {
        self.field.validate()?;
        match self.field.kind {
            FieldKind::PrimeField => {
                let field = Fp::new(self.field.prime)?;
                recheck_in(&field, self)
            }
            FieldKind::Rational => recheck_in(&Rationals, self),
        }
    }
}

/// Parses a stored witness back into forms and multipliers over any field.
pub fn parse_witness<F: Field>(
    field: &F,
    tuple: &TupleNLRD,
    witness: &Witness,
) -> Result<(LinearFormSet<F>, MultiplierSet<F>)> {
    let nvars = tuple.n + 1;
    let forms: Vec<MultiPoly<F>> = witness
        .forms
        .iter()
        .map(|s| parse_poly(field, nvars, s))
        .collect::<Result<_>>()?;
    let forms = LinearFormSet::new(field.clone(), tuple.n, forms)?;
    let mut entries = BTreeMap::new();
    for (key, text) in &witness.multipliers {
        let sigma: Vec<usize> = key
            .split(',')
            .map(|part| {
                let v: usize = part
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad subset key {key:?}")))?;
                if v == 0 {
                    return Err(Error::Parse(format!("subset keys are 1-based: {key:?}")));
                }
                Ok(v - 1)
            })
            .collect::<Result<_>>()?;
        entries.insert(sigma, parse_poly(field, nvars, text)?);
    }
    let m = MultiplierSet::new(tuple.l, tuple.r, tuple.d, entries)?;
    Ok((forms, m))
}

fn recheck_in<F: Field>(field: &F, cert: &Certificate) -> Result<bool> {
    let (forms, m) = parse_witness(field, &cert.tuple, &cert.witness)?;
    let achieved = match cert.strategy {
        Strategy::MacaulayRank => {
            let gens = tangent_ideal_gens(&forms, &m)?;
            ideal_dim(field, cert.tuple.n + 1, &gens, cert.tuple.d)
        }
        Strategy::EvaluationMatrix => evaluation_matrix(&forms, &m)?.rank(),
    };
    Ok(achieved == cert.achieved_rank)
}

fn render_witness<F: Field>(forms: &LinearFormSet<F>, m: &MultiplierSet<F>) -> Witness {
    let forms_text = forms.forms().iter().map(|f| f.to_string()).collect();
    let multipliers = m
        .entries()
        .map(|(sigma, poly)| {
            let key = sigma.iter().map(|i| (i + 1).to_string()).join(",");
            (key, poly.to_string())
        })
        .collect();
    Witness { forms: forms_text, multipliers }
}

struct Attempt {
    achieved: usize,
    target: usize,
    conclusive: bool,
    witness: Witness,
}

/// One certification attempt: draws forms and multipliers from the rng and
/// measures the achieved rank against the target.
fn attempt<F: Field>(
    field: &F,
    n: usize,
    l: usize,
    r: usize,
    d: usize,
    strategy: Strategy,
    explicit_witness: bool,
    rng: &mut dyn RngCore,
) -> Result<Attempt> {
    let forms = random_general_forms(field, n, l, rng)?;
    let m = if explicit_witness {
        witness_multipliers(&forms, d)?
    } else {
        MultiplierSet::random(&forms, r, d, rng)?
    };
    let (achieved, target, conclusive) = match strategy {
        Strategy::MacaulayRank => {
            let target = dim_degree_slice(n + 1, d);
            let achieved = ideal_dim(field, n + 1, &tangent_ideal_gens(&forms, &m)?, d);
            (achieved, target, achieved == target)
        }
        Strategy::EvaluationMatrix => {
            let target = binomial(l, 2) as usize;
            let achieved = evaluation_matrix(&forms, &m)?.rank();
            // Full rank only certifies together with the expected quotient
            // dimension C(l, 2) in degree d. Verified general position
            // already forces that dimension, so this is a consistency
            // guard, not a live failure mode.
            let star_gens = star_generators(&forms, 3)?;
            let hf = hilbert_function(field, n + 1, &star_gens, d);
            (achieved, target, achieved == target && hf == target)
        }
    };
    Ok(Attempt { achieved, target, conclusive, witness: render_witness(&forms, &m) })
}

fn run_certification<F: Field>(
    field: &F,
    config: FieldConfig,
    tuple: TupleNLRD,
    strategy: Strategy,
    explicit_witness: bool,
    seed: u64,
    retries: u32,
) -> Result<Certificate> {
    let mut last: Option<Attempt> = None;
    for attempt_idx in 0..=retries {
        // Fresh, reproducible stream per attempt.
        let mut rng = ChaCha20Rng::seed_from_u64(seed.wrapping_add(attempt_idx as u64));
        let result = attempt(
            field,
            tuple.n,
            tuple.l,
            tuple.r,
            tuple.d,
            strategy,
            explicit_witness,
            &mut rng,
        )?;
        if result.conclusive {
            return Ok(Certificate {
                tuple,
                field: config,
                seed,
                strategy,
                achieved_rank: result.achieved,
                target_rank: result.target,
                verdict: CertVerdict::Certified,
                retries_used: attempt_idx,
                witness: result.witness,
            });
        }
        last = Some(result);
    }
    let result = last.expect("at least one attempt runs");
    Ok(Certificate {
        tuple,
        field: config,
        seed,
        strategy,
        achieved_rank: result.achieved,
        target_rank: result.target,
        verdict: CertVerdict::Inconclusive,
        retries_used: retries,
        witness: result.witness,
    })
}

/// Certifies the tuple (n, n+2, 3, d) with the explicit witness multipliers
/// and random general forms, redrawing on rank shortfall up to `retries`
/// times. Requires n >= 2 and d >= 3.
pub fn certify_tuple(
    config: &FieldConfig,
    n: usize,
    d: usize,
    strategy: Strategy,
    seed: u64,
    retries: u32,
) -> Result<Certificate> {
    if n < 2 || d < 3 {
        return Err(Error::InvalidTuple(format!(
            "certification covers n >= 2 and d >= 3 (r = 3 forces d >= 3), got n = {n}, d = {d}"
        )));
    }
    config.validate()?;
    let tuple = TupleNLRD::new(n, n + 2, 3, d);
    match config.kind {
        FieldKind::PrimeField => {
            let field = Fp::new(config.prime)?;
            run_certification(&field, *config, tuple, strategy, true, seed, retries)
        }
        FieldKind::Rational => {
            run_certification(&Rationals, *config, tuple, strategy, true, seed, retries)
        }
    }
}

/// Probes an arbitrary feasible tuple (n, l, r, d) with the same
/// tangent-space construction and fully random multipliers. `Certified` is
/// a valid positive certificate by the same specialization argument;
/// `Inconclusive` proves nothing, in particular in the open region
/// l - r + 1 < n.
pub fn experimental_certify(
    config: &FieldConfig,
    n: usize,
    l: usize,
    r: usize,
    d: usize,
    seed: u64,
    retries: u32,
) -> Result<Certificate> {
    if n < 1 || l < 1 || r < 1 || r > l || r > d {
        return Err(Error::InvalidTuple(format!(
            "need positive n, l and 0 < r <= min(l, d), got ({n}, {l}, {r}, {d})"
        )));
    }
    config.validate()?;
    let tuple = TupleNLRD::new(n, l, r, d);
    match config.kind {
        FieldKind::PrimeField => {
            let field = Fp::new(config.prime)?;
            run_certification(&field, *config, tuple, Strategy::MacaulayRank, false, seed, retries)
        }
        FieldKind::Rational => run_certification(
            &Rationals,
            *config,
            tuple,
            Strategy::MacaulayRank,
            false,
            seed,
            retries,
        ),
    }
}
