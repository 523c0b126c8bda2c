//! Built-in invariant suites behind the `selftest` CLI command.
//!
//! Each suite counts individual assertions instead of aborting, so a run
//! always reports a full pass/fail tally per suite.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::certify::{certify_tuple, Strategy};
use crate::classify::{classify, dimension_bound, Verdict};
use crate::error::Result;
use crate::field::{Field, FieldConfig, FieldKind, Fp, Rationals};
use crate::linalg::{complete_graph_adjacency, DenseMatrix};
use crate::membership::{decompose, ideal_contains, ideal_dim};
use crate::poly::{binomial, dim_degree_slice, monomial_basis, random_form, MultiPoly};
use crate::star::{expected_hf, hilbert_function, random_general_forms, star_generators, star_points};

/// Tally of one suite.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str) -> Self {
        CheckResult { name, passed: 0, failed: 0, detail: String::new() }
    }

    fn check(&mut self, ok: bool, what: impl Fn() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.detail.len() < 400 {
                if !self.detail.is_empty() {
                    self.detail.push_str("; ");
                }
                self.detail.push_str(&what());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Runs every suite over the configured field.
pub fn run(config: &FieldConfig, seed: u64) -> Result<Vec<CheckResult>> {
    config.validate()?;
    match config.kind {
        FieldKind::PrimeField => {
            let field = Fp::new(config.prime)?;
            run_in(&field, config, seed)
        }
        FieldKind::Rational => run_in(&Rationals, config, seed),
    }
}

fn run_in<F: Field>(field: &F, config: &FieldConfig, seed: u64) -> Result<Vec<CheckResult>> {
    Ok(vec![
        ring_axioms(field, seed),
        basis_counts(),
        adjacency_determinants(field),
        rank_transpose(field, seed),
        star_geometry(field, seed),
        hilbert_functions(field, seed),
        full_slice_membership(field, seed),
        decompose_round_trip(field, seed),
        certification(config, seed),
        classification(),
    ])
}

fn ring_axioms<F: Field>(field: &F, seed: u64) -> CheckResult {
    let mut out = CheckResult::new("ring-axioms");
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let p = random_form(field, 3, 2, &mut rng);
        let q = random_form(field, 3, 2, &mut rng);
        let r = random_form(field, 3, 1, &mut rng);
        out.check(p.add(&q).mul(&r) == p.mul(&r).add(&q.mul(&r)), || "distributivity".into());
    }
    for _ in 0..50 {
        let p = random_form(field, 3, 2, &mut rng);
        let q = random_form(field, 3, 2, &mut rng);
        let pt: Vec<F::Elem> = (0..3).map(|_| field.sample(&mut rng)).collect();
        let prod = p.mul(&q).eval(&pt).unwrap();
        let sep = field.mul(&p.eval(&pt).unwrap(), &q.eval(&pt).unwrap());
        out.check(prod == sep, || "evaluation homomorphism".into());
    }
    out
}

fn basis_counts() -> CheckResult {
    let mut out = CheckResult::new("monomial-basis");
    for nvars in 1..=6 {
        for d in 0..=12 {
            let got = monomial_basis(nvars, d).len() as u64;
            let want = binomial(nvars - 1 + d, d);
            out.check(got == want, || format!("|basis({nvars}, {d})| = {got}, want {want}"));
        }
    }
    out
}

fn adjacency_determinants<F: Field>(field: &F) -> CheckResult {
    let mut out = CheckResult::new("adjacency-determinants");
    for r in 2..=12usize {
        let a = complete_graph_adjacency(field.clone(), r).unwrap();
        let sign = if (r - 1) % 2 == 0 { 1i64 } else { -1 };
        let want = field.from_int(sign * (r as i64 - 1));
        out.check(a.det().unwrap() == want, || format!("det A_{r}"));
        out.check(a.rank() == r, || format!("rank A_{r}"));
    }
    out
}

fn rank_transpose<F: Field>(field: &F, seed: u64) -> CheckResult {
    let mut out = CheckResult::new("rank-transpose");
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x9e37);
    for _ in 0..10 {
        let mut m = DenseMatrix::zeros(field.clone(), 6, 9);
        for i in 0..6 {
            for j in 0..9 {
                m.set(i, j, field.sample(&mut rng));
            }
        }
        out.check(m.rank() == m.transpose().rank(), || "rank(M) = rank(M^T)".into());
    }
    out
}

fn star_geometry<F: Field>(field: &F, seed: u64) -> CheckResult {
    let mut out = CheckResult::new("star-geometry");
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x51a7);
    for (n, l) in [(2usize, 4usize), (2, 5), (3, 5)] {
        let r = l - n + 1;
        let forms = match random_general_forms(field, n, l, &mut rng) {
            Ok(f) => f,
            Err(_) => {
                out.check(false, || format!("sampling (n, l) = ({n}, {l})"));
                continue;
            }
        };
        let points = star_points(&forms).unwrap();
        out.check(points.len() as u64 == binomial(l, n), || format!("point count ({n}, {l})"));
        let gens = star_generators(&forms, r).unwrap();
        for g in &gens {
            for p in &points {
                out.check(
                    field.is_zero(&g.eval(&p.coords).unwrap()),
                    || format!("generator vanishing ({n}, {l})"),
                );
            }
        }
    }
    out
}

fn hilbert_functions<F: Field>(field: &F, seed: u64) -> CheckResult {
    let mut out = CheckResult::new("hilbert-functions");
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x411b);
    for n in 2..=3usize {
        for l in n..=n + 2 {
            let r = l - n + 1;
            let forms = random_general_forms(field, n, l, &mut rng).unwrap();
            let gens = star_generators(&forms, r).unwrap();
            for t in 0..=l {
                let hf = hilbert_function(field, n + 1, &gens, t) as u64;
                out.check(
                    hf == expected_hf(n, l, t),
                    || format!("HF(n={n}, l={l}, t={t}) = {hf}"),
                );
            }
            let gen_rank = ideal_dim(field, n + 1, &gens, r) as u64;
            out.check(
                gen_rank == binomial(l, n - 1),
                || format!("generator rank (n={n}, l={l})"),
            );
        }
    }
    out
}

fn full_slice_membership<F: Field>(field: &F, seed: u64) -> CheckResult {
    let mut out = CheckResult::new("full-slice-membership");
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0xf00d);
    for (n, r) in [(1usize, 2usize), (2, 2), (2, 3)] {
        let l = n + r;
        let forms = random_general_forms(field, n, l, &mut rng).unwrap();
        let gens = star_generators(&forms, r).unwrap();
        let full = ideal_dim(field, n + 1, &gens, r) == dim_degree_slice(n + 1, r);
        out.check(full, || format!("I_r = S_r at (n={n}, l={l}, r={r})"));
        for _ in 0..3 {
            let target = random_form(field, n + 1, r, &mut rng);
            match ideal_contains(field, n + 1, &gens, &target) {
                Ok(Some(w)) => out.check(
                    w.reconstruct(&gens, n + 1, r) == target,
                    || "membership reconstruction".into(),
                ),
                _ => out.check(false, || "membership".into()),
            }
        }
    }
    out
}

fn decompose_round_trip<F: Field>(field: &F, seed: u64) -> CheckResult {
    let mut out = CheckResult::new("decompose-roundtrip");
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0xdec0);
    for (n, d) in [(2usize, 3usize), (2, 4), (3, 3)] {
        let l = n + 2;
        let r = 3;
        let forms = random_general_forms(field, n, l, &mut rng).unwrap();
        let mut target = MultiPoly::zero(field.clone(), n + 1, d);
        for sigma in subsets(l, r) {
            let mut prod = random_form(field, n + 1, d - r, &mut rng);
            for &i in &sigma {
                prod = prod.mul(&forms.forms()[i]);
            }
            target = target.add(&prod);
        }
        match decompose(&target, &forms, r) {
            Ok(dec) => {
                let rebuilt = dec.reconstruct(&forms, d).unwrap();
                out.check(rebuilt == target, || format!("round trip (n={n}, d={d})"));
            }
            Err(_) => out.check(false, || format!("decompose (n={n}, d={d})")),
        }
    }
    out
}

fn certification(config: &FieldConfig, seed: u64) -> CheckResult {
    let mut out = CheckResult::new("certification");
    for (n, d) in [(2usize, 3usize), (2, 4), (3, 3)] {
        let mac = certify_tuple(config, n, d, Strategy::MacaulayRank, seed, 3);
        let ev = certify_tuple(config, n, d, Strategy::EvaluationMatrix, seed, 3);
        match (mac, ev) {
            (Ok(mac), Ok(ev)) => {
                out.check(mac.certified(), || format!("macaulay (n={n}, d={d})"));
                out.check(ev.certified(), || format!("evaluation (n={n}, d={d})"));
                out.check(mac.verdict == ev.verdict, || format!("agreement (n={n}, d={d})"));
                out.check(
                    mac.recheck().unwrap_or(false),
                    || format!("recheck (n={n}, d={d})"),
                );
            }
            _ => out.check(false, || format!("certify (n={n}, d={d})")),
        }
    }
    out
}

fn classification() -> CheckResult {
    let mut out = CheckResult::new("classification");
    let spot = [
        (2, 5, 4, 4, Verdict::GenericNo),
        (2, 5, 4, 5, Verdict::GenericYes),
        (3, 5, 3, 7, Verdict::GenericYes),
        (2, 4, 2, 5, Verdict::AlwaysYes),
        (4, 4, 2, 6, Verdict::GenericNoLargeD),
        (1, 3, 3, 5, Verdict::GenericYes),
        (2, 5, 4, 3, Verdict::Infeasible),
        (5, 9, 5, 9, Verdict::GenericNo),
    ];
    for (n, l, r, d, want) in spot {
        let got = classify(n, l, r, d).verdict;
        out.check(got == want, || format!("classify({n}, {l}, {r}, {d}) = {got}"));
    }
    for n in 3..=8 {
        for l in n + 3..=n + 8 {
            out.check(dimension_bound(n, l) < 0, || format!("bound({n}, {l})"));
        }
    }
    out
}

fn subsets(l: usize, r: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..l).combinations(r).collect()
}
