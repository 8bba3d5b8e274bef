//! Classification of the triplets with δ_X > 0, i.e. the fibrations that fail
//! the K²-condition.
//!
//! [`classify_k2_failures`] enumerates only the finite candidate sets left by
//! the case-by-case inequality bounds. [`oracle_search`] ignores those bounds
//! and scans a box, using intersection numbers for `(-K_X)³`.

use std::fmt;
use std::ops::RangeInclusive;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chow::{anticanonical_on_x, minus_k_cubed, triple_on_x};
use crate::conditions::{
    case_unchecked, k_status, nef_threshold_for, validity, CaseLabel, RestrictbBranch,
};
use crate::grading::BundleParams;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("empty interval [{0}, {1}] for {2}")]
    EmptyInterval(i64, i64, &'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRow {
    pub params: BundleParams,
    pub delta: Rational,
    pub case: CaseLabel,
    pub k_fails: bool,
}

impl ClassificationRow {
    fn new(params: BundleParams, delta: Rational, case: CaseLabel) -> Self {
        // k_status only errors on invalid params, and rows are valid.
        let k_fails = k_status(&params)
            .map(|s| s.is_proven_fail())
            .unwrap_or(false);
        ClassificationRow {
            params,
            delta,
            case,
            k_fails,
        }
    }
}

impl fmt::Display for ClassificationRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} δ={} case={} k_fails={}",
            self.params, self.delta, self.case, self.k_fails
        )
    }
}

/// Inclusive integer intervals for λ, μ, ν.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBox {
    lambda: (i64, i64),
    mu: (i64, i64),
    nu: (i64, i64),
}

impl SearchBox {
    pub fn new(lambda: (i64, i64), mu: (i64, i64), nu: (i64, i64)) -> Result<Self, ClassifyError> {
        for (iv, name) in [(lambda, "lambda"), (mu, "mu"), (nu, "nu")] {
            if iv.0 > iv.1 {
                return Err(ClassifyError::EmptyInterval(iv.0, iv.1, name));
            }
        }
        Ok(SearchBox { lambda, mu, nu })
    }

    /// λ ∈ [0,10], μ ∈ [−30,30], ν ∈ [0,30]; contains every bound the case
    /// analysis produces.
    pub fn default_box() -> Self {
        SearchBox {
            lambda: (0, 10),
            mu: (-30, 30),
            nu: (0, 30),
        }
    }

    /// Widen every interval by `by` on both sides.
    pub fn inflated(&self, by: i64) -> Self {
        let grow = |(a, b): (i64, i64)| (a - by, b + by);
        SearchBox {
            lambda: grow(self.lambda),
            mu: grow(self.mu),
            nu: grow(self.nu),
        }
    }

    pub fn lambda(&self) -> RangeInclusive<i64> {
        self.lambda.0..=self.lambda.1
    }

    pub fn mu(&self) -> RangeInclusive<i64> {
        self.mu.0..=self.mu.1
    }

    pub fn nu(&self) -> RangeInclusive<i64> {
        self.nu.0..=self.nu.1
    }
}

impl fmt::Display for SearchBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "λ∈[{},{}] μ∈[{},{}] ν∈[{},{}]",
            self.lambda.0, self.lambda.1, self.mu.0, self.mu.1, self.nu.0, self.nu.1
        )
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    Integer::div_ceil(&a, &b)
}

fn floor_div(a: i64, b: i64) -> i64 {
    Integer::div_floor(&a, &b)
}

/// Candidates for case (a-i).
///
/// `2δ = 4λ + 3μ − 4ν + 8 ≥ 1` with `3μ ≤ 2ν − 1` gives `ν ≤ 2λ + 3`;
/// with `3λ ≤ ν` this forces `λ ≤ 3`.
fn candidates_ai() -> Vec<BundleParams> {
    let mut out = Vec::new();
    for l in 0..=3 {
        for n in 3 * l..=2 * l + 3 {
            for m in ceil_div(4 * n - 4 * l - 7, 3)..=floor_div(2 * n - 1, 3) {
                out.push(BundleParams::new(l, m, n));
            }
        }
    }
    out
}

/// Candidates for case (a-ii).
///
/// `δ = λ + 2μ − 2ν + 4 ≥ 1` with `3μ ≤ 2ν − 1` gives `μ ≤ λ + 2`, and
/// `2λ ≤ μ − 1` then forces `1 ≤ μ ≤ 3`.
fn candidates_aii() -> Vec<BundleParams> {
    let mut out = Vec::new();
    for m in 1..=3 {
        for l in 0..=floor_div(m - 1, 2) {
            for n in ceil_div(3 * m + 1, 2)..=floor_div(l + 2 * m + 3, 2) {
                out.push(BundleParams::new(l, m, n));
            }
        }
    }
    out
}

/// Candidates for case (b), one family per branch of the C_y analysis.
fn candidates_b() -> Vec<BundleParams> {
    let mut out = Vec::new();
    // (I) 2ν ≥ max{5λ, 4λ+μ}: μ ≥ 4λ − 7 and 3μ ≤ 4λ + 5 give λ ≤ 3, while
    // 5λ ≤ 2ν ≤ 6λ − 2 gives λ ≥ 2.
    for l in 2..=3 {
        for n in ceil_div(5 * l, 2)..=3 * l - 1 {
            let hi = (2 * n - 4 * l).min(floor_div(2 * n - 1, 3));
            for m in ceil_div(4 * n - 4 * l - 7, 3)..=hi {
                out.push(BundleParams::new(l, m, n));
            }
        }
    }
    // (II) 5λ > 2ν = 4λ+μ: μ is even, 4λ ≤ μ + 7 and λ > μ give μ ≤ 1;
    // 4λ + μ = 2ν ≥ 0 with 4λ ≤ μ + 7 gives μ ≥ −3.
    for m in (-3..=1).filter(|m| m % 2 == 0) {
        let lo = (m + 1).max(ceil_div(-m, 4)).max(0);
        for l in lo..=floor_div(m + 7, 4) {
            out.push(BundleParams::new(l, m, (4 * l + m) / 2));
        }
    }
    // (III) 4λ+μ > 2ν = 5λ: λ is even, 5λ ≤ 6λ − 2 gives λ ≥ 2, and
    // 6λ − 7 ≤ 3μ ≤ 5λ − 1 gives λ ≤ 6.
    for l in (2..=6).filter(|l| l % 2 == 0) {
        let n = 5 * l / 2;
        for m in ceil_div(6 * l - 7, 3)..=floor_div(5 * l - 1, 3) {
            out.push(BundleParams::new(l, m, n));
        }
    }
    out
}

fn keep_failures(candidates: Vec<BundleParams>, case: CaseLabel) -> Vec<ClassificationRow> {
    let mut rows: Vec<ClassificationRow> = candidates
        .into_iter()
        .filter(|p| validity(p).is_valid && case_unchecked(p) == case)
        .filter_map(|p| {
            let delta = minus_k_cubed(&p) + nef_threshold_for(&p, case);
            delta
                .is_positive()
                .then(|| ClassificationRow::new(p, delta, case))
        })
        .collect();
    rows.sort_by_key(|r| r.params);
    rows.dedup_by_key(|r| r.params);
    rows
}

/// All valid triplets with δ_X > 0, grouped by case (a-i), (a-ii), (b) and
/// sorted lexicographically within each case.
pub fn classify_k2_failures() -> Vec<ClassificationRow> {
    let mut rows = keep_failures(candidates_ai(), CaseLabel::AI);
    rows.extend(keep_failures(candidates_aii(), CaseLabel::AII));
    let b_rows = keep_failures(candidates_b(), CaseLabel::B);
    debug_assert!(b_rows
        .iter()
        .all(|r| RestrictbBranch::of(&r.params).is_some()));
    rows.extend(b_rows);
    rows
}

/// δ_X with `(-K_X)³` taken from the intersection product on P rather than
/// the closed form.
fn delta_by_intersection(p: &BundleParams, case: CaseLabel) -> Rational {
    let k = anticanonical_on_x(p);
    let k_cubed = triple_on_x(p, &k, &k, &k).expect("three divisors and X");
    k_cubed + nef_threshold_for(p, case)
}

/// Every valid triplet with λ ≥ 0 and δ_X > 0 inside the box, sorted
/// lexicographically by (λ, μ, ν).
pub fn oracle_search(search: &SearchBox) -> Vec<ClassificationRow> {
    let lambdas: Vec<i64> = search.lambda().filter(|l| *l >= 0).collect();
    let mut rows: Vec<ClassificationRow> = lambdas
        .par_iter()
        .flat_map_iter(|&l| {
            search.mu().flat_map(move |m| {
                search.nu().filter_map(move |n| {
                    let p = BundleParams::new(l, m, n);
                    if !validity(&p).is_valid {
                        return None;
                    }
                    let case = case_unchecked(&p);
                    let delta = delta_by_intersection(&p, case);
                    delta
                        .is_positive()
                        .then(|| ClassificationRow::new(p, delta, case))
                })
            })
        })
        .collect();
    rows.sort_by_key(|r| r.params);
    rows
}

/// δ_X and case for the nonsingular family `X ∈ |6H + 6μF|` on P(λ, 2μ, 3μ).
///
/// Here `wr_z = wr_w = μ`, outside the strict `wr_z < wr_w` of the singular
/// classification: the case is (a-i) when `wr_z ≤ wr_y ≤ wr_w`, (a-ii) when
/// `wr_y < wr_z`, and (b) when `wr_w < wr_y`.
pub fn nonsingular_delta(lambda: i64, mu: i64) -> (Rational, CaseLabel) {
    let p = BundleParams::new(lambda, 2 * mu, 3 * mu);
    let case = case_unchecked(&p);
    (minus_k_cubed(&p) + nef_threshold_for(&p, case), case)
}
