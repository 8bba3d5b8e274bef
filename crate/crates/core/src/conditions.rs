//! Validity of a triplet, nef-cone case analysis, δ_X and the K / K² / K³_δ
//! condition verdicts.
//!
//! δ_X is `(-K_X)³ + nef(X/P¹)`, where the nef threshold is the least `r` with
//! `-K_X + rF` nef. The K²-condition is equivalent to `δ_X ≤ 0` and the
//! K³_δ-condition is `δ_X ≤ δ`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chow::{anticanonical_on_x, minus_k_cubed};
use crate::grading::{is_dz_movable_on_x, BundleParams, GradingError};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConditionsError {
    #[error("P{0} does not define a singular degree-1 del Pezzo fibration")]
    InvalidParams(BundleParams),
    #[error(transparent)]
    Grading(#[from] GradingError),
}

/// Weight ratios `wr(t)`: the slope of `D_t` measured as F-degree per H-degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightRatios {
    pub wr_x: Rational,
    pub wr_y: Rational,
    pub wr_z: Rational,
    pub wr_w: Rational,
}

impl WeightRatios {
    pub fn of(p: &BundleParams) -> Self {
        WeightRatios {
            wr_x: Rational::zero(),
            wr_y: Rational::integer(p.lambda),
            wr_z: Rational::new(p.mu, 2),
            wr_w: Rational::new(p.nu, 3),
        }
    }
}

/// Which ray bounds the nef cone of X together with the fiber class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    /// `max(wr_x, wr_z) ≤ wr_y ≤ wr_w`; the nef cone is spanned by F and D_y.
    AI,
    /// `wr_x ≤ wr_y < wr_z < wr_w`; the nef cone is spanned by F and D_z.
    AII,
    /// `wr_w < wr_y`; X contains the curve C_y and the nef cone is spanned by F and D_y.
    B,
}

impl CaseLabel {
    /// The label as written in the classification table, e.g. `(a-i)`.
    pub fn table_label(self) -> &'static str {
        match self {
            CaseLabel::AI => "(a-i)",
            CaseLabel::AII => "(a-ii)",
            CaseLabel::B => "(b)",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseLabel::AI => "AI",
            CaseLabel::AII => "AII",
            CaseLabel::B => "B",
        })
    }
}

/// The admissible numerical shapes of a case-B triplet, forced by X being
/// nonsingular along C_y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RestrictbBranch {
    /// `2ν ≥ max{5λ, 4λ+μ}`
    I,
    /// `5λ > 2ν = 4λ+μ`
    II,
    /// `4λ+μ > 2ν = 5λ`
    III,
}

impl RestrictbBranch {
    pub fn of(p: &BundleParams) -> Option<Self> {
        let (l, m, n) = (p.lambda, p.mu, p.nu);
        if 2 * n >= (5 * l).max(4 * l + m) {
            Some(RestrictbBranch::I)
        } else if 5 * l > 2 * n && 2 * n == 4 * l + m {
            Some(RestrictbBranch::II)
        } else if 4 * l + m > 2 * n && 2 * n == 5 * l {
            Some(RestrictbBranch::III)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub lambda_nonneg: bool,
    pub nu_nonneg: bool,
    pub three_mu_lt_two_nu: bool,
    pub restrictb_branch: Option<RestrictbBranch>,
    pub is_valid: bool,
    /// One line per violated condition; empty when valid.
    pub reasons: Vec<String>,
}

/// `wr_w < wr_y`, i.e. `ν < 3λ`.
fn is_case_b(p: &BundleParams) -> bool {
    p.nu < 3 * p.lambda
}

/// Whether P(λ,μ,ν) can carry a del Pezzo fibration of degree 1 whose only
/// singularities are ½(1,1,1) points.
pub fn validity(p: &BundleParams) -> ValidityReport {
    let lambda_nonneg = p.lambda >= 0;
    let nu_nonneg = p.nu >= 0;
    let three_mu_lt_two_nu = 3 * p.mu <= 2 * p.nu - 1;
    let case_b = is_case_b(p);
    let restrictb_branch = if case_b { RestrictbBranch::of(p) } else { None };

    let mut reasons = Vec::new();
    if !lambda_nonneg {
        reasons.push("λ ≥ 0 violated (triplet is not normalized)".to_string());
    }
    if !nu_nonneg {
        reasons.push("ν ≥ 0 violated".to_string());
    }
    if !three_mu_lt_two_nu {
        reasons.push("3μ ≤ 2ν−1 violated".to_string());
    }
    if case_b && restrictb_branch.is_none() {
        reasons.push("case (b) triplet matches none of the branches (I), (II), (III)".to_string());
    }
    ValidityReport {
        lambda_nonneg,
        nu_nonneg,
        three_mu_lt_two_nu,
        restrictb_branch,
        is_valid: reasons.is_empty(),
        reasons,
    }
}

fn require_valid(p: &BundleParams) -> Result<(), ConditionsError> {
    if validity(p).is_valid {
        Ok(())
    } else {
        Err(ConditionsError::InvalidParams(*p))
    }
}

/// Case of a triplet without checking validity. Ties `wr_y = wr_w` go to
/// case (a).
pub(crate) fn case_unchecked(p: &BundleParams) -> CaseLabel {
    let wr = WeightRatios::of(p);
    if wr.wr_w < wr.wr_y {
        CaseLabel::B
    } else if wr.wr_x.clone().max(wr.wr_z.clone()) <= wr.wr_y {
        CaseLabel::AI
    } else {
        CaseLabel::AII
    }
}

pub fn classify_case(p: &BundleParams) -> Result<CaseLabel, ConditionsError> {
    require_valid(p)?;
    Ok(case_unchecked(p))
}

/// Nef threshold for a known case; shared with the nonsingular families.
pub(crate) fn nef_threshold_for(p: &BundleParams, case: CaseLabel) -> Rational {
    match case {
        CaseLabel::AI | CaseLabel::B => Rational::integer(-p.mu + p.nu - 2),
        CaseLabel::AII => Rational::integer(-p.lambda + p.nu - 2) - Rational::new(p.mu, 2),
    }
}

pub fn nef_threshold(p: &BundleParams) -> Result<Rational, ConditionsError> {
    Ok(nef_threshold_for(p, classify_case(p)?))
}

pub fn delta(p: &BundleParams) -> Result<Rational, ConditionsError> {
    Ok(minus_k_cubed(p) + nef_threshold(p)?)
}

/// `δ_X ≤ 0`.
pub fn k2_condition(p: &BundleParams) -> Result<bool, ConditionsError> {
    k3_condition(p, &Rational::zero())
}

/// `δ_X ≤ d0`.
pub fn k3_condition(p: &BundleParams, d0: &Rational) -> Result<bool, ConditionsError> {
    Ok(delta(p)? <= *d0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KFailReason {
    /// The nef threshold is negative, so `-K_X` is ample.
    AmpleAntiCanonical,
    /// `D_z|_X` is movable (combinatorial certificate) and `-K_X` lies strictly
    /// inside the cone spanned by F and D_z.
    DzMovableInterior,
}

/// What is known about the K-condition. There is deliberately no "holds"
/// state: failure can be certified, success cannot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason")]
pub enum KStatus {
    ProvenFails(KFailReason),
    NotProvenToFail,
}

impl KStatus {
    pub fn is_proven_fail(&self) -> bool {
        matches!(self, KStatus::ProvenFails(_))
    }
}

pub fn k_status(p: &BundleParams) -> Result<KStatus, ConditionsError> {
    if nef_threshold(p)?.is_negative() {
        return Ok(KStatus::ProvenFails(KFailReason::AmpleAntiCanonical));
    }
    let c = anticanonical_on_x(p).f;
    if c > Rational::new(p.mu, 2) && is_dz_movable_on_x(p)? {
        return Ok(KStatus::ProvenFails(KFailReason::DzMovableInterior));
    }
    Ok(KStatus::NotProvenToFail)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    /// `δ_X ≤ 0`: the K²-condition holds, hence K and K³_{3/2} both hold.
    Superrigid,
    /// `0 < δ_X ≤ 1` and K-condition failure is not certified: superrigid
    /// exactly when the K-condition holds.
    SuperrigidIfKCondition,
    /// The K-condition provably fails.
    NotRigidOverBase,
}

/// Thresholds checked by default: K² (0), the embedded-family bound (1) and
/// the general superrigidity bound (3/2).
pub fn default_thresholds() -> Vec<Rational> {
    vec![Rational::zero(), Rational::one(), Rational::new(3, 2)]
}

/// Everything computed for one triplet. For invalid triplets only `params`
/// and `validity` are filled in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationReport {
    pub params: BundleParams,
    pub validity: ValidityReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<CaseLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_ratios: Option<WeightRatios>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_cubed: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nef_threshold: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2_holds: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k3_threshold_results: Option<BTreeMap<Rational, bool>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_status: Option<KStatus>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

pub fn report(p: &BundleParams, thresholds: &[Rational]) -> FibrationReport {
    let validity = validity(p);
    let mut out = FibrationReport {
        params: *p,
        validity,
        case: None,
        weight_ratios: None,
        k_cubed: None,
        nef_threshold: None,
        delta: None,
        k2_holds: None,
        k3_threshold_results: None,
        k_status: None,
        verdict: None,
    };
    if !out.validity.is_valid {
        return out;
    }

    let case = case_unchecked(p);
    let k_cubed = minus_k_cubed(p);
    let nef = nef_threshold_for(p, case);
    let delta = &k_cubed + &nef;
    let k2 = !delta.is_positive();
    let k3 = thresholds
        .iter()
        .map(|t| (t.clone(), delta <= *t))
        .collect();
    // z^3 always spans part of |3 D_z|, so the base-locus scan cannot fail here.
    let status = k_status(p).expect("valid params");
    let verdict = if k2 {
        Some(Verdict::Superrigid)
    } else if status.is_proven_fail() {
        Some(Verdict::NotRigidOverBase)
    } else if delta <= Rational::one() {
        Some(Verdict::SuperrigidIfKCondition)
    } else {
        None
    };

    out.case = Some(case);
    out.weight_ratios = Some(WeightRatios::of(p));
    out.k_cubed = Some(k_cubed);
    out.nef_threshold = Some(nef);
    out.delta = Some(delta);
    out.k2_holds = Some(k2);
    out.k3_threshold_results = Some(k3);
    out.k_status = Some(status);
    out.verdict = verdict;
    out
}
