//! The Cox ring `C[u,v,x,y,z,w]` of the toric P(1,1,2,3)-bundle P(λ,μ,ν)
//! over P¹, its Z²-grading, torus-invariant divisors and monomial sections.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GradingError {
    #[error("invalid grading matrix: {0}")]
    InvalidMatrix(String),
    #[error("linear system |{0}| has no sections")]
    EmptyLinearSystem(DivisorClass),
}

/// Homogeneous coordinates of the Cox ring, in grading-matrix column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coord {
    U,
    V,
    X,
    Y,
    Z,
    W,
}

impl Coord {
    pub const ALL: [Coord; 6] = [Coord::U, Coord::V, Coord::X, Coord::Y, Coord::Z, Coord::W];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Coord::U => "u",
            Coord::V => "v",
            Coord::X => "x",
            Coord::Y => "y",
            Coord::Z => "z",
            Coord::W => "w",
        }
    }

    /// True for the base coordinates u, v.
    pub fn is_base(self) -> bool {
        matches!(self, Coord::U | Coord::V)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Second row of every grading matrix: the weights of P(1,1,2,3) on the fiber.
pub const FIBER_WEIGHTS: [i64; 6] = [0, 0, 1, 1, 2, 3];

/// A 2×6 grading matrix whose first row is `(1, 1, α, β, γ, δ)` and whose
/// second row is [`FIBER_WEIGHTS`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GradingMatrix {
    pub top: [i64; 6],
    pub bottom: [i64; 6],
}

impl GradingMatrix {
    pub fn new(top: [i64; 6]) -> Self {
        GradingMatrix {
            top,
            bottom: FIBER_WEIGHTS,
        }
    }

    /// `row1 += k · row2`.
    pub fn shifted(&self, k: i64) -> Self {
        let mut top = self.top;
        for (t, b) in top.iter_mut().zip(self.bottom.iter()) {
            *t += k * b;
        }
        GradingMatrix {
            top,
            bottom: self.bottom,
        }
    }

    /// Swap the x and y columns.
    pub fn swap_xy(&self) -> Self {
        let mut m = *self;
        m.top.swap(2, 3);
        m.bottom.swap(2, 3);
        m
    }

    fn check(&self) -> Result<(), GradingError> {
        if self.bottom != FIBER_WEIGHTS {
            return Err(GradingError::InvalidMatrix(format!(
                "bottom row must be {:?}, got {:?}",
                FIBER_WEIGHTS, self.bottom
            )));
        }
        if self.top[0] != 1 || self.top[1] != 1 {
            return Err(GradingError::InvalidMatrix(format!(
                "u and v must have degree (1,1) in the top row, got ({},{})",
                self.top[0], self.top[1]
            )));
        }
        Ok(())
    }
}

/// The triplet (λ, μ, ν) of a normalized bundle P(λ,μ,ν).
///
/// Normalized bundles have `lambda >= 0`. The constructor does not enforce
/// this: intersection numbers make sense for any triplet, and
/// [`crate::conditions::validity`] reports non-normalized input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BundleParams {
    pub lambda: i64,
    pub mu: i64,
    pub nu: i64,
}

impl BundleParams {
    pub const fn new(lambda: i64, mu: i64, nu: i64) -> Self {
        BundleParams { lambda, mu, nu }
    }

    pub fn is_normalized(&self) -> bool {
        self.lambda >= 0
    }

    /// The grading matrix `(1 1 0 λ μ ν / 0 0 1 1 2 3)`.
    pub fn to_matrix(&self) -> GradingMatrix {
        GradingMatrix::new([1, 1, 0, self.lambda, self.mu, self.nu])
    }
}

impl fmt::Display for BundleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.lambda, self.mu, self.nu)
    }
}

/// Bring a grading matrix to the canonical form `(1,1,0,λ,μ,ν)` with λ ≥ 0.
///
/// The shift is `k = -min(α, β)`; x and y are swapped when `α > β`.
pub fn normalize(m: &GradingMatrix) -> Result<BundleParams, GradingError> {
    m.check()?;
    let [_, _, alpha, beta, gamma, delta] = m.top;
    let low = alpha.min(beta);
    Ok(BundleParams {
        lambda: (alpha - beta).abs(),
        mu: gamma - 2 * low,
        nu: delta - 3 * low,
    })
}

/// A class `hH + fF` in `Cl(P) ⊗ Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorClass {
    pub h: Rational,
    pub f: Rational,
}

impl DivisorClass {
    pub fn new(h: Rational, f: Rational) -> Self {
        DivisorClass { h, f }
    }

    pub fn integral(h: i64, f: i64) -> Self {
        DivisorClass {
            h: h.into(),
            f: f.into(),
        }
    }

    /// The class H, which restricts to O(1) on a fiber.
    pub fn hyperplane() -> Self {
        Self::integral(1, 0)
    }

    /// The fiber class F.
    pub fn fiber() -> Self {
        Self::integral(0, 1)
    }

    pub fn zero() -> Self {
        Self::integral(0, 0)
    }

    /// `(h, f)` as integers when both coefficients are integral.
    pub fn as_integral(&self) -> Option<(i64, i64)> {
        Some((self.h.to_i64()?, self.f.to_i64()?))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        DivisorClass {
            h: &self.h * k,
            f: &self.f * k,
        }
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        DivisorClass {
            h: self.h + rhs.h,
            f: self.f + rhs.f,
        }
    }
}

impl<'a> Add<&'a DivisorClass> for &'a DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass {
            h: &self.h + &rhs.h,
            f: &self.f + &rhs.f,
        }
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        DivisorClass {
            h: self.h - rhs.h,
            f: self.f - rhs.f,
        }
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            h: -self.h,
            f: -self.f,
        }
    }
}

impl Mul<i64> for DivisorClass {
    type Output = DivisorClass;
    fn mul(self, k: i64) -> DivisorClass {
        DivisorClass {
            h: self.h * k,
            f: self.f * k,
        }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.h.is_zero(), self.f.is_zero()) {
            (true, true) => f.write_str("0"),
            (false, true) => write!(f, "{}H", self.h),
            (true, false) => write!(f, "{}F", self.f),
            (false, false) => {
                if self.f.is_negative() {
                    write!(f, "{}H - {}F", self.h, self.f.abs())
                } else {
                    write!(f, "{}H + {}F", self.h, self.f)
                }
            }
        }
    }
}

/// Class of the torus-invariant divisor `D_t = (t = 0)`.
pub fn torus_divisor_class(p: &BundleParams, coord: Coord) -> DivisorClass {
    match coord {
        Coord::U | Coord::V => DivisorClass::integral(0, 1),
        Coord::X => DivisorClass::integral(1, 0),
        Coord::Y => DivisorClass::integral(1, p.lambda),
        Coord::Z => DivisorClass::integral(2, p.mu),
        Coord::W => DivisorClass::integral(3, p.nu),
    }
}

/// Exponents of a Cox-ring monomial `u^a v^b x^c y^d z^e w^f`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct ExponentVector(pub [u32; 6]);

impl ExponentVector {
    pub fn new(a: u32, b: u32, c: u32, d: u32, e: u32, f: u32) -> Self {
        ExponentVector([a, b, c, d, e, f])
    }

    /// Single-variable power `t^k`.
    pub fn power(coord: Coord, k: u32) -> Self {
        let mut e = [0; 6];
        e[coord.index()] = k;
        ExponentVector(e)
    }

    pub fn exponent(&self, coord: Coord) -> u32 {
        self.0[coord.index()]
    }

    /// Bitmask of the coordinates with a positive exponent.
    pub fn support(&self) -> u8 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .fold(0u8, |m, (i, _)| m | (1 << i))
    }
}

impl Mul for ExponentVector {
    type Output = ExponentVector;
    fn mul(self, rhs: ExponentVector) -> ExponentVector {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(rhs.0) {
            *a += b;
        }
        ExponentVector(e)
    }
}

/// Renders as `u^6*x^6`; the constant monomial renders as `1`.
impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = Coord::ALL
            .iter()
            .filter(|c| self.exponent(**c) > 0)
            .map(|c| match self.exponent(*c) {
                1 => c.name().to_string(),
                k => format!("{}^{}", c.name(), k),
            })
            .collect();
        if factors.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&factors.join("*"))
        }
    }
}

/// `(F-degree, H-degree)` of a monomial, i.e. the grading matrix applied to
/// its exponent vector.
pub fn monomial_bidegree(p: &BundleParams, e: &ExponentVector) -> (i64, i64) {
    let top = p.to_matrix().top;
    e.0.iter()
        .zip(top.iter().zip(FIBER_WEIGHTS.iter()))
        .fold((0, 0), |(fd, hd), (&k, (&t, &b))| {
            (fd + k as i64 * t, hd + k as i64 * b)
        })
}

/// All monomials whose bidegree is `(cls.f, cls.h)`, sorted lexicographically
/// by exponent vector. Non-integral classes have no monomials.
pub fn monomial_basis(p: &BundleParams, cls: &DivisorClass) -> Vec<ExponentVector> {
    let Some((h, f)) = cls.as_integral() else {
        return Vec::new();
    };
    if h < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for w in 0..=h / 3 {
        for z in 0..=(h - 3 * w) / 2 {
            for y in 0..=(h - 3 * w - 2 * z) {
                let x = h - 3 * w - 2 * z - y;
                // a + b must soak up whatever F-degree x..w leave over
                let rest = f - p.lambda * y - p.mu * z - p.nu * w;
                if rest < 0 {
                    continue;
                }
                for a in 0..=rest {
                    let b = rest - a;
                    out.push(ExponentVector([
                        a as u32, b as u32, x as u32, y as u32, z as u32, w as u32,
                    ]));
                }
            }
        }
    }
    out.sort();
    out
}

const BASE_MASK: u8 = 0b000011;
const FIBER_MASK: u8 = 0b111100;

/// A torus-invariant stratum of P: the common zero set of a set of coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Stratum {
    mask: u8,
}

impl Stratum {
    /// `None` when the coordinates generate an ideal containing a component of
    /// the irrelevant ideal `(u,v) ∩ (x,y,z,w)`, i.e. the zero set is empty in P.
    pub fn new(coords: impl IntoIterator<Item = Coord>) -> Option<Self> {
        let mask = coords.into_iter().fold(0u8, |m, c| m | (1 << c.index()));
        Self::from_mask(mask)
    }

    fn from_mask(mask: u8) -> Option<Self> {
        if mask & BASE_MASK == BASE_MASK || mask & FIBER_MASK == FIBER_MASK {
            None
        } else {
            Some(Stratum { mask })
        }
    }

    pub fn zero_set(&self) -> BTreeSet<Coord> {
        Coord::ALL
            .into_iter()
            .filter(|c| self.contains(*c))
            .collect()
    }

    pub fn contains(&self, c: Coord) -> bool {
        self.mask & (1 << c.index()) != 0
    }

    /// Codimension in P. Base and fiber conditions are independent, and the
    /// irrelevant ideal keeps at most one of u, v and three of x, y, z, w, so
    /// this is the number of coordinates.
    pub fn codimension(&self) -> u32 {
        (self.mask & BASE_MASK).count_ones() + (self.mask & FIBER_MASK).count_ones()
    }

    /// True if the monomial does not vanish identically on the stratum.
    pub fn avoided_by(&self, e: &ExponentVector) -> bool {
        e.support() & self.mask == 0
    }

    fn is_subset_of(&self, other: &Stratum) -> bool {
        self.mask & !other.mask == 0
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.zero_set().into_iter().map(Coord::name).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// Components of the base locus of `|cls|`, as minimal coordinate zero sets.
///
/// A set Z is in the base locus when every basis monomial contains a variable
/// of Z. All 2⁶ subsets are scanned; irrelevant ones are skipped and only the
/// inclusion-minimal survivors are returned.
pub fn base_locus_strata(
    p: &BundleParams,
    cls: &DivisorClass,
) -> Result<Vec<Stratum>, GradingError> {
    let basis = monomial_basis(p, cls);
    if basis.is_empty() {
        return Err(GradingError::EmptyLinearSystem(cls.clone()));
    }
    let supports: Vec<u8> = basis.iter().map(ExponentVector::support).collect();
    let hitting: Vec<Stratum> = (0u8..64)
        .filter_map(Stratum::from_mask)
        .filter(|s| supports.iter().all(|&m| m & s.mask != 0))
        .collect();
    let mut minimal: Vec<Stratum> = hitting
        .iter()
        .filter(|s| !hitting.iter().any(|t| t != *s && t.is_subset_of(s)))
        .copied()
        .collect();
    minimal.sort_by_key(|s| {
        (
            s.codimension(),
            s.zero_set().into_iter().collect::<Vec<_>>(),
        )
    });
    Ok(minimal)
}

/// Combinatorial certificate that `D_z|_X` is movable for a general
/// `X ∈ |6H + 2νF|`.
///
/// Every base-locus stratum of `|3 D_z|` must have codimension at least two
/// in P and must be avoided by some monomial of the class of X, so that a
/// general X meets it in codimension two.
pub fn is_dz_movable_on_x(p: &BundleParams) -> Result<bool, GradingError> {
    let three_dz = torus_divisor_class(p, Coord::Z) * 3;
    let strata = base_locus_strata(p, &three_dz)?;
    let x_basis = monomial_basis(p, &DivisorClass::integral(6, 2 * p.nu));
    Ok(strata
        .iter()
        .all(|s| s.codimension() >= 2 && x_basis.iter().any(|e| s.avoided_by(e))))
}
