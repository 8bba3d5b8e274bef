//! Intersection numbers on P(λ,μ,ν) and on hypersurfaces `X ∈ |6H + 2νF|`.
//!
//! Products are kept in the truncated ring `Q[H,F]/(F²)`; top-degree classes
//! are evaluated with `(H⁴) = -(6λ+3μ+2ν)/36` and `(H³·F) = 1/6`.

use std::fmt;

use crate::grading::{torus_divisor_class, BundleParams, Coord, DivisorClass};
use crate::rational::Rational;

/// Dimension of P.
pub const DIM_P: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChowError {
    #[error("product of {0} divisors exceeds dim P = 4")]
    DegreeOverflow(usize),
    #[error("expected a class of degree {expected}, got degree {found}")]
    DegreeMismatch { expected: usize, found: usize },
}

/// A homogeneous class `Σ c_ij H^i F^j` with `j ∈ {0, 1}` and `i + j = degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleClass {
    degree: usize,
    /// Coefficients of `H^degree` and `H^(degree-1)·F`.
    pure: Rational,
    with_fiber: Rational,
}

impl CycleClass {
    /// The fundamental class `[P]`.
    pub fn unit() -> Self {
        CycleClass {
            degree: 0,
            pure: Rational::one(),
            with_fiber: Rational::zero(),
        }
    }

    pub fn from_divisor(d: &DivisorClass) -> Self {
        CycleClass {
            degree: 1,
            pure: d.h.clone(),
            with_fiber: d.f.clone(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient of `H^i F^j`. Zero for any monomial not of this degree.
    pub fn coefficient(&self, i: usize, j: usize) -> Rational {
        if i + j != self.degree {
            return Rational::zero();
        }
        match j {
            0 => self.pure.clone(),
            1 if i + 1 == self.degree => self.with_fiber.clone(),
            _ => Rational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.pure.is_zero() && self.with_fiber.is_zero()
    }

    /// Multiply by a divisor, dropping every `F²` term.
    pub fn mul_divisor(&self, d: &DivisorClass) -> Result<Self, ChowError> {
        if self.degree >= DIM_P {
            return Err(ChowError::DegreeOverflow(self.degree + 1));
        }
        // (a H^k + b H^(k-1) F)(h H + f F) = ah H^(k+1) + (af + bh) H^k F + bf·F²
        let pure = &self.pure * &d.h;
        let with_fiber = &self.pure * &d.f + &self.with_fiber * &d.h;
        Ok(CycleClass {
            degree: self.degree + 1,
            pure,
            with_fiber,
        })
    }
}

impl fmt::Display for CycleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.degree;
        let mut terms = Vec::new();
        if !self.pure.is_zero() {
            terms.push(format!("{}·H^{}", self.pure, k));
        }
        if !self.with_fiber.is_zero() {
            terms.push(format!("{}·H^{}F", self.with_fiber, k - 1));
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// Product of up to four divisor classes in `Q[H,F]/(F²)`.
pub fn product(classes: &[DivisorClass]) -> Result<CycleClass, ChowError> {
    if classes.len() > DIM_P {
        return Err(ChowError::DegreeOverflow(classes.len()));
    }
    classes
        .iter()
        .try_fold(CycleClass::unit(), |acc, d| acc.mul_divisor(d))
}

/// `(H⁴)` on P(λ,μ,ν), closed form.
pub fn h4(p: &BundleParams) -> Rational {
    -Rational::new(6 * p.lambda + 3 * p.mu + 2 * p.nu, 36)
}

/// `(H³·F)`: the degree of O(1)³ on P(1,1,2,3).
pub fn h3f() -> Rational {
    Rational::new(1, 6)
}

/// Degree of a 0-cycle on P.
pub fn evaluate_top(p: &BundleParams, c: &CycleClass) -> Result<Rational, ChowError> {
    if c.degree != DIM_P {
        return Err(ChowError::DegreeMismatch {
            expected: DIM_P,
            found: c.degree,
        });
    }
    Ok(&c.pure * h4(p) + &c.with_fiber * h3f())
}

/// `(H⁴)` recomputed from `D_x·D_y·D_z·D_w = 0` without the closed form.
///
/// The four fiber coordinates have no common zero on P, so the expansion
/// `c₄·(H⁴) + c₃·(H³F) = 0` determines `(H⁴)`; `c₄ = 1·1·2·3` is never zero.
pub fn derive_h4(p: &BundleParams) -> Rational {
    let divisors: Vec<DivisorClass> = [Coord::X, Coord::Y, Coord::Z, Coord::W]
        .iter()
        .map(|&c| torus_divisor_class(p, c))
        .collect();
    let prod = product(&divisors).expect("four factors");
    let c4 = prod.coefficient(4, 0);
    let c3 = prod.coefficient(3, 1);
    -(c3 * h3f()) / c4
}

/// The class of X: `6H + 2νF`.
pub fn x_class(p: &BundleParams) -> DivisorClass {
    DivisorClass::integral(6, 2 * p.nu)
}

/// `-K_X = H + (λ + μ - ν + 2)F` by adjunction, written on P.
pub fn anticanonical_on_x(p: &BundleParams) -> DivisorClass {
    DivisorClass::integral(1, p.lambda + p.mu - p.nu + 2)
}

/// `(A·B·C)_X = (A·B·C·X)_P`.
pub fn triple_on_x(
    p: &BundleParams,
    a: &DivisorClass,
    b: &DivisorClass,
    c: &DivisorClass,
) -> Result<Rational, ChowError> {
    let prod = product(&[a.clone(), b.clone(), c.clone(), x_class(p)])?;
    evaluate_top(p, &prod)
}

/// `(-K_X)³ = 2λ + 5μ/2 - 3ν + 6`, closed form.
pub fn minus_k_cubed(p: &BundleParams) -> Rational {
    Rational::integer(2 * p.lambda - 3 * p.nu + 6) + Rational::new(5 * p.mu, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> DivisorClass {
        DivisorClass::hyperplane()
    }
    fn f() -> DivisorClass {
        DivisorClass::fiber()
    }

    #[test]
    fn product_examples() {
        assert!(product(&[f(), f()]).unwrap().is_zero());
        let single = product(&[h()]).unwrap();
        assert_eq!(single, CycleClass::from_divisor(&h()));
        let hp = h() + f();
        let hm = h() - f();
        let sq = product(&[hp, hm]).unwrap();
        assert_eq!(sq.coefficient(2, 0), Rational::one());
        assert_eq!(sq.coefficient(1, 1), Rational::zero());
        assert_eq!(sq.degree(), 2);
    }

    #[test]
    fn product_overflow() {
        let five = vec![h(); 5];
        assert_eq!(product(&five), Err(ChowError::DegreeOverflow(5)));
    }

    #[test]
    fn evaluate_top_examples() {
        let p = BundleParams::new(0, -2, 0);
        let h4c = product(&[h(), h(), h(), h()]).unwrap();
        assert_eq!(evaluate_top(&p, &h4c).unwrap(), Rational::new(1, 6));
        let h3fc = product(&[h(), h(), h(), f()]).unwrap();
        assert_eq!(
            evaluate_top(&BundleParams::new(5, -7, 2), &h3fc).unwrap(),
            Rational::new(1, 6)
        );
        let zero = product(&[h(), h(), f(), f()]).unwrap();
        assert_eq!(evaluate_top(&p, &zero).unwrap(), Rational::zero());
        let deg3 = product(&[h(), h(), h()]).unwrap();
        assert_eq!(
            evaluate_top(&p, &deg3),
            Err(ChowError::DegreeMismatch {
                expected: 4,
                found: 3
            })
        );
    }

    #[test]
    fn derive_h4_examples() {
        assert_eq!(derive_h4(&BundleParams::new(0, -2, 0)), Rational::new(1, 6));
        assert_eq!(derive_h4(&BundleParams::new(0, 0, 0)), Rational::zero());
        assert_eq!(
            derive_h4(&BundleParams::new(2, 3, 6)),
            Rational::new(-11, 12)
        );
    }

    #[test]
    fn classes_on_x() {
        assert_eq!(
            x_class(&BundleParams::new(0, 2, 3)),
            DivisorClass::integral(6, 6)
        );
        assert_eq!(
            x_class(&BundleParams::new(0, 0, 0)),
            DivisorClass::integral(6, 0)
        );
        assert_eq!(
            x_class(&BundleParams::new(4, 6, 10)),
            DivisorClass::integral(6, 20)
        );
        assert_eq!(
            anticanonical_on_x(&BundleParams::new(0, 2, 3)),
            DivisorClass::integral(1, 1)
        );
        assert_eq!(
            anticanonical_on_x(&BundleParams::new(0, 0, 0)),
            DivisorClass::integral(1, 2)
        );
        assert_eq!(
            anticanonical_on_x(&BundleParams::new(2, 3, 5)),
            DivisorClass::integral(1, 2)
        );
    }

    #[test]
    fn triple_examples() {
        let p = BundleParams::new(1, 1, 3);
        let k = anticanonical_on_x(&p);
        assert_eq!(triple_on_x(&p, &f(), &k, &k).unwrap(), Rational::one());
        assert_eq!(
            triple_on_x(&p, &f(), &f(), &DivisorClass::integral(7, -3)).unwrap(),
            Rational::zero()
        );
        let q = BundleParams::new(0, -2, 0);
        let kq = anticanonical_on_x(&q);
        assert_eq!(triple_on_x(&q, &kq, &kq, &kq).unwrap(), Rational::one());
    }

    #[test]
    fn minus_k_cubed_examples() {
        assert_eq!(
            minus_k_cubed(&BundleParams::new(0, 0, 0)),
            Rational::integer(6)
        );
        assert_eq!(
            minus_k_cubed(&BundleParams::new(1, 1, 3)),
            Rational::new(3, 2)
        );
        assert_eq!(
            minus_k_cubed(&BundleParams::new(0, 1, 2)),
            Rational::new(5, 2)
        );
    }

    #[test]
    fn fiber_coordinates_have_empty_intersection() {
        for (l, m, n) in [(0, 0, 0), (3, -4, 7), (2, 3, 5)] {
            let p = BundleParams::new(l, m, n);
            let ds: Vec<DivisorClass> = [Coord::X, Coord::Y, Coord::Z, Coord::W]
                .iter()
                .map(|&c| torus_divisor_class(&p, c))
                .collect();
            assert_eq!(
                evaluate_top(&p, &product(&ds).unwrap()).unwrap(),
                Rational::zero()
            );
        }
    }
}
