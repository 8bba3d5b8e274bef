//! Exact intersection theory for degree-1 del Pezzo fibrations embedded as
//! hypersurfaces `X ∈ |6H + 2νF|` in toric P(1,1,2,3)-bundles P(λ,μ,ν) over P¹.
//!
//! - [`grading`]: Cox ring grading, divisor classes, monomial sections, base loci.
//! - [`chow`]: top intersection numbers on P and on X, `(-K_X)³`.
//! - [`conditions`]: validity, nef-cone cases, δ_X and the K-type conditions.
//! - [`classify`]: the δ_X > 0 classification and its brute-force oracle.
//! - [`cli`]: the `dp1fib` command line.

pub mod chow;
pub mod classify;
pub mod cli;
pub mod conditions;
pub mod grading;
pub mod rational;

pub use classify::{classify_k2_failures, oracle_search, ClassificationRow, SearchBox};
pub use conditions::{report, CaseLabel, FibrationReport, KStatus, Verdict};
pub use grading::{BundleParams, Coord, DivisorClass, ExponentVector};
pub use rational::Rational;
