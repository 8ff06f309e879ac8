//! Computations with spectra of finite unions of intervals.
//!
//! A set `Ω = ⋃ (a_j, b_j)` of finite measure is *spectral* when some
//! frequency set `Λ` makes `{e^{2πiλx}}_{λ∈Λ}` an orthogonal basis of
//! `L²(Ω)`. This crate evaluates the Fourier transform of the indicator of
//! `Ω`, certifies its real zero set, checks candidate spectra against the
//! orthogonality / packing / tiling conditions, exposes the `φ`-map rank
//! machinery that turns spectrum membership into linear algebra, detects
//! periods of spectrum windows and searches for periodic spectra.
//!
//! Every computation has a floating-point path; interval unions and points
//! given as rationals additionally run on an exact path where zero tests
//! reduce to divisibility by cyclotomic polynomials.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cyclotomic;
pub mod error;
pub mod format;
pub mod fourier;
pub mod interval;
pub mod period;
pub mod phi;
pub mod real;
pub mod search;
pub mod spectrum;
pub mod verify;
pub mod zeros;

pub use error::{Error, Result};
pub use fourier::{
    eval_chi_hat, eval_g, quadrature_oracle, tail_sum_bound, FourierEvaluator, TailBound,
};
pub use interval::{Interval, IntervalUnion};
pub use period::{detect_period, verify_period, PeriodCandidate};
pub use phi::{
    find_generating_window, form_a, is_generating, membership_test, phi, rank_of,
    GeneratingWindow, Membership, PhiBasis, PhiVector,
};
pub use real::{Rational, Real};
pub use search::{close_period, search_spectra, FoundSpectrum, SearchConfig, SearchOutcome};
pub use spectrum::{PeriodicSpectrum, SpectrumWindow, WindowFingerprint};
pub use verify::{
    check_tiling_condition, check_translational_tiling, check_zeros_condition, packing_value,
    Condition, PackingInterval, SpectrumSource, Verdict, VerificationReport, Witness,
};
pub use zeros::{find_zeros, is_zero, rational_zero_cosets, CosetDescription, Zero, ZeroSet, ZeroTest};
