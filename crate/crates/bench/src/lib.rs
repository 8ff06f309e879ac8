//! Shared fixtures for the benchmarks.

use spectra_core::{IntervalUnion, PeriodicSpectrum, Real};

/// `(−1/2, 1/2)`.
pub fn unit_interval() -> IntervalUnion {
    IntervalUnion::normalize(&[(Real::exact(-1, 2), Real::exact(1, 2))]).expect("valid interval")
}

/// `(0, 1/2) ∪ (1, 3/2)`.
pub fn two_intervals() -> IntervalUnion {
    IntervalUnion::normalize(&[
        (Real::int(0), Real::exact(1, 2)),
        (Real::int(1), Real::exact(3, 2)),
    ])
    .expect("valid intervals")
}

/// `{0, 1/2} + 2ℤ`.
pub fn half_pair() -> PeriodicSpectrum {
    PeriodicSpectrum::new(vec![Real::int(0), Real::exact(1, 2)], Real::int(2)).expect("valid base")
}
