//! Pinned numerical exponents used by reports and sanity floors.
//!
//! All values are dimensionless exponents taken from the literature on
//! mean values of cubic Weyl sums and smooth-number estimates. They are
//! read-only and exact as listed.

/// Saving exponent in the sixth-moment mean value bound U(X) << X^(3+1/4-TAU).
pub const TAU: f64 = 0.00128432;

/// Lower-bound density exponent for sums of three cubes: |C ∩ [1,X]| >> X^BETA_DENSITY.
pub const BETA_DENSITY: f64 = 0.91709477;

/// Permissible exponent for the 46th moment of smooth twelfth-power sums.
pub const DELTA_23: f64 = 0.4988383;

/// Minor-arc saving for the smooth twelfth-power sum f(81a).
pub const RHO_F81: f64 = 0.004259;

/// Exponent bookkeeping identity H^(t/24) M^(t/2) P^(s/8) = M^t P^(-XI_K): k = 2.
pub const XI_2: f64 = 0.0;

/// Same identity for k = 3.
pub const XI_3: f64 = 7.0 / 92.0;
