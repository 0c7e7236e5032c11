//! Numerical tolerances shared across modules.

/// Feasibility and duplicate-point tolerance for polyhedral computations.
pub const GEOM: f64 = 1e-9;

/// Margin of the box probe used by the interior-of-hull test.
pub const INTERIOR: f64 = 1e-7;

/// Maximum residual ‖f(x*) + g(x*)u*‖ accepted for a steady-state pair.
pub const STEADY_STATE: f64 = 1e-9;

/// Agreement required between an analytic gradient and central differences,
/// relative to max(1, ‖∇H‖).
pub const FINITE_DIFFERENCE: f64 = 1e-5;

/// Base step of the central-difference gradient, scaled by max(1, ‖x‖).
pub const FD_STEP: f64 = 1e-6;

/// Default tie tolerance of the nearest-neighbor map.
pub const TIE: f64 = 1e-12;

/// Largest ambient dimension handled by exhaustive vertex enumeration.
pub const MAX_ENUM_DIM: usize = 8;

/// Norm beyond which a simulated state is treated as a blow-up.
pub const BLOW_UP: f64 = 1e9;
