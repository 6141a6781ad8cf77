//! Closed-form propagators for the four single- and double-detuning-pulse
//! constructions (cases A, B and the broadband/narrowband composites), their
//! τ → 0 limits, and numerical series-order checks.
//!
//! One unit segment has duration π, constant Rabi frequency α, and carries a
//! sech detuning pulse of width τ and dimensionless area parameter δ = Δ₀τ
//! at its center. The segment propagator in the rotated basis is the exact
//! Rosen–Zener solution; the lab-frame models sandwich it between ±π/4 basis
//! rotations and resonant half-segments.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::gamma::gamma_ratio_rz;
use crate::su2::{rotation, Propagator2};

/// Parameters of one sech-detuning segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RzParams {
    /// Rabi-area scale; the segment's resonant area is απ.
    pub alpha: f64,
    /// Detuning pulse width, in units of T/π.
    pub tau: f64,
    /// Dimensionless pulse strength δ = Δ₀τ; the pulse area is πδ.
    pub delta: f64,
}

impl RzParams {
    pub fn new(alpha: f64, tau: f64, delta: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "tau must be > 0, got {tau}"
            )));
        }
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "alpha must be >= 0, got {alpha}"
            )));
        }
        if !delta.is_finite() {
            return Err(Error::InvalidArgument("delta must be finite".into()));
        }
        Ok(Self { alpha, tau, delta })
    }

    /// Peak detuning Δ₀ = δ/τ.
    pub fn delta0(&self) -> f64 {
        self.delta / self.tau
    }
}

/// The four analytic constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// One segment, one pulse: superposition profile, duration T.
    A,
    /// Case A followed by a resonant half-segment, duration 3T/2.
    B,
    /// Two opposite-sign pulses between resonant half-segments: broadband
    /// inversion, duration 3T.
    Bb,
    /// Two same-sign pulses: narrowband profile, duration 3T.
    Nb,
}

impl Model {
    pub fn label(&self) -> &'static str {
        match self {
            Model::A => "a",
            Model::B => "b",
            Model::Bb => "bb",
            Model::Nb => "nb",
        }
    }
}

const RZ_UNITARITY_TOL: f64 = 1e-10;

/// Exact Rosen–Zener segment propagator in the rotated basis:
/// a from the gamma ratio, b = −i sin(πδ/2)/cosh(πατ/2).
pub fn rz_propagator(p: &RzParams) -> Result<Propagator2> {
    let a = gamma_ratio_rz(p.alpha, p.tau, p.delta)?;
    let b = C64::new(
        0.0,
        -(PI * p.delta / 2.0).sin() / (PI * p.alpha * p.tau / 2.0).cosh(),
    );
    let u = Propagator2::from_parts(a, b);
    let defect = u.unitarity_defect();
    if defect > RZ_UNITARITY_TOL {
        return Err(Error::UnitarityLoss {
            defect,
            tol: RZ_UNITARITY_TOL,
        });
    }
    Ok(u)
}

/// The sign-flipped segment [[a, −b], [b*, a*]] for a detuning pulse of the
/// opposite sign.
pub fn rz_propagator_flipped(p: &RzParams) -> Result<Propagator2> {
    let u = rz_propagator(p)?;
    Ok(Propagator2::from_parts(u.a(), -u.b()))
}

/// Assembles a model propagator from its segment propagators; shared between
/// the analytic path and the numerically integrated cross-check.
///
/// Chronological order (rightmost factor first):
///   A  = R(−π/4)·U₁·R(π/4)
///   B  = U_{π/2}·A
///   BB = U_{π/2}·R(−π/4)·U₂·U₁·R(π/4)·U_{π/2}
///   NB = U_{π/2}·R(−π/4)·U₁·U₁·R(π/4)·U_{π/2}
pub(crate) fn assemble_model(
    model: Model,
    u1: Propagator2,
    u2_flipped: Propagator2,
    alpha: f64,
) -> Propagator2 {
    let r_plus = rotation(FRAC_PI_4);
    let r_minus = rotation(-FRAC_PI_4);
    let half = Propagator2::resonant(PI * alpha / 2.0).matrix();
    let m = match model {
        Model::A => r_minus * u1.matrix() * r_plus,
        Model::B => half * (r_minus * u1.matrix() * r_plus),
        Model::Bb => half * r_minus * u2_flipped.matrix() * u1.matrix() * r_plus * half,
        Model::Nb => half * r_minus * u1.matrix() * u1.matrix() * r_plus * half,
    };
    Propagator2::from_matrix(&m)
}

/// Closed-form propagator of the requested model at finite pulse width.
pub fn model_propagator(model: Model, p: &RzParams) -> Result<Propagator2> {
    let u1 = rz_propagator(p)?;
    let u2 = Propagator2::from_parts(u1.a(), -u1.b());
    let u = assemble_model(model, u1, u2, p.alpha);
    let defect = u.unitarity_defect();
    if defect > RZ_UNITARITY_TOL {
        return Err(Error::UnitarityLoss {
            defect,
            tol: RZ_UNITARITY_TOL,
        });
    }
    Ok(u)
}

/// τ → 0 transition probabilities of the two superposition models:
/// P(A) = cos²(πδ/2) sin²(πα/2),
/// P(B) = sin²(πδ/2) sin²(πα/4) + cos²(πδ/2) sin²(3πα/4).
pub fn limit_probability(model: Model, alpha: f64, delta: f64) -> Result<f64> {
    let cd2 = (PI * delta / 2.0).cos().powi(2);
    let sd2 = (PI * delta / 2.0).sin().powi(2);
    match model {
        Model::A => Ok(cd2 * (PI * alpha / 2.0).sin().powi(2)),
        Model::B => {
            Ok(sd2 * (PI * alpha / 4.0).sin().powi(2)
                + cd2 * (3.0 * PI * alpha / 4.0).sin().powi(2))
        }
        other => Err(Error::InvalidArgument(format!(
            "limit_probability is defined for models A and B only, got {other:?}"
        ))),
    }
}

/// τ = 0 reference propagator of a model, built by composing phase-shifted
/// resonant sub-segments (the composite-pulse picture of each construction).
pub fn cp_limit_model(model: Model, alpha: f64, delta: f64) -> Propagator2 {
    let jump = PI * delta;
    let half = Propagator2::resonant(PI * alpha / 2.0);
    let unit = Propagator2::resonant(PI * alpha);
    let chain: Vec<Propagator2> = match model {
        Model::A => vec![half, half.with_phase(jump)],
        Model::B => vec![half, half.with_phase(jump), half.with_phase(jump)],
        Model::Bb => vec![unit, unit.with_phase(jump), unit],
        Model::Nb => vec![unit, unit.with_phase(jump), unit.with_phase(2.0 * jump)],
    };
    Propagator2::compose(&chain).expect("nonempty")
}

/// Expansion point of each model's error series: α = 1 except NB (α = 2).
pub fn expansion_point(model: Model) -> f64 {
    match model {
        Model::Nb => 2.0,
        _ => 1.0,
    }
}

/// Leading-order data of a model's τ = 0 error series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadingOrder {
    /// First order with a coefficient above threshold.
    pub order: u32,
    /// Taylor coefficient at that order (magnitude only for the modulus
    /// quantities of BB/NB).
    pub coefficient: f64,
    /// The order-1 coefficient estimate, reported even when the leading
    /// order is higher (cancellation checks read this).
    pub linear_coefficient: f64,
}

/// Coefficient magnitudes below this count as canceled orders.
const ORDER_THRESHOLD: f64 = 1e-4;

/// Richardson extrapolation (two levels) of a quantity with an h²-series:
/// A(h) = L + c h² + O(h⁴).
fn richardson_h2(a_h: f64, a_h2: f64, a_h4: f64) -> (f64, f64) {
    let r1 = (4.0 * a_h2 - a_h) / 3.0;
    let r1b = (4.0 * a_h4 - a_h2) / 3.0;
    let r2 = (16.0 * r1b - r1) / 15.0;
    (r2, (r2 - r1b).abs())
}

const RICHARDSON_EPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

fn richardson_of<F: Fn(f64) -> f64>(a: F) -> (f64, f64) {
    let [h, h2, h4] = RICHARDSON_EPS;
    richardson_h2(a(h), a(h2), a(h4))
}

/// Numerically estimates, by Richardson-extrapolated finite differences
/// around the model's expansion point, the leading nonvanishing order and
/// coefficient of the error series in ε:
/// P − P(α₀) for A/B, |U₁₁| for BB, |U₁₂| for NB.
pub fn series_coefficient_check(model: Model, delta: f64) -> Result<LeadingOrder> {
    let alpha0 = expansion_point(model);
    match model {
        Model::A | Model::B => {
            let p0 = cp_limit_model(model, alpha0, delta).transition_probability();
            let f =
                |eps: f64| cp_limit_model(model, alpha0 + eps, delta).transition_probability() - p0;
            // signed central differences
            let (c1, r1) = richardson_of(|h| (f(h) - f(-h)) / (2.0 * h));
            if c1.abs() > ORDER_THRESHOLD {
                return Ok(LeadingOrder {
                    order: 1,
                    coefficient: c1,
                    linear_coefficient: c1,
                });
            }
            let (c2, r2) = richardson_of(|h| (f(h) - 2.0 * f(0.0) + f(-h)) / (2.0 * h * h));
            if c2.abs() > ORDER_THRESHOLD {
                return Ok(LeadingOrder {
                    order: 2,
                    coefficient: c2,
                    linear_coefficient: c1,
                });
            }
            let (c3, r3) = richardson_of(|h| {
                ((f(2.0 * h) - f(-2.0 * h)) - 2.0 * (f(h) - f(-h))) / (12.0 * h * h * h)
            });
            if c3.abs() > ORDER_THRESHOLD {
                return Ok(LeadingOrder {
                    order: 3,
                    coefficient: c3,
                    linear_coefficient: c1,
                });
            }
            Err(Error::NonConvergent {
                msg: format!("no leading order up to 3 for {model:?} at delta={delta}"),
                residuals: vec![r1, r2, r3],
            })
        }
        Model::Bb | Model::Nb => {
            // modulus of a matrix element with an odd series: |γ₁ε + γ₃ε³ + …|
            let f = |eps: f64| {
                let u = cp_limit_model(model, alpha0 + eps, delta);
                match model {
                    Model::Bb => u.a().norm(),
                    _ => u.b().norm(),
                }
            };
            let (c1, r1) = richardson_of(|h| f(h) / h);
            if c1.abs() > ORDER_THRESHOLD {
                return Ok(LeadingOrder {
                    order: 1,
                    coefficient: c1,
                    linear_coefficient: c1,
                });
            }
            let (c3, r3) = richardson_of(|h| f(h) / (h * h * h));
            if c3.abs() > ORDER_THRESHOLD {
                return Ok(LeadingOrder {
                    order: 3,
                    coefficient: c3,
                    linear_coefficient: c1,
                });
            }
            Err(Error::NonConvergent {
                msg: format!("no leading order up to 3 for {model:?} at delta={delta}"),
                residuals: vec![r1, r3],
            })
        }
    }
}
