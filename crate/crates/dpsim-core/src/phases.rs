//! Composite-phase families and the τ = 0 composite-pulse reference.
//!
//! A phase list assigns one constant phase per unit segment; the detuning
//! pulse that realizes the sequence carries the area of each phase *jump*,
//! `areas[k] = phases[k+1] − phases[k]`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::su2::Propagator2;

/// Segment duration in the working units (one unit segment spans T = π).
pub const SEGMENT_DURATION: f64 = PI;

/// Ordered list of per-segment phases, in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseList(Vec<f64>);

impl PhaseList {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::InvalidArgument("phase list must be nonempty".into()));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument(
                "phase list contains a non-finite value".into(),
            ));
        }
        Ok(Self(phases))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Signed detuning-pulse areas (radians), one per segment boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaList(Vec<f64>);

impl AreaList {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Maps every area to its minimal-magnitude representative in (−π, π].
    /// Equivalent at τ = 0 only; ±2π-area pulses differ at finite width.
    pub fn normalized(&self) -> AreaList {
        AreaList(self.0.iter().map(|&a| wrap_to_pi(a)).collect())
    }
}

fn wrap_to_pi(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

fn require_odd(n: usize) -> Result<usize> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "built-in composite families need an odd pulse count >= 1, got {n}"
        )));
    }
    Ok((n - 1) / 2)
}

/// Broadband family: the symmetric list (φ₁,…,φₙ,φₙ₊₁,φₙ,…,φ₁) with
/// φₖ = k(k−1)nπ/N, N = 2n+1 odd. Phases are reduced mod 2π into [0, 2π).
pub fn bb_phases(n_pulses: usize) -> Result<PhaseList> {
    let n = require_odd(n_pulses)?;
    let nf = n as f64;
    let big_n = n_pulses as f64;
    let half: Vec<f64> = (1..=n + 1)
        .map(|k| {
            let kf = k as f64;
            (kf * (kf - 1.0) * nf * PI / big_n).rem_euclid(TAU)
        })
        .collect();
    let mut phases = half.clone();
    phases.extend(half.iter().rev().skip(1));
    PhaseList::new(phases)
}

/// Narrowband family: (0, φ₁, −φ₁, …, φₙ, −φₙ) with φₖ = 2kπ/N, N = 2n+1 odd.
pub fn nb_phases(n_pulses: usize) -> Result<PhaseList> {
    let n = require_odd(n_pulses)?;
    let big_n = n_pulses as f64;
    let mut phases = vec![0.0];
    for k in 1..=n {
        let p = 2.0 * k as f64 * PI / big_n;
        phases.push(p);
        phases.push(-p);
    }
    PhaseList::new(phases)
}

/// The five-pulse universal composite sequence, phases (0, 5, 2, 5, 0)·π/6.
pub fn universal_phases() -> PhaseList {
    PhaseList(vec![
        0.0,
        5.0 * PI / 6.0,
        2.0 * PI / 6.0,
        5.0 * PI / 6.0,
        0.0,
    ])
}

/// Successive raw differences of the stored phase values. A single-segment
/// list yields an empty area list.
pub fn phases_to_areas(p: &PhaseList) -> AreaList {
    AreaList(p.0.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Exact propagator of a constant-Hamiltonian segment: Rabi frequency
/// `alpha`, detuning `detuning`, duration `duration` (all in the working
/// units). Generalized Rabi frequency W = √(α² + Δ²).
pub fn constant_propagator(alpha: f64, detuning: f64, duration: f64) -> Propagator2 {
    let w = alpha.hypot(detuning);
    if w == 0.0 {
        return Propagator2::identity();
    }
    let half = 0.5 * w * duration;
    let (s, c) = half.sin_cos();
    Propagator2::from_parts(C64::new(c, detuning / w * s), C64::new(0.0, -alpha / w * s))
}

/// Exact τ = 0 limit of a detuning-pulse sequence: composes one
/// constant-Hamiltonian unit segment per phase, each phase-shifted by its
/// entry. The first segment is chronologically first.
pub fn cp_limit_propagator(p: &PhaseList, alpha: f64, static_detuning: f64) -> Propagator2 {
    let seg = constant_propagator(alpha, static_detuning, SEGMENT_DURATION);
    let chain: Vec<Propagator2> = p.0.iter().map(|&phi| seg.with_phase(phi)).collect();
    Propagator2::compose(&chain).expect("nonempty by construction")
}
