//! Pulse-shape catalog and construction of the time-dependent control pair
//! (Ω(t), Δ(t)) from a sequence description.
//!
//! All four envelope kinds are normalized to unit area over a finite support
//! and scaled by the pulse's signed area, so the temporal area of each
//! detuning pulse equals its requested phase jump.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::phases::{phases_to_areas, PhaseList, SEGMENT_DURATION};

/// Time-dependent two-level control seen by the integrator.
///
/// `omega_delta(t)` returns the pair entering the Hamiltonian
/// H(t) = ½ [[−Δ, Ω], [Ω, Δ]]. `events` are breakpoints the integrator must
/// not step across (support edges, discontinuities); `step_cap` bounds the
/// step size locally so narrow pulses stay resolved.
pub trait Hamiltonian: Sync {
    fn duration(&self) -> f64;
    fn omega_delta(&self, t: f64) -> (f64, f64);
    fn events(&self) -> &[f64];
    fn step_cap(&self, t: f64) -> f64;
}

/// Step-size cap between pulses.
pub const SMOOTH_STEP_CAP: f64 = PI / 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseShapeKind {
    Sech,
    Gaussian,
    Lorentzian,
    Rectangular,
}

impl PulseShapeKind {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Sech => "sech",
            Self::Gaussian => "gaussian",
            Self::Lorentzian => "lorentzian",
            Self::Rectangular => "rect",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sech" | "s" => Ok(Self::Sech),
            "gaussian" | "gauss" | "g" => Ok(Self::Gaussian),
            "lorentzian" | "lorentz" | "l" => Ok(Self::Lorentzian),
            "rect" | "rectangular" | "r" => Ok(Self::Rectangular),
            other => Err(Error::InvalidArgument(format!(
                "unknown pulse shape '{other}'"
            ))),
        }
    }
}

/// Unit-area envelope of one pulse kind at width τ, truncated to a finite
/// support and renormalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    kind: PulseShapeKind,
    tau: f64,
    half_support: f64,
    /// 1 / (area actually contained in the support before renormalization).
    norm: f64,
}

impl Envelope {
    pub fn new(kind: PulseShapeKind, tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "pulse width must be positive, got {tau}"
            )));
        }
        let (half_support, contained) = match kind {
            // ∫sech = atan(sinh); mass within ±40τ is 1 − O(e⁻⁴⁰)
            PulseShapeKind::Sech => (40.0 * tau, 2.0 / PI * 40.0f64.sinh().atan()),
            // erf(10/√2) = 1 − 1.5e−23: exactly 1 in f64
            PulseShapeKind::Gaussian => (10.0 * tau, 1.0),
            // heavy tails: (2/π)·atan(200) ≈ 0.99682, renormalized away
            PulseShapeKind::Lorentzian => (200.0 * tau, 2.0 / PI * 200.0f64.atan()),
            // same height 1/(πτ) and area as the sech peak
            PulseShapeKind::Rectangular => (0.5 * PI * tau, 1.0),
        };
        Ok(Self {
            kind,
            tau,
            half_support,
            norm: 1.0 / contained,
        })
    }

    pub fn kind(&self) -> PulseShapeKind {
        self.kind
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Support half-width; the envelope is exactly zero outside ±this.
    pub fn half_support(&self) -> f64 {
        self.half_support
    }

    /// Renormalization factor applied after truncation.
    pub fn renormalization(&self) -> f64 {
        self.norm
    }

    /// Envelope value at offset t from the pulse center; unit total area.
    pub fn value(&self, t: f64) -> f64 {
        if t.abs() > self.half_support {
            return 0.0;
        }
        let raw = match self.kind {
            PulseShapeKind::Sech => {
                let u = t / self.tau;
                // sech via 2/(e^u + e^-u) underflows gracefully for |u| ≤ 40
                1.0 / (PI * self.tau * u.cosh())
            }
            PulseShapeKind::Gaussian => {
                let u = t / self.tau;
                (-0.5 * u * u).exp() / (self.tau * (2.0 * PI).sqrt())
            }
            PulseShapeKind::Lorentzian => self.tau / (PI * (t * t + self.tau * self.tau)),
            PulseShapeKind::Rectangular => 1.0 / (PI * self.tau),
        };
        raw * self.norm
    }
}

/// One detuning pulse: envelope kind, center, width, and signed area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapedPulse {
    pub kind: PulseShapeKind,
    pub center: f64,
    pub tau: f64,
    pub area: f64,
}

impl ShapedPulse {
    pub fn new(kind: PulseShapeKind, center: f64, tau: f64, area: f64) -> Result<Self> {
        Envelope::new(kind, tau)?;
        if !center.is_finite() || !area.is_finite() {
            return Err(Error::InvalidArgument(
                "pulse center/area must be finite".into(),
            ));
        }
        Ok(Self {
            kind,
            center,
            tau,
            area,
        })
    }

    pub fn envelope(&self) -> Envelope {
        Envelope::new(self.kind, self.tau).expect("validated at construction")
    }
}

/// Full experiment description: N unit segments of constant Rabi frequency
/// α with a list of detuning pulses and a static detuning offset.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceSpec {
    pub n_segments: usize,
    pub alpha: f64,
    pub pulses: Vec<ShapedPulse>,
    pub static_detuning: f64,
}

impl SequenceSpec {
    pub fn new(
        n_segments: usize,
        alpha: f64,
        pulses: Vec<ShapedPulse>,
        static_detuning: f64,
    ) -> Result<Self> {
        if n_segments == 0 {
            return Err(Error::InvalidArgument(
                "sequence needs at least one segment".into(),
            ));
        }
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "alpha must be >= 0, got {alpha}"
            )));
        }
        if !static_detuning.is_finite() {
            return Err(Error::InvalidArgument(
                "static detuning must be finite".into(),
            ));
        }
        let duration = n_segments as f64 * SEGMENT_DURATION;
        for p in &pulses {
            if !(0.0..=duration).contains(&p.center) {
                return Err(Error::InvalidArgument(format!(
                    "pulse center {} outside the sequence window [0, {duration}]",
                    p.center
                )));
            }
        }
        Ok(Self {
            n_segments,
            alpha,
            pulses,
            static_detuning,
        })
    }

    pub fn duration(&self) -> f64 {
        self.n_segments as f64 * SEGMENT_DURATION
    }

    pub fn sampler(&self) -> HamiltonianSampler {
        HamiltonianSampler::from_spec(self)
    }

    /// Serializes to the plain-text key=value exchange format.
    pub fn to_kv_string(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("n_segments={}\n", self.n_segments));
        s.push_str(&format!("alpha={:.16e}\n", self.alpha));
        s.push_str(&format!("static_detuning={:.16e}\n", self.static_detuning));
        for p in &self.pulses {
            s.push_str(&format!(
                "pulse={} {:.16e} {:.16e} {:.16e}\n",
                p.kind.label(),
                p.center,
                p.tau,
                p.area
            ));
        }
        s
    }

    /// Parses the key=value exchange format; `#` starts a comment.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut n_segments: Option<usize> = None;
        let mut alpha: Option<f64> = None;
        let mut static_detuning = 0.0;
        let mut pulses = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or(Error::Parse {
                line,
                msg: format!("expected key=value, got '{body}'"),
            })?;
            let value = value.trim();
            match key.trim() {
                "n_segments" => {
                    n_segments = Some(value.parse().map_err(|e| Error::Parse {
                        line,
                        msg: format!("bad n_segments '{value}': {e}"),
                    })?);
                }
                "alpha" => {
                    alpha = Some(parse_f64(value, line)?);
                }
                "static_detuning" => {
                    static_detuning = parse_f64(value, line)?;
                }
                "pulse" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    if parts.len() != 4 {
                        return Err(Error::Parse {
                            line,
                            msg: format!("pulse needs 'kind center tau area', got '{value}'"),
                        });
                    }
                    let kind = PulseShapeKind::parse(parts[0]).map_err(|e| Error::Parse {
                        line,
                        msg: e.to_string(),
                    })?;
                    let center = parse_f64(parts[1], line)?;
                    let tau = parse_f64(parts[2], line)?;
                    let area = parse_f64(parts[3], line)?;
                    pulses.push(ShapedPulse::new(kind, center, tau, area).map_err(|e| {
                        Error::Parse {
                            line,
                            msg: e.to_string(),
                        }
                    })?);
                }
                other => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("unknown key '{other}'"),
                    });
                }
            }
        }

        let n_segments = n_segments.ok_or(Error::Parse {
            line: 0,
            msg: "missing n_segments".into(),
        })?;
        let alpha = alpha.ok_or(Error::Parse {
            line: 0,
            msg: "missing alpha".into(),
        })?;
        Self::new(n_segments, alpha, pulses, static_detuning).map_err(|e| Error::Parse {
            line: 0,
            msg: e.to_string(),
        })
    }
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.parse::<f64>().map_err(|e| Error::Parse {
        line,
        msg: format!("bad number '{s}': {e}"),
    })
}

/// Builds the standard N-segment realization of a phase list: constant Rabi
/// frequency α over N unit segments, one detuning pulse per phase jump,
/// centered at the segment boundaries t = kπ.
///
/// With `normalize_areas`, each pulse area is wrapped to (−π, π] (identical
/// at τ = 0; weaker pulses at finite width).
pub fn build_sequence(
    phases: &PhaseList,
    alpha: f64,
    tau: f64,
    kind: PulseShapeKind,
    static_detuning: f64,
    normalize_areas: bool,
) -> Result<SequenceSpec> {
    let areas = phases_to_areas(phases);
    let areas = if normalize_areas {
        areas.normalized()
    } else {
        areas
    };
    let pulses: Result<Vec<ShapedPulse>> = areas
        .as_slice()
        .iter()
        .enumerate()
        .map(|(k, &area)| ShapedPulse::new(kind, (k + 1) as f64 * SEGMENT_DURATION, tau, area))
        .collect();
    SequenceSpec::new(phases.len(), alpha, pulses?, static_detuning)
}

/// Single-segment realization of the one-pulse superposition model: one unit
/// segment with a detuning pulse of area πδ centered at t = π/2.
pub fn build_single_pulse(
    delta: f64,
    alpha: f64,
    tau: f64,
    kind: PulseShapeKind,
    static_detuning: f64,
) -> Result<SequenceSpec> {
    let pulse = ShapedPulse::new(kind, 0.5 * SEGMENT_DURATION, tau, PI * delta)?;
    SequenceSpec::new(1, alpha, vec![pulse], static_detuning)
}

/// Deterministic map t → (Ω(t), Δ(t)) realized from a [`SequenceSpec`].
/// Outside [0, duration] both controls are zero.
#[derive(Debug, Clone)]
pub struct HamiltonianSampler {
    alpha: f64,
    static_detuning: f64,
    duration: f64,
    pulses: Vec<(Envelope, f64, f64)>, // (envelope, center, area)
    events: Vec<f64>,
}

impl HamiltonianSampler {
    fn from_spec(spec: &SequenceSpec) -> Self {
        let duration = spec.duration();
        let pulses: Vec<(Envelope, f64, f64)> = spec
            .pulses
            .iter()
            .map(|p| (p.envelope(), p.center, p.area))
            .collect();

        let mut events = vec![0.0, duration];
        for (env, center, _) in &pulses {
            for edge in [center - env.half_support(), center + env.half_support()] {
                if edge > 0.0 && edge < duration {
                    events.push(edge);
                }
            }
        }
        events.sort_by(|a, b| a.partial_cmp(b).unwrap());
        events.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

        Self {
            alpha: spec.alpha,
            static_detuning: spec.static_detuning,
            duration,
            pulses,
            events,
        }
    }

    pub fn omega_at(&self, t: f64) -> f64 {
        if (0.0..=self.duration).contains(&t) {
            self.alpha
        } else {
            0.0
        }
    }

    pub fn delta_at(&self, t: f64) -> f64 {
        if !(0.0..=self.duration).contains(&t) {
            return 0.0;
        }
        let mut d = self.static_detuning;
        for (env, center, area) in &self.pulses {
            d += area * env.value(t - center);
        }
        d
    }
}

impl Hamiltonian for HamiltonianSampler {
    fn duration(&self) -> f64 {
        self.duration
    }

    fn omega_delta(&self, t: f64) -> (f64, f64) {
        (self.omega_at(t), self.delta_at(t))
    }

    fn events(&self) -> &[f64] {
        &self.events
    }

    fn step_cap(&self, t: f64) -> f64 {
        let mut cap = SMOOTH_STEP_CAP;
        for (env, center, _) in &self.pulses {
            if (t - center).abs() <= env.half_support() {
                cap = cap.min(env.tau() / 10.0);
            }
        }
        cap
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phases::bb_phases;

    /// Composite Simpson quadrature, used as the independent area oracle.
    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let n = if n.is_multiple_of(2) { n } else { n + 1 };
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn envelope_peak_values() {
        let tau = 0.05;
        let sech = Envelope::new(PulseShapeKind::Sech, tau).unwrap();
        assert!((sech.value(0.0) - 1.0 / (PI * tau)).abs() < 1e-9 / tau);

        let rect = Envelope::new(PulseShapeKind::Rectangular, tau).unwrap();
        assert!((rect.value(0.0) - 1.0 / (PI * tau)).abs() < 1e-12);
        // support width is πτ
        assert!((2.0 * rect.half_support() - PI * tau).abs() < 1e-15);
        assert_eq!(rect.value(0.51 * PI * tau), 0.0);
    }

    #[test]
    fn envelope_unit_area_all_kinds() {
        let tau = 0.05;
        for kind in [
            PulseShapeKind::Sech,
            PulseShapeKind::Gaussian,
            PulseShapeKind::Lorentzian,
            PulseShapeKind::Rectangular,
        ] {
            let env = Envelope::new(kind, tau).unwrap();
            let x = env.half_support();
            let area = simpson(|t| env.value(t), -x, x, 200_001);
            assert!((area - 1.0).abs() < 1e-10, "{kind:?}: area = {area}");
        }
    }

    #[test]
    fn envelope_renormalization_bounds() {
        for tau in [0.005, 0.05, 0.3] {
            let sech = Envelope::new(PulseShapeKind::Sech, tau).unwrap();
            assert!((sech.renormalization() - 1.0).abs() <= 1e-8);
            let gauss = Envelope::new(PulseShapeKind::Gaussian, tau).unwrap();
            assert!((gauss.renormalization() - 1.0).abs() <= 1e-8);
            // Lorentzian is the documented exception
            let lor = Envelope::new(PulseShapeKind::Lorentzian, tau).unwrap();
            assert!((lor.renormalization() - 1.0).abs() > 1e-3);
        }
    }

    #[test]
    fn envelope_rejects_bad_tau() {
        assert!(Envelope::new(PulseShapeKind::Sech, 0.0).is_err());
        assert!(Envelope::new(PulseShapeKind::Sech, -0.1).is_err());
        assert!(Envelope::new(PulseShapeKind::Sech, f64::NAN).is_err());
    }

    #[test]
    fn build_bb3_structure() {
        let spec = build_sequence(
            &bb_phases(3).unwrap(),
            1.0,
            0.05,
            PulseShapeKind::Sech,
            0.0,
            false,
        )
        .unwrap();
        assert_eq!(spec.n_segments, 3);
        assert!((spec.duration() - 3.0 * PI).abs() < 1e-15);
        assert_eq!(spec.pulses.len(), 2);
        assert!((spec.pulses[0].center - PI).abs() < 1e-15);
        assert!((spec.pulses[1].center - 2.0 * PI).abs() < 1e-15);
        assert!((spec.pulses[0].area - 2.0 * PI / 3.0).abs() < 1e-13);
        assert!((spec.pulses[1].area + 2.0 * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn build_single_segment_no_pulses() {
        let spec = build_sequence(
            &PhaseList::new(vec![0.0]).unwrap(),
            1.0,
            0.05,
            PulseShapeKind::Sech,
            0.25,
            false,
        )
        .unwrap();
        assert!(spec.pulses.is_empty());
        let s = spec.sampler();
        assert!((s.delta_at(1.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn build_case_a_matches_schematic() {
        let spec = build_single_pulse(0.5, 1.0, 0.1, PulseShapeKind::Sech, 0.0).unwrap();
        assert_eq!(spec.n_segments, 1);
        assert_eq!(spec.pulses.len(), 1);
        assert!((spec.pulses[0].center - PI / 2.0).abs() < 1e-15);
        assert!((spec.pulses[0].area - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn sampler_values() {
        let tau = 0.01;
        let spec = build_sequence(
            &bb_phases(3).unwrap(),
            1.3,
            tau,
            PulseShapeKind::Sech,
            0.4,
            false,
        )
        .unwrap();
        let s = spec.sampler();

        // Ω constant inside, zero outside
        assert_eq!(s.omega_at(0.5), 1.3);
        assert_eq!(s.omega_at(3.0 * PI - 1e-9), 1.3);
        assert_eq!(s.omega_at(-0.1), 0.0);
        assert_eq!(s.omega_at(3.0 * PI + 0.1), 0.0);

        // peak of the first pulse: static + area/(πτ)
        let peak = 0.4 + (2.0 * PI / 3.0) / (PI * tau);
        assert!((s.delta_at(PI) - peak).abs() < 1e-6 * peak.abs());

        // midway between far pulses the tails are dead
        assert!((s.delta_at(1.5 * PI) - 0.4).abs() < 1e-10);
    }

    #[test]
    fn pulse_area_quadrature_all_kinds_and_widths() {
        for kind in [
            PulseShapeKind::Sech,
            PulseShapeKind::Gaussian,
            PulseShapeKind::Lorentzian,
            PulseShapeKind::Rectangular,
        ] {
            for tau in [0.005, 0.05, 0.3] {
                let area = 2.0 * PI / 3.0;
                let p = ShapedPulse::new(kind, 0.0, tau, area).unwrap();
                let env = p.envelope();
                let x = env.half_support();
                let got = simpson(|t| p.area * env.value(t), -x, x, 400_001);
                assert!(
                    (got - area).abs() < 1e-9,
                    "{kind:?} tau={tau}: {got} vs {area}"
                );
            }
        }
    }

    #[test]
    fn spec_rejects_out_of_window_pulse() {
        let p = ShapedPulse::new(PulseShapeKind::Sech, 4.0 * PI, 0.05, 1.0).unwrap();
        assert!(SequenceSpec::new(3, 1.0, vec![p], 0.0).is_err());
    }

    #[test]
    fn kv_round_trip() {
        let spec = build_sequence(
            &bb_phases(5).unwrap(),
            1.25,
            0.05,
            PulseShapeKind::Gaussian,
            -0.125,
            true,
        )
        .unwrap();
        let text = spec.to_kv_string();
        let back = SequenceSpec::from_kv_str(&text).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn kv_parse_errors_name_lines() {
        let bad = "n_segments=1\nalpha=1.0\npulse=sech nope 0.1 1.0\n";
        match SequenceSpec::from_kv_str(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        let comments = "# a comment\nn_segments=1 # trailing\nalpha=2.0\n";
        let spec = SequenceSpec::from_kv_str(comments).unwrap();
        assert_eq!(spec.n_segments, 1);
        assert_eq!(spec.alpha, 2.0);
    }
}
