//! Complex gamma function and the fused gamma ratio entering the
//! Rosen–Zener Cayley–Klein parameter.
//!
//! The gamma function uses the Lanczos approximation with the g = 607/128,
//! 14-coefficient set (Godfrey's tabulation), which holds ~1e-14 relative
//! error over the working domain, plus the reflection formula for
//! Re z < 1/2. Log-gamma is the primitive; ratios exponentiate once at the
//! end so large imaginary parts never overflow intermediates.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_BASE: f64 = 0.999_999_999_999_997_092;
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;
const LANCZOS_COEF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    3.399_464_998_481_188_87e-5,
    4.652_362_892_704_857_56e-5,
    -9.837_447_530_487_956_46e-5,
    1.580_887_032_249_124_94e-4,
    -2.102_644_417_241_048_83e-4,
    2.174_396_181_152_126_43e-4,
    -1.643_181_065_367_638_9e-4,
    8.441_822_398_385_274_33e-5,
    -2.619_083_840_158_140_87e-5,
    3.689_918_265_953_162_34e-6,
];

fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn check_domain(z: C64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "non-finite gamma argument {z}"
        )));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::GammaPole { re: z.re, im: z.im });
    }
    Ok(())
}

/// ln Γ(z) for Re z > 0, via Γ(z) = Γ(z+1)/z.
fn ln_gamma_right(z: C64) -> C64 {
    debug_assert!(z.re > 0.0);
    let t = z + LANCZOS_G + 0.5;
    let mut ser = C64::new(LANCZOS_BASE, 0.0);
    for (j, &cj) in LANCZOS_COEF.iter().enumerate() {
        ser += cj / (z + (j as f64 + 1.0));
    }
    (z + 0.5) * t.ln() - t + (SQRT_TWO_PI * ser / z).ln()
}

/// A logarithm of Γ(z): `ln_gamma(z).exp()` recovers Γ(z) exactly, but the
/// imaginary part is not guaranteed to be the continuous branch.
pub fn ln_gamma(z: C64) -> Result<C64> {
    check_domain(z)?;
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z))
    } else {
        // reflection: Γ(z) Γ(1−z) = π / sin(πz)
        let s = (PI * z).sin();
        Ok(PI.ln() - s.ln() - ln_gamma_right(C64::new(1.0, 0.0) - z))
    }
}

/// Γ(z) for complex z away from the poles at 0, −1, −2, ….
pub fn complex_gamma(z: C64) -> Result<C64> {
    Ok(ln_gamma(z)?.exp())
}

/// The full a-parameter gamma ratio of the Rosen–Zener propagator:
///
/// Γ²[½(1 − iατ)] e^{−iαπ/2} / ( Γ[½(1 − iατ − Δ₀τ)] Γ[½(1 − iατ + Δ₀τ)] )
///
/// Computed in log space and exponentiated once.
pub fn gamma_ratio_rz(alpha: f64, tau: f64, delta0_tau: f64) -> Result<C64> {
    let w = C64::new(0.5, -0.5 * alpha * tau);
    let d = 0.5 * delta0_tau;
    let lo = w - d;
    let hi = w + d;
    // name the offending argument in the pole error
    check_domain(lo)?;
    check_domain(hi)?;
    let log_ratio = 2.0 * ln_gamma(w)? - ln_gamma(lo)? - ln_gamma(hi)?;
    Ok((log_ratio + C64::new(0.0, -0.5 * alpha * PI)).exp())
}
