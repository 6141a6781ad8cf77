//! SU(2) propagator algebra in Cayley–Klein form.
//!
//! A two-state propagator is stored as the pair of complex numbers (a, b)
//! with |a|² + |b|² = 1; the full matrix is
//!
//! ```text
//!     [  a    b  ]
//!     [ -b*   a* ]
//! ```
//!
//! Composition convention used throughout the crate: lists of propagators are
//! given in *chronological* order (first pulse first), and composing them
//! multiplies later propagators from the left, `U = U_N ··· U_2 · U_1`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tolerance for the Cayley–Klein structure check when re-projecting a raw
/// 2×2 complex matrix onto (a, b) form.
pub const CK_TOL: f64 = 1e-12;

/// A 2×2 unitary in Cayley–Klein form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator2 {
    a: C64,
    b: C64,
}

impl Propagator2 {
    /// Builds a propagator from Cayley–Klein parameters, rejecting pairs that
    /// are off the unit sphere by more than [`CK_TOL`].
    pub fn new(a: C64, b: C64) -> Result<Self> {
        let p = Self { a, b };
        let defect = p.unitarity_defect();
        if !defect.is_finite() || defect > CK_TOL {
            return Err(Error::InvalidArgument(format!(
                "(a, b) not unitary: |a|^2 + |b|^2 - 1 = {defect:.3e}"
            )));
        }
        Ok(p)
    }

    /// Internal constructor for values that are unitary by construction.
    pub(crate) fn from_parts(a: C64, b: C64) -> Self {
        Self { a, b }
    }

    pub fn identity() -> Self {
        Self {
            a: C64::new(1.0, 0.0),
            b: C64::new(0.0, 0.0),
        }
    }

    /// Propagator of a resonant pulse of the given temporal area:
    /// a = cos(A/2), b = -i sin(A/2).
    pub fn resonant(area: f64) -> Self {
        let half = 0.5 * area;
        Self {
            a: C64::new(half.cos(), 0.0),
            b: C64::new(0.0, -half.sin()),
        }
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn b(&self) -> C64 {
        self.b
    }

    /// Constant phase shift of the driving field, mapped onto the propagator
    /// as b → b·e^{iφ}. Leaves |a| and |b| unchanged.
    pub fn with_phase(&self, phi: f64) -> Self {
        let ph = C64::from_polar(1.0, phi);
        Self {
            a: self.a,
            b: self.b * ph,
        }
    }

    /// Inverse (= conjugate transpose for a unitary).
    pub fn inverse(&self) -> Self {
        Self {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    /// Transition probability |b|² (= |U₂₁|² = |U₁₂|² for this form).
    pub fn transition_probability(&self) -> f64 {
        self.b.norm_sqr()
    }

    /// Survival amplitude magnitude squared, |a|² = |U₁₁|². Numerically
    /// preferable to `1 - transition_probability()` when |a| is tiny.
    pub fn survival_probability(&self) -> f64 {
        self.a.norm_sqr()
    }

    /// | |a|² + |b|² − 1 |.
    pub fn unitarity_defect(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() - 1.0).abs()
    }

    /// Full 2×2 matrix view.
    pub fn matrix(&self) -> Mat2 {
        Mat2([[self.a, self.b], [-self.b.conj(), self.a.conj()]])
    }

    /// Re-projects a raw complex matrix onto Cayley–Klein form, averaging the
    /// redundant entries. Panics if the matrix is not of this form within
    /// [`CK_TOL`]; products of unitaries stay far below that.
    pub fn from_matrix(m: &Mat2) -> Self {
        let defect = m.ck_defect();
        assert!(
            defect <= CK_TOL,
            "matrix is not Cayley-Klein within {CK_TOL:.1e} (defect {defect:.3e})"
        );
        let a = 0.5 * (m.0[0][0] + m.0[1][1].conj());
        let b = 0.5 * (m.0[0][1] - m.0[1][0].conj());
        Self { a, b }
    }

    /// Composes propagators given in chronological order: returns
    /// `U_N ··· U_2 · U_1`. Errors on an empty list.
    ///
    /// Composition runs through full 2×2 matrices and re-projects at the end,
    /// so the same code path also serves compositions with basis rotations.
    pub fn compose(chronological: &[Propagator2]) -> Result<Propagator2> {
        if chronological.is_empty() {
            return Err(Error::InvalidArgument(
                "cannot compose an empty propagator sequence".into(),
            ));
        }
        let mut acc = chronological[0].matrix();
        for u in &chronological[1..] {
            acc = u.matrix() * acc;
        }
        Ok(Self::from_matrix(&acc))
    }
}

/// Basis rotation R(θ) = [[cosθ, sinθ], [−sinθ, cosθ]], returned as a full
/// matrix for composition with propagators.
pub fn rotation(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    Mat2([
        [C64::new(c, 0.0), C64::new(s, 0.0)],
        [C64::new(-s, 0.0), C64::new(c, 0.0)],
    ])
}

/// Plain 2×2 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ])
    }

    /// Largest entry-wise deviation from the Cayley–Klein symmetry
    /// (m₂₂ = m₁₁*, m₂₁ = −m₁₂*).
    pub fn ck_defect(&self) -> f64 {
        let d1 = (self.0[1][1] - self.0[0][0].conj()).norm();
        let d2 = (self.0[1][0] + self.0[0][1].conj()).norm();
        d1.max(d2)
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut d = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }
}

impl std::ops::Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        Mat2(out)
    }
}

/// Two-component state vector (c₁, c₂).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub c1: C64,
    pub c2: C64,
}

impl StateVector {
    /// Ground state |1⟩.
    pub fn ground() -> Self {
        Self {
            c1: C64::new(1.0, 0.0),
            c2: C64::new(0.0, 0.0),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    /// Applies a propagator: c' = U c.
    pub fn evolve(&self, u: &Propagator2) -> Self {
        Self {
            c1: u.a * self.c1 + u.b * self.c2,
            c2: -u.b.conj() * self.c1 + u.a.conj() * self.c2,
        }
    }
}
