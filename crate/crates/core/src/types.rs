use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex amplitude or coupling value.
pub type ComplexScalar = Complex64;

/// Largest deviation of the norm from 1 accepted by [`SuperpositionState::new`].
pub const STRICT_NORM_TOLERANCE: f64 = 1e-9;

pub(crate) fn is_finite(z: ComplexScalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Normalized amplitude pair `(a1, a2)` of a two-level state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionState {
    a1: ComplexScalar,
    a2: ComplexScalar,
}

impl SuperpositionState {
    /// Strict constructor. Rejects amplitudes whose norm differs from 1 by
    /// more than [`STRICT_NORM_TOLERANCE`]; smaller deviations are divided out.
    pub fn new(a1: ComplexScalar, a2: ComplexScalar) -> Result<Self> {
        let norm = Self::checked_norm(a1, a2)?;
        if (norm - 1.0).abs() > STRICT_NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            a1: a1 / norm,
            a2: a2 / norm,
        })
    }

    /// Normalizing constructor. Returns the state together with the norm of
    /// the amplitudes as given.
    pub fn normalized(a1: ComplexScalar, a2: ComplexScalar) -> Result<(Self, f64)> {
        let norm = Self::checked_norm(a1, a2)?;
        if norm == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok((
            Self {
                a1: a1 / norm,
                a2: a2 / norm,
            },
            norm,
        ))
    }

    /// Eigenstate `psi_1`.
    pub fn ground() -> Self {
        Self {
            a1: ComplexScalar::new(1.0, 0.0),
            a2: ComplexScalar::new(0.0, 0.0),
        }
    }

    /// Wraps amplitudes that are already unit norm up to rounding, such as
    /// the output of a unitary map.
    pub(crate) fn from_unitary_image(a1: ComplexScalar, a2: ComplexScalar) -> Self {
        Self { a1, a2 }
    }

    fn checked_norm(a1: ComplexScalar, a2: ComplexScalar) -> Result<f64> {
        if !is_finite(a1) || !is_finite(a2) {
            return Err(Error::NonFiniteInput("state amplitude"));
        }
        Ok(a1.norm().hypot(a2.norm()))
    }

    pub fn a1(&self) -> ComplexScalar {
        self.a1
    }

    pub fn a2(&self) -> ComplexScalar {
        self.a2
    }

    pub fn amplitudes(&self) -> [ComplexScalar; 2] {
        [self.a1, self.a2]
    }

    /// `|a1|^2 + |a2|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.a1.norm_sqr() + self.a2.norm_sqr()
    }

    /// Largest componentwise modulus of the difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.a1 - other.a1).norm().max((self.a2 - other.a2).norm())
    }

    /// Multiplies both amplitudes by the unit complex number `e^{i phase}`.
    pub fn with_global_phase(&self, phase: f64) -> Self {
        let u = ComplexScalar::from_polar(1.0, phase);
        Self {
            a1: self.a1 * u,
            a2: self.a2 * u,
        }
    }
}

impl fmt::Display for SuperpositionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a1, self.a2)
    }
}

/// Dimensionless complex interaction strength `k = beta / hbar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling(ComplexScalar);

impl Coupling {
    pub fn new(k: ComplexScalar) -> Result<Self> {
        if !is_finite(k) {
            return Err(Error::NonFiniteInput("coupling"));
        }
        Ok(Self(k))
    }

    pub fn real(k: f64) -> Result<Self> {
        Self::new(ComplexScalar::new(k, 0.0))
    }

    pub fn from_polar(modulus: f64, phase: f64) -> Result<Self> {
        if !modulus.is_finite() || !phase.is_finite() {
            return Err(Error::NonFiniteInput("coupling"));
        }
        Self::new(ComplexScalar::from_polar(modulus, phase))
    }

    pub fn zero() -> Self {
        Self(ComplexScalar::new(0.0, 0.0))
    }

    pub fn value(&self) -> ComplexScalar {
        self.0
    }

    /// `|k|`.
    pub fn modulus(&self) -> f64 {
        self.0.norm()
    }

    /// Argument of `k` in `(-pi, pi]`; 0 for `k = 0`.
    pub fn phase(&self) -> f64 {
        let arg = self.0.arg();
        if arg <= -PI {
            PI
        } else {
            arg
        }
    }

    /// Unit phase factor `k / |k|` (equal to `|beta| / beta*`), taken as 1 at `k = 0`.
    pub fn unit(&self) -> ComplexScalar {
        let m = self.modulus();
        if m == 0.0 {
            ComplexScalar::new(1.0, 0.0)
        } else {
            self.0 / m
        }
    }
}

impl std::ops::Neg for Coupling {
    type Output = Coupling;

    fn neg(self) -> Coupling {
        Coupling(-self.0)
    }
}

impl From<Coupling> for ComplexScalar {
    fn from(k: Coupling) -> Self {
        k.0
    }
}
