//! Gaussian nascent-delta pulses.

use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PulseShape {
    /// `q_n(t) = n / sqrt(pi) * exp(-n^2 t^2)`
    #[default]
    Gaussian,
}

/// A member of the pulse sequence, indexed by the inverse width `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    n: f64,
    shape: PulseShape,
}

impl PulseSpec {
    pub fn gaussian(n: f64) -> Result<Self> {
        if !n.is_finite() {
            return Err(Error::NonFiniteInput("pulse parameter n"));
        }
        if n <= 0.0 {
            return Err(Error::DomainError(format!(
                "pulse parameter n must be positive, got {n}"
            )));
        }
        Ok(Self {
            n,
            shape: PulseShape::Gaussian,
        })
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn shape(&self) -> PulseShape {
        self.shape
    }

    pub fn value(&self, t: f64) -> f64 {
        match self.shape {
            PulseShape::Gaussian => self.n / PI.sqrt() * (-(self.n * t).powi(2)).exp(),
        }
    }

    /// Exact area of the pulse over `[lo, hi]`.
    pub fn area(&self, lo: f64, hi: f64) -> f64 {
        match self.shape {
            PulseShape::Gaussian => 0.5 * (libm::erf(self.n * hi) - libm::erf(self.n * lo)),
        }
    }
}

/// Parameters of the unperturbed two-level system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    omega0: f64,
}

impl SystemParams {
    /// `omega0 = (E2 - E1) / hbar`, nonnegative.
    pub fn new(omega0: f64) -> Result<Self> {
        if !omega0.is_finite() {
            return Err(Error::NonFiniteInput("omega0"));
        }
        if omega0 < 0.0 {
            return Err(Error::DomainError(format!("omega0 must be nonnegative, got {omega0}")));
        }
        Ok(Self { omega0 })
    }

    pub fn gapless() -> Self {
        Self { omega0: 0.0 }
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }
}

/// Evaluates `q_n(t)` for the Gaussian sequence.
pub fn gaussian_pulse(n: f64, t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::NonFiniteInput("time"));
    }
    Ok(PulseSpec::gaussian(n)?.value(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson rule, used as an independent check of the area.
    fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
        let h = (hi - lo) / panels as f64;
        let mut acc = f(lo) + f(hi);
        for i in 1..panels {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(lo + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn peak_value() {
        assert!((gaussian_pulse(1.0, 0.0).unwrap() - 0.5641895835477563).abs() < 1e-15);
    }

    #[test]
    fn symmetric() {
        for &(n, t) in &[(1.0, 0.3), (5.0, 0.11), (40.0, 1e-3), (2.5, 7.0)] {
            assert_eq!(gaussian_pulse(n, t).unwrap(), gaussian_pulse(n, -t).unwrap());
        }
    }

    #[test]
    fn unit_area_over_window() {
        let n = 5.0;
        let q = PulseSpec::gaussian(n).unwrap();
        let numeric = simpson(|t| q.value(t), -8.0 / n, 8.0 / n, 4000);
        assert!((numeric - 1.0).abs() < 1e-10, "{numeric}");
        assert!((q.area(-8.0 / n, 8.0 / n) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(gaussian_pulse(0.0, 0.0), Err(Error::DomainError(_))));
        assert!(matches!(gaussian_pulse(-1.0, 0.0), Err(Error::DomainError(_))));
        assert!(matches!(gaussian_pulse(f64::NAN, 0.0), Err(Error::NonFiniteInput(_))));
        assert!(matches!(
            gaussian_pulse(1.0, f64::INFINITY),
            Err(Error::NonFiniteInput(_))
        ));
        assert!(SystemParams::new(-0.1).is_err());
        assert!(SystemParams::new(f64::NAN).is_err());
    }
}
