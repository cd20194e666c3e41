use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// λε⁴u₇ₓ + ε²u₅ₓ + u₃ₓ + 6uuₓ + uₜ = 0.
    SeventhOrder,
    /// Order 2k + 3 member of the singularly perturbed hierarchy.
    Hierarchy,
    /// Central-difference discretization of KdV.
    LatticeKdV,
    /// Central-difference discretization of κε²u₅ₓ + u₃ₓ + 6uuₓ + uₜ = 0.
    Lattice5KdV,
}

/// Which equation is under study, with its parameters and the wave speed.
///
/// Fields that a model kind does not use are ignored: `k` is 2 for the
/// seventh-order equation, `sigma` only matters for the lattice time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub lambda: f64,
    pub k: u32,
    pub kappa: f64,
    pub sigma: f64,
    pub c: f64,
}

impl ModelSpec {
    pub fn seventh_order(lambda: f64, c: f64) -> Result<Self> {
        Self {
            kind: ModelKind::SeventhOrder,
            lambda,
            k: 2,
            kappa: 0.0,
            sigma: 1.0,
            c,
        }
        .validated()
    }

    pub fn hierarchy(k: u32, lambda: f64, c: f64) -> Result<Self> {
        Self {
            kind: ModelKind::Hierarchy,
            lambda,
            k,
            kappa: 0.0,
            sigma: 1.0,
            c,
        }
        .validated()
    }

    pub fn lattice_kdv(sigma: f64, c: f64) -> Result<Self> {
        Self {
            kind: ModelKind::LatticeKdV,
            lambda: 0.0,
            k: 1,
            kappa: 0.0,
            sigma,
            c,
        }
        .validated()
    }

    pub fn lattice_5kdv(kappa: f64, sigma: f64, c: f64) -> Result<Self> {
        Self {
            kind: ModelKind::Lattice5KdV,
            lambda: 0.0,
            k: 1,
            kappa,
            sigma,
            c,
        }
        .validated()
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        positive("c", self.c)?;
        positive("sigma", self.sigma)?;
        if self.k < 1 {
            return Err(Error::InvalidParameter {
                parameter: "k",
                value: self.k as f64,
                reason: "hierarchy index must be at least 1",
            });
        }
        match self.kind {
            ModelKind::SeventhOrder | ModelKind::Hierarchy => nonzero("lambda", self.lambda),
            ModelKind::Lattice5KdV => nonzero("kappa", self.kappa),
            ModelKind::LatticeKdV => Ok(()),
        }
    }

    /// Hierarchy index of the continuous models (2 for 7KdV).
    pub fn order_index(&self) -> u32 {
        match self.kind {
            ModelKind::SeventhOrder => 2,
            _ => self.k,
        }
    }
}

pub(crate) fn positive(parameter: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            parameter,
            value,
            reason: "must be positive and finite",
        })
    }
}

pub(crate) fn nonzero(parameter: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        Err(Error::InvalidParameter {
            parameter,
            value,
            reason: "must be finite",
        })
    } else if value == 0.0 {
        Err(Error::Degenerate { parameter })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_lambda() {
        assert_eq!(
            ModelSpec::seventh_order(0.0, 1.0),
            Err(Error::Degenerate { parameter: "lambda" })
        );
        assert!(ModelSpec::hierarchy(3, 0.0, 1.0).is_err());
    }

    #[test]
    fn rejects_bad_speed_and_index() {
        assert!(ModelSpec::seventh_order(1.0, 0.0).is_err());
        assert!(ModelSpec::seventh_order(1.0, -2.0).is_err());
        assert!(ModelSpec::hierarchy(0, 1.0, 1.0).is_err());
        assert!(ModelSpec::lattice_kdv(0.0, 1.0).is_err());
        assert!(ModelSpec::lattice_5kdv(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn lattice_ignores_lambda() {
        let m = ModelSpec::lattice_kdv(0.5, 2.0).unwrap();
        assert_eq!(m.kind, ModelKind::LatticeKdV);
    }
}
