use crate::error::{Error, Result};

/// Largest `|delta| / omega_0` still treated as comfortably inside the
/// rotating-wave regime.
pub const RWA_RATIO_LIMIT: f64 = 1e-3;

/// Cavity and atomic carrier frequencies. Only used for consistency and RWA
/// sanity checks; the dynamics never depends on them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Carriers {
    pub cavity: f64,
    pub atom: f64,
}

/// Coupling `Omega`, detuning `delta = omega_eg - omega_0` and Kerr strength
/// `chi`, all angular frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    coupling: f64,
    detuning: f64,
    kerr: f64,
    carriers: Option<Carriers>,
}

impl ModelParams {
    /// Unit coupling; `detuning` and `kerr` are in units of the coupling.
    pub fn new(detuning: f64, kerr: f64) -> Result<Self> {
        Self::with_coupling(1.0, detuning, kerr)
    }

    pub fn with_coupling(coupling: f64, detuning: f64, kerr: f64) -> Result<Self> {
        if !(coupling.is_finite() && coupling > 0.0) {
            return Err(Error::InvalidParameter {
                name: "coupling",
                reason: "must be finite and strictly positive",
            });
        }
        if !detuning.is_finite() {
            return Err(Error::InvalidParameter { name: "detuning", reason: "must be finite" });
        }
        if !(kerr.is_finite() && kerr >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "kerr",
                reason: "must be finite and non-negative",
            });
        }
        Ok(Self { coupling, detuning, kerr, carriers: None })
    }

    /// Attach carrier frequencies; `atom - cavity` must reproduce the detuning
    /// to 1e-12 relative.
    pub fn with_carriers(mut self, cavity: f64, atom: f64) -> Result<Self> {
        let carrier_detuning = atom - cavity;
        let scale = cavity.abs().max(atom.abs()).max(1.0);
        if !(cavity.is_finite() && atom.is_finite())
            || (carrier_detuning - self.detuning).abs() > 1e-12 * scale
        {
            return Err(Error::InconsistentCarriers {
                carrier_detuning,
                detuning: self.detuning,
            });
        }
        self.carriers = Some(Carriers { cavity, atom });
        Ok(self)
    }

    pub fn coupling(&self) -> f64 { self.coupling }
    pub fn detuning(&self) -> f64 { self.detuning }
    pub fn kerr(&self) -> f64 { self.kerr }
    pub fn carriers(&self) -> Option<Carriers> { self.carriers }

    /// Cavity frequency if carriers were supplied, zero otherwise.
    pub fn cavity_frequency(&self) -> f64 {
        self.carriers.map_or(0.0, |c| c.cavity)
    }

    /// `Some(|delta| / omega_0)` when carriers are known and the ratio is not
    /// small enough for the rotating-wave approximation to be safe.
    pub fn rwa_violation(&self) -> Option<f64> {
        let c = self.carriers?;
        let ratio = self.detuning.abs() / c.cavity.abs();
        (ratio.is_nan() || ratio >= RWA_RATIO_LIMIT).then_some(ratio)
    }
}
