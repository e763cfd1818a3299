use crate::error::{CoreError, Result};

/// Physical constants of the Darcy-Brinkman model.
///
/// `decay_rate` is the cached inverse length `M = sqrt(mu / (permeability * mu_eff))`
/// controlling the thickness of the Brinkman boundary layers at the walls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Dynamic viscosity mu (Pa*s), > 0.
    pub mu: f64,
    /// Effective viscosity of the Brinkman term mu_eff (Pa*s), > 0.
    pub mu_eff: f64,
    /// Permeability scale K (m^2), > 0.
    pub permeability: f64,
    /// Thermal conductivity k (W/m/K), > 0.
    pub conductivity: f64,
    /// Bottom heat-flux density b (W/m^2), any sign.
    pub bottom_flux: f64,
    decay_rate: f64,
}

impl PhysicalParams {
    pub fn new(
        mu: f64,
        mu_eff: f64,
        permeability: f64,
        conductivity: f64,
        bottom_flux: f64,
    ) -> Result<Self> {
        let positive = |name: &'static str, value: f64| -> Result<()> {
            if value > 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(CoreError::NonPositiveParameter { name, value })
            }
        };
        positive("mu", mu)?;
        positive("mu_eff", mu_eff)?;
        positive("permeability", permeability)?;
        positive("conductivity", conductivity)?;
        if !bottom_flux.is_finite() {
            return Err(CoreError::NonPositiveParameter {
                name: "bottom_flux",
                value: bottom_flux,
            });
        }
        let decay_rate = (mu / (permeability * mu_eff)).sqrt();
        if !(decay_rate.is_finite() && decay_rate > 0.0) {
            return Err(CoreError::NonPositiveParameter {
                name: "decay_rate",
                value: decay_rate,
            });
        }
        Ok(Self {
            mu,
            mu_eff,
            permeability,
            conductivity,
            bottom_flux,
            decay_rate,
        })
    }

    /// Inverse length `M = sqrt(mu / (K * mu_eff))` of the wall layers.
    #[inline]
    pub fn decay_rate(&self) -> f64 {
        self.decay_rate
    }

    /// Constant term `K / mu` of the velocity profile (the Darcy plateau).
    #[inline]
    pub fn k_over_mu(&self) -> f64 {
        self.permeability / self.mu
    }
}
