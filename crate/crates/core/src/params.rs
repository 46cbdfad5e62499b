//! Automaton parameters, unit system and the flat mode dictionary.

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{QcaError, Result};

/// Lattice spacing, step duration and reduced Planck constant.
///
/// The causal speed and the Planck mass are derived on demand so they can
/// never drift out of sync with the base constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    a: f64,
    tau: f64,
    hbar: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self { a: 1.0, tau: 1.0, hbar: 1.0 }
    }
}

impl UnitSystem {
    pub fn new(a: f64, tau: f64, hbar: f64) -> Result<Self> {
        for (name, value) in [("a", a), ("tau", tau), ("hbar", hbar)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(QcaError::OutOfRange { name, value, range: "(0, inf)" });
            }
        }
        Ok(Self { a, tau, hbar })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Causal speed `a / tau`.
    pub fn c_causal(&self) -> f64 {
        self.a / self.tau
    }

    /// Planck mass `hbar / (a * c_causal)`.
    pub fn m_planck(&self) -> f64 {
        self.hbar / (self.a * self.c_causal())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

/// Spinor component. `Plus` precedes `Minus` in every ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Component {
    Plus,
    Minus,
}

impl Component {
    pub const BOTH: [Component; 2] = [Component::Plus, Component::Minus];

    pub fn offset(self) -> usize {
        match self {
            Component::Plus => 0,
            Component::Minus => 1,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Component::Plus => 1.0,
            Component::Minus => -1.0,
        }
    }
}

/// Flat mode index: `2n` for the plus component, `2n + 1` for minus.
pub fn mode_index(n: usize, alpha: Component, n_sites: usize) -> Result<usize> {
    if n >= n_sites {
        return Err(QcaError::SiteOutOfRange { site: n, n_sites });
    }
    Ok(2 * n + alpha.offset())
}

/// Inverse of [`mode_index`].
pub fn mode_site(j: usize, n_sites: usize) -> Result<(usize, Component)> {
    if j >= 2 * n_sites {
        return Err(QcaError::SiteOutOfRange { site: j / 2, n_sites });
    }
    let alpha = if j % 2 == 0 { Component::Plus } else { Component::Minus };
    Ok((j / 2, alpha))
}

/// Maps `m / m_planck` to the mass angle and its cosine/sine.
///
/// `c` is the mass ratio itself and `s = sqrt(1 - c^2)`, so both endpoints
/// are exact.
pub fn coupling_from_mass(m_ratio: f64) -> Result<(f64, f64, f64)> {
    if !(0.0..=1.0).contains(&m_ratio) {
        return Err(QcaError::OutOfRange { name: "m_ratio", value: m_ratio, range: "[0, 1]" });
    }
    let c = m_ratio;
    let s = (1.0 - c * c).sqrt();
    Ok((c.acos(), c, s))
}

/// Parameters of the Dirac automaton on a finite lattice of field sites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AutomatonParams {
    theta: f64,
    c: f64,
    s: f64,
    n_sites: usize,
    boundary: Boundary,
    units: UnitSystem,
}

impl AutomatonParams {
    /// Periodic lattice in natural units.
    pub fn new(theta: f64, n_sites: usize) -> Result<Self> {
        Self::with_options(theta, n_sites, Boundary::Periodic, UnitSystem::default())
    }

    pub fn with_options(
        theta: f64,
        n_sites: usize,
        boundary: Boundary,
        units: UnitSystem,
    ) -> Result<Self> {
        if !(theta.is_finite() && (0.0..=FRAC_PI_2).contains(&theta)) {
            return Err(QcaError::OutOfRange { name: "theta", value: theta, range: "[0, pi/2]" });
        }
        if n_sites == 0 {
            return Err(QcaError::OutOfRange { name: "n_sites", value: 0.0, range: "[1, inf)" });
        }
        // snap the endpoints so the stationary and massless limits are exact
        let (c, s) = if theta == 0.0 {
            (1.0, 0.0)
        } else if theta == FRAC_PI_2 {
            (0.0, 1.0)
        } else {
            (theta.cos(), theta.sin())
        };
        Ok(Self { theta, c, s, n_sites, boundary, units })
    }

    /// Builds parameters from `m / m_planck` instead of the angle.
    pub fn from_mass_ratio(
        m_ratio: f64,
        n_sites: usize,
        boundary: Boundary,
        units: UnitSystem,
    ) -> Result<Self> {
        let (theta, c, s) = coupling_from_mass(m_ratio)?;
        let mut p = Self::with_options(theta.clamp(0.0, FRAC_PI_2), n_sites, boundary, units)?;
        p.c = c;
        p.s = s;
        Ok(p)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_sites(mut self, n_sites: usize) -> Result<Self> {
        if n_sites == 0 {
            return Err(QcaError::OutOfRange { name: "n_sites", value: 0.0, range: "[1, inf)" });
        }
        self.n_sites = n_sites;
        Ok(self)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `cos theta`, equal to `m / m_planck`.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// `sin theta`, the inverse refraction index.
    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn zeta(&self) -> f64 {
        self.s
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Number of flat modes, `2 N`.
    pub fn n_modes(&self) -> usize {
        2 * self.n_sites
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn units(&self) -> UnitSystem {
        self.units
    }

    pub fn mass(&self) -> f64 {
        self.c * self.units.m_planck()
    }

    /// Compton wavelength `a / c`, infinite in the massless case.
    pub fn compton_wavelength(&self) -> f64 {
        if self.c > 0.0 {
            self.units.a() / self.c
        } else {
            f64::INFINITY
        }
    }

    /// `c_causal / lambda`.
    pub fn omega(&self) -> f64 {
        self.units.c_causal() * self.c / self.units.a()
    }

    pub fn mode_index(&self, n: usize, alpha: Component) -> Result<usize> {
        mode_index(n, alpha, self.n_sites)
    }

    /// Site index shifted by `delta`, or `None` when it leaves an open lattice.
    pub fn shifted_site(&self, n: usize, delta: i64) -> Option<usize> {
        let n_sites = self.n_sites as i64;
        let target = n as i64 + delta;
        match self.boundary {
            Boundary::Periodic => Some(target.rem_euclid(n_sites) as usize),
            Boundary::Open => (0..n_sites).contains(&target).then_some(target as usize),
        }
    }

    /// Signed coordinate of site `n`: `n` below `N/2`, `n - N` above.
    pub fn signed_coordinate(&self, n: usize) -> i64 {
        signed_coordinate(n, self.n_sites)
    }
}

pub fn signed_coordinate(n: usize, n_sites: usize) -> i64 {
    if 2 * n < n_sites {
        n as i64
    } else {
        n as i64 - n_sites as i64
    }
}
