//! Spectrum of the box `[-rL, (1-r)L]` with a point interaction at the origin.
//!
//! Everything is expressed through the entire functions
//!
//! ```text
//! s(x; E) = sin(kx)/k,  c(x; E) = cos(kx)     (E > 0, k = sqrt(2E))
//! s(x; E) = x,          c(x; E) = 1           (E = 0)
//! s(x; E) = sinh(kx)/k, c(x; E) = cosh(kx)    (E < 0, k = sqrt(-2E))
//! ```
//!
//! so one secular function `D(E)` covers bound states, the zero-energy case and
//! the positive spectrum. For negative energies the side functions are carried
//! with a factor `exp(-k * side_length)`, which keeps deep bound states finite.

mod overlap;
mod solve;
mod wave;

pub use overlap::{overlap, side_integral};
pub use solve::{
    decoupled_count, eigenvalues, eigenvalues_with, spectrum_window, weyl_defect, SpectrumOptions, Window,
};
pub use wave::{amplitude_ratio, check_bc, node_count, wavefunction, Side, Wavefunction};

use crate::error::{Error, Result};
use crate::params::{BCParams, Coupling};

/// The box: length `L` and split fraction `r`; walls at `-rL` and `(1-r)L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub length: f64,
    pub split: f64,
}

impl Domain {
    pub fn new(length: f64, split: f64) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidDomain(format!("length {length} must be positive")));
        }
        if !(split > 0.0 && split < 1.0) {
            return Err(Error::InvalidDomain(format!("split {split} must lie in (0, 1)")));
        }
        Ok(Self { length, split })
    }

    /// Length of the segment left of the interaction, `rL`.
    pub fn left_len(&self) -> f64 {
        self.split * self.length
    }

    /// Length of the segment right of the interaction, `(1-r)L`.
    pub fn right_len(&self) -> f64 {
        (1.0 - self.split) * self.length
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= -self.left_len() && x <= self.right_len()
    }
}

impl Default for Domain {
    /// `L = 1`, `r = 0.618034`.
    fn default() -> Self {
        Self { length: 1.0, split: 0.618034 }
    }
}

/// One eigenvalue with its position in the ascending spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevel {
    pub index: usize,
    pub energy: f64,
    /// `sqrt(2|E|)`: the wavenumber `k` for `E >= 0`, the decay rate `kappa` below.
    pub momentum: f64,
}

impl EnergyLevel {
    pub fn new(index: usize, energy: f64) -> Self {
        Self { index, energy, momentum: (2.0 * energy.abs()).sqrt() }
    }

    pub fn is_bound(&self) -> bool {
        self.energy < 0.0
    }
}

/// Side functions at a fixed energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Basis {
    /// `2E`
    pub q: f64,
    /// `sqrt(|2E|)`
    pub root: f64,
}

impl Basis {
    pub fn new(energy: f64) -> Self {
        let q = 2.0 * energy;
        Self { q, root: q.abs().sqrt() }
    }

    /// Scale carried by functions on a side of length `len`.
    pub fn scale(&self, len: f64) -> f64 {
        if self.q < 0.0 {
            (-self.root * len).exp()
        } else {
            1.0
        }
    }

    /// `s(y) * scale(len)` for `0 <= y <= len`.
    pub fn s(&self, y: f64, len: f64) -> f64 {
        let k = self.root;
        if self.q > 0.0 {
            (k * y).sin() / k
        } else if self.q == 0.0 {
            y
        } else {
            -(k * (y - len)).exp() * (-2.0 * k * y).exp_m1() / (2.0 * k)
        }
    }

    /// `c(y) * scale(len)` for `0 <= y <= len`.
    pub fn c(&self, y: f64, len: f64) -> f64 {
        let k = self.root;
        if self.q > 0.0 {
            (k * y).cos()
        } else if self.q == 0.0 {
            1.0
        } else {
            0.5 * ((k * (y - len)).exp() + (-k * (y + len)).exp())
        }
    }
}

/// Secular function with the negative-energy scale `exp(-kappa L)` folded in.
///
/// Same sign and zeros as `w * D(E)`; finite for arbitrarily deep energies.
pub fn secular_scaled(energy: f64, coupling: &Coupling, domain: &Domain) -> f64 {
    let basis = Basis::new(energy);
    let (a, b) = (domain.right_len(), domain.left_len());
    let (sa, ca) = (basis.s(a, a), basis.c(a, a));
    let (sb, cb) = (basis.s(b, b), basis.c(b, b));
    coupling.weight * (coupling.alpha * sa * cb + coupling.beta * sa * sb)
        + coupling.weight_gamma * ca * sb
        + coupling.weight_delta * ca * cb
}

/// `D(E) = alpha s(a')c(b') + gamma c(a')s(b') + beta s(a')s(b') + delta c(a')c(b')`
/// with `a' = (1-r)L`, `b' = rL`. Satisfies `F(k) = k D(E)` for `E > 0`.
pub fn secular(energy: f64, params: &BCParams, domain: &Domain) -> f64 {
    let c = Coupling::from(*params);
    let scaled = secular_scaled(energy, &c, domain);
    if energy < 0.0 {
        scaled * ((2.0 * -energy).sqrt() * domain.length).exp()
    } else {
        scaled
    }
}

/// The same function for a general homogeneous coupling, unscaled.
pub fn secular_coupling(energy: f64, coupling: &Coupling, domain: &Domain) -> f64 {
    let scaled = secular_scaled(energy, coupling, domain);
    if energy < 0.0 {
        scaled * ((2.0 * -energy).sqrt() * domain.length).exp()
    } else {
        scaled
    }
}
