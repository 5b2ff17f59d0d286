//! Root systems, Weyl groups, torus points and characters.

mod rep;
mod root_system;
mod torus;
mod weyl;

pub use rep::{dominant_conjugate, simple_root_coeffs, CharacterJets, Representation};
pub use root_system::{pair, CartanType, Family, Root, RootSystem};
pub use torus::{alcove_representative, orbit_representatives, orbit_size, regularity, Orbit, Regularity, TorusPoint};
pub use weyl::{WeylElement, WeylGroup};

/// Poincaré polynomial of the flag variety evaluated at `-t`: `Σ_w (-t)^{length(w)}`.
pub fn flag_poincare(rs: &RootSystem, t: f64) -> f64 {
    rs.weyl
        .length_generating_coeffs()
        .iter()
        .enumerate()
        .map(|(k, &c)| c as f64 * (-t).powi(k as i32))
        .sum()
}

/// Coefficients of `Σ_w (-t)^{length(w)}` in powers of `t`.
pub fn flag_poincare_coeffs(rs: &RootSystem) -> Vec<i64> {
    rs.weyl
        .length_generating_coeffs()
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
        .collect()
}
