//! Named Hamiltonians used throughout the examples and tests.
//!
//! All profiles are piecewise linear; `r` below stands for `|p|`.

use super::hamiltonian::HamiltonianSpec;
use super::profile::RadialProfile;

fn build(radii: &[f64], values: &[f64], tail: f64) -> RadialProfile {
    RadialProfile::new(radii.to_vec(), values.to_vec(), tail).expect("catalog profile is valid")
}

/// `min{4r, 2|r - 1| + 1}`: one well with `M_1 = 2` at `r = 1/2` and `m_1 = 1` at `r = 1`.
pub fn ring_well_profile() -> RadialProfile {
    build(&[0.0, 0.5, 1.0], &[0.0, 2.0, 1.0], 2.0)
}

/// `max{φ, m_1}` for the ring well: flat at height 1 near the origin.
pub fn ring_well_floored_profile() -> RadialProfile {
    build(&[0.0, 0.25, 0.5, 1.0], &[1.0, 1.0, 2.0, 1.0], 2.0)
}

/// The ring well below `s_1 = 1/2` and `max{M_1, φ}` beyond: quasiconvex.
pub fn ring_well_plateau_profile() -> RadialProfile {
    build(&[0.0, 0.5, 1.5], &[0.0, 2.0, 2.0], 2.0)
}

/// `2r - 1`, the outer increasing piece of the ring well on its own.
pub fn ring_well_outer_profile() -> RadialProfile {
    build(&[0.0], &[-1.0], 2.0)
}

/// `|1 - r|` inside the unit ball and `2(r - 1)` outside; zero exactly on `r = 1`.
pub fn crater_profile() -> RadialProfile {
    build(&[0.0, 1.0], &[1.0, 0.0], 2.0)
}

/// Three wells with valleys `1.5 > 1 > 0.5 > 0` and peaks `2 < 2.5 < 3`.
pub fn cascade_profile() -> RadialProfile {
    build(
        &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
        &[1.5, 2.0, 1.0, 2.5, 0.5, 3.0, 0.0],
        5.0,
    )
}

/// One well whose bottom `φ(s_2) = 0` lies below `φ(0) = 0.8`.
pub fn shallow_well_profile() -> RadialProfile {
    build(&[0.0, 1.0, 2.0], &[0.8, 2.0, 0.0], 3.0)
}

/// One well with `φ(s_0) = φ(s_2) = 1`, satisfying only the non-strict ordering.
pub fn equal_valleys_profile() -> RadialProfile {
    build(&[0.0, 0.5, 1.0], &[1.0, 2.0, 1.0], 2.0)
}

/// `r`
pub fn eikonal_profile() -> RadialProfile {
    build(&[0.0], &[0.0], 1.0)
}

/// Looks up a profile by its catalog name.
pub fn profile(name: &str) -> Option<RadialProfile> {
    Some(match name {
        "ring_well" => ring_well_profile(),
        "ring_well_floored" => ring_well_floored_profile(),
        "ring_well_plateau" => ring_well_plateau_profile(),
        "ring_well_outer" => ring_well_outer_profile(),
        "crater" => crater_profile(),
        "cascade" => cascade_profile(),
        "shallow_well" => shallow_well_profile(),
        "equal_valleys" => equal_valleys_profile(),
        "eikonal" => eikonal_profile(),
        _ => return None,
    })
}

pub const PROFILE_NAMES: &[&str] = &[
    "ring_well",
    "ring_well_floored",
    "ring_well_plateau",
    "ring_well_outer",
    "crater",
    "cascade",
    "shallow_well",
    "equal_valleys",
    "eikonal",
];

fn radial(profile: RadialProfile, dim: usize) -> HamiltonianSpec {
    HamiltonianSpec::radial(profile, dim).expect("dimension 1 or 2")
}

pub fn ring_well(dim: usize) -> HamiltonianSpec {
    radial(ring_well_profile(), dim)
}

pub fn crater(dim: usize) -> HamiltonianSpec {
    radial(crater_profile(), dim)
}

pub fn eikonal(dim: usize) -> HamiltonianSpec {
    radial(eikonal_profile(), dim)
}

/// `min{|p - e_1|, |p + e_1|}` in the plane.
pub fn double_well() -> HamiltonianSpec {
    HamiltonianSpec::double_well(vec![1.0, 0.0]).expect("finite offset")
}
