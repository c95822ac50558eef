//! Asymmetric 2-colourings of permutation groups: finite search engines and
//! window-scale machinery for locally finite vertex-transitive families.

pub mod colouring;
pub mod error;
pub mod graph;
pub mod group;
pub mod infinite;
mod par;
pub mod perm;

pub use error::Error;
pub use group::{parse_generators, PermGroup, DEFAULT_ENUMERATION_CAP};
pub use perm::Permutation;

/// Raw kernels exposed for the bench suite, which compares the sequential
/// implementations against the feature-selected dispatch versions.
#[doc(hidden)]
pub mod kernels {
    use crate::colouring::{self, AsymmetryReport, Colouring};
    use crate::{group, Error, Permutation};

    pub fn closure_elements(
        degree: usize,
        generators: &[Permutation],
        cap: usize,
    ) -> Result<Vec<Permutation>, Error> {
        group::closure_elements(degree, generators, cap)
    }

    pub fn closure_elements_seq(
        degree: usize,
        generators: &[Permutation],
        cap: usize,
    ) -> Result<Vec<Permutation>, Error> {
        group::closure_elements_seq(degree, generators, cap)
    }

    pub fn motion_of_elements(elements: &[Permutation]) -> Option<usize> {
        group::motion_of_elements(elements)
    }

    pub fn motion_of_elements_seq(elements: &[Permutation]) -> Option<usize> {
        group::motion_of_elements_seq(elements)
    }

    pub fn is_asymmetric(
        colouring: &Colouring,
        elements: &[Permutation],
    ) -> Result<AsymmetryReport, Error> {
        colouring::is_asymmetric(colouring, elements)
    }

    pub fn is_asymmetric_seq(
        colouring: &Colouring,
        elements: &[Permutation],
    ) -> Result<AsymmetryReport, Error> {
        colouring::is_asymmetric_seq(colouring, elements)
    }
}
