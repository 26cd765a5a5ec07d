//! Distances between placements, sampled solution spaces and their
//! homology.

mod hausdorff;
mod rips;
mod sample;

use alloc::vec;
use alloc::vec::Vec;

pub use hausdorff::{directed_hausdorff, hausdorff};
pub use rips::{betti, clique_complex, rank_gf2, rips_complex, SimplicialComplexZ2};
pub use sample::{
    candidates, enumerate_covers, sample_factored, sample_solutions, Candidate, CloudPoint, Component, SampleOptions,
    SolutionCloud,
};

use crate::error::Result;
use crate::gadgets::{Family, GalleryInstance};

/// Independent parts of families whose solution space is a product: the
/// two triangles of the torus, and the two triangles and the path of the
/// double torus.
pub fn family_components(family: &Family) -> Option<Vec<Component>> {
    let part = |sites: core::ops::Range<usize>| Component { sites: sites.collect(), guards: 2 };
    match family {
        Family::Torus => Some(vec![part(0..3), part(3..6)]),
        Family::DoubleTorus => Some(vec![part(0..3), part(3..6), part(6..9)]),
        _ => None,
    }
}

/// Factored where the family allows it, plain enumeration otherwise.
pub fn sample_family(inst: &GalleryInstance, opts: &SampleOptions) -> Result<SolutionCloud> {
    match family_components(&inst.family) {
        Some(parts) => sample_factored(inst, opts, &parts),
        None => sample_solutions(inst, opts),
    }
}

/// Betti numbers `beta_0 .. beta_up_to` of the Rips complex of a cloud.
pub fn cloud_betti(cloud: &SolutionCloud, eps: f64, up_to: usize) -> Result<Vec<usize>> {
    let k = cloud.rips(eps, up_to + 1)?;
    betti(&k, up_to)
}
