//! From a union of hypercube faces to a gallery whose optimal guard
//! placements project onto it.

mod formula;
mod gallery;

pub use formula::{
    face_to_string, formula_from_faces, parse_faces, rewrite_with_satisfiers, Face, FacialFormula, HypercubeFaceUnion,
    RewrittenFormula, TwoClause, VarConstraint,
};
pub use gallery::{
    certify, compile_gallery, constraint, placement_to_point, point_to_placement, project_placement, site_parameters,
    site_ranges, CompiledGallery, DisjunctionGadget, LayoutParams,
};
