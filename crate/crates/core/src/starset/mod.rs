//! Radial-graph representation of star-shaped planar sets and the set-level
//! quantities the flow is built from: volume, perimeter, curvature,
//! distances, the pseudo-distance, morphological operators and shape maps.

mod dist;
mod grid;
mod io;
mod morph;
mod set;
mod shapes;

pub use dist::{
    boundary_distance, boundary_distance_hinted, distance_to_boundary,
    hausdorff_boundary_distance, hausdorff_distance, pseudo_distance, pseudo_distance_sq,
    pseudo_distance_sq_radii, signed_distance,
};
pub use grid::DirectionGrid;
pub use io::{
    read_radial_csv, read_radial_json, write_radial_csv, write_radial_json, write_svg,
    RadialSetJson,
};
pub use morph::{dilate, erode};
pub use set::{BoundaryPolyline, RadialSet, TimeForcing};
pub use shapes::{ball, flower, ice_cone, random_star_set};
