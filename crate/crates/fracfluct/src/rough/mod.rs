//! Young integration, discrete rough lifts, Hölder norms, the controlled
//! YDE solver, and computable Grönwall/residue bound certificates.

pub mod area;
pub mod bounds;
pub mod holder;
pub mod path;
pub mod yde;
pub mod young;

pub use area::{chen_defect, levy_area, PairSet, TwoParamArea};
pub use bounds::{gronwall_bound, residue_bound, BoundCertificate, GronwallInputs, ResidueInputs};
pub use holder::{area_holder_norm, holder_norm, DEFAULT_PAIR_BUDGET};
pub use path::{CoeffPath, HolderPath};
pub use yde::{solve_controlled_yde, SolveMode};
pub use young::young_integral;
