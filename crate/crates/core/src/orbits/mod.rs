//! Point classes, the orbit map `z -> z^k`, support sets and orbit horizons.

pub mod bounds;
pub mod point;
pub mod support;

pub use point::{classify_point, orbit_step, power_map_charpoly, Classification, PointClass};
pub use support::{support_set, HorizonGuarantee, Lookup, OrbitHorizon, SupportClass, SupportSet};
