//! The operator ring `K(z)[Delta_k]`, Cartier operators, special operators and the regularity criterion.

pub mod cartier;
pub mod equation;
pub mod kernel;
pub mod regularity;
pub mod ring;
pub mod special;

pub use cartier::{cartier_all, cartier_rational};
pub use equation::MahlerEquation;
pub use kernel::{kernel_orbit, KernelLevel, KernelOrbit};
pub use regularity::{
    anxious_pole_set, calmify_equation, order_one_decide, regularity_search, AnxiousPoleSet, RegularityOptions,
    RegularityVerdict, RegularRoute, SearchTrace, DEFAULT_M_MAX,
};
pub use ring::{op_mul, MahlerOperator};
pub use special::{special_coefficients, GammaRow, SpecialRows, DEFAULT_DEGREE_BUDGET};
