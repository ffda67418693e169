//! Finite Deligne-Ribet monoids over imaginary quadratic fields, Siegel theta functions at
//! arbitrary precision, and modular vectors certified as algebraic numbers.

pub mod abelian;
pub mod drmonoid;
pub mod error;
pub mod intmath;
pub mod lll;
pub mod mvector;
pub mod numeric;
pub mod quadfield;
pub mod recognize;
pub mod symplectic;
pub mod theta;

pub use error::{Error, Result};
pub use abelian::AbelianGroupPresentation;
pub use drmonoid::{
    adelic_decode, adelic_encode, build_dr_monoid, dr_congruent, functions_through, orbit_decomposition, projection,
    psi_action, sim_n_congruence, torsion_field_galois, vector_congruence, AdelicContext, AdelicElement, DRMonoidTable,
    MonoidCongruence,
};
pub use mvector::{
    build_modular_vector, compare_with_sim_n, congruence_of_vector, crosscheck_theta_path, evaluate_component,
    frobenius_congruence_check, lambda_action, verify_equivariance, ModularVectorSpec, WittVector,
};
pub use quadfield::{
    class_group, factor_ideal, ideal_mul, ideal_norm, is_principal, ray_class_group, residue_units, ClassGroup, QuadElem,
    QuadField, QuadIdeal, RayClassGroup, ResidueUnits,
};
pub use recognize::{recognize, AlgebraicValue, RecognitionConfig};
pub use symplectic::{decompose_idele_g1, frobenius_reduce, gsp_act, riemann_form_cm, tau_from_basis, TypeDelta};
pub use theta::{classical_g1, theta, theta_null_vector, theta_ratio, BigComplex, ThetaChar, TorsionIndex};
