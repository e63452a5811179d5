//! Cohesive modules over the quotient model: Z-connections, hom complexes,
//! shifts and cones, the homotopy-equivalence criterion and Ext dimensions.
//!
//! # Sign table
//!
//! Modules are right modules; generators sit on the left of coefficients.
//! With `C^(k,p)` the connection component of form degree `k` on degree `p`
//! and `Phi^(j,p)` a hom component:
//!
//! | quantity                  | component formula |
//! |---------------------------|-------------------|
//! | `E(e_i w)`                | `sum_j e_j (C_ji ^ w) + (-1)^p e_i dbar w` |
//! | `E o E`, `(K, p)`         | `sum C^(k',p-k+1) C^(k,p) + (-1)^(p-K) dbar C^(K-1,p)` |
//! | `d phi`, `(J, p)`         | `sum C_F^(k2,p+k-j) Phi^(j,p) + (-1)^(p+k-J+1) dbar Phi^(J-1,p) - (-1)^k sum Phi^(j,p-k1+1) C_E^(k1,p)` |
//! | `psi o phi`, `(J, p)`     | `sum Psi^(j',p+k-j) Phi^(j,p)` |
//! | `E[s]`                    | `E[s]^p = E^(p+s)`, components `(-1)^s C` |
//! | `Cone(phi)^p`             | `F^p (+) E^(p+1)`, blocks `[[C_F^(k,p), Phi^(k,p+1)], [0, -C_E^(k,p+1)]]` |
//!
//! These are pinned by the `d^2 = 0`, chain-map and integrability suites.

mod hom;
mod matrix;
mod module;
pub mod random;

pub use hom::{
    compose, cone, ext_dims, hom_complex, hom_differential, is_homotopy_equivalence, shift,
    HomBasis, HomDoc, HomElement,
};
pub use matrix::{FormMatrix, MatrixDoc};
pub use module::{CohesiveModule, ComponentKey, ModuleDoc, TotalBasis, ZConnection};

/// `check_leibniz` as a free function.
pub fn check_leibniz(module: &CohesiveModule) -> bool {
    module.check_leibniz()
}

/// `check_integrability` as a free function.
pub fn check_integrability(module: &CohesiveModule) -> crate::error::Result<bool> {
    module.check_integrability()
}
