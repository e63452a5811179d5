//! Descent along a two-set cover of a finite set of patches.
//!
//! A patch dga is a direct product of copies of one model dga. Modules over
//! it are families of cohesive modules, and maps between patch dgas are
//! projections. For a cover `U = S1 u S2` the square
//! `A(U) -> B(S1), C(S2) -> D(S1 n S2)` is a homotopy fiber product, and
//! [`glue`] and [`restrict`] realise the equivalence between modules over
//! `A` and triples `(M, N, phi)`.
//!
//! Morphisms of triples carry a homotopy `gamma` on the overlap. Their
//! differential is
//!
//! ```text
//! d(mu, nu, gamma) = (d mu, d nu, d gamma + (-1)^i (phi2 G(mu) - L(nu) phi1))
//! ```
//!
//! and composition is `(mu' mu, nu' nu, (-1)^|mu| gamma' G(mu) + L(nu') gamma)`;
//! with these signs `d^2 = 0` and the Leibniz rule holds in every degree.

mod glue;
mod patch;
mod square;
mod triple;

pub use glue::{counit, glue, random_triple, random_union_module, restrict, unit};
pub use patch::{
    patch_ext_dims, PatchDga, PatchHom, PatchMap, PatchModule, PatchModuleDoc, PatchPartDoc,
    PatchSet,
};
pub use square::{AssumptionCheck, DescentSquare};
pub use triple::{
    triple_compose, triple_differential, triple_ext_dims, triple_hom_complex,
    triple_is_homotopy_equivalence, TripleDoc, TripleMorphism, TripleObject,
};
