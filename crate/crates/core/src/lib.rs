//! Central extensions of finite groups by cyclic groups, computed through
//! bar-complex cohomology, and a numerical toolkit for the loop-group
//! cocycle pair `(α, R)` on `L SU(n)`.

pub mod cochain;
pub mod cohomology;
pub mod error;
pub mod extension;
pub mod forms;
pub mod group;
pub mod lie;
pub mod loops;
pub mod modlin;
pub mod period;
mod text;
pub mod verify;

pub use cochain::{delta_cochain, delta_squared, face_map, Cochain, CyclicCoefficients};
pub use cohomology::{
    coboundary_space, cocycle_space, cohomologous, second_cohomology, CohomologyCounts, SecondCohomology,
};
pub use error::{Error, Result};
pub use extension::{build_extension, coboundary_isomorphism, ExtensionGroup};
pub use forms::{
    d_alpha_numeric, d_r_numeric, delta_form_alpha, delta_form_r, eval_alpha, eval_r, face_pushforward,
    left_invariance_check,
};
pub use group::{fingerprint, FiniteGroup, GroupFingerprint, GroupTable};
pub use lie::{AlgebraElement, GroupElement};
pub use loops::{random_smooth_loop, random_tangent, DiscreteLoop, LoopTangent};
pub use period::{sphere_period, LoopSurface, SurfaceFamily};
pub use verify::{period_battery, run_battery, CheckRecord, Tolerances, VerifyConfig};
