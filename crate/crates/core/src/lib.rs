//! Exact integer bookkeeping for the inductive birational description of
//! moduli spaces `M(r, d)` of stable bundles on a curve of genus `g >= 2`.
//!
//! Given a type `(r, d)` with `h = gcd(r, d)`, the crate computes
//!
//! - the descent chain `(r, d) -> (r1, d1) -> ...` driven by the auxiliary
//!   type `beta = (s, e)` with `chi(beta, alpha) = h` ([`descent`]),
//! - the Hecke correspondence numerics ([`hecke`]),
//! - the composition tree of `mu : M(r, d) -> M(h, 0)` with a fibre
//!   dimension for every node, summing to `(r^2 - h^2)(g - 1)` ([`mu`]),
//! - a symbolic certificate that `mu` pulls `psi(h, 0)` back to `psi(r, d)`
//!   ([`brauer`]),
//! - the dimension counts that force a generic map between general bundles to
//!   have maximal rank ([`genericity`]).
//!
//! All arithmetic is checked `i64`; overflow is an error, never a wrap.

pub mod arith;
pub mod brauer;
pub mod descent;
pub mod error;
pub mod genericity;
pub mod hecke;
pub mod mu;
pub mod report;
pub mod sweep;

pub use arith::{
    euler_chi, euler_form, gcd_type, moduli_dim, BundleType, FormalType, Genus, ModuliDescriptor,
};
pub use brauer::{
    rep_algebra_dim, transport, verify_main, weight_class, ClassExpr, Derivation, DiagramEdge,
    EdgeKind, NodeId, Verdict,
};
pub use descent::{
    descent_chain, descent_step, kernel_type, solve_beta, BetaSolution, DescentStep, ReductionChain,
};
pub use error::{Error, Result};
pub use genericity::{enumerate_configs, Classification, GenericityVerdict, HirschConfig};
pub use hecke::{hecke_brauer_targets, make_hecke, HeckeDescriptor};
pub use mu::{affine_dim, compose_mu, fixed_det_report, FixedDetReport, MuTree};
pub use report::{Format, MuReport};
pub use sweep::{run_sweep, SweepConfig, SweepReport};
