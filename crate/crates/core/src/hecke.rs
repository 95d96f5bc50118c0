//! Numerics of the Hecke correspondence `P(h1, 0, h)`: pairs `E2 ⊂ E1` with
//! `E1` of type `(h1, 0)` and `E1 / E2` of length `h` supported at one point.
//!
//! Both projections `theta1 : P -> M(h1, 0)` and `theta2 : P -> M(h1, -h)` are
//! (twisted) Grassmannian bundles of `h`-planes in a rank `h1` bundle.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{add, mul, sub, BundleType, Genus, ModuliDescriptor};
use crate::brauer::rep_algebra_dim;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeDescriptor {
    pub genus: Genus,
    pub h1: i64,
    pub h: i64,
    /// `gcd(h1, h)`; equals `h` whenever `h | h1`.
    pub m: i64,
    pub theta1_target: ModuliDescriptor,
    pub theta2_target: ModuliDescriptor,
    /// `dim Gr(h, h1) = h (h1 - h)`, shared by both projections.
    pub theta_fiber_dim: i64,
    pub parmod_dim: i64,
}

impl HeckeDescriptor {
    /// Dimension of the parabolic space computed through `theta1`.
    pub fn parmod_dim_via_theta1(&self) -> Result<i64> {
        add(
            self.theta1_target.dim,
            self.theta_fiber_dim,
            "parabolic dimension",
        )
    }

    /// Dimension of the parabolic space computed through `theta2`.
    pub fn parmod_dim_via_theta2(&self) -> Result<i64> {
        add(
            self.theta2_target.dim,
            self.theta_fiber_dim,
            "parabolic dimension",
        )
    }

    pub fn check(&self) -> Result<()> {
        let via1 = self.parmod_dim_via_theta1()?;
        let via2 = self.parmod_dim_via_theta2()?;
        if via1 != self.parmod_dim || via2 != self.parmod_dim {
            return Err(Error::invariant(
                "parabolic dimension via theta1 = via theta2",
                format!("{via1} / {via2} / stored {}", self.parmod_dim),
            ));
        }
        if self.m != self.h1.gcd(&self.h) {
            return Err(Error::invariant(
                "m = gcd(h1, h)",
                format!("m = {}", self.m),
            ));
        }
        Ok(())
    }
}

/// Describe `P(h1, 0, h)` and its two projections. Requires `1 <= h <= h1`.
pub fn make_hecke(g: Genus, h1: i64, h: i64) -> Result<HeckeDescriptor> {
    const WHAT: &str = "Hecke correspondence";
    if h < 1 || h1 < 1 {
        return Err(Error::InvalidInput(format!(
            "Hecke parameters must be positive, got h1 = {h1}, h = {h}"
        )));
    }
    if h > h1 {
        return Err(Error::InvalidInput(format!(
            "Hecke correspondence needs h <= h1, got h1 = {h1}, h = {h}"
        )));
    }
    let theta1_target = ModuliDescriptor::new(g, BundleType::new(h1, 0)?)?;
    let theta2_target = ModuliDescriptor::new(g, BundleType::new(h1, -h)?)?;
    let theta_fiber_dim = mul(h, sub(h1, h, WHAT)?, WHAT)?;
    let parmod_dim = add(
        add(mul(mul(h1, h1, WHAT)?, g.minus_one(), WHAT)?, 1, WHAT)?,
        theta_fiber_dim,
        WHAT,
    )?;
    let desc = HeckeDescriptor {
        genus: g,
        h1,
        h,
        m: h1.gcd(&h),
        theta1_target,
        theta2_target,
        theta_fiber_dim,
        parmod_dim,
    };
    desc.check()?;
    Ok(desc)
}

/// The moduli types on either side of the Hecke roof with the dimensions of
/// the central simple algebras representing their classes.
pub fn hecke_brauer_targets(d: &HeckeDescriptor) -> Result<[(BundleType, i64); 2]> {
    if d.h1 % d.h != 0 {
        return Err(Error::Precondition(
            "Brauer transport across the Hecke roof needs h | h1",
        ));
    }
    let top = d.theta1_target.bundle_type();
    let bottom = d.theta2_target.bundle_type();
    Ok([
        (top, rep_algebra_dim(top)?),
        (bottom, rep_algebra_dim(bottom)?),
    ])
}
