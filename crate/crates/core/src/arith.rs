//! Integer arithmetic on bundle types: the Euler form, gcds and moduli
//! dimensions.
//!
//! Everything is exact `i64` arithmetic with checked operations. An overflow
//! surfaces as [`Error::Overflow`]; nothing wraps.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) fn add(a: i64, b: i64, what: &'static str) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow(what))
}

pub(crate) fn sub(a: i64, b: i64, what: &'static str) -> Result<i64> {
    a.checked_sub(b).ok_or(Error::Overflow(what))
}

pub(crate) fn mul(a: i64, b: i64, what: &'static str) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow(what))
}

/// Genus of the underlying curve. Only `g >= 2` is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Genus(i64);

impl Genus {
    pub fn new(g: i64) -> Result<Self> {
        if g < 2 {
            return Err(Error::InvalidGenus(g));
        }
        Ok(Genus(g))
    }

    pub fn get(self) -> i64 {
        self.0
    }

    /// `g - 1`, the factor appearing in every Riemann-Roch count.
    pub fn minus_one(self) -> i64 {
        self.0 - 1
    }
}

impl TryFrom<i64> for Genus {
    type Error = Error;
    fn try_from(g: i64) -> Result<Self> {
        Genus::new(g)
    }
}

impl From<Genus> for i64 {
    fn from(g: Genus) -> i64 {
        g.0
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The type `(rank, degree)` of a vector bundle. Rank is always at least 1.
///
/// Serialized as the two-element array `[rank, degree]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(i64, i64)", into = "(i64, i64)")]
pub struct BundleType {
    rank: i64,
    degree: i64,
}

impl BundleType {
    pub fn new(rank: i64, degree: i64) -> Result<Self> {
        if rank < 1 {
            return Err(Error::InvalidRank(rank));
        }
        if degree == i64::MIN {
            return Err(Error::Overflow("bundle degree"));
        }
        Ok(BundleType { rank, degree })
    }

    pub fn rank(self) -> i64 {
        self.rank
    }

    pub fn degree(self) -> i64 {
        self.degree
    }

    /// `h = gcd(rank, degree)`; equal to the rank when the degree is 0.
    pub fn gcd(self) -> i64 {
        self.rank.gcd(&self.degree)
    }

    /// Rank divides degree, so the moduli space is a twist of `M(r, 0)`.
    pub fn is_terminal(self) -> bool {
        self.degree % self.rank == 0
    }

    pub fn formal(self) -> FormalType {
        FormalType::new(self.rank, self.degree)
    }
}

impl TryFrom<(i64, i64)> for BundleType {
    type Error = Error;
    fn try_from((r, d): (i64, i64)) -> Result<Self> {
        BundleType::new(r, d)
    }
}

impl From<BundleType> for (i64, i64) {
    fn from(t: BundleType) -> (i64, i64) {
        (t.rank, t.degree)
    }
}

impl TryFrom<FormalType> for BundleType {
    type Error = Error;
    fn try_from(t: FormalType) -> Result<Self> {
        BundleType::new(t.rank, t.degree)
    }
}

impl fmt::Display for BundleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.rank, self.degree)
    }
}

/// An integer vector `(rank, degree)` with no sign constraints.
///
/// Kernels, cokernels and torsion parts in the genericity count can have rank
/// zero, and bilinearity checks need formal differences of types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FormalType {
    pub rank: i64,
    pub degree: i64,
}

impl FormalType {
    pub const ZERO: FormalType = FormalType { rank: 0, degree: 0 };

    pub const fn new(rank: i64, degree: i64) -> Self {
        FormalType { rank, degree }
    }

    pub fn checked_add(self, other: FormalType) -> Result<FormalType> {
        Ok(FormalType {
            rank: add(self.rank, other.rank, "formal type sum")?,
            degree: add(self.degree, other.degree, "formal type sum")?,
        })
    }

    pub fn checked_sub(self, other: FormalType) -> Result<FormalType> {
        Ok(FormalType {
            rank: sub(self.rank, other.rank, "formal type difference")?,
            degree: sub(self.degree, other.degree, "formal type difference")?,
        })
    }

    pub fn checked_scale(self, k: i64) -> Result<FormalType> {
        Ok(FormalType {
            rank: mul(self.rank, k, "formal type multiple")?,
            degree: mul(self.degree, k, "formal type multiple")?,
        })
    }
}

impl From<BundleType> for FormalType {
    fn from(t: BundleType) -> Self {
        t.formal()
    }
}

impl fmt::Display for FormalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.rank, self.degree)
    }
}

/// Euler form on formal types:
/// `chi(F, E) = r_F d_E - r_E d_F - r_E r_F (g - 1)`.
///
/// Bilinear in both arguments; zero whenever either side is the zero vector.
pub fn euler_form(f: FormalType, e: FormalType, g: Genus) -> Result<i64> {
    const WHAT: &str = "Euler form";
    let a = mul(f.rank, e.degree, WHAT)?;
    let b = mul(e.rank, f.degree, WHAT)?;
    let c = mul(mul(e.rank, f.rank, WHAT)?, g.minus_one(), WHAT)?;
    sub(sub(a, b, WHAT)?, c, WHAT)
}

/// `chi(beta, alpha)` for genuine bundle types. Equals `hom - ext` for
/// bundles `F` of type `beta` and `E` of type `alpha`.
pub fn euler_chi(beta: BundleType, alpha: BundleType, g: Genus) -> Result<i64> {
    euler_form(beta.formal(), alpha.formal(), g)
}

/// Positive `gcd(rank, degree)`.
pub fn gcd_type(t: BundleType) -> i64 {
    t.gcd()
}

/// A moduli space `M(r, d)` over a curve of a given genus, with its gcd and
/// dimension `r^2 (g - 1) + 1` precomputed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuliDescriptor {
    pub genus: Genus,
    pub rank: i64,
    pub degree: i64,
    pub h: i64,
    pub dim: i64,
}

impl ModuliDescriptor {
    pub fn new(genus: Genus, ty: BundleType) -> Result<Self> {
        let r = ty.rank();
        let dim = add(
            mul(
                mul(r, r, "moduli dimension")?,
                genus.minus_one(),
                "moduli dimension",
            )?,
            1,
            "moduli dimension",
        )?;
        Ok(ModuliDescriptor {
            genus,
            rank: r,
            degree: ty.degree(),
            h: ty.gcd(),
            dim,
        })
    }

    pub fn bundle_type(&self) -> BundleType {
        BundleType {
            rank: self.rank,
            degree: self.degree,
        }
    }

    /// Re-derive `h` and `dim` and compare with the stored values.
    pub fn check(&self) -> Result<()> {
        let fresh = ModuliDescriptor::new(self.genus, BundleType::new(self.rank, self.degree)?)?;
        if fresh != *self {
            return Err(Error::invariant(
                "moduli descriptor",
                format!("stored {self:?}, recomputed {fresh:?}"),
            ));
        }
        Ok(())
    }
}

/// `dim M(r, d) = r^2 (g - 1) + 1`.
pub fn moduli_dim(m: &ModuliDescriptor) -> Result<i64> {
    let r = m.rank;
    add(
        mul(
            mul(r, r, "moduli dimension")?,
            m.genus.minus_one(),
            "moduli dimension",
        )?,
        1,
        "moduli dimension",
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(r: i64, d: i64) -> BundleType {
        BundleType::new(r, d).unwrap()
    }

    fn g(n: i64) -> Genus {
        Genus::new(n).unwrap()
    }

    #[test]
    fn euler_chi_examples() {
        assert_eq!(euler_chi(t(4, -3), t(3, 1), g(2)).unwrap(), 1);
        assert_eq!(euler_chi(t(2, 5), t(2, 5), g(3)).unwrap(), -8);
        assert_eq!(euler_chi(t(3, -2), t(4, 2), g(2)).unwrap(), 2);
    }

    #[test]
    fn moduli_dim_examples() {
        let dim = |gg, r, d| moduli_dim(&ModuliDescriptor::new(g(gg), t(r, d)).unwrap()).unwrap();
        assert_eq!(dim(2, 3, 1), 10);
        assert_eq!(dim(2, 4, 2), 17);
        for gg in 2..10 {
            assert_eq!(dim(gg, 1, 7), gg);
        }
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd_type(t(5, 3)), 1);
        assert_eq!(gcd_type(t(4, 2)), 2);
        assert_eq!(gcd_type(t(6, 0)), 6);
        assert_eq!(gcd_type(t(6, -4)), 2);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(Genus::new(1), Err(Error::InvalidGenus(1)));
        assert_eq!(Genus::new(-3), Err(Error::InvalidGenus(-3)));
        assert_eq!(BundleType::new(0, 1), Err(Error::InvalidRank(0)));
        assert!(BundleType::new(1, i64::MIN).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let big = t(i64::MAX / 2, 1);
        assert_eq!(
            euler_chi(big, big, g(3)),
            Err(Error::Overflow("Euler form"))
        );
        let m = ModuliDescriptor::new(g(2), t(1 << 40, 0));
        assert_eq!(m, Err(Error::Overflow("moduli dimension")));
    }

    #[test]
    fn serde_shapes() {
        assert_eq!(serde_json::to_string(&t(3, -1)).unwrap(), "[3,-1]");
        assert!(serde_json::from_str::<BundleType>("[0,1]").is_err());
        assert!(serde_json::from_str::<Genus>("1").is_err());
    }

    fn formal() -> impl Strategy<Value = FormalType> {
        (-1000i64..=1000, -1000i64..=1000).prop_map(|(r, d)| FormalType::new(r, d))
    }

    proptest! {
        #[test]
        fn bilinear(a in formal(), b in formal(), c in formal(), gg in 2i64..20) {
            let gg = g(gg);
            let ab = a.checked_add(b).unwrap();
            let bc = b.checked_add(c).unwrap();
            prop_assert_eq!(
                euler_form(ab, c, gg).unwrap(),
                euler_form(a, c, gg).unwrap() + euler_form(b, c, gg).unwrap()
            );
            prop_assert_eq!(
                euler_form(a, bc, gg).unwrap(),
                euler_form(a, b, gg).unwrap() + euler_form(a, c, gg).unwrap()
            );
        }

        #[test]
        fn symmetric_part(a in formal(), b in formal(), gg in 2i64..20) {
            let gg = g(gg);
            prop_assert_eq!(
                euler_form(a, b, gg).unwrap() + euler_form(b, a, gg).unwrap(),
                -2 * a.rank * b.rank * gg.minus_one()
            );
            prop_assert_eq!(euler_form(a, a, gg).unwrap(), -a.rank * a.rank * gg.minus_one());
        }

        #[test]
        fn dim_increasing_in_rank(r in 1i64..500, d in -500i64..500, gg in 2i64..20) {
            let gg = g(gg);
            let lo = ModuliDescriptor::new(gg, t(r, d)).unwrap();
            let hi = ModuliDescriptor::new(gg, t(r + 1, d)).unwrap();
            prop_assert!(hi.dim > lo.dim);
            prop_assert!(lo.check().is_ok());
            prop_assert_eq!(lo.rank % lo.h, 0);
            prop_assert_eq!(lo.degree % lo.h, 0);
        }
    }
}
