//! Dimension counts for a nonzero map `phi : F -> E` between general bundles.
//!
//! A map splits as `0 -> K -> F -> I -> 0` and `0 -> I -> E -> Q -> 0`, where
//! `Q` has torsion `T` of degree `d_T`; `Q' = Q / T` and `I'` is the preimage
//! of `T` in `E`. Comparing the parameter counts `p0` (triples `(F, E, [phi])`)
//! and `p1` (configurations with given splitting data) bounds `ext(F, E)`.
//! When `K` and `Q` both have positive rank, or torsion appears with unequal
//! ranks, the bound is negative, so such a splitting cannot be generic.
//!
//! The counts assume `E` and `F` stable (`hom(I, K) = hom(Q', I') = 0`).
//! That assumption is not checked here.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{add, euler_form, mul, sub, BundleType, FormalType, Genus};
use crate::error::{Error, Result};

/// Exact rational used for the final bound.
pub type Rational = Ratio<i64>;

/// Kernel / image / torsion splitting of a map `F -> E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HirschConfig {
    pub genus: Genus,
    pub f: BundleType,
    pub e: BundleType,
    pub r_k: i64,
    pub d_k: i64,
    pub d_t: i64,
}

impl HirschConfig {
    pub fn new(
        genus: Genus,
        f: BundleType,
        e: BundleType,
        r_k: i64,
        d_k: i64,
        d_t: i64,
    ) -> Result<Self> {
        let c = HirschConfig {
            genus,
            f,
            e,
            r_k,
            d_k,
            d_t,
        };
        if r_k < 0 || d_t < 0 {
            return Err(Error::InvalidInput(format!(
                "need r_K >= 0 and d_T >= 0, got {r_k}, {d_t}"
            )));
        }
        if r_k == 0 && d_k != 0 {
            return Err(Error::InvalidInput(format!(
                "zero kernel must have degree 0, got {d_k}"
            )));
        }
        let i = c.image()?;
        if i.rank < 1 {
            return Err(Error::InvalidInput(format!(
                "map must be nonzero: image rank {}",
                i.rank
            )));
        }
        let q = c.cokernel()?;
        if q.rank < 0 {
            return Err(Error::InvalidInput(format!(
                "image rank {} exceeds rank of E",
                i.rank
            )));
        }
        if q.rank == 0 && d_t != q.degree {
            return Err(Error::InvalidInput(format!(
                "torsion cokernel must have d_T = d_Q = {}, got {d_t}",
                q.degree
            )));
        }
        Ok(c)
    }

    pub fn kernel(&self) -> FormalType {
        FormalType::new(self.r_k, self.d_k)
    }

    pub fn image(&self) -> Result<FormalType> {
        self.f.formal().checked_sub(self.kernel())
    }

    pub fn cokernel(&self) -> Result<FormalType> {
        self.e.formal().checked_sub(self.image()?)
    }

    /// `Q' = Q / T`.
    pub fn cokernel_free(&self) -> Result<FormalType> {
        let q = self.cokernel()?;
        Ok(FormalType::new(q.rank, sub(q.degree, self.d_t, "Q'")?))
    }

    /// `I'`, the preimage of the torsion in `E`.
    pub fn saturation(&self) -> Result<FormalType> {
        let i = self.image()?;
        Ok(FormalType::new(i.rank, add(i.degree, self.d_t, "I'")?))
    }

    fn chi(&self, a: FormalType, b: FormalType) -> Result<i64> {
        euler_form(a, b, self.genus)
    }
}

/// `p0 = 1 - chi(F, F) + 1 - chi(E, E) + hom(F, E) - 1`: the number of
/// parameters of triples `(F, E, [phi])`.
pub fn p0(f: BundleType, e: BundleType, g: Genus, hom_fe: i64) -> Result<i64> {
    const WHAT: &str = "p0";
    if hom_fe < 1 {
        return Err(Error::Precondition("p0 needs hom(F, E) >= 1"));
    }
    let chi_ff = euler_form(f.formal(), f.formal(), g)?;
    let chi_ee = euler_form(e.formal(), e.formal(), g)?;
    let s = sub(1, chi_ff, WHAT)?;
    let s = add(s, sub(1, chi_ee, WHAT)?, WHAT)?;
    add(s, sub(hom_fe, 1, WHAT)?, WHAT)
}

/// `p1 = 1 - chi(F, K) - chi(Q, E) - chi(I, I) - r_Q d_T`, the parameter
/// count of configurations with the given splitting.
pub fn p1(c: &HirschConfig) -> Result<i64> {
    const WHAT: &str = "p1";
    let (k, i, q) = (c.kernel(), c.image()?, c.cokernel()?);
    let mut v = sub(1, c.chi(c.f.formal(), k)?, WHAT)?;
    v = sub(v, c.chi(q, c.e.formal())?, WHAT)?;
    v = sub(v, c.chi(i, i)?, WHAT)?;
    sub(v, mul(q.rank, c.d_t, WHAT)?, WHAT)
}

/// `ext(F, E) <= -chi(K, Q) - r_Q d_T`.
pub fn ext_upper_bound(c: &HirschConfig) -> Result<i64> {
    const WHAT: &str = "ext bound";
    let (k, q) = (c.kernel(), c.cokernel()?);
    let neg = c.chi(k, q)?.checked_neg().ok_or(Error::Overflow(WHAT))?;
    sub(neg, mul(q.rank, c.d_t, WHAT)?, WHAT)
}

/// `chi(K, I) >= 0` and `chi(I', Q') >= 0`.
pub fn necessary_conditions(c: &HirschConfig) -> Result<bool> {
    let ki = c.chi(c.kernel(), c.image()?)?;
    let iq = c.chi(c.saturation()?, c.cokernel_free()?)?;
    Ok(ki >= 0 && iq >= 0)
}

/// `-r_K r_Q (g - 1) - d_T (r_Q + r_K r_E / r_I)`, exact.
pub fn final_upper_bound(c: &HirschConfig) -> Result<Rational> {
    const WHAT: &str = "final bound";
    let (r_k, r_i, r_q, r_e) = (c.r_k, c.image()?.rank, c.cokernel()?.rank, c.e.rank());
    if r_i < 1 {
        return Err(Error::Precondition("final bound needs r_I >= 1"));
    }
    // Over the common denominator r_I.
    let a = mul(
        mul(mul(r_k, r_q, WHAT)?, c.genus.minus_one(), WHAT)?,
        r_i,
        WHAT,
    )?;
    let b = mul(
        c.d_t,
        add(mul(r_q, r_i, WHAT)?, mul(r_k, r_e, WHAT)?, WHAT)?,
        WHAT,
    )?;
    let numer = add(a, b, WHAT)?
        .checked_neg()
        .ok_or(Error::Overflow(WHAT))?;
    Ok(Rational::new(numer, r_i))
}

/// `r_I chi(K, Q) >= r_I r_K r_Q (g - 1) + d_T r_K r_E`, the inequality the
/// necessary conditions imply.
pub fn check_implication(c: &HirschConfig) -> Result<bool> {
    const WHAT: &str = "implication";
    if !necessary_conditions(c)? {
        return Err(Error::Precondition(
            "implication check needs the necessary conditions",
        ));
    }
    let (r_k, r_i, r_q, r_e) = (c.r_k, c.image()?.rank, c.cokernel()?.rank, c.e.rank());
    let lhs = mul(r_i, c.chi(c.kernel(), c.cokernel()?)?, WHAT)?;
    let rhs = add(
        mul(
            mul(mul(r_i, r_k, WHAT)?, r_q, WHAT)?,
            c.genus.minus_one(),
            WHAT,
        )?,
        mul(mul(c.d_t, r_k, WHAT)?, r_e, WHAT)?,
        WHAT,
    )?;
    Ok(lhs >= rhs)
}

/// `chi(Q', I') = chi(Q, I) + r_E d_T`.
pub fn torsion_identity(c: &HirschConfig) -> Result<bool> {
    let lhs = c.chi(c.cokernel_free()?, c.saturation()?)?;
    let base = c.chi(c.cokernel()?, c.image()?)?;
    let rhs = add(
        base,
        mul(c.e.rank(), c.d_t, "torsion identity")?,
        "torsion identity",
    )?;
    Ok(lhs == rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// Passes the necessary conditions with a nonnegative bound and no torsion
    /// unless the ranks agree: the shape a generic map may take.
    ConsistentGeneric,
    /// Passes the necessary conditions but forces `ext(F, E) < 0`.
    GenericallyImpossible,
    /// `K = Q' = 0` with torsion cokernel; only possible when `r_E = r_F`.
    EqualRankTorsionAllowed,
    /// General bundles cannot sit in these sequences at all.
    FailsNecessary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityVerdict {
    pub passes_necessary: bool,
    pub ext_upper: i64,
    pub final_upper: Rational,
    /// `None` when the necessary conditions fail.
    pub implication: Option<bool>,
    pub torsion_identity: bool,
    pub classification: Classification,
}

pub fn classify(c: &HirschConfig) -> Result<GenericityVerdict> {
    let passes_necessary = necessary_conditions(c)?;
    let final_upper = final_upper_bound(c)?;
    let implication = if passes_necessary {
        Some(check_implication(c)?)
    } else {
        None
    };
    let classification = if !passes_necessary {
        Classification::FailsNecessary
    } else if final_upper < Rational::from_integer(0) {
        Classification::GenericallyImpossible
    } else if c.d_t > 0 {
        if c.f.rank() != c.e.rank() {
            return Err(Error::invariant(
                "torsion only with r_E = r_F",
                format!("{c:?} has a nonnegative bound"),
            ));
        }
        Classification::EqualRankTorsionAllowed
    } else {
        Classification::ConsistentGeneric
    };
    Ok(GenericityVerdict {
        passes_necessary,
        ext_upper: ext_upper_bound(c)?,
        final_upper,
        implication,
        torsion_identity: torsion_identity(c)?,
        classification,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HirschEntry {
    pub config: HirschConfig,
    pub verdict: GenericityVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HirschEnumeration {
    pub genus: Genus,
    pub f: BundleType,
    pub e: BundleType,
    pub max_dt: i64,
    /// Default `d_K` window half-width `|d_F| + r_F (2g + 2)`.
    pub default_window: i64,
    pub entries: Vec<HirschEntry>,
    /// Set when the default window would have clipped configurations
    /// satisfying the necessary conditions; the window was widened.
    pub warnings: Vec<String>,
}

impl HirschEnumeration {
    pub fn implication_failures(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.verdict.implication == Some(false))
            .count()
    }

    pub fn torsion_identity_failures(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| !e.verdict.torsion_identity)
            .count()
    }
}

fn floor_div(a: i64, b: i64) -> i64 {
    num_integer::Integer::div_floor(&a, &b)
}

/// Closed `d_K` range outside which the necessary conditions fail, for a
/// kernel of rank `r_k >= 1` (any `d_T >= 0`).
fn necessary_window(g: Genus, f: BundleType, e: BundleType, r_k: i64) -> Result<(i64, i64)> {
    const WHAT: &str = "degree window";
    let (r_f, d_f, r_e, d_e) = (f.rank(), f.degree(), e.rank(), e.degree());
    let r_i = r_f - r_k;
    let r_q = r_e - r_i;
    // chi(K, I) >= 0  <=>  r_F d_K <= r_K d_F - r_K r_I (g - 1).
    let hi_num = sub(
        mul(r_k, d_f, WHAT)?,
        mul(mul(r_k, r_i, WHAT)?, g.minus_one(), WHAT)?,
        WHAT,
    )?;
    let hi = floor_div(hi_num, r_f);
    // chi(I', Q') >= 0 with d_T = 0  <=>  r_E d_I <= r_I d_E - r_I r_Q (g - 1).
    let di_num = sub(
        mul(r_i, d_e, WHAT)?,
        mul(mul(r_i, r_q, WHAT)?, g.minus_one(), WHAT)?,
        WHAT,
    )?;
    let lo = sub(d_f, floor_div(di_num, r_e), WHAT)?;
    Ok((lo, hi))
}

/// Every splitting with `0 <= r_K < r_F`, `d_K` in the window and
/// `0 <= d_T <= max_dt`, classified. Entries are in lexicographic
/// `(r_K, d_K, d_T)` order.
pub fn enumerate_configs(
    g: Genus,
    f: BundleType,
    e: BundleType,
    max_dt: i64,
) -> Result<HirschEnumeration> {
    const WHAT: &str = "degree window";
    if max_dt < 0 {
        return Err(Error::InvalidInput(format!(
            "max d_T must be >= 0, got {max_dt}"
        )));
    }
    let default_window = add(
        f.degree().checked_abs().ok_or(Error::Overflow(WHAT))?,
        mul(f.rank(), add(mul(2, g.get(), WHAT)?, 2, WHAT)?, WHAT)?,
        WHAT,
    )?;
    let mut warnings = Vec::new();
    let mut cells: Vec<(i64, i64)> = Vec::new();
    let min_rk = (f.rank() - e.rank()).max(0);
    for r_k in min_rk..f.rank() {
        if r_k == 0 {
            cells.push((0, 0));
            continue;
        }
        let (lo, hi) = necessary_window(g, f, e, r_k)?;
        let (mut from, mut to) = (-default_window, default_window);
        if lo <= hi && (lo < from || hi > to) {
            warnings.push(format!(
                "r_K = {r_k}: default d_K window [{from}, {to}] clips admissible range [{lo}, {hi}]; widened"
            ));
            from = from.min(lo);
            to = to.max(hi);
        }
        cells.extend((from..=to).map(|d_k| (r_k, d_k)));
    }

    let entries: Vec<Vec<HirschEntry>> = cells
        .par_iter()
        .map(|&(r_k, d_k)| -> Result<Vec<HirschEntry>> {
            let mut out = Vec::new();
            for d_t in 0..=max_dt {
                match HirschConfig::new(g, f, e, r_k, d_k, d_t) {
                    Ok(config) => out.push(HirschEntry {
                        verdict: classify(&config)?,
                        config,
                    }),
                    Err(err) if err.is_invalid_input() => continue,
                    Err(err) => return Err(err),
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    Ok(HirschEnumeration {
        genus: g,
        f,
        e,
        max_dt,
        default_window,
        entries: entries.into_iter().flatten().collect(),
        warnings,
    })
}
