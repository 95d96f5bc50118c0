//! The auxiliary type `beta = (s, e)` attached to a bundle type and the
//! kernel recursion it drives.
//!
//! A general bundle `E` of type `alpha = (r, d)` is a quotient of `F^h`, where
//! `F` has type `beta`, `h = gcd(r, d)` and `chi(beta, alpha) = h`. The kernel
//! has type `alpha1 = h * beta - alpha`, of smaller rank unless `r | d`, which
//! gives the descent map `lambda_F : M(r, d) -> M(r1, d1)`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{add, euler_chi, mul, sub, BundleType, Genus, ModuliDescriptor};
use crate::error::{Error, Result};

/// Solution of `s d - t r = h` with `s` in the admissible window, and the
/// degree `e = t - (g - 1) s` of the auxiliary bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetaSolution {
    pub s: i64,
    pub t: i64,
    pub e: i64,
}

impl BetaSolution {
    pub fn beta(&self) -> BundleType {
        BundleType::new(self.s, self.e).expect("s >= 2 by construction")
    }
}

/// Find the unique `beta = (s, e)` with `chi(beta, alpha) = h` and
/// `r/h < s < 2r/h` (or `s = 2` when `h = r`).
pub fn solve_beta(g: Genus, alpha: BundleType) -> Result<BetaSolution> {
    const WHAT: &str = "auxiliary type";
    let (r, d) = (alpha.rank(), alpha.degree());
    let h = alpha.gcd();

    let (s, t) = if h == r {
        // t = (2d - r) / r, exact since r | d.
        (2, sub(mul(2, d / r, WHAT)?, 1, WHAT)?)
    } else {
        // d*x + r*y = h, so (s, t) = (x, -y) solves s d - t r = h.
        let eg = d.extended_gcd(&r);
        if eg.gcd != h {
            return Err(Error::invariant(
                "extended gcd",
                format!("gcd({d},{r}) gave {} but h = {h}", eg.gcd),
            ));
        }
        let step = r / h;
        // Shift by multiples of r/h into [r/h + 1, 2r/h - 1].
        let s = add(step + 1, sub(eg.x, step + 1, WHAT)?.rem_euclid(step), WHAT)?;
        let num = sub(mul(s, d, WHAT)?, h, WHAT)?;
        if num % r != 0 {
            return Err(Error::invariant(
                "s d - t r = h",
                format!("no integral t for s = {s} on {alpha}"),
            ));
        }
        (s, num / r)
    };

    if h < r && !(r / h < s && s < 2 * (r / h)) {
        return Err(Error::invariant(
            "r/h < s < 2r/h",
            format!("s = {s} outside window for {alpha}"),
        ));
    }
    let e = sub(t, mul(g.minus_one(), s, WHAT)?, WHAT)?;
    let sol = BetaSolution { s, t, e };
    let chi = euler_chi(sol.beta(), alpha, g)?;
    if chi != h {
        return Err(Error::invariant(
            "chi(beta, alpha) = h",
            format!("chi = {chi}, h = {h} for {alpha}"),
        ));
    }
    Ok(sol)
}

/// `alpha1 = h * beta - alpha`, the type of the kernel of `F^h -> E`.
pub fn kernel_type(h: i64, beta: BundleType, alpha: BundleType) -> Result<BundleType> {
    const WHAT: &str = "kernel type";
    let r1 = sub(mul(h, beta.rank(), WHAT)?, alpha.rank(), WHAT)?;
    let d1 = sub(mul(h, beta.degree(), WHAT)?, alpha.degree(), WHAT)?;
    if r1 < 1 {
        return Err(Error::invariant(
            "kernel rank >= 1",
            format!("h * {beta} - {alpha} has rank {r1}"),
        ));
    }
    BundleType::new(r1, d1)
}

/// One application of `lambda_F` with every derived integer recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentStep {
    pub alpha: BundleType,
    pub beta: BundleType,
    pub alpha1: BundleType,
    pub h: i64,
    pub h1: i64,
    /// `chi(alpha1, beta)`, the rank of `Hom(E1, F)` for general `E1`.
    pub chi_a1_beta: i64,
    /// `chi(alpha1, beta) / h1`; the bundle `Hom(E1, F)` has rank `l * h1`.
    pub l: i64,
    /// Fibre dimension of `lambda_F`: `h (chi(alpha1, beta) - h)`.
    pub fiber_dim: i64,
}

impl DescentStep {
    /// Re-check every identity of the step.
    pub fn check(&self, g: Genus) -> Result<()> {
        const WHAT: &str = "descent step check";
        let (r, d) = (self.alpha.rank(), self.alpha.degree());
        let (r1, d1) = (self.alpha1.rank(), self.alpha1.degree());
        let h = self.h;

        if h != self.alpha.gcd() || self.h1 != self.alpha1.gcd() {
            return Err(Error::invariant("h = gcd", format!("{self:?}")));
        }
        if euler_chi(self.beta, self.alpha, g)? != h {
            return Err(Error::invariant(
                "chi(beta, alpha) = h",
                format!("{self:?}"),
            ));
        }
        if kernel_type(h, self.beta, self.alpha)? != self.alpha1 {
            return Err(Error::invariant(
                "alpha1 = h beta - alpha",
                format!("{self:?}"),
            ));
        }
        if h < r && r1 >= r {
            return Err(Error::invariant("r1 < r", format!("{self:?}")));
        }
        if self.h1 % h != 0 {
            return Err(Error::invariant(
                "h | h1",
                format!("h = {h}, h1 = {}", self.h1),
            ));
        }
        if d1 != sub(mul(h, self.beta.degree(), WHAT)?, d, WHAT)? {
            return Err(Error::invariant("d1 = h e - d", format!("{self:?}")));
        }
        if self.chi_a1_beta != euler_chi(self.alpha1, self.beta, g)? {
            return Err(Error::invariant("chi(alpha1, beta)", format!("{self:?}")));
        }
        if self.chi_a1_beta % self.h1 != 0 || self.l != self.chi_a1_beta / self.h1 {
            return Err(Error::invariant(
                "h1 | chi(alpha1, beta)",
                format!("chi = {}, h1 = {}", self.chi_a1_beta, self.h1),
            ));
        }
        let fiber = mul(h, sub(self.chi_a1_beta, h, WHAT)?, WHAT)?;
        if self.fiber_dim != fiber {
            return Err(Error::invariant(
                "fiber_dim = h (chi - h)",
                format!("{self:?}"),
            ));
        }
        let lhs = mul(
            sub(mul(r, r, WHAT)?, mul(r1, r1, WHAT)?, WHAT)?,
            g.minus_one(),
            WHAT,
        )?;
        if lhs != fiber {
            return Err(Error::invariant(
                "(r^2 - r1^2)(g - 1) = h (chi(alpha1, beta) - h)",
                format!("{lhs} != {fiber} at {}", self.alpha),
            ));
        }
        Ok(())
    }
}

/// Build the descent step for a non-terminal type (`h < r`).
pub fn descent_step(g: Genus, alpha: BundleType) -> Result<DescentStep> {
    const WHAT: &str = "descent step";
    if alpha.is_terminal() {
        return Err(Error::Precondition(
            "descent step needs rank not dividing degree",
        ));
    }
    let h = alpha.gcd();
    let beta = solve_beta(g, alpha)?.beta();
    let alpha1 = kernel_type(h, beta, alpha)?;
    let h1 = alpha1.gcd();
    let chi_a1_beta = euler_chi(alpha1, beta, g)?;
    let step = DescentStep {
        alpha,
        beta,
        alpha1,
        h,
        h1,
        chi_a1_beta,
        l: chi_a1_beta / h1,
        fiber_dim: mul(h, sub(chi_a1_beta, h, WHAT)?, WHAT)?,
    };
    step.check(g)?;
    Ok(step)
}

/// The iterated descent from `alpha` down to a type whose rank divides its
/// degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionChain {
    pub genus: Genus,
    pub initial: ModuliDescriptor,
    pub steps: Vec<DescentStep>,
    pub terminal: BundleType,
    /// Degree of the line bundle that twists the terminal type to degree 0,
    /// i.e. `-d_term / r_term`.
    pub terminal_twist: i64,
}

impl ReductionChain {
    pub fn check(&self) -> Result<()> {
        self.initial.check()?;
        let mut current = self.initial.bundle_type();
        for step in &self.steps {
            if step.alpha != current {
                return Err(Error::invariant(
                    "chain continuity",
                    format!(
                        "step starts at {} but previous ended at {current}",
                        step.alpha
                    ),
                ));
            }
            step.check(self.genus)?;
            current = step.alpha1;
        }
        if current != self.terminal || !self.terminal.is_terminal() {
            return Err(Error::invariant(
                "terminal rank divides degree",
                format!("terminal {}", self.terminal),
            ));
        }
        if self.steps.len() as i64 > self.initial.rank {
            return Err(Error::invariant(
                "chain length <= rank",
                format!("{}", self.steps.len()),
            ));
        }
        if self.terminal_twist != -(self.terminal.degree() / self.terminal.rank()) {
            return Err(Error::invariant(
                "terminal twist",
                format!("{}", self.terminal_twist),
            ));
        }
        Ok(())
    }
}

/// Iterate [`descent_step`] until the rank divides the degree.
pub fn descent_chain(g: Genus, alpha: BundleType) -> Result<ReductionChain> {
    let initial = ModuliDescriptor::new(g, alpha)?;
    let mut steps = Vec::new();
    let mut current = alpha;
    while !current.is_terminal() {
        if steps.len() as i64 >= alpha.rank() {
            return Err(Error::invariant(
                "descent terminates within rank steps",
                format!("{alpha} did not terminate"),
            ));
        }
        let step = descent_step(g, current)?;
        current = step.alpha1;
        steps.push(step);
    }
    let chain = ReductionChain {
        genus: g,
        initial,
        steps,
        terminal: current,
        terminal_twist: -(current.degree() / current.rank()),
    };
    chain.check()?;
    Ok(chain)
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

    /// Scan every integer s in the closed window [r/h, 2r/h] (or {2} when
    /// h = r) for an integral t with s d - t r = h.
    fn scan_beta(gg: i64, r: i64, d: i64) -> Vec<(i64, i64, i64)> {
        let h = num_integer::gcd(r, d);
        let window: Vec<i64> = if h == r {
            vec![2]
        } else {
            (r / h..=2 * r / h).collect()
        };
        window
            .into_iter()
            .filter(|s| (s * d - h) % r == 0)
            .map(|s| {
                let t = (s * d - h) / r;
                (s, t, t - (gg - 1) * s)
            })
            .collect()
    }

    #[test]
    fn solve_beta_examples() {
        let cases = [
            (2, 3, 1, (4, 1, -3)),
            (2, 4, 2, (3, 1, -2)),
            (3, 6, 4, (5, 3, -7)),
            (2, 2, 0, (2, -1, -3)),
            (2, 5, 3, (7, 4, -3)),
        ];
        for (gg, r, d, (s, tt, e)) in cases {
            assert_eq!(scan_beta(gg, r, d), vec![(s, tt, e)]);
            let sol = solve_beta(g(gg), t(r, d)).unwrap();
            assert_eq!((sol.s, sol.t, sol.e), (s, tt, e), "({r},{d}) g={gg}");
        }
    }

    #[test]
    fn kernel_type_examples() {
        assert_eq!(kernel_type(1, t(4, -3), t(3, 1)).unwrap(), t(1, -4));
        assert_eq!(kernel_type(2, t(3, -2), t(4, 2)).unwrap(), t(2, -6));
        assert_eq!(kernel_type(1, t(7, -3), t(5, 3)).unwrap(), t(2, -6));
        assert!(kernel_type(1, t(2, 0), t(3, 1)).is_err());
    }

    #[test]
    fn descent_step_examples() {
        let s = descent_step(g(2), t(3, 1)).unwrap();
        assert_eq!(
            (s.alpha1, s.chi_a1_beta, s.l, s.fiber_dim),
            (t(1, -4), 9, 9, 8)
        );
        let s = descent_step(g(2), t(4, 2)).unwrap();
        assert_eq!(
            (s.alpha1, s.chi_a1_beta, s.l, s.fiber_dim),
            (t(2, -6), 8, 4, 12)
        );
        let s = descent_step(g(2), t(5, 3)).unwrap();
        assert_eq!(
            (s.alpha1, s.chi_a1_beta, s.l, s.fiber_dim),
            (t(2, -6), 22, 11, 21)
        );
        assert_eq!(s.beta, t(7, -3));
    }

    #[test]
    fn descent_step_rejects_terminal() {
        assert!(matches!(
            descent_step(g(2), t(2, 4)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn descent_chain_examples() {
        let c = descent_chain(g(2), t(3, 1)).unwrap();
        assert_eq!(c.steps.len(), 1);
        assert_eq!((c.terminal, c.terminal_twist), (t(1, -4), 4));
        let c = descent_chain(g(2), t(5, 3)).unwrap();
        assert_eq!(c.steps.len(), 1);
        assert_eq!((c.terminal, c.terminal_twist), (t(2, -6), 3));
        let c = descent_chain(g(2), t(1, 7)).unwrap();
        assert!(c.steps.is_empty());
        assert_eq!((c.terminal, c.terminal_twist), (t(1, 7), -7));
    }

    #[test]
    fn tampered_step_is_caught() {
        let mut s = descent_step(g(2), t(5, 3)).unwrap();
        s.fiber_dim += 1;
        assert!(matches!(s.check(g(2)), Err(Error::Invariant { .. })));
        let mut c = descent_chain(g(2), t(7, 3)).unwrap();
        c.terminal_twist += 1;
        assert!(c.check().is_err());
    }

    #[test]
    fn endpoints_never_solve() {
        for r in 2..30i64 {
            for d in -30..30i64 {
                let h = num_integer::gcd(r, d);
                if h == r {
                    continue;
                }
                for s in [r / h, 2 * r / h] {
                    assert_ne!((s * d - h) % r, 0, "({r},{d}) s={s}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn solve_beta_matches_scan(gg in 2i64..6, r in 1i64..40, d in -60i64..60) {
            let sol = solve_beta(g(gg), t(r, d)).unwrap();
            prop_assert_eq!(scan_beta(gg, r, d), vec![(sol.s, sol.t, sol.e)]);
        }

        #[test]
        fn chain_invariants(gg in 2i64..6, r in 1i64..40, d in -60i64..60) {
            let c = descent_chain(g(gg), t(r, d)).unwrap();
            prop_assert!(c.steps.len() as i64 <= r);
            let mut prev = r;
            for s in &c.steps {
                prop_assert!(s.alpha1.rank() < prev);
                prev = s.alpha1.rank();
                prop_assert_eq!(s.h1 % s.h, 0);
                prop_assert_eq!(s.chi_a1_beta % s.h1, 0);
                prop_assert_eq!(s.alpha1.degree(), s.h * s.beta.degree() - s.alpha.degree());
            }
            prop_assert_eq!(c.terminal.degree() % c.terminal.rank(), 0);
        }
    }
}
