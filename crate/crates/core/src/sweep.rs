//! Exhaustive consistency sweep over a box of `(genus, rank, degree)` triples.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{euler_chi, BundleType, Genus};
use crate::brauer::{verify_main, Verdict};
use crate::descent::{descent_chain, solve_beta};
use crate::error::{Error, Result};
use crate::hecke::{hecke_brauer_targets, make_hecke};
use crate::mu::{affine_dim, compose_mu};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub genus_min: i64,
    pub genus_max: i64,
    pub max_rank: i64,
    pub max_degree: i64,
    /// Worker threads; `0` lets rayon pick.
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SweepChecks {
    pub beta_unique: bool,
    pub descent: bool,
    pub mu_ledger: bool,
    pub brauer: bool,
    pub hecke: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub genus: i64,
    pub rank: i64,
    pub degree: i64,
    pub h: i64,
    pub chain_len: usize,
    pub affine_dim: Option<i64>,
    pub checks: SweepChecks,
}

impl SweepRow {
    pub fn passed(&self) -> bool {
        let c = &self.checks;
        c.beta_unique && c.descent && c.mu_ledger && c.brauer && c.hecke
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub genus: i64,
    pub rank: i64,
    pub degree: i64,
    pub invariant: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub genus_min: i64,
    pub genus_max: i64,
    pub max_rank: i64,
    pub max_degree: i64,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<SweepFailure>,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn total(&self) -> usize {
        self.rows.len()
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Count the `s` in the admissible window for which `s*d - h` is divisible
/// by `r` and the resulting `beta` pairs with `alpha` to `h`.
fn beta_candidates(g: Genus, alpha: BundleType) -> Result<usize> {
    let (r, d, h) = (alpha.rank(), alpha.degree(), alpha.gcd());
    let window: Vec<i64> = if h == r {
        vec![2]
    } else {
        (r / h + 1..2 * r / h).collect()
    };
    let mut n = 0;
    for s in window {
        let num = s as i128 * d as i128 - h as i128;
        if num % r as i128 != 0 {
            continue;
        }
        let t = (num / r as i128) as i64;
        let e = t - (g.get() - 1) * s;
        let beta = BundleType::new(s, e)?;
        if euler_chi(beta, alpha, g)? == h {
            n += 1;
        }
    }
    Ok(n)
}

fn label(e: &Error, fallback: &str) -> String {
    match e {
        Error::Invariant { identity, .. } => (*identity).to_string(),
        _ => fallback.to_string(),
    }
}

fn check_triple(g: Genus, alpha: BundleType) -> (SweepRow, Vec<SweepFailure>) {
    let mut failures = Vec::new();
    let mut fail = |invariant: String, detail: String| {
        failures.push(SweepFailure {
            genus: g.get(),
            rank: alpha.rank(),
            degree: alpha.degree(),
            invariant,
            detail,
        });
    };
    let beta_unique = if alpha.is_terminal() {
        true
    } else {
        match (beta_candidates(g, alpha), solve_beta(g, alpha)) {
            (Ok(1), Ok(_)) => true,
            (Ok(n), Ok(_)) => {
                fail(
                    "beta uniqueness".into(),
                    format!("{n} candidates in window"),
                );
                false
            }
            (Err(e), _) | (_, Err(e)) => {
                fail(label(&e, "beta uniqueness"), e.to_string());
                false
            }
        }
    };
    let mut checks = SweepChecks {
        beta_unique,
        ..SweepChecks::default()
    };

    let mut chain_len = 0;
    let chain = descent_chain(g, alpha).and_then(|c| c.check().map(|_| c));
    match &chain {
        Ok(c) => {
            checks.descent = true;
            chain_len = c.steps.len();
        }
        Err(e) => fail(label(e, "descent chain"), e.to_string()),
    }

    match compose_mu(g, alpha).and_then(|t| t.check_ledger()) {
        Ok(()) => checks.mu_ledger = true,
        Err(e) => fail(label(&e, "mu ledger"), e.to_string()),
    }

    match verify_main(g, alpha).and_then(|d| Ok((d.verdict, d.replays()?))) {
        Ok((Verdict::Equal, true)) => checks.brauer = true,
        Ok((v, replays)) => fail(
            "brauer transport".into(),
            format!("verdict {v:?}, replays {replays}"),
        ),
        Err(e) => fail(label(&e, "brauer transport"), e.to_string()),
    }

    if let Ok(c) = &chain {
        let hecke = c.steps.iter().try_for_each(|s| {
            let hd = make_hecke(g, s.h1, s.h)?;
            hd.check()?;
            let [_, (_, theta2_rep)] = hecke_brauer_targets(&hd)?;
            if theta2_rep != s.h * s.h {
                return Err(Error::invariant(
                    "theta2 target rep dim equals h^2",
                    format!("{theta2_rep} vs h = {}", s.h),
                ));
            }
            Ok(())
        });
        match hecke {
            Ok(()) => checks.hecke = true,
            Err(e) => fail(label(&e, "hecke consistency"), e.to_string()),
        }
    } else {
        fail("hecke consistency".into(), "no chain to check".into());
    }

    let row = SweepRow {
        genus: g.get(),
        rank: alpha.rank(),
        degree: alpha.degree(),
        h: alpha.gcd(),
        chain_len,
        affine_dim: affine_dim(g, alpha).ok(),
        checks,
    };
    (row, failures)
}

/// Run every check over `genus_min..=genus_max`, `1 <= r <= max_rank`,
/// `|d| <= max_degree`. Rows come back in lexicographic `(g, r, d)` order
/// regardless of the thread count.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    if cfg.max_rank < 1 {
        return Err(Error::InvalidRank(cfg.max_rank));
    }
    if cfg.max_degree < 0 {
        return Err(Error::InvalidInput(format!(
            "max degree {} is negative",
            cfg.max_degree
        )));
    }
    if cfg.genus_max < cfg.genus_min {
        return Err(Error::InvalidInput(format!(
            "genus range {}..={} is empty",
            cfg.genus_min, cfg.genus_max
        )));
    }
    let mut triples = Vec::new();
    for g in cfg.genus_min..=cfg.genus_max {
        let g = Genus::new(g)?;
        for r in 1..=cfg.max_rank {
            for d in -cfg.max_degree..=cfg.max_degree {
                triples.push((g, BundleType::new(r, d)?));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let results: Vec<_> = pool.install(|| {
        triples
            .par_iter()
            .map(|&(g, a)| check_triple(g, a))
            .collect()
    });

    let mut rows = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (row, f) in results {
        rows.push(row);
        failures.extend(f);
    }
    let passed = rows.iter().filter(|r| r.passed()).count();
    Ok(SweepReport {
        genus_min: cfg.genus_min,
        genus_max: cfg.genus_max,
        max_rank: cfg.max_rank,
        max_degree: cfg.max_degree,
        passed,
        failed: rows.len() - passed,
        failures,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(jobs: usize) -> SweepConfig {
        SweepConfig {
            genus_min: 2,
            genus_max: 3,
            max_rank: 6,
            max_degree: 6,
            jobs,
        }
    }

    #[test]
    fn small_box_passes() {
        let r = run_sweep(&cfg(2)).unwrap();
        assert_eq!(r.total(), 2 * 6 * 13);
        assert_eq!(r.passed + r.failed, r.total());
        assert!(r.all_passed(), "{:?}", r.failures);
    }

    #[test]
    fn deterministic_across_jobs() {
        assert_eq!(run_sweep(&cfg(1)).unwrap(), run_sweep(&cfg(4)).unwrap());
    }

    #[test]
    fn ordered_rows() {
        let r = run_sweep(&cfg(3)).unwrap();
        let keys: Vec<_> = r.rows.iter().map(|x| (x.genus, x.rank, x.degree)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn rejects_bad_box() {
        let mut c = cfg(1);
        c.genus_min = 1;
        assert!(matches!(run_sweep(&c), Err(Error::InvalidGenus(1))));
        let mut c = cfg(1);
        c.max_rank = 0;
        assert!(run_sweep(&c).is_err());
    }
}
