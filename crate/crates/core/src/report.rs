//! Rendering of chains, `mu` trees, derivations and enumerations as pretty
//! text, JSON or TSV.
//!
//! JSON payloads carry `"schema": 1` at the top level. Output is
//! deterministic: identical inputs give identical bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::brauer::{Derivation, DerivationStep, Verdict};
use crate::descent::ReductionChain;
use crate::error::{Error, Result};
use crate::genericity::{Classification, HirschEnumeration};
use crate::mu::{node_name, FixedDetReport, MuTree, Space};
use crate::sweep::SweepReport;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Pretty,
    Json,
    Tsv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pretty" => Ok(Format::Pretty),
            "json" => Ok(Format::Json),
            "tsv" => Ok(Format::Tsv),
            other => Err(Error::InvalidInput(format!(
                "unknown format {other:?} (expected pretty, json or tsv)"
            ))),
        }
    }
}

/// A payload tagged with the schema version.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Versioned<T> {
    pub schema: u32,
    #[serde(flatten)]
    pub payload: T,
}

impl<T> Versioned<T> {
    pub fn new(payload: T) -> Self {
        Versioned {
            schema: SCHEMA_VERSION,
            payload,
        }
    }
}

/// `mu` tree together with the fixed-determinant summary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuReport {
    #[serde(flatten)]
    pub tree: MuTree,
    pub fixed_det: FixedDetReport,
}

pub fn to_json<T: Serialize>(payload: &T) -> String {
    let mut s = serde_json::to_string_pretty(&Versioned::new(payload)).expect("payload serializes");
    s.push('\n');
    s
}

/// Parse a versioned payload produced by [`to_json`].
pub fn from_json<T: DeserializeOwned>(s: &str) -> Result<T> {
    let v: Versioned<T> =
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("bad payload: {e}")))?;
    if v.schema != SCHEMA_VERSION {
        return Err(Error::InvalidInput(format!(
            "unsupported schema {}",
            v.schema
        )));
    }
    Ok(v.payload)
}

pub fn render_chain(chain: &ReductionChain, format: Format) -> String {
    match format {
        Format::Json => to_json(chain),
        Format::Tsv => {
            let mut out = String::from(
                "step\talpha_rank\talpha_degree\tbeta_rank\tbeta_degree\talpha1_rank\talpha1_degree\th\th1\tchi_a1_beta\tl\tfiber_dim\n",
            );
            for (i, s) in chain.steps.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    i + 1,
                    s.alpha.rank(),
                    s.alpha.degree(),
                    s.beta.rank(),
                    s.beta.degree(),
                    s.alpha1.rank(),
                    s.alpha1.degree(),
                    s.h,
                    s.h1,
                    s.chi_a1_beta,
                    s.l,
                    s.fiber_dim
                );
            }
            out
        }
        Format::Pretty => {
            let m = &chain.initial;
            let mut out = format!(
                "M({},{}) over genus {}: h = {}, dim = {}\n",
                m.rank, m.degree, chain.genus, m.h, m.dim
            );
            if chain.steps.is_empty() {
                out.push_str("  no descent steps (rank divides degree)\n");
            }
            for (i, s) in chain.steps.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  step {}: {} -> {}  beta = {}  h = {}  h1 = {}  chi(alpha1,beta) = {}  l = {}  fiber = {}",
                    i + 1,
                    s.alpha,
                    s.alpha1,
                    s.beta,
                    s.h,
                    s.h1,
                    s.chi_a1_beta,
                    s.l,
                    s.fiber_dim
                );
            }
            let _ = writeln!(
                out,
                "terminal {}; twist by a line bundle of degree {} to reach ({},0)",
                chain.terminal,
                chain.terminal_twist,
                chain.terminal.rank()
            );
            out
        }
    }
}

fn space_label(s: &Space) -> String {
    match *s {
        Space::Moduli { rank, degree, .. } => format!("M({rank},{degree})"),
        Space::Parabolic { h1, h, .. } => format!("P({h1},0,{h})"),
        Space::Pullback {
            rank,
            degree,
            h1,
            h,
            ..
        } => format!("P_hat[M({rank},{degree});{h1},{h}]"),
    }
}

pub fn render_mu(report: &MuReport, format: Format) -> String {
    let tree = &report.tree;
    let fd = &report.fixed_det;
    match format {
        Format::Json => to_json(report),
        Format::Tsv => {
            let mut out =
                String::from("depth\tkind\tsource\ttarget\tsource_dim\ttarget_dim\tfiber_dim\n");
            for (depth, n) in tree.flatten() {
                let _ = writeln!(
                    out,
                    "{depth}\t{}\t{}\t{}\t{}\t{}\t{}",
                    node_name(n.kind),
                    space_label(&n.source),
                    space_label(&n.target),
                    n.source.dim(),
                    n.target.dim(),
                    n.fiber_dim
                );
            }
            out
        }
        Format::Pretty => {
            let mut out = format!(
                "mu: M{} -> M{} over genus {}, total fiber {}\n",
                tree.root, tree.target, tree.genus, tree.total_fiber_dim
            );
            for (depth, n) in tree.flatten() {
                let _ = writeln!(
                    out,
                    "{}{:<10} {} [{}] -> {} [{}]  fiber {}",
                    "  ".repeat(depth + 1),
                    node_name(n.kind),
                    space_label(&n.source),
                    n.source.dim(),
                    space_label(&n.target),
                    n.target.dim(),
                    n.fiber_dim
                );
            }
            let _ = writeln!(
                out,
                "fixed determinant: {}, dim {}, {}",
                if fd.coprime { "coprime" } else { "not coprime" },
                fd.fixed_det_dim,
                if fd.rational {
                    "rational"
                } else {
                    "no rationality claim"
                }
            );
            out
        }
    }
}

fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Equal => "equal",
        Verdict::NotEqual => "not-equal",
    }
}

fn write_steps_pretty(out: &mut String, steps: &[DerivationStep], depth: usize) {
    for (i, s) in steps.iter().enumerate() {
        let rep = s
            .rep_algebra_dim
            .map(|d| format!("  [rep dim {d}]"))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{}{}. {}: {} -> {}  x{} => {}{}",
            "  ".repeat(depth + 1),
            i + 1,
            s.kind,
            s.from,
            s.to,
            s.coefficient,
            s.result,
            rep
        );
        let _ = writeln!(out, "{}   {}", "  ".repeat(depth + 1), s.rule);
        if let Some(inner) = &s.inner {
            write_steps_pretty(out, &inner.steps, depth + 1);
        }
    }
}

fn write_steps_tsv(out: &mut String, steps: &[DerivationStep], depth: usize) {
    for (i, s) in steps.iter().enumerate() {
        let _ = writeln!(
            out,
            "{depth}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            i + 1,
            s.kind,
            s.weight,
            s.from,
            s.to,
            s.coefficient,
            s.coeff_after,
            s.rep_algebra_dim.map(|d| d.to_string()).unwrap_or_default(),
            s.rule
        );
        if let Some(inner) = &s.inner {
            write_steps_tsv(out, &inner.steps, depth + 1);
        }
    }
}

/// Render a derivation; without `trace` only the verdict and endpoints are
/// shown in pretty mode.
pub fn render_derivation(d: &Derivation, trace: bool, format: Format) -> String {
    match format {
        Format::Json => to_json(d),
        Format::Tsv => {
            let mut out = String::from(
                "depth\tindex\tkind\tweight\tfrom\tto\tcoefficient\tcoeff_after\trep_dim\trule\n",
            );
            write_steps_tsv(&mut out, &d.steps, 0);
            out
        }
        Format::Pretty => {
            let mut out = format!(
                "pullback of {} along {} edges: {} (expected {}) -- verdict {}\n",
                d.start,
                d.steps.len(),
                d.result,
                d.expected,
                verdict_label(d.verdict)
            );
            let dims: Vec<String> = d
                .rep_dims()
                .into_iter()
                .map(|x| x.map(|v| v.to_string()).unwrap_or_else(|| "?".into()))
                .collect();
            let _ = writeln!(out, "rep dims along nodes: [{}]", dims.join(","));
            if trace {
                write_steps_pretty(&mut out, &d.steps, 0);
            }
            out
        }
    }
}

fn class_label(c: Classification) -> &'static str {
    match c {
        Classification::ConsistentGeneric => "consistent_generic",
        Classification::GenericallyImpossible => "generically_impossible",
        Classification::EqualRankTorsionAllowed => "equal_rank_torsion_allowed",
        Classification::FailsNecessary => "fails_necessary",
    }
}

fn opt_bool(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "true",
        Some(false) => "false",
        None => "-",
    }
}

pub fn render_hirsch(en: &HirschEnumeration, format: Format) -> String {
    match format {
        Format::Json => to_json(en),
        Format::Tsv => {
            let mut out = String::from(
                "r_k\td_k\td_t\tr_i\td_i\tr_q\td_q\tnecessary\text_upper\tfinal_upper\timplication\ttorsion_identity\tclassification\n",
            );
            for x in &en.entries {
                let c = &x.config;
                let v = &x.verdict;
                let i = c.image().expect("validated config");
                let q = c.cokernel().expect("validated config");
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    c.r_k,
                    c.d_k,
                    c.d_t,
                    i.rank,
                    i.degree,
                    q.rank,
                    q.degree,
                    v.passes_necessary,
                    v.ext_upper,
                    v.final_upper,
                    opt_bool(v.implication),
                    v.torsion_identity,
                    class_label(v.classification)
                );
            }
            out
        }
        Format::Pretty => {
            let mut out = format!(
                "maps F{} -> E{} over genus {}, d_T <= {}: {} configurations\n",
                en.f,
                en.e,
                en.genus,
                en.max_dt,
                en.entries.len()
            );
            for w in &en.warnings {
                let _ = writeln!(out, "warning: {w}");
            }
            let count = |c: Classification| {
                en.entries
                    .iter()
                    .filter(|x| x.verdict.classification == c)
                    .count()
            };
            for c in [
                Classification::ConsistentGeneric,
                Classification::EqualRankTorsionAllowed,
                Classification::GenericallyImpossible,
                Classification::FailsNecessary,
            ] {
                let _ = writeln!(out, "  {:<28} {}", class_label(c), count(c));
            }
            let _ = writeln!(
                out,
                "  implication failures: {}, torsion identity failures: {}",
                en.implication_failures(),
                en.torsion_identity_failures()
            );
            for x in en
                .entries
                .iter()
                .filter(|x| x.verdict.classification != Classification::FailsNecessary)
            {
                let c = &x.config;
                let _ = writeln!(
                    out,
                    "  K = ({},{}) d_T = {}  ext <= {}  final <= {}  {}",
                    c.r_k,
                    c.d_k,
                    c.d_t,
                    x.verdict.ext_upper,
                    x.verdict.final_upper,
                    class_label(x.verdict.classification)
                );
            }
            out
        }
    }
}

pub fn render_sweep(report: &SweepReport, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Tsv => {
            let mut out = String::from(
                "genus\trank\tdegree\th\tchain_len\taffine_dim\tbeta_unique\tdescent\tmu_ledger\tbrauer\thecke\tpass\n",
            );
            for r in &report.rows {
                let c = &r.checks;
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    r.genus,
                    r.rank,
                    r.degree,
                    r.h,
                    r.chain_len,
                    r.affine_dim.map(|v| v.to_string()).unwrap_or_default(),
                    c.beta_unique,
                    c.descent,
                    c.mu_ledger,
                    c.brauer,
                    c.hecke,
                    r.passed()
                );
            }
            out
        }
        Format::Pretty => {
            let mut out = format!(
                "swept genus {}..={}, 1 <= r <= {}, |d| <= {}: {} triples, {} passed, {} failed\n",
                report.genus_min,
                report.genus_max,
                report.max_rank,
                report.max_degree,
                report.rows.len(),
                report.passed,
                report.failed
            );
            for f in &report.failures {
                let _ = writeln!(
                    out,
                    "  FAIL g={} ({},{}): {}: {}",
                    f.genus, f.rank, f.degree, f.invariant, f.detail
                );
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{BundleType, Genus};
    use crate::brauer::verify_main;
    use crate::descent::descent_chain;
    use crate::mu::{compose_mu, fixed_det_report};

    fn t(r: i64, d: i64) -> BundleType {
        BundleType::new(r, d).unwrap()
    }

    fn g(n: i64) -> Genus {
        Genus::new(n).unwrap()
    }

    #[test]
    fn chain_json_shape() {
        let c = descent_chain(g(2), t(3, 1)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&render_chain(&c, Format::Json)).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["genus"], 2);
        assert_eq!(v["initial"]["rank"], 3);
        assert_eq!(v["initial"]["dim"], 10);
        let step = &v["steps"][0];
        assert_eq!(step["alpha"], serde_json::json!([3, 1]));
        assert_eq!(step["beta"], serde_json::json!([4, -3]));
        assert_eq!(step["alpha1"], serde_json::json!([1, -4]));
        for key in ["h", "h1", "chi_a1_beta", "l", "fiber_dim"] {
            assert!(step.get(key).is_some(), "{key}");
        }
        assert_eq!(v["terminal"], serde_json::json!([1, -4]));
        assert_eq!(v["terminal_twist"], 4);
    }

    #[test]
    fn mu_json_shape() {
        let r = MuReport {
            tree: compose_mu(g(2), t(5, 3)).unwrap(),
            fixed_det: fixed_det_report(g(2), t(5, 3)).unwrap(),
        };
        let v: serde_json::Value = serde_json::from_str(&render_mu(&r, Format::Json)).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["root"], serde_json::json!([5, 3]));
        assert_eq!(v["target"], serde_json::json!([1, 0]));
        assert_eq!(v["total_fiber_dim"], 24);
        assert_eq!(v["nodes"][0]["kind"], "rho");
        assert_eq!(v["nodes"][0]["source"]["space"], "moduli");
        assert_eq!(v["fixed_det"]["rational"], true);
    }

    #[test]
    fn round_trips() {
        for (gg, r, d) in [(2, 3, 1), (2, 5, 3), (3, 7, -4), (2, 1, 7)] {
            let c = descent_chain(g(gg), t(r, d)).unwrap();
            assert_eq!(
                from_json::<ReductionChain>(&render_chain(&c, Format::Json)).unwrap(),
                c
            );
            let rep = MuReport {
                tree: compose_mu(g(gg), t(r, d)).unwrap(),
                fixed_det: fixed_det_report(g(gg), t(r, d)).unwrap(),
            };
            assert_eq!(
                from_json::<MuReport>(&render_mu(&rep, Format::Json)).unwrap(),
                rep
            );
            let der = verify_main(g(gg), t(r, d)).unwrap();
            assert_eq!(
                from_json::<Derivation>(&render_derivation(&der, true, Format::Json)).unwrap(),
                der
            );
        }
    }

    #[test]
    fn rejects_other_schema() {
        let c = descent_chain(g(2), t(3, 1)).unwrap();
        let s = render_chain(&c, Format::Json).replace("\"schema\": 1", "\"schema\": 2");
        assert!(from_json::<ReductionChain>(&s).is_err());
    }

    #[test]
    fn tsv_has_header() {
        let c = descent_chain(g(2), t(1, 7)).unwrap();
        let s = render_chain(&c, Format::Tsv);
        assert_eq!(s.lines().count(), 1);
        assert!(s.starts_with("step\t"));
    }

    #[test]
    fn format_parse() {
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
        assert!("xml".parse::<Format>().is_err());
    }
}
