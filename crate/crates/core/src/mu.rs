//! The recursive map `mu : M(r, d) -> M(h, 0)` as an explicit composition tree.
//!
//! For `r | d`, `mu` is the twist by a line bundle. Otherwise
//! `mu = mu2 ∘ theta2 ∘ mu1_hat ∘ rho`, where `rho` compares the descent map
//! with the pulled back Hecke projection, `mu1_hat` is the lift of the
//! recursive `mu1 : M(r1, d1) -> M(h1, 0)` across the Hecke roof and `mu2` is
//! the recursive map on `M(h1, -h)`. Every node records its fibre dimension
//! and the sum over the tree is the affine factor `(r^2 - h^2)(g - 1)`.

use serde::{Deserialize, Serialize};

use crate::arith::{add, mul, sub, BundleType, Genus, ModuliDescriptor};
use crate::descent::{descent_step, DescentStep};
use crate::error::{Error, Result};
use crate::hecke::make_hecke;

/// A space appearing in the composition diagram, carrying only its dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "snake_case")]
pub enum Space {
    /// `M(rank, degree)`.
    Moduli { rank: i64, degree: i64, dim: i64 },
    /// The Hecke correspondence `P(h1, 0, h)`.
    Parabolic { h1: i64, h: i64, dim: i64 },
    /// Pullback of `theta1` along `mu1`, fibred over `M(rank, degree)`.
    Pullback {
        rank: i64,
        degree: i64,
        h1: i64,
        h: i64,
        dim: i64,
    },
}

impl Space {
    pub fn dim(&self) -> i64 {
        match *self {
            Space::Moduli { dim, .. }
            | Space::Parabolic { dim, .. }
            | Space::Pullback { dim, .. } => dim,
        }
    }

    fn moduli(g: Genus, t: BundleType) -> Result<Space> {
        let m = ModuliDescriptor::new(g, t)?;
        Ok(Space::Moduli {
            rank: m.rank,
            degree: m.degree,
            dim: m.dim,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    TensorIso,
    Rho,
    MuHat1,
    Theta2,
    Mu2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuNode {
    pub kind: NodeKind,
    pub fiber_dim: i64,
    pub source: Space,
    pub target: Space,
    /// Present exactly for `MuHat1` and `Mu2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subtree: Option<Box<MuTree>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuTree {
    pub genus: Genus,
    pub root: BundleType,
    /// In composition order `[rho, mu1_hat, theta2, mu2]`, or a single
    /// `TensorIso`.
    pub nodes: Vec<MuNode>,
    pub total_fiber_dim: i64,
    pub target: BundleType,
}

/// `(r^2 - h^2)(g - 1)`, the dimension of the affine factor.
pub fn affine_dim(g: Genus, alpha: BundleType) -> Result<i64> {
    const WHAT: &str = "affine dimension";
    let (r, h) = (alpha.rank(), alpha.gcd());
    mul(
        sub(mul(r, r, WHAT)?, mul(h, h, WHAT)?, WHAT)?,
        g.minus_one(),
        WHAT,
    )
}

/// Build the composition tree for `mu` on `M(alpha)` and audit its ledger.
pub fn compose_mu(g: Genus, alpha: BundleType) -> Result<MuTree> {
    let tree = compose(g, alpha, alpha.rank())?;
    tree.check_ledger()?;
    Ok(tree)
}

fn compose(g: Genus, alpha: BundleType, depth_budget: i64) -> Result<MuTree> {
    const WHAT: &str = "mu ledger";
    if depth_budget < 0 {
        return Err(Error::invariant(
            "mu recursion depth <= initial rank",
            format!("exceeded at {alpha}"),
        ));
    }
    let h = alpha.gcd();
    let target = BundleType::new(h, 0)?;
    let source = Space::moduli(g, alpha)?;

    if alpha.is_terminal() {
        let node = MuNode {
            kind: NodeKind::TensorIso,
            fiber_dim: 0,
            source,
            target: Space::moduli(g, target)?,
            subtree: None,
        };
        return Ok(MuTree {
            genus: g,
            root: alpha,
            nodes: vec![node],
            total_fiber_dim: 0,
            target,
        });
    }

    let step = descent_step(g, alpha)?;
    let h1 = step.h1;
    if step.chi_a1_beta < h1 {
        return Err(Error::invariant(
            "chi(alpha1, beta) >= h1",
            format!("chi = {}, h1 = {h1} at {alpha}", step.chi_a1_beta),
        ));
    }
    let hecke = make_hecke(g, h1, h)?;
    let mu1 = compose(g, step.alpha1, depth_budget - 1)?;
    let mu2 = compose(g, hecke.theta2_target.bundle_type(), depth_budget - 1)?;

    let m1 = ModuliDescriptor::new(g, step.alpha1)?;
    let pullback = Space::Pullback {
        rank: m1.rank,
        degree: m1.degree,
        h1,
        h,
        dim: add(m1.dim, hecke.theta_fiber_dim, WHAT)?,
    };
    let parabolic = Space::Parabolic {
        h1,
        h,
        dim: hecke.parmod_dim,
    };
    let theta2_target = Space::moduli(g, hecke.theta2_target.bundle_type())?;

    let nodes = vec![
        MuNode {
            kind: NodeKind::Rho,
            fiber_dim: mul(h, sub(step.chi_a1_beta, h1, WHAT)?, WHAT)?,
            source,
            target: pullback,
            subtree: None,
        },
        MuNode {
            kind: NodeKind::MuHat1,
            fiber_dim: mu1.total_fiber_dim,
            source: pullback,
            target: parabolic,
            subtree: Some(Box::new(mu1)),
        },
        MuNode {
            kind: NodeKind::Theta2,
            fiber_dim: hecke.theta_fiber_dim,
            source: parabolic,
            target: theta2_target,
            subtree: None,
        },
        MuNode {
            kind: NodeKind::Mu2,
            fiber_dim: mu2.total_fiber_dim,
            source: theta2_target,
            target: Space::moduli(g, target)?,
            subtree: Some(Box::new(mu2)),
        },
    ];
    let mut total = 0i64;
    for n in &nodes {
        total = add(total, n.fiber_dim, WHAT)?;
    }
    Ok(MuTree {
        genus: g,
        root: alpha,
        nodes,
        total_fiber_dim: total,
        target,
    })
}

impl MuTree {
    /// The descent step at the root, if the root is not terminal.
    pub fn root_step(&self) -> Result<Option<DescentStep>> {
        if self.root.is_terminal() {
            Ok(None)
        } else {
            descent_step(self.genus, self.root).map(Some)
        }
    }

    /// Audit the whole tree: node shapes, dimension drops, subtree totals and
    /// the affine factor identity. Subtrees are audited recursively, so an
    /// edited subtree invalidates every ancestor.
    pub fn check_ledger(&self) -> Result<()> {
        const WHAT: &str = "mu ledger check";
        let g = self.genus;
        let h = self.root.gcd();
        if self.target != BundleType::new(h, 0)? {
            return Err(Error::invariant(
                "target = (h, 0)",
                format!("{} at {}", self.target, self.root),
            ));
        }
        let expected_kinds: &[NodeKind] = if self.root.is_terminal() {
            &[NodeKind::TensorIso]
        } else {
            &[
                NodeKind::Rho,
                NodeKind::MuHat1,
                NodeKind::Theta2,
                NodeKind::Mu2,
            ]
        };
        let kinds: Vec<NodeKind> = self.nodes.iter().map(|n| n.kind).collect();
        if kinds != expected_kinds {
            return Err(Error::invariant(
                "node order",
                format!("{kinds:?} at {}", self.root),
            ));
        }
        if self.nodes[0].source != Space::moduli(g, self.root)? {
            return Err(Error::invariant(
                "tree source",
                format!("{:?}", self.nodes[0].source),
            ));
        }
        if self.nodes[self.nodes.len() - 1].target != Space::moduli(g, self.target)? {
            return Err(Error::invariant("tree target", format!("at {}", self.root)));
        }

        let mut total = 0i64;
        for (i, node) in self.nodes.iter().enumerate() {
            let name = node_name(node.kind);
            if node.fiber_dim < 0 {
                return Err(Error::invariant(
                    "fiber_dim >= 0",
                    format!("{name} at {}", self.root),
                ));
            }
            let drop = sub(node.source.dim(), node.target.dim(), WHAT)?;
            if drop != node.fiber_dim {
                return Err(Error::invariant(
                    "fiber_dim = dim source - dim target",
                    format!("{name} at {}: {} vs {drop}", self.root, node.fiber_dim),
                ));
            }
            if i + 1 < self.nodes.len() && node.target != self.nodes[i + 1].source {
                return Err(Error::invariant(
                    "composable nodes",
                    format!("{name} at {}", self.root),
                ));
            }
            match (node.kind, &node.subtree) {
                (NodeKind::MuHat1 | NodeKind::Mu2, Some(sub_tree)) => {
                    sub_tree.check_ledger()?;
                    if sub_tree.genus != g || sub_tree.total_fiber_dim != node.fiber_dim {
                        return Err(Error::invariant(
                            "subtree total = node fiber_dim",
                            format!("{name} at {}", self.root),
                        ));
                    }
                }
                (NodeKind::MuHat1 | NodeKind::Mu2, None) => {
                    return Err(Error::invariant(
                        "recursive node has subtree",
                        name.to_string(),
                    ));
                }
                (_, Some(_)) => {
                    return Err(Error::invariant(
                        "leaf node has no subtree",
                        name.to_string(),
                    ));
                }
                (NodeKind::TensorIso, None) if node.fiber_dim != 0 => {
                    return Err(Error::invariant(
                        "tensor iso fiber_dim = 0",
                        format!("{}", self.root),
                    ));
                }
                _ => {}
            }
            total = add(total, node.fiber_dim, WHAT)?;
        }
        if total != self.total_fiber_dim {
            return Err(Error::invariant(
                "total_fiber_dim = sum of node fibers",
                format!("{total} vs {} at {}", self.total_fiber_dim, self.root),
            ));
        }
        let affine = affine_dim(g, self.root)?;
        if total != affine {
            return Err(Error::invariant(
                "sum of fibers = (r^2 - h^2)(g - 1)",
                format!("{total} vs {affine} at {}", self.root),
            ));
        }

        if let Some(step) = self.root_step()? {
            let (chi, h1) = (step.chi_a1_beta, step.h1);
            let rho = mul(h, sub(chi, h1, WHAT)?, WHAT)?;
            let theta = mul(h, sub(h1, h, WHAT)?, WHAT)?;
            if self.nodes[0].fiber_dim != rho || self.nodes[2].fiber_dim != theta {
                return Err(Error::invariant(
                    "rho = h (chi - h1), theta2 = h (h1 - h)",
                    format!("at {}", self.root),
                ));
            }
            if add(rho, theta, WHAT)? != step.fiber_dim {
                return Err(Error::invariant(
                    "lambda_F fiber = rho fiber + theta1_hat fiber",
                    format!("at {}", self.root),
                ));
            }
            let r1 = step.alpha1.rank();
            let level = add(
                sub(mul(h, chi, WHAT)?, mul(h, h, WHAT)?, WHAT)?,
                mul(
                    sub(mul(r1, r1, WHAT)?, mul(h, h, WHAT)?, WHAT)?,
                    g.minus_one(),
                    WHAT,
                )?,
                WHAT,
            )?;
            if level != affine {
                return Err(Error::invariant(
                    "h chi - h^2 + (r1^2 - h^2)(g - 1) = (r^2 - h^2)(g - 1)",
                    format!("{level} vs {affine} at {}", self.root),
                ));
            }
            for node in [&self.nodes[1], &self.nodes[3]] {
                let sub_root = node.subtree.as_ref().map(|s| s.root.rank()).unwrap_or(0);
                if sub_root >= self.root.rank() {
                    return Err(Error::invariant(
                        "subtree rank < root rank",
                        format!("at {}", self.root),
                    ));
                }
            }
        }
        Ok(())
    }

    /// All nodes in depth-first order with their nesting depth.
    pub fn flatten(&self) -> Vec<(usize, &MuNode)> {
        let mut out = Vec::new();
        self.flatten_into(0, &mut out);
        out
    }

    fn flatten_into<'a>(&'a self, depth: usize, out: &mut Vec<(usize, &'a MuNode)>) {
        for node in &self.nodes {
            out.push((depth, node));
            if let Some(sub_tree) = &node.subtree {
                sub_tree.flatten_into(depth + 1, out);
            }
        }
    }
}

pub fn node_name(kind: NodeKind) -> &'static str {
    match kind {
        NodeKind::TensorIso => "tensor_iso",
        NodeKind::Rho => "rho",
        NodeKind::MuHat1 => "mu_hat1",
        NodeKind::Theta2 => "theta2",
        NodeKind::Mu2 => "mu2",
    }
}

/// What the construction says about the fixed-determinant moduli space
/// `M(r, L)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedDetReport {
    pub genus: Genus,
    pub root: BundleType,
    pub coprime: bool,
    /// `(r^2 - 1)(g - 1) = dim M(r, d) - dim J(C)`.
    pub fixed_det_dim: i64,
    pub rational: bool,
    pub note: String,
}

pub fn fixed_det_report(g: Genus, alpha: BundleType) -> Result<FixedDetReport> {
    const WHAT: &str = "fixed determinant dimension";
    let r = alpha.rank();
    let coprime = alpha.gcd() == 1;
    let fixed_det_dim = mul(sub(mul(r, r, WHAT)?, 1, WHAT)?, g.minus_one(), WHAT)?;
    let note = if coprime {
        "mu restricts to a birationally linear map onto M(1, L'), a point; M(r, L) is rational"
            .to_string()
    } else {
        format!(
            "mu restricts to fixed-determinant spaces over M({}, L'); no rationality claim",
            alpha.gcd()
        )
    };
    Ok(FixedDetReport {
        genus: g,
        root: alpha,
        coprime,
        fixed_det_dim,
        rational: coprime,
        note,
    })
}
