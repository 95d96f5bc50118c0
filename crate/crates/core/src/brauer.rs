//! Symbolic transport of Brauer classes through the diagram defining `mu`.
//!
//! Each space in the diagram carries one generator class. A class is an
//! integer multiple of a generator, and every edge of the diagram pulls a
//! class back with a fixed integer coefficient:
//!
//! | edge                  | coefficient |
//! |-----------------------|-------------|
//! | Grassmannian pullback | 1           |
//! | covariant frame       | +w          |
//! | contravariant frame   | -w          |
//! | Hecke roof            | 1           |
//! | `lambda_F`            | 1           |
//! | line-bundle twist     | 1           |
//! | equivariant pullback  | 1           |
//!
//! where `w` is the weight of the scalar action on the bundle being framed.
//! Composite edges carry an inner path and their coefficient is the product
//! along that path instead. The certificate for `mu` pulls `psi(h, 0)` back to
//! `M(r, d)` and checks that it lands on `psi(r, d)` with coefficient 1.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{mul, BundleType, Genus};
use crate::error::{Error, Result};
use crate::mu::{compose_mu, MuTree, NodeKind};

/// Generator of the Brauer group bookkeeping on one space of the diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum NodeId {
    /// `psi(r, d)` on `M(r, d)`, from its presentation as a `PGL(h)` quotient.
    Psi { rank: i64, degree: i64 },
    /// `theta1^* psi(h1, 0) = theta2^* psi(h1, -h)` on `P(h1, 0, h)`.
    Hecke { h1: i64, h: i64 },
    /// `theta1_hat^* psi(rank, degree)` on the pullback of `theta1` along
    /// `mu1 : M(rank, degree) -> M(h1, 0)`.
    Pullback {
        rank: i64,
        degree: i64,
        h1: i64,
        h: i64,
    },
    /// The class of `Gr(j, Hom(E1, F)) / PGL(h1)` over `M(rank, degree)`.
    Grassmannian { rank: i64, degree: i64, j: i64 },
    /// An abstract quotient `X / PGL(n)` with class `sigma_X`.
    Sigma { label: String },
}

impl NodeId {
    pub fn psi(t: BundleType) -> NodeId {
        NodeId::Psi {
            rank: t.rank(),
            degree: t.degree(),
        }
    }

    /// The moduli class a pulled back generator comes from; other nodes are
    /// their own base.
    pub fn base(&self) -> NodeId {
        match *self {
            NodeId::Hecke { h1, .. } => NodeId::Psi {
                rank: h1,
                degree: 0,
            },
            NodeId::Pullback { rank, degree, .. } | NodeId::Grassmannian { rank, degree, .. } => {
                NodeId::Psi { rank, degree }
            }
            _ => self.clone(),
        }
    }

    /// Dimension of a central simple algebra known to represent the
    /// generator, when one is known.
    pub fn rep_algebra_dim(&self) -> Option<i64> {
        match *self {
            NodeId::Psi { rank, degree } => Some(rank.gcd(&degree).pow(2)),
            NodeId::Hecke { h1, h } => Some(h1.gcd(&h).pow(2)),
            NodeId::Pullback { rank, degree, .. } | NodeId::Grassmannian { rank, degree, .. } => {
                Some(rank.gcd(&degree).pow(2))
            }
            NodeId::Sigma { .. } => None,
        }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Psi { rank, degree } => write!(f, "psi({rank},{degree})"),
            NodeId::Hecke { h1, h } => write!(f, "theta1*psi({h1},0) on P({h1},0,{h})"),
            NodeId::Pullback {
                rank,
                degree,
                h1,
                h,
            } => {
                write!(f, "theta1_hat*psi({rank},{degree}) on P_hat({h1},{h})")
            }
            NodeId::Grassmannian { rank, degree, j } => {
                write!(f, "Gr({j},P)/PGL over M({rank},{degree})")
            }
            NodeId::Sigma { label } => write!(f, "sigma[{label}]"),
        }
    }
}

/// `coeff * generator`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassExpr {
    pub generator: NodeId,
    pub coeff: i64,
}

impl ClassExpr {
    pub fn new(generator: NodeId, coeff: i64) -> Self {
        ClassExpr { generator, coeff }
    }

    pub fn unit(generator: NodeId) -> Self {
        ClassExpr::new(generator, 1)
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{}", self.coeff, self.generator)
    }
}

/// Dimension `h^2` of the algebra representing `psi(r, d)`.
pub fn rep_algebra_dim(t: BundleType) -> Result<i64> {
    let h = t.gcd();
    mul(h, h, "representing algebra dimension")
}

/// The class defined by a bundle of weight `w` over `base`'s space.
pub fn weight_class(w: i64, base: &ClassExpr) -> Result<ClassExpr> {
    Ok(ClassExpr {
        generator: base.generator.clone(),
        coeff: mul(w, base.coeff, "weight class")?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    GrassBundlePullback,
    CovariantFrame,
    ContravariantFrame,
    HeckeRoof,
    LambdaF,
    TensorIso,
    EquivariantPullback,
}

impl EdgeKind {
    pub fn coefficient(self, weight: i64) -> Result<i64> {
        Ok(match self {
            EdgeKind::CovariantFrame => weight,
            EdgeKind::ContravariantFrame => weight
                .checked_neg()
                .ok_or(Error::Overflow("frame weight"))?,
            _ => 1,
        })
    }

    pub fn is_frame(self) -> bool {
        matches!(
            self,
            EdgeKind::CovariantFrame | EdgeKind::ContravariantFrame
        )
    }

    fn default_rule(self) -> &'static str {
        match self {
            EdgeKind::GrassBundlePullback => {
                "grassmannian bundle: class is pulled back from the base"
            }
            EdgeKind::CovariantFrame => "covariant partial frames of a weight w bundle: +w",
            EdgeKind::ContravariantFrame => "contravariant partial frames of a weight w bundle: -w",
            EdgeKind::HeckeRoof => "hecke roof: theta2^* psi(h1,-h) = theta1^* psi(h1,0)",
            EdgeKind::LambdaF => "descent: lambda_F^* psi(r1,d1) = psi(r,d)",
            EdgeKind::TensorIso => "twist by a line bundle of degree d/r preserves the class",
            EdgeKind::EquivariantPullback => "equivariant pullback square preserves the class",
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok();
        write!(
            f,
            "{}",
            s.as_ref().and_then(|v| v.as_str()).unwrap_or("edge")
        )
    }
}

/// A pullback map in the diagram: classes on `from` are pulled back to
/// classes on `to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramEdge {
    pub kind: EdgeKind,
    /// Weight of the framed bundle; ignored by non-frame kinds.
    #[serde(default)]
    pub weight: i64,
    pub from: NodeId,
    pub to: NodeId,
    pub rule: String,
    /// For composite edges, the path realising the edge between the base
    /// classes of `from` and `to`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<Vec<DiagramEdge>>,
}

impl DiagramEdge {
    pub fn new(kind: EdgeKind, weight: i64, from: NodeId, to: NodeId) -> Self {
        DiagramEdge {
            kind,
            weight,
            from,
            to,
            rule: kind.default_rule().to_string(),
            inner: None,
        }
    }

    pub fn with_rule(mut self, rule: impl Into<String>) -> Self {
        self.rule = rule.into();
        self
    }

    pub fn with_inner(mut self, inner: Vec<DiagramEdge>) -> Self {
        self.inner = Some(inner);
        self
    }
}

/// Pull `expr` back across `edge`.
pub fn transport(expr: &ClassExpr, edge: &DiagramEdge) -> Result<ClassExpr> {
    transport_traced(expr, edge).map(|(c, _)| c)
}

fn transport_traced(
    expr: &ClassExpr,
    edge: &DiagramEdge,
) -> Result<(ClassExpr, Option<Derivation>)> {
    if expr.generator != edge.from {
        return Err(Error::InapplicableEdge {
            edge: format!("{} {} -> {}", edge.kind, edge.from, edge.to),
            generator: expr.generator.to_string(),
        });
    }
    let (coefficient, inner) = match &edge.inner {
        None => (edge.kind.coefficient(edge.weight)?, None),
        Some(path) => {
            let (first, last) = match (path.first(), path.last()) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Error::InapplicableEdge {
                        edge: format!("{} with empty inner path", edge.kind),
                        generator: expr.generator.to_string(),
                    })
                }
            };
            if first.from != edge.from.base() || (last.to != edge.to && last.to != edge.to.base()) {
                return Err(Error::InapplicableEdge {
                    edge: format!(
                        "{} inner path {} -> {} does not cover {} -> {}",
                        edge.kind, first.from, last.to, edge.from, edge.to
                    ),
                    generator: expr.generator.to_string(),
                });
            }
            let start = ClassExpr::unit(first.from.clone());
            let expected = ClassExpr::unit(last.to.clone());
            let d = replay(start, path, expected)?;
            (d.result.coeff, Some(d))
        }
    };
    let result = ClassExpr {
        generator: edge.to.clone(),
        coeff: mul(expr.coeff, coefficient, "class transport")?,
    };
    Ok((result, inner))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    NotEqual,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationStep {
    pub rule: String,
    pub kind: EdgeKind,
    pub weight: i64,
    pub from: NodeId,
    pub to: NodeId,
    /// Transport coefficient of this edge.
    pub coefficient: i64,
    pub coeff_after: i64,
    pub result: ClassExpr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep_algebra_dim: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<Derivation>,
}

impl DerivationStep {
    /// The edge this step applied.
    pub fn edge(&self) -> DiagramEdge {
        DiagramEdge {
            kind: self.kind,
            weight: self.weight,
            from: self.from.clone(),
            to: self.to.clone(),
            rule: self.rule.clone(),
            inner: self
                .inner
                .as_ref()
                .map(|d| d.steps.iter().map(DerivationStep::edge).collect()),
        }
    }
}

/// Audit trail of a transport along a path of edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub start: ClassExpr,
    #[serde(rename = "edges")]
    pub steps: Vec<DerivationStep>,
    pub expected: ClassExpr,
    pub result: ClassExpr,
    pub verdict: Verdict,
}

impl Derivation {
    pub fn edges(&self) -> Vec<DiagramEdge> {
        self.steps.iter().map(DerivationStep::edge).collect()
    }

    /// Replay the recorded edges from `start` and compare with the stored
    /// trace.
    pub fn replays(&self) -> Result<bool> {
        let again = replay(self.start.clone(), &self.edges(), self.expected.clone())?;
        Ok(again == *self)
    }

    /// Representing-algebra dimensions of the class after each edge.
    pub fn rep_dims(&self) -> Vec<Option<i64>> {
        self.steps.iter().map(|s| s.rep_algebra_dim).collect()
    }
}

/// Transport `start` along `edges` and compare the result with `expected`.
pub fn replay(start: ClassExpr, edges: &[DiagramEdge], expected: ClassExpr) -> Result<Derivation> {
    let mut current = start.clone();
    let mut steps = Vec::with_capacity(edges.len());
    for edge in edges {
        let (next, inner) = transport_traced(&current, edge)?;
        let coefficient = match &inner {
            Some(d) => d.result.coeff,
            None => edge.kind.coefficient(edge.weight)?,
        };
        steps.push(DerivationStep {
            rule: edge.rule.clone(),
            kind: edge.kind,
            weight: edge.weight,
            from: edge.from.clone(),
            to: edge.to.clone(),
            coefficient,
            coeff_after: next.coeff,
            rep_algebra_dim: next.generator.rep_algebra_dim(),
            result: next.clone(),
            inner,
        });
        current = next;
    }
    let verdict = if current == expected {
        Verdict::Equal
    } else {
        Verdict::NotEqual
    };
    Ok(Derivation {
        start,
        steps,
        expected,
        result: current,
        verdict,
    })
}

/// The pullback path from `psi(h, 0)` to `psi(r, d)` read off a `mu` tree,
/// in the order `[mu2..., hecke roof, mu1_hat, rho]`.
pub fn main_diagram(tree: &MuTree) -> Result<Vec<DiagramEdge>> {
    let root = tree.root;
    let h = root.gcd();
    let top = NodeId::psi(root);
    if root.is_terminal() {
        let edge = DiagramEdge::new(
            EdgeKind::TensorIso,
            0,
            NodeId::Psi { rank: h, degree: 0 },
            top,
        )
        .with_rule(format!(
            "twist by a line bundle of degree {} identifies M{} with M({h},0)",
            -root.degree() / root.rank(),
            root
        ));
        return Ok(vec![edge]);
    }
    let subtree = |kind: NodeKind| -> Result<&MuTree> {
        tree.nodes
            .iter()
            .find(|n| n.kind == kind)
            .and_then(|n| n.subtree.as_deref())
            .ok_or_else(|| {
                Error::invariant("recursive node has subtree", format!("{kind:?} at {root}"))
            })
    };
    let mu1 = subtree(NodeKind::MuHat1)?;
    let mu2 = subtree(NodeKind::Mu2)?;
    let alpha1 = mu1.root;
    let h1 = alpha1.gcd();

    let hecke = NodeId::Hecke { h1, h };
    let pullback = NodeId::Pullback {
        rank: alpha1.rank(),
        degree: alpha1.degree(),
        h1,
        h,
    };
    let grass = NodeId::Grassmannian {
        rank: alpha1.rank(),
        degree: alpha1.degree(),
        j: h,
    };

    let mut edges = main_diagram(mu2)?;
    edges.push(
        DiagramEdge::new(EdgeKind::HeckeRoof, 0, NodeId::psi(mu2.root), hecke.clone()).with_rule(
            format!(
                "hecke roof: theta2^* psi({h1},{}) = theta1^* psi({h1},0)",
                -h
            ),
        ),
    );
    edges.push(
        DiagramEdge::new(EdgeKind::EquivariantPullback, 0, hecke, pullback.clone())
            .with_rule(format!(
                "pullback square: mu1_hat^* theta1^* = theta1_hat^* mu1^* over M{alpha1}"
            ))
            .with_inner(main_diagram(mu1)?),
    );
    // lambda_F = theta1_hat ∘ rho; Hom(E1, F) has weight -1 and M(r, d) is
    // its contravariant frame quotient.
    let lambda = vec![
        DiagramEdge::new(
            EdgeKind::GrassBundlePullback,
            0,
            NodeId::psi(alpha1),
            grass.clone(),
        ),
        DiagramEdge::new(EdgeKind::ContravariantFrame, -1, grass, top.clone()).with_rule(
            "X_{r,d} is the contravariant frame quotient of Hom(E1,F), weight -1: coefficient +1",
        ),
    ];
    edges.push(
        DiagramEdge::new(EdgeKind::LambdaF, 0, pullback, top)
            .with_rule(format!(
                "rho: rho^* theta1_hat^* = lambda_F^* from M{alpha1} to M{root}"
            ))
            .with_inner(lambda),
    );
    Ok(edges)
}

/// Replay a diagram from `psi(h, 0)` and compare with `psi(r, d)`.
pub fn verify_diagram(alpha: BundleType, edges: &[DiagramEdge]) -> Result<Derivation> {
    let start = ClassExpr::unit(NodeId::Psi {
        rank: alpha.gcd(),
        degree: 0,
    });
    replay(start, edges, ClassExpr::unit(NodeId::psi(alpha)))
}

/// Certificate that `mu^* psi(h, 0) = psi(r, d)`.
pub fn verify_main(g: Genus, alpha: BundleType) -> Result<Derivation> {
    let tree = compose_mu(g, alpha)?;
    verify_diagram(alpha, &main_diagram(&tree)?)
}

/// Number of frame edges in a diagram, counting inner paths.
pub fn frame_edge_count(edges: &[DiagramEdge]) -> usize {
    edges
        .iter()
        .map(|e| usize::from(e.kind.is_frame()) + e.inner.as_deref().map_or(0, frame_edge_count))
        .sum()
}

/// Swap covariant and contravariant on the `index`-th frame edge
/// (depth-first order). Returns false when there is no such edge.
pub fn flip_frame_variance(edges: &mut [DiagramEdge], index: usize) -> bool {
    fn go(edges: &mut [DiagramEdge], index: &mut usize) -> bool {
        for e in edges {
            if e.kind.is_frame() {
                if *index == 0 {
                    e.kind = match e.kind {
                        EdgeKind::CovariantFrame => EdgeKind::ContravariantFrame,
                        _ => EdgeKind::CovariantFrame,
                    };
                    return true;
                }
                *index -= 1;
            }
            if let Some(inner) = e.inner.as_mut() {
                if go(inner, index) {
                    return true;
                }
            }
        }
        false
    }
    let mut i = index;
    go(edges, &mut i)
}
