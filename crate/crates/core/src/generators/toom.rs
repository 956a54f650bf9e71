use std::f64::consts::PI;

use crate::algebra::{square_vandermonde, vandermonde, Node, Rational, Scalar};
use crate::bilinear::{AnyAlgorithm, BilinearAlgorithm, ConvVariant};
use crate::error::{ConvError, Result};

/// How default interpolation nodes are picked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeScheme {
    /// `0, 1, −1, 2, −2, …` followed by `∞`.
    SmallIntegers,
    /// First-kind Chebyshev points `cos((2i+1)π/(2R))`, no `∞`.
    Chebyshev,
}

/// A node list in whichever domain the scheme produces.
#[derive(Clone, Debug, PartialEq)]
pub enum NodeList {
    Rational(Vec<Node<Rational>>),
    Real(Vec<Node<f64>>),
}

impl NodeList {
    pub fn len(&self) -> usize {
        match self {
            NodeList::Rational(v) => v.len(),
            NodeList::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `count − 1` small integers in the order `0, 1, −1, 2, −2, …` and then `∞`.
/// A single node is just `0`.
pub fn small_integer_nodes(count: usize) -> Vec<Node<Rational>> {
    if count <= 1 {
        return (0..count)
            .map(|_| Node::Finite(Rational::from_i64(0)))
            .collect();
    }
    let mut nodes: Vec<Node<Rational>> = (0..count - 1)
        .map(|i| {
            let i = i as i64;
            let v = if i % 2 == 1 { (i + 1) / 2 } else { -(i / 2) };
            Node::Finite(Rational::from_i64(v))
        })
        .collect();
    nodes.push(Node::Infinity);
    nodes
}

pub fn chebyshev_nodes(count: usize) -> Vec<Node<f64>> {
    (0..count)
        .map(|i| Node::Finite(((2 * i + 1) as f64 * PI / (2 * count) as f64).cos()))
        .collect()
}

pub fn default_nodes(count: usize, scheme: NodeScheme) -> NodeList {
    match scheme {
        NodeScheme::SmallIntegers => NodeList::Rational(small_integer_nodes(count)),
        NodeScheme::Chebyshev => NodeList::Real(chebyshev_nodes(count)),
    }
}

/// Toom-Cook linear convolution from `n + r − 1` distinct nodes: the
/// encoders are truncated Vandermonde matrices and the decoder is the inverse
/// of the square one.
pub fn toom_cook<T: Scalar>(r: usize, n: usize, nodes: &[Node<T>]) -> Result<BilinearAlgorithm<T>> {
    if r == 0 || n == 0 {
        return Err(ConvError::InvalidArgument(
            "filter and input lengths must be >= 1".into(),
        ));
    }
    let rank = n + r - 1;
    if nodes.len() != rank {
        return Err(ConvError::InvalidArgument(format!(
            "toom-cook({r}, {n}) needs {rank} nodes, got {}",
            nodes.len()
        )));
    }
    let a = vandermonde(nodes, r)?;
    let b = vandermonde(nodes, n)?;
    let c = square_vandermonde(nodes)?.inverse()?;
    BilinearAlgorithm::new(
        a,
        b,
        c,
        ConvVariant::Linear { r, n },
        format!("toom-cook(r={r}, n={n})"),
    )
}

/// Toom-Cook with the scheme's default nodes.
pub fn toom_cook_scheme(r: usize, n: usize, scheme: NodeScheme) -> Result<AnyAlgorithm> {
    if r == 0 || n == 0 {
        return Err(ConvError::InvalidArgument(
            "filter and input lengths must be >= 1".into(),
        ));
    }
    Ok(match default_nodes(n + r - 1, scheme) {
        NodeList::Rational(nodes) => toom_cook(r, n, &nodes)?
            .with_provenance(format!("toom-cook(r={r}, n={n}, integer nodes)"))
            .into(),
        NodeList::Real(nodes) => toom_cook(r, n, &nodes)?
            .with_provenance(format!("toom-cook(r={r}, n={n}, chebyshev nodes)"))
            .into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational;

    fn fin(v: i64) -> Node<Rational> {
        Node::Finite(rational(v, 1))
    }

    #[test]
    fn integer_node_order() {
        assert_eq!(small_integer_nodes(3), vec![fin(0), fin(1), Node::Infinity]);
        assert_eq!(
            small_integer_nodes(5),
            vec![fin(0), fin(1), fin(-1), fin(2), Node::Infinity]
        );
    }

    #[test]
    fn chebyshev_pair() {
        let nodes = chebyshev_nodes(2);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match (&nodes[0], &nodes[1]) {
            (Node::Finite(a), Node::Finite(b)) => {
                assert!((a - s).abs() < 1e-15 && (b + s).abs() < 1e-15)
            }
            _ => panic!("unexpected infinity"),
        }
    }

    #[test]
    fn karatsuba_nodes_give_table_counts() {
        let alg = toom_cook(2, 2, &small_integer_nodes(3)).unwrap();
        assert_eq!(alg.rank(), 3);
        assert_eq!(alg.a().nnz(), 4);
        assert_eq!(alg.c().nnz(), 5);
        assert_eq!(alg.residual(), 0.0);
    }

    #[test]
    fn node_errors() {
        let dup = vec![fin(0), fin(0), Node::Infinity];
        assert!(matches!(
            toom_cook(2, 2, &dup),
            Err(ConvError::DuplicateNode(_))
        ));
        let bad = vec![fin(0), Node::Infinity, fin(1)];
        assert!(matches!(
            toom_cook(2, 2, &bad),
            Err(ConvError::InfinityNotLast)
        ));
        assert!(toom_cook(2, 2, &small_integer_nodes(4)).is_err());
    }

    #[test]
    fn chebyshev_toom_validates() {
        let alg = toom_cook(3, 3, &chebyshev_nodes(5)).unwrap();
        assert_eq!(alg.rank(), 5);
        assert!(alg.residual() < 1e-12);
    }
}
