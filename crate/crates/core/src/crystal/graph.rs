use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use super::{Crystal, CrystalError, ExtInt};
use crate::cartan::Weight;

/// The `f`-reachable part of a crystal up to a fixed depth.
#[derive(Debug, Clone)]
pub struct Exploration<E> {
    pub elements: Vec<E>,
    /// BFS layer of each element.
    pub layers: Vec<usize>,
    /// `(source position, target position, 0-based index)`.
    pub edges: Vec<(usize, usize, usize)>,
}

impl<E> Exploration<E> {
    pub fn layer_sizes(&self) -> Vec<usize> {
        let depth = self.layers.iter().copied().max().map_or(0, |d| d + 1);
        let mut sizes = vec![0; depth];
        for &l in &self.layers {
            sizes[l] += 1;
        }
        sizes
    }
}

/// Breadth-first closure of `root` under the `f_i`, up to `depth` steps.
///
/// Each layer is ordered by the smallest index labelling an incoming edge,
/// then by key, so the result does not depend on discovery order.
pub fn explore<C: Crystal>(
    crystal: &C,
    root: &C::Element,
    depth: usize,
    cap: usize,
) -> Result<Exploration<C::Element>, CrystalError> {
    let rank = crystal.datum().rank();
    let mut elements = vec![root.clone()];
    let mut layers = vec![0];
    let mut edges = Vec::new();
    let mut position: HashMap<C::Element, usize> = HashMap::new();
    position.insert(root.clone(), 0);
    if elements.len() > cap {
        return Err(CrystalError::DepthExceeded { cap, depth });
    }

    let mut frontier = 0..1;
    for layer in 1..=depth {
        // (element, first index reaching it)
        let mut fresh: HashMap<C::Element, usize> = HashMap::new();
        let mut pending = Vec::new();
        for src in frontier.clone() {
            for i in 0..rank {
                if let Some(dst) = crystal.f(i, &elements[src]) {
                    let first = fresh.entry(dst.clone()).or_insert(i);
                    *first = (*first).min(i);
                    pending.push((src, dst, i));
                }
            }
        }
        let mut next: Vec<(usize, String, C::Element)> =
            fresh.into_iter().map(|(b, i)| (i, crystal.key(&b), b)).collect();
        next.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));

        let start = elements.len();
        for (_, _, b) in next {
            if position.contains_key(&b) {
                continue;
            }
            position.insert(b.clone(), elements.len());
            elements.push(b);
            layers.push(layer);
            if elements.len() > cap {
                return Err(CrystalError::DepthExceeded { cap, depth });
            }
        }
        for (src, dst, i) in pending {
            edges.push((src, position[&dst], i));
        }
        frontier = start..elements.len();
    }
    edges.sort();
    Ok(Exploration { elements, layers, edges })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphNode {
    pub key: String,
    pub wt: Weight,
    pub eps: Vec<ExtInt>,
    pub phi: Vec<ExtInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphEdge {
    pub src: String,
    pub dst: String,
    /// 1-based index label.
    pub i: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrystalGraph {
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    pub root: String,
}

impl CrystalGraph {
    pub fn from_exploration<C: Crystal>(crystal: &C, ex: &Exploration<C::Element>) -> Self {
        let indices = crystal.datum().indices();
        let keys: Vec<String> = ex.elements.iter().map(|b| crystal.key(b)).collect();
        let nodes = ex
            .elements
            .iter()
            .zip(&keys)
            .map(|(b, key)| GraphNode {
                key: key.clone(),
                wt: crystal.wt(b),
                eps: indices.clone().map(|i| crystal.eps(i, b)).collect(),
                phi: indices.clone().map(|i| crystal.phi(i, b)).collect(),
            })
            .collect();
        let edges = ex
            .edges
            .iter()
            .map(|&(s, d, i)| GraphEdge { src: keys[s].clone(), dst: keys[d].clone(), i: i + 1 })
            .collect();
        Self { nodes, edges, root: keys[0].clone() }
    }

    /// Number of nodes of each weight.
    pub fn weight_counts(&self) -> HashMap<Weight, usize> {
        let mut counts = HashMap::new();
        for n in &self.nodes {
            *counts.entry(n.wt.clone()).or_insert(0) += 1;
        }
        counts
    }
}

pub fn generate_graph<C: Crystal>(
    crystal: &C,
    root: &C::Element,
    depth: usize,
    cap: usize,
) -> Result<CrystalGraph, CrystalError> {
    let ex = explore(crystal, root, depth, cap)?;
    Ok(CrystalGraph::from_exploration(crystal, &ex))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    Json,
}

impl FromStr for GraphFormat {
    type Err = CrystalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(Self::Dot),
            "json" => Ok(Self::Json),
            other => Err(CrystalError::UnknownFormat(other.to_string())),
        }
    }
}

pub fn export_graph(g: &CrystalGraph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Json => {
            let mut s = serde_json::to_string_pretty(g).expect("graph serialization cannot fail");
            s.push('\n');
            s
        }
        GraphFormat::Dot => {
            let mut s = String::from("digraph crystal {\n");
            for n in &g.nodes {
                let _ = writeln!(s, "  \"{}\" [label=\"{}\\nwt={}\"];", n.key, n.key, n.wt);
            }
            for e in &g.edges {
                let _ = writeln!(s, "  \"{}\" -> \"{}\" [label=\"{}\"];", e.src, e.dst, e.i);
            }
            s.push_str("}\n");
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanDatum;
    use crate::elementary::{ElementaryCrystal, ElementaryElement};

    #[test]
    fn chain_in_elementary_crystal() {
        let c = ElementaryCrystal::new(CartanDatum::new(vec![vec![2]]).unwrap());
        let g = generate_graph(&c, &ElementaryElement::new(0, 0), 4, 100).unwrap();
        assert_eq!(g.nodes.len(), 5);
        assert_eq!(g.edges.len(), 4);
        assert!(g.edges.iter().all(|e| e.i == 1));
    }

    #[test]
    fn cap_is_enforced() {
        let c = ElementaryCrystal::new(CartanDatum::new(vec![vec![2]]).unwrap());
        let err = generate_graph(&c, &ElementaryElement::new(0, 0), 10, 5).unwrap_err();
        assert_eq!(err, CrystalError::DepthExceeded { cap: 5, depth: 10 });
    }

    #[test]
    fn single_node_dot() {
        let c = ElementaryCrystal::new(CartanDatum::new(vec![vec![2]]).unwrap());
        let g = generate_graph(&c, &ElementaryElement::new(0, 0), 0, 10).unwrap();
        let dot = export_graph(&g, GraphFormat::Dot);
        assert_eq!(dot.matches(" -> ").count(), 0);
        assert_eq!(dot.matches("[label=").count(), 1);
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot, export_graph(&g, GraphFormat::Dot));
    }

    #[test]
    fn unknown_format() {
        assert_eq!("svg".parse::<GraphFormat>(), Err(CrystalError::UnknownFormat("svg".into())));
    }
}
