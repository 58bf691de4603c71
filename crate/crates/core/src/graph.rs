//! Weighted dual graphs and the blow-down calculus.
//!
//! Vertices carry an integer weight (a self-intersection number) and an
//! `exceptional` flag; edges are unordered pairs. The graphs produced by the
//! resolution machinery are always trees with exactly one non-exceptional
//! vertex (the strict transform of the curve at infinity).
//!
//! Blowing down removes a (-1)-weighted exceptional vertex of degree <= 2,
//! bumps each neighbour's weight by one, and joins two neighbours by an edge.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub weight: i64,
    pub exceptional: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightedGraph {
    pub vertices: Vec<Vertex>,
    /// Unordered id pairs, stored sorted.
    pub edges: BTreeSet<(String, String)>,
}

impl WeightedGraph {
    pub fn new() -> Self {
        WeightedGraph::default()
    }

    pub fn add_vertex(&mut self, id: &str, weight: i64, exceptional: bool) {
        debug_assert!(self.find(id).is_none(), "duplicate vertex id {}", id);
        self.vertices.push(Vertex {
            id: id.to_string(),
            weight,
            exceptional,
        });
    }

    pub fn add_edge(&mut self, a: &str, b: &str) {
        assert!(a != b, "no loops in a dual graph");
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.edges.insert((a.to_string(), b.to_string()));
    }

    pub fn remove_edge(&mut self, a: &str, b: &str) {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.edges.remove(&(a.to_string(), b.to_string()));
    }

    pub fn find(&self, id: &str) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    fn find_mut(&mut self, id: &str) -> Option<&mut Vertex> {
        self.vertices.iter_mut().find(|v| v.id == id)
    }

    pub fn bump_weight(&mut self, id: &str, delta: i64) {
        self.find_mut(id).expect("unknown vertex").weight += delta;
    }

    pub fn rename_vertex(&mut self, old: &str, new: &str) {
        if old == new {
            return;
        }
        debug_assert!(self.find(new).is_none(), "id {} already taken", new);
        if let Some(v) = self.find_mut(old) {
            v.id = new.to_string();
        }
        self.edges = self
            .edges
            .iter()
            .map(|(a, b)| {
                let a = if a == old { new } else { a };
                let b = if b == old { new } else { b };
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                (a.to_string(), b.to_string())
            })
            .collect();
    }

    pub fn neighbors(&self, id: &str) -> Vec<String> {
        self.edges
            .iter()
            .filter_map(|(a, b)| {
                if a == id {
                    Some(b.clone())
                } else if b == id {
                    Some(a.clone())
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, id: &str) -> usize {
        self.neighbors(id).len()
    }

    pub fn is_tree(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        self.edges.len() == self.vertices.len() - 1 && self.components().len() == 1
    }

    /// Connected components as vertex-id sets, in first-seen order.
    pub fn components(&self) -> Vec<BTreeSet<String>> {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut out = Vec::new();
        for v in &self.vertices {
            if seen.contains(&v.id) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![v.id.clone()];
            while let Some(id) = stack.pop() {
                if !comp.insert(id.clone()) {
                    continue;
                }
                seen.insert(id.clone());
                stack.extend(self.neighbors(&id));
            }
            out.push(comp);
        }
        out
    }

    /// Subgraph induced on the vertices satisfying `keep`.
    pub fn induced(&self, keep: impl Fn(&Vertex) -> bool) -> WeightedGraph {
        let kept: BTreeSet<String> = self
            .vertices
            .iter()
            .filter(|v| keep(v))
            .map(|v| v.id.clone())
            .collect();
        WeightedGraph {
            vertices: self
                .vertices
                .iter()
                .filter(|v| kept.contains(&v.id))
                .cloned()
                .collect(),
            edges: self
                .edges
                .iter()
                .filter(|(a, b)| kept.contains(a) && kept.contains(b))
                .cloned()
                .collect(),
        }
    }

    /// Blow down one vertex: must be exceptional, weight -1, degree <= 2.
    pub fn blow_down(&self, id: &str) -> Result<WeightedGraph> {
        let v = self
            .find(id)
            .ok_or_else(|| Error::precondition(format!("no vertex named {}", id)))?;
        if !v.exceptional {
            return Err(Error::precondition(format!(
                "vertex {} is not exceptional",
                id
            )));
        }
        if v.weight != -1 {
            return Err(Error::precondition(format!(
                "vertex {} has weight {}, not -1",
                id, v.weight
            )));
        }
        let nbrs = self.neighbors(id);
        if nbrs.len() > 2 {
            return Err(Error::precondition(format!(
                "vertex {} has degree {} > 2",
                id,
                nbrs.len()
            )));
        }
        let mut g = self.clone();
        g.vertices.retain(|v| v.id != id);
        g.edges.retain(|(a, b)| a != id && b != id);
        for n in &nbrs {
            g.bump_weight(n, 1);
        }
        if let [a, b] = nbrs.as_slice() {
            g.add_edge(a, b);
        }
        Ok(g)
    }

    /// Exhaustively blow down exceptional (-1)-vertices of degree <= 2,
    /// picking the first eligible vertex in insertion order each round.
    pub fn blow_down_cascade(&self) -> WeightedGraph {
        let mut g = self.clone();
        loop {
            let next = g
                .vertices
                .iter()
                .find(|v| v.exceptional && v.weight == -1 && g.degree(&v.id) <= 2)
                .map(|v| v.id.clone());
            match next {
                Some(id) => g = g.blow_down(&id).expect("eligible vertex blows down"),
                None => return g,
            }
        }
    }

    /// The adjacency matrix with weights on the diagonal, over the given
    /// vertex order.
    pub fn intersection_form(&self, order: &[String]) -> crate::qmatrix::QMatrix {
        let n = order.len();
        let mut m = crate::qmatrix::QMatrix::zeros(n, n);
        for (i, a) in order.iter().enumerate() {
            m[(i, i)] = crate::cyclo::rat_i(self.find(a).unwrap().weight);
            for (j, b) in order.iter().enumerate().skip(i + 1) {
                let (x, y) = if a < b { (a, b) } else { (b, a) };
                if self.edges.contains(&(x.clone(), y.clone())) {
                    m[(i, j)] = crate::cyclo::rat_i(1);
                    m[(j, i)] = crate::cyclo::rat_i(1);
                }
            }
        }
        m
    }

    /// Weight-and-flag preserving isomorphism test. The graphs here are
    /// forests; each tree is encoded canonically (AHU-style) from every
    /// possible root and the minimum encoding is compared.
    pub fn isomorphic(&self, other: &WeightedGraph) -> bool {
        if self.vertices.len() != other.vertices.len()
            || self.edges.len() != other.edges.len()
        {
            return false;
        }
        let mut a = self.canonical_encoding();
        let mut b = other.canonical_encoding();
        a.sort();
        b.sort();
        a == b
    }

    /// One canonical string per connected component.
    fn canonical_encoding(&self) -> Vec<String> {
        assert!(
            self.edges.len() < self.vertices.len().max(1),
            "dual graphs here are forests"
        );
        self.components()
            .into_iter()
            .map(|comp| {
                comp.iter()
                    .map(|root| self.encode_from(root, None))
                    .min()
                    .unwrap_or_default()
            })
            .collect()
    }

    fn encode_from(&self, id: &str, parent: Option<&str>) -> String {
        let v = self.find(id).unwrap();
        let mut kids: Vec<String> = self
            .neighbors(id)
            .into_iter()
            .filter(|n| Some(n.as_str()) != parent)
            .map(|n| self.encode_from(&n, Some(id)))
            .collect();
        kids.sort();
        format!("({},{}[{}])", v.weight, v.exceptional as u8, kids.join(""))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(weights: &[i64]) -> WeightedGraph {
        let mut g = WeightedGraph::new();
        for (i, w) in weights.iter().enumerate() {
            g.add_vertex(&format!("E{}", i), *w, true);
            if i > 0 {
                g.add_edge(&format!("E{}", i - 1), &format!("E{}", i));
            }
        }
        g
    }

    #[test]
    fn blow_down_chain_end() {
        let g = chain(&[-1, -2]);
        let out = g.blow_down("E0").unwrap();
        assert_eq!(out.vertices.len(), 1);
        assert_eq!(out.find("E1").unwrap().weight, -1);
    }

    #[test]
    fn blow_down_middle_connects_neighbors() {
        // C - E1(-3) - E3(-1) - E2(-2): blowing down E3 joins E1 and E2.
        let mut g = WeightedGraph::new();
        g.add_vertex("C", 0, false);
        g.add_vertex("E1", -3, true);
        g.add_vertex("E3", -1, true);
        g.add_vertex("E2", -2, true);
        g.add_edge("C", "E1");
        g.add_edge("E1", "E3");
        g.add_edge("E3", "E2");
        let out = g.blow_down("E3").unwrap();
        assert_eq!(out.find("E1").unwrap().weight, -2);
        assert_eq!(out.find("E2").unwrap().weight, -1);
        assert!(out.edges.contains(&("E1".to_string(), "E2".to_string())));
    }

    #[test]
    fn blow_down_isolated_vertex() {
        let mut g = WeightedGraph::new();
        g.add_vertex("E0", -1, true);
        let out = g.blow_down("E0").unwrap();
        assert!(out.vertices.is_empty());
    }

    #[test]
    fn blow_down_preconditions() {
        let g = chain(&[-2, -1, -2]);
        assert!(g.blow_down("E0").is_err());
        let mut star = WeightedGraph::new();
        star.add_vertex("E0", -1, true);
        for i in 1..=3 {
            star.add_vertex(&format!("E{}", i), -2, true);
            star.add_edge("E0", &format!("E{}", i));
        }
        assert!(star.blow_down("E0").is_err());
    }

    #[test]
    fn cascade_is_confluent_on_small_graphs() {
        // Try every order of eligible vertices by hand on a chain where two
        // cascades are possible; all orders must agree with the cascade.
        let g = chain(&[-1, -2, -1]);
        let cascade = g.blow_down_cascade();
        let via_e0 = g
            .blow_down("E0")
            .unwrap()
            .blow_down_cascade();
        let via_e2 = g
            .blow_down("E2")
            .unwrap()
            .blow_down_cascade();
        assert!(cascade.isomorphic(&via_e0));
        assert!(cascade.isomorphic(&via_e2));
    }

    #[test]
    fn isomorphism_respects_weights_and_flags() {
        let a = chain(&[-1, -2, -3]);
        let b = chain(&[-3, -2, -1]);
        assert!(a.isomorphic(&b));
        let c = chain(&[-1, -3, -2]);
        assert!(!a.isomorphic(&c));

        let mut d = chain(&[-1, -2, -3]);
        d.find_mut("E1").unwrap().exceptional = false;
        assert!(!a.isomorphic(&d));
    }
}
