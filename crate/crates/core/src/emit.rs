//! DOT and JSON output.
//!
//! Both serializers are deterministic: identical inputs yield byte-identical
//! text. DOT draws exceptional vertices filled, labelled "id\nweight"; JSON
//! follows one fixed schema with fields present per command.

use num::bigint::BigInt;
use serde::Serialize;

use crate::cyclo::Rational;
use crate::graph::WeightedGraph;
use crate::qmatrix::QMatrix;

/// DOT rendering of a weighted graph.
pub fn emit_dot(g: &WeightedGraph) -> String {
    if g.vertices.is_empty() {
        return "graph G { }\n".to_string();
    }
    let mut out = String::from("graph G {\n");
    for v in &g.vertices {
        let style = if v.exceptional { ", style=filled" } else { "" };
        out.push_str(&format!(
            "  \"{}\" [label=\"{}\\n{}\"{}];\n",
            v.id, v.id, v.weight, style
        ));
    }
    for (a, b) in &g.edges {
        out.push_str(&format!("  \"{}\" -- \"{}\";\n", a, b));
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
pub struct JsonVertex {
    pub id: String,
    pub weight: i64,
    pub exceptional: bool,
}

#[derive(Serialize)]
pub struct JsonGraph {
    pub vertices: Vec<JsonVertex>,
    pub edges: Vec<[String; 2]>,
}

/// Top-level JSON schema shared by all commands; unset fields are omitted.
#[derive(Serialize, Default)]
pub struct JsonReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formal_pairs: Option<Vec<[String; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polydromy: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_star: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skewness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub determines_compactification: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exists: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub determinant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_m: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_i: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvette: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<JsonGraph>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_points: Option<usize>,
}

pub fn graph_to_json(g: &WeightedGraph) -> JsonGraph {
    JsonGraph {
        vertices: g
            .vertices
            .iter()
            .map(|v| JsonVertex {
                id: v.id.clone(),
                weight: v.weight,
                exceptional: v.exceptional,
            })
            .collect(),
        edges: g.edges.iter().map(|(a, b)| [a.clone(), b.clone()]).collect(),
    }
}

pub fn matrix_to_json(m: &QMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect())
        .collect()
}

pub fn rational_string(r: &Rational) -> String {
    r.to_string()
}

pub fn bigint_string(b: &BigInt) -> String {
    b.to_string()
}

/// Parse a matrix from the JSON form emitted by `matrix_to_json`
/// (rows of "a/b" strings).
pub fn matrix_from_json(text: &str) -> crate::error::Result<QMatrix> {
    let rows: Vec<Vec<String>> = serde_json::from_str(text).map_err(|e| {
        crate::error::Error::Parse { line: 1, col: 1, msg: format!("invalid matrix JSON: {}", e) }
    })?;
    let nrows = rows.len();
    if nrows == 0 || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(crate::error::Error::precondition(
            "matrix file must be a nonempty rectangular array",
        ));
    }
    let ncols = rows[0].len();
    let mut data = Vec::with_capacity(nrows * ncols);
    for row in &rows {
        for cell in row {
            let r: Rational = cell.parse().map_err(|_| crate::error::Error::Parse {
                line: 1,
                col: 1,
                msg: format!("invalid rational entry '{}'", cell),
            })?;
            data.push(r);
        }
    }
    Ok(QMatrix::new(nrows, ncols, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_dot() {
        assert_eq!(emit_dot(&WeightedGraph::new()), "graph G { }\n");
    }

    #[test]
    fn single_vertex_dot() {
        let mut g = WeightedGraph::new();
        g.add_vertex("E0", -1, true);
        let dot = emit_dot(&g);
        assert!(dot.contains("\"E0\" [label=\"E0\\n-1\", style=filled];"));
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = QMatrix::from_i64(2, 2, &[1, 2, 2, -6]);
        let json = serde_json::to_string(&matrix_to_json(&m)).unwrap();
        let back = matrix_from_json(&json).unwrap();
        assert_eq!(back, m);
    }
}
