//! File formats: JSON for complexes, functions, covers and towers; CSV for
//! metrics and diagrams; DOT for nerve and Reeb graphs. Every writer output
//! round-trips through the matching loader.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Map, Value as Json};

use crate::complex::{SimplicialComplex, VertexId};
use crate::covers::{
    cover_map, Codomain, Cover, CoverElement, CoverMap, FiniteMetricSpace, TowerOfCovers, Value,
};
use crate::error::{Error, Result};
use crate::generators::SizedBasis;
use crate::metrics::{MetricMode, PseudoMetric};
use crate::persistence::{DiagramMode, PersistenceDiagram};
use crate::pullback::Mapper;
use crate::reeb::ReebGraph;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

/// Vertex ids may be strings or integers in input files.
fn id_of(v: &Json) -> Result<VertexId> {
    match v {
        Json::String(s) => Ok(s.clone()),
        Json::Number(n) => Ok(n.to_string()),
        other => Err(bad(format!("expected a vertex id, got {other}"))),
    }
}

fn id_list(v: &Json, what: &str) -> Result<Vec<VertexId>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be an array")))?
        .iter()
        .map(id_of)
        .collect()
}

pub fn parse_complex(doc: &Json) -> Result<SimplicialComplex> {
    let vertices = id_list(
        doc.get("vertices").ok_or_else(|| bad("missing vertices"))?,
        "vertices",
    )?;
    if vertices.is_empty() {
        return Err(bad("no vertices"));
    }
    let simplices: Vec<Vec<VertexId>> = doc
        .get("simplices")
        .map(|s| -> Result<_> {
            s.as_array()
                .ok_or_else(|| bad("simplices must be an array"))?
                .iter()
                .map(|row| id_list(row, "simplex"))
                .collect()
        })
        .transpose()?
        .unwrap_or_default();
    let dim_cap = doc
        .get("dim_cap")
        .map(|d| d.as_u64().ok_or_else(|| bad("dim_cap must be an integer")))
        .transpose()?
        .unwrap_or(2) as usize;
    SimplicialComplex::build(vertices, simplices, dim_cap)
}

pub fn complex_to_json(complex: &SimplicialComplex) -> Json {
    let maximal: Vec<Json> = complex
        .maximal_simplices()
        .into_iter()
        .map(|s| Json::Array(s.into_iter().map(Json::String).collect()))
        .collect();
    json!({
        "vertices": complex.vertices(),
        "simplices": maximal,
        "dim_cap": complex.dim_cap(),
    })
}

pub fn parse_values(doc: &Json) -> Result<BTreeMap<VertexId, Value>> {
    let map = doc
        .get("values")
        .and_then(|v| v.as_object())
        .ok_or_else(|| bad("function file needs a \"values\" object"))?;
    let mut out = BTreeMap::new();
    for (k, v) in map {
        let value = match v {
            Json::Number(n) => Value::Real(
                n.as_f64().ok_or_else(|| bad("non-finite function value"))?,
            ),
            Json::String(p) => Value::Point(p.clone()),
            other => return Err(bad(format!("bad function value {other}"))),
        };
        out.insert(k.clone(), value);
    }
    Ok(out)
}

pub fn values_to_json(values: &BTreeMap<VertexId, Value>) -> Json {
    let mut map = Map::new();
    for (k, v) in values {
        let j = match v {
            Value::Real(x) => json!(x),
            Value::Point(p) => json!(p),
        };
        map.insert(k.clone(), j);
    }
    json!({ "values": Json::Object(map) })
}

pub fn parse_codomain(doc: &Json) -> Result<Codomain> {
    let kind = doc
        .get("type")
        .and_then(|t| t.as_str())
        .ok_or_else(|| bad("codomain needs a \"type\""))?;
    match kind {
        "real" => {
            let lo = doc
                .get("lo")
                .and_then(|x| x.as_f64())
                .ok_or_else(|| bad("real codomain needs lo"))?;
            let hi = doc
                .get("hi")
                .and_then(|x| x.as_f64())
                .ok_or_else(|| bad("real codomain needs hi"))?;
            Codomain::real(lo, hi)
        }
        "finite_metric" => {
            let points = id_list(
                doc.get("points").ok_or_else(|| bad("metric needs points"))?,
                "points",
            )?;
            let dist = parse_matrix(
                doc.get("dist").ok_or_else(|| bad("metric needs dist"))?,
            )?;
            Ok(Codomain::FiniteMetric(FiniteMetricSpace::new(points, dist)?))
        }
        other => Err(bad(format!("unknown codomain type {other:?}"))),
    }
}

fn codomain_to_json(codomain: &Codomain) -> Json {
    match codomain {
        Codomain::Real { lo, hi } => json!({ "type": "real", "lo": lo, "hi": hi }),
        Codomain::FiniteMetric(m) => {
            let n = m.len();
            let dist: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| m.distance(i, j)).collect())
                .collect();
            json!({ "type": "finite_metric", "points": m.points(), "dist": dist })
        }
    }
}

fn parse_matrix(doc: &Json) -> Result<Vec<Vec<f64>>> {
    doc.as_array()
        .ok_or_else(|| bad("matrix must be an array of rows"))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| bad("matrix row must be an array"))?
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| bad("matrix entry must be a number")))
                .collect()
        })
        .collect()
}

pub fn parse_cover(doc: &Json) -> Result<Cover> {
    let codomain = parse_codomain(
        doc.get("codomain").ok_or_else(|| bad("cover needs a codomain"))?,
    )?;
    let elements = doc
        .get("elements")
        .and_then(|e| e.as_array())
        .ok_or_else(|| bad("cover needs an elements array"))?
        .iter()
        .map(|e| {
            if let Some(iv) = e.get("interval") {
                let pair = iv
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| bad("interval must be [lo, hi]"))?;
                let lo = pair[0].as_f64().ok_or_else(|| bad("bad interval lo"))?;
                let hi = pair[1].as_f64().ok_or_else(|| bad("bad interval hi"))?;
                Ok(CoverElement::Interval { lo, hi })
            } else if let Some(pts) = e.get("points") {
                Ok(CoverElement::Points(
                    id_list(pts, "element points")?.into_iter().collect(),
                ))
            } else {
                Err(bad("cover element needs \"interval\" or \"points\""))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Cover::new(codomain, elements)
}

pub fn cover_to_json(cover: &Cover) -> Json {
    let elements: Vec<Json> = cover
        .elements()
        .iter()
        .enumerate()
        .map(|(i, e)| match e {
            CoverElement::Interval { lo, hi } => json!({ "id": i, "interval": [lo, hi] }),
            CoverElement::Points(set) => {
                json!({ "id": i, "points": set.iter().collect::<Vec<_>>() })
            }
        })
        .collect();
    json!({ "codomain": codomain_to_json(cover.codomain()), "elements": elements })
}

pub fn parse_tower(doc: &Json) -> Result<TowerOfCovers> {
    let scales_doc = doc
        .get("scales")
        .and_then(|s| s.as_array())
        .ok_or_else(|| bad("tower needs a scales array"))?;
    let mut scales = Vec::new();
    let mut covers = Vec::new();
    for entry in scales_doc {
        scales.push(
            entry
                .get("scale")
                .and_then(|x| x.as_f64())
                .ok_or_else(|| bad("tower scale entry needs a numeric scale"))?,
        );
        covers.push(parse_cover(
            entry.get("cover").ok_or_else(|| bad("tower scale entry needs a cover"))?,
        )?);
    }
    let maps: Vec<CoverMap> = match doc.get("maps") {
        Some(m) => {
            let rows = m.as_array().ok_or_else(|| bad("maps must be an array"))?;
            if rows.len() + 1 != covers.len() {
                return Err(bad("tower needs one map per consecutive cover pair"));
            }
            rows.iter()
                .enumerate()
                .map(|(i, row)| {
                    let assignment = row
                        .as_array()
                        .ok_or_else(|| bad("map must be an index array"))?
                        .iter()
                        .map(|x| {
                            x.as_u64()
                                .map(|u| u as usize)
                                .ok_or_else(|| bad("map entries must be indices"))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    CoverMap::new(&covers[i], &covers[i + 1], assignment)
                })
                .collect::<Result<_>>()?
        }
        None => (0..covers.len().saturating_sub(1))
            .map(|i| cover_map(&covers[i], &covers[i + 1]))
            .collect::<Result<_>>()?,
    };
    TowerOfCovers::new(scales, covers, maps)
}

pub fn tower_to_json(tower: &TowerOfCovers) -> Json {
    let scales: Vec<Json> = tower
        .scales()
        .iter()
        .zip(tower.covers())
        .map(|(s, c)| json!({ "scale": s, "cover": cover_to_json(c) }))
        .collect();
    let maps: Vec<Json> = tower
        .maps()
        .iter()
        .map(|m| json!(m.assignment()))
        .collect();
    json!({ "scales": scales, "maps": maps })
}

/// Square distance matrix as CSV: a header row of point ids, then one row of
/// distances per point.
pub fn metric_to_csv(points: &[String], dist: &dyn Fn(usize, usize) -> f64) -> String {
    let mut out = String::new();
    out.push_str(&points.join(","));
    out.push('\n');
    for i in 0..points.len() {
        let row: Vec<String> = (0..points.len()).map(|j| format!("{}", dist(i, j))).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_metric_csv(text: &str, mode: MetricMode) -> Result<PseudoMetric> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad("empty metric csv"))?;
    let points: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let mut dist = Vec::new();
    for line in lines {
        let row: Vec<f64> = line
            .split(',')
            .map(|x| {
                let t = x.trim();
                if t == "inf" {
                    Ok(f64::INFINITY)
                } else {
                    t.parse::<f64>().map_err(|_| bad(format!("bad distance {t:?}")))
                }
            })
            .collect::<Result<_>>()?;
        dist.push(row);
    }
    if dist.len() != points.len() {
        return Err(bad("metric csv row count does not match header"));
    }
    PseudoMetric::new(points, dist, mode)
}

/// Diagram CSV with header `k,birth,death`; infinite deaths print as `inf`.
pub fn diagram_to_csv(diagram: &PersistenceDiagram) -> String {
    let mut out = String::from("k,birth,death\n");
    for &(b, d) in &diagram.points {
        let death = if d.is_infinite() {
            "inf".to_string()
        } else {
            format!("{d}")
        };
        out.push_str(&format!("{},{b},{death}\n", diagram.k));
    }
    out
}

pub fn parse_diagram_csv(text: &str, mode: DiagramMode) -> Result<PersistenceDiagram> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| bad("empty diagram csv"))?;
    if header.trim() != "k,birth,death" {
        return Err(bad("diagram csv must start with k,birth,death"));
    }
    let mut k = None;
    let mut points = Vec::new();
    for line in lines {
        let cols: Vec<&str> = line.split(',').map(|s| s.trim()).collect();
        if cols.len() != 3 {
            return Err(bad(format!("bad diagram row {line:?}")));
        }
        let row_k: usize = cols[0].parse().map_err(|_| bad("bad k column"))?;
        match k {
            None => k = Some(row_k),
            Some(prev) if prev != row_k => return Err(bad("mixed k in one diagram")),
            _ => {}
        }
        let birth: f64 = cols[1].parse().map_err(|_| bad("bad birth"))?;
        let death = if cols[2] == "inf" {
            f64::INFINITY
        } else {
            cols[2].parse().map_err(|_| bad("bad death"))?
        };
        points.push((birth, death));
    }
    Ok(PersistenceDiagram::new(k.unwrap_or(1), mode, points))
}

/// Basis JSON: one entry per generator with its size and cycle edge list.
pub fn basis_to_json(basis: &SizedBasis) -> Json {
    let generators: Vec<Json> = basis
        .cycles
        .iter()
        .zip(&basis.sizes)
        .map(|(z, s)| {
            let edges: Vec<Json> = z
                .support
                .iter()
                .map(|e| Json::Array(e.iter().map(|v| json!(v)).collect()))
                .collect();
            json!({ "size": s, "edges": edges })
        })
        .collect();
    let mode = match basis.mode {
        crate::generators::BasisMode::Exact => "exact",
        crate::generators::BasisMode::Greedy => "greedy",
    };
    json!({ "mode": mode, "generators": generators })
}

fn dot_escape(s: &str) -> String {
    s.replace('"', "\\\"")
}

/// Mapper nerve as DOT: element nodes labelled "(α,i)", sized by the number
/// of domain vertices in the element.
pub fn mapper_to_dot(mapper: &Mapper) -> String {
    let mut out = String::from("graph nerve {\n  node [shape=circle];\n");
    for el in mapper.pullback.elements() {
        let size = el.vertices.len();
        let width = 0.3 + 0.1 * size as f64;
        out.push_str(&format!(
            "  \"{}\" [label=\"{}\", width={width:.2}, tooltip=\"{size} vertices\"];\n",
            dot_escape(&el.name),
            dot_escape(&el.name),
        ));
    }
    for e in mapper.nerve.simplices(1) {
        out.push_str(&format!(
            "  \"{}\" -- \"{}\";\n",
            dot_escape(&e[0]),
            dot_escape(&e[1])
        ));
    }
    out.push_str("}\n");
    out
}

pub fn reeb_to_dot(reeb: &ReebGraph) -> String {
    let mut out = String::from("graph reeb {\n  node [shape=circle];\n");
    for (i, node) in reeb.nodes.iter().enumerate() {
        let members: Vec<&str> = node.vertices.iter().map(|s| s.as_str()).collect();
        out.push_str(&format!(
            "  n{i} [label=\"f={} {{{}}}\"];\n",
            node.value,
            dot_escape(&members.join(","))
        ));
    }
    for &(a, b) in &reeb.edges {
        out.push_str(&format!("  n{a} -- n{b};\n"));
    }
    out.push_str("}\n");
    out
}

pub fn read_json(path: &Path) -> Result<Json> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

pub fn write_json(path: &Path, doc: &Json) -> Result<()> {
    write_text(path, &(serde_json::to_string_pretty(doc)? + "\n"))
}
