//! Point-set files.
//!
//! ```json
//! {"mode": "exact", "points": [{"x": {"num": 1, "den": 2, "rnum": 0, "rden": 1}, "y": ...}],
//!  "spec": {...}}
//! {"mode": "declared", "points": [{"x": "0.5", "y": "0.8660254"}], "edges": [[0, 1]]}
//! ```

use penny_core::error::{Error, Result};
use penny_core::format::{parse_decimal, parse_point, point_json};
use penny_core::generators::InstanceSpec;
use penny_core::geometry::Point;
use penny_core::graph::{build_penny_graph, PennyGraph};
use serde_json::{json, Map, Value};

#[derive(Clone, Debug)]
pub enum Points {
    Exact(Vec<Point>),
    Declared {
        coords: Vec<[f64; 2]>,
        edges: Vec<(usize, usize)>,
    },
}

#[derive(Clone, Debug)]
pub struct PointSetFile {
    pub points: Points,
    pub spec: Option<InstanceSpec>,
    /// Extra top-level fields written verbatim (e.g. a search summary).
    pub extra: Map<String, Value>,
}

fn invalid(msg: String) -> Error {
    Error::InvalidInput(msg)
}

impl PointSetFile {
    pub fn exact(points: Vec<Point>, spec: Option<InstanceSpec>) -> Self {
        PointSetFile {
            points: Points::Exact(points),
            spec,
            extra: Map::new(),
        }
    }

    pub fn declared(coords: Vec<[f64; 2]>, edges: Vec<(usize, usize)>, spec: Option<InstanceSpec>) -> Self {
        PointSetFile {
            points: Points::Declared { coords, edges },
            spec,
            extra: Map::new(),
        }
    }

    pub fn graph(&self) -> Result<PennyGraph> {
        match &self.points {
            Points::Exact(p) => build_penny_graph(p.clone()),
            Points::Declared { coords, edges } => PennyGraph::declared(coords.clone(), edges.clone()),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        match &self.points {
            Points::Exact(p) => {
                out.insert("mode".into(), json!("exact"));
                out.insert("points".into(), Value::Array(p.iter().map(point_json).collect()));
            }
            Points::Declared { coords, edges } => {
                out.insert("mode".into(), json!("declared"));
                let pts = coords
                    .iter()
                    .map(|[x, y]| json!({ "x": format!("{x:?}"), "y": format!("{y:?}") }))
                    .collect();
                out.insert("points".into(), Value::Array(pts));
                out.insert("edges".into(), json!(edges.iter().map(|&(u, v)| [u, v]).collect::<Vec<_>>()));
            }
        }
        if let Some(s) = &self.spec {
            out.insert("spec".into(), serde_json::to_value(s).expect("spec serializes"));
        }
        for (k, v) in &self.extra {
            out.insert(k.clone(), v.clone());
        }
        Value::Object(out)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let mode = v
            .get("mode")
            .ok_or_else(|| invalid("mode: missing".into()))?
            .as_str()
            .ok_or_else(|| invalid("mode: expected \"exact\" or \"declared\"".into()))?;
        let points = v
            .get("points")
            .ok_or_else(|| invalid("points: missing".into()))?
            .as_array()
            .ok_or_else(|| invalid("points: expected an array".into()))?;
        let spec = match v.get("spec") {
            None | Some(Value::Null) => None,
            Some(s) => Some(serde_json::from_value(s.clone()).map_err(|e| invalid(format!("spec: {e}")))?),
        };
        let points = match mode {
            "exact" => {
                if v.get("edges").is_some() {
                    return Err(invalid("edges: only allowed in declared mode".into()));
                }
                let mut out = Vec::with_capacity(points.len());
                for (i, p) in points.iter().enumerate() {
                    let path = format!("points[{i}]");
                    for axis in ["x", "y"] {
                        if matches!(p.get(axis), Some(Value::Number(_) | Value::String(_))) {
                            return Err(invalid(format!("{path}.{axis}: decimal coordinate in exact mode")));
                        }
                    }
                    out.push(parse_point(p, &path)?);
                }
                Points::Exact(out)
            }
            "declared" => {
                let mut coords = Vec::with_capacity(points.len());
                for (i, p) in points.iter().enumerate() {
                    let path = format!("points[{i}]");
                    let get = |axis: &str| {
                        let f = p.get(axis).ok_or_else(|| invalid(format!("{path}.{axis}: missing")))?;
                        parse_decimal(f, &format!("{path}.{axis}"))
                    };
                    coords.push([get("x")?, get("y")?]);
                }
                let edges = v
                    .get("edges")
                    .ok_or_else(|| invalid("edges: required in declared mode".into()))?
                    .as_array()
                    .ok_or_else(|| invalid("edges: expected an array".into()))?
                    .iter()
                    .enumerate()
                    .map(|(i, e)| match e.as_array().map(|a| a.as_slice()) {
                        Some([a, b]) => match (a.as_u64(), b.as_u64()) {
                            (Some(a), Some(b)) => Ok((a as usize, b as usize)),
                            _ => Err(invalid(format!("edges[{i}]: expected two vertex indices"))),
                        },
                        _ => Err(invalid(format!("edges[{i}]: expected [u, v]"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Points::Declared { coords, edges }
            }
            other => return Err(invalid(format!("mode: unknown mode {other:?}"))),
        };
        Ok(PointSetFile {
            points,
            spec,
            extra: Map::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use penny_core::generators::{gen_hex_lattice, InstanceSpec};

    #[test]
    fn exact_round_trip() {
        let f = PointSetFile::exact(gen_hex_lattice(1), Some(InstanceSpec::hex(1)));
        let back = PointSetFile::from_json(&f.to_json()).unwrap();
        assert_eq!(back.spec, f.spec);
        assert_eq!(back.graph().unwrap().edges(), f.graph().unwrap().edges());
    }

    #[test]
    fn declared_round_trip() {
        let f = PointSetFile::declared(vec![[0.0, 0.0], [1.0, 0.0], [0.1, 0.3]], vec![(0, 1)], None);
        let back = PointSetFile::from_json(&f.to_json()).unwrap();
        match back.points {
            Points::Declared { coords, edges } => {
                assert_eq!(coords[2], [0.1, 0.3]);
                assert_eq!(edges, vec![(0, 1)]);
            }
            Points::Exact(_) => panic!("mode changed"),
        }
    }

    #[test]
    fn mode_rules() {
        let e = PointSetFile::from_json(&json!({"mode": "exact", "points": [{"x": "0.5", "y": {"num": 0, "den": 1}}]}));
        assert!(e.unwrap_err().to_string().contains("points[0].x"));
        let e = PointSetFile::from_json(&json!({"mode": "declared", "points": []}));
        assert!(e.unwrap_err().to_string().contains("edges"));
    }
}
