//! Text formats for complexes and foldings.
//!
//! A complex is one JSON document listing its maximal cells:
//!
//! ```text
//! {"kind":"cubical","cells":[[0,1,3,4],[1,2,4,5]]}
//! ```
//!
//! Cubical cells are corner arrays indexed by bitmask, simplicial cells are
//! vertex lists. Closure under faces is computed on load. A folding file
//! maps vertex ids to labels: bit lists for cubical foldings, vertices of
//! the standard simplex for simplicial ones.
//!
//! ```text
//! {"kind":"cubical","dim":2,"labels":{"0":[0,0],"1":[1,0]}}
//! {"kind":"simplicial","dim":2,"labels":{"0":0,"1":2}}
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;
use serde_json::Value;

use crate::cube::{Cube, VertexId};
use crate::cubical::CubicalComplex;
use crate::folding::{CubeFolding, SimplexFolding};
use crate::simplicial::SimplicialComplex;

/// A parse or load failure with the position or field it concerns.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

fn field(field: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError::Field { field: field.into(), message: message.into() }
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        ParseError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Complex {
    Cubical(CubicalComplex),
    Simplicial(SimplicialComplex),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplex {
    kind: String,
    cells: Vec<Vec<VertexId>>,
}

/// Parses a complex file. Cubical input is closed under faces but not
/// checked for admissibility.
pub fn parse_complex(text: &str) -> Result<Complex, ParseError> {
    let raw: RawComplex = serde_json::from_str(text)?;
    match raw.kind.as_str() {
        "cubical" => {
            for (i, c) in raw.cells.iter().enumerate() {
                Cube::new(c.clone()).map_err(|e| field(format!("cells[{i}]"), e.to_string()))?;
            }
            let x = CubicalComplex::from_cubes(raw.cells).map_err(|e| field("cells", e.to_string()))?;
            Ok(Complex::Cubical(x))
        }
        "simplicial" => {
            for (i, c) in raw.cells.iter().enumerate() {
                if c.is_empty() {
                    return Err(field(format!("cells[{i}]"), "empty simplex"));
                }
                if c.len() > 32 {
                    return Err(field(format!("cells[{i}]"), "simplex has more than 32 vertices"));
                }
            }
            let k = SimplicialComplex::from_simplices(raw.cells).map_err(|e| field("cells", e.to_string()))?;
            Ok(Complex::Simplicial(k))
        }
        other => Err(field("kind", format!("expected \"cubical\" or \"simplicial\", got {other:?}"))),
    }
}

fn write_cells(out: &mut String, cells: &[Vec<VertexId>]) {
    out.push('[');
    for (i, c) in cells.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        for (j, v) in c.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{v}").unwrap();
        }
        out.push(']');
    }
    out.push(']');
}

/// Canonical text: maximal cells in canonical form, sorted, one document
/// followed by a newline.
pub fn write_cubical(x: &CubicalComplex) -> String {
    let mut cells: Vec<Vec<VertexId>> = x.maximal().iter().map(|&c| x.cell(c).corners().to_vec()).collect();
    cells.sort();
    let mut out = String::from("{\"kind\":\"cubical\",\"cells\":");
    write_cells(&mut out, &cells);
    out.push_str("}\n");
    out
}

pub fn write_simplicial(k: &SimplicialComplex) -> String {
    let mut cells: Vec<Vec<VertexId>> = k.maximal().iter().map(|&c| k.simplex(c).to_vec()).collect();
    cells.sort();
    let mut out = String::from("{\"kind\":\"simplicial\",\"cells\":");
    write_cells(&mut out, &cells);
    out.push_str("}\n");
    out
}

pub fn write_complex(c: &Complex) -> String {
    match c {
        Complex::Cubical(x) => write_cubical(x),
        Complex::Simplicial(k) => write_simplicial(k),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Folding {
    Cubical(CubeFolding),
    Simplicial(SimplexFolding),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFolding {
    kind: String,
    dim: usize,
    labels: BTreeMap<String, Value>,
}

pub fn parse_folding(text: &str) -> Result<Folding, ParseError> {
    let raw: RawFolding = serde_json::from_str(text)?;
    let cubical = match raw.kind.as_str() {
        "cubical" => true,
        "simplicial" => false,
        other => return Err(field("kind", format!("expected \"cubical\" or \"simplicial\", got {other:?}"))),
    };
    if raw.dim > 31 {
        return Err(field("dim", "at most 31 coordinates are supported"));
    }
    let mut labels = BTreeMap::new();
    for (key, value) in &raw.labels {
        let name = format!("labels.{key}");
        let v: VertexId = key.parse().map_err(|_| field(&name, "vertex id is not an integer"))?;
        let label = if cubical {
            let bits = value.as_array().ok_or_else(|| field(&name, "expected a list of 0/1 coordinates"))?;
            if bits.len() != raw.dim {
                return Err(field(&name, format!("expected {} coordinates, got {}", raw.dim, bits.len())));
            }
            let mut l = 0u32;
            for (i, b) in bits.iter().enumerate() {
                match b.as_u64() {
                    Some(0) => {}
                    Some(1) => l |= 1 << i,
                    _ => return Err(field(format!("{name}[{i}]"), "expected 0 or 1")),
                }
            }
            l
        } else {
            let l = value.as_u64().ok_or_else(|| field(&name, "expected a vertex of the simplex"))?;
            if l > raw.dim as u64 {
                return Err(field(&name, format!("label {l} exceeds dimension {}", raw.dim)));
            }
            l as u32
        };
        labels.insert(v, label);
    }
    Ok(if cubical {
        Folding::Cubical(CubeFolding { dim: raw.dim, labels })
    } else {
        Folding::Simplicial(SimplexFolding { dim: raw.dim, labels })
    })
}

pub fn write_cube_folding(f: &CubeFolding) -> String {
    let mut out = format!("{{\"kind\":\"cubical\",\"dim\":{},\"labels\":{{", f.dim);
    for (i, (v, l)) in f.labels.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let bits: Vec<String> = (0..f.dim).map(|c| ((l >> c) & 1).to_string()).collect();
        write!(out, "\"{v}\":[{}]", bits.join(",")).unwrap();
    }
    out.push_str("}}\n");
    out
}

pub fn write_simplex_folding(f: &SimplexFolding) -> String {
    let mut out = format!("{{\"kind\":\"simplicial\",\"dim\":{},\"labels\":{{", f.dim);
    for (i, (v, l)) in f.labels.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "\"{v}\":{l}").unwrap();
    }
    out.push_str("}}\n");
    out
}

pub fn write_folding(f: &Folding) -> String {
    match f {
        Folding::Cubical(c) => write_cube_folding(c),
        Folding::Simplicial(s) => write_simplex_folding(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn cubical_round_trip() {
        let text = "{\"kind\":\"cubical\",\"cells\":[[4,5,1,2],[0,1,3,4]]}";
        let c = parse_complex(text).unwrap();
        let out = write_complex(&c);
        assert_eq!(out, "{\"kind\":\"cubical\",\"cells\":[[0,1,3,4],[1,2,4,5]]}\n");
        assert_eq!(parse_complex(&out).unwrap(), c);
    }

    #[test]
    fn simplicial_round_trip() {
        let text = "{\"kind\": \"simplicial\", \"cells\": [[2, 1], [0, 1, 2], [3]]}";
        let c = parse_complex(text).unwrap();
        assert_eq!(write_complex(&c), "{\"kind\":\"simplicial\",\"cells\":[[0,1,2],[3]]}\n");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_complex("{\"kind\":\"cubical\",\n\"cells\":[[0,1,]]}").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }), "{err}");
    }

    #[test]
    fn field_errors_name_the_field() {
        let err = parse_complex("{\"kind\":\"cubical\",\"cells\":[[0,1],[0,1,2]]}").unwrap_err();
        assert_eq!(err, field("cells[1]", "corner array of length 3 is not a power of two"));
        let err = parse_complex("{\"kind\":\"prism\",\"cells\":[]}").unwrap_err();
        assert!(matches!(err, ParseError::Field { ref field, .. } if field == "kind"));
        let err = parse_folding("{\"kind\":\"cubical\",\"dim\":2,\"labels\":{\"0\":[0,2]}}").unwrap_err();
        assert!(matches!(err, ParseError::Field { ref field, .. } if field == "labels.0[1]"));
    }

    #[test]
    fn folding_round_trip() {
        let fx = fixtures::fixture("grid2").unwrap();
        let f = fx.folding.unwrap();
        let text = write_cube_folding(&f);
        assert_eq!(parse_folding(&text).unwrap(), Folding::Cubical(f));
        let (_, sf) = fixtures::two_triangles();
        let text = write_simplex_folding(&sf);
        assert_eq!(parse_folding(&text).unwrap(), Folding::Simplicial(sf));
    }
}
