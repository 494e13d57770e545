//! Point files: a JSON array of `{"X": [[..]], "Y": [[..]], "Z": [[..]]}`.
//!
//! Entries are integers, reduced into the prime field, or strings naming an
//! element (`"x+1"` in `F₉`). Matrices of size zero may be omitted.

use serde_json::Value;
use thiserror::Error;

use crate::field::FieldOps;
use crate::interp::Structure;
use crate::lie::TripleSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointError {
    #[error("point file is not JSON: {0}")]
    Json(String),
    #[error("point file must be a JSON array of objects")]
    NotArray,
    #[error("point {index}: {message}")]
    Bad { index: usize, message: String },
    #[error("`{0}` is not an element of the structure")]
    Element(String),
}

/// One matrix entry.
pub fn element(s: &Structure, v: &Value) -> Result<u32, PointError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|k| s.from_i64(k))
            .ok_or_else(|| PointError::Element(n.to_string())),
        Value::String(t) => match t.trim().parse::<i64>() {
            Ok(k) => Ok(s.from_i64(k)),
            Err(_) => s.parse_elem(t).ok_or_else(|| PointError::Element(t.clone())),
        },
        other => Err(PointError::Element(other.to_string())),
    }
}

fn matrix(s: &Structure, v: Option<&Value>, n: usize, key: &str, out: &mut Vec<u32>) -> Result<(), String> {
    let rows = match v {
        None if n == 0 => return Ok(()),
        None => return Err(format!("missing {key}")),
        Some(Value::Array(rows)) => rows,
        Some(_) => return Err(format!("{key} is not an array of rows")),
    };
    if rows.len() != n {
        return Err(format!("{key} has {} rows, expected {n}", rows.len()));
    }
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| format!("{key} row {i} is not an array"))?;
        if row.len() != n {
            return Err(format!("{key} row {i} has {} entries, expected {n}", row.len()));
        }
        for e in row {
            out.push(element(s, e).map_err(|e| format!("{key}: {e}"))?);
        }
    }
    Ok(())
}

/// Parses a point file into flat points in the triple's variable order:
/// `X`, `Y`, `Z`, each row by row.
pub fn parse_points(s: &Structure, t: &TripleSpec, text: &str) -> Result<Vec<Vec<u32>>, PointError> {
    let v: Value = serde_json::from_str(text).map_err(|e| PointError::Json(e.to_string()))?;
    let items = v.as_array().ok_or(PointError::NotArray)?;
    let (g, h1, h2) = t.families();
    items
        .iter()
        .enumerate()
        .map(|(index, item)| {
            let bad = |message: String| PointError::Bad { index, message };
            let obj = item.as_object().ok_or_else(|| bad("not an object".into()))?;
            if let Some(k) = obj.keys().find(|k| !["X", "Y", "Z"].contains(&k.as_str())) {
                return Err(bad(format!("unexpected key {k}")));
            }
            let mut p = Vec::new();
            for (key, fam) in [("X", g), ("Y", h1), ("Z", h2)] {
                matrix(s, obj.get(key), fam.size(), key, &mut p).map_err(bad)?;
            }
            Ok(p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd_orth() -> TripleSpec {
        "odd-orth:r=1,a=1,b=0".parse().unwrap()
    }

    #[test]
    fn flat_order_and_reduction() {
        let s: Structure = "fq:3".parse().unwrap();
        // so(3) ⊕ so(3) ⊕ so(1)
        let text = r#"[{"X": [[0,1,2],[3,4,5],[6,7,-1]], "Y": [[0,0,0],[0,0,0],[0,0,1]], "Z": [[0]]}]"#;
        let pts = parse_points(&s, &odd_orth(), text).unwrap();
        assert_eq!(pts[0][..9], [0, 1, 2, 0, 1, 2, 0, 1, 2]);
        assert_eq!(pts[0].len(), 9 + 9 + 1);
        assert_eq!(pts[0][17], 1);
    }

    #[test]
    fn malformed_points() {
        let s: Structure = "fq:3".parse().unwrap();
        let t = odd_orth();
        assert!(matches!(parse_points(&s, &t, "{}"), Err(PointError::NotArray)));
        assert!(matches!(parse_points(&s, &t, "[1"), Err(PointError::Json(_))));
        let short = r#"[{"X": [[0,0],[0,0]], "Y": [[0,0,0],[0,0,0],[0,0,0]], "Z": [[0]]}]"#;
        assert!(matches!(parse_points(&s, &t, short), Err(PointError::Bad { index: 0, .. })));
        let extra = r#"[{"W": 1}]"#;
        assert!(matches!(parse_points(&s, &t, extra), Err(PointError::Bad { .. })));
    }

    #[test]
    fn named_elements() {
        let s: Structure = "inv:3".parse().unwrap();
        let all: Vec<u32> = s.elements().collect();
        for a in all {
            let name = s.format_elem(a);
            assert_eq!(element(&s, &Value::String(name)).unwrap(), a);
        }
        assert!(element(&s, &Value::String("x^5".into())).is_err());
    }
}
