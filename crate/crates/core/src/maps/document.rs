//! The `.map.json` document format.

use serde::{Deserialize, Serialize};

use super::{MapError, RationalMap};
use crate::algebra::mpoly::default_var_names;
use crate::algebra::parse::parse_hompoly;
use crate::algebra::{AlgebraError, IntMatrix};
use crate::monomial::MonomialMap;

pub const MAP_EXTENSION: &str = ".map.json";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    #[default]
    Polynomial,
    Monomial,
}

/// Serialized map. Polynomial maps list `coords`; monomial maps give the
/// exponent matrix `A` instead.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDocument {
    #[serde(default, skip_serializing_if = "is_polynomial")]
    pub kind: MapKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<String>>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<i64>>>,
}

fn is_polynomial(k: &MapKind) -> bool {
    *k == MapKind::Polynomial
}

impl MapDocument {
    pub fn from_json(text: &str) -> Result<Self, MapError> {
        serde_json::from_str(text).map_err(|e| MapError::Document(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn polynomial(name: Option<&str>, vars: &[&str], coords: &[&str]) -> Self {
        MapDocument {
            kind: MapKind::Polynomial,
            name: name.map(str::to_string),
            dim: Some(vars.len().saturating_sub(1)),
            vars: Some(vars.iter().map(|s| s.to_string()).collect()),
            coords: Some(coords.iter().map(|s| s.to_string()).collect()),
            a: None,
        }
    }

    pub fn monomial(name: Option<&str>, a: Vec<Vec<i64>>) -> Self {
        MapDocument {
            kind: MapKind::Monomial,
            name: name.map(str::to_string),
            dim: Some(a.len()),
            a: Some(a),
            ..Default::default()
        }
    }

    pub fn from_map(f: &RationalMap) -> Self {
        MapDocument {
            kind: MapKind::Polynomial,
            name: f.name().map(str::to_string),
            dim: Some(f.dim()),
            vars: Some(f.vars().to_vec()),
            coords: Some(f.coord_strings()),
            a: None,
        }
    }

    /// Exponent matrix of a monomial document.
    pub fn matrix(&self) -> Result<Option<IntMatrix>, MapError> {
        match (&self.kind, &self.a) {
            (MapKind::Monomial, Some(rows)) => Ok(Some(IntMatrix::from_i64_rows(rows)?)),
            (MapKind::Monomial, None) => Err(MapError::Document("monomial map without A".into())),
            _ => Ok(None),
        }
    }

    /// Parse, check and normalize the map.
    pub fn to_map(&self) -> Result<RationalMap, MapError> {
        let map = match self.kind {
            MapKind::Monomial => {
                let a = self.matrix()?.expect("monomial");
                if let Some(d) = self.dim {
                    if d != a.dim() {
                        return Err(MapError::Document(format!(
                            "dim {d} does not match {}x{} matrix",
                            a.dim(),
                            a.dim()
                        )));
                    }
                }
                let m = MonomialMap::new(a).map_err(|e| MapError::Document(e.to_string()))?;
                let h = m.homogenize()?;
                match &self.vars {
                    Some(v) if v.len() == h.dim() + 1 => h.with_vars(v.clone()),
                    Some(_) => return Err(MapError::Document("wrong number of vars".into())),
                    None => h,
                }
            }
            MapKind::Polynomial => self.polynomial_map()?,
        };
        Ok(match &self.name {
            Some(n) => map.with_name(n.clone()),
            None => map,
        })
    }

    fn polynomial_map(&self) -> Result<RationalMap, MapError> {
        let coords = self
            .coords
            .as_ref()
            .ok_or_else(|| MapError::Document("missing coords".into()))?;
        let vars = match &self.vars {
            Some(v) => v.clone(),
            None => default_var_names(coords.len()),
        };
        if let Some(d) = self.dim {
            if d + 1 != vars.len() {
                return Err(MapError::WrongArity {
                    expected: d + 1,
                    found: vars.len(),
                });
            }
        }
        if coords.len() != vars.len() {
            return Err(MapError::WrongArity {
                expected: vars.len(),
                found: coords.len(),
            });
        }
        let names: Vec<&str> = vars.iter().map(String::as_str).collect();
        let polys = coords
            .iter()
            .enumerate()
            .map(|(i, text)| {
                parse_hompoly(text, &names).map_err(|e| match e {
                    AlgebraError::NotHomogeneous => MapError::NotHomogeneous { coordinate: i },
                    other => MapError::Coordinate {
                        coordinate: i,
                        source: other,
                    },
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RationalMap::new(polys)?.with_vars(vars))
    }
}

/// Parse a `.map.json` document straight to a map.
pub fn parse_map(text: &str) -> Result<RationalMap, MapError> {
    MapDocument::from_json(text)?.to_map()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_linear_growth_map() {
        let text = r#"{"dim": 2, "vars": ["x","y","z"], "coords": ["x*y + x*z", "y*z + z^2", "z^2"], "name": "f11"}"#;
        let f = parse_map(text).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.name(), Some("f11"));
        assert_eq!(f.to_string(), "[x*y + x*z, y*z + z^2, z^2]");
    }

    #[test]
    fn normalizes_on_parse() {
        let doc = MapDocument::polynomial(None, &["x", "y", "z"], &["2*x", "2*y", "2*z"]);
        let f = doc.to_map().unwrap();
        assert_eq!(f.degree(), 1);
        assert_eq!(f.to_string(), "[x, y, z]");
        let sq = MapDocument::polynomial(None, &["x", "y", "z"], &["x^2", "y^2", "z^2"]);
        assert_eq!(sq.to_map().unwrap().degree(), 2);
    }

    #[test]
    fn reports_the_failing_coordinate() {
        let doc = MapDocument::polynomial(None, &["x", "y", "z"], &["x^2", "y^2 + z", "z^2"]);
        assert_eq!(doc.to_map(), Err(MapError::NotHomogeneous { coordinate: 1 }));
        let doc = MapDocument::polynomial(None, &["x", "y", "z"], &["x^2", "y^2", "z^^2"]);
        assert!(matches!(
            doc.to_map(),
            Err(MapError::Coordinate {
                coordinate: 2,
                source: AlgebraError::Syntax { position: 2, .. }
            })
        ));
        let doc = MapDocument::polynomial(None, &["x", "y", "z"], &["0", "0", "0"]);
        assert_eq!(doc.to_map(), Err(MapError::AllCoordinatesZero));
        assert!(matches!(
            MapDocument::from_json("{not json"),
            Err(MapError::Document(_))
        ));
    }

    #[test]
    fn monomial_documents() {
        let text = r#"{"kind": "monomial", "A": [[2,0],[0,2]]}"#;
        let f = parse_map(text).unwrap();
        assert_eq!(f.to_string(), "[x^2, y^2, z^2]");
        assert!(parse_map(r#"{"kind": "monomial", "A": [[1,1],[1,1]]}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let doc = MapDocument::polynomial(Some("sq"), &["x", "y", "z"], &["x^2", "y^2", "z^2"]);
        let back = MapDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        let f = doc.to_map().unwrap();
        assert_eq!(MapDocument::from_map(&f), doc);
    }
}
