//! Unit names and quantities. Every number in a scenario file is either a bare value in the
//! unit declared for its dimension or a string `"<value> <unit>"`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::datasets::CONSTANTS;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Mass,
    Time,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dimension::Length => "length",
            Dimension::Mass => "mass",
            Dimension::Time => "time",
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitTable {
    length: BTreeMap<String, f64>,
    mass: BTreeMap<String, f64>,
    time: BTreeMap<String, f64>,
}

impl UnitTable {
    /// The bundled table; parsing it is checked by the test suite.
    pub fn bundled() -> &'static UnitTable {
        static TABLE: OnceLock<UnitTable> = OnceLock::new();
        TABLE.get_or_init(|| toml::from_str(CONSTANTS).expect("bundled constants table parses"))
    }

    fn of(&self, dim: Dimension) -> &BTreeMap<String, f64> {
        match dim {
            Dimension::Length => &self.length,
            Dimension::Mass => &self.mass,
            Dimension::Time => &self.time,
        }
    }

    pub fn names(&self, dim: Dimension) -> impl Iterator<Item = &str> {
        self.of(dim).keys().map(String::as_str)
    }

    /// SI factor of `name`, which must belong to `dim`.
    pub fn factor(&self, dim: Dimension, name: &str) -> Result<f64, String> {
        if let Some(&f) = self.of(dim).get(name) {
            return Ok(f);
        }
        for other in [Dimension::Length, Dimension::Mass, Dimension::Time] {
            if other != dim && self.of(other).contains_key(name) {
                return Err(format!("unit `{name}` is a {other}, expected a {dim}"));
            }
        }
        let known: Vec<&str> = self.names(dim).collect();
        Err(format!("unknown {dim} unit `{name}` (known: {})", known.join(", ")))
    }
}

/// A unit declaration: a name from the table or an explicit SI factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum UnitSpec {
    Factor(f64),
    Name(String),
}

impl UnitSpec {
    pub fn resolve(&self, dim: Dimension) -> Result<f64, String> {
        match self {
            UnitSpec::Factor(f) if *f > 0.0 && f.is_finite() => Ok(*f),
            UnitSpec::Factor(f) => Err(format!("{dim} factor must be positive, got {f}")),
            UnitSpec::Name(n) => UnitTable::bundled().factor(dim, n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitDecl {
    #[serde(default = "metre")]
    pub length: UnitSpec,
    #[serde(default = "kilogram")]
    pub mass: UnitSpec,
    #[serde(default = "second")]
    pub time: UnitSpec,
}

fn metre() -> UnitSpec {
    UnitSpec::Name("m".into())
}
fn kilogram() -> UnitSpec {
    UnitSpec::Name("kg".into())
}
fn second() -> UnitSpec {
    UnitSpec::Name("s".into())
}

impl Default for UnitDecl {
    fn default() -> Self {
        Self {
            length: metre(),
            mass: kilogram(),
            time: second(),
        }
    }
}

/// SI factors of the declared units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Units {
    pub length: f64,
    pub mass: f64,
    pub time: f64,
}

impl Units {
    pub const SI: Units = Units {
        length: 1.0,
        mass: 1.0,
        time: 1.0,
    };

    pub fn from_decl(decl: &UnitDecl) -> Result<Self, String> {
        Ok(Self {
            length: decl
                .length
                .resolve(Dimension::Length)
                .map_err(|e| format!("units.length: {e}"))?,
            mass: decl
                .mass
                .resolve(Dimension::Mass)
                .map_err(|e| format!("units.mass: {e}"))?,
            time: decl
                .time
                .resolve(Dimension::Time)
                .map_err(|e| format!("units.time: {e}"))?,
        })
    }

    pub fn factor(&self, dim: Dimension) -> f64 {
        match dim {
            Dimension::Length => self.length,
            Dimension::Mass => self.mass,
            Dimension::Time => self.time,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Value(f64),
    Text(String),
}

impl From<f64> for Quantity {
    fn from(v: f64) -> Self {
        Quantity::Value(v)
    }
}

impl Quantity {
    /// Value in SI; bare numbers use the declared unit of `dim`.
    pub fn to_si(&self, dim: Dimension, units: &Units) -> Result<f64, String> {
        match self {
            Quantity::Value(v) => Ok(v * units.factor(dim)),
            Quantity::Text(s) => parse_quantity(s, dim, units),
        }
    }
}

/// Parses `"2.7 AU"`, or a bare number in the declared unit.
pub fn parse_quantity(text: &str, dim: Dimension, units: &Units) -> Result<f64, String> {
    let mut parts = text.split_whitespace();
    let number = parts.next().ok_or_else(|| "empty quantity".to_string())?;
    let value: f64 = number
        .parse()
        .map_err(|_| format!("`{text}`: `{number}` is not a number"))?;
    match (parts.next(), parts.next()) {
        (None, _) => Ok(value * units.factor(dim)),
        (Some(unit), None) => Ok(value * UnitTable::bundled().factor(dim, unit)?),
        _ => Err(format!("`{text}`: expected `<value> <unit>`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table_resolves() {
        let t = UnitTable::bundled();
        assert_eq!(t.factor(Dimension::Length, "AU").unwrap(), 1.495978707e11);
        assert_eq!(t.factor(Dimension::Length, "km").unwrap(), 1e3);
        let err = t.factor(Dimension::Length, "kg").unwrap_err();
        assert!(err.contains("is a mass"), "{err}");
        assert!(t
            .factor(Dimension::Mass, "stone")
            .unwrap_err()
            .contains("unknown mass unit"));
    }

    #[test]
    fn quantities() {
        let units = Units {
            length: 1e3,
            ..Units::SI
        };
        assert_eq!(Quantity::Value(2.0).to_si(Dimension::Length, &units).unwrap(), 2e3);
        assert_eq!(
            Quantity::Text("2.7 AU".into())
                .to_si(Dimension::Length, &units)
                .unwrap(),
            2.7 * 1.495978707e11
        );
        assert_eq!(
            Quantity::Text("5".into()).to_si(Dimension::Length, &units).unwrap(),
            5e3
        );
        assert!(Quantity::Text("2.7 AU extra".into())
            .to_si(Dimension::Length, &units)
            .is_err());
        assert!(Quantity::Text("1 M_sun".into())
            .to_si(Dimension::Length, &units)
            .is_err());
        assert!(Quantity::Text("x km".into()).to_si(Dimension::Length, &units).is_err());
    }

    #[test]
    fn unit_declarations() {
        let decl: UnitDecl = toml::from_str("length = \"km\"\nmass = 2.0").unwrap();
        let u = Units::from_decl(&decl).unwrap();
        assert_eq!((u.length, u.mass, u.time), (1e3, 2.0, 1.0));
        let bad: UnitDecl = toml::from_str("length = \"M_sun\"").unwrap();
        assert!(Units::from_decl(&bad).unwrap_err().starts_with("units.length"));
        assert!(toml::from_str::<UnitDecl>("lenght = \"km\"").is_err());
    }
}
