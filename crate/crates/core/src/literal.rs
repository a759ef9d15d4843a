//! JSON documents read and written by the command line tool: semigroup
//! literals and curve definitions.
//!
//! ```json
//! {"numerical_generators": [3, 7, 10, 11]}
//! {"branches": 2, "conductor": [2, 6], "small_elements": [[0, 0], [1, 3]]}
//! {"kind": "monomial", "exponents": [4, 7, 10, 12, 13]}
//! {"kind": "parametrized", "generators": ["t^4", "t^5+t^7"], "singular_fibers": [[0]]}
//! ```
//!
//! Curve documents may carry `"sheaves"`, lists of generators of candidate
//! sheaves `O⟨1, f, ...⟩`. Emission is canonical: [`Document::to_canonical`]
//! of a parsed document reproduces the same bytes when parsed again.

use serde::{Deserialize, Serialize};

use crate::curve::{CurveSpec, SheafModel};
use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::poly::parse;
use crate::semigroup::{validate, GoodSemigroup};
use crate::value::ValueVector;

/// A fiber coordinate: a JSON integer or a string such as `"1/2"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinate {
    Integer(i64),
    Text(String),
}

impl Coordinate {
    pub fn to_q(&self) -> Result<Q> {
        match self {
            Coordinate::Integer(n) => Ok(Q::from_integer((*n).into())),
            Coordinate::Text(s) => {
                let q = parse(s)?
                    .as_poly()
                    .and_then(|p| p.as_constant())
                    .ok_or_else(|| Error::InvalidInput(format!("{s} is not a rational number")))?;
                Ok(q)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SemigroupLiteral {
    Numerical {
        numerical_generators: Vec<u64>,
    },
    Values {
        branches: usize,
        conductor: Vec<i64>,
        small_elements: Vec<Vec<i64>>,
    },
}

impl SemigroupLiteral {
    /// Builds and validates the semigroup.
    pub fn build(&self) -> Result<GoodSemigroup> {
        match self {
            SemigroupLiteral::Numerical {
                numerical_generators,
            } => GoodSemigroup::from_numerical_generators(numerical_generators),
            SemigroupLiteral::Values {
                branches,
                conductor,
                small_elements,
            } => {
                let vec = |c: &[i64]| -> Result<ValueVector> {
                    if c.len() != *branches {
                        return Err(Error::InvalidInput(format!(
                            "vector {c:?} does not have {branches} coordinates"
                        )));
                    }
                    Ok(ValueVector::new(c.to_vec()))
                };
                if *branches == 0 || *branches > crate::value::MAX_BRANCHES {
                    return Err(Error::UnsupportedBranchCount(*branches));
                }
                let elems = small_elements
                    .iter()
                    .map(|e| vec(e))
                    .collect::<Result<Vec<_>>>()?;
                let s = GoodSemigroup::from_small_elements(vec(conductor)?, elems)?;
                if let Some(fail) = validate(&s).first_failure() {
                    return Err(Error::SemigroupAxiomFailure(format!(
                        "{} fails at {:?}",
                        fail.axiom, fail.witness
                    )));
                }
                Ok(s)
            }
        }
    }

    /// The value form of a semigroup, as emitted by the corpus command.
    pub fn from_semigroup(s: &GoodSemigroup) -> Self {
        SemigroupLiteral::Values {
            branches: s.branches(),
            conductor: s.conductor().coords().to_vec(),
            small_elements: s
                .small_elements()
                .iter()
                .map(|a| a.coords().to_vec())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveDefinition {
    Monomial {
        exponents: Vec<u64>,
    },
    Parametrized {
        generators: Vec<String>,
        singular_fibers: Vec<Vec<Coordinate>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub curve: CurveDefinition,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sheaves: Vec<Vec<String>>,
}

impl CurveDocument {
    pub fn build(&self) -> Result<CurveSpec> {
        match &self.curve {
            CurveDefinition::Monomial { exponents } => CurveSpec::monomial(exponents),
            CurveDefinition::Parametrized {
                generators,
                singular_fibers,
            } => {
                let fibers = singular_fibers
                    .iter()
                    .map(|f| f.iter().map(Coordinate::to_q).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let gens: Vec<&str> = generators.iter().map(String::as_str).collect();
                CurveSpec::parse_parametrized(&gens, fibers)
            }
        }
    }

    pub fn sheaf_models(&self, curve: &CurveSpec) -> Result<Vec<SheafModel>> {
        self.sheaves
            .iter()
            .map(|gens| {
                let g: Vec<&str> = gens.iter().map(String::as_str).collect();
                SheafModel::parse(curve.clone(), &g)
            })
            .collect()
    }
}

/// Anything the tool accepts as input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Document {
    Curve(CurveDocument),
    Semigroup(SemigroupLiteral),
}

/// What a document describes once built.
#[derive(Clone, Debug)]
pub enum Object {
    Curve(CurveSpec, Vec<SheafModel>),
    Semigroup(GoodSemigroup),
}

impl Document {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| json_error(text, &e))
    }

    pub fn to_canonical(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }

    pub fn build(&self) -> Result<Object> {
        match self {
            Document::Curve(c) => {
                let curve = c.build()?;
                let sheaves = c.sheaf_models(&curve)?;
                Ok(Object::Curve(curve, sheaves))
            }
            Document::Semigroup(s) => Ok(Object::Semigroup(s.build()?)),
        }
    }
}

impl Object {
    /// The numerical semigroup of a monomial curve, or the semigroup itself.
    pub fn semigroup(&self) -> Option<GoodSemigroup> {
        match self {
            Object::Curve(c, _) => c.numerical_semigroup(),
            Object::Semigroup(s) => Some(s.clone()),
        }
    }

    /// The curve, with numerical semigroups read as monomial curves.
    pub fn curve(&self) -> Result<CurveSpec> {
        match self {
            Object::Curve(c, _) => Ok(c.clone()),
            Object::Semigroup(s) => {
                let gens = s.minimal_generators()?;
                CurveSpec::monomial(&gens)
            }
        }
    }

    pub fn sheaves(&self) -> &[SheafModel] {
        match self {
            Object::Curve(_, s) => s,
            Object::Semigroup(_) => &[],
        }
    }
}

/// Byte offset of a JSON error.
fn json_error(text: &str, e: &serde_json::Error) -> Error {
    let pos = text
        .split_inclusive('\n')
        .take(e.line().saturating_sub(1))
        .map(str::len)
        .sum::<usize>()
        + e.column().saturating_sub(1);
    Error::Parse {
        pos,
        msg: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for text in [
            r#"{"numerical_generators":[3,7,10,11]}"#,
            r#"{"branches":2,"conductor":[1,1],"small_elements":[[0,0],[1,1]]}"#,
            r#"{"kind":"monomial","exponents":[4,7,10,12,13]}"#,
            r#"{"name":"x","kind":"parametrized","generators":["t^2","t^3"],"singular_fibers":[[0,"1/2"]],"sheaves":[["t"]]}"#,
        ] {
            let d = Document::parse(text).unwrap();
            assert_eq!(d.to_canonical(), text);
        }
    }

    #[test]
    fn builds_and_reports_positions() {
        let d = Document::parse(r#"{"numerical_generators":[3,7,10,11]}"#).unwrap();
        assert_eq!(d.build().unwrap().semigroup().unwrap().delta().unwrap(), 5);
        let s = GoodSemigroup::from_numerical_generators(&[3, 5, 7]).unwrap();
        let lit = SemigroupLiteral::from_semigroup(&s);
        assert_eq!(lit.build().unwrap().values(), s.values());
        match Document::parse("{\n  \"kind\": ]") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 12),
            other => panic!("{other:?}"),
        }
        let bad = r#"{"branches":1,"conductor":[3],"small_elements":[[0],[1],[3]]}"#;
        assert!(Document::parse(bad).unwrap().build().is_err());
    }
}
