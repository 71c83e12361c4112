//! JSON file formats. Every rational is a `"p/q"` string (integers may also be
//! written as JSON numbers on input).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use subadj_core::families::{FamilyComponent, FamilyModel, SectionRef};
use subadj_core::surfaces::SurfaceModel;
use subadj_core::trees::{StableTree, VertexId};
use subadj_core::weights::WeightVector;
use subadj_core::{rational, Rational};

use crate::CliError;

/// Exact rational in `"p/q"` form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational::format(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as \"p/q\" or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
                rational::parse(v).map(Q).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
                Ok(Q(rational::int(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
                i64::try_from(v).map(|v| Q(rational::int(v))).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

impl From<Rational> for Q {
    fn from(r: Rational) -> Self {
        Q(r)
    }
}

impl From<&Rational> for Q {
    fn from(r: &Rational) -> Self {
        Q(r.clone())
    }
}

pub fn qs(xs: &[Rational]) -> Vec<Q> {
    xs.iter().map(Q::from).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionSpec {
    pub name: String,
    /// Class `C₀ + a·F`.
    pub a: Q,
    pub d: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowUpSpec {
    pub at: String,
    pub through: Vec<(String, u64)>,
    #[serde(default = "zero_q")]
    pub d_new: Q,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

fn zero_q() -> Q {
    Q(rational::zero())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub genus: u32,
    pub e: i64,
    #[serde(default)]
    pub points: Vec<String>,
    #[serde(default)]
    pub sections: Vec<SectionSpec>,
    #[serde(default)]
    pub blowups: Vec<BlowUpSpec>,
    /// Log coefficients of the original fiber components, keyed `F@<point>`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub fiber_d: BTreeMap<String, Q>,
}

impl SurfaceSpec {
    pub fn build(&self) -> Result<SurfaceModel, CliError> {
        let mut m = SurfaceModel::new_ruled(self.genus, self.e, &self.points)?;
        for s in &self.sections {
            m = m.add_section(&s.name, s.a.0.clone(), s.d.0.clone())?;
        }
        for (name, d) in &self.fiber_d {
            m = m.with_coefficient(name, d.0.clone())?;
        }
        for b in &self.blowups {
            m = m.blow_up(&b.at, &b.through, b.d_new.0.clone(), b.name.as_deref())?;
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionRefSpec {
    pub component: String,
    pub section: String,
}

impl SectionRefSpec {
    fn to_ref(&self) -> SectionRef {
        SectionRef::new(&self.component, &self.section)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkSpec {
    pub label: u32,
    pub component: String,
    pub section: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub name: String,
    /// Inline surface model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceSpec>,
    /// Surface model file, relative to the family file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub weights: Vec<Q>,
    pub components: Vec<ComponentSpec>,
    #[serde(default)]
    pub gluings: Vec<(SectionRefSpec, SectionRefSpec)>,
    pub marks: Vec<MarkSpec>,
}

impl FamilySpec {
    /// `load` resolves component `path` entries to surface JSON text.
    pub fn build(&self, load: &dyn Fn(&str) -> Result<String, CliError>) -> Result<FamilyModel, CliError> {
        let weights = WeightVector::new(self.weights.iter().map(|q| q.0.clone()).collect())?;
        let mut components = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let spec = match (&c.surface, &c.path) {
                (Some(s), None) => s.clone(),
                (None, Some(p)) => serde_json::from_str::<SurfaceSpec>(&load(p)?)
                    .map_err(|e| CliError::Json(format!("{p}: {e}")))?,
                _ => {
                    return Err(CliError::Schema(format!(
                        "component `{}` needs exactly one of `surface` or `path`",
                        c.name
                    )))
                }
            };
            components.push(FamilyComponent { name: c.name.clone(), surface: spec.build()? });
        }
        let gluings = self.gluings.iter().map(|(a, b)| (a.to_ref(), b.to_ref())).collect();
        let mut marks = BTreeMap::new();
        for m in &self.marks {
            if marks.insert(m.label, SectionRef::new(&m.component, &m.section)).is_some() {
                return Err(CliError::Schema(format!("label {} marked twice", m.label)));
            }
        }
        Ok(FamilyModel::new(components, gluings, marks, weights)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub id: VertexId,
    #[serde(default)]
    pub tails: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeSpec {
    pub n: u32,
    pub vertices: Vec<VertexSpec>,
    #[serde(default)]
    pub edges: Vec<(VertexId, VertexId)>,
}

impl TreeSpec {
    pub fn build(&self) -> StableTree {
        let parts: Vec<(VertexId, &[u32])> = self.vertices.iter().map(|v| (v.id, v.tails.as_slice())).collect();
        StableTree::from_parts(self.n, &parts, &self.edges)
    }
}

/// Either kind of model file, told apart by the presence of `components`.
#[derive(Clone, Debug)]
pub enum ModelFile {
    Surface(SurfaceSpec),
    Family(FamilySpec),
}

pub fn parse_model(text: &str, origin: &str) -> Result<ModelFile, CliError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Json(format!("{origin}: {e}")))?;
    let is_family = value.get("components").is_some();
    let err = |e: serde_json::Error| CliError::Json(format!("{origin}: {e}"));
    if is_family {
        Ok(ModelFile::Family(serde_json::from_value(value).map_err(err)?))
    } else {
        Ok(ModelFile::Surface(serde_json::from_value(value).map_err(err)?))
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Resolver for component paths relative to `base`.
pub fn relative_loader(base: &Path) -> impl Fn(&str) -> Result<String, CliError> + '_ {
    move |p: &str| {
        let full: PathBuf = base.join(p);
        read_file(&full)
    }
}

/// Comma-separated rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',').map(|x| rational::parse(x.trim()).map_err(CliError::from)).collect()
}

/// Comma-separated labels.
pub fn parse_label_list(s: &str) -> Result<Vec<u32>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| CliError::Usage(format!("bad label `{x}`"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use subadj_core::rational::ratio;

    #[test]
    fn rationals_as_strings_or_integers() {
        let q: Vec<Q> = serde_json::from_str(r#"["3/6", -2, "-4/8"]"#).unwrap();
        assert_eq!(q, vec![Q(ratio(1, 2)), Q(ratio(-2, 1)), Q(ratio(-1, 2))]);
        assert_eq!(serde_json::to_string(&q).unwrap(), r#"["1/2","-2","-1/2"]"#);
        assert!(serde_json::from_str::<Q>(r#""1/0""#).is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{ "genus": 0, "e": 0, "colour": "red" }"#;
        assert!(matches!(parse_model(text, "t"), Err(CliError::Json(_))));
    }

    #[test]
    fn component_needs_one_source() {
        let text = r#"{ "weights": [1, 1], "components": [{ "name": "X" }], "marks": [] }"#;
        let ModelFile::Family(f) = parse_model(text, "t").unwrap() else { panic!("not a family") };
        let err = f.build(&|_| Err(CliError::Io(String::new()))).unwrap_err();
        assert!(matches!(err, CliError::Schema(_)));
    }

    #[test]
    fn lists() {
        assert_eq!(parse_rational_list("1/2, 3").unwrap(), vec![ratio(1, 2), ratio(3, 1)]);
        assert_eq!(parse_label_list("1,2 ,4").unwrap(), vec![1, 2, 4]);
        assert!(matches!(parse_label_list("1,a"), Err(CliError::Usage(_))));
    }
}
