//! JSON input formats shared by the library and the command line.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::category::AcyclicCategory;
use crate::error::{Error, Result};
use crate::strata::CombinatorialCss;

/// An identifier written either as an integer or as a string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonId {
    Int(i64),
    Str(String),
}

impl fmt::Display for JsonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JsonId::Int(i) => write!(f, "{i}"),
            JsonId::Str(s) => write!(f, "{s}"),
        }
    }
}

/// Deserializes `text`, reporting failures with a JSON pointer to the
/// offending value.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let mut pointer = String::new();
        for seg in e.path().iter() {
            use serde_path_to_error::Segment;
            match seg {
                Segment::Seq { index } => pointer.push_str(&format!("/{index}")),
                Segment::Map { key } => pointer.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
                Segment::Enum { variant } => pointer.push_str(&format!("/{variant}")),
                Segment::Unknown => pointer.push_str("/?"),
            }
        }
        Error::Schema { path: if pointer.is_empty() { "/".into() } else { pointer }, message: e.inner().to_string() }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectJson {
    pub id: JsonId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grade: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    pub id: JsonId,
    pub src: JsonId,
    pub dst: JsonId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryJson {
    pub objects: Vec<ObjectJson>,
    #[serde(default)]
    pub morphisms: Vec<MorphismJson>,
    /// Triples `[g, f, g∘f]` of morphism ids.
    #[serde(default)]
    pub compose: Vec<[JsonId; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CssJson {
    pub objects: Vec<ObjectJson>,
    #[serde(default)]
    pub morphisms: Vec<MorphismJson>,
    #[serde(default)]
    pub compose: Vec<[JsonId; 3]>,
    /// Cell dimensions keyed by object id; grades are used when absent.
    #[serde(default)]
    pub dims: BTreeMap<String, i64>,
    /// Closed flags keyed by object id; computed when absent.
    #[serde(default)]
    pub closed: BTreeMap<String, bool>,
}

fn index_ids<'a>(ids: impl Iterator<Item = &'a JsonId>, what: &str, path: &str) -> Result<HashMap<JsonId, usize>> {
    let mut index = HashMap::new();
    for (i, id) in ids.enumerate() {
        if index.insert(id.clone(), i).is_some() {
            return Err(Error::Schema { path: format!("/{path}/{i}/id"), message: format!("duplicate {what} id {id}") });
        }
    }
    Ok(index)
}

impl CategoryJson {
    pub fn from_category(c: &AcyclicCategory) -> Self {
        CategoryJson {
            objects: (0..c.num_objects())
                .map(|x| ObjectJson { id: JsonId::Int(x as i64), grade: c.grade(x), label: c.label(x).map(String::from) })
                .collect(),
            morphisms: c
                .morphisms()
                .iter()
                .enumerate()
                .map(|(f, &(s, t))| MorphismJson {
                    id: JsonId::Int(f as i64),
                    src: JsonId::Int(s as i64),
                    dst: JsonId::Int(t as i64),
                    label: c.morphism_label(f).map(String::from),
                })
                .collect(),
            compose: c
                .composition_table()
                .into_iter()
                .map(|(g, f, gf)| [JsonId::Int(g as i64), JsonId::Int(f as i64), JsonId::Int(gf as i64)])
                .collect(),
        }
    }

    /// Builds the category without validating it, so that the validator can
    /// report every problem.
    pub fn to_category(&self) -> Result<AcyclicCategory> {
        build_category(&self.objects, &self.morphisms, &self.compose, None)
    }
}

fn build_category(
    objects: &[ObjectJson],
    morphisms: &[MorphismJson],
    compose: &[[JsonId; 3]],
    grades: Option<Vec<Option<i64>>>,
) -> Result<AcyclicCategory> {
    let obj = index_ids(objects.iter().map(|o| &o.id), "object", "objects")?;
    let mor = index_ids(morphisms.iter().map(|m| &m.id), "morphism", "morphisms")?;
    let pairs = morphisms
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let look = |id: &JsonId, field: &str| {
                obj.get(id).copied().ok_or_else(|| Error::Schema {
                    path: format!("/morphisms/{i}/{field}"),
                    message: format!("unknown object id {id}"),
                })
            };
            Ok((look(&m.src, "src")?, look(&m.dst, "dst")?))
        })
        .collect::<Result<Vec<_>>>()?;
    let table = compose
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let look = |k: usize| {
                mor.get(&t[k]).copied().ok_or_else(|| Error::Schema {
                    path: format!("/compose/{i}/{k}"),
                    message: format!("unknown morphism id {}", t[k]),
                })
            };
            Ok((look(0)?, look(1)?, look(2)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let grades = grades.unwrap_or_else(|| objects.iter().map(|o| o.grade).collect());
    Ok(AcyclicCategory::with_labels(
        grades,
        objects.iter().map(|o| o.label.clone()).collect(),
        pairs,
        morphisms.iter().map(|m| m.label.clone()).collect(),
        table,
    ))
}

impl CssJson {
    pub fn from_css(x: &CombinatorialCss) -> Self {
        let c = CategoryJson::from_category(x.category());
        CssJson {
            dims: (0..x.num_cells()).map(|i| (i.to_string(), x.dim(i) as i64)).collect(),
            closed: (0..x.num_cells()).map(|i| (i.to_string(), x.is_closed(i))).collect(),
            objects: c.objects,
            morphisms: c.morphisms,
            compose: c.compose,
        }
    }

    /// Builds the space. Supplied closed flags are kept as given so that the
    /// validator can cross-check them; missing flags are computed.
    pub fn to_css(&self) -> Result<CombinatorialCss> {
        let known: HashMap<String, usize> = self.objects.iter().enumerate().map(|(i, o)| (o.id.to_string(), i)).collect();
        for key in self.dims.keys().chain(self.closed.keys()) {
            if !known.contains_key(key) {
                return Err(Error::Schema { path: format!("/dims/{key}"), message: format!("unknown object id {key}") });
            }
        }
        let grades = self
            .objects
            .iter()
            .map(|o| self.dims.get(&o.id.to_string()).copied().or(o.grade))
            .collect();
        let cat = build_category(&self.objects, &self.morphisms, &self.compose, Some(grades))?;
        if self.closed.is_empty() {
            return CombinatorialCss::from_category(cat);
        }
        let computed = CombinatorialCss::from_category(cat.clone()).ok();
        let closed = self
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| {
                let default = computed.as_ref().is_some_and(|c| c.is_closed(i));
                self.closed.get(&o.id.to_string()).copied().unwrap_or(default)
            })
            .collect();
        Ok(CombinatorialCss::with_closed(cat, closed))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::fixtures;

    #[test]
    fn ids_accept_ints_and_strings() {
        let ids: Vec<JsonId> = parse(r#"[1, "a"]"#).unwrap();
        assert_eq!(ids, vec![JsonId::Int(1), JsonId::Str("a".into())]);
    }

    #[test]
    fn errors_carry_pointers() {
        let e = parse::<CategoryJson>(r#"{"objects":[{"id":0,"grade":"x"}]}"#).unwrap_err();
        match e {
            Error::Schema { path, .. } => assert_eq!(path, "/objects/0/grade"),
            e => panic!("{e}"),
        }
        let e = parse::<CategoryJson>(
            r#"{"objects":[{"id":"a"}],"morphisms":[{"id":0,"src":"a","dst":"b"}]}"#,
        )
        .unwrap()
        .to_category()
        .unwrap_err();
        assert!(matches!(e, Error::Schema { ref path, .. } if path == "/morphisms/0/dst"));
    }

    #[test]
    fn css_round_trip() {
        for x in [fixtures::torus().unwrap(), fixtures::punctured_torus().unwrap(), fixtures::simplex(2).unwrap()] {
            let text = serde_json::to_string(&CssJson::from_css(&x)).unwrap();
            let back = parse::<CssJson>(&text).unwrap().to_css().unwrap();
            assert_eq!(back.category(), x.category());
            assert_eq!(back.closed_flags(), x.closed_flags());
        }
    }

    #[test]
    fn supplied_flags_are_cross_checked() {
        let text = r#"{"objects":[{"id":"v","grade":0},{"id":"e","grade":1}],
            "morphisms":[{"id":"l","src":"v","dst":"e"},{"id":"r","src":"v","dst":"e"}],
            "closed":{"e":false}}"#;
        let x = parse::<CssJson>(text).unwrap().to_css().unwrap();
        assert_eq!(x.validate().len(), 1);
    }
}
