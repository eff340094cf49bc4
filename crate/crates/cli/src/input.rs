//! Loading inputs from files or named fixtures.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use stratakit::arrangement::ArrangementJson;
use stratakit::delta::DeltaJson;
use stratakit::graph_conf::GraphJson;
use stratakit::json::{parse, CssJson};
use stratakit::strata::fixtures;
use stratakit::{Arrangement, CombinatorialCss, DeltaComplex, Graph};

use crate::Failure;

/// Where an input came from, with the digest of its canonical bytes.
#[derive(Clone, Debug)]
pub struct Source {
    pub name: String,
    pub digest: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn read(path: &Path) -> Result<(String, Source), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let source = Source { name: format!("file:{}", path.display()), digest: sha256_hex(text.as_bytes()) };
    Ok((text, source))
}

fn fixture_source<T: serde::Serialize>(name: &str, json: &T) -> Source {
    let text = serde_json::to_string(json).expect("fixtures serialize");
    Source { name: format!("fixture:{name}"), digest: sha256_hex(text.as_bytes()) }
}

fn pick<'a>(file: &'a Option<PathBuf>, fixture: &'a Option<String>) -> Result<Either<'a>, Failure> {
    match (file, fixture) {
        (Some(f), None) => Ok(Either::File(f)),
        (None, Some(n)) => Ok(Either::Fixture(n)),
        (Some(_), Some(_)) => Err(Failure::Usage("give either --file or --fixture, not both".into())),
        (None, None) => Err(Failure::Usage("one of --file or --fixture is required".into())),
    }
}

enum Either<'a> {
    File(&'a Path),
    Fixture(&'a str),
}

/// A stratified space given as CSS JSON or as a named fixture. Graph fixtures
/// are accepted as well and give the graph as a one-dimensional space.
pub fn space(file: &Option<PathBuf>, fixture: &Option<String>) -> Result<(CssJson, Source), Failure> {
    match pick(file, fixture)? {
        Either::File(path) => {
            let (text, source) = read(path)?;
            Ok((parse::<CssJson>(&text)?, source))
        }
        Either::Fixture(name) => {
            let x = match fixtures::by_name(name) {
                Ok(x) => x,
                Err(_) => match Graph::by_name(name) {
                    Ok(g) => g.to_css()?,
                    Err(_) => {
                        return Err(Failure::Usage(format!(
                            "unknown fixture {name:?}; known: {}, edge, loop, y, kN",
                            fixtures::NAMES.join(", ")
                        )))
                    }
                },
            };
            let json = CssJson::from_css(&x);
            let source = fixture_source(name, &json);
            Ok((json, source))
        }
    }
}

/// Builds a space that must pass validation.
pub fn valid_space(file: &Option<PathBuf>, fixture: &Option<String>) -> Result<(CombinatorialCss, Source), Failure> {
    let (json, source) = space(file, fixture)?;
    let x = json.to_css()?;
    let problems = x.validate();
    if !problems.is_empty() {
        return Err(Failure::Invalid(problems.iter().map(|p| p.to_string()).collect()));
    }
    Ok((x, source))
}

/// Either a Δ-complex or a stratified space, told apart by their top-level
/// keys. A space is replaced by its barycentric subdivision.
pub fn complex(file: &Option<PathBuf>, fixture: &Option<String>) -> Result<(DeltaComplex, Source), Failure> {
    if let Either::File(path) = pick(file, fixture)? {
        let (text, source) = read(path)?;
        let value: serde_json::Value = parse(&text)?;
        if value.get("cells").is_some() {
            let json: DeltaJson = parse(&text)?;
            let k = DeltaComplex::from_json(&json)?;
            return Ok((k, source));
        }
    }
    let (x, source) = valid_space(file, fixture)?;
    Ok((x.sd()?, source))
}

pub fn arrangement(file: &Option<PathBuf>, fixture: &Option<String>) -> Result<(Arrangement, Source), Failure> {
    match pick(file, fixture)? {
        Either::File(path) => {
            let (text, source) = read(path)?;
            Ok((Arrangement::from_json(&parse::<ArrangementJson>(&text)?)?, source))
        }
        Either::Fixture(name) => {
            let a = Arrangement::by_name(name).map_err(|_| {
                Failure::Usage(format!("unknown arrangement {name:?}; known: point-line, generic-lines, braid-N, empty-N"))
            })?;
            let source = fixture_source(name, &a.to_json());
            Ok((a, source))
        }
    }
}

pub fn graph(file: &Option<PathBuf>, fixture: &Option<String>) -> Result<(Graph, Source), Failure> {
    match pick(file, fixture)? {
        Either::File(path) => {
            let (text, source) = read(path)?;
            Ok((Graph::from_json(&parse::<GraphJson>(&text)?)?, source))
        }
        Either::Fixture(name) => {
            let g = Graph::by_name(name)
                .map_err(|_| Failure::Usage(format!("unknown graph {name:?}; known: edge, loop, y, kN")))?;
            let source = fixture_source(name, &g.to_json());
            Ok((g, source))
        }
    }
}
