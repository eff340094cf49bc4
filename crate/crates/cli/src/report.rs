//! The JSON run report printed by every command.

use serde::Serialize;
use serde_json::{Map, Value};
use stratakit::{DeltaComplex, HomologyResult};

use crate::input::{sha256_hex, Source};

#[derive(Clone, Debug, Serialize)]
pub struct InputInfo {
    pub source: String,
    pub digest: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyInfo {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<Value>>,
    pub summary: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

/// Fields are serialized in declaration order and maps are sorted, so
/// identical inputs give identical bytes. Timing is opt-in and never enters
/// the digest.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub operation: String,
    pub input: InputInfo,
    pub parameters: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_vector: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler_characteristic: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homology: Option<HomologyInfo>,
    pub details: Map<String, Value>,
    pub diagnostics: Vec<String>,
    pub digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl RunReport {
    pub fn new(operation: &str, source: &Source) -> Self {
        RunReport {
            operation: operation.to_string(),
            input: InputInfo { source: source.name.clone(), digest: source.digest.clone() },
            parameters: Map::new(),
            f_vector: None,
            euler_characteristic: None,
            homology: None,
            details: Map::new(),
            diagnostics: Vec::new(),
            digest: String::new(),
            timing: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.details.insert(key.to_string(), serde_json::to_value(value).expect("details serialize"));
        self
    }

    /// Records the f-vector, χ and homology of a complex.
    pub fn complex(&mut self, k: &DeltaComplex, h: &HomologyResult) -> &mut Self {
        self.f_vector = Some(k.f_vector());
        self.euler_characteristic = Some(k.euler_characteristic());
        let json = h.to_json();
        self.homology = Some(HomologyInfo { betti: json.betti, torsion: json.torsion, summary: h.to_string() });
        if k.euler_characteristic() != h.euler_characteristic() {
            self.diagnostics.push(format!(
                "euler characteristic {} of the f-vector differs from the alternating Betti sum {}",
                k.euler_characteristic(),
                h.euler_characteristic()
            ));
        }
        self
    }

    /// Fills in the digest over everything except timing.
    pub fn seal(&mut self) {
        self.digest.clear();
        let timing = self.timing.take();
        let bytes = serde_json::to_vec(self).expect("report serializes");
        self.digest = sha256_hex(&bytes);
        self.timing = timing;
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}
