use serde::{Deserialize, Serialize};

use super::{sets_from_lists, LabeledStream, ProblemInstance};
use crate::error::{Error, Result};

/// On-disk instance document (JSON).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub labels: usize,
    pub sets: Vec<Vec<usize>>,
    pub instances: Vec<String>,
    pub hypotheses: Vec<Vec<usize>>,
}

impl InstanceDocument {
    pub fn into_instance(self) -> Result<ProblemInstance> {
        if self.labels == 0 {
            return Err(Error::parse("labels", "label space must be nonempty"));
        }
        if self.sets.is_empty() {
            return Err(Error::parse("sets", "set system must be nonempty"));
        }
        let masks = sets_from_lists(self.labels, &self.sets)?;
        ProblemInstance::new(self.labels, masks, self.instances, self.hypotheses)
    }
}

/// Parses and validates an instance document; set order is canonicalized.
pub fn load_instance(text: &str) -> Result<ProblemInstance> {
    let doc: InstanceDocument =
        serde_json::from_str(text).map_err(|e| Error::parse("document", e.to_string()))?;
    doc.into_instance()
}

/// Parses a stream document `[[x, s], ...]` and checks its indices against `instance`.
pub fn load_stream(text: &str, instance: &ProblemInstance) -> Result<LabeledStream> {
    let pairs: Vec<[usize; 2]> =
        serde_json::from_str(text).map_err(|e| Error::parse("stream", e.to_string()))?;
    let stream = LabeledStream::new(pairs.into_iter().map(|[x, s]| (x, s)).collect());
    instance.check_stream(&stream)?;
    Ok(stream)
}
