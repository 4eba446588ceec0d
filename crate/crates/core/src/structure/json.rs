//! JSON file format for signatures and structures.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Signature, Structure};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignatureJson {
    pub symbols: Vec<(String, usize)>,
    #[serde(default)]
    pub marks: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureJson {
    pub signature: SignatureJson,
    pub domain: usize,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<Vec<usize>>>,
    /// Only present on rooted balls.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<usize>,
}

impl From<&Signature> for SignatureJson {
    fn from(sig: &Signature) -> Self {
        SignatureJson {
            symbols: sig
                .base()
                .iter()
                .map(|s| (s.name.clone(), s.arity))
                .collect(),
            marks: sig.marks(),
        }
    }
}

impl TryFrom<&SignatureJson> for Signature {
    type Error = Error;

    fn try_from(json: &SignatureJson) -> Result<Self> {
        Signature::new(json.symbols.iter().cloned(), json.marks)
    }
}

impl From<&Structure> for StructureJson {
    fn from(s: &Structure) -> Self {
        let relations = (0..s.signature().len())
            .map(|i| (s.signature().name(i), s.relation(i).tuples().to_vec()))
            .collect();
        StructureJson {
            signature: s.signature().into(),
            domain: s.domain_size(),
            relations,
            root: None,
        }
    }
}

impl TryFrom<&StructureJson> for Structure {
    type Error = Error;

    fn try_from(json: &StructureJson) -> Result<Self> {
        let sig = Signature::try_from(&json.signature)?;
        let mut b = Structure::builder(sig.clone(), json.domain);
        for (name, tuples) in &json.relations {
            let index = sig.index_of(name).ok_or_else(|| {
                Error::InvalidStructure(format!("relation `{name}` is not in the signature"))
            })?;
            let mut seen = BTreeSet::new();
            for t in tuples {
                if !seen.insert(t) {
                    return Err(Error::InvalidStructure(format!(
                        "duplicate tuple {t:?} in `{name}`"
                    )));
                }
                b.add_at(index, t)?;
            }
        }
        if let Some(root) = json.root {
            if root >= json.domain {
                return Err(Error::InvalidStructure(format!(
                    "root {root} outside domain of size {}",
                    json.domain
                )));
            }
        }
        Ok(b.build())
    }
}

impl Structure {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: StructureJson = serde_json::from_str(text)?;
        Structure::try_from(&json)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&StructureJson::from(self)).expect("serializable")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{"signature": {"symbols": [["E",2]], "marks": 2}, "domain": 4,
        "relations": {"E": [[0,1],[1,0]], "M1": [[0]], "M2": []}}"#;

    #[test]
    fn parses_documented_example() {
        let s = Structure::from_json_str(SAMPLE).unwrap();
        assert_eq!(s.domain_size(), 4);
        assert_eq!(s.signature().marks(), 2);
        assert_eq!(s.tuples_of("E").unwrap().len(), 2);
        assert_eq!(s.mark_set(1).unwrap().iter().collect::<Vec<_>>(), vec![0]);
        let back = Structure::from_json_str(&s.to_json_string()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn unlisted_relations_default_to_empty() {
        let s = Structure::from_json_str(
            r#"{"signature": {"symbols": [["E",2],["U",1]]}, "domain": 2}"#,
        )
        .unwrap();
        assert_eq!(s.tuple_count(), 0);
    }

    #[test]
    fn validation_errors_name_the_offender() {
        let bad_entry = r#"{"signature": {"symbols": [["E",2]]}, "domain": 2,
            "relations": {"E": [[0,5]]}}"#;
        let msg = Structure::from_json_str(bad_entry).unwrap_err().to_string();
        assert!(msg.contains("[0, 5]") && msg.contains("`E`"), "{msg}");

        let bad_width = r#"{"signature": {"symbols": [["E",2]]}, "domain": 2,
            "relations": {"E": [[0]]}}"#;
        let msg = Structure::from_json_str(bad_width).unwrap_err().to_string();
        assert!(msg.contains("width"), "{msg}");

        let unknown = r#"{"signature": {"symbols": [["E",2]]}, "domain": 2,
            "relations": {"F": []}}"#;
        let msg = Structure::from_json_str(unknown).unwrap_err().to_string();
        assert!(msg.contains("`F`"), "{msg}");

        let dup = r#"{"signature": {"symbols": [["E",2]]}, "domain": 2,
            "relations": {"E": [[0,1],[0,1]]}}"#;
        let msg = Structure::from_json_str(dup).unwrap_err().to_string();
        assert!(msg.contains("duplicate"), "{msg}");
    }
}
