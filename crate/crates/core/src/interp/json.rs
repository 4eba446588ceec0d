use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Interpretation;
use crate::error::{Error, Result};
use crate::logic::parse;
use crate::structure::{Signature, SignatureJson};

/// File format; formulas are written in the formula grammar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpretationJson {
    pub source: SignatureJson,
    pub target: SignatureJson,
    pub p: usize,
    pub nu: String,
    pub eta: String,
    pub rho: BTreeMap<String, String>,
    #[serde(default)]
    pub basic: bool,
}

impl From<&Interpretation> for InterpretationJson {
    fn from(i: &Interpretation) -> Self {
        InterpretationJson {
            source: (&i.source).into(),
            target: (&i.target).into(),
            p: i.p,
            nu: i.nu.to_string(),
            eta: i.eta.to_string(),
            rho: i.rho.iter().map(|(k, f)| (k.clone(), f.to_string())).collect(),
            basic: i.basic,
        }
    }
}

impl TryFrom<&InterpretationJson> for Interpretation {
    type Error = Error;

    fn try_from(json: &InterpretationJson) -> Result<Self> {
        let rho = json
            .rho
            .iter()
            .map(|(k, f)| Ok((k.clone(), parse(f)?)))
            .collect::<Result<_>>()?;
        Interpretation::new(
            Signature::try_from(&json.source)?,
            Signature::try_from(&json.target)?,
            json.p,
            parse(&json.nu)?,
            parse(&json.eta)?,
            rho,
            json.basic,
        )
    }
}

impl Interpretation {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: InterpretationJson = serde_json::from_str(text)?;
        Interpretation::try_from(&json)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&InterpretationJson::from(self)).expect("serializable")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Interpretation::from_json_str(&std::fs::read_to_string(path)?)
    }
}
