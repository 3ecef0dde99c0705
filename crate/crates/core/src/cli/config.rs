//! Campaign configuration files (`schema: "mutsched-campaign/1"`).

use serde::Deserialize;

use crate::analysis::{Baseline, KillReason};
use crate::model::{Semantics, Tick};
use crate::mutation::DeltaConfig;

pub const CAMPAIGN_SCHEMA: &str = "mutsched-campaign/1";

/// Either a single comma-separated string or a list of names.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum NameList {
    Joined(String),
    List(Vec<String>),
}

impl NameList {
    pub fn joined(&self) -> String {
        match self {
            NameList::Joined(s) => s.clone(),
            NameList::List(v) => v.join(","),
        }
    }
}

/// Every field is optional; command-line flags take precedence.
#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CampaignFile {
    pub schema: String,
    #[serde(default)]
    pub operators: Option<NameList>,
    #[serde(default)]
    pub deltas: Option<DeltaConfig>,
    #[serde(default)]
    pub oracles: Option<Vec<KillReason>>,
    #[serde(default)]
    pub baseline: Option<Baseline>,
    #[serde(default)]
    pub semantics: Option<Semantics>,
    #[serde(default)]
    pub horizon: Option<Tick>,
    #[serde(default)]
    pub threads: Option<usize>,
}

pub fn parse_campaign(text: &str) -> Result<CampaignFile, String> {
    let file: CampaignFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if file.schema != CAMPAIGN_SCHEMA {
        return Err(format!(
            "unsupported schema {:?} (expected {CAMPAIGN_SCHEMA:?})",
            file.schema
        ));
    }
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_document() {
        let text = r#"{
            "schema": "mutsched-campaign/1",
            "operators": ["period", "mATPREC"],
            "deltas": {"period": [1], "priority": [2, 4]},
            "oracles": ["DeadlineMiss"],
            "baseline": "zero-time",
            "semantics": "time-aware",
            "horizon": 40,
            "threads": 2
        }"#;
        let f = parse_campaign(text).unwrap();
        assert_eq!(f.operators.unwrap().joined(), "period,mATPREC");
        let d = f.deltas.unwrap();
        assert_eq!(d.period, vec![1]);
        assert_eq!(d.offset, vec![1, 2, 3]);
        assert_eq!(f.oracles, Some(vec![KillReason::DeadlineMiss]));
        assert_eq!(f.baseline, Some(Baseline::ZeroTime));
        assert_eq!(f.horizon, Some(Tick(40)));
    }

    #[test]
    fn schema_is_checked() {
        assert!(parse_campaign(r#"{"schema": "mutsched/1"}"#).is_err());
        assert!(parse_campaign(r#"{"schema": "mutsched-campaign/1", "bogus": 1}"#).is_err());
        let f = parse_campaign(r#"{"schema": "mutsched-campaign/1", "operators": "all"}"#).unwrap();
        assert_eq!(f.operators.unwrap().joined(), "all");
    }
}
