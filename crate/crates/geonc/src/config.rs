//! Scenario configuration file: a JSON document mirroring the simulator's
//! `ChannelScenario` plus trial count and output path. The published schema
//! lives in `docs/scenario.schema.json`; validation here enforces the same
//! rules (unknown fields are rejected).

use std::io::Read;

use geonc_core::field::FieldSpec;
use geonc_core::sim::{ChannelScenario, Codec, RelayMode};
use geonc_core::snc::SncParams;
use serde::{Deserialize, Serialize};

use crate::error::AppError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub q: u8,
    /// Per-hop erasure probabilities; length = hop count.
    pub eps: Vec<f64>,
    /// "systematic" or "subspace".
    pub codec: String,
    /// "t_matrix" or "decode_reencode".
    pub relay_mode: String,
    pub trials: usize,
    /// Falls back to NCF_SEED, then 0, when absent.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Output CSV path; stdout when absent.
    #[serde(default)]
    pub output: Option<String>,
}

impl ScenarioConfig {
    pub fn from_reader<R: Read>(reader: R) -> Result<Self, AppError> {
        serde_json::from_reader(reader).map_err(|e| AppError::Config(e.to_string()))
    }

    pub fn codec(&self) -> Result<Codec, AppError> {
        match self.codec.as_str() {
            "systematic" => Ok(Codec::Systematic),
            "subspace" => Ok(Codec::Subspace),
            other => Err(AppError::Config(format!("unknown codec \"{other}\""))),
        }
    }

    pub fn relay_mode(&self) -> Result<RelayMode, AppError> {
        match self.relay_mode.as_str() {
            "t_matrix" => Ok(RelayMode::TMatrix),
            "decode_reencode" => Ok(RelayMode::DecodeReencode),
            other => Err(AppError::Config(format!("unknown relay_mode \"{other}\""))),
        }
    }

    /// Validates everything and builds the scenario. `default_seed` supplies
    /// the seed when the document has none.
    pub fn to_scenario(&self, default_seed: u64) -> Result<ChannelScenario, AppError> {
        if self.q == 0 || self.q > 8 {
            return Err(AppError::Config(format!("q = {} outside 1..=8", self.q)));
        }
        if self.trials == 0 {
            return Err(AppError::Config("trials must be at least 1".into()));
        }
        let params = SncParams::new(self.k, self.n, self.m, FieldSpec::new(self.q))?;
        Ok(ChannelScenario::new(
            params,
            self.eps.clone(),
            self.codec()?,
            self.relay_mode()?,
            self.seed.unwrap_or(default_seed),
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"{
        "k": 20, "n": 24, "m": 16, "q": 8,
        "eps": [0.1, 0.1],
        "codec": "systematic",
        "relay_mode": "decode_reencode",
        "trials": 100,
        "seed": 7
    }"#;

    #[test]
    fn parses_and_builds() {
        let cfg = ScenarioConfig::from_reader(GOOD.as_bytes()).unwrap();
        let scn = cfg.to_scenario(0).unwrap();
        assert_eq!(scn.params.k, 20);
        assert_eq!(scn.hops(), 2);
        assert_eq!(scn.seed, 7);
    }

    #[test]
    fn seed_falls_back_when_absent() {
        let cfg = ScenarioConfig::from_reader(
            GOOD.replace("\"seed\": 7", "\"seed\": null").as_bytes(),
        )
        .unwrap();
        assert_eq!(cfg.to_scenario(42).unwrap().seed, 42);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_values() {
        let extra = GOOD.replace("\"trials\": 100,", "\"trials\": 100, \"bogus\": 1,");
        assert!(matches!(
            ScenarioConfig::from_reader(extra.as_bytes()),
            Err(AppError::Config(_))
        ));
        let bad_codec = GOOD.replace("systematic", "fountain");
        let cfg = ScenarioConfig::from_reader(bad_codec.as_bytes()).unwrap();
        assert!(matches!(cfg.to_scenario(0), Err(AppError::Config(_))));
        let bad_eps = GOOD.replace("[0.1, 0.1]", "[0.1, 1.1]");
        let cfg = ScenarioConfig::from_reader(bad_eps.as_bytes()).unwrap();
        assert!(cfg.to_scenario(0).is_err());
        let tmatrix_three_hops = GOOD
            .replace("decode_reencode", "t_matrix")
            .replace("[0.1, 0.1]", "[0.1, 0.1, 0.1]");
        let cfg = ScenarioConfig::from_reader(tmatrix_three_hops.as_bytes()).unwrap();
        assert!(cfg.to_scenario(0).is_err());
    }
}
