//! Geo-tagged link-statistics store. Links are directional, keyed by
//! (node_id, peer_id); the store persists as one CSV file with the header
//! `node_id,peer_id,lat,lon,eps_est,samples,updated_at`.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use geonc_core::analytics::PathProfile;
use serde::{Deserialize, Serialize};

use crate::error::AppError;

/// Exponential-moving-average weight for merging erasure estimates.
pub const ALPHA_EMA: f64 = 0.2;

/// One directional link's statistics, geo-tagged at the reporting node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeoRecord {
    pub node_id: String,
    pub peer_id: String,
    pub lat: f64,
    pub lon: f64,
    pub eps_est: f64,
    pub samples: u64,
    /// Epoch seconds.
    pub updated_at: u64,
}

impl GeoRecord {
    fn check(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.eps_est) {
            return Err(format!("eps_est {} outside [0, 1]", self.eps_est));
        }
        if self.samples < 1 {
            return Err("samples must be at least 1".into());
        }
        if self.node_id.is_empty() || self.peer_id.is_empty() {
            return Err("node_id and peer_id must be nonempty".into());
        }
        Ok(())
    }
}

/// Outcome of one CSV ingest pass.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub accepted: usize,
    /// (1-based data row number, reason) per rejected row.
    pub rejected: Vec<(usize, String)>,
}

/// In-memory store; single writer, snapshot reads.
#[derive(Debug, Default, Clone)]
pub struct GeoStore {
    records: BTreeMap<(String, String), GeoRecord>,
}

impl GeoStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, node_id: &str, peer_id: &str) -> Option<&GeoRecord> {
        self.records.get(&(node_id.to_string(), peer_id.to_string()))
    }

    /// Upsert keyed by (node_id, peer_id). A strictly older updated_at is a
    /// no-op; otherwise the erasure estimate blends by EMA and samples
    /// accumulate.
    pub fn upsert(&mut self, rec: GeoRecord) -> Result<(), String> {
        rec.check()?;
        let key = (rec.node_id.clone(), rec.peer_id.clone());
        match self.records.get_mut(&key) {
            None => {
                self.records.insert(key, rec);
            }
            Some(existing) => {
                if rec.updated_at < existing.updated_at {
                    return Ok(()); // stale report: accepted, no effect
                }
                existing.eps_est = (1.0 - ALPHA_EMA) * existing.eps_est + ALPHA_EMA * rec.eps_est;
                existing.samples += rec.samples;
                existing.lat = rec.lat;
                existing.lon = rec.lon;
                existing.updated_at = rec.updated_at;
            }
        }
        Ok(())
    }

    /// Reads CSV rows (header required), upserting each valid one. Malformed
    /// or out-of-range rows are rejected with their row number; the rest of
    /// the stream still loads.
    pub fn ingest<R: Read>(&mut self, reader: R) -> Result<IngestReport, AppError> {
        let mut csv_reader = csv::Reader::from_reader(reader);
        let mut report = IngestReport::default();
        for (i, row) in csv_reader.deserialize::<GeoRecord>().enumerate() {
            let row_no = i + 1;
            match row {
                Err(e) => report.rejected.push((row_no, e.to_string())),
                Ok(rec) => match self.upsert(rec) {
                    Ok(()) => report.accepted += 1,
                    Err(reason) => report.rejected.push((row_no, reason)),
                },
            }
        }
        Ok(report)
    }

    /// Writes the whole store as sorted CSV (deterministic byte output).
    pub fn save<W: Write>(&self, writer: W) -> Result<(), AppError> {
        let mut w = csv::Writer::from_writer(writer);
        for rec in self.records.values() {
            w.serialize(rec).map_err(|e| AppError::Config(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load<R: Read>(reader: R) -> Result<(Self, IngestReport), AppError> {
        let mut store = Self::new();
        let report = store.ingest(reader)?;
        Ok((store, report))
    }

    /// Erasure vector for consecutive pairs of the node sequence, in order.
    pub fn query_path(&self, nodes: &[&str]) -> Result<PathProfile, AppError> {
        if nodes.len() < 2 {
            return Err(AppError::Config("path needs at least two nodes".into()));
        }
        let mut eps = Vec::with_capacity(nodes.len() - 1);
        for pair in nodes.windows(2) {
            let rec = self.get(pair[0], pair[1]).ok_or_else(|| AppError::MissingLink {
                from: pair[0].to_string(),
                to: pair[1].to_string(),
            })?;
            eps.push(rec.eps_est);
        }
        Ok(PathProfile::new(eps)?)
    }
}
