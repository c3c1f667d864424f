//! Memoryless erasure-channel sampling and Monte Carlo simulation of
//! single-hop, two-hop transfer-matrix, and h-hop decode-and-re-encode line
//! networks.
//!
//! Trials draw their randomness from per-trial streams derived with
//! [`derive_trial_seed`], so estimates aggregate identically whether trials
//! run serially or in parallel.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::field::Field;
use crate::progressive::OpsCount;
use crate::rng::{bernoulli, derive_trial_seed, rng_from_seed, Rng};
use crate::snc::{
    build_reencode_matrix, decoder, encode, reencode, CodedPacket, Generation, GeneratorMatrix,
    SncParams,
};
use crate::subspace::{subspace_encode, LiftedGenerator};

/// Which code the scenario carries over the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Codec {
    Systematic,
    Subspace,
}

/// How an intermediate node treats a generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelayMode {
    /// Packet-level realization of the two-hop transfer model Y = S G D1 T D2.
    /// The relay combines blindly; two hops only.
    TMatrix,
    /// Every relay decodes progressively and restores any data packet it
    /// recovered before forwarding; any hop count.
    DecodeReencode,
}

/// One fully specified simulation setup.
#[derive(Debug, Clone)]
pub struct ChannelScenario {
    pub params: SncParams,
    /// Per-hop erasure probabilities; length = hop count >= 1.
    pub eps: Vec<f64>,
    pub codec: Codec,
    pub relay_mode: RelayMode,
    pub seed: u64,
}

impl ChannelScenario {
    pub fn new(
        params: SncParams,
        eps: Vec<f64>,
        codec: Codec,
        relay_mode: RelayMode,
        seed: u64,
    ) -> Result<Self, Error> {
        if eps.is_empty() {
            return Err(Error::ConfigError("scenario needs at least one hop"));
        }
        if eps.iter().any(|e| !(0.0..=1.0).contains(e)) {
            return Err(Error::ConfigError("erasure probabilities must lie in [0, 1]"));
        }
        if relay_mode == RelayMode::TMatrix && eps.len() != 2 {
            return Err(Error::ConfigError("t_matrix relay mode is two-hop only"));
        }
        Ok(ChannelScenario { params, eps, codec, relay_mode, seed })
    }

    pub fn hops(&self) -> usize {
        self.eps.len()
    }
}

/// Result of pushing one generation through every hop.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    /// Sink reached full rank k.
    pub success: bool,
    /// Packets surviving each hop (non-erased, non-null).
    pub received_per_hop: Vec<usize>,
    /// Sink decoder rank after all insertions.
    pub final_rank: usize,
    /// Multiplications and additions actually executed, all nodes.
    pub ops_count: OpsCount,
    /// Fraction of the k data packets the sink could not deliver.
    pub residual: f64,
}

/// Aggregated Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub trials: usize,
    /// Generation decode-failure probability.
    pub mean: f64,
    /// Binomial standard error sqrt(mean (1-mean) / trials).
    pub stderr: f64,
    /// Mean undelivered-data fraction (the simulated residual erasure rate).
    pub residual: f64,
    /// Sample standard error of the residual.
    pub residual_stderr: f64,
}

/// I.i.d. received flags: slot i survives with probability 1 - eps_i.
pub fn sample_erasure_mask(n: usize, eps: f64, rng: &mut Rng) -> Vec<bool> {
    (0..n).map(|_| !bernoulli(rng, eps)).collect()
}

fn source_packets(
    scn: &ChannelScenario,
    field: &Field,
    rng: &mut Rng,
) -> Result<(Vec<CodedPacket>, OpsCount), Error> {
    let p = &scn.params;
    match scn.codec {
        Codec::Systematic => {
            let gen = Generation::random(p, rng);
            let gmat = GeneratorMatrix::random(p, rng);
            let enc = encode(&gen, &gmat, p, field)?;
            Ok((enc.packets, enc.ops))
        }
        Codec::Subspace => {
            // carry the lifted packets in the common (coeffs, payload) shape so
            // relays and the sink reuse the same reduction machinery
            let x = crate::matrix::FieldMatrix::random(p.k, p.m, p.spec, rng);
            let gen = LiftedGenerator::random(p.k, p.n, p.spec, rng)?;
            let packets = subspace_encode(&x, &gen, field)?;
            let ops = OpsCount {
                mul: ((p.n - p.k) * p.k * (p.k + p.m)) as u64,
                add: ((p.n - p.k) * p.k * (p.k + p.m)) as u64,
            };
            Ok((
                packets
                    .into_iter()
                    .enumerate()
                    .map(|(slot, sp)| CodedPacket { slot, coeffs: sp.header, payload: sp.payload })
                    .collect(),
                ops,
            ))
        }
    }
}

/// Pushes one generation through the scenario with the supplied stream.
pub fn simulate_trial(scn: &ChannelScenario, rng: &mut Rng) -> Result<TrialOutcome, Error> {
    let p = &scn.params;
    let field = Field::new(p.spec.q);
    let (mut current, mut ops) = source_packets(scn, &field, rng)?;
    let hops = scn.hops();
    let mut received_per_hop = Vec::with_capacity(hops);
    let mut inbox: Vec<Option<CodedPacket>> = Vec::new();
    for (hop, &eps) in scn.eps.iter().enumerate() {
        let mask = sample_erasure_mask(p.n, eps, rng);
        inbox = current
            .iter()
            .zip(mask.iter())
            .map(|(pkt, &ok)| if ok && !pkt.is_null() { Some(pkt.clone()) } else { None })
            .collect();
        received_per_hop.push(inbox.iter().filter(|x| x.is_some()).count());
        if hop + 1 == hops {
            break;
        }
        let recv_mask: Vec<bool> = inbox.iter().map(|x| x.is_some()).collect();
        if p.n == p.k {
            // uncoded generation: nothing to combine, forward what arrived
            current = inbox
                .iter()
                .enumerate()
                .map(|(slot, x)| {
                    x.clone().unwrap_or(CodedPacket {
                        slot,
                        coeffs: vec![0; p.k],
                        payload: vec![0; p.m],
                    })
                })
                .collect();
            continue;
        }
        let re = build_reencode_matrix(&recv_mask, p, rng);
        let mut out = reencode(&inbox, &re, p, &field)?;
        ops.merge(out.ops);
        if scn.relay_mode == RelayMode::DecodeReencode {
            // the relay decodes what it has; any data packet it recovered but
            // did not receive verbatim goes out restored in its own slot
            let mut state = decoder(p, &field);
            for pkt in inbox.iter().flatten() {
                state.insert(&pkt.coeffs, &pkt.payload);
            }
            ops.merge(state.ops());
            if scn.codec == Codec::Systematic {
                for t in 0..p.k {
                    if !recv_mask[t] && state.recovered(t) {
                        let mut coeffs = vec![0; p.k];
                        coeffs[t] = 1;
                        out.packets[t] = CodedPacket {
                            slot: t,
                            coeffs,
                            payload: state.decoded_payload(t).expect("recovered").to_vec(),
                        };
                    }
                }
            }
        }
        current = out.packets;
    }
    let mut sink = decoder(p, &field);
    for pkt in inbox.iter().flatten() {
        sink.insert(&pkt.coeffs, &pkt.payload);
    }
    ops.merge(sink.ops());
    let final_rank = sink.rank();
    let undelivered = (0..p.k).filter(|&t| !sink.recovered(t)).count();
    Ok(TrialOutcome {
        success: final_rank == p.k,
        received_per_hop,
        final_rank,
        ops_count: ops,
        residual: undelivered as f64 / p.k as f64,
    })
}

/// Runs `trials` independent generations on per-trial derived streams.
pub fn monte_carlo(scn: &ChannelScenario, trials: usize) -> Result<McEstimate, Error> {
    if trials == 0 {
        return Err(Error::ConfigError("trials must be at least 1"));
    }
    let mut failures = 0usize;
    let mut res_sum = 0.0;
    let mut res_sq = 0.0;
    for i in 0..trials {
        let mut rng = rng_from_seed(derive_trial_seed(scn.seed, i as u64));
        let out = simulate_trial(scn, &mut rng)?;
        if !out.success {
            failures += 1;
        }
        res_sum += out.residual;
        res_sq += out.residual * out.residual;
    }
    let t = trials as f64;
    let mean = failures as f64 / t;
    let residual = res_sum / t;
    let var = (res_sq / t - residual * residual).max(0.0);
    Ok(McEstimate {
        trials,
        mean,
        stderr: libm::sqrt(mean * (1.0 - mean) / t),
        residual,
        residual_stderr: libm::sqrt(var / t),
    })
}
