//! Systematic network coding: source encoding with G = [I_k C], relay
//! re-encoding through an n x n matrix T, progressive sink decoding, and the
//! matrix-level linear-operation-channel view Y = S G H with H = D1 T D2.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::field::{Field, FieldElem, FieldSpec};
use crate::matrix::FieldMatrix;
use crate::progressive::{OpsCount, ReductionState};
use crate::rng::{uniform_symbol, Rng};

/// Code parameters for one generation: k data packets, n transmitted slots,
/// m symbols per packet. Coding rate r = k/n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SncParams {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub spec: FieldSpec,
}

impl SncParams {
    pub fn new(k: usize, n: usize, m: usize, spec: FieldSpec) -> Result<Self, Error> {
        if k == 0 || k > n {
            return Err(Error::ConfigError("requires 1 <= k <= n"));
        }
        if m == 0 {
            return Err(Error::ConfigError("requires m >= 1"));
        }
        Ok(SncParams { k, n, m, spec })
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

/// A generation of k data packets: S is m x k, packet s_t = column t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generation {
    s: FieldMatrix,
}

impl Generation {
    pub fn new(s: FieldMatrix, params: &SncParams) -> Result<Self, Error> {
        if s.rows() != params.m || s.cols() != params.k {
            return Err(Error::ShapeError { expected: (params.m, params.k), got: (s.rows(), s.cols()) });
        }
        Ok(Generation { s })
    }

    pub fn random(params: &SncParams, rng: &mut Rng) -> Self {
        Generation { s: FieldMatrix::random(params.m, params.k, params.spec, rng) }
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.s
    }

    /// Data packet s_t.
    pub fn packet(&self, t: usize) -> Vec<FieldElem> {
        self.s.col(t)
    }
}

/// The random block C of G = [I_k C].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    c: FieldMatrix,
}

impl GeneratorMatrix {
    pub fn random(params: &SncParams, rng: &mut Rng) -> Self {
        GeneratorMatrix { c: FieldMatrix::random(params.k, params.n - params.k, params.spec, rng) }
    }

    pub fn from_c(c: FieldMatrix, params: &SncParams) -> Result<Self, Error> {
        if c.rows() != params.k || c.cols() != params.n - params.k {
            return Err(Error::ShapeError {
                expected: (params.k, params.n - params.k),
                got: (c.rows(), c.cols()),
            });
        }
        Ok(GeneratorMatrix { c })
    }

    pub fn c(&self) -> &FieldMatrix {
        &self.c
    }

    /// The full k x n generator G = [I_k C]; full row rank by construction.
    pub fn full(&self, params: &SncParams) -> FieldMatrix {
        let mut g = FieldMatrix::zeros(params.k, params.n, params.spec);
        for i in 0..params.k {
            g.set(i, i, 1);
        }
        for i in 0..params.k {
            for j in 0..params.n - params.k {
                g.set(i, params.k + j, self.c.get(i, j));
            }
        }
        g
    }
}

/// On-wire unit: global coding vector plus payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedPacket {
    pub slot: usize,
    pub coeffs: Vec<FieldElem>,
    pub payload: Vec<FieldElem>,
}

impl CodedPacket {
    /// All-zero packets stand for silence and are treated as erasures.
    pub fn is_null(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Relay re-encoding matrix T (n x n) together with the erasure mask it was
/// built against. Entry (s, t) weights buffered packet s in output slot t.
#[derive(Debug, Clone)]
pub struct ReencodeMatrix {
    pub t: FieldMatrix,
    pub mask: Vec<bool>,
}

pub struct EncodeResult {
    pub packets: Vec<CodedPacket>,
    pub ops: OpsCount,
}

/// Source encoding: k systematic packets followed by n-k random combinations.
pub fn encode(
    gen: &Generation,
    gmat: &GeneratorMatrix,
    params: &SncParams,
    field: &Field,
) -> Result<EncodeResult, Error> {
    let (k, n, m) = (params.k, params.n, params.m);
    if gen.s.cols() != k || gmat.c.rows() != k {
        return Err(Error::ShapeError { expected: (m, k), got: (gen.s.rows(), gen.s.cols()) });
    }
    let mut packets = Vec::with_capacity(n);
    let mut ops = OpsCount::default();
    for t in 0..k {
        let mut coeffs = vec![0; k];
        coeffs[t] = 1;
        packets.push(CodedPacket { slot: t, coeffs, payload: gen.packet(t) });
    }
    for t in k..n {
        let col = gmat.c.col(t - k);
        let mut payload = vec![0; m];
        for (i, out) in payload.iter_mut().enumerate() {
            let mut acc = 0;
            for (j, &cj) in col.iter().enumerate() {
                acc ^= field.mul(gen.s.get(i, j), cj);
            }
            *out = acc;
        }
        // k multiplications and k-1 additions per payload symbol
        ops.mul += (k * m) as u64;
        ops.add += ((k - 1) * m) as u64;
        packets.push(CodedPacket { slot: t, coeffs: col, payload });
    }
    Ok(EncodeResult { packets, ops })
}

/// Builds T from the relay's erasure mask. Received systematic slots are
/// forwarded (column e_t); lost systematic slots and all coded slots carry a
/// random combination of the packets buffered before slot t. An empty buffer
/// yields a zero column (relay silent for that slot).
pub fn build_reencode_matrix(mask: &[bool], params: &SncParams, rng: &mut Rng) -> ReencodeMatrix {
    let (k, n) = (params.k, params.n);
    assert_eq!(mask.len(), n, "mask length must equal n");
    let mut t_mat = FieldMatrix::zeros(n, n, params.spec);
    for t in 0..n {
        if t < k && mask[t] {
            t_mat.set(t, t, 1);
            continue;
        }
        let buffer: Vec<usize> = (0..t).filter(|&s| mask[s]).collect();
        if buffer.is_empty() {
            continue;
        }
        loop {
            let col: Vec<FieldElem> = buffer.iter().map(|_| uniform_symbol(rng, params.spec.q)).collect();
            if col.iter().any(|&w| w != 0) {
                for (&s, &w) in buffer.iter().zip(col.iter()) {
                    t_mat.set(s, t, w);
                }
                break;
            }
        }
    }
    ReencodeMatrix { t: t_mat, mask: mask.to_vec() }
}

/// Applies T to the relay's buffer at packet level. `received[s]` is the
/// packet from slot s, or None if erased on the incoming link.
pub fn reencode(
    received: &[Option<CodedPacket>],
    re: &ReencodeMatrix,
    params: &SncParams,
    field: &Field,
) -> Result<EncodeResult, Error> {
    let (k, n, m) = (params.k, params.n, params.m);
    if received.len() != n || re.t.rows() != n {
        return Err(Error::ShapeError { expected: (n, n), got: (re.t.rows(), re.t.cols()) });
    }
    let mut packets = Vec::with_capacity(n);
    let mut ops = OpsCount::default();
    for t in 0..n {
        let mut coeffs = vec![0; k];
        let mut payload = vec![0; m];
        for s in 0..n {
            let w = re.t.get(s, t);
            if w == 0 {
                continue;
            }
            let Some(pkt) = received[s].as_ref() else {
                return Err(Error::ConsistencyError { slot: s });
            };
            for (c, &pc) in coeffs.iter_mut().zip(pkt.coeffs.iter()) {
                *c ^= field.mul(w, pc);
            }
            for (p, &pp) in payload.iter_mut().zip(pkt.payload.iter()) {
                *p ^= field.mul(w, pp);
            }
            ops.mul += (k + m) as u64;
            ops.add += (k + m) as u64;
        }
        packets.push(CodedPacket { slot: t, coeffs, payload });
    }
    Ok(EncodeResult { packets, ops })
}

/// Fresh progressive decoder state for one generation.
pub fn decoder(params: &SncParams, field: &Field) -> ReductionState {
    ReductionState::new(field.clone(), params.k, params.m)
}

/// Feeds every packet to a progressive decoder; null packets are skipped.
pub fn decode_into(packets: &[CodedPacket], state: &mut ReductionState) {
    for p in packets {
        if p.is_null() {
            continue;
        }
        state.insert(&p.coeffs, &p.payload);
    }
}

/// Full decode: returns S exactly when k innovative packets were received.
pub fn decode(
    packets: &[CodedPacket],
    params: &SncParams,
    field: &Field,
) -> Result<Generation, Error> {
    let mut state = decoder(params, field);
    decode_into(packets, &mut state);
    extract(&state, params)
}

/// Reads the decoded generation out of a complete reduction state.
pub fn extract(state: &ReductionState, params: &SncParams) -> Result<Generation, Error> {
    if !state.complete() {
        return Err(Error::DecodeIncomplete { rank: state.rank(), target: params.k });
    }
    let mut s = FieldMatrix::zeros(params.m, params.k, params.spec);
    for t in 0..params.k {
        let payload = state.decoded_payload(t).expect("complete state");
        for (i, &v) in payload.iter().enumerate() {
            s.set(i, t, v);
        }
    }
    Ok(Generation { s })
}

/// The sink-side transfer matrix G H with H = D1 T D2; rank(GH) = k iff the
/// packet-level decode succeeds for the same masks and T.
pub fn loc_transfer(
    gmat: &GeneratorMatrix,
    d1_mask: &[bool],
    re: &ReencodeMatrix,
    d2_mask: &[bool],
    params: &SncParams,
    field: &Field,
) -> Result<FieldMatrix, Error> {
    let g = gmat.full(params);
    let d1 = FieldMatrix::diag_from_mask(d1_mask, params.spec);
    let d2 = FieldMatrix::diag_from_mask(d2_mask, params.spec);
    let h = d1.mat_mul(&re.t, field)?.mat_mul(&d2, field)?;
    g.mat_mul(&h, field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    fn setup(k: usize, n: usize, m: usize, q: u8) -> (SncParams, Field) {
        let field = Field::new(q);
        (SncParams::new(k, n, m, field.spec()).unwrap(), field)
    }

    #[test]
    fn rate_one_emits_exactly_the_data_packets() {
        let (params, field) = setup(4, 4, 3, 8);
        let mut rng = rng_from_seed(2);
        let gen = Generation::random(&params, &mut rng);
        let gmat = GeneratorMatrix::random(&params, &mut rng);
        let out = encode(&gen, &gmat, &params, &field).unwrap();
        assert_eq!(out.packets.len(), 4);
        assert_eq!(out.ops, OpsCount::default());
        for (t, p) in out.packets.iter().enumerate() {
            let mut e = vec![0; 4];
            e[t] = 1;
            assert_eq!(p.coeffs, e);
            assert_eq!(p.payload, gen.packet(t));
        }
    }

    #[test]
    fn hand_xor_parity_packet() {
        // k=2, m=1, q=1, S=[1,0], C column (1,1): third payload = s1 xor s2 = 1
        let (params, field) = setup(2, 3, 1, 1);
        let s = FieldMatrix::from_vec(1, 2, params.spec, vec![1, 0]);
        let gen = Generation::new(s, &params).unwrap();
        let c = FieldMatrix::from_vec(2, 1, params.spec, vec![1, 1]);
        let gmat = GeneratorMatrix::from_c(c, &params).unwrap();
        let out = encode(&gen, &gmat, &params, &field).unwrap();
        assert_eq!(out.packets[2].payload, vec![1]);
        assert_eq!(out.packets[2].coeffs, vec![1, 1]);
    }

    #[test]
    fn systematic_prefix_reassembles_s() {
        let (params, field) = setup(5, 8, 4, 8);
        let mut rng = rng_from_seed(3);
        let gen = Generation::random(&params, &mut rng);
        let gmat = GeneratorMatrix::random(&params, &mut rng);
        let out = encode(&gen, &gmat, &params, &field).unwrap();
        let decoded = decode(&out.packets[..5], &params, &field).unwrap();
        assert_eq!(decoded.matrix(), gen.matrix());
    }

    #[test]
    fn header_payload_homomorphism() {
        // every emitted packet satisfies payload = S * coeffs
        let (params, field) = setup(4, 7, 3, 8);
        let mut rng = rng_from_seed(4);
        let gen = Generation::random(&params, &mut rng);
        let gmat = GeneratorMatrix::random(&params, &mut rng);
        let out = encode(&gen, &gmat, &params, &field).unwrap();
        let mask = vec![true, false, true, true, true, false, true];
        let re = build_reencode_matrix(&mask, &params, &mut rng);
        let buffered: Vec<Option<CodedPacket>> = out
            .packets
            .iter()
            .zip(mask.iter())
            .map(|(p, &kept)| kept.then(|| p.clone()))
            .collect();
        let relayed = reencode(&buffered, &re, &params, &field).unwrap();
        for p in out.packets.iter().chain(relayed.packets.iter()) {
            for i in 0..params.m {
                let mut acc = 0;
                for j in 0..params.k {
                    acc ^= field.mul(gen.matrix().get(i, j), p.coeffs[j]);
                }
                assert_eq!(acc, p.payload[i], "slot {}", p.slot);
            }
        }
    }

    #[test]
    fn reencode_matrix_rules() {
        let (params, _) = setup(2, 4, 1, 8);
        let mut rng = rng_from_seed(5);
        // all received: first k columns of T are identity columns
        let re = build_reencode_matrix(&[true; 4], &params, &mut rng);
        for t in 0..2 {
            for s in 0..4 {
                assert_eq!(re.t.get(s, t), u8::from(s == t));
            }
        }
        // slot 0 lost, slot 1 received: column 1 = e_1; column 0 is silent
        // (nothing buffered before slot 0)
        let re = build_reencode_matrix(&[false, true, true, true], &params, &mut rng);
        assert!(re.t.col(0).iter().all(|&w| w == 0));
        assert_eq!(re.t.get(1, 1), 1);
        // causality: column t only references slots < t
        for t in 0..4 {
            for s in t..4 {
                if !(s == t && t < 2) {
                    assert_eq!(re.t.get(s, t), 0, "non-causal entry at ({s},{t})");
                }
            }
        }
    }

    #[test]
    fn reencode_identity_roundtrip_and_erasures() {
        let (params, field) = setup(3, 5, 2, 8);
        let mut rng = rng_from_seed(6);
        let gen = Generation::random(&params, &mut rng);
        let gmat = GeneratorMatrix::random(&params, &mut rng);
        let out = encode(&gen, &gmat, &params, &field).unwrap();
        let re = ReencodeMatrix { t: FieldMatrix::identity(5, params.spec), mask: vec![true; 5] };
        let buffered: Vec<Option<CodedPacket>> = out.packets.iter().cloned().map(Some).collect();
        let relayed = reencode(&buffered, &re, &params, &field).unwrap();
        assert_eq!(relayed.packets, out.packets);
        // all erased: T = 0 yields null packets
        let re0 = ReencodeMatrix { t: FieldMatrix::zeros(5, 5, params.spec), mask: vec![false; 5] };
        let empty: Vec<Option<CodedPacket>> = vec![None; 5];
        let silent = reencode(&empty, &re0, &params, &field).unwrap();
        assert!(silent.packets.iter().all(CodedPacket::is_null));
    }

    #[test]
    fn reencode_inconsistent_mask_is_an_error() {
        let (params, field) = setup(2, 3, 1, 8);
        let mut rng = rng_from_seed(7);
        let re = build_reencode_matrix(&[true, true, true], &params, &mut rng);
        let missing: Vec<Option<CodedPacket>> = vec![None; 3];
        assert!(matches!(
            reencode(&missing, &re, &params, &field),
            Err(Error::ConsistencyError { .. })
        ));
    }

    #[test]
    fn decode_incomplete_reports_rank() {
        let (params, field) = setup(3, 5, 2, 8);
        let mut rng = rng_from_seed(8);
        let gen = Generation::random(&params, &mut rng);
        let gmat = GeneratorMatrix::random(&params, &mut rng);
        let out = encode(&gen, &gmat, &params, &field).unwrap();
        match decode(&out.packets[..2], &params, &field) {
            Err(Error::DecodeIncomplete { rank, target }) => {
                assert!(rank <= 2);
                assert_eq!(target, 3);
            }
            other => panic!("expected DecodeIncomplete, got {other:?}"),
        }
    }

    #[test]
    fn loc_transfer_identity_and_zero() {
        let (params, field) = setup(3, 5, 1, 8);
        let mut rng = rng_from_seed(9);
        let gmat = GeneratorMatrix::random(&params, &mut rng);
        let re = ReencodeMatrix { t: FieldMatrix::identity(5, params.spec), mask: vec![true; 5] };
        let all = [true; 5];
        let gh = loc_transfer(&gmat, &all, &re, &all, &params, &field).unwrap();
        assert_eq!(gh, gmat.full(&params));
        assert_eq!(gh.rank(&field), 3);
        let none = [false; 5];
        let gh0 = loc_transfer(&gmat, &all, &re, &none, &params, &field).unwrap();
        assert_eq!(gh0.rank(&field), 0);
    }

    #[test]
    fn encode_ops_match_closed_form() {
        let (params, field) = setup(5, 9, 7, 8);
        let mut rng = rng_from_seed(10);
        let gen = Generation::random(&params, &mut rng);
        let gmat = GeneratorMatrix::random(&params, &mut rng);
        let out = encode(&gen, &gmat, &params, &field).unwrap();
        let (k, n, m) = (5u64, 9u64, 7u64);
        assert_eq!(out.ops.mul, (n - k) * k * m);
        assert_eq!(out.ops.add, (n - k) * (k - 1) * m);
        assert_eq!(out.ops.total(), (n - k) * m * (2 * k - 1));
    }
}
