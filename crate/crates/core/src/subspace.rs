//! Non-coherent subspace coding: lifted random-matrix encoding, progressive
//! subspace decoding, and the rank-metric Singleton bound.
//!
//! The transmitted stack is [Gs | Gs X] with Gs = [I_k ; H]; any invertible
//! in-network mixing of the rows leaves the decoded X invariant because the
//! reduced row-echelon representative is canonical.

use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::error::Error;
use crate::field::{Field, FieldElem, FieldSpec};
use crate::matrix::FieldMatrix;
use crate::progressive::ReductionState;
use crate::rng::Rng;

/// The random lower block H of the lifted generator Gs = [I_k ; H].
///
/// H is (n-k) x k so that Gs X with X in F^{k x m} is well-formed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedGenerator {
    h: FieldMatrix,
    k: usize,
    n: usize,
}

impl LiftedGenerator {
    pub fn random(k: usize, n: usize, spec: FieldSpec, rng: &mut Rng) -> Result<Self, Error> {
        if k == 0 || k > n {
            return Err(Error::ConfigError("requires 1 <= k <= n"));
        }
        Ok(LiftedGenerator { h: FieldMatrix::random(n - k, k, spec, rng), k, n })
    }

    pub fn from_h(h: FieldMatrix, k: usize, n: usize) -> Result<Self, Error> {
        if h.rows() != n - k || h.cols() != k {
            return Err(Error::ShapeError { expected: (n - k, k), got: (h.rows(), h.cols()) });
        }
        Ok(LiftedGenerator { h, k, n })
    }

    /// The full n x k lifted generator; rank k via the identity block.
    pub fn gs(&self) -> FieldMatrix {
        let spec = self.h.spec();
        let mut gs = FieldMatrix::zeros(self.n, self.k, spec);
        for i in 0..self.k {
            gs.set(i, i, 1);
        }
        for i in 0..self.n - self.k {
            for j in 0..self.k {
                gs.set(self.k + i, j, self.h.get(i, j));
            }
        }
        gs
    }
}

/// One row of the transmitted stack [Gs | Gs X].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspacePacket {
    pub header: Vec<FieldElem>,
    pub payload: Vec<FieldElem>,
}

/// Encodes X (k x m) into n packets; the first k reproduce X verbatim.
pub fn subspace_encode(
    x: &FieldMatrix,
    gen: &LiftedGenerator,
    field: &Field,
) -> Result<Vec<SubspacePacket>, Error> {
    if x.rows() != gen.k {
        return Err(Error::ShapeError { expected: (gen.k, x.cols()), got: (x.rows(), x.cols()) });
    }
    let gs = gen.gs();
    let gsx = gs.mat_mul(x, field)?;
    Ok((0..gen.n)
        .map(|i| SubspacePacket { header: gs.row(i).to_vec(), payload: gsx.row(i).to_vec() })
        .collect())
}

/// Progressive subspace decode. Packets may be arbitrary F_q-linear
/// combinations of the transmitted rows; success iff the header block has
/// rank k, in which case the payload block of the canonical reduced form is
/// exactly X.
pub fn subspace_decode(
    packets: &[SubspacePacket],
    k: usize,
    m: usize,
    field: &Field,
) -> Result<FieldMatrix, Error> {
    let mut state = ReductionState::new(field.clone(), k, m);
    for p in packets {
        if p.header.iter().all(|&h| h == 0) {
            continue;
        }
        state.insert(&p.header, &p.payload);
    }
    if !state.complete() {
        return Err(Error::DecodeIncomplete { rank: state.rank(), target: k });
    }
    let mut x = FieldMatrix::zeros(k, m, field.spec());
    for t in 0..k {
        for (j, &v) in state.decoded_payload(t).expect("complete").iter().enumerate() {
            x.set(t, j, v);
        }
    }
    Ok(x)
}

/// Singleton bound for rank-metric codes in F^{n x m} over a field of size
/// `field_size`: |C| <= q^{max(n,m) (min(n,m) - d + 1)}. Exponents overflow
/// machine words quickly, hence the arbitrary-precision result.
pub fn singleton_bound(field_size: u64, n: u32, m: u32, d: u32) -> Result<BigUint, Error> {
    if field_size < 2 {
        return Err(Error::DomainError("field size must be at least 2"));
    }
    if d < 1 || d > n.min(m) {
        return Err(Error::DomainError("requires 1 <= d <= min(n, m)"));
    }
    let exponent = n.max(m) * (n.min(m) - d + 1);
    Ok(BigUint::from(field_size).pow(exponent))
}
