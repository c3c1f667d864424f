//! Progressive Gauss-Jordan reduction: packets are eliminated against the
//! stored pivots as they arrive, and the stored rows are kept in reduced
//! row-echelon form at all times, so one pass per packet costs O(k(k+m)).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::field::{Field, FieldElem};

/// Multiplication/addition counts actually executed, for complexity checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpsCount {
    pub mul: u64,
    pub add: u64,
}

impl OpsCount {
    pub fn total(&self) -> u64 {
        self.mul + self.add
    }

    pub fn merge(&mut self, other: OpsCount) {
        self.mul += other.mul;
        self.add += other.add;
    }
}

/// Incremental decoder state over rows of the form `[header | payload]`,
/// pivoting on the `k` header columns.
#[derive(Debug, Clone)]
pub struct ReductionState {
    field: Field,
    target_rank: usize,
    payload_len: usize,
    /// pivot header column -> stored reduced row of width k + m
    pivots: BTreeMap<usize, Vec<FieldElem>>,
    ops: OpsCount,
}

impl ReductionState {
    pub fn new(field: Field, target_rank: usize, payload_len: usize) -> Self {
        ReductionState { field, target_rank, payload_len, pivots: BTreeMap::new(), ops: OpsCount::default() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn complete(&self) -> bool {
        self.rank() == self.target_rank
    }

    pub fn ops(&self) -> OpsCount {
        self.ops
    }

    /// Inserts a packet; returns whether it increased the rank.
    ///
    /// Inserting into a complete state is a no-op returning `false`.
    pub fn insert(&mut self, header: &[FieldElem], payload: &[FieldElem]) -> bool {
        assert_eq!(header.len(), self.target_rank, "header length must equal k");
        assert_eq!(payload.len(), self.payload_len, "payload length fixed per generation");
        if self.complete() {
            return false;
        }
        let k = self.target_rank;
        let width = k + self.payload_len;
        let mut row: Vec<FieldElem> = header.iter().chain(payload.iter()).copied().collect();

        // forward elimination against stored pivots
        for (&col, prow) in self.pivots.iter() {
            let f = row[col];
            if f == 0 {
                continue;
            }
            for c in 0..width {
                row[c] ^= self.field.mul(f, prow[c]);
            }
            self.ops.mul += width as u64;
            self.ops.add += width as u64;
        }

        let Some(lead) = (0..k).find(|&c| row[c] != 0) else {
            return false;
        };

        // normalize the new pivot row
        let inv = self.field.inv(row[lead]).expect("lead nonzero");
        if inv != 1 {
            for c in 0..width {
                row[c] = self.field.mul(row[c], inv);
            }
            self.ops.mul += width as u64;
        }

        // back-substitute into previously stored rows
        for (_, prow) in self.pivots.iter_mut() {
            let f = prow[lead];
            if f == 0 {
                continue;
            }
            for c in 0..width {
                prow[c] ^= self.field.mul(f, row[c]);
            }
            self.ops.mul += width as u64;
            self.ops.add += width as u64;
        }

        self.pivots.insert(lead, row);
        true
    }

    /// True when data packet `t` is individually pinned down: its unit header
    /// row is present in the reduced stack.
    pub fn recovered(&self, t: usize) -> bool {
        match self.pivots.get(&t) {
            Some(row) => (0..self.target_rank).all(|c| c == t || row[c] == 0),
            None => false,
        }
    }

    /// Payload of data packet `t` if recovered.
    pub fn decoded_payload(&self, t: usize) -> Option<&[FieldElem]> {
        if self.recovered(t) {
            self.pivots.get(&t).map(|row| &row[self.target_rank..])
        } else {
            None
        }
    }

    /// All k payloads in packet order, available once complete.
    pub fn decoded(&self) -> Option<Vec<&[FieldElem]>> {
        if !self.complete() {
            return None;
        }
        Some((0..self.target_rank).map(|t| &self.pivots[&t][self.target_rank..]).collect())
    }

    /// The stored reduced rows as (header, payload) pairs, in pivot order.
    /// This is the relay's full knowledge when decoding is incomplete.
    pub fn rows(&self) -> impl Iterator<Item = (&[FieldElem], &[FieldElem])> {
        self.pivots.values().map(move |row| {
            let (h, p) = row.split_at(self.target_rank);
            (h, p)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::FieldMatrix;
    use crate::rng::rng_from_seed;
    use alloc::vec;

    #[test]
    fn unit_vector_into_empty_state() {
        let mut st = ReductionState::new(Field::new(8), 3, 2);
        assert!(st.insert(&[1, 0, 0], &[7, 9]));
        assert_eq!(st.rank(), 1);
        assert!(st.recovered(0));
        assert_eq!(st.decoded_payload(0).unwrap(), &[7, 9]);
    }

    #[test]
    fn duplicate_row_not_innovative() {
        let mut st = ReductionState::new(Field::new(8), 2, 1);
        assert!(st.insert(&[3, 5], &[1]));
        assert!(!st.insert(&[3, 5], &[1]));
        assert_eq!(st.rank(), 1);
    }

    #[test]
    fn two_by_two_hand_elimination_over_gf2() {
        // (1,1 | p1) then (0,1 | p2): s0 = p1 + p2, s1 = p2
        let mut st = ReductionState::new(Field::new(1), 2, 1);
        assert!(st.insert(&[1, 1], &[1]));
        assert!(st.insert(&[0, 1], &[1]));
        assert!(st.complete());
        assert_eq!(st.decoded_payload(0).unwrap(), &[0]);
        assert_eq!(st.decoded_payload(1).unwrap(), &[1]);
    }

    #[test]
    fn insert_after_complete_is_idempotent() {
        let mut st = ReductionState::new(Field::new(1), 1, 0);
        assert!(st.insert(&[1], &[]));
        assert!(st.complete());
        assert!(!st.insert(&[1], &[]));
        assert_eq!(st.rank(), 1);
    }

    #[test]
    fn rank_matches_matrix_rank_at_every_step() {
        let field = Field::new(4);
        let mut rng = rng_from_seed(21);
        for _ in 0..30 {
            let k = 6;
            let mut st = ReductionState::new(field.clone(), k, 0);
            let mut headers: Vec<u8> = vec![];
            let mut rows = 0;
            for _ in 0..10 {
                let h = FieldMatrix::random(1, k, field.spec(), &mut rng);
                let innovative = st.insert(h.row(0), &[]);
                headers.extend_from_slice(h.row(0));
                rows += 1;
                let stack = FieldMatrix::from_vec(rows, k, field.spec(), headers.clone());
                assert_eq!(st.rank(), stack.rank(&field));
                if innovative {
                    assert!(st.rank() > 0);
                }
            }
        }
    }
}
