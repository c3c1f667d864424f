//! Packet serialization for fixtures and golden files. Little-endian layout,
//! one packet per record:
//!
//! ```text
//! [slot: u16][k: u16][m: u16][q: u8][coeffs: k bytes][payload: m bytes]
//! ```

use std::io::{Read, Write};

use geonc_core::snc::CodedPacket;

use crate::error::AppError;

pub fn write_packet<W: Write>(pkt: &CodedPacket, q: u8, w: &mut W) -> Result<(), AppError> {
    let slot = u16::try_from(pkt.slot).map_err(|_| AppError::Config("slot exceeds u16".into()))?;
    let k = u16::try_from(pkt.coeffs.len())
        .map_err(|_| AppError::Config("coeff count exceeds u16".into()))?;
    let m = u16::try_from(pkt.payload.len())
        .map_err(|_| AppError::Config("payload length exceeds u16".into()))?;
    w.write_all(&slot.to_le_bytes())?;
    w.write_all(&k.to_le_bytes())?;
    w.write_all(&m.to_le_bytes())?;
    w.write_all(&[q])?;
    w.write_all(&pkt.coeffs)?;
    w.write_all(&pkt.payload)?;
    Ok(())
}

/// Reads one packet record; returns the packet and its field exponent q.
pub fn read_packet<R: Read>(r: &mut R) -> Result<(CodedPacket, u8), AppError> {
    let mut head = [0u8; 7];
    r.read_exact(&mut head)?;
    let slot = u16::from_le_bytes([head[0], head[1]]) as usize;
    let k = u16::from_le_bytes([head[2], head[3]]) as usize;
    let m = u16::from_le_bytes([head[4], head[5]]) as usize;
    let q = head[6];
    if q == 0 || q > 8 {
        return Err(AppError::Config(format!("field exponent {q} outside 1..=8")));
    }
    let mut coeffs = vec![0u8; k];
    r.read_exact(&mut coeffs)?;
    let mut payload = vec![0u8; m];
    r.read_exact(&mut payload)?;
    let limit = if q == 8 { u8::MAX } else { (1u8 << q) - 1 };
    if coeffs.iter().chain(payload.iter()).any(|&b| b > limit) {
        return Err(AppError::Config("symbol exceeds field size".into()));
    }
    Ok((CodedPacket { slot, coeffs, payload }, q))
}
