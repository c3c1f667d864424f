//! GF(2^q) arithmetic for 1 <= q <= 8, multiplication via exp/log tables.
//!
//! Each exponent has one fixed primitive polynomial so that symbol streams are
//! bit-exact across implementations:
//!
//! | q | polynomial            | mask  |
//! |---|-----------------------|-------|
//! | 1 | x + 1                 | 0x3   |
//! | 2 | x^2 + x + 1           | 0x7   |
//! | 3 | x^3 + x + 1           | 0xB   |
//! | 4 | x^4 + x + 1           | 0x13  |
//! | 5 | x^5 + x^2 + 1         | 0x25  |
//! | 6 | x^6 + x + 1           | 0x43  |
//! | 7 | x^7 + x^3 + 1         | 0x89  |
//! | 8 | x^8 + x^4 + x^3 + x^2 + 1 | 0x11D |

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

/// Field elements are `u8` values in `[0, 2^q)`; addition is XOR.
pub type FieldElem = u8;

const PRIMITIVE_POLY: [u16; 9] = [0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D];

/// Identifies a field GF(2^q) by exponent and primitive polynomial mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub q: u8,
    pub poly: u16,
}

impl FieldSpec {
    /// The fixed spec for exponent `q`, 1 <= q <= 8.
    pub fn new(q: u8) -> Self {
        assert!((1..=8).contains(&q), "field exponent must be in 1..=8");
        FieldSpec { q, poly: PRIMITIVE_POLY[q as usize] }
    }

    /// Field size g = 2^q.
    pub fn size(&self) -> u32 {
        1u32 << self.q
    }
}

/// A GF(2^q) instance with its exp/log tables built.
#[derive(Debug, Clone)]
pub struct Field {
    spec: FieldSpec,
    exp: Vec<u8>, // length 2*(g-1), doubled to skip a modulo in mul
    log: Vec<u8>, // log[0] unused
}

impl Field {
    pub fn new(q: u8) -> Self {
        Self::from_spec(FieldSpec::new(q))
    }

    pub fn from_spec(spec: FieldSpec) -> Self {
        let g = spec.size() as usize;
        let order = g - 1;
        let mut exp = vec![0u8; 2 * order];
        let mut log = vec![0u8; g];
        let mut x: u16 = 1;
        for i in 0..order {
            exp[i] = x as u8;
            log[x as usize] = i as u8;
            x <<= 1;
            if x & (1 << spec.q) != 0 {
                x ^= spec.poly;
            }
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Field { spec, exp, log }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    /// Field size g = 2^q.
    pub fn size(&self) -> u32 {
        self.spec.size()
    }

    /// Addition (= subtraction) is carry-less: XOR.
    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, Error> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = (self.size() - 1) as usize;
        Ok(self.exp[order - self.log[a as usize] as usize])
    }

    /// a * inv(b).
    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, Error> {
        Ok(self.mul(a, self.inv(b)?))
    }
}
