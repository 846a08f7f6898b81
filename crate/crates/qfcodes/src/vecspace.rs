//! Encoding and iteration for the vector space `F_q^m`.
//!
//! A vector `(x_1, ..., x_m)` is encoded as `sum enc(x_i) * q^(i-1)`: the
//! first coordinate is the least significant digit. Under the polynomial
//! basis this matches the encoding of the corresponding `F_{q^m}` element.

use crate::field::FieldElement;

pub fn size(q: u32, m: usize) -> Option<u64> {
    let s = (q as u128).checked_pow(m as u32)?;
    u64::try_from(s).ok()
}

pub fn decode(q: u32, m: usize, mut idx: u64) -> Vec<FieldElement> {
    let q = q as u64;
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        out.push(FieldElement((idx % q) as u32));
        idx /= q;
    }
    out
}

pub fn encode(q: u32, coords: &[FieldElement]) -> u64 {
    let q = q as u64;
    let mut enc = 0u64;
    for &c in coords.iter().rev() {
        enc = enc * q + c.encoding() as u64;
    }
    enc
}

/// In-place odometer step in base `q`; much cheaper than re-decoding when
/// sweeping a contiguous index range.
#[inline]
pub fn increment(q: u32, coords: &mut [FieldElement]) {
    for c in coords.iter_mut() {
        if c.encoding() + 1 < q {
            *c = FieldElement(c.encoding() + 1);
            return;
        }
        *c = FieldElement::ZERO;
    }
}
