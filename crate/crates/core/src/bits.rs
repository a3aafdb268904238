//! Bit-sequence helpers shared by the crypto and protocol layers.

pub type Bits = Vec<bool>;

/// Little-endian bits of `value`: element `i` is the coefficient of 2^i.
pub fn to_bits_le(value: u64, width: usize) -> Bits {
    (0..width)
        .map(|i| i < 64 && (value >> i) & 1 == 1)
        .collect()
}

pub fn from_bits_le(bits: &[bool]) -> u64 {
    bits.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .fold(0, |acc, (i, _)| acc | (1u64 << i))
}

/// Big-endian fixed-width encoding of `value`.
pub fn to_bits_be(value: u64, width: usize) -> Bits {
    (0..width)
        .rev()
        .map(|i| i < 64 && (value >> i) & 1 == 1)
        .collect()
}

pub fn from_bits_be(bits: &[bool]) -> u64 {
    bits.iter().fold(0, |acc, &b| (acc << 1) | u64::from(b))
}

pub fn xor(a: &[bool], b: &[bool]) -> Bits {
    assert_eq!(a.len(), b.len(), "xor of unequal lengths");
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

pub fn hamming(a: &[bool], b: &[bool]) -> usize {
    assert_eq!(a.len(), b.len(), "hamming distance of unequal lengths");
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Packs bits MSB-first into bytes (zero-padded at the end) and hex-encodes them.
pub fn to_hex(bits: &[bool]) -> String {
    let mut out = String::with_capacity(bits.len().div_ceil(4));
    for chunk in bits.chunks(8) {
        let byte = chunk
            .iter()
            .enumerate()
            .fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i)));
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

pub fn to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
