use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Fixed-length bit string; bit `i` carries weight `2^i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self(vec![false; len])
    }

    pub fn from_bits<I: IntoIterator<Item = u8>>(bits: I) -> Self {
        Self(bits.into_iter().map(|b| b & 1 == 1).collect())
    }

    /// Low `len` bits of `value`; `len` may exceed 64, the excess is zero.
    pub fn from_u64(value: u64, len: usize) -> Self {
        Self((0..len).map(|i| i < 64 && (value >> i) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u8 {
        u8::from(self.0[i])
    }

    pub fn push(&mut self, bit: u8) {
        self.0.push(bit & 1 == 1);
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().map(|&b| u8::from(b))
    }

    /// Integer value; `None` when a set bit lies above position 63.
    pub fn to_u64(&self) -> Option<u64> {
        let mut v = 0u64;
        for (i, &b) in self.0.iter().enumerate() {
            if b {
                if i >= 64 {
                    return None;
                }
                v |= 1 << i;
            }
        }
        Some(v)
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                what: "xor operands",
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Self(
            self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect(),
        ))
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_zero(&self) -> bool {
        self.count_ones() == 0
    }

    /// Big-endian hex of the integer value, `ceil(len/4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.len().div_ceil(4);
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (0..4)
                    .filter(|k| self.0.get(4 * d + k).copied().unwrap_or(false))
                    .fold(0u32, |acc, k| acc | (1 << k));
                char::from_digit(nibble, 16).expect("nibble")
            })
            .collect()
    }

    pub fn from_hex(hex: &str, len: usize) -> Result<Self> {
        let mut bits = vec![false; len];
        for (d, c) in hex.chars().rev().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::Transcript(format!("bad hex digit {c:?}")))?;
            for k in 0..4 {
                if nibble >> k & 1 == 1 {
                    let at = 4 * d + k;
                    if at >= len {
                        return Err(Error::Transcript(format!(
                            "hex {hex:?} overflows {len} bits"
                        )));
                    }
                    bits[at] = true;
                }
            }
        }
        Ok(Self(bits))
    }
}

impl fmt::Display for BitString {
    /// Most significant bit first, like a binary literal.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.0.iter().rev() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromIterator<u8> for BitString {
    fn from_iter<T: IntoIterator<Item = u8>>(iter: T) -> Self {
        Self::from_bits(iter)
    }
}

#[derive(Serialize, Deserialize)]
struct WireBits {
    bits: usize,
    hex: String,
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WireBits {
            bits: self.len(),
            hex: self.to_hex(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = WireBits::deserialize(d)?;
        BitString::from_hex(&wire.hex, wire.bits).map_err(serde::de::Error::custom)
    }
}

/// The two private values being compared, as `n_bits`-bit integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonInput {
    x: u64,
    y: u64,
    n_bits: u32,
}

impl ComparisonInput {
    pub const MAX_BITS: u32 = 64;

    pub fn new(x: u64, y: u64, n_bits: u32) -> Result<Self> {
        if n_bits == 0 || n_bits > Self::MAX_BITS {
            return Err(Error::InvalidInput(format!(
                "bit width {n_bits} outside 1..={}",
                Self::MAX_BITS
            )));
        }
        for (name, v) in [("x", x), ("y", y)] {
            if n_bits < 64 && v >> n_bits != 0 {
                return Err(Error::InvalidInput(format!(
                    "{name} = {v:#x} does not fit in {n_bits} bits"
                )));
            }
        }
        Ok(Self { x, y, n_bits })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn y(&self) -> u64 {
        self.y
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits as usize
    }

    pub fn x_bits(&self) -> BitString {
        BitString::from_u64(self.x, self.n_bits())
    }

    pub fn y_bits(&self) -> BitString {
        BitString::from_u64(self.y, self.n_bits())
    }

    pub fn xor_bits(&self) -> BitString {
        BitString::from_u64(self.x ^ self.y, self.n_bits())
    }

    pub fn equal(&self) -> bool {
        self.x == self.y
    }
}
