use crate::error::{Error, Result};

/// Append-only bit buffer, most significant bit first within each byte.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitWriter {
    bytes: Vec<u8>,
    len: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of bits written so far.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn write_bit(&mut self, bit: bool) {
        if self.len % 8 == 0 {
            self.bytes.push(0);
        }
        if bit {
            let last = self.bytes.last_mut().expect("byte pushed above");
            *last |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    /// Writes the low `count` bits of `value`, high bit first.
    pub fn write_bits(&mut self, value: u64, count: u32) {
        for i in (0..count).rev() {
            self.write_bit((value >> i) & 1 == 1);
        }
    }

    pub fn write_bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_bits(u64::from(b), 8);
        }
    }

    /// Appends every bit of `other`.
    pub fn append(&mut self, other: &BitWriter) {
        if self.len % 8 == 0 {
            self.bytes.extend_from_slice(&other.bytes);
            self.len += other.len;
            return;
        }
        let mut r = BitReader::new(&other.bytes);
        for _ in 0..other.len {
            self.write_bit(r.read_bit().expect("within other.len"));
        }
    }

    /// The buffer padded with zero bits to a whole number of bytes.
    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }
}

/// Reads bits from a byte slice in the order [`BitWriter`] wrote them.
#[derive(Clone, Debug)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    /// Bits consumed so far.
    pub fn position(&self) -> usize {
        self.pos
    }

    /// Bits left before the end of the slice.
    pub fn remaining(&self) -> usize {
        self.bytes.len() * 8 - self.pos.min(self.bytes.len() * 8)
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        let byte = self
            .bytes
            .get(self.pos / 8)
            .ok_or_else(|| Error::Decode("unexpected end of stream".into()))?;
        let bit = byte & (0x80 >> (self.pos % 8)) != 0;
        self.pos += 1;
        Ok(bit)
    }

    /// Like [`read_bit`](Self::read_bit) but yields zeros past the end.
    pub fn read_bit_padded(&mut self) -> bool {
        let bit = self.bytes.get(self.pos / 8).is_some_and(|b| b & (0x80 >> (self.pos % 8)) != 0);
        self.pos += 1;
        bit
    }

    pub fn skip(&mut self, bits: usize) -> Result<()> {
        if bits > self.remaining() {
            return Err(Error::Decode("unexpected end of stream".into()));
        }
        self.pos += bits;
        Ok(())
    }

    pub fn read_bits(&mut self, count: u32) -> Result<u64> {
        let mut v = 0u64;
        for _ in 0..count {
            v = (v << 1) | u64::from(self.read_bit()?);
        }
        Ok(v)
    }

    pub fn read_bytes(&mut self, count: usize) -> Result<Vec<u8>> {
        (0..count).map(|_| self.read_bits(8).map(|b| b as u8)).collect()
    }
}
