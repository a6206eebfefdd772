use super::bits::{BitReader, BitWriter};
use super::model::FrequencyModel;
use crate::error::{Error, Result};

/// Register width of the coder in bits.
pub const PRECISION: u32 = 62;
const TOP: u64 = (1 << PRECISION) - 1;
const HALF: u64 = 1 << (PRECISION - 1);
const QUARTER: u64 = 1 << (PRECISION - 2);

/// Something that consumes a symbol under a model: an encoder writes it, a
/// decoder ignores the argument and returns what it reads, and a meter just
/// adds up its information content. Coding logic written against this trait
/// runs unchanged on both sides of the channel.
pub trait SymbolCoder {
    fn code(&mut self, model: &FrequencyModel, symbol: usize) -> Result<usize>;
}

/// Scales `[low, high]` to the cumulative range `[c_lo, c_hi)` of `total`.
fn narrow(low: u64, high: u64, c_lo: u32, c_hi: u32, total: u32) -> (u64, u64) {
    let range = u128::from(high - low) + 1;
    let t = u128::from(total);
    let new_high = low + (range * u128::from(c_hi) / t) as u64 - 1;
    let new_low = low + (range * u128::from(c_lo) / t) as u64;
    (new_low, new_high)
}

/// Binary arithmetic encoder with carry-free pending-bit renormalization.
#[derive(Debug)]
pub struct Encoder {
    low: u64,
    high: u64,
    pending: u64,
    out: BitWriter,
    ideal_bits: f64,
}

impl Default for Encoder {
    fn default() -> Self {
        Self::new()
    }
}

impl Encoder {
    pub fn new() -> Self {
        Self {
            low: 0,
            high: TOP,
            pending: 0,
            out: BitWriter::new(),
            ideal_bits: 0.0,
        }
    }

    /// Sum of `-log2 P(symbol)` over everything coded so far, under the
    /// quantized models actually used.
    pub fn ideal_bits(&self) -> f64 {
        self.ideal_bits
    }

    fn emit(&mut self, bit: bool) {
        self.out.write_bit(bit);
        for _ in 0..self.pending {
            self.out.write_bit(!bit);
        }
        self.pending = 0;
    }

    pub fn encode(&mut self, model: &FrequencyModel, symbol: usize) {
        if model.len() == 1 {
            return;
        }
        let (c_lo, c_hi) = model.range(symbol);
        self.ideal_bits += model.bits(symbol);
        (self.low, self.high) = narrow(self.low, self.high, c_lo, c_hi, model.total());
        loop {
            if self.high < HALF {
                self.emit(false);
            } else if self.low >= HALF {
                self.emit(true);
                self.low -= HALF;
                self.high -= HALF;
            } else if self.low >= QUARTER && self.high < HALF + QUARTER {
                self.pending += 1;
                self.low -= QUARTER;
                self.high -= QUARTER;
            } else {
                break;
            }
            self.low <<= 1;
            self.high = (self.high << 1) | 1;
        }
    }

    /// Flushes two disambiguating bits plus any pending ones. A decoder
    /// reading zeros past the end lands inside the final interval.
    pub fn finish(mut self) -> BitWriter {
        self.pending += 1;
        let bit = self.low >= QUARTER;
        self.emit(bit);
        self.out
    }
}

impl SymbolCoder for Encoder {
    fn code(&mut self, model: &FrequencyModel, symbol: usize) -> Result<usize> {
        if symbol >= model.len() {
            return Err(Error::Domain(format!(
                "symbol {symbol} outside alphabet of {}",
                model.len()
            )));
        }
        self.encode(model, symbol);
        Ok(symbol)
    }
}

/// Decoder matching [`Encoder`]. Reads zeros past the end of its input and
/// reports truncation in [`finish`](Self::finish).
#[derive(Debug)]
pub struct Decoder<'a> {
    low: u64,
    high: u64,
    value: u64,
    input: BitReader<'a>,
    start: usize,
    available: usize,
}

impl<'a> Decoder<'a> {
    /// Starts decoding at the current position of `input`.
    pub fn new(mut input: BitReader<'a>) -> Self {
        let start = input.position();
        let available = input.remaining();
        let mut value = 0;
        for _ in 0..PRECISION {
            value = (value << 1) | u64::from(input.read_bit_padded());
        }
        Self {
            low: 0,
            high: TOP,
            value,
            input,
            start,
            available,
        }
    }

    pub fn decode(&mut self, model: &FrequencyModel) -> Result<usize> {
        if model.len() == 1 {
            return Ok(0);
        }
        let total = model.total();
        let range = u128::from(self.high - self.low) + 1;
        let offset = u128::from(self.value - self.low);
        let target = ((offset + 1) * u128::from(total) - 1) / range;
        if target >= u128::from(total) {
            return Err(Error::Decode("arithmetic decoder left its interval".into()));
        }
        let symbol = model.find(target as u32);
        let (c_lo, c_hi) = model.range(symbol);
        (self.low, self.high) = narrow(self.low, self.high, c_lo, c_hi, total);
        loop {
            if self.high < HALF {
            } else if self.low >= HALF {
                self.low -= HALF;
                self.high -= HALF;
                self.value -= HALF;
            } else if self.low >= QUARTER && self.high < HALF + QUARTER {
                self.low -= QUARTER;
                self.high -= QUARTER;
                self.value -= QUARTER;
            } else {
                break;
            }
            self.low <<= 1;
            self.high = (self.high << 1) | 1;
            self.value = (self.value << 1) | u64::from(self.input.read_bit_padded());
        }
        Ok(symbol)
    }

    /// Checks that decoding stopped where the encoder did. The encoder's
    /// flush leaves the decoder exactly `PRECISION - 2` bits ahead of the
    /// payload, less the byte padding, so anything else means truncation or
    /// trailing garbage.
    pub fn finish(self) -> Result<()> {
        let read = self.input.position() - self.start;
        let expected_max = self.available + PRECISION as usize - 2;
        if read > expected_max {
            return Err(Error::Decode(format!(
                "payload truncated: needed {} more bits",
                read - expected_max
            )));
        }
        if read + 7 < expected_max {
            return Err(Error::Decode(format!(
                "{} unread payload bits",
                expected_max - read
            )));
        }
        Ok(())
    }
}

impl SymbolCoder for Decoder<'_> {
    fn code(&mut self, model: &FrequencyModel, _symbol: usize) -> Result<usize> {
        self.decode(model)
    }
}

/// Adds up ideal codelengths without producing output.
#[derive(Clone, Debug, Default)]
pub struct CostMeter {
    pub bits: f64,
}

impl SymbolCoder for CostMeter {
    fn code(&mut self, model: &FrequencyModel, symbol: usize) -> Result<usize> {
        if symbol >= model.len() {
            return Err(Error::Domain(format!(
                "symbol {symbol} outside alphabet of {}",
                model.len()
            )));
        }
        if model.len() > 1 {
            self.bits += model.bits(symbol);
        }
        Ok(symbol)
    }
}
