use super::bits::{BitReader, BitWriter};
use crate::error::{Error, Result};

fn bit_len(v: u64) -> u32 {
    64 - v.leading_zeros()
}

/// Length in bits of the Elias delta code of `v >= 1`.
pub fn elias_delta_len(v: u64) -> usize {
    assert!(v >= 1, "Elias delta is defined for positive integers");
    let l = bit_len(v);
    let ll = bit_len(u64::from(l));
    (l - 1 + 2 * (ll - 1) + 1) as usize
}

/// Writes `v >= 1` with the Elias delta code: the bit length of `v` in Elias
/// gamma, then `v` without its leading one.
pub fn write_elias_delta(w: &mut BitWriter, v: u64) -> Result<()> {
    if v == 0 {
        return Err(Error::Domain("Elias delta cannot code 0".into()));
    }
    let l = bit_len(v);
    let ll = bit_len(u64::from(l));
    w.write_bits(0, ll - 1);
    w.write_bits(u64::from(l), ll);
    w.write_bits(v, l - 1);
    Ok(())
}

pub fn read_elias_delta(r: &mut BitReader<'_>) -> Result<u64> {
    let mut zeros = 0;
    while !r.read_bit()? {
        zeros += 1;
        if zeros > 6 {
            return Err(Error::Decode("Elias delta prefix too long".into()));
        }
    }
    let l = (1u64 << zeros) | r.read_bits(zeros)?;
    if l > 64 {
        return Err(Error::Decode(format!("Elias delta length {l} exceeds 64 bits")));
    }
    let rest = r.read_bits(l as u32 - 1)?;
    Ok(if l == 64 { (1u64 << 63) | rest } else { (1u64 << (l - 1)) | rest })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn encode(v: u64) -> BitWriter {
        let mut w = BitWriter::new();
        write_elias_delta(&mut w, v).unwrap();
        w
    }

    #[test]
    fn one_is_one_bit() {
        let w = encode(1);
        assert_eq!(w.len(), 1);
        assert_eq!(elias_delta_len(1), 1);
    }

    #[test]
    fn known_codes() {
        // 7 = 111: length 3 = 11 in gamma as 011, then 11.
        let w = encode(7);
        assert_eq!(w.len(), 5);
        assert_eq!(w.as_bytes()[0] >> 3, 0b01111);
        let mut r = BitReader::new(w.as_bytes());
        assert_eq!(read_elias_delta(&mut r).unwrap(), 7);
    }

    #[test]
    fn zero_rejected() {
        assert!(write_elias_delta(&mut BitWriter::new(), 0).is_err());
    }

    #[test]
    fn lengths_within_bound() {
        let mut prev = 0;
        for v in 1..=1024u64 {
            let len = elias_delta_len(v);
            assert_eq!(len, encode(v).len());
            let x = v as f64;
            assert!(len as f64 <= x.log2() + 2.0 * (2.0 * x).log2().log2() + 1.0 + 1e-9, "v={v}");
            // Monotone up to the jump at each power of two.
            assert!(len >= prev);
            prev = len;
        }
    }

    #[test]
    fn sequence_round_trip() {
        let values = [1u64, 2, 3, 15, 16, 17, 1 << 20, u64::MAX, (1 << 63) + 5];
        let mut w = BitWriter::new();
        for &v in &values {
            write_elias_delta(&mut w, v).unwrap();
        }
        let bytes = w.into_bytes();
        let mut r = BitReader::new(&bytes);
        for &v in &values {
            assert_eq!(read_elias_delta(&mut r).unwrap(), v);
        }
    }
}
