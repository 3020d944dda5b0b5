//! Flat binary cache of one stratum.
//!
//! Layout: the ASCII line `UPHO-STRATUM v1\n`, then little-endian
//! `alphabet_size: u32`, `length: u32`, `nonzero_count: u32`,
//! `word_count: u64`, followed by one `u32` class id per word in base-|X|
//! order. The zero class, if any, is id `nonzero_count`.

use std::io::{Read, Write};

use super::LengthClasses;
use crate::error::{Error, Result};

pub const STRATUM_HEADER: &[u8] = b"UPHO-STRATUM v1\n";

pub fn write_stratum<W: Write>(classes: &LengthClasses, mut out: W) -> Result<()> {
    out.write_all(STRATUM_HEADER)?;
    out.write_all(&(classes.alphabet_size() as u32).to_le_bytes())?;
    out.write_all(&(classes.length() as u32).to_le_bytes())?;
    out.write_all(&(classes.nonzero_count() as u32).to_le_bytes())?;
    out.write_all(&(classes.table().len() as u64).to_le_bytes())?;
    for &c in classes.table() {
        out.write_all(&c.to_le_bytes())?;
    }
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub fn read_stratum<R: Read>(mut input: R) -> Result<LengthClasses> {
    let mut header = [0u8; STRATUM_HEADER.len()];
    input.read_exact(&mut header)?;
    if header != STRATUM_HEADER {
        return Err(Error::InvalidInput("not an UPHO-STRATUM v1 file".into()));
    }
    let m = read_u32(&mut input)? as usize;
    let k = read_u32(&mut input)? as usize;
    let nonzero = read_u32(&mut input)? as usize;
    let mut b = [0u8; 8];
    input.read_exact(&mut b)?;
    let n = u64::from_le_bytes(b);
    let expected = (m as u128).checked_pow(k as u32);
    if expected != Some(n as u128) {
        return Err(Error::InvalidInput(format!("word count {n} does not match {m}^{k}")));
    }
    let mut table = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let c = read_u32(&mut input)?;
        if c as usize > nonzero {
            return Err(Error::InvalidInput(format!("class id {c} out of range")));
        }
        table.push(c);
    }
    Ok(LengthClasses::from_table(k, m, table, nonzero))
}
