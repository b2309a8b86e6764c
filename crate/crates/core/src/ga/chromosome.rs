use std::fmt;

use crate::error::{Error, Result};

/// Fixed-length bit vector; gene `j` set means feature `j` is selected.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chromosome {
    genes: Vec<bool>,
}

impl Chromosome {
    pub fn new(genes: Vec<bool>) -> Self {
        Self { genes }
    }

    /// Convenience constructor from 0/1 values; any nonzero byte is a set gene.
    pub fn from_bits(bits: &[u8]) -> Self {
        Self::new(bits.iter().map(|&b| b != 0).collect())
    }

    pub fn all_ones(len: usize) -> Self {
        Self::new(vec![true; len])
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![false; len])
    }

    /// Chromosome expressing exactly the given gene indices.
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut genes = vec![false; len];
        for &j in indices {
            genes[j] = true;
        }
        Self::new(genes)
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn genes(&self) -> &[bool] {
        &self.genes
    }

    pub fn get(&self, j: usize) -> bool {
        self.genes[j]
    }

    pub fn set(&mut self, j: usize, value: bool) {
        self.genes[j] = value;
    }

    pub fn flip(&mut self, j: usize) {
        self.genes[j] = !self.genes[j];
    }

    pub fn count_ones(&self) -> usize {
        self.genes.iter().filter(|&&g| g).count()
    }

    pub fn is_all_zero(&self) -> bool {
        !self.genes.iter().any(|&g| g)
    }

    /// Indices of expressed genes, ascending.
    pub fn expressed(&self) -> Vec<usize> {
        self.genes
            .iter()
            .enumerate()
            .filter_map(|(j, &g)| g.then_some(j))
            .collect()
    }

    /// Big-endian hex: gene 0 is the most significant bit of a `len`-bit
    /// integer, zero-padded on the left to `ceil(len / 4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.genes.len().div_ceil(4);
        let pad = digits * 4 - self.genes.len();
        let bits: Vec<bool> = std::iter::repeat_n(false, pad)
            .chain(self.genes.iter().copied())
            .collect();
        bits.chunks(4)
            .map(|nibble| {
                let v = nibble.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
                char::from_digit(v, 16).expect("nibble < 16")
            })
            .collect()
    }

    /// Inverse of [`Chromosome::to_hex`] for a known gene count.
    pub fn from_hex(hex: &str, len: usize) -> Result<Self> {
        let digits = len.div_ceil(4);
        if hex.len() != digits {
            return Err(Error::ChromosomeEncoding(format!(
                "expected {digits} hex digits for {len} genes, got {}",
                hex.len()
            )));
        }
        let mut bits = Vec::with_capacity(digits * 4);
        for c in hex.chars() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| Error::ChromosomeEncoding(format!("invalid hex digit `{c}`")))?;
            bits.extend((0..4).rev().map(|k| (v >> k) & 1 == 1));
        }
        let pad = digits * 4 - len;
        if bits[..pad].iter().any(|&b| b) {
            return Err(Error::ChromosomeEncoding(
                "bits set beyond the chromosome length".into(),
            ));
        }
        Ok(Self::new(bits.split_off(pad)))
    }
}

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &g in &self.genes {
            f.write_str(if g { "1" } else { "0" })?;
        }
        Ok(())
    }
}
