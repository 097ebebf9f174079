//! Truth tables, the Walsh-Hadamard spectrum and the quantities derived from it.
//!
//! Input index `i` stands for the vector `x = (x_1, ..., x_n)` obtained from the
//! big-endian binary expansion of `i`, so `x_1` is the most significant bit.
//! Every module in the crate uses this convention.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_DIMENSION: u32 = 16;

pub(crate) fn check_dimension(n: u32) -> Result<()> {
    if (1..=MAX_DIMENSION).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

fn words_for(n: u32) -> usize {
    (1usize << n).div_ceil(64)
}

/// The `2^n` output bits of a Boolean function, packed into machine words.
///
/// Bit `i % 64` of word `i / 64` holds `f` at input index `i`. Bits beyond
/// `2^n` in the last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: u32,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn zeros(n: u32) -> Result<Self> {
        check_dimension(n)?;
        Ok(Self {
            n,
            words: vec![0; words_for(n)],
        })
    }

    pub fn from_bits<I>(n: u32, bits: I) -> Result<Self>
    where
        I: IntoIterator<Item = bool>,
    {
        let mut tt = Self::zeros(n)?;
        let mut count = 0usize;
        for (i, b) in bits.into_iter().enumerate() {
            if i < tt.len() && b {
                tt.words[i / 64] |= 1 << (i % 64);
            }
            count += 1;
        }
        if count != tt.len() {
            return Err(Error::LengthMismatch {
                expected: tt.len(),
                actual: count,
            });
        }
        Ok(tt)
    }

    /// Builds the table by evaluating `f` on every input index.
    pub fn from_fn(n: u32, mut f: impl FnMut(usize) -> bool) -> Result<Self> {
        let len = 1usize << n;
        Self::from_bits(n, (0..len).map(&mut f))
    }

    /// Parses a string of `'0'`/`'1'` characters, index 0 first.
    pub fn from_bit_str(n: u32, s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                '_' | ' ' => {}
                other => return Err(Error::InvalidHex(format!("unexpected character {other:?}"))),
            }
        }
        Self::from_bits(n, bits)
    }

    /// Takes ownership of packed words. Stray high bits are rejected.
    pub fn from_words(n: u32, words: Vec<u64>) -> Result<Self> {
        check_dimension(n)?;
        if words.len() != words_for(n) {
            return Err(Error::LengthMismatch {
                expected: words_for(n),
                actual: words.len(),
            });
        }
        let tt = Self { n, words };
        if tt.n < 6 && tt.words[0] >> (1u32 << tt.n) != 0 {
            return Err(Error::LengthMismatch {
                expected: tt.len(),
                actual: 64 - tt.words[0].leading_zeros() as usize,
            });
        }
        Ok(tt)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len());
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len());
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len());
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        if self.n < 6 {
            out.words[0] &= (1u64 << (1u32 << self.n)) - 1;
        }
        out
    }

    /// Hex text form: digits left to right carry bits for indices 0, 1, 2, ...
    /// with the most significant bit of the first digit holding `f(0)`.
    /// Dimensions 1 and 2 use one digit whose unused low bits are zero.
    pub fn to_hex(&self) -> String {
        let digits = hex_digits(self.n);
        let mut s = String::with_capacity(digits);
        for d in 0..digits {
            let mut v = 0u32;
            for k in 0..4 {
                let i = d * 4 + k;
                if i < self.len() && self.get(i) {
                    v |= 8 >> k;
                }
            }
            s.push(char::from_digit(v, 16).expect("nibble"));
        }
        s
    }

    pub fn from_hex(n: u32, hex: &str) -> Result<Self> {
        check_dimension(n)?;
        let hex = hex.trim();
        let hex = hex.strip_prefix("0x").unwrap_or(hex);
        let digits = hex_digits(n);
        if hex.len() != digits {
            return Err(Error::InvalidHex(format!(
                "expected {digits} hex digits for n = {n}, got {}",
                hex.len()
            )));
        }
        let mut tt = Self::zeros(n)?;
        for (d, c) in hex.chars().enumerate() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| Error::InvalidHex(format!("invalid digit {c:?}")))?;
            for k in 0..4 {
                let i = d * 4 + k;
                let bit = v & (8 >> k) != 0;
                if i < tt.len() {
                    tt.set(i, bit);
                } else if bit {
                    return Err(Error::InvalidHex("padding bits must be zero".into()));
                }
            }
        }
        Ok(tt)
    }
}

fn hex_digits(n: u32) -> usize {
    ((1usize << n) / 4).max(1)
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable(n={}, {})", self.n, self.to_hex())
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// `W_f(a)` for every `a`, indexed with the same convention as the truth table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalshSpectrum {
    n: u32,
    values: Vec<i32>,
}

impl WalshSpectrum {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn max_abs(&self) -> u32 {
        self.values.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }

    /// Number of entries attaining the maximum magnitude.
    pub fn num_max_values(&self) -> u32 {
        let m = self.max_abs();
        self.values.iter().filter(|v| v.unsigned_abs() == m).count() as u32
    }

    /// `Σ W_f(a)^2`, which equals `2^(2n)` for every Boolean function.
    pub fn sum_of_squares(&self) -> u64 {
        self.values.iter().map(|&v| (v as i64 * v as i64) as u64).sum()
    }
}

/// In-place fast Walsh-Hadamard butterfly over a buffer of length `2^k`.
pub fn fwht_in_place(buf: &mut [i32]) {
    debug_assert!(buf.len().is_power_of_two());
    let len = buf.len();
    let mut h = 1;
    while h < len {
        for chunk in buf.chunks_exact_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let a = *x;
                let b = *y;
                *x = a + b;
                *y = a - b;
            }
        }
        h *= 2;
    }
}

fn fill_signs(tt: &TruthTable, buf: &mut Vec<i32>) {
    buf.clear();
    buf.reserve(tt.len());
    if tt.n() < 6 {
        let w = tt.words[0];
        buf.extend((0..tt.len()).map(|i| 1 - 2 * ((w >> i) & 1) as i32));
    } else {
        for &w in &tt.words {
            buf.extend((0..64).map(|i| 1 - 2 * ((w >> i) & 1) as i32));
        }
    }
}

pub fn walsh_transform(tt: &TruthTable) -> WalshSpectrum {
    let mut values = Vec::new();
    fill_signs(tt, &mut values);
    fwht_in_place(&mut values);
    WalshSpectrum { n: tt.n(), values }
}

/// `nl_f = 2^(n-1) - max|W_f| / 2`.
pub fn nonlinearity(ws: &WalshSpectrum) -> u32 {
    (1u32 << (ws.n - 1)) - ws.max_abs() / 2
}

/// Returns `(balanced, hamming_weight)`.
pub fn balancedness(tt: &TruthTable) -> (bool, u32) {
    let w = tt.weight();
    (w as usize * 2 == tt.len(), w)
}

/// Search fitness `nl_f + (2^n - #max_values) / 2^n`, kept as an exact rational.
///
/// Two fitness values compare by their rational value, so the ordering is
/// total and free of floating-point ties.
#[derive(Clone, Copy, Debug)]
pub struct Fitness {
    n: u32,
    nl: u32,
    num_max: u32,
}

impl Fitness {
    pub fn new(n: u32, nl: u32, num_max: u32) -> Self {
        debug_assert!(num_max >= 1 && num_max as u64 <= 1u64 << n);
        Self { n, nl, num_max }
    }

    pub fn from_spectrum(ws: &WalshSpectrum) -> Self {
        Self::new(ws.n, nonlinearity(ws), ws.num_max_values())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn nonlinearity(&self) -> u32 {
        self.nl
    }

    pub fn num_max_values(&self) -> u32 {
        self.num_max
    }

    /// Numerator of the fractional part over the denominator `2^n`.
    fn frac_numerator(&self) -> u64 {
        (1u64 << self.n) - self.num_max as u64
    }

    /// Exact for every supported `n`: the denominator is a power of two.
    pub fn value(&self) -> f64 {
        self.nl as f64 + self.frac_numerator() as f64 / (1u64 << self.n) as f64
    }
}

impl Ord for Fitness {
    fn cmp(&self, other: &Self) -> Ordering {
        self.nl.cmp(&other.nl).then_with(|| {
            let lhs = self.frac_numerator() << other.n;
            let rhs = other.frac_numerator() << self.n;
            lhs.cmp(&rhs)
        })
    }
}

impl PartialOrd for Fitness {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Fitness {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Fitness {}

impl fmt::Display for Fitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

pub fn fitness(tt: &TruthTable) -> Fitness {
    Fitness::from_spectrum(&walsh_transform(tt))
}

/// Reusable scratch space for repeated fitness evaluation without allocation.
#[derive(Clone, Debug, Default)]
pub struct WalshWorkspace {
    buf: Vec<i32>,
}

impl WalshWorkspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fitness(&mut self, tt: &TruthTable) -> Fitness {
        fill_signs(tt, &mut self.buf);
        fwht_in_place(&mut self.buf);
        let mut max = 0u32;
        let mut count = 0u32;
        for v in &self.buf {
            let a = v.unsigned_abs();
            match a.cmp(&max) {
                Ordering::Greater => {
                    max = a;
                    count = 1;
                }
                Ordering::Equal => count += 1,
                Ordering::Less => {}
            }
        }
        Fitness::new(tt.n(), (1u32 << (tt.n() - 1)) - max / 2, count)
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PropertyReport {
    pub nonlinearity: u32,
    pub balanced: bool,
    pub hamming_weight: u32,
    pub max_abs_walsh: u32,
    pub num_max_values: u32,
    pub fitness: f64,
}

pub fn analyze(tt: &TruthTable) -> PropertyReport {
    let ws = walsh_transform(tt);
    let (balanced, hamming_weight) = balancedness(tt);
    let fit = Fitness::from_spectrum(&ws);
    PropertyReport {
        nonlinearity: fit.nonlinearity(),
        balanced,
        hamming_weight,
        max_abs_walsh: ws.max_abs(),
        num_max_values: fit.num_max_values(),
        fitness: fit.value(),
    }
}

/// Nonlinearity reference points for an odd dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Bounds {
    pub quadratic: u32,
    pub best_known: u32,
    pub upper: u32,
}

const BEST_KNOWN: [(u32, u32); 4] = [(7, 56), (9, 242), (11, 996), (13, 4040)];

pub fn best_known(n: u32) -> Result<u32> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenDimension(n));
    }
    BEST_KNOWN
        .iter()
        .find(|(k, _)| *k == n)
        .map(|&(_, v)| v)
        .ok_or(Error::NoBestKnown(n))
}

/// Quadratic (bent-concatenation) value `2^(n-1) - 2^((n-1)/2)`.
pub fn quadratic_bound(n: u32) -> Result<u32> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenDimension(n));
    }
    check_dimension(n)?;
    Ok((1 << (n - 1)) - (1 << ((n - 1) / 2)))
}

/// `2 * floor(2^(n-2) - 2^(n/2 - 2))` for odd `n`, computed without floats.
///
/// With `N = 2^n` the inner term is `(N - sqrt(N)) / 4`; since `sqrt(N)` is
/// irrational for odd `n`, its floor is `(N - isqrt(N) - 1) div 4`.
pub fn upper_bound(n: u32) -> Result<u32> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenDimension(n));
    }
    check_dimension(n)?;
    let big = 1u64 << n;
    Ok(2 * ((big - big.isqrt() - 1) / 4) as u32)
}

/// Covering radius bound `2^(n-1) - 2^(n/2 - 1)`, rounded down for odd `n`.
pub fn covering_radius_bound(n: u32) -> Result<u32> {
    check_dimension(n)?;
    let big = 1u64 << n;
    // 2^(n/2 - 1) = sqrt(2^n) / 2, rounded up when irrational
    let half_root = if n.is_multiple_of(2) {
        big.isqrt() / 2
    } else {
        big.isqrt() / 2 + 1
    };
    Ok((big / 2 - half_root) as u32)
}

pub fn bounds(n: u32) -> Result<Bounds> {
    let best_known = best_known(n)?;
    Ok(Bounds {
        quadratic: quadratic_bound(n)?,
        best_known,
        upper: upper_bound(n)?,
    })
}
