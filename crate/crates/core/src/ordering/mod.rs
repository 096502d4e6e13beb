//! Seeded orderings over paths, evaluable one path at a time.
//!
//! Each phase owns a [`Seed`]. In the k-wise mode a seed holds
//! `4·⌈log₂ n_dom⌉` independent polynomials of degree `κ−1` over a prime
//! field, where `n_dom = n^(ℓ+1)` bounds the integer encodings of length-ℓ
//! paths. A path's rank is the concatenation of the low bit of every
//! polynomial evaluated at its encoding. Ties on rank fall back to the
//! canonical key, so the order is always total.

mod field;

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;
use thiserror::Error;

use crate::paths::PathKey;
use field::Montgomery;

/// Modulus used once `n^(ℓ+1)` no longer fits the exact construction.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

/// Largest path-encoding domain handled exactly; beyond it encodings are
/// hashed into the Mersenne field.
pub const EXACT_DOMAIN_LIMIT: u128 = 1 << 62;

const BLOB_MAGIC: &[u8; 4] = b"LCAS";
const BLOB_VERSION: u8 = 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderingError {
    #[error("a path cannot precede itself")]
    SamePath,
    #[error("no seed for phase {0}")]
    MissingPhase(usize),
    #[error("invalid seed blob: {0}")]
    Blob(String),
    #[error("invalid seed parameters: {0}")]
    Params(String),
}

/// Primary rank: the concatenated output bits, packed most significant first
/// into 64-bit words. Lexicographic order on the words is numeric order on
/// the bit string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank(SmallVec<[u64; 4]>);

impl Rank {
    pub fn words(&self) -> &[u64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrderingMode {
    /// Polynomial k-wise independent construction.
    #[default]
    KWise,
    /// Keyed pseudorandom function of the path; for differential testing.
    FullRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedConfig {
    pub mode: OrderingMode,
    /// `κ = kappa_factor · ⌈log₂ n⌉`.
    pub kappa_factor: u32,
}

impl Default for SeedConfig {
    fn default() -> Self {
        SeedConfig {
            mode: OrderingMode::KWise,
            kappa_factor: 4,
        }
    }
}

/// `⌈log₂ x⌉` for `x ≥ 1`.
pub fn ceil_log2(x: u128) -> u32 {
    if x <= 1 {
        0
    } else {
        128 - (x - 1).leading_zeros()
    }
}

/// `n^(len+1)` if it fits in a `u128`.
fn domain_size(n: u64, len: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..=len {
        acc = acc.checked_mul(n as u128)?;
    }
    Some(acc)
}

/// `⌈log₂ n^(len+1)⌉`.
pub fn domain_bits(n: u64, len: usize) -> u32 {
    match domain_size(n, len) {
        Some(x) => ceil_log2(x),
        None => ((len as f64 + 1.0) * (n as f64).log2()).ceil() as u32,
    }
}

/// One phase's polynomial family.
#[derive(Debug, Clone)]
pub struct PolySeed {
    kappa: usize,
    copies: usize,
    modulus: u64,
    radix: u64,
    hashed: bool,
    coefficients: Vec<u64>,
    field: Montgomery,
    mont_coefficients: Vec<u64>,
}

impl PartialEq for PolySeed {
    fn eq(&self, other: &Self) -> bool {
        self.kappa == other.kappa
            && self.copies == other.copies
            && self.modulus == other.modulus
            && self.radix == other.radix
            && self.hashed == other.hashed
            && self.coefficients == other.coefficients
    }
}

impl Eq for PolySeed {}

impl PolySeed {
    /// Explicit construction. `coefficients` holds `copies` consecutive
    /// vectors of `kappa` entries, constant term first.
    pub fn from_parts(
        kappa: usize,
        modulus: u64,
        radix: u64,
        hashed: bool,
        coefficients: Vec<u64>,
    ) -> Result<Self, OrderingError> {
        if kappa == 0 {
            return Err(OrderingError::Params("κ must be positive".into()));
        }
        if modulus < 3
            || modulus.is_multiple_of(2)
            || modulus >= 1 << 63
            || !field::is_prime(modulus)
        {
            return Err(OrderingError::Params(format!(
                "modulus {modulus} is not an odd prime below 2^63"
            )));
        }
        if coefficients.is_empty() || !coefficients.len().is_multiple_of(kappa) {
            return Err(OrderingError::Params(format!(
                "{} coefficients do not split into vectors of {kappa}",
                coefficients.len()
            )));
        }
        if let Some(c) = coefficients.iter().find(|&&c| c >= modulus) {
            return Err(OrderingError::Params(format!(
                "coefficient {c} not below modulus {modulus}"
            )));
        }
        let field = Montgomery::new(modulus);
        let mont_coefficients = coefficients.iter().map(|&c| field.lift(c)).collect();
        Ok(PolySeed {
            kappa,
            copies: coefficients.len() / kappa,
            modulus,
            radix,
            hashed,
            coefficients,
            field,
            mont_coefficients,
        })
    }

    fn generate(n: u64, len: usize, kappa: usize, rng: &mut ChaCha8Rng) -> Self {
        let (modulus, hashed) = Self::modulus_for(n, len);
        let copies = 4 * domain_bits(n, len) as usize;
        let coefficients = (0..copies * kappa)
            .map(|_| rng.gen_range(0..modulus))
            .collect();
        Self::from_parts(kappa, modulus, n, hashed, coefficients).expect("generated seed is valid")
    }

    /// Smallest prime above the domain, or the Mersenne prime when the
    /// domain is too large for exact encodings.
    pub fn modulus_for(n: u64, len: usize) -> (u64, bool) {
        match domain_size(n, len) {
            Some(dom) if dom <= EXACT_DOMAIN_LIMIT => (field::next_prime_above(dom as u64), false),
            _ => (MERSENNE_61, true),
        }
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_hashed(&self) -> bool {
        self.hashed
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    /// Field-element encoding of a path: mixed radix `n` over its canonical
    /// vertex sequence, reduced modulo the field when hashed.
    pub fn encode(&self, p: &PathKey) -> u64 {
        if self.hashed {
            let f = &self.field;
            let radix = f.lift(self.radix);
            let acc = p
                .vertices()
                .iter()
                .fold(0, |acc, &v| f.add(f.mul(acc, radix), f.lift(v as u64)));
            f.lower(acc)
        } else {
            p.vertices()
                .iter()
                .fold(0u64, |acc, &v| acc * self.radix + v as u64)
        }
    }

    /// Value of polynomial `copy` at field element `x`.
    pub fn evaluate(&self, copy: usize, x: u64) -> u64 {
        let f = &self.field;
        let xm = f.lift(x);
        f.lower(self.horner(copy, xm))
    }

    #[inline]
    fn horner(&self, copy: usize, xm: u64) -> u64 {
        let f = &self.field;
        let coeffs = &self.mont_coefficients[copy * self.kappa..(copy + 1) * self.kappa];
        coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, xm), c))
    }

    pub fn rank_of_encoding(&self, x: u64) -> Rank {
        let f = &self.field;
        let xm = f.lift(x);
        let mut words: SmallVec<[u64; 4]> = SmallVec::new();
        let mut word = 0u64;
        for copy in 0..self.copies {
            let bit = f.lower(self.horner(copy, xm)) & 1;
            word |= bit << (63 - copy % 64);
            if copy % 64 == 63 {
                words.push(word);
                word = 0;
            }
        }
        if !self.copies.is_multiple_of(64) {
            words.push(word);
        }
        Rank(words)
    }

    pub fn rank(&self, p: &PathKey) -> Rank {
        self.rank_of_encoding(self.encode(p))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyedSeed {
    key: [u64; 2],
}

impl KeyedSeed {
    pub fn new(key: [u64; 2]) -> Self {
        KeyedSeed { key }
    }

    pub fn key(&self) -> [u64; 2] {
        self.key
    }

    pub fn rank(&self, p: &PathKey) -> Rank {
        let word = |k: u64| {
            let h = p
                .vertices()
                .iter()
                .fold(k, |h, &v| splitmix64(h ^ v as u64));
            splitmix64(h ^ p.vertices().len() as u64)
        };
        Rank(SmallVec::from_slice(&[
            word(self.key[0]),
            word(self.key[1]),
        ]))
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Seed {
    Poly(PolySeed),
    Keyed(KeyedSeed),
}

impl Seed {
    pub fn rank(&self, p: &PathKey) -> Rank {
        match self {
            Seed::Poly(s) => s.rank(p),
            Seed::Keyed(s) => s.rank(p),
        }
    }

    /// Total order: primary rank, then canonical key.
    pub fn compare(&self, p: &PathKey, q: &PathKey) -> Ordering {
        compare_ranked(&self.rank(p), p, &self.rank(q), q)
    }

    /// Whether `p` comes strictly before `q`.
    pub fn precedes(&self, p: &PathKey, q: &PathKey) -> Result<bool, OrderingError> {
        if p == q {
            return Err(OrderingError::SamePath);
        }
        Ok(self.compare(p, q) == Ordering::Less)
    }

    fn stored_bits(&self) -> u64 {
        match self {
            Seed::Poly(s) => s.coefficients.len() as u64 * (64 - s.modulus.leading_zeros()) as u64,
            Seed::Keyed(_) => 128,
        }
    }
}

/// Order on `(rank, key)` pairs used wherever ranks are cached.
pub fn compare_ranked(rp: &Rank, p: &PathKey, rq: &Rank, q: &PathKey) -> Ordering {
    rp.cmp(rq).then_with(|| p.cmp(q))
}

/// One seed per odd phase `ℓ = 1, 3, …, 2k−1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSet {
    vertex_count: u64,
    seeds: Vec<Seed>,
}

impl SeedSet {
    /// Default k-wise seeds derived from `rng_seed`.
    pub fn init(k: usize, n: usize, rng_seed: u64) -> Result<Self, OrderingError> {
        Self::generate(k, n, rng_seed, SeedConfig::default())
    }

    /// Each phase draws from its own ChaCha stream, so the seed for phase ℓ
    /// does not depend on `k`.
    pub fn generate(
        k: usize,
        n: usize,
        rng_seed: u64,
        config: SeedConfig,
    ) -> Result<Self, OrderingError> {
        if k == 0 {
            return Err(OrderingError::Params("k must be at least 1".into()));
        }
        if n < 2 {
            return Err(OrderingError::Params("n must be at least 2".into()));
        }
        if config.kappa_factor == 0 {
            return Err(OrderingError::Params("κ factor must be positive".into()));
        }
        let n = n as u64;
        let kappa = (config.kappa_factor * ceil_log2(n as u128)).max(2) as usize;
        let seeds = (0..k)
            .map(|i| {
                let len = 2 * i + 1;
                let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
                rng.set_stream(len as u64);
                match config.mode {
                    OrderingMode::KWise => Seed::Poly(PolySeed::generate(n, len, kappa, &mut rng)),
                    OrderingMode::FullRandom => Seed::Keyed(KeyedSeed::new([rng.gen(), rng.gen()])),
                }
            })
            .collect();
        Ok(SeedSet {
            vertex_count: n,
            seeds,
        })
    }

    /// Seeds whose polynomials are identically zero: every rank collides and
    /// the order degenerates to canonical-key order.
    pub fn lexicographic(k: usize, n: usize) -> Result<Self, OrderingError> {
        let mut set = Self::init(k, n, 0)?;
        for seed in &mut set.seeds {
            if let Seed::Poly(s) = seed {
                let zeros = vec![0; s.coefficients.len()];
                *s = PolySeed::from_parts(s.kappa, s.modulus, s.radix, s.hashed, zeros)?;
            }
        }
        Ok(set)
    }

    /// Assembles a set from explicit per-phase seeds, index `i` ↔ phase `2i+1`.
    pub fn from_seeds(vertex_count: usize, seeds: Vec<Seed>) -> Result<Self, OrderingError> {
        if seeds.is_empty() {
            return Err(OrderingError::Params("at least one phase required".into()));
        }
        Ok(SeedSet {
            vertex_count: vertex_count as u64,
            seeds,
        })
    }

    pub fn k(&self) -> usize {
        self.seeds.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count as usize
    }

    /// Odd phases covered, ascending.
    pub fn phases(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.seeds.len()).map(|i| 2 * i + 1)
    }

    pub fn for_phase(&self, len: usize) -> Result<&Seed, OrderingError> {
        if len.is_multiple_of(2) {
            return Err(OrderingError::MissingPhase(len));
        }
        self.seeds
            .get(len / 2)
            .ok_or(OrderingError::MissingPhase(len))
    }

    pub fn stored_bits(&self) -> u64 {
        self.seeds.iter().map(Seed::stored_bits).sum()
    }

    pub fn to_blob(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(BLOB_MAGIC);
        out.push(BLOB_VERSION);
        out.extend_from_slice(&self.vertex_count.to_le_bytes());
        out.extend_from_slice(&(self.seeds.len() as u32).to_le_bytes());
        for seed in &self.seeds {
            match seed {
                Seed::Poly(s) => {
                    out.push(0);
                    out.extend_from_slice(&(s.kappa as u32).to_le_bytes());
                    out.extend_from_slice(&(s.copies as u32).to_le_bytes());
                    out.extend_from_slice(&s.modulus.to_le_bytes());
                    out.push(s.hashed as u8);
                    for c in &s.coefficients {
                        out.extend_from_slice(&c.to_le_bytes());
                    }
                }
                Seed::Keyed(s) => {
                    out.push(1);
                    out.extend_from_slice(&s.key[0].to_le_bytes());
                    out.extend_from_slice(&s.key[1].to_le_bytes());
                }
            }
        }
        out
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.to_blob())
    }

    pub fn from_hex(text: &str) -> Result<Self, OrderingError> {
        let bytes = hex::decode(text.trim()).map_err(|e| OrderingError::Blob(e.to_string()))?;
        Self::from_blob(&bytes)
    }

    /// Decodes and validates a blob; copy counts and moduli must match what
    /// the recorded vertex count implies.
    pub fn from_blob(bytes: &[u8]) -> Result<Self, OrderingError> {
        let mut r = Reader(bytes);
        if r.take(4)? != BLOB_MAGIC {
            return Err(OrderingError::Blob("bad magic".into()));
        }
        let version = r.u8()?;
        if version != BLOB_VERSION {
            return Err(OrderingError::Blob(format!(
                "unsupported version {version}"
            )));
        }
        let n = r.u64()?;
        if n < 2 {
            return Err(OrderingError::Blob("vertex count below 2".into()));
        }
        let phases = r.u32()? as usize;
        if phases == 0 {
            return Err(OrderingError::Blob("no phases".into()));
        }
        let mut seeds = Vec::with_capacity(phases);
        for i in 0..phases {
            let len = 2 * i + 1;
            let seed = match r.u8()? {
                0 => {
                    let kappa = r.u32()? as usize;
                    let copies = r.u32()? as usize;
                    let modulus = r.u64()?;
                    let hashed = r.u8()? != 0;
                    if (modulus, hashed) != PolySeed::modulus_for(n, len) {
                        return Err(OrderingError::Blob(format!(
                            "phase {len}: modulus {modulus} does not match vertex count {n}"
                        )));
                    }
                    if copies != 4 * domain_bits(n, len) as usize {
                        return Err(OrderingError::Blob(format!(
                            "phase {len}: {copies} copies, expected {}",
                            4 * domain_bits(n, len)
                        )));
                    }
                    let count = copies
                        .checked_mul(kappa)
                        .filter(|&c| c * 8 <= r.0.len())
                        .ok_or_else(|| OrderingError::Blob("truncated coefficients".into()))?;
                    let coefficients = (0..count).map(|_| r.u64()).collect::<Result<_, _>>()?;
                    let s = PolySeed::from_parts(kappa, modulus, n, hashed, coefficients)
                        .map_err(|e| OrderingError::Blob(e.to_string()))?;
                    Seed::Poly(s)
                }
                1 => Seed::Keyed(KeyedSeed::new([r.u64()?, r.u64()?])),
                t => return Err(OrderingError::Blob(format!("unknown seed tag {t}"))),
            };
            seeds.push(seed);
        }
        if !r.0.is_empty() {
            return Err(OrderingError::Blob("trailing bytes".into()));
        }
        Ok(SeedSet {
            vertex_count: n,
            seeds,
        })
    }
}

struct Reader<'a>(&'a [u8]);

impl<'a> Reader<'a> {
    fn take(&mut self, k: usize) -> Result<&'a [u8], OrderingError> {
        if self.0.len() < k {
            return Err(OrderingError::Blob("unexpected end of blob".into()));
        }
        let (head, tail) = self.0.split_at(k);
        self.0 = tail;
        Ok(head)
    }

    fn u8(&mut self) -> Result<u8, OrderingError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, OrderingError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, OrderingError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{named, Graph};
    use crate::paths::paths_through_edge;

    fn all_paths(g: &Graph, len: usize) -> Vec<PathKey> {
        let mut v: Vec<_> = g
            .edges()
            .iter()
            .flat_map(|&e| paths_through_edge(g, e, len).unwrap())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    #[test]
    fn structure() {
        let s = SeedSet::init(1, 2, 9).unwrap();
        assert_eq!(s.k(), 1);
        assert_eq!(s.phases().collect::<Vec<_>>(), vec![1]);
        let s = SeedSet::init(3, 50, 9).unwrap();
        assert_eq!(s.phases().collect::<Vec<_>>(), vec![1, 3, 5]);
        assert!(s.for_phase(7).is_err());
        assert!(s.for_phase(2).is_err());
        match s.for_phase(3).unwrap() {
            Seed::Poly(p) => {
                // 50^4 = 6_250_000 needs 23 bits.
                assert_eq!(p.copies(), 4 * 23);
                assert_eq!(p.kappa(), 4 * 6);
                assert_eq!(p.modulus(), field::next_prime_above(6_250_000));
                assert!(p.coefficients().iter().all(|&c| c < p.modulus()));
                assert!(!p.is_hashed());
            }
            _ => panic!("expected polynomial seed"),
        }
        assert_eq!(SeedSet::init(3, 50, 9).unwrap(), s);
        assert_ne!(SeedSet::init(3, 50, 10).unwrap(), s);
    }

    #[test]
    fn phase_seed_independent_of_k() {
        let a = SeedSet::init(2, 40, 5).unwrap();
        let b = SeedSet::init(3, 40, 5).unwrap();
        assert_eq!(a.for_phase(3).unwrap(), b.for_phase(3).unwrap());
    }

    #[test]
    fn large_domains_hash() {
        let (m, hashed) = PolySeed::modulus_for(1 << 14, 5);
        assert_eq!(m, MERSENNE_61);
        assert!(hashed);
        let (m, hashed) = PolySeed::modulus_for(1 << 14, 3);
        assert!(!hashed);
        assert!(m > 1 << 56);
        assert_eq!(domain_bits(1 << 14, 5), 84);
    }

    #[test]
    fn hand_evaluation() {
        let s = PolySeed::from_parts(2, 5, 5, false, vec![1, 1]).unwrap();
        assert_eq!(s.evaluate(0, 3), 4);
        assert_eq!(s.rank_of_encoding(3).words(), &[0]);
        assert_eq!(s.evaluate(0, 4), 0);
        assert_eq!(s.evaluate(0, 2), 3);
        assert_eq!(s.rank_of_encoding(2).words(), &[1 << 63]);
    }

    #[test]
    fn rejects_bad_parts() {
        assert!(PolySeed::from_parts(2, 9, 5, false, vec![1, 1]).is_err());
        assert!(PolySeed::from_parts(2, 5, 5, false, vec![1, 5]).is_err());
        assert!(PolySeed::from_parts(2, 5, 5, false, vec![1, 1, 1]).is_err());
    }

    #[test]
    fn encoding_is_injective_on_small_graph() {
        let g = named::petersen();
        let s = SeedSet::init(2, g.vertex_count(), 1).unwrap();
        let Seed::Poly(seed) = s.for_phase(3).unwrap() else {
            panic!()
        };
        let paths = all_paths(&g, 3);
        let mut codes: Vec<u64> = paths.iter().map(|p| seed.encode(p)).collect();
        codes.sort();
        codes.dedup();
        assert_eq!(codes.len(), paths.len());
        assert!(codes.iter().all(|&x| (x as u128) < 10u128.pow(4)));
    }

    #[test]
    fn zero_seed_ties_break_by_key() {
        let g = named::path(4);
        let s = SeedSet::lexicographic(1, 4).unwrap();
        let seed = s.for_phase(1).unwrap();
        let a = PathKey::canonical(&g, &[0, 1]).unwrap();
        let b = PathKey::canonical(&g, &[2, 3]).unwrap();
        assert_eq!(seed.rank(&a), seed.rank(&b));
        assert!(seed.precedes(&a, &b).unwrap());
        assert!(!seed.precedes(&b, &a).unwrap());
        assert_eq!(seed.precedes(&a, &a), Err(OrderingError::SamePath));
    }

    #[test]
    fn precedes_is_total_and_transitive() {
        let g = Graph::random_bounded(30, 3, 4);
        for mode in [OrderingMode::KWise, OrderingMode::FullRandom] {
            let config = SeedConfig {
                mode,
                ..Default::default()
            };
            let s = SeedSet::generate(2, 30, 77, config).unwrap();
            let seed = s.for_phase(3).unwrap();
            let paths = all_paths(&g, 3);
            let sample: Vec<_> = paths.iter().step_by(7).take(25).collect();
            for p in &sample {
                for q in &sample {
                    if p != q {
                        assert!(seed.precedes(p, q).unwrap() ^ seed.precedes(q, p).unwrap());
                    }
                }
            }
            for a in &sample {
                for b in &sample {
                    for c in &sample {
                        if a != b
                            && b != c
                            && a != c
                            && seed.precedes(a, b).unwrap()
                            && seed.precedes(b, c).unwrap()
                        {
                            assert!(seed.precedes(a, c).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn blob_round_trip() {
        for mode in [OrderingMode::KWise, OrderingMode::FullRandom] {
            let config = SeedConfig {
                mode,
                kappa_factor: 2,
            };
            let s = SeedSet::generate(3, 20, 3, config).unwrap();
            let hex = s.to_hex();
            assert_eq!(SeedSet::from_hex(&hex).unwrap(), s);
        }
    }

    #[test]
    fn blob_rejects_corruption() {
        let s = SeedSet::init(2, 20, 3).unwrap();
        let blob = s.to_blob();
        assert!(SeedSet::from_blob(&blob[..blob.len() - 1]).is_err());
        let mut extra = blob.clone();
        extra.push(0);
        assert!(SeedSet::from_blob(&extra).is_err());
        let mut bad_magic = blob.clone();
        bad_magic[0] = b'X';
        assert!(SeedSet::from_blob(&bad_magic).is_err());
        // Changing the vertex count invalidates the recorded modulus.
        let mut other_n = blob.clone();
        other_n[5] = 21;
        assert!(SeedSet::from_blob(&other_n).is_err());
        assert!(SeedSet::from_hex("zz").is_err());
    }

    #[test]
    fn stored_size_is_compact() {
        let s = SeedSet::init(2, 1 << 10, 0).unwrap();
        // κ = 40 coefficients per copy, 80 + 160 copies, 21- and 41-bit moduli.
        assert_eq!(s.stored_bits(), 40 * (80 * 21 + 160 * 41));
    }
}
