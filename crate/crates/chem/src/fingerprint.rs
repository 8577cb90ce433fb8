//! Circular (Morgan) fingerprints and Tanimoto similarity.
//!
//! Identifiers are 64-bit FNV-1a hashes over a fixed byte layout, so
//! fingerprints are bit-exact across platforms and runs:
//!
//! - round 0 hashes `[0x00, atomic_number as u16 LE, degree u8, total_h u8,
//!   formal_charge as u8, flags u8]` where flags bit0 = in_ring and
//!   bit1 = aromatic;
//! - round r > 0 hashes `[0x01, own_id u64 LE]` followed by the sorted list
//!   of `[bond_code u8, neighbor_id u64 LE]` pairs (bond codes: 1 single,
//!   2 double, 3 triple, 4 aromatic);
//! - an atom with no neighbors keeps its identifier across rounds.
//!
//! Every identifier from every round sets bit `id % n_bits`.

use crate::molecule::Molecule;
use serde::{Deserialize, Serialize};
use thiserror::Error;

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FingerprintConfig {
    pub radius: u32,
    pub n_bits: u32,
}

impl Default for FingerprintConfig {
    fn default() -> Self {
        FingerprintConfig { radius: 2, n_bits: 1024 }
    }
}

impl FingerprintConfig {
    pub fn validate(&self) -> Result<(), FingerprintError> {
        if self.n_bits == 0 || !self.n_bits.is_power_of_two() {
            return Err(FingerprintError::InvalidWidth(self.n_bits));
        }
        Ok(())
    }

    pub fn blocks(&self) -> usize {
        (self.n_bits as usize).div_ceil(64)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FingerprintError {
    #[error("fingerprint width {0} is not a positive power of two")]
    InvalidWidth(u32),
    #[error("fingerprint lengths differ: {0} vs {1}")]
    LengthMismatch(u32, u32),
}

/// Fixed-width binary feature vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    n_bits: u32,
    blocks: Vec<u64>,
}

impl Fingerprint {
    pub fn empty(n_bits: u32) -> Fingerprint {
        Fingerprint {
            n_bits,
            blocks: vec![0; (n_bits as usize).div_ceil(64)],
        }
    }

    pub fn n_bits(&self) -> u32 {
        self.n_bits
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn set_bit(&mut self, i: u32) {
        self.blocks[(i / 64) as usize] |= 1u64 << (i % 64);
    }

    pub fn get_bit(&self, i: u32) -> bool {
        (self.blocks[(i / 64) as usize] >> (i % 64)) & 1 == 1
    }

    pub fn popcount(&self) -> u32 {
        self.blocks.iter().map(|b| b.count_ones()).sum()
    }

    pub fn set_bits(&self) -> Vec<u32> {
        (0..self.n_bits).filter(|&i| self.get_bit(i)).collect()
    }

    pub fn from_set_bits(n_bits: u32, bits: &[u32]) -> Fingerprint {
        let mut fp = Fingerprint::empty(n_bits);
        for &b in bits {
            fp.set_bit(b % n_bits);
        }
        fp
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = FNV_OFFSET;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

fn initial_identifier(mol: &Molecule, i: usize) -> u64 {
    let a = mol.atom(i);
    let num = a.element.atomic_number() as u16;
    let flags = (a.in_ring as u8) | ((a.aromatic as u8) << 1);
    let bytes = [
        0x00,
        (num & 0xff) as u8,
        (num >> 8) as u8,
        mol.degree(i) as u8,
        a.total_h(),
        a.formal_charge as u8,
        flags,
    ];
    fnv1a(&bytes)
}

fn bond_code(mol: &Molecule, bond_idx: usize) -> u8 {
    let b = &mol.bonds()[bond_idx];
    if b.is_aromatic() {
        4
    } else {
        b.kekule
    }
}

/// All environment identifiers for rounds `0..=radius`, flattened per round
/// then per atom. Exposed for fragment-frequency scoring.
pub fn morgan_identifiers(mol: &Molecule, radius: u32) -> Vec<u64> {
    let n = mol.num_atoms();
    let mut ids: Vec<u64> = (0..n).map(|i| initial_identifier(mol, i)).collect();
    let mut all = ids.clone();
    let mut next = vec![0u64; n];
    for _round in 1..=radius {
        for i in 0..n {
            if mol.degree(i) == 0 {
                next[i] = ids[i];
                continue;
            }
            let mut pairs: Vec<(u8, u64)> = mol
                .neighbors(i)
                .iter()
                .map(|&(nb, bi)| (bond_code(mol, bi), ids[nb]))
                .collect();
            pairs.sort_unstable();
            let mut bytes = Vec::with_capacity(9 + pairs.len() * 9);
            bytes.push(0x01);
            bytes.extend_from_slice(&ids[i].to_le_bytes());
            for (code, id) in &pairs {
                bytes.push(*code);
                bytes.extend_from_slice(&id.to_le_bytes());
            }
            next[i] = fnv1a(&bytes);
        }
        std::mem::swap(&mut ids, &mut next);
        all.extend_from_slice(&ids);
    }
    all
}

/// Morgan circular fingerprint folded to `cfg.n_bits`.
pub fn morgan_fingerprint(mol: &Molecule, cfg: &FingerprintConfig) -> Fingerprint {
    let mut fp = Fingerprint::empty(cfg.n_bits);
    for id in morgan_identifiers(mol, cfg.radius) {
        fp.set_bit((id % cfg.n_bits as u64) as u32);
    }
    fp
}

/// Reusable buffers for allocation-free bulk fingerprinting.
#[derive(Default)]
pub struct MorganScratch {
    ids: Vec<u64>,
    next: Vec<u64>,
    pairs: Vec<(u8, u64)>,
    bytes: Vec<u8>,
}

/// Fill `blocks` (already sized to `cfg.blocks()`, will be zeroed) with the
/// fingerprint of `mol`, reusing `scratch` across calls. Produces exactly the
/// bits of [`morgan_fingerprint`].
pub fn morgan_fill(mol: &Molecule, cfg: &FingerprintConfig, scratch: &mut MorganScratch, blocks: &mut [u64]) {
    blocks.fill(0);
    let n = mol.num_atoms();
    let n_bits = cfg.n_bits as u64;
    let mut set = |id: u64| {
        let bit = (id % n_bits) as usize;
        blocks[bit / 64] |= 1u64 << (bit % 64);
    };
    scratch.ids.clear();
    scratch.ids.extend((0..n).map(|i| initial_identifier(mol, i)));
    for &id in &scratch.ids {
        set(id);
    }
    scratch.next.resize(n, 0);
    for _round in 1..=cfg.radius {
        for i in 0..n {
            if mol.degree(i) == 0 {
                scratch.next[i] = scratch.ids[i];
                continue;
            }
            scratch.pairs.clear();
            scratch
                .pairs
                .extend(mol.neighbors(i).iter().map(|&(nb, bi)| (bond_code(mol, bi), scratch.ids[nb])));
            scratch.pairs.sort_unstable();
            scratch.bytes.clear();
            scratch.bytes.push(0x01);
            scratch.bytes.extend_from_slice(&scratch.ids[i].to_le_bytes());
            for (code, id) in &scratch.pairs {
                scratch.bytes.push(*code);
                scratch.bytes.extend_from_slice(&id.to_le_bytes());
            }
            scratch.next[i] = fnv1a(&scratch.bytes);
        }
        std::mem::swap(&mut scratch.ids, &mut scratch.next);
        for &id in &scratch.ids {
            set(id);
        }
    }
}

/// Tanimoto similarity |a and b| / |a or b|; 1.0 when both are empty.
pub fn tanimoto(a: &Fingerprint, b: &Fingerprint) -> Result<f64, FingerprintError> {
    if a.n_bits != b.n_bits {
        return Err(FingerprintError::LengthMismatch(a.n_bits, b.n_bits));
    }
    let mut inter = 0u32;
    let mut union = 0u32;
    for (x, y) in a.blocks.iter().zip(&b.blocks) {
        inter += (x & y).count_ones();
        union += (x | y).count_ones();
    }
    if union == 0 {
        Ok(1.0)
    } else {
        Ok(inter as f64 / union as f64)
    }
}

/// Exact maximum Tanimoto similarity of `query` against a non-empty
/// reference set. Popcount bounds prune references that cannot beat the
/// running maximum; the result equals the full scan.
pub fn max_similarity_to_set(query: &Fingerprint, refs: &[Fingerprint]) -> Result<f64, FingerprintError> {
    let q = query.popcount();
    let mut best = 0.0f64;
    let mut checked_any = false;
    for r in refs {
        if r.n_bits != query.n_bits {
            return Err(FingerprintError::LengthMismatch(query.n_bits, r.n_bits));
        }
        let p = r.popcount();
        if q == 0 && p == 0 {
            return Ok(1.0);
        }
        let bound = q.min(p) as f64 / q.max(p).max(1) as f64;
        if checked_any && bound <= best {
            continue;
        }
        let sim = tanimoto(query, r)?;
        if sim > best || !checked_any {
            best = sim;
        }
        checked_any = true;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::parse_smiles;

    fn fp(s: &str) -> Fingerprint {
        morgan_fingerprint(&parse_smiles(s).unwrap(), &FingerprintConfig::default())
    }

    #[test]
    fn methane_sets_exactly_one_bit() {
        assert_eq!(fp("C").popcount(), 1);
    }

    #[test]
    fn input_order_invariance() {
        assert_eq!(fp("OCC"), fp("CCO"));
        assert_eq!(fp("c1ccccc1O"), fp("Oc1ccccc1"));
    }

    #[test]
    fn different_molecules_differ() {
        assert_ne!(fp("CCO"), fp("CCN"));
    }

    #[test]
    fn tanimoto_worked_example() {
        let a = Fingerprint::from_set_bits(1024, &[1, 2, 3]);
        let b = Fingerprint::from_set_bits(1024, &[2, 3, 4]);
        assert_eq!(tanimoto(&a, &b).unwrap(), 0.5);
    }

    #[test]
    fn tanimoto_bounds_and_identity() {
        let a = fp("CC(=O)Oc1ccccc1C(=O)O");
        assert_eq!(tanimoto(&a, &a).unwrap(), 1.0);
        let empty = Fingerprint::empty(1024);
        assert_eq!(tanimoto(&empty, &empty).unwrap(), 1.0);
        let b = fp("CCCCCC");
        let t = tanimoto(&a, &b).unwrap();
        assert!((0.0..=1.0).contains(&t));
        assert_eq!(t, tanimoto(&b, &a).unwrap());
    }

    #[test]
    fn length_mismatch_detected() {
        let a = Fingerprint::empty(1024);
        let b = Fingerprint::empty(512);
        assert!(tanimoto(&a, &b).is_err());
    }

    #[test]
    fn max_similarity_matches_scan() {
        let refs: Vec<Fingerprint> = ["CCO", "CCN", "c1ccccc1", "CC(=O)O", "CCCC"].iter().map(|s| fp(s)).collect();
        let query = fp("CCO");
        assert_eq!(max_similarity_to_set(&query, &refs).unwrap(), 1.0);
        let query = fp("ClCCl");
        let naive = refs
            .iter()
            .map(|r| tanimoto(&query, r).unwrap())
            .fold(0.0f64, f64::max);
        assert_eq!(max_similarity_to_set(&query, &refs).unwrap(), naive);
    }

    #[test]
    fn fill_matches_public_path() {
        let cfg = FingerprintConfig::default();
        let mut scratch = MorganScratch::default();
        let mut blocks = vec![0u64; cfg.blocks()];
        for s in ["C", "CC(=O)Oc1ccccc1C(=O)O", "C1CC2(CC1)CCC2", "[NH4+]"] {
            let m = parse_smiles(s).unwrap();
            morgan_fill(&m, &cfg, &mut scratch, &mut blocks);
            assert_eq!(blocks, morgan_fingerprint(&m, &cfg).blocks(), "{s}");
        }
    }
}
