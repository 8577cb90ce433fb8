//! Synthetic-accessibility scoring: corpus fragment frequencies combined
//! with structural complexity penalties, mapped to the unit interval where
//! higher means easier to make.

use crate::fingerprint::morgan_identifiers;
use crate::molecule::Molecule;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

/// Environment radius used for fragment counting.
const FRAGMENT_RADIUS: u32 = 2;
/// Fragment scores are log10 frequencies relative to the 80th-percentile
/// fragment, clamped to this symmetric range.
const SCORE_CLAMP: f64 = 4.0;
/// Raw-score window mapped onto the canonical [1, 10] difficulty scale.
const RAW_LOW: f64 = -4.0;
const RAW_HIGH: f64 = 2.5;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SaScoreError {
    #[error("fragment table requires a non-empty corpus")]
    EmptyCorpus,
    #[error("fragment table file is malformed: {0}")]
    Malformed(String),
}

/// Fragment-frequency score table keyed by Morgan environment identifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FragmentScoreTable {
    pub format_version: u32,
    pub default_score: f64,
    /// Identifier -> log-frequency score; BTreeMap keeps serialization
    /// byte-stable for a given corpus.
    pub scores: BTreeMap<u64, f64>,
}

/// Count radius 0..=2 environments across the corpus and score each
/// fragment as log10(count / count of the 80th-percentile fragment),
/// clamped to [-4, 4]. Unseen fragments score -4.
pub fn build_fragment_table(corpus: &[Molecule]) -> Result<FragmentScoreTable, SaScoreError> {
    if corpus.is_empty() {
        return Err(SaScoreError::EmptyCorpus);
    }
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for mol in corpus {
        for id in morgan_identifiers(mol, FRAGMENT_RADIUS) {
            *counts.entry(id).or_insert(0) += 1;
        }
    }
    let mut sorted: Vec<u64> = counts.values().copied().collect();
    sorted.sort_unstable();
    // Nearest-rank 80th percentile of the per-fragment counts.
    let rank = ((0.8 * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    let reference = sorted[rank - 1].max(1) as f64;

    let scores = counts
        .into_iter()
        .map(|(id, c)| (id, log_ratio_score(c, reference)))
        .collect();
    Ok(FragmentScoreTable {
        format_version: 1,
        default_score: -SCORE_CLAMP,
        scores,
    })
}

/// Kept out of line so every caller shares one compiled code path: the
/// serialized table must be byte-identical across rebuilds, and inlined
/// copies of `log10` have been observed to differ by one ulp between call
/// sites.
#[inline(never)]
fn log_ratio_score(count: u64, reference: f64) -> f64 {
    (count as f64 / reference).log10().clamp(-SCORE_CLAMP, SCORE_CLAMP)
}

impl FragmentScoreTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<FragmentScoreTable, SaScoreError> {
        serde_json::from_str(text).map_err(|e| SaScoreError::Malformed(e.to_string()))
    }
}

/// Structural complexity terms, exposed for inspection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaBreakdown {
    pub fragment_mean: f64,
    pub size_penalty: f64,
    pub ring_complexity_penalty: f64,
    pub macrocycle_penalty: f64,
    pub stereo_penalty: f64,
    pub raw: f64,
    pub scale_1_to_10: f64,
    pub score: f64,
}

pub fn sa_score(mol: &Molecule, table: &FragmentScoreTable) -> f64 {
    sa_breakdown(mol, table).score
}

pub fn sa_breakdown(mol: &Molecule, table: &FragmentScoreTable) -> SaBreakdown {
    let ids = morgan_identifiers(mol, FRAGMENT_RADIUS);
    let fragment_mean = if ids.is_empty() {
        table.default_score
    } else {
        ids.iter()
            .map(|id| table.scores.get(id).copied().unwrap_or(table.default_score))
            .sum::<f64>()
            / ids.len() as f64
    };

    let heavy = mol.heavy_atom_count() as f64;
    let size_penalty = heavy.powf(1.005) - heavy;

    let (spiro, bridgeheads) = spiro_and_bridgehead_counts(mol);
    let ring_complexity_penalty = ((spiro + bridgeheads) as f64 + 1.0).log10();

    let macrocycles = mol.rings().iter().filter(|r| r.len() > 8).count();
    let macrocycle_penalty = (macrocycles as f64 + 1.0).log10();

    let stereo_penalty = (mol.stereo_mark_count() as f64 + 1.0).log10();

    let raw = fragment_mean - size_penalty - ring_complexity_penalty - macrocycle_penalty - stereo_penalty;
    let unit = (raw - RAW_LOW) / (RAW_HIGH - RAW_LOW);
    let scale_1_to_10 = (11.0 - unit * 9.0).clamp(1.0, 10.0);
    let score = (10.0 - scale_1_to_10) / 9.0;

    SaBreakdown {
        fragment_mean,
        size_penalty,
        ring_complexity_penalty,
        macrocycle_penalty,
        stereo_penalty,
        raw,
        scale_1_to_10,
        score,
    }
}

/// Spiro atoms: shared by two rings whose intersection is exactly that atom.
/// Bridgeheads: ends of a multi-bond path shared by two rings.
fn spiro_and_bridgehead_counts(mol: &Molecule) -> (usize, usize) {
    let rings = mol.rings();
    let mut spiro = std::collections::BTreeSet::new();
    let mut bridge = std::collections::BTreeSet::new();
    for i in 0..rings.len() {
        for j in (i + 1)..rings.len() {
            let set_i: std::collections::BTreeSet<usize> = rings[i].iter().copied().collect();
            let shared: Vec<usize> = rings[j].iter().copied().filter(|a| set_i.contains(a)).collect();
            if shared.len() == 1 {
                spiro.insert(shared[0]);
            } else if shared.len() >= 3 {
                // Shared path of >= 2 bonds: its two ends are bridgeheads.
                let ring_bonds = |ring: &[usize]| -> std::collections::BTreeSet<(usize, usize)> {
                    ring.iter()
                        .zip(ring.iter().cycle().skip(1))
                        .take(ring.len())
                        .map(|(&a, &b)| (a.min(b), a.max(b)))
                        .collect()
                };
                let shared_bonds: Vec<(usize, usize)> = ring_bonds(&rings[i])
                    .intersection(&ring_bonds(&rings[j]))
                    .copied()
                    .collect();
                if shared_bonds.len() >= 2 {
                    for &a in &shared {
                        let incident = shared_bonds.iter().filter(|&&(x, y)| x == a || y == a).count();
                        if incident == 1 {
                            bridge.insert(a);
                        }
                    }
                }
            }
        }
    }
    for a in &spiro {
        bridge.remove(a);
    }
    (spiro.len(), bridge.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::parse_smiles;

    #[test]
    fn uniform_corpus_scores_zero() {
        let corpus: Vec<Molecule> = (0..1000).map(|_| parse_smiles("C").unwrap()).collect();
        let table = build_fragment_table(&corpus).unwrap();
        assert_eq!(table.scores.len(), 1);
        assert_eq!(*table.scores.values().next().unwrap(), 0.0);
    }

    #[test]
    fn empty_corpus_rejected() {
        assert_eq!(build_fragment_table(&[]).unwrap_err(), SaScoreError::EmptyCorpus);
    }

    #[test]
    fn rebuild_is_byte_identical() {
        let corpus: Vec<Molecule> = ["CCO", "c1ccccc1", "CC(=O)O", "CCN"]
            .iter()
            .map(|s| parse_smiles(s).unwrap())
            .collect();
        let a = build_fragment_table(&corpus).unwrap().to_json();
        let b = build_fragment_table(&corpus).unwrap().to_json();
        assert_eq!(a, b);
        let parsed = FragmentScoreTable::from_json(&a).unwrap();
        assert_eq!(parsed.to_json(), a);
    }

    #[test]
    fn scores_stay_in_unit_interval() {
        let corpus: Vec<Molecule> = ["CCO", "c1ccccc1", "CC(=O)O", "C1CCCCC1"]
            .iter()
            .map(|s| parse_smiles(s).unwrap())
            .collect();
        let table = build_fragment_table(&corpus).unwrap();
        for s in ["C", "CCCCCC", "C1CCCCCCCCCCC1", "c1ccccc1C(N)C(=O)O"] {
            let v = sa_score(&parse_smiles(s).unwrap(), &table);
            assert!((0.0..=1.0).contains(&v), "{s} -> {v}");
        }
    }

    #[test]
    fn macrocycle_with_stereo_scores_below_hexane() {
        // A corpus where both chain and large-ring environments are common,
        // so the fragment terms of the two probes stay comparable and the
        // structural penalties decide the ordering.
        let mut sources: Vec<String> = (4..=18).map(|n| "C".repeat(n)).collect();
        for n in [12usize, 14, 16, 18] {
            sources.push(format!("C1{}1", "C".repeat(n - 1)));
        }
        let corpus: Vec<Molecule> = sources.iter().map(|s| parse_smiles(s).unwrap()).collect();
        let table = build_fragment_table(&corpus).unwrap();

        let hexane = sa_breakdown(&parse_smiles("CCCCCC").unwrap(), &table);
        // 16-membered macrocycle carrying four stereo markers.
        let macro_mol = parse_smiles("C1CCCCC[C@H](C)[C@H](C)CCCC[C@H](C)[C@H](C)C1").unwrap();
        let macro_bd = sa_breakdown(&macro_mol, &table);

        assert!(macro_bd.macrocycle_penalty > 0.0);
        assert!((macro_bd.stereo_penalty - (5.0f64).log10()).abs() < 1e-12);
        assert!(macro_bd.size_penalty > hexane.size_penalty);
        assert!(macro_bd.score < hexane.score, "{} vs {}", macro_bd.score, hexane.score);
    }

    #[test]
    fn stereo_marks_never_raise_the_score() {
        let corpus: Vec<Molecule> = ["CC(N)C(=O)O"].iter().map(|s| parse_smiles(s).unwrap()).collect();
        let table = build_fragment_table(&corpus).unwrap();
        let plain = sa_score(&parse_smiles("CC(N)C(=O)O").unwrap(), &table);
        let marked = sa_score(&parse_smiles("C[C@H](N)C(=O)O").unwrap(), &table);
        assert!(marked < plain);
    }

    #[test]
    fn spiro_and_bridgehead_detection() {
        let spiro = parse_smiles("C1CC2(CC1)CCC2").unwrap();
        assert_eq!(spiro_and_bridgehead_counts(&spiro), (1, 0));
        let bicyclo = parse_smiles("C1CC2CCC1CC2").unwrap();
        let (s, b) = spiro_and_bridgehead_counts(&bicyclo);
        assert_eq!(s, 0);
        assert_eq!(b, 2);
        let naphthalene = parse_smiles("c1ccc2ccccc2c1").unwrap();
        assert_eq!(spiro_and_bridgehead_counts(&naphthalene), (0, 0));
    }

    #[test]
    fn deterministic_scoring() {
        let corpus: Vec<Molecule> = ["CCO", "CCC"].iter().map(|s| parse_smiles(s).unwrap()).collect();
        let table = build_fragment_table(&corpus).unwrap();
        let m = parse_smiles("CCOC").unwrap();
        assert_eq!(sa_score(&m, &table), sa_score(&m, &table));
    }
}
