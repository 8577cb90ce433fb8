//! Seeded generation of valid random molecules, structural analogs, and an
//! independent graph-isomorphism oracle. Everything here is driven by
//! explicit RNGs so corpora are reproducible across runs and platforms.

use chem::molecule::{AtomSpec, BondSpec, ImplicitH};
use chem::{BondOrder, Element, Molecule};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub min_heavy: usize,
    pub max_heavy: usize,
    /// Probability of decorating the skeleton with an aromatic six-ring.
    pub aromatic_prob: f64,
    /// Probability that a generated tree bond is upgraded to a double bond.
    pub double_bond_prob: f64,
    pub triple_bond_prob: f64,
    /// Expected number of extra ring-closing bonds.
    pub ring_closures: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            min_heavy: 1,
            max_heavy: 24,
            aromatic_prob: 0.4,
            double_bond_prob: 0.12,
            triple_bond_prob: 0.02,
            ring_closures: 2,
        }
    }
}

/// Element choices with sampling weights; all have a defined valence model.
const ELEMENT_WEIGHTS: [(Element, u32); 10] = [
    (Element::C, 620),
    (Element::N, 120),
    (Element::O, 120),
    (Element::S, 50),
    (Element::F, 30),
    (Element::Cl, 30),
    (Element::Br, 15),
    (Element::P, 8),
    (Element::I, 5),
    (Element::Si, 2),
];

fn max_valence(e: Element) -> u32 {
    e.allowed_valences(0)
        .map(|vs| vs.into_iter().max().unwrap_or(0) as u32)
        .unwrap_or(0)
}

/// Sample one valid molecule: a random tree skeleton with occasional higher
/// bond orders, ring closures, and aromatic six-ring decoration.
pub fn random_molecule(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Molecule {
    let n = rng.gen_range(cfg.min_heavy..=cfg.max_heavy.max(cfg.min_heavy));
    let mut bond_sum = vec![0u32; n];
    let mut bonds: Vec<(usize, usize, u8)> = Vec::new();
    let mut adjacent = std::collections::HashSet::new();

    // Spanning tree; parents capped at three existing bonds so every atom
    // can still host a carbon.
    for i in 1..n {
        let candidates: Vec<usize> = (0..i).filter(|&p| bond_sum[p] < 3).collect();
        let parent = *candidates.choose(rng).unwrap_or(&(i - 1));
        let mut order = 1u8;
        if bond_sum[parent] <= 1 && rng.gen_bool(cfg.triple_bond_prob) {
            order = 3;
        } else if bond_sum[parent] <= 2 && rng.gen_bool(cfg.double_bond_prob) {
            order = 2;
        }
        bond_sum[parent] += order as u32;
        bond_sum[i] += order as u32;
        bonds.push((parent, i, order));
        adjacent.insert((parent.min(i), parent.max(i)));
    }

    // Ring closures between non-adjacent atoms with spare valence.
    for _ in 0..cfg.ring_closures {
        if n < 4 || rng.gen_bool(0.5) {
            continue;
        }
        let open: Vec<usize> = (0..n).filter(|&i| bond_sum[i] < 3).collect();
        if open.len() < 2 {
            continue;
        }
        let a = open[rng.gen_range(0..open.len())];
        let b = open[rng.gen_range(0..open.len())];
        let key = (a.min(b), a.max(b));
        if a == b || adjacent.contains(&key) {
            continue;
        }
        adjacent.insert(key);
        bond_sum[a] += 1;
        bond_sum[b] += 1;
        bonds.push((a, b, 1));
    }

    // Elements drawn to fit each atom's accumulated bond order.
    let mut specs: Vec<AtomSpec> = (0..n)
        .map(|i| {
            let viable: Vec<(Element, u32)> = ELEMENT_WEIGHTS
                .iter()
                .copied()
                .filter(|&(e, _)| max_valence(e) >= bond_sum[i].max(1))
                .collect();
            let total: u32 = viable.iter().map(|&(_, w)| w).sum();
            let mut pick = rng.gen_range(0..total);
            let mut element = Element::C;
            for (e, w) in viable {
                if pick < w {
                    element = e;
                    break;
                }
                pick -= w;
            }
            AtomSpec::organic(element)
        })
        .collect();
    let mut bond_specs: Vec<BondSpec> = bonds
        .iter()
        .map(|&(a, b, o)| {
            let order = match o {
                2 => BondOrder::Double,
                3 => BondOrder::Triple,
                _ => BondOrder::Single,
            };
            BondSpec::new(a, b, order)
        })
        .collect();

    // Aromatic decoration: a fused-free six-ring hung off an atom with a
    // spare valence slot.
    if rng.gen_bool(cfg.aromatic_prob) {
        let hosts: Vec<usize> = (0..n).filter(|&i| bond_sum[i] < max_valence(specs[i].element)).collect();
        if let Some(&host) = hosts.as_slice().choose(rng) {
            let base = specs.len();
            let hetero = rng.gen_range(0..10);
            for k in 0..6 {
                let element = if k == 0 && hetero < 4 { Element::N } else { Element::C };
                specs.push(AtomSpec::aromatic(element));
            }
            for k in 0..6 {
                bond_specs.push(BondSpec::new(base + k, base + (k + 1) % 6, BondOrder::Aromatic));
            }
            // Slot 0 may be a pyridine-type nitrogen, which cannot take a
            // substituent; attach to one of the carbons.
            let attach = base + rng.gen_range(1..6);
            bond_specs.push(BondSpec::new(host, attach, BondOrder::Single));
        }
    }

    Molecule::from_parts(specs, bond_specs).expect("generated skeleton is valence-valid")
}

/// Deterministic corpus of `n` molecules.
pub fn random_corpus(seed: u64, n: usize, cfg: &GenConfig) -> Vec<Molecule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_molecule(&mut rng, cfg)).collect()
}

/// A close structural analog: one or two small edits (append a terminal
/// atom, drop a terminal atom, or swap a terminal element).
pub fn random_analog(rng: &mut ChaCha8Rng, mol: &Molecule) -> Molecule {
    let edits = 1 + rng.gen_range(0..2);
    let mut current = mol.clone();
    for _ in 0..edits {
        if let Some(next) = try_edit(rng, &current) {
            current = next;
        }
    }
    current
}

fn try_edit(rng: &mut ChaCha8Rng, mol: &Molecule) -> Option<Molecule> {
    for _attempt in 0..8 {
        let (mut specs, mut bonds) = mol.to_specs(true);
        let choice = rng.gen_range(0..3);
        let ok = match choice {
            0 => {
                // Append a terminal atom somewhere with spare valence.
                let hosts: Vec<usize> = (0..mol.num_atoms()).filter(|&i| mol.atom(i).implicit_h >= 1).collect();
                match hosts.as_slice().choose(rng) {
                    Some(&host) => {
                        let element = *[Element::C, Element::N, Element::O].choose(rng).unwrap();
                        specs.push(AtomSpec::organic(element));
                        bonds.push(BondSpec::new(host, specs.len() - 1, BondOrder::Single));
                        true
                    }
                    None => false,
                }
            }
            1 => {
                // Remove a terminal heavy atom.
                let terminals: Vec<usize> = (0..mol.num_atoms())
                    .filter(|&i| mol.degree(i) == 1 && !mol.atom(i).aromatic && mol.num_atoms() > 4)
                    .collect();
                match terminals.as_slice().choose(rng) {
                    Some(&victim) => {
                        bonds.retain(|b| b.a != victim && b.b != victim);
                        specs.remove(victim);
                        for b in bonds.iter_mut() {
                            if b.a > victim {
                                b.a -= 1;
                            }
                            if b.b > victim {
                                b.b -= 1;
                            }
                        }
                        true
                    }
                    None => false,
                }
            }
            _ => {
                // Swap the element of a terminal atom.
                let terminals: Vec<usize> = (0..mol.num_atoms())
                    .filter(|&i| mol.degree(i) <= 1 && !mol.atom(i).aromatic)
                    .collect();
                match terminals.as_slice().choose(rng) {
                    Some(&target) => {
                        let element = *[Element::C, Element::N, Element::O, Element::Cl].choose(rng).unwrap();
                        specs[target].element = element;
                        true
                    }
                    None => false,
                }
            }
        };
        if !ok {
            continue;
        }
        if let Ok(m) = Molecule::from_parts(specs, bonds) {
            return Some(m);
        }
    }
    None
}

/// Rebuild with a random atom permutation; the graph is unchanged.
pub fn permuted(mol: &Molecule, rng: &mut ChaCha8Rng) -> Molecule {
    let n = mol.num_atoms();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    // order[new] = old
    let mut new_of_old = vec![0usize; n];
    for (new, &old) in order.iter().enumerate() {
        new_of_old[old] = new;
    }
    let (specs, bonds) = mol.to_specs(false);
    let mut new_specs: Vec<AtomSpec> = (0..n).map(|new| specs[order[new]].clone()).collect();
    for spec in new_specs.iter_mut() {
        // Keep hydrogen counts exactly as stored.
        if let ImplicitH::Derive = spec.implicit {
            spec.implicit = ImplicitH::Fixed(0);
        }
    }
    let new_bonds: Vec<BondSpec> = bonds
        .iter()
        .map(|b| BondSpec::new(new_of_old[b.a], new_of_old[b.b], b.order))
        .collect();
    Molecule::from_parts(new_specs, new_bonds).expect("permutation preserves validity")
}

/// Independent graph-isomorphism oracle: Weisfeiler-Lehman color refinement
/// for pruning, then backtracking search for an exact mapping. Kept separate
/// from the canonical-ranking code it is used to check.
pub fn graph_isomorphic(a: &Molecule, b: &Molecule) -> bool {
    if a.num_atoms() != b.num_atoms() || a.bonds().len() != b.bonds().len() {
        return false;
    }
    let ca = wl_colors(a);
    let cb = wl_colors(b);
    let mut sa = ca.clone();
    let mut sb = cb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return false;
    }

    let n = a.num_atoms();
    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    // Match in order of rarest color first.
    let mut order: Vec<usize> = (0..n).collect();
    let mut freq = std::collections::HashMap::new();
    for &c in &ca {
        *freq.entry(c).or_insert(0usize) += 1;
    }
    order.sort_by_key(|&i| (freq[&ca[i]], ca[i], i));
    backtrack(a, b, &ca, &cb, &order, 0, &mut mapping, &mut used)
}

fn bond_class(bond: &chem::Bond) -> u8 {
    if bond.is_aromatic() {
        4
    } else {
        bond.kekule
    }
}

fn wl_colors(mol: &Molecule) -> Vec<u64> {
    let n = mol.num_atoms();
    let mut colors: Vec<u64> = (0..n)
        .map(|i| {
            let a = mol.atom(i);
            let mut h = 1469598103934665603u64;
            for v in [
                a.element.atomic_number() as u64,
                a.formal_charge as u8 as u64,
                a.total_h() as u64,
                a.aromatic as u64,
                a.isotope.unwrap_or(0) as u64,
                mol.degree(i) as u64,
            ] {
                h ^= v;
                h = h.wrapping_mul(1099511628211);
            }
            h
        })
        .collect();
    for _ in 0..n.min(8) {
        let mut next = vec![0u64; n];
        for i in 0..n {
            let mut nb: Vec<u64> = mol
                .neighbors(i)
                .iter()
                .map(|&(v, bi)| colors[v].wrapping_mul(31).wrapping_add(bond_class(&mol.bonds()[bi]) as u64))
                .collect();
            nb.sort_unstable();
            let mut h = colors[i];
            for v in nb {
                h ^= v;
                h = h.wrapping_mul(1099511628211);
            }
            next[i] = h;
        }
        colors = next;
    }
    colors
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    a: &Molecule,
    b: &Molecule,
    ca: &[u64],
    cb: &[u64],
    order: &[usize],
    depth: usize,
    mapping: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let i = order[depth];
    'candidates: for j in 0..b.num_atoms() {
        if used[j] || cb[j] != ca[i] {
            continue;
        }
        // All already-mapped neighbors must connect identically.
        for &(ni, bi) in a.neighbors(i) {
            if mapping[ni] != usize::MAX {
                match b.bond_between(j, mapping[ni]) {
                    Some(bond) if bond_class(bond) == bond_class(&a.bonds()[bi]) => {}
                    _ => continue 'candidates,
                }
            }
        }
        mapping[i] = j;
        used[j] = true;
        if backtrack(a, b, ca, cb, order, depth + 1, mapping, used) {
            return true;
        }
        mapping[i] = usize::MAX;
        used[j] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use chem::write_smiles;

    #[test]
    fn corpus_is_reproducible() {
        let a = random_corpus(7, 50, &GenConfig::default());
        let b = random_corpus(7, 50, &GenConfig::default());
        let sa: Vec<String> = a.iter().map(write_smiles).collect();
        let sb: Vec<String> = b.iter().map(write_smiles).collect();
        assert_eq!(sa, sb);
    }

    #[test]
    fn generated_molecules_reparse() {
        for mol in random_corpus(11, 200, &GenConfig::default()) {
            let s = write_smiles(&mol);
            let re = chem::parse_smiles(&s).unwrap_or_else(|e| panic!("{s}: {e}"));
            assert!(graph_isomorphic(&mol, &re), "{s}");
        }
    }

    #[test]
    fn isomorphism_oracle_sanity() {
        let a = chem::parse_smiles("CCO").unwrap();
        let b = chem::parse_smiles("OCC").unwrap();
        let c = chem::parse_smiles("CCN").unwrap();
        assert!(graph_isomorphic(&a, &b));
        assert!(!graph_isomorphic(&a, &c));
        let x = chem::parse_smiles("c1ccccc1C=O").unwrap();
        let y = chem::parse_smiles("O=Cc1ccccc1").unwrap();
        assert!(graph_isomorphic(&x, &y));
        // Same formula, different connectivity.
        let p = chem::parse_smiles("CC(C)C").unwrap();
        let q = chem::parse_smiles("CCCC").unwrap();
        assert!(!graph_isomorphic(&p, &q));
    }

    #[test]
    fn permutation_preserves_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for mol in random_corpus(5, 50, &GenConfig::default()) {
            let p = permuted(&mol, &mut rng);
            assert!(graph_isomorphic(&mol, &p));
        }
    }

    #[test]
    fn analogs_stay_valid_and_close() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let cfg = GenConfig {
            min_heavy: 12,
            max_heavy: 20,
            ..GenConfig::default()
        };
        let base = random_molecule(&mut rng, &cfg);
        for _ in 0..20 {
            let analog = random_analog(&mut rng, &base);
            let diff = (analog.num_atoms() as i64 - base.num_atoms() as i64).abs();
            assert!(diff <= 2);
        }
    }
}
