//! Deterministic SMILES output. Atom order comes from iterative neighborhood
//! refinement with index tie-breaking among refinement-equivalent atoms, so
//! the string is stable under permutation of the input atom order. The
//! canonical form is internal to this toolkit; it makes no compatibility
//! claim against other software.

use crate::molecule::{Bond, BondOrder, Molecule};
use std::collections::BTreeSet;

/// Canonical atom ranks: a permutation-invariant total order on atoms.
pub fn canonical_ranks(mol: &Molecule) -> Vec<u32> {
    let n = mol.num_atoms();
    // Tie-break tags assigned one at a time to split residual classes.
    let mut tags = vec![0u32; n];
    let mut tag_counter = 1u32;

    loop {
        let mut ranks = initial_ranks(mol, &tags);
        let mut distinct = count_distinct(&ranks);
        // Refine until stable.
        loop {
            let mut sigs: Vec<(u32, Vec<(u8, u32)>, usize)> = (0..n)
                .map(|i| {
                    let mut nb: Vec<(u8, u32)> = mol
                        .neighbors(i)
                        .iter()
                        .map(|&(v, bi)| (bond_code(&mol.bonds()[bi]), ranks[v]))
                        .collect();
                    nb.sort_unstable();
                    (ranks[i], nb, i)
                })
                .collect();
            sigs.sort();
            let mut new_ranks = vec![0u32; n];
            let mut rank = 0u32;
            for w in 0..sigs.len() {
                if w > 0 && (sigs[w].0, &sigs[w].1) != (sigs[w - 1].0, &sigs[w - 1].1) {
                    rank += 1;
                }
                new_ranks[sigs[w].2] = rank;
            }
            let new_distinct = rank as usize + 1;
            ranks = new_ranks;
            if new_distinct == distinct {
                break;
            }
            distinct = new_distinct;
        }
        if distinct == n {
            return ranks;
        }
        // Split the lowest-ranked residual class at its lowest atom index;
        // atoms left tied by refinement are treated as interchangeable.
        let mut class_rank = u32::MAX;
        for i in 0..n {
            let shared = (0..n).filter(|&j| ranks[j] == ranks[i]).count();
            if shared > 1 && ranks[i] < class_rank {
                class_rank = ranks[i];
            }
        }
        let chosen = (0..n)
            .filter(|&i| ranks[i] == class_rank && tags[i] == 0)
            .min()
            .unwrap_or_else(|| (0..n).find(|&i| ranks[i] == class_rank).unwrap());
        tags[chosen] = tag_counter;
        tag_counter += 1;
    }
}

type InitialKey = (u32, u8, usize, u8, i8, bool, bool, u16);

fn initial_ranks(mol: &Molecule, tags: &[u32]) -> Vec<u32> {
    let n = mol.num_atoms();
    let mut keys: Vec<(InitialKey, usize)> = (0..n)
        .map(|i| {
            let a = mol.atom(i);
            (
                (
                    tags[i],
                    a.element.atomic_number(),
                    mol.degree(i),
                    a.total_h(),
                    a.formal_charge,
                    a.in_ring,
                    a.aromatic,
                    a.isotope.unwrap_or(0),
                ),
                i,
            )
        })
        .collect();
    keys.sort();
    let mut ranks = vec![0u32; n];
    let mut rank = 0u32;
    for w in 0..keys.len() {
        if w > 0 && keys[w].0 != keys[w - 1].0 {
            rank += 1;
        }
        ranks[keys[w].1] = rank;
    }
    ranks
}

fn count_distinct(ranks: &[u32]) -> usize {
    let mut s: Vec<u32> = ranks.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len()
}

/// Kekulé order for plain bonds, a dedicated code for aromatic bonds (their
/// kekulé assignment is matching-dependent and must not leak into ranks).
fn bond_code(bond: &Bond) -> u8 {
    if bond.is_aromatic() {
        4
    } else {
        bond.kekule
    }
}

/// Serialize to SMILES; the output re-parses to an isomorphic graph and is
/// invariant under permutation of the input atom order.
pub fn write_smiles(mol: &Molecule) -> String {
    let ranks = canonical_ranks(mol);
    let mut parts: Vec<String> = mol
        .fragments()
        .iter()
        .map(|frag| write_fragment(mol, &ranks, frag))
        .collect();
    parts.sort();
    parts.join(".")
}

struct Emitter<'a> {
    mol: &'a Molecule,
    tree_children: Vec<Vec<(usize, usize)>>,
    ring_opens: Vec<Vec<(usize, usize)>>,
    ring_closes: Vec<Vec<usize>>,
    digit_of: std::collections::HashMap<(usize, usize), u16>,
    free_digits: BTreeSet<u16>,
    out: String,
}

fn write_fragment(mol: &Molecule, ranks: &[u32], frag: &[usize]) -> String {
    let start = *frag.iter().min_by_key(|&&i| ranks[i]).unwrap();
    let n = mol.num_atoms();

    // DFS in rank order to classify tree and ring edges.
    let mut visited = vec![false; n];
    let mut tree_children: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut ring_opens: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut ring_closes: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut tree_edge = BTreeSet::new();

    // Stack holds (atom, parent). Children pushed in reverse rank order so
    // lower ranks expand first.
    visited[start] = true;
    let mut order: Vec<(usize, usize)> = vec![(start, usize::MAX)];
    let mut cursor = 0usize;
    while cursor < order.len() {
        let (u, parent) = order[cursor];
        cursor += 1;
        let mut nbs: Vec<(usize, usize)> = mol.neighbors(u).to_vec();
        nbs.sort_by_key(|&(v, _)| ranks[v]);
        for (v, bi) in nbs {
            if v == parent && tree_edge.contains(&(v.min(u), v.max(u))) {
                continue;
            }
            if visited[v] {
                let key = (u.min(v), u.max(v));
                if !tree_edge.contains(&key) && !ring_opens[v].iter().any(|&(o, _)| o == u) && !ring_opens[u].iter().any(|&(o, _)| o == v) {
                    // v was emitted earlier: the ring opens at v, closes at u.
                    ring_opens[v].push((u, bi));
                    ring_closes[u].push(v);
                }
            } else {
                visited[v] = true;
                tree_edge.insert((u.min(v), u.max(v)));
                tree_children[u].push((v, bi));
                order.push((v, u));
            }
        }
    }

    // Breadth-first discovery above fixes children, but emission is
    // depth-first below; ring open/close sides follow emission order, so
    // recompute them from the DFS preorder.
    let mut preorder_pos = vec![usize::MAX; n];
    let mut stack = vec![start];
    let mut pos = 0usize;
    while let Some(u) = stack.pop() {
        preorder_pos[u] = pos;
        pos += 1;
        for &(v, _) in tree_children[u].iter().rev() {
            stack.push(v);
        }
    }
    let mut opens: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in frag {
        for &(u, bi) in &ring_opens[*v] {
            let (first, second) = if preorder_pos[*v] < preorder_pos[u] {
                (*v, u)
            } else {
                (u, *v)
            };
            opens[first].push((second, bi));
            closes[second].push(first);
        }
    }
    for list in opens.iter_mut() {
        list.sort_by_key(|&(second, _)| preorder_pos[second]);
    }
    for list in closes.iter_mut() {
        list.sort_by_key(|&first| preorder_pos[first]);
    }

    let mut emitter = Emitter {
        mol,
        tree_children,
        ring_opens: opens,
        ring_closes: closes,
        digit_of: Default::default(),
        free_digits: (1..=99).collect(),
        out: String::new(),
    };
    emitter.emit(start);
    emitter.out
}

impl<'a> Emitter<'a> {
    fn emit(&mut self, u: usize) {
        self.out.push_str(&atom_token(self.mol, u));

        // Ring closures for bonds whose other side was emitted earlier.
        let closes = self.ring_closes[u].clone();
        for first in &closes {
            let d = self.digit_of[&(*first, u)];
            push_digit(&mut self.out, d);
        }
        // Ring openings: digit allocated here, symbol written here.
        let opens = self.ring_opens[u].clone();
        let mut to_free: Vec<u16> = Vec::new();
        for (second, bi) in &opens {
            let d = *self.free_digits.iter().next().expect("ring digits exhausted");
            self.free_digits.remove(&d);
            self.digit_of.insert((u, *second), d);
            self.out.push_str(bond_symbol(self.mol, *bi));
            push_digit(&mut self.out, d);
        }
        for first in &closes {
            to_free.push(self.digit_of[&(*first, u)]);
        }
        for d in to_free {
            self.free_digits.insert(d);
        }

        let children = self.tree_children[u].clone();
        for (k, (v, bi)) in children.iter().enumerate() {
            let last = k + 1 == children.len();
            if !last {
                self.out.push('(');
            }
            self.out.push_str(bond_symbol(self.mol, *bi));
            self.emit(*v);
            if !last {
                self.out.push(')');
            }
        }
    }
}

fn push_digit(out: &mut String, d: u16) {
    if d < 10 {
        out.push((b'0' + d as u8) as char);
    } else {
        out.push('%');
        out.push_str(&d.to_string());
    }
}

fn bond_symbol(mol: &Molecule, bond_idx: usize) -> &'static str {
    let bond = &mol.bonds()[bond_idx];
    match bond.order {
        BondOrder::Aromatic => "",
        BondOrder::Double => "=",
        BondOrder::Triple => "#",
        BondOrder::Single => {
            // A true single bond between two aromatic atoms must be written
            // explicitly, or re-parsing would default it to aromatic.
            if mol.atom(bond.a).aromatic && mol.atom(bond.b).aromatic {
                "-"
            } else {
                ""
            }
        }
    }
}

fn atom_token(mol: &Molecule, i: usize) -> String {
    let a = mol.atom(i);
    let bare_allowed = a.element.is_organic_subset()
        && a.isotope.is_none()
        && a.formal_charge == 0
        && derived_h_when_bare(mol, i) == Some(a.total_h());
    let symbol = if a.aromatic {
        a.element.symbol().to_lowercase()
    } else {
        a.element.symbol().to_string()
    };
    if bare_allowed {
        return symbol;
    }
    let mut token = String::from("[");
    if let Some(iso) = a.isotope {
        token.push_str(&iso.to_string());
    }
    token.push_str(&symbol);
    match a.total_h() {
        0 => {}
        1 => token.push('H'),
        h => {
            token.push('H');
            token.push_str(&h.to_string());
        }
    }
    match a.formal_charge {
        0 => {}
        1 => token.push('+'),
        -1 => token.push('-'),
        c if c > 0 => token.push_str(&format!("+{}", c)),
        c => token.push_str(&format!("-{}", -c)),
    }
    token.push(']');
    token
}

/// The hydrogen count a parser would derive for this atom written bare.
fn derived_h_when_bare(mol: &Molecule, i: usize) -> Option<u8> {
    let a = mol.atom(i);
    let valences = a.element.allowed_valences(0)?;
    if a.aromatic {
        let sigma: u32 = mol
            .neighbors(i)
            .iter()
            .map(|&(_, bi)| mol.bonds()[bi].order.sigma_value() as u32)
            .sum();
        let base = valences.iter().copied().min()? as i32;
        Some((base - sigma as i32 - 1).max(0) as u8)
    } else {
        let bond_sum: u32 = mol.neighbors(i).iter().map(|&(_, bi)| mol.bonds()[bi].kekule as u32).sum();
        let v = valences.iter().copied().filter(|&v| v as u32 >= bond_sum).min()?;
        Some((v as u32 - bond_sum) as u8)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::parse_smiles;

    #[test]
    fn single_atoms() {
        assert_eq!(write_smiles(&parse_smiles("N").unwrap()), "N");
        assert_eq!(write_smiles(&parse_smiles("[NH4+]").unwrap()), "[NH4+]");
        assert_eq!(write_smiles(&parse_smiles("[13CH4]").unwrap()), "[13CH4]");
    }

    #[test]
    fn ethanol_input_orders_agree() {
        let a = write_smiles(&parse_smiles("OCC").unwrap());
        let b = write_smiles(&parse_smiles("CCO").unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn round_trips_reparse() {
        for s in [
            "CC(=O)Oc1ccccc1C(=O)O",
            "c1ccc2ccccc2c1",
            "C1CC2(CC1)CCC2",
            "O=C(O)CN",
            "c1ccccc1-c1ccccc1",
            "C/C=C/C",
            "N#Cc1ccccc1",
            "CC(=O)[O-].[Na+]",
        ] {
            let m = parse_smiles(s).unwrap();
            let out = write_smiles(&m);
            let m2 = parse_smiles(&out).unwrap_or_else(|e| panic!("reparse of {out} from {s}: {e}"));
            assert_eq!(m.heavy_atom_count(), m2.heavy_atom_count(), "{s} -> {out}");
            assert_eq!(m.bonds().len(), m2.bonds().len(), "{s} -> {out}");
            // Writing again must be a fixed point.
            assert_eq!(out, write_smiles(&m2), "{s}");
        }
    }

    #[test]
    fn biphenyl_single_link_is_explicit() {
        let m = parse_smiles("c1ccccc1-c1ccccc1").unwrap();
        let out = write_smiles(&m);
        assert!(out.contains('-'), "{out}");
    }
}
