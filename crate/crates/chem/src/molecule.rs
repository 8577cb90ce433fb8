//! Attributed molecular graphs: atoms, bonds, ring perception, kekulization,
//! implicit-hydrogen filling, and valence validation.
//!
//! [`Molecule`] values are immutable after construction. Every construction
//! path funnels through [`Molecule::from_parts`], which derives rings and
//! hydrogen counts and rejects graphs that violate the valence model.

use crate::element::Element;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Valence contribution before kekulization (aromatic counts as one).
    pub fn sigma_value(self) -> u8 {
        match self {
            BondOrder::Single | BondOrder::Aromatic => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub element: Element,
    pub formal_charge: i8,
    /// Hydrogens written explicitly (bracket H count).
    pub explicit_h: u8,
    /// Hydrogens derived from the valence model.
    pub implicit_h: u8,
    pub aromatic: bool,
    pub isotope: Option<u16>,
    /// Derived: member of at least one ring.
    pub in_ring: bool,
}

impl Atom {
    pub fn total_h(&self) -> u8 {
        self.explicit_h + self.implicit_h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
    /// Resolved integer order: the kekulé assignment for aromatic bonds,
    /// otherwise the plain order.
    pub kekule: u8,
    /// Derived: the bond lies on a cycle.
    pub in_ring: bool,
}

impl Bond {
    pub fn other(&self, atom: usize) -> usize {
        if self.a == atom {
            self.b
        } else {
            self.a
        }
    }

    pub fn is_aromatic(&self) -> bool {
        self.order == BondOrder::Aromatic
    }
}

/// How to determine an atom's implicit hydrogen count during construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImplicitH {
    /// Fill from the valence model (organic-subset SMILES atoms).
    Derive,
    /// Fixed count (bracket atoms always use `Fixed(0)`).
    Fixed(u8),
}

#[derive(Debug, Clone)]
pub struct AtomSpec {
    pub element: Element,
    pub formal_charge: i8,
    pub explicit_h: u8,
    pub implicit: ImplicitH,
    pub aromatic: bool,
    pub isotope: Option<u16>,
}

impl AtomSpec {
    pub fn organic(element: Element) -> Self {
        AtomSpec {
            element,
            formal_charge: 0,
            explicit_h: 0,
            implicit: ImplicitH::Derive,
            aromatic: false,
            isotope: None,
        }
    }

    pub fn aromatic(element: Element) -> Self {
        AtomSpec {
            aromatic: true,
            ..AtomSpec::organic(element)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BondSpec {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
}

impl BondSpec {
    pub fn new(a: usize, b: usize, order: BondOrder) -> Self {
        BondSpec { a, b, order }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MoleculeError {
    #[error("bond endpoint {0} out of range")]
    BondIndexOutOfRange(usize),
    #[error("self-bond on atom {0}")]
    SelfBond(usize),
    #[error("duplicate bond between atoms {0} and {1}")]
    DuplicateBond(usize, usize),
    #[error("atom {atom} ({element}) has total valence {valence}, not allowed for charge {charge}")]
    ValenceViolation {
        atom: usize,
        element: &'static str,
        valence: u8,
        charge: i8,
    },
    #[error("aromatic system cannot be kekulized (atom {0})")]
    KekulizationFailure(usize),
    #[error("aromatic bond between non-aromatic atoms {0} and {1}")]
    AromaticBondOutsideSystem(usize, usize),
    #[error("element {0} cannot be aromatic")]
    AromaticElement(&'static str),
    #[error("empty molecule")]
    Empty,
}

/// Attributed undirected molecular graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Molecule {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    /// adjacency[i] = (neighbor atom index, bond index)
    adjacency: Vec<Vec<(usize, usize)>>,
    /// Smallest rings, one per ring bond, deduplicated; atoms in cycle order.
    rings: Vec<Vec<usize>>,
    /// Stereo markers seen in the source SMILES; semantics are ignored but
    /// the count feeds the synthetic-accessibility stereo penalty.
    stereo_marks: u16,
}

impl Molecule {
    /// Validating constructor: derives adjacency, ring membership, kekulé
    /// orders, and implicit hydrogens; rejects graphs that break the valence
    /// model or contain non-kekulizable aromatic systems.
    pub fn from_parts(specs: Vec<AtomSpec>, bond_specs: Vec<BondSpec>) -> Result<Molecule, MoleculeError> {
        if specs.is_empty() {
            return Err(MoleculeError::Empty);
        }
        let n = specs.len();
        let mut seen = BTreeSet::new();
        for bs in &bond_specs {
            if bs.a >= n || bs.b >= n {
                return Err(MoleculeError::BondIndexOutOfRange(bs.a.max(bs.b)));
            }
            if bs.a == bs.b {
                return Err(MoleculeError::SelfBond(bs.a));
            }
            if !seen.insert((bs.a.min(bs.b), bs.a.max(bs.b))) {
                return Err(MoleculeError::DuplicateBond(bs.a, bs.b));
            }
        }

        let mut atoms: Vec<Atom> = specs
            .iter()
            .map(|s| Atom {
                element: s.element,
                formal_charge: s.formal_charge,
                explicit_h: s.explicit_h,
                implicit_h: match s.implicit {
                    ImplicitH::Fixed(h) => h,
                    ImplicitH::Derive => 0,
                },
                aromatic: s.aromatic,
                isotope: s.isotope,
                in_ring: false,
            })
            .collect();

        for atom in &atoms {
            if atom.aromatic && !atom.element.supports_aromatic() {
                return Err(MoleculeError::AromaticElement(atom.element.symbol()));
            }
        }

        let mut bonds: Vec<Bond> = bond_specs
            .iter()
            .map(|bs| Bond {
                a: bs.a,
                b: bs.b,
                order: bs.order,
                kekule: bs.order.sigma_value(),
                in_ring: false,
            })
            .collect();
        for bond in &bonds {
            if bond.order == BondOrder::Aromatic && !(atoms[bond.a].aromatic && atoms[bond.b].aromatic) {
                return Err(MoleculeError::AromaticBondOutsideSystem(bond.a, bond.b));
            }
        }

        let mut adjacency = vec![Vec::new(); n];
        for (bi, bond) in bonds.iter().enumerate() {
            adjacency[bond.a].push((bond.b, bi));
            adjacency[bond.b].push((bond.a, bi));
        }

        let ring_bonds = non_bridge_bonds(n, &bonds, &adjacency);
        for (bi, bond) in bonds.iter_mut().enumerate() {
            bond.in_ring = ring_bonds[bi];
            if ring_bonds[bi] {
                atoms[bond.a].in_ring = true;
                atoms[bond.b].in_ring = true;
            }
        }

        // Aromatic atoms must sit on a ring.
        for (i, atom) in atoms.iter().enumerate() {
            if atom.aromatic && !atom.in_ring {
                return Err(MoleculeError::KekulizationFailure(i));
            }
        }

        // Pre-kekulization hydrogen fill for aromatic organic-subset atoms:
        // one valence slot is reserved for the potential ring double bond.
        for (i, spec) in specs.iter().enumerate() {
            if spec.implicit == ImplicitH::Derive && atoms[i].aromatic {
                if let Some(valences) = atoms[i].element.allowed_valences(atoms[i].formal_charge) {
                    let sigma: u32 = adjacency[i]
                        .iter()
                        .map(|&(_, bi)| bonds[bi].order.sigma_value() as u32)
                        .sum();
                    let base = valences.iter().copied().min().unwrap_or(0) as i32;
                    atoms[i].implicit_h = (base - sigma as i32 - 1).max(0) as u8;
                }
            }
        }

        kekulize(&mut atoms, &mut bonds, &adjacency)?;

        // Hydrogen fill for non-aromatic derive atoms now that orders are final.
        for (i, spec) in specs.iter().enumerate() {
            if spec.implicit == ImplicitH::Derive && !atoms[i].aromatic {
                if let Some(valences) = atoms[i].element.allowed_valences(atoms[i].formal_charge) {
                    let bond_sum: u32 = adjacency[i]
                        .iter()
                        .map(|&(_, bi)| bonds[bi].kekule as u32)
                        .sum();
                    let total = bond_sum + atoms[i].explicit_h as u32;
                    match valences.iter().copied().filter(|&v| v as u32 >= total).min() {
                        Some(v) => atoms[i].implicit_h = (v as u32 - total) as u8,
                        None => {
                            return Err(MoleculeError::ValenceViolation {
                                atom: i,
                                element: atoms[i].element.symbol(),
                                valence: total.min(u8::MAX as u32) as u8,
                                charge: atoms[i].formal_charge,
                            })
                        }
                    }
                }
            }
        }

        // Final validation over every atom with a valence table entry. An
        // isolated atom with no hydrogens is accepted as an elemental/ion
        // form ([Se], [Na+], [Cl-]).
        for (i, atom) in atoms.iter().enumerate() {
            if let Some(valences) = atom.element.allowed_valences(atom.formal_charge) {
                let bond_sum: u32 = adjacency[i].iter().map(|&(_, bi)| bonds[bi].kekule as u32).sum();
                let total = bond_sum + atom.total_h() as u32;
                let isolated = adjacency[i].is_empty() && atom.total_h() == 0;
                if !isolated && !valences.iter().any(|&v| v as u32 == total) {
                    return Err(MoleculeError::ValenceViolation {
                        atom: i,
                        element: atom.element.symbol(),
                        valence: total.min(u8::MAX as u32) as u8,
                        charge: atom.formal_charge,
                    });
                }
            }
        }

        let rings = smallest_rings(n, &bonds, &adjacency);

        Ok(Molecule {
            atoms,
            bonds,
            adjacency,
            rings,
            stereo_marks: 0,
        })
    }

    pub(crate) fn with_stereo_marks(mut self, marks: u16) -> Molecule {
        self.stereo_marks = marks;
        self
    }

    pub fn stereo_mark_count(&self) -> u16 {
        self.stereo_marks
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    /// Atoms other than hydrogen.
    pub fn heavy_atom_count(&self) -> usize {
        self.atoms.iter().filter(|a| a.element != Element::H).count()
    }

    /// (neighbor atom, bond index) pairs for an atom.
    pub fn neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<&Bond> {
        self.adjacency[a]
            .iter()
            .find(|&&(nb, _)| nb == b)
            .map(|&(_, bi)| &self.bonds[bi])
    }

    /// Smallest rings (one per ring bond, deduplicated), atoms in cycle order.
    pub fn rings(&self) -> &[Vec<usize>] {
        &self.rings
    }

    /// Connected components, each a sorted list of atom indices, ordered by
    /// smallest member.
    pub fn fragments(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.atoms.len()];
        let mut fragments: Vec<Vec<usize>> = Vec::new();
        for start in 0..self.atoms.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = fragments.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &(nb, _) in &self.adjacency[v] {
                    if comp[nb] == usize::MAX {
                        comp[nb] = id;
                        members.push(nb);
                        stack.push(nb);
                    }
                }
            }
            members.sort_unstable();
            fragments.push(members);
        }
        fragments
    }

    /// Molecular weight in daltons, counting implicit and explicit hydrogens.
    /// Atoms with an isotope label use the mass number as their weight.
    pub fn molecular_weight(&self) -> f64 {
        let h = Element::H.atomic_weight();
        self.atoms
            .iter()
            .map(|a| {
                let w = a.isotope.map(|m| m as f64).unwrap_or_else(|| a.element.atomic_weight());
                w + a.total_h() as f64 * h
            })
            .sum()
    }

    /// Rebuild a molecule from a subset of its atoms, keeping hydrogen counts
    /// exactly as they are.
    pub fn extract(&self, atom_indices: &[usize]) -> Result<Molecule, MoleculeError> {
        let mut map = vec![usize::MAX; self.atoms.len()];
        for (new, &old) in atom_indices.iter().enumerate() {
            map[old] = new;
        }
        let specs = atom_indices
            .iter()
            .map(|&i| {
                let a = &self.atoms[i];
                AtomSpec {
                    element: a.element,
                    formal_charge: a.formal_charge,
                    explicit_h: a.explicit_h,
                    implicit: ImplicitH::Fixed(a.implicit_h),
                    aromatic: a.aromatic,
                    isotope: a.isotope,
                }
            })
            .collect();
        let bonds = self
            .bonds
            .iter()
            .filter(|b| map[b.a] != usize::MAX && map[b.b] != usize::MAX)
            .map(|b| BondSpec::new(map[b.a], map[b.b], b.order))
            .collect();
        // Stereo marks are a whole-parse count; fragments inherit it.
        Molecule::from_parts(specs, bonds).map(|m| m.with_stereo_marks(self.stereo_marks))
    }

    /// Decompose into editable specs. With `rederive_h` the hydrogen counts
    /// of organic-subset atoms are recomputed on rebuild, which is what graph
    /// surgery wants; otherwise counts are frozen.
    pub fn to_specs(&self, rederive_h: bool) -> (Vec<AtomSpec>, Vec<BondSpec>) {
        let atoms = self
            .atoms
            .iter()
            .map(|a| AtomSpec {
                element: a.element,
                formal_charge: a.formal_charge,
                explicit_h: a.explicit_h,
                implicit: if rederive_h && a.element.is_organic_subset() {
                    ImplicitH::Derive
                } else {
                    ImplicitH::Fixed(a.implicit_h)
                },
                aromatic: a.aromatic,
                isotope: a.isotope,
            })
            .collect();
        let bonds = self.bonds.iter().map(|b| BondSpec::new(b.a, b.b, b.order)).collect();
        (atoms, bonds)
    }
}

/// Marks each bond as ring (true) or bridge (false) via iterative DFS
/// low-link computation.
fn non_bridge_bonds(n: usize, bonds: &[Bond], adjacency: &[Vec<(usize, usize)>]) -> Vec<bool> {
    let mut is_ring = vec![false; bonds.len()];
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![usize::MAX; n];
    let mut timer = 0usize;

    // Stack frames: (node, parent bond, next adjacency cursor)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        stack.push((root, usize::MAX, 0));
        while let Some(&mut (v, pbond, ref mut cursor)) = stack.last_mut() {
            if *cursor < adjacency[v].len() {
                let (to, bi) = adjacency[v][*cursor];
                *cursor += 1;
                if bi == pbond {
                    continue;
                }
                if disc[to] == usize::MAX {
                    disc[to] = timer;
                    low[to] = timer;
                    timer += 1;
                    stack.push((to, bi, 0));
                } else {
                    // Back edge: lies on a cycle.
                    is_ring[bi] = true;
                    low[v] = low[v].min(disc[to]);
                }
            } else {
                stack.pop();
                if let Some(&mut (parent, _, _)) = stack.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        // pbond is a bridge: leave is_ring false.
                    } else if pbond != usize::MAX {
                        is_ring[pbond] = true;
                    }
                }
            }
        }
    }
    is_ring
}

/// For each ring bond, the smallest cycle through it (BFS with the bond
/// removed); deduplicated by atom set.
fn smallest_rings(n: usize, bonds: &[Bond], adjacency: &[Vec<(usize, usize)>]) -> Vec<Vec<usize>> {
    let mut rings: Vec<Vec<usize>> = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (bi, bond) in bonds.iter().enumerate() {
        if !bond.in_ring {
            continue;
        }
        // BFS from bond.a to bond.b avoiding this bond.
        let mut prev = vec![usize::MAX; n];
        let mut visited = vec![false; n];
        visited[bond.a] = true;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(bond.a);
        'bfs: while let Some(v) = queue.pop_front() {
            for &(nb, nbi) in &adjacency[v] {
                if nbi == bi || visited[nb] {
                    continue;
                }
                visited[nb] = true;
                prev[nb] = v;
                if nb == bond.b {
                    break 'bfs;
                }
                queue.push_back(nb);
            }
        }
        if !visited[bond.b] {
            continue; // should not happen for a ring bond
        }
        let mut cycle = vec![bond.b];
        let mut cur = bond.b;
        while cur != bond.a {
            cur = prev[cur];
            cycle.push(cur);
        }
        let mut key = cycle.clone();
        key.sort_unstable();
        if seen.insert(key) {
            rings.push(cycle);
        }
    }
    rings
}

/// Resolve aromatic bonds to alternating single/double orders via perfect
/// matching over the atoms that still need one double bond.
fn kekulize(atoms: &mut [Atom], bonds: &mut [Bond], adjacency: &[Vec<(usize, usize)>]) -> Result<(), MoleculeError> {
    let n = atoms.len();
    let mut needs = vec![false; n];
    let mut any_aromatic = false;
    for i in 0..n {
        if !atoms[i].aromatic {
            continue;
        }
        any_aromatic = true;
        let Some(valences) = atoms[i].element.allowed_valences(atoms[i].formal_charge) else {
            continue;
        };
        let sigma: u32 = adjacency[i]
            .iter()
            .map(|&(_, bi)| bonds[bi].order.sigma_value() as u32)
            .sum();
        let total = sigma + atoms[i].total_h() as u32;
        let target = valences.iter().copied().filter(|&v| v as u32 >= total).min();
        if let Some(v) = target {
            needs[i] = (v as u32) > total;
        }
    }
    if !any_aromatic {
        return Ok(());
    }

    // Matching restricted to aromatic bonds between two needy atoms.
    let mut mate = vec![usize::MAX; n];
    let pending: Vec<usize> = (0..n).filter(|&i| needs[i]).collect();
    if !match_all(&pending, &mut mate, &needs, bonds, adjacency) {
        let unmatched = pending.into_iter().find(|&i| mate[i] == usize::MAX).unwrap_or(0);
        return Err(MoleculeError::KekulizationFailure(unmatched));
    }
    for bond in bonds.iter_mut() {
        if bond.order == BondOrder::Aromatic {
            bond.kekule = if mate[bond.a] == bond.b { 2 } else { 1 };
        }
    }
    Ok(())
}

fn match_all(
    pending: &[usize],
    mate: &mut [usize],
    needs: &[bool],
    bonds: &[Bond],
    adjacency: &[Vec<(usize, usize)>],
) -> bool {
    // Pick the unmatched atom with the fewest available partners (fail fast).
    let candidates = |i: usize, mate: &[usize]| -> Vec<usize> {
        adjacency[i]
            .iter()
            .filter(|&&(nb, bi)| bonds[bi].order == BondOrder::Aromatic && needs[nb] && mate[nb] == usize::MAX)
            .map(|&(nb, _)| nb)
            .collect()
    };
    let mut best: Option<(usize, Vec<usize>)> = None;
    for &i in pending {
        if mate[i] != usize::MAX {
            continue;
        }
        let cands = candidates(i, mate);
        let len = cands.len();
        if len == 0 {
            return false;
        }
        if best.as_ref().map_or(true, |(_, c)| len < c.len()) {
            let done = len == 1;
            best = Some((i, cands));
            if done {
                break;
            }
        }
    }
    let Some((i, cands)) = best else {
        return true; // everyone matched
    };
    for nb in cands {
        mate[i] = nb;
        mate[nb] = i;
        if match_all(pending, mate, needs, bonds, adjacency) {
            return true;
        }
        mate[i] = usize::MAX;
        mate[nb] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> AtomSpec {
        AtomSpec::organic(Element::C)
    }

    #[test]
    fn ethane_fills_hydrogens() {
        let m = Molecule::from_parts(vec![c(), c()], vec![BondSpec::new(0, 1, BondOrder::Single)]).unwrap();
        assert_eq!(m.atom(0).implicit_h, 3);
        assert_eq!(m.atom(1).implicit_h, 3);
        assert!((m.molecular_weight() - 30.07).abs() < 0.01);
    }

    #[test]
    fn pentavalent_carbon_rejected() {
        let mut specs = vec![c(), c(), c(), c(), c(), c()];
        specs[0].implicit = ImplicitH::Fixed(0);
        let bonds = (1..6).map(|i| BondSpec::new(0, i, BondOrder::Single)).collect();
        let err = Molecule::from_parts(specs, bonds).unwrap_err();
        assert!(matches!(err, MoleculeError::ValenceViolation { atom: 0, .. }));
    }

    #[test]
    fn benzene_kekulizes_alternating() {
        let specs = vec![AtomSpec::aromatic(Element::C); 6];
        let bonds = (0..6)
            .map(|i| BondSpec::new(i, (i + 1) % 6, BondOrder::Aromatic))
            .collect();
        let m = Molecule::from_parts(specs, bonds).unwrap();
        let doubles = m.bonds().iter().filter(|b| b.kekule == 2).count();
        assert_eq!(doubles, 3);
        for a in m.atoms() {
            assert_eq!(a.implicit_h, 1);
            assert!(a.in_ring);
        }
    }

    #[test]
    fn five_carbon_aromatic_ring_fails() {
        let specs = vec![AtomSpec::aromatic(Element::C); 5];
        let bonds = (0..5)
            .map(|i| BondSpec::new(i, (i + 1) % 5, BondOrder::Aromatic))
            .collect();
        let err = Molecule::from_parts(specs, bonds).unwrap_err();
        assert!(matches!(err, MoleculeError::KekulizationFailure(_)));
    }

    #[test]
    fn pyrrole_nitrogen_contributes_lone_pair() {
        let mut specs = vec![AtomSpec::aromatic(Element::N)];
        specs[0].explicit_h = 1;
        specs[0].implicit = ImplicitH::Fixed(0);
        specs.extend(vec![AtomSpec::aromatic(Element::C); 4]);
        let bonds = (0..5)
            .map(|i| BondSpec::new(i, (i + 1) % 5, BondOrder::Aromatic))
            .collect();
        let m = Molecule::from_parts(specs, bonds).unwrap();
        let n_doubles: u32 = m.neighbors(0).iter().map(|&(_, bi)| (m.bonds()[bi].kekule == 2) as u32).sum();
        assert_eq!(n_doubles, 0);
    }

    #[test]
    fn ring_perception_spans_fused_systems() {
        // Bicyclo: two triangles sharing an edge (0-1).
        let specs = vec![c(), c(), c(), c()];
        let bonds = vec![
            BondSpec::new(0, 1, BondOrder::Single),
            BondSpec::new(1, 2, BondOrder::Single),
            BondSpec::new(2, 0, BondOrder::Single),
            BondSpec::new(1, 3, BondOrder::Single),
            BondSpec::new(3, 0, BondOrder::Single),
        ];
        let m = Molecule::from_parts(specs, bonds).unwrap();
        assert!(m.bonds().iter().all(|b| b.in_ring));
        assert_eq!(m.rings().len(), 2);
    }

    #[test]
    fn fragments_are_components() {
        let m = Molecule::from_parts(vec![c(), c(), c()], vec![BondSpec::new(0, 2, BondOrder::Single)]).unwrap();
        assert_eq!(m.fragments(), vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn isolated_bracket_atom_accepted() {
        let mut spec = AtomSpec::organic(Element::Se);
        spec.implicit = ImplicitH::Fixed(0);
        let m = Molecule::from_parts(vec![spec], vec![]).unwrap();
        assert_eq!(m.atom(0).total_h(), 0);
    }
}
