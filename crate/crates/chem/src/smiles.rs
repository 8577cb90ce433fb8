//! SMILES parser for the organic/bracket subset: atoms, bonds `- = # :`,
//! branches, ring closures (`1`..`9`, `%nn`), fragment dots, and aromatic
//! lowercase atoms. Stereo markers (`/ \ @ @@`) are accepted, ignored, and
//! counted; the count feeds the synthetic-accessibility stereo penalty.

use crate::element::Element;
use crate::molecule::{AtomSpec, BondOrder, BondSpec, ImplicitH, Molecule, MoleculeError};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SmilesErrorKind {
    #[error("unbalanced parenthesis")]
    UnbalancedParenthesis,
    #[error("ring bond {0} was never closed")]
    UnclosedRingBond(u16),
    #[error("unknown element '{0}'")]
    UnknownElement(String),
    #[error("valence violation on {element} (total {valence}, charge {charge})")]
    ValenceViolation {
        element: String,
        valence: u8,
        charge: i8,
    },
    #[error("aromatic system cannot be kekulized")]
    KekulizationFailure,
    #[error("ring closure bond symbols disagree")]
    RingBondMismatch,
    #[error("duplicate bond between atoms")]
    DuplicateBond,
    #[error("unexpected character '{0}'")]
    UnexpectedCharacter(char),
    #[error("unclosed bracket atom")]
    UnclosedBracket,
    #[error("empty SMILES")]
    EmptyInput,
}

/// Parse failure with the byte offset of the offending token.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("SMILES error at position {position}: {kind}")]
pub struct SmilesError {
    pub position: usize,
    pub kind: SmilesErrorKind,
}

impl SmilesError {
    fn new(position: usize, kind: SmilesErrorKind) -> Self {
        SmilesError { position, kind }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BondToken {
    Single,
    Double,
    Triple,
    Aromatic,
}

pub fn parse_smiles(text: &str) -> Result<Molecule, SmilesError> {
    Parser::new(text)?.run()
}

struct Parser<'a> {
    input: &'a [u8],
    idx: usize,
    atoms: Vec<AtomSpec>,
    atom_pos: Vec<usize>,
    bonds: Vec<BondSpec>,
    prev: Option<usize>,
    pending_bond: Option<(BondToken, usize)>,
    /// '(' positions with the saved attachment point.
    branch_stack: Vec<(Option<usize>, usize)>,
    /// ring id -> (atom, optional bond token, position)
    open_rings: HashMap<u16, (usize, Option<BondToken>, usize)>,
    stereo_marks: u16,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self, SmilesError> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(SmilesError::new(0, SmilesErrorKind::EmptyInput));
        }
        if let Some(pos) = trimmed.bytes().position(|b| !b.is_ascii() || b.is_ascii_whitespace()) {
            let ch = trimmed[pos..].chars().next().unwrap_or('?');
            return Err(SmilesError::new(pos, SmilesErrorKind::UnexpectedCharacter(ch)));
        }
        Ok(Parser {
            input: trimmed.as_bytes(),
            idx: 0,
            atoms: Vec::new(),
            atom_pos: Vec::new(),
            bonds: Vec::new(),
            prev: None,
            pending_bond: None,
            branch_stack: Vec::new(),
            open_rings: HashMap::new(),
            stereo_marks: 0,
        })
    }

    fn run(mut self) -> Result<Molecule, SmilesError> {
        while self.idx < self.input.len() {
            let pos = self.idx;
            let b = self.input[self.idx];
            match b {
                b'(' => {
                    self.require_no_pending(pos)?;
                    if self.prev.is_none() {
                        return Err(SmilesError::new(pos, SmilesErrorKind::UnexpectedCharacter('(')));
                    }
                    self.branch_stack.push((self.prev, pos));
                    self.idx += 1;
                }
                b')' => {
                    self.require_no_pending(pos)?;
                    let (saved, _) = self
                        .branch_stack
                        .pop()
                        .ok_or_else(|| SmilesError::new(pos, SmilesErrorKind::UnbalancedParenthesis))?;
                    self.prev = saved;
                    self.idx += 1;
                }
                b'.' => {
                    self.require_no_pending(pos)?;
                    self.prev = None;
                    self.idx += 1;
                }
                b'-' => self.set_bond(BondToken::Single, pos)?,
                b'=' => self.set_bond(BondToken::Double, pos)?,
                b'#' => self.set_bond(BondToken::Triple, pos)?,
                b':' => self.set_bond(BondToken::Aromatic, pos)?,
                b'/' | b'\\' => {
                    self.stereo_marks += 1;
                    self.set_bond(BondToken::Single, pos)?;
                }
                b'0'..=b'9' => {
                    let id = (b - b'0') as u16;
                    self.idx += 1;
                    self.ring_closure(id, pos)?;
                }
                b'%' => {
                    if self.idx + 2 >= self.input.len()
                        || !self.input[self.idx + 1].is_ascii_digit()
                        || !self.input[self.idx + 2].is_ascii_digit()
                    {
                        return Err(SmilesError::new(pos, SmilesErrorKind::UnexpectedCharacter('%')));
                    }
                    let id = (self.input[self.idx + 1] - b'0') as u16 * 10 + (self.input[self.idx + 2] - b'0') as u16;
                    self.idx += 3;
                    self.ring_closure(id, pos)?;
                }
                b'[' => {
                    let spec = self.parse_bracket_atom()?;
                    self.push_atom(spec, pos)?;
                }
                _ => {
                    let spec = self.parse_organic_atom()?;
                    self.push_atom(spec, pos)?;
                }
            }
        }

        if let Some((_, pos)) = self.branch_stack.last() {
            return Err(SmilesError::new(*pos, SmilesErrorKind::UnbalancedParenthesis));
        }
        if let Some((&id, &(_, _, pos))) = self.open_rings.iter().min_by_key(|&(_, &(_, _, p))| p) {
            return Err(SmilesError::new(pos, SmilesErrorKind::UnclosedRingBond(id)));
        }
        if let Some((_, pos)) = self.pending_bond {
            return Err(SmilesError::new(pos, SmilesErrorKind::UnexpectedCharacter('-')));
        }

        let stereo = self.stereo_marks;
        let atom_pos = std::mem::take(&mut self.atom_pos);
        fold_plain_hydrogens(&mut self.atoms, &mut self.bonds);
        let mol = Molecule::from_parts(self.atoms, self.bonds)
            .map_err(|e| convert_molecule_error(e, &atom_pos))?;
        Ok(mol.with_stereo_marks(stereo))
    }

    fn require_no_pending(&self, pos: usize) -> Result<(), SmilesError> {
        if self.pending_bond.is_some() {
            let ch = self.input[pos] as char;
            return Err(SmilesError::new(pos, SmilesErrorKind::UnexpectedCharacter(ch)));
        }
        Ok(())
    }

    fn set_bond(&mut self, token: BondToken, pos: usize) -> Result<(), SmilesError> {
        if self.pending_bond.is_some() || self.prev.is_none() {
            let ch = self.input[pos] as char;
            return Err(SmilesError::new(pos, SmilesErrorKind::UnexpectedCharacter(ch)));
        }
        self.pending_bond = Some((token, pos));
        self.idx += 1;
        Ok(())
    }

    fn ring_closure(&mut self, id: u16, pos: usize) -> Result<(), SmilesError> {
        let here = self
            .prev
            .ok_or_else(|| SmilesError::new(pos, SmilesErrorKind::UnexpectedCharacter(self.input[pos] as char)))?;
        let token = self.pending_bond.take().map(|(t, _)| t);
        if let Some((other, other_token, _)) = self.open_rings.remove(&id) {
            if other == here {
                return Err(SmilesError::new(pos, SmilesErrorKind::DuplicateBond));
            }
            let order = match (token, other_token) {
                (Some(a), Some(b)) if a != b => {
                    return Err(SmilesError::new(pos, SmilesErrorKind::RingBondMismatch))
                }
                (Some(t), _) | (None, Some(t)) => bond_order(t),
                (None, None) => self.default_order(here, other),
            };
            if self.bonds.iter().any(|b| (b.a == here && b.b == other) || (b.a == other && b.b == here)) {
                return Err(SmilesError::new(pos, SmilesErrorKind::DuplicateBond));
            }
            self.bonds.push(BondSpec::new(other, here, order));
        } else {
            self.open_rings.insert(id, (here, token, pos));
        }
        Ok(())
    }

    fn default_order(&self, a: usize, b: usize) -> BondOrder {
        if self.atoms[a].aromatic && self.atoms[b].aromatic {
            BondOrder::Aromatic
        } else {
            BondOrder::Single
        }
    }

    fn push_atom(&mut self, spec: AtomSpec, pos: usize) -> Result<(), SmilesError> {
        let idx = self.atoms.len();
        self.atoms.push(spec);
        self.atom_pos.push(pos);
        if let Some(prev) = self.prev {
            let order = match self.pending_bond.take() {
                Some((t, _)) => bond_order(t),
                None => self.default_order(prev, idx),
            };
            self.bonds.push(BondSpec::new(prev, idx, order));
        } else if let Some((_, bpos)) = self.pending_bond.take() {
            return Err(SmilesError::new(bpos, SmilesErrorKind::UnexpectedCharacter('-')));
        }
        self.prev = Some(idx);
        Ok(())
    }

    fn parse_organic_atom(&mut self) -> Result<AtomSpec, SmilesError> {
        let pos = self.idx;
        let b = self.input[self.idx];
        // Two-character symbols first.
        if b == b'C' && self.input.get(self.idx + 1) == Some(&b'l') {
            self.idx += 2;
            return Ok(AtomSpec::organic(Element::Cl));
        }
        if b == b'B' && self.input.get(self.idx + 1) == Some(&b'r') {
            self.idx += 2;
            return Ok(AtomSpec::organic(Element::Br));
        }
        let spec = match b {
            b'B' => AtomSpec::organic(Element::B),
            b'C' => AtomSpec::organic(Element::C),
            b'N' => AtomSpec::organic(Element::N),
            b'O' => AtomSpec::organic(Element::O),
            b'P' => AtomSpec::organic(Element::P),
            b'S' => AtomSpec::organic(Element::S),
            b'F' => AtomSpec::organic(Element::F),
            b'I' => AtomSpec::organic(Element::I),
            b'b' => AtomSpec::aromatic(Element::B),
            b'c' => AtomSpec::aromatic(Element::C),
            b'n' => AtomSpec::aromatic(Element::N),
            b'o' => AtomSpec::aromatic(Element::O),
            b'p' => AtomSpec::aromatic(Element::P),
            b's' => AtomSpec::aromatic(Element::S),
            other => {
                return Err(SmilesError::new(
                    pos,
                    SmilesErrorKind::UnexpectedCharacter(other as char),
                ))
            }
        };
        self.idx += 1;
        Ok(spec)
    }

    fn parse_bracket_atom(&mut self) -> Result<AtomSpec, SmilesError> {
        let open_pos = self.idx;
        self.idx += 1; // consume '['

        let mut isotope: Option<u16> = None;
        let mut digits = 0u32;
        let mut saw_iso = false;
        while let Some(&b) = self.input.get(self.idx) {
            if b.is_ascii_digit() {
                saw_iso = true;
                digits = digits * 10 + (b - b'0') as u32;
                self.idx += 1;
            } else {
                break;
            }
        }
        if saw_iso {
            isotope = Some(digits.min(u16::MAX as u32) as u16);
        }

        let sym_pos = self.idx;
        let (element, aromatic) = self.parse_bracket_symbol(sym_pos)?;
        if aromatic && !element.supports_aromatic() {
            return Err(SmilesError::new(
                sym_pos,
                SmilesErrorKind::UnknownElement(element.symbol().to_lowercase()),
            ));
        }

        let mut explicit_h: u8 = 0;
        let mut charge: i32 = 0;
        loop {
            match self.input.get(self.idx) {
                Some(b'@') => {
                    self.stereo_marks += 1;
                    self.idx += 1;
                    if self.input.get(self.idx) == Some(&b'@') {
                        self.idx += 1;
                    }
                }
                Some(b'H') => {
                    self.idx += 1;
                    let mut count = 0u32;
                    let mut saw = false;
                    while let Some(&b) = self.input.get(self.idx) {
                        if b.is_ascii_digit() {
                            saw = true;
                            count = count * 10 + (b - b'0') as u32;
                            self.idx += 1;
                        } else {
                            break;
                        }
                    }
                    explicit_h = if saw { count.min(9) as u8 } else { 1 };
                }
                Some(b'+') | Some(b'-') => {
                    let sign: i32 = if self.input[self.idx] == b'+' { 1 } else { -1 };
                    let symbol = self.input[self.idx];
                    self.idx += 1;
                    let mut magnitude = 1i32;
                    if let Some(&b) = self.input.get(self.idx) {
                        if b.is_ascii_digit() {
                            magnitude = 0;
                            while let Some(&d) = self.input.get(self.idx) {
                                if d.is_ascii_digit() {
                                    magnitude = magnitude * 10 + (d - b'0') as i32;
                                    self.idx += 1;
                                } else {
                                    break;
                                }
                            }
                        } else {
                            while self.input.get(self.idx) == Some(&symbol) {
                                magnitude += 1;
                                self.idx += 1;
                            }
                        }
                    }
                    charge = sign * magnitude;
                }
                Some(b':') => {
                    // Atom class: accepted and ignored.
                    self.idx += 1;
                    while let Some(&b) = self.input.get(self.idx) {
                        if b.is_ascii_digit() {
                            self.idx += 1;
                        } else {
                            break;
                        }
                    }
                }
                Some(b']') => {
                    self.idx += 1;
                    return Ok(AtomSpec {
                        element,
                        formal_charge: charge.clamp(i8::MIN as i32, i8::MAX as i32) as i8,
                        explicit_h,
                        implicit: ImplicitH::Fixed(0),
                        aromatic,
                        isotope,
                    });
                }
                Some(&other) => {
                    return Err(SmilesError::new(
                        self.idx,
                        SmilesErrorKind::UnexpectedCharacter(other as char),
                    ))
                }
                None => return Err(SmilesError::new(open_pos, SmilesErrorKind::UnclosedBracket)),
            }
        }
    }

    fn parse_bracket_symbol(&mut self, pos: usize) -> Result<(Element, bool), SmilesError> {
        let Some(&first) = self.input.get(pos) else {
            return Err(SmilesError::new(pos, SmilesErrorKind::UnclosedBracket));
        };
        if first.is_ascii_uppercase() {
            // Try the two-letter symbol, then one-letter.
            if let Some(&second) = self.input.get(pos + 1) {
                if second.is_ascii_lowercase() {
                    let two = std::str::from_utf8(&self.input[pos..pos + 2]).unwrap();
                    if let Some(e) = Element::from_symbol(two) {
                        self.idx = pos + 2;
                        return Ok((e, false));
                    }
                }
            }
            let one = std::str::from_utf8(&self.input[pos..pos + 1]).unwrap();
            if let Some(e) = Element::from_symbol(one) {
                self.idx = pos + 1;
                return Ok((e, false));
            }
            let mut sym = String::from(one);
            if let Some(&second) = self.input.get(pos + 1) {
                if second.is_ascii_lowercase() {
                    sym.push(second as char);
                }
            }
            return Err(SmilesError::new(pos, SmilesErrorKind::UnknownElement(sym)));
        }
        if first.is_ascii_lowercase() {
            // Aromatic bracket symbols: one- or two-letter (se, as).
            if let Some(&second) = self.input.get(pos + 1) {
                if second.is_ascii_lowercase() {
                    let two = format!(
                        "{}{}",
                        (first as char).to_ascii_uppercase(),
                        second as char
                    );
                    if let Some(e) = Element::from_symbol(&two) {
                        if e.supports_aromatic() {
                            self.idx = pos + 2;
                            return Ok((e, true));
                        }
                    }
                }
            }
            let one = (first as char).to_ascii_uppercase().to_string();
            if let Some(e) = Element::from_symbol(&one) {
                self.idx = pos + 1;
                return Ok((e, true));
            }
            return Err(SmilesError::new(
                pos,
                SmilesErrorKind::UnknownElement((first as char).to_string()),
            ));
        }
        Err(SmilesError::new(
            pos,
            SmilesErrorKind::UnexpectedCharacter(first as char),
        ))
    }
}

fn bond_order(token: BondToken) -> BondOrder {
    match token {
        BondToken::Single => BondOrder::Single,
        BondToken::Double => BondOrder::Double,
        BondToken::Triple => BondOrder::Triple,
        BondToken::Aromatic => BondOrder::Aromatic,
    }
}

/// Fold explicitly written plain hydrogens (`[H]` nodes with no isotope or
/// charge, single-bonded to one heavy atom) into the neighbor's explicit H
/// count. Isotopic hydrogens stay as graph atoms.
fn fold_plain_hydrogens(atoms: &mut Vec<AtomSpec>, bonds: &mut Vec<BondSpec>) {
    let mut fold: Vec<usize> = Vec::new();
    for (i, atom) in atoms.iter().enumerate() {
        if atom.element != Element::H || atom.isotope.is_some() || atom.formal_charge != 0 || atom.explicit_h != 0 {
            continue;
        }
        let incident: Vec<&BondSpec> = bonds.iter().filter(|b| b.a == i || b.b == i).collect();
        if incident.len() != 1 || incident[0].order != BondOrder::Single {
            continue;
        }
        let other = if incident[0].a == i { incident[0].b } else { incident[0].a };
        if atoms[other].element == Element::H {
            continue;
        }
        fold.push(i);
    }
    if fold.is_empty() {
        return;
    }
    for &h in &fold {
        let bond = bonds.iter().position(|b| b.a == h || b.b == h).unwrap();
        let other = if bonds[bond].a == h { bonds[bond].b } else { bonds[bond].a };
        atoms[other].explicit_h += 1;
        bonds.remove(bond);
    }
    // Reindex after removals.
    let mut map = vec![usize::MAX; atoms.len()];
    let mut kept = 0usize;
    for i in 0..atoms.len() {
        if !fold.contains(&i) {
            map[i] = kept;
            kept += 1;
        }
    }
    let mut idx = 0usize;
    atoms.retain(|_| {
        let keep = map[idx] != usize::MAX;
        idx += 1;
        keep
    });
    for b in bonds.iter_mut() {
        b.a = map[b.a];
        b.b = map[b.b];
    }
}

fn convert_molecule_error(err: MoleculeError, atom_pos: &[usize]) -> SmilesError {
    // Positions refer to pre-folding atom indices; folding only removes
    // hydrogens, so the mapping is close enough for diagnostics.
    let pos_of = |atom: usize| atom_pos.get(atom).copied().unwrap_or(0);
    match err {
        MoleculeError::ValenceViolation {
            atom,
            element,
            valence,
            charge,
        } => SmilesError::new(
            pos_of(atom),
            SmilesErrorKind::ValenceViolation {
                element: element.to_string(),
                valence,
                charge,
            },
        ),
        MoleculeError::KekulizationFailure(atom) => {
            SmilesError::new(pos_of(atom), SmilesErrorKind::KekulizationFailure)
        }
        MoleculeError::DuplicateBond(a, _) => SmilesError::new(pos_of(a), SmilesErrorKind::DuplicateBond),
        MoleculeError::AromaticBondOutsideSystem(a, _) => {
            SmilesError::new(pos_of(a), SmilesErrorKind::KekulizationFailure)
        }
        MoleculeError::AromaticElement(_) => SmilesError::new(0, SmilesErrorKind::KekulizationFailure),
        MoleculeError::Empty => SmilesError::new(0, SmilesErrorKind::EmptyInput),
        MoleculeError::BondIndexOutOfRange(_) | MoleculeError::SelfBond(_) => {
            SmilesError::new(0, SmilesErrorKind::DuplicateBond)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn methane() {
        let m = parse_smiles("C").unwrap();
        assert_eq!(m.num_atoms(), 1);
        assert_eq!(m.atom(0).implicit_h, 4);
        assert_eq!(m.bonds().len(), 0);
    }

    #[test]
    fn aspirin_counts() {
        let m = parse_smiles("CC(=O)Oc1ccccc1C(=O)O").unwrap();
        assert_eq!(m.heavy_atom_count(), 13);
        assert_eq!(m.bonds().len(), 13);
        assert_eq!(m.rings().len(), 1);
        assert_eq!(m.rings()[0].len(), 6);
        assert_eq!(m.atoms().iter().filter(|a| a.aromatic).count(), 6);
    }

    #[test]
    fn unbalanced_parenthesis() {
        let err = parse_smiles("C(").unwrap_err();
        assert_eq!(err.kind, SmilesErrorKind::UnbalancedParenthesis);
        assert_eq!(err.position, 1);
        let err = parse_smiles("CC)").unwrap_err();
        assert_eq!(err.kind, SmilesErrorKind::UnbalancedParenthesis);
    }

    #[test]
    fn benzene_aromatic_hydrogens() {
        let m = parse_smiles("c1ccccc1").unwrap();
        assert_eq!(m.num_atoms(), 6);
        for a in m.atoms() {
            assert!(a.aromatic);
            assert_eq!(a.implicit_h, 1);
        }
    }

    #[test]
    fn unclosed_ring() {
        let err = parse_smiles("C1CC").unwrap_err();
        assert!(matches!(err.kind, SmilesErrorKind::UnclosedRingBond(1)));
        assert_eq!(err.position, 1);
    }

    #[test]
    fn unknown_element() {
        let err = parse_smiles("[Xx]C").unwrap_err();
        assert_eq!(err.kind, SmilesErrorKind::UnknownElement("Xx".into()));
    }

    #[test]
    fn valence_violation_position() {
        let err = parse_smiles("CC(C)(C)(C)C").unwrap_err();
        assert!(matches!(err.kind, SmilesErrorKind::ValenceViolation { .. }));
        assert_eq!(err.position, 1);
    }

    #[test]
    fn aromatic_atom_outside_ring_fails() {
        let err = parse_smiles("cc").unwrap_err();
        assert_eq!(err.kind, SmilesErrorKind::KekulizationFailure);
    }

    #[test]
    fn odd_carbocycle_fails_kekulization() {
        let err = parse_smiles("c1cccc1").unwrap_err();
        assert_eq!(err.kind, SmilesErrorKind::KekulizationFailure);
    }

    #[test]
    fn charges_and_isotopes() {
        let m = parse_smiles("[13CH4]").unwrap();
        assert_eq!(m.atom(0).isotope, Some(13));
        assert_eq!(m.atom(0).explicit_h, 4);
        let m = parse_smiles("[NH4+]").unwrap();
        assert_eq!(m.atom(0).formal_charge, 1);
        let m = parse_smiles("CC(=O)[O-]").unwrap();
        assert_eq!(m.atom(3).formal_charge, -1);
        let m = parse_smiles("[Fe+2]").unwrap();
        assert_eq!(m.atom(0).formal_charge, 2);
    }

    #[test]
    fn fragments_via_dot() {
        let m = parse_smiles("CC(=O)[O-].[Na+]").unwrap();
        assert_eq!(m.fragments().len(), 2);
    }

    #[test]
    fn explicit_hydrogens_fold() {
        let m = parse_smiles("C([H])([H])([H])[H]").unwrap();
        assert_eq!(m.num_atoms(), 1);
        assert_eq!(m.atom(0).total_h(), 4);
        // Isotopic hydrogens survive as atoms.
        let m = parse_smiles("C([2H])").unwrap();
        assert_eq!(m.num_atoms(), 2);
    }

    #[test]
    fn stereo_tokens_counted_and_ignored() {
        let m = parse_smiles("C/C=C/[C@H](C)O").unwrap();
        assert_eq!(m.stereo_mark_count(), 3);
    }

    #[test]
    fn pyridine_and_pyrrole() {
        let m = parse_smiles("c1ccncc1").unwrap();
        let n = m.atoms().iter().find(|a| a.element == Element::N).unwrap();
        assert_eq!(n.total_h(), 0);
        let m = parse_smiles("c1cc[nH]c1").unwrap();
        let n = m.atoms().iter().find(|a| a.element == Element::N).unwrap();
        assert_eq!(n.total_h(), 1);
    }

    #[test]
    fn percent_ring_closure() {
        let m = parse_smiles("C%10CCCCC%10").unwrap();
        assert_eq!(m.rings()[0].len(), 6);
    }

    #[test]
    fn ring_bond_symbol_mismatch() {
        let err = parse_smiles("C=1CCCC-1").unwrap_err();
        assert_eq!(err.kind, SmilesErrorKind::RingBondMismatch);
    }

    #[test]
    fn selenophene_parses() {
        let m = parse_smiles("c1cc[se]1").unwrap_err();
        // Four-membered selenophene is not kekulizable; the real ring is five.
        assert_eq!(m.kind, SmilesErrorKind::KekulizationFailure);
        let m = parse_smiles("c1ccc[se]1").unwrap();
        assert_eq!(m.num_atoms(), 5);
    }
}
