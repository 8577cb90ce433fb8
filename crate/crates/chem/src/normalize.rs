//! Library preprocessing chemistry: salt stripping, charge neutralization,
//! and the element whitelist filter.

use crate::element::Element;
use crate::molecule::{ImplicitH, Molecule};
use crate::write::write_smiles;
use std::collections::HashSet;

/// Default element whitelist for drug-like libraries.
pub const ELEMENT_WHITELIST: [Element; 13] = [
    Element::H,
    Element::B,
    Element::C,
    Element::N,
    Element::O,
    Element::F,
    Element::Si,
    Element::P,
    Element::S,
    Element::Cl,
    Element::Se,
    Element::Br,
    Element::I,
];

pub fn default_whitelist() -> HashSet<Element> {
    ELEMENT_WHITELIST.iter().copied().collect()
}

/// True iff every atom's element is whitelisted.
pub fn passes_element_filter(mol: &Molecule, whitelist: &HashSet<Element>) -> bool {
    mol.atoms().iter().all(|a| whitelist.contains(&a.element))
}

/// Keep the fragment with the most heavy atoms; ties broken by larger
/// molecular weight, then by smaller canonical SMILES.
pub fn strip_salts(mol: &Molecule) -> Molecule {
    let fragments = mol.fragments();
    if fragments.len() <= 1 {
        return mol.clone();
    }
    let mut best: Option<(usize, f64, String, Molecule)> = None;
    for frag in &fragments {
        let sub = mol
            .extract(frag)
            .expect("fragment of a valid molecule is valid");
        let heavy = sub.heavy_atom_count();
        let mw = sub.molecular_weight();
        let better = match &best {
            None => true,
            Some((bh, bw, bs, _)) => {
                if heavy != *bh {
                    heavy > *bh
                } else if (mw - *bw).abs() > 1e-9 {
                    mw > *bw
                } else {
                    // Lazily compare canonical strings only on a true tie.
                    write_smiles(&sub) < *bs
                }
            }
        };
        if better {
            let smiles = write_smiles(&sub);
            best = Some((heavy, mw, smiles, sub));
        }
    }
    best.expect("non-empty molecule has fragments").3
}

/// Charge neutralization rules:
///   - anionic N/O/S not directly bonded to a positively charged atom gain a
///     hydrogen and become neutral;
///   - cationic N/O carrying at least one hydrogen and not directly bonded
///     to a negatively charged atom lose one hydrogen and become neutral;
///   - everything else (quaternary nitrogen included) is left untouched.
/// A rule is skipped for an atom whenever applying it would break valence.
pub fn neutralize_charges(mol: &Molecule) -> Molecule {
    let (mut atoms, bonds) = mol.to_specs(false);
    let original_charge: Vec<i8> = atoms.iter().map(|a| a.formal_charge).collect();

    let bonded_charge = |i: usize, sign: i8| -> bool {
        mol.neighbors(i)
            .iter()
            .any(|&(nb, _)| original_charge[nb].signum() == sign)
    };
    let bond_sum = |i: usize| -> u32 {
        mol.neighbors(i)
            .iter()
            .map(|&(_, bi)| mol.bonds()[bi].kekule as u32)
            .sum()
    };

    let mut changed = false;
    for i in 0..atoms.len() {
        let element = atoms[i].element;
        let charge = original_charge[i];
        let total_h = mol.atom(i).total_h() as u32;
        if charge == -1 && matches!(element, Element::N | Element::O | Element::S) && !bonded_charge(i, 1) {
            // Gaining one hydrogen: total valence goes up by one.
            let new_total = bond_sum(i) + total_h + 1;
            if valence_ok(element, 0, new_total) {
                atoms[i].formal_charge = 0;
                atoms[i].explicit_h = mol.atom(i).explicit_h;
                atoms[i].implicit = ImplicitH::Fixed(mol.atom(i).implicit_h + 1);
                changed = true;
            }
        } else if charge == 1 && matches!(element, Element::N | Element::O) && total_h >= 1 && !bonded_charge(i, -1)
        {
            let new_total = bond_sum(i) + total_h - 1;
            if valence_ok(element, 0, new_total) {
                atoms[i].formal_charge = 0;
                let (expl, imp) = remove_one_h(mol.atom(i).explicit_h, mol.atom(i).implicit_h);
                atoms[i].explicit_h = expl;
                atoms[i].implicit = ImplicitH::Fixed(imp);
                changed = true;
            }
        }
    }
    if !changed {
        return mol.clone();
    }
    Molecule::from_parts(atoms, bonds)
        .expect("neutralization preserves valence by construction")
        .with_stereo_marks(mol.stereo_mark_count())
}

fn valence_ok(element: Element, charge: i8, total: u32) -> bool {
    match element.allowed_valences(charge) {
        Some(vs) => vs.iter().any(|&v| v as u32 == total),
        None => true,
    }
}

fn remove_one_h(explicit: u8, implicit: u8) -> (u8, u8) {
    if implicit > 0 {
        (explicit, implicit - 1)
    } else {
        (explicit.saturating_sub(1), implicit)
    }
}
