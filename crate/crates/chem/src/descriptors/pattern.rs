//! Minimal atom-pattern language for the contribution tables.
//!
//! A table line is `<pattern> <coefficient>`, where the pattern is a
//! comma-joined list of constraints `key=value` or `key>=value`. The first
//! matching line wins. Blank lines and `#` comments are skipped.
//!
//! Keys (all counts refer to heavy neighbors; hydrogens count into `h`):
//!   el      element symbol (the only string-valued key)
//!   arom    atom aromatic flag (0/1)
//!   chg     formal charge
//!   h       total hydrogen count (implicit + explicit + H neighbors)
//!   d       heavy-atom degree
//!   sb/db/tb/ab  single/double/triple/aromatic bonds to heavy atoms
//!   ring    member of any ring (0/1)
//!   ring3   member of a three-membered ring (0/1)
//!   nar     aromatic neighbors
//!   narc    aromatic carbon neighbors
//!   narhet  aromatic non-carbon neighbors
//!   nhet    non-carbon heteroatom neighbors (N O P S F Cl Br I Se)
//!   nx      neighbors outside H/C/N/O/P/S/halogens/Se
//!   nf/ncl/nbr/ni/nn/no/ns  neighbors of a specific element
//!   nsbar   single-bonded aromatic neighbors
//!   nsbc/nsbn/nsbo/nsbs     single-bonded non-aromatic C/N/O/S neighbors
//!   ndbhet  double-bonded heteroatom neighbors

use crate::element::Element;
use crate::molecule::Molecule;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("line {0}: {1}")]
    Malformed(usize, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
enum Constraint {
    Element(Element),
    Count { key: CountKey, op: Op, value: i32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CountKey {
    Arom,
    Charge,
    H,
    Degree,
    Single,
    Double,
    Triple,
    AromBonds,
    Ring,
    Ring3,
    NAr,
    NArC,
    NArHet,
    NHet,
    NX,
    NF,
    NCl,
    NBr,
    NI,
    NN,
    NO,
    NS,
    NSbAr,
    NSbC,
    NSbN,
    NSbO,
    NSbS,
    NDbHet,
}

#[derive(Debug, Clone)]
pub struct PatternRule {
    constraints: Vec<Constraint>,
    pub coefficient: f64,
}

#[derive(Debug, Clone)]
pub struct PatternTable {
    rules: Vec<PatternRule>,
}

/// Per-atom feature vector the patterns are evaluated against.
#[derive(Debug, Clone, Copy)]
pub struct AtomFeatures {
    pub element: Element,
    arom: i32,
    charge: i32,
    h: i32,
    degree: i32,
    single: i32,
    double: i32,
    triple: i32,
    arom_bonds: i32,
    ring: i32,
    ring3: i32,
    nar: i32,
    narc: i32,
    narhet: i32,
    nhet: i32,
    nx: i32,
    nf: i32,
    ncl: i32,
    nbr: i32,
    ni: i32,
    nn: i32,
    no: i32,
    ns: i32,
    nsbar: i32,
    nsbc: i32,
    nsbn: i32,
    nsbo: i32,
    nsbs: i32,
    ndbhet: i32,
}

fn is_simple_het(e: Element) -> bool {
    matches!(
        e,
        Element::N
            | Element::O
            | Element::P
            | Element::S
            | Element::F
            | Element::Cl
            | Element::Br
            | Element::I
            | Element::Se
    )
}

pub fn atom_features(mol: &Molecule, i: usize) -> AtomFeatures {
    let a = mol.atom(i);
    let in_ring3 = mol.rings().iter().any(|r| r.len() == 3 && r.contains(&i));
    let mut f = AtomFeatures {
        element: a.element,
        arom: a.aromatic as i32,
        charge: a.formal_charge as i32,
        h: a.total_h() as i32,
        degree: 0,
        single: 0,
        double: 0,
        triple: 0,
        arom_bonds: 0,
        ring: a.in_ring as i32,
        ring3: in_ring3 as i32,
        nar: 0,
        narc: 0,
        narhet: 0,
        nhet: 0,
        nx: 0,
        nf: 0,
        ncl: 0,
        nbr: 0,
        ni: 0,
        nn: 0,
        no: 0,
        ns: 0,
        nsbar: 0,
        nsbc: 0,
        nsbn: 0,
        nsbo: 0,
        nsbs: 0,
        ndbhet: 0,
    };
    for &(nb, bi) in mol.neighbors(i) {
        let natom = mol.atom(nb);
        if natom.element == Element::H {
            f.h += 1;
            continue;
        }
        f.degree += 1;
        let bond = &mol.bonds()[bi];
        if bond.is_aromatic() {
            f.arom_bonds += 1;
        } else {
            match bond.kekule {
                1 => f.single += 1,
                2 => f.double += 1,
                _ => f.triple += 1,
            }
        }
        if natom.aromatic {
            f.nar += 1;
            if natom.element == Element::C {
                f.narc += 1;
            } else {
                f.narhet += 1;
            }
            if !bond.is_aromatic() && bond.kekule == 1 {
                f.nsbar += 1;
            }
        } else if !bond.is_aromatic() && bond.kekule == 1 {
            match natom.element {
                Element::C => f.nsbc += 1,
                Element::N => f.nsbn += 1,
                Element::O => f.nsbo += 1,
                Element::S => f.nsbs += 1,
                _ => {}
            }
        }
        match natom.element {
            Element::C => {}
            e if is_simple_het(e) => f.nhet += 1,
            _ => f.nx += 1,
        }
        match natom.element {
            Element::F => f.nf += 1,
            Element::Cl => f.ncl += 1,
            Element::Br => f.nbr += 1,
            Element::I => f.ni += 1,
            Element::N => f.nn += 1,
            Element::O => f.no += 1,
            Element::S => f.ns += 1,
            _ => {}
        }
        if !bond.is_aromatic() && bond.kekule == 2 && natom.element != Element::C && natom.element != Element::H {
            f.ndbhet += 1;
        }
    }
    f
}

impl AtomFeatures {
    pub fn heavy_degree(&self) -> i32 {
        self.degree
    }

    pub fn hydrogens(&self) -> i32 {
        self.h
    }

    fn count(&self, key: CountKey) -> i32 {
        match key {
            CountKey::Arom => self.arom,
            CountKey::Charge => self.charge,
            CountKey::H => self.h,
            CountKey::Degree => self.degree,
            CountKey::Single => self.single,
            CountKey::Double => self.double,
            CountKey::Triple => self.triple,
            CountKey::AromBonds => self.arom_bonds,
            CountKey::Ring => self.ring,
            CountKey::Ring3 => self.ring3,
            CountKey::NAr => self.nar,
            CountKey::NArC => self.narc,
            CountKey::NArHet => self.narhet,
            CountKey::NHet => self.nhet,
            CountKey::NX => self.nx,
            CountKey::NF => self.nf,
            CountKey::NCl => self.ncl,
            CountKey::NBr => self.nbr,
            CountKey::NI => self.ni,
            CountKey::NN => self.nn,
            CountKey::NO => self.no,
            CountKey::NS => self.ns,
            CountKey::NSbAr => self.nsbar,
            CountKey::NSbC => self.nsbc,
            CountKey::NSbN => self.nsbn,
            CountKey::NSbO => self.nsbo,
            CountKey::NSbS => self.nsbs,
            CountKey::NDbHet => self.ndbhet,
        }
    }
}

fn count_key(name: &str) -> Option<CountKey> {
    Some(match name {
        "arom" => CountKey::Arom,
        "chg" => CountKey::Charge,
        "h" => CountKey::H,
        "d" => CountKey::Degree,
        "sb" => CountKey::Single,
        "db" => CountKey::Double,
        "tb" => CountKey::Triple,
        "ab" => CountKey::AromBonds,
        "ring" => CountKey::Ring,
        "ring3" => CountKey::Ring3,
        "nar" => CountKey::NAr,
        "narc" => CountKey::NArC,
        "narhet" => CountKey::NArHet,
        "nhet" => CountKey::NHet,
        "nx" => CountKey::NX,
        "nf" => CountKey::NF,
        "ncl" => CountKey::NCl,
        "nbr" => CountKey::NBr,
        "ni" => CountKey::NI,
        "nn" => CountKey::NN,
        "no" => CountKey::NO,
        "ns" => CountKey::NS,
        "nsbar" => CountKey::NSbAr,
        "nsbc" => CountKey::NSbC,
        "nsbn" => CountKey::NSbN,
        "nsbo" => CountKey::NSbO,
        "nsbs" => CountKey::NSbS,
        "ndbhet" => CountKey::NDbHet,
        _ => return None,
    })
}

impl PatternTable {
    pub fn parse(text: &str) -> Result<PatternTable, PatternError> {
        let mut rules = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (pattern, coef) = line
                .rsplit_once(char::is_whitespace)
                .ok_or_else(|| PatternError::Malformed(lineno + 1, "missing coefficient".into()))?;
            let coefficient: f64 = coef
                .trim()
                .parse()
                .map_err(|_| PatternError::Malformed(lineno + 1, format!("bad coefficient '{coef}'")))?;
            let mut constraints = Vec::new();
            for part in pattern.trim().split(',') {
                let (key, op, value) = if let Some((k, v)) = part.split_once(">=") {
                    (k, Op::Ge, v)
                } else if let Some((k, v)) = part.split_once('=') {
                    (k, Op::Eq, v)
                } else {
                    return Err(PatternError::Malformed(lineno + 1, format!("bad constraint '{part}'")));
                };
                if key == "el" {
                    let element = Element::from_symbol(value)
                        .ok_or_else(|| PatternError::Malformed(lineno + 1, format!("unknown element '{value}'")))?;
                    constraints.push(Constraint::Element(element));
                } else {
                    let ck = count_key(key)
                        .ok_or_else(|| PatternError::Malformed(lineno + 1, format!("unknown key '{key}'")))?;
                    let value: i32 = value
                        .parse()
                        .map_err(|_| PatternError::Malformed(lineno + 1, format!("bad value '{value}'")))?;
                    constraints.push(Constraint::Count { key: ck, op, value });
                }
            }
            rules.push(PatternRule {
                constraints,
                coefficient,
            });
        }
        Ok(PatternTable { rules })
    }

    /// Coefficient of the first rule matching the features, if any.
    pub fn first_match(&self, f: &AtomFeatures) -> Option<f64> {
        self.rules.iter().find(|r| rule_matches(r, f)).map(|r| r.coefficient)
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

fn rule_matches(rule: &PatternRule, f: &AtomFeatures) -> bool {
    rule.constraints.iter().all(|c| match c {
        Constraint::Element(e) => f.element == *e,
        Constraint::Count { key, op, value } => {
            let actual = f.count(*key);
            match op {
                Op::Eq => actual == *value,
                Op::Ge => actual >= *value,
            }
        }
    })
}
