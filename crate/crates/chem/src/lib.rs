//! Chemistry substrate: SMILES in/out, molecular graphs, normalization,
//! circular fingerprints, physicochemical descriptors, and accessibility
//! scoring.

pub mod cnsmpo;
pub mod descriptors;
pub mod element;
pub mod fingerprint;
pub mod io;
pub mod molecule;
pub mod normalize;
pub mod sascore;
pub mod smiles;
pub mod write;

pub use element::Element;
pub use fingerprint::{Fingerprint, FingerprintConfig};
pub use molecule::{Atom, AtomSpec, Bond, BondOrder, BondSpec, ImplicitH, Molecule, MoleculeError};
pub use smiles::{parse_smiles, SmilesError, SmilesErrorKind};
pub use write::{canonical_ranks, write_smiles};
