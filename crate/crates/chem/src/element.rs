//! Periodic table: symbols, atomic numbers, standard atomic weights, and the
//! default valence model used for implicit-hydrogen filling and validation.

use serde::{Deserialize, Serialize};

macro_rules! elements {
    ($(($variant:ident, $sym:literal, $num:literal, $weight:literal)),+ $(,)?) => {
        /// A chemical element, identified by its symbol.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum Element {
            $($variant),+
        }

        impl Element {
            pub fn symbol(self) -> &'static str {
                match self { $(Element::$variant => $sym),+ }
            }

            pub fn atomic_number(self) -> u8 {
                match self { $(Element::$variant => $num),+ }
            }

            /// Standard atomic weight (conventional value for elements with
            /// an interval; most stable isotope for elements without one).
            pub fn atomic_weight(self) -> f64 {
                match self { $(Element::$variant => $weight),+ }
            }

            pub fn from_symbol(sym: &str) -> Option<Element> {
                match sym {
                    $($sym => Some(Element::$variant),)+
                    _ => None,
                }
            }
        }
    };
}

elements![
    (H, "H", 1, 1.008),
    (He, "He", 2, 4.0026),
    (Li, "Li", 3, 6.94),
    (Be, "Be", 4, 9.0122),
    (B, "B", 5, 10.81),
    (C, "C", 6, 12.011),
    (N, "N", 7, 14.007),
    (O, "O", 8, 15.999),
    (F, "F", 9, 18.998),
    (Ne, "Ne", 10, 20.180),
    (Na, "Na", 11, 22.990),
    (Mg, "Mg", 12, 24.305),
    (Al, "Al", 13, 26.982),
    (Si, "Si", 14, 28.085),
    (P, "P", 15, 30.974),
    (S, "S", 16, 32.06),
    (Cl, "Cl", 17, 35.45),
    (Ar, "Ar", 18, 39.95),
    (K, "K", 19, 39.098),
    (Ca, "Ca", 20, 40.078),
    (Sc, "Sc", 21, 44.956),
    (Ti, "Ti", 22, 47.867),
    (V, "V", 23, 50.942),
    (Cr, "Cr", 24, 51.996),
    (Mn, "Mn", 25, 54.938),
    (Fe, "Fe", 26, 55.845),
    (Co, "Co", 27, 58.933),
    (Ni, "Ni", 28, 58.693),
    (Cu, "Cu", 29, 63.546),
    (Zn, "Zn", 30, 65.38),
    (Ga, "Ga", 31, 69.723),
    (Ge, "Ge", 32, 72.630),
    (As, "As", 33, 74.922),
    (Se, "Se", 34, 78.971),
    (Br, "Br", 35, 79.904),
    (Kr, "Kr", 36, 83.798),
    (Rb, "Rb", 37, 85.468),
    (Sr, "Sr", 38, 87.62),
    (Y, "Y", 39, 88.906),
    (Zr, "Zr", 40, 91.224),
    (Nb, "Nb", 41, 92.906),
    (Mo, "Mo", 42, 95.95),
    (Tc, "Tc", 43, 97.907),
    (Ru, "Ru", 44, 101.07),
    (Rh, "Rh", 45, 102.91),
    (Pd, "Pd", 46, 106.42),
    (Ag, "Ag", 47, 107.87),
    (Cd, "Cd", 48, 112.41),
    (In, "In", 49, 114.82),
    (Sn, "Sn", 50, 118.71),
    (Sb, "Sb", 51, 121.76),
    (Te, "Te", 52, 127.60),
    (I, "I", 53, 126.904),
    (Xe, "Xe", 54, 131.29),
    (Cs, "Cs", 55, 132.91),
    (Ba, "Ba", 56, 137.33),
    (La, "La", 57, 138.91),
    (Ce, "Ce", 58, 140.12),
    (Pr, "Pr", 59, 140.91),
    (Nd, "Nd", 60, 144.24),
    (Pm, "Pm", 61, 144.913),
    (Sm, "Sm", 62, 150.36),
    (Eu, "Eu", 63, 151.96),
    (Gd, "Gd", 64, 157.25),
    (Tb, "Tb", 65, 158.93),
    (Dy, "Dy", 66, 162.50),
    (Ho, "Ho", 67, 164.93),
    (Er, "Er", 68, 167.26),
    (Tm, "Tm", 69, 168.93),
    (Yb, "Yb", 70, 173.05),
    (Lu, "Lu", 71, 174.97),
    (Hf, "Hf", 72, 178.49),
    (Ta, "Ta", 73, 180.95),
    (W, "W", 74, 183.84),
    (Re, "Re", 75, 186.21),
    (Os, "Os", 76, 190.23),
    (Ir, "Ir", 77, 192.22),
    (Pt, "Pt", 78, 195.08),
    (Au, "Au", 79, 196.97),
    (Hg, "Hg", 80, 200.59),
    (Tl, "Tl", 81, 204.38),
    (Pb, "Pb", 82, 207.2),
    (Bi, "Bi", 83, 208.98),
    (Po, "Po", 84, 208.982),
    (At, "At", 85, 209.987),
    (Rn, "Rn", 86, 222.018),
    (Fr, "Fr", 87, 223.020),
    (Ra, "Ra", 88, 226.025),
    (Ac, "Ac", 89, 227.028),
    (Th, "Th", 90, 232.04),
    (Pa, "Pa", 91, 231.04),
    (U, "U", 92, 238.03),
    (Np, "Np", 93, 237.048),
    (Pu, "Pu", 94, 244.064),
    (Am, "Am", 95, 243.061),
    (Cm, "Cm", 96, 247.070),
    (Bk, "Bk", 97, 247.070),
    (Cf, "Cf", 98, 251.080),
    (Es, "Es", 99, 252.083),
    (Fm, "Fm", 100, 257.095),
    (Md, "Md", 101, 258.098),
    (No, "No", 102, 259.101),
    (Lr, "Lr", 103, 262.110),
    (Rf, "Rf", 104, 267.122),
    (Db, "Db", 105, 268.126),
    (Sg, "Sg", 106, 269.128),
    (Bh, "Bh", 107, 270.133),
    (Hs, "Hs", 108, 269.134),
    (Mt, "Mt", 109, 277.154),
    (Ds, "Ds", 110, 282.166),
    (Rg, "Rg", 111, 282.169),
    (Cn, "Cn", 112, 286.179),
    (Nh, "Nh", 113, 286.182),
    (Fl, "Fl", 114, 290.192),
    (Mc, "Mc", 115, 290.196),
    (Lv, "Lv", 116, 293.205),
    (Ts, "Ts", 117, 294.211),
    (Og, "Og", 118, 295.216),
];

impl Element {
    /// Elements writable without brackets in SMILES.
    pub fn is_organic_subset(self) -> bool {
        matches!(
            self,
            Element::B
                | Element::C
                | Element::N
                | Element::O
                | Element::P
                | Element::S
                | Element::F
                | Element::Cl
                | Element::Br
                | Element::I
        )
    }

    /// Elements that may carry the aromatic flag.
    pub fn supports_aromatic(self) -> bool {
        matches!(
            self,
            Element::B
                | Element::C
                | Element::N
                | Element::O
                | Element::P
                | Element::S
                | Element::Se
                | Element::As
        )
    }

    /// Allowed total valences for the element at the given formal charge, or
    /// `None` when the element has no entry in the valence model (such atoms
    /// are not validated and never receive implicit hydrogens).
    ///
    /// Charge shifts follow the usual organic conventions: `[O-]` has one
    /// allowed bond, `[NH4+]` four, carbocations and carbanions three.
    pub fn allowed_valences(self, charge: i8) -> Option<Vec<u8>> {
        let c = charge as i32;
        let set: Vec<i32> = match self {
            Element::H => {
                if c == 0 {
                    vec![1]
                } else {
                    vec![0]
                }
            }
            Element::B => vec![3 - c],
            Element::C | Element::Si => vec![4 - c.abs()],
            Element::N => vec![3 + c],
            Element::O => vec![2 + c],
            Element::F | Element::Cl | Element::Br | Element::I => vec![1 + c],
            Element::P => vec![3 + c, 5 + c],
            Element::S | Element::Se => vec![2 + c, 4 + c, 6 + c],
            _ => return None,
        };
        Some(set.into_iter().filter(|&v| v >= 0).map(|v| v as u8).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_round_trip() {
        for sym in ["H", "C", "Cl", "Se", "Og"] {
            let e = Element::from_symbol(sym).unwrap();
            assert_eq!(e.symbol(), sym);
        }
        assert_eq!(Element::from_symbol("Xx"), None);
    }

    #[test]
    fn charged_valences() {
        assert_eq!(Element::N.allowed_valences(1).unwrap(), vec![4]);
        assert_eq!(Element::N.allowed_valences(-1).unwrap(), vec![2]);
        assert_eq!(Element::O.allowed_valences(-1).unwrap(), vec![1]);
        assert_eq!(Element::C.allowed_valences(1).unwrap(), vec![3]);
        assert_eq!(Element::Cl.allowed_valences(-1).unwrap(), vec![0]);
        assert_eq!(Element::Fe.allowed_valences(0), None);
    }

    #[test]
    fn weights_match_reference_values() {
        assert!((Element::C.atomic_weight() - 12.011).abs() < 1e-9);
        assert!((Element::N.atomic_weight() - 14.007).abs() < 1e-9);
    }
}
