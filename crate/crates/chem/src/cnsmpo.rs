//! Central-nervous-system multiparameter desirability score: six piecewise
//! linear component functions averaged to the unit interval.

use crate::descriptors::PhyschemProfile;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DesirabilityKind {
    MonotoneDecreasing,
    Hump,
}

/// Piecewise-linear desirability: interpolation between breakpoints,
/// constant extrapolation beyond the endpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesirabilityFunction {
    pub kind: DesirabilityKind,
    /// (value, desirability) pairs with strictly increasing values and
    /// desirabilities within [0, 1].
    pub breakpoints: Vec<(f64, f64)>,
}

impl DesirabilityFunction {
    pub fn new(kind: DesirabilityKind, breakpoints: Vec<(f64, f64)>) -> Self {
        debug_assert!(breakpoints.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(breakpoints.iter().all(|&(_, d)| (0.0..=1.0).contains(&d)));
        DesirabilityFunction { kind, breakpoints }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let pts = &self.breakpoints;
        if pts.is_empty() {
            return 1.0;
        }
        if x <= pts[0].0 {
            return pts[0].1;
        }
        if x >= pts[pts.len() - 1].0 {
            return pts[pts.len() - 1].1;
        }
        for w in pts.windows(2) {
            let (x0, y0) = w[0];
            let (x1, y1) = w[1];
            if x <= x1 {
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        pts[pts.len() - 1].1
    }
}

fn decreasing(hi: f64, lo: f64) -> DesirabilityFunction {
    DesirabilityFunction::new(DesirabilityKind::MonotoneDecreasing, vec![(hi, 1.0), (lo, 0.0)])
}

pub fn clogp_desirability() -> DesirabilityFunction {
    decreasing(3.0, 5.0)
}

pub fn clogd_desirability() -> DesirabilityFunction {
    decreasing(2.0, 4.0)
}

pub fn mw_desirability() -> DesirabilityFunction {
    decreasing(360.0, 500.0)
}

pub fn tpsa_desirability() -> DesirabilityFunction {
    DesirabilityFunction::new(
        DesirabilityKind::Hump,
        vec![(20.0, 0.0), (40.0, 1.0), (90.0, 1.0), (120.0, 0.0)],
    )
}

pub fn hbd_desirability() -> DesirabilityFunction {
    decreasing(0.5, 3.5)
}

pub fn pka_desirability() -> DesirabilityFunction {
    decreasing(8.0, 10.0)
}

/// Average of the six component desirabilities, in [0, 1]. A molecule with
/// no basic center takes desirability 1.0 on the pKa component.
pub fn cns_mpo_score(profile: &PhyschemProfile) -> f64 {
    let parts = [
        clogp_desirability().eval(profile.clogp),
        clogd_desirability().eval(profile.clogd),
        mw_desirability().eval(profile.mw),
        tpsa_desirability().eval(profile.tpsa),
        hbd_desirability().eval(profile.hbd as f64),
        profile.pka_basic.map_or(1.0, |p| pka_desirability().eval(p)),
    ];
    parts.iter().sum::<f64>() / 6.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(clogp: f64, clogd: f64, mw: f64, tpsa: f64, hbd: u32, pka: Option<f64>) -> PhyschemProfile {
        PhyschemProfile {
            mw,
            clogp,
            clogd,
            tpsa,
            hbd,
            hba: 0,
            pka_basic: pka,
        }
    }

    #[test]
    fn plateau_profile_scores_one() {
        let p = profile(2.0, 1.0, 300.0, 60.0, 0, Some(7.0));
        assert!((cns_mpo_score(&p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_hbd_leaves_plateau() {
        // hbd = 1 sits on the 0.5 -> 3.5 ramp: desirability 2.5/3.
        let p = profile(2.0, 1.0, 300.0, 60.0, 1, Some(7.0));
        let expected = (5.0 + 2.5 / 3.0) / 6.0;
        assert!((cns_mpo_score(&p) - expected).abs() < 1e-12);
    }

    #[test]
    fn clogp_ramp_midpoint() {
        let p = profile(4.0, 1.0, 300.0, 60.0, 0, Some(7.0));
        assert!((cns_mpo_score(&p) - (5.0 + 0.5) / 6.0).abs() < 1e-12);
    }

    #[test]
    fn worst_case_scores_zero() {
        let p = profile(9.0, 9.0, 900.0, 300.0, 9, Some(12.0));
        assert_eq!(cns_mpo_score(&p), 0.0);
    }

    #[test]
    fn missing_pka_counts_as_optimal() {
        let p = profile(2.0, 1.0, 300.0, 60.0, 0, None);
        assert!((cns_mpo_score(&p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tpsa_component_is_unimodal() {
        let d = tpsa_desirability();
        assert_eq!(d.eval(10.0), 0.0);
        assert!((d.eval(30.0) - 0.5).abs() < 1e-12);
        assert_eq!(d.eval(65.0), 1.0);
        assert!((d.eval(105.0) - 0.5).abs() < 1e-12);
        assert_eq!(d.eval(150.0), 0.0);
    }

    #[test]
    fn monotone_in_each_penalized_direction() {
        let base = profile(2.0, 1.0, 300.0, 60.0, 0, Some(7.0));
        let score = cns_mpo_score(&base);
        for worse in [
            profile(4.5, 1.0, 300.0, 60.0, 0, Some(7.0)),
            profile(2.0, 3.0, 300.0, 60.0, 0, Some(7.0)),
            profile(2.0, 1.0, 450.0, 60.0, 0, Some(7.0)),
            profile(2.0, 1.0, 300.0, 60.0, 2, Some(7.0)),
            profile(2.0, 1.0, 300.0, 60.0, 0, Some(9.5)),
        ] {
            assert!(cns_mpo_score(&worse) < score);
        }
    }
}
