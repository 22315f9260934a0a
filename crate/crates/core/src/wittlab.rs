//! Witt-class fingerprints: central charge and the coarse invariants used to
//! rule out braided (or braid-reversing) equivalences between categories.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;

use crate::angle::RationalAngle;
use crate::error::{Error, Result};
use crate::localmods::{free_fusion, LocalCategoryData};
use crate::modular::ModularData;
use crate::rootsys::{RootSystem, Series};

const TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct WittFingerprint {
    pub label: String,
    pub rank: usize,
    pub central_charge: Complex64,
    pub dim_multiset: Vec<f64>,
    pub twist_multiset: Vec<RationalAngle>,
    pub self_dual_count: usize,
    pub pointed_rank: usize,
    /// `None` when the split simples of a local category leave it open.
    pub multiplicity_free: Option<bool>,
}

fn sorted_dims(mut d: Vec<f64>) -> Vec<f64> {
    d.sort_by(f64::total_cmp);
    d
}

fn sorted_twists(mut t: Vec<RationalAngle>) -> Vec<RationalAngle> {
    t.sort();
    t
}

impl WittFingerprint {
    pub fn from_modular(md: &ModularData, label: impl Into<String>) -> Result<Self> {
        let pointed_rank = md.qdims.iter().filter(|d| (*d - 1.0).abs() < 1e-9).count();
        Ok(Self {
            label: label.into(),
            rank: md.rank(),
            central_charge: md.central_charge()?,
            dim_multiset: sorted_dims(md.qdims.clone()),
            twist_multiset: sorted_twists(md.twists.clone()),
            self_dual_count: (0..md.rank()).filter(|&i| md.dual[i] == i).count(),
            pointed_rank,
            multiplicity_free: Some(md.fusion()?.multiplicity_free()),
        })
    }

    /// The charge is taken from the base category, which is Witt equivalent.
    pub fn from_local(lc: &LocalCategoryData, label: impl Into<String>) -> Result<Self> {
        let free: Vec<usize> = (0..lc.orbits.len())
            .filter(|&i| lc.orbits[i].local && lc.orbits[i].is_free())
            .collect();
        let mut mult_free = Some(true);
        'outer: for (x, &a) in free.iter().enumerate() {
            for &b in &free[x..] {
                for (c, n) in free_fusion(lc, a, b)? {
                    if n > 1 && lc.orbits[c].is_free() {
                        mult_free = Some(false);
                        break 'outer;
                    }
                }
            }
        }
        if mult_free == Some(true) && free.len() < lc.orbits.iter().filter(|o| o.local).count() {
            mult_free = None;
        }
        let self_dual_count = lc
            .orbits
            .iter()
            .enumerate()
            .filter(|(i, o)| o.local && o.dual == *i)
            .map(|(_, o)| o.stabilizer_order)
            .sum();
        Ok(Self {
            label: label.into(),
            rank: lc.rank(),
            central_charge: lc.central_charge()?,
            dim_multiset: sorted_dims(lc.dims()),
            twist_multiset: sorted_twists(lc.twists()),
            self_dual_count,
            pointed_rank: lc.pointed.rank(),
            multiplicity_free: mult_free,
        })
    }

    pub fn trivial() -> Self {
        Self {
            label: "Vec".into(),
            rank: 1,
            central_charge: Complex64::new(1.0, 0.0),
            dim_multiset: vec![1.0],
            twist_multiset: vec![RationalAngle::new(0, 1)],
            self_dual_count: 1,
            pointed_rank: 1,
            multiplicity_free: Some(true),
        }
    }

    /// Fingerprint of the reverse category.
    pub fn reverse(&self) -> Self {
        Self {
            label: format!("{}^rev", self.label),
            central_charge: self.central_charge.conj(),
            twist_multiset: sorted_twists(self.twist_multiset.iter().map(|t| t.conj()).collect()),
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exclusion {
    CentralCharge,
    Rank,
    DimMultiset,
    TwistMultiset,
    SelfDualCount,
    MultiplicityPattern,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Coincidence {
    /// No invariant tells the two apart; nothing is claimed beyond that.
    Possible,
    ExcludedBy(Exclusion),
}

fn near(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < TOL
}

/// First invariant (in a fixed order) separating `a` from both `b` and its
/// reverse.
pub fn coincidence_test(a: &WittFingerprint, b: &WittFingerprint) -> Coincidence {
    use Exclusion::*;
    if !near(a.central_charge, b.central_charge) && !near(a.central_charge, b.central_charge.conj()) {
        return Coincidence::ExcludedBy(CentralCharge);
    }
    if a.rank != b.rank {
        return Coincidence::ExcludedBy(Rank);
    }
    let dims_equal = a
        .dim_multiset
        .iter()
        .zip(&b.dim_multiset)
        .all(|(x, y)| (x - y).abs() < 1e-9 * x.max(1.0));
    if !dims_equal {
        return Coincidence::ExcludedBy(DimMultiset);
    }
    // the charge and twist checks must agree on orientation
    let braided = near(a.central_charge, b.central_charge) && a.twist_multiset == b.twist_multiset;
    let reversed = near(a.central_charge, b.central_charge.conj()) && a.twist_multiset == b.reverse().twist_multiset;
    if !braided && !reversed {
        return Coincidence::ExcludedBy(TwistMultiset);
    }
    if a.self_dual_count != b.self_dual_count {
        return Coincidence::ExcludedBy(SelfDualCount);
    }
    if let (Some(x), Some(y)) = (a.multiplicity_free, b.multiplicity_free) {
        if x != y {
            return Coincidence::ExcludedBy(MultiplicityPattern);
        }
    }
    Coincidence::Possible
}

/// Multiplicative central charge `exp(πi·t)` of C(g,k), as `t = c/4` with
/// `c = k·dim(g)/(k+h∨)`; `t` is not reduced.
pub fn charge_exponent(series: Series, rank: usize, k: u32) -> Result<Rational64> {
    let rs = RootSystem::new(series, rank)?;
    let dim = (rs.rank + 2 * rs.pos_roots.len()) as i64;
    Ok(Rational64::new(k as i64 * dim, 4 * (k as i64 + rs.h_dual as i64)))
}

fn exp_pi_i(t: Rational64) -> Complex64 {
    let x = PI * (*t.numer() as f64) / (*t.denom() as f64);
    Complex64::new(x.cos(), x.sin())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// C(so5, k).
    So5,
    /// C(so5, 2m)_R^0, parametrized by `m`.
    So5Local,
    /// C(g2, k).
    G2,
}

impl Family {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "so5" => Ok(Self::So5),
            "so5_local" | "so5-local" => Ok(Self::So5Local),
            "g2" => Ok(Self::G2),
            _ => Err(Error::InvalidParameter(format!("unknown family {s:?}"))),
        }
    }

    /// Base category `(series, rank, level)` for parameter `p`.
    pub fn base(self, p: u32) -> (Series, usize, u32) {
        match self {
            Self::So5 => (Series::B, 2, p),
            Self::So5Local => (Series::B, 2, 2 * p),
            Self::G2 => (Series::G, 2, p),
        }
    }

    /// Closed-form charge exponent.
    pub fn closed_form(self, p: u32) -> Rational64 {
        let p = p as i64;
        match self {
            Self::So5 => Rational64::new(5 * p, 2 * (p + 3)),
            Self::So5Local => Rational64::new(5 * p, 2 * p + 3),
            Self::G2 => Rational64::new(7 * p, 2 * (p + 4)),
        }
    }

    /// Open window `(lo, hi)` the exponent lies in, and from which parameter on.
    pub fn window(self) -> Option<(Rational64, Rational64, u32)> {
        match self {
            Self::So5 => None,
            Self::So5Local => Some((Rational64::from(2), Rational64::new(5, 2), 7)),
            Self::G2 => Some((Rational64::from(3), Rational64::new(7, 2), 25)),
        }
    }
}

/// Families with closed-form charges and the parameter ranges they are
/// checked on.
pub struct ClosedFormTable;

impl ClosedFormTable {
    pub fn entries() -> &'static [(Family, u32, u32)] {
        &[(Family::So5, 1, 30), (Family::So5Local, 1, 10), (Family::G2, 1, 30)]
    }

    /// Largest deviation between Gauss sum and closed form over the range.
    pub fn max_residual(family: Family, lo: u32, hi: u32) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for p in lo..=hi {
            let (s, n, k) = family.base(p);
            let md = ModularData::new(s, n, k)?;
            worst = worst.max((md.central_charge()? - exp_pi_i(family.closed_form(p))).norm());
        }
        Ok(worst)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub param: u32,
    /// Exponent `t` with `ξ = exp(πi·t)`, as `[num, den]`.
    pub exponent: (i64, i64),
    pub xi: Complex64,
    pub in_window: Option<bool>,
    /// `ξ = ±1`.
    pub real_charge: bool,
    /// `ξ = 1`.
    pub witt_trivial_candidate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub family: Family,
    pub window: Option<(f64, f64)>,
    pub rows: Vec<SweepRow>,
    /// Parameters in the range whose exponent falls outside the window.
    pub outside: Vec<u32>,
}

/// Closed-form charges over `range`, with the family window tested.
pub fn central_charge_sweep(family: Family, range: std::ops::RangeInclusive<u32>) -> SweepReport {
    let window = family.window();
    let rows: Vec<SweepRow> = range
        .map(|p| {
            let t = family.closed_form(p);
            let in_window = window.map(|(lo, hi, _)| lo < t && t < hi);
            SweepRow {
                param: p,
                exponent: (*t.numer(), *t.denom()),
                xi: exp_pi_i(t),
                in_window,
                real_charge: t.is_integer(),
                witt_trivial_candidate: t.is_integer() && t.to_integer() % 2 == 0,
            }
        })
        .collect();
    let outside = rows.iter().filter(|r| r.in_window == Some(false)).map(|r| r.param).collect();
    SweepReport {
        family,
        window: window.map(|(lo, hi, _)| (to_f64(lo), to_f64(hi))),
        rows,
        outside,
    }
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `(g2 level, m)` pairs whose categories C(g2, k) and C(so5, 2m)_R^0 have the
/// same rank, for `m ∉ {1, 2, 6}`.
pub fn g2_so5_rank_coincidences(g2_levels: std::ops::RangeInclusive<u32>, m_max: u32) -> Vec<(u32, u32)> {
    // rank of C(g2,k): pairs with a + 2b ≤ k (comarks of G2)
    let g2_rank = |k: u32| (0..=k / 2).map(|b| (k - 2 * b + 1) as usize).sum::<usize>();
    let so5_rank = |m: u32| ((m + 1) * (m + 4) / 2) as usize;
    let mut out = Vec::new();
    for k in g2_levels {
        for m in (1..=m_max).filter(|m| ![1, 2, 6].contains(m)) {
            if g2_rank(k) == so5_rank(m) {
                out.push((k, m));
            }
        }
    }
    out
}

/// A conformal embedding `⊕ g_i,k_i ⊂ G_K`, stored with its expected charge
/// identity `Σ c_i = C`.
#[derive(Clone, Debug, Serialize)]
pub struct ConformalEmbedding {
    pub name: String,
    pub sub: Vec<(Series, usize, u32)>,
    pub ambient: (Series, usize, u32),
}

impl ConformalEmbedding {
    fn new(name: &str, sub: &[(Series, usize, u32)], ambient: (Series, usize, u32)) -> Self {
        Self {
            name: name.into(),
            sub: sub.to_vec(),
            ambient,
        }
    }

    /// Virasoro charges `(Σ c_sub, c_ambient)` as exact rationals.
    pub fn charges(&self) -> Result<(Rational64, Rational64)> {
        let c = |(s, n, k): (Series, usize, u32)| charge_exponent(s, n, k).map(|t| t * 4);
        let sub = self.sub.iter().try_fold(Rational64::from(0), |acc, &x| c(x).map(|v| acc + v))?;
        Ok((sub, c(self.ambient)?))
    }

    pub fn check(&self) -> Result<bool> {
        let (a, b) = self.charges()?;
        Ok(a == b)
    }
}

/// The embeddings used for the small-level cases, plus the rank-level
/// family `so(2n+1)_4 × sl2_{2n+1} ⊂ sp(2(2n+1))_1` for `n = 2..=n_max`.
pub fn conformal_embeddings(n_max: usize) -> Vec<ConformalEmbedding> {
    use Series::*;
    let mut v = vec![
        ConformalEmbedding::new("B2,2 ⊂ A4,1", &[(B, 2, 2)], (A, 4, 1)),
        ConformalEmbedding::new("B2,3 ⊂ D5,1", &[(B, 2, 3)], (D, 5, 1)),
        ConformalEmbedding::new("B2,7 ⊂ D7,1", &[(B, 2, 7)], (D, 7, 1)),
        ConformalEmbedding::new("B2,12 ⊂ E8,1", &[(B, 2, 12)], (E, 8, 1)),
        ConformalEmbedding::new("G2,3 ⊂ E6,1", &[(G, 2, 3)], (E, 6, 1)),
        ConformalEmbedding::new("G2,4 ⊂ D7,1", &[(G, 2, 4)], (D, 7, 1)),
        ConformalEmbedding::new("A1,7 × G2,2 ⊂ E7,1", &[(A, 1, 7), (G, 2, 2)], (E, 7, 1)),
    ];
    for n in 2..=n_max {
        let m = 2 * n as u32 + 1;
        v.push(ConformalEmbedding::new(
            &format!("B{n},4 × A1,{m} ⊂ C{m},1"),
            &[(B, n, 4), (A, 1, m)],
            (C, m as usize, 1),
        ));
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::currents::{find_invertibles, maximal_tannakian};
    use crate::localmods::build_local_category;
    use crate::modular::gauss_sum;
    use std::sync::Arc;

    fn local(series: Series, rank: usize, k: u32) -> LocalCategoryData {
        let md = Arc::new(ModularData::new(series, rank, k).unwrap());
        let g = find_invertibles(&md).unwrap();
        let h = maximal_tannakian(&g).unwrap();
        build_local_category(md, &g, &h).unwrap()
    }

    #[test]
    fn closed_forms_match_gauss_sums() {
        for &(f, lo, hi) in ClosedFormTable::entries() {
            assert!(ClosedFormTable::max_residual(f, lo, hi).unwrap() < 1e-9, "{f:?}");
        }
    }

    #[test]
    fn local_charge_is_witt_invariant() {
        for m in 1..=4 {
            let lc = local(Series::B, 2, 2 * m);
            let own = gauss_sum(lc.dims().into_iter().zip(lc.twists())).unwrap();
            let fp = WittFingerprint::from_local(&lc, "so5 local").unwrap();
            assert!((own - fp.central_charge).norm() < 1e-9, "m={m}");
            assert!((fp.central_charge.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn g2_level24_real_charge() {
        let s = central_charge_sweep(Family::G2, 24..=24);
        assert!(s.rows[0].real_charge && !s.rows[0].witt_trivial_candidate);
        let md = ModularData::new(Series::G, 2, 24).unwrap();
        assert!((md.central_charge().unwrap() + 1.0).norm() < 1e-9);
        let s = central_charge_sweep(Family::So5, 12..=12);
        assert!(s.rows[0].witt_trivial_candidate);
    }

    #[test]
    fn windows() {
        let g = central_charge_sweep(Family::G2, 5..=40);
        assert_eq!(g.outside, (5..=24).collect::<Vec<_>>());
        let s = central_charge_sweep(Family::So5Local, 7..=60);
        assert!(s.outside.is_empty());
        assert_eq!(central_charge_sweep(Family::So5Local, 1..=6).outside, (1..=6).collect::<Vec<_>>());
    }

    #[test]
    fn g2_7_vs_so5_8() {
        // (17, 11) is a second rank match below the g2 window; the charge
        // separates it as well
        let pairs = g2_so5_rank_coincidences(5..=24, 30);
        assert_eq!(pairs, vec![(7, 4), (17, 11)]);
        for (k, m) in pairs {
            let a = WittFingerprint::from_modular(&ModularData::new(Series::G, 2, k).unwrap(), "g2").unwrap();
            let b = WittFingerprint::from_local(&local(Series::B, 2, 2 * m), "so5 local").unwrap();
            assert_eq!(a.rank, b.rank);
            assert_eq!(coincidence_test(&a, &b), Coincidence::ExcludedBy(Exclusion::CentralCharge));
            assert_eq!(coincidence_test(&b, &a), Coincidence::ExcludedBy(Exclusion::CentralCharge));
        }
    }

    #[test]
    fn reflexive_symmetric_and_reverse_stable() {
        let fps: Vec<_> = [(Series::A, 1, 3), (Series::G, 2, 3), (Series::B, 2, 2), (Series::A, 2, 1)]
            .iter()
            .map(|&(s, n, k)| WittFingerprint::from_modular(&ModularData::new(s, n, k).unwrap(), "x").unwrap())
            .collect();
        for a in &fps {
            assert_eq!(coincidence_test(a, a), Coincidence::Possible);
            assert_eq!(coincidence_test(a, &a.reverse()), Coincidence::Possible);
            for b in &fps {
                assert_eq!(coincidence_test(a, b), coincidence_test(b, a));
                assert_eq!(coincidence_test(a, b), coincidence_test(&a.reverse(), &b.reverse()));
            }
        }
        assert_eq!(coincidence_test(&WittFingerprint::trivial(), &WittFingerprint::trivial()), Coincidence::Possible);
    }

    #[test]
    fn multiplicity_pattern() {
        let a = WittFingerprint::from_modular(&ModularData::new(Series::A, 1, 4).unwrap(), "sl2").unwrap();
        let b = WittFingerprint::from_modular(&ModularData::new(Series::G, 2, 3).unwrap(), "g2").unwrap();
        assert_eq!(a.multiplicity_free, Some(true));
        assert_eq!(b.multiplicity_free, Some(false));
        let mut fake = b.clone();
        fake.multiplicity_free = a.multiplicity_free;
        assert_eq!(coincidence_test(&fake, &b), Coincidence::ExcludedBy(Exclusion::MultiplicityPattern));
    }

    #[test]
    fn embeddings_balance() {
        for e in conformal_embeddings(8) {
            let (a, b) = e.charges().unwrap();
            assert_eq!(a, b, "{}", e.name);
        }
    }
}
