//! Numeric ingredients of the simplicity case analysis: factorization
//! obstructions, dimension inequalities, subcategory lattices and
//! self-dual counts.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::currents::{find_invertibles, maximal_tannakian, tannakian_subgroups, TannakianSubgroup};
use crate::error::{Error, Result};
use crate::fusion::FusionTensor;
use crate::localmods::{build_local_category, LocalCategoryData};
use crate::modular::{altitude, qdim, qint, Caps, ModularData};
use crate::rootsys::{RootSystem, Series, Weight};

/// Probe weight per family: the dominant root for simply laced types, the
/// short dominant root otherwise (Bourbaki labels).
pub fn default_probe(rs: &RootSystem) -> Weight {
    let n = rs.rank;
    let fund = |i: usize| Weight::fundamental(n, i, 1);
    match (rs.series, n) {
        (Series::A, 1) => Weight::new(&[2]),
        (Series::A, _) => fund(0).add(&fund(n - 1)),
        (Series::B, _) => fund(0),
        (Series::C, _) | (Series::D, _) => fund(1),
        (Series::E, 6) => fund(1),
        (Series::E, 7) => fund(0),
        (Series::E, _) => fund(7),
        (Series::F, _) => fund(3),
        (Series::G, _) => fund(0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NoExceptionalFactorizationPossible,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub g: String,
    pub k: u32,
    /// Alcove labels of the members of `H`.
    pub h: Vec<Weight>,
    pub beta: Weight,
    pub beta_dim: f64,
    pub beta_free_simple: bool,
    /// Smallest dimension of a local weight with a nontrivial stabilizer;
    /// `None` when every local free module is simple.
    pub min_nonfree_dim: Option<f64>,
    pub center_order: usize,
    pub inequality_holds: bool,
    pub verdict: Verdict,
}

/// Tests `min_nonfree² > |Z|²·dim(β)` for the simple free module on `β`.
pub fn check_factorization_obstruction(
    md: Arc<ModularData>,
    h: Option<&TannakianSubgroup>,
    probe: Option<&Weight>,
) -> Result<ObstructionReport> {
    let beta = probe.cloned().unwrap_or_else(|| default_probe(&md.rs));
    let b = md.alcove.position(&beta).ok_or_else(|| Error::LevelTooSmall {
        level: md.level,
        probe: beta.to_string(),
    })?;
    let group = find_invertibles(&md)?;
    let h = match h {
        Some(h) => h.clone(),
        None => maximal_tannakian(&group)
            .ok_or_else(|| Error::Unsupported(format!("{} has no nontrivial Tannakian subgroup", md.label())))?,
    };
    let lc = build_local_category(md.clone(), &group, &h)?;
    let ob = &lc.orbits[lc.orbit_of(b).expect("alcove weight has an orbit")];
    let beta_free_simple = ob.local && ob.is_free();
    let min_nonfree_dim = lc
        .orbits
        .iter()
        .filter(|o| o.local && !o.is_free())
        .map(|o| o.qdim)
        .min_by(f64::total_cmp);
    let z = group.order() as f64;
    let beta_dim = md.qdims[b];
    let inequality_holds =
        beta_free_simple && min_nonfree_dim.is_none_or(|d| d * d > z * z * beta_dim);
    Ok(ObstructionReport {
        g: md.rs.label(),
        k: md.level,
        h: h.elements.iter().map(|&e| md.weight(e).clone()).collect(),
        beta,
        beta_dim,
        beta_free_simple,
        min_nonfree_dim,
        center_order: group.order(),
        inequality_holds,
        verdict: if inequality_holds {
            Verdict::NoExceptionalFactorizationPossible
        } else {
            Verdict::Inconclusive
        },
    })
}

/// `dim(λ_{⌊n/2⌋}) / [n]` in C(sl_n, k) and whether it exceeds `n`.
pub fn check_typea_midweight_ratio(n: usize, k: u32) -> Result<(f64, bool)> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    if (k as usize) < n {
        return Err(Error::InvalidParameter(format!("level {k} below n = {n}")));
    }
    let rs = RootSystem::new(Series::A, n - 1)?;
    let mid = Weight::fundamental(n - 1, n / 2 - 1, 1);
    let ratio = qdim(&rs, k, &mid)? / qint(altitude(&rs, k), n as i64)?;
    Ok((ratio, ratio > n as f64))
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelCheck {
    pub k: u32,
    pub min_dim: f64,
    pub adjoint_dim: f64,
    /// `min_dim² / |Z|² > adjoint_dim`
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EThresholdReport {
    pub series: String,
    pub center_order: u32,
    /// Classical dimension of the adjoint representation.
    pub adjoint_bound: u32,
    /// First level with `dim(min)² > |Z|²·adjoint_bound`.
    pub threshold: u32,
    /// Direct checks at every level below the threshold divisible by `|Z|`.
    pub direct: Vec<LevelCheck>,
}

/// Threshold scan for E6 (`3 | k`) or E7 (`4 | k`).
pub fn check_e_series_thresholds(rank: usize) -> Result<EThresholdReport> {
    let (z, bound, min_w, adj_w) = match rank {
        6 => (3u32, 78u32, 0usize, 1usize),
        7 => (2, 133, 6, 0),
        _ => return Err(Error::InvalidParameter(format!("E{rank} has no threshold check"))),
    };
    // Tannakian levels: 3 | k for E6, 4 | k for E7
    let step = if rank == 6 { 3 } else { 4 };
    let rs = RootSystem::new(Series::E, rank)?;
    let min = Weight::fundamental(rank, min_w, 1);
    let adj = Weight::fundamental(rank, adj_w, 1);
    let zz = (z * z) as f64;
    let mut threshold = None;
    for k in 1..10_000u32 {
        let d = qdim(&rs, k, &min)?;
        if d * d > zz * bound as f64 {
            threshold = Some(k);
            break;
        }
    }
    let threshold = threshold.ok_or_else(|| Error::Numerical("no threshold below 10000".into()))?;
    let direct = (1..=threshold / step)
        .map(|i| i * step)
        .filter(|&k| k < threshold)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&k| -> Result<LevelCheck> {
            let min_dim = qdim(&rs, k, &min)?;
            let adjoint_dim = qdim(&rs, k, &adj)?;
            Ok(LevelCheck {
                k,
                min_dim,
                adjoint_dim,
                pass: min_dim * min_dim / zz > adjoint_dim,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EThresholdReport {
        series: rs.label(),
        center_order: z,
        adjoint_bound: bound,
        threshold,
        direct,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma33Report {
    pub n: usize,
    /// `N = 2n+3`.
    pub big_n: usize,
    pub global_dim: f64,
    /// `global_dim / |H|²`: the dimension of the local category.
    pub local_dim: f64,
    /// `dim(C(sl2, 2n+1)_ad)²`, computed independently.
    pub sl2_ad_dim_sq: f64,
    /// `(N²/4)csc⁴(π/N)`.
    pub closed_form: f64,
    /// `|local_dim − closed_form| / closed_form`.
    pub residual: f64,
    pub pass: bool,
}

/// `dim(C(so_{2n+1},4)_R^0)` against `(N²/4)csc⁴(π/N)` and against the
/// square of `dim(C(sl2,2n+1)_ad)`. `altitude_shift` perturbs the altitude
/// of the so side (a negative control).
pub fn check_lemma33_dimension(n: usize, altitude_shift: i64) -> Result<Lemma33Report> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    let rs = Arc::new(RootSystem::new(Series::B, n)?);
    let alcove = crate::alcove::Alcove::new(rs.clone(), 4)?;
    let ell = alcove.altitude() + altitude_shift;
    let global_dim: f64 = alcove
        .weights
        .iter()
        .map(|w| {
            let d = qdim_at(&rs, ell, w);
            d * d
        })
        .sum();
    let local_dim = global_dim / 4.0;
    let big_n = 2 * n + 3;
    let sl2 = RootSystem::new(Series::A, 1)?;
    let ad: f64 = (0..=(2 * n as i32 + 1))
        .step_by(2)
        .map(|j| qdim(&sl2, 2 * n as u32 + 1, &Weight::new(&[j])).map(|d| d * d))
        .sum::<Result<f64>>()?;
    let nf = big_n as f64;
    let closed_form = nf * nf / 4.0 / (PI / nf).sin().powi(4);
    let residual = (local_dim - closed_form).abs() / closed_form;
    Ok(Lemma33Report {
        n,
        big_n,
        global_dim,
        local_dim,
        sl2_ad_dim_sq: ad * ad,
        closed_form,
        residual,
        pass: residual < 1e-9,
    })
}

fn qdim_at(rs: &RootSystem, ell: i64, w: &Weight) -> f64 {
    let q = |n: i64| (n as f64 * PI / ell as f64).sin() / (PI / ell as f64).sin();
    let shifted = w.add(&rs.rho);
    (0..rs.pos_roots.len())
        .map(|r| q(rs.pair_root(&shifted, r)) / q(rs.pair_root(&rs.rho, r)))
        .product()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subcategory {
    pub members: Vec<usize>,
    pub generators: Vec<usize>,
}

impl Subcategory {
    pub fn rank(&self) -> usize {
        self.members.len()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubcatLattice {
    /// Sorted by rank, then members.
    pub subcategories: Vec<Subcategory>,
    /// `(i, j)` with `i ⊂ j` strictly.
    pub inclusions: Vec<(usize, usize)>,
}

/// Smallest fusion- and dual-closed set containing `gens` and the unit.
pub fn fusion_closure(t: &FusionTensor, dual: &[usize], gens: &[usize]) -> Vec<usize> {
    let mut set: BTreeSet<usize> = gens.iter().copied().collect();
    set.insert(0);
    loop {
        let cur: Vec<usize> = set.iter().copied().collect();
        let before = set.len();
        for &a in &cur {
            set.insert(dual[a]);
            for &b in &cur {
                set.extend(t.product(a, b).map(|(l, _)| l));
            }
        }
        if set.len() == before {
            return set.into_iter().collect();
        }
    }
}

/// All fusion subcategories, by closing single generators and joining
/// closures pairwise until nothing new appears.
pub fn enumerate_fusion_subcategories(t: &FusionTensor, dual: &[usize], max_rank: usize) -> Result<SubcatLattice> {
    let n = t.rank();
    if n > max_rank {
        return Err(Error::Capacity {
            what: "subcategory search rank",
            size: n as u64,
            cap: max_rank as u64,
        });
    }
    let mut found: Vec<Subcategory> = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for g in 0..n {
        let members = fusion_closure(t, dual, &[g]);
        if seen.insert(members.clone()) {
            found.push(Subcategory {
                members,
                generators: if g == 0 { vec![] } else { vec![g] },
            });
        }
    }
    let mut frontier = 0;
    while frontier < found.len() {
        let end = found.len();
        for i in 0..end {
            for j in frontier.max(i + 1)..end {
                let mut gens = found[i].generators.clone();
                gens.extend(&found[j].generators);
                gens.sort_unstable();
                gens.dedup();
                let mut union = found[i].members.clone();
                union.extend(&found[j].members);
                let members = fusion_closure(t, dual, &union);
                if seen.insert(members.clone()) {
                    found.push(Subcategory { members, generators: gens });
                }
            }
        }
        frontier = end;
    }
    found.sort_by(|a, b| (a.rank(), &a.members).cmp(&(b.rank(), &b.members)));
    let mut inclusions = Vec::new();
    for (i, a) in found.iter().enumerate() {
        for (j, b) in found.iter().enumerate() {
            if i != j && a.rank() < b.rank() && a.members.iter().all(|x| b.members.binary_search(x).is_ok()) {
                inclusions.push((i, j));
            }
        }
    }
    Ok(SubcatLattice {
        subcategories: found,
        inclusions,
    })
}

/// Number of self-dual simples of C(g,k).
pub fn self_dual_count(md: &ModularData) -> usize {
    (0..md.rank()).filter(|&i| md.dual[i] == i).count()
}

/// Self-dual simples among `subset`.
pub fn self_dual_count_in(md: &ModularData, subset: impl IntoIterator<Item = usize>) -> usize {
    subset.into_iter().filter(|&i| md.dual[i] == i).count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocalSelfDual {
    /// Split simples counted as self-dual when their orbit is.
    pub orbit_level: usize,
    /// Free self-dual simples only.
    pub free_only: usize,
}

pub fn local_self_dual_count(lc: &LocalCategoryData) -> LocalSelfDual {
    let mut out = LocalSelfDual {
        orbit_level: 0,
        free_only: 0,
    };
    for (i, o) in lc.orbits.iter().enumerate() {
        if o.local && o.dual == i {
            out.orbit_level += o.stabilizer_order;
            if o.is_free() {
                out.free_only += 1;
            }
        }
    }
    out
}

/// Local simples of integer dimension other than the pointed ones.
pub fn integer_dims_outside_pointed(lc: &LocalCategoryData) -> Vec<usize> {
    (0..lc.rank())
        .filter(|&i| {
            let d = lc.simples[i].dim_r;
            (d - d.round()).abs() < 1e-6 && d.round() > 1.0
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Sl4CountReport {
    pub m: u32,
    pub nonfree_simples: usize,
    pub expected_nonfree: usize,
    /// Weight fixed by every current.
    pub fixed_weight: Weight,
    pub rank: usize,
    /// `(1/24)(8m+2)(8m+3)(8m+4)`, the bound quoted for the rank; it
    /// overshoots the actual rank, which is compared directly instead.
    pub rank_lower_bound: f64,
    /// `(1/4)(2m+4)²`: largest rank an exceptional factorization allows.
    pub exceptional_rank_bound: f64,
}

/// Census of C(sl4, 8m)_R^0 with `R` the regular algebra of the full center.
pub fn sl4_level_8m_counts(m: u32, caps: Caps) -> Result<Sl4CountReport> {
    let k = 8 * m;
    let md = Arc::new(ModularData::build(Arc::new(RootSystem::new(Series::A, 3)?), k, caps)?);
    let group = find_invertibles(&md)?;
    let h = tannakian_subgroups(&group)
        .into_iter()
        .find(|t| t.order() == group.order())
        .ok_or_else(|| Error::Inconsistent("full center is not Tannakian at k = 8m".into()))?;
    let lc = build_local_category(md.clone(), &group, &h)?;
    let nonfree_simples = lc
        .orbits
        .iter()
        .filter(|o| o.local && !o.is_free())
        .map(|o| o.stabilizer_order)
        .sum();
    let fixed: Vec<&Weight> = lc
        .orbits
        .iter()
        .filter(|o| o.stabilizer_order == h.order())
        .map(|o| md.weight(o.rep()))
        .collect();
    let [fixed_weight] = fixed.as_slice() else {
        return Err(Error::Inconsistent(format!("{} weights fixed by all currents", fixed.len())));
    };
    let km = 8.0 * m as f64;
    Ok(Sl4CountReport {
        m,
        nonfree_simples,
        expected_nonfree: 2 * m as usize + 4,
        fixed_weight: (*fixed_weight).clone(),
        rank: lc.rank(),
        rank_lower_bound: (km + 2.0) * (km + 3.0) * (km + 4.0) / 24.0,
        exceptional_rank_bound: (2.0 * m as f64 + 4.0).powi(2) / 4.0,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyCheck {
    pub label: String,
    pub g: String,
    pub k: u32,
    pub weights: Vec<Weight>,
    pub dims: Vec<f64>,
    pub threshold: f64,
    pub min_dim: f64,
    pub pass: bool,
}

fn family_check(label: &str, series: Series, rank: usize, k: u32, weights: Vec<Weight>, threshold: f64) -> Result<FamilyCheck> {
    let rs = RootSystem::new(series, rank)?;
    let dims = weights.iter().map(|w| qdim(&rs, k, w)).collect::<Result<Vec<_>>>()?;
    let min_dim = dims.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(FamilyCheck {
        label: label.into(),
        g: rs.label(),
        k,
        weights,
        dims,
        threshold,
        min_dim,
        pass: min_dim > threshold,
    })
}

/// The spot checks that close the B, C and D families: the smallest
/// candidate dimension must exceed the stated bound.
pub fn family_checks() -> Result<Vec<FamilyCheck>> {
    let f = |n: usize, i: usize, c: i32| Weight::fundamental(n, i, c);
    Ok(vec![
        family_check("B: dim(λ1) > 4", Series::B, 3, 5, vec![f(3, 0, 1)], 4.0)?,
        family_check("C, n odd: dim(λ2) > 4", Series::C, 3, 3, vec![f(3, 1, 1)], 4.0)?,
        family_check("C, n even: min{dim λ2, dim kλ_{n/2}} > 4", Series::C, 4, 3, vec![f(4, 1, 1), f(4, 1, 3)], 4.0)?,
        family_check("D, n odd, |H|=2: min{dim λ2, dim (k/2)λ1} > 5", Series::D, 5, 4, vec![f(5, 1, 1), f(5, 0, 2)], 5.0)?,
        family_check("D, n odd, |H|=4: min{dim λ2, dim (k/2)λ1} > 18", Series::D, 5, 8, vec![f(5, 1, 1), f(5, 0, 4)], 18.0)?,
        family_check("D, n even, |H|=2: M > 5", Series::D, 4, 4, vec![f(4, 1, 1), f(4, 0, 2), f(4, 2, 2)], 5.0)?,
        family_check("D, n even, |H|=4: M > 16", Series::D, 4, 10, vec![f(4, 1, 1), f(4, 0, 5), f(4, 2, 5)], 16.0)?,
        family_check("D, n even, |H|=4: M > 16", Series::D, 6, 8, vec![f(6, 1, 1), f(6, 0, 4), f(6, 4, 4)], 16.0)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn typea_ratios() {
        let (r, ok) = check_typea_midweight_ratio(8, 8).unwrap();
        assert!((r - 5.01).abs() < 1e-2 && !ok);
        let (r, ok) = check_typea_midweight_ratio(8, 31).unwrap();
        assert!((r - 8.008).abs() < 1e-2 && ok);
        assert!(check_typea_midweight_ratio(18, 18).unwrap().1);
        assert!(check_typea_midweight_ratio(8, 7).is_err());
    }

    #[test]
    fn ratio_grows_with_level() {
        let mut prev = 0.0;
        for k in 10..30 {
            let (r, _) = check_typea_midweight_ratio(10, k).unwrap();
            assert!(r > prev);
            prev = r;
        }
    }

    #[test]
    fn lemma33() {
        // The local dimension agrees with dim(C(sl2,2n+1)_ad)², and both are
        // a quarter of (N²/4)csc⁴(π/N); the global dimension equals it.
        for n in 2..=6 {
            let r = check_lemma33_dimension(n, 0).unwrap();
            assert!((r.local_dim - r.sl2_ad_dim_sq).abs() < 1e-9 * r.local_dim, "n={n}");
            assert!((r.global_dim - r.closed_form).abs() < 1e-9 * r.closed_form, "n={n}");
            assert!((r.residual - 0.75).abs() < 1e-9);
            let bad = check_lemma33_dimension(n, 1).unwrap();
            assert!((bad.global_dim - bad.closed_form).abs() > 1e-3 * bad.closed_form);
        }
    }

    #[test]
    fn e7_threshold() {
        let r = check_e_series_thresholds(7).unwrap();
        assert_eq!(r.threshold, 15);
        assert_eq!(r.direct.iter().map(|c| c.k).collect::<Vec<_>>(), vec![4, 8, 12]);
        assert!(r.direct.iter().all(|c| c.pass));
    }

    #[test]
    fn subcategories_small() {
        let md = ModularData::new(Series::B, 2, 1).unwrap();
        let l = enumerate_fusion_subcategories(md.fusion().unwrap(), &md.dual, 40).unwrap();
        assert_eq!(l.subcategories.len(), 3);
        let md = ModularData::new(Series::G, 2, 5).unwrap();
        let l = enumerate_fusion_subcategories(md.fusion().unwrap(), &md.dual, 40).unwrap();
        assert_eq!(l.subcategories.len(), 2);
        assert_eq!(l.inclusions, vec![(0, 1)]);
    }

    #[test]
    fn obstruction_sl4_level2_inconclusive() {
        let md = Arc::new(ModularData::new(Series::A, 3, 2).unwrap());
        let r = check_factorization_obstruction(md, None, None).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(!r.beta_free_simple);
    }

    #[test]
    fn obstruction_probe_too_large() {
        let md = Arc::new(ModularData::new(Series::A, 1, 2).unwrap());
        let e = check_factorization_obstruction(md, None, Some(&Weight::new(&[4]))).unwrap_err();
        assert!(matches!(e, Error::LevelTooSmall { .. }));
    }

    #[test]
    fn sl4_8m() {
        let r = sl4_level_8m_counts(1, Caps::default()).unwrap();
        assert_eq!(r.nonfree_simples, 6);
        assert_eq!(r.fixed_weight, Weight::new(&[2, 2, 2]));
        assert_eq!(r.rank, 16);
        assert!(r.rank as f64 > r.exceptional_rank_bound);
        assert!(r.rank_lower_bound > r.exceptional_rank_bound);
        let r = sl4_level_8m_counts(2, Caps::default()).unwrap();
        assert_eq!(r.nonfree_simples, r.expected_nonfree);
        assert!(r.rank as f64 > r.exceptional_rank_bound);
    }

    #[test]
    fn family_spot_checks() {
        for c in family_checks().unwrap() {
            assert!(c.pass, "{} at {} k={}: {:?}", c.label, c.g, c.k, c.dims);
        }
    }
}
