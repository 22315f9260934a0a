//! Quantum dimensions, twists, the Kac-Peterson S-matrix and the Verlinde
//! oracle for C(g,k).
//!
//! Brackets live at altitude `ℓ = m(k+h∨)` with short roots of norm 2;
//! `q = e^{iπ/ℓ}`, `θ(λ) = q^{⟨λ,λ+2ρ⟩}`.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use num_rational::Rational64;
use rayon::prelude::*;

use crate::alcove::{Alcove, DEFAULT_MAX_ALCOVE};
use crate::angle::RationalAngle;
use crate::error::{Error, Result};
use crate::fusion::{FusionEngine, FusionTensor, DEFAULT_MAX_PAIRS};
use crate::rootsys::{RootSystem, Series, Weight};

/// Default cap on `|W|` for the Kac-Peterson orbit sum.
pub const DEFAULT_MAX_WEYL: u64 = 10_000_000;

pub type Matrix = Vec<Vec<Complex64>>;

/// `[n] = sin(nπ/ℓ) / sin(π/ℓ)`.
pub fn qint(altitude: i64, n: i64) -> Result<f64> {
    if altitude < 2 {
        return Err(Error::InvalidParameter(format!("altitude {altitude} < 2")));
    }
    if !(0..=altitude).contains(&n) {
        return Err(Error::InvalidParameter(format!("[{n}] outside 0..={altitude}")));
    }
    Ok(qint_unchecked(altitude, n))
}

fn qint_unchecked(altitude: i64, n: i64) -> f64 {
    let l = altitude as f64;
    (n as f64 * PI / l).sin() / (PI / l).sin()
}

pub fn altitude(rs: &RootSystem, level: u32) -> i64 {
    rs.lacing as i64 * (level as i64 + rs.h_dual as i64)
}

fn check_in_alcove(rs: &RootSystem, level: u32, w: &Weight) -> Result<()> {
    rs.check_len(w)?;
    if !w.is_dominant() || rs.level_of(w) > level as i64 {
        return Err(Error::NotInAlcove {
            weight: w.to_string(),
            level,
        });
    }
    Ok(())
}

/// Quantum Weyl dimension formula.
pub fn qdim(rs: &RootSystem, level: u32, lambda: &Weight) -> Result<f64> {
    check_in_alcove(rs, level, lambda)?;
    Ok(qdim_unchecked(rs, altitude(rs, level), lambda))
}

fn qdim_unchecked(rs: &RootSystem, ell: i64, lambda: &Weight) -> f64 {
    // sorted brackets make the value a function of the bracket multiset
    let shifted = lambda.add(&rs.rho);
    let mut num: Vec<i64> = (0..rs.pos_roots.len()).map(|r| rs.pair_root(&shifted, r)).collect();
    let mut den: Vec<i64> = (0..rs.pos_roots.len()).map(|r| rs.pair_root(&rs.rho, r)).collect();
    num.sort_unstable();
    den.sort_unstable();
    num.iter()
        .zip(&den)
        .map(|(&a, &b)| qint_unchecked(ell, a) / qint_unchecked(ell, b))
        .product()
}

/// `θ(λ)` as the exact angle `⟨λ,λ+2ρ⟩/ℓ`.
pub fn twist(rs: &RootSystem, level: u32, lambda: &Weight) -> Result<RationalAngle> {
    check_in_alcove(rs, level, lambda)?;
    Ok(twist_unchecked(rs, altitude(rs, level), lambda))
}

fn twist_unchecked(rs: &RootSystem, ell: i64, lambda: &Weight) -> RationalAngle {
    let c = rs.ip_scaled(lambda, &lambda.add(&rs.rho.scale(2)));
    RationalAngle::from_ratio(Rational64::new(c, rs.quad_den() * ell))
}

/// Kac-Peterson S-matrix over `alcove`, unitary with `S_00 > 0`.
pub fn smatrix(alcove: &Alcove, max_weyl: u64) -> Result<Matrix> {
    let rs = &alcove.rs;
    if rs.weyl_order() > max_weyl {
        return Err(Error::Capacity {
            what: "Weyl group order",
            size: rs.weyl_order(),
            cap: max_weyl,
        });
    }
    let ell = alcove.altitude();
    // ⟨a,b⟩ = ip/den, phase e^{-2πi ip/(den ℓ)}; reduce ip mod den·ℓ exactly
    let modulus = rs.quad_den() * ell;
    let table: Vec<Complex64> = (0..modulus)
        .map(|j| Complex64::from_polar(1.0, -2.0 * PI * j as f64 / modulus as f64))
        .collect();
    let shifted: Vec<Weight> = alcove.weights.iter().map(|w| w.add(&rs.rho)).collect();
    let n = shifted.len();
    let mut rows: Matrix = shifted
        .par_iter()
        .map(|lr| -> Result<Vec<Complex64>> {
            let orbit = rs.weyl_orbit(lr, max_weyl)?;
            let mut row = vec![Complex64::new(0.0, 0.0); n];
            for (w, odd) in &orbit {
                let sign = if *odd { -1.0 } else { 1.0 };
                for (j, mr) in shifted.iter().enumerate() {
                    let ip = rs.ip_scaled(w, mr).rem_euclid(modulus);
                    row[j] += table[ip as usize] * sign;
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let norm: f64 = rows[0].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let phase = rows[0][0].conj() / rows[0][0].norm();
    for row in rows.iter_mut() {
        for z in row.iter_mut() {
            *z = *z * phase / norm;
        }
    }
    Ok(rows)
}

/// Per-(g,k) modular data. The S-matrix and full fusion tensor are built
/// on first use.
pub struct ModularData {
    pub rs: Arc<RootSystem>,
    pub level: u32,
    pub alcove: Arc<Alcove>,
    pub qdims: Vec<f64>,
    pub twists: Vec<RationalAngle>,
    pub dual: Vec<usize>,
    pub global_dim: f64,
    pub altitude: i64,
    engine: FusionEngine,
    max_weyl: u64,
    max_pairs: usize,
    smat: OnceLock<Result<Matrix>>,
    tensor: OnceLock<Result<FusionTensor>>,
}

/// Capacity limits for a build.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub max_alcove: usize,
    pub max_weyl: u64,
    pub max_pairs: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_alcove: DEFAULT_MAX_ALCOVE,
            max_weyl: DEFAULT_MAX_WEYL,
            max_pairs: DEFAULT_MAX_PAIRS,
        }
    }
}

impl std::fmt::Debug for ModularData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModularData")
            .field("type", &self.rs.label())
            .field("level", &self.level)
            .field("rank", &self.rank())
            .finish_non_exhaustive()
    }
}

impl ModularData {
    pub fn new(series: Series, rank: usize, level: u32) -> Result<Self> {
        Self::build(Arc::new(RootSystem::new(series, rank)?), level, Caps::default())
    }

    pub fn build(rs: Arc<RootSystem>, level: u32, caps: Caps) -> Result<Self> {
        let alcove = Arc::new(Alcove::with_cap(rs.clone(), level, caps.max_alcove)?);
        let ell = alcove.altitude();
        let qdims: Vec<f64> = alcove
            .weights
            .par_iter()
            .map(|w| qdim_unchecked(&rs, ell, w))
            .collect();
        let twists = alcove
            .weights
            .iter()
            .map(|w| twist_unchecked(&rs, ell, w))
            .collect();
        let dual = alcove
            .weights
            .iter()
            .map(|w| alcove.require(&rs.dual_weight(w)?))
            .collect::<Result<Vec<_>>>()?;
        let global_dim = qdims.iter().map(|d| d * d).sum();
        let engine = FusionEngine::new(alcove.clone())?;
        Ok(ModularData {
            rs,
            level,
            alcove,
            qdims,
            twists,
            dual,
            global_dim,
            altitude: ell,
            engine,
            max_weyl: caps.max_weyl,
            max_pairs: caps.max_pairs,
            smat: OnceLock::new(),
            tensor: OnceLock::new(),
        })
    }

    pub fn rank(&self) -> usize {
        self.alcove.len()
    }

    pub fn label(&self) -> String {
        format!("{}, k={}", self.rs.label(), self.level)
    }

    pub fn weight(&self, i: usize) -> &Weight {
        &self.alcove.weights[i]
    }

    pub fn index_of(&self, w: &Weight) -> Result<usize> {
        self.alcove.require(w)
    }

    pub fn engine(&self) -> &FusionEngine {
        &self.engine
    }

    /// Direct Racah product, without building the full tensor.
    pub fn product(&self, i: usize, j: usize) -> Result<Vec<(usize, u32)>> {
        if let Some(Ok(t)) = self.tensor.get() {
            return Ok(t.product(i, j).collect());
        }
        self.engine.product(i, j)
    }

    pub fn smatrix(&self) -> Result<&Matrix> {
        self.smat
            .get_or_init(|| smatrix(&self.alcove, self.max_weyl))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn fusion(&self) -> Result<&FusionTensor> {
        self.tensor
            .get_or_init(|| FusionTensor::build_capped(&self.engine, self.max_pairs))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Installs a previously computed tensor (e.g. from a cache).
    pub fn set_fusion(&self, t: FusionTensor) -> Result<()> {
        if t.rank() != self.rank() {
            return Err(Error::Inconsistent("tensor rank does not match alcove".into()));
        }
        let _ = self.tensor.set(Ok(t));
        Ok(())
    }

    pub fn set_smatrix(&self, s: Matrix) -> Result<()> {
        if s.len() != self.rank() || s.iter().any(|r| r.len() != self.rank()) {
            return Err(Error::Inconsistent("S-matrix shape does not match alcove".into()));
        }
        let _ = self.smat.set(Ok(s));
        Ok(())
    }

    /// Normalized Gauss sum `Σ d²θ / |Σ d²θ|`.
    pub fn central_charge(&self) -> Result<Complex64> {
        gauss_sum(self.qdims.iter().copied().zip(self.twists.iter().copied()))
    }
}

/// `Σ d²θ / |Σ d²θ|` over `(d, θ)` pairs.
pub fn gauss_sum(items: impl IntoIterator<Item = (f64, RationalAngle)>) -> Result<Complex64> {
    let z: Complex64 = items
        .into_iter()
        .map(|(d, t)| t.to_complex() * (d * d))
        .sum();
    if z.norm() < 1e-9 {
        return Err(Error::Numerical("vanishing Gauss sum".into()));
    }
    Ok(z / z.norm())
}

pub fn gauss_sum_central_charge(md: &ModularData) -> Result<Complex64> {
    md.central_charge()
}

/// Fusion coefficients from the Verlinde formula, each rounded entry required
/// to be within `1e-4` of a nonnegative integer.
pub fn verlinde_fusion(md: &ModularData) -> Result<FusionTensor> {
    let s = md.smatrix()?;
    let n = md.rank();
    let entries: Vec<Vec<(usize, usize, usize, u32)>> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<Vec<_>> {
            let mut out = Vec::new();
            let w: Vec<Complex64> = (0..n).map(|v| s[i][v] / s[0][v]).collect();
            for j in i..n {
                let wij: Vec<Complex64> = (0..n).map(|v| w[v] * s[j][v]).collect();
                for l in 0..n {
                    let z: Complex64 = (0..n).map(|v| wij[v] * s[l][v].conj()).sum();
                    let r = z.re.round();
                    if (z - Complex64::new(r, 0.0)).norm() > 1e-4 || r < 0.0 {
                        return Err(Error::Numerical(format!(
                            "Verlinde N_{{{i},{j}}}^{l} = {z} is not a nonnegative integer"
                        )));
                    }
                    if r > 0.0 {
                        out.push((i, j, l, r as u32));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    FusionTensor::from_entries(n, &entries.concat())
}

/// Residual diagnostics of the modular data.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Residuals {
    /// `‖SS† − I‖_F`
    pub unitarity: f64,
    /// `max |S − Sᵀ|`
    pub symmetry: f64,
    /// `max |S² − C|` with `C` the duality permutation.
    pub charge_conjugation: f64,
    /// `max |S_{0λ} − d_λ/√D|`
    pub first_row: f64,
    /// max entrywise deviation of the balancing reconstruction.
    pub balancing: f64,
}

pub fn residuals(md: &ModularData) -> Result<Residuals> {
    let s = md.smatrix()?;
    let n = md.rank();
    let mut r = Residuals::default();
    let mut uni = 0.0;
    for i in 0..n {
        for j in 0..n {
            let z: Complex64 = (0..n).map(|v| s[i][v] * s[j][v].conj()).sum();
            let e = if i == j { 1.0 } else { 0.0 };
            uni += (z - e).norm_sqr();
            r.symmetry = f64::max(r.symmetry, (s[i][j] - s[j][i]).norm());
            let s2: Complex64 = (0..n).map(|v| s[i][v] * s[v][j]).sum();
            let c = if md.dual[i] == j { 1.0 } else { 0.0 };
            r.charge_conjugation = f64::max(r.charge_conjugation, (s2 - c).norm());
        }
        let target = md.qdims[i] / md.global_dim.sqrt();
        r.first_row = f64::max(r.first_row, (s[0][i] - target).norm());
    }
    r.unitarity = uni.sqrt();
    r.balancing = balancing_residual(md)?;
    Ok(r)
}

/// S rebuilt from fusion rules, twists and dimensions:
/// `S_{λμ} = D^{-1/2} θ_λ^{-1} θ_μ^{-1} Σ_ν N_{λ*μ}^ν θ_ν d_ν`.
pub fn balancing_smatrix(md: &ModularData) -> Result<Matrix> {
    let n = md.rank();
    let root_d = md.global_dim.sqrt();
    (0..n)
        .into_par_iter()
        .map(|i| -> Result<Vec<Complex64>> {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut z = Complex64::new(0.0, 0.0);
                for (v, c) in md.product(md.dual[i], j)? {
                    z += md.twists[v].to_complex() * (c as f64 * md.qdims[v]);
                }
                let t = (md.twists[i] + md.twists[j]).conj().to_complex();
                row.push(z * t / root_d);
            }
            Ok(row)
        })
        .collect()
}

/// Max entrywise gap between the Kac-Peterson and balancing S-matrices.
pub fn balancing_residual(md: &ModularData) -> Result<f64> {
    let s = md.smatrix()?;
    let b = balancing_smatrix(md)?;
    let mut m: f64 = 0.0;
    for (rs, rb) in s.iter().zip(&b) {
        for (x, y) in rs.iter().zip(rb) {
            m = m.max((x - y).norm());
        }
    }
    Ok(m)
}

/// Objects of quantum dimension 1 (within `1e-6`).
pub fn near_unit_dims(md: &ModularData) -> Vec<usize> {
    (0..md.rank())
        .filter(|&i| (md.qdims[i] - 1.0).abs() < 1e-6)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(s: Series, n: usize, k: u32) -> ModularData {
        ModularData::new(s, n, k).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn quantum_integers() {
        assert!(close(qint(7, 1).unwrap(), 1.0, 1e-15));
        assert!(close(qint(8, 2).unwrap(), 2.0 * (PI / 8.0).cos(), 1e-12));
        assert!(close(qint(8, 2).unwrap(), 1.847759, 1e-6));
        assert!(close(qint(8, 6).unwrap(), qint(8, 2).unwrap(), 1e-12));
        assert!(qint(1, 1).is_err());
        assert!(qint(8, 9).is_err());
    }

    #[test]
    fn small_dimensions() {
        let b2 = RootSystem::new(Series::B, 2).unwrap();
        assert!(close(qdim(&b2, 1, &Weight::new(&[0, 1])).unwrap(), 2f64.sqrt(), 1e-12));
        assert!(close(qdim(&b2, 2, &Weight::new(&[1, 0])).unwrap(), 2.0, 1e-12));
        let expect = qint(16, 5).unwrap() * qint(16, 6).unwrap()
            / (qint(16, 2).unwrap() * qint(16, 3).unwrap());
        let d = qdim(&b2, 5, &Weight::new(&[1, 0])).unwrap();
        assert!(close(d, expect, 1e-12) && close(d, 3.6127, 1e-3));
        assert!(qdim(&b2, 1, &Weight::new(&[1, 1])).is_err());
    }

    #[test]
    fn so8_level8_smallest_dims() {
        let m = md(Series::D, 4, 8);
        let mut d = m.qdims.clone();
        d.sort_by(f64::total_cmp);
        d.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        assert!(close(d[0], 1.0, 1e-3));
        assert!(close(d[1], 5.494, 1e-3));
        assert!(close(d[2], 14.592, 1e-3));
    }

    #[test]
    fn exact_twists() {
        let a3 = RootSystem::new(Series::A, 3).unwrap();
        assert!(twist(&a3, 4, &Weight::new(&[0, 4, 0])).unwrap().is_zero());
        assert!(twist(&a3, 4, &Weight::new(&[4, 0, 0])).unwrap().is_minus_one());
        let b2 = RootSystem::new(Series::B, 2).unwrap();
        for k in 2..12 {
            // θ(2λ2) = exp(2πi·3/(k+3)), θ(kλ1) = (-1)^k
            let t = twist(&b2, k, &Weight::new(&[0, 2])).unwrap();
            assert_eq!(t, RationalAngle::new(6, k as i64 + 3));
            let t = twist(&b2, k, &Weight::new(&[k as i32, 0])).unwrap();
            assert_eq!(t, RationalAngle::new(k as i64, 1));
        }
    }

    #[test]
    fn sl2_level1_smatrix() {
        let m = md(Series::A, 1, 1);
        let s = m.smatrix().unwrap();
        let h = 1.0 / 2f64.sqrt();
        let want = [[h, h], [h, -h]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((s[i][j] - want[i][j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn residuals_small_cases() {
        for (s, n, k) in [
            (Series::A, 1, 5),
            (Series::A, 2, 3),
            (Series::B, 2, 3),
            (Series::C, 3, 2),
            (Series::D, 4, 2),
            (Series::G, 2, 3),
            (Series::F, 4, 2),
        ] {
            let m = md(s, n, k);
            let r = residuals(&m).unwrap();
            assert!(r.unitarity < 1e-9, "{} {r:?}", m.label());
            assert!(r.symmetry < 1e-9, "{} {r:?}", m.label());
            assert!(r.charge_conjugation < 1e-8, "{} {r:?}", m.label());
            assert!(r.first_row < 1e-9, "{} {r:?}", m.label());
            assert!(r.balancing < 1e-8, "{} {r:?}", m.label());
        }
    }

    #[test]
    fn verlinde_matches_racah() {
        for (s, n, k) in [(Series::A, 1, 1), (Series::G, 2, 3), (Series::B, 2, 4)] {
            let m = md(s, n, k);
            assert_eq!(&verlinde_fusion(&m).unwrap(), m.fusion().unwrap(), "{}", m.label());
        }
    }

    #[test]
    fn central_charges() {
        let z = md(Series::B, 2, 1).central_charge().unwrap();
        assert!((z - Complex64::from_polar(1.0, 5.0 * PI / 8.0)).norm() < 1e-9);
        let z = md(Series::B, 2, 2).central_charge().unwrap();
        assert!((z + 1.0).norm() < 1e-9);
        for k in 1..=6 {
            let z = md(Series::G, 2, k).central_charge().unwrap();
            let want = 7.0 * k as f64 / (2.0 * (k as f64 + 4.0)) * PI;
            assert!((z - Complex64::from_polar(1.0, want)).norm() < 1e-9);
        }
    }

    #[test]
    fn duality_preserves_dims_and_twists() {
        let m = md(Series::A, 3, 3);
        for i in 0..m.rank() {
            let j = m.dual[i];
            assert_eq!(m.dual[j], i);
            assert_eq!(m.qdims[i].to_bits(), m.qdims[j].to_bits());
            assert_eq!(m.twists[i], m.twists[j]);
        }
    }

    #[test]
    fn weyl_cap() {
        let rs = Arc::new(RootSystem::new(Series::E, 8).unwrap());
        let m = ModularData::build(rs, 1, Caps::default()).unwrap();
        assert!(m.smatrix().unwrap_err().is_capacity());
    }
}
