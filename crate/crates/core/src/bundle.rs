//! JSON export of modular data and the on-disk cache.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};

use crate::currents::{find_invertibles, tannakian_subgroups};
use crate::error::{Error, Result};
use crate::fusion::FusionTensor;
use crate::localmods::{build_local_category, LocalCategoryData};
use crate::modular::ModularData;
use crate::rootsys::Series;
use std::sync::Arc;

pub const SCHEMA_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "MODCAT_CACHE_DIR";

/// A float written with 17 significant digits, so it parses back bit-exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exact(pub f64);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom("non-finite float"));
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        f64::deserialize(d).map(Exact)
    }
}

fn exact(v: &[f64]) -> Vec<Exact> {
    v.iter().copied().map(Exact).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieType {
    pub series: Series,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub members: Vec<usize>,
    pub local: bool,
    pub stabilizer: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalCensus {
    /// Labels of the current subgroup.
    pub subgroup: Vec<Vec<i32>>,
    pub rank: usize,
    pub global_dim: Exact,
    pub orbits: Vec<OrbitEntry>,
    /// Per local simple: orbit index, split index, dimension, twist.
    pub simples: Vec<(usize, usize, Exact, (i64, i64))>,
    pub pointed_rank: usize,
    pub pointed_structure: Option<Vec<u64>>,
    pub adjoint_rank: Option<usize>,
}

impl LocalCensus {
    pub fn from_local(lc: &LocalCategoryData) -> Self {
        let md = &lc.base;
        Self {
            subgroup: lc.subgroup.elements.iter().map(|&e| md.weight(e).labels().to_vec()).collect(),
            rank: lc.rank(),
            global_dim: Exact(lc.global_dim_r),
            orbits: lc
                .orbits
                .iter()
                .map(|o| OrbitEntry {
                    members: o.members.clone(),
                    local: o.local,
                    stabilizer: o.stabilizer_order,
                })
                .collect(),
            simples: lc
                .simples
                .iter()
                .map(|s| (s.orbit, s.split_index, Exact(s.dim_r), (s.twist.numer(), s.twist.denom())))
                .collect(),
            pointed_rank: lc.pointed.rank(),
            pointed_structure: lc.pointed.structure.clone(),
            adjoint_rank: lc.adjoint_rank,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataBundle {
    pub schema_version: u32,
    pub g: LieType,
    pub k: u32,
    pub altitude: i64,
    pub labels: Vec<Vec<i32>>,
    pub dims: Vec<Exact>,
    /// `θ = exp(πi·num/den)`.
    pub twists: Vec<(i64, i64)>,
    pub dual: Vec<usize>,
    pub s_matrix: Vec<Vec<(Exact, Exact)>>,
    /// `(i, j, l, N_ij^l)` with `i ≤ j`, nonzero only.
    pub fusion: Vec<(usize, usize, usize, u32)>,
    pub local: Option<Vec<LocalCensus>>,
}

impl DataBundle {
    pub fn from_modular(md: Arc<ModularData>, with_local: bool) -> Result<Self> {
        let s = md.smatrix()?;
        let local = if with_local {
            let group = find_invertibles(&md)?;
            let mut v = Vec::new();
            for h in tannakian_subgroups(&group).iter().filter(|h| !h.is_trivial()) {
                v.push(LocalCensus::from_local(&build_local_category(md.clone(), &group, h)?));
            }
            Some(v)
        } else {
            None
        };
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            g: LieType {
                series: md.rs.series,
                rank: md.rs.rank,
            },
            k: md.level,
            altitude: md.altitude,
            labels: md.alcove.weights.iter().map(|w| w.labels().to_vec()).collect(),
            dims: exact(&md.qdims),
            twists: md.twists.iter().map(|t| (t.numer(), t.denom())).collect(),
            dual: md.dual.clone(),
            s_matrix: s
                .iter()
                .map(|row| row.iter().map(|z| (Exact(z.re), Exact(z.im))).collect())
                .collect(),
            fusion: md.fusion()?.entries(),
            local,
        })
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let b: Self = serde_json::from_str(s)?;
        if b.schema_version != SCHEMA_VERSION {
            return Err(Error::Format(format!("schema version {} (expected {SCHEMA_VERSION})", b.schema_version)));
        }
        Ok(b)
    }

    fn smat(&self) -> Vec<Vec<Complex64>> {
        self.s_matrix
            .iter()
            .map(|r| r.iter().map(|(a, b)| Complex64::new(a.0, b.0)).collect())
            .collect()
    }

    /// Self-consistency from the stored data alone: shapes, unitarity and
    /// symmetry of S, dimensions from its first row, and the Verlinde formula
    /// against the stored fusion rules.
    pub fn verify(&self) -> Result<()> {
        let n = self.rank();
        let bad = |m: String| Err(Error::Inconsistent(m));
        if self.dims.len() != n || self.twists.len() != n || self.dual.len() != n || self.s_matrix.len() != n {
            return bad("field lengths disagree".into());
        }
        let s = self.smat();
        if s.iter().any(|r| r.len() != n) {
            return bad("S is not square".into());
        }
        for i in 0..n {
            for j in 0..n {
                let u: Complex64 = (0..n).map(|l| s[i][l] * s[j][l].conj()).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (u - want).norm() > 1e-9 {
                    return bad(format!("S not unitary at ({i},{j})"));
                }
                if (s[i][j] - s[j][i]).norm() > 1e-9 {
                    return bad(format!("S not symmetric at ({i},{j})"));
                }
            }
            if ((s[0][i] / s[0][0]).re - self.dims[i].0).abs() > 1e-9 * self.dims[i].0.max(1.0) {
                return bad(format!("dimension {i} does not match S"));
            }
        }
        let stored = FusionTensor::from_entries(n, &self.fusion)?;
        for i in 0..n {
            for j in i..n {
                for l in 0..n {
                    let v: Complex64 = (0..n).map(|m| s[i][m] * s[j][m] * s[l][m].conj() / s[0][m]).sum();
                    if (v.re - stored.get(i, j, l) as f64).abs() > 1e-4 || v.im.abs() > 1e-4 {
                        return bad(format!("Verlinde mismatch at ({i},{j},{l})"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Directory of cached bundles, keyed by type, level and code version.
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `explicit`, else the environment variable, else no cache.
    pub fn resolve(explicit: Option<&Path>) -> Option<Self> {
        explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .map(Self::new)
    }

    pub fn key(series: Series, rank: usize, k: u32, with_local: bool) -> String {
        let spec = format!(
            "modcat {} schema {SCHEMA_VERSION} {}{rank} k={k} local={with_local}",
            env!("CARGO_PKG_VERSION"),
            series.as_char()
        );
        Sha256::digest(spec.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Result<Option<DataBundle>> {
        match std::fs::read_to_string(self.path(key)) {
            Ok(s) => DataBundle::from_json(&s).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Write-then-rename, so readers never see a partial file.
    pub fn store(&self, key: &str, bundle: &DataBundle) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.dir)?;
        let path = self.path(key);
        write_atomic(&path, bundle.to_json()?.as_bytes())?;
        Ok(path)
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    use std::io::Write;
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_floats_roundtrip() {
        for x in [1.0, std::f64::consts::PI, 1e-300, -2.5e17, 0.1 + 0.2, f64::MIN_POSITIVE] {
            let s = serde_json::to_string(&Exact(x)).unwrap();
            let y: Exact = serde_json::from_str(&s).unwrap();
            assert_eq!(x.to_bits(), y.0.to_bits(), "{s}");
        }
        assert!(serde_json::to_string(&Exact(f64::NAN)).is_err());
    }

    #[test]
    fn bundle_roundtrip_and_verify() {
        let md = Arc::new(ModularData::new(Series::B, 2, 2).unwrap());
        let b = DataBundle::from_modular(md, true).unwrap();
        assert_eq!(b.rank(), 6);
        assert_eq!(b.local.as_ref().unwrap()[0].rank, 5);
        let json = b.to_json().unwrap();
        let back = DataBundle::from_json(&json).unwrap();
        assert_eq!(b, back);
        assert_eq!(json, back.to_json().unwrap());
        back.verify().unwrap();
        let mut broken = back.clone();
        broken.fusion.pop();
        assert!(broken.verify().is_err());
    }

    #[test]
    fn cache_keys_differ() {
        let a = Cache::key(Series::A, 3, 4, false);
        assert_eq!(a.len(), 64);
        assert_ne!(a, Cache::key(Series::A, 3, 4, true));
        assert_ne!(a, Cache::key(Series::A, 3, 5, false));
    }

    #[test]
    fn cache_store_load() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::new(dir.path());
        let key = Cache::key(Series::A, 1, 3, false);
        assert!(c.load(&key).unwrap().is_none());
        let b = DataBundle::from_modular(Arc::new(ModularData::new(Series::A, 1, 3).unwrap()), false).unwrap();
        c.store(&key, &b).unwrap();
        assert_eq!(c.load(&key).unwrap().unwrap(), b);
    }
}
