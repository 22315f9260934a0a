//! Fusion coefficients of C(g,k) from the quantum Racah (Kac-Walton) formula.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::alcove::{alcove_fold, Alcove};
use crate::error::{Error, Result};
use crate::rootsys::{RootSystem, Weight};

/// Default bound on the number of unordered pairs in a full tensor build.
pub const DEFAULT_MAX_PAIRS: usize = 2_000_000;

type WeightList = Arc<Vec<(Weight, u64)>>;

/// Racah evaluator with a shared cache of classical weight systems.
pub struct FusionEngine {
    alcove: Arc<Alcove>,
    systems: RwLock<HashMap<usize, WeightList>>,
    dims: Vec<u64>,
}

impl FusionEngine {
    pub fn new(alcove: Arc<Alcove>) -> Result<Self> {
        let dims = alcove
            .weights
            .iter()
            .map(|w| alcove.rs.weyl_dimension(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(FusionEngine {
            alcove,
            systems: RwLock::new(HashMap::new()),
            dims,
        })
    }

    pub fn alcove(&self) -> &Alcove {
        &self.alcove
    }

    pub fn classical_dim(&self, i: usize) -> u64 {
        self.dims[i]
    }

    fn weights_of(&self, i: usize) -> Result<WeightList> {
        if let Some(ws) = self.systems.read().unwrap().get(&i) {
            return Ok(ws.clone());
        }
        let mut list: Vec<(Weight, u64)> = self
            .alcove
            .rs
            .weight_system(&self.alcove.weights[i])?
            .into_iter()
            .collect();
        list.sort();
        let list = Arc::new(list);
        self.systems.write().unwrap().insert(i, list.clone());
        Ok(list)
    }

    /// `λ_a ⊗ λ_b` as sorted `(index, multiplicity)` pairs.
    pub fn product(&self, a: usize, b: usize) -> Result<Vec<(usize, u32)>> {
        // iterate over the smaller weight system
        let (a, b) = if self.dims[a] <= self.dims[b] { (a, b) } else { (b, a) };
        let ws = self.weights_of(a)?;
        let gamma = &self.alcove.weights[b];
        let rs: &RootSystem = &self.alcove.rs;
        let mut acc: HashMap<usize, i64> = HashMap::new();
        for (nu, m) in ws.iter() {
            let f = alcove_fold(rs, self.alcove.level, &gamma.add(nu));
            if f.sign == 0 {
                continue;
            }
            let idx = self.alcove.position(&f.weight).ok_or_else(|| {
                Error::Inconsistent(format!("fold landed outside the alcove: {}", f.weight))
            })?;
            *acc.entry(idx).or_insert(0) += f.sign as i64 * *m as i64;
        }
        let mut out = Vec::new();
        for (idx, c) in acc {
            if c < 0 {
                return Err(Error::Inconsistent(format!(
                    "negative Racah coefficient {c} in {} ⊗ {}",
                    self.alcove.weights[a], self.alcove.weights[b]
                )));
            }
            if c > 0 {
                out.push((idx, c as u32));
            }
        }
        out.sort();
        Ok(out)
    }
}

/// `λ ⊗ γ` in C(g,k), keyed by alcove weight.
pub fn fusion_product(
    rs: &RootSystem,
    level: u32,
    lambda: &Weight,
    gamma: &Weight,
) -> Result<BTreeMap<Weight, u32>> {
    let alcove = Arc::new(Alcove::new(Arc::new(rs.clone()), level)?);
    let a = alcove.require(lambda)?;
    let b = alcove.require(gamma)?;
    let engine = FusionEngine::new(alcove.clone())?;
    Ok(engine
        .product(a, b)?
        .into_iter()
        .map(|(i, c)| (alcove.weights[i].clone(), c))
        .collect())
}

/// Sparse fusion coefficients `N_{ij}^l`, stored for `i ≤ j`.
#[derive(Clone, Debug, PartialEq)]
pub struct FusionTensor {
    n: usize,
    products: Vec<Vec<(u32, u32)>>,
}

fn pair_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    j * (j + 1) / 2 + i
}

impl FusionTensor {
    pub fn build(engine: &FusionEngine) -> Result<Self> {
        Self::build_capped(engine, DEFAULT_MAX_PAIRS)
    }

    pub fn build_capped(engine: &FusionEngine, max_pairs: usize) -> Result<Self> {
        let n = engine.alcove().len();
        let pairs = n * (n + 1) / 2;
        if pairs > max_pairs {
            return Err(Error::Capacity {
                what: "fusion pairs",
                size: pairs as u64,
                cap: max_pairs as u64,
            });
        }
        let products = (0..pairs)
            .into_par_iter()
            .map(|p| {
                let (i, j) = unpair(p);
                engine.product(i, j).map(|v| {
                    v.into_iter()
                        .map(|(l, c)| (l as u32, c))
                        .collect::<Vec<_>>()
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FusionTensor { n, products })
    }

    /// From explicit `(i, j, l, N)` entries; entries with `i > j` are folded
    /// onto `(j, i)` and must agree.
    pub fn from_entries(n: usize, entries: &[(usize, usize, usize, u32)]) -> Result<Self> {
        let mut maps: Vec<BTreeMap<u32, u32>> = vec![BTreeMap::new(); n * (n + 1) / 2];
        for &(i, j, l, c) in entries {
            if i >= n || j >= n || l >= n {
                return Err(Error::Inconsistent(format!("fusion index out of range: {i},{j},{l}")));
            }
            if c == 0 {
                continue;
            }
            let slot = maps[pair_index(i, j)].entry(l as u32).or_insert(c);
            if *slot != c {
                return Err(Error::Inconsistent(format!("asymmetric entry N_{{{i},{j}}}^{l}")));
            }
        }
        Ok(FusionTensor {
            n,
            products: maps.into_iter().map(|m| m.into_iter().collect()).collect(),
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, l: usize) -> u32 {
        let row = &self.products[pair_index(i, j)];
        row.binary_search_by_key(&(l as u32), |e| e.0)
            .map(|p| row[p].1)
            .unwrap_or(0)
    }

    /// Nonzero `(l, N_{ij}^l)`.
    pub fn product(&self, i: usize, j: usize) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.products[pair_index(i, j)]
            .iter()
            .map(|&(l, c)| (l as usize, c))
    }

    /// All nonzero entries with `i ≤ j`.
    pub fn entries(&self) -> Vec<(usize, usize, usize, u32)> {
        let mut out = Vec::new();
        for j in 0..self.n {
            for i in 0..=j {
                for (l, c) in self.product(i, j) {
                    out.push((i, j, l, c));
                }
            }
        }
        out
    }

    /// Number of nonzero `N_{ij}^l` counted over all ordered `(i, j)`.
    pub fn nonzero_count(&self) -> usize {
        let mut total = 0;
        for j in 0..self.n {
            for i in 0..=j {
                let c = self.products[pair_index(i, j)].len();
                total += if i == j { c } else { 2 * c };
            }
        }
        total
    }

    pub fn max_coefficient(&self) -> u32 {
        self.products
            .iter()
            .flatten()
            .map(|e| e.1)
            .max()
            .unwrap_or(0)
    }

    pub fn multiplicity_free(&self) -> bool {
        self.max_coefficient() <= 1
    }

    /// Fusion matrix of object `i`: `(N_i)_{jl} = N_{ij}^l`.
    pub fn matrix(&self, i: usize) -> Vec<Vec<u32>> {
        let mut m = vec![vec![0; self.n]; self.n];
        for (j, row) in m.iter_mut().enumerate() {
            for (l, c) in self.product(i, j) {
                row[l] = c;
            }
        }
        m
    }

    /// Checks the unit row, and associativity and duality symmetry on
    /// `samples` random triples. `unit` is the index of the trivial weight.
    pub fn check_invariants(&self, unit: usize, dual: &[usize], samples: usize, seed: u64) -> Result<()> {
        let n = self.n;
        for g in 0..n {
            let row: Vec<_> = self.product(unit, g).collect();
            if row != vec![(g, 1)] {
                return Err(Error::Inconsistent(format!("unit row broken at {g}")));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let (a, b, c, m) = (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            );
            // (a b) c vs a (b c)
            let lhs: u64 = self
                .product(a, b)
                .map(|(v, x)| x as u64 * self.get(v, c, m) as u64)
                .sum();
            let rhs: u64 = self
                .product(b, c)
                .map(|(v, x)| x as u64 * self.get(a, v, m) as u64)
                .sum();
            if lhs != rhs {
                return Err(Error::Inconsistent(format!("associativity fails at ({a},{b},{c};{m})")));
            }
            if self.get(a, b, c) != self.get(a, dual[c], dual[b]) {
                return Err(Error::Inconsistent(format!("duality symmetry fails at ({a},{b},{c})")));
            }
        }
        Ok(())
    }
}

fn unpair(p: usize) -> (usize, usize) {
    // p = j(j+1)/2 + i with i ≤ j
    let mut j = (((8 * p + 1) as f64).sqrt() as usize).saturating_sub(1) / 2;
    while (j + 1) * (j + 2) / 2 <= p {
        j += 1;
    }
    while j * (j + 1) / 2 > p {
        j -= 1;
    }
    (p - j * (j + 1) / 2, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::Series;

    fn engine(s: Series, n: usize, k: u32) -> FusionEngine {
        let rs = Arc::new(RootSystem::new(s, n).unwrap());
        FusionEngine::new(Arc::new(Alcove::new(rs, k).unwrap())).unwrap()
    }

    #[test]
    fn pairing_roundtrip() {
        for p in 0..5000 {
            let (i, j) = unpair(p);
            assert!(i <= j);
            assert_eq!(pair_index(i, j), p);
        }
    }

    #[test]
    fn sl2_products() {
        let rs = RootSystem::new(Series::A, 1).unwrap();
        let one = Weight::new(&[1]);
        for k in 2..6 {
            let p = fusion_product(&rs, k, &one, &one).unwrap();
            assert_eq!(p, BTreeMap::from([(Weight::new(&[0]), 1), (Weight::new(&[2]), 1)]));
        }
        let p = fusion_product(&rs, 1, &one, &one).unwrap();
        assert_eq!(p, BTreeMap::from([(Weight::new(&[0]), 1)]));
        assert!(fusion_product(&rs, 1, &Weight::new(&[2]), &one).is_err());
    }

    #[test]
    fn so5_level_one_is_ising() {
        let rs = RootSystem::new(Series::B, 2).unwrap();
        let sigma = Weight::new(&[0, 1]);
        let p = fusion_product(&rs, 1, &sigma, &sigma).unwrap();
        assert_eq!(
            p,
            BTreeMap::from([(Weight::new(&[0, 0]), 1), (Weight::new(&[1, 0]), 1)])
        );
    }

    #[test]
    fn g2_symmetric_square_multiplicity() {
        // 2λ_short ⊗ 2λ_short ∋ 2λ_short twice (Bourbaki: α1 short)
        let rs = RootSystem::new(Series::G, 2).unwrap();
        let w = Weight::new(&[2, 0]);
        for k in 3..7 {
            let p = fusion_product(&rs, k, &w, &w).unwrap();
            assert_eq!(p[&w], 2, "k={k}");
        }
    }

    #[test]
    fn sl2_level2_tensor() {
        let e = engine(Series::A, 1, 2);
        let t = FusionTensor::build(&e).unwrap();
        assert_eq!(t.nonzero_count(), 10);
        assert_eq!(t.max_coefficient(), 1);
        t.check_invariants(0, &[0, 1, 2], 100, 1).unwrap();
    }

    #[test]
    fn sl4_adjoint_self_coupling() {
        let e = engine(Series::A, 3, 4);
        let t = FusionTensor::build(&e).unwrap();
        let adj = e.alcove().position(&Weight::new(&[1, 0, 1])).unwrap();
        assert!(t.get(adj, adj, adj) >= 1);
    }

    #[test]
    fn entries_roundtrip() {
        let e = engine(Series::B, 2, 2);
        let t = FusionTensor::build(&e).unwrap();
        let back = FusionTensor::from_entries(t.rank(), &t.entries()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn pair_cap() {
        let e = engine(Series::A, 2, 5);
        assert!(FusionTensor::build_capped(&e, 10).unwrap_err().is_capacity());
    }
}
