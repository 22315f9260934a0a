//! Root systems of the simple Lie algebras, the invariant form, and
//! classical weight multiplicities.
//!
//! Node numbering follows Bourbaki:
//!
//! | type | nodes                                   | short / long       |
//! |------|-----------------------------------------|--------------------|
//! | A_n  | 1 - 2 - ... - n                         | all d = 1          |
//! | B_n  | 1 - ... - (n-1) => n                    | α_n short          |
//! | C_n  | 1 - ... - (n-1) <= n                    | α_n long           |
//! | D_n  | 1 - ... - (n-2) - {n-1, n}              | all d = 1          |
//! | E_n  | 1 - 3 - 4 - ... - n, 2 attached to 4    | all d = 1          |
//! | F_4  | 1 - 2 => 3 - 4                          | α_1, α_2 long      |
//! | G_2  | 1 <= 2                                  | α_1 short, α_2 long|
//!
//! The form is normalized so short roots have `⟨α,α⟩ = 2`; `d_i = ⟨α_i,α_i⟩/2`.
//! Roots are stored in simple-root coordinates, weights in Dynkin labels.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest classical dimension for which weight systems are generated.
pub const MAX_CLASSICAL_DIM: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn as_char(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for Series {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Series::A),
            "B" => Ok(Series::B),
            "C" => Ok(Series::C),
            "D" => Ok(Series::D),
            "E" => Ok(Series::E),
            "F" => Ok(Series::F),
            "G" => Ok(Series::G),
            _ => Err(Error::InvalidParameter(format!("unknown series {s:?}"))),
        }
    }
}

/// Dynkin labels of a weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight(pub SmallVec<[i32; 8]>);

impl Weight {
    pub fn new(labels: &[i32]) -> Self {
        Weight(SmallVec::from_slice(labels))
    }

    pub fn zero(rank: usize) -> Self {
        Weight(SmallVec::from_elem(0, rank))
    }

    /// `c · λ_i`.
    pub fn fundamental(rank: usize, i: usize, c: i32) -> Self {
        let mut w = Weight::zero(rank);
        w.0[i] = c;
        w
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[i32] {
        &self.0
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: i32) -> Weight {
        Weight(self.0.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> Weight {
        self.scale(-1)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<i32>::deserialize(d)?;
        Ok(Weight::new(&v))
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub series: Series,
    pub rank: usize,
    /// `cartan[i][j] = ⟨α_i, α_j∨⟩`; row `i` holds the Dynkin labels of `α_i`.
    pub cartan: Vec<Vec<i32>>,
    /// `⟨α_i, α_j⟩`.
    pub sym_form: Vec<Vec<i32>>,
    pub d: Vec<i32>,
    /// Positive roots in simple-root coordinates, sorted by height.
    pub pos_roots: Vec<Vec<i32>>,
    /// The same roots in Dynkin labels.
    pub pos_roots_dynkin: Vec<Weight>,
    pub rho: Weight,
    pub h_dual: u32,
    pub lacing: u32,
    /// Marks `a_i` of the highest root.
    pub marks: Vec<u32>,
    /// Comarks `a_i∨`; the level of `λ` is `Σ a_i∨ λ_i`.
    pub comarks: Vec<u32>,
    /// Highest root in Dynkin labels.
    pub highest_root: Weight,
    /// `F_ij = ⟨λ_i, λ_j⟩`.
    pub quad_form: Vec<Vec<Rational64>>,
    quad_int: Vec<Vec<i64>>,
    quad_den: i64,
}

fn bonds(series: Series, n: usize) -> Vec<(usize, usize)> {
    let chain = |len: usize| (0..len.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>();
    match series {
        Series::A | Series::B | Series::C | Series::F | Series::G => chain(n),
        Series::D => {
            let mut b = chain(n - 1);
            b.push((n - 3, n - 1));
            b
        }
        Series::E => {
            // 1-3-4-...-n with 2 on 4 (0-based: 0-2-3-..., 1-3)
            let mut b = vec![(0, 2), (1, 3)];
            for i in 2..n - 1 {
                b.push((i, i + 1));
            }
            b
        }
    }
}

fn half_norms(series: Series, n: usize) -> Vec<i32> {
    match series {
        Series::A | Series::D | Series::E => vec![1; n],
        Series::B => {
            let mut d = vec![2; n];
            d[n - 1] = 1;
            d
        }
        Series::C => {
            let mut d = vec![1; n];
            d[n - 1] = 2;
            d
        }
        Series::F => vec![2, 2, 1, 1],
        Series::G => vec![1, 3],
    }
}

fn validate(series: Series, rank: usize) -> Result<()> {
    let ok = match series {
        Series::A => rank >= 1,
        Series::B => rank >= 2,
        Series::C => rank >= 3,
        Series::D => rank >= 4,
        Series::E => (6..=8).contains(&rank),
        Series::F => rank == 4,
        Series::G => rank == 2,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidType {
            series: series.as_char(),
            rank,
            reason: "valid types are A_n≥1, B_n≥2, C_n≥3, D_n≥4, E6, E7, E8, F4, G2",
        })
    }
}

fn invert_rational(m: &[Vec<i32>]) -> Vec<Vec<Rational64>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational64>> = m
        .iter()
        .map(|r| r.iter().map(|&x| Rational64::from_integer(x as i64)).collect())
        .collect();
    let mut inv: Vec<Vec<Rational64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Rational64::from_integer((i == j) as i64))
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("Cartan matrix is invertible");
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..n {
                    let (x, y) = (a[col][j], inv[col][j]);
                    a[r][j] -= f * x;
                    inv[r][j] -= f * y;
                }
            }
        }
    }
    inv
}

fn lcm(a: i64, b: i64) -> i64 {
    fn gcd(mut a: i64, mut b: i64) -> i64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a.abs()
    }
    a / gcd(a, b) * b
}

impl RootSystem {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        validate(series, rank)?;
        let n = rank;
        let d = half_norms(series, n);
        let mut sym = vec![vec![0i32; n]; n];
        for i in 0..n {
            sym[i][i] = 2 * d[i];
        }
        for (i, j) in bonds(series, n) {
            let v = -d[i].max(d[j]);
            sym[i][j] = v;
            sym[j][i] = v;
        }
        let cartan: Vec<Vec<i32>> = (0..n)
            .map(|i| (0..n).map(|j| 2 * sym[i][j] / sym[j][j]).collect())
            .collect();

        let pos_roots = Self::close_roots(&cartan);
        let to_dynkin = |r: &[i32]| -> Weight {
            Weight(
                (0..n)
                    .map(|j| (0..n).map(|i| r[i] * cartan[i][j]).sum())
                    .collect(),
            )
        };
        let pos_roots_dynkin: Vec<Weight> = pos_roots.iter().map(|r| to_dynkin(r)).collect();

        let lacing = *d.iter().max().unwrap() as u32;
        let top = pos_roots.last().unwrap().clone();
        let marks: Vec<u32> = top.iter().map(|&a| a as u32).collect();
        let comarks: Vec<u32> = (0..n).map(|i| marks[i] * d[i] as u32 / lacing).collect();
        let h_dual = 1 + comarks.iter().sum::<u32>();
        let highest_root = to_dynkin(&top);

        let cinv = invert_rational(&cartan);
        let quad_form: Vec<Vec<Rational64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| cinv[i][j] * Rational64::from_integer(d[j] as i64))
                    .collect()
            })
            .collect();
        let quad_den = quad_form
            .iter()
            .flatten()
            .fold(1i64, |acc, x| lcm(acc, *x.denom()));
        let quad_int = quad_form
            .iter()
            .map(|r| r.iter().map(|x| (x * quad_den).to_integer()).collect())
            .collect();

        Ok(RootSystem {
            series,
            rank,
            cartan,
            sym_form: sym,
            d,
            pos_roots,
            pos_roots_dynkin,
            rho: Weight(SmallVec::from_elem(1, n)),
            h_dual,
            lacing,
            marks,
            comarks,
            highest_root,
            quad_form,
            quad_int,
            quad_den,
        })
    }

    /// Positive roots from the Cartan matrix by closing under root strings.
    fn close_roots(cartan: &[Vec<i32>]) -> Vec<Vec<i32>> {
        let n = cartan.len();
        let mut roots: Vec<Vec<i32>> = (0..n)
            .map(|i| (0..n).map(|j| (i == j) as i32).collect())
            .collect();
        let mut known: HashSet<Vec<i32>> = roots.iter().cloned().collect();
        let mut layer = roots.clone();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for beta in &layer {
                for i in 0..n {
                    // p = largest r with beta - r α_i a root
                    let mut p = 0;
                    loop {
                        let mut c = beta.clone();
                        c[i] -= p + 1;
                        if known.contains(&c) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing: i32 = (0..n).map(|j| beta[j] * cartan[j][i]).sum();
                    let q = p - pairing;
                    if q > 0 {
                        let mut c = beta.clone();
                        c[i] += 1;
                        if known.insert(c.clone()) {
                            next.push(c);
                        }
                    }
                }
            }
            roots.extend(next.iter().cloned());
            layer = next;
        }
        roots.sort_by_key(|r| (r.iter().sum::<i32>(), r.clone()));
        roots
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.series, self.rank)
    }

    pub fn check_len(&self, w: &Weight) -> Result<()> {
        if w.len() != self.rank {
            return Err(Error::LengthMismatch {
                expected: self.rank,
                got: w.len(),
            });
        }
        Ok(())
    }

    pub fn check_dominant(&self, w: &Weight) -> Result<()> {
        self.check_len(w)?;
        if !w.is_dominant() {
            return Err(Error::NotDominant(w.to_string()));
        }
        Ok(())
    }

    /// `⟨a, b⟩` exactly.
    pub fn inner_product(&self, a: &Weight, b: &Weight) -> Result<Rational64> {
        self.check_len(a)?;
        self.check_len(b)?;
        Ok(Rational64::new(self.ip_scaled(a, b), self.quad_den))
    }

    /// `quad_den · ⟨a, b⟩`, an integer.
    pub fn ip_scaled(&self, a: &Weight, b: &Weight) -> i64 {
        let mut s = 0i64;
        for i in 0..self.rank {
            if a.0[i] == 0 {
                continue;
            }
            let row = &self.quad_int[i];
            let mut t = 0i64;
            for j in 0..self.rank {
                t += row[j] * b.0[j] as i64;
            }
            s += a.0[i] as i64 * t;
        }
        s
    }

    pub fn quad_den(&self) -> i64 {
        self.quad_den
    }

    /// `⟨λ, α⟩` for the positive root with index `r`; always an integer.
    pub fn pair_root(&self, w: &Weight, r: usize) -> i64 {
        let root = &self.pos_roots[r];
        (0..self.rank)
            .map(|j| root[j] as i64 * w.0[j] as i64 * self.d[j] as i64)
            .sum()
    }

    /// `⟨λ, α⟩` for a root given in simple coordinates.
    pub fn pair_simple_coords(&self, w: &Weight, root: &[i32]) -> i64 {
        (0..self.rank)
            .map(|j| root[j] as i64 * w.0[j] as i64 * self.d[j] as i64)
            .sum()
    }

    /// `⟨λ, θ∨⟩ = Σ a_i∨ λ_i`.
    pub fn level_of(&self, w: &Weight) -> i64 {
        w.0.iter()
            .zip(&self.comarks)
            .map(|(&x, &c)| x as i64 * c as i64)
            .sum()
    }

    /// Simple reflection `s_i`.
    pub fn reflect(&self, w: &Weight, i: usize) -> Weight {
        let c = w.0[i];
        let mut out = w.clone();
        if c != 0 {
            for j in 0..self.rank {
                out.0[j] -= c * self.cartan[i][j];
            }
        }
        out
    }

    pub fn reflect_in_place(&self, w: &mut Weight, i: usize) {
        let c = w.0[i];
        if c != 0 {
            for j in 0..self.rank {
                w.0[j] -= c * self.cartan[i][j];
            }
        }
    }

    /// Dominant representative of the Weyl orbit and the parity of the
    /// number of reflections used.
    pub fn dominant_rep(&self, w: &Weight) -> (Weight, bool) {
        let mut v = w.clone();
        let mut odd = false;
        while let Some(i) = v.0.iter().position(|&x| x < 0) {
            self.reflect_in_place(&mut v, i);
            odd = !odd;
        }
        (v, odd)
    }

    /// Order of the Weyl group.
    pub fn weyl_order(&self) -> u64 {
        let n = self.rank as u64;
        let fact = |m: u64| (1..=m).product::<u64>();
        match self.series {
            Series::A => fact(n + 1),
            Series::B | Series::C => (1u64 << n) * fact(n),
            Series::D => (1u64 << (n - 1)) * fact(n),
            Series::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Series::F => 1152,
            Series::G => 12,
        }
    }

    /// Weyl orbit of `w`. For a regular dominant `w` the flag is `det(w) = -1`.
    pub fn weyl_orbit(&self, w: &Weight, cap: u64) -> Result<Vec<(Weight, bool)>> {
        let (start, _) = self.dominant_rep(w);
        let mut seen: HashSet<Weight> = HashSet::new();
        seen.insert(start.clone());
        let mut out = vec![(start.clone(), false)];
        let mut queue = VecDeque::from([(start, false)]);
        while let Some((v, odd)) = queue.pop_front() {
            for i in 0..self.rank {
                if v.0[i] > 0 {
                    let u = self.reflect(&v, i);
                    if seen.insert(u.clone()) {
                        if seen.len() as u64 > cap {
                            return Err(Error::Capacity {
                                what: "Weyl orbit size",
                                size: seen.len() as u64,
                                cap,
                            });
                        }
                        out.push((u.clone(), !odd));
                        queue.push_back((u, !odd));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Classical Weyl dimension formula.
    pub fn weyl_dimension(&self, lambda: &Weight) -> Result<u64> {
        self.check_dominant(lambda)?;
        let shifted = lambda.add(&self.rho);
        let mut x = 1.0f64;
        for r in 0..self.pos_roots.len() {
            x *= self.pair_root(&shifted, r) as f64 / self.pair_root(&self.rho, r) as f64;
        }
        let dim = x.round();
        if dim > MAX_CLASSICAL_DIM as f64 {
            return Err(Error::Capacity {
                what: "classical dimension",
                size: dim.min(u64::MAX as f64) as u64,
                cap: MAX_CLASSICAL_DIM,
            });
        }
        Ok(dim as u64)
    }

    /// Dominant weights of `V(λ)` with multiplicities (Freudenthal).
    pub fn dominant_character(&self, lambda: &Weight) -> Result<Vec<(Weight, u64)>> {
        self.weyl_dimension(lambda)?;
        // dominant weights below λ, with height of λ - μ
        let heights: Vec<i64> = self
            .pos_roots
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).sum())
            .collect();
        let mut height: HashMap<Weight, i64> = HashMap::new();
        height.insert(lambda.clone(), 0);
        let mut queue = VecDeque::from([lambda.clone()]);
        while let Some(mu) = queue.pop_front() {
            let h = height[&mu];
            for (r, alpha) in self.pos_roots_dynkin.iter().enumerate() {
                let nu = mu.sub(alpha);
                if nu.is_dominant() && !height.contains_key(&nu) {
                    height.insert(nu.clone(), h + heights[r]);
                    queue.push_back(nu);
                }
            }
        }
        let mut order: Vec<(Weight, i64)> = height.into_iter().collect();
        order.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)));

        let lr = lambda.add(&self.rho);
        let norm_lr = self.ip_scaled(&lr, &lr);
        let mut mult: HashMap<Weight, i64> = HashMap::new();
        mult.insert(lambda.clone(), 1);
        let lookup = |mult: &HashMap<Weight, i64>, v: &Weight| -> i64 {
            let (dom, _) = self.dominant_rep(v);
            mult.get(&dom).copied().unwrap_or(0)
        };
        for (mu, h) in order.iter() {
            if *h == 0 {
                continue;
            }
            let mr = mu.add(&self.rho);
            let denom = norm_lr - self.ip_scaled(&mr, &mr);
            let mut sum = 0i64;
            for (r, alpha) in self.pos_roots_dynkin.iter().enumerate() {
                let root_norm: i64 = self.root_norm(r);
                let base = self.pair_root(mu, r);
                let mut j = 1i64;
                let mut v = mu.add(alpha);
                loop {
                    let m = lookup(&mult, &v);
                    if m == 0 {
                        break;
                    }
                    sum += (base + j * root_norm) * m;
                    j += 1;
                    v = v.add(alpha);
                }
            }
            let num = 2 * sum * self.quad_den;
            debug_assert!(denom > 0);
            if num % denom != 0 {
                return Err(Error::Numerical(format!(
                    "Freudenthal division not exact at {mu} in V{lambda}"
                )));
            }
            let m = num / denom;
            if m > 0 {
                mult.insert(mu.clone(), m);
            }
        }
        let mut out: Vec<(Weight, u64)> = mult.into_iter().map(|(w, m)| (w, m as u64)).collect();
        out.sort();
        Ok(out)
    }

    /// `⟨α, α⟩` for the positive root with index `r`.
    pub fn root_norm(&self, r: usize) -> i64 {
        let root = &self.pos_roots[r];
        let mut s = 0i64;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += root[i] as i64 * root[j] as i64 * self.sym_form[i][j] as i64;
            }
        }
        s
    }

    /// Full weight system of `V(λ)`.
    pub fn weight_system(&self, lambda: &Weight) -> Result<HashMap<Weight, u64>> {
        let dom = self.dominant_character(lambda)?;
        let mut out = HashMap::new();
        for (mu, m) in dom {
            for (w, _) in self.weyl_orbit(&mu, MAX_CLASSICAL_DIM)? {
                out.insert(w, m);
            }
        }
        Ok(out)
    }

    /// `m_λ(μ)`.
    pub fn weight_multiplicity(&self, lambda: &Weight, mu: &Weight) -> Result<u64> {
        self.check_dominant(lambda)?;
        self.check_len(mu)?;
        let (dom, _) = self.dominant_rep(mu);
        Ok(self
            .dominant_character(lambda)?
            .into_iter()
            .find(|(w, _)| *w == dom)
            .map(|(_, m)| m)
            .unwrap_or(0))
    }

    /// Highest weight of the dual representation, `-w0(λ)`.
    pub fn dual_weight(&self, lambda: &Weight) -> Result<Weight> {
        self.check_len(lambda)?;
        Ok(self.dominant_rep(&lambda.neg()).0)
    }

    /// Membership in the root lattice.
    pub fn in_root_lattice(&self, w: &Weight) -> bool {
        // coordinates in simple roots are F-pairings scaled by 1/d_j: c_j = ⟨w, λ_j⟩ / d_j
        (0..self.rank).all(|j| {
            let mut s = Rational64::zero();
            for i in 0..self.rank {
                s += self.quad_form[i][j] * Rational64::from_integer(w.0[i] as i64);
            }
            (s / Rational64::from_integer(self.d[j] as i64)).is_integer()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: Series, n: usize) -> RootSystem {
        RootSystem::new(s, n).unwrap()
    }

    #[test]
    fn rejects_invalid_types() {
        assert!(RootSystem::new(Series::B, 1).is_err());
        assert!(RootSystem::new(Series::C, 2).is_err());
        assert!(RootSystem::new(Series::D, 3).is_err());
        assert!(RootSystem::new(Series::E, 5).is_err());
        assert!(RootSystem::new(Series::G, 3).is_err());
        assert!(RootSystem::new(Series::A, 0).is_err());
    }

    #[test]
    fn small_cases() {
        let a1 = rs(Series::A, 1);
        assert_eq!((a1.pos_roots.len(), a1.h_dual, a1.lacing), (1, 2, 1));
        let b2 = rs(Series::B, 2);
        assert_eq!((b2.pos_roots.len(), b2.h_dual, b2.lacing), (4, 3, 2));
        assert_eq!(b2.comarks, vec![1, 1]);
        let g2 = rs(Series::G, 2);
        assert_eq!((g2.pos_roots.len(), g2.h_dual, g2.lacing), (6, 4, 3));
        assert_eq!(g2.comarks, vec![1, 2]);
    }

    #[test]
    fn root_counts_and_coxeter_numbers() {
        let cases: Vec<(Series, usize, usize, u32)> = vec![
            (Series::A, 1, 1, 2),
            (Series::A, 4, 10, 5),
            (Series::B, 3, 9, 5),
            (Series::B, 5, 25, 9),
            (Series::C, 3, 9, 4),
            (Series::C, 4, 16, 5),
            (Series::D, 4, 12, 6),
            (Series::D, 6, 30, 10),
            (Series::E, 6, 36, 12),
            (Series::E, 7, 63, 18),
            (Series::E, 8, 120, 30),
            (Series::F, 4, 24, 9),
            (Series::G, 2, 6, 4),
        ];
        for (s, n, roots, h) in cases {
            let r = rs(s, n);
            assert_eq!(r.pos_roots.len(), roots, "{s}{n}");
            assert_eq!(r.h_dual, h, "{s}{n}");
            assert_eq!(r.lacing as i32, *r.d.iter().max().unwrap());
        }
    }

    #[test]
    fn quad_form_values() {
        let a1 = rs(Series::A, 1);
        let w = Weight::new(&[1]);
        assert_eq!(a1.inner_product(&w, &w).unwrap(), Rational64::new(1, 2));
        let b2 = rs(Series::B, 2);
        let l1 = Weight::new(&[1, 0]);
        let l2 = Weight::new(&[0, 1]);
        assert_eq!(b2.inner_product(&l1, &l1).unwrap(), Rational64::from_integer(2));
        assert_eq!(b2.inner_product(&l1, &l2).unwrap(), Rational64::from_integer(1));
        assert_eq!(b2.inner_product(&l2, &l2).unwrap(), Rational64::from_integer(1));
        let a3 = rs(Series::A, 3);
        let l = Weight::new(&[0, 1, 0]);
        assert_eq!(a3.inner_product(&l, &l).unwrap(), Rational64::from_integer(1));
        assert!(a3.inner_product(&l, &Weight::new(&[1, 0])).is_err());
    }

    #[test]
    fn quad_form_is_dual_to_simple_roots() {
        for (s, n) in [(Series::B, 3), (Series::C, 3), (Series::F, 4), (Series::G, 2), (Series::E, 6)] {
            let r = rs(s, n);
            for i in 0..n {
                for j in 0..n {
                    let li = Weight::fundamental(n, i, 1);
                    let aj = Weight(r.cartan[j].iter().copied().collect());
                    let expect = if i == j { r.d[j] as i64 } else { 0 };
                    assert_eq!(r.inner_product(&li, &aj).unwrap(), Rational64::from_integer(expect));
                    assert_eq!(r.quad_form[i][j], r.quad_form[j][i]);
                }
            }
        }
    }

    #[test]
    fn multiplicities() {
        let a1 = rs(Series::A, 1);
        assert_eq!(a1.weight_multiplicity(&Weight::new(&[2]), &Weight::new(&[0])).unwrap(), 1);
        let b2 = rs(Series::B, 2);
        assert_eq!(b2.weight_multiplicity(&Weight::new(&[1, 0]), &Weight::new(&[0, 0])).unwrap(), 1);
        let ws = b2.weight_system(&Weight::new(&[1, 0])).unwrap();
        assert_eq!(ws.values().sum::<u64>(), 5);
        let g2 = rs(Series::G, 2);
        let seven = Weight::new(&[1, 0]);
        assert_eq!(g2.weyl_dimension(&seven).unwrap(), 7);
        assert_eq!(g2.weight_multiplicity(&seven, &Weight::new(&[0, 0])).unwrap(), 1);
        assert_eq!(g2.weight_system(&seven).unwrap().values().sum::<u64>(), 7);
        // adjoint of A2 has zero weight multiplicity 2
        let a2 = rs(Series::A, 2);
        assert_eq!(a2.weight_multiplicity(&Weight::new(&[1, 1]), &Weight::zero(2)).unwrap(), 2);
        assert!(a2.weight_multiplicity(&Weight::new(&[-1, 1]), &Weight::zero(2)).is_err());
    }

    #[test]
    fn weight_systems() {
        let a1 = rs(Series::A, 1);
        let ws = a1.weight_system(&Weight::new(&[1])).unwrap();
        assert_eq!(ws.len(), 2);
        assert_eq!(ws[&Weight::new(&[1])], 1);
        assert_eq!(ws[&Weight::new(&[-1])], 1);
        let a2 = rs(Series::A, 2);
        let ws = a2.weight_system(&Weight::new(&[1, 0])).unwrap();
        assert_eq!(ws.len(), 3);
        assert!(ws.values().all(|&m| m == 1));
        let b2 = rs(Series::B, 2);
        assert_eq!(b2.weight_system(&Weight::new(&[0, 1])).unwrap().len(), 4);
    }

    #[test]
    fn duals() {
        let a2 = rs(Series::A, 2);
        assert_eq!(a2.dual_weight(&Weight::new(&[1, 0])).unwrap(), Weight::new(&[0, 1]));
        let a3 = rs(Series::A, 3);
        assert_eq!(a3.dual_weight(&Weight::new(&[1, 2, 0])).unwrap(), Weight::new(&[0, 2, 1]));
        let b2 = rs(Series::B, 2);
        for s in 0..4 {
            for t in 0..4 {
                let w = Weight::new(&[s, t]);
                assert_eq!(b2.dual_weight(&w).unwrap(), w);
            }
        }
        let d5 = rs(Series::D, 5);
        assert_eq!(
            d5.dual_weight(&Weight::new(&[0, 0, 0, 1, 0])).unwrap(),
            Weight::new(&[0, 0, 0, 0, 1])
        );
        let e6 = rs(Series::E, 6);
        assert_eq!(
            e6.dual_weight(&Weight::new(&[1, 0, 0, 0, 0, 0])).unwrap(),
            Weight::new(&[0, 0, 0, 0, 0, 1])
        );
    }

    #[test]
    fn root_lattice_membership() {
        let b2 = rs(Series::B, 2);
        assert!(b2.in_root_lattice(&Weight::new(&[1, 0])));
        assert!(b2.in_root_lattice(&Weight::new(&[0, 2])));
        assert!(!b2.in_root_lattice(&Weight::new(&[0, 1])));
        let a3 = rs(Series::A, 3);
        assert!(a3.in_root_lattice(&Weight::new(&[1, 0, 1])));
        assert!(a3.in_root_lattice(&Weight::new(&[0, 2, 0])));
        assert!(!a3.in_root_lattice(&Weight::new(&[0, 1, 0])));
    }

    #[test]
    fn weyl_group_orders_match_regular_orbits() {
        for (s, n) in [(Series::A, 3), (Series::B, 3), (Series::G, 2), (Series::F, 4), (Series::D, 4)] {
            let r = rs(s, n);
            let orbit = r.weyl_orbit(&r.rho, u64::MAX).unwrap();
            assert_eq!(orbit.len() as u64, r.weyl_order(), "{s}{n}");
            let odd = orbit.iter().filter(|(_, o)| *o).count() as u64;
            assert_eq!(odd * 2, r.weyl_order());
        }
    }
}
