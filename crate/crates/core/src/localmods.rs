//! Local modules over the regular algebra `R` of a Tannakian subgroup `H`:
//! orbit/stabilizer census of C(g,k)_R^0.
//!
//! A local weight orbit with stabilizer order `s` contributes `s` simples of
//! equal dimension `qdim/s`; the global-dimension identity
//! `Σ dim_R² = dim C / |H|²` guards that convention.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::angle::RationalAngle;
use crate::currents::{invariant_factors, CurrentGroup, TannakianSubgroup};
use crate::error::{Error, Result};
use crate::modular::ModularData;

/// `dim Hom(λ⊗R, λ⊗R)`: the number of `h ∈ H` fixing `λ`.
pub fn free_module_endo_dim(group: &CurrentGroup, h: &TannakianSubgroup, lambda: usize) -> usize {
    h.members
        .iter()
        .filter(|&&g| group.act(g, lambda) == lambda)
        .count()
}

/// Trivial monodromy with `R`: `θ(h·λ) = θ(λ)` for all `h ∈ H`.
pub fn is_local(md: &ModularData, group: &CurrentGroup, h: &TannakianSubgroup, lambda: usize) -> bool {
    h.members
        .iter()
        .all(|&g| md.twists[group.act(g, lambda)] == md.twists[lambda])
}

/// An `H`-orbit of alcove weights, i.e. a free module `λ⊗R` up to
/// isomorphism of its underlying class.
#[derive(Clone, Debug, Serialize)]
pub struct ModuleOrbit {
    /// Alcove indices, sorted; the first is the representative.
    pub members: Vec<usize>,
    pub local: bool,
    pub stabilizer_order: usize,
    pub qdim: f64,
    pub twist: RationalAngle,
    /// Orbit containing the duals.
    pub dual: usize,
}

impl ModuleOrbit {
    pub fn rep(&self) -> usize {
        self.members[0]
    }

    pub fn is_free(&self) -> bool {
        self.stabilizer_order == 1
    }

    pub fn dim_r(&self) -> f64 {
        self.qdim / self.stabilizer_order as f64
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalSimple {
    pub orbit: usize,
    pub split_index: usize,
    pub dim_r: f64,
    pub twist: RationalAngle,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointedPart {
    /// Indices into the simple list.
    pub simples: Vec<usize>,
    pub twists: Vec<RationalAngle>,
    /// Invariant factors, when determined.
    pub structure: Option<Vec<u64>>,
    /// True when the group law was read off the free-module fusion; false
    /// when it was inferred from the twist multiset.
    pub from_fusion: bool,
}

impl PointedPart {
    pub fn rank(&self) -> usize {
        self.simples.len()
    }
}

#[derive(Clone, Debug)]
pub struct LocalCategoryData {
    pub base: Arc<ModularData>,
    pub group: CurrentGroup,
    pub subgroup: TannakianSubgroup,
    /// All `H`-orbits on the alcove; simples come from the local ones.
    pub orbits: Vec<ModuleOrbit>,
    pub simples: Vec<LocalSimple>,
    pub global_dim_r: f64,
    pub pointed: PointedPart,
    /// Rank of the adjoint subcategory; `None` when it depends on split
    /// pointed simples whose individual fusion is not resolved.
    pub adjoint_rank: Option<usize>,
    orbit_of: BTreeMap<usize, usize>,
}

impl LocalCategoryData {
    pub fn rank(&self) -> usize {
        self.simples.len()
    }

    pub fn h_order(&self) -> usize {
        self.subgroup.order()
    }

    pub fn orbit_of(&self, lambda: usize) -> Option<usize> {
        self.orbit_of.get(&lambda).copied()
    }

    pub fn dims(&self) -> Vec<f64> {
        self.simples.iter().map(|s| s.dim_r).collect()
    }

    pub fn twists(&self) -> Vec<RationalAngle> {
        self.simples.iter().map(|s| s.twist).collect()
    }

    /// `dim C / |H|²`.
    pub fn expected_global_dim(&self) -> f64 {
        let h = self.h_order() as f64;
        self.base.global_dim / (h * h)
    }

    /// Central charge, inherited from the base category.
    pub fn central_charge(&self) -> Result<num_complex::Complex64> {
        self.base.central_charge()
    }
}

/// Census of C(g,k)_R^0 for the Tannakian subgroup `h`.
pub fn build_local_category(
    md: Arc<ModularData>,
    group: &CurrentGroup,
    h: &TannakianSubgroup,
) -> Result<LocalCategoryData> {
    if h.members.iter().any(|&g| !group.twists[g].is_zero()) {
        return Err(Error::InvalidParameter("subgroup is not Tannakian".into()));
    }
    let mut orbit_of = BTreeMap::new();
    let mut orbits = Vec::new();
    for lambda in 0..md.rank() {
        if orbit_of.contains_key(&lambda) {
            continue;
        }
        let members: BTreeSet<usize> = h.members.iter().map(|&g| group.act(g, lambda)).collect();
        let members: Vec<usize> = members.into_iter().collect();
        let stabilizer_order = h.order() / members.len();
        debug_assert_eq!(stabilizer_order, free_module_endo_dim(group, h, lambda));
        for &m in &members {
            orbit_of.insert(m, orbits.len());
        }
        orbits.push(ModuleOrbit {
            members,
            local: is_local(&md, group, h, lambda),
            stabilizer_order,
            qdim: md.qdims[lambda],
            twist: md.twists[lambda],
            dual: usize::MAX,
        });
    }
    for o in 0..orbits.len() {
        let d = md.dual[orbits[o].rep()];
        orbits[o].dual = *orbit_of
            .get(&d)
            .ok_or_else(|| Error::Inconsistent("dual weight outside the alcove".into()))?;
    }
    let simples: Vec<LocalSimple> = orbits
        .iter()
        .enumerate()
        .filter(|(_, o)| o.local)
        .flat_map(|(i, o)| {
            (0..o.stabilizer_order).map(move |s| LocalSimple {
                orbit: i,
                split_index: s,
                dim_r: o.dim_r(),
                twist: o.twist,
            })
        })
        .collect();
    let global_dim_r: f64 = simples.iter().map(|s| s.dim_r * s.dim_r).sum();
    let hh = (h.order() * h.order()) as f64;
    let expected = md.global_dim / hh;
    if ((global_dim_r - expected) / expected).abs() > 1e-6 {
        return Err(Error::Numerical(format!(
            "local census fails global-dimension closure: {global_dim_r} vs {expected}"
        )));
    }
    let mut lc = LocalCategoryData {
        base: md,
        group: group.clone(),
        subgroup: h.clone(),
        orbits,
        simples,
        global_dim_r,
        pointed: PointedPart {
            simples: vec![],
            twists: vec![],
            structure: None,
            from_fusion: false,
        },
        adjoint_rank: None,
        orbit_of,
    };
    lc.pointed = pointed_part(&lc)?;
    lc.adjoint_rank = adjoint_rank(&lc);
    Ok(lc)
}

/// Aggregate multiplicities of orbits in `A ⊗_R B` for free orbits `A, B`:
/// `Σ_{h∈H} N_{λ, h·μ}^ν` with `λ, μ, ν` the representatives.
pub fn free_fusion(lc: &LocalCategoryData, a: usize, b: usize) -> Result<BTreeMap<usize, u32>> {
    free_fusion_with_reps(lc, a, b, lc.orbits[a].rep(), lc.orbits[b].rep())
}

/// As [`free_fusion`] with chosen representatives of `A` and `B`.
pub fn free_fusion_with_reps(
    lc: &LocalCategoryData,
    a: usize,
    b: usize,
    lambda: usize,
    mu: usize,
) -> Result<BTreeMap<usize, u32>> {
    for (o, w) in [(a, lambda), (b, mu)] {
        if !lc.orbits[o].is_free() {
            return Err(Error::Unsupported(format!(
                "orbit {o} has stabilizer {}; split simples only fuse in aggregate",
                lc.orbits[o].stabilizer_order
            )));
        }
        if lc.orbit_of(w) != Some(o) {
            return Err(Error::InvalidParameter(format!("weight {w} is not in orbit {o}")));
        }
    }
    let mut out = BTreeMap::new();
    for &g in &lc.subgroup.members {
        for (nu, c) in lc.base.product(lambda, lc.group.act(g, mu))? {
            let o = lc.orbit_of(nu).expect("every weight lies in an orbit");
            if lc.orbits[o].rep() == nu {
                *out.entry(o).or_insert(0) += c;
            }
        }
    }
    Ok(out)
}

/// The simples of dimension 1 and their group, when it can be determined.
pub fn pointed_part(lc: &LocalCategoryData) -> Result<PointedPart> {
    let simples: Vec<usize> = (0..lc.rank())
        .filter(|&i| (lc.simples[i].dim_r - 1.0).abs() < 1e-6)
        .collect();
    let twists: Vec<RationalAngle> = simples.iter().map(|&i| lc.simples[i].twist).collect();
    let all_free = simples.iter().all(|&i| lc.orbits[lc.simples[i].orbit].is_free());
    if all_free {
        let orbit_ids: Vec<usize> = simples.iter().map(|&i| lc.simples[i].orbit).collect();
        let unit = lc.orbit_of(0).unwrap();
        let mut orders = Vec::new();
        for &o in &orbit_ids {
            let mut x = o;
            let mut n = 1u64;
            while x != unit {
                let p = free_fusion(lc, x, o)?;
                x = match p.into_iter().collect::<Vec<_>>().as_slice() {
                    [(y, 1)] => *y,
                    _ => return Err(Error::Inconsistent("pointed simple is not invertible".into())),
                };
                n += 1;
                if n > orbit_ids.len() as u64 {
                    return Err(Error::Inconsistent("pointed simple has runaway order".into()));
                }
            }
            orders.push(n);
        }
        return Ok(PointedPart {
            simples,
            twists,
            structure: Some(invariant_factors(&orders)),
            from_fusion: true,
        });
    }
    let structure = infer_group_from_twists(&twists);
    Ok(PointedPart {
        simples,
        twists,
        structure,
        from_fusion: false,
    })
}

/// Abelian groups of order `n`, as invariant factor lists.
pub fn abelian_groups(n: u64) -> Vec<Vec<u64>> {
    fn partitions(e: u32, max: u32) -> Vec<Vec<u32>> {
        if e == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=e.min(max)).rev() {
            for mut rest in partitions(e - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut groups: Vec<Vec<u64>> = vec![vec![]];
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e > 0 {
            let mut next = Vec::new();
            for g in &groups {
                for part in partitions(e, e) {
                    // part descending: combine into invariant factors
                    let width = g.len().max(part.len());
                    let mut f = vec![1u64; width];
                    for (i, x) in g.iter().enumerate() {
                        f[width - g.len() + i] *= x;
                    }
                    for (i, &a) in part.iter().enumerate() {
                        f[width - 1 - i] *= p.pow(a);
                    }
                    next.push(f);
                }
            }
            groups = next;
        }
        p += 1;
    }
    groups
}

/// Groups of order `|twists|` carrying a quadratic form whose value
/// multiset is exactly `twists`; `Some` when the answer is unique.
pub fn infer_group_from_twists(twists: &[RationalAngle]) -> Option<Vec<u64>> {
    let n = twists.len() as u64;
    if n == 0 {
        return None;
    }
    let mut target = twists.to_vec();
    target.sort();
    let matches: Vec<Vec<u64>> = abelian_groups(n)
        .into_iter()
        .filter(|g| admits_form(g, &target))
        .collect();
    match matches.as_slice() {
        [g] => Some(g.clone()),
        _ => None,
    }
}

fn admits_form(factors: &[u64], target: &[RationalAngle]) -> bool {
    let r = factors.len();
    let elements: Vec<Vec<i64>> = {
        let mut acc = vec![vec![]];
        for &f in factors {
            acc = acc
                .into_iter()
                .flat_map(|v: Vec<i64>| {
                    (0..f as i64).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        acc
    };
    // q(x) = Σ q_i x_i² + Σ_{i<j} b_ij x_i x_j (angles mod 2)
    let diag: Vec<Vec<RationalAngle>> = factors
        .iter()
        .map(|&f| {
            let f = f as i64;
            (0..2 * f)
                .map(|j| RationalAngle::new(j, f))
                .filter(|q| {
                    // q(x + f) = q(x): 2fq ≡ 0 and f²q ≡ 0
                    RationalAngle::from_ratio(q.turns_of_pi() * (f * f)).is_zero()
                })
                .collect()
        })
        .collect();
    let mut pairs = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            let g = gcd(factors[i], factors[j]) as i64;
            pairs.push((i, j, (0..g).map(|t| RationalAngle::new(2 * t, g)).collect::<Vec<_>>()));
        }
    }
    let mut choice_q = vec![RationalAngle::ZERO; r];
    let mut choice_b = vec![RationalAngle::ZERO; pairs.len()];
    fn rec_b(
        idx: usize,
        pairs: &[(usize, usize, Vec<RationalAngle>)],
        q: &[RationalAngle],
        b: &mut Vec<RationalAngle>,
        elements: &[Vec<i64>],
        target: &[RationalAngle],
    ) -> bool {
        if idx == pairs.len() {
            let mut vals: Vec<RationalAngle> = elements
                .iter()
                .map(|x| {
                    let mut t = RationalAngle::ZERO;
                    for (i, qi) in q.iter().enumerate() {
                        t = t + RationalAngle::from_ratio(qi.turns_of_pi() * (x[i] * x[i]));
                    }
                    for (p, (i, j, _)) in pairs.iter().enumerate() {
                        t = t + RationalAngle::from_ratio(b[p].turns_of_pi() * (x[*i] * x[*j]));
                    }
                    t
                })
                .collect();
            vals.sort();
            return vals == target;
        }
        for &v in &pairs[idx].2 {
            b[idx] = v;
            if rec_b(idx + 1, pairs, q, b, elements, target) {
                return true;
            }
        }
        false
    }
    fn rec_q(
        idx: usize,
        diag: &[Vec<RationalAngle>],
        q: &mut Vec<RationalAngle>,
        pairs: &[(usize, usize, Vec<RationalAngle>)],
        b: &mut Vec<RationalAngle>,
        elements: &[Vec<i64>],
        target: &[RationalAngle],
    ) -> bool {
        if idx == diag.len() {
            return rec_b(0, pairs, q, b, elements, target);
        }
        for &v in &diag[idx] {
            q[idx] = v;
            if rec_q(idx + 1, diag, q, pairs, b, elements, target) {
                return true;
            }
        }
        false
    }
    rec_q(0, &diag, &mut choice_q, &pairs, &mut choice_b, &elements, target)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Rank of the centralizer of the pointed part. Determined when every
/// pointed simple is a free module (its braiding with any simple is then
/// read off the orbit twists) or when the category is pointed.
pub fn adjoint_rank(lc: &LocalCategoryData) -> Option<usize> {
    if lc.pointed.rank() == lc.rank() {
        return Some(1);
    }
    let mut currents = Vec::new();
    for &s in &lc.pointed.simples {
        let o = &lc.orbits[lc.simples[s].orbit];
        if !o.is_free() {
            return None;
        }
        currents.push(lc.group.position(o.rep())?);
    }
    // free pointed simples come from invertible base objects g; the
    // monodromy of g⊗R with an orbit is that of g with its representative
    Some(
        lc.orbits
            .iter()
            .filter(|o| {
                o.local
                    && currents
                    .iter()
                    .all(|&g| lc.group.monodromy(&lc.base, g, o.rep()).is_zero())
            })
            .map(|o| o.stabilizer_order)
            .sum(),
    )
}
