//! Simple currents: the invertible objects of C(g,k), their group law,
//! their action on the alcove, and Tannakian subgroups.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::angle::RationalAngle;
use crate::error::{Error, Result};
use crate::modular::{near_unit_dims, ModularData};

#[derive(Clone, Debug, Serialize)]
pub struct CurrentGroup {
    /// Alcove indices; element 0 is the unit.
    pub elements: Vec<usize>,
    /// `table[a][b]` is the position of `a·b` in `elements`.
    pub table: Vec<Vec<usize>>,
    /// `actions[a][λ]` is the alcove index of `a ⊗ λ`.
    pub actions: Vec<Vec<usize>>,
    pub twists: Vec<RationalAngle>,
}

impl CurrentGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn position(&self, alcove_index: usize) -> Option<usize> {
        self.elements.iter().position(|&e| e == alcove_index)
    }

    pub fn act(&self, g: usize, lambda: usize) -> usize {
        self.actions[g][lambda]
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != 0 {
            x = self.table[x][g];
            n += 1;
        }
        n
    }

    /// Invariant factors `n_1 | n_2 | …` (empty for the trivial group).
    pub fn structure(&self) -> Vec<u64> {
        let orders: Vec<u64> = (0..self.order()).map(|g| self.element_order(g) as u64).collect();
        invariant_factors(&orders)
    }

    /// Subgroup generated by `gens` (positions), sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.table[x][g];
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// All subgroups, as sorted position lists, ordered by size then content.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::from([vec![0]]);
        let mut frontier = vec![vec![0]];
        while let Some(s) = frontier.pop() {
            for g in 0..self.order() {
                if s.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = s.clone();
                gens.push(g);
                let c = self.closure(&gens);
                if found.insert(c.clone()) {
                    frontier.push(c);
                }
            }
        }
        let mut out: Vec<_> = found.into_iter().collect();
        out.sort_by_key(|s| (s.len(), s.clone()));
        out
    }

    /// Monodromy charge `θ(g·λ) − θ(g) − θ(λ)` of the current `g` with `λ`.
    pub fn monodromy(&self, md: &ModularData, g: usize, lambda: usize) -> RationalAngle {
        md.twists[self.act(g, lambda)] - self.twists[g] - md.twists[lambda]
    }
}

/// Invariant factors of a finite abelian group from its element orders.
pub fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    let n = orders.len() as u64;
    // per prime: |G[p^j]| = p^{Σ_i min(j, a_i)} determines the partition (a_i)
    let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            let torsion_log = |j: u32| -> u32 {
                let pj = p.pow(j);
                let c = orders.iter().filter(|&&o| pj % o == 0).count() as u64;
                let mut l = 0;
                let mut c = c;
                while c > 1 {
                    c /= p;
                    l += 1;
                }
                l
            };
            // number of cyclic factors of exponent ≥ j
            let mut exps = Vec::new();
            let mut prev = 0;
            let mut j = 1;
            let mut counts = Vec::new();
            while prev < e {
                let c = torsion_log(j);
                counts.push(c - prev);
                prev = c;
                j += 1;
            }
            let factors = counts[0];
            for i in 0..factors {
                exps.push(counts.iter().filter(|&&c| c > i).count() as u32);
            }
            per_prime.push((p, exps));
        }
        p += 1;
    }
    let width = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut out = vec![1u64; width];
    for (p, exps) in &per_prime {
        // largest exponents go to the last factors
        for (i, &a) in exps.iter().enumerate() {
            out[width - 1 - i] *= p.pow(a);
        }
    }
    out
}

/// The simple currents of `md`, each checked to act by permutation.
pub fn find_invertibles(md: &ModularData) -> Result<CurrentGroup> {
    let elements = near_unit_dims(md);
    if elements.first() != Some(&0) {
        return Err(Error::Inconsistent("unit object does not have dimension 1".into()));
    }
    let n = md.rank();
    let mut actions = Vec::with_capacity(elements.len());
    for &h in &elements {
        let mut perm = Vec::with_capacity(n);
        for lambda in 0..n {
            match md.product(h, lambda)?.as_slice() {
                [(mu, 1)] => perm.push(*mu),
                other => {
                    return Err(Error::Inconsistent(format!(
                        "{} ⊗ {} = {:?} is not a single simple",
                        md.weight(h),
                        md.weight(lambda),
                        other
                    )))
                }
            }
        }
        let mut seen = vec![false; n];
        for &mu in &perm {
            if std::mem::replace(&mut seen[mu], true) {
                return Err(Error::Inconsistent(format!(
                    "action of {} is not a permutation",
                    md.weight(h)
                )));
            }
        }
        actions.push(perm);
    }
    let pos: BTreeMap<usize, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let table = actions
        .iter()
        .map(|act| {
            elements
                .iter()
                .map(|&e| {
                    pos.get(&act[e]).copied().ok_or_else(|| {
                        Error::Inconsistent("currents are not closed under fusion".into())
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let twists = elements.iter().map(|&e| md.twists[e]).collect();
    Ok(CurrentGroup {
        elements,
        table,
        actions,
        twists,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TannakianSubgroup {
    /// Positions in the current group, sorted, starting with the unit.
    pub members: Vec<usize>,
    /// Alcove indices of the members.
    pub elements: Vec<usize>,
    pub maximal: bool,
}

impl TannakianSubgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }
}

/// Subgroups on which every twist is exactly 1, the trivial one included.
pub fn tannakian_subgroups(group: &CurrentGroup) -> Vec<TannakianSubgroup> {
    let subs: Vec<Vec<usize>> = group
        .subgroups()
        .into_iter()
        .filter(|s| s.iter().all(|&g| group.twists[g].is_zero()))
        .collect();
    subs.iter()
        .map(|s| {
            let maximal = !subs
                .iter()
                .any(|t| t.len() > s.len() && s.iter().all(|g| t.binary_search(g).is_ok()));
            TannakianSubgroup {
                members: s.clone(),
                elements: s.iter().map(|&g| group.elements[g]).collect(),
                maximal,
            }
        })
        .collect()
}

/// The largest Tannakian subgroup, when it is nontrivial and unique among
/// maximal ones by order.
pub fn maximal_tannakian(group: &CurrentGroup) -> Option<TannakianSubgroup> {
    tannakian_subgroups(group)
        .into_iter()
        .filter(|t| t.maximal && !t.is_trivial())
        .max_by_key(|t| (t.order(), std::cmp::Reverse(t.members.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{Series, Weight};

    #[test]
    fn invariant_factor_examples() {
        assert_eq!(invariant_factors(&[1]), Vec::<u64>::new());
        assert_eq!(invariant_factors(&[1, 4, 2, 4]), vec![4]);
        assert_eq!(invariant_factors(&[1, 2, 2, 2]), vec![2, 2]);
        // ℤ/2 × ℤ/6
        assert_eq!(invariant_factors(&[1, 2, 3, 6, 3, 6, 2, 2, 6, 6, 6, 6]), vec![2, 6]);
    }

    #[test]
    fn center_groups() {
        let cases: &[(Series, usize, u32, &[u64])] = &[
            (Series::A, 1, 3, &[2]),
            (Series::A, 3, 2, &[4]),
            (Series::B, 3, 2, &[2]),
            (Series::C, 3, 2, &[2]),
            (Series::D, 4, 2, &[2, 2]),
            (Series::D, 5, 2, &[4]),
            (Series::E, 6, 1, &[3]),
            (Series::E, 7, 1, &[2]),
            (Series::G, 2, 4, &[]),
            (Series::F, 4, 2, &[]),
        ];
        for &(s, n, k, want) in cases {
            let md = ModularData::new(s, n, k).unwrap();
            let g = find_invertibles(&md).unwrap();
            assert_eq!(g.structure(), want, "{}", md.label());
        }
    }

    #[test]
    fn actions_are_homomorphisms() {
        let md = ModularData::new(Series::D, 4, 3).unwrap();
        let g = find_invertibles(&md).unwrap();
        for a in 0..g.order() {
            for b in 0..g.order() {
                let ab = g.table[a][b];
                for l in 0..md.rank() {
                    assert_eq!(g.act(ab, l), g.act(a, g.act(b, l)));
                    assert!((md.qdims[g.act(a, l)] - md.qdims[l]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn so5_tannakian_parity() {
        for k in 1..9 {
            let md = ModularData::new(Series::B, 2, k).unwrap();
            let g = find_invertibles(&md).unwrap();
            assert_eq!(md.weight(g.elements[1]), &Weight::new(&[k as i32, 0]));
            let t = tannakian_subgroups(&g);
            assert_eq!(t.len(), if k % 2 == 0 { 2 } else { 1 }, "k={k}");
            assert!(t.last().unwrap().maximal);
        }
    }

    #[test]
    fn sl4_level4() {
        let md = ModularData::new(Series::A, 3, 4).unwrap();
        let g = find_invertibles(&md).unwrap();
        assert_eq!(g.structure(), vec![4]);
        let t = tannakian_subgroups(&g);
        assert_eq!(t.len(), 2);
        let h = maximal_tannakian(&g).unwrap();
        let w: Vec<_> = h.elements.iter().map(|&e| md.weight(e).clone()).collect();
        assert_eq!(w, vec![Weight::new(&[0, 0, 0]), Weight::new(&[0, 4, 0])]);
        let gen = g.position(md.index_of(&Weight::new(&[4, 0, 0])).unwrap()).unwrap();
        assert!(g.twists[gen].is_minus_one());
        assert_eq!(g.element_order(gen), 4);
    }
}
