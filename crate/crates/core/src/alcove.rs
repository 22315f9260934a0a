//! The level-k Weyl alcove and the ρ-shifted affine Weyl folding used by
//! the fusion rules.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rootsys::{RootSystem, Weight};

pub const DEFAULT_MAX_ALCOVE: usize = 200_000;

#[derive(Clone, Debug)]
pub struct Alcove {
    pub rs: Arc<RootSystem>,
    pub level: u32,
    /// Lexicographic on labels.
    pub weights: Vec<Weight>,
    pub index: HashMap<Weight, usize>,
}

impl Alcove {
    pub fn new(rs: Arc<RootSystem>, level: u32) -> Result<Self> {
        Self::with_cap(rs, level, DEFAULT_MAX_ALCOVE)
    }

    pub fn with_cap(rs: Arc<RootSystem>, level: u32, cap: usize) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidParameter("level must be at least 1".into()));
        }
        let mut weights = Vec::new();
        let mut cur = vec![0i32; rs.rank];
        enumerate(&rs, 0, level as i64, &mut cur, &mut weights, cap)?;
        let index = weights
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Ok(Alcove {
            rs,
            level,
            weights,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn position(&self, w: &Weight) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn require(&self, w: &Weight) -> Result<usize> {
        self.position(w).ok_or_else(|| Error::NotInAlcove {
            weight: w.to_string(),
            level: self.level,
        })
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.index.contains_key(w)
    }

    /// `k + h∨`.
    pub fn shifted_level(&self) -> i64 {
        self.level as i64 + self.rs.h_dual as i64
    }

    /// `m (k + h∨)`.
    pub fn altitude(&self) -> i64 {
        self.rs.lacing as i64 * self.shifted_level()
    }

    pub fn fold(&self, mu: &Weight) -> FoldResult {
        alcove_fold(&self.rs, self.level, mu)
    }
}

fn enumerate(
    rs: &RootSystem,
    i: usize,
    budget: i64,
    cur: &mut Vec<i32>,
    out: &mut Vec<Weight>,
    cap: usize,
) -> Result<()> {
    if i == rs.rank {
        if out.len() >= cap {
            return Err(Error::Capacity {
                what: "alcove size",
                size: out.len() as u64 + 1,
                cap: cap as u64,
            });
        }
        out.push(Weight::new(cur));
        return Ok(());
    }
    let c = rs.comarks[i] as i64;
    let mut x = 0;
    while x as i64 * c <= budget {
        cur[i] = x;
        enumerate(rs, i + 1, budget - x as i64 * c, cur, out, cap)?;
        x += 1;
    }
    cur[i] = 0;
    Ok(())
}

/// Outcome of folding a weight into the alcove.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldResult {
    /// `-1`, `0` or `+1`; zero when the shifted weight lies on a wall.
    pub sign: i8,
    pub weight: Weight,
}

/// Shifted affine Weyl action: reflect `μ+ρ` into the open fundamental
/// alcove of altitude `k+h∨`, then subtract `ρ`.
pub fn alcove_fold(rs: &RootSystem, level: u32, mu: &Weight) -> FoldResult {
    fold_counting(rs, level, mu).0
}

/// As [`alcove_fold`], also returning the number of reflections applied.
pub fn fold_counting(rs: &RootSystem, level: u32, mu: &Weight) -> (FoldResult, usize) {
    let wall = level as i64 + rs.h_dual as i64;
    let mut v = mu.add(&rs.rho);
    let mut odd = false;
    let mut steps = 0usize;
    let zero = |w: &Weight| FoldResult { sign: 0, weight: w.clone() };
    loop {
        if let Some(i) = v.0.iter().position(|&x| x <= 0) {
            if v.0[i] == 0 {
                return (zero(mu), steps);
            }
            rs.reflect_in_place(&mut v, i);
            odd = !odd;
            steps += 1;
            continue;
        }
        let height = rs.level_of(&v);
        if height == wall {
            return (zero(mu), steps);
        }
        if height < wall {
            break;
        }
        // affine reflection: v - (⟨v,θ∨⟩ - (k+h∨)) θ
        let c = (height - wall) as i32;
        for j in 0..rs.rank {
            v.0[j] -= c * rs.highest_root.0[j];
        }
        odd = !odd;
        steps += 1;
    }
    (
        FoldResult {
            sign: if odd { -1 } else { 1 },
            weight: v.sub(&rs.rho),
        },
        steps,
    )
}
