//! Subspaces over a small field as bitsets of their points, so that
//! `dim(a_i ∩ b_j)` is read off a popcount.

use std::collections::HashMap;

use super::{Flag, FlagError, GroupRealization};
use crate::field::Fe;

/// Largest ambient point count `|K|^n` handled.
pub const MAX_POINTS: u64 = 4096;

/// Point-set encoding of flags with coordinates in one subfield `K`.
pub struct Incidence {
    n: usize,
    k: usize,
    words: usize,
    index: HashMap<Fe, usize>,
    elems: Vec<Fe>,
    hardware_popcount: bool,
}

/// The point sets of `F_1, ..., F_n`, each `words` machine words long.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagSets {
    bits: Vec<u64>,
}

impl Incidence {
    /// `None` when `|K|^n` exceeds [`MAX_POINTS`].
    pub fn new(r: &GroupRealization, m: u32) -> Result<Option<Self>, FlagError> {
        let degree = r.level_degree(m)?;
        let elems = r.tower().subfield_elements(degree)?;
        let points = (elems.len() as u64).checked_pow(r.n() as u32).filter(|&p| p <= MAX_POINTS);
        let Some(points) = points else {
            return Ok(None);
        };
        let index = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        #[cfg(target_arch = "x86_64")]
        let hardware_popcount = std::arch::is_x86_feature_detected!("popcnt");
        #[cfg(not(target_arch = "x86_64"))]
        let hardware_popcount = false;
        Ok(Some(Self {
            n: r.n(),
            k: elems.len(),
            words: points.div_ceil(64) as usize,
            index,
            elems,
            hardware_popcount,
        }))
    }

    fn encode(&self, v: &[Fe]) -> usize {
        v.iter().rev().fold(0, |acc, x| acc * self.k + self.index[x])
    }

    pub fn sets(&self, r: &GroupRealization, f: &Flag) -> FlagSets {
        let t = r.tower();
        let mut bits = vec![0u64; self.n * self.words];
        let mut members: Vec<Vec<Fe>> = vec![vec![Fe::ZERO; self.n]];
        for i in 0..self.n {
            let row = f.row(i);
            let mut next = Vec::with_capacity(members.len() * self.k);
            for x in &members {
                for &c in &self.elems {
                    next.push(x.iter().zip(row).map(|(&a, &b)| t.add(a, t.mul(c, b))).collect::<Vec<_>>());
                }
            }
            let block = &mut bits[i * self.words..(i + 1) * self.words];
            for v in &next {
                let code = self.encode(v);
                block[code / 64] |= 1 << (code % 64);
            }
            members = next;
        }
        FlagSets { bits }
    }

    /// `relpos(a, b)` from the sizes `|a_i ∩ b_j| = |K|^{dim}`; entries
    /// past `n` are zero.
    pub fn relpos_array(&self, a: &FlagSets, b: &FlagSets) -> [usize; 4] {
        #[cfg(target_arch = "x86_64")]
        if self.hardware_popcount {
            // SAFETY: the CPU supports popcnt, checked at construction.
            return unsafe { self.relpos_popcnt(a, b) };
        }
        self.relpos_generic(a, b)
    }

    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "popcnt")]
    unsafe fn relpos_popcnt(&self, a: &FlagSets, b: &FlagSets) -> [usize; 4] {
        self.relpos_generic(a, b)
    }

    #[inline(always)]
    fn relpos_generic(&self, a: &FlagSets, b: &FlagSets) -> [usize; 4] {
        let (n, w) = (self.n, self.words);
        let mut common = [[1u32; 5]; 4];
        for i in 0..n {
            let x = &a.bits[i * w..(i + 1) * w];
            for j in 0..n {
                let y = &b.bits[j * w..(j + 1) * w];
                common[i][j + 1] = x.iter().zip(y).map(|(p, q)| (p & q).count_ones()).sum();
            }
        }
        // The dimension of a_i ∩ b_{j+1} over that of a_i ∩ b_j jumps
        // first at i = w(j).
        let mut perm = [0usize; 4];
        for j in 0..n {
            perm[j] = (0..n).find(|&i| common[i][j + 1] == common[i][j] * self.k as u32).unwrap_or(n - 1);
        }
        perm
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_frame() {
        let r = GroupRealization::parse("GL3@q=2", &[2]).unwrap();
        let inc = Incidence::new(&r, 2).unwrap().unwrap();
        let flags = r.enumerate_flags(2).unwrap();
        let sets: Vec<FlagSets> = flags.iter().map(|f| inc.sets(&r, f)).collect();
        for (a, sa) in flags.iter().zip(&sets).step_by(7) {
            let frame = r.frame(a).unwrap();
            for (b, sb) in flags.iter().zip(&sets) {
                assert_eq!(inc.relpos_array(sa, sb), frame.relpos_array(b).unwrap());
            }
        }
        assert!(Incidence::new(&GroupRealization::parse("GL4@q=3", &[2]).unwrap(), 2).unwrap().is_none());
    }
}
