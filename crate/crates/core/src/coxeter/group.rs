use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::cyclotomic::{Cyclo, CyclotomicRing};
use super::{CoxeterDatum, CoxeterError, GeneratorSet};

/// Default cap on the number of group elements any enumeration may produce.
pub const DEFAULT_GROUP_BOUND: usize = 1_000_000;

type RootIndex = u32;

#[derive(Debug)]
struct GroupData {
    datum: CoxeterDatum,
    /// Number of positive roots. Root `k < npos` is positive, root `k + npos`
    /// is its negative; roots `0..rank` are the simple roots.
    npos: usize,
    /// Action of each simple reflection on root indices.
    generators: Vec<Vec<RootIndex>>,
    /// Positive-root coordinates, kept for the diagram-automorphism action.
    coords: Vec<Vec<Cyclo>>,
    lookup: HashMap<Vec<Cyclo>, RootIndex>,
}

/// A finite Coxeter group realised as a permutation group on its root system.
///
/// Cloning is cheap; all clones share the same root data.
#[derive(Debug, Clone)]
pub struct CoxeterGroup(Arc<GroupData>);

/// An element of a finite Coxeter group.
///
/// Stored as the permutation it induces on the roots, which is canonical.
/// The length is the number of positive roots sent to negative ones.
#[derive(Clone)]
pub struct WeylElement {
    group: CoxeterGroup,
    perm: Arc<[RootIndex]>,
    length: usize,
}

impl CoxeterGroup {
    /// Builds the root system of `datum` by closure from the simple roots.
    ///
    /// Fails with [`CoxeterError::InfiniteGroup`] when the datum does not
    /// define a finite group.
    pub fn new(datum: CoxeterDatum) -> Result<Self, CoxeterError> {
        Self::with_root_bound(datum, DEFAULT_GROUP_BOUND)
    }

    pub fn with_root_bound(datum: CoxeterDatum, root_bound: usize) -> Result<Self, CoxeterError> {
        if !datum.form_is_positive_definite() {
            return Err(CoxeterError::InfiniteGroup);
        }
        let rank = datum.rank();
        let ring = CyclotomicRing::for_orders(datum.matrix().iter().flatten().copied());
        let mut cos = vec![vec![ring.zero(); rank]; rank];
        for (i, row) in cos.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                if i != j {
                    *c = ring.two_cos_pi_over(datum.m(i, j));
                }
            }
        }
        // s_i changes only coordinate i:  c_i -> -c_i + sum_j 2cos(pi/m_ij) c_j.
        let reflect = |root: &[Cyclo], i: usize| -> Option<Vec<Cyclo>> {
            let mut acc = ring.neg(&root[i]);
            for j in 0..rank {
                if j != i && datum.m(i, j) > 2 && root[j].iter().any(|&c| c != 0) {
                    acc = ring.add(&acc, &ring.mul(&cos[i][j], &root[j])?)?;
                }
            }
            let mut out = root.to_vec();
            out[i] = acc;
            Some(out)
        };

        let mut coords: Vec<Vec<Cyclo>> = (0..rank)
            .map(|i| {
                let mut r = vec![ring.zero(); rank];
                r[i] = ring.one();
                r
            })
            .collect();
        let mut lookup: HashMap<Vec<Cyclo>, RootIndex> =
            coords.iter().enumerate().map(|(k, r)| (r.clone(), k as RootIndex)).collect();
        // For a positive root b other than a_i, s_i(b) is again positive, and
        // every positive root arises this way from a simple one.
        let mut queue: VecDeque<usize> = (0..rank).collect();
        while let Some(k) = queue.pop_front() {
            for i in 0..rank {
                if k == i {
                    continue;
                }
                let image = reflect(&coords[k], i).ok_or(CoxeterError::InfiniteGroup)?;
                if !lookup.contains_key(&image) {
                    if coords.len() >= root_bound {
                        return Err(CoxeterError::InfiniteGroup);
                    }
                    lookup.insert(image.clone(), coords.len() as RootIndex);
                    queue.push_back(coords.len());
                    coords.push(image);
                }
            }
        }
        let npos = coords.len();
        let mut generators = Vec::with_capacity(rank);
        for i in 0..rank {
            let mut perm = vec![0 as RootIndex; 2 * npos];
            for k in 0..npos {
                let image = if k == i {
                    (i + npos) as RootIndex
                } else {
                    let r = reflect(&coords[k], i).ok_or(CoxeterError::InfiniteGroup)?;
                    lookup[&r]
                };
                perm[k] = image;
                perm[k + npos] = negate(image, npos);
            }
            generators.push(perm);
        }
        Ok(Self(Arc::new(GroupData { datum, npos, generators, coords, lookup })))
    }

    pub fn from_label(label: &str) -> Result<Self, CoxeterError> {
        Self::new(CoxeterDatum::parse(label)?)
    }

    pub fn datum(&self) -> &CoxeterDatum {
        &self.0.datum
    }

    pub fn rank(&self) -> usize {
        self.0.datum.rank()
    }

    pub fn num_positive_roots(&self) -> usize {
        self.0.npos
    }

    pub fn all_generators(&self) -> GeneratorSet {
        GeneratorSet::full(self.rank())
    }

    pub fn same_group(&self, other: &CoxeterGroup) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.datum.matrix() == other.0.datum.matrix()
    }

    pub fn identity(&self) -> WeylElement {
        let perm: Arc<[RootIndex]> = (0..2 * self.0.npos as RootIndex).collect();
        WeylElement { group: self.clone(), perm, length: 0 }
    }

    pub fn generator(&self, s: usize) -> WeylElement {
        assert!(s < self.rank(), "generator index {s} out of range");
        WeylElement { group: self.clone(), perm: self.0.generators[s].clone().into(), length: 1 }
    }

    /// The product `s_{word[0]} s_{word[1]} ...`.
    pub fn from_word(&self, word: &[usize]) -> Result<WeylElement, CoxeterError> {
        let mut w = self.identity();
        for &s in word {
            if s >= self.rank() {
                return Err(CoxeterError::BadGenerator(s));
            }
            w = w.mul_generator(s);
        }
        Ok(w)
    }

    /// Parses the dot-separated word format (`""` is the identity).
    pub fn parse_element(&self, text: &str) -> Result<WeylElement, CoxeterError> {
        let text = text.trim();
        if text.is_empty() || text == "id" || text == "e" {
            return Ok(self.identity());
        }
        let word = text
            .split('.')
            .map(|t| t.trim().parse::<usize>().map_err(|_| CoxeterError::Parse(format!("bad word `{text}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        self.from_word(&word)
    }

    /// Every element of the group, each once, ordered by length and then by
    /// the lexicographically smallest reduced word.
    pub fn enumerate(&self, bound: usize) -> Result<Vec<WeylElement>, CoxeterError> {
        self.enumerate_subgroup(self.all_generators(), bound)
    }

    /// The standard parabolic subgroup generated by `gens`, in canonical order.
    pub fn parabolic_elements(&self, gens: GeneratorSet) -> Vec<WeylElement> {
        self.enumerate_subgroup(gens, usize::MAX).expect("unbounded")
    }

    fn enumerate_subgroup(&self, gens: GeneratorSet, bound: usize) -> Result<Vec<WeylElement>, CoxeterError> {
        let mut seen: HashSet<Arc<[RootIndex]>> = HashSet::new();
        let id = self.identity();
        seen.insert(id.perm.clone());
        let mut all = vec![id];
        let mut level_start = 0;
        while level_start < all.len() {
            let level_end = all.len();
            for idx in level_start..level_end {
                for s in gens.iter() {
                    if all[idx].has_right_descent(s) {
                        continue;
                    }
                    let next = all[idx].mul_generator(s);
                    if seen.insert(next.perm.clone()) {
                        if all.len() >= bound {
                            return Err(CoxeterError::GroupTooLarge { bound });
                        }
                        all.push(next);
                    }
                }
            }
            level_start = level_end;
        }
        let mut keyed: Vec<(usize, Vec<usize>, WeylElement)> =
            all.into_iter().map(|w| (w.length, w.reduced_word(), w)).collect();
        keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        Ok(keyed.into_iter().map(|(_, _, w)| w).collect())
    }

    /// The longest element of the standard parabolic subgroup on `gens`.
    pub fn longest_element(&self, gens: GeneratorSet) -> WeylElement {
        let mut w = self.identity();
        'grow: loop {
            for s in gens.iter() {
                if !w.has_right_descent(s) {
                    w = w.mul_generator(s);
                    continue 'grow;
                }
            }
            return w;
        }
    }

    /// Permutation of root indices induced by the linear map sending simple
    /// root `i` to simple root `sigma[i]`. `sigma` must preserve the matrix.
    pub(crate) fn root_permutation(&self, sigma: &[usize]) -> Vec<RootIndex> {
        let npos = self.0.npos;
        let rank = self.rank();
        let mut perm = vec![0 as RootIndex; 2 * npos];
        for k in 0..npos {
            let src = &self.0.coords[k];
            let mut image = src.clone();
            for j in 0..rank {
                image[sigma[j]] = src[j].clone();
            }
            let idx = self.0.lookup[&image];
            perm[k] = idx;
            perm[k + npos] = negate(idx, npos);
        }
        perm
    }

    pub(crate) fn element_from_root_permutation(&self, perm: Vec<RootIndex>) -> WeylElement {
        let npos = self.0.npos as RootIndex;
        let length = perm[..npos as usize].iter().filter(|&&r| r >= npos).count();
        WeylElement { group: self.clone(), perm: perm.into(), length }
    }
}

fn negate(idx: RootIndex, npos: usize) -> RootIndex {
    let npos = npos as RootIndex;
    if idx < npos {
        idx + npos
    } else {
        idx - npos
    }
}

impl WeylElement {
    pub fn group(&self) -> &CoxeterGroup {
        &self.group
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    fn check_same(&self, other: &WeylElement) -> Result<(), CoxeterError> {
        if self.group.same_group(&other.group) {
            Ok(())
        } else {
            Err(CoxeterError::DatumMismatch)
        }
    }

    pub fn multiply(&self, other: &WeylElement) -> Result<WeylElement, CoxeterError> {
        self.check_same(other)?;
        let perm: Vec<RootIndex> = other.perm.iter().map(|&k| self.perm[k as usize]).collect();
        Ok(self.group.element_from_root_permutation(perm))
    }

    pub fn inverse(&self) -> WeylElement {
        let mut inv = vec![0 as RootIndex; self.perm.len()];
        for (k, &img) in self.perm.iter().enumerate() {
            inv[img as usize] = k as RootIndex;
        }
        WeylElement { group: self.group.clone(), perm: inv.into(), length: self.length }
    }

    /// `w * s`.
    pub fn mul_generator(&self, s: usize) -> WeylElement {
        let gen = &self.group.0.generators[s];
        let perm: Arc<[RootIndex]> = gen.iter().map(|&k| self.perm[k as usize]).collect();
        let length = if self.has_right_descent(s) { self.length - 1 } else { self.length + 1 };
        WeylElement { group: self.group.clone(), perm, length }
    }

    /// `s * w`.
    pub fn generator_mul(&self, s: usize) -> WeylElement {
        let gen = &self.group.0.generators[s];
        let perm: Arc<[RootIndex]> = self.perm.iter().map(|&k| gen[k as usize]).collect();
        let length = if self.has_left_descent(s) { self.length - 1 } else { self.length + 1 };
        WeylElement { group: self.group.clone(), perm, length }
    }

    /// `l(ws) < l(w)`, i.e. `w` sends the simple root of `s` to a negative root.
    pub fn has_right_descent(&self, s: usize) -> bool {
        self.perm[s] as usize >= self.group.0.npos
    }

    /// `l(sw) < l(w)`, i.e. `w^{-1}` sends the simple root of `s` to a negative root.
    pub fn has_left_descent(&self, s: usize) -> bool {
        let pos = self.perm.iter().position(|&r| r as usize == s).expect("permutation");
        pos >= self.group.0.npos
    }

    pub fn descent(&self, s: usize, side: Side) -> bool {
        match side {
            Side::Left => self.has_left_descent(s),
            Side::Right => self.has_right_descent(s),
        }
    }

    pub fn right_descents(&self) -> GeneratorSet {
        (0..self.group.rank()).filter(|&s| self.has_right_descent(s)).collect()
    }

    /// The lexicographically smallest reduced word.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length);
        let mut w = self.clone();
        while !w.is_identity() {
            let s = (0..w.group.rank()).find(|&s| w.has_left_descent(s)).expect("nontrivial element has a descent");
            word.push(s);
            w = w.generator_mul(s);
        }
        word
    }

    /// The simple reflections occurring in a (any) reduced word.
    pub fn support(&self) -> GeneratorSet {
        self.reduced_word().into_iter().collect()
    }

    /// Bruhat order via the lifting recursion: for a right descent `s` of
    /// `w`, `v <= w` iff `vs <= ws` when `vs < v`, and `v <= ws` otherwise.
    pub fn bruhat_leq(&self, w: &WeylElement) -> Result<bool, CoxeterError> {
        self.check_same(w)?;
        let mut v = self.clone();
        let mut w = w.clone();
        loop {
            if v.is_identity() {
                return Ok(true);
            }
            if v.length > w.length {
                return Ok(false);
            }
            if v.length == w.length {
                return Ok(v.perm == w.perm);
            }
            let s = (0..w.group.rank()).find(|&s| w.has_right_descent(s)).expect("w is not the identity");
            w = w.mul_generator(s);
            if v.has_right_descent(s) {
                v = v.mul_generator(s);
            }
        }
    }

    /// Order of the element in the group.
    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut p = self.clone();
        while !p.is_identity() {
            p = p.multiply(self).expect("same group");
            k += 1;
        }
        k
    }

    /// Dot-separated canonical reduced word; empty for the identity.
    pub fn to_word_string(&self) -> String {
        self.reduced_word().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(".")
    }

    pub(crate) fn root_perm(&self) -> &[RootIndex] {
        &self.perm
    }
}

/// Which side a generator multiplies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.perm == other.perm && self.group.same_group(&other.group)
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.perm.hash(state);
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylElement({:?}, len {})", self.to_word_string(), self.length)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_word_string())
    }
}

impl std::ops::Mul for &WeylElement {
    type Output = WeylElement;

    /// Panics if the operands belong to different groups.
    fn mul(self, rhs: &WeylElement) -> WeylElement {
        self.multiply(rhs).expect("elements of different Coxeter groups")
    }
}
