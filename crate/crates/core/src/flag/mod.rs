//! Brute-force full flag varieties of `GL_n` over finite fields.
//!
//! Two Frobenius structures are realised: the split one (`x -> x^q`
//! entrywise) and the quasi-split unitary one, whose rational points are
//! the flags fixed by `F -> (phi F)^perp` with the index order reversed.
//! The unitary form is `h(x, y) = sum_k x_k y_{n+1-k}^q`, for which the
//! standard coordinate flag is rational.

mod incidence;
mod linalg;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::coxeter::{CoxeterError, CoxeterGroup, GeneratorSet, WeylElement};
use crate::field::{Fe, FieldError, FieldTower};
use crate::twist::{DiagramAutomorphism, TwistError, TwistedDatum};

pub use incidence::{FlagSets, Incidence};
use linalg::{invert, Echelon};

/// Default cap on the number of flags any single enumeration may visit.
pub const DEFAULT_FLAG_BOUND: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlagError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error("enumeration would visit {count} flags, above the bound {bound}")]
    BoundExceeded { count: u64, bound: u64 },
    #[error("flags belong to different realizations")]
    RealizationMismatch,
    #[error("extension level {0} is not available in the field tower")]
    LevelUnavailable(u32),
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("bad realization: {0}")]
    Parse(String),
    #[error("partial flag is not stable under the Frobenius: dimension {0} has no partner")]
    NotStable(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RealizationKind {
    Split,
    Unitary,
}

/// `GL_n` (split) or `U_n` (quasi-split unitary) over `F_q`, `2 <= n <= 4`.
#[derive(Debug, Clone)]
pub struct GroupRealization {
    n: usize,
    kind: RealizationKind,
    q: u64,
    tower: Arc<FieldTower>,
    twisted: TwistedDatum,
    flag_bound: u64,
}

/// A full flag `F_1 < ... < F_n`, stored by a canonical basis: row `i` is
/// the row of the reduced echelon form of `F_i` at its new pivot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    n: usize,
    rows: Vec<Fe>,
}

/// Some of the subspaces of a flag, each in reduced echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialFlag {
    n: usize,
    dims: Vec<usize>,
    spaces: Vec<Echelon>,
}

/// Relative position of two flags, a permutation of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelPos {
    perm: Vec<usize>,
}

impl Flag {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.rows[i * self.n..(i + 1) * self.n]
    }

    fn rows(&self) -> impl Iterator<Item = &[Fe]> {
        self.rows.chunks(self.n)
    }
}

impl PartialFlag {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Reduced echelon basis of the kept subspace of dimension `dims[k]`.
    pub fn space(&self, k: usize) -> Vec<Vec<Fe>> {
        self.spaces[k].rows().to_vec()
    }
}

impl RelPos {
    pub fn new(perm: Vec<usize>) -> Option<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return None;
            }
        }
        Some(Self { perm })
    }

    pub fn identity(n: usize) -> Self {
        Self { perm: (0..n).collect() }
    }

    /// `w_0`, the order-reversing permutation.
    pub fn longest(n: usize) -> Self {
        Self { perm: (0..n).rev().collect() }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (k, &p) in self.perm.iter().enumerate() {
            inv[p] = k;
        }
        Self { perm: inv }
    }

    pub fn inversions(&self) -> usize {
        let p = &self.perm;
        (0..p.len()).map(|i| (i + 1..p.len()).filter(|&j| p[i] > p[j]).count()).sum()
    }

    /// Conjugation by `w_0`, the diagram flip of type A.
    pub fn flip(&self) -> Self {
        let n = self.perm.len();
        Self { perm: (0..n).map(|k| n - 1 - self.perm[n - 1 - k]).collect() }
    }

    /// Generator `s_i` of `A_{n-1}` is the transposition of `i` and `i + 1`;
    /// a word `s_a s_b ...` is the composite `x -> s_a(s_b(...x))`.
    pub fn from_element(w: &WeylElement) -> Self {
        let n = w.group().rank() + 1;
        let mut perm: Vec<usize> = (0..n).collect();
        for s in w.reduced_word() {
            perm.swap(s, s + 1);
        }
        Self { perm }
    }

    pub fn to_element(&self, group: &CoxeterGroup) -> Result<WeylElement, CoxeterError> {
        let mut perm = self.perm.clone();
        let mut word = Vec::new();
        while let Some(i) = (0..perm.len().saturating_sub(1)).find(|&i| perm[i] > perm[i + 1]) {
            perm.swap(i, i + 1);
            word.push(i);
        }
        word.reverse();
        group.from_word(&word)
    }

    /// `r(i, j) = #{k < j : w(k) < i}` for `0 <= i, j <= n`.
    pub fn rank_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.perm.len();
        (0..=n)
            .map(|i| (0..=n).map(|j| self.perm[..j].iter().filter(|&&p| p < i).count()).collect())
            .collect()
    }
}

impl fmt::Display for RelPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.perm.iter().map(|p| (p + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// A flag `a` together with the inverse of its basis matrix.
pub struct Frame<'r> {
    realization: &'r GroupRealization,
    inv: Vec<Fe>,
}

impl Frame<'_> {
    /// `relpos(a, b)`. In the coordinates `C = B A^{-1}` the space `a_i`
    /// is spanned by the first `i` unit vectors, so `w(j)` is the last
    /// nonzero column of row `j` after clearing it against earlier rows
    /// along their last nonzero columns.
    pub fn relpos(&self, b: &Flag) -> Result<RelPos, FlagError> {
        let perm = self.relpos_array(b)?;
        Ok(RelPos { perm: perm[..self.realization.n].to_vec() })
    }

    /// [`Frame::relpos`] without allocation; entries past `n` are zero.
    pub fn relpos_array(&self, b: &Flag) -> Result<[usize; 4], FlagError> {
        let r = self.realization;
        let (n, t) = (r.n, &*r.tower);
        if b.n != n {
            return Err(FlagError::RealizationMismatch);
        }
        let mut c = [[Fe::ZERO; 4]; 4];
        for j in 0..n {
            for k in 0..n {
                let mut acc = Fe::ZERO;
                for l in 0..n {
                    acc = t.add(acc, t.mul(b.rows[j * n + l], self.inv[l * n + k]));
                }
                c[j][k] = acc;
            }
        }
        let mut perm = [0usize; 4];
        for j in 0..n {
            for prev in 0..j {
                let p = perm[prev];
                let x = c[j][p];
                if !x.is_zero() {
                    // Row `prev` is scaled so that its entry at `p` is 1.
                    for k in 0..=p {
                        c[j][k] = t.sub(c[j][k], t.mul(x, c[prev][k]));
                    }
                }
            }
            let p = (0..n).rev().find(|&k| !c[j][k].is_zero()).ok_or(FlagError::Dependent)?;
            let inv = t.inv(c[j][p])?;
            for k in 0..=p {
                c[j][k] = t.mul(c[j][k], inv);
            }
            perm[j] = p;
        }
        Ok(perm)
    }
}

/// Splits a prime power into `(p, d)` with `q = p^d`.
fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut d = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        d += 1;
    }
    (rest == 1).then_some((p, d))
}

impl GroupRealization {
    /// `levels` lists every extension degree `m` that callers will use.
    pub fn new(kind: RealizationKind, n: usize, q: u64, levels: &[u32]) -> Result<Self, FlagError> {
        if !(2..=4).contains(&n) {
            return Err(FlagError::Parse(format!("dimension {n} outside 2..=4")));
        }
        let (p, d) = prime_power(q).ok_or_else(|| FlagError::Parse(format!("{q} is not a prime power")))?;
        let factor = match kind {
            RealizationKind::Split => 1,
            RealizationKind::Unitary => 2,
        };
        let degrees: Vec<u32> = std::iter::once(1).chain(levels.iter().copied()).map(|m| factor * m).collect();
        let tower = FieldTower::build(p, d, &degrees)?;
        let group = CoxeterGroup::from_label(&format!("A{}", n - 1))?;
        let sigma = match kind {
            RealizationKind::Split => DiagramAutomorphism::identity(n - 1),
            RealizationKind::Unitary => DiagramAutomorphism::new(group.datum(), (0..n - 1).rev().collect())?,
        };
        let twisted = TwistedDatum::new(group, sigma)?;
        Ok(Self { n, kind, q, tower: Arc::new(tower), twisted, flag_bound: DEFAULT_FLAG_BOUND })
    }

    /// Parses `"GL3@q=2"` or `"U4@q=2"`.
    pub fn parse(spec: &str, levels: &[u32]) -> Result<Self, FlagError> {
        let bad = || FlagError::Parse(format!("bad realization `{spec}`"));
        let (group, q) = spec.trim().split_once('@').ok_or_else(bad)?;
        let q: u64 = q.trim().strip_prefix("q=").ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let group = group.trim().to_ascii_uppercase();
        let (kind, n) = if let Some(n) = group.strip_prefix("GL") {
            (RealizationKind::Split, n)
        } else if let Some(n) = group.strip_prefix('U') {
            (RealizationKind::Unitary, n)
        } else {
            return Err(bad());
        };
        let n: usize = n.parse().map_err(|_| bad())?;
        Self::new(kind, n, q, levels)
    }

    /// The same group with a tower that also carries the levels `levels`.
    pub fn with_levels(&self, levels: &[u32]) -> Result<Self, FlagError> {
        if levels.iter().all(|&m| self.level_degree(m).is_ok()) {
            return Ok(self.clone());
        }
        Ok(Self::new(self.kind, self.n, self.q, levels)?.with_flag_bound(self.flag_bound))
    }

    pub fn with_flag_bound(mut self, bound: u64) -> Self {
        self.flag_bound = bound;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> RealizationKind {
        self.kind
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn twisted(&self) -> &TwistedDatum {
        &self.twisted
    }

    pub fn flag_bound(&self) -> u64 {
        self.flag_bound
    }

    pub fn label(&self) -> String {
        let prefix = match self.kind {
            RealizationKind::Split => "GL",
            RealizationKind::Unitary => "U",
        };
        format!("{prefix}{}@q={}", self.n, self.q)
    }

    /// Degree over `F_p` of the coordinate field at level `m`:
    /// `F_{q^m}` (split) or `F_{q^{2m}}` (unitary).
    fn level_degree(&self, m: u32) -> Result<u32, FlagError> {
        let factor = match self.kind {
            RealizationKind::Split => 1,
            RealizationKind::Unitary => 2,
        };
        let k = factor * m * self.tower.q_degree();
        if m == 0 || !self.tower.contains_degree(k) {
            return Err(FlagError::LevelUnavailable(m));
        }
        Ok(k)
    }

    /// Size of the coordinate field at level `m`.
    pub fn level_field_size(&self, m: u32) -> Result<u64, FlagError> {
        Ok((self.tower.characteristic() as u64).pow(self.level_degree(m)?))
    }

    /// Number of full flags over a field with `field_size` elements.
    pub fn flag_count(n: usize, field_size: u64) -> u64 {
        (1..=n as u32).map(|i| (field_size.pow(i) - 1) / (field_size - 1)).product()
    }

    fn check_bound(&self, m: u32) -> Result<(), FlagError> {
        let count = Self::flag_count(self.n, self.level_field_size(m)?);
        if count > self.flag_bound {
            return Err(FlagError::BoundExceeded { count, bound: self.flag_bound });
        }
        Ok(())
    }

    /// Canonical form of the flag spanned by the rows of `basis` (row-major).
    pub fn canonicalize(&self, basis: &[Fe]) -> Result<Flag, FlagError> {
        let n = self.n;
        let mut ech = Echelon::new(n);
        let mut rows = Vec::with_capacity(n * n);
        for v in basis.chunks(n) {
            rows.extend(ech.insert(&self.tower, v).ok_or(FlagError::Dependent)?);
        }
        if ech.dim() != n {
            return Err(FlagError::Dependent);
        }
        Ok(Flag { n, rows })
    }

    /// The standard coordinate flag, rational in both realizations.
    pub fn base_flag(&self) -> Flag {
        let n = self.n;
        let mut rows = vec![Fe::ZERO; n * n];
        for i in 0..n {
            rows[i * n + i] = Fe::ONE;
        }
        Flag { n, rows }
    }

    /// The flag `w . base`, spanned in order by `e_{w(0)}, e_{w(1)}, ...`.
    pub fn permuted_base_flag(&self, w: &RelPos) -> Flag {
        let n = self.n;
        let mut basis = vec![Fe::ZERO; n * n];
        for (k, &p) in w.perm.iter().enumerate() {
            basis[k * n + p] = Fe::ONE;
        }
        self.canonicalize(&basis).expect("permutation matrix is invertible")
    }

    /// Visits every flag with coordinates in the level-`m` field.
    pub fn for_each_flag(&self, m: u32, mut visit: impl FnMut(&Flag)) -> Result<(), FlagError> {
        self.check_bound(m)?;
        let elems = self.tower.subfield_elements(self.level_degree(m)?)?;
        let mut rows = Vec::with_capacity(self.n * self.n);
        self.extend_flag(&elems, Echelon::new(self.n), &mut rows, &mut visit);
        Ok(())
    }

    fn extend_flag(&self, elems: &[Fe], ech: Echelon, rows: &mut Vec<Fe>, visit: &mut impl FnMut(&Flag)) {
        let n = self.n;
        if ech.dim() == n {
            visit(&Flag { n, rows: rows.clone() });
            return;
        }
        // New vectors are supported on the non-pivot columns, with leading
        // entry 1; each line of V / F_i is hit exactly once.
        let free: Vec<usize> = (0..n).filter(|c| !ech.pivots().contains(c)).collect();
        for (lead_idx, &lead) in free.iter().enumerate() {
            let tail = &free[lead_idx + 1..];
            let combos = (elems.len() as u64).pow(tail.len() as u32);
            for code in 0..combos {
                let mut v = vec![Fe::ZERO; n];
                v[lead] = Fe::ONE;
                let mut c = code;
                for &col in tail {
                    v[col] = elems[(c % elems.len() as u64) as usize];
                    c /= elems.len() as u64;
                }
                let mut next = ech.clone();
                next.push_normalised(&self.tower, v.clone(), lead);
                rows.extend_from_slice(&v);
                self.extend_flag(elems, next, rows, visit);
                rows.truncate(rows.len() - n);
            }
        }
    }

    pub fn enumerate_flags(&self, m: u32) -> Result<Vec<Flag>, FlagError> {
        let mut out = Vec::new();
        self.for_each_flag(m, |f| out.push(f.clone()))?;
        Ok(out)
    }

    /// Relative position: the permutation `w` with
    /// `dim(a_i ∩ b_j) = #{k <= j : w(k) <= i}` (1-based).
    pub fn relpos(&self, a: &Flag, b: &Flag) -> Result<RelPos, FlagError> {
        self.frame(a)?.relpos(b)
    }

    /// Precomputes the coordinates relative to `a`, for many `relpos(a, _)`.
    pub fn frame(&self, a: &Flag) -> Result<Frame<'_>, FlagError> {
        if a.n != self.n {
            return Err(FlagError::RealizationMismatch);
        }
        let inv = invert(&self.tower, &a.rows, self.n).ok_or(FlagError::Dependent)?;
        Ok(Frame { realization: self, inv })
    }

    /// The Frobenius on flags; its fixed points are the rational flags.
    pub fn frobenius_flag(&self, f: &Flag) -> Flag {
        let n = self.n;
        let phi: Vec<Fe> = f.rows.iter().map(|&x| self.tower.frobenius_q(x)).collect();
        match self.kind {
            RealizationKind::Split => self.canonicalize(&phi).expect("Frobenius is bijective"),
            RealizationKind::Unitary => {
                // Rows d_l with B(g_k, d_l) = delta_kl, B(x, y) = x J y^T;
                // then (phi F)_{n-i}^perp = span(d_{n-i}, ..., d_{n-1}).
                let mut mj = vec![Fe::ZERO; n * n];
                for k in 0..n {
                    for l in 0..n {
                        mj[k * n + l] = phi[k * n + (n - 1 - l)];
                    }
                }
                let inv = invert(&self.tower, &mj, n).expect("flag basis is invertible");
                // d_l is column l of inv; the new basis is d_{n-1}, ..., d_0.
                let mut basis = Vec::with_capacity(n * n);
                for i in 0..n {
                    let l = n - 1 - i;
                    basis.extend((0..n).map(|r| inv[r * n + l]));
                }
                self.canonicalize(&basis).expect("dual basis is invertible")
            }
        }
    }

    pub fn is_rational(&self, f: &Flag) -> bool {
        self.frobenius_flag(f) == *f
    }

    /// All Frobenius-fixed flags, found among the level-1 flags.
    pub fn rational_flags(&self) -> Result<Vec<Flag>, FlagError> {
        let mut out = Vec::new();
        self.for_each_flag(1, |f| {
            if self.is_rational(f) {
                out.push(f.clone());
            }
        })?;
        Ok(out)
    }

    /// Level-`m` points of `X(w)`: flags `F` with `relpos(F, Phi F) = w`.
    pub fn dl_points(&self, w: &RelPos, m: u32) -> Result<Vec<Flag>, FlagError> {
        let mut out = Vec::new();
        let mut err = None;
        self.for_each_flag(m, |f| {
            match self.relpos(f, &self.frobenius_flag(f)) {
                Ok(r) if r == *w => out.push(f.clone()),
                Ok(_) => {}
                Err(e) => err = Some(e),
            }
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// Level-`m` flags grouped by `relpos(F, Phi F)`.
    pub fn dl_partition(&self, m: u32) -> Result<HashMap<RelPos, Vec<Flag>>, FlagError> {
        let mut out: HashMap<RelPos, Vec<Flag>> = HashMap::new();
        let mut err = None;
        self.for_each_flag(m, |f| match self.relpos(f, &self.frobenius_flag(f)) {
            Ok(r) => out.entry(r).or_default().push(f.clone()),
            Err(e) => err = Some(e),
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// The Schubert cell of `f` relative to `base`: `f ∈ C_v` iff this is `v`.
    pub fn schubert_cell_of(&self, base: &Flag, f: &Flag) -> Result<RelPos, FlagError> {
        self.relpos(base, f)
    }

    /// Forgets the subspaces `F_d` with `s_{d-1} ∈ J` (1-based `d`).
    pub fn project_partial(&self, f: &Flag, j: GeneratorSet) -> PartialFlag {
        let n = self.n;
        let dims: Vec<usize> = (1..n).filter(|&d| !j.contains(d - 1)).collect();
        let spaces = dims
            .iter()
            .map(|&d| Echelon::from_rows(&self.tower, n, f.rows().take(d)))
            .collect();
        PartialFlag { n, dims, spaces }
    }

    /// The Frobenius on partial flags; the kept dimensions must be
    /// closed under `d -> n - d` in the unitary case.
    pub fn frobenius_partial(&self, pf: &PartialFlag) -> Result<PartialFlag, FlagError> {
        let n = self.n;
        let phi = |e: &Echelon| -> Echelon {
            let rows: Vec<Vec<Fe>> =
                e.rows().iter().map(|r| r.iter().map(|&x| self.tower.frobenius_q(x)).collect()).collect();
            Echelon::from_rows(&self.tower, n, rows.iter().map(Vec::as_slice))
        };
        let spaces = match self.kind {
            RealizationKind::Split => pf.spaces.iter().map(phi).collect(),
            RealizationKind::Unitary => pf
                .dims
                .iter()
                .map(|&d| {
                    let partner = pf.dims.iter().position(|&e| e == n - d).ok_or(FlagError::NotStable(d))?;
                    Ok(phi(&pf.spaces[partner]).perp_antidiagonal(&self.tower))
                })
                .collect::<Result<Vec<_>, FlagError>>()?,
        };
        Ok(PartialFlag { n, dims: pf.dims.clone(), spaces })
    }

    /// Image under sigma of a relative position (identity when split).
    pub fn sigma_relpos(&self, w: &RelPos) -> RelPos {
        match self.kind {
            RealizationKind::Split => w.clone(),
            RealizationKind::Unitary => w.flip(),
        }
    }

    pub fn relpos_element(&self, w: &RelPos) -> WeylElement {
        w.to_element(self.twisted.group()).expect("permutation of the right size")
    }

    pub fn flag_to_json(&self, f: &Flag) -> Value {
        json!(f
            .rows()
            .map(|r| r.iter().map(|&x| self.tower.coefficients(x)).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }

    pub fn partial_to_json(&self, pf: &PartialFlag) -> Value {
        let spaces: Vec<Value> = pf
            .spaces
            .iter()
            .map(|e| {
                json!(e
                    .rows()
                    .iter()
                    .map(|r| r.iter().map(|&x| self.tower.coefficients(x)).collect::<Vec<_>>())
                    .collect::<Vec<_>>())
            })
            .collect();
        json!({"dims": pf.dims, "spaces": spaces})
    }
}
