//! Row reduction over a [`FieldTower`]. Vectors are `&[Fe]` of a common length.

use crate::field::{Fe, FieldTower};

/// A subspace held in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Echelon {
    n: usize,
    rows: Vec<Vec<Fe>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(n: usize) -> Self {
        Self { n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Fe>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its projection onto the pivot columns.
    pub fn reduce(&self, tower: &FieldTower, v: &[Fe]) -> Vec<Fe> {
        let mut x = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = x[p];
            if !c.is_zero() {
                for (xi, &ri) in x.iter_mut().zip(row) {
                    *xi = tower.sub(*xi, tower.mul(c, ri));
                }
            }
        }
        x
    }

    /// Adds `v` to the span, keeping the form reduced. Returns the new
    /// normalised row (zero at all earlier pivots, leading entry 1), or
    /// `None` if `v` already lies in the span.
    pub fn insert(&mut self, tower: &FieldTower, v: &[Fe]) -> Option<Vec<Fe>> {
        let x = self.reduce(tower, v);
        let p = x.iter().position(|c| !c.is_zero())?;
        let inv = tower.inv(x[p]).expect("nonzero");
        let r: Vec<Fe> = x.iter().map(|&c| tower.mul(c, inv)).collect();
        self.push_normalised(tower, r.clone(), p);
        Some(r)
    }

    /// Adds a row already zero at every existing pivot with a 1 at column `p`.
    pub fn push_normalised(&mut self, tower: &FieldTower, r: Vec<Fe>, p: usize) {
        for row in &mut self.rows {
            let c = row[p];
            if !c.is_zero() {
                for (yi, &ri) in row.iter_mut().zip(&r) {
                    *yi = tower.sub(*yi, tower.mul(c, ri));
                }
            }
        }
        // Keep rows sorted by pivot so the representation is canonical.
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
    }

    pub fn from_rows<'a>(tower: &FieldTower, n: usize, rows: impl IntoIterator<Item = &'a [Fe]>) -> Self {
        let mut e = Self::new(n);
        for r in rows {
            e.insert(tower, r);
        }
        e
    }

    /// Orthogonal complement for the symmetric form `B(x, y) = sum x_k y_{n-1-k}`.
    pub fn perp_antidiagonal(&self, tower: &FieldTower) -> Echelon {
        let n = self.n;
        // Conditions: sum_k row[n-1-c] x_c = 0 for each row.
        let conditions: Vec<Vec<Fe>> = self.rows.iter().map(|r| (0..n).map(|c| r[n - 1 - c]).collect()).collect();
        let cond = Echelon::from_rows(tower, n, conditions.iter().map(Vec::as_slice));
        let mut out = Echelon::new(n);
        for free in (0..n).filter(|c| !cond.pivots.contains(c)) {
            let mut x = vec![Fe::ZERO; n];
            x[free] = Fe::ONE;
            for (row, &p) in cond.rows.iter().zip(&cond.pivots) {
                x[p] = tower.neg(row[free]);
            }
            out.insert(tower, &x);
        }
        out
    }
}

/// Inverse of an `n x n` matrix given row-major; `None` if singular.
pub(crate) fn invert(tower: &FieldTower, m: &[Fe], n: usize) -> Option<Vec<Fe>> {
    let w = 2 * n;
    let mut a = vec![Fe::ZERO; n * w];
    for i in 0..n {
        a[i * w..i * w + n].copy_from_slice(&m[i * n..i * n + n]);
        a[i * w + n + i] = Fe::ONE;
    }
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r * w + col].is_zero())?;
        if piv != col {
            for k in 0..w {
                a.swap(piv * w + k, col * w + k);
            }
        }
        let inv = tower.inv(a[col * w + col]).ok()?;
        for k in 0..w {
            a[col * w + k] = tower.mul(a[col * w + k], inv);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let c = a[r * w + col];
            if c.is_zero() {
                continue;
            }
            for k in 0..w {
                let v = tower.mul(c, a[col * w + k]);
                a[r * w + k] = tower.sub(a[r * w + k], v);
            }
        }
    }
    let mut out = vec![Fe::ZERO; n * n];
    for i in 0..n {
        out[i * n..i * n + n].copy_from_slice(&a[i * w + n..i * w + w]);
    }
    Some(out)
}
