use serde::{Deserialize, Serialize};

use super::CoxeterError;

/// Largest rank supported; generator sets are stored as 64-bit masks.
pub const MAX_RANK: usize = 64;

/// A Coxeter matrix together with an optional type label.
///
/// Entry `m(s, t)` is the order of `st`; the diagonal is 1 and off-diagonal
/// entries are at least 2. Infinite entries are not representable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoxeterDatum {
    matrix: Vec<Vec<u32>>,
    label: Option<String>,
}

impl CoxeterDatum {
    pub fn new(matrix: Vec<Vec<u32>>) -> Result<Self, CoxeterError> {
        let rank = matrix.len();
        if rank == 0 {
            return Err(CoxeterError::InvalidMatrix("rank must be positive".into()));
        }
        if rank > MAX_RANK {
            return Err(CoxeterError::InvalidMatrix(format!(
                "rank {rank} exceeds the supported maximum {MAX_RANK}"
            )));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != rank {
                return Err(CoxeterError::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {rank}",
                    row.len()
                )));
            }
            for (j, &m) in row.iter().enumerate() {
                if i == j && m != 1 {
                    return Err(CoxeterError::InvalidMatrix(format!(
                        "diagonal entry ({i},{i}) is {m}, expected 1"
                    )));
                }
                if i != j && m < 2 {
                    return Err(CoxeterError::InvalidMatrix(format!(
                        "off-diagonal entry ({i},{j}) is {m}, expected at least 2"
                    )));
                }
                if matrix[j][i] != m {
                    return Err(CoxeterError::InvalidMatrix(format!(
                        "matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self { matrix, label: None })
    }

    /// Builds the Coxeter matrix of a standard finite type.
    ///
    /// Labelling: `A_n`, `B_n`, `C_n` are chains `0 - 1 - ... - (n-1)` with
    /// the 4-edge at the end `n-2 - n-1` for B/C; `D_n` is the chain
    /// `0 - ... - (n-2)` with `n-1` also attached to `n-3`;
    /// `F_4` is `0 - 1 =4= 2 - 3`; `G_2` has a single 6-edge.
    pub fn from_type(letter: char, rank: usize) -> Result<Self, CoxeterError> {
        let bad = || CoxeterError::UnknownType(format!("{letter}{rank}"));
        let mut edges: Vec<(usize, usize, u32)> = Vec::new();
        match letter.to_ascii_uppercase() {
            'A' if rank >= 1 => {
                edges.extend((1..rank).map(|i| (i - 1, i, 3)));
            }
            'B' | 'C' if rank >= 2 => {
                edges.extend((1..rank - 1).map(|i| (i - 1, i, 3)));
                edges.push((rank - 2, rank - 1, 4));
            }
            'D' if rank >= 4 => {
                edges.extend((1..rank - 1).map(|i| (i - 1, i, 3)));
                edges.push((rank - 3, rank - 1, 3));
            }
            'F' if rank == 4 => {
                edges.extend([(0, 1, 3), (1, 2, 4), (2, 3, 3)]);
            }
            'G' if rank == 2 => edges.push((0, 1, 6)),
            _ => return Err(bad()),
        }
        let mut matrix = vec![vec![2u32; rank]; rank];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = 1;
        }
        for (i, j, m) in edges {
            matrix[i][j] = m;
            matrix[j][i] = m;
        }
        let mut datum = Self::new(matrix)?;
        datum.label = Some(format!("{}{rank}", letter.to_ascii_uppercase()));
        Ok(datum)
    }

    /// Parses either a type label such as `"A3"` or `"G2"`, or an explicit
    /// Coxeter matrix given as a JSON array of arrays.
    pub fn parse(text: &str) -> Result<Self, CoxeterError> {
        let text = text.trim();
        if text.starts_with('[') {
            let matrix: Vec<Vec<u32>> = serde_json::from_str(text)
                .map_err(|e| CoxeterError::Parse(format!("bad Coxeter matrix JSON: {e}")))?;
            return Self::new(matrix);
        }
        let mut chars = text.chars();
        let letter = chars
            .next()
            .ok_or_else(|| CoxeterError::Parse("empty group datum".into()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| CoxeterError::Parse(format!("bad group datum `{text}`")))?;
        Self::from_type(letter, rank)
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn m(&self, s: usize, t: usize) -> u32 {
        self.matrix[s][t]
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Whether the symmetric bilinear form `B(a_s, a_t) = -cos(pi / m(s,t))`
    /// is positive definite, which holds exactly for finite Coxeter groups.
    pub(crate) fn form_is_positive_definite(&self) -> bool {
        let n = self.rank();
        let mut a = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            for j in 0..n {
                a[i][j] = -(std::f64::consts::PI / self.matrix[i][j] as f64).cos();
            }
        }
        // Cholesky; a vanishing or negative pivot means not positive definite.
        for k in 0..n {
            let pivot = a[k][k];
            if pivot <= 1e-9 {
                return false;
            }
            for i in k + 1..n {
                let f = a[i][k] / pivot;
                for j in k + 1..n {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
        true
    }
}

impl std::fmt::Display for CoxeterDatum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.label {
            Some(l) => f.write_str(l),
            None => write!(f, "{}", serde_json::to_string(&self.matrix).unwrap_or_default()),
        }
    }
}
