use std::fmt;

use crate::scalar::Exact;

use super::PosGeomError;

/// Dense row-major matrix over an exact field.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Exact> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self, PosGeomError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(PosGeomError::DimensionMismatch("rows of unequal length".into()));
        }
        Ok(Self { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from integers.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| F::from_int(x)).collect()).collect())
            .expect("rectangular integer rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: F) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PosGeomError> {
        if self.cols != other.rows {
            return Err(PosGeomError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Sub-matrix on the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self {
            rows: rows.len(),
            cols: cols.len(),
            data: rows.iter().flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone())).collect(),
        }
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        self.select(&(0..self.rows).collect::<Vec<_>>(), cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        self.select(rows, &(0..self.cols).collect::<Vec<_>>())
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &Self) -> Result<Self, PosGeomError> {
        if self.cols != other.cols {
            return Err(PosGeomError::DimensionMismatch(format!("stacking {} and {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Determinant by fraction-producing Gaussian elimination.
    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = F::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&i| !a.get(i, col).is_zero()) else { return F::zero() };
            if pivot != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a.get(col, col).clone();
            det = det * p.clone();
            for i in col + 1..n {
                let factor = a.get(i, col).clone() / p.clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a.get(i, j).clone() - factor.clone() * a.get(col, j).clone();
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, col).is_zero()) else { continue };
            for j in 0..a.cols {
                a.data.swap(r * a.cols + j, p * a.cols + j);
            }
            let inv = F::one() / a.get(r, col).clone();
            for j in 0..a.cols {
                let v = a.get(r, j).clone() * inv.clone();
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                if i == r || a.get(i, col).is_zero() {
                    continue;
                }
                let factor = a.get(i, col).clone();
                for j in 0..a.cols {
                    let v = a.get(i, j).clone() - factor.clone() * a.get(r, j).clone();
                    a.set(i, j, v);
                }
            }
            pivots.push(col);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(r.select(&(0..n).collect::<Vec<_>>(), &(n..2 * n).collect::<Vec<_>>()))
    }

    /// Whether both matrices have the same row space.
    pub fn same_row_space(&self, other: &Self) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let (a, pa) = self.rref();
        let (b, pb) = other.rref();
        pa == pb && a.select_rows(&(0..pa.len()).collect::<Vec<_>>()) == b.select_rows(&(0..pb.len()).collect::<Vec<_>>())
    }

    /// Parses comma-separated rationals (`p/q` allowed), one row per line.
    pub fn parse(input: &str) -> Result<Self, PosGeomError> {
        let mut rows = Vec::new();
        for (idx, raw) in input.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let mut row = Vec::new();
            let mut offset = 0;
            for field in content.split(',') {
                let trimmed = field.trim();
                let column = offset + field.find(trimmed).unwrap_or(0) + 1;
                offset += field.len() + 1;
                let normalized = if trimmed.contains('/') { trimmed.to_string() } else { format!("{trimmed}/1") };
                let value = F::from_str_radix(&normalized, 10).map_err(|_| crate::text::ParseError {
                    line: idx + 1,
                    column,
                    message: format!("expected a rational, found `{trimmed}`"),
                })?;
                row.push(value);
            }
            rows.push((idx + 1, row));
        }
        if let Some(&(line, ref first)) = rows.first() {
            if let Some((bad, _)) = rows.iter().find(|(_, r)| r.len() != first.len()) {
                return Err(crate::text::ParseError {
                    line: *bad,
                    column: 1,
                    message: format!("row has a different length than line {line}"),
                }
                .into());
            }
        }
        Self::from_rows(rows.into_iter().map(|(_, r)| r).collect())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            out.push_str(&row.join(", "));
            out.push('\n');
        }
        out
    }
}

impl<F: Exact> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Maximal minors, subsets taken on the longer side, in lexicographic order.
pub fn maximal_minors<F: Exact>(m: &Matrix<F>) -> Vec<(Vec<usize>, F)> {
    if m.rows() <= m.cols() {
        let rows: Vec<usize> = (0..m.rows()).collect();
        subsets(m.cols(), m.rows()).into_iter().map(|s| {
            let d = m.select(&rows, &s).det();
            (s, d)
        }).collect()
    } else {
        let cols: Vec<usize> = (0..m.cols()).collect();
        subsets(m.rows(), m.cols()).into_iter().map(|s| {
            let d = m.select(&s, &cols).det();
            (s, d)
        }).collect()
    }
}
