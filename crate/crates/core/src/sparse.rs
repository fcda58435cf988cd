//! Compressed sparse row storage for square complex matrices.
//!
//! Every matrix carries a nonzero diagonal, so the splitting `A = D - E - F`
//! (diagonal, negated strict lower, negated strict upper) is always
//! available implicitly.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use crate::complex::{c64, is_finite, ComplexScalar};
use crate::error::{Error, Result};

/// Square complex matrix in CSR form with a nonsingular diagonal.
///
/// Within each row the column indices are strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<ComplexScalar>,
    /// Offset of the diagonal entry of each row in `values`.
    diag_pos: Vec<usize>,
}

/// Color classes of a 2-cyclic ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Red,
    Black,
}

impl Color {
    fn flip(self) -> Self {
        match self {
            Color::Red => Color::Black,
            Color::Black => Color::Red,
        }
    }
}

impl SparseMatrix {
    /// Assembles from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(n: usize, entries: &[(usize, usize, ComplexScalar)]) -> Result<Self> {
        let mut sorted: Vec<(usize, usize, ComplexScalar)> = Vec::with_capacity(entries.len());
        for &(row, col, value) in entries {
            if row >= n || col >= n {
                return Err(Error::IndexOutOfRange { row, col, n });
            }
            if !is_finite(value) {
                return Err(Error::NonFinite);
            }
            sorted.push((row, col, value));
        }
        sorted.sort_by_key(|&(r, c, _)| (r, c));

        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(sorted.len());
        let mut values: Vec<ComplexScalar> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (row, col, value) in sorted {
            if last == Some((row, col)) {
                *values.last_mut().expect("duplicate follows an entry") += value;
                continue;
            }
            last = Some((row, col));
            row_ptr[row + 1] += 1;
            col_idx.push(col);
            values.push(value);
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self::from_csr(n, row_ptr, col_idx, values)
    }

    /// Wraps raw CSR arrays after checking every structural invariant.
    pub fn from_csr(
        n: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<ComplexScalar>,
    ) -> Result<Self> {
        if row_ptr.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: row_ptr.len(),
            });
        }
        if row_ptr[0] != 0 || row_ptr[n] != col_idx.len() || col_idx.len() != values.len() {
            return Err(Error::InvalidStructure(
                "row_ptr does not bracket the entries",
            ));
        }
        let mut diag_pos = Vec::with_capacity(n);
        for row in 0..n {
            let (start, end) = (row_ptr[row], row_ptr[row + 1]);
            if start > end {
                return Err(Error::InvalidStructure("row_ptr is decreasing"));
            }
            let cols = &col_idx[start..end];
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidStructure(
                    "column indices not strictly increasing",
                ));
            }
            if let Some(&col) = cols.iter().find(|&&c| c >= n) {
                return Err(Error::IndexOutOfRange { row, col, n });
            }
            match cols.binary_search(&row) {
                Ok(k) if values[start + k] != c64(0.0, 0.0) => diag_pos.push(start + k),
                _ => return Err(Error::SingularDiagonal { row }),
            }
        }
        if values.iter().any(|v| !is_finite(*v)) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            n,
            row_ptr,
            col_idx,
            values,
            diag_pos,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[ComplexScalar] {
        &self.values
    }

    #[inline]
    pub fn diag(&self, row: usize) -> ComplexScalar {
        self.values[self.diag_pos[row]]
    }

    /// Column indices and values of one row.
    #[inline]
    pub fn row(&self, row: usize) -> (&[usize], &[ComplexScalar]) {
        let (s, e) = (self.row_ptr[row], self.row_ptr[row + 1]);
        (&self.col_idx[s..e], &self.values[s..e])
    }

    /// Entry `(row, col)`, zero when not stored.
    pub fn get(&self, row: usize, col: usize) -> ComplexScalar {
        let (cols, vals) = self.row(row);
        cols.binary_search(&col)
            .map(|k| vals[k])
            .unwrap_or_default()
    }

    /// `y = A x`.
    pub fn matvec_into(&self, x: &[ComplexScalar], y: &mut [ComplexScalar]) {
        for (row, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(row);
            *yi = cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum();
        }
    }

    pub fn matvec(&self, x: &[ComplexScalar]) -> Result<Vec<ComplexScalar>> {
        self.check_len(x.len())?;
        let mut y = vec![ComplexScalar::default(); self.n];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    /// `‖b - A x‖₂`.
    pub fn residual_norm(&self, x: &[ComplexScalar], b: &[ComplexScalar]) -> f64 {
        let mut acc = 0.0;
        for (row, &bi) in b.iter().enumerate() {
            let (cols, vals) = self.row(row);
            let ax: ComplexScalar = cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum();
            acc += (bi - ax).norm_sqr();
        }
        acc.sqrt()
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: len,
            });
        }
        Ok(())
    }

    /// Breadth-first 2-coloring of the graph of nonzero off-diagonal entries.
    ///
    /// Returns the coloring when the graph is bipartite, i.e. when a
    /// symmetric permutation brings `A` to a 2x2 block form with diagonal
    /// diagonal blocks. Otherwise `None`.
    pub fn verify_2cyclic(&self) -> Option<Vec<Color>> {
        let zero = ComplexScalar::default();
        // Undirected adjacency: an edge i–j exists if a_ij or a_ji is nonzero.
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for row in 0..self.n {
            let (cols, vals) = self.row(row);
            for (&col, &v) in cols.iter().zip(vals) {
                if col != row && v != zero {
                    adj[row].push(col);
                    adj[col].push(row);
                }
            }
        }

        let mut color: Vec<Option<Color>> = vec![None; self.n];
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(Color::Red);
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].expect("queued vertices are colored");
                for &v in &adj[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(cu.flip());
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(
            color
                .into_iter()
                .map(|c| c.expect("all vertices visited"))
                .collect(),
        )
    }

    /// Writes the matrix as `row col re im` lines (0-based), preceded by a
    /// `n nnz` header line.
    pub fn write_coordinate<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {}", self.n, self.nnz())?;
        for row in 0..self.n {
            let (cols, vals) = self.row(row);
            for (&col, v) in cols.iter().zip(vals) {
                writeln!(w, "{row} {col} {:e} {:e}", v.re, v.im)?;
            }
        }
        Ok(())
    }

    /// Reads the format produced by [`write_coordinate`](Self::write_coordinate).
    /// Blank lines and lines starting with `#` or `%` are skipped.
    pub fn read_coordinate<R: BufRead>(r: R) -> Result<Self> {
        let mut n = None;
        let mut entries = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
                continue;
            }
            let fields: Vec<&str> = t.split_whitespace().collect();
            let parse_err = |msg: &str| Error::Parse {
                line: lineno + 1,
                msg: msg.to_string(),
            };
            match n {
                None => {
                    let dim = fields
                        .first()
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| parse_err("expected header `n nnz`"))?;
                    n = Some(dim);
                }
                Some(_) => {
                    if fields.len() != 4 {
                        return Err(parse_err("expected `row col re im`"));
                    }
                    let row = fields[0].parse().map_err(|_| parse_err("bad row"))?;
                    let col = fields[1].parse().map_err(|_| parse_err("bad column"))?;
                    let re = fields[2].parse().map_err(|_| parse_err("bad real part"))?;
                    let im = fields[3]
                        .parse()
                        .map_err(|_| parse_err("bad imaginary part"))?;
                    entries.push((row, col, c64(re, im)));
                }
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            msg: "empty input".into(),
        })?;
        Self::from_triplets(n, &entries)
    }
}
