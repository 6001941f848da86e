//! Dense bit-packed linear algebra over the two-element field.
//!
//! Everything downstream (boundary matrices, homology bases, rank tables,
//! persistence reduction) reduces to rank/solve/kernel computations here.

/// A vector over Z/2, bit-packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Z2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Z2Vector {
    pub fn zeros(len: usize) -> Self {
        Z2Vector {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = Z2Vector::zeros(len);
        for &i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    /// In-place addition (xor).
    pub fn add_assign(&mut self, other: &Z2Vector) {
        debug_assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the highest set bit, if any.
    pub fn max_index(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(wi * 64 + 63 - w.leading_zeros() as usize);
            }
        }
        None
    }

    /// Index of the lowest set bit, if any.
    pub fn min_index(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

/// A column-major matrix over Z/2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Z2Matrix {
    rows: usize,
    cols: Vec<Z2Vector>,
}

impl Z2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Z2Matrix {
            rows,
            cols: vec![Z2Vector::zeros(rows); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Z2Matrix::zeros(n, n);
        for i in 0..n {
            m.cols[i].set(i, true);
        }
        m
    }

    pub fn from_columns(rows: usize, cols: Vec<Z2Vector>) -> Self {
        debug_assert!(cols.iter().all(|c| c.len() == rows));
        Z2Matrix { rows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cols[col].get(row)
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.cols[col].set(row, value);
    }

    pub fn column(&self, col: usize) -> &Z2Vector {
        &self.cols[col]
    }

    pub fn push_column(&mut self, col: Z2Vector) {
        debug_assert_eq!(col.len(), self.rows);
        self.cols.push(col);
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &Z2Vector) -> Z2Vector {
        debug_assert_eq!(v.len(), self.ncols());
        let mut out = Z2Vector::zeros(self.rows);
        for (j, col) in self.cols.iter().enumerate() {
            if v.get(j) {
                out.add_assign(col);
            }
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn multiply(&self, other: &Z2Matrix) -> Z2Matrix {
        debug_assert_eq!(self.ncols(), other.nrows());
        let cols = other.cols.iter().map(|c| self.apply(c)).collect();
        Z2Matrix::from_columns(self.rows, cols)
    }

    pub fn rank(&self) -> usize {
        Eliminator::new(self.rows).rank_of(self.cols.iter())
    }

    /// Basis of the kernel, one vector of coefficients per free column.
    pub fn kernel_basis(&self) -> Vec<Z2Vector> {
        // Column-reduce while tracking the combination applied to each column.
        let n = self.ncols();
        let mut work: Vec<Z2Vector> = self.cols.clone();
        let mut comb: Vec<Z2Vector> = (0..n).map(|j| Z2Vector::from_indices(n, &[j])).collect();
        // pivot row -> column index holding that pivot
        let mut pivot_of_row: Vec<Option<usize>> = vec![None; self.rows];
        let mut kernel = Vec::new();
        for j in 0..n {
            loop {
                match work[j].max_index() {
                    None => {
                        kernel.push(comb[j].clone());
                        break;
                    }
                    Some(r) => match pivot_of_row[r] {
                        None => {
                            pivot_of_row[r] = Some(j);
                            break;
                        }
                        Some(p) => {
                            let (wp, cp) = (work[p].clone(), comb[p].clone());
                            work[j].add_assign(&wp);
                            comb[j].add_assign(&cp);
                        }
                    },
                }
            }
        }
        kernel
    }

    /// Solve `self * x = b`; returns one solution if `b` lies in the column space.
    pub fn solve(&self, b: &Z2Vector) -> Option<Z2Vector> {
        debug_assert_eq!(b.len(), self.rows);
        let n = self.ncols();
        let mut work: Vec<Z2Vector> = self.cols.clone();
        let mut comb: Vec<Z2Vector> = (0..n).map(|j| Z2Vector::from_indices(n, &[j])).collect();
        let mut pivot_of_row: Vec<Option<usize>> = vec![None; self.rows];
        for j in 0..n {
            loop {
                match work[j].max_index() {
                    None => break,
                    Some(r) => match pivot_of_row[r] {
                        None => {
                            pivot_of_row[r] = Some(j);
                            break;
                        }
                        Some(p) => {
                            let (wp, cp) = (work[p].clone(), comb[p].clone());
                            work[j].add_assign(&wp);
                            comb[j].add_assign(&cp);
                        }
                    },
                }
            }
        }
        let mut residue = b.clone();
        let mut x = Z2Vector::zeros(n);
        while let Some(r) = residue.max_index() {
            let p = pivot_of_row[r]?;
            residue.add_assign(&work[p]);
            x.add_assign(&comb[p]);
        }
        Some(x)
    }
}

/// Incremental Gaussian elimination: feed columns, observe rank growth.
pub struct Eliminator {
    rows: usize,
    pivots: Vec<Option<Z2Vector>>, // indexed by pivot row
    rank: usize,
}

impl Eliminator {
    pub fn new(rows: usize) -> Self {
        Eliminator {
            rows,
            pivots: vec![None; rows],
            rank: 0,
        }
    }

    /// Reduce `col` against the pivots seen so far; if a remainder survives it
    /// becomes a new pivot and the rank grows. Returns true when rank grew.
    pub fn insert(&mut self, col: &Z2Vector) -> bool {
        debug_assert_eq!(col.len(), self.rows);
        let mut c = col.clone();
        while let Some(r) = c.max_index() {
            match &self.pivots[r] {
                Some(p) => {
                    let p = p.clone();
                    c.add_assign(&p);
                }
                None => {
                    self.pivots[r] = Some(c);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }

    /// True when `col` already lies in the span of the inserted columns.
    pub fn in_span(&self, col: &Z2Vector) -> bool {
        let mut c = col.clone();
        while let Some(r) = c.max_index() {
            match &self.pivots[r] {
                Some(p) => c.add_assign(&p.clone()),
                None => return false,
            }
        }
        true
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn rank_of<'a>(mut self, cols: impl Iterator<Item = &'a Z2Vector>) -> usize {
        for c in cols {
            self.insert(c);
        }
        self.rank
    }
}
