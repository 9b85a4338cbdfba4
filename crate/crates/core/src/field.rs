//! Exact arithmetic over small prime fields and the dense linear algebra
//! the chain computations need: ranks, nullspaces, column spaces, solving.

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PrimeField {
    p: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
}

impl PrimeField {
    pub fn new(p: u32) -> Result<PrimeField, FieldError> {
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn order(&self) -> u32 {
        self.p
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.p
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn neg(&self, a: u32) -> u32 {
        (self.p - a % self.p) % self.p
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.p as u64) as u32
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(a % self.p != 0, "inverse of zero");
        // Fermat: a^(p-2) mod p.
        let mut result = 1u32;
        let mut base = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }
}

/// Dense matrix over a prime field, row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, field: &PrimeField, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = field.add(out.get(i, j), field.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, field: &PrimeField, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0, |acc, j| field.add(acc, field.mul(self.get(i, j), v[j])))
            })
            .collect()
    }

    /// Row echelon in place; returns pivot columns.
    fn echelonize(&mut self, field: &PrimeField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pivot_row) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            for j in 0..self.cols {
                let (a, b) = (self.get(row, j), self.get(pivot_row, j));
                self.set(row, j, b);
                self.set(pivot_row, j, a);
            }
            let inv = field.inv(self.get(row, col));
            for j in 0..self.cols {
                self.set(row, j, field.mul(inv, self.get(row, j)));
            }
            for r in 0..self.rows {
                if r != row && self.get(r, col) != 0 {
                    let factor = self.get(r, col);
                    for j in 0..self.cols {
                        let v = field.sub(self.get(r, j), field.mul(factor, self.get(row, j)));
                        self.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &PrimeField) -> usize {
        let mut copy = self.clone();
        copy.echelonize(field).len()
    }

    /// Columns spanning the kernel.
    pub fn nullspace(&self, field: &PrimeField) -> Matrix {
        let mut copy = self.clone();
        let pivots = copy.echelonize(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zero(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                basis.set(pc, k, field.neg(copy.get(r, fc)));
            }
        }
        basis
    }

    /// Columns spanning the column space (a maximal independent subset of
    /// the original columns, in order).
    pub fn column_space(&self, field: &PrimeField) -> Matrix {
        let mut copy = self.clone();
        let pivots = copy.echelonize(field);
        let mut basis = Matrix::zero(self.rows, pivots.len());
        for (k, &c) in pivots.iter().enumerate() {
            for i in 0..self.rows {
                basis.set(i, k, self.get(i, c));
            }
        }
        basis
    }

    /// Solves self * x = b, if consistent.
    pub fn solve(&self, field: &PrimeField, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(self.rows, b.len());
        let mut aug = Matrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.echelonize(field);
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }

    /// Expresses each column of `vectors` in the column basis `self`;
    /// None if some column is outside the span.
    pub fn express(&self, field: &PrimeField, vectors: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, vectors.rows);
        let mut out = Matrix::zero(self.cols, vectors.cols);
        for j in 0..vectors.cols {
            let x = self.solve(field, &vectors.column(j))?;
            for (i, &v) in x.iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Some(out)
    }

    /// Pivot rows of the column-echelon form of this basis matrix; used to
    /// split the ambient space into span plus complement coordinates.
    pub fn pivot_rows(&self, field: &PrimeField) -> Vec<usize> {
        // Echelonize the transpose: pivot columns of A^T are pivot rows of A.
        let mut t = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t.echelonize(field)
    }
}
