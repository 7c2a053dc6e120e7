//! Dense linear algebra over a prime field F_p, p < 2^31.
//!
//! Everything here is plain Gaussian elimination; matrices stay small
//! (dimension at most a few dozen) throughout the crate.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMat {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>, // row major, entries reduced mod p
}

impl FpMat {
    pub fn new(p: u64, rows: usize, cols: usize) -> Self {
        FpMat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = FpMat::new(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v.rem_euclid(p as i64) as u64);
            }
        }
        m
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = FpMat::new(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn mul(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.cols, other.rows);
        let mut out = FpMat::new(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = (out.get(i, j) + a * other.get(k, j)) % self.p;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add_scaled_identity(&self, lambda: u64) -> FpMat {
        assert_eq!(self.rows, self.cols);
        let mut out = self.clone();
        for i in 0..self.rows {
            out.set(i, i, (out.get(i, i) + lambda) % self.p);
        }
        out
    }

    pub fn hstack(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.rows, other.rows);
        let mut out = FpMat::new(self.p, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    fn inv_mod(&self, a: u64) -> u64 {
        // p prime, a != 0 mod p
        mod_pow(a % self.p, self.p - 2, self.p)
    }

    /// Row echelon form in place; returns pivot columns.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let mut sel = None;
            for r in row..self.rows {
                if self.get(r, col) != 0 {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            for j in 0..self.cols {
                let tmp = self.get(row, j);
                let v = self.get(sel, j);
                self.set(row, j, v);
                self.set(sel, j, tmp);
            }
            let inv = self.inv_mod(self.get(row, col));
            for j in 0..self.cols {
                let v = self.get(row, j) * inv % self.p;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r != row && self.get(r, col) != 0 {
                    let f = self.get(r, col);
                    for j in 0..self.cols {
                        let v = (self.get(r, j) + (self.p - f) * self.get(row, j)) % self.p;
                        self.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// Basis of the right kernel, as columns of the returned matrix.
    pub fn kernel(&self) -> FpMat {
        let mut m = self.clone();
        let pivots = m.row_reduce();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = FpMat::new(self.p, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                let v = m.get(r, fc);
                if v != 0 {
                    out.set(pc, k, self.p - v);
                }
            }
        }
        out
    }

    /// dim ker(self - lambda I) for a square matrix.
    pub fn eigenspace_dim(&self, lambda: u64) -> usize {
        let minus = (self.p - lambda % self.p) % self.p;
        self.add_scaled_identity(minus).kernel().cols
    }

    pub fn transpose(&self) -> FpMat {
        let mut out = FpMat::new(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Any solution x of self * x = b, or None if inconsistent.
    pub fn solve(&self, b: &FpMat) -> Option<FpMat> {
        assert_eq!(self.rows, b.rows);
        let mut aug = self.hstack(b);
        let pivots = aug.row_reduce();
        // pivot in the b-block means inconsistent
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = FpMat::new(self.p, self.cols, b.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, aug.get(r, self.cols + j));
            }
        }
        Some(x)
    }

    /// Projection q: F_p^k -> F_p^d with kernel exactly the column span of
    /// `sub` (k x s). Returned as a d x k matrix.
    pub fn quotient_map(sub: &FpMat) -> FpMat {
        sub.transpose().kernel().transpose()
    }
}

pub fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc: u128 = 1;
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
        base = 0;
    }
    let _ = base;
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        let m = FpMat::from_rows(5, &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.cols, 1);
        // check m * k = 0
        let prod = m.mul(&k);
        assert!((0..prod.rows).all(|i| (0..prod.cols).all(|j| prod.get(i, j) == 0)));
    }

    #[test]
    fn eigenspaces_of_involution() {
        // diag(1, -1, -1) over F_7
        let m = FpMat::from_rows(7, &[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]]);
        assert_eq!(m.eigenspace_dim(1), 1);
        assert_eq!(m.eigenspace_dim(6), 2);
    }

    #[test]
    fn mod_pow_small() {
        assert_eq!(mod_pow(2, 10, 1000), 24);
        assert_eq!(mod_pow(3, 6, 7), 1);
    }
}
