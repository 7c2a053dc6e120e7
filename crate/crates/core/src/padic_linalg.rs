//! Matrix algebra over Z/p^N viewed as Z_p at working precision N.
//!
//! Valuations >= N are indistinguishable from infinity; every routine that
//! would need to tell them apart reports [`LinalgError::PrecisionLoss`]
//! instead of guessing. Precision is a parameter everywhere, so callers can
//! re-run with a larger N.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::fp::FpMat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("precision loss at working precision {prec}: {detail}")]
    PrecisionLoss { prec: u32, detail: String },
    #[error("system not solvable: {0}")]
    NotSolvable(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid presentation: {0}")]
    BadPresentation(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicMatrix {
    pub p: u64,
    pub prec: u32,
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigUint>,
}

impl PadicMatrix {
    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.p).pow(self.prec)
    }

    pub fn zero(p: u64, prec: u32, rows: usize, cols: usize) -> Self {
        PadicMatrix { p, prec, rows, cols, data: vec![BigUint::zero(); rows * cols] }
    }

    pub fn identity(p: u64, prec: u32, n: usize) -> Self {
        let mut m = Self::zero(p, prec, n, n);
        for i in 0..n {
            m.set(i, i, BigUint::one());
        }
        m
    }

    pub fn from_i64(p: u64, prec: u32, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zero(p, prec, r, c);
        let modulus = m.modulus();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                let val = if v < 0 {
                    let a = BigUint::from(v.unsigned_abs()) % &modulus;
                    (&modulus - a) % &modulus
                } else {
                    BigUint::from(v as u64) % &modulus
                };
                m.data[i * c + j] = val;
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigUint) {
        let m = self.modulus();
        self.data[i * self.cols + j] = v % m;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// p-adic valuation of the (i,j) entry; None means >= prec.
    pub fn entry_valuation(&self, i: usize, j: usize) -> Option<u32> {
        let e = self.get(i, j);
        if e.is_zero() {
            return None;
        }
        let p = BigUint::from(self.p);
        let mut v = 0u32;
        let mut cur = e.clone();
        while (&cur % &p).is_zero() {
            cur /= &p;
            v += 1;
        }
        Some(v)
    }

    pub fn mul(&self, other: &PadicMatrix) -> PadicMatrix {
        assert_eq!(self.cols, other.rows, "mul shape");
        assert_eq!(self.p, other.p);
        let prec = self.prec.min(other.prec);
        let mut out = PadicMatrix::zero(self.p, prec, self.rows, other.cols);
        let modulus = out.modulus();
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    let v = (&out.data[idx] + a * other.get(k, j)) % &modulus;
                    out.data[idx] = v;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &PadicMatrix) -> PadicMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        let modulus = out.modulus();
        for i in 0..self.data.len() {
            out.data[i] = (&out.data[i] + &other.data[i]) % &modulus;
        }
        out
    }

    pub fn sub(&self, other: &PadicMatrix) -> PadicMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        let modulus = out.modulus();
        for i in 0..self.data.len() {
            out.data[i] = (&out.data[i] + &modulus - &other.data[i]) % &modulus;
        }
        out
    }

    pub fn neg(&self) -> PadicMatrix {
        Self::zero(self.p, self.prec, self.rows, self.cols).sub(self)
    }

    /// Reduce all entries to a lower precision.
    pub fn reduce(&self, prec: u32) -> PadicMatrix {
        assert!(prec <= self.prec);
        let mut out = PadicMatrix::zero(self.p, prec, self.rows, self.cols);
        let modulus = out.modulus();
        for (o, e) in out.data.iter_mut().zip(&self.data) {
            *o = e % &modulus;
        }
        out
    }

    pub fn scale(&self, c: &BigUint) -> PadicMatrix {
        let mut out = self.clone();
        let modulus = out.modulus();
        for e in out.data.iter_mut() {
            *e = &*e * c % &modulus;
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> PadicMatrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = PadicMatrix::identity(self.p, self.prec, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn hstack(&self, other: &PadicMatrix) -> PadicMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = PadicMatrix::zero(self.p, self.prec.min(other.prec), self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * out.cols + j] = self.get(i, j).clone();
            }
            for j in 0..other.cols {
                out.data[i * out.cols + self.cols + j] = other.get(i, j).clone();
            }
        }
        out
    }

    pub fn vstack(&self, other: &PadicMatrix) -> PadicMatrix {
        assert_eq!(self.cols, other.cols);
        let mut out = PadicMatrix::zero(self.p, self.prec.min(other.prec), self.rows + other.rows, self.cols);
        out.data[..self.data.len()].clone_from_slice(&self.data);
        out.data[self.data.len()..].clone_from_slice(&other.data);
        out
    }

    pub fn column_block(&self, from: usize, to: usize) -> PadicMatrix {
        let mut out = PadicMatrix::zero(self.p, self.prec, self.rows, to - from);
        for i in 0..self.rows {
            for j in from..to {
                out.data[i * out.cols + (j - from)] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn row_block(&self, from: usize, to: usize) -> PadicMatrix {
        let mut out = PadicMatrix::zero(self.p, self.prec, to - from, self.cols);
        for i in from..to {
            for j in 0..self.cols {
                out.data[(i - from) * out.cols + j] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Reduction mod p.
    pub fn to_fp(&self) -> FpMat {
        let p = BigUint::from(self.p);
        let mut out = FpMat::new(self.p, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let r = self.get(i, j) % &p;
                out.set(i, j, r.to_u64_digits().first().copied().unwrap_or(0));
            }
        }
        out
    }
}

/// Smith normal form of `m` at precision: left * m * right = diag(p^v).
///
/// `diag[k] = None` encodes an entry with valuation >= prec (treated as 0).
/// `left_inv` is maintained so that lattice bases can be read off without a
/// separate inversion.
pub struct Snf {
    pub diag: Vec<Option<u32>>,
    pub left: PadicMatrix,
    pub left_inv: PadicMatrix,
    pub right: PadicMatrix,
}

fn unit_inverse(p: u64, prec: u32, u: &BigUint) -> BigUint {
    // u is a unit mod p^prec; invert by Euler/Newton. phi(p^prec) = p^(prec-1)(p-1).
    let modulus = BigUint::from(p).pow(prec);
    let phi = BigUint::from(p).pow(prec - 1) * BigUint::from(p - 1);
    u.modpow(&(phi - BigUint::one()), &modulus)
}

pub fn smith_normal_form(m: &PadicMatrix) -> Snf {
    let (p, prec) = (m.p, m.prec);
    let modulus = m.modulus();
    let mut w = m.clone();
    let mut left = PadicMatrix::identity(p, prec, m.rows);
    let mut left_inv = PadicMatrix::identity(p, prec, m.rows);
    let mut right = PadicMatrix::identity(p, prec, m.cols);
    let n = m.rows.min(m.cols);
    let mut diag = vec![None; n];

    for k in 0..n {
        // minimal valuation pivot in the trailing submatrix
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..m.rows {
            for j in k..m.cols {
                if let Some(v) = w.entry_valuation(i, j) {
                    if best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        // swap pivot into (k, k)
        if pi != k {
            for j in 0..m.cols {
                w.data.swap(pi * m.cols + j, k * m.cols + j);
            }
            for j in 0..m.rows {
                left.data.swap(pi * m.rows + j, k * m.rows + j);
            }
            for i in 0..m.rows {
                left_inv.data.swap(i * m.rows + pi, i * m.rows + k);
            }
        }
        if pj != k {
            for i in 0..m.rows {
                w.data.swap(i * m.cols + pj, i * m.cols + k);
            }
            for i in 0..m.cols {
                right.data.swap(i * m.cols + pj, i * m.cols + k);
            }
        }
        // normalize pivot to exactly p^v
        let pv = BigUint::from(p).pow(v);
        let unit = w.get(k, k) / &pv;
        let unit_inv = unit_inverse(p, prec, &unit);
        for j in 0..m.cols {
            let idx = k * m.cols + j;
            w.data[idx] = &w.data[idx] * &unit_inv % &modulus;
        }
        for j in 0..m.rows {
            let idx = k * m.rows + j;
            left.data[idx] = &left.data[idx] * &unit_inv % &modulus;
        }
        for i in 0..m.rows {
            let idx = i * m.rows + k;
            left_inv.data[idx] = &left_inv.data[idx] * &unit % &modulus;
        }
        // clear the rest of column k
        for i in (k + 1)..m.rows {
            let e = w.get(i, k).clone();
            if e.is_zero() {
                continue;
            }
            let c = &e / &pv; // exact: pivot had minimal valuation
            for j in 0..m.cols {
                let sub = &c * &w.data[k * m.cols + j] % &modulus;
                let idx = i * m.cols + j;
                w.data[idx] = (&w.data[idx] + &modulus - sub) % &modulus;
            }
            for j in 0..m.rows {
                let sub = &c * &left.data[k * m.rows + j] % &modulus;
                let idx = i * m.rows + j;
                left.data[idx] = (&left.data[idx] + &modulus - sub) % &modulus;
            }
            for r in 0..m.rows {
                // left_inv gains the inverse op: col_k += c * col_i
                let add = &c * &left_inv.data[r * m.rows + i] % &modulus;
                let idx = r * m.rows + k;
                left_inv.data[idx] = (&left_inv.data[idx] + add) % &modulus;
            }
        }
        // clear the rest of row k
        for j in (k + 1)..m.cols {
            let e = w.get(k, j).clone();
            if e.is_zero() {
                continue;
            }
            let c = &e / &pv;
            for i in 0..m.rows {
                let sub = &c * &w.data[i * m.cols + k] % &modulus;
                let idx = i * m.cols + j;
                w.data[idx] = (&w.data[idx] + &modulus - sub) % &modulus;
            }
            for i in 0..m.cols {
                let sub = &c * &right.data[i * m.cols + k] % &modulus;
                let idx = i * m.cols + j;
                right.data[idx] = (&right.data[idx] + &modulus - sub) % &modulus;
            }
        }
        diag[k] = Some(v);
    }
    Snf { diag, left, left_inv, right }
}

/// Columns spanning the kernel of `m` (as a map on Z_p at this precision).
pub fn kernel_basis(m: &PadicMatrix) -> PadicMatrix {
    let snf = smith_normal_form(m);
    let n = m.rows.min(m.cols);
    let mut cols = Vec::new();
    for j in 0..m.cols {
        let inf = if j < n { snf.diag[j].is_none() } else { true };
        if inf {
            cols.push(j);
        }
    }
    let mut out = PadicMatrix::zero(m.p, m.prec, m.cols, cols.len());
    for (t, &j) in cols.iter().enumerate() {
        for i in 0..m.cols {
            out.set(i, t, snf.right.get(i, j).clone());
        }
    }
    out
}

/// A basis (independent columns, saturated scaling p^v per column) of the
/// lattice generated by the columns of `m`.
pub fn span_basis(m: &PadicMatrix) -> PadicMatrix {
    let snf = smith_normal_form(m);
    let n = m.rows.min(m.cols);
    let finite: Vec<(usize, u32)> =
        (0..n).filter_map(|j| snf.diag[j].map(|v| (j, v))).collect();
    let mut out = PadicMatrix::zero(m.p, m.prec, m.rows, finite.len());
    let modulus = m.modulus();
    for (t, &(j, v)) in finite.iter().enumerate() {
        let pv = BigUint::from(m.p).pow(v);
        for i in 0..m.rows {
            out.set(i, t, snf.left_inv.get(i, j) * &pv % &modulus);
        }
    }
    out
}

/// Structure of Z_p^ambient / column span of m.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Cokernel {
    pub free_rank: usize,
    /// exponents e of the cyclic factors Z/p^e, ascending
    pub torsion: Vec<u32>,
}

impl Cokernel {
    pub fn fp_dim(&self) -> usize {
        self.free_rank + self.torsion.len()
    }
}

pub fn cokernel(m: &PadicMatrix) -> Cokernel {
    let snf = smith_normal_form(m);
    let mut torsion = Vec::new();
    let mut finite = 0usize;
    for d in snf.diag.iter().flatten() {
        finite += 1;
        if *d > 0 {
            torsion.push(*d);
        }
    }
    torsion.sort_unstable();
    Cokernel { free_rank: m.rows - finite, torsion }
}

/// Solve a * x = b. Returns (x, effective_precision).
///
/// The effective precision drops by the largest elementary divisor valuation
/// used in a division; callers needing x mod p must check it is >= 1.
pub fn solve(a: &PadicMatrix, b: &PadicMatrix) -> Result<(PadicMatrix, u32), LinalgError> {
    if a.rows != b.rows {
        return Err(LinalgError::ShapeMismatch(format!(
            "solve: a has {} rows, b has {}",
            a.rows, b.rows
        )));
    }
    let snf = smith_normal_form(a);
    let c = snf.left.mul(b);
    let n = a.rows.min(a.cols);
    let mut y = PadicMatrix::zero(a.p, a.prec, a.cols, b.cols);
    let mut eff = a.prec;
    let modulus = a.modulus();
    for i in 0..a.rows {
        let dv = if i < n { snf.diag[i] } else { None };
        match dv {
            Some(v) => {
                let pv = BigUint::from(a.p).pow(v);
                for j in 0..b.cols {
                    let e = c.get(i, j);
                    if !(e % &pv).is_zero() {
                        return Err(LinalgError::NotSolvable(format!(
                            "row {i}: rhs valuation below divisor p^{v}"
                        )));
                    }
                    y.set(i, j, (e / &pv) % &modulus);
                }
                if v > 0 {
                    eff = eff.min(a.prec - v);
                }
            }
            None => {
                for j in 0..b.cols {
                    if !c.get(i, j).is_zero() {
                        return Err(LinalgError::NotSolvable(format!(
                            "row {i}: rhs not in column span at this precision"
                        )));
                    }
                }
            }
        }
    }
    Ok((snf.right.mul(&y), eff))
}

/// A module with an action of a cyclic group of prime order.
///
/// The module is Z_p^g / col(relations); `relations = None` means a lattice.
#[derive(Clone, Debug)]
pub struct CyclicPresentation {
    pub order: u64,
    pub action: PadicMatrix,
    pub relations: Option<PadicMatrix>,
}

impl CyclicPresentation {
    pub fn lattice(order: u64, action: PadicMatrix) -> Self {
        CyclicPresentation { order, action, relations: None }
    }

    pub fn norm_matrix(&self) -> PadicMatrix {
        let g = self.action.rows;
        let mut acc = PadicMatrix::identity(self.action.p, self.action.prec, g);
        let mut pow = PadicMatrix::identity(self.action.p, self.action.prec, g);
        for _ in 1..self.order {
            pow = pow.mul(&self.action);
            acc = acc.add(&pow);
        }
        acc
    }

    /// Check tau^order = 1 on the module and stability of the relation lattice.
    pub fn validate(&self) -> Result<(), LinalgError> {
        let g = self.action.rows;
        if self.action.cols != g {
            return Err(LinalgError::BadPresentation("action must be square".into()));
        }
        let ident = PadicMatrix::identity(self.action.p, self.action.prec, g);
        let tp = self.action.pow(self.order).sub(&ident);
        match &self.relations {
            None => {
                if !tp.is_zero() {
                    return Err(LinalgError::BadPresentation(
                        "action^order != identity on lattice".into(),
                    ));
                }
            }
            Some(r) => {
                if r.rows != g {
                    return Err(LinalgError::ShapeMismatch("relations row count".into()));
                }
                solve(r, &tp).map_err(|_| {
                    LinalgError::BadPresentation("action^order != identity mod relations".into())
                })?;
                solve(r, &self.action.mul(r)).map_err(|_| {
                    LinalgError::BadPresentation("action does not preserve relations".into())
                })?;
            }
        }
        Ok(())
    }

    /// Sublattice {x : a*x lies in col(relations)} as a span matrix.
    fn preimage_lattice(&self, a: &PadicMatrix) -> PadicMatrix {
        let g = a.rows;
        match &self.relations {
            None => kernel_basis(a),
            Some(r) => {
                let block = a.hstack(&r.neg());
                let ker = kernel_basis(&block);
                ker.row_block(0, g)
            }
        }
    }

    fn relation_cols(&self) -> Option<&PadicMatrix> {
        self.relations.as_ref()
    }
}

/// dim over F_p of span(P) / (span(gens) + relations + p*span(P)).
fn quotient_fp_dim(
    pres: &CyclicPresentation,
    p_span: &PadicMatrix,
    gens: &PadicMatrix,
) -> Result<usize, LinalgError> {
    let basis = span_basis(p_span);
    if basis.cols == 0 {
        return Ok(0);
    }
    let full_gens = match pres.relation_cols() {
        Some(r) => gens.hstack(r),
        None => gens.clone(),
    };
    let (x, eff) = solve(&basis, &full_gens)?;
    if eff < 1 {
        return Err(LinalgError::PrecisionLoss {
            prec: basis.prec,
            detail: "quotient generators unresolved mod p".into(),
        });
    }
    Ok(basis.cols - x.to_fp().rank())
}

/// Tate cohomology (dim Ĥ^0, dim Ĥ^{-1}) over F_p for a cyclic group of
/// prime order acting through `pres`. For cyclic groups Ĥ^1 = Ĥ^{-1}.
pub fn tate_cohomology(pres: &CyclicPresentation) -> Result<(usize, usize), LinalgError> {
    pres.validate()?;
    let g = pres.action.rows;
    let ident = PadicMatrix::identity(pres.action.p, pres.action.prec, g);
    let tm1 = pres.action.sub(&ident);
    let nn = pres.norm_matrix();

    let fixed = pres.preimage_lattice(&tm1);
    let h0 = quotient_fp_dim(pres, &fixed, &nn)?;

    let norm_ker = pres.preimage_lattice(&nn);
    let h1 = quotient_fp_dim(pres, &norm_ker, &tm1)?;
    Ok((h0, h1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn companion_cyclotomic(p: u64, prec: u32) -> PadicMatrix {
        // companion matrix of 1 + x + ... + x^(p-1), size (p-1)
        let n = (p - 1) as usize;
        let mut rows = vec![vec![0i64; n]; n];
        for i in 1..n {
            rows[i][i - 1] = 1;
        }
        for i in 0..n {
            rows[i][n - 1] = -1;
        }
        PadicMatrix::from_i64(p, prec, &rows)
    }

    fn perm_cycle(p: u64, prec: u32) -> PadicMatrix {
        let n = p as usize;
        let mut rows = vec![vec![0i64; n]; n];
        for j in 0..n {
            rows[(j + 1) % n][j] = 1;
        }
        PadicMatrix::from_i64(p, prec, &rows)
    }

    #[test]
    fn snf_fixed_matrix() {
        // [[3,1],[0,9]] has elementary divisors 1 and 27 over Z_3: valuations [0,3]
        let m = PadicMatrix::from_i64(3, 6, &[vec![3, 1], vec![0, 9]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diag, vec![Some(0), Some(3)]);
        // check left * m * right is diagonal with those valuations
        let d = snf.left.mul(&m).mul(&snf.right);
        assert_eq!(d.entry_valuation(0, 0), Some(0));
        assert_eq!(d.entry_valuation(1, 1), Some(3));
        assert!(d.get(0, 1).is_zero() && d.get(1, 0).is_zero());
        // left_inv really inverts left
        let li = snf.left.mul(&snf.left_inv);
        assert_eq!(li, PadicMatrix::identity(3, 6, 2));
    }

    #[test]
    fn cokernel_shapes() {
        // Z_3^2 / <(3,0),(1,9)>: SNF divisors 1, 27 -> torsion Z/27
        let m = PadicMatrix::from_i64(3, 6, &[vec![3, 1], vec![0, 9]]);
        let ck = cokernel(&m);
        assert_eq!(ck.free_rank, 0);
        assert_eq!(ck.torsion, vec![3]);

        // a 3x1 map: cokernel Z_p^2 (+ torsion from the divisor)
        let m = PadicMatrix::from_i64(5, 4, &[vec![25], vec![0], vec![0]]);
        let ck = cokernel(&m);
        assert_eq!(ck.free_rank, 2);
        assert_eq!(ck.torsion, vec![2]);
    }

    #[test]
    fn solve_and_kernel() {
        let a = PadicMatrix::from_i64(3, 8, &[vec![1, 2], vec![4, 9]]);
        let b = PadicMatrix::from_i64(3, 8, &[vec![5], vec![22]]);
        let (x, eff) = solve(&a, &b).unwrap();
        assert_eq!(eff, 8);
        assert_eq!(a.mul(&x), b);

        let m = PadicMatrix::from_i64(3, 8, &[vec![1, 2, 3]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols, 2);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn tate_cohomology_trivial_lattice() {
        // Z_p with trivial action: H^0 = F_p, H^1 = 0
        for p in [3u64, 5, 7] {
            let pres = CyclicPresentation::lattice(p, PadicMatrix::identity(p, 8, 1));
            assert_eq!(tate_cohomology(&pres).unwrap(), (1, 0));
        }
    }

    #[test]
    fn tate_cohomology_cyclotomic_lattice() {
        // A = Z_p[zeta]: H^0 = 0, H^1 = F_p
        for p in [3u64, 5] {
            let pres = CyclicPresentation::lattice(p, companion_cyclotomic(p, 8));
            assert_eq!(tate_cohomology(&pres).unwrap(), (0, 1));
        }
    }

    #[test]
    fn tate_cohomology_regular_lattice() {
        // Z_p[G]: both vanish
        for p in [3u64, 5] {
            let pres = CyclicPresentation::lattice(p, perm_cycle(p, 8));
            assert_eq!(tate_cohomology(&pres).unwrap(), (0, 0));
        }
    }

    #[test]
    fn tate_cohomology_finite_trivial() {
        // Z/p^i with trivial action: (1, 1)
        for (p, i) in [(3u64, 1u32), (3, 2), (5, 1)] {
            let pres = CyclicPresentation {
                order: p,
                action: PadicMatrix::identity(p, 8, 1),
                relations: Some(PadicMatrix::from_i64(p, 8, &[vec![p.pow(i) as i64]])),
            };
            assert_eq!(tate_cohomology(&pres).unwrap(), (1, 1));
        }
    }

    #[test]
    fn tate_cohomology_herbrand_on_sum() {
        // lattice Z_p + A + Z_p[G]: h0 = 1, h1 = 1
        let p = 3u64;
        let a = companion_cyclotomic(p, 8);
        let r = perm_cycle(p, 8);
        let n = 1 + a.rows + r.rows;
        let mut rows = vec![vec![0i64; n]; n];
        rows[0][0] = 1;
        let act = {
            let mut m = PadicMatrix::from_i64(p, 8, &rows);
            for i in 0..a.rows {
                for j in 0..a.cols {
                    m.set(1 + i, 1 + j, a.get(i, j).clone());
                }
            }
            for i in 0..r.rows {
                for j in 0..r.cols {
                    m.set(1 + a.rows + i, 1 + a.cols + j, r.get(i, j).clone());
                }
            }
            m
        };
        let pres = CyclicPresentation::lattice(p, act);
        assert_eq!(tate_cohomology(&pres).unwrap(), (1, 1));
    }

    #[test]
    fn validate_rejects_bad_action() {
        let pres = CyclicPresentation::lattice(3, PadicMatrix::from_i64(3, 8, &[vec![2]]));
        assert!(tate_cohomology(&pres).is_err());
    }
}
