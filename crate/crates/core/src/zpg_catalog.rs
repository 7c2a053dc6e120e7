//! Catalog of indecomposable Z_p[G]-modules for G cyclic of order p or
//! metacyclic Z/p x| Z/m with m | p-1, together with the invariants used to
//! tell them apart: fixed ranks, Tate cohomology of the p-part N graded by
//! characters of G/N, regulator-constant valuations and the saturation
//! index.
//!
//! For m = 2 (dihedral D_p) the six lattices are, in the notation used
//! throughout: Zp = Chi(0), Zp~ = Chi(1), A = AChi(0), A~ = AChi(1),
//! B = BChi(0), B~ = BChi(1).

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fp::{mod_pow, FpMat};
use crate::padic_linalg::{
    cokernel, kernel_basis, smith_normal_form, solve, span_basis, Cokernel, CyclicPresentation,
    LinalgError, PadicMatrix,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("bad descriptor: {0}")]
    BadDescriptor(String),
    #[error("bad group: {0}")]
    BadGroup(String),
    #[error("degenerate pairing after retries: {0}")]
    DegeneratePairing(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum GroupSpec {
    /// cyclic of order p
    Cyclic { p: u64 },
    /// <tau, sigma | tau^p = sigma^m = 1, sigma tau sigma^-1 = tau^r>,
    /// r of multiplicative order m mod p, m | p-1
    Metacyclic { p: u64, m: u64, r: u64 },
}

impl GroupSpec {
    pub fn dihedral(p: u64) -> Self {
        GroupSpec::Metacyclic { p, m: 2, r: p - 1 }
    }

    pub fn p(&self) -> u64 {
        match *self {
            GroupSpec::Cyclic { p } => p,
            GroupSpec::Metacyclic { p, .. } => p,
        }
    }

    pub fn m(&self) -> u64 {
        match *self {
            GroupSpec::Cyclic { .. } => 1,
            GroupSpec::Metacyclic { m, .. } => m,
        }
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        match *self {
            GroupSpec::Cyclic { p } => {
                if p < 2 || !is_prime(p) {
                    return Err(CatalogError::BadGroup(format!("p = {p} not prime")));
                }
            }
            GroupSpec::Metacyclic { p, m, r } => {
                if !is_prime(p) {
                    return Err(CatalogError::BadGroup(format!("p = {p} not prime")));
                }
                if m < 2 || (p - 1) % m != 0 {
                    return Err(CatalogError::BadGroup(format!("m = {m} must divide p-1 = {}", p - 1)));
                }
                if multiplicative_order(r % p, p) != Some(m) {
                    return Err(CatalogError::BadGroup(format!("r = {r} has order != m mod p")));
                }
            }
        }
        Ok(())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn multiplicative_order(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    let mut x = a % p;
    let mut k = 1;
    while x != 1 {
        x = x * (a % p) % p;
        k += 1;
        if k > p {
            return None;
        }
    }
    Some(k)
}

/// Teichmueller lift of r: the (p-1)-st root of unity in Z/p^prec congruent
/// to r mod p, computed as the limit of r^(p^k).
pub fn teichmuller(p: u64, prec: u32, r: u64) -> BigUint {
    let modulus = BigUint::from(p).pow(prec);
    let mut x = BigUint::from(r % p);
    for _ in 0..prec + 1 {
        x = x.modpow(&BigUint::from(p), &modulus);
    }
    x
}

/// Indecomposable descriptors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Indecomposable {
    /// trivial lattice Z_p (cyclic G); equals Chi(0) in the metacyclic case
    Zp,
    /// Z_p[zeta_p] with tau acting by zeta
    CycloA,
    /// the regular lattice Z_p[G] for cyclic G
    Regular,
    /// Z/p^i with trivial action
    Tors { i: u32 },
    /// F_i: Z/p^i with tau acting by 1 + p^(i-1), i >= 2
    TorsTwisted { i: u32 },
    /// extension of Z_p by Z/p^i: tau(t, x) = (t + p^(i-1) x, x)
    ExtZp { i: u32 },
    /// extension of A by Z/p^i: tau(t, y) = (t + f(y), zeta y)
    ExtA { i: u32 },
    /// extension of Z_p + A by Z/p^i
    ExtZpA { i: u32 },
    /// Z_p{j}: rank one, sigma acts by xi^j (metacyclic)
    Chi { j: u64 },
    /// A{j} = A tensor Chi(j) (metacyclic)
    AChi { j: u64 },
    /// B{j} = Z_p[G/H] tensor Chi(j) (metacyclic)
    BChi { j: u64 },
}

impl Indecomposable {
    pub fn display_name(&self, g: &GroupSpec) -> String {
        let dihedral = g.m() == 2;
        match *self {
            Indecomposable::Zp => "Zp".into(),
            Indecomposable::CycloA => "A".into(),
            Indecomposable::Regular => "Zp[G]".into(),
            Indecomposable::Tors { i } => format!("Z/p^{i}"),
            Indecomposable::TorsTwisted { i } => format!("F_{i}"),
            Indecomposable::ExtZp { i } => format!("{{Z/p^{i}|Zp}}"),
            Indecomposable::ExtA { i } => format!("{{Z/p^{i}|A}}"),
            Indecomposable::ExtZpA { i } => format!("{{Z/p^{i}|Zp+A}}"),
            Indecomposable::Chi { j } => match (dihedral, j) {
                (_, 0) => "Zp".into(),
                (true, 1) => "Zp~".into(),
                _ => format!("Zp{{{j}}}"),
            },
            Indecomposable::AChi { j } => match (dihedral, j) {
                (_, 0) => "A".into(),
                (true, 1) => "A~".into(),
                _ => format!("A{{{j}}}"),
            },
            Indecomposable::BChi { j } => match (dihedral, j) {
                (_, 0) => "B".into(),
                (true, 1) => "B~".into(),
                _ => format!("B{{{j}}}"),
            },
        }
    }
}

/// Matrix realization of a module over the group algebra.
///
/// `items` remembers the descriptors, so invariant computations can
/// re-realize at a higher working precision (the recipes are
/// precision-coherent: entries at higher precision reduce to the lower
/// ones).
#[derive(Clone, Debug)]
pub struct Realization {
    pub group: GroupSpec,
    pub prec: u32,
    pub dim: usize,
    pub items: Vec<Indecomposable>,
    pub tau: PadicMatrix,
    pub sigma: Option<PadicMatrix>,
    pub relations: Option<PadicMatrix>,
}

fn companion_cyclotomic(p: u64, prec: u32) -> PadicMatrix {
    let n = (p - 1) as usize;
    let mut rows = vec![vec![0i64; n]; n];
    for i in 1..n {
        rows[i][i - 1] = 1;
    }
    for row in rows.iter_mut() {
        row[n - 1] = -1;
    }
    PadicMatrix::from_i64(p, prec, &rows)
}

/// sigma action on A = Z_p[zeta]: zeta^k -> zeta^(r k mod p), with
/// zeta^(p-1) rewritten via the cyclotomic relation.
fn sigma_on_cyclo(p: u64, prec: u32, r: u64) -> PadicMatrix {
    let n = (p - 1) as usize;
    let mut m = PadicMatrix::zero(p, prec, n, n);
    let modulus = m.modulus();
    let minus_one = &modulus - BigUint::one();
    for k in 0..n {
        let img = (r as u128 * k as u128 % p as u128) as usize;
        if img < n {
            m.set(img, k, BigUint::one());
        } else {
            // zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2))
            for i in 0..n {
                m.set(i, k, minus_one.clone());
            }
        }
    }
    m
}

/// The linear form f: A -> Z/p^i with f(mu * y) = aug(y) mod p, where
/// mu = p / (1 - zeta) = prod_{j=2}^{p-1} (1 - zeta^j). Returned as a row
/// vector of length p-1.
fn ext_a_form(p: u64, prec: u32) -> Result<Vec<BigUint>, CatalogError> {
    let n = (p - 1) as usize;
    let c = companion_cyclotomic(p, prec);
    let ident = PadicMatrix::identity(p, prec, n);
    let mut mu = ident.clone();
    let mut cj = c.clone(); // c^1
    for _ in 2..p {
        cj = cj.mul(&c);
        mu = mu.mul(&ident.sub(&cj));
    }
    // solve f * mu = (1,...,1) mod p  <=>  mu^T f^T = 1 over F_p
    let mut ones = FpMat::new(p, n, 1);
    for i in 0..n {
        ones.set(i, 0, 1);
    }
    let ft = mu.to_fp().transpose().solve(&ones).ok_or_else(|| {
        CatalogError::BadDescriptor("extension form has no solution mod p".into())
    })?;
    Ok((0..n).map(|i| BigUint::from(ft.get(i, 0))).collect())
}

pub fn realize_one(
    g: &GroupSpec,
    item: &Indecomposable,
    prec: u32,
) -> Result<Realization, CatalogError> {
    g.validate()?;
    let p = g.p();
    let cyclic = matches!(g, GroupSpec::Cyclic { .. });
    let build = |tau: PadicMatrix,
                 sigma: Option<PadicMatrix>,
                 relations: Option<PadicMatrix>|
     -> Realization {
        Realization { group: *g, prec, dim: tau.rows, items: vec![*item], tau, sigma, relations }
    };
    match *item {
        Indecomposable::Zp => {
            let tau = PadicMatrix::identity(p, prec, 1);
            let sigma = if cyclic { None } else { Some(PadicMatrix::identity(p, prec, 1)) };
            Ok(build(tau, sigma, None))
        }
        Indecomposable::Chi { j } => match *g {
            GroupSpec::Cyclic { .. } => {
                if j == 0 {
                    realize_one(g, &Indecomposable::Zp, prec)
                } else {
                    Err(CatalogError::BadDescriptor("Chi(j>0) needs a metacyclic group".into()))
                }
            }
            GroupSpec::Metacyclic { p, m, r } => {
                if j >= m {
                    return Err(CatalogError::BadDescriptor(format!("Chi({j}) with m = {m}")));
                }
                let xi = teichmuller(p, prec, r);
                let modulus = BigUint::from(p).pow(prec);
                let mut s = PadicMatrix::identity(p, prec, 1);
                s.set(0, 0, xi.modpow(&BigUint::from(j), &modulus));
                Ok(build(PadicMatrix::identity(p, prec, 1), Some(s), None))
            }
        },
        Indecomposable::CycloA => {
            let tau = companion_cyclotomic(p, prec);
            let sigma = match *g {
                GroupSpec::Cyclic { .. } => None,
                GroupSpec::Metacyclic { p, m: _, r } => Some(sigma_on_cyclo(p, prec, r)),
            };
            Ok(build(tau, sigma, None))
        }
        Indecomposable::AChi { j } => match *g {
            GroupSpec::Cyclic { .. } => {
                if j == 0 {
                    realize_one(g, &Indecomposable::CycloA, prec)
                } else {
                    Err(CatalogError::BadDescriptor("AChi(j>0) needs a metacyclic group".into()))
                }
            }
            GroupSpec::Metacyclic { p, m, r } => {
                if j >= m {
                    return Err(CatalogError::BadDescriptor(format!("AChi({j}) with m = {m}")));
                }
                let xi = teichmuller(p, prec, r);
                let modulus = BigUint::from(p).pow(prec);
                let scale = xi.modpow(&BigUint::from(j), &modulus);
                let sigma = sigma_on_cyclo(p, prec, r).scale(&scale);
                Ok(build(companion_cyclotomic(p, prec), Some(sigma), None))
            }
        },
        Indecomposable::Regular => {
            if !cyclic {
                return Err(CatalogError::BadDescriptor(
                    "Regular is the cyclic-group lattice; use BChi for metacyclic groups".into(),
                ));
            }
            let n = p as usize;
            let mut rows = vec![vec![0i64; n]; n];
            for j in 0..n {
                rows[(j + 1) % n][j] = 1;
            }
            Ok(build(PadicMatrix::from_i64(p, prec, &rows), None, None))
        }
        Indecomposable::BChi { j } => match *g {
            GroupSpec::Cyclic { .. } => {
                Err(CatalogError::BadDescriptor("BChi needs a metacyclic group".into()))
            }
            GroupSpec::Metacyclic { p, m, r } => {
                if j >= m {
                    return Err(CatalogError::BadDescriptor(format!("BChi({j}) with m = {m}")));
                }
                let n = p as usize;
                let mut trows = vec![vec![0i64; n]; n];
                for a in 0..n {
                    trows[(a + 1) % n][a] = 1;
                }
                let tau = PadicMatrix::from_i64(p, prec, &trows);
                // sigma(tau^a H) = xi^j tau^(r a) H
                let xi = teichmuller(p, prec, r);
                let modulus = BigUint::from(p).pow(prec);
                let scale = xi.modpow(&BigUint::from(j), &modulus);
                let mut sigma = PadicMatrix::zero(p, prec, n, n);
                for a in 0..n {
                    let img = (r as u128 * a as u128 % p as u128) as usize;
                    sigma.set(img, a, scale.clone());
                }
                Ok(build(tau, Some(sigma), None))
            }
        },
        Indecomposable::Tors { i } => {
            if i == 0 {
                return Err(CatalogError::BadDescriptor("Tors(0) is zero".into()));
            }
            let tau = PadicMatrix::identity(p, prec, 1);
            let rel = PadicMatrix::from_i64(p, prec, &[vec![p.pow(i) as i64]]);
            let sigma = if cyclic { None } else { Some(PadicMatrix::identity(p, prec, 1)) };
            Ok(build(tau, sigma, Some(rel)))
        }
        Indecomposable::TorsTwisted { i } => {
            if !cyclic {
                return Err(CatalogError::Unsupported("TorsTwisted only cataloged for cyclic G".into()));
            }
            if i < 2 {
                return Err(CatalogError::BadDescriptor("F_i needs i >= 2".into()));
            }
            if prec <= i {
                return Err(CatalogError::BadDescriptor(format!("precision {prec} too small for F_{i}")));
            }
            let w = 1 + p.pow(i - 1) as i64;
            let tau = PadicMatrix::from_i64(p, prec, &[vec![w]]);
            let rel = PadicMatrix::from_i64(p, prec, &[vec![p.pow(i) as i64]]);
            Ok(build(tau, None, Some(rel)))
        }
        Indecomposable::ExtZp { i } => {
            if !cyclic {
                return Err(CatalogError::Unsupported("ExtZp only cataloged for cyclic G".into()));
            }
            if i == 0 || prec <= i {
                return Err(CatalogError::BadDescriptor(format!("ExtZp({i}) at precision {prec}")));
            }
            let pi1 = p.pow(i - 1) as i64;
            let tau = PadicMatrix::from_i64(p, prec, &[vec![1, pi1], vec![0, 1]]);
            let rel = PadicMatrix::from_i64(p, prec, &[vec![p.pow(i) as i64], vec![0]]);
            Ok(build(tau, None, Some(rel)))
        }
        Indecomposable::ExtA { i } => {
            if !cyclic {
                return Err(CatalogError::Unsupported("ExtA only cataloged for cyclic G".into()));
            }
            if i == 0 || prec <= i {
                return Err(CatalogError::BadDescriptor(format!("ExtA({i}) at precision {prec}")));
            }
            let n = (p - 1) as usize;
            let f = ext_a_form(p, prec)?;
            let c = companion_cyclotomic(p, prec);
            let mut tau = PadicMatrix::zero(p, prec, n + 1, n + 1);
            tau.set(0, 0, BigUint::one());
            for k in 0..n {
                tau.set(0, 1 + k, f[k].clone());
                for i2 in 0..n {
                    tau.set(1 + i2, 1 + k, c.get(i2, k).clone());
                }
            }
            let mut relrows = vec![vec![0i64]; n + 1];
            relrows[0][0] = p.pow(i) as i64;
            let rel = PadicMatrix::from_i64(p, prec, &relrows);
            Ok(build(tau, None, Some(rel)))
        }
        Indecomposable::ExtZpA { i } => {
            if !cyclic {
                return Err(CatalogError::Unsupported("ExtZpA only cataloged for cyclic G".into()));
            }
            if i == 0 || prec <= i {
                return Err(CatalogError::BadDescriptor(format!("ExtZpA({i}) at precision {prec}")));
            }
            let n = (p - 1) as usize;
            let f = ext_a_form(p, prec)?;
            let c = companion_cyclotomic(p, prec);
            let dim = 2 + n;
            let mut tau = PadicMatrix::zero(p, prec, dim, dim);
            tau.set(0, 0, BigUint::one());
            tau.set(0, 1, BigUint::from(p.pow(i - 1)));
            tau.set(1, 1, BigUint::one());
            for k in 0..n {
                tau.set(0, 2 + k, f[k].clone());
                for i2 in 0..n {
                    tau.set(2 + i2, 2 + k, c.get(i2, k).clone());
                }
            }
            let mut relrows = vec![vec![0i64]; dim];
            relrows[0][0] = p.pow(i) as i64;
            let rel = PadicMatrix::from_i64(p, prec, &relrows);
            Ok(build(tau, None, Some(rel)))
        }
    }
}

fn block_diag(a: &PadicMatrix, b: &PadicMatrix) -> PadicMatrix {
    let mut out = PadicMatrix::zero(a.p, a.prec.min(b.prec), a.rows + b.rows, a.cols + b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..b.rows {
        for j in 0..b.cols {
            out.set(a.rows + i, a.cols + j, b.get(i, j).clone());
        }
    }
    out
}

/// Direct sum realization of a list of descriptors (with multiplicity 1 per
/// entry; repeat entries for higher multiplicity).
pub fn realize(
    g: &GroupSpec,
    items: &[Indecomposable],
    prec: u32,
) -> Result<Realization, CatalogError> {
    if items.is_empty() {
        return Err(CatalogError::BadDescriptor("empty descriptor list".into()));
    }
    let mut acc = realize_one(g, &items[0], prec)?;
    for it in &items[1..] {
        let r = realize_one(g, it, prec)?;
        let tau = block_diag(&acc.tau, &r.tau);
        let sigma = match (acc.sigma, r.sigma) {
            (Some(a), Some(b)) => Some(block_diag(&a, &b)),
            (None, None) => None,
            _ => unreachable!("mixed group kinds"),
        };
        // relations live in the direct sum coordinates, one block per summand
        let relations = match (&acc.relations, &r.relations) {
            (None, None) => None,
            (ra, rb) => {
                let za = ra
                    .clone()
                    .unwrap_or_else(|| PadicMatrix::zero(acc.tau.p, prec, acc.dim, 0));
                let zb = rb
                    .clone()
                    .unwrap_or_else(|| PadicMatrix::zero(acc.tau.p, prec, r.dim, 0));
                let top = za.hstack(&PadicMatrix::zero(acc.tau.p, prec, acc.dim, zb.cols));
                let bot = PadicMatrix::zero(acc.tau.p, prec, r.dim, za.cols).hstack(&zb);
                Some(top.vstack(&bot))
            }
        };
        let mut items = acc.items;
        items.extend_from_slice(&r.items);
        acc = Realization { group: *g, prec, dim: tau.rows, items, tau, sigma, relations };
    }
    acc.validate()?;
    Ok(acc)
}

impl Realization {
    /// Consistency of the realization: group relations hold on the module.
    pub fn validate(&self) -> Result<(), CatalogError> {
        let pres = CyclicPresentation {
            order: self.group.p(),
            action: self.tau.clone(),
            relations: self.relations.clone(),
        };
        pres.validate()?;
        if let GroupSpec::Metacyclic { m, r, .. } = self.group {
            let sigma = self.sigma.as_ref().ok_or_else(|| {
                CatalogError::BadDescriptor("metacyclic realization missing sigma".into())
            })?;
            let ident = PadicMatrix::identity(self.tau.p, self.prec, self.dim);
            let sm = sigma.pow(m).sub(&ident);
            let rel_ok = |m: &PadicMatrix| -> bool {
                match &self.relations {
                    None => m.is_zero(),
                    Some(rel) => solve(rel, m).is_ok(),
                }
            };
            if !rel_ok(&sm) {
                return Err(CatalogError::BadDescriptor("sigma^m != 1".into()));
            }
            let lhs = sigma.mul(&self.tau);
            let rhs = self.tau.pow(r).mul(sigma);
            if !rel_ok(&lhs.sub(&rhs)) {
                return Err(CatalogError::BadDescriptor("sigma tau != tau^r sigma".into()));
            }
        }
        Ok(())
    }

    pub fn cyclic_presentation(&self) -> CyclicPresentation {
        CyclicPresentation {
            order: self.group.p(),
            action: self.tau.clone(),
            relations: self.relations.clone(),
        }
    }

    /// All group element matrices tau^a sigma^b.
    pub fn group_elements(&self) -> Vec<PadicMatrix> {
        let p = self.group.p();
        let m = self.group.m();
        let mut out = Vec::with_capacity((p * m) as usize);
        let mut ta = PadicMatrix::identity(self.tau.p, self.prec, self.dim);
        for _ in 0..p {
            match &self.sigma {
                None => out.push(ta.clone()),
                Some(s) => {
                    let mut sb = ta.clone();
                    for _ in 0..m {
                        out.push(sb.clone());
                        sb = sb.mul(s);
                    }
                }
            }
            ta = ta.mul(&self.tau);
        }
        out
    }

    /// Span of {x : (g-1)x in relations for all g in gens}.
    fn fixed_span(&self, gens: &[&PadicMatrix]) -> PadicMatrix {
        let p = self.tau.p;
        let ident = PadicMatrix::identity(p, self.prec, self.dim);
        let r_cols = self.relations.as_ref().map(|r| r.cols).unwrap_or(0);
        let total_cols = self.dim + gens.len() * r_cols;
        let mut blocks: Vec<PadicMatrix> = Vec::new();
        for (k, g) in gens.iter().enumerate() {
            let mut row = g.sub(&ident);
            if let Some(rel) = &self.relations {
                let before = PadicMatrix::zero(p, self.prec, self.dim, k * r_cols);
                let after =
                    PadicMatrix::zero(p, self.prec, self.dim, (gens.len() - 1 - k) * r_cols);
                row = row.hstack(&before).hstack(&rel.neg()).hstack(&after);
            }
            debug_assert_eq!(row.cols, total_cols);
            blocks.push(row);
        }
        let stacked = blocks
            .into_iter()
            .reduce(|a, b| a.vstack(&b))
            .unwrap_or_else(|| PadicMatrix::identity(p, self.prec, self.dim));
        let ker = kernel_basis(&stacked);
        ker.row_block(0, self.dim)
    }

    fn lattice_rank(span: &PadicMatrix) -> usize {
        smith_normal_form(span).diag.iter().filter(|d| d.is_some()).count()
    }

    pub fn rank(&self) -> usize {
        let rel_rank = self
            .relations
            .as_ref()
            .map(|r| Self::lattice_rank(r))
            .unwrap_or(0);
        self.dim - rel_rank
    }

    fn fixed_rank(&self, gens: &[&PadicMatrix]) -> usize {
        let span = self.fixed_span(gens);
        let rel_rank = self
            .relations
            .as_ref()
            .map(|r| Self::lattice_rank(r))
            .unwrap_or(0);
        Self::lattice_rank(&span) - rel_rank
    }
}

/// Tate cohomology of N = <tau> graded by the characters of G/N.
///
/// Returns dims of the xi^t eigenspaces, t = 0..m (m = 1 for cyclic G, in
/// which case the single entry is the total dimension).
fn graded_tate(re: &Realization) -> Result<(Vec<usize>, Vec<usize>), CatalogError> {
    let p = re.group.p();
    let prec = re.prec;
    let pres = re.cyclic_presentation();
    pres.validate()?;
    let ident = PadicMatrix::identity(p, prec, re.dim);
    let tm1 = re.tau.sub(&ident);
    let nn = pres.norm_matrix();

    let h0 = graded_quotient(re, &re.fixed_span(&[&re.tau]), &nn)?;
    let h1 = graded_quotient(re, &fixed_span_for(re, &nn), &tm1)?;
    Ok((h0, h1))
}

/// {x : nn x in relations} as a span (kernel when there are no relations).
fn fixed_span_for(re: &Realization, mat: &PadicMatrix) -> PadicMatrix {
    match &re.relations {
        None => kernel_basis(mat),
        Some(rel) => {
            let block = mat.hstack(&rel.neg());
            kernel_basis(&block).row_block(0, re.dim)
        }
    }
}

/// dims per character of span(P)/(gens + relations + p P), with the induced
/// sigma action. For cyclic groups returns a single total dimension.
fn graded_quotient(
    re: &Realization,
    p_span: &PadicMatrix,
    gens: &PadicMatrix,
) -> Result<Vec<usize>, CatalogError> {
    let m = re.group.m() as usize;
    let basis = span_basis(p_span);
    if basis.cols == 0 {
        return Ok(vec![0; m.max(1)]);
    }
    let full_gens = match &re.relations {
        Some(r) => gens.hstack(r),
        None => gens.clone(),
    };
    // The span is computed at a working precision well above the reporting
    // precision; solving after reduction absorbs preimage directions that
    // only exist modulo the higher power of p.
    let half = (re.prec / 2).max(2);
    let basis = basis.reduce(half);
    let full_gens = full_gens.reduce(half);
    let (x, eff) = solve(&basis, &full_gens)?;
    if eff < 1 {
        return Err(LinalgError::PrecisionLoss {
            prec: basis.prec,
            detail: "graded quotient unresolved mod p".into(),
        }
        .into());
    }
    let sub = x.to_fp();
    let proj = FpMat::quotient_map(&sub);
    let d = proj.rows;
    if m <= 1 {
        return Ok(vec![d]);
    }
    if d == 0 {
        return Ok(vec![0; m]);
    }
    let sigma = re.sigma.as_ref().expect("metacyclic").reduce(half);
    let (y, eff2) = solve(&basis, &sigma.mul(&basis))?;
    if eff2 < 1 {
        return Err(LinalgError::PrecisionLoss {
            prec: basis.prec,
            detail: "sigma action unresolved mod p".into(),
        }
        .into());
    }
    let sec = proj.solve(&FpMat::identity(proj.p, d)).expect("projection is onto");
    let a_v = proj.mul(&y.to_fp()).mul(&sec);
    let (p, r) = match re.group {
        GroupSpec::Metacyclic { p, r, .. } => (p, r),
        _ => unreachable!(),
    };
    let mut dims = Vec::with_capacity(m);
    for t in 0..m {
        let lam = mod_pow(r % p, t as u64, p);
        dims.push(a_v.eigenspace_dim(lam));
    }
    if dims.iter().sum::<usize>() != d {
        return Err(CatalogError::DegeneratePairing(
            "character grading does not exhaust the quotient".into(),
        ));
    }
    Ok(dims)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct InvariantProfile {
    pub rank: usize,
    /// Z_p-rank of the tau-fixed part
    pub rank_n: usize,
    /// Z_p-rank of the sigma-fixed part (metacyclic only)
    pub rank_h: Option<usize>,
    pub rank_g: usize,
    /// dim Ĥ^0(N, M) per character xi^t of G/N (single entry for cyclic G)
    pub h0: Vec<usize>,
    /// dim H^1(N, M) per character
    pub h1: Vec<usize>,
}

/// Re-realize at doubled precision so preimage-lattice computations cannot
/// lose exact kernel directions to pivots of positive valuation.
fn at_working_precision(re: &Realization) -> Result<Realization, CatalogError> {
    realize(&re.group, &re.items, 2 * re.prec + 2)
}

pub fn invariant_profile(re: &Realization) -> Result<InvariantProfile, CatalogError> {
    let re = &at_working_precision(re)?;
    re.validate()?;
    let rank = re.rank();
    let rank_n = re.fixed_rank(&[&re.tau]);
    let (rank_h, rank_g) = match &re.sigma {
        None => (None, rank_n),
        Some(s) => (Some(re.fixed_rank(&[s])), re.fixed_rank(&[&re.tau, s])),
    };
    let (h0, h1) = graded_tate(re)?;
    Ok(InvariantProfile { rank, rank_n, rank_h, rank_g, h0, h1 })
}

/// v_p of the regulator constant for the Brauer relation
/// Theta_d = 1 - d H_d - N + d G_d on the lattice `re`, evaluated on a
/// randomly averaged G-invariant pairing. Any non-degenerate choice gives
/// the same valuation; the seed only moves the random diagonal.
pub fn regulator_valuation(re: &Realization, d: u64, seed: u64) -> Result<i64, CatalogError> {
    let re = &at_working_precision(re)?;
    let (p, m, _r) = match re.group {
        GroupSpec::Metacyclic { p, m, r } => (p, m, r),
        GroupSpec::Cyclic { .. } => {
            return Err(CatalogError::Unsupported(
                "regulator constants need a non-trivial Brauer relation; use a metacyclic group".into(),
            ))
        }
    };
    if re.relations.is_some() {
        return Err(CatalogError::BadDescriptor("regulator constants are defined on lattices".into()));
    }
    if d < 2 || m % d != 0 {
        return Err(CatalogError::BadGroup(format!("Theta_d needs d | m, d >= 2; got d = {d}")));
    }
    let sigma = re.sigma.as_ref().unwrap();
    let sd = sigma.pow(m / d);
    // subgroup generator sets and coefficients a_H, with |H| p-valuations
    let subgroups: Vec<(Vec<&PadicMatrix>, i64, u32, u64)> = vec![
        (vec![], 1, 0, 1),                  // trivial subgroup
        (vec![&sd], -(d as i64), 0, d),     // H_d
        (vec![&re.tau], -1, 1, p),          // N
        (vec![&re.tau, &sd], d as i64, 1, p * d), // G_d
    ];
    let elements = re.group_elements();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..8 {
        // random symmetric seed pairing: a diagonal one cannot couple a
        // character with its dual on distinct summands
        let mut b0 = PadicMatrix::zero(re.tau.p, re.prec, re.dim, re.dim);
        for i in 0..re.dim {
            for j in i..re.dim {
                let v: u64 = rng.gen_range(0..=97);
                b0.set(i, j, BigUint::from(v));
                b0.set(j, i, BigUint::from(v));
            }
        }
        // beta = sum_g g^T b0 g
        let mut beta = PadicMatrix::zero(re.tau.p, re.prec, re.dim, re.dim);
        for g in &elements {
            let mut gt = PadicMatrix::zero(re.tau.p, re.prec, re.dim, re.dim);
            for i in 0..re.dim {
                for j in 0..re.dim {
                    gt.set(j, i, g.get(i, j).clone());
                }
            }
            beta = beta.add(&gt.mul(&b0).mul(g));
        }
        let mut total: i64 = 0;
        for (gens, a_h, vp_h, _card) in &subgroups {
            let basis = if gens.is_empty() {
                PadicMatrix::identity(re.tau.p, re.prec, re.dim)
            } else {
                span_basis(&re.fixed_span(gens))
            };
            let dim_h = basis.cols;
            if dim_h == 0 {
                continue;
            }
            // Gram matrix of beta restricted to the fixed lattice
            let mut bt = PadicMatrix::zero(re.tau.p, re.prec, dim_h, re.dim);
            for i in 0..re.dim {
                for j in 0..dim_h {
                    bt.set(j, i, basis.get(i, j).clone());
                }
            }
            let gram = bt.mul(&beta).mul(&basis);
            let snf = smith_normal_form(&gram);
            let mut det_val: i64 = 0;
            for dv in &snf.diag {
                match dv {
                    Some(v) => det_val += *v as i64,
                    None => continue 'attempt, // singular at this precision: new pairing
                }
            }
            total += a_h * (det_val - dim_h as i64 * *vp_h as i64);
        }
        return Ok(total);
    }
    Err(CatalogError::DegeneratePairing(format!(
        "no non-degenerate averaged pairing found for dim {} at precision {}",
        re.dim, re.prec
    )))
}

/// Saturation index: structure and graded F_p-dims of
/// M / (Z_p[G] submodule generated by all M^H, H != 1 cyclic).
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SaturationIndex {
    pub quotient: Cokernel,
    /// F_p-dim of quotient/p per character of G/N (len 1 for cyclic G)
    pub graded_fp_dims: Vec<usize>,
}

pub fn saturation_index(re: &Realization) -> Result<SaturationIndex, CatalogError> {
    let re = &at_working_precision(re)?;
    re.validate()?;
    if re.relations.is_some() {
        return Err(CatalogError::BadDescriptor("saturation index is defined on lattices".into()));
    }
    let p = re.tau.p;
    let m = re.group.m();
    // cyclic subgroup representatives: N = <tau> and <sigma^e> for e | m, e < m
    let mut spans: Vec<PadicMatrix> = vec![re.fixed_span(&[&re.tau])];
    if let Some(sigma) = &re.sigma {
        for e in 1..m {
            if m % e == 0 {
                let se = sigma.pow(e);
                spans.push(re.fixed_span(&[&se]));
            }
        }
    }
    let mut gens = spans
        .into_iter()
        .reduce(|a, b| a.hstack(&b))
        .expect("at least one subgroup");
    // close under the group action
    let mut closed = PadicMatrix::zero(p, re.prec, re.dim, 0);
    for g in re.group_elements() {
        closed = closed.hstack(&g.mul(&gens));
    }
    gens = closed;
    let quotient = cokernel(&gens);
    // grading mod p
    let proj = FpMat::quotient_map(&gens.to_fp());
    let d = proj.rows;
    let graded = match (&re.sigma, re.group) {
        (Some(sigma), GroupSpec::Metacyclic { p: gp, r, .. }) if d > 0 => {
            let sec = proj.solve(&FpMat::identity(p, d)).expect("projection onto");
            let a_v = proj.mul(&sigma.to_fp()).mul(&sec);
            (0..m).map(|t| a_v.eigenspace_dim(mod_pow(r % gp, t, gp))).collect()
        }
        (Some(_), _) => vec![0; m as usize],
        (None, _) => vec![d],
    };
    Ok(SaturationIndex { quotient, graded_fp_dims: graded })
}

/// What `identify` can consume: an invariant profile where unknown entries
/// are None. Graded entries follow the same character order as
/// [`InvariantProfile`].
#[derive(Clone, Debug, Default)]
pub struct ProfileQuery {
    pub rank: usize,
    pub rank_n: Option<usize>,
    pub rank_g: Option<usize>,
    pub h0: Option<Vec<usize>>,
    pub h1: Option<Vec<usize>>,
    /// exact regulator valuation for Theta_m (dihedral)
    pub s_value: Option<i64>,
    /// parity of the regulator valuation, when only that is known
    pub s_parity: Option<u8>,
    /// total F_p-dim of the saturation index
    pub iota: Option<usize>,
}

pub type Multiset = Vec<(Indecomposable, usize)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentifyOutcome {
    Exact(Multiset),
    Candidates(Vec<Multiset>),
    Inconsistent,
}

/// Invariant rows for the identification systems.
struct LatticeRow {
    item: Indecomposable,
    rank: usize,
    rank_n: usize,
    rank_g: usize,
    h0: Vec<usize>,
    h1: Vec<usize>,
    s: i64,
    iota: usize,
}

fn lattice_rows(g: &GroupSpec) -> Result<Vec<LatticeRow>, CatalogError> {
    let p = g.p() as usize;
    match g {
        GroupSpec::Cyclic { .. } => Ok(vec![
            LatticeRow { item: Indecomposable::Zp, rank: 1, rank_n: 1, rank_g: 1, h0: vec![1], h1: vec![0], s: 0, iota: 0 },
            LatticeRow { item: Indecomposable::CycloA, rank: p - 1, rank_n: 0, rank_g: 0, h0: vec![0], h1: vec![1], s: 0, iota: 0 },
            LatticeRow { item: Indecomposable::Regular, rank: p, rank_n: 1, rank_g: 1, h0: vec![0], h1: vec![0], s: 0, iota: 0 },
        ]),
        GroupSpec::Metacyclic { m: 2, .. } => Ok(vec![
            LatticeRow { item: Indecomposable::Chi { j: 0 }, rank: 1, rank_n: 1, rank_g: 1, h0: vec![1, 0], h1: vec![0, 0], s: -1, iota: 0 },
            LatticeRow { item: Indecomposable::Chi { j: 1 }, rank: 1, rank_n: 1, rank_g: 0, h0: vec![0, 1], h1: vec![0, 0], s: 1, iota: 0 },
            LatticeRow { item: Indecomposable::AChi { j: 0 }, rank: p - 1, rank_n: 0, rank_g: 0, h0: vec![0, 0], h1: vec![1, 0], s: 1, iota: 0 },
            LatticeRow { item: Indecomposable::AChi { j: 1 }, rank: p - 1, rank_n: 0, rank_g: 0, h0: vec![0, 0], h1: vec![0, 1], s: -1, iota: 1 },
            LatticeRow { item: Indecomposable::BChi { j: 0 }, rank: p, rank_n: 1, rank_g: 1, h0: vec![0, 0], h1: vec![0, 0], s: 0, iota: 0 },
            LatticeRow { item: Indecomposable::BChi { j: 1 }, rank: p, rank_n: 1, rank_g: 0, h0: vec![0, 0], h1: vec![0, 0], s: 0, iota: 1 },
        ]),
        GroupSpec::Metacyclic { m, .. } => Err(CatalogError::Unsupported(format!(
            "identify implemented for cyclic and dihedral groups, not m = {m}"
        ))),
    }
}

/// Enumerate all multiplicity vectors over the lattice catalog matching the
/// known invariants.
pub fn identify(g: &GroupSpec, q: &ProfileQuery) -> Result<IdentifyOutcome, CatalogError> {
    g.validate()?;
    let rows = lattice_rows(g)?;
    let nchar = g.m().max(1) as usize;
    let mut solutions: Vec<Multiset> = Vec::new();
    let bounds: Vec<usize> = rows.iter().map(|r| q.rank / r.rank).collect();
    let mut mult = vec![0usize; rows.len()];
    loop {
        // evaluate current vector
        let rank: usize = mult.iter().zip(&rows).map(|(m, r)| m * r.rank).sum();
        if rank == q.rank {
            let ok = check_vector(&mult, &rows, q, nchar);
            if ok {
                let ms: Multiset = mult
                    .iter()
                    .zip(&rows)
                    .filter(|(m, _)| **m > 0)
                    .map(|(m, r)| (r.item, *m))
                    .collect();
                solutions.push(ms);
            }
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == mult.len() {
                let mut sols = solutions;
                sols.sort();
                sols.dedup();
                return Ok(match sols.len() {
                    0 => IdentifyOutcome::Inconsistent,
                    1 => IdentifyOutcome::Exact(sols.pop().unwrap()),
                    _ => IdentifyOutcome::Candidates(sols),
                });
            }
            mult[k] += 1;
            if mult[k] <= bounds[k] {
                break;
            }
            mult[k] = 0;
            k += 1;
        }
    }
}

fn check_vector(mult: &[usize], rows: &[LatticeRow], q: &ProfileQuery, nchar: usize) -> bool {
    let sum = |f: &dyn Fn(&LatticeRow) -> usize| -> usize {
        mult.iter().zip(rows).map(|(m, r)| m * f(r)).sum()
    };
    if let Some(rn) = q.rank_n {
        if sum(&|r| r.rank_n) != rn {
            return false;
        }
    }
    if let Some(rg) = q.rank_g {
        if sum(&|r| r.rank_g) != rg {
            return false;
        }
    }
    if let Some(h0) = &q.h0 {
        for t in 0..nchar {
            if sum(&|r| r.h0[t]) != h0[t] {
                return false;
            }
        }
    }
    if let Some(h1) = &q.h1 {
        for t in 0..nchar {
            if sum(&|r| r.h1[t]) != h1[t] {
                return false;
            }
        }
    }
    let s: i64 = mult.iter().zip(rows).map(|(m, r)| *m as i64 * r.s).sum();
    if let Some(sv) = q.s_value {
        if s != sv {
            return false;
        }
    }
    if let Some(par) = q.s_parity {
        if (s.rem_euclid(2)) as u8 != par % 2 {
            return false;
        }
    }
    if let Some(iota) = q.iota {
        if sum(&|r| r.iota) != iota {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    const PREC: u32 = 8;

    #[test]
    fn teichmuller_roots() {
        // xi = teichmuller lift of p-1 is -1 exactly
        for p in [3u64, 5, 7] {
            let xi = teichmuller(p, PREC, p - 1);
            let modulus = BigUint::from(p).pow(PREC);
            assert_eq!(xi, &modulus - BigUint::one());
        }
        // order-4 root mod 5^8: xi^2 = -1
        let xi = teichmuller(5, PREC, 2);
        let modulus = BigUint::from(5u64).pow(PREC);
        assert_eq!(xi.modpow(&BigUint::from(2u64), &modulus), &modulus - BigUint::one());
    }

    #[test]
    fn cyclic_lattice_profiles() {
        // frozen cohomology table for the cyclic catalog
        for p in [3u64, 5] {
            let g = GroupSpec::Cyclic { p };
            let cases: Vec<(Indecomposable, (usize, usize))> = vec![
                (Indecomposable::Zp, (1, 0)),
                (Indecomposable::CycloA, (0, 1)),
                (Indecomposable::Regular, (0, 0)),
            ];
            for (item, (h0, h1)) in cases {
                let re = realize(&g, &[item], PREC).unwrap();
                let prof = invariant_profile(&re).unwrap();
                assert_eq!(prof.h0, vec![h0], "{item:?} at p={p}");
                assert_eq!(prof.h1, vec![h1], "{item:?} at p={p}");
            }
        }
    }

    #[test]
    fn cyclic_torsion_and_extension_profiles() {
        for p in [3u64, 5] {
            let g = GroupSpec::Cyclic { p };
            for i in [1u32, 2] {
                let cases: Vec<(Indecomposable, (usize, usize))> = vec![
                    (Indecomposable::Tors { i }, (1, 1)),
                    (Indecomposable::ExtZp { i }, (1, 0)),
                    (Indecomposable::ExtA { i }, (0, 1)),
                    (Indecomposable::ExtZpA { i }, (0, 0)),
                ];
                for (item, expect) in cases {
                    let re = realize(&g, &[item], PREC).unwrap();
                    let prof = invariant_profile(&re).unwrap();
                    assert_eq!((prof.h0[0], prof.h1[0]), expect, "{item:?} p={p} i={i}");
                }
            }
            // F_i for i >= 2 has vanishing cohomology
            let re = realize(&g, &[Indecomposable::TorsTwisted { i: 2 }], PREC).unwrap();
            let prof = invariant_profile(&re).unwrap();
            assert_eq!((prof.h0[0], prof.h1[0]), (0, 0));
        }
    }

    #[test]
    fn dihedral_table() {
        // ranks, graded cohomology, regulator and saturation for all six
        // D_p lattices, p in {3, 5}
        for p in [3u64, 5u64] {
            let g = GroupSpec::dihedral(p);
            let pu = p as usize;
            // (item, rank, rank_n, rank_h, rank_g, h0, h1, s, iota)
            let table: Vec<(Indecomposable, usize, usize, usize, usize, [usize; 2], [usize; 2], i64, usize)> = vec![
                (Indecomposable::Chi { j: 0 }, 1, 1, 1, 1, [1, 0], [0, 0], -1, 0),
                (Indecomposable::Chi { j: 1 }, 1, 1, 0, 0, [0, 1], [0, 0], 1, 0),
                (Indecomposable::AChi { j: 0 }, pu - 1, 0, (pu - 1) / 2, 0, [0, 0], [1, 0], 1, 0),
                (Indecomposable::AChi { j: 1 }, pu - 1, 0, (pu - 1) / 2, 0, [0, 0], [0, 1], -1, 1),
                (Indecomposable::BChi { j: 0 }, pu, 1, (pu + 1) / 2, 1, [0, 0], [0, 0], 0, 0),
                (Indecomposable::BChi { j: 1 }, pu, 1, (pu - 1) / 2, 0, [0, 0], [0, 0], 0, 1),
            ];
            for (item, rank, rn, rh, rg, h0, h1, s, iota) in table {
                let re = realize(&g, &[item], PREC).unwrap();
                let prof = invariant_profile(&re).unwrap();
                assert_eq!(prof.rank, rank, "{item:?} rank p={p}");
                assert_eq!(prof.rank_n, rn, "{item:?} rank_n p={p}");
                assert_eq!(prof.rank_h, Some(rh), "{item:?} rank_h p={p}");
                assert_eq!(prof.rank_g, rg, "{item:?} rank_g p={p}");
                assert_eq!(prof.h0, h0.to_vec(), "{item:?} h0 p={p}");
                assert_eq!(prof.h1, h1.to_vec(), "{item:?} h1 p={p}");
                let sv = regulator_valuation(&re, 2, 17).unwrap();
                assert_eq!(sv, s, "{item:?} regulator p={p}");
                let sat = saturation_index(&re).unwrap();
                assert_eq!(sat.graded_fp_dims.iter().sum::<usize>(), iota, "{item:?} iota p={p}");
            }
        }
    }

    #[test]
    fn regulator_metacyclic_m4() {
        // m = 4, p = 5, r = 2: closed forms for Theta_4
        let g = GroupSpec::Metacyclic { p: 5, m: 4, r: 2 };
        let d = 4u64;
        let cases: Vec<(Vec<Indecomposable>, i64)> = vec![
            (vec![Indecomposable::Chi { j: 0 }], 1 - d as i64),           // 1 - d
            (vec![Indecomposable::Chi { j: 1 }, Indecomposable::Chi { j: 3 }], 2),
            (vec![Indecomposable::Chi { j: 2 }], 1),                      // m even, j = m/2
            (vec![Indecomposable::AChi { j: 0 }], d as i64 - 1),          // d - 1
            (vec![Indecomposable::AChi { j: 1 }], 2 - 1 - d as i64),      // 2i-1-d
            (vec![Indecomposable::BChi { j: 0 }], 0),
            (vec![Indecomposable::BChi { j: 2 }], 0),                     // m even, j = m/2
            (vec![Indecomposable::BChi { j: 1 }, Indecomposable::Chi { j: 3 }], 2 + 1 - d as i64),
            (vec![Indecomposable::BChi { j: 1 }, Indecomposable::BChi { j: 3 }], 0),
        ];
        for (items, expect) in cases {
            let re = realize(&g, &items, PREC).unwrap();
            let got = regulator_valuation(&re, d, 23).unwrap();
            assert_eq!(got, expect, "{items:?}");
        }
    }

    #[test]
    fn regulator_additivity_dihedral() {
        // regulator valuations add over direct sums (D_p case)
        let g = GroupSpec::dihedral(3);
        let re = realize(
            &g,
            &[Indecomposable::Chi { j: 0 }, Indecomposable::AChi { j: 1 }, Indecomposable::BChi { j: 0 }],
            PREC,
        )
        .unwrap();
        assert_eq!(regulator_valuation(&re, 2, 5).unwrap(), -1 + -1 + 0);
    }

    #[test]
    fn regulator_pairing_independence() {
        let g = GroupSpec::dihedral(5);
        let re = realize(&g, &[Indecomposable::AChi { j: 1 }, Indecomposable::Chi { j: 0 }], PREC).unwrap();
        let vals: Vec<i64> = (0..6).map(|s| regulator_valuation(&re, 2, 1000 + s).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] == w[1]), "{vals:?}");
        assert_eq!(vals[0], -1 + -1);
    }

    #[test]
    fn saturation_metacyclic_m4() {
        // For composite m the intermediate cyclic subgroups contribute too.
        // At m = 4, p = 5 the order-2 subgroup <sigma^2> acts on A{1} by
        // minus conjugation; its fixed vectors zeta^k - zeta^(-k) generate
        // the ideal (zeta - 1) (the quotients of cyclotomic units are
        // units), so iota(A{1}) = F_p{1}. For A{2} the fixed vectors
        // zeta^k + zeta^(-k) are units, so iota(A{2}) = 0.
        let g = GroupSpec::Metacyclic { p: 5, m: 4, r: 2 };
        let check = |item: Indecomposable, expect: Vec<usize>| {
            let re = realize(&g, &[item], PREC).unwrap();
            let sat = saturation_index(&re).unwrap();
            assert_eq!(sat.graded_fp_dims, expect, "{item:?}");
        };
        check(Indecomposable::AChi { j: 1 }, vec![0, 1, 0, 0]);
        check(Indecomposable::AChi { j: 2 }, vec![0, 0, 0, 0]);
        // trivial on A, B, Chi
        for item in [
            Indecomposable::AChi { j: 0 },
            Indecomposable::BChi { j: 0 },
            Indecomposable::Chi { j: 2 },
        ] {
            let re = realize(&g, &[item], PREC).unwrap();
            let sat = saturation_index(&re).unwrap();
            assert_eq!(sat.graded_fp_dims.iter().sum::<usize>(), 0, "{item:?}");
        }
    }

    #[test]
    fn identify_exact_cyclic() {
        let g = GroupSpec::Cyclic { p: 3 };
        let q = ProfileQuery {
            rank: 6,
            rank_g: Some(2),
            h0: Some(vec![1]),
            h1: Some(vec![1]),
            ..Default::default()
        };
        // a + 2c + 3e = 6, a + e = 2, a = 1, c = 1 -> e = 1
        match identify(&g, &q).unwrap() {
            IdentifyOutcome::Exact(ms) => {
                assert_eq!(
                    ms,
                    vec![
                        (Indecomposable::Zp, 1),
                        (Indecomposable::CycloA, 1),
                        (Indecomposable::Regular, 1)
                    ]
                );
            }
            other => panic!("expected exact, got {other:?}"),
        }
    }

    #[test]
    fn identify_candidates_dihedral() {
        // the underdetermined pattern: rank 3 at p = 3, r_Q = 0, r_F = 1,
        // h1 = unknown, parity odd -> {Zp~} or {A~ + B~}-like sets
        let g = GroupSpec::dihedral(3);
        let q = ProfileQuery {
            rank: 1,
            rank_g: Some(0),
            rank_n: Some(1),
            h0: None,
            h1: Some(vec![0, 0]),
            s_parity: Some(1),
            ..Default::default()
        };
        match identify(&g, &q).unwrap() {
            IdentifyOutcome::Exact(ms) => {
                assert_eq!(ms, vec![(Indecomposable::Chi { j: 1 }, 1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identify_roundtrip_small() {
        // realized profile of a known sum feeds back to the same sum
        let g = GroupSpec::dihedral(3);
        let items = vec![Indecomposable::Chi { j: 0 }, Indecomposable::AChi { j: 1 }];
        let re = realize(&g, &items, PREC).unwrap();
        let prof = invariant_profile(&re).unwrap();
        let sat = saturation_index(&re).unwrap();
        let q = ProfileQuery {
            rank: prof.rank,
            rank_n: Some(prof.rank_n),
            rank_g: Some(prof.rank_g),
            h0: Some(prof.h0.clone()),
            h1: Some(prof.h1.clone()),
            s_value: Some(regulator_valuation(&re, 2, 3).unwrap()),
            iota: Some(sat.graded_fp_dims.iter().sum()),
            ..Default::default()
        };
        match identify(&g, &q).unwrap() {
            IdentifyOutcome::Exact(ms) => assert_eq!(
                ms,
                vec![(Indecomposable::Chi { j: 0 }, 1), (Indecomposable::AChi { j: 1 }, 1)]
            ),
            other => panic!("{other:?}"),
        }
    }
}
