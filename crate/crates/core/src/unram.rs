//! Arithmetic in the unramified extension of Z_p of degree d, truncated at
//! precision p^N: the ring R = Z[t]/(p^N, g(t)) with g monic of degree d and
//! irreducible modulo p.  Provides residue-field arithmetic in F_{p^d},
//! root finding for polynomials over F_{p^d}, Hensel lifting of roots from
//! the residue field to R, and square testing — the ingredients needed to
//! decide whether a polynomial with p-integral coefficients has a root in
//! the ring of integers of the unramified degree-d extension of Q_p.

use crate::fp::mod_pow;

/// Elements of R are coefficient vectors of length `d` with entries mod p^N.
pub type RingEl = Vec<u64>;

#[derive(Clone, Debug)]
pub struct UnramCtx {
    pub p: u64,
    /// precision exponent N
    pub n: u32,
    /// p^N
    pub pn: u64,
    /// residue degree d
    pub d: usize,
    /// monic modulus g(t) of degree d, coefficients mod p^N, g[d] = 1
    pub g: Vec<u64>,
}

/// t^p - t - 1 is irreducible over F_p (Artin-Schreier), making it a
/// convenient default modulus for the unramified extension of degree p.
pub fn artin_schreier_modulus(p: u64, pn: u64) -> Vec<u64> {
    let d = p as usize;
    let mut g = vec![0u64; d + 1];
    g[0] = pn - 1;
    g[1] = pn - 1;
    g[d] = 1;
    g
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl UnramCtx {
    pub fn new(p: u64, n: u32, g: Vec<u64>) -> Self {
        let pn = p.pow(n);
        let d = g.len() - 1;
        assert_eq!(g[d], 1, "modulus must be monic");
        assert!(pn < (1u64 << 32), "precision overflows u64 products");
        UnramCtx { p, n, pn, d, g }
    }

    /// The degree-p unramified ring at precision N with the Artin-Schreier modulus.
    pub fn degree_p(p: u64, n: u32) -> Self {
        let pn = p.pow(n);
        UnramCtx::new(p, n, artin_schreier_modulus(p, pn))
    }

    pub fn zero(&self) -> RingEl {
        vec![0; self.d]
    }

    pub fn one(&self) -> RingEl {
        let mut e = vec![0; self.d];
        e[0] = 1;
        e
    }

    pub fn from_u64(&self, x: u64) -> RingEl {
        let mut e = vec![0; self.d];
        e[0] = x % self.pn;
        e
    }

    pub fn gen(&self) -> RingEl {
        let mut e = vec![0; self.d];
        if self.d > 1 {
            e[1] = 1;
        } else {
            // degree 1: t ≡ -g[0]
            e[0] = (self.pn - self.g[0] % self.pn) % self.pn;
        }
        e
    }

    pub fn is_zero(&self, a: &RingEl) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &RingEl, b: &RingEl) -> RingEl {
        (0..self.d).map(|i| (a[i] + b[i]) % self.pn).collect()
    }

    pub fn sub(&self, a: &RingEl, b: &RingEl) -> RingEl {
        (0..self.d)
            .map(|i| (a[i] + self.pn - b[i]) % self.pn)
            .collect()
    }

    pub fn scalar_mul(&self, a: &RingEl, c: u64) -> RingEl {
        a.iter().map(|&x| mulmod(x, c % self.pn, self.pn)).collect()
    }

    pub fn mul(&self, a: &RingEl, b: &RingEl) -> RingEl {
        // schoolbook product followed by reduction modulo the monic g
        let mut prod = vec![0u64; 2 * self.d - 1];
        for i in 0..self.d {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.d {
                prod[i + j] = (prod[i + j] + mulmod(a[i], b[j], self.pn)) % self.pn;
            }
        }
        for k in (self.d..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..self.d {
                let t = mulmod(c, self.g[j], self.pn);
                prod[k - self.d + j] = (prod[k - self.d + j] + self.pn - t) % self.pn;
            }
        }
        prod.truncate(self.d);
        prod
    }

    pub fn pow(&self, a: &RingEl, mut e: u128) -> RingEl {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// p-adic valuation of an element: min valuation of its coefficients,
    /// or None for the zero element (valuation ≥ N, indistinguishable).
    pub fn val(&self, a: &RingEl) -> Option<u32> {
        let mut best: Option<u32> = None;
        for &c in a {
            if c == 0 {
                continue;
            }
            let mut v = 0;
            let mut x = c;
            while x % self.p == 0 {
                x /= self.p;
                v += 1;
            }
            best = Some(best.map_or(v, |b: u32| b.min(v)));
        }
        best
    }

    pub fn is_unit(&self, a: &RingEl) -> bool {
        self.val(a) == Some(0)
    }

    /// Exact division by p^k (every coefficient must be divisible).
    pub fn shift_down(&self, a: &RingEl, k: u32) -> RingEl {
        let pk = self.p.pow(k);
        a.iter()
            .map(|&c| {
                assert_eq!(c % pk, 0, "inexact division by p^k in unramified ring");
                c / pk
            })
            .collect()
    }

    pub fn reduce_mod_p(&self, a: &RingEl) -> RingEl {
        a.iter().map(|&c| c % self.p).collect()
    }

    /// Inverse of a unit: start from the residue-field inverse and lift by
    /// the Newton iteration x ← x(2 - ax).
    pub fn inv(&self, a: &RingEl) -> RingEl {
        assert!(self.is_unit(a), "inverse of a non-unit");
        let fq = self.residue_field();
        let mut x = fq.inv(&self.reduce_mod_p(a));
        x.resize(self.d, 0);
        let two = self.from_u64(2);
        let mut prec = 1;
        while prec < self.n {
            let t = self.sub(&two, &self.mul(a, &x));
            x = self.mul(&x, &t);
            prec *= 2;
        }
        x
    }

    pub fn residue_field(&self) -> FqCtx {
        FqCtx {
            p: self.p,
            d: self.d,
            g: self.g.iter().map(|&c| c % self.p).collect(),
        }
    }

    /// Lift a residue-field element to the ring (coefficients taken as-is).
    pub fn lift(&self, a: &RingEl) -> RingEl {
        let mut e = a.clone();
        e.resize(self.d, 0);
        e
    }

    /// Whether a nonzero element is a square in the fraction field of the
    /// completed ring: even valuation and a square unit part.  Returns None
    /// when the element vanishes at working precision (undecidable).
    pub fn is_square(&self, a: &RingEl) -> Option<bool> {
        let v = self.val(a)?;
        if v % 2 == 1 {
            return Some(false);
        }
        let u = self.shift_down(a, v);
        let fq = self.residue_field();
        let q = (self.p as u128).pow(self.d as u32);
        let r = fq.pow(&self.reduce_mod_p(&u), (q - 1) / 2);
        Some(r == fq.one())
    }
}

// ---------------------------------------------------------------------------
// Residue field F_{p^d} and polynomial root finding over it.
// ---------------------------------------------------------------------------

pub type FqEl = Vec<u64>;

#[derive(Clone, Debug)]
pub struct FqCtx {
    pub p: u64,
    pub d: usize,
    /// monic modulus of degree d over F_p
    pub g: Vec<u64>,
}

impl FqCtx {
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.d as u32)
    }

    pub fn zero(&self) -> FqEl {
        vec![0; self.d]
    }

    pub fn one(&self) -> FqEl {
        let mut e = vec![0; self.d];
        e[0] = 1;
        e
    }

    pub fn is_zero(&self, a: &FqEl) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FqEl, b: &FqEl) -> FqEl {
        (0..self.d).map(|i| (a[i] + b[i]) % self.p).collect()
    }

    pub fn sub(&self, a: &FqEl, b: &FqEl) -> FqEl {
        (0..self.d)
            .map(|i| (a[i] + self.p - b[i]) % self.p)
            .collect()
    }

    pub fn neg(&self, a: &FqEl) -> FqEl {
        a.iter().map(|&c| (self.p - c) % self.p).collect()
    }

    pub fn mul(&self, a: &FqEl, b: &FqEl) -> FqEl {
        let mut prod = vec![0u64; 2 * self.d - 1];
        for i in 0..self.d {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.d {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % self.p;
            }
        }
        for k in (self.d..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..self.d {
                prod[k - self.d + j] = (prod[k - self.d + j] + (self.p - self.g[j] % self.p) * c) % self.p;
            }
        }
        prod.truncate(self.d);
        prod
    }

    pub fn pow(&self, a: &FqEl, mut e: u128) -> FqEl {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FqEl) -> FqEl {
        assert!(!self.is_zero(a), "inverse of zero");
        self.pow(a, self.order() - 2)
    }

    /// Enumerate all field elements (used only for tiny fields in tests).
    pub fn element(&self, mut idx: u128) -> FqEl {
        let mut e = vec![0; self.d];
        for c in e.iter_mut() {
            *c = (idx % self.p as u128) as u64;
            idx /= self.p as u128;
        }
        e
    }
}

// Dense polynomials over F_q, lowest degree first.
pub type FqPoly = Vec<FqEl>;

pub fn fq_poly_normalize(fq: &FqCtx, mut f: FqPoly) -> FqPoly {
    while f.last().is_some_and(|c| fq.is_zero(c)) {
        f.pop();
    }
    f
}

pub fn fq_poly_deg(f: &FqPoly) -> Option<usize> {
    if f.is_empty() { None } else { Some(f.len() - 1) }
}

pub fn fq_poly_mul(fq: &FqCtx, f: &FqPoly, g: &FqPoly) -> FqPoly {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let mut out = vec![fq.zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if fq.is_zero(a) {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            out[i + j] = fq.add(&out[i + j], &fq.mul(a, b));
        }
    }
    fq_poly_normalize(fq, out)
}

pub fn fq_poly_rem(fq: &FqCtx, f: &FqPoly, g: &FqPoly) -> FqPoly {
    let g = fq_poly_normalize(fq, g.clone());
    let dg = fq_poly_deg(&g).expect("division by zero polynomial");
    let lead_inv = fq.inv(&g[dg]);
    let mut r = fq_poly_normalize(fq, f.clone());
    while let Some(dr) = fq_poly_deg(&r) {
        if dr < dg {
            break;
        }
        let c = fq.mul(&r[dr], &lead_inv);
        for j in 0..=dg {
            let t = fq.mul(&c, &g[j]);
            r[dr - dg + j] = fq.sub(&r[dr - dg + j], &t);
        }
        r = fq_poly_normalize(fq, r);
    }
    r
}

pub fn fq_poly_gcd(fq: &FqCtx, f: &FqPoly, g: &FqPoly) -> FqPoly {
    let mut a = fq_poly_normalize(fq, f.clone());
    let mut b = fq_poly_normalize(fq, g.clone());
    while !b.is_empty() {
        let r = fq_poly_rem(fq, &a, &b);
        a = b;
        b = r;
    }
    // monic normalization
    if let Some(da) = fq_poly_deg(&a) {
        let li = fq.inv(&a[da]);
        a = a.iter().map(|c| fq.mul(c, &li)).collect();
    }
    a
}

/// x^e modulo f, by repeated squaring in F_q[x]/(f).
pub fn fq_x_pow_mod(fq: &FqCtx, mut e: u128, f: &FqPoly) -> FqPoly {
    let mut base = fq_poly_normalize(fq, vec![fq.zero(), fq.one()]);
    base = fq_poly_rem(fq, &base, f);
    let mut acc = vec![fq.one()];
    while e > 0 {
        if e & 1 == 1 {
            acc = fq_poly_rem(fq, &fq_poly_mul(fq, &acc, &base), f);
        }
        base = fq_poly_rem(fq, &fq_poly_mul(fq, &base, &base), f);
        e >>= 1;
    }
    acc
}

pub fn fq_poly_eval(fq: &FqCtx, f: &FqPoly, x: &FqEl) -> FqEl {
    let mut acc = fq.zero();
    for c in f.iter().rev() {
        acc = fq.add(&fq.mul(&acc, x), c);
    }
    acc
}

/// All roots of f in F_q, by splitting off the q-th power Frobenius fixed
/// part and then Cantor-Zassenhaus equal-degree splitting (q odd).
pub fn fq_poly_roots(fq: &FqCtx, f: &FqPoly) -> Vec<FqEl> {
    let f = fq_poly_normalize(fq, f.clone());
    let Some(df) = fq_poly_deg(&f) else {
        panic!("root finding on the zero polynomial");
    };
    if df == 0 {
        return vec![];
    }
    // gcd(x^q - x, f) collects exactly the roots in F_q
    let xq = fq_x_pow_mod(fq, fq.order(), &f);
    let mut xq_minus_x = xq;
    if xq_minus_x.len() < 2 {
        xq_minus_x.resize(2, fq.zero());
    }
    xq_minus_x[1] = fq.sub(&xq_minus_x[1], &fq.one());
    let split = fq_poly_gcd(fq, &fq_poly_normalize(fq, xq_minus_x), &f);
    let mut roots = vec![];
    let mut seed = 0x9e3779b97f4a7c15u64;
    split_linear(fq, &split, &mut roots, &mut seed);
    roots
}

fn split_linear(fq: &FqCtx, f: &FqPoly, out: &mut Vec<FqEl>, seed: &mut u64) {
    match fq_poly_deg(f) {
        None | Some(0) => {}
        Some(1) => {
            // monic x + c ↦ root -c
            let li = fq.inv(&f[1]);
            out.push(fq.neg(&fq.mul(&f[0], &li)));
        }
        Some(_) => {
            // random shift a, then gcd with (x+a)^((q-1)/2) - 1
            loop {
                *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = fq.element((*seed >> 16) as u128 % fq.order());
                let shifted = vec![a, fq.one()];
                let pow = poly_pow_mod(fq, &shifted, (fq.order() - 1) / 2, f);
                let mut pm1 = pow;
                if pm1.is_empty() {
                    pm1 = vec![fq.zero()];
                }
                pm1[0] = fq.sub(&pm1[0], &fq.one());
                let g = fq_poly_gcd(fq, &fq_poly_normalize(fq, pm1), f);
                if let Some(dg) = fq_poly_deg(&g) {
                    if dg > 0 && dg < fq_poly_deg(f).unwrap() {
                        let h = fq_poly_divide(fq, f, &g);
                        split_linear(fq, &g, out, seed);
                        split_linear(fq, &h, out, seed);
                        return;
                    }
                }
            }
        }
    }
}

fn poly_pow_mod(fq: &FqCtx, base: &FqPoly, mut e: u128, m: &FqPoly) -> FqPoly {
    let mut b = fq_poly_rem(fq, base, m);
    let mut acc = vec![fq.one()];
    while e > 0 {
        if e & 1 == 1 {
            acc = fq_poly_rem(fq, &fq_poly_mul(fq, &acc, &b), m);
        }
        b = fq_poly_rem(fq, &fq_poly_mul(fq, &b, &b), m);
        e >>= 1;
    }
    acc
}

fn fq_poly_divide(fq: &FqCtx, f: &FqPoly, g: &FqPoly) -> FqPoly {
    // exact quotient (used only when g | f)
    let g = fq_poly_normalize(fq, g.clone());
    let dg = fq_poly_deg(&g).unwrap();
    let lead_inv = fq.inv(&g[dg]);
    let mut r = fq_poly_normalize(fq, f.clone());
    let mut q = vec![fq.zero(); r.len().saturating_sub(dg)];
    while let Some(dr) = fq_poly_deg(&r) {
        if dr < dg {
            break;
        }
        let c = fq.mul(&r[dr], &lead_inv);
        q[dr - dg] = c.clone();
        for j in 0..=dg {
            let t = fq.mul(&c, &g[j]);
            r[dr - dg + j] = fq.sub(&r[dr - dg + j], &t);
        }
        r = fq_poly_normalize(fq, r);
    }
    fq_poly_normalize(fq, q)
}

// ---------------------------------------------------------------------------
// Hensel root lifting over the truncated ring.
// ---------------------------------------------------------------------------

/// Polynomials over the ring, lowest degree first.
pub type RingPoly = Vec<RingEl>;

pub fn ring_poly_eval(ctx: &UnramCtx, f: &RingPoly, x: &RingEl) -> RingEl {
    let mut acc = ctx.zero();
    for c in f.iter().rev() {
        acc = ctx.add(&ctx.mul(&acc, x), c);
    }
    acc
}

pub fn ring_poly_derivative(ctx: &UnramCtx, f: &RingPoly) -> RingPoly {
    f.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| ctx.scalar_mul(c, i as u64))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootOutcome {
    /// At least one root exists in the ring of integers; a witness is
    /// returned at the precision it is known.
    Exists(RingEl),
    /// No root exists.
    None,
    /// Precision exhausted before the branching resolved.
    Undecided,
}

/// Decide whether f has a root x in O_K (the unramified extension described
/// by ctx) satisfying an extra predicate on the root.  Branches on multiple
/// residue roots in the classical Hensel/Newton-polygon style, dividing out
/// powers of p after each substitution x = r + p·x'.
pub fn ring_root_exists<P: Fn(&RingEl) -> Option<bool>>(
    ctx: &UnramCtx,
    f: &RingPoly,
    accept: &P,
) -> RootOutcome {
    let mut undecided = false;
    let mut stack = vec![(f.clone(), ctx.zero(), ctx.one(), ctx.n)];
    // each frame: (polynomial, offset, scale, remaining precision);
    // a root x' of the polynomial corresponds to offset + scale·x'
    while let Some((poly, off, scale, prec)) = stack.pop() {
        if prec == 0 {
            undecided = true;
            continue;
        }
        let fq = ctx.residue_field();
        let reduced: FqPoly =
            fq_poly_normalize(&fq, poly.iter().map(|c| ctx.reduce_mod_p(c)).collect());
        if reduced.is_empty() {
            // polynomial vanishes mod p entirely: divide out p and retry
            let v = poly
                .iter()
                .filter_map(|c| ctx.val(c))
                .min();
            let Some(v) = v else {
                // identically zero at this precision: every residue value is a
                // candidate root, but we cannot certify one
                undecided = true;
                continue;
            };
            let shifted: RingPoly = poly.iter().map(|c| ctx.shift_down(c, v)).collect();
            if v >= prec {
                undecided = true;
                continue;
            }
            stack.push((shifted, off, scale, prec - v));
            continue;
        }
        if fq_poly_deg(&reduced) == Some(0) {
            continue; // unit constant: no roots in this branch
        }
        let dpoly = ring_poly_derivative(ctx, &poly);
        for rbar in fq_poly_roots(&fq, &reduced) {
            let r0 = ctx.lift(&rbar);
            if ctx.is_unit(&ring_poly_eval(ctx, &dpoly, &r0)) {
                // simple root: Newton-lift to full working precision
                let mut x = r0;
                for _ in 0..ctx.n {
                    let fx = ring_poly_eval(ctx, &poly, &x);
                    let dfx = ring_poly_eval(ctx, &dpoly, &x);
                    x = ctx.sub(&x, &ctx.mul(&fx, &ctx.inv(&dfx)));
                }
                let root = ctx.add(&off, &ctx.mul(&scale, &x));
                match accept(&root) {
                    Some(true) => return RootOutcome::Exists(root),
                    Some(false) => {}
                    None => undecided = true,
                }
            } else {
                // multiple residue root: substitute x = r + p·x' and recurse
                let sub = substitute_shift_scale(ctx, &poly, &r0);
                let v = sub.iter().filter_map(|c| ctx.val(c)).min().unwrap_or(ctx.n);
                if v >= prec {
                    undecided = true;
                    continue;
                }
                let shifted: RingPoly = sub.iter().map(|c| ctx.shift_down(c, v)).collect();
                let new_off = ctx.add(&off, &ctx.mul(&scale, &r0));
                let new_scale = ctx.scalar_mul(&scale, ctx.p);
                stack.push((shifted, new_off, new_scale, prec - v.max(1)));
            }
        }
    }
    if undecided {
        RootOutcome::Undecided
    } else {
        RootOutcome::None
    }
}

/// Coefficients of f(r + p·x) as a polynomial in x.
fn substitute_shift_scale(ctx: &UnramCtx, f: &RingPoly, r: &RingEl) -> RingPoly {
    let deg = f.len().saturating_sub(1);
    let mut out = vec![ctx.zero(); f.len()];
    // Horner on the composition: acc(x) ← acc(x)·(r + p·x) + c
    for c in f.iter().rev() {
        // multiply accumulator polynomial by (r + p·x)
        let mut next = vec![ctx.zero(); deg + 1];
        for i in 0..deg + 1 {
            if ctx.is_zero(&out[i]) {
                continue;
            }
            next[i] = ctx.add(&next[i], &ctx.mul(&out[i], r));
            if i + 1 <= deg {
                next[i + 1] = ctx.add(&next[i + 1], &ctx.scalar_mul(&out[i], ctx.p));
            }
        }
        next[0] = ctx.add(&next[0], c);
        out = next;
    }
    out
}

/// Legendre-style square test in Z/p^N: nonzero a is a square in Z_p iff
/// v_p(a) is even and the unit part is a quadratic residue mod p.
pub fn zp_is_square(p: u64, pn: u64, a: u64) -> Option<bool> {
    if a % pn == 0 {
        return None;
    }
    let mut u = a % pn;
    let mut v = 0u32;
    while u % p == 0 {
        u /= p;
        v += 1;
    }
    if v % 2 == 1 {
        return Some(false);
    }
    Some(mod_pow(u % p, (p - 1) / 2, p) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic_f27() {
        let ctx = UnramCtx::degree_p(3, 6);
        let fq = ctx.residue_field();
        assert_eq!(fq.order(), 27);
        // every nonzero element has order dividing 26 and an inverse
        for idx in 1..27u128 {
            let a = fq.element(idx);
            assert_eq!(fq.pow(&a, 26), fq.one());
            assert_eq!(fq.mul(&a, &fq.inv(&a)), fq.one());
        }
    }

    #[test]
    fn roots_over_f27() {
        let ctx = UnramCtx::degree_p(3, 6);
        let fq = ctx.residue_field();
        // x^27 - x splits completely: all 27 elements are roots of x^3 - x - 1's
        // splitting behaviour aside, test a product of known linear factors.
        // f = (x - t)(x - (t+1))(x - 2)
        let t = fq.element(3); // the generator t
        let t1 = fq.add(&t, &fq.one());
        let two = fq.element(2);
        let lin = |r: &FqEl| vec![fq.neg(r), fq.one()];
        let f = fq_poly_mul(&fq, &fq_poly_mul(&fq, &lin(&t), &lin(&t1)), &lin(&two));
        let mut roots = fq_poly_roots(&fq, &f);
        roots.sort();
        let mut expect = vec![t, t1, two];
        expect.sort();
        assert_eq!(roots, expect);
        // the Artin-Schreier modulus itself has no roots in F_3 but three in F_27
        let g: FqPoly = vec![
            fq.neg(&fq.one()),
            fq.neg(&fq.one()),
            fq.zero(),
            fq.one(),
        ];
        assert_eq!(fq_poly_roots(&fq, &g).len(), 3);
    }

    #[test]
    fn ring_inverse_and_square() {
        let ctx = UnramCtx::degree_p(3, 6);
        let mut a = ctx.gen();
        a = ctx.add(&a, &ctx.from_u64(5));
        let inv = ctx.inv(&a);
        assert_eq!(ctx.mul(&a, &inv), ctx.one());
        // squares are recognized
        let sq = ctx.mul(&a, &a);
        assert_eq!(ctx.is_square(&sq), Some(true));
        let nine_sq = ctx.scalar_mul(&sq, 9);
        assert_eq!(ctx.is_square(&nine_sq), Some(true));
        let three_sq = ctx.scalar_mul(&sq, 3);
        assert_eq!(ctx.is_square(&three_sq), Some(false));
    }

    #[test]
    fn hensel_simple_and_branching() {
        let ctx = UnramCtx::degree_p(3, 8);
        // f(x) = x^2 - 7: 7 ≡ 1 mod 3 is a square in Z_3
        let f: RingPoly = vec![
            ctx.sub(&ctx.zero(), &ctx.from_u64(7)),
            ctx.zero(),
            ctx.one(),
        ];
        let always = |_: &RingEl| Some(true);
        match ring_root_exists(&ctx, &f, &always) {
            RootOutcome::Exists(r) => {
                let sq = ctx.mul(&r, &r);
                assert_eq!(sq, ctx.from_u64(7));
            }
            other => panic!("expected a root of x^2-7, got {other:?}"),
        }
        // f(x) = x^2 - 3 has no root in the unramified extension (odd valuation)
        let g: RingPoly = vec![
            ctx.sub(&ctx.zero(), &ctx.from_u64(3)),
            ctx.zero(),
            ctx.one(),
        ];
        assert_eq!(ring_root_exists(&ctx, &g, &always), RootOutcome::None);
        // f(x) = x^2 - 9 needs one branch at the double residue root 0
        let h: RingPoly = vec![
            ctx.sub(&ctx.zero(), &ctx.from_u64(9)),
            ctx.zero(),
            ctx.one(),
        ];
        match ring_root_exists(&ctx, &h, &always) {
            RootOutcome::Exists(r) => assert_eq!(ctx.mul(&r, &r), ctx.from_u64(9)),
            other => panic!("expected a root of x^2-9, got {other:?}"),
        }
        // x^2 - t has a root iff t is a square in F_27; t = g^k with the
        // squareness decided by the is_square helper, so just check consistency
        let t = ctx.gen();
        let k: RingPoly = vec![ctx.sub(&ctx.zero(), &t), ctx.zero(), ctx.one()];
        let got = ring_root_exists(&ctx, &k, &always);
        match ctx.is_square(&ctx.gen()) {
            Some(true) => assert!(matches!(got, RootOutcome::Exists(_))),
            Some(false) => assert_eq!(got, RootOutcome::None),
            None => unreachable!(),
        }
    }

    #[test]
    fn zp_square_recognition() {
        let pn = 3u64.pow(8);
        assert_eq!(zp_is_square(3, pn, 7), Some(true));
        assert_eq!(zp_is_square(3, pn, 5), Some(false));
        assert_eq!(zp_is_square(3, pn, 9 * 7), Some(true));
        assert_eq!(zp_is_square(3, pn, 3), Some(false));
        assert_eq!(zp_is_square(3, pn, 0), None);
    }
}
