//! Splitting data (e, f, g) of rational primes in the cyclic degree-p and
//! dihedral degree-2p fields under study. Cyclic fields are described by a
//! conductor (and optionally an explicit character), dihedral ones by a
//! defining polynomial of the degree-p field together with the fundamental
//! discriminant of the quadratic subfield.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fp::mod_pow;
use crate::polyfp;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("bad conductor: {0}")]
    BadConductor(String),
    #[error("prime {0} ramifies but is not in the ramified-prime table")]
    RamifiedNotTabulated(u64),
    #[error("defining polynomial is not irreducible (or could not be certified)")]
    NotIrreducible,
}

/// Degree-p cyclic field of conductor m inside Q(zeta_m). When no explicit
/// character is given, (Z/m)^x must be cyclic and the canonical surjection
/// onto Z/p is used.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CyclicFieldSpec {
    pub p: u64,
    pub conductor: u64,
    /// explicit character: unit residue mod m -> Z/p
    #[serde(default)]
    pub character: Option<BTreeMap<u64, u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamifiedEntry {
    pub ell: u64,
    pub e: u64,
    pub f: u64,
    pub g: u64,
}

/// Dihedral degree-2p field K = LF: L of degree p given by a monic
/// integral defining polynomial, F the quadratic field of fundamental
/// discriminant `disc_f`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DihedralFieldSpec {
    pub p: u64,
    /// coefficients low-to-high, leading coefficient 1
    pub poly: Vec<i64>,
    pub disc_f: i64,
    /// (e, f, g) in K/Q for primes dividing disc(poly) where the reduced
    /// polynomial does not determine them
    #[serde(default)]
    pub ramified_table: Vec<RamifiedEntry>,
    /// skip the irreducibility certificate
    #[serde(default)]
    pub assume_irreducible: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingData {
    pub e: u64,
    pub f: u64,
    pub g: u64,
}

/// Splitting of a rational prime in the dihedral field, both over Q and
/// (for each place of F above it) over F.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DihedralSplitting {
    pub over_q: SplittingData,
    pub over_f: SplittingData,
    /// Kronecker symbol (disc_f / ell): +1 split, -1 inert, 0 ramified in F
    pub f_symbol: i32,
}

fn euler_phi(mut m: u64) -> u64 {
    let mut phi = 1u64;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            let mut pk = 1;
            while m % d == 0 {
                m /= d;
                pk *= d;
            }
            phi *= pk - pk / d;
        }
        d += 1;
    }
    if m > 1 {
        phi *= m - 1;
    }
    phi
}

pub fn cyclic_splitting(spec: &CyclicFieldSpec, ell: u64) -> Result<SplittingData, FieldError> {
    let p = spec.p;
    let m = spec.conductor;
    let phi = euler_phi(m);
    if phi % p != 0 {
        return Err(FieldError::BadConductor(format!(
            "no degree-{p} quotient of the unit group mod {m}"
        )));
    }
    if m % ell == 0 {
        // conductor minimality: every prime dividing m ramifies
        return Ok(SplittingData { e: p, f: 1, g: 1 });
    }
    let trivial = match &spec.character {
        Some(chi) => {
            let r = ell % m;
            let v = chi.get(&r).ok_or_else(|| {
                FieldError::BadConductor(format!("character table missing residue {r}"))
            })?;
            v % p == 0
        }
        None => mod_pow(ell % m, phi / p, m) == 1,
    };
    if trivial {
        Ok(SplittingData { e: 1, f: 1, g: p })
    } else {
        Ok(SplittingData { e: 1, f: p, g: 1 })
    }
}

/// Kronecker symbol (a / n) for n > 0.
pub fn kronecker(mut a: i64, mut n: u64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut res = 1i32;
    // factor out 2s of n
    while n % 2 == 0 {
        n /= 2;
        if a % 2 == 0 {
            return 0;
        }
        let r = a.rem_euclid(8);
        if r == 3 || r == 5 {
            res = -res;
        }
    }
    a = a.rem_euclid(n as i64);
    let mut num = a as u64;
    // now (num / n) with n odd positive, via quadratic reciprocity
    while num != 0 {
        while num % 2 == 0 {
            num /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                res = -res;
            }
        }
        std::mem::swap(&mut num, &mut n);
        if num % 4 == 3 && n % 4 == 3 {
            res = -res;
        }
        num %= n;
    }
    if n == 1 {
        res
    } else {
        0
    }
}

fn reduce_poly(poly: &[i64], ell: u64) -> Vec<u64> {
    polyfp::normalize(
        poly.iter()
            .map(|&c| c.rem_euclid(ell as i64) as u64)
            .collect(),
    )
}

fn certify_irreducible(spec: &DihedralFieldSpec) -> Result<(), FieldError> {
    if spec.assume_irreducible {
        return Ok(());
    }
    // irreducible mod some prime of good reduction => irreducible over Q
    let mut ell = 2u64;
    let mut tried = 0;
    while tried < 25 {
        if is_prime_u64(ell) {
            let f = reduce_poly(&spec.poly, ell);
            if polyfp::deg(&f) == Some(spec.p as usize) {
                let pat = polyfp::factor_degree_pattern(&f, ell);
                if pat == vec![spec.p as usize] {
                    return Ok(());
                }
            }
            tried += 1;
        }
        ell += 1;
    }
    Err(FieldError::NotIrreducible)
}

fn is_prime_u64(n: u64) -> bool {
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

fn poly_disc_cubic(poly: &[i64]) -> i64 {
    // monic cubic x^3 + a x^2 + b x + c
    assert_eq!(poly.len(), 4);
    assert_eq!(poly[3], 1);
    let (c, b, a) = (poly[0] as i128, poly[1] as i128, poly[2] as i128);
    let d = 18 * a * b * c - 4 * a * a * a * c + a * a * b * b - 4 * b * b * b - 27 * c * c;
    i64::try_from(d).expect("discriminant overflow")
}

/// Discriminant of the defining polynomial (used only to detect candidate
/// ramified primes; currently cubics, the only degree exercised here).
pub fn poly_disc(poly: &[i64]) -> i64 {
    poly_disc_cubic(poly)
}

pub fn dihedral_splitting(
    spec: &DihedralFieldSpec,
    ell: u64,
) -> Result<DihedralSplitting, FieldError> {
    certify_irreducible(spec)?;
    let p = spec.p;
    let sym = kronecker(spec.disc_f, ell);
    let disc = poly_disc(&spec.poly);
    let ramified_in_l = disc.unsigned_abs() % ell == 0;
    if ramified_in_l || sym == 0 {
        // consult the table for primes dividing disc(poly); a prime
        // ramified only in F is handled uniformly below
        if let Some(entry) = spec.ramified_table.iter().find(|en| en.ell == ell) {
            let over_q = SplittingData { e: entry.e, f: entry.f, g: entry.g };
            let over_f = dihedral_over_f(p, over_q, sym);
            return Ok(DihedralSplitting { over_q, over_f, f_symbol: sym });
        }
        if ramified_in_l {
            return Err(FieldError::RamifiedNotTabulated(ell));
        }
        // ramified in F only: e = 2 throughout, unramified of degree p on top
        let fpat = reduce_poly(&spec.poly, ell);
        let pat = polyfp::factor_degree_pattern(&fpat, ell);
        let f = *pat.iter().max().unwrap() as u64;
        let over_q = SplittingData { e: 2, f, g: p / f };
        let over_f = SplittingData { e: 1, f, g: p / f };
        return Ok(DihedralSplitting { over_q, over_f, f_symbol: 0 });
    }
    // unramified: Frobenius cycle type on the p roots
    let fpat = reduce_poly(&spec.poly, ell);
    let mut pat = polyfp::factor_degree_pattern(&fpat, ell);
    pat.sort_unstable();
    let over_q;
    let over_f;
    if pat.iter().all(|&d| d == 1) {
        // trivial Frobenius: split completely
        over_q = SplittingData { e: 1, f: 1, g: 2 * p };
        over_f = SplittingData { e: 1, f: 1, g: p };
        debug_assert_eq!(sym, 1);
    } else if pat == vec![p as usize] {
        // rotation class: f = p, and ell splits in F
        over_q = SplittingData { e: 1, f: p, g: 2 };
        over_f = SplittingData { e: 1, f: p, g: 1 };
        debug_assert_eq!(sym, 1);
    } else {
        // reflection class: one fixed root, (p-1)/2 two-cycles
        let mut expect: Vec<usize> = vec![1];
        expect.extend(std::iter::repeat(2).take(((p - 1) / 2) as usize));
        if pat != expect {
            return Err(FieldError::NotIrreducible);
        }
        over_q = SplittingData { e: 1, f: 2, g: p };
        // ell inert in F; the place of F splits completely in K/F
        over_f = SplittingData { e: 1, f: 1, g: p };
        debug_assert_eq!(sym, -1);
    }
    Ok(DihedralSplitting { over_q, over_f, f_symbol: sym })
}

fn dihedral_over_f(_p: u64, over_q: SplittingData, sym: i32) -> SplittingData {
    // K/F is cyclic of degree p; a tabulated (e,f,g) over Q together with
    // the behaviour in F determines the place data of K/F
    if sym == 0 {
        // F ramified: the e = 2 part lives in F/Q
        SplittingData { e: over_q.e / 2, f: over_q.f, g: over_q.g }
    } else if sym == 1 {
        // both places of F see the same splitting with the F-part removed
        SplittingData { e: over_q.e, f: over_q.f, g: over_q.g / 2 }
    } else {
        // inert: single place of F, f halves
        SplittingData { e: over_q.e, f: over_q.f / 2, g: over_q.g }
    }
}

/// The set S of primes ramified in K/Q.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum FieldSpec {
    Cyclic(CyclicFieldSpec),
    Dihedral(DihedralFieldSpec),
}

pub fn ramified_set(spec: &FieldSpec) -> Vec<u64> {
    match spec {
        FieldSpec::Cyclic(c) => prime_divisors(c.conductor),
        FieldSpec::Dihedral(d) => {
            let mut s = prime_divisors(d.disc_f.unsigned_abs());
            for ell in prime_divisors(poly_disc(&d.poly).unsigned_abs()) {
                let tabulated = d.ramified_table.iter().any(|en| en.ell == ell && en.e > 1);
                if tabulated && !s.contains(&ell) {
                    s.push(ell);
                }
            }
            s.sort_unstable();
            s
        }
    }
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Simple prime sieve (used by the density property test and callers).
pub fn primes_below(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut s = vec![true; n];
    if n > 0 {
        s[0] = false;
    }
    if n > 1 {
        s[1] = false;
    }
    let mut i = 2usize;
    while i * i < n {
        if s[i] {
            let mut j = i * i;
            while j < n {
                s[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..n).filter(|&i| s[i]).map(|i| i as u64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m29p7() -> CyclicFieldSpec {
        CyclicFieldSpec { p: 7, conductor: 29, character: None }
    }

    fn dihedral35() -> DihedralFieldSpec {
        DihedralFieldSpec {
            p: 3,
            poly: vec![-2, 2, 0, 1],
            disc_f: -35,
            ramified_table: vec![
                RamifiedEntry { ell: 2, e: 3, f: 2, g: 1 },
                RamifiedEntry { ell: 5, e: 2, f: 1, g: 3 },
                RamifiedEntry { ell: 7, e: 2, f: 1, g: 3 },
            ],
            assume_irreducible: false,
        }
    }

    #[test]
    fn cyclic_conductor_29() {
        let s = m29p7();
        assert_eq!(
            cyclic_splitting(&s, 29).unwrap(),
            SplittingData { e: 7, f: 1, g: 1 }
        );
        // 3^4 = 81 ≡ 23 mod 29: inert
        assert_eq!(
            cyclic_splitting(&s, 3).unwrap(),
            SplittingData { e: 1, f: 7, g: 1 }
        );
        // 17^4 = 83521 = 29 * 2880 + 1: split
        assert_eq!(
            cyclic_splitting(&s, 17).unwrap(),
            SplittingData { e: 1, f: 1, g: 7 }
        );
    }

    #[test]
    fn cyclic_conductor_9() {
        let s = CyclicFieldSpec { p: 3, conductor: 9, character: None };
        assert_eq!(
            cyclic_splitting(&s, 3).unwrap(),
            SplittingData { e: 3, f: 1, g: 1 }
        );
        // 17 ≡ -1 mod 9 is in the kernel (order 2): split
        assert_eq!(cyclic_splitting(&s, 17).unwrap().g, 3);
        // 7^2 = 49 ≡ 4 mod 9: inert
        assert_eq!(cyclic_splitting(&s, 7).unwrap().f, 3);
        assert_eq!(ramified_set(&FieldSpec::Cyclic(s)), vec![3]);
    }

    #[test]
    fn dihedral_field_splittings() {
        let s = dihedral35();
        // x^3 + 2x - 2 irreducible mod 3: residue degree 3
        let d3 = dihedral_splitting(&s, 3).unwrap();
        assert_eq!(d3.over_q, SplittingData { e: 1, f: 3, g: 2 });
        assert_eq!(d3.over_f, SplittingData { e: 1, f: 3, g: 1 });
        // tabulated prime above 2: unique, e = 3 (so f = 2, g = 1)
        let d2 = dihedral_splitting(&s, 2).unwrap();
        assert_eq!(d2.over_q, SplittingData { e: 3, f: 2, g: 1 });
        // 5 ramifies in F: three primes of K with e = 2
        let d5 = dihedral_splitting(&s, 5).unwrap();
        assert_eq!(d5.over_q, SplittingData { e: 2, f: 1, g: 3 });
        assert_eq!(d5.f_symbol, 0);
        // 19: reflection class (one root + one quadratic factor mod 19)
        let d19 = dihedral_splitting(&s, 19).unwrap();
        assert_eq!(d19.over_q, SplittingData { e: 1, f: 2, g: 3 });
        assert_eq!(d19.over_f, SplittingData { e: 1, f: 1, g: 3 });
        assert_eq!(d19.f_symbol, -1);
        // ramified set per the table and disc_f
        assert_eq!(
            ramified_set(&FieldSpec::Dihedral(s)),
            vec![2, 5, 7]
        );
    }

    #[test]
    fn dihedral_frobenius_matches_quadratic_symbol() {
        // split in F (symbol +1) ⟺ Frobenius is a rotation or trivial
        let s = dihedral35();
        for ell in primes_below(500) {
            if 140 % ell == 0 {
                continue;
            }
            let d = dihedral_splitting(&s, ell).unwrap();
            assert_eq!(d.over_q.e * d.over_q.f * d.over_q.g, 6, "efg at {ell}");
            let rotation_like = d.over_q.f != 2;
            assert_eq!(d.f_symbol == 1, rotation_like, "at {ell}");
        }
    }

    #[test]
    fn split_density_matches_degree() {
        // in the conductor-29 degree-7 field the split proportion over
        // primes below 10^4 should be 1/7 up to 3 sigma
        let s = m29p7();
        let primes: Vec<u64> = primes_below(10_000).into_iter().filter(|&l| l != 29).collect();
        let n = primes.len() as f64;
        let split = primes
            .iter()
            .filter(|&&l| cyclic_splitting(&s, l).unwrap().g == 7)
            .count() as f64;
        let expect = n / 7.0;
        let sigma = (n * (1.0 / 7.0) * (6.0 / 7.0)).sqrt();
        assert!(
            (split - expect).abs() <= 3.0 * sigma,
            "split {split} of {n}, expected {expect} ± {sigma}"
        );
    }

    #[test]
    fn kronecker_matches_legendre() {
        for &p in &[3u64, 5, 7, 11, 13, 37] {
            for a in -20i64..20 {
                let k = kronecker(a, p);
                let l = if a.rem_euclid(p as i64) == 0 {
                    0
                } else if mod_pow(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p) == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(k, l, "({a}/{p})");
            }
        }
        // (2/n) via the second supplement
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(2, 5), -1);
        // -35 ≡ 5 mod 8: the prime 2 is inert in Q(sqrt(-35))
        assert_eq!(kronecker(-35, 2), -1);
    }
}
