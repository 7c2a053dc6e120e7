//! Arithmetic in F_ell and F_{ell^2}, reduced Weierstrass curves over
//! these fields, point counting, and p-part group structure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fp::mod_pow;

/// Field context: degree 1 is F_ell; degree 2 is F_ell[t]/(t^2 - nr) for
/// odd ell (nr the smallest non-residue) and F_2[t]/(t^2 + t + 1) for
/// ell = 2. Elements are coefficient pairs (c0, c1) = c0 + c1 t.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FqCtx {
    pub ell: u64,
    pub deg: u32,
    pub nr: u64,
}

pub type FqEl = (u64, u64);

impl FqCtx {
    pub fn prime(ell: u64) -> FqCtx {
        FqCtx { ell, deg: 1, nr: 0 }
    }

    pub fn quadratic(ell: u64) -> FqCtx {
        if ell == 2 {
            return FqCtx { ell, deg: 2, nr: 1 }; // t^2 = t + 1
        }
        let nr = (2..ell)
            .find(|&a| mod_pow(a, (ell - 1) / 2, ell) == ell - 1)
            .expect("non-residue exists for odd ell");
        FqCtx { ell, deg: 2, nr }
    }

    pub fn order(&self) -> u64 {
        self.ell.pow(self.deg)
    }

    pub fn zero(&self) -> FqEl {
        (0, 0)
    }

    pub fn one(&self) -> FqEl {
        (1, 0)
    }

    pub fn from_u64(&self, a: u64) -> FqEl {
        (a % self.ell, 0)
    }

    pub fn from_i64(&self, a: i64) -> FqEl {
        (a.rem_euclid(self.ell as i64) as u64, 0)
    }

    pub fn gen(&self) -> FqEl {
        assert_eq!(self.deg, 2);
        (0, 1)
    }

    pub fn add(&self, a: FqEl, b: FqEl) -> FqEl {
        ((a.0 + b.0) % self.ell, (a.1 + b.1) % self.ell)
    }

    pub fn sub(&self, a: FqEl, b: FqEl) -> FqEl {
        (
            (a.0 + self.ell - b.0) % self.ell,
            (a.1 + self.ell - b.1) % self.ell,
        )
    }

    pub fn neg(&self, a: FqEl) -> FqEl {
        self.sub(self.zero(), a)
    }

    pub fn mul(&self, a: FqEl, b: FqEl) -> FqEl {
        let ell = self.ell as u128;
        let (a0, a1, b0, b1) = (a.0 as u128, a.1 as u128, b.0 as u128, b.1 as u128);
        if self.deg == 1 {
            return ((a0 * b0 % ell) as u64, 0);
        }
        let cross = (a0 * b1 + a1 * b0) % ell;
        if self.ell == 2 {
            // t^2 = t + 1
            let tt = a1 * b1 % ell;
            (((a0 * b0 + tt) % ell) as u64, ((cross + tt) % ell) as u64)
        } else {
            // t^2 = nr
            let c0 = (a0 * b0 + a1 * b1 % ell * self.nr as u128) % ell;
            (c0 as u64, cross as u64)
        }
    }

    pub fn pow(&self, mut a: FqEl, mut e: u128) -> FqEl {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FqEl) -> FqEl {
        assert!(a != self.zero(), "inverting zero");
        self.pow(a, self.order() as u128 - 2)
    }

    pub fn is_zero(&self, a: FqEl) -> bool {
        a == (0, 0)
    }

    /// Frobenius x -> x^ell (identity on F_ell).
    pub fn frobenius(&self, a: FqEl) -> FqEl {
        self.pow(a, self.ell as u128)
    }

    /// Square roots of a (0, 1, or 2 of them; returns one representative
    /// if any exist).
    pub fn sqrt(&self, a: FqEl) -> Option<FqEl> {
        if self.is_zero(a) {
            return Some(a);
        }
        let q = self.order();
        if self.ell == 2 {
            // squaring is bijective in characteristic 2
            return Some(self.pow(a, (q / 2) as u128));
        }
        if self.pow(a, ((q - 1) / 2) as u128) != self.one() {
            return None;
        }
        if q % 4 == 3 {
            return Some(self.pow(a, ((q + 1) / 4) as u128));
        }
        // Tonelli-Shanks in Fq
        let mut s = 0u32;
        let mut m = q - 1;
        while m % 2 == 0 {
            m /= 2;
            s += 1;
        }
        // find a non-square z (enumerate field elements)
        let mut k = 2u64;
        let z = loop {
            let cand: FqEl = if self.deg == 1 {
                (k % self.ell, 0)
            } else {
                (k % self.ell, (k / self.ell) % self.ell)
            };
            k += 1;
            if !self.is_zero(cand) && self.pow(cand, ((q - 1) / 2) as u128) != self.one() {
                break cand;
            }
        };
        let mut c = self.pow(z, m as u128);
        let mut t = self.pow(a, m as u128);
        let mut r = self.pow(a, ((m + 1) / 2) as u128);
        let mut e = s;
        while t != self.one() {
            let mut i = 0u32;
            let mut tt = t;
            while tt != self.one() {
                tt = self.mul(tt, tt);
                i += 1;
            }
            let b = self.pow(c, 1u128 << (e - i - 1));
            r = self.mul(r, b);
            c = self.mul(b, b);
            t = self.mul(t, c);
            e = i;
        }
        Some(r)
    }
}

/// Weierstrass curve with coefficients in Fq.
#[derive(Clone, Copy, Debug)]
pub struct FqCurve {
    pub ctx: FqCtx,
    pub a: [FqEl; 5], // a1, a2, a3, a4, a6
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FqPoint {
    Infinity,
    Affine(FqEl, FqEl),
}

impl FqCurve {
    fn a1(&self) -> FqEl {
        self.a[0]
    }
    fn a2(&self) -> FqEl {
        self.a[1]
    }
    fn a3(&self) -> FqEl {
        self.a[2]
    }
    fn a4(&self) -> FqEl {
        self.a[3]
    }
    fn a6(&self) -> FqEl {
        self.a[4]
    }

    pub fn is_on(&self, pt: FqPoint) -> bool {
        let f = self.ctx;
        match pt {
            FqPoint::Infinity => true,
            FqPoint::Affine(x, y) => {
                let lhs = f.add(
                    f.mul(y, y),
                    f.add(f.mul(f.mul(self.a1(), x), y), f.mul(self.a3(), y)),
                );
                let x2 = f.mul(x, x);
                let rhs = f.add(
                    f.mul(x2, x),
                    f.add(
                        f.mul(self.a2(), x2),
                        f.add(f.mul(self.a4(), x), self.a6()),
                    ),
                );
                lhs == rhs
            }
        }
    }

    pub fn neg(&self, pt: FqPoint) -> FqPoint {
        let f = self.ctx;
        match pt {
            FqPoint::Infinity => pt,
            FqPoint::Affine(x, y) => FqPoint::Affine(
                x,
                f.neg(f.add(y, f.add(f.mul(self.a1(), x), self.a3()))),
            ),
        }
    }

    pub fn add(&self, p: FqPoint, q: FqPoint) -> FqPoint {
        let f = self.ctx;
        let (x1, y1) = match p {
            FqPoint::Infinity => return q,
            FqPoint::Affine(x, y) => (x, y),
        };
        let (x2, y2) = match q {
            FqPoint::Infinity => return p,
            FqPoint::Affine(x, y) => (x, y),
        };
        let (lam, nu) = if x1 != x2 {
            let d = f.inv(f.sub(x2, x1));
            (
                f.mul(f.sub(y2, y1), d),
                f.mul(f.sub(f.mul(y1, x2), f.mul(y2, x1)), d),
            )
        } else {
            let denom = f.add(f.add(y1, y1), f.add(f.mul(self.a1(), x1), self.a3()));
            if f.is_zero(denom) || y1 != y2 {
                return FqPoint::Infinity;
            }
            let x1sq = f.mul(x1, x1);
            let num = f.add(
                f.add(f.add(x1sq, f.add(x1sq, x1sq)), f.add(f.mul(self.a2(), x1), f.mul(self.a2(), x1))),
                f.sub(self.a4(), f.mul(self.a1(), y1)),
            );
            let d = f.inv(denom);
            let lam = f.mul(num, d);
            let num2 = f.add(
                f.sub(
                    f.add(f.mul(self.a4(), x1), f.add(self.a6(), self.a6())),
                    f.mul(f.mul(x1, x1), x1),
                ),
                f.neg(f.mul(self.a3(), y1)),
            );
            (lam, f.mul(num2, d))
        };
        let x3 = f.sub(
            f.sub(f.add(f.mul(lam, lam), f.mul(self.a1(), lam)), self.a2()),
            f.add(x1, x2),
        );
        let y3 = f.neg(f.add(
            f.add(f.mul(f.add(lam, self.a1()), x3), nu),
            self.a3(),
        ));
        FqPoint::Affine(x3, y3)
    }

    pub fn mul_point(&self, mut n: u128, p: FqPoint) -> FqPoint {
        let mut acc = FqPoint::Infinity;
        let mut base = p;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn point_order(&self, p: FqPoint, group_order: u128) -> u128 {
        // order divides group_order; strip primes
        let mut ord = group_order;
        let mut n = group_order;
        let mut primes = Vec::new();
        let mut d = 2u128;
        while d * d <= n {
            if n % d == 0 {
                primes.push(d);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            primes.push(n);
        }
        for q in primes {
            while ord % q == 0 && self.mul_point(ord / q, p) == FqPoint::Infinity {
                ord /= q;
            }
        }
        ord
    }

    /// y-coordinates over the curve's field for a given x.
    pub fn lift_x(&self, x: FqEl) -> Vec<FqEl> {
        let f = self.ctx;
        // y^2 + h y = g with h = a1 x + a3, g = x^3 + a2 x^2 + a4 x + a6
        let h = f.add(f.mul(self.a1(), x), self.a3());
        let x2 = f.mul(x, x);
        let g = f.add(
            f.mul(x2, x),
            f.add(f.mul(self.a2(), x2), f.add(f.mul(self.a4(), x), self.a6())),
        );
        if f.ell == 2 {
            // enumerate (the field is tiny)
            let cands: Vec<FqEl> = if f.deg == 1 {
                vec![(0, 0), (1, 0)]
            } else {
                vec![(0, 0), (1, 0), (0, 1), (1, 1)]
            };
            return cands
                .into_iter()
                .filter(|&y| f.add(f.mul(y, y), f.mul(h, y)) == g)
                .collect();
        }
        // complete the square: (2y + h)^2 = 4g + h^2
        let two = f.from_u64(2);
        let disc = f.add(f.mul(f.mul(two, two), g), f.mul(h, h));
        match f.sqrt(disc) {
            None => vec![],
            Some(s) => {
                let inv2 = f.inv(two);
                let y1 = f.mul(f.sub(s, h), inv2);
                let y2 = f.mul(f.sub(f.neg(s), h), inv2);
                if y1 == y2 {
                    vec![y1]
                } else {
                    vec![y1, y2]
                }
            }
        }
    }
}

/// Number of points of the reduced curve over F_ell by direct summation
/// (requires good reduction and ell within the enumeration bound).
pub fn count_points_prime(c: &FqCurve) -> u64 {
    let f = c.ctx;
    assert_eq!(f.deg, 1);
    let mut n = 1u64; // infinity
    for x in 0..f.ell {
        n += c.lift_x((x, 0)).len() as u64;
    }
    n
}

/// #E(F_{ell^2}) from #E(F_ell) by the Frobenius relation.
pub fn count_points_quadratic(ell: u64, count_f1: u64) -> u64 {
    let a = ell as i128 + 1 - count_f1 as i128;
    (ell as i128 * ell as i128 + 1 - (a * a - 2 * ell as i128)) as u64
}

/// #E(F_{ell^n}) by the Lucas recursion on traces.
pub fn count_points_ext(ell: u64, count_f1: u64, n: u32) -> u128 {
    let a1 = ell as i128 + 1 - count_f1 as i128;
    let mut tm: i128 = 2; // trace of Frobenius^0
    let mut t = a1;
    for _ in 1..n {
        let next = a1 * t - ell as i128 * tm;
        tm = t;
        t = next;
    }
    let q = (ell as u128).pow(n);
    (q as i128 + 1 - t) as u128
}

/// Structure of the p-part of the curve's point group over its field:
/// Z/p^s + Z/p^t with s >= t, determined by randomized exponent sampling
/// (error probability < p^{-40}).
pub fn p_part_structure(c: &FqCurve, p: u64, order: u128) -> (u32, u32) {
    let mut k = 0u32;
    let mut n = order;
    while n % p as u128 == 0 {
        n /= p as u128;
        k += 1;
    }
    if k == 0 {
        return (0, 0);
    }
    // full p-torsion needs p | q - 1
    let f = c.ctx;
    let cofactor = n;
    let mut rng = ChaCha8Rng::seed_from_u64(0x70617274);
    let mut s = 0u32;
    let mut tries = 0u32;
    while tries < 40 + 8 * k {
        tries += 1;
        let x = if f.deg == 1 {
            (rng.gen_range(0..f.ell), 0)
        } else {
            (rng.gen_range(0..f.ell), rng.gen_range(0..f.ell))
        };
        for y in c.lift_x(x) {
            let q = c.mul_point(cofactor, FqPoint::Affine(x, y));
            let mut j = 0u32;
            let mut pt = q;
            while pt != FqPoint::Infinity {
                pt = c.mul_point(p as u128, pt);
                j += 1;
            }
            s = s.max(j);
        }
        if s == k {
            break;
        }
    }
    (s, k - s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_field_axioms() {
        let f = FqCtx::quadratic(2);
        let t = f.gen();
        // t^2 = t + 1; t^3 = 1
        assert_eq!(f.mul(t, t), f.add(t, f.one()));
        assert_eq!(f.pow(t, 3), f.one());
        assert_eq!(f.mul(t, f.inv(t)), f.one());
    }

    #[test]
    fn sqrt_in_f9() {
        let f = FqCtx::quadratic(3);
        for a0 in 0..3 {
            for a1 in 0..3 {
                let a = (a0, a1);
                if let Some(s) = f.sqrt(a) {
                    assert_eq!(f.mul(s, s), a);
                }
            }
        }
        // every element of F_9 has a square root or not; count squares = 5
        let squares = (0..3)
            .flat_map(|a0| (0..3).map(move |a1| (a0, a1)))
            .filter(|&a| f.sqrt(a).is_some())
            .count();
        assert_eq!(squares, 5);
    }

    #[test]
    fn count_small_curve() {
        // y^2 + y = x^3 - x over F_2 has 5 points
        let f = FqCtx::prime(2);
        let c = FqCurve {
            ctx: f,
            a: [f.zero(), f.zero(), f.one(), f.from_i64(-1), f.zero()],
        };
        assert_eq!(count_points_prime(&c), 5);
        assert_eq!(count_points_quadratic(2, 5), count_points_ext(2, 5, 2) as u64);
    }

    #[test]
    fn hasse_bound_random_curves() {
        for ell in [11u64, 101, 1009] {
            let f = FqCtx::prime(ell);
            let c = FqCurve {
                ctx: f,
                a: [f.zero(), f.zero(), f.zero(), f.one(), f.one()],
            };
            let n = count_points_prime(&c) as i128;
            let a = ell as i128 + 1 - n;
            assert!(a * a <= 4 * ell as i128, "Hasse violated at {ell}");
        }
    }

    #[test]
    fn group_law_holds() {
        let f = FqCtx::prime(13);
        let c = FqCurve {
            ctx: f,
            a: [f.one(), f.zero(), f.one(), f.from_i64(-1), f.zero()],
        };
        let n = count_points_prime(&c);
        // Lagrange: every point is killed by the group order
        for x in 0..13 {
            for y in c.lift_x((x, 0)) {
                let pt = FqPoint::Affine((x, 0), y);
                assert!(c.is_on(pt));
                assert_eq!(c.mul_point(n as u128, pt), FqPoint::Infinity);
            }
        }
    }
}
