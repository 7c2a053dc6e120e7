//! Dense univariate polynomials over F_ell (ell < 2^31), used for locating
//! singular points, counting roots in extensions, and splitting patterns of
//! defining polynomials.

/// Coefficients low-to-high, normalized (no trailing zeros).
pub type Poly = Vec<u64>;

pub fn normalize(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

pub fn deg(f: &Poly) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

pub fn add(f: &Poly, g: &Poly, ell: u64) -> Poly {
    let mut out = vec![0u64; f.len().max(g.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *o = (a + b) % ell;
    }
    normalize(out)
}

pub fn sub(f: &Poly, g: &Poly, ell: u64) -> Poly {
    let mut out = vec![0u64; f.len().max(g.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *o = (a + ell - b) % ell;
    }
    normalize(out)
}

pub fn mul(f: &Poly, g: &Poly, ell: u64) -> Poly {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if *a == 0 {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + *a as u128 * *b as u128) % ell as u128) as u64;
        }
    }
    normalize(out)
}

fn inv_mod(a: u64, ell: u64) -> u64 {
    crate::fp::mod_pow(a % ell, ell - 2, ell)
}

/// Remainder of f modulo g (g non-zero).
pub fn rem(f: &Poly, g: &Poly, ell: u64) -> Poly {
    let mut r = normalize(f.clone());
    let dg = deg(g).expect("division by zero polynomial");
    let lead_inv = inv_mod(*g.last().unwrap(), ell);
    while let Some(dr) = deg(&r) {
        if dr < dg {
            break;
        }
        let c = (r[dr] as u128 * lead_inv as u128 % ell as u128) as u64;
        let shift = dr - dg;
        for (j, gj) in g.iter().enumerate() {
            let t = (c as u128 * *gj as u128 % ell as u128) as u64;
            r[shift + j] = (r[shift + j] + ell - t) % ell;
        }
        r = normalize(r);
    }
    r
}

pub fn gcd(f: &Poly, g: &Poly, ell: u64) -> Poly {
    let mut a = normalize(f.clone());
    let mut b = normalize(g.clone());
    while !b.is_empty() {
        let r = rem(&a, &b, ell);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let li = inv_mod(lead, ell);
        for c in a.iter_mut() {
            *c = (*c as u128 * li as u128 % ell as u128) as u64;
        }
    }
    a
}

/// x^e mod f, by square-and-multiply on polynomials.
pub fn x_pow_mod(mut e: u128, f: &Poly, ell: u64) -> Poly {
    let mut acc = vec![1u64];
    let mut base = rem(&vec![0, 1], f, ell);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &base, ell), f, ell);
        }
        base = rem(&mul(&base, &base, ell), f, ell);
        e >>= 1;
    }
    acc
}

pub fn eval(f: &Poly, x: u64, ell: u64) -> u64 {
    let mut acc = 0u64;
    for c in f.iter().rev() {
        acc = ((acc as u128 * x as u128 + *c as u128) % ell as u128) as u64;
    }
    acc
}

pub fn derivative(f: &Poly, ell: u64) -> Poly {
    if f.len() <= 1 {
        return vec![];
    }
    let mut out = Vec::with_capacity(f.len() - 1);
    for (i, c) in f.iter().enumerate().skip(1) {
        out.push((i as u128 % ell as u128 * *c as u128 % ell as u128) as u64);
    }
    normalize(out)
}

/// Number of roots of f in the extension F_{ell^d}, as deg gcd(x^{ell^d} - x, f).
pub fn root_count_in_ext(f: &Poly, ell: u64, d: u32) -> usize {
    let f = normalize(f.clone());
    if f.is_empty() {
        panic!("zero polynomial has every root");
    }
    let q = (ell as u128).pow(d);
    let xq = x_pow_mod(q, &f, ell);
    let diff = sub(&xq, &vec![0, 1], ell);
    let g = gcd(&diff, &f, ell);
    deg(&g).unwrap_or(0)
}

/// All roots of f in F_ell (deterministic: splits off x^ell - x and finds
/// roots by evaluation when few, or by enumeration for small ell).
pub fn roots_in_fl(f: &Poly, ell: u64) -> Vec<u64> {
    let f = normalize(f.clone());
    if f.is_empty() {
        panic!("zero polynomial");
    }
    if ell <= 4096 {
        return (0..ell).filter(|&x| eval(&f, x, ell) == 0).collect();
    }
    let xq = x_pow_mod(ell as u128, &f, ell);
    let diff = sub(&xq, &vec![0, 1], ell);
    let mut g = gcd(&diff, &f, ell);
    // g splits into distinct linear factors; peel roots with gcds against
    // shifted halvings (Cantor-Zassenhaus, deterministic sweep over shifts)
    let mut roots = Vec::new();
    let mut stack = vec![g.clone()];
    let mut shift = 0u64;
    while let Some(h) = stack.pop() {
        match deg(&h) {
            None | Some(0) => continue,
            Some(1) => {
                // h = x + c (monic): root = -c
                let c = h[0] % ell;
                roots.push((ell - c) % ell);
                continue;
            }
            Some(_) => {
                // split via gcd(h, (x+shift)^((ell-1)/2) - 1)
                let mut split = None;
                while split.is_none() {
                    shift += 1;
                    let xs = vec![shift % ell, 1];
                    let pw = poly_pow_mod(&xs, (ell - 1) / 2, &h, ell);
                    let g1 = gcd(&sub(&pw, &vec![1], ell), &h, ell);
                    let d1 = deg(&g1).unwrap_or(0);
                    if d1 > 0 && d1 < deg(&h).unwrap() {
                        split = Some(g1);
                    }
                }
                let g1 = split.unwrap();
                let g2 = divide_exact(&h, &g1, ell);
                stack.push(g1);
                stack.push(g2);
            }
        }
    }
    g.clear();
    roots.sort_unstable();
    roots
}

fn poly_pow_mod(base: &Poly, mut e: u64, f: &Poly, ell: u64) -> Poly {
    let mut acc = vec![1u64];
    let mut b = rem(base, f, ell);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, ell), f, ell);
        }
        b = rem(&mul(&b, &b, ell), f, ell);
        e >>= 1;
    }
    acc
}

/// Exact quotient f / g (g | f).
pub fn divide_exact(f: &Poly, g: &Poly, ell: u64) -> Poly {
    let mut r = normalize(f.clone());
    let dg = deg(g).expect("division by zero polynomial");
    let lead_inv = inv_mod(*g.last().unwrap(), ell);
    let df = match deg(&r) {
        None => return vec![],
        Some(d) => d,
    };
    assert!(df >= dg);
    let mut q = vec![0u64; df - dg + 1];
    while let Some(dr) = deg(&r) {
        if dr < dg {
            break;
        }
        let c = (r[dr] as u128 * lead_inv as u128 % ell as u128) as u64;
        let shift = dr - dg;
        q[shift] = c;
        for (j, gj) in g.iter().enumerate() {
            let t = (c as u128 * *gj as u128 % ell as u128) as u64;
            r[shift + j] = (r[shift + j] + ell - t) % ell;
        }
        r = normalize(r);
    }
    assert!(r.is_empty(), "inexact polynomial division");
    normalize(q)
}

/// Degrees pattern of the distinct-degree factorization (degree d appears
/// once per irreducible factor of that degree). Requires f squarefree.
pub fn factor_degree_pattern(f: &Poly, ell: u64) -> Vec<usize> {
    let mut f = normalize(f.clone());
    let lead = *f.last().expect("zero polynomial");
    let li = inv_mod(lead, ell);
    for c in f.iter_mut() {
        *c = (*c as u128 * li as u128 % ell as u128) as u64;
    }
    let mut pattern = Vec::new();
    let mut xq = rem(&vec![0, 1], &f, ell);
    let mut d = 0usize;
    while deg(&f).unwrap_or(0) > 0 {
        d += 1;
        if 2 * d > deg(&f).unwrap() {
            pattern.push(deg(&f).unwrap());
            break;
        }
        xq = poly_pow_mod(&xq, ell, &f, ell);
        let g = gcd(&sub(&xq, &vec![0, 1], ell), &f, ell);
        if let Some(dgg) = deg(&g) {
            if dgg > 0 {
                for _ in 0..dgg / d {
                    pattern.push(d);
                }
                f = divide_exact(&f, &g, ell);
                xq = rem(&xq, &f, ell);
            }
        }
    }
    pattern.sort_unstable();
    pattern
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_roots() {
        // (x-1)(x-2)(x-3) mod 7 = x^3 - 6x^2 + 11x - 6
        let f = normalize(vec![7 - 6, 11 % 7, 7 - 6, 1]);
        assert_eq!(roots_in_fl(&f, 7), vec![1, 2, 3]);
        assert_eq!(root_count_in_ext(&f, 7, 1), 3);
    }

    #[test]
    fn roots_large_ell() {
        // (x - 5)(x - 100)(x^2 + 1) mod 10007; -1 is a non-residue mod 10007
        let ell = 10007u64;
        let a = vec![ell - 5, 1];
        let b = vec![ell - 100, 1];
        let c = vec![1, 0, 1];
        let f = mul(&mul(&a, &b, ell), &c, ell);
        assert_eq!(roots_in_fl(&f, ell), vec![5, 100]);
        assert_eq!(root_count_in_ext(&f, ell, 2), 4);
    }

    #[test]
    fn degree_pattern() {
        // x^3 + 2x - 2 mod 3 is irreducible (no roots, degree 3)
        let f = vec![1, 2, 0, 1]; // -2 = 1 mod 3
        assert_eq!(factor_degree_pattern(&f, 3), vec![3]);
        // mod 5: x^3+2x-2 = (x-2)(x+1)^2 -> not squarefree; pattern of
        // squarefree part (x-2)(x+1)
        let sq = mul(&vec![3, 1], &vec![1, 1], 5);
        assert_eq!(factor_degree_pattern(&sq, 5), vec![1, 1]);
    }
}
