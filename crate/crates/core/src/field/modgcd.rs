//! Multi-modular gcd over `Q(zeta_N)`: images in `F_p` under every embedding `zeta -> omega`,
//! Chinese remaindering, rational reconstruction and a trial-division check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cyclotomic::Field;
use super::poly::Poly;
use super::rational::Rational;

const MAX_PRIMES: usize = 400;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
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

/// Primes below `2^31` congruent to 1 modulo `n`, descending.
struct Primes {
    n: u64,
    next: u64,
}

impl Iterator for Primes {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.next > 3 {
            let c = self.next;
            self.next -= 1;
            if c % self.n.max(2) == 1 && is_prime(c) {
                return Some(c);
            }
        }
        None
    }
}

/// Images of `zeta` under the embeddings `Q(zeta_N) -> F_p`.
fn embeddings(n: u64, p: u64) -> Vec<u64> {
    if n == 1 {
        return vec![1];
    }
    let qs = prime_factors(n);
    let mut x = 2;
    let omega = loop {
        let w = pow_mod(x, (p - 1) / n, p);
        if qs.iter().all(|q| pow_mod(w, n / q, p) != 1) {
            break w;
        }
        x += 1;
    };
    (1..=n).filter(|e| e.gcd(&n) == 1).map(|e| pow_mod(omega, e, p)).collect()
}

fn rational_mod(r: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let d = r.denom().mod_floor(&pb).to_u64()?;
    if d == 0 {
        return None;
    }
    let nn = r.numer().mod_floor(&pb).to_u64()?;
    Some(nn * inv_mod(d, p) % p)
}

/// Coefficient images of `a` under each embedding; `None` if a denominator vanishes.
fn images(a: &Poly, roots: &[u64], p: u64) -> Option<Vec<Vec<u64>>> {
    let mut coords = Vec::with_capacity(a.coeffs().len());
    for c in a.coeffs() {
        let mut v = Vec::with_capacity(c.coords().len());
        for x in c.coords() {
            v.push(rational_mod(x, p)?);
        }
        coords.push(v);
    }
    Some(
        roots
            .iter()
            .map(|&w| {
                coords
                    .iter()
                    .map(|v| {
                        let mut acc = 0u64;
                        for x in v.iter().rev() {
                            acc = (acc * w + x) % p;
                        }
                        acc
                    })
                    .collect()
            })
            .collect(),
    )
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Monic gcd in `F_p[z]`.
fn gcd_fp(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let lb = inv_mod(*b.last().unwrap(), p);
        let db = b.len() - 1;
        while a.len() > db {
            let top = a.len() - 1;
            let c = a[top] * lb % p;
            if c != 0 {
                for j in 0..=db {
                    let t = c * b[j] % p;
                    a[top - db + j] = (a[top - db + j] + p - t) % p;
                }
            }
            a.pop();
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&l) = a.last() {
        let li = inv_mod(l, p);
        for x in a.iter_mut() {
            *x = *x * li % p;
        }
    }
    a
}

/// Inverse of the Vandermonde matrix `V[i][j] = roots[i]^j` modulo `p`.
fn vandermonde_inverse(roots: &[u64], p: u64) -> Option<Vec<Vec<u64>>> {
    let d = roots.len();
    let mut m: Vec<Vec<u64>> = roots
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let mut row: Vec<u64> = (0..d).map(|j| pow_mod(w, j as u64, p)).collect();
            row.extend((0..d).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| m[r][col] != 0)?;
        m.swap(col, piv);
        let inv = inv_mod(m[col][col], p);
        for x in m[col].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..d {
            if r != col && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..2 * d {
                    let t = f * m[col][c] % p;
                    m[r][c] = (m[r][c] + p - t) % p;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[d..].to_vec()).collect())
}

/// `a/b` with `a/b = x mod m`, `|a|, b <= sqrt(m/2)`.
fn reconstruct(x: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(Rational::new(r1, t1))
}

fn monic_divides(g: &Poly, a: &Poly) -> bool {
    g.divides(a)
}

/// Monic gcd of two nonzero polynomials of positive degree, or `None` when no prime succeeds.
pub(crate) fn modular_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let field: Field = a.field().clone();
    let n = field.order();
    let d = field.degree();
    let mut modulus = BigInt::one();
    let mut residues: Vec<Vec<BigInt>> = Vec::new();
    let mut best_deg = usize::MAX;
    let mut last: Option<Poly> = None;
    let primes = Primes { n, next: (1u64 << 31) - 1 };
    for p in primes.take(MAX_PRIMES) {
        let roots = embeddings(n, p);
        let (Some(ia), Some(ib)) = (images(a, &roots, p), images(b, &roots, p)) else { continue };
        if ia.iter().chain(ib.iter()).any(|v| v.last() == Some(&0)) {
            continue;
        }
        let gs: Vec<Vec<u64>> = ia.into_iter().zip(ib).map(|(x, y)| gcd_fp(x, y, p)).collect();
        let deg = gs[0].len() - 1;
        if gs.iter().any(|g| g.len() - 1 != deg) {
            continue;
        }
        if deg == 0 {
            return Some(Poly::one(&field));
        }
        if deg > best_deg {
            continue;
        }
        if deg < best_deg {
            best_deg = deg;
            modulus = BigInt::one();
            residues = vec![vec![BigInt::zero(); d]; deg + 1];
            last = None;
        }
        let Some(vinv) = vandermonde_inverse(&roots, p) else { continue };
        let pb = BigInt::from(p);
        let mp = modulus.mod_floor(&pb).to_u64().unwrap();
        let minv = inv_mod(mp, p);
        for t in 0..=deg {
            for j in 0..d {
                let mut c = 0u64;
                for (i, g) in gs.iter().enumerate() {
                    c = (c + vinv[j][i] * g[t]) % p;
                }
                let old = residues[t][j].mod_floor(&pb).to_u64().unwrap();
                let s = (c + p - old) % p * minv % p;
                residues[t][j] = &residues[t][j] + &modulus * BigInt::from(s);
            }
        }
        modulus *= &pb;
        let mut coeffs = Vec::with_capacity(deg + 1);
        let mut ok = true;
        'rec: for row in &residues {
            let mut cs = Vec::with_capacity(d);
            for x in row {
                match reconstruct(x, &modulus) {
                    Some(r) => cs.push(r),
                    None => {
                        ok = false;
                        break 'rec;
                    }
                }
            }
            coeffs.push(field.from_coords(cs));
        }
        if !ok {
            continue;
        }
        let cand = Poly::from_coeffs(&field, coeffs);
        if last.as_ref() == Some(&cand) && monic_divides(&cand, a) && monic_divides(&cand, b) {
            return Some(cand);
        }
        last = Some(cand);
    }
    None
}
