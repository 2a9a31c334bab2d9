use crate::error::{MahlerError, Result};
use crate::field::{Poly, RatFun};
use crate::orbits::power_map_charpoly;

/// `M` with `M(z^k) = prod_{w^k=1} q(w z)`, and the cofactor `M(z^k) / q`.
pub fn cartier_norm(q: &Poly, k: u64) -> (Poly, Poly) {
    let d = q.deg();
    let lc = q.lead().expect("nonzero denominator").clone();
    let g = power_map_charpoly(&q.monic(), k);
    let mut scale = lc.pow(k);
    if ((k + 1) * d as u64) % 2 == 1 {
        scale = -scale;
    }
    let m = g.scale(&scale);
    let cof = m.compose_pow(k as usize).exact_div(q);
    (m, cof)
}

/// `Lambda_{k,r}(c)`: the unique rational function with `c = sum_r z^r Lambda_r(c)(z^k)`.
pub fn cartier_rational(c: &RatFun, r: u64, k: u64) -> Result<RatFun> {
    if r >= k {
        return Err(MahlerError::Invalid(format!("residue {r} out of range for k = {k}")));
    }
    Ok(cartier_all(c, k).swap_remove(r as usize))
}

/// `Lambda_r(c)` for every `r` in `0..k`, sharing one denominator computation.
pub fn cartier_all(c: &RatFun, k: u64) -> Vec<RatFun> {
    let field = c.field().clone();
    let (m, cof) = cartier_norm(c.den(), k);
    let num = c.num() * &cof;
    let ku = k as usize;
    let mut parts = vec![Vec::new(); ku];
    for (i, a) in num.coeffs().iter().enumerate() {
        parts[i % ku].push(a.clone());
    }
    parts.into_iter().map(|cs| RatFun::new(Poly::from_coeffs(&field, cs), m.clone())).collect()
}

/// Polynomial part of `Lambda_r` on polynomials.
pub fn cartier_poly(p: &Poly, r: u64, k: u64) -> Poly {
    let cs: Vec<_> = p.coeffs().iter().skip(r as usize).step_by(k as usize).cloned().collect();
    Poly::from_coeffs(p.field(), cs)
}
