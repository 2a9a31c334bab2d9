use super::poly::Poly;

/// Pairwise coprime, square-free, monic polynomials over which every input factors.
pub fn coprime_basis(polys: &[Poly]) -> Vec<Poly> {
    let mut basis: Vec<Poly> = Vec::new();
    for p in polys {
        if p.is_zero() {
            continue;
        }
        for (q, _) in p.square_free_decomposition() {
            refine_into(&mut basis, q);
        }
    }
    basis
}

/// Inserts a square-free polynomial into a square-free coprime basis.
pub fn refine_into(basis: &mut Vec<Poly>, q: Poly) {
    let mut q = q.monic();
    let mut i = 0;
    while i < basis.len() && !q.is_constant() {
        let g = basis[i].gcd(&q);
        if g.is_constant() {
            i += 1;
            continue;
        }
        let b = basis.remove(i);
        let rest = b.exact_div(&g).monic();
        q = q.exact_div(&g).monic();
        basis.insert(i, g);
        i += 1;
        if !rest.is_constant() {
            basis.insert(i, rest);
            i += 1;
        }
    }
    if !q.is_constant() {
        basis.push(q);
    }
}

/// Multiplicity of `f` in `p` by repeated exact division, with the cofactor.
pub fn multiplicity(p: &Poly, f: &Poly) -> (usize, Poly) {
    let mut e = 0;
    let mut cur = p.clone();
    if cur.is_zero() || f.is_constant() {
        return (0, cur);
    }
    loop {
        let (q, r) = cur.divrem(f);
        if !r.is_zero() {
            return (e, cur);
        }
        cur = q;
        e += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn basis_examples() {
        let f = Field::rationals();
        let b = coprime_basis(&[Poly::from_ints(&f, &[-4, 0, 1]), Poly::from_ints(&f, &[-2, 1])]);
        assert_eq!(b.len(), 2);
        assert!(b.contains(&Poly::from_ints(&f, &[-2, 1])));
        assert!(b.contains(&Poly::from_ints(&f, &[2, 1])));

        let a2 = Poly::from_ints(&f, &[-2, 1]);
        let a3 = Poly::from_ints(&f, &[-3, 1]);
        let p1 = &a2.pow(2) * &a3;
        let p2 = &a2 * &a3.pow(2);
        let b = coprime_basis(&[p1.clone(), p2.clone()]);
        assert_eq!(b.len(), 2);
        assert_eq!(multiplicity(&p1, &a2).0, 2);
        assert_eq!(multiplicity(&p1, &a3).0, 1);
        assert_eq!(multiplicity(&p2, &a3).0, 2);
    }

    #[test]
    fn irreducible_stays_whole() {
        let f = Field::rationals();
        let b = coprime_basis(&[Poly::from_ints(&f, &[-2, 0, 1])]);
        assert_eq!(b, vec![Poly::from_ints(&f, &[-2, 0, 1])]);
    }
}
