use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{MahlerError, Result};
use crate::field::{Field, FieldElem, RatFun, Rational};
use crate::operators::MahlerEquation;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Z,
    Zeta,
    F,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eq,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Int(text[start..i].parse().unwrap())));
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let tok = match &text[start..i] {
                "z" => Tok::Z,
                "zeta" => Tok::Zeta,
                "f" => Tok::F,
                w => return Err(syntax(start, format!("unknown identifier '{w}'"))),
            };
            out.push((start, tok));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '=' => Tok::Eq,
            _ => return Err(syntax(start, format!("unexpected character '{c}'"))),
        };
        out.push((start, tok));
        i += c.len_utf8();
    }
    Ok(out)
}

fn syntax(position: usize, message: impl Into<String>) -> MahlerError {
    MahlerError::Parse { position, message: message.into() }
}

/// `constant + sum terms[e] * f(z^e)`.
#[derive(Clone, Debug)]
struct Linear {
    constant: RatFun,
    terms: BTreeMap<u64, RatFun>,
}

impl Linear {
    fn scalar(c: RatFun) -> Linear {
        Linear { constant: c, terms: BTreeMap::new() }
    }

    fn is_scalar(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(mut self, o: Linear, sign: bool) -> Linear {
        let signed = |c: RatFun| if sign { c } else { -&c };
        self.constant = &self.constant + &signed(o.constant);
        for (e, c) in o.terms {
            let slot = self.terms.entry(e).or_insert_with(|| RatFun::zero(c.field()));
            *slot = &*slot + &signed(c);
        }
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    fn scale(mut self, c: &RatFun) -> Linear {
        self.constant = &self.constant * c;
        for v in self.terms.values_mut() {
            *v = &*v * c;
        }
        self.terms.retain(|_, c| !c.is_zero());
        self
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    field: &'a Field,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(syntax(self.at(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Linear> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(self.term()?, true);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.add(self.term()?, false);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Linear> {
        let mut acc = self.unary()?;
        loop {
            let p = self.at();
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = match (acc.is_scalar(), rhs.is_scalar()) {
                        (true, _) => rhs.scale(&acc.constant),
                        (false, true) => acc.scale(&rhs.constant),
                        _ => return Err(syntax(p, "product of two f-terms")),
                    };
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    if !rhs.is_scalar() {
                        return Err(syntax(p, "division by an f-term"));
                    }
                    if rhs.constant.is_zero() {
                        return Err(syntax(p, "division by zero"));
                    }
                    acc = acc.scale(&rhs.constant.inv());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Linear> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.unary()?.scale(&-&RatFun::one(self.field)))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Linear> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        let p = self.at();
        self.pos += 1;
        let e = self.exponent()?;
        if !base.is_scalar() {
            if e == 1 {
                return Ok(base);
            }
            return Err(syntax(p, "power of an f-term"));
        }
        if e < 0 && base.constant.is_zero() {
            return Err(syntax(p, "negative power of zero"));
        }
        Ok(Linear::scalar(base.constant.pow(e)))
    }

    fn exponent(&mut self) -> Result<i64> {
        let p = self.at();
        let (neg, paren) = match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let neg = self.peek() == Some(&Tok::Minus);
                if neg {
                    self.pos += 1;
                }
                (neg, true)
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                (true, false)
            }
            _ => (false, false),
        };
        let v = match self.peek() {
            Some(Tok::Int(n)) => n.to_i64().ok_or_else(|| syntax(p, "exponent too large"))?,
            _ => return Err(syntax(self.at(), "expected an integer exponent")),
        };
        self.pos += 1;
        if paren {
            self.expect(Tok::RParen, "')'")?;
        }
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<Linear> {
        let p = self.at();
        let field = self.field;
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Linear::scalar(RatFun::constant(field.from_rational(Rational::from_integer(n)))))
            }
            Some(Tok::Z) => {
                self.pos += 1;
                Ok(Linear::scalar(RatFun::z(field)))
            }
            Some(Tok::Zeta) => {
                self.pos += 1;
                if field.order() <= 2 {
                    return Err(MahlerError::FieldMismatch(format!(
                        "'zeta' at position {p} needs a cyclotomic field of order > 2, have {}",
                        field.order()
                    )));
                }
                Ok(Linear::scalar(RatFun::constant(field.zeta())))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::F) => {
                self.pos += 1;
                self.expect(Tok::LParen, "'(' after f")?;
                self.expect(Tok::Z, "'z' as the argument of f")?;
                let e = if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    let q = self.at();
                    match self.peek() {
                        Some(Tok::Int(n)) if n > &BigInt::zero() => {
                            let e = n.to_u64().ok_or_else(|| syntax(q, "exponent too large"))?;
                            self.pos += 1;
                            e
                        }
                        _ => return Err(syntax(q, "expected a positive integer exponent in f(z^e)")),
                    }
                } else {
                    1
                };
                self.expect(Tok::RParen, "')' closing f(...)")?;
                let mut terms = BTreeMap::new();
                terms.insert(e, RatFun::one(field));
                Ok(Linear { constant: RatFun::zero(field), terms })
            }
            _ => Err(syntax(p, "expected a number, 'z', 'zeta', 'f(...)' or '('")),
        }
    }
}

/// `(b, a)` with `n = b^a` and `b` not a perfect power.
fn primitive_root(n: u64) -> (u64, u32) {
    for a in (2..=63u32).rev() {
        let b = (n as f64).powf(1.0 / a as f64).round() as u64;
        for c in [b.saturating_sub(1), b, b + 1] {
            if c >= 2 && c.checked_pow(a) == Some(n) {
                return (c, a);
            }
        }
    }
    (n, 1)
}

fn log_exact(n: u64, k: u64) -> Option<usize> {
    let mut i = 0;
    let mut v = 1u64;
    while v < n {
        v = v.checked_mul(k)?;
        i += 1;
    }
    (v == n).then_some(i)
}

/// The radix `k` with every exponent equal to `k^i`; the largest such base unless `declared`.
pub fn infer_radix(exponents: &[u64], declared: Option<u64>) -> Result<u64> {
    let list = || exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ");
    if let Some(k) = declared {
        if k < 2 {
            return Err(MahlerError::Invalid(format!("radix must be at least 2, got {k}")));
        }
        if exponents.iter().any(|&e| log_exact(e, k).is_none()) {
            return Err(MahlerError::RadixInconsistent(format!("exponents {} are not all powers of {k}", list())));
        }
        return Ok(k);
    }
    let mut base = None;
    let mut g = 0u32;
    for &e in exponents.iter().filter(|&&e| e > 1) {
        let (b, a) = primitive_root(e);
        match base {
            None => base = Some(b),
            Some(b0) if b0 != b => {
                return Err(MahlerError::RadixInconsistent(format!("exponents {} have no common base", list())))
            }
            _ => {}
        }
        g = num_integer::Integer::gcd(&g, &a);
    }
    match base {
        Some(b) => Ok(b.pow(g)),
        None => Err(MahlerError::Invalid("no term f(z^e) with e > 1".into())),
    }
}

/// Parses `f(z) = sum coef * f(z^(k^i))`; both sides may mix terms, which are collected and normalized.
pub fn parse_equation(text: &str, field: &Field, declared_k: Option<u64>) -> Result<MahlerEquation> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), field };
    let lhs = p.expr()?;
    p.expect(Tok::Eq, "'='")?;
    let rhs = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.at(), "unexpected trailing input"));
    }
    let diff = lhs.add(rhs, false);
    if !diff.constant.is_zero() {
        return Err(MahlerError::Invalid(format!("inhomogeneous term {}", diff.constant)));
    }
    let t0 = diff.terms.get(&1).cloned().ok_or_else(|| MahlerError::Invalid("no f(z) term".into()))?;
    let exps: Vec<u64> = diff.terms.keys().copied().collect();
    let k = infer_radix(&exps, declared_k)?;
    let n = exps.iter().map(|&e| log_exact(e, k).unwrap()).max().unwrap_or(0);
    if n == 0 {
        return Err(MahlerError::Invalid("equation has order zero".into()));
    }
    let mut coeffs = vec![RatFun::zero(field); n];
    for (e, c) in &diff.terms {
        let i = log_exact(*e, k).unwrap();
        if i > 0 {
            coeffs[i - 1] = -&c.div(&t0);
        }
    }
    MahlerEquation::new(k, coeffs)
}

/// A constant expression over literals and `zeta`.
pub fn parse_scalar(text: &str, field: &Field) -> Result<FieldElem> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), field };
    let v = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.at(), "unexpected trailing input"));
    }
    if !v.is_scalar() {
        return Err(syntax(0, "expected a constant, found an f-term"));
    }
    v.constant.as_constant().ok_or_else(|| syntax(0, "expected a constant, found a function of z"))
}

/// `f(z) = c_1 * f(z^k) + ...`, readable by [`parse_equation`].
pub fn equation_to_text(eq: &MahlerEquation) -> String {
    let mut parts = Vec::new();
    let mut e = BigInt::one();
    for c in &eq.coeffs {
        e *= eq.k;
        if !c.is_zero() {
            parts.push(format!("({c})*f(z^{e})"));
        }
    }
    format!("f(z) = {}", parts.join(" + "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Poly;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn counterexample_text() {
        let f = q();
        let eq = parse_equation("f(z) = ((15/4)*z - 6)/(2 - z) * f(z^3) + (8 - z)/(2 - z) * f(z^9)", &f, None).unwrap();
        assert_eq!(eq.k, 3);
        assert_eq!(eq.n(), 2);
        let c1 = RatFun::new(
            Poly::from_rationals(&f, &[Rational::from_integer((-6).into()), Rational::new(15.into(), 4.into())]),
            Poly::from_ints(&f, &[2, -1]),
        );
        assert_eq!(eq.coeffs[0], c1);
        assert_eq!(eq.coeffs[1], RatFun::new(Poly::from_ints(&f, &[8, -1]), Poly::from_ints(&f, &[2, -1])));
    }

    #[test]
    fn simple_forms() {
        let f = q();
        let eq = parse_equation("f(z) = (1+z)*f(z^2)", &f, None).unwrap();
        assert_eq!((eq.k, eq.coeffs.clone()), (2, vec![RatFun::from_poly(Poly::from_ints(&f, &[1, 1]))]));
        let eq = parse_equation("f(z) = f(z^2)/(1-z)", &f, None).unwrap();
        assert_eq!(eq.coeffs, vec![RatFun::new(Poly::one(&f), Poly::from_ints(&f, &[1, -1]))]);
        let eq = parse_equation("(1-z)*f(z) - f(z^2) = 0", &f, None).unwrap();
        assert_eq!(eq.coeffs, vec![RatFun::new(Poly::one(&f), Poly::from_ints(&f, &[1, -1]))]);
        let eq = parse_equation("f(z) = z^-1 * f(z^4) + z^(2) * f(z^16)", &f, None).unwrap();
        assert_eq!((eq.k, eq.n()), (4, 2));
        let eq = parse_equation("f(z) = f(z^4)", &f, Some(2)).unwrap();
        assert_eq!((eq.k, eq.n()), (2, 2));
        assert!(eq.coeffs[0].is_zero());
    }

    #[test]
    fn radix_errors() {
        let f = q();
        assert!(matches!(
            parse_equation("f(z) = f(z^2) + f(z^3)", &f, None),
            Err(MahlerError::RadixInconsistent(_))
        ));
        assert!(matches!(parse_equation("f(z) = f(z^4)", &f, Some(3)), Err(MahlerError::RadixInconsistent(_))));
        assert_eq!(infer_radix(&[1, 8, 64], None).unwrap(), 8);
        assert_eq!(infer_radix(&[4, 8], None).unwrap(), 2);
    }

    #[test]
    fn syntax_errors() {
        let f = q();
        match parse_equation("f(z) = (1+z)*f(z^2", &f, None) {
            Err(MahlerError::Parse { position, .. }) => assert_eq!(position, 18),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_equation("f(z) = f(z^2) * f(z^2)", &f, None), Err(MahlerError::Parse { .. })));
        assert!(matches!(parse_equation("f(z) = g(z^2)", &f, None), Err(MahlerError::Parse { position: 7, .. })));
        assert!(matches!(parse_equation("f(z) = f(z^2) + 1", &f, None), Err(MahlerError::Invalid(_))));
    }

    #[test]
    fn zeta_needs_field() {
        assert!(matches!(
            parse_equation("f(z) = (z - zeta)*f(z^2)", &q(), None),
            Err(MahlerError::FieldMismatch(_))
        ));
        let f = Field::new(5);
        let eq = parse_equation("f(z) = (z - zeta)*f(z^2)", &f, None).unwrap();
        assert_eq!(eq.coeffs[0], RatFun::from_poly(Poly::linear(&f.zeta())));
    }

    #[test]
    fn scalars() {
        let f = Field::new(3);
        assert_eq!(parse_scalar("2", &f).unwrap(), f.from_int(2));
        assert_eq!(parse_scalar("(1+zeta)^2", &f).unwrap(), &(&f.one() + &f.zeta()) * &(&f.one() + &f.zeta()));
        assert!(parse_scalar("z", &f).is_err());
    }

    #[test]
    fn text_round_trip() {
        let f = Field::new(3);
        let text = "f(z) = (z^2 - zeta/3)/(z + 2) * f(z^2) + (1 - zeta*z) * f(z^4)";
        let eq = parse_equation(text, &f, None).unwrap();
        let again = parse_equation(&equation_to_text(&eq), &f, None).unwrap();
        assert_eq!(again, eq);
    }
}
