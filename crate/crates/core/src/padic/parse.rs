//! Text form of scalars: sums of terms `c*p^k` plus an optional `O(p^k)`.
//!
//! Exponents may be rational (`p^(1/2)`, `p^1/2`), which fixes the
//! ramification index to the least common denominator.

use super::{PadicScalar, Q};
use crate::arith;
use crate::error::{Error, Result};
use num_integer::Integer;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i128),
    P,
    BigO,
    LParen,
    RParen,
    Caret,
    Star,
    Slash,
    Plus,
    Minus,
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            '0'..='9' => {
                let mut n: i128 = 0;
                while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(d as i128))
                        .ok_or_else(|| Error::Parse("integer literal too large".into()))?;
                    chars.next();
                }
                out.push(Tok::Num(n));
            }
            'p' => {
                chars.next();
                out.push(Tok::P);
            }
            'O' => {
                chars.next();
                out.push(Tok::BigO);
            }
            '(' => {
                chars.next();
                out.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                out.push(Tok::RParen);
            }
            '^' => {
                chars.next();
                out.push(Tok::Caret);
            }
            '*' | '·' => {
                chars.next();
                out.push(Tok::Star);
            }
            '/' => {
                chars.next();
                out.push(Tok::Slash);
            }
            '+' => {
                chars.next();
                out.push(Tok::Plus);
            }
            '-' | '−' => {
                chars.next();
                out.push(Tok::Minus);
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

/// A parsed term `num/den · p^pexp`.
struct Term {
    num: i128,
    den: i128,
    pexp: Q,
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    p: u64,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(Error::Parse(format!("expected {t:?}, found {got:?}"))),
        }
    }

    fn number(&mut self) -> Result<i128> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(n),
            got => Err(Error::Parse(format!("expected a number, found {got:?}"))),
        }
    }

    fn exponent(&mut self) -> Result<Q> {
        let paren = self.peek() == Some(&Tok::LParen);
        if paren {
            self.next();
        }
        let neg = self.peek() == Some(&Tok::Minus);
        if neg {
            self.next();
        }
        let n = self.number()?;
        let mut d = 1;
        if self.peek() == Some(&Tok::Slash) {
            self.next();
            d = self.number()?;
        }
        if paren {
            self.expect(Tok::RParen)?;
        }
        if d == 0 {
            return Err(Error::Parse("zero denominator in exponent".into()));
        }
        let n = i64::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?;
        Ok(Q::new(if neg { -n } else { n }, d as i64))
    }

    fn factor(&mut self, term: &mut Term) -> Result<()> {
        match self.next() {
            Some(Tok::P) => {
                let k = if self.peek() == Some(&Tok::Caret) {
                    self.next();
                    self.exponent()?
                } else {
                    Q::from_integer(1)
                };
                term.pexp += k;
            }
            Some(Tok::Num(n)) => {
                if self.peek() == Some(&Tok::Caret) {
                    self.next();
                    let k = self.exponent()?;
                    if n == self.p as i128 {
                        term.pexp += k;
                    } else if k.is_integer() && k >= Q::from_integer(0) {
                        let k = k.to_integer() as u32;
                        term.num = term
                            .num
                            .checked_mul(n.checked_pow(k).ok_or_else(|| Error::Parse("power too large".into()))?)
                            .ok_or_else(|| Error::Parse("coefficient too large".into()))?;
                    } else {
                        return Err(Error::Parse(format!("cannot raise {n} to {k}")));
                    }
                } else if self.peek() == Some(&Tok::Slash) {
                    self.next();
                    let d = self.number()?;
                    if d == 0 {
                        return Err(Error::Parse("zero denominator".into()));
                    }
                    term.num = term.num.checked_mul(n).ok_or_else(|| Error::Parse("coefficient too large".into()))?;
                    term.den = term.den.checked_mul(d).ok_or_else(|| Error::Parse("coefficient too large".into()))?;
                } else {
                    term.num = term.num.checked_mul(n).ok_or_else(|| Error::Parse("coefficient too large".into()))?;
                }
            }
            got => return Err(Error::Parse(format!("unexpected token {got:?}"))),
        }
        Ok(())
    }
}

impl PadicScalar {
    /// Parse text such as `3*p^2 - p^3 + O(p^6)`, `7`, `p^(1/2)` or `1/2`.
    /// Terms without an `O(...)` bound get relative precision `default_prec`.
    pub fn parse(text: &str, p: u64, default_prec: u32) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::Parse(format!("{p} is not prime")));
        }
        let mut ps = Parser { toks: lex(text)?, pos: 0, p };
        if ps.toks.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let mut terms = Vec::new();
        let mut big_o: Option<Q> = None;
        let mut sign = 1;
        if matches!(ps.peek(), Some(Tok::Minus) | Some(Tok::Plus)) {
            if ps.next() == Some(Tok::Minus) {
                sign = -1;
            }
        }
        loop {
            if ps.peek() == Some(&Tok::BigO) {
                ps.next();
                ps.expect(Tok::LParen)?;
                let mut t = Term { num: 1, den: 1, pexp: Q::from_integer(0) };
                ps.factor(&mut t)?;
                ps.expect(Tok::RParen)?;
                if t.num != 1 || t.den != 1 {
                    return Err(Error::Parse("O(...) takes a power of p".into()));
                }
                big_o = Some(big_o.map_or(t.pexp, |b: Q| b.min(t.pexp)));
            } else {
                let mut t = Term { num: sign, den: 1, pexp: Q::from_integer(0) };
                ps.factor(&mut t)?;
                while ps.peek() == Some(&Tok::Star) {
                    ps.next();
                    ps.factor(&mut t)?;
                }
                terms.push(t);
            }
            match ps.next() {
                None => break,
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                Some(t) => return Err(Error::Parse(format!("unexpected token {t:?}"))),
            }
        }
        let e = terms
            .iter()
            .map(|t| t.pexp)
            .chain(big_o)
            .fold(1i64, |acc, q| acc.lcm(q.denom()));
        let e = u32::try_from(e).map_err(|_| Error::Parse("ramification too large".into()))?;
        let term_prec = if big_o.is_some() { arith::max_precision(p) } else { default_prec };
        let mut acc = PadicScalar { p, e, repr: super::Repr::Zero };
        for t in &terms {
            let ord = (t.pexp * e as i64).to_integer();
            let num = PadicScalar::monomial(p, e, ord, t.num, term_prec);
            let den = PadicScalar::monomial(p, e, 0, t.den, term_prec);
            acc = acc.add(&num.div(&den)?)?;
        }
        if let Some(b) = big_o {
            acc = acc.add(&PadicScalar::small(p, e, b)?)?;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Valuation;

    #[test]
    fn parses_common_shapes() {
        let x = PadicScalar::parse("7", 7, 8).unwrap();
        assert_eq!(x.val().unwrap(), Q::from_integer(1));
        assert_eq!(x.rel_prec(), Some(8));
        let y = PadicScalar::parse("2*7^2 + 3*7^3 + O(7^5)", 7, 8).unwrap();
        assert_eq!(y.val().unwrap(), Q::from_integer(2));
        assert_eq!(y.abs_prec(), Some(Q::from_integer(5)));
        let z = PadicScalar::parse("p^(1/2)", 5, 8).unwrap();
        assert_eq!(z.e(), 2);
        assert_eq!(z.valuation(), Valuation::Finite(Q::new(1, 2)));
        let w = PadicScalar::parse("-p^1/2", 5, 8).unwrap();
        assert!(w.agrees(&z.neg()));
        let h = PadicScalar::parse("1/2", 5, 8).unwrap();
        assert!(h.mul(&PadicScalar::from_int(5, 2, 8)).unwrap().agrees(&PadicScalar::from_int(5, 1, 8)));
        assert!(PadicScalar::parse("0", 5, 8).unwrap().is_exact_zero());
        assert!(PadicScalar::parse("O(p^3)", 5, 8).unwrap().is_zero_within_precision());
    }

    #[test]
    fn rejects_garbage() {
        assert!(PadicScalar::parse("", 5, 8).is_err());
        assert!(PadicScalar::parse("3 + x", 5, 8).is_err());
        assert!(PadicScalar::parse("p + p^(1/2)", 5, 8).is_err());
        assert!(PadicScalar::parse("1/0", 5, 8).is_err());
    }
}
