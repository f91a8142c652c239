//! Text and JSON forms of integer polynomials in x and T.
//!
//! Text grammar: sums and differences of products of integer literals, `x`,
//! `T`, parenthesized subexpressions and `^` with a nonnegative integer
//! exponent. Juxtaposition (`2x^3`) multiplies.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Bivariate, IntPoly};
use crate::error::{Error, Result};

const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    X,
    T,
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(at, ch)) = chars.peek() {
        let tok = match ch {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else if d == '_' {
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((at, Tok::Num(digits.parse().expect("ascii digits"))));
                continue;
            }
            'x' | 'X' => Tok::X,
            'T' | 't' => Tok::T,
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' | '\u{00b7}' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::Open,
            ')' => Tok::Close,
            other => {
                return Err(Error::Parse { offset: at, msg: format!("unexpected character {other:?}") })
            }
        };
        chars.next();
        out.push((at, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

type Bi = Bivariate<BigInt>;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.offset(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Bi> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Bi> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Num(_) | Tok::X | Tok::T | Tok::Open) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Bi> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Bi> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let e = match self.peek() {
            Some(Tok::Num(n)) => match u32::try_from(n) {
                Ok(e) if e <= MAX_EXPONENT => e,
                _ => return self.err(format!("exponent above {MAX_EXPONENT}")),
            },
            _ => return self.err("expected a nonnegative integer exponent"),
        };
        self.pos += 1;
        let mut acc = Bi::from_terms([(BigInt::from(1), 0, 0)]);
        for _ in 0..e {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Bi> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err("unexpected end of input"),
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Bi::from_terms([(n, 0, 0)])),
            Tok::X => Ok(Bi::from_terms([(BigInt::from(1), 1, 0)])),
            Tok::T => Ok(Bi::from_terms([(BigInt::from(1), 0, 1)])),
            Tok::Open => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            other => {
                self.pos -= 1;
                self.err(format!("unexpected token {other:?}"))
            }
        }
    }
}

/// Parses a polynomial in `x` and `T` with integer coefficients.
pub fn parse_bivariate(src: &str) -> Result<Bivariate<BigInt>> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::Parse { offset: 0, msg: "empty expression".into() });
    }
    let mut parser = Parser { toks, pos: 0, len: src.len() };
    let out = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return parser.err("trailing input");
    }
    Ok(out)
}

/// Parses a polynomial in `x` alone.
pub fn parse_univariate(src: &str) -> Result<IntPoly> {
    let f = parse_bivariate(src)?;
    if f.deg_t().is_some_and(|d| d > 0) {
        return Err(Error::Parse { offset: 0, msg: "expected a polynomial in x only".into() });
    }
    Ok(f.specialize_t(&BigInt::from(0)))
}

/// `{"terms": [["c", i, j], ...]}` with decimal-string coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiPolyJson {
    pub terms: Vec<(String, u32, u32)>,
}

impl From<&Bivariate<BigInt>> for BiPolyJson {
    fn from(f: &Bivariate<BigInt>) -> Self {
        BiPolyJson { terms: f.terms().map(|(c, i, j)| (c.to_string(), i, j)).collect() }
    }
}

impl TryFrom<BiPolyJson> for Bivariate<BigInt> {
    type Error = Error;
    fn try_from(j: BiPolyJson) -> Result<Self> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for (k, (c, i, e)) in j.terms.into_iter().enumerate() {
            let c: BigInt = c
                .trim()
                .parse()
                .map_err(|_| Error::Parse { offset: k, msg: format!("bad coefficient {c:?}") })?;
            terms.push((c, i, e));
        }
        Ok(Bivariate::from_terms(terms))
    }
}

impl Serialize for Bivariate<BigInt> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BiPolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Bivariate<BigInt> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = BiPolyJson::deserialize(d)?;
        Bivariate::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_big_literals() {
        let f = parse_bivariate("62476467927496043633049600000000*x^5*T^2 - 385*x^9 + 1").unwrap();
        assert_eq!(f.coeff(5, 2), "62476467927496043633049600000000".parse::<BigInt>().unwrap());
        assert_eq!(f.coeff(9, 0), BigInt::from(-385));
        assert_eq!(f.coeff(0, 0), BigInt::from(1));
        assert_eq!(f.term_count(), 3);
    }

    #[test]
    fn parses_products_and_parens() {
        let f = parse_univariate("(x-1)*(x-2)*(x-3)").unwrap();
        assert_eq!(f, IntPoly::from_i64(&[-6, 11, -6, 1]));
        let g = parse_bivariate("2x^3 - (x + T)^2").unwrap();
        assert_eq!(g.to_string(), "2*x^3 - x^2 - 2*x*T - T^2");
        assert_eq!(parse_univariate("-x^2 + -3").unwrap(), IntPoly::from_i64(&[-3, 0, -1]));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "x +", "x^", "x^-1", "(x", "3 y", "x)"] {
            assert!(matches!(parse_bivariate(bad), Err(Error::Parse { .. })), "{bad:?}");
        }
        assert!(parse_univariate("x*T").is_err());
    }

    #[test]
    fn json_shape() {
        let f = parse_bivariate("x^3 + T").unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"terms":[["1",0,1],["1",3,0]]}"#);
        let back: Bivariate<BigInt> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<Bivariate<BigInt>>(r#"{"terms":[["1.5",0,0]]}"#).is_err());
    }

    fn arb_bi() -> impl Strategy<Value = Bivariate<BigInt>> {
        prop::collection::vec((any::<i64>(), 0u32..6, 0u32..4), 0..8)
            .prop_map(|ts| Bivariate::from_terms(ts.into_iter().map(|(c, i, j)| (BigInt::from(c), i, j))))
    }

    proptest! {
        #[test]
        fn display_parses_back(f in arb_bi()) {
            prop_assert_eq!(parse_bivariate(&f.to_string()).unwrap(), f.clone());
            let json = serde_json::to_string(&f).unwrap();
            prop_assert_eq!(serde_json::from_str::<Bivariate<BigInt>>(&json).unwrap(), f);
        }
    }
}
