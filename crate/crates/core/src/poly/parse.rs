//! Recursive-descent parser for integer polynomial expressions.
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' natural)?
//! base   := integer | identifier | '(' expr ')'
//! ```
//!
//! Identifiers must be declared variable names. There is no implicit
//! multiplication: `XY` is one (unknown) identifier, not `X*Y`.

use num_bigint::BigInt;

use super::{Monomial, PolyError, PolyZ};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].parse().expect("digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(PolyError::Syntax {
                    pos: start,
                    msg: format!("unexpected character {:?}", ch),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn syntax<T>(&self, msg: &str) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            pos: self.offset(),
            msg: msg.to_string(),
        })
    }

    fn expr(&mut self) -> Result<PolyZ, PolyError> {
        let negate = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
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

    fn term(&mut self) -> Result<PolyZ, PolyError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = acc.checked_mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<PolyZ, PolyError> {
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let exp = match self.peek() {
                Some(Tok::Int(n)) => u32::try_from(n).map_err(|_| PolyError::ExponentOverflow)?,
                _ => return self.syntax("expected a natural number exponent"),
            };
            self.pos += 1;
            return base.pow(exp);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<PolyZ, PolyError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(PolyZ::constant(self.vars, n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(PolyZ::from_terms(
                        self.vars,
                        [(Monomial::var_power(self.vars.len(), i, 1), BigInt::from(1))],
                    )),
                    None => Err(PolyError::UnknownIdentifier { name, pos: at }),
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.syntax("expected ')'"),
                }
            }
            _ => self.syntax("expected an integer, a variable or '('"),
        }
    }
}

/// Parses `text` as a polynomial in the declared variables.
pub fn parse_poly<S: AsRef<str>>(text: &str, variables: &[S]) -> Result<PolyZ, PolyError> {
    let vars: Vec<String> = variables.iter().map(|s| s.as_ref().to_string()).collect();
    if vars.len() > super::MAX_VARS {
        return Err(PolyError::TooManyVariables(vars.len()));
    }
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(PolyError::Syntax {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
        vars: &vars,
    };
    let poly = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return parser.syntax("unexpected trailing input");
    }
    Ok(poly)
}

/// Parses a comma-separated list of polynomials. Commas nested inside
/// parentheses are not separators.
pub fn parse_poly_list<S: AsRef<str>>(
    text: &str,
    variables: &[S],
) -> Result<Vec<PolyZ>, PolyError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(parse_piece(text, start, i, variables)?);
                start = i + 1;
            }
            _ => {}
        }
    }
    if !text[start..].trim().is_empty() || !out.is_empty() {
        out.push(parse_piece(text, start, text.len(), variables)?);
    }
    Ok(out)
}

fn parse_piece<S: AsRef<str>>(
    text: &str,
    start: usize,
    end: usize,
    vars: &[S],
) -> Result<PolyZ, PolyError> {
    parse_poly(&text[start..end], vars).map_err(|e| match e {
        PolyError::Syntax { pos, msg } => PolyError::Syntax {
            pos: pos + start,
            msg,
        },
        PolyError::UnknownIdentifier { name, pos } => PolyError::UnknownIdentifier {
            name,
            pos: pos + start,
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const V: [&str; 4] = ["X", "Y", "Z", "W"];

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e).unwrap()
    }

    #[test]
    fn spec_examples() {
        let f = parse_poly("X*Y - Z*W", &V).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.coefficient(&m(&[1, 1, 0, 0])), BigInt::from(1));
        assert_eq!(f.coefficient(&m(&[0, 0, 1, 1])), BigInt::from(-1));

        let g = parse_poly("(X+Y)^2", &V).unwrap();
        assert_eq!(g.num_terms(), 3);
        assert_eq!(g.coefficient(&m(&[1, 1, 0, 0])), BigInt::from(2));

        let h = parse_poly("X^2*Y + 3", &V).unwrap();
        assert_eq!(h.num_terms(), 2);
        assert_eq!(h.coefficient(&m(&[0, 0, 0, 0])), BigInt::from(3));
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(
            parse_poly(" X ^ 2 *Y+3 ", &V).unwrap(),
            parse_poly("X^2*Y+3", &V).unwrap()
        );
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_poly("XY - Z*W", &V),
            Err(PolyError::UnknownIdentifier {
                name: "XY".into(),
                pos: 0
            })
        );
        assert!(matches!(
            parse_poly("X + * Y", &V),
            Err(PolyError::Syntax { pos: 4, .. })
        ));
        assert!(matches!(
            parse_poly("(X + Y", &V),
            Err(PolyError::Syntax { pos: 6, .. })
        ));
        assert!(matches!(
            parse_poly("X^Y", &V),
            Err(PolyError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse_poly("X $ Y", &V),
            Err(PolyError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(parse_poly("", &V), Err(PolyError::Syntax { .. })));
        assert!(matches!(
            parse_poly("X Y", &V),
            Err(PolyError::Syntax { pos: 2, .. })
        ));
        assert_eq!(
            parse_poly("X^99999999999", &V),
            Err(PolyError::ExponentOverflow)
        );
    }

    #[test]
    fn leading_sign_and_lists() {
        assert_eq!(
            parse_poly("-X + Y", &V).unwrap(),
            parse_poly("Y - X", &V).unwrap()
        );
        let list = parse_poly_list("X, (Y+Z)*W, Z-W", &V).unwrap();
        assert_eq!(list.len(), 3);
        assert_eq!(list[1], parse_poly("Y*W + Z*W", &V).unwrap());
        assert!(parse_poly_list("", &V).unwrap().is_empty());
        assert!(matches!(
            parse_poly_list("X, Q", &V),
            Err(PolyError::UnknownIdentifier { pos: 3, .. })
        ));
    }

    fn arb_poly() -> impl Strategy<Value = PolyZ> {
        let vars: Vec<String> = V.iter().map(|s| s.to_string()).collect();
        prop::collection::vec((prop::collection::vec(0u32..4, 4), -50i64..50), 0..8).prop_map(
            move |terms| {
                PolyZ::from_terms(
                    &vars,
                    terms
                        .into_iter()
                        .map(|(e, c)| (Monomial::new(&e).unwrap(), BigInt::from(c))),
                )
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn print_parse_round_trip(f in arb_poly()) {
            let text = f.to_string();
            prop_assert_eq!(parse_poly(&text, &V).unwrap(), f);
        }
    }
}
