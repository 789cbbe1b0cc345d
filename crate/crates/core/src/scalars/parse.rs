//! Text syntax: polynomials in the variable `l` (`3/2*l^2 - l + 4`),
//! rational functions as `(num)/(den)`, `num / den` or a bare polynomial,
//! and points as a rational or `inf`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{reduce, Point, Poly, Rat, RatFun};
use crate::error::{Error, Result};

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parses an integer or a fraction `p/q`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err(format!("bad rational `{s}`")))?;
    let d: BigInt = d.parse().map_err(|_| err(format!("bad rational `{s}`")))?;
    if d.is_zero() {
        return Err(err(format!("zero denominator in `{s}`")));
    }
    Ok(Rat::new(n, d))
}

/// Parses a rational or `inf`.
pub fn parse_point(s: &str) -> Result<Point> {
    let s = s.trim();
    if s == "inf" || s == "∞" {
        Ok(Point::Infinity)
    } else {
        parse_rat(s).map(Point::Finite)
    }
}

/// Parses a polynomial in `l`.
pub fn parse_poly(s: &str) -> Result<Poly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty polynomial"));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = compact.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);

    let mut acc = Poly::zero();
    for t in terms {
        acc = &acc + &parse_term(t).map_err(|e| match e {
            Error::Parse(m) => err(format!("{m} in `{}`", s.trim())),
            other => other,
        })?;
    }
    Ok(acc)
}

fn parse_term(t: &str) -> Result<Poly> {
    let (neg, body) = match t.as_bytes().first() {
        Some(b'+') => (false, &t[1..]),
        Some(b'-') => (true, &t[1..]),
        _ => (false, t),
    };
    if body.is_empty() {
        return Err(err("dangling sign"));
    }
    let (coef, power) = match body.find('l') {
        None => (parse_rat(body)?, 0usize),
        Some(pos) => {
            let c = body[..pos].trim_end_matches('*');
            let coef = if c.is_empty() { Rat::one() } else { parse_rat(c)? };
            let rest = &body[pos + 1..];
            let power = if rest.is_empty() {
                1
            } else if let Some(k) = rest.strip_prefix('^') {
                k.parse().map_err(|_| err(format!("bad exponent `{k}`")))?
            } else {
                return Err(err(format!("unexpected `{rest}`")));
            };
            (coef, power)
        }
    };
    let coef = if neg { -coef } else { coef };
    Ok(Poly::monomial(coef, power))
}

/// Parses a rational function.
pub fn parse_ratfun(s: &str) -> Result<RatFun> {
    let trimmed = s.trim();
    let compact: String = trimmed.chars().filter(|c| !c.is_whitespace()).collect();
    let (num, den) = if let Some(pos) = top_level_slash(&compact) {
        (compact[..pos].to_string(), Some(compact[pos + 1..].to_string()))
    } else if let Some((n, d)) = trimmed.split_once(" / ") {
        (n.to_string(), Some(d.to_string()))
    } else {
        (compact, None)
    };
    let num = parse_poly(strip_parens(&num)?)?;
    match den {
        None => Ok(RatFun::from_poly(num)),
        Some(d) => {
            let den = parse_poly(strip_parens(&d)?)?;
            reduce(&num, &den)
        }
    }
}

/// Position of a `/` at nesting depth zero that is not inside a rational
/// coefficient: it touches a parenthesis or is followed by the variable.
fn top_level_slash(s: &str) -> Option<usize> {
    let b = s.as_bytes();
    let mut depth = 0i32;
    for (i, &c) in b.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'/' if depth == 0 => {
                let left = i > 0 && b[i - 1] == b')';
                let right = matches!(b.get(i + 1), Some(b'(') | Some(b'l'));
                if left || right {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn strip_parens(s: &str) -> Result<&str> {
    let s = s.trim();
    match (s.strip_prefix('('), s.ends_with(')')) {
        (Some(inner), true) => Ok(&inner[..inner.len() - 1]),
        (None, false) => Ok(s),
        _ => Err(err(format!("unbalanced parentheses in `{s}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, ratio};

    #[test]
    fn polys() {
        assert_eq!(parse_poly("l^2 + l - 1").unwrap(), Poly::from_ints(&[-1, 1, 1]));
        assert_eq!(parse_poly("-3/2*l + 1").unwrap(), Poly::new(vec![rat(1), ratio(-3, 2)]));
        assert_eq!(parse_poly("0").unwrap(), Poly::zero());
        assert_eq!(parse_poly("2l^3-l").unwrap(), Poly::from_ints(&[0, -1, 0, 2]));
        assert!(parse_poly("l^").is_err());
        assert!(parse_poly("").is_err());
        assert!(parse_poly("x").is_err());
    }

    #[test]
    fn ratfuns() {
        let f = parse_ratfun("(l^2 + l - 1)/(l)").unwrap();
        assert_eq!(f, RatFun::new(Poly::from_ints(&[-1, 1, 1]), Poly::x()));
        assert_eq!(parse_ratfun("l^2+l-1 / l").unwrap(), f);
        assert_eq!(parse_ratfun("1/(l-2)").unwrap(), RatFun::new(Poly::one(), Poly::from_ints(&[-2, 1])));
        assert_eq!(parse_ratfun("1/2*l").unwrap(), RatFun::from_poly(Poly::monomial(ratio(1, 2), 1)));
        assert_eq!(parse_ratfun("1/l^2").unwrap(), RatFun::new(Poly::one(), Poly::monomial(ratio(1, 1), 2)));
        assert_eq!(parse_ratfun("(1)/(0)"), Err(Error::DivisionByZero));
    }

    #[test]
    fn roundtrip_display() {
        for s in ["(l^2 + l - 1)/(l)", "-l^2 + l - 2", "(-1)/(l)", "0", "(3/4*l)/(l^2 - 1/3)"] {
            let f = parse_ratfun(s).unwrap();
            assert_eq!(parse_ratfun(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("inf").unwrap(), Point::Infinity);
        assert_eq!(parse_point("-2/6").unwrap(), Point::Finite(ratio(-1, 3)));
    }
}
