//! Text form shared by every polynomial-like type.
//!
//! Terms are written `[sign][coeff]monomial`, factors joined by `*` except when
//! every factor is a bare single-letter variable (so `uv` but `u^2*v`). The
//! parser accepts both spellings.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse polynomial at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err(pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        pos,
        msg: msg.into(),
    }
}

/// Renders terms in the order given; the caller sorts.
pub fn render_terms<I>(terms: I, vars: &[&str]) -> String
where
    I: IntoIterator<Item = (Vec<i64>, BigInt)>,
{
    let mut out = String::new();
    for (exps, c) in terms {
        if c.is_zero() {
            continue;
        }
        if c.is_negative() {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let mag = c.abs();
        let factors: Vec<(&str, i64)> = vars
            .iter()
            .zip(&exps)
            .filter(|(_, &e)| e != 0)
            .map(|(&v, &e)| (v, e))
            .collect();
        if factors.is_empty() || !mag.is_one() {
            out.push_str(&mag.to_string());
        }
        let compact = factors.iter().all(|&(v, e)| e == 1 && v.chars().count() == 1);
        let sep = if compact { "" } else { "*" };
        let rendered: Vec<String> = factors
            .iter()
            .map(|&(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        out.push_str(&rendered.join(sep));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Parses a sum of terms over `vars`. Repeated terms are returned unmerged.
pub fn parse_terms(
    s: &str,
    vars: &[&str],
    allow_negative_exponents: bool,
) -> Result<Vec<(Vec<i64>, BigInt)>, ParseError> {
    let cleaned: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let text: String = cleaned.iter().map(|&(_, c)| c).collect();
    let pos_of = |i: usize| cleaned.get(i).map(|&(p, _)| p).unwrap_or(s.len());
    let chars: Vec<char> = text.chars().collect();
    if chars.is_empty() {
        return Err(err(0, "empty input"));
    }

    let mut out = Vec::new();
    let mut i = 0;
    let mut first = true;
    while i < chars.len() {
        let mut negative = false;
        match chars[i] {
            '+' => i += 1,
            '-' => {
                negative = true;
                i += 1;
            }
            _ if first => {}
            c => return Err(err(pos_of(i), format!("expected '+' or '-', found '{c}'"))),
        }
        first = false;

        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let mut coeff = if i > start {
            let digits: String = chars[start..i].iter().collect();
            digits.parse::<BigInt>().map_err(|e| err(pos_of(start), e.to_string()))?
        } else {
            BigInt::one()
        };
        let had_coeff = i > start;
        if had_coeff && i < chars.len() && chars[i] == '*' {
            i += 1;
        }

        let mut exps = vec![0i64; vars.len()];
        let mut had_factor = false;
        while i < chars.len() && chars[i].is_alphabetic() {
            let rest: String = chars[i..].iter().collect();
            let (vi, name) = vars
                .iter()
                .enumerate()
                .filter(|(_, v)| rest.starts_with(*v))
                .max_by_key(|(_, v)| v.len())
                .ok_or_else(|| err(pos_of(i), "unknown variable"))?;
            i += name.chars().count();
            let mut e = 1i64;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let estart = i;
                if i < chars.len() && chars[i] == '-' {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[estart..i].iter().collect();
                e = digits
                    .parse()
                    .map_err(|_| err(pos_of(estart), "bad exponent"))?;
                if e < 0 && !allow_negative_exponents {
                    return Err(err(pos_of(estart), "negative exponent"));
                }
            }
            exps[vi] += e;
            had_factor = true;
            if i + 1 < chars.len() && chars[i] == '*' && chars[i + 1].is_alphabetic() {
                i += 1;
            }
        }
        if !had_coeff && !had_factor {
            return Err(err(pos_of(i), "empty term"));
        }
        if negative {
            coeff = -coeff;
        }
        out.push((exps, coeff));
    }
    Ok(out)
}
