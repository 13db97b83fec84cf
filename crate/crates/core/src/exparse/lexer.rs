use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::ParseError;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub offset: usize,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'0'..=b'9' => {
                let (value, end) = number(bytes, i);
                out.push(Token { tok: Tok::Num(value), offset: start });
                i = end;
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(text[start..i].to_string()), offset: start });
                continue;
            }
            _ => return Err(ParseError::UnexpectedToken { offset: start }),
        };
        out.push(Token { tok, offset: start });
        i += 1;
    }
    Ok(out)
}

fn digits_end(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    i
}

/// Reads `digits ("." digits)? ([eE] [+-]? digits)?` exactly.
fn number(bytes: &[u8], start: usize) -> (BigRational, usize) {
    let int_end = digits_end(bytes, start);
    let mut mantissa: String = std::str::from_utf8(&bytes[start..int_end]).unwrap().to_string();
    let mut frac_digits = 0i64;
    let mut i = int_end;
    if i + 1 < bytes.len() && bytes[i] == b'.' && bytes[i + 1].is_ascii_digit() {
        let frac_end = digits_end(bytes, i + 1);
        mantissa.push_str(std::str::from_utf8(&bytes[i + 1..frac_end]).unwrap());
        frac_digits = (frac_end - i - 1) as i64;
        i = frac_end;
    }
    let mut exponent = 0i64;
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        let mut sign = 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            if bytes[j] == b'-' {
                sign = -1;
            }
            j += 1;
        }
        let exp_end = digits_end(bytes, j);
        if exp_end > j {
            let digits = std::str::from_utf8(&bytes[j..exp_end]).unwrap();
            exponent = sign * digits.parse::<i64>().unwrap_or(i64::MAX / 4).min(100_000);
            i = exp_end;
        }
    }
    let m: BigInt = mantissa.parse().unwrap_or_else(|_| BigInt::zero());
    let shift = exponent - frac_digits;
    let ten = BigInt::from(10);
    let value = if shift >= 0 {
        BigRational::from_integer(m * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(m, num_traits::pow(ten, (-shift) as usize))
    };
    (value, i)
}
