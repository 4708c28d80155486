//! Complex numbers on the command line: `a`, `bi`, `a+bi`, `a-bi`, with no
//! whitespace. `i` alone means `1i`; exponents such as `1e-3+2i` are fine.

use num_complex::Complex64;

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let err = || format!("cannot parse {s:?} as a complex number (expected a, bi, a+bi or a-bi)");
    if s.is_empty() || s.chars().any(char::is_whitespace) {
        return Err(err());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s
            .parse::<f64>()
            .ok()
            .filter(|re| re.is_finite())
            .map(|re| Complex64::new(re, 0.0))
            .ok_or_else(err);
    };
    // split before the last sign that is neither leading nor part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| err())?,
    };
    let re = if re.is_empty() {
        0.0
    } else {
        re.parse::<f64>().map_err(|_| err())?
    };
    if !re.is_finite() || !im.is_finite() {
        return Err(err());
    }
    Ok(Complex64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn accepted_forms() {
        assert_eq!(parse_complex("1+i"), Ok(c(1.0, 1.0)));
        assert_eq!(parse_complex("1-i"), Ok(c(1.0, -1.0)));
        assert_eq!(parse_complex("8"), Ok(c(8.0, 0.0)));
        assert_eq!(parse_complex("-1"), Ok(c(-1.0, 0.0)));
        assert_eq!(parse_complex("2i"), Ok(c(0.0, 2.0)));
        assert_eq!(parse_complex("-i"), Ok(c(0.0, -1.0)));
        assert_eq!(parse_complex("i"), Ok(c(0.0, 1.0)));
        assert_eq!(parse_complex("4-3i"), Ok(c(4.0, -3.0)));
        assert_eq!(parse_complex("-0.5+2.25i"), Ok(c(-0.5, 2.25)));
        assert_eq!(parse_complex("1e-3+2e+1i"), Ok(c(1e-3, 20.0)));
        assert_eq!(parse_complex("1E2-1e-2i"), Ok(c(100.0, -0.01)));
    }

    #[test]
    fn rejected_forms() {
        for s in ["", "1 + i", "abc", "1+2j", "1++i", "inf", "NaN+i", "1+"] {
            assert!(parse_complex(s).is_err(), "{s}");
        }
    }
}
