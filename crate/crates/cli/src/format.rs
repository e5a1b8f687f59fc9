//! Number formatting and output sinks.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};

/// `x` rounded to `digits` significant digits, `%g` style: fixed notation for
/// decimal exponents in `[-5, digits)`, scientific otherwise, no trailing zeros.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        return format!("{}e{}", trim(mantissa), exp);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim(&format!("{x:.decimals$}")).to_string()
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Stdout, or the file at `path`.
pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_digits_like_the_tables() {
        assert_eq!(sig(1.6498512, 6), "1.64985");
        assert_eq!(sig(15.000001, 6), "15");
        assert_eq!(sig(2.000250001, 6), "2.00025");
        assert_eq!(sig(10000.0, 6), "10000");
        assert_eq!(sig(-0.0497870683678639, 6), "-0.0497871");
    }

    #[test]
    fn switches_to_scientific() {
        assert_eq!(sig(1.23456789e-7, 3), "1.23e-7");
        assert_eq!(sig(1234567.0, 6), "1.23457e6");
        assert_eq!(sig(0.0, 6), "0");
        assert_eq!(sig(f64::INFINITY, 6), "inf");
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [
            std::f64::consts::PI,
            1.0 / 3.0,
            2.5338e-12,
            123456.789012345,
            -7.0e300,
            0.1 + 0.2,
        ] {
            assert_eq!(sig(x, 17).parse::<f64>().unwrap(), x);
        }
    }
}
