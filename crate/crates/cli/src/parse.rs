//! Value parsers for command-line flags.

use num_complex::Complex64;

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i`, `-i` (no spaces).
pub fn complex(s: &str) -> Result<Complex64, String> {
    let bad = || format!("'{s}' is not a complex number of the form a+bi");
    if s.is_empty() || s.contains(char::is_whitespace) {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return match s.parse::<f64>() {
            Ok(re) if re.is_finite() => Ok(Complex64::new(re, 0.0)),
            _ => Err(bad()),
        };
    };
    let bytes = body.as_bytes();
    // last sign that starts the imaginary part: not leading, not an exponent sign
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse().map_err(|_| bad())?,
    };
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

/// Parses a grid resolution `WxH`, both at least 2.
pub fn grid(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("'{s}' is not a grid size of the form WxH with W, H >= 2");
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let w: usize = w.parse().map_err(|_| bad())?;
    let h: usize = h.parse().map_err(|_| bad())?;
    if w < 2 || h < 2 {
        return Err(bad());
    }
    Ok((w, h))
}

/// A finite, strictly positive real.
pub fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("'{s}' is not a positive number")),
    }
}

/// A finite real.
pub fn finite(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("'{s}' is not a finite number")),
    }
}

/// A non-zero integer level `k`.
pub fn level(s: &str) -> Result<i64, String> {
    match s.parse::<i64>() {
        Ok(0) => Err("level k must be non-zero".into()),
        Ok(k) => Ok(k),
        Err(_) => Err(format!("'{s}' is not an integer")),
    }
}
