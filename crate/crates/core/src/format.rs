//! Significant-digit rounding and locale-tolerant number parsing.

/// Round `x` to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = digits.clamp(1, 17);
    format!("{:.*e}", digits - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Render `x` with at most `digits` significant digits in plain decimal
/// notation (scientific outside `1e-6..1e15`). Never emits `-0`.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig(x, digits);
    if r == 0.0 {
        return "0".into();
    }
    let a = r.abs();
    if (1e-6..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// Parse a number written with a decimal point or a single decimal comma.
/// Surrounding whitespace and a trailing `%` (which divides by 100) are accepted.
pub fn parse_number(text: &str) -> Result<f64, String> {
    let s = text.trim();
    let (body, percent) = match s.strip_suffix('%') {
        Some(b) => (b.trim_end(), true),
        None => (s, false),
    };
    if body.is_empty() {
        return Err("empty number".into());
    }
    if body.contains(',') && body.contains('.') {
        return Err(format!("ambiguous number {s:?}: both '.' and ','"));
    }
    if body.matches(',').count() > 1 {
        return Err(format!("invalid number {s:?}"));
    }
    let normalized = body.replace(',', ".");
    let valid = normalized
        .trim_start_matches(['+', '-'])
        .chars()
        .all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'));
    let value: f64 = if valid {
        normalized
            .parse()
            .map_err(|_| format!("invalid number {s:?}"))?
    } else {
        return Err(format!("invalid number {s:?}"));
    };
    if !value.is_finite() {
        return Err(format!("number {s:?} is not finite"));
    }
    Ok(if percent { value / 100.0 } else { value })
}
