//! Locale-independent number formatting and exact half-integer parsing.

/// Significant digits in every printed float.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `%.12g`-style rendering: fixed notation for exponents in `[-5, 12)`,
/// scientific otherwise, trailing zeros removed.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

pub fn format_opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Parses a spin magnitude written as `"3/2"`, `"1.5"` or `"2"` into `2s`.
/// Anything that is not a positive half-integer is rejected.
pub fn parse_half_integer(text: &str) -> Result<u32, String> {
    let t = text.trim();
    let bad = || format!("'{text}' is not a positive half-integer");
    let two = if let Some((num, den)) = t.split_once('/') {
        let num: u32 = num.trim().parse().map_err(|_| bad())?;
        match den.trim() {
            "1" => num.checked_mul(2).ok_or_else(bad)?,
            "2" => num,
            _ => return Err(bad()),
        }
    } else {
        let (int, frac) = t.split_once('.').unwrap_or((t, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        let int: u32 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let half = match frac.trim_end_matches('0') {
            "" => 0,
            "5" => 1,
            _ => return Err(bad()),
        };
        int.checked_mul(2).and_then(|v| v.checked_add(half)).ok_or_else(bad)?
    };
    if two == 0 {
        return Err(bad());
    }
    Ok(two)
}

/// Parses `"s1,s2"` into a pair.
pub fn parse_pair(text: &str) -> Result<spin_otto::SpinPair, String> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| format!("pair '{text}' must be written as s1,s2"))?;
    spin_otto::SpinPair::new(parse_half_integer(a)?, parse_half_integer(b)?).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats() {
        assert_eq!(format_float(0.25), "0.25");
        assert_eq!(format_float(-12.0), "-12");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(1.0 / 7.0), "0.142857142857");
        assert_eq!(format_float(26.307646530816506), "26.3076465308");
        assert_eq!(format_float(1.5e-7), "1.5e-7");
        assert_eq!(format_float(1.23456789012345e15), "1.23456789012e15");
        assert_eq!(format_float(0.00012), "0.00012");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(0.9999999999999), "1");
        assert_eq!(format_opt(None), "");
    }

    #[test]
    fn round_trip_precision() {
        for x in [0.357142857142857, 1e-300, 6.02214076e23, -1.234567890123e-7] {
            let back: f64 = format_float(x).parse().unwrap();
            assert!((back - x).abs() <= 1e-11 * x.abs());
        }
    }

    #[test]
    fn half_integers() {
        assert_eq!(parse_half_integer("1/2"), Ok(1));
        assert_eq!(parse_half_integer("3/2"), Ok(3));
        assert_eq!(parse_half_integer("1.5"), Ok(3));
        assert_eq!(parse_half_integer("2"), Ok(4));
        assert_eq!(parse_half_integer("2.0"), Ok(4));
        assert_eq!(parse_half_integer(".5"), Ok(1));
        assert_eq!(parse_half_integer("4/1"), Ok(8));
        for bad in ["0", "1/3", "1.25", "-1/2", "abc", "", "0.0", "1.5x", "."] {
            assert!(parse_half_integer(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn pairs() {
        let p = parse_pair("1, 1/2").unwrap();
        assert_eq!((p.two_s1(), p.two_s2()), (1, 2));
        assert!(parse_pair("1").is_err());
        assert!(parse_pair("1,0.3").is_err());
    }
}
