//! Locale-independent number formatting for terminal output.

use qgame_core::linalg::{Complex, ComplexMatrix};

const SIGNIFICANT: usize = 12;

/// `x` to 12 significant digits, `%g` style: plain decimals for moderate
/// magnitudes, scientific otherwise, trailing zeros dropped.
pub fn real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIGNIFICANT as i32).contains(&exp) {
        let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, x)).to_string()
    } else {
        format!("{}e{}", trim(mantissa), exp)
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn complex(z: Complex) -> String {
    let (re, im) = (real(z.re), real(z.im));
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) => format!("{im}i"),
        _ if im.starts_with('-') => format!("{re}{im}i"),
        _ => format!("{re}+{im}i"),
    }
}

/// One indented line per row, entries separated by two spaces.
pub fn matrix(m: &ComplexMatrix, indent: &str) -> String {
    m.rows()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|&z| complex(z)).collect();
            format!("{indent}{}\n", cells.join("  "))
        })
        .collect()
}
