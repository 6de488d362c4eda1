use super::SweepTable;
use std::fmt::Write as _;

const DIGITS: usize = 12;

/// `printf("%.12g")`-style rendering: at most twelve significant digits,
/// trailing zeros dropped, exponent form outside `1e-4 ≤ |x| < 1e12`.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= DIGITS as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub(super) fn render(table: &SweepTable) -> String {
    let n = table.detectors.len();
    let mut out = String::from("t");
    for k in 1..=n {
        write!(out, ",det{k}").unwrap();
    }
    if table.counts.is_some() {
        for k in 1..=n {
            write!(out, ",count{k}").unwrap();
        }
    }
    out.push('\n');
    for (i, t) in table.t.iter().enumerate() {
        out.push_str(&format_significant(*t));
        for p in &table.probabilities[i] {
            write!(out, ",{}", format_significant(*p)).unwrap();
        }
        if let Some(counts) = &table.counts {
            for c in &counts[i] {
                write!(out, ",{c}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}
