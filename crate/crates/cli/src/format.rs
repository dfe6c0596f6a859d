//! Number formatting: 17 significant digits in machine-readable files, 4 in
//! human summaries, both in the style of C's `%g`.

/// `x` with `digits` significant digits, trailing zeros removed; scientific
/// notation outside 1e-5 ≤ |x| < 10^digits.
pub fn sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    // The exponent after rounding to `digits` digits, read off the
    // scientific rendering so that carries (9.99… → 10) are accounted for.
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if exp < -5 || exp >= digits as i32 {
        let exp_sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{exp_sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

/// Machine-file rendering.
pub fn full(x: f64) -> String {
    sig(x, 17)
}

/// Human-summary rendering.
pub fn short(x: f64) -> String {
    sig(x, 4)
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
