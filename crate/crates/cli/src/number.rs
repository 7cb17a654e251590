/// Shortest decimal string that parses back to the same `f64`.
///
/// Integral values drop the trailing `.0`; very large or small magnitudes
/// use exponent notation. Negative zero prints as `0`.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    let s = format!("{x:?}");
    match s.strip_suffix(".0") {
        Some(stripped) => stripped.to_string(),
        None => s,
    }
}
