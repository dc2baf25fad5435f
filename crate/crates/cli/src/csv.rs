//! Deterministic CSV rendering.

/// Twelve significant digits in scientific notation; `-0` prints as `0`.
pub fn number(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// Header plus one line per row, `\n` terminated.
pub fn table<'a>(header: &str, rows: impl IntoIterator<Item = &'a [f64]>) -> String {
    let mut out = String::with_capacity(256);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| number(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_twelve_significant_digits() {
        assert_eq!(number(1.0), "1.00000000000e0");
        assert_eq!(number(-0.0), "0.00000000000e0");
        assert_eq!(number(-123.456789012345), "-1.23456789012e2");
        assert_eq!(number(f64::NAN), "nan");
    }

    #[test]
    fn table_layout() {
        let rows = [[1.0, 2.0], [3.0, -0.0]];
        let text = table("a,b", rows.iter().map(|r| &r[..]));
        assert_eq!(text, "a,b\n1.00000000000e0,2.00000000000e0\n3.00000000000e0,0.00000000000e0\n");
    }
}
