//! Output helpers shared by the commands.

use std::fmt::Write as _;

use serde::Serialize;

/// Aligned text table. Columns whose cells are all numeric are
/// right-aligned, the rest left-aligned.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let cols = headers.len();
    let mut width: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    let mut numeric = vec![true; cols];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            width[i] = width[i].max(cell.chars().count());
            if cell.parse::<f64>().is_err() {
                numeric[i] = false;
            }
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut text = String::new();
        for (i, cell) in cells.enumerate() {
            if i > 0 {
                text.push_str("  ");
            }
            let pad = width[i] - cell.chars().count();
            if numeric[i] {
                text.extend(std::iter::repeat_n(' ', pad));
                text.push_str(cell);
            } else {
                text.push_str(cell);
                text.extend(std::iter::repeat_n(' ', pad));
            }
        }
        out.push_str(text.trim_end());
        out.push('\n');
    };
    line(&mut headers.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

/// Comma-separated rows under `header`.
pub fn csv(header: &str, rows: &[Vec<String>]) -> String {
    let mut out = format!("{header}\n");
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// One JSON object per line.
pub fn json_lines<T: Serialize>(items: &[T]) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(item).expect("plain data serializes"));
        out.push('\n');
    }
    out
}

/// `∅` for empty text in human-readable tables.
pub fn or_empty(text: String) -> String {
    if text.is_empty() {
        "∅".into()
    } else {
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aligns_numbers_right_and_text_left() {
        let rows = vec![
            vec!["1".to_string(), "ab".to_string()],
            vec!["100".to_string(), "c".to_string()],
        ];
        assert_eq!(table(&["g", "name"], &rows), "  g  name\n  1  ab\n100  c\n");
    }
}
