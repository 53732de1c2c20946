//! MacKay's alist format for sparse binary matrices.
//!
//! ```text
//! n m
//! max_col_degree max_row_degree
//! <n column degrees>
//! <m row degrees>
//! <n lines: 1-based row indices of each column, zero-padded>
//! <m lines: 1-based column indices of each row, zero-padded>
//! ```

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::gf2::{self, Gf2Matrix};

#[derive(Debug, Error)]
pub enum AlistError {
    #[error("alist: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Write `h` (rows = checks, columns = variables).
pub fn write_alist<W: Write>(h: &Gf2Matrix, mut w: W) -> std::io::Result<()> {
    let (n, m) = (h.width(), h.num_rows());
    let row_supports: Vec<Vec<usize>> = h.rows().map(gf2::support).collect();
    let mut col_supports = vec![Vec::new(); n];
    for (r, s) in row_supports.iter().enumerate() {
        for &c in s {
            col_supports[c].push(r);
        }
    }
    let max_col = col_supports.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = row_supports.iter().map(Vec::len).max().unwrap_or(0);
    writeln!(w, "{n} {m}")?;
    writeln!(w, "{max_col} {max_row}")?;
    write_line(&mut w, col_supports.iter().map(Vec::len))?;
    write_line(&mut w, row_supports.iter().map(Vec::len))?;
    for s in &col_supports {
        write_padded(&mut w, s, max_col)?;
    }
    for s in &row_supports {
        write_padded(&mut w, s, max_row)?;
    }
    Ok(())
}

fn write_line<W: Write>(w: &mut W, items: impl Iterator<Item = usize>) -> std::io::Result<()> {
    let parts: Vec<String> = items.map(|x| x.to_string()).collect();
    writeln!(w, "{}", parts.join(" "))
}

fn write_padded<W: Write>(w: &mut W, idx: &[usize], width: usize) -> std::io::Result<()> {
    let items = idx
        .iter()
        .map(|&i| i + 1)
        .chain(std::iter::repeat_n(0, width - idx.len()));
    write_line(w, items)
}

/// Read a matrix, checking that the column and row sections agree.
pub fn read_alist<R: BufRead>(r: R) -> Result<Gf2Matrix, AlistError> {
    let mut tokens = Vec::new();
    for line in r.lines() {
        for t in line?.split_whitespace() {
            tokens.push(
                t.parse::<usize>()
                    .map_err(|_| AlistError::Malformed(format!("bad token {t:?}")))?,
            );
        }
    }
    let mut it = tokens.into_iter();
    let mut next = |what: &str| {
        it.next()
            .ok_or_else(|| AlistError::Malformed(format!("truncated at {what}")))
    };
    let (n, m) = (next("n")?, next("m")?);
    let (max_col, max_row) = (next("max column degree")?, next("max row degree")?);
    let col_deg = (0..n)
        .map(|_| next("column degrees"))
        .collect::<Result<Vec<_>, _>>()?;
    let row_deg = (0..m)
        .map(|_| next("row degrees"))
        .collect::<Result<Vec<_>, _>>()?;
    let mut from_cols = vec![Vec::new(); m];
    for (c, &deg) in col_deg.iter().enumerate() {
        if deg > max_col {
            return Err(AlistError::Malformed(format!(
                "column {c} exceeds the maximum degree"
            )));
        }
        for k in 0..max_col {
            let x = next("column lists")?;
            match (k < deg, x) {
                (true, 0) => return Err(AlistError::Malformed(format!("column {c} is short"))),
                (true, x) if x > m => {
                    return Err(AlistError::Malformed(format!("row index {x} out of range")))
                }
                (true, x) => from_cols[x - 1].push(c),
                (false, 0) => {}
                (false, _) => {
                    return Err(AlistError::Malformed(format!(
                        "column {c} has extra entries"
                    )))
                }
            }
        }
    }
    let mut h = Gf2Matrix::with_capacity(n, m);
    for (r, &deg) in row_deg.iter().enumerate() {
        if deg > max_row {
            return Err(AlistError::Malformed(format!(
                "row {r} exceeds the maximum degree"
            )));
        }
        let mut cols = Vec::with_capacity(deg);
        for k in 0..max_row {
            let x = next("row lists")?;
            match (k < deg, x) {
                (true, 0) => return Err(AlistError::Malformed(format!("row {r} is short"))),
                (true, x) if x > n => {
                    return Err(AlistError::Malformed(format!(
                        "column index {x} out of range"
                    )))
                }
                (true, x) => cols.push(x - 1),
                (false, 0) => {}
                (false, _) => {
                    return Err(AlistError::Malformed(format!("row {r} has extra entries")))
                }
            }
        }
        cols.sort_unstable();
        let mut from_col = std::mem::take(&mut from_cols[r]);
        from_col.sort_unstable();
        if cols != from_col {
            return Err(AlistError::Malformed(format!(
                "row {r} disagrees with the column lists"
            )));
        }
        if cols.windows(2).any(|w| w[0] == w[1]) {
            return Err(AlistError::Malformed(format!("row {r} repeats a column")));
        }
        let mut words = vec![0u64; h.words_per_row()];
        for c in cols {
            gf2::set_bit(&mut words, c);
        }
        h.push_row(&words);
    }
    if it.next().is_some() {
        return Err(AlistError::Malformed("trailing data".into()));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hamming() -> Gf2Matrix {
        let mut h = Gf2Matrix::new(7);
        h.push_support(&[0, 1, 2, 4]);
        h.push_support(&[1, 2, 3, 5]);
        h.push_support(&[0, 1, 3, 6]);
        h
    }

    #[test]
    fn exact_text() {
        let mut out = Vec::new();
        write_alist(&hamming(), &mut out).unwrap();
        let want = "7 3\n3 4\n2 3 2 2 1 1 1\n4 4 4\n1 3 0\n1 2 3\n1 2 0\n2 3 0\n1 0 0\n2 0 0\n3 0 0\n1 2 3 5\n2 3 4 6\n1 2 4 7\n";
        assert_eq!(String::from_utf8(out).unwrap(), want);
    }

    #[test]
    fn rejects_inconsistent_sections() {
        let bad = "2 1\n1 2\n1 1\n2\n1\n1\n1 0\n";
        assert!(read_alist(bad.as_bytes()).is_err());
        let swapped = "2 1\n1 1\n1 0\n1\n1\n0\n2\n";
        assert!(read_alist(swapped.as_bytes()).is_err());
        assert!(read_alist("3".as_bytes()).is_err());
        assert!(read_alist("1 1\n1 1\n1\n1\n1\n1\n9\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(rows in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 70), 0..12)) {
            let mut h = Gf2Matrix::new(70);
            for r in &rows {
                h.push_bits(r);
            }
            let mut out = Vec::new();
            write_alist(&h, &mut out).unwrap();
            prop_assert_eq!(read_alist(out.as_slice()).unwrap(), h);
        }
    }
}
