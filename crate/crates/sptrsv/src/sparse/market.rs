//! Matrix Market coordinate-format ingestion and emission.
//!
//! The reader accepts `matrix coordinate {real|integer} {general|symmetric}`
//! headers, converts the 1-based indices, expands the stored triangle of
//! symmetric files, sums duplicate entries, and hands back a canonical
//! [`CsrMatrix`]. Everything else (complex or pattern fields, array format,
//! skew symmetry, non-square shapes) is reported as unsupported rather than
//! guessed at. Parse errors carry the 1-based line number, counting comment
//! lines too, so the message points at the file as an editor shows it.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::CsrMatrix;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Read a square sparse matrix from a Matrix Market file.
pub fn read_matrix_market<T: Scalar>(path: &Path) -> Result<CsrMatrix<T>> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines().enumerate();

    // --- Header line -------------------------------------------------------
    let header = match lines.next() {
        Some((_, line)) => line.map_err(Error::Io)?,
        None => return Err(parse_err(1, "empty file")),
    };
    let header_lc = header.to_lowercase();
    let tokens: Vec<&str> = header_lc.split_whitespace().collect();
    if tokens.first().copied() != Some("%%matrixmarket") {
        return Err(parse_err(1, "missing %%MatrixMarket banner"));
    }
    if tokens.len() != 5 {
        return Err(parse_err(
            1,
            format!("banner has {} fields, expected 5", tokens.len()),
        ));
    }
    if tokens[1] != "matrix" {
        return Err(Error::UnsupportedFormat(format!(
            "object '{}' (only 'matrix' is supported)",
            tokens[1]
        )));
    }
    if tokens[2] != "coordinate" {
        return Err(Error::UnsupportedFormat(format!(
            "format '{}' (only 'coordinate' is supported)",
            tokens[2]
        )));
    }
    match tokens[3] {
        "real" | "integer" => {}
        other => {
            return Err(Error::UnsupportedFormat(format!(
                "field '{other}' (only 'real' and 'integer' are supported)"
            )))
        }
    }
    let symmetric = match tokens[4] {
        "general" => false,
        "symmetric" => true,
        other => {
            return Err(Error::UnsupportedFormat(format!(
                "symmetry '{other}' (only 'general' and 'symmetric' are supported)"
            )))
        }
    };

    // --- Size line (after comments) ----------------------------------------
    let mut size: Option<(usize, usize)> = None; // (n, declared entry count)
    let mut entries: Vec<(usize, usize, T)> = Vec::new();
    let mut seen = 0usize;
    let mut last_line = 1usize;

    for (idx, line) in lines {
        let lineno = idx + 1;
        last_line = lineno;
        let line = line.map_err(Error::Io)?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(parse_err(
                        lineno,
                        format!("size line has {} fields, expected 3", fields.len()),
                    ));
                }
                let rows: usize = fields[0]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad row count '{}'", fields[0])))?;
                let cols: usize = fields[1]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad column count '{}'", fields[1])))?;
                let count: usize = fields[2]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad entry count '{}'", fields[2])))?;
                if rows != cols {
                    return Err(Error::UnsupportedFormat(format!(
                        "non-square matrix ({rows} x {cols})"
                    )));
                }
                if rows == 0 {
                    return Err(parse_err(lineno, "matrix dimension must be at least 1"));
                }
                size = Some((rows, count));
                entries.reserve(if symmetric { 2 * count } else { count });
            }
            Some((n, count)) => {
                if seen == count {
                    return Err(parse_err(
                        lineno,
                        format!("more than the declared {count} entries"),
                    ));
                }
                if fields.len() != 3 {
                    return Err(parse_err(
                        lineno,
                        format!("entry has {} fields, expected 3", fields.len()),
                    ));
                }
                let r: usize = fields[0]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad row index '{}'", fields[0])))?;
                let c: usize = fields[1]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad column index '{}'", fields[1])))?;
                let v: f64 = fields[2]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad value '{}'", fields[2])))?;
                if r == 0 || r > n || c == 0 || c > n {
                    return Err(parse_err(
                        lineno,
                        format!("index ({r}, {c}) outside 1..={n}"),
                    ));
                }
                let v = T::from_f64(v);
                entries.push((r - 1, c - 1, v));
                if symmetric && r != c {
                    entries.push((c - 1, r - 1, v));
                }
                seen += 1;
            }
        }
    }

    let (n, count) = size.ok_or_else(|| parse_err(last_line, "missing size line"))?;
    if seen != count {
        return Err(parse_err(
            last_line,
            format!("declared {count} entries but found {seen}"),
        ));
    }
    Ok(CsrMatrix::from_triplets(n, entries))
}

/// Write a matrix as `coordinate real general`, 1-based, row-major order.
/// Values are printed in shortest round-trip form, so reading the file back
/// reproduces them exactly.
pub fn write_matrix_market<T: Scalar>(path: &Path, matrix: &CsrMatrix<T>) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", matrix.n(), matrix.n(), matrix.nnz())?;
    for i in 0..matrix.n() {
        let (cols, vals) = matrix.row(i);
        for (k, &j) in cols.iter().enumerate() {
            writeln!(w, "{} {} {}", i + 1, j + 1, vals[k])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::gen_laplacian_2d;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn reads_a_general_file_with_comments_and_unsorted_entries() {
        let f = write_temp(
            "%%MatrixMarket matrix coordinate real general\n\
             % any number of comments\n\
             \n\
             3 3 4\n\
             3 1 4.0\n\
             1 1 2.5\n\
             % mid-data comment\n\
             2 2 3.0\n\
             1 3 -1.0\n",
        );
        let m = read_matrix_market::<f64>(f.path()).unwrap();
        assert_eq!(m.n(), 3);
        assert_eq!(m.row_ptr(), &[0, 2, 3, 4]);
        assert_eq!(m.col_idx(), &[0, 2, 1, 0]);
        assert_eq!(m.values(), &[2.5, -1.0, 3.0, 4.0]);
    }

    #[test]
    fn integer_field_parses_as_numbers() {
        let f = write_temp(
            "%%MatrixMarket matrix coordinate integer general\n\
             2 2 2\n\
             1 1 3\n\
             2 2 -7\n",
        );
        let m = read_matrix_market::<f64>(f.path()).unwrap();
        assert_eq!(m.values(), &[3.0, -7.0]);
    }

    #[test]
    fn symmetric_files_expand_off_diagonal_entries() {
        // Lower triangle of a symmetric 3x3; (2,1) and (3,1) must mirror.
        let f = write_temp(
            "%%MatrixMarket matrix coordinate real symmetric\n\
             3 3 4\n\
             1 1 2.0\n\
             2 1 -1.0\n\
             3 1 0.5\n\
             3 3 1.0\n",
        );
        let m = read_matrix_market::<f64>(f.path()).unwrap();
        assert_eq!(m.nnz(), 6);
        assert_eq!(m.row(0), (&[0usize, 1, 2][..], &[2.0, -1.0, 0.5][..]));
        assert_eq!(m.row(1), (&[0usize][..], &[-1.0][..]));
        assert_eq!(m.row(2), (&[0usize, 2][..], &[0.5, 1.0][..]));
    }

    #[test]
    fn duplicate_entries_are_summed() {
        let f = write_temp(
            "%%MatrixMarket matrix coordinate real general\n\
             2 2 3\n\
             1 1 1.5\n\
             1 1 2.5\n\
             2 1 1.0\n",
        );
        let m = read_matrix_market::<f64>(f.path()).unwrap();
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.values(), &[4.0, 1.0]);
    }

    #[test]
    fn unsupported_headers_are_named() {
        for (header, needle) in [
            ("%%MatrixMarket matrix coordinate complex general", "complex"),
            ("%%MatrixMarket matrix coordinate pattern general", "pattern"),
            ("%%MatrixMarket matrix array real general", "array"),
            (
                "%%MatrixMarket matrix coordinate real skew-symmetric",
                "skew-symmetric",
            ),
            (
                "%%MatrixMarket matrix coordinate real hermitian",
                "hermitian",
            ),
        ] {
            let f = write_temp(&format!("{header}\n1 1 1\n1 1 1.0\n"));
            match read_matrix_market::<f64>(f.path()) {
                Err(Error::UnsupportedFormat(msg)) => {
                    assert!(msg.contains(needle), "{msg} should mention {needle}")
                }
                other => panic!("expected UnsupportedFormat, got {other:?}"),
            }
        }
    }

    #[test]
    fn non_square_shapes_are_unsupported() {
        let f = write_temp(
            "%%MatrixMarket matrix coordinate real general\n\
             2 3 1\n\
             1 1 1.0\n",
        );
        assert!(matches!(
            read_matrix_market::<f64>(f.path()),
            Err(Error::UnsupportedFormat(_))
        ));
    }

    #[test]
    fn parse_errors_carry_the_line_number() {
        // Bad value on the file's fifth line (comments count).
        let f = write_temp(
            "%%MatrixMarket matrix coordinate real general\n\
             % comment\n\
             2 2 2\n\
             1 1 1.0\n\
             2 2 oops\n",
        );
        match read_matrix_market::<f64>(f.path()) {
            Err(Error::Parse { line: 5, message }) => assert!(message.contains("oops")),
            other => panic!("expected a parse error at line 5, got {other:?}"),
        }

        // Out-of-range index.
        let f = write_temp(
            "%%MatrixMarket matrix coordinate real general\n\
             2 2 1\n\
             3 1 1.0\n",
        );
        assert!(matches!(
            read_matrix_market::<f64>(f.path()),
            Err(Error::Parse { line: 3, .. })
        ));

        // Fewer entries than declared.
        let f = write_temp(
            "%%MatrixMarket matrix coordinate real general\n\
             2 2 3\n\
             1 1 1.0\n",
        );
        match read_matrix_market::<f64>(f.path()) {
            Err(Error::Parse { message, .. }) => assert!(message.contains("declared 3")),
            other => panic!("expected a parse error, got {other:?}"),
        }

        // More entries than declared.
        let f = write_temp(
            "%%MatrixMarket matrix coordinate real general\n\
             1 1 1\n\
             1 1 1.0\n\
             1 1 2.0\n",
        );
        assert!(matches!(
            read_matrix_market::<f64>(f.path()),
            Err(Error::Parse { line: 4, .. })
        ));

        // Missing banner entirely.
        let f = write_temp("1 1 1\n1 1 1.0\n");
        assert!(matches!(
            read_matrix_market::<f64>(f.path()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let err = read_matrix_market::<f64>(Path::new("/no/such/file.mtx")).unwrap_err();
        assert!(matches!(err, Error::Io(_)));
    }

    #[test]
    fn write_then_read_round_trips_exactly() {
        let a = gen_laplacian_2d::<f64>(4, 3, 9).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lap.mtx");
        write_matrix_market(&path, &a).unwrap();
        let b = read_matrix_market::<f64>(&path).unwrap();
        assert_eq!(b.row_ptr(), a.row_ptr());
        assert_eq!(b.col_idx(), a.col_idx());
        let bits_equal = b
            .values()
            .iter()
            .zip(a.values())
            .all(|(x, y)| x.to_bits() == y.to_bits());
        assert!(bits_equal);
    }

    #[test]
    fn fractional_values_survive_the_round_trip() {
        let m = CsrMatrix::new(
            2,
            vec![0, 1, 2],
            vec![0, 1],
            vec![0.1, -3.25e-17],
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("frac.mtx");
        write_matrix_market(&path, &m).unwrap();
        let back = read_matrix_market::<f64>(&path).unwrap();
        assert_eq!(back.values()[0].to_bits(), 0.1f64.to_bits());
        assert_eq!(back.values()[1].to_bits(), (-3.25e-17f64).to_bits());
    }
}
