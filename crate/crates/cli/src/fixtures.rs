//! Positive-root fixture tables.
//!
//! A root table has one line per root, `index height b_1 .. b_rank`. An order
//! file maps each table index to the generated (canonical) index, one
//! `table_index generated_index` pair per line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use qslab_core::{RootSystem, TypeLabel};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureRow {
    pub index: usize,
    pub height: i64,
    pub coeffs: Vec<i64>,
}

fn numbers(line: &str) -> Result<Vec<i64>, String> {
    line.split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|_| format!("bad integer `{t}`")))
        .collect()
}

pub fn parse_roots(text: &str, rank: usize) -> Result<Vec<FixtureRow>, String> {
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v = numbers(line).map_err(|e| format!("line {}: {e}", n + 1))?;
        if v.len() != rank + 2 || v[0] < 1 {
            return Err(format!("line {}: expected index, height and {rank} coefficients", n + 1));
        }
        rows.push(FixtureRow {
            index: v[0] as usize,
            height: v[1],
            coeffs: v[2..].to_vec(),
        });
    }
    Ok(rows)
}

pub fn parse_order(text: &str) -> Result<Vec<(usize, usize)>, String> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match numbers(line).map_err(|e| format!("line {}: {e}", n + 1))?[..] {
            [a, b] if a >= 1 && b >= 1 => out.push((a as usize, b as usize)),
            _ => return Err(format!("line {}: expected two positive indices", n + 1)),
        }
    }
    Ok(out)
}

/// The generated table in fixture format, canonical order.
pub fn render_roots(rs: &RootSystem) -> String {
    let mut s = String::new();
    for (i, root) in rs.positive_roots().iter().enumerate() {
        let _ = write!(s, "{} {}", i + 1, rs.height(i));
        for b in root {
            let _ = write!(s, " {b}");
        }
        s.push('\n');
    }
    s
}

pub fn fixture_paths(dir: &Path, label: TypeLabel) -> Option<(PathBuf, PathBuf)> {
    let stem = match label {
        TypeLabel::E7 => "e7",
        TypeLabel::E8 => "e8",
        _ => return None,
    };
    Some((
        dir.join(format!("{stem}_positive_roots.txt")),
        dir.join(format!("{stem}_appendix_order.txt")),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureOutcome {
    pub rows: usize,
    pub generated: usize,
    pub matched: usize,
    /// Table indices that do not match their generated root.
    pub mismatched_rows: Vec<usize>,
}

impl FixtureOutcome {
    pub fn passed(&self) -> bool {
        self.mismatched_rows.is_empty() && self.matched == self.generated && self.rows == self.generated
    }
}

/// Compares parsed tables against the generated roots.
pub fn compare(rs: &RootSystem, rows: &[FixtureRow], order: &[(usize, usize)]) -> FixtureOutcome {
    let generated = rs.num_positive_roots();
    let mut used = vec![false; generated + 1];
    let mut matched = 0;
    let mut mismatched_rows = Vec::new();
    for row in rows {
        let target = order.iter().find(|(a, _)| *a == row.index).map(|&(_, b)| b);
        let ok = match target {
            Some(g) if g <= generated && !used[g] => {
                used[g] = true;
                rs.positive_roots()[g - 1] == row.coeffs && rs.height(g - 1) == row.height
            }
            _ => false,
        };
        if ok {
            matched += 1;
        } else {
            mismatched_rows.push(row.index);
        }
    }
    FixtureOutcome {
        rows: rows.len(),
        generated,
        matched,
        mismatched_rows,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Fixture {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

/// Loads the fixture pair for `rs` from `dir` and compares it bit-exactly.
pub fn fixture_check(rs: &RootSystem, dir: &Path) -> Result<FixtureOutcome, CliError> {
    let (roots_path, order_path) = fixture_paths(dir, rs.label()).ok_or_else(|| CliError::Fixture {
        path: dir.to_path_buf(),
        msg: format!("no fixture table for {}", rs.label()),
    })?;
    let fixture_err = |path: &Path| {
        let path = path.to_path_buf();
        move |msg| CliError::Fixture { path, msg }
    };
    let rows = parse_roots(&read(&roots_path)?, rs.rank()).map_err(fixture_err(&roots_path))?;
    let order = parse_order(&read(&order_path)?).map_err(fixture_err(&order_path))?;
    Ok(compare(rs, &rows, &order))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_parses_back() {
        let e6 = RootSystem::exceptional(TypeLabel::E6).unwrap();
        let text = render_roots(&e6);
        let rows = parse_roots(&text, 6).unwrap();
        assert_eq!(rows.len(), 36);
        let order: Vec<_> = (1..=36).map(|i| (i, i)).collect();
        assert!(compare(&e6, &rows, &order).passed());
    }

    #[test]
    fn parse_errors() {
        assert!(parse_roots("1 1 1 0", 6).is_err());
        assert!(parse_roots("1 x 1 0 0 0 0 0", 6).is_err());
        assert!(parse_order("1").is_err());
        assert!(parse_order("0 1").is_err());
    }

    #[test]
    fn swapped_map_entries_are_reported() {
        let e6 = RootSystem::exceptional(TypeLabel::E6).unwrap();
        let rows = parse_roots(&render_roots(&e6), 6).unwrap();
        let mut order: Vec<_> = (1..=36).map(|i| (i, i)).collect();
        order[9].1 = 11;
        order[10].1 = 10;
        let out = compare(&e6, &rows, &order);
        assert!(!out.passed());
        assert_eq!(out.mismatched_rows, vec![10, 11]);
    }
}
