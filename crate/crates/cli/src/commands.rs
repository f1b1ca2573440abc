//! The `table`, `peel` and `guess` sweeps.

use crate::report::num;
use nullscri_core::noinc::{check_guess, ratio_table, ExactRatio, RatioTable};
use nullscri_core::specialfn::{connection_coeffs, tau_log_coefficient};
use nullscri_core::Result;

/// The printed `RHS/LHS` table for `p <= 5`, `ell <= 10`.
pub const PRINTED_TABLE: [[&str; 11]; 6] = [
    ["inf", "0", "inf", "0", "inf", "0", "inf", "0", "inf", "0", "inf"],
    ["1", "2", "0", "2", "0", "2", "0", "2", "0", "2", "0"],
    ["1/2", "4/7", "1", "0", "1", "0", "1", "0", "1", "0", "1"],
    ["1/3", "6/17", "16/39", "2/3", "0", "2/3", "0", "2/3", "0", "2/3", "0"],
    ["1/4", "8/31", "5/18", "32/99", "1/2", "0", "1/2", "0", "1/2", "0", "1/2"],
    ["1/5", "10/49", "16/75", "70/303", "256/955", "2/5", "0", "2/5", "0", "2/5", "0"],
];

/// A computed table with its agreement against the printed one.
pub struct TableOutput {
    pub table: RatioTable,
    /// Entries inside the printed range and how many of them match.
    pub compared: usize,
    pub matched: usize,
}

pub fn table(p_max: u32, ell_max: u32) -> Result<TableOutput> {
    let table = ratio_table(p_max, ell_max)?;
    let (mut compared, mut matched) = (0, 0);
    for (p, row) in PRINTED_TABLE.iter().enumerate().take(p_max as usize + 1) {
        for (ell, s) in row.iter().enumerate().take(ell_max as usize + 1) {
            compared += 1;
            if table.get(p as u32, ell as u32) == Some(&ExactRatio::parse(s)?) {
                matched += 1;
            }
        }
    }
    Ok(TableOutput { table, compared, matched })
}

/// One `(p, l)` row of the peeling sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct PeelRow {
    pub p: f64,
    pub l: f64,
    /// `c2` for non-integer `p`, `c_log` for natural `p`.
    pub coefficient: &'static str,
    pub value: Option<f64>,
    /// `smooth` when the coefficient vanishes, `fails` otherwise, `error` on a domain violation.
    pub classification: &'static str,
    pub note: String,
}

pub fn peel_row(p: f64, l: f64) -> PeelRow {
    let natural = p >= 0.0 && p == p.round();
    let (coefficient, res) = if natural {
        ("c_log", tau_log_coefficient(p, l * (l + 1.0)).ok_or_else(|| "no log coefficient".to_string()))
    } else {
        ("c2", connection_coeffs(p, l).map(|c| c.1).map_err(|e| e.to_string()))
    };
    match res {
        Ok(v) => PeelRow { p, l, coefficient, value: Some(v), classification: if v == 0.0 { "smooth" } else { "fails" }, note: String::new() },
        Err(note) => PeelRow { p, l, coefficient, value: None, classification: "error", note },
    }
}

pub fn peel(ps: &[f64], ls: &[f64]) -> Vec<PeelRow> {
    ps.iter().flat_map(|&p| ls.iter().map(move |&l| peel_row(p, l))).collect()
}

pub fn peel_csv(rows: &[PeelRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["p", "l", "coefficient", "value", "classification", "note"]).expect("in-memory write");
    for r in rows {
        let value = r.value.map(num).unwrap_or_default();
        w.write_record([num(r.p), num(r.l), r.coefficient.to_string(), value, r.classification.to_string(), r.note.clone()]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// `a`, `a,b,c` or `start:stop:step` (inclusive of `stop` up to rounding).
pub fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    if let [a, b, h] = s.split(':').collect::<Vec<_>>()[..] {
        let (a, b, h) = (parse(a)?, parse(b)?, parse(h)?);
        if !(h > 0.0) || b < a {
            return Err(format!("range {s:?} needs start <= stop and a positive step"));
        }
        let n = ((b - a) / h + 1e-9).floor() as usize;
        if n > 100_000 {
            return Err(format!("range {s:?} has too many points"));
        }
        return Ok((0..=n).map(|i| a + i as f64 * h).collect());
    }
    s.split(',').map(parse).collect()
}

/// The conjectured pattern as CSV; every row is labelled a hypothesis.
pub fn guess_csv(p_max: u32, n_max: u32) -> Result<(String, bool)> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["label", "p", "n", "rhs_odd", "ratio_even", "pass", "exact"]).expect("in-memory write");
    let mut all = true;
    for p in 1..=p_max {
        let rep = check_guess(p, n_max)?;
        all &= rep.all_pass();
        for r in rep.rows {
            let rec = [rep.label.to_string(), p.to_string(), r.n.to_string(), num(r.rhs_odd), num(r.ratio_even), r.pass.to_string(), r.exact.to_string()];
            w.write_record(rec).expect("in-memory write");
        }
    }
    Ok((String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8"), all))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_table_matches() {
        let t = table(5, 10).unwrap();
        assert_eq!((t.compared, t.matched), (66, 66));
        let small = table(2, 3).unwrap();
        assert_eq!(small.compared, 12);
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("0.5").unwrap(), vec![0.5]);
        assert_eq!(parse_list("1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_list("0:1:0.25").unwrap().len(), 5);
        assert!(parse_list("1:0:1").is_err());
        assert!(parse_list("x").is_err());
    }

    #[test]
    fn peel_classifications() {
        let r = peel_row(0.5, 2.0);
        assert_eq!((r.coefficient, r.classification), ("c2", "smooth"));
        let r = peel_row(0.5, 0.3);
        assert_eq!(r.classification, "fails");
        let r = peel_row(2.0, 1.0);
        assert_eq!((r.coefficient, r.value, r.classification), ("c_log", Some(0.0), "smooth"));
        assert_eq!(peel_row(2.0, 0.5).classification, "fails");
        let e = peel_row(-1.0, 0.5);
        assert_eq!(e.classification, "error");
        assert!(!e.note.is_empty());
    }

    #[test]
    fn guess_rows_are_labelled() {
        let (csv, all) = guess_csv(2, 1).unwrap();
        assert!(all);
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.lines().skip(1).all(|l| l.starts_with("HYPOTHESIS,")));
    }
}
