//! Report rows, CSV output and the run manifest.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

/// Where the target of a row comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// An entry of the printed ratio table.
    PrintedTable,
    /// Evaluated from a printed closed-form expression.
    PrintedFormula,
    /// A stated numerical value.
    PrintedValue,
    /// A qualitative claim: a coefficient vanishes, does not vanish, or a rate improves.
    Claim,
    /// An independent numerical oracle.
    Oracle,
    /// An algebraic identity checked on samples.
    Identity,
    /// A conjecture; never blocking.
    Hypothesis,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::PrintedTable => "printed_table",
            Provenance::PrintedFormula => "printed_formula",
            Provenance::PrintedValue => "printed_value",
            Provenance::Claim => "claim",
            Provenance::Oracle => "oracle",
            Provenance::Identity => "identity",
            Provenance::Hypothesis => "hypothesis",
        }
    }
}

/// One asserted quantity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub case: String,
    pub target: String,
    pub value: String,
    pub uncertainty: Option<f64>,
    pub pass: bool,
    /// A failing non-blocking row does not change the exit status.
    pub blocking: bool,
    pub provenance: Provenance,
}

impl Row {
    pub fn new(case: impl Into<String>, target: impl Into<String>, value: impl Into<String>, pass: bool, provenance: Provenance) -> Self {
        Row {
            case: case.into(),
            target: target.into(),
            value: value.into(),
            uncertainty: None,
            pass,
            blocking: provenance != Provenance::Hypothesis,
            provenance,
        }
    }

    pub fn with_uncertainty(mut self, u: f64) -> Self {
        self.uncertainty = Some(u);
        self
    }

    pub fn nonblocking(mut self) -> Self {
        self.blocking = false;
        self
    }
}

/// Shortest round-trip formatting, so reports are byte-identical across runs.
pub fn num(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:e}")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub name: String,
    pub case: String,
    pub rows: Vec<Row>,
}

impl Report {
    pub fn blocking_failures(&self) -> usize {
        self.rows.iter().filter(|r| r.blocking && !r.pass).count()
    }

    pub fn pass(&self) -> bool {
        self.blocking_failures() == 0
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["case", "target", "value", "uncertainty", "pass", "blocking", "provenance"]).expect("in-memory write");
        for r in &self.rows {
            let unc = r.uncertainty.map(num).unwrap_or_default();
            let (pass, blocking) = (r.pass.to_string(), r.blocking.to_string());
            w.write_record([r.case.as_str(), &r.target, &r.value, &unc, &pass, &blocking, r.provenance.as_str()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub name: String,
    pub case: String,
    pub config_sha256: String,
    pub refinements: u32,
    pub tol_scale: f64,
    pub rows: usize,
    pub blocking_failures: usize,
    pub pass: bool,
    pub csv: String,
    pub version: &'static str,
}

pub fn sha256_hex(text: &str) -> String {
    format!("{:x}", Sha256::digest(text.as_bytes()))
}

/// Writes `<csv>` and `<manifest>` under `dir`; returns their paths.
pub fn write_report(dir: &Path, report: &Report, manifest: &Manifest, manifest_name: &str) -> std::io::Result<(PathBuf, PathBuf)> {
    let csv_path = dir.join(&manifest.csv);
    let man_path = dir.join(manifest_name);
    for p in [&csv_path, &man_path] {
        if let Some(parent) = p.parent() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(&csv_path, report.to_csv())?;
    let mut json = serde_json::to_string_pretty(manifest).expect("manifest serialises");
    json.push('\n');
    std::fs::write(&man_path, json)?;
    Ok((csv_path, man_path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_schema_and_quoting() {
        let rep = Report {
            name: "x".into(),
            case: "c".into(),
            rows: vec![
                Row::new("l=1,p=0", "-2", num(-2.0000001), true, Provenance::PrintedFormula).with_uncertainty(1e-7),
                Row::new("guess", "0", "0", false, Provenance::Hypothesis),
            ],
        };
        let csv = rep.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "case,target,value,uncertainty,pass,blocking,provenance");
        assert_eq!(lines[1], "\"l=1,p=0\",-2,-2.0000001e0,1e-7,true,true,printed_formula");
        assert_eq!(lines[2], "guess,0,0,,false,false,hypothesis");
        assert!(rep.pass());
    }

    #[test]
    fn hash_is_stable() {
        assert_eq!(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
