use std::io::{self, Write};

use clap::ValueEnum;
use oscent::sweep::{Family, SweepRow};
use oscent::verify::VerifyRow;
use oscent::{EntropyReport, StateSpec};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    #[serde(rename = "D")]
    pub dims: usize,
    pub ns: Vec<u32>,
    pub alpha: f64,
    #[serde(rename = "S_position")]
    pub position: f64,
    #[serde(rename = "S_momentum")]
    pub momentum: f64,
    #[serde(rename = "S_sum")]
    pub sum: f64,
    pub energy: f64,
    pub abs_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_delta: Option<f64>,
}

impl OutputRecord {
    pub fn new(state: &StateSpec, report: EntropyReport, oracle: Option<f64>) -> Self {
        Self {
            dims: state.dims(),
            ns: state.occupations().to_vec(),
            alpha: state.alpha(),
            position: report.position_entropy,
            momentum: report.momentum_entropy,
            sum: report.uncertainty_sum,
            energy: report.energy,
            abs_error: report.abs_error_estimate,
            oracle,
            oracle_delta: oracle.map(|o| (report.position_entropy - o).abs()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub family: &'static str,
    #[serde(rename = "D")]
    pub dims: usize,
    pub ns: Vec<u32>,
    pub alpha: f64,
    #[serde(rename = "S_position")]
    pub position: f64,
}

impl SweepRecord {
    pub fn new(family: Family, row: &SweepRow) -> Self {
        Self {
            family: family.name(),
            dims: row.dims,
            ns: row.state.occupations().to_vec(),
            alpha: row.state.alpha(),
            position: row.position_entropy,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyRecord {
    pub n: u32,
    pub alpha: f64,
    #[serde(rename = "S_formula")]
    pub formula: f64,
    #[serde(rename = "S_oracle")]
    pub oracle: f64,
    pub delta: f64,
    pub oracle_error: f64,
    pub pass: bool,
}

impl VerifyRecord {
    pub fn new(row: &VerifyRow, tol: f64) -> Self {
        Self {
            n: row.n,
            alpha: row.alpha,
            formula: row.formula,
            oracle: row.oracle,
            delta: row.delta,
            oracle_error: row.oracle_error,
            pass: row.delta <= tol,
        }
    }
}

/// Every digit needed to recover the `f64` exactly.
fn exact(x: f64) -> String {
    format!("{x:.16e}")
}

fn join(ns: &[u32]) -> String {
    ns.iter().map(u32::to_string).collect::<Vec<_>>().join(";")
}

pub struct Sink<'a, W: Write> {
    format: Format,
    out: &'a mut W,
}

impl<'a, W: Write> Sink<'a, W> {
    pub fn new(format: Format, out: &'a mut W) -> Self {
        Self { format, out }
    }

    pub fn finish(self) -> io::Result<()> {
        self.out.flush()
    }

    fn json<T: Serialize>(&mut self, records: &[T]) -> io::Result<()> {
        for r in records {
            serde_json::to_writer(&mut *self.out, r)?;
            writeln!(self.out)?;
        }
        Ok(())
    }

    fn csv(&mut self, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(&mut *self.out);
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn compute(&mut self, r: &OutputRecord, momentum: bool, sum: bool) -> csv::Result<()> {
        match self.format {
            Format::Json => self.json(std::slice::from_ref(r))?,
            Format::Csv => {
                let mut header = vec![
                    "D",
                    "ns",
                    "alpha",
                    "S_position",
                    "S_momentum",
                    "S_sum",
                    "energy",
                    "abs_error",
                ];
                let mut row = vec![
                    r.dims.to_string(),
                    join(&r.ns),
                    exact(r.alpha),
                    exact(r.position),
                    exact(r.momentum),
                    exact(r.sum),
                    exact(r.energy),
                    exact(r.abs_error),
                ];
                if let (Some(o), Some(d)) = (r.oracle, r.oracle_delta) {
                    header.extend(["oracle", "oracle_delta"]);
                    row.extend([exact(o), exact(d)]);
                }
                self.csv(&header, std::iter::once(row))?;
            }
            Format::Table => {
                let mut header = format!(
                    "{:>3}  {:<16} {:>10}  {:>20}",
                    "D", "ns", "alpha", "S_position [nats]"
                );
                let mut row = format!(
                    "{:>3}  {:<16} {:>10.7}  {:>20.7}",
                    r.dims,
                    r.ns.iter()
                        .map(u32::to_string)
                        .collect::<Vec<_>>()
                        .join(","),
                    r.alpha,
                    r.position
                );
                if momentum {
                    header += &format!("  {:>20}", "S_momentum [nats]");
                    row += &format!("  {:>20.7}", r.momentum);
                }
                if sum {
                    header += &format!("  {:>16}", "S_sum [nats]");
                    row += &format!("  {:>16.7}", r.sum);
                }
                header += &format!("  {:>16}  {:>10}", "energy", "abs_error");
                row += &format!("  {:>16.7}  {:>10.2e}", r.energy, r.abs_error);
                if let (Some(o), Some(d)) = (r.oracle, r.oracle_delta) {
                    header += &format!("  {:>16}  {:>10}", "oracle [nats]", "delta");
                    row += &format!("  {:>16.7}  {:>10.2e}", o, d);
                }
                writeln!(self.out, "{header}")?;
                writeln!(self.out, "{row}")?;
            }
        }
        Ok(())
    }

    pub fn sweep(&mut self, records: &[SweepRecord]) -> csv::Result<()> {
        match self.format {
            Format::Json => self.json(records)?,
            Format::Csv => self.csv(
                &["family", "D", "ns", "alpha", "S_position"],
                records.iter().map(|r| {
                    vec![
                        r.family.to_string(),
                        r.dims.to_string(),
                        join(&r.ns),
                        exact(r.alpha),
                        exact(r.position),
                    ]
                }),
            )?,
            Format::Table => {
                writeln!(
                    self.out,
                    "{:<12} {:>3}  {:>20}",
                    "family", "D", "S_position [nats]"
                )?;
                for r in records {
                    writeln!(
                        self.out,
                        "{:<12} {:>3}  {:>20.7}",
                        r.family, r.dims, r.position
                    )?;
                }
            }
        }
        Ok(())
    }

    pub fn verify(&mut self, records: &[VerifyRecord]) -> csv::Result<()> {
        match self.format {
            Format::Json => self.json(records)?,
            Format::Csv => self.csv(
                &[
                    "n",
                    "alpha",
                    "S_formula",
                    "S_oracle",
                    "delta",
                    "oracle_error",
                    "pass",
                ],
                records.iter().map(|r| {
                    vec![
                        r.n.to_string(),
                        exact(r.alpha),
                        exact(r.formula),
                        exact(r.oracle),
                        exact(r.delta),
                        exact(r.oracle_error),
                        r.pass.to_string(),
                    ]
                }),
            )?,
            Format::Table => {
                writeln!(
                    self.out,
                    "{:>3}  {:>10}  {:>18}  {:>18}  {:>10}  {:>4}",
                    "n", "alpha", "formula [nats]", "oracle [nats]", "delta", "ok"
                )?;
                for r in records {
                    writeln!(
                        self.out,
                        "{:>3}  {:>10.7}  {:>18.7}  {:>18.7}  {:>10.2e}  {:>4}",
                        r.n,
                        r.alpha,
                        r.formula,
                        r.oracle,
                        r.delta,
                        if r.pass { "yes" } else { "NO" }
                    )?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_format_round_trips() {
        for x in [
            1.0723649429247001,
            0.1 + 0.2,
            5e-324,
            1.7976931348623157e308,
            -2.5,
        ] {
            assert_eq!(exact(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn joins_occupations() {
        assert_eq!(join(&[1, 0, 2]), "1;0;2");
        assert_eq!(join(&[]), "");
    }
}
