//! Long-format convergence histories: `strategy,trial,sweep,error_sq,residual`.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use shufflesor::IterationHistory;

pub const HEADER: [&str; 5] = ["strategy", "trial", "sweep", "error_sq", "residual"];

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub strategy: String,
    pub trial: usize,
    pub sweep: usize,
    pub error_sq: f64,
    pub residual: f64,
}

pub fn rows_from_history(strategy: &str, trial: usize, history: &IterationHistory) -> Vec<Row> {
    history
        .errors_sq
        .iter()
        .zip(&history.residuals)
        .enumerate()
        .map(|(sweep, (&error_sq, &residual))| Row {
            strategy: strategy.to_string(),
            trial,
            sweep,
            error_sq,
            residual,
        })
        .collect()
}

pub fn write_rows<W: Write>(out: W, rows: &[Row]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.strategy.clone(),
            r.trial.to_string(),
            r.sweep.to_string(),
            format!("{:.16e}", r.error_sq),
            format!("{:.16e}", r.residual),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<R: Read>(input: R) -> Result<Vec<Row>> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != HEADER {
        bail!("unexpected CSV header {:?}; expected {}", header, HEADER.join(","));
    }
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        let line = idx + 2;
        let field = |k: usize| record.get(k).with_context(|| format!("line {line}: missing column {}", HEADER[k]));
        let row = Row {
            strategy: field(0)?.to_string(),
            trial: field(1)?.parse().with_context(|| format!("line {line}: bad trial"))?,
            sweep: field(2)?.parse().with_context(|| format!("line {line}: bad sweep"))?,
            error_sq: field(3)?.parse().with_context(|| format!("line {line}: bad error_sq"))?,
            residual: field(4)?.parse().with_context(|| format!("line {line}: bad residual"))?,
        };
        if !(row.error_sq >= 0.0) {
            bail!("line {line}: error_sq must be non-negative");
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Mean of each strategy's per-trial curves, in order of first appearance.
/// Trials that stopped early are held at their last value.
pub fn mean_curves(rows: &[Row]) -> Vec<(String, Vec<f64>)> {
    let mut groups: Vec<(String, Vec<Vec<f64>>)> = Vec::new();
    for r in rows {
        let idx = match groups.iter().position(|(s, _)| *s == r.strategy) {
            Some(i) => i,
            None => {
                groups.push((r.strategy.clone(), Vec::new()));
                groups.len() - 1
            }
        };
        let trials = &mut groups[idx].1;
        if trials.len() <= r.trial {
            trials.resize(r.trial + 1, Vec::new());
        }
        let curve = &mut trials[r.trial];
        if curve.len() <= r.sweep {
            curve.resize(r.sweep + 1, f64::NAN);
        }
        curve[r.sweep] = r.error_sq;
    }
    groups
        .into_iter()
        .map(|(name, trials)| {
            let trials: Vec<Vec<f64>> = trials.into_iter().filter(|c| !c.is_empty()).collect();
            let len = trials.iter().map(Vec::len).max().unwrap_or(0);
            let mean = (0..len)
                .map(|k| {
                    let sum: f64 = trials.iter().map(|c| c[k.min(c.len() - 1)]).sum();
                    sum / trials.len() as f64
                })
                .collect();
            (name, mean)
        })
        .collect()
}
