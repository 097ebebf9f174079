//! Multi-run campaigns, summary statistics and result export.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use serde::{Deserialize, Serialize};

use crate::ea::{run, RunConfig, RunRecord};
use crate::error::{Error, Result};

/// A batch of independent runs of one configuration. Run `i` uses seed
/// `seed_base + i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Campaign {
    pub config: RunConfig,
    pub runs: usize,
    pub seed_base: u64,
    pub workers: usize,
    /// Keep wall-clock times in the records. Off by default so repeated
    /// campaigns produce byte-identical logs.
    pub record_timing: bool,
}

impl Campaign {
    pub fn new(config: RunConfig, runs: usize, seed_base: u64) -> Self {
        Self {
            config,
            runs,
            seed_base,
            workers: 1,
            record_timing: false,
        }
    }

    pub fn seeds(&self) -> Result<Vec<u64>> {
        (0..self.runs as u64)
            .map(|i| {
                self.seed_base
                    .checked_add(i)
                    .ok_or_else(|| Error::Config("seed range overflows u64".into()))
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::Config("a campaign needs at least one run".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("worker count must be at least 1".into()));
        }
        self.seeds()?;
        self.config.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub label: String,
    pub runs: usize,
    pub max: f64,
    pub avg: f64,
    /// Sample standard deviation; zero for a single run.
    pub std: f64,
}

pub fn summarize(label: &str, values: &[f64]) -> Result<SummaryRow> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let k = values.len() as f64;
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let avg = values.iter().sum::<f64>() / k;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - avg) * (v - avg)).sum::<f64>() / (k - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(SummaryRow {
        label: label.to_string(),
        runs: values.len(),
        max,
        avg,
        std,
    })
}

/// One summary row per label, labels in sorted order.
pub fn summarize_records(records: &[RunRecord]) -> Result<Vec<SummaryRow>> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    group_by_label(records)
        .iter()
        .map(|(label, values)| summarize(label, values))
        .collect()
}

fn group_by_label(records: &[RunRecord]) -> BTreeMap<&str, Vec<f64>> {
    let mut groups: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for r in records {
        groups.entry(r.label.as_str()).or_default().push(r.fitness);
    }
    groups
}

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignResult {
    /// In seed order, independent of the worker count.
    pub records: Vec<RunRecord>,
    pub summary: SummaryRow,
}

/// Runs every seed of the campaign on a bounded pool of worker threads.
pub fn run_campaign(c: &Campaign) -> Result<CampaignResult> {
    c.validate()?;
    let seeds = c.seeds()?;
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, Result<RunRecord>)>();
    let workers = c.workers.min(seeds.len());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            let tx = tx.clone();
            let (next, seeds) = (&next, &seeds);
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= seeds.len() {
                    break;
                }
                let mut cfg = c.config.clone();
                cfg.seed = seeds[i];
                let outcome = run(&cfg).map(|mut r| {
                    if !c.record_timing {
                        r.elapsed_secs = None;
                    }
                    r
                });
                if tx.send((i, outcome)).is_err() {
                    break;
                }
            });
        }
    });
    drop(tx);
    let mut slots: Vec<Option<RunRecord>> = vec![None; seeds.len()];
    for (i, outcome) in rx {
        slots[i] = Some(outcome?);
    }
    let records: Vec<RunRecord> = slots
        .into_iter()
        .map(|r| r.expect("every seed reports exactly once"))
        .collect();
    let values: Vec<f64> = records.iter().map(|r| r.fitness).collect();
    let summary = summarize(&c.config.label(), &values)?;
    Ok(CampaignResult { records, summary })
}

pub fn write_jsonl<W: Write>(mut out: W, records: &[RunRecord]) -> Result<()> {
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<RunRecord>> {
    let mut records = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        records.push(serde_json::from_str(&line).map_err(|e| Error::Io(format!("line {}: {e}", i + 1)))?);
    }
    Ok(records)
}

pub fn write_summary_csv<W: Write>(mut out: W, rows: &[SummaryRow]) -> Result<()> {
    writeln!(out, "label,runs,max,avg,std")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.label, r.runs, r.max, r.avg, r.std)?;
    }
    Ok(())
}

/// Final fitness per run, one column per label in sorted order. Shorter
/// columns are padded with empty cells.
pub fn export_boxplot_data<W: Write>(mut out: W, records: &[RunRecord]) -> Result<()> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let groups = group_by_label(records);
    let header: Vec<&str> = groups.keys().copied().collect();
    writeln!(out, "{}", header.join(","))?;
    let rows = groups.values().map(Vec::len).max().unwrap_or(0);
    for i in 0..rows {
        let cells: Vec<String> = groups
            .values()
            .map(|v| v.get(i).map(|x| x.to_string()).unwrap_or_default())
            .collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}
