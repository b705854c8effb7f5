//! Grouped runtime statistics and cactus-plot listings.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;

use crate::record::{Outcome, RunRecord};

/// Statistics of one (map, d, δ) group. Runtime columns cover completed runs
/// only (solved or proven infeasible); timeouts are counted separately.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub map: String,
    pub d: usize,
    pub delta: Option<f64>,
    pub runs: usize,
    pub solved: usize,
    pub infeasible: usize,
    pub timeouts: usize,
    pub errors: usize,
    pub min_seconds: Option<f64>,
    pub mean_seconds: Option<f64>,
    pub max_seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CactusRow {
    pub map: String,
    pub d: usize,
    pub delta: Option<f64>,
    pub rank: usize,
    pub seconds: f64,
}

type GroupKey = (String, usize, Option<u64>);

fn key(r: &RunRecord) -> GroupKey {
    (r.map.clone(), r.d, r.delta.map(f64::to_bits))
}

/// Groups in order of first appearance.
fn groups(records: &[RunRecord]) -> Vec<Vec<&RunRecord>> {
    let mut keys: Vec<GroupKey> = Vec::new();
    let mut out: Vec<Vec<&RunRecord>> = Vec::new();
    for r in records {
        let k = key(r);
        match keys.iter().position(|x| *x == k) {
            Some(i) => out[i].push(r),
            None => {
                keys.push(k);
                out.push(vec![r]);
            }
        }
    }
    out
}

pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    groups(records)
        .into_iter()
        .map(|group| {
            let count = |o: Outcome| group.iter().filter(|r| r.outcome == o).count();
            let times: Vec<f64> = group
                .iter()
                .filter(|r| r.outcome.completed())
                .map(|r| r.seconds)
                .collect();
            let (min, mean, max) = if times.is_empty() {
                (None, None, None)
            } else {
                let min = times.iter().copied().fold(f64::INFINITY, f64::min);
                let max = times.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (
                    Some(min),
                    Some(times.iter().sum::<f64>() / times.len() as f64),
                    Some(max),
                )
            };
            SummaryRow {
                map: group[0].map.clone(),
                d: group[0].d,
                delta: group[0].delta,
                runs: group.len(),
                solved: times.len(),
                infeasible: count(Outcome::Infeasible),
                timeouts: count(Outcome::Timeout),
                errors: count(Outcome::Error) + count(Outcome::NegativeCycle),
                min_seconds: min,
                mean_seconds: mean,
                max_seconds: max,
            }
        })
        .collect()
}

/// Completed runtimes of each group in ascending order, ranked from 1.
pub fn cactus(records: &[RunRecord]) -> Vec<CactusRow> {
    let mut out = Vec::new();
    for group in groups(records) {
        let mut times: Vec<f64> = group
            .iter()
            .filter(|r| r.outcome.completed())
            .map(|r| r.seconds)
            .collect();
        times.sort_by(f64::total_cmp);
        for (i, seconds) in times.into_iter().enumerate() {
            out.push(CactusRow {
                map: group[0].map.clone(),
                d: group[0].d,
                delta: group[0].delta,
                rank: i + 1,
                seconds,
            });
        }
    }
    out
}

pub fn write_rows<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
