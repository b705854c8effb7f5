//! Per-run result rows and their CSV / JSON encodings.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use rcsp_core::{Cost, CostVector};
use serde::{Deserialize, Serialize};

pub const CSV_HEADER: &str = "map,instance,start,goal,delta,d,outcome,seconds,num_solutions,solutions";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Solved,
    Timeout,
    Infeasible,
    NegativeCycle,
    /// The run could not start: unreadable or malformed input.
    Error,
}

impl Outcome {
    /// Finished inside the time limit, with or without a solution.
    pub fn completed(self) -> bool {
        matches!(self, Outcome::Solved | Outcome::Infeasible)
    }
}

/// One solver run. `start` and `goal` are one-based, as in the input files;
/// `seconds` covers heuristics, limit generation and search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub map: String,
    pub instance: usize,
    pub start: u32,
    pub goal: u32,
    pub delta: Option<f64>,
    pub d: usize,
    pub outcome: Outcome,
    pub seconds: f64,
    pub num_solutions: usize,
    #[serde(with = "solution_list")]
    pub solutions: Vec<CostVector>,
}

/// `(c1;c2;...)` vectors joined by `|`.
pub fn encode_solutions(solutions: &[CostVector]) -> String {
    solutions
        .iter()
        .map(|v| {
            let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
            format!("({})", parts.join(";"))
        })
        .collect::<Vec<_>>()
        .join("|")
}

pub fn decode_solutions(text: &str) -> Result<Vec<CostVector>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split('|')
        .map(|item| {
            let Some(inner) = item.strip_prefix('(').and_then(|s| s.strip_suffix(')')) else {
                bail!("malformed cost vector {item:?}");
            };
            let costs = inner
                .split(';')
                .map(|c| c.parse::<Cost>().with_context(|| format!("bad cost {c:?} in {item:?}")))
                .collect::<Result<Vec<_>>>()?;
            Ok(CostVector::new(costs))
        })
        .collect()
}

mod solution_list {
    use rcsp_core::CostVector;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[CostVector], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::encode_solutions(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<CostVector>, D::Error> {
        let text = String::deserialize(d)?;
        super::decode_solutions(&text).map_err(serde::de::Error::custom)
    }
}

pub fn write_csv<W: Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<RunRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != CSV_HEADER {
        bail!("unexpected CSV header {:?}", header.join(","));
    }
    r.deserialize().map(|row| Ok(row?)).collect()
}

pub fn write_json<W: Write>(records: &[RunRecord], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, records)?;
    writeln!(out)?;
    Ok(())
}

pub fn read_json<R: Read>(input: R) -> Result<Vec<RunRecord>> {
    Ok(serde_json::from_reader(input)?)
}
