//! CSV rows. Timing columns come last and end in `_us`.

use std::io::Write;
use std::time::Duration;

use serde::Serialize;

use crate::error::Result;

/// One flow computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsvRecord {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub solver: String,
    pub cut_strategy: String,
    pub source: usize,
    pub sink: usize,
    pub source_degree: usize,
    pub sink_degree: usize,
    pub flow_value: i64,
    pub rounds: usize,
    /// s-t distance found by the first BFS; empty when disconnected.
    pub initial_distance: Option<u32>,
    pub augmenting_paths: u64,
    pub bfs_edges_total: u64,
    pub dfs_edges_total: u64,
    pub forward: u64,
    pub backward: u64,
    pub next_forward: u64,
    pub next_backward: u64,
    pub intersection: u64,
    pub init_writes: u64,
    /// Arc flow updates made by this flow computation.
    pub augmented_arcs: u64,
    /// Arcs written by the reset that followed it.
    pub reset_arcs: u64,
    pub build_us: f64,
    pub reset_us: f64,
    pub init_us: f64,
    pub bfs_us: f64,
    pub dfs_us: f64,
    pub preflow_us: f64,
    pub convert_us: f64,
    pub cut_us: f64,
    pub flow_us: f64,
    pub total_us: f64,
}

impl CsvRecord {
    pub fn edges_total(&self) -> u64 {
        self.bfs_edges_total + self.dfs_edges_total
    }
}

/// Per (size, solver) summary of a scaling run. Standard deviations are
/// population deviations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRecord {
    pub n: usize,
    pub solver: String,
    pub flows: usize,
    pub mean_edges: f64,
    pub sd_edges: f64,
    pub mean_bfs_edges: f64,
    pub sd_bfs_edges: f64,
    pub mean_dfs_edges: f64,
    pub sd_dfs_edges: f64,
    pub mean_rounds: f64,
    pub mean_flow_us: f64,
    pub sd_flow_us: f64,
}

/// Summary of one Gomory-Hu construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GhSummary {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub oracle: String,
    pub cut_strategy: String,
    pub oracle_calls: usize,
    pub trivial_cuts: usize,
    pub reparented: usize,
    pub source_degree_sum: u64,
    pub sink_degree_sum: u64,
    pub build_us: f64,
    pub init_us: f64,
    pub bfs_us: f64,
    pub dfs_us: f64,
    pub preflow_us: f64,
    pub convert_us: f64,
    pub cut_us: f64,
    pub flow_us: f64,
    pub total_us: f64,
}

pub(crate) fn micros(d: Duration) -> f64 {
    d.as_nanos() as f64 / 1000.0
}

pub fn mean_sd(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    let values: Vec<f64> = values.into_iter().collect();
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / k;
    (mean, var.sqrt())
}

/// Writes a header row and the records, `\n`-terminated.
pub fn write_csv<T: Serialize>(w: impl Write, records: &[T]) -> Result<()> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    for r in records {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn to_csv_string<T: Serialize>(records: &[T]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, records)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// The CSV with every `_us` column removed.
pub fn strip_timing_columns(text: &str) -> Result<String> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(text.as_bytes());
    let mut rows = reader.records();
    let Some(header) = rows.next().transpose()? else {
        return Ok(String::new());
    };
    let keep: Vec<usize> = (0..header.len()).filter(|&i| !header[i].ends_with("_us")).collect();
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    out.write_record(keep.iter().map(|&i| &header[i]))?;
    for row in rows {
        let row = row?;
        out.write_record(keep.iter().map(|&i| &row[i]))?;
    }
    let bytes = out.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_deviation() {
        let (m, sd) = mean_sd([2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_eq!((m, sd), (5.0, 2.0));
        assert_eq!(mean_sd([]), (0.0, 0.0));
    }

    #[test]
    fn timing_columns_are_dropped() {
        let text = "a,b_us,c\n1,2.5,3\n4,0.1,6\n";
        assert_eq!(strip_timing_columns(text).unwrap(), "a,c\n1,3\n4,6\n");
    }
}
