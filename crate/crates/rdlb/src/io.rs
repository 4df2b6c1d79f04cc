//! Trace and workload file formats.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rdlb_core::sim::TraceRecord;

use crate::error::{io_err, Error, Result};

pub const TRACE_HEADER: &str = "time\tkind\tpe\tchunk_start\tchunk_size\tduplicate";

/// Tab-separated event trace, one event per line; absent chunk fields are
/// written as `-`.
pub fn write_trace<W: Write>(mut w: W, trace: &[TraceRecord]) -> std::io::Result<()> {
    writeln!(w, "{TRACE_HEADER}")?;
    let opt = |x: Option<usize>| x.map_or_else(|| "-".to_string(), |v| v.to_string());
    for r in trace {
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.time,
            r.kind.name(),
            r.pe,
            opt(r.chunk_start),
            opt(r.chunk_size),
            u8::from(r.duplicate)
        )?;
    }
    Ok(())
}

pub fn save_trace(path: &Path, trace: &[TraceRecord]) -> Result<()> {
    let f = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(f);
    write_trace(&mut w, trace)
        .and_then(|_| w.flush())
        .map_err(io_err(path))
}

/// One iteration time (seconds) per line. Blank lines and `#` comments are
/// skipped.
pub fn parse_workload(text: &str) -> std::result::Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let t: f64 = line
            .parse()
            .map_err(|_| format!("line {}: not a number: `{line}`", i + 1))?;
        if !(t >= 0.0 && t.is_finite()) {
            return Err(format!(
                "line {}: time must be finite and non-negative",
                i + 1
            ));
        }
        out.push(t);
    }
    Ok(out)
}

pub fn read_workload(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_workload(&text).map_err(|msg| Error::Config {
        path: path.display().to_string(),
        line: 0,
        msg,
    })
}

pub fn write_workload(path: &Path, times: &[f64]) -> Result<()> {
    let f = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(f);
    times
        .iter()
        .try_for_each(|t| writeln!(w, "{t}"))
        .and_then(|_| w.flush())
        .map_err(io_err(path))
}
