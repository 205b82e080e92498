//! CSV output with a `#` provenance header.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

pub type Sink = csv::Writer<Box<dyn Write>>;

/// Full round-trip precision: 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Opens `out` (or standard output), writes the header lines and returns a
/// CSV writer whose first record should be the column names.
pub fn open(out: Option<&Path>, command: &str, config: &impl Serialize) -> anyhow::Result<Sink> {
    let mut inner: Box<dyn Write> = match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    };
    writeln!(inner, "# fracstep {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(inner, "# command: {command}")?;
    writeln!(inner, "# config: {}", serde_json::to_string(config)?)?;
    Ok(csv::WriterBuilder::new().from_writer(inner))
}
