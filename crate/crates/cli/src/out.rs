use std::io::{BufWriter, Stdout, Write};

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutMode {
    Json,
    Text,
    Grid,
}

/// Single writer for standard output. JSON mode writes one record per line;
/// text and grid modes write only human-readable lines.
pub struct Out {
    mode: OutMode,
    w: BufWriter<Stdout>,
}

impl Out {
    pub fn new(mode: OutMode) -> Self {
        Out {
            mode,
            w: BufWriter::new(std::io::stdout()),
        }
    }

    pub fn mode(&self) -> OutMode {
        self.mode
    }

    pub fn record(&mut self, json: Value, text: impl FnOnce() -> String) {
        let line = match self.mode {
            OutMode::Json => json.to_string(),
            OutMode::Text | OutMode::Grid => text(),
        };
        let _ = writeln!(self.w, "{line}");
    }

    pub fn raw(&mut self, s: &str) {
        let _ = write!(self.w, "{s}");
    }

    /// Grid output is unavailable for this graph or command.
    pub fn grid_fallback(&mut self) {
        eprintln!("warning: grid output needs a z:2 lattice or the ladder; writing JSON instead");
        self.mode = OutMode::Json;
    }
}

impl Drop for Out {
    fn drop(&mut self) {
        let _ = self.w.flush();
    }
}
