//! The JSON envelope shared by every subcommand, and CSV tables.

use std::io::Write;

use cycord_core::exactnum::QuadSurd;
use serde::Serialize;
use serde_json::{json, Map, Value};

/// Digits used for decimal renderings of exact values. These strings are for
/// reading only and never feed back into a computation.
pub const DISPLAY_DIGITS: u32 = 12;

pub fn decimal(x: &QuadSurd) -> String {
    x.to_decimal(DISPLAY_DIGITS)
}

#[derive(Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub counters: Value,
    /// Decimal renderings of exact outputs; display only.
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub display_only: Map<String, Value>,
    pub wall_time_ms: u64,
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// What a subcommand hands back to `main`.
pub struct Outcome {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub counters: Value,
    pub display: Map<String, Value>,
    pub table: Option<Table>,
    /// A bounded search ran out of budget without an answer.
    pub exhausted: bool,
}

impl Outcome {
    pub fn new(command: &str, inputs: Value, outputs: Value) -> Self {
        Self {
            command: command.into(),
            inputs,
            outputs,
            counters: json!({}),
            display: Map::new(),
            table: None,
            exhausted: false,
        }
    }

    pub fn counters(mut self, counters: Value) -> Self {
        self.counters = counters;
        self
    }

    pub fn show(mut self, key: &str, value: &QuadSurd) -> Self {
        self.display.insert(key.into(), Value::String(decimal(value)));
        self
    }

    pub fn table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn exhausted(mut self, exhausted: bool) -> Self {
        self.exhausted = exhausted;
        self
    }

    pub fn into_report(self, wall_time_ms: u64) -> RunReport {
        RunReport {
            command: self.command,
            inputs: self.inputs,
            outputs: self.outputs,
            counters: self.counters,
            display_only: self.display,
            wall_time_ms,
        }
    }
}

pub fn write_csv(table: &Table, out: impl Write) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}
