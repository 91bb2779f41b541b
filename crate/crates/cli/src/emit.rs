use std::io::{self, Write};
use std::sync::Mutex;

use serde_json::{Map, Value};

/// Serialises every output line through one lock so records from solver
/// workers never interleave.
pub struct Emitter {
    human: bool,
    out: Mutex<io::Stdout>,
}

impl Emitter {
    pub fn new(human: bool) -> Self {
        Self {
            human,
            out: Mutex::new(io::stdout()),
        }
    }

    pub fn human(&self) -> bool {
        self.human
    }

    /// One record per line: compact JSON, or `key=value` pairs with `--human`.
    pub fn record(&self, record: &str, fields: Value) {
        let mut map = Map::new();
        map.insert("record".into(), Value::String(record.into()));
        if let Value::Object(rest) = fields {
            map.extend(rest);
        }
        let line = if self.human {
            render_human(&map)
        } else {
            Value::Object(map).to_string()
        };
        self.line(&line);
    }

    /// Raw text line, used for `--human` tables.
    pub fn line(&self, line: &str) {
        let mut out = self.out.lock().unwrap_or_else(|e| e.into_inner());
        // a closed pipe is not worth a panic
        let _ = writeln!(out, "{line}");
        let _ = out.flush();
    }
}

fn render_human(map: &Map<String, Value>) -> String {
    let mut parts = Vec::with_capacity(map.len());
    for (k, v) in map {
        match v {
            Value::Null => continue,
            Value::String(s) if k == "record" => parts.push(format!("[{s}]")),
            Value::String(s) => parts.push(format!("{k}={s}")),
            other => parts.push(format!("{k}={other}")),
        }
    }
    parts.join("  ")
}
