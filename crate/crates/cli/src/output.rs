use crate::config::OutputFormat;

/// Rendered command output plus the exit code it implies.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub exit: i32,
}

impl Output {
    pub fn flag(&mut self, code: i32) {
        self.exit = self.exit.max(code);
    }
}

/// Ordered key/value report.
#[derive(Debug, Default)]
pub struct Record(Vec<(String, String)>);

impl Record {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.0.push((key.into(), value.to_string()));
    }

    pub fn render(&self, fmt: OutputFormat) -> String {
        let mut out = String::new();
        if fmt == OutputFormat::Csv {
            out += "key,value\n";
        }
        for (k, v) in &self.0 {
            match fmt {
                OutputFormat::Kv => out += &format!("{k}={v}\n"),
                OutputFormat::Csv => out += &format!("{},{}\n", csv_field(k), csv_field(v)),
            }
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Render rows given as already comma-joined CSV lines.
pub fn table(header: &str, rows: &[String], fmt: OutputFormat) -> String {
    let mut out = String::new();
    match fmt {
        OutputFormat::Csv => {
            out += header;
            out.push('\n');
            for r in rows {
                out += r;
                out.push('\n');
            }
        }
        OutputFormat::Kv => {
            let cols: Vec<&str> = header.split(',').collect();
            for r in rows {
                let line: Vec<String> = cols.iter().zip(r.split(',')).map(|(c, v)| format!("{c}={v}")).collect();
                out += &line.join(" ");
                out.push('\n');
            }
        }
    }
    out
}
