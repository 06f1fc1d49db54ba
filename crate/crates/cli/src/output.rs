use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

pub const SCHEMA_LINE: &str = "# schema=1";

/// 17 significant digits in scientific notation.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// CSV text with the schema line, optional `# key=value` lines and a header row.
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(meta: &[String], columns: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str(SCHEMA_LINE);
        buf.push('\n');
        for line in meta {
            let _ = writeln!(buf, "# {line}");
        }
        buf.push_str(&columns.join(","));
        buf.push('\n');
        Self { buf }
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            self.buf.push_str(f.as_ref());
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(path: Option<&Path>, content: &str) -> io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, content),
        None => {
            let mut out = io::stdout().lock();
            match out.write_all(content.as_bytes()).and_then(|_| out.flush()) {
                // a closed reader (e.g. `head`) is not an error
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
                r => r,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(num(0.5), "5.0000000000000000e-1");
        assert_eq!(num(-1234.5), "-1.2345000000000000e3");
        assert_eq!(num(f64::NAN), "NaN");
        assert_eq!(num(f64::NEG_INFINITY), "-inf");
        // round trip through 17 significant digits
        let v = 0.1 + 0.2;
        assert_eq!(num(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn csv_layout() {
        let mut csv = Csv::new(&["function=h".into()], &["t", "value"]);
        csv.row(&[num(0.0), num(0.5)]);
        assert_eq!(
            csv.finish(),
            "# schema=1\n# function=h\nt,value\n0.0000000000000000e0,5.0000000000000000e-1\n"
        );
    }
}
