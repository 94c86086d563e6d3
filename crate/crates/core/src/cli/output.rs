//! Writing results, manifests and plot scripts.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::{Common, Format};
use crate::error::Result;

/// One command's results in both encodings.
pub(super) struct Rendered {
    pub csv: String,
    pub json: Value,
    pub gnuplot: Option<String>,
}

/// Files written so far, removed again if the command fails.
#[derive(Default)]
pub(super) struct Artifacts {
    written: Vec<PathBuf>,
}

impl Artifacts {
    /// Write via a temporary sibling and rename, so readers never see a
    /// half-written file.
    pub fn write_side_file(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".partial");
        let tmp = PathBuf::from(tmp);
        let result = std::fs::write(&tmp, bytes).and_then(|_| std::fs::rename(&tmp, path));
        if let Err(e) = result {
            let _ = std::fs::remove_file(&tmp);
            return Err(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())).into());
        }
        self.written.push(path.to_path_buf());
        Ok(())
    }

    pub fn discard(&mut self) {
        for p in self.written.drain(..) {
            let _ = std::fs::remove_file(p);
        }
    }

    pub fn emit(&mut self, common: &Common, rendered: Rendered, manifest: Value) -> Result<()> {
        let body = match common.format {
            Format::Csv => rendered.csv.into_bytes(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&json!({
                    "manifest": manifest,
                    "results": rendered.json,
                }))
                .expect("serializable");
                s.push('\n');
                s.into_bytes()
            }
        };
        let Some(path) = &common.output else {
            std::io::stdout().lock().write_all(&body)?;
            return Ok(());
        };
        self.write_side_file(path, &body)?;
        if common.format == Format::Csv {
            let mut m = serde_json::to_string_pretty(&json!({ "manifest": manifest })).expect("serializable");
            m.push('\n');
            self.write_side_file(&sibling(path, "manifest.json"), m.as_bytes())?;
        }
        if common.gnuplot {
            match (&rendered.gnuplot, common.format) {
                (Some(script), Format::Csv) => {
                    let name = path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
                    let text = script.replace("@DATA@", &name);
                    self.write_side_file(&sibling(path, "gp"), text.as_bytes())?;
                }
                _ => eprintln!("pcf: no gnuplot script for this command/format"),
            }
        }
        Ok(())
    }
}

fn sibling(path: &Path, ext: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// CSV with the given columns taken from each JSON object row.
pub(super) fn table_csv(columns: &[&str], rows: &[Value]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns).map_err(crate::tree::csv_err)?;
    for row in rows {
        let record: Vec<String> = columns
            .iter()
            .map(|c| match &row[*c] {
                Value::Null => String::new(),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect();
        w.write_record(&record).map_err(crate::tree::csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

pub(super) fn gnuplot_loglog(x: usize, y: usize) -> String {
    format!(
        "set datafile separator ','\nset key autotitle columnhead\nset logscale xy\n\
         plot '@DATA@' using {x}:{y} with points pt 7 ps 0.4\n"
    )
}

pub(super) fn gnuplot_columns(title: &str, x: usize, y: usize) -> String {
    format!(
        "set datafile separator ','\nset key autotitle columnhead\n\
         plot '@DATA@' using {x}:{y} with linespoints title '{title}'\n"
    )
}

pub(super) fn gnuplot_crossing(sizes: &[u32]) -> String {
    let mut s = String::from(
        "set datafile separator ','\nset xlabel 'alpha'\nset ylabel 'crossing probability'\nplot ",
    );
    let parts: Vec<String> = sizes
        .iter()
        .map(|n| {
            format!("'@DATA@' using ($2=={n} ? $1 : 1/0):5:6:7 with yerrorlines title 'n={n}'")
        })
        .collect();
    s.push_str(&parts.join(", \\\n     "));
    s.push('\n');
    s
}
