use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

/// Output directory plus the `--dump-intermediates` switch.
pub struct Output {
    dir: PathBuf,
    pub dump: bool,
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, T: Serialize> {
    program: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a C,
    #[serde(flatten)]
    body: &'a T,
}

impl Output {
    pub fn new(dir: PathBuf, dump: bool) -> Result<Self> {
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Output { dir, dump })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// JSON object `{program, version, command, config, ..body}`.
    pub fn json<C: Serialize, T: Serialize>(&self, name: &str, command: &str, config: &C, body: &T) -> Result<PathBuf> {
        let env = Envelope {
            program: "nlmkdv",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
            body,
        };
        let mut s = serde_json::to_string_pretty(&env)?;
        s.push('\n');
        let p = self.path(name);
        fs::write(&p, s).with_context(|| format!("writing {}", p.display()))?;
        Ok(p)
    }

    /// CSV with a leading `# config: {...}` line.
    pub fn csv<C: Serialize>(&self, name: &str, config: &C, header: &str, rows: impl IntoIterator<Item = String>) -> Result<PathBuf> {
        let p = self.path(name);
        let f = fs::File::create(&p).with_context(|| format!("writing {}", p.display()))?;
        let mut w = BufWriter::new(f);
        writeln!(w, "# config: {}", serde_json::to_string(config)?)?;
        writeln!(w, "{header}")?;
        for r in rows {
            writeln!(w, "{r}")?;
        }
        w.flush()?;
        Ok(p)
    }
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}
