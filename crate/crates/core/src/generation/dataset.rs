use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generation::{GenStats, Sequent, SplitSpec};
use crate::logic::parse;

/// Where a dataset came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub spec: SplitSpec,
    pub seed: u64,
    pub generator: String,
    pub version: String,
    pub stats: GenStats,
    /// Free-form notes such as pruning counts.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Provenance {
    pub fn new(spec: SplitSpec, stats: GenStats) -> Self {
        Provenance {
            seed: spec.seed,
            spec,
            generator: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            stats,
            notes: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Dataset {
    pub sequents: Vec<Sequent>,
    pub provenance: Option<Provenance>,
}

impl Dataset {
    pub fn new(sequents: Vec<Sequent>) -> Self {
        Dataset {
            sequents,
            provenance: None,
        }
    }

    pub fn len(&self) -> usize {
        self.sequents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequents.is_empty()
    }

    pub fn positives(&self) -> impl Iterator<Item = &Sequent> {
        self.sequents.iter().filter(|s| s.label)
    }

    pub fn negatives(&self) -> impl Iterator<Item = &Sequent> {
        self.sequents.iter().filter(|s| !s.label)
    }

    pub fn write_tsv<W: Write>(&self, mut w: W) -> Result<()> {
        for s in &self.sequents {
            writeln!(w, "{s}")?;
        }
        Ok(())
    }

    /// Reads `premise \t conclusion \t label` lines; blank lines are skipped.
    /// With `verify`, each stored label is checked against the decider.
    pub fn read_tsv<R: Read>(r: R, verify: bool) -> Result<Dataset> {
        let mut sequents = Vec::new();
        for (i, line) in BufReader::new(r).lines().enumerate() {
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            sequents.push(parse_line(line, i + 1, verify)?);
        }
        Ok(Dataset::new(sequents))
    }

    /// Writes the TSV and its `.meta.json` sidecar.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(fs::File::create(path)?);
        self.write_tsv(&mut w)?;
        w.flush()?;
        if let Some(p) = &self.provenance {
            fs::write(sidecar_path(path), serde_json::to_string_pretty(p)? + "\n")?;
        }
        Ok(())
    }

    /// Loads a TSV and, when present, its provenance sidecar. Sidecars
    /// describing other runs (e.g. augmentation) are skipped.
    pub fn load(path: &Path, verify: bool) -> Result<Dataset> {
        let mut d = Dataset::read_tsv(fs::File::open(path)?, verify)?;
        let meta = sidecar_path(path);
        if meta.exists() {
            match serde_json::from_str(&fs::read_to_string(&meta)?) {
                Ok(p) => d.provenance = Some(p),
                Err(e) => log::warn!("{}: not a dataset provenance record ({e})", meta.display()),
            }
        }
        Ok(d)
    }
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    path.with_file_name(name)
}

fn parse_line(line: &str, number: usize, verify: bool) -> Result<Sequent> {
    let fields: Vec<&str> = line.split('\t').collect();
    let bad = |message: String| Error::Format {
        line: number,
        message,
    };
    if fields.len() != 3 {
        return Err(bad(format!(
            "expected 3 tab-separated fields, found {}",
            fields.len()
        )));
    }
    let premise = parse(fields[0]).map_err(|e| bad(format!("premise: {e}")))?;
    let conclusion = parse(fields[1]).map_err(|e| bad(format!("conclusion: {e}")))?;
    let label = match fields[2].trim() {
        "1" => true,
        "0" => false,
        other => return Err(bad(format!("label {other:?} is not 0 or 1"))),
    };
    if verify {
        Sequent::new(premise, conclusion, label)
    } else {
        Ok(Sequent::trusted(premise, conclusion, label))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "(p&q)\tq\t1\n(q|r)\tr\t0\n";
        let d = Dataset::read_tsv(text.as_bytes(), true).unwrap();
        assert_eq!(d.len(), 2);
        let mut out = Vec::new();
        d.write_tsv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
    }

    #[test]
    fn surface_syntax_accepted() {
        let d = Dataset::read_tsv("p & q\tq\t1\r\n\n".as_bytes(), true).unwrap();
        assert_eq!(d.sequents[0].to_string(), "(p&q)\tq\t1");
    }

    #[test]
    fn bad_lines() {
        let err = Dataset::read_tsv("p\tq\n".as_bytes(), false).unwrap_err();
        assert!(matches!(err, Error::Format { line: 1, .. }));
        let err = Dataset::read_tsv("p\tq\t1\np\t(q\t0\n".as_bytes(), false).unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }));
        let err = Dataset::read_tsv("p\tq\t2\n".as_bytes(), false).unwrap_err();
        assert!(matches!(err, Error::Format { .. }));
        let err = Dataset::read_tsv("(q|r)\tr\t1\n".as_bytes(), true).unwrap_err();
        assert!(matches!(err, Error::LabelMismatch { .. }));
        assert!(Dataset::read_tsv("(q|r)\tr\t1\n".as_bytes(), false).is_ok());
    }

    #[test]
    fn sidecar_naming() {
        assert_eq!(
            sidecar_path(Path::new("/tmp/x/train.tsv")),
            Path::new("/tmp/x/train.tsv.meta.json")
        );
    }
}
