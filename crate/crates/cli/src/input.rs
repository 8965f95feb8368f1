use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use bipforest::generate::Source;
use bipforest::{generate_corpus, parse_graph6_file, parse_planar_code, CorpusEntry, Family, GenOptions};
use clap::{Args, ValueEnum};

/// A bad combination of flags; exits with the usage status.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct Usage(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[value(name = "graph6")]
    Graph6,
    #[value(name = "planar_code", alias = "planar-code")]
    PlanarCode,
}

pub fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s).ok_or_else(|| {
        let names: Vec<_> = Family::ALL.iter().map(|f| f.name()).collect();
        format!("unknown family {s:?}; expected one of {}", names.join(", "))
    })
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Generator family
    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,
    /// Members to generate
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Smallest order for random families
    #[arg(long, default_value_t = 8)]
    pub min_n: usize,
    /// Largest order for random families
    #[arg(long, default_value_t = 20)]
    pub max_n: usize,
}

impl GenArgs {
    pub fn generate(&self, family: Family) -> Vec<CorpusEntry> {
        let opts = GenOptions {
            seed: self.seed,
            min_n: self.min_n,
            max_n: self.max_n.max(self.min_n),
        };
        generate_corpus(family, self.count, &opts)
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Graph file, or "-" for standard input
    #[arg(long, short, conflicts_with = "family")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "graph6")]
    pub format: Format,
    #[command(flatten)]
    pub gen: GenArgs,
}

impl InputArgs {
    pub fn load(&self) -> Result<Vec<CorpusEntry>> {
        match (&self.input, self.gen.family) {
            (Some(path), _) => read_corpus(path, self.format),
            (None, Some(f)) => Ok(self.gen.generate(f)),
            (None, None) => Err(Usage("give --input or --family".into()).into()),
        }
    }
}

fn read_corpus(path: &Path, format: Format) -> Result<Vec<CorpusEntry>> {
    let bytes = if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        buf
    } else {
        fs::read(path).with_context(|| format!("reading {}", path.display()))?
    };
    let stem = path.file_stem().map_or("stdin".into(), |s| s.to_string_lossy().into_owned());
    Ok(match format {
        Format::Graph6 => parse_graph6_file(&bytes)?
            .into_iter()
            .enumerate()
            .map(|(i, graph)| CorpusEntry {
                id: format!("{stem}-{i}"),
                source: Source::File,
                graph,
                plane: None,
                attested_planar: false,
            })
            .collect(),
        Format::PlanarCode => parse_planar_code(&bytes)?
            .into_iter()
            .enumerate()
            .map(|(i, pg)| CorpusEntry {
                id: format!("{stem}-{i}"),
                source: Source::File,
                graph: pg.graph().clone(),
                plane: Some(pg),
                attested_planar: true,
            })
            .collect(),
    })
}

pub fn encode(entries: &[CorpusEntry], format: Format) -> Vec<u8> {
    match format {
        Format::Graph6 => {
            let mut out = Vec::new();
            for e in entries {
                out.extend(bipforest::emit_graph6(&e.graph));
                out.push(b'\n');
            }
            out
        }
        Format::PlanarCode => {
            let planes: Vec<_> = entries.iter().filter_map(|e| e.plane.clone()).collect();
            bipforest::emit_planar_code(&planes, true)
        }
    }
}
