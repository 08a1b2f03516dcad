//! Whitespace-separated column files for external plotting tools.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::census::CensusReport;
use crate::criteria::ScoreReport;
use crate::error::{Error, Result};
use crate::mc::EnsembleReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// `r` against the median ratio of every candidate.
    Growth,
    /// `n` against `N(n)/n`.
    Census,
    /// `n` against the checkpoint ratio.
    Score,
}

impl PlotKind {
    fn name(self) -> &'static str {
        match self {
            PlotKind::Growth => "growth",
            PlotKind::Census => "census",
            PlotKind::Score => "score",
        }
    }
}

impl std::str::FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "growth" => Ok(PlotKind::Growth),
            "census" => Ok(PlotKind::Census),
            "score" => Ok(PlotKind::Score),
            other => Err(Error::InvalidArgument(format!(
                "unknown plot kind `{other}`"
            ))),
        }
    }
}

pub enum PlotSource<'a> {
    Growth(&'a EnsembleReport),
    Census(&'a CensusReport),
    Score(&'a ScoreReport),
}

impl PlotSource<'_> {
    fn kind(&self) -> PlotKind {
        match self {
            PlotSource::Growth(_) => PlotKind::Growth,
            PlotSource::Census(_) => PlotKind::Census,
            PlotSource::Score(_) => PlotKind::Score,
        }
    }
}

fn write_columns(path: &Path, header: &[String], rows: &[Vec<f64>]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    writeln!(w, "# {}", header.join(" ")).map_err(io)?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", cells.join(" ")).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Writes the plot files for `source` into `dir` and returns their paths.
pub fn emit_plotdata(source: &PlotSource, kind: PlotKind, dir: &Path) -> Result<Vec<PathBuf>> {
    if source.kind() != kind {
        return Err(Error::KindMismatch {
            report: source.kind().name().into(),
            requested: kind.name().into(),
        });
    }
    let mut files = Vec::new();
    match source {
        PlotSource::Growth(report) => {
            let mut header = vec!["r".to_string()];
            header.extend(
                report
                    .candidates
                    .iter()
                    .map(|c| format!("median_ratio_{}", c.name)),
            );
            let rows: Vec<Vec<f64>> = report
                .radii
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let mut row = vec![s.r];
                    row.extend(report.candidates.iter().map(|c| c.rows[i].lower.median));
                    row
                })
                .collect();
            let path = dir.join("growth_plot.dat");
            write_columns(&path, &header, &rows)?;
            files.push(path);
            let header: Vec<String> = [
                "r",
                "lower_q10",
                "lower_median",
                "lower_q90",
                "upper_median",
            ]
            .map(String::from)
            .into();
            let rows: Vec<Vec<f64>> = report
                .radii
                .iter()
                .map(|s| {
                    vec![
                        s.r,
                        s.lower.q10,
                        s.lower.median,
                        s.lower.q90,
                        s.upper.median,
                    ]
                })
                .collect();
            let path = dir.join("sup_quantiles_plot.dat");
            write_columns(&path, &header, &rows)?;
            files.push(path);
        }
        PlotSource::Census(report) => {
            let rows: Vec<Vec<f64>> = report
                .rows
                .iter()
                .map(|r| vec![r.n as f64, r.fraction])
                .collect();
            let path = dir.join("census_plot.dat");
            write_columns(&path, &["n".into(), "fraction".into()], &rows)?;
            files.push(path);
        }
        PlotSource::Score(report) => {
            let rows: Vec<Vec<f64>> = report
                .checkpoints
                .iter()
                .map(|c| vec![c.n as f64, c.ratio])
                .collect();
            let path = dir.join("score_plot.dat");
            write_columns(&path, &["n".into(), "ratio".into()], &rows)?;
            files.push(path);
        }
    }
    Ok(files)
}
