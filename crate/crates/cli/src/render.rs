//! Plain-text tables and gnuplot-style data files from CSV artifacts.

use crate::commands::write_file;
use crate::error::CliError;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

const PALETTE: [[u8; 3]; 8] = [
    [31, 119, 180],
    [255, 127, 14],
    [44, 160, 44],
    [214, 39, 40],
    [148, 103, 189],
    [140, 86, 75],
    [227, 119, 194],
    [23, 190, 207],
];

fn colour(label: &str) -> [u8; 3] {
    match label {
        "undetermined" => [128, 128, 128],
        "singular" => [0, 0, 0],
        "escaped" => [255, 255, 255],
        l => l
            .strip_prefix('L')
            .and_then(|i| i.parse::<usize>().ok())
            .map_or([64, 64, 64], |i| PALETTE[i % PALETTE.len()]),
    }
}

fn missing(path: &Path) -> CliError {
    CliError::validation("missing_artifact", format!("artifact {} does not exist", path.display()))
}

fn malformed(path: &Path, why: &str) -> CliError {
    CliError::validation("malformed_artifact", format!("{}: {why}", path.display()))
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().skip(1).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Label raster as ASCII PPM, first axis left to right, second axis bottom to top.
fn basins(path: &Path, text: &str) -> Result<(String, String), CliError> {
    let header: Vec<&str> = text.lines().next().unwrap_or_default().split(',').collect();
    let dim = header.len().saturating_sub(1);
    if !(1..=2).contains(&dim) || header.last() != Some(&"label") {
        return Err(malformed(path, "expected a 1- or 2-axis basin CSV"));
    }
    let mut cells = Vec::new();
    for line in data_lines(text) {
        let fields: Vec<&str> = line.split(',').collect();
        let idx: Option<Vec<usize>> = fields[..fields.len() - 1].iter().map(|f| f.parse().ok()).collect();
        match idx {
            Some(idx) if idx.len() == dim => cells.push((idx, fields[fields.len() - 1].to_string())),
            _ => return Err(malformed(path, &format!("bad row '{line}'"))),
        }
    }
    let width = cells.iter().map(|c| c.0[0] + 1).max().unwrap_or(0);
    let height = if dim == 2 { cells.iter().map(|c| c.0[1] + 1).max().unwrap_or(0) } else { 1 };
    if width * height != cells.len() || cells.is_empty() {
        return Err(malformed(path, "grid is incomplete"));
    }
    let mut raster = vec![[0u8; 3]; width * height];
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for (idx, label) in &cells {
        let row = if dim == 2 { height - 1 - idx[1] } else { 0 };
        raster[row * width + idx[0]] = colour(label);
        *counts.entry(label.clone()).or_default() += 1;
    }
    let mut ppm = format!("P3\n{width} {height}\n255\n");
    for row in raster.chunks(width) {
        let px: Vec<String> = row.iter().map(|c| format!("{} {} {}", c[0], c[1], c[2])).collect();
        ppm.push_str(&px.join(" "));
        ppm.push('\n');
    }
    let mut table = format!("{width}x{height} cells;");
    for (label, n) in counts {
        let _ = write!(table, " {label}={n}");
    }
    Ok((ppm, table))
}

/// XY polyline; one-dimensional orbits become `k x` pairs.
fn trajectory(path: &Path, text: &str) -> Result<(String, String), CliError> {
    let header: Vec<&str> = text.lines().next().unwrap_or_default().split(',').collect();
    if header.first() != Some(&"k") || header.len() < 2 {
        return Err(malformed(path, "expected a trajectory CSV"));
    }
    let cols = if header.len() == 2 { "k x1".to_string() } else { header[1..].join(" ") };
    let mut out = format!("# {cols}\n");
    let mut n = 0;
    for line in data_lines(text) {
        let fields: Vec<&str> = line.split(',').collect();
        let keep = if fields.len() == 2 { &fields[..] } else { &fields[1..] };
        out.push_str(&keep.join(" "));
        out.push('\n');
        n += 1;
    }
    let termination = text.lines().find_map(|l| l.strip_prefix("# termination=")).unwrap_or("unknown");
    Ok((out, format!("{n} points; termination={termination}")))
}

/// Held-out residual against collapse ratio, rows with both values only.
fn sweep(path: &Path, text: &str) -> Result<(String, String), CliError> {
    let header = text.lines().next().unwrap_or_default();
    if header != "dict_kind,dict_size,ridge,residual_heldout,collapse_ratio,min_sep_ratio" {
        return Err(malformed(path, "expected a sweep CSV"));
    }
    let mut out = String::from("# residual_heldout collapse_ratio dict_kind dict_size ridge\n");
    let (mut kept, mut total) = (0, 0);
    for line in data_lines(text) {
        total += 1;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(malformed(path, &format!("bad row '{line}'")));
        }
        if !f[3].is_empty() && !f[4].is_empty() {
            let _ = writeln!(out, "{} {} {} {} {}", f[3], f[4], f[0], f[1], f[2]);
            kept += 1;
        }
    }
    Ok((out, format!("{kept} of {total} rows plotted")))
}

/// CSV artifacts in `dir`, sorted by name.
fn discover(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    if !dir.is_dir() {
        return Err(missing(dir));
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    files.sort();
    Ok(files)
}

/// Renders `files` (or every CSV artifact in `dir`) next to their sources
/// and returns the text table.
pub fn run(dir: &Path, files: &[PathBuf]) -> Result<String, CliError> {
    let inputs = if files.is_empty() { discover(dir)? } else { files.to_vec() };
    let mut table = String::from("artifact\toutput\tsummary\n");
    let mut rendered = 0;
    for path in &inputs {
        if !path.is_file() {
            return Err(missing(path));
        }
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        let stem = name.trim_end_matches(".csv");
        let text = std::fs::read_to_string(path)?;
        let (out_name, (data, summary)) = if name.ends_with("basins.csv") {
            (format!("{stem}.ppm"), basins(path, &text)?)
        } else if name.contains("trajectory") {
            (format!("{stem}.dat"), trajectory(path, &text)?)
        } else if name.starts_with("sweep") {
            (format!("{stem}-scatter.dat"), sweep(path, &text)?)
        } else {
            continue;
        };
        let parent = path.parent().unwrap_or(dir);
        write_file(parent, &out_name, &data)?;
        let _ = writeln!(table, "{name}\t{out_name}\t{summary}");
        rendered += 1;
    }
    if rendered == 0 {
        return Err(CliError::validation("missing_artifact", format!("no renderable artifact in {}", dir.display())));
    }
    Ok(table)
}
