//! Binary snapshot files.
//!
//! ```text
//! SKWV1\n
//! <n_cells>\n
//! <r_max>\n
//! <time>\n
//! <model id>\n
//! n_cells little-endian f64 values of u, then n_cells of v
//! ```
//!
//! Header floats use the shortest decimal form that parses back to the same
//! bits.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use skwv::{FieldState, GridSpec, ModelKind, Snapshot, SpacetimeRecord};

use crate::CliError;

pub const MAGIC: &[u8] = b"SKWV1\n";

#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotFile {
    pub n_cells: usize,
    pub r_max: f64,
    pub time: f64,
    pub model: ModelKind,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl SnapshotFile {
    pub fn from_state(s: &FieldState) -> Self {
        SnapshotFile {
            n_cells: s.grid.n_cells(),
            r_max: s.grid.r_max(),
            time: s.t,
            model: s.model,
            u: s.u.clone(),
            v: s.v.clone(),
        }
    }

    pub fn grid(&self) -> Result<GridSpec, CliError> {
        Ok(GridSpec::new(self.r_max, self.n_cells)?)
    }

    pub fn into_state(self) -> Result<FieldState, CliError> {
        let g = self.grid()?;
        Ok(FieldState::new(g, self.model, self.time, self.u, self.v)?)
    }

    pub fn write<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(MAGIC)?;
        write!(w, "{}\n{}\n{}\n{}\n", self.n_cells, self.r_max, self.time, self.model.id())?;
        let mut buf = Vec::with_capacity(16 * self.n_cells);
        for x in self.u.iter().chain(&self.v) {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        w.write_all(&buf)
    }

    pub fn read<R: BufRead>(mut r: R) -> Result<Self, CliError> {
        let bad = |m: &str| CliError::Format(m.to_string());
        let mut magic = [0u8; 6];
        r.read_exact(&mut magic).map_err(|_| bad("file too short for a snapshot"))?;
        if magic != MAGIC {
            return Err(bad("bad magic: not a snapshot file"));
        }
        let mut line = |what: &str| -> Result<String, CliError> {
            let mut s = String::new();
            r.read_line(&mut s)?;
            if !s.ends_with('\n') {
                return Err(bad(&format!("truncated header at {what}")));
            }
            Ok(s.trim_end().to_string())
        };
        let field = |s: String, what: &str| -> Result<f64, CliError> {
            s.parse::<f64>().map_err(|_| CliError::Format(format!("bad {what} '{s}'")))
        };
        let n_str = line("n_cells")?;
        let n_cells: usize = n_str.parse().map_err(|_| bad(&format!("bad n_cells '{n_str}'")))?;
        let r_max = field(line("r_max")?, "r_max")?;
        let time = field(line("time")?, "time")?;
        let id_str = line("model id")?;
        let model = id_str
            .parse::<u32>()
            .ok()
            .and_then(ModelKind::from_id)
            .ok_or_else(|| bad(&format!("unknown model id '{id_str}'")))?;
        let mut payload = Vec::new();
        r.read_to_end(&mut payload)?;
        if payload.len() != 16 * n_cells {
            return Err(bad(&format!(
                "payload has {} bytes, expected {}",
                payload.len(),
                16 * n_cells
            )));
        }
        let mut vals = payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
        let u: Vec<f64> = vals.by_ref().take(n_cells).collect();
        let v: Vec<f64> = vals.collect();
        Ok(SnapshotFile { n_cells, r_max, time, model, u, v })
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let mut f = io::BufWriter::new(fs::File::create(path)?);
        self.write(&mut f)?;
        f.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::read(io::BufReader::new(fs::File::open(path)?))
    }
}

/// Write every snapshot of `rec` into `dir` as `snap_NNNNN.skwv`.
pub fn save_record(rec: &SpacetimeRecord, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir)?;
    let g = rec.grid();
    rec.snapshots()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let path = dir.join(format!("snap_{i:05}.skwv"));
            SnapshotFile {
                n_cells: g.n_cells(),
                r_max: g.r_max(),
                time: s.t,
                model: rec.model(),
                u: s.u.clone(),
                v: s.v.clone(),
            }
            .save(&path)?;
            Ok(path)
        })
        .collect()
}

/// The `*.skwv` files of `dir` in name order.
pub fn snapshot_paths(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "skwv"))
        .collect();
    paths.sort();
    Ok(paths)
}

/// Read all snapshot files of `dir` into a record.
pub fn load_record(dir: &Path) -> Result<SpacetimeRecord, CliError> {
    let paths = snapshot_paths(dir)?;
    let files = paths.iter().map(|p| SnapshotFile::load(p)).collect::<Result<Vec<_>, _>>()?;
    let first = files
        .first()
        .ok_or_else(|| CliError::Usage(format!("no snapshot files in {}", dir.display())))?;
    let (grid, model) = (first.grid()?, first.model);
    if files.iter().any(|f| f.n_cells != grid.n_cells() || f.r_max != grid.r_max() || f.model != model) {
        return Err(CliError::Format("snapshots disagree on grid or model".into()));
    }
    let snaps = files.into_iter().map(|f| Snapshot { t: f.time, u: f.u, v: f.v }).collect();
    Ok(SpacetimeRecord::from_snapshots(grid, model, snaps)?)
}
