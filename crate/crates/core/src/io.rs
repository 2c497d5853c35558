//! File formats: flow grids (CSV/JSON), trajectories (CSV) and initial
//! conditions (JSON). Floats are written in shortest round-trip form.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Trajectory, VortexState};
use crate::error::{Error, Result};
use crate::hydro::{FlowGrid, FlowSample};

/// Header of flow-grid CSV files.
pub const GRID_HEADER: [&str; 5] = ["x", "y", "psi", "u", "v"];

/// Header of trajectory CSV files.
pub const TRAJECTORY_HEADER: [&str; 5] = ["step", "t", "vortex_index", "x", "y"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridFormat {
    Csv,
    Json,
}

impl GridFormat {
    /// `.json` selects JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Self::Json,
            _ => Self::Csv,
        }
    }
}

pub fn write_grid_csv<W: Write>(samples: &[FlowSample], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    if samples.is_empty() {
        wtr.write_record(GRID_HEADER)?;
    }
    for s in samples {
        wtr.serialize(s)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_grid_csv<R: Read>(r: R) -> Result<Vec<FlowSample>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header = rdr.headers()?.clone();
    if header.iter().ne(GRID_HEADER) {
        return Err(Error::Config(format!("unexpected grid header {:?}", header)));
    }
    rdr.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn write_grid_json<W: Write>(samples: &[FlowSample], w: W) -> Result<()> {
    serde_json::to_writer(w, samples)?;
    Ok(())
}

pub fn read_grid_json<R: Read>(r: R) -> Result<Vec<FlowSample>> {
    Ok(serde_json::from_reader(r)?)
}

pub fn save_grid(grid: &FlowGrid, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    match GridFormat::from_path(path) {
        GridFormat::Csv => write_grid_csv(&grid.samples, &mut w)?,
        GridFormat::Json => write_grid_json(&grid.samples, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

pub fn load_grid(path: &Path) -> Result<Vec<FlowSample>> {
    let r = BufReader::new(File::open(path)?);
    match GridFormat::from_path(path) {
        GridFormat::Csv => read_grid_csv(r),
        GridFormat::Json => read_grid_json(r),
    }
}

/// One row of a trajectory file.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub step: usize,
    pub t: f64,
    pub vortex_index: usize,
    pub x: f64,
    pub y: f64,
}

pub fn trajectory_rows(traj: &Trajectory) -> Vec<TrajectoryRow> {
    traj.frames()
        .flat_map(|(step, s)| {
            s.positions.iter().enumerate().map(move |(i, z)| TrajectoryRow {
                step,
                t: s.time,
                vortex_index: i,
                x: z.re,
                y: z.im,
            })
        })
        .collect()
}

pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let rows = trajectory_rows(traj);
    if rows.is_empty() {
        wtr.write_record(TRAJECTORY_HEADER)?;
    }
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_trajectory_csv<R: Read>(r: R) -> Result<Vec<TrajectoryRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    rdr.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Entry of an initial-condition file: `[{"x": .., "y": .., "gamma": ..}, ...]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialVortex {
    pub x: f64,
    pub y: f64,
    pub gamma: f64,
}

pub fn read_initial_conditions<R: Read>(r: R) -> Result<Vec<InitialVortex>> {
    Ok(serde_json::from_reader(r)?)
}

pub fn write_initial_conditions<W: Write>(vortices: &[InitialVortex], w: W) -> Result<()> {
    serde_json::to_writer_pretty(w, vortices)?;
    Ok(())
}

pub fn initial_state(vortices: &[InitialVortex]) -> Result<VortexState> {
    VortexState::new(
        vortices.iter().map(|v| Complex64::new(v.x, v.y)).collect(),
        vortices.iter().map(|v| v.gamma).collect(),
    )
}
