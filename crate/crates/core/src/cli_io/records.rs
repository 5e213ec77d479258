//! Run records as CSV and flow-state snapshots as versioned JSON.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disk_spectral::{GridSpec, ScalarFieldDisk, VectorFieldDisk};
use crate::dynamics::SimOutput;
use crate::energies::EnergyReport;
use crate::error::{Error, Result};
use crate::geometry::FlowState;

pub const CSV_HEADER: &str = "t,E,E1,E2,E3,E4,c0,det_drift,vorticity_drift,div_v,x_bound";
pub const SNAPSHOT_FORMAT_VERSION: u32 = 1;

/// One output instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecordRow {
    pub t: f64,
    pub e: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub e4: f64,
    pub c0: f64,
    pub det_drift: f64,
    pub vorticity_drift: f64,
    pub div_v: f64,
    pub x_bound: f64,
}

impl RecordRow {
    fn values(&self) -> [f64; 11] {
        [
            self.t,
            self.e,
            self.e1,
            self.e2,
            self.e3,
            self.e4,
            self.c0,
            self.det_drift,
            self.vorticity_drift,
            self.div_v,
            self.x_bound,
        ]
    }

    fn from_values(v: &[f64]) -> Self {
        RecordRow {
            t: v[0],
            e: v[1],
            e1: v[2],
            e2: v[3],
            e3: v[4],
            e4: v[5],
            c0: v[6],
            det_drift: v[7],
            vorticity_drift: v[8],
            div_v: v[9],
            x_bound: v[10],
        }
    }

    /// Energy values of this row; the norm fields are not stored and come back NaN.
    pub fn energy_report(&self) -> EnergyReport {
        EnergyReport {
            t: self.t,
            e: self.e,
            e1: self.e1,
            e2: self.e2,
            e3: self.e3,
            e4: self.e4,
            c0: self.c0,
            norm_v_5: f64::NAN,
            norm_x_5p5: f64::NAN,
            norm_curl_4p5: f64::NAN,
            x_norm_bound: self.x_bound,
        }
    }
}

/// Header, time-ordered rows and termination status of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub version: String,
    pub config_echo: String,
    pub rows: Vec<RecordRow>,
    pub status: String,
    pub status_detail: String,
}

impl RunRecord {
    pub fn new(config_echo: &str) -> Self {
        RunRecord {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_echo: config_echo.to_string(),
            rows: Vec::new(),
            status: "completed".into(),
            status_detail: String::new(),
        }
    }

    pub fn from_output(config_echo: &str, out: &SimOutput) -> Self {
        let mut rec = Self::new(config_echo);
        rec.rows = out
            .records
            .iter()
            .map(|r| RecordRow {
                t: r.t,
                e: r.energy.e,
                e1: r.energy.e1,
                e2: r.energy.e2,
                e3: r.energy.e3,
                e4: r.energy.e4,
                c0: r.diag.c0,
                det_drift: r.diag.det_drift,
                vorticity_drift: r.diag.vorticity_drift,
                div_v: r.diag.div_v,
                x_bound: r.energy.x_norm_bound,
            })
            .collect();
        rec.status = out.status.label().to_string();
        rec.status_detail = out.status.detail().to_string();
        rec
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("# freesurf {}\n# config: {}\n# status: {}", self.version, self.config_echo, self.status);
        if !self.status_detail.is_empty() {
            s.push_str(&format!(" ({})", self.status_detail.replace('\n', " ")));
        }
        s.push('\n');
        s.push_str(CSV_HEADER);
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.values().iter().map(|v| format!("{v:.16e}")).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rec = Self::new("");
        rec.version.clear();
        let mut saw_header = false;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                let c = c.trim();
                if let Some(v) = c.strip_prefix("freesurf ") {
                    rec.version = v.to_string();
                } else if let Some(v) = c.strip_prefix("config:") {
                    rec.config_echo = v.trim().to_string();
                } else if let Some(v) = c.strip_prefix("status:") {
                    let v = v.trim();
                    match v.split_once(' ') {
                        Some((label, detail)) => {
                            rec.status = label.to_string();
                            rec.status_detail = detail.trim_start_matches('(').trim_end_matches(')').to_string();
                        }
                        None => rec.status = v.to_string(),
                    }
                }
                continue;
            }
            if !saw_header {
                if line != CSV_HEADER {
                    return Err(Error::Format(format!("line {}: expected header '{CSV_HEADER}'", idx + 1)));
                }
                saw_header = true;
                continue;
            }
            let vals: std::result::Result<Vec<f64>, _> = line.split(',').map(|c| c.trim().parse::<f64>()).collect();
            let vals = vals.map_err(|_| Error::Format(format!("line {}: unparsable number", idx + 1)))?;
            if vals.len() != 11 {
                return Err(Error::Format(format!("line {}: expected 11 columns, got {}", idx + 1, vals.len())));
            }
            let row = RecordRow::from_values(&vals);
            if rec.rows.last().is_some_and(|p| p.t > row.t) {
                return Err(Error::Format(format!("line {}: rows are not time-ordered", idx + 1)));
            }
            rec.rows.push(row);
        }
        if !saw_header {
            return Err(Error::Format("missing CSV header".into()));
        }
        Ok(rec)
    }
}

pub fn write_records(record: &RunRecord, path: &Path) -> Result<()> {
    fs::write(path, record.to_csv()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_records(path: &Path) -> Result<RunRecord> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    RunRecord::from_csv(&text)
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct ModeDoc {
    k: i64,
    /// (re, im) at each radial node.
    values: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct SnapshotDoc {
    format_version: u32,
    n_modes: usize,
    n_radial: usize,
    chop_tol: f64,
    t: f64,
    x: [Vec<ModeDoc>; 2],
    v: [Vec<ModeDoc>; 2],
}

fn field_doc(f: &ScalarFieldDisk) -> Vec<ModeDoc> {
    let g = f.grid();
    (0..g.n_modes())
        .map(|slot| {
            let k = g.wavenumber(slot);
            ModeDoc {
                k,
                values: f.mode(k).iter().map(|c| [c.re, c.im]).collect(),
            }
        })
        .collect()
}

fn field_from_doc(grid: &crate::disk_spectral::Grid, modes: &[ModeDoc]) -> Result<ScalarFieldDisk> {
    let mut f = ScalarFieldDisk::zeros(grid);
    for m in modes {
        if grid.slot(m.k).is_none() || m.values.len() != grid.n_radial() {
            return Err(Error::Format(format!("snapshot mode {} does not fit the grid", m.k)));
        }
        for (c, v) in f.mode_mut(m.k).iter_mut().zip(&m.values) {
            *c = Complex64::new(v[0], v[1]);
        }
    }
    Ok(f)
}

pub fn snapshot_to_string(state: &FlowState) -> Result<String> {
    let g = state.grid();
    let doc = SnapshotDoc {
        format_version: SNAPSHOT_FORMAT_VERSION,
        n_modes: g.n_modes(),
        n_radial: g.n_radial(),
        chop_tol: g.chop_tol(),
        t: state.t,
        x: [field_doc(&state.x.c[0]), field_doc(&state.x.c[1])],
        v: [field_doc(&state.v.c[0]), field_doc(&state.v.c[1])],
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Format(e.to_string()))
}

pub fn snapshot_from_str(text: &str) -> Result<FlowState> {
    let doc: SnapshotDoc = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if doc.format_version != SNAPSHOT_FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported snapshot format version {}", doc.format_version)));
    }
    let grid = GridSpec::with_chop(doc.n_modes, doc.n_radial, doc.chop_tol)?;
    let x = VectorFieldDisk::new(field_from_doc(&grid, &doc.x[0])?, field_from_doc(&grid, &doc.x[1])?)?;
    let v = VectorFieldDisk::new(field_from_doc(&grid, &doc.v[0])?, field_from_doc(&grid, &doc.v[1])?)?;
    FlowState::new(doc.t, x, v)
}

pub fn write_snapshot(state: &FlowState, path: &Path) -> Result<()> {
    fs::write(path, snapshot_to_string(state)?).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_snapshot(path: &Path) -> Result<FlowState> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    snapshot_from_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::InitialCondition;

    #[test]
    fn empty_record_is_header_only() {
        let csv = RunRecord::new("K=32").to_csv();
        let data: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data, vec![CSV_HEADER]);
        assert!(RunRecord::from_csv(&csv).unwrap().rows.is_empty());
    }

    #[test]
    fn csv_round_trip() {
        let mut rec = RunRecord::new("K=32 M=48");
        rec.rows.push(RecordRow::from_values(&[0.0, 1.0, 0.1, 0.2, 1.0 / 3.0, 0.0, 0.25, 0.0, 0.0, 0.0, f64::NAN]));
        rec.rows.push(RecordRow::from_values(&[0.1, 1.0, 0.1, 0.2, 1e-300, 0.0, 0.25, 1e-16, 0.0, 0.0, 2.0]));
        rec.status = "det_drift".into();
        rec.status_detail = "det drift 1e-5".into();
        let back = RunRecord::from_csv(&rec.to_csv()).unwrap();
        assert_eq!(back.rows.len(), 2);
        assert_eq!(back.rows[0].e3, 1.0 / 3.0);
        assert!(back.rows[0].x_bound.is_nan());
        assert_eq!(back.rows[1], rec.rows[1]);
        assert_eq!(back.status, "det_drift");
        assert_eq!(back.config_echo, "K=32 M=48");
    }

    #[test]
    fn snapshot_round_trip_is_bit_exact() {
        let g = GridSpec::new(16, 16).unwrap();
        let st = InitialCondition::Perturbed {
            omega: 0.5,
            mode: 3,
            amplitude: 1e-2,
        }
        .build(&g)
        .unwrap();
        let back = snapshot_from_str(&snapshot_to_string(&st).unwrap()).unwrap();
        for i in 0..2 {
            assert_eq!(back.x.c[i].coeffs(), st.x.c[i].coeffs());
            assert_eq!(back.v.c[i].coeffs(), st.v.c[i].coeffs());
        }
        assert_eq!(back.t, st.t);
    }

    #[test]
    fn rejects_wrong_version() {
        let g = GridSpec::new(16, 16).unwrap();
        let st = InitialCondition::Static.build(&g).unwrap();
        let text = snapshot_to_string(&st).unwrap().replace("\"format_version\": 1", "\"format_version\": 9");
        assert!(matches!(snapshot_from_str(&text), Err(Error::Format(_))));
    }
}
