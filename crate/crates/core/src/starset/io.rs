use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::StarflowError;
use crate::Result;

use super::grid::DirectionGrid;
use super::set::RadialSet;

/// JSON wrapper for a radial set: ambient dimension, grid size, declared
/// class bounds, and the radius samples in grid order.
#[derive(Debug, Serialize, Deserialize)]
pub struct RadialSetJson {
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub r_lo: f64,
    #[serde(rename = "R_hi")]
    pub r_hi: f64,
    pub radii: Vec<f64>,
}

impl From<&RadialSet> for RadialSetJson {
    fn from(s: &RadialSet) -> Self {
        Self {
            n: 2,
            m: s.len(),
            r_lo: s.r_lo(),
            r_hi: s.r_hi(),
            radii: s.radii().to_vec(),
        }
    }
}

impl RadialSetJson {
    pub fn into_set(self) -> Result<RadialSet> {
        if self.n != 2 {
            return Err(StarflowError::Config(format!(
                "only n=2 sets are supported, file declares n={}",
                self.n
            )));
        }
        if self.m != self.radii.len() {
            return Err(StarflowError::Config(format!(
                "declared M={} but {} radii present",
                self.m,
                self.radii.len()
            )));
        }
        RadialSet::new(DirectionGrid::new(self.m), self.radii, self.r_lo, self.r_hi)
    }
}

/// Write the `theta,r` CSV snapshot (angles in radians).
pub fn write_radial_csv(s: &RadialSet, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["theta", "r"])?;
    for i in 0..s.len() {
        w.write_record([
            format!("{:.17e}", s.grid().theta(i)),
            format!("{:.17e}", s.radii()[i]),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Read a `theta,r` CSV snapshot. The grid is rebuilt from the row count;
/// stored angles must match the uniform grid, and the declared class bounds
/// are supplied by the caller (the CSV form does not carry them).
pub fn read_radial_csv(path: &Path, r_lo: f64, r_hi: f64) -> Result<RadialSet> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut radii = Vec::new();
    let mut thetas = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let theta: f64 = rec
            .get(0)
            .ok_or_else(|| StarflowError::CorruptTrace("missing theta column".into()))?
            .parse()
            .map_err(|e| StarflowError::CorruptTrace(format!("bad theta value: {e}")))?;
        let r: f64 = rec
            .get(1)
            .ok_or_else(|| StarflowError::CorruptTrace("missing r column".into()))?
            .parse()
            .map_err(|e| StarflowError::CorruptTrace(format!("bad r value: {e}")))?;
        thetas.push(theta);
        radii.push(r);
    }
    if radii.len() < DirectionGrid::MIN_DIRECTIONS {
        return Err(StarflowError::CorruptTrace(format!(
            "only {} rows in radial CSV",
            radii.len()
        )));
    }
    let grid = DirectionGrid::new(radii.len());
    for (i, &t) in thetas.iter().enumerate() {
        if (t - grid.theta(i)).abs() > 1e-9 {
            return Err(StarflowError::CorruptTrace(format!(
                "theta at row {i} is {t}, expected uniform grid value {}",
                grid.theta(i)
            )));
        }
    }
    RadialSet::new(grid, radii, r_lo, r_hi)
}

/// Write the JSON wrapper form.
pub fn write_radial_json(s: &RadialSet, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(file, &RadialSetJson::from(s))?;
    Ok(())
}

/// Read the JSON wrapper form.
pub fn read_radial_json(path: &Path) -> Result<RadialSet> {
    let file = std::fs::File::open(path)?;
    let json: RadialSetJson = serde_json::from_reader(file)
        .map_err(|e| StarflowError::CorruptTrace(format!("radial JSON: {e}")))?;
    json.into_set()
}

/// Export the boundary as an SVG polyline, optionally with a faint reference
/// circle of the given radius. The viewport is centered on the origin.
pub fn write_svg(s: &RadialSet, path: &Path, reference_radius: Option<f64>) -> Result<()> {
    let half = 1.15 * s.max_radius().max(reference_radius.unwrap_or(0.0));
    let size = 512.0;
    let scale = size / (2.0 * half);
    let mut out = std::fs::File::create(path)?;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    )?;
    if let Some(r) = reference_radius {
        writeln!(
            out,
            r##"  <circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="#bbbbbb" stroke-dasharray="4 4"/>"##,
            size / 2.0,
            size / 2.0,
            r * scale
        )?;
    }
    let pts: Vec<String> = (0..s.len())
        .map(|i| {
            let p = s.point(i);
            format!(
                "{:.3},{:.3}",
                size / 2.0 + p[0] * scale,
                size / 2.0 - p[1] * scale
            )
        })
        .collect();
    writeln!(
        out,
        r##"  <polygon points="{}" fill="none" stroke="#2255aa" stroke-width="1.5"/>"##,
        pts.join(" ")
    )?;
    writeln!(out, "</svg>")?;
    Ok(())
}
