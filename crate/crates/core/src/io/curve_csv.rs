use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{read_json, write_file, write_json, IoError};
use crate::geometry::{ClosedCurve, Curve, OpenCurve, OpenMeta, Polyline, Vec2};

#[derive(Serialize, Deserialize)]
struct Row {
    x: f64,
    y: f64,
}

#[derive(Serialize)]
struct RowK {
    x: f64,
    y: f64,
    kappa: f64,
}

/// Writes `x,y` (and `kappa` when given) with shortest round-trip floats.
pub fn write_curve_csv<W: Write>(w: W, vertices: &[Vec2], kappa: Option<&[f64]>) -> Result<(), String> {
    let mut wr = csv::Writer::from_writer(w);
    match kappa {
        Some(k) => {
            for (p, &kappa) in vertices.iter().zip(k) {
                wr.serialize(RowK { x: p.x, y: p.y, kappa }).map_err(|e| e.to_string())?;
            }
        }
        None => {
            for p in vertices {
                wr.serialize(Row { x: p.x, y: p.y }).map_err(|e| e.to_string())?;
            }
        }
    }
    wr.flush().map_err(|e| e.to_string())
}

/// Reads the `x` and `y` columns; other columns are ignored.
pub fn read_curve_csv<R: Read>(r: R) -> Result<Vec<Vec2>, String> {
    let mut rd = csv::Reader::from_reader(r);
    let headers = rd.headers().map_err(|e| e.to_string())?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name).ok_or(format!("missing column `{name}`"));
    let (ix, iy) = (col("x")?, col("y")?);
    let mut out = Vec::new();
    for (line, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let get = |i: usize| -> Result<f64, String> {
            let field = rec.get(i).unwrap_or("");
            field.trim().parse().map_err(|_| format!("row {}: `{field}` is not a number", line + 2))
        };
        out.push(Vec2::new(get(ix)?, get(iy)?));
    }
    Ok(out)
}

fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("json")
}

/// Loads a curve CSV. A JSON sidecar with `alpha` and `axis` next to the
/// file marks it as open; without one the curve is closed.
pub fn load_curve(path: &Path) -> Result<Curve, IoError> {
    let file = std::fs::File::open(path).map_err(|e| IoError::file(path, e))?;
    let v = read_curve_csv(file).map_err(|m| IoError::format(path, m))?;
    let side = sidecar(path);
    if side.exists() {
        let meta: OpenMeta = read_json(&side)?;
        Ok(OpenCurve::from_meta(v, meta)?.into())
    } else {
        Ok(ClosedCurve::new(v)?.into())
    }
}

/// Writes a curve CSV, plus the sidecar for open curves.
pub fn save_curve(path: &Path, curve: &Curve, kappa: Option<&[f64]>) -> Result<(), IoError> {
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, curve.vertices(), kappa).map_err(|m| IoError::format(path, m))?;
    write_file(path, &buf)?;
    if let Curve::Open(c) = curve {
        write_json(&sidecar(path), &c.meta())?;
    }
    Ok(())
}
