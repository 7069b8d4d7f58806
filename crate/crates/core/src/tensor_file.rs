//! JSON exchange format for tensors and frames.
//!
//! ```json
//! {"format": "curv4.R.v1", "matrix6": [[...6 rows of 6...]]}
//! {"format": "curv4.R.v1", "components": [{"i": 1, "j": 2, "k": 1, "l": 2, "value": -0.5}]}
//! {"format": "curv4.frame.v1", "columns": [[...u1...], [...u2...], [...u3...], [...u4...]]}
//! ```
//!
//! Indices are 1-based. Components are completed by the curvature symmetries;
//! unlisted components are zero. Input is validated like
//! [`CurvTensor::from_matrix`] but stored as read. Numbers are written with 17 significant
//! digits so that a write/read round trip is exact.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::error::FileError;
use crate::tensor::{pair_slot, CurvTensor, Frame, PAIRS};

pub const TENSOR_FORMAT: &str = "curv4.R.v1";
pub const FRAME_FORMAT: &str = "curv4.frame.v1";

const DUPLICATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Layout {
    #[default]
    Matrix6,
    Components,
}

#[derive(Deserialize)]
struct Component {
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    value: f64,
}

#[derive(Deserialize)]
struct RawTensor {
    format: String,
    matrix6: Option<Vec<Vec<f64>>>,
    components: Option<Vec<Component>>,
}

#[derive(Deserialize)]
struct RawFrame {
    format: String,
    columns: Vec<Vec<f64>>,
}

fn num(out: &mut String, x: f64) {
    if x == 0.0 {
        out.push('0');
    } else {
        let _ = write!(out, "{x:.16e}");
    }
}

pub fn write_tensor(r: &CurvTensor, layout: Layout) -> String {
    let a = r.matrix();
    let mut out = format!("{{\"format\": \"{TENSOR_FORMAT}\", ");
    match layout {
        Layout::Matrix6 => {
            out.push_str("\"matrix6\": [\n");
            for (k, row) in a.iter().enumerate() {
                out.push_str("  [");
                for (l, x) in row.iter().enumerate() {
                    if l > 0 {
                        out.push_str(", ");
                    }
                    num(&mut out, *x);
                }
                out.push(']');
                if k < 5 {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str("]}\n");
        }
        Layout::Components => {
            out.push_str("\"components\": [\n");
            let mut first = true;
            for k in 0..6 {
                for l in k..6 {
                    if a[k][l] == 0.0 {
                        continue;
                    }
                    if !first {
                        out.push_str(",\n");
                    }
                    first = false;
                    let (i, j) = PAIRS[k];
                    let (p, q) = PAIRS[l];
                    let _ = write!(out, "  {{\"i\": {}, \"j\": {}, \"k\": {}, \"l\": {}, \"value\": ", i + 1, j + 1, p + 1, q + 1);
                    num(&mut out, a[k][l]);
                    out.push('}');
                }
            }
            out.push_str("\n]}\n");
        }
    }
    out
}

pub fn read_tensor(text: &str) -> Result<CurvTensor, FileError> {
    let raw: RawTensor = serde_json::from_str(text)?;
    if raw.format != TENSOR_FORMAT {
        return Err(FileError::Format(raw.format));
    }
    let a = match (raw.matrix6, raw.components) {
        (Some(m), None) => matrix_from_rows(&m)?,
        (None, Some(c)) => matrix_from_components(&c)?,
        _ => return Err(FileError::Malformed("exactly one of \"matrix6\" or \"components\" is required".into())),
    };
    CurvTensor::from_matrix(a)?;
    Ok(CurvTensor::from_matrix_unchecked(a))
}

fn matrix_from_rows(m: &[Vec<f64>]) -> Result<[[f64; 6]; 6], FileError> {
    if m.len() != 6 || m.iter().any(|row| row.len() != 6) {
        return Err(FileError::Malformed("\"matrix6\" must be 6 rows of 6 numbers".into()));
    }
    Ok(std::array::from_fn(|k| std::array::from_fn(|l| m[k][l])))
}

fn matrix_from_components(cs: &[Component]) -> Result<[[f64; 6]; 6], FileError> {
    let mut a = [[0.0; 6]; 6];
    let mut seen = [[false; 6]; 6];
    for c in cs {
        for n in [c.i, c.j, c.k, c.l] {
            if !(1..=4).contains(&n) {
                return Err(FileError::Malformed(format!("index {n} out of range 1..=4")));
            }
        }
        if !c.value.is_finite() {
            return Err(FileError::Malformed("non-finite component value".into()));
        }
        let (x, y) = match (pair_slot(c.i - 1, c.j - 1), pair_slot(c.k - 1, c.l - 1)) {
            (Some(x), Some(y)) => (x, y),
            _ => {
                if c.value != 0.0 {
                    return Err(FileError::Malformed(format!(
                        "R{}{}{}{} must vanish by antisymmetry",
                        c.i, c.j, c.k, c.l
                    )));
                }
                continue;
            }
        };
        let v = x.1 * y.1 * c.value;
        let (k, l) = (x.0, y.0);
        if seen[k][l] && (a[k][l] - v).abs() > DUPLICATE_TOL * v.abs().max(1.0) {
            return Err(FileError::Malformed(format!(
                "conflicting values for R{}{}{}{}",
                c.i, c.j, c.k, c.l
            )));
        }
        a[k][l] = v;
        a[l][k] = v;
        seen[k][l] = true;
        seen[l][k] = true;
    }
    Ok(a)
}

pub fn write_frame(f: &Frame) -> String {
    let mut out = format!("{{\"format\": \"{FRAME_FORMAT}\", \"columns\": [\n");
    for (j, u) in f.columns().iter().enumerate() {
        out.push_str("  [");
        for (i, x) in u.0.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            num(&mut out, *x);
        }
        out.push(']');
        if j < 3 {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("]}\n");
    out
}

pub fn read_frame(text: &str) -> Result<Frame, FileError> {
    let raw: RawFrame = serde_json::from_str(text)?;
    if raw.format != FRAME_FORMAT {
        return Err(FileError::Format(raw.format));
    }
    if raw.columns.len() != 4 || raw.columns.iter().any(|c| c.len() != 4) {
        return Err(FileError::Malformed("\"columns\" must be 4 vectors of 4 numbers".into()));
    }
    let m = std::array::from_fn(|i| std::array::from_fn(|j| raw.columns[j][i]));
    Ok(Frame::new(m)?)
}
