//! Field snapshot files.
//!
//! One UTF-8 JSON header line, then little-endian `f64` pairs `(re, im)`.
//! The payload holds one plane per component in header order; each plane
//! lists every stored coefficient in storage order (`j₁` fastest, then `j₂`,
//! then `j₃`). Keeping both halves of the spectrum makes the round trip exact
//! even for fields that are Hermitian only up to rounding.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use stratocore::spectral_torus::{Spectral, COMPONENTS};
use stratocore::{SpectralField, TorusSpec, C64};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum SnapshotError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad header: {0}")]
    Header(String),
    #[error("payload has {got} bytes, expected {want}")]
    Payload { got: usize, want: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub format_version: u32,
    pub torus: [f64; 3],
    pub grid: [usize; 3],
    pub time: f64,
    pub components: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub field: SpectralField,
}

/// Serialize `field` at time `time`.
pub fn write_snapshot<W: Write>(
    mut w: W,
    field: &SpectralField,
    time: f64,
) -> Result<(), SnapshotError> {
    let t = field.torus();
    let header = SnapshotHeader {
        format_version: FORMAT_VERSION,
        torus: t.a,
        grid: t.n,
        time,
        components: COMPONENTS.iter().map(|s| s.to_string()).collect(),
    };
    let line = serde_json::to_string(&header).map_err(|e| SnapshotError::Header(e.to_string()))?;
    w.write_all(line.as_bytes())?;
    w.write_all(b"\n")?;
    let stored = t.len();
    let mut buf = Vec::with_capacity(stored * 64);
    for c in 0..COMPONENTS.len() {
        for z in field.coeffs() {
            buf.extend_from_slice(&z[c].re.to_le_bytes());
            buf.extend_from_slice(&z[c].im.to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_snapshot<R: Read>(r: R) -> Result<Snapshot, SnapshotError> {
    let mut r = BufReader::new(r);
    let mut line = String::new();
    r.read_line(&mut line)?;
    let header: SnapshotHeader = serde_json::from_str(line.trim_end_matches('\n'))
        .map_err(|e| SnapshotError::Header(e.to_string()))?;
    if header.format_version != FORMAT_VERSION {
        return Err(SnapshotError::Header(format!(
            "unsupported format_version {}",
            header.format_version
        )));
    }
    if header.components != COMPONENTS {
        return Err(SnapshotError::Header(format!(
            "unexpected components {:?}",
            header.components
        )));
    }
    let t = TorusSpec::new(header.torus, header.grid)
        .map_err(|e| SnapshotError::Header(e.to_string()))?;
    let stored = t.len();
    let mut payload = Vec::new();
    r.read_to_end(&mut payload)?;
    let want = stored * COMPONENTS.len() * 16;
    if payload.len() != want {
        return Err(SnapshotError::Payload {
            got: payload.len(),
            want,
        });
    }
    let f64_at =
        |i: usize| f64::from_le_bytes(payload[8 * i..8 * i + 8].try_into().expect("8-byte slice"));
    let mut coeffs = vec![[C64::new(0.0, 0.0); 4]; t.len()];
    for (c, _) in COMPONENTS.iter().enumerate() {
        for (i, z) in coeffs.iter_mut().enumerate() {
            let p = 2 * (c * stored + i);
            z[c] = C64::new(f64_at(p), f64_at(p + 1));
        }
    }
    let field =
        SpectralField::from_coeffs(t, coeffs).map_err(|e| SnapshotError::Header(e.to_string()))?;
    Ok(Snapshot {
        time: header.time,
        field,
    })
}

pub fn save_snapshot(path: &Path, field: &SpectralField, time: f64) -> Result<(), SnapshotError> {
    let f = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    write_snapshot(&mut w, field, time)?;
    w.flush()?;
    Ok(())
}

pub fn load_snapshot(path: &Path) -> Result<Snapshot, SnapshotError> {
    read_snapshot(std::fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use stratocore::init::{make_initial_data, Recipe};
    use stratocore::rng::SeedTree;

    fn field(n: [usize; 3]) -> SpectralField {
        let t = TorusSpec::new([1.0, 1.3, 0.8], n).unwrap();
        let r = Recipe::RandomSolenoidal {
            s: 1.0,
            amplitude: 1.0,
            max_mode: 8,
        };
        make_initial_data(&r, &t, &SeedTree::new(11)).unwrap()
    }

    #[test]
    fn round_trip_is_bit_identical() {
        for n in [[8, 8, 6], [6, 4, 4], [12, 4, 8]] {
            let mut f = field(n);
            // perturb off exact symmetry; the file must still reproduce every bit
            f.coeffs_mut()[1][0].im += 1e-17;
            let mut buf = Vec::new();
            write_snapshot(&mut buf, &f, 0.125).unwrap();
            let back = read_snapshot(&buf[..]).unwrap();
            assert_eq!(back.time, 0.125);
            assert_eq!(back.field.torus(), f.torus());
            for (a, b) in back.field.coeffs().iter().zip(f.coeffs()) {
                for c in 0..4 {
                    assert_eq!(a[c].re.to_bits(), b[c].re.to_bits());
                    assert_eq!(a[c].im.to_bits(), b[c].im.to_bits());
                }
            }
        }
    }

    #[test]
    fn header_is_one_json_line() {
        let f = field([8, 8, 6]);
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &f, 1.0).unwrap();
        let end = buf.iter().position(|&b| b == b'\n').unwrap();
        let h: serde_json::Value = serde_json::from_slice(&buf[..end]).unwrap();
        assert_eq!(h["grid"], serde_json::json!([8, 8, 6]));
        assert_eq!(
            h["components"],
            serde_json::json!(["v1", "v2", "v3", "theta"])
        );
        assert_eq!(buf.len() - end - 1, 8 * 8 * 6 * 4 * 16);
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let f = field([4, 4, 4]);
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &f, 0.0).unwrap();
        buf.truncate(buf.len() - 3);
        assert!(matches!(
            read_snapshot(&buf[..]),
            Err(SnapshotError::Payload { .. })
        ));
    }
}
