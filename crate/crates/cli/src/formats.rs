//! On-disk JSON formats and serialization helpers.
//!
//! Complex scalars serialize as two-element `[re, im]` arrays and matrices
//! as row-major nested arrays. Every float is written with 17 significant
//! digits so parsing recovers the exact bit pattern and convert round-trips
//! are byte-identical. Indices in files (block picks) are 1-based; the
//! library works 0-based and the translation happens here.

use hillrep::hill::{BasisSelection, BasisSource, HillRepresentation};
use hillrep::linmap::{ChoiMatrix, LinearMatrixMap};
use hillrep::matrix::{C64, ComplexMatrix, c64};
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Failure modes of the file layer, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum FileError {
    /// Unreadable/unwritable file: exit 1.
    Io(String),
    /// Malformed JSON or a schema/invariant violation: exit 2.
    Schema(String),
}

impl FileError {
    pub fn message(&self) -> &str {
        match self {
            FileError::Io(m) | FileError::Schema(m) => m,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            FileError::Io(_) => 1,
            FileError::Schema(_) => 2,
        }
    }
}

/// A linear matrix map on disk, in either representation.
#[derive(Debug, Serialize, Deserialize)]
pub struct MapFile {
    pub n: usize,
    pub q: usize,
    pub representation: String,
    pub field: String,
    pub data: Vec<Vec<[f64; 2]>>,
}

/// Basis provenance carried by a representation file.
#[derive(Debug, Serialize, Deserialize)]
pub struct ProvenanceFile {
    pub strategy: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub picks: Option<Vec<[usize; 2]>>,
    #[serde(rename = "Ls")]
    pub ls: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(rename = "Bs")]
    pub bs: Vec<Vec<Vec<[f64; 2]>>>,
}

/// A Hill representation on disk.
#[derive(Debug, Serialize, Deserialize)]
pub struct HillFile {
    pub n: usize,
    pub q: usize,
    pub m: usize,
    pub tol: f64,
    #[serde(rename = "H")]
    pub h: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceFile>,
}

/// JSON formatter writing every float with 17 significant digits.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{:.16e}", value)
    }
}

/// Serializes any value with the 17-significant-digit float convention,
/// newline-terminated.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value.serialize(&mut ser).expect("serialization cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON is UTF-8")
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &str) -> Result<T, FileError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| FileError::Io(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| FileError::Schema(format!("{path}: {e}")))
}

pub fn write_text(path: &str, text: &str) -> Result<(), FileError> {
    std::fs::write(path, text).map_err(|e| FileError::Io(format!("cannot write {path}: {e}")))
}

fn entry_to_c64(entry: [f64; 2], what: &str) -> Result<C64, FileError> {
    if !entry[0].is_finite() || !entry[1].is_finite() {
        return Err(FileError::Schema(format!("{what}: non-finite entry")));
    }
    Ok(c64(entry[0], entry[1]))
}

/// Decodes a row-major nested array into a matrix of the expected shape.
pub fn decode_matrix(
    data: &[Vec<[f64; 2]>],
    rows: usize,
    cols: usize,
    what: &str,
) -> Result<ComplexMatrix, FileError> {
    if data.len() != rows {
        return Err(FileError::Schema(format!(
            "{what}: expected {rows} rows, found {}",
            data.len()
        )));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for row in data {
        if row.len() != cols {
            return Err(FileError::Schema(format!(
                "{what}: expected {cols} columns, found {}",
                row.len()
            )));
        }
        for &e in row {
            entries.push(entry_to_c64(e, what)?);
        }
    }
    ComplexMatrix::new(rows, cols, entries)
        .map_err(|e| FileError::Schema(format!("{what}: {e}")))
}

pub fn encode_matrix(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
        .collect()
}

impl MapFile {
    pub fn from_map(map: &LinearMatrixMap, representation: &str, field: &str) -> Self {
        let data = match representation {
            "choi" => encode_matrix(map.choi().matrix()),
            _ => encode_matrix(map.matricization()),
        };
        MapFile {
            n: map.n(),
            q: map.q(),
            representation: representation.to_string(),
            field: field.to_string(),
            data,
        }
    }

    /// Validates the schema and builds the map.
    pub fn into_map(&self) -> Result<LinearMatrixMap, FileError> {
        if self.n == 0 || self.q == 0 {
            return Err(FileError::Schema("map dimensions must be positive".into()));
        }
        let (rows, cols) = match self.representation.as_str() {
            "matricization" => (self.n * self.n, self.q * self.q),
            "choi" => (self.n * self.q, self.n * self.q),
            other => {
                return Err(FileError::Schema(format!(
                    "unknown representation {other:?} (expected \"matricization\" or \"choi\")"
                )));
            }
        };
        match self.field.as_str() {
            "real" | "complex" => {}
            other => {
                return Err(FileError::Schema(format!(
                    "unknown field {other:?} (expected \"real\" or \"complex\")"
                )));
            }
        }
        let matrix = decode_matrix(&self.data, rows, cols, "map data")?;
        if self.field == "real" && !matrix.is_real() {
            return Err(FileError::Schema(
                "field is declared \"real\" but an imaginary part is nonzero".into(),
            ));
        }
        let map = match self.representation.as_str() {
            "matricization" => LinearMatrixMap::from_matricization(matrix, self.n, self.q),
            _ => ChoiMatrix::new(matrix, self.n, self.q)
                .and_then(|choi| LinearMatrixMap::from_choi(&choi)),
        };
        map.map_err(|e| FileError::Schema(format!("map data: {e}")))
    }
}

impl HillFile {
    pub fn from_representation(rep: &HillRepresentation, tol: f64) -> Self {
        let provenance = rep.basis().map(|basis| {
            let (strategy, picks) = match basis.source() {
                BasisSource::Blocks(picks) => (
                    "blocks".to_string(),
                    Some(picks.iter().map(|&(i, j)| [i + 1, j + 1]).collect()),
                ),
                BasisSource::Qr => ("qr".to_string(), None),
                BasisSource::UserSupplied => ("user".to_string(), None),
            };
            ProvenanceFile {
                strategy,
                picks,
                ls: basis.ls().iter().map(encode_matrix).collect(),
                bs: basis.b_matrices().iter().map(|b| encode_matrix(b)).collect(),
            }
        });
        HillFile {
            n: rep.n(),
            q: rep.q(),
            m: rep.m(),
            tol,
            h: encode_matrix(rep.h()),
            a: rep.a().iter().map(encode_matrix).collect(),
            provenance,
        }
    }

    /// Validates the schema and rebuilds the representation (with basis
    /// provenance when the file carries it).
    pub fn into_representation(&self) -> Result<HillRepresentation, FileError> {
        if self.n == 0 || self.q == 0 {
            return Err(FileError::Schema("representation dimensions must be positive".into()));
        }
        let h = decode_matrix(&self.h, self.m, self.m, "H")?;
        if self.a.len() != self.m {
            return Err(FileError::Schema(format!(
                "expected {} matrices in A, found {}",
                self.m,
                self.a.len()
            )));
        }
        let a: Vec<ComplexMatrix> = self
            .a
            .iter()
            .enumerate()
            .map(|(k, data)| decode_matrix(data, self.n, self.q, &format!("A[{k}]")))
            .collect::<Result<_, _>>()?;

        let basis = match &self.provenance {
            None => None,
            Some(p) => {
                if p.ls.len() != self.m || p.bs.len() != self.m {
                    return Err(FileError::Schema(format!(
                        "provenance must carry {} Ls and Bs entries",
                        self.m
                    )));
                }
                let ls: Vec<ComplexMatrix> = p
                    .ls
                    .iter()
                    .enumerate()
                    .map(|(k, d)| decode_matrix(d, self.n, self.q, &format!("Ls[{k}]")))
                    .collect::<Result<_, _>>()?;
                let bs: Vec<ComplexMatrix> = p
                    .bs
                    .iter()
                    .enumerate()
                    .map(|(k, d)| decode_matrix(d, self.n, self.q, &format!("Bs[{k}]")))
                    .collect::<Result<_, _>>()?;
                let source = match p.strategy.as_str() {
                    "blocks" => {
                        let picks = p.picks.as_ref().ok_or_else(|| {
                            FileError::Schema("blocks provenance requires picks".into())
                        })?;
                        if picks.len() != self.m {
                            return Err(FileError::Schema(format!(
                                "expected {} picks, found {}",
                                self.m,
                                picks.len()
                            )));
                        }
                        let zero_based: Vec<(usize, usize)> = picks
                            .iter()
                            .map(|&[i, j]| {
                                if i == 0 || j == 0 || i > self.n || j > self.q {
                                    Err(FileError::Schema(format!(
                                        "pick [{i}, {j}] outside the 1-based {}x{} grid",
                                        self.n, self.q
                                    )))
                                } else {
                                    Ok((i - 1, j - 1))
                                }
                            })
                            .collect::<Result<_, _>>()?;
                        BasisSource::Blocks(zero_based)
                    }
                    "qr" => BasisSource::Qr,
                    "user" => BasisSource::UserSupplied,
                    other => {
                        return Err(FileError::Schema(format!(
                            "unknown strategy {other:?}"
                        )));
                    }
                };
                // α is recovered from the A matrices (A_k = [conj α_k^{ij}]),
                // β from the stored B matrices
                let alpha: Vec<Vec<C64>> = a
                    .iter()
                    .map(|ak| {
                        (0..self.n)
                            .flat_map(|i| (0..self.q).map(move |j| (i, j)))
                            .map(|(i, j)| ak.get(i, j).conj())
                            .collect()
                    })
                    .collect();
                let beta: Vec<Vec<C64>> = bs
                    .iter()
                    .map(|bk| {
                        (0..self.n)
                            .flat_map(|i| (0..self.q).map(move |j| (i, j)))
                            .map(|(i, j)| bk.get(i, j))
                            .collect()
                    })
                    .collect();
                Some(
                    BasisSelection::new(self.n, self.q, ls, alpha, beta, source)
                        .map_err(|e| FileError::Schema(format!("provenance: {e}")))?,
                )
            }
        };
        HillRepresentation::new(self.n, self.q, h, a, basis)
            .map_err(|e| FileError::Schema(format!("representation: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_round_trips() {
        let values = [0.1, -1.0 / 3.0, 2e-300, -0.0, 1.0, f64::MIN_POSITIVE];
        for v in values {
            let s = format!("{:.16e}", v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{s}");
        }
    }

    #[test]
    fn map_file_round_trip() {
        let map = hillrep::samples::transpose_map(2);
        let file = MapFile::from_map(&map, "matricization", "real");
        let text = to_json_string(&file);
        let parsed: MapFile = serde_json::from_str(&text).unwrap();
        let back = parsed.into_map().unwrap();
        assert_eq!(back.matricization(), map.matricization());
    }

    #[test]
    fn real_field_rejects_imaginary_entries() {
        let map = hillrep::random_star_linear(2, 2, 2, 3).unwrap();
        let file = MapFile::from_map(&map, "matricization", "real");
        assert!(matches!(file.into_map(), Err(FileError::Schema(_))));
    }

    #[test]
    fn hill_file_round_trip_with_provenance() {
        let map = hillrep::random_star_linear(2, 2, 3, 4).unwrap();
        let basis =
            hillrep::hill::select_basis(&map, hillrep::hill::BasisStrategy::Blocks, 1e-9).unwrap();
        let rep = hillrep::hill::build_hill(&map, &basis, 1e-9).unwrap();
        let file = HillFile::from_representation(&rep, 1e-10);
        let text = to_json_string(&file);
        let parsed: HillFile = serde_json::from_str(&text).unwrap();
        let back = parsed.into_representation().unwrap();
        assert_eq!(back.h(), rep.h());
        assert_eq!(back.a(), rep.a());
        let b1 = back.basis().unwrap();
        let b0 = rep.basis().unwrap();
        assert_eq!(b1.ls(), b0.ls());
        assert_eq!(b1.source(), b0.source());
        assert_eq!(b1.beta(), b0.beta());
        assert_eq!(b1.alpha(), b0.alpha());
    }
}
