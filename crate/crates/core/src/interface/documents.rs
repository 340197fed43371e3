//! JSON documents exchanged by the command line tool.
//!
//! A matrix document holds a kind tag and separate real and imaginary
//! 3x3 arrays:
//!
//! ```json
//! {
//!   "kind": "unitary",
//!   "re": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
//!   "im": [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
//! }
//! ```
//!
//! Numbers are written with 17 significant digits, so parsing a serialized
//! matrix gives back the same bits.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix3;
use crate::parametrization::{CoreParams, UnitaryParams};
use crate::rotations::RotationAngles;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Unitary,
    Hermitian,
    General,
}

impl MatrixKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::Unitary => "unitary",
            MatrixKind::Hermitian => "hermitian",
            MatrixKind::General => "general",
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatrixKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unitary" => Ok(MatrixKind::Unitary),
            "hermitian" => Ok(MatrixKind::Hermitian),
            "general" => Ok(MatrixKind::General),
            other => Err(Error::MalformedDocument(format!(
                "field \"kind\": expected \"unitary\", \"hermitian\" or \"general\", found {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixDocument {
    pub kind: MatrixKind,
    pub matrix: ComplexMatrix3,
}

impl MatrixDocument {
    pub fn new(kind: MatrixKind, matrix: ComplexMatrix3) -> Self {
        MatrixDocument { kind, matrix }
    }
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedDocument(msg.into())
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| malformed(format!("invalid JSON: {e}")))
}

fn real_array(doc: &Value, field: &str) -> Result<[[f64; 3]; 3]> {
    let rows = doc
        .get(field)
        .ok_or_else(|| malformed(format!("missing field \"{field}\"")))?
        .as_array()
        .ok_or_else(|| malformed(format!("field \"{field}\": expected an array of 3 rows")))?;
    if rows.len() != 3 {
        return Err(malformed(format!(
            "field \"{field}\": expected 3 rows, found {}",
            rows.len()
        )));
    }
    let mut out = [[0.0; 3]; 3];
    for (r, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| malformed(format!("field \"{field}\"[{r}]: expected an array of 3 numbers")))?;
        if row.len() != 3 {
            return Err(malformed(format!(
                "field \"{field}\"[{r}]: expected 3 entries, found {}",
                row.len()
            )));
        }
        for (c, x) in row.iter().enumerate() {
            out[r][c] = x
                .as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| malformed(format!("field \"{field}\"[{r}][{c}]: expected a finite number, found {x}")))?;
        }
    }
    Ok(out)
}

pub fn parse_matrix(text: &str) -> Result<MatrixDocument> {
    let doc = parse_json(text)?;
    if !doc.is_object() {
        return Err(malformed("expected a JSON object"));
    }
    let kind = doc
        .get("kind")
        .ok_or_else(|| malformed("missing field \"kind\""))?
        .as_str()
        .ok_or_else(|| malformed("field \"kind\": expected a string"))?
        .parse()?;
    let re = real_array(&doc, "re")?;
    let im = real_array(&doc, "im")?;
    Ok(MatrixDocument {
        kind,
        matrix: ComplexMatrix3::from_parts(re, im),
    })
}

/// 17 significant digits in exponent form; non-finite values become `null`
/// and are rejected by the parser.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

pub fn serialize_matrix(doc: &MatrixDocument) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{{");
    let _ = writeln!(s, "  \"kind\": \"{}\",", doc.kind);
    for (name, part, last) in [("re", doc.matrix.re(), false), ("im", doc.matrix.im(), true)] {
        let _ = writeln!(s, "  \"{name}\": [");
        for (r, row) in part.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
            let sep = if r < 2 { "," } else { "" };
            let _ = writeln!(s, "    [{}]{sep}", cells.join(", "));
        }
        let _ = writeln!(s, "  ]{}", if last { "" } else { "," });
    }
    s.push_str("}\n");
    s
}

/// Parameters in radians. Core-only documents leave out the three
/// rotation angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamsDocument {
    pub rotation: Option<RotationAngles>,
    pub core: CoreParams,
}

impl ParamsDocument {
    pub fn full(p: &UnitaryParams) -> Self {
        ParamsDocument {
            rotation: Some(p.rotation),
            core: p.core(),
        }
    }

    pub fn core_only(core: CoreParams) -> Self {
        ParamsDocument { rotation: None, core }
    }

    /// The full tuple; a missing rotation is the identity.
    pub fn to_unitary_params(&self) -> UnitaryParams {
        UnitaryParams::from_parts(self.rotation.unwrap_or_default(), self.core)
    }
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    varphi: Option<f64>,
    chi: f64,
    mu: f64,
    alpha1: f64,
    alpha2: f64,
    alpha3: f64,
    beta2: f64,
}

/// Unknown keys are ignored, so the output of `recover` parses here.
pub fn parse_params(text: &str) -> Result<ParamsDocument> {
    let raw: RawParams =
        serde_json::from_str(text).map_err(|e| malformed(format!("parameters: {e}")))?;
    let rotation = match (raw.phi, raw.theta, raw.varphi) {
        (Some(phi), Some(theta), Some(varphi)) => Some(RotationAngles { phi, theta, varphi }),
        (None, None, None) => None,
        _ => {
            return Err(malformed(
                "fields \"phi\", \"theta\" and \"varphi\" must be given together or not at all",
            ))
        }
    };
    Ok(ParamsDocument {
        rotation,
        core: CoreParams {
            chi: raw.chi,
            mu: raw.mu,
            alpha1: raw.alpha1,
            alpha2: raw.alpha2,
            alpha3: raw.alpha3,
            beta2: raw.beta2,
        },
    })
}

fn raw_params(doc: &ParamsDocument) -> RawParams {
    let c = doc.core;
    RawParams {
        phi: doc.rotation.map(|r| r.phi),
        theta: doc.rotation.map(|r| r.theta),
        varphi: doc.rotation.map(|r| r.varphi),
        chi: c.chi,
        mu: c.mu,
        alpha1: c.alpha1,
        alpha2: c.alpha2,
        alpha3: c.alpha3,
        beta2: c.beta2,
    }
}

/// The document as a JSON object, for callers that add keys.
pub fn params_to_value(doc: &ParamsDocument) -> Value {
    serde_json::to_value(raw_params(doc)).expect("plain struct serializes")
}

pub fn serialize_params(doc: &ParamsDocument) -> String {
    let mut s = serde_json::to_string_pretty(&raw_params(doc)).expect("plain struct serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interface::SeededGenerator;

    const IDENTITY: &str = r#"{"kind": "unitary",
        "re": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        "im": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]}"#;

    #[test]
    fn identity_document() {
        let d = parse_matrix(IDENTITY).unwrap();
        assert_eq!(d.kind, MatrixKind::Unitary);
        assert_eq!(d.matrix, ComplexMatrix3::identity());
    }

    #[test]
    fn shape_errors_name_the_field() {
        let text = r#"{"kind": "general", "re": [[1, 0, 0], [0, 1, 0]], "im": [[0,0,0],[0,0,0],[0,0,0]]}"#;
        let e = parse_matrix(text).unwrap_err();
        assert!(matches!(&e, Error::MalformedDocument(m) if m.contains("\"re\"") && m.contains("3 rows")));

        let text = r#"{"kind": "general", "re": [[1,0,0],[0,1,0],[0,0,1]], "im": [[0,0,0],[0,"x",0],[0,0,0]]}"#;
        let e = parse_matrix(text).unwrap_err();
        assert!(matches!(&e, Error::MalformedDocument(m) if m.contains("\"im\"[1][1]")));

        let e = parse_matrix(r#"{"re": [], "im": []}"#).unwrap_err();
        assert!(matches!(&e, Error::MalformedDocument(m) if m.contains("\"kind\"")));

        let e = parse_matrix("{\"kind\": \n").unwrap_err();
        assert!(matches!(&e, Error::MalformedDocument(m) if m.contains("line 2")));

        let e = parse_matrix(&IDENTITY.replace("unitary", "sparse")).unwrap_err();
        assert!(matches!(e, Error::MalformedDocument(_)));
    }

    #[test]
    fn serialize_round_trip_is_bit_exact() {
        let mut g = SeededGenerator::new(17);
        for _ in 0..200 {
            let mut m = g.complex_gaussian_matrix();
            m.0[0][0].re *= 1e-300;
            m.0[1][2].im *= 1e300;
            m.0[2][1].re = -0.0;
            let doc = MatrixDocument::new(MatrixKind::General, m);
            let text = serialize_matrix(&doc);
            let back = parse_matrix(&text).unwrap();
            for r in 0..3 {
                for c in 0..3 {
                    assert_eq!(back.matrix.0[r][c].re.to_bits(), m.0[r][c].re.to_bits());
                    assert_eq!(back.matrix.0[r][c].im.to_bits(), m.0[r][c].im.to_bits());
                }
            }
            assert_eq!(serialize_matrix(&back), text);
        }
    }

    #[test]
    fn non_finite_entries_do_not_round_trip() {
        let mut m = ComplexMatrix3::identity();
        m.0[0][0].re = f64::NAN;
        let text = serialize_matrix(&MatrixDocument::new(MatrixKind::General, m));
        assert!(matches!(parse_matrix(&text), Err(Error::MalformedDocument(_))));
    }

    #[test]
    fn params_documents() {
        let p = UnitaryParams {
            rotation: RotationAngles::new(0.1, 0.2, 0.3),
            chi: 0.4,
            mu: 0.5,
            alpha1: 0.6,
            alpha2: 0.7,
            alpha3: 0.8,
            beta2: 0.9,
        };
        let text = serialize_params(&ParamsDocument::full(&p));
        assert_eq!(parse_params(&text).unwrap().to_unitary_params(), p);

        let core = ParamsDocument::core_only(p.core());
        let text = serialize_params(&core);
        assert!(!text.contains("phi\""));
        assert_eq!(parse_params(&text).unwrap(), core);

        let with_extra = r#"{"chi": 0, "mu": 0, "alpha1": 0, "alpha2": 0, "alpha3": 0, "beta2": 3.0, "residual": 0.0}"#;
        assert!(parse_params(with_extra).is_ok());

        let missing = r#"{"chi": 0, "mu": 0, "alpha1": 0, "alpha2": 0, "alpha3": 0}"#;
        let e = parse_params(missing).unwrap_err();
        assert!(matches!(&e, Error::MalformedDocument(m) if m.contains("beta2")));

        let partial = r#"{"phi": 1, "chi": 0, "mu": 0, "alpha1": 0, "alpha2": 0, "alpha3": 0, "beta2": 0}"#;
        assert!(matches!(parse_params(partial), Err(Error::MalformedDocument(_))));
    }
}
