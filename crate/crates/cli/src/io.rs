//! JSON documents for every artifact the CLI reads or writes.
//!
//! Matrices are row-major nested arrays. Numbers are written with 17
//! significant digits so that a load after a save returns the same doubles.

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::Path;

use matmoment::{
    Atom, AtomicMatrixMeasure, Certificate, CertificateTerm, MatrixPolynomial, MomentSequence, Parity, ScalarPoly,
    SetDescription, SymMatrix, Tolerances,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::CliError;

/// Largest entrywise asymmetry accepted on load, relative to `max(1, max |a_ij|)`.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Row-major nested arrays.
pub type Matrix = Vec<Vec<f64>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDoc {
    pub p: usize,
    pub coeffs: Vec<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsDoc {
    pub p: usize,
    pub blocks: Vec<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDoc {
    pub x: f64,
    pub weight: Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDoc {
    pub p: usize,
    pub atoms: Vec<AtomDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetDoc {
    IntervalPoint { a: f64, b: f64, c: f64 },
    PointHalfLine { a: f64, b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityDoc {
    Even,
    Odd,
}

/// `generators[i]` holds ascending coefficients; `grams[i]` lives on the block
/// monomial basis of degree `basis_degrees[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertDoc {
    pub set: SetDoc,
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<ParityDoc>,
    pub generators: Vec<Vec<f64>>,
    pub grams: Vec<Matrix>,
    pub basis_degrees: Vec<usize>,
}

/// A polynomial together with a certificate for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub polynomial: PolyDoc,
    pub certificate: CertDoc,
}

fn schema<T>(what: &str, msg: impl std::fmt::Display) -> Result<T, CliError> {
    Err(CliError::invalid(format!("{what}: {msg}")))
}

pub fn matrix_to_doc(m: &SymMatrix) -> Matrix {
    let a = m.as_matrix();
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)]).collect()).collect()
}

pub fn matrix_from_doc(rows: &Matrix, p: usize, what: &str) -> Result<SymMatrix, CliError> {
    if rows.len() != p || rows.iter().any(|r| r.len() != p) {
        return schema(what, format!("expected a {p}x{p} matrix"));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    if flat.iter().any(|v| !v.is_finite()) {
        return schema(what, "non-finite entry");
    }
    let amax = flat.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for i in 0..p {
        for j in 0..i {
            let d = (rows[i][j] - rows[j][i]).abs();
            if d > SYMMETRY_TOL * amax {
                return schema(what, format!("asymmetric entry ({i},{j}): |a_ij - a_ji| = {d:e}"));
            }
        }
    }
    SymMatrix::from_row_slice(p, &flat).map_err(CliError::from)
}

fn check_p(p: usize, what: &str) -> Result<(), CliError> {
    if p == 0 {
        return schema(what, "p must be positive");
    }
    Ok(())
}

impl PolyDoc {
    pub fn from_poly(f: &MatrixPolynomial) -> Self {
        Self {
            p: f.p(),
            coeffs: f.coeffs().iter().map(matrix_to_doc).collect(),
        }
    }

    pub fn to_poly(&self) -> Result<MatrixPolynomial, CliError> {
        check_p(self.p, "polynomial")?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| matrix_from_doc(c, self.p, &format!("polynomial coefficient {k}")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MatrixPolynomial::new(self.p, coeffs)?)
    }
}

impl MomentsDoc {
    pub fn from_moments(g: &MomentSequence) -> Self {
        Self {
            p: g.p(),
            blocks: g.blocks().iter().map(matrix_to_doc).collect(),
        }
    }

    pub fn to_moments(&self) -> Result<MomentSequence, CliError> {
        check_p(self.p, "moments")?;
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .map(|(k, b)| matrix_from_doc(b, self.p, &format!("moment block {k}")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MomentSequence::new(self.p, blocks)?)
    }
}

impl MeasureDoc {
    pub fn from_measure(mu: &AtomicMatrixMeasure) -> Self {
        Self {
            p: mu.p(),
            atoms: mu
                .atoms()
                .iter()
                .map(|a| AtomDoc {
                    x: a.location,
                    weight: matrix_to_doc(&a.weight),
                })
                .collect(),
        }
    }

    pub fn to_measure(&self, tol: &Tolerances) -> Result<AtomicMatrixMeasure, CliError> {
        check_p(self.p, "measure")?;
        let atoms = self
            .atoms
            .iter()
            .enumerate()
            .map(|(j, a)| {
                if !a.x.is_finite() {
                    return schema(&format!("atom {j}"), "non-finite location");
                }
                Ok(Atom {
                    location: a.x,
                    weight: matrix_from_doc(&a.weight, self.p, &format!("atom {j} weight"))?,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AtomicMatrixMeasure::new(self.p, atoms, tol)?)
    }
}

impl SetDoc {
    pub fn from_set(set: &SetDescription) -> Self {
        match *set {
            SetDescription::IntervalPoint { a, b, c } => Self::IntervalPoint { a, b, c },
            SetDescription::PointHalfLine { a, b } => Self::PointHalfLine { a, b },
        }
    }

    pub fn to_set(&self) -> Result<SetDescription, CliError> {
        Ok(match *self {
            Self::IntervalPoint { a, b, c } => SetDescription::interval_point(a, b, c)?,
            Self::PointHalfLine { a, b } => SetDescription::point_half_line(a, b)?,
        })
    }
}

impl CertDoc {
    pub fn from_certificate(cert: &Certificate) -> Self {
        Self {
            set: SetDoc::from_set(&cert.set),
            degree: cert.degree,
            parity: (cert.parity != Parity::of(cert.degree)).then_some(match cert.parity {
                Parity::Even => ParityDoc::Even,
                Parity::Odd => ParityDoc::Odd,
            }),
            generators: cert.terms.iter().map(|t| t.generator.coeffs().to_vec()).collect(),
            grams: cert.terms.iter().map(|t| matrix_to_doc(&t.gram)).collect(),
            basis_degrees: cert.terms.iter().map(|t| t.basis_degree).collect(),
        }
    }

    pub fn to_certificate(&self) -> Result<Certificate, CliError> {
        let k = self.generators.len();
        if self.grams.len() != k || self.basis_degrees.len() != k {
            return schema("certificate", "generators, grams and basis_degrees differ in length");
        }
        let mut terms = Vec::with_capacity(k);
        for i in 0..k {
            let d = self.basis_degrees[i];
            let dim = self.grams[i].len();
            if dim == 0 || !dim.is_multiple_of(d + 1) {
                return schema(&format!("certificate term {i}"), "gram size is not a multiple of basis_degree + 1");
            }
            if self.generators[i].iter().any(|v| !v.is_finite()) {
                return schema(&format!("certificate term {i}"), "non-finite generator coefficient");
            }
            terms.push(CertificateTerm {
                generator: ScalarPoly::new(self.generators[i].clone()),
                gram: matrix_from_doc(&self.grams[i], dim, &format!("certificate gram {i}"))?,
                basis_degree: d,
            });
        }
        let p = terms.first().map(|t| t.gram.dim() / (t.basis_degree + 1));
        if terms.iter().any(|t| Some(t.gram.dim() / (t.basis_degree + 1)) != p) {
            return schema("certificate", "grams disagree on the matrix size p");
        }
        Ok(Certificate {
            set: self.set.to_set()?,
            parity: match self.parity {
                Some(ParityDoc::Even) => Parity::Even,
                Some(ParityDoc::Odd) => Parity::Odd,
                None => Parity::of(self.degree),
            },
            degree: self.degree,
            terms,
        })
    }
}

/// Reads a file, or stdin for `-`.
pub fn read_source(path: &str) -> Result<String, CliError> {
    let mut text = String::new();
    if path == "-" {
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::invalid(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{path}: {e}")))?;
    }
    Ok(text)
}

pub fn parse<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::invalid(format!("{what}: schema error: {e}")))
}

pub fn load<T: DeserializeOwned>(path: &str, what: &str) -> Result<T, CliError> {
    parse(&read_source(path)?, &format!("{what} ({path})"))
}

/// A polynomial document, or the `polynomial` half of an instance document.
pub fn load_poly(path: &str) -> Result<MatrixPolynomial, CliError> {
    let text = read_source(path)?;
    let value: serde_json::Value = parse(&text, "polynomial")?;
    let doc: PolyDoc = if value.get("polynomial").is_some() {
        parse::<InstanceDoc>(&text, &format!("instance ({path})"))?.polynomial
    } else {
        parse(&text, &format!("polynomial ({path})"))?
    };
    doc.to_poly()
}

/// A certificate document, or the `certificate` half of an instance document.
pub fn load_certificate(path: &str) -> Result<Certificate, CliError> {
    let text = read_source(path)?;
    let value: serde_json::Value = parse(&text, "certificate")?;
    let doc: CertDoc = if value.get("certificate").is_some() {
        parse::<InstanceDoc>(&text, &format!("instance ({path})"))?.certificate
    } else {
        parse(&text, &format!("certificate ({path})"))?
    };
    doc.to_certificate()
}

/// `%.17g`-style rendering with trailing zeros dropped.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let sci = format!("{:.16e}", v.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let mut out = String::new();
    if v < 0.0 {
        out.push('-');
    }
    if (-5..17).contains(&exp) {
        let (int, frac) = if exp >= 0 {
            let cut = exp as usize + 1;
            (digits[..cut].to_string(), digits[cut..].to_string())
        } else {
            ("0".to_string(), "0".repeat((-exp - 1) as usize) + &digits)
        };
        let frac = frac.trim_end_matches('0');
        let _ = write!(out, "{int}.{}", if frac.is_empty() { "0" } else { frac });
    } else {
        let (lead, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        let _ = write!(out, "{lead}.{}e{exp}", if rest.is_empty() { "0" } else { rest });
    }
    out
}

/// Pretty JSON with [`format_f64`] for every double.
struct Digits17<'a>(PrettyFormatter<'a>);

impl Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("documents serialize");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// Writes to `path`, or stdout when it is `None` or `-`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::write(p, text).map_err(|e| CliError::invalid(format!("{}: {e}", p.display())))
        }
        _ => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::invalid(format!("stdout: {e}"))),
    }
}
