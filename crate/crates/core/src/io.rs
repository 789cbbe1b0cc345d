//! Text formats: matrix files, system-matrix files, and keyed parameter
//! files for the pencil builders. `#` starts a comment anywhere.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::{ConstMatrix, Matrix};
use crate::pencils::{NleigsBasic, NleigsLowRank, NleigsParams, SaadParams, SuBaiParams};
use crate::polymat::PolyMatrix;
use crate::psm::Psm;
use crate::ratmat::RatMatrix;
use crate::scalars::{parse_point, parse_poly, parse_rat, parse_ratfun, Point, Rat};

/// Any of the three matrix-like file kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixFile {
    Poly(PolyMatrix),
    Rational(RatMatrix),
    System(Psm),
}

impl MatrixFile {
    pub fn to_rational(&self) -> RatMatrix {
        match self {
            MatrixFile::Poly(p) => p.to_rational(),
            MatrixFile::Rational(r) => r.clone(),
            MatrixFile::System(s) => s.transfer_function(),
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty())
}

fn header(line: Option<&str>) -> Result<(String, usize, usize)> {
    let line = line.ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let mut parts = line.split_whitespace();
    let kind = parts.next().unwrap_or("").to_string();
    let mut dim = || -> Result<usize> {
        parts
            .next()
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header `{line}`")))
    };
    let (r, c) = (dim()?, dim()?);
    Ok((kind, r, c))
}

fn parse_body<T>(
    lines: &mut dyn Iterator<Item = &str>,
    rows: usize,
    cols: usize,
    entry: impl Fn(&str) -> Result<T>,
) -> Result<Matrix<T>> {
    let mut data = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let line = if cols == 0 { "" } else { lines.next().ok_or_else(|| Error::Parse(format!("missing row {}", i + 1)))? };
        let entries: Vec<&str> = if cols == 0 { vec![] } else { line.split(';').map(str::trim).collect() };
        if entries.len() != cols {
            return Err(Error::Parse(format!("row {} has {} entries, expected {cols}", i + 1, entries.len())));
        }
        for e in entries {
            data.push(entry(e)?);
        }
    }
    Matrix::new(rows, cols, data)
}

fn parse_indices(line: Option<&str>, key: &str) -> Result<Vec<usize>> {
    let line = line.ok_or_else(|| Error::Parse(format!("missing `{key}:` line")))?;
    let rest = line
        .strip_prefix(key)
        .and_then(|r| r.trim_start().strip_prefix(':'))
        .ok_or_else(|| Error::Parse(format!("expected `{key}:`, found `{line}`")))?;
    rest.split_whitespace()
        .map(|t| match t.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(Error::Parse(format!("bad 1-based index `{t}`"))),
        })
        .collect()
}

/// Reads a `polymatrix` file, with optional `staterows:`/`statecols:`
/// lines, or a `ratmatrix` file.
pub fn parse_matrix_file(text: &str) -> Result<MatrixFile> {
    let mut lines = content_lines(text);
    let (kind, rows, cols) = header(lines.next())?;
    match kind.as_str() {
        "polymatrix" => {
            let p = parse_body(&mut lines, rows, cols, parse_poly)?;
            match lines.next() {
                None => Ok(MatrixFile::Poly(p)),
                Some(first) => {
                    let sr = parse_indices(Some(first), "staterows")?;
                    let sc = parse_indices(lines.next(), "statecols")?;
                    if let Some(extra) = lines.next() {
                        return Err(Error::Parse(format!("trailing content `{extra}`")));
                    }
                    Ok(MatrixFile::System(Psm::new(p, sr, sc)?))
                }
            }
        }
        "ratmatrix" => {
            let r = parse_body(&mut lines, rows, cols, parse_ratfun)?;
            if let Some(extra) = lines.next() {
                return Err(Error::Parse(format!("trailing content `{extra}`")));
            }
            Ok(MatrixFile::Rational(r))
        }
        other => Err(Error::Parse(format!("unknown matrix kind `{other}`"))),
    }
}

pub fn parse_polymatrix(text: &str) -> Result<PolyMatrix> {
    match parse_matrix_file(text)? {
        MatrixFile::Poly(p) => Ok(p),
        _ => Err(Error::Parse("expected a polymatrix file".into())),
    }
}

/// A `ratmatrix` file; a plain `polymatrix` file is accepted too.
pub fn parse_ratmatrix(text: &str) -> Result<RatMatrix> {
    match parse_matrix_file(text)? {
        MatrixFile::Poly(p) => Ok(p.to_rational()),
        MatrixFile::Rational(r) => Ok(r),
        MatrixFile::System(_) => Err(Error::Parse("expected a matrix without state lines".into())),
    }
}

/// A `polymatrix` file with state lines; without them the state is empty.
pub fn parse_psm(text: &str) -> Result<Psm> {
    match parse_matrix_file(text)? {
        MatrixFile::System(s) => Ok(s),
        MatrixFile::Poly(p) => Ok(Psm::empty_state(p)),
        MatrixFile::Rational(_) => Err(Error::Parse("expected a polymatrix file".into())),
    }
}

pub fn format_polymatrix(p: &PolyMatrix) -> String {
    format!("polymatrix {} {}\n{p}", p.rows(), p.cols())
}

pub fn format_ratmatrix(r: &RatMatrix) -> String {
    format!("ratmatrix {} {}\n{r}", r.rows(), r.cols())
}

pub fn format_psm(s: &Psm) -> String {
    s.to_string()
}

/// `key: value` lines. Matrices are written inline as `1 0; 0 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    entries: BTreeMap<String, String>,
}

impl Params {
    pub fn parse(text: &str) -> Result<Params> {
        let mut entries = BTreeMap::new();
        for line in content_lines(text) {
            let (k, v) = line.split_once(':').ok_or_else(|| Error::Parse(format!("expected `key: value`, got `{line}`")))?;
            if entries.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(Error::Parse(format!("duplicate key `{}`", k.trim())));
            }
        }
        Ok(Params { entries })
    }

    pub fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn raw(&self, key: &str) -> Result<&str> {
        self.entries.get(key).map(String::as_str).ok_or_else(|| Error::Parse(format!("missing key `{key}`")))
    }

    pub fn rats(&self, key: &str) -> Result<Vec<Rat>> {
        self.raw(key)?.split_whitespace().map(parse_rat).collect()
    }

    pub fn points(&self, key: &str) -> Result<Vec<Point>> {
        self.raw(key)?.split_whitespace().map(parse_point).collect()
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        self.raw(key)?.parse().map_err(|_| Error::Parse(format!("`{key}` must be a nonnegative integer")))
    }

    /// An inline constant matrix; rows split on `;`, entries on whitespace.
    pub fn matrix(&self, key: &str) -> Result<ConstMatrix> {
        let rows: Vec<Vec<Rat>> = self
            .raw(key)?
            .split(';')
            .map(|r| r.split_whitespace().map(parse_rat).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse(format!("ragged matrix `{key}`")));
        }
        if cols == 0 {
            return Ok(Matrix::zeros(0, 0));
        }
        Ok(Matrix::from_rows(rows))
    }

    /// `prefix0`, `prefix1`, … up to the first missing index.
    pub fn matrices(&self, prefix: &str, from: usize) -> Result<Vec<ConstMatrix>> {
        let mut out = Vec::new();
        let mut i = from;
        while self.has(&format!("{prefix}{i}")) {
            out.push(self.matrix(&format!("{prefix}{i}"))?);
            i += 1;
        }
        Ok(out)
    }

    /// `A0`, `B0`, `B1 … Bs`, `sigma`.
    pub fn saad(&self) -> Result<SaadParams> {
        Ok(SaadParams {
            a0: self.matrix("A0")?,
            b0: self.matrix("B0")?,
            b: self.matrices("B", 1)?,
            sigma: if self.has("sigma") { self.rats("sigma")? } else { vec![] },
        })
    }

    /// `D0 … Dq` and, for a nonzero strictly proper part, `A`, `B`, `C`.
    pub fn subai(&self) -> Result<SuBaiParams> {
        let d = self.matrices("D", 0)?;
        let (p, m) = d.first().map_or((0, 0), |x| (x.rows(), x.cols()));
        let (a, b, c) = if self.has("A") {
            (self.matrix("A")?, self.matrix("B")?, self.matrix("C")?)
        } else {
            (Matrix::zeros(0, 0), Matrix::zeros(0, m), Matrix::zeros(p, 0))
        };
        Ok(SuBaiParams { d, a, b, c })
    }

    /// `sigma`, `xi` (`inf` allowed), `beta`.
    pub fn nleigs_params(&self) -> Result<NleigsParams> {
        NleigsParams::new(self.rats("sigma")?, self.points("xi")?, self.rats("beta")?)
    }

    /// NLEIGS keys plus `D0 … DN`.
    pub fn nleigs(&self) -> Result<NleigsBasic> {
        NleigsBasic::new(self.nleigs_params()?, self.matrices("D", 0)?)
    }

    /// NLEIGS keys plus `D0 … Dp`, `L{p+1} … LN` and `U`.
    pub fn nleigs_lowrank(&self) -> Result<NleigsLowRank> {
        let d = self.matrices("D", 0)?;
        let l = self.matrices("L", d.len())?;
        NleigsLowRank::new(self.nleigs_params()?, d, l, self.matrix("U")?)
    }
}
