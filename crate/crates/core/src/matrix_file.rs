//! Plain-text matrix files.
//!
//! ```text
//! # tau on genus 1
//! genus 1
//! 0 1
//! 1 1
//! ```
//!
//! Lines starting with `#` and blank lines are skipped. After the
//! `genus <g>` line come `2g` rows of `2g` digits; row `i` lists the
//! coordinates of the image of `x_i` in `x_1..x_{2g}`.

use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf2::{Gf2Vector, HomologyMap, IntersectionForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFile {
    pub genus: usize,
    /// `images[i]` is the image of `x_{i+1}`.
    pub images: Vec<Gf2Vector>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse(text: &str) -> Result<MatrixFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing \"genus <g>\" line"))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("genus") {
        return Err(parse_err(
            hline,
            format!("expected \"genus <g>\", found {header:?}"),
        ));
    }
    let genus: usize = words
        .next()
        .and_then(|w| w.parse().ok())
        .ok_or_else(|| parse_err(hline, "genus must be a positive integer"))?;
    if words.next().is_some() {
        return Err(parse_err(hline, "trailing text after genus"));
    }
    if genus == 0 {
        return Err(parse_err(hline, "genus must be a positive integer"));
    }
    let dim = genus
        .checked_mul(2)
        .ok_or_else(|| parse_err(hline, "genus is too large"))?;

    let mut images = Vec::new();
    let mut last_line = hline;
    for (lineno, line) in lines {
        last_line = lineno;
        if images.len() == dim {
            return Err(parse_err(lineno, format!("extra row; expected {dim} rows")));
        }
        let bits = line
            .split_whitespace()
            .map(|t| match t {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(parse_err(lineno, format!("entry {other:?} is not 0 or 1"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        if bits.len() != dim {
            return Err(parse_err(
                lineno,
                format!("expected {dim} entries, found {}", bits.len()),
            ));
        }
        images.push(Gf2Vector::from_bits(genus, bits)?);
    }
    if images.len() != dim {
        return Err(parse_err(
            last_line,
            format!("expected {dim} rows, found {}", images.len()),
        ));
    }
    Ok(MatrixFile { genus, images })
}

pub fn read(path: &Path) -> Result<MatrixFile> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text)
}

impl MatrixFile {
    /// Validates against the x-basis form.
    pub fn to_map(&self) -> Result<HomologyMap> {
        let form = Arc::new(IntersectionForm::standard(self.genus)?);
        HomologyMap::new(form, self.images.clone())
    }
}

pub fn format(f: &HomologyMap) -> String {
    let mut out = format!("genus {}\n", f.genus());
    for row in f.matrix() {
        let cells: Vec<String> = row.iter().map(u8::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}
