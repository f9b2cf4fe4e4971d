use crate::errors::{CliError, Result};
use diffusim::calibration::ZeroCouponCurve;
use std::fs;
use std::path::Path;

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    write_file(path, &text)
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn csv_err(path: &Path, line: usize, msg: impl Into<String>) -> CliError {
    CliError::Csv {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

/// A zero-coupon curve file: header `maturity_years,zero_rate`, then one
/// `maturity,rate` row per line, decimal rates.
pub fn read_curve(path: &Path) -> Result<ZeroCouponCurve> {
    let text = read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() => continue,
            Some((i, l)) => break (i, l),
            None => return Err(csv_err(path, 1, "empty file, expected curve header")),
        }
    };
    if header.1.trim() != "maturity_years,zero_rate" {
        return Err(csv_err(
            path,
            header.0 + 1,
            format!("expected header 'maturity_years,zero_rate', found '{}'", header.1.trim()),
        ));
    }
    let mut pairs = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let (m, r) = match (fields.next(), fields.next(), fields.next()) {
            (Some(m), Some(r), None) => (m.trim(), r.trim()),
            _ => return Err(csv_err(path, i + 1, "expected exactly two fields")),
        };
        let maturity: f64 = m
            .parse()
            .map_err(|_| csv_err(path, i + 1, format!("bad maturity '{m}'")))?;
        let rate: f64 = r
            .parse()
            .map_err(|_| csv_err(path, i + 1, format!("bad zero rate '{r}'")))?;
        pairs.push((maturity, rate));
    }
    if pairs.is_empty() {
        return Err(csv_err(path, header.0 + 2, "curve has no points"));
    }
    Ok(ZeroCouponCurve::from_pairs(&pairs)?)
}

/// A rate series file: one decimal value per line, no header.
pub fn read_series(path: &Path) -> Result<Vec<f64>> {
    let text = read_to_string(path)?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| csv_err(path, i + 1, format!("bad value '{line}'")))?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(csv_err(path, 1, "series file has no values"));
    }
    Ok(values)
}
