//! Raw predictions CSV: header `true_class,bit_1,…,bit_n`, one row per sample.

use std::path::Path;

use crate::error::{EcocError, Result};

use super::FoldData;

pub fn parse_predictions(text: &str, fold: u32, classes: usize) -> Result<FoldData> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| EcocError::parse(1, e.to_string()))?
        .clone();
    if header.get(0) != Some("true_class") {
        return Err(EcocError::parse(1, "first column must be `true_class`"));
    }
    let n = header.len() - 1;
    if n == 0 {
        return Err(EcocError::parse(1, "no classifier columns"));
    }
    for (i, name) in header.iter().skip(1).enumerate() {
        if name != format!("bit_{}", i + 1) {
            return Err(EcocError::parse(
                1,
                format!("column {} should be `bit_{}`, found `{name}`", i + 2, i + 1),
            ));
        }
    }

    let mut records = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            EcocError::parse(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != n + 1 {
            return Err(EcocError::parse(
                line,
                format!("expected {} fields, found {}", n + 1, record.len()),
            ));
        }
        let class: usize = record[0].trim().parse().map_err(|_| {
            EcocError::parse(line, format!("`{}` is not a class index", &record[0]))
        })?;
        if class >= classes {
            return Err(EcocError::parse(
                line,
                format!("class {class} out of range for {classes} classes"),
            ));
        }
        let bits = record
            .iter()
            .skip(1)
            .enumerate()
            .map(|(i, field)| match field.trim() {
                "0" => Ok(0u8),
                "1" => Ok(1u8),
                other => Err(EcocError::parse(
                    line,
                    format!("bit_{}: `{other}` is not 0 or 1", i + 1),
                )),
            })
            .collect::<Result<Vec<u8>>>()?;
        records.push((class, bits));
    }
    Ok(FoldData { fold, n, records })
}

pub fn load_predictions(path: &Path, fold: u32, classes: usize) -> Result<FoldData> {
    let text = std::fs::read_to_string(path).map_err(|e| EcocError::io(path, e))?;
    parse_predictions(&text, fold, classes)
}

pub fn predictions_to_csv(data: &FoldData) -> String {
    let mut out = String::from("true_class");
    for i in 1..=data.n {
        out.push_str(&format!(",bit_{i}"));
    }
    out.push('\n');
    for (class, bits) in &data.records {
        out.push_str(&class.to_string());
        for &b in bits {
            out.push(',');
            out.push(if b == 1 { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

pub fn write_predictions(data: &FoldData, path: &Path) -> Result<()> {
    std::fs::write(path, predictions_to_csv(data)).map_err(|e| EcocError::io(path, e))
}
