use super::{decode, Triplifier, TriplifierOptions};
use crate::error::{Error, Result};
use crate::model::{FacadeContainer, FacadeKey, FacadeTree, FacadeValue};
use std::collections::HashSet;

/// RFC 4180 CSV with `,` delimiter. Rows become number-keyed containers;
/// cells are keyed by header name or by 1-based column index. Empty cells
/// produce no slot.
pub fn triplify_csv(bytes: &[u8], options: &TriplifierOptions) -> Result<FacadeTree> {
    let text = decode(bytes, &options.charset)?;
    let mut reader = ::csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .from_reader(text.as_bytes());

    let csv_error = |e: ::csv::Error| Error::Csv {
        line: e.position().map(|p| p.line()),
        message: e.to_string(),
    };

    let mut records = reader.records();
    let headers: Option<Vec<FacadeKey>> = if options.csv_headers {
        match records.next() {
            None => None,
            Some(record) => {
                let record = record.map_err(csv_error)?;
                let mut seen = HashSet::new();
                let mut keys = Vec::with_capacity(record.len());
                for (i, name) in record.iter().enumerate() {
                    if name.is_empty() {
                        return Err(Error::Csv {
                            line: record.position().map(|p| p.line()),
                            message: format!("empty header name in column {}", i + 1),
                        });
                    }
                    if !seen.insert(name) {
                        return Err(Error::Csv {
                            line: record.position().map(|p| p.line()),
                            message: format!("duplicate header name {name:?}"),
                        });
                    }
                    keys.push(FacadeKey::String(name.to_owned()));
                }
                Some(keys)
            }
        }
    } else {
        None
    };

    let mut root = FacadeContainer::new();
    let mut row_index = 0u64;
    for record in records {
        let record = record.map_err(csv_error)?;
        row_index += 1;
        let mut row = FacadeContainer::new();
        for (i, cell) in record.iter().enumerate() {
            if cell.is_empty() {
                continue;
            }
            let key = match &headers {
                Some(h) => h[i].clone(),
                None => FacadeKey::Number(i as u64 + 1),
            };
            row.push(key, FacadeValue::string(cell));
        }
        root.push(row_index, row);
    }
    Ok(FacadeTree::new(root))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CsvTriplifier;

impl Triplifier for CsvTriplifier {
    fn triplify(&self, bytes: &[u8], options: &TriplifierOptions) -> Result<FacadeTree> {
        triplify_csv(bytes, options)
    }
}
