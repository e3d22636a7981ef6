//! Reference list loading and extraction of screenable text from payloads.

mod mt;

pub use mt::{parse_mt, screenable_fields, MtField, MtMessage, DEFAULT_SCREEN_TAGS};

use crate::index::Document;
use crate::normalize::FOLD_TABLE_VERSION;
use crate::{DocId, Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// Parses a reference list: one `doc_id<TAB>raw_name` per line. Blank lines
/// and lines starting with `#` are ignored.
pub fn parse_reference_list(text: &str) -> Result<Vec<Document>> {
    let mut seen: HashMap<DocId, usize> = HashMap::new();
    let mut docs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, name) = line
            .split_once('\t')
            .ok_or_else(|| Error::format(line_no, "expected doc_id<TAB>name"))?;
        let id: DocId = id
            .trim()
            .parse()
            .map_err(|_| Error::format(line_no, format!("bad document id {:?}", id.trim())))?;
        if let Some(first) = seen.insert(id, line_no) {
            return Err(Error::format(
                line_no,
                format!("duplicate document id {id} (first on line {first})"),
            ));
        }
        let doc = Document::new(id, name.trim());
        if doc.tokens.is_empty() {
            return Err(Error::format(line_no, format!("name {name:?} has no tokens")));
        }
        docs.push(doc);
    }
    if docs.is_empty() {
        return Err(Error::NoDocuments);
    }
    Ok(docs)
}

pub fn load_reference_list(path: impl AsRef<Path>) -> Result<Vec<Document>> {
    parse_reference_list(&std::fs::read_to_string(path)?)
}

pub fn write_reference_list(docs: &[Document]) -> String {
    docs.iter()
        .map(|d| format!("{}\t{}\n", d.doc_id, d.raw_name))
        .collect()
}

#[derive(Serialize, Deserialize)]
struct Snapshot {
    fold_table_version: u32,
    documents: Vec<SnapshotDoc>,
}

#[derive(Serialize, Deserialize)]
struct SnapshotDoc {
    doc_id: DocId,
    raw_name: String,
}

/// JSON snapshot of a reference list. Tokens are not stored; they are
/// derived again on load.
pub fn save_snapshot(docs: &[Document], path: impl AsRef<Path>) -> Result<()> {
    let snap = Snapshot {
        fold_table_version: FOLD_TABLE_VERSION,
        documents: docs
            .iter()
            .map(|d| SnapshotDoc {
                doc_id: d.doc_id,
                raw_name: d.raw_name.clone(),
            })
            .collect(),
    };
    std::fs::write(path, serde_json::to_vec(&snap)?)?;
    Ok(())
}

pub fn load_snapshot(path: impl AsRef<Path>) -> Result<Vec<Document>> {
    let snap: Snapshot = serde_json::from_slice(&std::fs::read(path)?)?;
    if snap.fold_table_version != FOLD_TABLE_VERSION {
        return Err(Error::Config(format!(
            "snapshot uses fold table version {}, this build has {FOLD_TABLE_VERSION}",
            snap.fold_table_version
        )));
    }
    Ok(snap
        .documents
        .into_iter()
        .map(|d| Document::new(d.doc_id, d.raw_name))
        .collect())
}

/// Loads a snapshot when `path` ends in `.json`, a reference list otherwise.
pub fn load_documents(path: impl AsRef<Path>) -> Result<Vec<Document>> {
    let path = path.as_ref();
    if path.extension().is_some_and(|e| e == "json") {
        load_snapshot(path)
    } else {
        load_reference_list(path)
    }
}

/// How a screening payload is to be read.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    /// A SWIFT MT message; only the screenable fields are used.
    Mt,
    /// Free text, screened as a whole.
    #[default]
    Text,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mt" => Ok(InputFormat::Mt),
            "text" => Ok(InputFormat::Text),
            other => Err(Error::Config(format!("unknown format {other:?}, expected mt or text"))),
        }
    }
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputFormat::Mt => "mt",
            InputFormat::Text => "text",
        })
    }
}

/// The text to screen for `payload`: the payload itself, or the screenable
/// fields of an MT message one per line.
pub fn screenable_text(payload: &str, format: InputFormat) -> Result<String> {
    match format {
        InputFormat::Text => Ok(payload.to_string()),
        InputFormat::Mt => {
            let msg = parse_mt(payload)?;
            let fields = screenable_fields(&msg, DEFAULT_SCREEN_TAGS);
            Ok(fields
                .into_iter()
                .map(|(_, text)| text)
                .collect::<Vec<_>>()
                .join("\n"))
        }
    }
}
