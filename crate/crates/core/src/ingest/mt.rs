use crate::{Error, Result};
use std::collections::BTreeMap;

/// Tags screened by default: ordering and beneficiary parties, remittance
/// information.
pub const DEFAULT_SCREEN_TAGS: &[&str] = &["50A", "50F", "50K", "59", "70"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MtField {
    pub tag: String,
    /// Value lines as written, the first one starting right after the tag.
    pub lines: Vec<String>,
}

impl MtField {
    /// Lines trimmed and joined by single spaces.
    pub fn value(&self) -> String {
        self.lines
            .iter()
            .map(|l| l.trim())
            .filter(|l| !l.is_empty())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MtMessage {
    /// Raw block contents keyed by block id.
    pub blocks: BTreeMap<String, String>,
    /// Block 4 fields in message order.
    pub fields: Vec<MtField>,
}

impl MtMessage {
    pub fn field(&self, tag: &str) -> Option<&MtField> {
        self.fields.iter().find(|f| f.tag == tag)
    }

    /// Block 4 written back out, one tag per line.
    pub fn text_block(&self) -> String {
        let mut out = String::new();
        for f in &self.fields {
            out.push(':');
            out.push_str(&f.tag);
            out.push(':');
            out.push_str(&f.lines.join("\n"));
            out.push('\n');
        }
        out
    }
}

fn malformed(offset: usize, message: impl Into<String>) -> Error {
    Error::Message {
        offset,
        message: message.into(),
    }
}

/// Parses `{id:content}` blocks. Block 4 runs up to its `-}` trailer;
/// other blocks may nest braces.
pub fn parse_mt(raw: &str) -> Result<MtMessage> {
    let bytes = raw.as_bytes();
    let mut msg = MtMessage::default();
    let mut text_block = None;
    let mut pos = 0;
    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos == bytes.len() {
            break;
        }
        if bytes[pos] != b'{' {
            return Err(malformed(pos, "expected '{' opening a block"));
        }
        let colon = raw[pos..]
            .find(':')
            .map(|c| pos + c)
            .ok_or_else(|| malformed(pos, "block without id"))?;
        let id = &raw[pos + 1..colon];
        if id.is_empty() || !id.bytes().all(|b| b.is_ascii_alphanumeric()) {
            return Err(malformed(pos + 1, format!("bad block id {id:?}")));
        }
        let start = colon + 1;
        let end;
        if id == "4" {
            let close = raw[start..]
                .find("-}")
                .ok_or_else(|| malformed(start, "block 4 has no '-}' trailer"))?;
            end = start + close;
            text_block = Some(start);
            pos = end + 2;
        } else {
            let mut depth = 1;
            let mut i = start;
            while i < bytes.len() && depth > 0 {
                match bytes[i] {
                    b'{' => depth += 1,
                    b'}' => depth -= 1,
                    _ => {}
                }
                i += 1;
            }
            if depth > 0 {
                return Err(malformed(pos, format!("block {id} is not closed")));
            }
            end = i - 1;
            pos = i;
        }
        msg.blocks.insert(id.to_string(), raw[start..end].to_string());
    }
    let start = text_block.ok_or_else(|| malformed(raw.len(), "missing block 4"))?;
    msg.fields = parse_fields(&msg.blocks["4"], start)?;
    Ok(msg)
}

/// Length of a `:NN[A-Z]?:` tag at the start of `line`.
fn tag_len(line: &str) -> Option<usize> {
    let b = line.as_bytes();
    let digits = b.len() >= 3 && b[0] == b':' && b[1].is_ascii_digit() && b[2].is_ascii_digit();
    if !digits {
        return None;
    }
    match b.get(3) {
        Some(b':') => Some(4),
        Some(c) if c.is_ascii_uppercase() && b.get(4) == Some(&b':') => Some(5),
        _ => None,
    }
}

fn parse_fields(block: &str, base: usize) -> Result<Vec<MtField>> {
    let mut fields: Vec<MtField> = Vec::new();
    let mut offset = base;
    for line in block.split('\n') {
        let here = offset;
        offset += line.len() + 1;
        let line = line.trim_end_matches('\r');
        if line.starts_with(':') {
            let len = tag_len(line).ok_or_else(|| {
                let end = line.len().min(6);
                malformed(here, format!("malformed tag {:?}", &line[..end]))
            })?;
            fields.push(MtField {
                tag: line[1..len - 1].to_string(),
                lines: vec![line[len..].to_string()],
            });
        } else if let Some(f) = fields.last_mut() {
            f.lines.push(line.to_string());
        } else if !line.trim().is_empty() {
            return Err(malformed(here, "text before the first tag"));
        }
    }
    for f in &mut fields {
        while f.lines.len() > 1 && f.lines.last().is_some_and(|l| l.trim().is_empty()) {
            f.lines.pop();
        }
    }
    Ok(fields)
}

/// Drops leading slash codes: while the line starts with `/`, a segment
/// ended by another `/` or by the end of the line is removed, and a segment
/// ended by whitespace is kept without its slash.
fn strip_slash_codes(line: &str) -> &str {
    let mut rest = line.trim();
    while let Some(after) = rest.strip_prefix('/') {
        match after.find(|c: char| c == '/' || c.is_whitespace()) {
            Some(i) if after.as_bytes()[i] == b'/' => rest = &after[i..],
            Some(_) => {
                rest = after;
                break;
            }
            None => return "",
        }
    }
    rest.trim()
}

fn tag_selected(tag: &str, patterns: &[&str]) -> bool {
    patterns.iter().any(|p| match p.strip_suffix('*') {
        Some(prefix) => tag.starts_with(prefix),
        None => tag == *p,
    })
}

/// `(tag, text)` for each field whose tag is in `tags` (a trailing `*`
/// matches any option letter), with slash-code prefixes removed. Fields
/// left empty are skipped.
pub fn screenable_fields(msg: &MtMessage, tags: &[&str]) -> Vec<(String, String)> {
    msg.fields
        .iter()
        .filter(|f| tag_selected(&f.tag, tags))
        .filter_map(|f| {
            let text = f
                .lines
                .iter()
                .map(|l| strip_slash_codes(l))
                .filter(|l| !l.is_empty())
                .collect::<Vec<_>>()
                .join(" ");
            (!text.is_empty()).then(|| (f.tag.clone(), text))
        })
        .collect()
}
