use crate::{Error, Result};
use std::fmt;
use std::path::Path;

/// Token alphabet: lowercase ASCII letters then digits.
pub const ALPHABET: &[u8; 36] = b"abcdefghijklmnopqrstuvwxyz0123456789";
const A: usize = ALPHABET.len();

#[inline]
pub(crate) fn letter_index(b: u8) -> Option<usize> {
    match b {
        b'a'..=b'z' => Some((b - b'a') as usize),
        b'0'..=b'9' => Some((b - b'0') as usize + 26),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EditOp {
    Insert,
    Delete,
    Substitute,
}

impl EditOp {
    fn code(self) -> char {
        match self {
            EditOp::Insert => 'I',
            EditOp::Delete => 'D',
            EditOp::Substitute => 'S',
        }
    }
}

/// Weighted unit costs for insertions, deletions and substitutions.
///
/// * insertion of record letter `b` right after record letter `a`: `IUC(a, b)`
/// * deletion of query letter `b` right after query letter `a`: `DUC(a, b)`
/// * substitution of query letter `a` by record letter `b`: `SUC(a, b)`
///
/// Every cost lies in `[0, 1]`. Pairs not configured cost 1, as does any
/// pair involving a character outside [`ALPHABET`] or the missing
/// predecessor of a token's first letter. Replacing a letter by itself
/// always costs 0.
#[derive(Clone, PartialEq)]
pub struct CostMatrices {
    insertion: Box<[f64]>,
    deletion: Box<[f64]>,
    substitution: Box<[f64]>,
}

impl Default for CostMatrices {
    fn default() -> Self {
        Self::uniform()
    }
}

impl fmt::Debug for CostMatrices {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CostMatrices")
            .field("overrides", &self.overrides().len())
            .finish()
    }
}

impl CostMatrices {
    /// All costs 1: plain Levenshtein distance.
    pub fn uniform() -> Self {
        CostMatrices {
            insertion: vec![1.0; A * A].into(),
            deletion: vec![1.0; A * A].into(),
            substitution: vec![1.0; A * A].into(),
        }
    }

    /// The bundled phonetic sample: vowel confusions, c/k/q, and cheap
    /// doubling or undoubling of consonants.
    pub fn phonetic_sample() -> Self {
        Self::parse(include_str!("../../data/phonetic_costs.tsv"))
            .expect("bundled cost sample is valid")
    }

    fn table(&self, op: EditOp) -> &[f64] {
        match op {
            EditOp::Insert => &self.insertion,
            EditOp::Delete => &self.deletion,
            EditOp::Substitute => &self.substitution,
        }
    }

    fn table_mut(&mut self, op: EditOp) -> &mut [f64] {
        match op {
            EditOp::Insert => &mut self.insertion,
            EditOp::Delete => &mut self.deletion,
            EditOp::Substitute => &mut self.substitution,
        }
    }

    pub fn set(&mut self, op: EditOp, a: char, b: char, cost: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&cost) {
            return Err(Error::Costs(format!("cost {cost} for ({a},{b}) outside [0,1]")));
        }
        let idx = |c: char| {
            u8::try_from(c)
                .ok()
                .and_then(letter_index)
                .ok_or_else(|| Error::Costs(format!("{c:?} is not in the token alphabet")))
        };
        let (i, j) = (idx(a)?, idx(b)?);
        self.table_mut(op)[i * A + j] = cost;
        Ok(())
    }

    #[inline]
    fn pair(table: &[f64], a: Option<u8>, b: u8) -> f64 {
        match (a.and_then(letter_index), letter_index(b)) {
            (Some(i), Some(j)) => table[i * A + j],
            _ => 1.0,
        }
    }

    #[inline]
    pub fn insertion(&self, prev_record: Option<u8>, record: u8) -> f64 {
        Self::pair(&self.insertion, prev_record, record)
    }

    #[inline]
    pub fn deletion(&self, prev_query: Option<u8>, query: u8) -> f64 {
        Self::pair(&self.deletion, prev_query, query)
    }

    #[inline]
    pub fn substitution(&self, query: u8, record: u8) -> f64 {
        if query == record {
            0.0
        } else {
            Self::pair(&self.substitution, Some(query), record)
        }
    }

    /// Cheapest insertion of any letter in any context.
    pub fn min_insertion(&self) -> f64 {
        self.insertion.iter().copied().fold(1.0, f64::min)
    }

    /// Cheapest deletion of any letter in any context.
    pub fn min_deletion(&self) -> f64 {
        self.deletion.iter().copied().fold(1.0, f64::min)
    }

    pub fn is_uniform(&self) -> bool {
        self.overrides().is_empty()
    }

    /// Every configured pair whose cost differs from 1.
    pub fn overrides(&self) -> Vec<(EditOp, char, char, f64)> {
        let mut out = Vec::new();
        for op in [EditOp::Insert, EditOp::Delete, EditOp::Substitute] {
            for (k, &c) in self.table(op).iter().enumerate() {
                if c != 1.0 {
                    out.push((op, ALPHABET[k / A] as char, ALPHABET[k % A] as char, c));
                }
            }
        }
        out
    }

    /// Parses `op<TAB>a<TAB>b<TAB>cost` lines, `op` one of `I`, `D`, `S`.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut costs = Self::uniform();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [op, a, b, cost] = fields[..] else {
                return Err(Error::format(line_no, "expected 4 tab-separated fields"));
            };
            let op = match op {
                "I" => EditOp::Insert,
                "D" => EditOp::Delete,
                "S" => EditOp::Substitute,
                other => return Err(Error::format(line_no, format!("unknown op {other:?}"))),
            };
            let letter = |s: &str| {
                let mut chars = s.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => Ok(c),
                    _ => Err(Error::format(line_no, format!("{s:?} is not a single letter"))),
                }
            };
            let cost: f64 = cost
                .trim()
                .parse()
                .map_err(|_| Error::format(line_no, format!("bad cost {cost:?}")))?;
            costs
                .set(op, letter(a)?, letter(b)?, cost)
                .map_err(|e| Error::format(line_no, e.to_string()))?;
        }
        Ok(costs)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_tsv(&self) -> String {
        self.overrides()
            .into_iter()
            .map(|(op, a, b, c)| format!("{}\t{a}\t{b}\t{c}\n", op.code()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_null_pairs() {
        let c = CostMatrices::uniform();
        assert!(c.is_uniform());
        assert_eq!(c.insertion(None, b'a'), 1.0);
        assert_eq!(c.substitution(b'a', b'a'), 0.0);
        assert_eq!(c.substitution(b'a', b'b'), 1.0);
    }

    #[test]
    fn parse_and_lookup() {
        let c = CostMatrices::parse("# comment\n\nS\to\tu\t0.2\nI\ts\ts\t0.2\nD\tl\tl\t0.3\n").unwrap();
        assert_eq!(c.substitution(b'o', b'u'), 0.2);
        assert_eq!(c.substitution(b'u', b'o'), 1.0);
        assert_eq!(c.insertion(Some(b's'), b's'), 0.2);
        assert_eq!(c.insertion(None, b's'), 1.0);
        assert_eq!(c.deletion(Some(b'l'), b'l'), 0.3);
        assert_eq!(c.substitution(b'o', b'-'), 1.0);
        assert_eq!(CostMatrices::parse(&c.to_tsv()).unwrap(), c);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = CostMatrices::parse("S\to\tu\t0.2\nX\ta\tb\t1\n").unwrap_err();
        assert!(err.to_string().starts_with("line 2"), "{err}");
        assert!(CostMatrices::parse("S\to\tu\t1.5\n").is_err());
        assert!(CostMatrices::parse("S\tö\tu\t0.5\n").is_err());
        assert!(CostMatrices::parse("S\too\tu\t0.5\n").is_err());
        assert!(CostMatrices::parse("S\to\tu\n").is_err());
    }

    #[test]
    fn bundled_sample_parses() {
        let c = CostMatrices::phonetic_sample();
        assert!(!c.is_uniform());
        assert!(c.substitution(b'o', b'u') < 1.0);
        assert!(c.insertion(Some(b's'), b's') < 1.0);
        assert!(c.overrides().iter().all(|o| (0.0..=1.0).contains(&o.3)));
    }
}
