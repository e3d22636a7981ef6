//! Text canonicalization and query expansion.
//!
//! Record names and queries go through the same pipeline: Latin diacritics
//! are folded to ASCII with a fixed table, everything is lowercased, and any
//! character outside `[a-z0-9]` separates tokens. Queries are additionally
//! expanded with concatenations of neighbouring tokens so that a name split
//! by a stray space or line break ("nether lands") still reaches the record
//! token ("netherlands").

use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::ops::Deref;

/// Bumped whenever [`fold_char`] changes its output for any input.
pub const FOLD_TABLE_VERSION: u32 = 1;

/// Default maximum number of consecutive tokens joined into one window.
pub const DEFAULT_WINDOW_LIMIT: usize = 4;

/// Ordered, non-empty lowercase ASCII tokens. Repeats are kept, since term
/// frequency is counted from them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TokenList(Vec<String>);

impl TokenList {
    pub fn into_vec(self) -> Vec<String> {
        self.0
    }

    pub fn join(&self, sep: &str) -> String {
        self.0.join(sep)
    }
}

impl Deref for TokenList {
    type Target = [String];

    fn deref(&self) -> &[String] {
        &self.0
    }
}

impl<'a> IntoIterator for &'a TokenList {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A concatenation of `width` base tokens starting at `start`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub token: String,
    pub start: usize,
    pub width: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandedQuery {
    pub base: TokenList,
    pub windows: Vec<Window>,
}

impl ExpandedQuery {
    /// Distinct query tokens in search order: base tokens first, then
    /// windows by increasing width.
    pub fn search_tokens(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        self.base
            .iter()
            .map(String::as_str)
            .chain(self.windows.iter().map(|w| w.token.as_str()))
            .filter(|t| seen.insert(*t))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }
}

/// Folds a single character to its ASCII spelling. Returns `None` for
/// characters that act as token separators.
pub fn fold_char(c: char) -> Option<&'static str> {
    if c.is_ascii() {
        return ASCII_ALNUM_LOWER
            .get(c as usize)
            .copied()
            .filter(|s| !s.is_empty());
    }
    let folded = match c {
        'À' | 'Á' | 'Â' | 'Ã' | 'Ä' | 'Å' | 'à' | 'á' | 'â' | 'ã' | 'ä' | 'å' | 'Ā' | 'ā'
        | 'Ă' | 'ă' | 'Ą' | 'ą' => "a",
        'Æ' | 'æ' => "ae",
        'Ç' | 'ç' | 'Ć' | 'ć' | 'Ĉ' | 'ĉ' | 'Ċ' | 'ċ' | 'Č' | 'č' => "c",
        'Ð' | 'ð' | 'Ď' | 'ď' | 'Đ' | 'đ' => "d",
        'È' | 'É' | 'Ê' | 'Ë' | 'è' | 'é' | 'ê' | 'ë' | 'Ē' | 'ē' | 'Ĕ' | 'ĕ' | 'Ė' | 'ė'
        | 'Ę' | 'ę' | 'Ě' | 'ě' => "e",
        'ƒ' => "f",
        'Ĝ' | 'ĝ' | 'Ğ' | 'ğ' | 'Ġ' | 'ġ' | 'Ģ' | 'ģ' => "g",
        'Ĥ' | 'ĥ' | 'Ħ' | 'ħ' => "h",
        'Ì' | 'Í' | 'Î' | 'Ï' | 'ì' | 'í' | 'î' | 'ï' | 'Ĩ' | 'ĩ' | 'Ī' | 'ī' | 'Ĭ' | 'ĭ'
        | 'Į' | 'į' | 'İ' | 'ı' => "i",
        'Ĳ' | 'ĳ' => "ij",
        'Ĵ' | 'ĵ' => "j",
        'Ķ' | 'ķ' | 'ĸ' => "k",
        'Ĺ' | 'ĺ' | 'Ļ' | 'ļ' | 'Ľ' | 'ľ' | 'Ŀ' | 'ŀ' | 'Ł' | 'ł' => "l",
        'Ñ' | 'ñ' | 'Ń' | 'ń' | 'Ņ' | 'ņ' | 'Ň' | 'ň' | 'ŉ' | 'Ŋ' | 'ŋ' => "n",
        'Ò' | 'Ó' | 'Ô' | 'Õ' | 'Ö' | 'Ø' | 'ò' | 'ó' | 'ô' | 'õ' | 'ö' | 'ø' | 'Ō' | 'ō'
        | 'Ŏ' | 'ŏ' | 'Ő' | 'ő' => "o",
        'Œ' | 'œ' => "oe",
        'Ŕ' | 'ŕ' | 'Ŗ' | 'ŗ' | 'Ř' | 'ř' => "r",
        'Ś' | 'ś' | 'Ŝ' | 'ŝ' | 'Ş' | 'ş' | 'Š' | 'š' | 'Ș' | 'ș' | 'ſ' => "s",
        'ß' | 'ẞ' => "ss",
        'Ţ' | 'ţ' | 'Ť' | 'ť' | 'Ŧ' | 'ŧ' | 'Ț' | 'ț' => "t",
        'Þ' | 'þ' => "th",
        'Ù' | 'Ú' | 'Û' | 'Ü' | 'ù' | 'ú' | 'û' | 'ü' | 'Ũ' | 'ũ' | 'Ū' | 'ū' | 'Ŭ' | 'ŭ'
        | 'Ů' | 'ů' | 'Ű' | 'ű' | 'Ų' | 'ų' => "u",
        'Ŵ' | 'ŵ' => "w",
        'Ý' | 'ý' | 'ÿ' | 'Ÿ' | 'Ŷ' | 'ŷ' => "y",
        'Ź' | 'ź' | 'Ż' | 'ż' | 'Ž' | 'ž' => "z",
        _ => return None,
    };
    Some(folded)
}

const ASCII_ALNUM_LOWER: [&str; 128] = {
    const L: [&str; 36] = [
        "a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m", "n", "o", "p", "q", "r",
        "s", "t", "u", "v", "w", "x", "y", "z", "0", "1", "2", "3", "4", "5", "6", "7", "8", "9",
    ];
    let mut table = [""; 128];
    let mut i = 0;
    while i < 26 {
        table[b'a' as usize + i] = L[i];
        table[b'A' as usize + i] = L[i];
        i += 1;
    }
    let mut d = 0;
    while d < 10 {
        table[b'0' as usize + d] = L[26 + d];
        d += 1;
    }
    table
};

/// Asciifies, lowercases and tokenizes `raw`.
pub fn normalize_text(raw: &str) -> TokenList {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for c in raw.chars() {
        match fold_char(c) {
            Some(s) => current.push_str(s),
            None if !current.is_empty() => tokens.push(std::mem::take(&mut current)),
            None => {}
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    TokenList(tokens)
}

/// Adds every concatenation of `w` consecutive tokens, `2 <= w <= window_limit`.
/// Windows whose text equals a base token are skipped.
pub fn expand_query(tokens: TokenList, window_limit: usize) -> ExpandedQuery {
    let n = tokens.len();
    let base: HashSet<&str> = tokens.iter().map(String::as_str).collect();
    let mut windows = Vec::new();
    for width in 2..=window_limit.min(n) {
        for start in 0..=n - width {
            let token = tokens[start..start + width].concat();
            if !base.contains(token.as_str()) {
                windows.push(Window {
                    token,
                    start,
                    width,
                });
            }
        }
    }
    ExpandedQuery {
        base: tokens,
        windows,
    }
}
