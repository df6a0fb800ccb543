//! Cells, words and finite windows of (partial) bi-infinite points.
//!
//! A *word* is a hole-free byte string over `b'0'`/`b'1'`; a
//! [`PartialWindow`] additionally carries holes and an absolute offset.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Byte used for a hole in words and text formats.
pub const HOLE: u8 = b'_';

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zero,
    One,
    Hole,
}

impl Symbol {
    pub fn from_byte(b: u8) -> Option<Symbol> {
        match b {
            b'0' => Some(Symbol::Zero),
            b'1' => Some(Symbol::One),
            HOLE => Some(Symbol::Hole),
            _ => None,
        }
    }

    pub fn to_byte(self) -> u8 {
        match self {
            Symbol::Zero => b'0',
            Symbol::One => b'1',
            Symbol::Hole => HOLE,
        }
    }

    pub fn is_hole(self) -> bool {
        self == Symbol::Hole
    }

    /// The letter as a word byte, `None` for a hole.
    pub fn letter(self) -> Option<u8> {
        match self {
            Symbol::Hole => None,
            s => Some(s.to_byte()),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_byte() as char)
    }
}

/// Parse a word over `{0,1}`.
pub fn parse_word(s: &str) -> Result<Vec<u8>> {
    s.bytes()
        .map(|b| match b {
            b'0' | b'1' => Ok(b),
            _ => Err(Error::Parse(format!("{s:?} is not a word over {{0,1}}"))),
        })
        .collect()
}

/// Bitwise complement of a word.
pub fn flip(word: &[u8]) -> Vec<u8> {
    word.iter()
        .map(|&b| if b == b'0' { b'1' } else { b'0' })
        .collect()
}

pub fn word_str(word: &[u8]) -> String {
    String::from_utf8_lossy(word).into_owned()
}

/// Number of (possibly overlapping) occurrences of `u` in `v`.
pub fn occurrences<T: PartialEq>(u: &[T], v: &[T]) -> usize {
    assert!(
        !u.is_empty(),
        "occurrences of the empty word are not counted"
    );
    if u.len() > v.len() {
        return 0;
    }
    v.windows(u.len()).filter(|w| *w == u).count()
}

/// Finite block of a partial point: `cells[i]` is the cell at absolute index
/// `offset + i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialWindow {
    offset: i64,
    cells: Vec<Symbol>,
}

impl PartialWindow {
    pub fn new(offset: i64, cells: Vec<Symbol>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::Parse("a window needs at least one cell".into()));
        }
        Ok(PartialWindow { offset, cells })
    }

    pub fn from_word(offset: i64, word: &[u8]) -> Result<Self> {
        let cells = word
            .iter()
            .map(|&b| {
                Symbol::from_byte(b).ok_or_else(|| Error::Parse(format!("bad cell byte {b:#x}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PartialWindow::new(offset, cells)
    }

    pub fn parse(offset: i64, cells: &str) -> Result<Self> {
        PartialWindow::from_word(offset, cells.as_bytes())
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index one past the last cell.
    pub fn end(&self) -> i64 {
        self.offset + self.cells.len() as i64
    }

    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }

    pub fn contains(&self, index: i64) -> bool {
        index >= self.offset && index < self.end()
    }

    /// Cell at absolute index.
    pub fn get(&self, index: i64) -> Option<Symbol> {
        if self.contains(index) {
            Some(self.cells[(index - self.offset) as usize])
        } else {
            None
        }
    }

    pub(crate) fn set(&mut self, index: i64, s: Symbol) {
        let i = (index - self.offset) as usize;
        self.cells[i] = s;
    }

    pub fn holes(&self) -> impl Iterator<Item = i64> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_hole())
            .map(move |(i, _)| self.offset + i as i64)
    }

    pub fn hole_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_hole()).count()
    }

    pub fn is_hole_free(&self) -> bool {
        self.cells.iter().all(|c| !c.is_hole())
    }

    /// The cells as a byte string, holes included.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.cells.iter().map(|c| c.to_byte()).collect()
    }

    /// The cells as a word; `None` if a hole is present.
    pub fn to_word(&self) -> Option<Vec<u8>> {
        self.cells.iter().map(|c| c.letter()).collect()
    }

    pub fn cells_string(&self) -> String {
        word_str(&self.to_bytes())
    }

    /// Restriction to `[a, b]`.
    pub fn slice(&self, a: i64, b: i64) -> Option<PartialWindow> {
        if a > b || !self.contains(a) || !self.contains(b) {
            return None;
        }
        let lo = (a - self.offset) as usize;
        let hi = (b - self.offset) as usize;
        Some(PartialWindow {
            offset: a,
            cells: self.cells[lo..=hi].to_vec(),
        })
    }

    /// Text format: `offset=<int>` header, then one line of cells.
    pub fn to_text(&self) -> String {
        format!("offset={}\n{}\n", self.offset, self.cells_string())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty window text".into()))?;
        let offset = header
            .strip_prefix("offset=")
            .ok_or_else(|| Error::Parse(format!("expected offset=<int>, got {header:?}")))?
            .parse::<i64>()
            .map_err(|e| Error::Parse(e.to_string()))?;
        let cells = lines
            .next()
            .ok_or_else(|| Error::Parse("missing cell line".into()))?;
        if lines.next().is_some() {
            return Err(Error::Parse("trailing lines after the cell line".into()));
        }
        PartialWindow::parse(offset, cells)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&WindowJson {
            offset: self.offset,
            cells: self.cells_string(),
        })
        .expect("window json")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: WindowJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        PartialWindow::parse(raw.offset, &raw.cells)
    }
}

impl fmt::Display for PartialWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cells_string())
    }
}

impl FromStr for PartialWindow {
    type Err = Error;

    /// Cells only, at offset 0.
    fn from_str(s: &str) -> Result<Self> {
        PartialWindow::parse(0, s)
    }
}

#[derive(Serialize, Deserialize)]
struct WindowJson {
    offset: i64,
    cells: String,
}
