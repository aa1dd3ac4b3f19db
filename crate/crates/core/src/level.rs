//! Level corpora: tile classification, level parsing and directory loading.
//!
//! Levels are plain text, one character per tile and one row per line. Rows
//! are stored top to bottom, so `y = 0` is the top row and `y` grows
//! downward. Every height-sensitive metric in this crate uses that frame.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::kv::{self, KvError};

/// Semantic class of a single tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TileClass {
    Solid,
    Empty,
    Enemy,
    Reward,
    Pipe,
}

impl TileClass {
    pub const ALL: [TileClass; 5] = [
        TileClass::Solid,
        TileClass::Empty,
        TileClass::Enemy,
        TileClass::Reward,
        TileClass::Pipe,
    ];

    /// Blocks movement and can be stood on. Pipes count as solid here even
    /// though they are a separate class for counting.
    pub fn is_support(self) -> bool {
        matches!(self, TileClass::Solid | TileClass::Pipe)
    }

    /// The agent can occupy this tile (enemies die when entered from above).
    pub fn is_passable(self) -> bool {
        matches!(
            self,
            TileClass::Empty | TileClass::Enemy | TileClass::Reward
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            TileClass::Solid => "Solid",
            TileClass::Empty => "Empty",
            TileClass::Enemy => "Enemy",
            TileClass::Reward => "Reward",
            TileClass::Pipe => "Pipe",
        }
    }
}

impl fmt::Display for TileClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TileClass {
    type Err = LevelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TileClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| LevelError::UnknownClass(s.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum LevelError {
    #[error("duplicate classification key {0:?}")]
    DuplicateKey(char),
    #[error("unknown tile class {0:?}")]
    UnknownClass(String),
    #[error("classification key {0:?} is not a single character")]
    InvalidKey(String),
    #[error("classification maps no characters")]
    EmptyMap,
    #[error("classification syntax: {0}")]
    Syntax(#[from] KvError),
    #[error("level is empty")]
    EmptyInput,
    #[error("row {row} has {got} tiles, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("unmapped character {ch:?} at x={x}, y={y}")]
    UnmappedChar { ch: char, x: usize, y: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Character to [`TileClass`] lookup table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileClassification {
    char_map: BTreeMap<char, TileClass>,
    default_class: Option<TileClass>,
}

/// The built-in table for the Mario AI Framework level alphabet.
const MARIO_TILES: &[(TileClass, &str)] = &[
    // Markers for the start and exit, and decorative background.
    (TileClass::Empty, "-MF|"),
    (TileClass::Solid, "X#S%DU*Bb"),
    (TileClass::Enemy, "EgGkKrRyY"),
    (TileClass::Reward, "Q!?@CoL12"),
    (TileClass::Pipe, "tT<>[]"),
];

impl Default for TileClassification {
    fn default() -> Self {
        let char_map = MARIO_TILES
            .iter()
            .flat_map(|&(class, chars)| chars.chars().map(move |c| (c, class)))
            .collect();
        Self {
            char_map,
            default_class: None,
        }
    }
}

impl TileClassification {
    pub fn new(
        char_map: BTreeMap<char, TileClass>,
        default_class: Option<TileClass>,
    ) -> Result<Self, LevelError> {
        if char_map.is_empty() {
            return Err(LevelError::EmptyMap);
        }
        Ok(Self {
            char_map,
            default_class,
        })
    }

    /// Parses a flat `char = Class` document. The key `default` (more than
    /// one character, so never a tile) sets the fallback class.
    pub fn parse(text: &str) -> Result<Self, LevelError> {
        let mut char_map = BTreeMap::new();
        let mut default_class = None;
        for entry in kv::parse(text)? {
            let class: TileClass = entry.value.parse()?;
            if entry.key.eq_ignore_ascii_case("default") {
                default_class = Some(class);
                continue;
            }
            let mut chars = entry.key.chars();
            let ch = match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => return Err(LevelError::InvalidKey(entry.key)),
            };
            if char_map.insert(ch, class).is_some() {
                return Err(LevelError::DuplicateKey(ch));
            }
        }
        Self::new(char_map, default_class)
    }

    pub fn load(path: &Path) -> Result<Self, LevelError> {
        let text = fs::read_to_string(path).map_err(|source| LevelError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn classify(&self, ch: char) -> Option<TileClass> {
        self.char_map.get(&ch).copied().or(self.default_class)
    }

    pub fn len(&self) -> usize {
        self.char_map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.char_map.is_empty()
    }

    pub fn default_class(&self) -> Option<TileClass> {
        self.default_class
    }

    pub fn entries(&self) -> impl Iterator<Item = (char, TileClass)> + '_ {
        self.char_map.iter().map(|(&c, &t)| (c, t))
    }
}

/// A rectangular level. Cells are row-major with `y = 0` at the top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileGrid {
    width: usize,
    height: usize,
    cells: Vec<TileClass>,
    raw: Vec<char>,
    pub level_id: String,
    pub generator_label: String,
}

impl TileGrid {
    /// Parses level text. One trailing newline (and `\r\n` line endings) are
    /// tolerated.
    pub fn parse(
        text: &str,
        classification: &TileClassification,
        level_id: impl Into<String>,
        generator_label: impl Into<String>,
    ) -> Result<Self, LevelError> {
        let rows: Vec<&str> = text.lines().collect();
        if rows.is_empty() || rows.iter().all(|r| r.is_empty()) {
            return Err(LevelError::EmptyInput);
        }
        let width = rows[0].chars().count();
        let mut raw = Vec::with_capacity(width * rows.len());
        for (y, row) in rows.iter().enumerate() {
            let before = raw.len();
            raw.extend(row.chars());
            let got = raw.len() - before;
            if got != width || width == 0 {
                return Err(LevelError::RaggedRows {
                    row: y,
                    expected: width,
                    got,
                });
            }
        }
        let cells = raw
            .iter()
            .enumerate()
            .map(|(i, &ch)| {
                classification.classify(ch).ok_or(LevelError::UnmappedChar {
                    ch,
                    x: i % width,
                    y: i / width,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            width,
            height: rows.len(),
            cells,
            raw,
            level_id: level_id.into(),
            generator_label: generator_label.into(),
        })
    }

    /// Builds a grid directly from classes; the raw text uses the first
    /// character of the built-in table for each class.
    pub fn from_classes(
        width: usize,
        cells: Vec<TileClass>,
        level_id: impl Into<String>,
        generator_label: impl Into<String>,
    ) -> Self {
        assert!(width > 0 && !cells.is_empty() && cells.len().is_multiple_of(width));
        let raw = cells.iter().map(|&c| canonical_char(c)).collect();
        Self {
            width,
            height: cells.len() / width,
            cells,
            raw,
            level_id: level_id.into(),
            generator_label: generator_label.into(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[TileClass] {
        &self.cells
    }

    pub fn get(&self, x: usize, y: usize) -> TileClass {
        self.cells[y * self.width + x]
    }

    /// Like [`get`](Self::get) but with signed coordinates; out of bounds is `None`.
    pub fn try_get(&self, x: i64, y: i64) -> Option<TileClass> {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            None
        } else {
            Some(self.get(x as usize, y as usize))
        }
    }

    pub fn raw_char(&self, x: usize, y: usize) -> char {
        self.raw[y * self.width + x]
    }

    /// Original text, one line per row, each terminated by `\n`.
    pub fn raw_text(&self) -> String {
        let mut out = String::with_capacity((self.width + 1) * self.height);
        for row in self.raw.chunks(self.width) {
            out.extend(row);
            out.push('\n');
        }
        out
    }

    pub fn count(&self, class: TileClass) -> usize {
        self.cells.iter().filter(|&&c| c == class).count()
    }
}

pub fn canonical_char(class: TileClass) -> char {
    match class {
        TileClass::Solid => 'X',
        TileClass::Empty => '-',
        TileClass::Enemy => 'E',
        TileClass::Reward => 'Q',
        TileClass::Pipe => 't',
    }
}

/// One file that could not be loaded.
#[derive(Debug)]
pub struct LoadFailure {
    pub path: PathBuf,
    pub error: LevelError,
}

/// Result of loading a corpus directory: the levels that parsed plus every
/// failure and warning encountered along the way.
#[derive(Debug, Default)]
pub struct Corpus {
    pub levels: Vec<TileGrid>,
    pub failures: Vec<LoadFailure>,
    pub warnings: Vec<String>,
}

/// Loads `root/<generator_label>/<level_id>.txt`.
///
/// Levels are ordered by generator label, then level id. A file that fails
/// to parse is recorded in [`Corpus::failures`] and skipped. Only an
/// unreadable `root` is fatal.
pub fn load_corpus(root: &Path, classification: &TileClassification) -> Result<Corpus, LevelError> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| LevelError::Io { path, source }
    };
    let mut files: Vec<(String, String, PathBuf)> = Vec::new();
    let mut warnings = Vec::new();
    for entry in fs::read_dir(root).map_err(io_err(root))? {
        let entry = entry.map_err(io_err(root))?;
        let dir = entry.path();
        if !dir.is_dir() {
            continue;
        }
        let label = entry.file_name().to_string_lossy().into_owned();
        for file in fs::read_dir(&dir).map_err(io_err(&dir))? {
            let path = file.map_err(io_err(&dir))?.path();
            if path.extension().is_some_and(|e| e == "txt") && path.is_file() {
                let id = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                files.push((label.clone(), id, path));
            }
        }
    }
    files.sort();
    if files.is_empty() {
        warnings.push(format!("no level files found under {}", root.display()));
    }

    let parsed: Vec<Result<TileGrid, LoadFailure>> = files
        .into_par_iter()
        .map(|(label, id, path)| {
            fs::read_to_string(&path)
                .map_err(|source| LevelError::Io {
                    path: path.clone(),
                    source,
                })
                .and_then(|text| TileGrid::parse(&text, classification, id, label))
                .map_err(|error| LoadFailure { path, error })
        })
        .collect();

    let mut corpus = Corpus {
        warnings,
        ..Corpus::default()
    };
    for result in parsed {
        match result {
            Ok(grid) => corpus.levels.push(grid),
            Err(failure) => corpus.failures.push(failure),
        }
    }
    Ok(corpus)
}

/// Writes levels in the layout [`load_corpus`] reads.
pub fn write_corpus(root: &Path, levels: &[TileGrid]) -> std::io::Result<()> {
    for level in levels {
        let dir = root.join(&level.generator_label);
        fs::create_dir_all(&dir)?;
        fs::write(
            dir.join(format!("{}.txt", level.level_id)),
            level.raw_text(),
        )?;
    }
    Ok(())
}
