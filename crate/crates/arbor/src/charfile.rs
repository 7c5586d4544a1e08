//! Character files.
//!
//! ```text
//! # '#' starts a comment, also after a value
//! side = tree | forest | word
//! N = 3
//! dim = 2
//! scaling = (1,1)
//! mode = exact | float
//! s = 1/3
//! t = 3/4
//! N[(0,1)]{(0,0):N[(1,0)]} := 5/72
//! ```
//!
//! Any other `key = value` header line is kept as metadata. Body lines hold a
//! basis element, `:=`, and a rational written `p/q`, an integer or a decimal.
//! Tree-side entries are classical trees, forest-side entries are `H₂`
//! monomials, word-side entries are words such as `L1 ⊗ L2 ⊗ X0`.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use arbor_core::model::path::parse_rational;
use arbor_core::model::Character;
use arbor_core::multiindex::MultiIndex;
use arbor_core::classical::ClassicalForest;
use arbor_core::parse::parse_forest;
use arbor_core::tree::{Forest, Tree};
use arbor_core::vect::Q;
use arbor_core::word::{Letter, Word};
use arbor_core::workspace::Workspace;
use num_traits::ToPrimitive;

use crate::words::parse_word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Tree,
    Forest,
    Word,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Tree => "tree",
            Side::Forest => "forest",
            Side::Word => "word",
        }
    }
}

/// A parsed file: header fields plus raw entries.
#[derive(Clone, Debug, PartialEq)]
pub struct CharFile {
    pub side: Side,
    pub grade: usize,
    pub dim: usize,
    pub scaling: MultiIndex,
    pub float: bool,
    pub meta: Vec<(String, String)>,
    pub entries: Vec<(String, Q)>,
    /// Comment lines written after the header.
    pub comments: Vec<String>,
}

impl CharFile {
    pub fn new(side: Side, grade: usize, dim: usize) -> Self {
        CharFile {
            side,
            grade,
            dim,
            scaling: MultiIndex::from_slice(&vec![1; dim]),
            float: false,
            meta: Vec::new(),
            entries: Vec::new(),
            comments: Vec::new(),
        }
    }

    pub fn parse(text: &str) -> Result<CharFile> {
        let (mut side, mut grade, mut dim, mut scaling, mut float) = (None, None, None, None, false);
        let mut meta = Vec::new();
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = || format!("line {}", n + 1);
            if let Some((expr, v)) = line.split_once(":=") {
                let q = parse_rational(v.trim()).map_err(|e| anyhow!("{e}")).with_context(at)?;
                entries.push((expr.trim().to_string(), q));
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("{}: expected `key = value` or `expr := value`", at()))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "side" => {
                    side = Some(match v {
                        "tree" => Side::Tree,
                        "forest" => Side::Forest,
                        "word" => Side::Word,
                        _ => bail!("{}: side must be tree, forest or word", at()),
                    })
                }
                "N" => grade = Some(v.parse::<usize>().with_context(at)?),
                "dim" => dim = Some(v.parse::<usize>().with_context(at)?),
                "scaling" => scaling = Some(v.to_string()),
                "mode" => {
                    float = match v {
                        "exact" => false,
                        "float" => true,
                        _ => bail!("{}: mode must be exact or float", at()),
                    }
                }
                _ => meta.push((k.to_string(), v.to_string())),
            }
        }
        let side = side.ok_or_else(|| anyhow!("missing header field `side`"))?;
        let grade = grade.ok_or_else(|| anyhow!("missing header field `N`"))?;
        let dim = dim.ok_or_else(|| anyhow!("missing header field `dim`"))?;
        let scaling = match scaling {
            Some(s) => arbor_core::parse::parse_multiindex(&s, dim).map_err(|e| anyhow!("scaling: {e}"))?,
            None => MultiIndex::from_slice(&vec![1; dim]),
        };
        Ok(CharFile { side, grade, dim, scaling, float, meta, entries, comments: Vec::new() })
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn format(&self) -> String {
        let mut out = String::from("# arbor character\n");
        let _ = writeln!(out, "side = {}", self.side.name());
        let _ = writeln!(out, "N = {}", self.grade);
        let _ = writeln!(out, "dim = {}", self.dim);
        let _ = writeln!(out, "scaling = {}", self.scaling);
        let _ = writeln!(out, "mode = {}", if self.float { "float" } else { "exact" });
        for (k, v) in &self.meta {
            let _ = writeln!(out, "{k} = {v}");
        }
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        for (e, q) in &self.entries {
            let _ = writeln!(out, "{e} := {}", format_coeff(q, self.float));
        }
        out
    }

    fn workspace(&self, ws: &Workspace) -> Result<Workspace> {
        if ws.dim != self.dim {
            bail!("file has dim = {} but the workspace has dim = {}", self.dim, ws.dim);
        }
        Ok(ws.clone())
    }

    fn expect(&self, side: Side) -> Result<()> {
        if self.side != side {
            bail!("expected a {}-side character, found side = {}", side.name(), self.side.name());
        }
        Ok(())
    }

    /// Tree-side values; the grade of an entry is its vertex count.
    pub fn tree_character(&self) -> Result<Character<Tree>> {
        self.expect(Side::Tree)?;
        let ws = Workspace::new(self.dim);
        let mut x = Character::empty(self.grade);
        for (e, q) in &self.entries {
            let f = ClassicalForest::parse(e, &ws).map_err(|err| anyhow!("{e}: {err}"))?;
            let [t] = f.trees() else {
                bail!("{e}: expected a single classical tree");
            };
            x.insert(t.clone(), t.nodes(), q.clone());
        }
        Ok(x)
    }

    /// Forest-side values on `H₂` monomials, graded by edges plus polynomial degree.
    pub fn forest_character(&self, ws: &Workspace) -> Result<Character<Forest>> {
        self.expect(Side::Forest)?;
        let ws = self.workspace(ws)?;
        let mut x = Character::empty(self.grade);
        for (e, q) in &self.entries {
            let f = parse_forest(e, &ws).map_err(|err| anyhow!("{e}: {err}"))?;
            let g = f.edges() + f.x().total() as usize;
            x.insert(f, g, q.clone());
        }
        Ok(x)
    }

    /// Word-side values; `grade` gives the grade of each word.
    pub fn word_character(&self, grade: impl Fn(&Word<Letter>) -> usize) -> Result<Character<Word<Letter>>> {
        self.expect(Side::Word)?;
        let mut x = Character::empty(self.grade);
        for (e, q) in &self.entries {
            let w = parse_word(e)?;
            x.insert(w.clone(), grade(&w), q.clone());
        }
        Ok(x)
    }

    pub fn from_character<B: Ord + Clone + std::fmt::Display>(side: Side, dim: usize, x: &Character<B>) -> CharFile {
        let mut f = CharFile::new(side, x.grade(), dim);
        let mut rows: Vec<(usize, String, Q)> = x.iter().map(|(b, g, v)| (g, b.to_string(), v.clone())).collect();
        rows.sort();
        f.entries = rows.into_iter().map(|(_, b, v)| (b, v)).collect();
        f
    }
}

/// Exact `p/q`, or a decimal in float mode.
pub fn format_coeff(q: &Q, float: bool) -> String {
    if float {
        let v = q.to_f64().unwrap_or(f64::NAN);
        format!("{v:.12e}")
    } else {
        q.to_string()
    }
}
