//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verified identity fails, 2 on usage or
//! input errors. Errors also produce one line `error kind=<kind> msg="<text>"`
//! on standard error.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use arbor_core::classical::{unembed_planted, ClassicalForest};
use arbor_core::hopf::{delta_bck, delta_bck_hat, delta_dbck, deshuffle_forest, GuinOudom, H2};
use arbor_core::iso::psi::Leftmost;
use arbor_core::iso::{hairer_kelly, CfBasis, NormalForm, Sign, Theta, WordVect};
use arbor_core::model::{canonical_lift, holder_report, push_forward_h2, ClassicalIso, PathSpec};
use arbor_core::model::holder::tree_exponent;
use arbor_core::model::path::parse_rational;
use arbor_core::ops::{Grafting, PreLieProduct};
use arbor_core::parse::{parse_forest, parse_planted};
use arbor_core::vect::{Q, Vect};
use arbor_core::word::{shuffle, Letter};
use arbor_core::workspace::{CoefficientMode, Workspace};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::charfile::{format_coeff, CharFile, Side};
use crate::settings::Settings;
use crate::suites::{format_report, resolve, run_suite, SuiteConfig};
use crate::words::parse_word;

#[derive(Parser, Debug)]
#[command(name = "arbor", version, about = "Decorated-tree Hopf algebras and their word isomorphisms")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default)]
pub struct Global {
    /// Number of directions d+1.
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Scaling as a multi-index, e.g. "(2,1)".
    #[arg(long, global = true)]
    pub scaling: Option<String>,
    #[arg(long, global = true)]
    pub max_edges: Option<usize>,
    #[arg(long, global = true)]
    pub max_node_dec: Option<u16>,
    #[arg(long, global = true)]
    pub max_edge_shift: Option<u16>,
    #[arg(long, global = true)]
    pub max_node_total: Option<u32>,
    #[arg(long, global = true)]
    pub max_shift_total: Option<u32>,
    /// Bound on `|ℓ|` in the deformed coproduct.
    #[arg(long, global = true)]
    pub lmax: Option<u32>,
    /// Number of edge kinds.
    #[arg(long, global = true)]
    pub kinds: Option<u8>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    /// Flat `key = value` file; flags given on the command line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coproduct of a forest.
    Coproduct {
        #[arg(long, value_enum)]
        kind: CoproductKind,
        expr: String,
    },
    /// Product of two forests, or the shuffle of two words.
    Product {
        #[arg(long, value_enum)]
        kind: ProductKind,
        left: String,
        right: String,
    },
    /// The letters of the primitive basis up to a grade.
    Basis {
        #[arg(long)]
        max_grade: usize,
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Apply one of the isomorphisms.
    Iso {
        #[arg(long, value_enum)]
        map: IsoMap,
        expr: String,
    },
    /// Normal form of a word in the quotient algebra.
    Normalform {
        word: String,
        /// Grade up to which letters are numbered, matching `basis --max-grade`.
        #[arg(long, default_value_t = 3)]
        max_grade: usize,
    },
    /// Canonical lift of a piecewise-polynomial path.
    Lift {
        /// Components separated by `;`, e.g. "t ; 1/2 t^2".
        #[arg(long)]
        path: String,
        #[arg(long = "N")]
        n: usize,
        /// One `s t` pair per line.
        #[arg(long)]
        pairs: PathBuf,
        /// Print the Hölder table for this exponent.
        #[arg(long)]
        holder: Option<f64>,
        /// Label counted separately in the Hölder exponent.
        #[arg(long)]
        time: Option<usize>,
    },
    /// Push a character file forward to the word side.
    Translate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        map: TranslateMap,
        #[arg(long)]
        output: PathBuf,
    },
    /// Run identity suites; `--max-edges` sets the grade bound (default 3).
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoproductKind {
    Bck,
    Bckhat,
    Dbck,
    Deshuffle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProductKind {
    Gl,
    Dgl,
    Star2,
    Shuffle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IsoMap {
    Theta,
    Phi,
    Psicf,
    Psiphi,
    Psi,
    Hk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TranslateMap {
    Psi,
    Psicf,
}

/// Result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Violated,
    Error(&'static str, anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Error(kind_of(&e), e)
    }
}

fn kind_of(e: &anyhow::Error) -> &'static str {
    use arbor_core::Error as E;
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<E>() {
            return match err {
                E::Syntax { .. } => "syntax",
                E::Bounds(_) => "bounds",
                E::Overflow(_) => "overflow",
                E::MixedGrade => "mixed-grade",
                E::Invalid(_) => "invalid",
                E::RankDeficiency { .. } => "rank-deficiency",
                E::MissingGrade(_) => "missing-grade",
                E::UnregisteredLetter(_) => "unregistered-letter",
                E::SideMismatch(_) => "side-mismatch",
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return "io";
        }
    }
    "input"
}

fn error_line(kind: &str, msg: &str) -> String {
    let msg = msg.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', " ");
    format!("error kind={kind} msg=\"{msg}\"\n")
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => {
                    let first = text.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
                    Outcome { code: 2, stdout: String::new(), stderr: format!("{text}{}", error_line("usage", &first)) }
                }
            };
        }
    };
    let mut out = String::new();
    match execute(&cli, &mut out) {
        Ok(()) => Outcome { code: 0, stdout: out, stderr: String::new() },
        Err(Failure::Violated) => Outcome { code: 1, stdout: out, stderr: error_line("violation", "an identity failed") },
        Err(Failure::Error(kind, e)) => {
            Outcome { code: 2, stdout: out, stderr: error_line(kind, &format!("{e:#}")) }
        }
    }
}

fn settings(g: &Global) -> Result<Settings> {
    let flags = Settings {
        dim: g.dim,
        scaling: g.scaling.clone(),
        max_edges: g.max_edges,
        max_node_dec: g.max_node_dec,
        max_edge_shift: g.max_edge_shift,
        max_node_total: g.max_node_total,
        max_shift_total: g.max_shift_total,
        lmax: g.lmax,
        kinds: g.kinds,
        float: g.mode.map(|m| m == Mode::Float),
    };
    let file = match &g.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Settings::parse_config(&text)?
        }
        None => Settings::default(),
    };
    Ok(flags.over(file))
}

struct Fmt {
    float: bool,
}

impl Fmt {
    fn vect<B: Ord + Clone>(&self, v: &Vect<B>, show: impl Fn(&B) -> String) -> String {
        if !self.float {
            return v.format_with(show);
        }
        if v.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = v.iter().map(|(b, c)| format!("{} {}", format_coeff(c, true), show(b))).collect();
        terms.join(" + ")
    }

    fn words(&self, v: &WordVect) -> String {
        self.vect(v, |w| w.to_string())
    }
}

fn forest(text: &str, ws: &Workspace) -> Result<arbor_core::Forest> {
    parse_forest(text, ws).with_context(|| format!("parsing {text:?}"))
}

fn execute(cli: &Cli, out: &mut String) -> std::result::Result<(), Failure> {
    let s = settings(&cli.global)?;
    let ws = s.workspace()?;
    let fmt = Fmt { float: ws.mode == CoefficientMode::Float };
    match &cli.command {
        Command::Coproduct { kind, expr } => {
            let pair = |(a, b): &(arbor_core::Forest, arbor_core::Forest)| format!("{a} ⊗ {b}");
            let text = match kind {
                CoproductKind::Bck => fmt.vect(&delta_bck(&forest(expr, &ws)?).map_err(anyhow::Error::from)?, pair),
                CoproductKind::Dbck => {
                    fmt.vect(&delta_dbck(&ws, &forest(expr, &ws)?).map_err(anyhow::Error::from)?.value, pair)
                }
                CoproductKind::Deshuffle => fmt.vect(&deshuffle_forest(&forest(expr, &ws)?), pair),
                CoproductKind::Bckhat => {
                    let f = ClassicalForest::parse(expr, &ws).with_context(|| format!("parsing {expr:?}"))?;
                    fmt.vect(&delta_bck_hat(&f).map_err(anyhow::Error::from)?, |(a, b)| format!("{a} ⊗ {b}"))
                }
            };
            writeln!(out, "{text}").ok();
        }
        Command::Product { kind, left, right } => {
            let text = match kind {
                ProductKind::Shuffle => fmt.words(&shuffle(&parse_word(left)?, &parse_word(right)?)),
                _ => {
                    let (a, b) = (forest(left, &ws)?, forest(right, &ws)?);
                    let v = match kind {
                        ProductKind::Gl => GuinOudom::new(PreLieProduct::plain(&ws)).star(&a, &b),
                        ProductKind::Dgl => GuinOudom::new(PreLieProduct::deformed(&ws)).star(&a, &b),
                        _ => H2::new(&ws).star2(&a, &b),
                    }
                    .map_err(anyhow::Error::from)?;
                    fmt.vect(&v, |f| f.to_string())
                }
            };
            writeln!(out, "{text}").ok();
        }
        Command::Basis { max_grade, export } => {
            let cf = CfBasis::new(&ws);
            let by_grade = cf.build(*max_grade).map_err(anyhow::Error::from)?;
            let mut text = String::new();
            for (g, ids) in by_grade.iter().enumerate().skip(1) {
                writeln!(text, "# grade {g}: {} letters", ids.len()).ok();
                for id in ids {
                    writeln!(text, "{}", letter_line(&cf, &fmt, *id, Grafting::Plain)).ok();
                }
            }
            match export {
                Some(p) => {
                    std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
                    let counts: Vec<String> = by_grade.iter().skip(1).map(|v| v.len().to_string()).collect();
                    writeln!(out, "letters per grade: {}", counts.join(" ")).ok();
                }
                None => out.push_str(&text),
            }
        }
        Command::Iso { map, expr } => iso(*map, expr, &ws, &fmt, out)?,
        Command::Normalform { word, max_grade } => {
            let cf = CfBasis::new(&ws);
            cf.build(*max_grade).map_err(anyhow::Error::from)?;
            let nf = NormalForm::new(&cf, Sign::Minus);
            let w = parse_word(word)?;
            let v = nf.normal_form(&Vect::basis(w), &mut Leftmost).map_err(anyhow::Error::from)?;
            writeln!(out, "{}", fmt.words(&v)).ok();
            definitions(&cf, &fmt, &v, Grafting::Deformed, out);
        }
        Command::Lift { path, n, pairs, holder, time } => lift(path, *n, pairs, *holder, *time, &fmt, out)?,
        Command::Translate { input, map, output } => translate(input, *map, output, &ws, out)?,
        Command::Verify { suite, seed } => {
            let names = resolve(suite)?;
            let cfg = SuiteConfig { dim: s.dim.unwrap_or(2), max_edges: s.max_edges.unwrap_or(3), seed: *seed };
            let mut failed = 0;
            for name in &names {
                let t = Instant::now();
                let r = run_suite(name, &cfg)?;
                out.push_str(&format_report(&r, t.elapsed().as_secs_f64()));
                if !r.holds() {
                    failed += 1;
                }
            }
            writeln!(out, "{} of {} suites hold", names.len() - failed, names.len()).ok();
            if failed > 0 {
                return Err(Failure::Violated);
            }
        }
    }
    Ok(())
}

fn letter_line(cf: &CfBasis, fmt: &Fmt, id: u32, g: Grafting) -> String {
    format!("L{id} = {}", fmt.vect(&cf.letter_value(id, g), |p| p.to_string()))
}

fn letters_of(v: &WordVect) -> BTreeSet<u32> {
    v.keys()
        .flat_map(|w| w.letters().iter())
        .filter_map(|l| match l {
            Letter::L(id) => Some(*id),
            Letter::X(_) => None,
        })
        .collect()
}

/// Appends `# L<id> = …` for every letter used in `v`.
fn definitions(cf: &CfBasis, fmt: &Fmt, v: &WordVect, g: Grafting, out: &mut String) {
    for id in letters_of(v) {
        writeln!(out, "# {}", letter_line(cf, fmt, id, g)).ok();
    }
}

fn iso(map: IsoMap, expr: &str, ws: &Workspace, fmt: &Fmt, out: &mut String) -> Result<()> {
    match map {
        IsoMap::Theta => {
            let p = parse_planted(expr, ws).with_context(|| format!("parsing {expr:?}"))?;
            let v = Theta::new(ws).theta(&p)?;
            writeln!(out, "{}", fmt.vect(&v, |p| p.to_string())).ok();
        }
        IsoMap::Phi => {
            let v = Theta::new(ws).phi(&Vect::basis(forest(expr, ws)?))?;
            writeln!(out, "{}", fmt.vect(&v, |f| f.to_string())).ok();
        }
        IsoMap::Psicf | IsoMap::Psiphi | IsoMap::Psi => {
            let f = forest(expr, ws)?;
            let cf = CfBasis::new(ws);
            cf.build(f.edges())?;
            let (v, g) = match map {
                IsoMap::Psicf => (cf.psi_cf(&Vect::basis(f))?, Grafting::Plain),
                IsoMap::Psiphi => (cf.psi_phi(&Vect::basis(f))?, Grafting::Deformed),
                _ => (NormalForm::new(&cf, Sign::Minus).psi(&f)?, Grafting::Deformed),
            };
            writeln!(out, "{}", fmt.words(&v)).ok();
            definitions(&cf, fmt, &v, g, out);
        }
        IsoMap::Hk => {
            let f = ClassicalForest::parse(expr, ws).with_context(|| format!("parsing {expr:?}"))?;
            let [t] = f.trees() else {
                bail!("expected a single classical tree");
            };
            let v = hairer_kelly(t)?;
            writeln!(out, "{}", fmt.vect(&v, |w| w.to_string())).ok();
        }
    }
    Ok(())
}

fn read_pairs(path: &PathBuf) -> Result<Vec<(Q, Q)>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|p| !p.is_empty()).collect();
        let [s, t] = parts.as_slice() else {
            bail!("{} line {}: expected `s t`", path.display(), n + 1);
        };
        pairs.push((parse_rational(s)?, parse_rational(t)?));
    }
    Ok(pairs)
}

fn lift(spec: &str, n: usize, pairs: &PathBuf, holder: Option<f64>, time: Option<usize>, fmt: &Fmt, out: &mut String) -> Result<()> {
    let path = PathSpec::parse(spec)?;
    let mut samples = Vec::new();
    for (s, t) in read_pairs(pairs)? {
        let x = canonical_lift(&path, &s, &t, n)?;
        let mut f = CharFile::from_character(Side::Tree, path.dim(), &x);
        f.float = fmt.float;
        f.meta.push(("s".into(), s.to_string()));
        f.meta.push(("t".into(), t.to_string()));
        out.push_str(&f.format());
        out.push('\n');
        samples.push((s, t, x));
    }
    if let Some(gamma) = holder {
        if let Some(i) = time {
            if i >= path.dim() {
                bail!("--time {i} names no component of the path");
            }
        }
        writeln!(out, "# holder gamma = {gamma}").ok();
        for row in holder_report(&samples, tree_exponent(gamma, time)) {
            writeln!(out, "# {} exponent {:.6} sup {:.6e}", row.basis, row.exponent, row.sup_ratio).ok();
        }
    }
    Ok(())
}

fn translate(input: &PathBuf, map: TranslateMap, output: &PathBuf, ws: &Workspace, out: &mut String) -> Result<()> {
    let text = std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let file = CharFile::parse(&text).with_context(|| format!("in {}", input.display()))?;
    let mut result = match map {
        TranslateMap::Psicf => {
            let x = file.tree_character()?;
            let iso = ClassicalIso::new(file.dim, file.grade)?;
            let xh = iso.push_forward(&x)?;
            let mut r = CharFile::from_character(Side::Word, file.dim, &xh);
            let used: BTreeSet<u32> = xh.iter().flat_map(|(w, _, _)| w.letters().iter()).filter_map(|l| match l {
                Letter::L(id) => Some(*id),
                Letter::X(_) => None,
            }).collect();
            for id in used {
                let v = iso.basis().letter_value(id, Grafting::Plain);
                let trees: Option<Vec<(String, Q)>> =
                    v.iter().map(|(p, c)| unembed_planted(p).map(|t| (t.to_string(), c.clone()))).collect();
                let trees = trees.ok_or_else(|| anyhow!("letter L{id} is not classical"))?;
                let v: Vect<String> = trees.into_iter().collect();
                r.comments.push(format!("L{id} = {}", v.format_with(|t| t.clone())));
            }
            r
        }
        TranslateMap::Psi => {
            let ws = ws.clone().with_scaling(file.scaling.clone());
            let x = file.forest_character(&ws)?;
            let cf = CfBasis::new(&ws);
            cf.build(file.grade)?;
            let nf = NormalForm::new(&cf, Sign::Minus);
            let xh = push_forward_h2(&nf, &x)?;
            let mut r = CharFile::from_character(Side::Word, file.dim, &xh);
            let all: WordVect = xh.iter().map(|(w, _, _)| (w.clone(), Q::from_integer(1.into()))).collect();
            for id in letters_of(&all) {
                r.comments.push(format!("L{id} = {}", cf.letter_value(id, Grafting::Deformed).format_with(|p| p.to_string())));
            }
            r
        }
    };
    result.scaling = file.scaling.clone();
    result.float = file.float;
    result.meta = file.meta.clone();
    std::fs::write(output, result.format()).with_context(|| format!("writing {}", output.display()))?;
    writeln!(out, "wrote {} entries to {}", result.entries.len(), output.display()).ok();
    Ok(())
}
