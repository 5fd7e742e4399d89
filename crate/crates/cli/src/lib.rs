//! Command-line front end: parses arguments, runs one subcommand and
//! reports an exit status (0 success, 2 refusal, 3 mismatch in `reproduce`).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use syzygy::betti::{betti_via_koszul_with, free_resolution, minimalize, BettiError, BettiTable, KoszulOptions, ResolutionLimits};
use syzygy::classify::{classify, expected_table, ClassificationReport};
use syzygy::curvegen::{canonical_betti, run_pipeline, CurveError, Recipe};
use syzygy::exactalg::FieldSpec;
use syzygy::exterior::{alpha_matrix, classify_rank, PsiTag, PsiType};
use syzygy::groebner::{buchberger, Ideal};
use syzygy::io::{read_ideal, write_ideal, write_polys, write_sidecar};
use syzygy::picard::{DivisorClass, Surface, SurfaceLattice, Verdict};
use syzygy::polyring::{MonomialOrder, RingSpec};
use syzygy::scroll::{eagon_northcott_betti, scroll_ideal, scroll_matrix, ScrollType};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "syzygy", version, about = "Syzygies of genus-9 canonical curves")]
pub struct Cli {
    /// Print a one-line JSON summary after the report.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SeedArg {
    /// Random seed.
    #[arg(long, env = "SYZYGY_SEED", default_value_t = 1)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduced Groebner basis (grevlex) of an ideal file.
    Gb {
        ideal: PathBuf,
        /// Write the basis here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Graded Betti table through Koszul homology.
    Betti {
        ideal: PathBuf,
        /// Highest row of the table to compute.
        #[arg(long, default_value_t = 4)]
        max_row: u32,
        /// Reduce by two random linear forms first (canonical curves).
        #[arg(long)]
        canonical: bool,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Free resolution by syzygies, then its minimalization.
    Resolve { ideal: PathBuf },
    /// Scroll matrix, ideal of minors and Eagon-Northcott table.
    Scroll {
        #[arg(long = "type")]
        scroll_type: String,
    },
    /// Rank of the alpha map for a normal form of psi.
    Psirank {
        #[arg(long = "type")]
        psi: PsiTag,
        #[arg(long = "char", default_value_t = 10007)]
        characteristic: u64,
    },
    /// Reider-type ampleness verdict for a class on a blown-up surface.
    Ampleness {
        #[arg(long, value_parser = parse_surface)]
        surface: Surface,
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long = "i", default_value_t = 1)]
        level: u32,
        /// Infinitely near pair `i,j` (repeatable).
        #[arg(long, value_parser = parse_pair)]
        near: Vec<(usize, usize)>,
    },
    /// Generate a singular model and write model and canonical ideal files.
    Gen {
        #[arg(long)]
        recipe: Recipe,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long = "char", default_value_t = 10007)]
        characteristic: u32,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Betti table and catalog match of a canonical ideal file.
    Classify {
        ideal: PathBuf,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Run recipes through the pipeline and compare with the catalog.
    Reproduce {
        /// Run every recipe.
        #[arg(long)]
        all: bool,
        /// Run this recipe (repeatable).
        #[arg(long)]
        recipe: Vec<Recipe>,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long = "char", default_value_t = 10007)]
        characteristic: u32,
    },
}

fn parse_surface(s: &str) -> Result<Surface, String> {
    match s.to_ascii_lowercase().as_str() {
        "p2" => Ok(Surface::P2),
        "p1xp1" => Ok(Surface::P1xP1),
        "f2" => Ok(Surface::F2),
        _ => Err(format!("unknown surface `{s}`, expected p2, p1xp1 or f2")),
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected i,j, got `{s}`"))?;
    let a = a.trim().parse().map_err(|_| format!("bad index `{a}`"))?;
    let b = b.trim().parse().map_err(|_| format!("bad index `{b}`"))?;
    Ok((a, b))
}

/// Text report plus the JSON summary of one run.
struct Outcome {
    text: String,
    summary: Value,
    status: i32,
}

impl Outcome {
    fn ok(text: String, summary: Value) -> Self {
        Outcome { text, summary, status: EXIT_OK }
    }
}

fn load_ideal(path: &Path) -> Result<Ideal> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_ideal(&text).with_context(|| format!("parsing {}", path.display()))
}

fn table_text(t: &BettiTable) -> String {
    format!("{t}\ntriples:\n{}", t.to_triples())
}

fn triples_json(t: &BettiTable) -> Value {
    json!(t.entries().map(|(i, j, b)| [i as u64, j as u64, b]).collect::<Vec<_>>())
}

fn gb(ideal: &Path, output: Option<&Path>) -> Result<Outcome> {
    let i = load_ideal(ideal)?;
    let basis = buchberger(&i, MonomialOrder::Grevlex);
    let text = write_polys(i.ring(), basis.elements());
    let summary = json!({"command": "gb", "elements": basis.elements().len()});
    match output {
        Some(p) => {
            fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
            Ok(Outcome::ok(format!("wrote {} elements to {}\n", basis.elements().len(), p.display()), summary))
        }
        None => Ok(Outcome::ok(text, summary)),
    }
}

/// Canonical Betti table, retrying the random reduction on unlucky draws.
fn canonical_table(i: &Ideal, seed: u64) -> Result<BettiTable> {
    let mut last = None;
    for k in 0..8 {
        match canonical_betti(i, seed.wrapping_add(k)) {
            Ok(t) => return Ok(t),
            Err(CurveError::Betti(e @ BettiError::NoRegularSequence { .. })) => last = Some(e),
            Err(e) => return Err(e.into()),
        }
    }
    Err(last.expect("loop ran").into())
}

fn betti(ideal: &Path, max_row: u32, canonical: bool, seed: u64) -> Result<Outcome> {
    let i = load_ideal(ideal)?;
    let t = if canonical { canonical_table(&i, seed)? } else { betti_via_koszul_with(&i, KoszulOptions { max_row, multigraded: true })? };
    Ok(Outcome::ok(table_text(&t), json!({"command": "betti", "triples": triples_json(&t)})))
}

fn resolve(ideal: &Path) -> Result<Outcome> {
    let i = load_ideal(ideal)?;
    let c = free_resolution(&i, ResolutionLimits::default())?;
    let (m, t) = minimalize(&c);
    let ranks = |c: &syzygy::betti::FreeComplex| (0..=c.len()).map(|k| c.rank(k).to_string()).collect::<Vec<_>>().join(" ");
    let text = format!("computed ranks: {}\nminimal ranks: {}\n{}", ranks(&c), ranks(&m), table_text(&t));
    Ok(Outcome::ok(text, json!({"command": "resolve", "length": m.len(), "triples": triples_json(&t)})))
}

fn scroll(spec: &str) -> Result<Outcome> {
    let t = ScrollType::parse(spec)?;
    let ring = RingSpec::standard(10007, "x", t.ambient() + 1)?;
    let [top, bottom] = scroll_matrix(&t, &ring)?;
    let row = |r: &[syzygy::polyring::Polynomial]| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let ideal = scroll_ideal(&t, &ring)?;
    let en = eagon_northcott_betti(t.f());
    let text = format!(
        "{t} in P^{}, degree {}\nmatrix:\n  {}\n  {}\nideal:\n{}Eagon-Northcott table:\n{}",
        t.ambient(),
        t.f(),
        row(&top),
        row(&bottom),
        write_ideal(&ideal),
        table_text(&en)
    );
    let summary = json!({"command": "scroll", "type": t.to_string(), "minors": ideal.generators().len(), "triples": triples_json(&en)});
    Ok(Outcome::ok(text, summary))
}

fn psirank(tag: PsiTag, p: u64) -> Result<Outcome> {
    let field = FieldSpec::prime(p)?;
    let m = alpha_matrix(&PsiType::standard(tag), field)?;
    let rank = m.rank();
    let kernel = m.cols() - rank;
    let mut text = format!("type: {tag}\nfield: F_{p}\nmatrix: {} x {}\nrank: {rank}\nkernel: {kernel}\n", m.rows(), m.cols());
    let beta45 = classify_rank(rank, p as u32).ok();
    if let Some(b) = beta45 {
        text.push_str(&format!("beta_45: {b}\n"));
    }
    let summary = json!({"command": "psirank", "type": tag.to_string(), "char": p, "rows": m.rows(), "cols": m.cols(), "rank": rank, "kernel": kernel, "beta45": beta45});
    Ok(Outcome::ok(text, summary))
}

/// Smallest lattice on which the class parses and the near pairs make sense.
fn lattice_for(surface: Surface, curve: &str, near: &[(usize, usize)]) -> Result<(SurfaceLattice, DivisorClass)> {
    let need = near.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0);
    for s in need..=64 {
        let l = SurfaceLattice::new(surface, s, near.to_vec())?;
        if let Ok(c) = l.parse_class(curve) {
            return Ok((l, c));
        }
    }
    let l = SurfaceLattice::new(surface, need, near.to_vec())?;
    Err(l.parse_class(curve).unwrap_err().into())
}

fn ampleness(surface: Surface, curve: &str, level: u32, near: &[(usize, usize)]) -> Result<Outcome> {
    let (l, c) = lattice_for(surface, curve, near)?;
    let v = l.ampleness_verdict(&c, level)?;
    let list = |ds: &[DivisorClass]| ds.iter().map(|d| l.display(d)).collect::<Vec<_>>();
    let (word, divisors) = match &v.verdict {
        Verdict::Holds => ("holds", Vec::new()),
        Verdict::Fails(ds) => ("fails", list(ds)),
        Verdict::HoldsOutside(ds) => ("holds outside", list(ds)),
        Verdict::Inapplicable => ("inapplicable", Vec::new()),
    };
    let kind = if level == 0 { "base-point free" } else { "very ample" };
    let mut text = format!(
        "class: {}\nself-intersection: {}\narithmetic genus: {}\n{kind}: {word}\n",
        l.display(&c),
        l.self_intersection(&c)?,
        l.arithmetic_genus(&c).map(|g| g.to_string()).unwrap_or_else(|_| "-".into())
    );
    for d in &divisors {
        text.push_str(&format!("critical: {d}\n"));
    }
    let summary = json!({"command": "ampleness", "class": l.display(&c), "i": level, "applicable": v.applicable, "verdict": word, "critical": divisors});
    Ok(Outcome::ok(text, summary))
}

fn gen(recipe: Recipe, seed: u64, p: u32, out: &Path) -> Result<Outcome> {
    let run = run_pipeline(recipe, p, seed)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let m = &run.model;
    let stem = format!("{}-{p}-{seed}", recipe.tag());
    let files = [
        (format!("{stem}.model"), write_polys(&m.ring, &m.defining_forms)),
        (format!("{stem}.side"), write_sidecar(m)),
        (format!("{stem}.ideal"), write_ideal(&run.ideal)),
    ];
    let mut text = format!("recipe: {recipe}\nambient: {}\ndegree: {}\nrejected draws: {}\n", m.ambient, m.degree, run.rejected);
    for (name, body) in &files {
        let path = out.join(name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        text.push_str(&format!("wrote {}\n", path.display()));
    }
    let names: Vec<&String> = files.iter().map(|f| &f.0).collect();
    Ok(Outcome::ok(text, json!({"command": "gen", "recipe": recipe.tag(), "char": p, "seed": seed, "files": names})))
}

#[derive(Serialize)]
struct ReportRecord<'a> {
    label: &'a str,
    cliff: u32,
    k: Option<u32>,
    notes: &'a [String],
}

fn report_json(r: &ClassificationReport) -> Value {
    serde_json::to_value(ReportRecord { label: &r.label, cliff: r.clifford_index, k: r.k_g15, notes: &r.notes }).expect("plain record")
}

fn classify_file(ideal: &Path, seed: u64) -> Result<Outcome> {
    let i = load_ideal(ideal)?;
    if i.ring().nvars() != 9 {
        bail!("a genus-9 canonical ideal lives in 9 variables, file has {}", i.ring().nvars());
    }
    let t = canonical_table(&i, seed)?;
    let r = classify(&t, i.ring().p())?;
    let mut summary = report_json(&r);
    summary["command"] = json!("classify");
    Ok(Outcome::ok(format!("{}\n{r}", table_text(&t)), summary))
}

struct Row {
    recipe: Recipe,
    expected: String,
    got: String,
    beta45: Option<u64>,
    pass: bool,
}

fn reproduce(all: bool, mut recipes: Vec<Recipe>, seed: u64, p: u32) -> Result<Outcome> {
    if all {
        recipes = Recipe::ALL.to_vec();
    }
    if recipes.is_empty() {
        bail!("name recipes with --recipe or pass --all");
    }
    recipes.sort_by_key(|r| r.tag());
    recipes.dedup();
    let rows: Vec<Row> = recipes
        .par_iter()
        .map(|&r| {
            let expected = r.expected_label().to_string();
            match run_pipeline(r, p, seed) {
                Ok(run) => {
                    let label = classify(&run.table, p).map(|c| c.label).unwrap_or_else(|e| format!("error: {e}"));
                    let pass = expected_table(&expected, p).map(|t| t == run.table).unwrap_or(false);
                    Row { recipe: r, expected, got: label, beta45: Some(run.table.get(4, 5)), pass }
                }
                Err(e) => Row { recipe: r, expected, got: format!("error: {e}"), beta45: None, pass: false },
            }
        })
        .collect();
    let mut text = format!("{:<22} {:<12} {:<14} {:>7}  result\n", "recipe", "expected", "got", "beta45");
    for r in &rows {
        let b = r.beta45.map(|b| b.to_string()).unwrap_or_else(|| "-".into());
        text.push_str(&format!("{:<22} {:<12} {:<14} {:>7}  {}\n", r.recipe.tag(), r.expected, r.got, b, if r.pass { "PASS" } else { "FAIL" }));
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    text.push_str(&format!("{passed}/{} recipes match\n", rows.len()));
    let matrix: Vec<Value> = rows.iter().map(|r| json!({"recipe": r.recipe.tag(), "expected": r.expected, "got": r.got, "beta45": r.beta45, "pass": r.pass})).collect();
    let status = if passed == rows.len() { EXIT_OK } else { EXIT_MISMATCH };
    Ok(Outcome { text, summary: json!({"command": "reproduce", "char": p, "seed": seed, "passed": passed, "total": rows.len(), "rows": matrix}), status })
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Gb { ideal, output } => gb(ideal, output.as_deref()),
        Command::Betti { ideal, max_row, canonical, seed } => betti(ideal, *max_row, *canonical, seed.seed),
        Command::Resolve { ideal } => resolve(ideal),
        Command::Scroll { scroll_type } => scroll(scroll_type),
        Command::Psirank { psi, characteristic } => psirank(*psi, *characteristic),
        Command::Ampleness { surface, curve, level, near } => ampleness(*surface, curve, *level, near),
        Command::Gen { recipe, seed, characteristic, out } => gen(*recipe, seed.seed, *characteristic, out),
        Command::Classify { ideal, seed } => classify_file(ideal, seed.seed),
        Command::Reproduce { all, recipe, seed, characteristic } => reproduce(*all, recipe.clone(), seed.seed, *characteristic),
    }
}

/// Runs the command line `argv` (program name first) and returns the exit status.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_REFUSED;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let _ = out.write_all(o.text.as_bytes());
            if cli.json {
                let mut s = o.summary;
                s["status"] = json!(o.status);
                let _ = writeln!(out, "{s}");
            }
            o.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            if cli.json {
                let _ = writeln!(out, "{}", json!({"status": EXIT_REFUSED, "error": format!("{e:#}")}));
            }
            EXIT_REFUSED
        }
    }
}
