//! The `cellres` command line: JSON in, JSON or text out.
//!
//! Exit codes: 0 on success, 1 when a mathematical precondition fails, 2 on
//! I/O, usage and parse errors.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{CellComplex, CellId, ComplexFile};
use crate::constructors::{
    rpn_complex, scarf_complex, sphere_complex, taylor_complex, torus_complex,
};
use crate::homology::{coefficient_homology, graded_homology, ChainComplexData, Coefficients};
use crate::monomials::{Field, Monomial, MonomialError, MonomialIdeal, Ring};
use crate::polyhedral::{
    cell_complex_from_polyhedra, hull_complex, PolyhedralInput, RationalPoint,
};
use crate::random::{random_generic_ideal, random_ideal};
use crate::resolution::{betti_table, is_minimal, resolution_witness};

#[derive(Debug, Parser)]
#[command(
    name = "cellres",
    version,
    about = "Cellular resolutions of monomial ideals"
)]
pub struct Cli {
    /// Input file; standard input when omitted.
    #[arg(short, long, global = true)]
    input: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Taylor complex of an ideal.
    Taylor,
    /// Scarf complex of an ideal.
    Scarf,
    /// Hull complex of an ideal.
    Hull {
        /// Base of the exponential embedding; defaults to (n+1)!+1.
        #[arg(long)]
        t: Option<BigInt>,
    },
    /// Minimal cell structure on a sphere, real projective space or torus.
    Space {
        kind: SpaceKind,
        #[arg(long)]
        dim: i64,
        #[arg(long, default_value = "Q")]
        field: Field,
        /// Comma-separated ring variables.
        #[arg(long, default_value = "x")]
        vars: String,
    },
    /// Cell complex of the bounded faces of a polyhedron or polyhedral complex.
    Frompoly {
        /// Map from vertex coordinates to monomials.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Comma-separated ring variables; inferred from the labels otherwise.
        #[arg(long)]
        vars: Option<String>,
        #[arg(long, default_value = "Q")]
        field: Field,
    },
    /// Replace vertex labels and recompute the others as lcms.
    Relabel {
        /// Map from vertex ids to monomials.
        #[arg(long)]
        labels: PathBuf,
    },
    /// Whether a complex supports a (minimal) resolution.
    Check,
    /// Betti table of the minimal resolution a complex supports.
    Betti {
        /// Report cells in their own dimension instead of one higher.
        #[arg(long)]
        no_shift: bool,
    },
    /// Cellular homology, or multigraded homology of the supported complex.
    Homology {
        /// Q, Fp:<p> or Z; defaults to the ring's field.
        #[arg(long, conflicts_with = "graded")]
        coeff: Option<Coefficients>,
        #[arg(long)]
        graded: bool,
        #[arg(long, conflicts_with = "graded")]
        no_reduced: bool,
    },
    /// Differentials of the supported chain complex.
    Chain {
        /// Move degree i to degree i - S.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i64,
        #[arg(long)]
        no_reduced: bool,
    },
    /// Face poset incidence matrix.
    Poset,
    /// Report every violated complex axiom.
    Validate,
    /// Seeded random ideal.
    GenRandomIdeal {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "x,y,z")]
        vars: String,
        #[arg(long, default_value_t = 4)]
        generators: usize,
        #[arg(long, default_value_t = 3)]
        max_exponent: u32,
        /// Only ideals with no shared nonzero exponent in any variable.
        #[arg(long)]
        generic: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpaceKind {
    Sphere,
    Rpn,
    Torus,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io { .. } | CliError::Parse(_) => 2,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

/// Serialized ideal: a ring and generator strings.
#[derive(Debug, Serialize, Deserialize)]
pub struct IdealFile {
    pub ring: Ring,
    pub generators: Vec<String>,
}

struct Streams<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    input: Option<PathBuf>,
    out: Option<PathBuf>,
}

impl Streams<'_> {
    fn read_input(&mut self) -> Result<String, CliError> {
        match &self.input {
            Some(p) => read_file(p),
            None => {
                let mut s = String::new();
                self.stdin
                    .read_to_string(&mut s)
                    .map_err(|source| CliError::Io {
                        path: "<stdin>".into(),
                        source,
                    })?;
                Ok(s)
            }
        }
    }

    fn emit(&mut self, text: &str) -> Result<(), CliError> {
        let text = if text.ends_with('\n') {
            text.to_string()
        } else {
            format!("{text}\n")
        };
        match &self.out {
            Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            }),
            None => self
                .stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                }),
        }
    }

    fn emit_json(&mut self, value: &impl Serialize) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(value).expect("serializable");
        self.emit(&text)
    }

    fn warn(&mut self, message: &str) {
        let _ = writeln!(self.stderr, "warning: {message}");
    }
}

fn read_file(p: &Path) -> Result<String, CliError> {
    fs::read_to_string(p).map_err(|source| CliError::Io {
        path: p.display().to_string(),
        source,
    })
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(format!("invalid {what}: {e}")))
}

fn parse_vars(vars: &str, field: Field) -> Result<Ring, CliError> {
    Ring::new(vars.split(',').map(str::trim), field).map_err(|e| CliError::Parse(e.to_string()))
}

/// Parses and minimalizes; syntax errors name the offending element.
pub fn parse_ideal(text: &str, warnings: &mut Vec<String>) -> Result<MonomialIdeal, CliError> {
    let file: IdealFile = parse_json(text, "ideal file")?;
    let gens = file
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| {
            file.ring
                .parse(g)
                .map_err(|e| CliError::Parse(format!("generator {} (`{g}`): {e}", i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let ideal = MonomialIdeal::minimalize(&file.ring, &gens).map_err(|e| match e {
        MonomialError::EmptyIdeal => domain(e),
        other => CliError::Parse(other.to_string()),
    })?;
    if ideal.len() < gens.len() {
        warnings.push(format!(
            "{} generators minimalized to {}",
            gens.len(),
            ideal.len()
        ));
    }
    Ok(ideal)
}

pub fn ideal_file(ideal: &MonomialIdeal) -> IdealFile {
    IdealFile {
        ring: ideal.ring().clone(),
        generators: ideal
            .generators()
            .iter()
            .map(|g| ideal.ring().render(g))
            .collect(),
    }
}

fn parse_complex(text: &str) -> Result<CellComplex, CliError> {
    let file: ComplexFile = parse_json(text, "complex file")?;
    file.into_complex().map_err(domain)
}

/// Labels for `frompoly`: a bare map from coordinates to monomials, or
/// `{"ring": ..., "labels": {...}}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum PointLabels {
    WithRing {
        ring: Ring,
        labels: BTreeMap<String, String>,
    },
    Bare(BTreeMap<String, String>),
}

/// Identifiers appearing in monomial strings, sorted.
fn infer_variables<'a>(monomials: impl Iterator<Item = &'a String>) -> Vec<String> {
    let mut names = BTreeSet::new();
    for m in monomials {
        let mut current = String::new();
        for c in m.chars().chain([' ']) {
            if c.is_alphanumeric() || c == '_' {
                if !current.is_empty() || !c.is_ascii_digit() {
                    current.push(c);
                }
            } else if !current.is_empty() {
                names.insert(std::mem::take(&mut current));
            }
        }
    }
    names.into_iter().collect()
}

fn frompoly(
    io: &mut Streams<'_>,
    labels: Option<&Path>,
    vars: Option<&str>,
    field: Field,
) -> Result<(), CliError> {
    let input: PolyhedralInput = parse_json(&io.read_input()?, "polyhedron file")?;
    let complex = input.to_complex().map_err(domain)?;
    let (file_ring, raw) = match labels {
        None => (None, None),
        Some(p) => match parse_json::<PointLabels>(&read_file(p)?, "labels file")? {
            PointLabels::WithRing { ring, labels } => (Some(ring), Some(labels)),
            PointLabels::Bare(labels) => (None, Some(labels)),
        },
    };
    let ring = match (vars, file_ring, &raw) {
        (Some(v), _, _) => parse_vars(v, field)?,
        (None, Some(r), _) => r,
        (None, None, Some(map)) if !map.is_empty() => {
            let names = infer_variables(map.values());
            if names.is_empty() {
                parse_vars("x", field)?
            } else {
                Ring::new(names, field).map_err(|e| CliError::Parse(e.to_string()))?
            }
        }
        _ => parse_vars("x", field)?,
    };
    let map = raw
        .map(|m| {
            m.iter()
                .map(|(k, v)| {
                    let point: RationalPoint =
                        k.parse().map_err(|e: crate::polyhedral::PolyhedralError| {
                            CliError::Parse(e.to_string())
                        })?;
                    let mono = ring
                        .parse(v)
                        .map_err(|e| CliError::Parse(format!("label of {k}: {e}")))?;
                    Ok((point, mono))
                })
                .collect::<Result<BTreeMap<RationalPoint, Monomial>, CliError>>()
        })
        .transpose()?;
    let x = cell_complex_from_polyhedra(&ring, &complex, map.as_ref()).map_err(domain)?;
    io.emit_json(&x.to_file())
}

#[derive(Serialize)]
struct DifferentialJson {
    degree: i64,
    rows: Vec<String>,
    cols: Vec<String>,
    /// `[row, col, coefficient, monomial]`
    entries: Vec<(usize, usize, i64, String)>,
}

#[derive(Serialize)]
struct ChainJson {
    lo: Option<i64>,
    hi: Option<i64>,
    ranks: Vec<usize>,
    differentials: Vec<DifferentialJson>,
}

#[derive(Serialize)]
struct WitnessJson {
    multidegree: String,
    degree: i64,
    rank: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CheckJson {
    is_resolution: bool,
    witness: Option<WitnessJson>,
    is_minimal: bool,
}

fn chain_json(c: &ChainComplexData) -> ChainJson {
    let ring = c.ring();
    let ids = |degree: i64| -> Vec<String> {
        c.basis(degree)
            .unwrap_or_default()
            .iter()
            .map(|b| b.name().to_string())
            .collect()
    };
    ChainJson {
        lo: c.lo(),
        hi: c.hi(),
        ranks: c.ranks(),
        differentials: c
            .differentials()
            .iter()
            .map(|d| DifferentialJson {
                degree: d.degree,
                rows: ids(d.degree - 1),
                cols: ids(d.degree),
                entries: d
                    .entries
                    .iter()
                    .map(|e| (e.row, e.col, e.coefficient, ring.render(&e.monomial)))
                    .collect(),
            })
            .collect(),
    }
}

fn execute(command: Command, io: &mut Streams<'_>) -> Result<(), CliError> {
    let mut warnings = Vec::new();
    let result = match command {
        Command::Taylor | Command::Scarf | Command::Hull { .. } => {
            let ideal = parse_ideal(&io.read_input()?, &mut warnings)?;
            for w in warnings.drain(..) {
                io.warn(&w);
            }
            let x = match command {
                Command::Taylor => taylor_complex(&ideal).map_err(domain)?,
                Command::Scarf => scarf_complex(&ideal).map_err(domain)?,
                Command::Hull { t } => hull_complex(&ideal, t.as_ref()).map_err(domain)?,
                _ => unreachable!(),
            };
            io.emit_json(&x.to_file())
        }
        Command::Space {
            kind,
            dim,
            field,
            vars,
        } => {
            let ring = parse_vars(&vars, field)?;
            let x = match kind {
                SpaceKind::Sphere => sphere_complex(&ring, dim),
                SpaceKind::Rpn => rpn_complex(&ring, dim),
                SpaceKind::Torus => torus_complex(&ring, dim),
            }
            .map_err(domain)?;
            io.emit_json(&x.to_file())
        }
        Command::Frompoly {
            labels,
            vars,
            field,
        } => frompoly(io, labels.as_deref(), vars.as_deref(), field),
        Command::Relabel { labels } => {
            let x = parse_complex(&io.read_input()?)?;
            let raw: BTreeMap<String, String> = parse_json(&read_file(&labels)?, "labels file")?;
            let map = raw
                .iter()
                .map(|(k, v)| {
                    let m = x
                        .ring()
                        .parse(v)
                        .map_err(|e| CliError::Parse(format!("label of {k}: {e}")))?;
                    Ok((CellId::new(k.clone()), m))
                })
                .collect::<Result<BTreeMap<_, _>, CliError>>()?;
            let relabeled = x.relabel(&map).map_err(domain)?;
            io.emit_json(&relabeled.to_file())
        }
        Command::Check => {
            let x = parse_complex(&io.read_input()?)?;
            let witness = resolution_witness(&x).map_err(domain)?;
            io.emit_json(&CheckJson {
                is_resolution: witness.is_none(),
                witness: witness.map(|w| WitnessJson {
                    multidegree: x.ring().render(&w.multidegree),
                    degree: w.degree,
                    rank: w.rank,
                }),
                is_minimal: is_minimal(&x),
            })
        }
        Command::Betti { no_shift } => {
            let x = parse_complex(&io.read_input()?)?;
            let table = betti_table(&x, !no_shift).map_err(domain)?;
            io.emit(&table.to_string())
        }
        Command::Homology {
            coeff,
            graded,
            no_reduced,
        } => {
            let x = parse_complex(&io.read_input()?)?;
            if graded {
                let h = graded_homology(&x, None).map_err(domain)?;
                io.emit(&h.to_string())
            } else {
                let coeff = coeff.unwrap_or_else(|| x.ring().field().into());
                io.emit(&coefficient_homology(&x, coeff, !no_reduced).to_string())
            }
        }
        Command::Chain { shift, no_reduced } => {
            let x = parse_complex(&io.read_input()?)?;
            let c = ChainComplexData::new(&x, !no_reduced).shift(shift);
            io.emit_json(&chain_json(&c))
        }
        Command::Poset => {
            let x = parse_complex(&io.read_input()?)?;
            let poset = x.face_poset();
            let ids: Vec<&str> = poset.cells.iter().map(CellId::as_str).collect();
            io.emit(&format!("{}\n{poset}", ids.join(" ")))
        }
        Command::Validate => {
            let file: ComplexFile = parse_json(&io.read_input()?, "complex file")?;
            let x = CellComplex::assemble(file.ring, file.cells).map_err(domain)?;
            let violations = x.validate();
            if violations.is_empty() {
                io.emit("valid")
            } else {
                let report: Vec<String> = violations.iter().map(ToString::to_string).collect();
                io.emit(&report.join("\n"))?;
                Err(CliError::Domain(format!(
                    "{} violation(s) of the cell complex axioms",
                    violations.len()
                )))
            }
        }
        Command::GenRandomIdeal {
            seed,
            vars,
            generators,
            max_exponent,
            generic,
        } => {
            let ring = parse_vars(&vars, Field::Rationals)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ideal = if generic {
                random_generic_ideal(&mut rng, &ring, generators, max_exponent)
            } else {
                random_ideal(&mut rng, &ring, generators, max_exponent)
            }
            .ok_or_else(|| {
                domain("no ideal matches the requested generator count and exponent bound")
            })?;
            io.emit_json(&ideal_file(&ideal))
        }
    };
    for w in warnings {
        io.warn(&w);
    }
    result
}

/// Runs the command line against the given streams and returns the exit
/// code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let mut io = Streams {
        stdin,
        stdout,
        stderr,
        input: cli.input,
        out: cli.out,
    };
    match execute(cli.command, &mut io) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e}");
            e.exit_code()
        }
    }
}
