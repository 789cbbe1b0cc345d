//! The `ratlin` command line. [`run`] returns the report text so the binary
//! stays a thin wrapper and tests can call it directly.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fullrank::BlockFullRank;
use crate::io::{self, MatrixFile, Params};
use crate::linearize::LinearizationClaim;
use crate::pencils::{LowRankTest, NleigsBuild, NleigsParams};
use crate::psm::Psm;
use crate::ratmat::{RatMatrix, Region};
use crate::scalars::{parse_rat, Point, Rat};

#[derive(Parser, Debug)]
#[command(name = "ratlin", version, about = "Exact local structure and linearizations of rational matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smith–McMillan form, optionally restricted to a region.
    Sm {
        file: PathBuf,
        #[arg(long, default_value = "all")]
        region: String,
    },
    /// Invariant orders and pole/zero multiplicities at a point.
    Structure {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "at_inf", required_unless_present = "at_inf")]
        at: Option<String>,
        #[arg(long)]
        at_inf: bool,
        /// Also report the orders at 0 of the grade-g reversal.
        #[arg(long, requires = "at_inf", allow_hyphen_values = true)]
        grade: Option<i64>,
    },
    /// Minimality of a polynomial system matrix.
    Minimal {
        file: PathBuf,
        #[command(flatten)]
        mode: MinimalMode,
    },
    /// Whether a system matrix linearizes a target rational matrix.
    CheckLin {
        file: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[command(flatten)]
        mode: LinMode,
    },
    /// Build one of the pencil families from a parameter file.
    Build {
        family: Family,
        params: PathBuf,
        #[arg(short = 'o', long = "output")]
        prefix: PathBuf,
        /// Low-rank minimality test.
        #[arg(long, value_enum, default_value = "full")]
        test: TestKind,
    },
    /// Finite eigenvalues (zeros) with partial multiplicities.
    Eig {
        file: PathBuf,
        #[arg(long, default_value = "all")]
        region: String,
    },
    /// Cross-checks against independent oracles.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
}

#[derive(Args, Debug)]
#[group(multiple = false)]
struct MinimalMode {
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
    #[arg(long)]
    region: Option<String>,
    #[arg(long)]
    inf: bool,
    #[arg(long)]
    strong: bool,
}

#[derive(Args, Debug)]
struct LinMode {
    #[arg(long, conflicts_with_all = ["inf", "g_strong"])]
    region: Option<String>,
    #[arg(long, requires = "grade", conflicts_with = "g_strong")]
    inf: bool,
    #[arg(long, allow_hyphen_values = true)]
    grade: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    g_strong: Option<i64>,
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Smith form by elimination against the determinantal-divisor oracle.
    Smith { file: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    Saad,
    Subai,
    Nleigs,
    NleigsLowrank,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TestKind {
    Full,
    Block,
    Square,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Result<String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => return Ok(e.to_string()),
        Err(e) => return Err(Error::Parse(e.to_string().trim_start_matches("error: ").trim_end().to_string())),
    };
    match cli.command {
        Command::Sm { file, region } => {
            let g = io::parse_ratmatrix(&read(&file)?)?;
            Ok(g.smith_mcmillan(&Region::parse(&region)?).to_string())
        }
        Command::Structure { file, at, at_inf, grade } => structure(&file, at.as_deref(), at_inf, grade),
        Command::Minimal { file, mode } => minimal(&io::parse_psm(&read(&file)?)?, &mode),
        Command::CheckLin { file, target, mode } => {
            let l = io::parse_psm(&read(&file)?)?;
            let g = io::parse_ratmatrix(&read(&target)?)?;
            let claim = LinearizationClaim::new(l, g)?;
            let verdict = if let Some(g) = mode.g_strong {
                claim.is_g_strong(g)
            } else if mode.inf {
                claim.is_linearization_at_infinity(mode.grade.expect("clap enforces --grade"))
            } else {
                claim.is_linearization_in(&Region::parse(mode.region.as_deref().unwrap_or("all"))?)
            };
            Ok(format!("{verdict}\n"))
        }
        Command::Build { family, params, prefix, test } => build(family, &Params::parse(&read(&params)?)?, &prefix, test),
        Command::Eig { file, region } => {
            let g = io::parse_ratmatrix(&read(&file)?)?;
            Ok(g.eigenvalues_in(&Region::parse(&region)?).to_string())
        }
        Command::Oracle { which: OracleCommand::Smith { file } } => {
            let p = match io::parse_matrix_file(&read(&file)?)? {
                io::MatrixFile::Poly(p) => p,
                io::MatrixFile::System(s) => s.matrix().clone(),
                io::MatrixFile::Rational(_) => return Err(Error::Parse("expected a polymatrix file".into())),
            };
            let (a, b) = (p.smith_form(), p.smith_via_minors());
            let list = |s: &crate::polymat::SmithForm| {
                s.invariant_polys.iter().map(|q| format!("[{q}]")).collect::<Vec<_>>().join(" ")
            };
            Ok(format!("elimination: {}\nminors: {}\nagree: {}\n", list(&a), list(&b), a == b))
        }
    }
}

fn structure(file: &Path, at: Option<&str>, at_inf: bool, grade: Option<i64>) -> Result<String> {
    let parsed = io::parse_matrix_file(&read(file)?)?;
    let mut out = String::new();
    match (&parsed, at) {
        (MatrixFile::System(s), Some(a)) if s.n() > 0 => {
            writeln!(out, "{}", s.structure_at(&parse_rat(a)?)?).unwrap();
        }
        (MatrixFile::System(s), None) if s.n() > 0 => {
            writeln!(out, "{}", s.structure_at_infinity()?).unwrap();
        }
        (_, Some(a)) => {
            let g = parsed.to_rational();
            let point = Point::Finite(parse_rat(a)?);
            writeln!(out, "{}", g.invariant_orders(&point)).unwrap();
            writeln!(out, "{}", g.local_structure(&point)).unwrap();
        }
        (_, None) => {
            debug_assert!(at_inf);
            let g = parsed.to_rational();
            let orders = g.invariant_orders(&Point::Infinity);
            writeln!(out, "{orders}").unwrap();
            writeln!(out, "{}", orders.local_structure()).unwrap();
            if let Some(gr) = grade {
                let rev = g.g_reversal(gr).invariant_orders(&Point::Finite(Rat::zero()));
                let list: Vec<String> = rev.orders.iter().map(ToString::to_string).collect();
                writeln!(out, "orders at 0 of rev_{gr}: {}", list.join(" ")).unwrap();
            }
        }
    }
    Ok(out)
}

fn minimal(s: &Psm, mode: &MinimalMode) -> Result<String> {
    if let Some(a) = &mode.at {
        let a = parse_rat(a)?;
        return Ok(format!("minimal at {a}: {}\n", s.is_minimal_at(&a)));
    }
    if mode.inf {
        return Ok(format!("minimal at inf: {}\n", s.is_minimal_at_infinity()));
    }
    if mode.strong {
        return Ok(format!("strongly minimal: {}\n", s.is_strongly_minimal()));
    }
    let region = Region::parse(mode.region.as_deref().unwrap_or("all"))?;
    let defects = s.minimality_defect_points();
    Ok(format!("minimal in {region}: {}\ndefects: {defects}\n", s.is_minimal_in(&region)))
}

fn grade_lines(out: &mut String, pencil: &BlockFullRank, dual: &RatMatrix) -> Result<()> {
    let found = pencil.search_grade(Some(dual), None)?;
    if found.is_empty() {
        writeln!(out, "grade at inf: none found").unwrap();
    }
    for v in found {
        writeln!(out, "grade at inf: {} (t = {})", v.grade, v.t1).unwrap();
    }
    Ok(())
}

fn build(family: Family, params: &Params, prefix: &Path, test: TestKind) -> Result<String> {
    let file = |ext: &str| -> PathBuf {
        let mut name = prefix.as_os_str().to_owned();
        name.push(ext);
        PathBuf::from(name)
    };
    let mut cert = String::new();
    let (g, pencil, psm, dual) = match family {
        Family::Saad => {
            let s = params.saad()?.build()?;
            let (_, omega) = s.fullrank.linearization_region(Some(&s.dual), None)?;
            writeln!(cert, "family: saad").unwrap();
            writeln!(cert, "psm minimal in all: {}", s.psm.is_minimal_in(&Region::AllF)).unwrap();
            writeln!(cert, "psm defects: {}", s.psm.minimality_defect_points()).unwrap();
            writeln!(cert, "empty-state region: {omega}").unwrap();
            grade_lines(&mut cert, &s.fullrank, &s.dual)?;
            (s.g, s.psm.matrix().clone(), s.psm, s.dual)
        }
        Family::Subai => {
            let s = params.subai()?.build()?;
            let (_, omega) = s.fullrank.linearization_region(Some(&s.dual), None)?;
            writeln!(cert, "family: subai").unwrap();
            writeln!(cert, "psm minimal in all: {}", s.psm.is_minimal_in(&Region::AllF)).unwrap();
            writeln!(cert, "psm minimal at inf: {}", s.psm.is_minimal_at_infinity()).unwrap();
            writeln!(cert, "empty-state region: {omega}").unwrap();
            let q = s.degree() as i64;
            let v = s.fullrank.linearization_at_infinity_grade(Some(&s.dual), None, q - 1, 0)?;
            writeln!(cert, "grade {q} at inf: {}", v.verdict.holds).unwrap();
            (s.g, s.pencil, s.psm, s.dual)
        }
        Family::Nleigs => {
            let nb = params.nleigs()?;
            let built = nb.build()?;
            writeln!(cert, "family: nleigs").unwrap();
            nleigs_common(&mut cert, &nb.params, &built, true)?;
            match nb.minimality() {
                Ok(c) => {
                    write!(cert, "{c}").unwrap();
                    let s = nb.pole_structure()?;
                    let list: Vec<String> = s.invariant_polys.iter().filter(|p| !p.is_one()).map(|p| format!("[{p}]")).collect();
                    writeln!(cert, "state invariant polynomials: {}", list.join(" ")).unwrap();
                }
                Err(e) => writeln!(cert, "psm minimality: not checked ({e})").unwrap(),
            }
            (built.q, built.pencil, built.psm, built.dual)
        }
        Family::NleigsLowrank => {
            let lr = params.nleigs_lowrank()?;
            let built = lr.build()?;
            writeln!(cert, "family: nleigs-lowrank").unwrap();
            let p = lr.split();
            let n = lr.params.len();
            let tail_finite = lr.params.xi[p..n - 1].iter().all(|x| matches!(x, Point::Finite(_)));
            nleigs_common(&mut cert, &lr.params, &built, tail_finite)?;
            let test = match test {
                TestKind::Full => LowRankTest::Full,
                TestKind::Block => LowRankTest::LowRankBlock,
                TestKind::Square => LowRankTest::Square,
            };
            match lr.minimality(test) {
                Ok(c) => write!(cert, "{c}").unwrap(),
                Err(e) => writeln!(cert, "psm minimality: not checked ({e})").unwrap(),
            }
            (built.q, built.pencil, built.psm, built.dual)
        }
    };
    write(&file(".g.rm"), &io::format_ratmatrix(&g))?;
    write(&file(".pencil.pm"), &io::format_polymatrix(&pencil))?;
    write(&file(".psm"), &io::format_psm(&psm))?;
    write(&file(".dual.rm"), &io::format_ratmatrix(&dual))?;
    write(&file(".cert.txt"), &cert)?;
    Ok(cert)
}

fn nleigs_common(out: &mut String, params: &NleigsParams, built: &NleigsBuild, grade_claim: bool) -> Result<()> {
    let (_, omega) = built.fullrank.linearization_region(Some(&built.dual), None)?;
    writeln!(out, "empty-state region: {omega}").unwrap();
    let i_n = params.infinite_poles() as i64;
    if grade_claim {
        let v = built.fullrank.linearization_at_infinity_grade(Some(&built.dual), None, i_n - 1, 0)?;
        writeln!(out, "grade {i_n} at inf: {}", v.verdict.holds).unwrap();
    } else {
        writeln!(out, "grade at inf: not claimed (infinite pole among the low-rank tail)").unwrap();
    }
    Ok(())
}
