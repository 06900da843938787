//! Command surface for the `toric` binary.
//!
//! Each command takes document text and returns a [`CommandOutput`] holding the
//! report and the exit code, so the commands run the same way in tests and from
//! the binary.
//!
//! Exit codes: 0 success, 2 parse error, 3 invalid fan, 4 unknown label,
//! 5 bad subgroup, 6 bad chain.

mod document;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::cox::{
    is_factorial_cover, is_torsor, klt_shadow, relative_cox_fan, relative_cox_fan_by_basis,
    smooth_full_cover, CoxError, RelativeCoxSpace,
};
use crate::divisors::{
    cartier_index, class_group, class_of, is_cartier, is_qcartier, linearly_equivalent,
    weil_mod_cartier, DivisorSubgroup, InvariantDivisor,
};
use crate::fan::{validate_fan, Fan};
use crate::singularities::{klt_report, ToricPair};
use crate::tower::{demo_iteration2, run_tower, LabelRecipe, TowerError};

pub use document::{FanDocument, LabelError, ParseError, FORMAT_TAG, FORMAT_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INVALID_FAN: i32 = 3;
pub const EXIT_UNKNOWN_LABEL: i32 = 4;
pub const EXIT_BAD_SUBGROUP: i32 = 5;
pub const EXIT_BAD_CHAIN: i32 = 6;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutput {
    fn ok(stdout: String) -> Self {
        CommandOutput {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        stderr.push('\n');
        CommandOutput {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

fn load(text: &str) -> Result<(FanDocument, Fan), CommandOutput> {
    let doc = FanDocument::parse(text)
        .map_err(|e| CommandOutput::fail(EXIT_PARSE, format!("parse error: {e}")))?;
    let fan = doc
        .to_fan()
        .map_err(|e| CommandOutput::fail(EXIT_INVALID_FAN, format!("invalid fan: {e}")))?;
    let report = validate_fan(&fan);
    if !report.is_valid() {
        let msg = report
            .violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ");
        return Err(CommandOutput::fail(
            EXIT_INVALID_FAN,
            format!("invalid fan: {msg}"),
        ));
    }
    Ok((doc, fan))
}

fn label_failure(e: LabelError) -> CommandOutput {
    match e {
        LabelError::Unknown(l) => {
            CommandOutput::fail(EXIT_UNKNOWN_LABEL, format!("unknown label {l}"))
        }
        LabelError::Divisor(d) => {
            CommandOutput::fail(EXIT_BAD_SUBGROUP, format!("bad subgroup: {d}"))
        }
    }
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

fn tuple<T: ToString>(xs: &[T]) -> String {
    format!("({})", join(xs, ","))
}

/// Per-cone data, class groups and the local restriction table.
pub fn cmd_analyze(text: &str) -> CommandOutput {
    let (_, f) = match load(text) {
        Ok(x) => x,
        Err(out) => return out,
    };
    analyze_report(&f).map_or_else(|e| CommandOutput::fail(1, e), CommandOutput::ok)
}

fn analyze_report(f: &Fan) -> Result<String, String> {
    let e = |x: &dyn std::fmt::Display| x.to_string();
    let mut s = String::new();
    let wmc = weil_mod_cartier(f).map_err(|x| e(&x))?;
    let _ = writeln!(
        s,
        "fan: rank {}, {} rays, {} maximal cones",
        f.ambient_rank(),
        f.num_rays(),
        f.num_cones()
    );
    for c in 0..f.num_cones() {
        let cone = f.cone(c).map_err(|x| e(&x))?;
        let mult = if cone.is_simplicial() {
            cone.multiplicity().map_err(|x| e(&x))?.to_string()
        } else {
            "-".to_string()
        };
        let _ = writeln!(
            s,
            "cone {c}: rays {}; multiplicity {mult}; {}; local Cl = {}",
            join(f.cones()[c].as_slice(), ","),
            if cone.is_smooth() {
                "smooth"
            } else {
                "singular"
            },
            wmc.local_groups[c]
        );
    }
    let cl = class_group(f);
    let _ = writeln!(s, "Cl = {cl}");
    let _ = writeln!(s, "WDiv/CaDiv = {}", wmc.group);
    let _ = writeln!(s, "local restriction table:");
    for (rho, row) in wmc.local_classes.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|c| tuple(c)).collect();
        let _ = writeln!(s, "  D{rho}: {}", cells.join(" | "));
    }
    let _ = writeln!(
        s,
        "restriction kernel equals Cartier subgroup: {}",
        if wmc.is_monomorphism() { "yes" } else { "no" }
    );
    let singular = f.singular_cones();
    let tail = match singular.len() {
        0 => "all cones smooth".to_string(),
        1 => format!(
            "1 singular cone; local Cl = {}",
            wmc.local_groups[singular[0]]
        ),
        k => format!(
            "{k} singular cones; local Cl = {}",
            join(
                &singular
                    .iter()
                    .map(|&c| wmc.local_groups[c].to_string())
                    .collect::<Vec<_>>(),
                ", "
            )
        ),
    };
    let _ = writeln!(s, "summary: Cl = {cl}; WDiv/CaDiv = {}; {tail}", wmc.group);
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DivisorCheck {
    Cartier,
    Qcartier,
    Principal,
    Class,
}

pub fn cmd_divisor(text: &str, label: &str, check: DivisorCheck) -> CommandOutput {
    let (doc, f) = match load(text) {
        Ok(x) => x,
        Err(out) => return out,
    };
    let d = match doc.divisor(label) {
        Ok(d) => d,
        Err(e) => return label_failure(e),
    };
    divisor_report(&f, label, &d, check)
        .map_or_else(|e| CommandOutput::fail(1, e), CommandOutput::ok)
}

fn divisor_report(
    f: &Fan,
    label: &str,
    d: &InvariantDivisor,
    check: DivisorCheck,
) -> Result<String, String> {
    let e = |x: crate::divisors::DivisorError| x.to_string();
    let index = cartier_index(f, d).map_err(e)?;
    let line = match check {
        DivisorCheck::Cartier => {
            if is_cartier(f, d).map_err(e)? {
                "yes".to_string()
            } else {
                match index {
                    Some(k) => format!("no; index {k}"),
                    None => "no; not Q-Cartier".to_string(),
                }
            }
        }
        DivisorCheck::Qcartier => {
            if is_qcartier(f, d).map_err(e)? {
                format!("yes; index {}", index.expect("Q-Cartier has an index"))
            } else {
                "no".to_string()
            }
        }
        DivisorCheck::Principal => {
            match linearly_equivalent(f, d, &InvariantDivisor::zero(f.num_rays())).map_err(e)? {
                Some(m) => format!("principal; m = {m}"),
                None => "not principal".to_string(),
            }
        }
        DivisorCheck::Class => {
            let c = class_of(f, d).map_err(e)?;
            format!("class = {} in Cl = {}", tuple(&c), class_group(f))
        }
    };
    Ok(format!("{label} {d}: {line}\n"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CoxEmit {
    Fan,
    Verdicts,
}

/// Relative Cox space of a named subgroup (or of every invariant divisor with
/// `full`), emitted as a document or as verdicts.
pub fn cmd_cox(text: &str, label: Option<&str>, full: bool, emit: CoxEmit) -> CommandOutput {
    let (doc, f) = match load(text) {
        Ok(x) => x,
        Err(out) => return out,
    };
    let (n, names) = if full {
        let names = (0..f.num_rays()).map(|i| format!("D{i}")).collect();
        (DivisorSubgroup::all(&f), names)
    } else {
        let Some(label) = label else {
            return CommandOutput::fail(
                EXIT_UNKNOWN_LABEL,
                "a subgroup label or --full is required",
            );
        };
        match doc.subgroup(&f, label) {
            Ok(n) => (n, doc.generator_labels(label)),
            Err(e) => return label_failure(e),
        }
    };
    let space = match if full {
        smooth_full_cover(&f)
    } else {
        relative_cox_fan(&f, &n)
    } {
        Ok(s) => s,
        Err(e @ CoxError::RankDeficientSubgroup { .. }) => {
            return CommandOutput::fail(EXIT_BAD_SUBGROUP, format!("bad subgroup: {e}"))
        }
        Err(e) => return CommandOutput::fail(1, e.to_string()),
    };
    match emit {
        CoxEmit::Fan => CommandOutput::ok(FanDocument::from_fan(&space.total).to_string()),
        CoxEmit::Verdicts => cox_verdicts(&f, &space, &names)
            .map_or_else(|e| CommandOutput::fail(1, e), CommandOutput::ok),
    }
}

fn cox_verdicts(f: &Fan, space: &RelativeCoxSpace, names: &[String]) -> Result<String, String> {
    let e = |x: CoxError| x.to_string();
    let n = &space.subgroup;
    let mut s = String::new();
    let verdict = is_torsor(f, n).map_err(e)?;
    let _ = writeln!(
        s,
        "lifted fan: rank {}, {} cones, {}",
        space.total.ambient_rank(),
        space.total.num_cones(),
        if space.is_smooth() {
            "smooth"
        } else {
            "singular"
        }
    );
    let _ = writeln!(
        s,
        "{}",
        if verdict.is_torsor() {
            "torsor"
        } else {
            "not torsor"
        }
    );
    for w in &verdict.witnesses {
        let _ = writeln!(
            s,
            "witness: cone {} generator {} class {}",
            w.cone,
            names[w.generator],
            tuple(&w.class)
        );
    }
    let fac = is_factorial_cover(f, n).map_err(e)?;
    let yn = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(
        s,
        "factorial: {} (surjective {}, lifted smooth {})",
        yn(fac.is_factorial()),
        yn(fac.surjective),
        yn(fac.lift_smooth)
    );
    Ok(s)
}

/// Which tower to run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerMode {
    Chain {
        labels: Vec<String>,
        klt_shadow: bool,
    },
    Iteration2 {
        n: usize,
        degrees: Vec<usize>,
        full: bool,
    },
}

pub fn cmd_tower(text: Option<&str>, mode: &TowerMode) -> CommandOutput {
    match mode {
        TowerMode::Iteration2 { n, degrees, full } => {
            let recipe = if *full {
                LabelRecipe::FullLabels
            } else {
                LabelRecipe::Sparse
            };
            match demo_iteration2(*n, degrees, recipe) {
                Ok(t) => CommandOutput::ok(t.to_string()),
                Err(e) => CommandOutput::fail(EXIT_BAD_CHAIN, e.to_string()),
            }
        }
        TowerMode::Chain { labels, klt_shadow } => {
            let Some(text) = text else {
                return CommandOutput::fail(EXIT_PARSE, "a fan document is required for --chain");
            };
            let (doc, f) = match load(text) {
                Ok(x) => x,
                Err(out) => return out,
            };
            let mut chain = Vec::with_capacity(labels.len());
            for l in labels {
                match doc.subgroup(&f, l) {
                    Ok(n) => chain.push(n),
                    Err(e) => return label_failure(e),
                }
            }
            match chain_report(&f, labels, &chain, *klt_shadow) {
                Ok(s) => CommandOutput::ok(s),
                Err(TowerError::ChainNotIncreasing { step }) => CommandOutput::fail(
                    EXIT_BAD_CHAIN,
                    format!(
                        "bad chain: {} does not contain {}",
                        labels[step],
                        labels[step - 1]
                    ),
                ),
                Err(e) => CommandOutput::fail(1, e.to_string()),
            }
        }
    }
}

fn chain_report(
    f: &Fan,
    labels: &[String],
    chain: &[DivisorSubgroup],
    shadow: bool,
) -> Result<String, TowerError> {
    let t = run_tower(f, chain)?;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# chain of {} subgroups; local target {}",
        chain.len(),
        t.target
    );
    for (i, v) in t.verdicts.iter().enumerate() {
        let witness = v.witnesses.first().map_or_else(
            || "-".to_string(),
            |w| {
                format!(
                    "{}@cone{}",
                    labels.get(i).map_or("?", String::as_str),
                    w.cone
                )
            },
        );
        let _ = writeln!(
            s,
            "{} cox {} {witness}",
            i + 1,
            if v.is_torsor() {
                "torsor"
            } else {
                "not-torsor"
            }
        );
        let _ = writeln!(s, "# image {}", t.images[i]);
    }
    let _ = writeln!(s, "stabilization index {}", t.stabilization_index);
    if shadow {
        let base_ok = klt_report(&ToricPair::without_boundary(f.clone()));
        if let Some(note) = base_ok.note.filter(|_| !base_ok.klt) {
            let _ = writeln!(s, "# klt-shadow skipped: base not Q-Gorenstein ({note})");
        } else {
            for (i, n) in chain.iter().enumerate() {
                let space = relative_cox_fan_by_basis(f, n)?;
                let reports = klt_shadow(&space);
                let good = reports.iter().filter(|r| r.klt).count();
                let _ = writeln!(
                    s,
                    "# klt-shadow step {}: {good}/{} lifted charts klt",
                    i + 1,
                    reports.len()
                );
            }
        }
    }
    Ok(s)
}

#[derive(Parser, Debug)]
#[command(
    name = "toric",
    version,
    about = "Toric fans, class groups and relative Cox spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Per-cone data, class groups and the Weil-mod-Cartier table.
    Analyze { file: PathBuf },
    /// Check one named divisor.
    Divisor {
        file: PathBuf,
        label: String,
        #[arg(long, value_enum, default_value = "cartier")]
        check: DivisorCheck,
    },
    /// Relative Cox space of a named subgroup.
    Cox {
        file: PathBuf,
        label: Option<String>,
        #[arg(long, value_enum, default_value = "verdicts")]
        emit: CoxEmit,
        /// Use every invariant divisor.
        #[arg(long)]
        full: bool,
    },
    /// Run a subgroup chain or the iterated cover demo.
    Tower {
        file: Option<PathBuf>,
        #[arg(long, num_args = 0.., conflicts_with = "demo_iteration2")]
        chain: Option<Vec<String>>,
        /// `N K0,K1,...`
        #[arg(long, num_args = 2, value_names = ["N", "DEGREES"])]
        demo_iteration2: Option<Vec<String>>,
        /// Use every label in the Cox steps of the demo.
        #[arg(long, requires = "demo_iteration2")]
        full_labels: bool,
        #[arg(long)]
        klt_shadow: bool,
    },
}

fn read(path: &PathBuf) -> Result<String, CommandOutput> {
    std::fs::read_to_string(path).map_err(|e| {
        CommandOutput::fail(EXIT_PARSE, format!("cannot read {}: {e}", path.display()))
    })
}

fn parse_demo(args: &[String]) -> Result<(usize, Vec<usize>), CommandOutput> {
    let bad = |what: &str| CommandOutput::fail(EXIT_PARSE, format!("bad --demo-iteration2 {what}"));
    let n = args[0].parse().map_err(|_| bad("n"))?;
    let degrees = args[1]
        .split(',')
        .map(|k| k.trim().parse())
        .collect::<Result<Vec<usize>, _>>()
        .map_err(|_| bad("degrees"))?;
    Ok((n, degrees))
}

pub fn run(cli: Cli) -> CommandOutput {
    let result = match cli.command {
        Command::Analyze { file } => read(&file).map(|t| cmd_analyze(&t)),
        Command::Divisor { file, label, check } => {
            read(&file).map(|t| cmd_divisor(&t, &label, check))
        }
        Command::Cox {
            file,
            label,
            emit,
            full,
        } => read(&file).map(|t| cmd_cox(&t, label.as_deref(), full, emit)),
        Command::Tower {
            file,
            chain,
            demo_iteration2,
            full_labels,
            klt_shadow,
        } => (|| {
            let mode = match demo_iteration2 {
                Some(args) => {
                    let (n, degrees) = parse_demo(&args)?;
                    TowerMode::Iteration2 {
                        n,
                        degrees,
                        full: full_labels,
                    }
                }
                None => TowerMode::Chain {
                    labels: chain.unwrap_or_default(),
                    klt_shadow,
                },
            };
            let text = file.as_ref().map(read).transpose()?;
            Ok(cmd_tower(text.as_deref(), &mode))
        })(),
    };
    result.unwrap_or_else(|e| e)
}
