//! The `ratg` command: argument definitions and verb dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use ratg_core::automata::{
    compile, enumerate, image, intersect_bounded, member_bounded, preimage_finite_kernel, pump,
    subgroup_generators, GroupAutomaton, GroupHom, Membership,
};
use ratg_core::groups::{Group, GroupElement, GroupSpec, IntMatrix};
use ratg_core::presburger::{decide_empty, decide_equal, decide_inclusion, decide_with, QeConfig, SetExpr};
use ratg_core::semilinear::SemilinearSet;
use ratg_core::witnesses::{
    run as run_witness, HeisenbergConfig, LamplighterConfig, MetabelianConfig, OrbitConfig, Verdict,
    WitnessConfig, WitnessReport, WITNESS_NAMES,
};

use crate::error::CliError;
use crate::parse::{parse_expr, parse_formula, parse_spec, parse_word};

/// Environment variable overriding the lcm guardrail of quantifier
/// elimination.
pub const MAX_LCM_ENV: &str = "RATG_MAX_LCM";

#[derive(Debug, Parser)]
#[command(name = "ratg", version, about = "Rational subsets of groups: enumerate, intersect, pump, decide")]
struct Cli {
    /// Group spec, e.g. 'group kind=free_abelian rank=2'
    #[arg(long, global = true, conflicts_with = "spec_file")]
    spec: Option<String>,
    /// File holding the group spec
    #[arg(long = "spec-file", global = true, value_name = "PATH")]
    spec_file: Option<PathBuf>,
    /// Alias a generator name for a word, e.g. --gen w='e1 e2'
    #[arg(long = "gen", global = true, value_name = "NAME=WORD")]
    gens: Vec<String>,
    /// Stable `kind<TAB>payload` records instead of plain text
    #[arg(long, global = true)]
    porcelain: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Elements accepted along paths of at most --max edges
    Enumerate {
        expr: String,
        #[arg(long, default_value_t = 6)]
        max: usize,
    },
    /// Bounded membership test
    Member {
        expr: String,
        word: String,
        #[arg(long, default_value_t = 6)]
        max: usize,
    },
    /// Intersection of two rational subsets
    Intersect {
        expr1: String,
        expr2: String,
        /// Bounded intersection of the two enumerations
        #[arg(long, conflicts_with = "exact")]
        max: Option<usize>,
        /// Exact semilinear intersection (free abelian groups only)
        #[arg(long)]
        exact: bool,
    },
    /// Pumping witness a·q*·b inside the set
    Pump {
        expr: String,
        #[arg(long, default_value_t = 12)]
        max: usize,
    },
    /// Generators of the subgroup generated by the set
    Gens { expr: String },
    /// Image under a homomorphism from the --spec group
    Image {
        expr: String,
        /// Target group spec
        #[arg(long)]
        target: String,
        /// Image of a source generator, e.g. --map e1='e1 e2'
        #[arg(long = "map", value_name = "GEN=WORD")]
        map: Vec<String>,
        #[arg(long, default_value_t = 6)]
        max: usize,
    },
    /// Preimage under a homomorphism into the --spec group with finite kernel
    Preimage {
        expr: String,
        /// Source group spec
        #[arg(long)]
        source: String,
        /// Image of a source generator, e.g. --map c1=1
        #[arg(long = "map", value_name = "GEN=WORD")]
        map: Vec<String>,
        /// Kernel element as a source word (repeat for each element)
        #[arg(long = "kernel", value_name = "WORD")]
        kernel: Vec<String>,
        /// Lift of a target generator, e.g. --section e1=e1
        #[arg(long = "section", value_name = "GEN=WORD")]
        section: Vec<String>,
        #[arg(long, default_value_t = 6)]
        max: usize,
    },
    /// Exact semilinear description (free abelian groups only)
    Semilinear { expr: String },
    /// Decide a Presburger sentence or a relation between two sets
    Decide(DecideArgs),
    /// Run a bounded witness and print its report
    Witness {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(WITNESS_NAMES))]
        name: String,
        /// Witness parameter, e.g. --param N=8
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct DecideArgs {
    /// Closed formula, e.g. 'A x. E y. x = 2y | x = 2y + 1'
    formula: Option<String>,
    /// Is the intersection of the two sets empty?
    #[arg(long, num_args = 2, value_names = ["EXPR1", "EXPR2"])]
    empty: Option<Vec<String>>,
    /// Is the first set contained in the second?
    #[arg(long, num_args = 2, value_names = ["EXPR1", "EXPR2"])]
    subset: Option<Vec<String>>,
    /// Are the two sets equal?
    #[arg(long, num_args = 2, value_names = ["EXPR1", "EXPR2"])]
    equal: Option<Vec<String>>,
}

/// Runs `ratg` on `args` (program name first) and returns the exit code:
/// 0 on success, 1 on usage or parse errors, 2 when a witness finds a
/// violation.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

struct Printer<'a> {
    out: &'a mut dyn Write,
    porcelain: bool,
}

impl Printer<'_> {
    /// One record: `kind<TAB>payload` in porcelain mode, `plain` otherwise.
    fn record(&mut self, kind: &str, payload: &str, plain: &str) -> Result<(), CliError> {
        if self.porcelain {
            writeln!(self.out, "{kind}\t{payload}")?;
        } else {
            writeln!(self.out, "{plain}")?;
        }
        Ok(())
    }

    fn elements(&mut self, kind: &str, group: &Group, items: &[GroupElement]) -> Result<(), CliError> {
        for r in sorted_renderings(group, items) {
            self.record(kind, &r, &r)?;
        }
        Ok(())
    }
}

/// Distinct elements rendered and sorted by their rendering.
fn sorted_renderings(group: &Group, items: &[GroupElement]) -> Vec<String> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out: Vec<String> =
        items.iter().filter(|g| seen.insert(group.key(g))).map(|g| g.to_string()).collect();
    out.sort();
    out
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, CliError> {
    let mut p = Printer { out, porcelain: cli.porcelain };
    match &cli.command {
        Command::Enumerate { expr, max } => {
            let group = cli.group()?;
            let aut = compile_in(expr, &group)?;
            p.elements("element", &group, &enumerate(&aut, *max)?)?;
        }
        Command::Member { expr, word, max } => {
            let group = cli.group()?;
            let aut = compile_in(expr, &group)?;
            let g = group.eval_word(&parse_word(word)?)?;
            match member_bounded(&aut, &g, *max)? {
                Membership::Yes => p.record("member", "yes", "yes")?,
                Membership::Unknown => p.record(
                    "member",
                    "unknown",
                    &format!("unknown (no accepting path with at most {max} edges)"),
                )?,
            }
        }
        Command::Intersect { expr1, expr2, max, exact } => {
            let group = cli.group()?;
            let a1 = compile_in(expr1, &group)?;
            let a2 = compile_in(expr2, &group)?;
            if *exact {
                let s1 = SemilinearSet::from_automaton(&a1)?;
                let s2 = SemilinearSet::from_automaton(&a2)?;
                let s = s1.intersect(&s2)?.to_string();
                p.record("semilinear", &s, &s)?;
            } else {
                p.elements("element", &group, &intersect_bounded(&a1, &a2, max.unwrap_or(6))?)?;
            }
        }
        Command::Pump { expr, max } => {
            let group = cli.group()?;
            let aut = compile_in(expr, &group)?;
            match pump(&aut, *max)? {
                None => p.record("pump", "none", "no pumping witness (the set may be finite)")?,
                Some(w) => {
                    let n = w.normalized(&group)?;
                    let payload = format!("a={} q={} b={}", w.a, w.q, w.b);
                    p.record("pump", &payload, &format!("a = {}\nq = {}\nb = {}", w.a, w.q, w.b))?;
                    let payload = format!("a={} q={} b={}", n.a, n.q, n.b);
                    p.record("normalized", &payload, &format!("normalized: a = {}, q = {}, b = {}", n.a, n.q, n.b))?;
                }
            }
        }
        Command::Gens { expr } => {
            let group = cli.group()?;
            let aut = compile_in(expr, &group)?;
            p.elements("generator", &group, &subgroup_generators(&aut)?)?;
        }
        Command::Image { expr, target, map, max } => {
            let source = cli.group()?;
            let target = Group::new(parse_spec(target)?)?;
            let aut = compile_in(expr, &source)?;
            let hom = GroupHom::new(source, target.clone(), assignments(map, &target)?)?;
            let img = image(&aut, &hom)?;
            automaton_summary(&mut p, &img)?;
            p.elements("element", &target, &enumerate(&img, *max)?)?;
        }
        Command::Preimage { expr, source, map, kernel, section, max } => {
            let target = cli.group()?;
            let source = Group::new(parse_spec(source)?)?;
            let aut = compile_in(expr, &target)?;
            let images = assignments(map, &target)?;
            let kernel: Vec<GroupElement> =
                kernel.iter().map(|w| Ok(source.eval_word(&parse_word(w)?)?)).collect::<Result<_, CliError>>()?;
            let section = assignments(section, &source)?;
            let hom = GroupHom::new(source.clone(), target, images)?.with_finite_kernel(kernel, section)?;
            let pre = preimage_finite_kernel(&aut, &hom)?;
            automaton_summary(&mut p, &pre)?;
            p.elements("element", &source, &enumerate(&pre, *max)?)?;
        }
        Command::Semilinear { expr } => {
            let group = cli.group()?;
            let s = SemilinearSet::from_automaton(&compile_in(expr, &group)?)?.to_string();
            p.record("semilinear", &s, &s)?;
        }
        Command::Decide(args) => {
            let cfg = qe_config()?;
            let start = Instant::now();
            let answer = if let Some(text) = &args.formula {
                let parsed = parse_formula(text)?;
                decide_with(&parsed.formula, &cfg)?
            } else {
                let group = cli.group()?;
                let sets = |pair: &Vec<String>| -> Result<(SemilinearSet, SemilinearSet), CliError> {
                    let s1 = SemilinearSet::from_automaton(&compile_in(&pair[0], &group)?)?;
                    let s2 = SemilinearSet::from_automaton(&compile_in(&pair[1], &group)?)?;
                    Ok((s1, s2))
                };
                if let Some(pair) = &args.empty {
                    let (s1, s2) = sets(pair)?;
                    decide_empty(&SetExpr::inter(SetExpr::set(s1), SetExpr::set(s2)), &cfg)?
                } else if let Some(pair) = &args.subset {
                    let (s1, s2) = sets(pair)?;
                    decide_inclusion(&s1, &s2, &cfg)?
                } else if let Some(pair) = &args.equal {
                    let (s1, s2) = sets(pair)?;
                    decide_equal(&s1, &s2, &cfg)?
                } else {
                    return Err(CliError::usage("decide needs a formula or one of --empty, --subset, --equal"));
                }
            };
            let elapsed = start.elapsed();
            let answer = answer.to_string();
            p.record("decision", &answer, &answer)?;
            writeln!(err, "stats: elapsed_ms={:.3}", elapsed.as_secs_f64() * 1000.0)?;
        }
        Command::Witness { name, params } => {
            let cfg = witness_config(cli, name, params)?;
            let report = run_witness(&cfg)?;
            print_report(&mut p, &report)?;
            return Ok(match report.verdict() {
                Verdict::ConsistentWithPaper => 0,
                Verdict::ViolationFound => 2,
            });
        }
    }
    Ok(0)
}

impl Cli {
    fn spec(&self) -> Result<Option<GroupSpec>, CliError> {
        let text = match (&self.spec, &self.spec_file) {
            (Some(s), _) => s.clone(),
            (None, Some(path)) => std::fs::read_to_string(path)?,
            (None, None) => return Ok(None),
        };
        Ok(Some(parse_spec(text.trim())?))
    }

    /// The `--spec` group with the `--gen` aliases applied.
    fn group(&self) -> Result<Group, CliError> {
        let spec = self.spec()?.ok_or_else(|| CliError::usage("this command needs --spec or --spec-file"))?;
        self.group_of(spec)
    }

    fn group_of(&self, spec: GroupSpec) -> Result<Group, CliError> {
        let mut group = Group::new(spec)?;
        for entry in &self.gens {
            let (name, word) = split_assignment(entry)?;
            let element = group.eval_word(&parse_word(word)?)?;
            group.set_alias(name, element)?;
        }
        Ok(group)
    }
}

fn compile_in(expr: &str, group: &Group) -> Result<GroupAutomaton, CliError> {
    Ok(compile(&parse_expr(expr)?, group)?)
}

fn split_assignment(entry: &str) -> Result<(&str, &str), CliError> {
    match entry.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim(), v.trim())),
        _ => Err(CliError::usage(format!("expected NAME=VALUE, got `{entry}`"))),
    }
}

/// `NAME=WORD` entries with the words evaluated in `group`.
fn assignments(entries: &[String], group: &Group) -> Result<Vec<(String, GroupElement)>, CliError> {
    entries
        .iter()
        .map(|e| {
            let (name, word) = split_assignment(e)?;
            Ok((name.to_string(), group.eval_word(&parse_word(word)?)?))
        })
        .collect()
}

fn automaton_summary(p: &mut Printer<'_>, aut: &GroupAutomaton) -> Result<(), CliError> {
    let payload = format!("states={} edges={}", aut.num_states(), aut.edges().len());
    p.record("automaton", &payload, &format!("automaton: {} states, {} edges", aut.num_states(), aut.edges().len()))
}

fn qe_config() -> Result<QeConfig, CliError> {
    match std::env::var(MAX_LCM_ENV) {
        Ok(v) => {
            let max_lcm: BigInt =
                v.trim().parse().map_err(|_| CliError::usage(format!("{MAX_LCM_ENV} must be an integer, got `{v}`")))?;
            Ok(QeConfig { max_lcm })
        }
        Err(_) => Ok(QeConfig::default()),
    }
}

/// Typed view of the `--param` list that reports unused keys.
struct Params {
    entries: Vec<(String, String)>,
}

impl Params {
    fn new(raw: &[String]) -> Result<Params, CliError> {
        let mut entries: Vec<(String, String)> = Vec::new();
        for e in raw {
            let (k, v) = split_assignment(e)?;
            if entries.iter().any(|(key, _)| key == k) {
                return Err(CliError::usage(format!("parameter `{k}` given twice")));
            }
            entries.push((k.to_string(), v.to_string()));
        }
        Ok(Params { entries })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        let i = self.entries.iter().position(|(k, _)| k == key)?;
        Some(self.entries.remove(i).1)
    }

    fn number<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>, CliError> {
        self.take(key)
            .map(|v| v.parse().map_err(|_| CliError::usage(format!("parameter `{key}` must be a number, got `{v}`"))))
            .transpose()
    }

    fn finish(self, witness: &str) -> Result<(), CliError> {
        match self.entries.first() {
            Some((k, _)) => Err(CliError::usage(format!("unknown parameter `{k}` for {witness}"))),
            None => Ok(()),
        }
    }
}

fn witness_config(cli: &Cli, name: &str, raw: &[String]) -> Result<WitnessConfig, CliError> {
    let mut params = Params::new(raw)?;
    let spec = cli.spec()?;
    let expect_kind = |kind: &str| -> Result<(), CliError> {
        match &spec {
            Some(s) if s.kind() != kind => Err(CliError::usage(format!("{name} needs a {kind} group, got {}", s.kind()))),
            _ => Ok(()),
        }
    };
    let cfg = match name {
        "polycyclic_orbit" => {
            expect_kind("semidirect")?;
            let spec = match spec.clone() {
                Some(s) => s,
                None => GroupSpec::Semidirect { matrix: IntMatrix::from_i64(&[&[0, -1], &[1, 0]])? },
            };
            let group = cli.group_of(spec.clone())?;
            let x = match params.take("x") {
                Some(word) => group.eval_word(&parse_word(&word)?)?,
                None => group.generator("e1")?,
            };
            let x = match x {
                GroupElement::Semidirect { v, k } if k == BigInt::from(0) => v,
                other => return Err(CliError::usage(format!("x must lie in the normal subgroup A, got {other}"))),
            };
            let bound = params.number("N")?.unwrap_or(8);
            WitnessConfig::PolycyclicOrbit(OrbitConfig { spec, x, bound })
        }
        "heisenberg_diagonal" => {
            expect_kind("heisenberg")?;
            let mut group = cli.group_of(GroupSpec::Heisenberg)?;
            let mut cfg = HeisenbergConfig::default();
            if let Some(word) = params.take("w") {
                cfg.w = group.eval_word(&parse_word(&word)?)?;
            }
            // Inside g and f, `w` names the witness element w unless --gen rebinds it.
            if !cli.gens.iter().any(|e| e.trim_start().starts_with("w=")) {
                group.set_alias("w", cfg.w.clone())?;
            }
            for (key, slot) in [("g", &mut cfg.g), ("f", &mut cfg.f)] {
                if let Some(word) = params.take(key) {
                    *slot = group.eval_word(&parse_word(&word)?)?;
                }
            }
            cfg.bound = params.number("N")?.unwrap_or(cfg.bound);
            WitnessConfig::HeisenbergDiagonal(cfg)
        }
        "metabelian_r1r4" => {
            expect_kind("metabelian")?;
            let f: Vec<BigInt> = match &spec {
                Some(GroupSpec::Metabelian { f }) => f.clone(),
                _ => vec![2.into(), (-3).into()],
            };
            let mut cfg = MetabelianConfig { f, ..MetabelianConfig::new(&[]) };
            cfg.d = params.number("d")?.unwrap_or(cfg.d);
            cfg.p = params.number("p")?.or(cfg.p);
            cfg.bound = params.number("N")?.unwrap_or(cfg.bound);
            cfg.seed = params.number("seed")?.unwrap_or(cfg.seed);
            WitnessConfig::MetabelianR1R4(cfg)
        }
        "lamplighter_howson" => {
            expect_kind("lamplighter")?;
            let spec = spec.clone().unwrap_or_else(|| GroupSpec::lamplighter(2));
            let GroupSpec::Lamplighter { modulus } = spec.clone() else {
                return Err(CliError::usage("lamplighter_howson needs a lamplighter group"));
            };
            let group = cli.group_of(spec)?;
            let list = |text: String| -> Result<Vec<GroupElement>, CliError> {
                text.split(',')
                    .filter(|w| !w.trim().is_empty())
                    .map(|w| Ok(group.eval_word(&parse_word(w)?)?))
                    .collect()
            };
            let h = list(params.take("H").unwrap_or_else(|| "t,a".into()))?;
            let k = list(params.take("K").unwrap_or_else(|| "t".into()))?;
            let radius = params.number("N")?.unwrap_or(6);
            WitnessConfig::LamplighterHowson(LamplighterConfig { modulus, h, k, radius })
        }
        other => return Err(CliError::usage(format!("unknown witness `{other}`"))),
    };
    params.finish(name)?;
    Ok(cfg)
}

fn evidence(fact: &ratg_core::witnesses::Fact) -> String {
    let parts: Vec<String> = fact.evidence.iter().map(|(k, v)| format!("{k}={v}")).collect();
    parts.join(" ")
}

fn print_report(p: &mut Printer<'_>, report: &WitnessReport) -> Result<(), CliError> {
    let passed = report.facts.iter().filter(|f| f.pass).count();
    let bounds: Vec<String> = report.bounds.iter().map(|(k, v)| format!("{k}={v}")).collect();
    if p.porcelain {
        p.record("witness", &report.name, "")?;
        p.record("verdict", &report.verdict().to_string(), "")?;
        for b in &bounds {
            p.record("bound", b, "")?;
        }
        for fact in &report.facts {
            let status = if fact.pass { "pass" } else { "fail" };
            p.record("fact", &format!("{} {status} {}", fact.id, evidence(fact)).trim_end().to_string(), "")?;
        }
        for note in &report.notes {
            p.record("note", note, "")?;
        }
        return Ok(());
    }
    let out = &mut *p.out;
    writeln!(out, "{}: {} ({passed} of {} facts pass)", report.name, report.verdict(), report.facts.len())?;
    writeln!(out, "bounds: {}", bounds.join(", "))?;
    for fact in &report.facts {
        let status = if fact.pass { "pass" } else { "FAIL" };
        writeln!(out, "  [{status}] {}: {}", fact.id, fact.description)?;
    }
    for note in &report.notes {
        writeln!(out, "note: {note}")?;
    }
    writeln!(out)?;
    for fact in &report.facts {
        let status = if fact.pass { "pass" } else { "fail" };
        writeln!(out, "{}", format!("fact {} {status} {}", fact.id, evidence(fact)).trim_end())?;
    }
    writeln!(out, "verdict {}", report.verdict())?;
    Ok(())
}
