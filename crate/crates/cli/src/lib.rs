//! Command-line front end: subgroup enumeration, per-degree surveys, the
//! full verification run, the degree-10 witness and `μ` of a given group.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use permdeg_core::mindeg::mu;
use permdeg_core::pipeline::{
    cache_from_env, survey_degree, sym_classes, verify_up_to, witness_degree_10, Cache, DegreeReport,
};
use permdeg_core::subgroups::{EnumOptions, Strategy};
use permdeg_core::{parse_perm, Error, PermGroup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONTRADICTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "permdeg", version, about = "Minimal faithful permutation degrees and centralizer complements in small symmetric groups")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CacheArgs {
    /// Cache directory; defaults to $PERMDEG_CACHE, else no caching.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    /// Give up after this many subgroup classes.
    #[arg(long, default_value_t = 100_000)]
    max_classes: usize,
    /// Give up after this many seconds of enumeration.
    #[arg(long)]
    time_limit: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate the conjugacy classes of subgroups of Sym(m).
    Enumerate {
        #[arg(short)]
        m: usize,
        /// Use the cyclic-extension strategy instead of element extension.
        #[arg(long)]
        cyclic: bool,
        #[command(flatten)]
        cache: CacheArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Survey the minimally embedded subgroups of Sym(m).
    Survey {
        #[arg(short)]
        m: usize,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        cache: CacheArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Survey every degree from 2 to MAX.
    Verify {
        #[arg(long)]
        max: usize,
        /// Stop at degree 8 even if MAX is 9.
        #[arg(long)]
        skip_9: bool,
        #[command(flatten)]
        cache: CacheArgs,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Certify the degree-10 example G(2,2,5).
    Witness,
    /// Minimal faithful permutation degree of a group.
    Mu {
        /// File with lines `degree: n` and `gens: (...), (...)`.
        #[arg(long, conflicts_with_all = ["gens", "degree"])]
        file: Option<PathBuf>,
        /// Comma-separated generators in cycle notation.
        #[arg(long, requires = "degree")]
        gens: Option<String>,
        #[arg(long)]
        degree: Option<usize>,
    },
}

impl CacheArgs {
    fn resolve(&self) -> Cache {
        match &self.cache {
            Some(d) => Cache::at(d),
            None => cache_from_env(),
        }
    }
}

impl BudgetArgs {
    fn options(&self, strategy: Strategy) -> EnumOptions {
        EnumOptions {
            strategy,
            max_classes: self.max_classes,
            time_budget: self.time_limit.map(Duration::from_secs),
        }
    }
}

/// Runs the CLI on `argv` (including the program name), writing to stdout.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    run_with(argv, &mut out)
}

/// Runs the CLI, writing reports to `out` and diagnostics to stderr.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // a global pool may already exist when called repeatedly in-process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded(_) => EXIT_BUDGET,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Error> {
    match command {
        Command::Enumerate { m, cyclic, cache, budget } => {
            let strategy = if cyclic { Strategy::CyclicExtension } else { Strategy::ElementExtension };
            if !(1..=9).contains(&m) {
                return Err(Error::InvalidArgument(format!("degree must be in 1..=9, got {m}")));
            }
            let classes = sym_classes(m, &cache.resolve(), &budget.options(strategy))?;
            writeln!(out, "{:>5}  {:>8}  {:>8}  generators", "class", "order", "size")?;
            for c in &classes {
                writeln!(
                    out,
                    "{:>5}  {:>8}  {:>8}  {}",
                    c.class_id,
                    c.order,
                    c.class_size,
                    c.representative.generator_strings().join(", ")
                )?;
            }
            let total: u128 = classes.iter().map(|c| c.class_size).sum();
            writeln!(out, "Sym({m}): {} classes, {total} subgroups", classes.len())?;
            Ok(EXIT_OK)
        }
        Command::Survey { m, json, cache, budget } => {
            let report = survey_degree(m, &cache.resolve(), &budget.options(Strategy::ElementExtension))?;
            if json {
                writeln!(out, "{}", report.to_json())?;
            } else {
                write_survey(out, &report)?;
            }
            Ok(if report.comp_nonempty { EXIT_CONTRADICTION } else { EXIT_OK })
        }
        Command::Verify { max, skip_9, cache, budget } => {
            let max = if skip_9 { max.min(8) } else { max };
            let mut io_err = None;
            let verdict = verify_up_to(max, &cache.resolve(), &budget.options(Strategy::ElementExtension), |r| {
                if let Err(e) = write_summary(out, r) {
                    io_err.get_or_insert(e);
                }
            })?;
            if let Some(e) = io_err {
                return Err(e.into());
            }
            if verdict.holds {
                writeln!(out, "verdict: no minimally embedded group of degree <= {max} has a centralizer subgroup meeting it trivially")?;
                Ok(EXIT_OK)
            } else {
                writeln!(out, "verdict: CONTRADICTION, a complement exists at degree <= {max}")?;
                Ok(EXIT_CONTRADICTION)
            }
        }
        Command::Witness => {
            let w = witness_degree_10()?;
            writeln!(out, "group: G(2,2,5) = <{}>", w.group.generator_strings().join(", "))?;
            writeln!(out, "order: {}", w.order)?;
            writeln!(out, "mu(G): {}", w.mu_value)?;
            writeln!(out, "centralizer in Sym(10): <{}>", w.centralizer.generator_strings().join(", "))?;
            writeln!(out, "centralizing involution outside G: {}", w.witness_element)?;
            writeln!(out, "order of <G, z>: {}", w.join_order)?;
            writeln!(out, "mu(G x C2): {}", w.product_mu)?;
            let ok = w.order == 1920
                && w.mu_value == 10
                && w.join_order == 2 * w.order
                && w.witness_element.order() == 2
                && w.strict();
            writeln!(
                out,
                "{} {} {} = mu(G) + mu(C2)",
                w.product_mu,
                if w.strict() { "<" } else { ">=" },
                w.mu_value + w.factor_mu
            )?;
            Ok(if ok { EXIT_OK } else { EXIT_CONTRADICTION })
        }
        Command::Mu { file, gens, degree } => {
            let group = match (file, gens, degree) {
                (Some(path), None, None) => read_group_file(&path)?,
                (None, Some(g), Some(n)) => parse_group(&g, n)?,
                _ => return Err(Error::InvalidArgument("give either --file or --gens with --degree".into())),
            };
            let r = mu(&group)?;
            writeln!(out, "{}", r.value)?;
            let mut degrees = r.degrees.clone();
            degrees.sort_unstable();
            let degrees: Vec<String> = degrees.iter().map(|d| d.to_string()).collect();
            if !degrees.is_empty() {
                writeln!(out, "orbits: {}", degrees.join(" + "))?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn multiset<K: Display>(m: &BTreeMap<K, usize>) -> String {
    let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn comp_list(report: &DegreeReport) -> String {
    let parts: Vec<String> = report
        .classes
        .iter()
        .filter_map(|c| c.comp_witness.as_ref().map(|w| format!("{} via {w}", c.class.class_id)))
        .collect();
    format!("[{}]", parts.join(", "))
}

fn write_summary(out: &mut dyn Write, r: &DegreeReport) -> std::io::Result<()> {
    writeln!(
        out,
        "m={}: {} classes, {} minimally embedded, ind {}, comp {}",
        r.degree,
        r.total_classes,
        r.classes.len(),
        multiset(&r.ind_multiset),
        comp_list(r)
    )
}

fn write_survey(out: &mut dyn Write, r: &DegreeReport) -> std::io::Result<()> {
    writeln!(out, "Sym({}): {} subgroup classes, {} minimally embedded", r.degree, r.total_classes, r.classes.len())?;
    writeln!(out, "{:>5}  {:>8}  {:>4}  comp", "class", "order", "ind")?;
    for c in &r.classes {
        let comp = c.comp_witness.as_ref().map_or_else(|| "-".to_string(), |w| w.to_string());
        writeln!(out, "{:>5}  {:>8}  {:>4}  {comp}", c.class.class_id, c.class.order, c.ind)?;
    }
    let inds: Vec<String> = r.ind_list().iter().map(|i| i.to_string()).collect();
    writeln!(out, "Ind: [{}]", inds.join(", "))?;
    writeln!(out, "Ind multiset: {}", multiset(&r.ind_multiset))?;
    writeln!(out, "Comp: {}", comp_list(r))
}

/// Splits `"(1 2)(3 4), (1 3)"` at commas outside parentheses.
pub fn split_generators(text: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(std::mem::take(&mut current));
                continue;
            }
            _ => {}
        }
        current.push(ch);
    }
    parts.push(current);
    parts.into_iter().map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()
}

pub fn parse_group(gens: &str, degree: usize) -> Result<PermGroup, Error> {
    let perms = split_generators(gens)
        .iter()
        .map(|g| parse_perm(g, degree))
        .collect::<Result<Vec<_>, _>>()?;
    PermGroup::new(degree, perms)
}

fn read_group_file(path: &PathBuf) -> Result<PermGroup, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut degree = None;
    let mut gens = None;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| Error::Malformed(format!("expected `key: value`, got {line:?}")))?;
        match key.trim() {
            "degree" => {
                degree = Some(value.trim().parse::<usize>().map_err(|_| Error::Malformed(format!("bad degree {value:?}")))?)
            }
            "gens" => gens = Some(value.trim().to_string()),
            other => return Err(Error::Malformed(format!("unknown key {other:?}"))),
        }
    }
    match (degree, gens) {
        (Some(n), Some(g)) => parse_group(&g, n),
        _ => Err(Error::Malformed("group file needs `degree:` and `gens:` lines".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_respects_parentheses() {
        assert_eq!(split_generators("(1 2)(3 4 5), (1 3)"), vec!["(1 2)(3 4 5)", "(1 3)"]);
        assert_eq!(split_generators("(1,2,3),(4,5)"), vec!["(1,2,3)", "(4,5)"]);
        assert!(split_generators("  ").is_empty());
    }

    #[test]
    fn group_parsing() {
        assert_eq!(parse_group("(1 2)(3 4 5)", 5).unwrap().order(), 6);
        assert!(parse_group("(1 6)", 5).is_err());
    }
}
