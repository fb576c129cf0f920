//! `ratrep`: catalog listing, required pairs, representation export, Wedderburn
//! decompositions and the verification suite.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use ratrep_core::arith::phi_prime_power;
use ratrep_core::catalog::{entries_for, ingest, instantiate, GroupInstance};
use ratrep_core::format::word_text;
use ratrep_core::pairs::{required_pairs, verify_pair, Route};
use ratrep_core::pc::{Elem, PcGroup, Subgroup};
use ratrep_core::rep::{all_rational_irreps, export_text};
use ratrep_core::verify::{verify_group, GroupReport, CHECKS};
use ratrep_core::wedderburn::decompose;

#[derive(Parser)]
#[command(name = "ratrep", version, about = "Rational representations and Wedderburn decompositions of groups of order p^5")]
struct Cli {
    /// Worker threads for per-group and per-orbit parallelism.
    #[arg(long, global = true, env = "RATREP_WORKERS")]
    workers: Option<usize>,
    /// Print progress lines to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct Selector {
    /// Catalog entry name, or `all`.
    #[arg(long, conflicts_with = "file")]
    group: Option<String>,
    /// Presentation file in the ingestion format.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Prime `p`.
    #[arg(long, value_parser = parse_prime)]
    p: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Formula,
    Oracle,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog entries instantiable at `p` with their invariants.
    List {
        #[arg(long, value_parser = parse_prime)]
        p: u32,
    },
    /// Required pairs, one row per Galois orbit of irreducible characters.
    Pairs {
        #[command(flatten)]
        sel: Selector,
    },
    /// Build, verify and export the irreducible rational representations.
    Reps {
        #[command(flatten)]
        sel: Selector,
        /// Output directory.
        #[arg(long, default_value = "reps")]
        out: PathBuf,
    },
    /// Wedderburn decomposition of the rational group algebra.
    Wedderburn {
        #[command(flatten)]
        sel: Selector,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Run every check; exits nonzero on any failure.
    Verify {
        #[command(flatten)]
        sel: Selector,
        /// Every catalog entry at `p`.
        #[arg(long)]
        all: bool,
        /// Machine-readable JSON report path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Validate a presentation file and echo it with its invariants.
    Ingest {
        file: PathBuf,
    },
}

fn parse_prime(s: &str) -> std::result::Result<u32, String> {
    match s.parse::<u32>() {
        Ok(p) if ratrep_core::pc::SUPPORTED_PRIMES.contains(&p) => Ok(p),
        _ => Err(format!("p must be one of {:?}", ratrep_core::pc::SUPPORTED_PRIMES)),
    }
}

/// Resolved run configuration.
struct RunConfig {
    groups: Vec<GroupInstance>,
    verbose: bool,
}

impl RunConfig {
    fn resolve(sel: &Selector, all: bool, verbose: bool) -> Result<Self> {
        let groups = if let Some(path) = &sel.file {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let inst = ingest(&text).with_context(|| format!("ingesting {}", path.display()))?;
            if let Some(p) = sel.p {
                if p != inst.p() {
                    bail!("{} is a presentation at p = {}, not {p}", path.display(), inst.p());
                }
            }
            vec![inst]
        } else {
            let p = sel.p.ok_or_else(|| anyhow!("--p is required with a catalog selector"))?;
            let names: Vec<&str> = match sel.group.as_deref() {
                Some("all") | None if all || sel.group.is_some() => entries_for(p).iter().map(|e| e.name).collect(),
                Some(name) => vec![name],
                None => bail!("select a group with --group NAME, --group all, --all or --file PATH"),
            };
            names
                .par_iter()
                .map(|n| instantiate(n, p).with_context(|| format!("instantiating {n} at p = {p}")))
                .collect::<Result<Vec<_>>>()?
        };
        if groups.is_empty() {
            bail!("selector resolves to no groups");
        }
        Ok(RunConfig { groups, verbose })
    }

    fn progress(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("{}", msg.as_ref());
        }
    }
}

fn elem_text(g: &PcGroup, x: Elem) -> String {
    let w: Vec<(usize, i64)> =
        g.exponents(x).iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, &e)| (i, e as i64)).collect();
    word_text(&w)
}

/// Greedy generating set by ascending element index.
fn small_gens(g: &PcGroup, h: &Subgroup) -> Vec<Elem> {
    let mut gens = Vec::new();
    let mut cur = g.trivial();
    for &x in h.members() {
        if cur.order() == h.order() {
            break;
        }
        if !cur.contains(x) {
            gens.push(x);
            cur = g.closure(&gens);
        }
    }
    gens
}

fn cmd_list(p: u32) -> Result<String> {
    let rows = entries_for(p)
        .par_iter()
        .map(|e| {
            let inst = instantiate(e.name, p)?;
            let g = &inst.group;
            let cd: Vec<String> = g.char_degree_counts()?.keys().map(u64::to_string).collect();
            Ok(format!(
                "{:<18} {:<7} {:>6} {:>4} {:>4} {{{}}}\n",
                e.name,
                inst.family.to_string(),
                g.order(),
                g.center().order(),
                g.derived_subgroup().order(),
                cd.join(",")
            ))
        })
        .collect::<ratrep_core::Result<Vec<_>>>()?;
    let mut s = format!("{:<18} {:<7} {:>6} {:>4} {:>4} {}\n", "name", "family", "order", "|Z|", "|G'|", "cd");
    s.extend(rows);
    Ok(s)
}

fn pairs_text(inst: &GroupInstance) -> Result<String> {
    let g = &inst.group;
    let ps = required_pairs(inst).with_context(|| format!("required pairs of {}", inst.name))?;
    let mut s = format!("group {} ({}, p = {})\n", inst.name, inst.family, inst.p());
    match (&ps.route, &ps.note) {
        (Route::ClosedForm, _) => s.push_str("route closed-form\n"),
        (Route::Search, Some(n)) => s.push_str(&format!("route search ({n})\n")),
        (Route::Search, None) => s.push_str("route search\n"),
    }
    s.push_str("orbit degree d orbit_size kernel_order H psi\n");
    for (k, pr) in ps.pairs.iter().enumerate() {
        let chi = verify_pair(g, pr).with_context(|| format!("{} orbit {k}", inst.name))?;
        let h: Vec<String> = small_gens(g, &pr.subgroup).iter().map(|&x| elem_text(g, x)).collect();
        let n = pr.psi.modulus();
        let psi: Vec<String> = pr
            .psi
            .gens()
            .iter()
            .zip(pr.psi.image_exponents())
            .map(|(&x, &v)| format!("{} -> zeta_{n}^{v}", elem_text(g, x)))
            .collect();
        s.push_str(&format!(
            "{k} {} {} {} {} <{}> {}\n",
            pr.degree,
            pr.d,
            phi_prime_power(pr.d),
            chi.kernel(g).order(),
            h.join(", "),
            psi.join(", ")
        ));
    }
    Ok(s)
}

fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect()
}

fn cmd_reps(cfg: &RunConfig, out: &Path) -> Result<String> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut manifest = String::from("group orbit degree chi_degree d file\n");
    let mut summary = String::new();
    for inst in &cfg.groups {
        let t = Instant::now();
        let ps = required_pairs(inst)?;
        let reps = all_rational_irreps(&inst.group, &ps.pairs).with_context(|| format!("representations of {}", inst.name))?;
        for (k, rep) in reps.iter().enumerate() {
            let file = format!("{}_p{}_orbit{k}.txt", file_stem(&inst.name), inst.p());
            fs::write(out.join(&file), export_text(&inst.name, k, rep))?;
            manifest.push_str(&format!("{} {k} {} {} {} {file}\n", inst.name, rep.degree, rep.chi_degree, rep.d));
        }
        let degrees: Vec<String> = reps.iter().map(|r| r.degree.to_string()).collect();
        summary.push_str(&format!("{}: {} representations, degrees {}\n", inst.name, reps.len(), degrees.join(" ")));
        cfg.progress(format!("{} done in {:.1?}", inst.name, t.elapsed()));
    }
    fs::write(out.join("manifest.txt"), manifest)?;
    Ok(summary)
}

fn cmd_wedderburn(cfg: &RunConfig, method: Method) -> Result<String> {
    let mut s = String::new();
    for inst in &cfg.groups {
        let ps = required_pairs(inst)?;
        let rep = decompose(inst, &ps.pairs).with_context(|| format!("decomposition of {}", inst.name))?;
        s.push_str(&format!("group {} ({}, p = {})\n", inst.name, inst.family, inst.p()));
        let show_formula = matches!(method, Method::Formula | Method::Both);
        let show_oracle = matches!(method, Method::Oracle | Method::Both);
        if show_formula {
            match (&rep.formula, &rep.formula_note) {
                (Some(f), _) => s.push_str(&format!("[formula]\n{}", f.to_text())),
                (None, Some(n)) if matches!(method, Method::Formula) => bail!("{}: {n}", inst.name),
                (None, n) => s.push_str(&format!("[formula] unavailable: {}\n", n.clone().unwrap_or_default())),
            }
        }
        if show_oracle {
            s.push_str(&format!("[oracle]\n{}", rep.oracle.to_text()));
        }
        if matches!(method, Method::Both) && rep.formula.is_some() {
            s.push_str("formula = oracle\n");
        }
    }
    Ok(s)
}

fn report_json(r: &GroupReport) -> serde_json::Value {
    let checks: serde_json::Map<String, serde_json::Value> =
        r.checks.iter().map(|(n, st)| (n.to_string(), json!(st.to_string()))).collect();
    json!({
        "group": r.name,
        "family": r.family,
        "p": r.p,
        "passed": r.passed(),
        "checks": checks,
    })
}

fn cmd_verify(cfg: &RunConfig, report: Option<&Path>) -> Result<(String, bool)> {
    let total = cfg.groups.len();
    let done = std::sync::atomic::AtomicUsize::new(0);
    let t0 = Instant::now();
    let reports: Vec<GroupReport> = cfg
        .groups
        .par_iter()
        .map(|inst| {
            let t = Instant::now();
            let r = verify_group(inst, false);
            let k = done.fetch_add(1, std::sync::atomic::Ordering::SeqCst) + 1;
            cfg.progress(format!(
                "[{k}/{total}] {} {} in {:.1?}",
                inst.name,
                if r.passed() { "pass" } else { "FAIL" },
                t.elapsed()
            ));
            r
        })
        .collect();
    let mut s = format!("{:<18} {}\n", "group", CHECKS.join(" "));
    for r in &reports {
        let cells: Vec<String> = r
            .checks
            .iter()
            .map(|(n, st)| {
                let tag = match st {
                    ratrep_core::verify::Status::Pass => "pass",
                    ratrep_core::verify::Status::Fail(_) => "FAIL",
                    ratrep_core::verify::Status::Skip(_) => "n/a",
                };
                format!("{tag:<width$}", width = n.len())
            })
            .collect();
        s.push_str(&format!("{:<18} {}\n", r.name, cells.join(" ")));
        for (n, st) in &r.checks {
            if st.is_fail() {
                s.push_str(&format!("  {}: {n}: {st}\n", r.name));
            }
        }
    }
    let ok = reports.iter().all(GroupReport::passed);
    let failed = reports.iter().filter(|r| !r.passed()).count();
    s.push_str(&format!("{} groups, {failed} failed\n", reports.len()));
    cfg.progress(format!("verification finished in {:.1?}", t0.elapsed()));
    if let Some(path) = report {
        let doc = json!({ "groups": reports.iter().map(report_json).collect::<Vec<_>>(), "passed": ok });
        fs::write(path, serde_json::to_string_pretty(&doc)? + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok((s, ok))
}

fn cmd_ingest(path: &Path) -> Result<String> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let inst = ingest(&text).with_context(|| format!("ingesting {}", path.display()))?;
    let g = &inst.group;
    let mut s = inst.text.to_text();
    s.push_str(&format!("# order {}\n", g.order()));
    s.push_str(&format!("# |Z| = {}, |G'| = {}\n", g.center().order(), g.derived_subgroup().order()));
    s.push_str(&format!("# family {}\n", inst.family));
    Ok(s)
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring worker pool")?;
    }
    let mut stdout = std::io::stdout().lock();
    let (text, ok) = match &cli.command {
        Command::List { p } => (cmd_list(*p)?, true),
        Command::Pairs { sel } => {
            let cfg = RunConfig::resolve(sel, false, cli.verbose)?;
            let parts = cfg.groups.par_iter().map(pairs_text).collect::<Result<Vec<_>>>()?;
            (parts.concat(), true)
        }
        Command::Reps { sel, out } => (cmd_reps(&RunConfig::resolve(sel, false, cli.verbose)?, out)?, true),
        Command::Wedderburn { sel, method } => {
            (cmd_wedderburn(&RunConfig::resolve(sel, false, cli.verbose)?, *method)?, true)
        }
        Command::Verify { sel, all, report } => {
            cmd_verify(&RunConfig::resolve(sel, *all, cli.verbose)?, report.as_deref())?
        }
        Command::Ingest { file } => (cmd_ingest(file)?, true),
    };
    stdout.write_all(text.as_bytes())?;
    Ok(ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
