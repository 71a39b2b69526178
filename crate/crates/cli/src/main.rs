use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use bredon::equivariant::{brown_check, equivariant_homology, fp0_constructive_witness, BrownVerdict};
use bredon::induction::SubgroupContext;
use bredon::linalg::{AbelianGroupInvariants, FpAbelianGroup};
use bredon::module::{fp_n_report_with, BredonModule, CoverStrategy, Variance};
use bredon::orbit::OrbitCategory;
use bredon::tensor::tor;
use bredon::workspace::{ManifestError, Workspace};
use bredon::Budget;

/// Bredon homology and finiteness checks for finite groups.
#[derive(Parser, Debug)]
#[command(name = "bredon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Manifest file.
    manifest: PathBuf,
    #[arg(long, global = true)]
    family: Option<String>,
    #[arg(long, global = true)]
    complex: Option<String>,
    #[arg(long, global = true)]
    filtration: Option<String>,
    #[arg(long, global = true)]
    module: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Objects, hom-set sizes and generating morphisms of the orbit category.
    Orbitcat(Common),
    /// Bredon homology of a complex, object by object.
    Homology {
        #[arg(long)]
        k: i64,
        #[arg(long)]
        reduced: bool,
        #[command(flatten)]
        common: Common,
    },
    /// A minimal set of subgroups covering the family up to subconjugacy.
    Fp0(Common),
    /// Whether the complex is n-good for the family.
    Good {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Finiteness criterion consistency check on a filtration.
    Brown {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Tor between a right and a left module (defaults: the trivial modules).
    Tor {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        right: Option<String>,
        #[arg(long)]
        left: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Free resolution sizes of a module (default: the trivial right module).
    Resolve {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Equivariant homology with coefficients in a left module (default: trivial).
    Equiv {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Induction and restriction along a subgroup (comma-separated element indices).
    Indres {
        #[arg(long)]
        subgroup: String,
        #[command(flatten)]
        common: Common,
    },
}

/// Errors in the input rather than in the computation.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input<E: std::fmt::Display>(e: E) -> anyhow::Error {
    anyhow::Error::new(InputError(e.to_string()))
}

struct Report {
    json: Value,
    text: String,
    violation: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            let text = if cli.json {
                format!("{}\n", serde_json::to_string_pretty(&report.json).expect("serializable"))
            } else {
                report.text
            };
            let mut out = std::io::stdout().lock();
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            if report.violation {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() || e.downcast_ref::<ManifestError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Orbitcat(c) | Command::Fp0(c) => c,
        Command::Homology { common, .. }
        | Command::Good { common, .. }
        | Command::Brown { common, .. }
        | Command::Tor { common, .. }
        | Command::Resolve { common, .. }
        | Command::Equiv { common, .. }
        | Command::Indres { common, .. } => common,
    }
}

fn run(cmd: &Command) -> Result<Report> {
    let c = common(cmd);
    let ws = Workspace::load(&c.manifest)?;
    let report = match cmd {
        Command::Orbitcat(_) => orbitcat(&ws, c)?,
        Command::Homology { k, reduced, .. } => homology(&ws, c, *k, *reduced)?,
        Command::Fp0(_) => fp0(&ws, c)?,
        Command::Good { n, .. } => good(&ws, c, *n)?,
        Command::Brown { n, .. } => brown(&ws, c, *n)?,
        Command::Tor { k, right, left, .. } => tor_cmd(&ws, c, *k, right.as_deref(), left.as_deref())?,
        Command::Resolve { n, .. } => resolve(&ws, c, *n)?,
        Command::Equiv { k, .. } => equiv(&ws, c, *k)?,
        Command::Indres { subgroup, .. } => indres(&ws, c, subgroup)?,
    };
    Ok(report)
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn object_labels(cat: &OrbitCategory) -> Vec<String> {
    cat.objects()
        .map(|o| format!("Γ/{}", cat.subgroup(o).display(cat.group())))
        .collect()
}

/// The family for a complex: `--family`, the default, or the only family over its group.
fn family_for<'a>(ws: &'a Workspace, c: &Common, complex: &str) -> Result<(&'a str, &'a std::sync::Arc<OrbitCategory>)> {
    if c.family.is_some() || ws.defaults.family.is_some() {
        return Ok(ws.category(c.family.as_deref())?);
    }
    match ws.families_for_complex(complex).as_slice() {
        [one] => Ok(ws.category(Some(one))?),
        other => Err(input(format!(
            "{} families match the group of complex `{complex}`; pass --family",
            other.len()
        ))),
    }
}

fn check_group(ws: &Workspace, family: &str, complex: &str) -> Result<()> {
    if ws.family_groups[family] != ws.complex_groups[complex] {
        return Err(input(format!("family `{family}` and complex `{complex}` use different groups")));
    }
    Ok(())
}

fn orbitcat(ws: &Workspace, c: &Common) -> Result<Report> {
    let (name, cat) = ws.category(c.family.as_deref())?;
    let labels = object_labels(cat);
    let homs: Vec<Vec<usize>> = cat
        .objects()
        .map(|a| cat.objects().map(|b| cat.hom(a, b).len()).collect())
        .collect();
    let morphisms: Vec<Value> = cat
        .morphisms()
        .iter()
        .enumerate()
        .map(|(id, m)| json!({"id": id, "source": m.source, "target": m.target, "rep": m.rep}))
        .collect();
    let gens: Vec<usize> = cat.generating_morphisms().to_vec();
    let mut text = format!("family {name}: {} objects, {} morphisms\n", labels.len(), cat.morphism_count());
    let width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
    for (a, row) in homs.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|n| format!("{n:>3}")).collect();
        let pad = width - labels[a].chars().count();
        writeln!(text, "{}{} |{}", labels[a], " ".repeat(pad), cells.join(""))?;
    }
    writeln!(text, "generating morphisms:")?;
    for &f in &gens {
        writeln!(text, "  {}", cat.describe(f))?;
    }
    Ok(Report {
        json: json!({
            "family": name,
            "objects": labels,
            "hom_sizes": homs,
            "morphisms": morphisms,
            "generators": gens,
        }),
        text,
        violation: false,
    })
}

#[derive(Serialize)]
struct ValueEntry {
    object: String,
    invariants: AbelianGroupInvariants,
    presentation: FpAbelianGroup,
}

fn values_table(cat: &OrbitCategory, m: &BredonModule) -> (Vec<ValueEntry>, String) {
    let labels = object_labels(cat);
    let width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
    let mut text = String::new();
    let entries = cat
        .objects()
        .map(|o| {
            let inv = m.value(o).invariants();
            let pad = width - labels[o].chars().count();
            let _ = writeln!(text, "  {}{}  {}", labels[o], " ".repeat(pad), inv);
            ValueEntry {
                object: labels[o].clone(),
                invariants: inv,
                presentation: m.value(o).clone(),
            }
        })
        .collect();
    (entries, text)
}

fn homology(ws: &Workspace, c: &Common, k: i64, reduced: bool) -> Result<Report> {
    let (xname, x) = ws.complex(c.complex.as_deref())?;
    let (fname, cat) = family_for(ws, c, xname)?;
    check_group(ws, fname, xname)?;
    if k < if reduced { -1 } else { 0 } {
        return Err(input(format!("degree {k} is below the range of the complex")));
    }
    let h = if reduced {
        x.reduced_bredon_homology(cat, k)
    } else {
        x.bredon_homology(cat, k as usize)
    };
    let (entries, table) = values_table(cat, &h);
    let text = format!(
        "{}H_{k} of {xname} over {fname}:\n{table}",
        if reduced { "reduced " } else { "" }
    );
    Ok(Report {
        json: json!({"complex": xname, "family": fname, "k": k, "reduced": reduced, "values": entries}),
        text,
        violation: false,
    })
}

fn fp0(ws: &Workspace, c: &Common) -> Result<Report> {
    let (fname, cat) = ws.category(c.family.as_deref())?;
    let group = cat.group();
    let w = cat.family().fp0_witness(group);
    let verified = cat.family().is_covered_by(group, &w);
    let labels: Vec<String> = w.iter().map(|h| h.display(group)).collect();
    let mut text = format!("family {fname}: F0 of size {} = {{{}}}\n", w.len(), labels.join(", "));
    writeln!(text, "covers the family up to subconjugacy: {verified}")?;
    let mut stages = Vec::new();
    let fg = &ws.family_groups[fname];
    for (fil_name, f) in &ws.filtrations {
        if &ws.complex_groups[&ws.filtration_complexes[fil_name]] != fg {
            continue;
        }
        for (i, s) in f.stages().iter().enumerate() {
            let entry = match fp0_constructive_witness(cat, s) {
                Ok(r) => {
                    let fam: Vec<String> = r.family.iter().map(|h| h.display(group)).collect();
                    writeln!(text, "filtration {fil_name} stage {i}: F0 = {{{}}} (verified: {})", fam.join(", "), r.verified)?;
                    json!({"filtration": fil_name, "stage": i, "family": fam, "verified": r.verified, "local": r.local})
                }
                Err(e) => {
                    writeln!(text, "filtration {fil_name} stage {i}: {e}")?;
                    json!({"filtration": fil_name, "stage": i, "error": e.to_string()})
                }
            };
            stages.push(entry);
        }
    }
    Ok(Report {
        json: json!({"family": fname, "witness": labels, "size": w.len(), "verified": verified, "stages": stages}),
        text,
        violation: false,
    })
}

fn good(ws: &Workspace, c: &Common, n: usize) -> Result<Report> {
    let (xname, x) = ws.complex(c.complex.as_deref())?;
    let (fname, cat) = family_for(ws, c, xname)?;
    check_group(ws, fname, xname)?;
    let r = x.is_family_n_good_with(cat, n, Budget::from_env())?;
    let mut text = format!("{xname} over {fname}: {}-good = {}\n", n, r.good);
    match &r.acyclicity.first_failure {
        None => writeln!(text, "  acyclic up to {}", n as i64 - 1)?,
        Some(f) => writeln!(text, "  not acyclic: reduced H_{} at Γ/{} is {}", f.degree, f.subgroup, f.homology)?,
    }
    for cell in &r.cells {
        writeln!(
            text,
            "  {}-cell {:?}: stabilizer {}, family contained {}, FP_{} {}",
            cell.dimension,
            cell.simplex,
            cell.stabilizer,
            cell.family_contained,
            cell.fp_degree,
            match &cell.resolution_ranks {
                Some(r) => format!("with ranks {r:?}"),
                None => "not checked".into(),
            }
        )?;
    }
    Ok(Report {
        json: to_json(&r),
        text,
        violation: false,
    })
}

fn brown(ws: &Workspace, c: &Common, n: usize) -> Result<Report> {
    let (fil_name, f) = ws.filtration(c.filtration.as_deref())?;
    let xname = &ws.filtration_complexes[fil_name];
    let (fname, cat) = family_for(ws, c, xname)?;
    check_group(ws, fname, xname)?;
    let r = brown_check(cat, f, n)?;
    let mut text = format!("{fil_name} on {xname} over {fname}, n = {n}\n");
    writeln!(text, "  {}-good: {}", n, r.goodness.good)?;
    writeln!(text, "  FP_{}: {} (resolution ranks {:?})", n, r.fp.holds, r.fp.ranks)?;
    for s in &r.systems {
        writeln!(
            text,
            "  reduced H_{} system essentially trivial: {}",
            s.degree, s.essentially_trivial.trivial
        )?;
    }
    let verdict = match r.verdict {
        BrownVerdict::Consistent => "CONSISTENT",
        BrownVerdict::Inapplicable => "INAPPLICABLE",
        BrownVerdict::TheoremViolation => "THEOREM VIOLATION",
    };
    writeln!(text, "{verdict}")?;
    Ok(Report {
        json: to_json(&r),
        text,
        violation: r.verdict == BrownVerdict::TheoremViolation,
    })
}

fn module_or_trivial(ws: &Workspace, name: Option<&str>, cat: &std::sync::Arc<OrbitCategory>, variance: Variance) -> Result<BredonModule> {
    match name {
        Some(n) => {
            let m = ws.module(n)?;
            if m.variance() != variance {
                return Err(input(format!("module `{n}` is not a {variance:?} module")));
            }
            if !std::sync::Arc::ptr_eq(m.category(), cat) {
                return Err(input(format!("module `{n}` is over a different family")));
            }
            Ok(m.clone())
        }
        None => Ok(BredonModule::trivial(cat, variance)),
    }
}

fn category_of_modules<'a>(ws: &'a Workspace, c: &Common, names: &[Option<&str>]) -> Result<(&'a str, &'a std::sync::Arc<OrbitCategory>)> {
    if c.family.is_none() {
        for n in names.iter().flatten() {
            let m = ws.module(n)?;
            if let Some((k, cat)) = ws.categories.iter().find(|(_, cat)| std::sync::Arc::ptr_eq(cat, m.category())) {
                return Ok((k.as_str(), cat));
            }
        }
    }
    Ok(ws.category(c.family.as_deref())?)
}

fn tor_cmd(ws: &Workspace, c: &Common, k: usize, right: Option<&str>, left: Option<&str>) -> Result<Report> {
    let (fname, cat) = category_of_modules(ws, c, &[right, left])?;
    let n = module_or_trivial(ws, right, cat, Variance::Right)?;
    let m = module_or_trivial(ws, left, cat, Variance::Left)?;
    let t = tor(&n, &m, k)?;
    let mut text = format!(
        "Tor over {fname} of {} and {}:\n",
        right.unwrap_or("trivial"),
        left.unwrap_or("trivial")
    );
    for (d, inv) in t.degrees.iter().enumerate() {
        writeln!(text, "  Tor_{d} = {inv}")?;
    }
    Ok(Report {
        json: json!({"family": fname, "right": right, "left": left, "degrees": t.degrees}),
        text,
        violation: false,
    })
}

fn resolve(ws: &Workspace, c: &Common, n: usize) -> Result<Report> {
    let (fname, cat) = category_of_modules(ws, c, &[c.module.as_deref()])?;
    let m = match c.module.as_deref() {
        Some(name) => {
            let m = ws.module(name)?;
            if !std::sync::Arc::ptr_eq(m.category(), cat) {
                return Err(input(format!("module `{name}` is over a different family")));
            }
            m.clone()
        }
        None => BredonModule::trivial(cat, Variance::Right),
    };
    let r = fp_n_report_with(&m, n, CoverStrategy::Greedy, Budget::from_env())?;
    let labels = object_labels(cat);
    let bases: Vec<Vec<String>> = (0..=n)
        .map(|k| r.resolution.basis(k).iter().map(|&o| labels[o].clone()).collect())
        .collect();
    let mut text = format!("resolution of {} over {fname} to degree {n}\n", c.module.as_deref().unwrap_or("trivial"));
    for (k, b) in bases.iter().enumerate() {
        writeln!(text, "  P_{k}: {} summands {:?}", b.len(), b)?;
    }
    Ok(Report {
        json: json!({
            "family": fname,
            "module": c.module,
            "n": n,
            "ranks": r.ranks,
            "bases": bases,
            "object_ranks": r.resolution.object_ranks(),
        }),
        text,
        violation: false,
    })
}

fn equiv(ws: &Workspace, c: &Common, k: usize) -> Result<Report> {
    let (xname, x) = ws.complex(c.complex.as_deref())?;
    let (fname, cat) = family_for(ws, c, xname)?;
    check_group(ws, fname, xname)?;
    let mname = c.module.as_deref();
    let m = module_or_trivial(ws, mname, cat, Variance::Left)?;
    let mut text = format!("equivariant homology of {xname} over {fname} with coefficients {}\n", mname.unwrap_or("trivial"));
    let mut degrees = Vec::new();
    for d in 0..=k {
        let h = equivariant_homology(x, &m, d)?;
        writeln!(text, "  H_{d} = {h}")?;
        degrees.push(h);
    }
    Ok(Report {
        json: json!({"complex": xname, "family": fname, "module": mname, "degrees": degrees}),
        text,
        violation: false,
    })
}

fn parse_elements(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| input(format!("`{t}` is not an element index"))))
        .collect()
}

fn indres(ws: &Workspace, c: &Common, subgroup: &str) -> Result<Report> {
    let (fname, cat) = ws.category(c.family.as_deref())?;
    let group = cat.group();
    let elems = parse_elements(subgroup)?;
    let lambda = group.subgroup(&elems).map_err(input)?;
    let ctx = SubgroupContext::new(cat, &lambda).map_err(input)?;
    let sub = ctx.subcategory();
    let comparison = ctx
        .induced_trivial_comparison()
        .context("comparing the induced trivial module")?;
    let iso = comparison.is_isomorphism();
    let (ind_entries, ind_table) = values_table(cat, comparison.source());
    let label = lambda.display(group);
    let mut text = format!(
        "subgroup {label} of {fname}: restricted family has {} members\n",
        sub.object_count()
    );
    writeln!(text, "induced trivial module:\n{}", ind_table.trim_end())?;
    writeln!(text, "isomorphic to the permutation module on the cosets: {iso}")?;
    let mut restricted = Value::Null;
    if let Some(name) = c.module.as_deref() {
        let m = ws.module(name)?;
        if !std::sync::Arc::ptr_eq(m.category(), cat) {
            return Err(input(format!("module `{name}` is over a different family")));
        }
        let r = ctx.restrict(m).map_err(|e| anyhow!(e))?;
        let (entries, table) = values_table(sub, &r);
        writeln!(text, "restriction of {name}:\n{}", table.trim_end())?;
        restricted = to_json(&entries);
    }
    if !iso {
        bail!("induced trivial module is not isomorphic to the permutation module");
    }
    Ok(Report {
        json: json!({
            "family": fname,
            "subgroup": label,
            "subfamily": sub.family().members().iter().map(|h| h.display(group)).collect::<Vec<_>>(),
            "induced_trivial": ind_entries,
            "comparison_is_isomorphism": iso,
            "restricted": restricted,
        }),
        text,
        violation: false,
    })
}
