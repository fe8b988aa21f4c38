//! Command-line verifier and constructor for structure-constant bundles:
//! exact axiom checking for Hopf heaps, Hopf algebras, trusses, braces,
//! heap modules, and Rota-Baxter operators, plus the derived-object
//! constructions and a bounded operator search.
//!
//! Exit codes: 0 when every check passes, 1 on any verified failure or
//! rejected construction, 2 on usage, parse, or reference errors.

mod construct;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use heapcas::bundle::Bundle;
use heapcas::error::Error;
use heapcas::heap::Side;
use heapcas::map::LinearMap;
use heapcas::scalar::{FieldSpec, Scalar};
use output::{CommandOutput, Format};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "heapcas", version, about = "Exact verifier for Hopf heap structure bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyKind {
    Coalgebra,
    Heap,
    Hopf,
    Truss,
    CocycleTruss,
    Brace,
    Module,
    HopfModule,
    Rb,
    RbCooperator,
    RbModule,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyKind {
    Diagonal,
    Permutation,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Run the axiom checks for objects of one kind (or everything)
    Verify {
        #[arg(value_enum)]
        kind: VerifyKind,
        bundle: PathBuf,
        /// Check a single named object instead of all of that kind
        #[arg(long)]
        object: Option<String>,
        #[arg(long)]
        field: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Solve for the complete set of group-like elements of a coalgebra
    Grouplikes {
        bundle: PathBuf,
        #[arg(long)]
        object: Option<String>,
        #[arg(long)]
        field: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compute the coinvariant basis of a heap module at a group-like
    Coinvariants {
        bundle: PathBuf,
        #[arg(long)]
        module: String,
        #[arg(long)]
        grouplike: String,
        #[arg(long)]
        field: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build and certify the structure-theorem isomorphisms of a module
    Structure {
        bundle: PathBuf,
        /// A heap_module or rb_module name
        #[arg(long)]
        module: String,
        #[arg(long)]
        grouplike: String,
        #[arg(long)]
        field: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Construct and certify the descendent heap of a Rota-Baxter operator
    Descend {
        bundle: PathBuf,
        #[arg(long)]
        rb: String,
        /// Write the descendent heap as a new bundle
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        field: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Filter a generated family of candidate operators through the verifier
    Search {
        bundle: PathBuf,
        #[arg(long)]
        heap: Option<String>,
        #[arg(long, value_enum, default_value_t = FamilyKind::Diagonal)]
        family: FamilyKind,
        /// Bound on numerator and denominator of diagonal entries (1 or 2)
        #[arg(long, default_value_t = 2)]
        height: u32,
        #[arg(long)]
        field: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build a derived object and emit it as a new bundle
    Construct {
        bundle: PathBuf,
        #[command(flatten)]
        args: construct::ConstructArgs,
        #[arg(long)]
        field: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Verify every object in the bundle
    Report {
        bundle: PathBuf,
        #[arg(long)]
        field: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = dispatch(cli);
    ExitCode::from(code)
}

fn load(bundle: &Path, field: &Option<String>) -> Result<Bundle, Error> {
    let field = match field {
        Some(f) => Some(FieldSpec::parse(f)?),
        None => None,
    };
    Bundle::load_with_field(bundle, field)
}

fn dispatch(cli: Cli) -> u8 {
    let (bundle_path, field, format) = match &cli.command {
        Command::Verify { bundle, field, format, .. }
        | Command::Grouplikes { bundle, field, format, .. }
        | Command::Coinvariants { bundle, field, format, .. }
        | Command::Structure { bundle, field, format, .. }
        | Command::Descend { bundle, field, format, .. }
        | Command::Search { bundle, field, format, .. }
        | Command::Construct { bundle, field, format, .. }
        | Command::Report { bundle, field, format } => (bundle.clone(), field.clone(), *format),
    };
    let bundle = match load(&bundle_path, &field) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let mut out = CommandOutput::new(&command_name(&cli.command), &bundle);
    let result = run(cli.command, &bundle, &mut out);
    match result {
        Ok(()) => {}
        // bad names or malformed inputs are usage errors, not verified
        // failures
        Err(e @ (Error::ParseError { .. } | Error::DanglingReference(_) | Error::Io(_))) => {
            eprintln!("error: {e}");
            return 2;
        }
        Err(e) => out.set_error(e.to_string()),
    }
    out.emit(format);
    if out.passed() {
        0
    } else {
        1
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Verify { .. } => "verify",
        Command::Grouplikes { .. } => "grouplikes",
        Command::Coinvariants { .. } => "coinvariants",
        Command::Structure { .. } => "structure",
        Command::Descend { .. } => "descend",
        Command::Search { .. } => "search",
        Command::Construct { .. } => "construct",
        Command::Report { .. } => "report",
    }
    .to_string()
}

fn run(cmd: Command, bundle: &Bundle, out: &mut CommandOutput) -> Result<(), Error> {
    match cmd {
        Command::Verify { kind, object, .. } => run_verify(bundle, kind, object, out),
        Command::Grouplikes { object, .. } => run_grouplikes(bundle, object, out),
        Command::Coinvariants {
            module, grouplike, ..
        } => run_coinvariants(bundle, &module, &grouplike, out),
        Command::Structure {
            module, grouplike, ..
        } => run_structure(bundle, &module, &grouplike, out),
        Command::Descend { rb, out: path, .. } => run_descend(bundle, &rb, path, out),
        Command::Search {
            heap,
            family,
            height,
            ..
        } => run_search(bundle, heap, family, height, out),
        Command::Construct { args, .. } => construct::run(bundle, &args, out),
        Command::Report { .. } => run_report(bundle, out),
    }
}

fn verify_one(bundle: &Bundle, kind: &str, name: &str, out: &mut CommandOutput) -> Result<(), Error> {
    let subject = format!("{kind} {name}");
    let report = match kind {
        "coalgebra" => bundle.coalgebra(name)?.verify(),
        "heap" => bundle.heap(name)?.verify(),
        "hopf" => bundle.hopf(name)?.verify(),
        "truss" => bundle.truss(name)?.verify(),
        "cocycle_truss" => bundle.cocycle_truss(name)?.verify(),
        "brace" => bundle.brace(name)?.verify(),
        "heap_module" => bundle.heap_module(name)?.verify(),
        "hopf_module" => bundle.hopf_module(name)?.verify(),
        "rb_operator" => bundle.rb_operator(name)?.verify(),
        "rb_cooperator" => bundle.rb_cooperator(name)?.verify()?,
        "rb_module" => bundle.rb_module(name)?.verify(),
        other => {
            return Err(Error::DanglingReference(format!(
                "{other} is not a verifiable kind"
            )))
        }
    };
    out.push_report(&subject, report);
    Ok(())
}

fn kind_key(kind: VerifyKind) -> &'static str {
    match kind {
        VerifyKind::Coalgebra => "coalgebra",
        VerifyKind::Heap => "heap",
        VerifyKind::Hopf => "hopf",
        VerifyKind::Truss => "truss",
        VerifyKind::CocycleTruss => "cocycle_truss",
        VerifyKind::Brace => "brace",
        VerifyKind::Module => "heap_module",
        VerifyKind::HopfModule => "hopf_module",
        VerifyKind::Rb => "rb_operator",
        VerifyKind::RbCooperator => "rb_cooperator",
        VerifyKind::RbModule => "rb_module",
        VerifyKind::All => "all",
    }
}

fn run_verify(
    bundle: &Bundle,
    kind: VerifyKind,
    object: Option<String>,
    out: &mut CommandOutput,
) -> Result<(), Error> {
    if kind == VerifyKind::All {
        return run_report(bundle, out);
    }
    let key = kind_key(kind);
    let names = match object {
        Some(n) => vec![n],
        None => {
            let all = bundle.names_of_kind(key);
            if all.is_empty() {
                return Err(Error::DanglingReference(format!("<no {key} in bundle>")));
            }
            all
        }
    };
    for name in names {
        verify_one(bundle, key, &name, out)?;
    }
    Ok(())
}

fn run_report(bundle: &Bundle, out: &mut CommandOutput) -> Result<(), Error> {
    for (kind, name) in bundle.order().to_vec() {
        match kind.as_str() {
            "space" | "map" | "vector" => continue,
            k => {
                // a typed rejection counts as a failure of that object, not
                // of the whole run
                if let Err(e) = verify_one(bundle, k, &name, out) {
                    out.push_failure(&format!("{k} {name}"), &e.to_string());
                }
            }
        }
    }
    Ok(())
}

fn run_grouplikes(
    bundle: &Bundle,
    object: Option<String>,
    out: &mut CommandOutput,
) -> Result<(), Error> {
    let name = match object {
        Some(n) => n,
        None => bundle.only_of_kind("coalgebra")?,
    };
    let c = bundle.coalgebra(&name)?;
    let gs = c.find_grouplikes()?;
    out.note(format!(
        "{} group-like element(s) of coalgebra {name} over {}",
        gs.len(),
        bundle.field.name()
    ));
    for g in &gs {
        out.note(c.format_vector(g.coords()));
    }
    Ok(())
}

fn resolve_grouplike(
    bundle: &Bundle,
    coalg: &heapcas::coalg::Coalgebra,
    name: &str,
) -> Result<heapcas::coalg::GroupLike, Error> {
    let (_, coords) = bundle.vector(name)?;
    coalg.grouplike(coords.clone())
}

fn run_coinvariants(
    bundle: &Bundle,
    module: &str,
    grouplike: &str,
    out: &mut CommandOutput,
) -> Result<(), Error> {
    let m = bundle.heap_module(module)?;
    let x = resolve_grouplike(bundle, m.parent().coalg(), grouplike)?;
    let coinv = m.coinvariants(&x)?;
    out.note(format!(
        "coinvariants of {module} at {grouplike}: dimension {}",
        coinv.dim()
    ));
    let field = bundle.field;
    for v in coinv.basis() {
        let txt = v
            .iter()
            .map(|s| s.canonical_string(field))
            .collect::<Vec<_>>()
            .join(", ");
        out.note(format!("[{txt}]"));
    }
    Ok(())
}

fn run_structure(
    bundle: &Bundle,
    module: &str,
    grouplike: &str,
    out: &mut CommandOutput,
) -> Result<(), Error> {
    if let Ok(rbm) = bundle.rb_module(module) {
        let x = resolve_grouplike(bundle, rbm.module().parent().coalg(), grouplike)?;
        let st = rbm.structure_iso(&x)?;
        out.note(format!(
            "coinvariant dimension {}",
            st.iso.coinvariants.dim()
        ));
        out.push_report(&format!("rb_module {module}"), st.report);
        return Ok(());
    }
    let m = bundle.heap_module(module)?;
    let x = resolve_grouplike(bundle, m.parent().coalg(), grouplike)?;
    let iso = m.structure_iso(&x)?;
    out.note(format!(
        "coinvariant dimension {}",
        iso.coinvariants.dim()
    ));
    let free = m.free_on_coinvariants(&iso.coinvariants)?;
    let hom = heapcas::hmodule::verify_module_hom(&iso.alpha, &free, m)?;
    out.push_report(&format!("module map alpha of {module}"), hom);
    Ok(())
}

fn run_descend(
    bundle: &Bundle,
    rb: &str,
    path: Option<PathBuf>,
    out: &mut CommandOutput,
) -> Result<(), Error> {
    let op = bundle.rb_operator(rb)?;
    let desc = op.descendent()?;
    let same = desc.heap.coalg().comul() == op.heap().coalg().comul();
    out.note(format!(
        "twisted comultiplication {} the original",
        if same { "equals" } else { "differs from" }
    ));
    out.push_report(&format!("descendent of {rb}"), desc.report.clone());
    if let Some(p) = path {
        let file = heapcas::bundle::BundleFileOut {
            field: bundle.field.name(),
            name: format!("{}_descendent", bundle.name),
            provenance: Some(format!("descendent heap of {rb} from bundle {}", bundle.name)),
            objects: vec![
                heapcas::bundle::write::coalgebra("C_desc", desc.heap.coalg()),
                heapcas::bundle::write::heap("H_desc", "C_desc", &desc.heap),
            ],
        };
        std::fs::write(&p, heapcas::bundle::canonical_json(&file))?;
        out.note(format!("wrote {}", p.display()));
    }
    Ok(())
}

fn diagonal_scalars(height: u32) -> Vec<Scalar> {
    let mut vals = vec![Scalar::zero(), Scalar::from_int(1), Scalar::from_int(-1)];
    if height >= 2 {
        vals.push(Scalar::from_int(2));
        vals.push(Scalar::from_int(-2));
        vals.push(Scalar::from_ratio(1, 2));
        vals.push(Scalar::from_ratio(-1, 2));
    }
    vals
}

fn run_search(
    bundle: &Bundle,
    heap: Option<String>,
    family: FamilyKind,
    height: u32,
    out: &mut CommandOutput,
) -> Result<(), Error> {
    let name = match heap {
        Some(n) => n,
        None => bundle.only_of_kind("heap")?,
    };
    let hp = bundle.heap(&name)?;
    let n = hp.dim();
    let field = bundle.field;
    let mut candidates: Vec<LinearMap> = Vec::new();
    if matches!(family, FamilyKind::Diagonal | FamilyKind::All) {
        let vals = diagonal_scalars(height.min(2));
        let count = vals.len().pow(n as u32);
        if count > 100_000 {
            return Err(Error::SolverIncomplete(format!(
                "diagonal family of size {count} is too large"
            )));
        }
        let mut diag = vec![0usize; n];
        loop {
            let d: Vec<Scalar> = diag.iter().map(|&i| vals[i].clone()).collect();
            candidates.push(LinearMap::diagonal(field, &d));
            let mut pos = 0;
            loop {
                if pos == n {
                    break;
                }
                diag[pos] += 1;
                if diag[pos] < vals.len() {
                    break;
                }
                diag[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
    }
    if matches!(family, FamilyKind::Permutation | FamilyKind::All) {
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |p| {
            let mut m = LinearMap::zero(field, n, n);
            for (col, &row) in p.iter().enumerate() {
                m.set(row, col, Scalar::one());
            }
            candidates.push(m);
        });
    }
    let total = candidates.len();
    let found = heapcas::rota::search_rb_operators(hp, &candidates)?;
    out.note(format!(
        "{} of {total} candidates verify on heap {name}",
        found.len()
    ));
    for rb in &found {
        out.note(format!("operator {}", describe_map(rb.operator(), field)));
    }
    Ok(())
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

pub fn describe_map(m: &LinearMap, field: FieldSpec) -> String {
    let file_view = m.matrix().permute_legs(&[1, 0]).expect("2-leg swap");
    let entries: Vec<String> = file_view
        .iter()
        .map(|(idx, v)| format!("[{}, {}, \"{}\"]", idx[0], idx[1], v.canonical_string(field)))
        .collect();
    format!("[{}]", entries.join(", "))
}
