//! The `construct` subcommand: build a derived object from bundle inputs,
//! re-verify it, and emit it as a new bundle.

use crate::output::CommandOutput;
use crate::SideArg;
use clap::{Args, ValueEnum};
use heapcas::bundle::{canonical_json, write, Bundle, BundleFileOut, DeclOut};
use heapcas::error::Error;
use heapcas::truss::AlphaVariant;
use std::path::PathBuf;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpName {
    HeapFromHopf,
    HopfFromHeap,
    TensorHeap,
    OppositeHeap,
    OppositeCoalgebra,
    TensorCoalgebra,
    TrivialTruss,
    AlphaTruss,
    ShiftedTruss,
    TrussToBrace,
    BraceToTruss,
    Grunspan,
    Translation,
    FreeModule,
    HeapmodToHopfmod,
    HopfmodToHeapmod,
    RbToCooperator,
    CooperatorToRb,
    ConjugateRb,
    TranslateRb,
    TensorRb,
    InducedRbModule,
    Cobrace,
    EndoBracket,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    First,
    Second,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FactorArg {
    Eps,
    Zero,
}

#[derive(Args)]
pub struct ConstructArgs {
    /// Which construction to run
    #[arg(long, value_enum)]
    pub op: OpName,
    /// Name of the constructed object in the output bundle
    #[arg(long, default_value = "result")]
    pub name: String,
    /// Write the output bundle to this path (otherwise it is printed)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub hopf: Option<String>,
    #[arg(long)]
    pub heap: Option<String>,
    #[arg(long)]
    pub coalgebra: Option<String>,
    #[arg(long)]
    pub truss: Option<String>,
    #[arg(long)]
    pub cocycle_truss: Option<String>,
    #[arg(long)]
    pub brace: Option<String>,
    #[arg(long)]
    pub module: Option<String>,
    #[arg(long)]
    pub rb: Option<String>,
    #[arg(long)]
    pub cooperator: Option<String>,
    #[arg(long)]
    pub left: Option<String>,
    #[arg(long)]
    pub right: Option<String>,
    #[arg(long)]
    pub grouplike: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub psi: Option<String>,
    #[arg(long)]
    pub map: Option<String>,
    /// A counit-one vector (Grunspan input)
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub y: Option<String>,
    #[arg(long)]
    pub dimv: Option<usize>,
    #[arg(long, value_enum)]
    pub side: Option<SideArg>,
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// Canonical factor map for induced-rb-module
    #[arg(long, value_enum)]
    pub factor: Option<FactorArg>,
}

fn need<'a>(opt: &'a Option<String>, flag: &str) -> Result<&'a str, Error> {
    opt.as_deref().ok_or_else(|| Error::ParseError {
        position: "arguments".into(),
        message: format!("--{flag} is required for this construction"),
    })
}

fn grouplike_of(
    bundle: &Bundle,
    coalg: &heapcas::coalg::Coalgebra,
    name: &str,
) -> Result<heapcas::coalg::GroupLike, Error> {
    let (_, coords) = bundle.vector(name)?;
    coalg.grouplike(coords.clone())
}

pub fn run(bundle: &Bundle, args: &ConstructArgs, out: &mut CommandOutput) -> Result<(), Error> {
    let objects = build(bundle, args, out)?;
    let file = BundleFileOut {
        field: bundle.field.name(),
        name: format!("{}_constructed", bundle.name),
        provenance: Some(format!("constructed from bundle {}", bundle.name)),
        objects,
    };
    let text = canonical_json(&file);
    match &args.out {
        Some(p) => {
            std::fs::write(p, &text)?;
            out.note(format!("wrote {}", p.display()));
        }
        None => out.note(format!("bundle:\n{text}")),
    }
    Ok(())
}

fn build(
    bundle: &Bundle,
    args: &ConstructArgs,
    out: &mut CommandOutput,
) -> Result<Vec<DeclOut>, Error> {
    let result = &args.name;
    match args.op {
        OpName::HeapFromHopf => {
            let h = bundle.hopf(need(&args.hopf, "hopf")?)?;
            let heap = h.heap()?;
            out.push_report(&format!("heap {result}"), heap.verify());
            Ok(vec![
                write::coalgebra("C", heap.coalg()),
                write::heap(result, "C", &heap),
            ])
        }
        OpName::HopfFromHeap => {
            let hp = bundle.heap(need(&args.heap, "heap")?)?;
            let x = grouplike_of(bundle, hp.coalg(), need(&args.grouplike, "grouplike")?)?;
            let h = hp.hopf_at(&x)?;
            out.push_report(&format!("hopf {result}"), h.verify());
            Ok(vec![
                write::coalgebra("C", h.coalg()),
                write::hopf(result, "C", &h),
            ])
        }
        OpName::TensorHeap => {
            let l = bundle.heap(need(&args.left, "left")?)?;
            let r = bundle.heap(need(&args.right, "right")?)?;
            let t = l.tensor(r)?;
            out.push_report(&format!("heap {result}"), t.verify());
            Ok(vec![
                write::coalgebra("C", t.coalg()),
                write::heap(result, "C", &t),
            ])
        }
        OpName::OppositeHeap => {
            let hp = bundle.heap(need(&args.heap, "heap")?)?;
            let op = hp.opposite()?;
            out.push_report(&format!("heap {result}"), op.verify());
            Ok(vec![
                write::coalgebra("C", op.coalg()),
                write::heap(result, "C", &op),
            ])
        }
        OpName::OppositeCoalgebra => {
            let c = bundle.coalgebra(need(&args.coalgebra, "coalgebra")?)?;
            let op = c.opposite()?;
            out.push_report(&format!("coalgebra {result}"), op.verify());
            Ok(vec![write::coalgebra(result, &op)])
        }
        OpName::TensorCoalgebra => {
            let l = bundle.coalgebra(need(&args.left, "left")?)?;
            let r = bundle.coalgebra(need(&args.right, "right")?)?;
            let t = l.tensor(r)?;
            out.push_report(&format!("coalgebra {result}"), t.verify());
            Ok(vec![write::coalgebra(result, &t)])
        }
        OpName::TrivialTruss => {
            let hp = bundle.heap(need(&args.heap, "heap")?)?;
            let x = grouplike_of(bundle, hp.coalg(), need(&args.grouplike, "grouplike")?)?;
            let t = heapcas::truss::trivial_truss(hp, &x)?;
            out.push_report(&format!("truss {result}"), t.verify());
            Ok(vec![
                write::coalgebra("C", hp.coalg()),
                write::heap("H", "C", hp),
                write::truss(result, "H", &t),
            ])
        }
        OpName::AlphaTruss => {
            let hp = bundle.heap(need(&args.heap, "heap")?)?;
            let alpha = &bundle.map(need(&args.alpha, "alpha")?)?.map;
            let variant = match args.variant.unwrap_or(VariantArg::First) {
                VariantArg::First => AlphaVariant::First,
                VariantArg::Second => AlphaVariant::Second,
            };
            let t = heapcas::truss::alpha_truss(hp, alpha, variant)?;
            out.push_report(&format!("truss {result}"), t.verify());
            Ok(vec![
                write::coalgebra("C", hp.coalg()),
                write::heap("H", "C", hp),
                write::truss(result, "H", &t),
            ])
        }
        OpName::ShiftedTruss => {
            let ct = bundle.cocycle_truss(need(&args.cocycle_truss, "cocycle-truss")?)?;
            let x = grouplike_of(
                bundle,
                ct.hopf().coalg(),
                need(&args.grouplike, "grouplike")?,
            )?;
            let shifted = ct.shift(&x)?;
            out.push_report(&format!("cocycle_truss {result}"), shifted.verify());
            Ok(vec![
                write::coalgebra("C", shifted.hopf().coalg()),
                write::hopf("H_x", "C", shifted.hopf()),
                write::cocycle_truss(result, "H_x", &shifted),
            ])
        }
        OpName::TrussToBrace => {
            let t = bundle.truss(need(&args.truss, "truss")?)?;
            let brace = t.to_brace()?;
            out.push_report(&format!("brace {result}"), brace.verify());
            Ok(vec![
                write::coalgebra("C", brace.hopf_dot().coalg()),
                write::hopf("H_dot", "C", brace.hopf_dot()),
                write::hopf("H_circ", "C", brace.hopf_circ()),
                DeclOut {
                    kind: "brace".into(),
                    name: result.clone(),
                    fields: vec![
                        (
                            "hopf_dot".into(),
                            heapcas::bundle::DeclValue::Str("H_dot".into()),
                        ),
                        (
                            "hopf_circ".into(),
                            heapcas::bundle::DeclValue::Str("H_circ".into()),
                        ),
                    ],
                },
            ])
        }
        OpName::BraceToTruss => {
            let b = bundle.brace(need(&args.brace, "brace")?)?;
            let t = b.to_truss()?;
            out.push_report(&format!("truss {result}"), t.verify());
            Ok(vec![
                write::coalgebra("C", t.heap().coalg()),
                write::heap("H", "C", t.heap()),
                write::truss(result, "H", &t),
            ])
        }
        OpName::Grunspan => {
            let hp = bundle.heap(need(&args.heap, "heap")?)?;
            let (_, coords) = bundle.vector(need(&args.f, "f")?)?;
            let theta = hp.grunspan(coords)?;
            out.note(format!("computed with f = {}", hp.coalg().format_vector(coords)));
            out.push_report(&format!("map {result}"), hp.verify_grunspan(&theta)?);
            Ok(vec![
                write::coalgebra("C", hp.coalg()),
                write::heap("H", "C", hp),
                write::linear_map(result, "C", "C", &theta),
            ])
        }
        OpName::Translation => {
            let hp = bundle.heap(need(&args.heap, "heap")?)?;
            let (_, a) = bundle.vector(need(&args.a, "a")?)?;
            let (_, b) = bundle.vector(need(&args.b, "b")?)?;
            let side = args.side.unwrap_or(SideArg::Right).into();
            let t = hp.translation(a, b, side)?;
            out.note(format!(
                "translation {}",
                crate::describe_map(&t, bundle.field)
            ));
            Ok(vec![
                write::coalgebra("C", hp.coalg()),
                write::heap("H", "C", hp),
                write::linear_map(result, "C", "C", &t),
            ])
        }
        OpName::FreeModule => {
            let hp = bundle.heap(need(&args.heap, "heap")?)?;
            let dimv = args.dimv.ok_or_else(|| Error::ParseError {
                position: "arguments".into(),
                message: "--dimv is required for this construction".into(),
            })?;
            let side = args.side.unwrap_or(SideArg::Left).into();
            let m = heapcas::hmodule::free_heap_module(hp, dimv, side)?;
            out.push_report(&format!("heap_module {result}"), m.verify());
            Ok(vec![
                write::coalgebra("C", hp.coalg()),
                write::heap("H", "C", hp),
                write::heap_module(result, "H", &m),
            ])
        }
        OpName::HeapmodToHopfmod => {
            let m = bundle.heap_module(need(&args.module, "module")?)?;
            let x = grouplike_of(
                bundle,
                m.parent().coalg(),
                need(&args.grouplike, "grouplike")?,
            )?;
            let hm = m.to_hopf_module(&x)?;
            out.push_report(&format!("hopf_module {result}"), hm.verify());
            Ok(vec![
                write::coalgebra("C", hm.parent().coalg()),
                write::hopf("H", "C", hm.parent()),
                write::hopf_module(result, "H", &hm),
            ])
        }
        OpName::HopfmodToHeapmod => {
            let m = bundle.hopf_module(need(&args.module, "module")?)?;
            let hm = m.to_heap_module()?;
            out.push_report(&format!("heap_module {result}"), hm.verify());
            Ok(vec![
                write::coalgebra("C", hm.parent().coalg()),
                write::heap("H", "C", hm.parent()),
                write::heap_module(result, "H", &hm),
            ])
        }
        OpName::RbToCooperator => {
            let rb = bundle.rb_operator(need(&args.rb, "rb")?)?;
            let x = grouplike_of(
                bundle,
                rb.heap().coalg(),
                need(&args.grouplike, "grouplike")?,
            )?;
            let co = rb.to_cooperator(&x)?;
            out.push_report(&format!("rb_cooperator {result}"), co.verify()?);
            Ok(vec![
                write::coalgebra("C", co.hopf().coalg()),
                write::hopf("H_x", "C", co.hopf()),
                write::linear_map("B", "C", "C", co.operator()),
                write::rb_cooperator(result, "H_x", "B"),
            ])
        }
        OpName::CooperatorToRb => {
            let co = bundle.rb_cooperator(need(&args.cooperator, "cooperator")?)?;
            let rb = co.to_rb_heap()?;
            out.push_report(&format!("rb_operator {result}"), rb.verify());
            Ok(rb_decls(result, &rb))
        }
        OpName::ConjugateRb => {
            let rb = bundle.rb_operator(need(&args.rb, "rb")?)?;
            let psi = &bundle.map(need(&args.psi, "psi")?)?.map;
            let conj = rb.conjugate(psi)?;
            out.push_report(&format!("rb_operator {result}"), conj.verify());
            Ok(rb_decls(result, &conj))
        }
        OpName::TranslateRb => {
            let rb = bundle.rb_operator(need(&args.rb, "rb")?)?;
            let coalg = rb.heap().coalg();
            let x = grouplike_of(bundle, coalg, need(&args.x, "x")?)?;
            let y = grouplike_of(bundle, coalg, need(&args.y, "y")?)?;
            let tw = rb.translate(&x, &y)?;
            out.push_report(&format!("rb_operator {result}"), tw.verify());
            Ok(rb_decls(result, &tw))
        }
        OpName::TensorRb => {
            let l = bundle.rb_operator(need(&args.left, "left")?)?;
            let r = bundle.rb_operator(need(&args.right, "right")?)?;
            let t = l.tensor(r)?;
            out.push_report(&format!("rb_operator {result}"), t.verify());
            Ok(rb_decls(result, &t))
        }
        OpName::InducedRbModule => {
            let rb = bundle.rb_operator(need(&args.rb, "rb")?)?;
            let dimv = args.dimv.unwrap_or(1);
            let n = rb.heap().dim();
            let f = bundle.field;
            let factor = match args.factor.unwrap_or(FactorArg::Eps) {
                FactorArg::Eps => {
                    let mut t = heapcas::tensor::SparseTensor::zero(f, vec![dimv, n, dimv]);
                    for m in 0..dimv {
                        for h in 0..n {
                            t.set(vec![m, h, m], rb.heap().coalg().counit().get(&[h]));
                        }
                    }
                    t
                }
                FactorArg::Zero => heapcas::tensor::SparseTensor::zero(f, vec![dimv, n, dimv]),
            };
            let rbm = heapcas::rota::induced_rb_module(rb, &factor)?;
            out.push_report(&format!("rb_module {result}"), rbm.verify());
            let mut decls = rb_decls("RB", rbm.rb());
            decls.push(write::heap_module("M", "H", rbm.module()));
            decls.push(write::linear_map("T_hat", "M", "M", rbm.t()));
            decls.push(write::rb_module(result, "RB", "M", "T_hat"));
            Ok(decls)
        }
        OpName::Cobrace => {
            let rb = bundle.rb_operator(need(&args.rb, "rb")?)?;
            let x = grouplike_of(
                bundle,
                rb.heap().coalg(),
                need(&args.grouplike, "grouplike")?,
            )?;
            let cb = rb.cobrace_at(&x)?;
            out.push_report(&format!("co-brace {result}"), cb.report.clone());
            Ok(vec![
                write::coalgebra("C", cb.hopf_plain.coalg()),
                write::coalgebra("C_twisted", cb.hopf_twisted.coalg()),
                write::hopf("H_plain", "C", &cb.hopf_plain),
                write::hopf("H_twisted", "C_twisted", &cb.hopf_twisted),
            ])
        }
        OpName::EndoBracket => {
            let hp = bundle.heap(need(&args.heap, "heap")?)?;
            let alpha = &bundle.map(need(&args.alpha, "alpha")?)?.map;
            let beta = &bundle.map(need(&args.beta, "beta")?)?.map;
            let gamma = &bundle.map(need(&args.gamma, "gamma")?)?.map;
            let bracket = heapcas::truss::endo_bracket(hp, alpha, beta, gamma)?;
            let rep = heapcas::heap::verify_heap_hom(&bracket, hp, hp)?;
            out.push_report(&format!("map {result}"), rep);
            Ok(vec![
                write::coalgebra("C", hp.coalg()),
                write::heap("H", "C", hp),
                write::linear_map(result, "C", "C", &bracket),
            ])
        }
    }
}

fn rb_decls(result: &str, rb: &heapcas::rota::RBHeap) -> Vec<DeclOut> {
    vec![
        write::coalgebra("C", rb.heap().coalg()),
        write::heap("H", "C", rb.heap()),
        write::linear_map("B", "C", "C", rb.operator()),
        write::rb_operator(result, "H", "B"),
    ]
}

