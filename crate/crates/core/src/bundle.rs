//! The bundle file format: named structure-constant objects in a JSON
//! text layout with exact canonical scalars.
//!
//! Tensors are explicit entry lists `[i, j, k, "coeff"]` with coefficients
//! in the canonical `p/q` / `p/q+r/s*sqrt(d)` form. Loading validates
//! references and dimensions before any verification runs; writing is
//! canonical, so `load ∘ write` is the identity on bytes for canonical
//! inputs.

use crate::coalg::{Coalgebra, GroupLike};
use crate::error::{Error, Result};
use crate::heap::{HopfAlgebra, HopfHeap, Side};
use crate::hmodule::{HeapModule, HopfModule};
use crate::map::LinearMap;
use crate::rota::{RBCooperator, RBHeap, RBHeapModule};
use crate::scalar::{FieldSpec, Scalar};
use crate::tensor::SparseTensor;
use crate::truss::{CocycleTruss, HopfBrace, HopfTruss};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

/// One tensor entry: leg indices followed by a canonical coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub idx: Vec<usize>,
    pub coeff: String,
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D>(de: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        use serde::de::Error as DeError;
        let raw: Vec<serde_json::Value> = Vec::deserialize(de)?;
        if raw.len() < 2 {
            return Err(D::Error::custom("entry needs indices and a coefficient"));
        }
        let (coeff_raw, idx_raw) = raw.split_last().unwrap();
        let coeff = coeff_raw
            .as_str()
            .ok_or_else(|| D::Error::custom("entry coefficient must be a string"))?
            .to_string();
        let mut idx = Vec::with_capacity(idx_raw.len());
        for v in idx_raw {
            let i = v
                .as_u64()
                .ok_or_else(|| D::Error::custom("entry index must be a non-negative integer"))?;
            idx.push(i as usize);
        }
        Ok(Entry { idx, coeff })
    }
}

/// The raw parsed file, before name resolution.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    pub field: String,
    pub name: String,
    #[serde(default)]
    pub provenance: Option<String>,
    pub objects: Vec<ObjectDecl>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectDecl {
    Space {
        name: String,
        dim: usize,
    },
    Coalgebra {
        name: String,
        basis: Vec<String>,
        comul: Vec<Entry>,
        counit: Vec<Entry>,
    },
    Heap {
        name: String,
        coalgebra: String,
        chi: Vec<Entry>,
    },
    Hopf {
        name: String,
        coalgebra: String,
        mul: Vec<Entry>,
        unit: Vec<Entry>,
        antipode: Vec<Entry>,
    },
    Truss {
        name: String,
        heap: String,
        circ: Vec<Entry>,
    },
    CocycleTruss {
        name: String,
        hopf: String,
        circ: Vec<Entry>,
        sigma: Vec<Entry>,
    },
    Brace {
        name: String,
        hopf_dot: String,
        hopf_circ: String,
    },
    Map {
        name: String,
        from: String,
        to: String,
        entries: Vec<Entry>,
    },
    Vector {
        name: String,
        space: String,
        entries: Vec<Entry>,
    },
    RbOperator {
        name: String,
        heap: String,
        map: String,
    },
    RbCooperator {
        name: String,
        hopf: String,
        map: String,
    },
    HeapModule {
        name: String,
        heap: String,
        side: String,
        dim: usize,
        action: Vec<Entry>,
        coaction: Vec<Entry>,
    },
    HopfModule {
        name: String,
        hopf: String,
        side: String,
        dim: usize,
        action: Vec<Entry>,
        coaction: Vec<Entry>,
    },
    RbModule {
        name: String,
        rb: String,
        module: String,
        t: String,
    },
}

impl ObjectDecl {
    pub fn name(&self) -> &str {
        match self {
            ObjectDecl::Space { name, .. }
            | ObjectDecl::Coalgebra { name, .. }
            | ObjectDecl::Heap { name, .. }
            | ObjectDecl::Hopf { name, .. }
            | ObjectDecl::Truss { name, .. }
            | ObjectDecl::CocycleTruss { name, .. }
            | ObjectDecl::Brace { name, .. }
            | ObjectDecl::Map { name, .. }
            | ObjectDecl::Vector { name, .. }
            | ObjectDecl::RbOperator { name, .. }
            | ObjectDecl::RbCooperator { name, .. }
            | ObjectDecl::HeapModule { name, .. }
            | ObjectDecl::HopfModule { name, .. }
            | ObjectDecl::RbModule { name, .. } => name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ObjectDecl::Space { .. } => "space",
            ObjectDecl::Coalgebra { .. } => "coalgebra",
            ObjectDecl::Heap { .. } => "heap",
            ObjectDecl::Hopf { .. } => "hopf",
            ObjectDecl::Truss { .. } => "truss",
            ObjectDecl::CocycleTruss { .. } => "cocycle_truss",
            ObjectDecl::Brace { .. } => "brace",
            ObjectDecl::Map { .. } => "map",
            ObjectDecl::Vector { .. } => "vector",
            ObjectDecl::RbOperator { .. } => "rb_operator",
            ObjectDecl::RbCooperator { .. } => "rb_cooperator",
            ObjectDecl::HeapModule { .. } => "heap_module",
            ObjectDecl::HopfModule { .. } => "hopf_module",
            ObjectDecl::RbModule { .. } => "rb_module",
        }
    }
}

/// A fully resolved bundle: typed objects in declaration order.
#[derive(Debug, Clone)]
pub struct Bundle {
    pub field: FieldSpec,
    pub name: String,
    pub provenance: Option<String>,
    raw: BundleFile,
    order: Vec<(String, String)>,
    spaces: BTreeMap<String, Vec<String>>,
    coalgebras: BTreeMap<String, Coalgebra>,
    heaps: BTreeMap<String, HopfHeap>,
    hopfs: BTreeMap<String, HopfAlgebra>,
    trusses: BTreeMap<String, HopfTruss>,
    cocycle_trusses: BTreeMap<String, CocycleTruss>,
    braces: BTreeMap<String, HopfBrace>,
    maps: BTreeMap<String, MapObject>,
    vectors: BTreeMap<String, (String, Vec<Scalar>)>,
    rb_operators: BTreeMap<String, RBHeap>,
    rb_cooperators: BTreeMap<String, RBCooperator>,
    heap_modules: BTreeMap<String, HeapModule>,
    hopf_modules: BTreeMap<String, HopfModule>,
    rb_modules: BTreeMap<String, RBHeapModule>,
}

/// A named linear map between two named spaces, stored `(in, out)` in the
/// file and `(out, in)` as a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapObject {
    pub from: String,
    pub to: String,
    pub map: LinearMap,
}

fn parse_side(s: &str) -> Result<Side> {
    match s {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        other => Err(Error::ParseError {
            position: "side".into(),
            message: format!("expected left or right, got `{other}`"),
        }),
    }
}

fn side_str(s: Side) -> &'static str {
    match s {
        Side::Left => "left",
        Side::Right => "right",
    }
}

fn tensor_from_entries(
    field: FieldSpec,
    dims: Vec<usize>,
    entries: &[Entry],
    what: &str,
) -> Result<SparseTensor> {
    let mut t = SparseTensor::zero(field, dims.clone());
    for e in entries {
        if e.idx.len() != dims.len() {
            return Err(Error::DimMismatch(format!(
                "{what}: entry {:?} has {} indices, expected {}",
                e.idx,
                e.idx.len(),
                dims.len()
            )));
        }
        for (leg, (&i, &d)) in e.idx.iter().zip(&dims).enumerate() {
            if i >= d {
                return Err(Error::DimMismatch(format!(
                    "{what}: index {i} out of range for leg {leg} of dimension {d}"
                )));
            }
        }
        let v = Scalar::parse(&e.coeff, field)?;
        t.add_at(e.idx.clone(), v);
    }
    Ok(t)
}

fn entries_of(t: &SparseTensor, field: FieldSpec) -> Vec<Entry> {
    t.iter()
        .map(|(idx, v)| Entry {
            idx: idx.clone(),
            coeff: v.canonical_string(field),
        })
        .collect()
}

impl Bundle {
    pub fn load(path: &Path) -> Result<Bundle> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str(&text, None)
    }

    pub fn load_with_field(path: &Path, field: Option<FieldSpec>) -> Result<Bundle> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str(&text, field)
    }

    /// Parse and resolve; `field_override` reinterprets every scalar in
    /// another field (the CLI `--field` flag).
    pub fn from_str(text: &str, field_override: Option<FieldSpec>) -> Result<Bundle> {
        let file: BundleFile = serde_json::from_str(text).map_err(|e| Error::ParseError {
            position: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        Self::resolve(&file, field_override)
    }

    pub fn resolve(file: &BundleFile, field_override: Option<FieldSpec>) -> Result<Bundle> {
        let field = match field_override {
            Some(f) => f,
            None => FieldSpec::parse(&file.field)?,
        };
        let mut b = Bundle {
            field,
            name: file.name.clone(),
            provenance: file.provenance.clone(),
            raw: file.clone(),
            order: Vec::new(),
            spaces: BTreeMap::new(),
            coalgebras: BTreeMap::new(),
            heaps: BTreeMap::new(),
            hopfs: BTreeMap::new(),
            trusses: BTreeMap::new(),
            cocycle_trusses: BTreeMap::new(),
            braces: BTreeMap::new(),
            maps: BTreeMap::new(),
            vectors: BTreeMap::new(),
            rb_operators: BTreeMap::new(),
            rb_cooperators: BTreeMap::new(),
            heap_modules: BTreeMap::new(),
            hopf_modules: BTreeMap::new(),
            rb_modules: BTreeMap::new(),
        };
        for decl in &file.objects {
            b.add_decl(decl)?;
        }
        Ok(b)
    }

    fn register(&mut self, kind: &str, name: &str) -> Result<()> {
        if self.spaces.contains_key(name) || self.order.iter().any(|(_, n)| n == name) {
            return Err(Error::ParseError {
                position: format!("object `{name}`"),
                message: "duplicate object name".into(),
            });
        }
        self.order.push((kind.to_string(), name.to_string()));
        Ok(())
    }

    /// Dimension and basis names of a named space (coalgebras and modules
    /// register their underlying spaces; `space` declares a bare one).
    pub fn space(&self, name: &str) -> Result<(usize, &[String])> {
        self.spaces
            .get(name)
            .map(|names| (names.len(), names.as_slice()))
            .ok_or_else(|| Error::DanglingReference(name.to_string()))
    }

    fn add_decl(&mut self, decl: &ObjectDecl) -> Result<()> {
        let field = self.field;
        match decl {
            ObjectDecl::Space { name, dim } => {
                self.register("space", name)?;
                let names = (0..*dim).map(|i| format!("v{i}")).collect();
                self.spaces.insert(name.clone(), names);
            }
            ObjectDecl::Coalgebra {
                name,
                basis,
                comul,
                counit,
            } => {
                self.register("coalgebra", name)?;
                let n = basis.len();
                let comul = tensor_from_entries(field, vec![n, n, n], comul, "comul")?;
                let counit = tensor_from_entries(field, vec![n], counit, "counit")?;
                let c = Coalgebra::new(field, basis.clone(), comul, counit)?;
                self.spaces.insert(name.clone(), basis.clone());
                self.coalgebras.insert(name.clone(), c);
            }
            ObjectDecl::Heap {
                name,
                coalgebra,
                chi,
            } => {
                self.register("heap", name)?;
                let c = self.coalgebra(coalgebra)?.clone();
                let n = c.dim();
                let chi = tensor_from_entries(field, vec![n, n, n, n], chi, "chi")?;
                self.heaps.insert(name.clone(), HopfHeap::new(c, chi)?);
            }
            ObjectDecl::Hopf {
                name,
                coalgebra,
                mul,
                unit,
                antipode,
            } => {
                self.register("hopf", name)?;
                let c = self.coalgebra(coalgebra)?.clone();
                let n = c.dim();
                let mul = tensor_from_entries(field, vec![n, n, n], mul, "mul")?;
                let unit_t = tensor_from_entries(field, vec![n], unit, "unit")?;
                let s = tensor_from_entries(field, vec![n, n], antipode, "antipode")?
                    .permute_legs(&[1, 0])?;
                let h = HopfAlgebra::new(
                    c,
                    mul,
                    GroupLike::from_coords(unit_t.to_vec()),
                    LinearMap::new(s)?,
                )?;
                self.hopfs.insert(name.clone(), h);
            }
            ObjectDecl::Truss { name, heap, circ } => {
                self.register("truss", name)?;
                let hp = self.heap(heap)?.clone();
                let n = hp.dim();
                let circ = tensor_from_entries(field, vec![n, n, n], circ, "circ")?;
                self.trusses.insert(name.clone(), HopfTruss::new(hp, circ)?);
            }
            ObjectDecl::CocycleTruss {
                name,
                hopf,
                circ,
                sigma,
            } => {
                self.register("cocycle_truss", name)?;
                let h = self.hopf(hopf)?.clone();
                let n = h.dim();
                let circ = tensor_from_entries(field, vec![n, n, n], circ, "circ")?;
                let sigma = tensor_from_entries(field, vec![n, n], sigma, "sigma")?
                    .permute_legs(&[1, 0])?;
                self.cocycle_trusses.insert(
                    name.clone(),
                    CocycleTruss::new(h, circ, LinearMap::new(sigma)?)?,
                );
            }
            ObjectDecl::Brace {
                name,
                hopf_dot,
                hopf_circ,
            } => {
                self.register("brace", name)?;
                let d = self.hopf(hopf_dot)?.clone();
                let c = self.hopf(hopf_circ)?.clone();
                self.braces.insert(name.clone(), HopfBrace::new(d, c)?);
            }
            ObjectDecl::Map {
                name,
                from,
                to,
                entries,
            } => {
                self.register("map", name)?;
                let (nf, _) = self.space(from)?;
                let (nt, _) = self.space(to)?;
                let t = tensor_from_entries(field, vec![nf, nt], entries, "map")?
                    .permute_legs(&[1, 0])?;
                self.maps.insert(
                    name.clone(),
                    MapObject {
                        from: from.clone(),
                        to: to.clone(),
                        map: LinearMap::new(t)?,
                    },
                );
            }
            ObjectDecl::Vector {
                name,
                space,
                entries,
            } => {
                self.register("vector", name)?;
                let (n, _) = self.space(space)?;
                let t = tensor_from_entries(field, vec![n], entries, "vector")?;
                self.vectors
                    .insert(name.clone(), (space.clone(), t.to_vec()));
            }
            ObjectDecl::RbOperator { name, heap, map } => {
                self.register("rb_operator", name)?;
                let hp = self.heap(heap)?.clone();
                let m = self.map(map)?.map.clone();
                self.rb_operators.insert(name.clone(), RBHeap::new(hp, m)?);
            }
            ObjectDecl::RbCooperator { name, hopf, map } => {
                self.register("rb_cooperator", name)?;
                let h = self.hopf(hopf)?.clone();
                let m = self.map(map)?.map.clone();
                self.rb_cooperators
                    .insert(name.clone(), RBCooperator::new(h, m)?);
            }
            ObjectDecl::HeapModule {
                name,
                heap,
                side,
                dim,
                action,
                coaction,
            } => {
                self.register("heap_module", name)?;
                let hp = self.heap(heap)?.clone();
                let n = hp.dim();
                let side = parse_side(side)?;
                let (act_dims, coact_dims) = match side {
                    Side::Left => (vec![n, n, *dim, *dim], vec![*dim, n, *dim]),
                    Side::Right => (vec![*dim, n, n, *dim], vec![*dim, *dim, n]),
                };
                let action = tensor_from_entries(field, act_dims, action, "action")?;
                let coaction = tensor_from_entries(field, coact_dims, coaction, "coaction")?;
                let m = HeapModule::new(hp, side, *dim, action, coaction)?;
                self.spaces
                    .insert(name.clone(), m.basis_names().to_vec());
                self.heap_modules.insert(name.clone(), m);
            }
            ObjectDecl::HopfModule {
                name,
                hopf,
                side,
                dim,
                action,
                coaction,
            } => {
                self.register("hopf_module", name)?;
                let h = self.hopf(hopf)?.clone();
                let n = h.dim();
                let side = parse_side(side)?;
                let (act_dims, coact_dims) = match side {
                    Side::Left => (vec![n, *dim, *dim], vec![*dim, n, *dim]),
                    Side::Right => (vec![*dim, n, *dim], vec![*dim, *dim, n]),
                };
                let action = tensor_from_entries(field, act_dims, action, "action")?;
                let coaction = tensor_from_entries(field, coact_dims, coaction, "coaction")?;
                let m = HopfModule::new(h, side, *dim, action, coaction)?;
                self.spaces
                    .insert(name.clone(), (0..*dim).map(|i| format!("m{i}")).collect());
                self.hopf_modules.insert(name.clone(), m);
            }
            ObjectDecl::RbModule {
                name,
                rb,
                module,
                t,
            } => {
                self.register("rb_module", name)?;
                let rb = self.rb_operator(rb)?.clone();
                let module = self.heap_module(module)?.clone();
                let t = self.map(t)?.map.clone();
                self.rb_modules
                    .insert(name.clone(), RBHeapModule::new(module, rb, t)?);
            }
        }
        Ok(())
    }

    pub fn order(&self) -> &[(String, String)] {
        &self.order
    }

    pub fn coalgebra(&self, name: &str) -> Result<&Coalgebra> {
        self.coalgebras
            .get(name)
            .ok_or_else(|| Error::DanglingReference(name.to_string()))
    }

    pub fn heap(&self, name: &str) -> Result<&HopfHeap> {
        self.heaps
            .get(name)
            .ok_or_else(|| Error::DanglingReference(name.to_string()))
    }

    pub fn hopf(&self, name: &str) -> Result<&HopfAlgebra> {
        self.hopfs
            .get(name)
            .ok_or_else(|| Error::DanglingReference(name.to_string()))
    }

    pub fn truss(&self, name: &str) -> Result<&HopfTruss> {
        self.trusses
            .get(name)
            .ok_or_else(|| Error::DanglingReference(name.to_string()))
    }

    pub fn cocycle_truss(&self, name: &str) -> Result<&CocycleTruss> {
        self.cocycle_trusses
            .get(name)
            .ok_or_else(|| Error::DanglingReference(name.to_string()))
    }

    pub fn brace(&self, name: &str) -> Result<&HopfBrace> {
        self.braces
            .get(name)
            .ok_or_else(|| Error::DanglingReference(name.to_string()))
    }

    pub fn map(&self, name: &str) -> Result<&MapObject> {
        self.maps
            .get(name)
            .ok_or_else(|| Error::DanglingReference(name.to_string()))
    }

    pub fn vector(&self, name: &str) -> Result<&(String, Vec<Scalar>)> {
        self.vectors
            .get(name)
            .ok_or_else(|| Error::DanglingReference(name.to_string()))
    }

    pub fn rb_operator(&self, name: &str) -> Result<&RBHeap> {
        self.rb_operators
            .get(name)
            .ok_or_else(|| Error::DanglingReference(name.to_string()))
    }

    pub fn rb_cooperator(&self, name: &str) -> Result<&RBCooperator> {
        self.rb_cooperators
            .get(name)
            .ok_or_else(|| Error::DanglingReference(name.to_string()))
    }

    pub fn heap_module(&self, name: &str) -> Result<&HeapModule> {
        self.heap_modules
            .get(name)
            .ok_or_else(|| Error::DanglingReference(name.to_string()))
    }

    pub fn hopf_module(&self, name: &str) -> Result<&HopfModule> {
        self.hopf_modules
            .get(name)
            .ok_or_else(|| Error::DanglingReference(name.to_string()))
    }

    pub fn rb_module(&self, name: &str) -> Result<&RBHeapModule> {
        self.rb_modules
            .get(name)
            .ok_or_else(|| Error::DanglingReference(name.to_string()))
    }

    pub fn names_of_kind(&self, kind: &str) -> Vec<String> {
        self.order
            .iter()
            .filter(|(k, _)| k == kind)
            .map(|(_, n)| n.clone())
            .collect()
    }

    /// The unique object of a kind, or an error naming the choices.
    pub fn only_of_kind(&self, kind: &str) -> Result<String> {
        let names = self.names_of_kind(kind);
        match names.len() {
            1 => Ok(names.into_iter().next().unwrap()),
            0 => Err(Error::DanglingReference(format!("<no {kind} in bundle>"))),
            _ => Err(Error::ParseError {
                position: format!("{kind} selection"),
                message: format!("several candidates: {}", names.join(", ")),
            }),
        }
    }
}

impl Bundle {
    /// Re-serialize the loaded bundle canonically: entries sorted and
    /// merged, scalars in canonical form. Canonical inputs round-trip to
    /// identical bytes.
    pub fn canonical_text(&self) -> Result<String> {
        Ok(canonical_json(&canonicalize(&self.raw, self.field)?))
    }
}

fn canon_entries(entries: &[Entry], field: FieldSpec) -> Result<Vec<Entry>> {
    let mut merged: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
    for e in entries {
        let v = Scalar::parse(&e.coeff, field)?;
        let cur = merged.entry(e.idx.clone()).or_insert_with(Scalar::zero);
        *cur = cur.add(&v);
    }
    Ok(merged
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(idx, v)| Entry {
            idx,
            coeff: v.canonical_string(field),
        })
        .collect())
}

/// Normalize a parsed file into the canonical writable layout.
pub fn canonicalize(file: &BundleFile, field: FieldSpec) -> Result<BundleFileOut> {
    let mut objects = Vec::with_capacity(file.objects.len());
    for decl in &file.objects {
        let kind = decl.kind().to_string();
        let name = decl.name().to_string();
        let fields: Vec<(String, DeclValue)> = match decl {
            ObjectDecl::Space { dim, .. } => vec![("dim".into(), DeclValue::Num(*dim))],
            ObjectDecl::Coalgebra {
                basis,
                comul,
                counit,
                ..
            } => vec![
                ("basis".into(), DeclValue::StrList(basis.clone())),
                ("comul".into(), DeclValue::Entries(canon_entries(comul, field)?)),
                (
                    "counit".into(),
                    DeclValue::Entries(canon_entries(counit, field)?),
                ),
            ],
            ObjectDecl::Heap { coalgebra, chi, .. } => vec![
                ("coalgebra".into(), DeclValue::Str(coalgebra.clone())),
                ("chi".into(), DeclValue::Entries(canon_entries(chi, field)?)),
            ],
            ObjectDecl::Hopf {
                coalgebra,
                mul,
                unit,
                antipode,
                ..
            } => vec![
                ("coalgebra".into(), DeclValue::Str(coalgebra.clone())),
                ("mul".into(), DeclValue::Entries(canon_entries(mul, field)?)),
                ("unit".into(), DeclValue::Entries(canon_entries(unit, field)?)),
                (
                    "antipode".into(),
                    DeclValue::Entries(canon_entries(antipode, field)?),
                ),
            ],
            ObjectDecl::Truss { heap, circ, .. } => vec![
                ("heap".into(), DeclValue::Str(heap.clone())),
                ("circ".into(), DeclValue::Entries(canon_entries(circ, field)?)),
            ],
            ObjectDecl::CocycleTruss {
                hopf, circ, sigma, ..
            } => vec![
                ("hopf".into(), DeclValue::Str(hopf.clone())),
                ("circ".into(), DeclValue::Entries(canon_entries(circ, field)?)),
                (
                    "sigma".into(),
                    DeclValue::Entries(canon_entries(sigma, field)?),
                ),
            ],
            ObjectDecl::Brace {
                hopf_dot,
                hopf_circ,
                ..
            } => vec![
                ("hopf_dot".into(), DeclValue::Str(hopf_dot.clone())),
                ("hopf_circ".into(), DeclValue::Str(hopf_circ.clone())),
            ],
            ObjectDecl::Map {
                from, to, entries, ..
            } => vec![
                ("from".into(), DeclValue::Str(from.clone())),
                ("to".into(), DeclValue::Str(to.clone())),
                (
                    "entries".into(),
                    DeclValue::Entries(canon_entries(entries, field)?),
                ),
            ],
            ObjectDecl::Vector { space, entries, .. } => vec![
                ("space".into(), DeclValue::Str(space.clone())),
                (
                    "entries".into(),
                    DeclValue::Entries(canon_entries(entries, field)?),
                ),
            ],
            ObjectDecl::RbOperator { heap, map, .. } => vec![
                ("heap".into(), DeclValue::Str(heap.clone())),
                ("map".into(), DeclValue::Str(map.clone())),
            ],
            ObjectDecl::RbCooperator { hopf, map, .. } => vec![
                ("hopf".into(), DeclValue::Str(hopf.clone())),
                ("map".into(), DeclValue::Str(map.clone())),
            ],
            ObjectDecl::HeapModule {
                heap,
                side,
                dim,
                action,
                coaction,
                ..
            } => vec![
                ("heap".into(), DeclValue::Str(heap.clone())),
                ("side".into(), DeclValue::Str(side.clone())),
                ("dim".into(), DeclValue::Num(*dim)),
                (
                    "action".into(),
                    DeclValue::Entries(canon_entries(action, field)?),
                ),
                (
                    "coaction".into(),
                    DeclValue::Entries(canon_entries(coaction, field)?),
                ),
            ],
            ObjectDecl::HopfModule {
                hopf,
                side,
                dim,
                action,
                coaction,
                ..
            } => vec![
                ("hopf".into(), DeclValue::Str(hopf.clone())),
                ("side".into(), DeclValue::Str(side.clone())),
                ("dim".into(), DeclValue::Num(*dim)),
                (
                    "action".into(),
                    DeclValue::Entries(canon_entries(action, field)?),
                ),
                (
                    "coaction".into(),
                    DeclValue::Entries(canon_entries(coaction, field)?),
                ),
            ],
            ObjectDecl::RbModule { rb, module, t, .. } => vec![
                ("rb".into(), DeclValue::Str(rb.clone())),
                ("module".into(), DeclValue::Str(module.clone())),
                ("t".into(), DeclValue::Str(t.clone())),
            ],
        };
        objects.push(DeclOut { kind, name, fields });
    }
    Ok(BundleFileOut {
        field: file.field.clone(),
        name: file.name.clone(),
        provenance: file.provenance.clone(),
        objects,
    })
}

/// Serialize a raw bundle file in the canonical layout.
pub fn canonical_json(file: &BundleFileOut) -> String {
    let mut w = Writer::default();
    w.line("{");
    w.indent += 1;
    w.kv_str("field", &file.field, true);
    w.kv_str("name", &file.name, true);
    if let Some(p) = &file.provenance {
        w.kv_str("provenance", p, true);
    }
    w.line("\"objects\": [");
    w.indent += 1;
    for (i, obj) in file.objects.iter().enumerate() {
        obj.write(&mut w, i + 1 < file.objects.len());
    }
    w.indent -= 1;
    w.line("]");
    w.indent -= 1;
    w.line("}");
    w.out
}

/// Declarations to be written out; mirrors [`ObjectDecl`] but owns the
/// canonical entry lists.
#[derive(Debug, Clone)]
pub struct BundleFileOut {
    pub field: String,
    pub name: String,
    pub provenance: Option<String>,
    pub objects: Vec<DeclOut>,
}

#[derive(Debug, Clone)]
pub struct DeclOut {
    pub kind: String,
    pub name: String,
    /// key → value, where a value is a string, a number, a string list,
    /// or an entry list; written in insertion order
    pub fields: Vec<(String, DeclValue)>,
}

#[derive(Debug, Clone)]
pub enum DeclValue {
    Str(String),
    Num(usize),
    StrList(Vec<String>),
    Entries(Vec<Entry>),
}

#[derive(Default)]
struct Writer {
    out: String,
    indent: usize,
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

impl Writer {
    fn pad(&mut self) {
        for _ in 0..self.indent {
            self.out.push_str("  ");
        }
    }

    fn line(&mut self, s: &str) {
        self.pad();
        self.out.push_str(s);
        self.out.push('\n');
    }

    fn kv_str(&mut self, k: &str, v: &str, comma: bool) {
        self.line(&format!(
            "\"{}\": \"{}\"{}",
            json_escape(k),
            json_escape(v),
            if comma { "," } else { "" }
        ));
    }
}

impl DeclOut {
    fn write(&self, w: &mut Writer, comma: bool) {
        w.line("{");
        w.indent += 1;
        w.kv_str("kind", &self.kind, true);
        let total = self.fields.len();
        w.kv_str("name", &self.name, total > 0);
        for (i, (k, v)) in self.fields.iter().enumerate() {
            let trailing = if i + 1 < total { "," } else { "" };
            match v {
                DeclValue::Str(s) => w.kv_str(k, s, i + 1 < total),
                DeclValue::Num(n) => w.line(&format!("\"{}\": {n}{trailing}", json_escape(k))),
                DeclValue::StrList(items) => {
                    let inner = items
                        .iter()
                        .map(|s| format!("\"{}\"", json_escape(s)))
                        .collect::<Vec<_>>()
                        .join(", ");
                    w.line(&format!("\"{}\": [{inner}]{trailing}", json_escape(k)));
                }
                DeclValue::Entries(entries) => {
                    if entries.is_empty() {
                        w.line(&format!("\"{}\": []{trailing}", json_escape(k)));
                    } else {
                        w.line(&format!("\"{}\": [", json_escape(k)));
                        w.indent += 1;
                        for (j, e) in entries.iter().enumerate() {
                            let idx = e
                                .idx
                                .iter()
                                .map(|i| i.to_string())
                                .collect::<Vec<_>>()
                                .join(", ");
                            let ec = if j + 1 < entries.len() { "," } else { "" };
                            if idx.is_empty() {
                                w.line(&format!("[\"{}\"]{ec}", json_escape(&e.coeff)));
                            } else {
                                w.line(&format!("[{idx}, \"{}\"]{ec}", json_escape(&e.coeff)));
                            }
                        }
                        w.indent -= 1;
                        w.line(&format!("]{trailing}"));
                    }
                }
            }
        }
        w.indent -= 1;
        w.line(if comma { "}," } else { "}" });
    }
}

/// Builders for writing typed objects back out in canonical form.
pub mod write {
    use super::*;

    pub fn coalgebra(name: &str, c: &Coalgebra) -> DeclOut {
        let f = c.field();
        DeclOut {
            kind: "coalgebra".into(),
            name: name.into(),
            fields: vec![
                (
                    "basis".into(),
                    DeclValue::StrList(c.basis_names().to_vec()),
                ),
                ("comul".into(), DeclValue::Entries(entries_of(c.comul(), f))),
                (
                    "counit".into(),
                    DeclValue::Entries(entries_of(c.counit(), f)),
                ),
            ],
        }
    }

    pub fn heap(name: &str, coalgebra: &str, h: &HopfHeap) -> DeclOut {
        DeclOut {
            kind: "heap".into(),
            name: name.into(),
            fields: vec![
                ("coalgebra".into(), DeclValue::Str(coalgebra.into())),
                (
                    "chi".into(),
                    DeclValue::Entries(entries_of(h.chi(), h.field())),
                ),
            ],
        }
    }

    pub fn hopf(name: &str, coalgebra: &str, h: &HopfAlgebra) -> DeclOut {
        let f = h.field();
        let unit_t = SparseTensor::from_vec(f, h.unit().coords());
        let s_file = h
            .antipode()
            .matrix()
            .permute_legs(&[1, 0])
            .expect("2-leg swap");
        DeclOut {
            kind: "hopf".into(),
            name: name.into(),
            fields: vec![
                ("coalgebra".into(), DeclValue::Str(coalgebra.into())),
                ("mul".into(), DeclValue::Entries(entries_of(h.mul(), f))),
                ("unit".into(), DeclValue::Entries(entries_of(&unit_t, f))),
                (
                    "antipode".into(),
                    DeclValue::Entries(entries_of(&s_file, f)),
                ),
            ],
        }
    }

    pub fn truss(name: &str, heap: &str, t: &HopfTruss) -> DeclOut {
        DeclOut {
            kind: "truss".into(),
            name: name.into(),
            fields: vec![
                ("heap".into(), DeclValue::Str(heap.into())),
                (
                    "circ".into(),
                    DeclValue::Entries(entries_of(t.circ(), t.heap().field())),
                ),
            ],
        }
    }

    pub fn cocycle_truss(name: &str, hopf: &str, t: &CocycleTruss) -> DeclOut {
        let f = t.hopf().field();
        let sigma_file = t
            .sigma()
            .matrix()
            .permute_legs(&[1, 0])
            .expect("2-leg swap");
        DeclOut {
            kind: "cocycle_truss".into(),
            name: name.into(),
            fields: vec![
                ("hopf".into(), DeclValue::Str(hopf.into())),
                ("circ".into(), DeclValue::Entries(entries_of(t.circ(), f))),
                (
                    "sigma".into(),
                    DeclValue::Entries(entries_of(&sigma_file, f)),
                ),
            ],
        }
    }

    pub fn linear_map(name: &str, from: &str, to: &str, m: &LinearMap) -> DeclOut {
        let file_t = m.matrix().permute_legs(&[1, 0]).expect("2-leg swap");
        DeclOut {
            kind: "map".into(),
            name: name.into(),
            fields: vec![
                ("from".into(), DeclValue::Str(from.into())),
                ("to".into(), DeclValue::Str(to.into())),
                (
                    "entries".into(),
                    DeclValue::Entries(entries_of(&file_t, m.field())),
                ),
            ],
        }
    }

    pub fn vector(name: &str, space: &str, field: FieldSpec, coords: &[Scalar]) -> DeclOut {
        let t = SparseTensor::from_vec(field, coords);
        DeclOut {
            kind: "vector".into(),
            name: name.into(),
            fields: vec![
                ("space".into(), DeclValue::Str(space.into())),
                ("entries".into(), DeclValue::Entries(entries_of(&t, field))),
            ],
        }
    }

    pub fn rb_operator(name: &str, heap: &str, map: &str) -> DeclOut {
        DeclOut {
            kind: "rb_operator".into(),
            name: name.into(),
            fields: vec![
                ("heap".into(), DeclValue::Str(heap.into())),
                ("map".into(), DeclValue::Str(map.into())),
            ],
        }
    }

    pub fn rb_cooperator(name: &str, hopf: &str, map: &str) -> DeclOut {
        DeclOut {
            kind: "rb_cooperator".into(),
            name: name.into(),
            fields: vec![
                ("hopf".into(), DeclValue::Str(hopf.into())),
                ("map".into(), DeclValue::Str(map.into())),
            ],
        }
    }

    pub fn heap_module(name: &str, heap: &str, m: &HeapModule) -> DeclOut {
        let f = m.parent().field();
        DeclOut {
            kind: "heap_module".into(),
            name: name.into(),
            fields: vec![
                ("heap".into(), DeclValue::Str(heap.into())),
                ("side".into(), DeclValue::Str(side_str(m.side()).into())),
                ("dim".into(), DeclValue::Num(m.dim_m())),
                ("action".into(), DeclValue::Entries(entries_of(m.action(), f))),
                (
                    "coaction".into(),
                    DeclValue::Entries(entries_of(m.coaction(), f)),
                ),
            ],
        }
    }

    pub fn hopf_module(name: &str, hopf: &str, m: &HopfModule) -> DeclOut {
        let f = m.parent().field();
        DeclOut {
            kind: "hopf_module".into(),
            name: name.into(),
            fields: vec![
                ("hopf".into(), DeclValue::Str(hopf.into())),
                ("side".into(), DeclValue::Str(side_str(m.side()).into())),
                ("dim".into(), DeclValue::Num(m.dim_m())),
                ("action".into(), DeclValue::Entries(entries_of(m.action(), f))),
                (
                    "coaction".into(),
                    DeclValue::Entries(entries_of(m.coaction(), f)),
                ),
            ],
        }
    }

    pub fn rb_module(name: &str, rb: &str, module: &str, t: &str) -> DeclOut {
        DeclOut {
            kind: "rb_module".into(),
            name: name.into(),
            fields: vec![
                ("rb".into(), DeclValue::Str(rb.into())),
                ("module".into(), DeclValue::Str(module.into())),
                ("t".into(), DeclValue::Str(t.into())),
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_error_for_zero_denominator() {
        let text = r#"{
  "field": "Q",
  "name": "bad",
  "objects": [
    {
      "kind": "vector",
      "name": "v",
      "space": "C",
      "entries": [[0, "1/0"]]
    },
    {
      "kind": "space",
      "name": "C",
      "dim": 1
    }
  ]
}"#;
        // the dangling space comes first, then the scalar
        let err = Bundle::from_str(text, None).unwrap_err();
        assert!(matches!(err, Error::DanglingReference(_)));
        let text2 = text.replace("\"space\",", "XX");
        assert!(Bundle::from_str(&text2, None).is_err());
    }

    #[test]
    fn out_of_range_index_is_dim_mismatch() {
        let text = r#"{
  "field": "Q",
  "name": "bad",
  "objects": [
    {
      "kind": "coalgebra",
      "name": "C",
      "basis": ["a", "b"],
      "comul": [
        [0, 0, 5, "1/1"]
      ],
      "counit": [
        [0, "1/1"]
      ]
    }
  ]
}"#;
        assert!(matches!(
            Bundle::from_str(text, None).unwrap_err(),
            Error::DimMismatch(_)
        ));
    }

    #[test]
    fn scalar_parse_error_reported() {
        let text = r#"{
  "field": "Q",
  "name": "bad",
  "objects": [
    {
      "kind": "space",
      "name": "V",
      "dim": 1
    },
    {
      "kind": "vector",
      "name": "v",
      "space": "V",
      "entries": [[0, "1/0"]]
    }
  ]
}"#;
        assert!(matches!(
            Bundle::from_str(text, None).unwrap_err(),
            Error::ParseError { .. }
        ));
    }
}
