//! Coalgebras by structure constants: axiom verification, group-like
//! search, opposite and tensor-product coalgebras.

use crate::error::{Error, Result};
use crate::linalg;
use crate::map::{LinearMap, TensorOp};
use crate::poly::{solve_system, MultiPoly};
use crate::report::{uniform_names, VerificationReport};
use crate::scalar::{FieldSpec, Scalar};
use crate::tensor::{multi_indices, SparseTensor};
use std::sync::OnceLock;

/// A finite-dimensional coalgebra `(C, Δ, ε)`.
///
/// `comul` has three legs `(input, output, output)`: the entry at
/// `(i, j, k)` is the coefficient of `e_j ⊗ e_k` in `Δ(e_i)`. `counit`
/// has a single input leg.
#[derive(Debug, Clone)]
pub struct Coalgebra {
    field: FieldSpec,
    basis_names: Vec<String>,
    comul: SparseTensor,
    counit: SparseTensor,
    verified: OnceLock<bool>,
    delta3: OnceLock<SparseTensor>,
    delta4: OnceLock<SparseTensor>,
}

impl PartialEq for Coalgebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.basis_names == other.basis_names
            && self.comul == other.comul
            && self.counit == other.counit
    }
}

impl Coalgebra {
    pub fn new(
        field: FieldSpec,
        basis_names: Vec<String>,
        comul: SparseTensor,
        counit: SparseTensor,
    ) -> Result<Self> {
        let n = basis_names.len();
        if comul.dims() != [n, n, n] {
            return Err(Error::DimMismatch(format!(
                "comultiplication legs {:?} vs dimension {n}",
                comul.dims()
            )));
        }
        if counit.dims() != [n] {
            return Err(Error::DimMismatch(format!(
                "counit legs {:?} vs dimension {n}",
                counit.dims()
            )));
        }
        if comul.field() != field || counit.field() != field {
            return Err(Error::FieldMismatch("coalgebra tensors".into()));
        }
        Ok(Coalgebra {
            field,
            basis_names,
            comul,
            counit,
            verified: OnceLock::new(),
            delta3: OnceLock::new(),
            delta4: OnceLock::new(),
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn comul(&self) -> &SparseTensor {
        &self.comul
    }

    pub fn counit(&self) -> &SparseTensor {
        &self.counit
    }

    pub fn names_fn(&self) -> impl Fn(usize, usize) -> String {
        uniform_names(self.basis_names.clone())
    }

    pub fn id_op(&self) -> TensorOp {
        TensorOp::identity(self.field, &[self.dim()])
    }

    /// `Δ` as a 1-input/2-output operator.
    pub fn delta_op(&self) -> TensorOp {
        TensorOp::new(self.comul.clone(), 1).expect("comul arity")
    }

    /// `ε` as a 1-input/0-output operator.
    pub fn counit_op(&self) -> TensorOp {
        TensorOp::new(self.counit.clone(), 1).expect("counit arity")
    }

    /// The iterated comultiplication `Δ^(k): C → C^⊗k` for `k ≥ 1`;
    /// `k = 3, 4` are cached since the twisted-comultiplication checks
    /// reuse them heavily.
    pub fn delta_n(&self, k: usize) -> TensorOp {
        assert!(k >= 1);
        match k {
            1 => self.id_op(),
            2 => self.delta_op(),
            3 => TensorOp::new(
                self.delta3
                    .get_or_init(|| self.expand_delta(3).into_tensor())
                    .clone(),
                1,
            )
            .expect("delta3"),
            4 => TensorOp::new(
                self.delta4
                    .get_or_init(|| self.expand_delta(4).into_tensor())
                    .clone(),
                1,
            )
            .expect("delta4"),
            _ => self.expand_delta(k),
        }
    }

    fn expand_delta(&self, k: usize) -> TensorOp {
        let mut op = self.delta_op();
        for _ in 2..k {
            // coassociativity makes the expansion side irrelevant
            let rest = vec![self.dim(); op.outputs() - 1];
            let stage = self
                .delta_op()
                .tensor(&TensorOp::identity(self.field, &rest))
                .expect("same field");
            op = op.then(&stage).expect("dims line up");
        }
        op
    }

    /// Check coassociativity and both counit laws.
    pub fn verify(&self) -> VerificationReport {
        let names = self.names_fn();
        let mut report = VerificationReport::new("coalgebra");
        let delta = self.delta_op();
        let eps = self.counit_op();
        let id = self.id_op();

        let left = delta
            .then(&delta.tensor(&id).expect("field"))
            .expect("dims");
        let right = delta
            .then(&id.tensor(&delta).expect("field"))
            .expect("dims");
        report.check_identity(
            "coalg.coassoc",
            "(Δ⊗id)Δ = (id⊗Δ)Δ",
            &left,
            &right,
            &names,
        );

        let l = delta.then(&eps.tensor(&id).expect("field")).expect("dims");
        report.check_identity("coalg.counit.left", "(ε⊗id)Δ = id", &l, &id, &names);
        let r = delta.then(&id.tensor(&eps).expect("field")).expect("dims");
        report.check_identity("coalg.counit.right", "(id⊗ε)Δ = id", &r, &id, &names);

        if report.passed() {
            let _ = self.verified.set(true);
        }
        report
    }

    pub fn require_verified(&self) -> Result<()> {
        if let Some(true) = self.verified.get() {
            return Ok(());
        }
        let report = self.verify();
        if report.passed() {
            Ok(())
        } else {
            let check = report
                .first_failure()
                .map(|c| c.id.clone())
                .unwrap_or_default();
            Err(Error::ConstructionInvalid {
                subject: "coalgebra".into(),
                check,
            })
        }
    }

    /// True iff `swap ∘ Δ = Δ` exactly.
    pub fn is_cocommutative(&self) -> Result<bool> {
        self.require_verified()?;
        let swapped = self.comul.permute_legs(&[0, 2, 1])?;
        Ok(swapped == self.comul)
    }

    /// The opposite coalgebra (comultiplication legs swapped).
    pub fn opposite(&self) -> Result<Coalgebra> {
        self.require_verified()?;
        let out = Coalgebra::new(
            self.field,
            self.basis_names.clone(),
            self.comul.permute_legs(&[0, 2, 1])?,
            self.counit.clone(),
        )?;
        out.require_verified()?;
        Ok(out)
    }

    /// Tensor-product coalgebra with `Δ(a⊗h) = a1⊗h1 ⊗ a2⊗h2` and
    /// `ε(a⊗h) = ε(a)ε(h)`.
    pub fn tensor(&self, other: &Coalgebra) -> Result<Coalgebra> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!(
                "{} vs {}",
                self.field.name(),
                other.field.name()
            )));
        }
        self.require_verified()?;
        other.require_verified()?;
        let (_n, m) = (self.dim(), other.dim());
        let pair = |i: usize, p: usize| i * m + p;
        let nm = self.dim() * m;
        let mut comul = SparseTensor::zero(self.field, vec![nm, nm, nm]);
        for (ci, cv) in self.comul.iter() {
            for (di, dv) in other.comul.iter() {
                comul.add_at(
                    vec![pair(ci[0], di[0]), pair(ci[1], di[1]), pair(ci[2], di[2])],
                    cv.mul(dv, self.field),
                );
            }
        }
        let mut counit = SparseTensor::zero(self.field, vec![nm]);
        for (ci, cv) in self.counit.iter() {
            for (di, dv) in other.counit.iter() {
                counit.add_at(vec![pair(ci[0], di[0])], cv.mul(dv, self.field));
            }
        }
        let names = self
            .basis_names
            .iter()
            .flat_map(|a| other.basis_names.iter().map(move |h| format!("{a}⊗{h}")))
            .collect();
        let out = Coalgebra::new(self.field, names, comul, counit)?;
        out.require_verified()?;
        Ok(out)
    }

    /// Exact check of `Δ(x) = x⊗x` and `ε(x) = 1`.
    pub fn is_grouplike(&self, coords: &[Scalar]) -> bool {
        if coords.len() != self.dim() {
            return false;
        }
        let f = self.field;
        let v = SparseTensor::from_vec(f, coords);
        let dx = self.comul.contract(&v, &[(0, 0)]).expect("dims");
        let xx = v.tensor_product(&v).expect("field");
        if dx != xx {
            return false;
        }
        let e = self.counit.contract(&v, &[(0, 0)]).expect("dims");
        e.get(&[]).is_one()
    }

    pub fn grouplike(&self, coords: Vec<Scalar>) -> Result<GroupLike> {
        if self.is_grouplike(&coords) {
            Ok(GroupLike { coords })
        } else {
            let txt = coords
                .iter()
                .map(|s| s.canonical_string(self.field))
                .collect::<Vec<_>>()
                .join(", ");
            Err(Error::NotGroupLike(format!("[{txt}]")))
        }
    }

    /// Complete group-like search for `dim ≤ 4`, by eliminating the counit
    /// constraint and solving the residual quadratics exactly.
    pub fn find_grouplikes(&self) -> Result<Vec<GroupLike>> {
        self.find_grouplikes_with_hints(&[])
    }

    /// Above dimension 4 only supplied hints are checked; an empty hint
    /// list there is an error.
    pub fn find_grouplikes_with_hints(&self, hints: &[Vec<Scalar>]) -> Result<Vec<GroupLike>> {
        self.require_verified()?;
        let n = self.dim();
        if n > 4 {
            if hints.is_empty() {
                return Err(Error::UnsupportedDimension { dim: n });
            }
            let mut out: Vec<GroupLike> = hints
                .iter()
                .filter(|h| self.is_grouplike(h))
                .map(|h| GroupLike { coords: h.clone() })
                .collect();
            out.sort_by(|a, b| a.coords.cmp(&b.coords));
            out.dedup_by(|a, b| a.coords == b.coords);
            return Ok(out);
        }
        let f = self.field;
        let mut polys = Vec::new();
        // ε(x) = 1
        let mut eps = MultiPoly::constant(n, Scalar::from_int(-1));
        for (idx, v) in self.counit.iter() {
            eps = eps.add(&MultiPoly::var(n, idx[0]).scale(v, f));
        }
        polys.push(eps);
        // Δ(x) = x ⊗ x, coefficientwise
        for jk in multi_indices(&[n, n]) {
            let (j, k) = (jk[0], jk[1]);
            let mut p = MultiPoly::zero(n);
            for i in 0..n {
                let c = self.comul.get(&[i, j, k]);
                if !c.is_zero() {
                    p = p.add(&MultiPoly::var(n, i).scale(&c, f));
                }
            }
            let quad = MultiPoly::var(n, j).mul(&MultiPoly::var(n, k), f);
            polys.push(p.sub(&quad));
        }
        let sols = solve_system(&polys, n, f)?;
        let mut out = Vec::new();
        for s in sols {
            let coords: Vec<Scalar> = (0..n).map(|i| s[&i].clone()).collect();
            // the solver is trusted, but group-likes are cheap to re-check
            debug_assert!(self.is_grouplike(&coords));
            if self.is_grouplike(&coords) {
                out.push(GroupLike { coords });
            }
        }
        out.sort_by(|a, b| a.coords.cmp(&b.coords));
        Ok(out)
    }

    /// Render an element for reports.
    pub fn format_vector(&self, coords: &[Scalar]) -> String {
        let t = SparseTensor::from_vec(self.field, coords);
        if t.is_zero() {
            return "0".into();
        }
        t.iter()
            .map(|(idx, v)| {
                format!(
                    "({})·{}",
                    v.canonical_string(self.field),
                    self.basis_names[idx[0]]
                )
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// An exact solution of `Δ(x) = x⊗x`, `ε(x) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupLike {
    coords: Vec<Scalar>,
}

impl GroupLike {
    /// Wrap raw coordinates without checking the defining equations;
    /// every construction that consumes a group-like re-validates it
    /// against its own coalgebra.
    pub fn from_coords(coords: Vec<Scalar>) -> GroupLike {
        GroupLike { coords }
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn as_tensor(&self, field: FieldSpec) -> SparseTensor {
        SparseTensor::from_vec(field, &self.coords)
    }

    pub fn as_op(&self, field: FieldSpec) -> TensorOp {
        TensorOp::from_vector(&self.as_tensor(field)).expect("vector")
    }
}

/// Whether a linear map is a coalgebra morphism between the two coalgebras.
pub fn is_coalgebra_map(f: &LinearMap, from: &Coalgebra, to: &Coalgebra) -> Result<bool> {
    let op = f.as_op();
    let lhs = op.then(&to.delta_op())?;
    let rhs = from.delta_op().then(&op.tensor(&op)?)?;
    if lhs != rhs {
        return Ok(false);
    }
    Ok(op.then(&to.counit_op())? == from.counit_op())
}

/// Invertible coalgebra endomorphisms, used for conjugation twists.
pub fn is_coalgebra_automorphism(f: &LinearMap, c: &Coalgebra) -> Result<bool> {
    Ok(linalg::is_invertible(f) && is_coalgebra_map(f, c, c)?)
}
