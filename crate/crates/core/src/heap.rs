//! Hopf heaps and Hopf algebras: axiom verification, the two conversions
//! and their roundtrips, Grunspan maps, translations, homomorphism checks,
//! tensor and opposite heaps.

use crate::coalg::{Coalgebra, GroupLike};
use crate::error::{Error, Result};
use crate::linalg;
use crate::map::{LinearMap, TensorOp};
use crate::report::VerificationReport;
use crate::scalar::Scalar;
use crate::tensor::SparseTensor;
use std::sync::OnceLock;

/// A Hopf heap `(C, χ)`: a coalgebra with a ternary bracket.
///
/// `chi` has four legs `(in, in, in, out)`: the entry at `(i, j, k, l)` is
/// the coefficient of `e_l` in `[e_i, e_j, e_k]`.
#[derive(Debug, Clone)]
pub struct HopfHeap {
    coalg: Coalgebra,
    chi: SparseTensor,
    verified: OnceLock<bool>,
}

impl PartialEq for HopfHeap {
    fn eq(&self, other: &Self) -> bool {
        self.coalg == other.coalg && self.chi == other.chi
    }
}

impl HopfHeap {
    pub fn new(coalg: Coalgebra, chi: SparseTensor) -> Result<Self> {
        let n = coalg.dim();
        if chi.dims() != [n, n, n, n] {
            return Err(Error::DimMismatch(format!(
                "bracket legs {:?} vs dimension {n}",
                chi.dims()
            )));
        }
        if chi.field() != coalg.field() {
            return Err(Error::FieldMismatch("bracket tensor".into()));
        }
        Ok(HopfHeap {
            coalg,
            chi,
            verified: OnceLock::new(),
        })
    }

    pub fn coalg(&self) -> &Coalgebra {
        &self.coalg
    }

    pub fn chi(&self) -> &SparseTensor {
        &self.chi
    }

    pub fn dim(&self) -> usize {
        self.coalg.dim()
    }

    pub fn field(&self) -> crate::scalar::FieldSpec {
        self.coalg.field()
    }

    /// The bracket as a 3-input/1-output operator.
    pub fn chi_op(&self) -> TensorOp {
        TensorOp::new(self.chi.clone(), 3).expect("chi arity")
    }

    /// Heap associativity, both Mal'cev laws, and the coalgebra-map laws
    /// for the bracket, on top of the underlying coalgebra axioms.
    pub fn verify(&self) -> VerificationReport {
        let mut report = VerificationReport::new("hopf-heap");
        report.merge("", self.coalg.verify());
        let names = self.coalg.names_fn();
        let chi = self.chi_op();
        let delta = self.coalg.delta_op();
        let eps = self.coalg.counit_op();
        let id = self.coalg.id_op();
        let id2 = TensorOp::identity(self.field(), &[self.dim(), self.dim()]);

        let lhs = chi.tensor(&id2).and_then(|t| t.then(&chi));
        let rhs = id2.tensor(&chi).and_then(|t| t.then(&chi));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => report.check_identity(
                "heap.assoc",
                "[[a,b,c],d,h] = [a,b,[c,d,h]]",
                &l,
                &r,
                &names,
            ),
            _ => report.push_bool("heap.assoc", "[[a,b,c],d,h] = [a,b,[c,d,h]]", false, None),
        }

        let l = delta.tensor(&id).and_then(|t| t.then(&chi)).expect("dims");
        let r = eps.tensor(&id).expect("dims");
        report.check_identity("heap.malcev.left", "[c1,c2,a] = ε(c)a", &l, &r, &names);

        let l = id.tensor(&delta).and_then(|t| t.then(&chi)).expect("dims");
        let r = id.tensor(&eps).expect("dims");
        report.check_identity("heap.malcev.right", "[a,c1,c2] = ε(c)a", &l, &r, &names);

        // Δ[a,b,c] = [a1,b2,c1] ⊗ [a2,b1,c2]
        let lhs = chi.then(&delta).expect("dims");
        let rhs = delta
            .tensor(&delta)
            .and_then(|t| t.tensor(&delta))
            .and_then(|t| t.permute_outputs(&[0, 3, 4, 1, 2, 5]))
            .and_then(|t| t.then(&chi.tensor(&chi)?))
            .expect("dims");
        report.check_identity(
            "heap.comul",
            "Δ[a,b,c] = [a1,b2,c1]⊗[a2,b1,c2]",
            &lhs,
            &rhs,
            &names,
        );

        let lhs = chi.then(&eps).expect("dims");
        let rhs = eps
            .tensor(&eps)
            .and_then(|t| t.tensor(&eps))
            .expect("dims");
        report.check_identity(
            "heap.counit",
            "ε[a,b,c] = ε(a)ε(b)ε(c)",
            &lhs,
            &rhs,
            &names,
        );

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
                subject: "hopf-heap".into(),
                check,
            })
        }
    }

    /// `[x,y,z] = [z,y,x]` exactly.
    pub fn is_commutative(&self) -> Result<bool> {
        self.require_verified()?;
        Ok(self.chi.permute_legs(&[2, 1, 0, 3])? == self.chi)
    }

    /// The opposite bracket on a cocommutative heap.
    pub fn opposite(&self) -> Result<HopfHeap> {
        self.require_verified()?;
        if !self.coalg.is_cocommutative()? {
            return Err(Error::NotCocommutative);
        }
        let out = HopfHeap::new(self.coalg.clone(), self.chi.permute_legs(&[2, 1, 0, 3])?)?;
        out.require_verified()?;
        Ok(out)
    }

    /// Componentwise bracket on the tensor-product coalgebra.
    pub fn tensor(&self, other: &HopfHeap) -> Result<HopfHeap> {
        self.require_verified()?;
        other.require_verified()?;
        let coalg = self.coalg.tensor(other.coalg())?;
        let m = other.dim();
        let pair = |i: usize, p: usize| i * m + p;
        let nm = coalg.dim();
        let f = self.field();
        let mut chi = SparseTensor::zero(f, vec![nm, nm, nm, nm]);
        for (ci, cv) in self.chi.iter() {
            for (di, dv) in other.chi.iter() {
                chi.add_at(
                    vec![
                        pair(ci[0], di[0]),
                        pair(ci[1], di[1]),
                        pair(ci[2], di[2]),
                        pair(ci[3], di[3]),
                    ],
                    cv.mul(dv, f),
                );
            }
        }
        let out = HopfHeap::new(coalg, chi)?;
        out.require_verified()?;
        Ok(out)
    }

    /// Fix a group-like `x` to obtain the Hopf algebra with `ab = [a,x,b]`,
    /// `S(a) = [x,a,x]`, and unit `x`.
    pub fn hopf_at(&self, x: &GroupLike) -> Result<HopfAlgebra> {
        self.require_verified()?;
        if !self.coalg.is_grouplike(x.coords()) {
            return Err(Error::NotGroupLike(self.coalg.format_vector(x.coords())));
        }
        let f = self.field();
        let xt = x.as_tensor(f);
        let mul = self.chi.contract(&xt, &[(1, 0)])?;
        let s = self
            .chi
            .contract(&xt, &[(0, 0)])?
            .contract(&xt, &[(1, 0)])?
            .permute_legs(&[1, 0])?;
        let out = HopfAlgebra::new(self.coalg.clone(), mul, x.clone(), LinearMap::new(s)?)?;
        out.require_verified().map_err(|_| Error::ConstructionInvalid {
            subject: "hopf algebra from heap".into(),
            check: "verify".into(),
        })?;
        Ok(out)
    }

    /// The Grunspan map `c ↦ [c1, [f1, c3, c2], f2]` for any counit-one `f`.
    pub fn grunspan(&self, f_coords: &[Scalar]) -> Result<LinearMap> {
        self.require_verified()?;
        let f = self.field();
        let eps_f = self
            .coalg
            .counit()
            .contract(&SparseTensor::from_vec(f, f_coords), &[(0, 0)])?
            .get(&[]);
        if !eps_f.is_one() {
            return Err(Error::CounitNotOne(eps_f.canonical_string(f)));
        }
        let delta_f = TensorOp::from_vector(&SparseTensor::from_vec(f, f_coords))?
            .then(&self.coalg.delta_op())?;
        let chi = self.chi_op();
        let id = self.coalg.id_op();
        let op = self
            .coalg
            .delta_n(3)
            .tensor(&delta_f)?
            // (c1,c2,c3,f1,f2) -> (c1,f1,c3,c2,f2)
            .permute_outputs(&[0, 3, 2, 1, 4])?
            .then(&id.tensor(&chi)?.tensor(&id)?)?
            .then(&chi)?;
        op.to_linear_map()
    }

    /// Certify a candidate Grunspan map: coalgebra morphism plus the
    /// five-argument defining identity `[[a,b,θ(c)],d,h] = [a,[d,c,b],h]`.
    pub fn verify_grunspan(&self, theta: &LinearMap) -> Result<VerificationReport> {
        self.require_verified()?;
        let mut report = VerificationReport::new("grunspan");
        let names = self.coalg.names_fn();
        report.push_bool(
            "grunspan.coalgebra-map",
            "Δθ = (θ⊗θ)Δ, εθ = ε",
            crate::coalg::is_coalgebra_map(theta, &self.coalg, &self.coalg)?,
            None,
        );
        let f = self.field();
        let n = self.dim();
        let chi = self.chi_op();
        let id2 = TensorOp::identity(f, &[n, n]);
        let lhs = id2
            .tensor(&theta.as_op())?
            .tensor(&id2)?
            .then(&chi.tensor(&id2)?)?
            .then(&chi)?;
        let inner = self
            .coalg
            .id_op()
            .tensor(&chi)?
            .tensor(&self.coalg.id_op())?
            .then(&chi)?;
        // feed (a,b,c,d,h) as (a, d,c,b, h)
        let rhs = inner.permute_inputs(&[0, 3, 2, 1, 4])?;
        report.check_identity(
            "grunspan.identity",
            "[[a,b,θ(c)],d,h] = [a,[d,c,b],h]",
            &lhs,
            &rhs,
            &names,
        );
        Ok(report)
    }

    /// Right translation `c ↦ [c,a,b]` or left translation `c ↦ [a,b,c]`.
    pub fn translation(&self, a: &[Scalar], b: &[Scalar], side: Side) -> Result<LinearMap> {
        self.require_verified()?;
        let f = self.field();
        let at = SparseTensor::from_vec(f, a);
        let bt = SparseTensor::from_vec(f, b);
        let two = match side {
            Side::Right => self
                .chi
                .contract(&at, &[(1, 0)])?
                .contract(&bt, &[(1, 0)])?,
            Side::Left => self
                .chi
                .contract(&at, &[(0, 0)])?
                .contract(&bt, &[(0, 0)])?,
        };
        LinearMap::new(two.permute_legs(&[1, 0])?)
    }

    /// Whether `f` is a heap endomorphism (coalgebra map preserving the
    /// bracket).
    pub fn is_endomorphism(&self, f: &LinearMap) -> Result<bool> {
        Ok(verify_heap_hom(f, self, self)?.passed())
    }
}

/// Which slot a translation fixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Coalgebra-map and bracket-preservation checks for `f: Hp1 → Hp2`.
pub fn verify_heap_hom(f: &LinearMap, from: &HopfHeap, to: &HopfHeap) -> Result<VerificationReport> {
    if f.cols() != from.dim() || f.rows() != to.dim() {
        return Err(Error::DimMismatch(format!(
            "map is {}x{} between heaps of dims {} and {}",
            f.rows(),
            f.cols(),
            from.dim(),
            to.dim()
        )));
    }
    from.require_verified()?;
    to.require_verified()?;
    let names = from.coalg().names_fn();
    let mut report = VerificationReport::new("heap-hom");
    let op = f.as_op();

    let lhs = op.then(&to.coalg().delta_op())?;
    let rhs = from.coalg().delta_op().then(&op.tensor(&op)?)?;
    report.check_identity("hom.delta", "Δf = (f⊗f)Δ", &lhs, &rhs, &names);

    let lhs = op.then(&to.coalg().counit_op())?;
    report.check_identity("hom.counit", "εf = ε", &lhs, &from.coalg().counit_op(), &names);

    let lhs = from.chi_op().then(&op)?;
    let rhs = op.tensor(&op)?.tensor(&op)?.then(&to.chi_op())?;
    report.check_identity(
        "hom.bracket",
        "f[a,b,c] = [f(a),f(b),f(c)]",
        &lhs,
        &rhs,
        &names,
    );
    Ok(report)
}

/// A Hopf algebra by structure constants.
///
/// `mul` has legs `(in, in, out)`; the unit is stored as a group-like and
/// the antipode as a matrix.
#[derive(Debug, Clone)]
pub struct HopfAlgebra {
    coalg: Coalgebra,
    mul: SparseTensor,
    unit: GroupLike,
    antipode: LinearMap,
    verified: OnceLock<bool>,
}

impl PartialEq for HopfAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.coalg == other.coalg
            && self.mul == other.mul
            && self.unit == other.unit
            && self.antipode == other.antipode
    }
}

impl HopfAlgebra {
    pub fn new(
        coalg: Coalgebra,
        mul: SparseTensor,
        unit: GroupLike,
        antipode: LinearMap,
    ) -> Result<Self> {
        let n = coalg.dim();
        if mul.dims() != [n, n, n] {
            return Err(Error::DimMismatch(format!(
                "multiplication legs {:?} vs dimension {n}",
                mul.dims()
            )));
        }
        if unit.coords().len() != n || antipode.rows() != n || antipode.cols() != n {
            return Err(Error::DimMismatch("unit or antipode size".into()));
        }
        if mul.field() != coalg.field() {
            return Err(Error::FieldMismatch("multiplication tensor".into()));
        }
        Ok(HopfAlgebra {
            coalg,
            mul,
            unit,
            antipode,
            verified: OnceLock::new(),
        })
    }

    pub fn coalg(&self) -> &Coalgebra {
        &self.coalg
    }

    pub fn mul(&self) -> &SparseTensor {
        &self.mul
    }

    pub fn unit(&self) -> &GroupLike {
        &self.unit
    }

    pub fn antipode(&self) -> &LinearMap {
        &self.antipode
    }

    pub fn dim(&self) -> usize {
        self.coalg.dim()
    }

    pub fn field(&self) -> crate::scalar::FieldSpec {
        self.coalg.field()
    }

    pub fn mul_op(&self) -> TensorOp {
        TensorOp::new(self.mul.clone(), 2).expect("mul arity")
    }

    pub fn unit_op(&self) -> TensorOp {
        self.unit.as_op(self.field())
    }

    /// `a ↦ ε(a)·1`, the convolution unit.
    pub fn unit_counit_op(&self) -> TensorOp {
        self.coalg
            .counit_op()
            .tensor(&self.unit_op())
            .expect("same field")
    }

    pub fn verify(&self) -> VerificationReport {
        let mut report = VerificationReport::new("hopf-algebra");
        report.merge("", self.coalg.verify());
        let names = self.coalg.names_fn();
        let f = self.field();
        let mul = self.mul_op();
        let s = self.antipode.as_op();
        let delta = self.coalg.delta_op();
        let eps = self.coalg.counit_op();
        let id = self.coalg.id_op();

        let lhs = mul.tensor(&id).and_then(|t| t.then(&mul)).expect("dims");
        let rhs = id.tensor(&mul).and_then(|t| t.then(&mul)).expect("dims");
        report.check_identity("alg.assoc", "(ab)c = a(bc)", &lhs, &rhs, &names);

        report.push_bool(
            "alg.unit.grouplike",
            "Δ(1) = 1⊗1, ε(1) = 1",
            self.coalg.is_grouplike(self.unit.coords()),
            None,
        );

        let lhs = self
            .unit_op()
            .tensor(&id)
            .and_then(|t| t.then(&mul))
            .expect("dims");
        report.check_identity("alg.unit.left", "1·a = a", &lhs, &id, &names);
        let lhs = id
            .tensor(&self.unit_op())
            .and_then(|t| t.then(&mul))
            .expect("dims");
        report.check_identity("alg.unit.right", "a·1 = a", &lhs, &id, &names);

        let lhs = mul.then(&delta).expect("dims");
        let rhs = delta
            .tensor(&delta)
            .and_then(|t| t.permute_outputs(&[0, 2, 1, 3]))
            .and_then(|t| t.then(&mul.tensor(&mul)?))
            .expect("dims");
        report.check_identity("alg.comul", "Δ(ab) = Δ(a)Δ(b)", &lhs, &rhs, &names);

        let lhs = mul.then(&eps).expect("dims");
        let rhs = eps.tensor(&eps).expect("dims");
        report.check_identity("alg.counit", "ε(ab) = ε(a)ε(b)", &lhs, &rhs, &names);

        let _ = f;
        let conv_unit = self.unit_counit_op();
        let lhs = delta
            .then(&s.tensor(&id).expect("dims"))
            .and_then(|t| t.then(&mul))
            .expect("dims");
        report.check_identity("alg.antipode.left", "S(a1)a2 = ε(a)1", &lhs, &conv_unit, &names);
        let lhs = delta
            .then(&id.tensor(&s).expect("dims"))
            .and_then(|t| t.then(&mul))
            .expect("dims");
        report.check_identity(
            "alg.antipode.right",
            "a1S(a2) = ε(a)1",
            &lhs,
            &conv_unit,
            &names,
        );

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
                subject: "hopf-algebra".into(),
                check,
            })
        }
    }

    pub fn is_commutative(&self) -> Result<bool> {
        self.require_verified()?;
        Ok(self.mul.permute_legs(&[1, 0, 2])? == self.mul)
    }

    /// The associated Hopf heap with `[a,b,c] = aS(b)c`.
    pub fn heap(&self) -> Result<HopfHeap> {
        self.require_verified()?;
        let id = self.coalg.id_op();
        let mul = self.mul_op();
        let s = self.antipode.as_op();
        let chi = id
            .tensor(&s)?
            .tensor(&id)?
            .then(&mul.tensor(&id)?)?
            .then(&mul)?;
        let out = HopfHeap::new(self.coalg.clone(), chi.into_tensor())?;
        out.require_verified().map_err(|_| Error::ConstructionInvalid {
            subject: "heap from hopf algebra".into(),
            check: "verify".into(),
        })?;
        Ok(out)
    }

    /// Whether `f` is a Hopf algebra morphism (algebra + coalgebra map).
    pub fn is_hopf_hom(f: &LinearMap, from: &HopfAlgebra, to: &HopfAlgebra) -> Result<bool> {
        from.require_verified()?;
        to.require_verified()?;
        let op = f.as_op();
        let mul_ok =
            from.mul_op().then(&op)? == op.tensor(&op)?.then(&to.mul_op())?;
        let unit_ok = f.apply_vec(from.unit.coords())? == to.unit.coords();
        let coalg_ok = crate::coalg::is_coalgebra_map(f, from.coalg(), to.coalg())?;
        Ok(mul_ok && unit_ok && coalg_ok)
    }
}

/// Solve the convolution system `S(a1)a2 = ε(a)1` for an antipode on
/// bialgebra data, cross-checking the right identity; `None` if insoluble.
pub fn find_antipode(
    coalg: &Coalgebra,
    mul: &SparseTensor,
    unit: &[Scalar],
) -> Result<Option<LinearMap>> {
    coalg.require_verified()?;
    let n = coalg.dim();
    let f = coalg.field();
    if mul.dims() != [n, n, n] || unit.len() != n {
        return Err(Error::DimMismatch("bialgebra data".into()));
    }
    // unknowns s[p][j] with column index p*n + j; equations indexed (c,q)
    let mut rows: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(); n * n]; n * n];
    let mut rhs: Vec<Scalar> = vec![Scalar::zero(); n * n];
    for (didx, dv) in coalg.comul().iter() {
        let (c, j, k) = (didx[0], didx[1], didx[2]);
        for (midx, mv) in mul.iter() {
            let (p, kk, q) = (midx[0], midx[1], midx[2]);
            if kk != k {
                continue;
            }
            let row = c * n + q;
            let col = p * n + j;
            rows[row][col] = rows[row][col].add(&dv.mul(mv, f));
        }
    }
    for (eidx, ev) in coalg.counit().iter() {
        let c = eidx[0];
        for (q, uv) in unit.iter().enumerate() {
            rhs[c * n + q] = ev.mul(uv, f);
        }
    }
    let a = LinearMap::from_dense(f, &rows);
    let Some(sol) = linalg::solve(&a, &rhs) else {
        return Ok(None);
    };
    let mut s = LinearMap::zero(f, n, n);
    for p in 0..n {
        for j in 0..n {
            s.set(p, j, sol[p * n + j].clone());
        }
    }
    // cross-check the right convolution identity on the found solution
    let mul_op = TensorOp::new(mul.clone(), 2)?;
    let id = coalg.id_op();
    let conv_unit = coalg
        .counit_op()
        .tensor(&TensorOp::from_vector(&SparseTensor::from_vec(f, unit))?)?;
    let rhs_op = coalg
        .delta_op()
        .then(&id.tensor(&s.as_op())?)?
        .then(&mul_op)?;
    if rhs_op != conv_unit {
        return Ok(None);
    }
    Ok(Some(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scalar::FieldSpec;

    fn qi() -> FieldSpec {
        FieldSpec::quadratic(-1).unwrap()
    }

    fn x_plus() -> Vec<Scalar> {
        vec![Scalar::sqrt_gen(), Scalar::one()]
    }

    #[test]
    fn paper_two_dim_heap_verifies_and_is_commutative() {
        let hp = corpus::two_dim_heap(qi());
        assert!(hp.verify().passed());
        assert!(hp.is_commutative().unwrap());
    }

    #[test]
    fn corrupted_bracket_fails_malcev() {
        let f = qi();
        let good = corpus::two_dim_heap(f);
        let mut chi = good.chi().clone();
        chi.set(vec![1, 1, 1, 1], Scalar::from_int(2));
        let bad = HopfHeap::new(good.coalg().clone(), chi).unwrap();
        let rep = bad.verify();
        assert!(!rep.passed());
        let fail = rep.first_failure().unwrap();
        assert!(fail.id.starts_with("heap.malcev"), "{}", fail.id);
        let w = fail.witness.as_ref().unwrap();
        assert!(w.tuple.iter().all(|t| t == "theta"), "{:?}", w.tuple);
    }

    #[test]
    fn heap_from_group_algebras() {
        for n in 2..=3 {
            let h = corpus::group_algebra_hopf(FieldSpec::RATIONAL, n);
            assert!(h.verify().passed());
            let hp = h.heap().unwrap();
            assert!(hp.verify().passed());
            assert!(hp.is_commutative().unwrap());
            // X[i][j][k][l] = 1 iff l = i - j + k mod n
            for (idx, v) in hp.chi().iter() {
                let l = (idx[0] + n - idx[1] + idx[2]) % n;
                assert_eq!(idx[3], l);
                assert!(v.is_one());
            }
            assert_eq!(hp.chi().support(), n * n * n);
        }
    }

    #[test]
    fn sweedler_heap_verifies_and_is_noncommutative() {
        let h = corpus::sweedler_hopf(FieldSpec::RATIONAL);
        assert!(h.verify().passed());
        let hp = h.heap().unwrap();
        assert!(hp.verify().passed());
        assert!(!hp.is_commutative().unwrap());
        assert!(matches!(hp.opposite(), Err(Error::NotCocommutative)));
    }

    #[test]
    fn hopf_from_heap_at_extension_grouplike() {
        let f = qi();
        let hp = corpus::two_dim_heap(f);
        let x = hp.coalg().grouplike(x_plus()).unwrap();
        let h = hp.hopf_at(&x).unwrap();
        assert!(h.verify().passed());
        assert_eq!(h.unit().coords(), x.coords());
    }

    #[test]
    fn theta_is_rejected_as_unit() {
        let f = qi();
        let hp = corpus::two_dim_heap(f);
        let theta = GroupLike::from_coords(vec![Scalar::zero(), Scalar::one()]);
        assert!(matches!(hp.hopf_at(&theta), Err(Error::NotGroupLike(_))));
    }

    #[test]
    fn roundtrip_hopf_heap_hopf() {
        // H_e(Hp(H)) = H for the group algebras and Sweedler
        for h in [
            corpus::group_algebra_hopf(FieldSpec::RATIONAL, 2),
            corpus::group_algebra_hopf(FieldSpec::RATIONAL, 3),
            corpus::sweedler_hopf(FieldSpec::RATIONAL),
        ] {
            let hp = h.heap().unwrap();
            let e = h.unit().clone();
            let back = hp.hopf_at(&e).unwrap();
            assert_eq!(back.mul(), h.mul());
            assert_eq!(back.antipode(), h.antipode());
        }
    }

    #[test]
    fn roundtrip_heap_hopf_heap() {
        // Hp(H_x(C)) = C for every corpus heap and group-like
        let f = qi();
        for hp in [corpus::two_dim_heap(f), corpus::group_algebra_hopf(f, 2).heap().unwrap()] {
            for x in hp.coalg().find_grouplikes().unwrap() {
                let h = hp.hopf_at(&x).unwrap();
                let back = h.heap().unwrap();
                assert_eq!(back.chi(), hp.chi(), "bracket changed through H_x");
            }
        }
    }

    #[test]
    fn grunspan_is_identity_and_f_independent_on_commutative_heaps() {
        let f = qi();
        let hp = corpus::two_dim_heap(f);
        // f = theta
        let t1 = hp.grunspan(&[Scalar::zero(), Scalar::one()]).unwrap();
        assert_eq!(t1, LinearMap::identity(f, 2));
        // f = theta + u has counit one as well
        let t2 = hp.grunspan(&[Scalar::one(), Scalar::one()]).unwrap();
        assert_eq!(t1, t2);
        // f = u has counit zero
        assert!(matches!(
            hp.grunspan(&[Scalar::one(), Scalar::zero()]),
            Err(Error::CounitNotOne(_))
        ));
    }

    #[test]
    fn grunspan_defining_identity_on_all_corpus_heaps() {
        // [[a,b,θ(c)],d,h] = [a,[d,c,b],h]
        let f = FieldSpec::RATIONAL;
        for hp in [
            corpus::two_dim_heap(f),
            corpus::group_algebra_hopf(f, 2).heap().unwrap(),
            corpus::group_algebra_hopf(f, 3).heap().unwrap(),
            corpus::sweedler_hopf(f).heap().unwrap(),
        ] {
            let n = hp.dim();
            let mut f_vec = vec![Scalar::zero(); n];
            // basis element of counit one: for group algebras any g, for the
            // 2-dim example theta
            let eps = hp.coalg().counit();
            let idx = (0..n)
                .find(|&i| eps.get(&[i]).is_one())
                .expect("counit-one basis element");
            f_vec[idx] = Scalar::one();
            let theta = hp.grunspan(&f_vec).unwrap();
            let chi = hp.chi_op();
            let id = hp.coalg().id_op();
            let id2 = TensorOp::identity(f, &[n, n]);
            let lhs = id2
                .tensor(&theta.as_op())
                .unwrap()
                .tensor(&id2)
                .unwrap()
                .then(&chi.tensor(&id2).unwrap())
                .unwrap()
                .then(&chi)
                .unwrap();
            let inner = id
                .tensor(&chi)
                .unwrap()
                .tensor(&id)
                .unwrap()
                .then(&chi)
                .unwrap();
            let rhs = inner.permute_inputs(&[0, 3, 2, 1, 4]).unwrap();
            assert_eq!(lhs, rhs, "five-leg identity on dim {n}");
        }
    }

    #[test]
    fn translation_composition_laws() {
        let f = qi();
        for hp in [corpus::two_dim_heap(f), corpus::group_algebra_hopf(f, 2).heap().unwrap()] {
            let n = hp.dim();
            let basis: Vec<Vec<Scalar>> = (0..n)
                .map(|i| {
                    let mut v = vec![Scalar::zero(); n];
                    v[i] = Scalar::one();
                    v
                })
                .collect();
            for a in &basis {
                for b in &basis {
                    for c in &basis {
                        for d in &basis {
                            // τ^d_c ∘ τ^b_a = τ^{[b,c,d]}_a
                            let t1 = hp.translation(a, b, Side::Right).unwrap();
                            let t2 = hp.translation(c, d, Side::Right).unwrap();
                            let bcd = hp
                                .chi_op()
                                .eval(&[
                                    &SparseTensor::from_vec(f, b),
                                    &SparseTensor::from_vec(f, c),
                                    &SparseTensor::from_vec(f, d),
                                ])
                                .unwrap()
                                .to_vec();
                            let rhs = hp.translation(a, &bcd, Side::Right).unwrap();
                            assert_eq!(t2.compose(&t1).unwrap(), rhs);
                            // σ^b_a ∘ σ^d_c = σ^d_{[a,b,c]}
                            let s1 = hp.translation(a, b, Side::Left).unwrap();
                            let s2 = hp.translation(c, d, Side::Left).unwrap();
                            let abc = hp
                                .chi_op()
                                .eval(&[
                                    &SparseTensor::from_vec(f, a),
                                    &SparseTensor::from_vec(f, b),
                                    &SparseTensor::from_vec(f, c),
                                ])
                                .unwrap()
                                .to_vec();
                            let rhs = hp.translation(&abc, d, Side::Left).unwrap();
                            assert_eq!(s1.compose(&s2).unwrap(), rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn translation_at_grouplike_is_identity() {
        let f = qi();
        let hp = corpus::two_dim_heap(f);
        let x = x_plus();
        let t = hp.translation(&x, &x, Side::Right).unwrap();
        assert_eq!(t, LinearMap::identity(f, 2));
    }

    #[test]
    fn heap_hom_checks() {
        let f = qi();
        let hp = corpus::two_dim_heap(f);
        let id = LinearMap::identity(f, 2);
        assert!(verify_heap_hom(&id, &hp, &hp).unwrap().passed());
        // B(u) = -u, B(theta) = theta is a heap endomorphism
        let b = LinearMap::diagonal(f, &[Scalar::from_int(-1), Scalar::one()]);
        assert!(verify_heap_hom(&b, &hp, &hp).unwrap().passed());
        // u -> u, theta -> -theta breaks the coalgebra-map law
        let bad = LinearMap::diagonal(f, &[Scalar::one(), Scalar::from_int(-1)]);
        let rep = verify_heap_hom(&bad, &hp, &hp).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.first_failure().unwrap().id, "hom.delta");
    }

    #[test]
    fn homomorphism_criterion_matches_hopf_side() {
        // f is a heap endomorphism with f(x) = x  iff  f is a Hopf algebra
        // endomorphism of H_x
        let f = qi();
        let hp = corpus::two_dim_heap(f);
        let x = hp.coalg().grouplike(x_plus()).unwrap();
        let h = hp.hopf_at(&x).unwrap();
        let candidates = [
            LinearMap::identity(f, 2),
            LinearMap::diagonal(f, &[Scalar::from_int(-1), Scalar::one()]),
            LinearMap::diagonal(f, &[Scalar::one(), Scalar::from_int(-1)]),
            LinearMap::diagonal(f, &[Scalar::zero(), Scalar::one()]),
        ];
        for cand in &candidates {
            let heap_side = verify_heap_hom(cand, &hp, &hp).unwrap().passed()
                && cand.apply_vec(x.coords()).unwrap() == x.coords();
            let hopf_side = HopfAlgebra::is_hopf_hom(cand, &h, &h).unwrap();
            assert_eq!(heap_side, hopf_side);
        }
    }

    #[test]
    fn translated_homomorphism_criterion() {
        // for commutative targets: f is a heap hom iff τ^{x'}_{f(x)} ∘ f is
        // a Hopf algebra hom H_x -> H_{x'}
        let f = qi();
        let hp = corpus::two_dim_heap(f);
        let gs = hp.coalg().find_grouplikes().unwrap();
        let (x, xp) = (&gs[0], &gs[1]);
        let hx = hp.hopf_at(x).unwrap();
        let hxp = hp.hopf_at(xp).unwrap();
        let candidates = [
            LinearMap::identity(f, 2),
            LinearMap::diagonal(f, &[Scalar::from_int(-1), Scalar::one()]),
            LinearMap::diagonal(f, &[Scalar::one(), Scalar::from_int(-1)]),
        ];
        for cand in &candidates {
            let is_coalg_map = crate::coalg::is_coalgebra_map(cand, hp.coalg(), hp.coalg()).unwrap();
            if !is_coalg_map {
                continue;
            }
            let fx = cand.apply_vec(x.coords()).unwrap();
            let tau = hp.translation(&fx, xp.coords(), Side::Right).unwrap();
            let twisted = tau.compose(cand).unwrap();
            let heap_side = verify_heap_hom(cand, &hp, &hp).unwrap().passed();
            let hopf_side = HopfAlgebra::is_hopf_hom(&twisted, &hx, &hxp).unwrap();
            assert_eq!(heap_side, hopf_side);
        }
    }

    #[test]
    fn tensor_heap_verifies() {
        let f = qi();
        let a = corpus::two_dim_heap(f);
        let b = corpus::group_algebra_hopf(f, 2).heap().unwrap();
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.dim(), 4);
        assert!(t.verify().passed());
        assert!(t.is_commutative().unwrap());
    }

    #[test]
    fn opposite_heap_of_abelian_group_equals_original() {
        let f = FieldSpec::RATIONAL;
        let hp = corpus::group_algebra_hopf(f, 3).heap().unwrap();
        let op = hp.opposite().unwrap();
        assert_eq!(op.chi(), hp.chi());
        assert!(op.verify().passed());
        // two-dim example is commutative so also fixed
        let two = corpus::two_dim_heap(qi());
        assert_eq!(two.opposite().unwrap().chi(), two.chi());
    }

    #[test]
    fn exchange_identity_on_commutative_heaps() {
        // [[w,w',w''],[y,y',y''],[z,z',z'']] = [[w,y,z],[w',y',z'],[w'',y'',z'']]
        let f = qi();
        let two = corpus::two_dim_heap(f);
        let z2 = corpus::group_algebra_hopf(f, 2).heap().unwrap();
        // dim 2: the full 9-input tensor identity
        for hp in [&two, &z2] {
            let chi = hp.chi_op();
            let triple = chi.tensor(&chi).unwrap().tensor(&chi).unwrap();
            let lhs = triple.then(&chi).unwrap();
            let perm = [0, 3, 6, 1, 4, 7, 2, 5, 8];
            let rhs = lhs.permute_inputs(&perm).unwrap();
            assert_eq!(lhs, rhs, "9-leg exchange identity");
        }
        // dim 3: random exact samples
        let z3 = corpus::group_algebra_hopf(FieldSpec::RATIONAL, 3)
            .heap()
            .unwrap();
        let chi = z3.chi_op();
        let seeds: Vec<Vec<Scalar>> = (0..9)
            .map(|k| {
                (0..3)
                    .map(|i| Scalar::from_int(((7 * k + 3 * i + 1) % 5) as i64 - 2))
                    .collect()
            })
            .collect();
        let args: Vec<SparseTensor> = seeds
            .iter()
            .map(|v| SparseTensor::from_vec(FieldSpec::RATIONAL, v))
            .collect();
        let bracket3 = |a: &SparseTensor, b: &SparseTensor, c: &SparseTensor| {
            chi.eval(&[a, b, c]).unwrap()
        };
        let w = bracket3(&args[0], &args[1], &args[2]);
        let y = bracket3(&args[3], &args[4], &args[5]);
        let z = bracket3(&args[6], &args[7], &args[8]);
        let lhs = bracket3(&w, &y, &z);
        let c1 = bracket3(&args[0], &args[3], &args[6]);
        let c2 = bracket3(&args[1], &args[4], &args[7]);
        let c3 = bracket3(&args[2], &args[5], &args[8]);
        let rhs = bracket3(&c1, &c2, &c3);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutative_middle_associativity() {
        // [[a,b,c],d,h] = [a,[b,c,d],h] on commutative heaps
        let f = qi();
        for hp in [corpus::two_dim_heap(f), corpus::group_algebra_hopf(f, 2).heap().unwrap()] {
            let n = hp.dim();
            let chi = hp.chi_op();
            let id = hp.coalg().id_op();
            let id2 = TensorOp::identity(f, &[n, n]);
            let lhs = chi
                .tensor(&id2)
                .unwrap()
                .then(&chi)
                .unwrap();
            let rhs = id
                .tensor(&chi)
                .unwrap()
                .tensor(&id)
                .unwrap()
                .then(&chi)
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn swapped_antipode_fails_convolution_law() {
        let f = FieldSpec::RATIONAL;
        let h = corpus::group_algebra_hopf(f, 2);
        let swap =
            LinearMap::from_entries(f, 2, 2, [(0, 1, Scalar::one()), (1, 0, Scalar::one())])
                .unwrap();
        let bad = HopfAlgebra::new(
            h.coalg().clone(),
            h.mul().clone(),
            h.unit().clone(),
            swap,
        )
        .unwrap();
        let rep = bad.verify();
        assert!(!rep.passed());
        let fail = rep.first_failure().unwrap();
        assert!(fail.id.starts_with("alg.antipode"), "{}", fail.id);
        // S(1)·1 = g, not ε(1)·1
        let w = fail.witness.as_ref().unwrap();
        assert_eq!(w.tuple, vec!["1"]);
    }

    #[test]
    fn find_antipode_on_corpus() {
        let f = FieldSpec::RATIONAL;
        // group algebra of Z/2: S = id
        let h = corpus::group_algebra_hopf(f, 2);
        let s = find_antipode(h.coalg(), h.mul(), h.unit().coords())
            .unwrap()
            .unwrap();
        assert_eq!(s, LinearMap::identity(f, 2));
        // monoid algebra of {1, p} with p^2 = p has no antipode
        let c = corpus::group_algebra_coalgebra(f, 2);
        let mut mul = SparseTensor::zero(f, vec![2, 2, 2]);
        mul.set(vec![0, 0, 0], Scalar::one());
        mul.set(vec![0, 1, 1], Scalar::one());
        mul.set(vec![1, 0, 1], Scalar::one());
        mul.set(vec![1, 1, 1], Scalar::one());
        let unit = vec![Scalar::one(), Scalar::zero()];
        assert!(find_antipode(&c, &mul, &unit).unwrap().is_none());
    }

    #[test]
    fn find_antipode_recovers_heap_antipode() {
        let f = qi();
        let hp = corpus::two_dim_heap(f);
        let x = hp.coalg().grouplike(x_plus()).unwrap();
        let h = hp.hopf_at(&x).unwrap();
        let s = find_antipode(h.coalg(), h.mul(), x.coords())
            .unwrap()
            .unwrap();
        assert_eq!(&s, h.antipode());
    }
}
