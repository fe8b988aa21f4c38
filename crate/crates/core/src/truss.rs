//! Hopf trusses in heap form and cocycle form, Hopf braces, the
//! conversions between them, and the endomorphism bracket.

use crate::coalg::{is_coalgebra_map, Coalgebra, GroupLike};
use crate::error::{Error, Result};
use crate::heap::{find_antipode, verify_heap_hom, HopfAlgebra, HopfHeap};
use crate::linalg;
use crate::map::{LinearMap, TensorOp};
use crate::report::VerificationReport;
use crate::scalar::Scalar;
use crate::tensor::SparseTensor;
use std::sync::OnceLock;

/// Heap-form Hopf truss: a Hopf heap with an associative comultiplicative
/// product distributing over the bracket.
#[derive(Debug, Clone)]
pub struct HopfTruss {
    heap: HopfHeap,
    circ: SparseTensor,
    verified: OnceLock<bool>,
}

impl PartialEq for HopfTruss {
    fn eq(&self, other: &Self) -> bool {
        self.heap == other.heap && self.circ == other.circ
    }
}

impl HopfTruss {
    pub fn new(heap: HopfHeap, circ: SparseTensor) -> Result<Self> {
        let n = heap.dim();
        if circ.dims() != [n, n, n] {
            return Err(Error::DimMismatch(format!(
                "product legs {:?} vs dimension {n}",
                circ.dims()
            )));
        }
        if circ.field() != heap.field() {
            return Err(Error::FieldMismatch("truss product".into()));
        }
        Ok(HopfTruss {
            heap,
            circ,
            verified: OnceLock::new(),
        })
    }

    pub fn heap(&self) -> &HopfHeap {
        &self.heap
    }

    pub fn circ(&self) -> &SparseTensor {
        &self.circ
    }

    pub fn circ_op(&self) -> TensorOp {
        TensorOp::new(self.circ.clone(), 2).expect("circ arity")
    }

    /// Associativity, comultiplicativity, counit multiplicativity, and the
    /// bracket distributivity law; the product is nonunital by design.
    pub fn verify(&self) -> VerificationReport {
        let mut report = VerificationReport::new("hopf-truss");
        report.merge("", self.heap.verify());
        let names = self.heap.coalg().names_fn();
        let circ = self.circ_op();
        let chi = self.heap.chi_op();
        let coalg = self.heap.coalg();
        let f = self.heap.field();
        let id = coalg.id_op();
        nonunital_bialgebra_checks(&mut report, "truss", &circ, coalg);

        let n = self.heap.dim();
        let id3 = TensorOp::identity(f, &[n, n, n]);
        let lhs = id.tensor(&chi).and_then(|t| t.then(&circ)).expect("dims");
        let rhs = coalg
            .delta_n(3)
            .tensor(&id3)
            .and_then(|t| t.permute_outputs(&[0, 2, 4, 1, 3, 5]))
            .and_then(|t| t.then(&circ.tensor(&circ)?.tensor(&circ)?))
            .and_then(|t| t.then(&chi))
            .expect("dims");
        report.check_identity(
            "truss.dist",
            "a∘[b,c,d] = [a1∘b, a2∘c, a3∘d]",
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
        require(self.verify(), &self.verified, "hopf-truss")
    }

    /// Solve `a∘e = a = e∘a` exactly; a two-sided unit is unique when it
    /// exists.
    pub fn circ_unit(&self) -> Result<Vec<Scalar>> {
        circ_unit_of(&self.circ, self.heap.field())
    }

    /// Promote to a brace when the product is unital Hopf: the other
    /// product becomes `ab = [a,1,b]` with antipode `[1,a,1]`.
    pub fn to_brace(&self) -> Result<HopfBrace> {
        self.require_verified()?;
        let e = self.circ_unit()?;
        let coalg = self.heap.coalg();
        let Ok(unit) = coalg.grouplike(e.clone()) else {
            return Err(Error::NoCircUnit(format!(
                "unit {} is not group-like",
                coalg.format_vector(&e)
            )));
        };
        let Some(s_circ) = find_antipode(coalg, &self.circ, &e)? else {
            return Err(Error::NoAntipode);
        };
        let hopf_circ = HopfAlgebra::new(coalg.clone(), self.circ.clone(), unit.clone(), s_circ)?;
        hopf_circ.require_verified()?;
        let hopf_dot = self.heap.hopf_at(&unit)?;
        let brace = HopfBrace::new(hopf_dot, hopf_circ)?;
        brace.require_verified()?;
        Ok(brace)
    }
}

fn require(report: VerificationReport, cache: &OnceLock<bool>, subject: &str) -> Result<()> {
    if let Some(true) = cache.get() {
        return Ok(());
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Error::ConstructionInvalid {
            subject: subject.into(),
            check: report
                .first_failure()
                .map(|c| c.id.clone())
                .unwrap_or_default(),
        })
    }
}

fn nonunital_bialgebra_checks(
    report: &mut VerificationReport,
    prefix: &str,
    prod: &TensorOp,
    coalg: &Coalgebra,
) {
    let names = coalg.names_fn();
    let id = coalg.id_op();
    let delta = coalg.delta_op();
    let eps = coalg.counit_op();
    let lhs = prod.tensor(&id).and_then(|t| t.then(prod)).expect("dims");
    let rhs = id.tensor(prod).and_then(|t| t.then(prod)).expect("dims");
    report.check_identity(
        &format!("{prefix}.assoc"),
        "(a∘b)∘c = a∘(b∘c)",
        &lhs,
        &rhs,
        &names,
    );
    let lhs = prod.then(&delta).expect("dims");
    let rhs = delta
        .tensor(&delta)
        .and_then(|t| t.permute_outputs(&[0, 2, 1, 3]))
        .and_then(|t| t.then(&prod.tensor(prod)?))
        .expect("dims");
    report.check_identity(
        &format!("{prefix}.comul"),
        "Δ(a∘b) = a1∘b1 ⊗ a2∘b2",
        &lhs,
        &rhs,
        &names,
    );
    let lhs = prod.then(&eps).expect("dims");
    let rhs = eps.tensor(&eps).expect("dims");
    report.check_identity(
        &format!("{prefix}.counit"),
        "ε(a∘b) = ε(a)ε(b)",
        &lhs,
        &rhs,
        &names,
    );
}

fn circ_unit_of(circ: &SparseTensor, field: crate::scalar::FieldSpec) -> Result<Vec<Scalar>> {
    let n = circ.dims()[0];
    // rows: both unit laws per (basis element, output coordinate)
    let mut rows = vec![vec![Scalar::zero(); n]; 2 * n * n];
    let mut rhs = vec![Scalar::zero(); 2 * n * n];
    for (idx, v) in circ.iter() {
        let (i, j, q) = (idx[0], idx[1], idx[2]);
        // a∘e: unknown in the right slot
        rows[i * n + q][j] = rows[i * n + q][j].add(v);
        // e∘a: unknown in the left slot
        rows[n * n + j * n + q][i] = rows[n * n + j * n + q][i].add(v);
    }
    for a in 0..n {
        rhs[a * n + a] = Scalar::one();
        rhs[n * n + a * n + a] = Scalar::one();
    }
    let mat = LinearMap::from_dense(field, &rows);
    let Some(e) = linalg::solve(&mat, &rhs) else {
        return Err(Error::NoCircUnit("the unit system is insoluble".into()));
    };
    // two-sided units are unique (e = e∘e' = e'), so the solution space
    // cannot have a free direction
    debug_assert!(linalg::kernel_basis(&mat).is_empty());
    Ok(e)
}

/// Cocycle-form Hopf truss `(H, ·, ∘, σ)`.
#[derive(Debug, Clone)]
pub struct CocycleTruss {
    hopf: HopfAlgebra,
    circ: SparseTensor,
    sigma: LinearMap,
    verified: OnceLock<bool>,
}

impl PartialEq for CocycleTruss {
    fn eq(&self, other: &Self) -> bool {
        self.hopf == other.hopf && self.circ == other.circ && self.sigma == other.sigma
    }
}

impl CocycleTruss {
    pub fn new(hopf: HopfAlgebra, circ: SparseTensor, sigma: LinearMap) -> Result<Self> {
        let n = hopf.dim();
        if circ.dims() != [n, n, n] || sigma.rows() != n || sigma.cols() != n {
            return Err(Error::DimMismatch("cocycle truss data".into()));
        }
        if circ.field() != hopf.field() {
            return Err(Error::FieldMismatch("cocycle truss product".into()));
        }
        Ok(CocycleTruss {
            hopf,
            circ,
            sigma,
            verified: OnceLock::new(),
        })
    }

    pub fn hopf(&self) -> &HopfAlgebra {
        &self.hopf
    }

    pub fn circ(&self) -> &SparseTensor {
        &self.circ
    }

    pub fn sigma(&self) -> &LinearMap {
        &self.sigma
    }

    pub fn circ_op(&self) -> TensorOp {
        TensorOp::new(self.circ.clone(), 2).expect("circ arity")
    }

    /// The cocycle compatibility `a∘(bc) = (a1∘b)S(σ(a2))(a3∘c)` together
    /// with the nonunital-bialgebra laws for `∘` and the coalgebra-map law
    /// for `σ`.
    pub fn verify(&self) -> VerificationReport {
        let mut report = VerificationReport::new("cocycle-truss");
        report.merge("", self.hopf.verify());
        let names = self.hopf.coalg().names_fn();
        let coalg = self.hopf.coalg();
        let circ = self.circ_op();
        nonunital_bialgebra_checks(&mut report, "circ", &circ, coalg);

        let sigma_ok = is_coalgebra_map(&self.sigma, coalg, coalg).unwrap_or(false);
        report.push_bool("cocycle.sigma", "σ is a coalgebra map", sigma_ok, None);

        let mul = self.hopf.mul_op();
        let s = self.hopf.antipode().as_op();
        let sigma = self.sigma.as_op();
        let id = coalg.id_op();
        let n = self.hopf.dim();
        let lhs = id.tensor(&mul).and_then(|t| t.then(&circ)).expect("dims");
        let mid = sigma.then(&s).expect("dims");
        let rhs = coalg
            .delta_n(3)
            .tensor(&TensorOp::identity(self.hopf.field(), &[n, n]))
            .and_then(|t| t.permute_outputs(&[0, 2, 3, 1, 4]))
            .and_then(|t| t.then(&circ.tensor(&mid)?.tensor(&circ)?))
            .and_then(|t| t.then(&mul.tensor(&id)?))
            .and_then(|t| t.then(&mul))
            .expect("dims");
        report.check_identity(
            "cocycle.compat",
            "a∘(bc) = (a1∘b)S(σ(a2))(a3∘c)",
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
        require(self.verify(), &self.verified, "cocycle-truss")
    }

    /// Shift by a group-like: `a ·x b = aS(x)b`, `σx(a) = a∘x`.
    pub fn shift(&self, x: &GroupLike) -> Result<CocycleTruss> {
        self.require_verified()?;
        let coalg = self.hopf.coalg();
        if !coalg.is_grouplike(x.coords()) {
            return Err(Error::NotGroupLike(coalg.format_vector(x.coords())));
        }
        let hopf_x = self.hopf.heap()?.hopf_at(x)?;
        let xt = x.as_tensor(self.hopf.field());
        let sigma_x = LinearMap::new(self.circ.contract(&xt, &[(1, 0)])?.permute_legs(&[1, 0])?)?;
        let out = CocycleTruss::new(hopf_x, self.circ.clone(), sigma_x)?;
        out.require_verified()?;
        Ok(out)
    }

    /// When the `·`-unit is central for `∘`, the cocycle `σ(a) = a∘1` is an
    /// endomorphism of the induced heap; this checks both statements.
    pub fn cocycle_endomorphism_report(&self) -> Result<VerificationReport> {
        self.require_verified()?;
        let mut report = VerificationReport::new("cocycle-endo");
        let f = self.hopf.field();
        let one = SparseTensor::from_vec(f, self.hopf.unit().coords());
        let left = self.circ.contract(&one, &[(0, 0)])?;
        let right = self.circ.contract(&one, &[(1, 0)])?;
        report.push_bool("central.unit", "1∘a = a∘1", left == right, None);
        let sigma = LinearMap::new(right.permute_legs(&[1, 0])?)?;
        let heap = self.hopf.heap()?;
        let hom = verify_heap_hom(&sigma, &heap, &heap)?;
        report.merge("sigma", hom);
        Ok(report)
    }
}

/// A coalgebra carrying two Hopf algebra structures with brace
/// compatibility.
#[derive(Debug, Clone)]
pub struct HopfBrace {
    hopf_dot: HopfAlgebra,
    hopf_circ: HopfAlgebra,
    verified: OnceLock<bool>,
}

impl PartialEq for HopfBrace {
    fn eq(&self, other: &Self) -> bool {
        self.hopf_dot == other.hopf_dot && self.hopf_circ == other.hopf_circ
    }
}

impl HopfBrace {
    pub fn new(hopf_dot: HopfAlgebra, hopf_circ: HopfAlgebra) -> Result<Self> {
        if hopf_dot.dim() != hopf_circ.dim() || hopf_dot.field() != hopf_circ.field() {
            return Err(Error::DimMismatch("brace structures".into()));
        }
        Ok(HopfBrace {
            hopf_dot,
            hopf_circ,
            verified: OnceLock::new(),
        })
    }

    pub fn hopf_dot(&self) -> &HopfAlgebra {
        &self.hopf_dot
    }

    pub fn hopf_circ(&self) -> &HopfAlgebra {
        &self.hopf_circ
    }

    pub fn verify(&self) -> VerificationReport {
        let mut report = VerificationReport::new("hopf-brace");
        report.push_bool(
            "brace.shared-coalgebra",
            "both products share Δ and ε",
            self.hopf_dot.coalg() == self.hopf_circ.coalg(),
            None,
        );
        report.merge("dot", self.hopf_dot.verify());
        report.merge("circ", self.hopf_circ.verify());
        if !report.passed() {
            return report;
        }
        let names = self.hopf_dot.coalg().names_fn();
        let coalg = self.hopf_dot.coalg();
        let circ = TensorOp::new(self.hopf_circ.mul().clone(), 2).expect("arity");
        let mul = self.hopf_dot.mul_op();
        let s = self.hopf_dot.antipode().as_op();
        let id = coalg.id_op();
        let n = self.hopf_dot.dim();
        let lhs = id.tensor(&mul).and_then(|t| t.then(&circ)).expect("dims");
        let rhs = coalg
            .delta_n(3)
            .tensor(&TensorOp::identity(self.hopf_dot.field(), &[n, n]))
            .and_then(|t| t.permute_outputs(&[0, 2, 3, 1, 4]))
            .and_then(|t| t.then(&circ.tensor(&s)?.tensor(&circ)?))
            .and_then(|t| t.then(&mul.tensor(&id)?))
            .and_then(|t| t.then(&mul))
            .expect("dims");
        report.check_identity(
            "brace.compat",
            "a∘(bc) = (a1∘b)S(a2)(a3∘c)",
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
        require(self.verify(), &self.verified, "hopf-brace")
    }

    /// Forget the `·`-unit: the heap of `·` with the `∘` product.
    pub fn to_truss(&self) -> Result<HopfTruss> {
        self.require_verified()?;
        let heap = self.hopf_dot.heap()?;
        let truss = HopfTruss::new(heap, self.hopf_circ.mul().clone())?;
        truss.require_verified()?;
        Ok(truss)
    }
}

/// The trivial product `a∘b = ε(a)ε(b)x` on a heap, for a group-like `x`.
pub fn trivial_truss(heap: &HopfHeap, x: &GroupLike) -> Result<HopfTruss> {
    heap.require_verified()?;
    let coalg = heap.coalg();
    if !coalg.is_grouplike(x.coords()) {
        return Err(Error::NotGroupLike(coalg.format_vector(x.coords())));
    }
    let eps = coalg.counit_op();
    let circ = eps.tensor(&eps)?.tensor(&x.as_op(heap.field()))?;
    let truss = HopfTruss::new(heap.clone(), circ.into_tensor())?;
    truss.require_verified()?;
    Ok(truss)
}

/// Which of the two products an idempotent endomorphism induces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaVariant {
    /// `x·y = [x1, α(x2), y]`
    First,
    /// `x·y = [x, α(y1), y2]`
    Second,
}

/// The truss induced by an idempotent heap endomorphism of a commutative
/// cocommutative heap.
pub fn alpha_truss(heap: &HopfHeap, alpha: &LinearMap, variant: AlphaVariant) -> Result<HopfTruss> {
    heap.require_verified()?;
    if !heap.is_commutative()? {
        return Err(Error::NotCommutative("heap bracket".into()));
    }
    if !heap.coalg().is_cocommutative()? {
        return Err(Error::NotCocommutative);
    }
    if !heap.is_endomorphism(alpha)? {
        return Err(Error::NotHeapEndo("bracket or coalgebra law".into()));
    }
    if alpha.compose(alpha)? != *alpha {
        return Err(Error::NotIdempotent);
    }
    let coalg = heap.coalg();
    let id = coalg.id_op();
    let delta = coalg.delta_op();
    let a = alpha.as_op();
    let chi = heap.chi_op();
    let circ = match variant {
        AlphaVariant::First => delta
            .tensor(&id)?
            .then(&id.tensor(&a)?.tensor(&id)?)?
            .then(&chi)?,
        AlphaVariant::Second => id
            .tensor(&delta)?
            .then(&id.tensor(&a)?.tensor(&id)?)?
            .then(&chi)?,
    };
    let truss = HopfTruss::new(heap.clone(), circ.into_tensor())?;
    truss.require_verified()?;
    Ok(truss)
}

/// The bracket `{α,β,γ}(x) = [α(x1), β(x2), γ(x3)]` of three heap
/// endomorphisms; the result is again a heap endomorphism.
pub fn endo_bracket(
    heap: &HopfHeap,
    alpha: &LinearMap,
    beta: &LinearMap,
    gamma: &LinearMap,
) -> Result<LinearMap> {
    heap.require_verified()?;
    if !heap.is_commutative()? {
        return Err(Error::NotCommutative("heap bracket".into()));
    }
    if !heap.coalg().is_cocommutative()? {
        return Err(Error::NotCocommutative);
    }
    for (name, m) in [("first", alpha), ("second", beta), ("third", gamma)] {
        if !heap.is_endomorphism(m)? {
            return Err(Error::NotHeapEndo(format!("{name} argument")));
        }
    }
    let op = heap
        .coalg()
        .delta_n(3)
        .then(&alpha.as_op().tensor(&beta.as_op())?.tensor(&gamma.as_op())?)?
        .then(&heap.chi_op())?;
    let out = op.to_linear_map()?;
    if !heap.is_endomorphism(&out)? {
        return Err(Error::ConstructionInvalid {
            subject: "endomorphism bracket".into(),
            check: "closure".into(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::scalar::FieldSpec;

    fn qi() -> FieldSpec {
        FieldSpec::quadratic(-1).unwrap()
    }

    fn two_heap() -> HopfHeap {
        corpus::two_dim_heap(qi())
    }

    fn xp() -> GroupLike {
        corpus::two_dim_grouplike_plus()
    }

    #[test]
    fn trivial_truss_verifies() {
        let t = trivial_truss(&two_heap(), &xp()).unwrap();
        assert!(t.verify().passed());
    }

    #[test]
    fn trivial_truss_rejects_non_grouplike() {
        let bad = GroupLike::from_coords(vec![Scalar::one(), Scalar::one()]);
        assert!(matches!(
            trivial_truss(&two_heap(), &bad),
            Err(Error::NotGroupLike(_))
        ));
    }

    #[test]
    fn alpha_truss_identity_gives_eps_product() {
        let hp = two_heap();
        let id = LinearMap::identity(qi(), 2);
        let t = alpha_truss(&hp, &id, AlphaVariant::First).unwrap();
        assert!(t.verify().passed());
        // x∘y = [x1, x2, y] = ε(x)y
        let expect = hp.coalg().counit_op().tensor(&hp.coalg().id_op()).unwrap();
        assert_eq!(t.circ_op(), expect);
        // the second variant gives x∘y = ε(y)x
        let t2 = alpha_truss(&hp, &id, AlphaVariant::Second).unwrap();
        assert!(t2.verify().passed());
        let expect2 = hp.coalg().id_op().tensor(&hp.coalg().counit_op()).unwrap();
        assert_eq!(t2.circ_op(), expect2);
    }

    #[test]
    fn alpha_truss_eps_x_gives_bracket_product() {
        let hp = two_heap();
        let x = xp();
        // α(a) = ε(a)x is an idempotent heap endomorphism
        let f = qi();
        let mut alpha = LinearMap::zero(f, 2, 2);
        for (r, xc) in x.coords().iter().enumerate() {
            for c in 0..2 {
                alpha.set(r, c, xc.mul(&hp.coalg().counit().get(&[c]), f));
            }
        }
        let t = alpha_truss(&hp, &alpha, AlphaVariant::First).unwrap();
        assert!(t.verify().passed());
        // a∘b = [a, x, b]
        let xt = x.as_tensor(f);
        let expect = hp.chi().contract(&xt, &[(1, 0)]).unwrap();
        assert_eq!(t.circ(), &expect);
    }

    #[test]
    fn alpha_truss_rejects_non_idempotent() {
        let hp = two_heap();
        let b = corpus::rb_second(qi());
        assert!(matches!(
            alpha_truss(&hp, &b, AlphaVariant::First),
            Err(Error::NotIdempotent)
        ));
    }

    #[test]
    fn corrupted_product_fails_distributivity() {
        let hp = two_heap();
        let mut circ = SparseTensor::zero(qi(), vec![2, 2, 2]);
        circ.set(vec![0, 0, 0], Scalar::one());
        let t = HopfTruss::new(hp, circ).unwrap();
        let rep = t.verify();
        assert!(!rep.passed());
        let dist = rep.checks.iter().find(|c| c.id == "truss.dist").unwrap();
        assert_eq!(dist.status, crate::report::CheckStatus::Fail);
        assert!(dist.witness.is_some());
    }

    #[test]
    fn z2_brace_and_cocycle_form() {
        let f = FieldSpec::RATIONAL;
        let h = corpus::group_algebra_hopf(f, 2);
        let brace = HopfBrace::new(h.clone(), h.clone()).unwrap();
        assert!(brace.verify().passed());
        let ct = CocycleTruss::new(h.clone(), h.mul().clone(), LinearMap::identity(f, 2)).unwrap();
        assert!(ct.verify().passed());
        // zero cocycle breaks the coalgebra-map law
        let bad = CocycleTruss::new(h.clone(), h.mul().clone(), LinearMap::zero(f, 2, 2)).unwrap();
        let rep = bad.verify();
        assert!(!rep.passed());
        let s = rep.checks.iter().find(|c| c.id == "cocycle.sigma").unwrap();
        assert_eq!(s.status, crate::report::CheckStatus::Fail);
    }

    #[test]
    fn z3_brace_verifies() {
        let f = FieldSpec::RATIONAL;
        let h = corpus::group_algebra_hopf(f, 3);
        let brace = HopfBrace::new(h.clone(), h).unwrap();
        assert!(brace.verify().passed());
    }

    #[test]
    fn broken_circ_fails_brace() {
        let f = FieldSpec::RATIONAL;
        let h = corpus::group_algebra_hopf(f, 2);
        // a∘b = ε(a)ε(b)1 is not unital, so the ∘ Hopf verification fails
        let c = h.coalg();
        let eps = c.counit_op();
        let circ = eps
            .tensor(&eps)
            .unwrap()
            .tensor(&h.unit_op())
            .unwrap()
            .into_tensor();
        let bad_hopf =
            HopfAlgebra::new(c.clone(), circ, h.unit().clone(), LinearMap::identity(f, 2)).unwrap();
        let brace = HopfBrace::new(h.clone(), bad_hopf).unwrap();
        assert!(!brace.verify().passed());
    }

    #[test]
    fn shifted_truss_at_g() {
        let f = FieldSpec::RATIONAL;
        let h = corpus::group_algebra_hopf(f, 2);
        let ct = CocycleTruss::new(h.clone(), h.mul().clone(), LinearMap::identity(f, 2)).unwrap();
        let g = h
            .coalg()
            .grouplike(vec![Scalar::zero(), Scalar::one()])
            .unwrap();
        let shifted = ct.shift(&g).unwrap();
        assert!(shifted.verify().passed());
        // the new unit of ·_g is g itself
        assert_eq!(shifted.hopf().unit().coords(), g.coords());
        // shifting at the old unit reproduces the truss
        let e = h.unit().clone();
        let same = ct.shift(&e).unwrap();
        assert_eq!(same.hopf().mul(), h.mul());
        assert_eq!(same.sigma(), &LinearMap::identity(f, 2));
        // ε(1+g) = 2, not group-like
        let bad = GroupLike::from_coords(vec![Scalar::one(), Scalar::one()]);
        assert!(matches!(ct.shift(&bad), Err(Error::NotGroupLike(_))));
    }

    #[test]
    fn brace_truss_roundtrip_on_z2() {
        let f = FieldSpec::RATIONAL;
        let h = corpus::group_algebra_hopf(f, 2);
        let brace = HopfBrace::new(h.clone(), h.clone()).unwrap();
        let truss = brace.to_truss().unwrap();
        assert!(truss.verify().passed());
        let back = truss.to_brace().unwrap();
        assert_eq!(back.hopf_dot().mul(), h.mul());
        assert_eq!(back.hopf_circ().mul(), h.mul());
        assert_eq!(back.hopf_dot().antipode(), h.antipode());
    }

    #[test]
    fn trivial_truss_has_no_circ_unit() {
        let t = trivial_truss(&two_heap(), &xp()).unwrap();
        assert!(matches!(t.to_brace(), Err(Error::NoCircUnit(_))));
    }

    #[test]
    fn heap_and_cocycle_verdicts_agree() {
        // heap-form and cocycle-form verification agree through H_x with
        // σx(a) = a∘x
        let hp = two_heap();
        let x = xp();
        let f = qi();
        let hopf = hp.hopf_at(&x).unwrap();
        let id = LinearMap::identity(f, 2);
        let mut candidates: Vec<SparseTensor> = Vec::new();
        candidates.push(trivial_truss(&hp, &x).unwrap().circ().clone());
        candidates.push(
            alpha_truss(&hp, &id, AlphaVariant::First)
                .unwrap()
                .circ()
                .clone(),
        );
        // a corrupted product
        let mut bad = SparseTensor::zero(f, vec![2, 2, 2]);
        bad.set(vec![0, 0, 0], Scalar::one());
        candidates.push(bad);
        for circ in candidates {
            let heap_verdict = HopfTruss::new(hp.clone(), circ.clone())
                .unwrap()
                .verify()
                .passed();
            let xt = x.as_tensor(f);
            let sigma_x = LinearMap::new(
                circ.contract(&xt, &[(1, 0)])
                    .unwrap()
                    .permute_legs(&[1, 0])
                    .unwrap(),
            )
            .unwrap();
            let cocycle_verdict = CocycleTruss::new(hopf.clone(), circ, sigma_x)
                .unwrap()
                .verify()
                .passed();
            assert_eq!(heap_verdict, cocycle_verdict);
        }
    }

    #[test]
    fn central_unit_cocycle_is_heap_endo() {
        let f = FieldSpec::RATIONAL;
        let h = corpus::group_algebra_hopf(f, 2);
        let ct = CocycleTruss::new(h.clone(), h.mul().clone(), LinearMap::identity(f, 2)).unwrap();
        let rep = ct.cocycle_endomorphism_report().unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn endo_bracket_laws() {
        let f = qi();
        let hp = two_heap();
        let id = LinearMap::identity(f, 2);
        let b = corpus::rb_second(f);
        // {id,id,id} = id
        assert_eq!(endo_bracket(&hp, &id, &id, &id).unwrap(), id);
        // {α,α,γ} = γ
        assert_eq!(endo_bracket(&hp, &b, &b, &id).unwrap(), id);
        assert_eq!(endo_bracket(&hp, &b, &b, &b).unwrap(), b);
        // f ∘ {α,β,γ} = {f∘α, f∘β, f∘γ} for heap endomorphisms f
        let lhs = b.compose(&endo_bracket(&hp, &id, &b, &id).unwrap()).unwrap();
        let rhs = endo_bracket(
            &hp,
            &b.compose(&id).unwrap(),
            &b.compose(&b).unwrap(),
            &b.compose(&id).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs, rhs);
        // non-endomorphisms are rejected
        let bad = LinearMap::diagonal(f, &[Scalar::one(), Scalar::from_int(-1)]);
        assert!(matches!(
            endo_bracket(&hp, &bad, &id, &id),
            Err(Error::NotHeapEndo(_))
        ));
    }
}
