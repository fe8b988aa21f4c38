//! Rota-Baxter operators on Hopf heaps and co-operators on commutative
//! Hopf algebras: verification, conversions, conjugation and translation
//! twists, tensor products, descendent heaps, co-braces, and Rota-Baxter
//! heap modules with their structure theorem.

use crate::coalg::GroupLike;
use crate::error::{Error, Result};
use crate::heap::{find_antipode, verify_heap_hom, HopfAlgebra, HopfHeap, Side};
use crate::hmodule::{free_heap_module, HeapModule, StructureIso};
use crate::linalg;
use crate::map::{LinearMap, TensorOp};
use crate::report::{legwise_names, VerificationReport};
use crate::scalar::Scalar;
use crate::tensor::SparseTensor;
use std::sync::OnceLock;

/// A linear operator on a Hopf heap satisfying bracket multiplicativity
/// and the twisted-comultiplication law.
#[derive(Debug, Clone)]
pub struct RBHeap {
    heap: HopfHeap,
    operator: LinearMap,
    verified: OnceLock<bool>,
}

impl PartialEq for RBHeap {
    fn eq(&self, other: &Self) -> bool {
        self.heap == other.heap && self.operator == other.operator
    }
}

impl RBHeap {
    pub fn new(heap: HopfHeap, operator: LinearMap) -> Result<Self> {
        if operator.rows() != heap.dim() || operator.cols() != heap.dim() {
            return Err(Error::DimMismatch(format!(
                "operator is {}x{} on a heap of dimension {}",
                operator.rows(),
                operator.cols(),
                heap.dim()
            )));
        }
        Ok(RBHeap {
            heap,
            operator,
            verified: OnceLock::new(),
        })
    }

    pub fn heap(&self) -> &HopfHeap {
        &self.heap
    }

    pub fn operator(&self) -> &LinearMap {
        &self.operator
    }

    /// The twisted comultiplication `a ↦ [a1, B(a4), B(a2)] ⊗ a3` used by
    /// both the verifier and the descendent construction.
    fn twisted_comul(&self) -> Result<TensorOp> {
        let b = self.operator.as_op();
        let id = self.heap.coalg().id_op();
        let chi = self.heap.chi_op();
        self.heap
            .coalg()
            .delta_n(4)
            .permute_outputs(&[0, 2, 3, 1])?
            .then(&id.tensor(&b)?.tensor(&b)?.tensor(&id)?)?
            .then(&chi.tensor(&id)?)
    }

    pub fn verify(&self) -> VerificationReport {
        let mut report = VerificationReport::new("rota-baxter");
        report.merge("", self.heap.verify());
        let names = self.heap.coalg().names_fn();
        let b = self.operator.as_op();
        let chi = self.heap.chi_op();
        let lhs = chi.then(&b).expect("dims");
        let rhs = b
            .tensor(&b)
            .and_then(|t| t.tensor(&b))
            .and_then(|t| t.then(&chi))
            .expect("dims");
        report.check_identity(
            "rb.bracket",
            "B[a,b,c] = [B(a),B(b),B(c)]",
            &lhs,
            &rhs,
            &names,
        );
        let lhs = self
            .heap
            .coalg()
            .delta_op()
            .then(&b.tensor(&b).expect("dims"))
            .expect("dims");
        let rhs = b.then(&self.twisted_comul().expect("dims")).expect("dims");
        report.check_identity(
            "rb.comul",
            "B(a1)⊗B(a2) = [B(a)1, B(B(a)4), B(B(a)2)] ⊗ B(a)3",
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
            Err(Error::ConstructionInvalid {
                subject: "rota-baxter operator".into(),
                check: report
                    .first_failure()
                    .map(|c| c.id.clone())
                    .unwrap_or_default(),
            })
        }
    }

    /// Conjugate by a heap automorphism: `ψ∘B∘ψ⁻¹`.
    pub fn conjugate(&self, psi: &LinearMap) -> Result<RBHeap> {
        self.require_verified()?;
        if !linalg::is_invertible(psi) || !self.heap.is_endomorphism(psi)? {
            return Err(Error::NotAutomorphism);
        }
        let inv = linalg::matrix_inverse(psi)?;
        let op = psi.compose(&self.operator)?.compose(&inv)?;
        let out = RBHeap::new(self.heap.clone(), op)?;
        out.require_verified()?;
        Ok(out)
    }

    /// Twist by a right translation: `c ↦ [B(c), x, y]` for group-likes
    /// `x, y`, assuming `ε∘B = ε` and `B(x)` group-like.
    pub fn translate(&self, x: &GroupLike, y: &GroupLike) -> Result<RBHeap> {
        self.require_verified()?;
        if !self.heap.is_commutative()? {
            return Err(Error::NotCommutative("heap bracket".into()));
        }
        let coalg = self.heap.coalg();
        for g in [x, y] {
            if !coalg.is_grouplike(g.coords()) {
                return Err(Error::NotGroupLike(coalg.format_vector(g.coords())));
            }
        }
        if let Some(i) = self.counit_defect() {
            return Err(Error::CounitCondFails(i));
        }
        let bx = self.operator.apply_vec(x.coords())?;
        if !coalg.is_grouplike(&bx) {
            return Err(Error::ImageNotGroupLike(coalg.format_vector(&bx)));
        }
        let tau = self
            .heap
            .translation(x.coords(), y.coords(), Side::Right)?;
        let out = RBHeap::new(self.heap.clone(), tau.compose(&self.operator)?)?;
        out.require_verified()?;
        Ok(out)
    }

    /// First basis index where `ε∘B ≠ ε`, if any.
    pub fn counit_defect(&self) -> Option<usize> {
        let eps = self.heap.coalg().counit_op();
        let lhs = self.operator.as_op().then(&eps).expect("dims");
        (0..self.heap.dim())
            .find(|&i| lhs.tensor_ref().get(&[i]) != self.heap.coalg().counit().get(&[i]))
    }

    /// Componentwise operator on the tensor-product heap.
    pub fn tensor(&self, other: &RBHeap) -> Result<RBHeap> {
        self.require_verified()?;
        other.require_verified()?;
        let heap = self.heap.tensor(other.heap())?;
        let f = heap.field();
        let m = other.heap.dim();
        let mut op = LinearMap::zero(f, heap.dim(), heap.dim());
        for (i1, v1) in self.operator.matrix().iter() {
            for (i2, v2) in other.operator.matrix().iter() {
                op.set(
                    i1[0] * m + i2[0],
                    i1[1] * m + i2[1],
                    v1.mul(v2, f),
                );
            }
        }
        let out = RBHeap::new(heap, op)?;
        out.require_verified()?;
        Ok(out)
    }

    /// When the heap is commutative and `B` fixes `x`, the operator is a
    /// Rota-Baxter co-operator on the Hopf algebra at `x`.
    pub fn to_cooperator(&self, x: &GroupLike) -> Result<RBCooperator> {
        self.require_verified()?;
        if !self.heap.is_commutative()? {
            return Err(Error::NotCommutative("heap bracket".into()));
        }
        let coalg = self.heap.coalg();
        if !coalg.is_grouplike(x.coords()) {
            return Err(Error::NotGroupLike(coalg.format_vector(x.coords())));
        }
        let bx = self.operator.apply_vec(x.coords())?;
        if bx != x.coords() {
            return Err(Error::FixedPointFails(coalg.format_vector(&bx)));
        }
        let hopf = self.heap.hopf_at(x)?;
        let out = RBCooperator::new(hopf, self.operator.clone())?;
        out.require_verified()?;
        Ok(out)
    }

    /// The descendent heap `(C, Δ', χ)` of a surjective counit-preserving
    /// operator on a commutative heap, certified together with the facts
    /// that `B: C → C_B` is a heap homomorphism and a Rota-Baxter operator
    /// on the descendent.
    pub fn descendent(&self) -> Result<DescendentHeap> {
        self.require_verified()?;
        if !self.heap.is_commutative()? {
            return Err(Error::NotCommutative("heap bracket".into()));
        }
        let rank = linalg::rank(&self.operator);
        if rank < self.heap.dim() {
            return Err(Error::NotSurjective {
                rank,
                dim: self.heap.dim(),
            });
        }
        if let Some(i) = self.counit_defect() {
            return Err(Error::CounitCondFails(i));
        }
        let comul_prime = self.twisted_comul()?.into_tensor();
        let coalg_prime = crate::coalg::Coalgebra::new(
            self.heap.field(),
            self.heap.coalg().basis_names().to_vec(),
            comul_prime,
            self.heap.coalg().counit().clone(),
        )?;
        let heap_prime = HopfHeap::new(coalg_prime, self.heap.chi().clone())?;
        let mut report = VerificationReport::new("descendent");
        report.merge("", heap_prime.verify());
        // the operator is a homomorphism into the descendent and remains
        // Rota-Baxter there
        if report.passed() {
            report.merge(
                "",
                verify_heap_hom(&self.operator, &self.heap, &heap_prime)?,
            );
            let rb_prime = RBHeap::new(heap_prime.clone(), self.operator.clone())?;
            let rb_rep = rb_prime.verify();
            // the operator checks only; the heap axioms are already present
            for c in rb_rep.checks {
                if c.id.starts_with("rb.") {
                    report.push(c);
                }
            }
        }
        if !report.passed() {
            return Err(Error::ConstructionInvalid {
                subject: "descendent heap".into(),
                check: report
                    .first_failure()
                    .map(|c| c.id.clone())
                    .unwrap_or_default(),
            });
        }
        Ok(DescendentHeap {
            heap: heap_prime,
            report,
        })
    }

    /// Certify the co-brace data at a fixed group-like: both Hopf algebra
    /// structures and the mixed compatibility identity.
    pub fn cobrace_at(&self, x: &GroupLike) -> Result<CoBrace> {
        let coalg = self.heap.coalg();
        if !coalg.is_grouplike(x.coords()) {
            return Err(Error::NotGroupLike(coalg.format_vector(x.coords())));
        }
        let bx = self.operator.apply_vec(x.coords())?;
        if bx != x.coords() {
            return Err(Error::FixedPointFails(coalg.format_vector(&bx)));
        }
        let descendent = self.descendent()?;
        let mut report = VerificationReport::new("co-brace");
        let hopf_plain = self.heap.hopf_at(x)?;
        report.merge("plain", hopf_plain.verify());
        // the twisted coproduct carries the same product; its antipode is
        // recovered by solving the convolution system
        let desc_coalg = descendent.heap.coalg().clone();
        let Some(s2) = find_antipode(&desc_coalg, hopf_plain.mul(), x.coords())? else {
            return Err(Error::NoAntipode);
        };
        let hopf_twisted = HopfAlgebra::new(
            desc_coalg,
            hopf_plain.mul().clone(),
            x.clone(),
            s2,
        )?;
        report.merge("twisted", hopf_twisted.verify());

        // h11'S(h2)h31' ⊗ h12' ⊗ h32' = h1' ⊗ h2'1 ⊗ h2'2
        let names = coalg.names_fn();
        let delta = coalg.delta_op();
        let delta_p = descendent.heap.coalg().delta_op();
        let id = coalg.id_op();
        let s = hopf_plain.antipode().as_op();
        let mul = hopf_plain.mul_op();
        let id2 = TensorOp::identity(self.heap.field(), &[self.heap.dim(), self.heap.dim()]);
        let lhs = coalg
            .delta_n(3)
            .then(&delta_p.tensor(&id)?.tensor(&delta_p)?)?
            .permute_outputs(&[0, 3, 1, 2, 4])?
            .then(&id.tensor(&s)?.tensor(&TensorOp::identity(
                self.heap.field(),
                &[self.heap.dim(), self.heap.dim(), self.heap.dim()],
            ))?)?
            .then(&mul.tensor(&id2)?.tensor(&id)?.permute_inputs(&[0, 1, 2, 3, 4])?)?
            .then(&mul.tensor(&id2)?)?;
        let rhs = delta_p.then(&id.tensor(&delta)?)?;
        report.check_identity(
            "cobrace.compat",
            "h11'S(h2)h31' ⊗ h12' ⊗ h32' = h1' ⊗ h2'1 ⊗ h2'2",
            &lhs,
            &rhs,
            &names,
        );
        if !report.passed() {
            return Err(Error::ConstructionInvalid {
                subject: "co-brace".into(),
                check: report
                    .first_failure()
                    .map(|c| c.id.clone())
                    .unwrap_or_default(),
            });
        }
        Ok(CoBrace {
            hopf_plain,
            hopf_twisted,
            report,
        })
    }
}

/// The descendent heap together with its certification report.
#[derive(Debug, Clone)]
pub struct DescendentHeap {
    pub heap: HopfHeap,
    pub report: VerificationReport,
}

/// Both Hopf algebra structures of a co-brace and the compatibility
/// certification.
#[derive(Debug, Clone)]
pub struct CoBrace {
    pub hopf_plain: HopfAlgebra,
    pub hopf_twisted: HopfAlgebra,
    pub report: VerificationReport,
}

/// An algebra endomorphism of a commutative Hopf algebra satisfying the
/// twisted-comultiplication law on the algebra side.
#[derive(Debug, Clone)]
pub struct RBCooperator {
    hopf: HopfAlgebra,
    operator: LinearMap,
    verified: OnceLock<bool>,
}

impl PartialEq for RBCooperator {
    fn eq(&self, other: &Self) -> bool {
        self.hopf == other.hopf && self.operator == other.operator
    }
}

impl RBCooperator {
    pub fn new(hopf: HopfAlgebra, operator: LinearMap) -> Result<Self> {
        if operator.rows() != hopf.dim() || operator.cols() != hopf.dim() {
            return Err(Error::DimMismatch("co-operator size".into()));
        }
        Ok(RBCooperator {
            hopf,
            operator,
            verified: OnceLock::new(),
        })
    }

    pub fn hopf(&self) -> &HopfAlgebra {
        &self.hopf
    }

    pub fn operator(&self) -> &LinearMap {
        &self.operator
    }

    /// Errors when the ambient algebra is not commutative or the operator
    /// is not an algebra map; otherwise reports the twisted law.
    pub fn verify(&self) -> Result<VerificationReport> {
        self.hopf.require_verified()?;
        if !self.hopf.is_commutative()? {
            return Err(Error::NotCommutativeAlgebra);
        }
        let b = self.operator.as_op();
        let mul = self.hopf.mul_op();
        if mul.then(&b)? != b.tensor(&b)?.then(&mul)? {
            return Err(Error::NotAlgebraMap("B(ab) = B(a)B(b)".into()));
        }
        if self.operator.apply_vec(self.hopf.unit().coords())? != self.hopf.unit().coords() {
            return Err(Error::NotAlgebraMap("B(1) = 1".into()));
        }
        let mut report = VerificationReport::new("rb-cooperator");
        let names = self.hopf.coalg().names_fn();
        let id = self.hopf.coalg().id_op();
        let s = self.hopf.antipode().as_op();
        let lhs = self
            .hopf
            .coalg()
            .delta_op()
            .then(&b.tensor(&b)?)?;
        let rhs = b
            .then(&self.hopf.coalg().delta_n(4))?
            .permute_outputs(&[0, 1, 3, 2])?
            .then(&id.tensor(&id)?.tensor(&s)?.tensor(&id)?)?
            .then(&id.tensor(&mul)?.tensor(&id)?)?
            .then(&id.tensor(&b)?.tensor(&id)?)?
            .then(&mul.tensor(&id)?)?;
        report.check_identity(
            "rbco.comul",
            "B(x1)⊗B(x2) = B(x)1·B(B(x)2·S(B(x)4)) ⊗ B(x)3",
            &lhs,
            &rhs,
            &names,
        );
        if report.passed() {
            let _ = self.verified.set(true);
        }
        Ok(report)
    }

    pub fn require_verified(&self) -> Result<()> {
        if let Some(true) = self.verified.get() {
            return Ok(());
        }
        let report = self.verify()?;
        if report.passed() {
            Ok(())
        } else {
            Err(Error::ConstructionInvalid {
                subject: "rb-cooperator".into(),
                check: report
                    .first_failure()
                    .map(|c| c.id.clone())
                    .unwrap_or_default(),
            })
        }
    }

    /// When the operator commutes with the antipode it is a Rota-Baxter
    /// operator on the associated heap.
    pub fn to_rb_heap(&self) -> Result<RBHeap> {
        let s = self.hopf.antipode();
        if s.compose(&self.operator)? != self.operator.compose(s)? {
            return Err(Error::AntipodeCommutationFails);
        }
        self.require_verified()?;
        let heap = self.hopf.heap()?;
        let out = RBHeap::new(heap, self.operator.clone())?;
        out.require_verified()?;
        Ok(out)
    }
}

/// Filter a candidate family through the Rota-Baxter verifier, preserving
/// the family order.
pub fn search_rb_operators(heap: &HopfHeap, family: &[LinearMap]) -> Result<Vec<RBHeap>> {
    heap.require_verified()?;
    let mut found = Vec::new();
    for cand in family {
        if cand.rows() != heap.dim() || cand.cols() != heap.dim() {
            continue;
        }
        let rb = RBHeap::new(heap.clone(), cand.clone())?;
        if rb.verify().passed() {
            found.push(rb);
        }
    }
    Ok(found)
}

/// A right heap module with compatible operators on module and parent.
#[derive(Debug, Clone)]
pub struct RBHeapModule {
    module: HeapModule,
    rb: RBHeap,
    t: LinearMap,
    verified: OnceLock<bool>,
}

impl PartialEq for RBHeapModule {
    fn eq(&self, other: &Self) -> bool {
        self.module == other.module && self.rb == other.rb && self.t == other.t
    }
}

impl RBHeapModule {
    pub fn new(module: HeapModule, rb: RBHeap, t: LinearMap) -> Result<Self> {
        if module.side() != Side::Right {
            return Err(Error::DimMismatch(
                "rota-baxter heap modules are right modules".into(),
            ));
        }
        if module.parent() != rb.heap() {
            return Err(Error::DimMismatch(
                "module parent and operator heap differ".into(),
            ));
        }
        if t.rows() != module.dim_m() || t.cols() != module.dim_m() {
            return Err(Error::DimMismatch("module operator size".into()));
        }
        Ok(RBHeapModule {
            module,
            rb,
            t,
            verified: OnceLock::new(),
        })
    }

    pub fn module(&self) -> &HeapModule {
        &self.module
    }

    pub fn rb(&self) -> &RBHeap {
        &self.rb
    }

    pub fn t(&self) -> &LinearMap {
        &self.t
    }

    pub fn verify(&self) -> VerificationReport {
        let mut report = VerificationReport::new("rb-heap-module");
        report.merge("module", self.module.verify());
        report.merge("rb", self.rb.verify());
        if !report.passed() {
            return report;
        }
        let t = self.t.as_op();
        let b = self.rb.operator().as_op();
        let rho = self.module.coaction_op();
        let act = self.module.action_op();
        let id_h = self.rb.heap().coalg().id_op();
        let id_m = TensorOp::identity(self.module.parent().field(), &[self.module.dim_m()]);
        let lhs = rho.then(&t.tensor(&b).expect("dims")).expect("dims");
        let rhs = t
            .then(&rho)
            .and_then(|o| o.then(&id_m.tensor(&self.rb.heap().coalg().delta_n(3))?))
            .and_then(|o| o.permute_outputs(&[0, 2, 3, 1]))
            .and_then(|o| o.then(&id_m.tensor(&b)?.tensor(&b)?.tensor(&id_h)?))
            .and_then(|o| o.then(&act.tensor(&id_h)?))
            .expect("dims");
        let names = legwise_names(
            vec![
                self.rb.heap().coalg().basis_names().to_vec(),
                self.module.basis_names().to_vec(),
            ],
            vec![1, 1, 0],
        );
        report.check_identity(
            "rbmod.compat",
            "T(m0)⊗B(m1) = T(m)0◁(B(T(m)13)⊗B(T(m)11)) ⊗ T(m)12",
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
            Err(Error::ConstructionInvalid {
                subject: "rb-heap-module".into(),
                check: report
                    .first_failure()
                    .map(|c| c.id.clone())
                    .unwrap_or_default(),
            })
        }
    }

    /// The structure theorem: transport `T` to the free module on the
    /// coinvariants and certify image containment and both intertwining
    /// identities.
    pub fn structure_iso(&self, x: &GroupLike) -> Result<RBStructureIso> {
        self.require_verified()?;
        if !self.rb.heap().is_commutative()? {
            return Err(Error::NotCommutative("heap bracket".into()));
        }
        if let Some(i) = self.rb.counit_defect() {
            return Err(Error::CounitCondFails(i));
        }
        let coalg = self.rb.heap().coalg();
        if !coalg.is_grouplike(x.coords()) {
            return Err(Error::NotGroupLike(coalg.format_vector(x.coords())));
        }
        let iso = self.module.structure_iso(x)?;
        let f = self.module.parent().field();
        let n = self.rb.heap().dim();
        let k = iso.coinvariants.dim();
        let xt = x.as_tensor(f);
        // right action slices with one slot fixed at x
        let act_x = self.module.action().contract(&xt, &[(1, 0)])?; // (m, d, out)
        let act_dx = self.module.action().contract(&xt, &[(2, 0)])?; // (m, c, out)
        let proj = self
            .module
            .coaction_op()
            .then(&TensorOp::new(act_dx, 2)?)?
            .to_linear_map()?;
        let act_x_map: Vec<Vec<Vec<Scalar>>> = {
            // act_x[m][d] as column vectors over out
            let dm = self.module.dim_m();
            let mut grid = vec![vec![vec![Scalar::zero(); dm]; n]; dm];
            for (idx, v) in act_x.iter() {
                grid[idx[0]][idx[1]][idx[2]] = v.clone();
            }
            grid
        };
        let comul = self.rb.heap().coalg().comul();
        let dm = self.module.dim_m();
        // columns of the transported operator, with their projections
        // expressed in coinvariant coordinates
        let mut t_hat = LinearMap::zero(f, k * n, k * n);
        let mut containment = true;
        for p in 0..k {
            let kp = &iso.coinvariants.basis()[p];
            for a in 0..n {
                for (didx, dv) in comul.iter() {
                    if didx[0] != a {
                        continue;
                    }
                    let (h1, h2) = (didx[1], didx[2]);
                    // u = K_p ◁ (x ⊗ e_{h1})
                    let mut u = vec![Scalar::zero(); dm];
                    for (m, kv) in kp.iter().enumerate() {
                        if kv.is_zero() {
                            continue;
                        }
                        for (out, av) in act_x_map[m][h1].iter().enumerate() {
                            if !av.is_zero() {
                                u[out] = u[out].add(&kv.mul(av, f));
                            }
                        }
                    }
                    let w = self.t.apply_vec(&u)?;
                    let pw = proj.apply_vec(&w)?;
                    let Some(coords) =
                        linalg::coordinates_in_span(f, iso.coinvariants.basis(), &[pw])
                    else {
                        containment = false;
                        continue;
                    };
                    let c = &coords[0];
                    for (bq, bv) in self.rb.operator().matrix().iter() {
                        if bv.is_zero() || bq[1] != h2 {
                            continue;
                        }
                        for (pp, cv) in c.iter().enumerate() {
                            if cv.is_zero() {
                                continue;
                            }
                            let row = pp * n + bq[0];
                            let col = p * n + a;
                            let add = dv.mul(cv, f).mul(bv, f);
                            t_hat.set(row, col, t_hat.get(row, col).add(&add));
                        }
                    }
                }
            }
        }
        let mut report = VerificationReport::new("rb-structure");
        report.push_bool(
            "rbst.containment",
            "Im T̂ ⊆ coinvariants ⊗ H",
            containment,
            None,
        );
        let a_that = iso.alpha.compose(&t_hat)?;
        let t_a = self.t.compose(&iso.alpha)?;
        report.push_bool("rbst.alpha", "α∘T̂ = T∘α", a_that == t_a, None);
        let that_b = t_hat.compose(&iso.beta)?;
        let b_t = iso.beta.compose(&self.t)?;
        report.push_bool("rbst.beta", "T̂∘β = β∘T", that_b == b_t, None);
        if !report.passed() {
            return Err(Error::ConstructionInvalid {
                subject: "rb structure theorem".into(),
                check: report
                    .first_failure()
                    .map(|c| c.id.clone())
                    .unwrap_or_default(),
            });
        }
        Ok(RBStructureIso {
            iso,
            t_hat,
            report,
        })
    }
}

/// The structure-theorem output for Rota-Baxter modules.
#[derive(Debug, Clone)]
pub struct RBStructureIso {
    pub iso: StructureIso,
    pub t_hat: LinearMap,
    pub report: VerificationReport,
}

/// Equip the free right module `M⊗H` with `T̂(m⊗h) = F(m⊗h1) ⊗ B(h2)`;
/// the result satisfies the Rota-Baxter module law for any `F`.
pub fn induced_rb_module(rb: &RBHeap, f_map: &SparseTensor) -> Result<RBHeapModule> {
    rb.require_verified()?;
    let n = rb.heap().dim();
    if f_map.arity() != 3 || f_map.dims()[1] != n || f_map.dims()[0] != f_map.dims()[2] {
        return Err(Error::DimMismatch(format!(
            "factor map legs {:?}, expected (m, {n}, m)",
            f_map.dims()
        )));
    }
    if f_map.field() != rb.heap().field() {
        return Err(Error::FieldMismatch("factor map".into()));
    }
    let dim_v = f_map.dims()[0];
    let module = free_heap_module(rb.heap(), dim_v, Side::Right)?;
    let field = rb.heap().field();
    let mut t_hat = LinearMap::zero(field, dim_v * n, dim_v * n);
    for (didx, dv) in rb.heap().coalg().comul().iter() {
        let (h, h1, h2) = (didx[0], didx[1], didx[2]);
        for (fidx, fv) in f_map.iter() {
            if fidx[1] != h1 {
                continue;
            }
            let (m_in, m_out) = (fidx[0], fidx[2]);
            for (bidx, bv) in rb.operator().matrix().iter() {
                if bidx[1] != h2 {
                    continue;
                }
                let row = m_out * n + bidx[0];
                let col = m_in * n + h;
                let add = dv.mul(fv, field).mul(bv, field);
                t_hat.set(row, col, t_hat.get(row, col).add(&add));
            }
        }
    }
    let out = RBHeapModule::new(module, rb.clone(), t_hat)?;
    out.require_verified()?;
    Ok(out)
}

/// The parent heap as a Rota-Baxter module over itself, with `T = B`.
pub fn self_rb_module(rb: &RBHeap) -> Result<RBHeapModule> {
    rb.require_verified()?;
    let module = crate::hmodule::self_heap_module(rb.heap(), Side::Right)?;
    let out = RBHeapModule::new(module, rb.clone(), rb.operator().clone())?;
    out.require_verified()?;
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

    fn xm() -> GroupLike {
        corpus::two_dim_grouplike_minus()
    }

    #[test]
    fn paper_operators_verify() {
        for b in [corpus::rb_first(qi()), corpus::rb_second(qi())] {
            let rb = RBHeap::new(two_heap(), b).unwrap();
            assert!(rb.verify().passed());
        }
    }

    #[test]
    fn identity_passes_on_cocommutative_heaps() {
        let f = qi();
        for heap in [
            two_heap(),
            corpus::group_algebra_hopf(f, 2).heap().unwrap(),
            corpus::group_algebra_hopf(f, 3).heap().unwrap(),
            two_heap()
                .tensor(&corpus::group_algebra_hopf(f, 2).heap().unwrap())
                .unwrap(),
        ] {
            assert!(heap.coalg().is_cocommutative().unwrap());
            let id = LinearMap::identity(f, heap.dim());
            let rb = RBHeap::new(heap, id).unwrap();
            assert!(rb.verify().passed());
        }
    }

    #[test]
    fn corrupted_operator_fails_bracket_law_at_uuu() {
        let f = qi();
        let mut b = LinearMap::zero(f, 2, 2);
        b.set(1, 0, Scalar::one());
        b.set(1, 1, Scalar::one());
        let rb = RBHeap::new(two_heap(), b).unwrap();
        let rep = rb.verify();
        assert!(!rep.passed());
        let fail = rep.checks.iter().find(|c| c.id == "rb.bracket").unwrap();
        assert_eq!(fail.status, crate::report::CheckStatus::Fail);
        let w = fail.witness.as_ref().unwrap();
        assert_eq!(w.tuple, vec!["u", "u", "u"]);
    }

    #[test]
    fn cooperator_on_group_algebra() {
        let f = FieldSpec::RATIONAL;
        let h = corpus::group_algebra_hopf(f, 2);
        let id = LinearMap::identity(f, 2);
        let co = RBCooperator::new(h.clone(), id).unwrap();
        assert!(co.verify().unwrap().passed());
        // collapse-to-unit operator
        let mut c1 = LinearMap::zero(f, 2, 2);
        c1.set(0, 0, Scalar::one());
        c1.set(0, 1, Scalar::one());
        let co = RBCooperator::new(h, c1).unwrap();
        assert!(co.verify().unwrap().passed());
    }

    #[test]
    fn cooperator_requires_commutative_algebra() {
        let f = FieldSpec::RATIONAL;
        let h = corpus::sweedler_hopf(f);
        let co = RBCooperator::new(h, LinearMap::identity(f, 4)).unwrap();
        assert!(matches!(co.verify(), Err(Error::NotCommutativeAlgebra)));
    }

    #[test]
    fn cooperator_conversions() {
        let f = FieldSpec::RATIONAL;
        let h = corpus::group_algebra_hopf(f, 2);
        let co = RBCooperator::new(h.clone(), LinearMap::identity(f, 2)).unwrap();
        let rb = co.to_rb_heap().unwrap();
        assert!(rb.verify().passed());
        // the collapse operator also commutes with the antipode
        let mut c1 = LinearMap::zero(f, 2, 2);
        c1.set(0, 0, Scalar::one());
        c1.set(0, 1, Scalar::one());
        let co = RBCooperator::new(h, c1).unwrap();
        assert!(co.to_rb_heap().is_ok());
        // a partial swap on Z/4 fails the commutation hypothesis
        let z4 = corpus::group_algebra_hopf(f, 4);
        let mut b = LinearMap::identity(f, 4);
        b.set(1, 1, Scalar::zero());
        b.set(3, 1, Scalar::one());
        let co = RBCooperator::new(z4, b).unwrap();
        assert!(matches!(
            co.to_rb_heap(),
            Err(Error::AntipodeCommutationFails)
        ));
    }

    #[test]
    fn rb_heap_to_cooperator() {
        let f = qi();
        let rb = RBHeap::new(two_heap(), LinearMap::identity(f, 2)).unwrap();
        let co = rb.to_cooperator(&xp()).unwrap();
        assert!(co.verify().unwrap().passed());
        // the second operator does not fix x+
        let rb = RBHeap::new(two_heap(), corpus::rb_second(f)).unwrap();
        assert!(matches!(
            rb.to_cooperator(&xp()),
            Err(Error::FixedPointFails(_))
        ));
        // the Z/2 heap at the unit
        let z2 = corpus::group_algebra_hopf(f, 2).heap().unwrap();
        let e = z2
            .coalg()
            .grouplike(vec![Scalar::one(), Scalar::zero()])
            .unwrap();
        let rb = RBHeap::new(z2, LinearMap::identity(f, 2)).unwrap();
        assert!(rb.to_cooperator(&e).is_ok());
    }

    #[test]
    fn conjugation_twist() {
        let f = qi();
        let rb = RBHeap::new(two_heap(), corpus::rb_first(f)).unwrap();
        // identity conjugation
        let same = rb.conjugate(&LinearMap::identity(f, 2)).unwrap();
        assert_eq!(same.operator(), rb.operator());
        // diagonal automorphism commutes with the diagonal operator
        let psi = corpus::rb_second(f);
        let conj = rb.conjugate(&psi).unwrap();
        assert_eq!(conj.operator(), rb.operator());
        // a singular map is rejected
        assert!(matches!(
            rb.conjugate(&corpus::rb_first(f)),
            Err(Error::NotAutomorphism)
        ));
    }

    #[test]
    fn translation_twist() {
        let f = qi();
        // τ^x_x ∘ B = B
        let rb = RBHeap::new(two_heap(), corpus::rb_second(f)).unwrap();
        // ε∘B_ii = ε and B_ii(x+) = x-, which is group-like
        let twisted = rb.translate(&xp(), &xp()).unwrap();
        assert_eq!(twisted.operator(), rb.operator());
        // the identity operator twisted across the two group-likes
        let rb = RBHeap::new(two_heap(), LinearMap::identity(f, 2)).unwrap();
        let tw = rb.translate(&xp(), &xm()).unwrap();
        assert!(tw.verify().passed());
        // B_i sends x+ to theta, which is not group-like
        let rb = RBHeap::new(two_heap(), corpus::rb_first(f)).unwrap();
        assert!(matches!(
            rb.translate(&xp(), &xm()),
            Err(Error::ImageNotGroupLike(_))
        ));
    }

    #[test]
    fn tensor_of_operators() {
        let f = qi();
        let a = RBHeap::new(two_heap(), corpus::rb_second(f)).unwrap();
        let z2 = corpus::group_algebra_hopf(f, 2).heap().unwrap();
        let b = RBHeap::new(z2.clone(), LinearMap::identity(f, 2)).unwrap();
        let t = a.tensor(&b).unwrap();
        assert!(t.verify().passed());
        assert_eq!(t.heap().dim(), 4);
        // id ⊗ id = id
        let ia = RBHeap::new(two_heap(), LinearMap::identity(f, 2)).unwrap();
        let it = ia.tensor(&b).unwrap();
        assert_eq!(it.operator(), &LinearMap::identity(f, 4));
        // both nontrivial operators together
        let c = RBHeap::new(two_heap(), corpus::rb_first(f)).unwrap();
        assert!(a.tensor(&c).unwrap().verify().passed());
    }

    #[test]
    fn descendent_heaps_of_the_two_dim_example() {
        let f = qi();
        // oracle: expand Δ'(e_a) = [a1, B(a4), B(a2)] ⊗ a3 by direct
        // iteration over structure-constant entries
        let oracle = |b: &LinearMap| -> SparseTensor {
            let hp = two_heap();
            let comul = hp.coalg().comul();
            let chi = hp.chi();
            // Δ2 then Δ on both legs gives Δ4 with the same associativity
            let mut d3 = SparseTensor::zero(f, vec![2, 2, 2, 2]);
            for (i2, v2) in comul.iter() {
                for (i1, v1) in comul.iter() {
                    if i1[0] == i2[1] {
                        d3.add_at(vec![i2[0], i1[1], i1[2], i2[2]], v1.mul(v2, f));
                    }
                }
            }
            let mut d4 = SparseTensor::zero(f, vec![2, 2, 2, 2, 2]);
            for (i3, v3) in d3.iter() {
                for (i1, v1) in comul.iter() {
                    if i1[0] == i3[1] {
                        d4.add_at(vec![i3[0], i1[1], i1[2], i3[2], i3[3]], v1.mul(v3, f));
                    }
                }
            }
            let mut out = SparseTensor::zero(f, vec![2, 2, 2]);
            for (i4, v4) in d4.iter() {
                let (a, a1, a2, a3, a4) = (i4[0], i4[1], i4[2], i4[3], i4[4]);
                for (ci, cv) in chi.iter() {
                    if ci[0] != a1 {
                        continue;
                    }
                    let c = cv
                        .mul(&b.get(ci[1], a4), f)
                        .mul(&b.get(ci[2], a2), f)
                        .mul(v4, f);
                    out.add_at(vec![a, ci[3], a3], c);
                }
            }
            out
        };
        for b in [corpus::rb_second(f), LinearMap::identity(f, 2)] {
            let rb = RBHeap::new(two_heap(), b.clone()).unwrap();
            let desc = rb.descendent().unwrap();
            assert!(desc.report.passed());
            // the twisted coproduct collapses back to Δ here
            assert_eq!(desc.heap.coalg().comul(), two_heap().coalg().comul());
            assert_eq!(oracle(&b), *two_heap().coalg().comul());
        }
        // the first operator is singular
        let rb = RBHeap::new(two_heap(), corpus::rb_first(f)).unwrap();
        assert!(matches!(
            rb.descendent(),
            Err(Error::NotSurjective { rank: 1, dim: 2 })
        ));
    }

    #[test]
    fn descendent_twist_commutes_with_operator() {
        // Δ'∘B = (B⊗B)∘Δ
        let f = qi();
        for b in [corpus::rb_second(f), LinearMap::identity(f, 2)] {
            let rb = RBHeap::new(two_heap(), b.clone()).unwrap();
            let desc = rb.descendent().unwrap();
            let lhs = b
                .as_op()
                .then(&desc.heap.coalg().delta_op())
                .unwrap();
            let rhs = two_heap()
                .coalg()
                .delta_op()
                .then(&b.as_op().tensor(&b.as_op()).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn descendent_conjugation_isomorphism() {
        // (ψ⊗ψ)∘Δ'_B = Δ'_{B^ψ}∘ψ for the heap automorphism ψ
        let f = qi();
        let psi = corpus::rb_second(f);
        for b in [LinearMap::identity(f, 2), corpus::rb_second(f)] {
            let rb = RBHeap::new(two_heap(), b).unwrap();
            let conj = rb.conjugate(&psi).unwrap();
            let lhs = psi
                .as_op()
                .then(&conj.descendent().unwrap().heap.coalg().delta_op())
                .unwrap();
            let rhs = rb
                .descendent()
                .unwrap()
                .heap
                .coalg()
                .delta_op()
                .then(&psi.as_op().tensor(&psi.as_op()).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cobrace_certification() {
        let f = qi();
        let rb = RBHeap::new(two_heap(), LinearMap::identity(f, 2)).unwrap();
        let cb = rb.cobrace_at(&xp()).unwrap();
        assert!(cb.report.passed());
        // the twisted coproduct equals Δ here, so both structures agree
        assert_eq!(cb.hopf_plain.mul(), cb.hopf_twisted.mul());
        // B_ii does not fix x+
        let rb = RBHeap::new(two_heap(), corpus::rb_second(f)).unwrap();
        assert!(matches!(
            rb.cobrace_at(&xp()),
            Err(Error::FixedPointFails(_))
        ));
    }

    #[test]
    fn self_module_is_rb_module() {
        let f = qi();
        let rb = RBHeap::new(two_heap(), corpus::rb_second(f)).unwrap();
        let m = self_rb_module(&rb).unwrap();
        assert!(m.verify().passed());
        // the law couples T with B: neither the identity nor the other
        // bracket operator works over B
        for bad_t in [LinearMap::identity(f, 2), corpus::rb_first(f)] {
            let bad = RBHeapModule::new(m.module().clone(), rb.clone(), bad_t).unwrap();
            assert!(!bad.verify().passed());
        }
        // the law is linear in T, so scalar multiples of a valid T stay
        // valid; the verifier records the verdict instead of assuming it
        let doubled = RBHeapModule::new(
            m.module().clone(),
            rb.clone(),
            corpus::rb_second(f).scale(&Scalar::from_int(2)),
        )
        .unwrap();
        assert!(doubled.verify().passed());
    }

    #[test]
    fn induced_modules_for_various_factors() {
        let f = qi();
        let rb = RBHeap::new(two_heap(), corpus::rb_second(f)).unwrap();
        let n = 2;
        // counit collapse: F(m⊗h) = ε(h)m
        let mut eps_collapse = SparseTensor::zero(f, vec![2, n, 2]);
        for m in 0..2 {
            for h in 0..n {
                let e = two_heap().coalg().counit().get(&[h]);
                eps_collapse.set(vec![m, h, m], e);
            }
        }
        let module = induced_rb_module(&rb, &eps_collapse).unwrap();
        assert!(module.verify().passed());
        // T̂(m⊗h) = m⊗B(h)
        for (idx, _) in module.t().matrix().iter() {
            let (row, col) = (idx[0], idx[1]);
            assert_eq!(row / n, col / n);
        }
        // zero factor
        let zero = SparseTensor::zero(f, vec![2, n, 2]);
        assert!(induced_rb_module(&rb, &zero).unwrap().verify().passed());
        // a dense exact factor map
        let mut dense = SparseTensor::zero(f, vec![2, n, 2]);
        let mut c = 1i64;
        for m in 0..2 {
            for h in 0..n {
                for out in 0..2 {
                    dense.set(vec![m, h, out], Scalar::from_ratio(c, 3));
                    c += 1;
                }
            }
        }
        assert!(induced_rb_module(&rb, &dense).unwrap().verify().passed());
    }

    #[test]
    fn rb_structure_theorem_on_self_module() {
        let f = qi();
        let rb = RBHeap::new(two_heap(), corpus::rb_second(f)).unwrap();
        let m = self_rb_module(&rb).unwrap();
        let st = m.structure_iso(&xp()).unwrap();
        assert!(st.report.passed());
        // T = id, B = id: the transported operator matches the induced
        // form with the counit-collapse factor
        let rb_id = RBHeap::new(two_heap(), LinearMap::identity(f, 2)).unwrap();
        let m_id = self_rb_module(&rb_id).unwrap();
        let st_id = m_id.structure_iso(&xp()).unwrap();
        assert!(st_id.report.passed());
        let k = st_id.iso.coinvariants.dim();
        assert_eq!(k, 1);
        // with one coinvariant generator the free module is H itself and
        // T̂ must again satisfy the module law
        let free_rb = RBHeapModule::new(
            m_id.module()
                .free_on_coinvariants(&st_id.iso.coinvariants)
                .unwrap(),
            rb_id.clone(),
            st_id.t_hat.clone(),
        )
        .unwrap();
        assert!(free_rb.verify().passed());
        // for T = B = id the transported operator is exactly the induced
        // form with the counit-collapse factor on the coinvariant line
        let mut eps_collapse = SparseTensor::zero(f, vec![1, 2, 1]);
        for h in 0..2 {
            eps_collapse.set(vec![0, h, 0], two_heap().coalg().counit().get(&[h]));
        }
        let induced = induced_rb_module(&rb_id, &eps_collapse).unwrap();
        assert_eq!(&st_id.t_hat, induced.t());
        assert_eq!(st_id.t_hat, LinearMap::identity(f, 2));
    }

    #[test]
    fn search_over_diagonal_family() {
        let f = qi();
        let hp = two_heap();
        let mut family = Vec::new();
        for a in [0i64, 1, -1] {
            for b in [0i64, 1, -1] {
                family.push(LinearMap::diagonal(
                    f,
                    &[Scalar::from_int(a), Scalar::from_int(b)],
                ));
            }
        }
        let found = search_rb_operators(&hp, &family).unwrap();
        let ops: Vec<&LinearMap> = found.iter().map(|r| r.operator()).collect();
        assert!(ops.contains(&&corpus::rb_first(f)));
        assert!(ops.contains(&&corpus::rb_second(f)));
        assert!(ops.contains(&&LinearMap::identity(f, 2)));
        // empty family
        assert!(search_rb_operators(&hp, &[]).unwrap().is_empty());
    }
}
