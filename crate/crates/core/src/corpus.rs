//! Programmatic builders for the structures shipped in the `corpus/`
//! bundles: the 2-dimensional commutative Hopf heap with its two diagonal
//! Rota-Baxter operators, the group algebras of small cyclic groups, and
//! the 4-dimensional Hopf algebra with a non-cocommutative coproduct.
//!
//! Tests build against these constructors; the JSON corpus files are their
//! canonical serializations, kept byte-identical by a round-trip test.

use crate::coalg::{Coalgebra, GroupLike};
use crate::heap::{HopfAlgebra, HopfHeap};
use crate::map::LinearMap;
use crate::scalar::{FieldSpec, Scalar};
use crate::tensor::SparseTensor;

/// Basis `{u, theta}` with `Δ(u) = u⊗θ + θ⊗u`, `Δ(θ) = θ⊗θ − u⊗u`,
/// `ε = (0, 1)`.
pub fn two_dim_coalgebra(field: FieldSpec) -> Coalgebra {
    let one = Scalar::one;
    let comul = SparseTensor::from_entries(
        field,
        vec![2, 2, 2],
        [
            (vec![0, 0, 1], one()),
            (vec![0, 1, 0], one()),
            (vec![1, 1, 1], one()),
            (vec![1, 0, 0], Scalar::from_int(-1)),
        ],
    )
    .expect("entries");
    let counit = SparseTensor::from_vec(field, &[Scalar::zero(), one()]);
    Coalgebra::new(
        field,
        vec!["u".into(), "theta".into()],
        comul,
        counit,
    )
    .expect("dims")
}

/// The bracket `[u,u,u] = −u`, `[θ,θ,θ] = θ`, zero elsewhere.
pub fn two_dim_heap(field: FieldSpec) -> HopfHeap {
    let chi = SparseTensor::from_entries(
        field,
        vec![2, 2, 2, 2],
        [
            (vec![0, 0, 0, 0], Scalar::from_int(-1)),
            (vec![1, 1, 1, 1], Scalar::one()),
        ],
    )
    .expect("entries");
    HopfHeap::new(two_dim_coalgebra(field), chi).expect("dims")
}

/// `B(u) = 0, B(θ) = θ`.
pub fn rb_first(field: FieldSpec) -> LinearMap {
    LinearMap::diagonal(field, &[Scalar::zero(), Scalar::one()])
}

/// `B(u) = −u, B(θ) = θ`.
pub fn rb_second(field: FieldSpec) -> LinearMap {
    LinearMap::diagonal(field, &[Scalar::from_int(-1), Scalar::one()])
}

/// `θ + sqrt(−1)·u`, the canonical group-like of the 2-dim example over
/// `Q(sqrt:-1)`.
pub fn two_dim_grouplike_plus() -> GroupLike {
    GroupLike::from_coords(vec![Scalar::sqrt_gen(), Scalar::one()])
}

/// `θ − sqrt(−1)·u`.
pub fn two_dim_grouplike_minus() -> GroupLike {
    GroupLike::from_coords(vec![Scalar::sqrt_gen().neg(), Scalar::one()])
}

fn cyclic_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|k| match k {
            0 => "1".to_string(),
            1 => "g".to_string(),
            _ => format!("g{k}"),
        })
        .collect()
}

/// Group-like coalgebra on the cyclic group of order `n`.
pub fn group_algebra_coalgebra(field: FieldSpec, n: usize) -> Coalgebra {
    let mut comul = SparseTensor::zero(field, vec![n, n, n]);
    let mut counit = SparseTensor::zero(field, vec![n]);
    for i in 0..n {
        comul.set(vec![i, i, i], Scalar::one());
        counit.set(vec![i], Scalar::one());
    }
    Coalgebra::new(field, cyclic_names(n), comul, counit).expect("dims")
}

/// The full Hopf algebra of the cyclic group of order `n`.
pub fn group_algebra_hopf(field: FieldSpec, n: usize) -> HopfAlgebra {
    let coalg = group_algebra_coalgebra(field, n);
    let mut mul = SparseTensor::zero(field, vec![n, n, n]);
    for i in 0..n {
        for j in 0..n {
            mul.set(vec![i, j, (i + j) % n], Scalar::one());
        }
    }
    let mut unit = vec![Scalar::zero(); n];
    unit[0] = Scalar::one();
    let mut s = LinearMap::zero(field, n, n);
    for i in 0..n {
        s.set((n - i) % n, i, Scalar::one());
    }
    HopfAlgebra::new(coalg, mul, GroupLike::from_coords(unit), s).expect("dims")
}

/// The 4-dimensional Hopf algebra on `{1, g, x, gx}` with `g² = 1`,
/// `x² = 0`, `xg = −gx`, `Δ(x) = x⊗1 + g⊗x`.
pub fn sweedler_hopf(field: FieldSpec) -> HopfAlgebra {
    let names = vec!["1".into(), "g".into(), "x".into(), "gx".into()];
    let one = Scalar::one;
    let neg = || Scalar::from_int(-1);
    let comul = SparseTensor::from_entries(
        field,
        vec![4, 4, 4],
        [
            (vec![0, 0, 0], one()),
            (vec![1, 1, 1], one()),
            (vec![2, 2, 0], one()),
            (vec![2, 1, 2], one()),
            (vec![3, 3, 1], one()),
            (vec![3, 0, 3], one()),
        ],
    )
    .expect("entries");
    let counit = SparseTensor::from_vec(field, &[one(), one(), Scalar::zero(), Scalar::zero()]);
    let coalg = Coalgebra::new(field, names, comul, counit).expect("dims");
    // products: rows 1,g,x,gx by columns, signs from xg = -gx and x² = 0
    let mul = SparseTensor::from_entries(
        field,
        vec![4, 4, 4],
        [
            (vec![0, 0, 0], one()),
            (vec![0, 1, 1], one()),
            (vec![0, 2, 2], one()),
            (vec![0, 3, 3], one()),
            (vec![1, 0, 1], one()),
            (vec![1, 1, 0], one()),
            (vec![1, 2, 3], one()),
            (vec![1, 3, 2], one()),
            (vec![2, 0, 2], one()),
            (vec![2, 1, 3], neg()),
            (vec![3, 0, 3], one()),
            (vec![3, 1, 2], neg()),
        ],
    )
    .expect("entries");
    let unit = GroupLike::from_coords(vec![one(), Scalar::zero(), Scalar::zero(), Scalar::zero()]);
    // S(1) = 1, S(g) = g, S(x) = -gx, S(gx) = x
    let s = LinearMap::from_entries(
        field,
        4,
        4,
        [
            (0, 0, one()),
            (1, 1, one()),
            (3, 2, neg()),
            (2, 3, one()),
        ],
    )
    .expect("entries");
    HopfAlgebra::new(coalg, mul, unit, s).expect("dims")
}

/// The canonical declarations of every shipped bundle, keyed by file name.
pub fn bundle_files() -> Vec<(&'static str, crate::bundle::BundleFileOut)> {
    use crate::bundle::{write, BundleFileOut, DeclOut, DeclValue};
    use crate::heap::Side;
    use crate::hmodule::{free_heap_module, self_heap_module};

    let qi = FieldSpec::quadratic(-1).expect("minus one is square-free");
    let q = FieldSpec::RATIONAL;
    let mut files = Vec::new();

    // the 2-dimensional commutative heap with its operators
    {
        let heap = two_dim_heap(qi);
        let mut objects = vec![
            write::coalgebra("C", heap.coalg()),
            write::heap("C_heap", "C", &heap),
            write::linear_map("B_i", "C", "C", &rb_first(qi)),
            write::linear_map("B_ii", "C", "C", &rb_second(qi)),
            write::linear_map("id_C", "C", "C", &LinearMap::identity(qi, 2)),
            write::rb_operator("RB_i", "C_heap", "B_i"),
            write::rb_operator("RB_ii", "C_heap", "B_ii"),
            write::rb_operator("RB_id", "C_heap", "id_C"),
        ];
        objects.push(write::vector(
            "theta",
            "C",
            qi,
            &[Scalar::zero(), Scalar::one()],
        ));
        files.push((
            "example23a.json",
            BundleFileOut {
                field: qi.name(),
                name: "example23a".into(),
                provenance: Some(
                    "2-dimensional commutative Hopf heap on {u, theta} with its diagonal Rota-Baxter operators".into(),
                ),
                objects,
            },
        ));
    }

    // the same heap with deliberate defects, for failure-path demos
    {
        let heap = two_dim_heap(qi);
        let mut bad_chi = heap.chi().clone();
        bad_chi.set(vec![1, 1, 1, 1], Scalar::from_int(2));
        let bad_heap = crate::heap::HopfHeap::new(heap.coalg().clone(), bad_chi).expect("dims");
        let bad_b = LinearMap::from_entries(
            qi,
            2,
            2,
            [(1, 0, Scalar::one()), (1, 1, Scalar::one())],
        )
        .expect("entries");
        files.push((
            "example23a_corrupt.json",
            BundleFileOut {
                field: qi.name(),
                name: "example23a_corrupt".into(),
                provenance: Some(
                    "deliberately corrupted bracket and operator for failure-path demonstrations"
                        .into(),
                ),
                objects: vec![
                    write::coalgebra("C", heap.coalg()),
                    write::heap("C_heap", "C", &heap),
                    write::heap("C_heap_bad", "C", &bad_heap),
                    write::linear_map("B_bad", "C", "C", &bad_b),
                    write::rb_operator("RB_bad", "C_heap", "B_bad"),
                ],
            },
        ));
    }

    // cyclic group algebras
    for (fname, bname, n) in [("z2.json", "z2", 2usize), ("z3.json", "z3", 3)] {
        let hopf = group_algebra_hopf(q, n);
        let heap = hopf.heap().expect("group algebra heap");
        let coalg_name = format!("Z{n}_coalg");
        let hopf_name = format!("Z{n}");
        let heap_name = format!("Z{n}_heap");
        let mut objects = vec![
            write::coalgebra(&coalg_name, hopf.coalg()),
            write::hopf(&hopf_name, &coalg_name, &hopf),
            write::heap(&heap_name, &coalg_name, &heap),
        ];
        if n == 2 {
            let truss =
                crate::truss::HopfTruss::new(heap.clone(), hopf.mul().clone()).expect("dims");
            objects.push(write::linear_map(
                "id_Z2",
                "Z2_coalg",
                "Z2_coalg",
                &LinearMap::identity(q, 2),
            ));
            objects.push(write::rb_cooperator("CO_id", "Z2", "id_Z2"));
            objects.push(write::truss("Z2_truss", "Z2_heap", &truss));
            let ct = crate::truss::CocycleTruss::new(
                hopf.clone(),
                hopf.mul().clone(),
                LinearMap::identity(q, 2),
            )
            .expect("dims");
            objects.push(write::cocycle_truss("Z2_cocycle", "Z2", &ct));
            objects.push(DeclOut {
                kind: "brace".into(),
                name: "Z2_brace".into(),
                fields: vec![
                    ("hopf_dot".into(), DeclValue::Str("Z2".into())),
                    ("hopf_circ".into(), DeclValue::Str("Z2".into())),
                ],
            });
            objects.push(write::vector(
                "one",
                "Z2_coalg",
                q,
                &[Scalar::one(), Scalar::zero()],
            ));
            objects.push(write::vector(
                "g",
                "Z2_coalg",
                q,
                &[Scalar::zero(), Scalar::one()],
            ));
        }
        files.push((
            fname,
            BundleFileOut {
                field: q.name(),
                name: bname.into(),
                provenance: Some(format!("group algebra of the cyclic group of order {n}")),
                objects,
            },
        ));
    }

    // the 4-dimensional non-cocommutative Hopf algebra
    {
        let hopf = sweedler_hopf(q);
        let heap = hopf.heap().expect("heap");
        files.push((
            "sweedler.json",
            BundleFileOut {
                field: q.name(),
                name: "sweedler".into(),
                provenance: Some(
                    "4-dimensional Hopf algebra on {1, g, x, gx} with a non-cocommutative coproduct"
                        .into(),
                ),
                objects: vec![
                    write::coalgebra("H4_coalg", hopf.coalg()),
                    write::hopf("H4", "H4_coalg", &hopf),
                    write::heap("H4_heap", "H4_coalg", &heap),
                ],
            },
        ));
    }

    // heap modules over the 2-dimensional heap, plus the full
    // Rota-Baxter module instance
    {
        let heap = two_dim_heap(qi);
        let self_left = self_heap_module(&heap, Side::Left).expect("module");
        let self_right = self_heap_module(&heap, Side::Right).expect("module");
        let free_left2 = free_heap_module(&heap, 2, Side::Left).expect("module");
        let objects = vec![
            write::coalgebra("C", heap.coalg()),
            write::heap("C_heap", "C", &heap),
            write::vector("x_plus", "C", qi, two_dim_grouplike_plus().coords()),
            write::vector("x_minus", "C", qi, two_dim_grouplike_minus().coords()),
            write::linear_map("B_ii", "C", "C", &rb_second(qi)),
            write::linear_map("id_C", "C", "C", &LinearMap::identity(qi, 2)),
            write::rb_operator("RB_ii", "C_heap", "B_ii"),
            write::rb_operator("RB_id", "C_heap", "id_C"),
            write::heap_module("self_left", "C_heap", &self_left),
            write::heap_module("self_right", "C_heap", &self_right),
            write::heap_module("free_left2", "C_heap", &free_left2),
            write::linear_map("T_Bii", "self_right", "self_right", &rb_second(qi)),
            write::rb_module("self_rb", "RB_ii", "self_right", "T_Bii"),
        ];
        files.push((
            "modules23a.json",
            BundleFileOut {
                field: qi.name(),
                name: "modules23a".into(),
                provenance: Some(
                    "heap modules over the 2-dimensional heap and its Rota-Baxter module".into(),
                ),
                objects,
            },
        ));
    }

    files
}
