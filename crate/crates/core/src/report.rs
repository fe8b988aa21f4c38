//! Verification reports: one record per axiom or law, with a concrete
//! counterexample when a check fails. Check order is deterministic and the
//! reported witness is always the lexicographically smallest failing basis
//! tuple.

use crate::map::TensorOp;
use crate::scalar::FieldSpec;
use crate::tensor::SparseTensor;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// Counterexample data: the failing basis tuple and both contracted values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub tuple: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub id: String,
    /// The law being checked, written out (stable across runs).
    pub law: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        VerificationReport {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.status == CheckStatus::Fail)
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.checks.push(record);
    }

    pub fn push_bool(&mut self, id: &str, law: &str, ok: bool, detail: Option<Witness>) {
        self.checks.push(CheckRecord {
            id: id.to_string(),
            law: law.to_string(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            witness: if ok { None } else { detail },
        });
    }

    /// Compare two operators with the same shape; on mismatch record the
    /// smallest failing input tuple together with both output values.
    pub fn check_identity(
        &mut self,
        id: &str,
        law: &str,
        lhs: &TensorOp,
        rhs: &TensorOp,
        names: &dyn Fn(usize, usize) -> String,
    ) {
        let witness = identity_witness(lhs, rhs, names);
        self.push_bool(id, law, witness.is_none(), witness);
    }

    pub fn merge(&mut self, prefix: &str, other: VerificationReport) {
        for mut c in other.checks {
            if !prefix.is_empty() {
                c.id = format!("{prefix}.{}", c.id);
            }
            self.checks.push(c);
        }
    }
}

/// Find the smallest failing input tuple of `lhs == rhs`, if any.
pub fn identity_witness(
    lhs: &TensorOp,
    rhs: &TensorOp,
    names: &dyn Fn(usize, usize) -> String,
) -> Option<Witness> {
    debug_assert_eq!(lhs.in_dims(), rhs.in_dims());
    debug_assert_eq!(lhs.out_dims(), rhs.out_dims());
    let diff = lhs
        .tensor_ref()
        .sub(rhs.tensor_ref())
        .expect("same-shape operators");
    if diff.is_zero() {
        return None;
    }
    let k = lhs.inputs();
    // BTreeMap order is lexicographic, so the first key has the smallest
    // failing input prefix.
    let first = diff.iter().next().expect("nonzero diff").0.clone();
    let input = &first[..k];
    let tuple: Vec<String> = input
        .iter()
        .enumerate()
        .map(|(leg, &i)| names(leg, i))
        .collect();
    let lv = lhs.eval_basis(input);
    let rv = rhs.eval_basis(input);
    Some(Witness {
        tuple,
        lhs: format_tensor(&lv, names, k),
        rhs: format_tensor(&rv, names, k),
    })
}

/// Render an output tensor as a readable linear combination.
fn format_tensor(
    t: &SparseTensor,
    names: &dyn Fn(usize, usize) -> String,
    leg_offset: usize,
) -> String {
    if t.is_zero() {
        return "0".to_string();
    }
    let field = t.field();
    let mut parts = Vec::new();
    for (idx, v) in t.iter() {
        let basis: Vec<String> = idx
            .iter()
            .enumerate()
            .map(|(leg, &i)| names(leg_offset + leg, i))
            .collect();
        let label = basis.join("⊗");
        if label.is_empty() {
            parts.push(v.canonical_string(field));
        } else {
            parts.push(format!("({})·{}", v.canonical_string(field), label));
        }
    }
    parts.join(" + ")
}

/// Basis-naming helper for spaces whose legs all share one name table.
pub fn uniform_names(names: Vec<String>) -> impl Fn(usize, usize) -> String {
    move |_leg, i| {
        names
            .get(i)
            .cloned()
            .unwrap_or_else(|| format!("e{i}"))
    }
}

/// Fallback naming when no basis labels are known.
pub fn index_names(_field: FieldSpec) -> impl Fn(usize, usize) -> String {
    |_leg, i| format!("e{i}")
}

/// Naming for checks whose legs range over different spaces: `assign[leg]`
/// selects the name table for that leg (inputs first, then outputs).
pub fn legwise_names(
    tables: Vec<Vec<String>>,
    assign: Vec<usize>,
) -> impl Fn(usize, usize) -> String {
    move |leg, i| {
        assign
            .get(leg)
            .and_then(|&t| tables.get(t))
            .and_then(|t| t.get(i))
            .cloned()
            .unwrap_or_else(|| format!("e{i}"))
    }
}
