//! Linear maps and multi-leg operators built from sparse tensors.
//!
//! [`LinearMap`] is the 2-leg matrix form (row = output, column = input)
//! used for operators like antipodes, translations, and Rota-Baxter maps.
//! [`TensorOp`] is the general `V1 ⊗ … ⊗ Vk → W1 ⊗ … ⊗ Wl` form with legs
//! stored inputs-first; it is how every composite structure identity in the
//! crate is expressed.

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};
use crate::tensor::SparseTensor;

/// A linear endomap-or-map as a matrix: entry `(row, col)` sends basis
/// vector `col` to `row` with the stored coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    matrix: SparseTensor,
}

impl LinearMap {
    pub fn new(matrix: SparseTensor) -> Result<Self> {
        if matrix.arity() != 2 {
            return Err(Error::DimMismatch(format!(
                "linear map needs 2 legs, got {}",
                matrix.arity()
            )));
        }
        Ok(LinearMap { matrix })
    }

    pub fn identity(field: FieldSpec, dim: usize) -> Self {
        LinearMap {
            matrix: SparseTensor::identity_matrix(field, dim),
        }
    }

    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        LinearMap {
            matrix: SparseTensor::zero(field, vec![rows, cols]),
        }
    }

    pub fn from_entries(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self> {
        let t = SparseTensor::from_entries(
            field,
            vec![rows, cols],
            entries.into_iter().map(|(r, c, v)| (vec![r, c], v)),
        )?;
        Ok(LinearMap { matrix: t })
    }

    /// Diagonal map from the listed diagonal values.
    pub fn diagonal(field: FieldSpec, diag: &[Scalar]) -> Self {
        let n = diag.len();
        let mut t = SparseTensor::zero(field, vec![n, n]);
        for (i, v) in diag.iter().enumerate() {
            t.set(vec![i, i], v.clone());
        }
        LinearMap { matrix: t }
    }

    pub fn field(&self) -> FieldSpec {
        self.matrix.field()
    }

    pub fn rows(&self) -> usize {
        self.matrix.dims()[0]
    }

    pub fn cols(&self) -> usize {
        self.matrix.dims()[1]
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn matrix(&self) -> &SparseTensor {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.matrix.get(&[row, col])
    }

    pub fn set(&mut self, row: usize, col: usize, v: Scalar) {
        self.matrix.set(vec![row, col], v);
    }

    /// Matrix product `self * rhs`, i.e. apply `rhs` first.
    pub fn compose(&self, rhs: &LinearMap) -> Result<LinearMap> {
        let t = self.matrix.contract(rhs.matrix(), &[(1, 0)])?;
        LinearMap::new(t)
    }

    pub fn apply(&self, v: &SparseTensor) -> Result<SparseTensor> {
        self.matrix.contract(v, &[(1, 0)])
    }

    pub fn apply_vec(&self, coords: &[Scalar]) -> Result<Vec<Scalar>> {
        let v = SparseTensor::from_vec(self.field(), coords);
        Ok(self.apply(&v)?.to_vec())
    }

    pub fn add(&self, rhs: &LinearMap) -> Result<LinearMap> {
        Ok(LinearMap {
            matrix: self.matrix.add(rhs.matrix())?,
        })
    }

    pub fn sub(&self, rhs: &LinearMap) -> Result<LinearMap> {
        Ok(LinearMap {
            matrix: self.matrix.sub(rhs.matrix())?,
        })
    }

    pub fn scale(&self, s: &Scalar) -> LinearMap {
        LinearMap {
            matrix: self.matrix.scale(s),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let (r, c) = (self.rows(), self.cols());
        let mut m = vec![vec![Scalar::zero(); c]; r];
        for (idx, v) in self.matrix.iter() {
            m[idx[0]][idx[1]] = v.clone();
        }
        m
    }

    pub fn from_dense(field: FieldSpec, m: &[Vec<Scalar>]) -> LinearMap {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        let mut t = SparseTensor::zero(field, vec![rows, cols]);
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t.set(vec![i, j], v.clone());
            }
        }
        LinearMap { matrix: t }
    }

    /// View as a 1-input/1-output operator (legs reordered to input-first).
    pub fn as_op(&self) -> TensorOp {
        let t = self.matrix.permute_legs(&[1, 0]).expect("2-leg swap");
        TensorOp { tensor: t, inputs: 1 }
    }
}

/// A linear map between tensor-power spaces, legs stored `[inputs…, outputs…]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorOp {
    tensor: SparseTensor,
    inputs: usize,
}

impl TensorOp {
    /// Wrap a tensor whose first `inputs` legs are the domain.
    pub fn new(tensor: SparseTensor, inputs: usize) -> Result<Self> {
        if inputs > tensor.arity() {
            return Err(Error::DimMismatch(format!(
                "{inputs} inputs exceed arity {}",
                tensor.arity()
            )));
        }
        Ok(TensorOp { tensor, inputs })
    }

    pub fn identity(field: FieldSpec, dims: &[usize]) -> Self {
        let mut t = SparseTensor::scalar(field, Scalar::one());
        for &d in dims {
            t = t
                .tensor_product(&SparseTensor::identity_matrix(field, d))
                .expect("same field");
        }
        // legs are (in, out) pairs; regroup to inputs-first
        let k = dims.len();
        let mut perm = vec![0usize; 2 * k];
        for i in 0..k {
            perm[2 * i] = i;
            perm[2 * i + 1] = k + i;
        }
        TensorOp {
            tensor: t.permute_legs(&perm).expect("regroup"),
            inputs: k,
        }
    }

    /// A vector seen as an operator with no inputs.
    pub fn from_vector(v: &SparseTensor) -> Result<Self> {
        if v.arity() != 1 {
            return Err(Error::DimMismatch("vector must have one leg".into()));
        }
        Ok(TensorOp {
            tensor: v.clone(),
            inputs: 0,
        })
    }

    pub fn tensor_ref(&self) -> &SparseTensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> SparseTensor {
        self.tensor
    }

    pub fn field(&self) -> FieldSpec {
        self.tensor.field()
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.tensor.arity() - self.inputs
    }

    pub fn in_dims(&self) -> &[usize] {
        &self.tensor.dims()[..self.inputs]
    }

    pub fn out_dims(&self) -> &[usize] {
        &self.tensor.dims()[self.inputs..]
    }

    /// `next ∘ self`: feed this operator's outputs into `next`.
    pub fn then(&self, next: &TensorOp) -> Result<TensorOp> {
        if self.out_dims() != next.in_dims() {
            return Err(Error::DimMismatch(format!(
                "composition: outputs {:?} vs inputs {:?}",
                self.out_dims(),
                next.in_dims()
            )));
        }
        let pairs: Vec<(usize, usize)> = (0..self.outputs())
            .map(|i| (self.inputs + i, i))
            .collect();
        let t = self.tensor.contract(&next.tensor, &pairs)?;
        Ok(TensorOp {
            tensor: t,
            inputs: self.inputs,
        })
    }

    /// Side-by-side product acting on the concatenated domains.
    pub fn tensor(&self, rhs: &TensorOp) -> Result<TensorOp> {
        let t = self.tensor.tensor_product(&rhs.tensor)?;
        // legs: [a_in, a_out, b_in, b_out] -> [a_in, b_in, a_out, b_out]
        let (ai, ao, bi, bo) = (self.inputs, self.outputs(), rhs.inputs, rhs.outputs());
        let mut perm = Vec::with_capacity(ai + ao + bi + bo);
        perm.extend(0..ai);
        perm.extend((0..ao).map(|j| ai + bi + j));
        perm.extend((0..bi).map(|j| ai + j));
        perm.extend((0..bo).map(|j| ai + bi + ao + j));
        Ok(TensorOp {
            tensor: t.permute_legs(&perm)?,
            inputs: ai + bi,
        })
    }

    /// Rename input legs: input `p` becomes input `perm[p]`.
    pub fn permute_inputs(&self, perm: &[usize]) -> Result<TensorOp> {
        if perm.len() != self.inputs {
            return Err(Error::BadPermutation(format!(
                "input permutation length {} vs {} inputs",
                perm.len(),
                self.inputs
            )));
        }
        let mut full: Vec<usize> = perm.to_vec();
        full.extend(self.inputs..self.tensor.arity());
        Ok(TensorOp {
            tensor: self.tensor.permute_legs(&full)?,
            inputs: self.inputs,
        })
    }

    /// Rename output legs: output `p` becomes output `perm[p]`.
    pub fn permute_outputs(&self, perm: &[usize]) -> Result<TensorOp> {
        if perm.len() != self.outputs() {
            return Err(Error::BadPermutation(format!(
                "output permutation length {} vs {} outputs",
                perm.len(),
                self.outputs()
            )));
        }
        let mut full: Vec<usize> = (0..self.inputs).collect();
        full.extend(perm.iter().map(|&p| self.inputs + p));
        Ok(TensorOp {
            tensor: self.tensor.permute_legs(&full)?,
            inputs: self.inputs,
        })
    }

    pub fn scale(&self, s: &Scalar) -> TensorOp {
        TensorOp {
            tensor: self.tensor.scale(s),
            inputs: self.inputs,
        }
    }

    pub fn sub(&self, rhs: &TensorOp) -> Result<TensorOp> {
        if self.inputs != rhs.inputs {
            return Err(Error::DimMismatch("operator input counts differ".into()));
        }
        Ok(TensorOp {
            tensor: self.tensor.sub(&rhs.tensor)?,
            inputs: self.inputs,
        })
    }

    /// Evaluate on an elementary basis input.
    pub fn eval_basis(&self, input: &[usize]) -> SparseTensor {
        assert_eq!(input.len(), self.inputs);
        self.tensor.slice_prefix(input)
    }

    /// Apply to explicit input vectors (one per input leg).
    pub fn eval(&self, inputs: &[&SparseTensor]) -> Result<SparseTensor> {
        if inputs.len() != self.inputs {
            return Err(Error::DimMismatch(format!(
                "{} inputs supplied to an operator with {}",
                inputs.len(),
                self.inputs
            )));
        }
        let mut cur = self.tensor.clone();
        for v in inputs {
            // each contraction consumes the current first leg
            cur = v.contract(&cur, &[(0, 0)])?;
        }
        Ok(cur)
    }

    /// Collapse a 1-input/1-output operator into matrix form.
    pub fn to_linear_map(&self) -> Result<LinearMap> {
        if self.inputs != 1 || self.outputs() != 1 {
            return Err(Error::DimMismatch(format!(
                "operator is {}→{}, not 1→1",
                self.inputs,
                self.outputs()
            )));
        }
        LinearMap::new(self.tensor.permute_legs(&[1, 0])?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::multi_indices;

    fn q() -> FieldSpec {
        FieldSpec::RATIONAL
    }

    #[test]
    fn identity_op_preserves_vectors() {
        let id = TensorOp::identity(q(), &[2, 3]);
        assert_eq!(id.inputs(), 2);
        assert_eq!(id.out_dims(), &[2, 3]);
        for idx in multi_indices(&[2, 3]) {
            let out = id.eval_basis(&idx);
            assert_eq!(out.get(&idx), Scalar::one());
            assert_eq!(out.support(), 1);
        }
    }

    #[test]
    fn compose_matches_matrix_product() {
        let a = LinearMap::from_dense(
            q(),
            &[
                vec![Scalar::from_int(1), Scalar::from_int(2)],
                vec![Scalar::from_int(0), Scalar::from_int(1)],
            ],
        );
        let b = LinearMap::from_dense(
            q(),
            &[
                vec![Scalar::from_int(0), Scalar::from_int(1)],
                vec![Scalar::from_int(1), Scalar::from_int(0)],
            ],
        );
        let ab = a.compose(&b).unwrap();
        // via ops
        let op = b.as_op().then(&a.as_op()).unwrap();
        assert_eq!(op.to_linear_map().unwrap(), ab);
    }

    #[test]
    fn op_tensor_keeps_leg_grouping() {
        let f = LinearMap::diagonal(q(), &[Scalar::from_int(2), Scalar::from_int(3)]).as_op();
        let g = LinearMap::identity(q(), 2).as_op();
        let fg = f.tensor(&g).unwrap();
        let out = fg.eval_basis(&[1, 0]);
        assert_eq!(out.get(&[1, 0]), Scalar::from_int(3));
    }
}
