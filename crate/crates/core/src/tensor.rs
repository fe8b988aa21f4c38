//! Sparse multi-index tensors over an exact field.
//!
//! A tensor is a map from multi-indices to nonzero scalars; every structure
//! map of the crate (comultiplication, counit, heap bracket, products,
//! actions, coactions, linear maps) is stored this way. Entries with value
//! zero are never kept, so `PartialEq` is canonical equality.

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};
use std::collections::BTreeMap;

pub type MultiIndex = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseTensor {
    field: FieldSpec,
    dims: Vec<usize>,
    entries: BTreeMap<MultiIndex, Scalar>,
}

impl SparseTensor {
    pub fn zero(field: FieldSpec, dims: Vec<usize>) -> Self {
        SparseTensor {
            field,
            dims,
            entries: BTreeMap::new(),
        }
    }

    /// The empty-legged tensor holding a single scalar.
    pub fn scalar(field: FieldSpec, value: Scalar) -> Self {
        let mut t = SparseTensor::zero(field, vec![]);
        t.set(vec![], value);
        t
    }

    pub fn from_entries(
        field: FieldSpec,
        dims: Vec<usize>,
        entries: impl IntoIterator<Item = (MultiIndex, Scalar)>,
    ) -> Result<Self> {
        let mut t = SparseTensor::zero(field, dims);
        for (idx, v) in entries {
            t.check_index(&idx)?;
            t.add_at(idx, v);
        }
        Ok(t)
    }

    fn check_index(&self, idx: &[usize]) -> Result<()> {
        if idx.len() != self.dims.len() {
            return Err(Error::DimMismatch(format!(
                "index arity {} vs tensor arity {}",
                idx.len(),
                self.dims.len()
            )));
        }
        for (leg, (&i, &d)) in idx.iter().zip(&self.dims).enumerate() {
            if i >= d {
                return Err(Error::DimMismatch(format!(
                    "index {i} out of range for leg {leg} of dimension {d}"
                )));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn arity(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.entries.iter()
    }

    pub fn get(&self, idx: &[usize]) -> Scalar {
        self.entries.get(idx).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Insert or overwrite; zero values delete.
    pub fn set(&mut self, idx: MultiIndex, value: Scalar) {
        debug_assert!(self.check_index(&idx).is_ok());
        if value.is_zero() {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, value);
        }
    }

    pub fn add_at(&mut self, idx: MultiIndex, value: Scalar) {
        if value.is_zero() {
            return;
        }
        let cur = self.entries.entry(idx).or_insert_with(Scalar::zero);
        *cur = cur.add(&value);
        if cur.is_zero() {
            // re-borrow to remove; key reconstruction avoided by retain-like pass
            let dead: Vec<MultiIndex> = self
                .entries
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.entries.remove(&k);
            }
        }
    }

    pub fn add(&self, rhs: &SparseTensor) -> Result<SparseTensor> {
        self.compatible(rhs)?;
        let mut out = self.clone();
        for (idx, v) in rhs.iter() {
            out.add_at(idx.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &SparseTensor) -> Result<SparseTensor> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> SparseTensor {
        let mut out = SparseTensor::zero(self.field, self.dims.clone());
        for (idx, v) in self.iter() {
            out.entries.insert(idx.clone(), v.neg());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> SparseTensor {
        let mut out = SparseTensor::zero(self.field, self.dims.clone());
        if s.is_zero() {
            return out;
        }
        for (idx, v) in self.iter() {
            out.set(idx.clone(), v.mul(s, self.field));
        }
        out
    }

    fn compatible(&self, rhs: &SparseTensor) -> Result<()> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch(format!(
                "{} vs {}",
                self.field.name(),
                rhs.field.name()
            )));
        }
        if self.dims != rhs.dims {
            return Err(Error::DimMismatch(format!(
                "shapes {:?} vs {:?}",
                self.dims, rhs.dims
            )));
        }
        Ok(())
    }

    /// Contract paired legs of two tensors. Remaining legs keep their order:
    /// the survivors of `self` first, then the survivors of `rhs`.
    pub fn contract(&self, rhs: &SparseTensor, pairs: &[(usize, usize)]) -> Result<SparseTensor> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch(format!(
                "{} vs {}",
                self.field.name(),
                rhs.field.name()
            )));
        }
        let mut seen_l = vec![false; self.arity()];
        let mut seen_r = vec![false; rhs.arity()];
        for &(l, r) in pairs {
            if l >= self.arity() || r >= rhs.arity() {
                return Err(Error::DimMismatch(format!(
                    "contraction pair ({l},{r}) out of range"
                )));
            }
            if seen_l[l] || seen_r[r] {
                return Err(Error::DimMismatch(format!(
                    "contraction pair ({l},{r}) repeats a leg"
                )));
            }
            if self.dims[l] != rhs.dims[r] {
                return Err(Error::DimMismatch(format!(
                    "paired legs ({l},{r}) have dims {} vs {}",
                    self.dims[l], rhs.dims[r]
                )));
            }
            seen_l[l] = true;
            seen_r[r] = true;
        }
        let keep_l: Vec<usize> = (0..self.arity()).filter(|&i| !seen_l[i]).collect();
        let keep_r: Vec<usize> = (0..rhs.arity()).filter(|&i| !seen_r[i]).collect();
        let mut dims = Vec::with_capacity(keep_l.len() + keep_r.len());
        dims.extend(keep_l.iter().map(|&i| self.dims[i]));
        dims.extend(keep_r.iter().map(|&i| rhs.dims[i]));

        // Hash-join on the paired index values, driven from the rhs side.
        let rpos: Vec<usize> = pairs.iter().map(|&(_, r)| r).collect();
        let lpos: Vec<usize> = pairs.iter().map(|&(l, _)| l).collect();
        let mut buckets: BTreeMap<Vec<usize>, Vec<(&MultiIndex, &Scalar)>> = BTreeMap::new();
        for (idx, v) in rhs.iter() {
            let key: Vec<usize> = rpos.iter().map(|&p| idx[p]).collect();
            buckets.entry(key).or_default().push((idx, v));
        }
        let mut out = SparseTensor::zero(self.field, dims);
        for (lidx, lv) in self.iter() {
            let key: Vec<usize> = lpos.iter().map(|&p| lidx[p]).collect();
            let Some(matches) = buckets.get(&key) else {
                continue;
            };
            for (ridx, rv) in matches {
                let mut idx = Vec::with_capacity(keep_l.len() + keep_r.len());
                idx.extend(keep_l.iter().map(|&p| lidx[p]));
                idx.extend(keep_r.iter().map(|&p| ridx[p]));
                out.add_at(idx, lv.mul(rv, self.field));
            }
        }
        Ok(out)
    }

    /// Move leg `p` to position `perm[p]`; the entry at the permuted
    /// multi-index equals the old entry.
    pub fn permute_legs(&self, perm: &[usize]) -> Result<SparseTensor> {
        let n = self.arity();
        if perm.len() != n {
            return Err(Error::BadPermutation(format!(
                "permutation length {} vs arity {n}",
                perm.len()
            )));
        }
        let mut hit = vec![false; n];
        for &p in perm {
            if p >= n || hit[p] {
                return Err(Error::BadPermutation(format!("{perm:?}")));
            }
            hit[p] = true;
        }
        let mut dims = vec![0usize; n];
        for (i, &p) in perm.iter().enumerate() {
            dims[p] = self.dims[i];
        }
        let mut out = SparseTensor::zero(self.field, dims);
        for (idx, v) in self.iter() {
            let mut nidx = vec![0usize; n];
            for (i, &p) in perm.iter().enumerate() {
                nidx[p] = idx[i];
            }
            out.entries.insert(nidx, v.clone());
        }
        Ok(out)
    }

    /// Outer product; result legs are `self`'s then `rhs`'s.
    pub fn tensor_product(&self, rhs: &SparseTensor) -> Result<SparseTensor> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch(format!(
                "{} vs {}",
                self.field.name(),
                rhs.field.name()
            )));
        }
        self.contract(rhs, &[])
    }

    /// Restrict to the entries whose first legs match `prefix`, dropping
    /// those legs.
    pub fn slice_prefix(&self, prefix: &[usize]) -> SparseTensor {
        let k = prefix.len();
        assert!(k <= self.arity());
        let mut out = SparseTensor::zero(self.field, self.dims[k..].to_vec());
        for (idx, v) in self.iter() {
            if &idx[..k] == prefix {
                out.entries.insert(idx[k..].to_vec(), v.clone());
            }
        }
        out
    }

    /// Identity matrix as a 2-leg tensor.
    pub fn identity_matrix(field: FieldSpec, dim: usize) -> SparseTensor {
        let mut t = SparseTensor::zero(field, vec![dim, dim]);
        for i in 0..dim {
            t.entries.insert(vec![i, i], Scalar::one());
        }
        t
    }

    /// Basis vector `e_i` as a 1-leg tensor.
    pub fn basis_vector(field: FieldSpec, dim: usize, i: usize) -> SparseTensor {
        let mut t = SparseTensor::zero(field, vec![dim]);
        t.entries.insert(vec![i], Scalar::one());
        t
    }

    /// Dense coordinates of a 1-leg tensor.
    pub fn to_vec(&self) -> Vec<Scalar> {
        assert_eq!(self.arity(), 1);
        let mut v = vec![Scalar::zero(); self.dims[0]];
        for (idx, s) in self.iter() {
            v[idx[0]] = s.clone();
        }
        v
    }

    pub fn from_vec(field: FieldSpec, coords: &[Scalar]) -> SparseTensor {
        let mut t = SparseTensor::zero(field, vec![coords.len()]);
        for (i, s) in coords.iter().enumerate() {
            t.set(vec![i], s.clone());
        }
        t
    }
}

/// Iterate all multi-indices of the given shape in lexicographic order.
pub fn multi_indices(dims: &[usize]) -> impl Iterator<Item = MultiIndex> + '_ {
    let total: usize = dims.iter().product();
    let dims = dims.to_vec();
    (0..if dims.is_empty() { 1 } else { total }).map(move |mut flat| {
        let mut idx = vec![0usize; dims.len()];
        for leg in (0..dims.len()).rev() {
            idx[leg] = flat % dims[leg];
            flat /= dims[leg];
        }
        idx
    })
}
