//! Dense and sparse exact linear algebra over the coefficient field.

use crate::scalars::{FieldConfig, Scalar};

/// Dense row-major matrix of field elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(f: &FieldConfig, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![f.zero(); rows * cols] }
    }

    pub fn identity(f: &FieldConfig, n: usize) -> Self {
        let mut m = Self::zero(f, n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    pub fn from_fn(f: &FieldConfig, rows: usize, cols: usize, mut e: impl FnMut(usize, usize) -> Scalar) -> Self {
        let _ = f;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(e(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(f: &FieldConfig, dim: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zero(f, dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), dim);
            for i in 0..dim {
                m.set(i, j, c[i].clone());
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j && !self.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn add(&self, f: &FieldConfig, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, f: &FieldConfig, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self, f: &FieldConfig) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| f.neg(a)).collect() }
    }

    pub fn scale(&self, f: &FieldConfig, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| f.mul(a, c)).collect() }
    }

    /// Product, skipping zero entries of `self` (our generator matrices are
    /// mostly zero, so this keeps large products cheap).
    pub fn mul(&self, f: &FieldConfig, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let t = f.mul(a, b);
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, &t));
                }
            }
        }
        out
    }

    pub fn apply(&self, f: &FieldConfig, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![f.zero(); self.rows];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() || v[k].is_zero() {
                    continue;
                }
                out[i] = f.add(&out[i], &f.mul(a, &v[k]));
            }
        }
        out
    }

    pub fn transpose(&self, f: &FieldConfig) -> Matrix {
        Matrix::from_fn(f, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Kronecker product in lexicographic basis order.
    pub fn kron(&self, f: &FieldConfig, other: &Matrix) -> Matrix {
        let mut out = Matrix::zero(f, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for m in 0..other.cols {
                        let b = other.get(k, m);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i * other.rows + k, j * other.cols + m, f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, f: &FieldConfig, mut e: u64) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = Matrix::identity(f, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(f, &base);
            }
        }
        acc
    }

    pub fn trace(&self, f: &FieldConfig) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut t = f.zero();
        for i in 0..self.rows {
            t = f.add(&t, self.get(i, i));
        }
        t
    }

    pub fn rank(&self, f: &FieldConfig) -> usize {
        let mut ech = Echelon::new(f, self.cols);
        for i in 0..self.rows {
            ech.insert(f, self.row(i).to_vec());
        }
        ech.rank()
    }

    /// Right nullspace basis (column vectors `v` with `self * v = 0`).
    pub fn nullspace(&self, f: &FieldConfig) -> Vec<Vec<Scalar>> {
        let rows: Vec<Vec<(usize, Scalar)>> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (j, x.clone()))
                    .collect()
            })
            .collect();
        sparse_nullspace(f, rows, self.cols)
            .into_iter()
            .map(|sv| {
                let mut v = vec![f.zero(); self.cols];
                for (j, x) in sv {
                    v[j] = x;
                }
                v
            })
            .collect()
    }

    /// Exact inverse; `None` if singular.  Fast path for diagonal matrices.
    pub fn inverse(&self, f: &FieldConfig) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if self.is_diagonal() {
            let mut out = Matrix::zero(f, n, n);
            for i in 0..n {
                out.set(i, i, f.inv(self.get(i, i)).ok()?);
            }
            return Some(out);
        }
        // Gauss-Jordan on [self | I]
        let mut a = self.clone();
        let mut b = Matrix::identity(f, n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if piv != col {
                for j in 0..n {
                    let (x, y) = (a.get(piv, j).clone(), a.get(col, j).clone());
                    a.set(piv, j, y);
                    a.set(col, j, x);
                    let (x, y) = (b.get(piv, j).clone(), b.get(col, j).clone());
                    b.set(piv, j, y);
                    b.set(col, j, x);
                }
            }
            let inv = f.inv(a.get(col, col)).ok()?;
            for j in 0..n {
                a.set(col, j, f.mul(a.get(col, j), &inv));
                b.set(col, j, f.mul(b.get(col, j), &inv));
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let c = a.get(r, col).clone();
                for j in 0..n {
                    let t = f.mul(&c, a.get(col, j));
                    a.set(r, j, f.sub(a.get(r, j), &t));
                    let t = f.mul(&c, b.get(col, j));
                    b.set(r, j, f.sub(b.get(r, j), &t));
                }
            }
        }
        Some(b)
    }
}

/// Incremental row-echelon structure with change-of-basis tracking: each
/// stored row is a combination of the inserted generators, so membership
/// tests come with exact coordinates.
#[derive(Debug, Clone)]
pub struct Echelon {
    width: usize,
    /// Echelonized rows, each normalized to a unit leading entry.
    rows: Vec<Vec<Scalar>>,
    /// rows[i] has its pivot at pivots[i]; strictly increasing is not
    /// guaranteed, but pivot columns are distinct.
    pivots: Vec<usize>,
    /// rows[i] = sum over inserted generators g of transform[i][g] * gen_g.
    transform: Vec<Vec<Scalar>>,
    inserted: usize,
}

impl Echelon {
    pub fn new(_f: &FieldConfig, width: usize) -> Self {
        Echelon { width, rows: Vec::new(), pivots: Vec::new(), transform: Vec::new(), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    /// Insert a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, f: &FieldConfig, v: Vec<Scalar>) -> bool {
        let (residue, _) = self.reduce_with_coords(f, v);
        self.inserted += 1;
        match residue {
            Some((row, pivot, mut combo, scale)) => {
                combo.resize(self.inserted, f.zero());
                *combo.last_mut().unwrap() = scale;
                self.rows.push(row);
                self.pivots.push(pivot);
                self.transform.push(combo);
                true
            }
            None => false,
        }
    }

    /// Reduce `v` against the echelon.  On a nonzero residue returns the
    /// normalized residue row, its pivot column, the correction coefficients
    /// over previously inserted generators, and the normalization factor
    /// applied to `v` itself -- so residue = scale * v + sum coeffs_g gen_g.
    #[allow(clippy::type_complexity)]
    fn reduce_with_coords(
        &self,
        f: &FieldConfig,
        mut v: Vec<Scalar>,
    ) -> (Option<(Vec<Scalar>, usize, Vec<Scalar>, Scalar)>, Vec<Scalar>) {
        assert_eq!(v.len(), self.width);
        let mut coeffs = vec![f.zero(); self.inserted];
        loop {
            let pivot = v.iter().position(|x| !x.is_zero());
            let Some(pivot) = pivot else {
                return (None, coeffs);
            };
            let Some(ri) = self.pivots.iter().position(|&p| p == pivot) else {
                // normalize to unit pivot
                let c = f.inv(&v[pivot]).expect("nonzero pivot");
                for x in v.iter_mut() {
                    if !x.is_zero() {
                        *x = f.mul(x, &c);
                    }
                }
                for x in coeffs.iter_mut() {
                    if !x.is_zero() {
                        *x = f.mul(x, &c);
                    }
                }
                return (Some((v, pivot, coeffs, c)), vec![]);
            };
            let c = v[pivot].clone();
            for j in 0..self.width {
                let r = &self.rows[ri][j];
                if r.is_zero() {
                    continue;
                }
                v[j] = f.sub(&v[j], &f.mul(&c, r));
            }
            for (g, t) in self.transform[ri].iter().enumerate() {
                if t.is_zero() {
                    continue;
                }
                coeffs[g] = f.sub(&coeffs[g], &f.mul(&c, t));
            }
        }
    }

    /// True iff `v` lies in the current span.
    pub fn contains(&self, f: &FieldConfig, v: &[Scalar]) -> bool {
        let (residue, _) = self.reduce_with_coords(f, v.to_vec());
        residue.is_none()
    }

    /// Coordinates of `v` in terms of the inserted generators, if `v` is in
    /// the span.  Only meaningful when the generators were independent.
    pub fn coordinates(&self, f: &FieldConfig, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let (residue, coeffs) = self.reduce_with_coords(f, v.to_vec());
        match residue {
            Some(_) => None,
            None => {
                // v - sum coeffs_g gen_g = 0, so v = sum (-coeffs_g) gen_g
                Some(coeffs.iter().map(|c| f.neg(c)).collect())
            }
        }
    }

    /// The reduced residue of `v` modulo the span (not normalized).
    pub fn residue(&self, f: &FieldConfig, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        loop {
            let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
                return v;
            };
            let Some(ri) = self.pivots.iter().position(|&p| p == pivot) else {
                return v;
            };
            let c = v[pivot].clone();
            for j in 0..self.width {
                let r = &self.rows[ri][j];
                if r.is_zero() {
                    continue;
                }
                v[j] = f.sub(&v[j], &f.mul(&c, r));
            }
        }
    }

    /// Basis rows of the span, in insertion-pivot order.
    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }
}

/// Nullspace of a sparse homogeneous system.  `rows` are sparse equations
/// over `ncols` variables; returns a sparse basis of the solution space.
pub fn sparse_nullspace(
    f: &FieldConfig,
    rows: Vec<Vec<(usize, Scalar)>>,
    ncols: usize,
) -> Vec<Vec<(usize, Scalar)>> {
    // eliminate: pivots[col] = normalized sparse row with leading column col
    let mut pivot_of: Vec<Option<usize>> = vec![None; ncols];
    let mut stored: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for mut row in rows {
        row.sort_by_key(|e| e.0);
        row.retain(|e| !e.1.is_zero());
        loop {
            let Some(&(lead, ref lc)) = row.first() else { break };
            match pivot_of[lead] {
                Some(pi) => {
                    let c = lc.clone();
                    row = sparse_axpy(f, &row, &stored[pi], &c);
                }
                None => {
                    let inv = f.inv(lc).expect("nonzero lead");
                    for e in row.iter_mut() {
                        e.1 = f.mul(&e.1, &inv);
                    }
                    pivot_of[lead] = Some(stored.len());
                    stored.push(row);
                    break;
                }
            }
        }
    }
    // back-substitute for each free column
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_of[free].is_some() {
            continue;
        }
        let mut x: Vec<Option<Scalar>> = vec![None; ncols];
        x[free] = Some(f.one());
        // process pivot columns in descending order
        for col in (0..free).rev() {
            let Some(pi) = pivot_of[col] else { continue };
            // x[col] = -sum_{c > col} row[c] * x[c]
            let mut acc = f.zero();
            for (c, coef) in stored[pi].iter().skip(1) {
                if let Some(xc) = &x[*c] {
                    if !xc.is_zero() {
                        acc = f.add(&acc, &f.mul(coef, xc));
                    }
                }
            }
            if !acc.is_zero() {
                x[col] = Some(f.neg(&acc));
            }
        }
        // pivot columns above `free` stay zero: rows with pivot > free never
        // reference x-entries set here because elimination ordered leads
        let v: Vec<(usize, Scalar)> = x
            .into_iter()
            .enumerate()
            .filter_map(|(j, o)| o.filter(|s| !s.is_zero()).map(|s| (j, s)))
            .collect();
        basis.push(v);
    }
    basis
}

/// row - c * pivot_row, both sorted sparse; pivot_row has unit lead.
fn sparse_axpy(
    f: &FieldConfig,
    row: &[(usize, Scalar)],
    pivot_row: &[(usize, Scalar)],
    c: &Scalar,
) -> Vec<(usize, Scalar)> {
    let mut out = Vec::with_capacity(row.len() + pivot_row.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot_row.len() {
        if j >= pivot_row.len() || (i < row.len() && row[i].0 < pivot_row[j].0) {
            out.push(row[i].clone());
            i += 1;
        } else if i >= row.len() || pivot_row[j].0 < row[i].0 {
            let v = f.neg(&f.mul(c, &pivot_row[j].1));
            if !v.is_zero() {
                out.push((pivot_row[j].0, v));
            }
            j += 1;
        } else {
            let v = f.sub(&row[i].1, &f.mul(c, &pivot_row[j].1));
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{make_field, FieldMode};

    #[test]
    fn inverse_round_trip() {
        let f = make_field(3, FieldMode::Cyclotomic, None).unwrap();
        let m = Matrix::from_fn(&f, 3, 3, |i, j| {
            if i == j {
                f.eps()
            } else if j == i + 1 {
                f.one()
            } else {
                f.zero()
            }
        });
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&f, &inv), Matrix::identity(&f, 3));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let f = make_field(3, FieldMode::Cyclotomic, None).unwrap();
        let m = Matrix::from_fn(&f, 2, 2, |_, _| f.one());
        assert!(m.inverse(&f).is_none());
    }

    #[test]
    fn nullspace_of_rank_one() {
        let f = make_field(3, FieldMode::PrimeField, Some(7)).unwrap();
        // x + 2y + 3z = 0 has a 2-dimensional solution space
        let m = Matrix::from_fn(&f, 1, 3, |_, j| f.from_i64(j as i64 + 1));
        let ns = m.nullspace(&f);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.apply(&f, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn sparse_nullspace_matches_dense_rank() {
        let f = make_field(5, FieldMode::Cyclotomic, None).unwrap();
        let m = Matrix::from_fn(&f, 4, 5, |i, j| f.from_i64(((i * j) % 3) as i64 - 1));
        let ns = m.nullspace(&f);
        assert_eq!(ns.len(), 5 - m.rank(&f));
        for v in &ns {
            assert!(m.apply(&f, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn echelon_coordinates_recover_combination() {
        let f = make_field(3, FieldMode::Cyclotomic, None).unwrap();
        let g1 = vec![f.one(), f.eps(), f.zero()];
        let g2 = vec![f.zero(), f.one(), f.one()];
        let mut ech = Echelon::new(&f, 3);
        assert!(ech.insert(&f, g1.clone()));
        assert!(ech.insert(&f, g2.clone()));
        // v = 2*g1 - eps*g2
        let c1 = f.from_i64(2);
        let c2 = f.neg(&f.eps());
        let v: Vec<Scalar> = (0..3).map(|i| f.add(&f.mul(&c1, &g1[i]), &f.mul(&c2, &g2[i]))).collect();
        let coords = ech.coordinates(&f, &v).unwrap();
        assert_eq!(coords, vec![c1, c2]);
        assert!(!ech.insert(&f, v));
    }

    #[test]
    fn kron_respects_lex_order() {
        let f = make_field(3, FieldMode::PrimeField, Some(7)).unwrap();
        let a = Matrix::from_fn(&f, 2, 2, |i, j| f.from_i64((2 * i + j) as i64));
        let id = Matrix::identity(&f, 3);
        let k = a.kron(&f, &id);
        assert_eq!(k.rows, 6);
        assert_eq!(*k.get(0, 3), f.from_i64(1));
        assert_eq!(*k.get(4, 1), f.from_i64(2));
    }
}
