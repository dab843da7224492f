//! Concrete module constructions for the infinitesimal quantum group: the
//! natural module, tensor products through the comultiplication, the
//! simple and projective sl2-modules, their canonical submodules and linking
//! maps, and Hom-space computation by exact intertwiner solving.

use std::sync::Arc;

use thiserror::Error;

use crate::linalg::{sparse_nullspace, Echelon, Matrix};
use crate::scalars::{Field, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepsError {
    #[error("modules carry different generator flavors")]
    FlavorMismatch,
    #[error("index {0} out of range for l = {1}")]
    BadIndex(i64, i64),
    #[error("the given subspace is not stable under the action")]
    NotASubmodule,
}

/// Which generator set the module carries: the gl2 flavor acts through
/// `E, F, K1, K2`, the sl2 flavor through `E, F, K` only.  A module restricted
/// from gl2 keeps `K1, K2` as labeling metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Gl2,
    Sl2,
}

/// A finite-dimensional representation given by generator matrices.
#[derive(Debug, Clone)]
pub struct Module {
    pub dim: usize,
    pub field: Field,
    pub flavor: Flavor,
    pub e: Matrix,
    pub f: Matrix,
    pub k: Matrix,
    pub k1: Option<Matrix>,
    pub k2: Option<Matrix>,
    pub labels: Vec<String>,
}

/// A matrix intertwiner between two modules; `matrix` is `target.dim` by
/// `source.dim` and acts on column vectors.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    pub source: Arc<Module>,
    pub target: Arc<Module>,
    pub matrix: Matrix,
}

impl ModuleMap {
    /// Exact intertwiner certificate over the module's generator set.
    pub fn verify(&self) -> bool {
        let f = &*self.source.field;
        let gens: Vec<(&Matrix, &Matrix)> = match self.source.flavor {
            Flavor::Gl2 => vec![
                (&self.source.e, &self.target.e),
                (&self.source.f, &self.target.f),
                (self.source.k1.as_ref().unwrap(), self.target.k1.as_ref().unwrap()),
                (self.source.k2.as_ref().unwrap(), self.target.k2.as_ref().unwrap()),
            ],
            Flavor::Sl2 => vec![
                (&self.source.e, &self.target.e),
                (&self.source.f, &self.target.f),
                (&self.source.k, &self.target.k),
            ],
        };
        gens.into_iter()
            .all(|(gs, gt)| self.matrix.mul(f, gs) == gt.mul(f, &self.matrix))
    }

    /// Diagrammatic composition: `self` first, then `next`.
    pub fn then(&self, next: &ModuleMap) -> ModuleMap {
        assert_eq!(self.target.dim, next.source.dim, "composition dimension mismatch");
        ModuleMap {
            source: self.source.clone(),
            target: next.target.clone(),
            matrix: next.matrix.mul(&self.source.field, &self.matrix),
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.source.dim == self.target.dim
            && self.matrix.rank(&self.source.field) == self.source.dim
    }
}

impl Module {
    fn same_field(&self, other: &Module) -> bool {
        self.field.mode_string() == other.field.mode_string() && self.field.l == other.field.l
    }

    /// Joint diagonal weight exponents per basis vector: `(log_eps K1, log_eps K2)`
    /// in the gl2 flavor, `(log_eps K, 0)` in the sl2 flavor.  `None` when the
    /// relevant generators are not diagonal in this basis.
    pub fn weight_keys(&self) -> Option<Vec<(i64, i64)>> {
        let f = &*self.field;
        match self.flavor {
            Flavor::Gl2 => {
                let k1 = self.k1.as_ref()?;
                let k2 = self.k2.as_ref()?;
                if !k1.is_diagonal() || !k2.is_diagonal() {
                    return None;
                }
                (0..self.dim)
                    .map(|i| Some((f.eps_log(k1.get(i, i))?, f.eps_log(k2.get(i, i))?)))
                    .collect()
            }
            Flavor::Sl2 => {
                if !self.k.is_diagonal() {
                    return None;
                }
                (0..self.dim).map(|i| Some((f.eps_log(self.k.get(i, i))?, 0))).collect()
            }
        }
    }
}

/// The 2-dimensional natural module in the gl2 flavor.
pub fn natural_module(field: &Field) -> Module {
    let f = &**field;
    let eps = f.eps();
    let mut e = Matrix::zero(f, 2, 2);
    e.set(0, 1, f.one());
    let mut fm = Matrix::zero(f, 2, 2);
    fm.set(1, 0, f.one());
    let mut k1 = Matrix::identity(f, 2);
    k1.set(0, 0, eps.clone());
    let mut k2 = Matrix::identity(f, 2);
    k2.set(1, 1, eps.clone());
    let mut k = Matrix::identity(f, 2);
    k.set(0, 0, eps.clone());
    k.set(1, 1, f.eps_pow(-1));
    Module {
        dim: 2,
        field: field.clone(),
        flavor: Flavor::Gl2,
        e,
        f: fm,
        k,
        k1: Some(k1),
        k2: Some(k2),
        labels: vec!["w1".into(), "w2".into()],
    }
}

/// Tensor product along the comultiplication
/// `E -> E (x) K + 1 (x) E`, `F -> F (x) 1 + K^-1 (x) F`, `K_i -> K_i (x) K_i`,
/// on the lexicographic tensor basis.
pub fn tensor(m: &Module, n: &Module) -> Result<Module, RepsError> {
    if m.flavor != n.flavor || !m.same_field(n) {
        return Err(RepsError::FlavorMismatch);
    }
    let f = &*m.field;
    let im = Matrix::identity(f, m.dim);
    let inn = Matrix::identity(f, n.dim);
    let mk_inv = m.k.inverse(f).expect("K is invertible");
    let e = m.e.kron(f, &n.k).add(f, &im.kron(f, &n.e));
    let fm = m.f.kron(f, &inn).add(f, &mk_inv.kron(f, &n.f));
    let k = m.k.kron(f, &n.k);
    let (k1, k2) = match (&m.k1, &n.k1, &m.k2, &n.k2) {
        (Some(a), Some(b), Some(c), Some(d)) => (Some(a.kron(f, b)), Some(c.kron(f, d))),
        _ => (None, None),
    };
    let mut labels = Vec::with_capacity(m.dim * n.dim);
    for a in &m.labels {
        for b in &n.labels {
            labels.push(format!("{a}.{b}"));
        }
    }
    Ok(Module { dim: m.dim * n.dim, field: m.field.clone(), flavor: m.flavor, e, f: fm, k, k1, k2, labels })
}

/// The `r`-fold tensor power of the natural module.
pub fn tensor_power(field: &Field, r: usize) -> Module {
    assert!(r >= 1);
    let omega = natural_module(field);
    let mut acc = omega.clone();
    for _ in 1..r {
        acc = tensor(&acc, &omega).expect("same flavor");
    }
    acc
}

/// The simple sl2-module of dimension `j`, `1 <= j <= l`.
pub fn simple_module(field: &Field, j: i64) -> Result<Module, RepsError> {
    let f = &**field;
    let l = f.l;
    if !(1..=l).contains(&j) {
        return Err(RepsError::BadIndex(j, l));
    }
    let d = j as usize;
    let mut e = Matrix::zero(f, d, d);
    let mut fm = Matrix::zero(f, d, d);
    let mut k = Matrix::zero(f, d, d);
    for i in 0..d {
        let iw = i as i64;
        k.set(i, i, f.eps_pow(j - 1 - 2 * iw));
        if i > 0 {
            e.set(i - 1, i, f.q_int(j - iw));
        }
        if i + 1 < d {
            fm.set(i + 1, i, f.q_int(iw + 1));
        }
    }
    Ok(Module {
        dim: d,
        field: field.clone(),
        flavor: Flavor::Sl2,
        e,
        f: fm,
        k,
        k1: None,
        k2: None,
        labels: (0..d).map(|i| format!("v{i}")).collect(),
    })
}

/// The projective cover of the simple of dimension `j` in the sl2 flavor,
/// `1 <= j <= l-1`; dimension `2l` on basis `v_0..v_{l-1}, w_0..w_{l-1}`.
pub fn projective_module(field: &Field, j: i64) -> Result<Module, RepsError> {
    let f = &**field;
    let l = f.l;
    if !(1..=l - 1).contains(&j) {
        return Err(RepsError::BadIndex(j, l));
    }
    let lu = l as usize;
    let d = 2 * lu;
    let wi = |s: usize| lu + s;
    let mut e = Matrix::zero(f, d, d);
    let mut fm = Matrix::zero(f, d, d);
    let mut k = Matrix::zero(f, d, d);
    for s in 0..lu {
        let sw = s as i64;
        k.set(s, s, f.eps_pow(l - j - 2 * sw - 1));
        k.set(wi(s), wi(s), f.eps_pow(j - 2 * sw - 1));
        if s > 0 {
            e.set(s - 1, s, f.q_int(l - j - sw));
            e.set(wi(s - 1), wi(s), f.q_int(j - sw));
        }
        // E w_s also hits v_{s-j-1+l} with a Gaussian binomial coefficient
        if sw <= j {
            let vi = (sw - j - 1 + l) as usize;
            e.set(vi, wi(s), f.q_binom(l - j - 1 + sw, sw));
        }
        if s + 1 < lu {
            fm.set(s + 1, s, f.q_int(sw + 1));
            fm.set(wi(s + 1), wi(s), f.q_int(sw + 1));
        }
    }
    let mut labels: Vec<String> = (0..lu).map(|i| format!("v{i}")).collect();
    labels.extend((0..lu).map(|i| format!("w{i}")));
    Ok(Module { dim: d, field: field.clone(), flavor: Flavor::Sl2, e, f: fm, k, k1: None, k2: None, labels })
}

/// The canonical submodules of the projective `P_j`, as coordinate spans:
/// `V_j = <v_{l-j}..v_{l-1}>`, `M_j = <v_0..v_{l-1}>`,
/// `N_j = <v_{l-j}..v_{l-1}, w_j..w_{l-1}>`.
pub fn canonical_submodules(field: &Field, j: i64) -> Result<(Matrix, Matrix, Matrix), RepsError> {
    let f = &**field;
    let l = f.l;
    if !(1..=l - 1).contains(&j) {
        return Err(RepsError::BadIndex(j, l));
    }
    let lu = l as usize;
    let d = 2 * lu;
    let coords = |ix: Vec<usize>| {
        let cols: Vec<Vec<Scalar>> = ix
            .iter()
            .map(|&i| {
                let mut v = vec![f.zero(); d];
                v[i] = f.one();
                v
            })
            .collect();
        Matrix::from_columns(f, d, &cols)
    };
    let v = coords(((lu - j as usize)..lu).collect());
    let m = coords((0..lu).collect());
    let mut n_ix: Vec<usize> = ((lu - j as usize)..lu).collect();
    n_ix.extend((j as usize..lu).map(|s| lu + s));
    let n = coords(n_ix);
    Ok((v, m, n))
}

/// The two linking maps `P_j -> P_{l-j}`: the first kills `M_j` and sends
/// `w_s` to `v_s`, the second kills `N_j` and scales by the coefficients
/// `a_s = [j] [s+j s]`, `b_t = [l-j] [l+t-j t]`.
pub fn alpha_maps(field: &Field, j: i64) -> Result<(ModuleMap, ModuleMap), RepsError> {
    let f = &**field;
    let l = f.l;
    let src = Arc::new(projective_module(field, j)?);
    let tgt = Arc::new(projective_module(field, l - j)?);
    let lu = l as usize;
    let d = 2 * lu;
    let mut a1 = Matrix::zero(f, d, d);
    for s in 0..lu {
        a1.set(s, lu + s, f.one());
    }
    let mut a2 = Matrix::zero(f, d, d);
    for s in 0..(l - j) as usize {
        let coef = f.mul(&f.q_int(j), &f.q_binom(s as i64 + j, s as i64));
        a2.set(s + j as usize, s, coef);
    }
    for t in 0..j as usize {
        let coef = f.mul(&f.q_int(l - j), &f.q_binom(l + t as i64 - j, t as i64));
        a2.set(lu + t + (l - j) as usize, lu + t, coef);
    }
    let m1 = ModuleMap { source: src.clone(), target: tgt.clone(), matrix: a1 };
    let m2 = ModuleMap { source: src, target: tgt, matrix: a2 };
    Ok((m1, m2))
}

/// Keep `K1, K2` as metadata but intertwine over `E, F, K` only.
pub fn restrict_to_sl2(m: &Module) -> Module {
    let mut out = m.clone();
    out.flavor = Flavor::Sl2;
    out
}

/// Exact check of the defining relations on the module, including
/// `K_i^l = 1`, `E^l = F^l = 0` and `K = K1 K2^-1` in the gl2 flavor.
pub fn check_relations(m: &Module) -> bool {
    let f = &*m.field;
    let l = f.l as u64;
    let id = Matrix::identity(f, m.dim);
    let Some(k_inv) = m.k.inverse(f) else { return false };
    let eps2 = f.eps_pow(2);
    let eps_m2 = f.eps_pow(-2);
    // (b)/(c) in the combined form K E = eps^2 E K, K F = eps^-2 F K
    if m.k.mul(f, &m.e) != m.e.mul(f, &m.k).scale(f, &eps2) {
        return false;
    }
    if m.k.mul(f, &m.f) != m.f.mul(f, &m.k).scale(f, &eps_m2) {
        return false;
    }
    // (d)
    let lhs = m.e.mul(f, &m.f).sub(f, &m.f.mul(f, &m.e));
    let denom = f.sub(&f.eps(), &f.eps_pow(-1));
    let rhs = m.k.sub(f, &k_inv).scale(f, &f.inv(&denom).unwrap());
    if lhs != rhs {
        return false;
    }
    if m.k.pow(f, l) != id || !m.e.pow(f, l).is_zero() || !m.f.pow(f, l).is_zero() {
        return false;
    }
    if m.flavor == Flavor::Gl2 {
        let (Some(k1), Some(k2)) = (&m.k1, &m.k2) else { return false };
        let Some(k2_inv) = k2.inverse(f) else { return false };
        if k1.mul(f, k2) != k2.mul(f, k1) {
            return false;
        }
        if k1.mul(f, &k2_inv) != m.k {
            return false;
        }
        if k1.pow(f, l) != id || k2.pow(f, l) != id {
            return false;
        }
        // (b), (c) for the individual K_i
        let eps = f.eps();
        let eps_inv = f.eps_pow(-1);
        if k1.mul(f, &m.e) != m.e.mul(f, k1).scale(f, &eps)
            || k2.mul(f, &m.e) != m.e.mul(f, k2).scale(f, &eps_inv)
            || k1.mul(f, &m.f) != m.f.mul(f, k1).scale(f, &eps_inv)
            || k2.mul(f, &m.f) != m.f.mul(f, k2).scale(f, &eps)
        {
            return false;
        }
    }
    true
}

/// A basis of `Hom(M, N)` by exact nullspace computation of the intertwiner
/// system over the module's generator set.  When the diagonal generators
/// expose a weight grading the system is solved block-by-block.
pub fn hom_space(m: &Arc<Module>, n: &Arc<Module>) -> Result<Vec<ModuleMap>, RepsError> {
    if m.flavor != n.flavor || !m.same_field(n) {
        return Err(RepsError::FlavorMismatch);
    }
    let f = &*m.field;
    let keys_m = m.weight_keys();
    let keys_n = n.weight_keys();
    // variables: entries (i, j) of X with compatible weights
    let mut vars: Vec<(usize, usize)> = Vec::new();
    match (&keys_n, &keys_m) {
        (Some(kn), Some(km)) => {
            let mut order: Vec<(i64, i64)> = km.iter().chain(kn.iter()).copied().collect();
            order.sort();
            order.dedup();
            for key in order {
                for (i, kni) in kn.iter().enumerate() {
                    if *kni != key {
                        continue;
                    }
                    for (j, kmj) in km.iter().enumerate() {
                        if *kmj == key {
                            vars.push((i, j));
                        }
                    }
                }
            }
        }
        _ => {
            for i in 0..n.dim {
                for j in 0..m.dim {
                    vars.push((i, j));
                }
            }
        }
    }
    let mut var_index = vec![usize::MAX; n.dim * m.dim];
    for (v, &(i, j)) in vars.iter().enumerate() {
        var_index[i * m.dim + j] = v;
    }
    // constraint generators: E and F always; diagonal generators only when
    // the weight grading was unavailable
    let mut gens: Vec<(&Matrix, &Matrix)> = vec![(&m.e, &n.e), (&m.f, &n.f)];
    if keys_m.is_none() || keys_n.is_none() {
        match m.flavor {
            Flavor::Sl2 => gens.push((&m.k, &n.k)),
            Flavor::Gl2 => {
                gens.push((m.k1.as_ref().unwrap(), n.k1.as_ref().unwrap()));
                gens.push((m.k2.as_ref().unwrap(), n.k2.as_ref().unwrap()));
            }
        }
    }
    use std::collections::HashMap;
    let mut eqs: HashMap<(usize, usize, usize), Vec<(usize, Scalar)>> = HashMap::new();
    for (g_idx, (gm, gn)) in gens.iter().enumerate() {
        // (X gm - gn X)[i, j] = 0
        for (v, &(i, kcol)) in vars.iter().enumerate() {
            // X[i, kcol] * gm[kcol, j] contributes to equation (i, j)
            for j in 0..m.dim {
                let c = gm.get(kcol, j);
                if c.is_zero() {
                    continue;
                }
                eqs.entry((g_idx, i, j)).or_default().push((v, c.clone()));
            }
        }
        for (v, &(krow, j)) in vars.iter().enumerate() {
            // -gn[i, krow] * X[krow, j] contributes to equation (i, j)
            for i in 0..n.dim {
                let c = gn.get(i, krow);
                if c.is_zero() {
                    continue;
                }
                eqs.entry((g_idx, i, j)).or_default().push((v, f.neg(c)));
            }
        }
    }
    let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::with_capacity(eqs.len());
    let mut keys: Vec<(usize, usize, usize)> = eqs.keys().copied().collect();
    keys.sort();
    for key in keys {
        let mut row = eqs.remove(&key).unwrap();
        row.sort_by_key(|e| e.0);
        // merge duplicate variable entries
        let mut merged: Vec<(usize, Scalar)> = Vec::with_capacity(row.len());
        for (v, c) in row {
            match merged.last_mut() {
                Some((lv, lc)) if *lv == v => *lc = f.add(lc, &c),
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|e| !e.1.is_zero());
        if !merged.is_empty() {
            rows.push(merged);
        }
    }
    rows.sort_by_key(|r| r.first().map_or(usize::MAX, |e| e.0));
    let sols = sparse_nullspace(f, rows, vars.len());
    let maps: Vec<ModuleMap> = sols
        .into_iter()
        .map(|sv| {
            let mut mat = Matrix::zero(f, n.dim, m.dim);
            for (v, c) in sv {
                let (i, j) = vars[v];
                mat.set(i, j, c);
            }
            ModuleMap { source: m.clone(), target: n.clone(), matrix: mat }
        })
        .collect();
    for map in &maps {
        assert!(map.verify(), "solver produced a non-intertwiner");
    }
    Ok(maps)
}

/// Generator matrices applied in closure computations.
fn acting_matrices(m: &Module) -> Vec<&Matrix> {
    match m.flavor {
        Flavor::Gl2 => vec![&m.e, &m.f, m.k1.as_ref().unwrap(), m.k2.as_ref().unwrap()],
        Flavor::Sl2 => vec![&m.e, &m.f, &m.k],
    }
}

/// Smallest stable subspace containing the given vectors, as a
/// weight-homogeneous column basis.
pub fn submodule_closure(m: &Module, vectors: &[Vec<Scalar>]) -> Matrix {
    let f = &*m.field;
    let mut ech = Echelon::new(f, m.dim);
    let mut queue: Vec<Vec<Scalar>> = Vec::new();
    for v in vectors {
        if ech.insert(f, v.clone()) {
            queue.push(v.clone());
        }
    }
    let gens = acting_matrices(m);
    while let Some(v) = queue.pop() {
        for g in &gens {
            let w = g.apply(f, &v);
            if ech.insert(f, w.clone()) {
                queue.push(w);
            }
        }
    }
    let basis: Vec<Vec<Scalar>> = ech.basis().to_vec();
    let adapted = weight_adapt(m, &basis);
    Matrix::from_columns(f, m.dim, &adapted)
}

/// Split vectors into weight-homogeneous components (coordinate restriction
/// per weight class of the ambient module) and re-extract a basis, ordered
/// by weight class.
pub fn weight_adapt(m: &Module, vectors: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let f = &*m.field;
    let Some(keys) = m.weight_keys() else {
        let mut ech = Echelon::new(f, m.dim);
        for v in vectors {
            ech.insert(f, v.clone());
        }
        return ech.basis().to_vec();
    };
    let mut classes: Vec<(i64, i64)> = keys.clone();
    classes.sort();
    classes.dedup();
    let mut out = Vec::new();
    for class in classes {
        let mut ech = Echelon::new(f, m.dim);
        for v in vectors {
            let mut comp = vec![f.zero(); m.dim];
            let mut nonzero = false;
            for (i, x) in v.iter().enumerate() {
                if keys[i] == class && !x.is_zero() {
                    comp[i] = x.clone();
                    nonzero = true;
                }
            }
            if nonzero {
                ech.insert(f, comp);
            }
        }
        out.extend(ech.basis().iter().cloned());
    }
    out
}

/// Induced module structure on a stable subspace with the given column
/// basis, together with the inclusion map.
pub fn induced_submodule(m: &Arc<Module>, basis: &Matrix) -> Result<(Arc<Module>, ModuleMap), RepsError> {
    let f = &*m.field;
    let d = basis.cols;
    let mut ech = Echelon::new(f, m.dim);
    for j in 0..d {
        if !ech.insert(f, basis.column(j)) {
            return Err(RepsError::NotASubmodule);
        }
    }
    let induce = |g: &Matrix| -> Result<Matrix, RepsError> {
        let mut out = Matrix::zero(f, d, d);
        for j in 0..d {
            let img = g.apply(f, &basis.column(j));
            let coords = ech.coordinates(f, &img).ok_or(RepsError::NotASubmodule)?;
            for (i, c) in coords.into_iter().enumerate() {
                out.set(i, j, c);
            }
        }
        Ok(out)
    };
    let sub = Module {
        dim: d,
        field: m.field.clone(),
        flavor: m.flavor,
        e: induce(&m.e)?,
        f: induce(&m.f)?,
        k: induce(&m.k)?,
        k1: m.k1.as_ref().map(|g| induce(g)).transpose()?,
        k2: m.k2.as_ref().map(|g| induce(g)).transpose()?,
        labels: (0..d).map(|i| format!("s{i}")).collect(),
    };
    let sub = Arc::new(sub);
    let incl = ModuleMap { source: sub.clone(), target: m.clone(), matrix: basis.clone() };
    Ok((sub, incl))
}

/// Quotient by a stable subspace: induced action on the non-pivot coordinate
/// complement, with the projection map.
pub fn quotient(m: &Arc<Module>, sub_basis: &Matrix) -> Result<(Arc<Module>, ModuleMap), RepsError> {
    let f = &*m.field;
    // verify stability first
    let mut ech = Echelon::new(f, m.dim);
    for j in 0..sub_basis.cols {
        ech.insert(f, sub_basis.column(j));
    }
    if ech.rank() != sub_basis.cols {
        return Err(RepsError::NotASubmodule);
    }
    for g in acting_matrices(m) {
        for j in 0..sub_basis.cols {
            if !ech.contains(f, &g.apply(f, &sub_basis.column(j))) {
                return Err(RepsError::NotASubmodule);
            }
        }
    }
    let pivots: Vec<usize> = ech.pivot_columns().to_vec();
    let complement: Vec<usize> = (0..m.dim).filter(|i| !pivots.contains(i)).collect();
    let d = complement.len();
    // fully reduce a vector modulo the subspace, then restrict to complement
    let reduce_to_complement = |v: &[Scalar]| -> Vec<Scalar> {
        let r = full_reduce(f, &ech, v);
        complement.iter().map(|&i| r[i].clone()).collect()
    };
    let induce = |g: &Matrix| -> Matrix {
        let mut out = Matrix::zero(f, d, d);
        for (jq, &jc) in complement.iter().enumerate() {
            let col = reduce_to_complement(&g.column(jc));
            for i in 0..d {
                out.set(i, jq, col[i].clone());
            }
        }
        out
    };
    let quot = Module {
        dim: d,
        field: m.field.clone(),
        flavor: m.flavor,
        e: induce(&m.e),
        f: induce(&m.f),
        k: induce(&m.k),
        k1: m.k1.as_ref().map(&induce),
        k2: m.k2.as_ref().map(&induce),
        labels: complement.iter().map(|&i| format!("q{i}")).collect(),
    };
    let quot = Arc::new(quot);
    let mut proj = Matrix::zero(f, d, m.dim);
    for i in 0..m.dim {
        let mut v = vec![f.zero(); m.dim];
        v[i] = f.one();
        let col = reduce_to_complement(&v);
        for (qi, c) in col.into_iter().enumerate() {
            proj.set(qi, i, c);
        }
    }
    let pmap = ModuleMap { source: m.clone(), target: quot.clone(), matrix: proj };
    Ok((quot, pmap))
}

/// Eliminate every pivot coordinate of the echelon from `v` (single
/// increasing pass; echelon rows have strictly later support).
fn full_reduce(f: &crate::scalars::FieldConfig, ech: &Echelon, v: &[Scalar]) -> Vec<Scalar> {
    let mut v = v.to_vec();
    let mut order: Vec<(usize, usize)> =
        ech.pivot_columns().iter().copied().enumerate().map(|(ri, p)| (p, ri)).collect();
    order.sort();
    for (p, ri) in order {
        if v[p].is_zero() {
            continue;
        }
        let c = v[p].clone();
        for (j, r) in ech.basis()[ri].iter().enumerate() {
            if !r.is_zero() {
                v[j] = f.sub(&v[j], &f.mul(&c, r));
            }
        }
    }
    v
}

/// Block-diagonal direct sum with the canonical inclusion/projection pairs.
pub fn direct_sum(parts: &[Arc<Module>]) -> (Arc<Module>, Vec<(ModuleMap, ModuleMap)>) {
    assert!(!parts.is_empty());
    let f = &*parts[0].field;
    let dim: usize = parts.iter().map(|p| p.dim).sum();
    let embed = |mats: Vec<&Matrix>| -> Matrix {
        let mut out = Matrix::zero(f, dim, dim);
        let mut off = 0;
        for g in mats {
            for i in 0..g.rows {
                for j in 0..g.cols {
                    let v = g.get(i, j);
                    if !v.is_zero() {
                        out.set(off + i, off + j, v.clone());
                    }
                }
            }
            off += g.rows;
        }
        out
    };
    let has_k12 = parts.iter().all(|p| p.k1.is_some() && p.k2.is_some());
    let sum = Module {
        dim,
        field: parts[0].field.clone(),
        flavor: parts[0].flavor,
        e: embed(parts.iter().map(|p| &p.e).collect()),
        f: embed(parts.iter().map(|p| &p.f).collect()),
        k: embed(parts.iter().map(|p| &p.k).collect()),
        k1: has_k12.then(|| embed(parts.iter().map(|p| p.k1.as_ref().unwrap()).collect())),
        k2: has_k12.then(|| embed(parts.iter().map(|p| p.k2.as_ref().unwrap()).collect())),
        labels: parts
            .iter()
            .enumerate()
            .flat_map(|(pi, p)| p.labels.iter().map(move |s| format!("{pi}:{s}")))
            .collect(),
    };
    let sum = Arc::new(sum);
    let mut maps = Vec::new();
    let mut off = 0;
    for p in parts {
        let mut incl = Matrix::zero(f, dim, p.dim);
        let mut proj = Matrix::zero(f, p.dim, dim);
        for i in 0..p.dim {
            incl.set(off + i, i, f.one());
            proj.set(i, off + i, f.one());
        }
        maps.push((
            ModuleMap { source: p.clone(), target: sum.clone(), matrix: incl },
            ModuleMap { source: sum.clone(), target: p.clone(), matrix: proj },
        ));
        off += p.dim;
    }
    (sum, maps)
}

/// The Casimir operator `EF + (eps^-1 K + eps K^-1) / (eps - eps^-1)^2`;
/// commutes with the full action.
pub fn casimir(m: &Module) -> Matrix {
    let f = &*m.field;
    let k_inv = m.k.inverse(f).expect("K invertible");
    let d = f.sub(&f.eps(), &f.eps_pow(-1));
    let c = f.inv(&f.mul(&d, &d)).unwrap();
    let diag = m
        .k
        .scale(f, &f.eps_pow(-1))
        .add(f, &k_inv.scale(f, &f.eps()))
        .scale(f, &c);
    m.e.mul(f, &m.f).add(f, &diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{make_field, FieldMode};

    fn cyc(l: i64) -> Field {
        make_field(l, FieldMode::Cyclotomic, None).unwrap()
    }

    #[test]
    fn natural_module_action() {
        let field = cyc(3);
        let f = &*field;
        let omega = natural_module(&field);
        // K1 w1 = eps w1, E w2 = w1, F w2 = 0
        assert_eq!(*omega.k1.as_ref().unwrap().get(0, 0), f.eps());
        assert_eq!(*omega.e.get(0, 1), f.one());
        assert!(omega.f.column(1).iter().all(|x| x.is_zero()));
        assert!(check_relations(&omega));
    }

    #[test]
    fn tensor_square_action() {
        let field = cyc(5);
        let f = &*field;
        let omega = natural_module(&field);
        let t = tensor(&omega, &omega).unwrap();
        assert_eq!(t.dim, 4);
        assert!(check_relations(&t));
        // E (w2 (x) w2) = eps^-1 w1 (x) w2 + w2 (x) w1
        let col = t.e.column(3);
        assert_eq!(col[1], f.eps_pow(-1));
        assert_eq!(col[2], f.one());
        assert!(col[0].is_zero() && col[3].is_zero());
    }

    #[test]
    fn tensor_power_relations() {
        for l in [3, 5] {
            let field = cyc(l);
            let t = tensor_power(&field, 3);
            assert_eq!(t.dim, 8);
            assert!(check_relations(&t));
        }
        assert_eq!(tensor_power(&cyc(3), 6).dim, 64);
    }

    #[test]
    fn tensor_is_associative_under_lex_flattening() {
        let field = cyc(3);
        let omega = natural_module(&field);
        let t2 = tensor(&omega, &omega).unwrap();
        let left = tensor(&t2, &omega).unwrap();
        let right = tensor(&omega, &t2).unwrap();
        assert_eq!(left.e, right.e);
        assert_eq!(left.f, right.f);
        assert_eq!(left.k1, right.k1);
        assert_eq!(left.k2, right.k2);
    }

    #[test]
    fn simple_modules() {
        let field = cyc(3);
        let f = &*field;
        let l2 = simple_module(&field, 2).unwrap();
        assert_eq!(l2.dim, 2);
        assert_eq!(*l2.k.get(0, 0), f.eps());
        assert!(l2.e.column(0).iter().all(|x| x.is_zero()));
        for j in 1..=3 {
            assert!(check_relations(&simple_module(&field, j).unwrap()));
        }
        assert_eq!(simple_module(&field, 4).unwrap_err(), RepsError::BadIndex(4, 3));
    }

    #[test]
    fn projective_modules() {
        for l in [3, 5, 7] {
            let field = cyc(l);
            for j in 1..l {
                let p = projective_module(&field, j).unwrap();
                assert_eq!(p.dim, 2 * l as usize);
                assert!(check_relations(&p), "l={l} j={j}");
            }
        }
        let field = cyc(3);
        let f = &*field;
        let p = projective_module(&field, 1).unwrap();
        // E w_0 = v_{l-j-1}
        let col = p.e.column(3);
        assert_eq!(col[1], f.one());
        assert_eq!(col.iter().filter(|x| !x.is_zero()).count(), 1);
        // K w_s = eps^(j-2s-1) w_s
        assert_eq!(*p.k.get(4, 4), f.eps_pow(-2));
    }

    #[test]
    fn corrupted_module_fails_relations() {
        let field = cyc(3);
        let f = &*field;
        let mut m = natural_module(&field);
        m.e.set(1, 0, f.one());
        assert!(!check_relations(&m));
    }

    #[test]
    fn canonical_submodules_are_stable() {
        for l in [3, 5] {
            let field = cyc(l);
            for j in 1..l {
                let p = Arc::new(projective_module(&field, j).unwrap());
                let (v, m, n) = canonical_submodules(&field, j).unwrap();
                assert_eq!(v.cols, j as usize);
                assert_eq!(m.cols, l as usize);
                assert_eq!(n.cols, l as usize);
                for basis in [&v, &m, &n] {
                    let (sub, incl) = induced_submodule(&p, basis).unwrap();
                    assert!(incl.verify());
                    assert!(check_relations(&sub));
                }
            }
        }
    }

    #[test]
    fn closure_examples() {
        let field = cyc(3);
        let f = &*field;
        let j = 2;
        let p = projective_module(&field, j).unwrap();
        // v_{l-1} generates the socle copy V_j
        let mut v = vec![f.zero(); p.dim];
        v[2] = f.one();
        let cl = submodule_closure(&p, &[v]);
        assert_eq!(cl.cols, j as usize);
        // w_0 generates everything
        let mut w = vec![f.zero(); p.dim];
        w[3] = f.one();
        let cl = submodule_closure(&p, &[w]);
        assert_eq!(cl.cols, p.dim);
        assert_eq!(submodule_closure(&p, &[]).cols, 0);
    }

    #[test]
    fn simple_modules_are_irreducible() {
        let field = cyc(5);
        let f = &*field;
        for j in 1..=5 {
            let lj = simple_module(&field, j).unwrap();
            for i in 0..lj.dim {
                let mut v = vec![f.zero(); lj.dim];
                v[i] = f.one();
                assert_eq!(submodule_closure(&lj, &[v]).cols, lj.dim);
            }
            // a generic combination as well
            let v: Vec<Scalar> = (0..lj.dim).map(|i| f.from_i64(i as i64 + 1)).collect();
            assert_eq!(submodule_closure(&lj, &[v]).cols, lj.dim);
        }
    }

    #[test]
    fn quotient_examples() {
        let field = cyc(3);
        let j = 1;
        let p = Arc::new(projective_module(&field, j).unwrap());
        let (_v, m, _n) = canonical_submodules(&field, j).unwrap();
        // M_j / V_j is the simple of dimension l - j
        let (mj, _) = induced_submodule(&p, &m).unwrap();
        let vj_in_m: Matrix = {
            let f = &*field;
            // V_j sits inside M_j as the last j coordinates
            let cols: Vec<Vec<Scalar>> = (0..j as usize)
                .map(|i| {
                    let mut c = vec![f.zero(); mj.dim];
                    c[mj.dim - j as usize + i] = f.one();
                    c
                })
                .collect();
            Matrix::from_columns(f, mj.dim, &cols)
        };
        let (q, proj) = quotient(&mj, &vj_in_m).unwrap();
        assert_eq!(q.dim, (3 - j) as usize);
        assert!(check_relations(&q));
        assert!(proj.verify());
        // M / M = 0
        let full = Matrix::identity(&field, mj.dim);
        let (zero, _) = quotient(&mj, &full).unwrap();
        assert_eq!(zero.dim, 0);
        // a non-stable subspace is rejected
        let f = &*field;
        let mut bad = vec![f.zero(); p.dim];
        bad[0] = f.one();
        let bad = Matrix::from_columns(f, p.dim, &[bad]);
        assert_eq!(quotient(&p, &bad).unwrap_err(), RepsError::NotASubmodule);
    }

    #[test]
    fn hom_space_dimensions() {
        let field = cyc(3);
        // distinct simples have no homs, equal simples a line
        for i in 1..=3i64 {
            for j in 1..=3i64 {
                let li = Arc::new(simple_module(&field, i).unwrap());
                let lj = Arc::new(simple_module(&field, j).unwrap());
                let h = hom_space(&li, &lj).unwrap();
                assert_eq!(h.len(), usize::from(i == j), "i={i} j={j}");
            }
        }
        for j in 1..3i64 {
            let pj = Arc::new(projective_module(&field, j).unwrap());
            let plj = Arc::new(projective_module(&field, 3 - j).unwrap());
            assert_eq!(hom_space(&pj, &plj).unwrap().len(), 2);
            assert_eq!(hom_space(&pj, &pj).unwrap().len(), 2);
        }
    }

    #[test]
    fn alpha_maps_span_the_hom_space() {
        for l in [3, 5] {
            let field = cyc(l);
            let f = &*field;
            for j in 1..l {
                let (a1, a2) = alpha_maps(&field, j).unwrap();
                assert!(a1.verify(), "alpha1 l={l} j={j}");
                assert!(a2.verify(), "alpha2 l={l} j={j}");
                // alpha2(v_0) = [j] v_j
                let col = a2.matrix.column(0);
                assert_eq!(col[j as usize], f.q_int(j));
                // the two maps are a basis of the 2-dimensional Hom space
                let h = hom_space(&a1.source, &a1.target).unwrap();
                assert_eq!(h.len(), 2);
                let width = a1.matrix.rows * a1.matrix.cols;
                let flat = |mm: &Matrix| -> Vec<Scalar> {
                    (0..mm.rows).flat_map(|i| mm.row(i).to_vec()).collect()
                };
                let mut ech = Echelon::new(f, width);
                assert!(ech.insert(f, flat(&a1.matrix)));
                assert!(ech.insert(f, flat(&a2.matrix)));
                for hm in &h {
                    assert!(ech.contains(f, &flat(&hm.matrix)));
                }
            }
        }
    }

    #[test]
    fn gl2_and_sl2_hom_dimensions_agree_on_tensor_space() {
        let field = cyc(3);
        for r in 1..=4 {
            let t = Arc::new(tensor_power(&field, r));
            let ts = Arc::new(restrict_to_sl2(&t));
            let h_gl = hom_space(&t, &t).unwrap();
            let h_sl = hom_space(&ts, &ts).unwrap();
            assert_eq!(h_gl.len(), h_sl.len(), "r={r}");
        }
    }

    #[test]
    fn restrict_keeps_carrier() {
        let field = cyc(3);
        let f = &*field;
        let omega = natural_module(&field);
        let s = restrict_to_sl2(&omega);
        assert_eq!(s.flavor, Flavor::Sl2);
        assert_eq!(*s.k.get(0, 0), f.eps());
        assert!(s.k1.is_some());
        assert!(check_relations(&s));
    }

    #[test]
    fn casimir_commutes() {
        let field = cyc(3);
        let f = &*field;
        let t = tensor_power(&field, 3);
        let c = casimir(&t);
        for g in acting_matrices(&t) {
            assert_eq!(c.mul(f, g), g.mul(f, &c));
        }
    }

    #[test]
    fn direct_sum_splits() {
        let field = cyc(3);
        let f = &*field;
        let p1 = Arc::new(projective_module(&field, 1).unwrap());
        let l2 = Arc::new(simple_module(&field, 2).unwrap());
        let (sum, maps) = direct_sum(&[p1.clone(), l2.clone()]);
        assert_eq!(sum.dim, 8);
        assert!(check_relations(&sum));
        let mut acc = Matrix::zero(f, sum.dim, sum.dim);
        for (incl, proj) in &maps {
            assert!(incl.verify() && proj.verify());
            acc = acc.add(f, &incl.matrix.mul(f, &proj.matrix));
            assert_eq!(proj.matrix.mul(f, &incl.matrix), Matrix::identity(f, proj.target.dim));
        }
        assert_eq!(acc, Matrix::identity(f, sum.dim));
    }

    #[test]
    fn prime_field_mode_matches_dimensions() {
        let fp = make_field(3, FieldMode::PrimeField, None).unwrap();
        let t = Arc::new(tensor_power(&fp, 3));
        assert!(check_relations(&t));
        assert_eq!(hom_space(&t, &t).unwrap().len(), 5);
    }

    #[test]
    fn end_of_tensor_cube_is_five_dimensional() {
        let field = cyc(3);
        let t = Arc::new(tensor_power(&field, 3));
        assert_eq!(hom_space(&t, &t).unwrap().len(), 5);
    }
}
