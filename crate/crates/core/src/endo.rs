//! Krull-Schmidt decomposition of tensor powers, summand identification
//! against the predicted catalog, block grouping, and basic-algebra reports
//! with quiver-presentation matching.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{end_algebra_of_sum, match_presentation, AlgebraError, AlgebraTable, MatchReport};
use crate::linalg::{Echelon, Matrix};
use crate::quiver::{presentation_simple_proj, presentation_simple_proj_pair};
use crate::reps::{
    casimir, hom_space, natural_module, quotient, tensor, tensor_power, weight_adapt, Flavor, Module,
    ModuleMap, RepsError,
};
use crate::scalars::{Field, FieldMode, Scalar};
use crate::weights::{
    all_blocks, bar, block_hat, sets_i_j, steinberg_set, BarWeight, BlockClass, BlockData, FigureCase,
};

#[derive(Debug, Error)]
pub enum EndoError {
    #[error("no splitting endomorphism found within the retry cap")]
    RetryExhausted,
    #[error("indecomposable summand of dimension {0} matches no catalog entry")]
    UnrecognizedSummand(usize),
    #[error("summand has composition factors in more than one block")]
    MixedBlockSummand,
    #[error(transparent)]
    Reps(#[from] RepsError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Splittable counter-based generator (splitmix64 core) so decomposition
/// runs are reproducible from a single seed.
#[derive(Debug, Clone)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn next_range(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Independent child stream keyed by a tag.
    pub fn split(&mut self, tag: u64) -> Rng {
        Rng(self.next_u64() ^ tag.wrapping_mul(0xD1B5_4A32_D192_ED03))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SummandKind {
    Simple,
    Projective,
}

/// Isomorphism-class label of an indecomposable tensor summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoClassLabel {
    pub kind: SummandKind,
    pub bar_weight: BarWeight,
    pub dim: usize,
    pub sl2_type: i64,
}

impl fmt::Display for IsoClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            SummandKind::Simple => "L",
            SummandKind::Projective => "P",
        };
        write!(f, "{}({},{})", k, self.bar_weight.0, self.bar_weight.1)
    }
}

/// One isomorphism class in a decomposition, with split maps per copy.
#[derive(Debug, Clone)]
pub struct Summand {
    pub module: Arc<Module>,
    pub label: Option<IsoClassLabel>,
    /// (inclusion, projection) pairs, one per copy.
    pub copies: Vec<(ModuleMap, ModuleMap)>,
}

impl Summand {
    pub fn multiplicity(&self) -> usize {
        self.copies.len()
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub source: Arc<Module>,
    pub summands: Vec<Summand>,
}

impl Decomposition {
    pub fn total_dim(&self) -> usize {
        self.summands.iter().map(|s| s.multiplicity() * s.module.dim).sum()
    }

    /// Idempotent-completeness certificate: each projection splits its
    /// inclusion, the idempotents are orthogonal, and they sum to the
    /// identity of the source.
    pub fn verify_splitting(&self) -> bool {
        let f = &*self.source.field;
        let n = self.source.dim;
        let mut acc = Matrix::zero(f, n, n);
        let mut all: Vec<&(ModuleMap, ModuleMap)> = Vec::new();
        for s in &self.summands {
            for pair in &s.copies {
                all.push(pair);
            }
        }
        for (i, (incl, proj)) in all.iter().enumerate() {
            if proj.matrix.mul(f, &incl.matrix) != Matrix::identity(f, incl.source.dim) {
                return false;
            }
            for (j, (incl2, _)) in all.iter().enumerate() {
                if i != j {
                    let cross = proj.matrix.mul(f, &incl2.matrix);
                    if !cross.is_zero() {
                        return false;
                    }
                }
            }
            acc = acc.add(f, &incl.matrix.mul(f, &proj.matrix));
        }
        acc == Matrix::identity(f, n)
    }
}

/// A piece of a module under recursive splitting, with maps to the root.
struct Piece {
    module: Arc<Module>,
    incl: Matrix,
    proj: Matrix,
}

/// Fitting split along `phi`: stabilized kernel/image of `phi^(2^k)` with
/// `2^k >= dim`.  Returns weight-adapted bases, or `None` if `phi` gives no
/// proper splitting.
fn fitting_split(m: &Module, phi: &Matrix) -> Option<(Vec<Vec<Scalar>>, Vec<Vec<Scalar>>)> {
    let f = &*m.field;
    let n = m.dim;
    let mut p = phi.clone();
    let mut e = 1usize;
    while e < n {
        p = p.mul(f, &p);
        e *= 2;
    }
    let ker = p.nullspace(f);
    if ker.is_empty() || ker.len() == n {
        return None;
    }
    let ker = weight_adapt(m, &ker);
    let cols: Vec<Vec<Scalar>> = (0..n).map(|j| p.column(j)).collect();
    let im = weight_adapt(m, &cols);
    assert_eq!(ker.len() + im.len(), n, "Fitting split must be complementary");
    Some((ker, im))
}

/// Induce the module structure on a subspace and compose split maps with the
/// parent's maps to the root.
fn make_piece(
    parent: &Piece,
    basis_cols: &[Vec<Scalar>],
    proj_rows: &[Vec<Scalar>],
) -> Result<Piece, EndoError> {
    let f = &*parent.module.field;
    let m = &parent.module;
    let d = basis_cols.len();
    let basis = Matrix::from_columns(f, m.dim, basis_cols);
    let mut ech = Echelon::new(f, m.dim);
    for col in basis_cols {
        ech.insert(f, col.clone());
    }
    let induce = |g: &Matrix| -> Matrix {
        let mut out = Matrix::zero(f, d, d);
        for (j, col) in basis_cols.iter().enumerate() {
            let img = g.apply(f, col);
            let coords = ech.coordinates(f, &img).expect("stable subspace");
            for (i, c) in coords.into_iter().enumerate() {
                out.set(i, j, c);
            }
        }
        out
    };
    let sub = Arc::new(Module {
        dim: d,
        field: m.field.clone(),
        flavor: m.flavor,
        e: induce(&m.e),
        f: induce(&m.f),
        k: induce(&m.k),
        k1: m.k1.as_ref().map(&induce),
        k2: m.k2.as_ref().map(&induce),
        labels: (0..d).map(|i| format!("s{i}")).collect(),
    });
    let local_proj = Matrix::from_fn(f, d, m.dim, |i, j| proj_rows[i][j].clone());
    Ok(Piece {
        module: sub,
        incl: parent.incl.mul(f, &basis),
        proj: local_proj.mul(f, &parent.proj),
    })
}

fn split_by(parent: &Piece, phi: &Matrix) -> Result<Option<(Piece, Piece)>, EndoError> {
    let f = &*parent.module.field;
    let Some((ker, im)) = fitting_split(&parent.module, phi) else {
        return Ok(None);
    };
    let n = parent.module.dim;
    let mut all_cols = ker.clone();
    all_cols.extend(im.iter().cloned());
    let b = Matrix::from_columns(f, n, &all_cols);
    let b_inv = b.inverse(f).expect("Fitting basis is invertible");
    let rows: Vec<Vec<Scalar>> = (0..n).map(|i| b_inv.row(i).to_vec()).collect();
    let p1 = make_piece(parent, &ker, &rows[..ker.len()])?;
    let p2 = make_piece(parent, &im, &rows[ker.len()..])?;
    Ok(Some((p1, p2)))
}

/// Casimir splitting elements: `C - chi` for each candidate central
/// character drawn from the K-spectrum.
fn casimir_shifts(m: &Module) -> Vec<Matrix> {
    let f = &*m.field;
    if !m.k.is_diagonal() {
        return Vec::new();
    }
    let c = casimir(m);
    let denom = f.sub(&f.eps(), &f.eps_pow(-1));
    let scale = f.inv(&f.mul(&denom, &denom)).unwrap();
    let mut chis: Vec<Scalar> = Vec::new();
    for i in 0..m.dim {
        let Some(e) = f.eps_log(m.k.get(i, i)) else { continue };
        let chi = f.mul(&f.add(&f.eps_pow(e + 1), &f.eps_pow(-e - 1)), &scale);
        if !chis.contains(&chi) {
            chis.push(chi);
        }
    }
    let id = Matrix::identity(f, m.dim);
    chis.into_iter().map(|chi| c.sub(f, &id.scale(f, &chi))).collect()
}

/// Locality certificate for End(M): in cyclotomic mode this is the exact
/// statement `dim End - dim rad End = 1`; in prime-field mode each basis
/// element and a batch of seeded combinations must be invertible or
/// nilpotent.
fn end_is_local(m: &Arc<Module>, ends: &[ModuleMap], rng: &mut Rng) -> Result<bool, EndoError> {
    if ends.len() == 1 {
        return Ok(true);
    }
    let f = &*m.field;
    match f.mode {
        FieldMode::Cyclotomic => {
            let parts = [(m.clone(), "m".to_string())];
            let _ = &parts;
            let table = crate::algebra::end_algebra(m)?;
            let rad = table.radical()?;
            Ok(table.dim - rad.len() == 1)
        }
        FieldMode::PrimeField => {
            let n = m.dim;
            let mut candidates: Vec<Matrix> = ends.iter().map(|e| e.matrix.clone()).collect();
            for _ in 0..8 {
                let mut acc = Matrix::zero(f, n, n);
                for e in ends {
                    let c = f.from_i64(rng.next_range(23) as i64 - 11);
                    acc = acc.add(f, &e.matrix.scale(f, &c));
                }
                candidates.push(acc);
            }
            for cand in candidates {
                if cand.rank(f) == n {
                    continue;
                }
                let mut p = cand.clone();
                let mut e = 1usize;
                while e < n {
                    p = p.mul(f, &p);
                    e *= 2;
                }
                if !p.is_zero() {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

fn random_combo(f: &crate::scalars::FieldConfig, ends: &[ModuleMap], rng: &mut Rng) -> Matrix {
    let n = ends[0].matrix.rows;
    let mut acc = Matrix::zero(f, n, n);
    for e in ends {
        let c = f.from_i64(rng.next_range(23) as i64 - 11);
        acc = acc.add(f, &e.matrix.scale(f, &c));
    }
    acc
}

/// Complete Krull-Schmidt decomposition by Fitting splitting: Casimir
/// shifts first, then seeded random endomorphisms, with a local-End
/// certificate on every accepted factor.
pub fn decompose(m: &Arc<Module>, seed: u64) -> Result<Decomposition, EndoError> {
    let f = &*m.field;
    let mut rng = Rng::new(seed);
    let root = Piece {
        module: m.clone(),
        incl: Matrix::identity(f, m.dim),
        proj: Matrix::identity(f, m.dim),
    };
    let mut queue = vec![root];
    let mut pieces: Vec<Piece> = Vec::new();
    'outer: while let Some(piece) = queue.pop() {
        if piece.module.dim == 0 {
            continue;
        }
        for phi in casimir_shifts(&piece.module) {
            if let Some((p1, p2)) = split_by(&piece, &phi)? {
                queue.push(p1);
                queue.push(p2);
                continue 'outer;
            }
        }
        let ends = hom_space(&piece.module, &piece.module)?;
        if end_is_local(&piece.module, &ends, &mut rng)? {
            pieces.push(piece);
            continue;
        }
        for _ in 0..64 {
            let phi = random_combo(f, &ends, &mut rng);
            if let Some((p1, p2)) = split_by(&piece, &phi)? {
                queue.push(p1);
                queue.push(p2);
                continue 'outer;
            }
        }
        return Err(EndoError::RetryExhausted);
    }
    // group pieces into isomorphism classes
    let mut rng_iso = rng.split(0x1507);
    let mut summands: Vec<Summand> = Vec::new();
    for piece in pieces {
        let mut placed = false;
        for s in &mut summands {
            if let Some(iso) = find_isomorphism(&s.module, &piece.module, &mut rng_iso)? {
                // route the copy maps through the class representative
                let iso_inv = iso.matrix.inverse(f).expect("isomorphism");
                let incl = piece.incl.mul(f, &iso.matrix);
                let proj = iso_inv.mul(f, &piece.proj);
                s.copies.push(wrap_maps(&s.module, m, incl, proj));
                placed = true;
                break;
            }
        }
        if !placed {
            let rep = piece.module.clone();
            let pair = wrap_maps(&rep, m, piece.incl, piece.proj);
            summands.push(Summand { module: rep, label: None, copies: vec![pair] });
        }
    }
    summands.sort_by_key(|s| (s.module.dim, std::cmp::Reverse(s.multiplicity())));
    let dec = Decomposition { source: m.clone(), summands };
    debug_assert!(dec.verify_splitting());
    Ok(dec)
}

fn wrap_maps(rep: &Arc<Module>, root: &Arc<Module>, incl: Matrix, proj: Matrix) -> (ModuleMap, ModuleMap) {
    (
        ModuleMap { source: rep.clone(), target: root.clone(), matrix: incl },
        ModuleMap { source: root.clone(), target: rep.clone(), matrix: proj },
    )
}

/// Search for an isomorphism: basis elements of Hom first, then seeded
/// random combinations (one generic combination suffices for summands with
/// local endomorphism algebras).
pub fn find_isomorphism(
    m: &Arc<Module>,
    n: &Arc<Module>,
    rng: &mut Rng,
) -> Result<Option<ModuleMap>, EndoError> {
    if m.dim != n.dim {
        return Ok(None);
    }
    let f = &*m.field;
    let homs = hom_space(m, n)?;
    if homs.is_empty() {
        return Ok(None);
    }
    for h in &homs {
        if h.is_invertible() {
            return Ok(Some(h.clone()));
        }
    }
    for _ in 0..16 {
        let mut acc = Matrix::zero(f, n.dim, m.dim);
        for h in &homs {
            let c = f.from_i64(rng.next_range(23) as i64 - 11);
            acc = acc.add(f, &h.matrix.scale(f, &c));
        }
        if acc.rank(f) == m.dim {
            let map = ModuleMap { source: m.clone(), target: n.clone(), matrix: acc };
            debug_assert!(map.verify());
            return Ok(Some(map));
        }
    }
    Ok(None)
}

pub fn is_isomorphic(m: &Arc<Module>, n: &Arc<Module>, seed: u64) -> Result<bool, EndoError> {
    Ok(find_isomorphism(m, n, &mut Rng::new(seed))?.is_some())
}

/// The gl2 simple module with highest bar weight `(b1, b2)`: the sl2 simple
/// of dimension `(b1 - b2 mod l) + 1` with the diagonal `K1, K2` action
/// `K1 v_i = eps^(b1 - i) v_i`, `K2 v_i = eps^(b2 + i) v_i`.
pub fn catalog_simple(field: &Field, bw: BarWeight) -> Arc<Module> {
    let f = &**field;
    let l = f.l;
    let j = (bw.0 - bw.1).rem_euclid(l) + 1;
    let base = crate::reps::simple_module(field, j).expect("1 <= j <= l");
    let d = base.dim;
    let mut k1 = Matrix::zero(f, d, d);
    let mut k2 = Matrix::zero(f, d, d);
    for i in 0..d {
        k1.set(i, i, f.eps_pow(bw.0 - i as i64));
        k2.set(i, i, f.eps_pow(bw.1 + i as i64));
    }
    Arc::new(Module { flavor: Flavor::Gl2, k1: Some(k1), k2: Some(k2), ..base })
}

/// The gl2 projective with top bar weight `(b1, b2)`; only defined when the
/// sl2 type `(b1 - b2 mod l) + 1` is at most `l - 1`.
pub fn catalog_projective(field: &Field, bw: BarWeight) -> Option<Arc<Module>> {
    let f = &**field;
    let l = f.l;
    let j = (bw.0 - bw.1).rem_euclid(l) + 1;
    if j > l - 1 {
        return None;
    }
    let base = crate::reps::projective_module(field, j).expect("1 <= j <= l-1");
    let d = base.dim;
    let lu = l as usize;
    let mut k1 = Matrix::zero(f, d, d);
    let mut k2 = Matrix::zero(f, d, d);
    for s in 0..lu {
        let sw = s as i64;
        // v_s sits j steps of E above w_{s+j}: weight (b1 + l - j - s)
        k1.set(s, s, f.eps_pow(bw.0 + l - j - sw));
        k2.set(s, s, f.eps_pow(bw.1 - (l - j - sw)));
        k1.set(lu + s, lu + s, f.eps_pow(bw.0 - sw));
        k2.set(lu + s, lu + s, f.eps_pow(bw.1 + sw));
    }
    Some(Arc::new(Module { flavor: Flavor::Gl2, k1: Some(k1), k2: Some(k2), ..base }))
}

/// Identify an indecomposable gl2 summand from the weights of its
/// E-kernel: each homogeneous kernel weight proposes a catalog candidate,
/// and an explicit isomorphism fixes the label.
pub fn identify_summand(
    e: &Arc<Module>,
    seed: u64,
) -> Result<(IsoClassLabel, ModuleMap), EndoError> {
    let f = &*e.field;
    let l = f.l;
    let keys = e.weight_keys().ok_or(EndoError::UnrecognizedSummand(e.dim))?;
    let ker = e.e.nullspace(f);
    let ker = weight_adapt(e, &ker);
    let mut cand_keys: Vec<(i64, i64)> = Vec::new();
    for v in &ker {
        let ix = v.iter().position(|x| !x.is_zero()).unwrap();
        if !cand_keys.contains(&keys[ix]) {
            cand_keys.push(keys[ix]);
        }
    }
    cand_keys.sort();
    let mut rng = Rng::new(seed);
    for (a, b) in cand_keys {
        let bw = BarWeight(a.rem_euclid(l), b.rem_euclid(l));
        let candidates: Vec<(SummandKind, Arc<Module>)> = if e.dim == 2 * l as usize {
            catalog_projective(&e.field, bw)
                .map(|m| (SummandKind::Projective, m))
                .into_iter()
                .collect()
        } else {
            vec![(SummandKind::Simple, catalog_simple(&e.field, bw))]
        };
        for (kind, cand) in candidates {
            if cand.dim != e.dim {
                continue;
            }
            if let Some(iso) = find_isomorphism(&cand, e, &mut rng)? {
                let label = IsoClassLabel {
                    kind,
                    bar_weight: bw,
                    dim: e.dim,
                    sl2_type: (bw.0 - bw.1).rem_euclid(l) + 1,
                };
                return Ok((label, iso));
            }
        }
    }
    Err(EndoError::UnrecognizedSummand(e.dim))
}

/// The predicted isomorphism classes of indecomposable summands of the
/// `r`-th tensor power: simples for the I/J and Steinberg bars, projectives
/// for the J blocks (a linked pair when the block chain has length >= 5).
pub fn predicted_summands(l: i64, r: i64) -> Vec<IsoClassLabel> {
    let mut out: Vec<IsoClassLabel> = Vec::new();
    let mut push = |label: IsoClassLabel| {
        if !out.contains(&label) {
            out.push(label);
        }
    };
    let (i_set, j_set) = sets_i_j(l, r);
    let simple = |bw: BarWeight| IsoClassLabel {
        kind: SummandKind::Simple,
        bar_weight: bw,
        dim: ((bw.0 - bw.1).rem_euclid(l) + 1) as usize,
        sl2_type: (bw.0 - bw.1).rem_euclid(l) + 1,
    };
    let projective = |bw: BarWeight| IsoClassLabel {
        kind: SummandKind::Projective,
        bar_weight: bw,
        dim: 2 * l as usize,
        sl2_type: (bw.0 - bw.1).rem_euclid(l) + 1,
    };
    for w in i_set.iter().chain(j_set.iter()) {
        push(simple(bar(*w, l)));
    }
    for w in steinberg_set(l, r).weights {
        push(simple(bar(w, l)));
    }
    for w in &j_set {
        let chain = block_hat(*w, l, r).expect("J weights lie in Gamma").weights;
        if chain.len() >= 5 {
            push(projective(bar(*w, l)));
            push(projective(bar(crate::weights::s_shift(*w, 1, l), l)));
        } else {
            push(projective(bar(*w, l)));
        }
    }
    out.sort();
    out
}

/// Ascending socle filtration relative to a labeled simple catalog: each
/// layer is the multiset `dim Hom(L, M_i)` over the catalog, and `M_{i+1}`
/// is the quotient by the span of all images.
pub fn socle_series<L: Clone>(
    m: &Arc<Module>,
    catalog: &[(L, Arc<Module>)],
) -> Result<Vec<Vec<(L, usize)>>, EndoError> {
    let f = &*m.field;
    let mut current = m.clone();
    let mut layers = Vec::new();
    while current.dim > 0 {
        let mut layer: Vec<(L, usize)> = Vec::new();
        let mut span: Vec<Vec<Scalar>> = Vec::new();
        for (label, simple) in catalog {
            let homs = hom_space(simple, &current)?;
            if homs.is_empty() {
                continue;
            }
            layer.push((label.clone(), homs.len()));
            for h in &homs {
                for j in 0..simple.dim {
                    span.push(h.matrix.column(j));
                }
            }
        }
        if layer.is_empty() {
            return Err(EndoError::UnrecognizedSummand(current.dim));
        }
        let basis = weight_adapt(&current, &span);
        let socle = Matrix::from_columns(f, current.dim, &basis);
        let (next, _) = quotient(&current, &socle)?;
        layers.push(layer);
        current = next;
    }
    Ok(layers)
}

/// Multiset of composition factors, by socle peeling.
pub fn composition_factors<L: Clone + PartialEq>(
    m: &Arc<Module>,
    catalog: &[(L, Arc<Module>)],
) -> Result<Vec<(L, usize)>, EndoError> {
    let mut out: Vec<(L, usize)> = Vec::new();
    for layer in socle_series(m, catalog)? {
        for (label, mult) in layer {
            match out.iter_mut().find(|(l2, _)| *l2 == label) {
                Some((_, m2)) => *m2 += mult,
                None => out.push((label, mult)),
            }
        }
    }
    Ok(out)
}

/// The sl2 simple catalog `L_1 .. L_l`, labeled by dimension.
pub fn sl2_simple_catalog(field: &Field) -> Vec<(i64, Arc<Module>)> {
    (1..=field.l)
        .map(|j| (j, Arc::new(crate::reps::simple_module(field, j).expect("valid index"))))
        .collect()
}

/// The gl2 simple catalog for central character `K1 K2 = eps^c`.
pub fn gl2_simple_catalog(field: &Field, c: i64) -> Vec<(BarWeight, Arc<Module>)> {
    let l = field.l;
    (0..l)
        .map(|a| {
            let bw = BarWeight(a, (c - a).rem_euclid(l));
            (bw, catalog_simple(field, bw))
        })
        .collect()
}

/// Decompose the `r`-th tensor power incrementally: tensor each summand
/// class representative with the natural module, decompose those small
/// pieces, identify against the catalog, and route the split maps through
/// the levels.  Equivalent to `decompose` on the full power but with all
/// Fitting work on modules of dimension at most `4l`.
pub fn decompose_tensor_power(field: &Field, r: usize, seed: u64) -> Result<Decomposition, EndoError> {
    assert!(r >= 1);
    let f = &**field;
    let omega = Arc::new(natural_module(field));
    let mut rng = Rng::new(seed);
    // classes at the current level: (label, representative, copies)
    struct Class {
        label: IsoClassLabel,
        rep: Arc<Module>,
        copies: Vec<(Matrix, Matrix)>,
    }
    let (label, iso) = identify_summand(&omega, rng.next_u64())?;
    let rep = iso.source.clone();
    let iso_inv = iso.matrix.inverse(f).expect("isomorphism");
    let mut classes = vec![Class { label, rep, copies: vec![(iso.matrix.clone(), iso_inv)] }];
    let mut level = omega.clone();
    for step in 2..=r {
        let next_level = Arc::new(tensor(&level, &omega)?);
        let id2 = Matrix::identity(f, 2);
        let mut next_classes: Vec<Class> = Vec::new();
        for class in &classes {
            let t = Arc::new(tensor(&class.rep, &omega)?);
            let dec = decompose(&t, rng.next_u64())?;
            // identified split maps of the representative tensor factor
            let mut routed: Vec<(IsoClassLabel, Arc<Module>, Matrix, Matrix)> = Vec::new();
            for s in &dec.summands {
                for (incl, proj) in &s.copies {
                    let (label, iso) = identify_summand(&s.module, rng.next_u64())?;
                    let iso_inv = iso.matrix.inverse(f).expect("isomorphism");
                    routed.push((
                        label,
                        iso.source.clone(),
                        incl.matrix.mul(f, &iso.matrix),
                        iso_inv.mul(f, &proj.matrix),
                    ));
                }
            }
            for (incl_c, proj_c) in &class.copies {
                let up = incl_c.kron(f, &id2);
                let down = proj_c.kron(f, &id2);
                for (label, rep, incl_p, proj_p) in &routed {
                    let incl = up.mul(f, incl_p);
                    let proj = proj_p.mul(f, &down);
                    match next_classes.iter_mut().find(|c| c.label == *label) {
                        Some(c) => c.copies.push((incl, proj)),
                        None => next_classes.push(Class {
                            label: *label,
                            rep: rep.clone(),
                            copies: vec![(incl, proj)],
                        }),
                    }
                }
            }
        }
        next_classes.sort_by_key(|c| c.label);
        classes = next_classes;
        level = next_level;
        let _ = step;
    }
    let summands: Vec<Summand> = classes
        .into_iter()
        .map(|c| Summand {
            module: c.rep.clone(),
            label: Some(c.label),
            copies: c
                .copies
                .into_iter()
                .map(|(incl, proj)| wrap_maps(&c.rep, &level, incl, proj))
                .collect(),
        })
        .collect();
    let dec = Decomposition { source: level, summands };
    assert_eq!(dec.total_dim(), dec.source.dim, "dimension bookkeeping");
    // full idempotent verification is cheap in prime-field mode and at
    // moderate dimensions; each level split was verified exactly already
    if f.mode == FieldMode::PrimeField || dec.source.dim <= 256 {
        assert!(dec.verify_splitting(), "split maps must assemble to the identity");
    }
    Ok(dec)
}

/// Central character exponent of `K1 K2` on a gl2 module (scalar on every
/// summand of a tensor power).
fn central_exponent(m: &Module) -> Option<i64> {
    let keys = m.weight_keys()?;
    let c = (keys.first()?.0 + keys.first()?.1).rem_euclid(m.field.l);
    keys.iter().all(|(a, b)| (a + b).rem_euclid(m.field.l) == c).then_some(c)
}

/// Summands of a decomposition grouped by the weight-level block of their
/// composition factors.
pub fn group_into_blocks(
    dec: &Decomposition,
    l: i64,
    r: i64,
) -> Result<Vec<(BlockData, Vec<usize>)>, EndoError> {
    let blocks = all_blocks(l, r);
    let bar_to_block = |bw: BarWeight| -> Option<usize> {
        blocks.iter().position(|b| b.bar_weights.contains(&bw))
    };
    let mut groups: Vec<(BlockData, Vec<usize>)> = Vec::new();
    for (si, s) in dec.summands.iter().enumerate() {
        let c = central_exponent(&s.module).ok_or(EndoError::UnrecognizedSummand(s.module.dim))?;
        let catalog = gl2_simple_catalog(&s.module.field, c);
        let factors = composition_factors(&s.module, &catalog)?;
        let mut block_ids: Vec<usize> = Vec::new();
        for (bw, _) in &factors {
            let id = bar_to_block(*bw).ok_or(EndoError::MixedBlockSummand)?;
            if !block_ids.contains(&id) {
                block_ids.push(id);
            }
        }
        if block_ids.len() != 1 {
            return Err(EndoError::MixedBlockSummand);
        }
        let id = block_ids[0];
        match groups.iter_mut().find(|(b, _)| b.weights == blocks[id].weights) {
            Some((_, list)) => list.push(si),
            None => groups.push((blocks[id].clone(), vec![si])),
        }
    }
    groups.sort_by_key(|(b, _)| b.weights[0]);
    Ok(groups)
}

/// How one block factor of the basic algebra presented itself.
#[derive(Debug, Clone)]
pub enum FactorShape {
    /// Semisimple block factor, one scalar line.
    Scalar,
    /// Matched quiver presentation with its certificate.
    Presented(MatchReport),
}

#[derive(Debug, Clone)]
pub struct BlockFactor {
    pub block: BlockData,
    pub summand_labels: Vec<(IsoClassLabel, usize)>,
    pub dim: usize,
    pub shape: FactorShape,
}

/// Full basic-algebra report for the `r`-th tensor power.
#[derive(Debug)]
pub struct EndoReport {
    pub l: i64,
    pub r: i64,
    pub decomposition: Decomposition,
    pub lambda: AlgebraTable,
    pub lambda_dim: usize,
    /// `dim End` of the full tensor power, by Hom-dimension bookkeeping.
    pub full_end_dim: usize,
    pub factors: Vec<BlockFactor>,
    pub a_observed: usize,
    pub a_formula: Option<i64>,
    pub all_matched: bool,
}

/// Decompose the tensor power, group summands into blocks, compute the
/// basic algebra `End(N)` and each block factor, and match every
/// non-semisimple factor against its expected quiver presentation.
pub fn basic_algebra_report(field: &Field, r: usize, seed: u64) -> Result<EndoReport, EndoError> {
    let l = field.l;
    let dec = decompose_tensor_power(field, r, seed)?;
    let groups = group_into_blocks(&dec, l, r as i64)?;
    let parts: Vec<(Arc<Module>, String)> = dec
        .summands
        .iter()
        .map(|s| (s.module.clone(), s.label.map(|x| x.to_string()).unwrap_or_default()))
        .collect();
    let (_, _, lambda) = end_algebra_of_sum(&parts)?;
    // bookkeeping: dim End(tensor power) via pairwise Hom dimensions
    let mut full_end_dim = 0usize;
    for si in &dec.summands {
        for sj in &dec.summands {
            let d = hom_space(&si.module, &sj.module)?.len();
            full_end_dim += si.multiplicity() * sj.multiplicity() * d;
        }
    }
    let mut factors = Vec::new();
    let mut a_observed = 0usize;
    let mut all_matched = true;
    for (block, members) in groups {
        let labels: Vec<(IsoClassLabel, usize)> = members
            .iter()
            .map(|&si| (dec.summands[si].label.expect("pipeline labels"), dec.summands[si].multiplicity()))
            .collect();
        let block_parts: Vec<(Arc<Module>, String)> = members
            .iter()
            .map(|&si| (dec.summands[si].module.clone(), dec.summands[si].label.unwrap().to_string()))
            .collect();
        let (_, _, table) = end_algebra_of_sum(&block_parts)?;
        let shape = match block.class {
            BlockClass::SteinbergSemisimple | BlockClass::SemisimpleNonSteinberg => {
                a_observed += 1;
                if table.dim != 1 {
                    all_matched = false;
                }
                FactorShape::Scalar
            }
            BlockClass::NonSemisimple => {
                let pres = match block.figure_case {
                    FigureCase::SimpleProj => presentation_simple_proj(),
                    FigureCase::SimpleProjPair => presentation_simple_proj_pair(),
                    FigureCase::None => unreachable!("non-semisimple blocks carry a shape"),
                };
                let report = match_presentation(&table, &pres)?;
                if !report.pass {
                    all_matched = false;
                }
                FactorShape::Presented(report)
            }
        };
        factors.push(BlockFactor { block, summand_labels: labels, dim: table.dim, shape });
    }
    let lambda_dim = lambda.dim;
    if lambda_dim != factors.iter().map(|f2| f2.dim).sum::<usize>() {
        all_matched = false;
    }
    let a_formula = crate::weights::counts(l, r as i64).a_formula;
    Ok(EndoReport {
        l,
        r: r as i64,
        decomposition: dec,
        lambda,
        lambda_dim,
        full_end_dim,
        factors,
        a_observed,
        a_formula,
        all_matched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::make_field;

    fn cyc(l: i64) -> Field {
        make_field(l, FieldMode::Cyclotomic, None).unwrap()
    }

    fn labels_of(dec: &Decomposition) -> Vec<(String, usize, usize)> {
        let mut v: Vec<(String, usize, usize)> = dec
            .summands
            .iter()
            .map(|s| (s.label.unwrap().to_string(), s.module.dim, s.multiplicity()))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn natural_module_is_identified() {
        let field = cyc(3);
        let omega = Arc::new(natural_module(&field));
        let (label, iso) = identify_summand(&omega, 1).unwrap();
        assert_eq!(label.to_string(), "L(1,0)");
        assert_eq!(label.sl2_type, 2);
        assert!(iso.verify());
    }

    #[test]
    fn decompose_square_into_two_simples() {
        let field = cyc(3);
        let t = Arc::new(tensor_power(&field, 2));
        let dec = decompose(&t, 7).unwrap();
        assert!(dec.verify_splitting());
        let mut dims: Vec<usize> = dec.summands.iter().map(|s| s.module.dim).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 3]);
        for s in &dec.summands {
            assert_eq!(s.multiplicity(), 1);
        }
    }

    #[test]
    fn decompose_cube_into_simple_and_projective() {
        let field = cyc(3);
        let t = Arc::new(tensor_power(&field, 3));
        let dec = decompose(&t, 7).unwrap();
        assert!(dec.verify_splitting());
        let mut found: Vec<(usize, usize)> =
            dec.summands.iter().map(|s| (s.module.dim, s.multiplicity())).collect();
        found.sort();
        assert_eq!(found, vec![(2, 1), (6, 1)]);
        // the 6-dimensional summand restricts to the sl2 projective P_2
        let six = dec.summands.iter().find(|s| s.module.dim == 6).unwrap();
        let restricted = Arc::new(crate::reps::restrict_to_sl2(&six.module));
        let p2 = Arc::new(crate::reps::projective_module(&field, 2).unwrap());
        assert!(is_isomorphic(&restricted, &p2, 3).unwrap());
    }

    #[test]
    fn pipeline_matches_direct_decomposition() {
        let field = cyc(3);
        for r in 1..=4 {
            let direct = {
                let t = Arc::new(tensor_power(&field, r));
                let dec = decompose(&t, 11).unwrap();
                let mut v: Vec<(usize, usize)> =
                    dec.summands.iter().map(|s| (s.module.dim, s.multiplicity())).collect();
                v.sort();
                v
            };
            let piped = {
                let dec = decompose_tensor_power(&field, r, 11).unwrap();
                let mut v: Vec<(usize, usize)> =
                    dec.summands.iter().map(|s| (s.module.dim, s.multiplicity())).collect();
                v.sort();
                v
            };
            assert_eq!(direct, piped, "r={r}");
        }
    }

    #[test]
    fn pipeline_labels_r3_and_r4() {
        let field = cyc(3);
        let dec = decompose_tensor_power(&field, 3, 1).unwrap();
        assert_eq!(
            labels_of(&dec),
            vec![("L(2,1)".to_string(), 2, 1), ("P(2,1)".to_string(), 6, 1)]
        );
        let dec = decompose_tensor_power(&field, 4, 1).unwrap();
        assert_eq!(
            labels_of(&dec),
            vec![
                ("L(0,1)".to_string(), 3, 3),
                ("L(2,2)".to_string(), 1, 1),
                ("P(2,2)".to_string(), 6, 1)
            ]
        );
    }

    #[test]
    fn predicted_catalog_small_cases() {
        let p3: Vec<String> = predicted_summands(3, 3).iter().map(|x| x.to_string()).collect();
        assert_eq!(p3, vec!["L(2,1)", "P(2,1)"]);
        let p4: Vec<String> = predicted_summands(3, 4).iter().map(|x| x.to_string()).collect();
        assert_eq!(p4, vec!["L(0,1)", "L(2,2)", "P(2,2)"]);
        let p6: Vec<String> = predicted_summands(3, 6).iter().map(|x| x.to_string()).collect();
        assert_eq!(p6, vec!["L(0,0)", "L(1,2)", "P(0,0)", "P(2,1)"]);
    }

    #[test]
    fn catalog_modules_pass_relations() {
        let field = cyc(3);
        for a in 0..3 {
            for b in 0..3 {
                let bw = BarWeight(a, b);
                assert!(crate::reps::check_relations(&catalog_simple(&field, bw)));
                if let Some(p) = catalog_projective(&field, bw) {
                    assert!(crate::reps::check_relations(&p));
                }
            }
        }
    }

    #[test]
    fn sl2_socle_series_of_projectives() {
        for l in [3, 5] {
            let field = cyc(l);
            let catalog = sl2_simple_catalog(&field);
            for j in 1..l {
                let p = Arc::new(crate::reps::projective_module(&field, j).unwrap());
                let layers = socle_series(&p, &catalog).unwrap();
                assert_eq!(
                    layers,
                    vec![vec![(j, 1)], vec![(l - j, 2)], vec![(j, 1)]],
                    "l={l} j={j}"
                );
                let factors = composition_factors(&p, &catalog).unwrap();
                let mut factors = factors;
                factors.sort();
                let mut expect = vec![(j, 2), (l - j, 2)];
                expect.sort();
                assert_eq!(factors, expect);
            }
            // a simple has itself as the single layer
            let l1 = Arc::new(crate::reps::simple_module(&field, 1).unwrap());
            assert_eq!(socle_series(&l1, &catalog).unwrap(), vec![vec![(1, 1)]]);
        }
    }

    #[test]
    fn blocks_of_the_cube() {
        let field = cyc(3);
        let dec = decompose_tensor_power(&field, 3, 5).unwrap();
        let groups = group_into_blocks(&dec, 3, 3).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].0.class, BlockClass::NonSemisimple);
        assert_eq!(groups[0].1.len(), 2);
    }

    #[test]
    fn report_r3_matches_simple_proj() {
        let field = cyc(3);
        let rep = basic_algebra_report(&field, 3, 9).unwrap();
        assert_eq!(rep.lambda_dim, 5);
        assert_eq!(rep.full_end_dim, 5);
        assert_eq!(rep.a_observed, 0);
        assert_eq!(rep.a_formula, Some(1));
        assert!(rep.all_matched);
        assert_eq!(rep.factors.len(), 1);
        match &rep.factors[0].shape {
            FactorShape::Presented(m) => {
                assert!(m.pass);
                assert_eq!(m.presentation, "simple-proj");
                assert_eq!(m.algebra_dim, 5);
            }
            _ => panic!("expected a presented factor"),
        }
    }

    #[test]
    fn report_r4_is_k_times_simple_proj() {
        let field = cyc(3);
        let rep = basic_algebra_report(&field, 4, 9).unwrap();
        assert_eq!(rep.lambda_dim, 6);
        assert_eq!(rep.a_observed, 1);
        assert!(rep.all_matched);
        let dims: Vec<usize> = rep.factors.iter().map(|f| f.dim).collect();
        assert!(dims.contains(&1) && dims.contains(&5));
    }

    #[test]
    fn cross_field_labels_agree_r4() {
        let fc = cyc(3);
        let fp = make_field(3, FieldMode::PrimeField, None).unwrap();
        let dc = decompose_tensor_power(&fc, 4, 21).unwrap();
        let dp = decompose_tensor_power(&fp, 4, 21).unwrap();
        assert_eq!(labels_of(&dc), labels_of(&dp));
    }
}
