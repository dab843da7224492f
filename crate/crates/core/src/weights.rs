//! Weight combinatorics for the tensor-space blocks: restricted weights,
//! the bar map, the reflection-shift action, Steinberg weights, block
//! chains, the I/J classification and the counting formulas.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightError {
    #[error("weight {0:?} admits no restricted split")]
    NotInDomain(Weight),
    #[error("weight {0:?} does not lie in Gamma_1^r")]
    NotInGamma(Weight),
}

/// An integral weight for gl2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub i64, pub i64);

/// A pair of residues mod `l`, each in `[0, l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarWeight(pub i64, pub i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockClass {
    SteinbergSemisimple,
    SemisimpleNonSteinberg,
    NonSemisimple,
}

impl BlockClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            BlockClass::SteinbergSemisimple => "steinberg-semisimple",
            BlockClass::SemisimpleNonSteinberg => "semisimple-non-steinberg",
            BlockClass::NonSemisimple => "non-semisimple",
        }
    }
}

/// Quiver shape of the basic algebra of a non-semisimple block factor,
/// keyed by the summand content of the block: a simple plus one projective,
/// or a simple plus a linked pair of projectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureCase {
    None,
    SimpleProj,
    SimpleProjPair,
}

impl FigureCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            FigureCase::None => "none",
            FigureCase::SimpleProj => "simple-proj",
            FigureCase::SimpleProjPair => "simple-proj-pair",
        }
    }
}

/// One linkage block of `Gamma_1^r`: the shift-ordered weight chain, its bar
/// image, and the semisimplicity classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockData {
    /// The chain `s^m . lambda`, ordered by ascending `m`.
    pub weights: Vec<Weight>,
    pub bar_weights: Vec<BarWeight>,
    pub class: BlockClass,
    pub figure_case: FigureCase,
}

/// Membership in the restricted region: `0 <= w1 - w2 <= l-1`, `0 <= w2 <= l-1`.
pub fn in_restricted(w: Weight, l: i64) -> bool {
    w.0 >= 0 && w.1 >= 0 && (0..=l - 1).contains(&(w.0 - w.1)) && (0..=l - 1).contains(&w.1)
}

/// The unique split `lambda = mu + l*nu` with `mu` restricted and `nu` in N^2:
/// `mu2` is the residue of `lambda2` and `mu1` the representative of
/// `lambda1`'s residue in the window `[mu2, mu2 + l - 1]`.
pub fn split_restricted(lambda: Weight, l: i64) -> Result<(Weight, Weight), WeightError> {
    let mu2 = lambda.1.rem_euclid(l);
    let mut mu1 = lambda.0.rem_euclid(l);
    if mu1 < mu2 {
        mu1 += l;
    }
    let nu1 = lambda.0 - mu1;
    let nu2 = lambda.1 - mu2;
    if nu1 < 0 || nu2 < 0 || nu1 % l != 0 || nu2 % l != 0 {
        return Err(WeightError::NotInDomain(lambda));
    }
    Ok((Weight(mu1, mu2), Weight(nu1 / l, nu2 / l)))
}

/// Membership in `Gamma_1^r`: degree `r` and a restricted split exists.
pub fn in_gamma(lambda: Weight, l: i64, r: i64) -> bool {
    lambda.0 + lambda.1 == r && lambda.0 >= 0 && lambda.1 >= 0 && split_restricted(lambda, l).is_ok()
}

/// All of `Gamma_1^r`, ordered by descending first component.
pub fn gamma(l: i64, r: i64) -> Vec<Weight> {
    (0..=r)
        .map(|a| Weight(r - a, a))
        .filter(|&w| in_gamma(w, l, r))
        .collect()
}

pub fn bar(lambda: Weight, l: i64) -> BarWeight {
    BarWeight(lambda.0.rem_euclid(l), lambda.1.rem_euclid(l))
}

fn s_plus(lambda: Weight, l: i64) -> Weight {
    let d = lambda.0 - lambda.1 + 1;
    let s = d.rem_euclid(l);
    let m = (d - s) / l;
    if s == 0 {
        lambda
    } else {
        Weight(lambda.1 - 1 + (m + 1) * l, lambda.0 + 1 - (m + 1) * l)
    }
}

fn s_minus(lambda: Weight, l: i64) -> Weight {
    let d = lambda.0 - lambda.1 + 1;
    let s = d.rem_euclid(l);
    let m = (d - s) / l;
    Weight(lambda.1 - 1 + m * l, lambda.0 + 1 - m * l)
}

/// The iterated shift `s^m . lambda` (`m` may be negative).
pub fn s_shift(lambda: Weight, m: i64, l: i64) -> Weight {
    let mut w = lambda;
    if m >= 0 {
        for _ in 0..m {
            w = s_plus(w, l);
        }
    } else {
        for _ in 0..-m {
            w = s_minus(w, l);
        }
    }
    w
}

pub fn is_steinberg(lambda: Weight, l: i64) -> bool {
    (lambda.0 - lambda.1 + 1).rem_euclid(l) == 0
}

/// Steinberg weights of `Gamma_1^r` with both the enumeration-and-filter
/// oracle and the closed-form case split, plus their agreement flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinbergSet {
    pub weights: Vec<Weight>,
    pub closed_form: Vec<Weight>,
    pub agree: bool,
}

pub fn steinberg_set(l: i64, r: i64) -> SteinbergSet {
    let mut weights: Vec<Weight> = gamma(l, r).into_iter().filter(|&w| is_steinberg(w, l)).collect();
    weights.sort();
    let mut closed_form = steinberg_closed_form(l, r);
    closed_form.sort();
    let agree = weights == closed_form;
    SteinbergSet { weights, closed_form, agree }
}

/// The four-case closed form for the Steinberg set, with the case ranges
/// taken literally (case 2 is empty for `s = 1`).
pub fn steinberg_closed_form(l: i64, r: i64) -> Vec<Weight> {
    let s = r.div_euclid(l);
    let t = r.rem_euclid(l);
    let mut out = Vec::new();
    if s == 0 {
        if r == l - 1 {
            out.push(Weight(l - 1, 0));
        }
        return out;
    }
    if t % 2 == 1 {
        // m = s, s-2, ..., -s+2
        let mut m = s;
        while m >= -s + 2 {
            out.push(Weight(
                l + (t - 1) / 2 + l * (s + m - 2) / 2,
                (t + 1) / 2 + l * (s - m) / 2,
            ));
            m -= 2;
        }
    } else if t != l - 1 {
        // m = s-1, s-3, ..., -s+3
        let mut m = s - 1;
        while m >= -s + 3 {
            out.push(Weight(
                (3 * l - 1 + t) / 2 + l * (s + m - 3) / 2,
                (t + l + 1) / 2 + l * (s - m - 1) / 2,
            ));
            m -= 2;
        }
    } else {
        // t = l-1: m = s+1, s-1, ..., -s+1
        let mut m = s + 1;
        while m >= -s + 1 {
            out.push(Weight(
                l - 1 + l * (s + m - 1) / 2,
                l * (s - m + 1) / 2,
            ));
            m -= 2;
        }
    }
    out
}

/// The shift orbit of `lambda` inside `Gamma_1^r`, ordered by ascending `m`.
pub fn block_hat(lambda: Weight, l: i64, r: i64) -> Result<BlockData, WeightError> {
    if !in_gamma(lambda, l, r) {
        return Err(WeightError::NotInGamma(lambda));
    }
    let mut chain = vec![lambda];
    if !is_steinberg(lambda, l) {
        let mut w = lambda;
        loop {
            let next = s_minus(w, l);
            if next == w || !in_gamma(next, l, r) {
                break;
            }
            chain.insert(0, next);
            w = next;
        }
        w = lambda;
        loop {
            let next = s_plus(w, l);
            if next == w || !in_gamma(next, l, r) {
                break;
            }
            chain.push(next);
            w = next;
        }
    }
    let mut bars: Vec<BarWeight> = chain.iter().map(|&w| bar(w, l)).collect();
    bars.sort();
    bars.dedup();
    let class = classify_block(lambda, l, r)?;
    let figure_case = if class == BlockClass::NonSemisimple {
        if in_restricted(pick_j_representative(&chain, l, r).unwrap_or(lambda), l) {
            FigureCase::SimpleProj
        } else {
            FigureCase::SimpleProjPair
        }
    } else {
        FigureCase::None
    };
    Ok(BlockData { weights: chain, bar_weights: bars, class, figure_case })
}

fn pick_j_representative(chain: &[Weight], l: i64, r: i64) -> Option<Weight> {
    let (_, j) = sets_i_j(l, r);
    chain.iter().copied().find(|w| j.contains(w))
}

/// Expected chain length from the split of a non-Steinberg weight:
/// `2(nu1+nu2)+1` when `mu1 <= l-2`, otherwise `2(nu1+nu2+1)+1`.
pub fn block_size_formula(lambda: Weight, l: i64) -> Result<usize, WeightError> {
    let (mu, nu) = split_restricted(lambda, l)?;
    let sum = (nu.0 + nu.1) as usize;
    Ok(if mu.0 <= l - 2 { 2 * sum + 1 } else { 2 * (sum + 1) + 1 })
}

/// The sets `I` (semisimple non-Steinberg) and `J` (non-semisimple) of block
/// representatives `((r+i)/2, (r-i)/2)`.
pub fn sets_i_j(l: i64, r: i64) -> (Vec<Weight>, Vec<Weight>) {
    let mut i_set = Vec::new();
    let mut j_set = Vec::new();
    for i in 0..=l - 2 {
        if (r - i) % 2 != 0 {
            continue;
        }
        let w = Weight((r + i) / 2, (r - i) / 2);
        if i < 2 * l - r - 2 {
            if r - i >= 0 {
                i_set.push(w);
            }
        } else {
            j_set.push(w);
        }
    }
    (i_set, j_set)
}

pub fn classify_block(lambda: Weight, l: i64, r: i64) -> Result<BlockClass, WeightError> {
    if !in_gamma(lambda, l, r) {
        return Err(WeightError::NotInGamma(lambda));
    }
    if is_steinberg(lambda, l) {
        return Ok(BlockClass::SteinbergSemisimple);
    }
    // walk the orbit and look for an I or J representative
    let mut chain = vec![lambda];
    let mut w = lambda;
    loop {
        let next = s_minus(w, l);
        if next == w || !in_gamma(next, l, r) {
            break;
        }
        chain.push(next);
        w = next;
    }
    w = lambda;
    loop {
        let next = s_plus(w, l);
        if next == w || !in_gamma(next, l, r) {
            break;
        }
        chain.push(next);
        w = next;
    }
    let (i_set, j_set) = sets_i_j(l, r);
    let meets_i = chain.iter().any(|x| i_set.contains(x));
    let meets_j = chain.iter().any(|x| j_set.contains(x));
    match (meets_i, meets_j) {
        (true, false) => Ok(BlockClass::SemisimpleNonSteinberg),
        (false, true) => Ok(BlockClass::NonSemisimple),
        (false, false) => {
            // blocks of size 1 off the I/J grid are semisimple
            if chain.len() == 1 {
                Ok(BlockClass::SemisimpleNonSteinberg)
            } else {
                Err(WeightError::NotInGamma(lambda))
            }
        }
        (true, true) => Err(WeightError::NotInGamma(lambda)),
    }
}

/// Bar image of the block of `lambda`.
pub fn block_bar(lambda: Weight, l: i64, r: i64) -> Result<Vec<BarWeight>, WeightError> {
    Ok(block_hat(lambda, l, r)?.bar_weights)
}

/// All blocks of `Gamma_1^r`, each listed once, ordered by their minimal
/// weight.
pub fn all_blocks(l: i64, r: i64) -> Vec<BlockData> {
    let mut seen: Vec<Weight> = Vec::new();
    let mut out = Vec::new();
    for w in gamma(l, r) {
        if seen.contains(&w) {
            continue;
        }
        let b = block_hat(w, l, r).expect("gamma member");
        seen.extend(b.weights.iter().copied());
        out.push(b);
    }
    out.sort_by_key(|b| b.weights[0]);
    out
}

/// Counting report: the closed-form values (when `l <= r`) next to the
/// enumeration values, so discrepancies stay visible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts {
    pub a_formula: Option<i64>,
    pub a_enum: i64,
    pub j_bar_formula: Option<i64>,
    pub j_bar_enum: i64,
}

pub fn counts(l: i64, r: i64) -> Counts {
    let (i_set, j_set) = sets_i_j(l, r);
    let st = steinberg_set(l, r).weights;
    let mut st_bars: Vec<BarWeight> = st.iter().map(|&w| bar(w, l)).collect();
    st_bars.sort();
    st_bars.dedup();
    let mut i_bars: Vec<BarWeight> = i_set.iter().map(|&w| bar(w, l)).collect();
    i_bars.sort();
    i_bars.dedup();
    let mut j_bars: Vec<BarWeight> = j_set.iter().map(|&w| bar(w, l)).collect();
    j_bars.sort();
    j_bars.dedup();
    let a_enum = (st_bars.len() + i_bars.len()) as i64;
    let (a_formula, j_bar_formula) = if l <= r {
        let a = if r >= 2 * l - 2 {
            1
        } else if r % 2 == 0 {
            l - r / 2
        } else {
            l - (r + 1) / 2
        };
        let jb = if r >= 2 * l - 2 {
            (l - 1) / 2
        } else if r % 2 == 0 {
            (r - l + 1) / 2
        } else {
            (r - l + 2) / 2
        };
        (Some(a), Some(jb))
    } else {
        (None, None)
    };
    Counts { a_formula, a_enum, j_bar_formula, j_bar_enum: j_bars.len() as i64 }
}
