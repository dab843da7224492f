//! Exact arithmetic in a field containing a primitive `l`-th root of unity,
//! plus quantum integers and Gaussian binomial coefficients evaluated there.
//!
//! Two modes are supported: the cyclotomic field `Q[x]/Phi_l(x)` with exact
//! rational coefficients, and a prime field `F_p` with `p = 1 (mod l)`.

use std::fmt::Write as _;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("l must be odd and >= 3, got {0}")]
    EvenOrSmallL(i64),
    #[error("prime {p} is not valid for l = {l}: need p prime and p = 1 (mod l)")]
    BadPrime { p: u64, l: i64 },
    #[error("division by zero")]
    DivisionByZero,
}

/// Field element in canonical form.  Cyclotomic elements are residues mod
/// `Phi_l` of fixed length `deg Phi_l`; prime-field elements are residues in
/// `[0, p)`.  Equality is plain structural equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Cyc(Vec<BigRational>),
    Fp(u64),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Cyc(c) => c.iter().all(|x| x.is_zero()),
            Scalar::Fp(x) => *x == 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldMode {
    Cyclotomic,
    PrimeField,
}

/// The coefficient field: `l`, the mode, and a fixed canonical primitive
/// `l`-th root of unity `eps`.
#[derive(Debug, Clone)]
pub struct FieldConfig {
    pub l: i64,
    pub mode: FieldMode,
    /// Modulus in prime-field mode.
    pub p: Option<u64>,
    /// Smallest primitive root of `p` (prime-field mode).
    pub primitive_root: Option<u64>,
    /// Coefficients of `Phi_l` (monic, degree = `deg`), cyclotomic mode.
    min_poly: Vec<BigRational>,
    deg: usize,
    /// Cache of `eps^0 .. eps^(l-1)`.
    eps_pows: Vec<Scalar>,
}

pub type Field = Arc<FieldConfig>;

/// Integer-coefficient cyclotomic polynomial `Phi_n`, computed by dividing
/// `x^n - 1` by the product of `Phi_d` over proper divisors `d | n`.
fn cyclotomic_polynomial(n: i64) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials (monic divisor).
fn poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = a.to_vec();
    let db = b.len() - 1;
    assert!(b[db].is_one());
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - db] = c.clone();
        for j in 0..=db {
            let t = &b[j] * &c;
            rem[i - db + j] -= t;
        }
    }
    assert!(rem.iter().all(|x| x.is_zero()), "non-exact polynomial division");
    quot
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime `p > 10^6` with `p = 1 (mod l)`.
pub fn default_prime(l: i64) -> u64 {
    let l = l as u64;
    let mut p = 1_000_001;
    loop {
        if p % l == 1 && is_prime(p) {
            return p;
        }
        p += 1;
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc: u64 = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn smallest_primitive_root(p: u64) -> u64 {
    let facs = prime_factors(p - 1);
    'g: for g in 2..p {
        for &q in &facs {
            if pow_mod(g, (p - 1) / q, p) == 1 {
                continue 'g;
            }
        }
        return g;
    }
    unreachable!("no primitive root found")
}

/// Build the coefficient field.  Canonical `eps`: the residue of `x` in
/// `Q[x]/Phi_l` (cyclotomic mode), or `g^((p-1)/l)` for the smallest
/// primitive root `g` of `p` (prime-field mode).
pub fn make_field(l: i64, mode: FieldMode, p: Option<u64>) -> Result<Field, ScalarError> {
    if l < 3 || l % 2 == 0 {
        return Err(ScalarError::EvenOrSmallL(l));
    }
    match mode {
        FieldMode::Cyclotomic => {
            let phi = cyclotomic_polynomial(l);
            let deg = phi.len() - 1;
            let min_poly: Vec<BigRational> =
                phi.iter().map(|c| BigRational::from_integer(c.clone())).collect();
            let mut cfg = FieldConfig {
                l,
                mode,
                p: None,
                primitive_root: None,
                min_poly,
                deg,
                eps_pows: Vec::new(),
            };
            let mut eps = vec![BigRational::zero(); deg];
            if deg > 1 {
                eps[1] = BigRational::one();
            } else {
                // l = 1 would give deg 1, but l >= 3 always has deg >= 2
                unreachable!();
            }
            let eps = Scalar::Cyc(eps);
            let mut pows = Vec::with_capacity(l as usize);
            let mut cur = cfg.one();
            for _ in 0..l {
                pows.push(cur.clone());
                cur = cfg.mul(&cur, &eps);
            }
            cfg.eps_pows = pows;
            Ok(Arc::new(cfg))
        }
        FieldMode::PrimeField => {
            let p = p.unwrap_or_else(|| default_prime(l));
            if !is_prime(p) || p % (l as u64) != 1 {
                return Err(ScalarError::BadPrime { p, l });
            }
            let g = smallest_primitive_root(p);
            let eps = pow_mod(g, (p - 1) / l as u64, p);
            let mut pows = Vec::with_capacity(l as usize);
            let mut cur = 1u64;
            for _ in 0..l {
                pows.push(Scalar::Fp(cur));
                cur = ((cur as u128 * eps as u128) % p as u128) as u64;
            }
            Ok(Arc::new(FieldConfig {
                l,
                mode,
                p: Some(p),
                primitive_root: Some(g),
                min_poly: Vec::new(),
                deg: 0,
                eps_pows: pows,
            }))
        }
    }
}

impl FieldConfig {
    pub fn zero(&self) -> Scalar {
        match self.mode {
            FieldMode::Cyclotomic => Scalar::Cyc(vec![BigRational::zero(); self.deg]),
            FieldMode::PrimeField => Scalar::Fp(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self.mode {
            FieldMode::Cyclotomic => {
                let mut c = vec![BigRational::zero(); self.deg];
                c[0] = BigRational::from_integer(BigInt::from(n));
                Scalar::Cyc(c)
            }
            FieldMode::PrimeField => {
                let p = self.p.unwrap() as i64;
                Scalar::Fp(n.rem_euclid(p) as u64)
            }
        }
    }

    pub fn eps(&self) -> Scalar {
        self.eps_pows[1 % self.l as usize].clone()
    }

    /// `eps^e` for any integer exponent (reduced mod `l`).
    pub fn eps_pow(&self, e: i64) -> Scalar {
        self.eps_pows[e.rem_euclid(self.l) as usize].clone()
    }

    /// Exponent `m` with `s = eps^m`, if `s` is an `l`-th root of unity.
    pub fn eps_log(&self, s: &Scalar) -> Option<i64> {
        self.eps_pows.iter().position(|t| t == s).map(|m| m as i64)
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Cyc(x), Scalar::Cyc(y)) => {
                Scalar::Cyc(x.iter().zip(y).map(|(u, v)| u + v).collect())
            }
            (Scalar::Fp(x), Scalar::Fp(y)) => {
                let p = self.p.unwrap();
                Scalar::Fp((x + y) % p)
            }
            _ => panic!("mixed scalar modes"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Cyc(x) => Scalar::Cyc(x.iter().map(|u| -u).collect()),
            Scalar::Fp(x) => {
                let p = self.p.unwrap();
                Scalar::Fp(if *x == 0 { 0 } else { p - x })
            }
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Cyc(x), Scalar::Cyc(y)) => {
                let mut prod = vec![BigRational::zero(); 2 * self.deg];
                for (i, u) in x.iter().enumerate() {
                    if u.is_zero() {
                        continue;
                    }
                    for (j, v) in y.iter().enumerate() {
                        if v.is_zero() {
                            continue;
                        }
                        prod[i + j] += u * v;
                    }
                }
                Scalar::Cyc(self.reduce_poly(prod))
            }
            (Scalar::Fp(x), Scalar::Fp(y)) => {
                let p = self.p.unwrap();
                Scalar::Fp(((*x as u128 * *y as u128) % p as u128) as u64)
            }
            _ => panic!("mixed scalar modes"),
        }
    }

    /// Reduce a raw coefficient vector mod `Phi_l` to canonical length `deg`.
    fn reduce_poly(&self, mut c: Vec<BigRational>) -> Vec<BigRational> {
        for i in (self.deg..c.len()).rev() {
            let lead = std::mem::replace(&mut c[i], BigRational::zero());
            if lead.is_zero() {
                continue;
            }
            for j in 0..self.deg {
                let t = &self.min_poly[j] * &lead;
                c[i - self.deg + j] -= t;
            }
        }
        c.truncate(self.deg);
        c.resize(self.deg, BigRational::zero());
        c
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, ScalarError> {
        if a.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        match a {
            Scalar::Fp(x) => {
                let p = self.p.unwrap();
                Ok(Scalar::Fp(pow_mod(*x, p - 2, p)))
            }
            Scalar::Cyc(x) => {
                // extended Euclid in Q[x] against Phi_l (irreducible)
                let mut r0: Vec<BigRational> = self.min_poly.clone();
                let mut r1: Vec<BigRational> = x.clone();
                trim(&mut r1);
                let mut s0: Vec<BigRational> = vec![];
                let mut s1: Vec<BigRational> = vec![BigRational::one()];
                while !r1.is_empty() {
                    let (q, r) = poly_divmod(&r0, &r1);
                    let s = poly_sub(&s0, &poly_mul(&q, &s1));
                    r0 = r1;
                    r1 = r;
                    s0 = s1;
                    s1 = s;
                }
                // r0 = gcd (a nonzero constant), s0 * a = r0 (mod Phi)
                assert_eq!(r0.len(), 1, "Phi_l must be irreducible over Q");
                let c = r0[0].recip();
                let mut out: Vec<BigRational> = s0.iter().map(|u| u * &c).collect();
                out.resize(self.deg, BigRational::zero());
                Ok(Scalar::Cyc(self.reduce_poly(out)))
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Quantum integer `[m] = (eps^m - eps^-m) / (eps - eps^-1)`.
    pub fn q_int(&self, m: i64) -> Scalar {
        let num = self.sub(&self.eps_pow(m), &self.eps_pow(-m));
        let den = self.sub(&self.eps_pow(1), &self.eps_pow(-1));
        self.div(&num, &den).expect("eps - eps^-1 != 0 for l >= 3")
    }

    /// Balanced Gaussian binomial at `eps`, by the division-free q-Pascal
    /// recurrence `[n k] = eps^(n-k) [n-1 k-1] + eps^(-k) [n-1 k]`.
    pub fn q_binom(&self, a: i64, b: i64) -> Scalar {
        if b < 0 || a < 0 || b > a {
            return self.zero();
        }
        let (a, b) = (a as usize, b as usize);
        // row-by-row DP keeps only the previous row
        let mut prev: Vec<Scalar> = vec![self.one()];
        for n in 1..=a {
            let kmax = b.min(n);
            let mut row = Vec::with_capacity(kmax + 1);
            row.push(self.one());
            for k in 1..=kmax {
                let up_left = if k - 1 < prev.len() { prev[k - 1].clone() } else { self.zero() };
                let up = if k < prev.len() { prev[k].clone() } else { self.zero() };
                let t1 = self.mul(&self.eps_pow((n - k) as i64), &up_left);
                let t2 = self.mul(&self.eps_pow(-(k as i64)), &up);
                row.push(self.add(&t1, &t2));
            }
            prev = row;
        }
        if b < prev.len() {
            prev[b].clone()
        } else {
            self.zero()
        }
    }

    /// Gaussian binomial via the q-Lucas factorization: for `a = a1*l + a0`,
    /// `b = b1*l + b0` with digits in `[0, l)`, `[a b] = C(a1, b1) * [a0 b0]`.
    /// Independent cross-check of `q_binom`.
    pub fn q_lucas(&self, a: i64, b: i64) -> Scalar {
        if b < 0 || a < 0 || b > a {
            return self.zero();
        }
        let (a1, a0) = (a / self.l, a % self.l);
        let (b1, b0) = (b / self.l, b % self.l);
        let c = binomial_i64(a1, b1);
        self.mul(&self.from_i64(c), &self.q_binom(a0, b0))
    }

    /// Exact string form: polynomial in `e` (cyclotomic) or residue (Fp).
    pub fn scalar_string(&self, s: &Scalar) -> String {
        match s {
            Scalar::Fp(x) => x.to_string(),
            Scalar::Cyc(c) => {
                let mut out = String::new();
                for (i, coef) in c.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let sign = if coef.is_negative() { "-" } else { "+" };
                    let mag = coef.abs();
                    if out.is_empty() {
                        if coef.is_negative() {
                            out.push('-');
                        }
                    } else {
                        let _ = write!(out, " {} ", sign);
                    }
                    let coef_part = if mag.is_one() && i > 0 { String::new() } else { mag.to_string() };
                    match (i, coef_part.as_str()) {
                        (0, _) => out.push_str(&mag.to_string()),
                        (1, "") => out.push('e'),
                        (1, cp) => {
                            let _ = write!(out, "{}*e", cp);
                        }
                        (_, "") => {
                            let _ = write!(out, "e^{}", i);
                        }
                        (_, cp) => {
                            let _ = write!(out, "{}*e^{}", cp, i);
                        }
                    }
                }
                if out.is_empty() {
                    out.push('0');
                }
                out
            }
        }
    }

    pub fn mode_string(&self) -> String {
        match self.mode {
            FieldMode::Cyclotomic => "cyclotomic".to_string(),
            FieldMode::PrimeField => format!("fp:{}", self.p.unwrap()),
        }
    }
}

fn binomial_i64(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, u) in a.iter().enumerate() {
        for (j, v) in b.iter().enumerate() {
            out[i + j] += u * v;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, u) in a.iter().enumerate() {
        out[i] += u;
    }
    for (i, v) in b.iter().enumerate() {
        out[i] -= v;
    }
    trim(&mut out);
    out
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() <= db {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        let c = &rem[i] / &lead;
        if c.is_zero() {
            continue;
        }
        quot[i - db] = c.clone();
        for j in 0..=db {
            let t = &b[j] * &c;
            rem[i - db + j] -= t;
        }
    }
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyc(l: i64) -> Field {
        make_field(l, FieldMode::Cyclotomic, None).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(3), vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)]);
        assert_eq!(
            cyclotomic_polynomial(9),
            vec![1, 0, 0, 1, 0, 0, 1].into_iter().map(BigInt::from).collect::<Vec<_>>()
        );
    }

    #[test]
    fn make_field_rejects_bad_l() {
        assert_eq!(make_field(4, FieldMode::Cyclotomic, None).unwrap_err(), ScalarError::EvenOrSmallL(4));
        assert_eq!(make_field(1, FieldMode::Cyclotomic, None).unwrap_err(), ScalarError::EvenOrSmallL(1));
    }

    #[test]
    fn make_field_rejects_bad_prime() {
        assert!(matches!(
            make_field(3, FieldMode::PrimeField, Some(5)),
            Err(ScalarError::BadPrime { .. })
        ));
        assert!(matches!(
            make_field(3, FieldMode::PrimeField, Some(9)),
            Err(ScalarError::BadPrime { .. })
        ));
    }

    #[test]
    fn eps_is_primitive() {
        for l in [3, 5, 7, 9] {
            let f = cyc(l);
            let mut pow = f.one();
            for m in 1..l {
                pow = f.mul(&pow, &f.eps());
                assert_ne!(pow, f.one(), "eps^{m} = 1 for l = {l}");
            }
            assert_eq!(f.mul(&pow, &f.eps()), f.one());
        }
    }

    #[test]
    fn eps_in_f7_is_2() {
        // cube roots of 1 mod 7 are {1, 2, 4}; smallest primitive root g = 3,
        // so the canonical choice is 3^2 = 2
        let f = make_field(3, FieldMode::PrimeField, Some(7)).unwrap();
        assert_eq!(f.primitive_root, Some(3));
        assert_eq!(f.eps(), Scalar::Fp(2));
    }

    #[test]
    fn field_arithmetic_l3() {
        let f = cyc(3);
        // eps * eps^2 = 1
        assert_eq!(f.mul(&f.eps(), &f.eps_pow(2)), f.one());
        // (1 + eps) + eps^2 = 0
        let s = f.add(&f.add(&f.one(), &f.eps()), &f.eps_pow(2));
        assert!(s.is_zero());
        assert_eq!(f.inv(&f.zero()).unwrap_err(), ScalarError::DivisionByZero);
    }

    #[test]
    fn inverse_is_exact() {
        for l in [3, 5, 7] {
            let f = cyc(l);
            let a = f.add(&f.eps_pow(2), &f.from_i64(3));
            let b = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &b), f.one());
        }
    }

    #[test]
    fn q_int_values() {
        let f = cyc(3);
        assert!(f.q_int(3).is_zero());
        assert_eq!(f.q_int(2), f.from_i64(-1));
        assert_eq!(f.q_int(1), f.one());
        let f5 = cyc(5);
        assert_eq!(f5.q_int(7), f5.q_int(2));
    }

    #[test]
    fn q_int_symmetries() {
        for l in [3, 5, 7] {
            let f = cyc(l);
            for m in -2 * l..2 * l {
                assert_eq!(f.q_int(m + l), f.q_int(m));
                assert_eq!(f.q_int(l - m), f.neg(&f.q_int(m)));
            }
            assert!(f.q_int(l).is_zero());
        }
    }

    #[test]
    fn q_binom_values() {
        let f = cyc(3);
        assert_eq!(f.q_binom(5, 0), f.one());
        assert_eq!(f.q_binom(2, 1), f.from_i64(-1));
        assert_eq!(f.q_binom(4, 3), f.one());
        assert!(f.q_binom(3, 1).is_zero());
        assert!(f.q_binom(2, 4).is_zero());
    }

    #[test]
    fn q_pascal_matches_q_lucas() {
        for l in [3, 5, 7] {
            let f = cyc(l);
            for a in 0..=4 * l {
                for b in 0..=a {
                    assert_eq!(f.q_binom(a, b), f.q_lucas(a, b), "l={l} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn modes_agree_on_q_arithmetic() {
        for l in [3, 5] {
            let fc = cyc(l);
            let fp = make_field(l, FieldMode::PrimeField, None).unwrap();
            // ring map sending eps to eps: compare via eps-power expansions of
            // q-integers and q-binomials as checked values
            for a in 0..=3 * l {
                for b in 0..=a {
                    let c = fc.q_binom(a, b);
                    let p = fp.q_binom(a, b);
                    // both must be expressible as the same Z[eps] combination;
                    // check by comparing against q_lucas in each mode
                    assert_eq!(c, fc.q_lucas(a, b));
                    assert_eq!(p, fp.q_lucas(a, b));
                }
            }
            for m in -l..=2 * l {
                // [m] is a signed sum of eps powers: recompute directly
                let direct_c = fc
                    .div(&fc.sub(&fc.eps_pow(m), &fc.eps_pow(-m)), &fc.sub(&fc.eps(), &fc.eps_pow(-1)))
                    .unwrap();
                assert_eq!(fc.q_int(m), direct_c);
                let direct_p = fp
                    .div(&fp.sub(&fp.eps_pow(m), &fp.eps_pow(-m)), &fp.sub(&fp.eps(), &fp.eps_pow(-1)))
                    .unwrap();
                assert_eq!(fp.q_int(m), direct_p);
            }
        }
    }

    #[test]
    fn default_primes() {
        assert_eq!(default_prime(3), 1_000_003);
        let p5 = default_prime(5);
        assert!(p5 > 1_000_000 && p5 % 5 == 1 && is_prime(p5));
        let p7 = default_prime(7);
        assert!(p7 > 1_000_000 && p7 % 7 == 1 && is_prime(p7));
    }

    #[test]
    fn scalar_strings() {
        let f = cyc(3);
        let s = f.add(&f.from_i64(2), &f.neg(&f.eps()));
        assert_eq!(f.scalar_string(&s), "2 - e");
        assert_eq!(f.scalar_string(&f.zero()), "0");
        let fp = make_field(3, FieldMode::PrimeField, Some(7)).unwrap();
        assert_eq!(fp.scalar_string(&fp.from_i64(-1)), "6");
    }

    proptest! {
        #[test]
        fn field_axioms_hold(xs in prop::collection::vec(-6i64..=6, 3)) {
            let f = cyc(5);
            let a = f.add(&f.from_i64(xs[0]), &f.mul(&f.eps(), &f.from_i64(xs[1])));
            let b = f.add(&f.from_i64(xs[2]), &f.eps_pow(3));
            prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
            prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
            let ab = f.mul(&a, &b);
            prop_assert_eq!(
                f.mul(&ab, &a),
                f.mul(&a, &f.mul(&b, &a))
            );
            if !a.is_zero() {
                let ai = f.inv(&a).unwrap();
                prop_assert_eq!(f.mul(&a, &ai), f.one());
            }
        }
    }
}
