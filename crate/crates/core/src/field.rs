//! Exact scalar arithmetic: the rationals and finite fields GF(p^k) with an
//! explicit modulus polynomial.
//!
//! Finite-field elements are coefficient vectors of length k (little-endian
//! in the modulus basis, entries reduced mod p). Rational elements are
//! arbitrary-precision fractions in lowest terms with positive denominator.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{Error, Result};

/// Largest supported characteristic. Residue products then fit in a `u64`.
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Debug, PartialEq, Eq, Hash)]
enum FieldKind {
    Rationals,
    /// GF(p^k); `modulus` is the monic irreducible of degree k over GF(p),
    /// stored little-endian with length k+1. Absent exactly when k = 1.
    Finite {
        p: u64,
        k: usize,
        modulus: Option<Vec<u64>>,
    },
}

/// A field handle. Cheap to clone; equality is structural, so two handles to
/// GF(p^k) with the same modulus are the same field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Field(Arc<FieldKind>);

/// An exact scalar. Operations live on [`Field`]; an element does not carry
/// its field around.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Elem {
    Rat(BigRational),
    Gf(Vec<u64>),
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Rat(r) => write!(f, "{}", r),
            Elem::Gf(c) => write!(f, "{:?}", c),
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Finite { p, k, .. } => {
                if *k == 1 {
                    write!(f, "GF({})", p)
                } else {
                    write!(f, "GF({}^{})", p, k)
                }
            }
        }
    }
}

// ----- arithmetic mod p on u64 residues (p < 2^31) -----

pub(crate) mod zp {
    pub fn add(a: u64, b: u64, p: u64) -> u64 {
        let s = a + b;
        if s >= p {
            s - p
        } else {
            s
        }
    }
    pub fn sub(a: u64, b: u64, p: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + p - b
        }
    }
    pub fn mul(a: u64, b: u64, p: u64) -> u64 {
        a * b % p
    }
    pub fn neg(a: u64, p: u64) -> u64 {
        if a == 0 {
            0
        } else {
            p - a
        }
    }
    pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, a, p);
            }
            a = mul(a, a, p);
            e >>= 1;
        }
        acc
    }
    pub fn inv(a: u64, p: u64) -> u64 {
        // p is prime and a != 0
        pow(a, p - 2, p)
    }
}

// ----- polynomials over GF(p), used for the modulus arithmetic -----

pub(crate) mod zpoly {
    use super::zp;

    pub fn trim(f: &mut Vec<u64>) {
        while f.last() == Some(&0) {
            f.pop();
        }
    }

    pub fn deg(f: &[u64]) -> Option<usize> {
        if f.is_empty() {
            None
        } else {
            Some(f.len() - 1)
        }
    }

    pub fn mul(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
        if f.is_empty() || g.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; f.len() + g.len() - 1];
        for (i, &a) in f.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in g.iter().enumerate() {
                out[i + j] = zp::add(out[i + j], zp::mul(a, b, p), p);
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of f modulo g (g nonzero).
    pub fn rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
        let mut r: Vec<u64> = f.to_vec();
        trim(&mut r);
        let dg = deg(g).expect("division by zero polynomial");
        let lead_inv = zp::inv(g[dg], p);
        while let Some(dr) = deg(&r) {
            if dr < dg {
                break;
            }
            let c = zp::mul(r[dr], lead_inv, p);
            let shift = dr - dg;
            for (j, &gj) in g.iter().enumerate() {
                r[shift + j] = zp::sub(r[shift + j], zp::mul(c, gj, p), p);
            }
            trim(&mut r);
        }
        r
    }

    pub fn gcd(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
        let mut a = f.to_vec();
        let mut b = g.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        if let Some(d) = deg(&a) {
            let inv = zp::inv(a[d], p);
            for c in a.iter_mut() {
                *c = zp::mul(*c, inv, p);
            }
        }
        a
    }

    pub fn mulmod(f: &[u64], g: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(f, g, p), m, p)
    }

    pub fn powmod(f: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(f, m, p);
        let mut acc = vec![1u64];
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    /// x^(p^n) mod m, by n-fold Frobenius powering.
    pub fn x_pow_p_iter(n: usize, m: &[u64], p: u64) -> Vec<u64> {
        let mut h = rem(&[0, 1], m, p);
        for _ in 0..n {
            h = powmod(&h, p, m, p);
        }
        h
    }

    /// Rabin's irreducibility test for a monic f of degree >= 1 over GF(p).
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let k = match deg(f) {
            Some(0) | None => return false,
            Some(k) => k,
        };
        if k == 1 {
            return true;
        }
        // x^(p^k) must equal x mod f
        let xq = x_pow_p_iter(k, f, p);
        let mut x_minus = xq;
        // subtract x
        if x_minus.len() < 2 {
            x_minus.resize(2, 0);
        }
        x_minus[1] = zp::sub(x_minus[1], 1, p);
        trim(&mut x_minus);
        if !x_minus.is_empty() {
            return false;
        }
        // for each prime l dividing k: gcd(x^(p^(k/l)) - x, f) must be 1
        let mut rem_k = k;
        let mut l = 2;
        let mut prime_divs = Vec::new();
        while l * l <= rem_k {
            if rem_k % l == 0 {
                prime_divs.push(l);
                while rem_k % l == 0 {
                    rem_k /= l;
                }
            }
            l += 1;
        }
        if rem_k > 1 {
            prime_divs.push(rem_k);
        }
        for l in prime_divs {
            let mut h = x_pow_p_iter(k / l, f, p);
            if h.len() < 2 {
                h.resize(2, 0);
            }
            h[1] = zp::sub(h[1], 1, p);
            trim(&mut h);
            let g = gcd(&h, f, p);
            if deg(&g) != Some(0) {
                return false;
            }
        }
        true
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldKind::Rationals))
    }

    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<Field> {
        Self::finite(p, 1, None)
    }

    /// GF(p^k) with the given modulus (required exactly when k > 1).
    pub fn finite(p: u64, k: usize, modulus: Option<Vec<u64>>) -> Result<Field> {
        if p >= MAX_PRIME || !is_prime_u64(p) {
            return Err(Error::InvalidField(format!("{} is not a usable prime", p)));
        }
        if k == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        match (&modulus, k) {
            (None, 1) => {}
            (None, _) => {
                return Err(Error::InvalidField(
                    "extension of degree > 1 requires a modulus".into(),
                ))
            }
            (Some(_), 1) => {
                return Err(Error::InvalidField(
                    "prime field must not carry a modulus".into(),
                ))
            }
            (Some(m), _) => {
                if m.len() != k + 1 {
                    return Err(Error::InvalidField(format!(
                        "modulus must have degree {} (got {} coefficients)",
                        k,
                        m.len()
                    )));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidField("modulus coefficients not reduced".into()));
                }
                if m[k] != 1 {
                    return Err(Error::InvalidField("modulus must be monic".into()));
                }
                if !zpoly::is_irreducible(m, p) {
                    return Err(Error::InvalidField("modulus is reducible".into()));
                }
            }
        }
        Ok(Field(Arc::new(FieldKind::Finite { p, k, modulus })))
    }

    /// GF(p^k) with the canonical modulus: the lexicographically least monic
    /// irreducible of degree k (coefficient vectors compared little-endian).
    pub fn extension(p: u64, k: usize) -> Result<Field> {
        if k == 1 {
            return Self::prime(p);
        }
        if p >= MAX_PRIME || !is_prime_u64(p) {
            return Err(Error::InvalidField(format!("{} is not a usable prime", p)));
        }
        let mut coeffs = vec![0u64; k];
        loop {
            let mut m = coeffs.clone();
            m.push(1);
            if zpoly::is_irreducible(&m, p) {
                return Self::finite(p, k, Some(m));
            }
            // odometer, last digit fastest (ascending canonical order)
            let mut i = k;
            loop {
                if i == 0 {
                    return Err(Error::InvalidField(format!(
                        "no irreducible of degree {} over GF({})",
                        k, p
                    )));
                }
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
            }
        }
    }

    pub fn is_rationals(&self) -> bool {
        matches!(&*self.0, FieldKind::Rationals)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_rationals()
    }

    pub fn characteristic(&self) -> Option<u64> {
        match &*self.0 {
            FieldKind::Rationals => None,
            FieldKind::Finite { p, .. } => Some(*p),
        }
    }

    /// Extension degree over the prime field (1 for GF(p), None for Q).
    pub fn degree(&self) -> Option<usize> {
        match &*self.0 {
            FieldKind::Rationals => None,
            FieldKind::Finite { k, .. } => Some(*k),
        }
    }

    pub fn modulus(&self) -> Option<&[u64]> {
        match &*self.0 {
            FieldKind::Finite {
                modulus: Some(m), ..
            } => Some(m),
            _ => None,
        }
    }

    /// |F| when finite and small enough for a u128.
    pub fn order_u128(&self) -> Option<u128> {
        match &*self.0 {
            FieldKind::Rationals => None,
            FieldKind::Finite { p, k, .. } => {
                let mut acc: u128 = 1;
                for _ in 0..*k {
                    acc = acc.checked_mul(*p as u128)?;
                }
                Some(acc)
            }
        }
    }

    pub fn zero(&self) -> Elem {
        match &*self.0 {
            FieldKind::Rationals => Elem::Rat(BigRational::zero()),
            FieldKind::Finite { k, .. } => Elem::Gf(vec![0; *k]),
        }
    }

    pub fn one(&self) -> Elem {
        match &*self.0 {
            FieldKind::Rationals => Elem::Rat(BigRational::one()),
            FieldKind::Finite { p, k, .. } => {
                let mut v = vec![0; *k];
                v[0] = 1 % p;
                Elem::Gf(v)
            }
        }
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match &*self.0 {
            FieldKind::Rationals => Elem::Rat(BigRational::from(BigInt::from(n))),
            FieldKind::Finite { p, k, .. } => {
                let r = n.rem_euclid(*p as i64) as u64;
                let mut v = vec![0; *k];
                v[0] = r;
                Elem::Gf(v)
            }
        }
    }

    pub fn from_u64(&self, n: u64) -> Elem {
        match &*self.0 {
            FieldKind::Rationals => Elem::Rat(BigRational::from(BigInt::from(n))),
            FieldKind::Finite { p, k, .. } => {
                let mut v = vec![0; *k];
                v[0] = n % p;
                Elem::Gf(v)
            }
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(r) => r.is_zero(),
            Elem::Gf(c) => c.iter().all(|&x| x == 0),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    fn pk(&self) -> (u64, usize) {
        match &*self.0 {
            FieldKind::Rationals => panic!("finite-field operation on Q"),
            FieldKind::Finite { p, k, .. } => (*p, *k),
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (Elem::Gf(x), Elem::Gf(y)) => {
                let (p, k) = self.pk();
                debug_assert_eq!(x.len(), k);
                debug_assert_eq!(y.len(), k);
                Elem::Gf((0..k).map(|i| zp::add(x[i], y[i], p)).collect())
            }
            _ => panic!("element kind does not match field"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x - y),
            (Elem::Gf(x), Elem::Gf(y)) => {
                let (p, k) = self.pk();
                Elem::Gf((0..k).map(|i| zp::sub(x[i], y[i], p)).collect())
            }
            _ => panic!("element kind does not match field"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match a {
            Elem::Rat(x) => Elem::Rat(-x),
            Elem::Gf(x) => {
                let (p, _) = self.pk();
                Elem::Gf(x.iter().map(|&c| zp::neg(c, p)).collect())
            }
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (Elem::Gf(x), Elem::Gf(y)) => {
                let (p, k) = self.pk();
                if k == 1 {
                    return Elem::Gf(vec![zp::mul(x[0], y[0], p)]);
                }
                let m = self.modulus().expect("extension without modulus");
                let mut prod = zpoly::mul(x, y, p);
                prod = zpoly::rem(&prod, m, p);
                prod.resize(k, 0);
                Elem::Gf(prod)
            }
            _ => panic!("element kind does not match field"),
        }
    }

    pub fn inv(&self, a: &Elem) -> Option<Elem> {
        if self.is_zero(a) {
            return None;
        }
        match a {
            Elem::Rat(x) => Some(Elem::Rat(x.recip())),
            Elem::Gf(x) => {
                let (p, k) = self.pk();
                if k == 1 {
                    return Some(Elem::Gf(vec![zp::inv(x[0], p)]));
                }
                let m = self.modulus().unwrap();
                // extended Euclid in GF(p)[x]
                let mut r0: Vec<u64> = m.to_vec();
                let mut r1: Vec<u64> = x.clone();
                zpoly::trim(&mut r1);
                let mut s0: Vec<u64> = Vec::new();
                let mut s1: Vec<u64> = vec![1];
                while !r1.is_empty() {
                    // divide r0 by r1
                    let d1 = zpoly::deg(&r1).unwrap();
                    let lead_inv = zp::inv(r1[d1], p);
                    let mut q = vec![0u64; r0.len().saturating_sub(r1.len()) + 1];
                    let mut r = r0.clone();
                    while let Some(dr) = zpoly::deg(&r) {
                        if dr < d1 {
                            break;
                        }
                        let c = zp::mul(r[dr], lead_inv, p);
                        let shift = dr - d1;
                        q[shift] = zp::add(q[shift], c, p);
                        for (j, &gj) in r1.iter().enumerate() {
                            r[shift + j] = zp::sub(r[shift + j], zp::mul(c, gj, p), p);
                        }
                        zpoly::trim(&mut r);
                    }
                    zpoly::trim(&mut q);
                    // (r0, r1) = (r1, r); (s0, s1) = (s1, s0 - q*s1)
                    let qs1 = zpoly::mul(&q, &s1, p);
                    let mut s2 = s0.clone();
                    s2.resize(s2.len().max(qs1.len()), 0);
                    for (i, &c) in qs1.iter().enumerate() {
                        s2[i] = zp::sub(s2[i], c, p);
                    }
                    zpoly::trim(&mut s2);
                    r0 = r1;
                    r1 = r;
                    s0 = s1;
                    s1 = s2;
                }
                // r0 = gcd (a unit, degree 0 since modulus irreducible)
                debug_assert_eq!(zpoly::deg(&r0), Some(0));
                let g_inv = zp::inv(r0[0], p);
                let mut out: Vec<u64> = s0.iter().map(|&c| zp::mul(c, g_inv, p)).collect();
                out = zpoly::rem(&out, m, p);
                out.resize(k, 0);
                Some(Elem::Gf(out))
            }
        }
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    pub fn pow_u64(&self, a: &Elem, mut e: u64) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Canonical total order used for deterministic tie-breaking: rationals by
    /// (numerator, denominator); finite-field elements by coefficient vector,
    /// lexicographic little-endian.
    pub fn cmp_elems(&self, a: &Elem, b: &Elem) -> Ordering {
        match (a, b) {
            (Elem::Rat(x), Elem::Rat(y)) => x
                .numer()
                .cmp(y.numer())
                .then_with(|| x.denom().cmp(y.denom())),
            (Elem::Gf(x), Elem::Gf(y)) => x.cmp(y),
            _ => panic!("element kind does not match field"),
        }
    }

    /// All field elements in canonical ascending order (finite fields only).
    pub fn iter_elems(&self) -> impl Iterator<Item = Elem> + '_ {
        let (p, k) = self.pk();
        let mut cur = Some(vec![0u64; k]);
        std::iter::from_fn(move || {
            let v = cur.take()?;
            let out = Elem::Gf(v.clone());
            let mut next = v;
            let mut i = k;
            loop {
                if i == 0 {
                    cur = None;
                    return Some(out);
                }
                i -= 1;
                next[i] += 1;
                if next[i] < p {
                    break;
                }
                next[i] = 0;
            }
            cur = Some(next);
            Some(out)
        })
    }

    /// A uniformly random element (finite fields only).
    pub fn random_elem<R: rand::Rng>(&self, rng: &mut R) -> Elem {
        let (p, k) = self.pk();
        Elem::Gf((0..k).map(|_| rng.gen_range(0..p)).collect())
    }
}

/// A field homomorphism GF(p^k) -> GF(p^m) (or the identity on Q), realized
/// by the image of the source generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    src: Field,
    dst: Field,
    /// beta^0 .. beta^(k-1) in dst, where beta is the chosen root of the
    /// source modulus. Empty for identity/prime-field embeddings.
    beta_powers: Vec<Elem>,
}

impl Embedding {
    pub fn identity(f: &Field) -> Embedding {
        Embedding {
            src: f.clone(),
            dst: f.clone(),
            beta_powers: Vec::new(),
        }
    }

    pub(crate) fn from_beta(src: &Field, dst: &Field, beta: &Elem) -> Embedding {
        let k = src.degree().expect("finite source");
        let mut powers = Vec::with_capacity(k);
        let mut acc = dst.one();
        for _ in 0..k {
            powers.push(acc.clone());
            acc = dst.mul(&acc, beta);
        }
        Embedding {
            src: src.clone(),
            dst: dst.clone(),
            beta_powers: powers,
        }
    }

    pub fn src(&self) -> &Field {
        &self.src
    }

    pub fn dst(&self) -> &Field {
        &self.dst
    }

    pub fn map(&self, e: &Elem) -> Elem {
        if self.src == self.dst {
            return e.clone();
        }
        match e {
            Elem::Rat(_) => e.clone(),
            Elem::Gf(coeffs) => {
                let mut acc = self.dst.zero();
                if self.beta_powers.is_empty() {
                    // prime-field source: constant embedding
                    return self.dst.from_u64(coeffs[0]);
                }
                for (i, &c) in coeffs.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let t = self.dst.mul(&self.beta_powers[i], &self.dst.from_u64(c));
                    acc = self.dst.add(&acc, &t);
                }
                acc
            }
        }
    }
}

/// Builds the canonical embedding of `src` into `dst`: identity on Q, the
/// constant embedding from a prime field, else via the canonically least root
/// of the source modulus inside `dst`.
pub fn embedding(src: &Field, dst: &Field) -> Result<Embedding> {
    if src == dst {
        return Ok(Embedding::identity(src));
    }
    match (src.is_rationals(), dst.is_rationals()) {
        (true, true) => return Ok(Embedding::identity(src)),
        (true, false) | (false, true) => {
            return Err(Error::IncompatibleFields(
                "cannot embed between Q and a finite field".into(),
            ))
        }
        _ => {}
    }
    let (ps, ks) = (src.characteristic().unwrap(), src.degree().unwrap());
    let (pd, kd) = (dst.characteristic().unwrap(), dst.degree().unwrap());
    if ps != pd {
        return Err(Error::IncompatibleFields(format!(
            "characteristics differ: {} vs {}",
            ps, pd
        )));
    }
    if kd % ks != 0 {
        return Err(Error::IncompatibleFields(format!(
            "degree {} does not divide {}",
            ks, kd
        )));
    }
    if ks == 1 {
        return Ok(Embedding {
            src: src.clone(),
            dst: dst.clone(),
            beta_powers: Vec::new(),
        });
    }
    // lift the source modulus to dst and take its least root there
    let modulus = src.modulus().unwrap();
    let coeffs: Vec<Elem> = modulus.iter().map(|&c| dst.from_u64(c)).collect();
    let f = crate::poly::Poly::new(dst.clone(), coeffs);
    let roots = crate::poly::roots_in_field(&f)?;
    let beta = roots
        .first()
        .map(|(r, _)| r.clone())
        .ok_or_else(|| Error::IncompatibleFields("source modulus has no root in target".into()))?;
    Ok(Embedding::from_beta(src, dst, &beta))
}

// ----- serialization of scalars and field specs -----

impl Field {
    /// "q", "gf:p", or {"p":..,"k":..,"modulus":[..]}.
    pub fn to_json(&self) -> serde_json::Value {
        match &*self.0 {
            FieldKind::Rationals => serde_json::Value::String("q".into()),
            FieldKind::Finite { p, k, modulus } => {
                if *k == 1 {
                    serde_json::Value::String(format!("gf:{}", p))
                } else {
                    serde_json::json!({
                        "p": p,
                        "k": k,
                        "modulus": modulus.as_ref().unwrap(),
                    })
                }
            }
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Field> {
        match v {
            serde_json::Value::String(s) => Field::from_str_spec(s),
            serde_json::Value::Object(o) => {
                let p = o
                    .get("p")
                    .and_then(|x| x.as_u64())
                    .ok_or_else(|| Error::Parse("field object needs integer p".into()))?;
                let k = o
                    .get("k")
                    .and_then(|x| x.as_u64())
                    .ok_or_else(|| Error::Parse("field object needs integer k".into()))?
                    as usize;
                let modulus = match o.get("modulus") {
                    None => None,
                    Some(serde_json::Value::Array(a)) => {
                        let mut m = Vec::with_capacity(a.len());
                        for x in a {
                            m.push(x.as_u64().ok_or_else(|| {
                                Error::Parse("modulus entries must be non-negative ints".into())
                            })?);
                        }
                        Some(m)
                    }
                    Some(_) => return Err(Error::Parse("modulus must be an array".into())),
                };
                if k == 1 && modulus.is_none() {
                    Field::prime(p)
                } else {
                    Field::finite(p, k, modulus)
                }
            }
            _ => Err(Error::Parse("field spec must be string or object".into())),
        }
    }

    /// Accepts "q", "gf:p", and the convenience form "gf:p^k" (canonical
    /// modulus chosen automatically).
    pub fn from_str_spec(s: &str) -> Result<Field> {
        if s == "q" || s == "Q" {
            return Ok(Field::rationals());
        }
        if let Some(rest) = s.strip_prefix("gf:") {
            if let Some((ps, ks)) = rest.split_once('^') {
                let p: u64 = ps
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad prime in field spec {:?}", s)))?;
                let k: usize = ks
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad degree in field spec {:?}", s)))?;
                return Field::extension(p, k);
            }
            let p: u64 = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime in field spec {:?}", s)))?;
            return Field::prime(p);
        }
        Err(Error::Parse(format!("unrecognized field spec {:?}", s)))
    }

    /// Rationals serialize as "a/b" strings ("a" when b = 1); finite-field
    /// elements as arrays of k integers in [0, p).
    pub fn elem_to_json(&self, e: &Elem) -> serde_json::Value {
        match e {
            Elem::Rat(r) => {
                if r.denom().is_one() {
                    serde_json::Value::String(r.numer().to_string())
                } else {
                    serde_json::Value::String(format!("{}/{}", r.numer(), r.denom()))
                }
            }
            Elem::Gf(c) => serde_json::Value::Array(
                c.iter()
                    .map(|&x| serde_json::Value::from(x))
                    .collect::<Vec<_>>(),
            ),
        }
    }

    pub fn elem_from_json(&self, v: &serde_json::Value) -> Result<Elem> {
        match (&*self.0, v) {
            (FieldKind::Rationals, serde_json::Value::String(s)) => self.elem_from_str(s),
            (FieldKind::Finite { p, k, .. }, serde_json::Value::Array(a)) => {
                if a.len() != *k {
                    return Err(Error::Parse(format!(
                        "element needs {} coefficients, got {}",
                        k,
                        a.len()
                    )));
                }
                let mut c = Vec::with_capacity(*k);
                for x in a {
                    let n = x
                        .as_u64()
                        .ok_or_else(|| Error::Parse("coefficients must be non-negative ints".into()))?;
                    if n >= *p {
                        return Err(Error::Parse(format!("coefficient {} not reduced mod {}", n, p)));
                    }
                    c.push(n);
                }
                Ok(Elem::Gf(c))
            }
            _ => Err(Error::Parse(
                "element encoding does not match the field".into(),
            )),
        }
    }

    /// Inline string form: "a/b" or "a" over Q; "c0" or "c0:c1:..." over GF.
    pub fn elem_from_str(&self, s: &str) -> Result<Elem> {
        match &*self.0 {
            FieldKind::Rationals => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s, "1"),
                };
                let n: BigInt = num
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad rational {:?}", s)))?;
                let d: BigInt = den
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad rational {:?}", s)))?;
                if d.is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(Elem::Rat(BigRational::new(n, d)))
            }
            FieldKind::Finite { p, k, .. } => {
                let parts: Vec<&str> = s.split(':').collect();
                if parts.len() > *k {
                    return Err(Error::Parse(format!(
                        "too many coefficients for degree-{} field",
                        k
                    )));
                }
                let mut c = vec![0u64; *k];
                for (i, part) in parts.iter().enumerate() {
                    let n: i64 = part
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient {:?}", part)))?;
                    c[i] = n.rem_euclid(*p as i64) as u64;
                }
                Ok(Elem::Gf(c))
            }
        }
    }

    pub fn elem_to_string(&self, e: &Elem) -> String {
        match e {
            Elem::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Elem::Gf(c) => c
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(":"),
        }
    }
}

/// Numerator/denominator access for rational elements (used by root finding).
pub(crate) fn rat_parts(e: &Elem) -> Option<(&BigInt, &BigInt)> {
    match e {
        Elem::Rat(r) => Some((r.numer(), r.denom())),
        _ => None,
    }
}

pub(crate) fn rat_from(n: BigInt, d: BigInt) -> Elem {
    Elem::Rat(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_field_basics() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(5);
        let b = f.from_i64(4);
        assert_eq!(f.add(&a, &b), f.from_i64(2));
        assert_eq!(f.mul(&a, &b), f.from_i64(6));
        assert_eq!(f.sub(&a, &b), f.from_i64(1));
        assert_eq!(f.neg(&a), f.from_i64(2));
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), f.one());
        assert!(f.inv(&f.zero()).is_none());
    }

    #[test]
    fn canonical_modulus_gf9_is_x2_plus_1() {
        let f = Field::extension(3, 2).unwrap();
        assert_eq!(f.modulus().unwrap(), &[1, 0, 1]);
        // the generator x squares to -1
        let x = Elem::Gf(vec![0, 1]);
        assert_eq!(f.mul(&x, &x), f.from_i64(-1));
    }

    #[test]
    fn canonical_modulus_gf49() {
        let f = Field::extension(7, 2).unwrap();
        assert_eq!(f.modulus().unwrap(), &[1, 0, 1]);
    }

    #[test]
    fn bad_modulus_rejected() {
        // x^2 - 1 = (x-1)(x+1) is reducible over GF(5)
        assert!(Field::finite(5, 2, Some(vec![4, 0, 1])).is_err());
        assert!(Field::finite(4, 1, None).is_err());
        assert!(Field::finite(5, 2, None).is_err());
    }

    fn field_axiom_check(f: &Field, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let a = f.random_elem(&mut rng);
            let b = f.random_elem(&mut rng);
            let c = f.random_elem(&mut rng);
            // associativity and commutativity
            assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
            assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            assert_eq!(f.add(&a, &b), f.add(&b, &a));
            assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
            // distributivity
            assert_eq!(
                f.mul(&a, &f.add(&b, &c)),
                f.add(&f.mul(&a, &b), &f.mul(&a, &c))
            );
            // inverses
            assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
            if !f.is_zero(&a) {
                let ai = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &ai), f.one());
            }
        }
    }

    #[test]
    fn field_axioms_on_random_triples() {
        field_axiom_check(&Field::prime(2).unwrap(), 1);
        field_axiom_check(&Field::prime(13).unwrap(), 2);
        field_axiom_check(&Field::extension(3, 2).unwrap(), 3);
        field_axiom_check(&Field::extension(2, 4).unwrap(), 4);
        field_axiom_check(&Field::extension(5, 3).unwrap(), 5);
    }

    #[test]
    fn rational_arithmetic_reduces() {
        let f = Field::rationals();
        let a = f.elem_from_str("2/4").unwrap();
        assert_eq!(f.elem_to_string(&a), "1/2");
        let b = f.elem_from_str("-3/-6").unwrap();
        assert_eq!(f.elem_to_string(&b), "1/2");
        let s = f.add(&a, &b);
        assert_eq!(f.elem_to_string(&s), "1");
    }

    #[test]
    fn elem_iteration_order() {
        let f = Field::extension(2, 2).unwrap();
        let all: Vec<Elem> = f.iter_elems().collect();
        assert_eq!(all.len(), 4);
        assert_eq!(all[0], Elem::Gf(vec![0, 0]));
        assert_eq!(all[1], Elem::Gf(vec![0, 1]));
        assert_eq!(all[2], Elem::Gf(vec![1, 0]));
        assert_eq!(all[3], Elem::Gf(vec![1, 1]));
        for w in all.windows(2) {
            assert_eq!(f.cmp_elems(&w[0], &w[1]), std::cmp::Ordering::Less);
        }
    }

    #[test]
    fn json_round_trip() {
        for f in [
            Field::rationals(),
            Field::prime(5).unwrap(),
            Field::extension(3, 2).unwrap(),
        ] {
            let j = f.to_json();
            let g = Field::from_json(&j).unwrap();
            assert_eq!(f, g);
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let e = if f.is_finite() {
                f.random_elem(&mut rng)
            } else {
                f.elem_from_str("-7/3").unwrap()
            };
            let je = f.elem_to_json(&e);
            assert_eq!(f.elem_from_json(&je).unwrap(), e);
        }
    }

    #[test]
    fn embedding_prime_into_extension() {
        let f = Field::prime(3).unwrap();
        let e = Field::extension(3, 2).unwrap();
        let emb = embedding(&f, &e).unwrap();
        let two = f.from_i64(2);
        assert_eq!(emb.map(&two), e.from_i64(2));
        // homomorphism on a few products
        for a in 0..3i64 {
            for b in 0..3i64 {
                let x = f.from_i64(a);
                let y = f.from_i64(b);
                assert_eq!(
                    emb.map(&f.mul(&x, &y)),
                    e.mul(&emb.map(&x), &emb.map(&y))
                );
            }
        }
    }
}
