//! Dense univariate polynomials over a [`Field`], with the factorization
//! fragments needed for eigenvalue work: squarefree parts, distinct-degree
//! splitting, equal-degree splitting, and root extraction (finite fields with
//! automatic extension; rational roots over Q).

use num::bigint::{BigInt, BigUint};
use num::{Integer, One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{rat_from, rat_parts, Elem, Field};

/// Little-endian coefficient list, no trailing zeros; the zero polynomial has
/// an empty list.
#[derive(Clone, PartialEq)]
pub struct Poly {
    field: Field,
    c: Vec<Elem>,
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poly{:?}", self.c)
    }
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().map(|e| field.is_zero(e)).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { field, c: coeffs }
    }

    pub fn zero(field: Field) -> Poly {
        Poly {
            field,
            c: Vec::new(),
        }
    }

    pub fn constant(field: Field, e: Elem) -> Poly {
        Poly::new(field.clone(), vec![e])
    }

    pub fn x(field: Field) -> Poly {
        let c = vec![field.zero(), field.one()];
        Poly { field, c }
    }

    /// x - r
    pub fn linear_root(field: Field, r: &Elem) -> Poly {
        let c = vec![field.neg(r), field.one()];
        Poly { field, c }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.c.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn lead(&self) -> Option<&Elem> {
        self.c.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(other.c.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.add(&self.coeff(i), &other.coeff(i)));
        }
        Poly::new(f.clone(), out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(other.c.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.sub(&self.coeff(i), &other.coeff(i)));
        }
        Poly::new(f.clone(), out)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly {
            field: f.clone(),
            c: self.c.iter().map(|e| f.neg(e)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(f.clone());
        }
        let mut out = vec![f.zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Poly::new(f.clone(), out)
    }

    pub fn mul_elem(&self, e: &Elem) -> Poly {
        let f = &self.field;
        Poly::new(f.clone(), self.c.iter().map(|a| f.mul(a, e)).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => self.clone(),
            Some(l) => {
                let inv = self.field.inv(l).expect("nonzero lead");
                self.mul_elem(&inv)
            }
        }
    }

    /// (quotient, remainder); `other` must be nonzero.
    pub fn divrem(&self, other: &Poly) -> (Poly, Poly) {
        let f = &self.field;
        let dg = other.degree().expect("division by zero polynomial");
        let lead_inv = f.inv(other.lead().unwrap()).expect("nonzero lead");
        let mut rem = self.c.clone();
        let mut quo = vec![f.zero(); self.c.len().saturating_sub(dg)];
        while rem.len() > dg {
            let dr = rem.len() - 1;
            let c = f.mul(&rem[dr], &lead_inv);
            if !f.is_zero(&c) {
                let shift = dr - dg;
                quo[shift] = f.add(&quo[shift], &c);
                for (j, g) in other.c.iter().enumerate() {
                    rem[shift + j] = f.sub(&rem[shift + j], &f.mul(&c, g));
                }
            }
            while rem.last().map(|e| f.is_zero(e)).unwrap_or(false) {
                rem.pop();
            }
            if rem.len() <= dg {
                break;
            }
        }
        (Poly::new(f.clone(), quo), Poly::new(f.clone(), rem))
    }

    pub fn rem(&self, other: &Poly) -> Poly {
        self.divrem(other).1
    }

    pub fn div_exact(&self, other: &Poly) -> Poly {
        let (q, r) = self.divrem(other);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        if self.c.len() <= 1 {
            return Poly::zero(f.clone());
        }
        let mut out = Vec::with_capacity(self.c.len() - 1);
        for (i, a) in self.c.iter().enumerate().skip(1) {
            out.push(f.mul(a, &f.from_u64(i as u64)));
        }
        Poly::new(f.clone(), out)
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for a in self.c.iter().rev() {
            acc = f.add(&f.mul(&acc, x), a);
        }
        acc
    }

    pub fn pow_mod(&self, e: &BigUint, modulus: &Poly) -> Poly {
        let f = &self.field;
        let mut base = self.rem(modulus);
        let mut acc = Poly::constant(f.clone(), f.one());
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
        }
        acc
    }

    /// self^(p) mod m via the field characteristic (finite fields).
    fn frobenius_mod(&self, modulus: &Poly) -> Poly {
        let p = self.field.characteristic().expect("finite field");
        self.pow_mod(&BigUint::from(p), modulus)
    }

    /// x^(q^n) mod m where q = |F|.
    fn x_pow_q_iter(n: usize, modulus: &Poly) -> Poly {
        let f = modulus.field();
        let k = f.degree().expect("finite field");
        let mut h = Poly::x(f.clone()).rem(modulus);
        for _ in 0..n * k {
            h = h.frobenius_mod(modulus);
        }
        h
    }

    pub fn map_field(&self, emb: &crate::field::Embedding) -> Poly {
        Poly::new(
            emb.dst().clone(),
            self.c.iter().map(|e| emb.map(e)).collect(),
        )
    }
}

/// Squarefree part (the radical), valid in any characteristic.
pub fn radical(f: &Poly) -> Poly {
    let field = f.field().clone();
    let g = f.monic();
    if g.degree().unwrap_or(0) == 0 {
        return Poly::constant(field.clone(), field.one());
    }
    let d = g.derivative();
    match field.characteristic() {
        None => {
            // characteristic zero
            let u = g.gcd(&d);
            g.div_exact(&u).monic()
        }
        Some(p) => {
            if d.is_zero() {
                // g = h(x)^p with h obtained by p-th roots of coefficients
                let k = field.degree().unwrap() as u32;
                let mut coeffs = Vec::new();
                let mut i = 0;
                while i < g.coeffs().len() {
                    let e = g.coeff(i);
                    // inverse Frobenius: c -> c^(p^(k-1))
                    let mut root = e;
                    for _ in 0..k.saturating_sub(1) {
                        root = field.pow_u64(&root, p);
                    }
                    coeffs.push(root);
                    i += p as usize;
                }
                let h = Poly::new(field, coeffs);
                return radical(&h);
            }
            let u = g.gcd(&d);
            let v = g.div_exact(&u).monic(); // product of factors with exponent not divisible by p
            // strip v-factors from u to isolate the p-divisible-exponent part
            let mut w = u;
            loop {
                let t = w.gcd(&v);
                if t.degree().unwrap_or(0) == 0 {
                    break;
                }
                w = w.div_exact(&t).monic();
            }
            if w.degree().unwrap_or(0) == 0 {
                return v;
            }
            v.mul(&radical(&w)).monic()
        }
    }
}

/// Distinct-degree decomposition of the squarefree `g`: pairs (e, product of
/// the irreducible factors of degree e), ascending in e.
pub fn distinct_degree(g: &Poly) -> Vec<(usize, Poly)> {
    let field = g.field().clone();
    let mut out = Vec::new();
    let mut rem = g.monic();
    let mut h = Poly::x(field.clone());
    let mut e = 0usize;
    while rem.degree().unwrap_or(0) > 0 {
        e += 1;
        if 2 * e > rem.degree().unwrap() {
            let d = rem.degree().unwrap();
            out.push((d, rem.clone()));
            break;
        }
        h = h.rem(&rem);
        // raise to the q-th power once more: h = h^q mod rem
        let k = field.degree().expect("finite field");
        let p = field.characteristic().unwrap();
        for _ in 0..k {
            h = h.pow_mod(&BigUint::from(p), &rem);
        }
        let diff = h.sub(&Poly::x(field.clone()));
        let d = rem.gcd(&diff);
        if d.degree().unwrap_or(0) > 0 {
            out.push((e, d.clone()));
            rem = rem.div_exact(&d).monic();
        }
    }
    out
}

/// Degree of the smallest extension of the coefficient field in which `f`
/// splits into linear factors (finite fields).
pub fn splitting_degree(f: &Poly) -> usize {
    let r = radical(f);
    let parts = distinct_degree(&r);
    let mut l = 1usize;
    for (e, _) in parts {
        l = lcm_usize(l, e);
    }
    l
}

fn lcm_usize(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd_usize(a, b) * b
}

fn gcd_usize(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd_usize(b, a % b)
    }
}

/// One irreducible factor (of degree `e`) of a product `g` of distinct
/// irreducibles all of degree `e`, by seeded equal-degree splitting.
pub fn equal_degree_factor(g: &Poly, e: usize, seed: u64) -> Poly {
    let field = g.field().clone();
    let mut cur = g.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while cur.degree().unwrap() > e {
        let split = try_equal_degree_split(&cur, e, &mut rng);
        if let Some(d) = split {
            let other = cur.div_exact(&d).monic();
            cur = if d.degree().unwrap() <= other.degree().unwrap() {
                d
            } else {
                other
            };
        }
    }
    cur
}

fn try_equal_degree_split<R: Rng>(g: &Poly, e: usize, rng: &mut R) -> Option<Poly> {
    let field = g.field().clone();
    let n = g.degree().unwrap();
    let p = field.characteristic().expect("finite field");
    let k = field.degree().unwrap();
    // random polynomial of degree < n
    let coeffs: Vec<Elem> = (0..n).map(|_| field.random_elem(rng)).collect();
    let r = Poly::new(field.clone(), coeffs);
    if r.is_zero() {
        return None;
    }
    let h = if p == 2 {
        // trace map over GF(2): r + r^2 + r^4 + ... (e*k terms)
        let mut acc = Poly::zero(field.clone());
        let mut t = r.rem(g);
        for _ in 0..(e * k) {
            acc = acc.add(&t).rem(g);
            t = t.mul(&t).rem(g);
        }
        acc
    } else {
        // r^((q^e - 1)/2) - 1
        let q = BigUint::from(p).pow(k as u32);
        let exp = (q.pow(e as u32) - BigUint::one()) / BigUint::from(2u32);
        let t = r.pow_mod(&exp, g);
        t.sub(&Poly::constant(field.clone(), field.one()))
    };
    let d = g.gcd(&h);
    let dd = d.degree().unwrap_or(0);
    if dd > 0 && dd < n {
        Some(d)
    } else {
        None
    }
}

/// All roots of `f` lying in its (finite) coefficient field, with
/// multiplicities, sorted in the canonical element order.
pub fn roots_in_field(f: &Poly) -> Result<Vec<(Elem, usize)>> {
    let field = f.field().clone();
    if !field.is_finite() {
        return rational_roots(f).map(|(roots, _)| roots);
    }
    if f.is_zero() {
        return Err(Error::AssertionFailed("roots of the zero polynomial".into()));
    }
    let g = f.monic();
    if g.degree().unwrap() == 0 {
        return Ok(Vec::new());
    }
    // isolate the product of distinct linear factors: gcd(g, x^q - x)
    let xq = Poly::x_pow_q_iter(1, &g);
    let lin = g.gcd(&xq.sub(&Poly::x(field.clone())));
    let mut roots: Vec<Elem> = Vec::new();
    if lin.degree().unwrap_or(0) > 0 {
        let order = field.order_u128();
        if order.map(|q| q <= 1 << 16).unwrap_or(false) {
            // exhaustive scan, deterministic
            for e in field.iter_elems() {
                if field.is_zero(&lin.eval(&e)) {
                    roots.push(e);
                }
            }
        } else {
            // equal-degree splitting down to linear factors
            let mut stack = vec![lin.clone()];
            let mut rng = ChaCha8Rng::seed_from_u64(0x_1337);
            while let Some(piece) = stack.pop() {
                let d = piece.degree().unwrap_or(0);
                if d == 0 {
                    continue;
                }
                if d == 1 {
                    // x + c  ->  root -c
                    let m = piece.monic();
                    roots.push(field.neg(&m.coeff(0)));
                    continue;
                }
                if let Some(part) = try_equal_degree_split(&piece, 1, &mut rng) {
                    let other = piece.div_exact(&part).monic();
                    stack.push(part);
                    stack.push(other);
                } else {
                    stack.push(piece);
                }
            }
        }
    }
    // multiplicities by repeated division
    let mut out = Vec::with_capacity(roots.len());
    for r in roots {
        let lin = Poly::linear_root(field.clone(), &r);
        let mut m = 0usize;
        let mut cur = g.clone();
        loop {
            let (q, rest) = cur.divrem(&lin);
            if rest.is_zero() {
                m += 1;
                cur = q;
            } else {
                break;
            }
        }
        debug_assert!(m > 0);
        out.push((r, m));
    }
    out.sort_by(|a, b| field.cmp_elems(&a.0, &b.0));
    Ok(out)
}

/// Rational roots of `f` over Q with multiplicities (canonically sorted), and
/// whether they account for the full degree.
pub fn rational_roots(f: &Poly) -> Result<(Vec<(Elem, usize)>, bool)> {
    let field = f.field().clone();
    if field.is_finite() {
        return Err(Error::AssertionFailed("rational_roots on a finite field".into()));
    }
    if f.is_zero() {
        return Err(Error::AssertionFailed("roots of the zero polynomial".into()));
    }
    let deg = f.degree().unwrap();
    if deg == 0 {
        return Ok((Vec::new(), true));
    }
    // clear denominators to a primitive integer polynomial
    let mut denom_lcm = BigInt::one();
    for c in f.coeffs() {
        let (_, d) = rat_parts(c).unwrap();
        denom_lcm = denom_lcm.lcm(d);
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| {
            let (n, d) = rat_parts(c).unwrap();
            n * (&denom_lcm / d)
        })
        .collect();
    // strip powers of x
    let val = ints
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero polynomial");
    let mut roots: Vec<(Elem, usize)> = Vec::new();
    if val > 0 {
        roots.push((field.zero(), val));
    }
    let body = &ints[val..];
    if body.len() > 1 {
        let a0 = body[0].abs().to_biguint().unwrap();
        let an = body[body.len() - 1].abs().to_biguint().unwrap();
        let top = divisors(&a0);
        let bottom = divisors(&an);
        let mut seen = std::collections::BTreeSet::new();
        for c in &top {
            for d in &bottom {
                let cb = BigInt::from(c.clone());
                let db = BigInt::from(d.clone());
                if cb.gcd(&db) != BigInt::one() {
                    continue;
                }
                for sign in [1i64, -1] {
                    let cand = rat_from(&cb * BigInt::from(sign), db.clone());
                    let key = field.elem_to_string(&cand);
                    if !seen.insert(key) {
                        continue;
                    }
                    if field.is_zero(&f.eval(&cand)) {
                        let lin = Poly::linear_root(field.clone(), &cand);
                        let mut m = 0usize;
                        let mut cur = f.clone();
                        loop {
                            let (q, rest) = cur.divrem(&lin);
                            if rest.is_zero() {
                                m += 1;
                                cur = q;
                            } else {
                                break;
                            }
                        }
                        roots.push((cand, m));
                    }
                }
            }
        }
    }
    roots.sort_by(|a, b| field.cmp_elems(&a.0, &b.0));
    let total: usize = roots.iter().map(|(_, m)| m).sum();
    Ok((roots, total == deg))
}

// ----- integer factorization helpers (desk scale) -----

fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    if n.is_zero() {
        return out;
    }
    for (p, e) in factorize(n.clone()) {
        let base = out.clone();
        let mut pe = BigUint::one();
        let mut extended = out;
        for _ in 0..e {
            pe *= &p;
            for b in &base {
                extended.push(b * &pe);
            }
        }
        out = extended;
    }
    out.sort();
    out.dedup();
    out
}

fn factorize(mut n: BigUint) -> Vec<(BigUint, u32)> {
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    if n <= BigUint::one() {
        return out;
    }
    let push = |p: BigUint, out: &mut Vec<(BigUint, u32)>| {
        if let Some(entry) = out.iter_mut().find(|(q, _)| *q == p) {
            entry.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    // trial division
    let small_limit = 100_000u64;
    let mut d = 2u64;
    while d <= small_limit {
        let db = BigUint::from(d);
        if &db * &db > n {
            break;
        }
        while (&n % &db).is_zero() {
            n /= &db;
            push(db.clone(), &mut out);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigUint::one() {
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            if m == BigUint::one() {
                continue;
            }
            if miller_rabin(&m) {
                push(m, &mut out);
            } else {
                let f = pollard_rho(&m);
                let q = &m / &f;
                stack.push(f);
                stack.push(q);
            }
        }
    }
    out.sort();
    out
}

fn miller_rabin(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    if *n == two {
        return true;
    }
    if (n % &two).is_zero() {
        return false;
    }
    let n_minus_1 = n - BigUint::one();
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let ab = BigUint::from(a);
        if &ab >= n {
            continue;
        }
        let mut x = ab.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint) -> BigUint {
    // n odd composite
    let one = BigUint::one();
    for c in 1u64..64 {
        let cb = BigUint::from(c);
        let mut x = BigUint::from(2u32);
        let mut y = BigUint::from(2u32);
        let mut d = one.clone();
        let f = |v: &BigUint| (v * v + &cb) % n;
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if d != one && &d != n {
            return d;
        }
    }
    // extremely unlikely at desk scale
    panic!("pollard rho failed to split {}", n);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn poly_i64(f: &Field, cs: &[i64]) -> Poly {
        Poly::new(f.clone(), cs.iter().map(|&c| f.from_i64(c)).collect())
    }

    #[test]
    fn divrem_round_trip() {
        let f = gf(7);
        let a = poly_i64(&f, &[1, 2, 3, 4, 5]);
        let b = poly_i64(&f, &[2, 0, 1]);
        let (q, r) = a.divrem(&b);
        let back = q.mul(&b).add(&r);
        assert_eq!(back, a);
        assert!(r.degree().unwrap_or(0) < b.degree().unwrap());
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = gf(5);
        let p1 = poly_i64(&f, &[1, 1]); // x + 1
        let p2 = poly_i64(&f, &[2, 1]); // x + 2
        let p3 = poly_i64(&f, &[3, 1]); // x + 3
        let a = p1.mul(&p2);
        let b = p1.mul(&p3);
        assert_eq!(a.gcd(&b), p1.monic());
    }

    #[test]
    fn roots_of_split_polynomial() {
        let f = gf(7);
        // (x-2)(x-3)^2
        let p = poly_i64(&f, &[-2, 1]).mul(&poly_i64(&f, &[-3, 1])).mul(&poly_i64(&f, &[-3, 1]));
        let roots = roots_in_field(&p).unwrap();
        assert_eq!(roots, vec![(f.from_i64(2), 1), (f.from_i64(3), 2)]);
    }

    #[test]
    fn x2_plus_1_has_no_roots_over_gf3_but_splits_in_gf9() {
        let f = gf(3);
        let p = poly_i64(&f, &[1, 0, 1]);
        assert!(roots_in_field(&p).unwrap().is_empty());
        assert_eq!(splitting_degree(&p), 2);
        let e = Field::extension(3, 2).unwrap();
        let emb = crate::field::embedding(&f, &e).unwrap();
        let pe = p.map_field(&emb);
        let roots = roots_in_field(&pe).unwrap();
        assert_eq!(roots.len(), 2);
        for (r, m) in &roots {
            assert_eq!(*m, 1);
            assert!(e.is_zero(&pe.eval(r)));
        }
    }

    #[test]
    fn radical_strips_p_th_powers() {
        let f = gf(3);
        // (x+1)^3 = x^3 + 1 over GF(3); derivative vanishes
        let p = poly_i64(&f, &[1, 0, 0, 1]);
        let r = radical(&p);
        assert_eq!(r, poly_i64(&f, &[1, 1]));
        // mixed: (x+1)^3 (x+2)^2
        let q = p.mul(&poly_i64(&f, &[2, 1])).mul(&poly_i64(&f, &[2, 1]));
        let rq = radical(&q);
        assert_eq!(rq, poly_i64(&f, &[1, 1]).mul(&poly_i64(&f, &[2, 1])).monic());
    }

    #[test]
    fn distinct_degree_on_mixed_product() {
        let f = gf(2);
        // (x)(x+1)(x^2+x+1): degrees 1,1,2
        let p = poly_i64(&f, &[0, 1])
            .mul(&poly_i64(&f, &[1, 1]))
            .mul(&poly_i64(&f, &[1, 1, 1]));
        let parts = distinct_degree(&radical(&p));
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].0, 1);
        assert_eq!(parts[0].1.degree(), Some(2));
        assert_eq!(parts[1].0, 2);
        assert_eq!(parts[1].1.degree(), Some(2));
        assert_eq!(splitting_degree(&p), 2);
    }

    #[test]
    fn equal_degree_split_extracts_irreducible() {
        let f = gf(5);
        // two irreducible quadratics over GF(5): x^2+2 and x^2+3
        let a = poly_i64(&f, &[2, 0, 1]);
        let b = poly_i64(&f, &[3, 0, 1]);
        let prod = a.mul(&b);
        let got = equal_degree_factor(&prod, 2, 7);
        assert!(got == a.monic() || got == b.monic());
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        let f = Field::rationals();
        // (x - 1/2)^2 (x + 3) x
        let half = f.elem_from_str("1/2").unwrap();
        let p = Poly::linear_root(f.clone(), &half)
            .mul(&Poly::linear_root(f.clone(), &half))
            .mul(&Poly::linear_root(f.clone(), &f.from_i64(-3)))
            .mul(&Poly::x(f.clone()));
        let (roots, splits) = rational_roots(&p).unwrap();
        assert!(splits);
        let as_strings: Vec<(String, usize)> = roots
            .iter()
            .map(|(r, m)| (f.elem_to_string(r), *m))
            .collect();
        assert_eq!(
            as_strings,
            vec![
                ("-3".to_string(), 1),
                ("0".to_string(), 1),
                ("1/2".to_string(), 2)
            ]
        );
    }

    #[test]
    fn rational_roots_incomplete_split() {
        let f = Field::rationals();
        // (x^2 + 1)(x - 2)
        let p = poly_i64(&f, &[1, 0, 1]).mul(&Poly::linear_root(f.clone(), &f.from_i64(2)));
        let (roots, splits) = rational_roots(&p).unwrap();
        assert!(!splits);
        assert_eq!(roots.len(), 1);
        assert_eq!(f.elem_to_string(&roots[0].0), "2");
    }
}
