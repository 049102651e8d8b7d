//! Small finite fields `F_{p^N}` with their subfields and the `q`-Frobenius.
//!
//! Everything happens inside one top field; a subfield `F_{p^k}` (`k | N`) is
//! the set `{x : x^{p^k} = x}`. Elements are coefficient vectors over `F_p`
//! modulo a fixed irreducible polynomial, packed base `p` into an integer
//! code with the constant term as least significant digit.

use thiserror::Error;

/// Default cap on the size of the top field.
pub const DEFAULT_FIELD_BOUND: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of size {p}^{degree} exceeds the bound {bound}")]
    BoundExceeded { p: u64, degree: u32, bound: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("degree {0} does not divide the tower degree")]
    NotASubfield(u32),
    #[error("invalid field parameters: {0}")]
    Invalid(String),
}

/// A field element, valid only together with the tower that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub(crate) u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone)]
pub struct FieldTower {
    p: u32,
    degree: u32,
    q_degree: u32,
    /// Monic modulus, constant term first, length `degree + 1`.
    modulus: Vec<u32>,
    size: u32,
    /// `exp[k] = g^k` for a primitive element `g`, `k < 2 (size - 1)`.
    exp: Vec<u32>,
    /// `log[x]` for `x != 0`.
    log: Vec<u32>,
    /// Zech logarithms `log(1 + g^k)`, `u32::MAX` where `1 + g^k = 0`.
    /// Empty in characteristic 2, where addition is XOR.
    zech: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Dense polynomial arithmetic over `F_p`, constant term first.
mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let get = |v: &[u32], i: usize| v.get(i).copied().unwrap_or(0);
        trim((0..n).map(|i| (get(a, i) + p - get(b, i)) % p).collect())
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        // Fermat; p is prime and small.
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let m = trim(m.to_vec());
        let dm = m.len();
        let inv_lead = inv_mod(*m.last().expect("nonzero modulus"), p) as u64;
        while r.len() >= dm {
            let c = (*r.last().unwrap() as u64 * inv_lead % p as u64) as u32;
            let shift = r.len() - dm;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = ((r[shift + i] as u64 + (p - c) as u64 * mi as u64) % p as u64) as u32;
            }
            r = trim(r);
        }
        r
    }

    pub fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        rem(&out.into_iter().map(|c| c as u32).collect::<Vec<_>>(), m, p)
    }

    pub fn pow_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut result = vec![1u32];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mul_mod(&result, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        rem(&result, m, p)
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Rabin's test: `f` (monic, degree n) is irreducible iff
    /// `x^{p^n} = x mod f` and `gcd(x^{p^{n/r}} - x, f) = 1` for primes `r | n`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let n = f.len() - 1;
        let x = vec![0, 1];
        let frob_iter = |k: usize| {
            let mut h = rem(&x, f, p);
            for _ in 0..k {
                h = pow_mod(&h, p as u64, f, p);
            }
            h
        };
        if sub(&frob_iter(n), &rem(&x, f, p), p) != Vec::<u32>::new() {
            return false;
        }
        for r in (2..=n).filter(|&r| n.is_multiple_of(r) && super::is_prime(r as u64)) {
            let h = sub(&frob_iter(n / r), &x, p);
            if gcd(&h, f, p).len() != 1 {
                return false;
            }
        }
        true
    }
}

impl FieldTower {
    /// Tower of degree `lcm(q_degree * m)` over `F_p`, with `q = p^q_degree`.
    pub fn build(p: u64, q_degree: u32, degrees_needed: &[u32]) -> Result<Self, FieldError> {
        Self::build_bounded(p, q_degree, degrees_needed, DEFAULT_FIELD_BOUND)
    }

    pub fn build_bounded(p: u64, q_degree: u32, degrees_needed: &[u32], bound: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if q_degree == 0 || degrees_needed.contains(&0) {
            return Err(FieldError::Invalid("degrees must be positive".into()));
        }
        let degree = degrees_needed
            .iter()
            .chain(std::iter::once(&1))
            .fold(1u32, |l, &m| {
                let t = q_degree * m;
                l / gcd(l, t) * t
            });
        let too_big = FieldError::BoundExceeded { p, degree, bound };
        let size = (p as u128).checked_pow(degree).filter(|&s| s <= bound as u128).ok_or(too_big)? as u32;
        let p = p as u32;
        let modulus = Self::smallest_irreducible(p, degree);
        let mut tower = Self { p, degree, q_degree, modulus, size, exp: Vec::new(), log: Vec::new(), zech: Vec::new() };
        tower.build_tables();
        Ok(tower)
    }

    /// Lexicographically smallest monic irreducible of the given degree,
    /// comparing coefficient sequences from the constant term.
    fn smallest_irreducible(p: u32, degree: u32) -> Vec<u32> {
        let n = degree as usize;
        let count = (p as u64).pow(degree);
        for idx in 0..count {
            // The constant term is the most significant digit of `idx`.
            let mut f = vec![0u32; n + 1];
            let mut rest = idx;
            for i in (0..n).rev() {
                f[i] = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            f[n] = 1;
            if poly::is_irreducible(&f, p) {
                return f;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn to_poly(&self, x: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.degree as usize);
        let mut x = x;
        for _ in 0..self.degree {
            v.push(x % self.p);
            x /= self.p;
        }
        poly::trim(v)
    }

    fn poly_code(&self, v: &[u32]) -> u32 {
        v.iter().rev().fold(0u32, |acc, &c| acc * self.p + c)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        self.poly_code(&poly::mul_mod(&self.to_poly(a), &self.to_poly(b), &self.modulus, self.p))
    }

    fn build_tables(&mut self) {
        let order = self.size - 1;
        let mut candidate = if self.degree > 1 { self.p } else { 1 };
        loop {
            let mut exp = Vec::with_capacity(order as usize);
            let mut x = 1u32;
            let mut primitive = true;
            for k in 0..order {
                if k > 0 && x == 1 {
                    primitive = false;
                    break;
                }
                exp.push(x);
                x = self.slow_mul(x, candidate);
            }
            if primitive && x == 1 {
                let mut log = vec![0u32; self.size as usize];
                for (k, &e) in exp.iter().enumerate() {
                    log[e as usize] = k as u32;
                }
                if self.p != 2 {
                    self.zech = exp
                        .iter()
                        .map(|&e| match self.digit_add(1, e) {
                            0 => u32::MAX,
                            x => log[x as usize],
                        })
                        .collect();
                }
                exp.extend_from_within(..);
                self.exp = exp;
                self.log = log;
                return;
            }
            candidate += 1;
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// `N`, the degree of the top field over `F_p`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn q_degree(&self) -> u32 {
        self.q_degree
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.q_degree)
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Coefficient vector over `F_p`, constant term first, length `N`.
    pub fn coefficients(&self, x: Fe) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.degree as usize);
        let mut c = x.0;
        for _ in 0..self.degree {
            v.push(c % self.p);
            c /= self.p;
        }
        v
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<Fe, FieldError> {
        if coeffs.len() > self.degree as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(FieldError::Invalid(format!("bad coefficient vector {coeffs:?}")));
        }
        Ok(Fe(self.poly_code(coeffs)))
    }

    /// The class of `t`, the root of the modulus.
    pub fn generator(&self) -> Fe {
        if self.degree == 1 {
            // The modulus is linear, `t` is minus its constant term.
            Fe((self.p - self.modulus[0]) % self.p)
        } else {
            Fe(self.p)
        }
    }

    pub fn from_int(&self, n: u64) -> Fe {
        Fe((n % self.p as u64) as u32)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        // a + b = a (1 + b / a)
        let order = self.size - 1;
        let (la, lb) = (self.log[a.0 as usize], self.log[b.0 as usize]);
        let d = if lb >= la { lb - la } else { lb + order - la };
        match self.zech[d as usize] {
            u32::MAX => Fe::ZERO,
            z => Fe(self.exp[(la + z) as usize]),
        }
    }

    fn digit_add(&self, a: u32, b: u32) -> u32 {
        let (mut x, mut y, mut out, mut place) = (a, b, 0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        if a.0 == 0 {
            return a;
        }
        // -1 = g^{(size - 1) / 2} in odd characteristic.
        Fe(self.exp[(self.log[a.0 as usize] + (self.size - 1) / 2) as usize])
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        Fe(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let order = self.size - 1;
        Ok(Fe(self.exp[((order - self.log[a.0 as usize]) % order) as usize]))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let order = self.size as u64 - 1;
        let k = (self.log[a.0 as usize] as u64 * (e % order)) % order;
        Fe(self.exp[k as usize])
    }

    /// `x -> x^q`.
    pub fn frobenius_q(&self, a: Fe) -> Fe {
        self.pow(a, self.q())
    }

    pub fn contains_degree(&self, k: u32) -> bool {
        k > 0 && self.degree.is_multiple_of(k)
    }

    pub fn in_subfield(&self, a: Fe, k: u32) -> bool {
        self.pow(a, (self.p as u64).pow(k)) == a
    }

    /// All elements of `F_{p^k}`, sorted by code.
    pub fn subfield_elements(&self, k: u32) -> Result<Vec<Fe>, FieldError> {
        if !self.contains_degree(k) {
            return Err(FieldError::NotASubfield(k));
        }
        let sub_order = (self.p as u64).pow(k) - 1;
        let step = (self.size as u64 - 1) / sub_order;
        let mut out: Vec<Fe> = std::iter::once(Fe::ZERO)
            .chain((0..sub_order).map(|j| Fe(self.exp[(j * step) as usize])))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Elements of every code, `0..size`.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.size).map(Fe)
    }
}
