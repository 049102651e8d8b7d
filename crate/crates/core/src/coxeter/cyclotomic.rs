//! Exact arithmetic in the cyclotomic integers `Z[zeta_L]`.
//!
//! Root coordinates of the geometric representation live in
//! `Z[2cos(pi/m)]` for the entries `m` of the Coxeter matrix; all of these
//! embed in `Z[zeta_L]` with `L = lcm(2m)`. Elements are reduced modulo the
//! cyclotomic polynomial, so equality is representational.

/// `Z[zeta_L]` as `Z[x] / Phi_L(x)`; `Phi_L` is monic so reduction stays integral.
#[derive(Debug, Clone)]
pub(crate) struct CyclotomicRing {
    order: usize,
    /// Coefficients of `Phi_L`, constant term first; leading coefficient 1.
    modulus: Vec<i64>,
}

/// Coefficient vector of length `deg Phi_L`, constant term first.
pub(crate) type Cyclo = Vec<i64>;

fn poly_divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dl = den.len();
    let mut quot = vec![0i64; num.len() + 1 - dl];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dl - 1];
        quot[k] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// `Phi_n` via `x^n - 1 = prod_{d | n} Phi_d`.
fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    let mut p = vec![0i64; n + 1];
    p[0] = -1;
    p[n] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_divide_exact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl CyclotomicRing {
    /// The smallest ring containing `2cos(pi/m)` for every `m` given.
    pub fn for_orders(orders: impl IntoIterator<Item = u32>) -> Self {
        let order = orders
            .into_iter()
            .filter(|&m| m >= 3)
            .fold(1usize, |l, m| {
                let t = 2 * m as usize;
                l / gcd(l, t) * t
            });
        Self { order, modulus: cyclotomic_polynomial(order) }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn zero(&self) -> Cyclo {
        vec![0; self.degree()]
    }

    pub fn one(&self) -> Cyclo {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    /// Reduces an arbitrary-length coefficient vector modulo `Phi_L`.
    fn reduce(&self, mut v: Vec<i64>) -> Option<Cyclo> {
        let d = self.degree();
        for k in (d..v.len()).rev() {
            let c = v[k];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus.iter().enumerate() {
                let idx = k - d + i;
                v[idx] = v[idx].checked_sub(c.checked_mul(m)?)?;
            }
        }
        v.resize(d, 0);
        Some(v)
    }

    /// `2cos(pi/m) = zeta_L^k + zeta_L^{-k}` with `k = L / 2m`.
    pub fn two_cos_pi_over(&self, m: u32) -> Cyclo {
        if m == 2 {
            return self.zero();
        }
        let k = self.order / (2 * m as usize);
        let mut v = vec![0i64; self.order];
        v[k % self.order] += 1;
        v[(self.order - k) % self.order] += 1;
        self.reduce(v).expect("small coefficients")
    }

    pub fn add(&self, a: &Cyclo, b: &Cyclo) -> Option<Cyclo> {
        a.iter().zip(b).map(|(x, y)| x.checked_add(*y)).collect()
    }

    pub fn neg(&self, a: &Cyclo) -> Cyclo {
        a.iter().map(|x| -x).collect()
    }

    pub fn mul(&self, a: &Cyclo, b: &Cyclo) -> Option<Cyclo> {
        let mut prod = vec![0i64; (2 * self.degree()).max(1)];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = prod[i + j].checked_add(x.checked_mul(y)?)?;
            }
        }
        self.reduce(prod)
    }

    /// Numerical value of the real element `a`, using the embedding `zeta_L = e^{2 pi i / L}`.
    #[cfg(test)]
    pub fn to_f64(&self, a: &Cyclo) -> f64 {
        a.iter()
            .enumerate()
            .map(|(k, &c)| c as f64 * (2.0 * std::f64::consts::PI * k as f64 / self.order as f64).cos())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(10).len(), 5);
    }

    #[test]
    fn two_cos_values_match_floats() {
        let ring = CyclotomicRing::for_orders([3, 4, 5, 6]);
        for m in 2..=6 {
            let v = ring.two_cos_pi_over(m);
            let expect = 2.0 * (std::f64::consts::PI / m as f64).cos();
            assert!((ring.to_f64(&v) - expect).abs() < 1e-12, "m = {m}");
        }
        // 2cos(pi/3) = 1 exactly.
        let a2 = CyclotomicRing::for_orders([3]);
        assert_eq!(a2.two_cos_pi_over(3), a2.one());
    }

    #[test]
    fn squares_of_two_cos() {
        // (2cos(pi/4))^2 = 2, (2cos(pi/6))^2 = 3, (2cos(pi/5))^2 = 2cos(pi/5) + 1.
        let ring = CyclotomicRing::for_orders([4, 5, 6]);
        let one = ring.one();
        let c4 = ring.two_cos_pi_over(4);
        assert_eq!(ring.mul(&c4, &c4).unwrap(), ring.add(&one, &one).unwrap());
        let c6 = ring.two_cos_pi_over(6);
        let three = ring.add(&ring.add(&one, &one).unwrap(), &one).unwrap();
        assert_eq!(ring.mul(&c6, &c6).unwrap(), three);
        let c5 = ring.two_cos_pi_over(5);
        assert_eq!(ring.mul(&c5, &c5).unwrap(), ring.add(&c5, &one).unwrap());
    }
}
