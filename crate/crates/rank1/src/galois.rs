//! Finite-field machinery for the algebraic spacer families.
//!
//! Spacers of the form `s_j(i) = r_j + {q^i} - {q^(i+1)}` (with `q` a
//! generator of `F_p`) and the trace variant over `F_(b^n)` replace random
//! draws by quasi-random algebraic sequences. Everything here is exact
//! u64/u128 arithmetic; field elements of `F_(b^n)` are coefficient vectors
//! of polynomials modulo a monic irreducible found by deterministic search.

use crate::rule::{is_prime, mul_mod, pow_mod};
use crate::{Error, Result};

/// Smallest multiplicative generator modulo the prime `p`.
pub fn primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(1);
    }
    let order = p - 1;
    let factors = distinct_prime_factors(order);
    'cand: for g in 2..p {
        for q in &factors {
            if pow_mod(g, order / q, p) == 1 {
                continue 'cand;
            }
        }
        return Ok(g);
    }
    Err(Error::NoGenerator(format!("no generator mod {p}")))
}

/// Is `i -> {g^i} - {g^(i+window)}` injective on `i = 0..count-1`?
///
/// `count` defaults to `p - window` (the full usable range). Distinctness is
/// checked by marking achieved differences; no algebra is assumed.
pub fn injectivity_window(p: u64, g: u64, window: u64, count: Option<u64>) -> bool {
    let count = count.unwrap_or(p.saturating_sub(window));
    if count == 0 {
        return true;
    }
    let mut seen = vec![false; (2 * p) as usize];
    let mut lead = pow_mod(g, window, p); // g^(i+window)
    let mut cur = 1u64; // g^i
    for _ in 0..count {
        let d = (cur + p - lead) as usize; // (cur - lead) shifted by p
        if seen[d] {
            return false;
        }
        seen[d] = true;
        cur = mul_mod(cur, g, p);
        lead = mul_mod(lead, g, p);
    }
    true
}

pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m < 2 {
            continue;
        }
        if is_prime(m) {
            if !out.contains(&m) {
                out.push(m);
            }
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.sort_unstable();
    out
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = (mul_mod(x, x, n) + c) % n;
            y = (mul_mod(y, y, n) + c) % n;
            y = (mul_mod(y, y, n) + c) % n;
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The field `F_(b^n)` as polynomials over `F_b` modulo a monic irreducible.
///
/// Elements are little-endian coefficient vectors of length `n`.
#[derive(Clone, Debug)]
pub struct FieldExt {
    pub base: u64,
    pub degree: usize,
    /// Monic modulus, length `degree + 1`, leading coefficient 1.
    pub modulus: Vec<u64>,
    /// Multiplicative group order `b^n - 1`.
    pub order: u64,
}

impl FieldExt {
    /// Construct `F_(b^n)` with the lexicographically smallest monic
    /// irreducible of degree `n`, found by deterministic search.
    pub fn new(base: u64, degree: usize) -> Result<FieldExt> {
        if !is_prime(base) {
            return Err(Error::NotPrime(base));
        }
        if degree == 0 {
            return Err(Error::InvalidParam("field degree must be >= 1".into()));
        }
        let order = checked_pow(base, degree)?
            .checked_sub(1)
            .ok_or_else(|| Error::InvalidParam("field order underflow".into()))?;
        let modulus = find_irreducible(base, degree)?;
        Ok(FieldExt { base, degree, modulus, order })
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.degree]
    }

    pub fn one(&self) -> Vec<u64> {
        let mut e = self.zero();
        e[0] = 1;
        e
    }

    pub fn x(&self) -> Vec<u64> {
        if self.degree == 1 {
            // x reduces to -modulus[0]
            let c = (self.base - self.modulus[0] % self.base) % self.base;
            vec![c]
        } else {
            let mut e = self.zero();
            e[1] = 1;
            e
        }
    }

    pub fn is_one(&self, e: &[u64]) -> bool {
        e[0] == 1 && e[1..].iter().all(|&c| c == 0)
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.degree;
        let p = self.base;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(ai, bj, p)) % p;
            }
        }
        // reduce: x^n = -(modulus[0..n])
        for d in (n..2 * n - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for k in 0..n {
                let m = self.modulus[k];
                if m != 0 {
                    let sub = mul_mod(c, m, p);
                    prod[d - n + k] = (prod[d - n + k] + p - sub % p) % p;
                }
            }
        }
        prod.truncate(n);
        prod
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut base = a.to_vec();
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

    /// `tr(e) = e + e^b + e^(b^2) + ... + e^(b^(n-1))`, an element of `F_b`.
    pub fn trace(&self, e: &[u64]) -> Result<u64> {
        let mut frob = e.to_vec();
        let mut acc = e.to_vec();
        for _ in 1..self.degree {
            frob = self.pow(&frob, self.base);
            for (a, f) in acc.iter_mut().zip(&frob) {
                *a = (*a + f) % self.base;
            }
        }
        if acc[1..].iter().any(|&c| c != 0) {
            return Err(Error::NotIrreducible(format!(
                "trace left the prime field; modulus {:?} over F_{} is not irreducible",
                self.modulus, self.base
            )));
        }
        Ok(acc[0])
    }

    /// `tr(x^k)` for `k = 0..degree`. The trace is `F_b`-linear, so
    /// `tr(e) = sum_k e_k tr(x^k)` — the cheap path when many traces of the
    /// same field are needed.
    pub fn trace_table(&self) -> Result<Vec<u64>> {
        (0..self.degree)
            .map(|k| {
                let mut e = self.zero();
                e[k] = 1;
                self.trace(&e)
            })
            .collect()
    }

    /// Trace via a precomputed [`FieldExt::trace_table`].
    pub fn trace_with_table(&self, e: &[u64], table: &[u64]) -> u64 {
        let mut acc = 0u64;
        for (c, t) in e.iter().zip(table) {
            acc = (acc + mul_mod(*c, *t, self.base)) % self.base;
        }
        acc
    }

    /// Smallest (in the search order) generator of the multiplicative group.
    pub fn generator(&self) -> Result<Vec<u64>> {
        let factors = distinct_prime_factors(self.order);
        let mut counter = vec![0u64; self.degree];
        'outer: loop {
            if !increment(&mut counter, self.base) {
                return Err(Error::NoGenerator(format!(
                    "F_{}^{} exhausted without a generator",
                    self.base, self.degree
                )));
            }
            for q in &factors {
                if self.is_one(&self.pow(&counter, self.order / q)) {
                    continue 'outer;
                }
            }
            return Ok(counter.clone());
        }
    }
}

fn checked_pow(b: u64, n: usize) -> Result<u64> {
    let mut acc: u64 = 1;
    for _ in 0..n {
        acc = acc
            .checked_mul(b)
            .filter(|&v| v <= 1 << 62)
            .ok_or_else(|| Error::InvalidParam(format!("field order {b}^{n} out of range")))?;
    }
    Ok(acc)
}

fn increment(counter: &mut [u64], base: u64) -> bool {
    for c in counter.iter_mut() {
        *c += 1;
        if *c < base {
            return true;
        }
        *c = 0;
    }
    false
}

/// Lexicographically smallest monic irreducible of degree `n` over `F_b`,
/// by exhaustive counter search with a Rabin irreducibility test.
pub fn find_irreducible(base: u64, degree: usize) -> Result<Vec<u64>> {
    if degree == 1 {
        return Ok(vec![0, 1]); // x itself
    }
    let mut low = vec![0u64; degree];
    low[0] = 1; // constant term nonzero is necessary
    loop {
        let mut f = low.clone();
        f.push(1);
        if rabin_irreducible(base, &f) {
            return Ok(f);
        }
        if !increment(&mut low, base) {
            return Err(Error::NotIrreducible(format!(
                "no monic irreducible of degree {degree} over F_{base}"
            )));
        }
    }
}

/// Rabin test: `f` (monic, degree n) is irreducible over `F_b` iff
/// `x^(b^n) == x (mod f)` and `gcd(x^(b^(n/q)) - x, f) = 1` for every prime
/// `q | n`.
fn rabin_irreducible(base: u64, f: &[u64]) -> bool {
    let n = f.len() - 1;
    let xq = |e: usize| -> Vec<u64> {
        // x^(b^e) mod f via e-fold Frobenius of x
        let mut cur = poly_x(n);
        for _ in 0..e {
            cur = poly_pow_mod(base, &cur, base, f);
        }
        cur
    };
    let x = poly_x(n);
    let mut t = xq(n);
    poly_sub(base, &mut t, &x);
    if !poly_is_zero(&t) {
        return false;
    }
    for q in distinct_prime_factors(n as u64) {
        let mut t = xq(n / q as usize);
        poly_sub(base, &mut t, &x);
        if poly_gcd_is_one(base, &t, f).is_none() {
            return false;
        }
    }
    true
}

fn poly_x(n: usize) -> Vec<u64> {
    let mut v = vec![0u64; n.max(2)];
    v[1] = 1;
    v
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn poly_sub(p: u64, a: &mut Vec<u64>, b: &[u64]) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (i, &c) in b.iter().enumerate() {
        a[i] = (a[i] + p - c % p) % p;
    }
}

fn poly_mul_mod(p: u64, a: &[u64], b: &[u64], f: &[u64]) -> Vec<u64> {
    let n = f.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(ai, bj, p)) % p;
        }
    }
    for d in (n..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for k in 0..n {
            if f[k] != 0 {
                let sub = mul_mod(c, f[k], p);
                prod[d - n + k] = (prod[d - n + k] + p - sub % p) % p;
            }
        }
    }
    prod.truncate(n.max(2));
    prod
}

fn poly_pow_mod(p: u64, a: &[u64], mut e: u64, f: &[u64]) -> Vec<u64> {
    let mut base = a.to_vec();
    let mut acc = vec![0u64; 2];
    acc[0] = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(p, &acc, &base, f);
        }
        base = poly_mul_mod(p, &base, &base, f);
        e >>= 1;
    }
    acc
}

/// `Some(())` if `gcd(a, f) = 1`; `None` otherwise.
fn poly_gcd_is_one(p: u64, a: &[u64], f: &[u64]) -> Option<()> {
    let mut x = f.to_vec();
    let mut y = a.to_vec();
    loop {
        trim(&mut y);
        if y.is_empty() {
            trim(&mut x);
            return if x.len() == 1 { Some(()) } else { None };
        }
        poly_rem(p, &mut x, &y);
        std::mem::swap(&mut x, &mut y);
    }
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(p: u64, a: &mut Vec<u64>, b: &[u64]) {
    let mut bb = b.to_vec();
    trim(&mut bb);
    let db = bb.len() - 1;
    let lead_inv = pow_mod(bb[db], p - 2, p);
    trim(a);
    while a.len() > db {
        let da = a.len() - 1;
        let c = mul_mod(a[da], lead_inv, p);
        if c != 0 {
            for k in 0..=db {
                let sub = mul_mod(c, bb[k], p);
                a[da - db + k] = (a[da - db + k] + p - sub % p) % p;
            }
        }
        trim(a);
        if a.is_empty() {
            break;
        }
    }
}

/// Injectivity of `i -> {q_j^i} - {q_j^(i+window)}` for stage `j` of a
/// primitive-root schedule, using that stage's prime and generator.
pub fn validate_injectivity(
    schedule: &crate::schedule::Schedule,
    j: u64,
    window: u64,
) -> Result<bool> {
    match schedule.aux(j)? {
        Some(crate::schedule::StageAux::GaloisPrime { p, generator }) => {
            if window == 0 || window >= p {
                return Err(Error::InvalidParam(format!(
                    "window {window} out of range for prime {p}"
                )));
            }
            Ok(injectivity_window(p, generator, window, None))
        }
        _ => Err(Error::InvalidParam(
            "injectivity validation needs a galois-primitive schedule".into(),
        )),
    }
}

/// `tr(q^i)` for `i = 0..count-1`, with `q` the found generator of
/// `F_(b^n)`; values are integers in `[0, b)`.
pub fn trace_sequence(base: u64, degree: usize, count: usize) -> Result<Vec<u64>> {
    let field = FieldExt::new(base, degree)?;
    let g = field.generator()?;
    let table = field.trace_table()?;
    let mut out = Vec::with_capacity(count);
    let mut cur = field.one();
    for _ in 0..count {
        out.push(field.trace_with_table(&cur, &table));
        cur = field.mul(&cur, &g);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_roots() {
        // brute-force oracle: order of g mod p
        fn order(g: u64, p: u64) -> u64 {
            let mut x = g % p;
            let mut k = 1;
            while x != 1 {
                x = mul_mod(x, g, p);
                k += 1;
            }
            k
        }
        assert_eq!(primitive_root(2).unwrap(), 1);
        let g7 = primitive_root(7).unwrap();
        assert_eq!(g7, 3);
        assert_eq!(order(g7, 7), 6);
        assert_eq!(order(2, 7), 3); // 2 is not a generator mod 7
        let g11 = primitive_root(11).unwrap();
        assert_eq!(g11, 2);
        assert_eq!(order(g11, 11), 10);
        assert!(matches!(primitive_root(10), Err(Error::NotPrime(10))));
    }

    #[test]
    fn injectivity() {
        assert!(injectivity_window(7, 3, 2, None));
        // non-generator 2 mod 7 has order 3: window 3 collapses all differences
        assert!(!injectivity_window(7, 2, 3, None));
        // a window covering a single index is trivially injective
        assert!(injectivity_window(7, 3, 6, None));
    }

    #[test]
    fn f4_trace() {
        let f = FieldExt::new(2, 2).unwrap();
        assert_eq!(f.modulus, vec![1, 1, 1]); // x^2 + x + 1
        let seq = trace_sequence(2, 2, 3).unwrap();
        assert_eq!(seq, vec![0, 1, 1]); // tr(1), tr(q), tr(q^2)
    }

    #[test]
    fn f2_trace_is_identity() {
        let f = FieldExt::new(2, 1).unwrap();
        assert_eq!(f.trace(&[0]).unwrap(), 0);
        assert_eq!(f.trace(&[1]).unwrap(), 1);
    }

    #[test]
    fn f9_trace() {
        let f = FieldExt::new(3, 2).unwrap();
        assert_eq!(f.trace(&f.one()).unwrap(), 2); // 1 + 1 in F_3
    }

    #[test]
    fn generator_orders() {
        for (b, n) in [(2, 4), (3, 3), (5, 2)] {
            let f = FieldExt::new(b, n).unwrap();
            let g = f.generator().unwrap();
            // g has full order: g^(order/q) != 1 for prime divisors q
            for q in distinct_prime_factors(f.order) {
                assert!(!f.is_one(&f.pow(&g, f.order / q)));
            }
            assert!(f.is_one(&f.pow(&g, f.order)));
        }
    }

    #[test]
    fn factorisation() {
        assert_eq!(distinct_prime_factors(2u64.pow(30) - 1), vec![3, 7, 11, 31, 151, 331]);
        assert_eq!(distinct_prime_factors(600), vec![2, 3, 5]);
    }
}
