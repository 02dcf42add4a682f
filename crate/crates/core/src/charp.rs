//! Brute-force characteristic-p checks: `ν(q) = max{r : 𝔞^r ⊄ (x_1^q, …, x_n^q)}`
//! by truncated expansion over `F_p`, the lower bound it must satisfy against
//! an exact certificate, and the closed-form coefficient behind that bound.
//!
//! Truncation is exact for this purpose: a polynomial lies in the monomial
//! ideal `(x_i^q)` iff each of its terms does, and a term with some exponent
//! `>= q` stays there under multiplication.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::engine::LctCertificate;
use crate::ideal::IdealSpec;
use crate::rational::{lcm_of_denominators, Rational};

/// Term multiplications allowed per [`nu`] call unless overridden.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// The oracle packs exponents into fixed arrays.
pub const MAX_VARS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharpError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("Frobenius exponent e must be at least 1")]
    ZeroExponent,
    #[error("p = {p} divides the numerator or denominator of the coefficient of binomial {generator}")]
    CoefficientDivisible { generator: usize, p: u64 },
    #[error("term budget of {budget} multiplications exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("instance outside oracle limits: {0}")]
    TooLarge(String),
    #[error("certificate is only an upper bound")]
    NotExact,
    #[error("p = {p} is not 1 mod {modulus}")]
    ModulusMismatch { p: u64, modulus: u64 },
    #[error("polynomials over different primes ({0} and {1})")]
    MixedModulus(u64, u64),
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(p)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// `C(a, b) mod p` for `a, b < p`.
fn small_binom(a: u64, b: u64, p: u64) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..b {
        num = mul_mod(num, (a - i) % p, p);
        den = mul_mod(den, (i + 1) % p, p);
    }
    mul_mod(num, pow_mod(den, p - 2, p), p)
}

/// `C(m, n) mod p` as the product of digitwise binomials in base `p`.
pub fn lucas_binom(mut m: u64, mut n: u64, p: u64) -> u64 {
    assert!(is_prime(p), "lucas_binom needs a prime modulus");
    let mut acc = 1 % p;
    while n > 0 || m > 0 {
        let (md, nd) = (m % p, n % p);
        if nd > md {
            return 0;
        }
        acc = mul_mod(acc, small_binom(md, nd, p), p);
        m /= p;
        n /= p;
    }
    acc
}

/// A rational reduced mod `p`, or `None` if `p` divides its numerator or
/// denominator.
pub fn reduce_mod(value: &Rational, p: u64) -> Option<u64> {
    let modulus = BigInt::from(p);
    let num = value.numer().mod_floor(&modulus).to_u64()?;
    let den = value.denom().mod_floor(&modulus).to_u64()?;
    if num == 0 || den == 0 {
        return None;
    }
    Some(mul_mod(num, pow_mod(den, p - 2, p), p))
}

type Exp = [u16; MAX_VARS];

/// Sparse polynomial over `F_p` in at most [`MAX_VARS`] variables. No zero
/// coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePoly {
    modulus: u64,
    vars: usize,
    terms: HashMap<Exp, u64>,
}

fn pack(exponents: &[u32]) -> Option<Exp> {
    let mut e = [0u16; MAX_VARS];
    for (slot, &v) in e.iter_mut().zip(exponents) {
        *slot = u16::try_from(v).ok()?;
    }
    Some(e)
}

impl PrimePoly {
    pub fn zero(modulus: u64, vars: usize) -> Self {
        assert!(vars <= MAX_VARS, "at most {MAX_VARS} variables");
        Self { modulus, vars, terms: HashMap::new() }
    }

    pub fn one(modulus: u64, vars: usize) -> Self {
        Self::monomial(modulus, &vec![0; vars], 1)
    }

    pub fn monomial(modulus: u64, exponents: &[u32], coeff: u64) -> Self {
        let mut f = Self::zero(modulus, exponents.len());
        f.add_term(pack(exponents).expect("exponents fit in 16 bits"), coeff);
        f
    }

    /// `x^plus - γ·x^minus` for `γ` already reduced mod `p`.
    pub fn binomial(modulus: u64, plus: &[u32], minus: &[u32], gamma: u64) -> Self {
        let mut f = Self::monomial(modulus, plus, 1);
        f.add_term(pack(minus).expect("exponents fit in 16 bits"), modulus - gamma % modulus);
        f
    }

    fn add_term(&mut self, e: Exp, coeff: u64) {
        let c = coeff % self.modulus;
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(e).or_insert(0);
        *slot = (*slot + c) % self.modulus;
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> u64 {
        pack(exponents).and_then(|e| self.terms.get(&e).copied()).unwrap_or(0)
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> BTreeMap<Vec<u32>, u64> {
        self.terms.iter().map(|(e, &c)| (e[..self.vars].iter().map(|&v| u32::from(v)).collect(), c)).collect()
    }

    /// Drops every term with an exponent `>= q`.
    pub fn truncated(&self, q: u64) -> Self {
        let mut out = self.clone();
        out.terms.retain(|e, _| e.iter().all(|&v| u64::from(v) < q));
        out
    }
}

/// Product with every term having some exponent `>= q` deleted.
pub fn poly_mul_truncated(f: &PrimePoly, g: &PrimePoly, q: u64) -> Result<PrimePoly, CharpError> {
    let mut unlimited = u64::MAX;
    mul_truncated(f, g, q, &mut unlimited)
}

fn mul_truncated(f: &PrimePoly, g: &PrimePoly, q: u64, budget: &mut u64) -> Result<PrimePoly, CharpError> {
    if f.modulus != g.modulus {
        return Err(CharpError::MixedModulus(f.modulus, g.modulus));
    }
    let cost = (f.len() as u64).saturating_mul(g.len() as u64);
    if cost > *budget {
        return Err(CharpError::BudgetExceeded { budget: 0 });
    }
    *budget -= cost;
    let p = f.modulus;
    let vars = f.vars.max(g.vars);
    let mut out = PrimePoly::zero(p, vars);
    for (ea, &ca) in &f.terms {
        'terms: for (eb, &cb) in &g.terms {
            let mut e = [0u16; MAX_VARS];
            for i in 0..vars {
                let s = u64::from(ea[i]) + u64::from(eb[i]);
                if s >= q {
                    continue 'terms;
                }
                e[i] = s as u16;
            }
            out.add_term(e, mul_mod(ca, cb, p));
        }
    }
    Ok(out)
}

/// A generator reduced mod `p`: `x^plus - γ x^minus`, or a monomial.
#[derive(Debug, Clone)]
enum Reduced {
    Binomial { plus: Vec<u32>, minus: Vec<u32>, gamma: u64 },
    Monomial(Vec<u32>),
}

/// Binomials in order, then monomials, with coefficients reduced mod `p`.
fn reduce_generators(spec: &IdealSpec, p: u64) -> Result<Vec<Reduced>, CharpError> {
    let mut out = Vec::new();
    for (i, g) in spec.binomials().iter().enumerate() {
        let gamma = reduce_mod(g.coeff(), p).ok_or(CharpError::CoefficientDivisible { generator: i, p })?;
        out.push(Reduced::Binomial { plus: g.plus().to_vec(), minus: g.minus().to_vec(), gamma });
    }
    out.extend(spec.monomials().iter().map(|m| Reduced::Monomial(m.exponents().to_vec())));
    Ok(out)
}

/// `g^k` truncated at `q`, in closed form.
fn truncated_power(g: &Reduced, k: u64, p: u64, q: u64, vars: usize) -> PrimePoly {
    let scaled = |v: &[u32], s: u64| -> Option<Vec<u32>> {
        v.iter()
            .map(|&e| {
                let t = u64::from(e) * s;
                (t < q).then_some(t as u32)
            })
            .collect()
    };
    let mut out = PrimePoly::zero(p, vars);
    match g {
        Reduced::Monomial(c) => {
            if let Some(e) = scaled(c, k) {
                out.add_term(pack(&e).expect("exponent below q"), 1);
            }
        }
        Reduced::Binomial { plus, minus, gamma } => {
            let neg_gamma = (p - gamma % p) % p;
            // Σ_s C(k, s) x^{s·plus} (-γ)^{k-s} x^{(k-s)·minus}; distinct s give
            // distinct exponents because plus ≠ minus.
            for s in 0..=k {
                let Some(e) = plus
                    .iter()
                    .zip(minus)
                    .map(|(&a, &b)| {
                        let t = u64::from(a) * s + u64::from(b) * (k - s);
                        (t < q).then_some(t as u32)
                    })
                    .collect::<Option<Vec<u32>>>()
                else {
                    continue;
                };
                let c = mul_mod(lucas_binom(k, s, p), pow_mod(neg_gamma, k - s, p), p);
                out.add_term(pack(&e).expect("exponent below q"), c);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NuOptions {
    pub budget: u64,
    /// Where the search for ν begins; survival is downward closed, so the
    /// search ascends from here if `start` survives and descends otherwise.
    pub start: Option<u64>,
}

impl Default for NuOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, start: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuReport {
    pub p: u64,
    pub e: u32,
    pub q: u64,
    pub nu: u64,
    pub ratio: Rational,
    /// `value·(q-1)` from a certificate, when one was supplied.
    pub lower_bound: Option<Rational>,
    pub bound_satisfied: Option<bool>,
    /// Term multiplications spent.
    pub work: u64,
}

struct Oracle {
    gens: Vec<Reduced>,
    p: u64,
    q: u64,
    vars: usize,
    powers: HashMap<(usize, u64), PrimePoly>,
    budget: u64,
    limit: u64,
}

impl Oracle {
    fn new(spec: &IdealSpec, p: u64, e: u32, budget: u64) -> Result<Self, CharpError> {
        if !is_prime(p) {
            return Err(CharpError::NotPrime(p));
        }
        if e == 0 {
            return Err(CharpError::ZeroExponent);
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= u64::from(u16::MAX))
            .ok_or_else(|| CharpError::TooLarge(format!("{p}^{e} exceeds {}", u16::MAX)))?;
        let vars = spec.num_vars();
        if vars > MAX_VARS {
            return Err(CharpError::TooLarge(format!("{vars} variables, at most {MAX_VARS} supported")));
        }
        Ok(Self { gens: reduce_generators(spec, p)?, p, q, vars, powers: HashMap::new(), budget, limit: budget })
    }

    fn exhausted(&self) -> CharpError {
        CharpError::BudgetExceeded { budget: self.limit }
    }

    fn power(&mut self, i: usize, k: u64) -> Result<PrimePoly, CharpError> {
        if let Some(f) = self.powers.get(&(i, k)) {
            return Ok(f.clone());
        }
        let cost = k + 1;
        if cost > self.budget {
            return Err(self.exhausted());
        }
        self.budget -= cost;
        let f = truncated_power(&self.gens[i], k, self.p, self.q, self.vars);
        self.powers.insert((i, k), f.clone());
        Ok(f)
    }

    fn mul(&mut self, f: &PrimePoly, g: &PrimePoly) -> Result<PrimePoly, CharpError> {
        mul_truncated(f, g, self.q, &mut self.budget).map_err(|e| match e {
            CharpError::BudgetExceeded { .. } => self.exhausted(),
            other => other,
        })
    }

    /// Does some `Π g_j^{r_j}` with `Σ r_j = r` survive truncation?
    fn survives(&mut self, r: u64) -> Result<bool, CharpError> {
        let one = PrimePoly::one(self.p, self.vars);
        self.search(0, r, &one)
    }

    fn search(&mut self, i: usize, remaining: u64, prefix: &PrimePoly) -> Result<bool, CharpError> {
        let last = i + 1 == self.gens.len();
        let range = if last { remaining..=remaining } else { 0..=remaining };
        for k in range {
            let product = if k == 0 {
                prefix.clone()
            } else {
                let g = self.power(i, k)?;
                if g.is_zero() {
                    // Higher powers are multiples of this one.
                    break;
                }
                self.mul(prefix, &g)?
            };
            if product.is_zero() {
                break;
            }
            if last || self.search(i + 1, remaining - k, &product)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// `𝔞^r ⊄ (x_1^q, …, x_n^q)` for `q = p^e`.
pub fn survives(spec: &IdealSpec, r: u64, p: u64, e: u32, budget: u64) -> Result<bool, CharpError> {
    Oracle::new(spec, p, e, budget)?.survives(r)
}

/// [`nu_with`] under default options.
pub fn nu(spec: &IdealSpec, p: u64, e: u32) -> Result<NuReport, CharpError> {
    nu_with(spec, p, e, &NuOptions::default())
}

pub fn nu_with(spec: &IdealSpec, p: u64, e: u32, options: &NuOptions) -> Result<NuReport, CharpError> {
    let mut oracle = Oracle::new(spec, p, e, options.budget)?;
    let q = oracle.q;
    // Every product of r generators has total degree >= r, and surviving
    // terms have total degree <= n(q-1).
    let ceiling = spec.num_vars() as u64 * (q - 1);
    let start = options.start.unwrap_or(0).min(ceiling + 1);
    let nu = if oracle.survives(start)? {
        let mut r = start;
        while r < ceiling && oracle.survives(r + 1)? {
            r += 1;
        }
        r
    } else {
        let mut r = start - 1;
        while !oracle.survives(r)? {
            r -= 1;
        }
        r
    };
    Ok(NuReport {
        p,
        e,
        q,
        nu,
        ratio: Rational::new(BigInt::from(nu), BigInt::from(q)),
        lower_bound: None,
        bound_satisfied: None,
        work: oracle.limit - oracle.budget,
    })
}

/// `value·(q-1)` for `q = p^e`.
pub fn certificate_bound(cert: &LctCertificate, q: u64) -> Rational {
    &cert.value * Rational::from_integer(BigInt::from(q - 1))
}

/// ν with the search started at the certificate bound, and the bound recorded.
pub fn nu_against(
    spec: &IdealSpec,
    cert: &LctCertificate,
    p: u64,
    e: u32,
    budget: u64,
) -> Result<NuReport, CharpError> {
    let q = p.checked_pow(e).ok_or_else(|| CharpError::TooLarge(format!("{p}^{e} overflows")))?;
    let bound = certificate_bound(cert, q);
    let start = bound.floor().to_integer().to_u64().unwrap_or(0);
    let mut report = nu_with(spec, p, e, &NuOptions { budget, start: Some(start) })?;
    report.bound_satisfied = Some(Rational::from_integer(BigInt::from(report.nu)) >= bound);
    report.lower_bound = Some(bound);
    Ok(report)
}

/// Least common multiple of the denominators of an exact certificate's
/// witness.
pub fn n_modulus(cert: &LctCertificate) -> Result<u64, CharpError> {
    let witness = cert.criterion_witness.as_ref().ok_or(CharpError::NotExact)?;
    lcm_of_denominators(witness).to_u64().ok_or_else(|| CharpError::TooLarge("denominator lcm exceeds 64 bits".into()))
}

fn check_modulus(cert: &LctCertificate, p: u64) -> Result<u64, CharpError> {
    let modulus = n_modulus(cert)?;
    if !is_prime(p) {
        return Err(CharpError::NotPrime(p));
    }
    if p % modulus != 1 % modulus {
        return Err(CharpError::ModulusMismatch { p, modulus });
    }
    Ok(modulus)
}

/// `ν(q) >= value·(q-1)`. Requires an exact certificate and `p ≡ 1 mod N`.
pub fn fpt_lower_check(spec: &IdealSpec, cert: &LctCertificate, p: u64, e: u32) -> Result<bool, CharpError> {
    fpt_lower_check_with(spec, cert, p, e, DEFAULT_BUDGET)
}

pub fn fpt_lower_check_with(
    spec: &IdealSpec,
    cert: &LctCertificate,
    p: u64,
    e: u32,
    budget: u64,
) -> Result<bool, CharpError> {
    check_modulus(cert, p)?;
    let report = nu_against(spec, cert, p, e, budget)?;
    Ok(report.bound_satisfied == Some(true))
}

/// Witness entries times `q-1`, as integers.
fn scaled_witness(cert: &LctCertificate, q: u64) -> Vec<u64> {
    let scale = Rational::from_integer(BigInt::from(q - 1));
    cert.solution
        .iter()
        .map(|v| {
            let t = v * &scale;
            debug_assert!(t.is_integer());
            t.to_integer().to_u64().expect("scaled witness entry is a small nonnegative integer")
        })
        .collect()
}

/// `Π_i (-γ_i)^{ν_i(q-1)} C((μ_i+ν_i)(q-1), μ_i(q-1)) mod p`.
pub fn coefficient_witness(spec: &IdealSpec, cert: &LctCertificate, p: u64, e: u32) -> Result<u64, CharpError> {
    check_modulus(cert, p)?;
    if e == 0 {
        return Err(CharpError::ZeroExponent);
    }
    let q = p.checked_pow(e).ok_or_else(|| CharpError::TooLarge(format!("{p}^{e} overflows")))?;
    let w = scaled_witness(cert, q);
    let r = cert.binomials;
    let mut acc = 1 % p;
    for (i, g) in spec.binomials().iter().enumerate() {
        let gamma = reduce_mod(g.coeff(), p).ok_or(CharpError::CoefficientDivisible { generator: i, p })?;
        let (mu, nu) = (w[i], w[r + i]);
        acc = mul_mod(acc, pow_mod((p - gamma) % p, nu, p), p);
        acc = mul_mod(acc, lucas_binom(mu + nu, mu, p), p);
    }
    Ok(acc)
}

/// The exponent `m` of the witness monomial and its coefficient in the
/// truncated expansion of `Π f_i^{(μ_i+ν_i)(q-1)} Π g_j^{λ_j(q-1)}`.
pub fn expansion_coefficient(
    spec: &IdealSpec,
    cert: &LctCertificate,
    p: u64,
    e: u32,
    budget: u64,
) -> Result<(Vec<u32>, u64), CharpError> {
    check_modulus(cert, p)?;
    let mut oracle = Oracle::new(spec, p, e, budget)?;
    let q = oracle.q;
    let w = scaled_witness(cert, q);
    let (r, n) = (cert.binomials, spec.num_vars());
    let mut m = vec![0u64; n];
    for (i, g) in spec.binomials().iter().enumerate() {
        for (v, slot) in m.iter_mut().enumerate() {
            *slot += u64::from(g.plus()[v]) * w[i] + u64::from(g.minus()[v]) * w[r + i];
        }
    }
    for (j, g) in spec.monomials().iter().enumerate() {
        for (slot, &c) in m.iter_mut().zip(g.exponents().iter()) {
            *slot += u64::from(c) * w[2 * r + j];
        }
    }
    let m: Vec<u32> = m.into_iter().map(|v| v as u32).collect();
    let mut product = PrimePoly::one(p, n);
    let exponents: Vec<u64> = (0..r).map(|i| w[i] + w[r + i]).chain(w[2 * r..].iter().copied()).collect();
    for (i, &k) in exponents.iter().enumerate() {
        if k.is_zero() {
            continue;
        }
        let g = oracle.power(i, k)?;
        product = oracle.mul(&product, &g)?;
    }
    Ok((m.clone(), product.coefficient(&m)))
}

/// `p ≡ 1 mod N` for an exact certificate; `None` when there is no witness.
pub fn modulus_matches(cert: &LctCertificate, p: u64) -> Option<bool> {
    let modulus = n_modulus(cert).ok()?;
    Some(p % modulus == 1 % modulus)
}
