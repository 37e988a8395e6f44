//! Univariate polynomials over a `FieldCtx`, plus deterministic irreducible
//! search.  "Lexicographically least" always means: enumerate monic
//! candidates x^d + c_{d-1} x^{d-1} + ... + c_0 in base-q counter order with
//! c_{d-1} most significant, coefficients of extension fields ordered by rank.

use super::{gf2, FieldCtx, FieldElem};
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};

/// Dense univariate polynomial, constant term first, trailing zeros trimmed.
/// The zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UPoly {
    coeffs: Vec<FieldElem>,
}

impl UPoly {
    pub fn zero() -> UPoly {
        UPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(ctx: &FieldCtx, mut coeffs: Vec<FieldElem>) -> UPoly {
        while coeffs.last().is_some_and(|&c| ctx.is_zero(c)) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    /// Builds from element ranks (constant term first).
    pub fn from_ranks(ctx: &FieldCtx, ranks: &[u64]) -> Result<UPoly> {
        let mut coeffs = Vec::with_capacity(ranks.len());
        for &r in ranks {
            if r >= ctx.q() {
                return Err(Error::UnreducedCoefficient(r, ctx.q()));
            }
            coeffs.push(ctx.elem_from_rank(r));
        }
        Ok(UPoly::from_coeffs(ctx, coeffs))
    }

    /// Element ranks, constant term first (empty for the zero polynomial).
    pub fn ranks(&self, ctx: &FieldCtx) -> Vec<u64> {
        self.coeffs.iter().map(|&c| ctx.rank(c)).collect()
    }

    pub fn x(ctx: &FieldCtx) -> UPoly {
        UPoly {
            coeffs: vec![ctx.zero(), ctx.one()],
        }
    }

    pub fn constant(ctx: &FieldCtx, e: FieldElem) -> UPoly {
        UPoly::from_coeffs(ctx, vec![e])
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or_else(FieldElem::zeroed)
    }

    pub fn leading(&self) -> Option<FieldElem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self, ctx: &FieldCtx) -> bool {
        self.leading().is_some_and(|l| ctx.is_one(l))
    }

    pub fn eval(&self, ctx: &FieldCtx, z: FieldElem) -> FieldElem {
        let mut acc = ctx.zero();
        for &c in self.coeffs.iter().rev() {
            acc = ctx.add(ctx.mul(acc, z), c);
        }
        acc
    }

    pub fn add(&self, ctx: &FieldCtx, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ctx.add(self.coeff(i), other.coeff(i)));
        }
        UPoly::from_coeffs(ctx, out)
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ctx.sub(self.coeff(i), other.coeff(i)));
        }
        UPoly::from_coeffs(ctx, out)
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if ctx.is_zero(a) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        UPoly::from_coeffs(ctx, out)
    }

    pub fn mul_elem(&self, ctx: &FieldCtx, e: FieldElem) -> UPoly {
        UPoly::from_coeffs(ctx, self.coeffs.iter().map(|&c| ctx.mul(c, e)).collect())
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, ctx: &FieldCtx) -> Result<UPoly> {
        let lead = self.leading().ok_or(Error::DivisionByZero(ctx.q()))?;
        Ok(self.mul_elem(ctx, ctx.inv(lead)?))
    }

    /// Remainder modulo a nonzero divisor.
    pub fn rem(&self, ctx: &FieldCtx, divisor: &UPoly) -> Result<UPoly> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero(ctx.q()))?;
        let lead_inv = ctx.inv(divisor.leading().unwrap())?;
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let c = ctx.mul(*r.last().unwrap(), lead_inv);
            let top = r.len() - 1;
            if !ctx.is_zero(c) {
                for j in 0..dd {
                    let t = ctx.mul(c, divisor.coeffs[j]);
                    r[top - dd + j] = ctx.sub(r[top - dd + j], t);
                }
            }
            r.pop();
        }
        Ok(UPoly::from_coeffs(ctx, r))
    }

    /// Monic gcd.
    pub fn gcd(ctx: &FieldCtx, a: &UPoly, b: &UPoly) -> Result<UPoly> {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = x.rem(ctx, &y)?;
            x = y;
            y = r;
        }
        if x.is_zero() {
            Ok(x)
        } else {
            x.monic(ctx)
        }
    }

    pub fn derivative(&self, ctx: &FieldCtx) -> UPoly {
        if self.coeffs.len() <= 1 {
            return UPoly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, &c) in self.coeffs.iter().enumerate().skip(1) {
            let mut s = ctx.zero();
            for _ in 0..(i as u64 % ctx.p()) {
                s = ctx.add(s, c);
            }
            out.push(s);
        }
        UPoly::from_coeffs(ctx, out)
    }

    /// True when gcd(f, f') = 1 (in particular the derivative must not vanish).
    pub fn is_squarefree(&self, ctx: &FieldCtx) -> Result<bool> {
        let d = self.derivative(ctx);
        if d.is_zero() {
            return Ok(self.degree() == Some(0));
        }
        Ok(UPoly::gcd(ctx, self, &d)?.degree() == Some(0))
    }

    /// base^e mod modulus.
    pub fn pow_mod(ctx: &FieldCtx, base: &UPoly, mut e: u64, modulus: &UPoly) -> Result<UPoly> {
        let mut b = base.rem(ctx, modulus)?;
        let mut acc = UPoly::constant(ctx, ctx.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ctx, &b).rem(ctx, modulus)?;
            }
            b = b.mul(ctx, &b).rem(ctx, modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Number of distinct roots in F_q, zero included: deg gcd(x^q - x, f).
    pub fn distinct_roots_in_field(&self, ctx: &FieldCtx) -> Result<u64> {
        match self.degree() {
            None => Err(Error::DivisionByZero(ctx.q())),
            Some(0) => Ok(0),
            Some(1) => Ok(1),
            Some(_) => {
                let xq = UPoly::pow_mod(ctx, &UPoly::x(ctx), ctx.q(), self)?;
                let g = UPoly::gcd(ctx, self, &xq.sub(ctx, &UPoly::x(ctx)))?;
                Ok(g.degree().unwrap_or(0) as u64)
            }
        }
    }

    /// Root count by exhaustive evaluation; the independent oracle for
    /// `distinct_roots_in_field`.
    pub fn distinct_roots_by_scan(&self, ctx: &FieldCtx) -> u64 {
        ctx.elements()
            .filter(|&z| ctx.is_zero(self.eval(ctx, z)))
            .count() as u64
    }

    /// Renders as a polynomial in `var`, e.g. "x^8 + 2*x^3 + 1".
    pub fn format(&self, ctx: &FieldCtx, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for i in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[i];
            if ctx.is_zero(c) {
                continue;
            }
            let cs = if ctx.k() == 1 {
                format!("{}", ctx.rank(c))
            } else {
                format!("({})", ctx.format_elem(c))
            };
            let part = match i {
                0 => cs,
                _ => {
                    let xs = if i == 1 {
                        var.to_string()
                    } else {
                        format!("{var}^{i}")
                    };
                    if ctx.is_one(c) {
                        xs
                    } else {
                        format!("{cs}*{xs}")
                    }
                }
            };
            parts.push(part);
        }
        parts.join(" + ")
    }
}

// ---------------------------------------------------------------------------
// Dense residue-vector arithmetic over a prime field (odd p).  Used only by
// the irreducible search, where element-struct overhead would dominate.
// ---------------------------------------------------------------------------

fn fp_trim(a: &mut Vec<u64>) {
    while let Some(&0) = a.last() {
        a.pop();
    }
}

fn fp_inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a != 0 mod p.
    let mut e = p - 2;
    let mut base = a % p;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Product of a and b reduced mod the monic polynomial f (constant first).
fn fp_modmul(p: u64, a: &[u64], b: &[u64], f: &[u64]) -> Vec<u64> {
    let d = f.len() - 1;
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut buf = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            buf[i + j] += ai * bj;
        }
    }
    for m in (d..buf.len()).rev() {
        let c = buf[m] % p;
        buf[m] = 0;
        if c == 0 {
            continue;
        }
        for j in 0..d {
            let neg = (p - f[j] % p) % p;
            if neg != 0 {
                buf[m - d + j] += c * neg;
            }
        }
    }
    buf.truncate(d);
    for v in buf.iter_mut() {
        *v %= p;
    }
    fp_trim(&mut buf);
    buf
}

fn fp_powmod(p: u64, g: &[u64], mut e: u64, f: &[u64]) -> Vec<u64> {
    let mut base = g.to_vec();
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_modmul(p, &acc, &base, f);
        }
        base = fp_modmul(p, &base, &base, f);
        e >>= 1;
    }
    acc
}

fn fp_rem(p: u64, a: &[u64], f: &[u64]) -> Vec<u64> {
    let d = f.len() - 1;
    let lead_inv = fp_inv_mod(f[d], p);
    let mut r: Vec<u64> = a.iter().map(|&c| c % p).collect();
    fp_trim(&mut r);
    while r.len() > d {
        let c = r.last().unwrap() * lead_inv % p;
        let top = r.len() - 1;
        if c != 0 {
            for j in 0..d {
                let sub = c * (f[j] % p) % p;
                r[top - d + j] = (r[top - d + j] + p - sub) % p;
            }
        }
        r.pop();
        fp_trim(&mut r);
    }
    r
}

fn fp_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    fp_trim(&mut x);
    fp_trim(&mut y);
    while !y.is_empty() {
        let r = fp_rem(p, &x, &y);
        x = y;
        y = r;
    }
    x
}

fn fp_is_irreducible(p: u64, f: &[u64]) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut g = x.clone();
    for j in 1..=d {
        g = fp_powmod(p, &g, p, f);
        if 2 * j <= d {
            // g - x
            let mut gx = g.clone();
            if gx.len() < 2 {
                gx.resize(2, 0);
            }
            gx[1] = (gx[1] + p - 1) % p;
            fp_trim(&mut gx);
            let h = fp_gcd(p, &gx, f);
            if h.len() != 1 {
                return false;
            }
        }
    }
    g == x
}

/// First t monic irreducibles of degree d over F_p in counter order
/// (constant term first in each result).
fn fp_first_irreducibles(p: u64, d: usize, t: usize) -> Vec<Vec<u64>> {
    if d == 1 {
        return (0..p.min(t as u64)).map(|c| vec![c, 1]).collect();
    }
    let mut out = Vec::with_capacity(t);
    // Little-endian base-p counter over the tail (c_0, ..., c_{d-1});
    // incrementing at digit 0 walks candidates in lexicographic order on
    // (c_{d-1}, ..., c_0).
    let mut tail = vec![0u64; d];
    loop {
        if tail[0] != 0 {
            let mut f = tail.clone();
            f.push(1);
            if fp_is_irreducible(p, &f) {
                out.push(f);
                if out.len() == t {
                    return out;
                }
            }
        }
        let mut i = 0;
        loop {
            assert!(i < d, "exhausted all degree-{d} candidates over F_{p}");
            tail[i] += 1;
            if tail[i] < p {
                break;
            }
            tail[i] = 0;
            i += 1;
        }
    }
}

/// Lexicographically least monic irreducible of degree k over F_p as a
/// residue vector (constant first).  Used to build `FieldCtx` moduli.
pub(crate) fn prime_field_irreducible(p: u64, k: usize) -> Vec<u64> {
    if p == 2 {
        let tail = gf2::first_irreducible_tails(k, 1)[0];
        let mut f = vec![0u64; k + 1];
        for (i, v) in f.iter_mut().enumerate().take(k) {
            *v = (tail >> i) & 1;
        }
        f[k] = 1;
        f
    } else {
        fp_first_irreducibles(p, k, 1).remove(0)
    }
}

// ---------------------------------------------------------------------------
// Public irreducibility API over an arbitrary FieldCtx.
// ---------------------------------------------------------------------------

fn generic_is_irreducible(ctx: &FieldCtx, f: &UPoly) -> Result<bool> {
    let d = match f.degree() {
        None | Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(d) => d,
    };
    let f = f.monic(ctx)?;
    let x = UPoly::x(ctx);
    let mut g = x.clone();
    for j in 1..=d {
        g = UPoly::pow_mod(ctx, &g, ctx.q(), &f)?;
        if 2 * j <= d {
            let h = UPoly::gcd(ctx, &g.sub(ctx, &x), &f)?;
            if h.degree() != Some(0) {
                return Ok(false);
            }
        }
    }
    Ok(g == x)
}

/// Irreducibility over the coefficient field of `ctx`.
pub fn is_irreducible(ctx: &FieldCtx, f: &UPoly) -> bool {
    if ctx.k() == 1 {
        let mut v = f.ranks(ctx);
        fp_trim(&mut v);
        if v.len() < 2 {
            return false;
        }
        if ctx.p() == 2 {
            let mut bits = vec![0u64; v.len() / 64 + 1];
            for (i, &c) in v.iter().enumerate() {
                if c == 1 {
                    bits[i / 64] |= 1 << (i % 64);
                }
            }
            return gf2::p2_is_irreducible(&bits);
        }
        return fp_is_irreducible(ctx.p(), &v);
    }
    generic_is_irreducible(ctx, f).expect("irreducibility test on monicizable input")
}

/// First t monic irreducibles of degree d over F_q in deterministic order.
pub fn first_irreducibles(ctx: &FieldCtx, d: usize, t: usize) -> Result<Vec<UPoly>> {
    if d == 0 {
        return Err(Error::InvalidDegree(0, usize::MAX));
    }
    if ctx.k() == 1 {
        let polys = if ctx.p() == 2 {
            gf2::first_irreducible_tails(d, t)
                .into_iter()
                .map(|tail| {
                    let mut v = vec![0u64; d + 1];
                    for (i, c) in v.iter_mut().enumerate().take(d.min(64)) {
                        *c = (tail >> i) & 1;
                    }
                    v[d] = 1;
                    v
                })
                .collect::<Vec<_>>()
        } else {
            fp_first_irreducibles(ctx.p(), d, t)
        };
        return polys.iter().map(|v| UPoly::from_ranks(ctx, v)).collect();
    }
    // Extension coefficients: count in base q over coefficient ranks.
    let mut out = Vec::with_capacity(t);
    let mut tail = vec![0u64; d];
    loop {
        let mut coeffs: Vec<FieldElem> = tail.iter().map(|&r| ctx.elem_from_rank(r)).collect();
        coeffs.push(ctx.one());
        let f = UPoly::from_coeffs(ctx, coeffs);
        if generic_is_irreducible(ctx, &f)? {
            out.push(f);
            if out.len() == t {
                return Ok(out);
            }
        }
        let mut i = 0;
        loop {
            assert!(i < d, "exhausted all degree-{d} candidates over F_{}", ctx.q());
            tail[i] += 1;
            if tail[i] < ctx.q() {
                break;
            }
            tail[i] = 0;
            i += 1;
        }
    }
}

/// Lexicographically least monic irreducible of degree d over F_q.
pub fn find_irreducible(ctx: &FieldCtx, d: usize) -> Result<UPoly> {
    Ok(first_irreducibles(ctx, d, 1)?.remove(0))
}

fn moebius(mut n: u64) -> i64 {
    let mut mu = 1i64;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Number of monic irreducibles of degree d over F_q:
/// (1/d) * Sigma_{e | d} mu(e) q^{d/e}.  Exact for any prime power q.
pub fn count_irreducibles(q: u64, d: u64) -> BigUint {
    assert!(d >= 1 && q >= 2);
    let mut sum = BigInt::from(0);
    for e in 1..=d {
        if d % e != 0 {
            continue;
        }
        let mu = moebius(e);
        if mu == 0 {
            continue;
        }
        let term = BigInt::from(q).pow((d / e) as u32);
        if mu > 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let (quot, rem) = num_integer::Integer::div_rem(&sum, &BigInt::from(d));
    assert!(rem.sign() == Sign::NoSign, "Moebius sum not divisible by d");
    quot.to_biguint().expect("irreducible count is nonnegative")
}
