//! Exact arithmetic in finite fields F_{p^k}.
//!
//! Elements are polynomial-basis coordinate vectors over F_p, reduced modulo
//! the lexicographically least monic irreducible of degree k.  Constructing
//! the modulus deterministically makes every downstream artifact (twist
//! polynomials, certificates, counts) reproducible across machines.

mod gf2;
mod poly;

pub use gf2::PackedCtx;
pub use poly::{count_irreducibles, find_irreducible, first_irreducibles, is_irreducible, UPoly};

use crate::error::{Error, Result};

/// Upper bound on the extension degree of a single context.  Coordinates are
/// stored inline as bytes, so contexts stay `Copy`-friendly and allocation-free.
pub const MAX_EXT_DEGREE: usize = 32;

/// Element of F_{p^k}: coordinates c[0..k] with respect to the power basis
/// 1, t, ..., t^{k-1}.  Invariant: c[i] < p and c[i] = 0 for i >= k.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldElem {
    c: [u8; MAX_EXT_DEGREE],
}

impl FieldElem {
    fn zeroed() -> FieldElem {
        FieldElem {
            c: [0; MAX_EXT_DEGREE],
        }
    }

    /// Coordinate of t^i (0 for i >= k).
    pub fn coeff(&self, i: usize) -> u64 {
        if i < MAX_EXT_DEGREE {
            self.c[i] as u64
        } else {
            0
        }
    }
}

/// Field context: carries p, k, the modulus, and precomputed trace data.
/// Immutable after construction.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u64,
    k: usize,
    q: u64,
    /// Monic modulus of degree k over F_p, constant term first (length k+1).
    modulus: Vec<u64>,
    /// (p - m_j) mod p for the reduction x^k == -(tail), precomputed.
    neg_tail: Vec<u64>,
    /// Absolute traces tr(t^i) for i < k.
    trace_form: Vec<u64>,
}

fn is_prime(n: u64) -> bool {
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

impl FieldCtx {
    /// Builds F_{p^k} with the lexicographically least monic irreducible
    /// modulus of degree k (coefficient tuples ordered most significant
    /// first, i.e. in base-p counter order).
    pub fn new(p: u64, k: usize) -> Result<FieldCtx> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= 256 {
            return Err(Error::CharacteristicTooLarge(p));
        }
        if k == 0 || k > MAX_EXT_DEGREE {
            return Err(Error::InvalidDegree(k, MAX_EXT_DEGREE));
        }
        let mut q: u64 = 1;
        for _ in 0..k {
            q = q
                .checked_mul(p)
                .filter(|&v| v < (1 << 62))
                .ok_or(Error::FieldTooLarge { p, k })?;
        }
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            poly::prime_field_irreducible(p, k)
        };
        debug_assert_eq!(modulus.len(), k + 1);
        debug_assert_eq!(modulus[k], 1);
        let neg_tail = modulus[..k].iter().map(|&m| (p - m % p) % p).collect();
        let mut ctx = FieldCtx {
            p,
            k,
            q,
            modulus,
            neg_tail,
            trace_form: Vec::new(),
        };
        ctx.trace_form = ctx.build_trace_form();
        Ok(ctx)
    }

    /// Builds the field of order q, factoring q = p^k.
    pub fn from_order(q: u64) -> Result<FieldCtx> {
        if q < 2 {
            return Err(Error::NotPrime(q));
        }
        for p in 2..256u64 {
            if q % p == 0 {
                let mut k = 0usize;
                let mut rest = q;
                while rest % p == 0 {
                    rest /= p;
                    k += 1;
                }
                if rest != 1 {
                    return Err(Error::NotPrime(q));
                }
                return FieldCtx::new(p, k);
            }
        }
        // No small factor: q must itself be prime, which new() rejects
        // anyway for q ≥ 256 (coefficients are bytes).
        FieldCtx::new(q, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Field order q = p^k.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Modulus coefficients, constant term first (length k+1, monic).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::zeroed()
    }

    pub fn one(&self) -> FieldElem {
        self.from_u64(1)
    }

    /// Image of the integer n under Z -> F_p -> F_{p^k}.
    pub fn from_u64(&self, n: u64) -> FieldElem {
        let mut e = FieldElem::zeroed();
        e.c[0] = (n % self.p) as u8;
        e
    }

    /// The generator t of the power basis (equals the residue class of x).
    pub fn gen(&self) -> FieldElem {
        if self.k == 1 {
            // F_p: x reduces to the root of the modulus x, i.e. 0.
            return self.zero();
        }
        let mut e = FieldElem::zeroed();
        e.c[1] = 1;
        e
    }

    pub fn is_zero(&self, a: FieldElem) -> bool {
        a.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self, a: FieldElem) -> bool {
        a == self.one()
    }

    /// Builds an element from coordinates (low degree first); rejects
    /// coordinates that are not reduced mod p.
    pub fn elem_from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() > self.k {
            return Err(Error::InvalidDegree(coeffs.len(), self.k));
        }
        let mut e = FieldElem::zeroed();
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.p {
                return Err(Error::UnreducedCoefficient(c, self.p));
            }
            e.c[i] = c as u8;
        }
        Ok(e)
    }

    /// Rank of an element in the enumeration order: Sigma c_i p^i.
    pub fn rank(&self, a: FieldElem) -> u64 {
        let mut r = 0u64;
        for i in (0..self.k).rev() {
            r = r * self.p + a.c[i] as u64;
        }
        r
    }

    /// Inverse of `rank`; r must be < q.
    pub fn elem_from_rank(&self, mut r: u64) -> FieldElem {
        debug_assert!(r < self.q);
        let mut e = FieldElem::zeroed();
        for i in 0..self.k {
            e.c[i] = (r % self.p) as u8;
            r /= self.p;
        }
        e
    }

    /// All field elements in rank order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(move |r| self.elem_from_rank(r))
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let mut out = FieldElem::zeroed();
        for i in 0..self.k {
            let s = a.c[i] as u64 + b.c[i] as u64;
            out.c[i] = if s >= self.p { s - self.p } else { s } as u8;
        }
        out
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let mut out = FieldElem::zeroed();
        for i in 0..self.k {
            if a.c[i] != 0 {
                out.c[i] = (self.p - a.c[i] as u64) as u8;
            }
        }
        out
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let k = self.k;
        let p = self.p;
        if k == 1 {
            return self.from_u64(a.c[0] as u64 * b.c[0] as u64);
        }
        // Schoolbook product; word accumulators cannot overflow for
        // k <= 32, p < 256 (bounded by ~2^23 per entry).
        let mut buf = [0u64; 2 * MAX_EXT_DEGREE];
        for i in 0..k {
            let ai = a.c[i] as u64;
            if ai == 0 {
                continue;
            }
            for j in 0..k {
                buf[i + j] += ai * b.c[j] as u64;
            }
        }
        // Fold down using x^k == Sigma neg_tail[j] x^j.
        for m in (k..=2 * k - 2).rev() {
            let c = buf[m] % p;
            buf[m] = 0;
            if c == 0 {
                continue;
            }
            for j in 0..k {
                let nj = self.neg_tail[j];
                if nj != 0 {
                    buf[m - k + j] += c * nj;
                }
            }
        }
        let mut out = FieldElem::zeroed();
        for i in 0..k {
            out.c[i] = (buf[i] % p) as u8;
        }
        out
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero(self.q));
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    fn build_trace_form(&self) -> Vec<u64> {
        // Frobenius orbit of t, then tr(t^i) = Sigma_j (t^{p^j})^i.
        let mut frob = Vec::with_capacity(self.k);
        let mut cur = self.gen();
        if self.k == 1 {
            return vec![1];
        }
        for _ in 0..self.k {
            frob.push(cur);
            cur = self.pow(cur, self.p);
        }
        let mut form = Vec::with_capacity(self.k);
        for i in 0..self.k as u64 {
            let mut s = self.zero();
            for &f in &frob {
                s = self.add(s, self.pow(f, i));
            }
            // The trace lands in F_p, so s is a constant.
            debug_assert!(s.c[1..].iter().all(|&x| x == 0));
            form.push(s.c[0] as u64);
        }
        form
    }

    /// Absolute trace down to F_p, returned as a residue in [0, p).
    pub fn absolute_trace(&self, a: FieldElem) -> u64 {
        let mut s = 0u64;
        for i in 0..self.k {
            s += a.c[i] as u64 * self.trace_form[i];
        }
        s % self.p
    }

    /// Quadratic character: 0 on zero, +1 on nonzero squares, -1 otherwise.
    /// Undefined (errors) in characteristic 2.
    pub fn quadratic_character(&self, a: FieldElem) -> Result<i8> {
        if self.p == 2 {
            return Err(Error::EvenCharacter);
        }
        if self.is_zero(a) {
            return Ok(0);
        }
        let r = self.pow(a, (self.q - 1) / 2);
        if self.is_one(r) {
            Ok(1)
        } else {
            debug_assert_eq!(r, self.neg(self.one()));
            Ok(-1)
        }
    }

    /// Least-rank root in this field of the modulus of `base` (a subfield
    /// context with the same characteristic and base.k | self.k).  Together
    /// with `embed` this fixes a canonical embedding F_{p^j} -> F_{p^k}.
    pub fn embed_root_of(&self, base: &FieldCtx) -> Result<FieldElem> {
        if base.p != self.p || self.k % base.k != 0 {
            return Err(Error::InvalidDegree(base.k, self.k));
        }
        if base.k == 1 {
            return Ok(self.zero());
        }
        if base.k == self.k {
            // Same modulus: t itself is a root, and no conjugate has a
            // smaller rank (every conjugate is a nonconstant polynomial
            // in t, hence has rank >= p).
            return Ok(self.gen());
        }
        let consts: Vec<FieldElem> = base.modulus.iter().map(|&c| self.from_u64(c)).collect();
        for z in self.elements() {
            let mut acc = self.zero();
            for &c in consts.iter().rev() {
                acc = self.add(self.mul(acc, z), c);
            }
            if self.is_zero(acc) {
                return Ok(z);
            }
        }
        unreachable!("an irreducible of degree dividing k splits in F_{{p^k}}")
    }

    /// Image of a `base` element under the embedding sending base's t to `root`.
    pub fn embed(&self, base: &FieldCtx, root: FieldElem, e: FieldElem) -> FieldElem {
        let mut acc = self.zero();
        for i in (0..base.k).rev() {
            acc = self.add(self.mul(acc, root), self.from_u64(e.c[i] as u64));
        }
        acc
    }

    /// Renders an element as a polynomial in t, e.g. "t^2 + 2".
    pub fn format_elem(&self, a: FieldElem) -> String {
        if self.is_zero(a) {
            return "0".into();
        }
        let mut parts = Vec::new();
        for i in (0..self.k).rev() {
            let c = a.c[i] as u64;
            if c == 0 {
                continue;
            }
            let part = match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "t".into(),
                (1, c) => format!("{c}*t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}*t^{i}"),
            };
            parts.push(part);
        }
        parts.join(" + ")
    }
}
