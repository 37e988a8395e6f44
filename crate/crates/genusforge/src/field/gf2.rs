//! Bit-packed polynomial arithmetic over F_2 and a packed field kernel for
//! F_{2^w}, w <= 63.  The packed kernel is what makes large-field point
//! counting cheap: one u64 per element, carry-less multiply, and the absolute
//! trace as a popcount against a precomputed mask.

/// Polynomials over F_2 as little-endian bit vectors: bit i of word i/64 is
/// the coefficient of x^i.
pub(crate) type Poly2 = Vec<u64>;

pub(crate) fn p2_degree(a: &[u64]) -> Option<usize> {
    for (w, &word) in a.iter().enumerate().rev() {
        if word != 0 {
            return Some(w * 64 + 63 - word.leading_zeros() as usize);
        }
    }
    None
}

fn p2_trim(a: &mut Poly2) {
    while let Some(&0) = a.last() {
        a.pop();
    }
}

fn p2_set(a: &mut Poly2, i: usize) {
    let w = i / 64;
    if a.len() <= w {
        a.resize(w + 1, 0);
    }
    a[w] |= 1 << (i % 64);
}

pub(crate) fn p2_x() -> Poly2 {
    vec![2]
}

fn p2_xor_shifted(a: &mut Poly2, b: &[u64], shift: usize) {
    let (words, bits) = (shift / 64, shift % 64);
    let need = b.len() + words + 1;
    if a.len() < need {
        a.resize(need, 0);
    }
    if bits == 0 {
        for (i, &w) in b.iter().enumerate() {
            a[i + words] ^= w;
        }
    } else {
        let mut carry = 0u64;
        for (i, &w) in b.iter().enumerate() {
            a[i + words] ^= (w << bits) | carry;
            carry = w >> (64 - bits);
        }
        a[b.len() + words] ^= carry;
    }
    p2_trim(a);
}

/// Remainder of a modulo f (f nonzero).
fn p2_rem(a: &Poly2, f: &[u64]) -> Poly2 {
    let df = p2_degree(f).expect("nonzero modulus");
    let mut r = a.clone();
    p2_trim(&mut r);
    while let Some(dr) = p2_degree(&r) {
        if dr < df {
            break;
        }
        p2_xor_shifted(&mut r, f, dr - df);
    }
    r
}

fn spread_u32(x: u32) -> u64 {
    // Interleave zero bits: abcd -> 0a0b0c0d.
    let mut v = x as u64;
    v = (v | (v << 16)) & 0x0000_FFFF_0000_FFFF;
    v = (v | (v << 8)) & 0x00FF_00FF_00FF_00FF;
    v = (v | (v << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    v = (v | (v << 2)) & 0x3333_3333_3333_3333;
    v = (v | (v << 1)) & 0x5555_5555_5555_5555;
    v
}

/// Square modulo f: squaring over F_2 just spreads the bits.
pub(crate) fn p2_sqmod(a: &Poly2, f: &[u64]) -> Poly2 {
    let mut sq = Vec::with_capacity(a.len() * 2);
    for &w in a {
        sq.push(spread_u32(w as u32));
        sq.push(spread_u32((w >> 32) as u32));
    }
    p2_trim(&mut sq);
    p2_rem(&sq, f)
}

pub(crate) fn p2_gcd(a: &Poly2, b: &Poly2) -> Poly2 {
    let mut x = a.clone();
    let mut y = b.clone();
    p2_trim(&mut x);
    p2_trim(&mut y);
    while !y.is_empty() {
        let r = p2_rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

fn p2_is_one(a: &[u64]) -> bool {
    a.len() == 1 && a[0] == 1
}

/// Rabin irreducibility test with early aborts: walk the Frobenius chain
/// g <- g^2 mod f; any factor of degree j <= d/2 surfaces as a nontrivial
/// gcd(g - x, f) at step j, killing reducible candidates almost immediately.
pub(crate) fn p2_is_irreducible(f: &Poly2) -> bool {
    let d = match p2_degree(f) {
        Some(0) | None => return false,
        Some(1) => return true,
        Some(d) => d,
    };
    let x = p2_x();
    let mut g = x.clone();
    for j in 1..=d {
        g = p2_sqmod(&g, f);
        if 2 * j <= d {
            let mut gx = g.clone();
            // g - x over F_2 is g xor x.
            if gx.is_empty() {
                gx = vec![0];
            }
            gx[0] ^= 2;
            p2_trim(&mut gx);
            let h = p2_gcd(&gx, f);
            if !p2_is_one(&h) {
                return false;
            }
        }
    }
    g == x
}

/// First t irreducible tails over F_2: returns tail values v such that
/// x^d + (bits of v) is irreducible, in increasing order of v.  The counter
/// order is exactly lexicographic order on (c_{d-1}, ..., c_0).
pub(crate) fn first_irreducible_tails(d: usize, t: usize) -> Vec<u64> {
    assert!(d >= 1);
    if d == 1 {
        // x and x + 1.
        return [0u64, 1].into_iter().take(t).collect();
    }
    let mut out = Vec::with_capacity(t);
    let mut tail: u64 = 1; // constant term 0 would be divisible by x
    loop {
        if tail & 1 == 1 {
            let mut f = vec![0u64; d / 64 + 1];
            f[0] = tail;
            p2_set(&mut f, d);
            if p2_is_irreducible(&f) {
                out.push(tail);
                if out.len() == t {
                    return out;
                }
            }
        }
        tail = tail
            .checked_add(1)
            .expect("irreducible tail exceeds u64 range");
        assert!(
            d >= 64 || tail < (1u64 << d),
            "exhausted all degree-{d} candidates"
        );
    }
}

/// F_{2^w} with one u64 per element, w <= 63.  The modulus is the same
/// lexicographically least irreducible used by the generic context, so both
/// representations name identical field elements (rank i <-> bit pattern i).
#[derive(Clone, Debug)]
pub struct PackedCtx {
    w: u32,
    /// Full modulus bits including the leading x^w term.
    modulus: u64,
    top: u64,
    trace_mask: u64,
}

impl PackedCtx {
    pub fn new(w: u32) -> PackedCtx {
        assert!(w >= 1 && w <= 63);
        let modulus = if w == 1 {
            0b10 // x
        } else {
            (1u64 << w) | first_irreducible_tails(w as usize, 1)[0]
        };
        let mut ctx = PackedCtx {
            w,
            modulus,
            top: 1u64 << w,
            trace_mask: 0,
        };
        let mut mask = 0u64;
        for j in 0..w {
            let mut s = 1u64 << j;
            let mut acc = s;
            for _ in 1..w {
                s = ctx.mul(s, s);
                acc ^= s;
            }
            debug_assert!(acc <= 1, "trace of a basis element must be 0 or 1");
            if acc == 1 {
                mask |= 1 << j;
            }
        }
        ctx.trace_mask = mask;
        ctx
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn order(&self) -> u64 {
        1u64 << self.w
    }

    /// Modulus bits, including the leading term.
    pub fn modulus_bits(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn mul(&self, mut a: u64, mut b: u64) -> u64 {
        let mut acc = 0u64;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & self.top != 0 {
                a ^= self.modulus;
            }
        }
        acc
    }

    #[inline]
    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element.
    #[inline]
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.order() - 2)
    }

    /// Absolute trace to F_2 as 0/1: a popcount parity against the mask of
    /// basis traces (the trace is F_2-linear).
    #[inline]
    pub fn trace(&self, a: u64) -> u64 {
        ((a & self.trace_mask).count_ones() & 1) as u64
    }
}
