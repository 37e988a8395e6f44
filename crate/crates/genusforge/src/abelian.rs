//! Abelian covers of the projective line hitting every genus.
//!
//! Odd q: a two-point Artin–Schreier tower with exponents solving a
//! congruence mod p^n, twisted by a quadratic extension so the genus lands
//! exactly on target; at least 2p^n rational points sit over x = ∞.  Small
//! genera fall back to a hyperelliptic curve.  Even q: a one-point tower
//! planned over F_2 and base-changed, with at least 2^n points.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;

use crate::certificate::{Construction, CurveCertificate};
use crate::error::{Error, Result};
use crate::field::{find_irreducible, is_irreducible, FieldCtx, UPoly};

/// Artin–Schreier tower y_k^p − y_k = x^{−i_k}·(x−1)^{−j_k} (two-point) or
/// y_k^p − y_k = x^{−i_k} (one-point), optionally twisted by y² = f(x).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ASTower {
    pub p: u64,
    pub i_seq: Vec<u64>,
    /// Present for the two-point family (ramified at x = 0 and x = 1).
    pub j_seq: Option<Vec<u64>>,
    /// Monic irreducible of even degree 2D, coprime to x(x−1); odd p only.
    pub twist: Option<UPoly>,
    /// Field the certificate claims points over.
    pub base_q: u64,
    /// Field the tower was planned over (2 for even-q towers, else base_q).
    pub construction_q: u64,
}

impl ASTower {
    pub fn n(&self) -> usize {
        self.i_seq.len()
    }

    /// Checks every structural invariant; `ctx` must be the field of order
    /// `base_q` (used for the twist's irreducibility test).
    pub fn validate(&self, ctx: &FieldCtx) -> Result<()> {
        let bad = |detail: &str| {
            Err(Error::BadCertificate(format!("abelian tower: {detail}")))
        };
        if ctx.q() != self.base_q || ctx.p() != self.p {
            return bad("field does not match base_q");
        }
        if self.i_seq.is_empty() {
            return bad("empty tower");
        }
        let increasing_coprime = |s: &[u64]| {
            s.iter().all(|&v| v > 0 && v % self.p != 0)
                && s.windows(2).all(|w| w[0] < w[1])
        };
        if !increasing_coprime(&self.i_seq) {
            return bad("i_seq must be strictly increasing, positive, coprime to p");
        }
        if let Some(j) = &self.j_seq {
            if j.len() != self.i_seq.len() || !increasing_coprime(j) {
                return bad("j_seq malformed");
            }
        }
        match &self.twist {
            None => {}
            Some(_) if self.p == 2 => return bad("twist requires odd characteristic"),
            Some(_) if self.j_seq.is_none() => return bad("twist requires the two-point family"),
            Some(f) => {
                let d = f.degree().unwrap_or(0);
                if d == 0 || d % 2 != 0 {
                    return bad("twist degree must be even and positive");
                }
                if !f.is_monic(ctx) || !is_irreducible(ctx, f) {
                    return bad("twist must be monic irreducible");
                }
                if ctx.is_zero(f.eval(ctx, ctx.zero())) || ctx.is_zero(f.eval(ctx, ctx.one())) {
                    return bad("twist must be coprime to x(x-1)");
                }
            }
        }
        if self.construction_q != self.base_q {
            if self.p != 2 || self.construction_q != 2 {
                return bad("only even-q towers are base-changed, and only from F_2");
            }
        }
        Ok(())
    }
}

/// Genus of a tower.  Two-point untwisted: ((p−1)/2)·Σ(i_k+j_k)p^k; twisted:
/// (p−1)·Σ(i_k+j_k)p^k + p^n·D − 1; one-point: ((p−1)/2)·Σ(i_k−1)p^k.
pub fn genus_formula(tower: &ASTower) -> u64 {
    let p = tower.p as u128;
    let mut pk: u128 = 1;
    let mut s: u128 = 0;
    for k in 0..tower.n() {
        let term = match &tower.j_seq {
            Some(j) => (tower.i_seq[k] + j[k]) as u128,
            None => (tower.i_seq[k] - 1) as u128,
        };
        s += term * pk;
        pk *= p;
    }
    let g = match &tower.twist {
        None => {
            let num = (p - 1) * s;
            debug_assert_eq!(num % 2, 0);
            num / 2
        }
        Some(f) => {
            let dd = (f.degree().expect("twist is nonzero") / 2) as u128;
            (p - 1) * s + pk * dd - 1
        }
    };
    u64::try_from(g).expect("genus fits in u64")
}

/// Finds strictly increasing sequences of positive integers coprime to p with
/// i_k + j_k < (p+3)(k+1) and Σ(i_k+j_k)p^k ≡ d (mod p^n).
pub fn solve_congruence(p: u64, n: usize, d: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(p >= 3 && p % 2 == 1 && n >= 1);
    let dp = d % p;
    let (mut i_seq, mut j_seq) = if dp > 1 {
        (vec![dp - 1], vec![1])
    } else {
        (vec![dp + 1], vec![p - 1])
    };
    let mut sum: u64 = i_seq[0] + j_seq[0];
    let mut pm: u64 = p;
    for _ in 1..n {
        // d' = ((d − sum)/p^m)_p; the division is exact by the invariant
        // sum ≡ d (mod p^m).
        let diff = (d as i128 - sum as i128).rem_euclid((pm * p) as i128) as u64;
        debug_assert_eq!(diff % pm, 0);
        let dprime = diff / pm;
        let (ip, jp) = (*i_seq.last().unwrap(), *j_seq.last().unwrap());
        let (ni, nj) = (1..=3u64)
            .find_map(|b| {
                let ni = ip + b;
                let inc = (dprime as i128 - 1 - b as i128 - ip as i128 - jp as i128)
                    .rem_euclid(p as i128) as u64;
                let nj = jp + 1 + inc;
                (ni % p != 0 && nj % p != 0).then_some((ni, nj))
            })
            .expect("at most one b in {1,2,3} collides with each of i, j");
        sum += (ni + nj) * pm;
        i_seq.push(ni);
        j_seq.push(nj);
        pm *= p;
    }
    debug_assert_eq!(sum % pm, d % pm);
    (i_seq, j_seq)
}

/// The arithmetic of the odd-q construction, separated from the (memoized)
/// twist-polynomial search so large-genus sweeps stay cheap.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OddPlan {
    pub n: usize,
    pub d: u64,
    pub i_seq: Vec<u64>,
    pub j_seq: Vec<u64>,
    /// Σ(i_k+j_k)p^k.
    pub weighted_sum: u64,
    /// Half the twist degree: deg f = 2D.
    pub half_twist_degree: u64,
    pub points_lb: u64,
}

/// Plans the twisted tower for odd p; `None` means g is in the hyperelliptic
/// fallback range g ≤ p² + 3p.
pub fn plan_odd(p: u64, g: u64) -> Option<OddPlan> {
    if g <= p * p + 3 * p {
        return None;
    }
    // Largest n with (p+3)·n·p^n < g; n ≥ 1 since (p+3)·p < g.
    let mut n: u32 = 1;
    while ((p + 3) as u128) * ((n + 1) as u128) * (p as u128).pow(n + 1) < g as u128 {
        n += 1;
    }
    let pn = p.pow(n);
    let d = ((g + 1) % pn) as u128 * inv_mod(p - 1, pn) as u128 % pn as u128;
    let d = d as u64;
    let (i_seq, j_seq) = solve_congruence(p, n as usize, d);
    let mut pk: u64 = 1;
    let mut sum: u64 = 0;
    for k in 0..n as usize {
        sum += (i_seq[k] + j_seq[k]) * pk;
        pk *= p;
    }
    // D = (g + 1 − (p−1)·Σ)/p^n is a positive integer: the congruence fixes
    // the residue and the i_k+j_k bound keeps (p−1)·Σ below g+1.
    let num = (g + 1)
        .checked_sub((p - 1) * sum)
        .expect("weighted sum stays below (g+1)/(p-1)");
    assert_eq!(num % pn, 0);
    let dd = num / pn;
    assert!(dd > 0);
    Some(OddPlan {
        n: n as usize,
        d,
        i_seq,
        j_seq,
        weighted_sum: sum,
        half_twist_degree: dd,
        points_lb: 2 * pn,
    })
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(m as i128));
    assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

/// Process-wide memo for twist/fallback polynomials: the lexicographic-least
/// irreducible for a given (q, degree) never changes, and genus sweeps
/// re-request the same few degrees constantly.
fn cached_irreducible(ctx: &FieldCtx, d: usize) -> Result<UPoly> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), UPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&(ctx.q(), d)) {
        return Ok(f.clone());
    }
    let f = find_irreducible(ctx, d)?;
    cache.lock().unwrap().insert((ctx.q(), d), f.clone());
    Ok(f)
}

/// Odd-q construction: twisted two-point tower for g > p²+3p, else a
/// hyperelliptic curve y² = h(x) with h irreducible of degree 2g+1.
pub fn construct_odd(ctx: &FieldCtx, g: u64) -> Result<CurveCertificate> {
    let (q, p) = (ctx.q(), ctx.p());
    if p == 2 {
        return Err(Error::UnsupportedFamily {
            family: "abelian",
            detail: "odd-q construction called with even q".into(),
        });
    }
    if g < 1 {
        return Err(Error::InfeasibleGenus {
            q,
            genus: g,
            family: "abelian",
            detail: "genus 0 is not constructed over odd fields".into(),
        });
    }
    match plan_odd(p, g) {
        Some(plan) => {
            let f = cached_irreducible(ctx, 2 * plan.half_twist_degree as usize)?;
            let tower = ASTower {
                p,
                i_seq: plan.i_seq,
                j_seq: Some(plan.j_seq),
                twist: Some(f),
                base_q: q,
                construction_q: q,
            };
            assert_eq!(genus_formula(&tower), g);
            Ok(CurveCertificate {
                q,
                claimed_genus: g,
                claimed_point_lower_bound: plan.points_lb,
                construction: Construction::Abelian(tower),
            })
        }
        None => {
            let h = cached_irreducible(ctx, (2 * g + 1) as usize)?;
            Ok(CurveCertificate {
                q,
                claimed_genus: g,
                claimed_point_lower_bound: 1,
                construction: Construction::Hyperelliptic { h },
            })
        }
    }
}

/// Even-q construction: one-point tower over F_2, base-changed to F_q.
pub fn construct_even(ctx: &FieldCtx, g: u64) -> Result<CurveCertificate> {
    if ctx.p() != 2 {
        return Err(Error::UnsupportedFamily {
            family: "abelian",
            detail: "even-q construction called with odd q".into(),
        });
    }
    // Unique n ≥ 1 with n·2^{n+1}−4 ≤ g < (n+1)·2^{n+2}−4.
    let mut n: u32 = 1;
    while (((n + 1) as u128) << (n + 2)) - 4 <= g as u128 {
        n += 1;
    }
    let i_seq: Vec<u64> = if n == 1 {
        vec![2 * g + 1]
    } else {
        // Fixed part Σ 2k·2^k over k ≤ n−2; choosing i_k = 4k+3 instead of
        // 4k+1 adds 2^k to the genus, so the subset of upgrades is read off
        // the binary digits of the target residue t.
        let b: u64 = (0..=n - 2).map(|k| (2 * k as u64) << k).sum();
        assert!(g >= b);
        let t = (g - b) % (1u64 << (n - 1));
        let mut seq = Vec::with_capacity(n as usize);
        let mut partial2: u64 = 0; // 2·(genus of the first n−1 layers)
        for k in 0..=n - 2 {
            let ik = 4 * k as u64 + 1 + 2 * ((t >> k) & 1);
            partial2 += (ik - 1) << k;
            seq.push(ik);
        }
        let rest = g - partial2 / 2;
        assert_eq!(rest % (1u64 << (n - 1)), 0);
        let last = (rest >> (n - 2)) + 1;
        assert!(last % 2 == 1 && last > 4 * n as u64 - 5);
        seq.push(last);
        seq
    };
    let tower = ASTower {
        p: 2,
        i_seq,
        j_seq: None,
        twist: None,
        base_q: ctx.q(),
        construction_q: 2,
    };
    assert_eq!(genus_formula(&tower), g);
    Ok(CurveCertificate {
        q: ctx.q(),
        claimed_genus: g,
        claimed_point_lower_bound: 1 << n,
        construction: Construction::Abelian(tower),
    })
}

/// Characteristic-dispatching front end used by the CLI.
pub fn construct_abelian(ctx: &FieldCtx, g: u64) -> Result<CurveCertificate> {
    if ctx.p() == 2 {
        construct_even(ctx, g)
    } else {
        construct_odd(ctx, g)
    }
}

/// One defining equation of an abelian or hyperelliptic certificate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Equation {
    ArtinSchreier {
        layer: usize,
        p: u64,
        i: u64,
        j: Option<u64>,
    },
    Quadratic {
        f: UPoly,
    },
}

impl Equation {
    pub fn render(&self, ctx: &FieldCtx) -> String {
        match self {
            Equation::ArtinSchreier { layer, p, i, j } => {
                let op = if *p == 2 { "+" } else { "-" };
                let mut rhs = format!("x^-{i}");
                if let Some(j) = j {
                    rhs.push_str(&format!("*(x-1)^-{j}"));
                }
                format!("y_{layer}^{p} {op} y_{layer} = {rhs}")
            }
            Equation::Quadratic { f } => format!("y^2 = {}", f.format(ctx, "x")),
        }
    }
}

/// Renders the defining equations of an abelian or hyperelliptic certificate.
pub fn emit_equations(cert: &CurveCertificate) -> Result<Vec<Equation>> {
    match &cert.construction {
        Construction::Abelian(t) => {
            let mut eqs: Vec<Equation> = (0..t.n())
                .map(|k| Equation::ArtinSchreier {
                    layer: k,
                    p: t.p,
                    i: t.i_seq[k],
                    j: t.j_seq.as_ref().map(|j| j[k]),
                })
                .collect();
            if let Some(f) = &t.twist {
                eqs.push(Equation::Quadratic { f: f.clone() });
            }
            Ok(eqs)
        }
        Construction::Hyperelliptic { h } => Ok(vec![Equation::Quadratic { f: h.clone() }]),
        _ => Err(Error::UnsupportedFamily {
            family: "abelian",
            detail: format!("no tower equations for a {} certificate", cert.family()),
        }),
    }
}
