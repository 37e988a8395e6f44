//! Tame cyclic covers of the projective line, planned but never realized.
//!
//! Class field theory guarantees a degree-L cyclic cover ramified at chosen
//! places with prescribed tame inertia, in which ∞ splits completely into L
//! rational points.  Everything here is arithmetic on the parameters: the
//! genus equation, the sᵢ congruence solver, prime-set selection, and the
//! hypothesis checks that stand in for an explicit model.
//!
//! For even q the planning happens over F_2 and the result is read over the
//! target field; the L rational points survive base change.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;

use crate::certificate::{Construction, CurveCertificate};
use crate::error::{Error, Result};
use crate::field::{count_irreducibles, first_irreducibles, is_irreducible, FieldCtx, UPoly};

/// Largest argument the prime table answers for.
pub const SIEVE_LIMIT: u64 = 1_000_000;

/// All primes up to `SIEVE_LIMIT`, computed once.
pub fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = SIEVE_LIMIT as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for p in 2..=n {
            if !composite[p] {
                primes.push(p as u64);
                let mut m = p * p;
                while m <= n {
                    composite[m] = true;
                    m += p;
                }
            }
        }
        primes
    })
}

pub fn is_small_prime(n: u64) -> bool {
    n <= SIEVE_LIMIT && small_primes().binary_search(&n).is_ok()
}

fn powmod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut acc = 1u128 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: i128, m: i128) -> i128 {
    let e = a.extended_gcd(&m);
    assert_eq!(e.gcd, 1, "{a} is not invertible mod {m}");
    e.x.rem_euclid(m)
}

/// Planning field: even q reduces to the prime subfield.
fn plan_field(q: u64) -> u64 {
    if q % 2 == 0 {
        2
    } else {
        q
    }
}

/// Least prime not dividing q.
fn least_coprime_prime(q: u64) -> u64 {
    *small_primes()
        .iter()
        .find(|&&p| q % p != 0)
        .expect("some prime below the sieve limit is coprime to q")
}

/// Fully planned cover: primes, ramification data, degrees, and (when the
/// degrees are small enough to write down) the ramified places themselves.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TameParams {
    /// Field the certificate claims points over.
    pub q: u64,
    /// Field the cover is planned over (2 when q is even, else q).
    pub plan_q: u64,
    /// ℓ_1 < ℓ_2 < … with ℓ_1 the least prime not dividing plan_q.
    pub primes: Vec<u64>,
    pub r: Vec<u64>,
    pub s: Vec<u64>,
    /// Place degrees d_i = r_i·s_i.
    pub d: Vec<u64>,
    /// L = Π ℓ_i; the cover degree and the point lower bound.
    pub l_product: u64,
    pub genus: u64,
    /// First distinct monic irreducibles of each degree, materialized only
    /// when every degree is at most `MAX_PLACE_DEGREE`; existence is always
    /// certified by the irreducible-count formula either way.
    pub places: Option<Vec<UPoly>>,
}

/// Degree cap above which ramified places are existence-certified instead of
/// materialized.
pub const MAX_PLACE_DEGREE: u64 = 64;

/// g from 2g − 2 = −2L + L·Σ((ℓ_i−1)/ℓ_i)·d_i, in exact rational arithmetic.
pub fn genus_tame(l_list: &[u64], d_list: &[u64]) -> Result<u64> {
    assert_eq!(l_list.len(), d_list.len());
    assert!(l_list.iter().all(|&l| l >= 2) && d_list.iter().all(|&d| d >= 1));
    let l_product: i128 = l_list.iter().map(|&l| l as i128).product();
    let mut rhs = Ratio::from_integer(-2 * l_product);
    for (&l, &d) in l_list.iter().zip(d_list) {
        let term = Ratio::new((l as i128 - 1) * d as i128, l as i128);
        rhs += Ratio::from_integer(l_product) * term;
    }
    if !rhs.is_integer() {
        return Err(Error::NonIntegralGenus(format!(
            "2g-2 = {rhs} is not an integer for l={l_list:?}, d={d_list:?}"
        )));
    }
    let twice = rhs.to_integer();
    if twice < -2 || twice % 2 != 0 {
        return Err(Error::NonIntegralGenus(format!(
            "2g-2 = {twice} admits no genus for l={l_list:?}, d={d_list:?}"
        )));
    }
    Ok(((twice + 2) / 2) as u64)
}

/// The guaranteed-feasibility threshold: planning succeeds for every
/// g > 1 − L + (L/2)·Σ_{i≥2}(ℓ_i−1)².
pub fn crt_bound(primes: &[u64]) -> Ratio<i128> {
    let l_product: i128 = primes.iter().map(|&l| l as i128).product();
    let sum: i128 = primes[1..].iter().map(|&l| (l as i128 - 1).pow(2)).sum();
    Ratio::from_integer(1 - l_product) + Ratio::new(l_product * sum, 2)
}

fn check_hypotheses(plan_q: u64, primes: &[u64]) -> Result<()> {
    let bad = |detail: String| {
        Err(Error::UnsupportedFamily {
            family: "tame",
            detail,
        })
    };
    if primes.len() < 2 {
        return bad("need at least two primes".into());
    }
    if primes.windows(2).any(|w| w[0] >= w[1]) {
        return bad(format!("primes {primes:?} must be strictly increasing"));
    }
    let l1 = least_coprime_prime(plan_q);
    if primes[0] != l1 {
        return bad(format!(
            "first prime must be {l1}, the least prime not dividing {plan_q}"
        ));
    }
    for &l in &primes[1..] {
        if !is_small_prime(l) {
            return bad(format!("{l} is not a prime below the sieve limit"));
        }
        if plan_q * (plan_q - 1) * l1 % l == 0 {
            return bad(format!("{l} divides q(q-1)l_1 = {}", plan_q * (plan_q - 1) * l1));
        }
    }
    if plan_q % 2 == 0 && !primes.iter().any(|&l| l % 8 == 7) {
        return bad("even q needs some prime congruent to 7 mod 8".into());
    }
    Ok(())
}

/// Index (into `primes`) whose ramification multiplier is halved for even q:
/// the first prime ≡ 7 (mod 8).
fn even_special_index(primes: &[u64]) -> usize {
    primes
        .iter()
        .position(|&l| l % 8 == 7)
        .expect("hypothesis check guarantees a prime congruent to 7 mod 8")
}

/// Solves for the multipliers s_i.  Everything is driven by the integer form
/// of the genus equation, 2(g−1+L) = Σ c_i·s_i with c_i = (L/ℓ_i)(ℓ_i−1)r_i:
/// for i ≥ 2 the congruence 2(g−1) ≡ s_i·(L/ℓ_i) (mod ℓ_i) pins s_i in
/// [1, ℓ_i] (for the halved even-q index, g−1+L ≡ s·(L/ℓ)((ℓ−1)/2)² (mod 2ℓ)
/// pins it in [1, 2ℓ]), after which the remaining sum is divisible by c_1
/// and s_1 comes out exactly.
pub fn plan_cover(q: u64, l_list: &[u64], g: u64) -> Result<TameParams> {
    let plan_q = plan_field(q);
    let mut primes = l_list.to_vec();
    primes.sort_unstable();
    check_hypotheses(plan_q, &primes)?;
    let n = primes.len();
    let even = plan_q % 2 == 0;
    let special = if even { Some(even_special_index(&primes)) } else { None };

    let r: Vec<u64> = primes
        .iter()
        .enumerate()
        .map(|(i, &l)| match special {
            _ if i == 0 => 2,
            Some(i0) if i == i0 => (l - 1) / 2,
            _ => l - 1,
        })
        .collect();

    let l_product_big: u128 = primes.iter().map(|&l| l as u128).product();
    let l_product = u64::try_from(l_product_big).map_err(|_| Error::UnsupportedFamily {
        family: "tame",
        detail: "prime product overflows u64".into(),
    })?;
    let lp = l_product as i128;
    let c: Vec<i128> = primes
        .iter()
        .zip(&r)
        .map(|(&l, &ri)| lp / l as i128 * (l as i128 - 1) * ri as i128)
        .collect();

    let gm1 = g as i128 - 1;
    let mut s = vec![0u64; n];
    for i in 1..n {
        let l = primes[i] as i128;
        if special == Some(i) {
            // s ∈ [1, 2ℓ] with g−1+L ≡ s·(L/ℓ)((ℓ−1)/2)² (mod 2ℓ).
            let m = 2 * l;
            let coeff = (lp / l * ((l - 1) / 2) * ((l - 1) / 2)).rem_euclid(m);
            let rhs = (gm1 + lp).rem_euclid(m);
            let sol = (rhs * inv_mod(coeff, m)).rem_euclid(m);
            s[i] = if sol == 0 { m as u64 } else { sol as u64 };
        } else {
            // s ∈ [1, ℓ] with 2(g−1) ≡ s·(L/ℓ) (mod ℓ).
            let coeff = (lp / l).rem_euclid(l);
            let rhs = (2 * gm1).rem_euclid(l);
            let sol = (rhs * inv_mod(coeff, l)).rem_euclid(l);
            s[i] = if sol == 0 { l as u64 } else { sol as u64 };
        }
    }
    let target = 2 * (gm1 + lp);
    let tail: i128 = (1..n).map(|i| c[i] * s[i] as i128).sum();
    let rem = target - tail;
    // The congruence choices make the remainder divisible by c_1 = (L/ℓ_1)(ℓ_1−1)·2.
    assert_eq!(rem.rem_euclid(c[0]), 0, "s_1 failed to come out integral");
    let s1 = rem / c[0];
    if s1 < 1 {
        return Err(Error::InfeasibleGenus {
            q,
            genus: g,
            family: "tame",
            detail: format!(
                "s_1 = {s1} < 1; guaranteed only for g > {} with primes {primes:?}",
                crt_bound(&primes)
            ),
        });
    }
    s[0] = s1 as u64;

    let d: Vec<u64> = r.iter().zip(&s).map(|(&ri, &si)| ri * si).collect();
    for (&l, &di) in primes.iter().zip(&d) {
        // Lemma hypothesis; holds by construction of r_i.
        let m = l as u128 * (plan_q as u128 - 1);
        assert_eq!(
            powmod(plan_q as u128, di as u128, m),
            1 % m,
            "q^d_i != 1 mod l_i(q-1) for l={l}, d={di}"
        );
    }
    assert_eq!(genus_tame(&primes, &d)?, g);

    // Enough distinct monic irreducibles of each degree must exist; the
    // count formula certifies that without writing any of them down.
    for &di in &d {
        let need = d.iter().filter(|&&x| x == di).count();
        assert!(
            count_irreducibles(plan_q, di) >= need.into(),
            "fewer than {need} irreducibles of degree {di} over F_{plan_q}"
        );
    }
    let places = if d.iter().all(|&di| di <= MAX_PLACE_DEGREE) {
        let ctx = FieldCtx::from_order(plan_q)?;
        let mut taken: std::collections::HashMap<u64, u64> = std::collections::HashMap::new();
        let mut out = Vec::with_capacity(n);
        for &di in &d {
            let idx = taken.entry(di).or_insert(0);
            let polys = first_irreducibles(&ctx, di as usize, (*idx + 1) as usize)?;
            out.push(polys[*idx as usize].clone());
            *idx += 1;
        }
        Some(out)
    } else {
        None
    };

    Ok(TameParams {
        q,
        plan_q,
        primes,
        r,
        s,
        d,
        l_product,
        genus: g,
        places,
    })
}

impl TameParams {
    /// Re-checks every invariant a verifier cares about.
    pub fn validate(&self) -> Result<()> {
        let bad = |detail: String| Err(Error::BadCertificate(format!("tame plan: {detail}")));
        if self.plan_q != plan_field(self.q) {
            return bad("plan field mismatch".into());
        }
        check_hypotheses(self.plan_q, &self.primes)?;
        let n = self.primes.len();
        if self.r.len() != n || self.s.len() != n || self.d.len() != n {
            return bad("ragged parameter vectors".into());
        }
        let special = if self.plan_q % 2 == 0 {
            Some(even_special_index(&self.primes))
        } else {
            None
        };
        for i in 0..n {
            let l = self.primes[i];
            let expect_r = match special {
                _ if i == 0 => 2,
                Some(i0) if i == i0 => (l - 1) / 2,
                _ => l - 1,
            };
            if self.r[i] != expect_r {
                return bad(format!("r_{i} = {} but the plan dictates {expect_r}", self.r[i]));
            }
            if self.s[i] < 1 {
                return bad(format!("s_{i} < 1"));
            }
            let cap = if special == Some(i) { 2 * l } else { l };
            if i > 0 && self.s[i] > cap {
                return bad(format!("s_{i} = {} exceeds its modulus {cap}", self.s[i]));
            }
            if self.d[i] != self.r[i] * self.s[i] {
                return bad(format!("d_{i} != r_{i}·s_{i}"));
            }
            let m = l as u128 * (self.plan_q as u128 - 1);
            if powmod(self.plan_q as u128, self.d[i] as u128, m) != 1 % m {
                return bad(format!("q^d_{i} != 1 mod l_{i}(q-1)"));
            }
        }
        if self.l_product != self.primes.iter().product::<u64>() {
            return bad("stored L is not the prime product".into());
        }
        if genus_tame(&self.primes, &self.d)? != self.genus {
            return bad("genus equation does not reproduce the claimed genus".into());
        }
        for &di in &self.d {
            let need = self.d.iter().filter(|&&x| x == di).count();
            if count_irreducibles(self.plan_q, di) < need.into() {
                return bad(format!("not enough degree-{di} places"));
            }
        }
        if let Some(places) = &self.places {
            if places.len() != n {
                return bad("wrong number of places".into());
            }
            let ctx = FieldCtx::from_order(self.plan_q)?;
            for (i, p) in places.iter().enumerate() {
                if p.degree() != Some(self.d[i] as usize) {
                    return bad(format!("place {i} has the wrong degree"));
                }
                if !p.is_monic(&ctx) || !is_irreducible(&ctx, p) {
                    return bad(format!("place {i} is not monic irreducible"));
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    if places[i] == places[j] {
                        return bad(format!("places {i} and {j} coincide"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// How the prime set was arrived at.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SelectionMode {
    /// The x_g / p_1 / p_2 / p_3 replacement procedure.
    Refined,
    /// Smallest admissible primes, as many as the feasibility bound allows.
    Fallback,
    /// Genus too small for any two-prime plan; carries the single prime ℓ_1.
    Trivial,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TameSelection {
    pub q: u64,
    pub g: u64,
    pub x_g: u64,
    pub p1: Option<u64>,
    pub p2: Option<u64>,
    pub p3: Option<u64>,
    /// Final prime set, ℓ_1 first, ascending.
    pub primes: Vec<u64>,
    pub l_product: u64,
    pub mode: SelectionMode,
}

fn admissible(plan_q: u64, l1: u64, l: u64) -> bool {
    plan_q * (plan_q - 1) * l1 % l != 0
}

/// x_g: least integer with g−1 ≤ (ℓ_1/2)·(Π ℓ)·(−2 + Σ(ℓ−1)²), the product
/// and sum over admissible primes ≤ x_g.  The right side only changes at
/// admissible primes, so x_g is one of them.
fn compute_xg(plan_q: u64, l1: u64, g: u64) -> u64 {
    let target = BigInt::from(2) * (BigInt::from(g) - 1);
    let mut prod = BigInt::from(1);
    let mut sum = BigInt::from(-2);
    for &l in small_primes() {
        if !admissible(plan_q, l1, l) {
            continue;
        }
        prod *= l;
        sum += BigInt::from(l - 1).pow(2);
        if BigInt::from(l1) * &prod * &sum >= target {
            return l;
        }
    }
    panic!("prime table exhausted while computing x_g");
}

fn refined_selection(plan_q: u64, l1: u64, g: u64) -> Option<TameSelection> {
    let x_g = compute_xg(plan_q, l1, g);
    let adm: Vec<u64> = small_primes()
        .iter()
        .copied()
        .take_while(|&l| l <= x_g)
        .filter(|&l| admissible(plan_q, l1, l))
        .collect();
    let prod: BigInt = adm.iter().map(|&l| BigInt::from(l)).product();
    let sum: BigInt = adm.iter().map(|&l| BigInt::from(l - 1).pow(2)).sum();
    let gm1 = BigInt::from(g) - 1;

    // p_1: least prime whose removal reverses the x_g inequality.
    let p1 = *adm.iter().find(|&&p| {
        let removed = &sum - BigInt::from(p - 1).pow(2) - 2;
        BigInt::from(2) * p * &gm1 > BigInt::from(l1) * &prod * removed
    })?;
    // p_2: largest prime ≤ x_g coprime to q(q−1)ℓ_1·p_1.
    let p2 = small_primes()
        .iter()
        .take_while(|&&l| l <= x_g)
        .filter(|&&l| plan_q * (plan_q - 1) * l1 * p1 % l != 0)
        .last()
        .copied()?;
    // p_3: largest prime keeping the replacement inequality strict.
    let base = &sum - BigInt::from(p1 - 1).pow(2) - BigInt::from(p2 - 1).pow(2) - 2;
    let ceiling = (10 * plan_q * x_g).max(1000);
    let p3 = small_primes()
        .iter()
        .take_while(|&&p| p <= ceiling)
        .filter(|&&p| {
            let rhs = BigInt::from(l1) * p * &prod * (&base + BigInt::from(p - 1).pow(2));
            BigInt::from(2) * p1 * p2 * &gm1 > rhs
        })
        .last()
        .copied()?;

    let mut set: std::collections::BTreeSet<u64> = small_primes()
        .iter()
        .take_while(|&&l| l <= x_g)
        .filter(|&&l| plan_q * (plan_q - 1) * p1 * p2 % l != 0)
        .copied()
        .collect();
    set.insert(p3);
    set.insert(l1);
    let primes: Vec<u64> = set.into_iter().collect();
    check_hypotheses(plan_q, &primes).ok()?;
    if crt_bound(&primes) >= Ratio::from_integer(g as i128) {
        return None;
    }
    let l_product = primes.iter().product();
    Some(TameSelection {
        q: 0, // caller fills in the target field
        g,
        x_g,
        p1: Some(p1),
        p2: Some(p2),
        p3: Some(p3),
        primes,
        l_product,
        mode: SelectionMode::Refined,
    })
}

fn fallback_primes(plan_q: u64, l1: u64, g: u64) -> Option<Vec<u64>> {
    let adm: Vec<u64> = small_primes()
        .iter()
        .copied()
        .filter(|&l| l != l1 && admissible(plan_q, l1, l))
        .take(32)
        .collect();
    let mut best: Option<Vec<u64>> = None;
    for n in 2..=adm.len() + 1 {
        let mut primes = vec![l1];
        primes.extend(&adm[..n - 1]);
        if plan_q % 2 == 0 && !primes.iter().any(|&l| l % 8 == 7) {
            // Swap the largest for the smallest admissible prime ≡ 7 (mod 8).
            let seven = *adm.iter().find(|&&l| l % 8 == 7)?;
            *primes.last_mut().unwrap() = seven;
            primes.sort_unstable();
        }
        if crt_bound(&primes) < Ratio::from_integer(g as i128) {
            best = Some(primes);
        } else {
            break;
        }
    }
    best
}

/// Chooses the prime set for a target genus: the refined x_g/p_1/p_2/p_3
/// replacement procedure when all three replacement primes are defined and
/// the result is feasible, else the smallest-primes fallback, else a
/// single-prime marker meaning the genus is out of tame range.
pub fn select_primes(q: u64, g: u64) -> TameSelection {
    let plan_q = plan_field(q);
    let l1 = least_coprime_prime(plan_q);
    if let Some(mut sel) = refined_selection(plan_q, l1, g) {
        sel.q = q;
        return sel;
    }
    let x_g = compute_xg(plan_q, l1, g);
    if let Some(primes) = fallback_primes(plan_q, l1, g) {
        let l_product = primes.iter().product();
        return TameSelection {
            q,
            g,
            x_g,
            p1: None,
            p2: None,
            p3: None,
            primes,
            l_product,
            mode: SelectionMode::Fallback,
        };
    }
    TameSelection {
        q,
        g,
        x_g,
        p1: None,
        p2: None,
        p3: None,
        primes: vec![l1],
        l_product: l1,
        mode: SelectionMode::Trivial,
    }
}

/// Plans a tame certificate: prime selection followed by the cover solver.
pub fn construct_tame(q: u64, g: u64) -> Result<CurveCertificate> {
    FieldCtx::from_order(q)?;
    let sel = select_primes(q, g);
    if sel.mode == SelectionMode::Trivial {
        return Err(Error::InfeasibleGenus {
            q,
            genus: g,
            family: "tame",
            detail: "genus below every two-prime feasibility bound".into(),
        });
    }
    let params = plan_cover(q, &sel.primes, g)?;
    let lb = params.l_product;
    Ok(CurveCertificate {
        q,
        claimed_genus: g,
        claimed_point_lower_bound: lb,
        construction: Construction::Tame(params),
    })
}

/// The totally ramified prime-degree tower: e ≥ 4 gives d = (q^e−1)/(q−1),
/// genus (d−1)(e−2)/2, and d rational points, beating (2 log q)·g/log g.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TameTower {
    pub q: u64,
    pub e: u64,
    pub d: u64,
    pub genus: u64,
    pub points_lb: u64,
    /// d > (2 log q)·g / log g, evaluated in floating point.
    pub beats_log_bound: bool,
}

pub fn record_genera(q: u64, e: u64) -> Result<TameTower> {
    if e < 4 {
        return Err(Error::OutOfRange {
            what: "tower degree e",
            got: e,
            lo: 4,
            hi: u64::MAX,
        });
    }
    let mut d: u128 = 0;
    let mut power: u128 = 1;
    for _ in 0..e {
        d += power;
        power *= q as u128;
    }
    let d = u64::try_from(d).map_err(|_| Error::FieldTooLarge { p: q, k: e as usize })?;
    // (d−1)(e−2) is even: d−1 is a sum of e−1 powers q, …, q^{e−1}, which is
    // even for even q and has even length for odd q when e is odd.
    let num = (d as u128 - 1) * (e as u128 - 2);
    assert_eq!(num % 2, 0);
    let genus = u64::try_from(num / 2).expect("genus fits in u64");
    let lhs = d as f64;
    let rhs = 2.0 * (q as f64).ln() * genus as f64 / (genus as f64).ln();
    Ok(TameTower {
        q,
        e,
        d,
        genus,
        points_lb: d,
        beats_log_bound: lhs > rhs,
    })
}
