//! Curves in toric surfaces with genus read off the Newton polygon.
//!
//! The family f = 1 + y + x^{r+1} + Σ x^i·y^{p(a_i+…+a_r)} has ∂f/∂y = 1,
//! so its smoothness precondition is certified without any point scan, its
//! genus is the interior lattice-point count −r + p·Σ i·a_i, and each of the
//! r+1 off-axis hull edges carries a rational point.  Points are counted on
//! the torus plus one Laurent polynomial per hull edge.

use num_rational::Ratio;

use crate::bivar::BivariatePoly;
use crate::certificate::{Construction, CurveCertificate};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem, UPoly};
use crate::lattice::{boundary_condition, newton_polygon, pick_data, Hull, LatticePoint};
use crate::par::chunked_sum_u64;

/// Member of the explicit family, together with the field it lives over.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ToricCurve {
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub a_seq: Vec<u64>,
    pub f: BivariatePoly,
}

/// Edge restriction of a bivariate polynomial: coefficients read at the
/// edge's lattice points starting from the lexicographically smaller
/// endpoint.  First and last entries are hull vertices, hence nonzero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeData {
    pub from: LatticePoint,
    pub to: LatticePoint,
    pub coeffs: Vec<FieldElem>,
}

impl EdgeData {
    pub fn poly(&self, ctx: &FieldCtx) -> UPoly {
        UPoly::from_coeffs(ctx, self.coeffs.clone())
    }
}

fn check_params(r: u64, a_seq: &[u64]) -> Result<()> {
    let bad = |detail: &str| {
        Err(Error::UnsupportedFamily {
            family: "toric",
            detail: detail.into(),
        })
    };
    if r < 1 {
        return bad("r must be at least 1");
    }
    if a_seq.len() != (r + 1) as usize {
        return bad("a_seq must have exactly r+1 entries");
    }
    if a_seq[0] < 1 || a_seq.windows(2).any(|w| w[0] >= w[1]) {
        return bad("a_seq must satisfy 1 <= a_0 < a_1 < ... < a_r");
    }
    Ok(())
}

/// Assembles f = 1 + y + x^{r+1} + Σ_{i=0}^r x^i·y^{p(a_i+…+a_r)}.
pub fn build_family_poly(ctx: &FieldCtx, r: u64, a_seq: &[u64]) -> Result<ToricCurve> {
    check_params(r, a_seq)?;
    let p = ctx.p();
    let total: u64 = a_seq.iter().sum();
    let yexp = |suffix: u64| -> Result<u32> {
        u32::try_from(p * suffix).map_err(|_| Error::OutOfRange {
            what: "family y-degree",
            got: p * suffix,
            lo: 0,
            hi: u32::MAX as u64,
        })
    };
    yexp(total)?;
    let xdeg = u32::try_from(r + 1).map_err(|_| Error::OutOfRange {
        what: "family x-degree",
        got: r + 1,
        lo: 0,
        hi: u32::MAX as u64,
    })?;
    let one = ctx.one();
    let mut terms = vec![(0u32, 0u32, one), (0, 1, one), (xdeg, 0, one)];
    let mut suffix = total;
    for (i, &a) in a_seq.iter().enumerate() {
        terms.push((i as u32, yexp(suffix)?, one));
        suffix -= a;
    }
    let f = BivariatePoly::from_terms(ctx, &terms);
    // The lone y term is the only one with y-degree prime to p.
    let fy = f.partial_y(ctx);
    assert!(fy.is_nonzero_constant() && ctx.is_one(fy.constant_term(ctx)));
    Ok(ToricCurve {
        p,
        q: ctx.q(),
        r,
        a_seq: a_seq.to_vec(),
        f,
    })
}

/// Genus of the family member: −r + p·Σ i·a_i, which is the number of
/// interior lattice points of the Newton polygon.
pub fn genus_family(p: u64, r: u64, a_seq: &[u64]) -> u64 {
    debug_assert!(check_params(r, a_seq).is_ok());
    let weighted: u64 = a_seq.iter().enumerate().map(|(i, &a)| i as u64 * a).sum();
    let g = p * weighted - r;
    #[cfg(debug_assertions)]
    {
        use crate::lattice::LatticePolygon;
        let mut pts = vec![
            LatticePoint::new(0, 0),
            LatticePoint::new(0, 1),
            LatticePoint::new(r as i64 + 1, 0),
        ];
        let mut suffix: u64 = a_seq.iter().sum();
        for (i, &a) in a_seq.iter().enumerate() {
            pts.push(LatticePoint::new(i as i64, (p * suffix) as i64));
            suffix -= a;
        }
        let hull = LatticePolygon::hull_of(&pts).expect("family polygon is two-dimensional");
        debug_assert_eq!(pick_data(&hull).interior, g);
    }
    g
}

/// Smallest genus the family can reach for a given r (all a_i at their
/// minimum i+1): p·r(r+1)(r+2)/3 − r.
fn min_genus(p: u64, r: u64) -> u128 {
    let r = r as u128;
    (p as u128) * r * (r + 1) * (r + 2) / 3 - r
}

fn attempt(p: u64, r: u64, g: u64) -> Option<Vec<u64>> {
    debug_assert_eq!((g + r) % p, 0);
    // Prefix a_i = i+1 for i ≤ r−2 contributes Σ i(i+1) = (r−2)(r−1)r/3.
    let prefix: u64 = if r >= 2 { (r - 2) * (r - 1) * r / 3 } else { 0 };
    let t = (g + r) / p;
    if t < prefix {
        return None;
    }
    let t = t - prefix;
    if r == 1 {
        // Genus weight of a_0 is zero; only a_1 = T matters.
        return (t >= 2).then(|| vec![1, t]);
    }
    for a_pen in r..=3 * r {
        let rest = t as i128 - ((r - 1) * a_pen) as i128;
        if rest <= 0 {
            break;
        }
        if rest as u64 % r == 0 {
            let a_last = rest as u64 / r;
            if a_last > a_pen {
                let mut a: Vec<u64> = (1..r).collect();
                a.push(a_pen);
                a.push(a_last);
                return Some(a);
            }
        }
    }
    None
}

/// Picks (r, a_seq) with genus_family(p, r, a_seq) = g, taking r ≡ −g (mod p)
/// as large as the minimum-genus bound allows and decrementing by p until the
/// bounded search for (a_{r−1}, a_r) succeeds.
pub fn select_parameters(p: u64, g: u64) -> Result<(u64, Vec<u64>)> {
    if g < 1 {
        return Err(Error::OutOfRange {
            what: "genus",
            got: g,
            lo: 1,
            hi: u64::MAX,
        });
    }
    let infeasible = || {
        Err(Error::InfeasibleGenus {
            q: p,
            genus: g,
            family: "toric",
            detail: "no r >= 1 in the residue class admits parameters".into(),
        })
    };
    let mut r = (p - g % p) % p;
    if r == 0 {
        r = p;
    }
    if min_genus(p, r) > g as u128 {
        return infeasible();
    }
    while min_genus(p, r + p) <= g as u128 {
        r += p;
    }
    loop {
        if let Some(a) = attempt(p, r, g) {
            debug_assert_eq!(genus_family(p, r, &a), g);
            return Ok((r, a));
        }
        if r <= p {
            return infeasible();
        }
        r -= p;
    }
}

/// Outcome of the smoothness precondition (the other two conditions are
/// plain booleans).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ConditionStatus {
    /// A partial derivative is a nonzero constant, so f, f_x, f_y generate
    /// the unit ideal over any extension.
    Certified,
    /// No common zero of (f, f_x, f_y) over F_{q^m} for all m up to the
    /// recorded degree.
    CheckedToDegree(u32),
    /// Common zero found over F_{q^m}; coordinates recorded by rank.
    FailedAt { m: u32, x: u64, y: u64 },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConditionReport {
    pub smooth: ConditionStatus,
    /// Nonzero constant term and f not contained in k[x] or k[y].
    pub constant_and_bivariate: bool,
    /// Every boundary lattice point of the Newton polygon is a vertex or
    /// sits on a coordinate axis.
    pub boundary: bool,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        let smooth_ok = match self.smooth {
            ConditionStatus::Certified => true,
            ConditionStatus::CheckedToDegree(b) => b >= 1,
            ConditionStatus::FailedAt { .. } => false,
        };
        smooth_ok && self.constant_and_bivariate && self.boundary
    }
}

/// Point-pair budget for the scan fallback of the smoothness check.
const SCAN_CAP: u128 = 1 << 26;

pub fn check_agprop(ctx: &FieldCtx, f: &BivariatePoly) -> ConditionReport {
    check_agprop_to(ctx, f, 6)
}

/// As `check_agprop` with an explicit extension-degree cap for the scan.
pub fn check_agprop_to(ctx: &FieldCtx, f: &BivariatePoly, max_degree: u32) -> ConditionReport {
    assert!(!f.is_zero());
    let fx = f.partial_x(ctx);
    let fy = f.partial_y(ctx);
    let smooth = if fx.is_nonzero_constant() || fy.is_nonzero_constant() {
        ConditionStatus::Certified
    } else {
        scan_common_zeros(ctx, f, &fx, &fy, max_degree)
    };
    let constant_and_bivariate =
        !ctx.is_zero(f.constant_term(ctx)) && !f.is_univariate();
    let boundary = match newton_polygon(f) {
        Ok(poly) => boundary_condition(&poly),
        Err(_) => false,
    };
    ConditionReport {
        smooth,
        constant_and_bivariate,
        boundary,
    }
}

fn scan_common_zeros(
    ctx: &FieldCtx,
    f: &BivariatePoly,
    fx: &BivariatePoly,
    fy: &BivariatePoly,
    max_degree: u32,
) -> ConditionStatus {
    let mut checked = 0u32;
    for m in 1..=max_degree {
        let ext = match FieldCtx::new(ctx.p(), ctx.k() * m as usize) {
            Ok(ext) if (ext.q() as u128).pow(2) <= SCAN_CAP => ext,
            _ => break,
        };
        let root = ext
            .embed_root_of(ctx)
            .expect("base field embeds in its own extension");
        let (f, fx, fy) = (
            f.embed(ctx, &ext, root),
            fx.embed(ctx, &ext, root),
            fy.embed(ctx, &ext, root),
        );
        for x in ext.elements() {
            for y in ext.elements() {
                if ext.is_zero(f.eval(&ext, x, y))
                    && ext.is_zero(fx.eval(&ext, x, y))
                    && ext.is_zero(fy.eval(&ext, x, y))
                {
                    return ConditionStatus::FailedAt {
                        m,
                        x: ext.rank(x),
                        y: ext.rank(y),
                    };
                }
            }
        }
        checked = m;
    }
    ConditionStatus::CheckedToDegree(checked)
}

/// One Laurent polynomial per Newton-polygon edge, coefficients read along
/// the edge's lattice points.
pub fn edge_polynomials(ctx: &FieldCtx, f: &BivariatePoly) -> Result<Vec<EdgeData>> {
    let poly = newton_polygon(f)?;
    let mut out = Vec::new();
    for (a, b) in poly.edges() {
        let (from, to) = if a <= b { (a, b) } else { (b, a) };
        let (dx, dy) = (to.x - from.x, to.y - from.y);
        let steps = num_integer::gcd(dx.abs(), dy.abs());
        let (sx, sy) = (dx / steps, dy / steps);
        let coeffs: Vec<FieldElem> = (0..=steps)
            .map(|t| {
                f.coeff(
                    ctx,
                    (from.x + sx * t) as u32,
                    (from.y + sy * t) as u32,
                )
            })
            .collect();
        // Endpoints are hull vertices, hence support points.
        assert!(!ctx.is_zero(coeffs[0]) && !ctx.is_zero(*coeffs.last().unwrap()));
        out.push(EdgeData { from, to, coeffs });
    }
    Ok(out)
}

/// N_m for any polynomial whose `check_agprop` report passes: zeros of f on
/// the torus (F_{q^m}^*)² plus, for each hull edge, the distinct roots of
/// its Laurent polynomial in F_{q^m}^*.
pub fn count_torus_and_edges(
    ctx: &FieldCtx,
    f: &BivariatePoly,
    m: u32,
    budget: u64,
) -> Result<u64> {
    let edges = edge_polynomials(ctx, f)?;
    let ext = FieldCtx::new(ctx.p(), ctx.k() * m as usize)?;
    let qm = ext.q();
    let work = (qm as u128 - 1).pow(2);
    if work > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: work,
            budget: budget as u128,
        });
    }
    let root = ext
        .embed_root_of(ctx)
        .expect("base field embeds in its own extension");
    let fe = f.embed(ctx, &ext, root);
    let chunk = ((qm - 1) / 64).max(64);
    let torus = chunked_sum_u64(1, qm, chunk, |xr| {
        let x = ext.elem_from_rank(xr);
        (1..qm)
            .filter(|&yr| ext.is_zero(fe.eval(&ext, x, ext.elem_from_rank(yr))))
            .count() as u64
    });
    let mut total = torus;
    for e in &edges {
        let pe = e.poly(ctx);
        let ranks = pe.ranks(ctx);
        let pe_ext = UPoly::from_coeffs(
            &ext,
            ranks
                .iter()
                .map(|&r| ext.embed(ctx, root, ctx.elem_from_rank(r)))
                .collect(),
        );
        // Constant coefficient is nonzero, so u = 0 is never a root and the
        // distinct-root count already sticks to the torus of the edge.
        total += pe_ext.distinct_roots_in_field(&ext)?;
    }
    Ok(total)
}

/// N_m for a family member, with the m = 1 sanity bounds asserted.
pub fn count_points_toric(ctx: &FieldCtx, curve: &ToricCurve, m: u32, budget: u64) -> Result<u64> {
    assert_eq!(ctx.q(), curve.q);
    let n = count_torus_and_edges(ctx, &curve.f, m, budget)?;
    if m == 1 {
        let v = newton_polygon(&curve.f)?.num_vertices() as u64;
        let q = ctx.q();
        assert!(n <= (q - 1) * (q - 1) + (q - 1) * v);
        assert!(n >= curve.r);
    }
    Ok(n)
}

/// Full pipeline: parameter selection, family assembly, precondition check,
/// certificate with the r-point lower bound.
pub fn construct_toric(ctx: &FieldCtx, g: u64) -> Result<CurveCertificate> {
    let (r, a_seq) = select_parameters(ctx.p(), g)?;
    let curve = build_family_poly(ctx, r, &a_seq)?;
    assert_eq!(genus_family(curve.p, r, &a_seq), g);
    let report = check_agprop(ctx, &curve.f);
    assert!(matches!(report.smooth, ConditionStatus::Certified));
    assert!(report.all_pass());
    Ok(CurveCertificate {
        q: ctx.q(),
        claimed_genus: g,
        claimed_point_lower_bound: r,
        construction: Construction::Toric(curve),
    })
}

/// Mixed area of the Newton polygons of a factor pair; positive whenever the
/// two supports do not sit on parallel lines, which is the diagnostic for
/// products of genuinely bivariate factors.
pub fn factor_mixed_area(f1: &BivariatePoly, f2: &BivariatePoly) -> Result<Ratio<i128>> {
    let hull = |f: &BivariatePoly| -> Result<Hull> {
        let pts: Vec<LatticePoint> = f
            .support()
            .into_iter()
            .map(|(i, j)| LatticePoint::new(i as i64, j as i64))
            .collect();
        Hull::of(&pts)
    };
    Ok(crate::lattice::mixed_area(&hull(f1)?, &hull(f2)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const BUDGET: u64 = 1 << 24;

    fn f2() -> FieldCtx {
        FieldCtx::new(2, 1).unwrap()
    }

    #[test]
    fn family_poly_examples() {
        let c = build_family_poly(&f2(), 1, &[1, 2]).unwrap();
        assert_eq!(c.f.support(), vec![(0, 0), (0, 1), (0, 6), (1, 4), (2, 0)]);
        let c = build_family_poly(&FieldCtx::new(3, 1).unwrap(), 1, &[1, 2]).unwrap();
        assert_eq!(c.f.support(), vec![(0, 0), (0, 1), (0, 9), (1, 6), (2, 0)]);
        let c = build_family_poly(&f2(), 2, &[1, 2, 3]).unwrap();
        assert_eq!(
            c.f.support(),
            vec![(0, 0), (0, 1), (0, 12), (1, 10), (2, 6), (3, 0)]
        );
    }

    #[test]
    fn family_poly_rejects_bad_params() {
        assert!(build_family_poly(&f2(), 0, &[1]).is_err());
        assert!(build_family_poly(&f2(), 1, &[1]).is_err());
        assert!(build_family_poly(&f2(), 1, &[2, 2]).is_err());
        assert!(build_family_poly(&f2(), 1, &[0, 1]).is_err());
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_family(2, 1, &[1, 2]), 3);
        assert_eq!(genus_family(2, 2, &[1, 2, 3]), 14);
        assert_eq!(genus_family(3, 1, &[1, 2]), 5);
    }

    #[test]
    fn genus_matches_interior_count_exhaustive() {
        // All strictly increasing a-sequences drawn from 1..=12, any r ≤ 5.
        for p in [2u64, 3, 5] {
            let ctx = FieldCtx::new(p, 1).unwrap();
            let mut cases = 0u32;
            for mask in 0u32..(1 << 12) {
                let len = mask.count_ones();
                if !(2..=6).contains(&len) {
                    continue;
                }
                let a: Vec<u64> = (0..12).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
                let r = len as u64 - 1;
                let curve = build_family_poly(&ctx, r, &a).unwrap();
                let hull = newton_polygon(&curve.f).unwrap();
                assert_eq!(
                    pick_data(&hull).interior,
                    genus_family(p, r, &a),
                    "p={p} a={a:?}"
                );
                cases += 1;
            }
            assert_eq!(cases, 66 + 220 + 495 + 792 + 924);
        }
    }

    #[test]
    fn select_parameters_examples() {
        assert_eq!(select_parameters(2, 3).unwrap(), (1, vec![1, 2]));
        assert_eq!(select_parameters(2, 14).unwrap(), (2, vec![1, 2, 3]));
        assert_eq!(select_parameters(3, 5).unwrap(), (1, vec![1, 2]));
    }

    #[test]
    fn select_parameters_sweep() {
        for p in [2u64, 3, 5] {
            let mut hits = 0u32;
            for g in 1..=500u64 {
                match select_parameters(p, g) {
                    Ok((r, a)) => {
                        assert_eq!(r % p, (p - g % p) % p, "g={g}");
                        assert!(r >= 1);
                        assert!(a[0] >= 1 && a.windows(2).all(|w| w[0] < w[1]));
                        assert_eq!(genus_family(p, r, &a), g, "p={p} g={g}");
                        hits += 1;
                    }
                    Err(Error::InfeasibleGenus { .. }) => {}
                    Err(e) => panic!("unexpected error for p={p} g={g}: {e}"),
                }
            }
            assert!(hits > 100, "p={p}: only {hits} feasible genera below 500");
        }
    }

    #[test]
    fn agprop_family_certified() {
        let ctx = f2();
        let c = build_family_poly(&ctx, 1, &[1, 2]).unwrap();
        let rep = check_agprop(&ctx, &c.f);
        assert_eq!(rep.smooth, ConditionStatus::Certified);
        assert!(rep.constant_and_bivariate);
        assert!(rep.boundary);
        assert!(rep.all_pass());
    }

    #[test]
    fn agprop_cuspidal_cubic_fails() {
        let ctx = FieldCtx::new(5, 1).unwrap();
        let f = BivariatePoly::from_terms(
            &ctx,
            &[(0, 2, ctx.one()), (3, 0, ctx.neg(ctx.one()))],
        );
        let rep = check_agprop(&ctx, &f);
        assert_eq!(rep.smooth, ConditionStatus::FailedAt { m: 1, x: 0, y: 0 });
        assert!(!rep.constant_and_bivariate);
        assert!(!rep.boundary);
        assert!(!rep.all_pass());
    }

    #[test]
    fn agprop_line_passes() {
        let ctx = f2();
        let one = ctx.one();
        let f = BivariatePoly::from_terms(&ctx, &[(0, 0, one), (1, 0, one), (0, 1, one)]);
        let rep = check_agprop(&ctx, &f);
        assert_eq!(rep.smooth, ConditionStatus::Certified);
        assert!(rep.all_pass());
    }

    #[test]
    fn agprop_scan_path() {
        // f = 1 + x³ + y³ over F_2: both partials vanish only at the origin,
        // where f = 1, so the scan clears every level — but the hypotenuse
        // of the Newton polygon carries non-vertex off-axis points.
        let ctx = f2();
        let one = ctx.one();
        let f = BivariatePoly::from_terms(&ctx, &[(0, 0, one), (3, 0, one), (0, 3, one)]);
        let rep = check_agprop(&ctx, &f);
        assert_eq!(rep.smooth, ConditionStatus::CheckedToDegree(6));
        assert!(rep.constant_and_bivariate);
        assert!(!rep.boundary);
        assert!(!rep.all_pass());

        // f = 1 + x²y + xy² passes everything through the scan: partials are
        // x² and y², jointly zero only at the origin, and every boundary
        // point of the triangle (0,0),(2,1),(1,2) is a vertex.
        let f = BivariatePoly::from_terms(&ctx, &[(0, 0, one), (2, 1, one), (1, 2, one)]);
        let rep = check_agprop(&ctx, &f);
        assert_eq!(rep.smooth, ConditionStatus::CheckedToDegree(6));
        assert!(rep.all_pass());
    }

    #[test]
    fn edge_polynomial_examples() {
        let ctx = f2();
        let one = ctx.one();
        let line = BivariatePoly::from_terms(&ctx, &[(0, 0, one), (1, 0, one), (0, 1, one)]);
        let edges = edge_polynomials(&ctx, &line).unwrap();
        assert_eq!(edges.len(), 3);
        for e in &edges {
            assert_eq!(e.coeffs, vec![one, one]);
        }

        let c = build_family_poly(&ctx, 1, &[1, 2]).unwrap();
        let edges = edge_polynomials(&ctx, &c.f).unwrap();
        assert_eq!(edges.len(), 4);
        let offaxis = edges
            .iter()
            .find(|e| e.from == LatticePoint::new(1, 4) && e.to == LatticePoint::new(2, 0))
            .unwrap();
        assert_eq!(offaxis.coeffs, vec![one, one]);
        let bottom = edges
            .iter()
            .find(|e| e.from == LatticePoint::new(0, 0) && e.to == LatticePoint::new(2, 0))
            .unwrap();
        assert_eq!(bottom.coeffs, vec![one, ctx.zero(), one]);
        let left = edges
            .iter()
            .find(|e| e.from == LatticePoint::new(0, 0) && e.to == LatticePoint::new(0, 6))
            .unwrap();
        assert_eq!(left.coeffs.len(), 7);
        assert!(ctx.is_one(left.coeffs[1]));

        let univ = BivariatePoly::from_terms(&ctx, &[(0, 0, one), (2, 0, one)]);
        assert!(matches!(
            edge_polynomials(&ctx, &univ),
            Err(Error::DegeneratePolygon)
        ));
    }

    #[test]
    fn count_line_is_projective_line() {
        let ctx = f2();
        let one = ctx.one();
        let line = BivariatePoly::from_terms(&ctx, &[(0, 0, one), (1, 0, one), (0, 1, one)]);
        assert_eq!(count_torus_and_edges(&ctx, &line, 1, BUDGET).unwrap(), 3);
        assert_eq!(count_torus_and_edges(&ctx, &line, 2, BUDGET).unwrap(), 5);
        let f4 = FieldCtx::new(2, 2).unwrap();
        let line4 = BivariatePoly::from_terms(&f4, &[(0, 0, one), (1, 0, one), (0, 1, one)]);
        assert_eq!(count_torus_and_edges(&f4, &line4, 1, BUDGET).unwrap(), 5);
    }

    #[test]
    fn count_family_members() {
        let ctx = f2();
        let c = build_family_poly(&ctx, 1, &[1, 2]).unwrap();
        assert_eq!(count_points_toric(&ctx, &c, 1, BUDGET).unwrap(), 3);
        assert_eq!(count_points_toric(&ctx, &c, 2, BUDGET).unwrap(), 5);

        let f3 = FieldCtx::new(3, 1).unwrap();
        let c = build_family_poly(&f3, 1, &[1, 2]).unwrap();
        assert_eq!(count_points_toric(&f3, &c, 1, BUDGET).unwrap(), 4);
    }

    #[test]
    fn count_budget_enforced() {
        let ctx = f2();
        let c = build_family_poly(&ctx, 1, &[1, 2]).unwrap();
        assert!(matches!(
            count_points_toric(&ctx, &c, 10, 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn construct_toric_certificates() {
        let ctx = f2();
        let cert = construct_toric(&ctx, 3).unwrap();
        assert_eq!(cert.claimed_genus, 3);
        assert_eq!(cert.claimed_point_lower_bound, 1);
        match &cert.construction {
            Construction::Toric(c) => {
                assert_eq!((c.r, c.a_seq.clone()), (1, vec![1, 2]));
                assert_eq!(c.q, 2);
            }
            other => panic!("expected toric, got {other:?}"),
        }
        let cert = construct_toric(&ctx, 14).unwrap();
        assert_eq!(cert.claimed_point_lower_bound, 2);

        let f4 = FieldCtx::new(2, 2).unwrap();
        let cert = construct_toric(&f4, 3).unwrap();
        assert_eq!(cert.q, 4);

        assert!(matches!(
            construct_toric(&ctx, 1),
            Err(Error::InfeasibleGenus { .. })
        ));
    }

    #[test]
    fn mixed_area_diagnostic() {
        let ctx = FieldCtx::new(5, 1).unwrap();
        let one = ctx.one();
        let tri = BivariatePoly::from_terms(&ctx, &[(0, 0, one), (1, 0, one), (0, 1, one)]);
        assert!(factor_mixed_area(&tri, &tri).unwrap() > Ratio::from_integer(0));

        // Parallel segment supports have mixed area zero.
        let seg1 = BivariatePoly::from_terms(&ctx, &[(0, 0, one), (1, 0, one)]);
        let seg2 = BivariatePoly::from_terms(&ctx, &[(0, 0, one), (2, 0, one)]);
        assert_eq!(factor_mixed_area(&seg1, &seg2).unwrap(), Ratio::from_integer(0));

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut polygon_pairs = 0u32;
        while polygon_pairs < 50 {
            let random_poly = |rng: &mut ChaCha8Rng| {
                let mut f = BivariatePoly::zero();
                for _ in 0..rng.gen_range(3..=8) {
                    let c = ctx.elem_from_rank(rng.gen_range(1..5));
                    f.add_term(&ctx, rng.gen_range(0..7), rng.gen_range(0..7), c);
                }
                f
            };
            let (f1, f2) = (random_poly(&mut rng), random_poly(&mut rng));
            if f1.is_zero() || f2.is_zero() {
                continue;
            }
            let is_polygon = |f: &BivariatePoly| {
                newton_polygon(f).is_ok()
            };
            if is_polygon(&f1) && is_polygon(&f2) {
                polygon_pairs += 1;
                assert!(
                    factor_mixed_area(&f1, &f2).unwrap() > Ratio::from_integer(0),
                    "{:?} {:?}",
                    f1.support(),
                    f2.support()
                );
            }
        }
    }
}
