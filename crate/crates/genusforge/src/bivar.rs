//! Sparse bivariate polynomials over a finite field.
//!
//! Coefficients are keyed by exponent pair; zero coefficients are never
//! stored, so the support is exactly the key set and needs no field context
//! to read off.

use std::collections::BTreeMap;

use crate::field::{FieldCtx, FieldElem};

/// Sparse polynomial in two variables with nonzero coefficients only.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), FieldElem>,
}

impl BivariatePoly {
    pub fn zero() -> BivariatePoly {
        BivariatePoly {
            terms: BTreeMap::new(),
        }
    }

    /// Builds from (i, j, coefficient) triples; repeated exponent pairs are
    /// summed, zero results dropped.
    pub fn from_terms(ctx: &FieldCtx, terms: &[(u32, u32, FieldElem)]) -> BivariatePoly {
        let mut f = BivariatePoly::zero();
        for &(i, j, c) in terms {
            f.add_term(ctx, i, j, c);
        }
        f
    }

    /// Adds c·x^i·y^j, dropping the entry if the coefficient cancels.
    pub fn add_term(&mut self, ctx: &FieldCtx, i: u32, j: u32, c: FieldElem) {
        if ctx.is_zero(c) {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(|| ctx.zero());
        *slot = ctx.add(*slot, c);
        if ctx.is_zero(*slot) {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of x^i·y^j (zero when absent).
    pub fn coeff(&self, ctx: &FieldCtx, i: u32, j: u32) -> FieldElem {
        self.terms.get(&(i, j)).copied().unwrap_or_else(|| ctx.zero())
    }

    pub fn constant_term(&self, ctx: &FieldCtx) -> FieldElem {
        self.coeff(ctx, 0, 0)
    }

    /// Exponent pairs with nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<(u32, u32)> {
        self.terms.keys().copied().collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), FieldElem)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    /// True if every term is constant in x or every term is constant in y.
    pub fn is_univariate(&self) -> bool {
        self.terms.keys().all(|&(i, _)| i == 0) || self.terms.keys().all(|&(_, j)| j == 0)
    }

    /// True if the polynomial is a single nonzero constant.
    pub fn is_nonzero_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms.contains_key(&(0, 0))
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FieldElem, y: FieldElem) -> FieldElem {
        let mut acc = ctx.zero();
        for (&(i, j), &c) in &self.terms {
            let t = ctx.mul(c, ctx.mul(ctx.pow(x, i as u64), ctx.pow(y, j as u64)));
            acc = ctx.add(acc, t);
        }
        acc
    }

    pub fn partial_x(&self, ctx: &FieldCtx) -> BivariatePoly {
        let mut out = BivariatePoly::zero();
        for (&(i, j), &c) in &self.terms {
            if i == 0 {
                continue;
            }
            let m = ctx.from_u64(i as u64 % ctx.p());
            out.add_term(ctx, i - 1, j, ctx.mul(c, m));
        }
        out
    }

    pub fn partial_y(&self, ctx: &FieldCtx) -> BivariatePoly {
        let mut out = BivariatePoly::zero();
        for (&(i, j), &c) in &self.terms {
            if j == 0 {
                continue;
            }
            let m = ctx.from_u64(j as u64 % ctx.p());
            out.add_term(ctx, i, j - 1, ctx.mul(c, m));
        }
        out
    }

    /// Maps every coefficient through the embedding of `base` into `ext`
    /// determined by `root` (an image of the base generator).
    pub fn embed(&self, base: &FieldCtx, ext: &FieldCtx, root: FieldElem) -> BivariatePoly {
        let mut out = BivariatePoly::zero();
        for (&(i, j), &c) in &self.terms {
            out.add_term(ext, i, j, ext.embed(base, root, c));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 1 + y + x² + y⁶ + x·y⁴ over F_2.
    fn family_example(ctx: &FieldCtx) -> BivariatePoly {
        let one = ctx.one();
        BivariatePoly::from_terms(
            ctx,
            &[(0, 0, one), (0, 1, one), (2, 0, one), (0, 6, one), (1, 4, one)],
        )
    }

    #[test]
    fn support_is_sorted_and_zero_free() {
        let ctx = FieldCtx::new(2, 1).unwrap();
        let f = family_example(&ctx);
        assert_eq!(f.support(), vec![(0, 0), (0, 1), (0, 6), (1, 4), (2, 0)]);
        assert_eq!(f.num_terms(), 5);
        // Adding x² again cancels it over F_2.
        let mut g = f.clone();
        g.add_term(&ctx, 2, 0, ctx.one());
        assert_eq!(g.num_terms(), 4);
        assert!(ctx.is_zero(g.coeff(&ctx, 2, 0)));
    }

    #[test]
    fn eval_on_small_field() {
        let ctx = FieldCtx::new(2, 1).unwrap();
        let f = family_example(&ctx);
        let (z, o) = (ctx.zero(), ctx.one());
        assert!(ctx.is_one(f.eval(&ctx, z, z)));
        // f(1,1) = 1+1+1+1+1 = 1 over F_2.
        assert!(ctx.is_one(f.eval(&ctx, o, o)));
        // f(0,1) = 1+1+1 = 1; f(1,0) = 1+1 = 0.
        assert!(ctx.is_one(f.eval(&ctx, z, o)));
        assert!(ctx.is_zero(f.eval(&ctx, o, z)));
    }

    #[test]
    fn partials_of_family_example() {
        let ctx = FieldCtx::new(2, 1).unwrap();
        let f = family_example(&ctx);
        // d/dy kills every even-exponent term, leaving the bare y term.
        let fy = f.partial_y(&ctx);
        assert!(fy.is_nonzero_constant());
        assert!(ctx.is_one(fy.constant_term(&ctx)));
        // d/dx: 2x vanishes, x·y⁴ leaves y⁴.
        let fx = f.partial_x(&ctx);
        assert_eq!(fx.support(), vec![(0, 4)]);
        assert!(fx.is_univariate());
        assert!(!f.is_univariate());
    }

    #[test]
    fn partial_with_odd_characteristic() {
        let ctx = FieldCtx::new(3, 1).unwrap();
        // f = x² + 2xy: f_x = 2x + 2y, f_y = 2x.
        let two = ctx.from_u64(2);
        let f = BivariatePoly::from_terms(&ctx, &[(2, 0, ctx.one()), (1, 1, two)]);
        let fx = f.partial_x(&ctx);
        assert_eq!(fx.coeff(&ctx, 1, 0), two);
        assert_eq!(fx.coeff(&ctx, 0, 1), two);
        let fy = f.partial_y(&ctx);
        assert_eq!(fy.support(), vec![(1, 0)]);
        assert_eq!(fy.coeff(&ctx, 1, 0), two);
    }

    #[test]
    fn embedding_commutes_with_eval() {
        let base = FieldCtx::new(2, 1).unwrap();
        let ext = FieldCtx::new(2, 3).unwrap();
        let root = ext.embed_root_of(&base).unwrap();
        let f = family_example(&base);
        let g = f.embed(&base, &ext, root);
        assert_eq!(g.support(), f.support());
        // Base-field points evaluate identically after embedding.
        let chk = |x: u64, y: u64| {
            let v = f.eval(&base, base.from_u64(x), base.from_u64(y));
            let w = g.eval(&ext, ext.from_u64(x), ext.from_u64(y));
            assert_eq!(ext.embed(&base, root, v), w);
        };
        chk(0, 0);
        chk(0, 1);
        chk(1, 0);
        chk(1, 1);
        // Coefficients land in the prime subfield, so g commutes with
        // Frobenius: g(x,y)² = g(x²,y²).
        let t = ext.gen();
        let u = ext.add(t, ext.one());
        let v = g.eval(&ext, t, u);
        assert_eq!(ext.mul(v, v), g.eval(&ext, ext.mul(t, t), ext.mul(u, u)));
    }
}
