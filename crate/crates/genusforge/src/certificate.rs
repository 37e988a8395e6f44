//! Curve certificates: a construction payload plus the claims it makes.
//!
//! Serialization lives here too; every certificate round-trips through a
//! canonical JSON form with sorted keys and integer-only arithmetic data.

use serde_json::{json, Map, Value};

use crate::abelian::ASTower;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, UPoly};
use crate::lattice::newton_polygon;
use crate::tame::TameParams;
use crate::toric::{build_family_poly, ToricCurve};

/// Version tag written into every serialized certificate.
pub const SCHEMA_VERSION: u64 = 1;

/// Construction payload of a certificate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Construction {
    Abelian(ASTower),
    Hyperelliptic { h: UPoly },
    Toric(ToricCurve),
    Tame(TameParams),
}

/// A constructed curve with its claimed genus and point lower bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurveCertificate {
    pub q: u64,
    pub claimed_genus: u64,
    pub claimed_point_lower_bound: u64,
    pub construction: Construction,
}

impl CurveCertificate {
    pub fn family(&self) -> &'static str {
        match &self.construction {
            Construction::Abelian(_) => "abelian",
            Construction::Hyperelliptic { .. } => "hyperelliptic",
            Construction::Toric(_) => "toric",
            Construction::Tame(_) => "tame",
        }
    }

    /// Canonical JSON value: sorted keys, ranks and integers only, nothing
    /// environment-dependent.  Polynomial coefficients appear as rank arrays,
    /// constant term first, over the field they were constructed in.
    pub fn to_json(&self) -> Result<Value> {
        let v = match &self.construction {
            Construction::Abelian(t) => {
                let ctx = FieldCtx::from_order(t.base_q)?;
                let twist: Option<Vec<u64>> = t.twist.as_ref().map(|f| f.ranks(&ctx));
                json!({
                    "construction_q": t.construction_q,
                    "family": "abelian",
                    "genus": self.claimed_genus,
                    "i": t.i_seq,
                    "j": t.j_seq,
                    "p": t.p,
                    "points_lb": self.claimed_point_lower_bound,
                    "q": self.q,
                    "twist": twist,
                    "v": SCHEMA_VERSION,
                })
            }
            Construction::Hyperelliptic { h } => {
                let ctx = FieldCtx::from_order(self.q)?;
                json!({
                    "family": "hyperelliptic",
                    "genus": self.claimed_genus,
                    "h": h.ranks(&ctx),
                    "points_lb": self.claimed_point_lower_bound,
                    "q": self.q,
                    "v": SCHEMA_VERSION,
                })
            }
            Construction::Toric(curve) => {
                let hull = newton_polygon(&curve.f)?;
                let vertices: Vec<[i64; 2]> =
                    hull.vertices().iter().map(|p| [p.x, p.y]).collect();
                json!({
                    "a": curve.a_seq,
                    "family": "toric",
                    "genus": self.claimed_genus,
                    "newton_polygon": vertices,
                    "p": curve.p,
                    "points_lb": self.claimed_point_lower_bound,
                    "q": self.q,
                    "r": curve.r,
                    "v": SCHEMA_VERSION,
                })
            }
            Construction::Tame(params) => {
                let ctx = FieldCtx::from_order(params.plan_q)?;
                let places: Option<Vec<Vec<u64>>> = params
                    .places
                    .as_ref()
                    .map(|ps| ps.iter().map(|f| f.ranks(&ctx)).collect());
                json!({
                    "L": params.l_product,
                    "d": params.d,
                    "ell": params.primes,
                    "enumerable": false,
                    "family": "tame",
                    "genus": self.claimed_genus,
                    "places": places,
                    "plan_q": params.plan_q,
                    "points_lb": self.claimed_point_lower_bound,
                    "q": self.q,
                    "r": params.r,
                    "s": params.s,
                    "v": SCHEMA_VERSION,
                })
            }
        };
        Ok(v)
    }

    /// The exact bytes written to certificate files: pretty-printed canonical
    /// JSON with a trailing newline.  Identical input yields identical bytes.
    pub fn to_canonical_string(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.to_json()?)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(v: &Value) -> Result<CurveCertificate> {
        let o = as_object(v)?;
        if get_u64(o, "v")? != SCHEMA_VERSION {
            return Err(bad("unsupported schema version"));
        }
        let family = get_str(o, "family")?;
        let q = get_u64(o, "q")?;
        let genus = get_u64(o, "genus")?;
        let points_lb = get_u64(o, "points_lb")?;
        let construction = match family {
            "abelian" => {
                let p = get_u64(o, "p")?;
                let construction_q = get_u64(o, "construction_q")?;
                let i_seq = get_u64_list(o, "i")?;
                let j_seq = get_opt_u64_list(o, "j")?;
                let ctx = FieldCtx::from_order(q)?;
                let twist = match get_opt_u64_list(o, "twist")? {
                    Some(ranks) => Some(UPoly::from_ranks(&ctx, &ranks)?),
                    None => None,
                };
                Construction::Abelian(ASTower {
                    p,
                    i_seq,
                    j_seq,
                    twist,
                    base_q: q,
                    construction_q,
                })
            }
            "hyperelliptic" => {
                let ctx = FieldCtx::from_order(q)?;
                let h = UPoly::from_ranks(&ctx, &get_u64_list(o, "h")?)?;
                Construction::Hyperelliptic { h }
            }
            "toric" => {
                let p = get_u64(o, "p")?;
                let r = get_u64(o, "r")?;
                let a_seq = get_u64_list(o, "a")?;
                let ctx = FieldCtx::from_order(q)?;
                if ctx.p() != p {
                    return Err(bad("characteristic does not divide q"));
                }
                let curve = build_family_poly(&ctx, r, &a_seq)?;
                let stored: Vec<Value> = get_list(o, "newton_polygon")?.to_vec();
                let hull = newton_polygon(&curve.f)?;
                let rebuilt: Vec<Value> = hull
                    .vertices()
                    .iter()
                    .map(|pt| json!([pt.x, pt.y]))
                    .collect();
                if stored != rebuilt {
                    return Err(bad("newton_polygon does not match the parameters"));
                }
                Construction::Toric(curve)
            }
            "tame" => {
                let plan_q = get_u64(o, "plan_q")?;
                let primes = get_u64_list(o, "ell")?;
                let r = get_u64_list(o, "r")?;
                let s = get_u64_list(o, "s")?;
                let d = get_u64_list(o, "d")?;
                if r.len() != primes.len() || s.len() != primes.len() || d.len() != primes.len() {
                    return Err(bad("ell, r, s, d must have equal lengths"));
                }
                let ctx = FieldCtx::from_order(plan_q)?;
                let places = match o.get("places") {
                    None => return Err(bad("missing key places")),
                    Some(Value::Null) => None,
                    Some(Value::Array(ps)) => {
                        let mut out = Vec::with_capacity(ps.len());
                        for entry in ps {
                            let ranks = u64_list_value(entry, "places")?;
                            out.push(UPoly::from_ranks(&ctx, &ranks)?);
                        }
                        Some(out)
                    }
                    Some(_) => return Err(bad("places must be an array or null")),
                };
                Construction::Tame(TameParams {
                    q,
                    plan_q,
                    primes,
                    r,
                    s,
                    d,
                    l_product: get_u64(o, "L")?,
                    genus,
                    places,
                })
            }
            other => return Err(bad(&format!("unknown family {other:?}"))),
        };
        Ok(CurveCertificate {
            q,
            claimed_genus: genus,
            claimed_point_lower_bound: points_lb,
            construction,
        })
    }

    pub fn from_json_str(s: &str) -> Result<CurveCertificate> {
        Self::from_json(&serde_json::from_str(s)?)
    }
}

fn bad(detail: &str) -> Error {
    Error::BadCertificate(format!("certificate json: {detail}"))
}

fn as_object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| bad("not a json object"))
}

fn get<'a>(o: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    o.get(key).ok_or_else(|| bad(&format!("missing key {key}")))
}

fn get_u64(o: &Map<String, Value>, key: &str) -> Result<u64> {
    get(o, key)?
        .as_u64()
        .ok_or_else(|| bad(&format!("{key} must be a nonnegative integer")))
}

fn get_str<'a>(o: &'a Map<String, Value>, key: &str) -> Result<&'a str> {
    get(o, key)?
        .as_str()
        .ok_or_else(|| bad(&format!("{key} must be a string")))
}

fn get_list<'a>(o: &'a Map<String, Value>, key: &str) -> Result<&'a Vec<Value>> {
    get(o, key)?
        .as_array()
        .ok_or_else(|| bad(&format!("{key} must be an array")))
}

fn u64_list_value(v: &Value, key: &str) -> Result<Vec<u64>> {
    v.as_array()
        .ok_or_else(|| bad(&format!("{key} must be an array")))?
        .iter()
        .map(|x| {
            x.as_u64()
                .ok_or_else(|| bad(&format!("{key} entries must be nonnegative integers")))
        })
        .collect()
}

fn get_u64_list(o: &Map<String, Value>, key: &str) -> Result<Vec<u64>> {
    u64_list_value(get(o, key)?, key)
}

fn get_opt_u64_list(o: &Map<String, Value>, key: &str) -> Result<Option<Vec<u64>>> {
    match get(o, key)? {
        Value::Null => Ok(None),
        v => Ok(Some(u64_list_value(v, key)?)),
    }
}
