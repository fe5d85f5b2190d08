//! JSON interchange format for exact polynomials.
//!
//! ```json
//! {"dim": 3, "terms": [{"x": [1,0,0], "u": [0,2,0], "blade": [1,2], "a": "1/2", "b": "0", "r": 1}]}
//! ```
//!
//! Each term's coefficient is `a + b*sqrt(r)`; blades list generator indices
//! starting at 1. Terms are written in canonical order, so serialising a
//! parsed document reproduces it byte for byte.

use serde::{Deserialize, Serialize};

use crate::clifford::{check_dim, Blade};
use crate::error::{HscaError, Result};
use crate::poly::{CliffPoly, Exponents, Monomial, TermBuilder};
use crate::rational::Rational;
use crate::scalar::{Coeff, ExactScalar};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct PolyDoc {
    pub dim: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct TermDoc {
    pub x: Vec<u8>,
    pub u: Vec<u8>,
    pub blade: Vec<usize>,
    pub a: String,
    pub b: String,
    pub r: u64,
}

/// Coefficient fields that can be written exactly in the `a + b*sqrt(r)` form.
pub trait ExactCoeff: Coeff {
    fn to_parts(&self) -> (Rational, Rational, u64);
    fn from_parts(a: Rational, b: Rational, r: u64) -> Result<Self>;
}

impl ExactCoeff for Rational {
    fn to_parts(&self) -> (Rational, Rational, u64) {
        (self.clone(), Rational::zero(), 1)
    }

    fn from_parts(a: Rational, b: Rational, r: u64) -> Result<Self> {
        let v = ExactScalar::new(a, b, r);
        if v.is_rational() {
            Ok(v.rational_part().clone())
        } else {
            Err(HscaError::Parse(format!("coefficient {v} is not rational")))
        }
    }
}

impl ExactCoeff for ExactScalar {
    fn to_parts(&self) -> (Rational, Rational, u64) {
        (self.rational_part().clone(), self.surd_part().clone(), self.radicand())
    }

    fn from_parts(a: Rational, b: Rational, r: u64) -> Result<Self> {
        Ok(ExactScalar::new(a, b, r))
    }
}

pub fn to_doc<S: ExactCoeff>(p: &CliffPoly<S>) -> PolyDoc {
    let m = p.dim();
    PolyDoc {
        dim: m,
        terms: p
            .terms()
            .iter()
            .map(|t| {
                let (a, b, r) = t.coeff.to_parts();
                TermDoc {
                    x: t.mono.x.to_vec(m),
                    u: t.mono.u.to_vec(m),
                    blade: t.blade.indices(),
                    a: a.to_string(),
                    b: b.to_string(),
                    r,
                }
            })
            .collect(),
    }
}

pub fn from_doc<S: ExactCoeff>(doc: &PolyDoc) -> Result<CliffPoly<S>> {
    let m = doc.dim;
    check_dim(m)?;
    let mut b = TermBuilder::new(m);
    for t in &doc.terms {
        if t.x.len() != m || t.u.len() != m {
            return Err(HscaError::Parse(format!("exponent vectors must have length {m}")));
        }
        let blade = Blade::from_indices(&t.blade)?;
        if t.blade.iter().any(|&j| j > m) || t.blade.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HscaError::Parse(format!("blade indices must ascend within 1..={m}")));
        }
        let a: Rational = t.a.parse()?;
        let bb: Rational = t.b.parse()?;
        let c = S::from_parts(a, bb, t.r)?;
        b.push(Monomial::new(Exponents::from_slice(&t.x), Exponents::from_slice(&t.u)), blade, c);
    }
    Ok(b.finish())
}

pub fn to_json<S: ExactCoeff>(p: &CliffPoly<S>) -> String {
    serde_json::to_string(&to_doc(p)).expect("polynomial document serialises")
}

pub fn from_json<S: ExactCoeff>(s: &str) -> Result<CliffPoly<S>> {
    let doc: PolyDoc = serde_json::from_str(s)?;
    from_doc(&doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Var;

    #[test]
    fn round_trip_is_byte_exact() {
        let m = 3;
        let p = &CliffPoly::<ExactScalar>::var(m, Var::x(0)) * &CliffPoly::vector(m, crate::poly::Family::U);
        let p = p.scale(&ExactScalar::sqrt_of(21, 5));
        let s = to_json(&p);
        let back: CliffPoly<ExactScalar> = from_json(&s).unwrap();
        assert_eq!(back, p);
        assert_eq!(to_json(&back), s);
    }

    #[test]
    fn parses_documented_example() {
        let s = r#"{"dim":3,"terms":[{"x":[1,0,0],"u":[0,2,0],"blade":[1,2],"a":"1/2","b":"0","r":1}]}"#;
        let p: CliffPoly<Rational> = from_json(s).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(to_json(&p), s);
    }

    #[test]
    fn rejects_bad_input() {
        let bad_len = r#"{"dim":3,"terms":[{"x":[1,0],"u":[0,0,0],"blade":[],"a":"1","b":"0","r":1}]}"#;
        assert!(from_json::<Rational>(bad_len).is_err());
        let bad_blade = r#"{"dim":2,"terms":[{"x":[1,0],"u":[0,0],"blade":[3],"a":"1","b":"0","r":1}]}"#;
        assert!(from_json::<Rational>(bad_blade).is_err());
        let irrational = r#"{"dim":2,"terms":[{"x":[1,0],"u":[0,0],"blade":[],"a":"1","b":"1","r":2}]}"#;
        assert!(from_json::<Rational>(irrational).is_err());
        assert!(from_json::<ExactScalar>(irrational).is_ok());
    }
}
