//! JSON record formats for curve and field fixtures, with load-time
//! validation and conversion into the descent engine's input types.
//!
//! Curve records carry declared global arithmetic data (rank, generators,
//! torsion, Sha orders, analytic vanishing flags).  These are inputs, not
//! computed facts; reports label them as declared.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::descent::{CurveData, GlobalInput, LValue};
use crate::elliptic::{Curve, QPoint};
use crate::fields::{CyclicFieldSpec, DihedralFieldSpec, FieldSpec, RamifiedEntry};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("validation error: {0}")]
    Validation(String),
}

fn default_torsion() -> u64 {
    1
}

/// Reference to the curve a record is a quadratic twist of.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistRef {
    pub label: String,
    pub discriminant: i64,
}

/// One elliptic curve over Q with its declared invariants.  Coefficients
/// and coordinates are decimal strings so records survive arbitrary size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub label: String,
    /// [a1, a2, a3, a4, a6]
    pub ainvs: [String; 5],
    pub conductor: u64,
    pub rank: usize,
    /// projective integer triples [X, Y, Z]; Z = 0 means the origin
    #[serde(default)]
    pub generators: Vec<[String; 3]>,
    #[serde(default = "default_torsion")]
    pub torsion_order: u64,
    /// prime p -> declared order of Sha(E/Q)[p^∞]
    #[serde(default)]
    pub sha_p: BTreeMap<u64, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist_of: Option<TwistRef>,
    /// character id ("chi" cyclic, "rho" dihedral) -> L-value vanishes
    #[serde(default)]
    pub analytic: BTreeMap<String, bool>,
}

/// Field description, mirroring the two field-spec kinds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldRecord {
    Cyclic {
        p: u64,
        conductor: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        character: Option<BTreeMap<u64, u64>>,
    },
    Dihedral {
        p: u64,
        /// monic defining polynomial of L, coefficients low to high
        poly: Vec<i64>,
        delta_f: i64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        ramified_table: Vec<RamifiedEntry>,
        #[serde(default)]
        assume_irreducible: bool,
    },
}

fn parse_bigint(s: &str, what: &str) -> Result<BigInt, IngestError> {
    s.parse::<BigInt>()
        .map_err(|_| IngestError::Validation(format!("{what}: not a decimal integer: {s:?}")))
}

impl CurveRecord {
    pub fn curve(&self) -> Result<Curve, IngestError> {
        let mut a = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
        for (i, s) in self.ainvs.iter().enumerate() {
            a[i] = parse_bigint(s, "ainvs")?;
        }
        Ok(Curve::from_bigint(a))
    }

    /// Generators as exact rational points (X/Z, Y/Z).
    pub fn points(&self) -> Result<Vec<QPoint>, IngestError> {
        let mut out = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let x = parse_bigint(&g[0], "generator")?;
            let y = parse_bigint(&g[1], "generator")?;
            let z = parse_bigint(&g[2], "generator")?;
            if z.is_zero() {
                out.push(QPoint::Infinity);
            } else {
                out.push(QPoint::Affine(
                    BigRational::new(x, z.clone()),
                    BigRational::new(y, z),
                ));
            }
        }
        Ok(out)
    }

    fn validate(&self) -> Result<(), IngestError> {
        let curve = self.curve()?;
        if curve.discriminant().is_zero() {
            return Err(IngestError::Validation(format!(
                "{}: the coefficients define a singular curve",
                self.label
            )));
        }
        if self.torsion_order == 0 {
            return Err(IngestError::Validation(format!(
                "{}: torsion_order must be positive",
                self.label
            )));
        }
        for (i, pt) in self.points()?.iter().enumerate() {
            if !curve.is_on(pt) {
                return Err(IngestError::Validation(format!(
                    "{}: generator #{i} is not on the curve",
                    self.label
                )));
            }
        }
        Ok(())
    }

    /// v_p of the declared order of Sha(E/Q)[p^∞] (0 when absent).
    pub fn sha_exp(&self, p: u64) -> u32 {
        let mut order = self.sha_p.get(&p).copied().unwrap_or(1);
        let mut e = 0;
        while order % p == 0 {
            order /= p;
            e += 1;
        }
        e
    }

    pub fn lvalue(&self, character_id: &str) -> LValue {
        match self.analytic.get(character_id) {
            Some(true) => LValue::Zero,
            Some(false) => LValue::NonZero,
            None => LValue::Unknown,
        }
    }

    pub fn curve_data(&self, p: u64) -> Result<CurveData, IngestError> {
        Ok(CurveData {
            curve: self.curve()?,
            conductor: self.conductor,
            rank: self.rank,
            generators: self.points()?,
            torsion_order: self.torsion_order,
            sha_exp: self.sha_exp(p),
        })
    }
}

impl FieldRecord {
    pub fn p(&self) -> u64 {
        match self {
            FieldRecord::Cyclic { p, .. } | FieldRecord::Dihedral { p, .. } => *p,
        }
    }

    pub fn spec(&self) -> Result<FieldSpec, IngestError> {
        self.validate()?;
        Ok(match self {
            FieldRecord::Cyclic { p, conductor, character } => FieldSpec::Cyclic(CyclicFieldSpec {
                p: *p,
                conductor: *conductor,
                character: character.clone(),
            }),
            FieldRecord::Dihedral { p, poly, delta_f, ramified_table, assume_irreducible } => {
                FieldSpec::Dihedral(DihedralFieldSpec {
                    p: *p,
                    poly: poly.clone(),
                    disc_f: *delta_f,
                    ramified_table: ramified_table.clone(),
                    assume_irreducible: *assume_irreducible,
                })
            }
        })
    }

    fn validate(&self) -> Result<(), IngestError> {
        let p = self.p();
        if p < 3 || !crate::fields::primes_below(p + 1).contains(&p) {
            return Err(IngestError::Validation(format!("p = {p} is not an odd prime")));
        }
        match self {
            FieldRecord::Cyclic { conductor, .. } => {
                if *conductor < 2 {
                    return Err(IngestError::Validation("conductor must be at least 2".into()));
                }
            }
            FieldRecord::Dihedral { poly, delta_f, .. } => {
                if poly.last() != Some(&1) || poly.len() as u64 != p + 1 {
                    return Err(IngestError::Validation(format!(
                        "defining polynomial must be monic of degree {p}"
                    )));
                }
                let d = *delta_f;
                let squarefree = |m: i64| {
                    let m = m.unsigned_abs();
                    m > 0 && (2..).take_while(|q| q * q <= m).all(|q| m % (q * q) != 0)
                };
                let fundamental = match d.rem_euclid(4) {
                    1 => d != 1 && squarefree(d),
                    0 => matches!((d / 4).rem_euclid(4), 2 | 3) && squarefree(d / 4),
                    _ => false,
                };
                if !fundamental {
                    return Err(IngestError::Validation(format!(
                        "delta_f = {d} is not a fundamental discriminant"
                    )));
                }
            }
        }
        Ok(())
    }
}

pub fn parse_curve_record(text: &str) -> Result<CurveRecord, IngestError> {
    let rec: CurveRecord = serde_json::from_str(text)?;
    rec.validate()?;
    Ok(rec)
}

pub fn parse_field_record(text: &str) -> Result<FieldRecord, IngestError> {
    let rec: FieldRecord = serde_json::from_str(text)?;
    rec.validate()?;
    Ok(rec)
}

/// Canonical rendering: stable key order, two-space indentation.
pub fn render_curve_record(rec: &CurveRecord) -> String {
    serde_json::to_string_pretty(rec).expect("curve records serialize")
}

pub fn render_field_record(rec: &FieldRecord) -> String {
    serde_json::to_string_pretty(rec).expect("field records serialize")
}

/// Assemble the descent engine's input from parsed records.  `twist` must
/// be supplied for dihedral fields and ignored otherwise; its record
/// should name the base curve in `twist_of`.
pub fn global_input(
    curve: &CurveRecord,
    twist: Option<&CurveRecord>,
    field: &FieldRecord,
    rank_ext: Option<usize>,
) -> Result<GlobalInput, IngestError> {
    let p = field.p();
    let spec = field.spec()?;
    let (character_id, twist_data) = match &spec {
        FieldSpec::Cyclic(_) => ("chi", None),
        FieldSpec::Dihedral(d) => {
            let t = twist.ok_or_else(|| {
                IngestError::Validation(
                    "dihedral analysis needs the quadratic twist curve record".into(),
                )
            })?;
            match &t.twist_of {
                Some(tw) if tw.discriminant == d.disc_f => {}
                Some(tw) => {
                    return Err(IngestError::Validation(format!(
                        "twist record {} is the twist by {}, field needs {}",
                        t.label, tw.discriminant, d.disc_f
                    )))
                }
                None => {
                    return Err(IngestError::Validation(format!(
                        "record {} does not declare itself a twist",
                        t.label
                    )))
                }
            }
            let expected = curve.curve()?.quadratic_twist(&BigInt::from(d.disc_f));
            if t.curve()?.j_invariant() != expected.j_invariant() {
                return Err(IngestError::Validation(format!(
                    "record {} is not a quadratic twist of {} (j-invariants differ)",
                    t.label, curve.label
                )));
            }
            ("rho", Some(t.curve_data(p)?))
        }
    };
    let lvalue = curve.lvalue(character_id);
    Ok(GlobalInput { p, field: spec, curve: curve.curve_data(p)?, twist: twist_data, lvalue, rank_ext })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_37a1() -> &'static str {
        r#"{
            "label": "37a1",
            "ainvs": ["0", "0", "1", "-1", "0"],
            "conductor": 37,
            "rank": 1,
            "generators": [["0", "0", "1"]]
        }"#
    }

    #[test]
    fn minimal_record_loads_and_generator_is_on_curve() {
        let rec = parse_curve_record(minimal_37a1()).unwrap();
        assert_eq!(rec.label, "37a1");
        assert_eq!(rec.torsion_order, 1);
        let pts = rec.points().unwrap();
        assert_eq!(pts.len(), 1);
        assert!(rec.curve().unwrap().is_on(&pts[0]));
    }

    #[test]
    fn generator_off_the_curve_is_rejected() {
        let text = minimal_37a1().replace("[\"0\", \"0\", \"1\"]", "[\"1\", \"1\", \"1\"]");
        let err = parse_curve_record(&text).unwrap_err();
        assert!(matches!(err, IngestError::Validation(_)), "{err}");
        assert!(err.to_string().contains("generator #0"));
    }

    #[test]
    fn singular_coefficients_are_rejected() {
        let text = r#"{"label":"cusp","ainvs":["0","0","0","0","0"],"conductor":1,"rank":0}"#;
        let err = parse_curve_record(text).unwrap_err();
        assert!(err.to_string().contains("singular"));
    }

    #[test]
    fn render_parse_round_trip_is_normalizing() {
        let rec = parse_curve_record(minimal_37a1()).unwrap();
        let rendered = render_curve_record(&rec);
        let rec2 = parse_curve_record(&rendered).unwrap();
        assert_eq!(rec, rec2);
        assert_eq!(render_curve_record(&rec2), rendered);
    }

    #[test]
    fn projective_scaling_reaches_rational_points() {
        let text = r#"{
            "label": "s",
            "ainvs": ["0", "0", "1", "-1", "0"],
            "conductor": 37,
            "rank": 1,
            "generators": [["0", "0", "3"], ["0", "1", "0"]]
        }"#;
        let rec = parse_curve_record(text).unwrap();
        let pts = rec.points().unwrap();
        assert_eq!(pts[1], QPoint::Infinity);
        assert!(rec.curve().unwrap().is_on(&pts[0]));
    }

    #[test]
    fn field_records_round_trip_both_kinds() {
        let cyc = r#"{"kind":"cyclic","p":7,"conductor":29}"#;
        let rec = parse_field_record(cyc).unwrap();
        assert!(matches!(rec.spec().unwrap(), FieldSpec::Cyclic(_)));
        let rec2 = parse_field_record(&render_field_record(&rec)).unwrap();
        assert_eq!(rec, rec2);

        let dih = r#"{
            "kind": "dihedral",
            "p": 3,
            "poly": [-2, 2, 0, 1],
            "delta_f": -35,
            "ramified_table": [
                {"ell": 2, "e": 3, "f": 1, "g": 2},
                {"ell": 5, "e": 2, "f": 1, "g": 3},
                {"ell": 7, "e": 2, "f": 1, "g": 3}
            ]
        }"#;
        let rec = parse_field_record(dih).unwrap();
        match rec.spec().unwrap() {
            FieldSpec::Dihedral(d) => {
                assert_eq!(d.disc_f, -35);
                assert_eq!(d.poly, vec![-2, 2, 0, 1]);
            }
            _ => panic!("expected dihedral"),
        }
        let rec2 = parse_field_record(&render_field_record(&rec)).unwrap();
        assert_eq!(rec, rec2);
    }

    #[test]
    fn non_fundamental_discriminant_is_rejected() {
        let dih = r#"{"kind":"dihedral","p":3,"poly":[-2,2,0,1],"delta_f":-36}"#;
        let err = parse_field_record(dih).unwrap_err();
        assert!(err.to_string().contains("fundamental"));
    }

    #[test]
    fn analytic_flags_map_to_lvalues() {
        let mut rec = parse_curve_record(minimal_37a1()).unwrap();
        assert_eq!(rec.lvalue("chi"), LValue::Unknown);
        rec.analytic.insert("chi".into(), true);
        assert_eq!(rec.lvalue("chi"), LValue::Zero);
        rec.analytic.insert("chi".into(), false);
        assert_eq!(rec.lvalue("chi"), LValue::NonZero);
    }

    #[test]
    fn sha_exponent_reads_the_p_part() {
        let mut rec = parse_curve_record(minimal_37a1()).unwrap();
        assert_eq!(rec.sha_exp(5), 0);
        rec.sha_p.insert(5, 25);
        assert_eq!(rec.sha_exp(5), 2);
        rec.sha_p.insert(3, 2);
        assert_eq!(rec.sha_exp(3), 0);
    }

    #[test]
    fn global_input_cyclic_wires_the_declared_data() {
        let mut rec = parse_curve_record(minimal_37a1()).unwrap();
        rec.analytic.insert("chi".into(), false);
        let field = parse_field_record(r#"{"kind":"cyclic","p":5,"conductor":211}"#).unwrap();
        let input = global_input(&rec, None, &field, None).unwrap();
        assert_eq!(input.p, 5);
        assert_eq!(input.curve.rank, 1);
        assert_eq!(input.lvalue, LValue::NonZero);
        assert!(input.twist.is_none());
    }

    #[test]
    fn global_input_dihedral_requires_a_matching_twist() {
        let rec = parse_curve_record(minimal_37a1()).unwrap();
        let field = parse_field_record(
            r#"{"kind":"dihedral","p":3,"poly":[-2,2,0,1],"delta_f":-35,
                "ramified_table":[{"ell":2,"e":3,"f":1,"g":2},
                                  {"ell":5,"e":2,"f":1,"g":3},
                                  {"ell":7,"e":2,"f":1,"g":3}]}"#,
        )
        .unwrap();
        let err = global_input(&rec, None, &field, None).unwrap_err();
        assert!(err.to_string().contains("twist"));

        let twist_curve = rec.curve().unwrap().quadratic_twist(&BigInt::from(-35));
        let ainvs: Vec<String> = twist_curve.a.iter().map(|c| c.to_string()).collect();
        let twist_rec = CurveRecord {
            label: "37a1(-35)".into(),
            ainvs: ainvs.try_into().unwrap(),
            conductor: 45325,
            rank: 0,
            generators: vec![],
            torsion_order: 1,
            sha_p: BTreeMap::new(),
            twist_of: Some(TwistRef { label: "37a1".into(), discriminant: -35 }),
            analytic: BTreeMap::new(),
        };
        let input = global_input(&rec, Some(&twist_rec), &field, None).unwrap();
        assert!(input.twist.is_some());
        assert_eq!(input.lvalue, LValue::Unknown);
    }
}
