//! JSON encoding of fields, scalars, automorphisms, groups and reports.
//!
//! Scalars are written as rationals `"p/q"`, cyclotomic values `{"k", "coeffs"}` and rational
//! functions `{"num", "den"}`, always in canonical form so equal values produce equal bytes. Input
//! also accepts expression strings such as `"1 + zeta"` or `"(x^2 + 1)/(x - 1)"`. Polynomials are lists of
//! `[[i, j], scalar]` in graded-lex order; input may also give a component as an expression in
//! `z1`, `z2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::dvr::KRTrace;
use crate::equivariant::{CentralizerDescription, FiberDescription};
use crate::error::{Error, Result};
use crate::family::{CentralizerShape, FamilyAction, Gluing, LinearizationReport, PoleTrace};
use crate::fields::{Cyclo, Elem, Field, KPoly, RatFunc, Scalar};
use crate::group::{GroupAction, LinearRep};
use crate::linalg::mat2::Mat2;
use crate::plane::{Factor, PlaneAut, PlaneEndo, TameDecomposition};
use crate::poly::BiPoly;
use crate::selftest::SuiteReport;

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

pub fn parse_field(s: &str) -> Result<Field> {
    let s = s.trim();
    let rest = s.strip_prefix('Q').ok_or_else(|| schema(format!("unknown field {s:?}")))?;
    let (k, rest) = match rest.strip_prefix("(zeta_") {
        Some(r) => {
            let end = r.find(')').ok_or_else(|| schema(format!("unclosed field descriptor {s:?}")))?;
            let k: u32 = r[..end].parse().map_err(|_| schema(format!("bad cyclotomic order in {s:?}")))?;
            if k == 0 {
                return Err(schema("cyclotomic order must be positive"));
            }
            (k, &r[end + 1..])
        }
        None => (1, rest),
    };
    if rest.is_empty() {
        return Ok(Field::cyclotomic(k));
    }
    let var = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .filter(|v| is_ident(v) && !["zeta", "z1", "z2"].contains(v))
        .ok_or_else(|| schema(format!("bad field descriptor {s:?}")))?;
    Ok(Field::rational_functions(k, var))
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    c.next().is_some_and(|f| f.is_ascii_alphabetic()) && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

pub fn field_text(f: &Field) -> String {
    f.to_string()
}

fn rational_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Sum of signed terms, each given as (negative, magnitude text).
fn join_terms(terms: &[(bool, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (neg, t)) in terms.iter().enumerate() {
        match (k, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(t);
    }
    s
}

fn mono_term(coeff: &BigRational, mono: &str) -> (bool, String) {
    let mag = coeff.abs();
    let text = match (mono.is_empty(), mag.is_one()) {
        (true, _) => rational_text(&mag),
        (false, true) => mono.to_string(),
        (false, false) => format!("{}*{mono}", rational_text(&mag)),
    };
    (coeff.is_negative(), text)
}

pub fn cyclo_text(c: &Cyclo) -> String {
    let terms: Vec<(bool, String)> = c
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.is_zero())
        .map(|(i, r)| {
            let mono = match i {
                0 => String::new(),
                1 => "zeta".into(),
                _ => format!("zeta^{i}"),
            };
            mono_term(r, &mono)
        })
        .collect();
    join_terms(&terms)
}

/// A polynomial in one variable with cyclotomic coefficients, highest degree first.
pub fn kpoly_text(p: &KPoly, var: &str) -> String {
    let mut terms = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        match c.as_rational() {
            Some(r) => terms.push(mono_term(&r, &mono)),
            None => {
                let inner = format!("({})", cyclo_text(c));
                terms.push((false, if mono.is_empty() { inner } else { format!("{inner}*{mono}") }));
            }
        }
    }
    join_terms(&terms)
}

fn ratfunc_text(r: &RatFunc) -> String {
    let var = &r.ctx().var;
    if r.den().is_one() {
        return kpoly_text(r.num(), var);
    }
    format!("({})/({})", kpoly_text(r.num(), var), kpoly_text(r.den(), var))
}

pub fn scalar_text(e: &Elem) -> String {
    match e {
        Elem::C(c) => cyclo_text(c),
        Elem::R(r) => ratfunc_text(r),
    }
}

fn cyclo_to_json(c: &Cyclo) -> Value {
    match c.as_rational() {
        Some(r) => Value::String(rational_text(&r)),
        None => json!({"k": c.field().k(), "coeffs": c.coeffs().iter().map(rational_text).collect::<Vec<_>>()}),
    }
}

/// Structured encoding: rationals as `"p/q"`, other cyclotomic values as `{"k", "coeffs"}` in the
/// power basis, nonconstant rational functions as `{"num", "den"}` with ascending coefficients.
pub fn scalar_to_json(e: &Elem) -> Value {
    match e {
        Elem::C(c) => cyclo_to_json(c),
        Elem::R(r) => match r.as_constant() {
            Some(c) => cyclo_to_json(&c),
            None => json!({
                "num": r.num().coeffs().iter().map(cyclo_to_json).collect::<Vec<_>>(),
                "den": r.den().coeffs().iter().map(cyclo_to_json).collect::<Vec<_>>(),
            }),
        },
    }
}

fn cyclo_from_json(v: &Value, field: &Field) -> Result<Cyclo> {
    match v.get("coeffs") {
        Some(cs) => {
            let k = v.get("k").and_then(Value::as_u64).ok_or_else(|| schema("cyclotomic scalar needs an integer \"k\""))?;
            if k != field.base().k() as u64 {
                return Err(Error::DescriptorMismatch(format!("scalar over Q(zeta_{k}) used in {field}")));
            }
            let cs = cs.as_array().ok_or_else(|| schema("\"coeffs\" must be a list"))?;
            let q = Field::rationals();
            let rs = cs
                .iter()
                .map(|c| parse_scalar(c, &q)?.as_rational().ok_or_else(|| schema("power-basis coefficients must be rational")))
                .collect::<Result<Vec<_>>>()?;
            Ok(Cyclo::from_coeffs(field.base(), rs))
        }
        None => parse_scalar(v, &field.base_field())?.as_cyclo().ok_or_else(|| schema(format!("expected a constant, got {v}"))),
    }
}

fn kpoly_from_json(v: &Value, field: &Field) -> Result<KPoly> {
    let cs = v.as_array().ok_or_else(|| schema("rational function parts must be coefficient lists"))?;
    Ok(KPoly::new(field.base(), cs.iter().map(|c| cyclo_from_json(c, field)).collect::<Result<_>>()?))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Num(digits.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(schema(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    field: &'a Field,
    allow_z: bool,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        schema(format!("{what} in {:?}", self.src))
    }

    fn expr(&mut self) -> Result<BiPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                if !d.is_constant() || d.constant_term().is_zero() {
                    return Err(self.err("division by a non-constant or zero"));
                }
                acc = acc.scale(&d.constant_term().inv()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<BiPoly> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<BiPoly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => n.to_i64().ok_or_else(|| self.err("exponent too large"))?,
            _ => return Err(self.err("expected an integer exponent")),
        };
        self.pos += 1;
        let e = if neg { -e } else { e };
        if e >= 0 {
            let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        if !base.is_constant() {
            return Err(self.err("negative power of a non-constant"));
        }
        let c = base.constant_term().powi(e)?;
        Ok(BiPoly::constant(self.field, c))
    }

    fn atom(&mut self) -> Result<BiPoly> {
        let f = self.field;
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let c = Elem::from_rational(f, BigRational::from_integer(n));
                Ok(BiPoly::constant(f, c))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "zeta" => Ok(BiPoly::constant(f, f.embed(&Cyclo::zeta(f.base())))),
                    "z1" if self.allow_z => Ok(BiPoly::z1(f)),
                    "z2" if self.allow_z => Ok(BiPoly::z2(f)),
                    v if f.rf_ctx().is_some_and(|c| c.var == v) => Ok(BiPoly::constant(f, f.x())),
                    _ => Err(self.err(&format!("unknown name {name:?}"))),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("missing ')'"));
                }
                Ok(e)
            }
            _ => Err(self.err("expected a number, name or '('")),
        }
    }
}

fn parse_expr(s: &str, field: &Field, allow_z: bool) -> Result<BiPoly> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0, field, allow_z, src: s };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

pub fn parse_scalar_str(s: &str, field: &Field) -> Result<Elem> {
    let p = parse_expr(s, field, false)?;
    Ok(p.constant_term())
}

pub fn parse_scalar(v: &Value, field: &Field) -> Result<Elem> {
    match v {
        Value::String(s) => parse_scalar_str(s, field),
        Value::Number(n) => {
            let i = n.as_i64().ok_or_else(|| schema(format!("non-integer number {n}; write fractions as strings")))?;
            Ok(field.int(i))
        }
        Value::Object(o) if o.contains_key("num") => {
            let ctx = field.rf_ctx().ok_or_else(|| schema(format!("rational function given in {field}")))?;
            let num = kpoly_from_json(&o["num"], field)?;
            let den = kpoly_from_json(o.get("den").unwrap_or(&json!(["1"])), field)?;
            Ok(Elem::R(RatFunc::from_parts(ctx, num, den)?))
        }
        Value::Object(_) => Ok(field.embed(&cyclo_from_json(v, field)?)),
        _ => Err(schema(format!("expected a scalar, got {v}"))),
    }
}

pub fn poly_to_json(p: &BiPoly) -> Value {
    Value::Array(p.terms().iter().map(|(m, c)| json!([[m.0, m.1], scalar_to_json(c)])).collect())
}

pub fn poly_from_json(v: &Value, field: &Field) -> Result<BiPoly> {
    match v {
        Value::String(s) => parse_expr(s, field, true),
        Value::Array(terms) => {
            let mut out = BiPoly::zero(field);
            for t in terms {
                let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| schema("term must be [[i, j], scalar]"))?;
                let exps = pair[0].as_array().filter(|a| a.len() == 2).ok_or_else(|| schema("exponents must be [i, j]"))?;
                let e = |x: &Value| -> Result<u32> {
                    x.as_u64().and_then(|v| u32::try_from(v).ok()).ok_or_else(|| schema("exponent must be a small non-negative integer"))
                };
                let c = parse_scalar(&pair[1], field)?;
                out = out.add(&BiPoly::monomial(field, c, e(&exps[0])?, e(&exps[1])?));
            }
            Ok(out)
        }
        _ => Err(schema("polynomial must be a term list or an expression string")),
    }
}

pub fn endo_to_json(f: &PlaneEndo) -> Value {
    json!({"field": field_text(f.field()), "components": [poly_to_json(&f.p1), poly_to_json(&f.p2)]})
}

pub fn aut_to_json(f: &PlaneAut) -> Value {
    endo_to_json(f.forward())
}

fn field_of(v: &Value, default: Option<&Field>) -> Result<Field> {
    match v.get("field") {
        Some(Value::String(s)) => parse_field(s),
        Some(_) => Err(schema("field must be a string")),
        None => default.cloned().ok_or_else(|| schema("missing \"field\"")),
    }
}

pub fn endo_from_json(v: &Value, default: Option<&Field>) -> Result<PlaneEndo> {
    let field = field_of(v, default)?;
    let comps = v
        .get("components")
        .and_then(Value::as_array)
        .filter(|a| a.len() == 2)
        .ok_or_else(|| schema("\"components\" must hold two polynomials"))?;
    PlaneEndo::new(poly_from_json(&comps[0], &field)?, poly_from_json(&comps[1], &field)?)
}

pub fn aut_from_json(v: &Value, default: Option<&Field>) -> Result<PlaneAut> {
    PlaneAut::invert(&endo_from_json(v, default)?)
}

pub fn matrix_to_json(m: &Mat2) -> Value {
    json!([[scalar_to_json(&m[0][0]), scalar_to_json(&m[0][1])], [scalar_to_json(&m[1][0]), scalar_to_json(&m[1][1])]])
}

pub fn matrix_from_json(v: &Value, field: &Field) -> Result<Mat2> {
    let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(|| schema("matrix must be 2x2"))?;
    let row = |r: &Value| -> Result<[Elem; 2]> {
        let r = r.as_array().filter(|r| r.len() == 2).ok_or_else(|| schema("matrix must be 2x2"))?;
        Ok([parse_scalar(&r[0], field)?, parse_scalar(&r[1], field)?])
    };
    Ok([row(&rows[0])?, row(&rows[1])?])
}

pub fn rep_to_json(rho: &LinearRep) -> Value {
    Value::Array(rho.images.iter().map(matrix_to_json).collect())
}

pub fn rep_from_json(v: &Value, field: &Field) -> Result<LinearRep> {
    let images = v
        .as_array()
        .filter(|a| !a.is_empty())
        .ok_or_else(|| schema("\"rho\" must be a non-empty list of matrices"))?
        .iter()
        .map(|m| matrix_from_json(m, field))
        .collect::<Result<Vec<_>>>()?;
    Ok(LinearRep { images })
}

fn u32_list(v: Option<&Value>, what: &str) -> Result<Vec<u32>> {
    v.and_then(Value::as_array)
        .ok_or_else(|| schema(format!("missing \"{what}\"")))?
        .iter()
        .map(|x| x.as_u64().and_then(|n| u32::try_from(n).ok()).filter(|n| *n > 0).ok_or_else(|| schema(format!("bad entry in \"{what}\""))))
        .collect()
}

/// A group: `{"kind": "cyclic" | "finite_abelian" | "torus" | "linear", ...}`. Generators may
/// sit inside the object or be passed separately.
pub fn group_from_json(v: &Value, generators: Option<&Value>, default: Option<&Field>) -> Result<GroupAction> {
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| schema("group needs a \"kind\""))?;
    let gens_v = v.get("generators").or(generators);
    let first_field = gens_v.and_then(Value::as_array).and_then(|a| a.first()).and_then(|g| g.get("field"));
    let field = match (v.get("field"), first_field) {
        (Some(_), _) => field_of(v, default)?,
        (None, Some(Value::String(s))) => parse_field(s)?,
        _ => default.cloned().ok_or_else(|| schema("group needs a \"field\""))?,
    };
    let gens = || -> Result<Vec<PlaneAut>> {
        gens_v
            .and_then(Value::as_array)
            .filter(|a| !a.is_empty())
            .ok_or_else(|| schema("group needs \"generators\""))?
            .iter()
            .map(|g| aut_from_json(g, Some(&field)))
            .collect()
    };
    match kind {
        "cyclic" => {
            let orders = match v.get("order") {
                Some(n) => vec![n.as_u64().and_then(|n| u32::try_from(n).ok()).ok_or_else(|| schema("bad \"order\""))?],
                None => u32_list(v.get("orders"), "orders")?,
            };
            let g = gens()?;
            if g.len() != 1 || orders.len() != 1 {
                return Err(schema("cyclic group takes one generator and one order"));
            }
            GroupAction::cyclic(g[0].clone(), orders[0])
        }
        "finite_abelian" | "finite-abelian" => GroupAction::finite_abelian(gens()?, u32_list(v.get("orders"), "orders")?),
        "torus" | "diagonal-torus" => {
            let w = v
                .get("weights")
                .and_then(Value::as_array)
                .filter(|a| a.len() == 2)
                .and_then(|a| Some((a[0].as_i64()?, a[1].as_i64()?)))
                .ok_or_else(|| schema("torus needs integer \"weights\": [a, b]"))?;
            let conj = v.get("conjugator").map(|c| aut_from_json(c, Some(&field))).transpose()?;
            GroupAction::torus(&field, w.0, w.1, conj)
        }
        "linear" => {
            let mats = v
                .get("matrices")
                .and_then(Value::as_array)
                .ok_or_else(|| schema("linear group needs \"matrices\""))?
                .iter()
                .map(|m| matrix_from_json(m, &field))
                .collect::<Result<Vec<_>>>()?;
            GroupAction::linear(&mats, Some(u32_list(v.get("orders"), "orders")?))
        }
        other => Err(schema(format!("unknown group kind {other:?}"))),
    }
}

/// `{"group": ..., "generators": [...], "excluded": [...]}`.
pub fn family_from_json(v: &Value) -> Result<FamilyAction> {
    let g = v.get("group").ok_or_else(|| schema("family needs a \"group\""))?;
    let default = v.get("field").map(|_| field_of(v, None)).transpose()?;
    let group = group_from_json(g, v.get("generators"), default.as_ref())?;
    let field = group.field().clone();
    let excluded = match v.get("excluded") {
        None => vec![],
        Some(e) => e
            .as_array()
            .ok_or_else(|| schema("\"excluded\" must be a list"))?
            .iter()
            .map(|s| cyclo_from_json(s, &field))
            .collect::<Result<Vec<_>>>()?,
    };
    FamilyAction::new(group, excluded)
}

fn pole_trace_to_json(t: &PoleTrace) -> Value {
    json!({
        "center": cyclo_to_json(&t.center),
        "w": t.w_sequence,
        "steps": t.steps.iter().map(|((w1, w2), (r1, r2))| json!({"w": [w1, w2], "r": [r1, r2]})).collect::<Vec<_>>(),
    })
}

fn gluing_to_json(g: &Gluing) -> Value {
    let (shape, v) = match g.shape {
        CentralizerShape::Diagonal => ("diagonal", None),
        CentralizerShape::Upper(v) => ("upper", Some(v)),
        CentralizerShape::Lower(v) => ("lower", Some(v)),
    };
    json!({
        "shape": shape,
        "v": v,
        "alpha1": scalar_to_json(&g.alpha1),
        "alpha2": scalar_to_json(&g.alpha2),
        "beta": scalar_to_json(&g.beta),
        "map": aut_to_json(&g.map),
    })
}

pub fn report_to_json(r: &LinearizationReport) -> Value {
    json!({
        "psi": aut_to_json(&r.psi),
        "rho": rep_to_json(&r.rho),
        "poles_removed": r.poles_removed.iter().map(cyclo_to_json).collect::<Vec<_>>(),
        "residual_poles": r.residual_poles.iter().map(cyclo_to_json).collect::<Vec<_>>(),
        "traces": r.traces.iter().map(pole_trace_to_json).collect::<Vec<_>>(),
        "gluing": r.gluing.as_ref().map(gluing_to_json),
        "verified": r.verified,
    })
}

/// Reads back the parts of a report that verification depends on; traces and gluing data
/// are informational and not re-read.
pub fn report_from_json(v: &Value, field: &Field) -> Result<LinearizationReport> {
    let psi = aut_from_json(v.get("psi").ok_or_else(|| schema("report needs \"psi\""))?, Some(field))?;
    let rho = rep_from_json(v.get("rho").ok_or_else(|| schema("report needs \"rho\""))?, &field.base_field())?;
    let centers = |key: &str| -> Result<Vec<Cyclo>> {
        match v.get(key) {
            None => Ok(vec![]),
            Some(a) => a
                .as_array()
                .ok_or_else(|| schema(format!("\"{key}\" must be a list")))?
                .iter()
                .map(|s| cyclo_from_json(s, field))
                .collect(),
        }
    };
    Ok(LinearizationReport {
        psi,
        rho,
        poles_removed: centers("poles_removed")?,
        residual_poles: centers("residual_poles")?,
        traces: vec![],
        gluing: None,
        verified: v.get("verified").and_then(Value::as_bool).unwrap_or(false),
    })
}

pub fn kr_trace_to_json(t: &KRTrace) -> Value {
    Value::Array(
        t.steps
            .iter()
            .map(|s| {
                json!({
                    "w": [s.w_before.0, s.w_before.1],
                    "r": [s.r.0, s.r.1],
                    "curve": poly_to_json(&s.curve),
                    "tau": aut_to_json(&s.tau),
                })
            })
            .collect(),
    )
}

pub fn decomposition_to_json(d: &TameDecomposition) -> Value {
    let word: Vec<Value> = d
        .factors()
        .iter()
        .map(|f| match f {
            Factor::A(a) => json!({"affine": {"matrix": matrix_to_json(&a.m), "translation": [scalar_to_json(&a.t[0]), scalar_to_json(&a.t[1])]}}),
            Factor::E(e) => json!({"elementary": {
                "alpha": scalar_to_json(&e.alpha),
                "beta": scalar_to_json(&e.beta),
                "beta_p": scalar_to_json(&e.beta_p),
                "p": e.p.coeffs().iter().map(scalar_to_json).collect::<Vec<_>>(),
            }}),
        })
        .collect();
    json!({"field": field_text(&d.field()), "polydegree": d.polydegree(), "word": word})
}

fn fiber_to_json(f: &FiberDescription) -> Value {
    let anchor = |inf: bool| if inf { "inf" } else { "0" };
    json!({
        "anchors": [anchor(f.anchors.0), anchor(f.anchors.1)],
        "nonempty": f.nonempty,
        "s_subgroup": f.s_tag.name(),
        "alpha_p_free": f.alpha_p_free,
        "beta_p_free": f.beta_p_free,
        "allowed": f.allowed,
        "exponents": f.exponents,
        "coordinate_count": [f.coordinate_count.0, f.coordinate_count.1],
    })
}

pub fn centralizer_to_json(c: &CentralizerDescription) -> Value {
    let mono = |v: &Vec<(u32, u32)>| v.iter().map(|(i, j)| json!([i, j])).collect::<Vec<_>>();
    json!({
        "case": c.case.name(),
        "polydegree": c.polydegree,
        "group": {"a": c.group.a, "b": c.group.b, "k": c.group.k},
        "v": c.v,
        "swapped": c.swapped,
        "monomials": c.monomials.as_ref().map(|m| json!([mono(&m[0]), mono(&m[1])])),
        "fibers": c.fibers.iter().map(fiber_to_json).collect::<Vec<_>>(),
    })
}

pub fn suite_to_json(r: &SuiteReport) -> Value {
    json!({"suite": r.name, "checks": r.checks, "failures": r.failures, "notes": r.notes, "passed": r.passed()})
}

pub fn error_to_json(e: &Error) -> Value {
    json!({"error": e.tag(), "message": e.to_string()})
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_descriptors_round_trip() {
        for s in ["Q", "Q(zeta_6)", "Q(x)", "Q(zeta_3)(t)"] {
            assert_eq!(field_text(&parse_field(s).unwrap()), s);
        }
        assert!(parse_field("R").is_err());
        assert!(parse_field("Q(zeta)").is_err());
    }

    #[test]
    fn scalars_print_canonically() {
        let f = Field::rational_functions(3, "x");
        let e = parse_scalar_str("(x^2 + 1)/(2*x - 2) + zeta", &f).unwrap();
        let text = scalar_text(&e);
        assert_eq!(parse_scalar_str(&text, &f).unwrap(), e);
        assert_eq!(scalar_text(&parse_scalar_str("-3/6", &Field::rationals()).unwrap()), "-1/2");
        let z = Field::cyclotomic(6);
        // ζ₆² = ζ₆ − 1
        assert_eq!(scalar_text(&parse_scalar_str("1 - zeta^2", &z).unwrap()), "2 - zeta");
    }

    #[test]
    fn structured_scalars_round_trip() {
        let f = Field::rational_functions(3, "x");
        let e = parse_scalar_str("(x^2 + zeta)/(2*x - 2)", &f).unwrap();
        let v = scalar_to_json(&e);
        assert_eq!(v, json!({"num": [{"k": 3, "coeffs": ["0", "1/2"]}, "0", "1/2"], "den": ["-1", "1"]}));
        assert_eq!(parse_scalar(&v, &f).unwrap(), e);
        assert_eq!(scalar_to_json(&f.rat(-3, 6)), json!("-1/2"));
        let z = parse_scalar(&json!({"k": 3, "coeffs": ["1", "2"]}), &Field::cyclotomic(3)).unwrap();
        assert_eq!(scalar_text(&z), "1 + 2*zeta");
        assert!(matches!(
            parse_scalar(&json!({"k": 5, "coeffs": ["1"]}), &Field::cyclotomic(3)),
            Err(Error::DescriptorMismatch(_))
        ));
    }

    #[test]
    fn automorphism_round_trip() {
        let f = Field::rationals();
        let v = json!({"field": "Q", "components": ["z1 + 3*z2^2 - 1/2", [[[0, 1], "1"]]]});
        let a = aut_from_json(&v, None).unwrap();
        let out = aut_to_json(&a);
        assert_eq!(out["components"][0], json!([[[0, 0], "-1/2"], [[1, 0], "1"], [[0, 2], "3"]]));
        assert_eq!(aut_from_json(&out, None).unwrap().forward(), a.forward());
        assert!(endo_from_json(&json!({"field": "Q", "components": ["z1/z2", "z2"]}), Some(&f)).is_err());
    }

    #[test]
    fn groups_parse() {
        let v = json!({"kind": "cyclic", "orders": [2], "field": "Q",
            "generators": [{"components": ["-z1 + z2^2", "z2"]}]});
        let g = group_from_json(&v, None, None).unwrap();
        assert_eq!(g.orders(), vec![2]);
        let t = json!({"kind": "torus", "weights": [2, 1], "field": "Q(x)"});
        assert!(group_from_json(&t, None, None).unwrap().is_torus());
        let bad = json!({"kind": "cyclic", "orders": [3], "field": "Q", "generators": [{"components": ["-z1", "z2"]}]});
        assert!(group_from_json(&bad, None, None).is_err());
    }
}
