//! Exact Laurent-polynomial form of the systems and its JSON / text export.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::explicit::{Edition, ExplicitSystem};
use super::{type_normalization, Component, EinsteinSystem};
use crate::error::{Error, Result};
use crate::flagspace::{FlagManifold, FlagSpec};
use crate::scalar::rational_string;

/// Sum of `coeff · Π x_i^{e_i}` with integer (possibly negative) exponents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Laurent {
    pub terms: BTreeMap<Vec<i32>, BigRational>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn add_monomial(&mut self, exps: Vec<i32>, coeff: BigRational) {
        let entry = self.terms.entry(exps).or_insert_with(BigRational::zero);
        *entry += coeff;
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn add(&mut self, other: &Laurent) {
        for (e, c) in &other.terms {
            self.add_monomial(e.clone(), c.clone());
        }
    }

    pub fn scaled(&self, k: &BigRational) -> Laurent {
        let mut out = Laurent::zero();
        for (e, c) in &self.terms {
            out.add_monomial(e.clone(), c.clone() * k.clone());
        }
        out
    }

    /// Expands a component over `dim` variables.
    pub fn from_component(c: &Component<BigRational>, dim: usize) -> Laurent {
        let mut out = Laurent::zero();
        out.add_monomial(vec![0; dim], c.constant.clone());
        let mono = |pairs: &[(usize, i32)]| {
            let mut e = vec![0; dim];
            for &(i, k) in pairs {
                e[i] += k;
            }
            e
        };
        for t in &c.terms {
            // t²/(ab) − a/b − b/a + 2
            let k = t.coeff.clone();
            out.add_monomial(mono(&[(t.target, 2), (t.a, -1), (t.b, -1)]), k.clone());
            out.add_monomial(mono(&[(t.a, 1), (t.b, -1)]), -k.clone());
            out.add_monomial(mono(&[(t.b, 1), (t.a, -1)]), -k.clone());
            out.add_monomial(mono(&[]), k * BigRational::from_integer(2.into()));
        }
        out
    }

    pub fn constant(&self, dim: usize) -> BigRational {
        self.terms
            .get(&vec![0; dim])
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Monomial multiplier clearing every negative exponent.
    pub fn denominator(&self, dim: usize) -> Vec<i32> {
        let mut d = vec![0; dim];
        for e in self.terms.keys() {
            for (i, &k) in e.iter().enumerate() {
                d[i] = d[i].max(-k);
            }
        }
        d
    }

    pub fn times_monomial(&self, m: &[i32]) -> Laurent {
        let mut out = Laurent::zero();
        for (e, c) in &self.terms {
            let e2 = e.iter().zip(m).map(|(a, b)| a + b).collect();
            out.add_monomial(e2, c.clone());
        }
        out
    }

    pub fn degree(&self) -> i32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<i32>())
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Json,
    Poly,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "poly" => Ok(Format::Poly),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flavor {
    Generated,
    Explicit(Edition),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialTerm {
    pub coeff: String,
    pub num_troots: Vec<String>,
    pub den_troots: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RightHandSide {
    pub troot: String,
    pub coeff: String,
    /// The coefficient multiplies an unknown Einstein constant `c`.
    pub times_c: bool,
}

/// One equation per entry: `constant_terms[i] + Σ terms[i] = rhs[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDocument {
    pub spec: String,
    pub flavor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edition: Option<String>,
    pub troots: Vec<String>,
    pub gauge: String,
    pub labels: Vec<String>,
    pub constant_terms: Vec<String>,
    pub terms: Vec<Vec<MonomialTerm>>,
    pub rhs: Vec<RightHandSide>,
}

struct Prepared {
    ids: Vec<String>,
    gauge: String,
    labels: Vec<String>,
    lhs: Vec<Laurent>,
    rhs: Vec<(usize, BigRational, bool)>,
}

fn prepare(m: &FlagManifold, flavor: Flavor) -> Result<Prepared> {
    let ids: Vec<String> = m.decomposition().troots().map(|t| t.id()).collect();
    let dim = ids.len();
    let gauge = ids[0].clone();
    match flavor {
        Flavor::Generated => {
            let sys = EinsteinSystem::<f64>::generate(m);
            Ok(Prepared {
                labels: ids.iter().map(|id| format!("Ric {id}")).collect(),
                lhs: sys
                    .exact_components()
                    .iter()
                    .map(|c| Laurent::from_component(c, dim))
                    .collect(),
                rhs: (0..dim).map(|i| (i, BigRational::one(), true)).collect(),
                ids,
                gauge,
            })
        }
        Flavor::Explicit(ed) => {
            let sys = ExplicitSystem::new(m, ed)?;
            Ok(Prepared {
                labels: sys.equations().iter().map(|e| e.label.clone()).collect(),
                lhs: sys
                    .equations()
                    .iter()
                    .map(|e| Laurent::from_component(&e.lhs, dim))
                    .collect(),
                rhs: sys
                    .equations()
                    .iter()
                    .map(|e| (e.target, BigRational::one(), e.symbolic_c))
                    .collect(),
                ids,
                gauge,
            })
        }
    }
}

fn flavor_name(f: Flavor) -> (&'static str, Option<String>) {
    match f {
        Flavor::Generated => ("generated", None),
        Flavor::Explicit(ed) => ("explicit", Some(ed.to_string())),
    }
}

fn monomial_ids(e: &[i32], ids: &[String]) -> (Vec<String>, Vec<String>) {
    let (mut num, mut den) = (Vec::new(), Vec::new());
    for (i, &k) in e.iter().enumerate() {
        let bucket = if k > 0 { &mut num } else { &mut den };
        for _ in 0..k.unsigned_abs() {
            bucket.push(ids[i].clone());
        }
    }
    (num, den)
}

pub fn system_document(m: &FlagManifold, flavor: Flavor) -> Result<SystemDocument> {
    let p = prepare(m, flavor)?;
    let dim = p.ids.len();
    let zero = vec![0; dim];
    let (name, edition) = flavor_name(flavor);
    Ok(SystemDocument {
        spec: m.spec().to_string(),
        flavor: name.into(),
        edition,
        troots: p.ids.clone(),
        gauge: p.gauge,
        labels: p.labels,
        constant_terms: p
            .lhs
            .iter()
            .map(|l| rational_string(&l.constant(dim)))
            .collect(),
        terms: p
            .lhs
            .iter()
            .map(|l| {
                l.terms
                    .iter()
                    .filter(|(e, _)| **e != zero)
                    .map(|(e, c)| {
                        let (num, den) = monomial_ids(e, &p.ids);
                        MonomialTerm {
                            coeff: rational_string(c),
                            num_troots: num,
                            den_troots: den,
                        }
                    })
                    .collect()
            })
            .collect(),
        rhs: p
            .rhs
            .iter()
            .map(|(i, c, times_c)| RightHandSide {
                troot: p.ids[*i].clone(),
                coeff: rational_string(c),
                times_c: *times_c,
            })
            .collect(),
    })
}

/// Denominator-cleared polynomial `LHS − RHS` of every equation; the extra
/// last variable (index `dim`) is the Einstein constant when it stays free.
pub fn cleared_polynomials(m: &FlagManifold, flavor: Flavor) -> Result<(Vec<Laurent>, bool)> {
    let p = prepare(m, flavor)?;
    let dim = p.ids.len();
    let fixed = match flavor {
        Flavor::Generated => Some(type_normalization(m.spec())),
        Flavor::Explicit(_) => None,
    };
    let symbolic = fixed.is_none() && p.rhs.iter().any(|r| r.2);
    let width = dim + usize::from(symbolic);
    let mut out = Vec::new();
    for (lhs, (target, coeff, times_c)) in p.lhs.iter().zip(&p.rhs) {
        let mut poly = Laurent::zero();
        for (e, c) in &lhs.terms {
            let mut e2 = e.clone();
            e2.resize(width, 0);
            poly.add_monomial(e2, c.clone());
        }
        let mut e = vec![0; width];
        e[*target] = 1;
        let k = match (&fixed, times_c) {
            (Some(c), _) => c.clone() * coeff.clone(),
            (None, true) => {
                e[dim] = 1;
                coeff.clone()
            }
            (None, false) => coeff.clone(),
        };
        poly.add_monomial(e, -k);
        let d = poly.denominator(width);
        out.push(poly.times_monomial(&d));
    }
    Ok((out, symbolic))
}

fn format_poly(p: &Laurent, vars: &[String]) -> String {
    let mut terms: Vec<(&Vec<i32>, &BigRational)> = p.terms.iter().collect();
    terms.sort_by(|(a, _), (b, _)| {
        let (da, db) = (a.iter().sum::<i32>(), b.iter().sum::<i32>());
        db.cmp(&da).then_with(|| b.cmp(a))
    });
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (e, c)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors = vec![rational_string(&c.abs())];
        for (i, &x) in e.iter().enumerate() {
            match x {
                0 => {}
                1 => factors.push(vars[i].clone()),
                _ => factors.push(format!("{}^{x}", vars[i])),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// `# var` header lines, then one cleared polynomial per line with
/// coefficients written as `p/q`.
pub fn poly_text(m: &FlagManifold, flavor: Flavor) -> Result<String> {
    let (polys, symbolic) = cleared_polynomials(m, flavor)?;
    let ids: Vec<String> = m.decomposition().troots().map(|t| t.id()).collect();
    let mut vars: Vec<String> = ids.iter().map(|id| format!("x_{id}")).collect();
    let mut out = String::new();
    for id in &ids {
        let _ = writeln!(out, "# var x_{id} = lambda({id})");
    }
    if symbolic {
        let _ = writeln!(out, "# var c = einstein constant");
        vars.push("c".into());
    }
    for p in &polys {
        let _ = writeln!(out, "{}", format_poly(p, &vars));
    }
    Ok(out)
}

/// Renders the system of `spec` in `format`.
pub fn export_system(spec: &FlagSpec, format: Format, flavor: Flavor) -> Result<String> {
    let m = FlagManifold::new(spec.clone())?;
    match format {
        Format::Json => {
            let doc = system_document(&m, flavor)?;
            Ok(serde_json::to_string_pretty(&doc).expect("document serializes"))
        }
        Format::Poly => poly_text(&m, flavor),
    }
}
