//! Hand-derived Einstein systems, one per flag shape, kept as independent
//! oracles for the generated system.
//!
//! Each equation reads `LHS = λ_ξ` (or `LHS = c·λ_ξ` for the C-tail system),
//! in the variables `g_ij ↔ δ_i−δ_j`, `f_ij ↔ δ_i+δ_j`, `h_i`, `l_i` and `t_i`
//! described by [`NameMap`]. Two editions exist: [`Edition::AsPrinted`]
//! reproduces the published coefficients, [`Edition::Corrected`] applies the
//! entries of [`ERRATA`].

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Component, Term};
use crate::error::{Error, Result};
use crate::flagspace::{FlagManifold, FlagSpec, TRoot};
use crate::rootsys::LieType;
use crate::scalar::{ratio, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Shape {
    A,
    BTail,
    BNoTail,
    BFull,
    CNoTail,
    CTail,
    DNoTail,
    DTail,
}

impl Shape {
    pub fn of(spec: &FlagSpec) -> Result<Shape> {
        let ones = spec.blocks.iter().all(|&b| b == 1);
        let shape = match (spec.lie_type, spec.tail.is_some()) {
            (LieType::A, false) => Shape::A,
            (LieType::B, true) => Shape::BTail,
            (LieType::B, false) if ones => Shape::BFull,
            (LieType::B, false) => Shape::BNoTail,
            (LieType::C, false) => Shape::CNoTail,
            (LieType::C, true) => Shape::CTail,
            (LieType::D, false) => Shape::DNoTail,
            (LieType::D, true) => Shape::DTail,
            (LieType::A, true) => {
                return Err(Error::UnsupportedShape(format!(
                    "{spec}: type A has no tail"
                )))
            }
        };
        Ok(shape)
    }

    pub fn name(self) -> &'static str {
        match self {
            Shape::A => "A",
            Shape::BTail => "B-tail",
            Shape::BNoTail => "B",
            Shape::BFull => "B-full",
            Shape::CNoTail => "C",
            Shape::CTail => "C-tail",
            Shape::DNoTail => "D",
            Shape::DTail => "D-tail",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Edition {
    AsPrinted,
    #[default]
    Corrected,
}

impl fmt::Display for Edition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Edition::AsPrinted => "printed",
            Edition::Corrected => "corrected",
        })
    }
}

impl std::str::FromStr for Edition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(Edition::AsPrinted),
            "corrected" => Ok(Edition::Corrected),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

/// A coefficient change between the printed and corrected systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Erratum {
    pub id: &'static str,
    pub shape: Shape,
    pub families: &'static [u8],
    pub printed: &'static str,
    pub corrected: &'static str,
}

pub const ERRATA: &[Erratum] = &[
    Erratum {
        id: "E1",
        shape: Shape::BTail,
        families: &[1],
        printed: "(1+8n_{s+1}) on the h_k h_t bracket; 4(n_t-1), 4(n_k-1) on the l brackets",
        corrected: "(1+2n_{s+1}); (n_t-1), (n_k-1)",
    },
    Erratum {
        id: "E2",
        shape: Shape::BNoTail,
        families: &[1],
        printed: "4(n_t-1), 4(n_k-1) on the l brackets",
        corrected: "(n_t-1), (n_k-1)",
    },
    Erratum {
        id: "E3",
        shape: Shape::CTail,
        families: &[1, 2, 3, 4],
        printed: "(2n_k+1)/(16(n+1)) on the h_k brackets",
        corrected: "(n_k+1)/(8(n+1))",
    },
    Erratum {
        id: "E4",
        shape: Shape::CTail,
        families: &[4],
        printed: "no f_ik g_i(s+1) sum",
        corrected: "adds sum_{i!=k} n_i/(8(n+1)) (f_k(s+1)^2-(f_ik-g_i(s+1))^2)/(f_ik g_i(s+1))",
    },
    Erratum {
        id: "E5",
        shape: Shape::DTail,
        families: &[1, 4],
        printed:
            "1/4{sum f + 2 sum g + ...} in the g_ij equation; constant n_i in the h_i equation",
        corrected: "1/2{sum f + sum g + ...}; constant 2(n_i-1)",
    },
];

/// Errata registered against `shape`.
pub fn errata_for(shape: Shape) -> impl Iterator<Item = &'static Erratum> {
    ERRATA.iter().filter(move |e| e.shape == shape)
}

/// The scalar names of the hand-derived systems, resolved to t-root indices.
///
/// Block indices are zero-based in the accessors and one-based in names.
#[derive(Debug, Clone)]
pub struct NameMap {
    lie_type: LieType,
    blocks: usize,
    has_tail: bool,
    index: BTreeMap<TRoot, usize>,
    names: BTreeMap<String, usize>,
}

impl NameMap {
    pub fn new(m: &FlagManifold) -> Self {
        let spec = m.spec();
        let r = spec.blocks.len();
        let mut map = NameMap {
            lie_type: spec.lie_type,
            blocks: r,
            has_tail: spec.tail.is_some(),
            index: m
                .decomposition()
                .troots()
                .enumerate()
                .map(|(i, t)| (t.clone(), i))
                .collect(),
            names: BTreeMap::new(),
        };
        let mut names = BTreeMap::new();
        for i in 0..r {
            for j in i + 1..r {
                if let Some(x) = map.g(i, j) {
                    names.insert(format!("g_{{{},{}}}", i + 1, j + 1), x);
                }
                if let Some(x) = map.f(i, j) {
                    names.insert(format!("f_{{{},{}}}", i + 1, j + 1), x);
                }
            }
            let s1 = r + 1;
            for (name, x) in [
                (format!("h_{}", i + 1), map.h(i)),
                (format!("l_{}", i + 1), map.l(i)),
                (
                    format!("t_{}", i + 1),
                    map.t(i).filter(|_| map.lie_type == LieType::D),
                ),
                (format!("g_{{{},{s1}}}", i + 1), map.t(i)),
                (format!("f_{{{},{s1}}}", i + 1), map.t(i)),
            ] {
                if let Some(x) = x {
                    names.insert(name, x);
                }
            }
        }
        map.names = names;
        map
    }

    fn lookup(&self, coeffs: &[(usize, i32)]) -> Option<usize> {
        let mut v = vec![0; self.blocks];
        for &(i, c) in coeffs {
            v[i] += c;
        }
        self.index.get(&TRoot(v)).copied()
    }

    /// δ_i − δ_j (symmetric in i, j).
    pub fn g(&self, i: usize, j: usize) -> Option<usize> {
        if i == j {
            return None;
        }
        self.lookup(&[(i.min(j), 1), (i.max(j), -1)])
    }

    /// δ_i + δ_j.
    pub fn f(&self, i: usize, j: usize) -> Option<usize> {
        if i == j {
            return None;
        }
        self.lookup(&[(i, 1), (j, 1)])
    }

    /// δ_i for B, 2δ_i for C and D.
    pub fn h(&self, i: usize) -> Option<usize> {
        match self.lie_type {
            LieType::A => None,
            LieType::B => self.lookup(&[(i, 1)]),
            LieType::C | LieType::D => self.lookup(&[(i, 2)]),
        }
    }

    /// 2δ_i for B; equal to `h_i` for C.
    pub fn l(&self, i: usize) -> Option<usize> {
        match self.lie_type {
            LieType::B | LieType::C => self.lookup(&[(i, 2)]),
            _ => None,
        }
    }

    /// δ_i on tails: `t_i = g_{i(s+1)} = f_{i(s+1)}` (and `= h_i` for B).
    pub fn t(&self, i: usize) -> Option<usize> {
        if self.has_tail {
            self.lookup(&[(i, 1)])
        } else {
            None
        }
    }

    /// Every name with its t-root index, including identified aliases.
    pub fn names(&self) -> &BTreeMap<String, usize> {
        &self.names
    }

    /// True when every positive t-root carries at least one name.
    pub fn is_total(&self) -> bool {
        let mut seen = vec![false; self.index.len()];
        for &x in self.names.values() {
            seen[x] = true;
        }
        seen.into_iter().all(|s| s)
    }
}

/// One hand-derived equation `constant + Σ terms = [c·] λ_target`.
#[derive(Debug, Clone, PartialEq)]
pub struct Equation {
    pub label: String,
    pub family: u8,
    pub target: usize,
    pub lhs: Component<BigRational>,
    /// Right-hand side is `c·λ_target` with `c` an unknown.
    pub symbolic_c: bool,
}

impl Equation {
    /// `LHS − RHS`; `c` is ignored unless the right-hand side is symbolic.
    pub fn eval<T: Scalar>(&self, x: &[T], c: &T) -> T {
        let lhs = self.lhs.to_scalar::<T>().eval(x);
        let rhs = if self.symbolic_c {
            c.clone() * x[self.target].clone()
        } else {
            x[self.target].clone()
        };
        lhs - rhs
    }
}

#[derive(Debug, Clone)]
pub struct ExplicitSystem {
    spec: FlagSpec,
    shape: Shape,
    edition: Edition,
    troots: Vec<TRoot>,
    names: NameMap,
    equations: Vec<Equation>,
}

impl ExplicitSystem {
    pub fn new(m: &FlagManifold, edition: Edition) -> Result<Self> {
        let shape = Shape::of(m.spec())?;
        let names = NameMap::new(m);
        let mut b = Builder {
            names: &names,
            shape,
            edition,
            n: m.spec().n() as i64,
            sizes: m.spec().blocks.iter().map(|&x| x as i64).collect(),
            tail: m.spec().tail.unwrap_or(0) as i64,
            out: Vec::new(),
        };
        match shape {
            Shape::A => b.type_a(),
            Shape::BTail => b.type_b_tail(),
            Shape::BNoTail => b.type_b(),
            Shape::BFull => b.type_b_full(),
            Shape::CNoTail => b.type_c(),
            Shape::CTail => b.type_c_tail(),
            Shape::DNoTail => b.type_d(),
            Shape::DTail => b.type_d_tail(),
        }
        let equations = b.out;
        let mut covered = vec![false; m.count_summands()];
        for e in &equations {
            covered[e.target] = true;
        }
        if let Some(i) = covered.iter().position(|c| !c) {
            return Err(Error::UnsupportedShape(format!(
                "{}: no {} equation for {}",
                m.spec(),
                shape,
                m.summands()[i].troot.id()
            )));
        }
        Ok(ExplicitSystem {
            spec: m.spec().clone(),
            shape,
            edition,
            troots: m.decomposition().troots().cloned().collect(),
            names,
            equations,
        })
    }

    pub fn spec(&self) -> &FlagSpec {
        &self.spec
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn edition(&self) -> Edition {
        self.edition
    }

    pub fn troots(&self) -> &[TRoot] {
        &self.troots
    }

    pub fn names(&self) -> &NameMap {
        &self.names
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// True when the right-hand sides carry an unknown Einstein constant.
    pub fn has_symbolic_constant(&self) -> bool {
        self.equations.iter().any(|e| e.symbolic_c)
    }

    /// `LHS − RHS` of every equation in order. `c` is required exactly when
    /// the system has a symbolic constant.
    pub fn evaluate<T: Scalar>(&self, x: &[T], c: Option<&T>) -> Result<Vec<T>> {
        if x.len() != self.troots.len() {
            return Err(Error::IncompleteMetric(format!(
                "expected {} values, got {}",
                self.troots.len(),
                x.len()
            )));
        }
        let one = T::one();
        let c = match (self.has_symbolic_constant(), c) {
            (true, Some(c)) => c,
            (true, None) => {
                return Err(Error::Domain("this system needs a value for c".into()));
            }
            (false, _) => &one,
        };
        Ok(self.equations.iter().map(|e| e.eval(x, c)).collect())
    }
}

/// The hand-derived system of `spec` in the given edition.
pub fn explicit_system(spec: &FlagSpec, edition: Edition) -> Result<ExplicitSystem> {
    ExplicitSystem::new(&FlagManifold::new(spec.clone())?, edition)
}

struct Builder<'a> {
    names: &'a NameMap,
    shape: Shape,
    edition: Edition,
    n: i64,
    sizes: Vec<i64>,
    tail: i64,
    out: Vec<Equation>,
}

struct Eq {
    target: usize,
    constant: BigRational,
    terms: Vec<Term<BigRational>>,
}

impl Eq {
    fn new(target: usize, constant: BigRational) -> Self {
        Eq {
            target,
            constant,
            terms: Vec::new(),
        }
    }

    /// `coeff (λ_target² − (λ_a − λ_b)²)/(λ_a λ_b)`.
    fn br(&mut self, coeff: BigRational, a: Option<usize>, b: Option<usize>) {
        if coeff.is_zero() {
            return;
        }
        self.terms.push(Term {
            coeff,
            target: self.target,
            a: a.expect("named t-root exists"),
            b: b.expect("named t-root exists"),
        });
    }
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

impl Builder<'_> {
    fn printed(&self) -> bool {
        self.edition == Edition::AsPrinted
    }

    fn r(&self) -> usize {
        self.sizes.len()
    }

    fn others(&self, skip: &[usize]) -> Vec<usize> {
        (0..self.r()).filter(|i| !skip.contains(i)).collect()
    }

    fn push(&mut self, family: u8, name: String, eq: Eq, symbolic_c: bool) {
        self.out.push(Equation {
            label: format!("{}.{} {}", self.shape, family, name),
            family,
            target: eq.target,
            lhs: Component {
                constant: eq.constant,
                terms: eq.terms,
            },
            symbolic_c,
        });
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        let r = self.r();
        (0..r)
            .flat_map(|k| (k + 1..r).map(move |t| (k, t)))
            .collect()
    }

    fn type_a(&mut self) {
        let nm = self.names;
        let half = ratio(1, 2);
        for (i, j) in self.pairs() {
            let mut e = Eq::new(nm.g(i, j).unwrap(), q(self.sizes[i] + self.sizes[j]));
            for l in self.others(&[i, j]) {
                e.br(half.clone() * q(self.sizes[l]), nm.g(i, l), nm.g(j, l));
            }
            self.push(1, format!("g_{{{},{}}}", i + 1, j + 1), e, false);
        }
    }

    /// g_kt equation shared by the B systems.
    fn b_g(&self, k: usize, t: usize, hh: i64, l_coeff: i64) -> Eq {
        let (nm, n) = (self.names, &self.sizes);
        let mut e = Eq::new(nm.g(k, t).unwrap(), q(2 * (n[k] + n[t])));
        e.br(q(hh), nm.h(k), nm.h(t));
        for i in self.others(&[k, t]) {
            e.br(q(n[i]), nm.g(i, k), nm.g(i, t));
        }
        for i in self.others(&[k, t]) {
            e.br(q(n[i]), nm.f(i, k), nm.f(i, t));
        }
        e.br(q(l_coeff * (n[t] - 1)), nm.f(k, t), nm.l(t));
        e.br(q(l_coeff * (n[k] - 1)), nm.f(k, t), nm.l(k));
        e
    }

    /// f_kt equation shared by the B systems.
    fn b_f(&self, k: usize, t: usize, hh: i64) -> Eq {
        let (nm, n) = (self.names, &self.sizes);
        let mut e = Eq::new(nm.f(k, t).unwrap(), q(2 * (n[k] + n[t])));
        e.br(q(hh), nm.h(k), nm.h(t));
        e.br(q(n[k] - 1), nm.l(k), nm.g(k, t));
        e.br(q(n[t] - 1), nm.l(t), nm.g(k, t));
        for i in self.others(&[k, t]) {
            e.br(q(n[i]), nm.f(i, k), nm.g(i, t));
        }
        for i in self.others(&[k, t]) {
            e.br(q(n[i]), nm.f(i, t), nm.g(i, k));
        }
        e
    }

    /// h_k equation shared by the B systems (constant supplied).
    fn b_h(&self, k: usize, constant: i64) -> Eq {
        let (nm, n) = (self.names, &self.sizes);
        let mut e = Eq::new(nm.h(k).unwrap(), q(constant));
        e.br(q(n[k] - 1), nm.h(k), nm.l(k));
        for i in self.others(&[k]) {
            e.br(q(n[i]), nm.h(i), nm.f(i, k));
        }
        for i in self.others(&[k]) {
            e.br(q(n[i]), nm.h(i), nm.g(i, k));
        }
        e
    }

    /// l_k equation shared by the B systems.
    fn b_l(&self, k: usize, hh: i64) -> Eq {
        let (nm, n) = (self.names, &self.sizes);
        let mut e = Eq::new(nm.l(k).unwrap(), q(4 * (n[k] - 1)));
        e.br(q(hh), nm.h(k), nm.h(k));
        for i in self.others(&[k]) {
            e.br(q(2 * n[i]), nm.g(i, k), nm.f(i, k));
        }
        e
    }

    fn type_b_tail(&mut self) {
        let ns1 = self.tail;
        let (hh1, lc) = if self.printed() {
            (1 + 8 * ns1, 4)
        } else {
            (1 + 2 * ns1, 1)
        };
        let pairs = self.pairs();
        for &(k, t) in &pairs {
            let e = self.b_g(k, t, hh1, lc);
            self.push(1, gname(k, t), e, false);
        }
        for k in 0..self.r() {
            let e = self.b_h(k, 2 * (2 * ns1 + self.sizes[k]));
            self.push(2, hname(k), e, false);
        }
        for &(k, t) in &pairs {
            let e = self.b_f(k, t, 1 + 2 * ns1);
            self.push(3, fname(k, t), e, false);
        }
        for k in 0..self.r() {
            let e = self.b_h(k, 2 * (self.sizes[k] + 2 * ns1));
            self.push(4, hname(k), e, false);
        }
        for k in 0..self.r() {
            if self.sizes[k] > 1 {
                let e = self.b_l(k, 1 + 2 * ns1);
                self.push(5, lname(k), e, false);
            }
        }
        for k in 0..self.r() {
            let e = self.b_h(k, 2 * (self.sizes[k] + 2 * ns1));
            self.push(6, hname(k), e, false);
        }
    }

    fn type_b(&mut self) {
        let lc = if self.printed() { 4 } else { 1 };
        let pairs = self.pairs();
        for &(k, t) in &pairs {
            let e = self.b_g(k, t, 1, lc);
            self.push(1, gname(k, t), e, false);
        }
        for &(k, t) in &pairs {
            let e = self.b_f(k, t, 1);
            self.push(2, fname(k, t), e, false);
        }
        for k in 0..self.r() {
            if self.sizes[k] > 1 {
                let e = self.b_l(k, 1);
                self.push(3, lname(k), e, false);
            }
        }
        for k in 0..self.r() {
            let e = self.b_h(k, 2 * self.sizes[k]);
            self.push(4, hname(k), e, false);
        }
    }

    fn type_b_full(&mut self) {
        let pairs = self.pairs();
        for &(k, t) in &pairs {
            let e = self.b_g(k, t, 1, 0);
            self.push(1, gname(k, t), e, false);
        }
        for &(k, t) in &pairs {
            let e = self.b_f(k, t, 1);
            self.push(2, fname(k, t), e, false);
        }
        for k in 0..self.r() {
            let e = self.b_h(k, 2);
            self.push(3, hname(k), e, false);
        }
    }

    fn type_c(&mut self) {
        let (nm, n) = (self.names, self.sizes.clone());
        let pairs = self.pairs();
        for &(k, t) in &pairs {
            let mut e = Eq::new(nm.g(k, t).unwrap(), q(2 * (n[k] + n[t])));
            e.br(q(n[k] + 1), nm.h(k), nm.f(k, t));
            e.br(q(n[t] + 1), nm.h(t), nm.f(k, t));
            for i in self.others(&[k, t]) {
                e.br(q(n[i]), nm.g(i, k), nm.g(i, t));
            }
            for i in self.others(&[k, t]) {
                e.br(q(n[i]), nm.f(i, k), nm.f(i, t));
            }
            self.push(1, gname(k, t), e, false);
        }
        for &(k, t) in &pairs {
            let mut e = Eq::new(nm.f(k, t).unwrap(), q(2 * (n[k] + n[t])));
            e.br(q(n[k] + 1), nm.h(k), nm.g(k, t));
            e.br(q(n[t] + 1), nm.h(t), nm.g(k, t));
            for i in self.others(&[k, t]) {
                e.br(q(n[i]), nm.f(i, t), nm.g(i, k));
            }
            for i in self.others(&[k, t]) {
                e.br(q(n[i]), nm.f(i, k), nm.g(i, t));
            }
            self.push(2, fname(k, t), e, false);
        }
        for k in 0..self.r() {
            let mut e = Eq::new(nm.h(k).unwrap(), q(4 * (n[k] + 1)));
            for i in self.others(&[k]) {
                e.br(q(2 * n[i]), nm.f(i, k), nm.g(i, k));
            }
            self.push(3, hname(k), e, false);
        }
    }

    fn type_c_tail(&mut self) {
        let (nm, n) = (self.names, self.sizes.clone());
        let ns1 = self.tail;
        let big = self.n + 1;
        let quarter = ratio(1, 4 * big);
        let eighth = ratio(1, 8 * big);
        let printed = self.printed();
        let hk = |nk: i64| {
            if printed {
                ratio(2 * nk + 1, 16 * big)
            } else {
                ratio(nk + 1, 8 * big)
            }
        };
        let pairs = self.pairs();
        for &(k, t) in &pairs {
            let mut e = Eq::new(nm.g(k, t).unwrap(), q(n[k] + n[t]) * quarter.clone());
            e.br(hk(n[k]), nm.h(k), nm.f(k, t));
            e.br(hk(n[t]), nm.h(t), nm.f(k, t));
            for i in self.others(&[k, t]) {
                e.br(eighth.clone() * q(n[i]), nm.g(i, k), nm.g(i, t));
            }
            for i in self.others(&[k, t]) {
                e.br(eighth.clone() * q(n[i]), nm.f(i, k), nm.f(i, t));
            }
            e.br(quarter.clone() * q(ns1), nm.t(k), nm.t(t));
            self.push(1, gname(k, t), e, true);
        }
        for k in 0..self.r() {
            let mut e = Eq::new(nm.t(k).unwrap(), q(n[k] + 2 * ns1 + 1) * quarter.clone());
            e.br(hk(n[k]), nm.h(k), nm.t(k));
            for i in self.others(&[k]) {
                e.br(eighth.clone() * q(n[i]), nm.g(i, k), nm.t(i));
            }
            for i in self.others(&[k]) {
                e.br(eighth.clone() * q(n[i]), nm.f(i, k), nm.t(i));
            }
            self.push(2, format!("g_{{{},s+1}}", k + 1), e, true);
        }
        for &(k, t) in &pairs {
            let mut e = Eq::new(nm.f(k, t).unwrap(), q(n[k] + n[t]) * quarter.clone());
            e.br(hk(n[k]), nm.h(k), nm.g(k, t));
            e.br(hk(n[t]), nm.h(t), nm.g(k, t));
            for i in self.others(&[k, t]) {
                e.br(eighth.clone() * q(n[i]), nm.f(i, t), nm.g(i, k));
            }
            for i in self.others(&[k, t]) {
                e.br(eighth.clone() * q(n[i]), nm.f(i, k), nm.g(i, t));
            }
            e.br(quarter.clone() * q(ns1), nm.t(k), nm.t(t));
            self.push(3, fname(k, t), e, true);
        }
        for k in 0..self.r() {
            let mut e = Eq::new(nm.t(k).unwrap(), q(n[k] + 2 * ns1 + 1) * quarter.clone());
            e.br(hk(n[k]), nm.h(k), nm.t(k));
            for i in self.others(&[k]) {
                e.br(eighth.clone() * q(n[i]), nm.g(i, k), nm.t(i));
            }
            if !printed {
                for i in self.others(&[k]) {
                    e.br(eighth.clone() * q(n[i]), nm.f(i, k), nm.t(i));
                }
            }
            self.push(4, format!("f_{{{},s+1}}", k + 1), e, true);
        }
        for k in 0..self.r() {
            let mut e = Eq::new(nm.h(k).unwrap(), q(2 * (n[k] + 1)) * quarter.clone());
            e.br(quarter.clone() * q(ns1), nm.t(k), nm.t(k));
            for i in self.others(&[k]) {
                e.br(quarter.clone() * q(n[i]), nm.f(i, k), nm.g(i, k));
            }
            self.push(5, hname(k), e, true);
        }
    }

    fn type_d(&mut self) {
        let (nm, n) = (self.names, self.sizes.clone());
        let half = ratio(1, 2);
        let pairs = self.pairs();
        for &(i, j) in &pairs {
            let mut e = Eq::new(nm.g(i, j).unwrap(), q(n[i] + n[j]));
            for l in self.others(&[i, j]) {
                e.br(half.clone() * q(n[l]), nm.g(i, l), nm.g(j, l));
            }
            for l in self.others(&[i, j]) {
                e.br(half.clone() * q(n[l]), nm.f(i, l), nm.f(j, l));
            }
            e.br(half.clone() * q(n[i] - 1), nm.f(i, j), nm.h(i));
            e.br(half.clone() * q(n[j] - 1), nm.f(i, j), nm.h(j));
            self.push(1, gname(i, j), e, false);
        }
        for &(i, j) in &pairs {
            let mut e = Eq::new(nm.f(i, j).unwrap(), q(n[i] + n[j]));
            for l in self.others(&[i, j]) {
                e.br(half.clone() * q(n[l]), nm.g(i, l), nm.f(j, l));
            }
            for l in self.others(&[i, j]) {
                e.br(half.clone() * q(n[l]), nm.f(i, l), nm.g(j, l));
            }
            e.br(half.clone() * q(n[i] - 1), nm.g(i, j), nm.h(i));
            e.br(half.clone() * q(n[j] - 1), nm.g(i, j), nm.h(j));
            self.push(2, fname(i, j), e, false);
        }
        for i in 0..self.r() {
            if n[i] > 1 {
                let mut e = Eq::new(nm.h(i).unwrap(), q(2 * (n[i] - 1)));
                for l in self.others(&[i]) {
                    e.br(q(n[l]), nm.g(i, l), nm.f(i, l));
                }
                self.push(3, hname(i), e, false);
            }
        }
    }

    fn type_d_tail(&mut self) {
        let (nm, n) = (self.names, self.sizes.clone());
        let ns1 = self.tail;
        let r = self.r();
        // index r stands for the tail, where g_{i(s+1)} = f_{i(s+1)} = t_i
        let size = |k: usize| if k == r { ns1 } else { n[k] };
        let gg = |i: usize, k: usize| if k == r { nm.t(i) } else { nm.g(i, k) };
        let ff = |i: usize, k: usize| if k == r { nm.t(i) } else { nm.f(i, k) };
        let with_tail =
            |skip: &[usize]| -> Vec<usize> { (0..=r).filter(|k| !skip.contains(k)).collect() };
        let half = ratio(1, 2);
        let printed = self.printed();
        let pairs = self.pairs();
        for &(i, j) in &pairs {
            let mut e = Eq::new(nm.g(i, j).unwrap(), q(n[i] + n[j]));
            let (pre, f_mul, g_mul) = if printed {
                (ratio(1, 4), 1, 2)
            } else {
                (half.clone(), 1, 1)
            };
            for k in with_tail(&[i, j]) {
                e.br(pre.clone() * q(f_mul * size(k)), ff(i, k), ff(j, k));
            }
            for k in with_tail(&[i, j]) {
                e.br(pre.clone() * q(g_mul * size(k)), gg(i, k), gg(j, k));
            }
            e.br(pre.clone() * q(n[j] - 1), nm.f(i, j), nm.h(j));
            e.br(pre.clone() * q(n[i] - 1), nm.f(i, j), nm.h(i));
            self.push(1, gname(i, j), e, false);
        }
        for i in 0..r {
            let mut e = Eq::new(nm.t(i).unwrap(), q(2 * ns1 + n[i] - 1));
            for k in self.others(&[i]) {
                e.br(half.clone() * q(n[k]), nm.f(i, k), nm.t(k));
            }
            for k in self.others(&[i]) {
                e.br(half.clone() * q(n[k]), nm.g(i, k), nm.t(k));
            }
            e.br(half.clone() * q(n[i] - 1), nm.t(i), nm.h(i));
            self.push(2, format!("t_{}", i + 1), e, false);
        }
        for &(i, j) in &pairs {
            let mut e = Eq::new(nm.f(i, j).unwrap(), q(n[i] + n[j]));
            for k in with_tail(&[i, j]) {
                e.br(half.clone() * q(size(k)), ff(j, k), gg(i, k));
            }
            for k in with_tail(&[i, j]) {
                e.br(half.clone() * q(size(k)), ff(i, k), gg(j, k));
            }
            e.br(half.clone() * q(n[i] - 1), nm.g(i, j), nm.h(i));
            e.br(half.clone() * q(n[j] - 1), nm.g(i, j), nm.h(j));
            self.push(3, fname(i, j), e, false);
        }
        for (i, &ni) in n.iter().enumerate().take(r) {
            if ni > 1 {
                let constant = if printed { ni } else { 2 * (ni - 1) };
                let mut e = Eq::new(nm.h(i).unwrap(), q(constant));
                for k in with_tail(&[i]) {
                    e.br(q(size(k)), ff(i, k), gg(i, k));
                }
                self.push(4, hname(i), e, false);
            }
        }
    }
}

fn gname(k: usize, t: usize) -> String {
    format!("g_{{{},{}}}", k + 1, t + 1)
}

fn fname(k: usize, t: usize) -> String {
    format!("f_{{{},{}}}", k + 1, t + 1)
}

fn hname(k: usize) -> String {
    format!("h_{}", k + 1)
}

fn lname(k: usize) -> String {
    format!("l_{}", k + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifold(s: &str) -> FlagManifold {
        FlagManifold::new(s.parse().unwrap()).unwrap()
    }

    fn system(s: &str, ed: Edition) -> ExplicitSystem {
        ExplicitSystem::new(&manifold(s), ed).unwrap()
    }

    #[test]
    fn shapes() {
        let cases = [
            ("A:2,1", Shape::A),
            ("B:2,1;tail=2", Shape::BTail),
            ("B:2,2", Shape::BNoTail),
            ("B:1,1,1", Shape::BFull),
            ("C:1,1", Shape::CNoTail),
            ("C:2;tail=3", Shape::CTail),
            ("D:2,2", Shape::DNoTail),
            ("D:2,1;tail=4", Shape::DTail),
        ];
        for (s, shape) in cases {
            assert_eq!(Shape::of(&s.parse().unwrap()).unwrap(), shape, "{s}");
        }
    }

    #[test]
    fn c11_unit_metric() {
        let sys = system("C:1,1", Edition::Corrected);
        let x = vec![1.0; 4];
        let v = sys.evaluate(&x, None).unwrap();
        let by_label: BTreeMap<_, _> = sys
            .equations()
            .iter()
            .map(|e| e.label.clone())
            .zip(v)
            .collect();
        assert_eq!(by_label["C.1 g_{1,2}"], 7.0);
        assert_eq!(by_label["C.2 f_{1,2}"], 7.0);
        assert_eq!(by_label["C.3 h_1"], 9.0);
        assert_eq!(by_label["C.3 h_2"], 9.0);
    }

    #[test]
    fn a111_normal_metric() {
        let sys = system("A:1,1,1", Edition::AsPrinted);
        let v = sys.evaluate(&[2.5f64, 2.5, 2.5], None).unwrap();
        assert!(v.iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn name_map_is_total_and_identifies_tails() {
        for s in [
            "A:1,2,1",
            "B:2,1;tail=2",
            "B:3,2",
            "C:2,1",
            "C:2,1;tail=3",
            "D:2,2",
            "D:2,1;tail=4",
        ] {
            assert!(NameMap::new(&manifold(s)).is_total(), "{s}");
        }
        let b = NameMap::new(&manifold("B:2,1;tail=2"));
        assert_eq!(b.names()["g_{1,3}"], b.names()["h_1"]);
        assert_eq!(b.names()["f_{2,3}"], b.names()["h_2"]);
        let c = NameMap::new(&manifold("C:2,1"));
        assert_eq!(c.names()["l_1"], c.names()["h_1"]);
        let d = NameMap::new(&manifold("D:2,1;tail=4"));
        assert_eq!(d.names()["t_1"], d.names()["g_{1,3}"]);
        assert_eq!(d.names()["t_1"], d.names()["f_{1,3}"]);
    }

    #[test]
    fn b_full_symmetry() {
        let m = manifold("B:1,1");
        let sys = ExplicitSystem::new(&m, Edition::AsPrinted).unwrap();
        let nm = sys.names();
        let mut x = vec![0.0f64; m.count_summands()];
        x[nm.h(0).unwrap()] = 1.7;
        x[nm.h(1).unwrap()] = 1.7;
        x[nm.g(0, 1).unwrap()] = 0.6;
        x[nm.f(0, 1).unwrap()] = 0.6;
        let v = sys.evaluate(&x, None).unwrap();
        let g = sys
            .equations()
            .iter()
            .position(|e| e.label.ends_with("g_{1,2}"))
            .unwrap();
        let f = sys
            .equations()
            .iter()
            .position(|e| e.label.ends_with("f_{1,2}"))
            .unwrap();
        assert!((v[g] - v[f]).abs() < 1e-15);
    }

    #[test]
    fn c_tail_needs_c() {
        let sys = system("C:2;tail=3", Edition::Corrected);
        assert!(sys.has_symbolic_constant());
        assert!(matches!(
            sys.evaluate(&[1.0, 1.0], None),
            Err(Error::Domain(_))
        ));
        assert!(sys.evaluate(&[1.0, 1.0], Some(&0.5)).is_ok());
        let families: std::collections::BTreeSet<u8> =
            sys.equations().iter().map(|e| e.family).collect();
        assert_eq!(families.into_iter().collect::<Vec<_>>(), vec![2, 4, 5]);
        let sys = system("C:2,1;tail=3", Edition::Corrected);
        let families: std::collections::BTreeSet<u8> =
            sys.equations().iter().map(|e| e.family).collect();
        assert_eq!(families.len(), 5);
    }

    #[test]
    fn editions_differ_only_on_registered_families() {
        for s in [
            "B:2,2,1;tail=2",
            "B:3,2",
            "C:2,1;tail=3",
            "D:3,2;tail=4",
            "A:2,1,1",
            "C:2,2",
            "D:2,2",
            "B:1,1,1",
        ] {
            let m = manifold(s);
            let p = ExplicitSystem::new(&m, Edition::AsPrinted).unwrap();
            let c = ExplicitSystem::new(&m, Edition::Corrected).unwrap();
            assert_eq!(p.equations().len(), c.equations().len());
            let registered: Vec<u8> = errata_for(p.shape())
                .flat_map(|e| e.families.iter().copied())
                .collect();
            for (a, b) in p.equations().iter().zip(c.equations()) {
                if a != b {
                    assert!(registered.contains(&a.family), "{s}: {}", a.label);
                }
            }
        }
    }

    #[test]
    fn edition_parse() {
        assert_eq!("printed".parse::<Edition>().unwrap(), Edition::AsPrinted);
        assert!("draft".parse::<Edition>().is_err());
    }
}
