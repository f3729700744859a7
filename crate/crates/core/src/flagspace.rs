//! Flag specifications, t-root projection and the isotropy decomposition.
//!
//! A spec lists block sizes `n_1..n_r` (each block a `U(n_i)` factor, size-1
//! blocks being the `U(1)` factors) followed by an optional tail on the last
//! `t` ε-coordinates (`SO(2t+1)`, `Sp(t)` or `SO(2t)`). Θ-roots are the roots
//! inside a block plus every root supported on the tail; projection to 𝔱 sums
//! the ε-coefficients of each block and drops the tail.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SpecErrorCode};
use crate::rootsys::{format_linear, LieType, Root, RootSystem};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlagSpec {
    pub lie_type: LieType,
    pub blocks: Vec<usize>,
    pub tail: Option<usize>,
}

impl FlagSpec {
    pub fn new(lie_type: LieType, blocks: Vec<usize>, tail: Option<usize>) -> Result<Self> {
        let spec = FlagSpec {
            lie_type,
            blocks,
            tail,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Total number of ε-coordinates.
    pub fn n(&self) -> usize {
        self.blocks.iter().sum::<usize>() + self.tail.unwrap_or(0)
    }

    /// Number of blocks, `s + m`.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Blocks of size > 1.
    pub fn s(&self) -> usize {
        self.blocks.iter().filter(|&&b| b > 1).count()
    }

    /// Blocks of size 1.
    pub fn m(&self) -> usize {
        self.blocks.iter().filter(|&&b| b == 1).count()
    }

    pub fn min_rank(ty: LieType) -> usize {
        match ty {
            LieType::A | LieType::B | LieType::C => 2,
            LieType::D => 4,
        }
    }

    pub fn min_tail(ty: LieType) -> Option<usize> {
        match ty {
            LieType::A => None,
            LieType::B => Some(2),
            LieType::C => Some(3),
            LieType::D => Some(4),
        }
    }

    pub fn validate(&self) -> Result<()> {
        use SpecErrorCode::*;
        if self.blocks.is_empty() {
            return Err(Error::spec(Structure, "at least one block is required"));
        }
        if self.blocks.contains(&0) {
            return Err(Error::spec(Structure, "block sizes must be positive"));
        }
        match (self.lie_type, self.tail) {
            (LieType::A, Some(_)) => {
                return Err(Error::spec(Structure, "type A has no tail"));
            }
            (LieType::A, None) if self.blocks.len() < 2 => {
                return Err(Error::spec(
                    Structure,
                    "type A needs at least two blocks (K = G otherwise)",
                ));
            }
            (ty, Some(t)) => {
                let min = Self::min_tail(ty).expect("non-A types have a tail bound");
                if t < min {
                    return Err(Error::spec(
                        TailBound,
                        format!("type {ty} tail must be at least {min}, got {t}"),
                    ));
                }
            }
            _ => {}
        }
        let min = Self::min_rank(self.lie_type);
        if self.n() < min {
            return Err(Error::spec(
                RankTooSmall,
                format!(
                    "type {} needs rank at least {min}, got {}",
                    self.lie_type,
                    self.n()
                ),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for FlagSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{}:{}", self.lie_type, blocks.join(","))?;
        if let Some(t) = self.tail {
            write!(f, ";tail={t}")?;
        }
        Ok(())
    }
}

impl FromStr for FlagSpec {
    type Err = Error;

    /// `TYPE:b1,b2,...[;tail=T]`, type letter case-insensitive, no whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let syntax = |msg: &str| Error::spec(SpecErrorCode::Syntax, format!("`{s}`: {msg}"));
        if s.chars().any(char::is_whitespace) {
            return Err(syntax("whitespace is not allowed"));
        }
        let (ty, rest) = s.split_once(':').ok_or_else(|| syntax("missing `:`"))?;
        let lie_type: LieType = ty.parse().map_err(|_| syntax("unknown Lie type"))?;
        let (blocks, tail) = match rest.split_once(';') {
            Some((b, t)) => {
                let t = t
                    .strip_prefix("tail=")
                    .ok_or_else(|| syntax("expected `;tail=T`"))?;
                let t: usize = t.parse().map_err(|_| syntax("tail must be an integer"))?;
                (b, Some(t))
            }
            None => (rest, None),
        };
        if blocks.is_empty() {
            return Err(syntax("no blocks"));
        }
        let blocks = blocks
            .split(',')
            .map(|b| b.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| syntax("block sizes must be integers"))?;
        FlagSpec::new(lie_type, blocks, tail)
    }
}

/// Restriction of a root to 𝔱, as coefficients over δ_1..δ_r.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TRoot(pub Vec<i32>);

impl TRoot {
    pub fn coeffs(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
    }

    pub fn neg(&self) -> TRoot {
        TRoot(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &TRoot) -> TRoot {
        TRoot(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Representative of ±self with positive leading coefficient.
    pub fn abs(&self) -> TRoot {
        if self.is_positive() {
            self.clone()
        } else {
            self.neg()
        }
    }

    /// Identifier such as `d1-d2`, `d1+d2`, `2d1` or `d1`.
    pub fn id(&self) -> String {
        format_linear(&self.0, "d")
    }

    pub fn parse_id(id: &str, r: usize) -> Option<TRoot> {
        let mut v = vec![0i32; r];
        let mut rest = id;
        if rest.is_empty() {
            return None;
        }
        while !rest.is_empty() {
            let sign = match rest.as_bytes()[0] {
                b'-' => {
                    rest = &rest[1..];
                    -1
                }
                b'+' => {
                    rest = &rest[1..];
                    1
                }
                _ => 1,
            };
            let d = rest.find('d')?;
            let mag: i32 = if d == 0 { 1 } else { rest[..d].parse().ok()? };
            rest = &rest[d + 1..];
            let end = rest
                .find(|c: char| !c.is_ascii_digit())
                .unwrap_or(rest.len());
            let idx: usize = rest[..end].parse().ok()?;
            if idx == 0 || idx > r {
                return None;
            }
            v[idx - 1] += sign * mag;
            rest = &rest[end..];
        }
        Some(TRoot(v))
    }
}

impl fmt::Display for TRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summand {
    pub troot: TRoot,
    /// Positive complementary roots projecting onto `troot`, sorted.
    pub fiber: Vec<Root>,
    pub real_dimension: usize,
}

impl Summand {
    /// Lexicographically smallest root of the fiber.
    pub fn representative(&self) -> &Root {
        &self.fiber[0]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IsotropyDecomposition {
    pub summands: Vec<Summand>,
}

impl IsotropyDecomposition {
    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn troots(&self) -> impl Iterator<Item = &TRoot> {
        self.summands.iter().map(|s| &s.troot)
    }
}

/// How the set of t-roots sits among root systems on the block coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TRootClass {
    /// Equal to the standard positive system of the given type and rank.
    RootSystem(LieType, usize),
    /// Some ξ and 2ξ are both t-roots.
    NonReduced,
    /// Reduced, but not one of the classical patterns.
    Reduced,
}

impl fmt::Display for TRootClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TRootClass::RootSystem(ty, r) => write!(f, "root_system({ty},{r})"),
            TRootClass::NonReduced => f.write_str("non_reduced"),
            TRootClass::Reduced => f.write_str("reduced"),
        }
    }
}

/// A flag manifold with its root data precomputed.
#[derive(Debug, Clone)]
pub struct FlagManifold {
    spec: FlagSpec,
    system: RootSystem,
    block_of: Vec<Option<usize>>,
    theta: Vec<Root>,
    complement: Vec<Root>,
    decomposition: IsotropyDecomposition,
    index: HashMap<TRoot, usize>,
}

impl FlagManifold {
    pub fn new(spec: FlagSpec) -> Result<Self> {
        spec.validate()?;
        let system = RootSystem::new(spec.lie_type, spec.n())?;
        let mut block_of = Vec::with_capacity(spec.n());
        for (i, &b) in spec.blocks.iter().enumerate() {
            block_of.extend(std::iter::repeat_n(Some(i), b));
        }
        block_of.extend(std::iter::repeat_n(None, spec.tail.unwrap_or(0)));

        let mut manifold = FlagManifold {
            spec,
            system,
            block_of,
            theta: Vec::new(),
            complement: Vec::new(),
            decomposition: IsotropyDecomposition {
                summands: Vec::new(),
            },
            index: HashMap::new(),
        };
        let (theta, complement): (Vec<Root>, Vec<Root>) = manifold
            .system
            .roots()
            .iter()
            .cloned()
            .partition(|a| manifold.project(a).is_zero());
        if complement.is_empty() {
            return Err(Error::spec(
                SpecErrorCode::Structure,
                "K = G: no complementary roots",
            ));
        }

        let mut fibers: HashMap<TRoot, Vec<Root>> = HashMap::new();
        for a in complement.iter().filter(|a| a.is_positive()) {
            fibers
                .entry(manifold.project(a))
                .or_default()
                .push(a.clone());
        }
        let mut summands: Vec<Summand> = fibers
            .into_iter()
            .map(|(troot, mut fiber)| {
                fiber.sort();
                let real_dimension = 2 * fiber.len();
                Summand {
                    troot,
                    fiber,
                    real_dimension,
                }
            })
            .collect();
        summands.sort_by(|a, b| b.troot.cmp(&a.troot));
        manifold.index = summands
            .iter()
            .enumerate()
            .map(|(i, s)| (s.troot.clone(), i))
            .collect();
        manifold.theta = theta;
        manifold.complement = complement;
        manifold.decomposition = IsotropyDecomposition { summands };
        Ok(manifold)
    }

    pub fn spec(&self) -> &FlagSpec {
        &self.spec
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.system
    }

    /// Π_Θ: block-internal roots and all roots supported on the tail.
    pub fn pi_theta(&self) -> &[Root] {
        &self.theta
    }

    /// Π_M = Π \ Π_Θ.
    pub fn pi_m(&self) -> &[Root] {
        &self.complement
    }

    /// Block index of an ε-coordinate, `None` on the tail.
    pub fn block_of(&self, coord: usize) -> Option<usize> {
        self.block_of[coord]
    }

    /// First ε-coordinate of block `i`.
    pub fn block_start(&self, i: usize) -> usize {
        self.spec.blocks[..i].iter().sum()
    }

    /// First ε-coordinate of the tail.
    pub fn tail_start(&self) -> usize {
        self.spec.blocks.iter().sum()
    }

    fn project(&self, a: &Root) -> TRoot {
        let mut v = vec![0; self.spec.blocks.len()];
        for (coord, &c) in a.coeffs().iter().enumerate() {
            if let Some(i) = self.block_of[coord] {
                v[i] += c;
            }
        }
        TRoot(v)
    }

    /// k(α) = α|_𝔱; `None` exactly for α ∈ Π_Θ.
    pub fn project_to_t(&self, a: &Root) -> Option<TRoot> {
        let t = self.project(a);
        (!t.is_zero()).then_some(t)
    }

    pub fn decomposition(&self) -> &IsotropyDecomposition {
        &self.decomposition
    }

    pub fn summands(&self) -> &[Summand] {
        &self.decomposition.summands
    }

    /// Number of isotropy summands, by projection.
    pub fn count_summands(&self) -> usize {
        self.decomposition.len()
    }

    /// Position of a positive t-root in the canonical order.
    pub fn troot_index(&self, t: &TRoot) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Index of the summand carrying λ for the complementary root `a`
    /// (λ_{−ξ} = λ_ξ).
    pub fn summand_of(&self, a: &Root) -> Option<usize> {
        let t = self.project_to_t(a)?;
        self.troot_index(&t.abs())
    }

    /// All t-roots, positive and negative.
    pub fn all_troots(&self) -> BTreeSet<TRoot> {
        self.decomposition
            .troots()
            .flat_map(|t| [t.clone(), t.neg()])
            .collect()
    }

    pub fn classify_t_root_set(&self) -> TRootClass {
        let positive: BTreeSet<TRoot> = self.decomposition.troots().cloned().collect();
        let all = self.all_troots();
        for t in &positive {
            let double = TRoot(t.0.iter().map(|c| 2 * c).collect());
            if all.contains(&double) {
                return TRootClass::NonReduced;
            }
        }
        let r = self.spec.blocks.len();
        let candidates: [(LieType, usize); 4] = [
            (LieType::A, r.saturating_sub(1)),
            (LieType::B, r),
            (LieType::C, r),
            (LieType::D, r),
        ];
        for (ty, rank) in candidates {
            if pattern(ty, r) == positive {
                return TRootClass::RootSystem(ty, rank);
            }
        }
        TRootClass::Reduced
    }

    /// Permutations of blocks that only exchange blocks of equal size.
    pub fn block_permutations(&self) -> Vec<Vec<usize>> {
        let r = self.spec.blocks.len();
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(r);
        let mut used = vec![false; r];
        fn rec(
            sizes: &[usize],
            current: &mut Vec<usize>,
            used: &mut [bool],
            out: &mut Vec<Vec<usize>>,
        ) {
            let pos = current.len();
            if pos == sizes.len() {
                out.push(current.clone());
                return;
            }
            for j in 0..sizes.len() {
                if !used[j] && sizes[j] == sizes[pos] {
                    used[j] = true;
                    current.push(j);
                    rec(sizes, current, used, out);
                    current.pop();
                    used[j] = false;
                }
            }
        }
        rec(&self.spec.blocks, &mut current, &mut used, &mut out);
        out
    }

    /// Action of a block permutation on summand indices: block `i` is sent to
    /// block `perm[i]`.
    pub fn permute_summands(&self, perm: &[usize]) -> Vec<usize> {
        self.decomposition
            .troots()
            .map(|t| {
                let mut v = vec![0; t.0.len()];
                for (i, &c) in t.0.iter().enumerate() {
                    v[perm[i]] += c;
                }
                self.troot_index(&TRoot(v).abs())
                    .expect("block permutations of equal sizes preserve t-roots")
            })
            .collect()
    }
}

/// Standard positive system of a classical type on `r` δ-coordinates.
fn pattern(ty: LieType, r: usize) -> BTreeSet<TRoot> {
    let unit = |i: usize| {
        let mut v = vec![0; r];
        v[i] = 1;
        TRoot(v)
    };
    let mut out = BTreeSet::new();
    for i in 0..r {
        for j in i + 1..r {
            out.insert(unit(i).add(&unit(j).neg()));
            if ty != LieType::A {
                out.insert(unit(i).add(&unit(j)));
            }
        }
        match ty {
            LieType::B => {
                out.insert(unit(i));
            }
            LieType::C => {
                out.insert(unit(i).add(&unit(i)));
            }
            _ => {}
        }
    }
    out
}

/// Every valid spec of type `ty` on exactly `n` ε-coordinates: all ordered
/// block compositions, with and without each legal tail.
pub fn all_specs(ty: LieType, n: usize) -> Vec<FlagSpec> {
    fn compositions(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        (1..=n)
            .flat_map(|first| {
                compositions(n - first).into_iter().map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
            })
            .collect()
    }
    let mut tails = vec![None];
    if let Some(min) = FlagSpec::min_tail(ty) {
        tails.extend((min..n).map(Some));
    }
    let mut out = Vec::new();
    for tail in tails {
        for blocks in compositions(n - tail.unwrap_or(0)) {
            let spec = FlagSpec {
                lie_type: ty,
                blocks,
                tail,
            };
            if spec.validate().is_ok() {
                out.push(spec);
            }
        }
    }
    out
}

/// Closed-form summand count and its formula string, by spec shape.
pub fn table1(spec: &FlagSpec) -> (usize, &'static str) {
    let (s, m) = (spec.s(), spec.m());
    let sm = s + m;
    match (spec.lie_type, spec.tail.is_some()) {
        (LieType::A, _) => {
            let r = spec.blocks.len();
            (r * (r - 1) / 2, "s(s-1)/2")
        }
        (LieType::B, _) => (sm * sm + s, "(s+m)^2+s"),
        (LieType::C, false) => (sm * sm, "(s+m)^2"),
        (LieType::C, true) => (sm * sm + sm, "(s+m)^2+(s+m)"),
        (LieType::D, false) => (sm * sm - m, "(s+m)^2-m"),
        (LieType::D, true) => (sm * sm + s, "(s+m)^2+s"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifold(s: &str) -> FlagManifold {
        FlagManifold::new(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let s: FlagSpec = "c:2;tail=3".parse().unwrap();
        assert_eq!(s.lie_type, LieType::C);
        assert_eq!(s.blocks, vec![2]);
        assert_eq!(s.tail, Some(3));
        assert_eq!(s.n(), 5);
        assert_eq!(s.to_string(), "C:2;tail=3");
        assert_eq!("D:1,1,1,1".parse::<FlagSpec>().unwrap().n(), 4);
    }

    fn code(s: &str) -> SpecErrorCode {
        match s.parse::<FlagSpec>() {
            Err(Error::InvalidSpec { code, .. }) => code,
            other => panic!("expected invalid spec for {s}, got {other:?}"),
        }
    }

    #[test]
    fn rejections() {
        assert_eq!(code("B: 2,2"), SpecErrorCode::Syntax);
        assert_eq!(code("E:2"), SpecErrorCode::Syntax);
        assert_eq!(code("B:2;tl=2"), SpecErrorCode::Syntax);
        assert_eq!(code("B:"), SpecErrorCode::Syntax);
        assert_eq!(code("C:2;tail=2"), SpecErrorCode::TailBound);
        assert_eq!(code("D:2;tail=3"), SpecErrorCode::TailBound);
        assert_eq!(code("B:1;tail=1"), SpecErrorCode::TailBound);
        assert_eq!(code("D:1,1,1"), SpecErrorCode::RankTooSmall);
        assert_eq!(code("B:1"), SpecErrorCode::RankTooSmall);
        assert_eq!(code("A:3"), SpecErrorCode::Structure);
        assert_eq!(code("A:1,1;tail=2"), SpecErrorCode::Structure);
        assert_eq!(code("B:2,0"), SpecErrorCode::Structure);
    }

    #[test]
    fn pi_theta_examples() {
        let b = manifold("B:2,2");
        let theta: BTreeSet<_> = b.pi_theta().iter().map(|r| r.to_string()).collect();
        let expected: BTreeSet<_> = ["e1-e2", "-e1+e2", "e3-e4", "-e3+e4"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(theta, expected);

        // sl(2) x sp(3): 2 + 18
        let c = manifold("C:2;tail=3");
        assert_eq!(c.pi_theta().len(), 20);
        let tail_roots = c
            .pi_theta()
            .iter()
            .filter(|r| r.coeffs()[..2].iter().all(|&x| x == 0))
            .count();
        assert_eq!(tail_roots, 18);

        assert!(manifold("A:1,1,1").pi_theta().is_empty());
    }

    #[test]
    fn pi_m_sizes() {
        assert_eq!(manifold("B:2,2").pi_m().len(), 28);
        assert_eq!(manifold("A:1,1,1").pi_m().len(), 6);
        assert_eq!(manifold("D:2;tail=4").pi_m().len(), 34);
    }

    #[test]
    fn projection() {
        let b = manifold("B:2,1;tail=2");
        let n = 5;
        let e = |i| Root::unit(n, i);
        assert_eq!(b.project_to_t(&e(0)).unwrap().id(), "d1");
        assert_eq!(b.project_to_t(&e(1).add(&e(3))).unwrap().id(), "d1");
        assert_eq!(b.project_to_t(&e(1).sub(&e(4))).unwrap().id(), "d1");
        assert_eq!(b.project_to_t(&e(0).add(&e(1))).unwrap().id(), "2d1");
        assert!(b.project_to_t(&e(0).sub(&e(1))).is_none());
        assert!(b.project_to_t(&e(3)).is_none());
    }

    #[test]
    fn decompositions() {
        let a = manifold("A:1,1,1");
        assert_eq!(a.count_summands(), 3);
        assert!(a.summands().iter().all(|s| s.real_dimension == 2));

        for n in 2..=6 {
            let c = manifold(&format!("C:{n}"));
            assert_eq!(c.count_summands(), 1);
            assert_eq!(c.summands()[0].troot.id(), "2d1");
            assert_eq!(c.summands()[0].fiber.len(), n * (n + 1) / 2);
        }

        let b = manifold("B:1,1");
        let ids: Vec<_> = b.decomposition().troots().map(|t| t.id()).collect();
        assert_eq!(ids, vec!["d1+d2", "d1", "d1-d2", "d2"]);
    }

    #[test]
    fn counts_match_examples() {
        assert_eq!(manifold("B:2,2,1").count_summands(), 11);
        assert_eq!(manifold("C:1,1,1").count_summands(), 9);
        assert_eq!(manifold("D:1,1,1,1").count_summands(), 12);
        assert_eq!(manifold("C:2;tail=3").count_summands(), 2);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            manifold("C:2,2").classify_t_root_set(),
            TRootClass::RootSystem(LieType::C, 2)
        );
        assert_eq!(
            manifold("B:2,2").classify_t_root_set(),
            TRootClass::NonReduced
        );
        assert_eq!(
            manifold("A:1,1,1").classify_t_root_set(),
            TRootClass::RootSystem(LieType::A, 2)
        );
        assert_eq!(
            manifold("D:1,1,1,1").classify_t_root_set(),
            TRootClass::RootSystem(LieType::D, 4)
        );
        assert_eq!(
            manifold("D:2,1,1").classify_t_root_set(),
            TRootClass::Reduced
        );
    }

    #[test]
    fn troot_ids_round_trip() {
        let b = manifold("B:2,2,1;tail=2");
        for t in b.decomposition().troots() {
            assert_eq!(TRoot::parse_id(&t.id(), 3).as_ref(), Some(t));
        }
        assert_eq!(TRoot::parse_id("d4", 3), None);
        assert_eq!(TRoot::parse_id("", 3), None);
    }

    #[test]
    fn spec_enumeration() {
        // compositions of 4 (8) plus tails 2 and 3 over compositions of 2 and 1
        assert_eq!(all_specs(LieType::B, 4).len(), 8 + 2 + 1);
        // A needs two blocks
        assert_eq!(all_specs(LieType::A, 3).len(), 3);
        assert_eq!(all_specs(LieType::D, 3).len(), 0);
        assert!(all_specs(LieType::C, 4).iter().all(|s| s.tail != Some(2)));
    }

    #[test]
    fn equal_size_permutations() {
        let m = manifold("B:2,1,2");
        let perms = m.block_permutations();
        assert_eq!(perms.len(), 2);
        assert!(perms.contains(&vec![2, 1, 0]));
        let a = manifold("A:1,1,1");
        assert_eq!(a.block_permutations().len(), 6);
    }
}
