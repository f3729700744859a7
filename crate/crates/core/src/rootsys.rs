//! Classical root systems in ε-coordinates.
//!
//! Roots are integer vectors over the basis ε_1..ε_n. Killing data is exact:
//! every type carries a single per-coordinate weight `w` so that
//! `B(α, β) = w · Σ α_i β_i`, reproducing the trace normalizations
//! `B(X,Y) = 2n tr(XY)` (A), `2(2n−1) Σ a_i b_i` (B), `2(n+1) tr(XY)` (C) and
//! `2(n−1) tr(XY)` (D).

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SpecErrorCode};
use crate::scalar::ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LieType {
    A,
    B,
    C,
    D,
}

impl LieType {
    pub const ALL: [LieType; 4] = [LieType::A, LieType::B, LieType::C, LieType::D];

    /// Smallest number of ε-coordinates accepted by [`RootSystem::new`].
    pub fn min_coordinates(self) -> usize {
        match self {
            LieType::A | LieType::B | LieType::C => 2,
            LieType::D => 3,
        }
    }

    /// Per-coordinate Killing weight on `n` ε-coordinates.
    pub fn killing_weight(self, n: usize) -> BigRational {
        let n = n as i64;
        match self {
            LieType::A => ratio(1, 2 * n),
            LieType::B => ratio(1, 2 * (2 * n - 1)),
            LieType::C => ratio(1, 4 * (n + 1)),
            LieType::D => ratio(1, 4 * (n - 1)),
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            LieType::A => "A",
            LieType::B => "B",
            LieType::C => "C",
            LieType::D => "D",
        };
        f.write_str(c)
    }
}

impl FromStr for LieType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(LieType::A),
            "B" | "b" => Ok(LieType::B),
            "C" | "c" => Ok(LieType::C),
            "D" | "d" => Ok(LieType::D),
            other => Err(Error::spec(
                SpecErrorCode::Syntax,
                format!("unknown Lie type `{other}`"),
            )),
        }
    }
}

/// A root as its coefficient vector over ε_1..ε_n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root(pub Vec<i32>);

impl Root {
    pub fn coeffs(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// First nonzero coefficient positive.
    pub fn is_positive(&self) -> bool {
        self.0.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
    }

    pub fn add(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, k: i32) -> Root {
        Root(self.0.iter().map(|a| k * a).collect())
    }

    pub fn neg(&self) -> Root {
        self.scaled(-1)
    }

    pub fn dot(&self, other: &Root) -> i64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| i64::from(a) * i64::from(b))
            .sum()
    }

    /// Unit vector ε_i on `n` coordinates.
    pub fn unit(n: usize, i: usize) -> Root {
        let mut v = vec![0; n];
        v[i] = 1;
        Root(v)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_linear(&self.0, "e"))
    }
}

/// Renders an integer vector as `e1-e2`, `2e3`, `-e1-e2`; zero as `0`.
pub(crate) fn format_linear(coeffs: &[i32], symbol: &str) -> String {
    let mut out = String::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 {
            "-"
        } else if out.is_empty() {
            ""
        } else {
            "+"
        };
        let mag = c.unsigned_abs();
        if mag == 1 {
            out.push_str(&format!("{sign}{symbol}{}", i + 1));
        } else {
            out.push_str(&format!("{sign}{mag}{symbol}{}", i + 1));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// The root system of a classical type on `n` ε-coordinates.
#[derive(Debug, Clone)]
pub struct RootSystem {
    ty: LieType,
    n: usize,
    roots: Vec<Root>,
    members: HashSet<Root>,
}

impl RootSystem {
    pub fn new(ty: LieType, n: usize) -> Result<Self> {
        if n < ty.min_coordinates() {
            return Err(Error::spec(
                SpecErrorCode::RankTooSmall,
                format!(
                    "type {ty} needs at least {} coordinates, got {n}",
                    ty.min_coordinates()
                ),
            ));
        }
        let mut roots = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                // ε_i − ε_j for all ordered pairs covers ±(ε_i − ε_j)
                roots.push(Root::unit(n, i).sub(&Root::unit(n, j)));
                if ty != LieType::A && i < j {
                    let s = Root::unit(n, i).add(&Root::unit(n, j));
                    roots.push(s.neg());
                    roots.push(s);
                }
            }
            match ty {
                LieType::B => {
                    roots.push(Root::unit(n, i));
                    roots.push(Root::unit(n, i).neg());
                }
                LieType::C => {
                    roots.push(Root::unit(n, i).scaled(2));
                    roots.push(Root::unit(n, i).scaled(-2));
                }
                _ => {}
            }
        }
        roots.sort();
        roots.dedup();
        let members = roots.iter().cloned().collect();
        Ok(RootSystem {
            ty,
            n,
            roots,
            members,
        })
    }

    pub fn lie_type(&self) -> LieType {
        self.ty
    }

    /// Number of ε-coordinates.
    pub fn rank(&self) -> usize {
        self.n
    }

    /// All roots, sorted lexicographically.
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.is_positive())
    }

    pub fn contains(&self, r: &Root) -> bool {
        r.len() == self.n && self.members.contains(r)
    }

    fn require(&self, r: &Root) -> Result<()> {
        if self.contains(r) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{r} is not a root of {}{}",
                self.ty, self.n
            )))
        }
    }

    pub fn killing_pairing(&self, a: &Root, b: &Root) -> Result<BigRational> {
        self.require(a)?;
        self.require(b)?;
        Ok(self.pairing_unchecked(a, b))
    }

    pub(crate) fn pairing_unchecked(&self, a: &Root, b: &Root) -> BigRational {
        self.ty.killing_weight(self.n) * BigRational::from_integer(a.dot(b).into())
    }

    /// B(α, α).
    pub fn killing_norm(&self, a: &Root) -> Result<BigRational> {
        self.killing_pairing(a, a)
    }

    /// `(p, q)` with β − kα ∈ Π for k ≤ p and β + kα ∈ Π for k ≤ q.
    pub fn root_string(&self, alpha: &Root, beta: &Root) -> Result<(u32, u32)> {
        self.require(alpha)?;
        self.require(beta)?;
        if alpha == beta || *alpha == beta.neg() {
            return Err(Error::Domain(format!(
                "root string of {alpha} through {beta} is undefined"
            )));
        }
        Ok(self.string_unchecked(alpha, beta))
    }

    fn string_unchecked(&self, alpha: &Root, beta: &Root) -> (u32, u32) {
        let walk = |step: i32| {
            let mut k = 0u32;
            let mut cur = beta.clone();
            loop {
                cur = cur.add(&alpha.scaled(step));
                if !self.members.contains(&cur) {
                    return k;
                }
                k += 1;
            }
        };
        (walk(-1), walk(1))
    }

    /// N²_{α,β} = q(1+p)/2 · B(α,α) when α+β is a root, else 0.
    pub fn structure_constant_sq(&self, alpha: &Root, beta: &Root) -> BigRational {
        if !self.contains(alpha) || !self.contains(beta) {
            return BigRational::zero();
        }
        if !self.members.contains(&alpha.add(beta)) {
            return BigRational::zero();
        }
        let (p, q) = self.string_unchecked(alpha, beta);
        ratio(i64::from(q) * (1 + i64::from(p)), 2) * self.pairing_unchecked(alpha, alpha)
    }
}

/// Convenience wrapper over [`RootSystem::new`].
pub fn enumerate_roots(ty: LieType, n: usize) -> Result<Vec<Root>> {
    Ok(RootSystem::new(ty, n)?.roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: &[i32]) -> Root {
        Root(v.to_vec())
    }

    #[test]
    fn b2_roots() {
        let roots = enumerate_roots(LieType::B, 2).unwrap();
        let expected: HashSet<Root> = [
            [1, 0],
            [-1, 0],
            [0, 1],
            [0, -1],
            [1, -1],
            [-1, 1],
            [1, 1],
            [-1, -1],
        ]
        .iter()
        .map(|v| r(v))
        .collect();
        assert_eq!(roots.len(), 8);
        assert_eq!(roots.into_iter().collect::<HashSet<_>>(), expected);
    }

    #[test]
    fn c2_roots() {
        let roots: HashSet<_> = enumerate_roots(LieType::C, 2)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(roots.len(), 8);
        for v in [[2, 0], [0, -2], [1, 1], [1, -1]] {
            assert!(roots.contains(&r(&v)));
        }
        assert!(!roots.contains(&r(&[1, 0])));
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_roots(LieType::D, 3).unwrap().len(), 12);
        assert_eq!(enumerate_roots(LieType::A, 3).unwrap().len(), 6);
    }

    #[test]
    fn rank_minimums() {
        assert!(RootSystem::new(LieType::D, 2).is_err());
        assert!(RootSystem::new(LieType::B, 1).is_err());
        assert!(RootSystem::new(LieType::A, 1).is_err());
    }

    #[test]
    fn killing_norms_per_type() {
        for n in 2..=8i64 {
            let b = RootSystem::new(LieType::B, n as usize).unwrap();
            let e1 = Root::unit(n as usize, 0);
            assert_eq!(b.killing_norm(&e1).unwrap(), ratio(1, 2 * (2 * n - 1)));
            let c = RootSystem::new(LieType::C, n as usize).unwrap();
            assert_eq!(c.killing_norm(&e1.scaled(2)).unwrap(), ratio(1, n + 1));
            let short = Root::unit(n as usize, 0).sub(&Root::unit(n as usize, 1));
            assert_eq!(c.killing_norm(&short).unwrap(), ratio(1, 2 * (n + 1)));
            let a = RootSystem::new(LieType::A, n as usize).unwrap();
            assert_eq!(a.killing_norm(&short).unwrap(), ratio(1, n));
        }
        for n in 3..=8i64 {
            let d = RootSystem::new(LieType::D, n as usize).unwrap();
            for a in d.roots() {
                assert_eq!(d.killing_norm(a).unwrap(), ratio(1, 2 * (n - 1)));
            }
        }
    }

    #[test]
    fn pairings() {
        let n = 4;
        let b = RootSystem::new(LieType::B, n).unwrap();
        let e = |i| Root::unit(n, i);
        assert!(b.killing_pairing(&e(0), &e(1)).unwrap().is_zero());
        assert!(b
            .killing_pairing(&e(0).sub(&e(1)), &e(0).add(&e(1)))
            .unwrap()
            .is_zero());
        let c = RootSystem::new(LieType::C, n).unwrap();
        assert_eq!(
            c.killing_pairing(&e(0).sub(&e(1)), &e(0).scaled(2))
                .unwrap(),
            ratio(1, 2 * (n as i64 + 1))
        );
    }

    #[test]
    fn non_root_is_domain_error() {
        let b = RootSystem::new(LieType::B, 3).unwrap();
        assert!(matches!(
            b.killing_norm(&r(&[2, 0, 0])),
            Err(Error::Domain(_))
        ));
        assert!(matches!(b.killing_norm(&r(&[1, 0])), Err(Error::Domain(_))));
    }

    #[test]
    fn root_strings() {
        let n = 3;
        let e = |i| Root::unit(n, i);
        let b = RootSystem::new(LieType::B, n).unwrap();
        assert_eq!(b.root_string(&e(0).sub(&e(1)), &e(1)).unwrap(), (0, 1));
        let c = RootSystem::new(LieType::C, n).unwrap();
        assert_eq!(
            c.root_string(&e(0).sub(&e(1)), &e(0).add(&e(1))).unwrap(),
            (1, 1)
        );
        assert_eq!(
            c.root_string(&e(1).scaled(2), &e(0).sub(&e(1))).unwrap(),
            (0, 1)
        );
        assert!(c.root_string(&e(1).scaled(2), &e(1).scaled(-2)).is_err());
    }

    #[test]
    fn structure_constants_c() {
        for n in 3..=8usize {
            let c = RootSystem::new(LieType::C, n).unwrap();
            let e = |i| Root::unit(n, i);
            let m = n as i64 + 1;
            assert_eq!(
                c.structure_constant_sq(&e(0).add(&e(1)), &e(0).sub(&e(1)).neg()),
                ratio(1, 2 * m)
            );
            assert_eq!(
                c.structure_constant_sq(&e(0).sub(&e(1)), &e(1).sub(&e(2))),
                ratio(1, 4 * m)
            );
            assert!(c
                .structure_constant_sq(&e(0).sub(&e(1)), &e(0).sub(&e(2)))
                .is_zero());
        }
    }

    #[test]
    fn display() {
        assert_eq!(r(&[1, -1, 0]).to_string(), "e1-e2");
        assert_eq!(r(&[0, 0, -2]).to_string(), "-2e3");
    }
}
