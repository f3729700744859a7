//! Ricci components of invariant metrics and the Einstein system.
//!
//! For a complementary root α with t-root ξ = k(α),
//!
//! ```text
//! Ric(X_α, X_−α) = B(α,α) + Σ_{φ∈Π_Θ, α+φ∈Π} N²_{α,φ}
//!                + ¼ Σ_{β∈Π_M, α+β∈Π_M} N²_{α,β}/(λ_{α+β} λ_β) (λ_α² − (λ_{α+β} − λ_β)²)
//! ```
//!
//! The first two terms are kept exact; the sum is a list of [`Term`]s.

pub mod equivalence;
pub mod explicit;
pub mod export;

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::flagspace::{FlagManifold, FlagSpec, TRoot};
use crate::rootsys::Root;
use crate::scalar::Scalar;

pub use equivalence::{check_equivalence, equivalence_factor, EquationFactor, EquivalenceReport};
pub use explicit::{
    explicit_system, Edition, Equation, Erratum, ExplicitSystem, NameMap, Shape, ERRATA,
};
pub use export::{export_system, Flavor, Format};

/// `coeff · (x_target² − (x_a − x_b)²) / (x_a x_b)` over metric indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term<C> {
    pub coeff: C,
    pub target: usize,
    pub a: usize,
    pub b: usize,
}

impl Term<BigRational> {
    pub fn to_scalar<T: Scalar>(&self) -> Term<T> {
        Term {
            coeff: T::from_rational(&self.coeff),
            target: self.target,
            a: self.a,
            b: self.b,
        }
    }

    /// Same term with `a <= b`; the bracket is symmetric in them.
    pub fn canonical(&self) -> Self {
        let mut t = self.clone();
        if t.a > t.b {
            std::mem::swap(&mut t.a, &mut t.b);
        }
        t
    }
}

impl<T: Scalar> Term<T> {
    pub fn eval(&self, x: &[T]) -> T {
        let (t, a, b) = (&x[self.target], &x[self.a], &x[self.b]);
        let d = a.clone() - b.clone();
        self.coeff.clone() * (t.clone() * t.clone() - d.clone() * d) / (a.clone() * b.clone())
    }

    /// Adds the partial derivatives of this term into `row`.
    pub fn accumulate_gradient(&self, x: &[T], row: &mut [T]) {
        let (t, a, b) = (x[self.target].clone(), x[self.a].clone(), x[self.b].clone());
        let c = self.coeff.clone();
        let two = T::from_int(2);
        let ab = a.clone() * b.clone();
        let tt = t.clone() * t.clone();
        // t²/(ab) − a/b − b/a + 2
        let dt = two * t / ab.clone();
        let da = T::zero() - tt.clone() / (ab.clone() * a.clone()) - T::one() / b.clone()
            + b.clone() / (a.clone() * a.clone());
        let db =
            T::zero() - tt / (ab * b.clone()) + a.clone() / (b.clone() * b.clone()) - T::one() / a;
        row[self.target] = row[self.target].clone() + c.clone() * dt;
        row[self.a] = row[self.a].clone() + c.clone() * da;
        row[self.b] = row[self.b].clone() + c * db;
    }
}

/// A Ricci component: exact constant plus bracket terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Component<C> {
    pub constant: C,
    pub terms: Vec<Term<C>>,
}

impl Component<BigRational> {
    pub fn to_scalar<T: Scalar>(&self) -> Component<T> {
        Component {
            constant: T::from_rational(&self.constant),
            terms: self.terms.iter().map(Term::to_scalar).collect(),
        }
    }
}

impl<T: Scalar> Component<T> {
    pub fn eval(&self, x: &[T]) -> T {
        self.terms
            .iter()
            .fold(self.constant.clone(), |acc, t| acc + t.eval(x))
    }

    pub fn gradient(&self, x: &[T]) -> Vec<T> {
        let mut row = vec![T::zero(); x.len()];
        for t in &self.terms {
            t.accumulate_gradient(x, &mut row);
        }
        row
    }
}

/// Positive metric parameters λ_ξ, one per positive t-root.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricVector<T> {
    troots: Vec<TRoot>,
    values: Vec<T>,
}

impl<T: Scalar> MetricVector<T> {
    /// Values in the canonical t-root order of `m`.
    pub fn new(m: &FlagManifold, values: Vec<T>) -> Result<Self> {
        let troots: Vec<TRoot> = m.decomposition().troots().cloned().collect();
        if values.len() != troots.len() {
            return Err(Error::IncompleteMetric(format!(
                "expected {} values, got {}",
                troots.len(),
                values.len()
            )));
        }
        for (t, v) in troots.iter().zip(&values) {
            if v.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::NotPositive(format!("λ({}) = {:?}", t.id(), v)));
            }
        }
        Ok(MetricVector { troots, values })
    }

    pub fn from_map(m: &FlagManifold, map: &HashMap<TRoot, T>) -> Result<Self> {
        let values = m
            .decomposition()
            .troots()
            .map(|t| {
                map.get(t)
                    .cloned()
                    .ok_or_else(|| Error::IncompleteMetric(format!("no value for {}", t.id())))
            })
            .collect::<Result<Vec<T>>>()?;
        Self::new(m, values)
    }

    pub fn uniform(m: &FlagManifold, v: T) -> Result<Self> {
        Self::new(m, vec![v; m.count_summands()])
    }

    pub fn troots(&self) -> &[TRoot] {
        &self.troots
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, t: &TRoot) -> Option<&T> {
        self.troots
            .iter()
            .position(|x| x == t)
            .map(|i| &self.values[i])
    }

    pub fn scaled(&self, k: &T) -> Self {
        MetricVector {
            troots: self.troots.clone(),
            values: self.values.iter().map(|v| v.clone() * k.clone()).collect(),
        }
    }

    /// Rescaled so that entry `gauge` equals one.
    pub fn gauge_normalized(&self, gauge: usize) -> Self {
        let k = T::one() / self.values[gauge].clone();
        self.scaled(&k)
    }

    fn check_against(&self, m: &FlagManifold) -> Result<()> {
        let same = self.troots.len() == m.count_summands()
            && self
                .troots
                .iter()
                .zip(m.decomposition().troots())
                .all(|(a, b)| a == b);
        if same {
            Ok(())
        } else {
            Err(Error::IncompleteMetric(format!(
                "metric does not match the t-roots of {}",
                m.spec()
            )))
        }
    }
}

fn require_complementary(m: &FlagManifold, a: &Root) -> Result<()> {
    if a.len() != m.spec().n() || !m.root_system().contains(a) {
        return Err(Error::Domain(format!("{a} is not a root of {}", m.spec())));
    }
    if m.project_to_t(a).is_none() {
        return Err(Error::Domain(format!("{a} lies in Π_Θ")));
    }
    Ok(())
}

fn in_pi_m(m: &FlagManifold, a: &Root) -> bool {
    m.root_system().contains(a) && m.project_to_t(a).is_some()
}

/// Π_Θ(α) = {φ ∈ Π_Θ : α + φ ∈ Π}.
pub fn pi_theta_of_alpha(m: &FlagManifold, a: &Root) -> Result<Vec<Root>> {
    require_complementary(m, a)?;
    Ok(m.pi_theta()
        .iter()
        .filter(|phi| m.root_system().contains(&a.add(phi)))
        .cloned()
        .collect())
}

/// Π_M(α) = {β ∈ Π_M : α + β ∈ Π_M}.
pub fn pi_m_of_alpha(m: &FlagManifold, a: &Root) -> Result<Vec<Root>> {
    require_complementary(m, a)?;
    Ok(m.pi_m()
        .iter()
        .filter(|b| in_pi_m(m, &a.add(b)))
        .cloned()
        .collect())
}

/// The Ricci component at the complementary root `a`, symbolically.
pub fn component_at(m: &FlagManifold, a: &Root) -> Result<Component<BigRational>> {
    let sys = m.root_system();
    let target = m
        .summand_of(a)
        .ok_or_else(|| Error::Domain(format!("{a} lies in Π_Θ")))?;
    let mut constant = sys.pairing_unchecked(a, a);
    for phi in pi_theta_of_alpha(m, a)? {
        constant += sys.structure_constant_sq(a, &phi);
    }
    let quarter = BigRational::new(1.into(), 4.into());
    let mut terms = Vec::new();
    for b in pi_m_of_alpha(m, a)? {
        let ab = a.add(&b);
        let coeff = sys.structure_constant_sq(a, &b) * quarter.clone();
        if coeff.is_zero() {
            continue;
        }
        terms.push(Term {
            coeff,
            target,
            a: m.summand_of(&ab).expect("α+β ∈ Π_M"),
            b: m.summand_of(&b).expect("β ∈ Π_M"),
        });
    }
    Ok(Component { constant, terms })
}

/// Ricci component of ξ evaluated at its canonical fiber representative.
pub fn ricci_component<T: Scalar>(
    m: &FlagManifold,
    lambda: &MetricVector<T>,
    xi: &TRoot,
) -> Result<T> {
    lambda.check_against(m)?;
    let i = m.troot_index(xi).ok_or_else(|| {
        Error::Domain(format!(
            "{} is not a positive t-root of {}",
            xi.id(),
            m.spec()
        ))
    })?;
    let rep = m.summands()[i].representative();
    Ok(component_at(m, rep)?.to_scalar::<T>().eval(lambda.values()))
}

/// Ricci component evaluated at an arbitrary complementary root.
pub fn ricci_component_at<T: Scalar>(
    m: &FlagManifold,
    lambda: &MetricVector<T>,
    a: &Root,
) -> Result<T> {
    lambda.check_against(m)?;
    Ok(component_at(m, a)?.to_scalar::<T>().eval(lambda.values()))
}

/// Einstein residuals `Ric_i/λ_i − Ric_g/λ_g` over non-gauge t-roots.
#[derive(Debug, Clone)]
pub struct EinsteinSystem<T> {
    spec: FlagSpec,
    troots: Vec<TRoot>,
    gauge: usize,
    exact: Vec<Component<BigRational>>,
    components: Vec<Component<T>>,
}

impl<T: Scalar> EinsteinSystem<T> {
    pub fn generate(m: &FlagManifold) -> Self {
        let exact: Vec<Component<BigRational>> = m
            .summands()
            .iter()
            .map(|s| {
                component_at(m, s.representative()).expect("representatives are complementary")
            })
            .collect();
        EinsteinSystem {
            spec: m.spec().clone(),
            troots: m.decomposition().troots().cloned().collect(),
            gauge: 0,
            components: exact.iter().map(Component::to_scalar).collect(),
            exact,
        }
    }

    pub fn spec(&self) -> &FlagSpec {
        &self.spec
    }

    pub fn troots(&self) -> &[TRoot] {
        &self.troots
    }

    pub fn gauge(&self) -> usize {
        self.gauge
    }

    /// Number of metric parameters.
    pub fn dim(&self) -> usize {
        self.troots.len()
    }

    /// Number of unknowns and residual equations once the gauge is fixed.
    pub fn unknowns(&self) -> usize {
        self.dim() - 1
    }

    pub fn exact_components(&self) -> &[Component<BigRational>] {
        &self.exact
    }

    pub fn components(&self, x: &[T]) -> Vec<T> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    /// Full metric vector with the gauge entry set to one.
    pub fn embed(&self, unknowns: &[T]) -> Vec<T> {
        let mut x = Vec::with_capacity(self.dim());
        x.extend_from_slice(&unknowns[..self.gauge]);
        x.push(T::one());
        x.extend_from_slice(&unknowns[self.gauge..]);
        x
    }

    /// Drops the gauge entry of a full metric vector.
    pub fn project(&self, x: &[T]) -> Vec<T> {
        x.iter()
            .enumerate()
            .filter(|&(i, _)| i != self.gauge)
            .map(|(_, v)| v.clone())
            .collect()
    }

    pub fn einstein_constant(&self, x: &[T]) -> T {
        self.components[self.gauge].eval(x) / x[self.gauge].clone()
    }

    pub fn residual(&self, x: &[T]) -> Vec<T> {
        let comps = self.components(x);
        let c = comps[self.gauge].clone() / x[self.gauge].clone();
        comps
            .into_iter()
            .zip(x)
            .enumerate()
            .filter(|&(i, _)| i != self.gauge)
            .map(|(_, (r, l))| r / l.clone() - c.clone())
            .collect()
    }

    /// Derivative of [`residual`](Self::residual) with respect to the
    /// non-gauge entries of `x`.
    pub fn jacobian(&self, x: &[T]) -> DMatrix<T>
    where
        T: 'static,
    {
        let n = self.unknowns();
        let grads: Vec<Vec<T>> = self.components.iter().map(|c| c.gradient(x)).collect();
        let comps = self.components(x);
        let g = self.gauge;
        let rows: Vec<usize> = (0..self.dim()).filter(|&i| i != g).collect();
        let mut j = DMatrix::from_element(n, n, T::zero());
        for (r, &i) in rows.iter().enumerate() {
            for (c, &k) in rows.iter().enumerate() {
                let mut v = grads[i][k].clone() / x[i].clone() - grads[g][k].clone() / x[g].clone();
                if i == k {
                    v = v - comps[i].clone() / (x[i].clone() * x[i].clone());
                }
                j[(r, c)] = v;
            }
        }
        j
    }
}

/// The Einstein system of `spec` in double precision.
pub fn generated_system(spec: &FlagSpec) -> Result<EinsteinSystem<f64>> {
    Ok(EinsteinSystem::generate(&FlagManifold::new(spec.clone())?))
}

/// `c*` with which each Ricci component matches the hand-normalized systems.
pub fn type_normalization(spec: &FlagSpec) -> BigRational {
    use crate::rootsys::LieType::*;
    let n = spec.n() as i64;
    let den = match spec.lie_type {
        A => 2 * n,
        B => 4 * (2 * n - 1),
        C => 8 * (n + 1),
        D => 4 * (n - 1),
    };
    BigRational::new(1.into(), den.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn manifold(s: &str) -> FlagManifold {
        FlagManifold::new(s.parse().unwrap()).unwrap()
    }

    fn r(v: &[i32]) -> Root {
        Root(v.to_vec())
    }

    #[test]
    fn a111_solutions() {
        let m = manifold("A:1,1,1");
        let sys = EinsteinSystem::<f64>::generate(&m);
        assert_eq!(sys.unknowns(), 2);
        let ids: Vec<_> = sys.troots().iter().map(|t| t.id()).collect();
        assert_eq!(ids, vec!["d1-d3", "d1-d2", "d2-d3"]);
        for x in [
            [2.5, 2.5, 2.5],
            [2.0, 4.0, 2.0],
            [4.0, 2.0, 2.0],
            [2.0, 2.0, 4.0],
        ] {
            assert!(sys.residual(&x).iter().all(|v| v.abs() < 1e-14), "{x:?}");
        }
        assert!(sys
            .residual(&[1.0, 3.0, 2.0])
            .iter()
            .any(|v| v.abs() > 1e-3));
    }

    #[test]
    fn a111_exact_constant() {
        let m = manifold("A:1,1,1");
        let sys = EinsteinSystem::<BigRational>::generate(&m);
        let x = vec![ratio(5, 2); 3];
        assert!(sys.residual(&x).iter().all(Zero::is_zero));
        // 2n · Ric = λ at the normal metric
        assert_eq!(sys.einstein_constant(&x) * ratio(6, 1), ratio(1, 1));
    }

    #[test]
    fn c11_components_at_unit_metric() {
        let m = manifold("C:1,1");
        let lam = MetricVector::uniform(&m, 1.0).unwrap();
        let k = 8.0 * 3.0;
        let by_id: HashMap<String, f64> = m
            .decomposition()
            .troots()
            .map(|t| (t.id(), k * ricci_component(&m, &lam, t).unwrap()))
            .collect();
        for (id, v) in [("d1-d2", 8.0), ("d1+d2", 8.0), ("2d1", 10.0), ("2d2", 10.0)] {
            assert!((by_id[id] - v).abs() < 1e-12, "{id}: {}", by_id[id]);
        }
    }

    #[test]
    fn pi_theta_of_alpha_rows() {
        // B:3,2;tail=2, α = ε_c^k − ε_d^t
        let m = manifold("B:3,2;tail=2");
        let a = r(&[1, 0, 0, -1, 0, 0, 0]);
        assert_eq!(pi_theta_of_alpha(&m, &a).unwrap().len(), 2 + 1);
        // C:3,2, α = 2ε_c^k
        let m = manifold("C:3,2");
        let a = r(&[0, 2, 0, 0, 0]);
        let set = pi_theta_of_alpha(&m, &a).unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.contains(&r(&[1, -1, 0, 0, 0])));
        assert!(set.contains(&r(&[0, -1, 1, 0, 0])));
        // D:3,2, α = ε_a^i + ε_b^i
        let m = manifold("D:3,2");
        let a = r(&[1, 1, 0, 0, 0]);
        assert_eq!(pi_theta_of_alpha(&m, &a).unwrap().len(), 2);
    }

    #[test]
    fn pi_m_of_alpha_examples() {
        let m = manifold("A:1,1,1");
        let a = r(&[1, -1, 0]);
        let set = pi_m_of_alpha(&m, &a).unwrap();
        assert_eq!(set.len(), 2);
        assert!(set.contains(&r(&[0, 1, -1])));
        assert!(set.contains(&r(&[-1, 0, 1])));

        let m = manifold("B:1,1");
        let set = pi_m_of_alpha(&m, &r(&[1, 0])).unwrap();
        assert!(set.contains(&r(&[0, 1])));
        assert!(set.contains(&r(&[-1, -1])));
    }

    #[test]
    fn theta_roots_are_rejected() {
        let m = manifold("B:2,2");
        assert!(matches!(
            pi_m_of_alpha(&m, &r(&[1, -1, 0, 0])),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            component_at(&m, &r(&[1, 1, 1, 0])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn incomplete_metric() {
        let m = manifold("A:1,1,1");
        assert!(matches!(
            MetricVector::new(&m, vec![1.0, 2.0]),
            Err(Error::IncompleteMetric(_))
        ));
        assert!(matches!(
            MetricVector::new(&m, vec![1.0, 0.0, 1.0]),
            Err(Error::NotPositive(_))
        ));
        let other = manifold("A:2,1");
        let lam = MetricVector::uniform(&other, 1.0).unwrap();
        let xi = m.summands()[0].troot.clone();
        assert!(matches!(
            ricci_component(&m, &lam, &xi),
            Err(Error::IncompleteMetric(_))
        ));
        let mut map = HashMap::new();
        map.insert(xi, 1.0);
        assert!(matches!(
            MetricVector::from_map(&m, &map),
            Err(Error::IncompleteMetric(_))
        ));
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        for s in ["B:2,1;tail=2", "C:2,1", "D:2,1;tail=4", "A:2,1,1"] {
            let m = manifold(s);
            let sys = EinsteinSystem::<f64>::generate(&m);
            let u: Vec<f64> = (0..sys.unknowns()).map(|i| 0.7 + 0.3 * i as f64).collect();
            let x = sys.embed(&u);
            let j = sys.jacobian(&x);
            for c in 0..sys.unknowns() {
                let h = 1e-6 * u[c];
                let (mut up, mut dn) = (u.clone(), u.clone());
                up[c] += h;
                dn[c] -= h;
                let fp = sys.residual(&sys.embed(&up));
                let fm = sys.residual(&sys.embed(&dn));
                for rr in 0..sys.unknowns() {
                    let fd = (fp[rr] - fm[rr]) / (2.0 * h);
                    assert!(
                        (fd - j[(rr, c)]).abs() <= 1e-5 * fd.abs().max(1.0),
                        "{s} ({rr},{c})"
                    );
                }
            }
        }
    }

    #[test]
    fn generic_over_f32() {
        let m = manifold("A:1,1,1");
        let sys = EinsteinSystem::<f32>::generate(&m);
        assert!(sys
            .residual(&[2.0, 4.0, 2.0])
            .iter()
            .all(|v| v.abs() < 1e-6));
    }
}
