//! Finite measures `ξ` on the set of radii and their tail functions
//! `σ(r) = ξ([r, L])`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

use super::RadiiSet;
use crate::error::check_range;
use crate::{Error, Rational, Result};

/// One atom of an atomic radial measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub radius: f64,
    pub weight: f64,
    pub exact_radius: Rational,
    pub exact_weight: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RadialKind {
    /// Piecewise-constant density: `values[i]` on `[knots[i], knots[i+1])`.
    Density { knots: Vec<f64>, values: Vec<f64> },
    /// Finitely many atoms, sorted by radius.
    Atomic { atoms: Vec<Atom> },
}

/// A finite non-negative measure `ξ` on `[0, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialMeasure {
    kind: RadialKind,
    diameter: f64,
    c0: Option<f64>,
    label: String,
}

fn rational_from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::argument(format!("non-finite value {x}")))
}

impl RadialMeasure {
    /// Lebesgue measure on `[0, L]`: `σ(r) = L − r`, `c₀ = 1`.
    pub fn lebesgue(diameter: f64) -> Result<Self> {
        Self::uniform_on(0.0, diameter, diameter)
    }

    /// Lebesgue measure restricted to `[lo, hi] ⊆ [0, L]`.
    pub fn uniform_on(lo: f64, hi: f64, diameter: f64) -> Result<Self> {
        let mut m = Self::piecewise_density(alloc::vec![lo, hi], alloc::vec![1.0], diameter)?;
        m.label = if lo == 0.0 && hi == diameter {
            String::from("uniform")
        } else {
            format!("uniform[{lo},{hi}]")
        };
        Ok(m)
    }

    /// Piecewise-constant density with `c₀ = max density`.
    pub fn piecewise_density(knots: Vec<f64>, values: Vec<f64>, diameter: f64) -> Result<Self> {
        if knots.len() != values.len() + 1 || values.is_empty() {
            return Err(Error::argument("density needs one more knot than values"));
        }
        if !(diameter >= 0.0) {
            return Err(Error::argument("diameter must be non-negative"));
        }
        for w in knots.windows(2) {
            if !(w[1] >= w[0]) {
                return Err(Error::argument("density knots must be sorted"));
            }
        }
        check_range("density knot", knots[0], 0.0, diameter)?;
        check_range("density knot", knots[knots.len() - 1], 0.0, diameter)?;
        if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::argument("density values must be finite and non-negative"));
        }
        let max = values.iter().cloned().fold(0.0, f64::max);
        Ok(RadialMeasure {
            kind: RadialKind::Density { knots, values },
            diameter,
            c0: (max > 0.0).then_some(max),
            label: String::from("density"),
        })
    }

    /// Atomic measure from `(radius, weight)` pairs.
    ///
    /// When the radii set is finite and every atom sits on it, `c₀` is the
    /// smallest constant with `ξ([a,b)) ≤ c₀(b − a)` for `a < b` in `T`;
    /// otherwise `c₀` is absent.
    pub fn atomic(atoms: Vec<(Rational, Rational)>, radii: &RadiiSet) -> Result<Self> {
        let diameter = radii.diameter();
        let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
        for (r, w) in atoms {
            if w.is_negative() {
                return Err(Error::argument("atom weights must be non-negative"));
            }
            let radius = r.to_f64().unwrap_or(f64::NAN);
            check_range("atom radius", radius, 0.0, diameter)?;
            let weight = w.to_f64().unwrap_or(f64::NAN);
            out.push(Atom { radius, weight, exact_radius: r, exact_weight: w });
        }
        out.sort_by(|a, b| a.exact_radius.cmp(&b.exact_radius));
        let mut m = RadialMeasure {
            kind: RadialKind::Atomic { atoms: out },
            diameter,
            c0: None,
            label: String::from("atomic"),
        };
        if let RadiiSet::Finite(t) = radii {
            let on_grid = m.atoms().iter().all(|a| t.contains(&a.radius));
            if on_grid {
                let mut best: f64 = 0.0;
                for (i, &a) in t.iter().enumerate() {
                    for &b in &t[i + 1..] {
                        best = best.max(m.mass_between(a, b) / (b - a));
                    }
                }
                m.c0 = (best > 0.0).then_some(best);
            }
        }
        Ok(m)
    }

    /// Unit atoms on every radius of a finite radii set.
    pub fn uniform_atomic(radii: &RadiiSet) -> Result<Self> {
        let RadiiSet::Finite(t) = radii else {
            return Err(Error::unsupported("uniform atomic measure needs a finite radii set"));
        };
        let atoms = t
            .iter()
            .map(|&r| Ok((rational_from_f64(r)?, Rational::from_integer(1.into()))))
            .collect::<Result<Vec<_>>>()?;
        let mut m = Self::atomic(atoms, radii)?;
        m.label = String::from("uniform-atomic");
        Ok(m)
    }

    /// A single atom of the given weight.
    pub fn single_atom(radius: f64, weight: f64, radii: &RadiiSet) -> Result<Self> {
        let mut m = Self::atomic(alloc::vec![(rational_from_f64(radius)?, rational_from_f64(weight)?)], radii)?;
        m.label = format!("atom[{radius}]");
        Ok(m)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> &RadialKind {
        &self.kind
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Lipschitz bound `c₀(ξ)`, present iff it is known to hold.
    pub fn c0(&self) -> Option<f64> {
        self.c0
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self.kind, RadialKind::Atomic { .. })
    }

    pub fn atoms(&self) -> &[Atom] {
        match &self.kind {
            RadialKind::Atomic { atoms } => atoms,
            RadialKind::Density { .. } => &[],
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.sigma_unchecked(0.0)
    }

    /// `σ(r) = ξ([r, L])`.
    pub fn sigma(&self, r: f64) -> Result<f64> {
        check_range("radius", r, 0.0, self.diameter)?;
        Ok(self.sigma_unchecked(r))
    }

    pub(crate) fn sigma_unchecked(&self, r: f64) -> f64 {
        match &self.kind {
            RadialKind::Density { knots, values } => {
                let mut acc = 0.0;
                for (i, v) in values.iter().enumerate() {
                    let (a, b) = (knots[i].max(r), knots[i + 1]);
                    if b > a {
                        acc += v * (b - a);
                    }
                }
                acc
            }
            RadialKind::Atomic { atoms } => atoms.iter().filter(|a| a.radius >= r).map(|a| a.weight).sum(),
        }
    }

    /// Exact `σ(r)` for atomic measures.
    pub fn sigma_exact(&self, r: &Rational) -> Option<Rational> {
        match &self.kind {
            RadialKind::Atomic { atoms } => Some(
                atoms
                    .iter()
                    .filter(|a| &a.exact_radius >= r)
                    .fold(Rational::zero(), |acc, a| acc + &a.exact_weight),
            ),
            RadialKind::Density { .. } => None,
        }
    }

    /// `ξ([a, b)) = σ(a) − σ(b)` for `a ≤ b`.
    pub fn mass_between(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        self.sigma_unchecked(a) - self.sigma_unchecked(b)
    }

    /// Density value at `r` (zero for atomic measures).
    pub fn density_at(&self, r: f64) -> f64 {
        match &self.kind {
            RadialKind::Density { knots, values } => {
                for (i, v) in values.iter().enumerate() {
                    if r >= knots[i] && r < knots[i + 1] {
                        return *v;
                    }
                }
                0.0
            }
            RadialKind::Atomic { .. } => 0.0,
        }
    }

    /// Knots of the density or radii of the atoms.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            RadialKind::Density { knots, .. } => knots.clone(),
            RadialKind::Atomic { atoms } => atoms.iter().map(|a| a.radius).collect(),
        }
    }

    /// Draws a radius from `ξ / ξ(T)`.
    pub fn sample_radius<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let total = self.total_mass();
        let mut u = rng.random::<f64>() * total;
        match &self.kind {
            RadialKind::Density { knots, values } => {
                for (i, v) in values.iter().enumerate() {
                    let m = v * (knots[i + 1] - knots[i]);
                    if u < m && m > 0.0 {
                        return knots[i] + u / v;
                    }
                    u -= m;
                }
                knots[knots.len() - 1]
            }
            RadialKind::Atomic { atoms } => {
                for a in atoms {
                    if u < a.weight {
                        return a.radius;
                    }
                    u -= a.weight;
                }
                atoms.last().map(|a| a.radius).unwrap_or(0.0)
            }
        }
    }

    /// `∫ g dξ` by adaptive Gauss–Kronrod on each density piece, split
    /// further at `extra`. Returns `(value, error estimate)`.
    pub fn integrate_adaptive<F: FnMut(f64) -> f64>(&self, mut g: F, extra: &[f64], rel_tol: f64) -> (f64, f64) {
        match &self.kind {
            RadialKind::Atomic { .. } => (self.integrate_piecewise(g, &[]), 0.0),
            RadialKind::Density { knots, values } => {
                let mut acc = crate::numeric::NeumaierSum::new();
                let mut err = 0.0;
                for (i, v) in values.iter().enumerate() {
                    if *v == 0.0 {
                        continue;
                    }
                    let (a, b) = (knots[i], knots[i + 1]);
                    let mut pts: Vec<f64> = extra.iter().cloned().filter(|&x| x > a && x < b).collect();
                    pts.push(a);
                    pts.push(b);
                    pts.sort_by(|x, y| x.total_cmp(y));
                    pts.dedup();
                    for w in pts.windows(2) {
                        let q = crate::numeric::adaptive_gk15(&mut g, w[0], w[1], 1e-15, rel_tol);
                        acc.add(v * q.value);
                        err += v * q.error;
                    }
                }
                (acc.value(), err)
            }
        }
    }

    /// `∫ g dξ` when it can be done without sampling: atomic sums, or
    /// Gauss–Legendre on each density piece split further at `extra`.
    ///
    /// Exact when `g` is a polynomial of degree ≤ 9 between consecutive
    /// breakpoints.
    pub fn integrate_piecewise<F: FnMut(f64) -> f64>(&self, mut g: F, extra: &[f64]) -> f64 {
        match &self.kind {
            RadialKind::Atomic { atoms } => {
                let mut acc = crate::numeric::NeumaierSum::new();
                for a in atoms {
                    acc.add(a.weight * g(a.radius));
                }
                acc.value()
            }
            RadialKind::Density { knots, values } => {
                let mut acc = crate::numeric::NeumaierSum::new();
                for (i, v) in values.iter().enumerate() {
                    if *v == 0.0 {
                        continue;
                    }
                    let (a, b) = (knots[i], knots[i + 1]);
                    let mut pts: Vec<f64> = extra.iter().cloned().filter(|&x| x > a && x < b).collect();
                    pts.push(a);
                    pts.push(b);
                    pts.sort_by(|x, y| x.total_cmp(y));
                    pts.dedup();
                    acc.add(v * crate::numeric::gauss_legendre_pieces(&mut g, &pts));
                }
                acc.value()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn uniform_tail() {
        let xi = RadialMeasure::lebesgue(0.5).unwrap();
        assert_eq!(xi.sigma(0.5).unwrap(), 0.0);
        assert_eq!(xi.sigma(0.0).unwrap(), 0.5);
        assert!((xi.sigma(0.2).unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(xi.c0(), Some(1.0));
        assert!(xi.sigma(0.6).is_err());
        assert!(xi.sigma(-0.1).is_err());
    }

    #[test]
    fn atomic_tail_and_c0() {
        let t = RadiiSet::Finite(vec![0.0, 1.0, 2.0]);
        let xi = RadialMeasure::uniform_atomic(&t).unwrap();
        assert_eq!(xi.sigma(1.0).unwrap(), 2.0);
        assert_eq!(xi.sigma(0.0).unwrap(), 3.0);
        assert_eq!(xi.sigma(2.0).unwrap(), 1.0);
        assert_eq!(xi.c0(), Some(1.0));
        assert_eq!(xi.sigma_exact(&q(1)), Some(q(2)));
    }

    #[test]
    fn atoms_off_a_continuous_radii_set_have_no_c0() {
        let t = RadiiSet::Interval { max: 1.0 };
        let xi = RadialMeasure::single_atom(1.0, 1.0, &t).unwrap();
        assert_eq!(xi.c0(), None);
        assert_eq!(xi.sigma(1.0).unwrap(), 1.0);
        assert_eq!(xi.sigma(0.999).unwrap(), 1.0);
    }

    #[test]
    fn piecewise_integration_is_exact_for_polynomials() {
        let xi = RadialMeasure::piecewise_density(vec![0.0, 0.5, 1.0], vec![1.0, 3.0], 1.0).unwrap();
        let v = xi.integrate_piecewise(|r| r * r, &[0.25]);
        let exact = 0.125 / 3.0 + 3.0 * (1.0 - 0.125) / 3.0;
        assert!((v - exact).abs() < 1e-15);
        assert_eq!(xi.c0(), Some(3.0));
    }
}
