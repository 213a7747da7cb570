//! Names of the registered spaces and radial measures.

use rectdisc_core::spaces::{
    Circle, CubeMeasure, EuclideanCube, FiniteSpace, MetricMeasureSpace, RadialMeasure, RadiiSet, Sphere, Torus,
};

use crate::error::{CliError, CliResult};

/// Largest Hamming cube the CLI builds; the distance table has `4^n` entries.
pub const MAX_HAMMING_BITS: usize = 10;

#[derive(Debug, Clone)]
pub enum AnySpace {
    Circle(Circle),
    Torus1(Torus<1>),
    Torus2(Torus<2>),
    Torus3(Torus<3>),
    Cube1(EuclideanCube<1>),
    Cube2(EuclideanCube<2>),
    Cube3(EuclideanCube<3>),
    Sphere(Sphere),
    Finite(FiniteSpace),
}

/// Runs `$rect` with `$s` bound to a rectifiable space, or `$fin` with `$f`
/// bound to a finite one.
#[macro_export]
macro_rules! with_space {
    ($space:expr, $s:ident => $rect:expr, $f:ident => $fin:expr) => {
        match $space {
            $crate::registry::AnySpace::Circle($s) => $rect,
            $crate::registry::AnySpace::Torus1($s) => $rect,
            $crate::registry::AnySpace::Torus2($s) => $rect,
            $crate::registry::AnySpace::Torus3($s) => $rect,
            $crate::registry::AnySpace::Cube1($s) => $rect,
            $crate::registry::AnySpace::Cube2($s) => $rect,
            $crate::registry::AnySpace::Cube3($s) => $rect,
            $crate::registry::AnySpace::Sphere($s) => $rect,
            $crate::registry::AnySpace::Finite($f) => $fin,
        }
    };
}

/// The continuous spaces in listing order.
pub const CONTINUOUS_NAMES: [&str; 8] = ["circle", "torus1", "torus2", "torus3", "cube1", "cube2", "cube3", "sphere"];

pub fn parse_space(name: &str, density: Option<&str>) -> CliResult<AnySpace> {
    let cube_only = |ok: bool| {
        if ok || density.is_none_or(|d| d == "uniform") {
            Ok(())
        } else {
            Err(CliError::config(format!("--density applies to cube spaces only, not {name}")))
        }
    };
    let space = match name {
        "circle" => AnySpace::Circle(Circle),
        "torus1" => AnySpace::Torus1(Torus::new()),
        "torus2" => AnySpace::Torus2(Torus::new()),
        "torus3" => AnySpace::Torus3(Torus::new()),
        "cube1" => AnySpace::Cube1(EuclideanCube::with_measure(parse_density(1, density)?)?),
        "cube2" => AnySpace::Cube2(EuclideanCube::with_measure(parse_density(2, density)?)?),
        "cube3" => AnySpace::Cube3(EuclideanCube::with_measure(parse_density(3, density)?)?),
        "sphere" => AnySpace::Sphere(Sphere::new()),
        _ => {
            let bits = name
                .strip_prefix("hamming")
                .and_then(|b| b.parse::<usize>().ok())
                .filter(|b| (1..=MAX_HAMMING_BITS).contains(b))
                .ok_or_else(|| {
                    CliError::config(format!(
                        "unknown space {name:?}; expected one of {}, hamming1..hamming{MAX_HAMMING_BITS}",
                        CONTINUOUS_NAMES.join(", ")
                    ))
                })?;
            AnySpace::Finite(FiniteSpace::hamming(bits)?)
        }
    };
    cube_only(matches!(space, AnySpace::Cube1(_) | AnySpace::Cube2(_) | AnySpace::Cube3(_)))?;
    Ok(space)
}

fn parse_density(d: usize, spec: Option<&str>) -> CliResult<CubeMeasure> {
    match spec.unwrap_or("uniform") {
        "uniform" => Ok(CubeMeasure::uniform(d)),
        "product-4z1z2" if d == 2 => Ok(CubeMeasure::power_product(2, 1.0)),
        "product-4z1z2" => Err(CliError::config("product-4z1z2 is a density on the square; use power:1")),
        other => {
            let p = other
                .strip_prefix("power:")
                .and_then(|p| p.parse::<f64>().ok())
                .filter(|p| p.is_finite() && *p >= 0.0)
                .ok_or_else(|| CliError::config(format!("unknown density {other:?}")))?;
            Ok(CubeMeasure::power_product(d, p))
        }
    }
}

/// Parses a radial measure for `space`. On finite spaces `uniform` means
/// unit atoms on every attained distance.
pub fn parse_xi<S: MetricMeasureSpace>(spec: &str, space: &S) -> CliResult<RadialMeasure> {
    let radii = space.radii();
    let finite = matches!(radii, RadiiSet::Finite(_));
    let diameter = space.diameter();
    let num = |s: &str| {
        s.parse::<f64>().map_err(|_| CliError::config(format!("bad number {s:?} in radial measure {spec:?}")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let xi = match parts.as_slice() {
        ["uniform"] if finite => RadialMeasure::uniform_atomic(&radii)?,
        ["uniform"] => RadialMeasure::lebesgue(diameter)?,
        ["uniform-atomic"] => RadialMeasure::uniform_atomic(&radii)?,
        ["uniform", a, b] => RadialMeasure::uniform_on(num(a)?, num(b)?, diameter)?,
        ["atom", r] => RadialMeasure::single_atom(num(r)?, 1.0, &radii)?,
        _ => {
            return Err(CliError::config(format!(
                "unknown radial measure {spec:?}; expected uniform, uniform:<a>:<b>, uniform-atomic or atom:<r>"
            )))
        }
    };
    Ok(xi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_measure_specs() {
        let xi = parse_xi("uniform", &Circle).unwrap();
        assert_eq!((xi.label(), xi.c0()), ("uniform", Some(1.0)));
        assert!((parse_xi("uniform:0.1:0.3", &Circle).unwrap().total_mass() - 0.2).abs() < 1e-15);
        let h = FiniteSpace::hamming(3).unwrap();
        assert_eq!(parse_xi("uniform", &h).unwrap().label(), "uniform-atomic");
        assert_eq!(parse_xi("atom:2", &h).unwrap().atoms().len(), 1);
        assert_eq!(parse_xi("atom:0.5", &h).unwrap().c0(), None);
        assert!(parse_xi("atom:9", &h).is_err());
        assert!(parse_xi("uniform-atomic", &Circle).is_err());
        assert!(parse_xi("uniform:a:b", &Circle).is_err());
    }

    #[test]
    fn space_names_and_densities() {
        assert!(matches!(parse_space("hamming5", None).unwrap(), AnySpace::Finite(_)));
        assert!(parse_space("hamming0", None).is_err());
        assert!(parse_space("hamming11", None).is_err());
        assert!(parse_space("torus2", Some("power:2")).is_err());
        assert!(parse_space("cube3", Some("product-4z1z2")).is_err());
        let AnySpace::Cube2(c) = parse_space("cube2", Some("product-4z1z2")).unwrap() else { panic!() };
        assert!((c.measure().density(&[0.5, 0.5]) - 1.0).abs() < 1e-12);
    }
}
