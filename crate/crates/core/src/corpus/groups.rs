use crate::error::{Error, Result};
use crate::numeric::{c64, ComplexMatrix, ToleranceConfig};
use crate::semigroup::{canonical_cmp, closure, GeneratorInput};

/// A finite group of `k×k` unitaries, listed exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroup {
    pub name: String,
    pub k: usize,
    pub generators: Vec<ComplexMatrix>,
    /// All elements, canonical order.
    pub elements: Vec<ComplexMatrix>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

pub const GROUP_NAMES: &[&str] = &["trivial", "c2", "c3", "c4", "c6", "c8", "dihedral8", "quaternion8"];

/// Phases `e^{2πip/q}`, with the quarter turns written exactly.
fn root_of_unity(p: usize, q: usize) -> ComplexMatrix {
    let z = match (4 * p) % (4 * q) {
        0 => c64(1.0, 0.0),
        r if r == q => c64(0.0, 1.0),
        r if r == 2 * q => c64(-1.0, 0.0),
        r if r == 3 * q => c64(0.0, -1.0),
        _ => c64(0.0, std::f64::consts::TAU * p as f64 / q as f64).exp(),
    };
    ComplexMatrix::diag(&[z])
}

/// Looks a group up by name: `trivial`, cyclic phase groups `c2 … c8`, the
/// signed 2×2 permutations (`dihedral8`) and the quaternion group
/// (`quaternion8`).
pub fn finite_group(name: &str) -> Result<FiniteGroup> {
    let cyclic_order = match name {
        "trivial" => Some(1),
        "c2" => Some(2),
        "c3" => Some(3),
        "c4" => Some(4),
        "c6" => Some(6),
        "c8" => Some(8),
        _ => None,
    };
    let cfg = ToleranceConfig::exact().with_cap(64);
    if let Some(q) = cyclic_order {
        let mut elements: Vec<ComplexMatrix> = (0..q).map(|p| root_of_unity(p, q)).collect();
        elements.sort_by(|a, b| canonical_cmp(a, b, cfg.eq_tol));
        return Ok(FiniteGroup {
            name: name.to_string(),
            k: 1,
            generators: vec![root_of_unity(1 % q, q)],
            elements,
        });
    }
    let generators = match name {
        "dihedral8" => vec![
            ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]),
            ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]),
        ],
        "quaternion8" => vec![
            ComplexMatrix::diag(&[c64(0.0, 1.0), c64(0.0, -1.0)]),
            ComplexMatrix::from_real(&[&[0.0, 1.0], &[-1.0, 0.0]]),
        ],
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown group {other:?}; expected one of {}",
                GROUP_NAMES.join(", ")
            )))
        }
    };
    let s = closure(&GeneratorInput::new(name, generators.clone())?, &cfg)?;
    debug_assert!(s.saturated());
    Ok(FiniteGroup {
        name: name.to_string(),
        k: generators[0].rows(),
        generators,
        elements: s.elements().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let expect = [1, 2, 3, 4, 6, 8, 8, 8];
        for (name, order) in GROUP_NAMES.iter().zip(expect) {
            let g = finite_group(name).unwrap();
            assert_eq!(g.order(), order, "{name}");
            assert!(g.elements.contains(&ComplexMatrix::identity(g.k)), "{name}");
        }
        assert!(finite_group("klein").is_err());
    }
}
