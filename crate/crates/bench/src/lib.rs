//! Synthetic problems for the benchmarks.

use maua_core::{Attribute, CurveSpec, DecisionProblem, Direction, OptionRecord};

/// A valid additive problem with `options × attributes` raw values spread
/// over each attribute's range. Curves cycle through the supported shapes.
pub fn synthetic(options: usize, attributes: usize) -> DecisionProblem {
    let mut problem = DecisionProblem::new(format!("synthetic {options}x{attributes}"));
    let curves = [
        CurveSpec::Linear,
        CurveSpec::concave(),
        CurveSpec::convex(),
        CurveSpec::SShape,
    ];
    problem.attributes = (0..attributes)
        .map(|i| {
            let direction = if i % 3 == 0 {
                Direction::LowerBetter
            } else {
                Direction::HigherBetter
            };
            let name = format!("a{i}");
            let importance = 1.0 + (i * 7 % 10) as f64;
            Attribute::derived(
                name,
                importance,
                direction,
                0.0,
                1000.0,
                curves[i % curves.len()],
            )
        })
        .collect();
    problem.options = (0..options)
        .map(|j| {
            let values =
                (0..attributes).map(|i| (format!("a{i}"), ((j * 37 + i * 101) % 1001) as f64));
            OptionRecord::single(format!("o{j}"), values)
        })
        .collect();
    problem
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_problems_are_valid() {
        for (n, m) in [(1, 1), (3, 4), (50, 12)] {
            let p = synthetic(n, m);
            assert!(maua_core::validate_problem(&p).ok, "{n}x{m}");
        }
    }
}
