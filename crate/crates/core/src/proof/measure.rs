use std::fmt;
use std::str::FromStr;

use crate::dl::Axiom;

use super::Proof;

/// A proof measure computed bottom-up. `combine` must be monotone in every child value.
pub trait RecursiveMeasure {
    fn leaf_value(&self, a: &Axiom) -> u64;
    fn combine(&self, conclusion: &Axiom, children: &[u64]) -> u64;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Measure {
    #[default]
    Size,
    Depth,
    WeightedSize,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Size, Measure::Depth, Measure::WeightedSize];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Size => "size",
            Measure::Depth => "depth",
            Measure::WeightedSize => "weightedSize",
        }
    }
}

impl RecursiveMeasure for Measure {
    fn leaf_value(&self, a: &Axiom) -> u64 {
        match self {
            Measure::Size => 1,
            Measure::Depth => 0,
            Measure::WeightedSize => a.size() as u64,
        }
    }

    fn combine(&self, conclusion: &Axiom, children: &[u64]) -> u64 {
        match self {
            Measure::Size => 1 + children.iter().sum::<u64>(),
            Measure::Depth => children.iter().max().map_or(0, |m| m + 1),
            Measure::WeightedSize => conclusion.size() as u64 + children.iter().sum::<u64>(),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "size" => Ok(Measure::Size),
            "depth" => Ok(Measure::Depth),
            "weightedSize" | "weighted-size" | "weighted_size" => Ok(Measure::WeightedSize),
            other => Err(format!("unknown measure `{other}` (expected size, depth or weightedSize)")),
        }
    }
}

/// Evaluates `m` over the tree below the root.
pub fn measure_proof(p: &Proof, m: &impl RecursiveMeasure) -> u64 {
    fn go(p: &Proof, v: usize, m: &impl RecursiveMeasure) -> u64 {
        let axiom = &p.vertices[v].axiom;
        match p.step_for(v) {
            None => m.leaf_value(axiom),
            Some(s) => {
                let kids: Vec<u64> = s.premises.iter().map(|&q| go(p, q, m)).collect();
                m.combine(axiom, &kids)
            }
        }
    }
    go(p, p.root, m)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn case_split_measures() {
        let p = case_split_proof();
        assert_eq!(measure_proof(&p, &Measure::Size), 7);
        assert_eq!(measure_proof(&p, &Measure::Depth), 3);
        let single = Proof::asserted(ax("sub(A, B)"));
        assert_eq!(measure_proof(&single, &Measure::Size), 1);
        assert_eq!(measure_proof(&single, &Measure::Depth), 0);
        assert_eq!(measure_proof(&single, &Measure::WeightedSize), 3);
    }
}
