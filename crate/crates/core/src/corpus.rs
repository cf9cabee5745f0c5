//! The four worked deformations shipped with the tool.

use crate::error::Result;
use crate::parse::{parse_problem_file, DeformationProblem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
}

impl CorpusEntry {
    pub fn problem(&self) -> Result<DeformationProblem> {
        parse_problem_file(self.text)
    }
}

pub const CORPUS: [CorpusEntry; 4] = [
    CorpusEntry {
        name: "lines",
        summary: "tame; cond holds off the origin, cond2 fails at the origin",
        text: "vars = x y\nparam = t\nF = y^2*(x^2-(y-t)^2)\nwitness = 1 0\n",
    },
    CorpusEntry {
        name: "quintic",
        summary: "the Jacobian criterion holds",
        text: "vars = z1 z2 z3\nparam = t\nF = z1^5+z2^5+z1^6*z2^6*z3^2+t*z1^3*z2^3\nwitness = 0 0 1\n",
    },
    CorpusEntry {
        name: "umbrella",
        summary: "tame although cond fails",
        text: "vars = x y z\nparam = t\nF = (x^2+y^2*z)*(x-t)\nwitness = 0 0 1\n",
    },
    CorpusEntry {
        name: "cusp",
        summary: "not tame: the Milnor set contains Sing F0",
        text: "vars = x y z\nparam = t\nF = y^2+x^2*(t*z-x)\nwitness = 0 0 1\n",
    },
];

pub fn find(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses() {
        for e in &CORPUS {
            let p = e.problem().unwrap();
            assert_eq!(p.witness_points.len(), 1, "{}", e.name);
        }
        assert!(find("umbrella").is_some());
        assert!(find("nope").is_none());
    }
}
