//! Finite posets given by cover relations, with DOT and JSON export.

use std::collections::VecDeque;
use std::fmt::Write;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Poset {
    pub elements: Vec<String>,
    /// `(i, j)` means `elements[i] ⋖ elements[j]`.
    pub covers: Vec<[usize; 2]>,
}

impl Poset {
    pub fn new(elements: Vec<String>, mut covers: Vec<[usize; 2]>) -> Self {
        covers.sort_unstable();
        covers.dedup();
        Poset { elements, covers }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        let mut has_lower = vec![false; self.len()];
        for &[_, j] in &self.covers {
            has_lower[j] = true;
        }
        (0..self.len()).filter(|&i| !has_lower[i]).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        let mut has_upper = vec![false; self.len()];
        for &[i, _] in &self.covers {
            has_upper[i] = true;
        }
        (0..self.len()).filter(|&i| !has_upper[i]).collect()
    }

    /// Graded with respect to `rank`: every cover raises it by exactly one.
    pub fn is_graded_by(&self, rank: &[usize]) -> bool {
        self.covers.iter().all(|&[i, j]| rank[j] == rank[i] + 1)
    }

    /// `a ≤ b` in the transitive closure of the covers.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([a]);
        seen[a] = true;
        while let Some(x) = queue.pop_front() {
            for &[i, j] in &self.covers {
                if i == x && !seen[j] {
                    if j == b {
                        return true;
                    }
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        false
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        writeln!(out, "digraph \"{name}\" {{").unwrap();
        writeln!(out, "  rankdir=BT;").unwrap();
        for (i, label) in self.elements.iter().enumerate() {
            writeln!(out, "  n{i} [label=\"{}\"];", label.replace('"', "\\\"")).unwrap();
        }
        for &[i, j] in &self.covers {
            writeln!(out, "  n{i} -> n{j};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}
