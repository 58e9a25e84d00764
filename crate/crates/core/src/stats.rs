use serde::Serialize;

/// Counters reported by every solver.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolverStats {
    /// Recursive calls made.
    pub calls: u64,
    /// Deepest recursion level reached.
    pub depth: usize,
    /// Peak number of live branch states (vertex words for branching,
    /// monomials for Cut&Count) summed over the active stack.
    pub peak_states: usize,
}

impl SolverStats {
    pub fn merge(&mut self, other: &SolverStats) {
        self.calls += other.calls;
        self.depth = self.depth.max(other.depth);
        self.peak_states = self.peak_states.max(other.peak_states);
    }
}
