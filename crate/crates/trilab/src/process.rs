//! Drives the packing process from K_n down to a triangle-free graph.

use crate::graph::{DynamicGraph, GraphError, Triangle};
use crate::index::TriangleIndex;
use crate::rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Full state of one run: the graph after `i` removals, its sampling
/// index, and the process random stream.
pub struct ProcessState {
    graph: DynamicGraph,
    index: TriangleIndex,
    i: usize,
    seed: u64,
    rng: ChaCha8Rng,
}

/// Terminal statistics of one run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RunSummary {
    pub n: usize,
    pub seed: u64,
    /// Number of triangles removed before reaching a triangle-free graph.
    pub m: usize,
    /// Edges left at termination; always `n(n-1)/2 - 3m`.
    pub final_edges: usize,
    pub wall_ms: u64,
}

/// When to invoke the checkpoint hook: every time the density parameter
/// `p = 1 - 6i/n²` crosses a grid value `1, 1-Δp, 1-2Δp, …`, plus once at
/// the start and once at termination.
#[derive(Debug, Clone, Copy)]
pub struct CheckpointPolicy {
    dp: Option<f64>,
}

impl CheckpointPolicy {
    pub fn every(dp: f64) -> Self {
        assert!(dp > 0.0 && dp < 1.0, "checkpoint spacing must lie in (0, 1)");
        CheckpointPolicy { dp: Some(dp) }
    }

    pub fn none() -> Self {
        CheckpointPolicy { dp: None }
    }
}

impl ProcessState {
    /// Fresh state at `i = 0`, i.e. the complete graph.
    pub fn new(n: usize, seed: u64) -> Result<Self, GraphError> {
        let graph = DynamicGraph::new_complete(n)?;
        let index = TriangleIndex::build(&graph);
        Ok(ProcessState { graph, index, i: 0, seed, rng: rng::process_stream(seed) })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of removals performed so far.
    pub fn steps(&self) -> usize {
        self.i
    }

    /// Density parameter `p = 1 - 6i/n²` at the current step.
    pub fn p(&self) -> f64 {
        crate::analytics::p_of(self.i, self.graph.n())
    }

    pub fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    pub fn index(&self) -> &TriangleIndex {
        &self.index
    }

    /// Samples one uniform surviving triangle and removes its edges.
    /// Returns `None` (leaving the state untouched) once triangle-free.
    pub fn step(&mut self) -> Option<Triangle> {
        let t = self.index.sample_uniform_triangle(&self.graph, &mut self.rng)?;
        self.index.apply_removal(&mut self.graph, t);
        self.i += 1;
        Some(t)
    }

    /// Runs to termination, invoking `hook` per checkpoint policy with a
    /// read-only view of the state.
    pub fn run_to_completion(
        &mut self,
        policy: CheckpointPolicy,
        mut hook: impl FnMut(&ProcessState),
    ) -> RunSummary {
        let started = Instant::now();
        let n = self.graph.n();
        let mut next_grid = match policy.dp {
            // The p-grid starts at 1.0, which i = 0 sits on exactly.
            Some(_) if self.i == 0 => {
                hook(self);
                policy.dp.map(|dp| 1.0 - dp)
            }
            Some(dp) => Some(1.0 - (((1.0 - self.p()) / dp) + 1e-9).floor() * dp - dp),
            None => None,
        };
        let mut emitted_at = if self.i == 0 && policy.dp.is_some() { Some(0) } else { None };
        while self.step().is_some() {
            if let Some(grid) = next_grid {
                let p = crate::analytics::p_of(self.i, n);
                if p <= grid + 1e-12 {
                    hook(self);
                    emitted_at = Some(self.i);
                    // Skip any further grid values this step jumped over.
                    let crossed = ((1.0 - p) / policy.dp.unwrap() + 1e-9).floor();
                    next_grid = Some(1.0 - (crossed + 1.0) * policy.dp.unwrap());
                }
            }
        }
        if policy.dp.is_some() && emitted_at != Some(self.i) {
            // Terminal snapshot of the triangle-free graph.
            hook(self);
        }
        let m = self.i;
        RunSummary {
            n,
            seed: self.seed,
            m,
            final_edges: self.graph.edge_count(),
            wall_ms: started.elapsed().as_millis() as u64,
        }
    }
}
