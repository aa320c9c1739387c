use crate::error::SystemError;
use crate::scenario::Scenario;
use crate::system::System;

/// Number of local deterministic strategies Π_i |X_i|^{|U_i|}.
pub fn vertex_count(scenario: &Scenario) -> u128 {
    scenario
        .input_sizes()
        .iter()
        .zip(scenario.output_sizes())
        .map(|(&u, &x)| (x as u128).pow(u as u32))
        .product()
}

/// Decode party i's strategy index into its response function:
/// `f(u) = (s / |X|^(|U|−1−u)) mod |X|` — input 0 in the most significant
/// digit, so strategy 0 answers 0 everywhere.
fn strategy_output(strategy: u128, input: usize, n_inputs: usize, n_outputs: usize) -> usize {
    let place = (n_outputs as u128).pow((n_inputs - 1 - input) as u32);
    ((strategy / place) % n_outputs as u128) as usize
}

fn split_strategies(scenario: &Scenario, mut j: u128) -> Vec<u128> {
    // party 0 is the slowest digit of the joint vertex index
    let n = scenario.parties();
    let mut per_party = vec![0u128; n];
    for i in (0..n).rev() {
        let count = (scenario.output_sizes()[i] as u128).pow(scenario.input_sizes()[i] as u32);
        per_party[i] = j % count;
        j /= count;
    }
    per_party
}

/// The table cells where vertex `j` puts probability 1: one cell per
/// joint input, at the outputs the per-party response functions dictate.
/// Cells are pushed in joint-input order. Reuses `out`'s allocation.
pub fn vertex_cells(scenario: &Scenario, j: u128, out: &mut Vec<usize>) {
    out.clear();
    let per_party = split_strategies(scenario, j);
    let n = scenario.parties();
    let mut outputs = vec![0usize; n];
    scenario.for_each_input(|inputs| {
        for i in 0..n {
            outputs[i] = strategy_output(
                per_party[i],
                inputs[i],
                scenario.input_sizes()[i],
                scenario.output_sizes()[i],
            );
        }
        out.push(scenario.index(inputs, &outputs));
    });
}

/// The deterministic system for explicit per-party response functions
/// (`strategies[i][u]` = party i's output on input u).
pub fn deterministic_system(
    scenario: &Scenario,
    strategies: &[Vec<usize>],
) -> Result<System, SystemError> {
    let n = scenario.parties();
    if strategies.len() != n {
        return Err(scenario.shape_error("one response function per party"));
    }
    for (i, f) in strategies.iter().enumerate() {
        if f.len() != scenario.input_sizes()[i] {
            return Err(scenario.shape_error("response defined on the full input alphabet"));
        }
        if f.iter().any(|&x| x >= scenario.output_sizes()[i]) {
            return Err(SystemError::Domain {
                name: "response output",
                value: *f.iter().max().unwrap() as f64,
                range: "within the party's output alphabet",
            });
        }
    }
    let mut table = vec![0.0; scenario.cells() as usize];
    let mut outputs = vec![0usize; n];
    scenario.for_each_input(|inputs| {
        for i in 0..n {
            outputs[i] = strategies[i][inputs[i]];
        }
        table[scenario.index(inputs, &outputs)] = 1.0;
    });
    Ok(System::new_unchecked(scenario.clone(), table))
}

/// Iterator over all local deterministic vertices of a scenario, in
/// vertex-index order (party 0's strategy slowest). Errs at construction
/// if the vertex count exceeds `cap`.
pub fn local_deterministic_vertices(
    scenario: &Scenario,
    cap: usize,
) -> Result<VertexIter, SystemError> {
    let count = vertex_count(scenario);
    if count > cap as u128 {
        return Err(SystemError::VertexCapExceeded { count, cap });
    }
    Ok(VertexIter {
        scenario: scenario.clone(),
        next: 0,
        count,
        cells: Vec::new(),
    })
}

pub struct VertexIter {
    scenario: Scenario,
    next: u128,
    count: u128,
    cells: Vec<usize>,
}

impl Iterator for VertexIter {
    type Item = System;

    fn next(&mut self) -> Option<System> {
        if self.next >= self.count {
            return None;
        }
        vertex_cells(&self.scenario, self.next, &mut self.cells);
        let mut table = vec![0.0; self.scenario.cells() as usize];
        for &c in &self.cells {
            table[c] = 1.0;
        }
        self.next += 1;
        Some(System::new_unchecked(self.scenario.clone(), table))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.count - self.next) as usize;
        (left, Some(left))
    }
}
