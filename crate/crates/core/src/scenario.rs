use crate::error::SystemError;

/// Shape of a multi-party input/output experiment: how many parties there
/// are and how many inputs/outputs each local device accepts/produces.
///
/// Tables over a scenario use one fixed flattening convention throughout:
/// per party a `(input, output)` digit pair, parties in order with party 0
/// slowest, and the last party's output as the fastest digit:
///
/// ```text
/// index = (((u₁·|X₁| + x₁)·|U₂| + u₂)·|X₂| + x₂)·…
/// ```
///
/// For two binary parties this is `index = 8u + 4x + 2v + y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scenario {
    input_sizes: Vec<usize>,
    output_sizes: Vec<usize>,
}

impl Scenario {
    pub fn new(input_sizes: Vec<usize>, output_sizes: Vec<usize>) -> Result<Self, SystemError> {
        if input_sizes.is_empty() {
            return Err(SystemError::InvalidScenario(
                "at least one party required".into(),
            ));
        }
        if input_sizes.len() != output_sizes.len() {
            return Err(SystemError::InvalidScenario(format!(
                "{} input sizes vs {} output sizes",
                input_sizes.len(),
                output_sizes.len()
            )));
        }
        if input_sizes.iter().chain(&output_sizes).any(|&s| s == 0) {
            return Err(SystemError::InvalidScenario(
                "every alphabet must have at least one symbol".into(),
            ));
        }
        Ok(Scenario {
            input_sizes,
            output_sizes,
        })
    }

    /// Two parties, one bit in, one bit out each.
    pub fn bipartite_binary() -> Self {
        Scenario {
            input_sizes: vec![2, 2],
            output_sizes: vec![2, 2],
        }
    }

    /// Two parties with `m`-valued inputs and binary outputs (chained-test
    /// shape).
    pub fn bipartite_binary_outputs(m: usize) -> Result<Self, SystemError> {
        Scenario::new(vec![m, m], vec![2, 2])
    }

    pub fn parties(&self) -> usize {
        self.input_sizes.len()
    }

    pub fn input_sizes(&self) -> &[usize] {
        &self.input_sizes
    }

    pub fn output_sizes(&self) -> &[usize] {
        &self.output_sizes
    }

    /// Total number of table cells, exact in `u128` so oversized scenarios
    /// can still be described (and rejected) without overflow.
    pub fn cells(&self) -> u128 {
        self.input_sizes
            .iter()
            .chain(&self.output_sizes)
            .map(|&s| s as u128)
            .product()
    }

    /// Number of joint inputs Π|Uᵢ|.
    pub fn joint_inputs(&self) -> usize {
        self.input_sizes.iter().product()
    }

    /// Number of joint outputs Π|Xᵢ|.
    pub fn joint_outputs(&self) -> usize {
        self.output_sizes.iter().product()
    }

    pub fn is_bipartite_binary(&self) -> bool {
        self.input_sizes == [2, 2] && self.output_sizes == [2, 2]
    }

    fn shape_string(&self) -> String {
        format!(
            "inputs {:?} / outputs {:?}",
            self.input_sizes, self.output_sizes
        )
    }

    pub(crate) fn shape_error(&self, expected: &'static str) -> SystemError {
        SystemError::ShapeMismatch {
            expected,
            got: self.shape_string(),
        }
    }

    /// Flattened cell index for the given per-party inputs and outputs.
    pub fn index(&self, inputs: &[usize], outputs: &[usize]) -> usize {
        debug_assert_eq!(inputs.len(), self.parties());
        debug_assert_eq!(outputs.len(), self.parties());
        let mut idx = 0usize;
        for i in 0..self.parties() {
            debug_assert!(inputs[i] < self.input_sizes[i]);
            debug_assert!(outputs[i] < self.output_sizes[i]);
            idx = (idx * self.input_sizes[i] + inputs[i]) * self.output_sizes[i] + outputs[i];
        }
        idx
    }

    /// Inverse of [`Scenario::index`].
    pub fn unflatten(&self, mut idx: usize) -> (Vec<usize>, Vec<usize>) {
        let n = self.parties();
        let mut inputs = vec![0usize; n];
        let mut outputs = vec![0usize; n];
        for i in (0..n).rev() {
            outputs[i] = idx % self.output_sizes[i];
            idx /= self.output_sizes[i];
            inputs[i] = idx % self.input_sizes[i];
            idx /= self.input_sizes[i];
        }
        (inputs, outputs)
    }

    /// Visit every `(inputs, outputs, cell_index)` triple in flattening
    /// order. The slices passed to `f` are reused between calls.
    pub fn for_each_cell(&self, mut f: impl FnMut(&[usize], &[usize], usize)) {
        let n = self.parties();
        let mut inputs = vec![0usize; n];
        let mut outputs = vec![0usize; n];
        let total = self.cells();
        debug_assert!(total <= usize::MAX as u128);
        for idx in 0..total as usize {
            f(&inputs, &outputs, idx);
            // increment the mixed-radix (input, output) digit string,
            // last party's output fastest
            for i in (0..n).rev() {
                outputs[i] += 1;
                if outputs[i] < self.output_sizes[i] {
                    break;
                }
                outputs[i] = 0;
                inputs[i] += 1;
                if inputs[i] < self.input_sizes[i] {
                    break;
                }
                inputs[i] = 0;
            }
        }
    }

    /// Visit every joint input (as per-party digits, slice reused).
    pub fn for_each_input(&self, mut f: impl FnMut(&[usize])) {
        let n = self.parties();
        let mut inputs = vec![0usize; n];
        loop {
            f(&inputs);
            let mut i = n;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                inputs[i] += 1;
                if inputs[i] < self.input_sizes[i] {
                    break;
                }
                inputs[i] = 0;
            }
        }
    }

    /// Visit every joint output for a fixed joint input, yielding cell
    /// indices (slice reused).
    pub fn for_each_output_at(&self, inputs: &[usize], mut f: impl FnMut(&[usize], usize)) {
        let n = self.parties();
        let mut outputs = vec![0usize; n];
        loop {
            f(&outputs, self.index(inputs, &outputs));
            let mut i = n;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                outputs[i] += 1;
                if outputs[i] < self.output_sizes[i] {
                    break;
                }
                outputs[i] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bipartite_binary_flattening_is_8u_4x_2v_y() {
        let s = Scenario::bipartite_binary();
        for u in 0..2 {
            for x in 0..2 {
                for v in 0..2 {
                    for y in 0..2 {
                        assert_eq!(s.index(&[u, v], &[x, y]), 8 * u + 4 * x + 2 * v + y);
                    }
                }
            }
        }
    }

    #[test]
    fn unflatten_roundtrip() {
        let s = Scenario::new(vec![3, 2], vec![2, 4]).unwrap();
        for idx in 0..s.cells() as usize {
            let (i, o) = s.unflatten(idx);
            assert_eq!(s.index(&i, &o), idx);
        }
    }

    #[test]
    fn for_each_cell_covers_in_order() {
        let s = Scenario::new(vec![2, 3], vec![3, 2]).unwrap();
        let mut seen = Vec::new();
        s.for_each_cell(|i, o, idx| {
            assert_eq!(s.index(i, o), idx);
            seen.push(idx);
        });
        assert_eq!(seen, (0..s.cells() as usize).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_degenerate_shapes() {
        assert!(Scenario::new(vec![], vec![]).is_err());
        assert!(Scenario::new(vec![2], vec![2, 2]).is_err());
        assert!(Scenario::new(vec![2, 0], vec![2, 2]).is_err());
    }
}
