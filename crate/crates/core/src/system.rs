use serde::{Deserialize, Serialize};

use crate::error::SystemError;
use crate::scenario::Scenario;

/// Dense tables larger than this are rejected outright (2²⁸ cells ≈ 2 GiB
/// of f64); larger scenarios must be handled through on-demand evaluation.
pub const TABLE_CELL_CAP: usize = 1 << 28;

/// Default absolute tolerance for validation checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A conditional probability table P(x⃗|u⃗) over a [`Scenario`], stored dense
/// in the crate-wide flattening convention. Entries are validated to be
/// probabilities and each joint input's outputs to sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct System {
    scenario: Scenario,
    table: Vec<f64>,
}

/// A real-valued table over a scenario with no normalization or positivity
/// requirement. Holds difference vectors Δ and scaled partition elements
/// p·Pᶻ, which share the flattening and the non-signalling row structure
/// with proper systems but not their normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct SubnormalizedSystem {
    scenario: Scenario,
    table: Vec<f64>,
}

/// One violated non-signalling equality: varying party `party`'s input over
/// `input_pair` changed the joint marginal of the other parties at the fixed
/// `context` (their `(input, output)` pairs) by `residual`.
#[derive(Debug, Clone, PartialEq)]
pub struct NsViolation {
    pub party: usize,
    pub input_pair: (usize, usize),
    pub context: Vec<(usize, usize)>,
    pub residual: f64,
}

/// Result of a non-signalling check: the verdict plus the violated
/// constraints (capped; `truncated` reports whether the cap was hit).
#[derive(Debug, Clone, PartialEq)]
pub struct NsCheck {
    pub ok: bool,
    pub worst_residual: f64,
    pub violations: Vec<NsViolation>,
    pub truncated: bool,
}

const MAX_REPORTED_VIOLATIONS: usize = 1024;

impl System {
    /// Validating constructor: checks table length, the dense-size cap,
    /// entry ranges, and per-input normalization, all within `tol`.
    pub fn new(scenario: Scenario, table: Vec<f64>, tol: f64) -> Result<Self, SystemError> {
        let cells = scenario.cells();
        if cells > TABLE_CELL_CAP as u128 {
            return Err(SystemError::TableTooLarge {
                cells,
                cap: TABLE_CELL_CAP,
            });
        }
        if table.len() as u128 != cells {
            return Err(SystemError::TableLength {
                got: table.len(),
                want: cells as usize,
            });
        }
        for (index, &value) in table.iter().enumerate() {
            if !value.is_finite() {
                return Err(SystemError::NonFinite { index });
            }
            if !(-tol..=1.0 + tol).contains(&value) {
                return Err(SystemError::EntryOutOfRange { index, value, tol });
            }
        }
        let sys = System { scenario, table };
        sys.check_normalization(tol)?;
        Ok(sys)
    }

    /// Construct without validation. The caller promises the invariants.
    pub fn new_unchecked(scenario: Scenario, table: Vec<f64>) -> Self {
        debug_assert_eq!(scenario.cells(), table.len() as u128);
        System { scenario, table }
    }

    fn check_normalization(&self, tol: f64) -> Result<(), SystemError> {
        let mut joint = 0usize;
        let mut result = Ok(());
        self.scenario.for_each_input(|inputs| {
            if result.is_err() {
                return;
            }
            let mut sum = 0.0;
            self.scenario
                .for_each_output_at(inputs, |_, idx| sum += self.table[idx]);
            if (sum - 1.0).abs() > tol {
                result = Err(SystemError::NotNormalized {
                    input: joint,
                    sum,
                    tol,
                });
            }
            joint += 1;
        });
        result
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn into_table(self) -> Vec<f64> {
        self.table
    }

    /// P(x⃗|u⃗) by per-party digits.
    pub fn get(&self, inputs: &[usize], outputs: &[usize]) -> f64 {
        self.table[self.scenario.index(inputs, outputs)]
    }

    /// Check the simplified non-signalling conditions: for every party, the
    /// joint distribution of the *other* parties' outputs (at fixed other
    /// inputs) must not change when that party's input changes. Adjacent
    /// input pairs suffice by transitivity. A single-party system has no
    /// conditions and always passes.
    pub fn is_nonsignalling(&self, tol: f64) -> NsCheck {
        is_nonsignalling_table(&self.scenario, &self.table, tol)
    }

    /// Serialize as `{"inputs":[…],"outputs":[…],"table":[…]}`.
    pub fn to_json(&self) -> String {
        let dto = SystemDto {
            inputs: self.scenario.input_sizes().to_vec(),
            outputs: self.scenario.output_sizes().to_vec(),
            table: self.table.clone(),
        };
        serde_json::to_string(&dto).expect("plain struct serializes")
    }

    /// Parse and validate a system from its JSON form.
    pub fn from_json(text: &str, tol: f64) -> Result<Self, SystemError> {
        let dto: SystemDto =
            serde_json::from_str(text).map_err(|e| SystemError::Json(e.to_string()))?;
        let scenario = Scenario::new(dto.inputs, dto.outputs)?;
        System::new(scenario, dto.table, tol)
    }
}

impl SubnormalizedSystem {
    pub fn new(scenario: Scenario, table: Vec<f64>) -> Result<Self, SystemError> {
        let cells = scenario.cells();
        if cells > TABLE_CELL_CAP as u128 {
            return Err(SystemError::TableTooLarge {
                cells,
                cap: TABLE_CELL_CAP,
            });
        }
        if table.len() as u128 != cells {
            return Err(SystemError::TableLength {
                got: table.len(),
                want: cells as usize,
            });
        }
        Ok(SubnormalizedSystem { scenario, table })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// The non-signalling row structure is shared with proper systems: all
    /// marginal-difference sums must vanish (normalization not required).
    pub fn is_nonsignalling(&self, tol: f64) -> NsCheck {
        is_nonsignalling_table(&self.scenario, &self.table, tol)
    }
}

#[derive(Serialize, Deserialize)]
struct SystemDto {
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    table: Vec<f64>,
}

/// One simplified non-signalling equality, described by the table cells on
/// each side: Σ `plus_cells` − Σ `minus_cells` = 0. The slices are reused
/// between visits.
pub struct NsConstraint<'a> {
    /// Party whose input is varied.
    pub party: usize,
    /// The two adjacent inputs compared, `(k, k+1)`.
    pub input_pair: (usize, usize),
    /// The other parties' fixed `(input, output)` pairs, in party order.
    pub context: &'a [(usize, usize)],
    /// Cells of the varied party's outputs at input k.
    pub plus_cells: &'a [usize],
    /// Cells of the varied party's outputs at input k+1.
    pub minus_cells: &'a [usize],
}

/// Enumerate the simplified non-signalling equalities in their canonical
/// order: varied party from last to first; for each, the other parties'
/// `(input, output)` context in flattening order; for each context the
/// adjacent input pairs (k, k+1) in order. For two binary parties this
/// yields exactly eight constraints: four varying party 1 (context = party
/// 0's (u,x), u-major), then four varying party 0.
pub fn for_each_ns_constraint(scenario: &Scenario, mut f: impl FnMut(&NsConstraint<'_>)) {
    let n = scenario.parties();
    if n <= 1 {
        return;
    }
    let mut inputs = vec![0usize; n];
    let mut outputs = vec![0usize; n];
    let mut context = Vec::with_capacity(n - 1);
    let mut plus = Vec::new();
    let mut minus = Vec::new();

    for party in (0..n).rev() {
        let others: Vec<usize> = (0..n).filter(|&i| i != party).collect();
        // mixed-radix counter over the other parties' (input, output) pairs,
        // in party order (matches the flattening digit order)
        let mut digits = vec![(0usize, 0usize); others.len()];
        loop {
            for (d, &i) in digits.iter().zip(&others) {
                inputs[i] = d.0;
                outputs[i] = d.1;
            }
            context.clear();
            context.extend_from_slice(&digits);
            for k in 0..scenario.input_sizes()[party] - 1 {
                plus.clear();
                minus.clear();
                for x in 0..scenario.output_sizes()[party] {
                    outputs[party] = x;
                    inputs[party] = k;
                    plus.push(scenario.index(&inputs, &outputs));
                    inputs[party] = k + 1;
                    minus.push(scenario.index(&inputs, &outputs));
                }
                f(&NsConstraint {
                    party,
                    input_pair: (k, k + 1),
                    context: &context,
                    plus_cells: &plus,
                    minus_cells: &minus,
                });
            }
            // advance the context counter, last digit fastest; per digit the
            // output is the faster half; full carry-out ends this party
            let mut pos = digits.len();
            let mut wrapped = true;
            while pos > 0 {
                pos -= 1;
                let i = others[pos];
                digits[pos].1 += 1;
                if digits[pos].1 < scenario.output_sizes()[i] {
                    wrapped = false;
                    break;
                }
                digits[pos].1 = 0;
                digits[pos].0 += 1;
                if digits[pos].0 < scenario.input_sizes()[i] {
                    wrapped = false;
                    break;
                }
                digits[pos].0 = 0;
            }
            if wrapped {
                break;
            }
        }
    }
}

fn is_nonsignalling_table(scenario: &Scenario, table: &[f64], tol: f64) -> NsCheck {
    let mut check = NsCheck {
        ok: true,
        worst_residual: 0.0,
        violations: Vec::new(),
        truncated: false,
    };
    for_each_ns_constraint(scenario, |c| {
        let lhs: f64 = c.plus_cells.iter().map(|&i| table[i]).sum();
        let rhs: f64 = c.minus_cells.iter().map(|&i| table[i]).sum();
        let residual = (lhs - rhs).abs();
        check.worst_residual = check.worst_residual.max(residual);
        if residual > tol {
            check.ok = false;
            if check.violations.len() < MAX_REPORTED_VIOLATIONS {
                check.violations.push(NsViolation {
                    party: c.party,
                    input_pair: c.input_pair,
                    context: c.context.to_vec(),
                    residual,
                });
            } else {
                check.truncated = true;
            }
        }
    });
    check
}
