use crate::error::SystemError;
use crate::scenario::Scenario;
use crate::system::{System, TABLE_CELL_CAP};

/// Parallel composition: the parties of `a` followed by the parties of
/// `b`, with product entries P(x⃗_a x⃗_b | u⃗_a u⃗_b) = P_a · P_b. Under the
/// flattening convention the joint cell index is `idx_a · cells_b + idx_b`,
/// so the table is a plain outer product.
pub fn tensor(a: &System, b: &System) -> Result<System, SystemError> {
    let cells = a.scenario().cells() * b.scenario().cells();
    if cells > TABLE_CELL_CAP as u128 {
        return Err(SystemError::TableTooLarge {
            cells,
            cap: TABLE_CELL_CAP,
        });
    }
    let mut input_sizes = a.scenario().input_sizes().to_vec();
    input_sizes.extend_from_slice(b.scenario().input_sizes());
    let mut output_sizes = a.scenario().output_sizes().to_vec();
    output_sizes.extend_from_slice(b.scenario().output_sizes());
    let scenario = Scenario::new(input_sizes, output_sizes)?;

    let nb = b.table().len();
    let mut table = vec![0.0; a.table().len() * nb];
    for (ia, &pa) in a.table().iter().enumerate() {
        let row = &mut table[ia * nb..(ia + 1) * nb];
        for (ib, &pb) in b.table().iter().enumerate() {
            row[ib] = pa * pb;
        }
    }
    Ok(System::new_unchecked(scenario, table))
}

/// Marginal system on the parties in `keep` (ascending, non-empty, no
/// duplicates). Computed as the section at the dropped parties' inputs
/// fixed to 0, summing over their outputs. For a non-signalling parent
/// this equals the marginal at every choice of dropped inputs; for a
/// signalling table it is that particular section.
pub fn marginal(sys: &System, keep: &[usize]) -> Result<System, SystemError> {
    let s = sys.scenario();
    let n = s.parties();
    if keep.is_empty() || keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SystemError::InvalidScenario(
            "kept party set must be non-empty and strictly ascending".into(),
        ));
    }
    if *keep.last().unwrap() >= n {
        return Err(SystemError::PartyOutOfRange {
            party: *keep.last().unwrap(),
            parties: n,
        });
    }
    let kept_inputs: Vec<usize> = keep.iter().map(|&i| s.input_sizes()[i]).collect();
    let kept_outputs: Vec<usize> = keep.iter().map(|&i| s.output_sizes()[i]).collect();
    let sub = Scenario::new(kept_inputs, kept_outputs)?;

    let dropped: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    let mut inputs = vec![0usize; n];
    let mut outputs = vec![0usize; n];
    let mut table = vec![0.0; sub.cells() as usize];

    sub.for_each_cell(|kin, kout, sub_idx| {
        for (pos, &i) in keep.iter().enumerate() {
            inputs[i] = kin[pos];
            outputs[i] = kout[pos];
        }
        for &i in &dropped {
            inputs[i] = 0;
            outputs[i] = 0;
        }
        // sum over the dropped parties' outputs (mixed radix, last fastest)
        let mut sum = 0.0;
        loop {
            sum += sys.table()[s.index(&inputs, &outputs)];
            let mut pos = dropped.len();
            let mut wrapped = true;
            while pos > 0 {
                pos -= 1;
                let i = dropped[pos];
                outputs[i] += 1;
                if outputs[i] < s.output_sizes()[i] {
                    wrapped = false;
                    break;
                }
                outputs[i] = 0;
            }
            if wrapped {
                break;
            }
        }
        table[sub_idx] = sum;
    });
    Ok(System::new_unchecked(sub, table))
}

/// Condition on one party observing `output` for `input`, removing that
/// party. Each remaining joint input's block is renormalized by the
/// probability mass of the conditioned outcome in that block; mass ≤ tol
/// is a degenerate-conditioning error. For a non-signalling parent the
/// mass is the same in every block.
pub fn condition(
    sys: &System,
    party: usize,
    input: usize,
    output: usize,
    tol: f64,
) -> Result<System, SystemError> {
    let s = sys.scenario();
    let n = s.parties();
    if party >= n {
        return Err(SystemError::PartyOutOfRange { party, parties: n });
    }
    if n == 1 {
        return Err(SystemError::InvalidScenario(
            "conditioning would leave no parties".into(),
        ));
    }
    if input >= s.input_sizes()[party] || output >= s.output_sizes()[party] {
        return Err(SystemError::Domain {
            name: "conditioned (input, output)",
            value: (input * s.output_sizes()[party] + output) as f64,
            range: "within the party's alphabet",
        });
    }
    let keep: Vec<usize> = (0..n).filter(|&i| i != party).collect();
    let kept_inputs: Vec<usize> = keep.iter().map(|&i| s.input_sizes()[i]).collect();
    let kept_outputs: Vec<usize> = keep.iter().map(|&i| s.output_sizes()[i]).collect();
    let sub = Scenario::new(kept_inputs, kept_outputs)?;

    let mut inputs = vec![0usize; n];
    let mut outputs = vec![0usize; n];
    inputs[party] = input;
    outputs[party] = output;

    let mut table = vec![0.0; sub.cells() as usize];
    sub.for_each_cell(|kin, kout, sub_idx| {
        for (pos, &i) in keep.iter().enumerate() {
            inputs[i] = kin[pos];
            outputs[i] = kout[pos];
        }
        table[sub_idx] = sys.table()[s.index(&inputs, &outputs)];
    });

    // per remaining-input block normalization
    let mut result = Ok(());
    let mut offset = 0usize;
    let block = sub.joint_outputs();
    sub.for_each_input(|_| {
        if result.is_err() {
            return;
        }
        let mass: f64 = table[offset..offset + block].iter().sum();
        if mass <= tol {
            result = Err(SystemError::DegenerateConditioning {
                party,
                input,
                output,
            });
        } else {
            for p in &mut table[offset..offset + block] {
                *p /= mass;
            }
        }
        offset += block;
    });
    result?;
    Ok(System::new_unchecked(sub, table))
}

/// Merge parties into composite parties. `groups` must use every original
/// party exactly once; group g becomes one party whose input (output)
/// alphabet is the mixed-radix product of its members' alphabets with
/// member 0 most significant, e.g. grouping two binary parties gives
/// u = u₁·2 + u₂. The table entries are unchanged — only the indexing is.
pub fn group_parties(sys: &System, groups: &[Vec<usize>]) -> Result<System, SystemError> {
    let s = sys.scenario();
    let n = s.parties();
    let mut seen = vec![false; n];
    for g in groups {
        if g.is_empty() {
            return Err(SystemError::InvalidGrouping("empty group".into()));
        }
        for &i in g {
            if i >= n {
                return Err(SystemError::PartyOutOfRange { party: i, parties: n });
            }
            if seen[i] {
                return Err(SystemError::InvalidGrouping(format!(
                    "party {i} appears twice"
                )));
            }
            seen[i] = true;
        }
    }
    if !seen.iter().all(|&b| b) {
        return Err(SystemError::InvalidGrouping(
            "groups must cover every party".into(),
        ));
    }

    let input_sizes: Vec<usize> = groups
        .iter()
        .map(|g| g.iter().map(|&i| s.input_sizes()[i]).product())
        .collect();
    let output_sizes: Vec<usize> = groups
        .iter()
        .map(|g| g.iter().map(|&i| s.output_sizes()[i]).product())
        .collect();
    let grouped = Scenario::new(input_sizes, output_sizes)?;

    let mut inputs = vec![0usize; n];
    let mut outputs = vec![0usize; n];
    let mut table = vec![0.0; grouped.cells() as usize];
    grouped.for_each_cell(|gin, gout, g_idx| {
        for (g, group) in groups.iter().enumerate() {
            // decode composite digits, member 0 most significant
            let mut u = gin[g];
            let mut x = gout[g];
            for &i in group.iter().rev() {
                inputs[i] = u % s.input_sizes()[i];
                u /= s.input_sizes()[i];
                outputs[i] = x % s.output_sizes()[i];
                x /= s.output_sizes()[i];
            }
        }
        table[g_idx] = sys.table()[s.index(&inputs, &outputs)];
    });
    Ok(System::new_unchecked(grouped, table))
}
