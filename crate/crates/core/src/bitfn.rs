use crate::error::SystemError;

/// A binary function of an output index, f: {0, …, D−1} → {0, 1}.
///
/// Two representations:
/// * `Table` — an explicit truth table of length D;
/// * `Mask` — a GF(2)-linear form: f(x) = ⊕ of the index bits selected by
///   the mask. Mask bit j selects the bit of place value 2ʲ in the index.
///   Under the tensor flattening an n-box output string x₁…xₙ has box 1 in
///   the most significant place, so box i carries place value 2^{n−i}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BitFunction {
    Table(Vec<u8>),
    Mask(u64),
}

impl BitFunction {
    /// The parity function x₁ ⊕ … ⊕ xₙ over n-bit output strings.
    pub fn xor_all(n_bits: usize) -> Self {
        assert!(n_bits <= 63, "mask form holds at most 63 bits");
        BitFunction::Mask((1u64 << n_bits) - 1)
    }

    /// Check the representation against a domain of `domain` output
    /// indices. Tables must enumerate exactly the domain with entries in
    /// {0, 1}; masks require a power-of-two domain and may only select
    /// bits inside it.
    pub fn validate(&self, domain: usize) -> Result<(), SystemError> {
        match self {
            BitFunction::Table(t) => {
                if t.len() != domain {
                    return Err(SystemError::BitFunctionLength {
                        got: t.len(),
                        want: domain,
                    });
                }
                for (index, &value) in t.iter().enumerate() {
                    if value > 1 {
                        return Err(SystemError::BitFunctionValue { index, value });
                    }
                }
                Ok(())
            }
            BitFunction::Mask(m) => {
                if !domain.is_power_of_two() {
                    return Err(SystemError::Domain {
                        name: "mask domain",
                        value: domain as f64,
                        range: "a power of two",
                    });
                }
                if domain <= u64::MAX as usize && *m & !(domain as u64 - 1) != 0 {
                    return Err(SystemError::Domain {
                        name: "mask",
                        value: *m as f64,
                        range: "bits within the output index width",
                    });
                }
                Ok(())
            }
        }
    }

    /// Evaluate at output index `x`. The index must lie in the validated
    /// domain; tables panic on out-of-range indices.
    pub fn eval(&self, x: usize) -> u8 {
        match self {
            BitFunction::Table(t) => t[x],
            BitFunction::Mask(m) => ((x as u64 & m).count_ones() & 1) as u8,
        }
    }

    /// f(x) for every x in 0..domain, as a table (normalizes either
    /// representation; handy for LP objective rows).
    pub fn to_table(&self, domain: usize) -> Vec<u8> {
        (0..domain).map(|x| self.eval(x)).collect()
    }

    /// Whether f takes both values on 0..domain.
    pub fn is_nonconstant(&self, domain: usize) -> bool {
        let mut seen = [false, false];
        for x in 0..domain {
            seen[self.eval(x) as usize] = true;
            if seen[0] && seen[1] {
                return true;
            }
        }
        false
    }
}
