use num_complex::Complex64;

use super::ZERO;

/// Applies `matrix` (row-major, local dimension `prod(dims[r] for r in registers)`)
/// to the listed registers of a mixed-radix amplitude vector.
///
/// The local basis is ordered big-endian over `registers` as given, so for
/// a two-qubit gate with `registers = [a, b]` the local index is `2*k_a + k_b`
/// regardless of whether `a < b`.
pub fn apply_local_matrix(
    amplitudes: &[Complex64],
    dims: &[usize],
    registers: &[usize],
    matrix: &[Complex64],
) -> Vec<Complex64> {
    let strides: Vec<usize> = (0..dims.len()).map(|r| dims[r + 1..].iter().product()).collect();
    let local_dims: Vec<usize> = registers.iter().map(|&r| dims[r]).collect();
    let local: usize = local_dims.iter().product();
    debug_assert_eq!(matrix.len(), local * local);

    // Flat offset contributed by each local basis index.
    let offsets: Vec<usize> = (0..local)
        .map(|mut k| {
            let mut off = 0;
            for (i, &r) in registers.iter().enumerate().rev() {
                off += (k % local_dims[i]) * strides[r];
                k /= local_dims[i];
            }
            off
        })
        .collect();

    let is_base = |index: usize| {
        registers.iter().all(|&r| (index / strides[r]) % dims[r] == 0)
    };

    let mut out = vec![ZERO; amplitudes.len()];
    let mut gathered = vec![ZERO; local];
    for base in (0..amplitudes.len()).filter(|&i| is_base(i)) {
        for (g, off) in gathered.iter_mut().zip(&offsets) {
            *g = amplitudes[base + off];
        }
        for (row, off) in offsets.iter().enumerate() {
            let entries = &matrix[row * local..(row + 1) * local];
            out[base + off] = entries.iter().zip(&gathered).map(|(m, a)| m * a).sum();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn register_order_defines_local_basis() {
        // |10> on two qubits; CNOT with control 0, target 1 gives |11>.
        let cnot = [
            c(1.), c(0.), c(0.), c(0.),
            c(0.), c(1.), c(0.), c(0.),
            c(0.), c(0.), c(0.), c(1.),
            c(0.), c(0.), c(1.), c(0.),
        ];
        let mut amps = vec![ZERO; 4];
        amps[2] = c(1.0);
        let out = apply_local_matrix(&amps, &[2, 2], &[0, 1], &cnot);
        assert_eq!(out[3], c(1.0));
        // Control 1, target 0: |10> has control bit 0, unchanged.
        let out = apply_local_matrix(&amps, &[2, 2], &[1, 0], &cnot);
        assert_eq!(out[2], c(1.0));
    }

    #[test]
    fn acts_on_qudit_between_qubits() {
        // Cyclic shift on a dimension-3 register in the middle of [2, 3, 2].
        let mut shift = vec![ZERO; 9];
        for k in 0..3 {
            shift[((k + 1) % 3) * 3 + k] = c(1.0);
        }
        let mut amps = vec![ZERO; 12];
        amps[(3 + 2) * 2 + 1] = c(1.0); // |1, 2, 1>
        let out = apply_local_matrix(&amps, &[2, 3, 2], &[1], &shift);
        assert_eq!(out[3 * 2 + 1], c(1.0)); // |1, 0, 1>
    }
}
