use crate::linalg::C64;
use alloc::vec::Vec;

/// Pairing failure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatchError {
    /// Two queries share the same nearest reference eigenvalue.
    #[error("queries {first} and {second} both map to reference {reference}")]
    Collision {
        /// First query index.
        first: usize,
        /// Second query index.
        second: usize,
        /// Shared reference index.
        reference: usize,
    },
    /// No reference values supplied.
    #[error("empty reference set")]
    Empty,
}

/// For each query eigenvalue, the nearest reference eigenvalue `(index, distance)`.
/// Distance ties go to the reference with the smaller decay rate.
pub fn match_nearest(queries: &[C64], reference: &[C64]) -> Result<Vec<(usize, f64)>, MatchError> {
    if reference.is_empty() {
        return Err(MatchError::Empty);
    }
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(queries.len());
    for (qi, q) in queries.iter().enumerate() {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (ri, r) in reference.iter().enumerate() {
            let d = (q - r).norm();
            let better = d < best_d || (d == best_d && -r.im < -reference[best].im);
            if better {
                best = ri;
                best_d = d;
            }
        }
        if let Some(first) = out.iter().position(|&(r, _)| r == best) {
            return Err(MatchError::Collision { first, second: qi, reference: best });
        }
        out.push((best, best_d));
    }
    Ok(out)
}
