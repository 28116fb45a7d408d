use crate::error::{Error, Result};
use crate::numkit::ComplexVec;
use crate::sensing::MeasurementOperator;

use super::altmin::mse;

/// Picks the candidate with the smallest `‖Ax − B·Ph(Ax)‖²`; ties go to the
/// earliest candidate.
pub fn multi_init_select<O: MeasurementOperator + ?Sized>(
    candidates: &[(String, ComplexVec)],
    op: &O,
    b: &[f64],
) -> Result<(String, ComplexVec)> {
    let mut best: Option<(usize, f64)> = None;
    for (k, (_, x)) in candidates.iter().enumerate() {
        let value = mse(op, b, x)?;
        if best.is_none_or(|(_, v)| value < v) {
            best = Some((k, value));
        }
    }
    let (k, _) = best.ok_or(Error::NoCandidates)?;
    Ok(candidates[k].clone())
}
