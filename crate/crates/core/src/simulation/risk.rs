use crate::error::{Error, Result};

/// `‖estimate − truth‖₂ / √n`.
///
/// With `align` set and a `counterpart` supplied (the estimate obtained under
/// the opposite orientation), the smaller of the two risks is returned.
pub fn empirical_risk(
    estimate: &[f64],
    truth: &[f64],
    align: bool,
    counterpart: Option<&[f64]>,
) -> Result<f64> {
    let direct = normalized_distance(estimate, truth)?;
    match (align, counterpart) {
        (true, Some(other)) => Ok(direct.min(normalized_distance(other, truth)?)),
        _ => Ok(direct),
    }
}

fn normalized_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::InvalidArgument("empty vectors".into()));
    }
    let ss: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    Ok((ss / a.len() as f64).sqrt())
}
