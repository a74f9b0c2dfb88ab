use crate::error::{Error, Result};
use crate::similarity::{cider_vs_set, mean_cider_vectors, IdfTable};
use crate::text::TokenizedCaption;

/// Mean CIDEr of the candidates against the reference set.
pub fn accuracy(
    captions: &[TokenizedCaption],
    refs: &[TokenizedCaption],
    idf: &IdfTable,
) -> Result<f64> {
    if captions.is_empty() {
        return Err(Error::MissingData("no candidate captions"));
    }
    if refs.is_empty() {
        return Err(Error::MissingData("no reference captions"));
    }
    let scores = mean_cider_vectors(captions, refs, idf)?;
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}

/// Mean CIDEr of each reference against the remaining references.
pub fn leave_one_out_accuracy(refs: &[TokenizedCaption], idf: &IdfTable) -> Result<f64> {
    if refs.len() < 2 {
        return Err(Error::InsufficientReferences { got: refs.len() });
    }
    let mut sum = 0.0;
    for (i, held_out) in refs.iter().enumerate() {
        let rest: Vec<TokenizedCaption> = refs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, r)| r.clone())
            .collect();
        sum += cider_vs_set(held_out, &rest, idf)?;
    }
    Ok(sum / refs.len() as f64)
}

/// Weighted harmonic mean `(1+β²)·div·acc / (β²·div + acc)`; 0 when either
/// input is 0.
pub fn f_score(div: f64, acc: f64, beta2: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&div) {
        return Err(Error::InvalidArgument(format!("div {div} outside [0, 1]")));
    }
    if !(acc >= 0.0 && acc.is_finite()) {
        return Err(Error::InvalidArgument(format!("acc {acc} must be >= 0")));
    }
    if !(beta2 >= 0.0 && beta2.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "beta2 {beta2} must be >= 0"
        )));
    }
    if div * acc == 0.0 {
        return Ok(0.0);
    }
    Ok((1.0 + beta2) * div * acc / (beta2 * div + acc))
}
