use crate::error::{Error, Result};

/// Reference split sizes: 900 train, 149 validation, 360 test of 1409.
const REFERENCE: (usize, usize, usize) = (900, 149, 360);

/// Sizes `(train, valid, test)` for `n` classes. Validation and test are the
/// reference proportions rounded (at least one each); train gets the rest.
pub fn split_sizes(n: usize) -> Result<(usize, usize, usize)> {
    if n < 3 {
        return Err(Error::TooFewClasses(n));
    }
    let total = (REFERENCE.0 + REFERENCE.1 + REFERENCE.2) as f64;
    let share = |k: usize| ((n as f64 * k as f64 / total).round() as usize).max(1);
    let (valid, test) = (share(REFERENCE.1), share(REFERENCE.2));
    Ok((n - valid - test, valid, test))
}

/// Positional split of canonically ordered classes into meta-train,
/// meta-validation and meta-test.
pub fn split_classes<T: Clone>(classes: &[T]) -> Result<(Vec<T>, Vec<T>, Vec<T>)> {
    let (train, valid, _) = split_sizes(classes.len())?;
    Ok((
        classes[..train].to_vec(),
        classes[train..train + valid].to_vec(),
        classes[train + valid..].to_vec(),
    ))
}
