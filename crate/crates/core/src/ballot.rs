//! The index set of ballot compositions and the Catalan numbers that count it.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::binomial;

/// A composition `k` of `n` into `n` nonnegative parts whose prefix sums
/// dominate their length: `k_1 + ... + k_j >= j` for every `j < n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BallotComposition(Vec<u32>);

impl BallotComposition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if is_ballot(&parts) {
            Ok(BallotComposition(parts))
        } else {
            Err(Error::Domain(format!("{parts:?} is not a ballot composition")))
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Membership test used for validation and by the fuzz tests.
pub fn is_ballot(parts: &[u32]) -> bool {
    let n = parts.len() as u64;
    if n == 0 {
        return false;
    }
    let mut prefix = 0u64;
    for (j, &k) in parts.iter().enumerate() {
        prefix += k as u64;
        if (j as u64 + 1) < n && prefix < j as u64 + 1 {
            return false;
        }
    }
    prefix == n
}

/// All ballot compositions of `n`, in lexicographic order.
pub fn enumerate_k(n: usize) -> Result<Vec<BallotComposition>> {
    if n == 0 {
        return Err(Error::EmptyInput("ballot compositions need n >= 1".into()));
    }
    let mut out = Vec::new();
    let mut parts = Vec::with_capacity(n);
    extend(n, 0, &mut parts, &mut out);
    Ok(out)
}

fn extend(n: usize, prefix: usize, parts: &mut Vec<u32>, out: &mut Vec<BallotComposition>) {
    let j = parts.len();
    if j + 1 == n {
        parts.push((n - prefix) as u32);
        out.push(BallotComposition(parts.clone()));
        parts.pop();
        return;
    }
    // after this part the prefix must reach j + 1
    let lo = (j + 1).saturating_sub(prefix);
    for k in lo..=(n - prefix) {
        parts.push(k as u32);
        extend(n, prefix + k, parts, out);
        parts.pop();
    }
}

/// `C_n = binomial(2n, n) / (n + 1)`.
pub fn catalan(n: u32) -> BigInt {
    binomial(&BigInt::from(2 * n), n) / BigInt::from(n + 1)
}
