use serde::Serialize;

use crate::error::{Error, Result};

/// A vector in `{-1, 0, +1}^V`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SignVector(Vec<i8>);

/// `(L, R, Z)`: the vertices with sign `+1`, `-1` and `0`, each sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tripartition {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub zero: Vec<usize>,
}

impl SignVector {
    pub fn new(values: Vec<i8>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !(-1..=1).contains(*v)) {
            return Err(Error::InvalidParameter(format!(
                "sign entry {bad} not in {{-1, 0, 1}}"
            )));
        }
        Ok(SignVector(values))
    }

    pub fn zeros(n: usize) -> Self {
        SignVector(vec![0; n])
    }

    /// `+1` on `left`, `-1` on `right`. Fails if the sets overlap or leave `0..n`.
    pub fn from_sets(n: usize, left: &[usize], right: &[usize]) -> Result<Self> {
        let mut x = vec![0i8; n];
        for (set, sign) in [(left, 1i8), (right, -1i8)] {
            for &i in set {
                if i >= n || x[i] != 0 {
                    return Err(Error::EmptySelection);
                }
                x[i] = sign;
            }
        }
        Ok(SignVector(x))
    }

    /// Inverse of [`tripartition`]. The three sets must cover `0..n` exactly.
    pub fn from_tripartition(n: usize, parts: &Tripartition) -> Result<Self> {
        let x = Self::from_sets(n, &parts.left, &parts.right)?;
        let zeros = x.0.iter().filter(|&&v| v == 0).count();
        let mut z = parts.zero.clone();
        z.sort_unstable();
        z.dedup();
        if z.len() != parts.zero.len()
            || zeros != z.len()
            || z.iter().any(|&i| i >= n || x.0[i] != 0)
        {
            return Err(Error::InvalidParameter(
                "tripartition does not partition the vertex set".into(),
            ));
        }
        Ok(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn negated(&self) -> SignVector {
        SignVector(self.0.iter().map(|v| -v).collect())
    }

    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|&&v| v != 0).count()
    }
}

pub fn tripartition(x: &SignVector) -> Tripartition {
    let mut parts = Tripartition::default();
    for (i, &v) in x.as_slice().iter().enumerate() {
        match v {
            1 => parts.left.push(i),
            -1 => parts.right.push(i),
            _ => parts.zero.push(i),
        }
    }
    parts
}
