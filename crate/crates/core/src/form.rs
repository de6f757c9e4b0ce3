use crate::error::{Error, Result};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

/// Coefficient vector `(a_1, ..., a_k)` of a triangular form; order is kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Form(Vec<u64>);

impl Form {
    pub fn new(coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidForm("rank 0".into()));
        }
        if coeffs.contains(&0) {
            return Err(Error::InvalidForm(format!("zero coefficient in {coeffs:?}")));
        }
        Ok(Form(coeffs))
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn content(&self) -> u64 {
        self.0.iter().fold(0, |g, &c| g.gcd(&c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn sum(&self) -> u128 {
        self.0.iter().map(|&c| c as u128).sum()
    }

    pub fn sorted(&self) -> Form {
        let mut v = self.0.clone();
        v.sort_unstable();
        Form(v)
    }

    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// Drops the `i`-th coefficient, `i` counted from 1.
    pub fn delete_at(&self, i: usize) -> Result<Form> {
        let k = self.0.len();
        if i == 0 || i > k {
            return Err(Error::IndexOutOfRange { index: i, rank: k });
        }
        if k == 1 {
            return Err(Error::InvalidForm("deleting the only coefficient".into()));
        }
        let mut v = self.0.clone();
        v.remove(i - 1);
        Ok(Form(v))
    }

    pub fn scaled(&self, r: u64) -> Result<Form> {
        let v = self
            .0
            .iter()
            .map(|&c| c.checked_mul(r).ok_or(Error::Overflow("form scaling")))
            .collect::<Result<Vec<_>>>()?;
        Form::new(v)
    }

    /// Divides out the content.
    pub fn primitive_part(&self) -> (u64, Form) {
        let c = self.content();
        (c, Form(self.0.iter().map(|&x| x / c).collect()))
    }

    pub fn with(&self, extra: u64) -> Result<Form> {
        let mut v = self.0.clone();
        v.push(extra);
        Form::new(v)
    }

    pub fn largest(&self) -> u64 {
        *self.0.iter().max().expect("nonempty")
    }
}

impl Deref for Form {
    type Target = [u64];
    fn deref(&self) -> &[u64] {
        &self.0
    }
}

impl TryFrom<Vec<u64>> for Form {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        Form::new(v)
    }
}

impl From<Form> for Vec<u64> {
    fn from(f: Form) -> Vec<u64> {
        f.0
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Form {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let v = t
            .split(',')
            .map(|x| x.trim().parse::<u64>().map_err(|_| Error::InvalidForm(format!("cannot parse {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Form::new(v)
    }
}

/// Builds a form from a literal, panicking on invalid input.
#[macro_export]
macro_rules! form {
    ($($c:expr),+ $(,)?) => {
        $crate::form::Form::new(vec![$($c as u64),+]).expect("valid form literal")
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deletion() {
        assert_eq!(form![3, 2, 6].delete_at(1).unwrap(), form![2, 6]);
        assert_eq!(form![3, 2, 6].delete_at(3).unwrap(), form![3, 2]);
        assert!(form![5].delete_at(1).is_err());
        assert!(form![5, 6].delete_at(3).is_err());
    }

    #[test]
    fn sorting_and_parsing() {
        assert_eq!(form![3, 2, 7, 3, 5].sorted(), form![2, 3, 3, 5, 7]);
        assert_eq!(form![1, 1, 1].sorted(), form![1, 1, 1]);
        assert_eq!(form![6, 1].sorted(), form![1, 6]);
        assert_eq!("1,6,18".parse::<Form>().unwrap(), form![1, 6, 18]);
        assert_eq!("(2, 3,27)".parse::<Form>().unwrap(), form![2, 3, 27]);
        assert!("1,0".parse::<Form>().is_err());
        assert_eq!(form![1, 1, 2].to_string(), "(1,1,2)");
    }

    #[test]
    fn content() {
        assert_eq!(form![6, 9, 15].content(), 3);
        assert!(form![2, 3].is_primitive());
    }
}
