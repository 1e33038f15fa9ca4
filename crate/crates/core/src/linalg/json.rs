//! JSON form of a matrix: `{"n": <int>, "data": [[re, im], ...]}`, row-major.
//!
//! Numbers are written in scientific notation with 17 significant digits so
//! that a round trip through text is exact.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use super::ComplexMatrix;

/// Plain deserialization target; validated into a [`ComplexMatrix`].
#[derive(Debug, Clone, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub data: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct MatrixOut {
    n: usize,
    data: Vec<[Box<RawValue>; 2]>,
}

pub(crate) fn raw_f64(x: f64) -> Result<Box<RawValue>, serde_json::Error> {
    RawValue::from_string(format!("{x:.16e}"))
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let data = self
            .data()
            .iter()
            .map(|z| Ok([raw_f64(z.re)?, raw_f64(z.im)?]))
            .collect::<Result<Vec<_>, serde_json::Error>>()
            .map_err(S::Error::custom)?;
        MatrixOut { n: self.dim(), data }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        ComplexMatrix::try_from(raw).map_err(D::Error::custom)
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = super::LinalgError;

    fn try_from(raw: MatrixJson) -> Result<Self, Self::Error> {
        let data = raw
            .data
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(raw.n, data)
    }
}
