//! JSON encodings. Complex numbers are `[re, im]`, matrices are arrays of
//! rows. Floats are written in shortest round-trip form and parsed with
//! exact rounding, so a write/read cycle is bit-exact.

use std::fs;
use std::path::Path;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::tuple::{MatrixTuple, SpectralData};

pub type ComplexWire = [f64; 2];

pub(crate) fn to_wire(v: C64) -> ComplexWire {
    [v.re, v.im]
}

pub(crate) fn from_wire(w: ComplexWire) -> std::result::Result<C64, String> {
    if w[0].is_finite() && w[1].is_finite() {
        Ok(C64::new(w[0], w[1]))
    } else {
        Err("complex entry is not finite".into())
    }
}

/// `#[serde(with = "crate::wire::c64")]` for a single complex field.
pub mod c64 {
    use super::*;

    pub fn serialize<S: Serializer>(v: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_wire(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<C64, D::Error> {
        from_wire(ComplexWire::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// `#[serde(with = "crate::wire::c64_vec")]` for a complex vector.
pub mod c64_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(|z| to_wire(*z)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<C64>, D::Error> {
        Vec::<ComplexWire>::deserialize(d)?
            .into_iter()
            .map(|w| from_wire(w).map_err(D::Error::custom))
            .collect()
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows()
            .into_iter()
            .map(|row| row.into_iter().map(to_wire).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<ComplexWire>>::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|row| row.into_iter().map(from_wire).collect::<std::result::Result<Vec<_>, _>>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        ComplexMatrix::from_rows(&rows).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct SpectralWire {
    #[serde(rename = "P")]
    p: ComplexMatrix,
    diagonals: Vec<Vec<ComplexWire>>,
}

impl Serialize for SpectralData {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpectralWire {
            p: *self.p(),
            diagonals: self
                .diagonals()
                .iter()
                .map(|diag| diag.iter().map(|v| to_wire(*v)).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpectralData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = SpectralWire::deserialize(d)?;
        let diagonals = w
            .diagonals
            .into_iter()
            .map(|diag| diag.into_iter().map(from_wire).collect::<std::result::Result<Vec<_>, _>>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        SpectralData::new(w.p, diagonals).map_err(D::Error::custom)
    }
}

/// On-disk tuple: `{ "d", "n", "matrices", "spectral"? }`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TupleWire {
    d: usize,
    n: usize,
    matrices: Vec<ComplexMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    spectral: Option<SpectralData>,
}

impl Serialize for MatrixTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TupleWire {
            d: self.d(),
            n: self.n(),
            matrices: self.matrices().to_vec(),
            spectral: self.spectral().cloned(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixTuple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = TupleWire::deserialize(d)?;
        if w.matrices.len() != w.d {
            return Err(D::Error::custom(format!(
                "\"d\" is {} but {} matrices are given",
                w.d,
                w.matrices.len()
            )));
        }
        if let Some(m) = w.matrices.iter().find(|m| m.n() != w.n) {
            return Err(D::Error::custom(format!(
                "\"n\" is {} but a matrix is {}x{}",
                w.n,
                m.n(),
                m.n()
            )));
        }
        let t = match w.spectral {
            Some(s) => MatrixTuple::with_spectral(w.matrices, s),
            None => MatrixTuple::new(w.matrices),
        };
        t.map_err(D::Error::custom)
    }
}

pub fn tuple_to_json(t: &MatrixTuple) -> String {
    serde_json::to_string_pretty(t).expect("tuple serialization is infallible")
}

pub fn tuple_from_json(s: &str) -> Result<MatrixTuple> {
    Ok(serde_json::from_str(s)?)
}

pub fn read_tuple(path: impl AsRef<Path>) -> Result<MatrixTuple> {
    tuple_from_json(&fs::read_to_string(path)?)
}

pub fn write_tuple(path: impl AsRef<Path>, t: &MatrixTuple) -> Result<()> {
    fs::write(path, tuple_to_json(t) + "\n").map_err(Error::from)
}

/// A corpus file holds either one tuple object or an array of them.
pub fn read_corpus(path: impl AsRef<Path>) -> Result<Vec<MatrixTuple>> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    Ok(match value {
        serde_json::Value::Array(_) => serde_json::from_value(value)?,
        _ => vec![serde_json::from_value(value)?],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{seeded, SpectrumSampling};
    use crate::tuple::random_spectral_tuple;
    use proptest::prelude::*;

    #[test]
    fn schema_shape() {
        let t = MatrixTuple::new(vec![ComplexMatrix::identity(2)]).unwrap();
        let v: serde_json::Value = serde_json::to_value(&t).unwrap();
        assert_eq!(v["d"], 1);
        assert_eq!(v["n"], 2);
        assert_eq!(v["matrices"][0][1][1], serde_json::json!([1.0, 0.0]));
        assert!(v.get("spectral").is_none());

        let s = random_spectral_tuple(&mut seeded(1), 2, 3, 1e3, SpectrumSampling::Uniform).unwrap();
        let v: serde_json::Value = serde_json::to_value(&s).unwrap();
        assert_eq!(v["spectral"]["P"].as_array().unwrap().len(), 3);
        assert_eq!(v["spectral"]["diagonals"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn rejects_inconsistent_headers() {
        let bad_d = r#"{"d":2,"n":2,"matrices":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#;
        assert!(tuple_from_json(bad_d).is_err());
        let bad_n = r#"{"d":1,"n":3,"matrices":[[[[1,0],[0,0]],[[0,0],[1,0]]]]}"#;
        assert!(tuple_from_json(bad_n).is_err());
        let ragged = r#"{"d":1,"n":2,"matrices":[[[[1,0],[0,0]],[[0,0]]]]}"#;
        assert!(tuple_from_json(ragged).is_err());
        assert!(tuple_from_json(r#"{"d":1,"n":2,"matrices":[[[[1,0"#).is_err());
    }

    proptest! {
        #[test]
        fn tuple_round_trip_is_bit_exact(seed in any::<u64>(), n in 2usize..=3) {
            let t = random_spectral_tuple(&mut seeded(seed), 2, n, 1e3, SpectrumSampling::Uniform).unwrap();
            let back = tuple_from_json(&tuple_to_json(&t)).unwrap();
            prop_assert_eq!(back, t);
        }

        #[test]
        fn matrix_round_trip_is_bit_exact(entries in proptest::collection::vec(-1e6f64..1e6, 18)) {
            let m = ComplexMatrix::from_fn(3, |i, j| C64::new(entries[2 * (3 * i + j)], entries[2 * (3 * i + j) + 1]));
            let back: ComplexMatrix = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
