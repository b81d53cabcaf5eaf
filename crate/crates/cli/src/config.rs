//! Orbifold descriptions read from JSON.

use std::fmt;

use g2morse::exterior::DIM;
use g2morse::group::{AffineElement, OrbifoldGroup, DEFAULT_CAP};
use g2morse::linalg::Matrix;
use g2morse::scalar::{format_q, parse_q, qi, Q};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::CliError;

/// An exact rational written as `"p/q"` or as a JSON integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational(pub Q);

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rational;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Rational, E> {
                parse_q(s)
                    .map(Rational)
                    .ok_or_else(|| E::custom(format!("invalid rational `{s}`")))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational(qi(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
                Ok(Rational(Q::from_integer(v.into())))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
                Err(E::custom(format!("floating-point value {v} is not exact; write it as \"p/q\"")))
            }
        }
        d.deserialize_any(V)
    }
}

/// A 7×7 matrix, either nested rows or 49 row-major entries.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum MatrixInput<T> {
    Nested(Vec<Vec<T>>),
    Flat(Vec<T>),
}

impl<T: Clone> MatrixInput<T> {
    fn rows(&self, what: &str) -> Result<Vec<Vec<T>>, CliError> {
        let rows = match self {
            MatrixInput::Nested(rows) => rows.clone(),
            MatrixInput::Flat(entries) if entries.len() == DIM * DIM => {
                entries.chunks(DIM).map(<[T]>::to_vec).collect()
            }
            MatrixInput::Flat(entries) => {
                return Err(CliError::Input(format!(
                    "{what}: expected 49 entries, found {}",
                    entries.len()
                )))
            }
        };
        if rows.len() != DIM || rows.iter().any(|r| r.len() != DIM) {
            return Err(CliError::Input(format!("{what}: expected a 7x7 matrix")));
        }
        Ok(rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub matrix: MatrixInput<i64>,
    pub translation: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OrbifoldConfig {
    pub name: String,
    #[serde(default)]
    pub generators: Vec<GeneratorConfig>,
    #[serde(default)]
    pub frame: Option<MatrixInput<Rational>>,
    #[serde(default)]
    pub oracle_radius_sq: Option<Rational>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

pub const DEFAULT_RADIUS_SQ: i64 = 9;
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_SEED: u64 = 0;

/// A checked config with defaults filled in.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub name: String,
    pub generators: Vec<AffineElement>,
    pub frame: Matrix<Q>,
    pub oracle_radius_sq: Q,
    pub trials: usize,
    pub seed: u64,
    /// Canonical form of the input, echoed in reports.
    pub echo: OrbifoldConfig,
}

impl OrbifoldConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let mut generators = Vec::with_capacity(self.generators.len());
        let mut echo_generators = Vec::with_capacity(self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            let what = format!("generator {i}");
            let rows = g.matrix.rows(&what)?;
            if g.translation.len() != DIM {
                return Err(CliError::Input(format!(
                    "{what}: translation needs 7 entries, found {}",
                    g.translation.len()
                )));
            }
            let matrix = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect());
            let translation = g.translation.iter().map(|t| t.0.clone()).collect();
            generators.push(AffineElement::new(matrix, translation).map_err(CliError::Math)?);
            echo_generators.push(GeneratorConfig {
                matrix: MatrixInput::Nested(rows),
                translation: g.translation.clone(),
            });
        }
        let frame_rows = match &self.frame {
            Some(f) => f.rows("frame")?,
            None => (0..DIM)
                .map(|r| (0..DIM).map(|c| Rational(qi((r == c) as i64))).collect())
                .collect(),
        };
        let frame = Matrix::from_rows(frame_rows.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect());
        let oracle_radius_sq = self
            .oracle_radius_sq
            .as_ref()
            .map_or_else(|| qi(DEFAULT_RADIUS_SQ), |r| r.0.clone());
        let trials = self.trials.unwrap_or(DEFAULT_TRIALS);
        let seed = self.seed.unwrap_or(DEFAULT_SEED);
        let echo = OrbifoldConfig {
            name: self.name.clone(),
            generators: echo_generators,
            frame: Some(MatrixInput::Nested(frame_rows)),
            oracle_radius_sq: Some(Rational(oracle_radius_sq.clone())),
            trials: Some(trials),
            seed: Some(seed),
        };
        Ok(Resolved {
            name: self.name.clone(),
            generators,
            frame,
            oracle_radius_sq,
            trials,
            seed,
            echo,
        })
    }
}

impl Resolved {
    pub fn group(&self) -> Result<OrbifoldGroup, CliError> {
        OrbifoldGroup::generate(&self.generators, DEFAULT_CAP).map_err(CliError::Math)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use g2morse::scalar::q;

    const M1: &str = r#"{
        "name": "M1",
        "generators": [{
            "matrix": [[1,0,0,0,0,0,0],[0,1,0,0,0,0,0],[0,0,1,0,0,0,0],[0,0,0,-1,0,0,0],
                       [0,0,0,0,-1,0,0],[0,0,0,0,0,-1,0],[0,0,0,0,0,0,-1]],
            "translation": ["0","0","0","0","0","0","1/2"]
        }]
    }"#;

    #[test]
    fn defaults_are_filled() {
        let r = OrbifoldConfig::from_json(M1).unwrap().resolve().unwrap();
        assert_eq!(r.oracle_radius_sq, qi(9));
        assert_eq!((r.trials, r.seed), (100, 0));
        assert_eq!(r.frame, Matrix::identity(DIM));
        assert_eq!(r.generators[0].translation()[6], q(1, 2));
    }

    #[test]
    fn flat_and_nested_matrices_agree() {
        let flat: Vec<i64> = (0..49).map(|i| if i % 8 == 0 { 1 } else { 0 }).collect();
        let text = serde_json::json!({
            "name": "flat",
            "generators": [{"matrix": flat, "translation": [0, 0, 0, 0, 0, 0, "1/3"]}]
        })
        .to_string();
        let r = OrbifoldConfig::from_json(&text).unwrap().resolve().unwrap();
        assert!(r.generators[0].matrix().clone() == Matrix::identity(DIM));
        assert_eq!(r.generators[0].translation()[6], q(1, 3));
    }

    #[test]
    fn unknown_fields_and_floats_are_rejected() {
        let extra = r#"{"name": "x", "colour": "red"}"#;
        assert!(matches!(OrbifoldConfig::from_json(extra), Err(CliError::Input(_))));
        let float = r#"{"name": "x", "oracle_radius_sq": 2.5}"#;
        assert!(matches!(OrbifoldConfig::from_json(float), Err(CliError::Input(_))));
    }

    #[test]
    fn bad_shapes_are_input_errors() {
        let short = r#"{"name": "x", "generators": [{"matrix": [1, 2, 3], "translation": []}]}"#;
        let cfg = OrbifoldConfig::from_json(short).unwrap();
        assert!(matches!(cfg.resolve(), Err(CliError::Input(_))));
    }

    #[test]
    fn echo_round_trips() {
        let r = OrbifoldConfig::from_json(M1).unwrap().resolve().unwrap();
        let text = serde_json::to_string(&r.echo).unwrap();
        let again = OrbifoldConfig::from_json(&text).unwrap().resolve().unwrap();
        assert_eq!(again.echo, r.echo);
        assert_eq!(again.generators, r.generators);
    }
}
