use std::io::{Read, Write};

use serde_json::{json, Map, Value};

use super::kernel::rbf_unchecked;
use crate::error::{Error, Result};
use crate::features::Normalizer;
use crate::seqio::Label;

pub const MODEL_SCHEMA: &str = "gpcr-svm/1";

#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub gamma: f64,
    pub c: f64,
    pub bias: f64,
    /// Class predicted for non-negative decision values.
    pub positive_label: Label,
    pub normalizer: Option<Normalizer>,
    /// Positive-class fraction of the training set, used as the constant
    /// baseline for relative error metrics.
    pub training_prior: Option<f64>,
    pub support_vectors: Vec<Vec<f64>>,
    /// `a_i * y_i` per support vector.
    pub dual_coeffs: Vec<f64>,
}

impl SvmModel {
    pub fn dim(&self) -> Option<usize> {
        self.support_vectors
            .first()
            .map(Vec::len)
            .or_else(|| self.normalizer.as_ref().map(Normalizer::dim))
    }

    pub fn n_support(&self) -> usize {
        self.support_vectors.len()
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        match self.dim() {
            Some(d) if d != x.len() => Err(Error::Dimension {
                expected: d,
                actual: x.len(),
            }),
            _ => Ok(()),
        }
    }

    pub(crate) fn decision_value_scaled(&self, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.dual_coeffs)
            .map(|(sv, coef)| coef * rbf_unchecked(sv, x, self.gamma))
            .sum::<f64>()
            + self.bias
    }

    /// `f(x) = sum_i coef_i K(sv_i, x) + b` for an already-scaled `x`.
    pub fn decision_function(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.decision_value_scaled(x))
    }

    /// Decision value for raw features, scaled with the stored normalizer.
    pub fn decision_raw(&self, raw: &[f64]) -> Result<f64> {
        match &self.normalizer {
            Some(n) => self.decision_function(&n.apply(raw)?),
            None => self.decision_function(raw),
        }
    }

    fn label_for(&self, value: f64) -> Label {
        if value >= 0.0 {
            self.positive_label
        } else {
            self.positive_label.flipped()
        }
    }

    pub fn predict_scaled(&self, x: &[f64]) -> Result<Label> {
        self.decision_function(x).map(|f| self.label_for(f))
    }

    /// Predicts raw features. Ties (`f = 0`) go to the positive class.
    pub fn predict(&self, raw: &[f64]) -> Result<Label> {
        self.decision_raw(raw).map(|f| self.label_for(f))
    }

    pub fn to_json(&self) -> Value {
        let mut obj = json!({
            "schema": MODEL_SCHEMA,
            "gamma": self.gamma,
            "c": self.c,
            "bias": self.bias,
            "positive_label": self.positive_label.as_str(),
            "normalizer": self.normalizer.as_ref().map(|n| json!({"min": n.min, "max": n.max})),
            "support_vectors": self.support_vectors,
            "dual_coeffs": self.dual_coeffs,
        });
        if let Some(p) = self.training_prior {
            obj["training_prior"] = json!(p);
        }
        obj
    }

    pub fn from_json(value: &Value) -> Result<SvmModel> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::model("$", "expected a JSON object"))?;
        let schema = field(obj, "schema")?
            .as_str()
            .ok_or_else(|| Error::model("schema", "expected a string"))?;
        if schema != MODEL_SCHEMA {
            return Err(Error::SchemaVersion {
                found: schema.to_string(),
                expected: MODEL_SCHEMA.to_string(),
            });
        }
        let gamma = number(field(obj, "gamma")?, "gamma")?;
        let c = number(field(obj, "c")?, "c")?;
        let bias = number(field(obj, "bias")?, "bias")?;
        let positive_label = field(obj, "positive_label")?
            .as_str()
            .ok_or_else(|| Error::model("positive_label", "expected a string"))?
            .parse::<Label>()
            .map_err(|m| Error::model("positive_label", m))?;
        let normalizer = match field(obj, "normalizer")? {
            Value::Null => None,
            Value::Object(n) => {
                let min = numbers(field_at(n, "min", "normalizer.min")?, "normalizer.min")?;
                let max = numbers(field_at(n, "max", "normalizer.max")?, "normalizer.max")?;
                if min.len() != max.len() {
                    return Err(Error::model("normalizer", "min and max lengths differ"));
                }
                if let Some(j) = (0..min.len()).find(|&j| min[j] > max[j]) {
                    return Err(Error::model(format!("normalizer.min[{j}]"), "min exceeds max"));
                }
                Some(Normalizer { min, max, fitted_on: 0 })
            }
            _ => return Err(Error::model("normalizer", "expected an object or null")),
        };
        let training_prior = match obj.get("training_prior") {
            None | Some(Value::Null) => None,
            Some(v) => Some(number(v, "training_prior")?),
        };
        let support_vectors = field(obj, "support_vectors")?
            .as_array()
            .ok_or_else(|| Error::model("support_vectors", "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, row)| numbers(row, &format!("support_vectors[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let dual_coeffs = numbers(field(obj, "dual_coeffs")?, "dual_coeffs")?;

        if dual_coeffs.len() != support_vectors.len() {
            return Err(Error::model(
                "dual_coeffs",
                format!(
                    "{} coefficients for {} support vectors",
                    dual_coeffs.len(),
                    support_vectors.len()
                ),
            ));
        }
        let dim = support_vectors
            .first()
            .map(Vec::len)
            .or(normalizer.as_ref().map(Normalizer::dim));
        if let Some(d) = dim {
            if let Some(i) = support_vectors.iter().position(|sv| sv.len() != d) {
                return Err(Error::model(format!("support_vectors[{i}]"), "inconsistent dimension"));
            }
            if normalizer.as_ref().is_some_and(|n| n.dim() != d) {
                return Err(Error::model("normalizer.min", "dimension differs from support vectors"));
            }
        }
        if !(gamma.is_finite() && gamma > 0.0 && c.is_finite() && c > 0.0) {
            return Err(Error::model("gamma", "gamma and c must be positive"));
        }
        Ok(SvmModel {
            gamma,
            c,
            bias,
            positive_label,
            normalizer,
            training_prior,
            support_vectors,
            dual_coeffs,
        })
    }
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    field_at(obj, name, name)
}

fn field_at<'a>(obj: &'a Map<String, Value>, name: &str, path: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| Error::model(path, "missing field"))
}

fn number(v: &Value, path: &str) -> Result<f64> {
    match v.as_f64() {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(Error::model(path, "expected a finite number")),
    }
}

fn numbers(v: &Value, path: &str) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| Error::model(path, "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, x)| number(x, &format!("{path}[{i}]")))
        .collect()
}

pub fn save_model<W: Write>(model: &SvmModel, mut sink: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut sink, &model.to_json())?;
    sink.write_all(b"\n").map_err(|e| Error::io("<model sink>", e))?;
    Ok(())
}

pub fn load_model<R: Read>(mut source: R) -> Result<SvmModel> {
    let mut text = String::new();
    source
        .read_to_string(&mut text)
        .map_err(|e| Error::io("<model source>", e))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::model("$", e.to_string()))?;
    SvmModel::from_json(&value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> SvmModel {
        SvmModel {
            gamma: 2.0,
            c: 1.0,
            bias: -0.125,
            positive_label: Label::Human,
            normalizer: Some(Normalizer {
                min: vec![0.0, -1.0],
                max: vec![2.0, 1.0],
                fitted_on: 4,
            }),
            training_prior: Some(0.5),
            support_vectors: vec![vec![0.1, 0.7], vec![0.9, 0.3]],
            dual_coeffs: vec![0.75, -0.75],
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let m = tiny();
        let mut buf = Vec::new();
        save_model(&m, &mut buf).unwrap();
        let back = load_model(buf.as_slice()).unwrap();
        assert_eq!(back.support_vectors, m.support_vectors);
        assert_eq!(back.bias, m.bias);
        let x = [0.4, 0.2];
        assert_eq!(back.decision_function(&x).unwrap(), m.decision_function(&x).unwrap());
    }

    #[test]
    fn truncated_file_fails() {
        let mut buf = Vec::new();
        save_model(&tiny(), &mut buf).unwrap();
        let cut = &buf[..buf.len() / 2];
        assert!(matches!(load_model(cut), Err(Error::ModelFormat { .. })));
    }

    #[test]
    fn unknown_schema_is_versioned_error() {
        let mut v = tiny().to_json();
        v["schema"] = json!("99");
        match SvmModel::from_json(&v) {
            Err(Error::SchemaVersion { found, .. }) => assert_eq!(found, "99"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn field_paths_in_errors() {
        let mut v = tiny().to_json();
        v.as_object_mut().unwrap().remove("bias");
        match SvmModel::from_json(&v) {
            Err(Error::ModelFormat { path, .. }) => assert_eq!(path, "bias"),
            other => panic!("unexpected {other:?}"),
        }
        let mut v = tiny().to_json();
        v["support_vectors"][1][0] = Value::Null;
        match SvmModel::from_json(&v) {
            Err(Error::ModelFormat { path, .. }) => assert_eq!(path, "support_vectors[1][0]"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        assert!(matches!(
            tiny().decision_function(&[0.0; 3]),
            Err(Error::Dimension { expected: 2, actual: 3 })
        ));
    }
}
