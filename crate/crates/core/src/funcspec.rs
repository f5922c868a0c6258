//! JSON descriptions of coefficient series.
//!
//! ```json
//! {"type":"zeta"}
//! {"type":"moebius"}
//! {"type":"sharp-example","k":2}
//! {"type":"coeff-list","values":[[1,0],[0.5,-0.5]]}
//! {"type":"dedekind","field":{"type":"quadratic","disc":-4}}
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halasz::sharp_example_coeffs;
use crate::multcore::{coeffs_from_multiplicative, CoefficientSeries, MultiplicativeSpec};
use crate::numberfield::{dedekind_coeffs, FieldSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FunctionSpec {
    Zeta,
    Moebius,
    SharpExample { k: u32 },
    CoeffList { values: Vec<[f64; 2]> },
    Dedekind { field: FieldSpec },
}

impl FunctionSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)
            .map_err(|e| Error::invalid(format!("function spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::SharpExample { k: 0 } => Err(Error::invalid("sharp-example: k must be >= 1")),
            Self::CoeffList { values } if values.is_empty() => {
                Err(Error::invalid("coeff-list: values must be nonempty"))
            }
            Self::CoeffList { values } => match values.iter().position(|v| !v[0].is_finite() || !v[1].is_finite()) {
                Some(i) => Err(Error::invalid(format!("coeff-list: values[{i}] is not finite"))),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Zeta => "zeta".into(),
            Self::Moebius => "moebius".into(),
            Self::SharpExample { k } => format!("sharp-example(k={k})"),
            Self::CoeffList { values } => format!("coeff-list(len={})", values.len()),
            Self::Dedekind { field } => format!("dedekind({})", field.label()),
        }
    }

    /// The field, for Dedekind specs.
    pub fn field(&self) -> Option<&FieldSpec> {
        match self {
            Self::Dedekind { field } => Some(field),
            _ => None,
        }
    }

    /// Natural length of the series when no `N` is given.
    pub fn intrinsic_len(&self) -> Option<usize> {
        match self {
            Self::CoeffList { values } => Some(values.len()),
            _ => None,
        }
    }

    /// Mean value `lim Σ_{n<=y} f(n) / y` used to complete truncated series.
    ///
    /// Exact for the built-in arithmetic functions. For Dedekind series it
    /// is estimated as `A(N)/N` from the supplied coefficients; the partial
    /// summation remainder of [`SeriesEvaluator`](crate::halasz::SeriesEvaluator)
    /// absorbs the estimation error. Coefficient lists have none.
    pub fn mean_density(&self, coeffs: &CoefficientSeries) -> Option<Complex64> {
        match self {
            Self::Zeta => Some(Complex64::new(1.0, 0.0)),
            Self::Moebius | Self::SharpExample { .. } => Some(Complex64::new(0.0, 0.0)),
            Self::CoeffList { .. } => None,
            Self::Dedekind { .. } => {
                let total: Complex64 = coeffs.values().iter().sum();
                Some(total / coeffs.len() as f64)
            }
        }
    }

    /// `f(1), ..., f(n)`. Coefficient lists are zero-padded or truncated.
    pub fn coefficients(&self, n: usize) -> Result<CoefficientSeries> {
        if n == 0 {
            return Err(Error::invalid("series length must be >= 1"));
        }
        self.validate()?;
        match self {
            Self::Zeta => Ok(CoefficientSeries::ones(n)),
            Self::Moebius => Ok(coeffs_from_multiplicative(&MultiplicativeSpec::moebius(), n)),
            Self::SharpExample { k } => sharp_example_coeffs(*k, n),
            Self::CoeffList { values } => {
                let mut v: Vec<Complex64> = values.iter().map(|c| Complex64::new(c[0], c[1])).collect();
                v.resize(n, Complex64::new(0.0, 0.0));
                CoefficientSeries::new(v)
            }
            Self::Dedekind { field } => dedekind_coeffs(field, n),
        }
    }
}
