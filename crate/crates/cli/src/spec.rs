//! The JSON algebra specification format: field, basis, structure constants,
//! pairing, and optional level, isotropic pair and generalized metric.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use sva_core::geometry::{GeneralizedMetric, Side};
use sva_core::killing::{from_real_solution, IsotropicPair};
use sva_core::{Field, Matrix, QuadraticLieAlgebra, Scalar, Vector};

pub const SCHEMA_VERSION: u32 = 1;

/// A vector as a sparse map from basis names to scalar expressions.
pub type VectorSpec = BTreeMap<String, String>;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadicalSpec {
    pub name: String,
    /// Expression for the square of the radical, in the field declared so far.
    pub square: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub radicals: Vec<RadicalSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub l: Vec<VectorSpec>,
    pub lbar: Vec<VectorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divergence: Option<VectorSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpec {
    /// A basis of `V₊`.
    pub plus: Vec<VectorSpec>,
    /// Complex structures on `V₊`, each given by the images of `plus`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub complex_structures: Vec<Vec<VectorSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divergence: Option<VectorSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub field: FieldSpec,
    pub basis: Vec<String>,
    /// `(a, b, [a, b])` for basis names `a, b`; unlisted pairs commute.
    #[serde(default)]
    pub brackets: Vec<(String, String, VectorSpec)>,
    /// `(a, b, ⟨a, b⟩)`, symmetric; unlisted pairs are orthogonal.
    pub pairing: Vec<(String, String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isotropic_pair: Option<PairSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricSpec>,
}

/// An input problem, with the location in the file where it was found.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {message}")]
pub struct SpecError {
    pub location: String,
    pub message: String,
    /// The file is well formed but the structure it describes is invalid
    /// (Jacobi, invariance, isotropy, …).
    pub structural: bool,
}

impl SpecError {
    pub fn new(location: impl Into<String>, message: impl ToString) -> SpecError {
        SpecError { location: location.into(), message: message.to_string(), structural: false }
    }

    pub fn structural(location: impl Into<String>, message: impl ToString) -> SpecError {
        SpecError { structural: true, ..SpecError::new(location, message) }
    }
}

/// A generalized metric with its complex structures and divergence.
#[derive(Clone, Debug)]
pub struct MetricData {
    pub metric: GeneralizedMetric,
    pub complex_structures: Vec<Matrix>,
    pub divergence: Option<Vector>,
}

/// A fully validated specification.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub name: String,
    pub field: Arc<Field>,
    pub algebra: Arc<QuadraticLieAlgebra>,
    pub level: Option<Scalar>,
    pub pair: Option<IsotropicPair>,
    pub metric: Option<MetricData>,
}

impl Loaded {
    /// The isotropic pair to verify: the explicit block if present, otherwise
    /// the one induced by the first complex structure of the metric.
    pub fn isotropic_pair(&self) -> Result<IsotropicPair, SpecError> {
        if let Some(p) = &self.pair {
            return Ok(p.clone());
        }
        let m = self.metric.as_ref().ok_or_else(|| SpecError::new("/", "needs an `isotropic_pair` or a `metric` block"))?;
        let j = m
            .complex_structures
            .first()
            .ok_or_else(|| SpecError::new("/metric/complex_structures", "needs at least one complex structure"))?;
        let eps = m.divergence.clone().unwrap_or_else(|| Vector::zero(self.algebra.dim()));
        from_real_solution(&m.metric, j, &eps).map_err(|e| SpecError::new("/metric/complex_structures/0", e))
    }

    pub fn level(&self, overridden: Option<&str>) -> Result<Scalar, SpecError> {
        match overridden {
            Some(expr) => self.field.parse(expr).map_err(|e| SpecError::new("--level", e)),
            None => self.level.clone().ok_or_else(|| SpecError::new("/level", "no level given (use --level)")),
        }
    }
}

pub fn read(path: &Path) -> Result<AlgebraSpec, SpecError> {
    let text = std::fs::read_to_string(path).map_err(|e| SpecError::new(path.display().to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| SpecError::new(format!("{}:{}:{}", path.display(), e.line(), e.column()), e))
}

fn build_field(spec: &FieldSpec) -> Result<Arc<Field>, SpecError> {
    let mut f = Field::base();
    for (i, p) in spec.params.iter().enumerate() {
        f = f.add_param(p).map_err(|e| SpecError::new(format!("/field/params/{i}"), e))?;
    }
    for (i, r) in spec.radicals.iter().enumerate() {
        f = f.add_radical_expr(&r.name, &r.square).map_err(|e| SpecError::new(format!("/field/radicals/{i}"), e))?;
    }
    Ok(f)
}

struct Ctx<'a> {
    field: &'a Arc<Field>,
    names: &'a [String],
}

impl Ctx<'_> {
    fn index(&self, name: &str, loc: &str) -> Result<usize, SpecError> {
        self.names.iter().position(|n| n == name).ok_or_else(|| SpecError::new(loc, format!("unknown basis element `{name}`")))
    }

    fn scalar(&self, expr: &str, loc: &str) -> Result<Scalar, SpecError> {
        self.field.parse(expr).map_err(|e| SpecError::new(loc, e))
    }

    fn vector(&self, v: &VectorSpec, loc: &str) -> Result<Vector, SpecError> {
        let mut out = Vector::zero(self.names.len());
        for (name, expr) in v {
            let at = format!("{loc}/{name}");
            let i = self.index(name, &at)?;
            out[i] = self.scalar(expr, &at)?;
        }
        Ok(out)
    }

    fn vectors(&self, vs: &[VectorSpec], loc: &str) -> Result<Vec<Vector>, SpecError> {
        vs.iter().enumerate().map(|(i, v)| self.vector(v, &format!("{loc}/{i}"))).collect()
    }
}

pub fn load(spec: &AlgebraSpec) -> Result<Loaded, SpecError> {
    if spec.schema_version != SCHEMA_VERSION {
        return Err(SpecError::new(
            "/schema_version",
            format!("unsupported schema version {} (expected {SCHEMA_VERSION})", spec.schema_version),
        ));
    }
    let field = build_field(&spec.field)?;
    let names = &spec.basis;
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(SpecError::new(format!("/basis/{i}"), format!("duplicate basis element `{n}`")));
        }
    }
    let ctx = Ctx { field: &field, names };
    let n = names.len();

    let mut brackets = BTreeMap::new();
    for (k, (a, b, v)) in spec.brackets.iter().enumerate() {
        let loc = format!("/brackets/{k}");
        let key = (ctx.index(a, &loc)?, ctx.index(b, &loc)?);
        if brackets.insert(key, ctx.vector(v, &loc)?).is_some() {
            return Err(SpecError::new(loc, format!("bracket [{a}, {b}] given twice")));
        }
    }

    let mut gram = Matrix::zero(n, n);
    let mut seen = BTreeMap::new();
    for (k, (a, b, c)) in spec.pairing.iter().enumerate() {
        let loc = format!("/pairing/{k}");
        let (i, j) = (ctx.index(a, &loc)?, ctx.index(b, &loc)?);
        let key = (i.min(j), i.max(j));
        if seen.insert(key, k).is_some() {
            return Err(SpecError::new(loc, format!("pairing ⟨{a}, {b}⟩ given twice")));
        }
        let c = ctx.scalar(c, &loc)?;
        gram[(i, j)] = c.clone();
        gram[(j, i)] = c;
    }

    let algebra = Arc::new(
        QuadraticLieAlgebra::build(names.clone(), &brackets, gram, field.clone()).map_err(|e| SpecError::structural("/", e))?,
    );
    let level = spec.level.as_deref().map(|e| ctx.scalar(e, "/level")).transpose()?;

    let pair = match &spec.isotropic_pair {
        None => None,
        Some(p) => {
            let l = ctx.vectors(&p.l, "/isotropic_pair/l")?;
            let lb = ctx.vectors(&p.lbar, "/isotropic_pair/lbar")?;
            let eps = p.divergence.as_ref().map(|v| ctx.vector(v, "/isotropic_pair/divergence")).transpose()?;
            Some(IsotropicPair::new(algebra.clone(), &l, &lb, eps).map_err(|e| SpecError::structural("/isotropic_pair", e))?)
        }
    };

    let metric = match &spec.metric {
        None => None,
        Some(m) => {
            let plus = ctx.vectors(&m.plus, "/metric/plus")?;
            let metric = GeneralizedMetric::new(algebra.clone(), &plus).map_err(|e| SpecError::structural("/metric/plus", e))?;
            let mut js = Vec::new();
            for (k, images) in m.complex_structures.iter().enumerate() {
                let loc = format!("/metric/complex_structures/{k}");
                let images = ctx.vectors(images, &loc)?;
                if images.len() != plus.len() {
                    return Err(SpecError::new(loc, "needs one image per vector of `plus`"));
                }
                let j = metric
                    .endomorphism(Side::Plus, &plus, &images)
                    .ok_or_else(|| SpecError::structural(&loc, "images do not define an endomorphism of V₊"))?;
                metric.eigenspaces(Side::Plus, &j).map_err(|e| SpecError::structural(&loc, e))?;
                js.push(j);
            }
            let divergence = m.divergence.as_ref().map(|v| ctx.vector(v, "/metric/divergence")).transpose()?;
            Some(MetricData { metric, complex_structures: js, divergence })
        }
    };

    Ok(Loaded {
        name: spec.name.clone().unwrap_or_else(|| "algebra".into()),
        field,
        algebra,
        level,
        pair,
        metric,
    })
}

pub fn load_path(path: &Path) -> Result<Loaded, SpecError> {
    load(&read(path)?)
}

/// The sparse form of a vector.
pub fn vector_spec(names: &[String], v: &Vector) -> VectorSpec {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (names[i].clone(), c.to_string())).collect()
}

/// Borrowed metric data for [`export`]: the `plus` basis, complex structures and divergence.
pub type MetricRef<'a> = (&'a [Vector], &'a [Vec<Vector>], Option<&'a Vector>);

/// Write an algebra (and optional extra data) in the specification format.
pub fn export(
    name: &str,
    alg: &QuadraticLieAlgebra,
    level: Option<&Scalar>,
    metric: Option<MetricRef<'_>>,
) -> AlgebraSpec {
    let names = alg.names().to_vec();
    let n = names.len();
    let mut brackets = Vec::new();
    let mut pairing = Vec::new();
    for i in 0..n {
        for j in i..n {
            let b = alg.bracket(&alg.basis(i), &alg.basis(j));
            if !b.is_zero() {
                brackets.push((names[i].clone(), names[j].clone(), vector_spec(&names, &b)));
            }
            let g = &alg.gram()[(i, j)];
            if !g.is_zero() {
                pairing.push((names[i].clone(), names[j].clone(), g.to_string()));
            }
        }
    }
    let metric = metric.map(|(plus, js, div)| MetricSpec {
        plus: plus.iter().map(|v| vector_spec(&names, v)).collect(),
        complex_structures: js.iter().map(|imgs| imgs.iter().map(|v| vector_spec(&names, v)).collect()).collect(),
        divergence: div.map(|v| vector_spec(&names, v)),
    });
    AlgebraSpec {
        schema_version: SCHEMA_VERSION,
        name: Some(name.to_string()),
        field: FieldSpec { params: alg.field().param_names(), radicals: Vec::new() },
        basis: names,
        brackets,
        pairing,
        level: level.map(Scalar::to_string),
        isotropic_pair: None,
        metric,
    }
}
