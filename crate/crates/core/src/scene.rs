//! JSON scene descriptions and the builtin scenes.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ExprContext, Result};
use crate::expr::{Bindings, Expression};
use crate::laplace::{Grid, CLASSIFY_REL_TOL};
use crate::oracle::OracleConfig;
use crate::relnorm::SupportField;
use crate::surface::{InvariantTriple, Surface, DEFAULT_STEP};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantSource {
    pub kappa: String,
    pub delta: String,
    pub lambda: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SupportSource {
    General { q: String },
    Conoidal { f: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Relative tolerance of the image classification.
    pub classify: f64,
    /// Bound on `max ‖L_v‖` when `L` is predicted constant along rulings.
    pub ruling_constant: f64,
    /// Lower bound on `max ‖L_v‖` when it is predicted not to vanish.
    pub ruling_varying: f64,
    /// Bound on the curvature of a straight image curve.
    pub curvature: f64,
    /// Relative bound on oracle deviations.
    pub oracle: f64,
    /// Step of the frame integration.
    pub frame_step: f64,
    pub oracle_config: OracleConfig,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            classify: CLASSIFY_REL_TOL,
            ruling_constant: 1e-9,
            ruling_varying: 1e-3,
            curvature: 1e-8,
            oracle: 1e-6,
            frame_step: DEFAULT_STEP,
            oracle_config: OracleConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneConfig {
    #[serde(default)]
    pub name: String,
    pub invariants: InvariantSource,
    pub support: SupportSource,
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
    pub domain: Grid,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    /// Evaluation points for `eval`; the grid is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 2]>>,
    /// Properties the scene is expected to have, checked by `verify`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<String>,
    /// Expected constant image point under the canonical frame.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_point: Option<[f64; 3]>,
}

const BUILTINS: [(&str, &str); 6] = [
    ("helicoid", include_str!("../scenes/helicoid.json")),
    ("example1", include_str!("../scenes/example1.json")),
    ("example2", include_str!("../scenes/example2.json")),
    ("prop2", include_str!("../scenes/prop2.json")),
    ("prop6f", include_str!("../scenes/prop6f.json")),
    ("sect4c", include_str!("../scenes/sect4c.json")),
];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|(n, _)| *n)
}

pub fn builtin(name: &str) -> Option<SceneConfig> {
    BUILTINS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, src)| SceneConfig::from_json(src).expect("builtin scenes are valid"))
}

impl SceneConfig {
    pub fn from_json(src: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(src).map_err(|e| Error::InvalidInput(format!("scene JSON: {e}")))?;
        cfg.domain.validate()?;
        Ok(cfg)
    }

    /// Loads a builtin scene by name, or a JSON file by path.
    pub fn load(name_or_path: &str) -> Result<Self> {
        if let Some(cfg) = builtin(name_or_path) {
            return Ok(cfg);
        }
        let path = Path::new(name_or_path);
        let src = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read scene `{}`: {e}", path.display())))?;
        let mut cfg = Self::from_json(&src)?;
        if cfg.name.is_empty() {
            cfg.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serializes")
    }

    pub fn has_claim(&self, claim: &str) -> bool {
        self.claims.iter().any(|c| c == claim)
    }

    pub fn build(&self) -> Result<Scene> {
        let constants: Bindings = self.constants.clone();
        let inv = InvariantTriple::parse(
            &self.invariants.kappa,
            &self.invariants.delta,
            &self.invariants.lambda,
            (self.domain.u_min, self.domain.u_max),
            constants.clone(),
        )?;
        let support = match &self.support {
            SupportSource::General { q } => SupportField::parse_general(q, constants)?,
            SupportSource::Conoidal { f } => SupportField::parse_conoidal(f, constants)?,
        };
        let surface = Surface::new(inv, self.tolerances.frame_step)?;
        Ok(Scene { config: self.clone(), surface, support })
    }
}

/// A scene with its surface integrated and support function parsed.
#[derive(Debug, Clone)]
pub struct Scene {
    pub config: SceneConfig,
    pub surface: Surface,
    pub support: SupportField,
}

impl Scene {
    pub fn grid(&self) -> &Grid {
        &self.config.domain
    }

    pub fn invariants(&self) -> &InvariantTriple {
        self.surface.invariants()
    }

    /// `f` when the support function has the form `f / w`.
    pub fn conoidal_f(&self) -> Option<&Expression> {
        self.support.conoidal_f()
    }

    /// Whether `|κ|` stays below `tol` on the grid's `u` samples.
    pub fn kappa_vanishes(&self, tol: f64) -> Result<bool> {
        for u in self.grid().us() {
            if self.invariants().jets(u)?.kappa.value.abs() > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `|κ|` stays above `tol` on the grid's `u` samples.
    pub fn kappa_nonvanishing(&self, tol: f64) -> Result<bool> {
        for u in self.grid().us() {
            if self.invariants().jets(u)?.kappa.value.abs() <= tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Parses `src` as an expression in `u` against the scene's constants.
    pub fn parse_in_u(&self, field: &'static str, src: &str) -> Result<Expression> {
        let e = Expression::parse(src).field(field)?;
        e.check(&[crate::expr::Var::U], &self.invariants().constants).field(field)?;
        Ok(e)
    }
}
