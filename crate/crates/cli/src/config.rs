use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::Value;

use jtype_core::spectral::KrallSpec;
use jtype_core::{BilinearConfig, Error, FamilyConfig, Mode, Result};

/// Contents of a `--config` file for the family commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub family: FamilyConfig,
    pub bilinear: Option<BilinearConfig>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RunJson {
    family: Value,
    #[serde(default)]
    bilinear: Option<Value>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Config(format!("{what}: {e}")))
}

impl RunConfig {
    /// Accepts `{"family": ..., "bilinear": ...}` or a bare family object.
    /// A string `family` is a path relative to the config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = read(path)?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let is_wrapped = v.get("family").is_some();
        if !is_wrapped {
            return Ok(Self { family: parse(v, "family")?, bilinear: None });
        }
        let run: RunJson = parse(v, "config")?;
        let family = match run.family {
            Value::String(rel) => {
                let p: PathBuf = path.parent().unwrap_or(Path::new(".")).join(rel);
                FamilyConfig::from_json(&read(&p)?)?
            }
            other => parse(other, "family")?,
        };
        let bilinear = run.bilinear.map(|b| parse(b, "bilinear")).transpose()?;
        Ok(Self { family, bilinear })
    }

    /// The configured weights, with the mode overridden by `mode` when given.
    /// Without a bilinear section all weights are one.
    pub fn bilinear(&self, mode: Option<Mode>) -> Result<BilinearConfig> {
        let mut b = match &self.bilinear {
            Some(b) => b.clone(),
            None => BilinearConfig::unit(&self.family, mode.unwrap_or(Mode::Generic)),
        };
        if let Some(m) = mode {
            b.mode = m;
        }
        b.validate(&self.family)?;
        Ok(b)
    }
}

pub fn load_krall(path: &Path) -> Result<KrallSpec> {
    let spec: KrallSpec = serde_json::from_str(&read(path)?).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    spec.validate()?;
    Ok(spec)
}
