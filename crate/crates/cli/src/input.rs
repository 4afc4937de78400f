//! Reading documents from files or embedded fixtures.

use std::path::Path;

use ql_bridge_core::contextuality::ObservableConstraintSystem;
use ql_bridge_core::hilbert::HilbertDoc;
use ql_bridge_core::language::{Fragment, Signature, Wff};
use ql_bridge_core::order::OrthoStructure;
use ql_bridge_core::probability::{
    born_model_synthesize, MuContextDoc, MuContextModel, Synthesis, SynthesisOptions,
};
use ql_bridge_core::semantics::{ClassicalModel, ModelDoc};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{CliError, Result};
use crate::fixtures;

/// A loaded document and the name it is reported under.
pub struct Source {
    pub label: String,
    pub text: String,
}

impl Source {
    pub fn open(name: &str) -> Result<Source> {
        let path = Path::new(name);
        if path.is_file() {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::input(format!("{name}: {e}")))?;
            return Ok(Source {
                label: name.to_string(),
                text,
            });
        }
        match fixtures::get(name) {
            Some(text) => Ok(Source {
                label: format!("fixture:{}", name.strip_suffix(".json").unwrap_or(name)),
                text: text.to_string(),
            }),
            None => Err(CliError::input(format!(
                "{name}: no such file or shipped fixture (fixtures: {})",
                fixtures::names().collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    pub fn json<T: DeserializeOwned>(&self) -> Result<T> {
        serde_json::from_str(&self.text)
            .map_err(|e| CliError::input(format!("{}: {e}", self.label)))
    }

    pub fn value(&self) -> Result<Value> {
        self.json()
    }

    fn has_key(&self, key: &str) -> Result<bool> {
        Ok(self.value()?.get(key).is_some())
    }

    pub fn is_hilbert(&self) -> Result<bool> {
        self.has_key("dim")
    }
}

/// Shared knobs for documents that may need building first.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub tolerance: Option<f64>,
    pub budget: Option<u64>,
    pub resolution: usize,
}

pub fn classical(name: &str) -> Result<ClassicalModel> {
    let src = Source::open(name)?;
    if src.is_hilbert()? {
        return Err(CliError::input(format!(
            "{}: a Hilbert document has no classical model; run `prob synthesize` first",
            src.label
        )));
    }
    let doc = match src.value()?.get("model") {
        Some(inner) => serde_json::from_value::<ModelDoc>(inner.clone())
            .map_err(|e| CliError::input(format!("{}: model: {e}", src.label)))?,
        None => src.json::<ModelDoc>()?,
    };
    ClassicalModel::from_doc(doc).map_err(|e| CliError::from(e).context(&src.label))
}

pub fn hilbert(name: &str, s: Settings) -> Result<HilbertDoc> {
    let src = Source::open(name)?;
    let mut doc: HilbertDoc = src.json()?;
    if let Some(t) = s.tolerance {
        doc.tolerance = t;
    }
    if let Some(b) = s.budget {
        doc.budget = usize::try_from(b).unwrap_or(usize::MAX);
    }
    Ok(doc)
}

pub fn synthesize(
    doc: &HilbertDoc,
    s: Settings,
    close: bool,
    max_states: Option<usize>,
) -> Result<Synthesis> {
    let space = doc.space()?;
    let states = doc.states()?;
    let projections = doc.projections()?;
    let defaults = SynthesisOptions::default();
    let opts = SynthesisOptions {
        resolution: s.resolution,
        close_post_measurement: close,
        max_states: max_states.unwrap_or(defaults.max_states),
        tolerance: None,
    };
    Ok(born_model_synthesize(&space, &states, &projections, opts)?)
}

/// A mu-contextual model, synthesized when the document is a Hilbert one.
pub fn mu_model(name: &str, s: Settings) -> Result<MuContextModel> {
    let src = Source::open(name)?;
    let mut m = if src.is_hilbert()? {
        synthesize(&hilbert(name, s)?, s, true, None)
            .map_err(|e| e.context(&src.label))?
            .model
    } else {
        let doc: MuContextDoc = src.json()?;
        MuContextModel::from_doc(doc).map_err(|e| CliError::from(e).context(&src.label))?
    };
    if let Some(t) = s.tolerance {
        m.set_tolerance(t);
    }
    Ok(m)
}

/// A signature from a signature document, or from any model document.
pub fn signature(name: &str) -> Result<Signature> {
    let src = Source::open(name)?;
    let v = src.value()?;
    let sig = v
        .get("model")
        .and_then(|m| m.get("signature"))
        .or_else(|| v.get("signature"))
        .unwrap_or(&v);
    serde_json::from_value(sig.clone())
        .map_err(|e| CliError::input(format!("{}: signature: {e}", src.label)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeDoc {
    elements: Vec<String>,
    order: Vec<(String, String)>,
    ortho: Vec<(String, String)>,
}

/// An ortho structure from a lattice document or a Hilbert document.
pub fn ortho_structure(name: &str, s: Settings) -> Result<OrthoStructure> {
    let src = Source::open(name)?;
    if src.is_hilbert()? {
        let doc = hilbert(name, s)?;
        return Ok(doc
            .lattice()
            .map_err(|e| CliError::from(e).context(&src.label))?
            .to_ortho_structure());
    }
    let doc: LatticeDoc = src.json()?;
    OrthoStructure::from_pairs(doc.elements, &doc.order, &doc.ortho)
        .map_err(|e| CliError::from(e).context(&src.label))
}

pub fn constraint_system(name: &str) -> Result<ObservableConstraintSystem> {
    Source::open(name)?.json()
}

pub fn fragment_for(text: &str, requested: Option<Fragment>) -> Fragment {
    requested.unwrap_or(if text.contains('[') {
        Fragment::Contextual
    } else {
        Fragment::Basic
    })
}

pub fn formula(text: &str, sig: &Signature, fragment: Option<Fragment>) -> Result<Wff> {
    ql_bridge_core::language::parse(text, sig, fragment_for(text, fragment))
        .map_err(|e| CliError::from(e).context(&format!("formula `{text}`")))
}
