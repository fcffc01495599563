//! Model parameter files: a small sectioned text format.
//!
//! ```text
//! [model]
//! kind = counts        # counts | bisection | cuts | motif
//! n = 8
//! m = 4
//! seed = 7
//!
//! [counts]
//! T = 1
//! alpha = 0.9, 0.1, 0
//! repeats_mode = sample   # sample | zero
//! ```
//!
//! Sections `[bisection]` (keys `q`, `repeats_mode`), `[cuts]` (key `alpha`)
//! and `[motif]` (keys `motif_edges`, `alpha4`) configure the other model
//! kinds. Unknown sections or keys are errors that name the offender.

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{
    sample_bisection, sample_counts, sample_cuts, sample_motif, Assignment, BisectionParams,
    CountsParams, CutsParams, Motif, MotifParams,
};
use crate::tensor::SymmetricTensor;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Counts,
    Bisection,
    Cuts,
    Motif,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Counts => "counts",
            ModelKind::Bisection => "bisection",
            ModelKind::Cuts => "cuts",
            ModelKind::Motif => "motif",
        }
    }
}

#[derive(Clone, Debug)]
pub enum ModelParams {
    Counts(CountsParams<f64>),
    Bisection(BisectionParams<f64>),
    Cuts(CutsParams<f64>),
    Motif(MotifParams<f64>),
}

#[derive(Clone, Debug)]
pub struct ModelConfig {
    pub kind: ModelKind,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub params: ModelParams,
}

impl ModelConfig {
    /// Draw one affinity tensor for the configured model.
    pub fn sample<R: Rng>(&self, y_star: &Assignment, rng: &mut R) -> Result<SymmetricTensor<f64>> {
        match &self.params {
            ModelParams::Counts(p) => sample_counts(p, y_star, rng),
            ModelParams::Bisection(p) => sample_bisection(p, y_star, rng, self.m),
            ModelParams::Cuts(p) => sample_cuts(p, y_star, rng),
            ModelParams::Motif(p) => sample_motif(p, y_star, rng),
        }
    }
}

fn bad_key(key: &str, message: impl Into<String>) -> Error {
    Error::InvalidParam {
        key: key.to_string(),
        message: message.into(),
    }
}

/// Section name with its key/value pairs, in file order.
pub type Section = (String, Vec<(String, String)>);

/// Raw section/key/value view of the file, shared with the sweep-grid
/// parser in the CLI.
pub fn parse_sections(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (lineno0, raw) in text.lines().enumerate() {
        let lineno = lineno0 + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if !line.ends_with(']') {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("malformed section header `{line}`"),
                });
            }
            sections.push((line[1..line.len() - 1].trim().to_string(), Vec::new()));
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("expected `key = value`, found `{line}`"),
        })?;
        let section = sections.last_mut().ok_or_else(|| Error::Parse {
            line: lineno,
            message: "key appears before any [section]".into(),
        })?;
        section
            .1
            .push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(sections)
}

fn parse_f64_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|_| bad_key(key, format!("bad number `{}`", f.trim())))
        })
        .collect()
}

fn parse_edges(value: &str) -> Result<Vec<(usize, usize)>> {
    let value = value.trim();
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|e| {
            let e = e.trim();
            let (a, b) = e
                .split_once("->")
                .ok_or_else(|| bad_key("motif_edges", format!("edge `{e}` is not `i->j`")))?;
            let a = a
                .trim()
                .parse::<usize>()
                .map_err(|_| bad_key("motif_edges", format!("bad vertex `{}`", a.trim())))?;
            let b = b
                .trim()
                .parse::<usize>()
                .map_err(|_| bad_key("motif_edges", format!("bad vertex `{}`", b.trim())))?;
            Ok((a, b))
        })
        .collect()
}

fn parse_repeats_mode(value: &str) -> Result<bool> {
    match value {
        "sample" => Ok(false),
        "zero" => Ok(true),
        other => Err(bad_key(
            "repeats_mode",
            format!("expected `sample` or `zero`, got `{other}`"),
        )),
    }
}

pub fn parse_model_config(text: &str) -> Result<ModelConfig> {
    let sections = parse_sections(text)?;

    let mut kind: Option<ModelKind> = None;
    let mut n: Option<usize> = None;
    let mut m: Option<usize> = None;
    let mut seed: u64 = 0;

    let model_section = sections
        .iter()
        .find(|(name, _)| name == "model")
        .ok_or_else(|| bad_key("model", "missing [model] section"))?;
    for (key, value) in &model_section.1 {
        match key.as_str() {
            "kind" => {
                kind = Some(match value.as_str() {
                    "counts" => ModelKind::Counts,
                    "bisection" => ModelKind::Bisection,
                    "cuts" => ModelKind::Cuts,
                    "motif" => ModelKind::Motif,
                    other => {
                        return Err(bad_key("kind", format!("unknown model kind `{other}`")))
                    }
                })
            }
            "n" => {
                n = Some(
                    value
                        .parse()
                        .map_err(|_| bad_key("n", format!("bad count `{value}`")))?,
                )
            }
            "m" => {
                m = Some(
                    value
                        .parse()
                        .map_err(|_| bad_key("m", format!("bad order `{value}`")))?,
                )
            }
            "seed" => {
                seed = value
                    .parse()
                    .map_err(|_| bad_key("seed", format!("bad seed `{value}`")))?
            }
            other => return Err(bad_key(other, "unknown key in [model]")),
        }
    }
    let kind = kind.ok_or_else(|| bad_key("kind", "missing model kind"))?;
    let n = n.ok_or_else(|| bad_key("n", "missing entity count"))?;

    let find_section = |name: &str| -> Result<&Vec<(String, String)>> {
        sections
            .iter()
            .find(|(s, _)| s == name)
            .map(|(_, kv)| kv)
            .ok_or_else(|| bad_key(name, format!("missing [{name}] section")))
    };

    // Reject stray sections early so typos are named.
    for (name, _) in &sections {
        if !matches!(name.as_str(), "model" | "counts" | "bisection" | "cuts" | "motif") {
            return Err(bad_key(name, "unknown section"));
        }
    }

    let (m, params) = match kind {
        ModelKind::Counts => {
            let mut alpha: Option<Vec<f64>> = None;
            let mut trials: u32 = 1;
            let mut zero_repeats = false;
            for (key, value) in find_section("counts")? {
                match key.as_str() {
                    "alpha" => alpha = Some(parse_f64_list("alpha", value)?),
                    "T" => {
                        trials = value
                            .parse()
                            .map_err(|_| bad_key("T", format!("bad count `{value}`")))?
                    }
                    "repeats_mode" => zero_repeats = parse_repeats_mode(value)?,
                    other => return Err(bad_key(other, "unknown key in [counts]")),
                }
            }
            let alpha = alpha.ok_or_else(|| bad_key("alpha", "missing counting weights"))?;
            let params = CountsParams {
                alpha_compact: alpha,
                trials,
                zero_repeats,
            };
            let order = params.order();
            if let Some(declared) = m {
                if declared != order {
                    return Err(bad_key(
                        "m",
                        format!("declared m={declared} but alpha implies m={order}"),
                    ));
                }
            }
            (order, ModelParams::Counts(params))
        }
        ModelKind::Bisection => {
            let mut q: Option<f64> = None;
            let mut zero_repeats = false;
            for (key, value) in find_section("bisection")? {
                match key.as_str() {
                    "q" => {
                        q = Some(
                            value
                                .parse()
                                .map_err(|_| bad_key("q", format!("bad number `{value}`")))?,
                        )
                    }
                    "repeats_mode" => zero_repeats = parse_repeats_mode(value)?,
                    other => return Err(bad_key(other, "unknown key in [bisection]")),
                }
            }
            let q = q.ok_or_else(|| bad_key("q", "missing activation parameter"))?;
            let m = m.ok_or_else(|| bad_key("m", "bisection model needs an explicit order"))?;
            (m, ModelParams::Bisection(BisectionParams { q, zero_repeats }))
        }
        ModelKind::Cuts => {
            let mut alpha: Option<Vec<f64>> = None;
            for (key, value) in find_section("cuts")? {
                match key.as_str() {
                    "alpha" => alpha = Some(parse_f64_list("alpha", value)?),
                    other => return Err(bad_key(other, "unknown key in [cuts]")),
                }
            }
            let alpha = alpha.ok_or_else(|| bad_key("alpha", "missing hypergraph weights"))?;
            if let Some(declared) = m {
                if declared != 4 {
                    return Err(bad_key("m", "cut model is order 4"));
                }
            }
            (
                4,
                ModelParams::Cuts(CutsParams {
                    alpha_compact: alpha,
                    n,
                }),
            )
        }
        ModelKind::Motif => {
            let mut edges: Option<Vec<(usize, usize)>> = None;
            let mut alpha4: Option<Vec<f64>> = None;
            for (key, value) in find_section("motif")? {
                match key.as_str() {
                    "motif_edges" => edges = Some(parse_edges(value)?),
                    "alpha4" => alpha4 = Some(parse_f64_list("alpha4", value)?),
                    other => return Err(bad_key(other, "unknown key in [motif]")),
                }
            }
            let edges = edges.ok_or_else(|| bad_key("motif_edges", "missing motif edges"))?;
            let alpha4 = alpha4.ok_or_else(|| bad_key("alpha4", "missing edge probabilities"))?;
            if alpha4.len() != 4 {
                return Err(bad_key("alpha4", "need exactly 4 probabilities"));
            }
            let m = m.ok_or_else(|| bad_key("m", "motif model needs an explicit order"))?;
            let motif = Motif::from_edges(m, &edges)?;
            (
                m,
                ModelParams::Motif(MotifParams {
                    motif,
                    alpha4: [alpha4[0], alpha4[1], alpha4[2], alpha4[3]],
                }),
            )
        }
    };

    Ok(ModelConfig {
        kind,
        n,
        m,
        seed,
        params,
    })
}
