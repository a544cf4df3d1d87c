//! Graph arguments: a file in edge-list or JSON format, or a builtin name.

use std::path::Path;

use anyhow::{Context, Result};
use slowcolor::graph::load_graph;
use slowcolor::Instance;

pub fn resolve(spec: &str) -> Result<Instance> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
        let graph = load_graph(&text).with_context(|| format!("parsing {spec}"))?;
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| spec.to_string());
        return Ok(Instance::new(name, graph));
    }
    Instance::builtin(spec).with_context(|| format!("'{spec}' is neither a readable file nor a builtin graph"))
}
