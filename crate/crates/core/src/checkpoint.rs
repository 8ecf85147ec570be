//! Text checkpoints for the layered enumeration.
//!
//! ```text
//! BRACEFORGE-CKPT 1
//! 4,4
//! layer=3
//! 1,0 | 1,0;0,1;0,1 | 3,0;0,1
//! ...
//! count=17
//! ```
//!
//! Each subgroup line lists a generating set. Matrix rows are also separated
//! by `;`, so a line is split on `;` and regrouped: a token containing `|`
//! opens a new element and is followed by `rank - 1` further row tokens.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::abelian::GroupSpec;
use crate::error::{Error, Result};
use crate::hol::HolElement;

pub const CHECKPOINT_HEADER: &str = "BRACEFORGE-CKPT";
pub const FORMAT_VERSION: u32 = 1;

/// One layer of the enumeration: subgroup classes given by generating sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerState {
    pub spec: GroupSpec,
    pub layer_index: usize,
    pub classes: Vec<Vec<HolElement>>,
}

impl LayerState {
    pub fn new(spec: GroupSpec, layer_index: usize) -> Self {
        LayerState {
            spec,
            layer_index,
            classes: Vec::new(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{CHECKPOINT_HEADER} {FORMAT_VERSION}\n{}\nlayer={}\n",
            self.spec, self.layer_index
        );
        for gens in &self.classes {
            let line: Vec<String> = gens.iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(";"));
            out.push('\n');
        }
        out.push_str(&format!("count={}\n", self.classes.len()));
        out
    }

    /// Parses a checkpoint, requiring its group line to equal `spec`.
    pub fn from_text(text: &str, spec: &GroupSpec) -> std::result::Result<Self, String> {
        let mut lines: Vec<&str> = text.split('\n').collect();
        if lines.last() == Some(&"") {
            lines.pop();
        } else {
            return Err("missing final newline".into());
        }
        if lines.len() < 4 {
            return Err("truncated file".into());
        }
        let header = lines[0];
        let version = header
            .strip_prefix(CHECKPOINT_HEADER)
            .map(str::trim)
            .ok_or_else(|| format!("bad header {header:?}"))?;
        if version != FORMAT_VERSION.to_string() {
            return Err(format!("unsupported version {version:?}"));
        }
        let file_spec: GroupSpec = lines[1].parse().map_err(|e| format!("bad group line: {e}"))?;
        if &file_spec != spec {
            return Err(format!("group {file_spec} does not match {spec}"));
        }
        let layer_index = lines[2]
            .strip_prefix("layer=")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| format!("bad layer line {:?}", lines[2]))?;
        let footer = lines[lines.len() - 1];
        let count: usize = footer
            .strip_prefix("count=")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| "missing count footer".to_string())?;
        let body = &lines[3..lines.len() - 1];
        if body.len() != count {
            return Err(format!("footer says {count} records, found {}", body.len()));
        }
        let classes = body
            .iter()
            .map(|line| parse_generators(spec, line))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(LayerState {
            spec: spec.clone(),
            layer_index,
            classes,
        })
    }
}

pub(crate) fn parse_generators(spec: &GroupSpec, line: &str) -> std::result::Result<Vec<HolElement>, String> {
    if line.trim().is_empty() {
        return Ok(Vec::new());
    }
    let tokens: Vec<&str> = line.split(';').collect();
    let rank = spec.rank();
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        if !tokens[i].contains('|') || i + rank > tokens.len() {
            return Err(format!("malformed generator list {line:?}"));
        }
        let text = tokens[i..i + rank].join(";");
        out.push(HolElement::parse(spec, &text).map_err(|e| e.to_string())?);
        i += rank;
    }
    Ok(out)
}

/// Writes `state` atomically (temporary file and rename).
pub fn checkpoint_save(state: &LayerState, path: &Path) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let mut file = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    file.write_all(state.to_text().as_bytes())
        .map_err(|e| Error::io(&tmp, e))?;
    file.sync_all().map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn checkpoint_load(path: &Path, spec: &GroupSpec) -> Result<LayerState> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    LayerState::from_text(&text, spec).map_err(|reason| Error::integrity(path, reason))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hol::Holomorph;

    fn sample() -> LayerState {
        let spec: GroupSpec = "2,4".parse().unwrap();
        let hol = Holomorph::new(spec.clone());
        let mut state = LayerState::new(spec.clone(), 2);
        state.classes.push(hol.translation_generators());
        state.classes.push(Vec::new());
        state
            .classes
            .push(vec![HolElement::parse(&spec, "1,3 | 1,0;2,1").unwrap(), hol.identity()]);
        state
    }

    #[test]
    fn roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("layer.ckpt");
        let state = sample();
        checkpoint_save(&state, &path).unwrap();
        assert_eq!(checkpoint_load(&path, &state.spec).unwrap(), state);
        let empty = LayerState::new(state.spec.clone(), 0);
        checkpoint_save(&empty, &path).unwrap();
        assert_eq!(checkpoint_load(&path, &state.spec).unwrap(), empty);
    }

    #[test]
    fn rank_one_elements() {
        let spec: GroupSpec = "4".parse().unwrap();
        let mut state = LayerState::new(spec.clone(), 1);
        state.classes.push(vec![
            HolElement::parse(&spec, "1 | 3").unwrap(),
            HolElement::parse(&spec, "2 | 1").unwrap(),
        ]);
        assert_eq!(LayerState::from_text(&state.to_text(), &spec).unwrap(), state);
    }

    #[test]
    fn integrity_failures() {
        let state = sample();
        let text = state.to_text();
        let spec = &state.spec;
        let other: GroupSpec = "8".parse().unwrap();
        assert!(LayerState::from_text(&text, &other).is_err());
        assert!(LayerState::from_text(&text.replace("CKPT 1", "CKPT 2"), spec).is_err());
        // drop the footer
        let cut = text.rfind("count=").unwrap();
        assert!(LayerState::from_text(&text[..cut], spec).is_err());
        // drop one record but keep the footer
        let mut lines: Vec<&str> = text.lines().collect();
        lines.remove(4);
        let short = lines.join("\n") + "\n";
        assert!(LayerState::from_text(&short, spec).is_err());
        assert!(LayerState::from_text(&text.replace(" | ", " "), spec).is_err());

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.ckpt");
        fs::write(&path, &text[..cut]).unwrap();
        match checkpoint_load(&path, spec) {
            Err(Error::Integrity { path: p, .. }) => assert_eq!(p, path),
            other => panic!("{other:?}"),
        }
    }
}
