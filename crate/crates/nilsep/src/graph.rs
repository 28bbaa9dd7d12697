//! Graph-of-groups files.
//!
//! ```text
//! vertex u heisenberg.pc
//! vertex v heisenberg.pc
//! edge u v gens-in-u: c^1 gens-in-v: c^1
//! ```
//!
//! Group files are resolved relative to the graph file. Generator lists are
//! `;`-separated words; the `i`-th generator in the first vertex is
//! identified with the `i`-th one in the second.

use std::fs;
use std::path::Path;

use nilsep_core::criteria::GraphInstance;
use nilsep_core::PrimeSet;

use crate::error::{Error, Result};
use crate::format::{parse_word_list, read_presentation};

pub fn read_graph(path: &Path, primes: PrimeSet) -> Result<GraphInstance> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_graph(&text, base, primes)
}

pub fn parse_graph(text: &str, base: &Path, primes: PrimeSet) -> Result<GraphInstance> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let t: Vec<&str> = l.split_whitespace().collect();
        match t[0] {
            "vertex" => {
                if t.len() != 3 {
                    return Err(Error::parse(line, "expected `vertex <name> <groupfile>`"));
                }
                if vertices.iter().any(|(n, _)| n == t[1]) {
                    return Err(Error::parse(line, format!("duplicate vertex `{}`", t[1])));
                }
                let x = read_presentation(&base.join(t[2]))?;
                vertices.push((t[1].to_string(), x));
            }
            "edge" => {
                if t.len() < 3 {
                    return Err(Error::parse(line, "expected `edge <v> <w> gens-in-<v>: ... gens-in-<w>: ...`"));
                }
                let find = |name: &str| {
                    vertices
                        .iter()
                        .position(|(n, _)| n == name)
                        .ok_or_else(|| Error::parse(line, format!("unknown vertex `{name}`")))
                };
                let (v, w) = (find(t[1])?, find(t[2])?);
                let mv = format!("gens-in-{}:", t[1]);
                let mw = format!("gens-in-{}:", t[2]);
                let sv = l.find(&mv).ok_or_else(|| Error::parse(line, format!("missing `{mv}`")))?;
                let rest = &l[sv + mv.len()..];
                let sw = rest.find(&mw).ok_or_else(|| Error::parse(line, format!("missing `{mw}`")))?;
                let gv = parse_word_list(&vertices[v].1, &rest[..sw]).map_err(|e| Error::parse(line, e.to_string()))?;
                let gw = parse_word_list(&vertices[w].1, &rest[sw + mw.len()..]).map_err(|e| Error::parse(line, e.to_string()))?;
                if gv.len() != gw.len() {
                    return Err(Error::parse(line, format!("{} generators against {}", gv.len(), gw.len())));
                }
                edges.push((v, w, gv, gw));
            }
            other => return Err(Error::parse(line, format!("unknown keyword `{other}`"))),
        }
    }
    Ok(GraphInstance::new(vertices, edges, primes)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::write_presentation;
    use nilsep_core::criteria::check_graph_central;
    use nilsep_core::pc::fixtures::heisenberg;

    #[test]
    fn two_heisenberg_vertices() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("h.pc"), write_presentation(&heisenberg())).unwrap();
        let text = "vertex u h.pc\nvertex v h.pc\nedge u v gens-in-u: c^1 gens-in-v: c^1\n";
        fs::write(dir.path().join("g.graph"), text).unwrap();
        let g = read_graph(&dir.path().join("g.graph"), PrimeSet::single(2).unwrap()).unwrap();
        assert_eq!(g.edges.len(), 1);
        assert!(check_graph_central(&g).unwrap().is_yes());
        let bad = "vertex u h.pc\nedge u w gens-in-u: c^1 gens-in-w: c^1\n";
        assert!(parse_graph(bad, dir.path(), PrimeSet::All).is_err());
        let bad = "vertex u h.pc\nvertex v h.pc\nedge u v gens-in-u: c^1; a^1 gens-in-v: c^1\n";
        assert!(parse_graph(bad, dir.path(), PrimeSet::All).is_err());
    }
}
