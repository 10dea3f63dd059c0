use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};

use spectra_core::graph::{parse_digraph6, parse_graph6};
use spectra_core::{Digraph, Graph, VertexPartition};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionArg {
    Degree,
    /// Unvalidated class list, checked once the order is known.
    Explicit(String),
}

pub fn parse_partition_arg(s: &str) -> Result<PartitionArg, String> {
    match s.split_once(':') {
        None if s == "degree" => Ok(PartitionArg::Degree),
        Some(("explicit", spec)) if !spec.trim().is_empty() => Ok(PartitionArg::Explicit(spec.to_string())),
        _ => Err(format!("expected `degree` or `explicit:<classes>`, got `{s}`")),
    }
}

impl PartitionArg {
    pub fn resolve(&self, degree: VertexPartition) -> Result<VertexPartition> {
        match self {
            PartitionArg::Degree => Ok(degree),
            PartitionArg::Explicit(spec) => {
                VertexPartition::parse(degree.order(), spec).with_context(|| format!("--partition explicit:{spec}"))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum Input {
    Graph(Graph),
    Digraph(Digraph),
}

impl Input {
    pub fn order(&self) -> usize {
        match self {
            Input::Graph(g) => g.order(),
            Input::Digraph(d) => d.order(),
        }
    }

    pub fn code(&self) -> String {
        match self {
            Input::Graph(g) => g.to_graph6(),
            Input::Digraph(d) => d.to_digraph6(),
        }
    }

    pub fn degree_partition(&self) -> VertexPartition {
        match self {
            Input::Graph(g) => g.degree_partition(),
            Input::Digraph(d) => d.degree_partition(),
        }
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// First graph6 or digraph6 line of the file.
pub fn read_input(path: &Path) -> Result<Input> {
    let text = read_text(path)?;
    let Some((k, line)) =
        text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())).find(|(_, l)| !l.is_empty() && !l.starts_with('#'))
    else {
        bail!("{}: no graph found", path.display());
    };
    let at = || format!("{}:{k}", path.display());
    if line.starts_with('&') {
        parse_digraph6(line).map(Input::Digraph).with_context(at)
    } else {
        parse_graph6(line).map(Input::Graph).with_context(at)
    }
}

pub fn read_pair(a: &Path, b: &Path) -> Result<(Input, Input)> {
    if a.as_os_str() == "-" && b.as_os_str() == "-" {
        bail!("only one input may be read from stdin");
    }
    let (x, y) = (read_input(a)?, read_input(b)?);
    match (&x, &y) {
        (Input::Graph(_), Input::Graph(_)) | (Input::Digraph(_), Input::Digraph(_)) => {}
        _ => bail!("cannot compare a graph with a digraph"),
    }
    if x.order() != y.order() {
        bail!("inputs have {} and {} vertices", x.order(), y.order());
    }
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_args() {
        assert_eq!(parse_partition_arg("degree"), Ok(PartitionArg::Degree));
        assert_eq!(parse_partition_arg("explicit:0,1;2"), Ok(PartitionArg::Explicit("0,1;2".into())));
        assert!(parse_partition_arg("explicit:").is_err());
        assert!(parse_partition_arg("classes").is_err());
    }

    #[test]
    fn explicit_partition_is_validated() {
        let arg = PartitionArg::Explicit("0,1;1,2".into());
        assert!(arg.resolve(VertexPartition::trivial(3)).is_err());
        let ok = PartitionArg::Explicit("0,2;1".into()).resolve(VertexPartition::trivial(3)).unwrap();
        assert_eq!(ok.len(), 2);
    }
}
